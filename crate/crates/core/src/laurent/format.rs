//! Text format for graded R-modules.
//!
//! ```text
//! grading even
//! kind fg
//! group
//! <relation matrix>
//! x
//! <matrix of x on the generators>
//! grading odd
//! kind laurent
//! laurent-presentation
//! <rows cols>
//! <entries separated by "; ">
//! ```
//!
//! Matrices use the shared `rows cols` header. A missing block is the zero
//! module. [`write_module`] always emits both blocks in canonical form, so
//! parsing its output and writing again is the identity on text.

use crate::abelian::FgAbGroup;
use crate::error::{Error, Result};
use crate::laurent::module::{GradedRModule, RModule, RModuleFg, RModulePres};
use crate::laurent::poly::{LaurentMatrix, LaurentPoly};
use crate::matrix::{parse_ints, LineCursor};

fn expect_keyword<'a>(cursor: &mut LineCursor<'a>, key: &str) -> Result<&'a str> {
    let no = cursor.line_no();
    let line = cursor
        .next_line()
        .ok_or_else(|| Error::parse(no, 1, format!("expected `{key}`")))?;
    match line.strip_prefix(key) {
        Some("") => Ok(""),
        Some(rest) if rest.starts_with(' ') => Ok(&rest[1..]),
        _ => Err(Error::parse(no, 1, format!("expected `{key}`, found `{line}`"))),
    }
}

fn read_laurent_matrix(cursor: &mut LineCursor<'_>) -> Result<LaurentMatrix> {
    let no = cursor.line_no();
    let header = cursor
        .next_line()
        .ok_or_else(|| Error::parse(no, 1, "missing `rows cols` header"))?;
    let dims = parse_ints(header, no)?;
    if dims.len() != 2 {
        return Err(Error::parse(no, 1, "expected `rows cols`"));
    }
    let dim = |v: &crate::Int| {
        usize::try_from(v.clone()).map_err(|_| Error::parse(no, 1, "dimension must be non-negative"))
    };
    let (rows, cols) = (dim(&dims[0])?, dim(&dims[1])?);
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows {
        let no = cursor.line_no();
        let line = cursor
            .next_line()
            .ok_or_else(|| Error::parse(no, 1, format!("expected {rows} matrix rows")))?;
        let mut col = 1;
        let mut count = 0;
        if cols > 0 {
            for entry in line.split("; ") {
                data.push(LaurentPoly::parse(entry, no, col)?);
                col += entry.chars().count() + 2;
                count += 1;
            }
        } else if !line.is_empty() {
            return Err(Error::parse(no, 1, "expected an empty row"));
        }
        if count != cols {
            return Err(Error::parse(no, 1, format!("expected {cols} entries, found {count}")));
        }
    }
    LaurentMatrix::new(rows, cols, data)
}

fn read_block(cursor: &mut LineCursor<'_>) -> Result<RModule> {
    let no = cursor.line_no();
    match expect_keyword(cursor, "kind")? {
        "fg" => {
            expect_keyword(cursor, "group")?;
            let relations = cursor.read_matrix()?;
            expect_keyword(cursor, "x")?;
            let x = cursor.read_matrix()?;
            let group = FgAbGroup::from_presentation(relations);
            Ok(RModule::Fg(RModuleFg::new(group, x)?))
        }
        "laurent" => {
            expect_keyword(cursor, "laurent-presentation")?;
            Ok(RModule::Pres(RModulePres::new(read_laurent_matrix(cursor)?)))
        }
        other => Err(Error::parse(no, 6, format!("unknown kind `{other}`"))),
    }
}

pub fn parse_module(text: &str) -> Result<GradedRModule> {
    let lines: Vec<&str> = text.lines().collect();
    let mut cursor = LineCursor::new(&lines, 0);
    let mut even: Option<RModule> = None;
    let mut odd: Option<RModule> = None;
    while let Some(line) = cursor.peek() {
        if line.trim().is_empty() {
            cursor.next_line();
            continue;
        }
        let no = cursor.line_no();
        let which = expect_keyword(&mut cursor, "grading")?;
        let slot = match which {
            "even" => &mut even,
            "odd" => &mut odd,
            other => return Err(Error::parse(no, 9, format!("unknown grading `{other}`"))),
        };
        if slot.is_some() {
            return Err(Error::parse(no, 1, format!("duplicate `grading {which}` block")));
        }
        *slot = Some(read_block(&mut cursor)?);
    }
    Ok(GradedRModule::new(
        even.unwrap_or_else(RModule::zero),
        odd.unwrap_or_else(RModule::zero),
    ))
}

fn write_block(out: &mut String, name: &str, m: &RModule) {
    out.push_str(&format!("grading {name}\n"));
    match m {
        RModule::Fg(f) => {
            out.push_str("kind fg\ngroup\n");
            out.push_str(&f.group().relations().to_text());
            out.push_str("x\n");
            out.push_str(&f.x().matrix().to_text());
        }
        RModule::Pres(p) => {
            out.push_str("kind laurent\nlaurent-presentation\n");
            out.push_str(&p.matrix().to_text());
        }
    }
}

pub fn write_module(m: &GradedRModule) -> String {
    let mut out = String::new();
    write_block(&mut out, "even", &m.even);
    write_block(&mut out, "odd", &m.odd);
    out
}
