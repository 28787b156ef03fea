//! Text formats for finite posets and their representations.
//!
//! ```text
//! points 2
//! p0
//! p1
//! p1 -> p0
//! group p0
//! 1 1
//! 2
//! group p1
//! 1 0
//!
//! map p1 -> p0
//! 1 1
//! 1
//! ```
//!
//! A poset file is the first block alone: a point count, one label per
//! line, then cover lines `y -> x` meaning `x ⪯ y`. A representation file
//! continues with `group` blocks (a relation matrix, generators as rows)
//! and `map` blocks (the matrix of `V_y → V_x`). Missing groups are
//! trivial and missing maps are zero. Blank lines and `#` comments are
//! ignored between blocks; a matrix with no columns still has its (empty)
//! rows, as in the shared matrix grammar. The writers emit every block in point and arrow order.

use std::sync::Arc;

use crate::abelian::FgAbGroup;
use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, LineCursor};
use crate::poset::poset::FinitePoset;
use crate::poset::rep::QuiverRep;

fn all_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end())).collect()
}

fn is_filler(l: &str) -> bool {
    let t = l.trim_start();
    t.is_empty() || t.starts_with('#')
}

struct Reader<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        Reader {
            lines: all_lines(text),
            pos: 0,
        }
    }

    /// Next non-blank, non-comment line. Matrix rows are read raw, since a
    /// matrix with no columns has empty rows.
    fn peek(&mut self) -> Option<(usize, &'a str)> {
        while self.lines.get(self.pos).is_some_and(|l| is_filler(l.1)) {
            self.pos += 1;
        }
        self.lines.get(self.pos).copied()
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let l = self.peek();
        self.pos += l.is_some() as usize;
        l
    }

    fn last_line(&self) -> usize {
        self.lines.last().map_or(1, |l| l.0 + 1)
    }

    /// Reads a matrix block, keeping the original line numbers.
    fn matrix(&mut self) -> Result<IntMatrix> {
        let (no, header) = self
            .peek()
            .ok_or_else(|| Error::parse(self.last_line(), 1, "missing `rows cols` header"))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::parse(no, 1, "expected `rows cols`"))?;
        if dims.len() != 2 {
            return Err(Error::parse(no, 1, "expected `rows cols`"));
        }
        let end = self.pos + 1 + dims[0];
        if end > self.lines.len() {
            return Err(Error::parse(self.last_line(), 1, format!("expected {} matrix rows", dims[0])));
        }
        let block: Vec<&str> = self.lines[self.pos..end].iter().map(|l| l.1).collect();
        let mut cursor = LineCursor::new(&block, no - 1);
        let m = cursor.read_matrix()?;
        self.pos = end;
        Ok(m)
    }
}

fn keyword<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    let rest = line.strip_prefix(key)?;
    if rest.is_empty() {
        Some("")
    } else {
        rest.strip_prefix(' ').map(str::trim)
    }
}

fn parse_arrow(no: usize, line: &str, labels: &[String]) -> Result<(usize, usize)> {
    let (y, x) = line
        .split_once("->")
        .ok_or_else(|| Error::parse(no, 1, "expected `y -> x`"))?;
    let find = |s: &str, col: usize| {
        labels
            .iter()
            .position(|l| l == s.trim())
            .ok_or_else(|| Error::parse(no, col, format!("unknown point `{}`", s.trim())))
    };
    let yi = find(y, 1 + y.len() - y.trim_start().len())?;
    let xi = find(x, y.len() + 3 + x.len() - x.trim_start().len())?;
    Ok((yi, xi))
}

fn read_poset(r: &mut Reader<'_>) -> Result<FinitePoset> {
    let (no, first) = r
        .next()
        .ok_or_else(|| Error::parse(1, 1, "expected `points n`"))?;
    let n: usize = keyword(first, "points")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::parse(no, 1, "expected `points n`"))?;
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let (no, l) = r
            .next()
            .ok_or_else(|| Error::parse(r.last_line(), 1, format!("expected {n} labels")))?;
        let l = l.trim();
        if l.contains(char::is_whitespace) || l.contains("->") {
            return Err(Error::parse(no, 1, format!("invalid label `{l}`")));
        }
        labels.push(l.to_string());
    }
    let mut covers = Vec::new();
    while let Some((no, l)) = r.peek() {
        if keyword(l, "group").is_some() || keyword(l, "map").is_some() {
            break;
        }
        covers.push(parse_arrow(no, l, &labels)?);
        r.next();
    }
    let no = r.peek().map_or(r.last_line(), |l| l.0);
    FinitePoset::from_covers(labels, &covers).map_err(|e| match e {
        Error::Parse { .. } => e,
        other => Error::parse(no, 1, other.to_string()),
    })
}

pub fn parse_poset(text: &str) -> Result<FinitePoset> {
    let mut r = Reader::new(text);
    let p = read_poset(&mut r)?;
    if let Some((no, _)) = r.peek() {
        return Err(Error::parse(no, 1, "unexpected content after poset"));
    }
    Ok(p)
}

pub fn write_poset(p: &FinitePoset) -> String {
    let mut s = format!("points {}\n", p.len());
    for l in p.labels() {
        s.push_str(l);
        s.push('\n');
    }
    for &(y, x) in p.arrows() {
        s.push_str(&format!("{} -> {}\n", p.labels()[y], p.labels()[x]));
    }
    s
}

pub fn parse_rep(text: &str) -> Result<QuiverRep> {
    let mut r = Reader::new(text);
    let p = Arc::new(read_poset(&mut r)?);
    let mut groups: Vec<Option<FgAbGroup>> = vec![None; p.len()];
    let mut maps: Vec<Option<IntMatrix>> = vec![None; p.arrows().len()];
    let mut map_lines = vec![0; p.arrows().len()];
    while let Some((no, l)) = r.next() {
        if let Some(label) = keyword(l, "group") {
            let x = p
                .index_of(label)
                .ok_or_else(|| Error::parse(no, 7, format!("unknown point `{label}`")))?;
            if groups[x].is_some() {
                return Err(Error::parse(no, 1, format!("repeated group for `{label}`")));
            }
            groups[x] = Some(FgAbGroup::from_presentation(r.matrix()?));
        } else if let Some(rest) = keyword(l, "map") {
            let (y, x) = parse_arrow(no, rest, p.labels())?;
            let i = p
                .arrow_index(y, x)
                .ok_or_else(|| Error::parse(no, 5, format!("`{rest}` is not a cover")))?;
            if maps[i].is_some() {
                return Err(Error::parse(no, 1, format!("repeated map `{rest}`")));
            }
            map_lines[i] = no;
            maps[i] = Some(r.matrix()?);
        } else {
            return Err(Error::parse(no, 1, format!("expected `group` or `map`, found `{l}`")));
        }
    }
    let groups: Vec<FgAbGroup> = groups
        .into_iter()
        .map(|g| g.unwrap_or_else(FgAbGroup::trivial))
        .collect();
    let mut mats = Vec::with_capacity(maps.len());
    for (i, m) in maps.into_iter().enumerate() {
        let (y, x) = p.arrows()[i];
        let (rows, cols) = (groups[x].generators(), groups[y].generators());
        let m = m.unwrap_or_else(|| IntMatrix::zeros(rows, cols));
        if m.rows() != rows || m.cols() != cols {
            return Err(Error::parse(
                map_lines[i],
                1,
                format!("map must be {rows}x{cols}, found {}x{}", m.rows(), m.cols()),
            ));
        }
        mats.push(m);
    }
    QuiverRep::new(p, groups, mats)
}

pub fn write_rep(v: &QuiverRep) -> String {
    let p = v.poset();
    let mut s = write_poset(p);
    for (x, g) in v.groups().iter().enumerate() {
        s.push_str(&format!("group {}\n", p.labels()[x]));
        s.push_str(&g.relations().to_text());
    }
    for (i, &(y, x)) in p.arrows().iter().enumerate() {
        s.push_str(&format!("map {} -> {}\n", p.labels()[y], p.labels()[x]));
        s.push_str(&v.arrow_map(i).matrix().to_text());
    }
    s
}
