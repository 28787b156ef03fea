use std::path::Path;

use num_traits::{One, Signed};
use obstruct_core::abelian::{ext1_z, hom_z, iso_groups, FgAbGroup};
use obstruct_core::graph::{
    admissible, compare_graph_invariants, parse_graph, unit_compare, xk_invariant_seeded, GraphVerdict, XkInvariant,
};
use obstruct_core::laurent::{
    ck_module, count_liftings, ext2_r, ext_r, parse_module, shift_equivalent, Bounds, ExtTriple, LaurentPoly,
    RModule, ShiftVerdict,
};
use obstruct_core::poset::{parse_poset, parse_rep, resolve_projective, ups_ext, QuiverRep, RepBounds, RepMorphism};
use obstruct_core::snf::snf;
use obstruct_core::{Error, Int, IntMatrix, Result};
use serde_json::{json, Value};

use crate::report::{ext_value, group, int, ints, matrix, matrix_text, order, Outcome, Report};

/// Search bounds and seed, as given on the command line.
#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub max_lag: Option<u32>,
    pub max_entry: Option<i64>,
    pub budget: Option<usize>,
    pub seed: u64,
}

impl Settings {
    fn shift_bounds(&self) -> Bounds {
        let d = Bounds::default();
        Bounds {
            max_lag: self.max_lag.unwrap_or(d.max_lag),
            max_entry: self.max_entry.unwrap_or(d.max_entry),
            budget: self.budget.unwrap_or(d.budget),
            seed: self.seed,
        }
    }

    fn rep_bounds(&self) -> RepBounds {
        let d = RepBounds::default();
        RepBounds {
            max_entry: self.max_entry.unwrap_or(d.max_entry),
            budget: self.budget.unwrap_or(d.budget),
        }
    }

    /// Seed 0 selects the canonical, unrandomized resolution.
    fn resolution_seed(&self) -> Option<u64> {
        (self.seed != 0).then_some(self.seed)
    }
}

/// Failure to read an input file, reported as an input error.
pub struct Io(pub String);

pub fn read(path: &Path) -> std::result::Result<String, Io> {
    std::fs::read_to_string(path).map_err(|e| Io(format!("{}: {e}", path.display())))
}

/// Attaches the file name to parse errors.
fn parsed<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { line, column, message } => Error::Parse {
            line,
            column,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

fn poly_text(p: &LaurentPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<(i64, &Int)> = p.terms().collect();
    terms.reverse();
    let mut s = String::new();
    for (i, (k, c)) in terms.into_iter().enumerate() {
        let mag = c.abs();
        let sign = if c.is_negative() { "-" } else { "+" };
        if i == 0 {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(&format!(" {sign} "));
        }
        let mono = match k {
            0 => String::new(),
            1 => "x".into(),
            _ => format!("x^{k}"),
        };
        if mono.is_empty() {
            s.push_str(&mag.to_string());
        } else if mag.is_one() {
            s.push_str(&mono);
        } else {
            s.push_str(&format!("{mag}{mono}"));
        }
    }
    s
}

pub fn snf_cmd(path: &Path, text: &str) -> Result<Report> {
    let a = parsed(path, IntMatrix::parse(text))?;
    let d = snf(&a);
    if !d.verify(&a) {
        return Err(Error::Internal("U·A·V does not equal D".into()));
    }
    let mut r = Report::new("snf");
    r.field("rows", json!(a.rows()));
    r.field("cols", json!(a.cols()));
    r.field("u", matrix(&d.u));
    r.field("d", matrix(&d.d));
    r.field("v", matrix(&d.v));
    r.field("diagonal", ints(&d.diagonal()));
    r.field("rank", json!(d.rank));
    r.field("verified", json!(true));
    let diag: Vec<String> = d.diagonal().iter().map(ToString::to_string).collect();
    r.line(format!("D = diag({})", diag.join(", ")));
    r.line(format!("rank {}", d.rank));
    for (name, m) in [("U", &d.u), ("D", &d.d), ("V", &d.v)] {
        r.line(format!("{name} ="));
        r.line(matrix_text(m));
    }
    r.line("verified U·A·V = D");
    Ok(r)
}

pub fn ext_z_cmd(paths: &[&Path], texts: &[String]) -> Result<Report> {
    let v = FgAbGroup::from_presentation(parsed(paths[0], IntMatrix::parse(&texts[0]))?);
    let w = FgAbGroup::from_presentation(parsed(paths[1], IntMatrix::parse(&texts[1]))?);
    let hom = hom_z(&v, &w);
    let ext = ext1_z(&v, &w);
    let mut r = Report::new("ext-z");
    r.field("source", group(&v));
    r.field("target", group(&w));
    r.field("hom", group(hom.group()));
    r.field("ext1", group(ext.group()));
    r.line(format!("V = {}, W = {}", v.describe(), w.describe()));
    r.line(format!("Hom(V, W) = {}", hom.group().describe()));
    r.line(format!("Ext1(V, W) = {}", ext.group().describe()));
    Ok(r)
}

fn triple_json(t: &ExtTriple) -> Value {
    json!({ "hom": ext_value(&t.hom), "ext1": ext_value(&t.ext1), "ext2": ext_value(&t.ext2) })
}

pub fn ext_r_cmd(paths: &[&Path], texts: &[String]) -> Result<Report> {
    let v = parsed(paths[0], parse_module(&texts[0]))?;
    let w = parsed(paths[1], parse_module(&texts[1]))?;
    let mut r = Report::new("ext-r");
    for (name, odd) in [("even", false), ("odd", true)] {
        let t = ext_r(v.part(odd), w.part(odd))?;
        r.field(name, triple_json(&t));
        r.line(format!(
            "{name}: Hom = {}, Ext1 = {}, Ext2 = {}",
            t.hom.describe(),
            t.ext1.describe(),
            t.ext2.describe()
        ));
    }
    Ok(r)
}

fn rep_json(v: &QuiverRep) -> Value {
    let p = v.poset();
    let pts: Vec<Value> = (0..p.len())
        .map(|x| json!({ "label": p.labels()[x], "group": group(v.group(x)) }))
        .collect();
    json!(pts)
}

fn poset_json(v: &obstruct_core::poset::FinitePoset) -> Value {
    let arrows: Vec<Value> = v.arrows().iter().map(|&(y, x)| json!([v.labels()[y], v.labels()[x]])).collect();
    json!({ "points": v.labels(), "covers": arrows })
}

pub fn ext_poset_cmd(
    poset: Option<(&Path, &str)>,
    paths: &[&Path],
    texts: &[String],
    degree: usize,
    s: &Settings,
) -> Result<Report> {
    let v = parsed(paths[0], parse_rep(&texts[0]))?;
    let w = parsed(paths[1], parse_rep(&texts[1]))?;
    if let Some((path, text)) = poset {
        let p = parsed(path, parse_poset(text))?;
        if &p != v.poset().as_ref() || &p != w.poset().as_ref() {
            return Err(Error::Dimension(format!("modules do not live over {}", path.display())));
        }
    }
    if v.poset() != w.poset() {
        return Err(Error::Dimension("modules live over different posets".into()));
    }
    let res = resolve_projective(&v, degree + 1, s.resolution_seed())?;
    let ups = if v.poset().is_unique_path_space().is_yes() { Some(ups_ext(&v, &w)?) } else { None };
    let mut r = Report::new("ext-poset");
    r.field("poset", poset_json(v.poset()));
    r.field("source", rep_json(&v));
    r.field("target", rep_json(&w));
    let mut groups = Vec::new();
    for n in 0..=degree {
        let g = res.ext(&w, n)?.group().clone();
        if let Some(u) = &ups {
            let other = u.get(n).cloned().unwrap_or_else(FgAbGroup::trivial);
            if !iso_groups(&g, &other).is_iso() {
                return Err(Error::Internal(format!("Ext^{n} disagrees between routes")));
            }
        }
        r.line(format!("Ext{n} = {}", g.describe()));
        groups.push(json!({ "degree": n, "invariant_factors": group(&g) }));
    }
    r.field("ext", json!(groups));
    r.field(
        "resolution",
        json!({ "length": res.length(), "complete": res.complete, "fingerprint": res.fingerprint() }),
    );
    r.field("cross_checked", json!(ups.is_some()));
    r.line(format!("resolution length {}, fingerprint {}", res.length(), res.fingerprint()));
    Ok(r)
}

fn presentation_text(m: &obstruct_core::laurent::RModulePres) -> String {
    let l = m.matrix();
    if l.rows() == 1 && l.cols() == 1 {
        return format!("R/({})", poly_text(l.get(0, 0)));
    }
    let rows: Vec<String> = (0..l.rows())
        .map(|i| {
            let r: Vec<String> = (0..l.cols()).map(|j| poly_text(l.get(i, j))).collect();
            format!("[{}]", r.join(", "))
        })
        .collect();
    format!("coker {}", rows.join(" "))
}

pub fn ck_cmd(path: &Path, text: &str) -> Result<Report> {
    let a = parsed(path, IntMatrix::parse(text))?;
    let m = ck_module(&a)?;
    let graded = m.graded();
    let underlying = RModule::Pres(m.presentation.clone()).underlying()?.invariants();
    let ext2 = ext2_r(&graded.even, &graded.even)?;
    let liftings = count_liftings(&graded)?;
    let mut r = Report::new("ck");
    r.field("presentation", json!(m.presentation.matrix().to_text()));
    r.field("module", json!(presentation_text(&m.presentation)));
    r.field("finitely_generated", json!(m.fg.is_some()));
    r.field(
        "underlying",
        json!({ "torsion": ints(&underlying.torsion), "rank": underlying.rank,
                "p_ranks": underlying.p_ranks.iter().map(|(p, k)| json!([int(p), k])).collect::<Vec<_>>() }),
    );
    r.field("ext2_even", ext_value(&ext2));
    r.field("liftings", order(&liftings));
    r.line(format!("K0 module: {}", presentation_text(&m.presentation)));
    r.line(format!("underlying group: {}", underlying.describe()));
    r.line(format!("Ext2(M, M) = {}", ext2.describe()));
    r.line(format!("liftings: {liftings}"));
    Ok(r)
}

pub fn shifteq_cmd(paths: &[&Path], texts: &[String], s: &Settings) -> Result<Report> {
    let a = parsed(paths[0], IntMatrix::parse(&texts[0]))?;
    let b = parsed(paths[1], IntMatrix::parse(&texts[1]))?;
    let bounds = s.shift_bounds();
    let mut r = Report::new("shifteq");
    r.field(
        "bounds",
        json!({ "max_lag": bounds.max_lag, "max_entry": bounds.max_entry, "budget": bounds.budget, "seed": bounds.seed }),
    );
    match shift_equivalent(&a, &b, &bounds)? {
        ShiftVerdict::Yes { r: rm, s: sm, lag } => {
            r.field("verdict", json!("yes"));
            r.field("witness", json!({ "lag": lag, "r": matrix(&rm), "s": matrix(&sm) }));
            r.line(format!("yes, lag {lag}"));
            r.line("R =");
            r.line(matrix_text(&rm));
            r.line("S =");
            r.line(matrix_text(&sm));
        }
        ShiftVerdict::No { invariants } => {
            r.field("verdict", json!("no"));
            let inv: Vec<Value> = invariants
                .iter()
                .map(|i| json!({ "name": i.name, "left": i.left, "right": i.right }))
                .collect();
            r.field("invariants", json!(inv));
            r.line("no");
            for i in &invariants {
                r.line(format!("  {}: {} vs {}", i.name, i.left, i.right));
            }
        }
        ShiftVerdict::Unknown { candidates_tried } => {
            r.field("verdict", json!("unknown"));
            r.field("candidates_tried", json!(candidates_tried));
            r.line(format!("unknown after {candidates_tried} candidates"));
            r.outcome = Outcome::Inconclusive;
        }
    }
    Ok(r)
}

pub fn count_liftings_cmd(path: &Path, text: &str) -> Result<Report> {
    let m = parsed(path, parse_module(text))?;
    let n = count_liftings(&m)?;
    let mut r = Report::new("count-liftings");
    r.field("liftings", order(&n));
    r.line(format!("liftings: {n}"));
    Ok(r)
}

fn load_graph(path: &Path, text: &str, s: &Settings) -> Result<XkInvariant> {
    let g = parsed(path, parse_graph(text))?;
    xk_invariant_seeded(&g, s.resolution_seed()).map_err(|e| match e {
        Error::Precondition(m) => Error::Precondition(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn invariant_json(inv: &XkInvariant) -> Result<Value> {
    let p = inv.poset();
    let points: Vec<Value> = (0..p.len())
        .map(|x| {
            json!({
                "label": p.labels()[x],
                "xk0": group(inv.xk0().group(x)),
                "xk1": group(inv.xk1().group(x)),
            })
        })
        .collect();
    let d = &inv.delta;
    Ok(json!({
        "vertices": inv.graph.len(),
        "admissibility": serde_json::to_value(admissible(&inv.graph)).expect("serializable"),
        "prim": poset_json(p),
        "points": points,
        "delta": {
            "ambient": group(d.ambient.group()),
            "coordinates": ints(&d.coords()?),
            "resolution_fingerprint": d.resolution.fingerprint(),
        },
        "k0": group(&inv.k0),
        "unit": ints(&inv.k0.reduce(&inv.unit)),
    }))
}

fn describe_invariant(r: &mut Report, inv: &XkInvariant) -> Result<()> {
    let p = inv.poset();
    r.line(format!("prim: {} points", p.len()));
    for &(y, x) in p.arrows() {
        r.line(format!("  {} -> {}", p.labels()[y], p.labels()[x]));
    }
    for x in 0..p.len() {
        r.line(format!(
            "  {}: XK0 = {}, XK1 = {}",
            p.labels()[x],
            inv.xk0().group(x).describe(),
            inv.xk1().group(x).describe()
        ));
    }
    let c: Vec<String> = inv.delta.coords()?.iter().map(ToString::to_string).collect();
    r.line(format!(
        "delta in {}: ({}){}",
        inv.delta.ambient.group().describe(),
        c.join(", "),
        if inv.delta.is_zero()? { ", zero" } else { "" }
    ));
    let u: Vec<String> = inv.k0.reduce(&inv.unit).iter().map(ToString::to_string).collect();
    r.line(format!("K0 = {}, unit = ({})", inv.k0.describe(), u.join(", ")));
    Ok(())
}

pub fn graph_invariant_cmd(path: &Path, text: &str, s: &Settings) -> Result<Report> {
    let inv = load_graph(path, text, s)?;
    let mut r = Report::new("graph-invariant");
    r.field("invariant", invariant_json(&inv)?);
    describe_invariant(&mut r, &inv)?;
    Ok(r)
}

fn morphism_json(f: &RepMorphism) -> Value {
    json!(f.components().iter().map(|c| matrix(c.matrix())).collect::<Vec<_>>())
}

pub fn graph_compare_cmd(paths: &[&Path], texts: &[String], unit: bool, s: &Settings) -> Result<Report> {
    let a = load_graph(paths[0], &texts[0], s)?;
    let b = load_graph(paths[1], &texts[1], s)?;
    let bounds = s.rep_bounds();
    let verdict = if unit { unit_compare(&a, &b, &bounds)? } else { compare_graph_invariants(&a, &b, &bounds)? };
    let mut r = Report::new(if unit { "graph-unit-compare" } else { "graph-compare" });
    r.field("bounds", json!({ "max_entry": bounds.max_entry, "budget": bounds.budget, "seed": s.seed }));
    match verdict {
        GraphVerdict::Yes(w) => {
            r.field("verdict", json!("yes"));
            r.field(
                "witness",
                json!({
                    "poset_map": w.poset_map,
                    "graph_map": w.graph_map,
                    "xk0": morphism_json(&w.xk0),
                    "xk1": morphism_json(&w.xk1),
                }),
            );
            r.line("yes");
            let pb = b.poset();
            let pa = a.poset();
            for (x, &y) in w.poset_map.iter().enumerate() {
                r.line(format!("  {} -> {}", pa.labels()[x], pb.labels()[y]));
            }
            if let Some(pi) = &w.graph_map {
                let m: Vec<String> = pi
                    .iter()
                    .enumerate()
                    .map(|(v, &u)| format!("{} -> {}", a.graph.labels()[v], b.graph.labels()[u]))
                    .collect();
                r.line(format!("  induced by the vertex bijection {}", m.join(", ")));
            }
        }
        GraphVerdict::No { layer, reason } => {
            r.field("verdict", json!("no"));
            r.field("layer", serde_json::to_value(layer).expect("serializable"));
            r.field("reason", json!(reason));
            r.line(format!("no ({}): {reason}", layer_name(layer)));
        }
        GraphVerdict::Unknown { layer, reason } => {
            r.field("verdict", json!("unknown"));
            r.field("layer", serde_json::to_value(layer).expect("serializable"));
            r.field("reason", json!(reason));
            r.line(format!("unknown ({}): {reason}", layer_name(layer)));
            r.outcome = Outcome::Inconclusive;
        }
    }
    Ok(r)
}

fn layer_name(l: obstruct_core::graph::Layer) -> String {
    serde_json::to_value(l).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_print_in_the_usual_way() {
        let x = LaurentPoly::x();
        assert_eq!(poly_text(&x.sub(&LaurentPoly::constant(3))), "x - 3");
        assert_eq!(poly_text(&LaurentPoly::monomial(-2, 2).add(&LaurentPoly::monomial(1, -1))), "-2x^2 + x^-1");
        assert_eq!(poly_text(&LaurentPoly::zero()), "0");
    }
}
