//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so the lines are printed on success as well.

use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use obstruct_core::abelian::{iso_groups, FgAbGroup};
use obstruct_core::graph::{
    compare_graph_invariants, k1_is_free, parse_graph, write_graph, xk_invariant, GraphVerdict, Layer,
};
use obstruct_core::laurent::{
    ck_module, count_liftings, ext2_r, ext_r_fg, ext_r_via_resolution, nekrashevych_module, parse_module,
    shift_equivalent, verify_shift_witness, write_module, Bounds, GradedRModule, LaurentMatrix, Order, RModule,
    RModuleFg, ShiftVerdict,
};
use obstruct_core::poset::{
    class_resolution, enumerate_posets, ext_poset, parse_poset, parse_rep, sierpinski_ext2,
    verify_bimodule_resolution, write_poset, write_rep, yoneda_class, yoneda_class_randomized,
    yoneda_class_with, FinitePoset, QuiverRep, RepBounds, RepMorphism, TwoExtension,
};
use obstruct_core::random::{
    random_admissible_graph, random_graph, random_matrix, random_r_module, random_rep, random_small_group,
    random_unimodular, Rng,
};
use obstruct_core::{Int, IntMatrix};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn sierpinski_cross_check() -> Check {
    let p = Arc::new(FinitePoset::sierpinski());
    let mut rng = Rng::new(101);
    let pairs = 120;
    for i in 0..pairs {
        let v = random_rep(&mut rng, &p, random_small_group);
        let w = random_rep(&mut rng, &p, random_small_group);
        let e = ext_poset(&v, &w, 2).map_err(err)?;
        let oracle = sierpinski_ext2(v.arrow_map(0), w.arrow_map(0)).map_err(err)?;
        ensure(iso_groups(e.group.group(), &oracle).is_iso(), || {
            format!("pair {i}: {} vs {}", e.group.group().describe(), oracle.describe())
        })?;
    }
    Ok(format!("{pairs} random pairs agree"))
}

fn laurent_routes() -> Check {
    let mut rng = Rng::new(202);
    let pairs = 120;
    for i in 0..pairs {
        let v = random_r_module(&mut rng, 3, 4);
        let w = random_r_module(&mut rng, 3, 4);
        let e = ext_r_fg(&v, &w).map_err(err)?;
        let oracle = ext_r_via_resolution(&v, &w, i).map_err(err)?;
        let ours = [e.hom_r.group(), e.ext1_r.group(), e.ext2_r.group()];
        for (n, (a, b)) in ours.iter().zip(oracle.iter()).enumerate() {
            ensure(iso_groups(a, b).is_iso(), || format!("pair {i}, Ext{n}: {} vs {}", a.describe(), b.describe()))?;
        }
    }
    Ok(format!("{pairs} random module pairs, Ext0..Ext2 agree"))
}

fn bimodule_resolutions() -> Check {
    let mut checked = 0;
    for n in 1..=5 {
        for p in enumerate_posets(n) {
            if !p.is_unique_path_space().is_yes() {
                continue;
            }
            let r = verify_bimodule_resolution(&p).map_err(err)?;
            ensure(r.exact(), || format!("not exact on {}", write_poset(&p)))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} unique path spaces with at most 5 points"))
}

fn cuntz_suite() -> Check {
    for n in 2..=12i64 {
        let a = IntMatrix::from_rows(&[[n]]);
        let m = ck_module(&a).map_err(err)?;
        ensure(m.presentation.matrix() == &LaurentMatrix::x_minus(&a), || format!("n = {n}: wrong presentation"))?;
        let g = m.graded();
        let e = ext2_r(&g.even, &g.even).map_err(err)?;
        ensure(e.is_trivial(), || format!("n = {n}: Ext2 = {}", e.describe()))?;
        let c = count_liftings(&g).map_err(err)?;
        ensure(c == Order::Finite(Int::from(1)), || format!("n = {n}: {c} liftings"))?;
    }
    Ok("n = 2..12: R/(x-n), Ext2 = 0, one lifting".into())
}

fn partitions(total: usize, max: usize) -> Vec<Vec<usize>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(total)).rev() {
        for mut rest in partitions(total - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn nekrashevych_vanishing() -> Check {
    let mut cases = 0;
    for n in 2..=6 {
        for total in 1..=6 {
            for lens in partitions(total, total) {
                let m = nekrashevych_module(n, &lens).map_err(err)?;
                for (a, b) in [(&m.even, &m.odd), (&m.odd, &m.even)] {
                    let e = ext2_r(a, b).map_err(err)?;
                    ensure(e.is_trivial(), || format!("n = {n}, cycles {lens:?}: {}", e.describe()))?;
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} parameter sets, both directions"))
}

fn pv_exactness() -> Check {
    let mut rng = Rng::new(606);
    let graphs = 220;
    for _ in 0..graphs {
        let g = random_admissible_graph(&mut rng, 6, 2);
        let inv = xk_invariant(&g).map_err(err)?;
        inv.extension.check().map_err(|e| format!("{e}\n{}", write_graph(&g)))?;
        ensure(k1_is_free(&inv), || format!("XK1 not free for\n{}", write_graph(&g)))?;
    }
    Ok(format!("{graphs} random admissible graphs, exact with free XK1"))
}

fn sierpinski_generator() -> TwoExtension {
    let s = Arc::new(FinitePoset::sierpinski());
    let z = FgAbGroup::free(1);
    let z2 = FgAbGroup::cyclic(2);
    let rep = |g: Vec<FgAbGroup>, m: IntMatrix| QuiverRep::new(s.clone(), g, vec![m]).unwrap();
    let m1 = rep(vec![z2.clone(), FgAbGroup::trivial()], IntMatrix::zeros(1, 0));
    let q1 = rep(vec![FgAbGroup::direct_sum(&[z.clone(), z2.clone()]), z.clone()], IntMatrix::from_rows(&[[2], [1]]));
    let q0 = rep(vec![z.clone(), z], IntMatrix::from_rows(&[[1]]));
    let m0 = rep(vec![FgAbGroup::trivial(), z2], IntMatrix::zeros(0, 1));
    let mor = |a: &QuiverRep, b: &QuiverRep, m: Vec<IntMatrix>| RepMorphism::new(a.clone(), b.clone(), m).unwrap();
    TwoExtension::new(
        mor(&m1, &q1, vec![IntMatrix::from_rows(&[[0], [1]]), IntMatrix::zeros(1, 0)]),
        mor(&q1, &q0, vec![IntMatrix::from_rows(&[[1, 0]]), IntMatrix::from_rows(&[[2]])]),
        mor(&q0, &m0, vec![IntMatrix::zeros(0, 1), IntMatrix::from_rows(&[[1]])]),
    )
    .unwrap()
}

fn class_well_definedness() -> Check {
    let mut corpus = vec![sierpinski_generator()];
    let mut rng = Rng::new(707);
    let mut nonzero = 0;
    let mut tries = 0;
    while corpus.len() < 5 && tries < 1500 {
        tries += 1;
        let g = random_admissible_graph(&mut rng, 6, 4);
        let inv = xk_invariant(&g).map_err(err)?;
        if inv.poset().len() > 1 && !inv.delta.ambient.group().is_trivial() {
            if !inv.delta.is_zero().map_err(err)? {
                nonzero += 1;
            }
            corpus.push(inv.extension);
        }
    }
    let choices = 50;
    for (i, e) in corpus.iter().enumerate() {
        let c = yoneda_class(e, None).map_err(err)?;
        let base = c.coords().map_err(err)?;
        for seed in 0..choices {
            let res = class_resolution(e.m0(), Some(seed + 1)).map_err(err)?;
            let other = yoneda_class_randomized(e, &res, seed + 1000).map_err(err)?;
            let back = other.transport(&c.resolution).map_err(err)?;
            ensure(back.coords().map_err(err)? == base, || format!("instance {i}, choice {seed}"))?;
        }
    }
    let e = sierpinski_generator();
    let c = yoneda_class(&e, None).map_err(err)?;
    ensure(!c.is_zero().map_err(err)?, || "generator class is zero".into())?;
    let twice = yoneda_class_with(&e.baer_sum(&e).map_err(err)?, &c.resolution).map_err(err)?;
    ensure(twice.is_zero().map_err(err)?, || "generator + generator is nonzero".into())?;
    Ok(format!(
        "{} instances ({nonzero} with nonzero class) x {choices} choices; generator + generator = 0",
        corpus.len()
    ))
}

fn nonneg_square(rng: &mut Rng, n: usize) -> IntMatrix {
    loop {
        let data = (0..n * n).map(|_| Int::from(rng.range(0, 2))).collect();
        let a = IntMatrix::new(n, n, data).unwrap();
        if ck_module(&a).is_ok() {
            return a;
        }
    }
}

fn inverse(p: &IntMatrix) -> IntMatrix {
    RModuleFg::new(FgAbGroup::free(p.rows()), p.clone()).unwrap().x_inverse().matrix().clone()
}

fn shift_equivalence() -> Check {
    let mut rng = Rng::new(808);
    let bounds = Bounds::default();
    for i in 0..50 {
        let k = 1 + rng.index(3);
        let a = nonneg_square(&mut rng, k);
        match shift_equivalent(&a, &a, &bounds).map_err(err)? {
            ShiftVerdict::Yes { r, s, lag } if verify_shift_witness(&a, &a, &r, &s, lag) => {}
            v => return Err(format!("reflexivity {i}: {v:?}")),
        }
    }
    let mut pairs = 0;
    let mut attempts = 0;
    while pairs < 20 && attempts < 5000 {
        attempts += 1;
        let n = 2 + rng.index(2);
        let a = nonneg_square(&mut rng, n);
        let p = random_unimodular(&mut rng, n);
        let b = &(&p * &a) * &inverse(&p);
        if a == b || ck_module(&b).is_err() {
            continue;
        }
        match shift_equivalent(&a, &b, &bounds).map_err(err)? {
            ShiftVerdict::Yes { r, s, lag } if verify_shift_witness(&a, &b, &r, &s, lag) => pairs += 1,
            v => return Err(format!("conjugation pair {pairs}: {v:?}")),
        }
    }
    ensure(pairs >= 20, || format!("only {pairs} non-negative conjugation pairs found"))?;
    match shift_equivalent(&IntMatrix::from_rows(&[[2]]), &IntMatrix::from_rows(&[[3]]), &bounds).map_err(err)? {
        ShiftVerdict::No { invariants } if !invariants.is_empty() => Ok(format!(
            "50 reflexive, {pairs} conjugation pairs yes; [2] vs [3] no by `{}`",
            invariants[0].name
        )),
        v => Err(format!("[2] vs [3]: {v:?}")),
    }
}

fn graph_smoke() -> Check {
    let g = |adj: &[&[u32]]| {
        obstruct_core::graph::DirectedGraph::from_adjacency(&adj.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
            .unwrap()
    };
    let b = RepBounds::default();
    let o2a = xk_invariant(&g(&[&[2]])).map_err(err)?;
    let o2b = xk_invariant(&g(&[&[1, 1], &[1, 1]])).map_err(err)?;
    let o3 = xk_invariant(&g(&[&[3]])).map_err(err)?;
    ensure(compare_graph_invariants(&o2a, &o2b, &b).map_err(err)?.is_yes(), || "O2 pair not identified".into())?;
    match compare_graph_invariants(&o2a, &o3, &b).map_err(err)? {
        GraphVerdict::No { layer: Layer::PointGroups | Layer::Module, .. } => {}
        v => return Err(format!("O2 vs O3: {v:?}")),
    }
    let mut rng = Rng::new(909);
    let relabelled = 10;
    for _ in 0..relabelled {
        let x = random_admissible_graph(&mut rng, 4, 2);
        let mut perm: Vec<usize> = (0..x.len()).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.index(i + 1));
        }
        let (a, c) = (xk_invariant(&x).map_err(err)?, xk_invariant(&x.relabel(&perm)).map_err(err)?);
        match compare_graph_invariants(&a, &c, &b).map_err(err)? {
            GraphVerdict::Yes(w) if w.graph_map.is_some() => {}
            v => return Err(format!("relabelled graph: {v:?}\n{}", write_graph(&x))),
        }
    }
    Ok(format!("O2 pair yes; O2 vs O3 no at the module layer; {relabelled} relabellings yes"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run_json(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_obstruct"))
        .args(args)
        .args(["--format", "json"])
        .output()
        .map_err(err)?;
    ensure(matches!(out.status.code(), Some(0 | 4)), || {
        format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr))
    })?;
    Ok(out.stdout)
}

fn determinism_and_round_trips() -> Check {
    let p = |n: &str| data(n).to_string_lossy().into_owned();
    let runs: Vec<Vec<String>> = vec![
        vec!["snf".into(), p("diag23.txt")],
        vec!["ext".into(), "r".into(), "--module".into(), p("z2_identity.mod"), "--module".into(), p("z2_identity.mod")],
        vec!["ext".into(), "poset".into(), "--module".into(), p("top_z2.rep"), "--module".into(), p("bottom_z2.rep"), "--seed".into(), "7".into()],
        vec!["shifteq".into(), p("golden.txt"), p("golden.txt")],
        vec!["graph".into(), "invariant".into(), p("sierpinski.graph"), "--seed".into(), "3".into()],
        vec!["graph".into(), "unit-compare".into(), p("sierpinski.graph"), p("sierpinski_relabelled.graph")],
    ];
    for args in &runs {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = run_json(&a)?;
        let second = run_json(&a)?;
        ensure(first == second, || format!("{a:?} is not deterministic"))?;
    }
    let mut rng = Rng::new(1010);
    let cases = 40;
    for _ in 0..cases {
        let (r, c) = (rng.index(4), rng.index(4));
        let m = random_matrix(&mut rng, r, c, 50);
        let t = m.to_text();
        ensure(IntMatrix::parse(&t).map_err(err)?.to_text() == t, || format!("matrix\n{t}"))?;

        let g = random_graph(&mut rng, 6, 3);
        let t = write_graph(&g);
        ensure(write_graph(&parse_graph(&t).map_err(err)?) == t, || format!("graph\n{t}"))?;

        let posets = enumerate_posets(1 + rng.index(4));
        let q = Arc::new(posets[rng.index(posets.len())].clone());
        let t = write_poset(&q);
        ensure(write_poset(&parse_poset(&t).map_err(err)?) == t, || format!("poset\n{t}"))?;
        let v = random_rep(&mut rng, &q, random_small_group);
        let t = write_rep(&v);
        ensure(write_rep(&parse_rep(&t).map_err(err)?) == t, || format!("rep\n{t}"))?;

        let even = random_r_module(&mut rng, 3, 4);
        let k = 1 + rng.index(2);
        let odd = ck_module(&nonneg_square(&mut rng, k)).map_err(err)?.presentation;
        let gm = GradedRModule::new(RModule::Fg(even), RModule::Pres(odd));
        let t = write_module(&gm);
        ensure(write_module(&parse_module(&t).map_err(err)?) == t, || format!("module\n{t}"))?;
    }
    for f in ["sierpinski.graph", "o2b.graph", "top_z2.rep", "sierpinski.pos", "z2_pair.mod", "diag23.txt"] {
        let t = std::fs::read_to_string(data(f)).map_err(err)?;
        let again = match f.rsplit('.').next() {
            Some("graph") => write_graph(&parse_graph(&t).map_err(err)?),
            Some("rep") => write_rep(&parse_rep(&t).map_err(err)?),
            Some("pos") => write_poset(&parse_poset(&t).map_err(err)?),
            Some("mod") => write_module(&parse_module(&t).map_err(err)?),
            _ => IntMatrix::parse(&t).map_err(err)?.to_text(),
        };
        ensure(again == t, || format!("{f} does not round-trip"))?;
    }
    Ok(format!("{} commands byte-identical twice; {cases} instances of each of 5 formats round-trip", runs.len()))
}

fn main() {
    let criteria: [(&str, &str, u64, fn() -> Check); 10] = [
        ("Sierpinski cross-check", "exact isomorphism", 30, sierpinski_cross_check),
        ("Laurent oracle equivalence", "exact", 60, laurent_routes),
        ("bimodule resolution", "exact", 120, bimodule_resolutions),
        ("Cuntz algebra suite", "exact", 5, cuntz_suite),
        ("Nekrashevych vanishing", "exact", 30, nekrashevych_vanishing),
        ("PV exactness", "exact", 120, pv_exactness),
        ("class well-definedness", "exact", 120, class_well_definedness),
        ("shift equivalence", "exact", 60, shift_equivalence),
        ("graph classification smoke test", "exact", 10, graph_smoke),
        ("determinism and round-trip", "byte-identical", 5, determinism_and_round_trips),
    ];
    let mut failed = 0;
    for (i, (name, tol, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(*limit);
        let (status, detail) = match (&result, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over the time limit")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:>2} {status} {name}: {detail} [tolerance: {tol}; {:.2}s of {limit}s]",
            i + 1,
            took.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} of 10 criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria pass");
}
