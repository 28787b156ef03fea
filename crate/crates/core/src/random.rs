//! Seeded random generators for groups, morphisms, unimodular matrices and
//! poset representations and graphs.
//! Used by the randomized oracles, the test suites and the benches.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abelian::{hom_z, is_isomorphism, FgAbGroup, GroupMorphism};
use crate::graph::{admissible, DirectedGraph};
use crate::laurent::RModuleFg;
use crate::poset::{FinitePoset, QuiverRep};
use std::sync::Arc;
use crate::matrix::{Int, IntMatrix};

pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.0.random_range(lo..=hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.0.random_range(0..n)
    }

    pub fn inner(&mut self) -> &mut ChaCha8Rng {
        &mut self.0
    }
}

pub fn random_matrix(rng: &mut Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data = (0..rows * cols).map(|_| Int::from(rng.range(-bound, bound))).collect();
    IntMatrix::new(rows, cols, data).expect("shape")
}

/// A group on at most `max_gens` generators with small relation entries.
pub fn random_group(rng: &mut Rng, max_gens: usize, bound: i64) -> FgAbGroup {
    let n = 1 + rng.index(max_gens);
    let m = rng.index(max_gens + 1);
    FgAbGroup::from_presentation(random_matrix(rng, n, m, bound))
}

/// A random well-defined morphism, drawn from the generators of `Hom(a, b)`.
pub fn random_morphism(rng: &mut Rng, a: &FgAbGroup, b: &FgAbGroup) -> GroupMorphism {
    let h = hom_z(a, b);
    let s = h.subquotient().basis().cols();
    let coords: Vec<Int> = (0..s).map(|_| Int::from(rng.range(-2, 2))).collect();
    h.morphism(&coords)
}

/// Product of random elementary matrices.
pub fn random_unimodular(rng: &mut Rng, n: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    if n < 2 {
        if n == 1 && rng.range(0, 1) == 1 {
            m.negate_row(0);
        }
        return m;
    }
    for _ in 0..3 * n {
        let i = rng.index(n);
        let mut j = rng.index(n - 1);
        if j >= i {
            j += 1;
        }
        m.add_row_multiple(i, j, &Int::from(rng.range(-2, 2)));
        if rng.range(0, 3) == 0 {
            m.swap_rows(i, j);
        }
    }
    m
}

/// An R-module on a random group: `x` is the first automorphism found among
/// random endomorphisms, falling back to `±1`.
pub fn random_r_module(rng: &mut Rng, max_gens: usize, bound: i64) -> RModuleFg {
    let g = random_group(rng, max_gens, bound);
    for _ in 0..30 {
        let f = random_morphism(rng, &g, &g);
        if is_isomorphism(&f).unwrap_or(false) {
            // Canonical representatives keep the entries small.
            let cols: Vec<Vec<Int>> = f.matrix().columns().iter().map(|c| g.lift(&g.reduce(c))).collect();
            let x = IntMatrix::from_columns(g.generators(), &cols);
            return RModuleFg::new(g, x).expect("automorphism");
        }
    }
    let sign = if rng.range(0, 1) == 0 { 1 } else { -1 };
    let x = GroupMorphism::scalar(&g, sign).matrix().clone();
    RModuleFg::new(g, x).expect("±1 is an automorphism")
}

/// A group of order at most 16 or a free group of rank at most 2, given by a
/// scrambled presentation.
pub fn random_small_group(rng: &mut Rng) -> FgAbGroup {
    let mut orders = Vec::new();
    let mut free = 0;
    if rng.range(0, 1) == 0 {
        let mut prod = 1;
        for _ in 0..3 {
            let d = rng.range(1, 16 / prod);
            if d >= 2 {
                orders.push(d);
                prod *= d;
            }
        }
    } else {
        free = rng.index(3);
    }
    let n = orders.len() + free;
    let mut rel = IntMatrix::zeros(n, orders.len());
    for (i, &d) in orders.iter().enumerate() {
        rel.set(i, i, Int::from(d));
    }
    let rel = &(&random_unimodular(rng, n) * &rel) * &random_unimodular(rng, orders.len());
    FgAbGroup::from_presentation(rel)
}

/// A representation with random groups from `group` and random maps. On a
/// poset with several chains between two points the maps are kept only if
/// the composites agree; otherwise they are replaced by zero.
pub fn random_rep(
    rng: &mut Rng,
    poset: &Arc<FinitePoset>,
    mut group: impl FnMut(&mut Rng) -> FgAbGroup,
) -> QuiverRep {
    let groups: Vec<FgAbGroup> = (0..poset.len()).map(|_| group(rng)).collect();
    let maps: Vec<IntMatrix> = poset
        .arrows()
        .iter()
        .map(|&(y, x)| random_morphism(rng, &groups[y], &groups[x]).matrix().clone())
        .collect();
    QuiverRep::new(poset.clone(), groups.clone(), maps).unwrap_or_else(|_| {
        let zeros = poset
            .arrows()
            .iter()
            .map(|&(y, x)| IntMatrix::zeros(groups[x].generators(), groups[y].generators()))
            .collect();
        QuiverRep::new(poset.clone(), groups, zeros).expect("zero maps are well defined")
    })
}

/// A graph on `1..=max_vertices` vertices; each ordered pair carries an
/// edge with probability about 2/5, of multiplicity at most `max_mult`.
pub fn random_graph(rng: &mut Rng, max_vertices: usize, max_mult: u32) -> DirectedGraph {
    let n = 1 + rng.index(max_vertices);
    let adj = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| if rng.index(5) < 2 { 1 + rng.index(max_mult as usize) as u32 } else { 0 })
                .collect()
        })
        .collect::<Vec<Vec<u32>>>();
    DirectedGraph::from_adjacency(&adj).expect("square adjacency")
}

/// Rejection sampling for graphs without sinks satisfying Condition (K).
pub fn random_admissible_graph(rng: &mut Rng, max_vertices: usize, max_mult: u32) -> DirectedGraph {
    loop {
        let g = random_graph(rng, max_vertices, max_mult);
        if admissible(&g).passes() {
            return g;
        }
    }
}
