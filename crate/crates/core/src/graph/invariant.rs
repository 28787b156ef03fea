//! The invariant `XKδ` of a graph algebra: the K-theory modules over the
//! primitive ideal space and the obstruction class of the dual
//! Pimsner–Voiculescu sequence
//!
//! ```text
//! 0 → XK₁ → Q →(I − Aᵗ) Q → XK₀ → 0,    Q(U_x) = ℤ^{H_x},
//! ```
//!
//! together with the unit class in `K₀ = coker(I − Aᵗ)` on all vertices.

use std::sync::Arc;

use crate::abelian::{cohomology, FgAbGroup, GroupMorphism};
use crate::error::{Error, Result};
use crate::graph::graph::DirectedGraph;
use crate::graph::ideals::{hereditary_saturated, members, IdealPoset};
use crate::matrix::{Int, IntMatrix};
use crate::poset::{class_resolution, yoneda_class_with, Ext2Class, FinitePoset, QuiverRep, RepMorphism, TwoExtension};

#[derive(Clone, Debug)]
pub struct XkInvariant {
    pub graph: DirectedGraph,
    pub ideals: IdealPoset,
    /// `Q(U_x) = ℤ^{H_x}` with inclusions.
    pub q: QuiverRep,
    /// `0 → XK₁ → Q → Q → XK₀ → 0`.
    pub extension: TwoExtension,
    pub delta: Ext2Class,
    /// `K₀` of the whole algebra on the vertex basis.
    pub k0: FgAbGroup,
    /// Class of the unit, the all-ones vertex vector.
    pub unit: Vec<Int>,
    /// `XK₀(U_x) → K₀` induced by the ideal inclusions.
    pub to_k0: Vec<GroupMorphism>,
}

impl XkInvariant {
    pub fn poset(&self) -> &Arc<FinitePoset> {
        &self.ideals.poset
    }

    pub fn xk0(&self) -> &QuiverRep {
        self.extension.m0()
    }

    pub fn xk1(&self) -> &QuiverRep {
        self.extension.m1()
    }
}

/// `I − Aᵗ` on `ℤ^S` for a hereditary vertex list `S`.
pub fn pv_matrix(g: &DirectedGraph, s: &[usize]) -> IntMatrix {
    let mut m = IntMatrix::zeros(s.len(), s.len());
    for (j, &v) in s.iter().enumerate() {
        for (i, &w) in s.iter().enumerate() {
            let d = if i == j { 1 } else { 0 };
            m.set(i, j, Int::from(d - i64::from(g.edges(v, w))));
        }
    }
    m
}

/// Inclusion `ℤ^{small} → ℤ^{big}` of vertex subsets.
fn inclusion(small: &[usize], big: &[usize]) -> IntMatrix {
    let mut m = IntMatrix::zeros(big.len(), small.len());
    for (j, v) in small.iter().enumerate() {
        let i = big.iter().position(|w| w == v).expect("subset");
        m.set(i, j, Int::from(1));
    }
    m
}

/// The sequence `0 → XK₁ → Q → Q → XK₀ → 0` and `Q`.
pub fn pv_extension(g: &DirectedGraph, ideals: &IdealPoset) -> Result<(QuiverRep, TwoExtension)> {
    let p = ideals.poset.clone();
    let sets: Vec<Vec<usize>> = ideals.points.iter().map(|&h| members(h)).collect();
    let groups = sets.iter().map(|s| FgAbGroup::free(s.len())).collect();
    let maps = p.arrows().iter().map(|&(y, x)| inclusion(&sets[y], &sets[x])).collect();
    let q = QuiverRep::new(p, groups, maps)?;
    let d = RepMorphism::new(q.clone(), q.clone(), sets.iter().map(|s| pv_matrix(g, s)).collect())?;
    let incl = d.kernel()?;
    let proj = d.cokernel()?;
    let ext = TwoExtension::new(incl, d, proj).map_err(|e| match e {
        Error::NotExact { node } => Error::Internal(format!("PV sequence not exact at {node}")),
        other => other,
    })?;
    Ok((q, ext))
}

pub fn xk_invariant(g: &DirectedGraph) -> Result<XkInvariant> {
    xk_invariant_seeded(g, None)
}

/// As [`xk_invariant`], with `seed` randomizing the resolution of `XK₀`
/// used for the class.
pub fn xk_invariant_seeded(g: &DirectedGraph, seed: Option<u64>) -> Result<XkInvariant> {
    let ideals = hereditary_saturated(g)?;
    let (q, extension) = pv_extension(g, &ideals)?;
    let res = class_resolution(extension.m0(), seed)?;
    let delta = yoneda_class_with(&extension, &res)?;
    let all: Vec<usize> = (0..g.len()).collect();
    let k0 = FgAbGroup::from_presentation(pv_matrix(g, &all));
    let unit = vec![Int::from(1); g.len()];
    let to_k0 = ideals
        .points
        .iter()
        .enumerate()
        .map(|(x, &h)| GroupMorphism::new(extension.m0().group(x).clone(), k0.clone(), inclusion(&members(h), &all)))
        .collect::<Result<_>>()?;
    Ok(XkInvariant {
        graph: g.clone(),
        ideals,
        q,
        extension,
        delta,
        k0,
        unit,
        to_k0,
    })
}

/// `colim XK₀ → K₀`, the map through which the unit is compared.
pub fn colimit_map(inv: &XkInvariant) -> Result<GroupMorphism> {
    let xk0 = inv.xk0();
    let p = inv.poset();
    let sum = FgAbGroup::direct_sum(xk0.groups());
    let offs: Vec<usize> = xk0
        .groups()
        .iter()
        .scan(0, |acc, g| {
            let o = *acc;
            *acc += g.generators();
            Some(o)
        })
        .collect();
    // Relations v_y − ι(v_y) for each arrow y → x.
    let mut rel = sum.relations().clone();
    for (i, &(y, x)) in p.arrows().iter().enumerate() {
        let ny = xk0.group(y).generators();
        let mut block = IntMatrix::zeros(sum.generators(), ny);
        block.set_block(offs[y], 0, &IntMatrix::identity(ny));
        let neg = -xk0.arrow_map(i).matrix();
        block.set_block(offs[x], 0, &neg);
        rel = rel.hstack(&block);
    }
    let colim = FgAbGroup::from_presentation(rel);
    let m = IntMatrix::hconcat(inv.k0.generators(), &inv.to_k0.iter().map(|f| f.matrix().clone()).collect::<Vec<_>>());
    GroupMorphism::new(colim, inv.k0.clone(), m)
}

/// `XK₁(U_x)` is free at every point.
pub fn k1_is_free(inv: &XkInvariant) -> bool {
    inv.xk1().groups().iter().all(FgAbGroup::is_free)
}

/// Kernel and cokernel of `I − Aᵗ` on the full vertex set.
pub fn whole_k_theory(g: &DirectedGraph) -> Result<(FgAbGroup, FgAbGroup)> {
    let all: Vec<usize> = (0..g.len()).collect();
    let d = GroupMorphism::new(FgAbGroup::free(g.len()), FgAbGroup::free(g.len()), pv_matrix(g, &all))?;
    let k1 = cohomology(None, d.source(), Some(&d))?.group().clone();
    Ok((FgAbGroup::from_presentation(d.matrix().clone()), k1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::is_isomorphism;

    fn g(adj: &[&[u32]]) -> DirectedGraph {
        DirectedGraph::from_adjacency(&adj.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn cuntz_algebras() {
        for n in 2..=6u32 {
            let inv = xk_invariant(&g(&[&[n]])).unwrap();
            assert_eq!(inv.poset().len(), 1);
            assert_eq!(inv.xk0().group(0).describe(), FgAbGroup::cyclic(i64::from(n) - 1).describe());
            assert!(inv.xk1().is_zero());
            assert!(inv.delta.is_zero().unwrap());
            assert_eq!(inv.k0.element_order(&inv.unit), Some(Int::from(n - 1)));
        }
    }

    #[test]
    fn two_presentations_of_o2() {
        let a = xk_invariant(&g(&[&[2]])).unwrap();
        let b = xk_invariant(&g(&[&[1, 1], &[1, 1]])).unwrap();
        for inv in [&a, &b] {
            assert!(inv.xk0().is_zero() && inv.xk1().is_zero());
            assert!(inv.delta.ambient.group().is_trivial());
        }
    }

    #[test]
    fn sierpinski_prim() {
        let inv = xk_invariant(&g(&[&[3, 1], &[0, 2]])).unwrap();
        assert_eq!(inv.poset().len(), 2);
        assert!(k1_is_free(&inv));
        assert!(is_isomorphism(&colimit_map(&inv).unwrap()).unwrap());
    }
}
