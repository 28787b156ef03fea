//! `Extⁿ_{ℤ[X]}(V, W)`.
//!
//! The main route is `Hⁿ(Hom(P_•, W))` for a projective resolution. On
//! unique path spaces a second route tensors the bimodule resolution with
//! free ℤ-presentations `Vₓ = coker(Rₓ)`, `ℤ^{mₓ} → ℤ^{nₓ}`:
//!
//! ```text
//! C⁰ = ⊕ₓ Wₓ^{nₓ}
//! C¹ = ⊕ₓ Wₓ^{mₓ} ⊕ ⊕_{i: y→x} Wₓ^{n_y}
//! C² = ⊕_{i: y→x} Wₓ^{m_y}
//! δ⁰(φ)   = (φₓRₓ, wᵢφ_y − φₓAᵢ)
//! δ¹(α,β) = wᵢα_y − αₓLᵢ − βᵢR_y
//! ```
//!
//! with `Aᵢ` the matrix of `vᵢ` and `RₓLᵢ = AᵢR_y`.

use crate::abelian::{
    cohomology, ext1_z, iso_groups, kernel_cokernel, relation_lift, FgAbGroup, GroupMorphism,
    Subquotient,
};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::poset::rep::{offsets, QuiverRep};
use crate::poset::resolution::{resolve_projective, ProjResolution};

/// An Ext group with the resolution it was computed from.
#[derive(Clone, Debug)]
pub struct PosetExt {
    pub degree: usize,
    pub group: Subquotient,
    pub resolution: ProjResolution,
}

/// `Extⁿ` through a projective resolution; on unique path spaces the
/// total-complex route is computed as well and must agree.
pub fn ext_poset(v: &QuiverRep, w: &QuiverRep, n: usize) -> Result<PosetExt> {
    ext_poset_seeded(v, w, n, None)
}

pub fn ext_poset_seeded(v: &QuiverRep, w: &QuiverRep, n: usize, seed: Option<u64>) -> Result<PosetExt> {
    if v.poset() != w.poset() {
        return Err(Error::Domain("modules live over different posets".into()));
    }
    let resolution = resolve_projective(v, n + 1, seed)?;
    let group = resolution.ext(w, n)?;
    if v.poset().is_unique_path_space().is_yes() {
        let other = if n <= 2 {
            ups_ext(v, w)?[n].clone()
        } else {
            FgAbGroup::trivial()
        };
        if !iso_groups(group.group(), &other).is_iso() {
            return Err(Error::Internal(format!(
                "Ext^{n} disagrees between routes: {} vs {}",
                group.group().describe(),
                other.describe()
            )));
        }
    }
    Ok(PosetExt {
        degree: n,
        group,
        resolution,
    })
}

fn power(g: &FgAbGroup, n: usize) -> Vec<FgAbGroup> {
    vec![g.clone(); n]
}

/// `[Hom, Ext¹, Ext²]` from the total complex; valid on unique path spaces.
pub fn ups_ext(v: &QuiverRep, w: &QuiverRep) -> Result<[FgAbGroup; 3]> {
    let p = v.poset();
    if !p.is_unique_path_space().is_yes() {
        return Err(Error::Precondition("not a unique path space".into()));
    }
    let pts = p.len();
    let arrows = p.arrows();
    let rel: Vec<IntMatrix> = (0..pts).map(|x| v.group(x).relation_basis().clone()).collect();
    let ng: Vec<usize> = (0..pts).map(|x| v.group(x).generators()).collect();
    let mg: Vec<usize> = rel.iter().map(IntMatrix::cols).collect();
    let k: Vec<usize> = (0..pts).map(|x| w.group(x).generators()).collect();
    let lifts: Vec<IntMatrix> = (0..arrows.len())
        .map(|i| relation_lift(v.arrow_map(i)))
        .collect::<Result<_>>()?;

    // Block layouts: C⁰ by point, C¹ = (points, relations) then (arrows, gens), C² by arrow.
    let c0_parts: Vec<FgAbGroup> = (0..pts).flat_map(|x| power(w.group(x), ng[x])).collect();
    let mut c1_parts: Vec<FgAbGroup> = (0..pts).flat_map(|x| power(w.group(x), mg[x])).collect();
    c1_parts.extend(arrows.iter().flat_map(|&(y, x)| power(w.group(x), ng[y])));
    let c2_parts: Vec<FgAbGroup> = arrows.iter().flat_map(|&(y, x)| power(w.group(x), mg[y])).collect();
    let c0 = FgAbGroup::direct_sum(&c0_parts);
    let c1 = FgAbGroup::direct_sum(&c1_parts);
    let c2 = FgAbGroup::direct_sum(&c2_parts);

    let o0 = offsets((0..pts).map(|x| ng[x] * k[x]));
    let o1a = offsets((0..pts).map(|x| mg[x] * k[x]));
    let base1b: usize = (0..pts).map(|x| mg[x] * k[x]).sum();
    let o1b: Vec<usize> = offsets(arrows.iter().map(|&(y, x)| ng[y] * k[x]))
        .into_iter()
        .map(|o| o + base1b)
        .collect();
    let o2 = offsets(arrows.iter().map(|&(y, x)| mg[y] * k[x]));

    let add = |m: &mut IntMatrix, r: usize, c: usize, b: &IntMatrix| {
        if b.rows() == 0 || b.cols() == 0 {
            return;
        }
        let cur = m.block(r, c, b.rows(), b.cols());
        m.set_block(r, c, &(&cur + b));
    };
    // φ ↦ φM on column-major vec(φ) is (Mᵗ ⊗ I); ψ ↦ Nψ is (I ⊗ N).
    let right = |m: &IntMatrix, kk: usize| m.transpose().kron(&IntMatrix::identity(kk));
    let left = |cols: usize, n: &IntMatrix| IntMatrix::identity(cols).kron(n);

    let mut d0 = IntMatrix::zeros(c1.generators(), c0.generators());
    for x in 0..pts {
        add(&mut d0, o1a[x], o0[x], &right(&rel[x], k[x]));
    }
    for (i, &(y, x)) in arrows.iter().enumerate() {
        let wi = w.arrow_map(i).matrix();
        let ai = v.arrow_map(i).matrix();
        add(&mut d0, o1b[i], o0[y], &left(ng[y], wi));
        add(&mut d0, o1b[i], o0[x], &-&right(ai, k[x]));
    }
    let mut d1 = IntMatrix::zeros(c2.generators(), c1.generators());
    for (i, &(y, x)) in arrows.iter().enumerate() {
        let wi = w.arrow_map(i).matrix();
        add(&mut d1, o2[i], o1a[y], &left(mg[y], wi));
        add(&mut d1, o2[i], o1a[x], &-&right(&lifts[i], k[x]));
        add(&mut d1, o2[i], o1b[i], &-&right(&rel[y], k[x]));
    }
    let d0 = GroupMorphism::new(c0.clone(), c1.clone(), d0)?;
    let d1 = GroupMorphism::new(c1.clone(), c2.clone(), d1)?;
    if !d1.compose(&d0)?.is_zero() {
        return Err(Error::Internal("total complex is not a complex".into()));
    }
    Ok([
        cohomology(None, &c0, Some(&d0))?.group().clone(),
        cohomology(Some(&d0), &c1, Some(&d1))?.group().clone(),
        cohomology(Some(&d1), &c2, None)?.group().clone(),
    ])
}

/// `Ext¹_ℤ(ker φ, coker ψ)`: Ext² over the Sierpiński space between
/// `G₁ →φ G₂` and `H₁ →ψ H₂`.
pub fn sierpinski_ext2(phi: &GroupMorphism, psi: &GroupMorphism) -> Result<FgAbGroup> {
    let k = kernel_cokernel(phi)?.kernel;
    let c = kernel_cokernel(psi)?.cokernel;
    Ok(ext1_z(&k, &c).group().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::poset::FinitePoset;
    use std::sync::Arc;

    fn sier(top: FgAbGroup, bottom: FgAbGroup, m: IntMatrix) -> QuiverRep {
        QuiverRep::new(Arc::new(FinitePoset::sierpinski()), vec![bottom, top], vec![m]).unwrap()
    }

    #[test]
    fn sierpinski_torsion_example() {
        let v = sier(FgAbGroup::cyclic(2), FgAbGroup::trivial(), IntMatrix::zeros(0, 1));
        let w = sier(FgAbGroup::trivial(), FgAbGroup::cyclic(2), IntMatrix::zeros(1, 0));
        let e = ext_poset(&v, &w, 2).unwrap();
        assert_eq!(e.group.group().describe(), "Z/2");
        let phi = GroupMorphism::zero(&FgAbGroup::cyclic(2), &FgAbGroup::trivial());
        let psi = GroupMorphism::zero(&FgAbGroup::trivial(), &FgAbGroup::cyclic(2));
        assert_eq!(sierpinski_ext2(&phi, &psi).unwrap().describe(), "Z/2");
    }

    #[test]
    fn one_point_and_discrete_spaces_have_no_ext2() {
        for n in 1..=3 {
            let p = Arc::new(FinitePoset::discrete(n));
            let g = vec![FgAbGroup::cyclic(6); n];
            let v = QuiverRep::new(p.clone(), g.clone(), vec![]).unwrap();
            let w = QuiverRep::new(p, vec![FgAbGroup::cyclic(4); n], vec![]).unwrap();
            assert!(ext_poset(&v, &w, 2).unwrap().group.group().is_trivial());
            assert_eq!(ext_poset(&v, &w, 1).unwrap().group.group().describe(), format!("{}", vec!["Z/2"; n].join(" + ")));
        }
    }

    #[test]
    fn diamond_uses_resolution_route_only() {
        let d = Arc::new(FinitePoset::diamond());
        let z = FgAbGroup::free(1);
        let v = QuiverRep::new(d.clone(), vec![z.clone(); 4], vec![IntMatrix::identity(1); 4]).unwrap();
        let e0 = ext_poset(&v, &v, 0).unwrap();
        assert_eq!(e0.group.group().describe(), "Z");
        assert!(ups_ext(&v, &v).is_err());
    }
}
