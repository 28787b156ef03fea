//! The bimodule sequence
//! `0 → ⊕_{y→x} P_{x⊗y} → ⊕ₓ P_{x⊗x} → ℤ[X] → 0`, with
//! `P_{x⊗y} = ℤ[X]eₓ ⊗ e_yℤ[X]` on the basis `f_{w⪯x} ⊗ f_{y⪯z}`.
//! On a unique path space `f_{w⪯x} ⊗ f_{x⪯z}` is the chain from `z` down
//! to `w` with `x` marked, and the left basis marks two consecutive points.

use crate::abelian::{is_exact_at, FgAbGroup, GroupMorphism};
use crate::error::{Error, Result};
use crate::matrix::{Int, IntMatrix};
use crate::poset::poset::FinitePoset;
use crate::snf::snf;

#[derive(Clone, Debug)]
pub struct BimoduleComplex {
    /// Basis of the left term: `(arrow, w, z)`.
    pub left_basis: Vec<(usize, usize, usize)>,
    /// Basis of the middle term: `(x, w, z)` with `w ⪯ x ⪯ z`.
    pub middle_basis: Vec<(usize, usize, usize)>,
    /// Basis of `ℤ[X]`: `(w, z)` with `w ⪯ z`.
    pub right_basis: Vec<(usize, usize)>,
    pub left_map: IntMatrix,
    pub right_map: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimoduleReport {
    /// Ranks of left, middle and right terms.
    pub ranks: [usize; 3],
    pub is_complex: bool,
    pub injective: bool,
    pub exact_middle: bool,
    pub surjective: bool,
}

impl BimoduleReport {
    pub fn exact(&self) -> bool {
        self.is_complex && self.injective && self.exact_middle && self.surjective
    }
}

/// Materialises the sequence for any finite poset.
pub fn bimodule_complex(p: &FinitePoset) -> BimoduleComplex {
    let n = p.len();
    let mut right_basis = Vec::new();
    for w in 0..n {
        for z in 0..n {
            if p.leq(w, z) {
                right_basis.push((w, z));
            }
        }
    }
    let mut middle_basis = Vec::new();
    for x in 0..n {
        for w in 0..n {
            for z in 0..n {
                if p.leq(w, x) && p.leq(x, z) {
                    middle_basis.push((x, w, z));
                }
            }
        }
    }
    let mut left_basis = Vec::new();
    for (a, &(y, x)) in p.arrows().iter().enumerate() {
        for w in 0..n {
            for z in 0..n {
                if p.leq(w, x) && p.leq(y, z) {
                    left_basis.push((a, w, z));
                }
            }
        }
    }
    let mid_idx = |t: (usize, usize, usize)| middle_basis.iter().position(|&b| b == t).expect("basis element");
    let right_idx = |t: (usize, usize)| right_basis.iter().position(|&b| b == t).expect("basis element");
    let mut left_map = IntMatrix::zeros(middle_basis.len(), left_basis.len());
    for (j, &(a, w, z)) in left_basis.iter().enumerate() {
        let (y, x) = p.arrows()[a];
        // f_{w⪯x} ⊗ f_{y⪯z} ↦ f_{w⪯x} ⊗ f_{x⪯z} − f_{w⪯y} ⊗ f_{y⪯z}.
        left_map.set(mid_idx((x, w, z)), j, Int::from(1));
        left_map.set(mid_idx((y, w, z)), j, Int::from(-1));
    }
    let mut right_map = IntMatrix::zeros(right_basis.len(), middle_basis.len());
    for (j, &(_, w, z)) in middle_basis.iter().enumerate() {
        right_map.set(right_idx((w, z)), j, Int::from(1));
    }
    BimoduleComplex {
        left_basis,
        middle_basis,
        right_basis,
        left_map,
        right_map,
    }
}

impl BimoduleComplex {
    pub fn report(&self) -> Result<BimoduleReport> {
        let l = FgAbGroup::free(self.left_basis.len());
        let m = FgAbGroup::free(self.middle_basis.len());
        let r = FgAbGroup::free(self.right_basis.len());
        let f = GroupMorphism::new(l.clone(), m.clone(), self.left_map.clone())?;
        let g = GroupMorphism::new(m, r.clone(), self.right_map.clone())?;
        let injective = snf(&self.left_map).rank == self.left_map.cols();
        let s = snf(&self.right_map);
        let surjective = s.rank == self.right_map.rows() && s.diagonal().iter().all(|d| d == &Int::from(1));
        let zero_in = GroupMorphism::zero(&FgAbGroup::trivial(), &l);
        Ok(BimoduleReport {
            ranks: [self.left_basis.len(), self.middle_basis.len(), self.right_basis.len()],
            is_complex: g.compose(&f)?.is_zero(),
            injective: injective && is_exact_at(&zero_in, &f)?,
            exact_middle: is_exact_at(&f, &g)?,
            surjective,
        })
    }
}

/// Builds and checks the bimodule resolution of a unique path space.
pub fn verify_bimodule_resolution(p: &FinitePoset) -> Result<BimoduleReport> {
    if !p.is_unique_path_space().is_yes() {
        return Err(Error::Precondition("not a unique path space".into()));
    }
    bimodule_complex(p).report()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let one = verify_bimodule_resolution(&FinitePoset::chain(1)).unwrap();
        assert_eq!(one.ranks, [0, 1, 1]);
        assert!(one.exact());
        let s = verify_bimodule_resolution(&FinitePoset::sierpinski()).unwrap();
        assert_eq!(s.ranks, [1, 4, 3]);
        assert!(s.exact());
        assert!(verify_bimodule_resolution(&FinitePoset::chain(5)).unwrap().exact());
    }

    #[test]
    fn diamond_is_rejected_and_not_exact() {
        let d = FinitePoset::diamond();
        assert!(matches!(verify_bimodule_resolution(&d), Err(Error::Precondition(_))));
        assert!(!bimodule_complex(&d).report().unwrap().exact());
    }
}
