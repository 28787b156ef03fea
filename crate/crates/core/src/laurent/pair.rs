//! Isomorphism in the pair category: graded modules with an obstruction
//! class `δ ∈ Ext²_R(M, M[−1]) = Ext²(M₊, M₋) ⊕ Ext²(M₋, M₊)`.

use crate::abelian::{is_isomorphism, iso_groups, relation_lift, GroupMorphism};
use crate::error::{Error, Result};
use crate::laurent::ext::{ext_r_fg, ExtRFg};
use crate::laurent::module::{GradedRModule, RModule, RModuleFg};
use crate::laurent::shift::Bounds;
use crate::matrix::{Int, IntMatrix};
use crate::par;

/// A graded module with an obstruction class. Each component of `δ` is an
/// `Ext¹_ℤ` cocycle (`k × m` matrix on the relation basis of the source)
/// representing a class in the corresponding `Ext²_R` block.
#[derive(Clone, Debug)]
pub struct PairDelta {
    pub even: RModuleFg,
    pub odd: RModuleFg,
    /// Component in `Ext²_R(M₊, M₋)`.
    pub delta_even_odd: IntMatrix,
    /// Component in `Ext²_R(M₋, M₊)`.
    pub delta_odd_even: IntMatrix,
}

fn fg_part(m: &RModule) -> Result<RModuleFg> {
    match m {
        RModule::Fg(f) => Ok(f.clone()),
        RModule::Pres(p) => p.to_fg()?.ok_or_else(|| {
            Error::UnsupportedShape("pair isomorphism needs modules finitely generated over Z".into())
        }),
    }
}

impl PairDelta {
    pub fn new(module: &GradedRModule, delta_even_odd: IntMatrix, delta_odd_even: IntMatrix) -> Result<Self> {
        let even = fg_part(&module.even)?;
        let odd = fg_part(&module.odd)?;
        let check = |d: &IntMatrix, src: &RModuleFg, tgt: &RModuleFg| -> Result<()> {
            let (k, m) = (tgt.group().generators(), src.group().relation_basis().cols());
            if d.rows() != k || d.cols() != m {
                return Err(Error::Dimension(format!(
                    "delta component must be {k}x{m}, got {}x{}",
                    d.rows(),
                    d.cols()
                )));
            }
            Ok(())
        };
        check(&delta_even_odd, &even, &odd)?;
        check(&delta_odd_even, &odd, &even)?;
        Ok(PairDelta {
            even,
            odd,
            delta_even_odd,
            delta_odd_even,
        })
    }

    /// `δ = 0`.
    pub fn zero(module: &GradedRModule) -> Result<Self> {
        let even = fg_part(&module.even)?;
        let odd = fg_part(&module.odd)?;
        let d1 = IntMatrix::zeros(odd.group().generators(), even.group().relation_basis().cols());
        let d2 = IntMatrix::zeros(even.group().generators(), odd.group().relation_basis().cols());
        Self::new(module, d1, d2)
    }

    /// Whether both components are zero classes.
    pub fn is_zero(&self) -> Result<bool> {
        let a = ext_r_fg(&self.even, &self.odd)?;
        let b = ext_r_fg(&self.odd, &self.even)?;
        Ok(a.ext2_is_zero(&self.delta_even_odd.vec_col_major())
            && b.ext2_is_zero(&self.delta_odd_even.vec_col_major()))
    }
}

#[derive(Clone, Debug)]
pub enum PairVerdict {
    Yes { even: GroupMorphism, odd: GroupMorphism },
    No { reason: String },
    Unknown { candidates_tried: usize },
}

/// R-linear isomorphisms `v → w` from the generators of `Hom_R(v, w)`:
/// every element when the group is finite, otherwise coordinates bounded
/// by `max_entry`. The flag reports whether the list is complete.
fn iso_candidates(e: &ExtRFg, bounds: &Bounds, identity_first: bool) -> Result<(Vec<GroupMorphism>, bool)> {
    let h = e.hom_r.group();
    let (coords, complete): (Vec<Vec<Int>>, bool) = match h.elements(bounds.budget) {
        Some(elems) => (elems, true),
        None => {
            let d = h.generators();
            let mut out = Vec::new();
            let b = bounds.max_entry;
            let mut v = vec![-b; d];
            'outer: loop {
                out.push(v.iter().map(|x| Int::from(*x)).collect());
                if out.len() >= bounds.budget {
                    break;
                }
                let mut i = 0;
                loop {
                    if i == d {
                        break 'outer;
                    }
                    v[i] += 1;
                    if v[i] <= b {
                        break;
                    }
                    v[i] = -b;
                    i += 1;
                }
            }
            (out, false)
        }
    };
    let to_morphism = |c: &Vec<Int>| e.hom_z.morphism(&e.hom_r.element(c));
    let mut isos: Vec<GroupMorphism> = par::map_collect(coords, |c| {
        let f = to_morphism(&c);
        match is_isomorphism(&f) {
            Ok(true) => Some(f),
            _ => None,
        }
    })
    .into_iter()
    .flatten()
    .collect();
    if identity_first {
        let id = GroupMorphism::identity(e.source().group());
        if let Some(pos) = isos.iter().position(|f| f.same_map(&id)) {
            isos.remove(pos);
            isos.insert(0, id);
        } else if !complete {
            isos.insert(0, id);
        }
    }
    Ok((isos, complete))
}

/// `(f_tgt)_* δ₁ = (f_src)^* δ₂` in `Ext²_R(src₁, tgt₂)`.
fn block_compatible(
    ambient: &ExtRFg,
    delta1: &IntMatrix,
    delta2: &IntMatrix,
    f_src: &GroupMorphism,
    f_tgt: &GroupMorphism,
) -> Result<bool> {
    let push = f_tgt.matrix() * delta1;
    let lift = relation_lift(f_src)?;
    let pull = delta2 * &lift;
    let diff = (&push - &pull).vec_col_major();
    Ok(ambient.ext2_is_zero(&diff))
}

/// Searches for a graded R-module isomorphism `f: M₁ → M₂` with
/// `f ∘ δ₁ = δ₂ ∘ f`.
pub fn pair_iso(p1: &PairDelta, p2: &PairDelta, bounds: &Bounds) -> Result<PairVerdict> {
    for (a, b, part) in [(&p1.even, &p2.even, "even"), (&p1.odd, &p2.odd, "odd")] {
        if !iso_groups(a.group(), b.group()).is_iso() {
            return Ok(PairVerdict::No {
                reason: format!("{part} parts have non-isomorphic groups"),
            });
        }
    }
    let z1 = p1.is_zero()?;
    let z2 = p2.is_zero()?;
    let same_modules = p1.even == p2.even && p1.odd == p2.odd;
    let he = ext_r_fg(&p1.even, &p2.even)?;
    let ho = ext_r_fg(&p1.odd, &p2.odd)?;
    let (even_isos, even_complete) = iso_candidates(&he, bounds, same_modules)?;
    let (odd_isos, odd_complete) = iso_candidates(&ho, bounds, same_modules)?;
    let complete = even_complete && odd_complete;
    if complete && (even_isos.is_empty() || odd_isos.is_empty()) {
        return Ok(PairVerdict::No {
            reason: "the graded modules are not isomorphic".into(),
        });
    }
    if z1 != z2 && !(even_isos.is_empty() || odd_isos.is_empty()) {
        // Induced maps of isomorphisms are isomorphisms: zero ↔ zero.
        return Ok(PairVerdict::No {
            reason: "exactly one obstruction class is zero".into(),
        });
    }
    let eo = ext_r_fg(&p1.even, &p2.odd)?;
    let oe = ext_r_fg(&p1.odd, &p2.even)?;
    let mut pairs = Vec::new();
    'fill: for fe in &even_isos {
        for fo in &odd_isos {
            if pairs.len() >= bounds.budget {
                break 'fill;
            }
            pairs.push((fe.clone(), fo.clone()));
        }
    }
    let exhausted = pairs.len() == even_isos.len() * odd_isos.len();
    let tried = pairs.len();
    let found = par::find_map_first(pairs, |(fe, fo)| {
        let ok = block_compatible(&eo, &p1.delta_even_odd, &p2.delta_even_odd, &fe, &fo).ok()?
            && block_compatible(&oe, &p1.delta_odd_even, &p2.delta_odd_even, &fo, &fe).ok()?;
        ok.then_some((fe, fo))
    });
    Ok(match found {
        Some((even, odd)) => PairVerdict::Yes { even, odd },
        None if complete && exhausted => PairVerdict::No {
            reason: "no module isomorphism is compatible with the obstruction classes".into(),
        },
        None => PairVerdict::Unknown {
            candidates_tried: tried,
        },
    })
}

/// Convenience for callers holding classes as coordinate vectors.
pub fn cocycle_from_coords(rows: usize, cols: usize, coords: &[i64]) -> IntMatrix {
    let v: Vec<Int> = coords.iter().map(|&c| Int::from(c)).collect();
    assert_eq!(v.len(), rows * cols);
    IntMatrix::from_vec_col_major(rows, cols, &v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::FgAbGroup;
    use crate::matrix::ints;

    fn z2_id() -> RModule {
        RModule::Fg(RModuleFg::trivial_action(FgAbGroup::cyclic(2)))
    }

    fn m11() -> GradedRModule {
        GradedRModule::new(z2_id(), z2_id())
    }

    #[test]
    fn zero_classes_reduce_to_module_isomorphism() {
        let p = PairDelta::zero(&m11()).unwrap();
        assert!(matches!(
            pair_iso(&p, &p, &Bounds::default()).unwrap(),
            PairVerdict::Yes { .. }
        ));
        let other = GradedRModule::new(z2_id(), RModule::Fg(RModuleFg::trivial_action(FgAbGroup::cyclic(4))));
        let q = PairDelta::zero(&other).unwrap();
        assert!(matches!(
            pair_iso(&p, &q, &Bounds::default()).unwrap(),
            PairVerdict::No { .. }
        ));
    }

    #[test]
    fn zero_versus_nonzero_class() {
        let m = m11();
        let p1 = PairDelta::zero(&m).unwrap();
        let one = IntMatrix::from_rows(&[[1]]);
        let p2 = PairDelta::new(&m, one, IntMatrix::from_rows(&[[0]])).unwrap();
        assert!(!p2.is_zero().unwrap());
        assert!(matches!(
            pair_iso(&p1, &p2, &Bounds::default()).unwrap(),
            PairVerdict::No { .. }
        ));
    }

    #[test]
    fn classes_in_different_blocks_are_not_related() {
        // Aut(Z/2) × Aut(Z/2) is trivial, so (1,0) and (0,1) stay apart.
        let m = m11();
        let one = IntMatrix::from_rows(&[[1]]);
        let zero = IntMatrix::from_rows(&[[0]]);
        let p1 = PairDelta::new(&m, one.clone(), zero.clone()).unwrap();
        let p2 = PairDelta::new(&m, zero, one).unwrap();
        assert!(matches!(
            pair_iso(&p1, &p2, &Bounds::default()).unwrap(),
            PairVerdict::No { .. }
        ));
    }

    #[test]
    fn swap_automorphism_relates_classes() {
        // M₊ = (Z/2)², M₋ = Z/2; the swap of M₊ exchanges the two
        // coordinates of Ext²(M₊, M₋) = Ext¹_Z((Z/2)², Z/2) = (Z/2)².
        let even = RModule::Fg(RModuleFg::trivial_action(FgAbGroup::cyclic_sum(&ints(&[2, 2]))));
        let m = GradedRModule::new(even, z2_id());
        let zero_back = IntMatrix::zeros(2, 1);
        let p1 = PairDelta::new(&m, IntMatrix::from_rows(&[[1, 0]]), zero_back.clone()).unwrap();
        let p2 = PairDelta::new(&m, IntMatrix::from_rows(&[[0, 1]]), zero_back).unwrap();
        match pair_iso(&p1, &p2, &Bounds::default()).unwrap() {
            PairVerdict::Yes { even, .. } => assert!(!even.matrix().is_identity()),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn identity_for_free_modules() {
        let z = RModule::Fg(RModuleFg::trivial_action(FgAbGroup::free(2)));
        let m = GradedRModule::new(z.clone(), z);
        let p = PairDelta::zero(&m).unwrap();
        match pair_iso(&p, &p, &Bounds::default()).unwrap() {
            PairVerdict::Yes { even, odd } => {
                assert!(even.matrix().is_identity() && odd.matrix().is_identity())
            }
            v => panic!("{v:?}"),
        }
    }
}
