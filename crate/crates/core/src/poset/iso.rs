use crate::abelian::iso_groups;
use crate::error::Result;
use crate::matrix::Int;
use crate::par;
use crate::poset::rep::{rep_hom, QuiverRep, RepMorphism};

#[derive(Clone, Copy, Debug)]
pub struct RepBounds {
    /// Coordinate bound when `Hom(V, W)` is infinite.
    pub max_entry: i64,
    /// Maximum number of candidates examined.
    pub budget: usize,
}

impl Default for RepBounds {
    fn default() -> Self {
        RepBounds {
            max_entry: 2,
            budget: 20000,
        }
    }
}

#[derive(Clone, Debug)]
pub enum RepIsoVerdict {
    Yes(RepMorphism),
    No { point: Option<usize> },
    Unknown { candidates_tried: usize },
}

/// Elements of `Hom(V, W)`: all of them when the group is finite and small
/// enough, otherwise a box of coordinates. The flag marks completeness.
pub fn hom_candidates(v: &QuiverRep, w: &QuiverRep, bounds: &RepBounds) -> Result<(Vec<RepMorphism>, bool)> {
    let h = rep_hom(v, w)?;
    let g = h.group.group();
    let (coords, complete) = match g.elements(bounds.budget) {
        Some(e) => (e, true),
        None => (box_coords(g.generators(), bounds.max_entry, bounds.budget), false),
    };
    let out = par::map_collect(coords, |c| h.morphism(&c).ok())
        .into_iter()
        .flatten()
        .collect();
    Ok((out, complete))
}

/// Vectors in `[-b, b]^d` by increasing max-norm, up to `limit` of them.
pub fn box_coords(d: usize, b: i64, limit: usize) -> Vec<Vec<Int>> {
    let mut out = vec![vec![Int::from(0); d]];
    for s in 1..=b {
        let mut v = vec![-s; d];
        loop {
            if v.iter().any(|x| x.abs() == s) {
                out.push(v.iter().map(|&x| Int::from(x)).collect());
                if out.len() >= limit {
                    return out;
                }
            }
            let mut i = 0;
            loop {
                if i == d {
                    break;
                }
                v[i] += 1;
                if v[i] <= s {
                    break;
                }
                v[i] = -s;
                i += 1;
            }
            if i == d {
                break;
            }
        }
    }
    out
}

/// Module isomorphisms `V → W` among the bounded candidates.
pub fn rep_isomorphisms(v: &QuiverRep, w: &QuiverRep, bounds: &RepBounds) -> Result<(Vec<RepMorphism>, bool)> {
    let (cands, complete) = hom_candidates(v, w, bounds)?;
    let mut isos: Vec<RepMorphism> = par::map_collect(cands, |f| match f.is_isomorphism() {
        Ok(true) => Some(f),
        _ => None,
    })
    .into_iter()
    .flatten()
    .collect();
    if v == w {
        let id = RepMorphism::identity(v);
        if let Some(pos) = isos.iter().position(|f| f.same_map(&id)) {
            isos.remove(pos);
        }
        isos.insert(0, id);
    }
    Ok((isos, complete))
}

pub fn rep_iso_bounded(v: &QuiverRep, w: &QuiverRep, bounds: &RepBounds) -> Result<RepIsoVerdict> {
    if v.poset() != w.poset() {
        return Ok(RepIsoVerdict::No { point: None });
    }
    for x in 0..v.poset().len() {
        if !iso_groups(v.group(x), w.group(x)).is_iso() {
            return Ok(RepIsoVerdict::No { point: Some(x) });
        }
    }
    if v == w {
        return Ok(RepIsoVerdict::Yes(RepMorphism::identity(v)));
    }
    let (cands, complete) = hom_candidates(v, w, bounds)?;
    let tried = cands.len();
    let found = par::find_map_first(cands, |f| f.is_isomorphism().ok()?.then_some(f));
    Ok(match found {
        Some(f) => RepIsoVerdict::Yes(f),
        None if complete => RepIsoVerdict::No { point: None },
        None => RepIsoVerdict::Unknown {
            candidates_tried: tried,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::FgAbGroup;
    use crate::matrix::IntMatrix;
    use crate::poset::poset::FinitePoset;
    use std::sync::Arc;

    fn sier(top: FgAbGroup, bottom: FgAbGroup, m: IntMatrix) -> QuiverRep {
        QuiverRep::new(Arc::new(FinitePoset::sierpinski()), vec![bottom, top], vec![m]).unwrap()
    }

    #[test]
    fn sign_change_is_absorbed() {
        let z = FgAbGroup::free(1);
        let v = sier(z.clone(), z.clone(), IntMatrix::from_rows(&[[3]]));
        let w = sier(z.clone(), z, IntMatrix::from_rows(&[[-3]]));
        match rep_iso_bounded(&v, &w, &RepBounds::default()).unwrap() {
            RepIsoVerdict::Yes(f) => assert!(f.is_isomorphism().unwrap()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pointwise_difference_and_finite_search() {
        let v = sier(FgAbGroup::cyclic(2), FgAbGroup::cyclic(4), IntMatrix::from_rows(&[[2]]));
        let w = sier(FgAbGroup::cyclic(2), FgAbGroup::cyclic(2), IntMatrix::from_rows(&[[1]]));
        assert!(matches!(
            rep_iso_bounded(&v, &w, &RepBounds::default()).unwrap(),
            RepIsoVerdict::No { point: Some(0) }
        ));
        // Z/2 →0 Z/2 versus Z/2 →1 Z/2: same groups, not isomorphic.
        let a = sier(FgAbGroup::cyclic(2), FgAbGroup::cyclic(2), IntMatrix::from_rows(&[[0]]));
        let b = sier(FgAbGroup::cyclic(2), FgAbGroup::cyclic(2), IntMatrix::from_rows(&[[1]]));
        assert!(matches!(
            rep_iso_bounded(&a, &b, &RepBounds::default()).unwrap(),
            RepIsoVerdict::No { point: None }
        ));
        assert!(matches!(rep_iso_bounded(&a, &a, &RepBounds::default()).unwrap(), RepIsoVerdict::Yes(_)));
    }

    #[test]
    fn box_is_ordered_by_norm() {
        let b = box_coords(2, 1, 100);
        assert_eq!(b.len(), 9);
        assert!(b[0].iter().all(|x| x == &Int::from(0)));
    }
}
