use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{vec_is_zero, Int, IntMatrix};
use crate::snf::{image_basis, snf};

/// A finitely generated abelian group `ℤⁿ / im(relations)`.
///
/// The generator basis of the presentation is kept; the Smith view
/// (`⊕ ℤ/dᵢ`) is derived and only used for coordinates and comparisons.
#[derive(Clone)]
pub struct FgAbGroup(Arc<GroupData>);

struct GroupData {
    relations: IntMatrix,
    relation_basis: IntMatrix,
    /// Non-unit invariant factors, torsion first, then zeros for free factors.
    factors: Vec<Int>,
    /// Rows of the Smith transform for the non-unit coordinates (`k × n`).
    to_smith: IntMatrix,
    /// Generator-space images of the Smith basis (`n × k`).
    from_smith: IntMatrix,
}

impl FgAbGroup {
    /// Group on `relations.rows()` generators whose relations are the
    /// columns of `relations`.
    pub fn from_presentation(relations: IntMatrix) -> Self {
        let n = relations.rows();
        let m = relations.cols();
        let s = snf(&relations);
        let mut factors = Vec::new();
        let mut idx = Vec::new();
        for i in 0..n {
            let d = if i < m {
                s.d.get(i, i).clone()
            } else {
                Int::zero()
            };
            if !d.is_one() {
                factors.push(d);
                idx.push(i);
            }
        }
        let to_smith = s.u.select_rows(&idx);
        let from_smith = s.u_inv.select_columns(&idx);
        let relation_basis = image_basis(&relations);
        FgAbGroup(Arc::new(GroupData {
            relations,
            relation_basis,
            factors,
            to_smith,
            from_smith,
        }))
    }

    /// `ℤⁿ`.
    pub fn free(n: usize) -> Self {
        Self::from_presentation(IntMatrix::zeros(n, 0))
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    /// `⊕ ℤ/dᵢ` on one generator per factor (`0` gives a free summand).
    pub fn cyclic_sum(orders: &[Int]) -> Self {
        Self::from_presentation(IntMatrix::diagonal(orders))
    }

    pub fn cyclic(order: i64) -> Self {
        Self::cyclic_sum(&[Int::from(order)])
    }

    pub fn generators(&self) -> usize {
        self.0.relations.rows()
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.0.relations
    }

    /// A basis of the relation lattice (injective relation matrix).
    pub fn relation_basis(&self) -> &IntMatrix {
        &self.0.relation_basis
    }

    /// Invariant factors `d₁ | d₂ | …`, units dropped, `0` for each free summand.
    pub fn invariant_factors(&self) -> &[Int] {
        &self.0.factors
    }

    pub fn free_rank(&self) -> usize {
        self.0.factors.iter().filter(|d| d.is_zero()).count()
    }

    pub fn torsion_factors(&self) -> Vec<Int> {
        self.0
            .factors
            .iter()
            .filter(|d| !d.is_zero())
            .cloned()
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.factors.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.0.factors.iter().all(Zero::is_zero)
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<Int> {
        if self.is_finite() {
            Some(self.0.factors.iter().fold(Int::one(), |acc, d| acc * d))
        } else {
            None
        }
    }

    /// Smith-coordinate rank (number of non-unit factors).
    pub fn smith_rank(&self) -> usize {
        self.0.factors.len()
    }

    pub fn to_smith_matrix(&self) -> &IntMatrix {
        &self.0.to_smith
    }

    pub fn from_smith_matrix(&self) -> &IntMatrix {
        &self.0.from_smith
    }

    /// Reduced Smith coordinates of a generator-space vector; two vectors
    /// represent the same element iff their coordinates agree.
    pub fn reduce(&self, x: &[Int]) -> Vec<Int> {
        let y = self.0.to_smith.mul_vec(x);
        y.into_iter()
            .zip(&self.0.factors)
            .map(|(v, d)| if d.is_zero() { v } else { v.mod_floor(d) })
            .collect()
    }

    /// Generator-space representative of Smith coordinates.
    pub fn lift(&self, coords: &[Int]) -> Vec<Int> {
        self.0.from_smith.mul_vec(coords)
    }

    pub fn is_zero_element(&self, x: &[Int]) -> bool {
        vec_is_zero(&self.reduce(x))
    }

    pub fn elements_equal(&self, a: &[Int], b: &[Int]) -> bool {
        self.reduce(a) == self.reduce(b)
    }

    /// Additive order of an element, `None` if it has infinite order.
    pub fn element_order(&self, x: &[Int]) -> Option<Int> {
        let c = self.reduce(x);
        let mut ord = Int::one();
        for (v, d) in c.iter().zip(&self.0.factors) {
            if v.is_zero() {
                continue;
            }
            if d.is_zero() {
                return None;
            }
            ord = ord.lcm(&(d / d.gcd(v)));
        }
        Some(ord)
    }

    /// Direct sum with block-diagonal relations.
    pub fn direct_sum(parts: &[FgAbGroup]) -> Self {
        let blocks: Vec<IntMatrix> = parts.iter().map(|g| g.relations().clone()).collect();
        Self::from_presentation(IntMatrix::block_diag(&blocks))
    }

    /// Element enumeration for finite groups as generator-space vectors.
    /// Returns `None` when infinite or larger than `limit`.
    pub fn elements(&self, limit: usize) -> Option<Vec<Vec<Int>>> {
        let order = self.order()?;
        if order > Int::from(limit) {
            return None;
        }
        let factors = &self.0.factors;
        let mut out = Vec::new();
        let mut coords = vec![Int::zero(); factors.len()];
        loop {
            out.push(self.lift(&coords));
            let mut i = 0;
            loop {
                if i == coords.len() {
                    return Some(out);
                }
                coords[i] += 1;
                if coords[i] < factors[i] {
                    break;
                }
                coords[i] = Int::zero();
                i += 1;
            }
        }
    }

    /// Human-readable Smith form, e.g. `Z/2 + Z^2` or `0`.
    pub fn describe(&self) -> String {
        describe_factors(&self.0.factors)
    }
}

pub fn describe_factors(factors: &[Int]) -> String {
    if factors.is_empty() {
        return "0".to_string();
    }
    let mut parts: Vec<String> = factors
        .iter()
        .filter(|d| !d.is_zero())
        .map(|d| format!("Z/{d}"))
        .collect();
    let free = factors.iter().filter(|d| d.is_zero()).count();
    match free {
        0 => {}
        1 => parts.push("Z".to_string()),
        k => parts.push(format!("Z^{k}")),
    }
    parts.join(" + ")
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FgAbGroup({} on {} generators)",
            self.describe(),
            self.generators()
        )
    }
}

impl PartialEq for FgAbGroup {
    /// Equality of presentations (not isomorphism).
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.relations == other.0.relations
    }
}

impl Eq for FgAbGroup {}

/// A homomorphism given by its matrix on the chosen generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupMorphism {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl GroupMorphism {
    /// Checks shape and that every source relation maps to a target relation.
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.generators() || matrix.cols() != source.generators() {
            return Err(Error::Dimension(format!(
                "morphism matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.generators(),
                source.generators()
            )));
        }
        let images = &matrix * source.relations();
        for j in 0..images.cols() {
            if !target.is_zero_element(&images.column(j)) {
                return Err(Error::IllDefined { relation: j });
            }
        }
        Ok(GroupMorphism {
            source,
            target,
            matrix,
        })
    }

    /// Skips the well-definedness check; callers guarantee it by construction.
    pub(crate) fn new_unchecked(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Self {
        debug_assert_eq!(matrix.rows(), target.generators());
        debug_assert_eq!(matrix.cols(), source.generators());
        GroupMorphism {
            source,
            target,
            matrix,
        }
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        Self::new_unchecked(g.clone(), g.clone(), IntMatrix::identity(g.generators()))
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        Self::new_unchecked(
            source.clone(),
            target.clone(),
            IntMatrix::zeros(target.generators(), source.generators()),
        )
    }

    pub fn scalar(g: &FgAbGroup, c: i64) -> Self {
        Self::new_unchecked(
            g.clone(),
            g.clone(),
            IntMatrix::scalar(g.generators(), &Int::from(c)),
        )
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[Int]) -> Vec<Int> {
        self.matrix.mul_vec(x)
    }

    /// `self ∘ first`
    pub fn compose(&self, first: &GroupMorphism) -> Result<GroupMorphism> {
        if first.target != self.source {
            return Err(Error::Dimension("composition of non-composable morphisms".into()));
        }
        Ok(Self::new_unchecked(
            first.source.clone(),
            self.target.clone(),
            &self.matrix * &first.matrix,
        ))
    }

    pub fn add(&self, other: &GroupMorphism) -> Result<GroupMorphism> {
        self.check_parallel(other)?;
        Ok(Self::new_unchecked(
            self.source.clone(),
            self.target.clone(),
            &self.matrix + &other.matrix,
        ))
    }

    pub fn sub(&self, other: &GroupMorphism) -> Result<GroupMorphism> {
        self.check_parallel(other)?;
        Ok(Self::new_unchecked(
            self.source.clone(),
            self.target.clone(),
            &self.matrix - &other.matrix,
        ))
    }

    pub fn neg(&self) -> GroupMorphism {
        Self::new_unchecked(self.source.clone(), self.target.clone(), -&self.matrix)
    }

    fn check_parallel(&self, other: &GroupMorphism) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Dimension("morphisms have different source or target".into()));
        }
        Ok(())
    }

    /// Whether the morphism is zero as a map of groups.
    pub fn is_zero(&self) -> bool {
        (0..self.matrix.cols()).all(|j| self.target.is_zero_element(&self.matrix.column(j)))
    }

    /// Equality as maps of groups (the matrices may differ by relations).
    pub fn same_map(&self, other: &GroupMorphism) -> bool {
        self.source == other.source
            && self.target == other.target
            && (0..self.matrix.cols()).all(|j| {
                self.target
                    .elements_equal(&self.matrix.column(j), &other.matrix.column(j))
            })
    }

    /// Direct sum of morphisms.
    pub fn direct_sum(parts: &[GroupMorphism]) -> GroupMorphism {
        let src: Vec<FgAbGroup> = parts.iter().map(|p| p.source.clone()).collect();
        let tgt: Vec<FgAbGroup> = parts.iter().map(|p| p.target.clone()).collect();
        let blocks: Vec<IntMatrix> = parts.iter().map(|p| p.matrix.clone()).collect();
        Self::new_unchecked(
            FgAbGroup::direct_sum(&src),
            FgAbGroup::direct_sum(&tgt),
            IntMatrix::block_diag(&blocks),
        )
    }

    /// Matrix of the map in Smith coordinates (`k' × k`, entries unreduced).
    pub fn smith_matrix(&self) -> IntMatrix {
        let cols: Vec<Vec<Int>> = (0..self.source.smith_rank())
            .map(|j| {
                let x = self.source.from_smith_matrix().column(j);
                self.target.reduce(&self.matrix.mul_vec(&x))
            })
            .collect();
        IntMatrix::from_columns(self.target.smith_rank(), &cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ints;

    #[test]
    fn presentation_examples() {
        let g = FgAbGroup::from_presentation(IntMatrix::from_rows(&[[2]]));
        assert_eq!(g.invariant_factors(), ints(&[2]).as_slice());
        let g = FgAbGroup::from_presentation(IntMatrix::from_rows(&[[1, 1], [1, -1]]));
        assert_eq!(g.invariant_factors(), ints(&[2]).as_slice());
        let g = FgAbGroup::free(3);
        assert_eq!(g.invariant_factors(), ints(&[0, 0, 0]).as_slice());
        assert_eq!(g.describe(), "Z^3");
    }

    #[test]
    fn element_arithmetic() {
        let g = FgAbGroup::cyclic_sum(&ints(&[2, 0]));
        assert!(g.is_zero_element(&ints(&[4, 0])));
        assert!(!g.is_zero_element(&ints(&[1, 0])));
        assert_eq!(g.element_order(&ints(&[1, 0])), Some(Int::from(2)));
        assert_eq!(g.element_order(&ints(&[0, 1])), None);
        assert_eq!(FgAbGroup::cyclic(6).elements(10).unwrap().len(), 6);
    }

    #[test]
    fn ill_defined_morphism_is_rejected() {
        let z2 = FgAbGroup::cyclic(2);
        let z3 = FgAbGroup::cyclic(3);
        let err = GroupMorphism::new(z2, z3, IntMatrix::from_rows(&[[1]])).unwrap_err();
        assert_eq!(err, Error::IllDefined { relation: 0 });
    }
}
