use crate::abelian::group::{FgAbGroup, GroupMorphism};
use crate::error::{Error, Result};
use crate::matrix::{Int, IntMatrix};
use crate::snf::{preimage_basis, LatticeSolver};

/// A subquotient `Z / B` of `ℤᴺ` with `B ⊆ Z`, presented on a basis of `Z`.
///
/// Elements of the group are vectors of `Z` ("cocycles"); the group
/// generators are the basis columns, so every computed element carries an
/// explicit representative.
#[derive(Clone, Debug)]
pub struct Subquotient {
    basis: IntMatrix,
    solver: LatticeSolver,
    group: FgAbGroup,
}

impl Subquotient {
    /// `basis` must have independent columns spanning `Z`; `boundaries`
    /// are generators of `B` (columns), each lying in `Z`.
    pub fn new(basis: IntMatrix, boundaries: &IntMatrix) -> Result<Self> {
        assert_eq!(basis.rows(), boundaries.rows());
        let solver = LatticeSolver::new(&basis);
        let mut rel_cols = Vec::with_capacity(boundaries.cols());
        for j in 0..boundaries.cols() {
            let c = solver.solve(&boundaries.column(j)).ok_or_else(|| {
                Error::Internal("boundary lattice is not contained in the cycle lattice".into())
            })?;
            rel_cols.push(c);
        }
        let relations = IntMatrix::from_columns(basis.cols(), &rel_cols);
        Ok(Subquotient {
            basis,
            solver,
            group: FgAbGroup::from_presentation(relations),
        })
    }

    /// `ℤᴺ / B`.
    pub fn quotient(n: usize, boundaries: &IntMatrix) -> Self {
        let basis = IntMatrix::identity(n);
        let solver = LatticeSolver::new(&basis);
        Subquotient {
            basis,
            solver,
            group: FgAbGroup::from_presentation(boundaries.clone()),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    /// Generator coordinates of a vector of `Z`; `None` if it is not in `Z`.
    pub fn coords(&self, v: &[Int]) -> Option<Vec<Int>> {
        self.solver.solve(v)
    }

    pub fn element(&self, coords: &[Int]) -> Vec<Int> {
        self.basis.mul_vec(coords)
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.solver.contains(v)
    }

    /// Whether the vector (of `Z`) represents zero, i.e. lies in `B`.
    pub fn is_boundary(&self, v: &[Int]) -> Option<bool> {
        self.coords(v).map(|c| self.group.is_zero_element(&c))
    }

    /// Matrix of a map on ambient vectors, expressed on the generators of
    /// `self` and `target`. `f` must send `Z` into `target`'s `Z`.
    pub fn induced<F>(&self, target: &Subquotient, f: F) -> Result<GroupMorphism>
    where
        F: Fn(&[Int]) -> Vec<Int>,
    {
        let mut cols = Vec::with_capacity(self.basis.cols());
        for j in 0..self.basis.cols() {
            let img = f(&self.basis.column(j));
            let c = target.coords(&img).ok_or_else(|| {
                Error::Internal("induced map leaves the target cycle lattice".into())
            })?;
            cols.push(c);
        }
        let m = IntMatrix::from_columns(target.basis.cols(), &cols);
        GroupMorphism::new(self.group.clone(), target.group.clone(), m)
    }
}

/// Cohomology at `group` of `… →prev→ group →next→ …`: the subquotient of
/// the generator space of `group` given by `ker(next) / (im(prev) + relations)`.
pub fn cohomology(
    prev: Option<&GroupMorphism>,
    group: &FgAbGroup,
    next: Option<&GroupMorphism>,
) -> Result<Subquotient> {
    let n = group.generators();
    let mut b = group.relations().clone();
    if let Some(p) = prev {
        if p.target() != group {
            return Err(Error::Dimension("incoming map does not land in the group".into()));
        }
        b = p.matrix().hstack(&b);
    }
    match next {
        None => Ok(Subquotient::quotient(n, &b)),
        Some(f) => {
            if f.source() != group {
                return Err(Error::Dimension("outgoing map does not start at the group".into()));
            }
            let z = preimage_basis(f.matrix(), f.target().relations());
            Subquotient::new(z, &b)
        }
    }
}
