//! `Hom_ℤ` and `Ext¹_ℤ` with explicit representing bases.
//!
//! For `V = ℤⁿ/im(R_V)` and `W = ℤᵏ/im(R_W)`, a homomorphism is a `k × n`
//! matrix `F` with `F·R_V ⊆ im(R_W)`, modulo matrices with columns in
//! `im(R_W)`. An `Ext¹` cocycle is a `k × m` matrix `C` (images of a basis of
//! the relation lattice of `V`), modulo `F·R_V` and `R_W·G`. Matrices are
//! vectorised column-major.

use crate::abelian::group::{FgAbGroup, GroupMorphism};
use crate::abelian::subquotient::Subquotient;
use crate::error::{Error, Result};
use crate::matrix::{Int, IntMatrix};
use crate::snf::{preimage_basis, LatticeSolver};

#[derive(Clone, Debug)]
pub struct HomGroup {
    source: FgAbGroup,
    target: FgAbGroup,
    sq: Subquotient,
}

impl HomGroup {
    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn group(&self) -> &FgAbGroup {
        self.sq.group()
    }

    pub fn subquotient(&self) -> &Subquotient {
        &self.sq
    }

    /// The homomorphism represented by generator coordinates.
    pub fn morphism(&self, coords: &[Int]) -> GroupMorphism {
        let v = self.sq.element(coords);
        let m = IntMatrix::from_vec_col_major(self.target.generators(), self.source.generators(), &v);
        GroupMorphism::new_unchecked(self.source.clone(), self.target.clone(), m)
    }

    /// Coordinates of a homomorphism `source → target`.
    pub fn coords_of(&self, f: &GroupMorphism) -> Result<Vec<Int>> {
        self.sq
            .coords(&f.matrix().vec_col_major())
            .ok_or_else(|| Error::Internal("morphism not in the Hom lattice".into()))
    }

    /// All basis morphisms, one per generator of the group.
    pub fn basis_morphisms(&self) -> Vec<GroupMorphism> {
        let s = self.sq.basis().cols();
        (0..s)
            .map(|j| {
                let mut e = vec![Int::from(0); s];
                e[j] = Int::from(1);
                self.morphism(&e)
            })
            .collect()
    }
}

pub fn hom_z(v: &FgAbGroup, w: &FgAbGroup) -> HomGroup {
    let n = v.generators();
    let k = w.generators();
    // vec(F R_V) = (R_Vᵗ ⊗ I_k) vec F must lie in (im R_W)^m.
    let lhs = v.relations().transpose().kron(&IntMatrix::identity(k));
    let target_rel = IntMatrix::identity(v.relations().cols()).kron(w.relations());
    let z = preimage_basis(&lhs, &target_rel);
    let b = IntMatrix::identity(n).kron(w.relations());
    let sq = Subquotient::new(z, &b).expect("R_W G always satisfies the cocycle condition");
    HomGroup {
        source: v.clone(),
        target: w.clone(),
        sq,
    }
}

#[derive(Clone, Debug)]
pub struct Ext1Group {
    source: FgAbGroup,
    target: FgAbGroup,
    sq: Subquotient,
}

impl Ext1Group {
    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn group(&self) -> &FgAbGroup {
        self.sq.group()
    }

    pub fn subquotient(&self) -> &Subquotient {
        &self.sq
    }

    /// Number of relation-basis columns of the source (`m`).
    pub fn relation_rank(&self) -> usize {
        self.source.relation_basis().cols()
    }

    /// Cocycle matrix (`k × m`) of generator coordinates.
    pub fn cocycle(&self, coords: &[Int]) -> IntMatrix {
        let v = self.sq.element(coords);
        IntMatrix::from_vec_col_major(self.target.generators(), self.relation_rank(), &v)
    }

    pub fn coords_of(&self, cocycle: &IntMatrix) -> Vec<Int> {
        cocycle.vec_col_major()
    }

    pub fn is_zero_cocycle(&self, cocycle: &IntMatrix) -> bool {
        self.group().is_zero_element(&cocycle.vec_col_major())
    }
}

pub fn ext1_z(v: &FgAbGroup, w: &FgAbGroup) -> Ext1Group {
    let k = w.generators();
    let rb = v.relation_basis();
    let m = rb.cols();
    // Coboundaries F R_V and R_W G.
    let from_hom = rb.transpose().kron(&IntMatrix::identity(k));
    let from_rel = IntMatrix::identity(m).kron(w.relations());
    let b = from_hom.hstack(&from_rel);
    Ext1Group {
        source: v.clone(),
        target: w.clone(),
        sq: Subquotient::quotient(k * m, &b),
    }
}

/// Lift of `f: V' → V` to relation bases: the matrix `L` with
/// `R_V · L = F · R_V'`.
pub fn relation_lift(f: &GroupMorphism) -> Result<IntMatrix> {
    let rb_src = f.source().relation_basis();
    let rb_tgt = f.target().relation_basis();
    let solver = LatticeSolver::new(rb_tgt);
    let image = f.matrix() * rb_src;
    let mut cols = Vec::with_capacity(image.cols());
    for j in 0..image.cols() {
        let c = solver
            .solve(&image.column(j))
            .ok_or(Error::IllDefined { relation: j })?;
        cols.push(c);
    }
    Ok(IntMatrix::from_columns(rb_tgt.cols(), &cols))
}

/// Which functor to apply to a morphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Functor {
    /// `Hom(other, –)`
    HomCovariant,
    /// `Hom(–, other)`
    HomContravariant,
    /// `Ext¹(other, –)`
    Ext1Covariant,
    /// `Ext¹(–, other)`
    Ext1Contravariant,
}

/// An induced map together with the groups (and their bases) it acts on.
#[derive(Clone, Debug)]
pub enum InducedMap {
    Hom {
        domain: HomGroup,
        codomain: HomGroup,
        map: GroupMorphism,
    },
    Ext1 {
        domain: Ext1Group,
        codomain: Ext1Group,
        map: GroupMorphism,
    },
}

impl InducedMap {
    pub fn map(&self) -> &GroupMorphism {
        match self {
            InducedMap::Hom { map, .. } | InducedMap::Ext1 { map, .. } => map,
        }
    }
}

/// `f_*` on `Hom(V, –)`: `F ↦ M_f F`.
pub fn hom_covariant(f: &GroupMorphism, domain: &HomGroup, codomain: &HomGroup) -> Result<GroupMorphism> {
    let n = domain.source.generators();
    let op = IntMatrix::identity(n).kron(f.matrix());
    domain.sq.induced(&codomain.sq, |x| op.mul_vec(x))
}

/// `f^*` on `Hom(–, W)`: `F ↦ F M_f` for `f: V' → V`.
pub fn hom_contravariant(
    f: &GroupMorphism,
    domain: &HomGroup,
    codomain: &HomGroup,
) -> Result<GroupMorphism> {
    let k = domain.target.generators();
    let op = f.matrix().transpose().kron(&IntMatrix::identity(k));
    domain.sq.induced(&codomain.sq, |x| op.mul_vec(x))
}

/// `f_*` on `Ext¹(V, –)`: `C ↦ M_f C`.
pub fn ext1_covariant(
    f: &GroupMorphism,
    domain: &Ext1Group,
    codomain: &Ext1Group,
) -> Result<GroupMorphism> {
    let m = domain.relation_rank();
    let op = IntMatrix::identity(m).kron(f.matrix());
    domain.sq.induced(&codomain.sq, |x| op.mul_vec(x))
}

/// `f^*` on `Ext¹(–, W)`: `C ↦ C L` with `L` the relation lift of `f`.
pub fn ext1_contravariant(
    f: &GroupMorphism,
    domain: &Ext1Group,
    codomain: &Ext1Group,
) -> Result<GroupMorphism> {
    let lift = relation_lift(f)?;
    let k = domain.target.generators();
    let op = lift.transpose().kron(&IntMatrix::identity(k));
    domain.sq.induced(&codomain.sq, |x| op.mul_vec(x))
}

/// Map induced by `f` under one of the four functors, evaluated against `other`.
pub fn induced_map(f: &GroupMorphism, functor: Functor, other: &FgAbGroup) -> Result<InducedMap> {
    // Reject ill-defined input explicitly, even though GroupMorphism::new checks.
    let f = GroupMorphism::new(f.source().clone(), f.target().clone(), f.matrix().clone())?;
    Ok(match functor {
        Functor::HomCovariant => {
            let domain = hom_z(other, f.source());
            let codomain = hom_z(other, f.target());
            let map = hom_covariant(&f, &domain, &codomain)?;
            InducedMap::Hom {
                domain,
                codomain,
                map,
            }
        }
        Functor::HomContravariant => {
            let domain = hom_z(f.target(), other);
            let codomain = hom_z(f.source(), other);
            let map = hom_contravariant(&f, &domain, &codomain)?;
            InducedMap::Hom {
                domain,
                codomain,
                map,
            }
        }
        Functor::Ext1Covariant => {
            let domain = ext1_z(other, f.source());
            let codomain = ext1_z(other, f.target());
            let map = ext1_covariant(&f, &domain, &codomain)?;
            InducedMap::Ext1 {
                domain,
                codomain,
                map,
            }
        }
        Functor::Ext1Contravariant => {
            let domain = ext1_z(f.target(), other);
            let codomain = ext1_z(f.source(), other);
            let map = ext1_contravariant(&f, &domain, &codomain)?;
            InducedMap::Ext1 {
                domain,
                codomain,
                map,
            }
        }
    })
}
