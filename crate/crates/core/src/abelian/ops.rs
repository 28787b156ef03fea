use crate::abelian::group::{FgAbGroup, GroupMorphism};
use crate::abelian::subquotient::{cohomology, Subquotient};
use crate::error::Result;
use crate::matrix::{Int, IntMatrix};
use crate::snf::LatticeSolver;

/// Kernel with its inclusion and cokernel with its projection.
#[derive(Clone, Debug)]
pub struct KernelCokernel {
    pub kernel: FgAbGroup,
    pub inclusion: GroupMorphism,
    pub cokernel: FgAbGroup,
    pub projection: GroupMorphism,
}

pub fn kernel_cokernel(f: &GroupMorphism) -> Result<KernelCokernel> {
    let ker = cohomology(None, f.source(), Some(f))?;
    let coker = cohomology(Some(f), f.target(), None)?;
    let inclusion =
        GroupMorphism::new_unchecked(ker.group().clone(), f.source().clone(), ker.basis().clone());
    let projection = GroupMorphism::new_unchecked(
        f.target().clone(),
        coker.group().clone(),
        IntMatrix::identity(f.target().generators()),
    );
    Ok(KernelCokernel {
        kernel: ker.group().clone(),
        inclusion,
        cokernel: coker.group().clone(),
        projection,
    })
}

/// Kernel as a subquotient of the source generator space.
pub fn kernel_subquotient(f: &GroupMorphism) -> Result<Subquotient> {
    cohomology(None, f.source(), Some(f))
}

pub fn is_injective(f: &GroupMorphism) -> Result<bool> {
    Ok(kernel_subquotient(f)?.group().is_trivial())
}

pub fn is_surjective(f: &GroupMorphism) -> Result<bool> {
    Ok(cohomology(Some(f), f.target(), None)?.group().is_trivial())
}

pub fn is_isomorphism(f: &GroupMorphism) -> Result<bool> {
    Ok(is_injective(f)? && is_surjective(f)?)
}

/// Outcome of an isomorphism test with an explicit witness.
#[derive(Clone, Debug)]
pub enum IsoDecision {
    Isomorphic(GroupMorphism),
    NotIsomorphic,
}

impl IsoDecision {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoDecision::Isomorphic(_))
    }
}

/// Isomorphism test by invariant factors; on success the witness sends the
/// Smith basis of `v` to the Smith basis of `w`.
pub fn iso_groups(v: &FgAbGroup, w: &FgAbGroup) -> IsoDecision {
    if v.invariant_factors() != w.invariant_factors() {
        return IsoDecision::NotIsomorphic;
    }
    let m = w.from_smith_matrix() * v.to_smith_matrix();
    IsoDecision::Isomorphic(GroupMorphism::new_unchecked(v.clone(), w.clone(), m))
}

/// Exactness of `a →f→ b →g→ c` at `b`: `g∘f = 0` and every element of
/// `ker g` lies in `im f` (checked by lattice membership).
pub fn is_exact_at(f: &GroupMorphism, g: &GroupMorphism) -> Result<bool> {
    let comp = g.compose(f)?;
    if !comp.is_zero() {
        return Ok(false);
    }
    let ker = kernel_subquotient(g)?;
    let im = f.matrix().hstack(f.target().relations());
    let solver = LatticeSolver::new(&im);
    Ok((0..ker.basis().cols()).all(|j| solver.contains(&ker.basis().column(j))))
}

/// Checks `0 → ker → source → target → coker → 0` for the output of
/// [`kernel_cokernel`].
pub fn check_kernel_cokernel(f: &GroupMorphism, kc: &KernelCokernel) -> Result<bool> {
    let zero_in = GroupMorphism::zero(&FgAbGroup::trivial(), &kc.kernel);
    let zero_out = GroupMorphism::zero(&kc.cokernel, &FgAbGroup::trivial());
    Ok(is_exact_at(&zero_in, &kc.inclusion)?
        && is_exact_at(&kc.inclusion, f)?
        && is_exact_at(f, &kc.projection)?
        && is_exact_at(&kc.projection, &zero_out)?)
}

/// Image of `x` under the quotient map to Smith coordinates (exposed for reports).
pub fn smith_coordinates(g: &FgAbGroup, x: &[Int]) -> Vec<Int> {
    g.reduce(x)
}
