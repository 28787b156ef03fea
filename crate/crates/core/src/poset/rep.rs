use std::sync::Arc;

use crate::abelian::{
    cohomology, hom_contravariant, hom_covariant, hom_z, is_exact_at, is_injective, is_surjective,
    FgAbGroup, GroupMorphism, HomGroup, Subquotient,
};
use crate::error::{Error, Result};
use crate::matrix::{Int, IntMatrix};
use crate::poset::poset::FinitePoset;
use crate::snf::LatticeSolver;

/// A ℤ[X]-module: a group at every point and a map `V_y → V_x` for every
/// arrow `y → x`, with all chain composites between two points equal.
#[derive(Clone, Debug)]
pub struct QuiverRep {
    poset: Arc<FinitePoset>,
    groups: Vec<FgAbGroup>,
    maps: Vec<GroupMorphism>,
}

impl PartialEq for QuiverRep {
    fn eq(&self, other: &Self) -> bool {
        self.poset == other.poset
            && self.groups == other.groups
            && self.maps.iter().zip(&other.maps).all(|(a, b)| a.matrix() == b.matrix())
    }
}

impl QuiverRep {
    /// `maps[i]` is the matrix for arrow `poset.arrows()[i]`.
    pub fn new(poset: Arc<FinitePoset>, groups: Vec<FgAbGroup>, maps: Vec<IntMatrix>) -> Result<Self> {
        if groups.len() != poset.len() {
            return Err(Error::Dimension(format!(
                "expected {} point groups, got {}",
                poset.len(),
                groups.len()
            )));
        }
        if maps.len() != poset.arrows().len() {
            return Err(Error::Dimension(format!(
                "expected {} arrow maps, got {}",
                poset.arrows().len(),
                maps.len()
            )));
        }
        let mut ms = Vec::with_capacity(maps.len());
        for (m, &(y, x)) in maps.into_iter().zip(poset.arrows()) {
            ms.push(GroupMorphism::new(groups[y].clone(), groups[x].clone(), m)?);
        }
        let rep = QuiverRep {
            poset,
            groups,
            maps: ms,
        };
        rep.check_composites()?;
        Ok(rep)
    }

    fn new_unchecked(poset: Arc<FinitePoset>, groups: Vec<FgAbGroup>, maps: Vec<GroupMorphism>) -> Self {
        QuiverRep { poset, groups, maps }
    }

    fn check_composites(&self) -> Result<()> {
        if self.poset.is_unique_path_space().is_yes() {
            return Ok(());
        }
        let n = self.poset.len();
        for y in 0..n {
            for x in 0..n {
                if x == y || !self.poset.leq(x, y) {
                    continue;
                }
                let chains = self.poset.chains(y, x);
                let first = self.chain_map(&chains[0])?;
                for c in &chains[1..] {
                    if !self.chain_map(c)?.same_map(&first) {
                        return Err(Error::Domain(format!(
                            "composites from `{}` to `{}` disagree",
                            self.poset.labels()[y],
                            self.poset.labels()[x]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn chain_map(&self, points: &[usize]) -> Result<GroupMorphism> {
        let mut f = GroupMorphism::identity(&self.groups[points[0]]);
        for w in points.windows(2) {
            let a = self.poset.arrow_index(w[0], w[1]).expect("chain follows arrows");
            f = self.maps[a].compose(&f)?;
        }
        Ok(f)
    }

    pub fn zero(poset: Arc<FinitePoset>) -> Self {
        let n = poset.len();
        let groups = vec![FgAbGroup::trivial(); n];
        let maps = poset
            .arrows()
            .iter()
            .map(|_| GroupMorphism::zero(&FgAbGroup::trivial(), &FgAbGroup::trivial()))
            .collect();
        Self::new_unchecked(poset, groups, maps)
    }

    pub fn poset(&self) -> &Arc<FinitePoset> {
        &self.poset
    }

    pub fn group(&self, x: usize) -> &FgAbGroup {
        &self.groups[x]
    }

    pub fn groups(&self) -> &[FgAbGroup] {
        &self.groups
    }

    pub fn arrow_map(&self, i: usize) -> &GroupMorphism {
        &self.maps[i]
    }

    pub fn arrow_maps(&self) -> &[GroupMorphism] {
        &self.maps
    }

    /// Structure map `V_y → V_x` for `x ⪯ y`.
    pub fn structure_map(&self, y: usize, x: usize) -> GroupMorphism {
        let path = self.poset.down_path(y, x).expect("x ⪯ y");
        let mut f = GroupMorphism::identity(&self.groups[y]);
        for &a in path {
            f = self.maps[a].compose(&f).expect("composable");
        }
        f
    }

    pub fn is_zero(&self) -> bool {
        self.groups.iter().all(FgAbGroup::is_trivial)
    }

    pub fn all_free(&self) -> bool {
        self.groups.iter().all(FgAbGroup::is_free)
    }

    pub fn direct_sum(&self, other: &QuiverRep) -> Result<QuiverRep> {
        same_poset(self, other)?;
        let groups = self
            .groups
            .iter()
            .zip(&other.groups)
            .map(|(a, b)| FgAbGroup::direct_sum(&[a.clone(), b.clone()]))
            .collect();
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| IntMatrix::block_diag(&[a.matrix().clone(), b.matrix().clone()]))
            .collect();
        QuiverRep::new(self.poset.clone(), groups, maps)
    }

    /// The same module over `target`, moving point `i` to `perm[i]`.
    pub fn transport(&self, perm: &[usize], target: Arc<FinitePoset>) -> Result<QuiverRep> {
        let n = self.poset.len();
        let mut groups = vec![FgAbGroup::trivial(); n];
        for i in 0..n {
            groups[perm[i]] = self.groups[i].clone();
        }
        let mut maps = Vec::with_capacity(target.arrows().len());
        for &(y, x) in target.arrows() {
            let yi = perm.iter().position(|&p| p == y).expect("bijection");
            let xi = perm.iter().position(|&p| p == x).expect("bijection");
            let a = self
                .poset
                .arrow_index(yi, xi)
                .ok_or_else(|| Error::Domain("permutation is not a poset isomorphism".into()))?;
            maps.push(self.maps[a].matrix().clone());
        }
        QuiverRep::new(target, groups, maps)
    }
}

fn same_poset(a: &QuiverRep, b: &QuiverRep) -> Result<()> {
    if a.poset != b.poset {
        return Err(Error::Domain("modules live over different posets".into()));
    }
    Ok(())
}

/// A family of group morphisms `f_x: V_x → W_x` commuting with arrows.
#[derive(Clone, Debug)]
pub struct RepMorphism {
    source: QuiverRep,
    target: QuiverRep,
    components: Vec<GroupMorphism>,
}

impl RepMorphism {
    pub fn new(source: QuiverRep, target: QuiverRep, matrices: Vec<IntMatrix>) -> Result<Self> {
        same_poset(&source, &target)?;
        if matrices.len() != source.poset.len() {
            return Err(Error::Dimension("one component per point is required".into()));
        }
        let mut components = Vec::with_capacity(matrices.len());
        for (x, m) in matrices.into_iter().enumerate() {
            components.push(GroupMorphism::new(source.groups[x].clone(), target.groups[x].clone(), m)?);
        }
        for (i, &(y, x)) in source.poset.arrows().iter().enumerate() {
            let lhs = target.maps[i].compose(&components[y])?;
            let rhs = components[x].compose(&source.maps[i])?;
            if !lhs.same_map(&rhs) {
                return Err(Error::Domain(format!(
                    "components do not commute with arrow {} -> {}",
                    source.poset.labels()[y],
                    source.poset.labels()[x]
                )));
            }
        }
        Ok(RepMorphism {
            source,
            target,
            components,
        })
    }

    pub fn identity(v: &QuiverRep) -> Self {
        let components = v.groups.iter().map(GroupMorphism::identity).collect();
        RepMorphism {
            source: v.clone(),
            target: v.clone(),
            components,
        }
    }

    pub fn zero(v: &QuiverRep, w: &QuiverRep) -> Self {
        let components = v.groups.iter().zip(&w.groups).map(|(a, b)| GroupMorphism::zero(a, b)).collect();
        RepMorphism {
            source: v.clone(),
            target: w.clone(),
            components,
        }
    }

    pub fn source(&self) -> &QuiverRep {
        &self.source
    }

    pub fn target(&self) -> &QuiverRep {
        &self.target
    }

    pub fn component(&self, x: usize) -> &GroupMorphism {
        &self.components[x]
    }

    pub fn components(&self) -> &[GroupMorphism] {
        &self.components
    }

    pub fn compose(&self, first: &RepMorphism) -> Result<RepMorphism> {
        let components = self
            .components
            .iter()
            .zip(&first.components)
            .map(|(g, f)| g.compose(f))
            .collect::<Result<_>>()?;
        Ok(RepMorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            components,
        })
    }

    pub fn add(&self, other: &RepMorphism) -> Result<RepMorphism> {
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(RepMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            components,
        })
    }

    pub fn neg(&self) -> RepMorphism {
        RepMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            components: self.components.iter().map(GroupMorphism::neg).collect(),
        }
    }

    pub fn same_map(&self, other: &RepMorphism) -> bool {
        self.components.iter().zip(&other.components).all(|(a, b)| a.same_map(b))
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(GroupMorphism::is_zero)
    }

    pub fn is_injective(&self) -> Result<bool> {
        for c in &self.components {
            if !is_injective(c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_surjective(&self) -> Result<bool> {
        for c in &self.components {
            if !is_surjective(c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_isomorphism(&self) -> Result<bool> {
        Ok(self.is_injective()? && self.is_surjective()?)
    }

    /// The same morphism between transported modules, as in
    /// [`QuiverRep::transport`].
    pub fn transport(&self, perm: &[usize], target: Arc<FinitePoset>) -> Result<RepMorphism> {
        let src = self.source.transport(perm, target.clone())?;
        let tgt = self.target.transport(perm, target)?;
        let mut comps = vec![IntMatrix::zeros(0, 0); perm.len()];
        for (i, c) in self.components.iter().enumerate() {
            comps[perm[i]] = c.matrix().clone();
        }
        RepMorphism::new(src, tgt, comps)
    }

    /// Kernel with its inclusion.
    pub fn kernel(&self) -> Result<RepMorphism> {
        let v = &self.source;
        let mut groups = Vec::new();
        let mut incl = Vec::new();
        for c in &self.components {
            let z = cohomology(None, c.source(), Some(c))?;
            groups.push(z.group().clone());
            incl.push(z.basis().clone());
        }
        let mut maps = Vec::new();
        for (i, &(y, x)) in v.poset.arrows().iter().enumerate() {
            let img = v.maps[i].matrix() * &incl[y];
            maps.push(factor_through(&img, &incl[x], v.groups[x].relations())?);
        }
        let k = QuiverRep::new(v.poset.clone(), groups, maps)?;
        RepMorphism::new(k, v.clone(), incl)
    }

    /// Cokernel with its projection.
    pub fn cokernel(&self) -> Result<RepMorphism> {
        let w = &self.target;
        let mut groups = Vec::new();
        for c in &self.components {
            groups.push(cohomology(Some(c), c.target(), None)?.group().clone());
        }
        let maps = w.maps.iter().map(|m| m.matrix().clone()).collect();
        let q = QuiverRep::new(w.poset.clone(), groups, maps)?;
        let proj = w.groups.iter().map(|g| IntMatrix::identity(g.generators())).collect();
        RepMorphism::new(w.clone(), q, proj)
    }

    /// `g` with `self ∘ g = h`, for `h` landing in the image of `self`.
    pub fn lift(&self, h: &RepMorphism) -> Result<RepMorphism> {
        let mut comps = Vec::new();
        for x in 0..self.components.len() {
            comps.push(factor_through(
                h.components[x].matrix(),
                self.components[x].matrix(),
                self.target.groups[x].relations(),
            )?);
        }
        RepMorphism::new(h.source.clone(), self.source.clone(), comps)
    }
}

/// Solves `a·c ≡ b` column by column modulo the columns of `rel`.
pub(crate) fn factor_through(b: &IntMatrix, a: &IntMatrix, rel: &IntMatrix) -> Result<IntMatrix> {
    let solver = LatticeSolver::new(&a.hstack(rel));
    let k = a.cols();
    let mut cols = Vec::with_capacity(b.cols());
    for j in 0..b.cols() {
        let sol = solver
            .solve(&b.column(j))
            .ok_or_else(|| Error::Domain("element does not lift".into()))?;
        cols.push(sol[..k].to_vec());
    }
    Ok(IntMatrix::from_columns(k, &cols))
}

/// Pointwise exactness of `f` then `g`.
pub fn rep_exact_at(f: &RepMorphism, g: &RepMorphism) -> Result<bool> {
    for x in 0..f.components.len() {
        if !is_exact_at(&f.components[x], &g.components[x])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Hom_{ℤ[X]}(V, W)` as the kernel of
/// `⊕ₓ Hom(Vₓ, Wₓ) → ⊕_{y→x} Hom(V_y, Wₓ)`, `f ↦ w∘f_y − f_x∘v`.
#[derive(Clone, Debug)]
pub struct RepHom {
    pub source: QuiverRep,
    pub target: QuiverRep,
    pub point_homs: Vec<HomGroup>,
    pub group: Subquotient,
}

pub fn rep_hom(v: &QuiverRep, w: &QuiverRep) -> Result<RepHom> {
    same_poset(v, w)?;
    let p = v.poset.clone();
    let point_homs: Vec<HomGroup> = (0..p.len()).map(|x| hom_z(&v.groups[x], &w.groups[x])).collect();
    let arrow_homs: Vec<HomGroup> = p.arrows().iter().map(|&(y, x)| hom_z(&v.groups[y], &w.groups[x])).collect();
    let c0 = FgAbGroup::direct_sum(&point_homs.iter().map(|h| h.group().clone()).collect::<Vec<_>>());
    let c1 = FgAbGroup::direct_sum(&arrow_homs.iter().map(|h| h.group().clone()).collect::<Vec<_>>());
    let off0 = offsets(point_homs.iter().map(|h| h.group().generators()));
    let off1 = offsets(arrow_homs.iter().map(|h| h.group().generators()));
    let mut d = IntMatrix::zeros(c1.generators(), c0.generators());
    for (i, &(y, x)) in p.arrows().iter().enumerate() {
        let push = hom_covariant(&w.maps[i], &point_homs[y], &arrow_homs[i])?;
        let pull = hom_contravariant(&v.maps[i], &point_homs[x], &arrow_homs[i])?;
        let cur = d.block(off1[i], off0[y], push.matrix().rows(), push.matrix().cols());
        d.set_block(off1[i], off0[y], &(&cur + push.matrix()));
        let cur = d.block(off1[i], off0[x], pull.matrix().rows(), pull.matrix().cols());
        d.set_block(off1[i], off0[x], &(&cur - pull.matrix()));
    }
    let d = GroupMorphism::new(c0.clone(), c1, d)?;
    let group = cohomology(None, &c0, Some(&d))?;
    Ok(RepHom {
        source: v.clone(),
        target: w.clone(),
        point_homs,
        group,
    })
}

impl RepHom {
    /// The morphism with the given group coordinates.
    pub fn morphism(&self, coords: &[Int]) -> Result<RepMorphism> {
        let v = self.group.element(coords);
        let mut comps = Vec::new();
        let mut off = 0;
        for h in &self.point_homs {
            let k = h.group().generators();
            comps.push(h.morphism(&v[off..off + k]).matrix().clone());
            off += k;
        }
        RepMorphism::new(self.source.clone(), self.target.clone(), comps)
    }
}

pub(crate) fn offsets(sizes: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut out = Vec::new();
    let mut acc = 0;
    for s in sizes {
        out.push(acc);
        acc += s;
    }
    out
}

/// The projective `⊕ₓ ℤ[X]eₓ ⊗ ℤ^{nₓ}`. Its group at `w` is
/// `⊕_{x ⪰ w} ℤ^{nₓ}`, in increasing order of `x`; structure maps are
/// coordinate inclusions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projective {
    pub mult: Vec<usize>,
}

impl Projective {
    /// `(x, offset)` for every block of the group at `w`.
    pub fn layout(&self, poset: &FinitePoset, w: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut off = 0;
        for x in 0..poset.len() {
            if poset.leq(w, x) {
                out.push((x, off));
                off += self.mult[x];
            }
        }
        out
    }

    pub fn rank_at(&self, poset: &FinitePoset, w: usize) -> usize {
        (0..poset.len()).filter(|&x| poset.leq(w, x)).map(|x| self.mult[x]).sum()
    }

    pub fn generators(&self) -> usize {
        self.mult.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.generators() == 0
    }

    /// Coordinate inclusion from the group at `u` into the group at `w ⪯ u`.
    pub fn inclusion(&self, poset: &FinitePoset, u: usize, w: usize) -> IntMatrix {
        let lu = self.layout(poset, u);
        let lw = self.layout(poset, w);
        let mut m = IntMatrix::zeros(self.rank_at(poset, w), self.rank_at(poset, u));
        for &(x, ou) in &lu {
            let ow = lw.iter().find(|&&(z, _)| z == x).expect("U_u ⊆ U_w").1;
            for j in 0..self.mult[x] {
                m.set(ow + j, ou + j, Int::from(1));
            }
        }
        m
    }

    pub fn rep(&self, poset: &Arc<FinitePoset>) -> QuiverRep {
        let groups = (0..poset.len()).map(|w| FgAbGroup::free(self.rank_at(poset, w))).collect();
        let maps = poset.arrows().iter().map(|&(y, x)| self.inclusion(poset, y, x)).collect();
        QuiverRep::new(poset.clone(), groups, maps).expect("projective module is well defined")
    }
}

/// A morphism out of a projective, given by the images of its generators:
/// `images[x]` has one column per generator at `x`, in the target's group at `x`.
#[derive(Clone, Debug)]
pub struct ProjMap {
    pub source: Projective,
    pub images: Vec<IntMatrix>,
}

impl ProjMap {
    /// The component at `w` as a matrix on the source group at `w`.
    pub fn at(&self, target: &QuiverRep, w: usize) -> IntMatrix {
        let p = target.poset();
        let rows = target.group(w).generators();
        let mut blocks = Vec::new();
        for (x, _) in self.source.layout(p, w) {
            let s = target.structure_map(x, w);
            blocks.push(s.matrix() * &self.images[x]);
        }
        IntMatrix::hconcat(rows, &blocks)
    }

    pub fn to_rep_morphism(&self, target: &QuiverRep) -> Result<RepMorphism> {
        let src = self.source.rep(target.poset());
        let comps = (0..target.poset().len()).map(|w| self.at(target, w)).collect();
        RepMorphism::new(src, target.clone(), comps)
    }

    /// `self ∘ d` for `d` from another projective into `self.source`.
    pub fn after(&self, d: &ProjMap, target: &QuiverRep) -> ProjMap {
        let images = (0..target.poset().len())
            .map(|x| &self.at(target, x) * &d.images[x])
            .collect();
        ProjMap {
            source: d.source.clone(),
            images,
        }
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &RepMorphism) -> ProjMap {
        let images = self.images.iter().enumerate().map(|(x, m)| g.component(x).matrix() * m).collect();
        ProjMap {
            source: self.source.clone(),
            images,
        }
    }

    /// Lifts through `e: A → B`, where `self` maps into `B`.
    pub fn lift_through(&self, e: &RepMorphism) -> Result<ProjMap> {
        let images = self
            .images
            .iter()
            .enumerate()
            .map(|(x, m)| factor_through(m, e.component(x).matrix(), e.target().group(x).relations()))
            .collect::<Result<_>>()?;
        Ok(ProjMap {
            source: self.source.clone(),
            images,
        })
    }

    pub fn add(&self, other: &ProjMap) -> ProjMap {
        ProjMap {
            source: self.source.clone(),
            images: self.images.iter().zip(&other.images).map(|(a, b)| a + b).collect(),
        }
    }

    /// Generator images concatenated point by point: an element of
    /// `Hom(P, W) = ⊕ₓ Wₓ^{nₓ}`.
    pub fn to_cochain(&self) -> Vec<Int> {
        let mut out = Vec::new();
        for m in &self.images {
            out.extend(m.vec_col_major());
        }
        out
    }

    pub fn from_cochain(source: &Projective, target: &QuiverRep, v: &[Int]) -> ProjMap {
        let mut images = Vec::new();
        let mut off = 0;
        for (x, &n) in source.mult.iter().enumerate() {
            let k = target.group(x).generators();
            images.push(IntMatrix::from_vec_col_major(k, n, &v[off..off + k * n]));
            off += k * n;
        }
        ProjMap {
            source: source.clone(),
            images,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sier(a: FgAbGroup, b: FgAbGroup, m: IntMatrix) -> QuiverRep {
        QuiverRep::new(Arc::new(FinitePoset::sierpinski()), vec![b, a], vec![m]).unwrap()
    }

    #[test]
    fn composites_must_agree_on_the_diamond() {
        let d = Arc::new(FinitePoset::diamond());
        let z = FgAbGroup::free(1);
        let one = IntMatrix::from_rows(&[[1]]);
        let neg = IntMatrix::from_rows(&[[-1]]);
        let groups = vec![z.clone(); 4];
        // Arrows sorted: (1,0), (2,0), (3,1), (3,2).
        assert!(QuiverRep::new(d.clone(), groups.clone(), vec![one.clone(); 4]).is_ok());
        let err = QuiverRep::new(d, groups, vec![one.clone(), one.clone(), one, neg]).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn hom_of_sierpinski_modules() {
        // V = (Z →2 Z), W = (Z →1 Z): Hom = {(a, b) : b·2 = a} ≅ Z.
        let z = FgAbGroup::free(1);
        let v = sier(z.clone(), z.clone(), IntMatrix::from_rows(&[[2]]));
        let w = sier(z.clone(), z, IntMatrix::from_rows(&[[1]]));
        let h = rep_hom(&v, &w).unwrap();
        assert_eq!(h.group.group().describe(), "Z");
        let f = h.morphism(&[Int::from(1)]).unwrap();
        assert!(!f.is_zero());
    }

    #[test]
    fn kernel_and_cokernel_are_exact() {
        let z = FgAbGroup::free(1);
        let v = sier(z.clone(), z.clone(), IntMatrix::from_rows(&[[1]]));
        let f = RepMorphism::new(v.clone(), v.clone(), vec![IntMatrix::from_rows(&[[2]]); 2]).unwrap();
        let k = f.kernel().unwrap();
        let c = f.cokernel().unwrap();
        assert!(k.source().is_zero());
        assert_eq!(c.target().group(0).describe(), "Z/2");
        assert!(rep_exact_at(&f, &c).unwrap());
        assert!(rep_exact_at(&k, &f).unwrap());
    }

    #[test]
    fn projective_layout() {
        let p = Arc::new(FinitePoset::chain(3));
        let proj = Projective { mult: vec![1, 0, 2] };
        assert_eq!(proj.rank_at(&p, 0), 3);
        assert_eq!(proj.rank_at(&p, 2), 2);
        let r = proj.rep(&p);
        assert!(r.structure_map(2, 0).matrix().rows() == 3);
    }
}
