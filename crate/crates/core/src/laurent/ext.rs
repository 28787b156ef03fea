//! `Hom`, `Ext¹`, `Ext²` over `R = ℤ[x, x⁻¹]`.
//!
//! For `V` finitely generated over ℤ with relation basis `R_V` (`n × m`)
//! and `x` acting by `X₀` (lift `X₁` with `R_V X₁ = X₀ R_V`), `V` has the
//! free resolution `0 → Rᵐ → Rᵐ ⊕ Rⁿ → Rⁿ → V`. Applying `Hom_R(–, W)`
//! gives the total complex
//!
//! ```text
//! C⁰ = Wⁿ → C¹ = Wᵐ ⊕ Wⁿ → C² = Wᵐ
//! δ⁰(φ)   = (φ R_V, X_W φ − φ X₀)
//! δ¹(α,β) = X_W α − α X₁ − β R_V
//! ```
//!
//! Hom and Ext² are read off the six-term sequence through
//! `T = (x_W)_* − (x_V)^*`; Ext¹ is the cohomology of the total complex.

use num_traits::Zero;

use crate::abelian::{
    cohomology, ext1_contravariant, ext1_covariant, ext1_z, hom_contravariant, hom_covariant,
    hom_z, is_exact_at, relation_lift, Ext1Group, FgAbGroup, GroupMorphism, HomGroup, Subquotient,
};
use crate::error::{Error, Result};
use crate::laurent::module::{
    LimitGroup, LimitInvariants, LimitModule, Order, RModule, RModuleFg, RModulePres,
};
use crate::laurent::poly::LaurentMatrix;
use crate::matrix::{Int, IntMatrix};
use crate::random::{random_unimodular, Rng};

/// A computed group: finitely generated, or a direct limit when the
/// coefficient module is not finitely generated over ℤ.
#[derive(Clone, Debug)]
pub enum ExtValue {
    Group(FgAbGroup),
    Limit(LimitGroup),
}

impl ExtValue {
    pub fn invariants(&self) -> LimitInvariants {
        match self {
            ExtValue::Group(g) => LimitInvariants {
                torsion: g.torsion_factors(),
                rank: g.free_rank(),
                p_ranks: Vec::new(),
            },
            ExtValue::Limit(l) => l.invariants(),
        }
    }

    pub fn order(&self) -> Order {
        match self {
            ExtValue::Group(g) => g.order().map_or(Order::Infinite, Order::Finite),
            ExtValue::Limit(l) => l.order(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            ExtValue::Group(g) => g.is_trivial(),
            ExtValue::Limit(l) => l.is_trivial(),
        }
    }

    pub fn as_group(&self) -> Option<&FgAbGroup> {
        match self {
            ExtValue::Group(g) => Some(g),
            ExtValue::Limit(_) => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ExtValue::Group(g) => g.describe(),
            ExtValue::Limit(l) => l.invariants().describe(),
        }
    }
}

fn power_group(g: &FgAbGroup, n: usize) -> FgAbGroup {
    FgAbGroup::direct_sum(&vec![g.clone(); n])
}

/// The two-stage total complex computing `Ext*_R(V, W)`.
#[derive(Clone, Debug)]
pub struct TotalComplex {
    pub c0: FgAbGroup,
    pub c1: FgAbGroup,
    pub c2: FgAbGroup,
    pub d0: GroupMorphism,
    pub d1: GroupMorphism,
}

impl TotalComplex {
    fn build(v: &RModuleFg, w: &LimitModule) -> Result<Self> {
        let k = w.group.generators();
        let rv = v.group().relation_basis();
        let n = rv.rows();
        let m = rv.cols();
        let x0 = v.x().matrix();
        let x1 = relation_lift(v.x())?;
        let xw = w.x.matrix();
        let ik = IntMatrix::identity(k);
        let c0 = power_group(&w.group, n);
        let cm = power_group(&w.group, m);
        let c1 = FgAbGroup::direct_sum(&[cm.clone(), c0.clone()]);
        let c2 = cm;
        let top = rv.transpose().kron(&ik);
        let bottom = &IntMatrix::identity(n).kron(xw) - &x0.transpose().kron(&ik);
        let d0 = GroupMorphism::new(c0.clone(), c1.clone(), top.vstack(&bottom))?;
        let left = &IntMatrix::identity(m).kron(xw) - &x1.transpose().kron(&ik);
        let right = -&rv.transpose().kron(&ik);
        let d1 = GroupMorphism::new(c1.clone(), c2.clone(), left.hstack(&right))?;
        Ok(TotalComplex { c0, c1, c2, d0, d1 })
    }

    pub fn is_complex(&self) -> Result<bool> {
        Ok(self.d1.compose(&self.d0)?.is_zero())
    }

    pub fn h0(&self) -> Result<Subquotient> {
        cohomology(None, &self.c0, Some(&self.d0))
    }

    pub fn h1(&self) -> Result<Subquotient> {
        cohomology(Some(&self.d0), &self.c1, Some(&self.d1))
    }

    pub fn h2(&self) -> Result<Subquotient> {
        cohomology(Some(&self.d1), &self.c2, None)
    }
}

/// `Ext*_R(V, W)` for `V` finitely generated over ℤ, with all bases and the
/// maps of the six-term exact sequence.
#[derive(Clone, Debug)]
pub struct ExtRFg {
    source: RModuleFg,
    target: LimitModule,
    pub hom_z: HomGroup,
    pub ext1_z: Ext1Group,
    /// `T` on `Hom_ℤ(V, W)`.
    pub t_hom: GroupMorphism,
    /// `T` on `Ext¹_ℤ(V, W)`.
    pub t_ext: GroupMorphism,
    /// `ker T` inside the generator space of `Hom_ℤ`.
    pub hom_r: Subquotient,
    pub ext1_r: Subquotient,
    /// `coker T` on the generator space of `Ext¹_ℤ`.
    pub ext2_r: Subquotient,
    pub complex: TotalComplex,
}

/// `Ext*_R(V, W)` for finitely generated `V` and `W`.
pub fn ext_r_fg(v: &RModuleFg, w: &RModuleFg) -> Result<ExtRFg> {
    ext_r_fg_limit(v, &RModule::Fg(w.clone()).as_limit()?)
}

/// `Ext*_R(V, W)` for finitely generated `V` and coefficients given as a
/// (possibly non-finitely generated) direct limit.
pub fn ext_r_fg_limit(v: &RModuleFg, w: &LimitModule) -> Result<ExtRFg> {
    let hz = hom_z(v.group(), &w.group);
    let ez = ext1_z(v.group(), &w.group);
    let t_hom = hom_covariant(&w.x, &hz, &hz)?.sub(&hom_contravariant(v.x(), &hz, &hz)?)?;
    let t_ext = ext1_covariant(&w.x, &ez, &ez)?.sub(&ext1_contravariant(v.x(), &ez, &ez)?)?;
    let hom_r = cohomology(None, hz.group(), Some(&t_hom))?;
    let ext2_r = cohomology(Some(&t_ext), ez.group(), None)?;
    let complex = TotalComplex::build(v, w)?;
    let ext1_r = complex.h1()?;
    Ok(ExtRFg {
        source: v.clone(),
        target: w.clone(),
        hom_z: hz,
        ext1_z: ez,
        t_hom,
        t_ext,
        hom_r,
        ext1_r,
        ext2_r,
        complex,
    })
}

impl ExtRFg {
    pub fn source(&self) -> &RModuleFg {
        &self.source
    }

    pub fn target(&self) -> &LimitModule {
        &self.target
    }

    fn wrap(&self, group: &FgAbGroup, shift: Option<Result<GroupMorphism>>) -> Result<ExtValue> {
        Ok(match shift {
            None => ExtValue::Group(group.clone()),
            Some(s) => ExtValue::Limit(LimitGroup::new(s?)),
        })
    }

    pub fn hom(&self) -> Result<ExtValue> {
        let shift = self.target.shift.as_ref().map(|s| {
            let sh = hom_covariant(s, &self.hom_z, &self.hom_z)?;
            self.hom_r.induced(&self.hom_r, |u| sh.matrix().mul_vec(u))
        });
        self.wrap(self.hom_r.group(), shift)
    }

    pub fn ext1(&self) -> Result<ExtValue> {
        let shift = self.target.shift.as_ref().map(|s| {
            let n = self.source.group().generators();
            let m = self.source.group().relation_basis().cols();
            let op = IntMatrix::identity(m + n).kron(s.matrix());
            self.ext1_r.induced(&self.ext1_r, |u| op.mul_vec(u))
        });
        self.wrap(self.ext1_r.group(), shift)
    }

    pub fn ext2(&self) -> Result<ExtValue> {
        let shift = self.target.shift.as_ref().map(|s| {
            let sh = ext1_covariant(s, &self.ext1_z, &self.ext1_z)?;
            self.ext2_r.induced(&self.ext2_r, |u| sh.matrix().mul_vec(u))
        });
        self.wrap(self.ext2_r.group(), shift)
    }

    pub fn ext2_is_zero(&self, coords: &[Int]) -> bool {
        self.ext2_r.group().is_zero_element(coords)
    }

    /// The seven maps `Hom_R → Hom_ℤ → Hom_ℤ → Ext¹_R → Ext¹_ℤ → Ext¹_ℤ → Ext²_R`.
    pub fn six_term_maps(&self) -> Result<Vec<GroupMorphism>> {
        let hz = self.hom_z.group();
        let ez = self.ext1_z.group();
        let incl = GroupMorphism::new(
            self.hom_r.group().clone(),
            hz.clone(),
            self.hom_r.basis().clone(),
        )?;
        let km = self.ext1_z.subquotient().ambient_dim();
        let hom_sq = self.hom_z.subquotient();
        let connecting = hom_sq.induced(&self.ext1_r, |f| {
            let mut v = vec![Int::zero(); km];
            v.extend_from_slice(f);
            v
        })?;
        let restrict = self
            .ext1_r
            .induced(self.ext1_z.subquotient(), |ab| ab[..km].to_vec())?;
        let proj = GroupMorphism::new(
            ez.clone(),
            self.ext2_r.group().clone(),
            IntMatrix::identity(ez.generators()),
        )?;
        Ok(vec![
            incl,
            self.t_hom.clone(),
            connecting,
            restrict,
            self.t_ext.clone(),
            proj,
        ])
    }

    /// Exactness of `0 → Hom_R → … → Ext²_R → 0` at every node.
    pub fn six_term_exact(&self) -> Result<bool> {
        let maps = self.six_term_maps()?;
        let first = GroupMorphism::zero(&FgAbGroup::trivial(), maps[0].source());
        let last = GroupMorphism::zero(maps[5].target(), &FgAbGroup::trivial());
        let mut chain = vec![first];
        chain.extend(maps);
        chain.push(last);
        for w in chain.windows(2) {
            if !is_exact_at(&w[0], &w[1])? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `Ext*_R(M, W)` for `M = coker(x·I − T)`: `Hom = ker L`, `Ext¹ = coker L`
/// with `L(w)ⱼ = x_W wⱼ − Σᵢ Tᵢⱼ wᵢ` on `Wⁿ`; `Ext² = 0`.
#[derive(Clone, Debug)]
pub struct ExtRPres {
    pub t: IntMatrix,
    pub target: LimitModule,
    pub l: GroupMorphism,
    pub hom_r: Subquotient,
    pub ext1_r: Subquotient,
}

pub fn ext_r_pres(m: &RModulePres, w: &RModule) -> Result<ExtRPres> {
    let t = m.canonical_t()?;
    let target = w.as_limit()?;
    let n = t.rows();
    let k = target.group.generators();
    let wn = power_group(&target.group, n);
    let mat = &IntMatrix::identity(n).kron(target.x.matrix()) - &t.transpose().kron(&IntMatrix::identity(k));
    let l = GroupMorphism::new(wn.clone(), wn.clone(), mat)?;
    let hom_r = cohomology(None, &wn, Some(&l))?;
    let ext1_r = cohomology(Some(&l), &wn, None)?;
    Ok(ExtRPres {
        t,
        target,
        l,
        hom_r,
        ext1_r,
    })
}

impl ExtRPres {
    fn value(&self, sq: &Subquotient) -> Result<ExtValue> {
        Ok(match &self.target.shift {
            None => ExtValue::Group(sq.group().clone()),
            Some(s) => {
                let op = IntMatrix::identity(self.t.rows()).kron(s.matrix());
                ExtValue::Limit(LimitGroup::new(sq.induced(sq, |u| op.mul_vec(u))?))
            }
        })
    }

    pub fn hom(&self) -> Result<ExtValue> {
        self.value(&self.hom_r)
    }

    pub fn ext1(&self) -> Result<ExtValue> {
        self.value(&self.ext1_r)
    }

    pub fn ext2(&self) -> ExtValue {
        ExtValue::Group(FgAbGroup::trivial())
    }
}

/// `Hom_R`, `Ext¹_R`, `Ext²_R` as groups.
#[derive(Clone, Debug)]
pub struct ExtTriple {
    pub hom: ExtValue,
    pub ext1: ExtValue,
    pub ext2: ExtValue,
}

/// Dispatches on the representation of the source.
pub fn ext_r(v: &RModule, w: &RModule) -> Result<ExtTriple> {
    match v {
        RModule::Fg(v) => {
            let e = ext_r_fg_limit(v, &w.as_limit()?)?;
            Ok(ExtTriple {
                hom: e.hom()?,
                ext1: e.ext1()?,
                ext2: e.ext2()?,
            })
        }
        RModule::Pres(p) => {
            let e = ext_r_pres(p, w)?;
            Ok(ExtTriple {
                hom: e.hom()?,
                ext1: e.ext1()?,
                ext2: e.ext2(),
            })
        }
    }
}

/// Only `Ext²_R`, skipping the total complex.
pub fn ext2_r(v: &RModule, w: &RModule) -> Result<ExtValue> {
    match v {
        RModule::Pres(p) => {
            p.canonical_t()?;
            Ok(ExtValue::Group(FgAbGroup::trivial()))
        }
        RModule::Fg(v) => {
            let w = w.as_limit()?;
            let ez = ext1_z(v.group(), &w.group);
            let t_ext = ext1_covariant(&w.x, &ez, &ez)?.sub(&ext1_contravariant(v.x(), &ez, &ez)?)?;
            let q = cohomology(Some(&t_ext), ez.group(), None)?;
            Ok(match &w.shift {
                None => ExtValue::Group(q.group().clone()),
                Some(s) => {
                    let sh = ext1_covariant(s, &ez, &ez)?;
                    ExtValue::Limit(LimitGroup::new(q.induced(&q, |u| sh.matrix().mul_vec(u))?))
                }
            })
        }
    }
}

/// An equivalent presentation of `v`: a unimodular change of generators
/// and relations, plus one redundant generator killed by a relation.
pub fn randomize_module(v: &RModuleFg, rng: &mut Rng) -> Result<RModuleFg> {
    let n = v.group().generators();
    let rel = v.group().relations();
    let p = random_unimodular(rng, n + 1);
    let q = random_unimodular(rng, rel.cols() + 1);
    let mut big_rel = IntMatrix::zeros(n + 1, rel.cols() + 1);
    big_rel.set_block(0, 0, rel);
    big_rel.set(n, rel.cols(), Int::from(1));
    let mut big_x = IntMatrix::identity(n + 1);
    big_x.set_block(0, 0, v.x().matrix());
    // Generators e' = P e: relations P R Q, action P X P⁻¹.
    let p_inv = unimodular_inverse(&p)?;
    let new_rel = &(&p * &big_rel) * &q;
    let new_x = &(&p * &big_x) * &p_inv;
    RModuleFg::new(FgAbGroup::from_presentation(new_rel), new_x)
}

fn unimodular_inverse(p: &IntMatrix) -> Result<IntMatrix> {
    let n = p.rows();
    let solver = crate::snf::LatticeSolver::new(p);
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![Int::zero(); n];
        e[j] = Int::from(1);
        cols.push(
            solver
                .solve(&e)
                .ok_or_else(|| Error::Internal("matrix is not unimodular".into()))?,
        );
    }
    Ok(IntMatrix::from_columns(n, &cols))
}

/// Matrix of `D^*: W^b → W^a` for a free map `D: R^a → R^b`, evaluating
/// each entry at `x_W`.
fn pullback(d: &LaurentMatrix, w: &RModuleFg, wa: &FgAbGroup, wb: &FgAbGroup) -> Result<GroupMorphism> {
    let k = w.group().generators();
    let mut m = IntMatrix::zeros(k * d.cols(), k * d.rows());
    for i in 0..d.rows() {
        for j in 0..d.cols() {
            let e = d.get(i, j).eval_morphism(w.x(), w.x_inverse())?;
            m.set_block(j * k, i * k, e.matrix());
        }
    }
    GroupMorphism::new(wb.clone(), wa.clone(), m)
}

/// Independent route: `Ext*_R(V, W)` from the explicit free R-resolution
/// `0 → Rᵐ →D₂ Rᵐ ⊕ Rⁿ →D₁ Rⁿ → V` of randomized presentations, with
/// `Hom_R(Rᵃ, W) = Wᵃ` and the differentials evaluated at `x_W`.
pub fn ext_r_via_resolution(v: &RModuleFg, w: &RModuleFg, seed: u64) -> Result<[FgAbGroup; 3]> {
    let mut rng = Rng::new(seed);
    let v = randomize_module(v, &mut rng)?;
    let w = randomize_module(w, &mut rng)?;
    let rv = v.group().relation_basis();
    let n = rv.rows();
    let m = rv.cols();
    let x1 = relation_lift(v.x())?;
    let d1 = LaurentMatrix::constant(rv).hstack(&LaurentMatrix::x_minus(v.x().matrix()));
    let d2 = LaurentMatrix::x_minus(&x1).vstack(&LaurentMatrix::constant(&-rv));
    if !d1.mul(&d2)?.is_zero() {
        return Err(Error::Internal("free resolution is not a complex".into()));
    }
    let wn = power_group(w.group(), n);
    let wmn = power_group(w.group(), m + n);
    let wm = power_group(w.group(), m);
    let p1 = pullback(&d1, &w, &wmn, &wn)?;
    let p2 = pullback(&d2, &w, &wm, &wmn)?;
    let h0 = cohomology(None, &wn, Some(&p1))?;
    let h1 = cohomology(Some(&p1), &wmn, Some(&p2))?;
    let h2 = cohomology(Some(&p2), &wm, None)?;
    Ok([h0.group().clone(), h1.group().clone(), h2.group().clone()])
}
