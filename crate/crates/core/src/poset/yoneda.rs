use std::sync::Arc;

use crate::abelian::Subquotient;
use crate::error::{Error, Result};
use crate::matrix::{Int, IntMatrix};
use crate::poset::rep::{rep_exact_at, ProjMap, QuiverRep, RepMorphism};
use crate::poset::resolution::{resolve_projective, ProjResolution};
use crate::random::{random_matrix, Rng};
use crate::snf::preimage_basis;

/// `0 → M₁ →∂₂ Q₁ →∂₁ Q₀ →ε M₀ → 0`.
#[derive(Clone, Debug)]
pub struct TwoExtension {
    pub d2: RepMorphism,
    pub d1: RepMorphism,
    pub eps: RepMorphism,
}

impl TwoExtension {
    pub fn new(d2: RepMorphism, d1: RepMorphism, eps: RepMorphism) -> Result<Self> {
        let e = TwoExtension { d2, d1, eps };
        e.check()?;
        Ok(e)
    }

    pub fn m1(&self) -> &QuiverRep {
        self.d2.source()
    }

    pub fn m0(&self) -> &QuiverRep {
        self.eps.target()
    }

    /// Exactness at all four nodes, naming the first failure.
    pub fn check(&self) -> Result<()> {
        let fail = |node: &str| Err(Error::NotExact { node: node.into() });
        if self.d2.target() != self.d1.source() || self.d1.target() != self.eps.source() {
            return Err(Error::Domain("maps are not composable".into()));
        }
        if !self.d2.is_injective()? {
            return fail("M1");
        }
        if !rep_exact_at(&self.d2, &self.d1)? {
            return fail("Q1");
        }
        if !rep_exact_at(&self.d1, &self.eps)? {
            return fail("Q0");
        }
        if !self.eps.is_surjective()? {
            return fail("M0");
        }
        Ok(())
    }

    /// Baer sum: pull back along the diagonal of `M₀`, push out along the
    /// codiagonal of `M₁`.
    pub fn baer_sum(&self, other: &TwoExtension) -> Result<TwoExtension> {
        let m1 = self.m1().clone();
        let m0 = self.m0().clone();
        if other.m1() != &m1 || other.m0() != &m0 {
            return Err(Error::Domain("extensions have different ends".into()));
        }
        let p = m0.poset().len();
        let q0 = self.eps.source().direct_sum(other.eps.source())?;
        let q1 = self.d1.source().direct_sum(other.d1.source())?;
        let hcat = |a: &RepMorphism, b: &RepMorphism, x: usize| a.component(x).matrix().hstack(b.component(x).matrix());
        let diag = |a: &RepMorphism, b: &RepMorphism, x: usize| {
            IntMatrix::block_diag(&[a.component(x).matrix().clone(), b.component(x).matrix().clone()])
        };
        // Pullback Q₀'' = ker((ε, −ε'): Q₀ ⊕ Q₀' → M₀).
        let diff = RepMorphism::new(
            q0.clone(),
            m0.clone(),
            (0..p).map(|x| hcat(&self.eps, &other.eps.neg(), x)).collect(),
        )?;
        let pull = diff.kernel()?;
        // Pushout Q₁'' = coker((∂₂, −∂₂'): M₁ → Q₁ ⊕ Q₁').
        let anti = RepMorphism::new(
            m1.clone(),
            q1.clone(),
            (0..p)
                .map(|x| self.d2.component(x).matrix().vstack(&-other.d2.component(x).matrix()))
                .collect(),
        )?;
        let push = anti.cokernel()?;
        let q1s = push.target().clone();
        let d2 = RepMorphism::new(
            m1.clone(),
            q1s.clone(),
            (0..p)
                .map(|x| {
                    let z = IntMatrix::zeros(other.d2.component(x).matrix().rows(), m1.group(x).generators());
                    self.d2.component(x).matrix().vstack(&z)
                })
                .collect(),
        )?;
        let d1_sum = RepMorphism::new(q1.clone(), q0.clone(), (0..p).map(|x| diag(&self.d1, &other.d1, x)).collect())?;
        let into_pull = pull.lift(&d1_sum)?;
        // The cokernel projection is the identity on generators.
        let d1 = RepMorphism::new(
            q1s,
            pull.source().clone(),
            into_pull.components().iter().map(|c| c.matrix().clone()).collect(),
        )?;
        let first = RepMorphism::new(
            q0.clone(),
            m0.clone(),
            (0..p)
                .map(|x| {
                    let z = IntMatrix::zeros(m0.group(x).generators(), other.eps.component(x).matrix().cols());
                    self.eps.component(x).matrix().hstack(&z)
                })
                .collect(),
        )?;
        let eps = first.compose(&pull)?;
        TwoExtension::new(d2, d1, eps)
    }
}

/// An element of `Ext²(M₀, M₁)` as a cocycle in `Hom(P₂, M₁)` for a stored
/// resolution of `M₀`.
#[derive(Clone, Debug)]
pub struct Ext2Class {
    pub resolution: Arc<ProjResolution>,
    pub coefficients: QuiverRep,
    pub ambient: Subquotient,
    pub cocycle: ProjMap,
}

impl Ext2Class {
    /// Coordinates in the ambient group (reduced Smith coordinates).
    pub fn coords(&self) -> Result<Vec<Int>> {
        let c = self
            .ambient
            .coords(&self.cocycle.to_cochain())
            .ok_or_else(|| Error::Internal("cocycle left the cycle lattice".into()))?;
        Ok(self.ambient.group().reduce(&c))
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(self.coords()?.iter().all(|c| c == &Int::from(0)))
    }

    /// The same class over another resolution of the same module.
    pub fn transport(&self, other: &Arc<ProjResolution>) -> Result<Ext2Class> {
        let g = other.comparison(&self.resolution, 2)?;
        if g.len() < 3 {
            return ambient_class(other, &self.coefficients, None);
        }
        let cocycle = self.cocycle.after(&g[2], &self.coefficients);
        ambient_class(other, &self.coefficients, Some(cocycle))
    }

    /// Equality as classes, comparing over `self`'s resolution.
    pub fn equals(&self, other: &Ext2Class) -> Result<bool> {
        let t = other.transport(&self.resolution)?;
        let a = self.cocycle.to_cochain();
        let b = t.cocycle.to_cochain();
        let d: Vec<Int> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        self.ambient
            .is_boundary(&d)
            .ok_or_else(|| Error::Internal("difference is not a cocycle".into()))
    }

    pub fn add(&self, other: &Ext2Class) -> Result<Ext2Class> {
        let t = other.transport(&self.resolution)?;
        ambient_class(&self.resolution, &self.coefficients, Some(self.cocycle.add(&t.cocycle)))
    }

    /// `g_* c` for `g: M₁ → M₁'`.
    pub fn push(&self, g: &RepMorphism) -> Result<Ext2Class> {
        ambient_class(&self.resolution, g.target(), Some(self.cocycle.then(g)))
    }

    /// `f^* c` for `f: M₀' → M₀`, over `res`, a resolution of `M₀'`.
    pub fn pull(&self, f: &RepMorphism, res: &Arc<ProjResolution>) -> Result<Ext2Class> {
        let g = lift_chain_map(res, &self.resolution, f)?;
        if g.len() < 3 {
            return ambient_class(res, &self.coefficients, None);
        }
        let cocycle = self.cocycle.after(&g[2], &self.coefficients);
        ambient_class(res, &self.coefficients, Some(cocycle))
    }
}

fn ambient_class(res: &Arc<ProjResolution>, m1: &QuiverRep, cocycle: Option<ProjMap>) -> Result<Ext2Class> {
    let ambient = res.ext(m1, 2)?;
    let source = res.terms.get(2).cloned().unwrap_or(crate::poset::rep::Projective {
        mult: vec![0; m1.poset().len()],
    });
    let cocycle = cocycle.unwrap_or_else(|| ProjMap {
        source: source.clone(),
        images: (0..m1.poset().len())
            .map(|x| IntMatrix::zeros(m1.group(x).generators(), source.mult[x]))
            .collect(),
    });
    Ok(Ext2Class {
        resolution: res.clone(),
        coefficients: m1.clone(),
        ambient,
        cocycle,
    })
}

/// Chain map `P → P'` over `f: M → M'`, for resolutions `P` of `M` and
/// `P'` of `M'`, through degree 2.
pub fn lift_chain_map(p: &ProjResolution, q: &ProjResolution, f: &RepMorphism) -> Result<Vec<ProjMap>> {
    let mut out: Vec<ProjMap> = Vec::new();
    out.push(p.augmentation.then(f).lift_through(&q.augmentation_morphism()?)?);
    for i in 1..=2 {
        let Some(d) = p.diffs.get(i - 1) else { break };
        let target = q.term_rep(i - 1);
        let h = out[i - 1].after(d, &target);
        out.push(h.lift_through(&q.diff_morphism(i)?)?);
    }
    Ok(out)
}

/// Resolution of `M₀` suitable for class computations (length 3).
pub fn class_resolution(m0: &QuiverRep, seed: Option<u64>) -> Result<Arc<ProjResolution>> {
    Ok(Arc::new(resolve_projective(m0, 3, seed)?))
}

/// Lifts the identity of `M₀` through the extension.
pub fn yoneda_class(ext: &TwoExtension, seed: Option<u64>) -> Result<Ext2Class> {
    ext.check()?;
    let res = class_resolution(ext.m0(), seed)?;
    yoneda_class_with(ext, &res)
}

pub fn yoneda_class_with(ext: &TwoExtension, res: &Arc<ProjResolution>) -> Result<Ext2Class> {
    lift_identity(ext, res, None)
}

/// As [`yoneda_class_with`], but every lift is shifted by a random element
/// of the kernel of the map it lifts through.
pub fn yoneda_class_randomized(ext: &TwoExtension, res: &Arc<ProjResolution>, seed: u64) -> Result<Ext2Class> {
    lift_identity(ext, res, Some(&mut Rng::new(seed)))
}

fn perturb(f: ProjMap, e: &RepMorphism, rng: Option<&mut Rng>) -> ProjMap {
    let Some(rng) = rng else { return f };
    let images = f
        .images
        .iter()
        .enumerate()
        .map(|(x, m)| {
            let k = preimage_basis(e.component(x).matrix(), e.target().group(x).relations());
            if k.cols() == 0 || m.cols() == 0 {
                return m.clone();
            }
            m + &(&k * &random_matrix(rng, k.cols(), m.cols(), 2))
        })
        .collect();
    ProjMap {
        source: f.source,
        images,
    }
}

fn lift_identity(ext: &TwoExtension, res: &Arc<ProjResolution>, mut rng: Option<&mut Rng>) -> Result<Ext2Class> {
    let f0 = perturb(res.augmentation.lift_through(&ext.eps)?, &ext.eps, rng.as_deref_mut());
    let Some(d1) = res.diffs.first() else {
        return ambient_class(res, ext.m1(), None);
    };
    let f1 = f0.after(d1, ext.eps.source()).lift_through(&ext.d1)?;
    let f1 = perturb(f1, &ext.d1, rng);
    let Some(d2) = res.diffs.get(1) else {
        return ambient_class(res, ext.m1(), None);
    };
    let f2 = f1.after(d2, ext.d1.source()).lift_through(&ext.d2)?;
    ambient_class(res, ext.m1(), Some(f2))
}

/// `g_* c = f^* c'` in `Ext²(M₀, M₁')`, for `f: M₀ → M₀'`, `g: M₁ → M₁'`,
/// `c ∈ Ext²(M₀, M₁)`, `c' ∈ Ext²(M₀', M₁')`.
pub fn ext2_compatible(f: &RepMorphism, c: &Ext2Class, c_prime: &Ext2Class, g: &RepMorphism) -> Result<bool> {
    if f.source() != &c.resolution.module
        || f.target() != &c_prime.resolution.module
        || g.source() != &c.coefficients
        || g.target() != &c_prime.coefficients
    {
        return Err(Error::Domain("morphisms do not match the classes".into()));
    }
    let lhs = c.push(g)?;
    let rhs = c_prime.pull(f, &c.resolution)?;
    let d: Vec<Int> = lhs
        .cocycle
        .to_cochain()
        .iter()
        .zip(rhs.cocycle.to_cochain())
        .map(|(a, b)| a - b)
        .collect();
    lhs.ambient
        .is_boundary(&d)
        .ok_or_else(|| Error::Internal("difference is not a cocycle".into()))
}
