use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::abelian::{cohomology, FgAbGroup, GroupMorphism, Subquotient};
use crate::error::{Error, Result};
use crate::matrix::{Int, IntMatrix};
use crate::poset::poset::FinitePoset;
use crate::poset::rep::{factor_through, rep_exact_at, ProjMap, Projective, QuiverRep, RepMorphism};
use crate::random::{random_matrix, Rng};
use crate::snf::preimage_basis;

/// `… → P₁ → P₀ → V → 0`, exact, with `P_i` built from `ℤ[X]eₓ ⊗ ℤ^m` blocks.
#[derive(Clone, Debug)]
pub struct ProjResolution {
    pub module: QuiverRep,
    pub terms: Vec<Projective>,
    /// `P₀ → V`.
    pub augmentation: ProjMap,
    /// `diffs[i-1]`: `P_i → P_{i-1}` for `i ≥ 1`.
    pub diffs: Vec<ProjMap>,
    /// Whether the last syzygy vanished, so the resolution is complete.
    pub complete: bool,
}

fn poset_of(v: &QuiverRep) -> &Arc<FinitePoset> {
    v.poset()
}

/// Generators of `Vₓ` modulo the images of the arrows into `x`, from the
/// Smith form of the quotient; `extra` random elements are appended.
fn cover_generators(v: &QuiverRep, rng: Option<&mut Rng>) -> Vec<IntMatrix> {
    let p = poset_of(v);
    let mut gens = Vec::with_capacity(p.len());
    let mut rng = rng;
    for x in 0..p.len() {
        let g = v.group(x);
        let mut rel = g.relations().clone();
        for (i, &(_, t)) in p.arrows().iter().enumerate() {
            if t == x {
                rel = rel.hstack(v.arrow_map(i).matrix());
            }
        }
        let q = FgAbGroup::from_presentation(rel);
        let mut m = q.from_smith_matrix().clone();
        if let Some(r) = rng.as_deref_mut() {
            let n = g.generators();
            if n > 0 {
                let extra = r.index(2);
                if extra > 0 {
                    m = m.hstack(&random_matrix(r, n, extra, 2));
                }
            }
        }
        gens.push(m);
    }
    gens
}

/// Kernel of a map out of a projective, as a module of free groups with
/// its inclusion bases.
fn syzygy(eps: &ProjMap, target: &QuiverRep) -> Result<(QuiverRep, Vec<IntMatrix>)> {
    let p = poset_of(target).clone();
    let proj = &eps.source;
    let mut bases = Vec::with_capacity(p.len());
    for w in 0..p.len() {
        let a = eps.at(target, w);
        bases.push(preimage_basis(&a, target.group(w).relations()));
    }
    let groups = bases.iter().map(|b| FgAbGroup::free(b.cols())).collect();
    let mut maps = Vec::new();
    for &(u, w) in p.arrows() {
        let img = &proj.inclusion(&p, u, w) * &bases[u];
        maps.push(factor_through(&img, &bases[w], &IntMatrix::zeros(bases[w].rows(), 0))?);
    }
    Ok((QuiverRep::new(p, groups, maps)?, bases))
}

/// Resolves `v` to `length` (or until a syzygy vanishes). A seed adds
/// random redundant generators at every step.
pub fn resolve_projective(v: &QuiverRep, length: usize, seed: Option<u64>) -> Result<ProjResolution> {
    let mut rng = seed.map(Rng::new);
    let mut current = v.clone();
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    let mut augmentation = None;
    let mut incl: Option<Vec<IntMatrix>> = None;
    let mut complete = false;
    for step in 0..=length {
        if current.is_zero() {
            complete = true;
            break;
        }
        let gens = cover_generators(&current, rng.as_mut());
        let proj = Projective {
            mult: gens.iter().map(|g| g.cols()).collect(),
        };
        let eps = ProjMap {
            source: proj.clone(),
            images: gens,
        };
        let (k, bases) = syzygy(&eps, &current)?;
        match &incl {
            None => augmentation = Some(eps.clone()),
            Some(b) => {
                let images = eps.images.iter().enumerate().map(|(x, m)| &b[x] * m).collect();
                diffs.push(ProjMap {
                    source: proj.clone(),
                    images,
                });
            }
        }
        terms.push(proj);
        incl = Some(bases);
        current = k;
        if step == length && current.is_zero() {
            complete = true;
        }
    }
    let augmentation = augmentation.unwrap_or_else(|| ProjMap {
        source: Projective {
            mult: vec![0; v.poset().len()],
        },
        images: (0..v.poset().len())
            .map(|x| IntMatrix::zeros(v.group(x).generators(), 0))
            .collect(),
    });
    if terms.is_empty() {
        terms.push(augmentation.source.clone());
        complete = true;
    }
    Ok(ProjResolution {
        module: v.clone(),
        terms,
        augmentation,
        diffs,
        complete,
    })
}

impl ProjResolution {
    pub fn poset(&self) -> &Arc<FinitePoset> {
        self.module.poset()
    }

    /// SHA-256 over the multiplicities and matrices of the resolution, in
    /// hex; equal resolutions give equal fingerprints.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        let mut map = |m: &ProjMap| {
            h.update(format!("{:?}\n", m.source.mult));
            for img in &m.images {
                h.update(img.to_text());
            }
        };
        map(&self.augmentation);
        for d in &self.diffs {
            map(d);
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Number of nonzero differentials.
    pub fn length(&self) -> usize {
        self.terms.iter().rposition(|t| !t.is_zero()).unwrap_or(0)
    }

    pub fn term_rep(&self, i: usize) -> QuiverRep {
        match self.terms.get(i) {
            Some(t) => t.rep(self.poset()),
            None => QuiverRep::zero(self.poset().clone()),
        }
    }

    pub fn augmentation_morphism(&self) -> Result<RepMorphism> {
        self.augmentation.to_rep_morphism(&self.module)
    }

    /// `d_i: P_i → P_{i-1}` as a module morphism, `i ≥ 1`.
    pub fn diff_morphism(&self, i: usize) -> Result<RepMorphism> {
        let target = self.term_rep(i - 1);
        match self.diffs.get(i - 1) {
            Some(d) => d.to_rep_morphism(&target),
            None => Ok(RepMorphism::zero(&self.term_rep(i), &target)),
        }
    }

    /// Exactness of `P_k → … → P₀ → V → 0` at every node, and injectivity
    /// of the last map when the resolution is complete.
    pub fn verify(&self) -> Result<bool> {
        let eps = self.augmentation_morphism()?;
        if !eps.is_surjective()? {
            return Ok(false);
        }
        let mut next = eps;
        for i in 1..=self.diffs.len() {
            let d = self.diff_morphism(i)?;
            if !rep_exact_at(&d, &next)? {
                return Ok(false);
            }
            next = d;
        }
        if self.complete && !next.is_injective()? {
            return Ok(false);
        }
        Ok(true)
    }

    /// `Hom(P_i, W) = ⊕ₓ Wₓ^{nₓ}`.
    pub fn cochain_group(&self, i: usize, w: &QuiverRep) -> FgAbGroup {
        let Some(t) = self.terms.get(i) else {
            return FgAbGroup::trivial();
        };
        let mut parts = Vec::new();
        for (x, &n) in t.mult.iter().enumerate() {
            for _ in 0..n {
                parts.push(w.group(x).clone());
            }
        }
        FgAbGroup::direct_sum(&parts)
    }

    /// `d^i: Hom(P_i, W) → Hom(P_{i+1}, W)`, `φ ↦ φ ∘ d_{i+1}`.
    pub fn coboundary(&self, i: usize, w: &QuiverRep) -> Result<GroupMorphism> {
        let src = self.cochain_group(i, w);
        let tgt = self.cochain_group(i + 1, w);
        let Some(d) = self.diffs.get(i) else {
            return Ok(GroupMorphism::zero(&src, &tgt));
        };
        let pi = &self.terms[i];
        let p = self.poset();
        let mut m = IntMatrix::zeros(tgt.generators(), src.generators());
        let src_off = block_offsets(pi, w);
        let mut row = 0;
        for (x, &n) in d.source.mult.iter().enumerate() {
            let kx = w.group(x).generators();
            let layout = pi.layout(p, x);
            for j in 0..n {
                let col = d.images[x].column(j);
                for &(xp, off) in &layout {
                    let s = w.structure_map(xp, x);
                    for jj in 0..pi.mult[xp] {
                        let c = &col[off + jj];
                        if c == &Int::from(0) {
                            continue;
                        }
                        let c0 = src_off[xp] + jj * w.group(xp).generators();
                        let blk = s.matrix().scale(c);
                        let cur = m.block(row, c0, kx, blk.cols());
                        m.set_block(row, c0, &(&cur + &blk));
                    }
                }
                row += kx;
            }
        }
        GroupMorphism::new(src, tgt, m)
    }

    /// `Hⁿ(Hom(P_•, W))`. Needs the resolution to reach degree `n + 1`
    /// unless it is complete.
    pub fn ext(&self, w: &QuiverRep, n: usize) -> Result<Subquotient> {
        if !self.complete && self.diffs.len() < n + 1 {
            return Err(Error::Precondition(format!(
                "resolution too short for degree {n}"
            )));
        }
        let c = self.cochain_group(n, w);
        let prev = if n == 0 { None } else { Some(self.coboundary(n - 1, w)?) };
        let next = self.coboundary(n, w)?;
        cohomology(prev.as_ref(), &c, Some(&next))
    }

    /// Chain map `self → other` over the identity of the module, up to
    /// degree `k`.
    pub fn comparison(&self, other: &ProjResolution, k: usize) -> Result<Vec<ProjMap>> {
        let mut out: Vec<ProjMap> = Vec::new();
        let g0 = self.augmentation.lift_through(&other.augmentation_morphism()?)?;
        out.push(g0);
        for i in 1..=k {
            let Some(d) = self.diffs.get(i - 1) else { break };
            let prev = &out[i - 1];
            let target = other.term_rep(i - 1);
            let h = prev.after(d, &target);
            let gi = h.lift_through(&other.diff_morphism(i)?)?;
            out.push(gi);
        }
        Ok(out)
    }
}

fn block_offsets(p: &Projective, w: &QuiverRep) -> Vec<usize> {
    let mut out = Vec::with_capacity(p.mult.len());
    let mut acc = 0;
    for (x, &n) in p.mult.iter().enumerate() {
        out.push(acc);
        acc += n * w.group(x).generators();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sier(top: FgAbGroup, bottom: FgAbGroup, m: IntMatrix) -> QuiverRep {
        QuiverRep::new(Arc::new(FinitePoset::sierpinski()), vec![bottom, top], vec![m]).unwrap()
    }

    #[test]
    fn projective_has_length_zero() {
        let p = Arc::new(FinitePoset::chain(3));
        let v = Projective { mult: vec![0, 1, 0] }.rep(&p);
        let r = resolve_projective(&v, 3, None).unwrap();
        assert!(r.complete);
        assert_eq!(r.length(), 0);
        assert!(r.verify().unwrap());
    }

    #[test]
    fn torsion_top_needs_two_steps() {
        let v = sier(FgAbGroup::cyclic(2), FgAbGroup::trivial(), IntMatrix::zeros(0, 1));
        let r = resolve_projective(&v, 4, None).unwrap();
        assert!(r.complete);
        assert_eq!(r.length(), 2);
        assert!(r.verify().unwrap());
    }

    #[test]
    fn seeded_resolutions_are_exact() {
        let v = sier(FgAbGroup::cyclic(4), FgAbGroup::cyclic(2), IntMatrix::from_rows(&[[1]]));
        let w = sier(FgAbGroup::free(1), FgAbGroup::cyclic(2), IntMatrix::from_rows(&[[1]]));
        let plain = resolve_projective(&v, 3, None).unwrap();
        for seed in 0..10 {
            let r = resolve_projective(&v, 3, Some(seed)).unwrap();
            assert!(r.verify().unwrap());
            for n in 0..=2 {
                let a = r.ext(&w, n).unwrap();
                let b = plain.ext(&w, n).unwrap();
                assert_eq!(a.group().describe(), b.group().describe(), "seed {seed}, degree {n}");
            }
        }
    }

    #[test]
    fn fingerprints_follow_the_seed() {
        let v = sier(FgAbGroup::cyclic(4), FgAbGroup::cyclic(2), IntMatrix::from_rows(&[[1]]));
        let a = resolve_projective(&v, 3, Some(5)).unwrap().fingerprint();
        assert_eq!(a, resolve_projective(&v, 3, Some(5)).unwrap().fingerprint());
        assert_eq!(a.len(), 64);
        let plain = resolve_projective(&v, 3, None).unwrap().fingerprint();
        let differs = (0..10).any(|s| resolve_projective(&v, 3, Some(s)).unwrap().fingerprint() != plain);
        assert!(differs);
    }
}
