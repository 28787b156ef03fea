//! Shift equivalence over ℤ: bounded witness search and a battery of
//! module invariants for negative answers.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;

use crate::abelian::{FgAbGroup, GroupMorphism};
use crate::error::Result;
use crate::laurent::ck::validate_ck_matrix;
use crate::laurent::module::{LimitGroup, LimitInvariants};
use crate::laurent::poly::LaurentPoly;
use crate::matrix::{Int, IntMatrix};
use crate::par;
use crate::random::Rng;
use crate::snf::{kernel_basis, LatticeSolver};

/// Search limits. Defaults: lag ≤ 6, coefficients ≤ 8.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_lag: u32,
    pub max_entry: i64,
    /// Maximum number of candidates examined.
    pub budget: usize,
    pub seed: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_lag: 6,
            max_entry: 8,
            budget: 20_000,
            seed: 0,
        }
    }
}

/// An isomorphism invariant on which two modules differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinguishingInvariant {
    pub name: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug)]
pub enum ShiftVerdict {
    Yes { r: IntMatrix, s: IntMatrix, lag: u32 },
    No { invariants: Vec<DistinguishingInvariant> },
    Unknown { candidates_tried: usize },
}

/// Checks `RA = BR`, `SB = AS`, `RS = Bˡ`, `SR = Aˡ`.
pub fn verify_shift_witness(a: &IntMatrix, b: &IntMatrix, r: &IntMatrix, s: &IntMatrix, lag: u32) -> bool {
    r.rows() == b.rows()
        && r.cols() == a.rows()
        && s.rows() == a.rows()
        && s.cols() == b.rows()
        && (r * a) == (b * r)
        && (s * b) == (a * s)
        && (r * s) == b.pow(lag)
        && (s * r) == a.pow(lag)
}

/// Characteristic polynomial with all factors of `t` removed.
pub fn charpoly_away_from_zero(a: &IntMatrix) -> LaurentPoly {
    let c = a.charpoly();
    let first = c.iter().position(|x| !x.is_zero()).unwrap_or(c.len());
    LaurentPoly::from_coeffs(&c[first..])
}

/// Invariants of `colim(coker p(Aᵗ), Aᵗ)`, i.e. of `M / p(x) M` for the
/// gauge module `M = coker(x·I − Aᵗ)`.
pub fn quotient_invariants(a: &IntMatrix, p: &LaurentPoly) -> Result<LimitInvariants> {
    let at = a.transpose();
    let g = FgAbGroup::from_presentation(p.eval_matrix(&at)?);
    let s = GroupMorphism::new(g.clone(), g, at)?;
    Ok(LimitGroup::new(s).invariants())
}

fn battery(a: &IntMatrix, b: &IntMatrix) -> Vec<(String, LaurentPoly)> {
    let mut out = vec![("underlying group".to_string(), LaurentPoly::zero())];
    for k in -8i64..=8 {
        let p = LaurentPoly::x().sub(&LaurentPoly::constant(k));
        let name = match k.signum() {
            0 => "x".to_string(),
            1 => format!("x-{k}"),
            _ => format!("x+{}", -k),
        };
        out.push((format!("M/({name})M"), p));
    }
    out.push(("M/(charpoly A)M".into(), LaurentPoly::from_coeffs(&a.charpoly())));
    out.push(("M/(charpoly B)M".into(), LaurentPoly::from_coeffs(&b.charpoly())));
    out
}

/// Every invariant from the battery on which the gauge modules of `a` and
/// `b` differ. Empty when the modules are isomorphic.
pub fn distinguishing_invariants(a: &IntMatrix, b: &IntMatrix) -> Result<Vec<DistinguishingInvariant>> {
    let mut out = Vec::new();
    let ca = charpoly_away_from_zero(a);
    let cb = charpoly_away_from_zero(b);
    if ca != cb {
        out.push(DistinguishingInvariant {
            name: "characteristic polynomial away from zero".into(),
            left: ca.to_string(),
            right: cb.to_string(),
        });
    }
    let entries = battery(a, b);
    let results = par::map_collect(entries, |(name, p)| {
        let l = quotient_invariants(a, &p);
        let r = quotient_invariants(b, &p);
        (name, l, r)
    });
    for (name, l, r) in results {
        let (l, r) = (l?, r?);
        if l != r {
            out.push(DistinguishingInvariant {
                name,
                left: l.describe(),
                right: r.describe(),
            });
        }
    }
    Ok(out)
}

/// LLL reduction (δ = 3/4) of linearly independent integer vectors,
/// in exact rational arithmetic.
pub fn lll_reduce(basis: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let mut b: Vec<Vec<Int>> = basis.to_vec();
    let n = b.len();
    if n <= 1 {
        return b;
    }
    let delta = BigRational::new(Int::from(3), Int::from(4));
    let (mut mu, mut norms) = gram_schmidt(&b);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let q = round_rational(&mu[k][j]);
            if !q.is_zero() {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
                let qr = BigRational::from_integer(q);
                for l in 0..j {
                    let t = &qr * &mu[j][l];
                    mu[k][l] -= t;
                }
                mu[k][j] -= &qr;
            }
        }
        let m = &mu[k][k - 1];
        if norms[k] >= (&delta - m * m) * &norms[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            let gs = gram_schmidt(&b);
            mu = gs.0;
            norms = gs.1;
            k = (k - 1).max(1);
        }
    }
    b
}

fn gram_schmidt(b: &[Vec<Int>]) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = b.len();
    let to_q = |v: &Vec<Int>| -> Vec<BigRational> {
        v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
    };
    let dot = |u: &[BigRational], v: &[BigRational]| -> BigRational {
        u.iter().zip(v).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
    };
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let bi = to_q(&b[i]);
        let mut v = bi.clone();
        for j in 0..i {
            let m = dot(&bi, &star[j]) / &norms[j];
            for (x, y) in v.iter_mut().zip(&star[j]) {
                *x -= &m * y;
            }
            mu[i][j] = m;
        }
        norms.push(dot(&v, &v));
        star.push(v);
    }
    (mu, norms)
}

fn round_rational(q: &BigRational) -> Int {
    let two = BigRational::from_integer(Int::from(2));
    let shifted = q + BigRational::one() / two;
    shifted.floor().to_integer()
}

/// All integer vectors of length `d` with max-norm exactly `s`, shuffled.
fn shell(d: usize, s: i64, rng: &mut Rng, cap: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut v = vec![-s; d];
    loop {
        if v.iter().any(|x| x.abs() == s) {
            out.push(v.clone());
            if out.len() >= cap {
                break;
            }
        }
        let mut i = 0;
        loop {
            if i == d {
                out.shuffle(rng.inner());
                return out;
            }
            v[i] += 1;
            if v[i] <= s {
                break;
            }
            v[i] = -s;
            i += 1;
        }
    }
    out.shuffle(rng.inner());
    out
}

/// Given `R` with `RA = BR`, solves for `S` with `SB = AS`, `RS = Bˡ`,
/// `SR = Aˡ` for each lag up to `max_lag`.
fn complete_witness(a: &IntMatrix, b: &IntMatrix, r: &IntMatrix, max_lag: u32) -> Option<(IntMatrix, u32)> {
    let n = a.rows();
    let m = b.rows();
    // Unknown: vec(S), S is n × m.
    let e1 = &b.transpose().kron(&IntMatrix::identity(n)) - &IntMatrix::identity(m).kron(a);
    let e2 = IntMatrix::identity(m).kron(r);
    let e3 = r.transpose().kron(&IntMatrix::identity(n));
    let system = e1.vstack(&e2).vstack(&e3);
    let solver = LatticeSolver::new(&system);
    for lag in 1..=max_lag {
        let mut rhs = vec![Int::zero(); n * m];
        rhs.extend(b.pow(lag).vec_col_major());
        rhs.extend(a.pow(lag).vec_col_major());
        if let Some(x) = solver.solve(&rhs) {
            return Some((IntMatrix::from_vec_col_major(n, m, &x), lag));
        }
    }
    None
}

/// Decides shift equivalence of `a` and `b` within `bounds`.
pub fn shift_equivalent(a: &IntMatrix, b: &IntMatrix, bounds: &Bounds) -> Result<ShiftVerdict> {
    validate_ck_matrix(a)?;
    validate_ck_matrix(b)?;
    if a == b {
        return Ok(ShiftVerdict::Yes {
            r: IntMatrix::identity(a.rows()),
            s: a.clone(),
            lag: 1,
        });
    }
    let invariants = distinguishing_invariants(a, b)?;
    if !invariants.is_empty() {
        return Ok(ShiftVerdict::No { invariants });
    }
    let n = a.rows();
    let m = b.rows();
    // Lattice of R (m × n) with R A = B R.
    let eq = &a.transpose().kron(&IntMatrix::identity(m)) - &IntMatrix::identity(n).kron(b);
    let kernel = kernel_basis(&eq);
    let basis = lll_reduce(&kernel.columns());
    let d = basis.len();
    if d == 0 {
        return Ok(ShiftVerdict::Unknown { candidates_tried: 0 });
    }
    let mut rng = Rng::new(bounds.seed);
    let mut tried = 0;
    for s in 1..=bounds.max_entry {
        if tried >= bounds.budget {
            break;
        }
        let coeffs = shell(d, s, &mut rng, bounds.budget - tried);
        tried += coeffs.len();
        let found = par::find_map_first(coeffs, |c| {
            let mut v = vec![Int::zero(); m * n];
            for (ci, bi) in c.iter().zip(&basis) {
                if *ci != 0 {
                    for (x, y) in v.iter_mut().zip(bi) {
                        *x += y * Int::from(*ci);
                    }
                }
            }
            let r = IntMatrix::from_vec_col_major(m, n, &v);
            complete_witness(a, b, &r, bounds.max_lag).map(|(s, lag)| (r, s, lag))
        });
        if let Some((r, s, lag)) = found {
            debug_assert!(verify_shift_witness(a, b, &r, &s, lag));
            return Ok(ShiftVerdict::Yes { r, s, lag });
        }
    }
    Ok(ShiftVerdict::Unknown {
        candidates_tried: tried,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lll_shortens_a_skewed_basis() {
        let b = vec![
            vec![Int::from(1), Int::from(0)],
            vec![Int::from(100), Int::from(1)],
        ];
        let r = lll_reduce(&b);
        assert!(r.iter().all(|v| v.iter().all(|x| x.abs() <= Int::one())));
    }

    #[test]
    fn reflexive_witness() {
        let a = IntMatrix::from_rows(&[[1, 1], [1, 0]]);
        match shift_equivalent(&a, &a, &Bounds::default()).unwrap() {
            ShiftVerdict::Yes { r, s, lag } => {
                assert!(r.is_identity());
                assert_eq!(s, a);
                assert_eq!(lag, 1);
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn two_versus_three() {
        let a = IntMatrix::from_rows(&[[2]]);
        let b = IntMatrix::from_rows(&[[3]]);
        let ShiftVerdict::No { invariants } = shift_equivalent(&a, &b, &Bounds::default()).unwrap() else {
            panic!()
        };
        let hit = invariants.iter().find(|i| i.name == "M/(x-3)M").unwrap();
        assert_eq!(hit.left, "0");
        assert_eq!(hit.right, "Z[1/3]");
    }

    #[test]
    fn conjugate_pair() {
        // P A P⁻¹ for a permutation P.
        let a = IntMatrix::from_rows(&[[1, 2], [1, 0]]);
        let p = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
        let b = &(&p * &a) * &p;
        match shift_equivalent(&a, &b, &Bounds::default()).unwrap() {
            ShiftVerdict::Yes { r, s, lag } => assert!(verify_shift_witness(&a, &b, &r, &s, lag)),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn elementary_strong_shift_pair() {
        // A = RS, B = SR with R, S non-negative: lag 1 witness exists.
        let r = IntMatrix::from_rows(&[[1, 1]]);
        let s = IntMatrix::from_rows(&[[1], [1]]);
        let a = &r * &s; // [2]
        let b = &s * &r; // [[1,1],[1,1]]
        match shift_equivalent(&a, &b, &Bounds::default()).unwrap() {
            ShiftVerdict::Yes { r, s, lag } => assert!(verify_shift_witness(&a, &b, &r, &s, lag)),
            v => panic!("{v:?}"),
        }
    }
}
