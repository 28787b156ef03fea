use num_traits::{One, Signed, Zero};

use crate::abelian::FgAbGroup;
use crate::error::{Error, Result};
use crate::laurent::ext::ext2_r;
use crate::laurent::module::{GradedRModule, Order, RModule, RModuleFg, RModulePres};
use crate::matrix::{Int, IntMatrix};

/// Checks the standing hypotheses on a Cuntz–Krieger matrix: square,
/// non-negative, no zero row or column.
pub fn validate_ck_matrix(a: &IntMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Domain(format!(
            "matrix must be square, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_nonnegative() {
        return Err(Error::Domain("matrix has a negative entry".into()));
    }
    for i in 0..a.rows() {
        if a.row(i).iter().all(Zero::is_zero) {
            return Err(Error::Domain(format!("row {i} is zero")));
        }
    }
    for j in 0..a.cols() {
        if a.column(j).iter().all(Zero::is_zero) {
            return Err(Error::Domain(format!("column {j} is zero")));
        }
    }
    Ok(())
}

/// Gauge-equivariant K-theory of a Cuntz–Krieger algebra.
#[derive(Clone, Debug)]
pub struct CkModule {
    /// `coker(x·I − Aᵗ)`.
    pub presentation: RModulePres,
    /// `(ℤⁿ, Aᵗ)` when `A` is invertible over ℤ.
    pub fg: Option<RModuleFg>,
}

impl CkModule {
    /// Even part (fg form when available), odd part zero.
    pub fn graded(&self) -> GradedRModule {
        let even = match &self.fg {
            Some(m) => RModule::Fg(m.clone()),
            None => RModule::Pres(self.presentation.clone()),
        };
        GradedRModule::even_only(even)
    }
}

pub fn ck_module(a: &IntMatrix) -> Result<CkModule> {
    validate_ck_matrix(a)?;
    let at = a.transpose();
    let presentation = RModulePres::canonical(&at);
    let fg = if a.det().abs().is_one() {
        Some(RModuleFg::new(FgAbGroup::free(a.rows()), at)?)
    } else {
        None
    };
    Ok(CkModule { presentation, fg })
}

/// `|Ext²_R(M, M[−1])| = |Ext²(M₊, M₋)| · |Ext²(M₋, M₊)|`.
pub fn count_liftings(m: &GradedRModule) -> Result<Order> {
    let a = ext2_r(&m.even, &m.odd)?.order();
    let b = ext2_r(&m.odd, &m.even)?.order();
    Ok(a.mul(&b))
}

/// Equivariant K-theory of Nekrashevych's algebra for a rational map of
/// degree `n` with attracting cycles of the given lengths: `R/(x − n)` in
/// even degree, `(⊕ ℤ^{ℓᵢ}) / ℤ·(1,…,1)` with cyclic shifts in odd degree.
pub fn nekrashevych_module(n: i64, cycle_lengths: &[usize]) -> Result<GradedRModule> {
    if n < 2 {
        return Err(Error::Domain("degree must be at least 2".into()));
    }
    if cycle_lengths.is_empty() || cycle_lengths.contains(&0) {
        return Err(Error::Domain("cycle lengths must be positive".into()));
    }
    let k: usize = cycle_lengths.iter().sum();
    let mut rel = IntMatrix::zeros(k, 1);
    for i in 0..k {
        rel.set(i, 0, Int::one());
    }
    let mut x = IntMatrix::zeros(k, k);
    let mut start = 0;
    for &len in cycle_lengths {
        for i in 0..len {
            x.set(start + (i + 1) % len, start + i, Int::one());
        }
        start += len;
    }
    let odd = RModuleFg::new(FgAbGroup::from_presentation(rel), x)?;
    let even = RModulePres::canonical(&IntMatrix::from_rows(&[[n]]));
    Ok(GradedRModule::new(RModule::Pres(even), RModule::Fg(odd)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::ext::ext_r;
    use crate::laurent::poly::LaurentPoly;

    #[test]
    fn cuntz_algebra_module() {
        let m = ck_module(&IntMatrix::from_rows(&[[3]])).unwrap();
        assert!(m.fg.is_none());
        let expected = LaurentPoly::x().sub(&LaurentPoly::constant(3));
        assert_eq!(m.presentation.matrix().get(0, 0), &expected);
        assert_eq!(count_liftings(&m.graded()).unwrap(), Order::Finite(Int::one()));
    }

    #[test]
    fn unimodular_matrix_has_fg_form() {
        let a = IntMatrix::from_rows(&[[1, 1], [0, 1]]);
        let m = ck_module(&a).unwrap();
        let fg = m.fg.unwrap();
        assert_eq!(fg.x().matrix(), &IntMatrix::from_rows(&[[1, 0], [1, 1]]));
        assert!(fg.group().is_free());
        let id = ck_module(&IntMatrix::identity(3)).unwrap().fg.unwrap();
        assert!(id.x().matrix().is_identity());
    }

    #[test]
    fn zero_rows_and_columns_are_named() {
        let err = ck_module(&IntMatrix::from_rows(&[[1, 0], [0, 0]])).unwrap_err();
        assert_eq!(err, Error::Domain("row 1 is zero".into()));
        let err = ck_module(&IntMatrix::from_rows(&[[1, 1], [0, 1]]).transpose().transpose()).err();
        assert!(err.is_none());
        let err = ck_module(&IntMatrix::from_rows(&[[1, 1], [1, 1], [1, 1]])).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        let err = ck_module(&IntMatrix::from_rows(&[[0, 1], [0, 1]])).unwrap_err();
        assert_eq!(err, Error::Domain("column 0 is zero".into()));
    }

    #[test]
    fn cuntz_self_ext() {
        // M = R/(x - n), W = M: Hom = Ext¹ = Z[1/n], Ext² = 0.
        for n in 2..=5 {
            let m = RModule::Pres(RModulePres::canonical(&IntMatrix::from_rows(&[[n]])));
            let e = ext_r(&m, &m).unwrap();
            for v in [&e.hom, &e.ext1] {
                let inv = v.invariants();
                assert_eq!(inv.rank, 1);
                assert!(inv.torsion.is_empty());
                assert!(!inv.is_finitely_generated());
            }
            assert!(e.ext2.is_trivial());
        }
    }

    #[test]
    fn nekrashevych_both_directions_vanish() {
        let m = nekrashevych_module(3, &[2, 1]).unwrap();
        assert!(ext2_r(&m.even, &m.odd).unwrap().is_trivial());
        assert!(ext2_r(&m.odd, &m.even).unwrap().is_trivial());
        let odd = m.odd.as_fg().unwrap();
        assert!(odd.group().is_free());
        assert_eq!(odd.group().free_rank(), 2);
    }
}
