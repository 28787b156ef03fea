use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::abelian::GroupMorphism;
use crate::error::{Error, Result};
use crate::matrix::{Int, IntMatrix};

/// A finitely supported integer Laurent polynomial `Σ cₖ xᵏ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Int>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<Int>) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: impl Into<Int>, k: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(k, c.into());
        p
    }

    /// `x`.
    pub fn x() -> Self {
        Self::monomial(1, 1)
    }

    fn add_term(&mut self, k: i64, c: Int) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(Int::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: i64) -> Int {
        self.terms.get(&k).cloned().unwrap_or_else(Int::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Int)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a + b, ca * cb);
            }
        }
        out
    }

    /// Value at `x = f` for an automorphism `f` with inverse `f_inv`
    /// (the inverse is only used for negative exponents).
    pub fn eval_morphism(&self, f: &GroupMorphism, f_inv: &GroupMorphism) -> Result<GroupMorphism> {
        let g = f.source();
        let mut acc = GroupMorphism::zero(g, g);
        for (k, c) in &self.terms {
            let base = if *k >= 0 { f } else { f_inv };
            let mut p = GroupMorphism::identity(g);
            for _ in 0..k.unsigned_abs() {
                p = base.compose(&p)?;
            }
            let scaled = GroupMorphism::new(g.clone(), g.clone(), p.matrix().scale(c))?;
            acc = acc.add(&scaled)?;
        }
        Ok(acc)
    }

    /// Value at an integer matrix; negative exponents are rejected.
    pub fn eval_matrix(&self, m: &IntMatrix) -> Result<IntMatrix> {
        let n = m.rows();
        let mut acc = IntMatrix::zeros(n, n);
        for (k, c) in &self.terms {
            if *k < 0 {
                return Err(Error::Domain("negative exponent in polynomial evaluation".into()));
            }
            acc = &acc + &m.pow(*k as u32).scale(c);
        }
        Ok(acc)
    }

    /// Polynomial from coefficients, constant term first.
    pub fn from_coeffs(coeffs: &[Int]) -> Self {
        let mut p = Self::zero();
        for (k, c) in coeffs.iter().enumerate() {
            p.add_term(k as i64, c.clone());
        }
        p
    }

    /// Parses `0` or `c*x^k` terms joined by ` + `. `column` is the column
    /// of the first character, for diagnostics.
    pub fn parse(text: &str, line: usize, column: usize) -> Result<Self> {
        if text == "0" {
            return Ok(Self::zero());
        }
        let mut p = Self::zero();
        let mut col = column;
        for term in text.split(" + ") {
            let (c, k) = term
                .split_once("*x^")
                .ok_or_else(|| Error::parse(line, col, format!("expected `c*x^k`, found `{term}`")))?;
            let c: Int = c
                .parse()
                .map_err(|_| Error::parse(line, col, format!("invalid coefficient `{c}`")))?;
            let k: i64 = k
                .parse()
                .map_err(|_| Error::parse(line, col, format!("invalid exponent `{k}`")))?;
            p.add_term(k, c);
            col += term.chars().count() + 3;
        }
        Ok(p)
    }
}

impl fmt::Display for LaurentPoly {
    /// Canonical form: increasing exponents, every term as `c*x^k`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(k, c)| format!("{c}*x^{k}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

/// Matrix with Laurent-polynomial entries, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    data: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<LaurentPoly>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(LaurentMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        LaurentMatrix {
            rows,
            cols,
            data: vec![LaurentPoly::zero(); rows * cols],
        }
    }

    /// The constant matrix `m`.
    pub fn constant(m: &IntMatrix) -> Self {
        LaurentMatrix {
            rows: m.rows(),
            cols: m.cols(),
            data: m.entries().iter().map(|c| LaurentPoly::constant(c.clone())).collect(),
        }
    }

    /// `x·I − t`.
    pub fn x_minus(t: &IntMatrix) -> Self {
        assert!(t.is_square());
        let n = t.rows();
        let mut m = Self::constant(&-t);
        for i in 0..n {
            let e = m.get(i, i).add(&LaurentPoly::x());
            m.set(i, i, e);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: LaurentPoly) {
        self.data[i * self.cols + j] = p;
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension("Laurent matrix product".into()));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = LaurentPoly::zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        LaurentMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(LaurentPoly::is_zero)
    }

    /// `T` when the matrix has the shape `x·I − T` with `T` constant.
    pub fn canonical_shape(&self) -> Option<IntMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut t = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let p = self.get(i, j);
                let lead = if i == j { Int::one() } else { Int::zero() };
                if p.coeff(1) != lead {
                    return None;
                }
                if p.terms().any(|(k, _)| k != 0 && k != 1) {
                    return None;
                }
                t.set(i, j, -p.coeff(0));
            }
        }
        Some(t)
    }

    /// Rows as `; `-separated canonical polynomials.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            s.push_str(&row.join("; "));
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let x = LaurentPoly::x();
        let p = x.sub(&LaurentPoly::constant(2));
        assert_eq!(p.to_string(), "-2*x^0 + 1*x^1");
        let q = LaurentPoly::monomial(1, -1);
        assert_eq!(p.mul(&q).to_string(), "-2*x^-1 + 1*x^0");
        assert!(p.sub(&p).is_zero());
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "3*x^0", "-1*x^-2 + 4*x^5"] {
            assert_eq!(LaurentPoly::parse(s, 1, 1).unwrap().to_string(), s);
        }
        let err = LaurentPoly::parse("3*x^0 + y", 4, 1).unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 4,
                column: 9,
                message: "expected `c*x^k`, found `y`".into()
            }
        );
    }

    #[test]
    fn canonical_shape_detection() {
        let t = IntMatrix::from_rows(&[[1, 2], [3, 4]]);
        let m = LaurentMatrix::x_minus(&t);
        assert_eq!(m.canonical_shape(), Some(t));
        let mut bad = m.clone();
        bad.set(0, 1, LaurentPoly::x());
        assert_eq!(bad.canonical_shape(), None);
    }

    #[test]
    fn evaluation_at_matrix() {
        let a = IntMatrix::from_rows(&[[0, 1], [1, 1]]);
        let cp = LaurentPoly::from_coeffs(&a.charpoly());
        assert!(cp.eval_matrix(&a).unwrap().is_zero());
    }
}
