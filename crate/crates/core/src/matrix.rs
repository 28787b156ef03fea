//! Dense matrices over the arbitrary-precision integers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Shorthand used throughout the crate.
pub type Int = BigInt;

/// Row-major integer matrix. Entry count is always `rows * cols`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Int>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Int::one();
        }
        m
    }

    pub fn scalar(n: usize, c: &Int) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    /// Convenience constructor from small literals; panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.as_ref().len(), c, "ragged matrix literal");
            data.extend(row.as_ref().iter().map(|&v| Int::from(v)));
        }
        IntMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Int>]) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m.data[i * cols + j] = v.clone();
            }
        }
        m
    }

    pub fn diagonal(entries: &[Int]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Int] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<Int> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Int>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                let mut acc = Int::zero();
                for (a, b) in row.iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, c: &Int) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let cols = self.cols + other.cols;
        let mut m = Self::zeros(self.rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[i * cols + j] = self.get(i, j).clone();
            }
            for j in 0..other.cols {
                m.data[i * cols + self.cols + j] = other.get(i, j).clone();
            }
        }
        m
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Concatenate a sequence of matrices with equal row counts.
    pub fn hconcat(rows: usize, parts: &[IntMatrix]) -> Self {
        parts
            .iter()
            .fold(Self::zeros(rows, 0), |acc, part| acc.hstack(part))
    }

    pub fn vconcat(cols: usize, parts: &[IntMatrix]) -> Self {
        parts
            .iter()
            .fold(Self::zeros(0, cols), |acc, part| acc.vstack(part))
    }

    pub fn block_diag(blocks: &[IntMatrix]) -> Self {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &IntMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = self.get(r0 + i, c0 + j).clone();
            }
        }
        m
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                m.data[i * idx.len() + k] = self.get(i, j).clone();
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(&self.data[i * self.cols..(i + 1) * self.cols]);
        }
        IntMatrix {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut m = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            m.data[(i * other.rows + k) * cols + j * other.cols + l] = a * b;
                        }
                    }
                }
            }
        }
        m
    }

    /// Column-major vectorisation, so that `vec(A X B) = (Bᵗ ⊗ A) vec(X)`.
    pub fn vec_col_major(&self) -> Vec<Int> {
        let mut v = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                v.push(self.get(i, j).clone());
            }
        }
        v
    }

    pub fn from_vec_col_major(rows: usize, cols: usize, v: &[Int]) -> Self {
        assert_eq!(v.len(), rows * cols);
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m.data[i * cols + j] = v[j * rows + i].clone();
            }
        }
        m
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> Int {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut a = self.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a.get(i, k).is_zero()) else {
                    return Int::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    /// Characteristic polynomial `det(t·I − A)`, coefficients from the
    /// constant term upwards (Berkowitz, division free).
    pub fn charpoly(&self) -> Vec<Int> {
        assert!(self.is_square());
        let n = self.rows;
        // Berkowitz: build the Toeplitz products for successive leading minors.
        let mut poly: Vec<Int> = vec![Int::one()];
        for r in 0..n {
            // Leading (r+1)x(r+1) block: a = A[r][r], R = A[r][0..r], C = A[0..r][r], M = A[0..r][0..r]
            let a_rr = self.get(r, r).clone();
            let row_r: Vec<Int> = (0..r).map(|j| self.get(r, j).clone()).collect();
            let col_r: Vec<Int> = (0..r).map(|i| self.get(i, r).clone()).collect();
            // q = [1, -a, -R C, -R M C, -R M^2 C, ...] of length r+2
            let mut q = vec![Int::one(), -a_rr];
            let mut v = col_r.clone();
            for _ in 0..r {
                let rv: Int = row_r.iter().zip(&v).map(|(x, y)| x * y).sum();
                q.push(-rv);
                v = (0..r)
                    .map(|i| (0..r).map(|j| self.get(i, j) * &v[j]).sum())
                    .collect();
            }
            // new poly = Toeplitz(q) * poly (poly has length r+1, highest coefficient first)
            let mut next = vec![Int::zero(); r + 2];
            for (i, qi) in q.iter().enumerate() {
                for (j, pj) in poly.iter().enumerate() {
                    if i + j < r + 2 {
                        next[i + j] += qi * pj;
                    }
                }
            }
            poly = next;
        }
        poly.reverse();
        poly
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += c * row[src]`
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: &Int) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j];
            if !v.is_zero() {
                let add = v * c;
                self.data[dst * self.cols + j] += add;
            }
        }
    }

    /// `col[dst] += c * col[src]`
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: &Int) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src];
            if !v.is_zero() {
                let add = v * c;
                self.data[i * self.cols + dst] += add;
            }
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = -v;
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = -v;
        }
    }

    pub fn max_abs(&self) -> Int {
        self.data
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Int::zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|v| !v.is_negative())
    }

    /// Serialise in the shared matrix text format.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parse a matrix from the shared text format: a `rows cols` line
    /// followed by exactly `rows` lines of `cols` integers.
    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().collect();
        let mut cursor = LineCursor::new(&lines, 0);
        let m = cursor.read_matrix()?;
        cursor.expect_end()?;
        Ok(m)
    }
}

/// Line-oriented reader shared by all text formats.
pub(crate) struct LineCursor<'a> {
    lines: &'a [&'a str],
    pos: usize,
    /// Line number offset for diagnostics (1-based reporting).
    base: usize,
}

impl<'a> LineCursor<'a> {
    pub(crate) fn new(lines: &'a [&'a str], base: usize) -> Self {
        LineCursor {
            lines,
            pos: 0,
            base,
        }
    }

    pub(crate) fn line_no(&self) -> usize {
        self.base + self.pos + 1
    }

    pub(crate) fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.pos).copied()
    }

    pub(crate) fn next_line(&mut self) -> Option<&'a str> {
        let l = self.lines.get(self.pos).copied();
        if l.is_some() {
            self.pos += 1;
        }
        l
    }

    pub(crate) fn error(&self, column: usize, message: impl Into<String>) -> Error {
        Error::parse(self.line_no(), column, message)
    }

    pub(crate) fn expect_end(&mut self) -> Result<()> {
        while let Some(l) = self.peek() {
            if !l.trim().is_empty() {
                return Err(self.error(1, "unexpected trailing content"));
            }
            self.pos += 1;
        }
        Ok(())
    }

    pub(crate) fn read_matrix(&mut self) -> Result<IntMatrix> {
        let header_no = self.line_no();
        let header = self
            .next_line()
            .ok_or_else(|| Error::parse(header_no, 1, "missing `rows cols` header"))?;
        let dims = parse_ints(header, header_no)?;
        if dims.len() != 2 {
            return Err(Error::parse(header_no, 1, "expected `rows cols`"));
        }
        let to_usize = |v: &Int| -> Result<usize> {
            usize::try_from(v.clone())
                .map_err(|_| Error::parse(header_no, 1, "dimension must be a non-negative integer"))
        };
        let rows = to_usize(&dims[0])?;
        let cols = to_usize(&dims[1])?;
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let no = self.line_no();
            let line = self
                .next_line()
                .ok_or_else(|| Error::parse(no, 1, format!("expected {rows} matrix rows")))?;
            let vals = parse_ints(line, no)?;
            if vals.len() != cols {
                return Err(Error::parse(
                    no,
                    1,
                    format!("expected {cols} entries, found {}", vals.len()),
                ));
            }
            data.extend(vals);
        }
        IntMatrix::new(rows, cols, data)
    }
}

pub(crate) fn parse_ints(line: &str, line_no: usize) -> Result<Vec<Int>> {
    let mut out = Vec::new();
    let mut col = 1;
    for tok in line.split(' ') {
        if !tok.is_empty() {
            let v: Int = tok
                .parse()
                .map_err(|_| Error::parse(line_no, col, format!("invalid integer `{tok}`")))?;
            out.push(v);
        }
        col += tok.chars().count() + 1;
    }
    Ok(out)
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "matrix product shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut m = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        m.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        m
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;
    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

pub(crate) fn vec_is_zero(v: &[Int]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
pub(crate) fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_charpoly_small() {
        let a = IntMatrix::from_rows(&[[2, 1], [1, 1]]);
        assert_eq!(a.det(), Int::from(1));
        // t^2 - 3t + 1
        assert_eq!(a.charpoly(), ints(&[1, -3, 1]));
        let b = IntMatrix::from_rows(&[[1, 2, 0], [0, 1, 3], [4, 0, 1]]);
        assert_eq!(b.det(), Int::from(25));
        // det(tI - B) evaluated at t = 0 is -det(B) for odd size
        assert_eq!(b.charpoly()[0], Int::from(-25));
        assert_eq!(IntMatrix::zeros(0, 0).charpoly(), ints(&[1]));
    }

    #[test]
    fn kron_matches_vec_identity() {
        let a = IntMatrix::from_rows(&[[1, 2], [3, 4]]);
        let x = IntMatrix::from_rows(&[[5, -1, 0], [2, 7, 1]]);
        let b = IntMatrix::from_rows(&[[1, 0], [2, 1], [0, 3]]);
        let lhs = (&(&a * &x) * &b).vec_col_major();
        let rhs = b.transpose().kron(&a).mul_vec(&x.vec_col_major());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn text_round_trip_and_errors() {
        let text = "2 3\n1 -2 3\n0 0 7\n";
        let m = IntMatrix::parse(text).unwrap();
        assert_eq!(m.to_text(), text);
        assert_eq!(IntMatrix::parse("0 0\n").unwrap().rows(), 0);
        let err = IntMatrix::parse("2 2\n1 2\n3 x\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 3,
                column: 3,
                message: "invalid integer `x`".into()
            }
        );
        assert!(IntMatrix::parse("2 2\n1 2\n").is_err());
    }
}
