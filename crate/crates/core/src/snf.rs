//! Smith normal form with unimodular transforms, and the integer lattice
//! primitives built on it (solving, kernels, image bases).

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::{Int, IntMatrix};

/// `u · a · v = d` with `u`, `v` unimodular and `d` diagonal,
/// `d[0][0] | d[1][1] | …`, all diagonal entries non-negative.
/// The inverses of both transforms are tracked alongside.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// Diagonal entries `d[i][i]` for `i < min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    /// Check `u·a·v = d`, the divisibility chain and unimodularity by
    /// direct multiplication.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        let n = a.rows();
        let m = a.cols();
        if &(&self.u * a) * &self.v != self.d {
            return false;
        }
        if !(&self.u * &self.u_inv).is_identity() || !(&self.v * &self.v_inv).is_identity() {
            return false;
        }
        for i in 0..n {
            for j in 0..m {
                if i != j && !self.d.get(i, j).is_zero() {
                    return false;
                }
            }
        }
        let diag = self.diagonal();
        for w in diag.windows(2) {
            if w[0].is_negative() || w[1].is_negative() {
                return false;
            }
            if w[0].is_zero() {
                if !w[1].is_zero() {
                    return false;
                }
            } else if !(&w[1] % &w[0]).is_zero() {
                return false;
            }
        }
        diag.iter().all(|x| !x.is_negative())
    }
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &Int) {
        self.a.add_row_multiple(dst, src, c);
        self.u.add_row_multiple(dst, src, c);
        self.u_inv.add_col_multiple(src, dst, &-c);
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &Int) {
        self.a.add_col_multiple(dst, src, c);
        self.v.add_col_multiple(dst, src, c);
        self.v_inv.add_row_multiple(src, dst, &-c);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }
}

/// Quotient rounded to the nearest integer, which keeps remainders in
/// `[-|b|/2, |b|/2]`.
fn round_div(a: &Int, b: &Int) -> Int {
    let (q, r) = a.div_mod_floor(b);
    // r carries the sign of b; r - b is the other candidate remainder.
    let twice = &r * Int::from(2);
    if twice.abs() > b.abs() {
        q + 1
    } else {
        q
    }
}

/// Smith normal form. Pivot choice: the nonzero entry of least absolute
/// value in the active block, ties broken by lowest row then lowest column.
pub fn snf(a: &IntMatrix) -> SmithDecomposition {
    let n = a.rows();
    let m = a.cols();
    let mut w = Work {
        a: a.clone(),
        u: IntMatrix::identity(n),
        u_inv: IntMatrix::identity(n),
        v: IntMatrix::identity(m),
        v_inv: IntMatrix::identity(m),
    };
    let mut t = 0;
    while t < n.min(m) {
        // Minimal pivot in the active block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..n {
            for j in t..m {
                let e = w.a.get(i, j);
                if e.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if w.a.get(bi, bj).abs() <= e.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);

        loop {
            let pivot = w.a.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..n {
                if !w.a.get(i, t).is_zero() {
                    let q = round_div(w.a.get(i, t), &pivot);
                    w.add_row(i, t, &-q);
                    if !w.a.get(i, t).is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..m {
                if !w.a.get(t, j).is_zero() {
                    let q = round_div(w.a.get(t, j), &pivot);
                    w.add_col(j, t, &-q);
                    if !w.a.get(t, j).is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                // A smaller remainder exists in row or column t: move it in.
                let mut best = (t, t);
                for i in t..n {
                    let e = w.a.get(i, t);
                    if !e.is_zero() && e.abs() < w.a.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t..m {
                    let e = w.a.get(t, j);
                    if !e.is_zero() && e.abs() < w.a.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                w.swap_rows(t, best.0);
                w.swap_cols(t, best.1);
                continue;
            }
            // Row and column cleared; enforce divisibility of the rest.
            let mut offender = None;
            'search: for i in t + 1..n {
                for j in t + 1..m {
                    if !(w.a.get(i, j) % &pivot).is_zero() {
                        offender = Some(i);
                        break 'search;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let one = Int::one();
                    w.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if w.a.get(t, t).is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    let rank = (0..n.min(m)).take_while(|&i| !w.a.get(i, i).is_zero()).count();
    SmithDecomposition {
        u: w.u,
        d: w.a,
        v: w.v,
        u_inv: w.u_inv,
        v_inv: w.v_inv,
        rank,
    }
}

/// Reusable solver for `A x = b` over the integers.
#[derive(Clone, Debug)]
pub struct LatticeSolver {
    snf: SmithDecomposition,
}

impl LatticeSolver {
    pub fn new(a: &IntMatrix) -> Self {
        LatticeSolver { snf: snf(a) }
    }

    pub fn decomposition(&self) -> &SmithDecomposition {
        &self.snf
    }

    /// An integer solution of `A x = b`, or `None` when none exists.
    /// Free coordinates are set to zero, so the answer is deterministic.
    pub fn solve(&self, b: &[Int]) -> Option<Vec<Int>> {
        let d = &self.snf.d;
        if b.len() != d.rows() {
            return None;
        }
        let y = self.snf.u.mul_vec(b);
        let m = d.cols();
        let mut z = vec![Int::zero(); m];
        for (i, yi) in y.iter().enumerate() {
            if i < self.snf.rank {
                let di = d.get(i, i);
                let (q, r) = yi.div_rem(di);
                if !r.is_zero() {
                    return None;
                }
                z[i] = q;
            } else if !yi.is_zero() {
                return None;
            }
        }
        Some(self.snf.v.mul_vec(&z))
    }

    pub fn contains(&self, b: &[Int]) -> bool {
        self.solve(b).is_some()
    }

    /// Basis of the integer kernel of `A`, as columns.
    pub fn kernel(&self) -> IntMatrix {
        let m = self.snf.d.cols();
        let idx: Vec<usize> = (self.snf.rank..m).collect();
        self.snf.v.select_columns(&idx)
    }
}

/// Integer solution of `a x = b`.
pub fn solve(a: &IntMatrix, b: &[Int]) -> Option<Vec<Int>> {
    LatticeSolver::new(a).solve(b)
}

/// Basis (as columns) of `{x ∈ ℤᵐ : a x = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    LatticeSolver::new(a).kernel()
}

/// Basis (as columns) of the lattice spanned by the columns of `g`.
pub fn image_basis(g: &IntMatrix) -> IntMatrix {
    let s = snf(g);
    let cols: Vec<Vec<Int>> = (0..s.rank)
        .map(|i| {
            let di = s.d.get(i, i);
            s.u_inv.column(i).iter().map(|x| x * di).collect()
        })
        .collect();
    IntMatrix::from_columns(g.rows(), &cols)
}

/// Basis of `{x ∈ ℤⁿ : a x ∈ span(rel)}`, the preimage of a lattice.
pub fn preimage_basis(a: &IntMatrix, rel: &IntMatrix) -> IntMatrix {
    assert_eq!(a.rows(), rel.rows());
    let n = a.cols();
    if rel.cols() == 0 {
        return kernel_basis(a);
    }
    let stacked = a.hstack(&-rel);
    let k = kernel_basis(&stacked);
    let proj = k.block(0, 0, n, k.cols());
    image_basis(&proj)
}
