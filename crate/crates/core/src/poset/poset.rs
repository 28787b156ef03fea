use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// A finite T₀-space as a poset. `x ⪯ y` iff `y ∈ U_x`; an arrow `y → x`
/// means `y ≻ x` with nothing strictly between. Module structure maps run
/// along arrows, from `V_y` to `V_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    labels: Vec<String>,
    leq: Vec<Vec<bool>>,
    arrows: Vec<(usize, usize)>,
    /// `down[y][x]`: a fixed Hasse chain from `y` down to `x` (arrow indices).
    down: Vec<Vec<Option<Vec<usize>>>>,
}

/// Result of the unique-path test; `No` carries two distinct chains
/// between the same endpoints, as lists of points from top to bottom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UpsDecision {
    Yes,
    No { chains: [Vec<usize>; 2] },
}

impl UpsDecision {
    pub fn is_yes(&self) -> bool {
        matches!(self, UpsDecision::Yes)
    }
}

impl FinitePoset {
    /// Builds the poset from cover relations `(y, x)` meaning `y → x`.
    pub fn from_covers(labels: Vec<String>, covers: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut seen = BTreeSet::new();
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.contains(char::is_whitespace) {
                return Err(Error::Domain(format!("invalid label `{l}`")));
            }
            if !seen.insert(l.as_str()) {
                return Err(Error::Domain(format!("duplicate label `{}` at point {i}", l)));
            }
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(y, x) in covers {
            if y >= n || x >= n {
                return Err(Error::Domain(format!("arrow {y} -> {x} names a missing point")));
            }
            if y == x {
                return Err(Error::Domain(format!("loop at `{}`", labels[y])));
            }
            leq[x][y] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::Domain(format!(
                        "arrows form a cycle through `{}` and `{}`",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        let p = Self::from_leq(labels, leq)?;
        let mut given: Vec<(usize, usize)> = covers.to_vec();
        given.sort_unstable();
        if given.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("repeated arrow".into()));
        }
        for &(y, x) in &given {
            if !p.arrows.contains(&(y, x)) {
                return Err(Error::Domain(format!(
                    "arrow {} -> {} is implied by a longer chain",
                    p.labels[y], p.labels[x]
                )));
            }
        }
        Ok(p)
    }

    /// Builds the poset from its full order relation, `leq[x][y] = x ⪯ y`.
    pub fn from_leq(labels: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = labels.len();
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("order relation must be n x n".into()));
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(Error::Domain("order relation is not reflexive".into()));
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::Domain("order relation is not antisymmetric".into()));
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(Error::Domain("order relation is not transitive".into()));
                    }
                }
            }
        }
        let mut arrows = Vec::new();
        for y in 0..n {
            for x in 0..n {
                if x != y && leq[x][y] && !(0..n).any(|z| z != x && z != y && leq[x][z] && leq[z][y]) {
                    arrows.push((y, x));
                }
            }
        }
        let mut p = FinitePoset {
            labels,
            leq,
            arrows,
            down: Vec::new(),
        };
        p.down = p.compute_down_paths();
        Ok(p)
    }

    fn compute_down_paths(&self) -> Vec<Vec<Option<Vec<usize>>>> {
        let n = self.len();
        let mut down = vec![vec![None; n]; n];
        // Points by increasing height so shorter chains are known first.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| (0..n).filter(|&z| self.leq[z][x]).count());
        for &y in &order {
            down[y][y] = Some(Vec::new());
            for &x in &order {
                if x == y || !self.leq[x][y] {
                    continue;
                }
                // First arrow out of y that stays above x.
                let (a, &(_, mid)) = self
                    .arrows
                    .iter()
                    .enumerate()
                    .find(|(_, &(s, t))| s == y && self.leq[x][t])
                    .expect("comparable points are joined by a chain");
                let mut path = vec![a];
                path.extend(down[mid][x].clone().expect("shorter chain computed first"));
                down[y][x] = Some(path);
            }
        }
        down
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `x ⪯ y`.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    /// Hasse arrows `(y, x)` with `y → x`, sorted.
    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn arrow_index(&self, y: usize, x: usize) -> Option<usize> {
        self.arrows.iter().position(|&a| a == (y, x))
    }

    /// The fixed chain of arrow indices from `y` down to `x`, if `x ⪯ y`.
    pub fn down_path(&self, y: usize, x: usize) -> Option<&[usize]> {
        self.down[y][x].as_deref()
    }

    /// `U_x = {y : x ⪯ y}`.
    pub fn open_hull(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.leq[x][y]).collect()
    }

    /// Every Hasse chain from `y` down to `x`, as point lists.
    pub fn chains(&self, y: usize, x: usize) -> Vec<Vec<usize>> {
        if y == x {
            return vec![vec![x]];
        }
        let mut out = Vec::new();
        for &(s, t) in &self.arrows {
            if s == y && self.leq[x][t] {
                for mut c in self.chains(t, x) {
                    c.insert(0, y);
                    out.push(c);
                }
            }
        }
        out
    }

    /// All Hasse chains of non-negative length, as point lists from top.
    pub fn all_chains(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out = Vec::new();
        for y in 0..n {
            for x in 0..n {
                if self.leq[x][y] {
                    out.extend(self.chains(y, x));
                }
            }
        }
        out
    }

    pub fn is_unique_path_space(&self) -> UpsDecision {
        let n = self.len();
        for y in 0..n {
            for x in 0..n {
                if x != y && self.leq[x][y] {
                    let c = self.chains(y, x);
                    if c.len() > 1 {
                        return UpsDecision::No {
                            chains: [c[0].clone(), c[1].clone()],
                        };
                    }
                }
            }
        }
        UpsDecision::Yes
    }

    /// Relabels points by `perm`: point `i` of `self` becomes point `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let n = self.len();
        let mut labels = vec![String::new(); n];
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            labels[perm[i]] = self.labels[i].clone();
            for j in 0..n {
                leq[perm[i]][perm[j]] = self.leq[i][j];
            }
        }
        Self::from_leq(labels, leq).expect("permutation preserves the order axioms")
    }

    /// Order-preserving bijections `σ` with `x ⪯ y ⇔ σx ⪯ σy`, as
    /// `σ[i]` = image of point `i`.
    pub fn isomorphisms(&self, other: &FinitePoset) -> Vec<Vec<usize>> {
        let n = self.len();
        if other.len() != n || other.arrows.len() != self.arrows.len() {
            return Vec::new();
        }
        let sig = |p: &FinitePoset, i: usize| {
            let up = (0..n).filter(|&j| p.leq[i][j]).count();
            let dn = (0..n).filter(|&j| p.leq[j][i]).count();
            (up, dn)
        };
        let mut out = Vec::new();
        let mut perm = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn rec(
            i: usize,
            a: &FinitePoset,
            b: &FinitePoset,
            perm: &mut Vec<usize>,
            used: &mut Vec<bool>,
            out: &mut Vec<Vec<usize>>,
            sig: &dyn Fn(&FinitePoset, usize) -> (usize, usize),
        ) {
            let n = a.len();
            if i == n {
                out.push(perm.clone());
                return;
            }
            for j in 0..n {
                if used[j] || sig(a, i) != sig(b, j) {
                    continue;
                }
                let ok = (0..i).all(|k| a.leq[i][k] == b.leq[j][perm[k]] && a.leq[k][i] == b.leq[perm[k]][j]);
                if ok {
                    perm[i] = j;
                    used[j] = true;
                    rec(i + 1, a, b, perm, used, out, sig);
                    used[j] = false;
                }
            }
        }
        rec(0, self, other, &mut perm, &mut used, &mut out, &sig);
        out
    }

    fn canonical_key(&self) -> Vec<bool> {
        let n = self.len();
        let mut best: Option<Vec<bool>> = None;
        let mut perm: Vec<usize> = (0..n).collect();
        permutations(&mut perm, 0, &mut |p| {
            let mut key = vec![false; n * n];
            for i in 0..n {
                for j in 0..n {
                    key[p[i] * n + p[j]] = self.leq[i][j];
                }
            }
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        });
        best.unwrap_or_default()
    }

    pub fn chain(n: usize) -> Self {
        let covers: Vec<(usize, usize)> = (1..n).map(|i| (i, i - 1)).collect();
        Self::from_covers(default_labels(n), &covers).expect("chain")
    }

    pub fn discrete(n: usize) -> Self {
        Self::from_covers(default_labels(n), &[]).expect("discrete")
    }

    /// Two points, `p1 → p0`.
    pub fn sierpinski() -> Self {
        Self::chain(2)
    }

    /// `p3 → p1, p3 → p2, p1 → p0, p2 → p0`.
    pub fn diamond() -> Self {
        Self::from_covers(default_labels(4), &[(3, 1), (3, 2), (1, 0), (2, 0)]).expect("diamond")
    }
}

fn permutations(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

pub fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// All posets on `n` points up to isomorphism, each obtained by adding a
/// new maximal point above a down-closed subset of a smaller poset.
pub fn enumerate_posets(n: usize) -> Vec<FinitePoset> {
    let mut level: Vec<FinitePoset> = vec![FinitePoset::discrete(0)];
    for size in 1..=n {
        let mut next: Vec<FinitePoset> = Vec::new();
        let mut keys: BTreeSet<Vec<bool>> = BTreeSet::new();
        for p in &level {
            let m = p.len();
            for mask in 0u32..(1 << m) {
                let below = |i: usize| mask & (1 << i) != 0;
                let down_closed = (0..m).all(|i| !below(i) || (0..m).all(|j| !p.leq(j, i) || below(j)));
                if !down_closed {
                    continue;
                }
                let mut leq = vec![vec![false; size]; size];
                for i in 0..m {
                    for j in 0..m {
                        leq[i][j] = p.leq(i, j);
                    }
                    leq[i][m] = below(i);
                }
                leq[m][m] = true;
                let q = FinitePoset::from_leq(default_labels(size), leq).expect("valid extension");
                if keys.insert(q.canonical_key()) {
                    next.push(q);
                }
            }
        }
        level = next;
    }
    level
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| enumerate_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 16, 63]);
    }

    #[test]
    fn unique_paths() {
        for n in 1..=5 {
            assert!(FinitePoset::chain(n).is_unique_path_space().is_yes());
            assert!(FinitePoset::discrete(n).is_unique_path_space().is_yes());
        }
        match FinitePoset::diamond().is_unique_path_space() {
            UpsDecision::No { chains } => {
                assert_eq!(chains[0].first(), Some(&3));
                assert_eq!(chains[0].last(), Some(&0));
                assert_eq!(chains[1].last(), Some(&0));
                assert_ne!(chains[0], chains[1]);
            }
            UpsDecision::Yes => panic!("diamond has two chains"),
        }
    }

    #[test]
    fn covers_are_validated() {
        let l = default_labels(3);
        assert!(FinitePoset::from_covers(l.clone(), &[(2, 1), (1, 0), (2, 0)]).is_err());
        assert!(FinitePoset::from_covers(l.clone(), &[(1, 0), (0, 1)]).is_err());
        let p = FinitePoset::from_covers(l, &[(2, 1), (1, 0)]).unwrap();
        assert!(p.leq(0, 2));
        assert_eq!(p.down_path(2, 0).unwrap().len(), 2);
        assert_eq!(p.open_hull(1), vec![1, 2]);
    }

    #[test]
    fn isomorphisms_of_diamond() {
        let d = FinitePoset::diamond();
        assert_eq!(d.isomorphisms(&d).len(), 2);
        let q = d.permute(&[3, 2, 1, 0]);
        let isos = d.isomorphisms(&q);
        assert_eq!(isos.len(), 2);
        assert!(isos.contains(&vec![3, 2, 1, 0]));
        assert!(d.isomorphisms(&FinitePoset::chain(4)).is_empty());
    }
}
