use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{Int, IntMatrix};

/// A finite directed graph with edge multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedGraph {
    labels: Vec<String>,
    /// `adj[v][w]`: number of edges `v → w`.
    adj: Vec<Vec<u32>>,
}

impl DirectedGraph {
    pub fn new(labels: Vec<String>, adj: Vec<Vec<u32>>) -> Result<Self> {
        let n = labels.len();
        if adj.len() != n || adj.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("adjacency must be n x n".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.contains(char::is_whitespace) {
                return Err(Error::Domain(format!("invalid vertex label `{l}`")));
            }
            if labels[..i].contains(l) {
                return Err(Error::Domain(format!("repeated vertex label `{l}`")));
            }
        }
        Ok(DirectedGraph { labels, adj })
    }

    /// Vertices `v0, v1, …` with the given adjacency matrix.
    pub fn from_adjacency(adj: &[Vec<u32>]) -> Result<Self> {
        let labels = (0..adj.len()).map(|i| format!("v{i}")).collect();
        Self::new(labels, adj.to_vec())
    }

    /// From a non-negative integer matrix.
    pub fn from_matrix(a: &IntMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension("adjacency matrix must be square".into()));
        }
        let mut adj = vec![vec![0; a.rows()]; a.rows()];
        for (i, row) in adj.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = u32::try_from(a.get(i, j))
                    .map_err(|_| Error::Domain("adjacency entries must be small and non-negative".into()))?;
            }
        }
        Self::from_adjacency(&adj)
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

    pub fn edges(&self, v: usize, w: usize) -> u32 {
        self.adj[v][w]
    }

    pub fn adjacency(&self) -> IntMatrix {
        let n = self.len();
        let data = self.adj.iter().flatten().map(|&e| Int::from(e)).collect();
        IntMatrix::new(n, n, data).expect("square")
    }

    pub fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&w| self.adj[v][w] > 0)
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.adj[v].iter().all(|&e| e == 0)
    }

    /// Vertex `i` becomes vertex `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> DirectedGraph {
        let n = self.len();
        let mut labels = vec![String::new(); n];
        let mut adj = vec![vec![0; n]; n];
        for i in 0..n {
            labels[perm[i]] = self.labels[i].clone();
            for j in 0..n {
                adj[perm[i]][perm[j]] = self.adj[i][j];
            }
        }
        DirectedGraph { labels, adj }
    }

    /// Disjoint union, with labels of `other` suffixed by `'`.
    pub fn disjoint_union(&self, other: &DirectedGraph) -> DirectedGraph {
        let (n, m) = (self.len(), other.len());
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().map(|l| format!("{l}'")));
        let mut adj = vec![vec![0; n + m]; n + m];
        for i in 0..n {
            adj[i][..n].copy_from_slice(&self.adj[i]);
        }
        for i in 0..m {
            adj[n + i][n..].copy_from_slice(&other.adj[i]);
        }
        DirectedGraph { labels, adj }
    }

    /// Vertex bijections `π` with `A'(πv, πw) = A(v, w)`.
    pub fn isomorphisms(&self, other: &DirectedGraph, limit: usize) -> Vec<Vec<usize>> {
        let n = self.len();
        if other.len() != n {
            return Vec::new();
        }
        let sig = |g: &DirectedGraph, v: usize| {
            let mut out: Vec<u32> = g.adj[v].clone();
            out.sort_unstable();
            let mut inc: Vec<u32> = (0..n).map(|u| g.adj[u][v]).collect();
            inc.sort_unstable();
            (g.adj[v][v], out, inc)
        };
        let sa: Vec<_> = (0..n).map(|v| sig(self, v)).collect();
        let sb: Vec<_> = (0..n).map(|v| sig(other, v)).collect();
        let mut out = Vec::new();
        let mut perm = vec![usize::MAX; n];
        let mut used = vec![false; n];
        struct Search<'a> {
            a: &'a DirectedGraph,
            b: &'a DirectedGraph,
            sa: &'a [(u32, Vec<u32>, Vec<u32>)],
            sb: &'a [(u32, Vec<u32>, Vec<u32>)],
            limit: usize,
        }
        fn rec(s: &Search<'_>, i: usize, perm: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
            if out.len() >= s.limit {
                return;
            }
            if i == perm.len() {
                out.push(perm.clone());
                return;
            }
            for j in 0..perm.len() {
                if used[j] || s.sa[i] != s.sb[j] {
                    continue;
                }
                let ok = (0..i).all(|k| s.a.adj[i][k] == s.b.adj[j][perm[k]] && s.a.adj[k][i] == s.b.adj[perm[k]][j]);
                if ok {
                    perm[i] = j;
                    used[j] = true;
                    rec(s, i + 1, perm, used, out);
                    used[j] = false;
                }
            }
        }
        let s = Search {
            a: self,
            b: other,
            sa: &sa,
            sb: &sb,
            limit,
        };
        rec(&s, 0, &mut perm, &mut used, &mut out);
        out
    }
}

/// Why a graph falls outside the supported class, with witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub sinks: Vec<usize>,
    /// Condition (K): no vertex on a cycle has exactly one return path.
    pub condition_k: bool,
    /// A cycle through a vertex with a single return path, when (K) fails.
    pub k_witness: Option<Vec<usize>>,
    /// Whether that cycle has no exit.
    pub witness_has_no_exit: bool,
    /// Finitely many ideals; for finite graphs this is Condition (K).
    pub finite_ideals: bool,
    /// Finite graphs give unital algebras.
    pub unital: bool,
}

impl AdmissibilityReport {
    pub fn passes(&self) -> bool {
        self.sinks.is_empty() && self.condition_k
    }

    /// The first violated condition, named.
    pub fn failure(&self, g: &DirectedGraph) -> Option<String> {
        if let Some(w) = &self.k_witness {
            let cyc: Vec<&str> = w.iter().map(|&v| g.labels()[v].as_str()).collect();
            let exit = if self.witness_has_no_exit { "without exit" } else { "with a single return path" };
            return Some(format!("Condition (K) fails: cycle {exit} through {}", cyc.join(" -> ")));
        }
        if !self.sinks.is_empty() {
            let s: Vec<&str> = self.sinks.iter().map(|&v| g.labels()[v].as_str()).collect();
            return Some(format!("graph has sinks: {}", s.join(", ")));
        }
        None
    }
}

impl fmt::Display for AdmissibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sinks: {}, condition (K): {}, finite ideals: {}",
            self.sinks.len(),
            self.condition_k,
            self.finite_ideals
        )
    }
}

/// Return paths `v → … → v` that meet `v` only at their ends, counted
/// with multiplicity and capped at 2.
fn return_paths(g: &DirectedGraph, v: usize) -> u32 {
    let n = g.len();
    // Vertices other than v lying on a cycle avoiding v.
    let avoid_reach = |from: usize| -> Vec<bool> {
        let mut seen = vec![false; n];
        let mut stack = vec![from];
        while let Some(u) = stack.pop() {
            for w in g.successors(u) {
                if w != v && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    };
    let reach: Vec<Vec<bool>> = (0..n).map(|u| if u == v { vec![false; n] } else { avoid_reach(u) }).collect();
    let on_cycle: Vec<bool> = (0..n).map(|u| u != v && reach[u][u]).collect();
    let reaches_v: Vec<bool> = (0..n)
        .map(|u| u != v && (g.edges(u, v) > 0 || (0..n).any(|w| reach[u][w] && g.edges(w, v) > 0)))
        .collect();
    // Paths from u to v avoiding v in between, capped at 2.
    let mut memo: Vec<Option<u32>> = vec![None; n];
    fn count(
        u: usize,
        g: &DirectedGraph,
        v: usize,
        reach: &[Vec<bool>],
        on_cycle: &[bool],
        reaches_v: &[bool],
        memo: &mut Vec<Option<u32>>,
    ) -> u32 {
        if let Some(c) = memo[u] {
            return c;
        }
        if !reaches_v[u] {
            memo[u] = Some(0);
            return 0;
        }
        // A cycle on the way to v gives infinitely many paths.
        let loops = on_cycle[u] || (0..g.len()).any(|w| reach[u][w] && on_cycle[w] && reaches_v[w]);
        if loops {
            memo[u] = Some(2);
            return 2;
        }
        let mut c = g.edges(u, v).min(2);
        for w in g.successors(u) {
            if w != v {
                c = (c + g.edges(u, w).min(2) * count(w, g, v, reach, on_cycle, reaches_v, memo)).min(2);
            }
        }
        memo[u] = Some(c);
        c
    }
    let mut total = g.edges(v, v).min(2);
    for w in g.successors(v) {
        if w != v {
            total = (total + g.edges(v, w).min(2) * count(w, g, v, &reach, &on_cycle, &reaches_v, &mut memo)).min(2);
        }
    }
    total
}

/// The unique return path at `v`, as a vertex cycle starting at `v`.
fn single_cycle(g: &DirectedGraph, v: usize) -> Vec<usize> {
    let mut cyc = vec![v];
    let mut u = v;
    loop {
        // Exactly one successor continues to a return path.
        let next = g
            .successors(u)
            .find(|&w| w == v || return_paths_through(g, v, w))
            .expect("a return path exists");
        if next == v {
            return cyc;
        }
        cyc.push(next);
        u = next;
    }
}

fn return_paths_through(g: &DirectedGraph, v: usize, w: usize) -> bool {
    let mut seen = vec![false; g.len()];
    let mut stack = vec![w];
    seen[w] = true;
    while let Some(u) = stack.pop() {
        for x in g.successors(u) {
            if x == v {
                return true;
            }
            if !seen[x] {
                seen[x] = true;
                stack.push(x);
            }
        }
    }
    false
}

pub fn admissible(g: &DirectedGraph) -> AdmissibilityReport {
    let sinks: Vec<usize> = (0..g.len()).filter(|&v| g.is_sink(v)).collect();
    let bad = (0..g.len()).find(|&v| return_paths(g, v) == 1);
    let k_witness = bad.map(|v| single_cycle(g, v));
    let witness_has_no_exit = k_witness.as_ref().is_some_and(|c| {
        c.iter().enumerate().all(|(i, &u)| {
            let next = c[(i + 1) % c.len()];
            g.successors(u).all(|w| w == next) && g.edges(u, next) == 1
        })
    });
    AdmissibilityReport {
        condition_k: bad.is_none(),
        finite_ideals: bad.is_none(),
        sinks,
        k_witness,
        witness_has_no_exit,
        unital: true,
    }
}

/// Text format:
///
/// ```text
/// vertices 2
/// v
/// w
/// v v 2
/// v w
/// w w 3
/// ```
///
/// Edge lines are `source target [multiplicity]`; repeated lines add up.
/// Blank lines and `#` comments are ignored. [`write_graph`] lists every
/// nonzero entry in row order with its multiplicity.
pub fn parse_graph(text: &str) -> Result<DirectedGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (no, first) = lines.next().ok_or_else(|| Error::parse(1, 1, "expected `vertices n`"))?;
    let n: usize = first
        .strip_prefix("vertices ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| Error::parse(no, 1, "expected `vertices n`"))?;
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let (no, l) = lines
            .next()
            .ok_or_else(|| Error::parse(no + 1, 1, format!("expected {n} vertex labels")))?;
        if l.contains(char::is_whitespace) {
            return Err(Error::parse(no, 1, format!("invalid vertex label `{l}`")));
        }
        if labels.iter().any(|x: &String| x == l) {
            return Err(Error::parse(no, 1, format!("repeated vertex label `{l}`")));
        }
        labels.push(l.to_string());
    }
    let mut adj = vec![vec![0u32; n]; n];
    for (no, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() < 2 || toks.len() > 3 {
            return Err(Error::parse(no, 1, "expected `source target [multiplicity]`"));
        }
        let col = |k: usize| l.find(toks[k]).map_or(1, |c| c + 1);
        let find = |k: usize| {
            labels
                .iter()
                .position(|x| x == toks[k])
                .ok_or_else(|| Error::parse(no, col(k), format!("unknown vertex `{}`", toks[k])))
        };
        let (v, w) = (find(0)?, find(1)?);
        let m: u32 = match toks.get(2) {
            None => 1,
            Some(t) => t
                .parse()
                .map_err(|_| Error::parse(no, col(2), format!("invalid multiplicity `{t}`")))?,
        };
        adj[v][w] = adj[v][w]
            .checked_add(m)
            .ok_or_else(|| Error::parse(no, col(2), "multiplicity overflow"))?;
    }
    DirectedGraph::new(labels, adj)
}

pub fn write_graph(g: &DirectedGraph) -> String {
    let mut s = format!("vertices {}\n", g.len());
    for l in g.labels() {
        s.push_str(l);
        s.push('\n');
    }
    for v in 0..g.len() {
        for w in 0..g.len() {
            let m = g.edges(v, w);
            if m > 0 {
                s.push_str(&format!("{} {} {}\n", g.labels()[v], g.labels()[w], m));
            }
        }
    }
    s
}
