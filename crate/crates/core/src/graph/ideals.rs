//! Hereditary saturated vertex sets and the primitive ideal space.
//!
//! For a finite graph without sinks satisfying Condition (K), ideals are
//! the hereditary saturated sets `H`, ordered by inclusion. Open subsets
//! of `X = Prim` are ideals; the minimal open set `U_x` of a point is a
//! join-irreducible `H_x`, and `x ⪯ y` iff `U_y ⊆ U_x`.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::graph::{admissible, DirectedGraph};
use crate::poset::FinitePoset;

/// Vertex sets as bit masks.
pub type VertexSet = u64;

pub fn members(s: VertexSet) -> Vec<usize> {
    (0..64).filter(|&i| s >> i & 1 == 1).collect()
}

#[derive(Clone, Debug)]
pub struct IdealPoset {
    /// All hereditary saturated sets, sorted by size then mask.
    pub sets: Vec<VertexSet>,
    /// `H_x` for each point `x` of the poset.
    pub points: Vec<VertexSet>,
    pub poset: Arc<FinitePoset>,
}

pub fn is_hereditary(g: &DirectedGraph, h: VertexSet) -> bool {
    members(h).into_iter().all(|v| g.successors(v).all(|w| h >> w & 1 == 1))
}

pub fn is_saturated(g: &DirectedGraph, h: VertexSet) -> bool {
    (0..g.len()).all(|v| h >> v & 1 == 1 || g.is_sink(v) || g.successors(v).any(|w| h >> w & 1 == 0))
}

/// Smallest hereditary saturated set containing `s`.
pub fn closure(g: &DirectedGraph, s: VertexSet) -> VertexSet {
    let mut h = s;
    let mut stack = members(s);
    while let Some(v) = stack.pop() {
        for w in g.successors(v) {
            if h >> w & 1 == 0 {
                h |= 1 << w;
                stack.push(w);
            }
        }
    }
    loop {
        let add = (0..g.len()).find(|&v| h >> v & 1 == 0 && !g.is_sink(v) && g.successors(v).all(|w| h >> w & 1 == 1));
        match add {
            Some(v) => h |= 1 << v,
            None => return h,
        }
    }
}

fn label(g: &DirectedGraph, h: VertexSet) -> String {
    let names: Vec<&str> = members(h).into_iter().map(|v| g.labels()[v].as_str()).collect();
    format!("{{{}}}", names.join(","))
}

/// The lattice of hereditary saturated sets and the poset of its
/// join-irreducible elements.
pub fn hereditary_saturated(g: &DirectedGraph) -> Result<IdealPoset> {
    if g.len() > 64 {
        return Err(Error::UnsupportedShape("graphs with more than 64 vertices".into()));
    }
    if g.is_empty() {
        return Err(Error::Precondition("graph has no vertices".into()));
    }
    let report = admissible(g);
    if let Some(reason) = report.failure(g) {
        return Err(Error::Precondition(reason));
    }
    let gens: BTreeSet<VertexSet> = (0..g.len()).map(|v| closure(g, 1 << v)).collect();
    let mut all: BTreeSet<VertexSet> = BTreeSet::from([0]);
    let mut frontier: Vec<VertexSet> = vec![0];
    while let Some(s) = frontier.pop() {
        for &t in &gens {
            let j = closure(g, s | t);
            if all.insert(j) {
                frontier.push(j);
            }
        }
    }
    let mut sets: Vec<VertexSet> = all.into_iter().collect();
    sets.sort_by_key(|&s| (s.count_ones(), s));
    let points: Vec<VertexSet> = sets
        .iter()
        .copied()
        .filter(|&h| {
            let below = sets.iter().filter(|&&k| k != h && k & h == k).fold(0, |acc, &k| acc | k);
            h != 0 && closure(g, below) != h
        })
        .collect();
    let n = points.len();
    let leq: Vec<Vec<bool>> = (0..n)
        .map(|x| (0..n).map(|y| points[y] & points[x] == points[y]).collect())
        .collect();
    let labels = points.iter().map(|&h| label(g, h)).collect();
    let poset = Arc::new(FinitePoset::from_leq(labels, leq)?);
    Ok(IdealPoset { sets, points, poset })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(adj: &[&[u32]]) -> DirectedGraph {
        DirectedGraph::from_adjacency(&adj.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn small_lattices() {
        let one = hereditary_saturated(&g(&[&[3]])).unwrap();
        assert_eq!(one.sets, vec![0, 1]);
        assert_eq!(one.poset.len(), 1);

        let two = hereditary_saturated(&g(&[&[2, 1], &[0, 2]])).unwrap();
        assert_eq!(two.sets.len(), 3);
        assert_eq!(two.poset.len(), 2);
        assert_eq!(two.poset.arrows().len(), 1);
        // H = {w} is the smaller set, so its point is the larger one.
        let top = two.points.iter().position(|&h| h == 0b10).unwrap();
        assert_eq!(two.poset.arrows()[0].0, top);

        let disjoint = g(&[&[2]]).disjoint_union(&g(&[&[2]]));
        let d = hereditary_saturated(&disjoint).unwrap();
        assert_eq!(d.sets.len(), 4);
        assert_eq!(d.poset.len(), 2);
        assert!(d.poset.arrows().is_empty());
    }

    #[test]
    fn saturation_adds_transit_vertices() {
        // u feeds both loops and is added by saturation.
        let gr = g(&[&[0, 1, 1], &[0, 2, 0], &[0, 0, 2]]);
        let ip = hereditary_saturated(&gr).unwrap();
        assert_eq!(ip.sets, vec![0, 0b010, 0b100, 0b111]);
        assert_eq!(ip.points, vec![0b010, 0b100]);
        for &h in &ip.sets {
            assert!(is_hereditary(&gr, h) && is_saturated(&gr, h));
        }
    }

    #[test]
    fn inadmissible_graphs_are_rejected() {
        assert!(matches!(hereditary_saturated(&g(&[&[1]])), Err(Error::Precondition(_))));
    }
}
