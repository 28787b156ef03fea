//! Comparing `XKδ` invariants: poset isomorphism, then pointwise groups,
//! then module isomorphisms of `XK₀` and `XK₁`, then compatibility of the
//! obstruction classes. Graph isomorphisms contribute induced witnesses
//! ahead of the bounded search.

use std::sync::Arc;

use serde::Serialize;

use crate::abelian::iso_groups;
use crate::error::Result;
use crate::graph::ideals::members;
use crate::graph::invariant::XkInvariant;
use crate::matrix::{Int, IntMatrix};
use crate::poset::{
    ext2_compatible, rep_isomorphisms, yoneda_class_with, class_resolution, Ext2Class, FinitePoset, RepBounds,
    RepMorphism, TwoExtension,
};
use crate::snf::LatticeSolver;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Layer {
    Poset,
    PointGroups,
    Module,
    Class,
    Unit,
}

/// An isomorphism of invariants from `E₁` to `E₂`: the poset map and module
/// maps from the transported modules of `E₁` to those of `E₂`.
#[derive(Clone, Debug)]
pub struct GraphWitness {
    pub poset_map: Vec<usize>,
    pub xk0: RepMorphism,
    pub xk1: RepMorphism,
    /// The vertex bijection inducing the witness, when there is one.
    pub graph_map: Option<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub enum GraphVerdict {
    Yes(Box<GraphWitness>),
    No { layer: Layer, reason: String },
    Unknown { layer: Layer, reason: String },
}

impl GraphVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, GraphVerdict::Yes(_))
    }
}

/// `E₁`'s sequence moved onto `E₂`'s poset along `σ`.
struct Transported {
    ext: TwoExtension,
    delta: Ext2Class,
    /// `XK₀(U_{σx}) → K₀(E₁)`, indexed by points of the target poset.
    to_k0: Vec<IntMatrix>,
}

fn transport(a: &XkInvariant, perm: &[usize], target: &Arc<FinitePoset>) -> Result<Transported> {
    let e = &a.extension;
    let ext = TwoExtension {
        d2: e.d2.transport(perm, target.clone())?,
        d1: e.d1.transport(perm, target.clone())?,
        eps: e.eps.transport(perm, target.clone())?,
    };
    let res = class_resolution(ext.m0(), None)?;
    let delta = yoneda_class_with(&ext, &res)?;
    let mut to_k0 = vec![IntMatrix::zeros(0, 0); perm.len()];
    for (x, f) in a.to_k0.iter().enumerate() {
        to_k0[perm[x]] = f.matrix().clone();
    }
    Ok(Transported { ext, delta, to_k0 })
}

/// The module maps induced by a vertex bijection `π` carrying `E₁` to `E₂`,
/// over the transported sequence.
fn induced_witness(
    b: &XkInvariant,
    t: &Transported,
    pi: &[usize],
) -> Result<(RepMorphism, RepMorphism)> {
    let bp = b.poset();
    let mut q = Vec::with_capacity(bp.len());
    for x in 0..bp.len() {
        let hx = members(b.ideals.points[x]);
        // The transported point sits on π⁻¹(H_x) in E₁.
        let src: Vec<usize> = {
            let mut s: Vec<usize> = hx.iter().map(|&w| pi.iter().position(|&p| p == w).expect("bijection")).collect();
            s.sort_unstable();
            s
        };
        let mut m = IntMatrix::zeros(hx.len(), src.len());
        for (j, &v) in src.iter().enumerate() {
            let i = hx.iter().position(|&w| w == pi[v]).expect("image in H_x");
            m.set(i, j, Int::from(1));
        }
        q.push(m);
    }
    let qa = t.ext.d1.source().clone();
    let qb = b.extension.d1.source().clone();
    let phi = RepMorphism::new(qa, qb, q)?;
    let f0 = RepMorphism::new(
        t.ext.m0().clone(),
        b.xk0().clone(),
        phi.components().iter().map(|c| c.matrix().clone()).collect(),
    )?;
    let f1 = b.extension.d2.lift(&phi.compose(&t.ext.d2)?)?;
    Ok((f0, f1))
}

/// Does `f₀` carry the unit of `E₁` to the unit of `E₂`?
fn preserves_unit(a: &XkInvariant, b: &XkInvariant, t: &Transported, f0: &RepMorphism) -> Result<bool> {
    // A preimage of the unit in ⊕ₓ XK₀(U_x), then its image in K₀(E₂).
    let cols: Vec<IntMatrix> = t.to_k0.clone();
    let sum = IntMatrix::hconcat(a.k0.generators(), &cols).hstack(a.k0.relations());
    let Some(pre) = LatticeSolver::new(&sum).solve(&a.unit) else {
        return Ok(false);
    };
    let mut image = vec![Int::from(0); b.k0.generators()];
    let mut off = 0;
    for x in 0..b.poset().len() {
        let n = t.ext.m0().group(x).generators();
        let part = &pre[off..off + n];
        let y = b.to_k0[x].matrix().mul_vec(&f0.component(x).matrix().mul_vec(part));
        for (acc, v) in image.iter_mut().zip(y) {
            *acc += v;
        }
        off += n;
    }
    Ok(b.k0.elements_equal(&image, &b.unit))
}

struct Search {
    verdict: Option<GraphVerdict>,
    deepest: Layer,
    reason: String,
    incomplete: bool,
}

impl Search {
    fn fail(&mut self, layer: Layer, reason: String, complete: bool) {
        if !complete {
            self.incomplete = true;
        }
        if layer >= self.deepest {
            self.deepest = layer;
            self.reason = reason;
        }
    }
}

fn search(a: &XkInvariant, b: &XkInvariant, bounds: &RepBounds, want_unit: bool) -> Result<GraphVerdict> {
    let (pa, pb) = (a.poset(), b.poset());
    let sigmas = pa.isomorphisms(pb);
    if sigmas.is_empty() {
        return Ok(GraphVerdict::No {
            layer: Layer::Poset,
            reason: format!("primitive ideal spaces differ ({} vs {} points)", pa.len(), pb.len()),
        });
    }
    let graph_maps = a.graph.isomorphisms(&b.graph, 64);
    let mut s = Search {
        verdict: None,
        deepest: Layer::PointGroups,
        reason: String::new(),
        incomplete: false,
    };
    for sigma in &sigmas {
        let t = transport(a, sigma, pb)?;
        let bad_point = (0..pb.len()).find(|&x| {
            !iso_groups(t.ext.m0().group(x), b.xk0().group(x)).is_iso()
                || !iso_groups(t.ext.m1().group(x), b.xk1().group(x)).is_iso()
        });
        if let Some(x) = bad_point {
            s.fail(
                Layer::PointGroups,
                format!("K-groups differ at point {}", pb.labels()[x]),
                true,
            );
            continue;
        }
        // Induced candidates first.
        let mut pairs: Vec<(RepMorphism, RepMorphism, Option<Vec<usize>>)> = Vec::new();
        for pi in &graph_maps {
            let sends = a.ideals.points.iter().enumerate().all(|(x, &h)| {
                let img = members(h).iter().fold(0u64, |acc, &v| acc | 1 << pi[v]);
                b.ideals.points[sigma[x]] == img
            });
            if sends {
                let (f0, f1) = induced_witness(b, &t, pi)?;
                pairs.push((f0, f1, Some(pi.clone())));
            }
        }
        let (f0s, c0) = rep_isomorphisms(t.ext.m0(), b.xk0(), bounds)?;
        let (f1s, c1) = rep_isomorphisms(t.ext.m1(), b.xk1(), bounds)?;
        if pairs.is_empty() && (f0s.is_empty() || f1s.is_empty()) {
            let which = if f0s.is_empty() { "XK0" } else { "XK1" };
            let complete = if f0s.is_empty() { c0 } else { c1 };
            s.fail(Layer::Module, format!("no module isomorphism of {which} found"), complete);
            continue;
        }
        let mut budget = bounds.budget;
        'outer: for f0 in f0s.iter() {
            for f1 in f1s.iter() {
                if budget == 0 {
                    s.incomplete = true;
                    break 'outer;
                }
                budget -= 1;
                pairs.push((f0.clone(), f1.clone(), None));
            }
        }
        let mut class_ok = false;
        let mut unit_ok = false;
        for (f0, f1, pi) in pairs {
            if !ext2_compatible(&f0, &t.delta, &b.delta, &f1)? {
                continue;
            }
            class_ok = true;
            if want_unit && !preserves_unit(a, b, &t, &f0)? {
                continue;
            }
            unit_ok = true;
            s.verdict = Some(GraphVerdict::Yes(Box::new(GraphWitness {
                poset_map: sigma.clone(),
                xk0: f0,
                xk1: f1,
                graph_map: pi,
            })));
            break;
        }
        if s.verdict.is_some() {
            break;
        }
        let complete = c0 && c1;
        if !class_ok {
            s.fail(Layer::Class, "no module isomorphism is compatible with the obstruction classes".into(), complete);
        } else if !unit_ok {
            s.fail(Layer::Unit, "no compatible isomorphism preserves the unit class".into(), complete);
        }
    }
    if let Some(v) = s.verdict {
        return Ok(v);
    }
    Ok(if s.incomplete {
        GraphVerdict::Unknown {
            layer: s.deepest,
            reason: format!("search bounds exhausted; {}", s.reason),
        }
    } else {
        GraphVerdict::No {
            layer: s.deepest,
            reason: s.reason,
        }
    })
}

/// Whether the invariants of two admissible graphs are isomorphic.
pub fn compare_graph_invariants(a: &XkInvariant, b: &XkInvariant, bounds: &RepBounds) -> Result<GraphVerdict> {
    search(a, b, bounds, false)
}

/// As [`compare_graph_invariants`], also requiring the unit classes to
/// correspond.
pub fn unit_compare(a: &XkInvariant, b: &XkInvariant, bounds: &RepBounds) -> Result<GraphVerdict> {
    search(a, b, bounds, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::graph::DirectedGraph;
    use crate::graph::invariant::xk_invariant;

    fn inv(adj: &[&[u32]]) -> XkInvariant {
        let g = DirectedGraph::from_adjacency(&adj.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap();
        xk_invariant(&g).unwrap()
    }

    #[test]
    fn cuntz_examples() {
        let b = RepBounds::default();
        let o2 = inv(&[&[2]]);
        assert!(compare_graph_invariants(&o2, &o2, &b).unwrap().is_yes());
        assert!(compare_graph_invariants(&o2, &inv(&[&[1, 1], &[1, 1]]), &b).unwrap().is_yes());
        match compare_graph_invariants(&o2, &inv(&[&[3]]), &b).unwrap() {
            GraphVerdict::No { layer, .. } => assert_eq!(layer, Layer::PointGroups),
            other => panic!("{other:?}"),
        }
        let o5 = inv(&[&[5]]);
        assert!(unit_compare(&o5, &o5, &b).unwrap().is_yes());
    }

    #[test]
    fn units_distinguish_equal_modules() {
        let b = RepBounds::default();
        let x = inv(&[&[2, 1], &[1, 2]]);
        let y = inv(&[&[2, 2], &[1, 3]]);
        assert!(compare_graph_invariants(&x, &y, &b).unwrap().is_yes());
        assert!(matches!(unit_compare(&x, &y, &b).unwrap(), GraphVerdict::Unknown { layer: Layer::Unit, .. }));
    }

    #[test]
    fn relabelling_gives_the_induced_witness() {
        let a = inv(&[&[2, 1, 0], &[0, 2, 1], &[0, 0, 3]]);
        let g = a.graph.relabel(&[1, 2, 0]);
        let b = xk_invariant(&g).unwrap();
        match unit_compare(&a, &b, &RepBounds::default()).unwrap() {
            GraphVerdict::Yes(w) => assert_eq!(w.graph_map, Some(vec![1, 2, 0])),
            other => panic!("{other:?}"),
        }
    }
}
