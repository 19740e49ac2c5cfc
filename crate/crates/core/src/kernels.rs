//! Kernelization: the bounded-degree kernel and the degeneracy kernel built
//! from the earlier-common-neighbour reduction rule.
//!
//! Both kernels only ever delete vertices, so every output is an induced
//! subframework of its input, except for the two canonical trivial
//! instances ([`Instance::trivial_yes`], [`Instance::trivial_no`]).

use std::collections::BTreeMap;

use itertools::Itertools;
use thiserror::Error;

use crate::framework::{Framework, Instance};
use crate::graph::{degeneracy_ordering, EliminationOrder, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("supplied degeneracy {supplied} is below the graph's degeneracy {actual}")]
    DegeneracyTooSmall { supplied: usize, actual: usize },
}

/// One application of the reduction rule that deleted something.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleApplication {
    pub h: usize,
    pub set: Vec<usize>,
    pub deleted: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Trivial {
    Yes,
    No,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelReport {
    pub input_size: usize,
    pub output_size: usize,
    pub rule_applications: Vec<RuleApplication>,
    pub bound_claimed: usize,
    /// Maximum degree after the reduction rules (degeneracy kernel only).
    pub degree_after_rules: Option<usize>,
    /// Degree bound the reduction rules guarantee (degeneracy kernel only).
    pub degree_bound: Option<usize>,
    pub trivial: Option<Trivial>,
}

fn pow_sat(base: usize, exp: usize) -> usize {
    (0..exp).fold(1usize, |acc, _| acc.saturating_mul(base))
}

/// `k^2 * delta`.
pub fn degree_kernel_bound(k: usize, delta: usize) -> usize {
    k.saturating_mul(k).saturating_mul(delta)
}

/// `d * k^(2d+3)`.
pub fn degeneracy_kernel_bound(k: usize, d: usize) -> usize {
    d.saturating_mul(pow_sat(k, 2 * d + 3))
}

/// `d * k^(2d+1)`.
pub fn rule_degree_bound(k: usize, d: usize) -> usize {
    d.saturating_mul(pow_sat(k, 2 * d + 1))
}

fn trivial(input: usize, bound: usize, answer: Trivial) -> (Instance, KernelReport) {
    let inst = match answer {
        Trivial::Yes => Instance::trivial_yes(),
        Trivial::No => Instance::trivial_no(),
    };
    let report = KernelReport {
        input_size: input,
        output_size: 0,
        rule_applications: vec![],
        bound_claimed: bound,
        degree_after_rules: None,
        degree_bound: None,
        trivial: Some(answer),
    };
    (inst, report)
}

/// Keeps the union of `k * max_degree` disjoint greedy bases, taken in
/// ascending vertex order. The output has at most `k^2 * max_degree` vertices.
pub fn kernel_bounded_degree(inst: &Instance) -> (Instance, KernelReport) {
    let g = inst.graph();
    let m = inst.matroid();
    let k = inst.k;
    let n = g.order();
    let delta = g.max_degree();
    let bound = degree_kernel_bound(k, delta);
    if m.rank() < k {
        return trivial(n, bound, Trivial::No);
    }
    if k == 0 || delta == 0 {
        return trivial(n, bound, Trivial::Yes);
    }
    let mut remaining: Vec<usize> = g.vertices().collect();
    let mut kept = Vec::new();
    for _ in 0..k * delta {
        let w = m.greedy_max_independent(&remaining).expect("vertices are in the ground set");
        if w.is_empty() {
            break;
        }
        remaining.retain(|v| w.binary_search(v).is_err());
        kept.extend(w);
    }
    kept.sort_unstable();
    let out = Instance { framework: inst.framework.induced(&kept), k };
    let report = KernelReport {
        input_size: n,
        output_size: out.graph().order(),
        rule_applications: vec![],
        bound_claimed: bound,
        degree_after_rules: None,
        degree_bound: None,
        trivial: None,
    };
    (out, report)
}

fn later_neighbors<'a>(g: &'a Graph, pos: &'a [usize], w: usize) -> impl Iterator<Item = usize> + 'a {
    g.neighbors(w).iter().copied().filter(move |&u| pos[u] > pos[w])
}

/// Common neighbours of all of `set` that precede every member of `set` in
/// `order`.
pub fn common_earlier_neighbors(g: &Graph, order: &EliminationOrder, set: &[usize]) -> Vec<usize> {
    let pos = order.positions(g.universe());
    common_earlier_with(g, &pos, set)
}

fn common_earlier_with(g: &Graph, pos: &[usize], set: &[usize]) -> Vec<usize> {
    let Some(&first) = set.first() else {
        return Vec::new();
    };
    let earliest = set.iter().map(|&x| pos[x]).min().unwrap_or(0);
    g.neighbors(first)
        .iter()
        .copied()
        .filter(|&w| pos[w] < earliest && set.iter().all(|&x| g.has_edge(x, w)))
        .collect()
}

/// Every `i`-set `X` with nonempty `F(X)`, mapped to `F(X)` (ascending).
///
/// `w` lies in `F(X)` exactly when `X` is a subset of the neighbours of `w`
/// placed after it, so the map is built from each vertex's later neighbours.
pub fn earlier_neighbor_sets(g: &Graph, order: &EliminationOrder, i: usize) -> BTreeMap<Vec<usize>, Vec<usize>> {
    let pos = order.positions(g.universe());
    let mut map: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    if i == 0 {
        return map;
    }
    for w in g.vertices() {
        let later: Vec<usize> = later_neighbors(g, &pos, w).collect();
        for x in later.into_iter().combinations(i) {
            map.entry(x).or_default().push(w);
        }
    }
    for f in map.values_mut() {
        f.sort_unstable();
    }
    map
}

/// `max |F(X)|` over all `i`-sets `X`.
pub fn f_value(g: &Graph, order: &EliminationOrder, i: usize) -> usize {
    earlier_neighbor_sets(g, order, i).values().map(Vec::len).max().unwrap_or(0)
}

/// One pass of the reduction rule for sets of size `h`.
///
/// Sets are visited in lexicographic order over the current vertex set;
/// `F(X)` only shrinks under deletion, so it is read off the pass-start map
/// and intersected with the surviving vertices.
pub fn reduction_rule_1(
    inst: &Instance,
    order: &EliminationOrder,
    d: usize,
    h: usize,
) -> (Instance, Vec<RuleApplication>) {
    let g = inst.graph();
    let m = inst.matroid();
    let k = inst.k;
    let order = order.induced(g);
    let d_h = d + f_value(g, &order, h + 1);
    let ell = k * d_h;
    let mut alive = vec![false; g.universe()];
    for v in g.vertices() {
        alive[v] = true;
    }
    let mut applications = Vec::new();
    let mut deleted_all = Vec::new();
    for (x, f) in earlier_neighbor_sets(g, &order, h) {
        if x.iter().any(|&v| !alive[v]) {
            continue;
        }
        let mut pool: Vec<usize> = f.into_iter().filter(|&v| alive[v]).collect();
        for _ in 0..ell {
            let w = m.greedy_max_independent(&pool).expect("in ground");
            if w.is_empty() {
                break;
            }
            pool.retain(|v| w.binary_search(v).is_err());
        }
        // whatever no greedy basis picked up is deleted
        if !pool.is_empty() {
            for &v in &pool {
                alive[v] = false;
            }
            applications.push(RuleApplication { h, set: x, deleted: pool.len() });
            deleted_all.extend(pool);
        }
    }
    let framework: Framework = inst.framework.remove_vertices(&deleted_all);
    (Instance { framework, k }, applications)
}

/// Reduction rule for `h = d, ..., 1` on the induced elimination ordering,
/// followed by the bounded-degree kernel. Output has at most `d * k^(2d+3)`
/// vertices.
pub fn kernel_degeneracy(inst: &Instance, d: Option<usize>) -> Result<(Instance, KernelReport), KernelError> {
    let g = inst.graph();
    let k = inst.k;
    let n = g.order();
    let order = degeneracy_ordering(g);
    let d = match d {
        Some(s) if s < order.degeneracy => {
            return Err(KernelError::DegeneracyTooSmall { supplied: s, actual: order.degeneracy })
        }
        Some(s) => s,
        None => order.degeneracy,
    };
    let bound = degeneracy_kernel_bound(k, d);
    if inst.matroid().rank() < k {
        return Ok(trivial(n, bound, Trivial::No));
    }
    if g.edge_count() == 0 || k <= 1 {
        return Ok(trivial(n, bound, Trivial::Yes));
    }
    let mut cur = inst.clone();
    let mut applications = Vec::new();
    for h in (1..=d).rev() {
        let (next, apps) = reduction_rule_1(&cur, &order, d, h);
        cur = next;
        applications.extend(apps);
    }
    let degree_after = cur.graph().max_degree();
    let degree_bound = rule_degree_bound(k, d);
    debug_assert!(degree_after <= degree_bound, "{degree_after} > {degree_bound}");
    let (out, inner) = kernel_bounded_degree(&cur);
    let report = KernelReport {
        input_size: n,
        output_size: out.graph().order(),
        rule_applications: applications,
        bound_claimed: bound,
        degree_after_rules: Some(degree_after),
        degree_bound: Some(degree_bound),
        trivial: inner.trivial,
    };
    Ok((out, report))
}
