//! Decision procedures: exhaustive search, the bounded search tree for
//! degenerate graphs, and the representative-family dynamic program for
//! chordal graphs with linear matroids.

use std::collections::{HashMap, HashSet};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{FieldMatrix, PrimeField};
use crate::framework::Instance;
use crate::graph::{chordality, clique_tree, degeneracy_ordering, make_nice, NiceNode, NiceTreeDecomposition};
use crate::matroid::{transversal_to_linear, MatroidHandle, MatroidKind, View};
use crate::repsets::representative_family;
use crate::GfMatrix;

/// Default vertex limit for [`solve_brute`].
pub const BRUTE_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("brute force refuses {n} vertices (limit {limit})")]
    TooLarge { n: usize, limit: usize },
    #[error("graph is not chordal")]
    NotChordal,
    #[error("matroid has no linear representation: {0}")]
    NotLinear(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Yes(Vec<usize>),
    No,
}

impl Answer {
    pub fn is_yes(&self) -> bool {
        matches!(self, Answer::Yes(_))
    }

    pub fn certificate(&self) -> Option<&[usize]> {
        match self {
            Answer::Yes(c) => Some(c),
            Answer::No => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Independence queries (oracle queries, or rank tests in the DP).
    pub queries: u64,
    /// Search-tree nodes, or decomposition nodes per DP run.
    pub nodes: u64,
    pub max_table: usize,
    /// Sets lost to unlucky random projections in the DP.
    pub dropped: u64,
    pub runs: u32,
    pub millis: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub answer: Answer,
    pub stats: SolveStats,
}

/// Tries every stable `k`-set in lexicographic order and returns the first
/// independent one. Only stable `k`-sets reach the oracle.
pub fn solve_brute(inst: &Instance, limit: usize) -> Result<SolveResult, SolveError> {
    let start = Instant::now();
    let g = inst.graph();
    let n = g.order();
    if n > limit {
        return Err(SolveError::TooLarge { n, limit });
    }
    let (m, counter) = inst.matroid().counting();
    let verts: Vec<usize> = g.vertices().collect();
    let mut chosen = Vec::with_capacity(inst.k);
    let mut nodes = 0;
    let found = brute_rec(inst, &m, &verts, 0, &mut chosen, &mut nodes);
    let answer = if found { Answer::Yes(chosen) } else { Answer::No };
    Ok(SolveResult {
        answer,
        stats: SolveStats {
            queries: counter.calls(),
            nodes,
            runs: 1,
            millis: start.elapsed().as_millis(),
            ..Default::default()
        },
    })
}

fn brute_rec(
    inst: &Instance,
    m: &MatroidHandle,
    verts: &[usize],
    from: usize,
    chosen: &mut Vec<usize>,
    nodes: &mut u64,
) -> bool {
    *nodes += 1;
    if chosen.len() == inst.k {
        return m.is_independent(chosen).expect("vertices are in the ground set");
    }
    let need = inst.k - chosen.len();
    for i in from..verts.len() {
        if verts.len() - i < need {
            break;
        }
        let v = verts[i];
        if chosen.iter().any(|&u| inst.graph().has_edge(u, v)) {
            continue;
        }
        chosen.push(v);
        if brute_rec(inst, m, verts, i + 1, chosen, nodes) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Bounded search tree over a degeneracy ordering.
///
/// Drops vertices whose singleton is dependent, then branches on the closed
/// neighbourhood of the first surviving vertex `u` in the ordering: picking
/// `v` deletes `N[v]`, contracts `v`, and lowers the target by one. At most
/// `d + 1` branches, depth at most `k`.
pub fn solve_branching(inst: &Instance) -> SolveResult {
    let start = Instant::now();
    let g = inst.graph();
    let order = degeneracy_ordering(g).order;
    let (m, counter) = inst.matroid().counting();
    let mut alive = vec![false; g.universe()];
    for v in g.vertices() {
        alive[v] = true;
    }
    let mut nodes = 0;
    let found = branch(inst, &order, alive, &m, inst.k, &mut nodes);
    let answer = match found {
        Some(mut s) => {
            s.sort_unstable();
            Answer::Yes(s)
        }
        None => Answer::No,
    };
    SolveResult {
        answer,
        stats: SolveStats {
            queries: counter.calls(),
            nodes,
            runs: 1,
            millis: start.elapsed().as_millis(),
            ..Default::default()
        },
    }
}

fn branch(
    inst: &Instance,
    order: &[usize],
    mut alive: Vec<bool>,
    m: &MatroidHandle,
    k: usize,
    nodes: &mut u64,
) -> Option<Vec<usize>> {
    *nodes += 1;
    if k == 0 {
        return Some(Vec::new());
    }
    let g = inst.graph();
    let mut first = None;
    for &v in order {
        if !alive[v] {
            continue;
        }
        if !m.is_independent(&[v]).expect("alive vertices are in the ground set") {
            alive[v] = false;
        } else if first.is_none() {
            first = Some(v);
        }
    }
    let u = first?;
    let mut choices = vec![u];
    choices.extend(g.neighbors(u).iter().copied().filter(|&w| alive[w]));
    for v in choices {
        let mut next = alive.clone();
        next[v] = false;
        for &w in g.neighbors(v) {
            next[w] = false;
        }
        let contracted = m.contract(&[v]).expect("singleton checked independent");
        if let Some(mut s) = branch(inst, order, next, &contracted, k - 1, nodes) {
            s.push(v);
            return Some(s);
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpConfig {
    pub seed: u64,
    pub repeats: u32,
}

impl Default for DpConfig {
    fn default() -> Self {
        Self { seed: 0, repeats: 3 }
    }
}

enum Representation {
    Fixed(GfMatrix),
    // re-randomized on every run
    Transversal(crate::matroid::Bipartite),
}

fn linear_source(m: &MatroidHandle) -> Result<Representation, SolveError> {
    if m.views().iter().any(|v| matches!(v, View::Contract(_))) {
        return Err(SolveError::NotLinear("contracted matroid".into()));
    }
    let field = PrimeField::default();
    match m.kind() {
        MatroidKind::Linear(a) => Ok(Representation::Fixed(a.clone())),
        MatroidKind::Transversal(h) => Ok(Representation::Transversal(h.clone())),
        MatroidKind::Partition { block_of, blocks } => {
            // unit vector per block
            let mut a = FieldMatrix::zeros(field, blocks.len(), block_of.len());
            for (v, &b) in block_of.iter().enumerate() {
                a.set(b, v, 1);
            }
            Ok(Representation::Fixed(a))
        }
        MatroidKind::Uniform { universe, rank } => {
            // Vandermonde columns (1, x, x^2, ...) with distinct x
            let mut a = FieldMatrix::zeros(field, *rank, *universe);
            for v in 0..*universe {
                for r in 0..*rank {
                    a.set(r, v, field.pow(v as u64 + 1, r as u64));
                }
            }
            Ok(Representation::Fixed(a))
        }
        MatroidKind::Oracle(_) => Err(SolveError::NotLinear("oracle-only matroid".into())),
    }
}

/// Whether the DP can run on this instance.
pub fn dp_applicable(inst: &Instance) -> bool {
    matches!(inst.matroid().kind(), MatroidKind::Linear(_) | MatroidKind::Transversal(_))
        && !inst.matroid().views().iter().any(|v| matches!(v, View::Contract(_)))
        && chordality(inst.graph()).is_some()
}

/// Representative-family dynamic program over a nice clique-tree
/// decomposition. One-sided Monte Carlo: a YES always carries a verified
/// certificate, a NO may be wrong with small probability. Runs up to
/// `repeats` times with fresh randomness before answering NO.
pub fn solve_chordal_dp(inst: &Instance, config: DpConfig) -> Result<SolveResult, SolveError> {
    let start = Instant::now();
    let mut stats = SolveStats::default();
    let k = inst.k;
    if k == 0 {
        stats.millis = start.elapsed().as_millis();
        return Ok(SolveResult { answer: Answer::Yes(vec![]), stats });
    }
    let g = inst.graph();
    let source = linear_source(inst.matroid())?;
    let td = clique_tree(g).map_err(|_| SolveError::NotChordal)?;
    let nice = make_nice(&td);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut budget = config.repeats.max(1);
    let mut extra = config.repeats.max(1);
    while budget > 0 {
        budget -= 1;
        let a = match &source {
            Representation::Fixed(a) => a.clone(),
            Representation::Transversal(h) => transversal_to_linear(h, PrimeField::default(), rng.gen()),
        };
        let mut run = DpRun { a: &a, k, rng: ChaCha8Rng::seed_from_u64(rng.gen()), stats: &mut stats };
        let found = run.evaluate(&nice, inst);
        stats.runs += 1;
        stats.nodes = nice.len() as u64;
        if let Some(cert) = found {
            debug_assert!(crate::verify_solution(&inst.framework, &cert, k).unwrap_or(false));
            stats.millis = start.elapsed().as_millis();
            return Ok(SolveResult { answer: Answer::Yes(cert), stats });
        }
        if budget == 0 && stats.dropped > 0 && extra > 0 {
            extra -= 1;
            budget += 1;
        }
    }
    stats.millis = start.elapsed().as_millis();
    Ok(SolveResult { answer: Answer::No, stats })
}

type Key = (Option<usize>, usize);
type Table = HashMap<Key, Vec<Vec<usize>>>;

struct DpRun<'a> {
    a: &'a GfMatrix,
    k: usize,
    rng: ChaCha8Rng,
    stats: &'a mut SolveStats,
}

impl DpRun<'_> {
    fn independent(&mut self, set: &[usize]) -> bool {
        self.stats.queries += 1;
        set.len() <= self.k && set.len() <= self.a.rows() && self.a.select_columns(set).rank() == set.len()
    }

    fn compress(&mut self, family: Vec<Vec<usize>>, p: usize) -> Vec<Vec<usize>> {
        if family.is_empty() {
            return family;
        }
        let rep = representative_family(self.a, &family, p, self.k - p, self.rng.gen())
            .expect("p-family of valid columns");
        self.stats.dropped += rep.dropped as u64;
        self.stats.max_table = self.stats.max_table.max(rep.len());
        rep.sets
    }

    fn evaluate(&mut self, nice: &NiceTreeDecomposition, inst: &Instance) -> Option<Vec<usize>> {
        let k = self.k;
        let mut tables: Vec<Option<Table>> = vec![None; nice.len()];
        for t in 0..nice.len() {
            let table = match nice.kinds[t] {
                NiceNode::Leaf => HashMap::from([((None, 0), vec![vec![]])]),
                NiceNode::Introduce(v) => {
                    let mut table = tables[nice.children[t][0]].take().expect("child computed");
                    for p in 1..=k {
                        let mut family = Vec::new();
                        for s in table.get(&(None, p - 1)).into_iter().flatten() {
                            debug_assert!(s.iter().all(|&x| !inst.graph().has_edge(x, v)));
                            let mut cand = s.clone();
                            let pos = cand.binary_search(&v).unwrap_err();
                            cand.insert(pos, v);
                            if self.independent(&cand) {
                                family.push(cand);
                            }
                        }
                        let family = self.compress(family, p);
                        if !family.is_empty() {
                            table.insert((Some(v), p), family);
                        }
                    }
                    table
                }
                NiceNode::Forget(v) => {
                    let mut child = tables[nice.children[t][0]].take().expect("child computed");
                    let mut table = Table::new();
                    for p in 0..=k {
                        let mut family = child.remove(&(None, p)).unwrap_or_default();
                        family.extend(child.remove(&(Some(v), p)).unwrap_or_default());
                        let family = self.compress(family, p);
                        if !family.is_empty() {
                            table.insert((None, p), family);
                        }
                    }
                    for ((w, p), family) in child {
                        if w.is_some() && w != Some(v) {
                            table.insert((w, p), family);
                        }
                    }
                    table
                }
                NiceNode::Join => {
                    let left = tables[nice.children[t][0]].take().expect("child computed");
                    let right = tables[nice.children[t][1]].take().expect("child computed");
                    let mut table = Table::new();
                    let ws = std::iter::once(None).chain(nice.bags[t].iter().map(|&u| Some(u)));
                    for w in ws {
                        let wsize = usize::from(w.is_some());
                        for p in wsize..=k {
                            let mut family = Vec::new();
                            let mut seen = HashSet::new();
                            for h in wsize..=p {
                                let (Some(l), Some(r)) = (left.get(&(w, h)), right.get(&(w, p - h + wsize))) else {
                                    continue;
                                };
                                for s in l {
                                    for s2 in r {
                                        let mut u: Vec<usize> = s.iter().chain(s2).copied().collect();
                                        u.sort_unstable();
                                        u.dedup();
                                        debug_assert_eq!(u.len(), p);
                                        if seen.contains(&u) {
                                            continue;
                                        }
                                        seen.insert(u.clone());
                                        if self.independent(&u) {
                                            family.push(u);
                                        }
                                    }
                                }
                            }
                            let family = self.compress(family, p);
                            if !family.is_empty() {
                                table.insert((w, p), family);
                            }
                        }
                    }
                    table
                }
            };
            tables[t] = Some(table);
        }
        let root = tables[nice.root()].take().expect("root computed");
        root.get(&(None, k)).and_then(|f| f.first().cloned())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Auto,
    Brute,
    Branch,
    ChordalDp,
}

/// Dispatches to one of the solvers. `Auto` uses the DP when the graph is
/// chordal and the matroid linear or transversal, else the search tree.
pub fn solve(inst: &Instance, algo: Algo, config: DpConfig) -> Result<SolveResult, SolveError> {
    match algo {
        Algo::Brute => solve_brute(inst, BRUTE_LIMIT),
        Algo::Branch => Ok(solve_branching(inst)),
        Algo::ChordalDp => solve_chordal_dp(inst, config),
        Algo::Auto if dp_applicable(inst) => solve_chordal_dp(inst, config),
        Algo::Auto => Ok(solve_branching(inst)),
    }
}
