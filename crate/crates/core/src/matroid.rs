//! Matroids presented through independence oracles.
//!
//! A [`MatroidHandle`] pairs a concrete matroid ([`MatroidKind`]) with a
//! stack of derived views: truncation, restriction, contraction and query
//! counting. Views compose from the outside in: a query first passes the
//! most recently added view, each contraction adds its contracted set to the
//! query, each truncation rejects oversized sets, and the base kind answers
//! what is left.
//!
//! Ground elements are vertex indices of the graph the matroid lives on.
//! Ground sets are kept in ascending order, which is also the canonical scan
//! order for every greedy routine here.

use std::fmt::{self, Debug};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{Field, FieldMatrix, PrimeField};
use crate::GfMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("element {0} is not in the ground set")]
    NotInGround(usize),
    #[error("cannot contract a dependent set")]
    ContractDependent,
    #[error("partition blocks must cover every element exactly once (element {0})")]
    BadPartition(usize),
    #[error("linear representation has {cols} columns for {universe} elements")]
    BadRepresentation { cols: usize, universe: usize },
    #[error("transversal edge to right vertex {0} out of range")]
    BadTransversal(usize),
    #[error("exhaustive check needs a ground set of at most {max} elements, got {got}")]
    TooLarge { got: usize, max: usize },
    #[error("{0}")]
    Unsupported(String),
}

/// A black-box independence oracle over elements `0..universe()`.
///
/// Implementations must be re-entrant. Sets are passed sorted and
/// duplicate-free.
pub trait IndependenceOracle: Send + Sync {
    fn universe(&self) -> usize;
    fn is_independent(&self, set: &[usize]) -> bool;

    /// A textual construction tag that lets the oracle be rebuilt from a file.
    fn construction_tag(&self) -> Option<String> {
        None
    }
}

/// Oracle backed by a closure.
pub struct FnOracle<F> {
    universe: usize,
    test: F,
}

impl<F> FnOracle<F>
where
    F: Fn(&[usize]) -> bool + Send + Sync,
{
    pub fn new(universe: usize, test: F) -> Self {
        Self { universe, test }
    }
}

impl<F> IndependenceOracle for FnOracle<F>
where
    F: Fn(&[usize]) -> bool + Send + Sync,
{
    fn universe(&self) -> usize {
        self.universe
    }

    fn is_independent(&self, set: &[usize]) -> bool {
        (self.test)(set)
    }
}

/// Bipartite graph whose left side is the ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartite {
    pub right: usize,
    /// Right neighbours of each left vertex, ascending.
    pub adj: Vec<Vec<usize>>,
}

impl Bipartite {
    pub fn new(left: usize, right: usize, edges: &[(usize, usize)]) -> Result<Self, MatroidError> {
        let mut adj = vec![Vec::new(); left];
        for &(u, w) in edges {
            if u >= left {
                return Err(MatroidError::NotInGround(u));
            }
            if w >= right {
                return Err(MatroidError::BadTransversal(w));
            }
            adj[u].push(w);
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
            a.dedup();
        }
        Ok(Self { right, adj })
    }

    pub fn left(&self) -> usize {
        self.adj.len()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj.iter().enumerate().flat_map(|(u, ws)| ws.iter().map(move |&w| (u, w))).collect()
    }

    /// Whether some matching saturates every vertex of `set`, by repeated
    /// augmenting-path search.
    pub fn saturates(&self, set: &[usize]) -> bool {
        if set.len() > self.right {
            return false;
        }
        let mut owner = vec![usize::MAX; self.right];
        for &u in set {
            let mut visited = vec![false; self.right];
            if !self.augment(u, &mut owner, &mut visited) {
                return false;
            }
        }
        true
    }

    fn augment(&self, u: usize, owner: &mut [usize], visited: &mut [bool]) -> bool {
        for &w in &self.adj[u] {
            if visited[w] {
                continue;
            }
            visited[w] = true;
            if owner[w] == usize::MAX || self.augment(owner[w], owner, visited) {
                owner[w] = u;
                return true;
            }
        }
        false
    }
}

/// The concrete matroids.
pub enum MatroidKind {
    /// Every set of size at most `rank` is independent.
    Uniform { universe: usize, rank: usize },
    /// At most one element from each block.
    Partition { block_of: Vec<usize>, blocks: Vec<Vec<usize>> },
    /// Column matroid; column `j` is element `j`.
    Linear(GfMatrix),
    /// Matchable subsets of the left side.
    Transversal(Bipartite),
    /// Hidden-set constructions and caller-supplied oracles.
    Oracle(Arc<dyn IndependenceOracle>),
}

impl Debug for MatroidKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatroidKind::Uniform { universe, rank } => write!(f, "Uniform({universe}, {rank})"),
            MatroidKind::Partition { blocks, .. } => write!(f, "Partition({blocks:?})"),
            MatroidKind::Linear(m) => write!(f, "Linear({}x{})", m.rows(), m.cols()),
            MatroidKind::Transversal(h) => write!(f, "Transversal({}+{})", h.left(), h.right),
            MatroidKind::Oracle(o) => match o.construction_tag() {
                Some(tag) => write!(f, "Oracle({tag})"),
                None => write!(f, "Oracle({})", o.universe()),
            },
        }
    }
}

impl MatroidKind {
    pub fn universe(&self) -> usize {
        match self {
            MatroidKind::Uniform { universe, .. } => *universe,
            MatroidKind::Partition { block_of, .. } => block_of.len(),
            MatroidKind::Linear(m) => m.cols(),
            MatroidKind::Transversal(h) => h.left(),
            MatroidKind::Oracle(o) => o.universe(),
        }
    }

    fn is_independent(&self, set: &[usize]) -> bool {
        match self {
            MatroidKind::Uniform { rank, .. } => set.len() <= *rank,
            MatroidKind::Partition { block_of, blocks } => {
                let mut used = vec![false; blocks.len()];
                set.iter().all(|&v| !std::mem::replace(&mut used[block_of[v]], true))
            }
            MatroidKind::Linear(m) => {
                set.len() <= m.rows() && m.select_columns(set).rank() == set.len()
            }
            MatroidKind::Transversal(h) => h.saturates(set),
            MatroidKind::Oracle(o) => o.is_independent(set),
        }
    }
}

/// Number of independence queries that passed through a counting view.
#[derive(Debug, Default)]
pub struct QueryCounter {
    calls: AtomicU64,
}

impl QueryCounter {
    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    fn bump(&self) {
        self.calls.fetch_add(1, Ordering::Relaxed);
    }
}

#[derive(Debug, Clone)]
pub enum View {
    Truncate(usize),
    Restrict(Arc<Vec<usize>>),
    Contract(Vec<usize>),
    Counting(Arc<QueryCounter>),
}

#[derive(Debug, Clone)]
pub struct MatroidHandle {
    kind: Arc<MatroidKind>,
    views: Vec<View>,
    ground: Arc<Vec<usize>>,
}

fn normalize(set: &[usize]) -> Vec<usize> {
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

fn union_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl MatroidHandle {
    pub fn from_kind(kind: MatroidKind) -> Self {
        let ground = (0..kind.universe()).collect();
        Self { kind: Arc::new(kind), views: Vec::new(), ground: Arc::new(ground) }
    }

    pub fn uniform(universe: usize, rank: usize) -> Self {
        Self::from_kind(MatroidKind::Uniform { universe, rank })
    }

    /// Partition matroid; the blocks must partition `0..universe`.
    pub fn partition(universe: usize, blocks: Vec<Vec<usize>>) -> Result<Self, MatroidError> {
        let mut block_of = vec![usize::MAX; universe];
        let mut blocks: Vec<Vec<usize>> =
            blocks.into_iter().map(|b| normalize(&b)).filter(|b| !b.is_empty()).collect();
        blocks.sort();
        for (i, block) in blocks.iter().enumerate() {
            for &v in block {
                if v >= universe || block_of[v] != usize::MAX {
                    return Err(MatroidError::BadPartition(v));
                }
                block_of[v] = i;
            }
        }
        if let Some(v) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(MatroidError::BadPartition(v));
        }
        Ok(Self::from_kind(MatroidKind::Partition { block_of, blocks }))
    }

    pub fn linear(matrix: GfMatrix) -> Self {
        Self::from_kind(MatroidKind::Linear(matrix))
    }

    pub fn transversal(h: Bipartite) -> Self {
        Self::from_kind(MatroidKind::Transversal(h))
    }

    pub fn oracle(oracle: Arc<dyn IndependenceOracle>) -> Self {
        Self::from_kind(MatroidKind::Oracle(oracle))
    }

    pub fn kind(&self) -> &MatroidKind {
        &self.kind
    }

    pub fn views(&self) -> &[View] {
        &self.views
    }

    pub fn ground(&self) -> &[usize] {
        &self.ground
    }

    pub fn in_ground(&self, v: usize) -> bool {
        self.ground.binary_search(&v).is_ok()
    }

    /// Smallest truncation bound in the view stack, if any.
    pub fn truncation(&self) -> Option<usize> {
        let mut bound: Option<usize> = None;
        let mut contracted = 0;
        // walk outside-in, converting inner bounds to the outer frame
        for view in self.views.iter().rev() {
            match view {
                View::Contract(c) => contracted += c.len(),
                View::Truncate(t) => {
                    let here = t.saturating_sub(contracted);
                    bound = Some(bound.map_or(here, |b| b.min(here)));
                }
                _ => {}
            }
        }
        bound
    }

    pub fn is_independent(&self, set: &[usize]) -> Result<bool, MatroidError> {
        let set = normalize(set);
        if let Some(&v) = set.iter().find(|&&v| !self.in_ground(v)) {
            return Err(MatroidError::NotInGround(v));
        }
        Ok(self.eval(set))
    }

    // `set` is sorted and inside the ground set
    fn eval(&self, mut set: Vec<usize>) -> bool {
        for view in self.views.iter().rev() {
            match view {
                View::Truncate(t) => {
                    if set.len() > *t {
                        return false;
                    }
                }
                View::Restrict(_) => {}
                View::Contract(c) => set = union_sorted(&set, c),
                View::Counting(counter) => counter.bump(),
            }
        }
        self.kind.is_independent(&set)
    }

    /// Maximum size of an independent subset, by a greedy scan in ascending order.
    pub fn rank_of(&self, set: &[usize]) -> Result<usize, MatroidError> {
        Ok(self.greedy_max_independent(&normalize(set))?.len())
    }

    pub fn rank(&self) -> usize {
        self.greedy_max_independent(&self.ground.clone()).expect("ground is in ground").len()
    }

    pub fn closure_of(&self, set: &[usize]) -> Result<Vec<usize>, MatroidError> {
        let base = self.greedy_max_independent(&normalize(set))?;
        let r = base.len();
        Ok(self
            .ground
            .iter()
            .copied()
            .filter(|&v| {
                if base.contains(&v) {
                    return true;
                }
                let mut t = base.clone();
                t.push(v);
                t.sort_unstable();
                // r(X + v) = r(X) iff B + v is dependent for a basis B of X
                !(t.len() == r + 1 && self.eval(t))
            })
            .collect())
    }

    /// Scans `candidates` in the given order, keeping each element that
    /// preserves independence. Issues exactly one query per candidate.
    pub fn greedy_max_independent(&self, candidates: &[usize]) -> Result<Vec<usize>, MatroidError> {
        if let Some(&v) = candidates.iter().find(|&&v| !self.in_ground(v)) {
            return Err(MatroidError::NotInGround(v));
        }
        let mut kept: Vec<usize> = Vec::new();
        for &v in candidates {
            if kept.contains(&v) {
                continue;
            }
            let trial = union_sorted(&kept, &[v]);
            if self.eval(trial.clone()) {
                kept = trial;
            }
        }
        Ok(kept)
    }

    pub fn truncate(&self, k: usize) -> Self {
        let mut out = self.clone();
        match out.views.last_mut() {
            Some(View::Truncate(t)) => *t = (*t).min(k),
            _ => out.views.push(View::Truncate(k)),
        }
        out
    }

    pub fn restrict(&self, set: &[usize]) -> Result<Self, MatroidError> {
        let set = normalize(set);
        if let Some(&v) = set.iter().find(|&&v| !self.in_ground(v)) {
            return Err(MatroidError::NotInGround(v));
        }
        let mut out = self.clone();
        let ground = Arc::new(set);
        out.ground = ground.clone();
        match out.views.last_mut() {
            Some(View::Restrict(r)) => *r = ground,
            _ => out.views.push(View::Restrict(ground)),
        }
        Ok(out)
    }

    /// Deletes `set` from the ground set.
    pub fn delete(&self, set: &[usize]) -> Result<Self, MatroidError> {
        let drop = normalize(set);
        let keep: Vec<usize> =
            self.ground.iter().copied().filter(|v| drop.binary_search(v).is_err()).collect();
        self.restrict(&keep)
    }

    /// `M / set`. Fails unless `set` is independent.
    pub fn contract(&self, set: &[usize]) -> Result<Self, MatroidError> {
        let set = normalize(set);
        if !self.is_independent(&set)? {
            return Err(MatroidError::ContractDependent);
        }
        let mut out = self.clone();
        out.ground =
            Arc::new(self.ground.iter().copied().filter(|v| set.binary_search(v).is_err()).collect());
        match out.views.last_mut() {
            Some(View::Contract(c)) => *c = union_sorted(c, &set),
            _ => out.views.push(View::Contract(set)),
        }
        Ok(out)
    }

    /// Wraps the handle in a counting view and returns the counter.
    pub fn counting(&self) -> (Self, Arc<QueryCounter>) {
        let counter = Arc::new(QueryCounter::default());
        let mut out = self.clone();
        out.views.push(View::Counting(counter.clone()));
        (out, counter)
    }

    /// The underlying linear representation, if the kind is linear and no
    /// contraction is stacked on it.
    pub fn linear_representation(&self) -> Option<&GfMatrix> {
        match &*self.kind {
            MatroidKind::Linear(m) if !self.views.iter().any(|v| matches!(v, View::Contract(_))) => Some(m),
            _ => None,
        }
    }

    /// Contraction of a linear matroid as an explicit smaller representation.
    ///
    /// Row-reduces so the columns of `set` become distinct unit vectors, then
    /// drops the rows of their leading ones. Only restriction and truncation
    /// views may sit on the linear kind.
    pub fn contract_materialized(&self, set: &[usize]) -> Result<Self, MatroidError> {
        let MatroidKind::Linear(a) = &*self.kind else {
            return Err(MatroidError::Unsupported("materialized contraction needs a linear kind".into()));
        };
        if self.views.iter().any(|v| matches!(v, View::Contract(_) | View::Counting(_))) {
            return Err(MatroidError::Unsupported("materialized contraction under contract/counting views".into()));
        }
        let set = normalize(set);
        if !self.is_independent(&set)? {
            return Err(MatroidError::ContractDependent);
        }
        let f = *a.field();
        let mut m = a.clone();
        let mut used = vec![false; m.rows()];
        for &x in &set {
            let r = (0..m.rows()).find(|&r| !used[r] && m.get(r, x) != &0).expect("independent column has a pivot");
            used[r] = true;
            let inv = f.inv(m.get(r, x)).expect("nonzero");
            for j in 0..m.cols() {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for r2 in 0..m.rows() {
                if r2 == r || m.get(r2, x) == &0 {
                    continue;
                }
                let factor = *m.get(r2, x);
                for j in 0..m.cols() {
                    let t = f.mul(&factor, m.get(r, j));
                    let v = f.sub(m.get(r2, j), &t);
                    m.set(r2, j, v);
                }
            }
        }
        let keep: Vec<usize> = (0..m.rows()).filter(|&r| !used[r]).collect();
        let quotient = m.select_rows(&keep);
        let ground: Vec<usize> = self.ground.iter().copied().filter(|v| set.binary_search(v).is_err()).collect();
        let mut out = Self::linear(quotient).restrict(&ground)?;
        if let Some(t) = self.truncation() {
            out = out.truncate(t.saturating_sub(set.len()));
        }
        Ok(out)
    }
}

/// Edmonds-style random representation of a transversal matroid: entry
/// `(w, u)` is a random nonzero field element when `uw` is an edge, else zero.
pub fn transversal_to_linear(h: &Bipartite, field: PrimeField, seed: u64) -> GfMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = FieldMatrix::zeros(field, h.right, h.left());
    for (u, ws) in h.adj.iter().enumerate() {
        for &w in ws {
            m.set(w, u, rng.gen_range(1..field.modulus()));
        }
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    EmptySet,
    Hereditary,
    Exchange,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomReport {
    Pass,
    /// For `Hereditary`: `smaller ⊆ larger`, `larger` independent, `smaller` not.
    /// For `Exchange`: both independent, `|smaller| < |larger|`, no element of
    /// `larger \ smaller` extends `smaller`.
    Violation { axiom: Axiom, smaller: Vec<usize>, larger: Vec<usize> },
}

#[derive(Debug, Clone, Copy)]
pub enum AxiomMode {
    Exhaustive,
    Sampled { budget: usize, seed: u64 },
}

pub const EXHAUSTIVE_LIMIT: usize = 20;

/// Checks the independence axioms on the handle's ground set.
pub fn axiom_check(m: &MatroidHandle, mode: AxiomMode) -> Result<AxiomReport, MatroidError> {
    if !m.eval(Vec::new()) {
        return Ok(AxiomReport::Violation { axiom: Axiom::EmptySet, smaller: vec![], larger: vec![] });
    }
    match mode {
        AxiomMode::Exhaustive => exhaustive_axioms(m),
        AxiomMode::Sampled { budget, seed } => Ok(sampled_axioms(m, budget, seed)),
    }
}

fn exhaustive_axioms(m: &MatroidHandle) -> Result<AxiomReport, MatroidError> {
    let ground = m.ground().to_vec();
    let n = ground.len();
    if n > EXHAUSTIVE_LIMIT {
        return Err(MatroidError::TooLarge { got: n, max: EXHAUSTIVE_LIMIT });
    }
    let to_set = |mask: usize| -> Vec<usize> { (0..n).filter(|b| mask >> b & 1 == 1).map(|b| ground[b]).collect() };
    let indep: Vec<bool> = (0..1usize << n).map(|mask| m.eval(to_set(mask))).collect();
    for mask in 0..1usize << n {
        if !indep[mask] {
            continue;
        }
        for b in 0..n {
            if mask >> b & 1 == 1 && !indep[mask & !(1 << b)] {
                return Ok(AxiomReport::Violation {
                    axiom: Axiom::Hereditary,
                    smaller: to_set(mask & !(1 << b)),
                    larger: to_set(mask),
                });
            }
        }
    }
    // with heredity in place, exchange between consecutive sizes suffices
    let mut by_size: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for mask in 0..1usize << n {
        if indep[mask] {
            by_size[mask.count_ones() as usize].push(mask);
        }
    }
    for s in 0..n {
        for &x in &by_size[s] {
            let mut ext = 0usize;
            for b in 0..n {
                if x >> b & 1 == 0 && indep[x | 1 << b] {
                    ext |= 1 << b;
                }
            }
            for &y in &by_size[s + 1] {
                if y & !x & ext == 0 {
                    return Ok(AxiomReport::Violation {
                        axiom: Axiom::Exchange,
                        smaller: to_set(x),
                        larger: to_set(y),
                    });
                }
            }
        }
    }
    Ok(AxiomReport::Pass)
}

fn sampled_axioms(m: &MatroidHandle, budget: usize, seed: u64) -> AxiomReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ground = m.ground().to_vec();
    let random_independent = |rng: &mut ChaCha8Rng| -> Vec<usize> {
        let mut order = ground.clone();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let cap = rng.gen_range(0..=order.len());
        let mut kept = Vec::new();
        for v in order {
            if kept.len() == cap {
                break;
            }
            let trial = union_sorted(&kept, &[v]);
            if m.eval(trial.clone()) {
                kept = trial;
            }
        }
        kept
    };
    for _ in 0..budget {
        let x = random_independent(&mut rng);
        let y = random_independent(&mut rng);
        for set in [&x, &y] {
            let sub: Vec<usize> = set.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            if !m.eval(sub.clone()) {
                return AxiomReport::Violation { axiom: Axiom::Hereditary, smaller: sub, larger: set.clone() };
            }
        }
        let (small, large) = if x.len() < y.len() { (x, y) } else { (y, x) };
        if small.len() < large.len() {
            let ok = large
                .iter()
                .filter(|v| small.binary_search(v).is_err())
                .any(|&v| m.eval(union_sorted(&small, &[v])));
            if !ok {
                return AxiomReport::Violation { axiom: Axiom::Exchange, smaller: small, larger: large };
            }
        }
    }
    AxiomReport::Pass
}
