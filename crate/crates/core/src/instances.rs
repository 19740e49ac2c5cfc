//! Instance files, reductions from related problems, the hidden-set
//! constructions, cross-composition generators and random instances.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{Field, FieldMatrix, PrimeField};
use crate::framework::{Framework, FrameworkError, Instance};
use crate::graph::{chordality, families, Graph, GraphError};
use crate::matroid::{Bipartite, IndependenceOracle, MatroidError, MatroidHandle, MatroidKind, View};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Framework(#[from] FrameworkError),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("cannot serialize: {0}")]
    NotSerializable(String),
}

fn perr(line: usize, msg: impl Into<String>) -> InstanceError {
    InstanceError::Parse { line, msg: msg.into() }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self { inner: text.lines().enumerate(), last: 0 }
    }

    /// Next non-blank line with comments stripped, split into tokens.
    fn next(&mut self) -> Result<(usize, Vec<&'a str>), InstanceError> {
        for (i, raw) in self.inner.by_ref() {
            self.last = i + 1;
            let body = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = body.split_whitespace().collect();
            if !tokens.is_empty() {
                return Ok((i + 1, tokens));
            }
        }
        Err(perr(self.last + 1, "unexpected end of input"))
    }

    fn expect(&mut self, keyword: &str, args: usize) -> Result<(usize, Vec<&'a str>), InstanceError> {
        let (line, tokens) = self.next()?;
        if tokens[0] != keyword {
            return Err(perr(line, format!("expected `{keyword}`, found `{}`", tokens[0])));
        }
        if tokens.len() != args + 1 {
            return Err(perr(line, format!("`{keyword}` takes {args} arguments")));
        }
        Ok((line, tokens))
    }
}

fn num<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T, InstanceError> {
    tok.parse().map_err(|_| perr(line, format!("bad number `{tok}`")))
}

/// 1-based vertex id to 0-based, checked against `n`.
fn vertex(line: usize, tok: &str, n: usize) -> Result<usize, InstanceError> {
    let v: usize = num(line, tok)?;
    if v == 0 || v > n {
        return Err(perr(line, format!("vertex {v} out of range 1..={n}")));
    }
    Ok(v - 1)
}

/// Parses the text format. The matroid is truncated to `k`.
pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    let mut lines = Lines::new(text);
    let (line, t) = lines.expect("iss", 1)?;
    if t[1] != "1" {
        return Err(perr(line, format!("unsupported version {}", t[1])));
    }
    let (line, t) = lines.expect("graph", 2)?;
    let n: usize = num(line, t[1])?;
    let m: usize = num(line, t[2])?;
    let mut g = Graph::new(n);
    for _ in 0..m {
        let (line, t) = lines.expect("e", 2)?;
        let (u, v) = (vertex(line, t[1], n)?, vertex(line, t[2], n)?);
        g.add_edge(u, v).map_err(|e| perr(line, e.to_string()))?;
    }
    let (line, t) = lines.expect("k", 1)?;
    let k: usize = num(line, t[1])?;
    let (line, t) = lines.next()?;
    if t[0] != "matroid" || t.len() < 2 {
        return Err(perr(line, "expected `matroid <kind> ...`"));
    }
    let arity = |want: usize| if t.len() == want { Ok(()) } else { Err(perr(line, format!("`matroid {}` takes {} arguments", t[1], want - 2))) };
    let matroid = match t[1] {
        "uniform" => {
            arity(3)?;
            MatroidHandle::uniform(n, num(line, t[2])?)
        }
        "partition" => {
            arity(3)?;
            let ell: usize = num(line, t[2])?;
            let mut blocks = Vec::with_capacity(ell);
            for _ in 0..ell {
                let (line, b) = lines.next()?;
                if b[0] != "block" || b.len() < 2 {
                    return Err(perr(line, "expected `block <size> <v...>`"));
                }
                let size: usize = num(line, b[1])?;
                if b.len() != size + 2 {
                    return Err(perr(line, format!("block declares {size} vertices, lists {}", b.len() - 2)));
                }
                blocks.push(b[2..].iter().map(|tok| vertex(line, tok, n)).collect::<Result<Vec<_>, _>>()?);
            }
            MatroidHandle::partition(n, blocks).map_err(|e| match e {
                MatroidError::BadPartition(v) => perr(line, format!("blocks do not partition the vertices (vertex {})", v + 1)),
                e => perr(line, e.to_string()),
            })?
        }
        "linear" => {
            arity(4)?;
            let prime: u64 = num(line, t[2])?;
            let field = PrimeField::new(prime).map_err(|e| perr(line, e.to_string()))?;
            let r: usize = num(line, t[3])?;
            let mut a = FieldMatrix::zeros(field, r, n);
            // rows of an empty matrix are blank lines, which the reader skips
            for i in 0..if n == 0 { 0 } else { r } {
                let (line, row) = lines.next()?;
                if row.len() != n {
                    return Err(perr(line, format!("matrix row has {} entries, expected {n}", row.len())));
                }
                for (j, tok) in row.iter().enumerate() {
                    let x: i64 = num(line, tok)?;
                    a.set(i, j, field.reduce(x));
                }
            }
            MatroidHandle::linear(a)
        }
        "transversal" => {
            arity(4)?;
            let w: usize = num(line, t[2])?;
            let medges: usize = num(line, t[3])?;
            let mut edges = Vec::with_capacity(medges);
            for _ in 0..medges {
                let (line, e) = lines.expect("m", 2)?;
                let u = vertex(line, e[1], n)?;
                let wj: usize = num(line, e[2])?;
                if wj == 0 || wj > w {
                    return Err(perr(line, format!("right vertex {wj} out of range 1..={w}")));
                }
                edges.push((u, wj - 1));
            }
            MatroidHandle::transversal(Bipartite::new(n, w, &edges)?)
        }
        "oracle" => {
            let oracle = HiddenSetOracle::from_tag(&t[2..]).map_err(|msg| perr(line, msg))?;
            if oracle.universe() != n {
                return Err(perr(line, format!("construction has {} vertices, graph has {n}", oracle.universe())));
            }
            MatroidHandle::oracle(Arc::new(oracle))
        }
        other => return Err(perr(line, format!("unknown matroid kind `{other}`"))),
    };
    if let Ok((line, _)) = lines.next() {
        return Err(perr(line, "trailing content"));
    }
    Ok(Instance::new(Framework::new(g, matroid)?, k))
}

/// Canonical text form. Present vertices are renumbered `1..=n` in order.
pub fn serialize_instance(inst: &Instance) -> Result<String, InstanceError> {
    let g = inst.graph();
    let mut m = inst.matroid().clone();
    if let Some(View::Contract(c)) = m.views().iter().find(|v| matches!(v, View::Contract(_))) {
        let c = c.clone();
        m = m.contract_materialized(&c).map_err(|_| InstanceError::NotSerializable("contracted non-linear matroid".into()))?;
    }
    let ground: Vec<usize> = g.vertices().collect();
    let mut id = vec![usize::MAX; g.universe()];
    for (i, &v) in ground.iter().enumerate() {
        id[v] = i + 1;
    }
    let n = ground.len();
    let mut out = String::new();
    let edges = g.edges();
    writeln!(out, "iss 1").unwrap();
    writeln!(out, "graph {n} {}", edges.len()).unwrap();
    for (u, v) in edges {
        writeln!(out, "e {} {}", id[u], id[v]).unwrap();
    }
    writeln!(out, "k {}", inst.k).unwrap();
    let cap = m.truncation().unwrap_or(usize::MAX);
    match m.kind() {
        MatroidKind::Uniform { rank, .. } => writeln!(out, "matroid uniform {}", (*rank).min(cap)).unwrap(),
        MatroidKind::Partition { blocks, .. } => {
            let blocks: Vec<Vec<usize>> = blocks
                .iter()
                .map(|b| b.iter().filter(|&&v| v < id.len() && id[v] != usize::MAX).map(|&v| id[v]).collect::<Vec<_>>())
                .filter(|b| !b.is_empty())
                .collect();
            writeln!(out, "matroid partition {}", blocks.len()).unwrap();
            for b in blocks {
                writeln!(out, "block {} {}", b.len(), b.iter().join(" ")).unwrap();
            }
        }
        MatroidKind::Linear(a) => {
            let a = a.select_columns(&ground);
            writeln!(out, "matroid linear {} {}", a.field().modulus(), a.rows()).unwrap();
            for r in 0..a.rows() {
                writeln!(out, "{}", a.row(r).iter().join(" ")).unwrap();
            }
        }
        MatroidKind::Transversal(h) => {
            let edges: Vec<(usize, usize)> = ground.iter().flat_map(|&u| h.adj[u].iter().map(move |&w| (u, w))).collect();
            writeln!(out, "matroid transversal {} {}", h.right, edges.len()).unwrap();
            for (u, w) in edges {
                writeln!(out, "m {} {}", id[u], w + 1).unwrap();
            }
        }
        MatroidKind::Oracle(o) => {
            let tag = o.construction_tag().ok_or_else(|| InstanceError::NotSerializable("oracle without a construction tag".into()))?;
            if n != o.universe() {
                return Err(InstanceError::NotSerializable("restricted construction oracle".into()));
            }
            writeln!(out, "matroid oracle {tag}").unwrap();
        }
    }
    Ok(out)
}

/// Graph with a colouring of its vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RainbowInstance {
    pub graph: Graph,
    pub classes: Vec<Vec<usize>>,
}

impl RainbowInstance {
    /// Checks that the classes are disjoint and cover the present vertices.
    pub fn new(graph: Graph, classes: Vec<Vec<usize>>) -> Result<Self, InstanceError> {
        let mut seen = vec![false; graph.universe()];
        for &v in classes.iter().flatten() {
            if !graph.contains(v) || seen[v] {
                return Err(InstanceError::Inconsistent(format!("vertex {v} missing from graph or in two classes")));
            }
            seen[v] = true;
        }
        if let Some(v) = graph.vertices().find(|&v| !seen[v]) {
            return Err(InstanceError::Inconsistent(format!("vertex {v} has no class")));
        }
        Ok(Self { graph, classes })
    }

    /// Present vertices, in order.
    fn compact(&self) -> (Vec<usize>, Vec<usize>) {
        let verts: Vec<usize> = self.graph.vertices().collect();
        let mut id = vec![usize::MAX; self.graph.universe()];
        for (i, &v) in verts.iter().enumerate() {
            id[v] = i;
        }
        (verts, id)
    }
}

/// Partition matroid over the colour classes, `k` = number of classes.
pub fn from_rainbow(r: &RainbowInstance) -> Result<Instance, InstanceError> {
    let n = r.graph.universe();
    let present: HashSet<usize> = r.graph.vertices().collect();
    let mut blocks = r.classes.clone();
    // absent vertices get singleton blocks so the partition covers 0..n
    blocks.extend((0..n).filter(|v| !present.contains(v)).map(|v| vec![v]));
    let m = MatroidHandle::partition(n, blocks)?;
    Ok(Instance::new(Framework::new(r.graph.clone(), m)?, r.classes.len()))
}

/// Rainbow matching as a stable-set problem on the line graph. `colors[i]`
/// colours the `i`-th edge of `g.edges()`.
pub fn from_rainbow_matching(g: &Graph, colors: &[usize], k: usize) -> Result<Instance, InstanceError> {
    let edges = g.edges();
    if colors.len() != edges.len() {
        return Err(InstanceError::Inconsistent(format!("{} colours for {} edges", colors.len(), edges.len())));
    }
    let mut line = Graph::new(edges.len());
    for (i, j) in (0..edges.len()).tuple_combinations() {
        let (a, b) = (edges[i], edges[j]);
        if a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1 {
            line.add_edge(i, j)?;
        }
    }
    let blocks: Vec<Vec<usize>> =
        colors.iter().enumerate().into_group_map_by(|&(_, &c)| c).into_values().map(|es| es.into_iter().map(|(i, _)| i).collect()).collect();
    let m = MatroidHandle::partition(edges.len(), blocks)?;
    Ok(Instance::new(Framework::new(line, m)?, k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Path(usize),
    Grid(usize, usize),
}

/// Bipartite matching with separation: the left side of `h` sits on a path
/// or grid, and the matroid is the transversal matroid of `h`.
pub fn from_bms(h: Bipartite, topology: Topology, k: usize) -> Result<Instance, InstanceError> {
    let g = match topology {
        Topology::Path(n) => families::path(n),
        Topology::Grid(a, b) => families::grid(a, b),
    };
    if g.universe() != h.left() {
        return Err(InstanceError::Inconsistent(format!("topology has {} vertices, left side {}", g.universe(), h.left())));
    }
    Ok(Instance::new(Framework::new(g, MatroidHandle::transversal(h))?, k))
}

/// Which hidden-set construction an oracle belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    Gpq,
    HpqBipartite,
    HpqChordal,
}

impl Construction {
    pub fn name(self) -> &'static str {
        match self {
            Construction::Gpq => "gpq",
            Construction::HpqBipartite => "hpq-bipartite",
            Construction::HpqChordal => "hpq-chordal",
        }
    }

    fn stride(self, q: usize) -> usize {
        match self {
            Construction::Gpq => 2 * q,
            _ => 3 * q,
        }
    }
}

enum Mode {
    Fixed(Vec<usize>),
    Adaptive(Mutex<Adversary>),
}

struct Adversary {
    eliminated: HashSet<Vec<usize>>,
    total: u128,
    transcript: Vec<(Vec<usize>, bool)>,
}

/// Independence oracle of a hidden-set matroid `M_W`.
///
/// Vertex layout, 0-based block `i` and index `j`: `a(i,j) = i*s + j`,
/// `b(i,j) = i*s + q + j`, and for the `H` constructions `c(i,j) = i*s + 2q + j`,
/// where the stride `s` is `2q` or `3q`. `W` is stored as 0-based indices.
///
/// In adaptive mode the hidden set is not fixed: a query on a canonical
/// `k`-set rules that candidate out and answers no while another candidate
/// survives. Queries are serialized, so share one adaptive oracle with one
/// solver at a time.
pub struct HiddenSetOracle {
    construction: Construction,
    p: usize,
    q: usize,
    mode: Mode,
    calls: AtomicU64,
}

enum Shape {
    Cheating,
    Canonical(Vec<usize>),
}

impl HiddenSetOracle {
    /// Fixed hidden set from 1-based indices `j_1..j_p`.
    pub fn fixed(construction: Construction, p: usize, q: usize, hidden: &[usize]) -> Self {
        assert!(p >= 1 && q >= 1, "p and q must be positive");
        assert_eq!(hidden.len(), p, "one hidden index per block");
        assert!(hidden.iter().all(|&j| (1..=q).contains(&j)), "hidden indices lie in 1..=q");
        let w = hidden.iter().map(|j| j - 1).collect();
        Self { construction, p, q, mode: Mode::Fixed(w), calls: AtomicU64::new(0) }
    }

    pub fn adaptive(construction: Construction, p: usize, q: usize) -> Self {
        assert!(p >= 1 && q >= 1, "p and q must be positive");
        let total = (q as u128).checked_pow(p as u32).unwrap_or(u128::MAX);
        let adv = Adversary { eliminated: HashSet::new(), total, transcript: Vec::new() };
        Self { construction, p, q, mode: Mode::Adaptive(Mutex::new(adv)), calls: AtomicU64::new(0) }
    }

    fn from_tag(tokens: &[&str]) -> Result<Self, String> {
        let construction = match tokens.first() {
            Some(&"gpq") => Construction::Gpq,
            Some(&"hpq-bipartite") => Construction::HpqBipartite,
            Some(&"hpq-chordal") => Construction::HpqChordal,
            _ => return Err("expected `oracle gpq|hpq-bipartite|hpq-chordal <p> <q> <j...>`".into()),
        };
        let nums: Vec<usize> = tokens[1..].iter().map(|t| t.parse().map_err(|_| format!("bad number `{t}`"))).collect::<Result<_, _>>()?;
        if nums.len() < 2 {
            return Err("missing p and q".into());
        }
        let (p, q) = (nums[0], nums[1]);
        if p == 0 || q == 0 || nums.len() != p + 2 || nums[2..].iter().any(|&j| j == 0 || j > q) {
            return Err("need p, q >= 1 and p hidden indices in 1..=q".into());
        }
        Ok(Self::fixed(construction, p, q, &nums[2..]))
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    /// Target size of the construction: `2p` for `G`, `3p` for `H`.
    pub fn k(&self) -> usize {
        match self.construction {
            Construction::Gpq => 2 * self.p,
            _ => 3 * self.p,
        }
    }

    pub fn a(&self, i: usize, j: usize) -> usize {
        i * self.construction.stride(self.q) + j
    }

    pub fn b(&self, i: usize, j: usize) -> usize {
        self.a(i, j) + self.q
    }

    pub fn c(&self, i: usize, j: usize) -> usize {
        self.a(i, j) + 2 * self.q
    }

    /// Number of queries answered so far.
    pub fn queries(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    /// Candidate hidden sets not yet ruled out (always `q^p` when fixed).
    pub fn live_candidates(&self) -> u128 {
        match &self.mode {
            Mode::Fixed(_) => 1,
            Mode::Adaptive(m) => {
                let adv = m.lock().unwrap();
                adv.total - adv.eliminated.len() as u128
            }
        }
    }

    /// The hidden indices (1-based). In adaptive mode, the least surviving
    /// candidate, which is consistent with every answer so far.
    pub fn hidden(&self) -> Vec<usize> {
        match &self.mode {
            Mode::Fixed(w) => w.iter().map(|j| j + 1).collect(),
            Mode::Adaptive(m) => {
                let adv = m.lock().unwrap();
                (0..self.p)
                    .map(|_| 0..self.q)
                    .multi_cartesian_product()
                    .find(|t| !adv.eliminated.contains(t))
                    .expect("at least one candidate survives")
                    .into_iter()
                    .map(|j| j + 1)
                    .collect()
            }
        }
    }

    /// Every query with its answer, in order (adaptive mode only).
    pub fn transcript(&self) -> Vec<(Vec<usize>, bool)> {
        match &self.mode {
            Mode::Fixed(_) => Vec::new(),
            Mode::Adaptive(m) => m.lock().unwrap().transcript.clone(),
        }
    }

    /// The hidden vertex set `W` for 1-based indices.
    pub fn hidden_set(&self, hidden: &[usize]) -> Vec<usize> {
        let mut w: Vec<usize> = hidden.iter().enumerate().flat_map(|(i, &j)| [self.a(i, j - 1), self.b(i, j - 1)]).collect();
        w.sort_unstable();
        w
    }

    /// Splits `v` into (block, part, index); part 0, 1, 2 is A, B, C.
    fn locate(&self, v: usize) -> (usize, usize, usize) {
        let s = self.construction.stride(self.q);
        let off = v % s;
        (v / s, off / self.q, off % self.q)
    }

    /// Shape of a `2p`-subset of `R`: cheating, or one matched pair per block.
    fn shape(&self, r_part: &[usize]) -> Shape {
        let mut a = vec![Vec::new(); self.p];
        let mut b = vec![Vec::new(); self.p];
        for &v in r_part {
            let (i, part, j) = self.locate(v);
            if part == 0 { a[i].push(j) } else { b[i].push(j) }
        }
        let mut tuple = Vec::with_capacity(self.p);
        for i in 0..self.p {
            if a[i].len() >= 2 || b[i].len() >= 2 {
                return Shape::Cheating;
            }
            if let (Some(&h), Some(&j)) = (a[i].first(), b[i].first()) {
                if h != j {
                    return Shape::Cheating;
                }
            }
            // |X ∩ R| = 2p without cheating forces a matched pair per block
            match (a[i].first(), b[i].first()) {
                (Some(&j), Some(_)) => tuple.push(j),
                _ => return Shape::Cheating,
            }
        }
        Shape::Canonical(tuple)
    }

    fn decide(&self, tuple: Vec<usize>, set: &[usize]) -> bool {
        match &self.mode {
            Mode::Fixed(w) => &tuple == w,
            Mode::Adaptive(m) => {
                let mut adv = m.lock().unwrap();
                let answer = if adv.eliminated.contains(&tuple) {
                    false
                } else if adv.total - adv.eliminated.len() as u128 >= 2 {
                    adv.eliminated.insert(tuple);
                    false
                } else {
                    true
                };
                adv.transcript.push((set.to_vec(), answer));
                answer
            }
        }
    }

    fn record(&self, set: &[usize], answer: bool) -> bool {
        if let Mode::Adaptive(m) = &self.mode {
            m.lock().unwrap().transcript.push((set.to_vec(), answer));
        }
        answer
    }
}

impl IndependenceOracle for HiddenSetOracle {
    fn universe(&self) -> usize {
        self.p * self.construction.stride(self.q)
    }

    fn is_independent(&self, set: &[usize]) -> bool {
        self.calls.fetch_add(1, Ordering::Relaxed);
        let two_p = 2 * self.p;
        let r_part: Vec<usize> = match self.construction {
            Construction::Gpq => {
                if set.len() != two_p {
                    return self.record(set, set.len() < two_p);
                }
                set.to_vec()
            }
            _ => {
                let mut c_count = vec![0usize; self.p];
                let mut r = Vec::new();
                for &v in set {
                    let (i, part, _) = self.locate(v);
                    if part == 2 {
                        c_count[i] += 1;
                    } else {
                        r.push(v);
                    }
                }
                if c_count.iter().any(|&c| c >= 2) || r.len() > two_p {
                    return self.record(set, false);
                }
                if r.len() < two_p {
                    return self.record(set, true);
                }
                r
            }
        };
        match self.shape(&r_part) {
            Shape::Cheating => self.record(set, true),
            Shape::Canonical(t) => self.decide(t, set),
        }
    }

    fn construction_tag(&self) -> Option<String> {
        match &self.mode {
            Mode::Fixed(w) => Some(format!(
                "{} {} {} {}",
                self.construction.name(),
                self.p,
                self.q,
                w.iter().map(|j| j + 1).join(" ")
            )),
            Mode::Adaptive(_) => None,
        }
    }
}

fn gpq_graph(oracle: &HiddenSetOracle) -> Graph {
    let (p, q) = (oracle.p, oracle.q);
    let mut g = Graph::new(oracle.universe());
    for i in 0..p {
        for (h, j) in (0..q).tuple_combinations() {
            g.add_edge(oracle.a(i, h), oracle.a(i, j)).unwrap();
            g.add_edge(oracle.b(i, h), oracle.b(i, j)).unwrap();
        }
        for h in 0..q {
            for j in (0..q).filter(|&j| j != h) {
                g.add_edge(oracle.a(i, h), oracle.b(i, j)).unwrap();
            }
        }
    }
    g
}

fn hpq_graph(oracle: &HiddenSetOracle) -> Graph {
    let (p, q) = (oracle.p, oracle.q);
    let mut g = Graph::new(oracle.universe());
    for i in 0..p {
        for j in 0..q {
            for h in (0..q).filter(|&h| h != j) {
                g.add_edge(oracle.a(i, j), oracle.c(i, h)).unwrap();
                g.add_edge(oracle.b(i, j), oracle.c(i, h)).unwrap();
            }
        }
        if oracle.construction == Construction::HpqChordal {
            for (h, j) in (0..q).tuple_combinations() {
                g.add_edge(oracle.c(i, h), oracle.c(i, j)).unwrap();
            }
        }
    }
    g
}

fn with_oracle(oracle: Arc<HiddenSetOracle>) -> Framework {
    let g = match oracle.construction {
        Construction::Gpq => gpq_graph(&oracle),
        _ => hpq_graph(&oracle),
    };
    Framework::new(g, MatroidHandle::oracle(oracle)).expect("oracle covers the graph")
}

/// `G_{p,q}` with the fixed hidden set for 1-based indices `hidden`; `k = 2p`.
pub fn gen_gpq(p: usize, q: usize, hidden: &[usize]) -> (Framework, usize) {
    let oracle = HiddenSetOracle::fixed(Construction::Gpq, p, q, hidden);
    let k = oracle.k();
    (with_oracle(Arc::new(oracle)), k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HpqVariant {
    Bipartite,
    Chordal,
}

/// `H_{p,q}`, with each `C_i` a clique in the chordal variant; `k = 3p`.
pub fn gen_hpq(p: usize, q: usize, variant: HpqVariant, hidden: &[usize]) -> (Framework, usize) {
    let c = match variant {
        HpqVariant::Bipartite => Construction::HpqBipartite,
        HpqVariant::Chordal => Construction::HpqChordal,
    };
    let oracle = HiddenSetOracle::fixed(c, p, q, hidden);
    let k = oracle.k();
    (with_oracle(Arc::new(oracle)), k)
}

/// `G_{p,q}` against an adaptive oracle; returns the oracle for inspection.
pub fn adaptive_adversary(p: usize, q: usize) -> (Instance, Arc<HiddenSetOracle>) {
    let oracle = Arc::new(HiddenSetOracle::adaptive(Construction::Gpq, p, q));
    let k = oracle.k();
    (Instance::new(with_oracle(oracle.clone()), k), oracle)
}

fn check_equivalent(instances: &[RainbowInstance]) -> Result<(usize, usize), InstanceError> {
    let first = instances.first().ok_or_else(|| InstanceError::Inconsistent("no instances to compose".into()))?;
    let (n, k) = (first.graph.order(), first.classes.len());
    if instances.iter().any(|r| r.graph.order() != n || r.classes.len() != k) {
        return Err(InstanceError::Inconsistent("instances differ in vertex count or class count".into()));
    }
    Ok((n, k))
}

/// Copies `r` into `g` at offset `base` and appends its classes to `classes`.
fn place(r: &RainbowInstance, g: &mut Graph, base: usize, classes: &mut [Vec<usize>]) {
    let (_, id) = r.compact();
    for (u, v) in r.graph.edges() {
        g.add_edge(base + id[u], base + id[v]).unwrap();
    }
    for (c, class) in r.classes.iter().enumerate() {
        classes[c].extend(class.iter().map(|&v| base + id[v]));
    }
}

/// Cross-composition into a graph of degeneracy at most `n + log t`.
///
/// Pads to `2^p >= max(t, 2)` blocks with copies of the first instance, and
/// adds selector pairs `u_i v_i`: block `j` is joined to `u_i` when bit `i`
/// of `j` is 0 and to `v_i` otherwise. Emits `k + p` classes.
pub fn compose_degenerate(instances: &[RainbowInstance]) -> Result<RainbowInstance, InstanceError> {
    let (n, k) = check_equivalent(instances)?;
    let t = instances.len().max(2).next_power_of_two();
    let p = t.trailing_zeros() as usize;
    let total = t * n + 2 * p;
    let mut g = Graph::new(total);
    let mut classes = vec![Vec::new(); k + p];
    for j in 0..t {
        let r = instances.get(j).unwrap_or(&instances[0]);
        place(r, &mut g, j * n, &mut classes);
    }
    for i in 0..p {
        let (u, v) = (t * n + 2 * i, t * n + 2 * i + 1);
        g.add_edge(u, v).unwrap();
        classes[k + i] = vec![u, v];
        for j in 0..t {
            let sel = if (j >> i) & 1 == 0 { u } else { v };
            for x in j * n..(j + 1) * n {
                g.add_edge(x, sel).unwrap();
            }
        }
    }
    for c in classes.iter_mut() {
        c.sort_unstable();
    }
    RainbowInstance::new(g, classes)
}

/// Cross-composition of chordal instances: a clique `v_1..v_t` where `v_j` is
/// joined to every block except block `j`. Emits `k + 1` classes, the clique last.
pub fn compose_chordal(instances: &[RainbowInstance]) -> Result<RainbowInstance, InstanceError> {
    let (n, k) = check_equivalent(instances)?;
    if instances.iter().any(|r| chordality(&r.graph).is_none()) {
        return Err(InstanceError::Inconsistent("input graph is not chordal".into()));
    }
    let t = instances.len();
    let mut g = Graph::new(t * n + t);
    let mut classes = vec![Vec::new(); k + 1];
    for (j, r) in instances.iter().enumerate() {
        place(r, &mut g, j * n, &mut classes);
    }
    let clique: Vec<usize> = (0..t).map(|j| t * n + j).collect();
    for (a, b) in clique.iter().tuple_combinations() {
        g.add_edge(*a, *b).unwrap();
    }
    for (j, &vj) in clique.iter().enumerate() {
        for i in (0..t).filter(|&i| i != j) {
            for x in i * n..(i + 1) * n {
                g.add_edge(x, vj).unwrap();
            }
        }
    }
    classes[k] = clique;
    for c in classes.iter_mut() {
        c.sort_unstable();
    }
    RainbowInstance::new(g, classes)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphModel {
    /// Erdős–Rényi with the given edge probability.
    Gnp(f64),
    /// Each vertex joins at most `d` earlier vertices, so degeneracy <= `d`.
    Degenerate(usize),
    /// Intersection graph of random intervals; always chordal.
    Interval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatroidModel {
    Uniform,
    Partition,
    Linear,
    Transversal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSpec {
    pub n: usize,
    pub graph: GraphModel,
    pub matroid: MatroidModel,
    pub k: usize,
    pub seed: u64,
}

pub fn random_graph(n: usize, model: GraphModel, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::new(n);
    match model {
        GraphModel::Gnp(prob) => {
            for (u, v) in (0..n).tuple_combinations() {
                if rng.gen_bool(prob.clamp(0.0, 1.0)) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        GraphModel::Degenerate(d) => {
            let mut earlier: Vec<usize> = Vec::with_capacity(n);
            for v in 0..n {
                let count = rng.gen_range(0..=d.min(v));
                for &u in earlier.choose_multiple(rng, count) {
                    g.add_edge(u, v).unwrap();
                }
                earlier.push(v);
            }
        }
        GraphModel::Interval => {
            let span = 2 * n.max(1);
            let intervals: Vec<(usize, usize)> = (0..n)
                .map(|_| {
                    let l = rng.gen_range(0..span);
                    (l, l + rng.gen_range(0..=n / 2 + 1))
                })
                .collect();
            for (u, v) in (0..n).tuple_combinations() {
                let (a, b) = (intervals[u], intervals[v]);
                if a.0 <= b.1 && b.0 <= a.1 {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
    }
    g
}

pub fn random_matroid(n: usize, model: MatroidModel, k: usize, rng: &mut ChaCha8Rng) -> MatroidHandle {
    match model {
        MatroidModel::Uniform => MatroidHandle::uniform(n, rng.gen_range(0..=k + 1)),
        MatroidModel::Partition => {
            let b = rng.gen_range(1..=n.max(1));
            let mut blocks = vec![Vec::new(); b];
            for v in 0..n {
                blocks[rng.gen_range(0..b)].push(v);
            }
            MatroidHandle::partition(n, blocks).expect("covering blocks")
        }
        MatroidModel::Linear => {
            let field = PrimeField::default();
            let r = rng.gen_range(1..=k + 1);
            let mut a = FieldMatrix::zeros(field, r, n);
            for j in 0..n {
                // occasional parallel columns and small entries create dependencies
                if j > 0 && rng.gen_bool(0.2) {
                    let src = rng.gen_range(0..j);
                    let s = rng.gen_range(1..field.modulus());
                    for i in 0..r {
                        let x = field.mul(a.get(i, src), &s);
                        a.set(i, j, x);
                    }
                } else {
                    for i in 0..r {
                        a.set(i, j, rng.gen_range(0..3));
                    }
                }
            }
            MatroidHandle::linear(a)
        }
        MatroidModel::Transversal => {
            let w = rng.gen_range(1..=k + 1);
            let edges: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (0..w).map(move |x| (u, x))).filter(|_| rng.gen_bool(0.35)).collect();
            MatroidHandle::transversal(Bipartite::new(n, w, &edges).expect("edges in range"))
        }
    }
}

/// Reproducible random instance.
pub fn gen_random(spec: RandomSpec) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let g = random_graph(spec.n, spec.graph, &mut rng);
    let m = random_matroid(spec.n, spec.matroid, spec.k, &mut rng);
    Instance::new(Framework::new(g, m).expect("same universe"), spec.k)
}

/// Random colouring of a graph into `k >= 1` classes (some possibly empty).
pub fn random_rainbow(g: Graph, k: usize, rng: &mut ChaCha8Rng) -> RainbowInstance {
    assert!(k >= 1, "at least one class");
    let mut classes = vec![Vec::new(); k];
    for v in g.vertices() {
        classes[rng.gen_range(0..k)].push(v);
    }
    RainbowInstance::new(g, classes).expect("classes cover the graph")
}
