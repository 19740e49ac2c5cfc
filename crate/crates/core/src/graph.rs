//! Simple undirected graphs over a fixed universe of vertex indices, plus the
//! structural routines the solvers and kernels need.
//!
//! Vertex identities never change: an induced subgraph keeps the universe
//! and marks the dropped vertices absent. Matroids are indexed by the same
//! universe, so the two stay aligned through every deletion.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} is not in the graph")]
    MissingVertex(usize),
    #[error("self-loop at vertex {0}")]
    Loop(usize),
    #[error("graph is not chordal")]
    NotChordal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    present: Vec<bool>,
    order: usize,
}

impl Graph {
    /// Edgeless graph on vertices `0..n`.
    pub fn new(n: usize) -> Self {
        Self { adj: vec![Vec::new(); n], present: vec![true; n], order: n }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds an edge; parallel edges are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        for x in [u, v] {
            if !self.contains(x) {
                return Err(GraphError::MissingVertex(x));
            }
        }
        if u == v {
            return Err(GraphError::Loop(u));
        }
        if let Err(pos) = self.adj[u].binary_search(&v) {
            self.adj[u].insert(pos, v);
            let pos = self.adj[v].binary_search(&u).unwrap_err();
            self.adj[v].insert(pos, u);
        }
        Ok(())
    }

    /// Size of the index universe (present or not).
    pub fn universe(&self) -> usize {
        self.adj.len()
    }

    /// Number of present vertices.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn contains(&self, v: usize) -> bool {
        self.present.get(v).copied().unwrap_or(false)
    }

    /// Present vertices in ascending order.
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.adj.len()).filter(|&v| self.present[v])
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u).is_some_and(|a| a.binary_search(&v).is_ok())
    }

    pub fn edge_count(&self) -> usize {
        self.vertices().map(|v| self.adj[v].len()).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.vertices()
            .flat_map(|u| self.adj[u].iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect()
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Subgraph induced by the present vertices of `keep`.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Self {
        let mut mask = vec![false; self.adj.len()];
        for &v in keep {
            if self.contains(v) {
                mask[v] = true;
            }
        }
        self.with_mask(mask)
    }

    pub fn remove_vertices(&self, drop: &[usize]) -> Self {
        let mut mask = self.present.clone();
        for &v in drop {
            if v < mask.len() {
                mask[v] = false;
            }
        }
        self.with_mask(mask)
    }

    /// `G - N[v]`.
    pub fn delete_closed_neighborhood(&self, v: usize) -> Result<Self, GraphError> {
        if !self.contains(v) {
            return Err(GraphError::MissingVertex(v));
        }
        let mut drop = self.adj[v].clone();
        drop.push(v);
        Ok(self.remove_vertices(&drop))
    }

    fn with_mask(&self, mask: Vec<bool>) -> Self {
        let adj = self
            .adj
            .iter()
            .enumerate()
            .map(|(v, nb)| {
                if mask[v] {
                    nb.iter().copied().filter(|&u| mask[u]).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        let order = mask.iter().filter(|&&b| b).count();
        Self { adj, present: mask, order }
    }

    pub fn is_stable(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| !self.has_edge(u, v)))
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }
}

/// Vertex order in which every vertex has at most `degeneracy` neighbours
/// appearing after it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationOrder {
    pub order: Vec<usize>,
    pub degeneracy: usize,
}

impl EliminationOrder {
    /// Position of each universe vertex in the order (`usize::MAX` if absent).
    pub fn positions(&self, universe: usize) -> Vec<usize> {
        let mut pos = vec![usize::MAX; universe];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    /// The subsequence of vertices still present in `g`.
    pub fn induced(&self, g: &Graph) -> Self {
        let order: Vec<usize> = self.order.iter().copied().filter(|&v| g.contains(v)).collect();
        Self { order, degeneracy: self.degeneracy }
    }
}

/// Matula-Beck smallest-last ordering with bucket queues, lowest index first
/// on ties.
pub fn degeneracy_ordering(g: &Graph) -> EliminationOrder {
    let n = g.universe();
    let mut deg = vec![0usize; n];
    let maxd = g.max_degree();
    let mut buckets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); maxd + 1];
    for v in g.vertices() {
        deg[v] = g.degree(v);
        buckets[deg[v]].insert(v);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(g.order());
    let mut degeneracy = 0;
    let mut low = 0;
    for _ in 0..g.order() {
        while buckets[low].is_empty() {
            low += 1;
        }
        let v = buckets[low].pop_first().expect("nonempty bucket");
        degeneracy = degeneracy.max(low);
        removed[v] = true;
        order.push(v);
        for &u in g.neighbors(v) {
            if !removed[u] {
                buckets[deg[u]].remove(&u);
                deg[u] -= 1;
                buckets[deg[u]].insert(u);
            }
        }
        low = low.saturating_sub(1);
    }
    EliminationOrder { order, degeneracy }
}

/// Lexicographic breadth-first search by partition refinement. Returns the
/// visiting order; its reverse is a perfect elimination ordering exactly when
/// the graph is chordal.
pub fn lex_bfs(g: &Graph) -> Vec<usize> {
    // each class is a slice of `seq`; classes ordered front (highest label) first
    let mut classes: VecDeque<Vec<usize>> = VecDeque::new();
    let all: Vec<usize> = g.vertices().collect();
    if !all.is_empty() {
        classes.push_back(all);
    }
    let mut visited = vec![false; g.universe()];
    let mut out = Vec::with_capacity(g.order());
    while let Some(mut front) = classes.pop_front() {
        let v = front.remove(0);
        if !front.is_empty() {
            classes.push_front(front);
        }
        visited[v] = true;
        out.push(v);
        let mut refined = VecDeque::with_capacity(classes.len() + 1);
        for class in classes.drain(..) {
            let (hit, miss): (Vec<usize>, Vec<usize>) =
                class.into_iter().partition(|&u| g.has_edge(u, v));
            if !hit.is_empty() {
                refined.push_back(hit);
            }
            if !miss.is_empty() {
                refined.push_back(miss);
            }
        }
        classes = refined;
    }
    debug_assert!(out.iter().all(|&v| visited[v]));
    out
}

/// A perfect elimination ordering (each vertex's later neighbours form a
/// clique), or `None` if the graph is not chordal.
pub fn chordality(g: &Graph) -> Option<EliminationOrder> {
    let mut order = lex_bfs(g);
    order.reverse();
    let pos = EliminationOrder { order: order.clone(), degeneracy: 0 }.positions(g.universe());
    let mut width = 0;
    for &v in &order {
        let later: Vec<usize> =
            g.neighbors(v).iter().copied().filter(|&u| pos[u] > pos[v]).collect();
        width = width.max(later.len());
        // only the earliest later neighbour needs to see the rest
        if let Some(&parent) = later.iter().min_by_key(|&&u| pos[u]) {
            if later.iter().any(|&u| u != parent && !g.has_edge(parent, u)) {
                return None;
            }
        }
    }
    Some(EliminationOrder { order, degeneracy: width })
}

/// Unrooted tree decomposition: bags plus tree edges between bag indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Checks vertex coverage, edge coverage, connectivity of every vertex's
    /// bags, and that the bag graph is a forest spanning all bags as one tree.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let b = self.bags.len();
        if g.order() > 0 && b == 0 {
            return false;
        }
        if b > 0 && self.edges.len() != b - 1 {
            return false;
        }
        let mut adj = vec![Vec::new(); b];
        for &(x, y) in &self.edges {
            if x >= b || y >= b {
                return false;
            }
            adj[x].push(y);
            adj[y].push(x);
        }
        if b > 0 && connected_component(&adj, 0, |_| true).len() != b {
            return false;
        }
        for v in g.vertices() {
            let holders: Vec<usize> = (0..b).filter(|&i| self.bags[i].contains(&v)).collect();
            let Some(&first) = holders.first() else {
                return false;
            };
            if connected_component(&adj, first, |i| self.bags[i].contains(&v)).len()
                != holders.len()
            {
                return false;
            }
        }
        g.edges()
            .iter()
            .all(|&(u, v)| self.bags.iter().any(|bag| bag.contains(&u) && bag.contains(&v)))
    }
}

fn connected_component(adj: &[Vec<usize>], start: usize, keep: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![start];
    seen[start] = true;
    let mut out = Vec::new();
    while let Some(x) = stack.pop() {
        out.push(x);
        for &y in &adj[x] {
            if !seen[y] && keep(y) {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    out
}

/// Clique tree of a chordal graph: the maximal cliques joined by a maximum
/// weight spanning tree of their intersection sizes.
pub fn clique_tree(g: &Graph) -> Result<TreeDecomposition, GraphError> {
    let peo = chordality(g).ok_or(GraphError::NotChordal)?;
    let pos = peo.positions(g.universe());
    let mut candidates: Vec<Vec<usize>> = peo
        .order
        .iter()
        .map(|&v| {
            let mut c: Vec<usize> =
                g.neighbors(v).iter().copied().filter(|&u| pos[u] > pos[v]).collect();
            c.push(v);
            c.sort_unstable();
            c
        })
        .collect();
    candidates.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let mut bags: Vec<Vec<usize>> = Vec::new();
    for c in candidates {
        if !bags.iter().any(|b| is_subset(&c, b)) {
            bags.push(c);
        }
    }
    bags.sort();

    let mut weighted = Vec::new();
    for i in 0..bags.len() {
        for j in i + 1..bags.len() {
            weighted.push((intersection_size(&bags[i], &bags[j]), i, j));
        }
    }
    weighted.sort_by(|a, b| b.0.cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let mut parent: Vec<usize> = (0..bags.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    let mut edges = Vec::new();
    for (_, i, j) in weighted {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri] = rj;
            edges.push((i, j));
        }
    }
    Ok(TreeDecomposition { bags, edges })
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|x| big.binary_search(x).is_ok())
}

fn intersection_size(a: &[usize], b: &[usize]) -> usize {
    a.iter().filter(|x| b.binary_search(x).is_ok()).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NiceNode {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

/// Rooted nice tree decomposition. Nodes are stored children-first, so a
/// forward scan is a valid bottom-up evaluation order and the root is last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    pub kinds: Vec<NiceNode>,
    pub bags: Vec<Vec<usize>>,
    pub children: Vec<Vec<usize>>,
}

impl NiceTreeDecomposition {
    pub fn root(&self) -> usize {
        self.kinds.len() - 1
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    fn push(&mut self, kind: NiceNode, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.kinds.push(kind);
        self.bags.push(bag);
        self.children.push(children);
        self.kinds.len() - 1
    }

    /// Checks the node-type rules and the decomposition axioms against `g`.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        if self.is_empty() || !self.bags[self.root()].is_empty() {
            return false;
        }
        for t in 0..self.len() {
            let bag = &self.bags[t];
            let ch = &self.children[t];
            if ch.iter().any(|&c| c >= t) {
                return false;
            }
            let ok = match self.kinds[t] {
                NiceNode::Leaf => ch.is_empty() && bag.is_empty(),
                NiceNode::Introduce(v) => {
                    ch.len() == 1 && {
                        let mut expect = self.bags[ch[0]].clone();
                        !expect.contains(&v) && {
                            expect.push(v);
                            expect.sort_unstable();
                            expect == *bag
                        }
                    }
                }
                NiceNode::Forget(v) => {
                    ch.len() == 1 && {
                        let child = &self.bags[ch[0]];
                        child.contains(&v)
                            && child.iter().copied().filter(|&x| x != v).collect::<Vec<_>>() == *bag
                    }
                }
                NiceNode::Join => {
                    ch.len() == 2 && self.bags[ch[0]] == *bag && self.bags[ch[1]] == *bag
                }
            };
            if !ok {
                return false;
            }
        }
        let mut edges = Vec::new();
        for (t, ch) in self.children.iter().enumerate() {
            for &c in ch {
                edges.push((c, t));
            }
        }
        TreeDecomposition { bags: self.bags.clone(), edges }.is_valid_for(g)
    }
}

/// Converts a tree decomposition into nice form, rooted at bag 0.
///
/// Separate components of the decomposition forest are chained: the root of
/// one component (empty bag) stands in for a leaf of the next.
pub fn make_nice(td: &TreeDecomposition) -> NiceTreeDecomposition {
    let mut nice = NiceTreeDecomposition { kinds: Vec::new(), bags: Vec::new(), children: Vec::new() };
    let b = td.bags.len();
    let mut adj = vec![Vec::new(); b];
    for &(x, y) in &td.edges {
        // edges between bags with nothing in common are dropped so that
        // components can be chained instead of joined
        if intersection_size(&td.bags[x], &td.bags[y]) > 0 {
            adj[x].push(y);
            adj[y].push(x);
        }
    }
    for a in adj.iter_mut() {
        a.sort_unstable();
    }
    let mut seen = vec![false; b];
    let mut carry: Option<usize> = None;
    for start in 0..b {
        if seen[start] {
            continue;
        }
        let top = build_nice(td, &adj, start, &mut seen, &mut nice, &mut carry);
        let mut cur = top;
        let mut bag = td.bags[start].clone();
        for &v in &td.bags[start] {
            bag.retain(|&x| x != v);
            cur = nice.push(NiceNode::Forget(v), bag.clone(), vec![cur]);
        }
        carry = Some(cur);
    }
    if carry.is_none() {
        nice.push(NiceNode::Leaf, Vec::new(), Vec::new());
    }
    nice
}

// Builds the subtree for bag `t`; returns the node whose bag equals bag `t`.
fn build_nice(
    td: &TreeDecomposition,
    adj: &[Vec<usize>],
    t: usize,
    seen: &mut [bool],
    nice: &mut NiceTreeDecomposition,
    carry: &mut Option<usize>,
) -> usize {
    seen[t] = true;
    let bag = &td.bags[t];
    let kids: Vec<usize> = adj[t].iter().copied().filter(|&c| !seen[c]).collect();
    let mut tops = Vec::new();
    for c in kids {
        if seen[c] {
            continue;
        }
        let mut cur = build_nice(td, adj, c, seen, nice, carry);
        let mut cur_bag = td.bags[c].clone();
        for &v in &td.bags[c] {
            if !bag.contains(&v) {
                cur_bag.retain(|&x| x != v);
                cur = nice.push(NiceNode::Forget(v), cur_bag.clone(), vec![cur]);
            }
        }
        for &v in bag {
            if !cur_bag.contains(&v) {
                cur_bag.push(v);
                cur_bag.sort_unstable();
                cur = nice.push(NiceNode::Introduce(v), cur_bag.clone(), vec![cur]);
            }
        }
        tops.push(cur);
    }
    if tops.is_empty() {
        let mut cur = match carry.take() {
            Some(c) => c,
            None => nice.push(NiceNode::Leaf, Vec::new(), Vec::new()),
        };
        let mut cur_bag = Vec::new();
        for &v in bag {
            cur_bag.push(v);
            cur = nice.push(NiceNode::Introduce(v), cur_bag.clone(), vec![cur]);
        }
        return cur;
    }
    let mut acc = tops[0];
    for &other in &tops[1..] {
        acc = nice.push(NiceNode::Join, bag.clone(), vec![acc, other]);
    }
    acc
}

/// Exhaustive search for an induced claw `K_{1,3}`.
pub fn is_claw_free(g: &Graph) -> bool {
    for c in g.vertices() {
        let nb = g.neighbors(c);
        for (i, &x) in nb.iter().enumerate() {
            for (j, &y) in nb.iter().enumerate().skip(i + 1) {
                if g.has_edge(x, y) {
                    continue;
                }
                if nb[j + 1..].iter().any(|&z| !g.has_edge(x, z) && !g.has_edge(y, z)) {
                    return false;
                }
            }
        }
    }
    true
}

/// Exhaustive search for an asteroidal triple.
pub fn is_at_free(g: &Graph) -> bool {
    let vs: Vec<usize> = g.vertices().collect();
    // reach[z][x]: component id of x in G - N[z]
    let mut comp = vec![vec![usize::MAX; g.universe()]; g.universe()];
    for &z in &vs {
        let mut blocked = vec![false; g.universe()];
        blocked[z] = true;
        for &u in g.neighbors(z) {
            blocked[u] = true;
        }
        let mut id = 0;
        for &s in &vs {
            if blocked[s] || comp[z][s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            comp[z][s] = id;
            while let Some(x) = stack.pop() {
                for &y in g.neighbors(x) {
                    if !blocked[y] && comp[z][y] == usize::MAX {
                        comp[z][y] = id;
                        stack.push(y);
                    }
                }
            }
            id += 1;
        }
    }
    let joined = |z: usize, x: usize, y: usize| comp[z][x] != usize::MAX && comp[z][x] == comp[z][y];
    for (i, &a) in vs.iter().enumerate() {
        for (j, &b) in vs.iter().enumerate().skip(i + 1) {
            if g.has_edge(a, b) {
                continue;
            }
            for &c in &vs[j + 1..] {
                if g.has_edge(a, c) || g.has_edge(b, c) {
                    continue;
                }
                if joined(c, a, b) && joined(b, a, c) && joined(a, b, c) {
                    return false;
                }
            }
        }
    }
    true
}

/// Standard constructions used throughout the tests and generators.
pub mod families {
    use super::Graph;

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("valid path")
    }

    pub fn cycle(n: usize) -> Graph {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        if n > 2 {
            edges.push((n - 1, 0));
        }
        Graph::from_edges(n, &edges).expect("valid cycle")
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).expect("valid");
            }
        }
        g
    }

    pub fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &edges).expect("valid star")
    }

    /// `a x b` grid, vertex `(i, j)` at index `i * b + j`.
    pub fn grid(a: usize, b: usize) -> Graph {
        let mut g = Graph::new(a * b);
        for i in 0..a {
            for j in 0..b {
                if i + 1 < a {
                    g.add_edge(i * b + j, (i + 1) * b + j).expect("valid");
                }
                if j + 1 < b {
                    g.add_edge(i * b + j, i * b + j + 1).expect("valid");
                }
            }
        }
        g
    }
}
