//! Frameworks (a graph with a matroid on its vertices) and problem instances.

use thiserror::Error;

use crate::graph::Graph;
use crate::matroid::{MatroidError, MatroidHandle};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameworkError {
    #[error("matroid ground set does not match the graph's vertex set")]
    GroundMismatch,
    #[error("vertex {0} is not in the graph")]
    NotInGraph(usize),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

#[derive(Debug, Clone)]
pub struct Framework {
    pub graph: Graph,
    pub matroid: MatroidHandle,
}

impl Framework {
    /// Pairs a graph with a matroid over the same universe. The matroid is
    /// restricted to the graph's present vertices.
    pub fn new(graph: Graph, matroid: MatroidHandle) -> Result<Self, FrameworkError> {
        let present: Vec<usize> = graph.vertices().collect();
        if present.iter().any(|&v| !matroid.in_ground(v)) {
            return Err(FrameworkError::GroundMismatch);
        }
        let matroid = if matroid.ground().len() == present.len() { matroid } else { matroid.restrict(&present)? };
        Ok(Self { graph, matroid })
    }

    /// Framework induced on `keep`: induced subgraph plus restricted matroid.
    pub fn induced(&self, keep: &[usize]) -> Self {
        let graph = self.graph.induced_subgraph(keep);
        let present: Vec<usize> = graph.vertices().collect();
        let matroid = self.matroid.restrict(&present).expect("subset of ground");
        Self { graph, matroid }
    }

    pub fn remove_vertices(&self, drop: &[usize]) -> Self {
        let graph = self.graph.remove_vertices(drop);
        let present: Vec<usize> = graph.vertices().collect();
        let matroid = self.matroid.restrict(&present).expect("subset of ground");
        Self { graph, matroid }
    }
}

/// A framework and a target size `k`. The matroid is `k`-truncated on
/// construction.
#[derive(Debug, Clone)]
pub struct Instance {
    pub framework: Framework,
    pub k: usize,
}

impl Instance {
    pub fn new(framework: Framework, k: usize) -> Self {
        let matroid = framework.matroid.truncate(k);
        Self { framework: Framework { graph: framework.graph, matroid }, k }
    }

    pub fn graph(&self) -> &Graph {
        &self.framework.graph
    }

    pub fn matroid(&self) -> &MatroidHandle {
        &self.framework.matroid
    }

    /// Same instance with a counting view on the matroid.
    pub fn counted(&self) -> (Self, std::sync::Arc<crate::matroid::QueryCounter>) {
        let (matroid, counter) = self.framework.matroid.counting();
        (Self { framework: Framework { graph: self.framework.graph.clone(), matroid }, k: self.k }, counter)
    }

    /// Canonical YES instance of size zero: empty graph, target zero.
    pub fn trivial_yes() -> Self {
        Self::new(Framework { graph: Graph::new(0), matroid: MatroidHandle::uniform(0, 0) }, 0)
    }

    /// Canonical NO instance of size zero: empty graph, target one.
    pub fn trivial_no() -> Self {
        Self::new(Framework { graph: Graph::new(0), matroid: MatroidHandle::uniform(0, 0) }, 1)
    }
}

/// Whether `set` is a stable set of size at least `k` that is independent in
/// the framework's matroid.
pub fn verify_solution(f: &Framework, set: &[usize], k: usize) -> Result<bool, FrameworkError> {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    if let Some(&v) = s.iter().find(|&&v| !f.graph.contains(v)) {
        return Err(FrameworkError::NotInGraph(v));
    }
    Ok(s.len() >= k && f.graph.is_stable(&s) && f.matroid.is_independent(&s)?)
}
