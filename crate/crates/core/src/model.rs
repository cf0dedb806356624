//! Node identifiers, paths, and directed graphs.
//!
//! Bidirected graphs are simulated with directed graphs: original node `base` in orientation
//! `o` becomes node `2 * base + o`, so the two orientations of the same node are adjacent.
//! Node `0` is the endmarker and never appears in a graph.

use crate::error::{GbwtError, Result};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

//-----------------------------------------------------------------------------

/// Node identifier. Identifier `0` is reserved for the endmarker.
pub type NodeId = usize;

/// The endmarker `$`. It compares less than every node.
pub const ENDMARKER: NodeId = 0;

/// A sequence of nodes.
pub type Path = Vec<NodeId>;

/// Orientation of a node in a bidirected graph.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    Forward,
    Reverse,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::Forward => Orientation::Reverse,
            Orientation::Reverse => Orientation::Forward,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Orientation::Forward => write!(f, "+"),
            Orientation::Reverse => write!(f, "-"),
        }
    }
}

/// An original graph node together with an orientation.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrientedNode {
    pub base: usize,
    pub orientation: Orientation,
}

impl OrientedNode {
    pub fn new(base: usize, orientation: Orientation) -> Self {
        OrientedNode { base, orientation }
    }

    /// The directed node identifier for this oriented node.
    pub fn encode(self) -> Result<NodeId> {
        encode_oriented(self.base, self.orientation)
    }

    pub fn decode(id: NodeId) -> Result<Self> {
        decode_oriented(id)
    }
}

impl fmt::Display for OrientedNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.base, self.orientation)
    }
}

/// Maps `(base, orientation)` to `2 * base + (0 | 1)`.
///
/// ```
/// use gbwt::model::{encode_oriented, Orientation};
/// assert_eq!(encode_oriented(1, Orientation::Forward).unwrap(), 2);
/// assert_eq!(encode_oriented(1, Orientation::Reverse).unwrap(), 3);
/// assert!(encode_oriented(0, Orientation::Forward).is_err());
/// ```
pub fn encode_oriented(base: usize, orientation: Orientation) -> Result<NodeId> {
    if base == 0 {
        return Err(GbwtError::ReservedId);
    }
    base.checked_mul(2)
        .and_then(|x| x.checked_add((orientation == Orientation::Reverse) as usize))
        .ok_or(GbwtError::IdSpaceExhausted)
}

/// Inverse of [`encode_oriented`]. Fails on `0` and `1`, which no oriented node maps to.
pub fn decode_oriented(id: NodeId) -> Result<OrientedNode> {
    if id < 2 {
        return Err(GbwtError::ReservedId);
    }
    let orientation = if id & 1 == 0 {
        Orientation::Forward
    } else {
        Orientation::Reverse
    };
    Ok(OrientedNode {
        base: id / 2,
        orientation,
    })
}

/// Original node identifier of a directed node.
#[inline]
pub fn base_id(id: NodeId) -> usize {
    id / 2
}

/// Returns `true` if the directed node is the reverse orientation of its original node.
#[inline]
pub fn is_reverse(id: NodeId) -> bool {
    id & 1 != 0
}

/// The other orientation of the same original node.
#[inline]
pub fn flip(id: NodeId) -> NodeId {
    id ^ 1
}

/// The reverse path: reverse nodes in reverse order.
pub fn reverse_path(path: &[NodeId]) -> Path {
    path.iter().rev().map(|&v| flip(v)).collect()
}

/// Returns the lexicographically smaller of `path` and its reverse.
pub fn canonical_path(path: &[NodeId]) -> Path {
    let reverse = reverse_path(path);
    if reverse.as_slice() < path {
        reverse
    } else {
        path.to_vec()
    }
}

//-----------------------------------------------------------------------------

/// Why a path is not a path in a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathDefect {
    /// The node at this position is not in the graph.
    MissingNode { position: usize, node: NodeId },
    /// There is no edge from the node at this position to the next one.
    MissingEdge {
        position: usize,
        from: NodeId,
        to: NodeId,
    },
}

impl PathDefect {
    pub fn position(&self) -> usize {
        match self {
            PathDefect::MissingNode { position, .. } | PathDefect::MissingEdge { position, .. } => {
                *position
            }
        }
    }
}

impl fmt::Display for PathDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathDefect::MissingNode { position, node } => {
                write!(f, "node {} at step {} is not in the graph", node, position)
            }
            PathDefect::MissingEdge { position, from, to } => {
                write!(f, "no edge from {} to {} at step {}", from, to, position)
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Adjacency {
    successors: Vec<NodeId>,
    predecessors: Vec<NodeId>,
}

/// A directed graph with sorted successor and predecessor lists and optional node labels.
///
/// Node identifiers are arbitrary positive integers; the graph tracks the span of identifiers
/// in use. Unused identifiers inside the span are allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    nodes: BTreeMap<NodeId, Adjacency>,
    labels: BTreeMap<NodeId, String>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from an edge list. Endpoints are added as nodes.
    pub fn from_edges<I: IntoIterator<Item = (NodeId, NodeId)>>(edges: I) -> Result<Self> {
        let mut graph = Graph::new();
        for (from, to) in edges {
            graph.add_edge(from, to)?;
        }
        Ok(graph)
    }

    /// Adds a node. Returns `true` if it was not present.
    pub fn add_node(&mut self, node: NodeId) -> Result<bool> {
        if node == ENDMARKER {
            return Err(GbwtError::ReservedId);
        }
        if self.nodes.contains_key(&node) {
            return Ok(false);
        }
        self.nodes.insert(node, Adjacency::default());
        Ok(true)
    }

    /// Adds an edge and its endpoints. Returns `true` if the edge was not present.
    pub fn add_edge(&mut self, from: NodeId, to: NodeId) -> Result<bool> {
        self.add_node(from)?;
        self.add_node(to)?;
        let successors = &mut self.nodes.get_mut(&from).unwrap().successors;
        match successors.binary_search(&to) {
            Ok(_) => return Ok(false),
            Err(pos) => successors.insert(pos, to),
        }
        let predecessors = &mut self.nodes.get_mut(&to).unwrap().predecessors;
        if let Err(pos) = predecessors.binary_search(&from) {
            predecessors.insert(pos, from);
        }
        Ok(true)
    }

    /// Adds both orientations of an original node.
    pub fn add_bidirected_node(&mut self, base: usize) -> Result<()> {
        self.add_node(encode_oriented(base, Orientation::Forward)?)?;
        self.add_node(encode_oriented(base, Orientation::Reverse)?)?;
        Ok(())
    }

    /// Adds edge `(from, to)` and its mirror `(flip(to), flip(from))`.
    pub fn add_bidirected_edge(&mut self, from: NodeId, to: NodeId) -> Result<()> {
        self.add_bidirected_node(base_id(from))?;
        self.add_bidirected_node(base_id(to))?;
        self.add_edge(from, to)?;
        self.add_edge(flip(to), flip(from))?;
        Ok(())
    }

    /// Removes a node and all edges touching it.
    pub fn remove_node(&mut self, node: NodeId) -> bool {
        let Some(adjacency) = self.nodes.remove(&node) else {
            return false;
        };
        for succ in adjacency.successors {
            if let Some(adj) = self.nodes.get_mut(&succ) {
                adj.predecessors.retain(|&x| x != node);
            }
        }
        for pred in adjacency.predecessors {
            if let Some(adj) = self.nodes.get_mut(&pred) {
                adj.successors.retain(|&x| x != node);
            }
        }
        self.labels.remove(&node);
        true
    }

    pub fn set_label(&mut self, node: NodeId, label: impl Into<String>) {
        self.labels.insert(node, label.into());
    }

    pub fn label(&self, node: NodeId) -> Option<&str> {
        self.labels.get(&node).map(String::as_str)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.values().map(|a| a.successors.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn has_node(&self, node: NodeId) -> bool {
        self.nodes.contains_key(&node)
    }

    pub fn has_edge(&self, from: NodeId, to: NodeId) -> bool {
        self.nodes
            .get(&from)
            .is_some_and(|a| a.successors.binary_search(&to).is_ok())
    }

    /// Smallest and largest node identifier, or `None` for an empty graph.
    pub fn id_range(&self) -> Option<(NodeId, NodeId)> {
        Some((*self.nodes.keys().next()?, *self.nodes.keys().next_back()?))
    }

    /// Nodes in ascending order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.keys().copied()
    }

    /// Edges in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes
            .iter()
            .flat_map(|(&from, adj)| adj.successors.iter().map(move |&to| (from, to)))
    }

    pub fn successors(&self, node: NodeId) -> &[NodeId] {
        self.nodes
            .get(&node)
            .map_or(&[], |a| a.successors.as_slice())
    }

    pub fn predecessors(&self, node: NodeId) -> &[NodeId] {
        self.nodes
            .get(&node)
            .map_or(&[], |a| a.predecessors.as_slice())
    }

    /// Original node identifiers present in either orientation.
    pub fn base_nodes(&self) -> BTreeSet<usize> {
        self.nodes.keys().map(|&v| base_id(v)).collect()
    }

    /// Returns `true` if `(u, v) ∈ E` implies `(flip(v), flip(u)) ∈ E`.
    pub fn is_orientation_closed(&self) -> bool {
        self.edges().all(|(u, v)| self.has_edge(flip(v), flip(u)))
    }

    /// Checks that every node of the path exists and that consecutive nodes are joined by edges.
    pub fn validate_path(&self, path: &[NodeId]) -> std::result::Result<(), PathDefect> {
        for (position, &node) in path.iter().enumerate() {
            if !self.has_node(node) {
                return Err(PathDefect::MissingNode { position, node });
            }
            if position > 0 && !self.has_edge(path[position - 1], node) {
                return Err(PathDefect::MissingEdge {
                    position: position - 1,
                    from: path[position - 1],
                    to: node,
                });
            }
        }
        Ok(())
    }

    /// Returns `true` if the path is a path in this graph.
    pub fn path_is_valid(&self, path: &[NodeId]) -> bool {
        self.validate_path(path).is_ok()
    }
}

//-----------------------------------------------------------------------------
