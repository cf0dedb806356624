//! Haplotype-aware graph simplification.
//!
//! A pruned graph `G_p` has lost regions of the graph `G_i` induced by the indexed paths.
//! Each connected component of the complement graph (edges of `G_i` missing from `G_p`) is
//! rebuilt from the indexed paths that pass through it. Internal nodes are duplicated so that
//! the result contains every path fragment of the indexed paths but few recombinations.
//!
//! All graphs here use oriented identifiers (see [`crate::model`]). Components, borders and
//! duplicate mappings are over original node identifiers.
//!
//! ```
//! use gbwt::model::{encode_oriented, Orientation};
//! use gbwt::{unfold, DynamicGbwt, Graph, UnfoldOptions};
//!
//! let fwd = |v| encode_oriented(v, Orientation::Forward).unwrap();
//! let paths: Vec<Vec<usize>> = vec![vec![1, 2, 3], vec![4, 2, 5]].into_iter()
//!     .map(|p: Vec<usize>| p.into_iter().map(fwd).collect())
//!     .collect();
//! let index = DynamicGbwt::from_paths(&paths, 1, false).unwrap();
//!
//! // Node 2 was pruned.
//! let mut pruned = Graph::new();
//! for v in [1, 3, 4, 5] {
//!     pruned.add_bidirected_node(v).unwrap();
//! }
//! let result = unfold(&index, &pruned, &UnfoldOptions::default()).unwrap();
//! assert_eq!(result.mapping.len(), 2);
//! assert!(!result.graph.has_node(fwd(2)));
//! ```

use crate::error::{GbwtError, Result};
use crate::model::{base_id, canonical_path, flip, reverse_path, Graph, NodeId, Path, ENDMARKER};
use crate::query::{Search, SearchState};
use crate::record::RecordSource;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::{BufRead, Write};

//-----------------------------------------------------------------------------

/// Graph induced by the indexed paths: an edge for every successor in every record.
pub fn induced_graph<S: RecordSource + ?Sized>(index: &S) -> Result<Graph> {
    let mut graph = Graph::new();
    for v in index.nodes() {
        graph.add_node(v)?;
        if let Some(record) = index.record(v) {
            for edge in record.edges.iter().filter(|e| e.node != ENDMARKER) {
                graph.add_edge(v, edge.node)?;
            }
        }
    }
    Ok(graph)
}

/// A connected component of the complement graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComplementComponent {
    /// Original node identifiers in the component.
    pub nodes: BTreeSet<usize>,
    /// Complement edges, as oriented identifiers.
    pub edges: Vec<(NodeId, NodeId)>,
    /// Nodes that also exist in the pruned graph.
    pub border: BTreeSet<usize>,
}

impl ComplementComponent {
    pub fn internal(&self) -> BTreeSet<usize> {
        self.nodes.difference(&self.border).copied().collect()
    }

    pub fn is_border(&self, id: NodeId) -> bool {
        self.border.contains(&base_id(id))
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.nodes.contains(&base_id(id))
    }
}

/// Connected components of the graph formed by the edges of `induced` that are not in
/// `pruned`, ignoring direction and orientation. Sorted by smallest member.
pub fn complement_components(induced: &Graph, pruned: &Graph) -> Vec<ComplementComponent> {
    let edges: Vec<(NodeId, NodeId)> = induced
        .edges()
        .filter(|&(u, v)| !pruned.has_edge(u, v))
        .collect();
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    fn root(parent: &mut BTreeMap<usize, usize>, x: usize) -> usize {
        let mut r = x;
        while parent[&r] != r {
            r = parent[&r];
        }
        let mut y = x;
        while parent[&y] != r {
            let next = parent[&y];
            parent.insert(y, r);
            y = next;
        }
        r
    }
    for &(u, v) in &edges {
        let (a, b) = (base_id(u), base_id(v));
        parent.entry(a).or_insert(a);
        parent.entry(b).or_insert(b);
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra != rb {
            parent.insert(ra.max(rb), ra.min(rb));
        }
    }
    let mut components: BTreeMap<usize, ComplementComponent> = BTreeMap::new();
    let keys: Vec<usize> = parent.keys().copied().collect();
    for x in keys {
        let r = root(&mut parent, x);
        components.entry(r).or_default().nodes.insert(x);
    }
    for &(u, v) in &edges {
        let r = root(&mut parent, base_id(u));
        components.get_mut(&r).unwrap().edges.push((u, v));
    }
    let pruned_nodes = pruned.base_nodes();
    let mut result: Vec<ComplementComponent> = components.into_values().collect();
    for component in result.iter_mut() {
        component.border = component
            .nodes
            .intersection(&pruned_nodes)
            .copied()
            .collect();
    }
    result.sort_by_key(|c| *c.nodes.iter().next().unwrap());
    result
}

//-----------------------------------------------------------------------------

/// How a maximal path ends.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathKind {
    BorderToBorder,
    BorderToDeadEnd,
    Internal,
}

/// A path inside a component supported by at least one indexed path.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MaximalPath {
    pub nodes: Path,
    pub kind: PathKind,
}

impl MaximalPath {
    fn new(nodes: Path, component: &ComplementComponent) -> Self {
        let first = component.is_border(nodes[0]);
        let last = component.is_border(*nodes.last().unwrap());
        let kind = match (first, last) {
            (true, true) if nodes.len() >= 2 => PathKind::BorderToBorder,
            (false, false) => PathKind::Internal,
            _ => PathKind::BorderToDeadEnd,
        };
        MaximalPath { nodes, kind }
    }

    /// Length of the prefix when the path is split in two.
    pub fn prefix_len(&self) -> usize {
        self.nodes.len() / 2
    }

    pub fn prefix(&self) -> &[NodeId] {
        &self.nodes[..self.prefix_len()]
    }

    pub fn suffix(&self) -> &[NodeId] {
        &self.nodes[self.prefix_len()..]
    }
}

/// Can the search move from `x` to `w` inside the component?
fn allowed(component: &ComplementComponent, pruned: &Graph, x: NodeId, w: NodeId) -> bool {
    w != ENDMARKER && component.contains(w) && !pruned.has_edge(x, w)
}

/// Maximal paths in the component supported by the indexed paths, canonicalized to the
/// smaller orientation, deduplicated and sorted.
///
/// Searches start from every border node and from the starts of indexed paths at internal
/// nodes. A search stops when it reaches a border node, and is reported if it started from a
/// border node or from the start of an indexed path. A search that cannot be extended is
/// reported if it has at least two nodes, or if it is an entire indexed path.
///
/// Paths that do not end at the border on both sides are extended using `reference` where
/// possible, up to the first border node reached.
pub fn maximal_paths<S: RecordSource + ?Sized>(
    component: &ComplementComponent,
    index: &S,
    pruned: &Graph,
    reference: Option<&dyn RecordSource>,
) -> Vec<MaximalPath> {
    let mut starts: Vec<(Path, SearchState, bool)> = Vec::new();
    let whole = index.find(&[]);
    for &base in &component.nodes {
        for v in [2 * base, 2 * base + 1] {
            if !index.has_record(v) {
                continue;
            }
            if component.border.contains(&base) {
                let state = index.find(&[v]);
                if !state.is_empty() {
                    starts.push((vec![v], state, false));
                }
            } else {
                let state = index.extend(&whole, v);
                if !state.is_empty() {
                    starts.push((vec![v], state, true));
                }
            }
        }
    }

    let mut found: Vec<Path> = Vec::new();
    let mut stack: Vec<(Path, SearchState, bool)> = starts.into_iter().rev().collect();
    while let Some((pattern, state, from_start)) = stack.pop() {
        let x = *pattern.last().unwrap();
        if pattern.len() >= 2 && component.is_border(x) {
            if component.is_border(pattern[0]) || from_start {
                found.push(pattern);
            }
            continue;
        }
        let Some(record) = index.record(x) else {
            continue;
        };
        let mut extended = Vec::new();
        for edge in record.edges.iter() {
            if !allowed(component, pruned, x, edge.node) {
                continue;
            }
            let next = index.extend(&state, edge.node);
            if !next.is_empty() {
                let mut longer = pattern.clone();
                longer.push(edge.node);
                extended.push((longer, next, from_start));
            }
        }
        if extended.is_empty() {
            if pattern.len() >= 2 || from_start {
                found.push(pattern);
            }
        } else {
            stack.extend(extended.into_iter().rev());
        }
    }

    let mut result: Vec<MaximalPath> = found
        .into_iter()
        .map(|p| {
            let path = MaximalPath::new(p, component);
            match (path.kind, reference) {
                (PathKind::BorderToBorder, _) | (_, None) => canonical_path(&path.nodes),
                (_, Some(reference)) => {
                    extend_with_reference(&path.nodes, component, pruned, reference)
                }
            }
        })
        .map(|p| MaximalPath::new(p, component))
        .collect();
    result.sort();
    result.dedup();
    result
}

/// Extends the smaller orientation of the path at non-border ends along reference paths.
/// The start can only be extended if the reference index is bidirectional.
fn extend_with_reference(
    path: &[NodeId],
    component: &ComplementComponent,
    pruned: &Graph,
    reference: &dyn RecordSource,
) -> Path {
    let mut path = canonical_path(path);
    if !component.is_border(*path.last().unwrap()) {
        path.extend(reference_extension(
            *path.last().unwrap(),
            component,
            pruned,
            reference,
        ));
    }
    if reference.is_bidirectional() && !component.is_border(path[0]) {
        let mut reversed = reverse_path(&path);
        reversed.extend(reference_extension(
            *reversed.last().unwrap(),
            component,
            pruned,
            reference,
        ));
        path = reverse_path(&reversed);
    }
    canonical_path(&path)
}

/// The first continuation from `v` along a reference path that reaches a border node,
/// in depth-first order over ascending successors. Empty if there is none.
fn reference_extension(
    v: NodeId,
    component: &ComplementComponent,
    pruned: &Graph,
    reference: &dyn RecordSource,
) -> Path {
    fn dfs(
        state: &SearchState,
        component: &ComplementComponent,
        pruned: &Graph,
        reference: &dyn RecordSource,
        visited: &mut BTreeSet<NodeId>,
        tail: &mut Path,
    ) -> bool {
        let x = state.node;
        let Some(record) = reference.record(x) else {
            return false;
        };
        for edge in record.edges.iter() {
            let w = edge.node;
            if !allowed(component, pruned, x, w)
                || !component.edges.contains(&(x, w))
                || visited.contains(&w)
            {
                continue;
            }
            let next = reference.extend(state, w);
            if next.is_empty() {
                continue;
            }
            tail.push(w);
            if component.is_border(w) {
                return true;
            }
            visited.insert(w);
            if dfs(&next, component, pruned, reference, visited, tail) {
                return true;
            }
            visited.remove(&w);
            tail.pop();
        }
        false
    }
    let state = reference.find(&[v]);
    let mut tail = Vec::new();
    let mut visited = BTreeSet::from([v]);
    if !state.is_empty()
        && dfs(
            &state,
            component,
            pruned,
            reference,
            &mut visited,
            &mut tail,
        )
    {
        tail
    } else {
        Vec::new()
    }
}

//-----------------------------------------------------------------------------

/// Hands out new original node identifiers for duplicates.
#[derive(Clone, Debug)]
pub struct IdAllocator {
    next: usize,
}

impl IdAllocator {
    /// Allocates identifiers starting from `first`.
    pub fn new(first: usize) -> Self {
        IdAllocator { next: first }
    }

    /// A duplicate of oriented node `v`, with the same orientation.
    pub fn duplicate(&mut self, v: NodeId) -> Result<NodeId> {
        let base = self.next;
        let id = base
            .checked_mul(2)
            .and_then(|x| x.checked_add(1))
            .ok_or(GbwtError::IdSpaceExhausted)?;
        self.next = base.checked_add(1).ok_or(GbwtError::IdSpaceExhausted)?;
        Ok(id - 1 + (v & 1))
    }

    pub fn next_id(&self) -> usize {
        self.next
    }
}

/// A trie edge with its label and the graph node used for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrieNode {
    pub label: NodeId,
    pub graph_node: NodeId,
    pub children: BTreeMap<NodeId, usize>,
}

/// A trie of node sequences. Node 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trie {
    pub nodes: Vec<TrieNode>,
}

impl Default for Trie {
    fn default() -> Self {
        Trie {
            nodes: vec![TrieNode {
                label: ENDMARKER,
                graph_node: ENDMARKER,
                children: BTreeMap::new(),
            }],
        }
    }
}

impl Trie {
    /// Number of edges in the trie.
    pub fn edge_count(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Inserts the sequence and returns the graph nodes along it. New trie edges get a new
    /// graph node: the original one for border nodes next to the root, a duplicate otherwise.
    /// Every new edge between two graph nodes is reported to `add_edge`.
    fn insert(
        &mut self,
        sequence: &[NodeId],
        component: &ComplementComponent,
        allocator: &mut IdAllocator,
        duplicates: &mut Vec<(usize, usize)>,
        mut add_edge: impl FnMut(NodeId, NodeId),
    ) -> Result<Vec<NodeId>> {
        let mut current = 0;
        let mut result = Vec::with_capacity(sequence.len());
        for &v in sequence {
            let child = match self.nodes[current].children.get(&v) {
                Some(&child) => child,
                None => {
                    let graph_node = if current == 0 && component.is_border(v) {
                        v
                    } else {
                        let id = allocator.duplicate(v)?;
                        duplicates.push((base_id(id), base_id(v)));
                        id
                    };
                    if current != 0 {
                        add_edge(self.nodes[current].graph_node, graph_node);
                    }
                    self.nodes.push(TrieNode {
                        label: v,
                        graph_node,
                        children: BTreeMap::new(),
                    });
                    let child = self.nodes.len() - 1;
                    self.nodes[current].children.insert(v, child);
                    child
                }
            };
            result.push(self.nodes[child].graph_node);
            current = child;
        }
        Ok(result)
    }
}

/// The rebuilt version of a component.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UnfoldedComponent {
    pub prefixes: Trie,
    /// Trie of the reversed suffixes.
    pub suffixes: Trie,
    /// `(duplicate, original)` pairs of original identifiers in allocation order.
    pub duplicates: Vec<(usize, usize)>,
    /// Edges inside the prefix and suffix tries.
    pub edges: Vec<(NodeId, NodeId)>,
    /// Edges from the end of a prefix to the start of the suffix.
    pub crossing: Vec<(NodeId, NodeId)>,
    /// Each maximal path spelled with the graph nodes.
    pub spelled: Vec<Path>,
}

/// Builds the tries for canonical, deduplicated paths.
pub fn build_unfolded(
    paths: &[MaximalPath],
    component: &ComplementComponent,
    allocator: &mut IdAllocator,
) -> Result<UnfoldedComponent> {
    let mut result = UnfoldedComponent::default();
    for path in paths {
        let mut edges = Vec::new();
        let prefix = result.prefixes.insert(
            path.prefix(),
            component,
            allocator,
            &mut result.duplicates,
            |u, v| edges.push((u, v)),
        )?;
        let reversed: Path = path.suffix().iter().rev().copied().collect();
        let mut suffix = result.suffixes.insert(
            &reversed,
            component,
            allocator,
            &mut result.duplicates,
            |u, v| edges.push((v, u)),
        )?;
        suffix.reverse();
        result.edges.extend(edges);
        if let (Some(&u), Some(&v)) = (prefix.last(), suffix.first()) {
            if !result.crossing.contains(&(u, v)) {
                result.crossing.push((u, v));
            }
        }
        let mut spelled = prefix;
        spelled.extend(suffix);
        result.spelled.push(spelled);
    }
    Ok(result)
}

//-----------------------------------------------------------------------------

/// Mapping from duplicate identifiers to the original identifiers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DuplicateMap {
    first: Option<usize>,
    map: BTreeMap<usize, usize>,
}

impl DuplicateMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, duplicate: usize, original: usize) {
        self.first = Some(self.first.map_or(duplicate, |f| f.min(duplicate)));
        self.map.insert(duplicate, original);
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Smallest duplicate identifier.
    pub fn first_duplicate(&self) -> Option<usize> {
        self.first
    }

    /// `(duplicate, original)` pairs in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.map.iter().map(|(&d, &o)| (d, o))
    }

    /// Original identifier for an original identifier. Identifiers below the first duplicate
    /// map to themselves.
    pub fn restore_base(&self, base: usize) -> Result<usize> {
        match self.map.get(&base) {
            Some(&original) => Ok(original),
            None if self.first.is_some_and(|f| base >= f) => Err(GbwtError::UnknownId(base)),
            None => Ok(base),
        }
    }

    /// Original oriented identifier for an oriented identifier.
    pub fn restore_id(&self, id: NodeId) -> Result<NodeId> {
        Ok(2 * self.restore_base(base_id(id))? + (id & 1))
    }

    /// Translates a path of oriented identifiers.
    pub fn restore_ids(&self, path: &[NodeId]) -> Result<Path> {
        path.iter().map(|&v| self.restore_id(v)).collect()
    }

    /// Writes `duplicate TAB original` lines in ascending order.
    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        let mut text = String::new();
        for (d, o) in self.iter() {
            writeln!(text, "{}\t{}", d, o).unwrap();
        }
        out.write_all(text.as_bytes())?;
        Ok(())
    }

    /// Reads the format written by [`DuplicateMap::write`].
    pub fn read<R: BufRead>(input: R) -> Result<Self> {
        let mut result = DuplicateMap::new();
        for (number, line) in input.lines().enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let parse = |s: Option<&str>| s.and_then(|x| x.parse::<usize>().ok());
            let mut fields = line.split('\t');
            match (parse(fields.next()), parse(fields.next()), fields.next()) {
                (Some(d), Some(o), None) => result.insert(d, o),
                _ => {
                    return Err(GbwtError::InvalidPath {
                        position: number + 1,
                        reason: format!("malformed mapping line {:?}", line),
                    })
                }
            }
        }
        Ok(result)
    }
}

//-----------------------------------------------------------------------------

/// Optional inputs for [`unfold`].
#[derive(Clone, Copy, Default)]
pub struct UnfoldOptions<'a> {
    /// Reference paths used for extending paths that stop inside a component.
    pub reference: Option<&'a dyn RecordSource>,
    /// Graph supplying labels for duplicated nodes.
    pub labels: Option<&'a Graph>,
}

/// Result of unfolding.
#[derive(Clone, Debug, Default)]
pub struct UnfoldResult {
    pub graph: Graph,
    pub mapping: DuplicateMap,
    pub components: Vec<ComplementComponent>,
    pub paths: Vec<Vec<MaximalPath>>,
    pub unfolded: Vec<UnfoldedComponent>,
}

impl UnfoldResult {
    pub fn path_count(&self) -> usize {
        self.paths.iter().map(Vec::len).sum()
    }
}

/// Adds the unfolded components to the pruned graph. Every node and edge is added in both
/// orientations.
pub fn apply_unfold(
    pruned: &Graph,
    unfolded: &[UnfoldedComponent],
    labels: Option<&Graph>,
) -> Result<(Graph, DuplicateMap)> {
    let mut graph = pruned.clone();
    let mut mapping = DuplicateMap::new();
    for component in unfolded {
        for &(duplicate, original) in &component.duplicates {
            graph.add_bidirected_node(duplicate)?;
            mapping.insert(duplicate, original);
            if let Some(label) = labels.and_then(|g| g.label(2 * original)) {
                graph.set_label(2 * duplicate, label);
            }
        }
        for &(u, v) in component.edges.iter().chain(component.crossing.iter()) {
            graph.add_bidirected_edge(u, v)?;
        }
    }
    Ok((graph, mapping))
}

/// Unfolds the regions of `index`'s induced graph missing from `pruned`. Duplicates get
/// consecutive identifiers after the largest original identifier in either graph, with
/// components processed in order of their smallest node.
pub fn unfold<S: RecordSource + ?Sized>(
    index: &S,
    pruned: &Graph,
    options: &UnfoldOptions<'_>,
) -> Result<UnfoldResult> {
    let induced = induced_graph(index)?;
    let components = complement_components(&induced, pruned);
    let largest = induced
        .base_nodes()
        .into_iter()
        .chain(pruned.base_nodes())
        .max()
        .unwrap_or(0);
    let mut allocator =
        IdAllocator::new(largest.checked_add(1).ok_or(GbwtError::IdSpaceExhausted)?);
    let mut paths = Vec::with_capacity(components.len());
    let mut unfolded = Vec::with_capacity(components.len());
    for component in &components {
        let found = maximal_paths(component, index, pruned, options.reference);
        unfolded.push(build_unfolded(&found, component, &mut allocator)?);
        paths.push(found);
    }
    let (graph, mapping) = apply_unfold(pruned, &unfolded, options.labels)?;
    Ok(UnfoldResult {
        graph,
        mapping,
        components,
        paths,
        unfolded,
    })
}

/// Checks that the pruned graph is a subgraph of the original graph and that every indexed
/// path is a path in the original graph.
pub fn check_inputs<S: RecordSource + ?Sized>(
    original: &Graph,
    pruned: &Graph,
    index: &S,
) -> Result<()> {
    if let Some(v) = pruned.nodes().find(|&v| !original.has_node(v)) {
        return Err(GbwtError::Inconsistent(format!(
            "pruned node {} is not in the original graph",
            v
        )));
    }
    if let Some((u, v)) = pruned.edges().find(|&(u, v)| !original.has_edge(u, v)) {
        return Err(GbwtError::Inconsistent(format!(
            "pruned edge ({}, {}) is not in the original graph",
            u, v
        )));
    }
    let induced = induced_graph(index)?;
    if let Some(v) = induced.nodes().find(|&v| !original.has_node(v)) {
        return Err(GbwtError::Inconsistent(format!(
            "indexed node {} is not in the original graph",
            v
        )));
    }
    if let Some((u, v)) = induced.edges().find(|&(u, v)| !original.has_edge(u, v)) {
        return Err(GbwtError::Inconsistent(format!(
            "indexed edge ({}, {}) is not in the original graph",
            u, v
        )));
    }
    Ok(())
}

//-----------------------------------------------------------------------------

/// Windows of length `k` of the texts that no path of `graph` spells after restoring the
/// original identifiers.
pub fn missing_kmers(
    texts: &[Path],
    graph: &Graph,
    mapping: &DuplicateMap,
    k: usize,
) -> Result<Vec<Path>> {
    let mut copies: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for v in graph.nodes() {
        copies.entry(mapping.restore_id(v)?).or_default().push(v);
    }
    let mut missing = Vec::new();
    let mut checked = BTreeSet::new();
    for text in texts {
        for window in text.windows(k) {
            if !checked.insert(window) {
                continue;
            }
            let mut current: BTreeSet<NodeId> = copies
                .get(&window[0])
                .into_iter()
                .flatten()
                .copied()
                .collect();
            for &next in &window[1..] {
                let mut reached = BTreeSet::new();
                for &u in &current {
                    for &w in graph.successors(u) {
                        if mapping.restore_id(w)? == next {
                            reached.insert(w);
                        }
                    }
                }
                current = reached;
                if current.is_empty() {
                    break;
                }
            }
            if current.is_empty() {
                missing.push(window.to_vec());
            }
        }
    }
    Ok(missing)
}

/// Distinct node sequences of length `k` spelled by paths in `graph` after restoring the
/// original identifiers. Returns `None` if the enumeration visits more than `limit` paths.
pub fn spelled_kmers(
    graph: &Graph,
    mapping: &DuplicateMap,
    k: usize,
    limit: usize,
) -> Result<Option<BTreeSet<Path>>> {
    let mut result = BTreeSet::new();
    let mut visited = 0;
    let mut stack: Vec<(NodeId, usize)> = graph.nodes().map(|v| (v, 1)).collect();
    let mut current: Path = Vec::with_capacity(k);
    let mut trail: Path = Vec::with_capacity(k);
    stack.reverse();
    while let Some((v, depth)) = stack.pop() {
        current.truncate(depth - 1);
        trail.truncate(depth - 1);
        current.push(mapping.restore_id(v)?);
        trail.push(v);
        if depth == k {
            visited += 1;
            if visited > limit {
                return Ok(None);
            }
            result.insert(current.clone());
            continue;
        }
        for &w in graph.successors(v).iter().rev() {
            stack.push((w, depth + 1));
        }
    }
    Ok(Some(result))
}

/// Graph with every original node and edge the unfolded graph could restore to: the pruned
/// graph plus the induced graph, closed under orientation.
pub fn restore_everything(pruned: &Graph, induced: &Graph) -> Result<Graph> {
    let mut graph = pruned.clone();
    for v in induced.nodes() {
        graph.add_bidirected_node(base_id(v))?;
    }
    for (u, v) in induced.edges() {
        graph.add_edge(u, v)?;
        graph.add_edge(flip(v), flip(u))?;
    }
    Ok(graph)
}

//-----------------------------------------------------------------------------
