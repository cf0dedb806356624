//! Seeded generators for synthetic inputs: biallelic bubble graphs for benchmarks, and small
//! random collections and pruning scenarios for randomized testing.

use crate::graph_file::GraphFile;

use gbwt::model::{encode_oriented, flip, Orientation};
use gbwt::{Graph, NodeId, Path};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn fwd(base: usize) -> NodeId {
    encode_oriented(base, Orientation::Forward).unwrap()
}

/// Parameters of a biallelic bubble graph.
#[derive(Clone, Debug, PartialEq)]
pub struct BubbleParams {
    pub haplotypes: usize,
    pub sites: usize,
    /// Probability that a haplotype takes the alternate allele at a site.
    pub divergence: f64,
    pub seed: u64,
}

/// A chain of `sites` bubbles. Site `i` has anchor `3i + 1` followed by the reference allele
/// `3i + 2` and the alternate allele `3i + 3`; the final anchor closes the chain. Every
/// haplotype walks the whole chain.
pub fn bubble_graph(params: &BubbleParams) -> GraphFile {
    let mut graph = Graph::new();
    let anchor = |i: usize| 3 * i + 1;
    for i in 0..=params.sites {
        graph.add_bidirected_node(anchor(i)).unwrap();
        if i < params.sites {
            for allele in [anchor(i) + 1, anchor(i) + 2] {
                graph
                    .add_bidirected_edge(fwd(anchor(i)), fwd(allele))
                    .unwrap();
                graph
                    .add_bidirected_edge(fwd(allele), fwd(anchor(i + 1)))
                    .unwrap();
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(params.seed);
    let mut paths = Vec::with_capacity(params.haplotypes);
    for h in 0..params.haplotypes {
        let mut path = Vec::with_capacity(2 * params.sites + 1);
        for i in 0..params.sites {
            path.push(fwd(anchor(i)));
            let alt = rng.gen_bool(params.divergence);
            path.push(fwd(anchor(i) + if alt { 2 } else { 1 }));
        }
        path.push(fwd(anchor(params.sites)));
        paths.push((format!("h{}", h), path));
    }
    GraphFile { graph, paths }
}

//-----------------------------------------------------------------------------

/// Random walks over a random directed graph on `first..first + nodes`. With `cyclic`
/// unset, edges only go to larger ids. Some texts repeat earlier ones.
pub fn random_collection(
    rng: &mut StdRng,
    first: NodeId,
    nodes: usize,
    max_paths: usize,
    max_len: usize,
    cyclic: bool,
) -> Vec<Path> {
    let successors: Vec<Vec<NodeId>> = (0..nodes)
        .map(|i| {
            let degree = rng.gen_range(1..=3);
            (0..degree)
                .filter_map(|_| {
                    if cyclic {
                        Some(first + rng.gen_range(0..nodes))
                    } else {
                        (i + 1 < nodes).then(|| first + rng.gen_range(i + 1..nodes.min(i + 6)))
                    }
                })
                .collect()
        })
        .collect();
    let count = rng.gen_range(1..=max_paths);
    let mut texts: Vec<Path> = Vec::with_capacity(count);
    for _ in 0..count {
        if !texts.is_empty() && rng.gen_bool(0.1) {
            let copy = texts[rng.gen_range(0..texts.len())].clone();
            texts.push(copy);
            continue;
        }
        let len = rng.gen_range(1..=max_len);
        let mut v = first + rng.gen_range(0..nodes);
        let mut text = vec![v];
        while text.len() < len {
            let succ = &successors[v - first];
            if succ.is_empty() {
                break;
            }
            v = succ[rng.gen_range(0..succ.len())];
            text.push(v);
        }
        texts.push(text);
    }
    texts
}

/// A graph, haplotype paths in it, and a pruned subgraph.
#[derive(Clone, Debug)]
pub struct PruningFixture {
    pub graph: Graph,
    pub paths: Vec<Path>,
    pub pruned: Graph,
}

fn random_oriented(rng: &mut StdRng, base: usize, reverse: f64) -> NodeId {
    let o = if rng.gen_bool(reverse) {
        Orientation::Reverse
    } else {
        Orientation::Forward
    };
    encode_oriented(base, o).unwrap()
}

/// A random bidirected graph that is mostly a chain of bubbles with some inversions and
/// back edges, random walks as haplotypes, and a pruned copy with about 30% of the nodes
/// and 10% of the remaining edges removed.
pub fn pruning_fixture(
    rng: &mut StdRng,
    nodes: usize,
    haplotypes: usize,
    max_len: usize,
) -> PruningFixture {
    let mut graph = Graph::new();
    for base in 1..=nodes {
        graph.add_bidirected_node(base).unwrap();
    }
    for base in 1..=nodes {
        for _ in 0..rng.gen_range(1..=2) {
            let target = if rng.gen_bool(0.85) {
                (base + rng.gen_range(1..=3)).min(nodes)
            } else {
                rng.gen_range(1..=nodes)
            };
            let from = random_oriented(rng, base, 0.05);
            let to = random_oriented(rng, target, 0.05);
            graph.add_bidirected_edge(from, to).unwrap();
        }
    }
    let mut paths = Vec::with_capacity(haplotypes);
    for _ in 0..haplotypes {
        let len = rng.gen_range(1..=max_len);
        let start = rng.gen_range(1..=nodes);
        let mut v = random_oriented(rng, start, 0.2);
        let mut path = vec![v];
        while path.len() < len && !graph.successors(v).is_empty() {
            let succ = graph.successors(v);
            v = succ[rng.gen_range(0..succ.len())];
            path.push(v);
        }
        paths.push(path);
    }
    let mut keep = Graph::new();
    let removed: Vec<bool> = (0..=nodes).map(|_| rng.gen_bool(0.3)).collect();
    for v in graph.nodes().filter(|&v| !removed[v / 2]) {
        keep.add_node(v).unwrap();
    }
    for (u, v) in graph.edges() {
        if removed[u / 2] || removed[v / 2] || keep.has_edge(u, v) {
            continue;
        }
        if !rng.gen_bool(0.1) {
            keep.add_edge(u, v).unwrap();
            keep.add_edge(flip(v), flip(u)).unwrap();
        }
    }
    PruningFixture {
        graph,
        paths,
        pruned: keep,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bubble_graph_shape() {
        let params = BubbleParams {
            haplotypes: 5,
            sites: 10,
            divergence: 0.5,
            seed: 1,
        };
        let file = bubble_graph(&params);
        assert_eq!(file.graph.base_nodes().len(), 31);
        assert_eq!(file.paths.len(), 5);
        for (_, path) in &file.paths {
            assert_eq!(path.len(), 21);
            assert!(file.graph.path_is_valid(path));
        }
        assert_eq!(bubble_graph(&params), file);
    }

    #[test]
    fn fixtures_are_valid() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..20 {
            let f = pruning_fixture(&mut rng, 30, 6, 30);
            assert!(f.graph.is_orientation_closed());
            assert!(f.pruned.is_orientation_closed());
            for path in &f.paths {
                assert!(f.graph.path_is_valid(path));
            }
            assert!(f.pruned.edges().all(|(u, v)| f.graph.has_edge(u, v)));
            let texts = random_collection(&mut rng, 1, 50, 10, 20, false);
            assert!(texts.iter().all(|t| t.windows(2).all(|w| w[0] < w[1])));
        }
    }
}
