//! Randomized checks of graph unfolding against path-scan and k-mer oracles.

use gbwt::model::{base_id, canonical_path, encode_oriented, flip, Orientation};
use gbwt::unfold::{
    induced_graph, missing_kmers, restore_everything, spelled_kmers, ComplementComponent,
};
use gbwt::{unfold, DuplicateMap, DynamicGbwt, Graph, NodeId, Path, UnfoldOptions};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Fixture {
    graph: Graph,
    pruned: Graph,
    paths: Vec<Path>,
}

fn oriented(rng: &mut StdRng, base: usize, reverse_probability: f64) -> NodeId {
    let o = if rng.gen_bool(reverse_probability) {
        Orientation::Reverse
    } else {
        Orientation::Forward
    };
    encode_oriented(base, o).unwrap()
}

fn fixture(rng: &mut StdRng) -> Fixture {
    let n = rng.gen_range(4..=30);
    let mut graph = Graph::new();
    for base in 1..=n {
        graph.add_bidirected_node(base).unwrap();
    }
    for base in 1..=n {
        for _ in 0..rng.gen_range(1..=2) {
            let target = if rng.gen_bool(0.8) {
                (base + rng.gen_range(1..=3)).min(n)
            } else {
                rng.gen_range(1..=n)
            };
            let from = oriented(rng, base, 0.1);
            let to = oriented(rng, target, 0.1);
            graph.add_bidirected_edge(from, to).unwrap();
        }
    }
    let mut paths = Vec::new();
    for _ in 0..rng.gen_range(1..=8) {
        let len = rng.gen_range(1..=25);
        let start = rng.gen_range(1..=n);
        let mut v = oriented(rng, start, 0.2);
        let mut path = vec![v];
        while path.len() < len && !graph.successors(v).is_empty() {
            let succ = graph.successors(v);
            v = succ[rng.gen_range(0..succ.len())];
            path.push(v);
        }
        paths.push(path);
    }
    let mut pruned = graph.clone();
    for base in 1..=n {
        if rng.gen_bool(0.3) {
            pruned.remove_node(2 * base);
            pruned.remove_node(2 * base + 1);
        }
    }
    let edges: Vec<(NodeId, NodeId)> = pruned.edges().collect();
    for (u, v) in edges {
        if rng.gen_bool(0.1) {
            remove_edge(&mut pruned, u, v);
            remove_edge(&mut pruned, flip(v), flip(u));
        }
    }
    Fixture {
        graph,
        pruned,
        paths,
    }
}

fn remove_edge(graph: &mut Graph, u: NodeId, v: NodeId) {
    let mut rebuilt = Graph::new();
    for w in graph.nodes() {
        rebuilt.add_node(w).unwrap();
    }
    for (a, b) in graph.edges().filter(|&e| e != (u, v)) {
        rebuilt.add_edge(a, b).unwrap();
    }
    *graph = rebuilt;
}

#[test]
fn unfolded_graphs_keep_all_haplotype_kmers() {
    let mut rng = StdRng::seed_from_u64(0xf01d);
    let mut duplicates = 0;
    for trial in 0..60 {
        let f = fixture(&mut rng);
        let index = DynamicGbwt::from_paths(&f.paths, 1024, false).unwrap();
        gbwt::unfold::check_inputs(&f.graph, &f.pruned, &index).unwrap();
        let result = unfold(&index, &f.pruned, &UnfoldOptions::default()).unwrap();
        assert!(result.graph.is_orientation_closed(), "trial {}", trial);
        duplicates += result.mapping.len();
        for k in [2, 4, 8, 16] {
            let missing = missing_kmers(&f.paths, &result.graph, &result.mapping, k).unwrap();
            assert!(
                missing.is_empty(),
                "trial {} k {}: missing {:?}",
                trial,
                k,
                missing
            );
        }

        // Every restored path is a path in the graph with everything restored.
        let baseline = restore_everything(&f.pruned, &induced_graph(&index).unwrap()).unwrap();
        for (u, v) in result.graph.edges() {
            let (a, b) = (
                result.mapping.restore_id(u).unwrap(),
                result.mapping.restore_id(v).unwrap(),
            );
            assert!(
                baseline.has_edge(a, b),
                "trial {}: edge ({}, {}) restores to ({}, {})",
                trial,
                u,
                v,
                a,
                b
            );
        }
        if let (Some(unfolded), Some(all)) = (
            spelled_kmers(&result.graph, &result.mapping, 4, 200_000).unwrap(),
            spelled_kmers(&baseline, &DuplicateMap::new(), 4, 200_000).unwrap(),
        ) {
            assert!(unfolded.is_subset(&all), "trial {}", trial);
        }

        // Restored paths are valid in the original graph.
        for spelled in result.unfolded.iter().flat_map(|u| u.spelled.iter()) {
            let restored = result.mapping.restore_ids(spelled).unwrap();
            assert!(
                f.graph.path_is_valid(&restored),
                "trial {}: {:?}",
                trial,
                restored
            );
        }
        // No maximal path appears in both orientations.
        for paths in &result.paths {
            for p in paths {
                let reverse = gbwt::model::reverse_path(&p.nodes);
                assert!(reverse == p.nodes || !paths.iter().any(|q| q.nodes == reverse));
            }
        }
    }
    assert!(
        duplicates > 100,
        "fixtures too easy: {} duplicates",
        duplicates
    );
}

#[test]
fn maximal_paths_match_path_scan() {
    let mut rng = StdRng::seed_from_u64(0xabc);
    for trial in 0..60 {
        let f = fixture(&mut rng);
        let index = DynamicGbwt::from_paths(&f.paths, 1024, false).unwrap();
        let result = unfold(&index, &f.pruned, &UnfoldOptions::default()).unwrap();
        for (component, found) in result.components.iter().zip(result.paths.iter()) {
            let expected = scan_maximal_paths(&f.paths, component, &f.pruned);
            let found: Vec<Path> = found.iter().map(|p| p.nodes.clone()).collect();
            assert_eq!(found, expected, "trial {}", trial);
        }
    }
}

/// Maximal paths by scanning the texts. From every occurrence of a border node, and from
/// every text starting at an internal node, follow the text along complement edges of the
/// component until it reaches a border node or leaves. Walks ending at a border node are
/// maximal. Other walks are maximal unless they are a proper prefix of another walk with the
/// same kind of start, and need two nodes unless they start a text.
fn scan_maximal_paths(
    texts: &[Path],
    component: &ComplementComponent,
    pruned: &Graph,
) -> Vec<Path> {
    let step = |u: NodeId, v: NodeId| component.contains(v) && !pruned.has_edge(u, v);
    let border = |v: NodeId| component.border.contains(&base_id(v));
    // (walk, starts a text at an internal node)
    let mut walks: Vec<(Path, bool)> = Vec::new();
    for text in texts {
        for s in 0..text.len() {
            let text_start = !border(text[s]);
            if !component.contains(text[s]) || (text_start && s > 0) {
                continue;
            }
            let mut e = s;
            while e + 1 < text.len() && step(text[e], text[e + 1]) {
                e += 1;
                if border(text[e]) {
                    break;
                }
            }
            walks.push((text[s..=e].to_vec(), text_start));
        }
    }
    let mut result: Vec<Path> = walks
        .iter()
        .filter(|(walk, text_start)| {
            let last = *walk.last().unwrap();
            if walk.len() >= 2 && border(last) {
                return true;
            }
            let extended = walks.iter().any(|(other, t)| {
                t == text_start && other.len() > walk.len() && other.starts_with(walk)
            });
            !extended && (walk.len() >= 2 || *text_start)
        })
        .map(|(walk, _)| canonical_path(walk))
        .collect();
    result.sort();
    result.dedup();
    result
}
