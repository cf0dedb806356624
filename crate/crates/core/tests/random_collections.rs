//! Randomized comparisons of the index against the brute-force reference.

use gbwt::oracle::{self, NaiveIndex};
use gbwt::{CompressedGbwt, DynamicGbwt, NodeId, Path, RecordSource, Search};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Random walks over a random directed graph on nodes `first..first + n`, with some
/// repeated texts.
fn random_collection(rng: &mut StdRng, first: NodeId, n: usize) -> Vec<Path> {
    let successors: Vec<Vec<NodeId>> = (0..n)
        .map(|_| {
            (0..rng.gen_range(1..=3))
                .map(|_| first + rng.gen_range(0..n))
                .collect()
        })
        .collect();
    let count = rng.gen_range(1..=12);
    let mut texts: Vec<Path> = Vec::new();
    for _ in 0..count {
        if !texts.is_empty() && rng.gen_bool(0.15) {
            texts.push(texts[rng.gen_range(0..texts.len())].clone());
            continue;
        }
        let len = rng.gen_range(1..=20);
        let mut v = first + rng.gen_range(0..n);
        let mut text = vec![v];
        while text.len() < len {
            let succ = &successors[v - first];
            v = succ[rng.gen_range(0..succ.len())];
            text.push(v);
        }
        texts.push(text);
    }
    texts
}

fn patterns(texts: &[Path]) -> Vec<Path> {
    let mut result: Vec<Path> = (1..=3).flat_map(|k| oracle::fragments(texts, k)).collect();
    result.push(vec![10_000]);
    result.push(vec![texts[0][0], 10_000]);
    result
}

fn check_queries<S: RecordSource + ?Sized>(index: &S, texts: &[Path]) {
    for pattern in patterns(texts) {
        let state = index.find(&pattern);
        assert_eq!(
            state.len(),
            oracle::count(texts, &pattern),
            "find {:?}",
            pattern
        );
        let expected = oracle::locate(texts, &pattern);
        assert_eq!(
            index.locate_direct(&state),
            expected,
            "locate_direct {:?}",
            pattern
        );
        assert_eq!(
            index.locate_fast(&state),
            expected,
            "locate_fast {:?}",
            pattern
        );
    }
    for (id, text) in texts.iter().enumerate() {
        assert_eq!(&index.extract(id).unwrap(), text);
    }
}

#[test]
fn index_matches_reference() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for trial in 0..60 {
        let n = rng.gen_range(1..=25);
        let texts = random_collection(&mut rng, 1, n);
        let d = [1, 2, 3, 1024][trial % 4];
        let index = DynamicGbwt::from_paths(&texts, d, false).unwrap();
        index.check_invariants().unwrap();
        oracle::check_index(&index, &texts).unwrap();
        let compressed = CompressedGbwt::from(&index);
        oracle::check_index(&compressed, &texts).unwrap();
        check_queries(&index, &texts);
        check_queries(&compressed, &texts);
    }
}

#[test]
fn batches_do_not_matter() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..40 {
        let n = rng.gen_range(1..=25);
        let texts = random_collection(&mut rng, 1, n);
        let joint = DynamicGbwt::from_paths(&texts, 2, false).unwrap();
        let mut single = DynamicGbwt::new(2, false);
        for text in &texts {
            single.insert(text).unwrap();
        }
        let mut chunked = DynamicGbwt::new(2, false);
        for chunk in texts.chunks(3) {
            chunked.insert_batch(chunk).unwrap();
        }
        assert_eq!(joint.freeze().to_bytes(), single.freeze().to_bytes());
        assert_eq!(joint.freeze().to_bytes(), chunked.freeze().to_bytes());
    }
}

#[test]
fn merge_matches_joint_construction() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..40 {
        let left = random_collection(&mut rng, 1, 20);
        let right = random_collection(&mut rng, 21, 20);
        let merged = DynamicGbwt::from_paths(&left, 4, false)
            .unwrap()
            .merge(&DynamicGbwt::from_paths(&right, 4, false).unwrap().freeze())
            .unwrap();
        merged.check_invariants().unwrap();
        let all: Vec<Path> = left.iter().chain(right.iter()).cloned().collect();
        oracle::check_index(&merged, &all).unwrap();
        assert_eq!(
            merged.freeze().to_bytes(),
            DynamicGbwt::from_paths(&all, 4, false)
                .unwrap()
                .freeze()
                .to_bytes()
        );
    }
}

#[test]
fn serialization_round_trip() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..30 {
        let first = rng.gen_range(1..100);
        let texts = random_collection(&mut rng, first, 30);
        let index = DynamicGbwt::from_paths(&texts, 3, false).unwrap().freeze();
        let bytes = index.to_bytes();
        let loaded = CompressedGbwt::deserialize(&mut bytes.as_slice()).unwrap();
        assert_eq!(loaded, index);
        assert_eq!(loaded.to_bytes(), bytes);
        check_queries(&loaded, &texts);
    }
}

#[test]
fn corrupted_files_are_rejected() {
    let texts = vec![vec![1, 2, 4, 6, 7], vec![1, 2, 5, 7], vec![1, 3, 4, 5, 7]];
    let bytes = DynamicGbwt::from_paths(&texts, 1, false)
        .unwrap()
        .freeze()
        .to_bytes();
    let mut rejected = 0;
    for i in 0..bytes.len() {
        for bit in 0..8 {
            let mut copy = bytes.clone();
            copy[i] ^= 1 << bit;
            match CompressedGbwt::deserialize(&mut copy.as_slice()) {
                Err(_) => rejected += 1,
                // A flip that survives loading must change the described collection.
                Ok(index) => assert!(
                    oracle::check_index(&index, &texts).is_err(),
                    "byte {} bit {}",
                    i,
                    bit
                ),
            }
        }
    }
    assert!(
        rejected > bytes.len() * 4,
        "only {} of {} flips rejected",
        rejected,
        bytes.len() * 8
    );
}

#[test]
fn bidirectional_collection() {
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..20 {
        // Oriented identifiers: even and odd ids are the two orientations of one node.
        let texts: Vec<Path> = random_collection(&mut rng, 2, 30);
        let index = DynamicGbwt::from_paths(&texts, 2, true).unwrap();
        let doubled: Vec<Path> = texts
            .iter()
            .flat_map(|t| [t.clone(), gbwt::model::reverse_path(t)])
            .collect();
        oracle::check_index(&index, &doubled).unwrap();
        let naive = NaiveIndex::new(&doubled);
        for pattern in patterns(&texts) {
            let state = index.bd_find(&pattern).unwrap();
            assert_eq!(state.len(), oracle::count(&doubled, &pattern));
            if state.is_empty() {
                continue;
            }
            for &v in naive.records.keys().filter(|&&v| v != 0) {
                let mut forward = pattern.clone();
                forward.push(v);
                let extended = index
                    .bd_extend(&state, v, gbwt::Direction::Forward)
                    .unwrap();
                assert_eq!(
                    extended,
                    index.bd_find(&forward).unwrap(),
                    "{:?} + {}",
                    pattern,
                    v
                );
                let mut backward = vec![v];
                backward.extend_from_slice(&pattern);
                let extended = index
                    .bd_extend(&state, v, gbwt::Direction::Backward)
                    .unwrap();
                assert_eq!(
                    extended,
                    index.bd_find(&backward).unwrap(),
                    "{} + {:?}",
                    v,
                    pattern
                );
            }
        }
    }
}
