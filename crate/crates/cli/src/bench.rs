//! Query benchmarks over a synthetic bubble graph.
//!
//! A scenario is a TOML file:
//!
//! ```toml
//! haplotypes = 1000
//! sites = 10000
//! divergence = 0.001
//! seed = 42
//! sample_rate = 1024
//! pattern_lengths = [2, 20, 50]
//! queries = 1000
//! extract = 100
//! runs = 5
//! ```
//!
//! Each measurement is the median over `runs` repetitions.

use crate::fixtures::{bubble_graph, BubbleParams};

use gbwt::{CompressedGbwt, DynamicGbwt, Path, Search, SearchState};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Deserialize;

use std::fmt::Write as _;
use std::time::{Duration, Instant};

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub haplotypes: usize,
    pub sites: usize,
    pub divergence: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_sample_rate")]
    pub sample_rate: usize,
    #[serde(default)]
    pub pattern_lengths: Vec<usize>,
    #[serde(default)]
    pub queries: usize,
    #[serde(default)]
    pub extract: usize,
    #[serde(default = "default_runs")]
    pub runs: usize,
}

fn default_sample_rate() -> usize {
    gbwt::DEFAULT_SAMPLE_RATE
}

fn default_runs() -> usize {
    5
}

/// Timing for one pattern length.
#[derive(Clone, Debug, PartialEq)]
pub struct PatternMetrics {
    pub length: usize,
    pub patterns: usize,
    pub positions: usize,
    pub find_ns_per_char: f64,
    pub locate_direct: Duration,
    pub locate_fast: Duration,
}

impl PatternMetrics {
    fn per_position(&self, total: Duration) -> f64 {
        if self.positions == 0 {
            0.0
        } else {
            total.as_secs_f64() * 1e6 / self.positions as f64
        }
    }

    pub fn locate_direct_us_per_position(&self) -> f64 {
        self.per_position(self.locate_direct)
    }

    pub fn locate_fast_us_per_position(&self) -> f64 {
        self.per_position(self.locate_fast)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub characters: usize,
    pub build_time: Duration,
    pub bits_per_character: f64,
    pub patterns: Vec<PatternMetrics>,
    pub extract_ns_per_char: Option<f64>,
}

impl Report {
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "characters\t{}", self.characters).unwrap();
        writeln!(out, "build_s\t{:.3}", self.build_time.as_secs_f64()).unwrap();
        writeln!(out, "body_bits_per_char\t{:.6}", self.bits_per_character).unwrap();
        for p in &self.patterns {
            writeln!(
                out,
                "find\tlength={}\tpatterns={}\tns_per_char={:.1}",
                p.length, p.patterns, p.find_ns_per_char
            )
            .unwrap();
            writeln!(
                out,
                "locate\tlength={}\tpositions={}\tdirect_us_per_position={:.3}\tfast_us_per_position={:.3}",
                p.length,
                p.positions,
                p.locate_direct_us_per_position(),
                p.locate_fast_us_per_position()
            )
            .unwrap();
        }
        if let Some(ns) = self.extract_ns_per_char {
            writeln!(out, "extract\tns_per_char={:.1}", ns).unwrap();
        }
        out
    }
}

/// Median of `runs` timings of `f`.
pub fn median_time<F: FnMut()>(runs: usize, mut f: F) -> Duration {
    let mut times: Vec<Duration> = (0..runs.max(1))
        .map(|_| {
            let start = Instant::now();
            f();
            start.elapsed()
        })
        .collect();
    times.sort();
    times[times.len() / 2]
}

/// Patterns of the given length drawn uniformly from windows of the paths.
pub fn sample_patterns(paths: &[Path], length: usize, count: usize, rng: &mut StdRng) -> Vec<Path> {
    let candidates: Vec<&Path> = paths.iter().filter(|p| p.len() >= length).collect();
    if candidates.is_empty() || length == 0 {
        return Vec::new();
    }
    (0..count)
        .map(|_| {
            let path = candidates[rng.gen_range(0..candidates.len())];
            let start = rng.gen_range(0..=path.len() - length);
            path[start..start + length].to_vec()
        })
        .collect()
}

/// Total time of each locate algorithm over the states.
pub fn time_locate(
    index: &CompressedGbwt,
    states: &[SearchState],
    runs: usize,
) -> (Duration, Duration) {
    let direct = median_time(runs, || {
        for state in states {
            std::hint::black_box(index.locate_direct(state));
        }
    });
    let fast = median_time(runs, || {
        for state in states {
            std::hint::black_box(index.locate_fast(state));
        }
    });
    (direct, fast)
}

pub fn run(scenario: &Scenario) -> gbwt::Result<Report> {
    let params = BubbleParams {
        haplotypes: scenario.haplotypes,
        sites: scenario.sites,
        divergence: scenario.divergence,
        seed: scenario.seed,
    };
    let file = bubble_graph(&params);
    let paths = file.path_list();
    let start = Instant::now();
    let index = CompressedGbwt::from(&DynamicGbwt::from_paths(
        &paths,
        scenario.sample_rate,
        false,
    )?);
    let build_time = start.elapsed();
    let characters: usize = paths.iter().map(Vec::len).sum();

    let mut rng = StdRng::seed_from_u64(scenario.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut patterns = Vec::new();
    for &length in &scenario.pattern_lengths {
        let sample = sample_patterns(&paths, length, scenario.queries, &mut rng);
        if sample.is_empty() {
            continue;
        }
        let find = median_time(scenario.runs, || {
            for pattern in &sample {
                std::hint::black_box(index.find(pattern));
            }
        });
        let states: Vec<SearchState> = sample.iter().map(|p| index.find(p)).collect();
        let positions = states.iter().map(SearchState::len).sum();
        let (locate_direct, locate_fast) = time_locate(&index, &states, scenario.runs);
        patterns.push(PatternMetrics {
            length,
            patterns: sample.len(),
            positions,
            find_ns_per_char: find.as_nanos() as f64 / (sample.len() * length) as f64,
            locate_direct,
            locate_fast,
        });
    }

    let extract_ns_per_char = (scenario.extract > 0 && !paths.is_empty()).then(|| {
        let ids: Vec<usize> = (0..scenario.extract)
            .map(|_| rng.gen_range(0..paths.len()))
            .collect();
        let chars: usize = ids.iter().map(|&i| paths[i].len()).sum();
        let time = median_time(scenario.runs, || {
            for &id in &ids {
                std::hint::black_box(index.extract(id).unwrap());
            }
        });
        time.as_nanos() as f64 / chars.max(1) as f64
    });

    Ok(Report {
        characters,
        build_time,
        bits_per_character: index.bits_per_character(),
        patterns,
        extract_ns_per_char,
    })
}
