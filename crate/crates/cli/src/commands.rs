//! Command implementations. Each command returns its standard output and a manifest, or a
//! [`CliError`] that determines the exit code.

use crate::bench::{self, Scenario};
use crate::graph_file::{describe_defect, format_path, parse_step, GraphFile};
use crate::manifest::Manifest;

use gbwt::model::{base_id, reverse_path};
use gbwt::unfold::{check_inputs, UnfoldOptions};
use gbwt::{
    oracle, CompressedGbwt, DuplicateMap, DynamicGbwt, GbwtError, NodeId, Path, RecordSource,
    Search,
};

use std::fmt::{self, Write as _};
use std::path::{Path as FsPath, PathBuf};
use std::sync::mpsc;

//-----------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Parse(String),
    MergeConflict(String),
    Inconsistent(String),
    VerificationFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::MergeConflict(_) => 3,
            CliError::Inconsistent(_) => 4,
            CliError::VerificationFailed(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m)
            | CliError::Parse(m)
            | CliError::MergeConflict(m)
            | CliError::Inconsistent(m) => f.write_str(m),
            CliError::VerificationFailed(m) => write!(f, "verification failed\n{}", m),
        }
    }
}

impl std::error::Error for CliError {}

pub type CliResult<T> = Result<T, CliError>;

/// What a command produced.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub manifest: Manifest,
    /// Default manifest location, next to the main output file.
    pub manifest_path: Option<PathBuf>,
}

fn read(path: &FsPath) -> CliResult<Vec<u8>> {
    std::fs::read(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {}", path.display(), e)))
}

fn write(path: &FsPath, bytes: &[u8]) -> CliResult<()> {
    std::fs::write(path, bytes)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {}", path.display(), e)))
}

fn manifest_path(output: &FsPath) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest");
    PathBuf::from(name)
}

fn load_graph(path: &FsPath, manifest: &mut Manifest, role: &str) -> CliResult<GraphFile> {
    let bytes = read(path)?;
    manifest.input(role, path, &bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::Parse(format!("{}: not valid UTF-8", path.display())))?;
    GraphFile::parse(&text).map_err(|e| CliError::Parse(format!("{}: {}", path.display(), e)))
}

fn load_index(path: &FsPath, manifest: &mut Manifest, role: &str) -> CliResult<CompressedGbwt> {
    let bytes = read(path)?;
    manifest.input(role, path, &bytes);
    CompressedGbwt::deserialize(&mut bytes.as_slice())
        .map_err(|e| CliError::Parse(format!("{}: {}", path.display(), e)))
}

//-----------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub sample_rate: usize,
    /// Characters buffered before a batch is inserted.
    pub batch_size: usize,
    pub bidirectional: bool,
    /// With 2 or more, one thread groups paths into batches while another inserts them.
    pub threads: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            sample_rate: gbwt::DEFAULT_SAMPLE_RATE,
            batch_size: 100_000_000,
            bidirectional: false,
            threads: 2,
        }
    }
}

/// Splits the paths into consecutive batches of at least `batch_size` characters, except
/// possibly the last one. A reverse path counts towards the batch in a bidirectional build.
pub fn batches(paths: &[Path], batch_size: usize, bidirectional: bool) -> Vec<&[Path]> {
    let mut result = Vec::new();
    let mut start = 0;
    let mut buffered = 0;
    for (i, path) in paths.iter().enumerate() {
        buffered += path.len() * if bidirectional { 2 } else { 1 };
        if buffered >= batch_size.max(1) {
            result.push(&paths[start..=i]);
            start = i + 1;
            buffered = 0;
        }
    }
    if start < paths.len() {
        result.push(&paths[start..]);
    }
    result
}

/// Builds the index batch by batch. The result does not depend on the batch size or the
/// number of threads.
pub fn build_index(paths: &[Path], options: &BuildOptions) -> gbwt::Result<DynamicGbwt> {
    let mut index = DynamicGbwt::new(options.sample_rate, options.bidirectional);
    if options.threads < 2 {
        for batch in batches(paths, options.batch_size, options.bidirectional) {
            index.insert_batch(batch)?;
        }
        return Ok(index);
    }
    let (sender, receiver) = mpsc::sync_channel::<Vec<Path>>(1);
    std::thread::scope(|scope| {
        scope.spawn(move || {
            for batch in batches(paths, options.batch_size, options.bidirectional) {
                if sender.send(batch.to_vec()).is_err() {
                    break;
                }
            }
        });
        for batch in receiver {
            index.insert_batch(&batch)?;
        }
        Ok::<(), GbwtError>(())
    })?;
    Ok(index)
}

pub fn build(graph: &FsPath, output: &FsPath, options: &BuildOptions) -> CliResult<Outcome> {
    if options.sample_rate == 0 {
        return Err(CliError::Usage("--sample-rate must be positive".into()));
    }
    let mut manifest = Manifest::new("build");
    let file = load_graph(graph, &mut manifest, "graph")?;
    manifest.add("sample_rate", options.sample_rate);
    manifest.add("batch_size", options.batch_size);
    manifest.add("bidirectional", options.bidirectional);
    manifest.add("threads", options.threads);
    let index =
        build_index(&file.path_list(), options).map_err(|e| CliError::Parse(e.to_string()))?;
    let bytes = index.freeze().to_bytes();
    write(output, &bytes)?;
    manifest.output("index", output, &bytes);
    manifest.add("sequences", index.sequences());
    manifest.add("size", index.size());
    Ok(Outcome {
        stdout: String::new(),
        manifest,
        manifest_path: Some(manifest_path(output)),
    })
}

//-----------------------------------------------------------------------------

pub fn merge(inputs: &[PathBuf], output: &FsPath) -> CliResult<Outcome> {
    if inputs.is_empty() {
        return Err(CliError::Usage("merge needs at least one input".into()));
    }
    let mut manifest = Manifest::new("merge");
    let indexes: Vec<CompressedGbwt> = inputs
        .iter()
        .enumerate()
        .map(|(i, p)| load_index(p, &mut manifest, &format!("index{}", i)))
        .collect::<CliResult<_>>()?;
    for i in 0..indexes.len() {
        for j in i + 1..indexes.len() {
            if let (Some(a), Some(b)) = (indexes[i].node_range(), indexes[j].node_range()) {
                if a.0 <= b.1 && b.0 <= a.1 {
                    return Err(CliError::MergeConflict(format!(
                        "{} (nodes {}..={}) and {} (nodes {}..={}) overlap",
                        inputs[i].display(),
                        base_id(a.0),
                        base_id(a.1),
                        inputs[j].display(),
                        base_id(b.0),
                        base_id(b.1)
                    )));
                }
            }
        }
    }
    let first = &indexes[0];
    let mut merged = DynamicGbwt::new(first.sample_rate(), first.is_bidirectional());
    let mut shift = 0;
    for (i, index) in indexes.iter().enumerate() {
        manifest.add(&format!("shift.index{}", i), shift);
        shift += index.sequences();
        merged = merged
            .merge(index)
            .map_err(|e| CliError::MergeConflict(e.to_string()))?;
    }
    let bytes = merged.freeze().to_bytes();
    write(output, &bytes)?;
    manifest.output("index", output, &bytes);
    manifest.add("sequences", merged.sequences());
    Ok(Outcome {
        stdout: String::new(),
        manifest,
        manifest_path: Some(manifest_path(output)),
    })
}

//-----------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    Find(Vec<String>),
    Locate(Vec<String>),
    Extract(String),
}

fn parse_pattern(tokens: &[String]) -> CliResult<Path> {
    let mut pattern = Vec::new();
    for token in tokens.iter().flat_map(|t| t.split_whitespace()) {
        pattern.push(
            parse_step(token, 0, false)
                .map_err(|e| CliError::Usage(format!("invalid pattern: {}", e.message)))?,
        );
    }
    Ok(pattern)
}

pub fn query(index_path: &FsPath, query: &Query) -> CliResult<Outcome> {
    let mut manifest = Manifest::new("query");
    let index = load_index(index_path, &mut manifest, "index")?;
    let stdout = match query {
        Query::Find(tokens) => {
            let pattern = parse_pattern(tokens)?;
            manifest.add("query", format!("find {}", format_path(&pattern)));
            format!("{}\n", index.find(&pattern).len())
        }
        Query::Locate(tokens) => {
            let pattern = parse_pattern(tokens)?;
            manifest.add("query", format!("locate {}", format_path(&pattern)));
            let ids = index.locate_fast(&index.find(&pattern));
            let ids: Vec<String> = ids.iter().map(usize::to_string).collect();
            format!("{}\n", ids.join("\t"))
        }
        Query::Extract(id) => {
            let id: usize = id
                .parse()
                .map_err(|_| CliError::Usage(format!("invalid sequence id {:?}", id)))?;
            manifest.add("query", format!("extract {}", id));
            let path = index
                .extract(id)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            format!("{}\n", format_path(&path))
        }
    };
    Ok(Outcome {
        stdout,
        manifest,
        manifest_path: None,
    })
}

pub fn stat(index_path: &FsPath) -> CliResult<Outcome> {
    let mut manifest = Manifest::new("stat");
    let index = load_index(index_path, &mut manifest, "index")?;
    let mut out = String::new();
    writeln!(out, "sequences\t{}", index.sequences()).unwrap();
    writeln!(out, "size\t{}", index.size()).unwrap();
    match index.node_range() {
        Some((low, high)) => {
            writeln!(out, "node_range\t{}..={}", base_id(low), base_id(high)).unwrap()
        }
        None => writeln!(out, "node_range\tempty").unwrap(),
    }
    writeln!(out, "nodes\t{}", index.nodes().len()).unwrap();
    writeln!(out, "sample_rate\t{}", index.sample_rate()).unwrap();
    writeln!(out, "bidirectional\t{}", index.is_bidirectional()).unwrap();
    writeln!(out, "record_bytes\t{}", index.record_bytes_len()).unwrap();
    writeln!(out, "id_store_bytes\t{}", index.id_store_bytes()).unwrap();
    writeln!(out, "body_bits_per_char\t{:.6}", index.bits_per_character()).unwrap();
    Ok(Outcome {
        stdout: out,
        manifest,
        manifest_path: None,
    })
}

//-----------------------------------------------------------------------------

pub struct UnfoldPaths<'a> {
    pub graph: &'a FsPath,
    pub pruned: &'a FsPath,
    pub index: &'a FsPath,
    pub reference: Option<&'a FsPath>,
    pub output: &'a FsPath,
}

fn with_suffix(prefix: &FsPath, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

/// Writes `<output>.graph` and `<output>.mapping`. Standard output lists the components, and
/// each maximal path with `|` between the prefix and the suffix.
pub fn unfold(paths: &UnfoldPaths<'_>) -> CliResult<Outcome> {
    let mut manifest = Manifest::new("unfold");
    let original = load_graph(paths.graph, &mut manifest, "graph")?;
    let pruned = load_graph(paths.pruned, &mut manifest, "pruned")?;
    let index = load_index(paths.index, &mut manifest, "index")?;
    let reference = paths
        .reference
        .map(|p| load_index(p, &mut manifest, "reference"))
        .transpose()?;
    check_inputs(&original.graph, &pruned.graph, &index)
        .map_err(|e| CliError::Inconsistent(e.to_string()))?;

    let options = UnfoldOptions {
        reference: reference.as_ref().map(|r| r as &dyn RecordSource),
        labels: Some(&original.graph),
    };
    let result = gbwt::unfold(&index, &pruned.graph, &options).map_err(|e| match e {
        GbwtError::Inconsistent(m) => CliError::Inconsistent(m),
        other => CliError::Inconsistent(other.to_string()),
    })?;

    let graph_path = with_suffix(paths.output, ".graph");
    let mapping_path = with_suffix(paths.output, ".mapping");
    let graph_text = GraphFile {
        graph: result.graph.clone(),
        paths: Vec::new(),
    }
    .to_text();
    let mut mapping_bytes = Vec::new();
    result
        .mapping
        .write(&mut mapping_bytes)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    write(&graph_path, graph_text.as_bytes())?;
    write(&mapping_path, &mapping_bytes)?;
    manifest.output("graph", &graph_path, graph_text.as_bytes());
    manifest.output("mapping", &mapping_path, &mapping_bytes);
    manifest.add("components", result.components.len());
    manifest.add("maximal_paths", result.path_count());
    manifest.add("duplicates", result.mapping.len());

    let mut out = String::new();
    writeln!(out, "components\t{}", result.components.len()).unwrap();
    writeln!(out, "maximal_paths\t{}", result.path_count()).unwrap();
    writeln!(out, "duplicates\t{}", result.mapping.len()).unwrap();
    for (i, (component, found)) in result
        .components
        .iter()
        .zip(result.paths.iter())
        .enumerate()
    {
        let border: Vec<String> = component.border.iter().map(usize::to_string).collect();
        writeln!(
            out,
            "component\t{}\tnodes={}\tborder={}",
            i,
            component.nodes.len(),
            border.join(",")
        )
        .unwrap();
        for path in found {
            writeln!(
                out,
                "path\t{}\t{} | {}",
                i,
                format_path(path.prefix()),
                format_path(path.suffix())
            )
            .unwrap();
        }
    }
    Ok(Outcome {
        stdout: out,
        manifest,
        manifest_path: Some(with_suffix(paths.output, ".manifest")),
    })
}

/// Translates oriented node ids in `v`/`v-` form back to original ids.
pub fn restore(mapping: &FsPath, steps: &[String]) -> CliResult<Outcome> {
    let mut manifest = Manifest::new("restore");
    let bytes = read(mapping)?;
    manifest.input("mapping", mapping, &bytes);
    let map = DuplicateMap::read(bytes.as_slice())
        .map_err(|e| CliError::Parse(format!("{}: {}", mapping.display(), e)))?;
    let path = parse_pattern(steps)?;
    let restored = map
        .restore_ids(&path)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(Outcome {
        stdout: format!("{}\n", format_path(&restored)),
        manifest,
        manifest_path: None,
    })
}

//-----------------------------------------------------------------------------

/// Largest collection the brute-force checks accept, in characters.
pub const VERIFY_LIMIT: usize = 1_000_000;

/// Patterns checked per length.
const VERIFY_PATTERNS: usize = 2000;

/// Runs the brute-force checks. Standard output has one `check<TAB>PASS|FAIL<TAB>detail`
/// line per check. Any failure gives [`CliError::VerificationFailed`] with the same report.
pub fn verify(index_path: &FsPath, graph: &FsPath) -> CliResult<Outcome> {
    let mut manifest = Manifest::new("verify");
    let file = load_graph(graph, &mut manifest, "graph")?;
    let characters: usize = file.paths.iter().map(|(_, p)| p.len()).sum();
    if characters > VERIFY_LIMIT {
        return Err(CliError::Usage(format!(
            "{} characters is too large for the brute-force checks (limit {}); verify a subset of the paths instead",
            characters, VERIFY_LIMIT
        )));
    }
    let bytes = read(index_path)?;
    manifest.input("index", index_path, &bytes);

    let mut report = Vec::new();
    let mut check = |name: &str, result: Result<(), String>| {
        report.push((name.to_string(), result));
    };
    let index = match CompressedGbwt::deserialize(&mut bytes.as_slice()) {
        Ok(index) => {
            check("load", Ok(()));
            Some(index)
        }
        Err(e) => {
            check("load", Err(e.to_string()));
            None
        }
    };
    let paths_valid = file
        .paths
        .iter()
        .find_map(|(name, p)| {
            file.graph.validate_path(p).err().map(|d| {
                format!(
                    "path {} step {}: {}",
                    name,
                    d.position(),
                    describe_defect(&d)
                )
            })
        })
        .map_or(Ok(()), Err);
    check("paths", paths_valid);

    if let Some(index) = index {
        let texts: Vec<Path> = if index.is_bidirectional() {
            file.paths
                .iter()
                .flat_map(|(_, p)| [p.clone(), reverse_path(p)])
                .collect()
        } else {
            file.path_list()
        };
        check("bwt", oracle::check_index(&index, &texts));
        let patterns = verify_patterns(&texts);
        check(
            "find",
            first_failure(&patterns, |p| {
                let (got, expected) = (index.find(p).len(), oracle::count(&texts, p));
                (got != expected)
                    .then(|| format!("pattern {}: {} vs {}", format_path(p), got, expected))
            }),
        );
        check(
            "locate",
            first_failure(&patterns, |p| {
                let expected = oracle::locate(&texts, p);
                let state = index.find(p);
                let (direct, fast) = (index.locate_direct(&state), index.locate_fast(&state));
                (direct != expected || fast != expected)
                    .then(|| format!("pattern {}", format_path(p)))
            }),
        );
        let ids: Vec<usize> = (0..texts.len()).collect();
        check(
            "extract",
            first_failure(&ids, |&id| match index.extract(id) {
                Ok(path) if path == texts[id] => None,
                Ok(path) => Some(format!("sequence {}: {}", id, format_path(&path))),
                Err(e) => Some(e.to_string()),
            }),
        );
    }

    let mut out = String::new();
    let mut failed = false;
    for (name, result) in &report {
        match result {
            Ok(()) => writeln!(out, "{}\tPASS", name).unwrap(),
            Err(detail) => {
                failed = true;
                writeln!(out, "{}\tFAIL\t{}", name, detail).unwrap()
            }
        }
    }
    if failed {
        return Err(CliError::VerificationFailed(out));
    }
    Ok(Outcome {
        stdout: out,
        manifest,
        manifest_path: None,
    })
}

fn first_failure<T>(items: &[T], f: impl Fn(&T) -> Option<String>) -> Result<(), String> {
    items.iter().find_map(f).map_or(Ok(()), Err)
}

/// Distinct fragments of length 1 to 4, a bounded number per length, plus absent patterns.
fn verify_patterns(texts: &[Path]) -> Vec<Path> {
    let mut patterns = Vec::new();
    for k in 1..=4 {
        let fragments = oracle::fragments(texts, k);
        let step = fragments.len().div_ceil(VERIFY_PATTERNS).max(1);
        patterns.extend(fragments.into_iter().step_by(step));
    }
    let largest: NodeId = texts.iter().flatten().copied().max().unwrap_or(1);
    patterns.push(vec![largest + 2]);
    if let Some(first) = texts.first().and_then(|t| t.first()) {
        patterns.push(vec![*first, largest + 2]);
    }
    patterns
}

//-----------------------------------------------------------------------------

pub fn bench_command(scenario_path: &FsPath, seed: Option<u64>) -> CliResult<Outcome> {
    let mut manifest = Manifest::new("bench");
    let bytes = read(scenario_path)?;
    manifest.input("scenario", scenario_path, &bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::Parse("scenario is not valid UTF-8".into()))?;
    let mut scenario: Scenario = toml::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {}", scenario_path.display(), e)))?;
    if let Some(seed) = seed {
        scenario.seed = seed;
    }
    if scenario.sample_rate == 0 || !(0.0..=1.0).contains(&scenario.divergence) {
        return Err(CliError::Usage(
            "scenario needs a positive sample rate and a divergence in [0, 1]".into(),
        ));
    }
    manifest.add("seed", scenario.seed);
    manifest.add("sample_rate", scenario.sample_rate);
    let report = bench::run(&scenario).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(Outcome {
        stdout: report.render(),
        manifest,
        manifest_path: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::random_collection;

    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn batch_boundaries() {
        let paths: Vec<Path> = vec![vec![2; 3], vec![2; 1], vec![2; 5], vec![2; 2]];
        let sizes = |b: Vec<&[Path]>| b.iter().map(|x| x.len()).collect::<Vec<_>>();
        assert_eq!(sizes(batches(&paths, 4, false)), vec![2, 1, 1]);
        assert_eq!(sizes(batches(&paths, 4, true)), vec![1, 2, 1]);
        assert_eq!(sizes(batches(&paths, 100, false)), vec![4]);
        assert_eq!(sizes(batches(&paths, 0, false)), vec![1, 1, 1, 1]);
        assert!(batches(&[], 10, false).is_empty());
    }

    #[test]
    fn threads_and_batches_do_not_matter() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..10 {
            let paths = random_collection(&mut rng, 1, 30, 20, 25, true);
            for bidirectional in [false, true] {
                let reference = DynamicGbwt::from_paths(&paths, 4, bidirectional)
                    .unwrap()
                    .freeze()
                    .to_bytes();
                for (batch_size, threads) in [(1, 1), (7, 2), (30, 4), (1000, 2)] {
                    let options = BuildOptions {
                        sample_rate: 4,
                        batch_size,
                        bidirectional,
                        threads,
                    };
                    assert_eq!(
                        build_index(&paths, &options).unwrap().freeze().to_bytes(),
                        reference
                    );
                }
            }
        }
    }

    #[test]
    fn exit_codes() {
        let codes: Vec<i32> = [
            CliError::Usage(String::new()),
            CliError::Parse(String::new()),
            CliError::MergeConflict(String::new()),
            CliError::Inconsistent(String::new()),
            CliError::VerificationFailed(String::new()),
        ]
        .iter()
        .map(CliError::exit_code)
        .collect();
        assert_eq!(codes, vec![1, 2, 3, 4, 5]);
    }
}
