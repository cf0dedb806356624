//! The text graph format.
//!
//! ```text
//! # comment
//! N <id> [<label>]
//! E <from>[+|-] <to>[+|-]
//! P <name> <id>+|- <id>+|- ...
//! ```
//!
//! Node ids are positive integers. An edge adds both `(from, to)` and its mirror; a missing
//! orientation means `+`. Path steps must carry an orientation, use declared nodes, and follow
//! edges of the graph.

use gbwt::model::PathDefect;
use gbwt::model::{base_id, decode_oriented, encode_oriented, flip, Orientation};
use gbwt::{Graph, NodeId, Path};

use std::fmt::{self, Write as _};

//-----------------------------------------------------------------------------

/// A parse failure with its 1-based line number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A graph over oriented identifiers with named paths.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: Graph,
    pub paths: Vec<(String, Path)>,
}

fn error(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

fn parse_id(token: &str, line: usize) -> Result<usize, ParseError> {
    match token.parse::<usize>() {
        Ok(0) => Err(error(line, "node id 0 is reserved")),
        Ok(id) if id > (usize::MAX - 1) / 2 => {
            Err(error(line, format!("node id {} is too large", id)))
        }
        Ok(id) => Ok(id),
        Err(_) => Err(error(line, format!("invalid node id {:?}", token))),
    }
}

/// Parses `id`, `id+` or `id-`. The orientation is mandatory if `require` is set.
pub fn parse_step(token: &str, line: usize, require: bool) -> Result<NodeId, ParseError> {
    let (id, orientation) = if let Some(id) = token.strip_suffix('+') {
        (id, Orientation::Forward)
    } else if let Some(id) = token.strip_suffix('-') {
        (id, Orientation::Reverse)
    } else if require {
        return Err(error(
            line,
            format!("path step {:?} has no orientation", token),
        ));
    } else {
        (token, Orientation::Forward)
    };
    let base = parse_id(id, line)?;
    Ok(encode_oriented(base, orientation).unwrap())
}

/// Formats an oriented id as `v` or `v-`.
pub fn format_step(id: NodeId) -> String {
    match decode_oriented(id) {
        Ok(node) if node.orientation == Orientation::Reverse => format!("{}-", node.base),
        Ok(node) => node.base.to_string(),
        Err(_) => id.to_string(),
    }
}

/// Describes a path defect with oriented steps.
pub fn describe_defect(defect: &PathDefect) -> String {
    match defect {
        PathDefect::MissingNode { node, .. } => {
            format!("node {} is not in the graph", format_step(*node))
        }
        PathDefect::MissingEdge { from, to, .. } => format!(
            "no edge from {} to {}",
            format_step(*from),
            format_step(*to)
        ),
    }
}

/// Formats an oriented path as space-separated steps.
pub fn format_path(path: &[NodeId]) -> String {
    path.iter()
        .map(|&v| format_step(v))
        .collect::<Vec<_>>()
        .join(" ")
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut result = GraphFile::default();
        let mut path_lines = Vec::new();
        for (number, raw) in text.lines().enumerate() {
            let line = number + 1;
            let content = raw.trim_end_matches('\r');
            if content.trim().is_empty() || content.starts_with('#') {
                continue;
            }
            let mut fields = content.split_whitespace();
            match fields.next() {
                Some("N") => {
                    let id = parse_id(
                        fields
                            .next()
                            .ok_or_else(|| error(line, "N line without an id"))?,
                        line,
                    )?;
                    result.graph.add_bidirected_node(id).unwrap();
                    let label: Vec<&str> = fields.collect();
                    if !label.is_empty() {
                        result.graph.set_label(
                            encode_oriented(id, Orientation::Forward).unwrap(),
                            label.join(" "),
                        );
                    }
                }
                Some("E") => {
                    let from = parse_step(
                        fields
                            .next()
                            .ok_or_else(|| error(line, "E line without endpoints"))?,
                        line,
                        false,
                    )?;
                    let to = parse_step(
                        fields
                            .next()
                            .ok_or_else(|| error(line, "E line without a target"))?,
                        line,
                        false,
                    )?;
                    if fields.next().is_some() {
                        return Err(error(line, "trailing fields on E line"));
                    }
                    for v in [from, to] {
                        if !result.graph.has_node(v) {
                            return Err(error(
                                line,
                                format!("edge uses undeclared node {}", base_id(v)),
                            ));
                        }
                    }
                    result.graph.add_bidirected_edge(from, to).unwrap();
                }
                Some("P") => {
                    let name = fields
                        .next()
                        .ok_or_else(|| error(line, "P line without a name"))?
                        .to_string();
                    let steps = fields
                        .map(|t| parse_step(t, line, true))
                        .collect::<Result<Vec<_>, _>>()?;
                    if steps.is_empty() {
                        return Err(error(line, format!("path {} is empty", name)));
                    }
                    path_lines.push(line);
                    result.paths.push((name, steps));
                }
                Some(other) => return Err(error(line, format!("unknown record type {:?}", other))),
                None => unreachable!(),
            }
        }
        for ((name, path), &line) in result.paths.iter().zip(path_lines.iter()) {
            if let Err(defect) = result.graph.validate_path(path) {
                return Err(error(
                    line,
                    format!(
                        "path {} step {}: {}",
                        name,
                        defect.position(),
                        describe_defect(&defect)
                    ),
                ));
            }
        }
        Ok(result)
    }

    /// Writes nodes in ascending order, then one line per mirrored edge pair, then the paths.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for base in self.graph.base_nodes() {
            let forward = encode_oriented(base, Orientation::Forward).unwrap();
            match self.graph.label(forward) {
                Some(label) => writeln!(out, "N {} {}", base, label).unwrap(),
                None => writeln!(out, "N {}", base).unwrap(),
            }
        }
        for (u, v) in self.graph.edges() {
            let mirror = (flip(v), flip(u));
            // Of the two equivalent forms, prefer the one with fewer reverse steps.
            let key = |(a, b): (NodeId, NodeId)| ((a & 1) + (b & 1), a, b);
            if key((u, v)) <= key(mirror) || !self.graph.has_edge(mirror.0, mirror.1) {
                writeln!(out, "E {} {}", format_step(u), format_step(v)).unwrap();
            }
        }
        for (name, path) in &self.paths {
            let steps: Vec<String> = path
                .iter()
                .map(|&v| {
                    let node = decode_oriented(v).unwrap();
                    format!(
                        "{}{}",
                        node.base,
                        if node.orientation == Orientation::Forward {
                            '+'
                        } else {
                            '-'
                        }
                    )
                })
                .collect();
            writeln!(out, "P {} {}", name, steps.join(" ")).unwrap();
        }
        out
    }

    /// Paths without their names.
    pub fn path_list(&self) -> Vec<Path> {
        self.paths.iter().map(|(_, p)| p.clone()).collect()
    }
}

//-----------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    const CORPUS_A: &str = "\
# corpus A
N 1 A
N 2 C
N 3 G
N 4 T
N 5 A
N 6 C
N 7 G
E 1 2
E 1 3
E 2 4
E 2 5
E 3 4
E 4 5
E 4 6
E 5 7
E 6 7
P p0 1+ 2+ 4+ 6+ 7+
P p1 1+ 2+ 5+ 7+
P p2 1+ 3+ 4+ 5+ 7+
";

    #[test]
    fn parse_corpus_a() {
        let file = GraphFile::parse(CORPUS_A).unwrap();
        assert_eq!(file.graph.node_count(), 14);
        assert_eq!(file.graph.edge_count(), 18);
        assert_eq!(file.paths.len(), 3);
        assert_eq!(file.paths[1].1, vec![2, 4, 10, 14]);
        assert_eq!(file.graph.label(2), Some("A"));
        assert!(file.graph.is_orientation_closed());
    }

    #[test]
    fn round_trip() {
        let file = GraphFile::parse(CORPUS_A).unwrap();
        let text = file.to_text();
        assert_eq!(GraphFile::parse(&text).unwrap(), file);
        assert_eq!(GraphFile::parse(&text).unwrap().to_text(), text);
    }

    #[test]
    fn reverse_steps() {
        let file = GraphFile::parse("N 1\nN 2\nE 1+ 2-\nP x 1+ 2-\nP y 2+ 1-\n").unwrap();
        assert_eq!(file.paths[0].1, vec![2, 5]);
        assert_eq!(file.paths[1].1, vec![4, 3]);
        assert_eq!(format_path(&file.paths[0].1), "1 2-");
    }

    #[test]
    fn errors() {
        let cases = [
            ("N 0\n", 1),
            ("N x\n", 1),
            ("N 1\nE 1 2\n", 2),
            ("N 1\nN 2\nE 1 2\nP x 1 2\n", 4),
            ("N 1\nN 2\nN 3\nE 1 2\nP x 1+ 3+\n", 5),
            ("N 1\nP x\n", 2),
            ("N 1\nQ 1\n", 2),
            ("N 1\nN 2\nE 1 2 3\n", 3),
        ];
        for (text, line) in cases {
            let err = GraphFile::parse(text).unwrap_err();
            assert_eq!(err.line, line, "{:?}: {}", text, err);
        }
        let err = GraphFile::parse("N 1\nN 2\nN 3\nE 1 2\nP x 1+ 3+\n").unwrap_err();
        assert_eq!(err.message, "path x step 0: no edge from 1 to 3");
    }

    #[test]
    fn empty_file() {
        let file = GraphFile::parse("# nothing\n\n").unwrap();
        assert!(file.graph.is_empty());
        assert!(file.paths.is_empty());
        assert_eq!(file.to_text(), "");
    }
}
