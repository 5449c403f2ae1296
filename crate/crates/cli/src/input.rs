//! The four line-oriented input formats and their printers.
//!
//! A document is `<kind> <n>` followed by one record per line: vertex
//! triples for hypergraphs, vertex pairs for graphs, matrix rows for
//! metrics, and coordinate pairs for `points_l1`. `#` starts a comment,
//! fields are whitespace-separated, vertices are 0-indexed, and metric
//! entries may be bare integers or `p/q` rationals.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

use hyperlines::hypergraph::{CoreError, Hypergraph3};
use hyperlines::metrics::{l1_metric, Graph, L1Metric, MetricError, MetricSpace};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("empty document: missing `<kind> <n>` header")]
    MissingHeader,
    #[error("line {line}: unknown document kind `{kind}`")]
    UnknownHeader { line: usize, kind: String },
    #[error("line {line}, column {col}: expected integer, got `{token}`")]
    NonInteger {
        line: usize,
        col: usize,
        token: String,
    },
    #[error("line {line}, column {col}: invalid rational `{token}`")]
    BadRational {
        line: usize,
        col: usize,
        token: String,
    },
    #[error("line {line}: expected {expected} fields, got {got}")]
    WrongArity {
        line: usize,
        expected: usize,
        got: usize,
    },
    #[error("line {line}, column {col}: vertex {v} out of range for n = {n}")]
    VertexOutOfRange {
        line: usize,
        col: usize,
        v: i64,
        n: u32,
    },
    #[error("expected {expected} data rows, found {got}")]
    WrongRowCount { expected: usize, got: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// A parsed input document.
pub enum InputDocument {
    Hypergraph(Hypergraph3),
    Graph(Graph),
    Metric(MetricSpace),
    PointsL1 {
        points: Vec<(i64, i64)>,
        metric: L1Metric,
    },
}

impl InputDocument {
    pub fn kind(&self) -> &'static str {
        match self {
            InputDocument::Hypergraph(_) => "hypergraph",
            InputDocument::Graph(_) => "graph",
            InputDocument::Metric(_) => "metric",
            InputDocument::PointsL1 { .. } => "points_l1",
        }
    }

    #[allow(dead_code)] // round-trip tests
    pub fn n(&self) -> u32 {
        match self {
            InputDocument::Hypergraph(h) => h.n(),
            InputDocument::Graph(g) => g.n(),
            InputDocument::Metric(ms) => ms.n(),
            InputDocument::PointsL1 { metric, .. } => metric.space.n(),
        }
    }

    /// The hypergraph whose lines this document defines: the document
    /// itself for hypergraphs, the betweenness hypergraph of the induced
    /// metric otherwise.
    pub fn to_hypergraph(&self) -> Result<Hypergraph3, ParseError> {
        match self {
            InputDocument::Hypergraph(h) => Ok(h.clone()),
            InputDocument::Graph(g) => Ok(g.metric()?.betweenness_hypergraph()),
            InputDocument::Metric(ms) => Ok(ms.betweenness_hypergraph()),
            InputDocument::PointsL1 { metric, .. } => {
                Ok(metric.space.betweenness_hypergraph())
            }
        }
    }
}

/// Numbered, comment-stripped, nonblank lines (columns intact).
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            None
        } else {
            Some((i + 1, body))
        }
    })
}

/// A field with its 1-based column in the source line.
#[derive(Clone, Copy)]
struct Tok<'a> {
    col: usize,
    text: &'a str,
}

fn tokenize(body: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let bytes = body.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        out.push(Tok {
            col: start + 1,
            text: &body[start..i],
        });
    }
    out
}

fn parse_int<T: std::str::FromStr>(line: usize, tok: Tok<'_>) -> Result<T, ParseError> {
    tok.text.parse().map_err(|_| ParseError::NonInteger {
        line,
        col: tok.col,
        token: tok.text.to_string(),
    })
}

fn parse_rational(line: usize, tok: Tok<'_>) -> Result<BigRational, ParseError> {
    let bad = || ParseError::BadRational {
        line,
        col: tok.col,
        token: tok.text.to_string(),
    };
    match tok.text.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            if !den.is_positive() {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        }
        None => {
            let num: BigInt = tok.text.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(num))
        }
    }
}

fn parse_vertex(line: usize, tok: Tok<'_>, n: u32) -> Result<u32, ParseError> {
    let v: i64 = parse_int(line, tok)?;
    if v < 0 || v >= n as i64 {
        return Err(ParseError::VertexOutOfRange {
            line,
            col: tok.col,
            v,
            n,
        });
    }
    Ok(v as u32)
}

/// Parses one of the four document kinds, reporting the first offending
/// line on malformed input.
pub fn parse_input(text: &str) -> Result<InputDocument, ParseError> {
    let mut lines = data_lines(text);
    let (hline, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let toks = tokenize(header);
    if toks.len() != 2 {
        return Err(ParseError::WrongArity {
            line: hline,
            expected: 2,
            got: toks.len(),
        });
    }
    let kind = toks[0].text;
    let n: u32 = parse_int(hline, toks[1])?;

    match kind {
        "hypergraph" => {
            let mut hedges = Vec::new();
            for (lno, body) in lines {
                let toks = tokenize(body);
                if toks.len() != 3 {
                    return Err(ParseError::WrongArity {
                        line: lno,
                        expected: 3,
                        got: toks.len(),
                    });
                }
                let a = parse_vertex(lno, toks[0], n)?;
                let b = parse_vertex(lno, toks[1], n)?;
                let c = parse_vertex(lno, toks[2], n)?;
                hedges.push([a, b, c]);
            }
            Ok(InputDocument::Hypergraph(Hypergraph3::new(n, hedges)?))
        }
        "graph" => {
            let mut edges = Vec::new();
            for (lno, body) in lines {
                let toks = tokenize(body);
                if toks.len() != 2 {
                    return Err(ParseError::WrongArity {
                        line: lno,
                        expected: 2,
                        got: toks.len(),
                    });
                }
                let u = parse_vertex(lno, toks[0], n)?;
                let v = parse_vertex(lno, toks[1], n)?;
                edges.push((u, v));
            }
            Ok(InputDocument::Graph(Graph::new(n, edges)?))
        }
        "metric" => {
            let mut entries = Vec::with_capacity(n as usize * n as usize);
            let mut rows = 0usize;
            for (lno, body) in lines {
                let toks = tokenize(body);
                if toks.len() != n as usize {
                    return Err(ParseError::WrongArity {
                        line: lno,
                        expected: n as usize,
                        got: toks.len(),
                    });
                }
                for t in toks {
                    entries.push(parse_rational(lno, t)?);
                }
                rows += 1;
            }
            if rows != n as usize {
                return Err(ParseError::WrongRowCount {
                    expected: n as usize,
                    got: rows,
                });
            }
            Ok(InputDocument::Metric(MetricSpace::new(n, entries)?))
        }
        "points_l1" => {
            let mut points = Vec::new();
            for (lno, body) in lines {
                let toks = tokenize(body);
                if toks.len() != 2 {
                    return Err(ParseError::WrongArity {
                        line: lno,
                        expected: 2,
                        got: toks.len(),
                    });
                }
                points.push((parse_int(lno, toks[0])?, parse_int(lno, toks[1])?));
            }
            if points.len() != n as usize {
                return Err(ParseError::WrongRowCount {
                    expected: n as usize,
                    got: points.len(),
                });
            }
            let metric = l1_metric(&points)?;
            Ok(InputDocument::PointsL1 { points, metric })
        }
        other => Err(ParseError::UnknownHeader {
            line: hline,
            kind: other.to_string(),
        }),
    }
}

pub fn format_rational(x: &BigRational) -> String {
    if x.denom() == &BigInt::one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn format_hypergraph(h: &Hypergraph3) -> String {
    let mut out = format!("hypergraph {}\n", h.n());
    for [a, b, c] in h.hedges() {
        let _ = writeln!(out, "{a} {b} {c}");
    }
    out
}

pub fn format_graph(g: &Graph) -> String {
    let mut out = format!("graph {}\n", g.n());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn format_metric(ms: &MetricSpace) -> String {
    let mut out = format!("metric {}\n", ms.n());
    for i in 0..ms.n() {
        let row: Vec<String> = (0..ms.n())
            .map(|j| format_rational(ms.dist(i, j)))
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn format_points(points: &[(i64, i64)]) -> String {
    let mut out = format!("points_l1 {}\n", points.len());
    for (x, y) in points {
        let _ = writeln!(out, "{x} {y}");
    }
    out
}

#[allow(dead_code)] // round-trip tests
pub fn format_document(doc: &InputDocument) -> String {
    match doc {
        InputDocument::Hypergraph(h) => format_hypergraph(h),
        InputDocument::Graph(g) => format_graph(g),
        InputDocument::Metric(ms) => format_metric(ms),
        InputDocument::PointsL1 { points, .. } => format_points(points),
    }
}
