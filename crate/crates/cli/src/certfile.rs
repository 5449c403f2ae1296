//! Text serialization of bound certificates.
//!
//! Key-value lines, one inequality per line, with the instance embedded at
//! the end in hypergraph input format so a certificate file is
//! self-contained and re-checkable:
//!
//! ```text
//! certificate 1
//! n 4
//! m 6
//! epsilon 1/4
//! delta 1/32
//! branch t_large
//! heuristic false
//! side_condition true
//! s 4
//! t 6
//! S 0 1 2 3
//! R 0
//! line 0 1
//! ineq pow2_m_ge_n 64 >= 4 holds
//! hypergraph 4
//! 0 1 2
//! ```

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_rational::BigRational;
use thiserror::Error;

use hyperlines::hypergraph::{Hypergraph3, Line, LineSet, VertexId};
use hyperlines::proofkit::{Branch, InequalityRecord, Rel};
use hyperlines::BoundCertificate;

use crate::input::{format_hypergraph, parse_input, InputDocument, ParseError};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CertParseError {
    #[error("line {line}: expected `{expected}`")]
    Expected { line: usize, expected: &'static str },
    #[error("line {line}: malformed field `{field}`")]
    Malformed { line: usize, field: &'static str },
    #[error("missing field `{0}`")]
    Missing(&'static str),
    #[error("unsupported certificate version {0}")]
    Version(u32),
    #[error("embedded instance: {0}")]
    Instance(#[from] ParseError),
    #[error("embedded document must be a hypergraph")]
    NotHypergraph,
}

pub fn format_certificate(cert: &BoundCertificate, h: &Hypergraph3) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "certificate {FORMAT_VERSION}");
    let _ = writeln!(out, "n {}", cert.n);
    let _ = writeln!(out, "m {}", cert.m);
    let _ = writeln!(out, "epsilon {}", cert.epsilon);
    let _ = writeln!(out, "delta {}", cert.delta);
    let _ = writeln!(out, "branch {}", cert.branch.name());
    let _ = writeln!(out, "heuristic {}", cert.heuristic);
    let _ = writeln!(out, "side_condition {}", cert.side_condition);
    let _ = writeln!(out, "s {}", cert.s);
    let _ = writeln!(out, "t {}", cert.t);
    write_vertex_line(&mut out, "S", &cert.s_set);
    write_vertex_line(&mut out, "R", &cert.r_set);
    for line in cert.span_lines.iter() {
        let members: Vec<VertexId> = line.iter().collect();
        write_vertex_line(&mut out, "line", &members);
    }
    for rec in &cert.inequalities {
        let _ = writeln!(
            out,
            "ineq {} {} {} {} {}",
            rec.name,
            rec.lhs,
            rec.rel.symbol(),
            rec.rhs,
            if rec.holds { "holds" } else { "fails" }
        );
    }
    out.push_str(&format_hypergraph(h));
    out
}

fn write_vertex_line(out: &mut String, key: &str, verts: &[VertexId]) {
    if verts.is_empty() {
        let _ = writeln!(out, "{key}");
    } else {
        let list: Vec<String> = verts.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{key} {}", list.join(" "));
    }
}

fn is_certificate_header(line: &str) -> bool {
    line.split_whitespace().next() == Some("certificate")
}

/// Quick sniff used by `check` to route certificate files.
pub fn looks_like_certificate(text: &str) -> bool {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .is_some_and(is_certificate_header)
}

pub fn parse_certificate(text: &str) -> Result<(BoundCertificate, Hypergraph3), CertParseError> {
    let mut n: Option<u32> = None;
    let mut m: Option<u32> = None;
    let mut epsilon: Option<BigRational> = None;
    let mut delta: Option<BigRational> = None;
    let mut branch: Option<Branch> = None;
    let mut heuristic: Option<bool> = None;
    let mut side_condition: Option<bool> = None;
    let mut s_count: Option<u32> = None;
    let mut t_count: Option<u32> = None;
    let mut s_set: Option<Vec<VertexId>> = None;
    let mut r_set: Option<Vec<VertexId>> = None;
    let mut span = Vec::new();
    let mut inequalities = Vec::new();
    let mut saw_version = false;
    let mut instance_text = String::new();
    let mut in_instance = false;

    for (i, raw) in text.lines().enumerate() {
        let lno = i + 1;
        if in_instance {
            instance_text.push_str(raw);
            instance_text.push('\n');
            continue;
        }
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut toks = body.split_whitespace();
        let key = toks.next().expect("nonblank");
        let rest: Vec<&str> = toks.collect();
        let one = |field: &'static str| -> Result<&str, CertParseError> {
            if rest.len() == 1 {
                Ok(rest[0])
            } else {
                Err(CertParseError::Malformed { line: lno, field })
            }
        };
        match key {
            "certificate" => {
                let v: u32 = one("certificate")?
                    .parse()
                    .map_err(|_| CertParseError::Malformed {
                        line: lno,
                        field: "certificate",
                    })?;
                if v != FORMAT_VERSION {
                    return Err(CertParseError::Version(v));
                }
                saw_version = true;
            }
            "n" => n = Some(parse_num(lno, one("n")?, "n")?),
            "m" => m = Some(parse_num(lno, one("m")?, "m")?),
            "s" => s_count = Some(parse_num(lno, one("s")?, "s")?),
            "t" => t_count = Some(parse_num(lno, one("t")?, "t")?),
            "epsilon" => {
                epsilon = Some(one("epsilon")?.parse().map_err(|_| {
                    CertParseError::Malformed {
                        line: lno,
                        field: "epsilon",
                    }
                })?)
            }
            "delta" => {
                delta = Some(one("delta")?.parse().map_err(|_| {
                    CertParseError::Malformed {
                        line: lno,
                        field: "delta",
                    }
                })?)
            }
            "branch" => {
                branch = Some(Branch::from_name(one("branch")?).ok_or(
                    CertParseError::Malformed {
                        line: lno,
                        field: "branch",
                    },
                )?)
            }
            "heuristic" => heuristic = Some(parse_bool(lno, one("heuristic")?, "heuristic")?),
            "side_condition" => {
                side_condition = Some(parse_bool(lno, one("side_condition")?, "side_condition")?)
            }
            "S" => s_set = Some(parse_vertices(lno, &rest, "S")?),
            "R" => r_set = Some(parse_vertices(lno, &rest, "R")?),
            "line" => {
                let verts = parse_vertices(lno, &rest, "line")?;
                span.push(Line::from_vertices(verts));
            }
            "ineq" => {
                if rest.len() != 5 {
                    return Err(CertParseError::Malformed {
                        line: lno,
                        field: "ineq",
                    });
                }
                let lhs: BigUint = rest[1].parse().map_err(|_| CertParseError::Malformed {
                    line: lno,
                    field: "ineq lhs",
                })?;
                let rel = Rel::from_symbol(rest[2]).ok_or(CertParseError::Malformed {
                    line: lno,
                    field: "ineq rel",
                })?;
                let rhs: BigUint = rest[3].parse().map_err(|_| CertParseError::Malformed {
                    line: lno,
                    field: "ineq rhs",
                })?;
                let holds = match rest[4] {
                    "holds" => true,
                    "fails" => false,
                    _ => {
                        return Err(CertParseError::Malformed {
                            line: lno,
                            field: "ineq verdict",
                        })
                    }
                };
                inequalities.push(InequalityRecord {
                    name: rest[0].to_string(),
                    lhs,
                    rel,
                    rhs,
                    holds,
                });
            }
            "hypergraph" => {
                in_instance = true;
                instance_text.push_str(raw);
                instance_text.push('\n');
            }
            _ => {
                return Err(CertParseError::Expected {
                    line: lno,
                    expected: "certificate field",
                })
            }
        }
    }

    if !saw_version {
        return Err(CertParseError::Missing("certificate"));
    }
    let doc = parse_input(&instance_text)?;
    let h = match doc {
        InputDocument::Hypergraph(h) => h,
        _ => return Err(CertParseError::NotHypergraph),
    };
    let cert = BoundCertificate {
        n: n.ok_or(CertParseError::Missing("n"))?,
        m: m.ok_or(CertParseError::Missing("m"))?,
        epsilon: epsilon.ok_or(CertParseError::Missing("epsilon"))?,
        delta: delta.ok_or(CertParseError::Missing("delta"))?,
        s_set: s_set.ok_or(CertParseError::Missing("S"))?,
        s: s_count.ok_or(CertParseError::Missing("s"))?,
        span_lines: LineSet::from_lines(span),
        t: t_count.ok_or(CertParseError::Missing("t"))?,
        r_set: r_set.ok_or(CertParseError::Missing("R"))?,
        branch: branch.ok_or(CertParseError::Missing("branch"))?,
        side_condition: side_condition.ok_or(CertParseError::Missing("side_condition"))?,
        heuristic: heuristic.ok_or(CertParseError::Missing("heuristic"))?,
        inequalities,
    };
    Ok((cert, h))
}

fn parse_num(line: usize, token: &str, field: &'static str) -> Result<u32, CertParseError> {
    token
        .parse()
        .map_err(|_| CertParseError::Malformed { line, field })
}

fn parse_bool(line: usize, token: &str, field: &'static str) -> Result<bool, CertParseError> {
    match token {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(CertParseError::Malformed { line, field }),
    }
}

fn parse_vertices(
    line: usize,
    toks: &[&str],
    field: &'static str,
) -> Result<Vec<VertexId>, CertParseError> {
    toks.iter()
        .map(|t| {
            t.parse::<u32>()
                .map(VertexId)
                .map_err(|_| CertParseError::Malformed { line, field })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use hyperlines::proofkit::{extract_certificate, CertMode};
    use num_bigint::BigInt;

    #[test]
    fn certificate_text_roundtrip() {
        let h = Hypergraph3::new(5, [[0, 1, 2]]).unwrap();
        let eps = BigRational::new(BigInt::from(1), BigInt::from(4));
        let cert = extract_certificate(&h, &eps, CertMode::Exhaustive).unwrap();
        let text = format_certificate(&cert, &h);
        assert!(looks_like_certificate(&text));
        let (back, h2) = parse_certificate(&text).unwrap();
        assert_eq!(h, h2);
        assert_eq!(cert, back);
        back.validate(&h2).unwrap();
    }
}
