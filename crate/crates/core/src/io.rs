//! Plain-text hypergraph format.
//!
//! Line 1 is `n m`; each of the next `m` lines holds one edge as a
//! space-separated vertex list (written strictly increasing). Lines starting
//! with `#` are comments; a trailing `# generator: ...` comment records the
//! parameters of a sampled instance. Readers accept edges and the vertices
//! within them in any order.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::error::CoreError;
use crate::generate::GenMeta;
use crate::hypergraph::Hypergraph;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("header promises {expected} edges, found {found}")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Invalid(#[from] CoreError),
}

pub fn write_text<W: Write>(h: &Hypergraph, mut w: W) -> io::Result<()> {
    writeln!(w, "{} {}", h.n(), h.m())?;
    for edge in h.edges() {
        let line: Vec<String> = edge.iter().map(|v| v.idx().to_string()).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    if let Some(meta) = h.meta() {
        writeln!(w, "# generator: {meta}")?;
    }
    Ok(())
}

pub fn to_text(h: &Hypergraph) -> String {
    let mut buf = Vec::new();
    write_text(h, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("format output is ascii")
}

pub fn read_text<R: BufRead>(r: R) -> Result<Hypergraph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut meta: Option<GenMeta> = None;
    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if meta.is_none() {
                meta = parse_meta_comment(comment);
            }
            continue;
        }
        let fields: Result<Vec<usize>, _> = trimmed.split_whitespace().map(str::parse).collect();
        let fields = fields.map_err(|e| ParseError::Malformed {
            line: lineno + 1,
            msg: format!("expected integers: {e}"),
        })?;
        match header {
            None => {
                if fields.len() != 2 {
                    return Err(ParseError::Malformed {
                        line: lineno + 1,
                        msg: format!("header needs 'n m', found {} fields", fields.len()),
                    });
                }
                header = Some((fields[0], fields[1]));
            }
            Some(_) => edges.push(fields),
        }
    }
    let (n, m) = header.ok_or(ParseError::Malformed {
        line: 0,
        msg: "missing header line".into(),
    })?;
    if edges.len() != m {
        return Err(ParseError::EdgeCountMismatch {
            expected: m,
            found: edges.len(),
        });
    }
    let h = Hypergraph::build(n, edges)?;
    Ok(match meta {
        Some(meta) => h.with_meta(meta),
        None => h,
    })
}

fn parse_meta_comment(comment: &str) -> Option<GenMeta> {
    let rest = comment.trim().strip_prefix("generator:")?.trim();
    let mut kind = None;
    let mut kv = std::collections::BTreeMap::new();
    for tok in rest.split_whitespace() {
        match tok.split_once('=') {
            Some((k, v)) => {
                kv.insert(k.to_string(), v.to_string());
            }
            None => kind = Some(tok.to_string()),
        }
    }
    let get_usize = |k: &str| kv.get(k).and_then(|v| v.parse::<usize>().ok());
    let get_f64 = |k: &str| kv.get(k).and_then(|v| v.parse::<f64>().ok());
    let get_u64 = |k: &str| kv.get(k).and_then(|v| v.parse::<u64>().ok());
    match kind.as_deref() {
        Some("uniform") => Some(GenMeta::Uniform {
            n: get_usize("n")?,
            r: get_usize("r")?,
            p: get_f64("p")?,
            seed: get_u64("seed")?,
        }),
        Some("sparse") => Some(GenMeta::Sparse {
            n: get_usize("n")?,
            eps: get_f64("eps")?,
            r: get_usize("r")?,
            core: get_usize("core")?,
            seed: get_u64("seed")?,
        }),
        _ => None,
    }
}
