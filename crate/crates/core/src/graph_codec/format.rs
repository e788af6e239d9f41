//! Plain-text graph files.
//!
//! ```text
//! IRAGRAPH v1
//! K <k> C <c> N <n>
//! doped <i...>
//! pilots <i...>
//! check <j>: <info indices>
//! ```

use std::fmt::Write;

use super::graph::TannerGraph;
use crate::error::{Error, Result};

const MAGIC: &str = "IRAGRAPH v1";

pub fn write_graph(graph: &TannerGraph) -> String {
    let mut out = String::new();
    let join = |v: &[usize]| v.iter().map(|i| format!(" {i}")).collect::<String>();
    writeln!(out, "{MAGIC}").unwrap();
    writeln!(out, "K {} C {} N {}", graph.k(), graph.c(), graph.n()).unwrap();
    writeln!(out, "doped{}", join(graph.doped())).unwrap();
    writeln!(out, "pilots{}", join(graph.pilots())).unwrap();
    for (j, nbrs) in graph.check_info_adj().iter().enumerate() {
        writeln!(out, "check {j}:{}", join(nbrs)).unwrap();
    }
    out
}

pub fn parse_graph(text: &str) -> Result<TannerGraph> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| err(0, format!("missing {what} line")))
    };

    let (ln, magic) = next("header")?;
    if magic != MAGIC {
        return Err(err(ln, format!("expected `{MAGIC}`")));
    }

    let (ln, sizes) = next("size")?;
    let tok: Vec<&str> = sizes.split_whitespace().collect();
    if tok.len() != 6 || tok[0] != "K" || tok[2] != "C" || tok[4] != "N" {
        return Err(err(ln, "expected `K <k> C <c> N <n>`"));
    }
    let k = number(ln, tok[1])?;
    let c = number(ln, tok[3])?;
    if number(ln, tok[5])? != c {
        return Err(err(ln, "N must equal C"));
    }

    let (ln, doped) = next("doped")?;
    let doped = tagged_list(ln, doped, "doped")?;
    let (ln, pilots) = next("pilots")?;
    let pilots = tagged_list(ln, pilots, "pilots")?;

    let mut adj = Vec::with_capacity(c);
    for (ln, line) in lines.filter(|(_, l)| !l.is_empty()) {
        let (head, rest) = line.split_once(':').ok_or_else(|| err(ln, "expected `check <j>: ...`"))?;
        let j = head
            .strip_prefix("check")
            .ok_or_else(|| err(ln, "expected `check <j>: ...`"))
            .and_then(|s| number(ln, s.trim()))?;
        if j != adj.len() {
            return Err(err(ln, format!("expected check {}, found {j}", adj.len())));
        }
        adj.push(rest.split_whitespace().map(|t| number(ln, t)).collect::<Result<Vec<_>>>()?);
    }
    if adj.len() != c {
        return Err(err(0, format!("found {} checks, header says {c}", adj.len())));
    }
    TannerGraph::new(k, adj, doped, pilots).map_err(|e| err(0, e.to_string()))
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::GraphParse {
        line,
        message: message.into(),
    }
}

fn number(line: usize, tok: &str) -> Result<usize> {
    tok.parse().map_err(|_| err(line, format!("`{tok}` is not a non-negative integer")))
}

fn tagged_list(line: usize, text: &str, tag: &str) -> Result<Vec<usize>> {
    let mut tok = text.split_whitespace();
    if tok.next() != Some(tag) {
        return Err(err(line, format!("expected `{tag} ...`")));
    }
    tok.map(|t| number(line, t)).collect()
}
