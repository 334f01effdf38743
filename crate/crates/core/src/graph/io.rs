//! Plain-text edge lists and graph6.
//!
//! Edge list: the vertex count on the first line, then one `u v` pair per line,
//! 1-indexed. Blank lines and `#` comments are ignored.

use super::host::HostGraph;
use super::pattern::PatternGraph;
use crate::error::{Error, Result};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses an edge list into `(n, 0-indexed edges)`.
pub fn parse_edge_list(text: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (first, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let n: usize = header
        .parse()
        .map_err(|_| parse_err(first, format!("expected vertex count, found {header:?}")))?;
    let mut edges = Vec::new();
    for (line, l) in lines {
        let mut parts = l.split_whitespace();
        let mut next = || -> Result<usize> {
            let tok = parts.next().ok_or_else(|| parse_err(line, "expected two vertex ids"))?;
            let id: usize = tok
                .parse()
                .map_err(|_| parse_err(line, format!("bad vertex id {tok:?}")))?;
            if id == 0 || id > n {
                return Err(parse_err(line, format!("vertex id {id} outside 1..={n}")));
            }
            Ok(id - 1)
        };
        let (u, v) = (next()?, next()?);
        if parts.next().is_some() {
            return Err(parse_err(line, "trailing tokens"));
        }
        edges.push((u, v));
    }
    Ok((n, edges))
}

pub fn write_edge_list(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> String {
    let mut out = format!("{n}\n");
    for (u, v) in edges {
        out.push_str(&format!("{} {}\n", u + 1, v + 1));
    }
    out
}

/// Decodes one graph6 line (an optional `>>graph6<<` header is accepted).
pub fn parse_graph6(line: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let s = line.trim().trim_start_matches(">>graph6<<").as_bytes();
    if s.is_empty() {
        return Err(parse_err(1, "empty graph6 string"));
    }
    if s.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(parse_err(1, "graph6 bytes must lie in 63..=126"));
    }
    let (n, body) = if s[0] != 126 {
        ((s[0] - 63) as usize, &s[1..])
    } else if s.len() >= 4 && s[1] != 126 {
        let n = s[1..4].iter().fold(0usize, |acc, &b| acc << 6 | (b - 63) as usize);
        (n, &s[4..])
    } else {
        return Err(parse_err(1, "graph6 orders above 258047 are not supported"));
    };
    let needed = (n * n.saturating_sub(1) / 2).div_ceil(6);
    if body.len() != needed {
        return Err(parse_err(
            1,
            format!("graph6 body has {} bytes, expected {needed} for n={n}", body.len()),
        ));
    }
    let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    let mut edges = Vec::new();
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            if bit(k) {
                edges.push((u, v));
            }
            k += 1;
        }
    }
    Ok((n, edges))
}

pub fn write_graph6(n: usize, edges: &[(usize, usize)]) -> String {
    assert!(n < 258048, "graph6 writer supports n < 258048");
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push((n >> shift & 63) as u8 + 63);
        }
    }
    let total = n * n.saturating_sub(1) / 2;
    let mut bits = vec![false; total];
    for &(u, v) in edges {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        bits[b * (b - 1) / 2 + a] = true;
    }
    for chunk in bits.chunks(6) {
        let mut byte = 0u8;
        for (i, &b) in chunk.iter().enumerate() {
            byte |= (b as u8) << (5 - i);
        }
        out.push(byte + 63);
    }
    String::from_utf8(out).expect("graph6 is ascii")
}

/// Reads a pattern in either format. Edge lists start with a decimal vertex
/// count; graph6 never starts with a digit.
pub fn parse_pattern(text: &str) -> Result<PatternGraph> {
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .ok_or_else(|| parse_err(1, "empty input"))?;
    let (n, edges) = if first.starts_with(|c: char| c.is_ascii_digit()) {
        parse_edge_list(text)?
    } else {
        parse_graph6(first)?
    };
    PatternGraph::new(n, &edges)
}

pub fn parse_host(text: &str) -> Result<HostGraph> {
    let (n, edges) = parse_edge_list(text)?;
    HostGraph::from_edges(n, edges.into_iter().map(|(u, v)| (u as u32, v as u32)))
}

pub fn pattern_to_edge_list(p: &PatternGraph) -> String {
    write_edge_list(p.vertex_count(), p.edges())
}

pub fn host_to_edge_list(g: &HostGraph) -> String {
    write_edge_list(g.vertex_count(), g.edges().map(|(u, v)| (u as usize, v as usize)))
}
