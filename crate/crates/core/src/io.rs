//! Edge-list and graph6 text formats.

use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_VERTICES};

/// Writes the edge-list form: `n m` then one `u v` line per edge.
pub fn to_edge_list(g: &Graph) -> String {
    let edges = g.edges();
    let mut s = format!("{} {}\n", g.n(), edges.len());
    for (u, v) in edges {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

pub fn from_edge_list(text: &str) -> Result<Graph> {
    let mut nums = text
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))));
    let mut next = |what: &str| -> Result<usize> {
        nums.next()
            .unwrap_or_else(|| Err(Error::Parse(format!("missing {what}"))))
    };
    let n = next("vertex count")?;
    let m = next("edge count")?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let u = next("edge endpoint")?;
        let v = next("edge endpoint")?;
        edges.push((u, v));
    }
    if nums.next().is_some() {
        return Err(Error::Parse("trailing tokens after the edge list".into()));
    }
    Graph::build(n, &edges)
}

fn push_n(out: &mut Vec<u8>, n: usize) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
}

pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::new();
    push_n(&mut out, n);
    let mut acc = 0u8;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.adjacent(i, j) as u8;
            k += 1;
            if k == 6 {
                out.push(acc + 63);
                acc = 0;
                k = 0;
            }
        }
    }
    if k > 0 {
        out.push((acc << (6 - k)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

pub fn from_graph6(line: &str) -> Result<Graph> {
    let line = line.trim();
    let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
    let bytes = line.as_bytes();
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(Error::Parse("graph6 byte out of range".into()));
    }
    let (n, body) = match bytes.first() {
        None => return Err(Error::Parse("empty graph6 string".into())),
        Some(&126) => {
            if bytes.len() < 4 || bytes[1] == 126 {
                return Err(Error::Parse("unsupported graph6 size prefix".into()));
            }
            let n = bytes[1..4]
                .iter()
                .fold(0usize, |acc, &b| acc << 6 | (b - 63) as usize);
            (n, &bytes[4..])
        }
        Some(&b) => ((b - 63) as usize, &bytes[1..]),
    };
    if n > MAX_VERTICES {
        return Err(Error::CapExceeded {
            n,
            cap: MAX_VERTICES,
            what: "bitset representation".into(),
        });
    }
    let bits = n * n.saturating_sub(1) / 2;
    if body.len() != bits.div_ceil(6) {
        return Err(Error::Parse(format!(
            "graph6 body has {} bytes, expected {}",
            body.len(),
            bits.div_ceil(6)
        )));
    }
    let mut g = Graph::empty(n);
    let mut idx = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[idx / 6] - 63;
            if byte >> (5 - idx % 6) & 1 == 1 {
                g.add_edge(i, j);
            }
            idx += 1;
        }
    }
    if bits % 6 != 0 {
        let pad = body[bits / 6] - 63;
        if pad & ((1 << (6 - bits % 6)) - 1) != 0 {
            return Err(Error::Parse("nonzero graph6 padding bits".into()));
        }
    }
    Ok(g)
}

/// Parses one graph in either format. A first line holding exactly two
/// integers selects the edge-list format.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    let toks: Vec<&str> = first.split_whitespace().collect();
    if toks.len() == 2 && toks.iter().all(|t| t.parse::<usize>().is_ok()) {
        from_edge_list(text)
    } else {
        from_graph6(first)
    }
}

/// Parses a stream of graph6 lines, skipping blanks.
pub fn parse_graph6_stream(text: &str) -> Result<Vec<Graph>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(from_graph6)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_graph6_strings() {
        // Reference strings from the format description.
        let k4 = Graph::build(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(to_graph6(&k4), "C~");
        let c5 = Graph::build(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(to_graph6(&c5), "Dhc");
        assert_eq!(to_graph6(&Graph::empty(0)), "?");
        assert_eq!(to_graph6(&Graph::empty(1)), "@");
        let petersen = from_graph6("IheA@GUAo").unwrap();
        assert_eq!(petersen.n(), 10);
        assert_eq!(petersen.edge_count(), 15);
        assert!((0..10).all(|v| petersen.degree(v) == 3));
    }

    #[test]
    fn large_prefix_round_trip() {
        let mut g = Graph::empty(64);
        g.add_edge(0, 63);
        g.add_edge(10, 20);
        let s = to_graph6(&g);
        assert!(s.starts_with('~'));
        assert_eq!(from_graph6(&s).unwrap(), g);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::build(4, &[(0, 1), (2, 3)]).unwrap();
        let text = to_edge_list(&g);
        assert_eq!(text, "4 2\n0 1\n2 3\n");
        assert_eq!(parse_graph(&text).unwrap(), g);
        assert!(from_edge_list("3 2\n0 1\n").is_err());
    }

    #[test]
    fn rejects_bad_padding() {
        assert!(from_graph6("Dhd").is_err());
        assert!(from_graph6("Dh").is_err());
    }
}
