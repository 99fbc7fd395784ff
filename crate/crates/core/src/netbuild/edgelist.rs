//! Plain-text edge list: one `word_a word_b kind weight` line per edge.
//!
//! Lines are written with `word_a < word_b`, sorted. A line holding a single
//! word declares an isolated node. Co-occurrence weights are the counts.

use std::io::{BufRead, Write};

use super::{EdgeKind, NetworkError, Result, TextNetwork};
use crate::scalar::Scalar;

pub fn write_edge_list<T: Scalar, W: Write>(network: &TextNetwork<T>, mut out: W) -> Result<()> {
    let mut lines: Vec<(String, String, EdgeKind, T)> = network
        .edges()
        .iter()
        .map(|e| {
            let (x, y) = (network.word(e.a), network.word(e.b));
            let (x, y) = if x <= y { (x, y) } else { (y, x) };
            (x.to_string(), y.to_string(), e.kind, e.weight)
        })
        .collect();
    lines.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    let mut isolated: Vec<&str> = (0..network.node_count())
        .filter(|&i| network.degree(i) == 0)
        .map(|i| network.word(i))
        .collect();
    isolated.sort_unstable();
    for w in isolated {
        writeln!(out, "{w}")?;
    }
    for (a, b, kind, weight) in lines {
        writeln!(out, "{a} {b} {kind} {weight}")?;
    }
    Ok(())
}

pub fn read_edge_list<T: Scalar, R: BufRead>(reader: R) -> Result<TextNetwork<T>> {
    let mut net = TextNetwork::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse_err = |message: String| NetworkError::Parse {
            line: i + 1,
            message,
        };
        match fields.as_slice() {
            [] => {}
            [word] => {
                net.add_node(word);
            }
            [a, b, kind, weight] => {
                let kind: EdgeKind = kind.parse().map_err(parse_err)?;
                let weight: T = weight
                    .parse()
                    .map_err(|_| parse_err(format!("bad weight {weight:?}")))?;
                let count = match kind {
                    EdgeKind::Cooccurrence => weight
                        .to_u32()
                        .ok_or_else(|| parse_err(format!("bad count {weight}")))?,
                    EdgeKind::Virtual => 0,
                };
                net.add_word_edge(a, b, kind, count, weight)
                    .map_err(|e| parse_err(e.to_string()))?;
            }
            _ => return Err(parse_err("expected `word_a word_b kind weight`".into())),
        }
    }
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut net = TextNetwork::<f64>::new();
        net.add_word_edge("b", "a", EdgeKind::Cooccurrence, 3, 3.0).unwrap();
        net.add_word_edge("a", "c", EdgeKind::Virtual, 0, 0.875).unwrap();
        net.add_node("z");
        let mut buf = Vec::new();
        write_edge_list(&net, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "z\na b cooccurrence 3\na c virtual 0.875\n");
        let back: TextNetwork<f64> = read_edge_list(text.as_bytes()).unwrap();
        assert_eq!(back, net);
    }

    #[test]
    fn parse_errors() {
        let bad = read_edge_list::<f64, _>("a b friend 1\n".as_bytes());
        assert!(matches!(bad, Err(NetworkError::Parse { line: 1, .. })));
        let dup = read_edge_list::<f64, _>("a b virtual 1\nb a virtual 1\n".as_bytes());
        assert!(matches!(dup, Err(NetworkError::Parse { line: 2, .. })));
        let short = read_edge_list::<f64, _>("a b\n".as_bytes());
        assert!(short.is_err());
    }
}
