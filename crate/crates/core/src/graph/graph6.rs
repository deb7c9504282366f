//! graph6 encoding: a size header followed by the upper triangle of the
//! adjacency matrix in column order, packed six bits per printable byte.

use super::{Graph, Graph6ErrorKind, GraphError};

/// Largest order representable with the one- or four-byte size header.
pub const GRAPH6_MAX_ORDER: usize = 258_047;

const BIAS: u8 = 63;
const LONG_MARKER: u8 = 126;

fn err(offset: usize, kind: Graph6ErrorKind) -> GraphError {
    GraphError::Graph6 { offset, kind }
}

fn sextet(bytes: &[u8], offset: usize) -> Result<u8, GraphError> {
    match bytes.get(offset) {
        None => Err(err(offset, Graph6ErrorKind::Truncated)),
        Some(&b) if !(BIAS..=126).contains(&b) => {
            Err(err(offset, Graph6ErrorKind::CharacterOutOfRange(b)))
        }
        Some(&b) => Ok(b - BIAS),
    }
}

/// Returns `(n, header_len)`.
fn parse_header(bytes: &[u8]) -> Result<(usize, usize), GraphError> {
    match bytes.first() {
        None => Err(err(0, Graph6ErrorKind::MissingHeader)),
        Some(&LONG_MARKER) => {
            if bytes.get(1) == Some(&LONG_MARKER) {
                return Err(err(1, Graph6ErrorKind::OrderTooLarge));
            }
            let mut n = 0usize;
            for offset in 1..4 {
                n = (n << 6) | sextet(bytes, offset)? as usize;
            }
            if n < 63 {
                return Err(err(0, Graph6ErrorKind::NonCanonicalHeader));
            }
            Ok((n, 4))
        }
        Some(_) => Ok((sextet(bytes, 0)? as usize, 1)),
    }
}

pub fn from_graph6(text: &str) -> Result<Graph, GraphError> {
    let bytes = text.as_bytes();
    let (n, header_len) = parse_header(bytes)?;
    if n == 0 {
        return Err(GraphError::Empty);
    }
    let bits = n * (n - 1) / 2;
    let body_len = bits.div_ceil(6);
    let body = &bytes[header_len..];
    if body.len() > body_len {
        return Err(err(header_len + body_len, Graph6ErrorKind::TrailingData));
    }

    let mut g = Graph::empty(n)?;
    let (mut i, mut j) = (0usize, 1usize);
    for k in 0..body_len {
        let offset = header_len + k;
        let value = sextet(bytes, offset)?;
        for shift in (0..6).rev() {
            let bit = (value >> shift) & 1 == 1;
            if j >= n {
                if bit {
                    return Err(err(offset, Graph6ErrorKind::NonZeroPadding));
                }
                continue;
            }
            if bit {
                g.insert_edge(i, j)?;
            }
            i += 1;
            if i == j {
                i = 0;
                j += 1;
            }
        }
    }
    Ok(g)
}

pub fn to_graph6(g: &Graph) -> Result<String, GraphError> {
    let n = g.n();
    if n > GRAPH6_MAX_ORDER {
        return Err(GraphError::OrderOutOfRange {
            n,
            min: 1,
            max: GRAPH6_MAX_ORDER,
        });
    }
    let mut out = Vec::with_capacity(4 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    if n < 63 {
        out.push(n as u8 + BIAS);
    } else {
        out.push(LONG_MARKER);
        out.extend([12, 6, 0].map(|s| ((n >> s) & 0x3f) as u8 + BIAS));
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + BIAS);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + BIAS);
    }
    Ok(String::from_utf8(out).expect("graph6 output is ASCII"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hand_decoded_examples() {
        let k2 = from_graph6("A_").unwrap();
        assert_eq!(k2, Graph::complete(2).unwrap());
        let e3 = from_graph6("B?").unwrap();
        assert_eq!((e3.n(), e3.m()), (3, 0));
        // '{' = 60 = 0b111100: pairs (0,4) (1,4) (2,4) (3,4), a star on vertex 4
        let g = from_graph6("D?{").unwrap();
        assert_eq!(
            g.edges().collect::<Vec<_>>(),
            vec![(0, 4), (1, 4), (2, 4), (3, 4)]
        );
        assert_eq!(to_graph6(&g).unwrap(), "D?{");
    }

    #[test]
    fn hand_encoded_examples() {
        assert_eq!(to_graph6(&Graph::complete(2).unwrap()).unwrap(), "A_");
        assert_eq!(to_graph6(&Graph::empty(1).unwrap()).unwrap(), "@");
        // P3 = edges (0,1),(1,2): bits 1 0 1 -> 101000 = 40 -> 'g'
        assert_eq!(to_graph6(&Graph::path(3).unwrap()).unwrap(), "Bg");
        assert_eq!(to_graph6(&Graph::complete(4).unwrap()).unwrap(), "C~");
    }

    #[test]
    fn long_header_round_trip() {
        let g = Graph::cycle(100).unwrap();
        let s = to_graph6(&g).unwrap();
        assert_eq!(&s[..4], "~?@c");
        assert_eq!(from_graph6(&s).unwrap(), g);
    }

    #[test]
    fn malformed_inputs_report_offsets() {
        use Graph6ErrorKind::*;
        let cases: [(&str, usize, Graph6ErrorKind); 7] = [
            ("", 0, MissingHeader),
            ("A", 1, Truncated),
            ("A_?", 2, TrailingData),
            ("A`", 1, NonZeroPadding),
            ("B\x20", 1, CharacterOutOfRange(0x20)),
            ("~??@", 0, NonCanonicalHeader),
            ("~~??????", 1, OrderTooLarge),
        ];
        for (text, offset, kind) in cases {
            assert_eq!(
                from_graph6(text),
                Err(GraphError::Graph6 { offset, kind }),
                "input {text:?}"
            );
        }
        assert_eq!(from_graph6("?"), Err(GraphError::Empty));
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..80).prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for j in 1..n {
                    for i in 0..j {
                        if bits[k] {
                            edges.push((i, j));
                        }
                        k += 1;
                    }
                }
                Graph::from_edges(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn graph_round_trip(g in arb_graph()) {
            let s = to_graph6(&g).unwrap();
            prop_assert_eq!(from_graph6(&s).unwrap(), g);
        }

        #[test]
        fn string_round_trip(g in arb_graph()) {
            let s = to_graph6(&g).unwrap();
            prop_assert_eq!(to_graph6(&from_graph6(&s).unwrap()).unwrap(), s);
        }
    }
}
