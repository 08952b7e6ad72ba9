//! graph6 codec.
//!
//! A record is `N(n)` followed by the upper triangle of the adjacency matrix
//! in column order (`x(0,1), x(0,2), x(1,2), x(0,3), ...`), six bits per
//! byte, each byte offset by 63. Padding bits in the final byte must be zero.

use super::Graph;
use crate::error::{Error, Result};

const HEADER: &str = ">>graph6<<";

fn err(offset: usize, reason: impl Into<String>) -> Error {
    Error::Graph6 {
        offset,
        reason: reason.into(),
    }
}

fn sextet(bytes: &[u8], offset: usize) -> Result<u32> {
    let b = *bytes
        .get(offset)
        .ok_or_else(|| err(offset, "record truncated"))?;
    if !(63..=126).contains(&b) {
        return Err(err(offset, format!("byte {b:#04x} outside the printable range 63..=126")));
    }
    Ok(u32::from(b - 63))
}

/// Parses one graph6 record. Surrounding whitespace and the optional
/// `>>graph6<<` header are ignored.
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let trimmed = text.trim();
    let (skip, body) = match trimmed.strip_prefix(HEADER) {
        Some(rest) => (HEADER.len(), rest),
        None => (0, trimmed),
    };
    let bytes = body.as_bytes();
    if bytes.is_empty() {
        return Err(err(skip, "empty record"));
    }

    let (n, mut pos) = if bytes[0] != 126 {
        (sextet(bytes, 0)? as usize, 1)
    } else if bytes.get(1) != Some(&126) {
        let mut n = 0usize;
        for k in 1..4 {
            n = (n << 6) | sextet(bytes, k).map_err(|e| shift(e, skip))? as usize;
        }
        if n < 63 {
            return Err(err(skip, "non-canonical size prefix"));
        }
        (n, 4)
    } else {
        let mut n = 0usize;
        for k in 2..8 {
            n = (n << 6) | sextet(bytes, k).map_err(|e| shift(e, skip))? as usize;
        }
        if n < 258_048 {
            return Err(err(skip, "non-canonical size prefix"));
        }
        (n, 8)
    };

    let nbits = n * n.saturating_sub(1) / 2;
    let nbytes = nbits.div_ceil(6);
    if bytes.len() < pos + nbytes {
        return Err(err(skip + bytes.len(), format!(
            "truncated payload: expected {nbytes} data bytes, found {}",
            bytes.len() - pos
        )));
    }
    if bytes.len() > pos + nbytes {
        return Err(err(skip + pos + nbytes, "trailing bytes after payload"));
    }

    let mut g = Graph::empty(n);
    let mut bit = 0usize;
    let mut current = 0u32;
    for j in 1..n {
        for i in 0..j {
            if bit.is_multiple_of(6) {
                current = sextet(bytes, pos).map_err(|e| shift(e, skip))?;
                pos += 1;
            }
            if current >> (5 - bit % 6) & 1 == 1 {
                g.set_edge(i, j, true);
            }
            bit += 1;
        }
    }
    if !bit.is_multiple_of(6) {
        let pad = 6 - bit % 6;
        if current & ((1 << pad) - 1) != 0 {
            return Err(err(skip + pos - 1, "non-zero padding bits"));
        }
    }
    Ok(g)
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Graph6 { offset, reason } => Error::Graph6 {
            offset: offset + by,
            reason,
        },
        other => other,
    }
}

/// Encodes a graph as a graph6 record without header or newline.
pub fn encode_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::new();
    if n < 63 {
        out.push(n as u8 + 63);
    } else if n < 258_048 {
        out.push(126);
        for k in (0..3).rev() {
            out.push(((n >> (6 * k)) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for k in (0..6).rev() {
            out.push(((n >> (6 * k)) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut fill = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            fill += 1;
            if fill == 6 {
                out.push(acc + 63);
                acc = 0;
                fill = 0;
            }
        }
    }
    if fill > 0 {
        out.push((acc << (6 - fill)) + 63);
    }
    String::from_utf8(out).expect("graph6 output is ASCII")
}
