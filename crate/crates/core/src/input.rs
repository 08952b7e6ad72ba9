//! Reading graph files: graph6 (one record per line) or adjacency-text
//! matrices separated by blank lines.

use crate::error::Error;
use crate::graph::{parse_adjacency_text, parse_graph6, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Graph6,
    AdjacencyText,
}

/// A graph together with the 1-based line on which its record starts.
#[derive(Debug, Clone)]
pub struct GraphRecord {
    pub line: usize,
    pub graph: Graph,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub message: String,
}

fn is_matrix_char(c: char) -> bool {
    matches!(c, '0' | '1' | ',' | '[' | ']' | '{' | '}' | '\\' | ';') || c.is_whitespace()
}

fn is_comment(line: &str) -> bool {
    line.trim_start().starts_with('#')
}

/// Guesses the format from the first non-blank, non-comment line. Graph6
/// bytes start at `?`, so a line of digits, separators and brackets can only
/// be a matrix row.
pub fn detect_format(text: &str) -> Option<InputFormat> {
    let line = text
        .lines()
        .find(|l| !l.trim().is_empty() && !is_comment(l))?;
    if line.chars().all(is_matrix_char) {
        Some(InputFormat::AdjacencyText)
    } else {
        Some(InputFormat::Graph6)
    }
}

/// Splits `text` into graph records. Lines starting with `#` are comments.
/// Records that fail to parse are returned as diagnostics in their place, so
/// callers can keep going and still report every problem in input order.
pub fn read_graphs(text: &str) -> Vec<Result<GraphRecord, Diagnostic>> {
    match detect_format(text) {
        None => Vec::new(),
        Some(InputFormat::Graph6) => read_graph6(text),
        Some(InputFormat::AdjacencyText) => read_matrices(text),
    }
}

fn read_graph6(text: &str) -> Vec<Result<GraphRecord, Diagnostic>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() || is_comment(raw) {
            continue;
        }
        out.push(match parse_graph6(raw) {
            Ok(graph) => Ok(GraphRecord { line, graph }),
            Err(e) => Err(Diagnostic {
                line,
                message: e.to_string(),
            }),
        });
    }
    out
}

fn read_matrices(text: &str) -> Vec<Result<GraphRecord, Diagnostic>> {
    let lines: Vec<&str> = text.lines().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        if lines[i].trim().is_empty() || is_comment(lines[i]) {
            i += 1;
            continue;
        }
        let start = i;
        while i < lines.len() && !lines[i].trim().is_empty() && !is_comment(lines[i]) {
            i += 1;
        }
        out.push(parse_block(&lines[start..i], start + 1));
    }
    out
}

fn parse_block(block: &[&str], first_line: usize) -> Result<GraphRecord, Diagnostic> {
    // Lines holding only brackets are skipped by the parser, so matrix rows
    // are mapped back to file lines here.
    let row_lines: Vec<usize> = block
        .iter()
        .enumerate()
        .filter(|(_, l)| l.chars().any(|c| !is_matrix_char(c) || c == '0' || c == '1'))
        .map(|(k, _)| first_line + k)
        .collect();
    let body = block.join("\n").replace(';', "\n");
    match parse_adjacency_text(&body) {
        Ok(graph) => Ok(GraphRecord {
            line: first_line,
            graph,
        }),
        Err(e) => {
            let line = match &e {
                Error::AdjacencyText { row, .. } if *row > 0 => {
                    row_lines.get(row - 1).copied().unwrap_or(first_line)
                }
                _ => first_line,
            };
            Err(Diagnostic {
                line,
                message: e.to_string(),
            })
        }
    }
}
