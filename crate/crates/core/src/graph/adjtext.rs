use super::Graph;
use crate::error::{Error, Result};

fn err(row: usize, col: usize, reason: impl Into<String>) -> Error {
    Error::AdjacencyText {
        row,
        col,
        reason: reason.into(),
    }
}

/// Parses a 0/1 adjacency matrix written as text rows.
///
/// Entries are separated by commas and/or whitespace. Bracket characters
/// (`[]{}`) and backslashes are ignored so that matrices pasted from LaTeX or
/// array literals parse unchanged; lines left empty are skipped. Rows and
/// columns in errors are 1-based.
pub fn parse_adjacency_text(text: &str) -> Result<Graph> {
    let mut rows: Vec<Vec<bool>> = Vec::new();
    for line in text.lines() {
        let cleaned: String = line
            .chars()
            .map(|c| match c {
                '[' | ']' | '{' | '}' | '\\' | ',' => ' ',
                c => c,
            })
            .collect();
        let tokens: Vec<&str> = cleaned.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let r = rows.len() + 1;
        let row = tokens
            .iter()
            .enumerate()
            .map(|(c, tok)| match *tok {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(err(r, c + 1, format!("non-binary token {other:?}"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        rows.push(row);
    }

    let n = rows.len();
    if n == 0 {
        return Err(err(0, 0, "no matrix rows"));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(err(
                i + 1,
                row.len(),
                format!("matrix is not square: {n} rows but {} entries", row.len()),
            ));
        }
    }
    for i in 0..n {
        if rows[i][i] {
            return Err(err(i + 1, i + 1, "nonzero diagonal entry"));
        }
        for j in i + 1..n {
            if rows[i][j] != rows[j][i] {
                return Err(err(i + 1, j + 1, "asymmetric entry"));
            }
        }
    }
    Graph::from_adjacency_rows(&rows)
}
