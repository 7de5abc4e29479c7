//! Polygon files: JSON `{"vertices": [[x, y], ...]}` or one `x y` pair per line.

use std::fmt::Write as _;

use eszk_core::{Point, Polygon, COORD_BOUND};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    /// JSON if the first non-blank character is `{`, text otherwise.
    Auto,
    Json,
    Text,
}

impl InputFormat {
    /// Guess from a file name: `.json` and `.txt` are taken at their word.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => InputFormat::Json,
            Some("txt") => InputFormat::Text,
            _ => InputFormat::Auto,
        }
    }
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}, column {column}: {message}")]
    Text {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(
        "line {line}, column {column}: coordinate {value} is outside the supported range ±{COORD_BOUND}"
    )]
    OutOfRange { line: usize, column: usize, value: i64 },
    #[error("input is not valid UTF-8")]
    Encoding,
    #[error("polygon has no vertices")]
    Empty,
}

#[derive(Serialize, Deserialize)]
struct PolygonFile {
    vertices: Vec<Point>,
}

pub fn parse_polygon(bytes: &[u8], hint: InputFormat) -> Result<Polygon, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|_| ParseError::Encoding)?;
    let json = match hint {
        InputFormat::Json => true,
        InputFormat::Text => false,
        InputFormat::Auto => text.trim_start().starts_with('{'),
    };
    let vertices = if json {
        parse_json(text)?
    } else {
        parse_text(text)?
    };
    Polygon::new(vertices).map_err(|_| ParseError::Empty)
}

fn parse_json(text: &str) -> Result<Vec<Point>, ParseError> {
    let file: PolygonFile = serde_json::from_str(text)?;
    Ok(file.vertices)
}

fn parse_text(text: &str) -> Result<Vec<Point>, ParseError> {
    let mut vertices = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let tokens: Vec<(usize, &str)> = tokens_with_columns(line);
        if tokens.is_empty() {
            continue;
        }
        if tokens.len() != 2 {
            let column = tokens.get(2).map_or(1, |t| t.0);
            return Err(ParseError::Text {
                line: line_no,
                column,
                message: format!("expected two integers \"x y\", found {} fields", tokens.len()),
            });
        }
        let mut coords = [0i64; 2];
        for (slot, &(column, tok)) in coords.iter_mut().zip(&tokens) {
            let value: i64 = tok.parse().map_err(|_| ParseError::Text {
                line: line_no,
                column,
                message: format!("\"{tok}\" is not a 64-bit integer"),
            })?;
            if value.abs() > COORD_BOUND || value == i64::MIN {
                return Err(ParseError::OutOfRange {
                    line: line_no,
                    column,
                    value,
                });
            }
            *slot = value;
        }
        vertices.push(Point::new(coords[0], coords[1]).expect("checked above"));
    }
    Ok(vertices)
}

/// Whitespace-separated tokens with 1-based character columns.
fn tokens_with_columns(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let chars: Vec<(usize, char)> = line.char_indices().collect();
    for (ci, &(bi, ch)) in chars.iter().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(ci),
            (true, Some(s)) => {
                out.push((s + 1, &line[chars[s].0..bi]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[chars[s].0..]));
    }
    out
}

pub fn serialize_polygon(p: &Polygon, format: InputFormat) -> String {
    match format {
        InputFormat::Text => {
            let mut s = String::new();
            for v in p.vertices() {
                let _ = writeln!(s, "{} {}", v.x(), v.y());
            }
            s
        }
        InputFormat::Json | InputFormat::Auto => {
            let file = PolygonFile {
                vertices: p.vertices().to_vec(),
            };
            let mut s = serde_json::to_string(&file).expect("plain data");
            s.push('\n');
            s
        }
    }
}
