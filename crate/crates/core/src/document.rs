//! Reading and writing families as text or JSON.
//!
//! Text:
//!
//! ```text
//! # optional comments
//! n=3
//! 1,2
//! 3
//! -
//! ```
//!
//! One set per line as ascending elements; `-` is the empty set. JSON is a
//! single object `{"n": 3, "sets": [[1,2],[3],[]]}`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::Family;
use crate::mask::{GroundSize, SetMask};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocumentFormat {
    Text,
    Json,
}

/// A family as written in a file: sets keep their order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyDocument {
    pub n: GroundSize,
    pub sets: Vec<SetMask>,
    pub format: DocumentFormat,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonDocument {
    n: u32,
    sets: Vec<Vec<u32>>,
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

impl FamilyDocument {
    pub fn from_family(f: &Family, format: DocumentFormat) -> Self {
        FamilyDocument { n: f.n(), sets: f.members().to_vec(), format }
    }

    pub fn to_family(&self) -> Result<Family> {
        Family::from_sets(self.n, self.sets.iter().copied())
    }

    pub fn emit(&self) -> String {
        match self.format {
            DocumentFormat::Text => {
                let mut out = format!("n={}\n", self.n);
                for s in &self.sets {
                    if s.is_empty() {
                        out.push('-');
                    } else {
                        let elems: Vec<String> = s.elements().map(|e| e.to_string()).collect();
                        out.push_str(&elems.join(","));
                    }
                    out.push('\n');
                }
                out
            }
            DocumentFormat::Json => {
                let sets: Vec<Vec<u32>> = self.sets.iter().map(|s| s.elements().collect()).collect();
                let value = serde_json::json!({ "n": self.n.get(), "sets": sets });
                format!("{value}\n")
            }
        }
    }
}

/// Parses either format; input whose first non-blank character is `{` is
/// read as JSON.
pub fn parse_family(input: &str) -> Result<FamilyDocument> {
    if input.trim_start().starts_with('{') {
        parse_json(input)
    } else {
        parse_text(input)
    }
}

fn ground(n: u32, line: usize) -> Result<GroundSize> {
    GroundSize::dense(n).map_err(|e| parse_error(line, e.to_string()))
}

fn mask_from(n: GroundSize, elements: &[u32], line: usize) -> Result<SetMask> {
    let mut bits = 0u64;
    let mut prev = 0u32;
    for &e in elements {
        if e == 0 || e > n.get() {
            return Err(parse_error(line, format!("element {e} out of range 1..={n}")));
        }
        if e <= prev {
            return Err(parse_error(line, "elements must be strictly ascending"));
        }
        prev = e;
        bits |= 1 << (e - 1);
    }
    Ok(SetMask(bits))
}

fn push_unique(seen: &mut HashSet<SetMask>, sets: &mut Vec<SetMask>, s: SetMask, line: usize) -> Result<()> {
    if !seen.insert(s) {
        return Err(parse_error(line, format!("duplicate set {s}")));
    }
    sets.push(s);
    Ok(())
}

fn parse_text(input: &str) -> Result<FamilyDocument> {
    let mut n = None;
    let mut sets = Vec::new();
    let mut seen = HashSet::new();
    for (i, raw) in input.lines().enumerate() {
        let line = i + 1;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let Some(ground_size) = n else {
            let value = text.strip_prefix("n=").ok_or_else(|| parse_error(line, "missing header \"n=<int>\""))?;
            let value: u32 =
                value.trim().parse().map_err(|_| parse_error(line, format!("malformed header {text:?}")))?;
            n = Some(ground(value, line)?);
            continue;
        };
        let s = if text == "-" {
            SetMask::EMPTY
        } else {
            let elements = text
                .split(',')
                .map(|tok| tok.trim().parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| parse_error(line, format!("malformed set line {text:?}")))?;
            mask_from(ground_size, &elements, line)?
        };
        push_unique(&mut seen, &mut sets, s, line)?;
    }
    let n = n.ok_or_else(|| parse_error(input.lines().count().max(1), "missing header \"n=<int>\""))?;
    Ok(FamilyDocument { n, sets, format: DocumentFormat::Text })
}

fn parse_json(input: &str) -> Result<FamilyDocument> {
    let doc: JsonDocument =
        serde_json::from_str(input).map_err(|e| parse_error(e.line(), format!("malformed JSON: {e}")))?;
    // Positions inside a well-formed document are reported on the line of
    // the opening brace.
    let line = input.lines().position(|l| !l.trim().is_empty()).unwrap_or(0) + 1;
    let n = ground(doc.n, line)?;
    let mut sets = Vec::new();
    let mut seen = HashSet::new();
    for elements in &doc.sets {
        let s = mask_from(n, elements, line)?;
        push_unique(&mut seen, &mut sets, s, line)?;
    }
    Ok(FamilyDocument { n, sets, format: DocumentFormat::Json })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_examples() {
        let d = parse_family("n=3\n1,2\n3\n").unwrap();
        assert_eq!(d.sets, vec![SetMask(0b011), SetMask(0b100)]);
        let d = parse_family("n=3\n-\n").unwrap();
        assert_eq!(d.sets, vec![SetMask::EMPTY]);
        let e = parse_family("n=2\n1,3\n").unwrap_err();
        assert_eq!(e, Error::Parse { line: 2, message: "element 3 out of range 1..=2".into() });
    }

    #[test]
    fn text_errors_carry_lines() {
        let line = |s: &str| match parse_family(s).unwrap_err() {
            Error::Parse { line, .. } => line,
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(line("# c\n1,2\n"), 2);
        assert_eq!(line("n=3\n1,2\n\n2,1\n"), 4);
        assert_eq!(line("n=3\n1\n2\n1\n"), 4);
        assert_eq!(line("n=3\n1;2\n"), 2);
        assert_eq!(line("n=x\n"), 1);
        assert_eq!(line(""), 1);
    }

    #[test]
    fn json_round_trip() {
        let d = parse_family("{\"n\": 3, \"sets\": [[1,2], [], [3]]}").unwrap();
        assert_eq!(d.sets, vec![SetMask(0b011), SetMask::EMPTY, SetMask(0b100)]);
        assert_eq!(parse_family(&d.emit()).unwrap(), d);
        assert!(parse_family("{\"n\": 3, \"sets\": [[4]]}").is_err());
        assert!(parse_family("{\"n\": 3, \"sets\": [[1],[1]]}").is_err());
    }
}
