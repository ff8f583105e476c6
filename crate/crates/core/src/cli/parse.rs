//! Sectioned `key = value` configuration files.
//!
//! ```text
//! # comment
//! [traffic]
//! lambda_a = 0.5      # trailing comments are allowed
//! [link]
//! ranges = 100, 150
//! ```
//!
//! Keys left out keep their defaults. Unknown sections or keys, duplicate
//! keys and malformed values are errors.

use std::collections::HashSet;
use std::path::Path;

use super::schema::{lookup, suggest, SECTIONS};
use crate::error::{Error, Result};
use crate::experiments::ExperimentConfig;

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses and validates configuration text.
pub fn parse_config_str(text: &str) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    let mut section: Option<&str> = None;
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return Err(parse_err(line_no, indent + 1, "section header lacks a closing `]`"));
            };
            let name = name.trim();
            let Some(&known) = SECTIONS.iter().find(|s| **s == name) else {
                return Err(parse_err(
                    line_no,
                    indent + 2,
                    format!("unknown section [{name}]; expected one of {}", SECTIONS.join(", ")),
                ));
            };
            section = Some(known);
            continue;
        }
        let Some(eq) = content.find('=') else {
            return Err(parse_err(line_no, indent + 1, "expected `key = value`"));
        };
        let Some(sec) = section else {
            return Err(parse_err(line_no, indent + 1, "key before any [section] header"));
        };
        let key = content[..eq].trim();
        let value_part = &content[eq + 1..];
        let value = value_part.trim();
        let value_col = eq + 2 + (value_part.len() - value_part.trim_start().len());
        if key.is_empty() {
            return Err(parse_err(line_no, indent + 1, "missing key before `=`"));
        }
        let Some(spec) = lookup(sec, key) else {
            return Err(Error::UnknownKey {
                section: sec.into(),
                key: key.into(),
                suggestion: suggest(sec, key),
            });
        };
        if !seen.insert((sec, spec.key)) {
            return Err(parse_err(
                line_no,
                indent + 1,
                format!("duplicate key `{key}` in [{sec}]"),
            ));
        }
        if value.is_empty() {
            return Err(parse_err(line_no, value_col, format!("missing value for `{key}`")));
        }
        (spec.set)(&mut cfg, value).map_err(|m| parse_err(line_no, value_col, format!("{key}: {m}")))?;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_str(&text)
}
