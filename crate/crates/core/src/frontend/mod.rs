//! Language frontend: parses corpus sources into a language-neutral view
//! (function inventory, call sites) and supplies LOC and diff statistics.
//!
//! The grammar depth is deliberately shallow: function definitions,
//! parameters, call expressions, raise/throw statements, and branching are
//! all the downstream consumers (anchor mining, gates) need.

mod diff;
mod java;
mod python;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{CodeSnapshot, Language};

pub use diff::{diff_stats, DiffStats};

/// Function visibility as seen from outside the module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Visibility {
    Public,
    NonPublic,
}

/// One call expression inside a function body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CallSite {
    /// Dotted callee name as written, e.g. `cursor.execute` or `open`.
    pub callee: String,
    pub line: usize,
    /// Raw argument text between the call parentheses.
    pub args: String,
}

impl CallSite {
    /// Identifiers appearing in the argument text.
    pub fn arg_identifiers(&self) -> BTreeSet<String> {
        identifiers_in(&self.args)
    }
}

/// Parsed view of one function definition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionInfo {
    pub name: String,
    pub parameter_names: Vec<String>,
    pub visibility: Visibility,
    /// 1-based inclusive line range from the header to the last body line.
    pub body_span: (usize, usize),
    pub contains_branch_or_raise: bool,
    pub calls: Vec<CallSite>,
}

impl FunctionInfo {
    pub fn called_names(&self) -> Vec<&str> {
        self.calls.iter().map(|c| c.callee.as_str()).collect()
    }

    pub fn is_public(&self) -> bool {
        self.visibility == Visibility::Public
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FrontendError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unsupported corpus language: {0}")]
    UnsupportedLanguage(String),
}

impl FrontendError {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        FrontendError::Parse {
            line,
            message: message.into(),
        }
    }
}

/// Parse every top-level or class-level function definition, in source order.
pub fn parse_functions(snapshot: &CodeSnapshot) -> Result<Vec<FunctionInfo>, FrontendError> {
    parse_source(&snapshot.source, snapshot.language)
}

/// Same as [`parse_functions`] but over raw text.
pub fn parse_source(source: &str, language: Language) -> Result<Vec<FunctionInfo>, FrontendError> {
    match language {
        Language::Python => python::parse(source),
        Language::Java => java::parse(source),
    }
}

/// Lines of code excluding blanks and comment-only lines.
pub fn count_loc(snapshot: &CodeSnapshot) -> u32 {
    count_source_loc(&snapshot.source, snapshot.language)
}

/// LOC rule: a line counts unless it is blank or its first non-whitespace
/// content begins a comment (`#` for Python; `//` or a line inside `/* */`
/// for Java).
pub fn count_source_loc(source: &str, language: Language) -> u32 {
    match language {
        Language::Python => source
            .lines()
            .filter(|l| {
                let t = l.trim_start();
                !t.is_empty() && !t.starts_with('#')
            })
            .count() as u32,
        Language::Java => {
            let mut count = 0u32;
            let mut in_block = false;
            for line in source.lines() {
                let t = line.trim_start();
                if in_block {
                    // Consume block-comment content; anything after `*/` on
                    // the same line still does not count for this line.
                    if block_comment_closes(t) {
                        in_block = false;
                    }
                    continue;
                }
                if t.is_empty() || t.starts_with("//") {
                    continue;
                }
                if t.starts_with("/*") {
                    if !block_comment_closes(t) {
                        in_block = true;
                    }
                    continue;
                }
                count += 1;
                if line_opens_block_comment(t) {
                    in_block = true;
                }
            }
            count
        }
    }
}

fn block_comment_closes(text: &str) -> bool {
    // Net effect of `/*` and `*/` occurrences left to right.
    let mut open = true;
    let mut rest = text;
    loop {
        match (rest.find("/*"), rest.find("*/")) {
            (_, None) => return !open,
            (Some(o), Some(c)) if o < c => {
                open = true;
                rest = &rest[o + 2..];
            }
            (_, Some(c)) => {
                open = false;
                rest = &rest[c + 2..];
            }
        }
    }
}

fn line_opens_block_comment(text: &str) -> bool {
    let mut open = false;
    let mut rest = text;
    loop {
        match (rest.find("/*"), rest.find("*/")) {
            (None, _) => return open,
            (Some(o), Some(c)) if c < o => {
                open = false;
                rest = &rest[c + 2..];
            }
            (Some(o), _) => {
                open = true;
                rest = &rest[o + 2..];
            }
        }
    }
}

/// Set of (name, arity) pairs for Public functions.
pub fn public_interfaces(
    snapshot: &CodeSnapshot,
) -> Result<BTreeSet<(String, usize)>, FrontendError> {
    let functions = parse_functions(snapshot)?;
    Ok(functions
        .iter()
        .filter(|f| f.is_public())
        .map(|f| (f.name.clone(), f.parameter_names.len()))
        .collect())
}

/// All identifier tokens in a text fragment.
pub fn identifiers_in(text: &str) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let mut current = String::new();
    for ch in text.chars() {
        if ch.is_ascii_alphanumeric() || ch == '_' {
            current.push(ch);
        } else if !current.is_empty() {
            if !current.chars().next().unwrap().is_ascii_digit() {
                out.insert(std::mem::take(&mut current));
            } else {
                current.clear();
            }
        }
    }
    if !current.is_empty() && !current.chars().next().unwrap().is_ascii_digit() {
        out.insert(current);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn py(source: &str) -> CodeSnapshot {
        CodeSnapshot::new(source, Language::Python, 0)
    }

    #[test]
    fn parses_validation_function_with_raise() {
        let src = "def validate_user_input(data):\n    if not data:\n        raise ValueError(\"empty\")\n    return data\n";
        let funcs = parse_source(src, Language::Python).unwrap();
        assert_eq!(funcs.len(), 1);
        assert_eq!(funcs[0].name, "validate_user_input");
        assert_eq!(funcs[0].parameter_names, vec!["data"]);
        assert!(funcs[0].contains_branch_or_raise);
        assert_eq!(funcs[0].visibility, Visibility::Public);
    }

    #[test]
    fn empty_file_parses_to_no_functions() {
        assert!(parse_source("", Language::Python).unwrap().is_empty());
        assert!(parse_source("", Language::Java).unwrap().is_empty());
    }

    #[test]
    fn java_private_method_is_non_public() {
        let src = "class Reader {\n    private boolean isSafePath(String p) {\n        return p.startsWith(\"/data\");\n    }\n}\n";
        let funcs = parse_source(src, Language::Java).unwrap();
        assert_eq!(funcs.len(), 1);
        assert_eq!(funcs[0].name, "isSafePath");
        assert_eq!(funcs[0].visibility, Visibility::NonPublic);
        assert_eq!(funcs[0].parameter_names, vec!["p"]);
    }

    #[test]
    fn loc_counts_code_lines_only() {
        let src = "x = 1\n\ny = 2\n# comment\n\nz = 3\n";
        assert_eq!(count_source_loc(src, Language::Python), 3);
        assert_eq!(count_source_loc("", Language::Python), 0);
    }

    #[test]
    fn java_loc_skips_block_comments() {
        let src = "class A {\n/* start\ninside\nend */\nint x; // tail\n}\n";
        assert_eq!(count_source_loc(src, Language::Java), 3);
    }

    #[test]
    fn public_interface_excludes_underscore_names() {
        let snap = py("def f(a, b):\n    return a\n\ndef _g(x):\n    return x\n");
        let set = public_interfaces(&snap).unwrap();
        assert_eq!(set.len(), 1);
        assert!(set.contains(&("f".to_string(), 2)));
    }

    #[test]
    fn interface_difference_counts_new_exports() {
        let base = py("def f(a):\n    return a\n");
        let fin = py("def f(a):\n    return a\n\ndef export_report(fmt):\n    return fmt\n");
        let before = public_interfaces(&base).unwrap();
        let after = public_interfaces(&fin).unwrap();
        assert_eq!(after.difference(&before).count(), 1);
    }

    #[test]
    fn parse_is_deterministic() {
        let src = "def a(x):\n    return x\n\ndef b(y):\n    if y:\n        return y\n";
        let one = parse_source(src, Language::Python).unwrap();
        let two = parse_source(src, Language::Python).unwrap();
        assert_eq!(one, two);
    }

    proptest! {
        #[test]
        fn loc_never_exceeds_raw_line_count(lines in proptest::collection::vec("[ -~]{0,30}", 0..40)) {
            let src = lines.join("\n");
            let raw = src.lines().count() as u32;
            prop_assert!(count_source_loc(&src, Language::Python) <= raw);
            prop_assert!(count_source_loc(&src, Language::Java) <= raw);
        }
    }
}
