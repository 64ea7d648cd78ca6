//! Valuation files and model-check reports.
//!
//! ```text
//! window { s, t }
//! caps nodes 2 edges 1
//! alphabet a { s, t }
//! atom p : {
//! node v0 v1
//! edge e1 a { s=v0, t=v1 }
//! ext { s=v0, t=v1 }
//! }
//! atom q : {
//! ,
//! }
//! ```
//!
//! Member graphs inside an atom block are separated by lines holding a
//! single comma; a block whose only content is separators contributes
//! empty hypergraphs (here: `u(q)` is the singleton of the empty graph).

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::hypergraph::{parse_hypergraph, TypedAlphabet};
use crate::logic::parse_formula;
use crate::symbol::Sym;

use super::{BoundedUniverse, Language, ModelReport, Valuation};

#[derive(Debug, Error)]
#[error("line {line}: {msg}")]
pub struct SemParseError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, SemParseError> {
    Err(SemParseError {
        line,
        msg: msg.into(),
    })
}

pub fn parse_valuation(input: &str) -> Result<Valuation, SemParseError> {
    let mut window: Option<BTreeSet<Sym>> = None;
    let mut caps: Option<(usize, usize)> = None;
    let mut alphabet = TypedAlphabet::new();
    let mut atoms: BTreeMap<crate::logic::Formula, Language> = BTreeMap::new();
    let mut lines = input.lines().enumerate().peekable();
    while let Some((lineno, raw)) = lines.next() {
        let line_num = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match keyword {
            "window" => {
                let inner = rest
                    .strip_prefix('{')
                    .and_then(|r| r.trim_end().strip_suffix('}'))
                    .ok_or_else(|| SemParseError {
                        line: line_num,
                        msg: "expected `{ variables }`".into(),
                    })?;
                window = Some(
                    inner
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(Sym::new)
                        .collect(),
                );
            }
            "caps" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                match parts.as_slice() {
                    ["nodes", n, "edges", e] => {
                        let n = n.parse().map_err(|_| SemParseError {
                            line: line_num,
                            msg: "bad node cap".into(),
                        })?;
                        let e = e.parse().map_err(|_| SemParseError {
                            line: line_num,
                            msg: "bad edge cap".into(),
                        })?;
                        caps = Some((n, e));
                    }
                    _ => return err(line_num, "expected `caps nodes <n> edges <e>`"),
                }
            }
            "alphabet" => {
                let Some(brace) = rest.find('{') else {
                    return err(line_num, "expected `{` after the label");
                };
                let label = rest[..brace].trim();
                let inner = rest[brace + 1..]
                    .trim_end()
                    .strip_suffix('}')
                    .ok_or_else(|| SemParseError {
                        line: line_num,
                        msg: "expected closing `}`".into(),
                    })?;
                let ty: BTreeSet<Sym> = inner
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(Sym::new)
                    .collect();
                alphabet
                    .insert(Sym::new(label), ty)
                    .map_err(|e| SemParseError {
                        line: line_num,
                        msg: e.to_string(),
                    })?;
            }
            "atom" => {
                let Some(atom_text) = rest.strip_suffix(": {").map(str::trim) else {
                    return err(line_num, "expected `atom <formula> : {`");
                };
                let atom = parse_formula(atom_text).map_err(|e| SemParseError {
                    line: line_num,
                    msg: e.to_string(),
                })?;
                let mut language = Language::empty();
                let mut block = String::new();
                let mut block_start = line_num + 1;
                let mut any_separator = false;
                let mut closed = false;
                for (inner_lineno, inner_raw) in lines.by_ref() {
                    let inner_num = inner_lineno + 1;
                    let inner = inner_raw.split('#').next().unwrap_or("").trim_end();
                    match inner.trim() {
                        "}" => {
                            if !block.trim().is_empty() || any_separator {
                                let g = parse_hypergraph(&block).map_err(|e| SemParseError {
                                    line: block_start + e.line - 1,
                                    msg: e.msg,
                                })?;
                                language.insert(&g);
                            }
                            closed = true;
                            break;
                        }
                        "," => {
                            let g = parse_hypergraph(&block).map_err(|e| SemParseError {
                                line: block_start + e.line - 1,
                                msg: e.msg,
                            })?;
                            language.insert(&g);
                            any_separator = true;
                            block.clear();
                            block_start = inner_num + 1;
                        }
                        _ => {
                            block.push_str(inner);
                            block.push('\n');
                        }
                    }
                }
                if !closed {
                    return err(line_num, "unterminated atom block");
                }
                atoms.insert(atom.alpha_normalize(), language);
            }
            other => return err(line_num, format!("unknown directive `{other}`")),
        }
    }
    let Some(window) = window else {
        return err(1, "missing `window` line");
    };
    let (max_nodes, max_edges) = caps.unwrap_or((3, 2));
    Ok(Valuation {
        universe: BoundedUniverse {
            alphabet,
            window,
            max_nodes,
            max_edges,
        },
        atoms,
    })
}

/// Structured text for a model-check report.
pub fn render_report(report: &ModelReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "checks: {}\nviolations: {}\nclipped: {}\n",
        report.checks,
        report.violations.len(),
        report.clipped
    ));
    for v in &report.violations {
        out.push_str(&format!("clause {}: {}\n", v.clause, v.detail));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::check_model_axioms;

    const SAMPLE: &str = "\
window { s, t }
caps nodes 2 edges 1
alphabet a { s, t }
atom p : {
node v0 v1
edge e1 a { s=v0, t=v1 }
ext { s=v0, t=v1 }
}
atom q : {
,
}
";

    #[test]
    fn parses_valuation_file() {
        let val = parse_valuation(SAMPLE).unwrap();
        assert_eq!(val.universe.window.len(), 2);
        assert_eq!(val.universe.max_nodes, 2);
        assert_eq!(val.atoms.len(), 2);
        let p = val.atom_language(&parse_formula("p").unwrap());
        assert_eq!(p.len(), 1);
        let q = val.atom_language(&parse_formula("q").unwrap());
        assert_eq!(q.len(), 1);
        assert!(q.contains(&crate::hypergraph::Hypergraph::empty()));
    }

    #[test]
    fn report_renders() {
        let val = crate::semantics::close_under_substitution(&parse_valuation(SAMPLE).unwrap());
        let report = check_model_axioms(&val, &[parse_formula("p * q").unwrap()]);
        let text = render_report(&report);
        assert!(text.contains("violations: 0"), "report was:\n{text}");
    }

    #[test]
    fn bad_directive_rejected() {
        assert!(parse_valuation("frobnicate { }").is_err());
    }
}
