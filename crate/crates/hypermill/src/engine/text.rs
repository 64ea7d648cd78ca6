//! `.htr` rule files and `.hts` system files.
//!
//! A rule is two `.hgr` blocks separated by a `=>` line under a
//! `rule <name>` header; a system file adds `nonterminal`/`terminal`
//! type lines and a `start` block:
//!
//! ```text
//! nonterminal S { s, t }
//! terminal a { s, t }
//! start
//! node v0 v1
//! edge e1 S { s=v0, t=v1 }
//! ext { s=v0, t=v1 }
//! rule unfold
//! node v0 v1
//! edge e1 S { s=v0, t=v1 }
//! ext { s=v0, t=v1 }
//! =>
//! node v0 v1
//! edge e1 a { s=v0, t=v1 }
//! ext { s=v0, t=v1 }
//! ```

use std::collections::BTreeSet;

use thiserror::Error;

use crate::hypergraph::{parse_hypergraph, render_hypergraph, Hypergraph, TypedAlphabet};
use crate::symbol::Sym;

use super::{HtRule, HtSystem};

#[derive(Debug, Error)]
#[error("line {line}: {msg}")]
pub struct HtsParseError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, HtsParseError> {
    Err(HtsParseError {
        line,
        msg: msg.into(),
    })
}

struct Block {
    start_line: usize,
    text: String,
}

impl Block {
    fn parse(&self) -> Result<Hypergraph, HtsParseError> {
        parse_hypergraph(&self.text).map_err(|e| HtsParseError {
            line: self.start_line + e.line - 1,
            msg: e.msg,
        })
    }
}

enum Section {
    None,
    Start(Block),
    RuleLhs(Sym, Block),
    RuleRhs(Sym, Block, Block),
}

struct FileParser {
    alphabet_lines: Vec<(usize, bool, String)>,
    start: Option<Block>,
    rules: Vec<(Sym, Block, Block)>,
    section: Section,
}

impl FileParser {
    fn new() -> FileParser {
        FileParser {
            alphabet_lines: Vec::new(),
            start: None,
            rules: Vec::new(),
            section: Section::None,
        }
    }

    fn close_section(&mut self, line: usize) -> Result<(), HtsParseError> {
        match std::mem::replace(&mut self.section, Section::None) {
            Section::None => Ok(()),
            Section::Start(b) => {
                if self.start.is_some() {
                    return err(line, "duplicate start block");
                }
                self.start = Some(b);
                Ok(())
            }
            Section::RuleLhs(name, _) => err(
                line,
                format!("rule `{name}` is missing the `=>` separator"),
            ),
            Section::RuleRhs(name, lhs, rhs) => {
                self.rules.push((name, lhs, rhs));
                Ok(())
            }
        }
    }

    fn feed(&mut self, lineno: usize, raw: &str) -> Result<(), HtsParseError> {
        let line = raw.split('#').next().unwrap_or("").trim_end();
        let trimmed = line.trim_start();
        if trimmed.is_empty() {
            return Ok(());
        }
        let keyword = trimmed.split_whitespace().next().unwrap_or("");
        match keyword {
            "nonterminal" | "terminal" => {
                self.close_section(lineno)?;
                self.alphabet_lines.push((
                    lineno,
                    keyword == "terminal",
                    trimmed[keyword.len()..].to_string(),
                ));
            }
            "start" => {
                self.close_section(lineno)?;
                if !trimmed["start".len()..].trim().is_empty() {
                    return err(lineno, "start takes no arguments; the block follows");
                }
                self.section = Section::Start(Block {
                    start_line: lineno + 1,
                    text: String::new(),
                });
            }
            "rule" => {
                self.close_section(lineno)?;
                let name = trimmed["rule".len()..].trim();
                if name.is_empty() {
                    return err(lineno, "rule needs a name");
                }
                self.section = Section::RuleLhs(
                    Sym::new(name),
                    Block {
                        start_line: lineno + 1,
                        text: String::new(),
                    },
                );
            }
            "=>" => {
                let section = std::mem::replace(&mut self.section, Section::None);
                match section {
                    Section::RuleLhs(name, lhs) => {
                        self.section = Section::RuleRhs(
                            name,
                            lhs,
                            Block {
                                start_line: lineno + 1,
                                text: String::new(),
                            },
                        );
                    }
                    _ => return err(lineno, "`=>` outside a rule"),
                }
            }
            _ => match &mut self.section {
                Section::Start(b) | Section::RuleLhs(_, b) | Section::RuleRhs(_, _, b) => {
                    b.text.push_str(line);
                    b.text.push('\n');
                }
                Section::None => {
                    return err(lineno, format!("unexpected line `{trimmed}`"));
                }
            },
        }
        Ok(())
    }
}

fn parse_type_line(lineno: usize, rest: &str) -> Result<(Sym, BTreeSet<Sym>), HtsParseError> {
    // `S { s, t }` or `Q1 { }`
    let rest = rest.trim();
    let Some(brace) = rest.find('{') else {
        return err(lineno, "expected `{` after the label");
    };
    let label = rest[..brace].trim();
    if label.is_empty() {
        return err(lineno, "expected a label");
    }
    let inner = rest[brace + 1..]
        .strip_suffix('}')
        .ok_or_else(|| HtsParseError {
            line: lineno,
            msg: "expected closing `}`".into(),
        })?;
    let mut ty = BTreeSet::new();
    for part in inner.split(',') {
        let sel = part.trim();
        if !sel.is_empty() {
            ty.insert(Sym::new(sel));
        }
    }
    Ok((Sym::new(label), ty))
}

fn parse_with(input: &str) -> Result<FileParser, HtsParseError> {
    let mut p = FileParser::new();
    let mut last = 0;
    for (lineno, raw) in input.lines().enumerate() {
        last = lineno + 1;
        p.feed(lineno + 1, raw)?;
    }
    p.close_section(last + 1)?;
    Ok(p)
}

/// Parses an `.htr` file: one or more named rules.
pub fn parse_rules(input: &str) -> Result<Vec<HtRule>, HtsParseError> {
    let p = parse_with(input)?;
    if !p.alphabet_lines.is_empty() || p.start.is_some() {
        return err(1, "rule files contain only rule blocks");
    }
    let mut rules = Vec::new();
    for (name, lhs, rhs) in p.rules {
        let lhs_line = lhs.start_line;
        let rule = HtRule::new(name, lhs.parse()?, rhs.parse()?).map_err(|e| HtsParseError {
            line: lhs_line,
            msg: e.to_string(),
        })?;
        rules.push(rule);
    }
    if rules.is_empty() {
        return err(1, "no rules found");
    }
    Ok(rules)
}

/// Parses an `.hts` file: alphabets, start block, rules.
pub fn parse_system(input: &str) -> Result<HtSystem, HtsParseError> {
    let p = parse_with(input)?;
    let mut nonterminals = TypedAlphabet::new();
    let mut terminals = TypedAlphabet::new();
    for (lineno, is_terminal, rest) in &p.alphabet_lines {
        let (label, ty) = parse_type_line(*lineno, rest)?;
        let target = if *is_terminal {
            &mut terminals
        } else {
            &mut nonterminals
        };
        target.insert(label, ty).map_err(|e| HtsParseError {
            line: *lineno,
            msg: e.to_string(),
        })?;
    }
    let Some(start) = p.start else {
        return err(1, "missing start block");
    };
    let start_line = start.start_line;
    let start = start.parse()?;
    let mut rules = Vec::new();
    for (name, lhs, rhs) in p.rules {
        let lhs_line = lhs.start_line;
        let rule = HtRule::new(name, lhs.parse()?, rhs.parse()?).map_err(|e| HtsParseError {
            line: lhs_line,
            msg: e.to_string(),
        })?;
        rules.push(rule);
    }
    HtSystem::new(nonterminals, terminals, rules, start).map_err(|e| HtsParseError {
        line: start_line,
        msg: e.to_string(),
    })
}

pub fn render_rule(rule: &HtRule) -> String {
    format!(
        "rule {}\n{}=>\n{}",
        rule.name,
        render_hypergraph(&rule.lhs),
        render_hypergraph(&rule.rhs)
    )
}

pub fn render_system(sys: &HtSystem) -> String {
    let mut out = String::new();
    for (label, ty) in sys.nonterminals.iter() {
        let sels: Vec<String> = ty.iter().map(|s| s.to_string()).collect();
        out.push_str(&format!("nonterminal {} {{ {} }}\n", label, sels.join(", ")));
    }
    for (label, ty) in sys.terminals.iter() {
        let sels: Vec<String> = ty.iter().map(|s| s.to_string()).collect();
        out.push_str(&format!("terminal {} {{ {} }}\n", label, sels.join(", ")));
    }
    out.push_str("start\n");
    out.push_str(&render_hypergraph(&sys.start));
    for rule in &sys.rules {
        out.push_str(&render_rule(rule));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::np_complete_system;

    #[test]
    fn system_round_trip() {
        let sys = np_complete_system();
        let text = render_system(&sys);
        let back = parse_system(&text).unwrap();
        assert_eq!(back.rules.len(), sys.rules.len());
        assert_eq!(back.start, sys.start);
        for (a, b) in sys.rules.iter().zip(back.rules.iter()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn rule_file_round_trip() {
        let sys = np_complete_system();
        let text: String = sys.rules.iter().map(render_rule).collect();
        let back = parse_rules(&text).unwrap();
        assert_eq!(back.len(), sys.rules.len());
    }

    #[test]
    fn missing_separator_reported() {
        let text = "rule broken\nnode v0\n";
        let e = parse_rules(text).unwrap_err();
        assert!(e.msg.contains("=>"));
    }

    #[test]
    fn type_errors_are_located() {
        let text = "nonterminal S { s, t }\nstart\nnode v0 v1\nedge e1 S { s=v0, t=v9 }\next { s=v0, t=v1 }\n";
        let e = parse_system(text).unwrap_err();
        assert_eq!(e.line, 4);
    }

    #[test]
    fn undeclared_label_rejected() {
        let text = "nonterminal S { s, t }\nstart\nnode v0 v1\nedge e1 Z { s=v0, t=v1 }\next { s=v0, t=v1 }\n";
        assert!(parse_system(text).is_err());
    }
}
