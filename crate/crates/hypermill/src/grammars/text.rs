//! `.gram` grammar files.
//!
//! ```text
//! logic mill1
//! type a { s, t }
//! type b { 1, 2, 3 }
//! ext { s, t }
//! start : p(s,t) * r * r * r
//! lex a : q(s,t)
//! lex node : r
//! ```
//!
//! Linear-time grammars additionally carry `timeconst <c>` and one
//! `rulefm : <formula>` line per transformation rule; their lexicon lines
//! hold the plain diagram atoms.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::hypergraph::TypedAlphabet;
use crate::logic::parse_formula;
use crate::symbol::Sym;

use super::{GrammarMode, HypergraphGrammar, LexKey, Logic};

#[derive(Debug, Error)]
#[error("line {line}: {msg}")]
pub struct GramParseError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, GramParseError> {
    Err(GramParseError {
        line,
        msg: msg.into(),
    })
}

pub fn parse_grammar(input: &str) -> Result<HypergraphGrammar, GramParseError> {
    let mut logic = None;
    let mut alphabet = TypedAlphabet::new();
    let mut ext_type: Option<BTreeSet<Sym>> = None;
    let mut start = None;
    let mut lexicon = Vec::new();
    let mut time_const: Option<usize> = None;
    let mut rule_formulas = Vec::new();

    for (lineno, raw) in input.lines().enumerate() {
        let line_num = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match keyword {
            "logic" => {
                logic = Some(match rest {
                    "mill1" => Logic::Mill1,
                    "ill1" => Logic::Ill1,
                    other => return err(line_num, format!("unknown logic `{other}`")),
                });
            }
            "type" => {
                let Some(brace) = rest.find('{') else {
                    return err(line_num, "expected `{` after the label");
                };
                let label = rest[..brace].trim();
                if label.is_empty() || label == "node" {
                    return err(line_num, "expected a label (and `node` is reserved)");
                }
                let inner = rest[brace + 1..].trim_end().strip_suffix('}').ok_or_else(|| {
                    GramParseError {
                        line: line_num,
                        msg: "expected closing `}`".into(),
                    }
                })?;
                let mut ty = BTreeSet::new();
                for part in inner.split(',') {
                    let sel = part.trim();
                    if !sel.is_empty() {
                        ty.insert(Sym::new(sel));
                    }
                }
                alphabet
                    .insert(Sym::new(label), ty)
                    .map_err(|e| GramParseError {
                        line: line_num,
                        msg: e.to_string(),
                    })?;
            }
            "ext" => {
                let inner = rest
                    .strip_prefix('{')
                    .and_then(|r| r.trim_end().strip_suffix('}'))
                    .ok_or_else(|| GramParseError {
                        line: line_num,
                        msg: "expected `{ selectors }`".into(),
                    })?;
                let mut ty = BTreeSet::new();
                for part in inner.split(',') {
                    let sel = part.trim();
                    if !sel.is_empty() {
                        ty.insert(Sym::new(sel));
                    }
                }
                ext_type = Some(ty);
            }
            "start" => {
                let Some(formula_text) = rest.strip_prefix(':') else {
                    return err(line_num, "expected `start : <formula>`");
                };
                let f = parse_formula(formula_text).map_err(|e| GramParseError {
                    line: line_num,
                    msg: e.to_string(),
                })?;
                start = Some(f);
            }
            "lex" => {
                let Some((key_text, formula_text)) = rest.split_once(':') else {
                    return err(line_num, "expected `lex <key> : <formula>`");
                };
                let key = match key_text.trim() {
                    "node" => LexKey::Node,
                    other if !other.is_empty() => LexKey::Label(Sym::new(other)),
                    _ => return err(line_num, "expected a lexicon key"),
                };
                let f = parse_formula(formula_text).map_err(|e| GramParseError {
                    line: line_num,
                    msg: e.to_string(),
                })?;
                lexicon.push((key, f));
            }
            "timeconst" => {
                let c: usize = rest.parse().map_err(|_| GramParseError {
                    line: line_num,
                    msg: format!("expected a number, found `{rest}`"),
                })?;
                time_const = Some(c);
            }
            "rulefm" => {
                let Some(formula_text) = rest.strip_prefix(':') else {
                    return err(line_num, "expected `rulefm : <formula>`");
                };
                let f = parse_formula(formula_text).map_err(|e| GramParseError {
                    line: line_num,
                    msg: e.to_string(),
                })?;
                rule_formulas.push(f);
            }
            other => return err(line_num, format!("unknown directive `{other}`")),
        }
    }

    let Some(logic) = logic else {
        return err(1, "missing `logic` line");
    };
    let Some(ext_type) = ext_type else {
        return err(1, "missing `ext` line");
    };
    let Some(start) = start else {
        return err(1, "missing `start` line");
    };
    let mode = match (time_const, rule_formulas.is_empty()) {
        (None, true) => GrammarMode::Explicit,
        (Some(c), _) => GrammarMode::LinearTime {
            rule_formulas,
            time_const: c,
        },
        (None, false) => return err(1, "rulefm lines need a `timeconst` line"),
    };
    HypergraphGrammar::new(alphabet, ext_type, start, lexicon, logic, mode).map_err(|e| {
        GramParseError {
            line: 1,
            msg: e.to_string(),
        }
    })
}

pub fn render_grammar(g: &HypergraphGrammar) -> String {
    let mut out = String::new();
    out.push_str(match g.logic {
        Logic::Mill1 => "logic mill1\n",
        Logic::Ill1 => "logic ill1\n",
    });
    for (label, ty) in g.alphabet.iter() {
        let sels: Vec<String> = ty.iter().map(|s| s.to_string()).collect();
        out.push_str(&format!("type {} {{ {} }}\n", label, sels.join(", ")));
    }
    let sels: Vec<String> = g.ext_type.iter().map(|s| s.to_string()).collect();
    out.push_str(&format!("ext {{ {} }}\n", sels.join(", ")));
    out.push_str(&format!("start : {}\n", g.start.render()));
    if let GrammarMode::LinearTime {
        rule_formulas,
        time_const,
    } = &g.mode
    {
        out.push_str(&format!("timeconst {time_const}\n"));
        for f in rule_formulas {
            out.push_str(&format!("rulefm : {}\n", f.render()));
        }
    }
    for (key, f) in &g.lexicon {
        let key_text = match key {
            LexKey::Label(a) => a.to_string(),
            LexKey::Node => "node".into(),
        };
        out.push_str(&format!("lex {} : {}\n", key_text, f.render()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const NODE_COUNTING: &str = "\
logic mill1
type a { s, t }
type b { 1, 2, 3 }
ext { s, t }
start : p(s,t) * r * r * r
lex a : q(s,t)
lex a : fa x. (q(x,s) -o p(x,t))
lex b : q(2,3) -o p(1,1) -o p(2,3)
lex node : r
lex node : fa y. p(x_,y)
";

    #[test]
    fn parses_the_node_counting_grammar() {
        let g = parse_grammar(NODE_COUNTING).unwrap();
        assert_eq!(g.logic, Logic::Mill1);
        assert_eq!(g.lexicon.len(), 5);
        assert_eq!(g.label_entries(&Sym::new("a")).len(), 2);
        assert_eq!(g.node_entries().len(), 2);
        assert_eq!(g.ext_type.len(), 2);
    }

    #[test]
    fn round_trip() {
        let g = parse_grammar(NODE_COUNTING).unwrap();
        let text = render_grammar(&g);
        let back = parse_grammar(&text).unwrap();
        assert_eq!(back.lexicon.len(), g.lexicon.len());
        assert!(back.start.alpha_eq(&g.start));
        assert_eq!(render_grammar(&back), text);
    }

    #[test]
    fn linear_time_sections() {
        let text = "\
logic mill1
type a { s, t }
ext { s, t }
start : ex v. (s1(s,v) * a(v,t))
timeconst 2
rulefm : fa u1. fa u2. ((ex w. a(u1,w) * a(w,u2) * nu(u1) * nu(w) * nu(u2)) -o (s1(u1,u2) * nu(u1) * nu(u2)))
lex a : a(s,t)
lex node : nu(x_)
";
        let g = parse_grammar(text).unwrap();
        match &g.mode {
            GrammarMode::LinearTime {
                rule_formulas,
                time_const,
            } => {
                assert_eq!(*time_const, 2);
                assert_eq!(rule_formulas.len(), 1);
                assert!(rule_formulas[0].free_vars().is_empty());
            }
            _ => panic!("expected the linear-time mode"),
        }
        let back = parse_grammar(&render_grammar(&g)).unwrap();
        assert!(matches!(back.mode, GrammarMode::LinearTime { .. }));
    }

    #[test]
    fn error_without_logic_line() {
        assert!(parse_grammar("ext { s }\nstart : p(s)\n").is_err());
    }

    #[test]
    fn lexicon_variable_violation_caught() {
        let text = "\
logic mill1
type a { s, t }
ext { s, t }
start : p(s,t)
lex a : q(s,zz)
";
        assert!(parse_grammar(text).is_err());
    }
}
