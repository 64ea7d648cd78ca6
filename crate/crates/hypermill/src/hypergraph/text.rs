//! Line-based `.hgr` text format and DOT export.
//!
//! ```text
//! # a two-letter chain
//! node v0 v1 v2
//! edge e1 a { s=v0, t=v1 }
//! edge e2 b { s=v1, t=v2 }
//! ext { s=v0, t=v2 }
//! ```

use std::collections::BTreeMap;

use thiserror::Error;

use crate::symbol::Sym;

use super::Hypergraph;

#[derive(Debug, Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct HgrParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, HgrParseError> {
    Err(HgrParseError {
        line,
        col,
        msg: msg.into(),
    })
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '$' | '.')
}

struct LineLexer<'a> {
    text: &'a str,
    line: usize,
    pos: usize,
}

impl<'a> LineLexer<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        LineLexer { text, line, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with([' ', '\t']) {
            self.pos += 1;
        }
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> Result<(), HgrParseError> {
        match self.peek() {
            Some(found) if found == c => {
                self.pos += c.len_utf8();
                Ok(())
            }
            other => err(
                self.line,
                self.col(),
                format!("expected `{c}`, found {:?}", other.map(String::from).unwrap_or_default()),
            ),
        }
    }

    fn ident(&mut self) -> Result<Sym, HgrParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.text[self.pos..]
            .chars()
            .next()
            .map(is_ident_char)
            .unwrap_or(false)
        {
            self.pos += 1;
        }
        if start == self.pos {
            return err(self.line, self.col(), "expected an identifier");
        }
        Ok(Sym::new(&self.text[start..self.pos]))
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    /// `{ k=v, k=v }`, possibly empty.
    fn braced_map(&mut self) -> Result<Vec<(Sym, Sym)>, HgrParseError> {
        self.eat('{')?;
        let mut pairs = Vec::new();
        if self.peek() == Some('}') {
            self.eat('}')?;
            return Ok(pairs);
        }
        loop {
            let key = self.ident()?;
            self.eat('=')?;
            let value = self.ident()?;
            pairs.push((key, value));
            match self.peek() {
                Some(',') => {
                    self.eat(',')?;
                }
                Some('}') => {
                    self.eat('}')?;
                    return Ok(pairs);
                }
                other => {
                    return err(
                        self.line,
                        self.col(),
                        format!("expected `,` or `}}`, found {other:?}"),
                    )
                }
            }
        }
    }
}

/// Parses the `.hgr` format. `#` starts a comment.
pub fn parse_hypergraph(input: &str) -> Result<Hypergraph, HgrParseError> {
    let mut g = Hypergraph::empty();
    let mut pending_ext: Option<(usize, Vec<(Sym, Sym)>)> = None;
    let mut pending_edges: Vec<(usize, Sym, Sym, Vec<(Sym, Sym)>)> = Vec::new();
    for (lineno, raw) in input.lines().enumerate() {
        let line_num = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim_end();
        let mut lx = LineLexer::new(line, line_num);
        if lx.at_end() {
            continue;
        }
        let keyword = lx.ident()?;
        match keyword.as_str() {
            "node" => {
                while !lx.at_end() {
                    g.add_node(lx.ident()?);
                }
            }
            "edge" => {
                let id = lx.ident()?;
                let label = lx.ident()?;
                let att = lx.braced_map()?;
                pending_edges.push((line_num, id, label, att));
                if !lx.at_end() {
                    return err(line_num, lx.col(), "trailing input after edge");
                }
            }
            "ext" => {
                let pairs = lx.braced_map()?;
                if pending_ext.is_some() {
                    return err(line_num, 1, "duplicate ext line");
                }
                pending_ext = Some((line_num, pairs));
                if !lx.at_end() {
                    return err(line_num, lx.col(), "trailing input after ext");
                }
            }
            other => return err(line_num, 1, format!("unknown directive `{other}`")),
        }
    }
    for (line_num, id, label, att) in pending_edges {
        let mut seen = BTreeMap::new();
        for (sel, node) in att {
            if seen.insert(sel.clone(), node).is_some() {
                return err(line_num, 1, format!("duplicate selector `{sel}`"));
            }
        }
        g.add_edge(id, label, seen)
            .map_err(|e| HgrParseError { line: line_num, col: 1, msg: e.to_string() })?;
    }
    if let Some((line_num, pairs)) = pending_ext {
        let mut seen = BTreeMap::new();
        for (sel, node) in pairs {
            if seen.insert(sel.clone(), node.clone()).is_some() {
                return err(line_num, 1, format!("duplicate selector `{sel}`"));
            }
            g.set_ext(sel, node)
                .map_err(|e| HgrParseError { line: line_num, col: 1, msg: e.to_string() })?;
        }
    }
    Ok(g)
}

/// Renders the `.hgr` format with canonical ordering.
pub fn render_hypergraph(g: &Hypergraph) -> String {
    let mut out = String::new();
    if !g.nodes().is_empty() {
        out.push_str("node");
        for v in g.nodes() {
            out.push(' ');
            out.push_str(v.as_str());
        }
        out.push('\n');
    }
    for (id, e) in g.edges() {
        let att: Vec<String> = e.att.iter().map(|(s, v)| format!("{s}={v}")).collect();
        if att.is_empty() {
            out.push_str(&format!("edge {id} {} {{ }}\n", e.label));
        } else {
            out.push_str(&format!("edge {id} {} {{ {} }}\n", e.label, att.join(", ")));
        }
    }
    if !g.ext().is_empty() {
        let pairs: Vec<String> = g.ext().iter().map(|(s, v)| format!("{s}={v}")).collect();
        out.push_str(&format!("ext {{ {} }}\n", pairs.join(", ")));
    }
    out
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT export: nodes as circles annotated with their external selectors,
/// binary `{s,t}` edges as arrows, other hyperedges as labeled boxes with
/// selector-labeled tentacles. Output is stable-sorted.
pub fn render_dot(g: &Hypergraph, name: &str) -> String {
    let s = Sym::new("s");
    let t = Sym::new("t");
    let mut out = format!("digraph {} {{\n", quote(name));
    out.push_str("  node [shape=circle, width=0.2, label=\"\"];\n");
    for v in g.nodes() {
        let selectors: Vec<String> = g
            .ext()
            .iter()
            .filter(|(_, n)| *n == v)
            .map(|(sel, _)| format!("({sel})"))
            .collect();
        if selectors.is_empty() {
            out.push_str(&format!("  {};\n", quote(v.as_str())));
        } else {
            out.push_str(&format!(
                "  {} [xlabel={}];\n",
                quote(v.as_str()),
                quote(&selectors.join(""))
            ));
        }
    }
    for (id, e) in g.edges() {
        let is_plain_edge =
            e.att.len() == 2 && e.att.contains_key(&s) && e.att.contains_key(&t);
        if is_plain_edge {
            out.push_str(&format!(
                "  {} -> {} [label={}];\n",
                quote(e.att[&s].as_str()),
                quote(e.att[&t].as_str()),
                quote(e.label.as_str())
            ));
        } else {
            out.push_str(&format!(
                "  {} [shape=box, label={}];\n",
                quote(id.as_str()),
                quote(e.label.as_str())
            ));
            for (sel, v) in &e.att {
                out.push_str(&format!(
                    "  {} -> {} [dir=none, label={}];\n",
                    quote(id.as_str()),
                    quote(v.as_str()),
                    quote(sel.as_str())
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::string_graph_str;

    #[test]
    fn round_trip() {
        let g = string_graph_str("ab");
        let text = render_hypergraph(&g);
        let back = parse_hypergraph(&text).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn parses_spec_shape() {
        let text = "# demo\nnode v1 v2 v3\nedge e1 a { s=v1, t=v2 }\next { s=v1, t=v3 }\n";
        let g = parse_hypergraph(text).unwrap();
        assert_eq!(g.nodes().len(), 3);
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.ext().len(), 2);
    }

    #[test]
    fn nullary_edge_and_empty_ext() {
        let text = "node v\nedge e1 q { }\n";
        let g = parse_hypergraph(text).unwrap();
        assert!(g.edge(&Sym::new("e1")).unwrap().att.is_empty());
        assert!(g.ext().is_empty());
        let back = parse_hypergraph(&render_hypergraph(&g)).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn reports_position_on_error() {
        let text = "node v1\nedge e1 a { s=v1, t=v9 }\n";
        let e = parse_hypergraph(text).unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn unknown_directive_rejected() {
        assert!(parse_hypergraph("frob x\n").is_err());
    }

    #[test]
    fn dot_is_stable() {
        let g = string_graph_str("ab");
        assert_eq!(render_dot(&g, "g"), render_dot(&g, "g"));
        assert!(render_dot(&g, "g").contains("->"));
    }
}
