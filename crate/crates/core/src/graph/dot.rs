//! The subset of the DOT language needed to read positioned, clustered
//! layouts: an undirected `graph` with node statements, `--` edge chains,
//! attribute lists and graph-level attributes.
//!
//! Recognized attributes:
//! - node: `label`, `pos` (`"x,y"`, optional trailing `!`), `cluster` (integer)
//! - edge: `weight`
//! - graph: `polygons`, a `;`-separated list of `cluster color x,y x,y ...`
//!
//! Everything else is ignored with a warning.

use std::collections::HashMap;

use super::{Edge, Graph, GraphError, Node, Polygon};
use crate::geometry::EuclideanPoint;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Eq,
    Semi,
    Comma,
    EdgeOp,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
}

fn err(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Syntax { line, message: message.into() }
}

fn tokenize(input: &str) -> Result<Vec<Token>, GraphError> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut line_start = true;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            line_start = true;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let at_line_start = line_start;
        line_start = false;
        match c {
            '#' if at_line_start => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '/' if chars.get(i + 1) == Some(&'/') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '/' if chars.get(i + 1) == Some(&'*') => {
                let start = line;
                i += 2;
                loop {
                    match chars.get(i) {
                        None => return Err(err(start, "unterminated comment")),
                        Some('*') if chars.get(i + 1) == Some(&'/') => {
                            i += 2;
                            break;
                        }
                        Some('\n') => line += 1,
                        _ => {}
                    }
                    i += 1;
                }
            }
            '{' | '}' | '[' | ']' | '=' | ';' | ',' => {
                let tok = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '=' => Tok::Eq,
                    ';' => Tok::Semi,
                    _ => Tok::Comma,
                };
                out.push(Token { tok, line });
                i += 1;
            }
            '-' if chars.get(i + 1) == Some(&'-') => {
                out.push(Token { tok: Tok::EdgeOp, line });
                i += 2;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                return Err(err(line, "directed edges (`->`) are not supported"));
            }
            '"' => {
                let start = line;
                let mut s = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err(err(start, "unterminated string")),
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') if chars.get(i + 1) == Some(&'"') => {
                            s.push('"');
                            i += 2;
                        }
                        Some('\\') if chars.get(i + 1) == Some(&'\n') => {
                            line += 1;
                            i += 2;
                        }
                        Some(&ch) => {
                            if ch == '\n' {
                                line += 1;
                            }
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                out.push(Token { tok: Tok::Id(s), line: start });
            }
            c if c.is_alphanumeric() || c == '_' || c == '.' || c == '-' => {
                let mut s = String::new();
                while let Some(&ch) = chars.get(i) {
                    if ch.is_alphanumeric() || ch == '_' || ch == '.' || (ch == '-' && s.is_empty()) {
                        s.push(ch);
                        i += 1;
                    } else {
                        break;
                    }
                }
                out.push(Token { tok: Tok::Id(s), line });
            }
            other => return Err(err(line, format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    last_line: usize,
    warnings: Vec<String>,
    ids: HashMap<String, usize>,
    nodes: Vec<Node>,
    edges: Vec<(usize, usize, f64, usize)>,
    polygons: Vec<Polygon>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn line(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.last_line, |t| t.line)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), GraphError> {
        let line = self.line();
        match self.next() {
            Some(t) if t.tok == want => Ok(()),
            Some(t) => Err(err(t.line, format!("expected {what}, found {:?}", t.tok))),
            None => Err(err(line, format!("expected {what}, found end of input"))),
        }
    }

    fn id(&mut self, what: &str) -> Result<(String, usize), GraphError> {
        let line = self.line();
        match self.next() {
            Some(Token { tok: Tok::Id(s), line }) => Ok((s, line)),
            Some(t) => Err(err(t.line, format!("expected {what}, found {:?}", t.tok))),
            None => Err(err(line, format!("expected {what}, found end of input"))),
        }
    }

    fn node_index(&mut self, name: &str) -> usize {
        if let Some(&i) = self.ids.get(name) {
            return i;
        }
        let i = self.nodes.len();
        self.ids.insert(name.to_string(), i);
        let mut node = Node::new(i);
        node.label = name.to_string();
        self.nodes.push(node);
        i
    }

    fn attr_list(&mut self) -> Result<Vec<(String, String, usize)>, GraphError> {
        let mut attrs = Vec::new();
        while self.peek() == Some(&Tok::LBracket) {
            self.next();
            loop {
                match self.peek() {
                    Some(Tok::RBracket) => {
                        self.next();
                        break;
                    }
                    Some(Tok::Comma) | Some(Tok::Semi) => {
                        self.next();
                    }
                    _ => {
                        let (key, line) = self.id("attribute name")?;
                        self.expect(Tok::Eq, "`=`")?;
                        let (value, _) = self.id("attribute value")?;
                        attrs.push((key, value, line));
                    }
                }
            }
        }
        Ok(attrs)
    }

    fn parse(&mut self) -> Result<(), GraphError> {
        let (mut kw, mut line) = self.id("`graph`")?;
        if kw.eq_ignore_ascii_case("strict") {
            (kw, line) = self.id("`graph`")?;
        }
        if kw.eq_ignore_ascii_case("digraph") {
            return Err(err(line, "directed graphs are not supported"));
        }
        if !kw.eq_ignore_ascii_case("graph") {
            return Err(err(line, format!("expected `graph`, found `{kw}`")));
        }
        if let Some(Tok::Id(_)) = self.peek() {
            self.next();
        }
        self.expect(Tok::LBrace, "`{`")?;
        loop {
            match self.peek() {
                None => return Err(err(self.line(), "missing closing `}`")),
                Some(Tok::RBrace) => {
                    self.next();
                    break;
                }
                Some(Tok::Semi) | Some(Tok::Comma) => {
                    self.next();
                }
                _ => self.statement()?,
            }
        }
        if let Some(t) = self.next() {
            return Err(err(t.line, "unexpected input after closing `}`"));
        }
        Ok(())
    }

    fn statement(&mut self) -> Result<(), GraphError> {
        let (first, line) = self.id("statement")?;
        let lower = first.to_ascii_lowercase();
        if lower == "subgraph" {
            return Err(err(line, "subgraphs are not supported"));
        }
        if self.peek() == Some(&Tok::Eq) {
            self.next();
            let (value, _) = self.id("attribute value")?;
            return self.graph_attr(&first, &value, line);
        }
        if matches!(lower.as_str(), "graph" | "node" | "edge") && self.peek() == Some(&Tok::LBracket) {
            let attrs = self.attr_list()?;
            for (k, v, l) in attrs {
                if lower == "graph" {
                    self.graph_attr(&k, &v, l)?;
                } else {
                    self.warnings.push(format!("line {l}: default {lower} attribute `{k}` ignored"));
                }
            }
            return Ok(());
        }
        let mut chain = vec![self.node_index(&first)];
        while self.peek() == Some(&Tok::EdgeOp) {
            self.next();
            let (name, l) = self.id("node id")?;
            if name.eq_ignore_ascii_case("subgraph") {
                return Err(err(l, "subgraphs are not supported"));
            }
            chain.push(self.node_index(&name));
        }
        let attrs = self.attr_list()?;
        if chain.len() == 1 {
            let id = chain[0];
            for (k, v, l) in attrs {
                self.node_attr(id, &k, &v, l)?;
            }
        } else {
            let mut weight = 1.0;
            for (k, v, l) in attrs {
                if k == "weight" {
                    weight = v
                        .parse::<f64>()
                        .map_err(|_| err(l, format!("invalid edge weight `{v}`")))?;
                } else {
                    self.warnings.push(format!("line {l}: edge attribute `{k}` ignored"));
                }
            }
            for w in chain.windows(2) {
                self.edges.push((w[0], w[1], weight, line));
            }
        }
        Ok(())
    }

    fn node_attr(&mut self, id: usize, key: &str, value: &str, line: usize) -> Result<(), GraphError> {
        match key {
            "label" => self.nodes[id].label = value.to_string(),
            "pos" => self.nodes[id].pos = Some(parse_point(value.trim_end_matches('!'), line)?),
            "cluster" => {
                let c = value
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| err(line, format!("invalid cluster `{value}`")))?;
                self.nodes[id].cluster = Some(c);
            }
            other => self.warnings.push(format!("line {line}: node attribute `{other}` ignored")),
        }
        Ok(())
    }

    fn graph_attr(&mut self, key: &str, value: &str, line: usize) -> Result<(), GraphError> {
        if key == "polygons" {
            for chunk in value.split(';').map(str::trim).filter(|c| !c.is_empty()) {
                self.polygons.push(parse_polygon(chunk, line)?);
            }
        } else {
            self.warnings.push(format!("line {line}: graph attribute `{key}` ignored"));
        }
        Ok(())
    }
}

fn parse_point(s: &str, line: usize) -> Result<EuclideanPoint, GraphError> {
    let mut parts = s.split(',').map(str::trim);
    let (Some(x), Some(y)) = (parts.next(), parts.next()) else {
        return Err(err(line, format!("invalid position `{s}`")));
    };
    let x = x.parse::<f64>().map_err(|_| err(line, format!("invalid position `{s}`")))?;
    let y = y.parse::<f64>().map_err(|_| err(line, format!("invalid position `{s}`")))?;
    if parts.next().is_some() || !x.is_finite() || !y.is_finite() {
        return Err(err(line, format!("invalid position `{s}`")));
    }
    Ok(EuclideanPoint::new(x, y))
}

fn parse_polygon(chunk: &str, line: usize) -> Result<Polygon, GraphError> {
    let fields: Vec<&str> = chunk.split_whitespace().collect();
    if fields.len() < 5 {
        return Err(err(line, format!("polygon `{chunk}` needs a cluster, a color and at least three vertices")));
    }
    let cluster = fields[0]
        .parse::<u32>()
        .map_err(|_| err(line, format!("invalid polygon cluster `{}`", fields[0])))?;
    let vertices = fields[2..]
        .iter()
        .map(|f| parse_point(f, line))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Polygon { cluster, vertices, color: fields[1].to_string() })
}

pub(super) fn parse(input: &str) -> Result<(Graph, Vec<String>), GraphError> {
    let tokens = tokenize(input)?;
    let last_line = tokens.last().map_or(1, |t| t.line);
    let mut p = Parser {
        tokens,
        pos: 0,
        last_line,
        warnings: Vec::new(),
        ids: HashMap::new(),
        nodes: Vec::new(),
        edges: Vec::new(),
        polygons: Vec::new(),
    };
    p.parse()?;
    for &(u, v, _, line) in &p.edges {
        if u == v {
            return Err(err(line, format!("self-loop on `{}`", p.nodes[u].label)));
        }
    }
    let edges = p.edges.iter().map(|&(u, v, weight, _)| Edge { u, v, weight }).collect();
    let graph = Graph::new(p.nodes, edges, p.polygons)?;
    Ok((graph, p.warnings))
}
