//! Text formats for weight systems, posets and GKM-graphs, with canonical
//! writers, DOT output and JSON dumps.
//!
//! All three formats are line based; `#` starts a comment.
//!
//! ```text
//! ambient_rank: 2            # weight system
//! w1 = (1,0)
//! w2 = (0,1)
//!
//! element a rank 0 drk 0     # poset; rank, drk and label are optional
//! element b label {1}
//! cover a < b
//!
//! ambient_rank: 1            # GKM-graph
//! signed
//! vertex N
//! vertex S
//! edge NS N S weight (1) [reverse (-1)]
//! connection NS at N -> NS via NS
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use serde_json::{json, Value};
use thiserror::Error;

use crate::gkm::{validate, GkmBuilder, GkmError, GkmGraph, GkmViolation};
use crate::matroid::{Flat, WeightSystem};
use crate::poset::{GradedPoset, PosetBuilder, PosetError};
use crate::ratlinalg::IntVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(tok: &Token, message: impl Into<String>) -> Self {
        ParseError {
            line: tok.line,
            column: tok.column,
            message: message.into(),
        }
    }

    fn end_of(line: &Line, message: impl Into<String>) -> Self {
        ParseError {
            line: line.number,
            column: line.end_column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    text: String,
    line: usize,
    column: usize,
}

#[derive(Debug)]
struct Line {
    number: usize,
    end_column: usize,
    tokens: Vec<Token>,
}

/// Splits into tokens on whitespace; `=` is a token of its own and a
/// parenthesised group is a single token.
fn tokenize(text: &str) -> Result<Vec<Line>, ParseError> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let chars: Vec<char> = content.chars().collect();
        let mut tokens = Vec::new();
        let mut k = 0;
        while k < chars.len() {
            let c = chars[k];
            if c.is_whitespace() {
                k += 1;
                continue;
            }
            let start = k;
            if c == '(' {
                while k < chars.len() && chars[k] != ')' {
                    k += 1;
                }
                if k == chars.len() {
                    return Err(ParseError {
                        line: number,
                        column: start + 1,
                        message: "unclosed `(`".into(),
                    });
                }
                k += 1;
            } else if c == '=' {
                k += 1;
            } else {
                while k < chars.len() && !chars[k].is_whitespace() && chars[k] != '=' && chars[k] != '(' {
                    k += 1;
                }
            }
            tokens.push(Token {
                text: chars[start..k].iter().collect(),
                line: number,
                column: start + 1,
            });
        }
        if !tokens.is_empty() {
            lines.push(Line {
                number,
                end_column: chars.len() + 1,
                tokens,
            });
        }
    }
    Ok(lines)
}

fn parse_vector(tok: &Token) -> Result<IntVector, ParseError> {
    let inner = tok
        .text
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| ParseError::at(tok, format!("expected a vector `(a,b,...)`, found `{}`", tok.text)))?;
    if inner.trim().is_empty() {
        return Ok(IntVector::new(Vec::new()));
    }
    let mut entries = Vec::new();
    let mut offset = 1;
    for part in inner.split(',') {
        let value = part.trim().parse::<BigInt>().map_err(|_| ParseError {
            line: tok.line,
            column: tok.column + offset,
            message: format!("expected an integer, found `{}`", part.trim()),
        })?;
        entries.push(value);
        offset += part.chars().count() + 1;
    }
    Ok(IntVector::new(entries))
}

fn parse_usize(tok: &Token) -> Result<usize, ParseError> {
    tok.text
        .parse()
        .map_err(|_| ParseError::at(tok, format!("expected a nonnegative integer, found `{}`", tok.text)))
}

fn expect<'a>(line: &'a Line, k: usize, what: &str) -> Result<&'a Token, ParseError> {
    line.tokens
        .get(k)
        .ok_or_else(|| ParseError::end_of(line, format!("expected {what}")))
}

fn expect_word(line: &Line, k: usize, word: &str) -> Result<(), ParseError> {
    let tok = expect(line, k, &format!("`{word}`"))?;
    if tok.text != word {
        return Err(ParseError::at(tok, format!("expected `{word}`, found `{}`", tok.text)));
    }
    Ok(())
}

fn expect_end(line: &Line, k: usize) -> Result<(), ParseError> {
    match line.tokens.get(k) {
        None => Ok(()),
        Some(tok) => Err(ParseError::at(tok, format!("unexpected `{}`", tok.text))),
    }
}

fn is_id(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || "_.-'".contains(c))
}

fn expect_id<'a>(line: &'a Line, k: usize, what: &str) -> Result<&'a Token, ParseError> {
    let tok = expect(line, k, what)?;
    if !is_id(&tok.text) {
        return Err(ParseError::at(tok, format!("`{}` is not a valid identifier", tok.text)));
    }
    Ok(tok)
}

/// `ambient_rank: k` or `ambient_rank:k`; returns k and the index after it.
fn ambient_rank(line: &Line) -> Result<Option<usize>, ParseError> {
    let first = &line.tokens[0];
    if first.text == "ambient_rank:" {
        let tok = expect(line, 1, "the ambient rank")?;
        expect_end(line, 2)?;
        return parse_usize(tok).map(Some);
    }
    if let Some(rest) = first.text.strip_prefix("ambient_rank:") {
        expect_end(line, 1)?;
        let tok = Token {
            text: rest.to_string(),
            line: first.line,
            column: first.column + "ambient_rank:".len(),
        };
        return parse_usize(&tok).map(Some);
    }
    Ok(None)
}

/// Reads a weight system; weights must be numbered `w1, w2, ...` in order.
pub fn parse_matroid(text: &str) -> Result<WeightSystem, ParseError> {
    let mut k: Option<(usize, Token)> = None;
    let mut weights: Vec<(IntVector, Token)> = Vec::new();
    for line in tokenize(text)? {
        let first = &line.tokens[0];
        if let Some(r) = ambient_rank(&line)? {
            if k.is_some() {
                return Err(ParseError::at(first, "ambient_rank declared twice"));
            }
            if r == 0 {
                return Err(ParseError::at(first, "ambient rank must be at least 1"));
            }
            k = Some((r, first.clone()));
            continue;
        }
        let expected = format!("w{}", weights.len() + 1);
        if first.text != expected {
            return Err(ParseError::at(
                first,
                format!("expected `{expected}` or `ambient_rank:`, found `{}`", first.text),
            ));
        }
        let Some((rank, _)) = &k else {
            return Err(ParseError::at(first, "weights must follow `ambient_rank:`"));
        };
        expect_word(&line, 1, "=")?;
        let tok = expect(&line, 2, "a vector")?;
        let v = parse_vector(tok)?;
        expect_end(&line, 3)?;
        if v.len() != *rank {
            return Err(ParseError::at(
                tok,
                format!("vector has {} entries, expected {rank}", v.len()),
            ));
        }
        if v.is_zero() {
            return Err(ParseError::at(tok, format!("zero weight forbidden: {expected}")));
        }
        weights.push((v, tok.clone()));
    }
    let Some((rank, _)) = k else {
        return Err(ParseError {
            line: 1,
            column: 1,
            message: "missing `ambient_rank:`".into(),
        });
    };
    WeightSystem::new(rank, weights.into_iter().map(|(v, _)| v).collect()).map_err(|e| ParseError {
        line: 1,
        column: 1,
        message: e.to_string(),
    })
}

pub fn write_matroid(ws: &WeightSystem) -> String {
    let mut out = format!("ambient_rank: {}\n", ws.ambient_rank());
    for (i, w) in ws.weights().iter().enumerate() {
        out.push_str(&format!("w{} = {}\n", i + 1, w));
    }
    out
}

/// Reads a poset. Declared ranks must agree with the computed grading when
/// the poset is graded; drk must be given for all elements or none.
pub fn parse_poset(text: &str) -> Result<GradedPoset, ParseError> {
    let mut b = PosetBuilder::new();
    let mut element_tok: HashMap<String, Token> = HashMap::new();
    let mut declared_rank: Vec<(usize, usize, Token)> = Vec::new();
    let mut covers: Vec<(Token, Token)> = Vec::new();
    let mut first_without_drk: Option<Token> = None;
    let mut first_with_drk: Option<Token> = None;
    for line in tokenize(text)? {
        let first = &line.tokens[0];
        match first.text.as_str() {
            "element" => {
                let id = expect_id(&line, 1, "an element id")?;
                let i = b
                    .add(id.text.clone())
                    .map_err(|_| ParseError::at(id, format!("duplicate element `{}`", id.text)))?;
                element_tok.insert(id.text.clone(), id.clone());
                let mut seen: Vec<&str> = Vec::new();
                let mut has_drk = false;
                let mut k = 2;
                while k < line.tokens.len() {
                    let key = &line.tokens[k];
                    if seen.contains(&key.text.as_str()) {
                        return Err(ParseError::at(key, format!("`{}` given twice", key.text)));
                    }
                    let value = expect(&line, k + 1, &format!("a value after `{}`", key.text))?;
                    match key.text.as_str() {
                        "rank" => declared_rank.push((i, parse_usize(value)?, value.clone())),
                        "drk" => {
                            b.set_drk(i, parse_usize(value)? as u64);
                            has_drk = true;
                        }
                        "label" => b.set_label(i, value.text.clone()),
                        other => {
                            return Err(ParseError::at(
                                key,
                                format!("expected `rank`, `drk` or `label`, found `{other}`"),
                            ));
                        }
                    }
                    seen.push(key.text.as_str());
                    k += 2;
                }
                if has_drk {
                    first_with_drk.get_or_insert_with(|| id.clone());
                } else {
                    first_without_drk.get_or_insert_with(|| id.clone());
                }
            }
            "cover" => {
                let lo = expect_id(&line, 1, "an element id")?;
                expect_word(&line, 2, "<")?;
                let hi = expect_id(&line, 3, "an element id")?;
                expect_end(&line, 4)?;
                covers.push((lo.clone(), hi.clone()));
            }
            other => {
                return Err(ParseError::at(
                    first,
                    format!("expected `element` or `cover`, found `{other}`"),
                ));
            }
        }
    }
    for (lo, hi) in &covers {
        for t in [lo, hi] {
            if b.index_of(&t.text).is_none() {
                return Err(ParseError::at(t, format!("unknown element `{}`", t.text)));
            }
        }
        if lo.text == hi.text {
            return Err(ParseError::at(hi, format!("`{}` cannot cover itself", hi.text)));
        }
        b.relate_ids(&lo.text, &hi.text).expect("both ids are known");
    }
    if let (Some(_), Some(missing)) = (&first_with_drk, &first_without_drk) {
        return Err(ParseError::at(
            missing,
            format!("element `{}` has no drk while others do", missing.text),
        ));
    }
    let p = b.build().map_err(|e| match &e {
        PosetError::Empty => ParseError {
            line: 1,
            column: 1,
            message: "empty poset".into(),
        },
        PosetError::Cycle(id) => {
            let tok = covers
                .iter()
                .find(|(_, hi)| &hi.text == id)
                .map(|(_, hi)| hi)
                .unwrap_or(&element_tok[id]);
            ParseError::at(tok, format!("the cover relation has a cycle through `{id}`"))
        }
        other => ParseError {
            line: 1,
            column: 1,
            message: other.to_string(),
        },
    })?;
    if let Some(ranks) = p.ranks() {
        for (i, r, tok) in declared_rank {
            if ranks[i] != r {
                return Err(ParseError::at(
                    &tok,
                    format!("`{}` is declared at rank {r} but has rank {}", p.id(i), ranks[i]),
                ));
            }
        }
    }
    Ok(p)
}

fn writable_label(l: &str) -> bool {
    !l.is_empty() && !l.chars().any(|c| c.is_whitespace() || "#=(".contains(c))
}

/// Elements in index order with rank (when graded), drk and label, then
/// covers sorted by (lower, upper) index.
pub fn write_poset(p: &GradedPoset) -> String {
    let mut out = String::new();
    let ranks = p.ranks();
    for i in 0..p.len() {
        out.push_str(&format!("element {}", p.id(i)));
        if let Some(r) = ranks {
            out.push_str(&format!(" rank {}", r[i]));
        }
        if let Some(d) = p.drk() {
            out.push_str(&format!(" drk {}", d[i]));
        }
        if let Some(l) = p.label(i).filter(|l| writable_label(l)) {
            out.push_str(&format!(" label {l}"));
        }
        out.push('\n');
    }
    let mut covers = p.covers();
    covers.sort_unstable();
    for (lo, hi) in covers {
        out.push_str(&format!("cover {} < {}\n", p.id(lo), p.id(hi)));
    }
    out
}

struct GraphLines {
    ids: BTreeMap<String, Token>,
    uses: Vec<Token>,
    connections: Vec<([String; 4], Token)>,
}

impl GraphLines {
    fn locate(&self, id: &str) -> Option<&Token> {
        self.ids.get(id).or_else(|| self.uses.iter().find(|t| t.text == id))
    }
}

fn locate_gkm_error(lines: &GraphLines, e: &GkmError) -> ParseError {
    let fallback = ParseError {
        line: 1,
        column: 1,
        message: e.to_string(),
    };
    let id = match e {
        GkmError::DuplicateId(id)
        | GkmError::InvalidId(id)
        | GkmError::UnknownVertex(id)
        | GkmError::UnknownEdge(id)
        | GkmError::Loop(id)
        | GkmError::ReverseInUnsigned(id)
        | GkmError::DimensionMismatch { edge: id, .. } => id.as_str(),
        GkmError::BadConnectionEntry { via, at, edge, .. } => {
            return lines
                .connections
                .iter()
                .find(|(k, _)| k[0] == *edge && k[1] == *at && k[3] == *via)
                .map(|(_, t)| ParseError::at(t, e.to_string()))
                .unwrap_or(fallback);
        }
        _ => return fallback,
    };
    match e {
        GkmError::UnknownVertex(_) | GkmError::UnknownEdge(_) => lines.uses.iter().find(|t| t.text == id),
        _ => lines.locate(id),
    }
    .map(|t| ParseError::at(t, e.to_string()))
    .unwrap_or(fallback)
}

/// The first vertex or edge named by a violation.
fn witness(v: &GkmViolation) -> Option<&str> {
    match v {
        GkmViolation::NoVertices => None,
        GkmViolation::ZeroWeight { edge } | GkmViolation::SignMismatch { edge } => Some(edge),
        GkmViolation::NotRegular { vertex, .. }
        | GkmViolation::Disconnected { vertex, .. }
        | GkmViolation::DependentPair { vertex, .. }
        | GkmViolation::PlaneClosure { vertex, .. }
        | GkmViolation::SpanMismatch { vertex, .. } => Some(vertex),
    }
}

/// Reads a GKM-graph without checking the GKM axioms.
pub fn parse_graph_unchecked(text: &str) -> Result<GkmGraph, ParseError> {
    let mut k: Option<usize> = None;
    let mut signed = false;
    let mut pending: Vec<Line> = Vec::new();
    let mut lines_info = GraphLines {
        ids: BTreeMap::new(),
        uses: Vec::new(),
        connections: Vec::new(),
    };
    for line in tokenize(text)? {
        let first = &line.tokens[0];
        if let Some(r) = ambient_rank(&line)? {
            if k.is_some() {
                return Err(ParseError::at(first, "ambient_rank declared twice"));
            }
            if r == 0 {
                return Err(ParseError::at(first, "ambient rank must be at least 1"));
            }
            if !pending.is_empty() {
                return Err(ParseError::at(
                    first,
                    "`ambient_rank:` must come before vertices and edges",
                ));
            }
            k = Some(r);
            continue;
        }
        match first.text.as_str() {
            "signed" => {
                expect_end(&line, 1)?;
                if !pending.is_empty() {
                    return Err(ParseError::at(first, "`signed` must come before vertices and edges"));
                }
                signed = true;
            }
            "vertex" | "edge" | "connection" => {
                if k.is_none() {
                    return Err(ParseError::at(
                        first,
                        format!("`{}` before `ambient_rank:`", first.text),
                    ));
                }
                pending.push(line);
            }
            other => {
                return Err(ParseError::at(
                    first,
                    format!("expected `ambient_rank:`, `signed`, `vertex`, `edge` or `connection`, found `{other}`"),
                ));
            }
        }
    }
    let Some(k) = k else {
        return Err(ParseError {
            line: 1,
            column: 1,
            message: "missing `ambient_rank:`".into(),
        });
    };
    let mut b = GkmBuilder::new(k, signed);
    for line in &pending {
        let first = &line.tokens[0];
        let mut declare = |tok: &Token| -> Result<(), ParseError> {
            if lines_info.ids.contains_key(&tok.text) {
                return Err(ParseError::at(tok, format!("duplicate id `{}`", tok.text)));
            }
            lines_info.ids.insert(tok.text.clone(), tok.clone());
            Ok(())
        };
        match first.text.as_str() {
            "vertex" => {
                let id = expect_id(line, 1, "a vertex id")?;
                expect_end(line, 2)?;
                declare(id)?;
                b.vertex(id.text.clone());
            }
            "edge" => {
                let id = expect_id(line, 1, "an edge id")?;
                let a = expect_id(line, 2, "a vertex id")?;
                let c = expect_id(line, 3, "a vertex id")?;
                expect_word(line, 4, "weight")?;
                let w = expect(line, 5, "a vector")?;
                let weight = parse_vector(w)?;
                declare(id)?;
                lines_info.uses.extend([a.clone(), c.clone()]);
                match line.tokens.get(6) {
                    None => {
                        b.edge(id.text.clone(), a.text.clone(), c.text.clone(), weight);
                    }
                    Some(_) => {
                        expect_word(line, 6, "reverse")?;
                        let r = expect(line, 7, "a vector")?;
                        let reverse = parse_vector(r)?;
                        expect_end(line, 8)?;
                        b.edge_with_reverse(id.text.clone(), a.text.clone(), c.text.clone(), weight, reverse);
                    }
                }
            }
            _ => {
                let edge = expect_id(line, 1, "an edge id")?;
                expect_word(line, 2, "at")?;
                let at = expect_id(line, 3, "a vertex id")?;
                expect_word(line, 4, "->")?;
                let image = expect_id(line, 5, "an edge id")?;
                expect_word(line, 6, "via")?;
                let via = expect_id(line, 7, "an edge id")?;
                expect_end(line, 8)?;
                lines_info
                    .uses
                    .extend([edge.clone(), at.clone(), image.clone(), via.clone()]);
                lines_info.connections.push((
                    [edge.text.clone(), at.text.clone(), image.text.clone(), via.text.clone()],
                    first.clone(),
                ));
                b.connection(edge.text.clone(), at.text.clone(), image.text.clone(), via.text.clone());
            }
        }
    }
    b.build().map_err(|e| locate_gkm_error(&lines_info, &e))
}

/// Reads a GKM-graph and checks the axioms; the error points at the
/// declaration of the first witness of the first violation.
pub fn parse_graph(text: &str) -> Result<GkmGraph, ParseError> {
    let g = parse_graph_unchecked(text)?;
    if let Err(violations) = validate(&g) {
        let v = &violations[0];
        let mut err = ParseError {
            line: 1,
            column: 1,
            message: v.to_string(),
        };
        if let Some(id) = witness(v) {
            if let Some((line, column)) = find_declaration(text, id) {
                err.line = line;
                err.column = column;
            }
        }
        return Err(err);
    }
    Ok(g)
}

fn find_declaration(text: &str, id: &str) -> Option<(usize, usize)> {
    let lines = tokenize(text).ok()?;
    lines.iter().find_map(|l| {
        let kw = l.tokens[0].text.as_str();
        match l.tokens.get(1) {
            Some(t) if (kw == "vertex" || kw == "edge") && t.text == id => Some((t.line, t.column)),
            _ => None,
        }
    })
}

pub fn write_graph(g: &GkmGraph) -> String {
    let mut out = format!("ambient_rank: {}\n", g.ambient_rank());
    if g.is_signed() {
        out.push_str("signed\n");
    }
    for v in g.vertices() {
        out.push_str(&format!("vertex {v}\n"));
    }
    for e in g.edges() {
        let [a, b] = e.ends();
        out.push_str(&format!(
            "edge {} {} {} weight {}",
            e.id(),
            g.vertex(a),
            g.vertex(b),
            e.weight()
        ));
        if g.is_signed() && *e.reverse() != -e.weight() {
            out.push_str(&format!(" reverse {}", e.reverse()));
        }
        out.push('\n');
    }
    if let Some(c) = g.declared_connection() {
        out.push_str(&write_connection(g, c));
    }
    out
}

pub fn write_connection(g: &GkmGraph, c: &crate::gkm::Connection) -> String {
    c.entries(g)
        .into_iter()
        .map(|(edge, at, image, via)| format!("connection {edge} at {at} -> {image} via {via}\n"))
        .collect()
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Hasse diagram with one layer per rank (per longest chain from below
/// when the poset is not graded).
pub fn poset_to_dot(p: &GradedPoset) -> String {
    let layer: Vec<usize> = match p.ranks() {
        Some(r) => r.to_vec(),
        None => {
            let mut h = vec![0; p.len()];
            for &i in p.topological_order() {
                h[i] = p.lower_covers(i).iter().map(|&j| h[j] + 1).max().unwrap_or(0);
            }
            h
        }
    };
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n  node [shape=box];\n");
    let top = layer.iter().copied().max().unwrap_or(0);
    for l in 0..=top {
        let members: Vec<String> = (0..p.len())
            .filter(|&i| layer[i] == l)
            .map(|i| dot_quote(p.id(i)))
            .collect();
        out.push_str(&format!("  {{ rank=same; {}; }}\n", members.join("; ")));
    }
    for i in 0..p.len() {
        let mut label = p.id(i).to_string();
        if let Some(l) = p.label(i) {
            label.push_str(&format!("\\n{l}"));
        }
        if let Some(d) = p.drk() {
            label.push_str(&format!("\\ndrk {}", d[i]));
        }
        out.push_str(&format!(
            "  {} [label=\"{}\"];\n",
            dot_quote(p.id(i)),
            label.replace('"', "\\\"")
        ));
    }
    let mut covers = p.covers();
    covers.sort_unstable();
    for (lo, hi) in covers {
        out.push_str(&format!("  {} -> {};\n", dot_quote(p.id(lo)), dot_quote(p.id(hi))));
    }
    out.push_str("}\n");
    out
}

/// Undirected drawing of a graph, edges labelled with id and weight.
pub fn graph_to_dot(g: &GkmGraph) -> String {
    let mut out = String::from("graph gkm {\n  node [shape=circle];\n");
    for v in g.vertices() {
        out.push_str(&format!("  {};\n", dot_quote(v)));
    }
    for e in g.edges() {
        let [a, b] = e.ends();
        out.push_str(&format!(
            "  {} -- {} [label=\"{} {}\"];\n",
            dot_quote(g.vertex(a)),
            dot_quote(g.vertex(b)),
            e.id(),
            e.weight()
        ));
    }
    out.push_str("}\n");
    out
}

pub fn poset_to_json(p: &GradedPoset) -> Value {
    let ranks = p.ranks();
    let elements: Vec<Value> = (0..p.len())
        .map(|i| {
            let mut e = serde_json::Map::new();
            e.insert("id".into(), json!(p.id(i)));
            if let Some(r) = ranks {
                e.insert("rank".into(), json!(r[i]));
            }
            if let Some(d) = p.drk() {
                e.insert("drk".into(), json!(d[i]));
            }
            if let Some(l) = p.label(i) {
                e.insert("label".into(), json!(l));
            }
            Value::Object(e)
        })
        .collect();
    let mut covers = p.covers();
    covers.sort_unstable();
    let covers: Vec<Value> = covers.into_iter().map(|(a, b)| json!([p.id(a), p.id(b)])).collect();
    json!({ "elements": elements, "covers": covers, "graded": ranks.is_some() })
}

pub fn flats_to_json(flats: &[Flat]) -> Value {
    Value::Array(
        flats
            .iter()
            .map(|f| {
                json!({
                    "id": f.id(),
                    "rank": f.rank(),
                    "members": f.members().iter().map(|i| i + 1).collect::<Vec<_>>(),
                    "multiplicity": f.multiplicity(),
                })
            })
            .collect(),
    )
}

/// Pretty JSON with a trailing newline.
pub fn json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

impl fmt::Display for crate::gkm::GkmSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} r={}", self.dimension, self.rank)
    }
}
