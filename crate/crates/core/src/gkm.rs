//! Abstract GKM-graphs: axiom validation, connections, faces and totally
//! geodesic faces.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use thiserror::Error;

use crate::matroid::{flats_lattice, MatroidError, WeightSystem};
use crate::poset::{GradedPoset, PosetBuilder};
use crate::ratlinalg::{rank_of, IntVector, LinalgError, Subspace};
use crate::strategy::{ConnectionRule, FaceFilter, Named};

/// Default limit on candidate subgraphs visited by face enumeration.
pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GkmError {
    #[error("ambient rank must be at least 1")]
    ZeroAmbientRank,
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("invalid id `{0}`")]
    InvalidId(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("edge `{0}` is a loop")]
    Loop(String),
    #[error("edge `{edge}` has a weight of length {found}, expected {expected}")]
    DimensionMismatch {
        edge: String,
        expected: usize,
        found: usize,
    },
    #[error("edge `{0}` declares a reverse weight in an unsigned graph")]
    ReverseInUnsigned(String),
    #[error("connection entry `{edge} at {at} via {via}`: {reason}")]
    BadConnectionEntry {
        via: String,
        at: String,
        edge: String,
        reason: String,
    },
    #[error("invalid GKM-graph: {}", .0.first().map(|v| v.to_string()).unwrap_or_default())]
    Invalid(Vec<GkmViolation>),
    #[error("connection not canonical: edges `{}` at `{vertex}` are not independent", .edges.join("`, `"))]
    NotThreeIndependent { vertex: String, edges: Vec<String> },
    #[error("connection not canonical: along `{via}` from `{at}`, edge `{edge}` has {candidates} candidate images")]
    NotCanonical {
        via: String,
        at: String,
        edge: String,
        candidates: usize,
    },
    #[error("the graph declares no connection")]
    NoConnection,
    #[error("invalid connection: {}", .0.first().map(|v| v.to_string()).unwrap_or_default())]
    InvalidConnection(Vec<ConnectionViolation>),
    #[error("face enumeration exceeded the cap of {0} candidate subgraphs")]
    CapExceeded(usize),
    #[error("vertex `{0}` is not in the subgraph")]
    NotInSubgraph(String),
    #[error("not a connected subgraph: {0}")]
    NotASubgraph(String),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || "_.-'".contains(c))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    id: String,
    ends: [usize; 2],
    weight: IntVector,
    reverse: IntVector,
}

impl Edge {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn ends(&self) -> [usize; 2] {
        self.ends
    }

    /// The weight read from `ends()[0]` towards `ends()[1]`.
    pub fn weight(&self) -> &IntVector {
        &self.weight
    }

    /// The weight read in the opposite direction (equal to `weight` in
    /// unsigned graphs).
    pub fn reverse(&self) -> &IntVector {
        &self.reverse
    }

    pub fn other(&self, v: usize) -> usize {
        if self.ends[0] == v {
            self.ends[1]
        } else {
            self.ends[0]
        }
    }
}

/// An edge traversed from `from` to the other endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart {
    pub edge: usize,
    pub from: usize,
}

/// Collects vertices, edges and connection entries; `build` checks the
/// structure but not the GKM axioms (see [`validate`]).
#[derive(Debug, Clone)]
pub struct GkmBuilder {
    ambient_rank: usize,
    signed: bool,
    vertices: Vec<String>,
    edges: Vec<(String, String, String, IntVector, Option<IntVector>)>,
    connection: Vec<(String, String, String, String)>,
}

impl GkmBuilder {
    pub fn new(ambient_rank: usize, signed: bool) -> Self {
        GkmBuilder {
            ambient_rank,
            signed,
            vertices: Vec::new(),
            edges: Vec::new(),
            connection: Vec::new(),
        }
    }

    pub fn vertex(&mut self, id: impl Into<String>) -> &mut Self {
        self.vertices.push(id.into());
        self
    }

    pub fn edge(
        &mut self,
        id: impl Into<String>,
        a: impl Into<String>,
        b: impl Into<String>,
        weight: IntVector,
    ) -> &mut Self {
        self.edges.push((id.into(), a.into(), b.into(), weight, None));
        self
    }

    pub fn edge_with_reverse(
        &mut self,
        id: impl Into<String>,
        a: impl Into<String>,
        b: impl Into<String>,
        weight: IntVector,
        reverse: IntVector,
    ) -> &mut Self {
        self.edges.push((id.into(), a.into(), b.into(), weight, Some(reverse)));
        self
    }

    /// Declares `θ(via, oriented from at)(edge) = image`.
    pub fn connection(
        &mut self,
        edge: impl Into<String>,
        at: impl Into<String>,
        image: impl Into<String>,
        via: impl Into<String>,
    ) -> &mut Self {
        self.connection.push((edge.into(), at.into(), image.into(), via.into()));
        self
    }

    pub fn build(&self) -> Result<GkmGraph, GkmError> {
        if self.ambient_rank == 0 {
            return Err(GkmError::ZeroAmbientRank);
        }
        let mut seen = BTreeSet::new();
        for id in self.vertices.iter().chain(self.edges.iter().map(|e| &e.0)) {
            if !valid_id(id) {
                return Err(GkmError::InvalidId(id.clone()));
            }
            if !seen.insert(id.as_str()) {
                return Err(GkmError::DuplicateId(id.clone()));
            }
        }
        let vertex_index: HashMap<String, usize> =
            self.vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let lookup = |v: &str| {
            vertex_index
                .get(v)
                .copied()
                .ok_or_else(|| GkmError::UnknownVertex(v.to_string()))
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut stars = vec![Vec::new(); self.vertices.len()];
        for (i, (id, a, b, w, rev)) in self.edges.iter().enumerate() {
            let (a, b) = (lookup(a)?, lookup(b)?);
            if a == b {
                return Err(GkmError::Loop(id.clone()));
            }
            for v in std::iter::once(w).chain(rev.iter()) {
                if v.len() != self.ambient_rank {
                    return Err(GkmError::DimensionMismatch {
                        edge: id.clone(),
                        expected: self.ambient_rank,
                        found: v.len(),
                    });
                }
            }
            let reverse = match (rev, self.signed) {
                (Some(_), false) => return Err(GkmError::ReverseInUnsigned(id.clone())),
                (Some(r), true) => r.clone(),
                (None, true) => -w,
                (None, false) => w.clone(),
            };
            stars[a].push(i);
            stars[b].push(i);
            edges.push(Edge {
                id: id.clone(),
                ends: [a, b],
                weight: w.clone(),
                reverse,
            });
        }
        let edge_index = edges.iter().enumerate().map(|(i, e)| (e.id.clone(), i)).collect();
        let mut g = GkmGraph {
            ambient_rank: self.ambient_rank,
            signed: self.signed,
            vertices: self.vertices.clone(),
            edges,
            vertex_index,
            edge_index,
            stars,
            declared: None,
        };
        if !self.connection.is_empty() {
            let mut c = Connection::empty(&g);
            for (edge, at, image, via) in &self.connection {
                let bad = |reason: &str| GkmError::BadConnectionEntry {
                    via: via.clone(),
                    at: at.clone(),
                    edge: edge.clone(),
                    reason: reason.to_string(),
                };
                let e = g.edge_index_of(via)?;
                let x = g.vertex_index_of(at)?;
                let f = g.edge_index_of(edge)?;
                let h = g.edge_index_of(image)?;
                if !g.edges[e].ends.contains(&x) {
                    return Err(bad("the vertex is not an endpoint of the edge it moves along"));
                }
                let d = Dart { edge: e, from: x };
                match c.set(&g, d, f, h) {
                    Ok(None) => {}
                    Ok(Some(_)) => return Err(bad("declared twice")),
                    Err(reason) => return Err(bad(reason)),
                }
            }
            g.declared = Some(c);
        }
        Ok(g)
    }
}

/// A finite multigraph with an axial function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GkmGraph {
    ambient_rank: usize,
    signed: bool,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    stars: Vec<Vec<usize>>,
    declared: Option<Connection>,
}

impl GkmGraph {
    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn is_signed(&self) -> bool {
        self.signed
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_index_of(&self, id: &str) -> Result<usize, GkmError> {
        self.vertex_index
            .get(id)
            .copied()
            .ok_or_else(|| GkmError::UnknownVertex(id.to_string()))
    }

    pub fn edge_index_of(&self, id: &str) -> Result<usize, GkmError> {
        self.edge_index
            .get(id)
            .copied()
            .ok_or_else(|| GkmError::UnknownEdge(id.to_string()))
    }

    /// Edges at `v`, in index order.
    pub fn star(&self, v: usize) -> &[usize] {
        &self.stars[v]
    }

    fn star_position(&self, v: usize, e: usize) -> Option<usize> {
        self.stars[v].binary_search(&e).ok()
    }

    /// α of edge `e` read from its endpoint `from`.
    pub fn alpha(&self, e: usize, from: usize) -> &IntVector {
        let edge = &self.edges[e];
        if from == edge.ends[1] {
            &edge.reverse
        } else {
            &edge.weight
        }
    }

    pub fn dart_target(&self, d: Dart) -> usize {
        self.edges[d.edge].other(d.from)
    }

    pub fn reverse_dart(&self, d: Dart) -> Dart {
        Dart {
            edge: d.edge,
            from: self.dart_target(d),
        }
    }

    fn dart_slot(&self, d: Dart) -> usize {
        2 * d.edge + usize::from(d.from == self.edges[d.edge].ends[1])
    }

    pub fn declared_connection(&self) -> Option<&Connection> {
        self.declared.as_ref()
    }

    /// The weights at `v` as a weight system (indices follow `star(v)`).
    pub fn star_weights(&self, v: usize) -> Result<WeightSystem, GkmError> {
        let ws = self.stars[v].iter().map(|&e| self.alpha(e, v).clone()).collect();
        Ok(WeightSystem::new(self.ambient_rank, ws)?)
    }

    pub fn whole(&self) -> GkmSubgraph {
        GkmSubgraph {
            vertices: (0..self.vertices.len()).collect(),
            edges: (0..self.edges.len()).collect(),
        }
    }

    fn span_at(&self, v: usize, edges: impl Iterator<Item = usize>) -> Subspace {
        let ws: Vec<IntVector> = edges.map(|e| self.alpha(e, v).clone()).collect();
        Subspace::span(self.ambient_rank, &ws).expect("weights have the ambient length")
    }

    /// GKM axioms restricted to the subgraph with the given vertices and
    /// edges. With `first_only`, stops at the first violation.
    fn violations_within(&self, vertices: &[usize], edges: &FixedBitSet, first_only: bool) -> Vec<GkmViolation> {
        let mut out = Vec::new();
        macro_rules! report {
            ($v:expr) => {{
                out.push($v);
                if first_only {
                    return out;
                }
            }};
        }
        if vertices.is_empty() {
            report!(GkmViolation::NoVertices);
        }
        let star = |v: usize| -> Vec<usize> { self.stars[v].iter().copied().filter(|&e| edges.contains(e)).collect() };
        for e in edges.ones() {
            let edge = &self.edges[e];
            if edge.weight.is_zero() || edge.reverse.is_zero() {
                report!(GkmViolation::ZeroWeight { edge: edge.id.clone() });
            }
            if self.signed && edge.reverse != -&edge.weight {
                report!(GkmViolation::SignMismatch { edge: edge.id.clone() });
            }
        }
        if let Some(&v0) = vertices.first() {
            let expected = star(v0).len();
            for &v in vertices {
                let degree = star(v).len();
                if degree != expected {
                    report!(GkmViolation::NotRegular {
                        vertex: self.vertices[v].clone(),
                        degree,
                        expected,
                        reference: self.vertices[v0].clone(),
                    });
                }
            }
            let member: BTreeSet<usize> = vertices.iter().copied().collect();
            let mut reached = BTreeSet::from([v0]);
            let mut queue = VecDeque::from([v0]);
            while let Some(v) = queue.pop_front() {
                for e in star(v) {
                    let w = self.edges[e].other(v);
                    if member.contains(&w) && reached.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            if let Some(&v) = vertices.iter().find(|v| !reached.contains(v)) {
                report!(GkmViolation::Disconnected {
                    vertex: self.vertices[v].clone(),
                    reference: self.vertices[v0].clone(),
                });
            }
        }
        for &y in vertices {
            let sy = star(y);
            for (i, &e1) in sy.iter().enumerate() {
                for &e2 in &sy[i + 1..] {
                    let pair = [self.alpha(e1, y).clone(), self.alpha(e2, y).clone()];
                    if rank_of(&pair).expect("equal lengths") < 2 {
                        report!(GkmViolation::DependentPair {
                            vertex: self.vertices[y].clone(),
                            first: self.edges[e1].id.clone(),
                            second: self.edges[e2].id.clone(),
                        });
                    }
                }
            }
        }
        for &y in vertices {
            let sy = star(y);
            for &e1 in &sy {
                for &e2 in &sy {
                    if e1 == e2 {
                        continue;
                    }
                    let plane = self.span_at(y, [e1, e2].into_iter());
                    let z = self.edges[e2].other(y);
                    let closed = star(z)
                        .into_iter()
                        .filter(|&e3| e3 != e2)
                        .any(|e3| plane.contains(self.alpha(e3, z)).expect("equal lengths"));
                    if !closed {
                        report!(GkmViolation::PlaneClosure {
                            vertex: self.vertices[y].clone(),
                            first: self.edges[e1].id.clone(),
                            second: self.edges[e2].id.clone(),
                            far: self.vertices[z].clone(),
                        });
                    }
                }
            }
        }
        if let Some(&v0) = vertices.first() {
            let reference = self.span_at(v0, star(v0).into_iter());
            for &v in &vertices[1..] {
                if self.span_at(v, star(v).into_iter()) != reference {
                    report!(GkmViolation::SpanMismatch {
                        vertex: self.vertices[v].clone(),
                        reference: self.vertices[v0].clone(),
                    });
                }
            }
        }
        out
    }
}

/// A failed GKM axiom with its witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GkmViolation {
    NoVertices,
    ZeroWeight {
        edge: String,
    },
    SignMismatch {
        edge: String,
    },
    NotRegular {
        vertex: String,
        degree: usize,
        expected: usize,
        reference: String,
    },
    Disconnected {
        vertex: String,
        reference: String,
    },
    DependentPair {
        vertex: String,
        first: String,
        second: String,
    },
    PlaneClosure {
        vertex: String,
        first: String,
        second: String,
        far: String,
    },
    SpanMismatch {
        vertex: String,
        reference: String,
    },
}

impl GkmViolation {
    pub fn axiom(&self) -> &'static str {
        match self {
            GkmViolation::NoVertices => "nonempty",
            GkmViolation::ZeroWeight { .. } => "nonzero weights",
            GkmViolation::SignMismatch { .. } => "sign consistency",
            GkmViolation::NotRegular { .. } => "regularity",
            GkmViolation::Disconnected { .. } => "connectivity",
            GkmViolation::DependentPair { .. } => "pairwise independence",
            GkmViolation::PlaneClosure { .. } => "2-plane closure",
            GkmViolation::SpanMismatch { .. } => "constant span",
        }
    }
}

impl fmt::Display for GkmViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.axiom())?;
        match self {
            GkmViolation::NoVertices => write!(f, "the graph has no vertices"),
            GkmViolation::ZeroWeight { edge } => write!(f, "edge `{edge}` has a zero weight"),
            GkmViolation::SignMismatch { edge } => {
                write!(
                    f,
                    "edge `{edge}` has a reverse weight that is not the negative of its weight"
                )
            }
            GkmViolation::NotRegular {
                vertex,
                degree,
                expected,
                reference,
            } => write!(
                f,
                "vertex `{vertex}` has degree {degree} but `{reference}` has degree {expected}"
            ),
            GkmViolation::Disconnected { vertex, reference } => {
                write!(f, "vertex `{vertex}` is not reachable from `{reference}`")
            }
            GkmViolation::DependentPair { vertex, first, second } => {
                write!(f, "edges `{first}` and `{second}` at `{vertex}` have dependent weights")
            }
            GkmViolation::PlaneClosure {
                vertex,
                first,
                second,
                far,
            } => write!(
                f,
                "no edge at `{far}` other than `{second}` lies in the plane of `{first}` and `{second}` at `{vertex}`"
            ),
            GkmViolation::SpanMismatch { vertex, reference } => {
                write!(
                    f,
                    "the span of the weights at `{vertex}` differs from the span at `{reference}`"
                )
            }
        }
    }
}

/// Dimension and rank of a valid GKM-graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GkmSummary {
    pub dimension: usize,
    pub rank: usize,
}

/// Checks every GKM axiom; on success returns the valency and the rank of
/// the common span of the weights.
pub fn validate(g: &GkmGraph) -> Result<GkmSummary, Vec<GkmViolation>> {
    let vertices: Vec<usize> = (0..g.vertex_count()).collect();
    let mut edges = FixedBitSet::with_capacity(g.edge_count());
    edges.insert_range(..);
    let violations = g.violations_within(&vertices, &edges, false);
    if !violations.is_empty() {
        return Err(violations);
    }
    Ok(GkmSummary {
        dimension: g.star(0).len(),
        rank: g.span_at(0, g.star(0).iter().copied()).dim(),
    })
}

fn require_valid(g: &GkmGraph) -> Result<GkmSummary, GkmError> {
    validate(g).map_err(GkmError::Invalid)
}

/// Per-dart bijections between stars. Entries are edge indices; missing
/// entries are allowed so that partial tables can be reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connection {
    maps: Vec<Vec<Option<usize>>>,
}

impl Connection {
    pub fn empty(g: &GkmGraph) -> Self {
        let mut maps = vec![Vec::new(); 2 * g.edge_count()];
        for (e, edge) in g.edges.iter().enumerate() {
            for from in edge.ends {
                let d = Dart { edge: e, from };
                maps[g.dart_slot(d)] = vec![None; g.star(from).len()];
            }
        }
        Connection { maps }
    }

    /// Sets `θ_d(edge) = image`, returning the previous entry.
    pub fn set(&mut self, g: &GkmGraph, d: Dart, edge: usize, image: usize) -> Result<Option<usize>, &'static str> {
        let pos = g
            .star_position(d.from, edge)
            .ok_or("the edge is not at the starting vertex")?;
        if g.star_position(g.dart_target(d), image).is_none() {
            return Err("the image is not at the far vertex");
        }
        Ok(self.maps[g.dart_slot(d)][pos].replace(image))
    }

    pub fn image(&self, g: &GkmGraph, d: Dart, edge: usize) -> Option<usize> {
        let pos = g.star_position(d.from, edge)?;
        self.maps[g.dart_slot(d)][pos]
    }

    /// Entries as `(edge, at, image, via)` ids, edge by edge in index order.
    pub fn entries<'g>(&self, g: &'g GkmGraph) -> Vec<(&'g str, &'g str, &'g str, &'g str)> {
        let mut out = Vec::new();
        for (e, edge) in g.edges.iter().enumerate() {
            for from in edge.ends {
                let d = Dart { edge: e, from };
                for &f in g.star(from) {
                    if let Some(h) = self.image(g, d, f) {
                        out.push((g.edges[f].id(), g.vertex(from), g.edges[h].id(), edge.id()));
                    }
                }
            }
        }
        out
    }
}

/// A failed connection axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConnectionViolation {
    Missing {
        via: String,
        at: String,
        edge: String,
    },
    NotBijective {
        via: String,
        at: String,
    },
    FixesOwnEdge {
        via: String,
        at: String,
    },
    NotInverse {
        via: String,
        at: String,
        edge: String,
    },
    NotCollinear {
        via: String,
        at: String,
        edge: String,
        image: String,
    },
}

impl fmt::Display for ConnectionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConnectionViolation::Missing { via, at, edge } => {
                write!(f, "completeness: no image for `{edge}` along `{via}` from `{at}`")
            }
            ConnectionViolation::NotBijective { via, at } => {
                write!(f, "bijectivity: the map along `{via}` from `{at}` is not a bijection")
            }
            ConnectionViolation::FixesOwnEdge { via, at } => {
                write!(f, "axiom 1: the map along `{via}` from `{at}` does not send `{via}` to itself")
            }
            ConnectionViolation::NotInverse { via, at, edge } => write!(
                f,
                "axiom 2: mapping `{edge}` along `{via}` from `{at}` and back does not return `{edge}`"
            ),
            ConnectionViolation::NotCollinear { via, at, edge, image } => write!(
                f,
                "axiom 3: along `{via}` from `{at}`, the weights of `{image}` and `{edge}` differ by a vector not collinear to `{via}`"
            ),
        }
    }
}

/// Checks the connection axioms on every dart. In unsigned graphs axiom 3
/// is checked up to the sign of `α(e)`.
pub fn validate_connection(g: &GkmGraph, c: &Connection) -> Result<(), Vec<ConnectionViolation>> {
    let mut out = Vec::new();
    for (e, edge) in g.edges.iter().enumerate() {
        for x in edge.ends {
            let d = Dart { edge: e, from: x };
            let y = g.dart_target(d);
            let via = edge.id.clone();
            let at = g.vertex(x).to_string();
            let mut images = BTreeSet::new();
            let mut complete = true;
            for &f in g.star(x) {
                match c.image(g, d, f) {
                    None => {
                        complete = false;
                        out.push(ConnectionViolation::Missing {
                            via: via.clone(),
                            at: at.clone(),
                            edge: g.edges[f].id.clone(),
                        });
                    }
                    Some(h) => {
                        images.insert(h);
                    }
                }
            }
            if complete && images.len() != g.star(x).len() {
                out.push(ConnectionViolation::NotBijective {
                    via: via.clone(),
                    at: at.clone(),
                });
            }
            if matches!(c.image(g, d, e), Some(h) if h != e) {
                out.push(ConnectionViolation::FixesOwnEdge {
                    via: via.clone(),
                    at: at.clone(),
                });
            }
            let back = g.reverse_dart(d);
            let axis = g.alpha(e, x);
            for &f in g.star(x) {
                let Some(h) = c.image(g, d, f) else { continue };
                if let Some(b) = c.image(g, back, h) {
                    if b != f {
                        out.push(ConnectionViolation::NotInverse {
                            via: via.clone(),
                            at: at.clone(),
                            edge: g.edges[f].id.clone(),
                        });
                    }
                }
                let (before, after) = (g.alpha(f, x), g.alpha(h, y));
                let collinear = |v: IntVector| v.is_collinear(axis).expect("equal lengths");
                let ok = if g.signed {
                    collinear(after - before)
                } else {
                    collinear(after - before) || collinear(after + before)
                };
                if !ok {
                    out.push(ConnectionViolation::NotCollinear {
                        via: via.clone(),
                        at: at.clone(),
                        edge: g.edges[f].id.clone(),
                        image: g.edges[h].id.clone(),
                    });
                }
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// The connection determined by the weights: along `xy`, an edge `e` at `x`
/// goes to the unique edge at `y` other than `xy` whose weight lies in the
/// plane of `α(xy)` and `α(e)`. Requires every three weights at a vertex to
/// be independent.
pub fn canonical_connection(g: &GkmGraph) -> Result<Connection, GkmError> {
    require_valid(g)?;
    for v in 0..g.vertex_count() {
        let s = g.star(v);
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                for k in j + 1..s.len() {
                    let triple = [
                        g.alpha(s[i], v).clone(),
                        g.alpha(s[j], v).clone(),
                        g.alpha(s[k], v).clone(),
                    ];
                    if rank_of(&triple)? < 3 {
                        return Err(GkmError::NotThreeIndependent {
                            vertex: g.vertex(v).to_string(),
                            edges: [s[i], s[j], s[k]].iter().map(|&e| g.edges[e].id.clone()).collect(),
                        });
                    }
                }
            }
        }
    }
    let mut c = Connection::empty(g);
    for (e, edge) in g.edges.iter().enumerate() {
        for x in edge.ends {
            let d = Dart { edge: e, from: x };
            let y = g.dart_target(d);
            for &f in g.star(x) {
                let image = if f == e {
                    e
                } else {
                    let plane = g.span_at(x, [e, f].into_iter());
                    let candidates: Vec<usize> = g
                        .star(y)
                        .iter()
                        .copied()
                        .filter(|&h| h != e && plane.contains(g.alpha(h, y)).expect("equal lengths"))
                        .collect();
                    if candidates.len() != 1 {
                        return Err(GkmError::NotCanonical {
                            via: edge.id.clone(),
                            at: g.vertex(x).to_string(),
                            edge: g.edges[f].id.clone(),
                            candidates: candidates.len(),
                        });
                    }
                    candidates[0]
                };
                c.set(g, d, f, image).expect("edges come from the right stars");
            }
        }
    }
    validate_connection(g, &c).map_err(GkmError::InvalidConnection)?;
    Ok(c)
}

/// The connection declared in the graph's table.
#[derive(Debug, Default, Clone, Copy)]
pub struct DeclaredConnection;

/// [`canonical_connection`].
#[derive(Debug, Default, Clone, Copy)]
pub struct CanonicalConnection;

/// The declared table if present, otherwise the canonical connection.
#[derive(Debug, Default, Clone, Copy)]
pub struct AutoConnection;

impl Named for DeclaredConnection {
    fn name(&self) -> &'static str {
        "declared"
    }
}

impl Named for CanonicalConnection {
    fn name(&self) -> &'static str {
        "canonical"
    }
}

impl Named for AutoConnection {
    fn name(&self) -> &'static str {
        "auto"
    }
}

impl ConnectionRule for DeclaredConnection {
    fn connection(&self, g: &GkmGraph) -> Result<Connection, GkmError> {
        let c = g.declared_connection().ok_or(GkmError::NoConnection)?.clone();
        validate_connection(g, &c).map_err(GkmError::InvalidConnection)?;
        Ok(c)
    }
}

impl ConnectionRule for CanonicalConnection {
    fn connection(&self, g: &GkmGraph) -> Result<Connection, GkmError> {
        canonical_connection(g)
    }
}

impl ConnectionRule for AutoConnection {
    fn connection(&self, g: &GkmGraph) -> Result<Connection, GkmError> {
        if g.declared_connection().is_some() {
            DeclaredConnection.connection(g)
        } else {
            CanonicalConnection.connection(g)
        }
    }
}

/// Vertex and edge subsets of a parent graph, both sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GkmSubgraph {
    vertices: Vec<usize>,
    edges: Vec<usize>,
}

impl GkmSubgraph {
    /// Checks that the edges have their endpoints among the vertices and
    /// that the result is connected.
    pub fn new(g: &GkmGraph, mut vertices: Vec<usize>, mut edges: Vec<usize>) -> Result<Self, GkmError> {
        vertices.sort_unstable();
        vertices.dedup();
        edges.sort_unstable();
        edges.dedup();
        if vertices.is_empty() {
            return Err(GkmError::NotASubgraph("no vertices".into()));
        }
        if let Some(&v) = vertices.iter().find(|&&v| v >= g.vertex_count()) {
            return Err(GkmError::NotASubgraph(format!("vertex index {v} out of range")));
        }
        if let Some(&e) = edges.iter().find(|&&e| e >= g.edge_count()) {
            return Err(GkmError::NotASubgraph(format!("edge index {e} out of range")));
        }
        for &e in &edges {
            if g.edges[e].ends.iter().any(|v| vertices.binary_search(v).is_err()) {
                return Err(GkmError::NotASubgraph(format!(
                    "edge `{}` leaves the vertex set",
                    g.edges[e].id
                )));
            }
        }
        let h = GkmSubgraph { vertices, edges };
        let mut reached = BTreeSet::from([h.vertices[0]]);
        let mut queue = VecDeque::from([h.vertices[0]]);
        while let Some(v) = queue.pop_front() {
            for &e in g.star(v) {
                if h.has_edge(e) {
                    let w = g.edges[e].other(v);
                    if reached.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
        }
        if reached.len() != h.vertices.len() {
            return Err(GkmError::NotASubgraph("disconnected".into()));
        }
        Ok(h)
    }

    /// Builds a subgraph from ids; vertices default to the endpoints of the
    /// edges.
    pub fn from_ids(g: &GkmGraph, vertices: &[&str], edges: &[&str]) -> Result<Self, GkmError> {
        let es = edges
            .iter()
            .map(|e| g.edge_index_of(e))
            .collect::<Result<Vec<_>, _>>()?;
        let mut vs = vertices
            .iter()
            .map(|v| g.vertex_index_of(v))
            .collect::<Result<Vec<_>, _>>()?;
        vs.extend(es.iter().flat_map(|&e| g.edges[e].ends));
        GkmSubgraph::new(g, vs, es)
    }

    pub fn vertex(v: usize) -> Self {
        GkmSubgraph {
            vertices: vec![v],
            edges: Vec::new(),
        }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn has_vertex(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn has_edge(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn is_subgraph_of(&self, other: &GkmSubgraph) -> bool {
        self.vertices.iter().all(|&v| other.has_vertex(v)) && self.edges.iter().all(|&e| other.has_edge(e))
    }

    /// Edges of this subgraph at `v`.
    pub fn star<'a>(&'a self, g: &'a GkmGraph, v: usize) -> impl Iterator<Item = usize> + 'a {
        g.star(v).iter().copied().filter(move |&e| self.has_edge(e))
    }

    /// Number of edges at the first vertex.
    pub fn degree(&self, g: &GkmGraph) -> usize {
        self.star(g, self.vertices[0]).count()
    }

    /// The vertex id for single vertices, otherwise the edge ids joined by `+`.
    pub fn id(&self, g: &GkmGraph) -> String {
        if self.edges.is_empty() {
            g.vertex(self.vertices[0]).to_string()
        } else {
            self.edges.iter().map(|&e| g.edge(e).id()).collect::<Vec<_>>().join("+")
        }
    }

    /// `{v1,v2,...}` with vertex ids.
    pub fn vertex_label(&self, g: &GkmGraph) -> String {
        let ids: Vec<&str> = self.vertices.iter().map(|&v| g.vertex(v)).collect();
        format!("{{{}}}", ids.join(","))
    }
}

/// Rational span of the weights of the edges of `h` at `x`.
pub fn subgraph_flat(g: &GkmGraph, h: &GkmSubgraph, x: usize) -> Result<Subspace, GkmError> {
    if !h.has_vertex(x) {
        return Err(GkmError::NotInSubgraph(g.vertex(x).to_string()));
    }
    Ok(g.span_at(x, h.star(g, x)))
}

/// Lattice of flats of the weights at `x`.
pub fn local_face_poset(g: &GkmGraph, x: &str) -> Result<GradedPoset, GkmError> {
    let v = g.vertex_index_of(x)?;
    Ok(flats_lattice(&g.star_weights(v)?).into_poset())
}

/// The face poset of a linear representation: its lattice of flats with
/// multiplicities as drk.
pub fn representation_face_poset(ws: &WeightSystem) -> GradedPoset {
    flats_lattice(ws).into_poset()
}

/// Keeps every face.
#[derive(Debug, Default, Clone, Copy)]
pub struct AllFaces;

/// Keeps faces whose stars are carried onto each other by the connection
/// along every edge of the face.
#[derive(Debug, Default, Clone, Copy)]
pub struct TotallyGeodesic;

impl Named for AllFaces {
    fn name(&self) -> &'static str {
        "faces"
    }
}

impl Named for TotallyGeodesic {
    fn name(&self) -> &'static str {
        "totally-geodesic"
    }
}

impl FaceFilter for AllFaces {
    fn needs_connection(&self) -> bool {
        false
    }

    fn admits(&self, _: &GkmGraph, _: Option<&Connection>, _: &GkmSubgraph) -> bool {
        true
    }
}

impl FaceFilter for TotallyGeodesic {
    fn needs_connection(&self) -> bool {
        true
    }

    fn admits(&self, g: &GkmGraph, c: Option<&Connection>, h: &GkmSubgraph) -> bool {
        let c = c.expect("totally geodesic faces need a connection");
        is_totally_geodesic(g, c, h)
    }
}

pub fn is_totally_geodesic(g: &GkmGraph, c: &Connection, h: &GkmSubgraph) -> bool {
    h.edges.iter().all(|&e| {
        g.edges[e].ends.iter().all(|&x| {
            let d = Dart { edge: e, from: x };
            let y = g.dart_target(d);
            let mapped: BTreeSet<Option<usize>> = h.star(g, x).map(|f| c.image(g, d, f)).collect();
            let target: BTreeSet<Option<usize>> = h.star(g, y).map(Some).collect();
            mapped == target
        })
    })
}

/// A face together with its rank, regular degree and span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub subgraph: GkmSubgraph,
    pub rank: usize,
    pub degree: usize,
    pub flat: Subspace,
}

/// Faces in canonical order and the inclusion poset on them (same indices).
#[derive(Debug, Clone)]
pub struct FaceEnumeration {
    pub faces: Vec<Face>,
    pub poset: GradedPoset,
    /// Number of candidate edge sets visited.
    pub candidates: usize,
}

impl FaceEnumeration {
    pub fn index_of(&self, h: &GkmSubgraph) -> Option<usize> {
        self.faces.iter().position(|f| &f.subgraph == h)
    }
}

pub fn enumerate_faces(g: &GkmGraph, cap: usize) -> Result<FaceEnumeration, GkmError> {
    enumerate_faces_with(g, &AllFaces, None, cap)
}

pub fn enumerate_tg_faces(g: &GkmGraph, c: &Connection, cap: usize) -> Result<FaceEnumeration, GkmError> {
    enumerate_faces_with(g, &TotallyGeodesic, Some(c), cap)
}

struct Search<'a> {
    g: &'a GkmGraph,
    nbrs: Vec<Vec<usize>>,
    degree: usize,
    cap: usize,
    visited: &'a AtomicUsize,
    aborted: &'a AtomicBool,
}

struct State {
    chosen: Vec<usize>,
    closed: Vec<u32>,
    deg: Vec<usize>,
    touched: usize,
    full: usize,
}

impl Search<'_> {
    fn add(&self, s: &mut State, e: usize) {
        s.chosen.push(e);
        s.closed[e] += 1;
        for &u in &self.nbrs[e] {
            s.closed[u] += 1;
        }
        for v in self.g.edges[e].ends {
            if s.deg[v] == 0 {
                s.touched += 1;
            }
            s.deg[v] += 1;
            if s.deg[v] == self.degree {
                s.full += 1;
            }
        }
    }

    fn remove(&self, s: &mut State, e: usize) {
        s.chosen.pop();
        s.closed[e] -= 1;
        for &u in &self.nbrs[e] {
            s.closed[u] -= 1;
        }
        for v in self.g.edges[e].ends {
            if s.deg[v] == self.degree {
                s.full -= 1;
            }
            s.deg[v] -= 1;
            if s.deg[v] == 0 {
                s.touched -= 1;
            }
        }
    }

    /// Connected edge sets with root `root` as smallest element, extended
    /// one line-graph neighbour at a time, each set visited once.
    fn extend(&self, root: usize, s: &mut State, mut ext: Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if self.aborted.load(Ordering::Relaxed) {
            return;
        }
        if self.visited.fetch_add(1, Ordering::Relaxed) >= self.cap {
            self.aborted.store(true, Ordering::Relaxed);
            return;
        }
        if s.touched == s.full {
            let mut set = s.chosen.clone();
            set.sort_unstable();
            out.push(set);
        }
        while let Some(w) = ext.pop() {
            if self.g.edges[w].ends.iter().any(|&v| s.deg[v] == self.degree) {
                continue;
            }
            let mut next = ext.clone();
            next.extend(self.nbrs[w].iter().copied().filter(|&u| u > root && s.closed[u] == 0));
            self.add(s, w);
            self.extend(root, s, next, out);
            self.remove(s, w);
        }
    }
}

/// Connected regular edge sets of each degree `1..=max_degree`, sorted.
fn regular_edge_sets(g: &GkmGraph, max_degree: usize, cap: usize) -> Result<(Vec<Vec<usize>>, usize), GkmError> {
    let m = g.edge_count();
    let nbrs: Vec<Vec<usize>> = (0..m)
        .map(|e| {
            let set: BTreeSet<usize> = g.edges[e]
                .ends
                .iter()
                .flat_map(|&v| g.star(v).iter().copied())
                .filter(|&f| f != e)
                .collect();
            set.into_iter().collect()
        })
        .collect();
    let visited = AtomicUsize::new(0);
    let aborted = AtomicBool::new(false);
    let mut all = Vec::new();
    for degree in 1..=max_degree {
        let search = Search {
            g,
            nbrs: nbrs.clone(),
            degree,
            cap,
            visited: &visited,
            aborted: &aborted,
        };
        let found: Vec<Vec<Vec<usize>>> = (0..m)
            .into_par_iter()
            .map(|root| {
                let mut state = State {
                    chosen: Vec::new(),
                    closed: vec![0; m],
                    deg: vec![0; g.vertex_count()],
                    touched: 0,
                    full: 0,
                };
                let mut out = Vec::new();
                search.add(&mut state, root);
                let ext: Vec<usize> = search.nbrs[root].iter().copied().filter(|&u| u > root).collect();
                search.extend(root, &mut state, ext, &mut out);
                out
            })
            .collect();
        if aborted.load(Ordering::Relaxed) {
            return Err(GkmError::CapExceeded(cap));
        }
        all.extend(found.into_iter().flatten());
    }
    all.sort();
    Ok((all, visited.load(Ordering::Relaxed)))
}

/// Faces of `g` admitted by `filter`, ordered by (rank, size, vertices,
/// edges), with the inclusion order.
pub fn enumerate_faces_with(
    g: &GkmGraph,
    filter: &dyn FaceFilter,
    connection: Option<&Connection>,
    cap: usize,
) -> Result<FaceEnumeration, GkmError> {
    let summary = require_valid(g)?;
    if filter.needs_connection() && connection.is_none() {
        return Err(GkmError::NoConnection);
    }
    let (edge_sets, candidates) = regular_edge_sets(g, summary.dimension, cap)?;
    let mut faces: Vec<Face> = (0..g.vertex_count())
        .map(|v| Face {
            subgraph: GkmSubgraph::vertex(v),
            rank: 0,
            degree: 0,
            flat: Subspace::zero(g.ambient_rank),
        })
        .collect();
    let larger: Vec<Face> = edge_sets
        .into_par_iter()
        .filter_map(|edges| {
            let vertices: BTreeSet<usize> = edges.iter().flat_map(|&e| g.edges[e].ends).collect();
            let vertices: Vec<usize> = vertices.into_iter().collect();
            let mut mask = FixedBitSet::with_capacity(g.edge_count());
            edges.iter().for_each(|&e| mask.insert(e));
            if !g.violations_within(&vertices, &mask, true).is_empty() {
                return None;
            }
            let subgraph = GkmSubgraph { vertices, edges };
            let flat = subgraph_flat(g, &subgraph, subgraph.vertices[0]).expect("first vertex is in the face");
            Some(Face {
                rank: flat.dim(),
                degree: subgraph.degree(g),
                subgraph,
                flat,
            })
        })
        .collect();
    faces.extend(larger);
    faces.retain(|f| filter.admits(g, connection, &f.subgraph));
    faces.sort_by(|a, b| {
        (a.rank, a.subgraph.vertices.len(), a.subgraph.edges.len(), &a.subgraph).cmp(&(
            b.rank,
            b.subgraph.vertices.len(),
            b.subgraph.edges.len(),
            &b.subgraph,
        ))
    });
    let poset = inclusion_poset(g, faces.iter().map(|f| &f.subgraph), None);
    Ok(FaceEnumeration {
        faces,
        poset,
        candidates,
    })
}

/// Inclusion order on subgraphs; ids from [`GkmSubgraph::id`], labels are
/// vertex sets.
pub(crate) fn inclusion_poset<'a>(
    g: &GkmGraph,
    subgraphs: impl Iterator<Item = &'a GkmSubgraph>,
    drk: Option<&[u64]>,
) -> GradedPoset {
    let subgraphs: Vec<&GkmSubgraph> = subgraphs.collect();
    let mut b = PosetBuilder::new();
    for (i, h) in subgraphs.iter().enumerate() {
        b.add_labeled(h.id(g), h.vertex_label(g))
            .expect("distinct subgraphs have distinct ids");
        if let Some(d) = drk {
            b.set_drk(i, d[i]);
        }
    }
    for (i, h) in subgraphs.iter().enumerate() {
        for (j, k) in subgraphs.iter().enumerate() {
            if i != j && h.is_subgraph_of(k) {
                b.relate(i, j);
            }
        }
    }
    b.build().expect("inclusion of distinct subgraphs is a partial order")
}
