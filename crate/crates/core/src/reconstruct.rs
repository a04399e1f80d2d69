//! Face-poset reconstruction from a GKM-graph: keep, for each vertex and
//! each span, the greatest face through that vertex with that span. Also
//! the projection onto surviving faces and its Galois insertion checks.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::gkm::{inclusion_poset, local_face_poset, Connection, FaceEnumeration, GkmError, GkmGraph, GkmSubgraph};
use crate::poset::GradedPoset;
use crate::ratlinalg::Subspace;
use crate::strategy::{connection_rules, face_filters, FaceFilter, UnknownStrategy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconstructError {
    #[error(transparent)]
    Gkm(#[from] GkmError),
    #[error(transparent)]
    Strategy(#[from] UnknownStrategy),
    #[error("reconstruction produced {0} diagnostic(s); the projection is undefined")]
    Diagnostics(usize),
    #[error("no surviving face contains `{0}`")]
    NoContainingFace(String),
    #[error("the surviving faces containing `{0}` have no least element")]
    AmbiguousMinimum(String),
}

/// A (vertex, span) group whose faces have no greatest element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub vertex: String,
    pub flat: Subspace,
    pub maxima: Vec<String>,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "at `{}` with span {}: no greatest face, keeping {}",
            self.vertex,
            self.flat,
            self.maxima.join(", ")
        )
    }
}

/// Surviving faces with their labels, plus everything the enumeration saw.
#[derive(Debug, Clone)]
pub struct FaceReport {
    pub mode: &'static str,
    /// Surviving faces ordered by inclusion, drk = regular degree.
    pub faces: GradedPoset,
    pub subgraphs: Vec<GkmSubgraph>,
    pub rank: Vec<usize>,
    pub drk: Vec<usize>,
    pub enumeration: FaceEnumeration,
    pub diagnostics: Vec<Diagnostic>,
}

impl FaceReport {
    pub fn len(&self) -> usize {
        self.subgraphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgraphs.is_empty()
    }

    pub fn com(&self, i: usize) -> usize {
        self.drk[i] - self.rank[i]
    }

    pub fn index_of(&self, h: &GkmSubgraph) -> Option<usize> {
        self.subgraphs.iter().position(|s| s == h)
    }

    /// One line per face: id, rank, drk, com and vertex set.
    pub fn table(&self, g: &GkmGraph) -> String {
        let ids: Vec<String> = self.subgraphs.iter().map(|h| h.id(g)).collect();
        let width = ids.iter().map(String::len).max().unwrap_or(0).max(4);
        let mut out = format!("{:<width$}  rank  drk  com  vertices\n", "face");
        for (i, h) in self.subgraphs.iter().enumerate() {
            out.push_str(&format!(
                "{:<width$}  {:>4}  {:>3}  {:>3}  {}\n",
                ids[i],
                self.rank[i],
                self.drk[i],
                self.com(i),
                h.vertex_label(g)
            ));
        }
        out
    }
}

/// Runs the enumeration selected by `filter` and keeps the greatest face of
/// every (vertex, span) group.
pub fn reconstruct_face_poset(
    g: &GkmGraph,
    filter: &dyn FaceFilter,
    connection: Option<&Connection>,
    cap: usize,
) -> Result<FaceReport, GkmError> {
    let enumeration = crate::gkm::enumerate_faces_with(g, filter, connection, cap)?;
    let faces = &enumeration.faces;
    let mut groups: BTreeMap<(usize, &Subspace), Vec<usize>> = BTreeMap::new();
    for (i, f) in faces.iter().enumerate() {
        for &x in f.subgraph.vertices() {
            groups.entry((x, &f.flat)).or_default().push(i);
        }
    }
    let outcomes: Vec<(Vec<usize>, Option<Diagnostic>)> = groups
        .into_par_iter()
        .map(|((x, flat), members)| {
            let contains_all = |m: usize| {
                members
                    .iter()
                    .all(|&o| faces[o].subgraph.is_subgraph_of(&faces[m].subgraph))
            };
            if let Some(&top) = members.iter().find(|&&m| contains_all(m)) {
                return (vec![top], None);
            }
            let maxima: Vec<usize> = members
                .iter()
                .copied()
                .filter(|&m| {
                    !members
                        .iter()
                        .any(|&o| o != m && faces[m].subgraph.is_subgraph_of(&faces[o].subgraph))
                })
                .collect();
            let diagnostic = Diagnostic {
                vertex: g.vertex(x).to_string(),
                flat: flat.clone(),
                maxima: maxima.iter().map(|&m| faces[m].subgraph.id(g)).collect(),
            };
            (maxima, Some(diagnostic))
        })
        .collect();
    let mut keep = vec![false; faces.len()];
    let mut diagnostics = Vec::new();
    for (kept, diagnostic) in outcomes {
        kept.into_iter().for_each(|i| keep[i] = true);
        diagnostics.extend(diagnostic);
    }
    let survivors: Vec<usize> = (0..faces.len()).filter(|&i| keep[i]).collect();
    let subgraphs: Vec<GkmSubgraph> = survivors.iter().map(|&i| faces[i].subgraph.clone()).collect();
    let rank: Vec<usize> = survivors.iter().map(|&i| faces[i].rank).collect();
    let drk: Vec<usize> = survivors.iter().map(|&i| faces[i].degree).collect();
    let drk_labels: Vec<u64> = drk.iter().map(|&d| d as u64).collect();
    let poset = inclusion_poset(g, subgraphs.iter(), Some(&drk_labels));
    Ok(FaceReport {
        mode: filter.name(),
        faces: poset,
        subgraphs,
        rank,
        drk,
        enumeration,
        diagnostics,
    })
}

/// [`reconstruct_face_poset`] with the mode and connection rule looked up
/// by name; the connection is only resolved when the mode needs one.
pub fn reconstruct_by_name(g: &GkmGraph, mode: &str, rule: &str, cap: usize) -> Result<FaceReport, ReconstructError> {
    let filter = face_filters().get(mode)?;
    let connection = if filter.needs_connection() {
        Some(connection_rules().get(rule)?.connection(g)?)
    } else {
        None
    };
    Ok(reconstruct_face_poset(g, filter.as_ref(), connection.as_ref(), cap)?)
}

/// The least surviving face containing `h`, as an index into the report.
pub fn pi_map(g: &GkmGraph, report: &FaceReport, h: &GkmSubgraph) -> Result<usize, ReconstructError> {
    if !report.diagnostics.is_empty() {
        return Err(ReconstructError::Diagnostics(report.diagnostics.len()));
    }
    let above: Vec<usize> = (0..report.len())
        .filter(|&i| h.is_subgraph_of(&report.subgraphs[i]))
        .collect();
    if above.is_empty() {
        return Err(ReconstructError::NoContainingFace(h.id(g)));
    }
    above
        .iter()
        .copied()
        .find(|&i| {
            above
                .iter()
                .all(|&j| report.subgraphs[i].is_subgraph_of(&report.subgraphs[j]))
        })
        .ok_or_else(|| ReconstructError::AmbiguousMinimum(h.id(g)))
}

/// A failed Galois-insertion law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GaloisFailure {
    NotExtensive { face: String, image: String },
    NotRetraction { face: String, image: String },
    ProjectionNotMonotone { lower: String, upper: String },
    InclusionNotMonotone { lower: String, upper: String },
    Undefined { face: String, reason: String },
}

impl fmt::Display for GaloisFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaloisFailure::NotExtensive { face, image } => {
                write!(f, "`{image}` = pi(`{face}`) does not contain `{face}`")
            }
            GaloisFailure::NotRetraction { face, image } => write!(f, "pi of surviving face `{face}` is `{image}`"),
            GaloisFailure::ProjectionNotMonotone { lower, upper } => {
                write!(f, "`{lower}` <= `{upper}` but pi(`{lower}`) is not below pi(`{upper}`)")
            }
            GaloisFailure::InclusionNotMonotone { lower, upper } => {
                write!(f, "surviving `{lower}` <= `{upper}` but the subgraphs are not nested")
            }
            GaloisFailure::Undefined { face, reason } => write!(f, "pi(`{face}`) undefined: {reason}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisReport {
    pub faces_checked: usize,
    pub survivors_checked: usize,
    pub failures: Vec<GaloisFailure>,
}

impl GaloisReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every enumerated face `H`, `pi(H)` contains `H`; for every surviving
/// face `F`, `pi(F) = F`; both maps preserve order.
pub fn verify_galois(g: &GkmGraph, report: &FaceReport) -> Result<GaloisReport, ReconstructError> {
    if !report.diagnostics.is_empty() {
        return Err(ReconstructError::Diagnostics(report.diagnostics.len()));
    }
    let all = &report.enumeration.faces;
    let mut failures = Vec::new();
    let mut image = Vec::with_capacity(all.len());
    for f in all {
        let h = &f.subgraph;
        match pi_map(g, report, h) {
            Ok(p) => {
                if !h.is_subgraph_of(&report.subgraphs[p]) {
                    failures.push(GaloisFailure::NotExtensive {
                        face: h.id(g),
                        image: report.subgraphs[p].id(g),
                    });
                }
                image.push(Some(p));
            }
            Err(e) => {
                failures.push(GaloisFailure::Undefined {
                    face: h.id(g),
                    reason: e.to_string(),
                });
                image.push(None);
            }
        }
    }
    for (i, s) in report.subgraphs.iter().enumerate() {
        match pi_map(g, report, s) {
            Ok(p) if p == i => {}
            Ok(p) => failures.push(GaloisFailure::NotRetraction {
                face: s.id(g),
                image: report.subgraphs[p].id(g),
            }),
            Err(e) => failures.push(GaloisFailure::Undefined {
                face: s.id(g),
                reason: e.to_string(),
            }),
        }
    }
    for (a, fa) in all.iter().enumerate() {
        for (b, fb) in all.iter().enumerate() {
            if a == b || !fa.subgraph.is_subgraph_of(&fb.subgraph) {
                continue;
            }
            if let (Some(pa), Some(pb)) = (image[a], image[b]) {
                if !report.faces.leq(pa, pb) {
                    failures.push(GaloisFailure::ProjectionNotMonotone {
                        lower: fa.subgraph.id(g),
                        upper: fb.subgraph.id(g),
                    });
                }
            }
        }
    }
    for a in 0..report.len() {
        for b in 0..report.len() {
            if report.faces.leq(a, b) && !report.subgraphs[a].is_subgraph_of(&report.subgraphs[b]) {
                failures.push(GaloisFailure::InclusionNotMonotone {
                    lower: report.subgraphs[a].id(g),
                    upper: report.subgraphs[b].id(g),
                });
            }
        }
    }
    Ok(GaloisReport {
        faces_checked: all.len(),
        survivors_checked: report.len(),
        failures,
    })
}

/// Minimal faces `x` whose upper ideal is not isomorphic to the lattice of
/// flats of the weights at `x`.
pub fn local_lattice_mismatches(g: &GkmGraph, report: &FaceReport) -> Result<Vec<String>, GkmError> {
    let mut out = Vec::new();
    for x in report.faces.minimal_elements() {
        let sub = &report.subgraphs[x];
        if !sub.edges().is_empty() {
            out.push(sub.id(g));
            continue;
        }
        let local = local_face_poset(g, g.vertex(sub.vertices()[0]))?;
        if !report.faces.upper_ideal(x).is_isomorphic(&local) {
            out.push(sub.id(g));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gkm::{GkmBuilder, DEFAULT_CAP};
    use crate::poset::boolean_lattice;

    fn cp2() -> GkmGraph {
        let mut b = GkmBuilder::new(2, true);
        b.vertex("A").vertex("B").vertex("C");
        b.edge("AB", "A", "B", [1, 0].into())
            .edge("AC", "A", "C", [0, 1].into())
            .edge("BC", "B", "C", [-1, 1].into());
        b.build().unwrap()
    }

    #[test]
    fn cp2_reconstructs_to_projectivized_b3() {
        let g = cp2();
        for mode in ["faces", "totally-geodesic"] {
            let r = reconstruct_by_name(&g, mode, "auto", DEFAULT_CAP).unwrap();
            assert_eq!(r.len(), 7);
            assert!(r.diagnostics.is_empty());
            assert!(r.faces.is_isomorphic(&boolean_lattice(3).projectivize().unwrap()));
            assert_eq!(r.faces.drk().unwrap().iter().max(), Some(&2));
            assert!(verify_galois(&g, &r).unwrap().passed());
            assert!(local_lattice_mismatches(&g, &r).unwrap().is_empty());
        }
    }

    #[test]
    fn pi_of_vertex_and_whole() {
        let g = cp2();
        let r = reconstruct_by_name(&g, "faces", "auto", DEFAULT_CAP).unwrap();
        let a = g.vertex_index_of("A").unwrap();
        assert_eq!(
            r.subgraphs[pi_map(&g, &r, &GkmSubgraph::vertex(a)).unwrap()],
            GkmSubgraph::vertex(a)
        );
        assert_eq!(r.subgraphs[pi_map(&g, &r, &g.whole()).unwrap()], g.whole());
    }

    #[test]
    fn table_lists_every_face() {
        let g = cp2();
        let r = reconstruct_by_name(&g, "faces", "auto", DEFAULT_CAP).unwrap();
        let t = r.table(&g);
        assert_eq!(t.lines().count(), 8);
        assert!(t.lines().last().unwrap().starts_with("AB+AC+BC"));
    }

    #[test]
    fn unknown_mode() {
        assert!(matches!(
            reconstruct_by_name(&cp2(), "geodesic", "auto", DEFAULT_CAP),
            Err(ReconstructError::Strategy(_))
        ));
    }
}
