mod common;

use std::collections::BTreeSet;

use common::rational_rank;
use toric_faces::complexes::check_upper_links;
use toric_faces::corpus;
use toric_faces::gkm::{
    canonical_connection, enumerate_faces, enumerate_tg_faces, local_face_poset, subgraph_flat, validate,
    validate_connection, ConnectionViolation, Dart, GkmError, DEFAULT_CAP,
};
use toric_faces::io::{parse_graph, write_graph};
use toric_faces::poset::boolean_lattice;
use toric_faces::reconstruct::{local_lattice_mismatches, pi_map, reconstruct_by_name, verify_galois};
use toric_faces::{GkmGraph, GkmSubgraph};

fn graph(name: &str) -> GkmGraph {
    parse_graph(corpus::get(name).unwrap()).unwrap()
}

fn cp3() -> GkmGraph {
    let e = |i: usize| -> Vec<i64> { (1..=3).map(|j| i64::from(i == j)).collect() };
    let mut text = String::from("ambient_rank: 3\nsigned\n");
    for v in 1..=4 {
        text.push_str(&format!("vertex v{v}\n"));
    }
    for a in 1..=4usize {
        for b in a + 1..=4 {
            let w: Vec<String> = e(a).iter().zip(e(b)).map(|(x, y)| (x - y).to_string()).collect();
            text.push_str(&format!("edge e{a}{b} v{a} v{b} weight ({})\n", w.join(",")));
        }
    }
    parse_graph(&text).unwrap()
}

fn cube() -> GkmGraph {
    let mut text = String::from("ambient_rank: 3\nsigned\n");
    for v in 0..8 {
        text.push_str(&format!("vertex c{v:03b}\n"));
    }
    for v in 0..8usize {
        for i in 0..3 {
            if v >> i & 1 == 0 {
                let w: Vec<String> = (0..3).map(|j| if j == i { "1" } else { "0" }.to_string()).collect();
                text.push_str(&format!(
                    "edge d{v:03b}_{i} c{v:03b} c{:03b} weight ({})\n",
                    v | 1 << i,
                    w.join(",")
                ));
            }
        }
    }
    parse_graph(&text).unwrap()
}

fn alpha_rows(g: &GkmGraph, edges: &[usize], from: usize) -> Vec<Vec<i64>> {
    edges
        .iter()
        .map(|&e| {
            g.alpha(e, from)
                .entries()
                .iter()
                .map(|x| i64::try_from(x).unwrap())
                .collect()
        })
        .collect()
}

/// Every connected regular subgraph satisfying the axioms, by scanning all
/// edge subsets; returned as (vertices, edges).
fn oracle_faces(g: &GkmGraph) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    let m = g.edge_count();
    let mut out: BTreeSet<(Vec<usize>, Vec<usize>)> = (0..g.vertex_count()).map(|v| (vec![v], vec![])).collect();
    for mask in 1u64..1 << m {
        let edges: Vec<usize> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
        let verts: BTreeSet<usize> = edges.iter().flat_map(|&e| g.edge(e).ends()).collect();
        let verts: Vec<usize> = verts.into_iter().collect();
        let star = |v: usize| -> Vec<usize> {
            edges
                .iter()
                .copied()
                .filter(|&e| g.edge(e).ends().contains(&v))
                .collect()
        };
        let d = star(verts[0]).len();
        if verts.iter().any(|&v| star(v).len() != d) {
            continue;
        }
        let mut comp: Vec<usize> = (0..g.vertex_count()).collect();
        fn find(c: &mut Vec<usize>, x: usize) -> usize {
            if c[x] != x {
                let r = find(c, c[x]);
                c[x] = r;
            }
            c[x]
        }
        for &e in &edges {
            let [a, b] = g.edge(e).ends();
            let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
            comp[ra] = rb;
        }
        let root = find(&mut comp, verts[0]);
        if verts.iter().any(|&v| find(&mut comp, v) != root) {
            continue;
        }
        let mut ok = true;
        for &y in &verts {
            for &e1 in &star(y) {
                for &e2 in &star(y) {
                    if e1 == e2 {
                        continue;
                    }
                    let z = g.edge(e2).other(y);
                    let mut plane = alpha_rows(g, &[e1, e2], y);
                    let closed = star(z).iter().filter(|&&e3| e3 != e2).any(|&e3| {
                        plane.push(alpha_rows(g, &[e3], z).remove(0));
                        let r = rational_rank(&plane);
                        plane.pop();
                        r <= 2
                    });
                    ok &= closed;
                }
            }
        }
        let base = alpha_rows(g, &star(verts[0]), verts[0]);
        let r0 = rational_rank(&base);
        for &v in &verts {
            let mut both = alpha_rows(g, &star(v), v);
            let rv = rational_rank(&both);
            both.extend(base.iter().cloned());
            ok &= rv == r0 && rational_rank(&both) == r0;
        }
        if ok {
            out.insert((verts, edges));
        }
    }
    out
}

fn as_set(faces: &[toric_faces::gkm::Face]) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    faces
        .iter()
        .map(|f| (f.subgraph.vertices().to_vec(), f.subgraph.edges().to_vec()))
        .collect()
}

fn all_graphs() -> Vec<(&'static str, GkmGraph)> {
    vec![
        ("s2", graph("s2.gkm")),
        ("cp2", graph("cp2.gkm")),
        ("square", graph("square.gkm")),
        ("g6", graph("g6.gkm")),
        ("cp3", cp3()),
        ("cube", cube()),
    ]
}

#[test]
fn validation_summaries() {
    let dims: Vec<(usize, usize)> = all_graphs()
        .iter()
        .map(|(_, g)| validate(g).map(|s| (s.dimension, s.rank)).unwrap())
        .collect();
    assert_eq!(dims, vec![(1, 1), (2, 2), (2, 2), (3, 2), (3, 3), (3, 3)]);
}

#[test]
fn enumeration_matches_exhaustive_oracle() {
    for (name, g) in all_graphs() {
        let e = enumerate_faces(&g, DEFAULT_CAP).unwrap();
        assert_eq!(as_set(&e.faces), oracle_faces(&g), "{name}");
    }
}

#[test]
fn face_counts() {
    let counts: Vec<usize> = all_graphs()
        .iter()
        .map(|(_, g)| enumerate_faces(g, DEFAULT_CAP).unwrap().faces.len())
        .collect();
    assert_eq!(counts, vec![3, 7, 9, 31, 15, 27]);
    let g6 = enumerate_faces(&graph("g6.gkm"), DEFAULT_CAP).unwrap();
    let rank2 = g6.faces.iter().filter(|f| f.rank == 2).count();
    assert_eq!(rank2, 16);
    assert_eq!(g6.faces.iter().filter(|f| f.rank == 2 && f.degree == 2).count(), 15);
}

#[test]
fn totally_geodesic_faces_match_oracle() {
    for (name, g) in all_graphs() {
        let c = toric_faces::strategy::connection_rules()
            .get("auto")
            .unwrap()
            .connection(&g)
            .unwrap();
        let tg = enumerate_tg_faces(&g, &c, DEFAULT_CAP).unwrap();
        let expected: BTreeSet<_> = oracle_faces(&g)
            .into_iter()
            .filter(|(_, edges)| {
                edges.iter().all(|&e| {
                    g.edge(e).ends().iter().all(|&x| {
                        let d = Dart { edge: e, from: x };
                        let y = g.dart_target(d);
                        let here: BTreeSet<usize> = edges
                            .iter()
                            .copied()
                            .filter(|&f| g.edge(f).ends().contains(&x))
                            .map(|f| c.image(&g, d, f).unwrap())
                            .collect();
                        let there: BTreeSet<usize> = edges
                            .iter()
                            .copied()
                            .filter(|&f| g.edge(f).ends().contains(&y))
                            .collect();
                        here == there
                    })
                })
            })
            .collect();
        assert_eq!(as_set(&tg.faces), expected, "{name}");
    }
    let counts: Vec<usize> = all_graphs()
        .iter()
        .map(|(_, g)| {
            let c = toric_faces::strategy::connection_rules()
                .get("auto")
                .unwrap()
                .connection(g)
                .unwrap();
            enumerate_tg_faces(g, &c, DEFAULT_CAP).unwrap().faces.len()
        })
        .collect();
    assert_eq!(counts, vec![3, 7, 9, 19, 15, 27]);
}

#[test]
fn spans_do_not_depend_on_the_vertex() {
    for (name, g) in all_graphs() {
        for f in enumerate_faces(&g, DEFAULT_CAP).unwrap().faces {
            for &x in f.subgraph.vertices() {
                assert_eq!(subgraph_flat(&g, &f.subgraph, x).unwrap(), f.flat, "{name}");
            }
        }
    }
}

#[test]
fn vertex_to_top_intervals_pass_through_an_edge() {
    for (_, g) in all_graphs() {
        let e = enumerate_faces(&g, DEFAULT_CAP).unwrap();
        let top = e.index_of(&g.whole()).unwrap();
        for (i, f) in e.faces.iter().enumerate() {
            if f.rank == 0 && g.edge_count() > 0 {
                assert!(e
                    .faces
                    .iter()
                    .enumerate()
                    .any(|(j, h)| h.degree == 1 && e.poset.lt(i, j) && e.poset.leq(j, top)));
            }
        }
    }
}

#[test]
fn canonical_connections() {
    for name in ["s2", "cp2", "square", "cp3", "cube"] {
        let g = all_graphs().into_iter().find(|(n, _)| *n == name).unwrap().1;
        let c = canonical_connection(&g).unwrap();
        assert!(validate_connection(&g, &c).is_ok(), "{name}");
    }
    let square = graph("square.gkm");
    assert_eq!(
        &canonical_connection(&square).unwrap(),
        square.declared_connection().unwrap()
    );
    let g6 = graph("g6.gkm");
    assert!(matches!(
        canonical_connection(&g6),
        Err(GkmError::NotThreeIndependent { .. })
    ));
}

#[test]
fn g6_connection_maps_edges_to_non_parallel_edges() {
    let g = graph("g6.gkm");
    let c = g.declared_connection().unwrap();
    assert!(validate_connection(&g, c).is_ok());
    for e in 0..g.edge_count() {
        for x in g.edge(e).ends() {
            let d = Dart { edge: e, from: x };
            let y = g.dart_target(d);
            for &f in g.star(x) {
                let h = c.image(&g, d, f).unwrap();
                if f != e {
                    assert_ne!(h, e);
                    assert!(!g.alpha(h, y).is_collinear(g.alpha(f, x)).unwrap());
                }
            }
        }
    }
}

#[test]
fn broken_connections_are_rejected() {
    let text = corpus::get("square.gkm").unwrap();
    let swapped = text
        .replace("connection ab at b -> ab via ab", "connection ab at b -> ad via ab")
        .replace("connection bc at b -> ad via ab", "connection bc at b -> ab via ab");
    let g = parse_graph(&swapped).unwrap();
    let v = validate_connection(&g, g.declared_connection().unwrap()).unwrap_err();
    assert!(v.iter().any(|x| matches!(x, ConnectionViolation::NotInverse { .. })));
    assert!(v.iter().any(|x| matches!(x, ConnectionViolation::FixesOwnEdge { .. })));

    let missing = text.replace("connection ab at a -> ab via ab\n", "");
    let g = parse_graph(&missing).unwrap();
    let v = validate_connection(&g, g.declared_connection().unwrap()).unwrap_err();
    assert!(matches!(v[0], ConnectionViolation::Missing { .. }));

    let cp2 = corpus::get("cp2.gkm").unwrap().to_string()
        + "connection AB at A -> AB via AB\nconnection AC at A -> AB via AB\n";
    let g = parse_graph(&cp2).unwrap();
    let v = validate_connection(&g, g.declared_connection().unwrap()).unwrap_err();
    assert!(v.iter().any(|x| matches!(x, ConnectionViolation::NotBijective { .. })));
}

#[test]
fn unsigned_connection_check_ignores_signs() {
    let text = corpus::get("cp2.gkm")
        .unwrap()
        .replace("signed\n", "")
        .replace("(-1,1)", "(1,-1)");
    let g = parse_graph(&text).unwrap();
    assert!(!g.is_signed());
    let c = canonical_connection(&g).unwrap();
    assert!(validate_connection(&g, &c).is_ok());
}

#[test]
fn local_face_posets() {
    let g6 = graph("g6.gkm");
    for v in g6.vertices() {
        let p = local_face_poset(&g6, v).unwrap();
        assert_eq!(p.len(), 5);
    }
    assert!(local_face_poset(&graph("cp2.gkm"), "A")
        .unwrap()
        .is_isomorphic(&boolean_lattice(2)));
    assert!(local_face_poset(&graph("square.gkm"), "a")
        .unwrap()
        .is_isomorphic(&boolean_lattice(2)));
    assert!(matches!(local_face_poset(&g6, "zz"), Err(GkmError::UnknownVertex(_))));
}

#[test]
fn reconstruction_of_extra_graphs() {
    let r = reconstruct_by_name(&cp3(), "faces", "auto", DEFAULT_CAP).unwrap();
    assert_eq!(r.len(), 15);
    assert!(r.faces.is_isomorphic(&boolean_lattice(4).projectivize().unwrap()));
    let r = reconstruct_by_name(&cube(), "totally-geodesic", "auto", DEFAULT_CAP).unwrap();
    assert_eq!(r.len(), 27);
    for (name, g) in all_graphs() {
        for mode in ["faces", "totally-geodesic"] {
            let r = reconstruct_by_name(&g, mode, "auto", DEFAULT_CAP).unwrap();
            assert!(r.diagnostics.is_empty(), "{name} {mode}");
            assert!(verify_galois(&g, &r).unwrap().passed(), "{name} {mode}");
            assert!(local_lattice_mismatches(&g, &r).unwrap().is_empty(), "{name} {mode}");
            assert!(check_upper_links(&r.faces).is_ok(), "{name} {mode}");
            let drk: Vec<u64> = r.drk.iter().map(|&d| d as u64).collect();
            assert_eq!(r.faces.check_gkm_coherent().unwrap().unwrap(), drk, "{name} {mode}");
        }
    }
}

#[test]
fn g6_projection_of_a_hexagon_is_the_top() {
    let g = graph("g6.gkm");
    let r = reconstruct_by_name(&g, "totally-geodesic", "auto", DEFAULT_CAP).unwrap();
    let top = r.index_of(&g.whole()).unwrap();
    let hexagons: Vec<&GkmSubgraph> = r
        .enumeration
        .faces
        .iter()
        .filter(|f| f.rank == 2 && f.degree == 2)
        .map(|f| &f.subgraph)
        .collect();
    assert_eq!(hexagons.len(), 3);
    for h in hexagons {
        assert_eq!(pi_map(&g, &r, h).unwrap(), top);
    }
}

#[test]
fn enumeration_is_independent_of_thread_count() {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            all_graphs()
                .iter()
                .map(|(_, g)| {
                    let e = enumerate_faces(g, DEFAULT_CAP).unwrap();
                    (as_set(&e.faces), e.poset.clone(), e.candidates)
                })
                .collect::<Vec<_>>()
        })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn graph_text_round_trip() {
    for (name, g) in all_graphs() {
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g, "{name}");
    }
}
