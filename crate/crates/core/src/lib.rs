//! Combinatorics of torus actions: lattices of flats of rational weight
//! systems, locally geometric posets, order-complex homology, GKM-graph
//! faces and face-poset reconstruction.

pub mod complexes;
pub mod corpus;
pub mod gkm;
pub mod io;
pub mod matroid;
pub mod poset;
pub mod ratlinalg;
pub mod reconstruct;
pub mod strategy;

pub use complexes::{reduced_betti, verify_wedge_prediction, ReducedBetti, SimplicialComplex};
pub use gkm::{validate, Connection, GkmGraph, GkmSubgraph};
pub use matroid::{all_flats, closure, flats_lattice, Flat, WeightSystem};
pub use poset::{GradedPoset, PosetBuilder};
pub use ratlinalg::{IntVector, Subspace};
pub use reconstruct::{pi_map, reconstruct_face_poset, verify_galois, FaceReport};
