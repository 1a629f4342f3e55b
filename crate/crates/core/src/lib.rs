//! Recursive growth trees: the six deterministic growth operations, exact
//! Wiener-index and mean-hitting-time formulas for the trees they generate,
//! and brute-force oracles (BFS distances, Laplacian spectra, random walks)
//! to check them against.

pub mod bench;
pub mod error;
pub mod exact;
pub mod graph;
pub mod growth;
pub mod hitting;
pub mod random_models;
pub mod recursive;
pub mod report;
pub mod verify;
pub mod wiener;

pub use error::{Error, NotATree, Result};
pub use graph::{
    build_path, build_star, parse_edge_list, random_tree, DistanceMatrix, Graph, Tree,
};
pub use growth::{apply, apply_pipeline, grow, parse_pipeline, Family, OpSpec};
pub use wiener::{tree_wiener, wiener_index, wiener_one_step, WienerPolynomial};
