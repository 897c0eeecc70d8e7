//! Anti-van der Waerden numbers `aw(·,3)` of Cartesian products of trees and
//! forests.
//!
//! - [`graph`]: graphs, edge-list parsing, BFS metrics.
//! - [`tree`]: peripherality, the minus/plus transforms, tree classification
//!   and enumeration.
//! - [`product`]: Cartesian products and the factored distance.
//! - [`coloring`]: 3-APs, rainbow detection and the red/blue/green
//!   rainbow-free construction.
//! - [`classifier`]: closed-form values for tree and forest products.
//! - [`oracle`]: exhaustive search used to cross-check the classifier.
//! - [`dot`]: Graphviz export.

pub mod classifier;
pub mod coloring;
pub mod dot;
pub mod graph;
pub mod oracle;
pub mod product;
pub mod tree;

pub use classifier::{aw_forest_product, aw_tree_product, explain, AwResult, Rule};
pub use coloring::{find_rainbow_3ap, Coloring};
pub use graph::{parse_edge_list, Graph};
pub use oracle::{brute_force_aw3, exists_rainbow_free_exact_coloring, SearchBudget};
pub use product::{cartesian_product, ProductGraph};
pub use tree::{classify_tree, TreeClass, TreeKind};
