//! Constraint propagation as chaotic iteration.
//!
//! A problem's domains (or its pair relations) form a product of finite
//! sets ordered by reversed inclusion. Every propagator is a monotone,
//! inflationary function on a few coordinates of that product, and each
//! algorithm is the generic worklist iteration with its own function set
//! and update policy:
//!
//! * [`order`]: product elements, schemes, canonic extension.
//! * [`engine`]: the generic worklist iteration and the one-pass iteration.
//! * [`csp`]: problems, binary relations, variable orders, normalization.
//! * [`propagators`]: projection and path functions, commutation sets.
//! * [`algorithms`]: hyper-arc, AC-3, path, PC-2 and the directional ones.
//! * [`oracle`]: brute-force ground truth, independent of the engine.
//! * [`format`] and [`cli`]: the text format and the `cprop` binary.
//!
//! ```
//! use cprop::{algorithms, examples};
//!
//! let r = algorithms::ac3(&examples::e1()).unwrap();
//! assert_eq!(r.problem.to_string(), "var x 1 2\nvar y 2 3\ncon lt (x y) { (1 2) (1 3) (2 3) }\n");
//! ```

pub mod algorithms;
pub mod batch;
pub mod cli;
pub mod csp;
pub mod engine;
pub mod examples;
pub mod format;
pub mod gen;
pub mod oracle;
pub mod order;
pub mod propagators;

pub use algorithms::{Algorithm, AlgorithmResult, RunOptions};
pub use csp::{normalize, BinaryRelation, Csp, NormalizedCsp, Value, VariableOrder};
pub use engine::{cd_run, gi_run, si_run, IterationTrace, PolicyKind, UpdatePolicy};
pub use order::{ProductElement, Scheme, SchemeFn};
