//! Factored algebraic expressions for square rhomboids.
//!
//! A square rhomboid `SR(n)` is a two-terminal DAG whose canonical
//! expression, the sum over all source-sink paths of the product of edge
//! labels, grows exponentially with `n`. The one-vertex decomposition in
//! [`vda`] produces an equivalent factored expression with `Θ(n^{log2 6})`
//! literals. [`oracle`] checks the result against the path sum and
//! [`complexity`] reproduces the literal-count recurrences.
//!
//! ```
//! use rhomboid_core::{generate, build_sr, check_exact};
//!
//! let e = generate(3).unwrap();
//! assert_eq!(e.to_string(), "(b1+e1*e2+d1*d2)*(b2+e3*e4+d3*d4)+e1*c1*e4+d1*a1*d4");
//! assert_eq!(e.literal_count(), 16);
//! assert!(check_exact(&e, &build_sr(3).unwrap(), 1000).unwrap().passed());
//! ```

pub mod complexity;
pub mod error;
pub mod expr;
pub mod field;
pub mod graph;
pub mod oracle;
pub mod vda;

pub use complexity::{closed_form, recurrence_table, ClosedForm, ComplexityRow};
pub use error::{Error, Result};
pub use expr::{Expr, Monomial, Node, ProductStyle};
pub use field::{PrimeField, MERSENNE_61};
pub use graph::{
    build_sr, classify, enumerate_paths, induced_subgraph, path_count, to_dot, EdgeLabel, Family, LabeledDigraph,
    SubgraphKind, Terminal, TerminalKind,
};
pub use oracle::{check_exact, check_fingerprint, dp_eval, VerificationReport};
pub use vda::{generate, generate_with, Config, Generator, SplitRounding, SubExprKey};
