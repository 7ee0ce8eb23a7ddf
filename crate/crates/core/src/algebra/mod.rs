//! Exact sparse multivariate polynomial algebra over the rationals, with
//! weighted graded term orders, deterministic Buchberger completion, normal
//! forms, and standard-monomial rank counting for Artinian quotients.
//!
//! Determinism contract: every routine here is a pure function of its inputs;
//! identical inputs produce bit-identical outputs (ordered maps throughout,
//! fixed selection strategies, no hashing, no randomness).

mod groebner;
mod hilbert;
mod order;
mod parse;
mod poly;
mod table;

pub use groebner::{buchberger, buchberger_with, normal_form, quotient_equal, GroebnerBasis, GroebnerConfig};
pub use hilbert::{hilbert_function, RankVector};
pub use order::{OrderKind, TermOrder};
pub use parse::parse_expression;
pub use poly::{Monomial, Polynomial};
pub use table::VariableTable;
