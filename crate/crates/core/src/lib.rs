//! Many-valued modal logic workbench over FL_ew chains.
//!
//! Formulas ([`syntax`]) are evaluated in finite Kripke models ([`kripke`])
//! whose values live in one of the exact algebras of [`algebra`]. On top of
//! that sit a propositional/frame decision procedure ([`decision`]), the PCP
//! reduction ([`pcp`]), the logic-to-logic translations ([`bridges`]) and the
//! necessitation separation models ([`necessitation`]).

pub mod algebra;
pub mod bridges;
pub mod decision;
pub mod error;
pub mod io;
pub mod kripke;
pub mod lp;
pub mod necessitation;
pub mod pcp;
pub mod scalar;
pub mod syntax;

pub use algebra::{rat, Algebra, Exp, Value};
pub use error::{Error, Result};
pub use syntax::{Connective, Formula};

/// Exact rationals used for every carrier value.
pub type Rational = num_rational::BigRational;

/// Linear programs over exact rationals.
pub type ExactLp = lp::LinearProgram<Rational>;
/// Linear programs over `f64`, for quick numeric experiments.
pub type FloatLp = lp::LinearProgram<f64>;
