//! Exact computation of higher Poisson, Koszul–Schouten and Schouten
//! brackets on supermanifolds with polynomial coefficients.

pub mod brackets;
pub mod dsl;
pub mod error;
pub mod fixtures;
pub mod manifold;
pub mod operator;
pub mod parity;
pub mod phase;
pub mod poly;
pub mod random;
pub mod report;

pub use brackets::{
    higher_poisson_bracket, higher_schouten_bracket, jacobiator, ks_bracket, BracketHierarchy,
    HierarchyKind,
};
pub use error::{Error, Result};
pub use manifold::{Bundle, CoordinateSystem, Manifold};
pub use operator::DiffOperator;
pub use parity::Parity;
pub use phase::{DifferentialForm, HigherPoissonStructure, MultivectorField, VectorField};
pub use poly::{Factor, Monomial, Poly, Rational, Var, VarKind};
pub use report::{BracketReport, CheckEntry, ReportDocument, Residual};
