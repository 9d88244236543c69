//! Exact group-ring Laplacians over finite presentations, their spectra under
//! finite-quotient representations, and the trace invariants built on them:
//! Betti numbers of finite-index subgroups, Lück approximation sequences,
//! ℓ₂-Betti upper bounds, box-space trace comparisons and exact verification
//! of sum-of-squares spectral-gap certificates.

pub mod chain;
pub mod coset;
pub mod error;
pub mod exact;
pub mod fox;
pub mod kazhdan;
pub mod matrix;
pub mod presentation;
pub mod representation;
pub mod ring;
pub mod sos;
pub mod spectral;
pub mod word;

pub use chain::{abelian_quotient_relators, quotient_chain, QuotientChain, QuotientMember, SeparationReport};
pub use coset::{todd_coxeter, CosetTable};
pub use error::{Error, Result};
pub use exact::ExactMatrix;
pub use fox::{fox_derivative, fox_jacobian};
pub use matrix::GroupRingMatrix;
pub use presentation::Presentation;
pub use representation::Representation;
pub use ring::GroupRingElement;
pub use spectral::{evaluate, EvaluatedOperator, GapReport, ProjectionMatrix};
pub use word::Word;
