//! Exact and certified-numeric machinery for the trinomials
//! `f(x) = x^n - a x^(n-1) - p` with `p` prime.
//!
//! The crate is layered bottom-up:
//!
//! - [`arith`]: primality, budgeted factorization, squarefree tests, valuations.
//! - [`poly`]: integer and prime-field polynomials, resultants, discriminants.
//! - [`irreducible`]: Perron / prime-constant / Eisenstein criteria and an exact
//!   factorization oracle driven by certified complex roots.
//! - [`monogenic`]: the five-condition trinomial index test and a Dedekind-criterion
//!   oracle, aggregated over the primes whose square divides the discriminant.
//! - [`classify`]: certified root isolation, unit-circle profiles, the
//!   Pisot / Salem / anti-Pisot / strictly-Perron taxonomy and companion-matrix checks.
//! - [`family`]: closed forms for the trinomial family and the end-to-end certificate.

pub mod arith;
pub mod classify;
pub mod family;
pub mod irreducible;
pub mod monogenic;
pub mod poly;

pub use arith::{factorize, is_prime, squarefree_status, valuation, Factorization, SquarefreeStatus};
pub use poly::{IntPoly, ModPoly};
pub use classify::{classify, ClassKind, Classification, SolverConfig, Subclass};
pub use family::{strictly_perron_certificate, Certificate, CertificateRecord, FamilyParams, PipelineConfig};
pub use monogenic::{monogenic, Method, MonogenicityReport, Verdict};
