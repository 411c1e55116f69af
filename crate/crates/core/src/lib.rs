//! Finite semirings, profinite (Boolean) spaces presented as inverse chains of
//! finite sets, and semiring-valued finitely additive measures on their clopen
//! algebras.
//!
//! Every infinite object in this crate is a lazily evaluated compatible family
//! of finite stages. Operations state the level they read and fail with
//! [`Error::DepthExhausted`] instead of extrapolating.
//!
//! Module map:
//! - [`semiring`]: lookup-table semirings and semimodules, law validators,
//!   natural order, profinite semiring chains and joint continuity.
//! - [`space`]: inverse systems, clopens, points, continuous maps.
//! - [`monad`]: the semiring monad on finite sets and its law checker.
//! - [`measure`]: stage-family measures, integration, pushforward, density
//!   witnesses, free extension.
//! - [`density`]: density functions and integrals for idempotent semirings,
//!   closed-set (Vietoris) families.
//! - [`duality`]: brute-force finite Stone duality for `S^X`.
//! - [`descriptor`]: JSON descriptors for all of the above.
//! - [`suites`]: seeded and exhaustive property suites shared by the CLI
//!   and the acceptance tests.

pub mod density;
pub mod descriptor;
pub mod duality;
mod error;
pub mod measure;
pub mod monad;
pub mod report;
pub mod semiring;
pub mod space;
pub mod suites;

pub use error::{Error, Result};
