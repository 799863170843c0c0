//! Subcodes of Reed–Solomon product codes built from linearized polynomials.
//!
//! Over `GF(2^M)`, a separable `q`-linearized `f` and `g = x - f` split the
//! field into root spaces `Z_f` and `Z_g`. Polynomials `s(g(x), f(x))` with
//! `deg_x s, deg_y s < r` evaluated on `Z_f + Z_g` give the product of two
//! `[n, r]` Reed–Solomon codes; keeping only the `k` lowest-degree basis
//! polynomials gives the subcode `C_k`, which keeps row and column locality
//! and has provably good minimum distance.
//!
//! - [`field`]: `GF(2^M)` arithmetic and polynomials.
//! - [`linearized`]: the pair `(f, g)`, root spaces and the standard
//!   instantiation over `GF(q^2)`.
//! - [`degrees`]: the attainable degree set and its row echelon oracle.
//! - [`codec`]: generator matrices, encoding, grid layout.
//! - [`bounds`]: closed-form distance bounds.
//! - [`analysis`]: exhaustive and sampled distance, erasure oracles, simulation.

pub mod analysis;
pub mod bounds;
pub mod codec;
pub mod degrees;
pub mod error;
pub mod export;
pub mod field;
pub mod linalg;
pub mod linearized;
pub mod par;
pub mod verify;

pub use codec::{build_code, build_code_with, CodeInstance, GridWord};
pub use degrees::{degree_profile, DegreeProfile};
pub use error::{Error, Result};
pub use field::{BiPoly, Elem, FieldCtx, UniPoly};
pub use linearized::{instantiate_standard, instantiate_with, LinearizedPair};
pub use par::Exec;
