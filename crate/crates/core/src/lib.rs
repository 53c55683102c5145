//! Minimal surfaces from Weierstrass data.
//!
//! The crate builds immersions of minimal surfaces in R³ from a Gauss map `G`
//! (used as the conformal coordinate) and a height differential
//! `dh = f(G) dG`, evaluates the geometric fields attached to them (induced
//! metric, Gauss curvature, angle functions, the Chern and Ricci flat
//! structures and the Chern-Ricci harmonic functions), and certifies the
//! identities relating them numerically.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. With `std`, immersion and grid checks parallelize over rayon.
//!
//! Module map:
//! - [`wdsl`]: expression language for `f(G)`, singularity detection and
//!   square-root branch continuation.
//! - [`sphere`]: stereographic projection and angle functions.
//! - [`geom`]: metric, curvature, Weierstrass forms, immersion, periods.
//! - [`chern_ricci`]: Chern/Ricci conformal factors and Chern-Ricci functions.
//! - [`catalog`]: named families, vertex configurations, the Scherk graph.
//! - [`verify`]: numerical certification checks and Procrustes alignment.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod error;
mod par;
mod prelude;

pub mod catalog;
pub mod chern_ricci;
pub mod geom;
pub mod sphere;
pub mod verify;
pub mod wdsl;

pub use error::{Error, Result};
pub use num_complex::Complex64;
