//! Lie and Noether point symmetries of quasilinear second-order PDE systems,
//! computed from the collineations of the base metric `g` and the field-space
//! metric `H`.
//!
//! The crate is organised bottom-up:
//! - [`expr`]: exact symbolic expressions, parsing, differentiation, zero tests;
//! - [`linalg`]: exact nullspaces;
//! - [`geometry`]: metrics, connections, curvature, Lie derivatives;
//! - [`collineations`]: Killing, homothetic, conformal, affine vectors and Killing tensors;
//! - [`symmetry`]: jet spaces, prolongation, Lie and Noether conditions, currents;
//! - [`assembler`]: symmetry algebras from collineation data;
//! - [`cases`]: built-in systems, special solutions and numeric verification.

#![allow(clippy::needless_range_loop)]

pub mod expr;
pub mod linalg;
pub mod geometry;
pub mod collineations;
pub mod symmetry;
pub mod assembler;
pub mod cases;

pub use expr::{Expr, Symbol, SymbolClass};
