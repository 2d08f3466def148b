//! Toolkit for the elementary affine lambda-calculus and its fixpoint extension.

pub mod syntax;
pub mod typing;
pub mod eval;
pub mod encode;
pub mod regcompile;
pub mod truncate;
pub mod semantics;
pub mod extract;
