//! Necklace representations of links: chains of pairwise tangent balls whose
//! threads realize a given link diagram, built from a circle packing of the
//! diagram's pyramidal patchwork.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagram;
pub mod inversive;
pub mod patchwork;
pub mod circlepack;
pub mod crossing;
pub mod necklace;
pub mod io;
pub mod cli;
