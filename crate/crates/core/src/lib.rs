//! Monte Carlo laboratory for the critical fuzzy Potts model.
//!
//! FK percolation is sampled with Chayes–Machta dynamics, clusters are
//! coloured independently, and arm events, almost-arm events and loop
//! encodings are measured on annuli. Closed-form exponents live in
//! [`exponents`]; the experiment harness in [`estimation`].

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::type_complexity)]

pub mod almost_arms;
pub mod arm_events;
pub mod coloring;
pub mod estimation;
pub mod exponents;
mod fine;
pub mod fk_sampler;
pub mod geometry;
pub mod loops;
