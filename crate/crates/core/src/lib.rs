//! Computational toolkit for relatively hyperbolic groups: Cayley balls,
//! combinatorial horoballs, augmented and coned-off spaces, hyperbolicity
//! and quasiconvexity estimates, and developments of complexes of groups.

pub mod group;
pub mod graph;
pub mod horoball;
pub mod augmented;
pub mod hyperbolicity;
pub mod complex;
pub mod development;
