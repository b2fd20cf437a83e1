//! Distributed fractional and multi-coloring algorithms on a simulated
//! synchronous message-passing network.

pub mod graph;
pub mod sim;
pub mod coloring;
pub mod primitives;
pub mod clustering;
pub mod oracle;
pub mod frac;
pub mod approx;
pub mod grid;
