//! Toolkit for the "delete few vertices, color the rest with r colors"
//! problem: an exact dynamic program over clique-width expressions, brute
//! force oracles, critical-graph generators, the gadget builders used by the
//! hardness constructions, the instance compilers themselves, and verifiers
//! for everything the compilers emit.

pub mod critical;
pub mod cwexpr;
pub mod dp;
pub mod gadgets;
pub mod graph;
pub mod oracle;
pub mod reductions;
pub mod verify;
