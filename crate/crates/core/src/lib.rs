//! Distributed games on asynchronous automata with causal-memory strategies,
//! and the chain of reductions from tile correspondence through bipartite
//! colorings to six-process games.

pub mod automata;
pub mod coloring;
pub mod games;
pub mod pcp;
pub mod reduction_game;
pub mod traces;
