//! Exact combinatorial and algebraic core: the symbol algebra with its
//! structure-group coproduct and renormalization maps, labeled hypergraphs
//! with the power-counting checkers, coalescence trees with the clustering
//! conditions, and exact cumulant/moment combinatorics.

pub mod check;
pub mod coproduct;
pub mod graphs;
pub mod homogeneity;
pub mod library;
pub mod randgen;
pub mod renorm;
pub mod symbols;
pub mod wick;
