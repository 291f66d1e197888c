//! Reversible Markov chains seen as electric networks.
//!
//! The crate is organised in layers:
//!
//! * [`network`]: weighted graphs, the associated reversible chain and graph
//!   surgery (contraction, exhaustion, series/parallel reduction).
//! * [`harmonic`]: Dirichlet problems, effective conductance and resistance,
//!   escape probabilities and limits along exhaustions of infinite graphs.
//! * [`flow`]: the discrete calculus of edge functions (`d`, `d*`, energy,
//!   star/cycle decomposition, Kirchhoff laws and the Thomson gap).
//! * [`tree`]: homogeneous trees and closed forms for their voltages,
//!   currents, Green function, hitting vector and escape probabilities.
//! * [`walk`]: a seeded, parallel Monte Carlo random-walk engine.
//! * [`verify`]: the three-way cross-validation battery (closed form,
//!   solver, Monte Carlo) used by the command line tool.

pub mod error;
pub mod flow;
pub mod harmonic;
pub mod network;
pub mod tree;
pub mod verify;
pub mod walk;

pub use error::{Error, Result};
pub use network::{Edge, EdgeFunction, MarkovView, Network, VertexFunction, VertexId};
