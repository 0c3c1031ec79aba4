//! Real-time information spreading over clique-structured social-physical
//! networks.
//!
//! The physical layer is a random partition of individuals into cliques
//! (complete, transmissibility 1) joined by inter-clique links; a random
//! subset of individuals is also online and wired by online links. Spreading
//! is bond percolation with transmissibility `T_w` on inter-clique links and
//! `T_f` on online links.
//!
//! - [`distributions`]: degree laws, generating functions, thinning.
//! - [`netgen`]: network realizations by stub matching.
//! - [`percolate`]: clique-level graph, bond percolation, ensembles.
//! - [`analytic`]: threshold and giant-component sizes from generating functions.
//! - [`harness`]: configs, sweeps, CSV, comparison, figure recipes.

pub mod analytic;
pub mod distributions;
pub mod harness;
pub mod netgen;
pub mod percolate;
