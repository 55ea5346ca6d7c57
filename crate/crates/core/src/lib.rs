//! Entropy-stable spectral collocation solver for the 3-D compressible Euler
//! and Navier-Stokes equations on moving, deforming hexahedral grids.
//!
//! The discretization collocates on tensor-product Legendre-Gauss-Lobatto
//! nodes, uses diagonal-norm summation-by-parts operators, two-point
//! entropy-conservative fluxes in Hadamard (flux-differencing) form, and an
//! ALE mapping whose metric terms satisfy the discrete geometric conservation
//! laws exactly. Viscous terms use an LDG-type discretization in entropy
//! variables. Element-level work is data-parallel (rayon) when the `parallel`
//! feature is enabled (default); disabling it gives a sequential build with
//! identical results.

pub mod fluxes;
pub mod gas;
pub mod harness;
pub mod mesh;
pub mod operators;
mod parallel;
pub mod rhs;
pub mod time;
pub mod viscous;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("inadmissible state: rho = {rho}, T = {temperature}")]
    Inadmissible { rho: f64, temperature: f64 },

    #[error("inadmissible state at element {element}, node {node}, tau {tau}: rho = {rho}, T = {temperature}")]
    InadmissibleAt {
        element: usize,
        node: usize,
        tau: f64,
        rho: f64,
        temperature: f64,
    },

    #[error("nonpositive Jacobian at element {element}, node {node}, tau {tau}: J = {jacobian} at x = {x:?}")]
    MeshTangled {
        element: usize,
        node: usize,
        tau: f64,
        jacobian: f64,
        x: [f64; 3],
    },

    #[error("Newton iteration failed to converge at {context}: residual {residual}")]
    NewtonFailure { context: String, residual: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
