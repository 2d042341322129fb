//! Numerical workbench for asymptotically hyperbolic (AH) gluing.
//!
//! Everything lives in a planar symmetry reduction of the half-space model
//! `ℋ = {(θ, z) : z > 0}` with metric `g = z⁻² g̃`: fields depend on `(t, z)`
//! only (`t = θ¹`), symmetric 2-tensors carry a single transverse diagonal
//! component repeated `n−2` times, and the dimension `n` stays symbolic in
//! all traces, divergences and measures `z⁻ⁿ dt dz`.
//!
//! Module map:
//! * [`chart`], [`grid`] — coordinate charts (polar annulus, rectangles),
//!   graded tensor grids, finite-difference operators, quadrature.
//! * [`geometry`] — metric catalog, Christoffel symbols, curvature (closed
//!   form and sampled routes), Killing form, scalings, hyperbolic inversion,
//!   mass aspect.
//! * [`weights`] — defining functions `x, z, ρ`, the weights `φ = x/ρ`,
//!   `ψ = xᵃ z̄ᵇ ρᶜ`, cutoff `χ`, weighted Sobolev/Hölder norms, weight calculus.
//! * [`operators`] — constraint map, its linearization and formal adjoint,
//!   static operator, sparse operator assembly and the composite
//!   `ψ⁻² P (ψ² φ⁴ P* ·)`.
//! * [`solver`] — SPD linear solves (PCG + banded Cholesky), Picard gluing
//!   drivers (scalar, full constraints, λ-sweep, Maskit assembly), decay fits.
//! * [`inequalities`] — Rayleigh-quotient constant measurement (Poincaré,
//!   Korn, static) and the integration-by-parts identity regression registry.
//! * [`kids`] — static KID catalog, KID residuals, spectral kernel tests.
//! * [`cli`] — run configuration, drivers and report emission.

pub mod chart;
pub mod cli;
pub mod error;
pub mod field;
pub mod geometry;
pub mod grid;
pub mod inequalities;
pub mod kids;
pub mod operators;
pub mod solver;
pub mod weights;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
