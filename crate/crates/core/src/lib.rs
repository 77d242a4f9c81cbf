//! Spectral analysis of pseudo-Hermitian chain Hamiltonians.
//!
//! The objects of study are tridiagonal `N = 2J` dimensional matrices with
//! equidistant diagonal `-(N-1), -(N-3), ..., N-1` and antisymmetric
//! couplings `±g_n` arranged symmetrically about the center,
//!
//! ```text
//!         | -5   g1   0    0    0    0 |
//!         | -g1  -3   g2   0    0    0 |
//!  H^(6) = |  0  -g2  -1   g3   0    0 |         g_n = sqrt(n(N-n)(1 - xi_n)),
//!         |  0    0  -g3   1   g2   0 |          xi_n = t + t^2 + ... + t^(J-1) + G_n t^J.
//!         |  0    0    0  -g2   3   g1 |
//!         |  0    0    0    0  -g1   5 |
//! ```
//!
//! Such a matrix is pseudo-Hermitian with respect to a diagonal sign matrix
//! (a "parity"), and its spectrum is real only on part of the parameter
//! axis. As `t` decreases, real levels merge pairwise and leave the real
//! axis; the library locates these transitions and enumerates the
//! combinatorics of the merger patterns.
//!
//! The crate is `no_std`-compatible (`alloc` required); the companion CLI
//! crate carries all IO and file formats.
//!
//! Module map:
//!
//! - [`model`] — the Hamiltonian family: dimensions, couplings, parity
//!   signature diagnostics.
//! - [`polynomial`] — characteristic polynomial in the even variable
//!   `s = E^2`, Sturm-chain real-root counting, simultaneous root finding.
//! - [`spectral`] — eigenvalue trajectories over `t`, closed-form `N = 4`
//!   oracles, domain tests, bisection location of critical `t` values.
//! - [`patterns`] — merger-pattern multiplicity recurrences and the
//!   brute-force matching oracle.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod assign;
pub mod model;
pub mod patterns;
pub mod polynomial;
pub mod spectral;

pub use model::{diagonal, ChainModel, CouplingState, ModelError, ParitySignature};
pub use polynomial::{
    all_roots, char_poly, char_poly_from_weights, count_real_roots_ge, sum_rule_check,
    EvenCharPoly, PolyError, RealRootCount, RootSet,
};
pub use spectral::{
    classify_mergers, closed_form_4, domain4_contains, qh_threshold, scan, spectrum_at, xi_root,
    Classification, ClosedForm4, Domain4Point, MergerEvent, Scan, ScanFailure, ScanPoint,
    SpectralError, SpectrumSample, ThresholdKind, ThresholdReport,
};
pub use patterns::{
    binomial_deltas, brute_force_count, enumerate_counts, mirror_symmetric_count,
    validate_pattern, BinomialDeltas, MergerPattern, PatternCountTable, PatternsError, Ratio,
};
