//! The chain Hamiltonian family: dimensions, diagonal, coupling strengths,
//! parametrization `xi_n(t)`, and parity-signature diagnostics.
//!
//! Couplings are consumed exclusively through their signed squares
//! `w_n = n(N-n)(1 - xi_n)`: every spectral computation downstream stays
//! real-coefficient and smooth across the Hermitian/non-Hermitian boundary.
//! The explicit square roots of the matrix entries appear only in
//! [`ChainModel::materialize`], which exists for validation.

use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;

/// Relative tolerance below which a bond weight counts as degenerate
/// (signature ambiguous at the boundary).
pub const DEGENERATE_BOND_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("half-dimension J must be >= 1")]
    ZeroDimension,
    #[error("expected {expected} coupling coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("bond weight for coupling {coupling} is degenerate at t = {t}")]
    DegenerateBond { coupling: usize, t: f64 },
}

/// One member of the chain family: half-dimension `J` and the `J` free
/// coefficients `G_1 ... G_J` of the `t^J` term, ordered outermost first
/// (`n = 1` is the outermost coupling, `n = J` the central one).
#[derive(Debug, Clone, PartialEq)]
pub struct ChainModel {
    j: usize,
    g: Vec<f64>,
}

/// State of one coupling at a given `t`.
///
/// `w_signed = n(N-n)(1 - xi)` equals `g_n^2` while the matrix entry is
/// real and `-|g_n|^2` once the literal entry turns imaginary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingState {
    pub n: usize,
    pub xi: f64,
    pub w_signed: f64,
}

/// Diagonal sign pattern `sigma` with `sigma_1 = +1` such that
/// `diag(sigma) H diag(sigma)` equals the conjugate transpose of `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParitySignature {
    pub signs: Vec<i8>,
}

/// Dense complex matrix, row-major. Only what the chain models need.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    fn zeros(n: usize) -> Self {
        ComplexMatrix {
            n,
            data: alloc::vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.n + col]
    }

    fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.n + col] = value;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|k| self.at(k, k)).sum()
    }

    /// Largest entrywise deviation from Hermiticity, `max |H - H^dagger|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for k in 0..self.n {
                let d = (self.at(i, k) - self.at(k, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Largest entrywise deviation of `diag(sigma) H diag(sigma)` from
    /// the conjugate transpose of `H`.
    pub fn pseudo_hermiticity_defect(&self, signature: &ParitySignature) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for k in 0..self.n {
                let lhs = self.at(i, k) * (signature.signs[i] as f64) * (signature.signs[k] as f64);
                let rhs = self.at(k, i).conj();
                worst = worst.max((lhs - rhs).norm());
            }
        }
        worst
    }
}

/// Diagonal of the `N = 2J` chain: `d_k = 2k - N - 1`, i.e.
/// `[-(N-1), -(N-3), ..., N-3, N-1]`. The entries sum to zero.
pub fn diagonal(j: usize) -> Vec<f64> {
    let n = 2 * j;
    (1..=n).map(|k| (2 * k) as f64 - (n + 1) as f64).collect()
}

impl ChainModel {
    pub fn new(j: usize, g: Vec<f64>) -> Result<Self, ModelError> {
        if j == 0 {
            return Err(ModelError::ZeroDimension);
        }
        if g.len() != j {
            return Err(ModelError::CoefficientCount {
                expected: j,
                got: g.len(),
            });
        }
        Ok(ChainModel { j, g })
    }

    pub fn half_dim(&self) -> usize {
        self.j
    }

    /// Matrix dimension `N = 2J`.
    pub fn dim(&self) -> usize {
        2 * self.j
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.g
    }

    /// Maximal squared coupling `g_n^max = n(N - n)`.
    pub fn g_max(&self, n: usize) -> f64 {
        debug_assert!((1..=self.j).contains(&n));
        (n * (self.dim() - n)) as f64
    }

    /// `xi_n(t) = t + t^2 + ... + t^(J-1) + G_n t^J`, evaluated by Horner.
    /// At `J = 1` the geometric part is empty and `xi = G_1 t`.
    pub fn xi(&self, n: usize, t: f64) -> f64 {
        debug_assert!((1..=self.j).contains(&n));
        let mut acc = self.g[n - 1] * t;
        for _ in 1..self.j {
            acc = t * (1.0 + acc);
        }
        acc
    }

    pub fn coupling_state(&self, n: usize, t: f64) -> CouplingState {
        let xi = self.xi(n, t);
        CouplingState {
            n,
            xi,
            w_signed: self.g_max(n) * (1.0 - xi),
        }
    }

    /// Signed squared couplings `w_1 ... w_J` at `t`.
    pub fn coupling_weights(&self, t: f64) -> Vec<f64> {
        (1..=self.j)
            .map(|n| self.coupling_state(n, t).w_signed)
            .collect()
    }

    /// `trace(H^2) = sum d_k^2 - 2 sum_bonds w`, with the bond at rows
    /// `(k, k+1)` carrying the weight of coupling `min(k, N-k)`.
    pub fn trace_h_squared(&self, t: f64) -> f64 {
        let n = self.dim();
        let diag_sq: f64 = diagonal(self.j).iter().map(|d| d * d).sum();
        let w = self.coupling_weights(t);
        let bonds: f64 = (1..n).map(|k| w[k.min(n - k) - 1]).sum();
        diag_sq - 2.0 * bonds
    }

    /// Builds the literal matrix. Entry `(k, k+1)` is `g_{min(k, N-k)}` and
    /// entry `(k+1, k)` its negative; the principal square root is used when
    /// the radicand `w` is negative, so bonds past their `xi = 1` point get
    /// entries `±i |g|` and the matrix turns Hermitian there.
    pub fn materialize(&self, t: f64) -> ComplexMatrix {
        let n = self.dim();
        let mut h = ComplexMatrix::zeros(n);
        for (k, d) in diagonal(self.j).into_iter().enumerate() {
            h.set(k, k, Complex64::new(d, 0.0));
        }
        let w = self.coupling_weights(t);
        for k in 1..n {
            let wk = w[k.min(n - k) - 1];
            let g = if wk >= 0.0 {
                Complex64::new(Float::sqrt(wk), 0.0)
            } else {
                Complex64::new(0.0, Float::sqrt(-wk))
            };
            h.set(k - 1, k, g);
            h.set(k, k - 1, -g);
        }
        h
    }

    /// Constructs the diagonal sign pattern realizing the pseudo-Hermiticity
    /// of the chain at `t`: along each bond, `sigma_k sigma_{k+1} = -1`
    /// where the bond is real antisymmetric (`w > 0`) and `+1` where it is
    /// already Hermitian (`w < 0`). Normalized to `sigma_1 = +1`.
    ///
    /// Fails with [`ModelError::DegenerateBond`] when some `|w|` is below
    /// `1e-12 * g_n^max`: at the switch-over point both sign choices work
    /// and the signature is ambiguous.
    pub fn find_parity_signature(&self, t: f64) -> Result<ParitySignature, ModelError> {
        let n = self.dim();
        let w = self.coupling_weights(t);
        let mut signs = Vec::with_capacity(n);
        signs.push(1i8);
        for k in 1..n {
            let coupling = k.min(n - k);
            let wk = w[coupling - 1];
            if Float::abs(wk) < DEGENERATE_BOND_TOL * self.g_max(coupling) {
                return Err(ModelError::DegenerateBond { coupling, t });
            }
            let flip = if wk > 0.0 { -1 } else { 1 };
            signs.push(signs[k - 1] * flip);
        }
        Ok(ParitySignature { signs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(j: usize, g: &[f64]) -> ChainModel {
        ChainModel::new(j, g.to_vec()).unwrap()
    }

    #[test]
    fn diagonal_small_dims() {
        assert_eq!(diagonal(1), alloc::vec![-1.0, 1.0]);
        assert_eq!(diagonal(2), alloc::vec![-3.0, -1.0, 1.0, 3.0]);
        assert_eq!(diagonal(3), alloc::vec![-5.0, -3.0, -1.0, 1.0, 3.0, 5.0]);
        for j in 1..=9 {
            let sum: f64 = diagonal(j).iter().sum();
            assert_eq!(sum, 0.0);
        }
    }

    #[test]
    fn model_validation() {
        assert_eq!(ChainModel::new(0, Vec::new()), Err(ModelError::ZeroDimension));
        assert_eq!(
            ChainModel::new(2, alloc::vec![1.0]),
            Err(ModelError::CoefficientCount { expected: 2, got: 1 })
        );
    }

    #[test]
    fn xi_examples() {
        // J = 1: empty geometric sum, xi = G_1 t.
        assert_eq!(model(1, &[1.0]).xi(1, 0.36), 0.36);
        // J = 2: xi = t + G t^2.
        assert_eq!(model(2, &[1.0, 1.0]).xi(1, 0.5), 0.75);
        // J = 3 at the root of t + t^2 + t^3 = 1.
        let xi = model(3, &[1.0, 1.0, 1.0]).xi(2, 0.5436890127);
        assert!((xi - 1.0).abs() < 1e-9, "xi = {xi}");
    }

    #[test]
    fn coupling_state_examples() {
        // J = 3, outermost coupling at t = 0: w = 1 * 5 * 1 = 5.
        assert_eq!(model(3, &[1.0, 1.0, 1.0]).coupling_state(1, 0.0).w_signed, 5.0);
        // Switch-off point: central coupling of J = 2 at xi = 1.
        let m = model(2, &[1.0, 1.0]);
        let t_gm = (5.0f64.sqrt() - 1.0) / 2.0;
        assert!(m.coupling_state(2, t_gm).w_signed.abs() < 1e-12);
        // J = 1 past the Hermitian boundary: w = 1 * 1 * (1 - 2) = -1.
        assert_eq!(model(1, &[1.0]).coupling_state(1, 2.0).w_signed, -1.0);
    }

    #[test]
    fn materialize_two_state() {
        let h = model(1, &[1.0]).materialize(0.36);
        assert_eq!(h.at(0, 0), Complex64::new(-1.0, 0.0));
        assert_eq!(h.at(1, 1), Complex64::new(1.0, 0.0));
        assert!((h.at(0, 1) - Complex64::new(0.8, 0.0)).norm() < 1e-15);
        assert!((h.at(1, 0) - Complex64::new(-0.8, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn materialize_four_state_at_origin() {
        // At t = 0 the couplings take their maximal values sqrt(3) and 2.
        let h = model(2, &[1.0, 1.0]).materialize(0.0);
        let s3 = 3.0f64.sqrt();
        assert!((h.at(0, 1).re - s3).abs() < 1e-15);
        assert!((h.at(1, 2).re - 2.0).abs() < 1e-15);
        assert!((h.at(2, 3).re - s3).abs() < 1e-15);
        assert!((h.at(1, 0).re + s3).abs() < 1e-15);
        assert_eq!(h.at(0, 2), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn materialize_hermitian_past_boundary() {
        // J = 1 at t = 2: entries +/- i, manifestly Hermitian.
        let h = model(1, &[1.0]).materialize(2.0);
        assert!((h.at(0, 1) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((h.at(1, 0) - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!(h.hermiticity_defect() < 1e-12);
    }

    #[test]
    fn signature_standard_parity() {
        // All bonds real: the usual alternating parity.
        let sig = model(2, &[1.0, 2.0]).find_parity_signature(0.2).unwrap();
        assert_eq!(sig.signs, alloc::vec![1, -1, 1, -1]);
    }

    #[test]
    fn signature_anomalous_window() {
        // Central coupling past xi = 1, outer still real: for G = [1, 2]
        // this is the window 0.5 < t < 0.618; at t = 0.55 the anomalous
        // signature (+1, -1, -1, +1) applies.
        let m = model(2, &[1.0, 2.0]);
        assert!(m.xi(2, 0.55) > 1.0 && m.xi(1, 0.55) < 1.0);
        let sig = m.find_parity_signature(0.55).unwrap();
        assert_eq!(sig.signs, alloc::vec![1, -1, -1, 1]);
        assert!(m.materialize(0.55).pseudo_hermiticity_defect(&sig) < 1e-12);
    }

    #[test]
    fn signature_trivial_when_hermitian() {
        let sig = model(1, &[1.0]).find_parity_signature(2.0).unwrap();
        assert_eq!(sig.signs, alloc::vec![1, 1]);
    }

    #[test]
    fn signature_degenerate_bond_rejected() {
        let m = model(2, &[1.0, 1.0]);
        let t_gm = (5.0f64.sqrt() - 1.0) / 2.0;
        match m.find_parity_signature(t_gm) {
            Err(ModelError::DegenerateBond { .. }) => {}
            other => panic!("expected DegenerateBond, got {other:?}"),
        }
    }

    #[test]
    fn bond_products_match_weights() {
        let m = model(3, &[1.0, -0.5, 2.0]);
        for &t in &[-1.0, 0.0, 0.3, 0.7, 3.0] {
            let h = m.materialize(t);
            let w = m.coupling_weights(t);
            let n = m.dim();
            for k in 1..n {
                let prod = h.at(k - 1, k) * h.at(k, k - 1);
                let expected = -w[k.min(n - k) - 1];
                assert!(
                    (prod.re - expected).abs() < 1e-12 * (1.0 + expected.abs()) && prod.im.abs() < 1e-12,
                    "bond {k} at t = {t}: {prod} vs {expected}"
                );
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_model() -> impl Strategy<Value = ChainModel> {
            (1usize..=8)
                .prop_flat_map(|j| proptest::collection::vec(-2.0f64..3.0, j).prop_map(move |g| {
                    ChainModel::new(j, g).unwrap()
                }))
        }

        proptest! {
            #[test]
            fn trace_is_zero(m in arb_model(), t in -1.0f64..3.0) {
                let tr = m.materialize(t).trace();
                prop_assert!(tr.norm() < 1e-12);
            }

            #[test]
            fn bond_products(m in arb_model(), t in -1.0f64..3.0) {
                let h = m.materialize(t);
                let w = m.coupling_weights(t);
                let n = m.dim();
                for k in 1..n {
                    let prod = h.at(k - 1, k) * h.at(k, k - 1);
                    let expected = -w[k.min(n - k) - 1];
                    prop_assert!(
                        (prod.re - expected).abs() <= 1e-12 * (1.0 + expected.abs())
                            && prod.im.abs() <= 1e-12 * (1.0 + expected.abs())
                    );
                }
            }

            #[test]
            fn hermitian_above_all_xi_roots(
                j in 1usize..=6,
                seeds in proptest::collection::vec(0.25f64..3.0, 6),
                extra in 0.01f64..1.0,
            ) {
                let g: Vec<f64> = seeds[..j].to_vec();
                let m = ChainModel::new(j, g).unwrap();
                // For positive coefficients every xi_n is increasing past its
                // root, so any t beyond all roots gives a Hermitian matrix.
                let mut t_top = 0.0f64;
                for n in 1..=j {
                    let mut t = 1.0;
                    while m.xi(n, t) < 1.0 {
                        t *= 2.0;
                    }
                    t_top = t_top.max(t);
                }
                let h = m.materialize(t_top + extra);
                prop_assert!(h.hermiticity_defect() < 1e-12);
            }

            #[test]
            fn signature_verifies_when_found(m in arb_model(), t in -1.0f64..3.0) {
                if let Ok(sig) = m.find_parity_signature(t) {
                    prop_assert!(m.materialize(t).pseudo_hermiticity_defect(&sig) < 1e-12);
                }
            }
        }
    }
}
