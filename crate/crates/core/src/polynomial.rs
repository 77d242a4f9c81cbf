//! Characteristic polynomial of the chain in the even variable `s = E^2`,
//! Sturm-chain real-root counting, and simultaneous complex root finding.
//!
//! The full characteristic polynomial `p(E) = det(H - E)` follows from the
//! three-term recurrence over leading principal minors,
//!
//! ```text
//! p_0 = 1,    p_1 = d_1 - E,    p_k = (d_k - E) p_{k-1} + w_k p_{k-2},
//! ```
//!
//! where `w_k` is the signed squared coupling of the bond `(k-1, k)`. The
//! chain spectrum is closed under `E -> -E`, so `p` contains only even
//! powers of `E` up to roundoff; [`EvenCharPoly`] keeps the even part
//! `q(s)` of degree `J` and records the size of the discarded odd leak.
//!
//! Root reality is decided exactly by sign counting over a Sturm sequence
//! (multiple roots deflated via gcd with the derivative first); the roots
//! themselves come from a deterministic Aberth-Ehrlich iteration.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;

use crate::model::ChainModel;

/// Relative threshold below which Euclidean remainders count as zero.
const STURM_REL_ZERO: f64 = 1e-13;
/// Relative threshold for dropping a defective remainder lead before it
/// becomes a divisor. Division by a degree-k remainder amplifies roundoff
/// by up to its lead ratio to the -k, so a lead below this fraction of
/// the remainder's own scale produces pure noise downstream; dropping it
/// perturbs the chain far less. Healthy chains never trip this.
const STURM_LEAD_TRIM: f64 = 1e-5;
/// Relative convergence target of the root iteration: `|q(z)| / |q'(z)|`.
const ROOT_NEWTON_TOL: f64 = 1e-11;
/// Iteration cap of the root finder.
const ROOT_MAX_ITER: usize = 500;
/// Imaginary-part tolerance deciding root reality, scaled by `1 + |s|`.
pub const REAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolyError {
    #[error("Sturm deflation left an ambiguous chain (degree {degree} stalled)")]
    IllConditioned { degree: usize },
    #[error("root iteration did not converge within {iterations} sweeps (residual {residual:e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        best: Vec<Complex64>,
    },
}

/// Even part `q(s)` of the characteristic polynomial, `p(E) = q(E^2)`.
///
/// Coefficients ascend in `s`, have length `J + 1`, and the leading one is
/// exactly `+1` (even dimension). `odd_leak` is the largest discarded odd
/// `E`-coefficient relative to the largest even one.
#[derive(Debug, Clone, PartialEq)]
pub struct EvenCharPoly {
    coeffs: Vec<f64>,
    source_t: Option<f64>,
    odd_leak: f64,
}

/// Roots of `q` together with the derived energies `±sqrt(s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    /// Roots in `s`, sorted by real part then imaginary part.
    pub s_roots: Vec<Complex64>,
    /// Energies, two per `s`-root in the order `(-sqrt(s), +sqrt(s))`.
    pub energies: Vec<Complex64>,
    /// Whether every `s`-root is real within tolerance and `>= -tolerance`,
    /// i.e. whether every energy is real.
    pub all_real: bool,
}

/// Real roots in a half-line, distinct and multiplicity-inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RealRootCount {
    pub distinct: usize,
    pub with_multiplicity: usize,
}

impl EvenCharPoly {
    /// Coefficients of `q(s)`, ascending; length `degree + 1`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The `t` the polynomial was built at, if it came from a model.
    pub fn source_t(&self) -> Option<f64> {
        self.source_t
    }

    /// Largest odd `E`-coefficient relative to the largest even one.
    pub fn odd_leak(&self) -> f64 {
        self.odd_leak
    }

    pub fn eval(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * s + c;
        }
        acc
    }

    pub fn eval_complex(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * s + c;
        }
        acc
    }

    /// Constant coefficient `q(0)`, whose sign flips when a root crosses
    /// `s = 0`.
    pub fn at_zero(&self) -> f64 {
        self.coeffs[0]
    }
}

/// Builds `q(s)` for the model at `t` via the minor recurrence.
pub fn char_poly(model: &ChainModel, t: f64) -> EvenCharPoly {
    let mut q = char_poly_from_weights(model.half_dim(), &model.coupling_weights(t));
    q.source_t = Some(t);
    q
}

// Compensated (double-double) arithmetic for the coefficient recurrence.
// Intermediate minors reach ~1e12 while final coefficients can be tiny
// near the fully degenerate point, so plain f64 accumulation loses them
// to cancellation; the error-free transformations below keep ~32 digits
// through the recurrence.

#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, Float::mul_add(a, b, -p))
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let (hi, lo) = quick_two_sum(s, e + self.lo + other.lo);
        Dd { hi, lo }
    }

    fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, Float::mul_add(self.lo, b, e));
        Dd { hi, lo }
    }

    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// Builds `q(s)` for the chain of half-dimension `j` directly from the
/// signed squared couplings `w_1 ... w_J` (outermost first), bypassing the
/// `t`-parametrization.
pub fn char_poly_from_weights(j: usize, weights: &[f64]) -> EvenCharPoly {
    assert!(j >= 1 && weights.len() == j, "need J >= 1 weights");
    let n = 2 * j;
    let diag = crate::model::diagonal(j);

    // p_{k-2} and p_{k-1}, ascending coefficients in E.
    let mut older: Vec<Dd> = vec![Dd::from_f64(1.0)];
    let mut newer: Vec<Dd> = vec![Dd::from_f64(diag[0]), Dd::from_f64(-1.0)];
    for k in 2..=n {
        let bond = k - 1;
        let w = weights[bond.min(n - bond) - 1];
        let mut next = vec![Dd::ZERO; k + 1];
        for (i, &c) in newer.iter().enumerate() {
            next[i] = next[i].add(c.mul_f64(diag[k - 1]));
            next[i + 1] = next[i + 1].add(c.neg());
        }
        for (i, &c) in older.iter().enumerate() {
            next[i] = next[i].add(c.mul_f64(w));
        }
        older = core::mem::replace(&mut newer, next);
    }

    let mut even = Vec::with_capacity(j + 1);
    let mut max_even = 0.0f64;
    let mut max_odd = 0.0f64;
    for (i, c) in newer.iter().enumerate() {
        let c = c.to_f64();
        if i % 2 == 0 {
            even.push(c);
            max_even = max_even.max(Float::abs(c));
        } else {
            max_odd = max_odd.max(Float::abs(c));
        }
    }
    EvenCharPoly {
        coeffs: even,
        source_t: None,
        odd_leak: if max_even > 0.0 { max_odd / max_even } else { max_odd },
    }
}

/// Vieta/trace cross-check: `|sum of s-roots - trace(H^2)/2|`.
///
/// The sum of the roots of the monic `q` is `-c_{J-1}`, and
/// `trace(H^2) = sum d_k^2 - 2 sum_bonds w` is computed independently of
/// the recurrence.
pub fn sum_rule_check(q: &EvenCharPoly, model: &ChainModel, t: f64) -> f64 {
    let j = q.degree();
    let vieta = -q.coeffs[j - 1];
    Float::abs(vieta - 0.5 * model.trace_h_squared(t))
}

// ---------------------------------------------------------------------------
// Sturm machinery
// ---------------------------------------------------------------------------

fn max_abs(coeffs: &[f64]) -> f64 {
    coeffs.iter().fold(0.0f64, |m, &c| m.max(Float::abs(c)))
}

/// Drops trailing coefficients at or below `tol` in magnitude.
fn trim(mut coeffs: Vec<f64>, tol: f64) -> Vec<f64> {
    while coeffs.len() > 1 && Float::abs(*coeffs.last().unwrap()) <= tol {
        coeffs.pop();
    }
    coeffs
}

/// Scales so that the largest coefficient magnitude is 1 (positive factor,
/// sign pattern preserved).
fn normalize(mut coeffs: Vec<f64>) -> Vec<f64> {
    let m = max_abs(&coeffs);
    if m > 0.0 {
        for c in &mut coeffs {
            *c /= m;
        }
    }
    coeffs
}

fn derivative(coeffs: &[f64]) -> Vec<f64> {
    if coeffs.len() <= 1 {
        return vec![0.0];
    }
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| i as f64 * c)
        .collect()
}

/// Euclidean remainder of `num / den`; `den` must have nonzero lead.
fn poly_rem(num: &[f64], den: &[f64]) -> Vec<f64> {
    let mut rem: Vec<f64> = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    while rem.len() > dd && rem.len() > 1 {
        let k = rem.len() - 1;
        let factor = rem[k] / lead;
        for i in 0..dd {
            rem[k - dd + i] -= factor * den[i];
        }
        rem.pop();
    }
    rem
}

/// Quotient and remainder of `num / den`.
fn poly_divmod(num: &[f64], den: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let dd = den.len() - 1;
    if dd == 0 {
        let lead = den[0];
        return (num.iter().map(|c| c / lead).collect(), vec![0.0]);
    }
    if num.len() <= dd {
        return (vec![0.0], num.to_vec());
    }
    let mut rem: Vec<f64> = num.to_vec();
    let mut quo = vec![0.0; num.len() - dd];
    let lead = den[dd];
    while rem.len() > dd {
        let k = rem.len() - 1;
        let factor = rem[k] / lead;
        quo[k - dd] = factor;
        for i in 0..dd {
            rem[k - dd + i] -= factor * den[i];
        }
        rem.pop();
    }
    (quo, rem)
}

/// Zero-or-trimmed decision for a Euclidean remainder: `None` when the
/// whole remainder is negligible, otherwise the remainder with any
/// defective lead coefficients dropped.
fn settle_remainder(r: Vec<f64>) -> Option<Vec<f64>> {
    let scale = max_abs(&r);
    if scale <= STURM_REL_ZERO {
        return None;
    }
    Some(trim(r, STURM_LEAD_TRIM * scale))
}

/// Greatest common divisor of two normalized polynomials, with remainders
/// below `STURM_REL_ZERO` treated as zero.
fn poly_gcd(a: Vec<f64>, b: Vec<f64>) -> Vec<f64> {
    let mut a = normalize(trim(a, 0.0));
    let mut b = normalize(trim(b, 0.0));
    if b.len() > a.len() {
        core::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.len() == 1 {
            if Float::abs(b[0]) <= STURM_REL_ZERO {
                return a;
            }
            return b; // nontrivial constant: coprime
        }
        match settle_remainder(poly_rem(&a, &b)) {
            None => return b,
            Some(r) => {
                a = b;
                b = normalize(r);
            }
        }
    }
}

/// Square-free part of `p` (and the gcd factor for multiplicity recursion).
fn square_free(p: &[f64]) -> Result<(Vec<f64>, Option<Vec<f64>>), PolyError> {
    let g = poly_gcd(p.to_vec(), derivative(p));
    if g.len() == 1 {
        return Ok((p.to_vec(), None));
    }
    let (q, r) = poly_divmod(p, &g);
    if max_abs(&r) > 1e-9 * max_abs(p).max(1.0) {
        return Err(PolyError::IllConditioned { degree: p.len() - 1 });
    }
    Ok((normalize(trim(q, 0.0)), Some(g)))
}

/// Sturm chain of a square-free polynomial. Fails when a remainder
/// vanishes before the chain reaches a constant, which signals that the
/// deflation left a multiple root behind.
fn sturm_chain(sf: &[f64]) -> Result<Vec<Vec<f64>>, PolyError> {
    let f0 = normalize(sf.to_vec());
    let f1 = normalize(trim(derivative(&f0), 0.0));
    let mut chain = vec![f0, f1];
    while chain.last().unwrap().len() > 1 {
        let r = poly_rem(&chain[chain.len() - 2], chain.last().unwrap());
        let Some(mut r) = settle_remainder(r) else {
            return Err(PolyError::IllConditioned {
                degree: chain.last().unwrap().len() - 1,
            });
        };
        for c in &mut r {
            *c = -*c;
        }
        chain.push(normalize(r));
    }
    Ok(chain)
}

/// Sign of `p(x)` with near-zero values (relative to the accumulated
/// coefficient magnitude) classified as zero.
fn sign_at(coeffs: &[f64], x: f64) -> i8 {
    let mut acc = 0.0f64;
    let mut mag = 0.0f64;
    let ax = Float::abs(x);
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
        mag = mag * ax + Float::abs(c);
    }
    if Float::abs(acc) <= STURM_REL_ZERO * mag {
        0
    } else if acc > 0.0 {
        1
    } else {
        -1
    }
}

fn sign_at_infinity(coeffs: &[f64], positive: bool) -> i8 {
    let lead = *coeffs.last().unwrap();
    let mut s = if lead > 0.0 {
        1
    } else if lead < 0.0 {
        -1
    } else {
        0
    };
    if !positive && (coeffs.len() - 1) % 2 == 1 {
        s = -s;
    }
    s
}

fn variations<F: Fn(&[f64]) -> i8>(chain: &[Vec<f64>], sign_of: F) -> usize {
    let mut count = 0;
    let mut last: i8 = 0;
    for f in chain {
        let s = sign_of(f);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

fn count_for(coeffs: &[f64], lower: f64) -> Result<RealRootCount, PolyError> {
    // Only exact-zero leads are spurious here; a relative trim could eat a
    // monic lead when the coefficient range is wide.
    let p = trim(coeffs.to_vec(), 0.0);
    if p.len() == 1 {
        return Ok(RealRootCount {
            distinct: 0,
            with_multiplicity: 0,
        });
    }

    // Balance the variable: with sigma the Fujiwara-style root bound, the
    // substitution s = sigma u keeps every coefficient magnitude at or
    // below the lead and the chain well scaled even when the couplings
    // are huge.
    let degree = p.len() - 1;
    let lead = p[degree];
    let mut bound = 0.0f64;
    for (k, &c) in p[..degree].iter().enumerate() {
        if c != 0.0 {
            bound = bound.max(Float::powf(Float::abs(c / lead), 1.0 / (degree - k) as f64));
        }
    }
    let sigma = if bound > 0.0 { bound } else { 1.0 };
    let p: Vec<f64> = p
        .iter()
        .enumerate()
        .map(|(k, &c)| c / Float::powi(sigma, (degree - k) as i32))
        .collect();
    let p = normalize(p);
    let lower = lower / sigma;

    let (sf, gcd_part) = square_free(&p)?;
    let chain = sturm_chain(&sf)?;

    let hi = variations(&chain, |f| sign_at_infinity(f, true));
    let lo = if lower == f64::NEG_INFINITY {
        variations(&chain, |f| sign_at_infinity(f, false))
    } else {
        // Sturm counts (a, inf); nudge left until `a` is off any root so the
        // closed end [lower, inf) is included.
        let mut a = lower;
        for _ in 0..8 {
            if sign_at(&sf, a) != 0 {
                break;
            }
            a -= 1e-11 * (1.0 + Float::abs(a));
        }
        variations(&chain, |f| sign_at(f, a))
    };
    let distinct = lo.saturating_sub(hi);

    let mut with_multiplicity = distinct;
    if let Some(g) = gcd_part {
        with_multiplicity += count_for(&g, lower)?.with_multiplicity;
    }
    Ok(RealRootCount {
        distinct,
        with_multiplicity,
    })
}

/// Number of real roots of `q` in `[lower, +inf)`, via Sturm sign
/// variations. `lower` may be `-inf`. Multiple roots are deflated through
/// the gcd with the derivative; `distinct` collapses them while
/// `with_multiplicity` adds the deflated copies back.
pub fn count_real_roots_ge(q: &EvenCharPoly, lower: f64) -> Result<RealRootCount, PolyError> {
    count_for(&q.coeffs, lower)
}

// ---------------------------------------------------------------------------
// Aberth-Ehrlich simultaneous root iteration
// ---------------------------------------------------------------------------

/// Value, derivative, and accumulated coefficient magnitude of `q` at `z`.
fn eval_all(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut mag = 0.0f64;
    let az = z.norm();
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
        mag = mag * az + Float::abs(c);
    }
    (p, dp, mag)
}

fn converged(coeffs: &[f64], z: Complex64) -> bool {
    let n = coeffs.len() - 1;
    let (p, dp, mag) = eval_all(coeffs, z);
    let noise_floor = (2 * n + 2) as f64 * f64::EPSILON * mag;
    p.norm() <= Float::max(ROOT_NEWTON_TOL * dp.norm(), noise_floor)
}

/// All complex roots of `q` by Aberth-Ehrlich iteration with deterministic
/// initial guesses: a circle of radius `1 + max |c_j / c_J|` at angles
/// `2 pi k / J + 0.4`. Runs are reproducible bit for bit per platform.
pub fn all_roots(q: &EvenCharPoly) -> Result<RootSet, PolyError> {
    let coeffs = &q.coeffs;
    let degree = coeffs.len() - 1;
    assert!(degree >= 1, "root finding needs degree >= 1");
    let lead = coeffs[degree];

    let radius = 1.0
        + coeffs[..degree]
            .iter()
            .fold(0.0f64, |m, &c| m.max(Float::abs(c / lead)));
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| {
            let angle = core::f64::consts::TAU * k as f64 / degree as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();

    let mut done = false;
    for _ in 0..ROOT_MAX_ITER {
        for k in 0..degree {
            let (p, dp, _) = eval_all(coeffs, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            if dp.norm() == 0.0 {
                // Parked on a stationary point: nudge off it and retry on
                // the next sweep.
                let nudge = Complex64::new(1e-6 * (1.0 + z[k].norm()), 1e-6);
                z[k] += nudge;
                continue;
            }
            let newton = p / dp;
            let mut repulsion = Complex64::new(0.0, 0.0);
            for m in 0..degree {
                if m != k {
                    let mut diff = z[k] - z[m];
                    if diff.norm_sqr() == 0.0 {
                        diff = Complex64::new(1e-12 * (1.0 + z[k].norm()), 1e-12);
                    }
                    repulsion += diff.finv();
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let correction = if denom.norm() == 0.0 { newton } else { newton / denom };
            z[k] -= correction;
        }
        if z.iter().all(|&zk| converged(coeffs, zk)) {
            done = true;
            break;
        }
    }

    z.sort_unstable_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    if !done {
        let residual = z
            .iter()
            .map(|&zk| eval_all(coeffs, zk).0.norm())
            .fold(0.0f64, f64::max);
        return Err(PolyError::NoConvergence {
            iterations: ROOT_MAX_ITER,
            residual,
            best: z,
        });
    }

    let mut energies = Vec::with_capacity(2 * degree);
    let mut all_real = true;
    for &s in &z {
        let tol = REAL_TOL * (1.0 + s.norm());
        if Float::abs(s.im) > tol || s.re < -tol {
            all_real = false;
        }
        let root = s.sqrt();
        energies.push(-root);
        energies.push(root);
    }
    Ok(RootSet {
        s_roots: z,
        energies,
        all_real,
    })
}
