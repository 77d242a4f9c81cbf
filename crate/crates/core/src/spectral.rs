//! Eigenvalue trajectories over `t`, closed-form `N = 4` oracles,
//! quasi-Hermiticity domain tests, and bisection location of every kind of
//! critical `t`.
//!
//! Threshold and event refinement work on exact-sign predicates — the
//! Sturm real-root count and the sign of `q(0; t)` — rather than on
//! root-distance thresholds, which is what lets the ten-digit critical
//! values come out of plain bisection without tuning.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;

use crate::assign::min_cost_assignment;
use crate::model::{ChainModel, ModelError};
use crate::patterns::MergerPattern;
use crate::polynomial::{
    all_roots, char_poly, count_real_roots_ge, PolyError, RootSet, REAL_TOL,
};

/// Lower bound of the `s >= 0` reality test; slightly negative so the
/// exact `E = 0` boundary case still counts as real.
pub const REALITY_LOWER: f64 = -1e-10;
/// Final bracket width of every bisection refinement.
const BRACKET_WIDTH: f64 = 1e-12;
/// Grid cells used to isolate `xi_n(t) = 1` sign changes.
const XI_GRID_CELLS: usize = 10_000;
/// Default number of grid samples for merger classification.
pub const DEFAULT_CLASSIFY_STEPS: usize = 4000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("xi_{coupling}(t) = 1 has no root in (0, {search_max}]")]
    NoRootInRange { coupling: usize, search_max: f64 },
    #[error("reality predicate does not differ between t = {t_high} and t = {t_low}")]
    PredicateNotBracketed { t_high: f64, t_low: f64 },
    #[error("spectrum is not fully real at the range start t = {t}")]
    StartNotReal { t: f64 },
    #[error("a scan needs at least 2 grid samples, got {steps}")]
    InvalidSteps { steps: usize },
}

/// Kinds of critical `t` values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdKind {
    /// A real eigenvalue pair leaves the real axis (exceptional point).
    QhLoss,
    /// A coupling radicand `1 - xi_n` changes sign.
    XiRoot,
    /// An `s`-root crosses `s = 0` (central pair meets at `E = 0`).
    ZeroCrossing,
}

/// A located critical `t` with the bracket and residual of its refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdReport {
    pub kind: ThresholdKind,
    /// Coupling index for `XiRoot` reports.
    pub coupling: Option<usize>,
    pub t: f64,
    /// Final bisection bracket, ordered `(low, high)`.
    pub bracket: (f64, f64),
    pub residual: f64,
}

/// Eigenvalue set at one `t`, with optional identity labels for the
/// `s`-roots (odd integers, assigned by scans).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSample {
    pub t: f64,
    pub roots: RootSet,
    pub labels: Option<Vec<u32>>,
}

/// Membership test result for the `N = 4` quasi-Hermiticity domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain4Point {
    pub alpha: f64,
    pub beta: f64,
    pub inside: bool,
}

/// The two closed-form `s`-values of the four-level chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForm4 {
    pub s_minus: Complex64,
    pub s_plus: Complex64,
}

/// One grid point of a scan; `sample` is `None` when the root finder
/// failed there (the scan continues past such points).
#[derive(Debug, Clone, PartialEq)]
pub struct ScanPoint {
    pub t: f64,
    pub sample: Option<SpectrumSample>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanFailure {
    pub index: usize,
    pub t: f64,
    pub error: PolyError,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scan {
    pub points: Vec<ScanPoint>,
    pub failures: Vec<ScanFailure>,
}

/// A refined merger event: the pair of labels whose levels met.
#[derive(Debug, Clone, PartialEq)]
pub struct MergerEvent {
    pub t: f64,
    pub bracket: (f64, f64),
    pub pair: (i64, i64),
    pub kind: ThresholdKind,
}

/// Output of [`classify_mergers`].
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub pattern: MergerPattern,
    pub events: Vec<MergerEvent>,
}

/// Spectrum at a single `t`: characteristic polynomial plus root finding.
/// Labels stay unset; scans assign them.
pub fn spectrum_at(model: &ChainModel, t: f64) -> Result<SpectrumSample, SpectralError> {
    let roots = all_roots(&char_poly(model, t))?;
    Ok(SpectrumSample {
        t,
        roots,
        labels: None,
    })
}

/// Closed form of the four-level chain:
/// `s_± = 3 beta + 2 alpha ± 2 sqrt(3 beta alpha + alpha^2 + 9 beta - 9 alpha)`,
/// with the complex square root taken when the radicand is negative.
pub fn closed_form_4(alpha: f64, beta: f64) -> ClosedForm4 {
    let radicand = 3.0 * beta * alpha + alpha * alpha + 9.0 * beta - 9.0 * alpha;
    let root = Complex64::new(radicand, 0.0).sqrt();
    let base = Complex64::new(3.0 * beta + 2.0 * alpha, 0.0);
    ClosedForm4 {
        s_minus: base - 2.0 * root,
        s_plus: base + 2.0 * root,
    }
}

/// Membership in the `N = 4` real-spectrum domain, bounded by the curves
/// `beta >= (9 alpha - alpha^2) / (9 + 3 alpha)` and
/// `alpha >= beta - beta^2 / 4` (each with `1e-12` slack).
pub fn domain4_contains(alpha: f64, beta: f64) -> Domain4Point {
    let beta_min = (9.0 * alpha - alpha * alpha) / (9.0 + 3.0 * alpha);
    let alpha_min = beta - beta * beta / 4.0;
    Domain4Point {
        alpha,
        beta,
        inside: beta + 1e-12 >= beta_min && alpha + 1e-12 >= alpha_min,
    }
}

/// Smallest positive root of `xi_n(t) = 1` in `(0, search_max]`: sign
/// changes isolated on a uniform grid, then bisected to a `1e-12` bracket.
pub fn xi_root(
    model: &ChainModel,
    n: usize,
    search_max: f64,
) -> Result<ThresholdReport, SpectralError> {
    assert!(search_max > 0.0, "search_max must be positive");
    let f = |t: f64| model.xi(n, t) - 1.0;
    let h = search_max / XI_GRID_CELLS as f64;
    let mut t_prev = 0.0;
    let mut f_prev = f(0.0);
    for i in 1..=XI_GRID_CELLS {
        let t_cur = if i == XI_GRID_CELLS {
            search_max
        } else {
            i as f64 * h
        };
        let f_cur = f(t_cur);
        if f_cur == 0.0 {
            return Ok(ThresholdReport {
                kind: ThresholdKind::XiRoot,
                coupling: Some(n),
                t: t_cur,
                bracket: (t_cur, t_cur),
                residual: 0.0,
            });
        }
        if f_prev * f_cur < 0.0 {
            let (mut lo, mut hi) = (t_prev, t_cur);
            let mut f_lo = f_prev;
            while hi - lo > BRACKET_WIDTH {
                let mid = 0.5 * (lo + hi);
                let f_mid = f(mid);
                if f_mid == 0.0 || f_lo * f_mid < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    f_lo = f_mid;
                }
            }
            let t_root = 0.5 * (lo + hi);
            return Ok(ThresholdReport {
                kind: ThresholdKind::XiRoot,
                coupling: Some(n),
                t: t_root,
                bracket: (lo, hi),
                residual: Float::abs(f(t_root)),
            });
        }
        t_prev = t_cur;
        f_prev = f_cur;
    }
    Err(SpectralError::NoRootInRange {
        coupling: n,
        search_max,
    })
}

/// Whether the spectrum is entirely real at `t`: all `J` roots of `q`
/// (with multiplicity) real and `>= REALITY_LOWER`.
fn reality(model: &ChainModel, t: f64) -> Result<bool, PolyError> {
    let q = char_poly(model, t);
    Ok(count_real_roots_ge(&q, REALITY_LOWER)?.with_multiplicity == model.half_dim())
}

/// Real roots of `q(.; t)` over the whole axis, with multiplicity.
fn total_real(model: &ChainModel, t: f64) -> Result<usize, PolyError> {
    let q = char_poly(model, t);
    Ok(count_real_roots_ge(&q, f64::NEG_INFINITY)?.with_multiplicity)
}

/// `total_real` with tiny retries around `t`: a grid node sitting exactly
/// on a level confluence yields an ambiguous chain, and either side of it
/// gives the count the cell walker needs.
fn total_real_near(model: &ChainModel, t: f64, span: f64) -> Result<usize, PolyError> {
    let mut last_err = None;
    for offset in [0.0, 1e-7, -1e-7, 1e-6, -1e-6, 1e-5, -1e-5] {
        match total_real(model, t + offset * span) {
            Ok(count) => return Ok(count),
            Err(e @ PolyError::IllConditioned { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("retry loop ran"))
}

/// `total_real` retried strictly on the far side of an event bracket
/// (`direction` points away from it), so the post-event count never reads
/// back across the collision.
fn total_real_past(
    model: &ChainModel,
    t: f64,
    direction: f64,
    span: f64,
) -> Result<usize, PolyError> {
    let sign = if direction >= 0.0 { 1.0 } else { -1.0 };
    let mut last_err = None;
    for offset in [0.0, 1e-7, 1e-6, 1e-5] {
        match total_real(model, t + sign * offset * span) {
            Ok(count) => return Ok(count),
            Err(e @ PolyError::IllConditioned { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("retry loop ran"))
}

/// Locates the quasi-Hermiticity boundary between a `t` with fully real
/// spectrum and a `t` without, by bisection on the reality predicate down
/// to a `1e-12` bracket. Reports the boundary adjacent to `t_high`, i.e.
/// the infimum of the real-spectrum interval found.
pub fn qh_threshold(
    model: &ChainModel,
    t_high: f64,
    t_low: f64,
) -> Result<ThresholdReport, SpectralError> {
    if !reality(model, t_high)? || reality(model, t_low)? {
        return Err(SpectralError::PredicateNotBracketed { t_high, t_low });
    }
    let (t_true, t_false) = bisect_on(|t| reality(model, t), t_high, t_low)?;
    Ok(ThresholdReport {
        kind: ThresholdKind::QhLoss,
        coupling: None,
        t: 0.5 * (t_true + t_false),
        bracket: (t_true.min(t_false), t_true.max(t_false)),
        residual: Float::abs(t_true - t_false),
    })
}

fn track_labels(
    prev_roots: &[Complex64],
    prev_labels: &[u32],
    new_roots: &[Complex64],
) -> Vec<u32> {
    let n = prev_roots.len();
    let cost: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|k| (prev_roots[i] - new_roots[k]).norm()).collect())
        .collect();
    let assignment = min_cost_assignment(&cost);
    let mut labels = alloc::vec![0u32; n];
    for (i, &k) in assignment.iter().enumerate() {
        labels[k] = prev_labels[i];
    }
    labels
}

/// Spectrum samples on a uniform `t` grid with label continuity: the
/// initial sample gets labels `1, 3, ..., 2J-1` in ascending-`s` order and
/// later samples inherit them through a minimal-total-distance assignment.
/// Root-finder failures flag their sample and the scan continues.
pub fn scan(
    model: &ChainModel,
    t_start: f64,
    t_end: f64,
    steps: usize,
) -> Result<Scan, SpectralError> {
    if steps < 2 {
        return Err(SpectralError::InvalidSteps { steps });
    }
    let h = (t_end - t_start) / (steps - 1) as f64;
    let mut points = Vec::with_capacity(steps);
    let mut failures = Vec::new();
    let mut last_good: Option<(Vec<Complex64>, Vec<u32>)> = None;
    for i in 0..steps {
        let t = if i == steps - 1 {
            t_end
        } else {
            t_start + i as f64 * h
        };
        match all_roots(&char_poly(model, t)) {
            Ok(roots) => {
                let labels = match &last_good {
                    Some((prev_roots, prev_labels)) => {
                        track_labels(prev_roots, prev_labels, &roots.s_roots)
                    }
                    None => (0..roots.s_roots.len()).map(|k| 2 * k as u32 + 1).collect(),
                };
                last_good = Some((roots.s_roots.clone(), labels.clone()));
                points.push(ScanPoint {
                    t,
                    sample: Some(SpectrumSample {
                        t,
                        roots,
                        labels: Some(labels),
                    }),
                });
            }
            Err(error) => {
                failures.push(ScanFailure { index: i, t, error });
                points.push(ScanPoint { t, sample: None });
            }
        }
    }
    Ok(Scan { points, failures })
}

// ---------------------------------------------------------------------------
// Merger classification
// ---------------------------------------------------------------------------

fn sign_of(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Bisects a boolean predicate between a true and a false point down to a
/// `1e-12` bracket; returns `(true_side, false_side)`.
///
/// A probe can land exactly on a multiple root and report an ambiguous
/// Sturm chain; since that set has measure zero the split point is then
/// shifted slightly and the step retried.
fn bisect_on<F>(mut predicate: F, mut t_true: f64, mut t_false: f64) -> Result<(f64, f64), PolyError>
where
    F: FnMut(f64) -> Result<bool, PolyError>,
{
    while Float::abs(t_true - t_false) > BRACKET_WIDTH {
        let width = t_false - t_true;
        let mut outcome = None;
        let mut last_err = None;
        for fraction in [0.5, 0.47, 0.53, 0.41, 0.59] {
            match predicate(t_true + fraction * width) {
                Ok(hit) => {
                    outcome = Some((t_true + fraction * width, hit));
                    break;
                }
                Err(e @ PolyError::IllConditioned { .. }) => last_err = Some(e),
                Err(e) => return Err(e),
            }
        }
        match outcome {
            Some((mid, true)) => t_true = mid,
            Some((mid, false)) => t_false = mid,
            None => return Err(last_err.expect("retry loop ran")),
        }
    }
    Ok((t_true, t_false))
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum LabelState {
    /// Real root with `s >= REALITY_LOWER`: both energies real.
    Active(f64),
    /// Real root below zero: energies form an imaginary pair.
    Negative,
    Complex,
}

fn label_states(sample: &SpectrumSample) -> Vec<(u32, LabelState)> {
    let labels = sample.labels.as_ref().expect("scan samples carry labels");
    sample
        .roots
        .s_roots
        .iter()
        .zip(labels)
        .map(|(&s, &m)| {
            let tol = REAL_TOL * (1.0 + s.norm());
            let state = if Float::abs(s.im) > tol {
                LabelState::Complex
            } else if s.re < REALITY_LOWER {
                LabelState::Negative
            } else {
                LabelState::Active(s.re)
            };
            (m, state)
        })
        .collect()
}

/// Roots and inherited labels at an off-grid `t`, tracked from a reference
/// sample.
fn roots_with_labels(
    model: &ChainModel,
    t: f64,
    reference: &SpectrumSample,
) -> Result<(Vec<Complex64>, Vec<u32>), SpectralError> {
    let roots = all_roots(&char_poly(model, t))?;
    let labels = track_labels(
        &reference.roots.s_roots,
        reference.labels.as_ref().expect("labeled reference"),
        &roots.s_roots,
    );
    Ok((roots.s_roots, labels))
}

struct EventDraft {
    t: f64,
    bracket: (f64, f64),
    pairs: Vec<(i64, i64)>,
    kind: ThresholdKind,
    consumed: Vec<u32>,
}

/// Walks a scan grid and classifies the level mergers into label pairs.
///
/// Two event kinds are watched, each refined by bisection to a `1e-12`
/// bracket: two active roots colliding and leaving the real axis (refined
/// on the Sturm real-root count; records `[m1, m2]` and the mirror
/// `[-m2, -m1]`), and an active root crossing `s = 0` (refined on the sign
/// of `q(0; t)`; records `[-m, m]`). Active roots arriving at `s = 0`
/// exactly at the end of the range are recorded as crossings there.
///
/// The pattern is complete when every label is consumed. It is flagged
/// degenerate when distinct events cannot be separated, i.e. collapse
/// inside one refined bracket (transitional multiple mergers).
pub fn classify_mergers(
    model: &ChainModel,
    t_start: f64,
    t_end: f64,
    steps: usize,
) -> Result<Classification, SpectralError> {
    if steps < 2 {
        return Err(SpectralError::InvalidSteps { steps });
    }
    if !reality(model, t_start)? {
        return Err(SpectralError::StartNotReal { t: t_start });
    }

    let grid = scan(model, t_start, t_end, steps)?;
    let samples: Vec<&SpectrumSample> = grid
        .points
        .iter()
        .filter_map(|p| p.sample.as_ref())
        .collect();
    if samples.is_empty() {
        let failure = grid.failures.into_iter().next().expect("empty scan");
        return Err(SpectralError::Poly(failure.error));
    }

    let j = model.half_dim();
    let mut active: BTreeSet<u32> = samples[0]
        .labels
        .as_ref()
        .expect("labeled sample")
        .iter()
        .copied()
        .collect();
    let mut drafts: Vec<EventDraft> = Vec::new();
    let mut degenerate = false;

    let c0 = |t: f64| char_poly(model, t).at_zero();
    let mut prev_c0_sign = sign_of(c0(t_start));
    // Grid node where the constant coefficient was exactly zero, together
    // with the sample before it; recorded as a crossing only once the sign
    // is seen to differ on the far side (a tangency is not a merger).
    let mut pending_zero: Option<(f64, usize)> = None;
    let forward = t_end >= t_start;

    for (cell, window) in samples.windows(2).enumerate() {
        let (a, b) = (window[0], window[1]);
        let mut cell_events: Vec<EventDraft> = Vec::new();

        // (a) pair collisions: the total real-root count drops.
        let span = Float::abs(b.t - a.t);
        let mut count_here = total_real_near(model, a.t, span)?;
        let count_there = total_real_near(model, b.t, span)?;
        let mut lo = a.t;
        while count_here > count_there {
            let want = count_here;
            let (u, v) = bisect_on(|t| Ok(total_real(model, t)? >= want), lo, b.t)?;
            let after = total_real_past(model, v, v - u, span)?;
            let drop = count_here - after;
            // Identify the colliding labels midway through the event-free
            // gap before the collision; at the bracket itself the pair is
            // too close for the root finder to resolve as real.
            let probe = 0.5 * (lo + u);
            let (roots, labels) = roots_with_labels(model, probe, a)?;
            let mut real: Vec<(u32, f64)> = roots
                .iter()
                .zip(&labels)
                .filter(|(s, _)| Float::abs(s.im) <= REAL_TOL * (1.0 + s.norm()))
                .map(|(s, &m)| (m, s.re))
                .collect();
            real.sort_unstable_by(|x, y| x.1.total_cmp(&y.1));
            let mut closest: Option<(usize, f64)> = None;
            for i in 1..real.len() {
                let gap = real[i].1 - real[i - 1].1;
                if closest.map_or(true, |(_, g)| gap < g) {
                    closest = Some((i - 1, gap));
                }
            }
            if drop > 2 {
                degenerate = true;
            }
            if let Some((i, _)) = closest {
                let (m1, s1) = real[i];
                let (m2, _) = real[i + 1];
                if active.contains(&m1) && active.contains(&m2) && s1 > REALITY_LOWER {
                    let t_event = 0.5 * (u + v);
                    let (lo_m, hi_m) = ((m1 as i64).min(m2 as i64), (m1 as i64).max(m2 as i64));
                    cell_events.push(EventDraft {
                        t: t_event,
                        bracket: (u.min(v), u.max(v)),
                        pairs: alloc::vec![(-hi_m, -lo_m), (lo_m, hi_m)],
                        kind: ThresholdKind::QhLoss,
                        consumed: alloc::vec![m1, m2],
                    });
                }
            }
            count_here = after;
            lo = v;
        }

        // (b) zero crossings: the constant coefficient changes sign.
        let b_sign = sign_of(c0(b.t));
        if b_sign == 0 {
            pending_zero = Some((b.t, cell));
        } else if b_sign != prev_c0_sign && prev_c0_sign != 0 {
            if let Some((t_node, node_cell)) = pending_zero.take() {
                // The sign flipped across a node that sat exactly on the
                // crossing; attribute the event to that node.
                let reference = samples[node_cell];
                if let Some(draft) =
                    zero_cross_event(model, t_node, reference.t, (t_node, t_node), reference, &active)?
                {
                    cell_events.push(draft);
                }
            } else {
                let want = prev_c0_sign;
                let (u, v) = bisect_on(|t| Ok(sign_of(c0(t)) == want), a.t, b.t)?;
                let t_event = 0.5 * (u + v);
                if let Some(draft) =
                    zero_cross_event(model, t_event, u, (u.min(v), u.max(v)), a, &active)?
                {
                    cell_events.push(draft);
                }
            }
        } else {
            pending_zero = None; // tangency or steady sign
        }
        if b_sign != 0 {
            prev_c0_sign = b_sign;
        }

        // Order events chronologically along the walk direction.
        cell_events.sort_by(|x, y| {
            if forward {
                x.t.total_cmp(&y.t)
            } else {
                y.t.total_cmp(&x.t)
            }
        });
        for e in &cell_events {
            for m in &e.consumed {
                active.remove(m);
            }
        }
        drafts.extend(cell_events);

        // Anything that left the real-active set without a recorded event
        // could not be separated at this resolution.
        for (m, state) in label_states(b) {
            if active.contains(&m) && !matches!(state, LabelState::Active(_)) {
                degenerate = true;
                active.remove(&m);
                drafts.push(EventDraft {
                    t: 0.5 * (a.t + b.t),
                    bracket: (a.t.min(b.t), a.t.max(b.t)),
                    pairs: alloc::vec![(-(m as i64), m as i64)],
                    kind: ThresholdKind::ZeroCrossing,
                    consumed: alloc::vec![m],
                });
            }
        }
    }

    // Arrivals at s = 0 on the final sample (the range may end exactly at
    // a confluence point).
    let last = *samples.last().expect("nonempty");
    let q_end = char_poly(model, t_end);
    let coeff_scale = q_end
        .coeffs()
        .iter()
        .fold(1.0f64, |m, &c| m.max(Float::abs(c)));
    let arrival_tol = 1e-8 * coeff_scale;
    let mut arrivals = 0usize;
    for (m, state) in label_states(last) {
        if let LabelState::Active(s) = state {
            if active.contains(&m) && Float::abs(s) <= arrival_tol {
                active.remove(&m);
                arrivals += 1;
                drafts.push(EventDraft {
                    t: t_end,
                    bracket: (t_end, t_end),
                    pairs: alloc::vec![(-(m as i64), m as i64)],
                    kind: ThresholdKind::ZeroCrossing,
                    consumed: alloc::vec![m],
                });
            }
        }
    }
    if arrivals > 1 {
        degenerate = true;
    }

    // Distinct events collapsing inside one refined bracket.
    for i in 1..drafts.len() {
        if Float::abs(drafts[i].t - drafts[i - 1].t) <= BRACKET_WIDTH {
            degenerate = true;
        }
    }

    let mut events = Vec::new();
    let mut pairs = Vec::new();
    for d in &drafts {
        for &p in &d.pairs {
            events.push(MergerEvent {
                t: d.t,
                bracket: d.bracket,
                pair: p,
                kind: d.kind,
            });
            pairs.push(p);
        }
    }
    let consumed: usize = 2 * pairs.len();
    let complete = consumed == 2 * j && active.is_empty();
    Ok(Classification {
        pattern: MergerPattern::new(pairs, complete, degenerate),
        events,
    })
}

/// Builds the `[-m, m]` draft for a zero crossing at `t`, attributing it
/// to the active root nearest `s = 0` at `probe` (the pre-crossing side of
/// the refined bracket).
fn zero_cross_event(
    model: &ChainModel,
    t: f64,
    probe: f64,
    bracket: (f64, f64),
    reference: &SpectrumSample,
    active: &BTreeSet<u32>,
) -> Result<Option<EventDraft>, SpectralError> {
    let (roots, labels) = roots_with_labels(model, probe, reference)?;
    let mut best: Option<(u32, f64)> = None;
    for (s, &m) in roots.iter().zip(&labels) {
        if !active.contains(&m) {
            continue;
        }
        if Float::abs(s.im) > REAL_TOL * (1.0 + s.norm()) {
            continue;
        }
        let dist = Float::abs(s.re);
        if best.map_or(true, |(_, d)| dist < d) {
            best = Some((m, dist));
        }
    }
    let scale = char_poly(model, probe)
        .coeffs()
        .iter()
        .fold(1.0f64, |mx, &c| mx.max(Float::abs(c)));
    Ok(best.and_then(|(m, dist)| {
        if dist > 1e-6 * scale {
            return None; // the flip came from an already-consumed root
        }
        Some(EventDraft {
            t,
            bracket,
            pairs: alloc::vec![(-(m as i64), m as i64)],
            kind: ThresholdKind::ZeroCrossing,
            consumed: alloc::vec![m],
        })
    }))
}
