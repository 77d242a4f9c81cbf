//! Merger-pattern combinatorics: the coupled multiplicity recurrences, a
//! brute-force matching oracle, and the binomial-difference diagnostics.
//!
//! A complete merger pattern of the `N = 2J` level labels
//! `-(N-1), -(N-3), ..., N-1` is a perfect matching that is mirror
//! symmetric (closed under `(a, b) -> (-b, -a)`) and non-crossing (no two
//! arcs interleave). The multiplicities `P^(N)` obey two mutually coupled
//! recurrences, seeded with `P^(0) = P^(2) = 1`:
//!
//! ```text
//! P^(4K)   - P^(4K-2) = sum_{i=0}^{K-1} P^(2K-2-2i) P^(4i)
//! P^(4L+2) - P^(4L)   = sum_{i=0}^{L-1} P^(2L-2-2i) P^(4i+2)
//! ```
//!
//! Both recurrence factors are themselves `P` values, so the class being
//! counted is *hereditarily* symmetric: the sub-matching enclosed by every
//! arc is mirror symmetric about that arc's own center. Plain global mirror
//! symmetry is a strictly weaker condition: its count (exposed as
//! [`mirror_symmetric_count`]) equals the central binomial coefficients
//! `C(2K, K)` / `C(2K+1, K)` and agrees with `P^(N)` only up to `N = 14`.
//! The difference rows `R` and `R - S` track exactly that deviation.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum PatternsError {
    #[error("pattern count overflowed 128-bit integers at N = {n}")]
    Overflow { n: usize },
    #[error("brute-force enumeration is limited to J <= {max}, got {j}")]
    TooLarge { j: usize, max: usize },
}

/// Exact rational with reduced terms, for the binomial-difference rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    num: i128,
    den: i128,
}

impl Ratio {
    pub fn new(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i128;
        let (mut num, mut den) = (num / g, den / g);
        if den < 0 {
            num = -num;
            den = -den;
        }
        Ratio { num, den }
    }

    pub fn from_int(value: i128) -> Self {
        Ratio { num: value, den: 1 }
    }

    pub fn abs(self) -> Self {
        Ratio {
            num: self.num.abs(),
            den: self.den,
        }
    }

    pub fn numerator(self) -> i128 {
        self.num
    }

    pub fn denominator(self) -> i128 {
        self.den
    }

    pub fn is_integer(self) -> bool {
        self.den == 1
    }
}

impl core::ops::Sub for Ratio {
    type Output = Ratio;

    fn sub(self, other: Ratio) -> Ratio {
        Ratio::new(
            self.num * other.den - other.num * self.den,
            self.den * other.den,
        )
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// A merger pattern: ordered label pairs plus completeness/degeneracy flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergerPattern {
    /// Pairs `(low, high)` of odd labels, sorted ascending by low label.
    pub pairs: Vec<(i64, i64)>,
    /// Whether the pairs form a perfect matching of all `2J` labels.
    pub complete: bool,
    /// Whether events could not be separated (transitional multiple mergers).
    pub degenerate: bool,
}

impl MergerPattern {
    pub fn new(mut pairs: Vec<(i64, i64)>, complete: bool, degenerate: bool) -> Self {
        for p in &mut pairs {
            if p.0 > p.1 {
                *p = (p.1, p.0);
            }
        }
        pairs.sort_unstable();
        MergerPattern {
            pairs,
            complete,
            degenerate,
        }
    }

    /// Shorthand form, e.g. `{[-3,-1],[1,3]}`.
    pub fn shorthand(&self) -> String {
        alloc::format!("{self}")
    }
}

impl fmt::Display for MergerPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (a, b)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[{a},{b}]")?;
        }
        write!(f, "}}")
    }
}

/// Pattern multiplicities and the binomial-difference rows for
/// `K = 0 ... maxK`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternCountTable {
    pub max_k: usize,
    /// `P^(4K)` row.
    pub p4k: Vec<u128>,
    /// `P^(4K+2)` row.
    pub p4k_plus2: Vec<u128>,
    /// Signed `R^(K) = (P^(4K) - C(2K, K)) / 2`.
    pub r: Vec<Ratio>,
    /// Signed `R^(K) - S^(K)` with `S^(K) = (P^(4K+2) - C(2K+1, K)) / 4`.
    pub r_minus_s: Vec<Ratio>,
}

/// Signed and absolute binomial-difference rows of a count table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialDeltas {
    pub r: Vec<Ratio>,
    pub s: Vec<Ratio>,
    pub r_minus_s: Vec<Ratio>,
}

impl BinomialDeltas {
    pub fn r_abs(&self) -> Vec<Ratio> {
        self.r.iter().map(|x| x.abs()).collect()
    }

    pub fn r_minus_s_abs(&self) -> Vec<Ratio> {
        self.r_minus_s.iter().map(|x| x.abs()).collect()
    }
}

/// Solves the coupled recurrences with exact integer arithmetic. Overflow
/// is reported, never wrapped.
pub fn enumerate_counts(max_k: usize) -> Result<PatternCountTable, PatternsError> {
    let top = 2 * max_k + 1; // need P^(2m) up to m = 2K+1
    let mut p: Vec<u128> = Vec::with_capacity(top + 1);
    p.push(1); // P^(0)
    p.push(1); // P^(2)
    for m in 2..=top {
        let n = 2 * m;
        let overflow = PatternsError::Overflow { n };
        let mut q: u128 = 0;
        if m % 2 == 0 {
            let k = m / 2;
            for i in 0..k {
                let term = p[k - 1 - i].checked_mul(p[2 * i]).ok_or(overflow)?;
                q = q.checked_add(term).ok_or(overflow)?;
            }
        } else {
            let l = (m - 1) / 2;
            for i in 0..l {
                let term = p[l - 1 - i].checked_mul(p[2 * i + 1]).ok_or(overflow)?;
                q = q.checked_add(term).ok_or(overflow)?;
            }
        }
        p.push(p[m - 1].checked_add(q).ok_or(overflow)?);
    }

    let p4k: Vec<u128> = (0..=max_k).map(|k| p[2 * k]).collect();
    let p4k_plus2: Vec<u128> = (0..=max_k).map(|k| p[2 * k + 1]).collect();
    let mut table = PatternCountTable {
        max_k,
        p4k,
        p4k_plus2,
        r: Vec::new(),
        r_minus_s: Vec::new(),
    };
    let deltas = binomial_deltas(&table)?;
    table.r = deltas.r.clone();
    table.r_minus_s = deltas.r_minus_s.clone();
    Ok(table)
}

/// Literal signed values of the difference formulas
/// `R^(K) = (P^(4K) - C(2K, K)) / 2` and
/// `S^(K) = (P^(4K+2) - C(2K+1, K)) / 4`.
pub fn binomial_deltas(table: &PatternCountTable) -> Result<BinomialDeltas, PatternsError> {
    let mut r = Vec::with_capacity(table.max_k + 1);
    let mut s = Vec::with_capacity(table.max_k + 1);
    let mut r_minus_s = Vec::with_capacity(table.max_k + 1);
    for k in 0..=table.max_k {
        let overflow = PatternsError::Overflow { n: 4 * k + 2 };
        let b_r = binomial(2 * k as u64, k as u64).ok_or(overflow)?;
        let b_s = binomial(2 * k as u64 + 1, k as u64).ok_or(overflow)?;
        let p_r = i128::try_from(table.p4k[k]).map_err(|_| overflow)?;
        let p_s = i128::try_from(table.p4k_plus2[k]).map_err(|_| overflow)?;
        let b_r = i128::try_from(b_r).map_err(|_| overflow)?;
        let b_s = i128::try_from(b_s).map_err(|_| overflow)?;
        let rk = Ratio::new(p_r - b_r, 2);
        let sk = Ratio::new(p_s - b_s, 4);
        r.push(rk);
        s.push(sk);
        r_minus_s.push(rk - sk);
    }
    Ok(BinomialDeltas { r, s, r_minus_s })
}

fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
    }
    Some(acc)
}

/// All non-crossing perfect matchings of the given points, by recursive
/// first-point pairing.
fn non_crossing_matchings(points: &[i64]) -> Vec<Vec<(i64, i64)>> {
    if points.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in (1..points.len()).step_by(2) {
        let inner = non_crossing_matchings(&points[1..i]);
        let outer = non_crossing_matchings(&points[i + 1..]);
        for mi in &inner {
            for mo in &outer {
                let mut m = Vec::with_capacity(points.len() / 2);
                m.push((points[0], points[i]));
                m.extend_from_slice(mi);
                m.extend_from_slice(mo);
                out.push(m);
            }
        }
    }
    out
}

/// Closure of `pairs` under reflection `x -> center2 - x` (with `center2`
/// twice the reflection center); pairs are kept `(low, high)`.
fn reflection_closed(pairs: &[(i64, i64)], center2: i64) -> bool {
    pairs
        .iter()
        .all(|&(a, b)| pairs.contains(&(center2 - b, center2 - a)))
}

fn is_globally_symmetric(pairs: &[(i64, i64)]) -> bool {
    reflection_closed(pairs, 0)
}

/// Global mirror symmetry plus, for every arc, mirror symmetry of the
/// sub-matching it encloses about the arc's own center. This is the class
/// the multiplicity recurrences count.
fn is_hereditarily_symmetric(pairs: &[(i64, i64)]) -> bool {
    if !is_globally_symmetric(pairs) {
        return false;
    }
    for &(a, b) in pairs {
        let interior: Vec<(i64, i64)> = pairs
            .iter()
            .copied()
            .filter(|&(c, d)| a < c && d < b)
            .collect();
        if !reflection_closed(&interior, a + b) {
            return false;
        }
    }
    true
}

const BRUTE_FORCE_MAX_J: usize = 12;

fn filtered_count(j: usize, keep: impl Fn(&[(i64, i64)]) -> bool) -> Result<u128, PatternsError> {
    if j > BRUTE_FORCE_MAX_J {
        return Err(PatternsError::TooLarge {
            j,
            max: BRUTE_FORCE_MAX_J,
        });
    }
    let n = 2 * j as i64;
    let labels: Vec<i64> = (0..n).map(|k| 2 * k - n + 1).collect();
    let count = non_crossing_matchings(&labels)
        .iter()
        .map(|m| {
            let mut pairs: Vec<(i64, i64)> =
                m.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
            pairs.sort_unstable();
            pairs
        })
        .filter(|pairs| keep(pairs))
        .count();
    Ok(count as u128)
}

/// Independent enumeration oracle for `P^(2J)`: filters the non-crossing
/// perfect matchings of the `2J` labels down to the hereditarily symmetric
/// class and counts them. `J = 0` counts the empty matching, matching the
/// recurrence seed.
pub fn brute_force_count(j: usize) -> Result<u128, PatternsError> {
    filtered_count(j, is_hereditarily_symmetric)
}

/// Count of non-crossing matchings that are mirror symmetric as a whole
/// (no hereditary requirement). Coincides with `P^(2J)` only for
/// `J <= 7`; beyond that it follows the central binomial coefficients the
/// difference rows are measured against.
pub fn mirror_symmetric_count(j: usize) -> Result<u128, PatternsError> {
    filtered_count(j, is_globally_symmetric)
}

/// Checks a pattern emitted by the spectral classifier: odd in-range
/// labels, each used once, mirror-closed, non-crossing, and (when marked
/// complete) a perfect matching of all `2J` labels.
pub fn validate_pattern(pattern: &MergerPattern, j: usize) -> bool {
    let bound = 2 * j as i64 - 1;
    let mut seen: Vec<i64> = Vec::with_capacity(2 * pattern.pairs.len());
    for &(a, b) in &pattern.pairs {
        if a >= b {
            return false;
        }
        for label in [a, b] {
            if label.rem_euclid(2) != 1 || label.abs() > bound || seen.contains(&label) {
                return false;
            }
            seen.push(label);
        }
    }
    if !is_globally_symmetric(&pattern.pairs) {
        return false;
    }
    // Non-crossing: no a < c < b < d.
    for &(a, b) in &pattern.pairs {
        for &(c, d) in &pattern.pairs {
            if a < c && c < b && b < d {
                return false;
            }
        }
    }
    if pattern.complete && seen.len() != 2 * j {
        return false;
    }
    true
}
