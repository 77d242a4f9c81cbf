//! Cross-module checks: merger classifications of the six-state family
//! feed the pattern validator, and every threshold they expose matches the
//! bisection reports.

use phchain_core::{
    classify_mergers, qh_threshold, validate_pattern, xi_root, ChainModel, ThresholdKind,
};

fn model(j: usize, g: &[f64]) -> ChainModel {
    ChainModel::new(j, g.to_vec()).unwrap()
}

#[test]
fn dominant_central_weakening_merges_outer_triples_first() {
    // G = [1, 5, 3]: the first complexification pairs up the external
    // triples, at the same t the reality bisection reports.
    let m = model(3, &[1.0, 5.0, 3.0]);
    let c = classify_mergers(&m, 0.7, 0.05, 4000).unwrap();
    assert_eq!(c.pattern.shorthand(), "{[-5,-3],[-1,1],[3,5]}");
    assert!(c.pattern.complete && !c.pattern.degenerate);
    assert!(validate_pattern(&c.pattern, 3));

    assert_eq!(c.events[0].pair, (-5, -3));
    assert_eq!(c.events[0].kind, ThresholdKind::QhLoss);
    let qh = qh_threshold(&m, 0.7, 0.4).unwrap();
    assert!((c.events[0].t - qh.t).abs() < 1e-9);
    assert!((qh.t - 0.539764657).abs() < 1e-7);
}

#[test]
fn dominant_midbond_weakening_merges_central_pair_first() {
    // G = [1, 2, 1]: central-pair-attraction dominance; quasi-Hermiticity
    // is lost through the E = 0 crossing.
    let m = model(3, &[1.0, 2.0, 1.0]);
    let c = classify_mergers(&m, 0.7, 0.05, 4000).unwrap();
    assert_eq!(c.pattern.shorthand(), "{[-5,-3],[-1,1],[3,5]}");
    assert!(c.pattern.complete && !c.pattern.degenerate);
    assert!(validate_pattern(&c.pattern, 3));

    assert_eq!(c.events[0].pair, (-1, 1));
    assert_eq!(c.events[0].kind, ThresholdKind::ZeroCrossing);
    assert!((c.events[0].t - 0.5157267).abs() < 1e-6);
}

#[test]
fn dominant_outer_weakening_complexifies_inner_quadruplet() {
    // G = [2, 1, 1]: the outermost levels stay out of the collapse; the
    // inner quadruplet goes along the two-pair pattern. The outer coupling
    // switches off at exactly t = 1/2.
    let m = model(3, &[2.0, 1.0, 1.0]);
    let outer = xi_root(&m, 1, 3.0).unwrap();
    assert!((outer.t - 0.5).abs() < 1e-10);

    let c = classify_mergers(&m, 0.8, 0.05, 4000).unwrap();
    assert_eq!(c.pattern.shorthand(), "{[-3,-1],[1,3]}");
    assert!(!c.pattern.complete);
    assert!(!c.pattern.degenerate);
    assert!(validate_pattern(&c.pattern, 3));
}

#[test]
fn classifications_validate_for_four_state_family() {
    for (g, range) in [
        (vec![1.0, 2.0], (0.6, 0.05)),
        (vec![1.5, 1.0], (0.5, 0.05)),
        (vec![5.0, 1.0], (0.9, 0.05)),
    ] {
        let m = model(2, &g);
        let c = classify_mergers(&m, range.0, range.1, 4000).unwrap();
        assert!(
            validate_pattern(&c.pattern, 2),
            "invalid pattern {} for G = {g:?}",
            c.pattern
        );
    }
}

#[test]
fn random_classifications_emit_valid_patterns() {
    // Random positive-coefficient models, started in the Hermitian regime
    // (above all switch-off points) and walked down to near zero: every
    // emitted pattern must validate, whatever its completion state.
    let mut seed = 0x00c1_a55fu64;
    let mut next = move || {
        seed = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (seed >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut complete_seen = 0usize;
    for trial in 0..60 {
        let j = 1 + trial % 6;
        let g: Vec<f64> = (0..j).map(|_| 0.3 + 3.7 * next()).collect();
        let m = ChainModel::new(j, g.clone()).unwrap();
        let t_top = (1..=j)
            .map(|n| xi_root(&m, n, 8.0).unwrap().t)
            .fold(0.0f64, f64::max);
        let c = classify_mergers(&m, t_top * 1.2 + 0.05, 0.01, 2000).unwrap();
        assert!(
            validate_pattern(&c.pattern, j),
            "invalid pattern {} for J={j}, G={g:?}",
            c.pattern
        );
        if c.pattern.complete && !c.pattern.degenerate {
            complete_seen += 1;
        }
    }
    assert!(complete_seen > 0, "stress never produced a complete pattern");
}

#[test]
fn threshold_hierarchy_inverts_with_outer_weakening() {
    // At G = [1.5, 1] the central pair complexifies well below the outer
    // switch-off point; at G = [5, 1] the order inverts and the E = 0
    // crossing sits above it.
    let weak = model(2, &[1.5, 1.0]);
    let sph = xi_root(&weak, 1, 3.0).unwrap().t;
    let qh = qh_threshold(&weak, 0.5, 0.1).unwrap().t;
    assert!((sph - 0.5485837704).abs() < 1e-8);
    assert!(qh < sph);

    let strong = model(2, &[5.0, 1.0]);
    let sph = xi_root(&strong, 1, 3.0).unwrap().t;
    let qh = qh_threshold(&strong, 0.9, 0.3).unwrap().t;
    assert!((sph - 0.3582575695).abs() < 1e-8);
    assert!(qh > sph);
}

#[test]
fn classification_works_in_both_range_orientations() {
    // Negative coefficient: xi = -t, so the single root crosses s = 0 at
    // t = 0 walking rightwards as well.
    let m = model(1, &[-1.0]);
    let c = classify_mergers(&m, -0.5, 0.5, 4000).unwrap();
    assert_eq!(c.pattern.shorthand(), "{[-1,1]}");
    assert!(c.events[0].t.abs() <= 1e-10);
}
