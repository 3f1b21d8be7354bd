//! Randomized structural invariants of the step-function kernel: measure
//! theory of the rearrangement and rank map, majorant laws, quasi-norm
//! axioms across the space catalog, and the exact scaling laws that the
//! closed-form layer promises.

use fsx_core::norms::{norm, NumericSpace, Weight};
use fsx_core::operators::{dilation_norm_power, hardy};
use fsx_core::stepfn::{make_step, StepFunction};
use proptest::prelude::*;

const INF: f64 = f64::INFINITY;

/// Signed piece value: log-uniform magnitude, occasional exact zero.
fn arb_value() -> impl Strategy<Value = f64> {
    prop_oneof![
        4 => (-3.0..3.0_f64, any::<bool>())
            .prop_map(|(e, neg)| if neg { -(10.0_f64.powf(e)) } else { 10.0_f64.powf(e) }),
        1 => Just(0.0),
    ]
}

/// Step function on (0,∞) built from positive break increments.
fn arb_step() -> impl Strategy<Value = StepFunction> {
    proptest::collection::vec((1e-3..4.0_f64, arb_value()), 1..12).prop_map(|incs| {
        let mut acc = 0.0;
        let mut breaks = Vec::with_capacity(incs.len());
        let mut vals = Vec::with_capacity(incs.len());
        for (d, v) in incs {
            acc += d;
            breaks.push(acc);
            vals.push(v);
        }
        make_step(INF, &breaks, &vals).expect("increments give a valid grid")
    })
}

/// Probe levels for a distribution-function comparison: 0 plus every piece
/// magnitude scaled below, at, and above itself.
fn probe_levels(f: &StepFunction) -> Vec<f64> {
    let mut levels = vec![0.0];
    for p in f.pieces() {
        if p.mag > 0.0 {
            levels.extend([0.5 * p.mag, p.mag, 1.5 * p.mag]);
        }
    }
    levels
}

/// Probe points: piece endpoints, midpoints, and a little beyond the support.
fn probe_points(f: &StepFunction) -> Vec<f64> {
    let mut pts = Vec::new();
    for p in f.pieces() {
        pts.push(0.5 * (p.start + p.end));
        pts.push(p.end);
    }
    pts.push(f.support_bound() + 1.0);
    pts
}

proptest! {
    #[test]
    fn rearrangement_preserves_the_distribution_function(f in arb_step()) {
        let fs = f.rearrange();
        for lambda in probe_levels(&f) {
            // breakpoints of f* are the same partial sums `distribution`
            // forms, so the agreement is bit-exact
            prop_assert_eq!(f.distribution(lambda), fs.distribution(lambda));
        }
    }

    #[test]
    fn rearrangement_is_nonincreasing_with_the_same_integral(f in arb_step()) {
        let fs = f.rearrange();
        let mut prev = INF;
        for p in fs.pieces() {
            prop_assert!(p.mag <= prev && !p.neg);
            prev = p.mag;
        }
        let (a, b) = (f.integral_abs(), fs.integral_abs());
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a));
    }

    #[test]
    fn rank_map_transports_the_rearrangement_back(f in arb_step()) {
        let back = f.rank_function().transport(&f.rearrange()).unwrap();
        let diff = back.add(&f.abs().scale(-1.0)).unwrap().integral_abs();
        prop_assert!(
            diff <= 1e-12 * (1.0 + f.integral_abs()),
            "reconstruction drifted by {diff}"
        );
    }

    #[test]
    fn rearrangement_is_two_point_subadditive(
        f in arb_step(),
        g in arb_step(),
        t1 in 1e-3..8.0_f64,
        t2 in 1e-3..8.0_f64,
    ) {
        let lhs = f.add(&g).unwrap().rearrange().abs_at(t1 + t2);
        let rhs = f.rearrange().abs_at(t1) + g.rearrange().abs_at(t2);
        prop_assert!(
            lhs <= rhs * (1.0 + 1e-12) + 1e-300,
            "({lhs}) > ({rhs}) at ({t1}, {t2})"
        );
    }

    #[test]
    fn majorant_dominates_decreases_and_is_idempotent(f in arb_step()) {
        let m = f.tandori_majorant();
        for t in probe_points(&f) {
            prop_assert!(m.abs_at(t) >= f.abs_at(t));
        }
        let mut prev = INF;
        for p in m.pieces() {
            prop_assert!(p.mag <= prev && !p.neg);
            prev = p.mag;
        }
        prop_assert_eq!(m.tandori_majorant(), m);
    }

    #[test]
    fn prefix_average_dominates_decreasing_inputs(f in arb_step()) {
        let fs = f.rearrange();
        prop_assume!(!fs.is_zero());
        let h = hardy(&fs, 1.0).unwrap();
        let mut prev = INF;
        for t in probe_points(&fs) {
            let ht = h.eval(t);
            prop_assert!(ht >= fs.abs_at(t) * (1.0 - 1e-12));
            prop_assert!(ht <= prev * (1.0 + 1e-12), "prefix average increased at {t}");
            prev = ht;
        }
    }

    #[test]
    fn json_round_trip_is_bit_exact(f in arb_step()) {
        let back = StepFunction::from_json(&f.to_json()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn convexification_is_the_power_law_it_claims(f in arb_step()) {
        for space in [
            NumericSpace::lebesgue_power(2.0, 0.2),
            NumericSpace::lorentz(2.0, 1.0),
        ] {
            for r in [0.5, 2.0] {
                let lhs = norm(&space.convexify(r).unwrap(), &f).unwrap();
                let rhs = norm(&space, &f.abs_pow(r)).unwrap().powf(1.0 / r);
                prop_assert!(
                    (lhs - rhs).abs() <= 1e-12 * (1.0 + rhs),
                    "{space}^({r}): {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn dilation_scales_power_norms_exactly(f in arb_step()) {
        for (p, alpha) in [(1.0, 0.0), (2.0, 0.25), (4.0, -0.1), (INF, 0.0)] {
            let space = NumericSpace::lebesgue_power(p, alpha);
            let base = norm(&space, &f).unwrap();
            for s in [0.5, 2.0, 3.0] {
                let lhs = norm(&space, &f.dilate(s).unwrap()).unwrap();
                let rhs = dilation_norm_power(s, p, alpha) * base;
                prop_assert!(
                    (lhs - rhs).abs() <= 1e-12 * (1.0 + rhs),
                    "D_{s} on L^{p}(t^{alpha}): {lhs} vs {rhs}"
                );
            }
        }
    }
}

/// Catalog sample used by the quasi-norm axiom run: a mix of weighted,
/// rearrangement-invariant, and transform-defined families.
fn catalog() -> Vec<NumericSpace> {
    vec![
        NumericSpace::lebesgue(1.0),
        NumericSpace::lebesgue(2.0),
        NumericSpace::lebesgue(INF),
        NumericSpace::lebesgue_power(2.0, 0.25),
        NumericSpace::lorentz(2.0, 1.0),
        NumericSpace::lorentz(2.0, INF),
        NumericSpace::Lambda { p: 2.0, weight: Weight::power(0.25) },
        NumericSpace::Marcinkiewicz { weight: Weight::power(0.5) },
        NumericSpace::cesaro(NumericSpace::lebesgue(2.0)),
        NumericSpace::tandori(NumericSpace::lebesgue(1.0)),
    ]
}

proptest! {
    // the Cesàro entry evaluates a closed form per case, so keep the case
    // count moderate
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quasi_norm_axioms_across_the_catalog(
        f in arb_step(),
        h in arb_step(),
        c in prop_oneof![Just(-2.5), Just(0.5), Just(3.0)],
    ) {
        let g = f.abs().add(&h.abs()).unwrap();
        for space in catalog() {
            let nf = norm(&space, &f).unwrap();
            // absolute homogeneity
            let scaled = norm(&space, &f.scale(c)).unwrap();
            prop_assert!(
                (scaled - c.abs() * nf).abs() <= 1e-9 * (1.0 + c.abs() * nf),
                "{space}: |c| homogeneity"
            );
            // ideal property: |f| <= g pointwise forces ||f|| <= ||g||
            let ng = norm(&space, &g).unwrap();
            prop_assert!(nf <= ng * (1.0 + 1e-6), "{space}: ideal property {nf} > {ng}");
        }
        // rearrangement invariance where the family promises it
        for space in [
            NumericSpace::lebesgue(1.0),
            NumericSpace::lebesgue(2.0),
            NumericSpace::lebesgue(INF),
        ] {
            let (a, b) = (norm(&space, &f).unwrap(), norm(&space, &f.rearrange()).unwrap());
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a), "{space}: not r.i.");
        }
    }
}
