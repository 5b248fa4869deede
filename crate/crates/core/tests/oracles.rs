//! Cross-module checks against independent brute-force computations.

use std::collections::BTreeSet;

use maxcurves::census::{count_rational, enumerate_points, enumerate_points_exhaustive, CurvePoint};
use maxcurves::covering::Cover;
use maxcurves::curve::{hermitian, normalize, random_record, trace_curve};
use maxcurves::field::{tower, Level};
use maxcurves::orders::dp_orders;
use maxcurves::semigroup::{genus_of, NumericalSemigroup};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn census_matches_exhaustive_scan_on_random_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let std = trace_curve(2).unwrap();
    let f = std.field(Level::Base);
    for _ in 0..10 {
        let model = random_record(&f, &mut rng).apply_curve(&std).unwrap();
        for level in [Level::Base, Level::Quartic] {
            assert_eq!(
                enumerate_points(&model, level).unwrap(),
                enumerate_points_exhaustive(&model, level).unwrap()
            );
        }
    }
}

#[test]
fn isomorphic_models_have_equal_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(78);
    let std = trace_curve(3).unwrap();
    let f = std.field(Level::Base);
    let n = count_rational(&std, Level::Base).unwrap();
    for _ in 0..10 {
        let model = random_record(&f, &mut rng).apply_curve(&std).unwrap();
        assert_eq!(count_rational(&model, Level::Base).unwrap(), n);
        assert_eq!(normalize(&model).unwrap().0, std);
    }
}

/// #X(F_q²) read from the census against the genus of the semigroup
/// generated by the pole orders at infinity.
#[test]
fn genus_from_points_equals_genus_from_poles() {
    for t in 2..=4 {
        for c in [hermitian(t).unwrap(), trace_curve(t).unwrap()] {
            let q = c.q();
            let n = count_rational(&c, Level::Base).unwrap();
            let inf = c.infinity();
            let s = NumericalSemigroup::generated(&[inf.x_pole, inf.y_pole]).unwrap();
            assert_eq!(n, q * q + 1 + 2 * q * genus_of(&s));
        }
    }
}

/// Every affine rational point of X has both preimages rational, so a
/// rational target with an empty rational fiber never occurs.
#[test]
fn no_rational_target_is_inert() {
    for t in [2, 3] {
        let cover = Cover::new(t).unwrap();
        let targets: Vec<_> = enumerate_points(&cover.target, Level::Base)
            .unwrap()
            .into_iter()
            .filter(|p| matches!(p, CurvePoint::Affine { .. }))
            .collect();
        let mut images = BTreeSet::new();
        for p in enumerate_points(&cover.source, Level::Base).unwrap() {
            images.insert(cover.apply(p).unwrap());
        }
        for p in &targets {
            assert_eq!(cover.fiber(*p, Level::Base).unwrap().len(), 2);
            assert!(images.contains(p));
        }
    }
}

#[test]
fn level_two_fibers_split() {
    let cover = Cover::new(2).unwrap();
    let tw = tower(2).unwrap();
    for p in enumerate_points(&cover.target, Level::Base).unwrap() {
        let CurvePoint::Affine { x, y, .. } = p else { continue };
        let lifted = CurvePoint::affine(tw.embed(x), tw.embed(y), Level::Quartic);
        assert_eq!(cover.fiber(lifted, Level::Quartic).unwrap().len(), 2);
        assert_eq!(tw.quartic().absolute_trace(tw.embed(y)), 0);
    }
}

/// Orders do not depend on which tower level a rational point is written in.
#[test]
fn orders_are_level_independent() {
    let c = trace_curve(3).unwrap();
    let tw = c.tower();
    for p in enumerate_points(&c, Level::Base).unwrap().into_iter().take(40) {
        let CurvePoint::Affine { x, y, .. } = p else { continue };
        let lifted = CurvePoint::affine(tw.embed(x), tw.embed(y), Level::Quartic);
        assert_eq!(
            dp_orders(&c, p, 24).unwrap().orders,
            dp_orders(&c, lifted, 24).unwrap().orders
        );
    }
}
