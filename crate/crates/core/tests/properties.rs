use proptest::prelude::*;

use strictstable::domain::in_domain;
use strictstable::pushforward::{preimage, pushforward_law};
use strictstable::representability::positive_combination_exists;
use strictstable::shotnoise::{sample_series_with_terms, JumpLaw, ShotNoiseSpec, Truncation};
use strictstable::stat::{ecf, ks_two_sample, Grid};
use strictstable::{
    cf_infdiv, cf_stable, convert_centering, polar_decompose, Atom, AtomicMeasure, Centering,
    SphericalMeasure, StableLaw, Triplet, UnitVector,
};

fn point(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0..3.0f64, dim)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-4)
}

fn atomic(dim: usize) -> impl Strategy<Value = AtomicMeasure> {
    prop::collection::vec((point(dim), 0.01..5.0f64), 1..6).prop_map(move |atoms| {
        AtomicMeasure::new(
            dim,
            atoms.into_iter().map(|(p, m)| Atom::new(p, m)).collect(),
        )
        .unwrap()
    })
}

fn flavor() -> impl Strategy<Value = Centering> {
    prop_oneof![
        Just(Centering::Raw),
        Just(Centering::Drift),
        Just(Centering::Mean)
    ]
}

fn triplet() -> impl Strategy<Value = Triplet> {
    (1usize..=3)
        .prop_flat_map(|d| (atomic(d), prop::collection::vec(-2.0..2.0f64, d), flavor()))
        .prop_map(|(nu, g, f)| Triplet::atomic(nu, g, f).unwrap())
}

fn spherical(dim: usize) -> impl Strategy<Value = SphericalMeasure> {
    prop::collection::vec((point(dim), 0.05..4.0f64), 1..5).prop_map(move |atoms| {
        let mut out: Vec<(UnitVector, f64)> = Vec::new();
        for (p, w) in atoms {
            let xi = UnitVector::normalize(&p).unwrap();
            match out.iter_mut().find(|(y, _)| {
                y.coords()
                    .iter()
                    .zip(xi.coords())
                    .all(|(a, b)| (a - b).abs() < 1e-9)
            }) {
                Some(e) => e.1 += w,
                None => out.push((xi, w)),
            }
        }
        SphericalMeasure::new(dim, out).unwrap()
    })
}

fn alpha_not_one() -> impl Strategy<Value = f64> {
    prop_oneof![0.05..0.95f64, 1.05..1.95f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn centerings_describe_one_law(t in triplet(), z in prop::collection::vec(-2.0..2.0f64, 3)) {
        let z = &z[..t.dim()];
        let base = cf_infdiv(&t, z).unwrap();
        for target in [Centering::Raw, Centering::Drift, Centering::Mean] {
            let other = convert_centering(&t, target).unwrap();
            let v = cf_infdiv(&other, z).unwrap();
            prop_assert!((v - base).norm() <= 1e-11, "{target:?}: {v} vs {base}");
        }
    }

    #[test]
    fn characteristic_functions_are_bounded(t in triplet(), z in prop::collection::vec(-5.0..5.0f64, 3)) {
        let z = &z[..t.dim()];
        prop_assert!(cf_infdiv(&t, z).unwrap().norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn stable_cf_bounded_and_one_at_origin(
        alpha in 0.05..1.99f64,
        s in spherical(2),
        tau in prop::collection::vec(-2.0..2.0f64, 2),
        z in prop::collection::vec(-5.0..5.0f64, 2),
    ) {
        let law = StableLaw::new(alpha, s, tau).unwrap();
        prop_assert!(cf_stable(&law, &z).unwrap().norm() <= 1.0 + 1e-12);
        let one = cf_stable(&law, &[0.0, 0.0]).unwrap();
        prop_assert!((one.re - 1.0).abs() < 1e-15 && one.im.abs() < 1e-15);
    }

    #[test]
    fn polar_round_trip(nu in (1usize..=3).prop_flat_map(atomic)) {
        let back = polar_decompose(&nu).reconstruct().unwrap();
        prop_assert_eq!(back.atoms().len(), nu.atoms().len());
        for a in nu.atoms() {
            let found = back.atoms().iter().any(|b| {
                (b.mass - a.mass).abs() <= 1e-14 * a.mass
                    && b.point.iter().zip(&a.point).all(|(x, y)| (x - y).abs() <= 1e-14 * (1.0 + y.abs()))
            });
            prop_assert!(found, "atom {:?} lost", a);
        }
    }

    #[test]
    fn preimage_round_trip(alpha in alpha_not_one(), s in (1usize..=3).prop_flat_map(spherical)) {
        let law = StableLaw::new(alpha, s.clone(), vec![0.0; s.dim()]).unwrap();
        let t = preimage(alpha, &law).unwrap();
        prop_assert!(in_domain(alpha, &t).unwrap().member);
        let back = pushforward_law(alpha, &t).unwrap();
        for (xi, w) in law.spectral().atoms() {
            prop_assert!((back.spectral().weight_at(xi.coords()) - w).abs() <= 1e-10 * (1.0 + w));
        }
    }

    #[test]
    fn scaling_equivariance(alpha in alpha_not_one(), nu in (1usize..=3).prop_flat_map(atomic), c in 0.1..10.0f64, b in 0.2..5.0f64) {
        let flavor = if alpha < 1.0 { Centering::Drift } else { Centering::Mean };
        let dim = nu.dim();
        let base = pushforward_law(alpha, &Triplet::atomic(nu.clone(), vec![0.0; dim], flavor).unwrap()).unwrap();
        // masses × c scale λ₁ by c; points × b scale it by b^α
        let massed = Triplet::atomic(nu.scaled(c).unwrap(), vec![0.0; dim], flavor).unwrap();
        let moved = AtomicMeasure::new(
            dim,
            nu.atoms().iter().map(|a| Atom::new(a.point.iter().map(|x| b * x).collect(), a.mass)).collect(),
        ).unwrap();
        let moved = Triplet::atomic(moved, vec![0.0; dim], flavor).unwrap();
        let l1 = pushforward_law(alpha, &massed).unwrap();
        let l2 = pushforward_law(alpha, &moved).unwrap();
        for (xi, w) in base.spectral().atoms() {
            prop_assert!((l1.spectral().weight_at(xi.coords()) - c * w).abs() <= 1e-10 * c * w);
            prop_assert!((l2.spectral().weight_at(xi.coords()) - b.powf(alpha) * w).abs() <= 1e-10 * b.powf(alpha) * w);
        }
    }

    #[test]
    fn domain_membership_survives_mass_scaling(alpha in 0.1..1.9f64, t in triplet(), c in 0.01..100.0f64) {
        let alpha = if (alpha - 1.0).abs() < 0.05 { 1.0 } else { alpha };
        let nu = t.atomic_measure().unwrap();
        // zero the centering that the gate inspects so both cases occur
        let target = if alpha > 1.0 { Centering::Mean } else { Centering::Drift };
        let t0 = Triplet::atomic(nu.clone(), vec![0.0; nu.dim()], target).unwrap();
        for t in [&t, &t0] {
            let before = in_domain(alpha, t).unwrap().member;
            let g = convert_centering(t, target).unwrap();
            let scaled = Triplet::atomic(nu.scaled(c).unwrap(), g.gamma().iter().map(|x| c * x).collect(), target).unwrap();
            prop_assert_eq!(in_domain(alpha, &scaled).unwrap().member, before);
        }
    }

    #[test]
    fn lp_verdict_is_rotation_invariant(angles in prop::collection::vec(0.0..360.0f64, 1..6), shift in 0.0..360.0f64) {
        let dirs: Vec<UnitVector> = angles.iter().map(|a| UnitVector::planar(a.to_radians())).collect();
        let rotated: Vec<UnitVector> = angles.iter().map(|a| UnitVector::planar((a + shift).to_radians())).collect();
        let w = vec![1.0; dirs.len()];
        let a = positive_combination_exists(&dirs, &w);
        let b = positive_combination_exists(&rotated, &w);
        // verdicts near the boundary may legitimately flip; compare clear cases
        if a.min_component.abs() > 1e-6 && b.min_component.abs() > 1e-6 {
            prop_assert_eq!(a.exists, b.exists);
        }
        if a.exists {
            prop_assert!(a.residual <= 1e-10 && a.p.iter().all(|&p| p > 0.0));
        }
    }

    #[test]
    fn ks_and_ecf_basics(xs in prop::collection::vec(-100.0..100.0f64, 1..200), seed in any::<u64>()) {
        prop_assert_eq!(ks_two_sample(&xs, &xs), 0.0);
        let batch = strictstable::shotnoise::SampleBatch::from_rows(1, xs.iter().map(|&x| vec![x]).collect(), 0);
        let mut shuffled = xs.clone();
        let k = (seed as usize) % xs.len();
        shuffled.rotate_left(k);
        shuffled.reverse();
        let other = strictstable::shotnoise::SampleBatch::from_rows(1, shuffled.iter().map(|&x| vec![x]).collect(), 0);
        let grid = Grid::new(1, 11, 3.0).unwrap();
        let a = ecf(&batch, &grid);
        let b = ecf(&other, &grid);
        prop_assert_eq!(a[5].re, 1.0);
        prop_assert_eq!(a[5].im, 0.0);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>(), alpha in 0.3..1.7f64) {
        let law = JumpLaw::uniform(1, vec![vec![1.0], vec![-2.0], vec![1.0]]).unwrap();
        let spec = ShotNoiseSpec::new(alpha, 1.5, law, Truncation::default(), seed).unwrap();
        let a = sample_series_with_terms(&spec, 8, 200);
        let b = sample_series_with_terms(&spec, 8, 200);
        prop_assert_eq!(&a, &b);
        let c = sample_series_with_terms(&spec.with_seed(seed ^ 1), 8, 200);
        prop_assert!(a.row(0) != c.row(0));
    }
}
