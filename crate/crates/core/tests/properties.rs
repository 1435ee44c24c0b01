use std::f64::consts::TAU;

use num_complex::Complex64;
use oscillometer::approx::{dilate, fejer_taylor, poisson_circle, poisson_torus2};
use oscillometer::family::seminorm_sup;
use oscillometer::funcrep::{FunctionData, PeriodicSamples, TaylorFunction, TorusSamples};
use oscillometer::spaces::{build_family, Resolution, SpaceDescriptor};
use proptest::prelude::*;

const N: usize = 512;

/// Every grid rotation of every arc is in the family, so the sup is
/// rotation invariant and the Poisson average cannot raise it.
fn rotation_invariant_bmo() -> SpaceDescriptor {
    SpaceDescriptor::bmo(1.0).with_resolution(Resolution {
        midpoints: Some(N),
        lengths: Some(6),
        ..Resolution::default()
    })
}

fn trig(coeffs: &[(f64, f64)], jump: bool) -> PeriodicSamples {
    PeriodicSamples::from_fn(N, |t| {
        let smooth: Complex64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| Complex64::new(a, b) * Complex64::from_polar(1.0, (k as f64 - 3.0) * t))
            .sum();
        smooth + if jump && t < TAU / 3.0 { 1.0 } else { 0.0 }
    })
    .unwrap()
}

fn coeff() -> impl Strategy<Value = (f64, f64)> {
    (-1.0f64..1.0, -1.0f64..1.0)
}

fn taylor() -> impl Strategy<Value = TaylorFunction> {
    prop::collection::vec(coeff(), 1..10).prop_map(|c| {
        let mut coeffs = vec![Complex64::new(0.0, 0.0)];
        coeffs.extend(c.into_iter().map(|(a, b)| Complex64::new(a, b)));
        TaylorFunction::polynomial(coeffs)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn poisson_is_contractive_on_bmo(c in prop::collection::vec(coeff(), 7), jump: bool, r in 0.05f64..0.999) {
        let space = rotation_invariant_bmo();
        let grid = build_family(&space).unwrap();
        let f = trig(&c, jump);
        let g = poisson_circle(&f, r).unwrap();
        let nf = seminorm_sup(&grid, &FunctionData::Periodic(f)).unwrap().value;
        let ng = seminorm_sup(&grid, &FunctionData::Periodic(g)).unwrap().value;
        prop_assert!(ng <= nf * (1.0 + 1e-12) + 1e-14, "{ng} > {nf}");
    }

    #[test]
    fn poisson_preserves_means_and_constants(c in prop::collection::vec(coeff(), 7), r in 0.0f64..0.999, k in -5.0f64..5.0) {
        let f = trig(&c, true);
        let g = poisson_circle(&f, r).unwrap();
        prop_assert!((f.mean() - g.mean()).norm() < 1e-12);
        let shifted = PeriodicSamples::new(f.values().iter().map(|v| v + k).collect()).unwrap();
        let h = poisson_circle(&shifted, r).unwrap();
        for (a, b) in h.values().iter().zip(g.values()) {
            prop_assert!((a - b - k).norm() < 1e-10);
        }
    }

    #[test]
    fn bmo_ignores_constants(c in prop::collection::vec(coeff(), 7), k in -5.0f64..5.0) {
        let grid = build_family(&rotation_invariant_bmo()).unwrap();
        let f = trig(&c, true);
        let shifted = PeriodicSamples::new(f.values().iter().map(|v| v + k).collect()).unwrap();
        let a = seminorm_sup(&grid, &FunctionData::Periodic(f)).unwrap().value;
        let b = seminorm_sup(&grid, &FunctionData::Periodic(shifted)).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn dilation_damps_coefficients(f in taylor(), r in 0.0f64..1.0) {
        let g = dilate(&f, r).unwrap();
        for (k, (a, b)) in f.coeffs().iter().zip(g.coeffs()).enumerate() {
            prop_assert!((a * r.powi(k as i32) - b).norm() <= 1e-15 * a.norm().max(1.0));
        }
    }

    #[test]
    fn fejer_coefficients_follow_the_cesaro_weights(f in taylor(), n in 1usize..20) {
        let g = fejer_taylor(&f, n).unwrap();
        for (k, a) in f.coeffs().iter().enumerate() {
            let want = if k <= n { a * (1.0 - k as f64 / (n as f64 + 1.0)) } else { Complex64::new(0.0, 0.0) };
            let got = g.coeffs().get(k).copied().unwrap_or_default();
            prop_assert!((want - got).norm() <= 1e-15 * a.norm().max(1.0));
        }
    }

    #[test]
    fn fejer_means_converge_coefficientwise(f in taylor(), k in 0usize..10) {
        let a = f.coeffs().get(k).copied().unwrap_or_default();
        let err = |n| (fejer_taylor(&f, n).unwrap().coeffs().get(k).copied().unwrap_or_default() - a).norm();
        // the error is |a_k| k/(n+1) exactly
        for n in [16, 2048, 4096] {
            let want = a.norm() * k as f64 / (n as f64 + 1.0);
            prop_assert!((err(n) - want).abs() <= 1e-15 * a.norm().max(1.0));
        }
    }

    #[test]
    fn torus_poisson_of_a_tensor_is_a_tensor(c in prop::collection::vec(coeff(), 7), d in prop::collection::vec(coeff(), 7), r in 0.1f64..0.99) {
        let small = |c: &[(f64, f64)]| {
            PeriodicSamples::from_fn(32, |t| {
                c.iter().enumerate().map(|(k, &(a, b))| Complex64::new(a, b) * Complex64::from_polar(1.0, k as f64 * t)).sum()
            }).unwrap()
        };
        let (g, h) = (small(&c), small(&d));
        let lhs = poisson_torus2(&TorusSamples::tensor(&g, &h).unwrap(), r).unwrap();
        let rhs = TorusSamples::tensor(&poisson_circle(&g, r).unwrap(), &poisson_circle(&h, r).unwrap()).unwrap();
        for (a, b) in lhs.values().iter().zip(rhs.values()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }
}
