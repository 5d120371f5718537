//! Property tests for the structural invariants: exact-arithmetic
//! identities (antisymmetry, bilinearity, round trips) fuzzed over
//! random curves, fields and weight data.

use proptest::prelude::*;
use pvloop::geometry::{
    decompose_tangent, periodic_quadrature, recompose_tangent, ClosedCurve, ScalarOnCurve,
};
use pvloop::objects::{
    canonicalize, is_prequantizable, realize, symmetry_period, zm_canonical_rep,
    PointedVortexLoop, PointVortexConfig, VortexLoop,
};
use pvloop::symplectic::{omega_gamma, omega_pointed, pairing, PairingSpec};
use pvloop::Vec2;
use std::f64::consts::TAU;

const N: usize = 128;

fn harmonic_samples(coeffs: &[(f64, f64)], n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| {
            let t = TAU * j as f64 / n as f64;
            coeffs
                .iter()
                .enumerate()
                .map(|(m, &(a, b))| {
                    let k = (m + 1) as f64;
                    a * (k * t).cos() + b * (k * t).sin()
                })
                .sum()
        })
        .collect()
}

fn arb_coeffs() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 4)
}

fn arb_curve() -> impl Strategy<Value = ClosedCurve> {
    (1.2..2.4f64, 0.7..1.1f64, arb_coeffs()).prop_map(|(a, b, pert)| {
        let pts: Vec<Vec2> = (0..N)
            .map(|j| {
                let t = TAU * j as f64 / N as f64;
                let r = harmonic_samples(&pert, N)[j] * 0.03;
                Vec2::new((a + r) * t.cos(), (b + r) * t.sin())
            })
            .collect();
        ClosedCurve::new(pts).unwrap()
    })
}

fn arb_field() -> impl Strategy<Value = Vec<Vec2>> {
    (arb_coeffs(), arb_coeffs()).prop_map(|(cx, cy)| {
        harmonic_samples(&cx, N)
            .into_iter()
            .zip(harmonic_samples(&cy, N))
            .map(|(x, y)| Vec2::new(x, y))
            .collect()
    })
}

fn arb_spec() -> impl Strategy<Value = PairingSpec> {
    (
        0.2..2.0f64,
        prop::collection::vec((0.0..1.0f64, 0.3..2.0f64), 1..4),
    )
        .prop_map(|(c, raw)| {
            let mut t = 0.5f64;
            let mut nodes = Vec::new();
            let mut weights = Vec::new();
            for (dt, w) in raw {
                t += 0.4 + dt;
                if t < TAU {
                    nodes.push(t);
                    weights.push(w);
                }
            }
            if nodes.is_empty() {
                nodes.push(1.0);
                weights.push(1.0);
            }
            PairingSpec::new(c, nodes, weights).unwrap()
        })
}

fn arb_pointed_loop() -> impl Strategy<Value = PointedVortexLoop> {
    (arb_curve(), 0.8..1.5f64, arb_coeffs(), 1..=3usize).prop_map(|(curve, c0, dc, k)| {
        let density = ScalarOnCurve::new(
            harmonic_samples(&dc, N).into_iter().map(|v| c0 + 0.1 * v).collect(),
        );
        let marks: Vec<f64> = (0..k).map(|i| 0.3 + TAU * i as f64 / k as f64).collect();
        let circulations: Vec<f64> = (0..k).map(|i| 1.0 + 0.5 * i as f64).collect();
        PointedVortexLoop::new(VortexLoop::new(curve, density).unwrap(), marks, circulations)
            .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    // decompose/recompose are mutually inverse to 1e-14 in max norm
    #[test]
    fn decompose_recompose_inverse(curve in arb_curve(), u in arb_field()) {
        let d = decompose_tangent(&curve, &u).unwrap();
        let back = recompose_tangent(&curve, &d).unwrap();
        let scale = u.iter().fold(1.0f64, |m, v| m.max(v.norm()));
        for (a, b) in u.iter().zip(&back) {
            prop_assert!((*a - *b).norm() <= 1e-14 * scale);
        }
    }

    // resample up then back down reproduces the samples
    #[test]
    fn resample_round_trip(curve in arb_curve()) {
        let back = curve.resample(2 * N).unwrap().resample(N).unwrap();
        for (a, b) in curve.points().iter().zip(back.points()) {
            prop_assert!((*a - *b).norm() <= 1e-12);
        }
    }

    // frame identity ω(t, n) = 1 at every sample
    #[test]
    fn frame_identity(curve in arb_curve()) {
        let frame = curve.frame().unwrap();
        for j in 0..N {
            prop_assert!((frame.tangents[j].omega(frame.normals[j]) - 1.0).abs() <= 1e-12);
        }
    }

    // the partial vorticities always resum to the total vorticity
    #[test]
    fn partials_sum_to_total(pvl in arb_pointed_loop()) {
        let sum: f64 = pvl.partial_vorticities().iter().sum();
        let total = pvl.total_vorticity();
        prop_assert!((sum - total).abs() <= 1e-12 * total.abs().max(1.0));
    }

    // symmetry_period returns ℓ dividing k, with m = k/ℓ
    #[test]
    fn symmetry_period_divides(
        data in prop::collection::vec((0.5..2.0f64, 0.5..2.0f64), 1..8),
        reps in 1..4usize,
    ) {
        // repeat the block to force genuine symmetry part of the time
        let circulations: Vec<f64> =
            std::iter::repeat_n(data.iter().map(|d| d.0), reps).flatten().collect();
        let partials: Vec<f64> =
            std::iter::repeat_n(data.iter().map(|d| d.1), reps).flatten().collect();
        let k = circulations.len();
        let (l, m) = symmetry_period(&circulations, &partials, 1e-9);
        prop_assert_eq!(l * m, k);
        prop_assert_eq!(k % l, 0);
        // the repeated block is a symmetry, so ℓ never exceeds its length
        prop_assert!(l <= data.len());
    }

    // ℤ_m canonicalization is idempotent and constant on orbits
    #[test]
    fn zm_rep_idempotent_and_orbit_constant(
        pvl in arb_pointed_loop(),
        m in prop::sample::select(vec![1usize, 2, 4]),
    ) {
        let canon = canonicalize(&pvl).unwrap();
        let rep = zm_canonical_rep(&canon, m).unwrap();
        let again = zm_canonical_rep(&rep, m).unwrap();
        for (a, b) in rep.points().iter().zip(again.points()) {
            prop_assert!((*a - *b).norm() <= 1e-12);
        }
        // act by the generator: cyclic shift of samples (m divides N)
        let shift = N / m;
        let shifted = ClosedCurve::new(
            (0..N).map(|i| canon.points()[(i + shift) % N]).collect(),
        ).unwrap();
        let rep2 = zm_canonical_rep(&shifted, m).unwrap();
        for (a, b) in rep.points().iter().zip(rep2.points()) {
            prop_assert!((*a - *b).norm() <= 1e-12);
        }
    }

    // Φ round trip: realize → partials/circulations → realize again
    #[test]
    fn phi_round_trip(pvl in arb_pointed_loop()) {
        let partials = pvl.partial_vorticities();
        let canon = canonicalize(&pvl).unwrap();
        let round = realize(&canon, &partials, pvl.circulations()).unwrap();
        let w2 = round.partial_vorticities();
        for (a, b) in partials.iter().zip(&w2) {
            prop_assert!((a - b).abs() <= 1e-8);
        }
        let canon2 = canonicalize(&round).unwrap();
        for (p, q) in canon.points().iter().zip(canon2.points()) {
            prop_assert!((*p - *q).norm() <= 1e-8);
        }
    }

    // antisymmetry and bilinearity of the point-vortex form
    #[test]
    fn omega_gamma_antisymmetric_bilinear(
        g in prop::collection::vec(0.5..2.0f64, 3),
        uv in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64), 3),
        alpha in -2.0..2.0f64,
    ) {
        let cfg = PointVortexConfig::new(
            vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)],
            g,
        ).unwrap();
        let u: Vec<Vec2> = uv.iter().map(|c| Vec2::new(c.0, c.1)).collect();
        let v: Vec<Vec2> = uv.iter().map(|c| Vec2::new(c.2, c.3)).collect();
        let w: Vec<Vec2> = uv.iter().map(|c| Vec2::new(c.3, c.0)).collect();
        let a = omega_gamma(&cfg, &u, &v).unwrap();
        let b = omega_gamma(&cfg, &v, &u).unwrap();
        prop_assert!((a + b).abs() <= 1e-12 * a.abs().max(1.0));
        // bilinearity: ω(αu + w, v) = α ω(u, v) + ω(w, v)
        let scaled: Vec<Vec2> = u.iter().zip(&w).map(|(x, y)| *x * alpha + *y).collect();
        let lhs = omega_gamma(&cfg, &scaled, &v).unwrap();
        let rhs = alpha * a + omega_gamma(&cfg, &w, &v).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
    }

    // antisymmetry and bilinearity of the pointed form
    #[test]
    fn omega_pointed_antisymmetric_bilinear(
        curve in arb_curve(),
        spec in arb_spec(),
        u in arb_field(),
        v in arb_field(),
        w in arb_field(),
        alpha in -2.0..2.0f64,
    ) {
        let a = omega_pointed(&curve, &spec, &u, &v).unwrap();
        let b = omega_pointed(&curve, &spec, &v, &u).unwrap();
        prop_assert!((a + b).abs() <= 1e-11 * a.abs().max(1.0));
        let scaled: Vec<Vec2> = u.iter().zip(&w).map(|(x, y)| *x * alpha + *y).collect();
        let lhs = omega_pointed(&curve, &spec, &scaled, &v).unwrap();
        let rhs = alpha * a + omega_pointed(&curve, &spec, &w, &v).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0));
    }

    // the canonical pairing is linear in both slots and constant-shift
    // invariant in λ against zero-mean ρ
    #[test]
    fn pairing_linearity_and_gauge(
        spec in arb_spec(),
        rc in arb_coeffs(),
        lc in arb_coeffs(),
        shift in -2.0..2.0f64,
        alpha in -2.0..2.0f64,
    ) {
        // canonical coordinates: ρ carries zero parameter mean, which
        // pure harmonics give exactly
        let rho = ScalarOnCurve::new(harmonic_samples(&rc, N));
        let lam = ScalarOnCurve::new(harmonic_samples(&lc, N));
        let base = pairing(&rho, &lam, &spec);
        let scaled = ScalarOnCurve::new(lam.values().iter().map(|v| alpha * v).collect());
        let lhs = pairing(&rho, &scaled, &spec);
        prop_assert!((lhs - alpha * base).abs() <= 1e-11 * lhs.abs().max(1.0));
        // gauge invariance needs total weight against ρ to vanish: the
        // bulk has zero mean by projection, node weights remain, so
        // only test the bulk-only spec
        let bulk = PairingSpec::new(spec.c, vec![], vec![]).unwrap();
        let shifted = ScalarOnCurve::new(lam.values().iter().map(|v| v + shift).collect());
        let gauged = pairing(&rho, &shifted, &bulk);
        let plain = pairing(&rho, &lam, &bulk);
        prop_assert!((gauged - plain).abs() <= 1e-10 * plain.abs().max(1.0));
    }

    // quadrature is exact on low harmonics: only the mean survives
    #[test]
    fn quadrature_kills_harmonics(c0 in -2.0..2.0f64, coeffs in arb_coeffs()) {
        let vals: Vec<f64> = harmonic_samples(&coeffs, N).iter().map(|v| v + c0).collect();
        let q = periodic_quadrature(&ScalarOnCurve::new(vals));
        prop_assert!((q - TAU * c0).abs() <= 1e-12 * c0.abs().max(1.0));
    }

    // prequantization predicate is exact on constructed integral pairs
    #[test]
    fn prequantization_grid(a in 0.5..20.0f64, j in 1..50i32, half in proptest::bool::ANY) {
        let w = if half {
            (TAU * j as f64 + std::f64::consts::PI) / a
        } else {
            TAU * j as f64 / a
        };
        prop_assert_eq!(is_prequantizable(a, w, 1e-9), !half);
    }
}
