use super::*;
use crate::hypgeo::sampling::table_for;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

#[test]
fn minkowski_form_basics() {
    let o = [0.0, 0.0, 1.0];
    assert_eq!(minkowski_form(&o, &o).unwrap(), -1.0);
    let e1 = [1.0, 0.0, 0.0];
    assert_eq!(minkowski_form(&e1, &e1).unwrap(), 1.0);
    // 0 + 0 - 1
    assert_eq!(minkowski_form(&[1.0, 0.0, 1.0], &[0.0, 1.0, 1.0]).unwrap(), -1.0);
    assert!(minkowski_form(&[1.0, 0.0], &[0.0, 1.0]).is_err());
    assert!(minkowski_form(&o, &[1.0, 0.0, 0.0, 1.0]).is_err());
}

#[test]
fn hpoint_invariants_and_errors() {
    let p = HPoint::new(vec![0.3, -0.2, 1.2]).unwrap();
    assert!((mink(p.coords(), p.coords()) + 1.0).abs() < 1e-12);
    assert!(*p.coords().last().unwrap() > 0.0);
    assert!(HPoint::new(vec![0.0, 0.0, -1.0]).is_err()); // lower sheet
    assert!(HPoint::new(vec![2.0, 0.0, 1.0]).is_err()); // spacelike
    assert!(HPoint::new(vec![0.0, 1.0]).is_err()); // too short
}

#[test]
fn distance_anchors() {
    let o = HPoint::origin(2);
    assert_eq!(distance(&o, &o).unwrap(), 0.0);
    let q = HPoint::new(vec![1f64.sinh(), 0.0, 1f64.cosh()]).unwrap();
    assert!((distance(&o, &q).unwrap() - 1.0).abs() < 1e-12);
    let p3 = HPoint::origin(3);
    assert!(distance(&o, &p3).is_err());
}

#[test]
fn geodesic_roundtrip_distance() {
    let mut rng = rng(7);
    for m in [2usize, 3, 5, 8] {
        let base = HPoint::origin(m);
        for _ in 0..20 {
            let dir = random_tangent(&base, &mut rng);
            let p = geodesic_point(&base, &dir, 0.73).unwrap();
            assert!((distance(&base, &p).unwrap() - 0.73).abs() < 1e-9);
        }
    }
}

#[test]
fn geodesic_anchors_and_errors() {
    let o = HPoint::origin(2);
    let dir = TangentVec::new(o.clone(), vec![1.0, 0.0, 0.0]).unwrap();
    let same = geodesic_point(&o, &dir, 0.0).unwrap();
    assert_eq!(same.coords(), o.coords());
    let p = geodesic_point(&o, &dir, 1.0).unwrap();
    assert!((p.coords()[0] - 1f64.sinh()).abs() < 1e-12);
    assert!(p.coords()[1].abs() < 1e-12);
    assert!((p.coords()[2] - 1f64.cosh()).abs() < 1e-12);
    assert!(geodesic_point(&o, &dir, -0.1).is_err());
}

#[test]
fn geodesic_additivity_along_one_ray() {
    // d(gamma(s), gamma(t)) = |s - t|. Two roundoff channels set the
    // tolerance: the unit-norm error of the direction enters the point's
    // effective radius as eps * cosh^2(t) (sheet renormalization), and the
    // Minkowski product cancels to eps * cosh(s) cosh(t) / sinh(gap).
    let mut rng = rng(11);
    for m in [2usize, 4, 8] {
        let base = HPoint::origin(m);
        let dir = random_tangent(&base, &mut rng);
        for i in 0..200 {
            let s = (i % 14) as f64 * 0.71;
            let t = ((i * 7) % 15) as f64 * 0.67;
            if s > 10.0 || t > 10.0 {
                continue;
            }
            let p = geodesic_point(&base, &dir, s).unwrap();
            let q = geodesic_point(&base, &dir, t).unwrap();
            let d = distance(&p, &q).unwrap();
            let gap = (s - t).abs();
            let tol = 1e-9
                + 32.0 * f64::EPSILON * s.max(t).cosh().powi(2)
                + 64.0 * f64::EPSILON * s.cosh() * t.cosh() / gap.max(1e-2).sinh();
            assert!((d - gap).abs() <= tol, "m={m} s={s} t={t}: {d} vs {gap}");
        }
    }
}

#[test]
fn random_tangent_invariants_and_determinism() {
    let mut r1 = rng(42);
    let mut r2 = rng(42);
    for m in [2usize, 3, 8, 16] {
        let base = HPoint::origin(m);
        let v1 = random_tangent(&base, &mut r1);
        let v2 = random_tangent(&base, &mut r2);
        assert_eq!(v1.coords(), v2.coords(), "same seed must reproduce");
        assert!(mink(v1.coords(), base.coords()).abs() < 1e-9);
        assert!((mink(v1.coords(), v1.coords()) - 1.0).abs() < 1e-9);
    }
    // Off-origin base: same invariants after Gram-Schmidt.
    let mut rng = rng(5);
    for _ in 0..50 {
        let base = sample_ball_point(&HPoint::origin(3), 3.0, &mut rng);
        let v = random_tangent(&base, &mut rng);
        assert!(mink(v.coords(), base.coords()).abs() < 1e-9);
        assert!((mink(v.coords(), v.coords()) - 1.0).abs() < 1e-9);
    }
}

#[test]
fn random_tangent_isotropy_monte_carlo() {
    // First coordinate of an isotropic unit tangent at the origin has mean
    // zero and variance 1/m: check the mean within 3 standard errors.
    let m = 3;
    let n = 100_000;
    let base = HPoint::origin(m);
    let frame = TangentFrame::new(&base);
    let mut rng = rng(100);
    let mut sum = 0.0;
    for _ in 0..n {
        sum += frame.sample_direction(&mut rng).coords()[0];
    }
    let mean = sum / n as f64;
    let se = (1.0 / (m as f64 * n as f64)).sqrt();
    assert!(mean.abs() <= 3.0 * se, "mean {mean} vs se {se}");
}

#[test]
fn sample_radius_support_and_m2_cdf() {
    let mut rng = rng(21);
    let n = 100_000;
    let mut below_half = 0u64;
    for _ in 0..n {
        let x = sample_radius(2, 1.0, &mut rng);
        assert!((0.0..=1.0).contains(&x));
        if x <= 0.5 {
            below_half += 1;
        }
    }
    // Closed-form m=2 CDF: (cosh eta - 1)/(cosh r_max - 1).
    let p = (0.5f64.cosh() - 1.0) / (1.0f64.cosh() - 1.0);
    assert!((p - 0.235004).abs() < 1e-6);
    let freq = below_half as f64 / n as f64;
    let se = (p * (1.0 - p) / n as f64).sqrt();
    assert!((freq - p).abs() <= 3.0 * se, "freq {freq} vs {p}");
}

#[test]
fn sample_radius_ks_against_quadrature_cdf() {
    let m = 6;
    let r_max = 2.5;
    let n = 100_000usize;
    let mut rng = rng(33);
    let mut draws: Vec<f64> = (0..n).map(|_| sample_radius(m, r_max, &mut rng)).collect();
    draws.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let table = table_for(m, r_max);
    let mut ks = 0.0f64;
    for (i, &x) in draws.iter().enumerate() {
        let f = table.cdf(x);
        let lo = i as f64 / n as f64;
        let hi = (i + 1) as f64 / n as f64;
        ks = ks.max((f - lo).abs()).max((f - hi).abs());
    }
    // 1% asymptotic critical value: sqrt(-ln(0.005)/2)/sqrt(n).
    let crit = (-(0.005f64.ln()) / 2.0).sqrt() / (n as f64).sqrt();
    assert!(ks < crit, "KS {ks} vs critical {crit}");
}

#[test]
fn sample_ball_point_support_and_volume_fraction() {
    let center = HPoint::origin(2);
    let sampler = BallSampler::new(&center, 2.0).unwrap();
    let mut rng = rng(55);
    let n = 100_000;
    let mut inside = 0u64;
    for _ in 0..n {
        let p = sampler.sample(&mut rng);
        let d = distance(&center, &p).unwrap();
        assert!(d <= 2.0 + 1e-9);
        if d <= 1.0 {
            inside += 1;
        }
    }
    // vol(B_1)/vol(B_2) in the plane: (cosh 1 - 1)/(cosh 2 - 1) = 0.196612...
    let p = (1.0f64.cosh() - 1.0) / (2.0f64.cosh() - 1.0);
    assert!((p - 0.196612).abs() < 1e-6);
    let freq = inside as f64 / n as f64;
    let se = (p * (1.0 - p) / n as f64).sqrt();
    assert!((freq - p).abs() <= 3.0 * se, "freq {freq} vs {p}");
}

#[test]
fn ball_point_radial_law_matches_sample_radius() {
    // Distances from the center follow the same law as sample_radius:
    // KS between the empirical distance distribution and the radial CDF.
    let m = 3;
    let r = 1.7;
    let center = HPoint::origin(m as usize);
    let sampler = BallSampler::new(&center, r).unwrap();
    let mut rng = rng(77);
    let n = 40_000usize;
    let mut d: Vec<f64> = (0..n)
        .map(|_| distance(&center, &sampler.sample(&mut rng)).unwrap())
        .collect();
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let table = table_for(m, r);
    let mut ks = 0.0f64;
    for (i, &x) in d.iter().enumerate() {
        let f = table.cdf(x);
        ks = ks
            .max((f - i as f64 / n as f64).abs())
            .max((f - (i + 1) as f64 / n as f64).abs());
    }
    let crit = (-(0.005f64.ln()) / 2.0).sqrt() / (n as f64).sqrt();
    assert!(ks < crit, "KS {ks} vs {crit}");
}

#[test]
fn law_of_cosines_boundary_and_equilateral() {
    let (a, b) = (1.3, 0.8);
    let degenerate_far = law_of_cosines_angle(a, b, a + b).unwrap();
    assert!((degenerate_far - std::f64::consts::PI).abs() < 1e-12);
    let degenerate_near = law_of_cosines_angle(a, b, a - b).unwrap();
    assert!(degenerate_near.abs() < 1e-12);
    // Equilateral side 1: angle = arccos(cosh 1 / (cosh 1 + 1)) = 0.9187979...
    let expected = (1.0f64.cosh() / (1.0f64.cosh() + 1.0)).acos();
    let got = law_of_cosines_angle(1.0, 1.0, 1.0).unwrap();
    assert!((got - expected).abs() < 1e-12);
    assert!((got - 0.9187979).abs() < 1e-6);
    assert!(law_of_cosines_angle(1.0, 1.0, 2.5).is_err());
    assert!(law_of_cosines_angle(1.0, 2.0, 0.5).is_err());
    assert!(law_of_cosines_angle(0.0, 1.0, 1.0).is_err());
}

#[test]
fn law_of_cosines_matches_textbook_form_at_moderate_sides() {
    let mut rng = rng(3);
    for _ in 0..500 {
        let a = 0.1 + 4.0 * rand::Rng::gen::<f64>(&mut rng);
        let b = 0.1 + 4.0 * rand::Rng::gen::<f64>(&mut rng);
        let lo = (a - b).abs();
        let hi = a + b;
        let c = lo + (hi - lo) * rand::Rng::gen::<f64>(&mut rng);
        let stable = law_of_cosines_angle(a, b, c).unwrap();
        let cosg = ((a.cosh() * b.cosh() - c.cosh()) / (a.sinh() * b.sinh())).clamp(-1.0, 1.0);
        assert!(
            (stable - cosg.acos()).abs() < 1e-7,
            "a={a} b={b} c={c}: {stable} vs {}",
            cosg.acos()
        );
    }
}

#[test]
fn law_of_cosines_survives_huge_sides() {
    // cosh(40)^2 saturates the arccos route; the half-angle form keeps
    // ~1e-15 relative accuracy. Equilateral with side L has
    // tan^2(g/2) = sinh(L/2)/sinh(3L/2), so g ~ 2 exp(-L/2) for large L.
    let l = 40.0;
    let got = law_of_cosines_angle(l, l, l).unwrap();
    let expected = 2.0 * ((0.5 * l).sinh() / (1.5 * l).sinh()).sqrt().atan();
    assert!((got - expected).abs() <= 1e-15 * expected.abs() * 4.0 + 1e-300);
    assert!((got / (2.0 * (-l / 2.0).exp()) - 1.0).abs() < 1e-8);
}

#[test]
fn sigma_intersection_limits_and_anchor() {
    // tau -> 0: sigma -> r.
    assert!((sigma_intersection(1e-9, 2.0).unwrap() - 2.0).abs() < 1e-9);
    // tau -> 2r: sigma -> 0.
    assert!(sigma_intersection(4.0 - 1e-9, 2.0).unwrap() < 1e-4);
    // Direct evaluation oracle at r=2, tau=1:
    // sinh^2 sigma = sinh^2 2 - cosh^2 2 * tanh^2 0.5 = 10.1314748...
    let direct = (2f64.sinh().powi(2) - 2f64.cosh().powi(2) * 0.5f64.tanh().powi(2))
        .sqrt()
        .asinh();
    let got = sigma_intersection(1.0, 2.0).unwrap();
    assert!((got - direct).abs() < 1e-12);
    assert!((got - 1.874780).abs() < 1e-4);
    assert!(sigma_intersection(4.0, 2.0).is_err());
    assert!(sigma_intersection(0.0, 2.0).is_err());
    assert!(sigma_intersection(-1.0, 2.0).is_err());
}

#[test]
fn sigma_intersection_monotone_and_below_r() {
    let r = 1.7;
    let mut prev = r;
    for i in 1..100 {
        let tau = 2.0 * r * i as f64 / 100.0;
        let s = sigma_intersection(tau, r).unwrap();
        assert!(s < prev, "sigma must strictly decrease in tau");
        assert!(s < r);
        prev = s;
    }
}

#[test]
fn intersection_containment_invariant() {
    // Every point of B_r(x) cap B_r(u) lies within sigma(tau, r) of the
    // geodesic midpoint. Reduced-size version of the acceptance run.
    let mut rng = rng(2024);
    let mut total_checked = 0u64;
    for case in 0..10u32 {
        let m = 2 + (case % 7) as usize;
        let r = 0.4 + 0.45 * f64::from(case % 8);
        // Center-distance fraction kept below 0.5 of the diameter so the
        // lens keeps enough mass for the filter to produce samples.
        let frac = 0.08 + 0.42 * f64::from(case * 37 % 100) / 100.0;
        let tau = frac * 2.0 * r;
        let x = sample_ball_point(&HPoint::origin(m), 1.5, &mut rng);
        let dir = random_tangent(&x, &mut rng);
        let u = geodesic_point(&x, &dir, tau).unwrap();
        let mid = geodesic_point(&x, &direction_to(&x, &u).unwrap(), tau / 2.0).unwrap();
        let sigma = sigma_intersection(tau, r).unwrap();
        let sampler = BallSampler::new(&x, r).unwrap();
        for _ in 0..20_000 {
            let y = sampler.sample(&mut rng);
            if dist_unchecked(&y, &u) <= r {
                total_checked += 1;
                let d_mid = dist_unchecked(&y, &mid);
                assert!(
                    d_mid <= sigma + 1e-7,
                    "violation: m={m} r={r} tau={tau} d={d_mid} sigma={sigma}"
                );
            }
        }
    }
    assert!(total_checked > 10_000, "filter kept too few samples: {total_checked}");
}

#[test]
fn direction_to_recovers_target() {
    let mut rng = rng(9);
    for _ in 0..40 {
        let a = sample_ball_point(&HPoint::origin(4), 2.0, &mut rng);
        let b = sample_ball_point(&HPoint::origin(4), 2.0, &mut rng);
        let d = distance(&a, &b).unwrap();
        if d < 1e-9 {
            continue;
        }
        let dir = direction_to(&a, &b).unwrap();
        let back = geodesic_point(&a, &dir, d).unwrap();
        // Compare coordinates: a near-zero distance goes through acosh at 1,
        // whose sqrt conditioning would inflate pure roundoff to ~1e-7.
        let scale = b.coords().iter().fold(1.0f64, |acc, c| acc.max(c.abs()));
        for (x, y) in back.coords().iter().zip(b.coords()) {
            assert!((x - y).abs() <= 1e-12 * scale);
        }
    }
    let o = HPoint::origin(2);
    assert!(direction_to(&o, &o).is_err());
}

#[test]
fn hyperbolic_identity_grid() {
    // Routine inequalities and doubling identities on a log-spaced grid.
    let n = 240;
    for i in 0..=n {
        let x = 1e-6 * (30.0f64 / 1e-6).powf(i as f64 / n as f64);
        // tanh x < 1 strictly; f64 saturates to exactly 1.0 once
        // 1 - tanh x ~ 2 e^{-2x} drops below eps (x ~ 18).
        assert!(x.tanh() <= 1.0);
        if x < 17.0 {
            assert!(x.tanh() < 1.0);
        }
        assert!(2.0 * x.sinh() <= (2.0 * x).sinh() * (1.0 + 1e-15));
        assert!((2.0 * x).tanh() <= 2.0 * x.tanh() * (1.0 + 1e-15));
        let c2 = (2.0 * x).cosh();
        let s2 = (2.0 * x).sinh();
        assert!(((2.0 * x.cosh().powi(2) - 1.0) - c2).abs() <= 1e-10 * c2);
        assert!(((2.0 * x.sinh() * x.cosh()) - s2).abs() <= 1e-10 * s2.abs().max(1e-300));
    }
}

#[test]
fn triangle_inequality_sampled() {
    let mut rng = rng(13);
    for m in [2usize, 3, 6] {
        let center = HPoint::origin(m);
        let sampler = BallSampler::new(&center, 2.0).unwrap();
        for _ in 0..200 {
            let p = sampler.sample(&mut rng);
            let q = sampler.sample(&mut rng);
            let r = sampler.sample(&mut rng);
            let pq = distance(&p, &q).unwrap();
            let qr = distance(&q, &r).unwrap();
            let pr = distance(&p, &r).unwrap();
            assert!(pr <= pq + qr + 1e-8);
        }
    }
}

proptest! {
    #[test]
    fn distance_symmetric_and_zero_iff_close(seed in 0u64..500) {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let center = HPoint::origin(3);
        let sampler = BallSampler::new(&center, 2.5).unwrap();
        let p = sampler.sample(&mut rng);
        let q = sampler.sample(&mut rng);
        let dpq = distance(&p, &q).unwrap();
        let dqp = distance(&q, &p).unwrap();
        prop_assert!((dpq - dqp).abs() < 1e-12);
        if dpq == 0.0 {
            for (a, b) in p.coords().iter().zip(q.coords()) {
                prop_assert!((a - b).abs() < 1e-8);
            }
        }
        // Self-distance is zero up to the conditioning of acosh near 1
        // (roundoff eps in the form becomes sqrt(2 eps) in the distance).
        prop_assert!(distance(&p, &p).unwrap() < 1e-6);
    }
}
