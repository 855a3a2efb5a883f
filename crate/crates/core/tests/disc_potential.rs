use std::f64::consts::{PI, TAU};

use pluri_core::arcs::UnitCircleSet;
use pluri_core::potential::{angular_limit_probe, omega_disc, DiscPotential};
use pluri_core::{Complex64, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_set(rng: &mut ChaCha8Rng) -> UnitCircleSet {
    let k = rng.random_range(1..=4);
    let iv: Vec<(f64, f64)> = (0..k)
        .map(|_| {
            let s = rng.random_range(0.0..TAU);
            (s, s + rng.random_range(0.05..2.0))
        })
        .collect();
    UnitCircleSet::from_intervals(&iv).unwrap()
}

fn random_point(rng: &mut ChaCha8Rng, r: f64) -> Point {
    Complex64::from_polar(r * rng.random::<f64>().sqrt(), rng.random_range(0.0..TAU))
}

/// Midpoint rule for the Poisson integral over the complement.
fn poisson_trapezoid(z: Point, b: &UnitCircleSet, n: usize) -> f64 {
    let mut s = 0.0;
    for k in 0..n {
        let t = TAU * (k as f64 + 0.5) / n as f64;
        if !b.contains(t) {
            let e = Complex64::from_polar(1.0, t);
            s += (1.0 - z.norm_sqr()) / (e - z).norm_sqr();
        }
    }
    s / n as f64
}

#[test]
fn center_value_is_complement_fraction() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let b = random_set(&mut rng);
        let w = omega_disc(Point::new(0.0, 0.0), &b).unwrap();
        assert!((w - (1.0 - b.measure() / TAU)).abs() <= 1e-12);
    }
}

#[test]
fn complementary_sets_partition_unity() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..500 {
        let b = random_set(&mut rng);
        let z = random_point(&mut rng, 0.95);
        let s = omega_disc(z, &b).unwrap() + omega_disc(z, &b.complement()).unwrap();
        assert!((s - 1.0).abs() <= 1e-12, "{s}");
    }
}

#[test]
fn closed_form_agrees_with_poisson_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let b = random_set(&mut rng);
        let z = random_point(&mut rng, 0.8);
        let q = poisson_trapezoid(z, &b, 200_000);
        // Indicator jumps cost O(1/n) per endpoint.
        assert!((omega_disc(z, &b).unwrap() - q).abs() < 1e-4);
    }
}

#[test]
fn rotation_and_reflection_symmetry() {
    let b = UnitCircleSet::arc(0.3, 2.1).unwrap();
    let z = Point::new(0.2, -0.4);
    let rotated = omega_disc(z * Complex64::from_polar(1.0, 0.9), &b.rotate(0.9)).unwrap();
    assert!((rotated - omega_disc(z, &b).unwrap()).abs() < 1e-13);
    // Conjugation mirrors the arc.
    let mirrored = UnitCircleSet::arc(-2.1, -0.3).unwrap();
    assert!((omega_disc(z.conj(), &mirrored).unwrap() - omega_disc(z, &b).unwrap()).abs() < 1e-13);
}

#[test]
fn half_circle_level_line_is_the_diameter() {
    let b = UnitCircleSet::arc(0.0, PI).unwrap();
    for x in [-0.9, -0.3, 0.0, 0.5, 0.95] {
        assert!((omega_disc(Point::new(x, 0.0), &b).unwrap() - 0.5).abs() < 1e-14);
    }
}

#[test]
fn g_is_holomorphic_with_real_part_omega() {
    let p = DiscPotential::new(&UnitCircleSet::from_intervals(&[(0.2, 1.4), (3.0, 4.5)]).unwrap());
    let z = Point::new(0.15, 0.35);
    let h = 1e-4;
    let g = |z| p.g(z).unwrap();
    let dx = (g(z + h) - g(z - h)) / (2.0 * h);
    let dy = (g(z + Complex64::i() * h) - g(z - Complex64::i() * h)) / (2.0 * h);
    assert!((dy - Complex64::i() * dx).norm() < 1e-7);
    assert!((g(z).re - p.omega(z).unwrap()).abs() < 1e-15);
}

#[test]
fn angular_limit_at_density_points_is_zero() {
    let b = UnitCircleSet::arc(0.0, 1.5 * PI).unwrap();
    let p = DiscPotential::new(&b);
    for theta in [0.4, 2.0, 4.0] {
        let zeta = Complex64::from_polar(1.0, theta);
        let probe = angular_limit_probe(|z| Ok(Complex64::new(p.omega(z)?, 0.0)), zeta, PI / 4.0, 4..=12, 1e-2).unwrap();
        assert!(probe.residuals_against(Complex64::new(0.0, 0.0)).last().unwrap() < &1e-2);
        assert!(probe.stolz_converged);
    }
}
