use std::f64::consts::PI;

use comtool::feedback::{effective_cavity, eta_grid, noise_normalization_residual, FeedbackLoop};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KAPPA: f64 = 2.0 * PI * 1.5e6;

fn eta(r_b: f64, theta: f64) -> f64 {
    effective_cavity(KAPPA, KAPPA, &FeedbackLoop::new(r_b, theta).unwrap(), 0.0).eta
}

#[test]
fn noise_weights_sum_to_effective_decay() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let k1 = 10f64.powf(rng.gen_range(3.0..9.0));
        let k2 = 10f64.powf(rng.gen_range(3.0..9.0));
        let fb = FeedbackLoop::new(rng.gen_range(0.0..1.0), rng.gen_range(-10.0..10.0)).unwrap();
        let r = noise_normalization_residual(k1, k2, &fb);
        worst = worst.max(r);
        assert!(r <= 1e-12, "residual {r:.2e} at {fb:?}, κ = ({k1}, {k2})");
    }
    println!("worst noise normalization residual {worst:.2e}");
}

#[test]
fn eta_is_periodic_with_extremes_at_zero_and_pi() {
    let thetas: Vec<f64> = (0..=360).map(|i| 2.0 * PI * i as f64 / 360.0).collect();
    for &r in &[0.1, 0.5, 0.8, 0.99] {
        let values: Vec<f64> = thetas.iter().map(|&t| eta(r, t)).collect();
        let argmin = (0..values.len()).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
        let argmax = (0..values.len()).max_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
        assert_eq!(argmin, 0, "r_B {r}");
        assert_eq!(argmax, 180, "r_B {r}");
        assert!((values[0] - values[360]).abs() < 1e-12);
        for &t in &thetas {
            assert!((eta(r, t) - eta(r, t + 2.0 * PI)).abs() < 1e-12);
            assert!(eta(r, t) >= 1.0 - r - 1e-15);
        }
        assert!((values[0] - (1.0 - r)).abs() < 1e-12);
    }
}

#[test]
fn eta_grid_matches_pointwise_values() {
    let rs = [0.0, 0.3, 0.8];
    let ts = [0.0, PI / 2.0, PI];
    let grid = eta_grid(KAPPA, KAPPA, &rs, &ts).unwrap();
    for (k, pt) in grid.iter().enumerate() {
        assert_eq!((pt.r_b, pt.theta), (rs[k / 3], ts[k % 3]));
        assert_eq!(pt.eta, eta(pt.r_b, pt.theta));
    }
}

proptest! {
    #[test]
    fn effective_decay_stays_positive(
        r_b in 0.0f64..1.0,
        theta in -20.0f64..20.0,
        log_k1 in 0.0f64..10.0,
        log_k2 in 0.0f64..10.0,
    ) {
        let (k1, k2) = (10f64.powf(log_k1), 10f64.powf(log_k2));
        let cav = effective_cavity(k1, k2, &FeedbackLoop::new(r_b, theta).unwrap(), 0.0);
        prop_assert!(cav.kappa_tilde > 0.0);
        prop_assert!(cav.eta > 0.0 && cav.eta <= 2.0);
    }

    #[test]
    fn detuning_shift_is_bounded_by_feedback_strength(
        r_b in 0.0f64..1.0,
        theta in -20.0f64..20.0,
        delta in -1e8f64..1e8,
    ) {
        let fb = FeedbackLoop::new(r_b, theta).unwrap();
        let cav = effective_cavity(KAPPA, KAPPA, &fb, delta);
        prop_assert!((cav.delta_tilde - delta).abs() <= fb.strength(KAPPA, KAPPA) * (1.0 + 1e-12));
    }
}
