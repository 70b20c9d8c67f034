mod common;

use common::{c, TOL};
use proptest::prelude::*;
use qwalk::analysis::{
    ballistic_fit, civilization_recurrence, monitored_recurrence_single, similarity, variance_1d,
    variance_2d, walker_variance_series,
};
use qwalk::two_photon::{conditioned_distribution, ConditioningSpec, Convention};
use qwalk::walk::CoinMatrix;
use qwalk::{
    walk, Coin, CoinSpec, Complex64, Error, JointPositionDistribution, Mode, PositionDistribution,
    WalkerState,
};

/// First-return probabilities `f_1..=f_horizon` by summing amplitudes over
/// every coin path that avoids the origin before its last step.
fn first_returns(h: Complex64, v: Complex64, horizon: usize) -> Vec<f64> {
    let coin = CoinMatrix::from_degrees(45.0);
    let mut paths: Vec<(i32, usize, Complex64)> = vec![(0, 0, h), (0, 1, v)];
    let mut out = Vec::new();
    for _ in 0..horizon {
        let mut next = Vec::new();
        let mut at_origin = [c(0.0); 2];
        for &(x, from, amp) in &paths {
            for (to, origin) in at_origin.iter_mut().enumerate() {
                let y = x + if to == 0 { 1 } else { -1 };
                let a = amp * coin.entry(to, from);
                if y == 0 {
                    *origin += a;
                } else {
                    next.push((y, to, a));
                }
            }
        }
        out.push(at_origin[0].norm_sqr() + at_origin[1].norm_sqr());
        paths = next;
    }
    out
}

#[test]
fn monitored_recurrence_matches_path_sum() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let inputs = [
        (c(1.0), c(0.0)),
        (c(0.0), c(1.0)),
        (c(s), Complex64::new(0.0, s)),
        (c(0.6), c(-0.8)),
    ];
    for (h, v) in inputs {
        let init = WalkerState::localized(0, h, v).unwrap();
        let series = monitored_recurrence_single(&init, 8, &CoinSpec::hadamard());
        let mut total = 0.0;
        for (t, f) in first_returns(h, v, 8).into_iter().enumerate() {
            total += f;
            assert!((series.at(t + 1) - total).abs() < TOL, "T = {}", t + 1);
        }
    }
}

#[test]
fn single_recurrence_at_two_steps() {
    let r = monitored_recurrence_single(
        &WalkerState::basis(Mode::new(0, Coin::H)),
        2,
        &CoinSpec::hadamard(),
    );
    assert_eq!(r.values()[0], 0.0);
    assert!((r.at(2) - 0.5).abs() < 1e-15);
}

#[test]
fn civilization_series_is_a_probability() {
    let r = civilization_recurrence(14, Convention::PaperProjector, &CoinSpec::hadamard()).unwrap();
    assert_eq!(r.horizon(), 14);
    assert!(r.values().iter().all(|v| (0.0..=1.0).contains(v)));
    assert_eq!(&r.values()[..3], &[0.0, 0.0, 0.0]);
    assert!(r.at(4) > 0.0);
    assert!(matches!(
        civilization_recurrence(2, Convention::Annihilation, &CoinSpec::hadamard()),
        Err(Error::NoDetection { horizon: 2 })
    ));
}

#[test]
fn step_one_loss_localizes_the_partner() {
    let coin = CoinSpec::hadamard();
    let left = Mode::new(-1, Coin::V);
    let right = Mode::new(1, Coin::H);
    for convention in [Convention::PaperProjector, Convention::Annihilation] {
        let spec_l = ConditioningSpec::new(1, left, convention).unwrap();
        let spec_r = ConditioningSpec::new(1, right, convention).unwrap();
        for n in 1..=20 {
            let single = walk::mode_distribution(&walk::evolve(
                &WalkerState::basis(left).with_step(1),
                n - 1,
                &coin,
            ));
            let (l, _) = conditioned_distribution(&spec_l, n, &coin).unwrap();
            let (r, _) = conditioned_distribution(&spec_r, n, &coin).unwrap();
            assert!(l.max_abs_diff(&single) < TOL);
            assert!(r.max_abs_diff(&l.mirrored()) < TOL);
        }
    }
}

#[test]
fn mirrored_loss_modes_give_mirrored_outputs() {
    let coin = CoinSpec::hadamard();
    for m in 1..=5 {
        for x in -(m as i32)..=m as i32 {
            let mode = Mode::new(x, Coin::H);
            if !mode.in_light_cone(m) {
                continue;
            }
            let a = ConditioningSpec::new(m, mode, Convention::PaperProjector).unwrap();
            let b = ConditioningSpec::new(m, mode.mirrored(), Convention::PaperProjector).unwrap();
            let (Ok((da, wa)), Ok((db, wb))) = (
                conditioned_distribution(&a, m + 1, &coin),
                conditioned_distribution(&b, m + 1, &coin),
            ) else {
                continue;
            };
            assert!((wa - wb).abs() < TOL);
            assert!(da.mirrored().max_abs_diff(&db) < TOL);
        }
    }
}

#[test]
fn fit_recovers_power_laws() {
    let quad: Vec<_> = (1..=60).map(|t| (t, 0.3 * (t * t) as f64)).collect();
    assert!((ballistic_fit(&quad, 10..=50).unwrap() - 2.0).abs() < 1e-12);
    let lin: Vec<_> = (1..=60).map(|t| (t, 5.0 * t as f64)).collect();
    assert!((ballistic_fit(&lin, 10..=50).unwrap() - 1.0).abs() < 1e-12);
    assert!(matches!(
        ballistic_fit(&quad, 10..=70),
        Err(Error::InvalidWindow { start: 10, end: 70 })
    ));
    let series = walker_variance_series(
        &WalkerState::basis(Mode::new(0, Coin::H)),
        5,
        &CoinSpec::hadamard(),
    );
    assert!(matches!(
        ballistic_fit(&series, 0..=5),
        Err(Error::InvalidWindow { .. })
    ));
}

fn arb_dist() -> impl Strategy<Value = Vec<(i32, f64)>> {
    prop::collection::vec((-20i32..20, 0.01..1.0f64), 1..12).prop_map(|v| {
        let total: f64 = v.iter().map(|(_, p)| p).sum();
        v.into_iter().map(|(x, p)| (x, p / total)).collect()
    })
}

proptest! {
    #[test]
    fn variance_is_translation_invariant(d in arb_dist(), k in -50i32..50) {
        let a = PositionDistribution::from_entries(0, d.clone());
        let b = PositionDistribution::from_entries(0, d.iter().map(|&(x, p)| (x + k, p)));
        prop_assert!((variance_1d(&a) - variance_1d(&b)).abs() < 1e-9);

        let ja = JointPositionDistribution::from_entries(0, d.iter().map(|&(x, p)| ((x, -x), p)));
        let jb = JointPositionDistribution::from_entries(0, d.iter().map(|&(x, p)| ((x + k, k - x), p)));
        prop_assert!((variance_2d(&ja) - variance_2d(&jb)).abs() < 1e-9);
    }

    #[test]
    fn similarity_properties(
        v in prop::collection::vec((0.0..1.0f64, 0.0..1.0f64), 1..16),
        scale in 0.1..10.0f64,
    ) {
        let (p, q): (Vec<f64>, Vec<f64>) = v.into_iter().unzip();
        if let Ok(s) = similarity(&p, &q) {
            prop_assert!((0.0..=1.0).contains(&s));
            prop_assert!((similarity(&q, &p).unwrap() - s).abs() < 1e-12);
            let scaled: Vec<f64> = p.iter().map(|x| x * scale).collect();
            prop_assert!((similarity(&scaled, &q).unwrap() - s).abs() < 1e-12);
            prop_assert!((similarity(&p, &p).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn recurrence_is_monotone_and_bounded(a in 0.0..1.0f64, ph in 0.0..std::f64::consts::TAU, t in 1usize..40) {
        let init = WalkerState::localized(0, c(a.sqrt()), Complex64::from_polar((1.0 - a).sqrt(), ph)).unwrap();
        let r = monitored_recurrence_single(&init, t, &CoinSpec::hadamard());
        prop_assert!(r.is_monotone());
        prop_assert!(r.values().iter().all(|v| (0.0..=1.0).contains(v)));
    }
}
