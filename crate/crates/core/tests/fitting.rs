use fracbessel::cornea::{CornealModel, CornealParams};
use fracbessel::fitting::*;
use fracbessel::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXTERIOR: (f64, f64, f64) = (0.580404, 1.19734, 0.421345);
const INTERIOR: (f64, f64, f64) = (0.818763, 1.66664, 0.503431);

fn params(t: (f64, f64, f64)) -> CornealParams {
    CornealParams::new(t.0, t.1, t.2, 6.0).unwrap()
}

fn grid(t: (f64, f64, f64), n: usize, sigma: f64, seed: u64) -> SurfaceGrid {
    synth_grid(
        &params(t),
        &SynthOptions {
            nx: n,
            ny: n,
            sigma,
            seed,
        },
    )
    .unwrap()
}

fn assert_recovered(rep: &FitReport, t: (f64, f64, f64), tol: f64) {
    let got = [rep.params.a, rep.params.b, rep.params.alpha.value()];
    for (g, w) in got.iter().zip([t.0, t.1, t.2]) {
        assert!((g / w - 1.0).abs() <= tol, "{got:?} vs {t:?}");
    }
}

#[test]
fn radial_reduce_examples() {
    let layout = GridLayout {
        nx: 1,
        ny: 1,
        x0: 0.0,
        y0: 0.0,
        dx: 1.0,
        dy: 1.0,
    };
    let g = SurfaceGrid::new(layout, vec![3.0], Some((0.0, 0.0)), Some(1.0)).unwrap();
    assert_eq!(
        radial_reduce(&g).unwrap().as_slice(),
        &[RadialSample { r: 0.0, h: 3.0 }]
    );

    let layout = GridLayout {
        nx: 2,
        ny: 1,
        x0: 0.0,
        y0: 0.0,
        dx: 2.5,
        dy: 1.0,
    };
    let g = SurfaceGrid::new(layout, vec![1.0, 0.0], Some((0.0, 0.0)), Some(2.5)).unwrap();
    assert_eq!(
        radial_reduce(&g).unwrap().as_slice()[1],
        RadialSample { r: 1.0, h: 0.0 }
    );

    let g = grid(EXTERIOR, 123, 0.0, 0);
    let kept = radial_reduce(&g).unwrap().len() as f64 / (123.0 * 123.0);
    assert!(
        (kept / std::f64::consts::FRAC_PI_4 - 1.0).abs() <= 0.02,
        "{kept}"
    );

    let all_out =
        SurfaceGrid::new(layout, vec![1.0, f64::NAN], Some((10.0, 10.0)), Some(1.0)).unwrap();
    assert!(matches!(radial_reduce(&all_out), Err(Error::Empty(_))));
}

#[test]
fn objective_noise_expectation() {
    let g = grid(EXTERIOR, 123, 0.01, 3);
    let s = radial_reduce(&g).unwrap();
    let per_point = objective(
        &CornealParams::unit(EXTERIOR.0, EXTERIOR.1, EXTERIOR.2).unwrap(),
        &s,
    )
    .unwrap()
        / s.len() as f64;
    assert!((per_point / 1e-4 - 1.0).abs() <= 0.2, "{per_point}");
}

#[test]
fn residual_map_examples() {
    let p = params(EXTERIOR);
    let g = grid(EXTERIOR, 41, 0.0, 0);
    let map = residual_map(&g, &p).unwrap();
    for (h, m) in g.heights().iter().zip(map.heights()) {
        assert_eq!(h.is_nan(), m.is_nan());
        if !m.is_nan() {
            assert!(*m <= 1e-15);
        }
    }

    let mut bumped = g.heights().to_vec();
    let k = 20 * 41 + 20;
    bumped[k] += 0.05;
    let map = residual_map(&g.with_heights(bumped).unwrap(), &p).unwrap();
    assert!((map.heights()[k] - 0.05).abs() < 1e-12);
    let rest = map
        .heights()
        .iter()
        .enumerate()
        .filter(|&(i, m)| i != k && !m.is_nan());
    assert!(rest.map(|(_, m)| *m).fold(0.0, f64::max) <= 1e-15);

    let noisy = grid(EXTERIOR, 123, 0.01, 5);
    let map = residual_map(&noisy, &p).unwrap();
    let used: Vec<f64> = map
        .heights()
        .iter()
        .copied()
        .filter(|m| !m.is_nan())
        .collect();
    let mean = used.iter().sum::<f64>() / used.len() as f64;
    let expect = 0.01 * (2.0 / std::f64::consts::PI).sqrt();
    assert!((mean / expect - 1.0).abs() <= 0.3, "{mean}");
}

#[test]
fn noiseless_round_trips() {
    for t in [EXTERIOR, INTERIOR] {
        let rep = fit_grid(&grid(t, 123, 0.0, 0), &FitOptions::default()).unwrap();
        assert_recovered(&rep, t, 1e-3);
        assert!(rep.mae <= 1e-6);
        assert!(rep.converged);
        assert_eq!(rep.params.rim_radius, 6.0);
    }
}

#[test]
fn report_invariants() {
    let rep = fit_grid(&grid(INTERIOR, 61, 0.01, 11), &FitOptions::default()).unwrap();
    assert!(rep.mae <= rep.max_residual && rep.rmse <= rep.max_residual);
    if rep.converged {
        assert!(rep.final_simplex_size <= FitOptions::default().xtol);
    }
    // MAE is the mean of the residual map over the cells used.
    let map = rep.residual_grid.as_ref().unwrap();
    let used: Vec<f64> = map
        .heights()
        .iter()
        .copied()
        .filter(|m| !m.is_nan())
        .collect();
    assert_eq!(used.len(), rep.n_points_used);
    let mean = used.iter().sum::<f64>() / used.len() as f64;
    assert!((mean - rep.mae).abs() <= 1e-12);
}

#[test]
fn identifiable_across_fit_box() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..6 {
        let t = (
            rng.gen_range(0.2..2.0),
            rng.gen_range(0.5..3.0),
            rng.gen_range(0.1..1.0),
        );
        let rep = fit_grid(&grid(t, 61, 0.0, 0), &FitOptions::default()).unwrap();
        assert_recovered(&rep, t, 1e-3);
    }
}

#[test]
fn scale_covariance() {
    let g = grid(EXTERIOR, 61, 0.0, 0);
    let base = fit_grid(&g, &FitOptions::default()).unwrap();
    for s in [0.5, 2.0] {
        let rep = fit_grid(&g.map_heights(|h| s * h).unwrap(), &FitOptions::default()).unwrap();
        assert!(
            (rep.params.b / (s * base.params.b) - 1.0).abs() < 1e-6,
            "s {s}"
        );
        assert!((rep.params.a / base.params.a - 1.0).abs() < 1e-6, "s {s}");
        assert!(
            (rep.params.alpha.value() / base.params.alpha.value() - 1.0).abs() < 1e-6,
            "s {s}"
        );
    }
}

#[test]
fn orientation_flips_and_shifts() {
    let g = grid(EXTERIOR, 61, 0.0, 0);
    let rep = fit_grid(&g.map_heights(|h| -h).unwrap(), &FitOptions::default()).unwrap();
    assert!(rep.orientation.flipped);
    assert_recovered(&rep, EXTERIOR, 1e-3);

    let down = g.map_heights(|h| -h + 0.25).unwrap();
    let (up, o) = orient(&down, true).unwrap();
    assert!(o.flipped);
    let ring: Vec<f64> = up
        .disk_cells()
        .filter(|c| c.2 >= 1.0 - RIM_RING)
        .map(|c| c.3)
        .collect();
    assert!(ring.iter().sum::<f64>().abs() / (ring.len() as f64) < 1e-12);
    let (_, _, _, apex) = up.disk_cells().find(|c| c.2 == 0.0).unwrap();
    assert!(apex > 0.0);

    let (same, o) = orient(&g, false).unwrap();
    assert!(!o.flipped && o.shift == 0.0);
    let bits = |g: &SurfaceGrid| g.heights().iter().map(|h| h.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&same), bits(&g));
}

#[test]
fn empty_and_small_inputs() {
    assert!(matches!(Samples::new(vec![]), Err(Error::Empty(_))));
    let tiny = grid(EXTERIOR, 9, 0.0, 0);
    assert!(fit_grid(&tiny, &FitOptions::default()).is_err());
    let bad = FitOptions {
        bounds: Bounds {
            lower: [1.0, 1.0, 0.0],
            upper: [0.5, 2.0, 1.0],
        },
        ..FitOptions::default()
    };
    let s = radial_reduce(&grid(EXTERIOR, 31, 0.0, 0)).unwrap();
    assert!(fit(&s, &bad).is_err());
}

#[test]
fn text_round_trip_of_synthetic_grid() {
    let g = grid(INTERIOR, 31, 0.01, 1);
    let back = io::parse_surface(&io::write_grid(&g)).unwrap();
    assert_eq!(back.n_disk_points(), g.n_disk_points());
    for (a, b) in g.heights().iter().zip(back.heights()) {
        assert!(a.is_nan() && b.is_nan() || (a - b).abs() <= 1e-11 * a.abs().max(1e-3));
    }
}

fn model_samples(n: usize) -> Vec<RadialSample> {
    let p = CornealParams::unit(EXTERIOR.0, EXTERIOR.1, EXTERIOR.2).unwrap();
    let m = CornealModel::new(p).unwrap();
    (0..n)
        .map(|i| {
            let r = (i % 37) as f64 / 36.0;
            RadialSample {
                r,
                h: m.height(r).unwrap() + 1e-3 * ((i * 7919) % 13) as f64,
            }
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn objective_is_permutation_invariant(seed in any::<u64>()) {
        let p = CornealParams::unit(0.7, 1.1, 0.6).unwrap();
        let v = model_samples(300);
        let mut shuffled = v.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..shuffled.len()).rev() {
            shuffled.swap(i, rng.gen_range(0..=i));
        }
        let a = objective(&p, &Samples::new(v).unwrap()).unwrap();
        let b = objective(&p, &Samples::new(shuffled).unwrap()).unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn outlier_adds_its_square(k in 0usize..300, d in 0.1..2.0f64) {
        let p = CornealParams::unit(EXTERIOR.0, EXTERIOR.1, EXTERIOR.2).unwrap();
        let m = CornealModel::new(p).unwrap();
        let mut v: Vec<RadialSample> = (0..300)
            .map(|i| { let r = i as f64 / 299.0; RadialSample { r, h: m.height(r).unwrap() } })
            .collect();
        v[k].h += d;
        let f = objective(&p, &Samples::new(v).unwrap()).unwrap();
        prop_assert!((f - d * d).abs() <= 1e-12 * d * d);
    }
}
