mod common;

use common::{classical_i0, rel};
use fracbessel::cornea::*;
use proptest::prelude::*;

fn fit_box() -> impl Strategy<Value = CornealParams> {
    (0.2..2.0f64, 0.5..3.0f64, 0.1..=1.0f64)
        .prop_map(|(a, b, al)| CornealParams::unit(a, b, al).unwrap())
}

#[test]
fn alpha_one_is_classical_model() {
    for &(a, b) in &[(0.3, 0.7), (1.0, 1.0), (2.0, 2.5)] {
        let p = CornealParams::unit(a, b, 1.0).unwrap();
        let m = CornealModel::new(p).unwrap();
        for k in 0..=20 {
            let r = k as f64 / 20.0;
            let want = b / a * (1.0 - classical_i0(a.sqrt() * r) / classical_i0(a.sqrt()));
            let got = m.height(r).unwrap();
            // Absolute near the rim, where the height itself vanishes.
            assert!(
                (got - want).abs() <= 1e-10 * want.abs().max(b / a * 1e-3),
                "r {r}: {got} {want}"
            );
        }
    }
}

#[test]
fn alpha_one_satisfies_polar_equation() {
    // -(1/r)(r h')' + a h = b by central differences.
    let (a, b) = (0.9, 1.3);
    let m = CornealModel::new(CornealParams::unit(a, b, 1.0).unwrap()).unwrap();
    let d = 1e-3;
    for k in 1..10 {
        let r = k as f64 / 10.0;
        let (hm, h0, hp) = (
            m.height(r - d).unwrap(),
            m.height(r).unwrap(),
            m.height(r + d).unwrap(),
        );
        let second = (hp - 2.0 * h0 + hm) / (d * d);
        let first = (hp - hm) / (2.0 * d);
        let residual = -(second + first / r) + a * h0 - b;
        assert!(residual.abs() <= 1e-6, "r {r}: {residual}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shape_in_fit_box(p in fit_box()) {
        let prof = height_profile(&p, 201).unwrap();
        prop_assert_eq!(prof.last().unwrap().1, 0.0);
        prop_assert!(prof.iter().all(|&(_, h)| h >= 0.0));
        prop_assert!(prof.windows(2).all(|w| w[1].1 < w[0].1));
    }

    #[test]
    fn apex_is_flat(p in fit_box()) {
        let m = CornealModel::new(p).unwrap();
        let h0 = m.height(0.0).unwrap();
        let (r1, r2) = (1e-3, 2e-3);
        let slope = ((m.height(r2).unwrap() - h0) - (m.height(r1).unwrap() - h0)) / (r2 - r1);
        prop_assert!(slope.abs() / h0 <= 1e-2);
    }

    #[test]
    fn height_scales_with_b(p in fit_box(), s in 0.1..10.0f64) {
        let q = CornealParams::unit(p.a, s * p.b, p.alpha.value()).unwrap();
        let (m, n) = (CornealModel::new(p).unwrap(), CornealModel::new(q).unwrap());
        for r in [0.0, 0.3, 0.9] {
            let (hp, hq) = (m.height(r).unwrap(), n.height(r).unwrap());
            prop_assert!(rel(hq, s * hp) < 1e-13);
        }
    }
}
