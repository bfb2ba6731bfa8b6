use fracbessel::specfun::FracOrder;
use fracbessel::volterra::*;

#[test]
fn agreement_and_refinement() {
    for &a in &[0.25, 0.5, 0.75] {
        let t = oracle_report(
            FracOrder::new(a).unwrap(),
            2.0,
            &[256, 512, 1024, 2048, 4096],
        )
        .unwrap();
        let last = t.rows.last().unwrap();
        assert!(
            last.max_rel_diff <= 1e-4,
            "alpha {a}: {}",
            last.max_rel_diff
        );
        for w in t.rows.windows(2) {
            // Non-increasing, with a 10% allowance near the roundoff floor.
            assert!(
                w[1].max_rel_diff <= 1.1 * w[0].max_rel_diff,
                "alpha {a}: {:?}",
                t.rows
            );
        }
        let order = t.final_order().unwrap();
        assert!((order - 2.0).abs() <= 0.3, "alpha {a}: order {order}");
    }
}

#[test]
fn grid_shape() {
    let sol = solve_volterra(FracOrder::new(0.4).unwrap(), 1.5, 30).unwrap();
    assert_eq!(sol.len(), 31);
    assert_eq!(sol.derivative_values.len(), 31);
    assert!((sol.x(30) - 1.5).abs() < 1e-15);
    assert_eq!(sol.grid().count(), 31);
}
