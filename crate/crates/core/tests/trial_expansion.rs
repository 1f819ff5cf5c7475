use fskan::{ProblemParams, TrialSolution};
use proptest::prelude::*;

fn solution_strategy() -> impl Strategy<Value = TrialSolution> {
    (
        prop::collection::vec(-1.0f64..1.0, 5..25),
        0.01f64..10.0,
        prop::sample::select(vec![1.0, 2.0, 3.0]),
        0.5f64..2.0,
    )
        .prop_map(|(c, lambda, k, l)| TrialSolution::new(c, lambda, k, l).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wall_conditions_hold_for_any_coefficients(sol in solution_strategy()) {
        let at_wall = sol.eval_all(0.0).unwrap();
        prop_assert_eq!(at_wall[0], 0.0);
        prop_assert_eq!(at_wall[1], 0.0);
        prop_assert!((at_wall[2] - sol.skin_friction().unwrap()).abs() <= 1e-12 * at_wall[2]);
        // F = O(tau^2) and F' = O(tau) next to the wall
        let near = sol.eval_all(1e-8).unwrap();
        prop_assert!(near[0].abs() < 1e-12);
        prop_assert!(near[1].abs() < 1e-5);
    }

    #[test]
    fn derivatives_match_central_differences(sol in solution_strategy()) {
        let h = 1e-5;
        for &tau in &[0.5, 1.0, 2.0, 5.0] {
            let f = sol.eval_all(tau).unwrap();
            let up = sol.eval_all(tau + h).unwrap();
            let down = sol.eval_all(tau - h).unwrap();
            for p in 1..4 {
                let fd = (up[p - 1] - down[p - 1]) / (2.0 * h);
                prop_assert!((fd - f[p]).abs() <= 1e-5 * f[p].abs().max(1.0),
                    "tau={} order {}: fd {} exact {}", tau, p, fd, f[p]);
            }
        }
    }

    #[test]
    fn scaling_is_a_change_of_variable(
        coeffs in prop::collection::vec(-1.0f64..1.0, 5..15),
        lambda in 0.05f64..5.0,
        l in 0.3f64..3.0,
        tau in 0.01f64..20.0,
    ) {
        let scaled = TrialSolution::new(coeffs.clone(), lambda, 2.0, l).unwrap();
        let unit = TrialSolution::new(coeffs, lambda, 2.0, 1.0).unwrap();
        let a = scaled.eval_all(tau).unwrap();
        let b = unit.eval_all(tau / l).unwrap();
        prop_assert_eq!(a[0], b[0]);
        for p in 1..4 {
            let expected = b[p] / l.powi(p as i32);
            prop_assert!((a[p] - expected).abs() <= 1e-12 * expected.abs().max(1.0));
        }
    }

    #[test]
    fn bare_asymptote_far_field(lambda in 0.01f64..10.0, l in 0.5f64..2.0) {
        // p'(s) - 1 = -(lambda / (s + lambda))^2
        let sol = TrialSolution::zeros(8, lambda, 2.0, l).unwrap();
        let slope = sol.eval(50.0 * l, 1).unwrap() * l;
        let expected = 1.0 - (lambda / (50.0 + lambda)).powi(2);
        prop_assert!((slope - expected).abs() < 1e-14);
        prop_assert!((sol.eval(1e8 * l, 1).unwrap() * l - 1.0).abs() < 1e-12);
    }
}

#[test]
fn residual_reflects_ode_terms() {
    let params = ProblemParams::new(2.0, 3.0).unwrap();
    let f = [0.7, 0.4, 1.1, -2.0];
    let beta: f64 = 4.0 / 3.0;
    let expected = -2.0 + 0.7 * 1.1 + beta * (1.0 - 0.16) - 9.0 * (0.4 - 1.0);
    assert!((params.residual(f) - expected).abs() < 1e-14);
}
