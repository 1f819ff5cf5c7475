use std::f64::consts::PI;

use fskan::hermite::eval_expansion;
use fskan::{gauss_hermite_grid, hermite_function, hermite_functions, LogMap};
use proptest::prelude::*;

fn derivative_inner_product(n: usize, m: usize) -> f64 {
    let (nf, sp) = (n as f64, PI.sqrt());
    if m == n {
        sp * (nf + 0.5)
    } else if m + 2 == n {
        -(nf * (nf - 1.0)).sqrt() * sp / 2.0
    } else if n + 2 == m {
        -((nf + 1.0) * (nf + 2.0)).sqrt() * sp / 2.0
    } else {
        0.0
    }
}

#[test]
fn grid_symmetry_and_positivity() {
    for q in 1..=64usize {
        let grid = gauss_hermite_grid(q).unwrap();
        let (x, w) = (grid.nodes(), grid.weights());
        assert_eq!(grid.size(), q);
        for j in 0..q {
            assert!(w[j] > 0.0);
            assert!((x[j] + x[q - 1 - j]).abs() <= 1e-12);
            assert!((w[j] - w[q - 1 - j]).abs() <= 1e-12 * w[j]);
        }
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }
}

#[test]
fn weights_match_standard_gauss_hermite() {
    // classical weights for e^{-x^2} times e^{x_j^2}
    let grid = gauss_hermite_grid(3).unwrap();
    let x = (1.5f64).sqrt();
    let classical = [PI.sqrt() / 6.0, 2.0 * PI.sqrt() / 3.0, PI.sqrt() / 6.0];
    let nodes = [-x, 0.0, x];
    for j in 0..3 {
        assert!((grid.nodes()[j] - nodes[j]).abs() < 1e-15);
        let expected = classical[j] * (nodes[j] * nodes[j]).exp();
        assert!((grid.weights()[j] - expected).abs() < 1e-13 * expected);
    }
}

#[test]
fn orthogonality_under_quadrature() {
    for q in [1usize, 2, 5, 8, 13, 16, 24, 32, 48] {
        let grid = gauss_hermite_grid(q).unwrap();
        let table: Vec<Vec<f64>> = grid
            .nodes()
            .iter()
            .map(|&x| hermite_functions(2 * q, x))
            .collect();
        for n in 0..2 * q {
            for m in 0..2 * q - n {
                let sum: f64 = grid
                    .weights()
                    .iter()
                    .zip(&table)
                    .map(|(w, h)| w * h[n] * h[m])
                    .sum();
                let expected = if n == m { PI.sqrt() } else { 0.0 };
                assert!((sum - expected).abs() < 1e-10, "q={q} n={n} m={m}: {sum}");
            }
        }
    }
}

#[test]
fn derivative_inner_products() {
    let grid = gauss_hermite_grid(40).unwrap();
    for n in 0..30usize {
        for m in 0..30usize {
            let sum = grid.integrate(|x| {
                let mut a = vec![0.0; n + 1];
                a[n] = 1.0;
                let mut b = vec![0.0; m + 1];
                b[m] = 1.0;
                eval_expansion(&a, x)[1] * eval_expansion(&b, x)[1]
            });
            let expected = derivative_inner_product(n, m);
            assert!(
                (sum - expected).abs() < 1e-8,
                "n={n} m={m}: {sum} vs {expected}"
            );
        }
    }
}

#[test]
fn mapped_basis_orthogonality() {
    // substituting z = e^{k w} turns the half-line integral with measure
    // dz / (k z) into the whole-line integral of H~_n H~_m
    let grid = gauss_hermite_grid(40).unwrap();
    for &k in &[0.5, 1.0, 2.0, 3.0] {
        let map = LogMap::new(k).unwrap();
        for n in 0..15usize {
            for m in 0..15usize {
                let full_measure = grid.integrate(|w| {
                    let z = map.inverse(w);
                    let t = map.forward(z).unwrap();
                    let jacobian = k * z;
                    hermite_function(n, t) * hermite_function(m, t) * jacobian / (k * z)
                });
                let expected = if n == m { PI.sqrt() } else { 0.0 };
                assert!((full_measure - expected).abs() < 1e-8);

                // the bare weight 1/z leaves a factor k behind
                let bare_weight = grid.integrate(|w| {
                    let z = map.inverse(w);
                    let t = map.forward(z).unwrap();
                    hermite_function(n, t) * hermite_function(m, t) * (k * z) / z
                });
                assert!((bare_weight - k * expected).abs() < 1e-8 * k);
            }
        }
    }
}

proptest! {
    #[test]
    fn normalized_functions_are_bounded(n in 0usize..120, x in -60.0f64..60.0) {
        prop_assert!(hermite_function(n, x).abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn recurrence_matches_explicit_low_orders(x in -8.0f64..8.0) {
        let g = (-0.5 * x * x).exp();
        let h = hermite_functions(3, x);
        let s2 = 2f64.sqrt();
        prop_assert!((h[0] - g).abs() < 1e-15);
        prop_assert!((h[1] - s2 * x * g).abs() < 1e-14);
        prop_assert!((h[2] - (4.0 * x * x - 2.0) * g / 8f64.sqrt()).abs() < 1e-13);
        prop_assert!((h[3] - (8.0 * x.powi(3) - 12.0 * x) * g / 48f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn chain_factors_match_finite_differences(
        coeffs in prop::collection::vec(-1.0f64..1.0, 1..8),
        k in 0.5f64..3.0,
    ) {
        // F(z) = g(ln(z)/k) with g a short Hermite expansion
        let map = LogMap::new(k).unwrap();
        let z = 1.5;
        let h = 1e-4;
        let g_at = |z: f64| eval_expansion(&coeffs, map.forward(z).unwrap());
        let g = g_at(z);
        let exact = map.chain_factors(z, [g[1], g[2], g[3]]).unwrap();
        let value = |z: f64| g_at(z)[0];
        let first = |z: f64| map.chain_factors(z, { let g = g_at(z); [g[1], g[2], g[3]] }).unwrap()[0];
        let second = |z: f64| map.chain_factors(z, { let g = g_at(z); [g[1], g[2], g[3]] }).unwrap()[1];
        // fourth-order central stencil
        let stencil = |f: &dyn Fn(f64) -> f64| {
            (-f(z + 2.0 * h) + 8.0 * f(z + h) - 8.0 * f(z - h) + f(z - 2.0 * h)) / (12.0 * h)
        };
        let fd = [stencil(&value), stencil(&first), stencil(&second)];
        for p in 0..3 {
            let scale = exact[p].abs().max(1e-2);
            prop_assert!((fd[p] - exact[p]).abs() <= 1e-6 * scale,
                "order {}: fd {} exact {}", p + 1, fd[p], exact[p]);
        }
    }
}
