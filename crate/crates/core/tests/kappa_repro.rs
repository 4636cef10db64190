use std::collections::BTreeMap;

use zetamoll::main_terms::{evaluate_kappa, KappaConfig};
use zetamoll::poly::{Poly, QBasis};

fn p0_from_basis(corrections: &[(u32, f64)]) -> Vec<f64> {
    let mut p = Poly(vec![0.0, 1.0]);
    for &(j, c) in corrections {
        p = p.add(&Poly::x_one_minus_x_pow(j).scale(c));
    }
    p.0
}

fn main_config(quad: usize) -> KappaConfig {
    KappaConfig {
        schema_version: 1,
        d: 1,
        k_max: 3,
        theta: 4.0 / 7.0,
        r: 1.3036,
        p: BTreeMap::from([
            (
                0u32,
                p0_from_basis(&[(1, 0.261076), (2, -1.071007), (3, -0.236840), (4, 0.260233)]),
            ),
            (2u32, vec![0.0, 1.048274, 1.319912, -0.940058]),
            (3u32, vec![0.0, 0.522811, -0.686510, -0.049923]),
        ]),
        q: QBasis {
            c0: 0.490464,
            odd: vec![0.636851, -0.159327, 0.032011],
        },
        quad_order: quad,
        n_max: None,
    }
}

fn simple_zeros_config(quad: usize) -> KappaConfig {
    KappaConfig {
        schema_version: 1,
        d: 1,
        k_max: 3,
        theta: 4.0 / 7.0,
        r: 1.1167,
        p: BTreeMap::from([
            (
                0u32,
                p0_from_basis(&[(1, 0.052703), (2, -0.657999), (3, -0.003193), (4, -0.101832)]),
            ),
            (2u32, vec![0.0, 1.049837, -0.097446]),
            (3u32, vec![0.0, 0.035113, -0.156465]),
        ]),
        q: QBasis {
            c0: 0.483777,
            odd: vec![1.0 - 0.483777],
        },
        quad_order: quad,
        n_max: None,
    }
}

#[test]
fn scratch_kappa() {
    let t0 = std::time::Instant::now();
    let v = evaluate_kappa(&main_config(20)).unwrap();
    println!("main: c={} kappa={} ({:?})", v.c, v.kappa, t0.elapsed());
    let t1 = std::time::Instant::now();
    let v2 = evaluate_kappa(&simple_zeros_config(20)).unwrap();
    println!("simple: c={} kappa={} ({:?})", v2.c, v2.kappa, t1.elapsed());
    assert!((v.kappa - 0.417293962).abs() < 5e-4, "kappa={}", v.kappa);
    assert!((v2.kappa - 0.407511457).abs() < 5e-4, "kappa*={}", v2.kappa);
}

#[test]
fn scratch_theta_slice_and_quad() {
    // theta slice
    for th in [0.5, 6.0 / 11.0, 4.0 / 7.0] {
        let mut cfg = main_config(20);
        cfg.theta = th;
        let v = evaluate_kappa(&cfg).unwrap();
        println!("theta={th}: kappa={}", v.kappa);
    }
    // quadrature convergence
    for order in [16, 24, 32, 48, 64] {
        let t = std::time::Instant::now();
        let v = evaluate_kappa(&main_config(order)).unwrap();
        println!("order={order}: c={:.15} kappa={:.12} ({:?})", v.c, v.kappa, t.elapsed());
    }
}
