mod common;

use common::{q, transport_vertices};
use tropfw::random;
use tropfw::{central_cayley_cell, solve_fw, solve_transport, Rational, TransportationInstance, WeightVector};

fn random_instance(rng: &mut random::ChaCha8Rng, m: usize, n: usize) -> TransportationInstance {
    let s = random::weights(rng, m).as_slice().to_vec();
    let d = random::weights(rng, n).as_slice().to_vec();
    let payoff = (0..m).map(|_| (0..n).map(|_| random::rational(rng, 3, 4)).collect()).collect();
    TransportationInstance::new(s, d, payoff).unwrap()
}

#[test]
fn optimum_is_best_vertex() {
    let mut rng = random::rng(31);
    for k in 0..60 {
        let (m, n) = (2 + k % 2, 2 + (k / 2) % 3);
        let inst = random_instance(&mut rng, m, n);
        let sol = solve_transport(&inst).unwrap();
        let payoff: Vec<Vec<Rational>> = (0..m).map(|i| (0..n).map(|j| inst.payoff(i, j).clone()).collect()).collect();
        let best = transport_vertices(inst.supplies(), inst.demands(), &payoff)
            .into_iter()
            .map(|(_, v)| v)
            .max()
            .unwrap();
        assert_eq!(sol.value, best);
        assert!(inst.is_feasible(&sol.plan));
        assert_eq!(inst.value_of(&sol.plan), sol.value);
    }
}

#[test]
fn duals_certify_optimality() {
    let mut rng = random::rng(32);
    for k in 0..200 {
        let (m, n) = (1 + k % 5, 2 + k % 4);
        let inst = random_instance(&mut rng, m, n);
        let sol = solve_transport(&inst).unwrap();
        let dual: Rational = inst.supplies().iter().zip(&sol.row_duals).map(|(s, a)| s * a).sum::<Rational>()
            + inst.demands().iter().zip(&sol.col_duals).map(|(d, b)| d * b).sum::<Rational>();
        assert_eq!(dual, sol.value);
        for i in 0..m {
            for j in 0..n {
                let reduced = &sol.row_duals[i] + &sol.col_duals[j] - inst.payoff(i, j);
                assert!(!reduced.is_negative());
                if sol.plan[i][j].is_positive() {
                    assert!(reduced.is_zero());
                }
            }
        }
    }
}

#[test]
fn degenerate_and_unbalanced_inputs() {
    let one = vec![Rational::one()];
    assert!(TransportationInstance::new(one.clone(), vec![q("1/2"), q("1/3")], vec![vec![q("0"), q("0")]]).is_err());
    let inst = TransportationInstance::new(
        vec![q("1/2"), q("1/2")],
        vec![q("1/2"), q("1/2")],
        vec![vec![q("0"), q("0")], vec![q("0"), q("0")]],
    )
    .unwrap();
    assert!(solve_transport(&inst).unwrap().value.is_zero());
}

#[test]
fn central_cell_matches_fermat_weber() {
    let mut rng = random::rng(33);
    for k in 0..200 {
        let (m, n) = (2 + k % 4, 3 + k % 2);
        let data = random::dataset(&mut rng, m, n, 3, 12);
        let w = random::weights(&mut rng, m);
        let c = central_cayley_cell(&data, &w).unwrap();
        let r = solve_fw(&data, &w).unwrap();
        assert_eq!(&c.support, r.graph());
        assert_eq!(&c.optimal_value, r.optimal_value());
        assert!(r.contains(&c.dual_point()));
        for i in 0..m {
            for j in 0..n {
                assert_eq!(c.plan[i][j].is_positive(), c.support.contains(i, j));
            }
        }
    }
}

#[test]
fn weights_selecting_a_cell_form_a_convex_set() {
    let mut rng = random::rng(34);
    let mut pairs = 0;
    for _ in 0..300 {
        let data = random::dataset(&mut rng, 3, 3, 2, 2);
        let w1 = random::weights(&mut rng, 3);
        let w2 = random::weights(&mut rng, 3);
        let g = central_cayley_cell(&data, &w1).unwrap().support;
        if central_cayley_cell(&data, &w2).unwrap().support != g {
            continue;
        }
        pairs += 1;
        let t = random::rational(&mut rng, 1, 7).abs();
        let mix = WeightVector::new(
            w1.as_slice().iter().zip(w2.as_slice()).map(|(a, b)| a * &t + b * (Rational::one() - &t)).collect(),
        )
        .unwrap();
        assert_eq!(central_cayley_cell(&data, &mix).unwrap().support, g);
    }
    assert!(pairs > 10);
}
