mod common;

use common::running;
use tropfw::random;
use tropfw::{
    cell_from_graph, enumerate_bounded_cells, realize_cell, solve_transport, spanning_forest, weights_from_forest,
    CovectorGraph, Error, Rational, TransportationInstance,
};

#[test]
fn forest_identities_hold() {
    let mut rng = random::rng(41);
    for _ in 0..40 {
        let data = random::dataset(&mut rng, 4, 4, 3, 6);
        for cell in enumerate_bounded_cells(&data).unwrap() {
            let f = spanning_forest(cell.graph()).unwrap();
            assert!(f.graph().is_subgraph_of(cell.graph()));
            assert_eq!(f.component_count(), cell.graph().component_count());
            let nodes = cell.graph().m() + cell.graph().n();
            assert_eq!(f.edges().len(), nodes - f.component_count());
            let lambdas = f.lambdas();
            for j in 0..4 {
                let s: Rational = lambdas.iter().filter(|((_, r), _)| *r == j).map(|(_, l)| l).sum();
                assert_eq!(s, Rational::new(1, 4));
            }
            let w = weights_from_forest(&f, 4).unwrap();
            for i in 0..4 {
                let s: Rational = lambdas.iter().filter(|((l, _), _)| *l == i).map(|(_, l)| l).sum();
                assert_eq!(&s, w.get(i));
            }
        }
    }
}

#[test]
fn forest_plan_is_optimal_for_its_weights() {
    let mut rng = random::rng(42);
    for _ in 0..40 {
        let data = random::dataset(&mut rng, 3, 4, 3, 6);
        for cell in enumerate_bounded_cells(&data).unwrap() {
            let r = realize_cell(&data, cell.graph()).unwrap();
            let inst = TransportationInstance::from_data(&data, &r.weights).unwrap();
            let lambdas = r.forest.lambdas();
            let plan: Vec<Vec<Rational>> = (0..3)
                .map(|i| (0..4).map(|j| lambdas.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)).collect())
                .collect();
            assert!(inst.is_feasible(&plan));
            assert_eq!(inst.value_of(&plan), solve_transport(&inst).unwrap().value);
            assert_eq!(r.result.graph(), cell.graph());
        }
    }
}

#[test]
fn running_example_cells() {
    let data = running();
    let g = CovectorGraph::from_one_based(2, 3, &[(1, 1), (1, 2), (1, 3), (2, 2)]).unwrap();
    let r = realize_cell(&data, &g).unwrap();
    assert_eq!(r.result.vertices(), [data.point(0).clone()]);
    assert_eq!(r.forests_tried, 1);
    let total: Rational = r.weights.as_slice().iter().sum();
    assert_eq!(total, Rational::one());
}

#[test]
fn unbounded_and_empty_graphs_are_rejected() {
    let data = running();
    let unbounded = CovectorGraph::from_one_based(2, 3, &[(1, 1), (2, 3)]).unwrap();
    assert!(matches!(realize_cell(&data, &unbounded), Err(Error::NotBoundedCell(_))));
    let also_unbounded = CovectorGraph::from_one_based(2, 3, &[(1, 1), (1, 2), (2, 2)]).unwrap();
    assert!(!cell_from_graph(&data, &also_unbounded).unwrap().unwrap().is_bounded());
    let empty = CovectorGraph::from_one_based(2, 3, &[(1, 2), (1, 3), (2, 1)]).unwrap();
    assert!(cell_from_graph(&data, &empty).unwrap().is_none());
    assert!(realize_cell(&data, &empty).is_err());
}
