//! Seeded property checks run from the command line.

use serde_json::json;
use tropfw::phylo::{check_pareto, consensus, tree_to_ultrametric, ultrametric_to_tree};
use tropfw::random;
use tropfw::{central_cayley_cell, enumerate_bounded_cells, realize_cell, solve_fw, WeightVector};

use crate::{pretty, CliResult, Failure};

pub fn run(seed: u64, instances: usize) -> CliResult<String> {
    let mut rng = random::rng(seed);
    let mut failures: Vec<String> = Vec::new();
    let mut cells = 0;
    for k in 0..instances {
        let (m, n) = (2 + k % 4, 3 + (k / 4) % 2);
        let data = random::dataset(&mut rng, m, n, 3, 12);
        let w = random::weights(&mut rng, m);
        let mut check = |what: &str, ok: bool| {
            if !ok {
                failures.push(format!("instance {k}: {what}"));
            }
        };
        let fw = solve_fw(&data, &w)?;
        let central = central_cayley_cell(&data, &w)?;
        check("transport support differs from LP graph", &central.support == fw.graph());
        let enumerated = enumerate_bounded_cells(&data)?;
        check("FW cell missing from the census", enumerated.iter().any(|c| c.graph() == fw.graph()));
        for cell in &enumerated {
            cells += 1;
            let ok = realize_cell(&data, cell.graph()).is_ok_and(|r| r.result.graph() == cell.graph());
            check(&format!("cell {:?} not realized", cell.graph()), ok);
        }

        let leaves = 3 + k % 3;
        let trees: Vec<_> = (0..m).map(|_| random::tree(&mut rng, leaves, 4)).collect::<Result<_, _>>()?;
        let c = consensus(&trees, &w)?;
        check("Pareto violation", check_pareto(&trees, &c.tree).is_clean());
        let copies = consensus(&vec![trees[0].clone(); m], &WeightVector::uniform(m)?)?;
        check("consensus of copies changed the tree", copies.tree == trees[0]);
        let back = ultrametric_to_tree(&tree_to_ultrametric(&trees[0]))?;
        check("ultrametric round trip", back == trees[0]);
    }
    let report = json!({
        "seed": seed,
        "instances": instances,
        "cells_realized": cells,
        "failures": failures,
    });
    if failures.is_empty() {
        Ok(pretty(&report))
    } else {
        Err(Failure { code: 4, message: pretty(&report) })
    }
}
