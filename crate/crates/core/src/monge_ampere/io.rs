use serde_json::{json, Value};

use super::blaschke::BlaschkeField;
use super::solver::MASolution;

/// JSON dump: grid metadata, v per node, and the Blaschke field if given.
pub fn solution_json(sol: &MASolution, field: Option<&BlaschkeField>) -> Value {
    let g = sol.grid();
    let nodes: Vec<Value> = (0..g.len())
        .map(|k| {
            let x = g.position(k);
            json!([x[0], x[1], sol.v(k)])
        })
        .collect();
    let mut out = json!({
        "schema": 1,
        "grid": g.meta(),
        "iterations": sol.iterations(),
        "residual": sol.residual(),
        "v0": sol.value_at([0.0, 0.0]),
        "min": {"x": sol.minimum().0, "v": sol.minimum().1},
        "nodes": nodes,
    });
    if let Some(f) = field {
        out["blaschke"] = json!({
            "positions": f.positions,
            "metric": f.metric,
            "pick_norm_sq": f.pick_norm_sq,
            "median_pick_norm_sq": f.median_pick_norm_sq(),
        });
    }
    out
}

/// CSV with columns x, y, v, h11, h12, h22, pick_norm_sq (blank off the field).
pub fn solution_csv(sol: &MASolution, field: Option<&BlaschkeField>) -> String {
    let g = sol.grid();
    let mut by_node = vec![None; g.len()];
    if let Some(f) = field {
        for (i, &k) in f.nodes.iter().enumerate() {
            by_node[k] = Some(i);
        }
    }
    let mut out = String::from("x,y,v,h11,h12,h22,pick_norm_sq\n");
    for k in 0..g.len() {
        let x = g.position(k);
        out.push_str(&format!("{},{},{}", x[0], x[1], sol.v(k)));
        match (field, by_node[k]) {
            (Some(f), Some(i)) => {
                let m = f.metric[i];
                out.push_str(&format!(",{},{},{},{}\n", m[0], m[1], m[2], f.pick_norm_sq[i]));
            }
            _ => out.push_str(",,,,\n"),
        }
    }
    out
}
