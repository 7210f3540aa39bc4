//! Run every named experiment and print its checks.

use asl::experiments::{run_experiment, ExperimentParams, EXPERIMENTS};

fn main() -> asl::Result<()> {
    let p = ExperimentParams { threads: 4, ..Default::default() };
    for name in EXPERIMENTS {
        let r = run_experiment(name, &p)?;
        println!("{name}: {}", if r.pass { "pass" } else { "fail" });
        for c in &r.checks {
            println!("  {} = {:.3e} ({} {:e})", c.name, c.value, c.relation, c.tolerance);
        }
    }
    Ok(())
}
