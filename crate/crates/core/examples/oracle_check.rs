// Cross-check the general solver against exhaustive lattice search.

use std::error::Error;

use mec_aoi::model::Instance;
use mec_aoi::solver::{general_solve, oracle_error_bound, oracle_solve};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let reference = Instance::new(
        vec![0.5, 0.1, 0.3, 0.7, 0.4],
        vec![0.2, 0.4, 0.3, 0.6, 0.8],
        1.0,
        3.0,
    )?;
    let small = Instance::new(vec![0.4, 0.9, 0.2], vec![0.7, 0.3, 0.5], 0.5, 3.5)?;

    for (name, instance, step) in [
        ("reference T=3", &reference, 0.01),
        ("three packets", &small, 0.02),
    ] {
        let g = general_solve(instance)?;
        let o = oracle_solve(instance, step)?;
        println!(
            "{name}: general {:.6}, lattice {:.6} (step {step}, bound {:.3})",
            g.metrics.area,
            o.metrics.area,
            oracle_error_bound(instance, step)
        );
        println!("  general t = {:.4?}", g.schedule.gen_times);
        println!("  lattice t = {:.4?}", o.schedule.gen_times);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
