// How the optimal schedule changes as the deadline grows: the solver
// moves from queueing to no-wait to equal peaks.

use std::error::Error;

use mec_aoi::model::Instance;
use mec_aoi::solver::solve;

fn variance(v: &[f64]) -> f64 {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (v.len() - 1) as f64
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let base = Instance::new(
        vec![0.5, 0.1, 0.3, 0.7, 0.4],
        vec![0.2, 0.4, 0.3, 0.6, 0.8],
        1.0,
        3.0,
    )?;
    println!(
        "{:>5} {:>15} {:>10} {:>9} {:>10}",
        "T", "regime", "method", "average", "peak var"
    );
    for i in 0..=10 {
        let deadline = 3.0 + 0.5 * f64::from(i);
        let r = solve(&base.with_deadline(deadline)?)?;
        println!(
            "{deadline:>5.1} {:>15} {:>10} {:>9.4} {:>10.2e}",
            r.regime.kind.to_string(),
            r.method.to_string(),
            r.metrics.average,
            variance(&r.metrics.peak_values())
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
