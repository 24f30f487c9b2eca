// Deadline thresholds and regime classification for the five-packet
// reference instance.

use std::error::Error;

use mec_aoi::feasibility::{classify, reduced_params};
use mec_aoi::model::Instance;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let tx = vec![0.5, 0.1, 0.3, 0.7, 0.4];
    let comp = vec![0.2, 0.4, 0.3, 0.6, 0.8];
    let instance = Instance::new(tx, comp, 1.0, 3.0)?;

    let th = classify(&instance).thresholds;
    println!("min deadline      {}", th.min_deadline);
    println!("no-wait threshold {}", th.nowait);
    println!("closed form from  {}", th.closed_form);

    for deadline in [2.9, 3.0, 3.2, 5.0, 7.3, 7.5] {
        let regime = classify(&instance.with_deadline(deadline)?);
        println!("T = {deadline:<4} -> {}", regime.kind);
    }

    let p = reduced_params(&instance.with_deadline(7.5)?);
    println!("lower bounds {:?}, budget {}", p.a, p.b);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
