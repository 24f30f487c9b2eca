// No-wait schedules by water filling over the peak ages.

use std::error::Error;

use mec_aoi::feasibility::{reduced_params, ReducedParams};
use mec_aoi::model::Instance;
use mec_aoi::solver::{nowait_schedule_from_x, water_fill};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // a bare allocation: raise all coordinates to a common level above their floors
    let (x, level) = water_fill(&ReducedParams {
        a: vec![3.0, 1.0, 1.0],
        b: 6.0,
    })?;
    println!("x = {x:?}, level {level}");

    let instance = Instance::new(
        vec![0.5, 0.1, 0.3, 0.7, 0.4],
        vec![0.2, 0.4, 0.3, 0.6, 0.8],
        1.0,
        5.0,
    )?;
    let params = reduced_params(&instance);
    let (x, level) = water_fill(&params)?;
    println!("floors {:?}", params.a);
    println!("peaks  {x:.4?}, level {level:.4}");

    let schedule = nowait_schedule_from_x(&instance, &x)?;
    println!("generation {:.4?}", schedule.gen_times);
    println!("computing  {:.4?}", schedule.comp_starts);
    println!("no waiting: {}", schedule.is_no_wait(&instance, 1e-9));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
