// At the minimum deadline packets must queue at the server; the general
// solver handles this regime.

use std::error::Error;

use mec_aoi::model::{aoi_area, Instance};
use mec_aoi::solver::{general_solve, greedy_schedule};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let instance = Instance::new(
        vec![0.5, 0.1, 0.3, 0.7, 0.4],
        vec![0.2, 0.4, 0.3, 0.6, 0.8],
        1.0,
        3.0,
    )?;

    let greedy = greedy_schedule(&instance)?;
    println!(
        "greedy  t = {:.4?}, area {:.4}",
        greedy.gen_times,
        aoi_area(&instance, &greedy)?
    );

    let r = general_solve(&instance)?;
    println!("optimal t = {:.4?}", r.schedule.gen_times);
    println!("        c = {:.4?}", r.schedule.comp_starts);
    println!("area {:.4}, peaks {:.4?}", r.metrics.area, r.metrics.peaks);

    // the last packet may be generated anywhere in [1.6, 1.8] at equal cost
    for t5 in [1.6, 1.7, 1.8] {
        let mut s = r.schedule.clone();
        s.gen_times[4] = t5;
        println!("t_5 = {t5}: area {:.6}", aoi_area(&instance, &s)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
