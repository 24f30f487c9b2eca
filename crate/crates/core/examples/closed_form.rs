// With a generous deadline every peak age is equal and the optimal
// schedule has a closed form.

use std::error::Error;

use mec_aoi::model::Instance;
use mec_aoi::solver::closed_form_schedule;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let instance = Instance::new(
        vec![0.5, 0.1, 0.3, 0.7, 0.4],
        vec![0.2, 0.4, 0.3, 0.6, 0.8],
        1.0,
        7.5,
    )?;
    let r = closed_form_schedule(&instance)?;

    for (k, (t, c)) in r
        .schedule
        .gen_times
        .iter()
        .zip(&r.schedule.comp_starts)
        .enumerate()
    {
        println!("packet {}: generate {t:.4}, compute {c:.4}", k + 1);
    }
    println!("peaks   {:.4?}", r.metrics.peak_values());
    println!("area    {:.4}", r.metrics.area);
    println!("average {:.4}", r.metrics.average);

    // below the threshold the closed form does not apply
    let short = instance.with_deadline(5.0)?;
    if let Err(e) = closed_form_schedule(&short) {
        println!("T = 5: {e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
