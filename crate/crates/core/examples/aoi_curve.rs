// Sample the age curve of a schedule and render it as CSV and SVG.
//
// Pass a directory to write `curve.csv` and `curve.svg` there.

use std::error::Error;

use mec_aoi::cli::render::{curve_csv, curve_svg, DEFAULT_HEIGHT, DEFAULT_WIDTH};
use mec_aoi::model::{sample_curve, Instance};
use mec_aoi::solver::solve;

fn render() -> Result<(String, String), Box<dyn Error>> {
    let instance = Instance::new(
        vec![0.5, 0.1, 0.3, 0.7, 0.4],
        vec![0.2, 0.4, 0.3, 0.6, 0.8],
        1.0,
        7.5,
    )?;
    let r = solve(&instance)?;
    let curve = sample_curve(&instance, &r.schedule)?;

    println!(
        "{} breakpoints, maxima {:.4?}",
        curve.breakpoints.len(),
        curve.local_maxima()
    );
    println!(
        "trapezoid area {:.6}, exact {:.6}",
        curve.trapezoid_area(),
        r.metrics.area
    );

    let csv = curve_csv(&curve);
    let svg = curve_svg(
        &instance,
        &r.schedule,
        &curve,
        DEFAULT_WIDTH,
        DEFAULT_HEIGHT,
    );
    Ok((csv, svg))
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let (csv, svg) = render()?;
    print!("{csv}");
    println!("svg: {} bytes", svg.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let Some(dir) = std::env::args().nth(1) else {
        return run_example();
    };
    let dir = std::path::Path::new(&dir);
    let (csv, svg) = render()?;
    std::fs::write(dir.join("curve.csv"), csv)?;
    std::fs::write(dir.join("curve.svg"), svg)?;
    println!("wrote {}", dir.display());
    Ok(())
}
