//! The level at which a bimodal density's tree splits approximates the
//! saddle value of the density.
//!
//! Run with: cargo run --example bimodal_split

use clustertree::fixtures::{bimodal_mixture_1d, bimodal_mixture_2d};
use clustertree::{split_fixture, Result};

fn main() -> Result<()> {
    // On the line: locate the interior local minimum by dense scan and
    // compare with the tree's split height.
    let spec = bimodal_mixture_1d();
    let report = split_fixture(&spec, 0.0625, 11)?;
    let mut saddle = f64::INFINITY;
    let mut at = f64::NAN;
    for i in 0..=4000 {
        let x = -2.0 + 4.0 * i as f64 / 4000.0;
        let v = spec.evaluate(&[x]);
        if v < saddle {
            saddle = v;
            at = x;
        }
    }
    println!(
        "1-D mixture: tree splits at height {:.6}; density minimum {:.6} at x = {:.3}",
        report.split_height, saddle, at
    );
    println!(
        "difference {:.6} within certified tolerance {:.6}",
        (report.split_height - saddle).abs(),
        report.tolerance
    );
    assert!((report.split_height - saddle).abs() <= report.tolerance);

    // In the plane the symmetric mixture has its saddle at the midpoint.
    let spec2 = bimodal_mixture_2d();
    let report2 = split_fixture(&spec2, 0.125, 7)?;
    let saddle2 = spec2.evaluate(&[0.0, 0.0]);
    println!(
        "\n2-D mixture: tree splits at height {:.6}; f(0,0) = {:.6} (tolerance {:.6})",
        report2.split_height, saddle2, report2.tolerance
    );
    assert!((report2.split_height - saddle2).abs() <= report2.tolerance);

    println!(
        "\n1-D discretization had {} cells, 2-D had {}",
        report.complex.len(),
        report2.complex.len()
    );
    Ok(())
}
