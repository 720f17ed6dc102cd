//! Check the asymptotic kappa standard error against its Monte Carlo spread
//! for the three built-in joint distributions.

use concord::sim::{calibration_joints, se_calibration, SimConfig};
use concord::weights::WeightScheme;

fn main() -> concord::Result<()> {
    // smaller than the acceptance-suite run, enough to see the agreement
    let cfg = SimConfig::new(42, 2000, 1000)?;
    println!(
        "{:<13} {:<11} {:>12} {:>12} {:>9}",
        "joint", "weights", "empirical", "asymptotic", "gap"
    );
    for (name, joint) in calibration_joints() {
        for scheme in [
            WeightScheme::unweighted(4)?,
            WeightScheme::linear(4)?,
            WeightScheme::vqr(),
        ] {
            let report = se_calibration(&joint, &scheme, &cfg)?;
            println!(
                "{:<13} {:<11} {:>12.6} {:>12.6} {:>8.2}%",
                name,
                report.weights,
                report.empirical_sd,
                report.mean_asymptotic_se,
                report.relative_gap * 100.0
            );
        }
    }
    Ok(())
}
