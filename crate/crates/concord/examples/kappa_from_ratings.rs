//! Weighted Cohen's kappa from rating pairs: table construction, the three
//! built-in weight schemes, confidence intervals, and the significance test
//! with its caveat.

use concord::categories::{CategorySet, RatingPair};
use concord::interpret::{interpret, Guideline};
use concord::kappa::{confidence_interval, significance_test, weighted_kappa, Sided};
use concord::table::ContingencyTable;
use concord::weights::WeightScheme;

fn main() -> concord::Result<()> {
    // two raters grading forty units on the A-D ladder
    let cats = CategorySet::vqr_default();
    let grades = [
        (0, 0, 9),
        (0, 1, 3),
        (1, 1, 8),
        (1, 2, 4),
        (2, 2, 6),
        (2, 3, 2),
        (3, 3, 7),
        (3, 0, 1),
    ];
    let mut pairs = Vec::new();
    for &(a, b, copies) in &grades {
        for i in 0..copies {
            pairs.push(RatingPair::new(format!("unit-{a}{b}{i}"), a, b));
        }
    }
    let table = ContingencyTable::from_pairs(&pairs, &cats)?;
    println!("n = {}, row sums {:?}", table.n(), table.row_sums());

    for scheme in [
        WeightScheme::unweighted(4)?,
        WeightScheme::linear(4)?,
        WeightScheme::vqr(),
    ] {
        let est = weighted_kappa(&table, &scheme)?;
        let (lo, hi) = confidence_interval(&est, 0.95)?;
        let test = significance_test(&est, Sided::One)?;
        println!(
            "{:<11} kappa {:.4}  (p_o {:.4}, p_e {:.4})  se {:.4}  95% CI [{:.4}, {:.4}]  z {:.2} p {:.4}",
            scheme.name(),
            est.kappa,
            est.p_o_w,
            est.p_e_w,
            est.se,
            lo,
            hi,
            test.z,
            test.p_value,
        );
        println!(
            "            reads as '{}' (Landis-Koch); note: {}",
            interpret(est.kappa, Guideline::LandisKoch),
            test.caveat
        );
    }
    Ok(())
}
