//! The VQR classification machinery: the 20-20-10-50 distribution rule
//! mapping percentile ranks to merit classes, and the dual-indicator matrix
//! that either scores an article directly or routes it to informed review.

use concord::dataset::{
    percentile_to_class, ClassificationMatrix, MatrixCell, VqrDistributionRule,
};

fn main() -> concord::Result<()> {
    let rule = VqrDistributionRule::standard();
    println!("distribution rule (percentile rank -> class):");
    for pct in [95.0, 80.0, 70.0, 60.0, 55.0, 50.0, 49.999, 10.0] {
        let class = percentile_to_class(pct, &rule)?;
        println!("  {pct:>7.3} -> {} (score {})", class.label, class.score);
    }

    let matrix = ClassificationMatrix::gev5_2004_2008();
    println!("\ndual-indicator matrix (rows: citation class, cols: journal class):");
    print!("      ");
    for indicator in 1..=4 {
        print!("{indicator:>4}");
    }
    println!();
    for citation in 1..=4 {
        print!("  {citation:>4}");
        for indicator in 1..=4 {
            print!("{:>4}", matrix.classify(citation, indicator)?.token());
        }
        println!();
    }
    println!("\nconcordant indicators score directly; IR cells go to informed review:");
    for (citation, indicator) in [(1, 1), (1, 4), (4, 1), (3, 3)] {
        let cell = matrix.classify(citation, indicator)?;
        let outcome = match cell {
            MatrixCell::Class(_) => format!("scored {}", cell.token()),
            MatrixCell::InformedReview => "informed review".to_string(),
        };
        println!("  citations {citation}, journal {indicator} -> {outcome}");
    }
    Ok(())
}
