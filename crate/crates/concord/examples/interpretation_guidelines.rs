//! How the five published guidelines read the same kappa value.
//!
//! The whole point of verbal scales: a "statistically significant" kappa of
//! 0.3 still reads as fair-at-best everywhere.

use concord::interpret::{interpret, Guideline};

fn main() {
    let values = [0.09, 0.2, 0.32, 0.41, 0.54, 0.61, 0.75, 0.83, 0.95];
    print!("{:>6}", "kappa");
    for g in Guideline::ALL {
        print!("  {:<16}", g.name());
    }
    println!();
    for v in values {
        print!("{v:>6.2}");
        for g in Guideline::ALL {
            print!("  {:<16}", interpret(v, g));
        }
        println!();
    }
}
