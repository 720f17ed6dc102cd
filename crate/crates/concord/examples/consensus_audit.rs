//! Derive the consensus-group audit table from the four published input
//! rows and print it with its assumptions.

use concord::audit::{concordance_rate, consensus_estimate, ClassCounts, CLASS_LABELS};
use concord::dataset::load_embedded;

fn main() -> concord::Result<()> {
    let inputs = &load_embedded().audit_inputs;
    let table = consensus_estimate(
        ClassCounts::new(inputs.biblio),
        ClassCounts::new(inputs.ir),
        ClassCounts::new(inputs.concordant_peers),
        ClassCounts::new(inputs.concordant_biblio_ir),
    )?;

    println!("{:>44}  {:>5} {:>5} {:>5} {:>5}  {:>6}", "", "A", "B", "C", "D", "total");
    let row = |label: &str, counts: &ClassCounts| {
        println!(
            "{:>44}  {:>5} {:>5} {:>5} {:>5}  {:>6}",
            label,
            counts.counts[0],
            counts.counts[1],
            counts.counts[2],
            counts.counts[3],
            counts.total()
        );
    };
    row("(1) bibliometric evaluation", &table.biblio);
    row("(2) informed peer review", &table.ir);
    row("(3) concordant referee judgments", &table.concordant_peers);
    row("(4) biblio and review agree", &table.concordant_biblio_ir);
    row("(5=2-3) decided by consensus groups", &table.gev_evaluated);
    print!("{:>44} ", "(6=5/2) share decided by consensus groups");
    for share in table.gev_share {
        match share {
            Some(s) => print!(" {:>4.1}%", s * 100.0),
            None => print!(" {:>5}", "na"),
        }
    }
    println!("  {:>5.1}%", table.gev_share_total * 100.0);
    print!("{:>44} ", "(7=4-3) consensus decisions matching biblio");
    for v in table.gev_concordant_with_biblio {
        print!(" {v:>5}");
    }
    println!("  {:>6}", table.gev_concordant_total);

    println!("\nassumptions behind the lower bounds:");
    for a in &table.assumptions {
        println!("  - {a}");
    }

    // the concordant-D comparison that motivates treating row 5 as a floor
    let data = load_embedded();
    let other = concordance_rate(
        data.other_areas_concordant_d.concordant,
        data.other_areas_concordant_d.total,
    )?;
    let area13 = concordance_rate(
        data.area13_concordant_d.concordant,
        data.area13_concordant_d.total,
    )?;
    println!(
        "\nconcordant-{} rates: other areas {}/{} = {:.1}% (reports print {:.1}%), economics/statistics {}/{} = {:.1}%",
        CLASS_LABELS[3],
        other.concordant,
        other.total,
        other.percent_1dp(),
        data.other_areas_concordant_d.printed_percent,
        area13.concordant,
        area13.total,
        area13.percent_1dp()
    );
    Ok(())
}
