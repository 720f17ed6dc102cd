//! Fit the embedded area kappas with one area held out, test the held-out
//! point against the 95% prediction band, and render the funnel as SVG.

use concord::dataset::{load_embedded, Weighting, AREA13_LABEL};
use concord::kappa::Sided;
use concord::meta::{band_position, default_m_grid, fit, funnel_points, test_group};
use concord::svg::funnel_svg;

fn main() -> concord::Result<()> {
    let data = load_embedded();
    let weighting = Weighting::Linear;

    let areas = data.area_groups(weighting);
    let fitted: Vec<_> = areas
        .iter()
        .filter(|g| g.label != AREA13_LABEL)
        .cloned()
        .collect();
    let tested: Vec<_> = areas
        .iter()
        .filter(|g| g.label == AREA13_LABEL)
        .cloned()
        .collect();

    let model = fit(&fitted)?;
    println!(
        "fitted {} areas: mu {:.4}, sigma2 {:.4}, total m {}",
        model.n_groups, model.mu_hat, model.sigma2_hat, model.total_m
    );

    let held_out = &tested[0];
    let test = test_group(&model, held_out, Sided::One)?;
    let position = band_position(&model, held_out, 0.95)?;
    println!(
        "{}: kappa {:.2} at m {} -> t {:.3}, one-sided p {:.4}, {} the 95% band",
        held_out.label, held_out.kappa, held_out.m, test.t_stat, test.p_value, position
    );

    let m_values: Vec<u64> = areas.iter().map(|g| g.m).collect();
    let band = funnel_points(&model, &default_m_grid(&m_values, 60), 0.95)?;
    let svg = funnel_svg(
        &model,
        &band,
        &fitted,
        &tested,
        "area kappas vs evaluated products, 95% prediction band",
    );
    let path = std::env::temp_dir().join("concord_funnel_areas_linear.svg");
    std::fs::write(&path, svg)?;
    println!("funnel written to {}", path.display());
    Ok(())
}
