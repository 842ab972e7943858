//! Monte Carlo moments of both pairs against their exact values.

use idforge::orthopoly::Case;
use idforge::stochastic::{conditional_mean_trend, mc_check_point, standard_statistics, GammaPairSampler, McPoint};

fn main() -> idforge::error::Result<()> {
    let points = [
        McPoint { case: Case::Normal, rho: 0.3, beta: 1.0 },
        McPoint { case: Case::Gamma, rho: 0.7, beta: 2.5 },
    ];
    for p in points {
        for c in mc_check_point(&p, &standard_statistics(), 200_000, 7)? {
            println!(
                "{:<6} {:<8} rho={:<4} est {:>10.4} ± {:<8.4} exact {:>10.4} z {:>6.2}",
                c.case, c.statistic, c.rho, c.estimate.mean, c.estimate.std_error, c.exact, c.z
            );
        }
    }

    let s = GammaPairSampler::new(2.0, 0.5, 7)?;
    let t = conditional_mean_trend(&s, 200_000, 10)?;
    println!("E(Y|X) slope {:.4} intercept {:.4}, max |z| {:.2}", t.slope, t.intercept, t.max_abs_z);
    let t = conditional_mean_trend(&s.with_conditional_scale(0.6), 200_000, 10)?;
    println!("wrong scale: max |z| {:.2}, passed {}", t.max_abs_z, t.passed);
    Ok(())
}
