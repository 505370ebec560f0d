// Bisection for the density at which the activity proxy crosses ½, with
// the bounds λ/(1+λ) and 1 alongside.

use arw::analysis::{estimate_critical_curve, slope_bound_check, ActivityConfig, CurveConfig};
use arw::{Result, Topology};

pub fn run_example() -> Result<()> {
    let activity = ActivityConfig { radius: 32, threshold: 8, samples: 200, seed: 4, ..ActivityConfig::defaults(Topology::Line) };
    let cfg = CurveConfig { tol: 0.1, ..CurveConfig::new(vec![0.5, 1.0, 2.0], activity) };
    let curve = estimate_critical_curve(&cfg)?;
    println!("lambda,zeta,ci_lo,ci_hi,lower,upper");
    for p in &curve.points {
        println!("{},{:.4},{:.4},{:.4},{:.4},{}", p.lambda, p.zeta, p.ci_lo, p.ci_hi, p.lower_bound, p.upper_bound);
    }
    for s in slope_bound_check(&curve) {
        println!("slope {} -> {}: rise {:.4}, allowed {:.4}, {}", s.lambda_a, s.lambda_b, s.rise, s.allowed, s.pass);
    }
    println!("{}", curve.note);
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
