// Event probabilities do not decrease into the semi-line region, checked
// exactly on a small event and by coupled replicates on a large one.

use arw::analysis::{monotone_path_check, SemiLine};
use arw::engine::{CapStyle, Domain, DEFAULT_BUDGET};
use arw::{EventSpec, ParticleLaw, PhasePoint, Result, Topology};

pub fn run_example() -> Result<()> {
    let t = Topology::Line;
    let law = ParticleLaw::Poisson { mean: 1.0 };
    let p = PhasePoint::new(1.0, 0.3)?;
    let region = SemiLine::new(p);
    let small = EventSpec::jump_threshold(
        t,
        Domain::with_uniform_cap(t.ball(t.origin(), 1)?, 2, CapStyle::Jumps)?,
        vec![1, 1, 1],
    )?;
    for s in [0.25, 0.5, 1.0] {
        let q = region.boundary(s)?;
        let r = monotone_path_check(&small, &p, &q, &law, 0, 0, DEFAULT_BUDGET)?;
        println!("exact ({}, {:.3}): {:.6} <= {:.6} {}", q.lambda, q.mu, r.prob_p, r.prob_q, r.pass);
    }
    let sites = t.ball(t.origin(), 16)?;
    let mut h = vec![0; sites.len()];
    h[0] = 6;
    let big = EventSpec::jump_threshold(t, Domain::uncapped(sites)?, h)?;
    let q = region.boundary(1.0)?;
    let r = monotone_path_check(&big, &p, &q, &law, 2000, 3, DEFAULT_BUDGET)?;
    println!(
        "coupled M_B16(o) > 5: {:.4} <= {:.4} + 2*{:.4} {}",
        r.prob_p, r.prob_q, r.joint_se, r.pass
    );
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
