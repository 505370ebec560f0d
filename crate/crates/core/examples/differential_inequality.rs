// The comparison between the two partial derivatives on a grid of phase
// points, with Poisson initial data.

use arw::analysis::{diff_inequality_check, DEFAULT_STATE_LIMIT};
use arw::engine::{CapStyle, Domain};
use arw::{EventSpec, ExactEnumerator, ParticleLaw, PhasePoint, Result, Topology};

pub fn run_example() -> Result<()> {
    let t = Topology::Line;
    let sites = t.ball(t.origin(), 1)?;
    let event = EventSpec::jump_threshold(t, Domain::with_uniform_cap(sites, 2, CapStyle::Jumps)?, vec![2, 0, 0])?;
    let e = ExactEnumerator::new(&event, DEFAULT_STATE_LIMIT)?;
    let law = ParticleLaw::Poisson { mean: 1.0 };
    println!("   λ     μ     -dP/dλ    dP/dμ/(λ(1+λ))  pass");
    for l in [0.5, 1.0, 2.0] {
        for m in [0.3, 0.8, 1.5] {
            let r = diff_inequality_check(&e, &PhasePoint::new(l, m)?, &law, 1e-4)?;
            println!("{l:5} {m:5}  {:10.6}  {:10.6}      {}", r.lhs, r.rhs, r.pass);
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
