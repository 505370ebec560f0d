// Both derivative formulas against central differences of exact
// probabilities on a two-site event.

use arw::analysis::{polynomial_fit_residual, russo_lambda_residual, russo_mu_residual, DEFAULT_STATE_LIMIT};
use arw::engine::{CapStyle, Domain};
use arw::{EventSpec, ExactEnumerator, ParticleLaw, PhasePoint, Result, Topology, VertexId};

pub fn run_example() -> Result<()> {
    let t = Topology::path(2)?;
    let dom = Domain::with_uniform_cap(vec![VertexId(0), VertexId(1)], 2, CapStyle::Jumps)?;
    let event = EventSpec::jump_threshold(t, dom, vec![1, 1])?;
    let e = ExactEnumerator::new(&event, DEFAULT_STATE_LIMIT)?;
    println!("{} on {t}: {} states, {} in the event", event.name(), e.state_count(), e.member_count());
    for law in [ParticleLaw::Bernoulli { mean: 0.5 }, ParticleLaw::Poisson { mean: 1.0 }] {
        for (l, m) in [(0.5, 0.5), (1.0, 0.3), (2.0, 0.8)] {
            let p = PhasePoint::new(l, m)?;
            let dl = russo_lambda_residual(&e, &p, &law, 1e-4)?;
            let dm = russo_mu_residual(&e, &p, &law, 1e-4)?;
            println!(
                "{:9} ({l}, {m}): P={:.6} dP/dλ {:.8} vs {:.8} (res {:.1e}), dP/dμ {:.8} vs {:.8} (res {:.1e})",
                law.family(),
                e.probability(&p, &law)?,
                dl.difference,
                dl.formula,
                dl.residual,
                dm.difference,
                dm.formula,
                dm.residual
            );
        }
        println!("  polynomial in λ/(1+λ): fit residual {:.1e}", polynomial_fit_residual(&e, 0.5, &law, 20)?);
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
