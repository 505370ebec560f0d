// The odometer and final configuration do not depend on toppling order.

use arw::engine::{check_abelian, Domain, Stabilizer, Verdict, DEFAULT_BUDGET};
use arw::state::{ActivityFunction, InstructionSource, ParticleConfig};
use arw::{ParticleLaw, RandomSource, Result, Topology};

pub fn run_example() -> Result<()> {
    let t = Topology::Grid2d;
    let st = Stabilizer::new(t, Domain::ball(&t, t.origin(), 2)?)?;
    let law = ParticleLaw::poisson(0.8)?;
    let mut passed = 0;
    for r in 0..50 {
        let src = RandomSource::new(11, r);
        let eta = ParticleConfig::sample(st.domain().sites(), &law, &src, &ActivityFunction::AllActive);
        let tau = InstructionSource::lazy(t, src, 1.0)?;
        let report = check_abelian(&st, &eta, &tau, 10, r, DEFAULT_BUDGET)?;
        if report.verdict == Verdict::Pass {
            passed += 1;
        } else {
            println!("instance {r}: {:?} {:?}", report.verdict, report.witness);
        }
    }
    println!("{passed}/50 instances agree across 10 random orders and FIFO");
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
