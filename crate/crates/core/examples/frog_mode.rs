// With λ = 0 and a single active site the dynamics is the frog model:
// woken particles walk until they leave the ball and never sleep.

use arw::engine::{Domain, StabilizeOptions, Stabilizer};
use arw::state::{ActivityFunction, InstructionSource, ParticleConfig};
use arw::{ParticleLaw, RandomSource, Result, Topology};

pub fn run_example() -> Result<()> {
    let t = Topology::Line;
    let o = t.origin();
    let st = Stabilizer::new(t, Domain::ball(&t, o, 10)?)?;
    let xi = ActivityFunction::Delta { at: o };
    let law = ParticleLaw::poisson(1.0)?;
    for r in 0..5 {
        let src = RandomSource::new(21, r);
        let eta = ParticleConfig::sample(st.domain().sites(), &law, &src, &xi);
        let tau = InstructionSource::lazy(t, src, 0.0)?;
        let res = st.run(&eta, &tau, &StabilizeOptions::default())?;
        let woken = res.jumps.iter().filter(|&&m| m > 0).count();
        println!(
            "replicate {r}: η(o)={} M(o)={} sites that jumped {woken}/{} sleeps used {}",
            eta.count(o),
            res.jumps_at(o),
            res.sites.len(),
            res.sleeps_used
        );
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
