// Stabilize a ball on the line, from a sampled configuration and from a
// hand-written text instance.

use arw::engine::{Domain, StabilizeOptions, Stabilizer};
use arw::state::{ActivityFunction, Instance, InstructionSource, ParticleConfig};
use arw::{ParticleLaw, RandomSource, Result, Topology};

const INSTANCE: &str = "\
topology line
eta 0 2
eta 1 rho
tau 0 s j1 j0 s s j1
tau 1 j1 j0
tau -1 j1
tail 5 1.0
";

pub fn run_example() -> Result<()> {
    let t = Topology::Line;
    let st = Stabilizer::new(t, Domain::ball(&t, t.origin(), 5)?)?;
    let src = RandomSource::new(7, 0);
    let eta = ParticleConfig::sample(st.domain().sites(), &ParticleLaw::poisson(0.8)?, &src, &ActivityFunction::AllActive);
    let tau = InstructionSource::lazy(t, src, 1.0)?;
    let r = st.run(&eta, &tau, &StabilizeOptions::default())?;
    println!("sampled: {} particles, halt {:?}", eta.total(), r.halt);
    for (i, &x) in r.sites.iter().enumerate() {
        println!("  {:>3}  m={:<4} M={}", t.format_vertex(x), r.m.as_ref().map_or(0, |m| m[i]), r.jumps[i]);
    }

    let inst = Instance::parse(INSTANCE)?;
    assert_eq!(Instance::parse(&inst.format())?, inst);
    let st = Stabilizer::new(inst.topology, Domain::ball(&inst.topology, t.origin(), 1)?)?;
    let r = st.run(&inst.eta, &inst.source()?, &StabilizeOptions::default())?;
    println!("text instance: M={:?} m={:?}", r.jumps, r.m);
    for (x, s) in r.final_config.iter() {
        println!("  final {} {s}", t.format_vertex(x));
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
