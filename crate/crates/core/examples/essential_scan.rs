// Essential pairs of a threshold event, and the randomized lemma sweep.

use arw::engine::{CapStyle, Domain, DEFAULT_BUDGET};
use arw::essential::{lemma_sweep, scan, EventSpec, SweepConfig};
use arw::state::{ExplicitArray, InstructionSlot, InstructionSource, ParticleConfig};
use arw::{Result, Topology};

pub fn run_example() -> Result<()> {
    let t = Topology::Line;
    let o = t.origin();
    let event = EventSpec::jump_threshold(t, Domain::with_uniform_cap(vec![o], 2, CapStyle::Jumps)?, vec![2])?;
    let eta = ParticleConfig::from_counts([(o, 1)]);
    let slots = [InstructionSlot::Jump(0), InstructionSlot::Sleep, InstructionSlot::Jump(1), InstructionSlot::Jump(1)];
    let tau = InstructionSource::explicit(t, [(o, ExplicitArray::from_slots(&slots))].into())?;
    println!("event {}: vertex index s-ess p-ess S>0 M(y)", event.name());
    for r in scan(&event, &eta, &tau, DEFAULT_BUDGET)? {
        println!(
            "  {} {} {:?} {:?} {} {}",
            t.format_vertex(r.vertex),
            r.index,
            r.s_essential,
            r.p_essential,
            r.sleeps_positive,
            r.jumps
        );
    }
    let report = lemma_sweep(&SweepConfig {
        topology: t,
        radius: 2,
        jump_cap: None,
        instances: 500,
        seed: 1,
        lambdas: vec![0.5, 1.0, 2.0],
        mus: vec![0.5, 1.0],
        budget: DEFAULT_BUDGET,
    })?;
    println!("sweep: {report}");
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
