// The coupling source: marginals match the model's laws and draws are
// monotone in the parameters, replicate by replicate.

use arw::{ParticleLaw, RandomSource, Result, VertexId};

pub fn run_example() -> Result<()> {
    let n = 20_000u64;
    let law = ParticleLaw::poisson(1.0)?;
    let mut particles = [0u64; 5];
    let mut sleeps = [0u64; 5];
    let mut monotone = true;
    for i in 0..n {
        let src = RandomSource::new(3, i / 100);
        let x = VertexId(i % 100);
        particles[(src.particles(x, &law) as usize).min(4)] += 1;
        sleeps[(src.sleeps(x, 0, 1.0)? as usize).min(4)] += 1;
        monotone &= src.particles(x, &law) <= src.particles(x, &law.with_mean(1.5));
        monotone &= src.sleeps(x, 0, 1.0)? <= src.sleeps(x, 0, 2.0)?;
    }
    println!("k  particles (expected)   sleeps (expected)");
    for k in 0..5u32 {
        let (pe, se) = if k < 4 {
            (law.pmf(k), 0.5f64.powi(k as i32 + 1))
        } else {
            (law.tail_from(4), 0.5f64.powi(4))
        };
        println!(
            "{k}{} {:.4} ({:.4})        {:.4} ({:.4})",
            if k == 4 { "+" } else { " " },
            particles[k as usize] as f64 / n as f64,
            pe,
            sleeps[k as usize] as f64 / n as f64,
            se
        );
    }
    println!("monotone in μ and λ on every draw: {monotone}");
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
