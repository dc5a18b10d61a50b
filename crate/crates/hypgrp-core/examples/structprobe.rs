//! Probe automatic-structure construction on a presentation file:
//! `structprobe FILE` prints the converged sizes and timings.

use hypgrp_core::autstruct::{build_structure_auto, BuildOptions};
use hypgrp_core::{KbLimits, Presentation};
use std::time::Instant;

fn main() {
    let path = std::env::args().nth(1).expect("usage: structprobe FILE");
    let p = Presentation::read_file(path.as_ref()).unwrap();
    let t0 = Instant::now();
    match build_structure_auto(&p, &KbLimits::default(), &BuildOptions::default()) {
        Ok((system, s)) => {
            println!(
                "{}: bound={:?} rules={} iterations={} seeded={} candidates={}",
                p.name,
                system.exact_len,
                system.rules.len(),
                s.stats.iterations,
                s.stats.seeded_differences,
                s.stats.candidate_differences,
            );
            println!(
                "  wd1_states={} differences={} gamma={} acceptor_states={} elapsed={:.2?}",
                s.wd1.n_states(),
                s.differences.len(),
                s.gamma,
                s.word_acceptor.n_states(),
                t0.elapsed(),
            );
            let mult_sizes: Vec<usize> = s.multipliers.iter().map(|m| m.n_states()).collect();
            println!("  multiplier_states={mult_sizes:?}");
        }
        Err(e) => println!("{}: FAILED after {:.2?}: {e}", p.name, t0.elapsed()),
    }
}
