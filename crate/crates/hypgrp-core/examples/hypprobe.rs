//! Diagnostic: run the geodesic-bigon verification loop and print the
//! per-round table plus the closure constants.

use hypgrp_core::autstruct::{build_structure_auto, BuildOptions};
use hypgrp_core::hyperbolicity::{verify_hyperbolic, VerifyOptions};
use hypgrp_core::rewrite::KbLimits;
use hypgrp_core::{Presentation, Rewriter};

fn main() {
    let path = std::env::args().nth(1).expect("usage: hypprobe FILE");
    let text = std::fs::read_to_string(&path).unwrap();
    let p = Presentation::parse(&text, "probe").unwrap();
    let (system, s) =
        build_structure_auto(&p, &KbLimits::default(), &BuildOptions::default()).unwrap();
    let rw = Rewriter::new(&system).unwrap();
    let report = verify_hyperbolic(&s, &rw, &VerifyOptions::default()).unwrap();
    println!("halted: {} after n={}", report.halted, report.n_final);
    println!("gamma: {:?} gamma': {:?}", report.gamma, report.gamma_prime);
    for r in &report.rounds {
        println!(
            "n={} |WD|={} wd={} ge={}->{} gw={}->{} t={} cex={}",
            r.n,
            r.differences,
            r.wd_states,
            r.ge_states,
            r.ge_min_states,
            r.gw_states,
            r.gw_min_states,
            r.t_states,
            r.counterexamples,
        );
    }
    println!(
        "papasoglu vertex: {:?} midedge: {:?}",
        report.papasoglu_vertex, report.papasoglu_midedge
    );
}
