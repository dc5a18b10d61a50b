//! Probe the thinness pipeline on one presentation and print everything.

use hypgrp_core::autstruct::{build_structure_auto, BuildOptions, Reducer};
use hypgrp_core::presentation::Presentation;
use hypgrp_core::rewrite::{KbLimits, Rewriter};
use hypgrp_core::thinness::{
    accept_triples, build_frd, build_ngp, compute_thinness, sample_triangle_differences,
    ThinnessOptions,
};
use hypgrp_core::fsa::DetOptions;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let path = args.get(1).map(String::as_str).unwrap_or("presentations/g1.hgp");
    let samples: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(4000);
    let sample_len: usize = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(50);
    let seed: u64 = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(1);
    let cex_cap: usize = args.get(5).and_then(|s| s.parse().ok()).unwrap_or(500);
    let max_rounds: usize = args.get(6).and_then(|s| s.parse().ok()).unwrap_or(10);

    let text = std::fs::read_to_string(path).unwrap();
    let p = Presentation::parse(&text, path).unwrap();
    let (system, s) =
        build_structure_auto(&p, &KbLimits::default(), &BuildOptions::default()).unwrap();
    let rw = Rewriter::new(&system).unwrap();
    let red = Reducer::new(&s, &rw).unwrap();

    // Stage 1: sampling only.
    let d = sample_triangle_differences(&s, &red, samples, sample_len, seed).unwrap();
    eprintln!(
        "sampled: |D|={} d1={} max_len={}",
        d.len(),
        d.d1_len(),
        d.max_len()
    );
    let mut by_len: Vec<(usize, String, bool)> = d
        .iter()
        .enumerate()
        .map(|(i, w)| (w.len(), s.alphabet.format_word(w), d.is_d1(i as u32)))
        .collect();
    by_len.sort();
    for (l, w, f) in &by_len {
        eprintln!("  len {l}: {w}{}", if *f { "  [final]" } else { "" });
    }

    // Stage 2: machines on the sampled set.
    let wr = s.word_acceptor.reverse_with_subsets(None).unwrap();
    let frd = build_frd(&d, &s.word_acceptor, &wr, &s.alphabet, &red, None).unwrap();
    let triples = accept_triples(&frd, &wr, &d, &red, None).unwrap();
    let ngp = build_ngp(&frd, &triples, None).unwrap();
    let gp = ngp
        .determinize(&DetOptions {
            state_cap: Some(1 << 24),
            keep_subsets: false,
        })
        .unwrap();
    let gp_min = gp.minimize();
    eprintln!(
        "machines: frd={} triples={} ngp={} gp={} gp_min={}",
        frd.n_states(),
        triples.len(),
        ngp.n_states(),
        gp.n_states(),
        gp_min.n_states()
    );

    // Stage 3: the full loop.
    let opts = ThinnessOptions {
        samples,
        sample_len,
        seed,
        counterexample_cap: cex_cap,
        max_rounds,
        ..ThinnessOptions::default()
    };
    let r = compute_thinness(&s, &rw, &opts).unwrap();
    eprintln!("status: {:?}", r.status);
    eprintln!(
        "delta_raw={} |D|={} d1={}",
        r.delta_raw,
        r.differences.len(),
        r.differences.d1_len()
    );
    for round in &r.rounds {
        eprintln!(
            "  round {}: |D|={} d1={} frd={} triples={} ngp={} gp={} gp_min={} cex={}",
            round.round,
            round.differences,
            round.d1,
            round.frd_states,
            round.accept_triples,
            round.ngp_states,
            round.gp_states,
            round.gp_min_states,
            round.counterexamples
        );
    }
}
