//! Inspect FRD construction variants on one presentation.

use hypgrp_core::autstruct::{build_structure_auto, BuildOptions, Reducer};
use hypgrp_core::fsa::Automaton;
use hypgrp_core::presentation::Presentation;
use hypgrp_core::rewrite::{KbLimits, Rewriter};
use hypgrp_core::thinness::{accept_triples, build_frd, sample_triangle_differences};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let path = args.get(1).map(String::as_str).unwrap_or("presentations/g1.hgp");
    let samples: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(4000);

    let text = std::fs::read_to_string(path).unwrap();
    let p = Presentation::parse(&text, path).unwrap();
    let (system, s) =
        build_structure_auto(&p, &KbLimits::default(), &BuildOptions::default()).unwrap();
    let rw = Rewriter::new(&system).unwrap();
    let red = Reducer::new(&s, &rw).unwrap();

    let w = &s.word_acceptor;
    let wr = w.reverse_with_subsets(None).unwrap();
    let wr_min = w.reverse().determinize(&Default::default()).unwrap().minimize();
    let product = Automaton::pair_product(w, &wr);
    let prod_min = product.clone().minimize();
    eprintln!(
        "W={} W^R={} (min {}) product={} -> min {}",
        w.n_states(),
        wr.n_states(),
        wr_min.n_states(),
        product.n_states(),
        prod_min.n_states()
    );

    let d = sample_triangle_differences(&s, &red, samples, 50, 1).unwrap();
    eprintln!("sampled |D|={} d1={}", d.len(), d.d1_len());
    let frd = build_frd(&d, w, &wr, &s.alphabet, &red, None).unwrap();
    let trimmed = frd.trim();
    eprintln!("frd={} trimmed={}", frd.n_states(), trimmed.n_states());
    let t_full = accept_triples(&frd, &wr, &d, &red, None).unwrap();
    eprintln!("triples(full)={}", t_full.len());

    // Anatomy: in/out degrees, flags, per-state appearance in triples.
    let n = frd.n_states();
    let mut indeg = vec![0usize; n];
    let mut outdeg = vec![0usize; n];
    for s0 in 0..n as u32 {
        for e in frd.edges_from(s0) {
            outdeg[s0 as usize] += 1;
            indeg[e.to as usize] += 1;
        }
    }
    let mut in_triples = vec![false; n];
    for t in &t_full {
        in_triples[t.a as usize] = true;
        in_triples[t.b as usize] = true;
        in_triples[t.c as usize] = true;
    }
    let fmt = |w: &hypgrp_core::alphabet::Word| -> String {
        if w.is_empty() {
            "e".to_string()
        } else {
            w.iter().map(|&l| s.alphabet.name(l)).collect()
        }
    };
    let mut orphan = 0;
    for st in 0..n {
        let p = frd.payload(st as u32).unwrap();
        let (sig, ws, g, flag) = (p[0], p[1], p[2], p[3]);
        if !in_triples[st] {
            orphan += 1;
            eprintln!(
                "  not-in-triples state {st}: sigma={sig} ws={ws} g={} flag={flag} in={} out={}",
                fmt(d.word(g)),
                indeg[st],
                outdeg[st]
            );
        }
    }
    eprintln!("states never in a triple: {orphan}");
    eprintln!("min(frd)={}", frd.clone().minimize().n_states());
}
