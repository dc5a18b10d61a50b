//! Compare the raw and swept difference machines on the final difference
//! set of one presentation.

use hypgrp_core::autstruct::{build_structure_auto, BuildOptions, Reducer};
use hypgrp_core::presentation::Presentation;
use hypgrp_core::rewrite::{KbLimits, Rewriter};
use hypgrp_core::thinness::{accept_triples, build_frd, compute_thinness, ThinnessOptions};

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

    let opts = ThinnessOptions {
        samples,
        seed: 1,
        ..ThinnessOptions::default()
    };
    let r = compute_thinness(&s, &rw, &opts).unwrap();
    let d = &r.differences;
    eprintln!("final |D|={} d1={} status={:?}", d.len(), d.d1_len(), r.status);

    std::env::set_var("HYPGRP_NO_SWEEP", "1");
    let raw = build_frd(d, w, &wr, &s.alphabet, &red, None).unwrap();
    std::env::remove_var("HYPGRP_NO_SWEEP");
    let swept = build_frd(d, w, &wr, &s.alphabet, &red, None).unwrap();
    eprintln!("raw={} swept={}", raw.n_states(), swept.n_states());

    let triples = accept_triples(&raw, &wr, d, &red, None).unwrap();
    let n = raw.n_states();
    let mut in_triple = vec![false; n];
    for t in &triples {
        in_triple[t.a as usize] = true;
        in_triple[t.b as usize] = true;
        in_triple[t.c as usize] = true;
    }
    let mut indeg = vec![0usize; n];
    for st in 0..n as u32 {
        for e in raw.edges_from(st) {
            indeg[e.to as usize] += 1;
        }
    }
    let fmt = |word: &hypgrp_core::alphabet::Word| -> String {
        if word.is_empty() {
            "e".to_string()
        } else {
            word.iter().map(|&l| s.alphabet.name(l)).collect()
        }
    };
    for st in 0..n {
        let dead_end = raw.edges_from(st as u32).is_empty();
        if dead_end && !in_triple[st] {
            let p = raw.payload(st as u32).unwrap();
            // Incoming labels for context.
            let mut via = Vec::new();
            for src in 0..n as u32 {
                for e in raw.edges_from(src) {
                    if e.to == st as u32 {
                        let (x, y) = raw.pair_labels().decode(e.label);
                        via.push(format!(
                            "{}<-({},{})",
                            src,
                            x.map(|l| s.alphabet.name(l)).unwrap_or("$"),
                            y.map(|l| s.alphabet.name(l)).unwrap_or("$"),
                        ));
                    }
                }
            }
            eprintln!(
                "dead-end {st}: sigma={} ws={} g={} flag={} indeg={} via={}",
                p[0],
                p[1],
                fmt(d.word(p[2])),
                p[3],
                indeg[st],
                via.join(" ")
            );
        }
    }
}
