//! Variant refinement probe: instead of walking the decoded witness
//! triangle's three truncated corner walks, adjoin the differences of the
//! failing pair's full synchronized run (no truncation, no final marking).

use hypgrp_core::autstruct::{build_structure_auto, BuildOptions, Reducer};
use hypgrp_core::fsa::{decode_pair_word, Automaton, DetOptions};
use hypgrp_core::presentation::Presentation;
use hypgrp_core::rewrite::{KbLimits, Rewriter};
use hypgrp_core::thinness::{
    accept_triples, build_frd, build_ngp, sample_triangle_differences,
};
use hypgrp_core::alphabet::Word;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let path = args.get(1).map(String::as_str).unwrap_or("presentations/g1.hgp");
    let samples: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(4000);
    let sample_len: usize = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(50);
    let seed: u64 = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(1);
    let cex_cap: usize = args.get(5).and_then(|s| s.parse().ok()).unwrap_or(500);

    let text = std::fs::read_to_string(path).unwrap();
    let p = Presentation::parse(&text, path).unwrap();
    let (system, s) =
        build_structure_auto(&p, &KbLimits::default(), &BuildOptions::default()).unwrap();
    let rw = Rewriter::new(&system).unwrap();
    let red = Reducer::new(&s, &rw).unwrap();
    let alphabet = &s.alphabet;

    let mut d = sample_triangle_differences(&s, &red, samples, sample_len, seed).unwrap();
    eprintln!("sampled: |D|={} d1={}", d.len(), d.d1_len());

    let wr = s.word_acceptor.reverse_with_subsets(None).unwrap();
    let product = pair_product(&s.word_acceptor, &wr).minimize();
    let pl = s.word_acceptor.pair_labels();

    for round in 1..=40 {
        let frd = build_frd(&d, &s.word_acceptor, &wr, alphabet, &red, None).unwrap();
        let triples = accept_triples(&frd, &wr, &d, &red, None).unwrap();
        let ngp = build_ngp(&frd, &triples, None).unwrap();
        let gp = ngp
            .determinize(&DetOptions { state_cap: Some(1 << 24), keep_subsets: false })
            .unwrap();
        let gp_min = gp.minimize();
        let witnesses = product.diff_witnesses(&gp_min, cex_cap).unwrap();
        eprintln!(
            "round {round}: |D|={} d1={} frd={} triples={} ngp={} gp={} gp_min={} cex={}",
            d.len(),
            d.d1_len(),
            frd.n_states(),
            triples.len(),
            ngp.n_states(),
            gp.n_states(),
            gp_min.n_states(),
            witnesses.len()
        );
        if witnesses.is_empty() {
            eprintln!("VERIFIED");
            break;
        }
        let before = d.len();
        for labels in &witnesses {
            let (w1, w2) = decode_pair_word(&pl, labels);
            // Full synchronized run: position i pairs w1[i] against w2[i],
            // padding the shorter side; difference update skips the padded
            // factor. Every difference along the run is adjoined, none marked.
            let n = w1.len().max(w2.len());
            let mut g: Word = Word::new();
            for i in 0..n {
                let mut t = Word::new();
                if let Some(&x) = w1.get(i) {
                    t.push(alphabet.inverse(x));
                }
                t.extend_from_slice(&g);
                if let Some(&y) = w2.get(i) {
                    t.push(alphabet.inverse(y));
                }
                g = red.reduce(&t);
                d.insert_d2(g.clone());
            }
        }
        if d.len() == before {
            eprintln!("STALLED");
            break;
        }
    }
    let mut by_len: Vec<(usize, String, bool)> = (0..d.len() as u32)
        .map(|i| {
            let w = d.word(i);
            (w.len(), alphabet.format_word(w), d.is_d1(i))
        })
        .collect();
    by_len.sort();
    for (l, w, f) in &by_len {
        eprintln!("  len {l}: {w}{}", if *f { "  [final]" } else { "" });
    }
}
