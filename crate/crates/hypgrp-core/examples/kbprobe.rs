//! Quick completion probe: run Knuth–Bendix on a presentation file and
//! print the outcome.

use hypgrp_core::{KbLimits, Presentation, RewritingSystem};

fn main() {
    let path = std::env::args().nth(1).expect("usage: kbprobe FILE [bound]");
    let bound: Option<usize> = std::env::args().nth(2).map(|s| s.parse().expect("bound"));
    let p = Presentation::read_file(std::path::Path::new(&path)).expect("presentation");
    let limits = KbLimits::default();
    let t0 = std::time::Instant::now();
    let r = match bound {
        Some(b) => RewritingSystem::complete_bounded(&p, b, &limits).expect("completion"),
        None => RewritingSystem::complete(&p, &limits),
    };
    println!(
        "{}: confluent={} exact_len={:?} rules={} max_rule_len={} equations={} elapsed={:.2?}",
        p.name,
        r.confluent,
        r.exact_len,
        r.stats.rules,
        r.stats.max_rule_len,
        r.stats.equations_processed,
        t0.elapsed()
    );
    for rule in r.rules.iter().take(12) {
        println!(
            "  {} -> {}",
            r.alphabet.format_word(&rule.lhs),
            r.alphabet.format_word(&rule.rhs)
        );
    }
}
