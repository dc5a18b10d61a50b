//! Try alternative letter orders for one presentation and report the
//! word-acceptor fingerprints each produces.

use hypgrp_core::autstruct::{build_structure_auto, BuildOptions};
use hypgrp_core::fsa::Automaton;
use hypgrp_core::presentation::Presentation;
use hypgrp_core::rewrite::KbLimits;

fn main() {
    let orders = [
        "a A b B c C d D",
        "a b c d A B C D",
        "A B C D a b c d",
        "A a B b C c D d",
        "a b A B c d C D",
        "a A c C b B d D",
        "a c A C b d B D",
        "d D c C b B a A",
        "D C B A d c b a",
        "a B b A c D d C",
        "a A b B d D c C",
        "b B a A d D c C",
    ];
    for order in orders {
        let text = format!(
            "hgp v1\ngenerators: a b c d\ninverses: a=A b=B c=C d=D\norder: {order}\nrelator: ABabCDcd\n"
        );
        let p = match Presentation::parse(&text, "inline") {
            Ok(p) => p,
            Err(e) => {
                eprintln!("{order}: parse error {e}");
                continue;
            }
        };
        match build_structure_auto(&p, &KbLimits::default(), &BuildOptions::default()) {
            Ok((_, s)) => {
                let wmin = s.word_acceptor.clone().minimize();
                let wr = wmin.reverse_with_subsets(None).unwrap();
                let prod = Automaton::pair_product(&wmin, &wr).minimize();
                eprintln!(
                    "{order}: W={} minW={} W^R={} product_min={} wd1={} gamma={}",
                    s.word_acceptor.n_states(),
                    wmin.n_states(),
                    wr.n_states(),
                    prod.n_states(),
                    s.wd1.n_states(),
                    s.gamma,
                );
            }
            Err(e) => eprintln!("{order}: build failed {e}"),
        }
    }
}
