//! Verification of word-hyperbolicity through thin geodesic bigons.
//!
//! A group is word-hyperbolic exactly when its geodesic bigons are
//! uniformly thin. Starting from the multiplier differences of a
//! short-lex automatic structure, the verifier grows a difference set and
//! builds three automata per round: a geodesic-equality machine `GEₙ`
//! accepting the equal-length pairs `(u,v)` with `v` a normal form and
//! `u =_G v`, the geodesic acceptor `GWₙ` projecting out `u`, and a test
//! product `Tₙ` that hunts for geodesics recognised through `GWₙ` on one
//! coordinate but missed on the other. An empty test language proves that
//! `L(GWₙ)` is the full geodesic language, which certifies hyperbolicity;
//! otherwise every harvested word contributes at least one new difference
//! and the loop repeats. Non-hyperbolic groups never halt, so the round
//! cap reports an inconclusive outcome, never a refutation.
//!
//! On halting the module also closes the difference set under the bigon
//! relations: composing `GEₙ` with its converse yields the differences of
//! geodesic pairs sharing both endpoints, and threading a one-letter
//! multiplier between the two copies yields those of pairs whose far
//! endpoints straddle an edge. The lengths of the longest such
//! differences bound the synchronous width of arbitrary geodesic bigons
//! ending at a vertex or a midpoint of an edge.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::alphabet::{Alphabet, Letter, Word};
use crate::autstruct::{
    build_wd_machine, diff_cap, insert_capped, pair_differences, AutomaticStructure, Reducer,
    WordDifferenceMachine, WordDifferenceSet,
};
use crate::error::Error;
use crate::fsa::{Automaton, Builder, DetOptions, PairLabels};
use crate::rewrite::Rewriter;

/// Knobs for [`verify_hyperbolic`].
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Round cap; reaching it reports an inconclusive outcome.
    pub max_iterations: usize,
    /// Abort the test construction after this many harvested words.
    pub counterexample_cap: usize,
    /// State cap for determinizations and bigon products.
    pub det_cap: Option<usize>,
    /// Compute the bigon-closure constants on halting.
    pub papasoglu_constants: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_iterations: 20,
            counterexample_cap: 500,
            det_cap: Some(1 << 22),
            papasoglu_constants: true,
        }
    }
}

/// Automaton sizes of one verification round.
#[derive(Debug, Clone)]
pub struct RoundStats {
    pub n: usize,
    /// Differences in the working set at the start of the round.
    pub differences: usize,
    /// States of the word-difference machine over that set.
    pub wd_states: usize,
    /// Geodesic-equality product as constructed and after minimization.
    pub ge_states: usize,
    pub ge_min_states: usize,
    /// Geodesic acceptor as determinized and after minimization.
    pub gw_states: usize,
    pub gw_min_states: usize,
    /// Test product states (partial when the word cap aborted it).
    pub t_states: usize,
    pub counterexamples: usize,
}

/// Outcome of the bigon verification loop.
#[derive(Debug, Clone)]
pub struct HyperbolicityReport {
    pub name: String,
    /// The test language came up empty, certifying hyperbolicity.
    pub halted: bool,
    /// Rounds run; on halting, the round whose test was empty.
    pub n_final: usize,
    /// Length of the longest multiplier difference.
    pub gamma: usize,
    /// Length of the longest difference in the final working set.
    pub gamma_prime: usize,
    pub rounds: Vec<RoundStats>,
    /// The final working difference set.
    pub differences: WordDifferenceSet,
    /// Minimal acceptor of the last round's geodesic language; on halting
    /// this accepts exactly the geodesic words.
    pub geodesic_acceptor: Automaton,
    /// Differences of geodesic pairs sharing both endpoints, and the
    /// bound they give on the width of vertex-ended bigons.
    pub vertex_differences: Option<WordDifferenceSet>,
    pub papasoglu_vertex: Option<usize>,
    /// The same with far endpoints at distance at most one, bounding
    /// bigons that end at the midpoint of an edge.
    pub midedge_differences: Option<WordDifferenceSet>,
    pub papasoglu_midedge: Option<usize>,
}

/// The geodesic-equality product: a deterministic two-variable automaton
/// whose states remember their (difference, acceptor) components.
#[derive(Debug, Clone)]
pub struct GePairs {
    pub automaton: Automaton,
    /// For each state, the word-difference machine state reached on the
    /// pair and the acceptor state reached on the second coordinate.
    pub components: Vec<(u32, u32)>,
}

/// Build `GEₙ` from the word-difference machine accepting the identity
/// and the word acceptor tracked on the second coordinate. Only
/// letter-letter labels take part, which pins the coordinates to equal
/// length; a state accepts when the difference is trivial and the second
/// word is a normal form, so accepted pairs are `(u, v)` with `u =_G v`,
/// `v ∈ L(W)` and `l(u) = l(v)` — two geodesics ending at one vertex.
pub fn build_ge(wdm: &WordDifferenceMachine, acceptor: &Automaton) -> GePairs {
    let base = acceptor.letters().len();
    let pl = PairLabels::new(base);
    let wd = &wdm.automaton;
    let mut b = Builder::new(2, acceptor.letters());
    let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
    let mut components: Vec<(u32, u32)> = Vec::new();
    let mut queue: VecDeque<u32> = VecDeque::new();
    let start = (wd.initial(), acceptor.initial());
    let s0 = b.add_state();
    b.add_initial(s0);
    ids.insert(start, s0);
    components.push(start);
    queue.push_back(s0);
    while let Some(s) = queue.pop_front() {
        let (d, q) = components[s as usize];
        b.set_accepting(s, wd.is_accepting(d) && acceptor.is_accepting(q));
        for x in 0..base as Letter {
            for y in 0..base as Letter {
                let label = pl.encode(Some(x), Some(y));
                let Some(d2) = wd.step(d, label) else { continue };
                let Some(q2) = acceptor.step(q, y as u16) else { continue };
                let t = *ids.entry((d2, q2)).or_insert_with(|| {
                    let t = b.add_state();
                    components.push((d2, q2));
                    queue.push_back(t);
                    t
                });
                b.add_edge(s, label, t);
            }
        }
    }
    GePairs {
        automaton: b.build(),
        components,
    }
}

/// Project `GEₙ` onto its first coordinate and determinize: the language
/// of words equal in the group to a same-length normal form within the
/// working differences. Returns the subset-construction size alongside
/// the minimal acceptor.
pub fn build_gw(ge: &Automaton, det_cap: Option<usize>) -> Result<(usize, Automaton), Error> {
    let det = ge.project(1)?.determinize(&DetOptions {
        state_cap: det_cap,
        keep_subsets: false,
    })?;
    Ok((det.n_states(), det.minimize()))
}

/// Result of one test construction.
#[derive(Debug, Clone)]
pub struct TestOutcome {
    /// Product states constructed (all of them when `complete`).
    pub states: usize,
    /// Harvested words outside the geodesic language, one per accepting
    /// product state, in breadth-first label order.
    pub words: Vec<Word>,
    /// Whether the construction ran to exhaustion.
    pub complete: bool,
}

/// Search the test product for counterexamples: pairs `(w, u)` whose
/// difference path closes at the identity with `u` accepted by the
/// geodesic acceptor and equal in length to `w`, while `w` itself is not
/// accepted. Any such `w` is a geodesic the acceptor misses. The product
/// tracks `w` through a third component with a dead marker; an empty
/// harvest after full construction proves the test language empty.
pub fn find_t_counterexamples(
    wdm: &WordDifferenceMachine,
    gw: &Automaton,
    cap: usize,
) -> TestOutcome {
    const DEAD: u32 = u32::MAX;
    let base = gw.letters().len();
    let pl = PairLabels::new(base);
    let wd = &wdm.automaton;
    let mut ids: HashMap<(u32, u32, u32), u32> = HashMap::new();
    let mut info: Vec<(u32, u32, u32)> = Vec::new();
    // Discovery tree: (parent, label), with the root its own parent.
    let mut parent: Vec<(u32, u16)> = Vec::new();
    let mut queue: VecDeque<u32> = VecDeque::new();
    let mut words: Vec<Word> = Vec::new();
    let mut seen: HashSet<Word> = HashSet::new();
    let start = (wd.initial(), gw.initial(), gw.initial());
    ids.insert(start, 0);
    info.push(start);
    parent.push((0, 0));
    queue.push_back(0);
    while let Some(s) = queue.pop_front() {
        let (d, qu, qw) = info[s as usize];
        for x in 0..base as Letter {
            for y in 0..base as Letter {
                let label = pl.encode(Some(x), Some(y));
                let Some(d2) = wd.step(d, label) else { continue };
                let Some(qu2) = gw.step(qu, y as u16) else { continue };
                let qw2 = match qw {
                    DEAD => DEAD,
                    _ => gw.step(qw, x as u16).unwrap_or(DEAD),
                };
                let key = (d2, qu2, qw2);
                if ids.contains_key(&key) {
                    continue;
                }
                let t = info.len() as u32;
                ids.insert(key, t);
                info.push(key);
                parent.push((s, label));
                queue.push_back(t);
                if wd.is_accepting(d2)
                    && gw.is_accepting(qu2)
                    && (qw2 == DEAD || !gw.is_accepting(qw2))
                {
                    let w = spell_first_coordinate(t, &parent, &pl);
                    if seen.insert(w.clone()) {
                        words.push(w);
                        if words.len() == cap {
                            return TestOutcome {
                                states: info.len(),
                                words,
                                complete: false,
                            };
                        }
                    }
                }
            }
        }
    }
    TestOutcome {
        states: info.len(),
        words,
        complete: true,
    }
}

fn spell_first_coordinate(mut s: u32, parent: &[(u32, u16)], pl: &PairLabels) -> Word {
    let mut w = Word::new();
    while s != 0 {
        let (p, label) = parent[s as usize];
        let (x, _) = pl.decode(label);
        w.push(x.expect("test transitions read letters on both coordinates"));
        s = p;
    }
    w.reverse();
    w
}

/// Run the bigon verification loop on a certified structure. Halting
/// certifies that the group is word-hyperbolic and that the final
/// geodesic acceptor accepts exactly the geodesic words; exhausting the
/// round cap is inconclusive. Errors surface resource caps and — for
/// systems verified only on a horizon — differences that outgrow it.
pub fn verify_hyperbolic(
    s: &AutomaticStructure,
    rw: &Rewriter,
    opts: &VerifyOptions,
) -> Result<HyperbolicityReport, Error> {
    let alphabet = &s.alphabet;
    let reducer = Reducer::new(s, rw)?;
    let cap = diff_cap(rw);
    let identity = [Word::new()];
    let mut diffs = s.differences.clone();
    let mut rounds: Vec<RoundStats> = Vec::new();
    let mut halted = false;
    let mut last: Option<(GePairs, WordDifferenceMachine, Automaton)> = None;

    for n in 1..=opts.max_iterations {
        let wdm = build_wd_machine(&diffs, &identity, alphabet, rw)?;
        let ge = build_ge(&wdm, &s.word_acceptor);
        let ge_min = ge.automaton.minimize();
        let (gw_states, gw) = build_gw(&ge_min, opts.det_cap)?;
        let test = find_t_counterexamples(&wdm, &gw, opts.counterexample_cap);
        rounds.push(RoundStats {
            n,
            differences: diffs.len(),
            wd_states: wdm.n_states(),
            ge_states: ge.automaton.n_states(),
            ge_min_states: ge_min.n_states(),
            gw_states,
            gw_min_states: gw.n_states(),
            t_states: test.states,
            counterexamples: test.words.len(),
        });
        let done = test.words.is_empty();
        let grown = if done {
            0
        } else {
            let before = diffs.len();
            for w in &test.words {
                let v = reducer.reduce(w);
                assert_eq!(v.len(), w.len(), "test words are geodesic");
                for d in pair_differences(rw, alphabet, w, &v)? {
                    insert_capped(&mut diffs, d, cap);
                }
            }
            diffs.len() - before
        };
        last = Some((ge, wdm, gw));
        if done {
            halted = true;
            break;
        }
        if grown == 0 {
            return Err(Error::IterationCap(
                "counterexamples yielded no differences inside the rewriting horizon".into(),
            ));
        }
    }

    let (ge, wdm, geodesic_acceptor) = last.ok_or_else(|| {
        Error::Precondition("hyperbolicity verification needs at least one round".into())
    })?;
    let mut report = HyperbolicityReport {
        name: s.name.clone(),
        halted,
        n_final: rounds.len(),
        gamma: s.gamma,
        gamma_prime: diffs.max_len(),
        rounds,
        differences: diffs,
        geodesic_acceptor,
        vertex_differences: None,
        papasoglu_vertex: None,
        midedge_differences: None,
        papasoglu_midedge: None,
    };
    if halted && opts.papasoglu_constants {
        let (vertex, midedge) = bigon_closure(&ge, &wdm, &reducer, alphabet, opts.det_cap)?;
        report.papasoglu_vertex = Some(vertex.max_len());
        report.papasoglu_midedge = Some(midedge.max_len());
        report.vertex_differences = Some(vertex);
        report.midedge_differences = Some(midedge);
    }
    Ok(report)
}

/// Close the halted verifier's data under the bigon relations.
///
/// The first set collects the differences of the composite of `GE` with
/// its converse — pairs of geodesics fellow-travelling one normal form,
/// that is, geodesic bigons with both endpoints at vertices. The second
/// threads a multiplier step between the copies, covering pairs whose
/// far endpoints lie at distance at most one, as happens for bigons
/// ending at the midpoint of an edge. Junk states are trimmed before
/// harvesting, so both sets quantify over genuine accepted pairs only.
pub fn bigon_closure(
    ge: &GePairs,
    wdm: &WordDifferenceMachine,
    reducer: &Reducer,
    alphabet: &Alphabet,
    state_cap: Option<usize>,
) -> Result<(WordDifferenceSet, WordDifferenceSet), Error> {
    let a = &ge.automaton;
    let base = alphabet.len();
    let pl = PairLabels::new(base);
    // Successors of each state grouped by normal-form letter.
    let mut by_y: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new(); base]; a.n_states()];
    for s in 0..a.n_states() as u32 {
        for e in a.edges_from(s) {
            let (_, y) = pl.decode(e.label);
            let y = y.expect("geodesic-equality labels are letter-letter");
            by_y[s as usize][y as usize].push(e.to);
        }
    }
    let diff_of = |s: u32| ge.components[s as usize].0;

    // Square of GE synchronised on the normal form.
    let vertex = {
        let start = (a.initial(), a.initial());
        let mut product: Product<(u32, u32)> = Product::new(start, state_cap);
        while let Some(i) = product.pop() {
            let (s, t) = product.key(i);
            product.set_accepting(i, a.is_accepting(s) && a.is_accepting(t));
            for y in 0..base {
                for &s2 in &by_y[s as usize][y] {
                    for &t2 in &by_y[t as usize][y] {
                        product.push(i, (s2, t2))?;
                    }
                }
            }
        }
        let mut set = WordDifferenceSet::new();
        let mut cache: HashMap<(u32, u32), Word> = HashMap::new();
        for (s, t) in product.live_keys() {
            let key = (diff_of(s), diff_of(t));
            let d = cache
                .entry(key)
                .or_insert_with(|| {
                    let mut w = wdm.alpha[key.0 as usize].clone();
                    w.extend(alphabet.invert_word(&wdm.alpha[key.1 as usize]));
                    reducer.reduce(&w)
                })
                .clone();
            set.insert(d);
        }
        set
    };

    // The same with a multiplier thread between the normal forms.
    let midedge = {
        let wd = &wdm.automaton;
        let start = (a.initial(), wd.initial(), a.initial());
        let mut product: Product<(u32, u32, u32)> = Product::new(start, state_cap);
        while let Some(i) = product.pop() {
            let (s, d, t) = product.key(i);
            product.set_accepting(
                i,
                a.is_accepting(s) && a.is_accepting(t) && wdm.alpha[d as usize].len() <= 1,
            );
            for e in wd.edges_from(d) {
                let (y1, y2) = pl.decode(e.label);
                let (Some(y1), Some(y2)) = (y1, y2) else { continue };
                for &s2 in &by_y[s as usize][y1 as usize] {
                    for &t2 in &by_y[t as usize][y2 as usize] {
                        product.push(i, (s2, e.to, t2))?;
                    }
                }
            }
        }
        let mut set = WordDifferenceSet::new();
        let mut cache: HashMap<(u32, u32, u32), Word> = HashMap::new();
        for (s, d, t) in product.live_keys() {
            let key = (diff_of(s), d, diff_of(t));
            let w = cache
                .entry(key)
                .or_insert_with(|| {
                    let mut w = wdm.alpha[key.0 as usize].clone();
                    w.extend_from_slice(&wdm.alpha[key.1 as usize]);
                    w.extend(alphabet.invert_word(&wdm.alpha[key.2 as usize]));
                    reducer.reduce(&w)
                })
                .clone();
            set.insert(w);
        }
        set
    };
    Ok((vertex, midedge))
}

/// Breadth-first product exploration with trimming: states are interned
/// by key, edges recorded for the backward pass, and `live_keys` yields
/// the keys on a path from the start to an accepting state.
struct Product<K> {
    ids: HashMap<K, u32>,
    keys: Vec<K>,
    accepting: Vec<bool>,
    edges: Vec<(u32, u32)>,
    queue: VecDeque<u32>,
    cap: usize,
}

impl<K: std::hash::Hash + Eq + Copy> Product<K> {
    fn new(start: K, cap: Option<usize>) -> Self {
        let mut p = Product {
            ids: HashMap::new(),
            keys: Vec::new(),
            accepting: Vec::new(),
            edges: Vec::new(),
            queue: VecDeque::new(),
            cap: cap.unwrap_or(usize::MAX),
        };
        p.ids.insert(start, 0);
        p.keys.push(start);
        p.accepting.push(false);
        p.queue.push_back(0);
        p
    }

    fn pop(&mut self) -> Option<u32> {
        self.queue.pop_front()
    }

    fn key(&self, i: u32) -> K {
        self.keys[i as usize]
    }

    fn set_accepting(&mut self, i: u32, yes: bool) {
        self.accepting[i as usize] = yes;
    }

    fn push(&mut self, from: u32, key: K) -> Result<(), Error> {
        let next = match self.ids.get(&key) {
            Some(&t) => t,
            None => {
                if self.keys.len() >= self.cap {
                    return Err(Error::ResourceCap(format!(
                        "bigon product exceeded {} states",
                        self.cap
                    )));
                }
                let t = self.keys.len() as u32;
                self.ids.insert(key, t);
                self.keys.push(key);
                self.accepting.push(false);
                self.queue.push_back(t);
                t
            }
        };
        self.edges.push((from, next));
        Ok(())
    }

    /// Keys of the accessible states from which an accepting state is
    /// reachable.
    fn live_keys(&self) -> impl Iterator<Item = K> + '_ {
        let n = self.keys.len();
        let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(from, to) in &self.edges {
            rev[to as usize].push(from);
        }
        let mut live = self.accepting.clone();
        let mut queue: VecDeque<u32> = (0..n as u32).filter(|&i| live[i as usize]).collect();
        while let Some(i) = queue.pop_front() {
            for &p in &rev[i as usize] {
                if !live[p as usize] {
                    live[p as usize] = true;
                    queue.push_back(p);
                }
            }
        }
        self.keys
            .iter()
            .zip(live)
            .filter_map(|(&k, alive)| alive.then_some(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autstruct::{build_structure_auto, BuildOptions};
    use crate::presentation::Presentation;
    use crate::rewrite::KbLimits;

    fn verified(text: &str, opts: &VerifyOptions) -> HyperbolicityReport {
        let p = Presentation::parse(text, "t").unwrap();
        let (system, s) =
            build_structure_auto(&p, &KbLimits::default(), &BuildOptions::default()).unwrap();
        let rw = Rewriter::new(&system).unwrap();
        verify_hyperbolic(&s, &rw, opts).unwrap()
    }

    #[test]
    fn free_group_halts_with_trivial_constants() {
        let r = verified(
            "hgp v1\ngenerators: a b\ninverses: a=A b=B\n",
            &VerifyOptions::default(),
        );
        assert!(r.halted);
        assert_eq!(r.n_final, 1);
        assert_eq!(r.geodesic_acceptor.n_states(), 5);
        assert_eq!(r.papasoglu_vertex, Some(0));
        assert_eq!(r.papasoglu_midedge, Some(0));
    }

    #[test]
    fn integers_halt_with_trivial_constants() {
        let r = verified(
            "hgp v1\ngenerators: a\ninverses: a=A\n",
            &VerifyOptions::default(),
        );
        assert!(r.halted);
        assert_eq!(r.geodesic_acceptor.n_states(), 3);
        assert_eq!(r.papasoglu_vertex, Some(0));
        assert_eq!(r.papasoglu_midedge, Some(0));
    }

    #[test]
    fn lattice_is_inconclusive_with_growing_differences() {
        let opts = VerifyOptions {
            max_iterations: 4,
            ..VerifyOptions::default()
        };
        let r = verified("hgp v1\ngenerators: a b\ninverses: a=A b=B\nrelator: baBA\n", &opts);
        assert!(!r.halted);
        assert_eq!(r.rounds.len(), 4);
        assert!(r
            .rounds
            .windows(2)
            .all(|w| w[1].differences > w[0].differences));
    }

    #[test]
    fn surface_group_halts_in_one_round() {
        let text = std::fs::read_to_string("../../presentations/g1.hgp").unwrap();
        let r = verified(&text, &VerifyOptions::default());
        assert!(r.halted);
        assert_eq!(r.n_final, 1);
        let row = &r.rounds[0];
        assert_eq!(row.wd_states, 33);
        assert_eq!((row.ge_states, row.ge_min_states), (121, 49));
        assert_eq!((row.gw_states, row.gw_min_states), (49, 49));
        assert_eq!(row.t_states, 265);
        assert_eq!((r.gamma, r.gamma_prime), (4, 4));
        assert_eq!(r.papasoglu_vertex, Some(4));
        assert_eq!(r.papasoglu_midedge, Some(4));
    }

    #[test]
    fn triangle_group_needs_a_second_round() {
        let text = std::fs::read_to_string("../../presentations/g2.hgp").unwrap();
        let r = verified(&text, &VerifyOptions::default());
        assert!(r.halted);
        assert_eq!(r.n_final, 2);
        assert_eq!(r.rounds[0].wd_states, 30);
        assert_eq!(r.rounds[0].t_states, 936);
        let last = &r.rounds[1];
        assert_eq!(last.wd_states, 32);
        assert_eq!((last.ge_states, last.ge_min_states), (664, 94));
        assert_eq!((last.gw_states, last.gw_min_states), (78, 54));
        assert_eq!(last.t_states, 769);
        assert_eq!((r.gamma, r.gamma_prime), (7, 7));
    }

    #[test]
    fn one_relator_torsion_group_halts_in_one_round() {
        let text = std::fs::read_to_string("../../presentations/g3.hgp").unwrap();
        let r = verified(&text, &VerifyOptions::default());
        assert!(r.halted);
        assert_eq!(r.n_final, 1);
        let row = &r.rounds[0];
        assert_eq!(row.wd_states, 55);
        assert_eq!((row.ge_states, row.ge_min_states), (689, 136));
        assert_eq!((row.gw_states, row.gw_min_states), (152, 96));
        assert_eq!(row.t_states, 1270);
        assert_eq!((r.gamma, r.gamma_prime), (6, 6));
    }

    #[test]
    fn dodecahedral_group_converges_with_shrinking_final_acceptor() {
        let text = std::fs::read_to_string("../../presentations/g4.hgp").unwrap();
        let r = verified(&text, &VerifyOptions::default());
        assert!(r.halted);
        assert_eq!(r.n_final, 4);
        assert_eq!(r.rounds[0].wd_states, 75);
        let last = r.rounds.last().unwrap();
        assert_eq!(last.ge_min_states, 318);
        assert_eq!(last.gw_min_states, 63);
        assert_eq!((r.gamma, r.gamma_prime), (4, 4));
    }
}
