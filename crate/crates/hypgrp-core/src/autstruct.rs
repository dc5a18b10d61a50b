//! Short-lex automatic structures from word differences.
//!
//! For a presentation whose rewriting system is confluent — or exact on a
//! verified horizon — the word differences `nf(u⁻¹v)` of rule prefixes seed
//! a candidate difference set `D`. From `D` we build:
//!
//! * a reducibility machine accepting padded pairs `(w,v)†` with `v =_G w`,
//!   `v <_slex w`, and every prefix difference in `D`;
//! * the candidate word acceptor: words none of whose prefixes the
//!   reducibility machine can witness (always a superset of the true
//!   normal-form language, shrinking as `D` grows);
//! * candidate multipliers `M_x`: the word-difference machine intersected
//!   with pairs of accepted words, accepting at difference `nf(x)`. By
//!   construction a pair accepted by `M_x` really satisfies `v =_G ux`.
//!
//! Axiom checking then certifies the candidate: both projections of every
//! `M_x` must equal the acceptor, the identity multiplier must be the
//! diagonal, and the multiplier composites along `x·x⁻¹` and along every
//! defining relator must equal the diagonal. Each failure yields shortest
//! witness words whose normal-form pairs contribute missing differences,
//! and the loop repeats. On success the acceptor accepts exactly the
//! short-lex normal forms and the multipliers are exact, so the harvested
//! differences are the true multiplier differences of the group.

use crate::alphabet::{Alphabet, Letter, Word};
use crate::error::Error;
use crate::fsa::{decode_pair_word, Automaton, Builder, DetOptions, PairLabels};
use crate::presentation::Presentation;
use crate::rewrite::{KbLimits, Rewriter, RewritingSystem};
use indexmap::IndexSet;
use std::collections::{HashMap, VecDeque};

/// An insertion-ordered set of word differences (group elements in normal
/// form). The identity is always the first entry.
#[derive(Debug, Clone, Default)]
pub struct WordDifferenceSet {
    words: IndexSet<Word>,
}

impl WordDifferenceSet {
    pub fn new() -> Self {
        let mut words = IndexSet::new();
        words.insert(Word::new());
        WordDifferenceSet { words }
    }

    /// Insert a difference; returns true when it was new.
    pub fn insert(&mut self, w: Word) -> bool {
        self.words.insert(w)
    }

    pub fn contains(&self, w: &[Letter]) -> bool {
        self.words.contains(w)
    }

    pub fn index_of(&self, w: &[Letter]) -> Option<u32> {
        self.words.get_index_of(w).map(|i| i as u32)
    }

    pub fn word(&self, i: u32) -> &Word {
        self.words.get_index(i as usize).expect("difference index in range")
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }

    /// Length of the longest difference.
    pub fn max_len(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }
}

/// A deterministic two-variable automaton over a difference set: reading
/// `(x,y)` from a state holding `d` leads to the state holding
/// `nf(x⁻¹dy)` whenever that element lies in the set. `alpha` maps each
/// state to the difference it holds; the initial state holds the identity.
#[derive(Debug, Clone)]
pub struct WordDifferenceMachine {
    pub automaton: Automaton,
    pub alpha: Vec<Word>,
}

impl WordDifferenceMachine {
    /// Number of differences reachable from the identity.
    pub fn n_states(&self) -> usize {
        self.automaton.n_states()
    }
}

/// One transition step on differences: `nf(x⁻¹ d y)` with padding allowed
/// on either side. Errors when the concatenation exceeds the verified
/// rewriting horizon.
pub fn diff_step(
    rw: &Rewriter,
    alphabet: &Alphabet,
    d: &[Letter],
    x: Option<Letter>,
    y: Option<Letter>,
) -> Result<Word, Error> {
    let mut w = Word::with_capacity(d.len() + 2);
    if let Some(x) = x {
        w.push(alphabet.inverse(x));
    }
    w.extend_from_slice(d);
    w.extend(y);
    rw.try_reduce(&w)
}

/// The prefix differences of the padded pair `(u,v)†`, in order of
/// position (the identity prefix at position 0 is omitted).
pub fn pair_differences(
    rw: &Rewriter,
    alphabet: &Alphabet,
    u: &[Letter],
    v: &[Letter],
) -> Result<Vec<Word>, Error> {
    let mut out = Vec::with_capacity(u.len().max(v.len()));
    let mut d = Word::new();
    for i in 0..u.len().max(v.len()) {
        d = diff_step(rw, alphabet, &d, u.get(i).copied(), v.get(i).copied())?;
        out.push(d.clone());
    }
    Ok(out)
}

/// Seed a difference set from the rules of a rewriting system: the
/// identity together with every prefix difference of every rule, read as
/// the padded pair `(lhs, rhs)†`. Rules whose intermediate differences
/// outgrow the verified horizon are skipped — the fixpoint loop recovers
/// anything they would have contributed.
pub fn seed_differences(system: &RewritingSystem, rw: &Rewriter) -> WordDifferenceSet {
    let cap = diff_cap(rw);
    let mut set = WordDifferenceSet::new();
    for rule in &system.rules {
        if let Ok(diffs) = pair_differences(rw, &system.alphabet, &rule.lhs, &rule.rhs) {
            for d in diffs {
                insert_capped(&mut set, d, cap);
            }
        }
    }
    set
}

pub(crate) fn diff_cap(rw: &Rewriter) -> Option<usize> {
    rw.exact_len().map(|l| l.saturating_sub(2))
}

pub(crate) fn insert_capped(set: &mut WordDifferenceSet, w: Word, cap: Option<usize>) -> bool {
    match cap {
        Some(c) if w.len() > c => false,
        _ => set.insert(w),
    }
}

/// Build the word-difference machine over `diffs`: the accessible part
/// from the identity, with a transition for every label `(x,y)` (padding
/// included) whose difference step stays inside the set. States are
/// numbered breadth-first with labels in order. `accepting` lists the
/// differences whose states accept.
pub fn build_wd_machine(
    diffs: &WordDifferenceSet,
    accepting: &[Word],
    alphabet: &Alphabet,
    rw: &Rewriter,
) -> Result<WordDifferenceMachine, Error> {
    let base = alphabet.len();
    let pl = PairLabels::new(base);
    let mut b = Builder::new(2, alphabet.names());
    let mut alpha: Vec<Word> = Vec::new();
    let mut state_of: HashMap<u32, u32> = HashMap::new(); // diff index -> state
    let mut queue: VecDeque<u32> = VecDeque::new();

    let one = diffs
        .index_of(&[])
        .ok_or_else(|| Error::Precondition("difference set lacks the identity".into()))?;
    let s0 = b.add_state();
    state_of.insert(one, s0);
    alpha.push(Word::new());
    b.add_initial(s0);
    queue.push_back(one);
    while let Some(di) = queue.pop_front() {
        let s = state_of[&di];
        let d = diffs.word(di).clone();
        for label in 0..pl.count() as u16 {
            let (x, y) = pl.decode(label);
            let d2 = diff_step(rw, alphabet, &d, x, y)?;
            let Some(ti) = diffs.index_of(&d2) else { continue };
            let t = match state_of.get(&ti) {
                Some(&t) => t,
                None => {
                    let t = b.add_state();
                    state_of.insert(ti, t);
                    alpha.push(d2);
                    queue.push_back(ti);
                    t
                }
            };
            b.add_edge(s, label, t);
        }
    }
    for (i, a) in alpha.iter().enumerate() {
        if accepting.iter().any(|w| w == a) {
            b.set_accepting(i as u32, true);
        }
    }
    Ok(WordDifferenceMachine {
        automaton: b.build(),
        alpha,
    })
}

/// The reducibility machine over a difference set: accepts `(w,v)†` when
/// `v =_G w`, `v <_slex w` and every prefix difference lies in the set.
/// Words accepted in the first coordinate are then reducible; with a rich
/// enough set the converse holds for minimal reducible words.
fn reducibility_machine(
    diffs: &WordDifferenceSet,
    alphabet: &Alphabet,
    rw: &Rewriter,
) -> Result<Automaton, Error> {
    // Per difference: 0 = prefixes equal, 1 = v lexically less (same
    // length so far), 2 = v lexically greater, 3 = v has ended.
    const EQ: u32 = 0;
    const LT: u32 = 1;
    const GT: u32 = 2;
    const DONE: u32 = 3;
    let base = alphabet.len();
    let pl = PairLabels::new(base);
    let mut b = Builder::new(2, alphabet.names());
    for _ in 0..4 * diffs.len() {
        b.add_state();
    }
    let one = diffs
        .index_of(&[])
        .ok_or_else(|| Error::Precondition("difference set lacks the identity".into()))?;
    b.add_initial(4 * one + EQ);
    b.set_accepting(4 * one + LT, true);
    b.set_accepting(4 * one + DONE, true);
    for di in 0..diffs.len() as u32 {
        let d = diffs.word(di).clone();
        for x in 0..base as Letter {
            for y in 0..base as Letter {
                let d2 = diff_step(rw, alphabet, &d, Some(x), Some(y))?;
                let Some(ti) = diffs.index_of(&d2) else { continue };
                let label = pl.encode(Some(x), Some(y));
                let ord = match y.cmp(&x) {
                    std::cmp::Ordering::Less => LT,
                    std::cmp::Ordering::Equal => EQ,
                    std::cmp::Ordering::Greater => GT,
                };
                b.add_edge(4 * di + EQ, label, 4 * ti + ord);
                b.add_edge(4 * di + LT, label, 4 * ti + LT);
                b.add_edge(4 * di + GT, label, 4 * ti + GT);
            }
            // v has ended; a shorter equal word is smaller outright.
            let d2 = diff_step(rw, alphabet, &d, Some(x), None)?;
            if let Some(ti) = diffs.index_of(&d2) {
                let label = pl.encode(Some(x), None);
                for k in [EQ, LT, GT, DONE] {
                    b.add_edge(4 * di + k, label, 4 * ti + DONE);
                }
            }
        }
    }
    Ok(b.build())
}

/// Candidate word acceptor: words none of whose prefixes the reducibility
/// machine witnesses as reducible. Prefix-closed by construction.
fn candidate_acceptor(
    diffs: &WordDifferenceSet,
    alphabet: &Alphabet,
    rw: &Rewriter,
    opts: &BuildOptions,
) -> Result<Automaton, Error> {
    let reduc = reducibility_machine(diffs, alphabet, rw)?;
    let proj = reduc.project(1)?;
    let det = proj.determinize(&DetOptions {
        state_cap: opts.det_cap,
        keep_subsets: false,
    })?;
    // Cut every accepting state: a word reaching one has a reducible
    // prefix. What remains accepts the candidate normal forms.
    let mut b = Builder::new(1, alphabet.names());
    let mut map: Vec<Option<u32>> = vec![None; det.n_states()];
    for s in 0..det.n_states() as u32 {
        if !det.is_accepting(s) {
            let id = b.add_state();
            b.set_accepting(id, true);
            map[s as usize] = Some(id);
        }
    }
    for s in 0..det.n_states() as u32 {
        let Some(from) = map[s as usize] else { continue };
        for e in det.edges_from(s) {
            if let Some(to) = map[e.to as usize] {
                b.add_edge(from, e.label, to);
            }
        }
    }
    let init = map[det.initial() as usize]
        .ok_or_else(|| Error::Precondition("the empty word must be irreducible".into()))?;
    b.add_initial(init);
    Ok(b.build().minimize())
}

/// The multiplier for target difference `t`: the product of the
/// word-difference machine (accepting at `t`) with pairs of accepted
/// words, trimmed. Each state carries its difference-machine component as
/// payload, so the differences surviving on accepting paths can be read
/// back off.
fn build_multiplier(
    wdm: &WordDifferenceMachine,
    target: &[Letter],
    pair_acceptor: &Automaton,
) -> Automaton {
    let wd = &wdm.automaton;
    let n_labels = wd.n_labels() as u16;
    let mut b = Builder::new(2, wd.letters());
    let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
    let start = (wd.initial(), pair_acceptor.initial());
    let s0 = b.add_state();
    ids.insert(start, s0);
    b.add_initial(s0);
    let mut states = vec![start];
    let mut queue: VecDeque<u32> = VecDeque::new();
    queue.push_back(s0);
    while let Some(s) = queue.pop_front() {
        let (p, q) = states[s as usize];
        b.set_payload(s, Box::from([p]));
        b.set_accepting(
            s,
            wdm.alpha[p as usize] == target && pair_acceptor.is_accepting(q),
        );
        for label in 0..n_labels {
            let (Some(np), Some(nq)) = (wd.step(p, label), pair_acceptor.step(q, label)) else {
                continue;
            };
            let key = (np, nq);
            let next = *ids.entry(key).or_insert_with(|| {
                let id = b.add_state();
                states.push(key);
                queue.push_back(id);
                id
            });
            b.add_edge(s, label, next);
        }
    }
    b.build().trim()
}

/// A certified short-lex automatic structure.
#[derive(Debug, Clone)]
pub struct AutomaticStructure {
    pub name: String,
    pub alphabet: Alphabet,
    /// Minimal acceptor of the short-lex normal forms.
    pub word_acceptor: Automaton,
    /// One multiplier per letter, trimmed, states carrying their
    /// word-difference component as payload.
    pub multipliers: Vec<Automaton>,
    /// The certified identity multiplier: the diagonal on the acceptor.
    pub identity_multiplier: Automaton,
    /// The multiplier differences, harvested from the trimmed multipliers
    /// in letter order (identity first).
    pub differences: WordDifferenceSet,
    /// Word-difference machine over `differences`, accepting the identity.
    pub wd1: WordDifferenceMachine,
    /// Length of the longest multiplier difference.
    pub gamma: usize,
    pub stats: BuildStats,
}

/// Statistics of a structure construction.
#[derive(Debug, Clone, Default)]
pub struct BuildStats {
    /// Fixpoint iterations until the axiom checks passed.
    pub iterations: usize,
    /// Differences in the working set at convergence (junk included).
    pub candidate_differences: usize,
    /// Differences seeded from the rules.
    pub seeded_differences: usize,
    /// Completion bound of the rewriting system used, if bounded.
    pub kb_bound: Option<usize>,
}

/// Knobs for [`build_structure`].
#[derive(Debug, Clone)]
pub struct BuildOptions {
    /// Fixpoint iteration cap.
    pub max_iterations: usize,
    /// State cap for every determinization.
    pub det_cap: Option<usize>,
    /// How many witnesses to harvest per failed check.
    pub witness_cap: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            max_iterations: 20,
            det_cap: Some(1 << 22),
            witness_cap: 25,
        }
    }
}

/// Compute the short-lex automatic structure of a presentation whose
/// rewriting system is confluent or verified on a horizon. Runs the
/// candidate/check/repair fixpoint; errors with `IterationCap` when the
/// loop fails to converge and `CompletionCap` when witness processing
/// needs reductions beyond the verified horizon.
pub fn build_structure(
    p: &Presentation,
    system: &RewritingSystem,
    opts: &BuildOptions,
) -> Result<AutomaticStructure, Error> {
    let rw = Rewriter::new(system)?;
    let alphabet = &system.alphabet;
    let cap = diff_cap(&rw);
    let mut diffs = seed_differences(system, &rw);
    let seeded = diffs.len();

    for iteration in 1..=opts.max_iterations {
        let acceptor = candidate_acceptor(&diffs, alphabet, &rw, opts)?;
        debug_assert!(acceptor.accepts(&[]));
        let wdm = build_wd_machine(&diffs, &[], alphabet, &rw)?;
        let pairs = Automaton::pair_product(&acceptor, &acceptor);
        let multipliers: Vec<Automaton> = (0..alphabet.len() as Letter)
            .map(|x| build_multiplier(&wdm, &rw.reduce(&[x]), &pairs))
            .collect();
        let identity = build_multiplier(&wdm, &[], &pairs);

        let repairs = collect_repairs(p, &rw, &acceptor, &multipliers, &identity, opts)?;
        if repairs.is_empty() {
            let mut harvested = WordDifferenceSet::new();
            for m in &multipliers {
                for s in 0..m.n_states() as u32 {
                    let wd_state = m.payload(s).expect("multiplier payload")[0];
                    harvested.insert(wdm.alpha[wd_state as usize].clone());
                }
            }
            let gamma = harvested.max_len();
            let wd1 = build_wd_machine(&harvested, &[Word::new()], alphabet, &rw)?;
            return Ok(AutomaticStructure {
                name: p.name.clone(),
                alphabet: alphabet.clone(),
                identity_multiplier: Automaton::identity_relation(&acceptor),
                word_acceptor: acceptor,
                multipliers,
                differences: harvested,
                wd1,
                gamma,
                stats: BuildStats {
                    iterations: iteration,
                    candidate_differences: diffs.len(),
                    seeded_differences: seeded,
                    kb_bound: rw.exact_len(),
                },
            });
        }

        let mut added = 0usize;
        for (u, v) in &repairs {
            for d in pair_differences(&rw, alphabet, u, v)? {
                if insert_capped(&mut diffs, d, cap) {
                    added += 1;
                }
            }
        }
        if added == 0 {
            return Err(Error::IterationCap(format!(
                "structure repair stalled at iteration {iteration}: {} witness \
                 pairs yielded no new differences ({} candidates)",
                repairs.len(),
                diffs.len()
            )));
        }
    }
    Err(Error::IterationCap(format!(
        "automatic structure did not converge within {} iterations \
         ({} candidate differences)",
        opts.max_iterations,
        diffs.len()
    )))
}

/// Run the axiom checks; returns witness pairs `(u,v)` of equal group
/// elements whose prefix differences repair the candidate. Empty means
/// every check passed and the structure is certified.
///
/// The checks are staged cheapest first, and a stage with failures
/// short-circuits the rest: composing multipliers of a badly wrong
/// candidate blows up the determinizations, while the projection and
/// identity checks repair most of the damage for a fraction of the cost.
fn collect_repairs(
    p: &Presentation,
    rw: &Rewriter,
    acceptor: &Automaton,
    multipliers: &[Automaton],
    identity: &Automaton,
    opts: &BuildOptions,
) -> Result<Vec<(Word, Word)>, Error> {
    let alphabet = &p.alphabet;
    let det = DetOptions {
        state_cap: opts.det_cap,
        keep_subsets: false,
    };
    let mut repairs: Vec<(Word, Word)> = Vec::new();

    // Both projections of every multiplier must cover the acceptor.
    for (xi, m) in multipliers.iter().enumerate() {
        let x = xi as Letter;
        for coordinate in [1u8, 2u8] {
            let proj = m.project(coordinate)?.determinize(&det)?;
            for labels in acceptor.diff_witnesses(&proj, opts.witness_cap)? {
                let w: Word = labels.iter().map(|&l| l as Letter).collect();
                let wnf = rw.try_reduce(&w)?;
                if wnf != w {
                    repairs.push((w, wnf));
                } else if coordinate == 1 {
                    let mut wx = w.clone();
                    wx.push(x);
                    let v = rw.try_reduce(&wx)?;
                    repairs.push((w, v));
                } else {
                    let mut wx = w.clone();
                    wx.push(alphabet.inverse(x));
                    let u = rw.try_reduce(&wx)?;
                    repairs.push((u, w));
                }
            }
        }
    }
    if !repairs.is_empty() {
        return Ok(repairs);
    }

    // The identity multiplier must be the diagonal.
    let diagonal = Automaton::identity_relation(acceptor);
    let pl = identity.pair_labels();
    for labels in identity.diff_witnesses(&diagonal, opts.witness_cap)? {
        let (u, v) = decode_pair_word(&pl, &labels);
        push_reducibility_repairs(rw, &[u, v], &mut repairs)?;
    }
    debug_assert!(diagonal.diff_witnesses(identity, 1)?.is_empty());
    if !repairs.is_empty() {
        return Ok(repairs);
    }

    // Multiplier composites along x·x⁻¹ and along every relator must be
    // the diagonal.
    let mut composite_words: Vec<Word> = (0..alphabet.len() as Letter)
        .map(|x| vec![x, alphabet.inverse(x)])
        .collect();
    composite_words.extend(p.relators.iter().cloned());
    for word in &composite_words {
        let mut composite = multipliers[word[0] as usize].clone();
        for &x in &word[1..] {
            composite = composite
                .compose(&multipliers[x as usize], &det)?
                .minimize();
        }
        for labels in diagonal.diff_witnesses(&composite, opts.witness_cap)? {
            let (w, _) = decode_pair_word(&pl, &labels);
            // Trace the multiplication along the word and repair every step.
            let mut prev = w.clone();
            for &x in word.iter() {
                let mut px = prev.clone();
                px.push(x);
                let next = rw.try_reduce(&px)?;
                repairs.push((prev, next.clone()));
                prev = next;
            }
        }
        for labels in composite.diff_witnesses(&diagonal, opts.witness_cap)? {
            let (u, v) = decode_pair_word(&pl, &labels);
            push_reducibility_repairs(rw, &[u, v], &mut repairs)?;
        }
        if !repairs.is_empty() {
            return Ok(repairs);
        }
    }
    Ok(repairs)
}

/// For each word, push its pair with its normal form when they differ.
fn push_reducibility_repairs(
    rw: &Rewriter,
    words: &[Word],
    repairs: &mut Vec<(Word, Word)>,
) -> Result<(), Error> {
    for w in words {
        let wnf = rw.try_reduce(w)?;
        if &wnf != w {
            repairs.push((w.clone(), wnf));
        }
    }
    Ok(())
}

/// Build a rewriting system and its automatic structure together, raising
/// the completion bound along a fixed ladder until the structure
/// converges. Presentations with finite confluent systems succeed on the
/// first rung.
pub fn build_structure_auto(
    p: &Presentation,
    limits: &KbLimits,
    opts: &BuildOptions,
) -> Result<(RewritingSystem, AutomaticStructure), Error> {
    const LADDER: [usize; 10] = [8, 10, 12, 16, 20, 24, 28, 32, 36, 40];
    let mut last_err: Option<Error> = None;
    for bound in LADDER {
        let system = match RewritingSystem::complete_bounded(p, bound, limits) {
            Ok(s) => s,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        match build_structure(p, &system, opts) {
            Ok(structure) => return Ok((system, structure)),
            Err(e @ (Error::CompletionCap(_) | Error::IterationCap(_))) => {
                last_err = Some(e);
            }
            Err(e) => return Err(e),
        }
        if system.confluent {
            // A confluent system cannot improve on a higher rung.
            break;
        }
    }
    Err(last_err.unwrap_or_else(|| {
        Error::IterationCap("no completion bound yielded a structure".into())
    }))
}

/// Exact short-lex reduction of arbitrary words through a certified
/// structure: repeatedly extend a normal form by one letter, and on each
/// extension that leaves the acceptor, search the word-difference machine
/// for the short-lex least equal word. The search runs over layered
/// difference states, so it never needs rewriting rules longer than the
/// certified horizon.
pub struct Reducer {
    base: usize,
    inverse: Vec<Letter>,
    acceptor: Automaton,
    /// real[(d * base + x) * base + y] = 1 + target difference state.
    real: Vec<u32>,
    /// pad[d * base + x] = 1 + target for `(x,$)`.
    pad: Vec<u32>,
}

impl Reducer {
    pub fn new(structure: &AutomaticStructure, rw: &Rewriter) -> Result<Self, Error> {
        let alphabet = &structure.alphabet;
        let base = alphabet.len();
        let diffs = &structure.differences;
        let n = diffs.len();
        let mut real = vec![0u32; n * base * base];
        let mut pad = vec![0u32; n * base];
        for di in 0..n as u32 {
            let d = diffs.word(di);
            for x in 0..base as Letter {
                for y in 0..base as Letter {
                    let d2 = diff_step(rw, alphabet, d, Some(x), Some(y))?;
                    if let Some(ti) = diffs.index_of(&d2) {
                        real[(di as usize * base + x as usize) * base + y as usize] = ti + 1;
                    }
                }
                let d2 = diff_step(rw, alphabet, d, Some(x), None)?;
                if let Some(ti) = diffs.index_of(&d2) {
                    pad[di as usize * base + x as usize] = ti + 1;
                }
            }
        }
        debug_assert_eq!(diffs.index_of(&[]), Some(0));
        Ok(Reducer {
            base,
            inverse: (0..base as Letter).map(|x| alphabet.inverse(x)).collect(),
            acceptor: structure.word_acceptor.clone(),
            real,
            pad,
        })
    }

    /// The short-lex normal form of an arbitrary word.
    pub fn reduce(&self, w: &[Letter]) -> Word {
        let mut r = Word::new();
        let mut state = self.acceptor.initial();
        for &x in w {
            match self.acceptor.step(state, x as u16) {
                Some(next) => {
                    r.push(x);
                    state = next;
                }
                None => {
                    r = self.slow_append(&r, x);
                    state = self.run_acceptor(&r);
                }
            }
        }
        r
    }

    /// The normal form of the inverse of an arbitrary word.
    pub fn invert(&self, w: &[Letter]) -> Word {
        let inv: Word = w.iter().rev().map(|&x| self.inverse[x as usize]).collect();
        self.reduce(&inv)
    }

    /// Whether a word is in normal form.
    pub fn is_normal(&self, w: &[Letter]) -> bool {
        self.acceptor.accepts(w)
    }

    fn run_acceptor(&self, w: &[Letter]) -> u32 {
        let mut s = self.acceptor.initial();
        for &x in w {
            s = self
                .acceptor
                .step(s, x as u16)
                .expect("normal form stays inside the acceptor");
        }
        s
    }

    /// `p` is a normal form but `p·x` is not: find the short-lex least
    /// word equal to `p·x` by a layered search through the difference
    /// machine along the fixed first coordinate `p·x`.
    fn slow_append(&self, p: &[Letter], x: Letter) -> Word {
        let n_diffs = self.pad.len() / self.base;
        let mut px: Word = p.to_vec();
        px.push(x);
        let n = px.len();

        // tail[i][d]: reading (px[i],$),(px[i+1],$),… from d ends at the
        // identity.
        let mut tail = vec![false; (n + 1) * n_diffs];
        tail[n * n_diffs] = true; // only the identity, which is state 0
        for i in (0..n).rev() {
            for d in 0..n_diffs {
                let t = self.pad[d * self.base + px[i] as usize];
                if t != 0 && tail[(i + 1) * n_diffs + (t - 1) as usize] {
                    tail[i * n_diffs + d] = true;
                }
            }
        }

        // Forward reachable difference sets, layer by layer.
        let mut layers = vec![false; (n + 1) * n_diffs];
        layers[0] = true; // identity difference at layer 0
        let mut k = None;
        for i in 0..=n {
            if (0..n_diffs).any(|d| layers[i * n_diffs + d] && tail[i * n_diffs + d]) {
                k = Some(i);
                break;
            }
            if i == n {
                break;
            }
            for d in 0..n_diffs {
                if !layers[i * n_diffs + d] {
                    continue;
                }
                for y in 0..self.base {
                    let t = self.real[(d * self.base + px[i] as usize) * self.base + y];
                    if t != 0 {
                        layers[(i + 1) * n_diffs + (t - 1) as usize] = true;
                    }
                }
            }
        }
        let k = k.expect("a certified structure reduces every extension");

        // Backward viability inside the chosen length.
        let mut viable = vec![false; (k + 1) * n_diffs];
        for d in 0..n_diffs {
            viable[k * n_diffs + d] = layers[k * n_diffs + d] && tail[k * n_diffs + d];
        }
        for i in (0..k).rev() {
            for d in 0..n_diffs {
                if !layers[i * n_diffs + d] {
                    continue;
                }
                for y in 0..self.base {
                    let t = self.real[(d * self.base + px[i] as usize) * self.base + y];
                    if t != 0 && viable[(i + 1) * n_diffs + (t - 1) as usize] {
                        viable[i * n_diffs + d] = true;
                        break;
                    }
                }
            }
        }

        // Greedy lexicographically least path of length k.
        let mut v = Word::with_capacity(k);
        let mut current = vec![0u32]; // difference states, identity first
        for i in 0..k {
            let mut next: Vec<u32> = Vec::new();
            for y in 0..self.base {
                for &d in &current {
                    let t = self.real[(d as usize * self.base + px[i] as usize) * self.base + y];
                    if t != 0 && viable[(i + 1) * n_diffs + (t - 1) as usize] {
                        next.push(t - 1);
                    }
                }
                if !next.is_empty() {
                    v.push(y as Letter);
                    break;
                }
            }
            next.sort_unstable();
            next.dedup();
            current = next;
        }
        debug_assert!(crate::alphabet::shortlex_cmp(&v, &px).is_lt());
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::build_word_acceptor;

    fn presentation(text: &str) -> Presentation {
        Presentation::parse(text, "t").unwrap()
    }

    fn structure_for(text: &str) -> (RewritingSystem, AutomaticStructure) {
        let p = presentation(text);
        build_structure_auto(&p, &KbLimits::default(), &BuildOptions::default()).unwrap()
    }

    #[test]
    fn free_group_structure_has_five_differences() {
        let (system, s) = structure_for("hgp v1\ngenerators: a b\ninverses: a=A b=B\n");
        assert_eq!(s.differences.len(), 5);
        assert_eq!(s.wd1.n_states(), 5);
        assert_eq!(s.gamma, 1);
        // The certified acceptor coincides with the factor-avoidance one.
        let w = build_word_acceptor(&system).unwrap();
        assert!(s.word_acceptor.language_equal(&w).unwrap());
    }

    #[test]
    fn integers_structure_has_three_differences() {
        let (system, s) = structure_for("hgp v1\ngenerators: a\ninverses: a=A\n");
        assert_eq!(s.differences.len(), 3);
        assert_eq!(s.wd1.n_states(), 3);
        let w = build_word_acceptor(&system).unwrap();
        assert!(s.word_acceptor.language_equal(&w).unwrap());
    }

    #[test]
    fn lattice_structure_matches_confluent_acceptor() {
        let (system, s) =
            structure_for("hgp v1\ngenerators: a b\ninverses: a=A b=B\nrelator: baBA\n");
        let w = build_word_acceptor(&system).unwrap();
        assert!(s.word_acceptor.language_equal(&w).unwrap());
        assert_eq!(s.stats.iterations, 1);
    }

    #[test]
    fn reducer_agrees_with_the_rewriter() {
        let (system, s) =
            structure_for("hgp v1\ngenerators: a b\ninverses: a=A b=B\nrelator: baBA\n");
        let rw = Rewriter::new(&system).unwrap();
        let reducer = Reducer::new(&s, &rw).unwrap();
        for text in ["", "a", "ba", "Abba", "BAba", "aaBBAA", "abABabAB"] {
            let w = s.alphabet.parse_word(text).unwrap();
            assert_eq!(reducer.reduce(&w), rw.reduce(&w), "word {text}");
        }
        let w = s.alphabet.parse_word("abAB").unwrap();
        assert!(reducer.reduce(&w).is_empty());
    }

    #[test]
    #[ignore = "diagnostic: stage sizes for the six-generator group"]
    fn g4_stage_probe() {
        let text = std::fs::read_to_string("../../presentations/g4.hgp").unwrap();
        let p = presentation(&text);
        for bound in [8usize, 10] {
            let t0 = std::time::Instant::now();
            let system =
                RewritingSystem::complete_bounded(&p, bound, &KbLimits::default()).unwrap();
            let rw = Rewriter::new(&system).unwrap();
            let diffs = seed_differences(&system, &rw);
            println!(
                "bound {bound}: rules={} seeds={} max_diff_len={} ({:.2?})",
                system.rules.len(),
                diffs.len(),
                diffs.max_len(),
                t0.elapsed()
            );
            let t0 = std::time::Instant::now();
            let reduc = reducibility_machine(&diffs, &p.alphabet, &rw).unwrap();
            println!("  reduc states={} ({:.2?})", reduc.n_states(), t0.elapsed());
            let t0 = std::time::Instant::now();
            let opts = BuildOptions::default();
            let acceptor = candidate_acceptor(&diffs, &p.alphabet, &rw, &opts).unwrap();
            println!(
                "  acceptor states={} ({:.2?})",
                acceptor.n_states(),
                t0.elapsed()
            );
            let t0 = std::time::Instant::now();
            let wdm = build_wd_machine(&diffs, &[], &p.alphabet, &rw).unwrap();
            let pairs = Automaton::pair_product(&acceptor, &acceptor);
            println!(
                "  wd={} pair_product={} ({:.2?})",
                wdm.n_states(),
                pairs.n_states(),
                t0.elapsed()
            );
            let t0 = std::time::Instant::now();
            let m0 = build_multiplier(&wdm, &rw.reduce(&[0]), &pairs);
            println!(
                "  multiplier[0] states={} ({:.2?})",
                m0.n_states(),
                t0.elapsed()
            );
        }
    }

    #[test]
    fn seeds_of_the_free_group() {
        let p = presentation("hgp v1\ngenerators: a b\ninverses: a=A b=B\n");
        let system = RewritingSystem::complete(&p, &KbLimits::default());
        let rw = Rewriter::new(&system).unwrap();
        let d = seed_differences(&system, &rw);
        let words: Vec<String> = d.iter().map(|w| p.alphabet.format_word(w)).collect();
        assert_eq!(words, ["", "A", "a", "B", "b"]);
    }
}
