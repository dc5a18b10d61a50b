//! Thinness of short-lex geodesic triangles.
//!
//! A geodesic triangle with vertices `a`, `b`, `c` has sides `u` (from `b`
//! to `c`), `v` (from `c` to `a`) and `w` (from `a` to `b`), each a word in
//! the language of the word acceptor. On each side there is a *meeting
//! vertex* — the point where the inscribed circle touches, at distance
//! `rho(a) = (l(v)+l(w)-l(u))/2` from the adjacent corner `a`, and likewise
//! for `b` and `c`. When the perimeter is odd the three `rho` values are
//! half-integers and each meeting vertex is taken one extra edge along the
//! clockwise side.
//!
//! Walking in step away from a corner along its two sides and reducing the
//! group element connecting the two walked prefixes yields the *triangle
//! difference words*: the set `D2` of all such partial differences together
//! with the set `D1` of the final ones (the elements joining the meeting
//! vertices). The longest word seen is the thinness constant of the sampled
//! triangles, and certifying that a difference set accounts for *every*
//! short-lex geodesic triangle turns the sampled constant into a proven
//! bound.
//!
//! The certificate is built from automata:
//!
//! * `build_frd` — the forward–reverse difference machine. It reads a padded
//!   pair `(x, y)` where `x` runs forward along one side leaving a corner
//!   and `y` runs along the reversed other side, while tracking the
//!   connecting group element through the difference set. Its second
//!   coordinate runs through the *reversed* word acceptor, so acceptance of
//!   `(u, vᴿ)` means both coordinates are normal forms and their difference
//!   stayed inside the set.
//! * `accept_triples` — triples of machine states, one per corner, that can
//!   appear simultaneously in one triangle: the subset components must link
//!   up cyclically and the three group elements must multiply to the
//!   identity.
//! * `build_ngp` — the non-deterministic geodesic-pair machine. It accepts a
//!   padded pair `(w1, w2)` exactly when `w1` and `w2` are the two sides at
//!   some corner of a short-lex geodesic triangle whose differences lie in
//!   the set. A path runs through the difference machine to a corner state,
//!   jumps (guessing an accept triple), and finishes with two reversed
//!   difference-machine runs for the far corners.
//!
//! Determinizing and minimizing the pair machine gives `GP`. Its language is
//! always contained in the set of pairs of normal forms; if the two are
//! *equal*, every geodesic pair bounds a triangle that the difference set
//! explains, and the constant is certified. Any missing pair is decoded into
//! a concrete triangle whose differences are adjoined, and the loop repeats.
//!
//! `compute_thinness` drives the whole loop: sample random triangles, build
//! the machines, compare with the product of the acceptor and its reverse,
//! refine until equality, a stall, a round cap or a resource cap.

use std::collections::HashMap;

use indexmap::IndexSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{Alphabet, Letter, Word};
use crate::autstruct::{AutomaticStructure, Reducer};
use crate::error::Error;
use crate::fsa::{decode_pair_word, Automaton, Builder, DetOptions, PairLabels};
use crate::rewrite::Rewriter;

/// Controls for `compute_thinness`.
#[derive(Debug, Clone)]
pub struct ThinnessOptions {
    /// Random triangles per sampling batch; batches repeat until a whole
    /// batch adds nothing.
    pub samples: usize,
    /// Maximum length of each random geodesic side.
    pub sample_len: usize,
    /// Seed for the deterministic sampling stream.
    pub seed: u64,
    /// Maximum number of build/compare/refine rounds.
    pub max_rounds: usize,
    /// Maximum counterexample pairs decoded per round.
    pub counterexample_cap: usize,
    /// Approximate memory budget in GiB; the automaton stages abort with a
    /// partial report when their state counts would exceed it.
    pub mem_cap_gib: usize,
    /// Bigon constants `(gamma, gamma')` from a hyperbolicity run; when
    /// present the report includes the bound for general geodesic triangles.
    pub bigon_constants: Option<(usize, usize)>,
}

impl Default for ThinnessOptions {
    fn default() -> Self {
        ThinnessOptions {
            samples: 10_000,
            sample_len: 50,
            seed: 1,
            max_rounds: 10,
            counterexample_cap: 500,
            mem_cap_gib: 8,
            bigon_constants: None,
        }
    }
}

/// Outcome of a thinness computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThinnessStatus {
    /// Every short-lex geodesic pair is explained by the difference set;
    /// the constant is certified.
    Verified,
    /// The computation stopped early; the reason is recorded verbatim.
    Inconclusive(String),
}

impl ThinnessStatus {
    pub fn is_verified(&self) -> bool {
        matches!(self, ThinnessStatus::Verified)
    }
}

/// Sizes recorded after each build/compare round.
#[derive(Debug, Clone)]
pub struct ThinnessRound {
    pub round: usize,
    /// Triangle difference words at the start of the round.
    pub differences: usize,
    /// How many of them are final corner differences.
    pub d1: usize,
    pub frd_states: usize,
    pub accept_triples: usize,
    pub ngp_states: usize,
    pub gp_states: usize,
    pub gp_min_states: usize,
    /// Geodesic pairs the machine failed to accept this round.
    pub counterexamples: usize,
}

/// Result of `compute_thinness`.
#[derive(Debug, Clone)]
pub struct ThinnessReport {
    pub name: String,
    pub status: ThinnessStatus,
    /// The final difference set.
    pub differences: TriangleDifferenceSet,
    /// Longest difference word: the thinness constant of short-lex geodesic
    /// triangles measured at corresponding vertices.
    pub delta_raw: usize,
    /// Bound covering the half-edge offsets of odd-perimeter triangles.
    pub delta_plus_one: usize,
    /// `general_triangle_bound` when bigon constants were supplied.
    pub general_bound: Option<usize>,
    pub rounds: Vec<ThinnessRound>,
}

impl ThinnessReport {
    pub fn final_round(&self) -> Option<&ThinnessRound> {
        self.rounds.last()
    }
}

/// Distances from the corners to the meeting vertices, stored doubled so
/// that odd perimeters need no fractions: the meeting vertex on side `w`
/// (respectively `u`, `v`) sits at distance `rho2_a/2` from `a`
/// (respectively `rho2_b/2` from `b`, `rho2_c/2` from `c`) along each of the
/// two sides leaving that corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeetingParameters {
    pub rho2_a: usize,
    pub rho2_b: usize,
    pub rho2_c: usize,
}

impl MeetingParameters {
    /// Whether the perimeter is odd; all three halved distances are then
    /// half-integers.
    pub fn odd(&self) -> bool {
        self.rho2_a % 2 == 1
    }
}

/// Meeting-vertex distances for side lengths `lu`, `lv`, `lw`. Fails when
/// the lengths violate the triangle inequality, which cannot happen for
/// genuine geodesic sides.
pub fn meeting_parameters(lu: usize, lv: usize, lw: usize) -> Result<MeetingParameters, Error> {
    if lu > lv + lw || lv > lu + lw || lw > lu + lv {
        return Err(Error::Precondition(format!(
            "side lengths {lu}, {lv}, {lw} violate the triangle inequality"
        )));
    }
    Ok(MeetingParameters {
        rho2_a: lv + lw - lu,
        rho2_b: lu + lw - lv,
        rho2_c: lu + lv - lw,
    })
}

/// Bound on the thinness of general (not short-lex) geodesic triangles,
/// derived from the short-lex constant and the bigon constants.
pub fn general_triangle_bound(delta: usize, gamma: usize, gamma_prime: usize) -> usize {
    delta + 2 * (gamma + gamma_prime) + 3
}

/// The set of triangle difference words, with the final corner differences
/// (`D1`) flagged inside the full set of partial differences (`D2`). The
/// identity is always present at index 0, and every word is a normal form.
#[derive(Debug, Clone, Default)]
pub struct TriangleDifferenceSet {
    words: IndexSet<Word>,
    d1: Vec<bool>,
}

impl TriangleDifferenceSet {
    pub fn new() -> Self {
        let mut words = IndexSet::new();
        words.insert(Word::new());
        TriangleDifferenceSet {
            words,
            d1: vec![false],
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Number of final corner differences.
    pub fn d1_len(&self) -> usize {
        self.d1.iter().filter(|&&f| f).count()
    }

    /// Number of partial differences; every final difference is also the
    /// last partial one of its corner walk, so this is the whole set.
    pub fn d2_len(&self) -> usize {
        self.words.len()
    }

    /// Length of the longest difference word.
    pub fn max_len(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn word(&self, i: u32) -> &Word {
        self.words.get_index(i as usize).expect("difference index")
    }

    pub fn index_of(&self, w: &[Letter]) -> Option<u32> {
        self.words.get_index_of(w).map(|i| i as u32)
    }

    pub fn is_d1(&self, i: u32) -> bool {
        self.d1[i as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }

    /// Record a partial difference, returning its index.
    pub fn insert_d2(&mut self, w: Word) -> u32 {
        let (i, new) = self.words.insert_full(w);
        if new {
            self.d1.push(false);
        }
        i as u32
    }

    /// Flag an already-recorded word as a final corner difference.
    pub fn mark_d1(&mut self, i: u32) {
        self.d1[i as usize] = true;
    }
}

/// Memo for corner-walk steps, keyed by indices into the growing difference
/// set. Indices are stable because the set only ever appends.
#[derive(Default)]
struct StepMemo {
    real: HashMap<(u32, Letter, Letter), u32>,
    pad: HashMap<(u32, Letter), u32>,
}

/// One synchronous step away from a corner: the walked letters are `x` on
/// the clockwise side and `y` on the reversed side, and the connecting
/// element is conjugated accordingly, `g' = x⁻¹ · g · y⁻¹` in the group.
fn step_real(
    d: &mut TriangleDifferenceSet,
    memo: &mut StepMemo,
    red: &Reducer,
    alphabet: &Alphabet,
    g: u32,
    x: Letter,
    y: Letter,
) -> u32 {
    if let Some(&t) = memo.real.get(&(g, x, y)) {
        return t;
    }
    let gw = d.word(g);
    let mut t = Word::with_capacity(gw.len() + 2);
    t.push(alphabet.inverse(x));
    t.extend_from_slice(gw);
    t.push(alphabet.inverse(y));
    let idx = d.insert_d2(red.reduce(&t));
    memo.real.insert((g, x, y), idx);
    idx
}

/// The extra half-edge step of an odd-perimeter corner: only the clockwise
/// side advances, `g' = x⁻¹ · g`.
fn step_pad(
    d: &mut TriangleDifferenceSet,
    memo: &mut StepMemo,
    red: &Reducer,
    alphabet: &Alphabet,
    g: u32,
    x: Letter,
) -> u32 {
    if let Some(&t) = memo.pad.get(&(g, x)) {
        return t;
    }
    let gw = d.word(g);
    let mut t = Word::with_capacity(gw.len() + 1);
    t.push(alphabet.inverse(x));
    t.extend_from_slice(gw);
    let idx = d.insert_d2(red.reduce(&t));
    memo.pad.insert((g, x), idx);
    idx
}

/// Walk one corner: `fwd` is the side leaving the corner clockwise, read
/// forwards, and `rev_src` is the side arriving counter-clockwise, read
/// backwards from its end. Returns the index of the final difference,
/// recording it as a meeting element when `observe` is set.
fn corner_into(
    d: &mut TriangleDifferenceSet,
    memo: &mut StepMemo,
    red: &Reducer,
    alphabet: &Alphabet,
    fwd: &[Letter],
    rev_src: &[Letter],
    rho2: usize,
    observe: bool,
) -> u32 {
    let whole = rho2 / 2;
    let mut g = 0u32;
    for i in 0..whole {
        g = step_real(d, memo, red, alphabet, g, fwd[i], rev_src[rev_src.len() - 1 - i]);
    }
    if rho2 % 2 == 1 {
        g = step_pad(d, memo, red, alphabet, g, fwd[whole]);
    }
    if observe {
        d.mark_d1(g);
    }
    g
}

/// Walk all three corners of a triangle with sides `u: b→c`, `v: c→a`,
/// `w: a→b`, recording every difference. The caller guarantees the sides
/// are normal forms closing up to the identity. Sampled triangles observe
/// their final differences as meeting elements; triangles replayed from
/// verification counterexamples only contribute containment data, so their
/// finals stay unmarked.
fn triangle_into(
    d: &mut TriangleDifferenceSet,
    memo: &mut StepMemo,
    red: &Reducer,
    alphabet: &Alphabet,
    u: &[Letter],
    v: &[Letter],
    w: &[Letter],
    observe: bool,
) -> Result<(u32, u32, u32), Error> {
    let mp = meeting_parameters(u.len(), v.len(), w.len())?;
    let ga = corner_into(d, memo, red, alphabet, w, v, mp.rho2_a, observe);
    let gb = corner_into(d, memo, red, alphabet, u, w, mp.rho2_b, observe);
    let gc = corner_into(d, memo, red, alphabet, v, u, mp.rho2_c, observe);
    // The three final differences form a closed inner triangle.
    debug_assert!(
        {
            let mut t = d.word(gc).clone();
            t.extend_from_slice(d.word(gb));
            t.extend_from_slice(d.word(ga));
            red.reduce(&t).is_empty()
        },
        "corner differences do not close up"
    );
    Ok((ga, gb, gc))
}

/// Difference words of a single geodesic triangle with sides `u: b→c`,
/// `v: c→a`, `w: a→b`. Returns the three final corner differences (in
/// corner order `a`, `b`, `c`) and all partial differences in walk order.
/// The sides must be normal forms and `w·u·v` must represent the identity.
pub fn triangle_differences(
    u: &[Letter],
    v: &[Letter],
    w: &[Letter],
    alphabet: &Alphabet,
    red: &Reducer,
) -> Result<(Vec<Word>, Vec<Word>), Error> {
    for (side, name) in [(u, "u"), (v, "v"), (w, "w")] {
        if !red.is_normal(side) {
            return Err(Error::Precondition(format!(
                "triangle side {name} is not an accepted normal form"
            )));
        }
    }
    let mut closure: Word = w.to_vec();
    closure.extend_from_slice(u);
    closure.extend_from_slice(v);
    if !red.reduce(&closure).is_empty() {
        return Err(Error::Precondition(
            "triangle sides do not close up: w·u·v must be the identity".into(),
        ));
    }
    let mut d = TriangleDifferenceSet::new();
    let mut memo = StepMemo::default();
    let (ga, gb, gc) = triangle_into(&mut d, &mut memo, red, alphabet, u, v, w, true)?;
    let d1 = vec![d.word(ga).clone(), d.word(gb).clone(), d.word(gc).clone()];
    let d2 = d.iter().cloned().collect();
    Ok((d1, d2))
}

/// A uniformly random accepted word of length at most `max_len`: pick a
/// target length, then walk the acceptor choosing uniformly among the
/// outgoing edges.
fn random_normal_word(acceptor: &Automaton, max_len: usize, rng: &mut ChaCha8Rng) -> Word {
    let target = rng.gen_range(0..=max_len);
    let mut s = acceptor.initial();
    let mut w = Word::new();
    for _ in 0..target {
        let edges = acceptor.edges_from(s);
        if edges.is_empty() {
            break;
        }
        let e = edges[rng.gen_range(0..edges.len())];
        w.push(e.label as Letter);
        s = e.to;
    }
    w
}

const MAX_SAMPLE_BATCHES: usize = 64;

/// Seed a difference set from random geodesic triangles: two random normal
/// forms `u`, `v` and the normal form `w` of `(u·v)⁻¹` close up into a
/// triangle. Batches of `samples` triangles repeat until a whole batch adds
/// no new word and no new final flag. The degenerate point triangle is
/// walked first so the identity is always a final difference.
pub fn sample_triangle_differences(
    structure: &AutomaticStructure,
    red: &Reducer,
    samples: usize,
    max_len: usize,
    seed: u64,
) -> Result<TriangleDifferenceSet, Error> {
    let alphabet = &structure.alphabet;
    let acceptor = &structure.word_acceptor;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = TriangleDifferenceSet::new();
    let mut memo = StepMemo::default();
    triangle_into(&mut d, &mut memo, red, alphabet, &[], &[], &[], true)?;
    let samples = samples.max(1);
    for _ in 0..MAX_SAMPLE_BATCHES {
        let before = (d.len(), d.d1_len());
        for _ in 0..samples {
            let u = random_normal_word(acceptor, max_len, &mut rng);
            let v = random_normal_word(acceptor, max_len, &mut rng);
            let mut uv = u.clone();
            uv.extend_from_slice(&v);
            let w = red.invert(&uv);
            triangle_into(&mut d, &mut memo, red, alphabet, &u, &v, &w, true)?;
        }
        if (d.len(), d.d1_len()) == before {
            break;
        }
    }
    Ok(d)
}

type FrdKey = (u32, u32, u32, u8);

fn intern_frd(
    states: &mut IndexSet<FrdKey>,
    b: &mut Builder,
    d: &TriangleDifferenceSet,
    key: FrdKey,
) -> u32 {
    let (idx, new) = states.insert_full(key);
    if new {
        let s = b.add_state();
        debug_assert_eq!(s as usize, idx);
        b.set_accepting(s, d.is_d1(key.2));
        b.set_payload(s, Box::from([key.0, key.1, key.2, key.3 as u32]));
    }
    idx as u32
}

/// The forward–reverse difference machine over a difference set. It reads
/// padded pairs `(x, y)` with `x` never the padding symbol: `x` drives the
/// word acceptor, `y` drives the reversed acceptor `wr` (built by
/// `reverse_with_subsets`), and the connecting element moves by
/// `g' = x⁻¹·g·y⁻¹`, or `g' = x⁻¹·g` on the final padded step. A transition
/// exists only while `g'` stays inside the set; the padded step is terminal.
/// States accept when their element is a final corner difference. Each
/// state's payload records `[acceptor state, reverse state, difference
/// index, padded flag]`.
pub fn build_frd(
    d: &TriangleDifferenceSet,
    w: &Automaton,
    wr: &Automaton,
    alphabet: &Alphabet,
    red: &Reducer,
    state_cap: Option<usize>,
) -> Result<Automaton, Error> {
    let base = alphabet.len();
    let ng = d.len();
    debug_assert!(d.word(0).is_empty());
    let pl = PairLabels::new(base);

    // Dense step tables over difference indices; 0 marks a step that leaves
    // the set.
    let mut real = vec![0u32; ng * base * base];
    let mut pad = vec![0u32; ng * base];
    for g in 0..ng {
        let gw = d.word(g as u32).clone();
        for x in 0..base as Letter {
            let mut t = Word::with_capacity(gw.len() + 2);
            t.push(alphabet.inverse(x));
            t.extend_from_slice(&gw);
            if let Some(i) = d.index_of(&red.reduce(&t)) {
                pad[g * base + x as usize] = i + 1;
            }
            for y in 0..base as Letter {
                t.push(alphabet.inverse(y));
                if let Some(i) = d.index_of(&red.reduce(&t)) {
                    real[(g * base + x as usize) * base + y as usize] = i + 1;
                }
                t.pop();
            }
        }
    }

    let mut states: IndexSet<FrdKey> = IndexSet::new();
    let mut b = Builder::new(2, alphabet.names());
    let start = intern_frd(&mut states, &mut b, d, (w.initial(), wr.initial(), 0, 0));
    b.add_initial(start);
    let mut i = 0usize;
    while i < states.len() {
        if let Some(cap) = state_cap {
            if states.len() > cap {
                return Err(Error::ResourceCap(format!(
                    "difference machine exceeded {cap} states over {ng} difference words"
                )));
            }
        }
        let &(sig, ws, g, flag) = states.get_index(i).unwrap();
        if flag == 0 {
            for x in 0..base {
                let Some(sn) = w.step(sig, x as u16) else {
                    continue;
                };
                for y in 0..base {
                    let Some(wn) = wr.step(ws, y as u16) else {
                        continue;
                    };
                    let t = real[(g as usize * base + x) * base + y];
                    if t != 0 {
                        let id = intern_frd(&mut states, &mut b, d, (sn, wn, t - 1, 0));
                        b.add_edge(i as u32, pl.encode(Some(x as Letter), Some(y as Letter)), id);
                    }
                }
                let t = pad[g as usize * base + x];
                if t != 0 {
                    let id = intern_frd(&mut states, &mut b, d, (sn, ws, t - 1, 1));
                    b.add_edge(i as u32, pl.encode(Some(x as Letter), None), id);
                }
            }
        }
        i += 1;
    }
    let raw = b.build();

    // Sweep out useless dead ends: a state with no onward transition can
    // only matter by accepting, so a non-accepting one takes no part in any
    // run. Such a state never occurs in a reverse-image subset either (that
    // would need an onward edge), so dropping it changes no derived
    // language.
    let n = raw.n_states();
    let alive: Vec<bool> = (0..n as u32)
        .map(|s| !raw.edges_from(s).is_empty() || raw.is_accepting(s))
        .collect();
    debug_assert!(alive[raw.initial() as usize]);
    if alive.iter().all(|&k| k) {
        Ok(raw)
    } else {
        Ok(raw.renumber_bfs(&alive))
    }
}

/// A compatible triple of difference-machine states, one per corner in the
/// cyclic order `a`, `b`, `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AcceptTriple {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

/// All state triples that can occur simultaneously at the three corners of
/// one triangle: each corner's acceptor component must lie in the next
/// corner's reverse-acceptor subset (the three half-sides chain up), and
/// the three connecting elements must satisfy `g_c·g_b·g_a = 1`.
pub fn accept_triples(
    frd: &Automaton,
    wr: &Automaton,
    d: &TriangleDifferenceSet,
    red: &Reducer,
    cap: Option<usize>,
) -> Result<Vec<AcceptTriple>, Error> {
    let mut out = Vec::new();
    scan_triples(frd, wr, d, red, cap, &mut |a, b, c| {
        out.push(AcceptTriple { a, b, c });
        if let Some(cap) = cap {
            if out.len() > cap {
                return Err(Error::ResourceCap(format!(
                    "more than {cap} accept triples over {} states",
                    frd.n_states()
                )));
            }
        }
        Ok(())
    })?;
    Ok(out)
}

/// Core of the triple enumeration: calls `f(a, b, c)` for every state
/// triple satisfying the four acceptance conditions, in canonical state
/// order. `cap` guards the quadratic scan itself.
fn scan_triples(
    frd: &Automaton,
    wr: &Automaton,
    d: &TriangleDifferenceSet,
    red: &Reducer,
    cap: Option<usize>,
    f: &mut dyn FnMut(u32, u32, u32) -> Result<(), Error>,
) -> Result<(), Error> {
    let n = frd.n_states();
    let ng = d.len();
    if let Some(cap) = cap {
        let work = n.saturating_mul(n).max(ng.saturating_mul(ng));
        if work > cap.saturating_mul(256) {
            return Err(Error::ResourceCap(format!(
                "accept-triple enumeration over {n} states and {ng} difference words \
                 exceeds the work budget"
            )));
        }
    }
    if !wr.has_payloads() {
        return Err(Error::Precondition(
            "reversed acceptor must carry subset payloads".into(),
        ));
    }
    let mut sig = vec![0u32; n];
    let mut wsb = vec![0u32; n];
    let mut gdx = vec![0u32; n];
    for s in 0..n {
        let p = frd
            .payload(s as u32)
            .ok_or_else(|| Error::Precondition("difference machine must carry payloads".into()))?;
        sig[s] = p[0];
        wsb[s] = p[1];
        gdx[s] = p[2];
    }

    // Bitsets over acceptor states, one per reversed-acceptor state.
    let mut nw = 0u32;
    for ws in 0..wr.n_states() as u32 {
        for &q in wr.payload(ws).unwrap_or(&[]) {
            nw = nw.max(q + 1);
        }
    }
    for &s in &sig {
        nw = nw.max(s + 1);
    }
    let blocks = (nw as usize + 63) / 64;
    let mut bits = vec![0u64; wr.n_states() * blocks];
    for ws in 0..wr.n_states() {
        for &q in wr.payload(ws as u32).unwrap_or(&[]) {
            bits[ws * blocks + q as usize / 64] |= 1 << (q % 64);
        }
    }
    let chains = |ws: u32, q: u32| bits[ws as usize * blocks + q as usize / 64] >> (q % 64) & 1 == 1;

    // For each pair of corner elements, the unique third one closing the
    // product: g_c = (g_b·g_a)⁻¹.
    let mut need = vec![u32::MAX; ng * ng];
    for ga in 0..ng {
        for gb in 0..ng {
            let mut t = d.word(gb as u32).clone();
            t.extend_from_slice(d.word(ga as u32));
            if let Some(i) = d.index_of(&red.invert(&t)) {
                need[ga * ng + gb] = i;
            }
        }
    }

    let mut by_g: Vec<Vec<u32>> = vec![Vec::new(); ng];
    for s in 0..n {
        by_g[gdx[s] as usize].push(s as u32);
    }

    for a in 0..n {
        for b in 0..n {
            if !chains(wsb[b], sig[a]) {
                continue;
            }
            let gc = need[gdx[a] as usize * ng + gdx[b] as usize];
            if gc == u32::MAX {
                continue;
            }
            for &c in &by_g[gc as usize] {
                if chains(wsb[c as usize], sig[b]) && chains(wsb[a], sig[c as usize]) {
                    f(a as u32, b as u32, c)?;
                }
            }
        }
    }
    Ok(())
}

/// Finished-leg marker inside geodesic-pair states.
const DONE: u32 = u32::MAX;

/// Reversed difference machine explored lazily as subsets: a leg state is a
/// set of difference-machine states that could still complete the far half
/// of a side, and it accepts when it contains the machine's start state.
struct RevFrd {
    base: usize,
    pl: PairLabels,
    frd_initial: u32,
    inv: HashMap<(u16, u32), Vec<u32>>,
    subsets: IndexSet<Box<[u32]>>,
    accepting: Vec<bool>,
    by_second: HashMap<(u32, Letter), Box<[u32]>>,
    by_first: HashMap<(u32, Letter), Box<[u32]>>,
    pad_any: HashMap<u32, Box<[u32]>>,
    pad_of: HashMap<(u32, Letter), Option<u32>>,
}

impl RevFrd {
    fn new(frd: &Automaton) -> Self {
        let base = frd.letters().len();
        let mut inv: HashMap<(u16, u32), Vec<u32>> = HashMap::new();
        for s in 0..frd.n_states() as u32 {
            for e in frd.edges_from(s) {
                inv.entry((e.label, e.to)).or_default().push(s);
            }
        }
        RevFrd {
            base,
            pl: frd.pair_labels(),
            frd_initial: frd.initial(),
            inv,
            subsets: IndexSet::new(),
            accepting: Vec::new(),
            by_second: HashMap::new(),
            by_first: HashMap::new(),
            pad_any: HashMap::new(),
            pad_of: HashMap::new(),
        }
    }

    fn intern(&mut self, set: Vec<u32>) -> u32 {
        let acc = set.binary_search(&self.frd_initial).is_ok();
        let (i, new) = self.subsets.insert_full(set.into_boxed_slice());
        if new {
            self.accepting.push(acc);
        }
        i as u32
    }

    fn is_accepting(&self, t: u32) -> bool {
        self.accepting[t as usize]
    }

    fn preimage(&self, t: u32, label: u16) -> Vec<u32> {
        let mut out = Vec::new();
        for &s in self.subsets.get_index(t as usize).unwrap().iter() {
            if let Some(srcs) = self.inv.get(&(label, s)) {
                out.extend_from_slice(srcs);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Successor subsets when the leg consumes `p` through the second label
    /// coordinate, one per choice of quantified first letter.
    fn second(&mut self, t: u32, p: Letter) -> Box<[u32]> {
        if let Some(v) = self.by_second.get(&(t, p)) {
            return v.clone();
        }
        let mut outs = Vec::new();
        for x in 0..self.base as Letter {
            let img = self.preimage(t, self.pl.encode(Some(x), Some(p)));
            if !img.is_empty() {
                outs.push(self.intern(img));
            }
        }
        outs.sort_unstable();
        outs.dedup();
        let b: Box<[u32]> = outs.into();
        self.by_second.insert((t, p), b.clone());
        b
    }

    /// Successor subsets when the leg consumes `q` through the first label
    /// coordinate, one per choice of quantified second letter.
    fn first(&mut self, t: u32, q: Letter) -> Box<[u32]> {
        if let Some(v) = self.by_first.get(&(t, q)) {
            return v.clone();
        }
        let mut outs = Vec::new();
        for y in 0..self.base as Letter {
            let img = self.preimage(t, self.pl.encode(Some(q), Some(y)));
            if !img.is_empty() {
                outs.push(self.intern(img));
            }
        }
        outs.sort_unstable();
        outs.dedup();
        let b: Box<[u32]> = outs.into();
        self.by_first.insert((t, q), b.clone());
        b
    }

    /// Successors through a padded label `(x, $)` with `x` quantified.
    fn pad_steps(&mut self, t: u32) -> Box<[u32]> {
        if let Some(v) = self.pad_any.get(&t) {
            return v.clone();
        }
        let mut outs = Vec::new();
        for x in 0..self.base as Letter {
            let img = self.preimage(t, self.pl.encode(Some(x), None));
            if !img.is_empty() {
                outs.push(self.intern(img));
            }
        }
        outs.sort_unstable();
        outs.dedup();
        let b: Box<[u32]> = outs.into();
        self.pad_any.insert(t, b.clone());
        b
    }

    /// Successor through the single padded label `(x, $)`.
    fn pad_step(&mut self, t: u32, x: Letter) -> Option<u32> {
        if let Some(&v) = self.pad_of.get(&(t, x)) {
            return v;
        }
        let img = self.preimage(t, self.pl.encode(Some(x), None));
        let v = if img.is_empty() {
            None
        } else {
            Some(self.intern(img))
        };
        self.pad_of.insert((t, x), v);
        v
    }
}

/// A geodesic-pair state: still inside the difference machine, or running
/// the two reversed legs (`DONE` marks a finished leg).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Ngp {
    Corner(u32),
    Legs(u32, u32),
}

/// The non-deterministic geodesic-pair machine. It reads padded pairs
/// `(p, q)` where `p` runs along the side `a→b` and `q` along the reversed
/// side `c→a`; acceptance means the pair are two sides of a short-lex
/// geodesic triangle whose differences lie inside the set behind `frd`.
///
/// A run follows the difference machine while both words walk the half-sides
/// at corner `a`, then jumps: an accept triple is guessed, the two far
/// corners' machines start from their final states, and the run finishes by
/// stepping those two machines backwards (their quantified coordinates walk
/// the inner half-sides `d→b` and `d→c`). Odd-perimeter triangles absorb all
/// three terminal padded steps into the jump itself, so padding never
/// appears mid-word. A corner state also accepts outright when its triple
/// with two start states is compatible — the degenerate case `b = c` of two
/// geodesics with the same endpoints.
pub fn build_ngp(
    frd: &Automaton,
    triples: &[AcceptTriple],
    state_cap: Option<usize>,
) -> Result<Automaton, Error> {
    let pl = frd.pair_labels();
    let n_labels = pl.count() as u16;
    let frd_init = frd.initial();

    let mut rev = RevFrd::new(frd);

    // Jumps guess an accept triple; each leg then runs the reversed
    // difference machine starting from the far corner's state.
    let mut jumps: HashMap<u32, Vec<(u32, u32)>> = HashMap::new();
    let mut bc = vec![false; frd.n_states()];
    let mut leg_start = vec![false; frd.n_states()];
    for t in triples {
        if t.b == frd_init && t.c == frd_init {
            bc[t.a as usize] = true;
        }
        leg_start[t.b as usize] = true;
        leg_start[t.c as usize] = true;
        jumps.entry(t.a).or_default().push((t.b, t.c));
    }
    let mut singleton: HashMap<u32, u32> = HashMap::new();
    for s in 0..frd.n_states() as u32 {
        if leg_start[s as usize] {
            let id = rev.intern(vec![s]);
            singleton.insert(s, id);
        }
    }

    let mut states: IndexSet<Ngp> = IndexSet::new();
    let mut b = Builder::new(2, frd.letters());
    let edge_cap = state_cap.map(|c| c.saturating_mul(48).max(1 << 20));
    let mut n_edges = 0usize;

    let intern_ngp = |st: Ngp,
                          states: &mut IndexSet<Ngp>,
                          b: &mut Builder,
                          rev: &RevFrd,
                          bc: &[bool]|
     -> u32 {
        let (idx, new) = states.insert_full(st);
        if new {
            let s = b.add_state();
            debug_assert_eq!(s as usize, idx);
            let acc = match st {
                Ngp::Corner(sig) => bc[sig as usize],
                Ngp::Legs(r1, r2) => {
                    (r1 == DONE || rev.is_accepting(r1)) && (r2 == DONE || rev.is_accepting(r2))
                }
            };
            b.set_accepting(s, acc);
        }
        idx as u32
    };

    let start = intern_ngp(Ngp::Corner(frd_init), &mut states, &mut b, &rev, &bc);
    b.add_initial(start);

    let mut succs: Vec<Ngp> = Vec::new();
    let mut i = 0usize;
    while i < states.len() {
        if let Some(cap) = state_cap {
            if states.len() > cap || edge_cap.is_some_and(|ec| n_edges > ec) {
                return Err(Error::ResourceCap(format!(
                    "geodesic-pair machine exceeded its budget at {} states, {} edges",
                    states.len(),
                    n_edges
                )));
            }
        }
        let &st = states.get_index(i).unwrap();
        for label in 0..n_labels {
            succs.clear();
            let (p, q) = pl.decode(label);
            match st {
                Ngp::Corner(sig) => match (p, q) {
                    (Some(x), Some(y)) => {
                        if let Some(t) = frd.step(sig, label) {
                            succs.push(Ngp::Corner(t));
                        }
                        if let Some(js) = jumps.get(&sig) {
                            for &(tb, tc) in js {
                                let s1 = rev.second(singleton[&tb], x);
                                if s1.is_empty() {
                                    continue;
                                }
                                let s2 = rev.first(singleton[&tc], y);
                                for &r1 in s1.iter() {
                                    for &r2 in s2.iter() {
                                        succs.push(Ngp::Legs(r1, r2));
                                    }
                                }
                            }
                        }
                        // Odd perimeter: the corner's own padded step and
                        // both legs' padded steps happen inside the jump.
                        if let Some(sp) = frd.step(sig, pl.encode(Some(x), None)) {
                            if let Some(js) = jumps.get(&sp) {
                                for &(tb, tc) in js {
                                    let Some(r2) = rev.pad_step(singleton[&tc], y) else {
                                        continue;
                                    };
                                    let s1 = rev.pad_steps(singleton[&tb]);
                                    for &r1 in s1.iter() {
                                        succs.push(Ngp::Legs(r1, r2));
                                    }
                                }
                            }
                        }
                    }
                    (Some(x), None) => {
                        // The reversed side is exhausted: the far corner `c`
                        // must be trivial, i.e. its leg starts accepted.
                        if let Some(js) = jumps.get(&sig) {
                            for &(tb, tc) in js {
                                if tc != frd_init {
                                    continue;
                                }
                                let s1 = rev.second(singleton[&tb], x);
                                for &r1 in s1.iter() {
                                    succs.push(Ngp::Legs(r1, DONE));
                                }
                            }
                        }
                    }
                    (None, Some(y)) => {
                        if let Some(js) = jumps.get(&sig) {
                            for &(tb, tc) in js {
                                if tb != frd_init {
                                    continue;
                                }
                                let s2 = rev.first(singleton[&tc], y);
                                for &r2 in s2.iter() {
                                    succs.push(Ngp::Legs(DONE, r2));
                                }
                            }
                        }
                    }
                    (None, None) => unreachable!("padded pair labels exclude ($,$)"),
                },
                Ngp::Legs(pi1, pi2) => {
                    let s1: Vec<u32> = match p {
                        Some(x) => {
                            if pi1 == DONE {
                                Vec::new()
                            } else {
                                rev.second(pi1, x).into_vec()
                            }
                        }
                        None => {
                            if pi1 == DONE || rev.is_accepting(pi1) {
                                vec![DONE]
                            } else {
                                Vec::new()
                            }
                        }
                    };
                    if !s1.is_empty() {
                        let s2: Vec<u32> = match q {
                            Some(y) => {
                                if pi2 == DONE {
                                    Vec::new()
                                } else {
                                    rev.first(pi2, y).into_vec()
                                }
                            }
                            None => {
                                if pi2 == DONE || rev.is_accepting(pi2) {
                                    vec![DONE]
                                } else {
                                    Vec::new()
                                }
                            }
                        };
                        for &r1 in &s1 {
                            for &r2 in &s2 {
                                succs.push(Ngp::Legs(r1, r2));
                            }
                        }
                    }
                }
            }
            succs.sort_unstable();
            succs.dedup();
            for k in 0..succs.len() {
                let id = intern_ngp(succs[k], &mut states, &mut b, &rev, &bc);
                b.add_edge(i as u32, label, id);
            }
            n_edges += succs.len();
        }
        i += 1;
    }
    Ok(b.build())
}

/// Verify the thinness of short-lex geodesic triangles and compute the
/// constant. Samples random triangles, then alternates building the
/// geodesic-pair machine from the current difference set and comparing its
/// language against all pairs of normal forms, adjoining the differences of
/// any missed pair, until the languages agree or a cap is hit. Resource and
/// iteration caps surface as an inconclusive status on the partial report;
/// hard errors are returned as such.
pub fn compute_thinness(
    structure: &AutomaticStructure,
    rw: &Rewriter,
    opts: &ThinnessOptions,
) -> Result<ThinnessReport, Error> {
    let red = Reducer::new(structure, rw)?;
    let alphabet = &structure.alphabet;
    let w = &structure.word_acceptor;

    let budget = opts.mem_cap_gib.max(1) << 30;
    let frd_cap = budget / 32_768;
    let triple_cap = budget / 64;
    let ngp_cap = budget / 1_024;
    let det_cap = budget / 512;

    let wr = w.reverse_with_subsets(Some(1 << 20))?;
    let product = Automaton::pair_product(w, &wr).minimize();
    let pl = product.pair_labels();

    let mut d =
        sample_triangle_differences(structure, &red, opts.samples, opts.sample_len, opts.seed)?;
    let mut memo = StepMemo::default();
    let mut rounds: Vec<ThinnessRound> = Vec::new();
    let mut status: Option<ThinnessStatus> = None;

    for round in 1..=opts.max_rounds.max(1) {
        let differences = d.len();
        let d1 = d.d1_len();
        let stage = (|| -> Result<(Automaton, usize, Automaton, Automaton, Automaton), Error> {
            let frd = build_frd(&d, w, &wr, alphabet, &red, Some(frd_cap))?;
            let triples = accept_triples(&frd, &wr, &d, &red, Some(triple_cap))?;
            let n_triples = triples.len();
            let ngp = build_ngp(&frd, &triples, Some(ngp_cap))?;
            let gp = ngp.determinize(&DetOptions {
                state_cap: Some(det_cap),
                keep_subsets: false,
            })?;
            let gp_min = gp.minimize();
            Ok((frd, n_triples, ngp, gp, gp_min))
        })();
        let (frd, n_triples, ngp, gp, gp_min) = match stage {
            Ok(t) => t,
            Err(Error::ResourceCap(msg)) => {
                status = Some(ThinnessStatus::Inconclusive(format!(
                    "round {round}: {msg}"
                )));
                break;
            }
            Err(e) => return Err(e),
        };

        // By construction the machine only accepts pairs of normal forms;
        // anything else means the construction itself is broken.
        if !gp_min.diff_witnesses(&product, 1)?.is_empty() {
            return Err(Error::InvalidAutomaton(
                "geodesic-pair machine accepts a pair outside the normal-form product".into(),
            ));
        }
        let witnesses = product.diff_witnesses(&gp_min, opts.counterexample_cap.max(1))?;
        rounds.push(ThinnessRound {
            round,
            differences,
            d1,
            frd_states: frd.n_states(),
            accept_triples: n_triples,
            ngp_states: ngp.n_states(),
            gp_states: gp.n_states(),
            gp_min_states: gp_min.n_states(),
            counterexamples: witnesses.len(),
        });
        if witnesses.is_empty() {
            status = Some(ThinnessStatus::Verified);
            break;
        }

        let before = (d.len(), d.d1_len());
        for labels in &witnesses {
            let (w1, w2) = decode_pair_word(&pl, labels);
            let v: Word = w2.iter().rev().copied().collect();
            let mut vw = v.clone();
            vw.extend_from_slice(&w1);
            let u = red.invert(&vw);
            // The mirror triangle — the same three vertices with every side
            // replaced by the normal form of its inverse — is an equally
            // valid geodesic triangle, and its walk yields the inverse
            // difference words. Sampling covers both orientations by chance;
            // here both must be walked explicitly or the difference set
            // stays lopsided.
            let (ui, vi, wi) = (red.invert(&u), red.invert(&v), red.invert(&w1));
            triangle_into(&mut d, &mut memo, &red, alphabet, &u, &v, &w1, true)?;
            triangle_into(&mut d, &mut memo, &red, alphabet, &ui, &wi, &vi, true)?;
        }
        if (d.len(), d.d1_len()) == before {
            status = Some(ThinnessStatus::Inconclusive(format!(
                "round {round}: {} missed geodesic pairs added no new differences",
                witnesses.len()
            )));
            break;
        }
    }

    let status = status.unwrap_or_else(|| {
        ThinnessStatus::Inconclusive(format!(
            "difference set still growing after {} rounds",
            opts.max_rounds
        ))
    });
    let delta_raw = d.max_len();
    Ok(ThinnessReport {
        name: structure.name.clone(),
        status,
        delta_raw,
        delta_plus_one: delta_raw + 1,
        general_bound: opts
            .bigon_constants
            .map(|(g, gp)| general_triangle_bound(delta_raw, g, gp)),
        rounds,
        differences: d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autstruct::{build_structure_auto, BuildOptions};
    use crate::presentation::Presentation;
    use crate::rewrite::KbLimits;

    fn structure(text: &str) -> (Rewriter, AutomaticStructure) {
        let p = Presentation::parse(text, "t").unwrap();
        let (system, s) =
            build_structure_auto(&p, &KbLimits::default(), &BuildOptions::default()).unwrap();
        let rw = Rewriter::new(&system).unwrap();
        (rw, s)
    }

    #[test]
    fn meeting_parameters_match_worked_examples() {
        let mp = meeting_parameters(3, 4, 5).unwrap();
        assert_eq!((mp.rho2_a, mp.rho2_b, mp.rho2_c), (6, 4, 2));
        assert!(!mp.odd());

        let mp = meeting_parameters(2, 4, 3).unwrap();
        assert_eq!((mp.rho2_a, mp.rho2_b, mp.rho2_c), (5, 1, 3));
        assert!(mp.odd());

        let mp = meeting_parameters(0, 4, 4).unwrap();
        assert_eq!((mp.rho2_a, mp.rho2_b, mp.rho2_c), (8, 0, 0));

        assert!(matches!(
            meeting_parameters(5, 1, 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn free_group_tripod_differences_are_trivial() {
        let (rw, s) = structure("hgp v1\ngenerators: a b\ninverses: a=A b=B\n");
        let red = Reducer::new(&s, &rw).unwrap();
        let names = s.alphabet.names().to_vec();
        let letter = |c: &str| names.iter().position(|n| n == c).unwrap() as Letter;
        // Sides u: b→c, v: c→a, w: a→b of the tripod through the origin.
        let u = vec![letter("B"), letter("B")];
        let v = vec![letter("b"), letter("A")];
        let w = vec![letter("a"), letter("b")];
        let (d1, d2) = triangle_differences(&u, &v, &w, &s.alphabet, &red).unwrap();
        assert!(d1.iter().all(|g| g.is_empty()));
        assert_eq!(d2, vec![Word::new()]);
    }

    #[test]
    fn degenerate_point_triangle_is_flagged_final() {
        let (rw, s) = structure("hgp v1\ngenerators: a\ninverses: a=A\n");
        let red = Reducer::new(&s, &rw).unwrap();
        let (d1, d2) = triangle_differences(&[], &[], &[], &s.alphabet, &red).unwrap();
        assert_eq!(d1, vec![Word::new(); 3]);
        assert_eq!(d2, vec![Word::new()]);
    }

    #[test]
    fn triangle_differences_reject_open_sides() {
        let (rw, s) = structure("hgp v1\ngenerators: a b\ninverses: a=A b=B\n");
        let red = Reducer::new(&s, &rw).unwrap();
        let a = vec![0 as Letter];
        assert!(matches!(
            triangle_differences(&a, &a, &a, &s.alphabet, &red),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn free_group_difference_machine_pairs_letterwise_inverses() {
        let (rw, s) = structure("hgp v1\ngenerators: a b\ninverses: a=A b=B\n");
        let red = Reducer::new(&s, &rw).unwrap();
        let d = sample_triangle_differences(&s, &red, 400, 12, 7).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.d1_len(), 1);
        let wr = s.word_acceptor.reverse_with_subsets(None).unwrap();
        let frd = build_frd(&d, &s.word_acceptor, &wr, &s.alphabet, &red, None).unwrap();
        // With only the identity difference available, each step must cancel
        // exactly: the second word reads the inverse of the first, letter by
        // letter (both run away from the shared corner along the two sides
        // of a degenerate triangle).
        let letterwise_inv =
            |w: &Word| -> Word { w.iter().map(|&l| s.alphabet.inverse(l)).collect() };
        let words: Vec<Word> = s
            .word_acceptor
            .shortlex_words(10_000, 3)
            .into_iter()
            .map(|ls| ls.into_iter().map(|l| l as Letter).collect())
            .collect();
        for x in &words {
            for y in &words {
                assert_eq!(
                    frd.accepts_pair(x, y),
                    *y == letterwise_inv(x),
                    "{x:?} vs {y:?}"
                );
            }
        }
    }

    #[test]
    fn free_group_thinness_is_zero() {
        let (rw, s) = structure("hgp v1\ngenerators: a b\ninverses: a=A b=B\n");
        let opts = ThinnessOptions {
            samples: 300,
            sample_len: 12,
            seed: 5,
            ..ThinnessOptions::default()
        };
        let r = compute_thinness(&s, &rw, &opts).unwrap();
        assert!(r.status.is_verified());
        assert_eq!(r.differences.len(), 1);
        assert_eq!(r.delta_raw, 0);
        assert_eq!(r.delta_plus_one, 1);
        assert_eq!(r.rounds.len(), 1);
        assert_eq!(r.rounds[0].counterexamples, 0);
        assert_eq!(r.general_bound, None);
    }

    #[test]
    fn integers_thinness_is_zero() {
        let (rw, s) = structure("hgp v1\ngenerators: a\ninverses: a=A\n");
        let opts = ThinnessOptions {
            samples: 200,
            sample_len: 20,
            seed: 3,
            ..ThinnessOptions::default()
        };
        let r = compute_thinness(&s, &rw, &opts).unwrap();
        assert!(r.status.is_verified());
        assert_eq!(r.differences.len(), 1);
        assert_eq!(r.delta_raw, 0);
    }

    #[test]
    fn surface_group_matches_published_row() {
        let text = std::fs::read_to_string("../../presentations/g1.hgp").unwrap();
        let (rw, s) = structure(&text);
        let opts = ThinnessOptions {
            samples: 4_000,
            seed: 1,
            bigon_constants: Some((4, 4)),
            ..ThinnessOptions::default()
        };
        let r = compute_thinness(&s, &rw, &opts).unwrap();
        assert!(r.status.is_verified(), "status: {:?}", r.status);
        assert_eq!(r.differences.len(), 49);
        assert_eq!(r.delta_raw, 4);
        assert_eq!(r.general_bound, Some(23));
        let last = r.final_round().unwrap();
        assert_eq!(last.differences, 49);
        assert_eq!(last.frd_states, 169);
        assert_eq!(last.accept_triples, 65_857);
        assert_eq!(last.ngp_states, 12_281);
        assert_eq!(last.gp_states, 5_457);
        assert_eq!(last.gp_min_states, 625);

        // Every corner pair of a fresh random triangle is accepted by the
        // certified difference machine.
        let red = Reducer::new(&s, &rw).unwrap();
        let wr = s.word_acceptor.reverse_with_subsets(None).unwrap();
        let frd = build_frd(&r.differences, &s.word_acceptor, &wr, &s.alphabet, &red, None)
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..25 {
            let u = random_normal_word(&s.word_acceptor, 30, &mut rng);
            let v = random_normal_word(&s.word_acceptor, 30, &mut rng);
            let mut uv = u.clone();
            uv.extend_from_slice(&v);
            let w = red.invert(&uv);
            let mp = meeting_parameters(u.len(), v.len(), w.len()).unwrap();
            for (fwd, rev_src, rho2) in
                [(&w, &v, mp.rho2_a), (&u, &w, mp.rho2_b), (&v, &u, mp.rho2_c)]
            {
                let fore = &fwd[..(rho2 + 1) / 2];
                let aft: Word = rev_src[rev_src.len() - rho2 / 2..]
                    .iter()
                    .rev()
                    .copied()
                    .collect();
                assert!(frd.accepts_pair(fore, &aft));
            }
        }
    }
}
