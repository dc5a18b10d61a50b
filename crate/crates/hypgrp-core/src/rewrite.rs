//! Short-lex rewriting systems and Knuth–Bendix completion.
//!
//! A presentation is turned into a string rewriting system whose rules are
//! oriented by the short-lex order. Completion resolves critical pairs
//! shortest-first with interreduction after every new rule, so a successful
//! run yields the unique reduced confluent system for the presentation and
//! order — the rule set is reproducible bit-for-bit.
//!
//! Many word-hyperbolic groups have no *finite* confluent short-lex system
//! (the reduced rule set is an infinite regular family of ever-longer
//! rules), so [`RewritingSystem::complete_bounded`] completes up to a length
//! bound instead: equations whose reduced sides exceed the bound are
//! discarded. Because short-lex rewriting never increases length, the
//! resulting system reduces every word of length at most the bound to its
//! true normal form; a critical-pair check over all superpositions within
//! the bound verifies this and the verified horizon is recorded on the
//! system.
//!
//! Reduction is available in two forms: a convenience method on
//! [`RewritingSystem`] and the compiled [`Rewriter`], which matches
//! left-hand sides with a dense Aho–Corasick table and rewrites in
//! amortized linear time.

use crate::alphabet::{shortlex_cmp, Alphabet, Letter, Word};
use crate::error::Error;
use crate::fsa::{Automaton, Builder};
use crate::presentation::Presentation;
use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

/// A rewrite rule `lhs -> rhs` with `rhs` short-lex-smaller than `lhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Word,
}

/// Resource limits for Knuth–Bendix completion.
#[derive(Debug, Clone)]
pub struct KbLimits {
    /// Maximum number of simultaneously active rules.
    pub max_rules: usize,
    /// Maximum admissible left-hand-side length.
    pub max_rule_len: usize,
    /// Maximum number of equations processed.
    pub max_iterations: usize,
}

impl Default for KbLimits {
    fn default() -> Self {
        KbLimits {
            max_rules: 100_000,
            max_rule_len: 1_000,
            max_iterations: 5_000_000,
        }
    }
}

/// Counters describing a completion run.
#[derive(Debug, Clone, Default)]
pub struct CompletionStats {
    /// Rules in the final (or partial) system.
    pub rules: usize,
    /// Longest left-hand side in the final system.
    pub max_rule_len: usize,
    /// Equations taken off the queue.
    pub equations_processed: usize,
}

/// A short-lex string rewriting system for a group presentation.
///
/// When `confluent` is true every word has a unique irreducible descendant,
/// which is its short-lex least representative in the group. Otherwise
/// `exact_len` may record a verified horizon: reduction still computes the
/// true normal form of every word no longer than the horizon.
#[derive(Debug, Clone)]
pub struct RewritingSystem {
    pub alphabet: Alphabet,
    pub rules: Vec<Rule>,
    pub confluent: bool,
    /// Verified exactness horizon for non-confluent systems.
    pub exact_len: Option<usize>,
    pub stats: CompletionStats,
}

impl RewritingSystem {
    /// Run Knuth–Bendix completion on a presentation.
    ///
    /// Seeds the queue with the free-reduction equations `x·x⁻¹ = ε` and one
    /// `r = ε` per relator, then resolves critical pairs shortest-first,
    /// interreducing after each new rule. Returns a confluent system on
    /// success; if a limit is hit the partial system is returned with
    /// `confluent` false.
    pub fn complete(p: &Presentation, limits: &KbLimits) -> Self {
        let (mut system, capped, _) = Completion::new(p, limits.clone(), None).run();
        system.confluent = !capped;
        system
    }

    /// Run Knuth–Bendix completion, discarding rules longer than `bound`.
    ///
    /// If no equation ever exceeded the bound the system is fully confluent.
    /// Otherwise the bound becomes the system's verified exactness horizon:
    /// short-lex rewriting never lengthens a word, so the stored rules
    /// coincide with the (possibly infinite) canonical system on every word
    /// of length ≤ `bound`; an explicit check that all critical pairs
    /// superposed within the bound resolve confirms it before returning.
    pub fn complete_bounded(
        p: &Presentation,
        bound: usize,
        limits: &KbLimits,
    ) -> Result<Self, Error> {
        let (mut system, capped, dropped) =
            Completion::new(p, limits.clone(), Some(bound)).run();
        if capped {
            return Err(Error::CompletionCap(format!(
                "bounded completion (bound {bound}) exceeded limits: {} rules, {} equations",
                system.stats.rules, system.stats.equations_processed
            )));
        }
        if dropped == 0 {
            system.confluent = true;
            return Ok(system);
        }
        if !ball_confluent(&system.rules, bound) {
            return Err(Error::CompletionCap(format!(
                "bounded completion produced a system that is not confluent within length {bound}"
            )));
        }
        system.exact_len = Some(bound);
        Ok(system)
    }

    /// True when reduction is verified exact for words of length `n`.
    pub fn is_exact_for(&self, n: usize) -> bool {
        self.confluent || self.exact_len.is_some_and(|l| n <= l)
    }

    /// Reduce a word to its irreducible descendant.
    ///
    /// Convenience entry point; hot paths should compile a [`Rewriter`]
    /// once and reuse it. Errors unless the result is guaranteed to be the
    /// short-lex normal form (confluent system, or word within the verified
    /// horizon).
    pub fn reduce(&self, w: &[Letter]) -> Result<Word, Error> {
        if !self.is_exact_for(w.len()) {
            return Err(Error::Precondition(format!(
                "cannot reduce a word of length {} on a system exact {}",
                w.len(),
                match self.exact_len {
                    Some(l) => format!("only up to length {l}"),
                    None => "nowhere (completion was capped)".into(),
                }
            )));
        }
        let mut trie = SuffixTrie::new();
        for (i, r) in self.rules.iter().enumerate() {
            trie.insert(&r.lhs, i as u32);
        }
        Ok(trie.reduce(&self.rules, w))
    }

    /// True when no rule's left-hand side occurs in `w`.
    pub fn is_reduced(&self, w: &[Letter]) -> bool {
        !self.rules.iter().any(|r| is_factor(&r.lhs, w))
    }
}

/// Check that every critical pair whose superposition fits within `bound`
/// resolves: together with length-nonincreasing rewriting this makes
/// reduction exact on all words of length ≤ `bound` (any peak inside such a
/// word is either a disjoint pair of redexes or one of these overlaps).
fn ball_confluent(rules: &[Rule], bound: usize) -> bool {
    let mut trie = SuffixTrie::new();
    for (i, r) in rules.iter().enumerate() {
        trie.insert(&r.lhs, i as u32);
    }
    for r1 in rules {
        for r2 in rules {
            let n1 = r1.lhs.len();
            for k in 1..n1.min(r2.lhs.len()) {
                if n1 + r2.lhs.len() - k > bound || r1.lhs[n1 - k..] != r2.lhs[..k] {
                    continue;
                }
                let mut u = r1.rhs.clone();
                u.extend_from_slice(&r2.lhs[k..]);
                let mut v = r1.lhs[..n1 - k].to_vec();
                v.extend_from_slice(&r2.rhs);
                if trie.reduce(rules, &u) != trie.reduce(rules, &v) {
                    return false;
                }
            }
        }
    }
    true
}

/// True when `needle` occurs as a (contiguous) factor of `hay`.
fn is_factor(needle: &[Letter], hay: &[Letter]) -> bool {
    let n = needle.len();
    if n == 0 {
        return true;
    }
    if n > hay.len() {
        return false;
    }
    let first = needle[0];
    (0..=hay.len() - n).any(|i| hay[i] == first && hay[i..i + n] == *needle)
}

// ---------------------------------------------------------------------------
// Completion engine
// ---------------------------------------------------------------------------

/// Trie over *reversed* left-hand sides; finding a rule whose lhs is a
/// suffix of the working stack is a backward walk from the stack top.
struct SuffixTrie {
    children: Vec<Vec<(Letter, u32)>>,
    rule: Vec<Option<u32>>,
}

impl SuffixTrie {
    fn new() -> Self {
        SuffixTrie {
            children: vec![Vec::new()],
            rule: vec![None],
        }
    }

    fn child(&self, node: u32, l: Letter) -> Option<u32> {
        let kids = &self.children[node as usize];
        kids.iter().find(|&&(k, _)| k == l).map(|&(_, n)| n)
    }

    fn insert(&mut self, lhs: &[Letter], rule: u32) {
        let mut node = 0u32;
        for &l in lhs.iter().rev() {
            node = match self.child(node, l) {
                Some(n) => n,
                None => {
                    let n = self.children.len() as u32;
                    self.children.push(Vec::new());
                    self.rule.push(None);
                    self.children[node as usize].push((l, n));
                    n
                }
            };
        }
        self.rule[node as usize] = Some(rule);
    }

    /// Forget a rule (lazy removal: the path stays, the marker goes).
    fn remove(&mut self, lhs: &[Letter]) {
        let mut node = 0u32;
        for &l in lhs.iter().rev() {
            match self.child(node, l) {
                Some(n) => node = n,
                None => return,
            }
        }
        self.rule[node as usize] = None;
    }

    /// The rule whose lhs is the shortest suffix of `stack`, if any.
    fn suffix_match(&self, stack: &[Letter]) -> Option<u32> {
        let mut node = 0u32;
        for &l in stack.iter().rev() {
            match self.child(node, l) {
                Some(n) => {
                    node = n;
                    if let Some(r) = self.rule[node as usize] {
                        return Some(r);
                    }
                }
                None => return None,
            }
        }
        None
    }

    /// Leftmost-innermost reduction using the stack algorithm.
    fn reduce(&self, rules: &[Rule], w: &[Letter]) -> Word {
        let mut stack: Word = Vec::with_capacity(w.len());
        let mut feed: Word = w.iter().rev().copied().collect();
        while let Some(x) = feed.pop() {
            stack.push(x);
            if let Some(r) = self.suffix_match(&stack) {
                let rule = &rules[r as usize];
                stack.truncate(stack.len() - rule.lhs.len());
                feed.extend(rule.rhs.iter().rev());
            }
        }
        stack
    }
}

struct ActiveRule {
    lhs: Word,
    rhs: Word,
    active: bool,
}

struct Completion {
    alphabet: Alphabet,
    limits: KbLimits,
    bound: Option<usize>,
    rules: Vec<ActiveRule>,
    active_count: usize,
    trie: SuffixTrie,
    // Min-heap on (max side length, insertion sequence): shortest first,
    // insertion order breaking ties, so runs are deterministic.
    pending: BinaryHeap<Reverse<(usize, u64, Word, Word)>>,
    seq: u64,
    processed: usize,
}

impl Completion {
    fn new(p: &Presentation, limits: KbLimits, bound: Option<usize>) -> Self {
        let mut c = Completion {
            alphabet: p.alphabet.clone(),
            limits,
            bound,
            rules: Vec::new(),
            active_count: 0,
            trie: SuffixTrie::new(),
            pending: BinaryHeap::new(),
            seq: 0,
            processed: 0,
        };
        for l in 0..p.alphabet.len() as Letter {
            c.push_eq(vec![l, p.alphabet.inverse(l)], Vec::new());
        }
        for r in &p.relators {
            c.push_eq(r.clone(), Vec::new());
        }
        c
    }

    fn push_eq(&mut self, u: Word, v: Word) {
        if u == v {
            return;
        }
        let key = u.len().max(v.len());
        self.pending.push(Reverse((key, self.seq, u, v)));
        self.seq += 1;
    }

    fn reduce(&self, w: &[Letter]) -> Word {
        // ActiveRule and Rule share layout for lhs/rhs access.
        let mut stack: Word = Vec::with_capacity(w.len());
        let mut feed: Word = w.iter().rev().copied().collect();
        while let Some(x) = feed.pop() {
            stack.push(x);
            if let Some(r) = self.trie.suffix_match(&stack) {
                let rule = &self.rules[r as usize];
                stack.truncate(stack.len() - rule.lhs.len());
                feed.extend(rule.rhs.iter().rev());
            }
        }
        stack
    }

    fn run(mut self) -> (RewritingSystem, bool, usize) {
        let mut capped = false;
        let mut dropped = 0usize;
        while let Some(Reverse((_, _, u, v))) = self.pending.pop() {
            self.processed += 1;
            if self.processed > self.limits.max_iterations {
                capped = true;
                break;
            }
            let u = self.reduce(&u);
            let v = self.reduce(&v);
            if u == v {
                continue;
            }
            let (lhs, rhs) = match shortlex_cmp(&u, &v) {
                Ordering::Greater => (u, v),
                Ordering::Less => (v, u),
                Ordering::Equal => unreachable!("distinct words compare equal"),
            };
            if self.bound.is_some_and(|b| lhs.len() > b) {
                dropped += 1;
                continue;
            }
            if lhs.len() > self.limits.max_rule_len || self.active_count >= self.limits.max_rules {
                capped = true;
                break;
            }
            self.add_rule(lhs, rhs);
        }
        (self.finish(), capped, dropped)
    }

    fn add_rule(&mut self, lhs: Word, rhs: Word) {
        let idx = self.rules.len() as u32;
        self.trie.insert(&lhs, idx);
        self.rules.push(ActiveRule {
            lhs,
            rhs,
            active: true,
        });
        self.active_count += 1;

        // Interreduce: the new lhs is irreducible, but it may occur inside
        // older rules. A rule whose lhs contains it is retired and its
        // equation requeued; a rhs containing it is re-reduced in place
        // (still short-lex-smaller than its lhs, so orientation holds).
        let new_lhs = self.rules[idx as usize].lhs.clone();
        let mut requeue: Vec<(Word, Word)> = Vec::new();
        for (i, r) in self.rules.iter_mut().enumerate() {
            if i as u32 == idx || !r.active {
                continue;
            }
            if is_factor(&new_lhs, &r.lhs) {
                r.active = false;
                requeue.push((std::mem::take(&mut r.lhs), std::mem::take(&mut r.rhs)));
            }
        }
        for (lhs, rhs) in requeue {
            self.trie.remove(&lhs);
            self.active_count -= 1;
            self.push_eq(lhs, rhs);
        }
        let rhs_fixups: Vec<usize> = self
            .rules
            .iter()
            .enumerate()
            .filter(|(i, r)| *i as u32 != idx && r.active && is_factor(&new_lhs, &r.rhs))
            .map(|(i, _)| i)
            .collect();
        for i in rhs_fixups {
            let reduced = self.reduce(&self.rules[i].rhs.clone());
            self.rules[i].rhs = reduced;
        }

        // Critical pairs of the new rule against every active rule (itself
        // included), in both orders. A proper overlap — suffix of one lhs
        // equal to a prefix of the other — superposes to a word with two
        // distinct reductions; their equality is the queued equation.
        let mut eqs: Vec<(Word, Word)> = Vec::new();
        for i in 0..self.rules.len() {
            if !self.rules[i].active {
                continue;
            }
            self.overlap_eqs(idx as usize, i, &mut eqs);
            if i != idx as usize {
                self.overlap_eqs(i, idx as usize, &mut eqs);
            }
        }
        for (u, v) in eqs {
            self.push_eq(u, v);
        }
    }

    /// Equations from proper overlaps: suffix of `rules[i].lhs` = prefix of
    /// `rules[j].lhs`.
    fn overlap_eqs(&self, i: usize, j: usize, out: &mut Vec<(Word, Word)>) {
        let (l1, r1) = (&self.rules[i].lhs, &self.rules[i].rhs);
        let (l2, r2) = (&self.rules[j].lhs, &self.rules[j].rhs);
        let n1 = l1.len();
        for k in 1..n1.min(l2.len()) {
            if l1[n1 - k..] == l2[..k] {
                let mut u = r1.clone();
                u.extend_from_slice(&l2[k..]);
                let mut v = l1[..n1 - k].to_vec();
                v.extend_from_slice(r2);
                out.push((u, v));
            }
        }
    }

    fn finish(self) -> RewritingSystem {
        let mut rules: Vec<Rule> = self
            .rules
            .into_iter()
            .filter(|r| r.active)
            .map(|r| Rule {
                lhs: r.lhs,
                rhs: r.rhs,
            })
            .collect();
        rules.sort_by(|a, b| shortlex_cmp(&a.lhs, &b.lhs));
        let stats = CompletionStats {
            rules: rules.len(),
            max_rule_len: rules.iter().map(|r| r.lhs.len()).max().unwrap_or(0),
            equations_processed: self.processed,
        };
        RewritingSystem {
            alphabet: self.alphabet,
            rules,
            confluent: false,
            exact_len: None,
            stats,
        }
    }
}

// ---------------------------------------------------------------------------
// Compiled rewriter
// ---------------------------------------------------------------------------

/// A compiled reducer: Aho–Corasick matching over the left-hand sides with
/// a dense transition table, driving the stack rewriting algorithm.
///
/// Reduction runs in time linear in the total length of words pushed
/// through the stack, so it is the engine behind every word-difference
/// computation in the crate.
#[derive(Debug, Clone)]
pub struct Rewriter {
    alphabet: Alphabet,
    rules: Vec<Rule>,
    /// delta[state * stride + letter] = next state.
    delta: Vec<u32>,
    /// Rule completed on entering the state, if any. The rule set is
    /// interreduced, so at most one lhs ends at any text position.
    match_at: Vec<Option<u32>>,
    stride: usize,
    /// Longest input this rewriter is allowed to reduce, if bounded.
    exact_len: Option<usize>,
}

impl Rewriter {
    /// Compile a rewriting system that is confluent, or exact up to a
    /// verified horizon; reduction then refuses words past the horizon.
    pub fn new(system: &RewritingSystem) -> Result<Self, Error> {
        if !system.confluent && system.exact_len.is_none() {
            return Err(Error::Precondition(
                "cannot compile a rewriter from a non-confluent system".into(),
            ));
        }
        let stride = system.alphabet.len();

        // Forward trie over the left-hand sides.
        let mut children: Vec<Vec<(Letter, u32)>> = vec![Vec::new()];
        let mut terminal: Vec<Option<u32>> = vec![None];
        for (ri, rule) in system.rules.iter().enumerate() {
            let mut node = 0usize;
            for &l in &rule.lhs {
                node = match children[node].iter().find(|&&(k, _)| k == l) {
                    Some(&(_, n)) => n as usize,
                    None => {
                        let n = children.len();
                        children.push(Vec::new());
                        terminal.push(None);
                        children[node].push((l, n as u32));
                        n
                    }
                };
            }
            terminal[node] = Some(ri as u32);
        }

        // Breadth-first failure links, then the dense delta table; match
        // markers propagate along failure links.
        let n = children.len();
        let mut fail = vec![0u32; n];
        let mut match_at: Vec<Option<u32>> = terminal.clone();
        let mut delta = vec![0u32; n * stride];
        let mut queue = std::collections::VecDeque::new();
        for &(l, c) in &children[0] {
            delta[l as usize] = c;
            queue.push_back(c);
        }
        while let Some(s) = queue.pop_front() {
            let f = fail[s as usize];
            if match_at[s as usize].is_none() {
                match_at[s as usize] = match_at[f as usize];
            }
            for si in 0..stride {
                delta[s as usize * stride + si] = delta[f as usize * stride + si];
            }
            for &(l, c) in &children[s as usize] {
                fail[c as usize] = delta[f as usize * stride + l as usize];
                delta[s as usize * stride + l as usize] = c;
                queue.push_back(c);
            }
        }

        Ok(Rewriter {
            alphabet: system.alphabet.clone(),
            rules: system.rules.clone(),
            delta,
            match_at,
            stride,
            exact_len: if system.confluent {
                None
            } else {
                system.exact_len
            },
        })
    }

    /// The alphabet the rewriter reduces over.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// The compiled rules.
    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// The verified exactness horizon, if the system was bounded.
    pub fn exact_len(&self) -> Option<usize> {
        self.exact_len
    }

    /// Reduce `w` to its short-lex normal form.
    ///
    /// # Panics
    ///
    /// Panics if `w` is longer than the verified exactness horizon; callers
    /// pick the completion bound to cover every word they will reduce.
    pub fn reduce(&self, w: &[Letter]) -> Word {
        if let Some(l) = self.exact_len {
            assert!(
                w.len() <= l,
                "reduce called on a word of length {} but the rewriting system \
                 is only exact up to length {l}",
                w.len()
            );
        }
        self.rewrite(w)
    }

    /// Fallible variant of [`reduce`](Self::reduce): an error instead of a
    /// panic when `w` is longer than the verified horizon.
    pub fn try_reduce(&self, w: &[Letter]) -> Result<Word, Error> {
        match self.exact_len {
            Some(l) if w.len() > l => Err(Error::CompletionCap(format!(
                "a word of length {} exceeds the verified rewriting horizon \
                 {l}; raise the completion bound",
                w.len()
            ))),
            _ => Ok(self.rewrite(w)),
        }
    }

    /// Apply the rules exhaustively without the exactness guard. The result
    /// equals `w` in the group and contains no left-hand side, but beyond
    /// the verified horizon it is not guaranteed to be the short-lex least
    /// representative.
    pub fn rewrite(&self, w: &[Letter]) -> Word {
        let mut letters: Word = Vec::with_capacity(w.len());
        let mut states: Vec<u32> = Vec::with_capacity(w.len());
        let mut feed: Word = w.iter().rev().copied().collect();
        let mut state = 0u32;
        while let Some(x) = feed.pop() {
            let s = self.delta[state as usize * self.stride + x as usize];
            if let Some(r) = self.match_at[s as usize] {
                let rule = &self.rules[r as usize];
                let keep = letters.len() + 1 - rule.lhs.len();
                letters.truncate(keep);
                states.truncate(keep);
                state = states.last().copied().unwrap_or(0);
                feed.extend(rule.rhs.iter().rev());
            } else {
                letters.push(x);
                states.push(s);
                state = s;
            }
        }
        letters
    }

    /// Reduce the concatenation of several word fragments.
    pub fn reduce_concat(&self, parts: &[&[Letter]]) -> Word {
        let total: usize = parts.iter().map(|p| p.len()).sum();
        let mut w = Word::with_capacity(total);
        for p in parts {
            w.extend_from_slice(p);
        }
        self.reduce(&w)
    }

    /// True when `w` contains no left-hand side (i.e. is in normal form).
    pub fn is_reduced(&self, w: &[Letter]) -> bool {
        let mut state = 0u32;
        for &x in w {
            state = self.delta[state as usize * self.stride + x as usize];
            if self.match_at[state as usize].is_some() {
                return false;
            }
        }
        true
    }

    /// The group inverse of a normal-form word, in normal form.
    pub fn invert(&self, w: &[Letter]) -> Word {
        self.reduce(&self.alphabet.invert_word(w))
    }
}

/// The word acceptor of a confluent rewriting system: the minimal
/// deterministic automaton accepting exactly the irreducible words, i.e.
/// the words avoiding every left-hand side as a factor. Built from the
/// pattern-matching automaton by cutting all match states, then minimized.
pub fn build_word_acceptor(system: &RewritingSystem) -> Result<Automaton, Error> {
    if !system.confluent {
        return Err(Error::Precondition(
            "the word acceptor of a rewriting system requires confluence".into(),
        ));
    }
    let rw = Rewriter::new(system)?;
    let n = rw.match_at.len();
    let mut b = Builder::new(1, system.alphabet.names());
    let mut map: Vec<Option<u32>> = vec![None; n];
    for s in 0..n {
        if rw.match_at[s].is_none() {
            let id = b.add_state();
            b.set_accepting(id, true);
            map[s] = Some(id);
        }
    }
    for s in 0..n {
        let Some(from) = map[s] else { continue };
        for x in 0..rw.stride {
            if let Some(to) = map[rw.delta[s * rw.stride + x] as usize] {
                b.add_edge(from, x as u16, to);
            }
        }
    }
    b.add_initial(map[0].expect("the empty word is irreducible"));
    Ok(b.build().minimize())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn system(text: &str) -> RewritingSystem {
        let p = Presentation::parse(text, "t").unwrap();
        RewritingSystem::complete(&p, &KbLimits::default())
    }

    fn rule_strings(r: &RewritingSystem) -> Vec<(String, String)> {
        r.rules
            .iter()
            .map(|rule| {
                (
                    r.alphabet.format_word(&rule.lhs),
                    r.alphabet.format_word(&rule.rhs),
                )
            })
            .collect()
    }

    #[test]
    fn free_group_completes_to_free_reduction() {
        let r = system("hgp v1\ngenerators: a b\ninverses: a=A b=B\n");
        assert!(r.confluent);
        let rules = rule_strings(&r);
        let expect: Vec<(String, String)> = [("aA", ""), ("Aa", ""), ("bB", ""), ("Bb", "")]
            .iter()
            .map(|&(l, h)| (l.to_string(), h.to_string()))
            .collect();
        assert_eq!(rules, expect);
        let w = r.alphabet.parse_word("abBA").unwrap();
        assert_eq!(r.reduce(&w).unwrap(), Vec::<Letter>::new());
    }

    #[test]
    fn z2_completes_to_eight_rules() {
        let r = system("hgp v1\ngenerators: a b\ninverses: a=A b=B\nrelator: baBA\n");
        assert!(r.confluent);
        let rules = rule_strings(&r);
        let expect: Vec<(String, String)> = [
            ("aA", ""),
            ("Aa", ""),
            ("ba", "ab"),
            ("bA", "Ab"),
            ("bB", ""),
            ("Ba", "aB"),
            ("BA", "AB"),
            ("Bb", ""),
        ]
        .iter()
        .map(|&(l, h)| (l.to_string(), h.to_string()))
        .collect();
        assert_eq!(rules, expect);
        let ba = r.alphabet.parse_word("ba").unwrap();
        assert_eq!(r.alphabet.format_word(&r.reduce(&ba).unwrap()), "ab");
    }

    #[test]
    fn triangle_group_bounded_completion_is_exact_on_short_words() {
        // The (2,3,7) triangle group has no finite confluent short-lex
        // system (rule lengths grow without bound), so completion is run
        // with a length bound and verified exact below it.
        let text = "hgp v1\ngenerators: a b\ninverses: a=A b=B\nrelator: aa\nrelator: bbb\nrelator: ababababababab\n";
        let p = Presentation::parse(text, "g2").unwrap();
        let r = RewritingSystem::complete_bounded(&p, 24, &KbLimits::default()).unwrap();
        assert!(!r.confluent);
        assert_eq!(r.exact_len, Some(24));
        for rel in &p.relators {
            assert_eq!(r.reduce(rel).unwrap(), Vec::<Letter>::new());
        }
        // a² = 1 forces A = a.
        let cap_a = r.alphabet.parse_word("A").unwrap();
        assert_eq!(r.alphabet.format_word(&r.reduce(&cap_a).unwrap()), "a");
        // b³ = 1 puts bb out of normal form.
        let bb = r.alphabet.parse_word("bb").unwrap();
        assert_eq!(r.alphabet.format_word(&r.reduce(&bb).unwrap()), "B");
        // Words past the horizon are refused.
        let long = r.alphabet.parse_word(&"ab".repeat(13)).unwrap();
        assert!(r.reduce(&long).is_err());
    }

    #[test]
    fn bounded_completion_of_confluent_system_is_confluent() {
        let text = "hgp v1\ngenerators: a b\ninverses: a=A b=B\nrelator: baBA\n";
        let p = Presentation::parse(text, "t").unwrap();
        let r = RewritingSystem::complete_bounded(&p, 10, &KbLimits::default()).unwrap();
        assert!(r.confluent);
        assert_eq!(r.exact_len, None);
        assert_eq!(r.rules.len(), 8);
    }

    #[test]
    fn compiled_rewriter_matches_system_reduce() {
        let r = system("hgp v1\ngenerators: a b\ninverses: a=A b=B\nrelator: baBA\n");
        let rw = Rewriter::new(&r).unwrap();
        for text in ["", "a", "ba", "bbaa", "BBaaAAbb", "abAB", "BAba"] {
            let w = r.alphabet.parse_word(text).unwrap();
            assert_eq!(rw.reduce(&w), r.reduce(&w).unwrap(), "word {text}");
            assert!(rw.is_reduced(&rw.reduce(&w)));
        }
    }

    #[test]
    fn capped_run_is_flagged_nonconfluent() {
        let text = "hgp v1\ngenerators: a b\ninverses: a=A b=B\nrelator: baBA\n";
        let p = Presentation::parse(text, "t").unwrap();
        let limits = KbLimits {
            max_rules: 2,
            ..KbLimits::default()
        };
        let r = RewritingSystem::complete(&p, &limits);
        assert!(!r.confluent);
        assert!(r.reduce(&[]).is_err());
        assert!(Rewriter::new(&r).is_err());
    }

    #[test]
    fn free_group_word_acceptor_has_five_states() {
        let r = system("hgp v1\ngenerators: a b\ninverses: a=A b=B\n");
        let w = build_word_acceptor(&r).unwrap();
        assert_eq!(w.n_states(), 5);
        for (text, expect) in [("", true), ("abAB", true), ("aA", false), ("abBa", false)] {
            let word = r.alphabet.parse_word(text).unwrap();
            assert_eq!(w.accepts(&word), expect, "word {text:?}");
        }
    }

    #[test]
    fn integers_word_acceptor_has_three_states() {
        let r = system("hgp v1\ngenerators: a\ninverses: a=A\n");
        let w = build_word_acceptor(&r).unwrap();
        assert_eq!(w.n_states(), 3);
        assert!(w.accepts(&r.alphabet.parse_word("aaa").unwrap()));
        assert!(!w.accepts(&r.alphabet.parse_word("aaAa").unwrap()));
    }

    #[test]
    fn word_acceptor_requires_confluence() {
        let text = "hgp v1\ngenerators: a b\ninverses: a=A b=B\nrelator: aa\nrelator: bbb\nrelator: ababababababab\n";
        let p = Presentation::parse(text, "t").unwrap();
        let r = RewritingSystem::complete_bounded(&p, 16, &KbLimits::default()).unwrap();
        assert!(!r.confluent);
        assert!(build_word_acceptor(&r).is_err());
    }
}
