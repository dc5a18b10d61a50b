//! Finite-state machinery: deterministic and non-deterministic automata over
//! one-variable words and padded two-variable pairs.
//!
//! Everything downstream — word acceptors, multipliers, word-difference
//! machines, the triangle automata — is built from the operations here:
//! trimming, determinization (breadth-first, labels in alphabet order, so
//! state numbering is reproducible bit-for-bit), minimization, products,
//! projections, reversal with subset payloads, relational composition and
//! short-lex witness enumeration.
//!
//! Two-variable automata read padded pairs `(u,v)†`: the shorter word's tail
//! is padded with `$`, so `($,$)` never occurs and is unrepresentable in the
//! label encoding. Pair labels are ordered lexicographically with `$`
//! greatest in each coordinate. Automata are partial: a missing transition
//! rejects. Dead states are pruned by `trim`/`minimize`, never kept.

use crate::alphabet::{Letter, Word};
use crate::error::Error;
use std::collections::{HashMap, VecDeque};

pub mod io;

/// Label standing for an unlabeled (ε) transition in non-deterministic
/// automata produced by projection or composition.
pub const EPS: u16 = u16::MAX;

/// A single transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub label: u16,
    pub to: u32,
}

/// Encoding of padded-pair labels `(x,y)` over a base alphabet of `base`
/// letters: each coordinate ranges over the letters plus the padding symbol
/// (index `base`), and `($,$)` is excluded. The numeric order of encoded
/// labels is lexicographic with padding greatest, which is the canonical
/// exploration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairLabels {
    base: usize,
}

impl PairLabels {
    pub fn new(base: usize) -> Self {
        PairLabels { base }
    }

    /// Number of distinct pair labels, `(base+1)² - 1`.
    pub fn count(&self) -> usize {
        (self.base + 1) * (self.base + 1) - 1
    }

    /// Encode a pair; `None` is the padding symbol. Panics on `($,$)`.
    pub fn encode(&self, x: Option<Letter>, y: Option<Letter>) -> u16 {
        let b = self.base as u16;
        let xi = x.map_or(b, |l| l as u16);
        let yi = y.map_or(b, |l| l as u16);
        assert!(
            xi < b || yi < b,
            "the padded pair ($,$) is unrepresentable"
        );
        xi * (b + 1) + yi
    }

    /// Decode a label into its two coordinates (`None` = padding).
    pub fn decode(&self, label: u16) -> (Option<Letter>, Option<Letter>) {
        let b = self.base as u16;
        let (xi, yi) = (label / (b + 1), label % (b + 1));
        (
            (xi < b).then_some(xi as Letter),
            (yi < b).then_some(yi as Letter),
        )
    }
}

/// A finite-state automaton in compressed sparse row form.
///
/// `letters` is the base alphabet; arity-1 labels are letter indices,
/// arity-2 labels are [`PairLabels`] encodings. States are `0..n_states`,
/// edges per state are sorted by `(label, to)`. Construction goes through
/// [`Builder`]; the toolkit operations all produce canonically numbered
/// results (breadth-first discovery, labels in order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    arity: u8,
    letters: Vec<String>,
    initials: Vec<u32>,
    accepting: Vec<bool>,
    offsets: Vec<u32>,
    edges: Vec<Edge>,
    payloads: Option<Vec<Box<[u32]>>>,
}

/// Incremental construction of an [`Automaton`].
#[derive(Debug, Clone)]
pub struct Builder {
    arity: u8,
    letters: Vec<String>,
    initials: Vec<u32>,
    accepting: Vec<bool>,
    edges: Vec<Vec<Edge>>,
    payloads: Option<Vec<Box<[u32]>>>,
}

impl Builder {
    pub fn new(arity: u8, letters: &[String]) -> Self {
        assert!(arity == 1 || arity == 2, "arity must be 1 or 2");
        Builder {
            arity,
            letters: letters.to_vec(),
            initials: Vec::new(),
            accepting: Vec::new(),
            edges: Vec::new(),
            payloads: None,
        }
    }

    pub fn add_state(&mut self) -> u32 {
        self.accepting.push(false);
        self.edges.push(Vec::new());
        (self.accepting.len() - 1) as u32
    }

    pub fn n_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn add_edge(&mut self, from: u32, label: u16, to: u32) {
        self.edges[from as usize].push(Edge { label, to });
    }

    pub fn set_accepting(&mut self, s: u32, yes: bool) {
        self.accepting[s as usize] = yes;
    }

    pub fn add_initial(&mut self, s: u32) {
        self.initials.push(s);
    }

    pub fn set_payload(&mut self, s: u32, subset: Box<[u32]>) {
        let payloads = self
            .payloads
            .get_or_insert_with(Vec::new);
        payloads.resize(s as usize + 1, Box::from([] as [u32; 0]));
        payloads[s as usize] = subset;
    }

    /// Finish: sort and deduplicate edges, freeze into CSR form.
    pub fn build(mut self) -> Automaton {
        let n = self.accepting.len();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut edges = Vec::new();
        offsets.push(0u32);
        for list in &mut self.edges {
            list.sort_unstable();
            list.dedup();
            edges.extend_from_slice(list);
            offsets.push(edges.len() as u32);
        }
        self.initials.sort_unstable();
        self.initials.dedup();
        let payloads = self.payloads.map(|mut p| {
            p.resize(n, Box::from([] as [u32; 0]));
            p
        });
        Automaton {
            arity: self.arity,
            letters: self.letters,
            initials: self.initials,
            accepting: self.accepting,
            offsets,
            edges,
            payloads,
        }
    }
}

/// Options for [`Automaton::determinize`].
#[derive(Debug, Clone, Default)]
pub struct DetOptions {
    /// Abort with a resource error when more than this many subset states
    /// would be created.
    pub state_cap: Option<usize>,
    /// Record each subset as the state's payload.
    pub keep_subsets: bool,
}

impl Automaton {
    pub fn arity(&self) -> u8 {
        self.arity
    }

    pub fn n_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    /// Number of real labels: alphabet size for arity 1, padded-pair count
    /// for arity 2 (`EPS` is never counted).
    pub fn n_labels(&self) -> usize {
        match self.arity {
            1 => self.letters.len(),
            _ => PairLabels::new(self.letters.len()).count(),
        }
    }

    /// The label encoding for two-variable automata.
    pub fn pair_labels(&self) -> PairLabels {
        assert_eq!(self.arity, 2, "pair labels exist only at arity 2");
        PairLabels::new(self.letters.len())
    }

    pub fn initials(&self) -> &[u32] {
        &self.initials
    }

    /// The unique initial state of a deterministic automaton.
    pub fn initial(&self) -> u32 {
        assert_eq!(self.initials.len(), 1, "automaton has no unique initial state");
        self.initials[0]
    }

    pub fn is_accepting(&self, s: u32) -> bool {
        self.accepting[s as usize]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.n_states() as u32).filter(|&s| self.accepting[s as usize])
    }

    pub fn n_accepting(&self) -> usize {
        self.accepting.iter().filter(|&&a| a).count()
    }

    pub fn edges_from(&self, s: u32) -> &[Edge] {
        &self.edges[self.offsets[s as usize] as usize..self.offsets[s as usize + 1] as usize]
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn payload(&self, s: u32) -> Option<&[u32]> {
        self.payloads.as_ref().map(|p| &*p[s as usize])
    }

    pub fn has_payloads(&self) -> bool {
        self.payloads.is_some()
    }

    /// Deterministic: one initial state, no ε-labels, one target per label.
    pub fn is_deterministic(&self) -> bool {
        self.initials.len() == 1
            && (0..self.n_states() as u32).all(|s| {
                let es = self.edges_from(s);
                es.iter().all(|e| e.label != EPS)
                    && es.windows(2).all(|w| w[0].label != w[1].label)
            })
    }

    /// Deterministic single step; `None` when the transition is missing.
    pub fn step(&self, s: u32, label: u16) -> Option<u32> {
        let es = self.edges_from(s);
        es.binary_search_by_key(&label, |e| e.label)
            .ok()
            .map(|i| es[i].to)
    }

    /// Run a label sequence from the initial states; true iff some run
    /// accepts. Subset simulation, so non-determinism and ε are handled.
    pub fn run_labels(&self, labels: &[u16]) -> bool {
        let mut current = self.eps_closure(self.initials.iter().copied());
        for &l in labels {
            let mut next: Vec<u32> = Vec::new();
            for &s in &current {
                for e in self.edges_from(s) {
                    if e.label == l {
                        next.push(e.to);
                    }
                }
            }
            current = self.eps_closure(next.into_iter());
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|&s| self.accepting[s as usize])
    }

    /// Arity-1 convenience: run a word of letters.
    pub fn accepts(&self, w: &[Letter]) -> bool {
        assert_eq!(self.arity, 1, "accepts() takes one-variable words");
        let labels: Vec<u16> = w.iter().map(|&l| l as u16).collect();
        self.run_labels(&labels)
    }

    /// Arity-2 convenience: run a padded pair of words.
    pub fn accepts_pair(&self, u: &[Letter], v: &[Letter]) -> bool {
        self.run_labels(&encode_pair_word(&self.pair_labels(), u, v))
    }

    fn eps_closure(&self, seed: impl Iterator<Item = u32>) -> Vec<u32> {
        let mut seen = vec![false; self.n_states()];
        let mut stack: Vec<u32> = Vec::new();
        for s in seed {
            if !seen[s as usize] {
                seen[s as usize] = true;
                stack.push(s);
            }
        }
        let mut out = stack.clone();
        while let Some(s) = stack.pop() {
            for e in self.edges_from(s) {
                if e.label == EPS && !seen[e.to as usize] {
                    seen[e.to as usize] = true;
                    stack.push(e.to);
                    out.push(e.to);
                }
            }
        }
        out.sort_unstable();
        out
    }

    // -----------------------------------------------------------------
    // Structural operations
    // -----------------------------------------------------------------

    /// Keep states that are both accessible and co-accessible, renumbering
    /// canonically (breadth-first, labels ascending). The initial states
    /// are kept even when the language is empty. Payloads survive.
    pub fn trim(&self) -> Automaton {
        let n = self.n_states();
        // Accessible set.
        let mut acc = vec![false; n];
        let mut queue: VecDeque<u32> = VecDeque::new();
        for &i in &self.initials {
            if !acc[i as usize] {
                acc[i as usize] = true;
                queue.push_back(i);
            }
        }
        while let Some(s) = queue.pop_front() {
            for e in self.edges_from(s) {
                if !acc[e.to as usize] {
                    acc[e.to as usize] = true;
                    queue.push_back(e.to);
                }
            }
        }
        // Co-accessible set via reverse edges.
        let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
        for s in 0..n as u32 {
            for e in self.edges_from(s) {
                rev[e.to as usize].push(s);
            }
        }
        let mut coacc = vec![false; n];
        let mut stack: Vec<u32> = (0..n as u32).filter(|&s| self.accepting[s as usize]).collect();
        for &s in &stack {
            coacc[s as usize] = true;
        }
        while let Some(s) = stack.pop() {
            for &p in &rev[s as usize] {
                if !coacc[p as usize] {
                    coacc[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        let keep: Vec<bool> = (0..n)
            .map(|s| acc[s] && (coacc[s] || self.initials.contains(&(s as u32))))
            .collect();
        self.renumber_bfs(&keep)
    }

    /// Canonical renumbering over a kept subset: breadth-first from the
    /// initial states (in ascending order), exploring edges in sorted order.
    pub(crate) fn renumber_bfs(&self, keep: &[bool]) -> Automaton {
        let mut map: Vec<Option<u32>> = vec![None; self.n_states()];
        let mut order: Vec<u32> = Vec::new();
        let mut queue: VecDeque<u32> = VecDeque::new();
        for &i in &self.initials {
            if keep[i as usize] && map[i as usize].is_none() {
                map[i as usize] = Some(order.len() as u32);
                order.push(i);
                queue.push_back(i);
            }
        }
        while let Some(s) = queue.pop_front() {
            for e in self.edges_from(s) {
                if keep[e.to as usize] && map[e.to as usize].is_none() {
                    map[e.to as usize] = Some(order.len() as u32);
                    order.push(e.to);
                    queue.push_back(e.to);
                }
            }
        }
        let mut b = Builder::new(self.arity, &self.letters);
        for _ in &order {
            b.add_state();
        }
        for (new_s, &old_s) in order.iter().enumerate() {
            b.set_accepting(new_s as u32, self.accepting[old_s as usize]);
            for e in self.edges_from(old_s) {
                if let Some(new_t) = map[e.to as usize] {
                    b.add_edge(new_s as u32, e.label, new_t);
                }
            }
        }
        for &i in &self.initials {
            if let Some(ni) = map[i as usize] {
                b.add_initial(ni);
            }
        }
        if let Some(p) = &self.payloads {
            for (new_s, &old_s) in order.iter().enumerate() {
                b.set_payload(new_s as u32, p[old_s as usize].clone());
            }
        }
        b.build()
    }

    /// Reverse the language: arrows flipped, initial and accepting swapped.
    /// The result is in general non-deterministic.
    pub fn reverse(&self) -> Automaton {
        let mut b = Builder::new(self.arity, &self.letters);
        for _ in 0..self.n_states() {
            b.add_state();
        }
        for s in 0..self.n_states() as u32 {
            for e in self.edges_from(s) {
                b.add_edge(e.to, e.label, s);
            }
            if self.accepting[s as usize] {
                b.add_initial(s);
            }
        }
        for &i in &self.initials {
            b.set_accepting(i, true);
        }
        b.build()
    }

    /// Subset construction: equivalent deterministic automaton, states in
    /// breadth-first discovery order with labels explored in alphabet
    /// order. With `keep_subsets` each state carries its sorted subset of
    /// source states as payload.
    pub fn determinize(&self, opts: &DetOptions) -> Result<Automaton, Error> {
        let n_labels = self.n_labels() as u16;
        let start: Box<[u32]> = self.eps_closure(self.initials.iter().copied()).into();
        let mut subset_ids: HashMap<Box<[u32]>, u32> = HashMap::new();
        let mut subsets: Vec<Box<[u32]>> = Vec::new();
        let mut b = Builder::new(self.arity, &self.letters);
        let s0 = b.add_state();
        subset_ids.insert(start.clone(), s0);
        subsets.push(start);
        b.add_initial(s0);
        let mut queue: VecDeque<u32> = VecDeque::new();
        queue.push_back(s0);
        while let Some(s) = queue.pop_front() {
            let subset = subsets[s as usize].clone();
            b.set_accepting(s, subset.iter().any(|&q| self.accepting[q as usize]));
            for label in 0..n_labels {
                let mut targets: Vec<u32> = Vec::new();
                for &q in subset.iter() {
                    let es = self.edges_from(q);
                    // All edges with this label (the list is sorted).
                    let from = es.partition_point(|e| e.label < label);
                    for e in &es[from..] {
                        if e.label != label {
                            break;
                        }
                        targets.push(e.to);
                    }
                }
                if targets.is_empty() {
                    continue;
                }
                let closure: Box<[u32]> = self.eps_closure(targets.into_iter()).into();
                let next = match subset_ids.get(&closure) {
                    Some(&id) => id,
                    None => {
                        if let Some(cap) = opts.state_cap {
                            if subsets.len() >= cap {
                                return Err(Error::ResourceCap(format!(
                                    "determinization exceeded {cap} states \
                                     ({} subsets built, {} queued)",
                                    subsets.len(),
                                    queue.len()
                                )));
                            }
                        }
                        let id = b.add_state();
                        subset_ids.insert(closure.clone(), id);
                        subsets.push(closure);
                        queue.push_back(id);
                        id
                    }
                };
                b.add_edge(s, label, next);
            }
        }
        if opts.keep_subsets {
            for (s, subset) in subsets.iter().enumerate() {
                b.set_payload(s as u32, subset.clone());
            }
        }
        Ok(b.build())
    }

    /// Reverse the language keeping, for every state of the result, the
    /// subset of this automaton's states it denotes: if `σ₀^v = τ` here and
    /// `σ₀(Mᴿ)^w = T` in the result, then `τ ∈ T` iff `v·wᴿ ∈ L(M)`. The
    /// result is deterministic but deliberately not minimized (minimization
    /// would destroy the subset payloads).
    pub fn reverse_with_subsets(&self, cap: Option<usize>) -> Result<Automaton, Error> {
        self.reverse().determinize(&DetOptions {
            state_cap: cap,
            keep_subsets: true,
        })
    }

    /// The canonical minimal deterministic automaton for the language,
    /// canonically numbered. Payloads are dropped.
    ///
    /// # Panics
    ///
    /// Panics when the input is not deterministic.
    pub fn minimize(&self) -> Automaton {
        assert!(self.is_deterministic(), "minimize requires a deterministic automaton");
        let t = self.trim();
        let n = t.n_states();
        if t.n_accepting() == 0 {
            // Empty language: canonical single non-accepting state.
            let mut b = Builder::new(self.arity, &self.letters);
            let s = b.add_state();
            b.add_initial(s);
            return b.build();
        }
        let n_labels = t.n_labels() as u16;
        // Moore refinement with an implicit sink (class 0 at the start iff
        // non-accepting states exist; the sink itself is state index n).
        let mut class: Vec<u32> = (0..=n)
            .map(|s| if s < n && t.accepting[s] { 1 } else { 0 })
            .collect();
        let mut n_classes = 2usize;
        loop {
            // Signature: own class plus target class per label.
            let mut sig_ids: HashMap<Vec<u32>, u32> = HashMap::new();
            let mut next_class: Vec<u32> = vec![0; n + 1];
            for s in 0..=n {
                let mut sig: Vec<u32> = Vec::with_capacity(n_labels as usize + 1);
                sig.push(class[s]);
                for label in 0..n_labels {
                    let target = if s == n {
                        n
                    } else {
                        t.step(s as u32, label).map_or(n, |x| x as usize)
                    };
                    sig.push(class[target]);
                }
                let id = match sig_ids.get(&sig) {
                    Some(&id) => id,
                    None => {
                        let id = sig_ids.len() as u32;
                        sig_ids.insert(sig, id);
                        id
                    }
                };
                next_class[s] = id;
            }
            let new_count = sig_ids.len();
            class = next_class;
            if new_count == n_classes {
                break;
            }
            n_classes = new_count;
        }
        let sink_class = class[n];
        // Build quotient on classes other than the sink's.
        let mut rep: HashMap<u32, u32> = HashMap::new();
        for s in 0..n as u32 {
            rep.entry(class[s as usize]).or_insert(s);
        }
        let mut class_state: HashMap<u32, u32> = HashMap::new();
        let mut b = Builder::new(self.arity, &self.letters);
        let mut ordered: Vec<u32> = rep.keys().copied().filter(|&c| c != sink_class).collect();
        ordered.sort_unstable();
        for &c in &ordered {
            class_state.insert(c, b.add_state());
        }
        for &c in &ordered {
            let s = rep[&c];
            let sc = class_state[&c];
            b.set_accepting(sc, t.accepting[s as usize]);
            for e in t.edges_from(s) {
                let tc = class[e.to as usize];
                if tc != sink_class {
                    b.add_edge(sc, e.label, class_state[&tc]);
                }
            }
        }
        b.add_initial(class_state[&class[t.initial() as usize]]);
        let q = b.build();
        let keep = vec![true; q.n_states()];
        q.renumber_bfs(&keep)
    }

    /// Complete the automaton with a sink and flip acceptance. The result
    /// accepts exactly the label sequences this (deterministic) automaton
    /// rejects.
    pub fn complement(&self) -> Automaton {
        assert!(self.is_deterministic(), "complement requires a deterministic automaton");
        let n = self.n_states() as u32;
        let n_labels = self.n_labels() as u16;
        let mut b = Builder::new(self.arity, &self.letters);
        for _ in 0..=n {
            b.add_state();
        }
        for s in 0..n {
            b.set_accepting(s, !self.accepting[s as usize]);
            for label in 0..n_labels {
                b.add_edge(s, label, self.step(s, label).unwrap_or(n));
            }
        }
        b.set_accepting(n, true);
        for label in 0..n_labels {
            b.add_edge(n, label, n);
        }
        b.add_initial(self.initial());
        b.build()
    }

    /// Accessible product automaton accepting `L(self) ∩ L(other)`.
    pub fn intersect(&self, other: &Automaton) -> Result<Automaton, Error> {
        if self.arity != other.arity || self.letters != other.letters {
            return Err(Error::Precondition(
                "intersect requires matching alphabets and arities".into(),
            ));
        }
        assert!(self.is_deterministic() && other.is_deterministic());
        let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
        let mut b = Builder::new(self.arity, &self.letters);
        let start = (self.initial(), other.initial());
        let s0 = b.add_state();
        ids.insert(start, s0);
        b.add_initial(s0);
        let mut states = vec![start];
        let mut queue: VecDeque<u32> = VecDeque::new();
        queue.push_back(s0);
        let n_labels = self.n_labels() as u16;
        while let Some(s) = queue.pop_front() {
            let (p, q) = states[s as usize];
            b.set_accepting(s, self.accepting[p as usize] && other.accepting[q as usize]);
            for label in 0..n_labels {
                let (Some(np), Some(nq)) = (self.step(p, label), other.step(q, label)) else {
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
        Ok(b.build())
    }

    /// Two-variable automaton accepting padded pairs `(u,v)†` with
    /// `u ∈ L(w1)` and `v ∈ L(w2)`.
    pub fn pair_product(w1: &Automaton, w2: &Automaton) -> Automaton {
        assert!(w1.arity == 1 && w2.arity == 1 && w1.letters == w2.letters);
        assert!(w1.is_deterministic() && w2.is_deterministic());
        let pl = PairLabels::new(w1.letters.len());
        let base = w1.letters.len() as u16;
        #[derive(Clone, Copy, PartialEq, Eq, Hash)]
        enum P {
            Both(u32, u32),
            LeftOnly(u32),
            RightOnly(u32),
        }
        let mut ids: HashMap<P, u32> = HashMap::new();
        let mut b = Builder::new(2, &w1.letters);
        let start = P::Both(w1.initial(), w2.initial());
        let s0 = b.add_state();
        ids.insert(start, s0);
        b.add_initial(s0);
        let mut states = vec![start];
        let mut queue: VecDeque<u32> = VecDeque::new();
        queue.push_back(s0);
        while let Some(s) = queue.pop_front() {
            let st = states[s as usize];
            let mut push = |b: &mut Builder,
                            states: &mut Vec<P>,
                            queue: &mut VecDeque<u32>,
                            label: u16,
                            target: P| {
                let ids = &mut ids;
                let next = *ids.entry(target).or_insert_with(|| {
                    let id = b.add_state();
                    states.push(target);
                    queue.push_back(id);
                    id
                });
                b.add_edge(s, label, next);
            };
            match st {
                P::Both(p, q) => {
                    b.set_accepting(
                        s,
                        w1.accepting[p as usize] && w2.accepting[q as usize],
                    );
                    for x in 0..base {
                        let Some(np) = w1.step(p, x) else { continue };
                        for y in 0..base {
                            if let Some(nq) = w2.step(q, y) {
                                push(
                                    &mut b,
                                    &mut states,
                                    &mut queue,
                                    pl.encode(Some(x as Letter), Some(y as Letter)),
                                    P::Both(np, nq),
                                );
                            }
                        }
                        // v has ended: valid only if it ended in L(w2).
                        if w2.accepting[q as usize] {
                            push(
                                &mut b,
                                &mut states,
                                &mut queue,
                                pl.encode(Some(x as Letter), None),
                                P::LeftOnly(np),
                            );
                        }
                    }
                    if w1.accepting[p as usize] {
                        for y in 0..base {
                            if let Some(nq) = w2.step(q, y) {
                                push(
                                    &mut b,
                                    &mut states,
                                    &mut queue,
                                    pl.encode(None, Some(y as Letter)),
                                    P::RightOnly(nq),
                                );
                            }
                        }
                    }
                }
                P::LeftOnly(p) => {
                    b.set_accepting(s, w1.accepting[p as usize]);
                    for x in 0..base {
                        if let Some(np) = w1.step(p, x) {
                            push(
                                &mut b,
                                &mut states,
                                &mut queue,
                                pl.encode(Some(x as Letter), None),
                                P::LeftOnly(np),
                            );
                        }
                    }
                }
                P::RightOnly(q) => {
                    b.set_accepting(s, w2.accepting[q as usize]);
                    for y in 0..base {
                        if let Some(nq) = w2.step(q, y) {
                            push(
                                &mut b,
                                &mut states,
                                &mut queue,
                                pl.encode(None, Some(y as Letter)),
                                P::RightOnly(nq),
                            );
                        }
                    }
                }
            }
        }
        b.build()
    }

    /// Project a two-variable automaton onto one coordinate. Transitions
    /// whose kept coordinate is padding become ε, so the result is a
    /// non-deterministic one-variable automaton.
    pub fn project(&self, coordinate: u8) -> Result<Automaton, Error> {
        if self.arity != 2 {
            return Err(Error::Precondition(
                "project requires a two-variable automaton".into(),
            ));
        }
        assert!(coordinate == 1 || coordinate == 2);
        let pl = self.pair_labels();
        let mut b = Builder::new(1, &self.letters);
        for _ in 0..self.n_states() {
            b.add_state();
        }
        for s in 0..self.n_states() as u32 {
            b.set_accepting(s, self.accepting[s as usize]);
            for e in self.edges_from(s) {
                let (x, y) = pl.decode(e.label);
                let kept = if coordinate == 1 { x } else { y };
                let label = kept.map_or(EPS, |l| l as u16);
                b.add_edge(s, label, e.to);
            }
        }
        for &i in &self.initials {
            b.add_initial(i);
        }
        Ok(b.build())
    }

    /// Swap the two coordinates of every label.
    pub fn converse(&self) -> Automaton {
        let pl = self.pair_labels();
        let mut b = Builder::new(2, &self.letters);
        for _ in 0..self.n_states() {
            b.add_state();
        }
        for s in 0..self.n_states() as u32 {
            b.set_accepting(s, self.accepting[s as usize]);
            for e in self.edges_from(s) {
                let (x, y) = pl.decode(e.label);
                b.add_edge(s, pl.encode(y, x), e.to);
            }
        }
        for &i in &self.initials {
            b.add_initial(i);
        }
        b.build()
    }

    /// The identity relation on `L(w)`: every edge `x` becomes `(x,x)`.
    pub fn identity_relation(w: &Automaton) -> Automaton {
        assert_eq!(w.arity, 1);
        let pl = PairLabels::new(w.letters.len());
        let mut b = Builder::new(2, &w.letters);
        for _ in 0..w.n_states() {
            b.add_state();
        }
        for s in 0..w.n_states() as u32 {
            b.set_accepting(s, w.accepting[s as usize]);
            for e in w.edges_from(s) {
                let x = Some(e.label as Letter);
                b.add_edge(s, pl.encode(x, x), e.to);
            }
        }
        for &i in &w.initials {
            b.add_initial(i);
        }
        b.build()
    }

    /// Relational composition: accepts `(u,w)†` iff some `v` has
    /// `(u,v)† ∈ L(self)` and `(v,w)† ∈ L(other)`. Built as an ε-NFA (the
    /// middle word may outlive both outer words) and determinized.
    pub fn compose(&self, other: &Automaton, opts: &DetOptions) -> Result<Automaton, Error> {
        if self.arity != 2 || other.arity != 2 || self.letters != other.letters {
            return Err(Error::Precondition(
                "compose requires two-variable automata over one base alphabet".into(),
            ));
        }
        let pl = self.pair_labels();
        let base = self.letters.len() as u16;
        // A leg is either still running or has stopped reading (its whole
        // padded pair has been consumed; only legal from an accepting
        // state, since ($,$) is unrepresentable).
        const STOPPED: u32 = u32::MAX;
        let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
        let mut b = Builder::new(2, &self.letters);
        let mut states: Vec<(u32, u32)> = Vec::new();
        let mut queue: VecDeque<u32> = VecDeque::new();
        let mut intern =
            |b: &mut Builder, states: &mut Vec<(u32, u32)>, queue: &mut VecDeque<u32>, key| {
                *ids.entry(key).or_insert_with(|| {
                    let id = b.add_state();
                    states.push(key);
                    queue.push_back(id);
                    id
                })
            };
        for &i1 in &self.initials {
            for &i2 in &other.initials {
                let id = intern(&mut b, &mut states, &mut queue, (i1, i2));
                b.add_initial(id);
            }
        }
        while let Some(s) = queue.pop_front() {
            let (p, q) = states[s as usize];
            let p_done = p == STOPPED;
            let q_done = q == STOPPED;
            b.set_accepting(
                s,
                (p_done || self.accepting[p as usize])
                    && (q_done || other.accepting[q as usize]),
            );
            // Stopping moves (ε): a leg in an accepting state may finish.
            if !p_done && self.accepting[p as usize] {
                let t = intern(&mut b, &mut states, &mut queue, (STOPPED, q));
                b.add_edge(s, EPS, t);
            }
            if !q_done && other.accepting[q as usize] {
                let t = intern(&mut b, &mut states, &mut queue, (p, STOPPED));
                b.add_edge(s, EPS, t);
            }
            if p_done && q_done {
                continue;
            }
            if p_done {
                // u and v are over; w continues through ($, y).
                for y in 0..base {
                    if let Some(nq) = other.step(q, pl.encode(None, Some(y as Letter))) {
                        let t = intern(&mut b, &mut states, &mut queue, (STOPPED, nq));
                        b.add_edge(s, pl.encode(None, Some(y as Letter)), t);
                    }
                }
                continue;
            }
            if q_done {
                for x in 0..base {
                    if let Some(np) = self.step(p, pl.encode(Some(x as Letter), None)) {
                        let t = intern(&mut b, &mut states, &mut queue, (np, STOPPED));
                        b.add_edge(s, pl.encode(Some(x as Letter), None), t);
                    }
                }
                continue;
            }
            // Both legs running: synchronize on the middle letter z.
            for e1 in self.edges_from(p) {
                let (x, z) = pl.decode(e1.label);
                for e2 in other.edges_from(q) {
                    let (z2, y) = pl.decode(e2.label);
                    if z != z2 {
                        continue;
                    }
                    let label = match (x, y) {
                        (None, None) => EPS,
                        (x, y) => pl.encode(x, y),
                    };
                    let t = intern(&mut b, &mut states, &mut queue, (e1.to, e2.to));
                    b.add_edge(s, label, t);
                }
            }
        }
        b.build().determinize(opts)
    }

    // -----------------------------------------------------------------
    // Language queries
    // -----------------------------------------------------------------

    /// True when no accepting state is reachable.
    pub fn is_empty_language(&self) -> bool {
        let mut seen = vec![false; self.n_states()];
        let mut stack: Vec<u32> = Vec::new();
        for &i in &self.initials {
            seen[i as usize] = true;
            stack.push(i);
        }
        while let Some(s) = stack.pop() {
            if self.accepting[s as usize] {
                return false;
            }
            for e in self.edges_from(s) {
                if !seen[e.to as usize] {
                    seen[e.to as usize] = true;
                    stack.push(e.to);
                }
            }
        }
        true
    }

    /// Accessible product with the complement of `other`:
    /// `L(self) ∖ L(other)`. Both must be deterministic.
    pub fn difference(&self, other: &Automaton) -> Result<Automaton, Error> {
        if self.arity != other.arity || self.letters != other.letters {
            return Err(Error::Precondition(
                "difference requires matching alphabets and arities".into(),
            ));
        }
        assert!(self.is_deterministic() && other.is_deterministic());
        const SINK: u32 = u32::MAX;
        let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
        let mut b = Builder::new(self.arity, &self.letters);
        let start = (self.initial(), other.initial());
        let s0 = b.add_state();
        ids.insert(start, s0);
        b.add_initial(s0);
        let mut states = vec![start];
        let mut queue: VecDeque<u32> = VecDeque::new();
        queue.push_back(s0);
        let n_labels = self.n_labels() as u16;
        while let Some(s) = queue.pop_front() {
            let (p, q) = states[s as usize];
            b.set_accepting(
                s,
                self.accepting[p as usize] && (q == SINK || !other.accepting[q as usize]),
            );
            for label in 0..n_labels {
                let Some(np) = self.step(p, label) else { continue };
                let nq = if q == SINK {
                    SINK
                } else {
                    other.step(q, label).unwrap_or(SINK)
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
        Ok(b.build())
    }

    /// Up to `cap` members of `L(self) ∖ L(other)` in short-lex order (by
    /// length, then by label index). An empty result proves
    /// `L(self) ⊆ L(other)`.
    pub fn diff_witnesses(&self, other: &Automaton, cap: usize) -> Result<Vec<Vec<u16>>, Error> {
        Ok(self.difference(other)?.shortlex_words(cap, usize::MAX))
    }

    /// True when both automata accept the same language.
    pub fn language_equal(&self, other: &Automaton) -> Result<bool, Error> {
        Ok(self.difference(other)?.is_empty_language()
            && other.difference(self)?.is_empty_language())
    }

    /// Enumerate accepted label sequences in short-lex order: ascending
    /// length, labels compared by index. Stops after `cap` words, after
    /// `max_len`, or once a window of `n_states` consecutive empty lengths
    /// proves the language exhausted. Requires a deterministic automaton.
    pub fn shortlex_words(&self, cap: usize, max_len: usize) -> Vec<Vec<u16>> {
        assert!(self.is_deterministic(), "shortlex_words requires a deterministic automaton");
        let mut out: Vec<Vec<u16>> = Vec::new();
        if cap == 0 {
            return out;
        }
        let n = self.n_states();
        // alive[s] = can accept a word of length exactly j (current layer).
        let mut alive_layers: Vec<Vec<bool>> = vec![self.accepting.clone()];
        let mut rev: Vec<Vec<(u16, u32)>> = vec![Vec::new(); n];
        for s in 0..n as u32 {
            for e in self.edges_from(s) {
                rev[e.to as usize].push((e.label, s));
            }
        }
        let mut empty_run = 0usize;
        for len in 0..=max_len {
            while alive_layers.len() <= len {
                let prev = alive_layers.last().unwrap();
                let mut next = vec![false; n];
                for t in 0..n {
                    if prev[t] {
                        for &(_, s) in &rev[t] {
                            next[s as usize] = true;
                        }
                    }
                }
                alive_layers.push(next);
            }
            let found_before = out.len();
            self.emit_words_of_len(self.initial(), len, &alive_layers, &mut Vec::new(), cap, &mut out);
            if out.len() == cap {
                return out;
            }
            if out.len() == found_before {
                empty_run += 1;
                if empty_run > n {
                    // A live DFA state reaches acceptance within n steps, so
                    // n consecutive empty lengths prove exhaustion.
                    return out;
                }
            } else {
                empty_run = 0;
            }
        }
        out
    }

    fn emit_words_of_len(
        &self,
        s: u32,
        remaining: usize,
        alive: &[Vec<bool>],
        prefix: &mut Vec<u16>,
        cap: usize,
        out: &mut Vec<Vec<u16>>,
    ) {
        if out.len() == cap {
            return;
        }
        if remaining == 0 {
            if self.accepting[s as usize] {
                out.push(prefix.clone());
            }
            return;
        }
        for e in self.edges_from(s) {
            if alive[remaining - 1][e.to as usize] {
                prefix.push(e.label);
                self.emit_words_of_len(e.to, remaining - 1, alive, prefix, cap, out);
                prefix.pop();
                if out.len() == cap {
                    return;
                }
            }
        }
    }
}

/// Encode a pair of words as a padded-pair label sequence.
pub fn encode_pair_word(pl: &PairLabels, u: &[Letter], v: &[Letter]) -> Vec<u16> {
    let len = u.len().max(v.len());
    (0..len)
        .map(|i| pl.encode(u.get(i).copied(), v.get(i).copied()))
        .collect()
}

/// Decode a padded-pair label sequence into its two words.
pub fn decode_pair_word(pl: &PairLabels, labels: &[u16]) -> (Word, Word) {
    let mut u = Word::new();
    let mut v = Word::new();
    for &l in labels {
        let (x, y) = pl.decode(l);
        u.extend(x);
        v.extend(y);
    }
    (u, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn letters(names: &str) -> Vec<String> {
        names.split_whitespace().map(str::to_string).collect()
    }

    /// {a^n} ∪ {A^n} over {a, A}: 3 states.
    fn z_acceptor() -> Automaton {
        let mut b = Builder::new(1, &letters("a A"));
        let s0 = b.add_state();
        let sa = b.add_state();
        let s_cap = b.add_state();
        for s in [s0, sa, s_cap] {
            b.set_accepting(s, true);
        }
        b.add_edge(s0, 0, sa);
        b.add_edge(s0, 1, s_cap);
        b.add_edge(sa, 0, sa);
        b.add_edge(s_cap, 1, s_cap);
        b.add_initial(s0);
        b.build()
    }

    #[test]
    fn run_accepts_and_rejects() {
        let m = z_acceptor();
        assert!(m.accepts(&[0, 0]));
        assert!(!m.accepts(&[0, 1]));
        assert!(m.accepts(&[]));
    }

    #[test]
    fn determinize_merges_two_initials() {
        // Two initial states, one accepts "a", the other accepts "A".
        let mut b = Builder::new(1, &letters("a A"));
        let i1 = b.add_state();
        let i2 = b.add_state();
        let f1 = b.add_state();
        let f2 = b.add_state();
        b.add_edge(i1, 0, f1);
        b.add_edge(i2, 1, f2);
        b.set_accepting(f1, true);
        b.set_accepting(f2, true);
        b.add_initial(i1);
        b.add_initial(i2);
        let n = b.build();
        let d = n.determinize(&DetOptions::default()).unwrap();
        assert!(d.is_deterministic());
        assert!(d.accepts(&[0]) && d.accepts(&[1]));
        assert!(!d.accepts(&[0, 0]) && !d.accepts(&[]));
        assert_eq!(d.minimize().n_states(), 2);
    }

    #[test]
    fn minimize_is_idempotent_and_canonical() {
        let m = z_acceptor();
        let m1 = m.minimize();
        let m2 = m1.minimize();
        assert_eq!(m1, m2);
        assert_eq!(m1.n_states(), 3);
    }

    #[test]
    fn minimize_merges_equivalent_states() {
        // Two redundant accepting chains for the language {a}.
        let mut b = Builder::new(1, &letters("a A"));
        let s0 = b.add_state();
        let t1 = b.add_state();
        let t2 = b.add_state();
        b.add_edge(s0, 0, t1);
        b.add_edge(s0, 1, t2);
        b.set_accepting(t1, true);
        b.set_accepting(t2, true);
        b.add_initial(s0);
        let m = b.build();
        // "a" and "A" lead to equivalent states.
        assert_eq!(m.minimize().n_states(), 2);
    }

    #[test]
    fn empty_language_minimizes_to_one_state() {
        let mut b = Builder::new(1, &letters("a A"));
        let s0 = b.add_state();
        b.add_initial(s0);
        let m = b.build().minimize();
        assert_eq!(m.n_states(), 1);
        assert!(m.is_empty_language());
    }

    #[test]
    fn pair_product_padding_mechanics() {
        // L(w1) = {a}, L(w2) = {ε} → accepts exactly (a,$).
        let mut b = Builder::new(1, &letters("a A"));
        let s0 = b.add_state();
        let s1 = b.add_state();
        b.add_edge(s0, 0, s1);
        b.set_accepting(s1, true);
        b.add_initial(s0);
        let w1 = b.build();
        let mut b = Builder::new(1, &letters("a A"));
        let s0 = b.add_state();
        b.set_accepting(s0, true);
        b.add_initial(s0);
        let w2 = b.build();
        let p = Automaton::pair_product(&w1, &w2);
        assert!(p.accepts_pair(&[0], &[]));
        assert!(!p.accepts_pair(&[0], &[0]));
        assert!(!p.accepts_pair(&[], &[]));
    }

    #[test]
    fn project_drops_padding() {
        // M accepts exactly (ab, a$) — projection on 2 accepts {a}.
        let mut b = Builder::new(2, &letters("a b"));
        let pl = PairLabels::new(2);
        let s0 = b.add_state();
        let s1 = b.add_state();
        let s2 = b.add_state();
        b.add_edge(s0, pl.encode(Some(0), Some(0)), s1);
        b.add_edge(s1, pl.encode(Some(1), None), s2);
        b.set_accepting(s2, true);
        b.add_initial(s0);
        let m = b.build();
        let p2 = m.project(2).unwrap().determinize(&DetOptions::default()).unwrap();
        assert!(p2.accepts(&[0]));
        assert!(!p2.accepts(&[0, 1]));
        let p1 = m.project(1).unwrap().determinize(&DetOptions::default()).unwrap();
        assert!(p1.accepts(&[0, 1]));
    }

    #[test]
    fn compose_chains_relations() {
        // {(a,b)} ∘ {(b,a)} = {(a,a)}.
        let pl = PairLabels::new(2);
        let single = |x: Letter, y: Letter| {
            let mut b = Builder::new(2, &letters("a b"));
            let s0 = b.add_state();
            let s1 = b.add_state();
            b.add_edge(s0, pl.encode(Some(x), Some(y)), s1);
            b.set_accepting(s1, true);
            b.add_initial(s0);
            b.build()
        };
        let m1 = single(0, 1);
        let m2 = single(1, 0);
        let c = m1.compose(&m2, &DetOptions::default()).unwrap();
        assert!(c.accepts_pair(&[0], &[0]));
        assert!(!c.accepts_pair(&[0], &[1]));
        assert!(!c.accepts_pair(&[1], &[0]));
    }

    #[test]
    fn compose_with_identity_is_identity() {
        let w = z_acceptor();
        let id = Automaton::identity_relation(&w);
        let c = id.compose(&id, &DetOptions::default()).unwrap();
        assert!(c.language_equal(&id).unwrap());
    }

    #[test]
    fn reverse_with_subsets_property() {
        // M accepting {ab}: v="a" reaches τ; w="b" read in Mᴿ gives T ∋ τ.
        let mut b = Builder::new(1, &letters("a b"));
        let s0 = b.add_state();
        let s1 = b.add_state();
        let s2 = b.add_state();
        b.add_edge(s0, 0, s1);
        b.add_edge(s1, 1, s2);
        b.set_accepting(s2, true);
        b.add_initial(s0);
        let m = b.build();
        let r = m.reverse_with_subsets(None).unwrap();
        assert!(r.accepts(&[1, 0]));
        let tau = m.step(m.initial(), 0).unwrap();
        let t_state = r.step(r.initial(), 1).unwrap();
        assert!(r.payload(t_state).unwrap().contains(&tau));
    }

    #[test]
    fn witnesses_in_shortlex_order() {
        // L1 = all words over {a,b}, L2 = words without factor "bb".
        let mut b = Builder::new(1, &letters("a b"));
        let s0 = b.add_state();
        b.set_accepting(s0, true);
        b.add_edge(s0, 0, s0);
        b.add_edge(s0, 1, s0);
        b.add_initial(s0);
        let all = b.build();
        let mut b = Builder::new(1, &letters("a b"));
        let s0 = b.add_state();
        let s1 = b.add_state();
        b.set_accepting(s0, true);
        b.set_accepting(s1, true);
        b.add_edge(s0, 0, s0);
        b.add_edge(s0, 1, s1);
        b.add_edge(s1, 0, s0);
        b.add_initial(s0);
        let no_bb = b.build();
        let w = all.diff_witnesses(&no_bb, 3).unwrap();
        assert_eq!(w, vec![vec![1, 1], vec![0, 1, 1], vec![1, 1, 0]]);
        assert!(no_bb.diff_witnesses(&all, 5).unwrap().is_empty());
        assert!(!all.language_equal(&no_bb).unwrap());
    }

    #[test]
    fn intersection_of_equal_languages_is_idempotent() {
        let m = z_acceptor();
        let i = m.intersect(&m).unwrap();
        assert!(i.language_equal(&m).unwrap());
    }

    #[test]
    fn complement_flips_membership() {
        let m = z_acceptor();
        let c = m.complement();
        assert!(!c.accepts(&[0, 0]));
        assert!(c.accepts(&[0, 1]));
    }
}
