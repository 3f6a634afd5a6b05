//! Readout-accepting automata.
//!
//! The NFA has one state per (k-1)-mer. Reading level `i` in state
//! `s0..s(k-2)` may move to any `s1..s(k-1)` with `f(s0..s(k-1)) = i`. Every
//! state is initial and accepting, so a readout is accepted exactly when some
//! strand produces it. The DFA is built by on-the-fly subset construction
//! from the full subset; only reachable subsets are materialized and the
//! empty (dead) subset is left implicit as a missing transition.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::channel::{Mapping, Readout};
use crate::error::{Error, Result};

pub const DEFAULT_STATE_CAP: usize = 1 << 20;

/// Fixed-width bitset over NFA states.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet(Box<[u64]>);

impl StateSet {
    pub fn empty(width: usize) -> Self {
        StateSet(vec![0u64; width.div_ceil(64)].into_boxed_slice())
    }

    pub fn full(width: usize) -> Self {
        let mut s = StateSet::empty(width);
        for i in 0..width {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + bit)
            })
        })
    }

    /// Lowercase hex, most significant word first, no leading zeros.
    pub fn to_hex(&self) -> String {
        let mut out = String::new();
        for &w in self.0.iter().rev() {
            if out.is_empty() {
                if w != 0 {
                    write!(out, "{w:x}").unwrap();
                }
            } else {
                write!(out, "{w:016x}").unwrap();
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// The nondeterministic readout automaton of a mapping.
#[derive(Debug, Clone)]
pub struct ChannelNfa {
    k: usize,
    b: u32,
    /// Level table of the mapping; window `q·4 + x` is read in state `q`
    /// when appending base `x`.
    table: Vec<u32>,
}

impl ChannelNfa {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alphabet_size(&self) -> u32 {
        self.b
    }

    /// `4^(k-1)` states (one state for `k = 1`).
    pub fn state_count(&self) -> usize {
        self.table.len() / 4
    }

    /// The four outgoing edges of `state` as `(level, target)`, in base order.
    #[inline]
    pub fn edges(&self, state: usize) -> [(u32, usize); 4] {
        let mask = self.state_count() - 1;
        std::array::from_fn(|x| {
            let window = (state << 2) | x;
            (self.table[window], window & mask)
        })
    }

    /// Successor states of `state` on `level`, ascending.
    pub fn successors(&self, state: usize, level: u32) -> Vec<usize> {
        let mut out: Vec<usize> = self.edges(state).iter().filter(|e| e.0 == level).map(|e| e.1).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn step(&self, from: &StateSet, level: u32) -> StateSet {
        let mut next = StateSet::empty(self.state_count());
        for q in from.iter() {
            for (l, t) in self.edges(q) {
                if l == level {
                    next.insert(t);
                }
            }
        }
        next
    }

    pub fn accepts(&self, readout: &Readout) -> bool {
        let mut current = StateSet::full(self.state_count());
        for &level in readout.levels() {
            current = self.step(&current, level);
            if current.is_empty() {
                return false;
            }
        }
        true
    }
}

pub fn build_nfa(f: &Mapping) -> ChannelNfa {
    ChannelNfa { k: f.k(), b: f.b(), table: f.table().to_vec() }
}

/// Trimmed deterministic automaton: state 0 is the full subset, every
/// stored state is reachable from it and accepting.
#[derive(Debug, Clone)]
pub struct ChannelDfa {
    b: u32,
    nfa_states: usize,
    states: Vec<StateSet>,
    /// Per state, `(level, target)` sorted by level. Missing levels lead to
    /// the dead subset.
    transitions: Vec<Vec<(u32, u32)>>,
}

impl ChannelDfa {
    pub fn initial(&self) -> usize {
        0
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn alphabet_size(&self) -> u32 {
        self.b
    }

    pub fn nfa_state_count(&self) -> usize {
        self.nfa_states
    }

    pub fn subset(&self, state: usize) -> &StateSet {
        &self.states[state]
    }

    pub fn transitions(&self, state: usize) -> &[(u32, u32)] {
        &self.transitions[state]
    }

    pub fn next(&self, state: usize, level: u32) -> Option<usize> {
        let row = &self.transitions[state];
        row.binary_search_by_key(&level, |e| e.0).ok().map(|i| row[i].1 as usize)
    }

    pub fn accepts(&self, readout: &Readout) -> bool {
        let mut state = self.initial();
        for &level in readout.levels() {
            match self.next(state, level) {
                Some(s) => state = s,
                None => return false,
            }
        }
        true
    }

    /// Debug dump, one `subset_hex level subset_hex` edge per line.
    pub fn edge_list(&self) -> String {
        let mut out = String::new();
        for (s, row) in self.transitions.iter().enumerate() {
            for &(level, t) in row {
                writeln!(out, "{} {} {}", self.states[s].to_hex(), level, self.states[t as usize].to_hex()).unwrap();
            }
        }
        out
    }
}

/// Subset construction restricted to subsets reachable from the full set.
pub fn determinize(nfa: &ChannelNfa, state_cap: usize) -> Result<ChannelDfa> {
    let width = nfa.state_count();
    let mut states = vec![StateSet::full(width)];
    let mut index: HashMap<StateSet, u32> = HashMap::new();
    index.insert(states[0].clone(), 0);
    let mut transitions: Vec<Vec<(u32, u32)>> = vec![Vec::new()];
    let mut queue = VecDeque::from([0usize]);
    let mut edges: Vec<(u32, usize)> = Vec::new();

    while let Some(current) = queue.pop_front() {
        edges.clear();
        for q in states[current].iter() {
            edges.extend(nfa.edges(q));
        }
        edges.sort_unstable();
        let mut row = Vec::new();
        let mut i = 0;
        while i < edges.len() {
            let level = edges[i].0;
            let mut target = StateSet::empty(width);
            while i < edges.len() && edges[i].0 == level {
                target.insert(edges[i].1);
                i += 1;
            }
            let id = match index.entry(target) {
                Entry::Occupied(e) => *e.get(),
                Entry::Vacant(e) => {
                    if states.len() >= state_cap {
                        return Err(Error::StateCapExceeded { cap: state_cap });
                    }
                    let id = states.len() as u32;
                    states.push(e.key().clone());
                    e.insert(id);
                    transitions.push(Vec::new());
                    queue.push_back(id as usize);
                    id
                }
            };
            row.push((level, id));
        }
        transitions[current] = row;
    }

    Ok(ChannelDfa { b: nfa.b, nfa_states: width, states, transitions })
}

/// Builds and determinizes in one go.
pub fn build_dfa(f: &Mapping, state_cap: usize) -> Result<ChannelDfa> {
    determinize(&build_nfa(f), state_cap)
}

/// True iff every readout is accepted, i.e. the dead subset is unreachable.
pub fn is_universal(dfa: &ChannelDfa) -> bool {
    let b = dfa.alphabet_size() as usize;
    dfa.transitions.iter().all(|row| row.len() == b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{apply_channel, Strand};
    use std::collections::HashSet;

    fn first_base(k: usize) -> Mapping {
        Mapping::from_fn(k, 2, |i| if (i >> (2 * (k - 1))) < 2 { 0 } else { 1 }).unwrap()
    }

    fn lcg_mapping(k: usize, b: u32, seed: u64) -> Mapping {
        let mut x = seed;
        Mapping::from_fn(k, b, |_| {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((x >> 33) % b as u64) as u32
        })
        .unwrap()
    }

    /// All readouts of `len` levels over `b`.
    fn all_readouts(b: u32, len: usize) -> Vec<Readout> {
        let total = (b as usize).pow(len as u32);
        (0..total)
            .map(|mut v| {
                let mut levels = vec![0u32; len];
                for slot in levels.iter_mut().rev() {
                    *slot = (v % b as usize) as u32;
                    v /= b as usize;
                }
                Readout::new(levels)
            })
            .collect()
    }

    fn generated(f: &Mapping, max_strand: usize) -> HashSet<Readout> {
        let mut out = HashSet::new();
        for n in f.k()..=max_strand {
            for v in 0..(1u64 << (2 * n)) {
                out.insert(apply_channel(f, &Strand::from_index(v, n)).unwrap());
            }
        }
        out
    }

    #[test]
    fn first_base_nfa_edges() {
        let nfa = build_nfa(&first_base(2));
        assert_eq!(nfa.state_count(), 4);
        assert_eq!(nfa.successors(0, 0), vec![0, 1, 2, 3]);
        assert!(nfa.successors(0, 1).is_empty());
        assert_eq!(nfa.successors(2, 1), vec![0, 1, 2, 3]);
    }

    #[test]
    fn constant_nfa_edges() {
        let nfa = build_nfa(&Mapping::constant(2, 2, 0).unwrap());
        for q in 0..4 {
            assert_eq!(nfa.successors(q, 0), vec![0, 1, 2, 3]);
            assert!(nfa.successors(q, 1).is_empty());
        }
    }

    #[test]
    fn de_bruijn_degrees() {
        let nfa = build_nfa(&lcg_mapping(3, 3, 11));
        let mut indeg = vec![0; nfa.state_count()];
        for q in 0..nfa.state_count() {
            for (_, t) in nfa.edges(q) {
                indeg[t] += 1;
            }
        }
        assert!(indeg.iter().all(|&d| d == 4));
    }

    #[test]
    fn k1_is_single_state() {
        let f = Mapping::new(1, 4, vec![0, 0, 2, 2]).unwrap();
        let dfa = build_dfa(&f, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(dfa.state_count(), 1);
        assert_eq!(dfa.transitions(0), &[(0, 0), (2, 0)]);
        assert!(!is_universal(&dfa));
    }

    #[test]
    fn first_base_dfa_is_full_self_loop() {
        let f = first_base(2);
        let dfa = build_dfa(&f, DEFAULT_STATE_CAP).unwrap();
        // {A,C} on 0 and {G,T} on 1 both lead back to the full subset.
        assert_eq!(dfa.state_count(), 1);
        assert_eq!(dfa.transitions(0), &[(0, 0), (1, 0)]);
        assert!(is_universal(&dfa));
        let nfa = build_nfa(&f);
        for len in 0..=6 {
            for r in all_readouts(2, len) {
                assert_eq!(dfa.accepts(&r), nfa.accepts(&r));
            }
        }
    }

    #[test]
    fn constant_dfa() {
        let dfa = build_dfa(&Mapping::constant(2, 2, 0).unwrap(), DEFAULT_STATE_CAP).unwrap();
        assert_eq!(dfa.state_count(), 1);
        assert_eq!(dfa.subset(0).len(), 4);
        assert_eq!(dfa.transitions(0), &[(0, 0)]);
        assert!(!is_universal(&dfa));
        assert!(!dfa.accepts(&Readout::new(vec![1])));
    }

    #[test]
    fn random_k2_b4_nfa_dfa_agree() {
        for seed in 0..5 {
            let f = lcg_mapping(2, 4, seed);
            let nfa = build_nfa(&f);
            let dfa = determinize(&nfa, DEFAULT_STATE_CAP).unwrap();
            for len in 0..=6 {
                for r in all_readouts(4, len) {
                    assert_eq!(dfa.accepts(&r), nfa.accepts(&r), "seed {seed} readout {r}");
                }
            }
        }
    }

    #[test]
    fn k3_three_way_agreement() {
        let f = lcg_mapping(3, 2, 5);
        let nfa = build_nfa(&f);
        let dfa = determinize(&nfa, DEFAULT_STATE_CAP).unwrap();
        let gen = generated(&f, 6);
        for len in 0..=4 {
            for r in all_readouts(2, len) {
                let brute = len == 0 || gen.contains(&r);
                assert_eq!(nfa.accepts(&r), brute, "{r}");
                assert_eq!(dfa.accepts(&r), brute, "{r}");
            }
        }
    }

    #[test]
    fn universality_matches_brute_force() {
        // Windows starting with A read 1, except AA which reads 0.
        let f = Mapping::from_fn(2, 2, |i| if i >> 2 == 0 && i != 0 { 1 } else { 0 }).unwrap();
        let dfa = build_dfa(&f, DEFAULT_STATE_CAP).unwrap();
        let gen = generated(&f, 6);
        let brute = (1..=5).all(|len| all_readouts(2, len).iter().all(|r| gen.contains(r)));
        assert_eq!(is_universal(&dfa), brute);

        for seed in 0..20 {
            let f = lcg_mapping(2, 2, seed);
            let dfa = build_dfa(&f, DEFAULT_STATE_CAP).unwrap();
            let gen = generated(&f, 6);
            let brute = (1..=5).all(|len| all_readouts(2, len).iter().all(|r| gen.contains(r)));
            assert_eq!(is_universal(&dfa), brute, "seed {seed}");
        }
    }

    #[test]
    fn state_cap_is_enforced() {
        let f = lcg_mapping(3, 4, 3);
        let full = build_dfa(&f, DEFAULT_STATE_CAP).unwrap();
        assert!(full.state_count() > 2);
        let err = build_dfa(&f, 2).unwrap_err();
        assert_eq!(err, Error::StateCapExceeded { cap: 2 });
        assert!(err.to_string().contains('2'));
    }

    #[test]
    fn hex_dump() {
        let mut s = StateSet::empty(70);
        s.insert(0);
        s.insert(65);
        assert_eq!(s.to_hex(), "20000000000000001");
        assert_eq!(StateSet::empty(4).to_hex(), "0");
        let dfa = build_dfa(&first_base(2), DEFAULT_STATE_CAP).unwrap();
        assert_eq!(dfa.edge_list(), "f 0 f\nf 1 f\n");
    }
}
