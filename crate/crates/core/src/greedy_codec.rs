//! Greedy coding scheme for two-level mappings.
//!
//! If every length-`ell` prefix starts at least one window of each level,
//! consecutive windows can overlap in `ell` bases and still pick their level
//! freely, so every `(k - ell)`-th reading carries one bit.

use crate::channel::{Base, Mapping, Readout, Strand};
use crate::error::{Error, Result};
use crate::mapping_space::{for_each_ordered, sample_balanced, sample_uniform};

const NONE: u32 = u32::MAX;

fn check_binary(f: &Mapping) -> Result<()> {
    if f.b() != 2 {
        return Err(Error::NotBinary { b: f.b() });
    }
    Ok(())
}

fn check_prefix_len(f: &Mapping, ell: usize) -> Result<()> {
    if ell == 0 || ell >= f.k() {
        return Err(Error::InvalidPrefixLength { ell, k: f.k() });
    }
    Ok(())
}

/// Whether every prefix of length `ell` begins windows of both levels.
/// One pass over the table.
pub fn greedy_feasible(f: &Mapping, ell: usize) -> Result<bool> {
    check_binary(f)?;
    check_prefix_len(f, ell)?;
    let shift = 2 * (f.k() - ell);
    let prefixes = 1usize << (2 * ell);
    let mut seen = [vec![false; prefixes], vec![false; prefixes]];
    for (w, &level) in f.table().iter().enumerate() {
        seen[level as usize][w >> shift] = true;
    }
    Ok(seen.iter().all(|s| s.iter().all(|&x| x)))
}

/// Largest feasible prefix length, if any.
pub fn greedy_max_prefix(f: &Mapping) -> Result<Option<usize>> {
    check_binary(f)?;
    for ell in (1..f.k()).rev() {
        if greedy_feasible(f, ell)? {
            return Ok(Some(ell));
        }
    }
    Ok(None)
}

/// `max(0, 1 - 4^ell * 2 * 2^(-4^(k - ell)))`, a lower bound on the chance
/// that a uniformly random two-level mapping is feasible at `ell`.
pub fn greedy_success_bound(k: usize, ell: usize) -> f64 {
    assert!(ell >= 1 && ell < k, "prefix length must satisfy 1 <= ell < k");
    let exponent = (2 * ell + 1) as f64 - 4f64.powi((k - ell) as i32);
    (1.0 - exponent.exp2()).max(0.0)
}

#[derive(Debug, Clone)]
struct Trie {
    /// Children per node in base order, `NONE` when absent.
    children: Vec<[u32; 4]>,
    /// Window index of the lexicographically least leaf below each node.
    least_leaf: Vec<u32>,
}

impl Trie {
    fn new() -> Self {
        Trie { children: vec![[NONE; 4]], least_leaf: Vec::new() }
    }
}

/// Two tries over `f^-1(0)` and `f^-1(1)` with, for every window, pointers
/// to the nodes spelling its last `ell` bases in both tries.
#[derive(Debug, Clone)]
pub struct GreedyScheme {
    f: Mapping,
    ell: usize,
    tries: [Trie; 2],
    /// Per window index: node of its length-`ell` suffix in trie 0 and trie 1.
    suffix_nodes: Vec<[u32; 2]>,
    build_operations: usize,
}

impl GreedyScheme {
    pub fn new(f: &Mapping, ell: usize) -> Result<Self> {
        if !greedy_feasible(f, ell)? {
            return Err(Error::PrefixPropertyViolated { ell });
        }
        let k = f.k();
        let prefixes = 1usize << (2 * ell);
        let mut ops = 0usize;
        let mut tries = [Trie::new(), Trie::new()];
        let mut prefix_node = [vec![NONE; prefixes], vec![NONE; prefixes]];
        let mut leaf_of = vec![NONE; f.kmer_count()];

        for (w, &level) in f.table().iter().enumerate() {
            let trie = &mut tries[level as usize];
            let mut node = 0usize;
            for depth in 0..k {
                ops += 1;
                let base = (w >> (2 * (k - 1 - depth))) & 3;
                if trie.children[node][base] == NONE {
                    trie.children[node][base] = trie.children.len() as u32;
                    trie.children.push([NONE; 4]);
                }
                node = trie.children[node][base] as usize;
                if depth + 1 == ell {
                    prefix_node[level as usize][w >> (2 * (k - ell))] = node as u32;
                }
            }
            leaf_of[w] = node as u32;
        }

        // children are always created after their parent, so a reverse scan
        // sees every child first
        for (level, trie) in tries.iter_mut().enumerate() {
            let n = trie.children.len();
            trie.least_leaf = vec![NONE; n];
            for (w, &leaf) in leaf_of.iter().enumerate() {
                if f.level(w) as usize == level {
                    trie.least_leaf[leaf as usize] = w as u32;
                }
            }
            for node in (0..n).rev() {
                ops += 1;
                if let Some(&c) = trie.children[node].iter().find(|&&c| c != NONE) {
                    trie.least_leaf[node] = trie.least_leaf[c as usize];
                }
            }
        }

        let suffix_mask = prefixes - 1;
        let suffix_nodes = (0..f.kmer_count())
            .map(|w| {
                ops += 1;
                let suffix = w & suffix_mask;
                [prefix_node[0][suffix], prefix_node[1][suffix]]
            })
            .collect::<Vec<_>>();
        debug_assert!(suffix_nodes.iter().all(|p| p[0] != NONE && p[1] != NONE));

        Ok(GreedyScheme { f: f.clone(), ell, tries, suffix_nodes, build_operations: ops })
    }

    pub fn mapping(&self) -> &Mapping {
        &self.f
    }

    pub fn prefix_len(&self) -> usize {
        self.ell
    }

    /// Bases appended per bit after the first window, `k - ell`.
    pub fn stride(&self) -> usize {
        self.f.k() - self.ell
    }

    /// Asymptotic rate, `1 / (k - ell)` bits per base.
    pub fn rate(&self) -> f64 {
        1.0 / self.stride() as f64
    }

    /// Node visits spent building the tries and pointers.
    pub fn build_operations(&self) -> usize {
        self.build_operations
    }

    pub fn trie_node_count(&self, level: usize) -> usize {
        self.tries[level].children.len()
    }

    /// Strand of length `k + (n - 1)(k - ell)` whose reading at `i (k - ell)`
    /// is bit `i`. Windows and completions are the lexicographically least
    /// available ones.
    pub fn encode(&self, bits: &[bool]) -> Result<Strand> {
        let (&first, rest) = bits.split_first().ok_or(Error::EmptyMessage)?;
        let k = self.f.k();
        let stride = self.stride();
        let mut window = self.tries[first as usize].least_leaf[0] as usize;
        let mut bases: Vec<Base> = Strand::from_index(window as u64, k).into_bases();
        bases.reserve(rest.len() * stride);
        for &bit in rest {
            let node = self.suffix_nodes[window][bit as usize] as usize;
            window = self.tries[bit as usize].least_leaf[node] as usize;
            for shift in (0..stride).rev() {
                bases.push(Base::from_index(window >> (2 * shift)));
            }
        }
        Ok(Strand::new(bases))
    }

    /// Every `(k - ell)`-th reading, starting with the first.
    pub fn decode(&self, readout: &Readout) -> Result<Vec<bool>> {
        let stride = self.stride();
        let levels = readout.levels();
        if levels.is_empty() || !(levels.len() - 1).is_multiple_of(stride) {
            return Err(Error::ReadoutLengthMismatch { len: levels.len() });
        }
        levels
            .iter()
            .step_by(stride)
            .map(|&l| match l {
                0 => Ok(false),
                1 => Ok(true),
                level => Err(Error::ReadoutLevelOutOfRange { level, position: 0, b: 2 }),
            })
            .collect()
    }
}

pub fn greedy_encode(gs: &GreedyScheme, bits: &[bool]) -> Result<Strand> {
    gs.encode(bits)
}

pub fn greedy_decode(gs: &GreedyScheme, readout: &Readout) -> Result<Vec<bool>> {
    gs.decode(readout)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloResult {
    pub k: usize,
    pub ell: usize,
    pub trials: usize,
    pub feasible: usize,
    pub balanced: bool,
    pub bound: f64,
}

impl MonteCarloResult {
    pub const CSV_HEADER: &'static str = "k,ell,sampler,trials,feasible,empirical_rate,bound";

    pub fn empirical_rate(&self) -> f64 {
        self.feasible as f64 / self.trials as f64
    }

    /// Binomial standard error at the bound.
    pub fn sigma(&self) -> f64 {
        (self.bound * (1.0 - self.bound) / self.trials as f64).sqrt()
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.6},{:.6}",
            self.k,
            self.ell,
            if self.balanced { "balanced" } else { "uniform" },
            self.trials,
            self.feasible,
            self.empirical_rate(),
            self.bound
        )
    }
}

/// Fraction of random two-level mappings that are feasible at `ell`.
/// `balanced` draws from balanced mappings instead of uniform ones.
pub fn monte_carlo_feasibility(
    k: usize,
    ell: usize,
    trials: usize,
    seed: u64,
    workers: usize,
    balanced: bool,
) -> Result<MonteCarloResult> {
    if ell == 0 || ell >= k {
        return Err(Error::InvalidPrefixLength { ell, k });
    }
    if trials == 0 {
        return Err(Error::InvalidParameters("trials must be positive".into()));
    }
    let stream: Box<dyn Iterator<Item = Mapping>> =
        if balanced { Box::new(sample_balanced(k, 2, trials, seed)?) } else { Box::new(sample_uniform(k, 2, trials, seed)) };
    let mut feasible = 0usize;
    for_each_ordered(stream, workers, |f| greedy_feasible(f, ell), |_, ok| feasible += ok as usize)?;
    Ok(MonteCarloResult { k, ell, trials, feasible, balanced, bound: greedy_success_bound(k, ell) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::apply_channel;
    use crate::mapping_space::sample_uniform_one;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn last_base() -> Mapping {
        Mapping::from_fn(2, 2, |i| ((i & 3) >> 1) as u32).unwrap()
    }

    fn first_base() -> Mapping {
        Mapping::from_fn(2, 2, |i| (i >> 3) as u32).unwrap()
    }

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    /// Prefix property checked straight from the definition.
    fn feasible_oracle(f: &Mapping, ell: usize) -> bool {
        let k = f.k();
        (0..1usize << (2 * ell)).all(|p| {
            let levels: Vec<u32> = (0..1usize << (2 * (k - ell))).map(|s| f.level((p << (2 * (k - ell))) | s)).collect();
            levels.contains(&0) && levels.contains(&1)
        })
    }

    #[test]
    fn feasibility_examples() {
        assert!(greedy_feasible(&last_base(), 1).unwrap());
        assert!(!greedy_feasible(&first_base(), 1).unwrap());
        assert_eq!(greedy_max_prefix(&last_base()).unwrap(), Some(1));
        assert_eq!(greedy_max_prefix(&first_base()).unwrap(), None);
        let b4 = Mapping::constant(2, 4, 0).unwrap();
        assert_eq!(greedy_feasible(&b4, 1).unwrap_err(), Error::NotBinary { b: 4 });
        assert!(greedy_max_prefix(&b4).is_err());
        assert!(matches!(greedy_feasible(&last_base(), 2), Err(Error::InvalidPrefixLength { .. })));
    }

    #[test]
    fn feasibility_matches_oracle_and_is_monotone() {
        for seed in 0..200 {
            let f = sample_uniform_one(4, 2, 5, seed);
            let mut previous = true;
            for ell in 1..4 {
                let ok = greedy_feasible(&f, ell).unwrap();
                assert_eq!(ok, feasible_oracle(&f, ell));
                assert!(previous || !ok, "feasible at {ell} but not below");
                previous = ok;
            }
        }
    }

    #[test]
    fn max_prefix_postcondition() {
        for seed in 0..50 {
            let f = sample_uniform_one(6, 2, 8, seed);
            if let Some(ell) = greedy_max_prefix(&f).unwrap() {
                assert!(greedy_feasible(&f, ell).unwrap());
                if ell < 5 {
                    assert!(!greedy_feasible(&f, ell + 1).unwrap());
                }
            }
        }
    }

    #[test]
    fn worked_encoding() {
        let gs = GreedyScheme::new(&last_base(), 1).unwrap();
        let s = gs.encode(&bits("010")).unwrap();
        assert_eq!(s.to_string(), "AAGA");
        let r = apply_channel(gs.mapping(), &s).unwrap();
        assert_eq!(r.levels(), &[0, 1, 0]);
        assert_eq!(gs.decode(&r).unwrap(), bits("010"));
        assert_eq!(gs.encode(&bits("0")).unwrap().to_string(), "AA");
        assert_eq!(gs.encode(&bits("1")).unwrap().to_string(), "AG");
        assert_eq!(gs.decode(&Readout::new(vec![1])).unwrap(), bits("1"));
        assert_eq!(gs.encode(&[]).unwrap_err(), Error::EmptyMessage);
    }

    #[test]
    fn infeasible_scheme_is_rejected() {
        assert_eq!(GreedyScheme::new(&first_base(), 1).unwrap_err(), Error::PrefixPropertyViolated { ell: 1 });
    }

    #[test]
    fn decode_length_check() {
        let f = sample_uniform_one(4, 2, 1, (0..).find(|&s| greedy_feasible(&sample_uniform_one(4, 2, 1, s), 2).unwrap()).unwrap());
        let gs = GreedyScheme::new(&f, 2).unwrap();
        assert!(gs.decode(&Readout::new(vec![0, 1])).is_err());
        assert!(gs.decode(&Readout::default()).is_err());
        assert_eq!(gs.decode(&Readout::new(vec![0, 1, 1])).unwrap(), bits("01"));
    }

    #[test]
    fn random_roundtrips_and_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut checked = 0;
        for seed in 0..40 {
            let f = sample_uniform_one(5, 2, 23, seed);
            let Some(ell) = greedy_max_prefix(&f).unwrap() else { continue };
            let gs = GreedyScheme::new(&f, ell).unwrap();
            assert!(gs.build_operations() <= (f.k() + 3) * f.kmer_count());
            for len in 1..60 {
                let msg: Vec<bool> = (0..len).map(|_| rng.gen()).collect();
                let s = gs.encode(&msg).unwrap();
                assert_eq!(s.len(), 5 + (len - 1) * gs.stride());
                let r = apply_channel(&f, &s).unwrap();
                for (i, &bit) in msg.iter().enumerate() {
                    assert_eq!(r.levels()[i * gs.stride()], bit as u32);
                }
                assert_eq!(gs.decode(&r).unwrap(), msg);
            }
            checked += 1;
        }
        assert!(checked >= 20);
    }

    #[test]
    fn bound_values() {
        assert_eq!(greedy_success_bound(6, 4), 1.0 - 1.0 / 128.0);
        assert_eq!(greedy_success_bound(2, 1), 0.5);
        assert_eq!(greedy_success_bound(3, 2), 0.0);
    }

    #[test]
    fn monte_carlo_small() {
        let uniform = monte_carlo_feasibility(4, 2, 10_000, 5, 2, false).unwrap();
        let bound = greedy_success_bound(4, 2);
        assert!(uniform.empirical_rate() >= bound - 3.0 * uniform.sigma());
        let balanced = monte_carlo_feasibility(4, 2, 10_000, 5, 2, true).unwrap();
        assert!(balanced.empirical_rate() >= bound - 3.0 * balanced.sigma());
        let again = monte_carlo_feasibility(4, 2, 10_000, 5, 1, false).unwrap();
        assert_eq!(again.csv_row(), uniform.csv_row());
    }
}
