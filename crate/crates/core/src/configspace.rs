//! Configurations `(s, ρ)`: visiting order and visiting agent per stage.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{EvacError, Result};
use crate::geometry::PolygonGeometry;

/// `rho[j]` is the vertex visited at stage `j + 1`, `s[j]` the agent visiting it (0 = Queen).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Configuration {
    pub n: usize,
    pub k: usize,
    pub rho: Vec<usize>,
    pub s: Vec<usize>,
}

impl Configuration {
    pub fn new(n: usize, k: usize, rho: Vec<usize>, s: Vec<usize>) -> Result<Self> {
        let c = Configuration { n, k, rho, s };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(EvacError::InvalidConfiguration(m));
        if self.n < 3 {
            return bad(format!("n = {} < 3", self.n));
        }
        if self.rho.len() != self.n || self.s.len() != self.n {
            return bad(format!("rho and s must have length {}", self.n));
        }
        let mut seen = vec![false; self.n + 1];
        for &v in &self.rho {
            if v < 1 || v > self.n || seen[v] {
                return bad(format!("rho is not a permutation of 1..={}", self.n));
            }
            seen[v] = true;
        }
        if let Some(a) = self.s.iter().find(|&&a| a > self.k) {
            return bad(format!("agent {a} exceeds k = {}", self.k));
        }
        Ok(())
    }

    /// Stages (1-based) assigned to `agent`, in order.
    pub fn stages_of(&self, agent: usize) -> impl Iterator<Item = usize> + '_ {
        self.s.iter().enumerate().filter(move |(_, &a)| a == agent).map(|(j, _)| j + 1)
    }

    /// Vertex visited at 1-based stage `j`.
    pub fn vertex_at(&self, j: usize) -> usize {
        self.rho[j - 1]
    }

    /// Agent visiting 1-based stage `j`.
    pub fn agent_at(&self, j: usize) -> usize {
        self.s[j - 1]
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} k={} rho={} s={}", self.n, self.k, join(&self.rho), join(&self.s))
    }
}

impl FromStr for Configuration {
    type Err = EvacError;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || EvacError::InvalidConfiguration(format!("cannot parse {text:?}"));
        let mut n = None;
        let mut k = None;
        let mut rho = None;
        let mut s = None;
        for tok in text.split_whitespace() {
            let (key, val) = tok.split_once('=').ok_or_else(bad)?;
            let list = || -> Result<Vec<usize>> {
                val.split(',').map(|x| x.trim().parse::<usize>().map_err(|_| bad())).collect()
            };
            match key {
                "n" => n = Some(val.parse().map_err(|_| bad())?),
                "k" => k = Some(val.parse().map_err(|_| bad())?),
                "rho" => rho = Some(list()?),
                "s" => s = Some(list()?),
                _ => return Err(bad()),
            }
        }
        match (n, k, rho, s) {
            (Some(n), Some(k), Some(rho), Some(s)) => Configuration::new(n, k, rho, s),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterOptions {
    pub fix_first_vertex: bool,
    pub halve_second_vertex: bool,
    pub queen_consecutive_rule: bool,
    pub canonical_servant_labels: bool,
}

impl FilterOptions {
    pub fn all() -> Self {
        FilterOptions {
            fix_first_vertex: true,
            halve_second_vertex: true,
            queen_consecutive_rule: true,
            canonical_servant_labels: true,
        }
    }

    pub fn none() -> Self {
        FilterOptions {
            fix_first_vertex: false,
            halve_second_vertex: false,
            queen_consecutive_rule: false,
            canonical_servant_labels: false,
        }
    }
}

impl Default for FilterOptions {
    fn default() -> Self {
        Self::all()
    }
}

/// Largest second vertex kept by the reflection filter.
///
/// The reflection fixing vertex 1 pairs `v` with `n + 2 - v`; for even `n` the
/// opposite vertex `n/2 + 1` is its own mirror image and must stay.
pub fn second_vertex_limit(n: usize) -> usize {
    n / 2 + 1
}

pub fn canonicalize_servants(c: &Configuration) -> Configuration {
    let mut map = vec![0usize; c.k + 1];
    let mut next = 1;
    let s = c
        .s
        .iter()
        .map(|&a| {
            if a == 0 {
                return 0;
            }
            if map[a] == 0 {
                map[a] = next;
                next += 1;
            }
            map[a]
        })
        .collect();
    Configuration { n: c.n, k: c.k, rho: c.rho.clone(), s }
}

pub fn mirror(c: &Configuration) -> Configuration {
    let n = c.n;
    let rho = c.rho.iter().map(|&v| (n + 1 - v) % n + 1).collect();
    Configuration { n, k: c.k, rho, s: c.s.clone() }
}

pub fn is_canonical_labels(s: &[usize]) -> bool {
    let mut next = 1;
    for &a in s {
        if a == next {
            next += 1;
        } else if a > next {
            return false;
        }
    }
    true
}

pub fn satisfies_queen_rule(s: &[usize]) -> bool {
    match s.windows(2).position(|w| w[0] == 0 && w[1] == 0) {
        Some(j) => s[j..].iter().all(|&a| a == 0),
        None => true,
    }
}

pub fn traversal_lower_bound(c: &Configuration, g: &PolygonGeometry) -> f64 {
    let mut last = vec![0usize; c.k + 1];
    let mut len = vec![0.0f64; c.k + 1];
    for (&v, &a) in c.rho.iter().zip(&c.s) {
        if last[a] != 0 {
            len[a] += g.chord(last[a], v);
        }
        last[a] = v;
    }
    len.into_iter().fold(0.0, f64::max)
}

pub fn naive_upper_bound(n: usize, k: usize, g: &PolygonGeometry) -> f64 {
    let e = g.edge_length();
    let a = 1.0 + (n.div_ceil(k) as f64 - 1.0) * e;
    let b = 2.0 + (n.div_ceil(k + 1) as f64 - 1.0) * e;
    a.min(b)
}

/// The filtered configuration set, indexed in lexicographic order (rho, then s).
///
/// The filters on `rho` and on `s` are independent, so the set is a product and
/// index `i` maps to `(rhos[i / |S|], ss[i % |S|])`.
#[derive(Debug, Clone)]
pub struct ConfigSpace {
    pub n: usize,
    pub k: usize,
    pub opts: FilterOptions,
    rhos: Vec<Vec<usize>>,
    ss: Vec<Vec<usize>>,
}

impl ConfigSpace {
    pub fn new(n: usize, k: usize, opts: FilterOptions) -> Self {
        ConfigSpace { n, k, opts, rhos: rho_list(n, opts), ss: s_list(n, k, opts) }
    }

    pub fn len(&self) -> usize {
        self.rhos.len() * self.ss.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> Configuration {
        let m = self.ss.len();
        Configuration {
            n: self.n,
            k: self.k,
            rho: self.rhos[i / m].clone(),
            s: self.ss[i % m].clone(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Configuration> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }
}

pub fn enumerate_configurations(
    n: usize,
    k: usize,
    opts: FilterOptions,
) -> impl Iterator<Item = Configuration> {
    let space = ConfigSpace::new(n, k, opts);
    (0..space.len()).map(move |i| space.get(i))
}

fn rho_allowed(n: usize, pos: usize, v: usize, opts: FilterOptions) -> bool {
    match pos {
        0 => !opts.fix_first_vertex || v == 1,
        1 => !opts.halve_second_vertex || v <= second_vertex_limit(n),
        _ => true,
    }
}

fn rho_list(n: usize, opts: FilterOptions) -> Vec<Vec<usize>> {
    fn rec(n: usize, opts: FilterOptions, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 1..=n {
            if used[v] || !rho_allowed(n, cur.len(), v, opts) {
                continue;
            }
            used[v] = true;
            cur.push(v);
            rec(n, opts, cur, used, out);
            cur.pop();
            used[v] = false;
        }
    }
    let mut out = Vec::new();
    rec(n, opts, &mut Vec::with_capacity(n), &mut vec![false; n + 1], &mut out);
    out
}

fn s_list(n: usize, k: usize, opts: FilterOptions) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, opts: FilterOptions, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let used = cur.iter().copied().max().unwrap_or(0);
        let locked = opts.queen_consecutive_rule && cur.windows(2).any(|w| w[0] == 0 && w[1] == 0);
        let top = if locked {
            0
        } else if opts.canonical_servant_labels {
            k.min(used + 1)
        } else {
            k
        };
        for a in 0..=top {
            cur.push(a);
            rec(n, k, opts, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, opts, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Exact size of the filtered set, computed without materializing it.
pub fn count_configurations(n: usize, k: usize, opts: FilterOptions) -> u128 {
    let mut rhos: u128 = 0;
    for a in 1..=n {
        for b in 1..=n {
            if a != b && rho_allowed(n, 0, a, opts) && rho_allowed(n, 1, b, opts) {
                rhos += 1;
            }
        }
    }
    rhos *= (1..=(n as u128 - 2)).product::<u128>();

    // State: (labels used, previous was queen, locked into queens).
    let mut ways = std::collections::HashMap::new();
    ways.insert((0usize, false, false), 1u128);
    for _ in 0..n {
        let mut next = std::collections::HashMap::new();
        for (&(used, prev0, locked), &w) in &ways {
            let top = if locked {
                0
            } else if opts.canonical_servant_labels {
                k.min(used + 1)
            } else {
                k
            };
            for a in 0..=top {
                let lock = locked || (opts.queen_consecutive_rule && prev0 && a == 0);
                let key = (used.max(a), a == 0, lock);
                *next.entry(key).or_insert(0) += w;
            }
        }
        ways = next;
    }
    rhos * ways.values().sum::<u128>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_polygon;

    fn cfg(n: usize, k: usize, rho: &[usize], s: &[usize]) -> Configuration {
        Configuration::new(n, k, rho.to_vec(), s.to_vec()).unwrap()
    }

    #[test]
    fn unfiltered_count() {
        assert_eq!(enumerate_configurations(3, 1, FilterOptions::none()).count(), 48);
        for n in 3..=5 {
            for k in 1..=2usize {
                let expect = (1..=n).product::<usize>() * (k + 1).pow(n as u32);
                assert_eq!(enumerate_configurations(n, k, FilterOptions::none()).count(), expect);
                assert_eq!(count_configurations(n, k, FilterOptions::none()), expect as u128);
            }
        }
    }

    #[test]
    fn count_matches_enumeration() {
        for n in 3..=6 {
            for k in 1..=3 {
                for bits in 0..16u8 {
                    let o = FilterOptions {
                        fix_first_vertex: bits & 1 != 0,
                        halve_second_vertex: bits & 2 != 0,
                        queen_consecutive_rule: bits & 4 != 0,
                        canonical_servant_labels: bits & 8 != 0,
                    };
                    let c = ConfigSpace::new(n, k, o).len() as u128;
                    assert_eq!(c, count_configurations(n, k, o), "n={n} k={k} bits={bits}");
                }
            }
        }
    }

    #[test]
    fn first_two_filters_at_n3() {
        let mut o = FilterOptions::none();
        o.fix_first_vertex = true;
        o.halve_second_vertex = true;
        let all: Vec<_> = enumerate_configurations(3, 1, o).collect();
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(|c| c.rho == vec![1, 2, 3]));
    }

    #[test]
    fn canonical_first_servant_is_one() {
        let mut o = FilterOptions::none();
        o.canonical_servant_labels = true;
        for c in enumerate_configurations(4, 2, o) {
            if let Some(&a) = c.s.iter().find(|&&a| a != 0) {
                assert_eq!(a, 1);
            }
        }
    }

    #[test]
    fn lexicographic_order() {
        let v: Vec<_> = enumerate_configurations(4, 2, FilterOptions::all()).collect();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn canonicalize_examples() {
        let c = cfg(4, 2, &[1, 2, 3, 4], &[2, 1, 0, 2]);
        assert_eq!(canonicalize_servants(&c).s, vec![1, 2, 0, 1]);
        let c = cfg(3, 1, &[1, 2, 3], &[0, 0, 0]);
        assert_eq!(canonicalize_servants(&c).s, vec![0, 0, 0]);
        let c = cfg(4, 3, &[1, 2, 3, 4], &[3, 1, 2, 3]);
        assert_eq!(canonicalize_servants(&c).s, vec![1, 2, 3, 1]);
    }

    #[test]
    fn mirror_examples() {
        let c = cfg(5, 1, &[1, 2, 4, 5, 3], &[0; 5]);
        assert_eq!(mirror(&c).rho, vec![1, 5, 3, 2, 4]);
        let c = cfg(4, 1, &[1, 3, 2, 4], &[0; 4]);
        assert_eq!(mirror(&c).rho, vec![1, 3, 4, 2]);
    }

    #[test]
    fn traversal_examples() {
        let g6 = make_polygon(6).unwrap();
        let c = cfg(6, 1, &[1, 2, 6, 3, 5, 4], &[1, 0, 1, 0, 1, 0]);
        assert!((traversal_lower_bound(&c, &g6) - 2.0).abs() < 1e-12);
        let g4 = make_polygon(4).unwrap();
        let c = cfg(4, 1, &[1, 3, 2, 4], &[0, 0, 0, 0]);
        let expect = g4.chord(1, 3) + g4.chord(3, 2) + g4.chord(2, 4);
        assert!((traversal_lower_bound(&c, &g4) - expect).abs() < 1e-12);
        let c = cfg(4, 3, &[1, 3, 2, 4], &[0, 1, 2, 3]);
        assert_eq!(traversal_lower_bound(&c, &g4), 0.0);
    }

    #[test]
    fn naive_examples() {
        assert!((naive_upper_bound(6, 1, &make_polygon(6).unwrap()) - 4.0).abs() < 1e-12);
        assert!((naive_upper_bound(3, 2, &make_polygon(3).unwrap()) - 2.0).abs() < 1e-12);
        let g9 = make_polygon(9).unwrap();
        let e9 = 2.0 * (std::f64::consts::PI / 9.0).sin();
        assert!((naive_upper_bound(9, 1, &g9) - (2.0 + 4.0 * e9)).abs() < 1e-12);
    }

    #[test]
    fn text_round_trip() {
        let t = "n=9 k=1 rho=1,2,9,3,8,4,7,5,6 s=1,0,1,0,1,0,1,0,1";
        let c: Configuration = t.parse().unwrap();
        assert_eq!(c.to_string(), t);
        assert!("n=3 k=1 rho=1,1,2 s=0,0,0".parse::<Configuration>().is_err());
        assert!("n=3 k=1 rho=1,2,3 s=0,2,0".parse::<Configuration>().is_err());
    }
}
