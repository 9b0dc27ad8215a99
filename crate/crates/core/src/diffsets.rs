//! Difference-set combinatorics.
//!
//! `D+(A)` is the set of positive differences of `A`. `M1+(S)` is the largest
//! `#J` over `J ⊆ Z` with `D+(J) ⊆ S`; `M2+(S)` adds `J ⊆ S`. Both are maximum
//! cliques in the graph joining `x < y` when `y - x ∈ S`, searched here by
//! branch and bound with a greedy-colouring bound.
//!
//! Also hosts the zero-sum subset finder: a dynamic programme over `Z/kZ`.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use serde::Serialize;

use crate::config::Limits;
use crate::digitsets::{enum_set, Base, SetSpec};
use crate::error::{Error, Result};
use crate::exact::lt_three_sqrt;

/// `D+(A) = { y - x : x, y ∈ A, y > x }`.
pub fn positive_differences(a: &BTreeSet<i64>) -> BTreeSet<i64> {
    let v: Vec<i64> = a.iter().copied().collect();
    let mut out = BTreeSet::new();
    for (i, &x) in v.iter().enumerate() {
        for &y in &v[i + 1..] {
            out.insert(y - x);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `J` anywhere in the window.
    M1,
    /// `J ⊆ S`.
    M2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiffSetReport {
    pub variant: Variant,
    pub value: usize,
    /// Lexicographically least optimal `J`, ascending.
    pub witness: Vec<i64>,
    /// `floor(log_b N) + 2` when `S = D_b ∩ [1, N]` with `b >= 3`.
    pub bound: Option<u64>,
    pub nodes: u64,
}

/// Maximum `#J` with `D+(J) ⊆ S`.
///
/// For [`Variant::M1`] the candidates are the integers of `window`, which
/// defaults to `[0, max S]`: any admissible `J` translates to one with
/// `min J = 0`, and then `J ⊆ [0, max S]`. For [`Variant::M2`] the candidates
/// are the elements of `S` and the window is ignored.
pub fn m_plus(
    s: &BTreeSet<i64>,
    variant: Variant,
    window: Option<RangeInclusive<i64>>,
    limits: &Limits,
) -> Result<DiffSetReport> {
    let max = *s
        .iter()
        .next_back()
        .ok_or_else(|| Error::domain("S must be nonempty"))?;
    if s.iter().any(|&x| x < 1) {
        return Err(Error::domain("S must consist of positive integers"));
    }
    let vertices: Vec<i64> = match variant {
        Variant::M1 => {
            let w = window.unwrap_or(0..=max);
            let len = (*w.end() - *w.start() + 1).max(0) as u64;
            if len > limits.enumeration_cap {
                return Err(Error::limit("M1+ window", len, limits.enumeration_cap));
            }
            w.collect()
        }
        Variant::M2 => s.iter().copied().collect(),
    };
    let mut search = CliqueSearch::new(&vertices, s, limits.node_budget);
    search.run()?;
    let witness: Vec<i64> = search.best.iter().map(|&i| vertices[i]).collect();
    Ok(DiffSetReport {
        variant,
        value: witness.len(),
        witness,
        bound: None,
        nodes: search.nodes,
    })
}

/// [`m_plus`] on `S = D_b ∩ [1, N]`, with the `floor(log_b N) + 2` cap filled
/// in for `b >= 3`.
pub fn m_plus_db(b: Base, n: u128, variant: Variant, limits: &Limits) -> Result<DiffSetReport> {
    let s: BTreeSet<i64> = enum_set(&SetSpec::db(b), Some(n), limits)?
        .map(|x| x as i64)
        .collect();
    let mut report = m_plus(&s, variant, None, limits)?;
    if b.get() >= 3 {
        report.bound = Some(db_difference_cap(b, n));
    }
    Ok(report)
}

/// `floor(log_b N) + 2`.
pub fn db_difference_cap(b: Base, n: u128) -> u64 {
    let mut d = 0u64;
    let mut p = b.as_u128();
    while p <= n {
        d += 1;
        p = match p.checked_mul(b.as_u128()) {
            Some(x) => x,
            None => break,
        };
    }
    d + 2
}

/// Fixed-width bitset over vertex indices.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
}

struct CliqueSearch {
    adj: Vec<Bits>,
    n: usize,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl CliqueSearch {
    fn new(vertices: &[i64], s: &BTreeSet<i64>, budget: u64) -> CliqueSearch {
        let n = vertices.len();
        let mut adj = vec![Bits::empty(n); n];
        for i in 0..n {
            for j in i + 1..n {
                if s.contains(&(vertices[j] - vertices[i]).abs()) {
                    adj[i].set(j);
                    adj[j].set(i);
                }
            }
        }
        CliqueSearch {
            adj,
            n,
            best: Vec::new(),
            nodes: 0,
            budget,
        }
    }

    fn run(&mut self) -> Result<()> {
        let mut all = Bits::empty(self.n);
        for i in 0..self.n {
            all.set(i);
        }
        let mut clique = Vec::new();
        self.expand(&mut clique, all)
    }

    /// Greedy colouring of `cand` in index order; the number of colour
    /// classes bounds the clique size inside `cand`.
    fn colour_bound(&self, cand: &Bits) -> usize {
        let mut uncoloured = cand.clone();
        let mut colours = 0;
        while !uncoloured.is_empty() {
            colours += 1;
            let mut avail = uncoloured.clone();
            while let Some(v) = avail.first() {
                avail.clear(v);
                avail.and_not(&self.adj[v]);
                uncoloured.clear(v);
            }
        }
        colours
    }

    /// Candidates are explored in increasing index order and the incumbent is
    /// replaced only by strictly larger cliques, so the first maximum clique
    /// found is the lexicographically least.
    fn expand(&mut self, clique: &mut Vec<usize>, cand: Bits) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::limit("difference-set branch and bound nodes", self.nodes, self.budget));
        }
        if cand.is_empty() {
            if clique.len() > self.best.len() {
                self.best = clique.clone();
            }
            return Ok(());
        }
        if clique.len() + self.colour_bound(&cand) <= self.best.len() {
            return Ok(());
        }
        let mut rest = cand;
        while let Some(v) = rest.first() {
            if clique.len() + rest.count() <= self.best.len() {
                return Ok(());
            }
            rest.clear(v);
            let next = rest.and(&self.adj[v]);
            clique.push(v);
            self.expand(clique, next)?;
            clique.pop();
        }
        Ok(())
    }
}

/// Smallest nonempty sub-list of `residues` (by size, then by position)
/// whose sum is divisible by `k`.
///
/// `reach[i][s]` holds the residues reachable as sums of exactly `s` entries
/// taken from positions `i..`. Once `#residues >= 3 sqrt(k)` a solution must
/// exist, so its absence is reported as an invariant violation.
pub fn zero_sum_subset(k: u64, residues: &[i64]) -> Result<Option<Vec<i64>>> {
    if k == 0 {
        return Err(Error::domain("k must be >= 1"));
    }
    let kk = k as i128;
    let reduced: Vec<usize> = residues
        .iter()
        .map(|&a| (a as i128).rem_euclid(kk) as usize)
        .collect();
    let mut seen = BTreeSet::new();
    for (&a, &r) in residues.iter().zip(&reduced) {
        if !seen.insert(r) {
            return Err(Error::domain(format!("residue {a} repeats modulo {k}")));
        }
    }
    let n = reduced.len();
    let k = k as usize;
    // reach[i][s] as a bitset over Z/kZ.
    let mut reach = vec![vec![Bits::empty(k); n + 1]; n + 1];
    reach[n][0].set(0);
    for i in (0..n).rev() {
        let a = reduced[i];
        for s in 0..=n - i {
            let mut cur = reach[i + 1][s].clone();
            if s >= 1 {
                let prev = &reach[i + 1][s - 1];
                for r in 0..k {
                    if prev.0[r / 64] >> (r % 64) & 1 == 1 {
                        cur.set((r + a) % k);
                    }
                }
            }
            reach[i][s] = cur;
        }
    }
    let has = |b: &Bits, r: usize| b.0[r / 64] >> (r % 64) & 1 == 1;
    let Some(size) = (1..=n).find(|&s| has(&reach[0][s], 0)) else {
        if !lt_three_sqrt(n as u64, k as u64) {
            return Err(Error::invariant(format!(
                "{n} residues distinct mod {k} (n >= 3 sqrt k) have no zero-sum subset"
            )));
        }
        return Ok(None);
    };
    let mut picked = Vec::with_capacity(size);
    let (mut target, mut need) = (0usize, size);
    for i in 0..n {
        if need == 0 {
            break;
        }
        let rest = (target + k - reduced[i]) % k;
        if has(&reach[i + 1][need - 1], rest) {
            picked.push(residues[i]);
            target = rest;
            need -= 1;
        }
    }
    debug_assert_eq!(need, 0);
    Ok(Some(picked))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[i64]) -> BTreeSet<i64> {
        xs.iter().copied().collect()
    }

    #[test]
    fn difference_examples() {
        assert_eq!(positive_differences(&set(&[1, 3, 4])), set(&[1, 2, 3]));
        assert_eq!(positive_differences(&set(&[5])), set(&[]));
        assert_eq!(
            positive_differences(&set(&[0, 1, 4, 13])),
            set(&[1, 3, 4, 9, 12, 13])
        );
    }

    #[test]
    fn m_plus_examples() {
        let l = Limits::default();
        let s = set(&[1, 3, 4, 9, 10, 12, 13]);
        let r = m_plus(&s, Variant::M1, None, &l).unwrap();
        assert_eq!((r.value, r.witness.clone()), (4, vec![0, 1, 4, 13]));
        let r = m_plus(&set(&[1]), Variant::M1, None, &l).unwrap();
        assert_eq!((r.value, r.witness), (2, vec![0, 1]));
        let r = m_plus(&s, Variant::M2, None, &l).unwrap();
        assert_eq!(r.value, 3);
        assert_eq!(r.witness, vec![1, 4, 13]);
        let r = m_plus_db(Base::new(3).unwrap(), 13, Variant::M1, &l).unwrap();
        assert_eq!((r.value, r.bound), (4, Some(4)));
    }

    #[test]
    fn node_budget_is_enforced() {
        let l = Limits {
            node_budget: 3,
            ..Limits::default()
        };
        let s: BTreeSet<i64> = (1..=40).collect();
        assert!(matches!(
            m_plus(&s, Variant::M2, None, &l),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn zero_sum_examples() {
        assert_eq!(zero_sum_subset(6, &[1, 2, 3]).unwrap(), Some(vec![1, 2, 3]));
        assert_eq!(zero_sum_subset(7, &[1, 2, 3]).unwrap(), None);
        assert_eq!(zero_sum_subset(4, &[1, 3]).unwrap(), Some(vec![1, 3]));
        assert_eq!(zero_sum_subset(5, &[2, 10, 3]).unwrap(), Some(vec![10]));
        assert_eq!(zero_sum_subset(5, &[1, 2, 3, 4]).unwrap(), Some(vec![1, 4]));
        assert!(matches!(zero_sum_subset(4, &[1, 5]), Err(Error::Domain(_))));
        assert!(matches!(zero_sum_subset(0, &[1]), Err(Error::Domain(_))));
    }
}
