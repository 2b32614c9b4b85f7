//! Windowed combinatorics on subsets of ℤ: sums with gaps, finite sums,
//! common differences, syndeticity, Banach density, intersective witnesses
//! and the three-block partition of a lacunary `SG₂` set.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::window::WindowSet;

/// Length cap for full subset-sum enumeration.
pub const FS_MAX_LEN: usize = 24;

/// A finite sequence `p₁, …, p_m` of integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapSeq {
    terms: Vec<BigInt>,
}

impl GapSeq {
    pub fn new(terms: Vec<BigInt>) -> Self {
        GapSeq { terms }
    }

    pub fn from_i64s(terms: &[i64]) -> Self {
        GapSeq::new(terms.iter().map(|&t| BigInt::from(t)).collect())
    }

    /// `p, p², …, p^m`.
    pub fn powers(base: i64, m: usize) -> Self {
        let b = BigInt::from(base);
        GapSeq::new((1..=m).map(|j| num_traits::pow(b.clone(), j)).collect())
    }

    pub fn terms(&self) -> &[BigInt] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Index (0-based) of the first term violating
    /// `p₁ > 0` and `p_{i+1} > 2(p₁ + … + p_i)`.
    pub fn lacunarity_violation(&self) -> Option<usize> {
        let mut prefix = BigInt::zero();
        for (i, p) in self.terms.iter().enumerate() {
            if !p.is_positive() || *p <= &prefix * 2 {
                return Some(i);
            }
            prefix += p;
        }
        None
    }

    pub fn is_lacunary(&self) -> bool {
        self.lacunarity_violation().is_none()
    }

    /// Recovers the (unique, for a lacunary sequence) set of indices whose
    /// terms sum to `value`, scanning from the largest term down.
    pub fn lacunary_decode(&self, value: &BigInt) -> Option<Vec<usize>> {
        let mut rest = value.clone();
        let mut picked = Vec::new();
        let mut tail_sum: BigInt = self.terms.iter().sum();
        for (i, p) in self.terms.iter().enumerate().rev() {
            tail_sum -= p;
            // take p iff the remaining smaller terms cannot cover rest alone
            if rest > tail_sum {
                rest -= p;
                picked.push(i);
            }
        }
        picked.reverse();
        (rest.is_zero() && !picked.is_empty()).then_some(picked)
    }
}

fn check_gap(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidParameter("gap bound d must be at least 1".into()));
    }
    Ok(())
}

/// `SG_d(P)`: sums over nonzero 0/1 patterns whose internal runs of zeros
/// are shorter than `d`.
///
/// Dynamic program on the last chosen index: the sums whose last chosen
/// term is `p_i` are `{p_i}` together with `(sums ending at j) + p_i` for
/// `i − d ≤ j < i`.
pub fn sg_d(p: &GapSeq, d: usize) -> Result<Vec<BigInt>> {
    check_gap(d)?;
    let mut ending: Vec<BTreeSet<BigInt>> = Vec::with_capacity(p.len());
    let mut all = BTreeSet::new();
    for (i, pi) in p.terms.iter().enumerate() {
        let mut here = BTreeSet::new();
        here.insert(pi.clone());
        for prev in &ending[i.saturating_sub(d)..i] {
            here.extend(prev.iter().map(|s| s + pi));
        }
        all.extend(here.iter().cloned());
        ending.push(here);
    }
    Ok(all.into_iter().collect())
}

/// `FS(P)`: all nonempty subset sums.
pub fn fs(p: &GapSeq) -> Result<Vec<BigInt>> {
    if p.len() > FS_MAX_LEN {
        return Err(Error::TooLong {
            len: p.len(),
            max: FS_MAX_LEN,
        });
    }
    let mut sums: BTreeSet<BigInt> = BTreeSet::new();
    for t in &p.terms {
        let shifted: Vec<BigInt> = sums.iter().map(|s| s + t).collect();
        sums.extend(shifted);
        sums.insert(t.clone());
    }
    Ok(sums.into_iter().collect())
}

/// Largest `|n|` for which `m, m+n, …, m+dn` can all fit in the window.
fn cdiff_reach(s: &WindowSet, d: usize) -> i64 {
    (s.hi() - s.lo()) / d as i64
}

/// `C_d(S) = {n : ∃m, m, m+n, …, m+dn ∈ S}` on the window
/// `[−(hi−lo)/d, (hi−lo)/d]`, the range where a progression can fit.
pub fn common_diff_set(s: &WindowSet, d: usize) -> Result<WindowSet> {
    check_gap(d)?;
    let reach = cdiff_reach(s, d);
    let bits = s.indicator();
    let lo = s.lo();
    let at = |x: i64| x >= lo && x <= s.hi() && bits[(x - lo) as usize];
    WindowSet::scan(-reach, reach, |n| {
        Ok(s
            .iter()
            .any(|m| (1..=d as i64).all(|i| at(m + i * n)))
            .into())
    })
}

/// `S − S = {n : S ∩ (S − n) ≠ ∅}` on the window `[−(hi−lo), hi−lo]`.
pub fn difference_set(s: &WindowSet) -> Result<WindowSet> {
    let reach = s.hi() - s.lo();
    let diffs: Vec<i64> = s
        .iter()
        .flat_map(|a| s.iter().map(move |b| b - a))
        .collect();
    WindowSet::from_iter_clipped(-reach, reach, diffs)
}

/// True iff every block `{i, …, i+N}` inside the window meets `S`.
pub fn is_syndetic_window(s: &WindowSet, n: u64) -> Result<bool> {
    if s.width() < n + 1 {
        return Err(Error::WindowTooShort {
            lo: s.lo(),
            hi: s.hi(),
            need: n + 1,
        });
    }
    if s.is_empty() {
        return Ok(false);
    }
    let n = n as i64;
    // gaps before the first member, between members and after the last
    let first_ok = s.members()[0] - s.lo() <= n;
    let last_ok = s.hi() - s.members()[s.len() - 1] <= n;
    let inner_ok = s.members().windows(2).all(|w| w[1] - w[0] - 1 <= n);
    Ok(first_ok && last_ok && inner_ok)
}

/// `max |S ∩ I| / L` over the length-`L` blocks `I` of the window.
pub fn banach_upper_density(s: &WindowSet, len: u64) -> Result<f64> {
    if len == 0 {
        return Err(Error::InvalidParameter("block length must be positive".into()));
    }
    if len > s.width() {
        return Err(Error::WindowTooShort {
            lo: s.lo(),
            hi: s.hi(),
            need: len,
        });
    }
    let bits = s.indicator();
    let len = len as usize;
    let mut count = bits[..len].iter().filter(|&&b| b).count();
    let mut best = count;
    for start in 1..=bits.len() - len {
        count += bits[start + len - 1] as usize;
        count -= bits[start - 1] as usize;
        best = best.max(count);
    }
    Ok(best as f64 / len as f64)
}

/// `FS({n₁,…,n_d})` for distinct `n_i`, as a list (may repeat values).
pub fn finite_sums_i64(ns: &[i64]) -> Vec<i64> {
    (1..1usize << ns.len())
        .map(|mask| {
            ns.iter()
                .enumerate()
                .filter(|(t, _)| mask >> t & 1 == 1)
                .map(|(_, v)| v)
                .sum()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectiveWitness {
    pub a: i64,
    pub ns: Vec<i64>,
}

/// Bounded search for `a ∈ F` and distinct nonzero `n₁ < … < n_d` with
/// `|n_i| ≤ bound`, `FS({n_i}) ⊂ P` and `a + FS({n_i}) ⊂ F`. The smallest
/// witness in `(a, n₁, …, n_d)` lexicographic order is returned; `None`
/// only means nothing was found within the bound. Membership outside a
/// set's window counts as absent.
pub fn intersective_witness(
    p: &WindowSet,
    f: &WindowSet,
    d: usize,
    bound: u64,
) -> Result<Option<IntersectiveWitness>> {
    check_gap(d)?;
    let bound = bound as i64;
    let candidates: Vec<i64> = (-bound..=bound).filter(|&n| n != 0).collect();
    let mut tuples: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    // lexicographic enumeration of increasing d-tuples with pruning on the
    // sums already fixed
    fn extend(
        cands: &[i64],
        start: usize,
        d: usize,
        stack: &mut Vec<usize>,
        p: &WindowSet,
        out: &mut Vec<(Vec<i64>, Vec<i64>)>,
    ) {
        if stack.len() == d {
            let ns: Vec<i64> = stack.iter().map(|&j| cands[j]).collect();
            let sums = finite_sums_i64(&ns);
            out.push((ns, sums));
            return;
        }
        for j in start..cands.len() {
            stack.push(j);
            let ns: Vec<i64> = stack.iter().map(|&t| cands[t]).collect();
            if finite_sums_i64(&ns).iter().all(|&s| p.contains(s)) {
                extend(cands, j + 1, d, stack, p, out);
            }
            stack.pop();
        }
    }
    extend(&candidates, 0, d, &mut stack, p, &mut tuples);
    if tuples.is_empty() {
        return Ok(None);
    }
    let found = f.members().par_iter().find_map_first(|&a| {
        tuples
            .iter()
            .find(|(_, sums)| sums.iter().all(|&s| f.contains(a + s)))
            .map(|(ns, _)| IntersectiveWitness { a, ns: ns.clone() })
    });
    Ok(found)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamseyPartition {
    pub b0: Vec<BigInt>,
    pub b1: Vec<BigInt>,
    pub b2: Vec<BigInt>,
}

/// Splits `SG₂(P)` of a lacunary `P` into `B₁ = SG₁(p₁, p₃, …)`,
/// `B₂ = SG₁(p₂, p₄, …)` and the rest `B₀`.
pub fn ramsey_sg2_partition(p: &GapSeq) -> Result<RamseyPartition> {
    if let Some(i) = p.lacunarity_violation() {
        return Err(Error::NotLacunary(i));
    }
    let odd = GapSeq::new(p.terms.iter().step_by(2).cloned().collect());
    let even = GapSeq::new(p.terms.iter().skip(1).step_by(2).cloned().collect());
    let b1 = sg_d(&odd, 1)?;
    let b2 = sg_d(&even, 1)?;
    let taken: HashSet<&BigInt> = b1.iter().chain(&b2).collect();
    let b0 = sg_d(p, 2)?
        .into_iter()
        .filter(|v| !taken.contains(v))
        .collect();
    Ok(RamseyPartition { b0, b1, b2 })
}

/// Ordering imposed on a star triple.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StarOrder {
    /// `a₁ ≤ a₂ ≤ a₃`, repeats allowed.
    #[default]
    Weak,
    /// `a₁ < a₂ < a₃`.
    Strict,
}

/// Exhaustive search for `a₁, a₂, a₃` in `B` (ordered as requested) with
/// `a₁+a₂, a₂+a₃, a₁+a₃ ∈ B`; the lexicographically smallest triple is
/// returned.
pub fn find_star_pattern(b: &[BigInt], order: StarOrder) -> Option<[BigInt; 3]> {
    let mut sorted = b.to_vec();
    sorted.sort();
    sorted.dedup();
    let set: HashSet<&BigInt> = sorted.iter().collect();
    let skip = usize::from(order == StarOrder::Strict);
    for (x, a1) in sorted.iter().enumerate() {
        let seconds: Vec<&BigInt> = sorted[x + skip..]
            .iter()
            .filter(|a2| set.contains(&(a1 + *a2)))
            .collect();
        for (y, a2) in seconds.iter().enumerate() {
            for a3 in &seconds[y + skip..] {
                if set.contains(&(*a2 + *a3)) {
                    return Some([a1.clone(), (*a2).clone(), (*a3).clone()]);
                }
            }
        }
    }
    None
}
