//! Finite subsets of ℤ that are exact on a declared window.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A set of integers known exactly on `[lo, hi]` and undefined outside.
///
/// `boundary` holds window points whose membership could not be decided
/// because a floating rounding landed on a tie; they are never members.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "WindowSetRepr", into = "WindowSetRepr")]
pub struct WindowSet {
    lo: i64,
    hi: i64,
    members: Vec<i64>,
    boundary: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct WindowSetRepr {
    window: [i64; 2],
    members: Vec<i64>,
    #[serde(default)]
    boundary: Vec<i64>,
}

impl TryFrom<WindowSetRepr> for WindowSet {
    type Error = Error;

    fn try_from(r: WindowSetRepr) -> Result<Self> {
        WindowSet::with_boundary(r.window[0], r.window[1], r.members, r.boundary)
    }
}

impl From<WindowSet> for WindowSetRepr {
    fn from(w: WindowSet) -> Self {
        WindowSetRepr {
            window: [w.lo, w.hi],
            members: w.members,
            boundary: w.boundary,
        }
    }
}

/// Membership verdict for one window point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    In,
    Out,
    Ambiguous,
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::In
        } else {
            Verdict::Out
        }
    }
}

pub(crate) fn check_window(lo: i64, hi: i64) -> Result<()> {
    if lo > hi {
        return Err(Error::EmptyWindow { lo, hi });
    }
    Ok(())
}

fn strictly_inside(v: &[i64], lo: i64, hi: i64) -> bool {
    v.windows(2).all(|w| w[0] < w[1]) && v.iter().all(|&m| lo <= m && m <= hi)
}

impl WindowSet {
    pub fn new(lo: i64, hi: i64, members: Vec<i64>) -> Result<Self> {
        Self::with_boundary(lo, hi, members, Vec::new())
    }

    pub fn with_boundary(lo: i64, hi: i64, members: Vec<i64>, boundary: Vec<i64>) -> Result<Self> {
        check_window(lo, hi)?;
        if !strictly_inside(&members, lo, hi) || !strictly_inside(&boundary, lo, hi) {
            return Err(Error::BadMembers);
        }
        if boundary.iter().any(|b| members.binary_search(b).is_ok()) {
            return Err(Error::BadMembers);
        }
        Ok(WindowSet {
            lo,
            hi,
            members,
            boundary,
        })
    }

    /// Builds a set from arbitrary (possibly unsorted, repeated) integers,
    /// dropping those outside the window.
    pub fn from_iter_clipped(lo: i64, hi: i64, it: impl IntoIterator<Item = i64>) -> Result<Self> {
        check_window(lo, hi)?;
        let mut members: Vec<i64> = it.into_iter().filter(|&m| lo <= m && m <= hi).collect();
        members.sort_unstable();
        members.dedup();
        Ok(WindowSet {
            lo,
            hi,
            members,
            boundary: Vec::new(),
        })
    }

    pub fn full(lo: i64, hi: i64) -> Result<Self> {
        Self::from_iter_clipped(lo, hi, lo..=hi)
    }

    /// Scans the window with a membership predicate. The scan is split
    /// across the rayon pool; the result does not depend on the split.
    pub fn scan<F>(lo: i64, hi: i64, f: F) -> Result<Self>
    where
        F: Fn(i64) -> Result<Verdict> + Sync,
    {
        check_window(lo, hi)?;
        let verdicts: Vec<(i64, Verdict)> = (lo..=hi)
            .into_par_iter()
            .map(|n| f(n).map(|v| (n, v)))
            .collect::<Result<_>>()?;
        let mut members = Vec::new();
        let mut boundary = Vec::new();
        for (n, v) in verdicts {
            match v {
                Verdict::In => members.push(n),
                Verdict::Ambiguous => boundary.push(n),
                Verdict::Out => {}
            }
        }
        Ok(WindowSet {
            lo,
            hi,
            members,
            boundary,
        })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn members(&self) -> &[i64] {
        &self.members
    }

    pub fn boundary(&self) -> &[i64] {
        &self.boundary
    }

    /// Number of integers in the window.
    pub fn width(&self) -> u64 {
        (self.hi - self.lo) as u64 + 1
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, n: i64) -> bool {
        self.members.binary_search(&n).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.members.iter().copied()
    }

    /// Restriction to a sub-window.
    pub fn restrict(&self, lo: i64, hi: i64) -> Result<Self> {
        let lo = lo.max(self.lo);
        let hi = hi.min(self.hi);
        check_window(lo, hi)?;
        let keep = |v: &[i64]| v.iter().copied().filter(|&m| lo <= m && m <= hi).collect();
        Ok(WindowSet {
            lo,
            hi,
            members: keep(&self.members),
            boundary: keep(&self.boundary),
        })
    }

    /// Intersection on the common window. A point stays undecided when it
    /// is undecided on one side and not excluded on the other.
    pub fn intersect(&self, other: &WindowSet) -> Result<Self> {
        let a = self.restrict(other.lo, other.hi)?;
        let b = other.restrict(a.lo, a.hi)?;
        let members = a.members.iter().copied().filter(|&m| b.contains(m)).collect();
        let maybe = |w: &WindowSet, n: i64| w.contains(n) || w.boundary.binary_search(&n).is_ok();
        let mut boundary: Vec<i64> = a
            .boundary
            .iter()
            .chain(b.boundary.iter())
            .copied()
            .filter(|&n| maybe(&a, n) && maybe(&b, n))
            .collect();
        boundary.sort_unstable();
        boundary.dedup();
        Ok(WindowSet {
            lo: a.lo,
            hi: a.hi,
            members,
            boundary,
        })
    }

    /// Indicator of the members over the window, index `n − lo`.
    pub fn indicator(&self) -> Vec<bool> {
        let mut bits = vec![false; self.width() as usize];
        for &m in &self.members {
            bits[(m - self.lo) as usize] = true;
        }
        bits
    }
}
