//! The upper-triangular unipotent group 𝔾_d in strictly-upper-triangular
//! coordinates.
//!
//! A matrix `𝕄(a)` of size `(d+1)×(d+1)` is stored through its entries
//! `a_i^k`, where `k` is the superdiagonal (`1 ≤ k ≤ d`) and `i` the row
//! (`1 ≤ i ≤ d−k+1`), so `a_i^k` sits at matrix position `(i, i+k)`.
//! Multiplication, inversion and integer powers are exact in rational mode;
//! [`lattice_reduce`] brings a point into the box of radius 1/2 modulo the
//! integer lattice Γ.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::gp::check_radius;
use crate::scalar::{binom, nearest_int_checked, Arith, Scalar, TieGuard};
use crate::window::{check_window, Verdict, WindowSet};

fn flat_index(d: usize, k: usize, i: usize) -> usize {
    debug_assert!(1 <= k && k <= d && 1 <= i && i <= d - k + 1);
    (k - 1) * (d + 1) - (k - 1) * k / 2 + (i - 1)
}

pub fn coord_count(d: usize) -> usize {
    d * (d + 1) / 2
}

/// Coordinates `(a_i^k)` of an element of 𝔾_d.
#[derive(Clone, Debug, PartialEq)]
pub struct NilCoords<S> {
    d: usize,
    entries: Vec<S>,
}

impl<S: Scalar> NilCoords<S> {
    /// The identity.
    pub fn zero(d: usize) -> Self {
        NilCoords {
            d,
            entries: vec![S::zero(); coord_count(d)],
        }
    }

    /// Entries in level order: `k` ascending, then `i` ascending.
    pub fn from_entries(d: usize, entries: Vec<S>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if entries.len() != coord_count(d) {
            return Err(Error::DimensionMismatch(coord_count(d), entries.len()));
        }
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(NilCoords { d, entries })
    }

    /// The matrix with `α₁,…,α_d` on the first superdiagonal and zeros above.
    pub fn superdiagonal(alphas: &[S]) -> Result<Self> {
        let d = alphas.len();
        if d == 0 {
            return Err(Error::Empty("alpha list"));
        }
        let mut x = NilCoords::zero(d);
        for (i, a) in alphas.iter().enumerate() {
            x.set(1, i + 1, a.clone());
        }
        Ok(x)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn get(&self, k: usize, i: usize) -> &S {
        &self.entries[flat_index(self.d, k, i)]
    }

    pub fn set(&mut self, k: usize, i: usize, v: S) {
        let idx = flat_index(self.d, k, i);
        self.entries[idx] = v;
    }

    /// `(k, i, a_i^k)` in level order.
    pub fn indexed(&self) -> impl Iterator<Item = (usize, usize, &S)> + '_ {
        let d = self.d;
        (1..=d)
            .flat_map(move |k| (1..=d - k + 1).map(move |i| (k, i)))
            .zip(&self.entries)
            .map(|((k, i), v)| (k, i, v))
    }

    /// `‖𝕄(a) − I‖_∞`, the largest entry in absolute value.
    pub fn sup_norm(&self) -> S {
        self.entries
            .iter()
            .map(|e| e.abs())
            .fold(S::zero(), |m, e| if e > m { e } else { m })
    }
}

/// Coordinates of `𝕄(a)·𝕄(b)`: `c_i^k = Σ_{j=0}^k a_i^{k−j} b_{i+k−j}^j` with
/// `a^0 = b^0 = 1`.
pub fn mat_mul<S: Scalar>(a: &NilCoords<S>, b: &NilCoords<S>) -> Result<NilCoords<S>> {
    if a.d != b.d {
        return Err(Error::DimensionMismatch(a.d, b.d));
    }
    let d = a.d;
    let mut c = NilCoords::zero(d);
    for k in 1..=d {
        for i in 1..=d - k + 1 {
            let mut v = a.get(k, i).clone() + b.get(k, i).clone();
            for j in 1..k {
                v = v + a.get(k - j, i).clone() * b.get(j, i + k - j).clone();
            }
            c.set(k, i, v);
        }
    }
    Ok(c)
}

/// Two-sided inverse, solved level by level from `mat_mul(a, b) = 0`.
pub fn mat_inv<S: Scalar>(a: &NilCoords<S>) -> NilCoords<S> {
    let d = a.d;
    let mut b = NilCoords::<S>::zero(d);
    for k in 1..=d {
        for i in 1..=d - k + 1 {
            let mut v = -a.get(k, i).clone();
            for j in 1..k {
                v = v - a.get(k - j, i).clone() * b.get(j, i + k - j).clone();
            }
            b.set(k, i, v);
        }
    }
    b
}

/// Precomputed closed form `x_i^k(n) = Σ_{ℓ=1}^k binom(n, ℓ)·P_ℓ(x; i, k)` for
/// the powers of a fixed element.
///
/// `P_ℓ(x; i, k)` sums `x_i^{s₁} x_{i+s₁}^{s₂} ⋯` over compositions
/// `(s₁,…,s_ℓ)` of `k`; it is tabulated through the first part:
/// `P_ℓ(i, k) = Σ_s x_i^s · P_{ℓ−1}(i+s, k−s)`.
#[derive(Clone, Debug)]
pub struct ClosedFormPower<S> {
    d: usize,
    // chains[ℓ−1][flat_index(k, i)] = P_ℓ(x; i, k), zero when ℓ > k
    chains: Vec<Vec<S>>,
}

impl<S: Scalar> ClosedFormPower<S> {
    pub fn new(x: &NilCoords<S>) -> Self {
        let d = x.d;
        let mut chains: Vec<Vec<S>> = Vec::with_capacity(d);
        chains.push(x.entries.clone());
        for l in 2..=d {
            let prev = &chains[l - 2];
            let mut cur = vec![S::zero(); coord_count(d)];
            for k in l..=d {
                for i in 1..=d - k + 1 {
                    let mut v = S::zero();
                    for s in 1..=k - l + 1 {
                        let tail = &prev[flat_index(d, k - s, i + s)];
                        if !tail.is_zero() {
                            v = v + x.get(s, i).clone() * tail.clone();
                        }
                    }
                    cur[flat_index(d, k, i)] = v;
                }
            }
            chains.push(cur);
        }
        ClosedFormPower { d, chains }
    }

    /// `P_ℓ(x; i, k)`.
    pub fn chain(&self, l: usize, k: usize, i: usize) -> &S {
        &self.chains[l - 1][flat_index(self.d, k, i)]
    }

    pub fn at(&self, n: i64) -> NilCoords<S> {
        let d = self.d;
        let binoms: Vec<S> = (1..=d as u32).map(|l| S::from_bigint(&binom(n, l))).collect();
        let mut out = NilCoords::zero(d);
        for k in 1..=d {
            for i in 1..=d - k + 1 {
                let idx = flat_index(d, k, i);
                let mut v = S::zero();
                for l in 1..=k {
                    let p = &self.chains[l - 1][idx];
                    if !p.is_zero() {
                        v = v + binoms[l - 1].clone() * p.clone();
                    }
                }
                out.entries[idx] = v;
            }
        }
        out
    }
}

/// `𝕄(x)^n` for any integer `n`, via the binomial closed form.
pub fn mat_pow_closed<S: Scalar>(x: &NilCoords<S>, n: i64) -> NilCoords<S> {
    ClosedFormPower::new(x).at(n)
}

/// An element of Γ: integer coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeElem {
    d: usize,
    entries: Vec<BigInt>,
}

impl LatticeElem {
    pub fn from_entries(d: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != coord_count(d) {
            return Err(Error::DimensionMismatch(coord_count(d), entries.len()));
        }
        Ok(LatticeElem { d, entries })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, k: usize, i: usize) -> &BigInt {
        &self.entries[flat_index(self.d, k, i)]
    }

    /// Entry-wise negation `(−h_i^k)`. This is not the group inverse.
    pub fn neg(&self) -> Self {
        LatticeElem {
            d: self.d,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }

    pub fn to_coords<S: Scalar>(&self) -> NilCoords<S> {
        NilCoords {
            d: self.d,
            entries: self.entries.iter().map(S::from_bigint).collect(),
        }
    }
}

/// Output of [`lattice_reduce`]: `mat_mul(x, h.neg()) = z` with every
/// `|z_i^k| ≤ 1/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedPoint<S> {
    pub z: NilCoords<S>,
    pub h: LatticeElem,
    pub ambiguous: bool,
}

/// Greedy reduction modulo Γ, levels `k` ascending and rows `i` ascending:
/// `h_i^k = ⌈x_i^k − Σ_{j<k} x_i^{k−j} h_{i+k−j}^j⌉` and `z_i^k` the residual.
pub fn lattice_reduce<S: Scalar>(x: &NilCoords<S>, guard: TieGuard) -> Result<ReducedPoint<S>> {
    let d = x.d;
    let mut h: NilCoords<S> = NilCoords::zero(d);
    let mut z = NilCoords::zero(d);
    let mut ambiguous = false;
    for k in 1..=d {
        for i in 1..=d - k + 1 {
            let mut inner = x.get(k, i).clone();
            for j in 1..k {
                let hj = h.get(j, i + k - j);
                if !hj.is_zero() {
                    inner = inner - x.get(k - j, i).clone() * hj.clone();
                }
            }
            let r = nearest_int_checked(&inner, guard)?;
            ambiguous |= r.ambiguous;
            z.set(k, i, inner - r.value.clone());
            h.set(k, i, r.value);
        }
    }
    let entries = h
        .entries
        .iter()
        .map(|v| v.to_bigint().ok_or(Error::Overflow("lattice coordinate")))
        .collect::<Result<Vec<_>>>()?;
    Ok(ReducedPoint {
        z,
        h: LatticeElem { d, entries },
        ambiguous,
    })
}

/// Default arithmetic for nilrotation scans: exact while entry sizes stay
/// moderate (`d ≤ 4`, `|n| ≤ 10⁴`), floating beyond.
pub fn default_arith(d: usize, lo: i64, hi: i64) -> Arith {
    if d <= 4 && lo.abs().max(hi.abs()) <= 10_000 {
        Arith::Exact
    } else {
        Arith::Float
    }
}

/// `{n ∈ window : all |z_i^k(n)| < η}` where `z(n)` is the reduced residual of
/// `Aⁿ` and `A` carries `α₁,…,α_d` on its superdiagonal. For `η ≤ 1/2` this
/// is exactly `{n : Aⁿ Γ ∈ V Γ}` with `V` the `‖·‖_∞`-ball of radius `η`.
pub fn nil_return_set<S: Scalar>(
    alphas: &[S],
    eta: &S,
    lo: i64,
    hi: i64,
    guard: TieGuard,
) -> Result<WindowSet> {
    check_radius("eta", eta)?;
    check_window(lo, hi)?;
    let powers = ClosedFormPower::new(&NilCoords::superdiagonal(alphas)?);
    WindowSet::scan(lo, hi, |n| {
        let r = lattice_reduce(&powers.at(n), guard)?;
        let inside = r.z.entries.iter().all(|e| e.abs() < *eta);
        Ok(if r.ambiguous {
            Verdict::Ambiguous
        } else {
            inside.into()
        })
    })
}

/// Top-right residual `z_1^d(n)` for each `n` in the window.
#[derive(Clone, Debug, PartialEq)]
pub struct Z1dPoint<S> {
    pub n: i64,
    pub value: S,
    pub ambiguous: bool,
}

pub fn z1d_sequence<S: Scalar>(
    alphas: &[S],
    lo: i64,
    hi: i64,
    guard: TieGuard,
) -> Result<Vec<Z1dPoint<S>>> {
    use rayon::prelude::*;
    check_window(lo, hi)?;
    let d = alphas.len();
    let powers = ClosedFormPower::new(&NilCoords::superdiagonal(alphas)?);
    (lo..=hi)
        .into_par_iter()
        .map(|n| {
            let r = lattice_reduce(&powers.at(n), guard)?;
            Ok(Z1dPoint {
                n,
                value: r.z.get(d, 1).clone(),
                ambiguous: r.ambiguous,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac_norm, nearest_int, parse_rational, Rational};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn coords(d: usize, v: &[&str]) -> NilCoords<Rational> {
        NilCoords::from_entries(d, v.iter().map(|s| q(s)).collect()).unwrap()
    }

    #[test]
    fn layout() {
        assert_eq!(flat_index(3, 1, 1), 0);
        assert_eq!(flat_index(3, 1, 3), 2);
        assert_eq!(flat_index(3, 2, 1), 3);
        assert_eq!(flat_index(3, 2, 2), 4);
        assert_eq!(flat_index(3, 3, 1), 5);
        let x = coords(3, &["1", "2", "3", "4", "5", "6"]);
        let idx: Vec<(usize, usize)> = x.indexed().map(|(k, i, _)| (k, i)).collect();
        assert_eq!(idx, vec![(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (3, 1)]);
    }

    #[test]
    fn mul_examples() {
        let a = coords(2, &["1", "2", "0"]);
        let b = coords(2, &["3", "4", "0"]);
        assert_eq!(mat_mul(&a, &b).unwrap(), coords(2, &["4", "6", "4"]));
        assert_eq!(mat_mul(&a, &NilCoords::zero(2)).unwrap(), a);
        assert_eq!(
            mat_mul(&a, &NilCoords::zero(3)),
            Err(Error::DimensionMismatch(2, 3))
        );
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(mat_inv(&NilCoords::<Rational>::zero(3)), NilCoords::zero(3));
        let a = coords(2, &["1", "2", "0"]);
        assert_eq!(mat_inv(&a), coords(2, &["-1", "-2", "2"]));
        assert_eq!(mat_mul(&a, &mat_inv(&a)).unwrap(), NilCoords::zero(2));
        assert_eq!(mat_mul(&mat_inv(&a), &a).unwrap(), NilCoords::zero(2));
    }

    #[test]
    fn power_first_and_superdiagonal() {
        let x = coords(3, &["1/3", "-2/5", "7/2", "1/4", "3", "-5/7"]);
        assert_eq!(mat_pow_closed(&x, 1), x);
        assert_eq!(mat_pow_closed(&x, 0), NilCoords::zero(3));
        let cf = ClosedFormPower::new(&x);
        for k in 1..=3 {
            for i in 1..=3 - k + 1 {
                assert_eq!(cf.chain(1, k, i), x.get(k, i));
                let diag = (0..k).fold(Rational::from_i64(1), |acc, t| acc * x.get(1, i + t).clone());
                assert_eq!(cf.chain(k, k, i), &diag);
            }
        }
        let alphas = [q("2/3"), q("-1/7"), q("5/4"), q("3/11")];
        let a = NilCoords::superdiagonal(&alphas).unwrap();
        for n in [-9i64, -1, 0, 2, 13] {
            let p = mat_pow_closed(&a, n);
            for k in 1..=4 {
                for i in 1..=4 - k + 1 {
                    let prod = alphas[i - 1..i - 1 + k]
                        .iter()
                        .fold(Rational::from_i64(1), |acc, t| acc * t.clone());
                    assert_eq!(p.get(k, i), &(Rational::from_bigint(&binom(n, k as u32)) * prod));
                }
            }
        }
    }

    #[test]
    fn reduce_examples() {
        let x = coords(2, &["3", "-1", "7"]);
        let r = lattice_reduce(&x, TieGuard::default()).unwrap();
        assert_eq!(r.z, NilCoords::zero(2));
        // h_1^2 = ⌈7 − 3·(−1)⌉ since the negation is entrywise
        assert_eq!(r.h.to_coords::<Rational>(), coords(2, &["3", "-1", "10"]));

        let r = lattice_reduce(&coords(1, &["0.7"]), TieGuard::default()).unwrap();
        assert_eq!(r.h.entries(), &[BigInt::from(1)]);
        assert_eq!(r.z, coords(1, &["-0.3"]));
    }

    #[test]
    fn reduce_heisenberg_unrolled() {
        let (a1, a2) = (q("0.6180339887"), q("0.4142135623"));
        let cf = ClosedFormPower::new(&NilCoords::superdiagonal(&[a1.clone(), a2.clone()]).unwrap());
        for n in -50..=50 {
            let r = lattice_reduce(&cf.at(n), TieGuard::default()).unwrap();
            let nn = Rational::from_i64(n);
            let u = Rational::from_bigint(&binom(n, 2)) * a1.clone() * a2.clone()
                - nn.clone() * a1.clone() * nearest_int(&(nn.clone() * a2.clone()));
            assert_eq!(r.z.get(2, 1), &(u.clone() - nearest_int(&u)));
            assert_eq!(mat_mul(&cf.at(n), &r.h.neg().to_coords()).unwrap(), r.z);
        }
    }

    #[test]
    fn return_set_trivial_and_circle() {
        let zero = [q("0"), q("0"), q("0")];
        let w = nil_return_set(&zero, &q("0.1"), -20, 20, TieGuard::default()).unwrap();
        assert_eq!(w.len(), 41);

        let alpha = q("0.381966");
        let w = nil_return_set(std::slice::from_ref(&alpha), &q("0.05"), -500, 500, TieGuard::default()).unwrap();
        let direct: Vec<i64> = (-500..=500)
            .filter(|&n| frac_norm(&(alpha.clone() * Rational::from_i64(n))) < q("0.05"))
            .collect();
        assert_eq!(w.members(), direct.as_slice());
    }

    #[test]
    fn eta_is_capped() {
        let r = nil_return_set(&[q("0.1")], &q("0.51"), 0, 10, TieGuard::default());
        assert!(matches!(r, Err(Error::RadiusOutOfRange { .. })));
        let r = nil_return_set(&[0.1f64], &0.5, 0, 10, TieGuard::default());
        assert!(r.is_ok());
    }

    #[test]
    fn z1d_low_orders() {
        let alpha = q("0.7071");
        let seq = z1d_sequence(std::slice::from_ref(&alpha), -30, 30, TieGuard::default()).unwrap();
        for p in &seq {
            let v = alpha.clone() * Rational::from_i64(p.n);
            assert_eq!(p.value, v.clone() - nearest_int(&v));
        }
        let seq = z1d_sequence(&[q("0.3"), q("0.9"), q("0.2")], 0, 0, TieGuard::default()).unwrap();
        assert_eq!(seq[0].value, q("0"));
    }

    #[test]
    fn arith_default() {
        assert_eq!(default_arith(4, -10_000, 10_000), Arith::Exact);
        assert_eq!(default_arith(5, 0, 10), Arith::Float);
        assert_eq!(default_arith(2, 0, 10_001), Arith::Float);
    }
}
