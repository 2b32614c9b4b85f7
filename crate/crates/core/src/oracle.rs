//! Brute-force reference computations. Each one recomputes a library
//! result from the definitions, without sharing the optimized code path.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand::Rng;

use crate::error::Result;
use crate::gp::GpExpr;
use crate::nilmatrix::{mat_inv, mat_mul, NilCoords};
use crate::scalar::{binom, frac_norm, nearest_int, Rational, Scalar};
use crate::setfamilies::GapSeq;
use crate::window::WindowSet;

/// Random rational `p/q` with `|p| ≤ num` and `1 ≤ q ≤ den`.
pub fn random_rational<R: Rng>(rng: &mut R, num: i64, den: i64) -> Rational {
    let p = rng.gen_range(-num..=num);
    let q = rng.gen_range(1..=den);
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Random rational in `(0, 1)` with a large denominator, so that rounding
/// ties in a desk-scale window are not expected.
pub fn random_unit_rational<R: Rng>(rng: &mut R) -> Rational {
    let q: i64 = rng.gen_range(100_003..=999_983);
    let p: i64 = rng.gen_range(1..q);
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Random rational in `[−1, 1]` with denominator at most `den`.
pub fn random_signed_unit<R: Rng>(rng: &mut R, den: i64) -> Rational {
    let q = rng.gen_range(1..=den);
    let p = rng.gen_range(-q..=q);
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn random_coords<R: Rng>(rng: &mut R, d: usize, num: i64, den: i64) -> NilCoords<Rational> {
    let entries = (0..d * (d + 1) / 2).map(|_| random_rational(rng, num, den)).collect();
    NilCoords::from_entries(d, entries).expect("sizes match")
}

/// `xⁿ` by repeated multiplication by `x` or by its inverse.
pub fn pow_iterated<S: Scalar>(x: &NilCoords<S>, n: i64) -> NilCoords<S> {
    let step = if n >= 0 { x.clone() } else { mat_inv(x) };
    (0..n.unsigned_abs()).fold(NilCoords::zero(x.dim()), |acc, _| {
        mat_mul(&acc, &step).expect("same dimension")
    })
}

/// The `(d+1)×(d+1)` matrix of a coordinate vector.
pub fn to_dense<S: Scalar>(x: &NilCoords<S>) -> Vec<Vec<S>> {
    let d = x.dim();
    let mut m = vec![vec![S::zero(); d + 1]; d + 1];
    for (r, row) in m.iter_mut().enumerate() {
        row[r] = S::one();
    }
    for (k, i, v) in x.indexed() {
        m[i - 1][i - 1 + k] = v.clone();
    }
    m
}

pub fn dense_mul<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>]) -> Vec<Vec<S>> {
    let n = a.len();
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| (0..n).fold(S::zero(), |acc, t| acc + a[r][t].clone() * b[t][c].clone()))
                .collect()
        })
        .collect()
}

/// `max |M − I|` over all entries.
pub fn dense_dist_to_identity<S: Scalar>(m: &[Vec<S>]) -> S {
    let mut best = S::zero();
    for (r, row) in m.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            let e = if r == c { v.clone() - S::one() } else { v.clone() };
            let e = e.abs();
            if e > best {
                best = e;
            }
        }
    }
    best
}

/// Per-level bounds on `|b^k|` for any integer `B` with `‖x·B − I‖_∞ < 1/2`:
/// `β_k = max|x^k| + Σ_{j<k} max|x^{k−j}|·β_j + 1`, read off the product
/// formula one superdiagonal at a time.
pub fn lattice_search_bounds(x: &NilCoords<Rational>) -> Vec<i64> {
    let d = x.dim();
    let level_max: Vec<Rational> = (1..=d)
        .map(|k| {
            (1..=d - k + 1)
                .map(|i| x.get(k, i).abs())
                .fold(Rational::from_i64(0), |m, v| if v > m { v } else { m })
        })
        .collect();
    let mut bounds: Vec<i64> = Vec::with_capacity(d);
    for k in 1..=d {
        let mut b = level_max[k - 1].clone() + Rational::from_i64(1);
        for j in 1..k {
            b += level_max[k - j - 1].clone() * Rational::from_i64(bounds[j - 1]);
        }
        let b = b.ceil().to_bigint().expect("integral");
        bounds.push(i64::try_from(b).expect("desk-scale bound"));
    }
    bounds
}

/// Whether some integer unipotent `B` within [`lattice_search_bounds`]
/// has `‖x·B − I‖_∞ < η`, by exhaustive enumeration with dense products.
/// Superdiagonals `≤ k` of `x·B` only involve levels `≤ k` of `B`, so each
/// level is enumerated only below prefixes that already pass.
pub fn brute_near_lattice(x: &NilCoords<Rational>, eta: &Rational) -> bool {
    fn level_ok(x: &[Vec<Rational>], b: &NilCoords<Rational>, k: usize, eta: &Rational) -> bool {
        let p = dense_mul(x, &to_dense(b));
        (0..p.len() - k).all(|r| p[r][r + k].abs() < *eta)
    }
    fn go(
        xd: &[Vec<Rational>],
        b: &mut NilCoords<Rational>,
        bounds: &[i64],
        k: usize,
        eta: &Rational,
    ) -> bool {
        let d = b.dim();
        if k > d {
            return true;
        }
        let rows = d - k + 1;
        let width = (2 * bounds[k - 1] + 1) as usize;
        for mut code in 0..width.pow(rows as u32) {
            for i in 1..=rows {
                let v = (code % width) as i64 - bounds[k - 1];
                code /= width;
                b.set(k, i, Rational::from_i64(v));
            }
            if level_ok(xd, b, k, eta) && go(xd, b, bounds, k + 1, eta) {
                return true;
            }
        }
        for i in 1..=rows {
            b.set(k, i, Rational::from_i64(0));
        }
        false
    }
    let bounds = lattice_search_bounds(x);
    let mut b = NilCoords::zero(x.dim());
    go(&to_dense(x), &mut b, &bounds, 1, eta)
}

/// `Aⁿ` for `A` with `α₁..α_d` on the superdiagonal, from the matrix
/// definition (entry `(i, i+k)` is `binom(n, k)·α_i⋯α_{i+k−1}`).
pub fn superdiagonal_power(alphas: &[Rational], n: i64) -> NilCoords<Rational> {
    let d = alphas.len();
    let mut x = NilCoords::zero(d);
    for k in 1..=d {
        for i in 1..=d - k + 1 {
            let prod = alphas[i - 1..i - 1 + k]
                .iter()
                .fold(Rational::from_i64(1), |acc, a| acc * a.clone());
            x.set(k, i, Rational::from_bigint(&binom(n, k as u32)) * prod);
        }
    }
    x
}

/// The `d = 2` residual `z₁²(n) = w − ⌈w⌉` with
/// `w = binom(n,2)·α₁α₂ − nα₁⌈nα₂⌉`.
pub fn heisenberg_top_residual<S: Scalar>(a1: &S, a2: &S, n: i64) -> S {
    let nn = S::from_i64(n);
    let w = S::from_bigint(&binom(n, 2)) * a1.clone() * a2.clone()
        - nn.clone() * a1.clone() * nearest_int(&(nn * a2.clone()));
    w.clone() - nearest_int(&w)
}

/// `{n : ‖nα₁‖ < η, ‖nα₂‖ < η, ‖binom(n,2)α₁α₂ − nα₁⌈nα₂⌉‖ < η}`.
pub fn heisenberg_return_set(a1: &Rational, a2: &Rational, eta: &Rational, lo: i64, hi: i64) -> Vec<i64> {
    (lo..=hi)
        .filter(|&n| {
            let nn = Rational::from_i64(n);
            frac_norm(&(nn.clone() * a1.clone())) < *eta
                && frac_norm(&(nn * a2.clone())) < *eta
                && heisenberg_top_residual(a1, a2, n).abs() < *eta
        })
        .collect()
}

/// `SG_d(P)` by running over all `2^m` patterns.
pub fn sg_brute(p: &GapSeq, d: usize) -> Vec<BigInt> {
    let m = p.len();
    let mut out = BTreeSet::new();
    for mask in 1u64..(1u64 << m) {
        let chosen: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
        // internal zero runs have length (next − prev − 1)
        if chosen.windows(2).all(|w| w[1] - w[0] - 1 < d) {
            out.insert(chosen.iter().map(|&i| &p.terms()[i]).sum::<BigInt>());
        }
    }
    out.into_iter().collect()
}

/// `{n : S ∩ (S − n) ≠ ∅}` on `[−(hi−lo), hi−lo]` by scanning shifts.
pub fn difference_set_brute(s: &WindowSet) -> Vec<i64> {
    let reach = s.hi() - s.lo();
    (-reach..=reach)
        .filter(|&n| s.iter().any(|m| s.contains(m + n)))
        .collect()
}

/// Random expression of degree at most `budget` (`budget ≥ 1`) over small
/// rationals.
pub fn random_gp<R: Rng>(rng: &mut R, budget: u32, depth: u32) -> GpExpr<Rational> {
    let coeff = |rng: &mut R| random_rational(rng, 9, 7);
    let leaf = depth == 0 || budget == 1 && rng.gen_bool(0.4);
    if leaf {
        return GpExpr::linear(coeff(rng));
    }
    match rng.gen_range(0..6) {
        0 => {
            let k = rng.gen_range(1..=3);
            GpExpr::sum((0..k).map(|_| random_gp(rng, budget, depth - 1)).collect()).expect("k >= 1")
        }
        1 => GpExpr::scale(coeff(rng), random_gp(rng, budget, depth - 1)),
        2 => GpExpr::round(random_gp(rng, budget, depth - 1)),
        3 | 4 => {
            let power = rng.gen_range(0..budget);
            let mut left = budget - power;
            let mut factors = Vec::new();
            while left > 0 && (factors.is_empty() && power == 0 || rng.gen_bool(0.6)) {
                let b = rng.gen_range(1..=left);
                factors.push(random_gp(rng, b, depth - 1));
                left -= factors.last().expect("pushed").degree();
            }
            if power == 0 && factors.is_empty() {
                return GpExpr::linear(coeff(rng));
            }
            GpExpr::monomial(coeff(rng), power, factors).expect("positive degree")
        }
        _ => {
            if budget < 2 {
                return GpExpr::round(GpExpr::linear(coeff(rng)));
            }
            let b1 = rng.gen_range(1..budget);
            let f1 = random_gp(rng, b1, depth - 1);
            let f2 = random_gp(rng, budget - f1.degree(), depth - 1);
            GpExpr::product(vec![f1, f2]).expect("two children")
        }
    }
}

/// Evaluation at `n` straight from the tree with exact arithmetic, used
/// to cross-check rewritten trees.
pub fn eval_exact(e: &GpExpr<Rational>, n: i64) -> Result<Rational> {
    Ok(e.eval(n, Default::default())?.value)
}
