//! Circle rotations and the skew products
//! `T_{α,d}(θ₁, …, θ_d) = (θ₁ + α, θ₂ + θ₁, …, θ_d + θ_{d−1})` on `𝕋^d`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gp::check_radius;
use crate::scalar::{binom, factorial, frac01, frac_norm, Rational, Scalar};
use crate::setfamilies::common_diff_set;
use crate::window::{check_window, Verdict, WindowSet};

/// `T_{α,d}`; `d = 1` is the rotation by `α`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusSystem<S> {
    d: usize,
    alpha: S,
}

impl<S: Scalar> TorusSystem<S> {
    pub fn new(d: usize, alpha: S) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("torus dimension must be positive".into()));
        }
        if !alpha.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(TorusSystem { d, alpha })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn alpha(&self) -> &S {
        &self.alpha
    }
}

/// A point of `𝕋^d`, stored with representatives in `[0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusState<S> {
    coords: Vec<S>,
}

impl<S: Scalar> TorusState<S> {
    pub fn new(coords: Vec<S>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Empty("torus coordinates"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(TorusState {
            coords: coords.iter().map(frac01).collect(),
        })
    }

    pub fn origin(d: usize) -> Self {
        TorusState {
            coords: vec![S::zero(); d],
        }
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Largest coordinatewise circle distance to `other`.
    pub fn distance(&self, other: &TorusState<S>) -> S {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| frac_norm(&(a.clone() - b.clone())))
            .fold(S::zero(), |m, x| if x > m { x } else { m })
    }
}

/// The open box `∏ (c_i − ε_i, c_i + ε_i)` on the torus.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxNbhd<S> {
    center: TorusState<S>,
    radii: Vec<S>,
}

impl<S: Scalar> BoxNbhd<S> {
    pub fn new(center: TorusState<S>, radii: Vec<S>) -> Result<Self> {
        if center.dim() != radii.len() {
            return Err(Error::DimensionMismatch(center.dim(), radii.len()));
        }
        for r in &radii {
            check_radius("radius", r)?;
        }
        Ok(BoxNbhd { center, radii })
    }

    /// `(−ε, ε)^d` around the origin.
    pub fn cube(d: usize, eps: S) -> Result<Self> {
        Self::new(TorusState::origin(d), vec![eps; d])
    }

    pub fn center(&self) -> &TorusState<S> {
        &self.center
    }

    pub fn radii(&self) -> &[S] {
        &self.radii
    }

    pub fn dim(&self) -> usize {
        self.radii.len()
    }

    pub fn contains(&self, x: &TorusState<S>) -> bool {
        x.dim() == self.dim()
            && x.coords
                .iter()
                .zip(&self.center.coords)
                .zip(&self.radii)
                .all(|((a, c), r)| frac_norm(&(a.clone() - c.clone())) < *r)
    }
}

fn check_dims<S: Scalar>(sys: &TorusSystem<S>, x: &TorusState<S>) -> Result<()> {
    if sys.d != x.dim() {
        return Err(Error::DimensionMismatch(sys.d, x.dim()));
    }
    Ok(())
}

/// Closed form: coordinate `m` of `Tⁿθ` is `Σ_{i=0}^{m} binom(n, m−i)·θ_i`
/// with `θ₀ = α`, reduced mod 1.
pub fn torus_orbit<S: Scalar>(sys: &TorusSystem<S>, x0: &TorusState<S>, n: i64) -> Result<TorusState<S>> {
    check_dims(sys, x0)?;
    let theta: Vec<&S> = std::iter::once(&sys.alpha).chain(&x0.coords).collect();
    let coords = (1..=sys.d)
        .map(|m| {
            let sum = (0..=m).fold(S::zero(), |acc, i| {
                frac01(&(acc + theta[i].mul_int_frac01(&binom(n, (m - i) as u32))))
            });
            frac01(&sum)
        })
        .collect();
    Ok(TorusState { coords })
}

fn step_forward<S: Scalar>(alpha: &S, x: &mut [S]) {
    for k in (1..x.len()).rev() {
        x[k] = frac01(&(x[k].clone() + x[k - 1].clone()));
    }
    x[0] = frac01(&(x[0].clone() + alpha.clone()));
}

fn step_backward<S: Scalar>(alpha: &S, x: &mut [S]) {
    x[0] = frac01(&(x[0].clone() - alpha.clone()));
    for k in 1..x.len() {
        x[k] = frac01(&(x[k].clone() - x[k - 1].clone()));
    }
}

/// Applies the one-step map (or its inverse for `n < 0`) `|n|` times.
pub fn step_oracle<S: Scalar>(sys: &TorusSystem<S>, x: &TorusState<S>, n: i64) -> Result<TorusState<S>> {
    check_dims(sys, x)?;
    let mut c = x.coords.clone();
    for _ in 0..n.unsigned_abs() {
        if n > 0 {
            step_forward(&sys.alpha, &mut c);
        } else {
            step_backward(&sys.alpha, &mut c);
        }
    }
    Ok(TorusState { coords: c })
}

/// `N(x₀, U) = {n : Tⁿx₀ ∈ U}` on the window.
pub fn return_set<S: Scalar>(
    sys: &TorusSystem<S>,
    x0: &TorusState<S>,
    u: &BoxNbhd<S>,
    lo: i64,
    hi: i64,
) -> Result<WindowSet> {
    check_dims(sys, x0)?;
    if u.dim() != sys.d {
        return Err(Error::DimensionMismatch(sys.d, u.dim()));
    }
    WindowSet::scan(lo, hi, |n| Ok(Verdict::from(u.contains(&torus_orbit(sys, x0, n)?))))
}

/// Grid points per dimension used when none is requested.
pub fn default_grid(d: usize) -> usize {
    if d <= 2 {
        512
    } else {
        64
    }
}

/// A multi-return set together with one certified witness per member.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiReturn {
    pub set: WindowSet,
    /// `(n, u)` with `u ∈ U` and `T^{in}u ∈ U` for `i = 1..d_rec`, ascending in `n`.
    pub witnesses: Vec<(i64, TorusState<f64>)>,
}

/// Depth-first search over grid values of `θ₁, θ₂, …`; coordinate `k` of
/// `T^t θ` only involves `θ₀..θ_k`, so each level is pruned on its own.
struct GridSearch<'a> {
    alpha: f64,
    center: &'a [f64],
    radii: &'a [f64],
    grid: usize,
    /// `coeff[j][r] = binom((j+1)·n, r)` as floats.
    coeff: Vec<Vec<f64>>,
}

impl GridSearch<'_> {
    fn grid_value(&self, k: usize, t: usize) -> f64 {
        let r = self.radii[k];
        self.center[k] + r * (-1.0 + (2 * t + 1) as f64 / self.grid as f64)
    }

    fn inside(&self, k: usize, v: f64) -> bool {
        let diff = v - self.center[k];
        (diff - diff.round()).abs() < self.radii[k]
    }

    fn search(&self, theta: &mut Vec<f64>) -> bool {
        let k = theta.len() - 1;
        if k == self.radii.len() {
            return true;
        }
        for t in 0..self.grid {
            let v = self.grid_value(k, t);
            // coordinate k+1 at time s: Σ_{i=0}^{k+1} binom(s, k+1−i)·θ_i
            let ok = self.coeff.iter().all(|c| {
                let mut acc = v;
                for (i, th) in theta.iter().enumerate() {
                    acc += (c[k + 1 - i] * th).rem_euclid(1.0);
                }
                self.inside(k, acc)
            });
            if ok {
                theta.push(v);
                if self.search(theta) {
                    return true;
                }
                theta.pop();
            }
        }
        false
    }
}

/// `{n : U ∩ T^{−n}U ∩ … ∩ T^{−d_rec·n}U ≠ ∅}`, certified one-sided: `n` is
/// reported only when a grid point of `U` (cell centers, so half a cell
/// inside the box) is a witness. Members are true members; near-boundary
/// members may be missed.
pub fn multi_return_set(
    sys: &TorusSystem<f64>,
    u: &BoxNbhd<f64>,
    d_rec: usize,
    lo: i64,
    hi: i64,
    grid: usize,
) -> Result<MultiReturn> {
    check_window(lo, hi)?;
    if u.dim() != sys.d {
        return Err(Error::DimensionMismatch(sys.d, u.dim()));
    }
    if d_rec == 0 {
        return Err(Error::InvalidParameter("recurrence order must be positive".into()));
    }
    if grid < 2 {
        return Err(Error::InvalidParameter("grid needs at least 2 points per dimension".into()));
    }
    let d = sys.d;
    let found: Vec<(i64, Option<TorusState<f64>>)> = (lo..=hi)
        .into_par_iter()
        .map(|n| {
            let times: Vec<i64> = (1..=d_rec as i64).map(|j| j * n).collect();
            let coeff = times
                .iter()
                .map(|&s| (0..=d).map(|r| f64::from_bigint(&binom(s, r as u32))).collect())
                .collect();
            let search = GridSearch {
                alpha: sys.alpha,
                center: u.center.coords(),
                radii: u.radii(),
                grid,
                coeff,
            };
            let mut theta = vec![search.alpha];
            let hit = search.search(&mut theta).then(|| TorusState {
                coords: theta[1..].iter().map(|v| v.rem_euclid(1.0)).collect(),
            });
            (n, hit)
        })
        .collect();
    let mut members = Vec::new();
    let mut witnesses = Vec::new();
    for (n, hit) in found {
        if let Some(w) = hit {
            members.push(n);
            witnesses.push((n, w));
        }
    }
    Ok(MultiReturn {
        set: WindowSet::new(lo, hi, members)?,
        witnesses,
    })
}

/// Direct check of a multi-return witness through the closed form.
pub fn check_witness(
    sys: &TorusSystem<f64>,
    u: &BoxNbhd<f64>,
    d_rec: usize,
    n: i64,
    w: &TorusState<f64>,
) -> Result<bool> {
    if !u.contains(w) {
        return Ok(false);
    }
    for i in 1..=d_rec as i64 {
        if !u.contains(&torus_orbit(sys, w, i * n)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Integers `λ₁..λ_d`, `λ > 0` with `Σ λ_m m^j = 0` for `1 ≤ j < d` and
/// `Σ λ_m m^d = λ`, plus `K_d = d!·Σ|λ_m|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaSolution {
    pub lambdas: Vec<BigInt>,
    pub lambda: BigInt,
    pub k: BigInt,
}

impl LambdaSolution {
    /// Checks both moment conditions exactly.
    pub fn satisfies_moments(&self) -> bool {
        let d = self.lambdas.len();
        (1..=d).all(|j| {
            let s: BigInt = self
                .lambdas
                .iter()
                .enumerate()
                .map(|(m, l)| l * num_traits::pow(BigInt::from(m + 1), j))
                .sum();
            if j < d {
                s.is_zero()
            } else {
                s == self.lambda
            }
        })
    }
}

/// Solves the Vandermonde system `Σ_m λ_m m^j = δ_{jd}` (`1 ≤ j ≤ d`) by
/// exact elimination, then clears denominators and reduces by the gcd.
pub fn vandermonde_lambda(d: usize) -> Result<LambdaSolution> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be positive".into()));
    }
    // augmented rows j = 1..d, columns m = 1..d, then rhs
    let mut a: Vec<Vec<Rational>> = (1..=d)
        .map(|j| {
            let mut row: Vec<Rational> = (1..=d)
                .map(|m| Rational::from_integer(num_traits::pow(BigInt::from(m), j)))
                .collect();
            row.push(if j == d { <Rational as Scalar>::one() } else { <Rational as Scalar>::zero() });
            row
        })
        .collect();
    for col in 0..d {
        let piv = (col..d)
            .find(|&r| !Scalar::is_zero(&a[r][col]))
            .ok_or_else(|| Error::InvalidParameter("singular system".into()))?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = &*v / &p;
        }
        let pivot = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !Scalar::is_zero(&row[col]) {
                let f = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&pivot).skip(col) {
                    *v -= &f * pv;
                }
            }
        }
    }
    let sol: Vec<Rational> = a.iter().map(|row| row[d].clone()).collect();
    let den = sol.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    // with right-hand side 1 the scaled λ is the common denominator
    let mut lambdas: Vec<BigInt> = sol.iter().map(|q| (q * &den).to_integer()).collect();
    let mut lambda = den;
    let g = lambdas.iter().fold(lambda.clone(), |g, l| g.gcd(l));
    for l in lambdas.iter_mut() {
        *l /= &g;
    }
    lambda /= &g;
    if lambda.is_negative() {
        lambdas.iter_mut().for_each(|l| *l = -l.clone());
        lambda = -lambda;
    }
    let abs_sum: BigInt = lambdas.iter().map(|l| l.abs()).sum();
    let k = factorial(d as u32) * abs_sum;
    Ok(LambdaSolution { lambdas, lambda, k })
}

/// Compares `C_{d_rec}(S)` with the multi-return set of the cylinder
/// `[x(0) = 1]` under the shift, where `x` is the indicator word of `S`
/// (zero outside the window). The shift side ANDs the shifted words
/// `σ^{in}x` directly. Differences are compared for `|n| ≤ margin / d_rec`.
pub fn shift_correspondence_check(s: &WindowSet, d_rec: usize, margin: u64) -> Result<bool> {
    if d_rec == 0 {
        return Err(Error::InvalidParameter("recurrence order must be positive".into()));
    }
    if margin < d_rec as u64 {
        return Err(Error::MarginTooSmall { margin, order: d_rec });
    }
    let reach = (s.hi() - s.lo()) / d_rec as i64;
    let max_n = ((margin / d_rec as u64) as i64).min(reach);
    let combinatorial = common_diff_set(s, d_rec)?.restrict(-max_n, max_n)?;

    let word = s.indicator();
    let len = word.len() as i64;
    let bit = |i: i64| i >= 0 && i < len && word[i as usize];
    let shift_side: Vec<i64> = (-max_n..=max_n)
        .into_par_iter()
        .filter(|&n| {
            // positions m with (σ^{in} x)(m) = 1 for i = 0..d_rec
            (0..len).any(|m| (0..=d_rec as i64).all(|i| bit(m + i * n)))
        })
        .collect();
    Ok(combinatorial.members() == shift_side.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn orbit_closed_form_small() {
        let sys = TorusSystem::new(2, q("1/7")).unwrap();
        let zero = TorusState::origin(2);
        assert_eq!(torus_orbit(&sys, &zero, 0).unwrap(), zero);
        for n in -20..=20 {
            let x = torus_orbit(&sys, &zero, n).unwrap();
            assert_eq!(x.coords()[0], frac01(&(q("1/7") * Rational::from_i64(n))));
            let b = Rational::from_bigint(&binom(n, 2)) * q("1/7");
            assert_eq!(x.coords()[1], frac01(&b));
            assert_eq!(x, step_oracle(&sys, &zero, n).unwrap());
        }
    }

    #[test]
    fn inverse_then_forward() {
        let sys = TorusSystem::new(3, q("2/9")).unwrap();
        let x = TorusState::new(vec![q("1/3"), q("5/11"), q("-1/4")]).unwrap();
        let back = step_oracle(&sys, &x, -5).unwrap();
        assert_eq!(step_oracle(&sys, &back, 5).unwrap(), x);
    }

    #[test]
    fn rotation_return_set() {
        let sys = TorusSystem::new(1, 0.25).unwrap();
        let u = BoxNbhd::cube(1, 0.1).unwrap();
        let r = return_set(&sys, &TorusState::origin(1), &u, -8, 12).unwrap();
        assert_eq!(r.members(), &[-8, -4, 0, 4, 8, 12]);
    }

    #[test]
    fn lambda_small() {
        let l1 = vandermonde_lambda(1).unwrap();
        assert_eq!((l1.lambdas, l1.lambda, l1.k), (vec![BigInt::from(1)], BigInt::from(1), BigInt::from(1)));
        let l2 = vandermonde_lambda(2).unwrap();
        assert_eq!(l2.lambdas, vec![BigInt::from(-2), BigInt::from(1)]);
        assert_eq!(l2.lambda, BigInt::from(2));
        assert_eq!(l2.k, BigInt::from(6));
        for d in 1..=8 {
            assert!(vandermonde_lambda(d).unwrap().satisfies_moments(), "d = {d}");
        }
    }

    #[test]
    fn multi_return_rotation() {
        let alpha = 0.1234567;
        let eps = 0.05;
        let sys = TorusSystem::new(1, alpha).unwrap();
        let u = BoxNbhd::cube(1, eps).unwrap();
        let grid = 64;
        let mr = multi_return_set(&sys, &u, 1, -300, 300, grid).unwrap();
        let cell = 2.0 * eps / grid as f64;
        for n in -300..=300i64 {
            let dist = frac_norm(&(alpha * n as f64));
            if mr.set.contains(n) {
                assert!(dist < 2.0 * eps);
            } else {
                assert!(dist >= 2.0 * eps - cell, "n = {n}");
            }
        }
        assert!(mr.set.contains(0));
        for (n, w) in &mr.witnesses {
            assert!(check_witness(&sys, &u, 1, *n, w).unwrap());
        }
    }

    #[test]
    fn shift_check_examples() {
        let s = WindowSet::scan(0, 2000, |n| Ok((n % 4 == 0).into())).unwrap();
        assert!(shift_correspondence_check(&s, 2, 200).unwrap());
        let full = WindowSet::full(0, 100).unwrap();
        assert!(shift_correspondence_check(&full, 3, 60).unwrap());
        assert!(matches!(
            shift_correspondence_check(&full, 3, 2),
            Err(Error::MarginTooSmall { .. })
        ));
    }
}
