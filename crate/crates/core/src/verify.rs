//! Named verification suites. Each suite compares library output against
//! the reference computations in [`crate::oracle`] on seeded random
//! inputs and reports a single pass/fail verdict.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynsim::{
    check_witness, multi_return_set, return_set, shift_correspondence_check, vandermonde_lambda, BoxNbhd,
    TorusState, TorusSystem,
};
use crate::error::{Error, Result};
use crate::gp::{bohr_window, eval_p, gp_simplify, BohrConstraint, BohrSpec, GpExpr};
use crate::nilmatrix::{lattice_reduce, mat_mul, mat_pow_closed, nil_return_set, z1d_sequence, NilCoords};
use crate::oracle;
use crate::scalar::{frac_norm, parse_rational, Rational, Scalar, TieGuard};
use crate::setfamilies::{
    common_diff_set, find_star_pattern, ramsey_sg2_partition, sg_d, GapSeq, StarOrder,
};
use crate::window::WindowSet;

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    ClosedForm,
    Reduction,
    Bridge,
    Heisenberg,
    Containment,
    Ramsey,
    SgOracle,
    SetIdentity,
    GpRewrite,
    BohrIdentity,
    Vandermonde,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::ClosedForm,
        Suite::Reduction,
        Suite::Bridge,
        Suite::Heisenberg,
        Suite::Containment,
        Suite::Ramsey,
        Suite::SgOracle,
        Suite::SetIdentity,
        Suite::GpRewrite,
        Suite::BohrIdentity,
        Suite::Vandermonde,
    ];

    pub fn number(self) -> usize {
        Suite::ALL.iter().position(|&s| s == self).expect("listed") + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::ClosedForm => "closed-form",
            Suite::Reduction => "reduction",
            Suite::Bridge => "bridge",
            Suite::Heisenberg => "heisenberg",
            Suite::Containment => "containment",
            Suite::Ramsey => "ramsey",
            Suite::SgOracle => "sgd",
            Suite::SetIdentity => "set-identity",
            Suite::GpRewrite => "gp-rewrite",
            Suite::BohrIdentity => "bohr-identity",
            Suite::Vandermonde => "vandermonde",
        }
    }

    /// Wall-clock budget.
    pub fn limit(self) -> Duration {
        Duration::from_secs(match self {
            Suite::ClosedForm => 5,
            Suite::Reduction => 2,
            Suite::Bridge => 3,
            Suite::Heisenberg => 10,
            Suite::Containment => 30,
            Suite::Ramsey => 1,
            Suite::SgOracle => 2,
            Suite::SetIdentity => 5,
            Suite::GpRewrite => 2,
            Suite::BohrIdentity => 3,
            Suite::Vandermonde => 1,
        })
    }

    pub fn run(self, seed: u64) -> Report {
        let start = Instant::now();
        // each suite draws from its own stream so suites can run in any order
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (self.number() as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let outcome = match self {
            Suite::ClosedForm => closed_form(&mut rng),
            Suite::Reduction => reduction(&mut rng),
            Suite::Bridge => bridge(&mut rng),
            Suite::Heisenberg => heisenberg(&mut rng),
            Suite::Containment => containment(&mut rng),
            Suite::Ramsey => ramsey(),
            Suite::SgOracle => sg_oracle(&mut rng),
            Suite::SetIdentity => set_identity(&mut rng),
            Suite::GpRewrite => gp_rewrite(&mut rng),
            Suite::BohrIdentity => bohr_identity(&mut rng),
            Suite::Vandermonde => vandermonde(),
        };
        let elapsed = start.elapsed();
        let (checks_ok, detail) = match outcome {
            Ok(Check { ok, detail }) => (ok, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        Report {
            suite: self,
            passed: checks_ok && elapsed <= self.limit(),
            checks_ok,
            elapsed,
            detail,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s || x.number().to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// Outcome of one suite run.
#[derive(Clone, Debug)]
pub struct Report {
    pub suite: Suite,
    /// Checks passed within the time budget.
    pub passed: bool,
    pub checks_ok: bool,
    pub elapsed: Duration,
    pub detail: String,
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let budget = if self.elapsed <= self.suite.limit() {
            String::new()
        } else {
            format!(" (over the {} s budget)", self.suite.limit().as_secs())
        };
        write!(
            f,
            "[{}] {:>2} {:<14} {:>8.3} s  {}{}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite.number(),
            self.suite.name(),
            self.elapsed.as_secs_f64(),
            self.detail,
            budget
        )
    }
}

pub fn run_all(seed: u64) -> Vec<Report> {
    Suite::ALL.iter().map(|s| s.run(seed)).collect()
}

struct Check {
    ok: bool,
    detail: String,
}

impl Check {
    fn new(ok: bool, detail: impl Into<String>) -> Result<Check> {
        Ok(Check {
            ok,
            detail: detail.into(),
        })
    }
}

fn q(s: &str) -> Rational {
    parse_rational(s).expect("literal")
}

fn to_f64_coords(x: &NilCoords<Rational>) -> NilCoords<f64> {
    NilCoords::from_entries(x.dim(), x.entries().iter().map(Scalar::to_f64).collect()).expect("same shape")
}

fn max_abs_diff(a: &NilCoords<f64>, b: &NilCoords<f64>) -> f64 {
    a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Closed-form powers against iterated products, `d = 2..5`, `|n| ≤ 30`,
/// coordinates in `[−1, 1]`.
fn closed_form(rng: &mut ChaCha8Rng) -> Result<Check> {
    let mut exact_bad = 0usize;
    let mut worst = 0.0f64;
    let mut cases = 0usize;
    for d in 2..=5 {
        for _ in 0..100 {
            let entries = (0..d * (d + 1) / 2).map(|_| oracle::random_signed_unit(rng, 20)).collect();
            let x = NilCoords::from_entries(d, entries)?;
            let xf = to_f64_coords(&x);
            let inv = crate::nilmatrix::mat_inv(&x);
            let inv_f = crate::nilmatrix::mat_inv(&xf);
            let mut up = NilCoords::zero(d);
            let mut down = NilCoords::zero(d);
            let mut up_f = NilCoords::zero(d);
            let mut down_f = NilCoords::zero(d);
            for n in 0..=30i64 {
                if n > 0 {
                    up = mat_mul(&up, &x)?;
                    down = mat_mul(&down, &inv)?;
                    up_f = mat_mul(&up_f, &xf)?;
                    down_f = mat_mul(&down_f, &inv_f)?;
                }
                for (m, it, it_f) in [(n, &up, &up_f), (-n, &down, &down_f)] {
                    cases += 1;
                    if mat_pow_closed(&x, m) != *it {
                        exact_bad += 1;
                    }
                    worst = worst.max(max_abs_diff(&mat_pow_closed(&xf, m), it_f));
                }
            }
        }
    }
    Check::new(
        exact_bad == 0 && worst <= 1e-8,
        format!("{cases} powers, {exact_bad} exact mismatches, max float deviation {worst:.2e}"),
    )
}

/// `|z| ≤ 1/2` and `x·(−h) = z` for random points, `d ≤ 4`.
fn reduction(rng: &mut ChaCha8Rng) -> Result<Check> {
    let half = q("1/2");
    let mut bad = 0usize;
    for t in 0..1000 {
        let d = 1 + t % 4;
        let x = oracle::random_coords(rng, d, 5000, 997);
        let r = lattice_reduce(&x, TieGuard::default())?;
        let small = r.z.entries().iter().all(|e| e.abs() <= half);
        let identity = mat_mul(&x, &r.h.neg().to_coords())? == r.z;
        if !(small && identity) {
            bad += 1;
        }
    }
    Check::new(bad == 0, format!("1000 points, {bad} violations"))
}

/// `P(n; α₁, α₂) − (n/2)α₁α₂ − z₁²(n)` is an integer for `|n| ≤ 200`.
fn bridge(rng: &mut ChaCha8Rng) -> Result<Check> {
    let guard = TieGuard::default();
    let (lo, hi) = (-200, 200);
    let mut exact_bad = 0usize;
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let alphas = vec![oracle::random_unit_rational(rng), oracle::random_unit_rational(rng)];
        let prod = alphas[0].clone() * alphas[1].clone();
        let zs = z1d_sequence(&alphas, lo, hi, guard)?;
        let af: Vec<f64> = alphas.iter().map(Scalar::to_f64).collect();
        let zs_f = z1d_sequence(&af, lo, hi, guard)?;
        for (z, zf) in zs.iter().zip(&zs_f) {
            let n = z.n;
            let p = eval_p(n, &alphas, guard)?.value;
            let gap = p - Rational::from_i64(n) * prod.clone() / Rational::from_i64(2) - z.value.clone();
            if !Scalar::is_zero(&frac_norm(&gap)) {
                exact_bad += 1;
            }
            let pf = eval_p(n, &af, guard)?.value;
            let gap_f = pf - n as f64 * af[0] * af[1] / 2.0 - zf.value;
            worst = worst.max(frac_norm(&gap_f));
        }
    }
    Check::new(
        exact_bad == 0 && worst < 1e-6,
        format!("50 pairs x 401 n, {exact_bad} exact failures, max float residue {worst:.2e}"),
    )
}

/// Nilrotation return set against the explicit three-condition set.
fn heisenberg(rng: &mut ChaCha8Rng) -> Result<Check> {
    let eta = q("1/10");
    let (lo, hi) = (0, 5000);
    let mut bad = 0usize;
    let mut members = 0usize;
    for _ in 0..20 {
        let a1 = oracle::random_unit_rational(rng);
        let a2 = oracle::random_unit_rational(rng);
        let got = nil_return_set(&[a1.clone(), a2.clone()], &eta, lo, hi, TieGuard::default())?;
        let want = oracle::heisenberg_return_set(&a1, &a2, &eta, lo, hi);
        members += want.len();
        if got.members() != want.as_slice() || !got.boundary().is_empty() {
            bad += 1;
        }
    }
    Check::new(bad == 0, format!("20 pairs, {members} members in total, {bad} mismatched sets"))
}

/// Every certified double-return time of `T_{α/2, 2}` on `(−ε₁, ε₁)²`
/// has `‖αn²‖ < 2K₂·2ε₁`.
fn containment(rng: &mut ChaCha8Rng) -> Result<Check> {
    let lam = vandermonde_lambda(2)?;
    if lam.lambdas != [BigInt::from(-2), BigInt::from(1)] || lam.lambda != BigInt::from(2) {
        return Check::new(false, "unexpected lambda solution");
    }
    let k = 6.0;
    let eps = 0.2;
    let eps1 = 0.008;
    let bound = 2.0 * k * 2.0 * eps1;
    debug_assert!(2.0 * k * eps1 < eps / 2.0 && bound < eps);
    let (lo, hi) = (0, 2000);
    let mut violations = 0usize;
    let mut bad_witness = 0usize;
    let mut members = 0usize;
    let mut worst = 0.0f64;
    let trials = 20;
    for _ in 0..trials {
        let alpha: f64 = rng.gen_range(0.0..1.0);
        let sys = TorusSystem::new(2, alpha / 2.0)?;
        let u = BoxNbhd::cube(2, eps1)?;
        let mr = multi_return_set(&sys, &u, 2, lo, hi, 512)?;
        members += mr.set.len();
        for (n, w) in &mr.witnesses {
            if !check_witness(&sys, &u, 2, *n, w)? {
                bad_witness += 1;
            }
            let v = frac_norm(&(alpha * (*n as f64) * (*n as f64)));
            worst = worst.max(v);
            if v >= bound {
                violations += 1;
            }
        }
    }
    Check::new(
        violations == 0 && bad_witness == 0 && members >= trials,
        format!(
            "{trials} rotations, {members} certified members, max ||an^2|| {worst:.4} < {bound:.3}, {violations} violations, {bad_witness} bad witnesses"
        ),
    )
}

/// The three-block partition of `SG₂(3, 3², …, 3⁸)` has no star triple in
/// any block, while `SG₂` itself has one.
fn ramsey() -> Result<Check> {
    let p = GapSeq::powers(3, 8);
    if !p.is_lacunary() {
        return Check::new(false, "3^1..3^8 rejected as non-lacunary");
    }
    let part = ramsey_sg2_partition(&p)?;
    let blocks = [&part.b0, &part.b1, &part.b2];
    let in_blocks: Vec<bool> = blocks
        .iter()
        .map(|b| find_star_pattern(b, StarOrder::Weak).is_some())
        .collect();
    let whole = sg_d(&p, 2)?;
    let mut union: Vec<BigInt> = blocks.iter().flat_map(|b| b.iter().cloned()).collect();
    union.sort();
    let disjoint_cover = union == whole;
    let found = find_star_pattern(&whole, StarOrder::Weak);
    let sample = [3, 9, 27].map(BigInt::from);
    let sample_ok = {
        let has = |v: &BigInt| whole.binary_search(v).is_ok();
        sample.iter().all(has)
            && has(&(&sample[0] + &sample[1]))
            && has(&(&sample[1] + &sample[2]))
            && has(&(&sample[0] + &sample[2]))
    };
    let ok = in_blocks.iter().all(|f| !f) && disjoint_cover && found.is_some() && sample_ok;
    let shown = found
        .map(|t| format!("({}, {}, {})", t[0], t[1], t[2]))
        .unwrap_or_else(|| "none".into());
    Check::new(
        ok,
        format!(
            "blocks {}/{}/{} elements, star in blocks: {:?}, star in SG2: {shown}",
            part.b0.len(),
            part.b1.len(),
            part.b2.len(),
            in_blocks
        ),
    )
}

/// Dynamic program against pattern enumeration.
fn sg_oracle(rng: &mut ChaCha8Rng) -> Result<Check> {
    let mut bad = 0usize;
    let mut cases = 0usize;
    for m in 0..=12 {
        for d in 1..=4 {
            for _ in 0..4 {
                let terms: Vec<i64> = (0..m).map(|_| rng.gen_range(-1000..=1000)).collect();
                let p = GapSeq::from_i64s(&terms);
                cases += 1;
                if sg_d(&p, d)? != oracle::sg_brute(&p, d) {
                    bad += 1;
                }
            }
        }
    }
    let p = GapSeq::from_i64s(&[1, 10, 100]);
    let sg1_ok = sg_d(&p, 1)? == [1, 10, 11, 100, 110, 111].map(BigInt::from);
    let sg2_ok = sg_d(&p, 2)? == [1, 10, 11, 100, 101, 110, 111].map(BigInt::from);
    Check::new(
        bad == 0 && sg1_ok && sg2_ok,
        format!("{cases} random sequences, {bad} mismatches, {{1,10,100}} examples ok: {}", sg1_ok && sg2_ok),
    )
}

fn random_window_set(rng: &mut ChaCha8Rng) -> Result<WindowSet> {
    let lo: i64 = rng.gen_range(-100..=100);
    let hi = lo + rng.gen_range(20..=160);
    let density: f64 = rng.gen_range(0.05..0.7);
    let members = (lo..=hi).filter(|_| rng.gen_bool(density));
    WindowSet::from_iter_clipped(lo, hi, members)
}

/// `C₁(S) = S − S` and the shift-system correspondence.
fn set_identity(rng: &mut ChaCha8Rng) -> Result<Check> {
    let mut diff_bad = 0usize;
    for _ in 0..100 {
        let s = random_window_set(rng)?;
        if common_diff_set(&s, 1)?.members() != oracle::difference_set_brute(&s).as_slice() {
            diff_bad += 1;
        }
    }
    let mut shift_bad = 0usize;
    for t in 0..50 {
        let s = random_window_set(rng)?;
        let d_rec = 1 + t % 3;
        let margin = (d_rec as u64) * 40;
        if !shift_correspondence_check(&s, d_rec, margin)? {
            shift_bad += 1;
        }
    }
    Check::new(
        diff_bad == 0 && shift_bad == 0,
        format!("100 difference sets ({diff_bad} bad), 50 shift checks ({shift_bad} bad)"),
    )
}

/// Bracket rewrites preserve exact values.
fn gp_rewrite(rng: &mut ChaCha8Rng) -> Result<Check> {
    let mut bad = 0usize;
    let mut rewritten = 0usize;
    for _ in 0..1000 {
        let budget = rng.gen_range(1..=3);
        let e: GpExpr<Rational> = oracle::random_gp(rng, budget, 3);
        let s = gp_simplify(&e);
        if s != e {
            rewritten += 1;
        }
        let n = rng.gen_range(-100..=100);
        if oracle::eval_exact(&e, n)? != oracle::eval_exact(&s, n)? {
            bad += 1;
        }
    }
    Check::new(bad == 0, format!("1000 expressions ({rewritten} rewritten), {bad} value changes"))
}

/// Torus return set of `T_{α,2}` from the origin against the Bohr set of
/// `{αn, binom(n,2)α}`.
fn bohr_identity(rng: &mut ChaCha8Rng) -> Result<Check> {
    let (lo, hi) = (0, 5000);
    let mut bad = 0usize;
    let mut members = 0usize;
    let trials = 4;
    for _ in 0..trials {
        let alpha = oracle::random_unit_rational(rng);
        let eps = Rational::new(BigInt::from(rng.gen_range(5..=25)), BigInt::from(100));
        let sys = TorusSystem::new(2, alpha.clone())?;
        let u = BoxNbhd::cube(2, eps.clone())?;
        let torus = return_set(&sys, &TorusState::origin(2), &u, lo, hi)?;
        let spec = BohrSpec::new(
            vec![
                BohrConstraint {
                    expr: GpExpr::linear(alpha.clone()),
                    eps: eps.clone(),
                },
                BohrConstraint {
                    expr: GpExpr::binom2(alpha),
                    eps,
                },
            ],
            lo,
            hi,
        )?;
        let bohr = bohr_window(&spec, TieGuard::default())?;
        members += torus.len();
        if torus != bohr {
            bad += 1;
        }
    }
    Check::new(bad == 0, format!("{trials} rotations, {members} members, {bad} mismatched sets"))
}

fn vandermonde() -> Result<Check> {
    let mut bad = Vec::new();
    for d in 1..=8 {
        let l = vandermonde_lambda(d)?;
        if !l.satisfies_moments() || l.lambda <= BigInt::from(0) {
            bad.push(d);
        }
    }
    let l2 = vandermonde_lambda(2)?;
    let d2_ok = l2.lambdas == [BigInt::from(-2), BigInt::from(1)] && l2.lambda == BigInt::from(2) && l2.k == BigInt::from(6);
    Check::new(
        bad.is_empty() && d2_ok,
        format!("d = 1..8 moment failures {bad:?}, d = 2 gives (-2, 1; 2), K = 6: {d2_ok}"),
    )
}
