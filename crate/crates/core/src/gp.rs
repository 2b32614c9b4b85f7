//! Generalized polynomials and their Bohr sets.
//!
//! A [`GpExpr`] is a degree-annotated tree built from linear maps `n ↦ a·n`
//! by sums, scalar multiples, nearest-integer brackets, monomials
//! `a₀·n^{p₀}·⌈f₁⌉⋯⌈f_k⌉` and products. Every well-formed expression vanishes
//! at `n = 0`.

use crate::error::{Error, Result};
use crate::scalar::{factorial, frac_norm, int_pow, nearest_int_checked, Rounded, Scalar, TieGuard};
use crate::window::{check_window, Verdict, WindowSet};

#[derive(Clone, Debug, PartialEq)]
pub enum GpNode<S> {
    /// `n ↦ a·n`
    Linear(S),
    Sum(Vec<GpExpr<S>>),
    Scale(S, Box<GpExpr<S>>),
    /// `⌈f⌉`
    Round(Box<GpExpr<S>>),
    /// `coeff · n^power · ⌈f₁⌉⋯⌈f_k⌉`; the brackets around the factors are
    /// implicit.
    Monomial {
        coeff: S,
        power: u32,
        factors: Vec<GpExpr<S>>,
    },
    /// Pointwise product `f₁·f₂⋯f_k`.
    Product(Vec<GpExpr<S>>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GpExpr<S> {
    node: GpNode<S>,
    degree: u32,
}

impl<S: Scalar> GpExpr<S> {
    pub fn linear(a: S) -> Self {
        GpExpr {
            node: GpNode::Linear(a),
            degree: 1,
        }
    }

    pub fn sum(children: Vec<GpExpr<S>>) -> Result<Self> {
        let degree = children
            .iter()
            .map(|c| c.degree)
            .max()
            .ok_or(Error::Empty("sum"))?;
        Ok(GpExpr {
            node: GpNode::Sum(children),
            degree,
        })
    }

    pub fn scale(c: S, child: GpExpr<S>) -> Self {
        let degree = child.degree;
        GpExpr {
            node: GpNode::Scale(c, Box::new(child)),
            degree,
        }
    }

    pub fn round(child: GpExpr<S>) -> Self {
        let degree = child.degree;
        GpExpr {
            node: GpNode::Round(Box::new(child)),
            degree,
        }
    }

    pub fn monomial(coeff: S, power: u32, factors: Vec<GpExpr<S>>) -> Result<Self> {
        let degree = power + factors.iter().map(|f| f.degree).sum::<u32>();
        if degree == 0 {
            return Err(Error::InvalidExpr(
                "a monomial needs a positive power or at least one factor".into(),
            ));
        }
        Ok(GpExpr {
            node: GpNode::Monomial {
                coeff,
                power,
                factors,
            },
            degree,
        })
    }

    pub fn product(children: Vec<GpExpr<S>>) -> Result<Self> {
        if children.is_empty() {
            return Err(Error::Empty("product"));
        }
        let degree = children.iter().map(|c| c.degree).sum();
        Ok(GpExpr {
            node: GpNode::Product(children),
            degree,
        })
    }

    /// `binom(n, 2)·a = (a/2)·n² − (a/2)·n`.
    pub fn binom2(a: S) -> Self {
        let half = a * S::half();
        GpExpr::sum(vec![
            GpExpr::monomial(half.clone(), 2, vec![]).expect("degree 2"),
            GpExpr::linear(-half),
        ])
        .expect("two children")
    }

    /// Re-attaches an externally declared degree, which must match the
    /// structure.
    pub fn with_declared_degree(self, declared: u32) -> Result<Self> {
        if declared != self.degree {
            return Err(Error::DegreeMismatch {
                declared,
                computed: self.degree,
            });
        }
        Ok(self)
    }

    pub fn node(&self) -> &GpNode<S> {
        &self.node
    }

    /// The annotated degree.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Degree recomputed from the tree.
    pub fn structural_degree(&self) -> u32 {
        match &self.node {
            GpNode::Linear(_) => 1,
            GpNode::Sum(cs) => cs.iter().map(|c| c.structural_degree()).max().unwrap_or(0),
            GpNode::Scale(_, c) | GpNode::Round(c) => c.structural_degree(),
            GpNode::Monomial { power, factors, .. } => {
                power + factors.iter().map(|f| f.structural_degree()).sum::<u32>()
            }
            GpNode::Product(cs) => cs.iter().map(|c| c.structural_degree()).sum(),
        }
    }

    pub fn eval(&self, n: i64, guard: TieGuard) -> Result<Rounded<S>> {
        let mut ambiguous = false;
        let value = self.eval_inner(n, guard, &mut ambiguous)?;
        Ok(Rounded { value, ambiguous })
    }

    fn eval_inner(&self, n: i64, guard: TieGuard, amb: &mut bool) -> Result<S> {
        let v = match &self.node {
            GpNode::Linear(a) => a.clone() * S::from_i64(n),
            GpNode::Sum(cs) => {
                let mut acc = S::zero();
                for c in cs {
                    acc = acc + c.eval_inner(n, guard, amb)?;
                }
                acc
            }
            GpNode::Scale(c, e) => c.clone() * e.eval_inner(n, guard, amb)?,
            GpNode::Round(e) => round_into(e.eval_inner(n, guard, amb)?, guard, amb)?,
            GpNode::Monomial {
                coeff,
                power,
                factors,
            } => {
                let mut acc = coeff.clone() * int_pow::<S>(n, *power)?;
                for f in factors {
                    acc = acc * round_into(f.eval_inner(n, guard, amb)?, guard, amb)?;
                }
                acc
            }
            GpNode::Product(cs) => {
                let mut acc = S::one();
                for c in cs {
                    acc = acc * c.eval_inner(n, guard, amb)?;
                }
                acc
            }
        };
        if !v.is_finite() {
            return Err(Error::Overflow("generalized polynomial"));
        }
        Ok(v)
    }
}

fn round_into<S: Scalar>(v: S, guard: TieGuard, amb: &mut bool) -> Result<S> {
    let r = nearest_int_checked(&v, guard)?;
    *amb |= r.ambiguous;
    Ok(r.value)
}

pub fn gp_eval<S: Scalar>(expr: &GpExpr<S>, n: i64, guard: TieGuard) -> Result<Rounded<S>> {
    expr.eval(n, guard)
}

pub fn gp_degree<S: Scalar>(expr: &GpExpr<S>) -> u32 {
    expr.degree()
}

/// `L(a₁) = a₁`, `L(a₁,…,a_ℓ) = a₁·⌈L(a₂,…,a_ℓ)⌉`.
pub fn eval_l<S: Scalar>(coeffs: &[S], guard: TieGuard) -> Result<Rounded<S>> {
    let (last, rest) = coeffs.split_last().ok_or(Error::Empty("L argument list"))?;
    let mut ambiguous = false;
    let mut acc = last.clone();
    for a in rest.iter().rev() {
        acc = a.clone() * round_into(acc, guard, &mut ambiguous)?;
    }
    if !acc.is_finite() {
        return Err(Error::Overflow("L"));
    }
    Ok(Rounded {
        value: acc,
        ambiguous,
    })
}

/// `L(n^{j₁}a₁, …, n^{j_ℓ}a_ℓ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SgpTerm<S> {
    exponents: Vec<u32>,
    coeffs: Vec<S>,
}

impl<S: Scalar> SgpTerm<S> {
    pub fn new(exponents: Vec<u32>, coeffs: Vec<S>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::Empty("special generalized polynomial"));
        }
        if exponents.len() != coeffs.len() {
            return Err(Error::DimensionMismatch(exponents.len(), coeffs.len()));
        }
        if exponents.contains(&0) {
            return Err(Error::InvalidExpr("exponents must be positive".into()));
        }
        Ok(SgpTerm { exponents, coeffs })
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// `Σ j_t`.
    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// The same function as a monomial tower
    /// `a₁n^{j₁}⌈a₂n^{j₂}⌈⋯⌉⌉`.
    pub fn to_gp(&self) -> GpExpr<S> {
        let mut parts = self.exponents.iter().zip(&self.coeffs).rev();
        let (j, a) = parts.next().expect("non-empty");
        let mut expr = GpExpr::monomial(a.clone(), *j, vec![]).expect("positive exponent");
        for (j, a) in parts {
            expr = GpExpr::monomial(a.clone(), *j, vec![expr]).expect("positive exponent");
        }
        expr
    }

    pub fn eval(&self, n: i64, guard: TieGuard) -> Result<Rounded<S>> {
        let args = self
            .exponents
            .iter()
            .zip(&self.coeffs)
            .map(|(j, a)| int_pow::<S>(n, *j).map(|p| p * a.clone()))
            .collect::<Result<Vec<S>>>()?;
        eval_l(&args, guard)
    }
}

pub fn eval_sgp<S: Scalar>(term: &SgpTerm<S>, n: i64, guard: TieGuard) -> Result<Rounded<S>> {
    term.eval(n, guard)
}

/// Compositions of `r` in decreasing lexicographic order, from `(r)` down
/// to `(1, …, 1)`.
pub fn compositions(r: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for first in (1..=rest).rev() {
            prefix.push(first);
            go(rest - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if r > 0 {
        go(r, &mut Vec::new(), &mut out);
    }
    out
}

/// One signed summand of the key polynomial `P(n; α₁, …, α_r)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KeyPolyTerm<S> {
    pub composition: Vec<usize>,
    pub negative: bool,
    pub term: SgpTerm<S>,
}

/// Expands `P(n; α₁,…,α_r)` into its signed `L`-terms, one per composition
/// `(j₁,…,j_ℓ)` of `r`: `(−1)^{ℓ−1} L(n^{j₁}/j₁!·α₁⋯α_{j₁}, …)`.
pub fn key_poly_terms<S: Scalar>(alphas: &[S]) -> Result<Vec<KeyPolyTerm<S>>> {
    if alphas.is_empty() {
        return Err(Error::Empty("alpha list"));
    }
    compositions(alphas.len())
        .into_iter()
        .map(|comp| {
            let mut start = 0;
            let mut coeffs = Vec::with_capacity(comp.len());
            for &j in &comp {
                let block = alphas[start..start + j]
                    .iter()
                    .fold(S::one(), |acc, a| acc * a.clone());
                coeffs.push(block / S::from_bigint(&factorial(j as u32)));
                start += j;
            }
            let exponents = comp.iter().map(|&j| j as u32).collect();
            Ok(KeyPolyTerm {
                negative: comp.len() % 2 == 0,
                term: SgpTerm::new(exponents, coeffs)?,
                composition: comp,
            })
        })
        .collect()
}

pub fn eval_p<S: Scalar>(n: i64, alphas: &[S], guard: TieGuard) -> Result<Rounded<S>> {
    let mut ambiguous = false;
    let mut acc = S::zero();
    for t in key_poly_terms(alphas)? {
        let v = t.term.eval(n, guard)?;
        ambiguous |= v.ambiguous;
        acc = if t.negative { acc - v.value } else { acc + v.value };
    }
    Ok(Rounded {
        value: acc,
        ambiguous,
    })
}

/// `P(n; α₁,…,α_r)` as an expression tree.
pub fn key_poly_expr<S: Scalar>(alphas: &[S]) -> Result<GpExpr<S>> {
    let terms = key_poly_terms(alphas)?
        .into_iter()
        .map(|t| {
            let sign = if t.negative { -S::one() } else { S::one() };
            GpExpr::scale(sign, t.term.to_gp())
        })
        .collect();
    GpExpr::sum(terms)
}

// Rewrites. `res(f) = f − ⌈f⌉` and `f* = −⌈f⌉`.

fn res<S: Scalar>(f: &GpExpr<S>) -> GpExpr<S> {
    GpExpr::sum(vec![f.clone(), star(f)]).expect("two children")
}

fn star<S: Scalar>(f: &GpExpr<S>) -> GpExpr<S> {
    GpExpr::scale(-S::one(), GpExpr::round(f.clone()))
}

/// `c⌈f⌉ = c·f − c·(f − ⌈f⌉)`.
fn rewrite_single<S: Scalar>(c: S, f: &GpExpr<S>) -> GpExpr<S> {
    GpExpr::sum(vec![
        GpExpr::scale(c.clone(), f.clone()),
        GpExpr::scale(-c, res(f)),
    ])
    .expect("two children")
}

/// Sum over sign patterns `f₁^{i₁}⋯f_k^{i_k}` with `i_t ∈ {1, *}`, skipping
/// the pattern whose bitmask is `skip` (bit `t` set means `f_t` itself).
fn pattern_sum<S: Scalar>(fs: &[GpExpr<S>], skip: usize) -> GpExpr<S> {
    let k = fs.len();
    let terms = (0..1usize << k)
        .filter(|&mask| mask != skip)
        .map(|mask| {
            let factors = fs
                .iter()
                .enumerate()
                .map(|(t, f)| if mask >> t & 1 == 1 { f.clone() } else { star(f) })
                .collect();
            GpExpr::product(factors).expect("k >= 1")
        })
        .collect();
    GpExpr::sum(terms).expect("k >= 1 leaves a pattern")
}

fn residual_product<S: Scalar>(fs: &[GpExpr<S>]) -> GpExpr<S> {
    GpExpr::product(fs.iter().map(res).collect()).expect("k >= 1")
}

/// `c⌈f₁⌉⋯⌈f_k⌉ = c(−1)^k ∏(f_i − ⌈f_i⌉) − c(−1)^k Σ_{(i)≠(*,…,*)} f₁^{i₁}⋯f_k^{i_k}`.
fn rewrite_bracket_product<S: Scalar>(c: S, fs: &[GpExpr<S>]) -> GpExpr<S> {
    let signed = if fs.len().is_multiple_of(2) { c } else { -c };
    GpExpr::sum(vec![
        GpExpr::scale(signed.clone(), residual_product(fs)),
        GpExpr::scale(-signed, pattern_sum(fs, 0)),
    ])
    .expect("two children")
}

/// `f₁⌈f₂⌉⋯⌈f_k⌉ = (−1)^{k−1} ∏(f_i − ⌈f_i⌉) + (−1)^k Σ_{(i)≠(1,*,…,*)} f₁^{i₁}⋯f_k^{i_k}`.
fn rewrite_leading_product<S: Scalar>(fs: &[GpExpr<S>]) -> GpExpr<S> {
    let sign = if fs.len() % 2 == 1 { S::one() } else { -S::one() };
    GpExpr::sum(vec![
        GpExpr::scale(sign.clone(), residual_product(fs)),
        GpExpr::scale(-sign, pattern_sum(fs, 1)),
    ])
    .expect("two children")
}

/// One top-down pass of the three bracket identities. Each matching node is
/// replaced by the right-hand side of the identity, built from the original
/// sub-expressions; rewritten output is not revisited. Non-matching nodes
/// are descended into.
pub fn gp_simplify<S: Scalar>(expr: &GpExpr<S>) -> GpExpr<S> {
    match &expr.node {
        GpNode::Scale(c, inner) => match &inner.node {
            GpNode::Round(f) => rewrite_single(c.clone(), f),
            _ => GpExpr::scale(c.clone(), gp_simplify(inner)),
        },
        GpNode::Round(f) => rewrite_single(S::one(), f),
        GpNode::Monomial {
            coeff,
            power,
            factors,
        } => match (*power, factors.len()) {
            (_, 0) => expr.clone(),
            (0, 1) => rewrite_single(coeff.clone(), &factors[0]),
            (0, _) => rewrite_bracket_product(coeff.clone(), factors),
            (p, _) => {
                let mut fs = Vec::with_capacity(factors.len() + 1);
                fs.push(GpExpr::monomial(coeff.clone(), p, vec![]).expect("p >= 1"));
                fs.extend(factors.iter().cloned());
                rewrite_leading_product(&fs)
            }
        },
        GpNode::Sum(cs) => GpExpr::sum(cs.iter().map(gp_simplify).collect()).expect("non-empty"),
        GpNode::Product(cs) => {
            GpExpr::product(cs.iter().map(gp_simplify).collect()).expect("non-empty")
        }
        GpNode::Linear(_) => expr.clone(),
    }
}

/// One constraint `‖P(n)‖ < ε` of a Bohr set.
#[derive(Clone, Debug, PartialEq)]
pub struct BohrConstraint<S> {
    pub expr: GpExpr<S>,
    pub eps: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BohrSpec<S> {
    constraints: Vec<BohrConstraint<S>>,
    lo: i64,
    hi: i64,
}

pub(crate) fn check_radius<S: Scalar>(name: &'static str, r: &S) -> Result<()> {
    if !(r.is_finite() && *r > S::zero() && *r <= S::half()) {
        return Err(Error::RadiusOutOfRange {
            name,
            value: r.to_string(),
        });
    }
    Ok(())
}

impl<S: Scalar> BohrSpec<S> {
    pub fn new(constraints: Vec<BohrConstraint<S>>, lo: i64, hi: i64) -> Result<Self> {
        check_window(lo, hi)?;
        for c in &constraints {
            check_radius("epsilon", &c.eps)?;
        }
        Ok(BohrSpec {
            constraints,
            lo,
            hi,
        })
    }

    pub fn constraints(&self) -> &[BohrConstraint<S>] {
        &self.constraints
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn verdict(&self, n: i64, guard: TieGuard) -> Result<Verdict> {
        let mut ambiguous = false;
        for c in &self.constraints {
            let v = c.expr.eval(n, guard)?;
            if v.ambiguous {
                ambiguous = true;
            } else if frac_norm(&v.value) >= c.eps {
                return Ok(Verdict::Out);
            }
        }
        Ok(if ambiguous {
            Verdict::Ambiguous
        } else {
            Verdict::In
        })
    }
}

/// `{n ∈ window : ‖P_i(n)‖ < ε_i for all i}`.
pub fn bohr_window<S: Scalar>(spec: &BohrSpec<S>, guard: TieGuard) -> Result<WindowSet> {
    WindowSet::scan(spec.lo, spec.hi, |n| spec.verdict(n, guard))
}
