//! Worked examples for each module, computed by hand or by direct scan.

use nilbohr::dynsim::{
    multi_return_set, return_set, step_oracle, torus_orbit, vandermonde_lambda, BoxNbhd, TorusState,
    TorusSystem,
};
use nilbohr::gp::{
    bohr_window, eval_l, eval_p, eval_sgp, gp_degree, gp_eval, gp_simplify, BohrConstraint, BohrSpec, GpExpr,
    SgpTerm,
};
use nilbohr::nilmatrix::{
    lattice_reduce, mat_inv, mat_mul, mat_pow_closed, nil_return_set, z1d_sequence, NilCoords,
};
use nilbohr::scalar::{binom, frac_norm, nearest_int, nearest_int_checked, parse_rational};
use nilbohr::setfamilies::{
    banach_upper_density, common_diff_set, find_star_pattern, fs, intersective_witness, is_syndetic_window,
    ramsey_sg2_partition, sg_d, GapSeq, StarOrder,
};
use nilbohr::{Error, Rational, Scalar, TieGuard, WindowSet};
use num_bigint::BigInt;

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn qs(v: &[&str]) -> Vec<Rational> {
    v.iter().map(|s| q(s)).collect()
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn g() -> TieGuard {
    TieGuard::default()
}

#[test]
fn rounding_conventions() {
    assert_eq!(frac_norm(&q("0.3")), q("0.3"));
    assert_eq!(frac_norm(&q("-1.2")), q("0.2"));
    assert_eq!(frac_norm(&q("2.5")), q("0.5"));
    assert_eq!(nearest_int(&q("0.3")), q("0"));
    assert_eq!(nearest_int(&q("0.5")), q("0"));
    assert_eq!(nearest_int(&q("-0.5")), q("-1"));
    assert!(nearest_int_checked(&f64::NAN, g()).is_err());
    assert!(nearest_int_checked(&0.5f64, g()).unwrap().ambiguous);
}

#[test]
fn nested_l_operator() {
    assert_eq!(eval_l(&qs(&["0.4"]), g()).unwrap().value, q("0.4"));
    assert_eq!(eval_l(&qs(&["0.4", "1.6"]), g()).unwrap().value, q("0.8"));
    assert_eq!(eval_l(&qs(&["0.5", "0.3", "2.4"]), g()).unwrap().value, q("0.5"));
    assert!(eval_l::<Rational>(&[], g()).is_err());

    let t = SgpTerm::new(vec![1, 1], qs(&["0.1", "0.4"])).unwrap();
    assert_eq!(eval_sgp(&t, 3, g()).unwrap().value, q("0.3"));
    assert_eq!(eval_sgp(&t, 0, g()).unwrap().value, q("0"));
    let lin = SgpTerm::new(vec![1], qs(&["2/7"])).unwrap();
    assert_eq!(eval_sgp(&lin, 5, g()).unwrap().value, q("10/7"));
}

#[test]
fn key_polynomial_low_orders() {
    let (a1, a2) = (q("3/7"), q("5/11"));
    for n in -30..=30 {
        let nn = Rational::from_i64(n);
        assert_eq!(eval_p(n, std::slice::from_ref(&a1), g()).unwrap().value, nn.clone() * a1.clone());
        let want = nn.clone() * nn.clone() * a1.clone() * a2.clone() / Rational::from_i64(2)
            - nn.clone() * a1.clone() * nearest_int(&(nn * a2.clone()));
        assert_eq!(eval_p(n, &[a1.clone(), a2.clone()], g()).unwrap().value, want);
    }
    assert_eq!(eval_p(0, &qs(&["1/3", "1/5", "1/7", "1/9"]), g()).unwrap().value, q("0"));
    assert!(matches!(eval_p::<Rational>(3, &[], g()), Err(Error::Empty(_))));
}

#[test]
fn expression_evaluation_and_degree() {
    assert_eq!(gp_eval(&GpExpr::linear(q("0.25")), 4, g()).unwrap().value, q("1"));
    let e = GpExpr::scale(q("3"), GpExpr::round(GpExpr::linear(q("0.4"))));
    assert_eq!(gp_eval(&e, 2, g()).unwrap().value, q("3"));
    let m = GpExpr::monomial(q("0.5"), 1, vec![GpExpr::linear(q("0.3"))]).unwrap();
    assert_eq!(gp_eval(&m, 2, g()).unwrap().value, q("1"));

    assert_eq!(gp_degree(&GpExpr::linear(q("1"))), 1);
    assert_eq!(gp_degree(&m), 2);
    let cubic = GpExpr::monomial(q("1"), 3, vec![]).unwrap();
    let s = GpExpr::sum(vec![GpExpr::linear(q("1")), cubic]).unwrap();
    assert_eq!(gp_degree(&s), 3);
    assert!(matches!(
        m.clone().with_declared_degree(3),
        Err(Error::DegreeMismatch { declared: 3, computed: 2 })
    ));
}

#[test]
fn bracket_rewrites_keep_values() {
    let f1 = GpExpr::linear(q("2/9"));
    let f2 = GpExpr::monomial(q("1/3"), 1, vec![GpExpr::linear(q("5/7"))]).unwrap();
    let single = GpExpr::scale(q("4/5"), GpExpr::round(f1.clone()));
    let pair = GpExpr::monomial(q("-3/2"), 0, vec![f1.clone(), f2.clone()]).unwrap();
    let lead = GpExpr::monomial(q("7/4"), 1, vec![f1]).unwrap();
    for e in [single, pair, lead] {
        let s = gp_simplify(&e);
        assert_ne!(s, e);
        for n in -40..=40 {
            assert_eq!(gp_eval(&e, n, g()).unwrap().value, gp_eval(&s, n, g()).unwrap().value);
        }
    }
}

#[test]
fn bohr_examples() {
    let c = |a: &str, e: &str| BohrConstraint {
        expr: GpExpr::linear(q(a)),
        eps: q(e),
    };
    let spec = BohrSpec::new(vec![c("0.25", "0.1")], 0, 12).unwrap();
    assert_eq!(bohr_window(&spec, g()).unwrap().members(), &[0, 4, 8, 12]);

    let a = BohrSpec::new(vec![c("0.3", "0.2")], -50, 50).unwrap();
    let b = BohrSpec::new(vec![c("0.17", "0.15")], -50, 50).unwrap();
    let both = BohrSpec::new(vec![c("0.3", "0.2"), c("0.17", "0.15")], -50, 50).unwrap();
    let joint = bohr_window(&both, g()).unwrap();
    assert!(joint.contains(0));
    assert_eq!(joint, bohr_window(&a, g()).unwrap().intersect(&bohr_window(&b, g()).unwrap()).unwrap());

    assert!(matches!(
        BohrSpec::new(vec![c("0.3", "0.6")], 0, 5),
        Err(Error::RadiusOutOfRange { .. })
    ));
    assert!(matches!(BohrSpec::new(vec![c("0.3", "0.2")], 5, 0), Err(Error::EmptyWindow { .. })));
}

fn coords(d: usize, v: &[&str]) -> NilCoords<Rational> {
    NilCoords::from_entries(d, qs(v)).unwrap()
}

#[test]
fn group_operations() {
    let a = coords(2, &["1", "2", "0"]);
    let b = coords(2, &["3", "4", "0"]);
    assert_eq!(mat_mul(&a, &b).unwrap(), coords(2, &["4", "6", "4"]));
    assert_eq!(mat_mul(&a, &NilCoords::zero(2)).unwrap(), a);
    assert_eq!(mat_inv(&a), coords(2, &["-1", "-2", "2"]));
    assert_eq!(mat_inv(&NilCoords::<Rational>::zero(3)), NilCoords::zero(3));
    assert!(matches!(mat_mul(&a, &NilCoords::zero(3)), Err(Error::DimensionMismatch(2, 3))));
}

#[test]
fn powers_of_superdiagonal_elements() {
    let alphas = qs(&["1/2", "-2/3", "3/5", "4/7"]);
    let x = NilCoords::superdiagonal(&alphas).unwrap();
    assert_eq!(mat_pow_closed(&x, 1), x);
    assert_eq!(mat_pow_closed(&x, 0), NilCoords::zero(4));
    for n in [-9, -1, 2, 13] {
        let p = mat_pow_closed(&x, n);
        for k in 1..=4 {
            for i in 1..=5 - k {
                let prod = alphas[i - 1..i - 1 + k].iter().fold(q("1"), |acc, t| acc * t.clone());
                assert_eq!(p.get(k, i), &(Rational::from_bigint(&binom(n, k as u32)) * prod));
            }
        }
    }
}

#[test]
fn reduction_examples() {
    let r = lattice_reduce(&coords(1, &["0.7"]), g()).unwrap();
    assert_eq!(r.h.entries(), &[BigInt::from(1)]);
    assert_eq!(r.z, coords(1, &["-0.3"]));

    let (a1, a2) = (q("0.37"), q("0.81"));
    for n in -25..=25 {
        let nn = Rational::from_i64(n);
        let x = NilCoords::from_entries(
            2,
            vec![
                nn.clone() * a1.clone(),
                nn.clone() * a2.clone(),
                Rational::from_bigint(&binom(n, 2)) * a1.clone() * a2.clone(),
            ],
        )
        .unwrap();
        let u = Rational::from_bigint(&binom(n, 2)) * a1.clone() * a2.clone()
            - nn.clone() * a1.clone() * nearest_int(&(nn * a2.clone()));
        let r = lattice_reduce(&x, g()).unwrap();
        assert_eq!(r.z.get(2, 1), &(u.clone() - nearest_int(&u)));
    }
}

#[test]
fn nil_return_examples() {
    let zero = nil_return_set(&qs(&["0", "0", "0"]), &q("0.1"), -20, 20, g()).unwrap();
    assert_eq!(zero, WindowSet::full(-20, 20).unwrap());

    let alpha = q("3/13");
    let eta = q("1/8");
    let circle = nil_return_set(std::slice::from_ref(&alpha), &eta, -100, 100, g()).unwrap();
    let bohr = bohr_window(
        &BohrSpec::new(vec![BohrConstraint { expr: GpExpr::linear(alpha), eps: eta }], -100, 100).unwrap(),
        g(),
    )
    .unwrap();
    assert_eq!(circle, bohr);
    assert!(matches!(
        nil_return_set(&qs(&["0.1"]), &q("0.6"), 0, 10, g()),
        Err(Error::RadiusOutOfRange { .. })
    ));
}

#[test]
fn top_residuals() {
    let alpha = q("5/17");
    for z in z1d_sequence(std::slice::from_ref(&alpha), -30, 30, g()).unwrap() {
        let v = Rational::from_i64(z.n) * alpha.clone();
        assert_eq!(z.value, v.clone() - nearest_int(&v));
    }
    let zs = z1d_sequence(&qs(&["1/3", "2/9", "5/7"]), 0, 0, g()).unwrap();
    assert_eq!(zs[0].value, q("0"));
}

#[test]
fn sums_with_gaps() {
    let p = GapSeq::from_i64s(&[1, 10, 100]);
    assert_eq!(sg_d(&p, 1).unwrap(), big(&[1, 10, 11, 100, 110, 111]));
    assert_eq!(sg_d(&p, 2).unwrap(), big(&[1, 10, 11, 100, 101, 110, 111]));
    assert_eq!(fs(&p).unwrap(), sg_d(&p, 3).unwrap());
    assert_eq!(fs(&GapSeq::from_i64s(&[1, 2])).unwrap(), big(&[1, 2, 3]));
    assert_eq!(fs(&GapSeq::from_i64s(&[-4])).unwrap(), big(&[-4]));
    assert!(matches!(fs(&GapSeq::powers(2, 25)), Err(Error::TooLong { .. })));
    assert!(matches!(sg_d(&p, 0), Err(Error::InvalidParameter(_))));
    // the dynamic program has no length cap
    assert_eq!(sg_d(&GapSeq::powers(3, 60), 1).unwrap().len(), 60 * 61 / 2);
}

#[test]
fn difference_and_density_examples() {
    let s = WindowSet::scan(0, 100, |n| Ok((n % 4 == 0).into())).unwrap();
    let c2 = common_diff_set(&s, 2).unwrap();
    assert!(c2.iter().all(|n| n % 4 == 0));
    assert_eq!(c2.len(), 25);
    assert!(common_diff_set(&WindowSet::new(0, 9, vec![5]).unwrap(), 3).unwrap().contains(0));

    for n in 0..8 {
        assert_eq!(is_syndetic_window(&s, n).unwrap(), n >= 3);
    }
    assert!(is_syndetic_window(&WindowSet::full(0, 9).unwrap(), 0).unwrap());
    assert!(!is_syndetic_window(&WindowSet::new(0, 9, vec![]).unwrap(), 2).unwrap());

    let s = WindowSet::scan(0, 1000, |n| Ok((n % 4 == 0).into())).unwrap();
    assert_eq!(banach_upper_density(&s, 100).unwrap(), 0.25);
    assert_eq!(banach_upper_density(&WindowSet::full(0, 1000).unwrap(), 100).unwrap(), 1.0);
    assert_eq!(banach_upper_density(&WindowSet::new(0, 1000, vec![]).unwrap(), 100).unwrap(), 0.0);
}

#[test]
fn intersective_examples() {
    let full = WindowSet::full(-40, 40).unwrap();
    let p = WindowSet::new(-40, 40, vec![3, 4, 7]).unwrap();
    let w = intersective_witness(&p, &full, 2, 10).unwrap().unwrap();
    assert_eq!(w.ns, vec![3, 4]);

    let p6 = WindowSet::scan(-100, 100, |n| Ok((n % 6 == 0).into())).unwrap();
    let f3 = WindowSet::scan(0, 100, |n| Ok((n % 3 == 0).into())).unwrap();
    let w = intersective_witness(&p6, &f3, 2, 30).unwrap().unwrap();
    assert_eq!((w.a, w.ns.clone()), (0, vec![6, 12]));

    let odd = WindowSet::scan(-120, 120, |n| Ok((n.rem_euclid(2) == 1).into())).unwrap();
    for bound in [5, 20, 50] {
        assert!(intersective_witness(&odd, &full, 2, bound).unwrap().is_none());
    }
}

#[test]
fn ramsey_blocks() {
    let part = ramsey_sg2_partition(&GapSeq::powers(3, 4)).unwrap();
    assert_eq!(part.b1, big(&[3, 27, 30]));
    let p = GapSeq::powers(3, 8);
    assert!(p.is_lacunary());
    let part = ramsey_sg2_partition(&p).unwrap();
    for b in [&part.b0, &part.b1, &part.b2] {
        assert_eq!(find_star_pattern(b, StarOrder::Weak), None);
    }
    assert!(find_star_pattern(&sg_d(&p, 2).unwrap(), StarOrder::Weak).is_some());
    assert_eq!(
        find_star_pattern(&big(&[1, 2, 3, 4, 5, 6]), StarOrder::Strict),
        Some([1, 2, 3].map(BigInt::from))
    );
    assert_eq!(find_star_pattern(&big(&[1]), StarOrder::Weak), None);
    assert!(matches!(
        ramsey_sg2_partition(&GapSeq::from_i64s(&[1, 2, 4])),
        Err(Error::NotLacunary(1))
    ));
}

#[test]
fn torus_examples() {
    let alpha = q("2/11");
    let sys = TorusSystem::new(1, alpha.clone()).unwrap();
    let x0 = TorusState::new(vec![q("1/5")]).unwrap();
    assert_eq!(torus_orbit(&sys, &x0, 0).unwrap(), x0);
    assert_eq!(torus_orbit(&sys, &x0, 1).unwrap(), step_oracle(&sys, &x0, 1).unwrap());
    let x7 = torus_orbit(&sys, &x0, 7).unwrap();
    assert_eq!(x7.coords()[0], q("1/5") + q("14/11") - q("1"));

    let sys2 = TorusSystem::new(2, alpha.clone()).unwrap();
    for n in [-5, 3, 40] {
        let x = torus_orbit(&sys2, &TorusState::origin(2), n).unwrap();
        let want = TorusState::new(vec![
            Rational::from_i64(n) * alpha.clone(),
            Rational::from_bigint(&binom(n, 2)) * alpha.clone(),
        ])
        .unwrap();
        assert_eq!(x, want);
    }

    let rot = TorusSystem::new(1, 0.25).unwrap();
    let u = BoxNbhd::cube(1, 0.1).unwrap();
    let r = return_set(&rot, &TorusState::origin(1), &u, -10, 10).unwrap();
    assert_eq!(r.members(), &[-8, -4, 0, 4, 8]);

    let mr = multi_return_set(&rot, &u, 2, -10, 10, 16).unwrap();
    assert!(mr.set.contains(0));
    assert!(matches!(
        multi_return_set(&rot, &u, 2, 0, 10, 1),
        Err(Error::InvalidParameter(_))
    ));
    assert!(matches!(BoxNbhd::cube(2, 0.7), Err(Error::RadiusOutOfRange { .. })));
}

#[test]
fn lambda_examples() {
    let l = vandermonde_lambda(1).unwrap();
    assert_eq!((l.lambdas, l.lambda, l.k), (big(&[1]), BigInt::from(1), BigInt::from(1)));
    let l = vandermonde_lambda(2).unwrap();
    assert_eq!((l.lambdas, l.lambda, l.k), (big(&[-2, 1]), BigInt::from(2), BigInt::from(6)));
    let l3 = vandermonde_lambda(3).unwrap();
    assert_eq!(l3.lambdas, big(&[3, -3, 1]));
    assert_eq!(l3.lambda, BigInt::from(6));
    assert_eq!(l3.k, BigInt::from(42));
}
