//! The Randers pipeline checked against oracles that do not share its code
//! path: central finite differences of F², the closed forms, and
//! curvature contracted from the literal fixture tables.

use lie_randers::catalog::{self, parallel_drift};
use lie_randers::geometry::{curvature, levi_civita, sectional_curvature};
use lie_randers::randers::{closed_form_flag_case1, closed_form_flag_case2};
use lie_randers::sample::{drift_coefficient, int_vector, orthonormal_pair, positive_definite_gram, unit_pole_flag};
use lie_randers::{Connection, Engine, Flag, InnerProduct, RandersMetric, Scalar, Vector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Q = BigRational;

fn rational(x: f64) -> Q {
    Q::from_float(x).expect("finite")
}

/// `sqrt(x)` to 40 decimal digits via integer square root.
fn sqrt40(x: &Q) -> Q {
    let scale = BigInt::from(10u32).pow(40);
    let scaled = (x * Q::from_integer(&scale * &scale)).to_integer();
    Q::new(scaled.sqrt(), scale)
}

fn dot(gram: &[[Q; 4]; 4], u: &[Q; 4], v: &[Q; 4]) -> Q {
    let mut acc = Q::zero();
    for i in 0..4 {
        for j in 0..4 {
            acc += &u[i] * &gram[i][j] * &v[j];
        }
    }
    acc
}

/// `F(y) = sqrt(g(y,y)) + g(drift, y)` written out independently.
fn randers_f(gram: &[[Q; 4]; 4], drift: &[Q; 4], y: &[Q; 4]) -> Q {
    sqrt40(&dot(gram, y, y)) + dot(gram, drift, y)
}

/// Central-difference `½ ∂²/∂s∂t F²(y + s u + t v)` at 0, evaluated with
/// 40-digit arithmetic so that only the O(h²) truncation error remains.
fn fd_fundamental(gram: &[[Q; 4]; 4], drift: &[Q; 4], y: &[Q; 4], u: &[Q; 4], v: &[Q; 4], h: &Q) -> f64 {
    let f2 = |s: &Q, t: &Q| {
        let p: [Q; 4] = std::array::from_fn(|i| &y[i] + s * &u[i] + t * &v[i]);
        let f = randers_f(gram, drift, &p);
        &f * &f / Q::from_integer(2.into())
    };
    let mh = -h;
    let d = f2(h, h) - f2(h, &mh) - f2(&mh, h) + f2(&mh, &mh);
    (d / (Q::from_integer(4.into()) * h * h)).to_f64().unwrap()
}

fn as_array(v: &Vector) -> [Q; 4] {
    let x = v.to_f64();
    std::array::from_fn(|i| rational(x[i]))
}

fn gram_array(g: &InnerProduct) -> [[Q; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| rational(g.gram().get(i, j).to_f64())))
}

#[test]
fn fundamental_tensor_matches_finite_differences() {
    let eng = Engine::float();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = Q::new(1.into(), 100_000.into());
    for _ in 0..200 {
        let g = InnerProduct::new(positive_definite_gram(&mut rng, 4, &eng), &eng).unwrap();
        let raw = int_vector(&mut rng, 4, 3).cast(&eng);
        let norm = g.norm_squared(&raw).unwrap().sqrt();
        let drift = raw.scale(&(eng.ratio(rng.random_range(1..=9), 10) / norm));
        let f = RandersMetric::build(g.clone(), drift.clone()).unwrap();
        let (y, u, v) = (int_vector(&mut rng, 4, 4), int_vector(&mut rng, 4, 4), int_vector(&mut rng, 4, 4));
        let (y, u, v) = (y.cast(&eng), u.cast(&eng), v.cast(&eng));
        let closed = f.fundamental_tensor(&y, &u, &v).unwrap().to_f64();
        let ga = gram_array(&g);
        let fd = fd_fundamental(&ga, &as_array(&drift), &as_array(&y), &as_array(&u), &as_array(&v), &h);
        // g_y is positive definite; its natural scale on (u, v) is
        // sqrt(g_y(u,u) g_y(v,v)).
        let scale = (f.fundamental_tensor(&y, &u, &u).unwrap().to_f64()
            * f.fundamental_tensor(&y, &v, &v).unwrap().to_f64())
        .sqrt();
        assert!((closed - fd).abs() <= 1e-6 * scale, "closed {closed} fd {fd} scale {scale}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn evaluate_is_positively_homogeneous(
        y in prop::collection::vec(-5i64..=5, 4), num in 1i64..50, den in 1i64..10, q in -9i64..=9
    ) {
        let eng = Engine::exact();
        let g = InnerProduct::identity(4, &eng);
        let f = RandersMetric::build(g, Vector::basis(4, 0).scale(&Scalar::ratio(q, 10))).unwrap();
        let y = Vector::from_ints(&y);
        let lambda = Scalar::ratio(num, den);
        let lhs = f.evaluate(&y.scale(&lambda)).unwrap().to_f64();
        let rhs = (lambda * f.evaluate(&y).unwrap()).to_f64();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
    }

    #[test]
    fn euler_identity_for_f_squared(y in prop::collection::vec(-5i64..=5, 4), q in -9i64..=9) {
        let eng = Engine::exact();
        let y = Vector::from_ints(&y);
        prop_assume!(!y.is_zero(&eng));
        let f = RandersMetric::build(InnerProduct::identity(4, &eng), Vector::basis(4, 3).scale(&Scalar::ratio(q, 10))).unwrap();
        let gyy = f.fundamental_tensor(&y, &y, &y).unwrap();
        let f2 = f.evaluate(&y).unwrap().square();
        if gyy.is_exact() && f2.is_exact() {
            prop_assert_eq!(gyy, f2);
        } else {
            prop_assert!((gyy.to_f64() - f2.to_f64()).abs() <= 1e-12 * f2.to_f64());
        }
    }

    #[test]
    fn fundamental_tensor_is_symmetric(
        y in prop::collection::vec(-3i64..=3, 4), u in prop::collection::vec(-3i64..=3, 4), v in prop::collection::vec(-3i64..=3, 4)
    ) {
        let eng = Engine::exact();
        let y = Vector::from_ints(&y);
        prop_assume!(!y.is_zero(&eng));
        let f = RandersMetric::build(InnerProduct::identity(4, &eng), Vector::from_ints(&[0, 1, 1, 0]).scale(&Scalar::ratio(1, 3))).unwrap();
        let (u, v) = (Vector::from_ints(&u), Vector::from_ints(&v));
        let a = f.fundamental_tensor(&y, &u, &v).unwrap().to_f64();
        let b = f.fundamental_tensor(&y, &v, &u).unwrap().to_f64();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }
}

struct Case {
    name: &'static str,
    entry: catalog::CatalogEntry,
    conn: Connection,
}

fn case(name: &'static str) -> Case {
    let eng = Engine::exact();
    let entry = catalog::get(name, &eng).unwrap();
    let conn = levi_civita(&entry.algebra, &entry.metric, &eng).unwrap();
    Case { name, entry, conn }
}

fn metric_for(c: &Case, q: &Scalar) -> RandersMetric {
    let eng = Engine::exact();
    let drift = parallel_drift(&c.entry.metric, &c.conn, q, &eng).unwrap();
    RandersMetric::build(c.entry.metric.clone(), drift).unwrap()
}

/// `R(u,v)w` contracted from the literal fixture table in plain f64.
fn fixture_curvature(c: &Case, u: &[f64; 4], v: &[f64; 4], w: &[f64; 4]) -> [f64; 4] {
    let r = c.entry.expected.curvature.as_ref().unwrap();
    let mut out = [0.0; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for (l, o) in out.iter_mut().enumerate() {
                    *o += u[i] * v[j] * w[k] * r.get(i, j, k, l).to_f64();
                }
            }
        }
    }
    out
}

/// Flag curvature from fixture curvature and finite-difference g_Y.
fn oracle_flag(c: &Case, q: f64, pole: &Vector, transverse: &Vector) -> f64 {
    let gram = gram_array(&c.entry.metric);
    let p = c.entry.expected.parallel_basis[0].to_f64();
    let drift: [Q; 4] = std::array::from_fn(|i| rational(q * p[i]));
    let (y, t) = (as_array(pole), as_array(transverse));
    let h = Q::new(1.into(), 100_000.into());
    let gy = |a: &[Q; 4], b: &[Q; 4]| fd_fundamental(&gram, &drift, &y, a, b, &h);
    let (pf, tf) = (pole.to_f64(), transverse.to_f64());
    let r = fixture_curvature(c, &[tf[0], tf[1], tf[2], tf[3]], &[pf[0], pf[1], pf[2], pf[3]], &[pf[0], pf[1], pf[2], pf[3]]);
    let r = r.map(rational);
    gy(&r, &t) / (gy(&y, &y) * gy(&t, &t) - gy(&y, &t).powi(2))
}

#[test]
fn flag_curvature_examples_against_fixture_oracle() {
    let eng = Engine::exact();
    let e = |i| Vector::basis(4, i);
    let examples = [("case1", 1, 2, Scalar::ratio(1, 4)), ("case1", 0, 1, Scalar::zero()), ("case2", 0, 1, Scalar::int(-1))];
    for (name, pole, transverse, expected) in examples {
        let c = case(name);
        for q in [Scalar::zero(), Scalar::ratio(1, 2), Scalar::ratio(-3, 5)] {
            let f = metric_for(&c, &q);
            let flag = Flag::new(e(pole), e(transverse), &eng).unwrap();
            let k = f.flag_curvature(&c.entry.algebra, &c.conn, &flag, &eng).unwrap();
            let oracle = oracle_flag(&c, q.to_f64(), &e(pole), &e(transverse));
            assert!((k.to_f64() - oracle).abs() < 1e-5, "{name}: {k} vs oracle {oracle}");
            // The drift is orthogonal to both edges of these flags, so K
            // does not depend on q.
            assert_eq!(k, expected, "{name} q={q}");
        }
    }
}

#[test]
fn random_flags_against_fixture_oracle() {
    let eng = Engine::exact();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for name in ["case1", "case2"] {
        let c = case(name);
        for _ in 0..50 {
            let q = drift_coefficient(&mut rng, &eng);
            let (pole, transverse) = unit_pole_flag(&mut rng, &c.entry.metric, &eng);
            let f = metric_for(&c, &q);
            let flag = Flag::new(pole.clone(), transverse.clone(), &eng).unwrap();
            let k = f.flag_curvature(&c.entry.algebra, &c.conn, &flag, &eng).unwrap();
            assert!(k.is_exact());
            let oracle = oracle_flag(&c, q.to_f64(), &pole, &transverse);
            assert!((k.to_f64() - oracle).abs() < 1e-5 * oracle.abs().max(1.0), "{name}: {k} vs {oracle}");
        }
    }
}

/// Hand expansions of `R(V,U)U` for the two Berwald cases.
fn expanded_rvuu(name: &str, u: &Vector, v: &Vector) -> Vector {
    let [a, b, c, d]: [Scalar; 4] = std::array::from_fn(|i| u.get(i).clone());
    let [at, bt, ct, dt]: [Scalar; 4] = std::array::from_fn(|i| v.get(i).clone());
    let comb = |coeffs: [Scalar; 4]| Vector::new(coeffs.to_vec());
    let z = Scalar::zero;
    match name {
        "case1" => {
            let t1 = comb([z(), c.clone(), -&b, z()]).scale(&(&b * &ct - &c * &bt));
            let t2 = comb([z(), d.clone(), z(), -&b]).scale(&(&b * &dt - &d * &bt));
            let t3 = comb([z(), z(), d.clone(), -&c]).scale(&(&c * &dt - &d * &ct));
            (&(&t1 + &t2) + &t3).scale(&Scalar::ratio(-1, 4))
        }
        "case2" => {
            let t1 = comb([-&b, a.clone(), z(), z()]).scale(&(&a * &bt - &b * &at));
            let t2 = comb([-&c, z(), a.clone(), z()]).scale(&(&a * &ct - &c * &at));
            let t3 = comb([z(), -&c, b.clone(), z()]).scale(&(&b * &ct - &c * &bt));
            -&(&(&t1 + &t2) + &t3)
        }
        _ => unreachable!(),
    }
}

#[test]
fn curvature_expansions_hold() {
    let eng = Engine::exact();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for name in ["case1", "case2"] {
        let c = case(name);
        for _ in 0..100 {
            let (u, v) = (int_vector(&mut rng, 4, 5), int_vector(&mut rng, 4, 5));
            let computed = curvature(&c.conn, &c.entry.algebra, &v, &u, &u).unwrap();
            assert_eq!(computed, expanded_rvuu(name, &u, &v), "{}", c.name);
        }
    }
    let _ = eng;
}

#[test]
fn fundamental_tensor_closed_values() {
    let eng = Engine::exact();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for (name, axis) in [("case1", 0usize), ("case2", 3usize)] {
        let c = case(name);
        for _ in 0..100 {
            let q = drift_coefficient(&mut rng, &eng);
            let f = metric_for(&c, &q);
            let (u, v) = orthonormal_pair(&mut rng, &c.entry.metric, &eng);
            let (a, at) = (u.get(axis), v.get(axis));
            let base = Scalar::one() + a * &q;
            assert_eq!(f.fundamental_tensor(&u, &u, &u).unwrap(), base.square());
            assert_eq!(f.fundamental_tensor(&u, &v, &v).unwrap(), &base + &(at * &q).square());
            assert_eq!(f.fundamental_tensor(&u, &u, &v).unwrap(), at * &q * &base);
            let r = curvature(&c.conn, &c.entry.algebra, &v, &u, &u).unwrap();
            let numerator = f.fundamental_tensor(&u, &r, &v).unwrap();
            let k = if name == "case1" {
                closed_form_flag_case1(&q, &u, &v).unwrap()
            } else {
                closed_form_flag_case2(&q, &u, &v).unwrap()
            };
            // g_U(R(V,U)U,V) = K (1+aq)³ with K the closed form.
            assert_eq!(numerator, k * base.square() * &base);
        }
    }
}

#[test]
fn riemannian_degeneration_matches_sectional() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for eng in [Engine::exact(), Engine::float()] {
        for name in catalog::CASE_NAMES {
            let entry = catalog::get(name, &eng).unwrap();
            let conn = levi_civita(&entry.algebra, &entry.metric, &eng).unwrap();
            let f = RandersMetric::riemannian(entry.metric.clone());
            for _ in 0..100 {
                let (pole, transverse) = unit_pole_flag(&mut rng, &entry.metric, &eng);
                let flag = Flag::new(pole.clone(), transverse.clone(), &eng).unwrap();
                let k = f.flag_curvature(&entry.algebra, &conn, &flag, &eng).unwrap();
                let s = sectional_curvature(&entry.metric, &conn, &entry.algebra, &pole, &transverse, &eng).unwrap();
                if eng.mode() == lie_randers::Mode::Exact {
                    assert_eq!(k, s, "{name}");
                } else {
                    assert!((k.to_f64() - s.to_f64()).abs() <= 1e-9 * s.to_f64().abs().max(1.0));
                }
            }
        }
    }
}

#[test]
fn sign_theorems_on_seeded_flags() {
    let eng = Engine::exact();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for (name, nonneg) in [("case1", true), ("case2", false)] {
        let c = case(name);
        for _ in 0..300 {
            let q = drift_coefficient(&mut rng, &eng);
            let (pole, transverse) = unit_pole_flag(&mut rng, &c.entry.metric, &eng);
            let f = metric_for(&c, &q);
            let flag = Flag::new(pole, transverse, &eng).unwrap();
            let k = f.flag_curvature(&c.entry.algebra, &c.conn, &flag, &eng).unwrap();
            if nonneg {
                assert!(k >= Scalar::zero(), "{name}: {k}");
            } else {
                assert!(k <= Scalar::zero(), "{name}: {k}");
            }
        }
    }
}

#[test]
fn non_unit_pole_falls_back_to_float() {
    let eng = Engine::exact();
    let c = case("case1");
    let f = metric_for(&c, &Scalar::ratio(1, 2));
    let flag = Flag::new(Vector::from_ints(&[1, 1, 0, 0]), Vector::from_ints(&[0, 0, 1, 0]), &eng).unwrap();
    let k = f.flag_curvature(&c.entry.algebra, &c.conn, &flag, &eng).unwrap();
    assert!(!k.is_exact());
    // pole (1,1,0,0)/√2 normalised: a = b = 1/√2, transverse Z.
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let expected = (a * a) / (4.0 * (1.0 + a * 0.5).powi(2));
    assert!((k.to_f64() - expected).abs() < 1e-12, "{k} vs {expected}");
}
