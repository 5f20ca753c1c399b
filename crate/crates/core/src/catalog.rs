//! The five four-dimensional hypercomplex Lie algebras (abelian plus four
//! non-abelian families), each with an orthonormal basis `X, Y, Z, W`, and
//! their expected geometric data as literal fixtures.
//!
//! [`verify_all`] recomputes everything from the brackets and diffs it
//! against the fixtures.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{xyzw, LieAlgebra, Vector};
use crate::error::{Error, Result};
use crate::geometry::{curvature_table, levi_civita, parallel_fields, Connection, CurvatureOperator, InnerProduct};
use crate::randers::{Flag, RandersMetric};
use crate::report::ValidationReport;
use crate::sample;
use crate::scalar::{Engine, Scalar};

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;
const W: usize = 3;

pub const CASE_NAMES: [&str; 5] = ["abelian", "case1", "case2", "case3", "case4"];

/// `(i, j, k, num, den)`: the coefficient of `e_k` is `num/den`.
type Entry = (usize, usize, usize, i64, i64);

const CASE1_BRACKETS: &[Entry] = &[(Y, Z, W, 1, 1), (Z, W, Y, 1, 1), (W, Y, Z, 1, 1)];
const CASE2_BRACKETS: &[Entry] = &[(X, Z, X, 1, 1), (Y, Z, Y, 1, 1), (X, W, Y, 1, 1), (Y, W, X, -1, 1)];
const CASE3_BRACKETS: &[Entry] = &[(X, Y, Y, 1, 1), (X, Z, Z, 1, 1), (X, W, W, 1, 1)];
const CASE4_BRACKETS: &[Entry] = &[(X, Y, Y, 1, 1), (X, Z, Z, 1, 2), (X, W, W, 1, 2), (Z, W, Y, 1, 2)];

/// `∇_{e_i} e_j` has `num/den` along `e_k`.
const CASE1_CONNECTION: &[Entry] = &[
    (Y, Z, W, 1, 2),
    (Y, W, Z, -1, 2),
    (Z, Y, W, -1, 2),
    (Z, W, Y, 1, 2),
    (W, Y, Z, 1, 2),
    (W, Z, Y, -1, 2),
];
const CASE2_CONNECTION: &[Entry] = &[
    (X, X, Z, -1, 1),
    (X, Z, X, 1, 1),
    (Y, Y, Z, -1, 1),
    (Y, Z, Y, 1, 1),
    (W, X, Y, -1, 1),
    (W, Y, X, 1, 1),
];
const CASE3_CONNECTION: &[Entry] = &[
    (Y, X, Y, -1, 1),
    (Y, Y, X, 1, 1),
    (Z, X, Z, -1, 1),
    (Z, Z, X, 1, 1),
    (W, X, W, -1, 1),
    (W, W, X, 1, 1),
];
const CASE4_CONNECTION: &[Entry] = &[
    (Y, X, Y, -1, 1),
    (Y, Y, X, 1, 1),
    (Y, Z, W, -1, 4),
    (Y, W, Z, 1, 4),
    (Z, X, Z, -1, 2),
    (Z, Y, W, -1, 4),
    (Z, Z, X, 1, 2),
    (Z, W, Y, 1, 4),
    (W, X, W, -1, 2),
    (W, Y, Z, 1, 4),
    (W, Z, Y, -1, 4),
    (W, W, X, 1, 2),
];

/// `(i, j, k, l, num, den)`: `R(e_i,e_j)e_k` has `num/den` along `e_l`.
/// Entries with `i > j` follow by antisymmetry; everything else is zero.
type CurvatureEntry = (usize, usize, usize, usize, i64, i64);

const CASE1_CURVATURE: &[CurvatureEntry] = &[
    (Y, Z, Y, Z, -1, 4),
    (Z, W, W, Z, 1, 4),
    (Y, W, W, Y, 1, 4),
    (Y, Z, Z, Y, 1, 4),
    (Z, W, Z, W, -1, 4),
    (Y, W, Y, W, -1, 4),
];
const CASE2_CURVATURE: &[CurvatureEntry] = &[
    (X, Y, X, Y, 1, 1),
    (Y, Z, Z, Y, -1, 1),
    (X, Y, Y, X, -1, 1),
    (X, Z, Z, X, -1, 1),
    (X, Z, X, Z, 1, 1),
    (Y, Z, Y, Z, 1, 1),
];

/// Sign that every flag curvature of a Berwald Randers metric must have.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignClass {
    Zero,
    NonNegative,
    NonPositive,
}

impl SignClass {
    pub fn admits(self, k: &Scalar, engine: &Engine) -> bool {
        match self {
            SignClass::Zero => engine.is_zero(k),
            SignClass::NonNegative => !engine.is_negative(k),
            SignClass::NonPositive => !engine.is_positive(k),
        }
    }
}

impl fmt::Display for SignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignClass::Zero => "zero",
            SignClass::NonNegative => "non-negative",
            SignClass::NonPositive => "non-positive",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpectedData {
    pub connection: Connection,
    /// `None` where no curvature table is recorded.
    pub curvature: Option<CurvatureOperator>,
    pub parallel_basis: Vec<Vector>,
    /// Whether a non-Riemannian Berwald Randers metric exists.
    pub berwald: bool,
    pub flag_sign: Option<SignClass>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub name: String,
    pub algebra: LieAlgebra,
    pub metric: InnerProduct,
    pub expected: ExpectedData,
}

fn algebra_from(entries: &[Entry]) -> LieAlgebra {
    entries.iter().fold(LieAlgebra::abelian(4, xyzw()), |alg, &(i, j, k, num, den)| {
        let mut v = Vector::zeros(4);
        v.add_scaled(&Scalar::ratio(num, den), &Vector::basis(4, k));
        alg.with_bracket(i, j, &v)
    })
}

fn connection_from(entries: &[Entry]) -> Connection {
    let entries: Vec<_> =
        entries.iter().map(|&(i, j, k, num, den)| (i, j, k, Scalar::ratio(num, den))).collect();
    Connection::from_entries(4, &entries)
}

fn curvature_from(entries: &[CurvatureEntry]) -> CurvatureOperator {
    entries.iter().fold(CurvatureOperator::zero(4), |r, &(i, j, k, l, num, den)| {
        let mut v = Vector::zeros(4);
        v.add_scaled(&Scalar::ratio(num, den), &Vector::basis(4, l));
        r.with_entry(i, j, k, &v)
    })
}

pub fn get(name: &str, engine: &Engine) -> Result<CatalogEntry> {
    let (algebra, expected) = match name {
        "abelian" => (
            LieAlgebra::abelian(4, xyzw()),
            ExpectedData {
                connection: Connection::zero(4),
                curvature: Some(CurvatureOperator::zero(4)),
                parallel_basis: (0..4).map(|i| Vector::basis(4, i)).collect(),
                berwald: true,
                flag_sign: Some(SignClass::Zero),
            },
        ),
        "case1" => (
            algebra_from(CASE1_BRACKETS),
            ExpectedData {
                connection: connection_from(CASE1_CONNECTION),
                curvature: Some(curvature_from(CASE1_CURVATURE)),
                parallel_basis: vec![Vector::basis(4, X)],
                berwald: true,
                flag_sign: Some(SignClass::NonNegative),
            },
        ),
        "case2" => (
            algebra_from(CASE2_BRACKETS),
            ExpectedData {
                connection: connection_from(CASE2_CONNECTION),
                curvature: Some(curvature_from(CASE2_CURVATURE)),
                parallel_basis: vec![Vector::basis(4, W)],
                berwald: true,
                flag_sign: Some(SignClass::NonPositive),
            },
        ),
        "case3" => (
            algebra_from(CASE3_BRACKETS),
            ExpectedData {
                connection: connection_from(CASE3_CONNECTION),
                curvature: None,
                parallel_basis: vec![],
                berwald: false,
                flag_sign: None,
            },
        ),
        "case4" => (
            algebra_from(CASE4_BRACKETS),
            ExpectedData {
                connection: connection_from(CASE4_CONNECTION),
                curvature: None,
                parallel_basis: vec![],
                berwald: false,
                flag_sign: None,
            },
        ),
        other => return Err(Error::UnknownCase(other.to_string())),
    };
    let expected = ExpectedData {
        connection: expected.connection.cast(engine),
        curvature: expected.curvature.map(|c| c.cast(engine)),
        parallel_basis: expected.parallel_basis.iter().map(|v| v.cast(engine)).collect(),
        ..expected
    };
    Ok(CatalogEntry {
        name: name.to_string(),
        algebra: algebra.cast(engine),
        metric: InnerProduct::identity(4, engine),
        expected,
    })
}

pub fn all(engine: &Engine) -> Vec<CatalogEntry> {
    CASE_NAMES.iter().map(|n| get(n, engine).expect("known case")).collect()
}

/// `q` times the first parallel field, normalized in `g`. `None` when no
/// nonzero parallel field exists.
pub fn parallel_drift(g: &InnerProduct, conn: &Connection, q: &Scalar, engine: &Engine) -> Option<Vector> {
    let basis = parallel_fields(conn, engine);
    let p = basis.first()?;
    let norm = g.norm_squared(p).expect("dimensions agree").sqrt();
    Some(p.scale(&(q / norm)))
}

const SIGN_SAMPLES: usize = 32;
const SIGN_SEED: u64 = 0x5eed;

/// Recomputes connection, curvature, parallel fields, Berwald verdict and
/// flag-curvature sign for one entry and lists every disagreement.
pub fn verify_entry(entry: &CatalogEntry, engine: &Engine) -> ValidationReport {
    let mut report = ValidationReport::new();
    let name = &entry.name;
    let alg = &entry.algebra;
    let n = alg.dim();
    for issue in alg.validate(engine).issues {
        report.push(format!("{name} {}", issue.check), &issue.indices, issue.detail);
    }
    let conn = match levi_civita(alg, &entry.metric, engine) {
        Ok(c) => c,
        Err(e) => {
            report.push(format!("{name} connection"), &[], e.to_string());
            return report;
        }
    };
    let expected = &entry.expected;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (want, got) = (expected.connection.get(i, j, k), conn.get(i, j, k));
                if !engine.approx_eq(want, got) {
                    report.push(
                        format!("{name} connection"),
                        &[i, j, k],
                        format!("expected {want}, computed {got}"),
                    );
                }
            }
        }
    }
    if let Some(want_r) = &expected.curvature {
        let r = curvature_table(&conn, alg).expect("dimensions agree");
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let (want, got) = (want_r.get(i, j, k, l), r.get(i, j, k, l));
                        if !engine.approx_eq(want, got) {
                            report.push(
                                format!("{name} curvature"),
                                &[i, j, k, l],
                                format!("expected {want}, computed {got}"),
                            );
                        }
                    }
                }
            }
        }
    }
    let parallel = parallel_fields(&conn, engine);
    let same_basis = parallel.len() == expected.parallel_basis.len()
        && parallel.iter().zip(&expected.parallel_basis).all(|(a, b)| (a - b).is_zero(engine));
    if !same_basis {
        let show = |vs: &[Vector]| {
            vs.iter().map(|v| v.display_with(alg.basis_names()).to_string()).collect::<Vec<_>>().join(", ")
        };
        report.push(
            format!("{name} parallel fields"),
            &[],
            format!("expected {{{}}}, computed {{{}}}", show(&expected.parallel_basis), show(&parallel)),
        );
    }
    let berwald = !parallel.is_empty();
    if berwald != expected.berwald {
        report.push(
            format!("{name} berwald"),
            &[],
            format!("expected {}, computed {berwald}", expected.berwald),
        );
    }
    if let Some(sign) = expected.flag_sign {
        check_flag_sign(entry, &conn, sign, engine, &mut report);
    }
    report
}

fn check_flag_sign(entry: &CatalogEntry, conn: &Connection, sign: SignClass, engine: &Engine, report: &mut ValidationReport) {
    let mut rng = ChaCha8Rng::seed_from_u64(SIGN_SEED);
    let g = &entry.metric;
    for s in 0..SIGN_SAMPLES {
        let q = sample::drift_coefficient(&mut rng, engine);
        let (pole, transverse) = sample::unit_pole_flag(&mut rng, g, engine);
        let outcome = parallel_drift(g, conn, &q, engine)
            .ok_or(Error::NotBerwald)
            .and_then(|d| RandersMetric::build(g.clone(), d))
            .and_then(|f| {
                let flag = Flag::new(pole, transverse, engine)?;
                f.flag_curvature(&entry.algebra, conn, &flag, engine)
            });
        match outcome {
            Ok(k) if sign.admits(&k, engine) => {}
            Ok(k) => report.push(
                format!("{} flag curvature sign", entry.name),
                &[s],
                format!("expected {sign}, computed K = {k}"),
            ),
            Err(e) => report.push(format!("{} flag curvature", entry.name), &[s], e.to_string()),
        }
    }
}

/// Runs [`verify_entry`] over the whole catalog.
pub fn verify_all(engine: &Engine) -> ValidationReport {
    let mut report = ValidationReport::new();
    for entry in all(engine) {
        report.extend(verify_entry(&entry, engine));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_case() {
        assert!(matches!(get("case5", &Engine::exact()), Err(Error::UnknownCase(n)) if n == "case5"));
    }

    #[test]
    fn brackets_as_listed() {
        let e = Engine::exact();
        let c1 = get("case1", &e).unwrap().algebra;
        assert_eq!(c1.bracket_basis(Y, Z), Vector::basis(4, W));
        assert_eq!(c1.bracket_basis(Z, W), Vector::basis(4, Y));
        assert_eq!(c1.bracket_basis(W, Y), Vector::basis(4, Z));
        assert!((0..4).all(|j| c1.bracket_basis(X, j).is_zero(&e)));

        let c2 = get("case2", &e).unwrap().algebra;
        assert_eq!(c2.bracket_basis(X, Z), Vector::basis(4, X));
        assert_eq!(c2.bracket_basis(Y, Z), Vector::basis(4, Y));
        assert_eq!(c2.bracket_basis(X, W), Vector::basis(4, Y));
        assert_eq!(c2.bracket_basis(Y, W), Vector::from_ints(&[-1, 0, 0, 0]));

        assert!(get("abelian", &e).unwrap().algebra.is_abelian(&e));
    }

    #[test]
    fn corrupted_fixture_is_named() {
        let e = Engine::exact();
        let mut entry = get("case1", &e).unwrap();
        entry.expected.connection.set(Y, Z, W, Scalar::ratio(1, 3));
        let report = verify_entry(&entry, &e);
        assert_eq!(report.len(), 1, "{report}");
        let issue = &report.issues[0];
        assert_eq!(issue.check, "case1 connection");
        assert_eq!(issue.indices, vec![Y, Z, W]);
        assert_eq!(issue.to_string(), "case1 connection at (1, 2, 3): expected 1/3, computed 1/2");
    }
}
