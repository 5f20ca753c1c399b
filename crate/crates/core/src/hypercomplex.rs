//! Checks for left-invariant hypercomplex structures and hyper-Hermitian
//! metrics. Structures are supplied by the caller; nothing here constructs
//! them beyond the standard quaternionic triple used as a fixture.

use serde::{Deserialize, Serialize};

use crate::algebra::{LieAlgebra, Vector};
use crate::error::{Error, Result};
use crate::geometry::InnerProduct;
use crate::linalg::Matrix;
use crate::report::ValidationReport;
use crate::scalar::Engine;

/// A linear map on the algebra, acting on coordinate columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Endomorphism {
    matrix: Matrix,
}

impl Endomorphism {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.rows(), found: matrix.cols() });
        }
        Ok(Endomorphism { matrix })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        self.matrix.apply(v)
    }

    pub fn compose(&self, other: &Endomorphism) -> Endomorphism {
        Endomorphism { matrix: self.matrix.mul(&other.matrix).expect("square maps of equal size") }
    }

    pub fn cast(&self, engine: &Engine) -> Endomorphism {
        Endomorphism { matrix: self.matrix.cast(engine) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypercomplexTriple {
    pub j1: Endomorphism,
    pub j2: Endomorphism,
    pub j3: Endomorphism,
}

impl HypercomplexTriple {
    pub fn new(j1: Endomorphism, j2: Endomorphism, j3: Endomorphism) -> Result<Self> {
        let n = j1.dim();
        for j in [&j2, &j3] {
            if j.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: j.dim() });
            }
        }
        Ok(HypercomplexTriple { j1, j2, j3 })
    }

    pub fn members(&self) -> [&Endomorphism; 3] {
        [&self.j1, &self.j2, &self.j3]
    }

    pub fn cast(&self, engine: &Engine) -> Self {
        HypercomplexTriple { j1: self.j1.cast(engine), j2: self.j2.cast(engine), j3: self.j3.cast(engine) }
    }

    pub fn from_json(text: &str, engine: &Engine) -> Result<Self> {
        let doc: TripleDoc = serde_json::from_str(text)?;
        let load = |rows: &Vec<Vec<String>>| -> Result<Endomorphism> {
            let rows = rows
                .iter()
                .map(|r| r.iter().map(|s| engine.parse(s)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            Endomorphism::new(Matrix::from_rows(rows)?)
        };
        HypercomplexTriple::new(load(&doc.j1)?, load(&doc.j2)?, load(&doc.j3)?)
    }

    pub fn to_json(&self) -> String {
        let dump = |j: &Endomorphism| -> Vec<Vec<String>> {
            j.matrix.to_rows().iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect()
        };
        let doc = TripleDoc { j1: dump(&self.j1), j2: dump(&self.j2), j3: dump(&self.j3) };
        serde_json::to_string_pretty(&doc).expect("triple document serializes")
    }
}

/// `{"j1": [[...]], "j2": [[...]], "j3": [[...]]}`, rational-string entries.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TripleDoc {
    pub j1: Vec<Vec<String>>,
    pub j2: Vec<Vec<String>>,
    pub j3: Vec<Vec<String>>,
}

/// Left multiplication by `i`, `j`, `k` on quaternion coordinates
/// `(1, i, j, k)`, i.e. on the basis `(X, Y, Z, W)`.
pub fn quaternionic_triple(engine: &Engine) -> HypercomplexTriple {
    let li = Matrix::from_ints(&[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, -1], &[0, 0, 1, 0]]);
    let lj = Matrix::from_ints(&[&[0, 0, -1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, -1, 0, 0]]);
    let lk = Matrix::from_ints(&[&[0, 0, 0, -1], &[0, 0, -1, 0], &[0, 1, 0, 0], &[1, 0, 0, 0]]);
    let j = |m: Result<Matrix>| Endomorphism::new(m.expect("literal matrix").cast(engine)).expect("square");
    HypercomplexTriple { j1: j(li), j2: j(lj), j3: j(lk) }
}

/// `N(u,v) = [Ju,Jv] − [u,v] − J([u,Jv] + [Ju,v])`.
pub fn nijenhuis(alg: &LieAlgebra, j: &Endomorphism, u: &Vector, v: &Vector) -> Result<Vector> {
    if j.dim() != alg.dim() {
        return Err(Error::DimensionMismatch { expected: alg.dim(), found: j.dim() });
    }
    let ju = j.apply(u)?;
    let jv = j.apply(v)?;
    let mixed = &alg.bracket(u, &jv)? + &alg.bracket(&ju, v)?;
    let out = &alg.bracket(&ju, &jv)? - &alg.bracket(u, v)?;
    Ok(&out - &j.apply(&mixed)?)
}

fn matrix_mismatches(
    report: &mut ValidationReport,
    check: &str,
    lhs: &Matrix,
    rhs: &Matrix,
    prefix: &[usize],
    engine: &Engine,
) {
    for a in 0..lhs.rows() {
        for b in 0..lhs.cols() {
            let (x, y) = (lhs.get(a, b), rhs.get(a, b));
            if !engine.approx_eq(x, y) {
                let mut idx = prefix.to_vec();
                idx.extend([a, b]);
                report.push(check, &idx, format!("{x} != {y}"));
            }
        }
    }
}

/// Quaternion relations, `J_i² = −Id`, and `N_i(e_a, e_b) = 0` on all
/// basis pairs. Quaternion products are indexed by the `(p, q)` of
/// `J_p J_q`, counting from 1.
pub fn verify_triple(alg: &LieAlgebra, t: &HypercomplexTriple, engine: &Engine) -> ValidationReport {
    let mut report = ValidationReport::new();
    let n = alg.dim();
    if t.members().iter().any(|j| j.dim() != n) {
        report.push("dimension", &[], format!("endomorphisms must be {n}x{n}"));
        return report;
    }
    let js = t.members();
    // J_p J_q = sign * J_r for each ordered pair of distinct indices.
    let products: [(usize, usize, i64, usize); 6] =
        [(0, 1, 1, 2), (1, 0, -1, 2), (1, 2, 1, 0), (2, 1, -1, 0), (2, 0, 1, 1), (0, 2, -1, 1)];
    for (p, q, sign, r) in products {
        let lhs = js[p].compose(js[q]).matrix;
        let rhs = js[r].matrix.scale(&engine.int(sign));
        matrix_mismatches(&mut report, "quaternion relation", &lhs, &rhs, &[p + 1, q + 1], engine);
    }
    let minus_id = Matrix::identity(n).neg();
    for (i, j) in js.iter().enumerate() {
        let sq = j.compose(j).matrix;
        matrix_mismatches(&mut report, "square is -Id", &sq, &minus_id, &[i + 1], engine);
    }
    for (i, j) in js.iter().enumerate() {
        for a in 0..n {
            for b in a + 1..n {
                let value = nijenhuis(alg, j, &Vector::basis(n, a), &Vector::basis(n, b))
                    .expect("dimensions checked above");
                if !value.is_zero(engine) {
                    report.push(
                        "nijenhuis",
                        &[i + 1, a, b],
                        format!("N = {}", value.display_with(alg.basis_names())),
                    );
                }
            }
        }
    }
    report
}

/// `J_iᵀ G J_i = G` for each member of the triple.
pub fn is_hyper_hermitian(g: &InnerProduct, t: &HypercomplexTriple, engine: &Engine) -> ValidationReport {
    let mut report = ValidationReport::new();
    let gram = g.gram();
    for (i, j) in t.members().iter().enumerate() {
        if j.dim() != g.dim() {
            report.push("dimension", &[i + 1], "endomorphism does not match the metric");
            continue;
        }
        let pulled = j.matrix.transpose().mul(gram).and_then(|m| m.mul(&j.matrix)).expect("square");
        matrix_mismatches(&mut report, "hyper-hermitian", &pulled, gram, &[i + 1], engine);
    }
    report
}
