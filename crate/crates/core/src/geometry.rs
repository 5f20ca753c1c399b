//! Levi-Civita connection, curvature and parallel fields of a left-invariant
//! metric, all computed on the Lie algebra.
//!
//! Curvature follows `R(u,v)w = ∇_u∇_v w − ∇_v∇_u w − ∇_[u,v] w`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algebra::{LieAlgebra, Vector};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Engine, Scalar};

/// Left-invariant metric, i.e. its Gram matrix `g(e_i, e_j)` on the algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct InnerProduct {
    gram: Matrix,
}

impl InnerProduct {
    pub fn new(gram: Matrix, engine: &Engine) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch { expected: gram.rows(), found: gram.cols() });
        }
        if !gram.is_positive_definite(engine) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(InnerProduct { gram: gram.cast(engine) })
    }

    pub fn identity(dim: usize, engine: &Engine) -> Self {
        InnerProduct { gram: Matrix::identity(dim).cast(engine) }
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn inner(&self, u: &Vector, v: &Vector) -> Result<Scalar> {
        u.check_dim(self.dim())?;
        v.check_dim(self.dim())?;
        let gv = self.gram.apply(v)?;
        Ok(u.coords().iter().zip(gv.coords()).map(|(a, b)| a * b).sum())
    }

    pub fn norm_squared(&self, u: &Vector) -> Result<Scalar> {
        self.inner(u, u)
    }

    /// Gram-Schmidt on `(u, v)`. Exact only while the norms are rational.
    pub fn orthonormalize_pair(&self, u: &Vector, v: &Vector, engine: &Engine) -> Result<(Vector, Vector)> {
        let uu = self.norm_squared(u)?;
        if engine.is_zero(&uu) {
            return Err(Error::DegenerateFlag);
        }
        let e1 = u.scale(&(Scalar::one() / uu.sqrt()));
        let mut w = v.clone();
        w.add_scaled(&-self.inner(&e1, v)?, &e1);
        let ww = self.norm_squared(&w)?;
        if engine.is_zero(&ww) {
            return Err(Error::DegenerateFlag);
        }
        let e2 = w.scale(&(Scalar::one() / ww.sqrt()));
        Ok((e1, e2))
    }

    pub fn to_json(&self) -> String {
        let doc = MetricDoc {
            gram: self.gram.to_rows().iter().map(|r| r.iter().map(Scalar::to_string).collect()).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("metric document serializes")
    }

    pub fn from_json(text: &str, engine: &Engine) -> Result<Self> {
        let doc: MetricDoc = serde_json::from_str(text)?;
        let rows = doc
            .gram
            .iter()
            .map(|r| r.iter().map(|s| engine.parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        InnerProduct::new(Matrix::from_rows(rows)?, engine)
    }
}

/// `{"gram": [["1","0"],["0","1"]]}` with rational-string entries.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MetricDoc {
    pub gram: Vec<Vec<String>>,
}

/// Christoffel symbols: `∇_{e_i} e_j = Σ_k gamma[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    dim: usize,
    gamma: Vec<Scalar>,
}

impl Connection {
    pub fn zero(dim: usize) -> Self {
        Connection { dim, gamma: vec![Scalar::zero(); dim * dim * dim] }
    }

    /// Builds from sparse `(i, j, k, value)` entries; unlisted entries are 0.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, usize, Scalar)]) -> Self {
        let mut c = Connection::zero(dim);
        for (i, j, k, v) in entries {
            c.set(*i, *j, *k, v.clone());
        }
        c
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.gamma[(i * self.dim + j) * self.dim + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Scalar) {
        let idx = (i * self.dim + j) * self.dim + k;
        self.gamma[idx] = value;
    }

    /// `∇_{e_i} e_j`.
    pub fn basis_derivative(&self, i: usize, j: usize) -> Vector {
        let start = (i * self.dim + j) * self.dim;
        Vector::new(self.gamma[start..start + self.dim].to_vec())
    }

    pub fn cast(&self, engine: &Engine) -> Connection {
        Connection { dim: self.dim, gamma: self.gamma.iter().map(|x| engine.cast(x)).collect() }
    }

    pub fn approx_eq(&self, other: &Connection, engine: &Engine) -> bool {
        self.dim == other.dim && self.gamma.iter().zip(&other.gamma).all(|(a, b)| engine.approx_eq(a, b))
    }

    pub fn to_json(&self, names: &[String]) -> String {
        let mut gamma: BTreeMap<usize, BTreeMap<usize, BTreeMap<usize, String>>> = BTreeMap::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let v = self.get(i, j, k);
                    if !v.is_exact_zero() {
                        gamma.entry(i).or_default().entry(j).or_default().insert(k, v.to_string());
                    }
                }
            }
        }
        let doc = ConnectionDoc { dim: self.dim, basis: names.to_vec(), gamma };
        serde_json::to_string_pretty(&doc).expect("connection document serializes")
    }

    pub fn from_json(text: &str, engine: &Engine) -> Result<Self> {
        let doc: ConnectionDoc = serde_json::from_str(text)?;
        let mut c = Connection::zero(doc.dim);
        for (&i, row) in &doc.gamma {
            for (&j, entries) in row {
                for (&k, v) in entries {
                    if i.max(j).max(k) >= doc.dim {
                        return Err(Error::Parse(format!("index ({i}, {j}, {k}) out of range")));
                    }
                    c.set(i, j, k, engine.parse(v)?);
                }
            }
        }
        Ok(c)
    }

    /// Markdown table: one row per `∇_{e_i}`, cells such as `∇_Y Z = 1/2 W`.
    pub fn to_markdown(&self, names: &[String]) -> String {
        let mut out = String::new();
        let _ = write!(out, "| ∇ |");
        for n in names {
            let _ = write!(out, " {n} |");
        }
        out.push('\n');
        out.push_str("|---|");
        out.push_str(&"---|".repeat(self.dim));
        out.push('\n');
        for i in 0..self.dim {
            let _ = write!(out, "| ∇_{} |", names[i]);
            for j in 0..self.dim {
                let value = self.basis_derivative(i, j);
                let _ = write!(out, " ∇_{} {} = {} |", names[i], names[j], value.display_with(names));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConnectionDoc {
    pub dim: usize,
    #[serde(default)]
    pub basis: Vec<String>,
    pub gamma: BTreeMap<usize, BTreeMap<usize, BTreeMap<usize, String>>>,
}

/// `R(e_i,e_j)e_k = Σ_l r[i][j][k][l] e_l`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureOperator {
    dim: usize,
    r: Vec<Scalar>,
}

impl CurvatureOperator {
    pub fn zero(dim: usize) -> Self {
        CurvatureOperator { dim, r: vec![Scalar::zero(); dim.pow(4)] }
    }

    /// Sets `R(e_i,e_j)e_k = value` together with `R(e_j,e_i)e_k = -value`.
    pub fn with_entry(mut self, i: usize, j: usize, k: usize, value: &Vector) -> Self {
        for l in 0..self.dim {
            self.set(i, j, k, l, value.get(l).clone());
            self.set(j, i, k, l, -value.get(l));
        }
        self
    }

    fn index(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.dim + j) * self.dim + k) * self.dim + l
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &Scalar {
        &self.r[self.index(i, j, k, l)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, value: Scalar) {
        let idx = self.index(i, j, k, l);
        self.r[idx] = value;
    }

    /// `R(e_i,e_j)e_k`.
    pub fn basis_value(&self, i: usize, j: usize, k: usize) -> Vector {
        let start = self.index(i, j, k, 0);
        Vector::new(self.r[start..start + self.dim].to_vec())
    }

    /// Trilinear contraction `R(u,v)w`.
    pub fn contract(&self, u: &Vector, v: &Vector, w: &Vector) -> Result<Vector> {
        for x in [u, v, w] {
            x.check_dim(self.dim)?;
        }
        let mut out = Vector::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let uv = u.get(i) * v.get(j);
                if uv.is_exact_zero() {
                    continue;
                }
                for k in 0..self.dim {
                    let c = &uv * w.get(k);
                    if !c.is_exact_zero() {
                        out.add_scaled(&c, &self.basis_value(i, j, k));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self, engine: &Engine) -> bool {
        self.r.iter().all(|x| engine.is_zero(x))
    }

    pub fn approx_eq(&self, other: &CurvatureOperator, engine: &Engine) -> bool {
        self.dim == other.dim && self.r.iter().zip(&other.r).all(|(a, b)| engine.approx_eq(a, b))
    }

    pub fn cast(&self, engine: &Engine) -> CurvatureOperator {
        CurvatureOperator { dim: self.dim, r: self.r.iter().map(|x| engine.cast(x)).collect() }
    }

    /// Nonzero `R(e_i,e_j)e_k` with `i < j`, in index order.
    pub fn nonzero_entries(&self, engine: &Engine) -> Vec<(usize, usize, usize, Vector)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in 0..self.dim {
                    let v = self.basis_value(i, j, k);
                    if !v.is_zero(engine) {
                        out.push((i, j, k, v));
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self, names: &[String]) -> String {
        let mut r: CurvatureEntries = BTreeMap::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    for l in 0..self.dim {
                        let v = self.get(i, j, k, l);
                        if !v.is_exact_zero() {
                            r.entry(i)
                                .or_default()
                                .entry(j)
                                .or_default()
                                .entry(k)
                                .or_default()
                                .insert(l, v.to_string());
                        }
                    }
                }
            }
        }
        let doc = CurvatureDoc { dim: self.dim, basis: names.to_vec(), r };
        serde_json::to_string_pretty(&doc).expect("curvature document serializes")
    }

    pub fn from_json(text: &str, engine: &Engine) -> Result<Self> {
        let doc: CurvatureDoc = serde_json::from_str(text)?;
        let mut c = CurvatureOperator::zero(doc.dim);
        for (&i, a) in &doc.r {
            for (&j, b) in a {
                for (&k, entries) in b {
                    for (&l, v) in entries {
                        if i.max(j).max(k).max(l) >= doc.dim {
                            return Err(Error::Parse(format!("index ({i}, {j}, {k}, {l}) out of range")));
                        }
                        c.set(i, j, k, l, engine.parse(v)?);
                    }
                }
            }
        }
        Ok(c)
    }

    /// One line per nonzero `R(e_i,e_j)e_k`, `i < j`.
    pub fn to_markdown(&self, names: &[String], engine: &Engine) -> String {
        let entries = self.nonzero_entries(engine);
        if entries.is_empty() {
            return "all components zero\n".to_string();
        }
        let mut out = String::new();
        for (i, j, k, v) in entries {
            let _ = writeln!(out, "- R({},{}){} = {}", names[i], names[j], names[k], v.display_with(names));
        }
        out.push_str("\nall other components zero\n");
        out
    }
}

/// `r[i][j][k][l]`: coefficient of `e_l` in `R(e_i, e_j) e_k`.
pub type CurvatureEntries = BTreeMap<usize, BTreeMap<usize, BTreeMap<usize, BTreeMap<usize, String>>>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureDoc {
    pub dim: usize,
    #[serde(default)]
    pub basis: Vec<String>,
    pub r: CurvatureEntries,
}

fn check_metric(alg: &LieAlgebra, g: &InnerProduct) -> Result<()> {
    if alg.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: alg.dim(), found: g.dim() });
    }
    Ok(())
}

/// Koszul formula on left-invariant fields: for each `(i, j)` the values
/// `2 g(∇_{e_i}e_j, e_k) = g([e_i,e_j],e_k) − g([e_j,e_k],e_i) + g([e_k,e_i],e_j)`
/// form a right-hand side that the inverse Gram matrix turns into coordinates.
pub fn levi_civita(alg: &LieAlgebra, g: &InnerProduct, engine: &Engine) -> Result<Connection> {
    check_metric(alg, g)?;
    let n = alg.dim();
    let inverse = g.gram().inverse(engine).ok_or(Error::SingularMetric)?;
    let half = Scalar::ratio(1, 2);
    let e: Vec<Vector> = (0..n).map(|i| Vector::basis(n, i)).collect();
    let mut conn = Connection::zero(n);
    for i in 0..n {
        for j in 0..n {
            let rhs = (0..n)
                .map(|k| {
                    let a = g.inner(&alg.bracket_basis(i, j), &e[k])?;
                    let b = g.inner(&alg.bracket_basis(j, k), &e[i])?;
                    let c = g.inner(&alg.bracket_basis(k, i), &e[j])?;
                    Ok(a - b + c)
                })
                .collect::<Result<Vec<_>>>()?;
            let coords = inverse.apply(&Vector::new(rhs))?;
            for k in 0..n {
                conn.set(i, j, k, coords.get(k) * &half);
            }
        }
    }
    Ok(conn)
}

/// `∇_u v` for left-invariant `u, v`: bilinear in the coordinates.
pub fn covariant_derivative(conn: &Connection, u: &Vector, v: &Vector) -> Result<Vector> {
    let n = conn.dim();
    u.check_dim(n)?;
    v.check_dim(n)?;
    let mut out = vec![Scalar::zero(); n];
    for i in 0..n {
        if u.get(i).is_exact_zero() {
            continue;
        }
        for j in 0..n {
            let c = u.get(i) * v.get(j);
            if c.is_exact_zero() {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                let gamma = conn.get(i, j, k);
                if !gamma.is_exact_zero() {
                    *o = &*o + &(&c * gamma);
                }
            }
        }
    }
    Ok(Vector::new(out))
}

/// `R(u,v)w = ∇_u∇_v w − ∇_v∇_u w − ∇_[u,v] w`.
pub fn curvature(conn: &Connection, alg: &LieAlgebra, u: &Vector, v: &Vector, w: &Vector) -> Result<Vector> {
    let vw = covariant_derivative(conn, v, w)?;
    let uw = covariant_derivative(conn, u, w)?;
    let a = covariant_derivative(conn, u, &vw)?;
    let b = covariant_derivative(conn, v, &uw)?;
    let c = covariant_derivative(conn, &alg.bracket(u, v)?, w)?;
    Ok(&(&a - &b) - &c)
}

pub fn curvature_table(conn: &Connection, alg: &LieAlgebra) -> Result<CurvatureOperator> {
    let n = alg.dim();
    if conn.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: conn.dim() });
    }
    let e: Vec<Vector> = (0..n).map(|i| Vector::basis(n, i)).collect();
    let mut table = CurvatureOperator::zero(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = curvature(conn, alg, &e[i], &e[j], &e[k])?;
                for l in 0..n {
                    table.set(i, j, k, l, v.get(l).clone());
                }
            }
        }
    }
    Ok(table)
}

/// `g(R(v,u)u, v) / (|u|²|v|² − g(u,v)²)`.
pub fn sectional_curvature(
    g: &InnerProduct,
    conn: &Connection,
    alg: &LieAlgebra,
    u: &Vector,
    v: &Vector,
    engine: &Engine,
) -> Result<Scalar> {
    let area = g.norm_squared(u)? * g.norm_squared(v)? - g.inner(u, v)?.square();
    if engine.is_zero(&area) {
        return Err(Error::DegenerateFlag);
    }
    let r = curvature(conn, alg, v, u, u)?;
    Ok(g.inner(&r, v)? / area)
}

/// Basis of the left-invariant fields `x` with `∇_{e_i} x = 0` for every
/// `i`: the nullspace of the stacked `(dim²) × dim` system
/// `Σ_k x_k gamma[i][k][l] = 0`.
pub fn parallel_fields(conn: &Connection, engine: &Engine) -> Vec<Vector> {
    let n = conn.dim();
    let mut system = Matrix::zeros(n * n, n);
    for i in 0..n {
        for l in 0..n {
            for k in 0..n {
                system.set(i * n + l, k, conn.get(i, k, l).clone());
            }
        }
    }
    system.nullspace(engine)
}
