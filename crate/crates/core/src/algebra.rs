//! Finite-dimensional real Lie algebras given by structure constants.
//!
//! `c[i][j][k]` is the coefficient of `e_k` in `[e_i, e_j]`. Constants are
//! stored densely; the algebras of interest have dimension four.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::ValidationReport;
use crate::scalar::{Engine, Scalar};

/// Coordinates of a left-invariant vector field in the algebra basis.
/// Serializes as a list of number strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector {
    coords: Vec<Scalar>,
}

impl Vector {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Vector { coords }
    }

    pub fn zeros(dim: usize) -> Self {
        Vector { coords: vec![Scalar::zero(); dim] }
    }

    /// The basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Vector::zeros(dim);
        v.coords[index] = Scalar::one();
        v
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Vector::new(values.iter().map(|&n| Scalar::int(n)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn get(&self, i: usize) -> &Scalar {
        &self.coords[i]
    }

    pub fn scale(&self, s: &Scalar) -> Vector {
        Vector::new(self.coords.iter().map(|c| c * s).collect())
    }

    /// Adds `s * other` in place.
    pub fn add_scaled(&mut self, s: &Scalar, other: &Vector) {
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a = &*a + &(s * b);
        }
    }

    pub fn is_zero(&self, engine: &Engine) -> bool {
        self.coords.iter().all(|c| engine.is_zero(c))
    }

    pub fn cast(&self, engine: &Engine) -> Vector {
        Vector::new(self.coords.iter().map(|c| engine.cast(c)).collect())
    }

    pub fn is_exact(&self) -> bool {
        self.coords.iter().all(Scalar::is_exact)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(Scalar::to_f64).collect()
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: dim, found: self.dim() })
        }
    }

    /// Renders as a combination of basis names, e.g. `1/2 W - Z`.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        Combination { vector: self, names }
    }
}

struct Combination<'a> {
    vector: &'a Vector,
    names: &'a [String],
}

impl fmt::Display for Combination<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, name) in self.vector.coords.iter().zip(self.names) {
            if c.is_exact_zero() {
                continue;
            }
            let negative = c < &Scalar::zero();
            let magnitude = c.abs();
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            if magnitude == Scalar::one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{magnitude} {name}")?;
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        Vector::new(self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        Vector::new(self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector::new(self.coords.iter().map(|a| -a).collect())
    }
}

impl From<Vec<Scalar>> for Vector {
    fn from(coords: Vec<Scalar>) -> Self {
        Vector::new(coords)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    c: Vec<Scalar>,
    basis_names: Vec<String>,
}

impl LieAlgebra {
    /// The abelian algebra of the given dimension.
    pub fn abelian(dim: usize, basis_names: Vec<String>) -> Self {
        assert!(dim > 0, "dimension must be positive");
        assert_eq!(basis_names.len(), dim, "one basis name per dimension");
        LieAlgebra { dim, c: vec![Scalar::zero(); dim * dim * dim], basis_names }
    }

    /// Raw constants in `c[i][j][k]` order, without antisymmetric completion.
    pub fn from_constants(dim: usize, basis_names: Vec<String>, c: Vec<Scalar>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parse("dimension must be positive".into()));
        }
        if c.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim * dim, found: c.len() });
        }
        if basis_names.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: basis_names.len() });
        }
        Ok(LieAlgebra { dim, c, basis_names })
    }

    /// Sets `[e_i, e_j] = value` and `[e_j, e_i] = -value`.
    pub fn with_bracket(mut self, i: usize, j: usize, value: &Vector) -> Self {
        assert_eq!(value.dim(), self.dim);
        for k in 0..self.dim {
            let idx = self.index(i, j, k);
            self.c[idx] = value.get(k).clone();
            let idx = self.index(j, i, k);
            self.c[idx] = -value.get(k);
        }
        self
    }

    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.basis_names.iter().position(|n| n == name)
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[self.index(i, j, k)]
    }

    /// `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        let start = self.index(i, j, 0);
        Vector::new(self.c[start..start + self.dim].to_vec())
    }

    pub fn bracket(&self, u: &Vector, v: &Vector) -> Result<Vector> {
        u.check_dim(self.dim)?;
        v.check_dim(self.dim)?;
        let mut out = Vector::zeros(self.dim);
        for i in 0..self.dim {
            if u.get(i).is_exact_zero() {
                continue;
            }
            for j in 0..self.dim {
                if v.get(j).is_exact_zero() {
                    continue;
                }
                let coeff = u.get(i) * v.get(j);
                out.add_scaled(&coeff, &self.bracket_basis(i, j));
            }
        }
        Ok(out)
    }

    pub fn is_abelian(&self, engine: &Engine) -> bool {
        self.c.iter().all(|x| engine.is_zero(x))
    }

    /// Antisymmetry and Jacobi checks. Violations are reported, not raised.
    pub fn validate(&self, engine: &Engine) -> ValidationReport {
        let n = self.dim;
        let mut report = ValidationReport::new();
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let sum = self.structure_constant(i, j, k) + self.structure_constant(j, i, k);
                    if !engine.is_zero(&sum) {
                        report.push(
                            "antisymmetry",
                            &[i, j, k],
                            format!("c[i][j][k] + c[j][i][k] = {sum}"),
                        );
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let jacobi = self.jacobiator(i, j, k);
                    for (l, x) in jacobi.coords().iter().enumerate() {
                        if !engine.is_zero(x) {
                            report.push(
                                "jacobi",
                                &[i, j, k],
                                format!("component {l} of the cyclic sum is {x}"),
                            );
                        }
                    }
                }
            }
        }
        report
    }

    /// `[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]`.
    fn jacobiator(&self, i: usize, j: usize, k: usize) -> Vector {
        let e = |m| Vector::basis(self.dim, m);
        let term = |a, b, c| {
            self.bracket(&self.bracket_basis(a, b), &e(c)).expect("basis vectors conform")
        };
        let s = &term(i, j, k) + &term(j, k, i);
        &s + &term(k, i, j)
    }

    pub fn cast(&self, engine: &Engine) -> LieAlgebra {
        LieAlgebra {
            dim: self.dim,
            c: self.c.iter().map(|x| engine.cast(x)).collect(),
            basis_names: self.basis_names.clone(),
        }
    }

    pub fn to_doc(&self) -> AlgebraDoc {
        let mut brackets = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let coeffs: BTreeMap<usize, String> = (0..self.dim)
                    .filter(|&k| !self.structure_constant(i, j, k).is_exact_zero())
                    .map(|k| (k, self.structure_constant(i, j, k).to_string()))
                    .collect();
                if !coeffs.is_empty() {
                    brackets.push(BracketDoc { i, j, coeffs });
                }
            }
        }
        AlgebraDoc { dim: self.dim, basis: self.basis_names.clone(), brackets }
    }

    pub fn from_doc(doc: &AlgebraDoc, engine: &Engine) -> Result<Self> {
        let dim = doc.dim;
        if dim == 0 {
            return Err(Error::Parse("dimension must be positive".into()));
        }
        let names = if doc.basis.is_empty() {
            (1..=dim).map(|i| format!("e{i}")).collect()
        } else if doc.basis.len() == dim {
            doc.basis.clone()
        } else {
            return Err(Error::DimensionMismatch { expected: dim, found: doc.basis.len() });
        };
        let mut alg = LieAlgebra::abelian(dim, names);
        for b in &doc.brackets {
            if b.i >= b.j || b.j >= dim {
                return Err(Error::Parse(format!(
                    "bracket entries need 0 <= i < j < dim, got i={} j={}",
                    b.i, b.j
                )));
            }
            let mut value = Vector::zeros(dim);
            for (&k, text) in &b.coeffs {
                if k >= dim {
                    return Err(Error::Parse(format!("coefficient index {k} out of range")));
                }
                value.coords[k] = engine.parse(text)?;
            }
            alg = alg.with_bracket(b.i, b.j, &value);
        }
        Ok(alg.cast(engine))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("algebra document serializes")
    }

    pub fn from_json(text: &str, engine: &Engine) -> Result<Self> {
        let doc: AlgebraDoc = serde_json::from_str(text)?;
        Self::from_doc(&doc, engine)
    }
}

/// On-disk form: only `i < j` brackets are stored, zero coefficients omitted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub dim: usize,
    #[serde(default)]
    pub basis: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketDoc {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<usize, String>,
}

/// The conventional labels `X, Y, Z, W`.
pub fn xyzw() -> Vec<String> {
    ["X", "Y", "Z", "W"].iter().map(|s| s.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn su2_plus_r() -> LieAlgebra {
        LieAlgebra::abelian(4, xyzw())
            .with_bracket(1, 2, &Vector::basis(4, 3))
            .with_bracket(2, 3, &Vector::basis(4, 1))
            .with_bracket(3, 1, &Vector::basis(4, 2))
    }

    #[test]
    fn bracket_of_basis_vectors() {
        let alg = su2_plus_r();
        let w = alg.bracket(&Vector::basis(4, 1), &Vector::basis(4, 2)).unwrap();
        assert_eq!(w, Vector::basis(4, 3));
        let z = alg.bracket(&Vector::basis(4, 3), &Vector::basis(4, 1)).unwrap();
        assert_eq!(z, Vector::basis(4, 2));
    }

    #[test]
    fn bracket_rejects_wrong_length() {
        let alg = su2_plus_r();
        let err = alg.bracket(&Vector::zeros(3), &Vector::zeros(4)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 4, found: 3 }));
    }

    #[test]
    fn self_bracket_vanishes() {
        let alg = su2_plus_r();
        let u = Vector::from_ints(&[3, -1, 4, 1]);
        assert_eq!(alg.bracket(&u, &u).unwrap(), Vector::zeros(4));
    }

    #[test]
    fn jacobi_failure_is_reported() {
        // [X,Y] = X, [X,Z] = Y: the cyclic sum on (X,Y,Z) is Y.
        let alg = LieAlgebra::abelian(4, xyzw())
            .with_bracket(0, 1, &Vector::basis(4, 0))
            .with_bracket(0, 2, &Vector::basis(4, 1));
        let report = alg.validate(&Engine::exact());
        assert_eq!(report.len(), 1);
        assert_eq!(report.issues[0].check, "jacobi");
        assert_eq!(report.issues[0].indices, vec![0, 1, 2]);
    }

    #[test]
    fn display_combination() {
        let names = xyzw();
        let v = Vector::new(vec![Scalar::zero(), Scalar::int(-1), Scalar::ratio(1, 2), Scalar::one()]);
        assert_eq!(v.display_with(&names).to_string(), "-Y + 1/2 Z + W");
        assert_eq!(Vector::zeros(4).display_with(&names).to_string(), "0");
        let w = Vector::new(vec![Scalar::ratio(-1, 4), Scalar::zero(), Scalar::zero(), Scalar::zero()]);
        assert_eq!(w.display_with(&names).to_string(), "-1/4 X");
    }

    #[test]
    fn json_round_trip() {
        let alg = su2_plus_r().with_bracket(0, 1, &Vector::basis(4, 0).scale(&Scalar::ratio(1, 2)));
        let text = alg.to_json();
        assert!(text.contains("\"1/2\""));
        let back = LieAlgebra::from_json(&text, &Engine::exact()).unwrap();
        assert_eq!(back, alg);
    }

    #[test]
    fn json_rejects_lower_triangle_entries() {
        let text = r#"{"dim": 2, "basis": ["A","B"], "brackets": [{"i": 1, "j": 0, "coeffs": {"0": "1"}}]}"#;
        assert!(matches!(LieAlgebra::from_json(text, &Engine::exact()), Err(Error::Parse(_))));
    }
}
