//! Left-invariant Randers metrics `F(y) = sqrt(g(y,y)) + g(X, y)`, the
//! Berwald test, the fundamental tensor and flag curvature.
//!
//! For a Berwald metric the Chern connection is the Levi-Civita connection
//! of `g`, so flag curvature is computed from the Riemannian curvature and
//! the fundamental tensor `g_Y`. Non-Berwald inputs are refused.

use crate::algebra::{LieAlgebra, Vector};
use crate::error::{Error, Result};
use crate::geometry::{covariant_derivative, curvature, Connection, InnerProduct};
use crate::linalg::Matrix;
use crate::scalar::{Engine, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct RandersMetric {
    g: InnerProduct,
    drift: Vector,
}

impl RandersMetric {
    /// Fails with [`Error::DriftTooLarge`] unless `g(drift, drift) < 1`.
    pub fn build(g: InnerProduct, drift: Vector) -> Result<Self> {
        drift.check_dim(g.dim())?;
        let norm_sq = g.norm_squared(&drift)?;
        if norm_sq >= Scalar::one() {
            return Err(Error::DriftTooLarge { norm: norm_sq.to_f64().sqrt() });
        }
        Ok(RandersMetric { g, drift })
    }

    /// The Riemannian metric itself, seen as a Randers metric.
    pub fn riemannian(g: InnerProduct) -> Self {
        let drift = Vector::zeros(g.dim());
        RandersMetric { g, drift }
    }

    pub fn metric(&self) -> &InnerProduct {
        &self.g
    }

    pub fn drift(&self) -> &Vector {
        &self.drift
    }

    pub fn drift_norm(&self) -> Scalar {
        self.g.norm_squared(&self.drift).expect("drift conforms").sqrt()
    }

    pub fn evaluate(&self, y: &Vector) -> Result<Scalar> {
        let alpha = self.g.norm_squared(y)?.sqrt();
        Ok(alpha + self.g.inner(&self.drift, y)?)
    }

    pub fn is_berwald(&self, conn: &Connection, engine: &Engine) -> bool {
        let n = conn.dim();
        (0..n).all(|i| {
            covariant_derivative(conn, &Vector::basis(n, i), &self.drift)
                .is_ok_and(|v| v.is_zero(engine))
        })
    }

    /// The bilinear form `g_y`, precomputed at the pole `y`.
    pub fn fundamental_form(&self, y: &Vector) -> Result<FundamentalForm<'_>> {
        y.check_dim(self.g.dim())?;
        if y.coords().iter().all(Scalar::is_exact_zero) {
            return Err(Error::ZeroPole);
        }
        let pole_low = self.g.gram().apply(y)?;
        let drift_low = self.g.gram().apply(&self.drift)?;
        let alpha = dot(&pole_low, y).sqrt();
        let f = &alpha + &dot(&drift_low, y);
        Ok(FundamentalForm { metric: self, pole_low, drift_low, alpha, f })
    }

    /// `g_y(u, v) = ½ ∂²/∂s∂t F²(y + s u + t v)` at `s = t = 0`.
    pub fn fundamental_tensor(&self, y: &Vector, u: &Vector, v: &Vector) -> Result<Scalar> {
        self.fundamental_form(y)?.apply(u, v)
    }

    /// `K(P, Y) = g_Y(R(U,Y)Y, U) / (g_Y(Y,Y) g_Y(U,U) − g_Y(Y,U)²)` with
    /// `Y` the flagpole and `U` the transverse edge.
    pub fn flag_curvature(&self, alg: &LieAlgebra, conn: &Connection, flag: &Flag, engine: &Engine) -> Result<Scalar> {
        if !self.is_berwald(conn, engine) {
            return Err(Error::NotBerwald);
        }
        let (y, u) = (flag.pole(), flag.transverse());
        let gy = self.fundamental_form(y)?;
        let r = curvature(conn, alg, u, y, y)?;
        let numerator = gy.apply(&r, u)?;
        let denominator = gy.apply(y, y)? * gy.apply(u, u)? - gy.apply(y, u)?.square();
        if engine.is_zero(&denominator) {
            return Err(Error::DegenerateFlag);
        }
        Ok(numerator / denominator)
    }
}

/// `g_y(u,v) = (F/α)[g(u,v) − g(y,u)g(y,v)/α²] + ℓ(u) ℓ(v)` where
/// `α = sqrt(g(y,y))` and `ℓ(w) = g(y,w)/α + g(X,w)`.
#[derive(Clone, Debug)]
pub struct FundamentalForm<'a> {
    metric: &'a RandersMetric,
    /// `g(y, ·)` and `g(X, ·)` as coordinate covectors.
    pole_low: Vector,
    drift_low: Vector,
    alpha: Scalar,
    f: Scalar,
}

fn dot(a: &Vector, b: &Vector) -> Scalar {
    a.coords().iter().zip(b.coords()).map(|(x, y)| x * y).sum()
}

impl FundamentalForm<'_> {
    pub fn apply(&self, u: &Vector, v: &Vector) -> Result<Scalar> {
        let g = &self.metric.g;
        let guv = g.inner(u, v)?;
        let (yu, yv) = (dot(&self.pole_low, u), dot(&self.pole_low, v));
        let ell_u = &yu / &self.alpha + dot(&self.drift_low, u);
        let ell_v = &yv / &self.alpha + dot(&self.drift_low, v);
        let angular = guv - yu * yv / self.alpha.square();
        Ok(&self.f / &self.alpha * angular + ell_u * ell_v)
    }

    pub fn is_exact(&self) -> bool {
        self.alpha.is_exact() && self.f.is_exact()
    }
}

/// A flagpole `Y` and a transverse vector `U` spanning the plane `P`.
#[derive(Clone, Debug, PartialEq)]
pub struct Flag {
    pole: Vector,
    transverse: Vector,
}

impl Flag {
    pub fn new(pole: Vector, transverse: Vector, engine: &Engine) -> Result<Self> {
        transverse.check_dim(pole.dim())?;
        if pole.is_zero(engine) {
            return Err(Error::ZeroPole);
        }
        let pair = Matrix::from_rows(vec![pole.coords().to_vec(), transverse.coords().to_vec()])?;
        if pair.rank(engine) < 2 {
            return Err(Error::DegenerateFlag);
        }
        Ok(Flag { pole, transverse })
    }

    pub fn pole(&self) -> &Vector {
        &self.pole
    }

    pub fn transverse(&self) -> &Vector {
        &self.transverse
    }
}

fn four_components(v: &Vector) -> Result<[&Scalar; 4]> {
    v.check_dim(4)?;
    let c = v.coords();
    Ok([&c[0], &c[1], &c[2], &c[3]])
}

fn minor(p: &Scalar, q: &Scalar, p_t: &Scalar, q_t: &Scalar) -> Scalar {
    (p * q_t - q * p_t).square()
}

/// Closed form for `su(2) ⊕ ℝ` with drift `qX`: for a g-orthonormal pair
/// `U = (a,b,c,d)`, `V = (ã,b̃,c̃,d̃)`,
/// `K = [(bc̃−cb̃)² + (bd̃−db̃)² + (cd̃−dc̃)²] / (4(1+aq)²)`.
pub fn closed_form_flag_case1(q: &Scalar, u: &Vector, v: &Vector) -> Result<Scalar> {
    let [a, b, c, d] = four_components(u)?;
    let [_, bt, ct, dt] = four_components(v)?;
    let base = Scalar::one() + a * q;
    let denominator = Scalar::int(4) * base.square();
    if denominator.is_exact_zero() {
        return Err(Error::DegenerateDenominator);
    }
    let numerator = minor(b, c, bt, ct) + minor(b, d, bt, dt) + minor(c, d, ct, dt);
    Ok(numerator / denominator)
}

/// Closed form for the algebra `[X,Z]=X, [Y,Z]=Y, [X,W]=Y, [Y,W]=−X` with
/// drift `qW`:
/// `K = −[(ab̃−bã)² + (ac̃−cã)² + (bc̃−cb̃)²] / (1+dq)²`.
pub fn closed_form_flag_case2(q: &Scalar, u: &Vector, v: &Vector) -> Result<Scalar> {
    let [a, b, c, d] = four_components(u)?;
    let [at, bt, ct, _] = four_components(v)?;
    let denominator = (Scalar::one() + d * q).square();
    if denominator.is_exact_zero() {
        return Err(Error::DegenerateDenominator);
    }
    let numerator = minor(a, b, at, bt) + minor(a, c, at, ct) + minor(b, c, bt, ct);
    Ok(-numerator / denominator)
}
