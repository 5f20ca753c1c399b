//! Seeded random inputs for property sweeps: rational orthogonal frames,
//! g-orthonormal pairs, positive-definite Gram matrices and drift sizes.
//!
//! Everything is built from small integers so that exact mode stays exact
//! whenever the metric allows it.

use rand::Rng;

use crate::algebra::Vector;
use crate::geometry::InnerProduct;
use crate::linalg::Matrix;
use crate::scalar::{Engine, Scalar};

/// Random integer vector with entries in `[-bound, bound]`, not all zero.
pub fn int_vector<R: Rng>(rng: &mut R, dim: usize, bound: i64) -> Vector {
    loop {
        let values: Vec<i64> = (0..dim).map(|_| rng.random_range(-bound..=bound)).collect();
        if values.iter().any(|&x| x != 0) {
            return Vector::from_ints(&values);
        }
    }
}

/// Rational orthogonal matrix `(I − A)(I + A)⁻¹` from a random integer
/// skew-symmetric `A`.
pub fn cayley_orthogonal<R: Rng>(rng: &mut R, dim: usize, bound: i64) -> Matrix {
    let mut a = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i + 1..dim {
            let x = rng.random_range(-bound..=bound);
            a.set(i, j, Scalar::int(x));
            a.set(j, i, Scalar::int(-x));
        }
    }
    let id = Matrix::identity(dim);
    let inverse = id.add(&a).inverse(&Engine::exact()).expect("I + A is invertible for skew A");
    id.sub(&a).mul(&inverse).expect("square")
}

/// A pair of g-orthonormal vectors. Exact when the pivots of `g = L D Lᵀ`
/// are rational squares (always the case for the identity Gram matrix).
pub fn orthonormal_pair<R: Rng>(rng: &mut R, g: &InnerProduct, engine: &Engine) -> (Vector, Vector) {
    let n = g.dim();
    assert!(n >= 2, "a plane needs two dimensions");
    let (l, d) = g.gram().ldl(engine).expect("positive definite");
    let lt_inv = l.transpose().inverse(engine).expect("unit triangular");
    let scale = Matrix::diagonal(&d.iter().map(|x| Scalar::one() / x.sqrt()).collect::<Vec<_>>());
    let frame = lt_inv.mul(&scale).expect("square");
    let q = cayley_orthogonal(rng, n, 3).cast(engine);
    let u = frame.apply(&q.column(0)).expect("square");
    let v = frame.apply(&q.column(1)).expect("square");
    (u, v)
}

/// A flag `(pole, transverse)` with a g-unit pole and a transverse vector
/// that is a random non-orthogonal combination of an orthonormal pair.
pub fn unit_pole_flag<R: Rng>(rng: &mut R, g: &InnerProduct, engine: &Engine) -> (Vector, Vector) {
    let (u, v) = orthonormal_pair(rng, g, engine);
    let s = engine.int(rng.random_range(-3..=3));
    let mut t = 0;
    while t == 0 {
        t = rng.random_range(-3..=3);
    }
    let mut transverse = v.scale(&engine.int(t));
    transverse.add_scaled(&s, &u);
    (u, transverse)
}

/// `L D Lᵀ` with unit lower-triangular `L` (entries in {-1, 0, 1}) and
/// diagonal `D` in `[1/2, 2]`, so entries stay of order one.
pub fn positive_definite_gram<R: Rng>(rng: &mut R, dim: usize, engine: &Engine) -> Matrix {
    let mut l = Matrix::identity(dim);
    for i in 0..dim {
        for j in 0..i {
            l.set(i, j, Scalar::int(rng.random_range(-1..=1)));
        }
    }
    let d: Vec<Scalar> = (0..dim)
        .map(|_| Scalar::ratio(rng.random_range(2..=8), 4))
        .collect();
    l.mul(&Matrix::diagonal(&d)).and_then(|m| m.mul(&l.transpose())).expect("square").cast(engine)
}

/// Drift coefficient `q = n/1000` with `0 < |q| < 1`.
pub fn drift_coefficient<R: Rng>(rng: &mut R, engine: &Engine) -> Scalar {
    let mut n = 0;
    while n == 0 {
        n = rng.random_range(-999..=999);
    }
    engine.ratio(n, 1000)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cayley_is_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let q = cayley_orthogonal(&mut rng, 4, 3);
            assert_eq!(q.transpose().mul(&q).unwrap(), Matrix::identity(4));
        }
    }

    #[test]
    fn orthonormal_pair_under_random_gram() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let e = Engine::exact();
        let g = InnerProduct::identity(4, &e);
        let (u, v) = orthonormal_pair(&mut rng, &g, &e);
        assert!(u.is_exact() && v.is_exact());
        assert_eq!(g.inner(&u, &u).unwrap(), Scalar::one());
        assert_eq!(g.inner(&u, &v).unwrap(), Scalar::zero());

        let f = Engine::float();
        let g = InnerProduct::new(positive_definite_gram(&mut rng, 4, &f), &f).unwrap();
        let (u, v) = orthonormal_pair(&mut rng, &g, &f);
        assert!((g.inner(&u, &u).unwrap().to_f64() - 1.0).abs() < 1e-12);
        assert!((g.inner(&v, &v).unwrap().to_f64() - 1.0).abs() < 1e-12);
        assert!(g.inner(&u, &v).unwrap().to_f64().abs() < 1e-12);
    }
}
