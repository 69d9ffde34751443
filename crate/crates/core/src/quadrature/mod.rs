//! Quadrature rules on the reference segment [0, 1] and the reference
//! triangle {(0,0), (1,0), (0,1)}.
//!
//! All rules are read from hard-coded tables. A rule of exactness `d`
//! integrates every polynomial of total degree at most `d` exactly (up to
//! rounding).

mod tables;

use thiserror::Error;

use tables::{GAUSS_JACOBI_10, GAUSS_LEGENDRE, MAX_POINTS};

/// Highest polynomial degree for which a rule is tabulated.
pub const MAX_DEGREE: usize = 2 * MAX_POINTS - 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadratureError {
    #[error("no quadrature rule of exactness {requested} (maximum is {max})")]
    UnsupportedDegree { requested: usize, max: usize },
}

/// A quadrature rule on a `D`-dimensional reference domain.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule<const D: usize> {
    pub points: Vec<[f64; D]>,
    pub weights: Vec<f64>,
    /// Polynomial degree integrated exactly.
    pub exactness: usize,
}

/// Rule on the reference segment [0, 1] (measure 1).
pub type SegmentRule = QuadRule<1>;
/// Rule on the reference triangle (measure 1/2).
pub type TriangleRule = QuadRule<2>;

impl<const D: usize> QuadRule<D> {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Iterates over `(point, weight)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (&[f64; D], f64)> + '_ {
        self.points.iter().zip(self.weights.iter().copied())
    }

    /// Applies the rule to `f` on the reference domain.
    pub fn integrate(&self, f: impl Fn(&[f64; D]) -> f64) -> f64 {
        self.iter().map(|(p, w)| w * f(p)).sum()
    }
}

fn points_for(degree: usize) -> Result<usize, QuadratureError> {
    if degree > MAX_DEGREE {
        return Err(QuadratureError::UnsupportedDegree {
            requested: degree,
            max: MAX_DEGREE,
        });
    }
    Ok((degree + 2) / 2)
}

/// Gauss-Legendre rule on [0, 1] exact for polynomials of degree `degree`.
pub fn segment_rule(degree: usize) -> Result<SegmentRule, QuadratureError> {
    let n = points_for(degree)?;
    let table = GAUSS_LEGENDRE[n - 1];
    Ok(QuadRule {
        points: table.iter().map(|&(s, _)| [s]).collect(),
        weights: table.iter().map(|&(_, w)| w).collect(),
        exactness: 2 * n - 1,
    })
}

/// Collapsed (Duffy) product rule on the reference triangle exact for
/// polynomials of total degree `degree`.
///
/// The map `(u, v) -> (u, (1 - u) v)` has Jacobian `1 - u`, which is absorbed
/// into the Gauss-Jacobi weight in `u`.
pub fn triangle_rule(degree: usize) -> Result<TriangleRule, QuadratureError> {
    let n = points_for(degree)?;
    let outer = GAUSS_JACOBI_10[n - 1];
    let inner = GAUSS_LEGENDRE[n - 1];
    let mut points = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for &(u, wu) in outer {
        for &(v, wv) in inner {
            points.push([u, (1.0 - u) * v]);
            weights.push(wu * wv);
        }
    }
    Ok(QuadRule {
        points,
        weights,
        exactness: 2 * n - 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    // ∫_T x^a y^b = a! b! / (a + b + 2)!
    fn triangle_monomial(a: u32, b: u32) -> f64 {
        factorial(a) * factorial(b) / factorial(a + b + 2)
    }

    #[test]
    fn triangle_basic_integrals() {
        let rule = triangle_rule(1).unwrap();
        assert!((rule.integrate(|_| 1.0) - 0.5).abs() < 1e-15);
        assert!((rule.integrate(|p| p[0]) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn triangle_exactness_boundary() {
        let f = |p: &[f64; 2]| p[0] * p[0] * p[1] * p[1];
        let exact = 1.0 / 180.0;
        assert!((triangle_rule(3).unwrap().integrate(f) - exact).abs() > 1e-6);
        for d in [4, 6, 8, 12] {
            let err = (triangle_rule(d).unwrap().integrate(f) - exact).abs();
            assert!(err < 1e-13 * exact, "degree {d}: {err}");
        }
    }

    #[test]
    fn segment_gauss_exactness() {
        let r3 = segment_rule(3).unwrap();
        assert_eq!(r3.len(), 2);
        assert!((r3.integrate(|_| 1.0) - 1.0).abs() < 1e-15);
        assert!((r3.integrate(|p| p[0].powi(3)) - 0.25).abs() < 1e-14);
        assert!((r3.integrate(|p| p[0].powi(4)) - 0.2).abs() > 1e-6);
        let r5 = segment_rule(5).unwrap();
        assert!((r5.integrate(|p| p[0].powi(4)) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn every_rule_is_exact_on_its_monomials() {
        for d in 0..=MAX_DEGREE {
            let tri = triangle_rule(d).unwrap();
            assert!(tri.exactness >= d);
            let wsum: f64 = tri.weights.iter().sum();
            assert!((wsum - 0.5).abs() < 1e-14);
            for p in &tri.points {
                assert!(p[0] >= 0.0 && p[1] >= 0.0 && p[0] + p[1] <= 1.0);
            }
            for a in 0..=d as u32 {
                for b in 0..=(d as u32 - a) {
                    let exact = triangle_monomial(a, b);
                    let got = tri.integrate(|p| p[0].powi(a as i32) * p[1].powi(b as i32));
                    assert!(
                        ((got - exact) / exact).abs() < 1e-13,
                        "degree {d} monomial x^{a} y^{b}: {got} vs {exact}"
                    );
                }
            }
            let seg = segment_rule(d).unwrap();
            for a in 0..=d as i32 {
                let exact = 1.0 / f64::from(a + 1);
                let got = seg.integrate(|p| p[0].powi(a));
                assert!(((got - exact) / exact).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn unsupported_degree_rejected() {
        assert_eq!(
            triangle_rule(MAX_DEGREE + 1),
            Err(QuadratureError::UnsupportedDegree {
                requested: MAX_DEGREE + 1,
                max: MAX_DEGREE
            })
        );
        assert!(segment_rule(100).is_err());
    }
}
