//! Twisted polygons in the projective plane and the maps `G_k`.
//!
//! The recurrence of a state with span `k > 3` has a `k`-dimensional
//! solution space, so a plane polygon is a projection of the corrugated one
//! along a monodromy-invariant complement. [`plane_polygon_projected`] picks
//! that complement from three left eigenvectors of the monodromy, which is
//! only available over complex floats. Different triples give projectively
//! inequivalent polygons with the same coordinates.

use serde_json::Value;

use super::linalg::{self, complex_roots, mat_vec, nullspace_tol, rank};
use super::{
    build_lifts, check_twisted, diagonal_intersections, extract_coefficients, lift_at,
    parse_polygon_json, polygon_json,
};
use crate::error::{Error, Result};
use crate::lax::{Matrix, Poly};
use crate::scalar::{Complex64, Ring, Scalar, ScalarIo};
use crate::states::{MapParams, XYState};

/// Twisted polygon in `RP^2` with diagonal depth `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanePolygon<S> {
    pub params: MapParams,
    /// `V_0 .. V_{n+k-1}` in 3-space.
    pub lifts: Vec<Vec<S>>,
    pub monodromy: Matrix<S>,
}

impl<S: Scalar> PlanePolygon<S> {
    /// Validates shape, twist and general position of every 4-window.
    pub fn new(params: MapParams, lifts: Vec<Vec<S>>, monodromy: Matrix<S>) -> Result<Self> {
        if params.k < 3 {
            return Err(Error::UnsupportedSpan(params.k));
        }
        check_twisted(&lifts, &monodromy, params.n, params.k, 3)?;
        let p = PlanePolygon {
            params,
            lifts,
            monodromy,
        };
        p.check_general_position()?;
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn k(&self) -> usize {
        self.params.k
    }

    pub fn lift(&self, i: usize) -> Vec<S> {
        lift_at(&self.lifts, &self.monodromy, self.params.n, i)
    }

    /// Consecutive triples independent and no three of
    /// `V_i, V_{i+1}, V_{i+k-1}, V_{i+k}` collinear.
    pub fn check_general_position(&self) -> Result<()> {
        let k = self.k();
        for i in 0..self.n() {
            if rank(&[self.lift(i), self.lift(i + 1), self.lift(i + 2)]) < 3 {
                return Err(Error::GenericityLost(i + 1));
            }
            let four = [
                self.lift(i),
                self.lift(i + 1),
                self.lift(i + k - 1),
                self.lift(i + k),
            ];
            for skip in 0..4 {
                let three: Vec<Vec<S>> = (0..4)
                    .filter(|&a| a != skip)
                    .map(|a| four[a].clone())
                    .collect();
                if rank(&three) < 3 {
                    return Err(Error::GenericityLost(i + 1));
                }
            }
        }
        Ok(())
    }

    /// Lifts `G V_i`, monodromy `G M G^{-1}`.
    pub fn transformed(&self, g: &Matrix<S>) -> Result<Self> {
        let inv = linalg::inverse(g).map_err(|_| Error::DegenerateSeed)?;
        Ok(PlanePolygon {
            params: self.params,
            lifts: self.lifts.iter().map(|v| mat_vec(g, v)).collect(),
            monodromy: g.mul(&self.monodromy).mul(&inv),
        })
    }

    /// Vertices in the affine chart `z = 1` as `(x, y)` pairs, the first
    /// `n` only. Fails on points at infinity.
    pub fn affine_vertices(&self) -> Result<Vec<(f64, f64)>> {
        (0..self.n())
            .map(|i| {
                let v = &self.lifts[i];
                let z = v[2].to_complex();
                if z.norm() <= 1e-12 * v.iter().map(Scalar::magnitude).fold(1.0, f64::max) {
                    return Err(Error::PoleEncountered);
                }
                let a = v[0].to_complex() / z;
                let b = v[1].to_complex() / z;
                Ok((a.re, b.re))
            })
            .collect()
    }
}

impl<S: ScalarIo> PlanePolygon<S> {
    pub fn to_json(&self) -> Value {
        polygon_json(self.k(), self.n(), &self.lifts, &self.monodromy)
    }

    pub fn from_json(doc: &Value) -> Result<Self> {
        let (k, n, lifts, m) = parse_polygon_json(doc)?;
        PlanePolygon::new(MapParams::new(k, n)?, lifts, m)
    }
}

/// Span-3 plane polygon from three independent seed vectors; for larger
/// spans use [`plane_polygon_projected`].
pub fn plane_polygon_from_xy<S: Scalar>(
    s: &XYState<S>,
    seed: &[Vec<S>],
) -> Result<PlanePolygon<S>> {
    if s.k() != 3 {
        return Err(Error::WrongSpan {
            expected: 3,
            got: s.k(),
        });
    }
    if seed.len() != 3 {
        return Err(Error::DegenerateSeed);
    }
    let (lifts, m) = build_lifts(s, seed)?;
    PlanePolygon::new(s.params, lifts, m)
}

/// Plane polygon of `s` (any `k >= 3`) over complex floats: the
/// `k`-dimensional polygon with the standard seed, projected by three left
/// eigenvectors of its monodromy. `triple` picks eigenvalues by their
/// position in (real part, imaginary part) order.
pub fn plane_polygon_projected<S: Scalar>(
    s: &XYState<S>,
    triple: [usize; 3],
) -> Result<PlanePolygon<Complex64>> {
    let k = s.k();
    if k < 3 {
        return Err(Error::UnsupportedSpan(k));
    }
    if triple.iter().any(|&t| t >= k)
        || triple[0] == triple[1]
        || triple[1] == triple[2]
        || triple[0] == triple[2]
    {
        return Err(Error::BadParams(format!(
            "eigenvalue triple must be distinct indices below {k}"
        )));
    }
    let c = XYState::new(
        s.params,
        s.x.iter().map(Scalar::to_complex).collect(),
        s.y.iter().map(Scalar::to_complex).collect(),
    )?;
    let (lifts, m) = build_lifts(&c, &super::standard_seed(k))?;
    // characteristic polynomial det(M - t)
    let shifted: Matrix<Poly<Complex64>> = {
        let mut a = m.map(|v| Poly::constant(*v));
        for i in 0..k {
            let e = a.get(i, i).clone() - Poly::var();
            a.set(i, i, e);
        }
        a
    };
    let roots = complex_roots(shifted.det().coeffs())?;
    let scale = (0..k)
        .flat_map(|i| (0..k).map(move |j| (i, j)))
        .map(|(i, j)| m.get(i, j).norm())
        .fold(1.0, f64::max);
    for a in 0..k {
        for b in a + 1..k {
            if (roots[a] - roots[b]).norm() <= 1e-6 * scale {
                return Err(Error::DegenerateConfiguration(0));
            }
        }
    }
    // left eigenvector u: u M = mu u, i.e. the kernel of (M - mu)^T
    let rows: Vec<Vec<Complex64>> = triple
        .iter()
        .map(|&t| {
            let cols: Vec<Vec<Complex64>> = (0..k)
                .map(|j| {
                    (0..k)
                        .map(|i| {
                            let v = *m.get(j, i);
                            if i == j {
                                v - roots[t]
                            } else {
                                v
                            }
                        })
                        .collect()
                })
                .collect();
            let ns = nullspace_tol(&cols, 1e-7);
            ns.into_iter()
                .next()
                .ok_or(Error::DegenerateConfiguration(0))
        })
        .collect::<Result<_>>()?;
    let project = |v: &[Complex64]| -> Vec<Complex64> {
        rows.iter()
            .map(|u| {
                u.iter()
                    .zip(v)
                    .fold(Complex64::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    };
    let projected: Vec<Vec<Complex64>> = lifts.iter().map(|v| project(v)).collect();
    let mut mono = Matrix::zeros(3);
    for (a, &t) in triple.iter().enumerate() {
        mono.set(a, a, roots[t]);
    }
    PlanePolygon::new(s.params, projected, mono)
}

/// The coordinates `(x, y)` of a plane polygon.
pub fn psi<S: Scalar>(p: &PlanePolygon<S>) -> Result<XYState<S>> {
    extract_coefficients(|i| p.lift(i), p.params)
}

/// `G_k`: new vertex `i` is the intersection of the lines
/// `(V_j, V_{j+k-1})` and `(V_{j+1}, V_{j+k})`, `j = i - r' - 1`.
pub fn gk_step<S: Scalar>(p: &PlanePolygon<S>) -> Result<PlanePolygon<S>> {
    let lifts = diagonal_intersections(|i| p.lift(i), p.params, p.n() + p.k())?;
    let out = PlanePolygon {
        params: p.params,
        lifts,
        monodromy: p.monodromy.clone(),
    };
    out.check_general_position().map_err(|e| match e {
        Error::GenericityLost(i) => Error::DegenerateIntersection(i),
        other => other,
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::tk_step;
    use crate::geometry::{extract_xy, fk_step, polygon_from_xy, standard_seed};
    use crate::random::{random_vec, random_xy, rng};
    use crate::scalar::{approx_eq, Rational};

    /// Random rational plane polygon: free points and monodromy.
    fn random_plane(k: usize, n: usize, seed: u64) -> PlanePolygon<Rational> {
        let mut g = rng(seed);
        loop {
            let m = Matrix::from_rows((0..3).map(|_| random_vec::<Rational>(3, &mut g)).collect());
            let mut lifts: Vec<Vec<Rational>> = (0..n).map(|_| random_vec(3, &mut g)).collect();
            for j in 0..k {
                lifts.push(mat_vec(&m, &lifts[j]));
            }
            if let Ok(p) = PlanePolygon::new(MapParams::new(k, n).unwrap(), lifts, m) {
                if psi(&p).is_ok() {
                    return p;
                }
            }
        }
    }

    fn close(a: &XYState<Complex64>, b: &XYState<Complex64>) -> bool {
        a.x.iter()
            .zip(&b.x)
            .chain(a.y.iter().zip(&b.y))
            .all(|(u, v)| approx_eq(u, v, 1e-6))
    }

    #[test]
    fn gk_conjugates_tk() {
        for (k, n, seed) in [(3, 6, 1), (4, 8, 2), (5, 10, 3), (5, 12, 4)] {
            let p = random_plane(k, n, seed);
            let Ok(image) = gk_step(&p) else { continue };
            assert_eq!(image.monodromy, p.monodromy);
            assert_eq!(
                psi(&image).unwrap(),
                tk_step(&psi(&p).unwrap()).unwrap(),
                "k = {k}"
            );
        }
    }

    #[test]
    fn span_three_agrees_with_corrugated() {
        let s = random_xy::<Rational>(MapParams::new(3, 7).unwrap(), &mut rng(5));
        let plane = plane_polygon_from_xy(&s, &standard_seed(3)).unwrap();
        let corr = polygon_from_xy(&s, &standard_seed(3)).unwrap();
        assert_eq!(plane.lifts, corr.lifts);
        assert_eq!(psi(&plane).unwrap(), s);
        assert_eq!(
            gk_step(&plane).unwrap().lifts,
            fk_step(&corr).unwrap().lifts
        );
        assert_eq!(extract_xy(&corr).unwrap(), psi(&plane).unwrap());
    }

    #[test]
    fn projective_action_preserves_psi() {
        let p = random_plane(4, 9, 6);
        let g = Matrix::from_rows(
            (0..3)
                .map(|_| random_vec::<Rational>(3, &mut rng(60)))
                .collect(),
        );
        if let Ok(moved) = p.transformed(&g) {
            assert_eq!(psi(&moved).unwrap(), psi(&p).unwrap());
        }
    }

    #[test]
    fn projected_round_trip_and_fiber() {
        let s = crate::random::random_positive_xy(MapParams::new(4, 9).unwrap(), &mut rng(7));
        let sc = XYState::new(
            s.params,
            s.x.iter().map(Scalar::to_complex).collect(),
            s.y.iter().map(Scalar::to_complex).collect(),
        )
        .unwrap();
        let a = plane_polygon_projected(&s, [0, 1, 2]).unwrap();
        let b = plane_polygon_projected(&s, [1, 2, 3]).unwrap();
        assert!(close(&psi(&a).unwrap(), &sc));
        assert!(close(&psi(&b).unwrap(), &sc));
        // same coordinates, different monodromy spectra: not projectively equivalent
        let diag = |p: &PlanePolygon<Complex64>| {
            (0..3).map(|i| *p.monodromy.get(i, i)).collect::<Vec<_>>()
        };
        assert!(diag(&a)
            .iter()
            .zip(diag(&b))
            .any(|(u, v)| (u - v).norm() > 1e-6));
        // conjugation through the projection
        let image = gk_step(&a).unwrap();
        assert!(close(&psi(&image).unwrap(), &tk_step(&sc).unwrap()));
    }

    #[test]
    fn wrong_span_and_bad_triple() {
        let s = XYState::<Rational>::ones(MapParams::new(4, 8).unwrap());
        assert!(plane_polygon_from_xy(&s, &standard_seed(3)).is_err());
        assert!(plane_polygon_projected(&s, [0, 0, 1]).is_err());
    }
}
