//! Twisted polygons realizing the maps: corrugated polygons in `RP^{k-1}`
//! with the diagonal map `F_k` and projective duality, and plane polygons
//! with the higher pentagram maps `G_k`.
//!
//! A twisted polygon is stored as the lifts `V_0 .. V_{n+k-1}` plus the
//! monodromy `M` with `V_{i+n} = M V_i`; further lifts are generated on
//! demand. Coordinates `(x, y)` come from the normalized recurrence
//!
//! ```text
//! V_{i+k} = y_{i-1} V_i + x_i V_{i+1} + V_{i+k-1}
//! ```
//!
//! New vertex `i` of `F_k` (and `G_k`) is the intersection of the diagonals
//! `(V_j, V_{j+k-1})` and `(V_{j+1}, V_{j+k})` with `j = i - r' - 1`; this
//! labeling makes the extracted coordinates transform exactly by `T_k`.
//!
//! Dual polygon: hyperplane `i` is spanned by `V_i .. V_{i+k-2}`, and the
//! extracted coordinates satisfy `dual_i = (-1)^k D_k(x, y)_{i+r}`
//! ([`duality_shift`]).

pub mod linalg;
mod plane;

pub use plane::{gk_step, plane_polygon_from_xy, plane_polygon_projected, psi, PlanePolygon};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lax::Matrix;
use crate::scalar::{approx_eq, Ring, Scalar, ScalarIo};
use crate::states::{MapParams, XYState};
use linalg::{cofactor_matrix, cofactor_vector, mat_vec, nullspace, rank, solve};

/// Corrugated twisted polygon in `RP^{k-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrugatedPolygon<S> {
    pub params: MapParams,
    /// `V_0 .. V_{n+k-1}`, each of length `k`.
    pub lifts: Vec<Vec<S>>,
    pub monodromy: Matrix<S>,
}

/// `V_i` for any `i >= 0`, applying the monodromy past the stored window.
fn lift_at<S: Scalar>(lifts: &[Vec<S>], m: &Matrix<S>, n: usize, i: usize) -> Vec<S> {
    let mut i = i;
    let mut turns = 0;
    while i >= lifts.len() {
        i -= n;
        turns += 1;
    }
    (0..turns).fold(lifts[i].clone(), |v, _| mat_vec(m, &v))
}

fn vectors_match<S: Scalar>(a: &[S], b: &[S]) -> bool {
    let scale = a.iter().chain(b).map(Scalar::magnitude).fold(1.0, f64::max);
    a.iter().zip(b).all(|(u, v)| {
        if S::EXACT {
            u == v
        } else {
            (u.clone() - v.clone()).magnitude() <= 1e-8 * scale
        }
    })
}

/// Checks storage shape and `V_{n+j} = M V_j`.
fn check_twisted<S: Scalar>(
    lifts: &[Vec<S>],
    m: &Matrix<S>,
    n: usize,
    window: usize,
    dim: usize,
) -> Result<()> {
    if lifts.len() != n + window {
        return Err(Error::InvariantViolation(format!(
            "expected {} lifts, got {}",
            n + window,
            lifts.len()
        )));
    }
    if m.dim() != dim {
        return Err(Error::InvariantViolation(format!(
            "monodromy must be {dim}x{dim}"
        )));
    }
    if let Some(i) = lifts.iter().position(|v| v.len() != dim) {
        return Err(Error::InvariantViolation(format!(
            "lift {i} has length {}",
            lifts[i].len()
        )));
    }
    for j in 0..window {
        if !vectors_match(&lifts[n + j], &mat_vec(m, &lifts[j])) {
            return Err(Error::InvariantViolation(format!(
                "lift {} is not the monodromy image of lift {j}",
                n + j
            )));
        }
    }
    Ok(())
}

/// Coefficients of the normalized recurrence, read off any twisted polygon
/// whose 4-windows `W_i, W_{i+1}, W_{i+k-1}, W_{i+k}` are dependent.
///
/// Solves `W_{i+k} = A_i W_i + B_i W_{i+1} + C_i W_{i+k-1}`, then rescales
/// the lifts by `t` with `t_{k-1} = 1`, `t_m = t_{m-1} / C_{m-k}`; the
/// first `k - 1` factors follow from `t_{j+n} = mu t_j`, which keeps the
/// rescaled lifts twisted. The result is checked for `n`-periodicity.
fn extract_coefficients<S: Scalar>(
    lift: impl Fn(usize) -> Vec<S>,
    params: MapParams,
) -> Result<XYState<S>> {
    let (k, n) = (params.k, params.n);
    let mut a = Vec::with_capacity(n + k);
    let mut b = Vec::with_capacity(n + k);
    let mut c = Vec::with_capacity(n + k);
    for i in 0..n + k {
        let sol = solve(&[lift(i), lift(i + 1), lift(i + k - 1)], &lift(i + k))
            .map_err(|_| Error::GenericityLost(i % n + 1))?;
        let [ai, bi, ci]: [S; 3] = sol.try_into().expect("three unknowns");
        if ci.vanishes() {
            return Err(Error::GenericityLost(i % n + 1));
        }
        a.push(ai);
        b.push(bi);
        c.push(ci);
    }
    let mut t = vec![S::zero(); n + 2 * k];
    t[k - 1] = S::one();
    for m in k..n + 2 * k {
        t[m] = t[m - 1].checked_div(&c[m - k])?;
    }
    let mu = t[n + k - 1].clone();
    for j in 0..k - 1 {
        t[j] = t[n + j].checked_div(&mu)?;
    }
    let xs = |i: usize| b[i].clone() * t[i + k].checked_div(&t[i + 1]).expect("t nonzero");
    let ys = |i: usize| a[i + 1].clone() * t[i + 1 + k].checked_div(&t[i + 1]).expect("t nonzero");
    for i in 0..k - 1 {
        if !approx_eq(&xs(i), &xs(i + n), 1e-8) || !approx_eq(&ys(i), &ys(i + n), 1e-8) {
            return Err(Error::NonPeriodicCoefficients);
        }
    }
    XYState::new(params, (0..n).map(xs).collect(), (0..n).map(ys).collect())
        .map_err(|_| Error::NonPeriodicCoefficients)
}

/// Lifts satisfying the recurrence, started from `seed` (first `window`
/// lifts), with the monodromy `B A^{-1}` where `A` holds the seed and `B`
/// the lifts `n .. n+window-1`.
fn build_lifts<S: Scalar>(s: &XYState<S>, seed: &[Vec<S>]) -> Result<(Vec<Vec<S>>, Matrix<S>)> {
    let (k, n) = (s.k(), s.n());
    let dim = seed.len();
    if seed.iter().any(|v| v.len() != dim) || rank(seed) < dim {
        return Err(Error::DegenerateSeed);
    }
    let mut v: Vec<Vec<S>> = seed.to_vec();
    // extend to n + k lifts through the recurrence (seed covers 0..k)
    for i in 0..n {
        let y = crate::states::at(&s.y, i as isize - 1).clone();
        let x = s.x[i].clone();
        let next: Vec<S> = (0..dim)
            .map(|c| {
                y.clone() * v[i][c].clone()
                    + x.clone() * v[i + 1][c].clone()
                    + v[i + k - 1][c].clone()
            })
            .collect();
        v.push(next);
    }
    // monodromy: M A = B on `dim` independent consecutive lifts
    let a = linalg::from_cols(&v[..dim]);
    let b = linalg::from_cols(&v[n..n + dim]);
    let m = b.mul(&linalg::inverse(&a).map_err(|_| Error::DegenerateSeed)?);
    Ok((v, m))
}

/// `W` for the new vertex `i`: intersection of `(V_j, V_{j+k-1})` and
/// `(V_{j+1}, V_{j+k})`, `j = i - r' - 1` (shifted by `n` to stay in the
/// forward window).
fn diagonal_intersections<S: Scalar>(
    lift: impl Fn(usize) -> Vec<S>,
    params: MapParams,
    count: usize,
) -> Result<Vec<Vec<S>>> {
    let (k, n) = (params.k, params.n);
    let back = params.rpi() as usize + 1;
    (0..count)
        .map(|i| {
            let j = i + n - back;
            let (v0, v1, v2, v3) = (lift(j), lift(j + k - 1), lift(j + 1), lift(j + k));
            let ns = nullspace(&[v0.clone(), v1.clone(), v2, v3]);
            if ns.len() != 1 {
                return Err(Error::DegenerateIntersection(i % n + 1));
            }
            let w: Vec<S> = v0
                .iter()
                .zip(&v1)
                .map(|(a, b)| ns[0][0].clone() * a.clone() + ns[0][1].clone() * b.clone())
                .collect();
            if w.iter().all(Ring::is_zero) {
                return Err(Error::DegenerateIntersection(i % n + 1));
            }
            Ok(w)
        })
        .collect()
}

impl<S: Scalar> CorrugatedPolygon<S> {
    /// Validates shape, twist, genericity and corrugation.
    pub fn new(params: MapParams, lifts: Vec<Vec<S>>, monodromy: Matrix<S>) -> Result<Self> {
        let k = params.k;
        if k < 3 {
            return Err(Error::UnsupportedSpan(k));
        }
        check_twisted(&lifts, &monodromy, params.n, k, k)?;
        let p = CorrugatedPolygon {
            params,
            lifts,
            monodromy,
        };
        p.check_corrugated()?;
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn k(&self) -> usize {
        self.params.k
    }

    /// `V_i`, `i >= 0`.
    pub fn lift(&self, i: usize) -> Vec<S> {
        lift_at(&self.lifts, &self.monodromy, self.params.n, i)
    }

    /// Every `k` consecutive lifts independent; every 4-window
    /// `V_i, V_{i+1}, V_{i+k-1}, V_{i+k}` of rank 3 with each three of its
    /// vectors independent. Reports the first failing `i`.
    pub fn check_corrugated(&self) -> Result<()> {
        let k = self.k();
        for i in 0..self.n() {
            let window: Vec<Vec<S>> = (i..i + k).map(|j| self.lift(j)).collect();
            if rank(&window) < k {
                return Err(Error::GenericityLost(i + 1));
            }
            let four = [
                self.lift(i),
                self.lift(i + 1),
                self.lift(i + k - 1),
                self.lift(i + k),
            ];
            if rank(&four) != 3 {
                return Err(Error::GenericityLost(i + 1));
            }
            for skip in 0..4 {
                let three: Vec<Vec<S>> = (0..4)
                    .filter(|&a| a != skip)
                    .map(|a| four[a].clone())
                    .collect();
                if rank(&three) != 3 {
                    return Err(Error::GenericityLost(i + 1));
                }
            }
        }
        Ok(())
    }

    /// Lifts `G V_i`, monodromy `G M G^{-1}`.
    pub fn transformed(&self, g: &Matrix<S>) -> Result<Self> {
        let inv = linalg::inverse(g).map_err(|_| Error::DegenerateSeed)?;
        Ok(CorrugatedPolygon {
            params: self.params,
            lifts: self.lifts.iter().map(|v| mat_vec(g, v)).collect(),
            monodromy: g.mul(&self.monodromy).mul(&inv),
        })
    }

    /// Lifts rescaled by `t_i` (`t_{i+n} = t_i`); the projective polygon
    /// is unchanged.
    pub fn rescaled(&self, t: &[S]) -> Self {
        let n = self.n();
        CorrugatedPolygon {
            params: self.params,
            lifts: self
                .lifts
                .iter()
                .enumerate()
                .map(|(i, v)| v.iter().map(|c| c.clone() * t[i % n].clone()).collect())
                .collect(),
            monodromy: self.monodromy.clone(),
        }
    }
}

impl<S: ScalarIo> CorrugatedPolygon<S> {
    /// `{"k", "n", "lifts": [[..]], "monodromy": [[..]]}`.
    pub fn to_json(&self) -> Value {
        polygon_json(self.k(), self.n(), &self.lifts, &self.monodromy)
    }

    pub fn from_json(doc: &Value) -> Result<Self> {
        let (k, n, lifts, m) = parse_polygon_json(doc)?;
        CorrugatedPolygon::new(MapParams::new(k, n)?, lifts, m)
    }
}

pub(crate) fn polygon_json<S: ScalarIo>(
    k: usize,
    n: usize,
    lifts: &[Vec<S>],
    m: &Matrix<S>,
) -> Value {
    let enc = |v: &[S]| Value::Array(v.iter().map(ScalarIo::to_json).collect());
    json!({
        "k": k,
        "n": n,
        "lifts": lifts.iter().map(|v| enc(v)).collect::<Vec<_>>(),
        "monodromy": m.rows().iter().map(|r| enc(r)).collect::<Vec<_>>(),
    })
}

type PolygonParts<S> = (usize, usize, Vec<Vec<S>>, Matrix<S>);

pub(crate) fn parse_polygon_json<S: ScalarIo>(doc: &Value) -> Result<PolygonParts<S>> {
    let field = |key: &str| {
        doc.get(key)
            .and_then(Value::as_u64)
            .map(|v| v as usize)
            .ok_or_else(|| Error::Parse(format!("missing or invalid integer field {key:?}")))
    };
    let rows = |key: &str| -> Result<Vec<Vec<S>>> {
        doc.get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse(format!("missing array {key:?}")))?
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::Parse(format!("{key} must hold arrays")))?
                    .iter()
                    .map(S::from_json)
                    .collect()
            })
            .collect()
    };
    let m = rows("monodromy")?;
    if m.iter().any(|r| r.len() != m.len()) {
        return Err(Error::Parse("monodromy must be square".into()));
    }
    Ok((
        field("k")?,
        field("n")?,
        rows("lifts")?,
        Matrix::from_rows(m),
    ))
}

/// Corrugated polygon of `s` started from `k` independent seed vectors.
pub fn polygon_from_xy<S: Scalar>(s: &XYState<S>, seed: &[Vec<S>]) -> Result<CorrugatedPolygon<S>> {
    let k = s.k();
    if k < 3 {
        return Err(Error::UnsupportedSpan(k));
    }
    if seed.len() != k {
        return Err(Error::DegenerateSeed);
    }
    let (lifts, m) = build_lifts(s, seed)?;
    let p = CorrugatedPolygon {
        params: s.params,
        lifts,
        monodromy: m,
    };
    p.check_corrugated()?;
    Ok(p)
}

/// Standard basis seed.
pub fn standard_seed<S: Scalar>(dim: usize) -> Vec<Vec<S>> {
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| if i == j { S::one() } else { S::zero() })
                .collect()
        })
        .collect()
}

/// The `(x, y)` coordinates of a corrugated polygon.
pub fn extract_xy<S: Scalar>(p: &CorrugatedPolygon<S>) -> Result<XYState<S>> {
    extract_coefficients(|i| p.lift(i), p.params)
}

/// `F_k`: intersections of consecutive `(k-1)`-diagonals.
pub fn fk_step<S: Scalar>(p: &CorrugatedPolygon<S>) -> Result<CorrugatedPolygon<S>> {
    let lifts = diagonal_intersections(|i| p.lift(i), p.params, p.n() + p.k())?;
    let out = CorrugatedPolygon {
        params: p.params,
        lifts,
        monodromy: p.monodromy.clone(),
    };
    out.check_corrugated().map_err(|e| match e {
        Error::GenericityLost(i) => Error::DegenerateIntersection(i),
        other => other,
    })?;
    Ok(out)
}

/// Projective dual: vertex `i` is the hyperplane through `V_i .. V_{i+k-2}`,
/// stored as its normal; the dual monodromy is the cofactor matrix of `M`.
pub fn dual_polygon<S: Scalar>(p: &CorrugatedPolygon<S>) -> Result<CorrugatedPolygon<S>> {
    let k = p.k();
    let lifts = (0..p.n() + k)
        .map(|i| {
            let window: Vec<Vec<S>> = (i..i + k - 1).map(|j| p.lift(j)).collect();
            let nv = cofactor_vector(&window);
            if nv.iter().all(Ring::is_zero) {
                Err(Error::DegenerateHyperplane(i % p.n() + 1))
            } else {
                Ok(nv)
            }
        })
        .collect::<Result<_>>()?;
    let out = CorrugatedPolygon {
        params: p.params,
        lifts,
        monodromy: cofactor_matrix(&p.monodromy),
    };
    out.check_corrugated().map_err(|e| match e {
        Error::GenericityLost(i) => Error::DegenerateHyperplane(i),
        other => other,
    })?;
    Ok(out)
}

/// Index shift in `extract(dual)_i = (-1)^k D_k(extract)_{i + shift}`; equals `r`.
pub fn duality_shift(params: MapParams) -> isize {
    params.ri()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{dk_apply, tk_step};
    use crate::random::{random_vec, random_xy, rng};
    use crate::scalar::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn sample(k: usize, n: usize, seed: u64) -> (XYState<Rational>, CorrugatedPolygon<Rational>) {
        let mut g = rng(seed);
        loop {
            let s = random_xy::<Rational>(MapParams::new(k, n).unwrap(), &mut g);
            if let Ok(p) = polygon_from_xy(&s, &standard_seed(k)) {
                return (s, p);
            }
        }
    }

    #[test]
    fn round_trip_and_window_ranks() {
        for (k, n, seed) in [(3, 5, 1), (4, 8, 2), (5, 11, 3), (6, 12, 4)] {
            let (s, p) = sample(k, n, seed);
            assert_eq!(p.lifts.len(), n + k);
            assert_eq!(extract_xy(&p).unwrap(), s);
            for i in 0..n {
                let four = [p.lift(i), p.lift(i + 1), p.lift(i + k - 1), p.lift(i + k)];
                assert_eq!(rank(&four), 3);
            }
        }
    }

    #[test]
    fn gauge_and_projective_independence() {
        let (s, p) = sample(4, 9, 5);
        let mut g = rng(50);
        let t: Vec<Rational> = random_vec(9, &mut g);
        assert_eq!(extract_xy(&p.rescaled(&t)).unwrap(), s);
        let m = Matrix::from_rows((0..4).map(|_| random_vec::<Rational>(4, &mut g)).collect());
        let moved = p.transformed(&m).unwrap();
        assert_eq!(extract_xy(&moved).unwrap(), s);
        let seeded = polygon_from_xy(
            &s,
            &(0..4)
                .map(|j| (0..4).map(|i| m.get(i, j).clone()).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(seeded.lifts, moved.lifts);
    }

    #[test]
    fn seed_must_be_independent() {
        let s = XYState::<Rational>::ones(MapParams::new(3, 5).unwrap());
        let seed = vec![
            vec![q(1), q(0), q(0)],
            vec![q(2), q(0), q(0)],
            vec![q(0), q(0), q(1)],
        ];
        assert_eq!(
            polygon_from_xy(&s, &seed).unwrap_err(),
            Error::DegenerateSeed
        );
    }

    #[test]
    fn non_corrugated_rejected() {
        let mut g = rng(6);
        let (k, n) = (4, 8);
        let m = Matrix::from_rows((0..k).map(|_| random_vec::<Rational>(k, &mut g)).collect());
        let mut lifts: Vec<Vec<Rational>> = (0..n).map(|_| random_vec(k, &mut g)).collect();
        for j in 0..k {
            lifts.push(mat_vec(&m, &lifts[j]));
        }
        assert!(matches!(
            CorrugatedPolygon::new(MapParams::new(k, n).unwrap(), lifts, m),
            Err(Error::GenericityLost(_))
        ));
    }

    #[test]
    fn fk_conjugates_tk() {
        for (k, n, seed) in [(3, 5, 7), (3, 8, 8), (4, 8, 9), (5, 11, 10)] {
            let (s, p) = sample(k, n, seed);
            let Ok(image) = fk_step(&p) else { continue };
            assert_eq!(image.monodromy, p.monodromy);
            assert_eq!(extract_xy(&image).unwrap(), tk_step(&s).unwrap(), "k = {k}");
        }
    }

    #[test]
    fn pentagram_cross_products() {
        let (_, p) = sample(3, 7, 11);
        let image = fk_step(&p).unwrap();
        let cross = |a: &[Rational], b: &[Rational]| {
            vec![
                a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
                a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
                a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
            ]
        };
        let n = 7;
        for i in 0..n {
            // j = i - r' - 1 = i - 2 for k = 3
            let j = i + n - 2;
            let l1 = cross(&p.lift(j), &p.lift(j + 2));
            let l2 = cross(&p.lift(j + 1), &p.lift(j + 3));
            let point = cross(&l1, &l2);
            assert!(linalg::proportional(&point, &image.lift(i)));
        }
    }

    #[test]
    fn duality_matches_dk_with_shift() {
        for (k, n, seed) in [(3, 5, 12), (3, 7, 13), (4, 8, 14), (5, 10, 15), (6, 12, 16)] {
            let (s, p) = sample(k, n, seed);
            let dual = dual_polygon(&p).unwrap();
            let got = extract_xy(&dual).unwrap();
            let d = dk_apply(&s).unwrap();
            let sign = if k % 2 == 0 { q(1) } else { q(-1) };
            let want = d.shifted(duality_shift(p.params)).scaled(&sign).unwrap();
            assert_eq!(got, want, "k = {k}, n = {n}");
            // the second dual returns vertex i + k - 2
            let back = extract_xy(&dual_polygon(&dual).unwrap()).unwrap();
            assert_eq!(back, s.shifted(k as isize - 2));
        }
    }

    #[test]
    fn json_round_trip() {
        let (_, p) = sample(3, 5, 17);
        let doc = p.to_json();
        assert_eq!(CorrugatedPolygon::<Rational>::from_json(&doc).unwrap(), p);
    }
}
