//! Span-2 geometry: pairs of twisted polygons on the projective line, the
//! leapfrog map `F_2`, its circle-pattern form `H_2`, the invariant 2-form
//! and the cross-ratio lattice.
//!
//! Points are homogeneous pairs `[u : v]` (infinity is `[1 : 0]`), so every
//! difference is the determinant `u_a v_b - u_b v_a` and the leapfrog rule
//! never divides by an infinite operand.
//!
//! The leapfrog rule sends `S^-_i` to its image under the projective
//! involution that fixes `S_i` and swaps `S_{i-1}, S_{i+1}`. In the chart
//! `w(P) = l(P) / det(P, S_i)`, where `l` is a linear form with
//! `l(S_i) != 0`, the point `S_i` sits at infinity, the involution is affine
//! and `w(S^+_i) = w(S_{i+1}) + w(S_{i-1}) - w(S^-_i)`. For finite points and
//! `l = v` this is the sum rule
//!
//! ```text
//! 1/(S^+_i - S_i) + 1/(S^-_i - S_i) = 1/(S_{i+1} - S_i) + 1/(S_{i-1} - S_i).
//! ```

mod lattice;

pub use lattice::{crossratio_extend, seed_from_orbit, toda_residual, LatticeField};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lax::Matrix;
use crate::scalar::{Complex64, Dual, Scalar, ScalarIo};
use crate::states::{MapParams, XYState};

/// Point `[u : v]` of the projective line.
#[derive(Clone, Debug)]
pub struct ProjPoint<S> {
    pub u: S,
    pub v: S,
}

impl<S: Scalar> ProjPoint<S> {
    pub fn finite(z: S) -> Self {
        ProjPoint { u: z, v: S::one() }
    }

    pub fn infinity() -> Self {
        ProjPoint {
            u: S::one(),
            v: S::zero(),
        }
    }

    pub fn new(u: S, v: S) -> Result<Self> {
        if u.vanishes() && v.vanishes() {
            return Err(Error::InvariantViolation("point [0 : 0]".into()));
        }
        Ok(ProjPoint { u, v })
    }

    pub fn is_infinite(&self) -> bool {
        self.v.vanishes()
    }

    /// Affine value `u / v`.
    pub fn value(&self) -> Result<S> {
        self.u.checked_div(&self.v)
    }

    /// `g . P` for a 2x2 matrix `g`.
    pub fn apply(&self, g: &Matrix<S>) -> Self {
        ProjPoint {
            u: g.get(0, 0).clone() * self.u.clone() + g.get(0, 1).clone() * self.v.clone(),
            v: g.get(1, 0).clone() * self.u.clone() + g.get(1, 1).clone() * self.v.clone(),
        }
    }

    /// Same point of the projective line.
    pub fn same(&self, other: &Self) -> bool {
        let d = diff(self, other);
        if S::EXACT {
            d.vanishes()
        } else {
            let scale = (self.u.magnitude().max(self.v.magnitude()))
                * (other.u.magnitude().max(other.v.magnitude()));
            d.magnitude() <= 1e-9 * scale.max(f64::MIN_POSITIVE)
        }
    }
}

/// `a - b` up to the scale of the representatives: `u_a v_b - u_b v_a`.
pub fn diff<S: Scalar>(a: &ProjPoint<S>, b: &ProjPoint<S>) -> S {
    a.u.clone() * b.v.clone() - b.u.clone() * a.v.clone()
}

/// Chordal distance on the projective line, in `[0, 1]`.
pub fn chordal_distance<S: Scalar>(a: &ProjPoint<S>, b: &ProjPoint<S>) -> f64 {
    let norm = |p: &ProjPoint<S>| p.u.magnitude().hypot(p.v.magnitude());
    diff(a, b).magnitude() / (norm(a) * norm(b)).max(f64::MIN_POSITIVE)
}

/// `[a, b, c, d] = (a - b)(c - d) / ((a - d)(b - c))`.
pub fn cross_ratio<S: Scalar>(
    a: &ProjPoint<S>,
    b: &ProjPoint<S>,
    c: &ProjPoint<S>,
    d: &ProjPoint<S>,
) -> Result<S> {
    let den = diff(a, d) * diff(b, c);
    if den.vanishes() {
        return Err(Error::DegenerateQuadruple);
    }
    (diff(a, b) * diff(c, d)).checked_div(&den)
}

/// Cross-ratio of four affine values.
pub fn cross_ratio_values<S: Scalar>(a: &S, b: &S, c: &S, d: &S) -> Result<S> {
    let p = |z: &S| ProjPoint::finite(z.clone());
    cross_ratio(&p(a), &p(b), &p(c), &p(d))
}

fn adjugate2<S: Scalar>(m: &Matrix<S>) -> Matrix<S> {
    Matrix::from_rows(vec![
        vec![m.get(1, 1).clone(), -m.get(0, 1).clone()],
        vec![-m.get(1, 0).clone(), m.get(0, 0).clone()],
    ])
}

/// Pair `(S^-, S)` of twisted `n`-gons with a shared monodromy.
#[derive(Clone, Debug)]
pub struct SPairState<S> {
    pub sminus: Vec<ProjPoint<S>>,
    pub s: Vec<ProjPoint<S>>,
    pub monodromy: Matrix<S>,
}

impl<S: Scalar> SPairState<S> {
    pub fn new(
        sminus: Vec<ProjPoint<S>>,
        s: Vec<ProjPoint<S>>,
        monodromy: Matrix<S>,
    ) -> Result<Self> {
        if s.is_empty() || s.len() != sminus.len() {
            return Err(Error::InvariantViolation(format!(
                "S has {} points and S^- has {}",
                s.len(),
                sminus.len()
            )));
        }
        if monodromy.dim() != 2 || monodromy.det().vanishes() {
            return Err(Error::InvariantViolation(
                "monodromy must be an invertible 2x2 matrix".into(),
            ));
        }
        if let Some(i) = s
            .iter()
            .chain(&sminus)
            .position(|p| p.u.vanishes() && p.v.vanishes())
        {
            return Err(Error::InvariantViolation(format!(
                "point {} is [0 : 0]",
                i % s.len() + 1
            )));
        }
        Ok(SPairState {
            sminus,
            s,
            monodromy,
        })
    }

    /// Finite points given by affine values.
    pub fn from_values(sminus: &[S], s: &[S], monodromy: Matrix<S>) -> Result<Self> {
        let pts = |v: &[S]| v.iter().cloned().map(ProjPoint::finite).collect();
        Self::new(pts(sminus), pts(s), monodromy)
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }

    fn twisted(&self, pts: &[ProjPoint<S>], i: isize) -> ProjPoint<S> {
        let n = self.n() as isize;
        let turns = i.div_euclid(n);
        let base = pts[i.rem_euclid(n) as usize].clone();
        if turns >= 0 {
            (0..turns).fold(base, |p, _| p.apply(&self.monodromy))
        } else {
            // the adjugate acts as the inverse on the projective line
            let inv = adjugate2(&self.monodromy);
            (0..-turns).fold(base, |p, _| p.apply(&inv))
        }
    }

    /// `S_i` for any integer `i`.
    pub fn s_at(&self, i: isize) -> ProjPoint<S> {
        self.twisted(&self.s, i)
    }

    /// `S^-_i` for any integer `i`.
    pub fn sminus_at(&self, i: isize) -> ProjPoint<S> {
        self.twisted(&self.sminus, i)
    }

    /// All points moved by `g`, monodromy conjugated.
    pub fn transformed(&self, g: &Matrix<S>) -> Self {
        let mv = |v: &[ProjPoint<S>]| v.iter().map(|p| p.apply(g)).collect();
        SPairState {
            sminus: mv(&self.sminus),
            s: mv(&self.s),
            monodromy: g.mul(&self.monodromy).mul(&adjugate2(g)),
        }
    }

    /// Affine values `(S^-, S)`; fails on points at infinity.
    pub fn values(&self) -> Result<(Vec<S>, Vec<S>)> {
        let vals = |v: &[ProjPoint<S>]| v.iter().map(ProjPoint::value).collect::<Result<Vec<S>>>();
        Ok((vals(&self.sminus)?, vals(&self.s)?))
    }
}

fn encode_point<S: ScalarIo>(p: &ProjPoint<S>) -> Value {
    match p.value() {
        Ok(z) if !p.is_infinite() => z.to_json(),
        _ => Value::String("inf".into()),
    }
}

fn decode_point<S: ScalarIo>(v: &Value) -> Result<ProjPoint<S>> {
    if v.as_str() == Some("inf") {
        Ok(ProjPoint::infinity())
    } else {
        S::from_json(v).map(ProjPoint::finite)
    }
}

impl<S: ScalarIo> SPairState<S> {
    /// `{"coords": "spair", "n", "sminus": [..], "s": [..], "monodromy": [[..]]}`,
    /// points as scalars or `"inf"`.
    pub fn to_json(&self) -> Value {
        let pts = |v: &[ProjPoint<S>]| v.iter().map(encode_point).collect::<Vec<_>>();
        let rows: Vec<Vec<Value>> = self
            .monodromy
            .rows()
            .iter()
            .map(|r| r.iter().map(ScalarIo::to_json).collect())
            .collect();
        json!({
            "coords": "spair",
            "n": self.n(),
            "sminus": pts(&self.sminus),
            "s": pts(&self.s),
            "monodromy": rows,
        })
    }

    pub fn from_json(doc: &Value) -> Result<Self> {
        let arr = |key: &str| {
            doc.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("missing array {key:?}")))
        };
        let pts = |key: &str| -> Result<Vec<ProjPoint<S>>> {
            arr(key)?.iter().map(decode_point).collect()
        };
        let rows: Vec<Vec<S>> = arr("monodromy")?
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::Parse("monodromy must hold arrays".into()))?
                    .iter()
                    .map(S::from_json)
                    .collect()
            })
            .collect::<Result<_>>()?;
        if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
            return Err(Error::Parse("monodromy must be 2x2".into()));
        }
        let out = Self::new(pts("sminus")?, pts("s")?, Matrix::from_rows(rows))?;
        if let Some(n) = doc.get("n").and_then(Value::as_u64) {
            if n as usize != out.n() {
                return Err(Error::InvariantViolation(format!(
                    "n = {n} but S has {} points",
                    out.n()
                )));
            }
        }
        Ok(out)
    }
}

/// The span-2 coordinates of a pair, with `A = S`, `B = S^-`:
///
/// ```text
/// x_i = (A_{i+1} - B_{i+2})(B_i - B_{i+1}) / ((B_i - A_{i+1})(B_{i+1} - B_{i+2}))
/// y_i = (B_{i+1} - A_{i+1})(B_{i+2} - A_{i+2})(B_i - B_{i+1})
///       / ((B_{i+1} - A_{i+2})(B_i - A_{i+1})(B_{i+1} - B_{i+2}))
/// ```
///
/// Both are ratios of determinants balanced in every point, so they do not
/// depend on representatives and are invariant under projective maps.
pub fn phi<S: Scalar>(st: &SPairState<S>) -> Result<XYState<S>> {
    let n = st.n();
    let params = MapParams::new(2, n)?;
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for i in 0..n as isize {
        let a = |j: isize| st.s_at(i + j);
        let b = |j: isize| st.sminus_at(i + j);
        let (b0, b1, b2) = (b(0), b(1), b(2));
        let (a1, a2) = (a(1), a(2));
        let bad = || Error::DegenerateConfiguration(i as usize + 1);
        let xd = diff(&b0, &a1) * diff(&b1, &b2);
        let yd = diff(&b1, &a2) * diff(&b0, &a1) * diff(&b1, &b2);
        if xd.vanishes() || yd.vanishes() {
            return Err(bad());
        }
        let xi = (diff(&a1, &b2) * diff(&b0, &b1)).checked_div(&xd)?;
        let yi = (diff(&b1, &a1) * diff(&b2, &a2) * diff(&b0, &b1)).checked_div(&yd)?;
        if xi.vanishes() || yi.vanishes() {
            return Err(bad());
        }
        x.push(xi);
        y.push(yi);
    }
    XYState::new(params, x, y)
}

/// `p_i = [S^-_{i+1}, S_{i+1}, S^-_{i+2}, S_{i+2}]` and
/// `q_i = [B_i, A_{i+1}, A_{i+2}, B_{i+3}] [B_{i+1}, B_{i+2}, A_{i+2}, B_{i+3}]
///      / ([B_i, B_{i+1}, B_{i+2}, B_{i+3}] [B_{i+1}, A_{i+1}, A_{i+2}, B_{i+3}])`,
/// the projection of [`phi`] written through cross-ratios.
pub fn pq_cross_ratios<S: Scalar>(st: &SPairState<S>) -> Result<(Vec<S>, Vec<S>)> {
    let n = st.n() as isize;
    let mut p = Vec::new();
    let mut q = Vec::new();
    for i in 0..n {
        let a = |j: isize| st.s_at(i + j);
        let b = |j: isize| st.sminus_at(i + j);
        p.push(cross_ratio(&b(1), &a(1), &b(2), &a(2))?);
        let num =
            cross_ratio(&b(0), &a(1), &a(2), &b(3))? * cross_ratio(&b(1), &b(2), &a(2), &b(3))?;
        let den =
            cross_ratio(&b(0), &b(1), &b(2), &b(3))? * cross_ratio(&b(1), &a(1), &a(2), &b(3))?;
        q.push(num.checked_div(&den)?);
    }
    Ok((p, q))
}

/// `l` with `l(S) != 0`: the larger of the two coordinates.
fn uses_u<S: Scalar>(s: &ProjPoint<S>) -> bool {
    s.u.magnitude() >= s.v.magnitude()
}

/// Chart `w(P) = l(P) / det(P, S)` centered at `S`.
fn chart<S: Scalar>(center: &ProjPoint<S>, p: &ProjPoint<S>, site: usize) -> Result<S> {
    let num = if uses_u(center) {
        p.u.clone()
    } else {
        p.v.clone()
    };
    let den = diff(p, center);
    if den.vanishes() {
        return Err(Error::DegenerateConfiguration(site + 1));
    }
    num.checked_div(&den)
}

/// The point with chart value `w`: the kernel of `l(P) - w det(P, S)`.
fn unchart<S: Scalar>(center: &ProjPoint<S>, w: S) -> ProjPoint<S> {
    let (s, t) = (center.u.clone(), center.v.clone());
    if uses_u(center) {
        ProjPoint {
            u: w.clone() * s,
            v: w * t - S::one(),
        }
    } else {
        ProjPoint {
            u: S::one() + w.clone() * s,
            v: w * t,
        }
    }
}

/// `S^+_i` by the leapfrog rule.
pub fn leapfrog_point<S: Scalar>(st: &SPairState<S>, i: usize) -> Result<ProjPoint<S>> {
    let ii = i as isize;
    let c = st.s_at(ii);
    let w = chart(&c, &st.s_at(ii + 1), i)? + chart(&c, &st.s_at(ii - 1), i)?
        - chart(&c, &st.sminus[i], i)?;
    Ok(unchart(&c, w))
}

/// `F_2(S^-, S) = (S, S^+)`.
pub fn f2_step<S: Scalar>(st: &SPairState<S>) -> Result<SPairState<S>> {
    let plus = (0..st.n())
        .map(|i| leapfrog_point(st, i))
        .collect::<Result<_>>()?;
    Ok(SPairState {
        sminus: st.s.clone(),
        s: plus,
        monodromy: st.monodromy.clone(),
    })
}

/// `S^+_i` from the Menelaus form of the rule,
///
/// ```text
/// (S^+ - S_{i+1})(S - S^-)(S - S_{i-1}) / ((S^+ - S)(S_{i+1} - S)(S^- - S_{i-1})) = -1,
/// ```
///
/// which is linear in `S^+`.
pub fn leapfrog_point_menelaus<S: Scalar>(st: &SPairState<S>, i: usize) -> Result<ProjPoint<S>> {
    let ii = i as isize;
    let (c, next, prev, minus) = (
        st.s_at(ii),
        st.s_at(ii + 1),
        st.s_at(ii - 1),
        st.sminus[i].clone(),
    );
    let num = diff(&c, &minus) * diff(&c, &prev);
    let den = diff(&next, &c) * diff(&minus, &prev);
    // diff(P, next) num + diff(P, c) den = alpha P.u + beta P.v
    let alpha = num.clone() * next.v.clone() + den.clone() * c.v.clone();
    let beta = -(num * next.u.clone() + den * c.u.clone());
    ProjPoint::new(beta, -alpha).map_err(|_| Error::DegenerateConfiguration(i + 1))
}

/// Value of the Menelaus ratio at `(S^-, S, S^+)` for site `i`; `-1` on a
/// leapfrog orbit.
pub fn menelaus_ratio<S: Scalar>(st: &SPairState<S>, plus: &ProjPoint<S>, i: usize) -> Result<S> {
    let ii = i as isize;
    let (c, next, prev, minus) = (
        st.s_at(ii),
        st.s_at(ii + 1),
        st.s_at(ii - 1),
        st.sminus[i].clone(),
    );
    let num = diff(plus, &next) * diff(&c, &minus) * diff(&c, &prev);
    let den = diff(plus, &c) * diff(&next, &c) * diff(&minus, &prev);
    if den.vanishes() {
        return Err(Error::DegenerateConfiguration(i + 1));
    }
    num.checked_div(&den)
}

/// Generalized circle in the complex plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GenCircle {
    Circle {
        center: Complex64,
        radius: f64,
    },
    /// Line through `point` with direction `dir`.
    Line {
        point: Complex64,
        dir: Complex64,
    },
}

/// Circle through three distinct points (a line when they are collinear).
pub fn circle_through(a: Complex64, b: Complex64, c: Complex64) -> Result<GenCircle> {
    let scale = (a - c).norm().max((b - c).norm()).max(f64::MIN_POSITIVE);
    if (a - b).norm() <= 1e-12 * scale
        || (b - c).norm() <= 1e-12 * scale
        || (a - c).norm() <= 1e-12 * scale
    {
        return Err(Error::DegenerateConfiguration(0));
    }
    let (ab, ac) = (b - a, c - a);
    let cross = ab.re * ac.im - ab.im * ac.re;
    if cross.abs() <= 1e-12 * ab.norm() * ac.norm() {
        return Ok(GenCircle::Line { point: a, dir: ab });
    }
    // circumcenter relative to a
    let d = 2.0 * cross;
    let (b2, c2) = (ab.norm_sqr(), ac.norm_sqr());
    let ux = (ac.im * b2 - ab.im * c2) / d;
    let uy = (ab.re * c2 - ac.re * b2) / d;
    let center = a + Complex64::new(ux, uy);
    Ok(GenCircle::Circle {
        center,
        radius: (center - a).norm(),
    })
}

/// The four circles of the construction at site `i`:
/// `(S_{i-1}, S^-_i, S_i)` tangent at `S_i` to `(S_i, S_{i+1}, S^+_i)`, and
/// `(S_{i+1}, S^-_i, S_i)` tangent at `S_i` to `(S_i, S_{i-1}, S^+_i)`.
pub fn construction_circles(
    st: &SPairState<Complex64>,
    plus: &ProjPoint<Complex64>,
    i: usize,
) -> Result<[GenCircle; 4]> {
    let ii = i as isize;
    let val =
        |p: ProjPoint<Complex64>| p.value().map_err(|_| Error::DegenerateConfiguration(i + 1));
    let (prev, c, next) = (
        val(st.s_at(ii - 1))?,
        val(st.s_at(ii))?,
        val(st.s_at(ii + 1))?,
    );
    let (minus, plus) = (val(st.sminus[i].clone())?, val(plus.clone())?);
    let tag = |r: Result<GenCircle>| r.map_err(|_| Error::DegenerateConfiguration(i + 1));
    Ok([
        tag(circle_through(prev, minus, c))?,
        tag(circle_through(c, next, plus))?,
        tag(circle_through(next, minus, c))?,
        tag(circle_through(c, prev, plus))?,
    ])
}

/// Intersection of `p + s d1` and `q + t d2` in the plane.
fn intersect_lines(
    p: Complex64,
    d1: Complex64,
    q: Complex64,
    d2: Complex64,
    site: usize,
) -> Result<Complex64> {
    let det = d1.re * (-d2.im) - d1.im * (-d2.re);
    let scale = d1.norm() * d2.norm();
    if det.abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateConfiguration(site + 1));
    }
    let r = q - p;
    let s = (r.re * (-d2.im) - r.im * (-d2.re)) / det;
    Ok(p + d1 * s)
}

fn collinear(a: Complex64, b: Complex64, c: Complex64) -> bool {
    let (u, v) = (b - a, c - a);
    (u.re * v.im - u.im * v.re).abs() <= 1e-12 * (u.norm() * v.norm()).max(f64::MIN_POSITIVE)
}

/// `H_2`: at each site the circle through `S_i, S_{i+1}` tangent at `S_i` to
/// the circle `(S_{i-1}, S^-_i, S_i)` meets the circle through `S_i, S_{i-1}`
/// tangent to `(S_{i+1}, S^-_i, S_i)` again at `S^+_i`.
///
/// Computed in the chart `w = 1/(z - S_i)`: circles through `S_i` become
/// lines and tangency at `S_i` becomes parallelism, so the two new circles
/// are the line through `w(S_{i+1})` parallel to `w(S^-_i) - w(S_{i-1})`
/// and the line through `w(S_{i-1})` parallel to `w(S^-_i) - w(S_{i+1})`.
pub fn h2_step(st: &SPairState<Complex64>) -> Result<SPairState<Complex64>> {
    let mut plus = Vec::with_capacity(st.n());
    for i in 0..st.n() {
        let ii = i as isize;
        let bad = || Error::DegenerateConfiguration(i + 1);
        let c = st.s_at(ii).value().map_err(|_| bad())?;
        let w = |p: ProjPoint<Complex64>| -> Result<Complex64> {
            let z = p.value().map_err(|_| bad())?;
            if (z - c).norm() == 0.0 {
                return Err(bad());
            }
            Ok(1.0 / (z - c))
        };
        let (wn, wp, wm) = (
            w(st.s_at(ii + 1))?,
            w(st.s_at(ii - 1))?,
            w(st.sminus[i].clone())?,
        );
        let wplus = match intersect_lines(wn, wm - wp, wp, wm - wn, i) {
            Ok(w) => w,
            // all four points on one circle: both lines coincide and the
            // construction degenerates to its limit, the parallelogram vertex
            Err(_) if collinear(wn, wp, wm) => wn + wp - wm,
            Err(e) => return Err(e),
        };
        plus.push(if wplus.norm() == 0.0 {
            ProjPoint::infinity()
        } else {
            ProjPoint::finite(c + 1.0 / wplus)
        });
    }
    Ok(SPairState {
        sminus: st.s.clone(),
        s: plus,
        monodromy: st.monodromy.clone(),
    })
}

/// `omega(a, b) = sum_i (a^-_i b_i - b^-_i a_i) / (S^-_i - S_i)^2` for
/// tangent vectors laid out as `(dS^-_1 .. dS^-_n, dS_1 .. dS_n)` in affine
/// coordinates.
pub fn omega_eval<S: Scalar>(st: &SPairState<S>, a: &[S], b: &[S]) -> Result<S> {
    omega_terms(st, a, b).map(|t| t.into_iter().fold(S::zero(), |acc, x| acc + x))
}

fn omega_terms<S: Scalar>(st: &SPairState<S>, a: &[S], b: &[S]) -> Result<Vec<S>> {
    let n = st.n();
    if a.len() != 2 * n || b.len() != 2 * n {
        return Err(Error::BadParams(format!(
            "tangent vectors must have length {}",
            2 * n
        )));
    }
    let (sm, s) = st.values().map_err(|_| Error::DegenerateConfiguration(0))?;
    (0..n)
        .map(|i| {
            let d = sm[i].clone() - s[i].clone();
            let d2 = d.clone() * d;
            if d2.vanishes() {
                return Err(Error::DegenerateConfiguration(i + 1));
            }
            let num = a[i].clone() * b[n + i].clone() - b[i].clone() * a[n + i].clone();
            num.checked_div(&d2)
        })
        .collect()
}

/// The image state and the pushed-forward tangents `(F_2* a, F_2* b)`.
fn pushforward<S: Scalar>(
    st: &SPairState<S>,
    a: &[S],
    b: &[S],
) -> Result<(SPairState<S>, Vec<S>, Vec<S>)> {
    let n = st.n();
    if a.len() != 2 * n || b.len() != 2 * n {
        return Err(Error::BadParams(format!(
            "tangent vectors must have length {}",
            2 * n
        )));
    }
    let (sm, s) = st.values().map_err(|_| Error::DegenerateConfiguration(0))?;
    let lift = |vals: &[S], off: usize| -> Vec<Dual<S>> {
        vals.iter()
            .enumerate()
            .map(|(i, z)| {
                Dual::with_tangent(z.clone(), vec![a[off + i].clone(), b[off + i].clone()])
            })
            .collect()
    };
    let dual = SPairState::from_values(
        &lift(&sm, 0),
        &lift(&s, n),
        st.monodromy.map(|v| Dual::constant(v.clone())),
    )?;
    let image = f2_step(&dual)?;
    let (im_m, im_s) = image
        .values()
        .map_err(|_| Error::DegenerateConfiguration(0))?;
    let tangent = |c: usize| -> Vec<S> { im_m.iter().chain(&im_s).map(|z| z.d(c)).collect() };
    let plain = SPairState::from_values(
        &im_m.iter().map(|z| z.re.clone()).collect::<Vec<_>>(),
        &im_s.iter().map(|z| z.re.clone()).collect::<Vec<_>>(),
        st.monodromy.clone(),
    )?;
    Ok((plain, tangent(0), tangent(1)))
}

/// `(omega(F_2 s; F_2* a, F_2* b), omega(s; a, b))`, the tangents pushed
/// forward by forward-mode differentiation with the monodromy fixed.
pub fn omega_pushforward<S: Scalar>(st: &SPairState<S>, a: &[S], b: &[S]) -> Result<(S, S)> {
    let before = omega_eval(st, a, b)?;
    let (image, pa, pb) = pushforward(st, a, b)?;
    Ok((omega_eval(&image, &pa, &pb)?, before))
}

/// Largest sum of term magnitudes of the two sides of
/// [`omega_pushforward`]: the scale against which float round-off in the
/// comparison should be measured.
pub fn omega_scale<S: Scalar>(st: &SPairState<S>, a: &[S], b: &[S]) -> Result<f64> {
    let size = |t: Vec<S>| t.iter().map(Scalar::magnitude).sum::<f64>();
    let (image, pa, pb) = pushforward(st, a, b)?;
    Ok(size(omega_terms(st, a, b)?).max(size(omega_terms(&image, &pa, &pb)?)))
}
