//! Coordinate systems and the conversions among them.
//!
//! Storage is 0-based: entry `v[i]` is the 1-based `v_{i+1}`. Every cyclic
//! read goes through [`at`], so the offsets in the formulas below are the
//! only place index conventions appear.

mod json;

pub use json::{AnyState, CoordKind};

use crate::error::{Error, Result};
use crate::scalar::{approx_eq, product, Scalar, DEFAULT_MAX_BITS};

/// Cyclic read `v[i mod n]`.
#[inline]
pub fn at<S>(v: &[S], i: isize) -> &S {
    &v[i.rem_euclid(v.len() as isize) as usize]
}

/// `w[i] = v[i + m]`.
pub fn shift<S: Clone>(v: &[S], m: isize) -> Vec<S> {
    (0..v.len() as isize)
        .map(|i| at(v, i + m).clone())
        .collect()
}

/// Span `k`, period `n` and the derived offsets `r = floor(k/2) - 1`,
/// `r' = k - 2 - r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MapParams {
    pub k: usize,
    pub n: usize,
    pub r: usize,
    pub rprime: usize,
}

impl MapParams {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k < 2 || k > n {
            return Err(Error::BadSpan { k, n });
        }
        let r = k / 2 - 1;
        Ok(MapParams {
            k,
            n,
            r,
            rprime: k - 2 - r,
        })
    }

    /// `n >= 2k - 1`, where the `(x, y)` bracket is known.
    pub fn in_stable_range(&self) -> bool {
        self.n + 1 >= 2 * self.k
    }

    pub fn require_stable(&self) -> Result<()> {
        if self.in_stable_range() {
            Ok(())
        } else {
            Err(Error::OutsideStableRange {
                k: self.k,
                n: self.n,
            })
        }
    }

    pub(crate) fn ri(&self) -> isize {
        self.r as isize
    }

    pub(crate) fn rpi(&self) -> isize {
        self.rprime as isize
    }
}

/// Cap on the bit length of exact coordinates. Orbits of rational maps grow
/// quickly; the guard turns a stall into an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeGuard {
    pub max_bits: u64,
}

impl Default for SizeGuard {
    fn default() -> Self {
        SizeGuard {
            max_bits: DEFAULT_MAX_BITS,
        }
    }
}

impl SizeGuard {
    pub fn new(max_bits: u64) -> Self {
        SizeGuard { max_bits }
    }

    pub fn check<'a, S: Scalar>(&self, values: impl IntoIterator<Item = &'a S>) -> Result<()> {
        for v in values {
            let bits = v.bit_len();
            if bits > self.max_bits {
                return Err(Error::SizeLimit {
                    bits,
                    cap: self.max_bits,
                });
            }
        }
        Ok(())
    }
}

fn check_entries<S: Scalar>(name: &str, v: &[S], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::InvariantViolation(format!(
            "{name} has {} entries, expected n = {n}",
            v.len()
        )));
    }
    for (i, e) in v.iter().enumerate() {
        if !e.is_finite() {
            return Err(Error::InvariantViolation(format!(
                "{name}_{} is not finite",
                i + 1
            )));
        }
        if e.vanishes() {
            return Err(Error::InvariantViolation(format!("{name}_{} = 0", i + 1)));
        }
    }
    Ok(())
}

/// Weights `(x, y)` of the elementary network; `sigma_i = x_i + y_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct XYState<S> {
    pub params: MapParams,
    pub x: Vec<S>,
    pub y: Vec<S>,
}

impl<S: Scalar> XYState<S> {
    pub fn new(params: MapParams, x: Vec<S>, y: Vec<S>) -> Result<Self> {
        check_entries("x", &x, params.n)?;
        check_entries("y", &y, params.n)?;
        Ok(XYState { params, x, y })
    }

    /// Constant state `x_i = a`, `y_i = b`.
    pub fn constant(params: MapParams, a: S, b: S) -> Result<Self> {
        Self::new(params, vec![a; params.n], vec![b; params.n])
    }

    pub fn ones(params: MapParams) -> Self {
        Self::constant(params, S::one(), S::one()).expect("ones are nonzero")
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn k(&self) -> usize {
        self.params.k
    }

    /// `sigma_i = x_i + y_i` (0-based, cyclic).
    pub fn sigma(&self, i: isize) -> S {
        at(&self.x, i).clone() + at(&self.y, i).clone()
    }

    /// All `sigma_i`, failing on the first vanishing one.
    pub fn sigmas(&self) -> Result<Vec<S>> {
        (0..self.n())
            .map(|i| {
                let s = self.sigma(i as isize);
                if s.vanishes() {
                    Err(Error::SigmaVanishes(i + 1))
                } else {
                    Ok(s)
                }
            })
            .collect()
    }

    /// The scaling action `(t x, t y)`.
    pub fn scaled(&self, t: &S) -> Result<Self> {
        let f = |v: &[S]| v.iter().map(|e| t.clone() * e.clone()).collect();
        Self::new(self.params, f(&self.x), f(&self.y))
    }

    /// Cyclic relabeling `i -> i + m`.
    pub fn shifted(&self, m: isize) -> Self {
        XYState {
            params: self.params,
            x: shift(&self.x, m),
            y: shift(&self.y, m),
        }
    }

    /// Flattened `(x_1..x_n, y_1..y_n)`.
    pub fn to_vec(&self) -> Vec<S> {
        self.x.iter().chain(&self.y).cloned().collect()
    }

    pub fn from_vec(params: MapParams, v: &[S]) -> Result<Self> {
        let n = params.n;
        if v.len() != 2 * n {
            return Err(Error::InvariantViolation(format!(
                "expected {} coordinates, got {}",
                2 * n,
                v.len()
            )));
        }
        Self::new(params, v[..n].to_vec(), v[n..].to_vec())
    }

    pub fn max_bits(&self) -> u64 {
        self.x
            .iter()
            .chain(&self.y)
            .map(Scalar::bit_len)
            .max()
            .unwrap_or(0)
    }
}

/// Cluster coordinates `(p, q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PQState<S> {
    pub params: MapParams,
    pub p: Vec<S>,
    pub q: Vec<S>,
}

impl<S: Scalar> PQState<S> {
    pub fn new(params: MapParams, p: Vec<S>, q: Vec<S>) -> Result<Self> {
        check_entries("p", &p, params.n)?;
        check_entries("q", &q, params.n)?;
        Ok(PQState { params, p, q })
    }

    pub fn ones(params: MapParams) -> Self {
        Self::new(params, vec![S::one(); params.n], vec![S::one(); params.n])
            .expect("ones are nonzero")
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    /// The Casimir `prod p_i q_i`.
    pub fn casimir(&self) -> S {
        product(self.p.iter().chain(&self.q).cloned())
    }

    pub fn to_vec(&self) -> Vec<S> {
        self.p.iter().chain(&self.q).cloned().collect()
    }

    pub fn from_vec(params: MapParams, v: &[S]) -> Result<Self> {
        let n = params.n;
        if v.len() != 2 * n {
            return Err(Error::InvariantViolation(format!(
                "expected {} coordinates, got {}",
                2 * n,
                v.len()
            )));
        }
        Self::new(params, v[..n].to_vec(), v[n..].to_vec())
    }

    pub fn shifted(&self, m: isize) -> Self {
        PQState {
            params: self.params,
            p: shift(&self.p, m),
            q: shift(&self.q, m),
        }
    }

    pub fn max_bits(&self) -> u64 {
        self.p
            .iter()
            .chain(&self.q)
            .map(Scalar::bit_len)
            .max()
            .unwrap_or(0)
    }
}

/// Corner invariants `(X, Y)` of a twisted polygon in the plane. Fields `x`
/// and `y` hold `X_i` and `Y_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct CornerState<S> {
    pub n: usize,
    pub x: Vec<S>,
    pub y: Vec<S>,
}

impl<S: Scalar> CornerState<S> {
    pub fn new(x: Vec<S>, y: Vec<S>) -> Result<Self> {
        let n = x.len();
        if n < 3 {
            return Err(Error::BadSpan { k: 3, n });
        }
        check_entries("X", &x, n)?;
        check_entries("Y", &y, n)?;
        Ok(CornerState { n, x, y })
    }

    /// The action `(t X, Y / t)`.
    pub fn scaled(&self, t: &S) -> Result<Self> {
        let x = self.x.iter().map(|v| t.clone() * v.clone()).collect();
        let y = self
            .y
            .iter()
            .map(|v| v.checked_div(t))
            .collect::<Result<Vec<_>>>()?;
        Self::new(x, y)
    }

    pub fn shifted(&self, m: isize) -> Self {
        CornerState {
            n: self.n,
            x: shift(&self.x, m),
            y: shift(&self.y, m),
        }
    }
}

/// Edge weights around the faces of the elementary network.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeWeights<S> {
    pub params: MapParams,
    pub a: Vec<S>,
    pub b: Vec<S>,
    pub c: Vec<S>,
    pub d: Vec<S>,
}

impl<S: Scalar> EdgeWeights<S> {
    pub fn new(params: MapParams, a: Vec<S>, b: Vec<S>, c: Vec<S>, d: Vec<S>) -> Result<Self> {
        for (name, v) in [("a", &a), ("b", &b), ("c", &c), ("d", &d)] {
            check_entries(name, v, params.n)?;
        }
        Ok(EdgeWeights { params, a, b, c, d })
    }

    /// Gauge transformation at the vertex carrying index `j` (0-based):
    /// `b_j t`, `c_j / t`, `a_{j+k-1} / t`, `d_{j+k-1} / t`. Face weights,
    /// hence [`edgeweights_to_xy`], are unchanged.
    pub fn gauge(&self, j: usize, t: &S) -> Result<Self> {
        let n = self.params.n;
        let j = j % n;
        let jk = (j + self.params.k - 1) % n;
        let mut w = self.clone();
        w.b[j] = w.b[j].clone() * t.clone();
        w.c[j] = w.c[j].checked_div(t)?;
        w.a[jk] = w.a[jk].checked_div(t)?;
        w.d[jk] = w.d[jk].checked_div(t)?;
        Self::new(w.params, w.a, w.b, w.c, w.d)
    }
}

/// `p_i = y_i / x_i`, `q_i = x_{i+r+1} / y_{i+r}`.
pub fn xy_to_pq<S: Scalar>(s: &XYState<S>) -> Result<PQState<S>> {
    let r = s.params.ri();
    let mut p = Vec::with_capacity(s.n());
    let mut q = Vec::with_capacity(s.n());
    for i in 0..s.n() as isize {
        p.push(at(&s.y, i).checked_div(at(&s.x, i))?);
        q.push(at(&s.x, i + r + 1).checked_div(at(&s.y, i + r))?);
    }
    PQState::new(s.params, p, q)
}

/// Inverse of [`xy_to_pq`] on the level `prod p_i q_i = 1`, with the fiber
/// coordinate `x_1` given explicitly: `x_{i+1} = x_i p_i q_{i-r}`,
/// `y_i = x_i p_i`.
pub fn pq_to_xy<S: Scalar>(s: &PQState<S>, x1: S) -> Result<XYState<S>> {
    if !approx_eq(&s.casimir(), &S::one(), 1e-9) {
        return Err(Error::NotOnCasimirLevel);
    }
    if x1.vanishes() {
        return Err(Error::InvariantViolation("x_1 = 0".into()));
    }
    let r = s.params.ri();
    let n = s.n();
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    let mut cur = x1;
    for i in 0..n as isize {
        let yi = cur.clone() * at(&s.p, i).clone();
        let next = yi.clone() * at(&s.q, i - r).clone();
        x.push(cur);
        y.push(yi);
        cur = next;
    }
    XYState::new(s.params, x, y)
}

/// `Y_i = x_i`, `X_{i+1} = -y_i / (x_i x_{i+1})`. Span 3 only.
pub fn xy_to_corner<S: Scalar>(s: &XYState<S>) -> Result<CornerState<S>> {
    if s.k() != 3 {
        return Err(Error::WrongSpan {
            expected: 3,
            got: s.k(),
        });
    }
    let n = s.n();
    let mut big_x = vec![S::zero(); n];
    for i in 0..n as isize {
        let den = at(&s.x, i).clone() * at(&s.x, i + 1).clone();
        big_x[(i as usize + 1) % n] = -at(&s.y, i).checked_div(&den)?;
    }
    CornerState::new(big_x, s.x.clone())
}

/// `x_i = Y_i`, `y_i = -Y_i X_{i+1} Y_{i+1}`.
pub fn corner_to_xy<S: Scalar>(s: &CornerState<S>) -> Result<XYState<S>> {
    let params = MapParams::new(3, s.n)?;
    let y = (0..s.n as isize)
        .map(|i| -(at(&s.y, i).clone() * at(&s.x, i + 1).clone() * at(&s.y, i + 1).clone()))
        .collect();
    XYState::new(params, s.y.clone(), y)
}

/// Product of `v_j` over `lo <= j <= hi`, 1 when the range is empty.
fn range_product<S: Scalar>(v: &[S], lo: isize, hi: isize) -> S {
    product((lo..=hi).map(|j| at(v, j).clone()))
}

/// Face weights from edge weights:
/// `y_i = d_i / (b_{i-k+2}..b_i c_{i-k+1}..c_i)`,
/// `x_i = a_i / (b_{i-k+2}..b_{i-1} c_{i-k+1}..c_{i-1})`.
/// Empty ranges (small `k`) contribute 1.
pub fn edgeweights_to_xy<S: Scalar>(w: &EdgeWeights<S>) -> Result<XYState<S>> {
    let k = w.params.k as isize;
    let mut x = Vec::with_capacity(w.params.n);
    let mut y = Vec::with_capacity(w.params.n);
    for i in 0..w.params.n as isize {
        let yden = range_product(&w.b, i - k + 2, i) * range_product(&w.c, i - k + 1, i);
        let xden = range_product(&w.b, i - k + 2, i - 1) * range_product(&w.c, i - k + 1, i - 1);
        y.push(at(&w.d, i).checked_div(&yden)?);
        x.push(at(&w.a, i).checked_div(&xden)?);
    }
    XYState::new(w.params, x, y)
}
