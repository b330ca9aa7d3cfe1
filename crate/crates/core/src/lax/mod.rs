//! Lax matrices, the monodromy, its characteristic polynomial and the
//! zero-curvature representation of `T_k`.
//!
//! Sign convention: the integrals are the coefficients of
//! `det(M(lambda) - z) = sum I_ij z^i lambda^j`. Every coefficient is
//! returned, including `i = 0` and `j = 0`. Under `(x, y) -> (t x, t y)` the
//! coefficient `I_ij` scales by `t^j`.

mod poly;

pub use poly::{BivarPoly, Matrix, Poly};

use crate::error::{Error, Result};
use crate::poisson::{xy_tensor, PoissonTensor};
use crate::random::{random_positive_xy, rng};
use crate::scalar::{approx_eq, Dual, Ring, Scalar};
use crate::states::{at, MapParams, XYState};

pub type PolyMatrix<S> = Matrix<Poly<S>>;

fn c<S: Scalar>(v: S) -> Poly<S> {
    Poly::constant(v)
}

fn lam<S: Scalar>(v: S) -> Poly<S> {
    Poly::monomial(v, 1)
}

/// `L_i(lambda)` (0-based `i`, cyclic).
///
/// `k = 2`: `[[lambda x_i, x_i + y_i], [lambda, 1]]`. For `k >= 3` the first
/// row is `(0, .., 0, x_i, x_i + y_i)`, `lambda` sits at `(2, 1)`, ones run
/// down the subdiagonal below it and the last row ends `(.., 1, 1)`.
pub fn lax_matrix<S: Scalar>(s: &XYState<S>, i: isize) -> PolyMatrix<S> {
    let k = s.k();
    let (x, y) = (at(&s.x, i).clone(), at(&s.y, i).clone());
    let mut m = Matrix::zeros(k);
    if k == 2 {
        m.set(0, 0, lam(x.clone()));
        m.set(0, 1, c(x + y));
        m.set(1, 0, lam(S::one()));
        m.set(1, 1, c(S::one()));
        return m;
    }
    m.set(0, k - 2, c(x.clone()));
    m.set(0, k - 1, c(x + y));
    m.set(1, 0, lam(S::one()));
    for row in 2..k - 1 {
        m.set(row, row - 1, c(S::one()));
    }
    m.set(k - 1, k - 2, c(S::one()));
    m.set(k - 1, k - 1, c(S::one()));
    m
}

/// `M(lambda) = L_1 .. L_n`.
pub fn monodromy<S: Scalar>(s: &XYState<S>) -> PolyMatrix<S> {
    ordered_product(s, 0, s.n() as isize)
}

/// `L_from L_{from+1} .. L_{from+len-1}`, indices cyclic.
pub fn ordered_product<S: Scalar>(s: &XYState<S>, from: isize, len: isize) -> PolyMatrix<S> {
    (from..from + len).fold(Matrix::identity(s.k()), |acc, i| acc.mul(&lax_matrix(s, i)))
}

/// `det(M(lambda) - z)` as a polynomial in `z` over polynomials in `lambda`.
pub fn char_poly<S: Scalar>(s: &XYState<S>) -> BivarPoly<S> {
    let m = monodromy(s);
    let k = s.k();
    let mut a: Matrix<BivarPoly<S>> = m.map(|e| Poly::constant(e.clone()));
    for i in 0..k {
        let shifted = a.get(i, i).clone() - Poly::var();
        a.set(i, i, shifted);
    }
    a.det()
}

/// Dense table `I_ij`, `0 <= i <= k`, `0 <= j <= n`, row-major in `i`.
pub fn integrals<S: Scalar>(s: &XYState<S>) -> Vec<(usize, usize, S)> {
    let cp = char_poly(s);
    let mut out = Vec::with_capacity((s.k() + 1) * (s.n() + 1));
    for i in 0..=s.k() {
        for j in 0..=s.n() {
            out.push((i, j, cp.coeff2(i, j)));
        }
    }
    out
}

/// `(i, j, I_ij, grad I_ij)`.
pub type IntegralGradient<S> = (usize, usize, S, Vec<S>);

/// Values and gradients (in `x_1..x_n, y_1..y_n`) of every `I_ij`.
pub fn integral_gradients<S: Scalar>(s: &XYState<S>) -> Result<Vec<IntegralGradient<S>>> {
    let point = s.to_vec();
    let dim = point.len();
    let seeds: Vec<Dual<S>> = point
        .iter()
        .enumerate()
        .map(|(i, v)| Dual::variable(v.clone(), i, dim))
        .collect();
    let ds = XYState::from_vec(s.params, &seeds)?;
    Ok(integrals(&ds)
        .into_iter()
        .map(|(i, j, d)| {
            let grad = (0..dim).map(|c| d.d(c)).collect();
            (i, j, d.re, grad)
        })
        .collect())
}

/// Result of an involutivity check.
#[derive(Clone, Debug, PartialEq)]
pub struct InvolutionReport {
    pub holds: bool,
    pub pairs_checked: usize,
    /// First pair `((i, j), (k, l))` with `{I_ij, I_kl} != 0`.
    pub counterexample: Option<((usize, usize), (usize, usize))>,
}

/// `{I_ij, I_kl} = 0` for all pairs at `s`, with the `(x, y)` bracket.
pub fn integrals_in_involution<S: Scalar>(s: &XYState<S>) -> Result<InvolutionReport> {
    let t = xy_tensor(s.params)?;
    involution_with(s, &t)
}

/// As [`integrals_in_involution`] with an explicit tensor (for negative
/// controls). Exact on rationals; `1e-8` relative to the gradient scale on
/// floats.
pub fn involution_with<S: Scalar>(
    s: &XYState<S>,
    tensor: &PoissonTensor,
) -> Result<InvolutionReport> {
    let point = s.to_vec();
    let grads: Vec<_> = integral_gradients(s)?
        .into_iter()
        .filter(|(_, _, _, g)| g.iter().any(|v| !v.is_zero()))
        .collect();
    let mut checked = 0;
    for (a, (i, j, _, ga)) in grads.iter().enumerate() {
        for (k, l, _, gb) in &grads[a + 1..] {
            checked += 1;
            let v = tensor.pair(&point, ga, gb);
            let ok = if S::EXACT {
                v.is_zero()
            } else {
                let scale = tensor.pair_scale(&point, ga, gb);
                v.magnitude() <= 1e-8 * scale.max(1.0)
            };
            if !ok {
                return Ok(InvolutionReport {
                    holds: false,
                    pairs_checked: checked,
                    counterexample: Some(((*i, *j), (*k, *l))),
                });
            }
        }
    }
    Ok(InvolutionReport {
        holds: true,
        pairs_checked: checked,
        counterexample: None,
    })
}

/// Scaling degree `d_ij` of each coefficient that is not identically zero:
/// `I_ij(t x, t y) = t^{d_ij} I_ij(x, y)`. Measured at a fixed random point
/// with `t = 2` and confirmed with `t = 3`.
pub fn homogeneity_degrees(params: MapParams) -> Result<Vec<((usize, usize), u32)>> {
    let s = random_positive_xy(params, &mut rng(0x5eed));
    let base = integrals(&s);
    let two = s.scaled(&crate::scalar::Rational::from_i64(2))?;
    let three = s.scaled(&crate::scalar::Rational::from_i64(3))?;
    let (i2, i3) = (integrals(&two), integrals(&three));
    let max_deg = (params.n + params.k) as u32;
    let mut out = Vec::new();
    for ((b, v2), v3) in base.iter().zip(&i2).zip(&i3) {
        let (i, j, v) = b;
        if v.is_zero() {
            continue;
        }
        let d = (0..=max_deg)
            .find(|&d| v2.2 == v.clone() * crate::scalar::Rational::from_i64(1 << d))
            .ok_or(Error::NonHomogeneous(*i, *j))?;
        if v3.2 != v.clone() * crate::scalar::Rational::from_i64(3).powi(d as i32)? {
            return Err(Error::NonHomogeneous(*i, *j));
        }
        out.push(((*i, *j), d));
    }
    Ok(out)
}

/// `lambda P_i(lambda)` for the zero-curvature representation (0-based `i`).
///
/// The displayed pattern is evaluated at base label `m = i - r' - 1`: with
/// that labeling `P_i L_{i+r-1} = L*_i P_{i+1}` holds for the state labeling
/// used by [`crate::dynamics::tk_step`]. Rows `1..k-3` carry
/// `x_j/sigma_j` and `y_{j+1}/sigma_{j+1}` on the superdiagonals (the first
/// of them divided by `lambda`); the last three rows are
///
/// ```text
/// (-1/sigma_{m+k-2}, 0, .., x_{m+k-3}/sigma_{m+k-3}, 1)
/// ( 1/sigma_{m+k-2}, -1/(lambda sigma_{m+k-1}), 0, .., 0)
/// ( 0,                1/(lambda sigma_{m+k-1}), 0, .., 0)
/// ```
///
/// For `k = 3` the rows overlap; the form that satisfies the identity has
/// the whole first row divided by `lambda`:
/// `(-1/sigma_{m+1}, x_m/sigma_m, 1) / lambda`,
/// `(1/sigma_{m+1}, -1/(lambda sigma_{m+2}), 0)`,
/// `(0, 1/(lambda sigma_{m+2}), 0)`.
///
/// Entries are returned multiplied by `lambda`, so they are polynomials of
/// degree at most one.
pub fn p_matrix<S: Scalar>(s: &XYState<S>, i: isize) -> Result<PolyMatrix<S>> {
    let k = s.k();
    if k == 2 {
        return Err(Error::UnsupportedSpan(2));
    }
    let sigma = s.sigmas()?;
    let m = i - s.params.rpi() - 1;
    let sg = |j: isize| at(&sigma, j).clone();
    let xs = |j: isize| at(&s.x, j).checked_div(&sg(j));
    let ys = |j: isize| at(&s.y, j).checked_div(&sg(j));
    let inv = |j: isize| sg(j).recip();
    let ku = k as isize;
    // entries of lambda P: `c` = lambda^0 (a 1/lambda entry), `lam` = lambda^1
    let mut p: PolyMatrix<S> = Matrix::zeros(k);
    let mut add = |row: usize, col: usize, v: Poly<S>| {
        let cur = p.get(row, col).clone();
        p.set(row, col, cur + v);
    };
    if k == 3 {
        add(0, 0, c(-inv(m + 1)?));
        add(0, 1, c(xs(m)?));
        add(0, 2, c(S::one()));
    } else {
        for a in 0..k - 3 {
            let ai = a as isize;
            let (u, v) = (xs(m + ai)?, ys(m + ai + 1)?);
            if a == 0 {
                add(a, a + 1, c(u));
                add(a, a + 2, c(v));
            } else {
                add(a, a + 1, lam(u));
                add(a, a + 2, lam(v));
            }
        }
        add(k - 3, 0, lam(-inv(m + ku - 2)?));
        add(k - 3, k - 2, lam(xs(m + ku - 3)?));
        add(k - 3, k - 1, lam(S::one()));
    }
    add(k - 2, 0, lam(inv(m + ku - 2)?));
    add(k - 2, 1, c(-inv(m + ku - 1)?));
    add(k - 1, 1, c(inv(m + ku - 1)?));
    Ok(p)
}

/// Outcome of [`zero_curvature_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroCurvatureReport {
    /// 0-based indices `i` where `P_i L_{i+r-1} != L*_i P_{i+1}`.
    pub failing: Vec<usize>,
    /// `M* P_1 = P_1 L_r .. L_n L_1 .. L_{r-1}` as polynomial matrices.
    pub monodromy_conjugated: bool,
}

impl ZeroCurvatureReport {
    pub fn holds(&self) -> bool {
        self.failing.is_empty() && self.monodromy_conjugated
    }
}

fn poly_matrices_equal<S: Scalar>(a: &PolyMatrix<S>, b: &PolyMatrix<S>) -> bool {
    let d = a.dim();
    (0..d).all(|i| {
        (0..d).all(|j| {
            let (pa, pb) = (a.get(i, j), b.get(i, j));
            let len = pa.coeffs().len().max(pb.coeffs().len());
            (0..len).all(|t| approx_eq(&pa.coeff(t), &pb.coeff(t), 1e-9))
        })
    })
}

/// Checks the zero-curvature identity for `s` and its image under `T_k`.
pub fn zero_curvature_check<S: Scalar>(s: &XYState<S>) -> Result<ZeroCurvatureReport> {
    let image = crate::dynamics::tk_step(s)?;
    zero_curvature_with(s, &image)
}

/// Checks `P_i L_{i+r-1} = L*_i P_{i+1}` for every `i` with `L*` built from
/// `image`, plus the monodromy conjugation. Inversion free.
pub fn zero_curvature_with<S: Scalar>(
    s: &XYState<S>,
    image: &XYState<S>,
) -> Result<ZeroCurvatureReport> {
    let n = s.n() as isize;
    let r = s.params.ri();
    let ps: Vec<PolyMatrix<S>> = (0..n).map(|i| p_matrix(s, i)).collect::<Result<_>>()?;
    let mut failing = Vec::new();
    for i in 0..n {
        let lhs = ps[i as usize].mul(&lax_matrix(s, i + r - 1));
        let rhs = lax_matrix(image, i).mul(at(&ps, i + 1));
        if !poly_matrices_equal(&lhs, &rhs) {
            failing.push(i as usize);
        }
    }
    let tail = ordered_product(s, r - 1, n);
    let lhs = monodromy(image).mul(&ps[0]);
    let rhs = ps[0].mul(&tail);
    Ok(ZeroCurvatureReport {
        failing,
        monodromy_conjugated: poly_matrices_equal(&lhs, &rhs),
    })
}

impl PoissonTensor {
    /// `sum_uv |B_uv u v df_u dg_v|`, the scale against which a floating
    /// bracket is compared with zero.
    pub fn pair_scale<S: Scalar>(&self, at: &[S], df: &[S], dg: &[S]) -> f64 {
        let m = self.dim();
        let mut acc = 0.0;
        for u in 0..m {
            for v in 0..m {
                if self.b[u][v] != 0 {
                    acc += (at[u].magnitude() * at[v].magnitude())
                        * df[u].magnitude()
                        * dg[v].magnitude();
                }
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::tk_step;
    use crate::random::random_xy;
    use crate::scalar::Rational;
    use crate::states::{pq_to_xy, xy_to_pq};

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn lp(c: &[i64]) -> Poly<Rational> {
        Poly::from_coeffs(c.iter().map(|&v| q(v)).collect())
    }

    #[test]
    fn small_lax_matrices() {
        let s = XYState::<Rational>::ones(MapParams::new(2, 2).unwrap());
        let l = lax_matrix(&s, 0);
        assert_eq!(
            l.rows(),
            vec![vec![lp(&[0, 1]), lp(&[2])], vec![lp(&[0, 1]), lp(&[1])]]
        );
        assert_eq!(l.det(), lp(&[0, -1]));

        let s = XYState::<Rational>::ones(MapParams::new(3, 3).unwrap());
        let l = lax_matrix(&s, 0);
        assert_eq!(
            l.rows(),
            vec![
                vec![lp(&[]), lp(&[1]), lp(&[2])],
                vec![lp(&[0, 1]), lp(&[]), lp(&[])],
                vec![lp(&[]), lp(&[1]), lp(&[1])],
            ]
        );

        let s = XYState::<Rational>::ones(MapParams::new(5, 5).unwrap());
        let l = lax_matrix(&s, 0);
        let lambdas: Vec<(usize, usize)> = (0..5)
            .flat_map(|i| (0..5).map(move |j| (i, j)))
            .filter(|&(i, j)| l.get(i, j).degree() == Some(1))
            .collect();
        assert_eq!(lambdas, vec![(1, 0)]);
    }

    #[test]
    fn two_by_two_monodromy_and_char_poly() {
        let s = XYState::<Rational>::ones(MapParams::new(2, 2).unwrap());
        let m = monodromy(&s);
        assert_eq!(
            m.rows(),
            vec![
                vec![lp(&[0, 2, 1]), lp(&[2, 2])],
                vec![lp(&[0, 1, 1]), lp(&[1, 2])]
            ]
        );
        let cp = char_poly(&s);
        assert_eq!(cp.coeff(2), lp(&[1]));
        assert_eq!(cp.coeff(1), lp(&[-1, -4, -1]));
        assert_eq!(cp.coeff(0), lp(&[0, 0, 1]));
    }

    #[test]
    fn det_two_ways() {
        let mut g = rng(4);
        for (k, n) in [(2, 5), (3, 5), (4, 7)] {
            let s = random_xy::<Rational>(MapParams::new(k, n).unwrap(), &mut g);
            let direct = (0..n as isize).fold(Poly::one(), |acc, i| acc * lax_matrix(&s, i).det());
            assert_eq!(char_poly(&s).coeff(0), direct);
        }
    }

    #[test]
    fn invariant_under_map_and_shift() {
        let mut g = rng(12);
        for (k, n) in [(2, 4), (3, 6), (4, 8), (5, 9)] {
            let s = random_xy::<Rational>(MapParams::new(k, n).unwrap(), &mut g);
            let cp = char_poly(&s);
            assert_eq!(char_poly(&tk_step(&s).unwrap()), cp);
            assert_eq!(char_poly(&s.shifted(1)), cp);
            assert_eq!(cp.coeff(k).coeff(0).magnitude(), 1.0);
        }
    }

    #[test]
    fn involution_exact_and_negative_control() {
        let mut g = rng(13);
        for (k, n) in [(2, 4), (3, 5)] {
            let s = random_xy::<Rational>(MapParams::new(k, n).unwrap(), &mut g);
            let rep = integrals_in_involution(&s).unwrap();
            assert!(rep.holds, "{rep:?}");
            let t = xy_tensor(s.params).unwrap();
            let (u, v) = t.first_entry();
            assert!(
                !involution_with(&s, &t.with_flipped_sign(u, v))
                    .unwrap()
                    .holds
            );
        }
        let s = XYState::<Rational>::ones(MapParams::new(4, 6).unwrap());
        assert!(integrals_in_involution(&s).is_err());
    }

    #[test]
    fn degrees_are_lambda_powers() {
        for (k, n) in [(2, 2), (3, 5), (4, 7)] {
            let degs = homogeneity_degrees(MapParams::new(k, n).unwrap()).unwrap();
            assert!(degs.iter().all(|&((_, j), d)| d as usize == j));
            assert!(degs.contains(&((k, 0), 0)));
        }
    }

    #[test]
    fn degree_zero_ratio_descends() {
        let params = MapParams::new(3, 5).unwrap();
        let s = random_xy::<Rational>(params, &mut rng(2));
        let pq = xy_to_pq(&s).unwrap();
        // I_{2,1} has degree 1, I_{1,5} degree 5: I_{2,1}^5 / I_{1,5}
        let ratio = |x1: i64| {
            let cp = char_poly(&pq_to_xy(&pq, q(x1)).unwrap());
            cp.coeff2(2, 1)
                .powi(5)
                .unwrap()
                .checked_div(&cp.coeff2(1, 5))
                .unwrap()
        };
        assert_eq!(ratio(1), ratio(-7));
    }

    #[test]
    fn p_matrix_first_row() {
        let s = XYState::<Rational>::ones(MapParams::new(5, 9).unwrap());
        let p = p_matrix(&s, 0).unwrap();
        let half = Rational::from_ratio(1, 2);
        // lambda P row 1 = (0, 1/2, 1/2, 0, 0)
        let row: Vec<Rational> = (0..5).map(|j| p.get(0, j).coeff(0)).collect();
        assert_eq!(row, vec![q(0), half.clone(), half, q(0), q(0)]);
        assert!(p_matrix(&XYState::<Rational>::ones(MapParams::new(2, 3).unwrap()), 0).is_err());
    }

    #[test]
    fn zero_curvature_all_spans() {
        let mut g = rng(17);
        for (k, n) in [(3, 5), (3, 7), (4, 8), (5, 11), (6, 11)] {
            let s = random_xy::<Rational>(MapParams::new(k, n).unwrap(), &mut g);
            let rep = zero_curvature_check(&s).unwrap();
            assert!(rep.holds(), "k = {k}, n = {n}: {rep:?}");
            let mut bad = tk_step(&s).unwrap();
            bad.x[2] = bad.x[2].clone() + q(1);
            assert!(!zero_curvature_with(&s, &bad).unwrap().holds());
        }
    }
}
