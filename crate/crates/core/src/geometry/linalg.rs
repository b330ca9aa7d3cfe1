//! Gaussian elimination over any [`Scalar`].
//!
//! Matrices given as column lists (`cols[j][i]` is row `i`, column `j`).
//! Rank decisions are exact on rationals and relative to the largest entry on
//! floats.

use crate::error::{Error, Result};
use crate::lax::Matrix;
use crate::scalar::{negligible, Scalar, FLOAT_ZERO_TOL};

/// Row echelon data: reduced rows and pivot columns.
struct Echelon<S> {
    rows: Vec<Vec<S>>,
    pivots: Vec<usize>,
}

fn scale_of<S: Scalar>(rows: &[Vec<S>]) -> f64 {
    rows.iter()
        .flatten()
        .map(Scalar::magnitude)
        .fold(0.0, f64::max)
}

/// Reduced row echelon form with partial pivoting by magnitude.
fn rref<S: Scalar>(mut rows: Vec<Vec<S>>, tol: f64) -> Result<Echelon<S>> {
    let scale = scale_of(&rows);
    let small = |v: &S| {
        if S::EXACT {
            v.vanishes()
        } else {
            v.magnitude() <= tol * scale.max(f64::MIN_POSITIVE)
        }
    };
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let best = (r..rows.len())
            .filter(|&i| !small(&rows[i][c]))
            .max_by(|&a, &b| rows[a][c].magnitude().total_cmp(&rows[b][c].magnitude()));
        let Some(p) = best else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip()?;
        for v in rows[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            let pivot_row = rows[r].clone();
            for (v, p) in rows[i].iter_mut().zip(pivot_row) {
                *v = v.clone() - f.clone() * p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok(Echelon { rows, pivots })
}

fn to_rows<S: Scalar>(cols: &[Vec<S>]) -> Vec<Vec<S>> {
    let m = cols.first().map_or(0, Vec::len);
    (0..m)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect()
}

pub fn rank<S: Scalar>(cols: &[Vec<S>]) -> usize {
    rank_tol(cols, FLOAT_ZERO_TOL)
}

pub fn rank_tol<S: Scalar>(cols: &[Vec<S>], tol: f64) -> usize {
    rref(to_rows(cols), tol).map_or(0, |e| e.pivots.len())
}

/// Basis of `{c : sum_j c_j cols[j] = 0}`, each vector normalized by a unit
/// entry at its free column.
pub fn nullspace<S: Scalar>(cols: &[Vec<S>]) -> Vec<Vec<S>> {
    nullspace_tol(cols, FLOAT_ZERO_TOL)
}

pub fn nullspace_tol<S: Scalar>(cols: &[Vec<S>], tol: f64) -> Vec<Vec<S>> {
    let n = cols.len();
    let Ok(e) = rref(to_rows(cols), tol) else {
        return Vec::new();
    };
    (0..n)
        .filter(|c| !e.pivots.contains(c))
        .map(|free| {
            let mut v = vec![S::zero(); n];
            v[free] = S::one();
            for (row, &p) in e.pivots.iter().enumerate() {
                v[p] = -e.rows[row][free].clone();
            }
            v
        })
        .collect()
}

/// Unique solution of `sum_j c_j cols[j] = rhs`.
pub fn solve<S: Scalar>(cols: &[Vec<S>], rhs: &[S]) -> Result<Vec<S>> {
    let n = cols.len();
    let mut aug = cols.to_vec();
    aug.push(rhs.to_vec());
    let e = rref(to_rows(&aug), FLOAT_ZERO_TOL)?;
    if e.pivots.len() != n || e.pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return Err(Error::DegenerateConfiguration(0));
    }
    let sol: Vec<S> = (0..n).map(|i| e.rows[i][n].clone()).collect();
    // a consistent system leaves nothing in the remaining rows
    let scale = scale_of(&e.rows).max(1.0);
    if e.rows[n..].iter().any(|r| !negligible(&r[n], scale)) {
        return Err(Error::DegenerateConfiguration(0));
    }
    Ok(sol)
}

pub fn mat_vec<S: Scalar>(m: &Matrix<S>, v: &[S]) -> Vec<S> {
    (0..m.dim())
        .map(|i| (0..m.dim()).fold(S::zero(), |acc, j| acc + m.get(i, j).clone() * v[j].clone()))
        .collect()
}

pub fn transpose<S: Scalar>(m: &Matrix<S>) -> Matrix<S> {
    let d = m.dim();
    Matrix::from_rows(
        (0..d)
            .map(|i| (0..d).map(|j| m.get(j, i).clone()).collect())
            .collect(),
    )
}

/// Matrix whose columns are `cols`.
pub fn from_cols<S: Scalar>(cols: &[Vec<S>]) -> Matrix<S> {
    Matrix::from_rows(to_rows(cols))
}

/// Determinant of the square matrix with columns `cols`.
pub fn det_cols<S: Scalar>(cols: &[Vec<S>]) -> S {
    from_cols(cols).det()
}

/// `(cof)_ij = (-1)^{i+j} det(minor_ij)`, equal to `det(M) M^{-T}`.
pub fn cofactor_matrix<S: Scalar>(m: &Matrix<S>) -> Matrix<S> {
    let d = m.dim();
    let mut out = Matrix::zeros(d);
    for i in 0..d {
        for j in 0..d {
            let minor: Vec<Vec<S>> = (0..d)
                .filter(|&a| a != i)
                .map(|a| {
                    (0..d)
                        .filter(|&b| b != j)
                        .map(|b| m.get(a, b).clone())
                        .collect()
                })
                .collect();
            let v = Matrix::from_rows(minor).det();
            out.set(i, j, if (i + j) % 2 == 0 { v } else { -v });
        }
    }
    out
}

pub fn inverse<S: Scalar>(m: &Matrix<S>) -> Result<Matrix<S>> {
    let d = m.dim();
    let cols: Vec<Vec<S>> = (0..d)
        .map(|j| (0..d).map(|i| m.get(i, j).clone()).collect())
        .collect();
    let inv_cols: Vec<Vec<S>> = (0..d)
        .map(|j| {
            let mut e = vec![S::zero(); d];
            e[j] = S::one();
            solve(&cols, &e)
        })
        .collect::<Result<_>>()?;
    Ok(from_cols(&inv_cols))
}

/// Vector `n` with `det(v_1, .., v_{d-1}, w) = n . w` for every `w`.
pub fn cofactor_vector<S: Scalar>(cols: &[Vec<S>]) -> Vec<S> {
    let d = cols.len() + 1;
    (0..d)
        .map(|j| {
            let minor: Vec<Vec<S>> = (0..d)
                .filter(|&a| a != j)
                .map(|a| cols.iter().map(|c| c[a].clone()).collect())
                .collect();
            let v = Matrix::from_rows(minor).det();
            if (j + d - 1).is_multiple_of(2) {
                v
            } else {
                -v
            }
        })
        .collect()
}

/// `a` and `b` span the same line (both nonzero).
pub fn proportional<S: Scalar>(a: &[S], b: &[S]) -> bool {
    rank(&[a.to_vec(), b.to_vec()]) == 1
}

/// Roots of a monic-normalizable complex polynomial (coefficients low to
/// high) by Durand-Kerner iteration, polished with Newton steps and sorted
/// by real then imaginary part.
pub fn complex_roots(coeffs: &[num_complex::Complex64]) -> Result<Vec<num_complex::Complex64>> {
    use num_complex::Complex64 as C;
    let deg = coeffs
        .len()
        .checked_sub(1)
        .ok_or(Error::DegenerateConfiguration(0))?;
    let lead = coeffs[deg];
    if lead.norm() == 0.0 {
        return Err(Error::DegenerateConfiguration(0));
    }
    let monic: Vec<C> = coeffs.iter().map(|c| c / lead).collect();
    let eval = |z: C| {
        monic
            .iter()
            .rev()
            .fold(C::new(0.0, 0.0), |acc, c| acc * z + c)
    };
    let deriv = |z: C| {
        monic
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(C::new(0.0, 0.0), |acc, (i, c)| acc * z + c * i as f64)
    };
    let bound = 1.0 + monic[..deg].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<C> = (0..deg)
        .map(|i| C::from_polar(bound, 0.4 + std::f64::consts::TAU * i as f64 / deg as f64))
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let denom = (0..deg)
                .filter(|&j| j != i)
                .fold(C::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            if denom.norm() == 0.0 {
                z[i] += C::new(1e-6, 1e-6);
                continue;
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 * bound {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let d = deriv(*r);
            if d.norm() > 0.0 {
                *r -= eval(*r) / d;
            }
        }
    }
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(z)
}
