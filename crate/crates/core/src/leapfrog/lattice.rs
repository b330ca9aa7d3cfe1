//! Leapfrog orbits as a lattice field and its cross-ratio extension.
//!
//! With `orbit[0] = S^-`, `orbit[1] = S` and `orbit[t+1] = F_2(orbit[t-1],
//! orbit[t])`, the even sites carry `z_{m,n} = orbit[(m+n)/2]` at vertex
//! `(m-n)/2`. Around every even site with its four diagonal neighbours
//!
//! ```text
//! 1/(z - z_{m+1,n+1}) + 1/(z - z_{m-1,n-1}) - 1/(z - z_{m+1,n-1}) - 1/(z - z_{m-1,n+1}) = 0,
//! ```
//!
//! which is the leapfrog sum rule in lattice form. The odd sites are filled
//! from one extra value `z_{0,1}` by the quad equation
//! `[z_{m,n}, z_{m+1,n}, z_{m+1,n+1}, z_{m,n+1}] = q`, and then satisfy the
//! same equation.
//!
//! `q = -1` is excluded: `[a, b, c, b] = -1` for all `a, c`, so the
//! extension degenerates to the constant `z_{0,1}` on the odd sites.

use super::{f2_step, SPairState};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Square patch `z_{m,n}`, `0 <= m, n < size`, with undefined entries.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeField<S> {
    pub size: usize,
    values: Vec<Option<S>>,
}

impl<S: Scalar> LatticeField<S> {
    pub fn empty(size: usize) -> Self {
        LatticeField {
            size,
            values: vec![None; size * size],
        }
    }

    pub fn get(&self, m: usize, n: usize) -> Option<&S> {
        self.values.get(m * self.size + n).and_then(Option::as_ref)
    }

    pub fn set(&mut self, m: usize, n: usize, v: S) {
        self.values[m * self.size + n] = Some(v);
    }

    /// Defined entries as `(m, n, z)`, row-major.
    pub fn entries(&self) -> Vec<(usize, usize, S)> {
        (0..self.size)
            .flat_map(|m| (0..self.size).map(move |n| (m, n)))
            .filter_map(|(m, n)| self.get(m, n).map(|z| (m, n, z.clone())))
            .collect()
    }

    /// Residuals of the five-point equation at the interior sites of one
    /// parity (`0` even, `1` odd), as `(m, n, residual)`.
    pub fn toda_residuals(&self, parity: usize) -> Result<Vec<(usize, usize, S)>> {
        let mut out = Vec::new();
        for m in 1..self.size.saturating_sub(1) {
            for n in 1..self.size - 1 {
                if (m + n) % 2 == parity {
                    out.push((m, n, toda_residual(self, m, n)?));
                }
            }
        }
        Ok(out)
    }

    /// Like [`toda_residuals`](Self::toda_residuals), divided by the sum of
    /// the magnitudes of the four terms. Unlike the raw residual this is
    /// invariant under `z -> c z + d`, so it measures round-off rather than
    /// how close neighbouring points happen to be.
    pub fn toda_relative_residuals(&self, parity: usize) -> Result<Vec<(usize, usize, f64)>> {
        let mut out = Vec::new();
        for m in 1..self.size.saturating_sub(1) {
            for n in 1..self.size - 1 {
                if (m + n) % 2 == parity {
                    let (r, scale) = toda_terms(self, m, n)?;
                    out.push((m, n, r.magnitude() / scale.max(f64::MIN_POSITIVE)));
                }
            }
        }
        Ok(out)
    }

    /// `[z_{m,n}, z_{m+1,n}, z_{m+1,n+1}, z_{m,n+1}] - q` on every complete quad.
    pub fn quad_residuals(&self, q: &S) -> Result<Vec<(usize, usize, S)>> {
        let mut out = Vec::new();
        for m in 0..self.size.saturating_sub(1) {
            for n in 0..self.size - 1 {
                let quad = [(m, n), (m + 1, n), (m + 1, n + 1), (m, n + 1)];
                let vals: Option<Vec<&S>> = quad.iter().map(|&(a, b)| self.get(a, b)).collect();
                if let Some(v) = vals {
                    let cr = super::cross_ratio_values(v[0], v[1], v[2], v[3])?;
                    out.push((m, n, cr - q.clone()));
                }
            }
        }
        Ok(out)
    }
}

/// Left side of the five-point equation centred at `(m, n)`.
pub fn toda_residual<S: Scalar>(field: &LatticeField<S>, m: usize, n: usize) -> Result<S> {
    toda_terms(field, m, n).map(|(r, _)| r)
}

/// The residual and the sum of the magnitudes of its terms.
fn toda_terms<S: Scalar>(field: &LatticeField<S>, m: usize, n: usize) -> Result<(S, f64)> {
    let get = |a: usize, b: usize| {
        field
            .get(a, b)
            .cloned()
            .ok_or(Error::InconsistentSeed(a, b))
    };
    if m == 0 || n == 0 {
        return Err(Error::InconsistentSeed(m, n));
    }
    let c = get(m, n)?;
    let term = |a: usize, b: usize| -> Result<S> {
        (c.clone() - get(a, b)?)
            .recip()
            .map_err(|_| Error::DegenerateQuadruple)
    };
    let t = [
        term(m + 1, n + 1)?,
        term(m - 1, n - 1)?,
        term(m + 1, n - 1)?,
        term(m - 1, n + 1)?,
    ];
    let scale = t.iter().map(Scalar::magnitude).sum();
    let [a, b, c, d] = t;
    Ok((a + b - c - d, scale))
}

/// Even sublattice of a `size x size` patch from the leapfrog orbit of
/// `st`. Vertices with negative index come through the inverse monodromy.
pub fn seed_from_orbit<S: Scalar>(st: &SPairState<S>, size: usize) -> Result<LatticeField<S>> {
    let times = size.max(1);
    let mut orbit = vec![st.sminus.clone(), st.s.clone()];
    let mut cur = st.clone();
    while orbit.len() < times + 1 {
        cur = f2_step(&cur)?;
        orbit.push(cur.s.clone());
    }
    let mut field = LatticeField::empty(size);
    for m in 0..size {
        for n in 0..size {
            if (m + n) % 2 != 0 {
                continue;
            }
            let t = (m + n) / 2;
            let vertex = (m as isize - n as isize) / 2;
            let frame = SPairState {
                sminus: orbit[t].clone(),
                s: orbit[t].clone(),
                monodromy: st.monodromy.clone(),
            };
            let z = frame.s_at(vertex).value().map_err(|_| {
                Error::DegenerateConfiguration(vertex.rem_euclid(st.n() as isize) as usize + 1)
            })?;
            field.set(m, n, z);
        }
    }
    Ok(field)
}

/// Fills the odd sites from `z_{0,1}` by solving the quad equation, sweeping
/// quads with exactly one unknown corner until nothing changes.
///
/// The seed is first checked against the five-point equation (exactly on
/// exact backends, to relative residual `tol` otherwise). The quad equation
/// `f(x) = (a-b)(c-d) - q(a-d)(b-c) = 0` is affine in each corner, so the
/// unknown is `-f(0) / (f(1) - f(0))`.
pub fn crossratio_extend<S: Scalar>(
    seed: &LatticeField<S>,
    z01: S,
    q: S,
    tol: f64,
) -> Result<LatticeField<S>> {
    if q.vanishes() || (q.clone() - S::one()).vanishes() {
        return Err(Error::BadParams(
            "the cross-ratio constant must differ from 0 and 1".into(),
        ));
    }
    if (q.clone() + S::one()).vanishes() {
        return Err(Error::BadParams(
            "q = -1 is degenerate: [a, b, c, b] = -1 identically".into(),
        ));
    }
    if S::EXACT {
        if let Some((m, n, _)) = seed
            .toda_residuals(0)?
            .into_iter()
            .find(|r| !r.2.vanishes())
        {
            return Err(Error::InconsistentSeed(m, n));
        }
    } else if let Some((m, n, _)) = seed
        .toda_relative_residuals(0)?
        .into_iter()
        .find(|r| r.2 > tol)
    {
        return Err(Error::InconsistentSeed(m, n));
    }
    let size = seed.size;
    if size < 2 {
        return Err(Error::BadParams("lattice must be at least 2x2".into()));
    }
    let mut field = seed.clone();
    field.set(0, 1, z01);
    let mut changed = true;
    while changed {
        changed = false;
        for m in 0..size - 1 {
            for n in 0..size - 1 {
                let quad = [(m, n), (m + 1, n), (m + 1, n + 1), (m, n + 1)];
                let missing: Vec<usize> = (0..4)
                    .filter(|&c| field.get(quad[c].0, quad[c].1).is_none())
                    .collect();
                if missing.len() != 1 {
                    continue;
                }
                let hole = missing[0];
                let f = |x: S| {
                    let v: Vec<S> = (0..4)
                        .map(|c| {
                            if c == hole {
                                x.clone()
                            } else {
                                field
                                    .get(quad[c].0, quad[c].1)
                                    .cloned()
                                    .expect("defined corner")
                            }
                        })
                        .collect();
                    (v[0].clone() - v[1].clone()) * (v[2].clone() - v[3].clone())
                        - q.clone() * (v[0].clone() - v[3].clone()) * (v[1].clone() - v[2].clone())
                };
                let (f0, f1) = (f(S::zero()), f(S::one()));
                let slope = f1 - f0.clone();
                if slope.vanishes() {
                    return Err(Error::DegenerateQuadruple);
                }
                let x = (-f0).checked_div(&slope)?;
                field.set(quad[hole].0, quad[hole].1, x);
                changed = true;
            }
        }
    }
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lax::Matrix;
    use crate::random::{random_vec, rng};
    use crate::scalar::{Complex64, Rational};

    fn complex_pair(seed: u64) -> SPairState<Complex64> {
        let mut g = rng(seed);
        let sm: Vec<Complex64> = random_vec(5, &mut g);
        let s: Vec<Complex64> = random_vec(5, &mut g);
        let shift = |v: Vec<Complex64>| {
            v.into_iter()
                .enumerate()
                .map(|(i, z)| z + i as f64)
                .collect::<Vec<_>>()
        };
        let c = |re: f64| Complex64::new(re, 0.0);
        let m = Matrix::from_rows(vec![vec![c(1.0), c(0.7)], vec![c(0.1), c(1.2)]]);
        SPairState::from_values(&shift(sm), &shift(s), m).unwrap()
    }

    #[test]
    fn even_sublattice_satisfies_five_point_equation() {
        let field = seed_from_orbit(&complex_pair(1), 6).unwrap();
        let worst = field
            .toda_residuals(0)
            .unwrap()
            .iter()
            .map(|r| r.2.norm())
            .fold(0.0, f64::max);
        assert!(worst < 1e-9, "{worst}");
    }

    #[test]
    fn exact_seed_and_extension() {
        let mut g = rng(3);
        let id = Matrix::from_rows(vec![
            vec![Rational::from_i64(2), Rational::from_i64(1)],
            vec![Rational::from_i64(1), Rational::from_i64(1)],
        ]);
        let st = SPairState::from_values(
            &random_vec::<Rational>(4, &mut g),
            &random_vec::<Rational>(4, &mut g),
            id,
        )
        .unwrap();
        let field = seed_from_orbit(&st, 4).unwrap();
        assert!(field
            .toda_residuals(0)
            .unwrap()
            .iter()
            .all(|r| r.2 == Rational::from_i64(0)));
        let ext = crossratio_extend(
            &field,
            Rational::from_ratio(3, 7),
            Rational::from_i64(5),
            0.0,
        )
        .unwrap();
        assert_eq!(ext.entries().len(), 16);
        assert!(ext
            .quad_residuals(&Rational::from_i64(5))
            .unwrap()
            .iter()
            .all(|r| r.2 == Rational::from_i64(0)));
        assert!(ext
            .toda_residuals(1)
            .unwrap()
            .iter()
            .all(|r| r.2 == Rational::from_i64(0)));
    }

    #[test]
    fn odd_sublattice_after_extension() {
        let field = seed_from_orbit(&complex_pair(2), 6).unwrap();
        for q in [
            Complex64::new(0.3, 0.8),
            Complex64::new(2.5, 0.0),
            Complex64::new(-3.0, 0.0),
        ] {
            let ext = crossratio_extend(&field, Complex64::new(0.37, -1.1), q, 1e-9).unwrap();
            assert_eq!(ext.entries().len(), 36);
            let quad = ext
                .quad_residuals(&q)
                .unwrap()
                .iter()
                .map(|r| r.2.norm())
                .fold(0.0, f64::max);
            let odd = ext
                .toda_residuals(1)
                .unwrap()
                .iter()
                .map(|r| r.2.norm())
                .fold(0.0, f64::max);
            assert!(quad < 1e-9 && odd < 1e-9, "q = {q}: {quad} {odd}");
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let field = seed_from_orbit(&complex_pair(4), 6).unwrap();
        let z = Complex64::new(0.37, -1.1);
        assert!(crossratio_extend(&field, z, Complex64::new(-1.0, 0.0), 1e-9).is_err());
        assert!(crossratio_extend(&field, z, Complex64::new(1.0, 0.0), 1e-9).is_err());
        let mut broken = field.clone();
        let v = *broken.get(2, 2).unwrap();
        broken.set(2, 2, v + 0.1);
        assert!(matches!(
            crossratio_extend(&broken, z, Complex64::new(2.5, 0.0), 1e-9),
            Err(Error::InconsistentSeed(..))
        ));
    }
}
