//! The maps `T_k`, `T̄_k`, the auxiliary involutions `D_k`, `D̄_k`, and the
//! pentagram map in corner invariants.
//!
//! All maps are pure: they return a new state or a typed genericity error
//! carrying the 1-based index of the first vanishing denominator.

use crate::error::{Error, Result};
use crate::scalar::{product, Scalar};
use crate::states::{at, CornerState, PQState, XYState};

/// `x*_i = x_{i-r'-1} sigma_{i+r} / sigma_{i-r'-1}`,
/// `y*_i = y_{i-r'} sigma_{i+r+1} / sigma_{i-r'}`.
pub fn tk_step<S: Scalar>(s: &XYState<S>) -> Result<XYState<S>> {
    let sigma = s.sigmas()?;
    let (r, rp) = (s.params.ri(), s.params.rpi());
    let mut x = Vec::with_capacity(s.n());
    let mut y = Vec::with_capacity(s.n());
    for i in 0..s.n() as isize {
        let a = i - rp - 1;
        x.push((at(&s.x, a).clone() * at(&sigma, i + r).clone()).checked_div(at(&sigma, a))?);
        let b = i - rp;
        y.push((at(&s.y, b).clone() * at(&sigma, i + r + 1).clone()).checked_div(at(&sigma, b))?);
    }
    XYState::new(s.params, x, y)
}

/// `T_k^{-1} = D_k T_k D_k`.
pub fn tk_inverse<S: Scalar>(s: &XYState<S>) -> Result<XYState<S>> {
    dk_apply(&tk_step(&dk_apply(s)?)?)
}

fn check_p<S: Scalar>(p: &[S]) -> Result<()> {
    for (i, v) in p.iter().enumerate() {
        if v.vanishes() || (S::one() + v.clone()).vanishes() {
            return Err(Error::PDenominatorVanishes(i + 1));
        }
    }
    Ok(())
}

/// The map `T̄_k` on `(p, q)`, both parity branches written out.
///
/// Even `k`: `q*_i = 1/p_i`,
/// `p*_i = q_i (1+p_{i-r-1})(1+p_{i+r+1}) p_{i-r} p_{i+r} / ((1+p_{i-r})(1+p_{i+r}))`.
///
/// Odd `k`: `q*_i = 1/p_{i-1}`,
/// `p*_i = q_i (1+p_{i-r-2})(1+p_{i+r+1}) p_{i-r-1} p_{i+r} / ((1+p_{i-r-1})(1+p_{i+r}))`.
pub fn tbar_step<S: Scalar>(s: &PQState<S>) -> Result<PQState<S>> {
    check_p(&s.p)?;
    let r = s.params.ri();
    let p = |j: isize| at(&s.p, j).clone();
    let one_p = |j: isize| S::one() + at(&s.p, j).clone();
    let mut np = Vec::with_capacity(s.n());
    let mut nq = Vec::with_capacity(s.n());
    for i in 0..s.n() as isize {
        let qi = s.q[i as usize].clone();
        if s.params.k.is_multiple_of(2) {
            nq.push(p(i).recip()?);
            let num = qi * one_p(i - r - 1) * one_p(i + r + 1) * p(i - r) * p(i + r);
            np.push(num.checked_div(&(one_p(i - r) * one_p(i + r)))?);
        } else {
            nq.push(p(i - 1).recip()?);
            let num = qi * one_p(i - r - 2) * one_p(i + r + 1) * p(i - r - 1) * p(i + r);
            np.push(num.checked_div(&(one_p(i - r - 1) * one_p(i + r)))?);
        }
    }
    PQState::new(s.params, np, nq)
}

/// `T̄_k^{-1} = D̄_k T̄_k D̄_k`.
pub fn tbar_inverse<S: Scalar>(s: &PQState<S>) -> Result<PQState<S>> {
    dbar_apply(&tbar_step(&dbar_apply(s)?)?)
}

/// `x*_i = (y_{i-r}..y_{i+r'-1}) / (x_{i-r}..x_{i+r'})`,
/// `y*_i = (y_{i-r}..y_{i+r'}) / (x_{i-r}..x_{i+r'+1})`.
pub fn dk_apply<S: Scalar>(s: &XYState<S>) -> Result<XYState<S>> {
    let (r, rp) = (s.params.ri(), s.params.rpi());
    let prod = |v: &[S], lo: isize, hi: isize| product((lo..=hi).map(|j| at(v, j).clone()));
    let mut x = Vec::with_capacity(s.n());
    let mut y = Vec::with_capacity(s.n());
    for i in 0..s.n() as isize {
        x.push(prod(&s.y, i - r, i + rp - 1).checked_div(&prod(&s.x, i - r, i + rp))?);
        y.push(prod(&s.y, i - r, i + rp).checked_div(&prod(&s.x, i - r, i + rp + 1))?);
    }
    XYState::new(s.params, x, y)
}

/// Even `k`: `p_i -> 1/q_i`, `q_i -> 1/p_i`.
/// Odd `k`: `p_i -> 1/q_{i+1}`, `q_i -> 1/p_i`.
pub fn dbar_apply<S: Scalar>(s: &PQState<S>) -> Result<PQState<S>> {
    let off = if s.params.k.is_multiple_of(2) { 0 } else { 1 };
    let mut np = Vec::with_capacity(s.n());
    let mut nq = Vec::with_capacity(s.n());
    for i in 0..s.n() as isize {
        np.push(at(&s.q, i + off).recip()?);
        nq.push(at(&s.p, i).recip()?);
    }
    PQState::new(s.params, np, nq)
}

/// The pentagram map on corner invariants:
/// `X*_i = X_i (1 - X_{i-1}Y_{i-1}) / (1 - X_{i+1}Y_{i+1})`,
/// `Y*_i = Y_{i+1} (1 - X_{i+2}Y_{i+2}) / (1 - X_iY_i)`.
pub fn pentagram_corner_step<S: Scalar>(s: &CornerState<S>) -> Result<CornerState<S>> {
    let g: Vec<S> =
        s.x.iter()
            .zip(&s.y)
            .enumerate()
            .map(|(j, (x, y))| {
                let v = S::one() - x.clone() * y.clone();
                if v.vanishes() {
                    Err(Error::CornerDenominatorVanishes(j + 1))
                } else {
                    Ok(v)
                }
            })
            .collect::<Result<_>>()?;
    let mut nx = Vec::with_capacity(s.n);
    let mut ny = Vec::with_capacity(s.n);
    for i in 0..s.n as isize {
        nx.push((at(&s.x, i).clone() * at(&g, i - 1).clone()).checked_div(at(&g, i + 1))?);
        ny.push((at(&s.y, i + 1).clone() * at(&g, i + 2).clone()).checked_div(at(&g, i))?);
    }
    CornerState::new(nx, ny)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_pq, random_xy, rng};
    use crate::scalar::Rational;
    use crate::states::{corner_to_xy, xy_to_corner, xy_to_pq, MapParams};

    fn q(p: i64, d: i64) -> Rational {
        Rational::from_ratio(p, d)
    }

    fn qs(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&e| Rational::from_i64(e)).collect()
    }

    #[test]
    fn hand_evaluated_step() {
        let params = MapParams::new(3, 5).unwrap();
        let s = XYState::new(params, qs(&[2, 1, 1, 1, 1]), qs(&[1; 5])).unwrap();
        let t = tk_step(&s).unwrap();
        assert_eq!(t.x[0], q(3, 2));
        assert_eq!(t.y[0], q(1, 1));
    }

    #[test]
    fn hand_evaluated_tbar_odd() {
        let params = MapParams::new(3, 5).unwrap();
        let s = PQState::new(params, qs(&[2, 1, 1, 1, 1]), qs(&[1; 5])).unwrap();
        let t = tbar_step(&s).unwrap();
        assert_eq!(t.q[0], q(1, 1));
        assert_eq!(t.p[0], q(4, 3));
    }

    #[test]
    fn constant_states_are_fixed() {
        for k in 2..=6 {
            for n in k..=9 {
                let params = MapParams::new(k, n).unwrap();
                let s = XYState::constant(params, q(3, 7), q(-2, 5)).unwrap();
                assert_eq!(tk_step(&s).unwrap(), s);
                assert_eq!(tk_inverse(&s).unwrap(), s);
                let ones = PQState::<Rational>::ones(params);
                assert_eq!(tbar_step(&ones).unwrap(), ones);
            }
        }
    }

    #[test]
    fn dk_on_constant_state() {
        let params = MapParams::new(3, 5).unwrap();
        let (a, b) = (q(2, 3), q(5, 7));
        let s = XYState::constant(params, a.clone(), b.clone()).unwrap();
        let d = dk_apply(&s).unwrap();
        let a2 = a.clone() * a.clone();
        assert_eq!(d.x[0], b.checked_div(&a2).unwrap());
        assert_eq!(d.y[0], (b.clone() * b).checked_div(&(a2 * a)).unwrap());
    }

    #[test]
    fn dbar_parities() {
        let even = MapParams::new(4, 6).unwrap();
        let s = PQState::new(even, vec![q(2, 1); 6], vec![q(3, 1); 6]).unwrap();
        let d = dbar_apply(&s).unwrap();
        assert_eq!(d.p, vec![q(1, 3); 6]);
        assert_eq!(d.q, vec![q(1, 2); 6]);
        assert_eq!(dbar_apply(&d).unwrap(), s);

        let mut g = rng(5);
        let s = random_pq::<Rational>(MapParams::new(5, 9).unwrap(), &mut g);
        let dd = dbar_apply(&dbar_apply(&s).unwrap()).unwrap();
        assert_eq!(dd.p, crate::states::shift(&s.p, 1));
    }

    #[test]
    fn zero_sigma_is_reported() {
        let params = MapParams::new(2, 3).unwrap();
        let s = XYState::new(params, qs(&[1, 2, 1]), qs(&[1, -2, 1])).unwrap();
        assert_eq!(tk_step(&s), Err(Error::SigmaVanishes(2)));
        let s = PQState::new(params, qs(&[1, 1, -1]), qs(&[1, 1, 1])).unwrap();
        assert_eq!(tbar_step(&s), Err(Error::PDenominatorVanishes(3)));
    }

    #[test]
    fn conjugations_and_inverses() {
        let mut g = rng(11);
        for k in 2..=6 {
            for n in (2 * k - 1).max(3)..=(2 * k + 2) {
                let params = MapParams::new(k, n).unwrap();
                let s = random_xy::<Rational>(params, &mut g);
                let pq = xy_to_pq(&s).unwrap();
                let Ok(t) = tk_step(&s) else { continue };
                assert_eq!(xy_to_pq(&t).unwrap(), tbar_step(&pq).unwrap());
                assert_eq!(
                    xy_to_pq(&dk_apply(&s).unwrap()).unwrap(),
                    dbar_apply(&pq).unwrap()
                );
                if let Ok(inv) = tk_inverse(&s) {
                    assert_eq!(tk_step(&inv).unwrap(), s);
                }
                if let Ok(inv) = tbar_inverse(&pq) {
                    assert_eq!(tbar_step(&inv).unwrap(), pq);
                }
            }
        }
    }

    #[test]
    fn equivariance() {
        let mut g = rng(3);
        let params = MapParams::new(4, 9).unwrap();
        let s = random_xy::<Rational>(params, &mut g);
        let t = q(-5, 3);
        assert_eq!(
            tk_step(&s.scaled(&t).unwrap()).unwrap(),
            tk_step(&s).unwrap().scaled(&t).unwrap()
        );
        assert_eq!(
            tk_step(&s.shifted(2)).unwrap(),
            tk_step(&s).unwrap().shifted(2)
        );
    }

    #[test]
    fn corner_map_matches_t3() {
        let mut g = rng(8);
        for n in 5..=9 {
            let params = MapParams::new(3, n).unwrap();
            let c = xy_to_corner(&random_xy::<Rational>(params, &mut g)).unwrap();
            let Ok(direct) = pentagram_corner_step(&c) else {
                continue;
            };
            let via = xy_to_corner(&tk_step(&corner_to_xy(&c).unwrap()).unwrap()).unwrap();
            assert_eq!(via, direct.shifted(-1));

            let t = q(7, 2);
            assert_eq!(
                pentagram_corner_step(&c.scaled(&t).unwrap()).unwrap(),
                direct.scaled(&t).unwrap()
            );
        }
    }

    #[test]
    fn corner_constant_product() {
        // X_i Y_i = 2/3 everywhere, individual values vary
        let c = CornerState::new(
            vec![q(2, 1), q(4, 1), q(2, 1), q(-1, 1), q(2, 1)],
            vec![q(1, 3), q(1, 6), q(1, 3), q(-2, 3), q(1, 3)],
        )
        .unwrap();
        let out = pentagram_corner_step(&c).unwrap();
        assert_eq!(out.x, c.x);
        assert_eq!(out.y, crate::states::shift(&c.y, 1));
    }
}
