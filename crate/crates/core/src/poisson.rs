//! The quiver `Q_{k,n}`, the log-canonical brackets on `(p, q)` and
//! `(x, y)`, Casimirs, and pointwise invariance checks.
//!
//! # Arrows of the quiver
//!
//! The quiver is not printed as a matrix; its arrows are read off the
//! mutation formula. Mutating a coefficient (tau) seed at a vertex `v`
//! multiplies each neighbour `u` by
//! `y_v^{[b_vu]_+} (1 + y_v)^{-b_vu}`. The `p`-vertices are pairwise
//! unconnected, so mutating all of them at once gives
//!
//! ```text
//! q_i -> q_i (1+p_{i-r'-1})(1+p_{i+r+1}) p_{i-r'} p_{i+r} / ((1+p_{i-r'})(1+p_{i+r}))
//! ```
//!
//! exactly when the arrows are `p_i -> q_{i+r'}`, `p_i -> q_{i-r}`,
//! `q_i -> p_{i+r+1}` and `q_i -> p_{i-r'-1}`. [`tau_mutation_all_p`] uses the
//! generic rule on the adjacency matrix, so the test against the closed form
//! locks the arrows.
//!
//! # Checking invariance
//!
//! For a constant log-canonical tensor `{u, v} = B_uv u v` a map preserves
//! the bracket iff `J B̂(s) Jᵀ = B̂(map(s))`, `B̂_uv(s) = B_uv u(s) v(s)`.
//! The Jacobian comes from dual numbers, so on rationals each check is an
//! exact identity at one point. A nonzero polynomial of degree `d` vanishes
//! at a point whose coordinates are drawn uniformly from a set of `N` values
//! with probability at most `d / N` (here `N = 162`), so repeated random
//! points make an accidental pass unlikely.

use crate::dynamics::{tbar_inverse, tbar_step, tk_inverse, tk_step};
use crate::error::{Error, Result};
use crate::scalar::{approx_eq, gradient, jacobian, Dual, Scalar};
use crate::states::{at, MapParams, PQState, XYState};

/// Skew adjacency matrix on `p_1..p_n, q_1..q_n` (in that order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    pub params: MapParams,
    pub adj: Vec<Vec<i64>>,
}

fn wrap(i: isize, n: usize) -> usize {
    i.rem_euclid(n as isize) as usize
}

pub fn build_quiver(k: usize, n: usize) -> Result<Quiver> {
    let params = MapParams::new(k, n)?;
    let (r, rp) = (params.ri(), params.rpi());
    let mut adj = vec![vec![0i64; 2 * n]; 2 * n];
    let mut arrow = |from: usize, to: usize| {
        adj[from][to] += 1;
        adj[to][from] -= 1;
    };
    for i in 0..n as isize {
        let (p, q) = (i as usize, n + i as usize);
        arrow(p, n + wrap(i + rp, n));
        arrow(p, n + wrap(i - r, n));
        arrow(q, wrap(i + r + 1, n));
        arrow(q, wrap(i - rp - 1, n));
    }
    Ok(Quiver { params, adj })
}

impl Quiver {
    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn is_skew(&self) -> bool {
        let m = self.adj.len();
        (0..m).all(|a| (0..m).all(|b| self.adj[a][b] == -self.adj[b][a]))
    }

    pub fn is_bipartite(&self) -> bool {
        let n = self.n();
        (0..2 * n).all(|a| (0..2 * n).all(|b| (a < n) != (b < n) || self.adj[a][b] == 0))
    }

    /// `(in, out)` degree of a vertex, arrows counted with multiplicity.
    pub fn degrees(&self, v: usize) -> (i64, i64) {
        self.adj[v].iter().fold(
            (0, 0),
            |(i, o), &a| {
                if a > 0 {
                    (i, o + a)
                } else {
                    (i - a, o)
                }
            },
        )
    }

    /// Arrows `from -> to` (negative when reversed).
    pub fn arrows(&self, from: usize, to: usize) -> i64 {
        self.adj[from][to]
    }

    /// Relabeling `p_i -> p_{i+sp}`, `q_i -> q_{i+sq}`, optionally exchanging
    /// the roles of `p` and `q`.
    pub fn relabeled(&self, sp: usize, sq: usize, swap: bool) -> Quiver {
        let n = self.n();
        let image = |v: usize| {
            let (is_p, i) = if v < n { (true, v) } else { (false, v - n) };
            let target_p = is_p != swap;
            let off = if is_p { sp } else { sq };
            (i + off) % n + if target_p { 0 } else { n }
        };
        let mut adj = vec![vec![0i64; 2 * n]; 2 * n];
        for a in 0..2 * n {
            for b in 0..2 * n {
                adj[image(a)][image(b)] = self.adj[a][b];
            }
        }
        Quiver {
            params: self.params,
            adj,
        }
    }

    pub fn is_shift_invariant(&self) -> bool {
        self.relabeled(1, 1, false).adj == self.adj
    }

    /// Label shifts `(sp, sq)` such that this quiver, with `p` and `q`
    /// exchanged, equals `other`.
    pub fn swap_isomorphism(&self, other: &Quiver) -> Option<(usize, usize)> {
        let n = self.n();
        if other.n() != n {
            return None;
        }
        (0..n)
            .flat_map(|sp| (0..n).map(move |sq| (sp, sq)))
            .find(|&(sp, sq)| self.relabeled(sp, sq, true).adj == other.adj)
    }
}

/// Mutation at every `p`-vertex, using the generic coefficient rule on the
/// quiver's adjacency matrix. Returns `p*_i = 1/p_i` and the mutated `q`.
pub fn tau_mutation_all_p<S: Scalar>(s: &PQState<S>, quiver: &Quiver) -> Result<PQState<S>> {
    let n = s.n();
    for (i, p) in s.p.iter().enumerate() {
        if p.vanishes() || (S::one() + p.clone()).vanishes() {
            return Err(Error::PDenominatorVanishes(i + 1));
        }
    }
    let p: Vec<S> = s.p.iter().map(Scalar::recip).collect::<Result<_>>()?;
    let mut q = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = s.q[i].clone();
        for (j, pj) in s.p.iter().enumerate() {
            let b = quiver.adj[j][n + i];
            if b == 0 {
                continue;
            }
            let one_p = S::one() + pj.clone();
            v = v * pj.powi(b.max(0) as i32)? * one_p.powi(-b as i32)?;
        }
        q.push(v);
    }
    PQState::new(s.params, p, q)
}

/// The involution composed with the mutation to give `T̄_k`: for even `k`
/// exchange `p` and `q`; for odd `k` take `p_i <- q_i`, `q_i <- p_{i-1}`.
pub fn relabel_after_mutation<S: Scalar>(s: &PQState<S>) -> PQState<S> {
    let q = if s.params.k.is_multiple_of(2) {
        s.p.clone()
    } else {
        (0..s.n() as isize)
            .map(|i| at(&s.p, i - 1).clone())
            .collect()
    };
    PQState {
        params: s.params,
        p: s.q.clone(),
        q,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TensorKind {
    Pq,
    Xy,
}

/// Constant log-canonical tensor `{v_a, v_b} = B_ab v_a v_b`. Coordinates are
/// `(p, q)` or `(x, y)`, first block then second block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonTensor {
    pub kind: TensorKind,
    pub params: MapParams,
    pub b: Vec<Vec<i64>>,
}

pub fn pq_tensor(quiver: &Quiver) -> PoissonTensor {
    PoissonTensor {
        kind: TensorKind::Pq,
        params: quiver.params,
        b: quiver.adj.clone(),
    }
}

/// The bracket on `(x, y)`:
///
/// ```text
/// {x_i, x_{i+l}} = -x_i x_{i+l}    1 <= l <= k-2
/// {y_i, y_{i+l}} = -y_i y_{i+l}    1 <= l <= k-1
/// {y_i, x_{i+l}} = -y_i x_{i+l}    1 <= l <= k-1
/// {y_i, x_{i-l}} =  y_i x_{i-l}    0 <= l <= k-2
/// ```
///
/// Only known in the stable range `n >= 2k - 1`; refused elsewhere.
pub fn xy_tensor(params: MapParams) -> Result<PoissonTensor> {
    params.require_stable()?;
    let n = params.n;
    let k = params.k as isize;
    let mut b = vec![vec![0i64; 2 * n]; 2 * n];
    let mut set = |u: usize, v: usize, c: i64| {
        b[u][v] += c;
        b[v][u] -= c;
    };
    let x = |i: isize| wrap(i, n);
    let y = |i: isize| n + wrap(i, n);
    for i in 0..n as isize {
        for l in 1..=k - 2 {
            set(x(i), x(i + l), -1);
        }
        for l in 1..=k - 1 {
            set(y(i), y(i + l), -1);
            set(y(i), x(i + l), -1);
        }
        for l in 0..=k - 2 {
            set(y(i), x(i - l), 1);
        }
    }
    Ok(PoissonTensor {
        kind: TensorKind::Xy,
        params,
        b,
    })
}

impl PoissonTensor {
    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn is_skew(&self) -> bool {
        let m = self.dim();
        (0..m).all(|a| (0..m).all(|c| self.b[a][c] == -self.b[c][a]))
    }

    /// Copy with the sign of `B_uv` (and `B_vu`) flipped; a negative control.
    pub fn with_flipped_sign(&self, u: usize, v: usize) -> Self {
        let mut t = self.clone();
        t.b[u][v] = -t.b[u][v];
        t.b[v][u] = -t.b[v][u];
        t
    }

    /// First nonzero entry above the diagonal, for fault injection.
    pub fn first_entry(&self) -> (usize, usize) {
        let m = self.dim();
        (0..m)
            .flat_map(|a| (a + 1..m).map(move |c| (a, c)))
            .find(|&(a, c)| self.b[a][c] != 0)
            .unwrap_or((0, 1))
    }

    /// `B̂_uv(s) = B_uv u(s) v(s)`.
    pub fn hat<S: Scalar>(&self, at: &[S]) -> Vec<Vec<S>> {
        let m = self.dim();
        (0..m)
            .map(|u| {
                (0..m)
                    .map(|v| match self.b[u][v] {
                        0 => S::zero(),
                        c => S::from_i64(c) * at[u].clone() * at[v].clone(),
                    })
                    .collect()
            })
            .collect()
    }

    /// `sum_uv B_uv u v df_u dg_v` from two gradients.
    pub fn pair<S: Scalar>(&self, at: &[S], df: &[S], dg: &[S]) -> S {
        let m = self.dim();
        let mut acc = S::zero();
        for u in 0..m {
            if df[u].is_zero() {
                continue;
            }
            let mut row = S::zero();
            for v in 0..m {
                let c = self.b[u][v];
                if c != 0 && !dg[v].is_zero() {
                    row = row + S::from_i64(c) * at[v].clone() * dg[v].clone();
                }
            }
            acc = acc + df[u].clone() * at[u].clone() * row;
        }
        acc
    }
}

/// A scalar function of the flattened state, evaluable over any field.
pub trait StateFn {
    fn eval<T: Scalar>(&self, v: &[T]) -> Result<T>;
}

/// A map of the flattened state, evaluable over any field.
pub trait StateMap {
    fn apply<T: Scalar>(&self, v: &[T]) -> Result<Vec<T>>;
}

/// The coordinate function `v -> v_i`.
#[derive(Clone, Copy, Debug)]
pub struct Coord(pub usize);

impl StateFn for Coord {
    fn eval<T: Scalar>(&self, v: &[T]) -> Result<T> {
        Ok(v[self.0].clone())
    }
}

/// `prod v_i^{e_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub exponents: Vec<(usize, i32)>,
}

impl Monomial {
    pub fn product_of(indices: impl IntoIterator<Item = usize>) -> Self {
        Monomial {
            exponents: indices.into_iter().map(|i| (i, 1)).collect(),
        }
    }
}

impl StateFn for Monomial {
    fn eval<T: Scalar>(&self, v: &[T]) -> Result<T> {
        let mut acc = T::one();
        for &(i, e) in &self.exponents {
            acc = acc * v[i].powi(e)?;
        }
        Ok(acc)
    }
}

/// `f + g`.
#[derive(Clone, Debug)]
pub struct Sum<F, G>(pub F, pub G);

impl<F: StateFn, G: StateFn> StateFn for Sum<F, G> {
    fn eval<T: Scalar>(&self, v: &[T]) -> Result<T> {
        Ok(self.0.eval(v)? + self.1.eval(v)?)
    }
}

/// `f g`.
#[derive(Clone, Debug)]
pub struct Prod<F, G>(pub F, pub G);

impl<F: StateFn, G: StateFn> StateFn for Prod<F, G> {
    fn eval<T: Scalar>(&self, v: &[T]) -> Result<T> {
        Ok(self.0.eval(v)? * self.1.eval(v)?)
    }
}

/// `{f, g}(s) = sum_uv B_uv u v (df/du)(dg/dv)`.
pub fn bracket_of<S: Scalar, F: StateFn, G: StateFn>(
    f: &F,
    g: &G,
    tensor: &PoissonTensor,
    at: &[S],
) -> Result<S> {
    let (_, df) = gradient(|v: &[Dual<S>]| f.eval(v), at)?;
    let (_, dg) = gradient(|v: &[Dual<S>]| g.eval(v), at)?;
    Ok(tensor.pair(at, &df, &dg))
}

/// The function `{f, g}`, itself a [`StateFn`] so brackets nest.
pub struct Bracket<'a, F, G> {
    pub f: F,
    pub g: G,
    pub tensor: &'a PoissonTensor,
}

impl<F: StateFn, G: StateFn> StateFn for Bracket<'_, F, G> {
    fn eval<T: Scalar>(&self, v: &[T]) -> Result<T> {
        bracket_of(&self.f, &self.g, self.tensor, v)
    }
}

/// Cyclic sum `{f,{g,h}} + {g,{h,f}} + {h,{f,g}}` at `at`.
pub fn jacobiator<S: Scalar, F, G, H>(f: &F, g: &G, h: &H, t: &PoissonTensor, at: &[S]) -> Result<S>
where
    F: StateFn + Clone,
    G: StateFn + Clone,
    H: StateFn + Clone,
{
    let nested = |x: &dyn Fn(&[S]) -> Result<S>| x(at);
    let a = nested(&|v| {
        bracket_of(
            f,
            &Bracket {
                f: g.clone(),
                g: h.clone(),
                tensor: t,
            },
            t,
            v,
        )
    })?;
    let b = nested(&|v| {
        bracket_of(
            g,
            &Bracket {
                f: h.clone(),
                g: f.clone(),
                tensor: t,
            },
            t,
            v,
        )
    })?;
    let c = nested(&|v| {
        bracket_of(
            h,
            &Bracket {
                f: f.clone(),
                g: g.clone(),
                tensor: t,
            },
            t,
            v,
        )
    })?;
    Ok(a + b + c)
}

/// Outcome of a pointwise invariance check.
#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceReport {
    pub holds: bool,
    /// First `(u, v)` where `J B̂ Jᵀ` and `B̂(map(s))` differ.
    pub mismatch: Option<(usize, usize)>,
}

/// Checks `J B̂(s) Jᵀ = B̂(map(s))` at `at`: exactly on exact backends, to
/// `1e-9` relative otherwise.
pub fn check_map_invariance<S: Scalar, M: StateMap>(
    map: &M,
    tensor: &PoissonTensor,
    at: &[S],
) -> Result<InvarianceReport> {
    let j = jacobian(|v: &[Dual<S>]| map.apply(v), at)?;
    let image = map.apply(at)?;
    let bh = tensor.hat(at);
    let target = tensor.hat(&image);
    let m = at.len();
    // JB = J * bh
    let mut jb = vec![vec![S::zero(); m]; m];
    for a in 0..m {
        for (c, bc) in bh.iter().enumerate() {
            if j[a][c].is_zero() {
                continue;
            }
            for d in 0..m {
                if !bc[d].is_zero() {
                    jb[a][d] = jb[a][d].clone() + j[a][c].clone() * bc[d].clone();
                }
            }
        }
    }
    for a in 0..m {
        for c in 0..m {
            let mut v = S::zero();
            for d in 0..m {
                if !jb[a][d].is_zero() && !j[c][d].is_zero() {
                    v = v + jb[a][d].clone() * j[c][d].clone();
                }
            }
            if !approx_eq(&v, &target[a][c], 1e-9) {
                return Ok(InvarianceReport {
                    holds: false,
                    mismatch: Some((a, c)),
                });
            }
        }
    }
    Ok(InvarianceReport {
        holds: true,
        mismatch: None,
    })
}

/// The Casimirs: `prod p_i q_i` for the cluster bracket; for the `(x, y)`
/// bracket `prod x_i`, `prod y_i`, split by index parity when `n` is even
/// and `k` is odd.
pub fn casimirs(tensor: &PoissonTensor) -> Vec<Monomial> {
    let n = tensor.params.n;
    match tensor.kind {
        TensorKind::Pq => vec![Monomial::product_of(0..2 * n)],
        TensorKind::Xy => {
            if n.is_multiple_of(2) && tensor.params.k % 2 == 1 {
                vec![
                    Monomial::product_of((0..n).step_by(2)),
                    Monomial::product_of((1..n).step_by(2)),
                    Monomial::product_of((0..n).step_by(2).map(|i| n + i)),
                    Monomial::product_of((1..n).step_by(2).map(|i| n + i)),
                ]
            } else {
                vec![Monomial::product_of(0..n), Monomial::product_of(n..2 * n)]
            }
        }
    }
}

/// The maps as [`StateMap`]s on flattened coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    T(MapParams),
    TInverse(MapParams),
    TBar(MapParams),
    TBarInverse(MapParams),
}

impl StateMap for Step {
    fn apply<T: Scalar>(&self, v: &[T]) -> Result<Vec<T>> {
        match *self {
            Step::T(p) => Ok(tk_step(&XYState::from_vec(p, v)?)?.to_vec()),
            Step::TInverse(p) => Ok(tk_inverse(&XYState::from_vec(p, v)?)?.to_vec()),
            Step::TBar(p) => Ok(tbar_step(&PQState::from_vec(p, v)?)?.to_vec()),
            Step::TBarInverse(p) => Ok(tbar_inverse(&PQState::from_vec(p, v)?)?.to_vec()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::tbar_step;
    use crate::random::{random_pq, random_xy, rng};
    use crate::scalar::{Rational, Ring};

    #[test]
    fn glick_quiver() {
        let qv = build_quiver(3, 5).unwrap();
        // q_1 -> p_2 and q_1 -> p_4
        let targets: Vec<usize> = (0..5).filter(|&j| qv.arrows(5, j) > 0).collect();
        assert_eq!(targets, vec![1, 3]);
        assert!(qv.is_skew() && qv.is_bipartite() && qv.is_shift_invariant());
    }

    #[test]
    fn two_in_two_out() {
        for (k, n) in [(2, 5), (3, 7), (4, 9), (6, 11)] {
            let qv = build_quiver(k, n).unwrap();
            for v in 0..2 * n {
                assert_eq!(qv.degrees(v), (2, 2), "k = {k}, n = {n}, v = {v}");
            }
            assert!(qv.is_shift_invariant());
        }
        assert!(build_quiver(6, 5).is_err());
    }

    #[test]
    fn q_dynamics_is_span_complement() {
        for n in 4..=9 {
            for k in 2..=n {
                let a = build_quiver(k, n).unwrap();
                let b = build_quiver(n + 2 - k, n).unwrap();
                assert!(a.swap_isomorphism(&b).is_some(), "k = {k}, n = {n}");
            }
        }
    }

    #[test]
    fn mutation_then_relabel_is_tbar() {
        let mut g = rng(21);
        for k in 2..=6 {
            for n in k.max(3)..=k + 5 {
                let params = MapParams::new(k, n).unwrap();
                let qv = build_quiver(k, n).unwrap();
                let s = random_pq::<Rational>(params, &mut g);
                let m = tau_mutation_all_p(&s, &qv).unwrap();
                assert_eq!(relabel_after_mutation(&m), tbar_step(&s).unwrap());
            }
        }
    }

    #[test]
    fn mutation_hand_values() {
        let params = MapParams::new(3, 5).unwrap();
        let qv = build_quiver(3, 5).unwrap();
        let ones = PQState::<Rational>::ones(params);
        assert_eq!(tau_mutation_all_p(&ones, &qv).unwrap(), ones);
        let mut s = ones.clone();
        s.p[0] = Rational::from_i64(2);
        let m = tau_mutation_all_p(&s, &qv).unwrap();
        assert_eq!(m.p[0], Rational::from_ratio(1, 2));
        // q_1 gains p_1 / (1 + p_1) from the arrow p_1 -> q_1
        assert_eq!(m.q[0], Rational::from_ratio(4, 3));
    }

    #[test]
    fn xy_tensor_entries() {
        let t = xy_tensor(MapParams::new(3, 5).unwrap()).unwrap();
        assert_eq!(t.b[0][1], -1);
        assert!(t.is_skew());
        let t2 = xy_tensor(MapParams::new(2, 4).unwrap()).unwrap();
        for u in 0..4 {
            for v in 0..4 {
                assert_eq!(t2.b[u][v], 0, "no x-x brackets for k = 2");
            }
        }
        assert_eq!(t2.b[4][4 + 1], -1);
        assert_eq!(t2.b[4][1], -1);
        assert_eq!(t2.b[4][0], 1);
        assert_eq!(
            xy_tensor(MapParams::new(4, 6).unwrap()),
            Err(Error::OutsideStableRange { k: 4, n: 6 })
        );
    }

    #[test]
    fn brackets_of_coordinates() {
        let params = MapParams::new(3, 5).unwrap();
        let t = pq_tensor(&build_quiver(3, 5).unwrap());
        let s = random_pq::<Rational>(params, &mut rng(1)).to_vec();
        for u in 0..10 {
            for v in 0..10 {
                let got = bracket_of(&Coord(u), &Coord(v), &t, &s).unwrap();
                let want = Rational::from_i64(t.b[u][v]) * s[u].clone() * s[v].clone();
                assert_eq!(got, want);
            }
        }
        let f = Sum(Prod(Coord(0), Coord(6)), Coord(3));
        assert!(bracket_of(&f, &f, &t, &s).unwrap().is_zero());
    }

    #[test]
    fn jacobi_spot_check() {
        let params = MapParams::new(3, 7).unwrap();
        let t = xy_tensor(params).unwrap();
        let s = random_xy::<Rational>(params, &mut rng(4)).to_vec();
        let f = Sum(Coord(0), Prod(Coord(8), Coord(2)));
        let g = Prod(Coord(1), Coord(9));
        let h = Sum(Coord(7), Coord(3));
        assert!(jacobiator(&f, &g, &h, &t, &s).unwrap().is_zero());
    }

    #[test]
    fn maps_preserve_brackets() {
        let mut g = rng(2);
        for (k, n) in [(2, 4), (3, 5), (3, 7), (4, 8)] {
            let params = MapParams::new(k, n).unwrap();
            let tp = pq_tensor(&build_quiver(k, n).unwrap());
            let s = random_pq::<Rational>(params, &mut g).to_vec();
            assert!(
                check_map_invariance(&Step::TBar(params), &tp, &s)
                    .unwrap()
                    .holds
            );
            let tx = xy_tensor(params).unwrap();
            let s = random_xy::<Rational>(params, &mut g).to_vec();
            assert!(
                check_map_invariance(&Step::T(params), &tx, &s)
                    .unwrap()
                    .holds
            );
            let (u, v) = tx.first_entry();
            let bad = tx.with_flipped_sign(u, v);
            assert!(
                !check_map_invariance(&Step::T(params), &bad, &s)
                    .unwrap()
                    .holds
            );
        }
    }

    #[test]
    fn casimir_counts_and_brackets() {
        let mut g = rng(6);
        for (k, n, count) in [(3, 6, 4), (3, 7, 2), (2, 4, 2), (4, 8, 2), (5, 10, 4)] {
            let params = MapParams::new(k, n).unwrap();
            let t = xy_tensor(params).unwrap();
            let cs = casimirs(&t);
            assert_eq!(cs.len(), count);
            let s = random_xy::<Rational>(params, &mut g).to_vec();
            for c in &cs {
                for u in 0..2 * n {
                    assert!(bracket_of(c, &Coord(u), &t, &s).unwrap().is_zero());
                }
            }
        }
        let t = pq_tensor(&build_quiver(4, 8).unwrap());
        assert_eq!(casimirs(&t).len(), 1);
    }
}
