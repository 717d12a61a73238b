//! Point maps: `α`, the lift `φ`, the recovery functional `g_{i,j,k}`, the
//! constructive triplet witness, and the non-convexity counterexample.
//!
//! A lifted point is `w = (u, v)` with
//! `u_ij = (x_i + 2x_ix_j + x_j)/2` and `v_ij = (x_i - 2x_ix_j + x_j)/2`,
//! both bands indexed by `ι`.

use log::warn;

use crate::error::{Error, Result};
use crate::layout::Layout;
use crate::reduction::{basic_block_b, build_l3};
use crate::scalar::{NumericMode, Rational, Scalar};

/// `w = (u, v)`, each band of length `N1` in `ι` order.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedPoint<S> {
    pub u: Vec<S>,
    pub v: Vec<S>,
}

impl<S: Scalar> LiftedPoint<S> {
    /// Splits a stacked `w` of length `2N1`.
    pub fn from_w(layout: &Layout, w: &[S]) -> Result<Self> {
        let n1 = layout.n1();
        if w.len() != 2 * n1 {
            return Err(Error::Dimension(format!("w has {} entries, expected 2*N1 = {}", w.len(), 2 * n1)));
        }
        Ok(LiftedPoint {
            u: w[..n1].to_vec(),
            v: w[n1..].to_vec(),
        })
    }

    pub fn to_w(&self) -> Vec<S> {
        self.u.iter().chain(&self.v).cloned().collect()
    }

    pub fn u(&self, layout: &Layout, i: usize, j: usize) -> &S {
        &self.u[layout.u_pos(i, j)]
    }

    pub fn v(&self, layout: &Layout, i: usize, j: usize) -> &S {
        &self.v[layout.u_pos(i, j)]
    }

    /// `w_{ijk} = (u_ij, u_ik, u_jk, v_ij, v_ik, v_jk)`.
    pub fn triplet_slice(&self, layout: &Layout, i: usize, j: usize, k: usize) -> [S; 6] {
        [
            self.u(layout, i, j).clone(),
            self.u(layout, i, k).clone(),
            self.u(layout, j, k).clone(),
            self.v(layout, i, j).clone(),
            self.v(layout, i, k).clone(),
            self.v(layout, j, k).clone(),
        ]
    }
}

fn check_box<S: Scalar>(x: &[S]) -> Result<()> {
    let zero = S::zero();
    let one = S::one();
    for (p, xi) in x.iter().enumerate() {
        if *xi < zero || *xi > one {
            match S::MODE {
                NumericMode::Exact => {
                    return Err(Error::Domain(format!("x[{}] = {xi} is outside [0, 1]", p + 1)));
                }
                NumericMode::Float => warn!("x[{}] = {xi} is outside [0, 1]", p + 1),
            }
        }
    }
    Ok(())
}

/// `α(x) = (x1, x1x2, …, x1xn, x2, x2x3, …, xn)`.
pub fn alpha<S: Scalar>(x: &[S]) -> Result<Vec<S>> {
    check_box(x)?;
    let n = x.len();
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        out.push(x[i].clone());
        for j in i + 1..n {
            out.push(x[i].mul_ref(&x[j]));
        }
    }
    Ok(out)
}

fn u_of<S: Scalar>(a: &S, b: &S) -> S {
    let two_ab = a.mul_ref(b).mul_ref(&S::from_i64(2));
    a.add_ref(&two_ab).add_ref(b).mul_ref(&S::half())
}

fn v_of<S: Scalar>(a: &S, b: &S) -> S {
    let two_ab = a.mul_ref(b).mul_ref(&S::from_i64(2));
    a.sub_ref(&two_ab).add_ref(b).mul_ref(&S::half())
}

/// `φ` of a single triplet, ordered `(u_ij, u_ik, u_jk, v_ij, v_ik, v_jk)`.
pub fn phi_triplet<S: Scalar>(xi: &S, xj: &S, xk: &S) -> [S; 6] {
    [
        u_of(xi, xj),
        u_of(xi, xk),
        u_of(xj, xk),
        v_of(xi, xj),
        v_of(xi, xk),
        v_of(xj, xk),
    ]
}

/// The lift `φ(x)`; needs `n >= 3`.
pub fn phi<S: Scalar>(x: &[S]) -> Result<LiftedPoint<S>> {
    let layout = Layout::new(x.len())?;
    check_box(x)?;
    let mut u = Vec::with_capacity(layout.n1());
    let mut v = Vec::with_capacity(layout.n1());
    for (i, j) in layout.pairs() {
        u.push(u_of(&x[i - 1], &x[j - 1]));
        v.push(v_of(&x[i - 1], &x[j - 1]));
    }
    Ok(LiftedPoint { u, v })
}

/// `g_{i,j,k}(w) = (u_ij + v_ij + u_ik + v_ik - u_jk - v_jk) / 2`, which equals
/// `x_i` on lifted points.
pub fn g<S: Scalar>(w: &LiftedPoint<S>, layout: &Layout, i: usize, j: usize, k: usize) -> Result<S> {
    layout.iota(i, j)?;
    layout.iota(i, k)?;
    layout.iota(j, k)?;
    let s = w
        .u(layout, i, j)
        .add_ref(w.v(layout, i, j))
        .add_ref(w.u(layout, i, k))
        .add_ref(w.v(layout, i, k))
        .sub_ref(w.u(layout, j, k))
        .sub_ref(w.v(layout, j, k));
    Ok(s.mul_ref(&S::half()))
}

/// Result of rounding the recovered values to a binary vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Recovery<S> {
    pub x: Vec<u8>,
    /// `g_{i,j_ref,k_ref}(w)` before rounding.
    pub values: Vec<S>,
    /// `max_i |values_i - x_i|`.
    pub residual: S,
}

/// Recovery whose residual exceeds the tolerance; `values` is the fractional point.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("recovered point is not binary (residual {})", .0.residual)]
pub struct NonBinaryRecovery<S: Scalar>(pub Recovery<S>);

/// Recovers `x` from `w` through the reference triplets of the consistency
/// constraints: `(1,2,3)` for `x1`, `(2,1,3)` for `x2`, `(i,1,2)` otherwise.
pub fn recover_x<S: Scalar>(
    w: &LiftedPoint<S>,
    layout: &Layout,
    tol: &S,
) -> std::result::Result<Recovery<S>, NonBinaryRecovery<S>> {
    let half = S::half();
    let one = S::one();
    let mut x = Vec::with_capacity(layout.n());
    let mut values = Vec::with_capacity(layout.n());
    let mut residual = S::zero();
    for i in 1..=layout.n() {
        let (j, k) = layout.reference_pair(i);
        let gi = g(w, layout, i, j, k).expect("reference triplet is valid");
        let (bit, dist) = if gi <= half {
            (0, gi.abs_ref())
        } else {
            (1, gi.sub_ref(&one).abs_ref())
        };
        if dist > residual {
            residual = dist;
        }
        x.push(bit);
        values.push(gi);
    }
    let rec = Recovery { x, values, residual };
    if rec.residual > *tol {
        Err(NonBinaryRecovery(rec))
    } else {
        Ok(rec)
    }
}

/// How `λ8` is picked inside its feasible interval.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Lambda8Policy {
    #[default]
    Lower,
    Upper,
    Midpoint,
    Explicit(Rational),
}

/// The bound functions of the witness construction at a point of `[0,1]³`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma2Bounds {
    /// `min_i 1 - x_i(1 - x_j - x_k)`
    pub big_m1: Rational,
    /// `min x_ix_j`
    pub big_m2: Rational,
    /// `1 - (x1 + x2 + x3 - x1x2 - x1x3 - x2x3)`
    pub big_m3: Rational,
    /// `max_i -x_i(1 - x_j - x_k)`
    pub m1: Rational,
    /// `max x_ix_j - 1`
    pub m2: Rational,
    /// `-(x1 + x2 + x3 - x1x2 - x1x3 - x2x3)`
    pub m3: Rational,
}

/// Convex weights `λ` with `B·λ = φ(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma2Witness {
    pub lambda: [Rational; 8],
    /// Feasible `λ8` range `[max{0, m1}, min{M1, M2, M3, 1}]`.
    pub interval: (Rational, Rational),
    pub bounds: Lemma2Bounds,
}

pub fn lemma2_bounds(x: &[Rational; 3]) -> Lemma2Bounds {
    let one = Rational::one();
    let [x1, x2, x3] = x;
    let t = |a: &Rational, b: &Rational, c: &Rational| a * &(&(&one - b) - c);
    let t1 = t(x1, x2, x3);
    let t2 = t(x2, x1, x3);
    let t3 = t(x3, x1, x2);
    let p12 = x1 * x2;
    let p13 = x1 * x3;
    let p23 = x2 * x3;
    let s = &(&(&(x1 + x2) + x3) - &p12) - &(&p13 + &p23);
    let min3 = |a: Rational, b: Rational, c: Rational| a.min(b).min(c);
    let max3 = |a: Rational, b: Rational, c: Rational| a.max(b).max(c);
    Lemma2Bounds {
        big_m1: min3(&one - &t1, &one - &t2, &one - &t3),
        big_m2: min3(p12.clone(), p13.clone(), p23.clone()),
        big_m3: &one - &s,
        m1: max3(-&t1, -&t2, -&t3),
        m2: max3(&p12 - &one, &p13 - &one, &p23 - &one),
        m3: -s,
    }
}

/// Builds the witness for `x ∈ [0,1]³`; columns follow the vertex order of
/// [`basic_block_b`].
pub fn lemma2_witness(x: &[Rational; 3], policy: &Lambda8Policy) -> Result<Lemma2Witness> {
    check_box(x)?;
    let bounds = lemma2_bounds(x);
    let zero = Rational::zero();
    let one = Rational::one();
    let lower = zero.max(bounds.m1.clone());
    let upper = bounds
        .big_m1
        .clone()
        .min(bounds.big_m2.clone())
        .min(bounds.big_m3.clone())
        .min(one.clone());
    let l8 = match policy {
        Lambda8Policy::Lower => lower.clone(),
        Lambda8Policy::Upper => upper.clone(),
        Lambda8Policy::Midpoint => &(&lower + &upper) / &Rational::from_integer(2),
        Lambda8Policy::Explicit(v) => {
            if *v < lower || *v > upper {
                return Err(Error::Parameter(format!("lambda8 = {v} is outside [{lower}, {upper}]")));
            }
            v.clone()
        }
    };
    let [x1, x2, x3] = x;
    let p12 = x1 * x2;
    let p13 = x1 * x3;
    let p23 = x2 * x3;
    let lambda = [
        &one - &(&(&(&(&l8 + x1) + x2) + x3) - &(&(&p12 + &p13) + &p23)),
        &(&(&l8 + x3) - &p13) - &p23,
        &(&(&l8 + x2) - &p12) - &p23,
        &p23 - &l8,
        &(&(&l8 + x1) - &p12) - &p13,
        &p13 - &l8,
        &p12 - &l8,
        l8,
    ];
    Ok(Lemma2Witness {
        lambda,
        interval: (lower, upper),
        bounds,
    })
}

/// A point of the triplet polytope that is not the lift of any point of the cube.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonConvexity {
    /// `w = B·(e2 + e3)/2`
    pub w: Vec<Rational>,
    /// `L·w`, the only candidate preimage
    pub lw: Vec<Rational>,
    /// `φ(L·w)`
    pub phi_lw: Vec<Rational>,
}

pub fn nonconvexity_counterexample() -> NonConvexity {
    let b = basic_block_b();
    let half = Rational::new(1, 2);
    let mut lambda = vec![Rational::zero(); 8];
    lambda[1] = half.clone();
    lambda[2] = half;
    let w = b.mul_vec(&lambda);
    let lw = build_l3().mul_vec(&w);
    let phi_lw = phi_triplet(&lw[0], &lw[1], &lw[2]).to_vec();
    assert_ne!(w, phi_lw, "the midpoint must leave the image of the cube");
    NonConvexity { w, lw, phi_lw }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn qs(v: &[&str]) -> Vec<Rational> {
        v.iter().map(|s| q(s)).collect()
    }

    #[test]
    fn alpha_small() {
        let x = qs(&["1", "1/2", "1/2"]);
        assert_eq!(alpha(&x).unwrap(), qs(&["1", "1/2", "1/2", "1/2", "1/4", "1/2"]));
        assert!(alpha(&qs(&["2", "0", "0"])).is_err());
        assert_eq!(alpha(&[0.0f64; 4]).unwrap(), vec![0.0; 10]);
    }

    #[test]
    fn phi_worked_points() {
        let cases = [
            (["1", "1/2", "1/2"], ["5/4", "5/4", "3/4", "1/4", "1/4", "1/4"]),
            (["0", "1/4", "1/4"], ["1/8", "1/8", "5/16", "1/8", "1/8", "3/16"]),
            (["1", "1/2", "0"], ["5/4", "1/2", "1/4", "1/4", "1/2", "1/4"]),
        ];
        for (x, w) in cases {
            assert_eq!(phi(&qs(&x)).unwrap().to_w(), qs(&w));
        }
    }

    #[test]
    fn g_values() {
        let l = Layout::new(3).unwrap();
        let w = phi(&qs(&["1", "1/2", "0"])).unwrap();
        assert_eq!(g(&w, &l, 1, 2, 3).unwrap(), Rational::one());
        let zero = LiftedPoint {
            u: vec![Rational::zero(); 3],
            v: vec![Rational::zero(); 3],
        };
        assert_eq!(g(&zero, &l, 2, 1, 3).unwrap(), Rational::zero());
        assert!(g(&zero, &l, 1, 1, 3).is_err());
        assert!(g(&zero, &l, 1, 2, 4).is_err());
    }

    #[test]
    fn recovery() {
        let l = Layout::new(3).unwrap();
        let w = LiftedPoint::from_w(&l, &qs(&["2", "2", "2", "0", "0", "0"])).unwrap();
        let tol = Rational::new(1, 1_000_000);
        let rec = recover_x(&w, &l, &tol).unwrap();
        assert_eq!(rec.x, vec![1, 1, 1]);
        assert!(rec.residual.is_zero());

        let frac = phi(&qs(&["0", "1/4", "1/4"])).unwrap();
        let err = recover_x(&frac, &l, &tol).unwrap_err();
        assert_eq!(err.0.values, qs(&["0", "1/4", "1/4"]));
        assert_eq!(err.0.residual, q("1/4"));
        // the default tolerance of one quarter accepts it
        assert_eq!(recover_x(&frac, &l, &q("1/4")).unwrap().x, vec![0, 0, 0]);
    }

    #[test]
    fn witness_examples() {
        let w = lemma2_witness(&[q("1"), q("1/2"), q("1/2")], &Lambda8Policy::Upper).unwrap();
        assert_eq!(w.lambda.to_vec(), qs(&["0", "0", "0", "0", "1/4", "1/4", "1/4", "1/4"]));
        assert_eq!(w.interval, (q("1/4"), q("1/4")));

        let w = lemma2_witness(&[q("0"), q("1/4"), q("1/4")], &Lambda8Policy::Midpoint).unwrap();
        assert_eq!(w.lambda.to_vec(), qs(&["9/16", "3/16", "3/16", "1/16", "0", "0", "0", "0"]));

        let w = lemma2_witness(&[q("1"), q("1/2"), q("0")], &Lambda8Policy::Lower).unwrap();
        assert_eq!(w.lambda.to_vec(), qs(&["0", "0", "0", "0", "1/2", "0", "1/2", "0"]));

        let x4 = [q("1/4"), q("1/4"), q("1/4")];
        let w = lemma2_witness(&x4, &Lambda8Policy::Explicit(q("1/32"))).unwrap();
        assert_eq!(
            w.lambda.to_vec(),
            qs(&["13/32", "5/32", "5/32", "1/32", "5/32", "1/32", "1/32", "1/32"])
        );
        let w = lemma2_witness(&x4, &Lambda8Policy::Upper).unwrap();
        assert_eq!(w.interval, (q("0"), q("1/16")));
        assert_eq!(w.lambda[0], q("3/8"));
        assert!(lemma2_witness(&x4, &Lambda8Policy::Explicit(q("1/8"))).is_err());
        assert!(lemma2_witness(&[q("-1"), q("0"), q("0")], &Lambda8Policy::Lower).is_err());
    }

    #[test]
    fn counterexample() {
        let c = nonconvexity_counterexample();
        assert_eq!(c.w, qs(&["1/4", "1/4", "1/2", "1/4", "1/4", "1/2"]));
        assert_eq!(c.lw, qs(&["0", "1/2", "1/2"]));
        assert_eq!(c.phi_lw, qs(&["1/4", "1/4", "3/4", "1/4", "1/4", "1/4"]));
        let differ: Vec<usize> = (0..6).filter(|&p| c.w[p] != c.phi_lw[p]).collect();
        assert_eq!(differ, vec![2, 5]);
    }
}
