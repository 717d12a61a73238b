//! Built matrices against the printed tables, and index maps against
//! direct enumeration.

mod common;

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};

use common::*;
use ubqp_lp::instance::UbqpInstance;
use ubqp_lp::layout::Layout;
use ubqp_lp::reduction::{assemble, build_consistency, build_e, build_l3, build_s3, build_t, DenseMatrix};
use ubqp_lp::scalar::Rational;

#[test]
fn printed_matrices() {
    assert_eq!(build_e(3).unwrap(), tex_matrix(E3_TEX, 2));
    assert_eq!(build_t(3).unwrap(), tex_matrix(T3_TEX, 2));
    assert_eq!(build_l3(), tex_matrix(L_TEX, 2));
    assert_eq!(build_s3(), tex_matrix(S3_TEX, 2));
    assert_eq!(build_t(4).unwrap(), tex_matrix(T4_TEX, 2));
    assert_eq!(build_e(4).unwrap(), tex_matrix(E4_TEX, 2));
}

#[test]
fn t_is_a_left_inverse_of_e() {
    let e3 = to_big_rows(&build_e(3).unwrap());
    assert_eq!(inverse(&e3).expect("E3 is invertible"), to_big_rows(&build_t(3).unwrap()));
    for n in 4..=8 {
        let e = to_big_rows(&build_e(n).unwrap());
        let t = to_big_rows(&build_t(n).unwrap());
        let k = n * (n + 1) / 2;
        assert_eq!((t.len(), e.len(), e[0].len()), (k, n * (n - 1), k));
        for (r, row) in t.iter().enumerate() {
            for c in 0..k {
                let v: BigRational = row.iter().zip(&e).map(|(a, er)| a * &er[c]).sum();
                assert_eq!(v, if r == c { BigRational::one() } else { BigRational::zero() }, "n = {n}");
            }
        }
    }
}

#[test]
fn s3_reproduces_alpha() {
    let x = [Rational::new(1, 3), Rational::new(3, 4), Rational::new(2, 5)];
    let xt: Vec<Rational> = std::iter::once(Rational::one()).chain(x.iter().cloned()).collect();
    let kron: Vec<Rational> = xt.iter().flat_map(|a| xt.iter().map(move |b| a.clone() * b.clone())).collect();
    let want = vec![
        x[0].clone(),
        x[0].clone() * x[1].clone(),
        x[0].clone() * x[2].clone(),
        x[1].clone(),
        x[1].clone() * x[2].clone(),
        x[2].clone(),
    ];
    assert_eq!(build_s3().mul_vec(&kron), want);
}

#[test]
fn n4_consistency_equations_as_a_set() {
    let a = build_consistency(&Layout::new(4).unwrap()).to_dense();
    let norm = |r: Vec<i64>| -> Vec<i64> {
        match r.iter().find(|v| **v != 0) {
            Some(v) if *v < 0 => r.iter().map(|x| -x).collect(),
            _ => r,
        }
    };
    let built: BTreeSet<Vec<i64>> =
        (0..a.rows()).map(|r| norm(a.row(r).iter().map(|v| v.to_i64().unwrap()).collect())).collect();
    let printed: BTreeSet<Vec<i64>> = N4_CONSISTENCY_EQUATIONS.iter().map(|e| norm(parse_linear_form(e, 4))).collect();
    assert_eq!(a.rows(), 8);
    assert_eq!(built, printed);
}

#[test]
fn iota_is_a_bijection() {
    for n in 3..=40 {
        let layout = Layout::new(n).unwrap();
        let pairs = lex_pairs(n);
        for (p, &(i, j)) in pairs.iter().enumerate() {
            assert_eq!(layout.iota(i, j).unwrap(), p + 1);
            assert_eq!(layout.pair_at(p + 1).unwrap(), (i, j));
        }
    }
}

#[test]
fn triplet_rank_is_lexicographic() {
    for n in 3..=12 {
        let layout = Layout::new(n).unwrap();
        let mut r = 0;
        for i in 1..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    r += 1;
                    assert_eq!(layout.triplet_rank(i, j, k).unwrap(), r);
                    assert_eq!(layout.triplet_at(r).unwrap(), (i, j, k));
                }
            }
        }
        assert_eq!(r, layout.big_n());
    }
}

#[test]
fn shape_and_sparsity() {
    for n in 3..=20 {
        let lp = assemble(&UbqpInstance::zero(n).unwrap());
        let l = &lp.layout;
        let (big_n, n1) = (n * (n - 1) * (n - 2) / 6, n * (n - 1) / 2);
        let n2 = n * ((n - 1) * (n - 2) / 2 - 1);
        assert_eq!((lp.a.rows, lp.a.cols), (7 * big_n + n2, 8 * big_n + 2 * n1), "n = {n}");
        assert_eq!((l.rows(), l.cols()), (lp.a.rows, lp.a.cols));
        assert!(lp.a.nnz() <= 60 * big_n + 12 * n2 + 8 * big_n, "n = {n}: nnz {}", lp.a.nnz());
        assert!(lp.a.validate().is_ok());
    }
}

#[test]
fn identity_helper_sanity() {
    let i = DenseMatrix::identity(3);
    assert_eq!(i.mul(&i).unwrap(), i);
}
