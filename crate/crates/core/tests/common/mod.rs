//! Printed tables and independent reference computations shared by the
//! integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use ubqp_lp::reduction::DenseMatrix;
use ubqp_lp::scalar::Rational;

pub const E3_TEX: &str = r"
1 & 2 & 0 & 1 & 0 & 0\\
1 & 0 & 2 & 0 & 0 & 1\\
0 & 0 & 0 & 1 & 2 & 1\\
1 & -2 & 0 & 1 & 0 & 0\\
1 & 0 & -2 & 0 & 0 & 1\\
0 & 0 & 0 & 1 & -2 & 1";

pub const T3_TEX: &str = r"
1 & 1 & -1 & 1 & 1 & -1\\
1 & 0 & 0 & -1 & 0 & 0\\
0 & 1 & 0 & 0 & -1 & 0\\
1 & -1 & 1 & 1 & -1 & 1\\
0 & 0 & 1 & 0 & 0 & -1\\
-1 & 1 & 1 & -1 & 1 & 1";

pub const L_TEX: &str = r"
1 & 1 & -1 & 1 & 1 & -1\\
1 & -1 & 1 & 1 & -1 & 1\\
-1 & 1 & 1 & -1 & 1 & 1";

pub const S3_TEX: &str = r"
0 & 1 & 0 & 0 & 1 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0\\
0 & 0 & 0 & 0 & 0 & 0 & 1 & 0 & 0 & 1 & 0 & 0 & 0 & 0 & 0 & 0\\
0 & 0 & 0 & 0 & 0 & 0 & 0 & 1 & 0 & 0 & 0 & 0 & 0 & 1 & 0 & 0\\
0 & 0 & 1 & 0 & 0 & 0 & 0 & 0 & 1 & 0 & 0 & 0 & 0 & 0 & 0 & 0\\
0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 1 & 0 & 0 & 1 & 0\\
0 & 0 & 0 & 1 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 1 & 0 & 0 & 0";

pub const T4_TEX: &str = r"
1 & 1 & 0 & -1 & 0 & 0 & 1 & 1 & 0 & -1 & 0 & 0\\
1 & 0 & 0 & 0 & 0 & 0 & -1 & 0 & 0 & 0 & 0 & 0\\
0 & 1 & 0 & 0 & 0 & 0 & 0 & -1 & 0 & 0 & 0 & 0\\
0 & 0 & 1 & 0 & 0 & 0 & 0 & 0 & -1 & 0 & 0 & 0\\
1 & -1 & 0 & 1 & 0 & 0 & 1 & -1 & 0 & 1 & 0 & 0\\
0 & 0 & 0 & 1 & 0 & 0 & 0 & 0 & 0 & -1 & 0 & 0\\
0 & 0 & 0 & 0 & 1 & 0 & 0 & 0 & 0 & 0 & -1 & 0\\
-1 & 1 & 0 & 1 & 0 & 0 & -1 & 1 & 0 & 1 & 0 & 0\\
0 & 0 & 0 & 0 & 0 & 1 & 0 & 0 & 0 & 0 & 0 & -1\\
-1 & 0 & 1 & 0 & 1 & 0 & -1 & 0 & 1 & 0 & 1 & 0";

pub const E4_TEX: &str = r"
1 & 2 & 0 & 0 & 1 & 0 & 0 & 0 & 0 & 0\\
1 & 0 & 2 & 0 & 0 & 0 & 0 & 1 & 0 & 0\\
1 & 0 & 0 & 2 & 0 & 0 & 0 & 0 & 0 & 1\\
0 & 0 & 0 & 0 & 1 & 2 & 0 & 1 & 0 & 0\\
0 & 0 & 0 & 0 & 1 & 0 & 2 & 0 & 0 & 1\\
0 & 0 & 0 & 0 & 0 & 0 & 0 & 1 & 2 & 1\\
1 & -2 & 0 & 0 & 1 & 0 & 0 & 0 & 0 & 0\\
1 & 0 & -2 & 0 & 0 & 0 & 0 & 1 & 0 & 0\\
1 & 0 & 0 & -2 & 0 & 0 & 0 & 0 & 0 & 1\\
0 & 0 & 0 & 0 & 1 & -2 & 0 & 1 & 0 & 0\\
0 & 0 & 0 & 0 & 1 & 0 & -2 & 0 & 0 & 1\\
0 & 0 & 0 & 0 & 0 & 0 & 0 & 1 & -2 & 1";

/// The eight consistency equations for `n = 4`, each `= 0`.
pub const N4_CONSISTENCY_EQUATIONS: [&str; 8] = [
    "(u12+v12+u13+v13-u23-v23)-(u12+v12+u14+v14-u24-v24)",
    "(u12+v12+u13+v13-u23-v23)-(u13+v13+u14+v14-u34-v34)",
    "(u12+v12+u23+v23-u13-v13)-(u12+v12+u24+v24-u14-v14)",
    "(u12+v12+u23+v23-u13-v13)-(u23+v23+u24+v24-u34-v34)",
    "(u13+v13+u23+v23-u12-v12)-(u13+v13+u34+v34-u14-v14)",
    "(u13+v13+u23+v23-u12-v12)-(u23+v23+u34+v34-u24-v24)",
    "(u14+v14+u24+v24-u12-v12)-(u14+v14+u34+v34-u13-v13)",
    "(u14+v14+u24+v24-u12-v12)-(u24+v24+u34+v34-u23-v23)",
];

/// Parses a `&`/`\\` table and multiplies every entry by `1/den`.
pub fn tex_matrix(text: &str, den: i64) -> DenseMatrix {
    let rows: Vec<Vec<Rational>> = text
        .split("\\\\")
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(|r| {
            r.split('&')
                .map(|e| Rational::new(e.trim().parse::<i64>().expect("integer entry"), den))
                .collect()
        })
        .collect();
    DenseMatrix::from_rows(rows).expect("rectangular table")
}

/// Lexicographic pairs `(i, j)`, `1 <= i < j <= n`.
pub fn lex_pairs(n: usize) -> Vec<(usize, usize)> {
    (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect()
}

/// Coefficients over `w = (u, v)` of a linear form such as
/// `(u12+v12-u23)-(u13+v14)`; single-digit indices.
pub fn parse_linear_form(text: &str, n: usize) -> Vec<i64> {
    let pairs = lex_pairs(n);
    let n1 = pairs.len();
    let mut row = vec![0i64; 2 * n1];
    let mut outer = 1i64;
    let mut sign = 1i64;
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut k = 0;
    while k < chars.len() {
        match chars[k] {
            '(' => {}
            ')' => sign = 1,
            '+' => sign = 1,
            '-' if chars.get(k + 1) == Some(&'(') => outer = -1,
            '-' => sign = -1,
            c @ ('u' | 'v') => {
                let i = chars[k + 1].to_digit(10).expect("digit") as usize;
                let j = chars[k + 2].to_digit(10).expect("digit") as usize;
                let p = pairs.iter().position(|&q| q == (i, j)).expect("known pair");
                let col = if c == 'u' { p } else { n1 + p };
                row[col] += outer * sign;
                k += 2;
            }
            other => panic!("unexpected {other:?} in {text}"),
        }
        k += 1;
    }
    row
}

pub fn big(v: &Rational) -> BigRational {
    v.to_big()
}

/// `φ(x)` straight from the definitions of `u_ij` and `v_ij`.
pub fn phi_reference(x: &[BigRational]) -> Vec<BigRational> {
    let two = BigRational::from_integer(BigInt::from(2));
    let pairs = lex_pairs(x.len());
    let mut u = Vec::new();
    let mut v = Vec::new();
    for &(i, j) in &pairs {
        let (a, b) = (&x[i - 1], &x[j - 1]);
        let cross = &two * a * b;
        u.push((a + &cross + b) / &two);
        v.push((a - &cross + b) / &two);
    }
    u.extend(v);
    u
}

/// `xᵀQx + bᵀx` as a quadratic form.
pub fn f_reference(q: &[Vec<Rational>], b: &[Rational], x: &[u8]) -> BigRational {
    let n = b.len();
    let mut acc = BigRational::zero();
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        acc += big(&b[i]);
        for j in 0..n {
            if x[j] == 1 {
                acc += big(&q[i][j]);
            }
        }
    }
    acc
}

/// Inverse by Gauss-Jordan elimination; `None` when singular.
pub fn inverse(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let piv = a[c][c].clone();
        for v in a[c].iter_mut() {
            *v = &*v / &piv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let pivot_row = a[c].clone();
                for (v, pv) in a[r].iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn to_big_rows(m: &DenseMatrix) -> Vec<Vec<BigRational>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(big).collect()).collect()
}

pub fn dyadic(num: u32, bits: u32) -> Rational {
    Rational::new(num as i64, 1i64 << bits)
}
