//! Golden checks against the worked examples, run by `ubqp selftest`.
//!
//! Printed matrices are transcribed here as integer tables with their
//! common factor of one half.

use std::collections::BTreeSet;
use std::fmt;

use crate::instance::{example_lp3, example_n4};
use crate::layout::Layout;
use crate::lift::{lemma2_witness, nonconvexity_counterexample, phi, recover_x, Lambda8Policy, LiftedPoint};
use crate::lpsolve::{solve, LpOptions, LpSolution, LpStatus};
use crate::oracle::brute_force_min;
use crate::reduction::{
    assemble, basic_block_b, build_consistency, build_e, build_l3, build_t, objective_vector, transformed_objective,
    DenseMatrix,
};
use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    /// The computed value is correct but disagrees with the printed one.
    PrintedDiffers,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::PrintedDiffers => "DIFFERS FROM PRINTED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub outcome: Outcome,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.outcome, self.name)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

pub const E3: [[i64; 6]; 6] = [
    [1, 2, 0, 1, 0, 0],
    [1, 0, 2, 0, 0, 1],
    [0, 0, 0, 1, 2, 1],
    [1, -2, 0, 1, 0, 0],
    [1, 0, -2, 0, 0, 1],
    [0, 0, 0, 1, -2, 1],
];

pub const T3: [[i64; 6]; 6] = [
    [1, 1, -1, 1, 1, -1],
    [1, 0, 0, -1, 0, 0],
    [0, 1, 0, 0, -1, 0],
    [1, -1, 1, 1, -1, 1],
    [0, 0, 1, 0, 0, -1],
    [-1, 1, 1, -1, 1, 1],
];

pub const L3: [[i64; 6]; 3] = [[1, 1, -1, 1, 1, -1], [1, -1, 1, 1, -1, 1], [-1, 1, 1, -1, 1, 1]];

/// Basic block `B`, doubled.
pub const B2: [[i64; 8]; 6] = [
    [0, 0, 1, 1, 1, 1, 4, 4],
    [0, 1, 0, 1, 1, 4, 1, 4],
    [0, 1, 1, 4, 0, 1, 1, 4],
    [0, 0, 1, 1, 1, 1, 0, 0],
    [0, 1, 0, 1, 1, 0, 1, 0],
    [0, 1, 1, 0, 0, 1, 1, 0],
];

pub const T4: [[i64; 12]; 10] = [
    [1, 1, 0, -1, 0, 0, 1, 1, 0, -1, 0, 0],
    [1, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0, -1, 0, 0, 0],
    [1, -1, 0, 1, 0, 0, 1, -1, 0, 1, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 0, 0, -1, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0, 0, 0, -1, 0],
    [-1, 1, 0, 1, 0, 0, -1, 1, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, -1],
    [-1, 0, 1, 0, 1, 0, -1, 0, 1, 0, 1, 0],
];

pub const E4: [[i64; 10]; 12] = [
    [1, 2, 0, 0, 1, 0, 0, 0, 0, 0],
    [1, 0, 2, 0, 0, 0, 0, 1, 0, 0],
    [1, 0, 0, 2, 0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 1, 2, 0, 1, 0, 0],
    [0, 0, 0, 0, 1, 0, 2, 0, 0, 1],
    [0, 0, 0, 0, 0, 0, 0, 1, 2, 1],
    [1, -2, 0, 0, 1, 0, 0, 0, 0, 0],
    [1, 0, -2, 0, 0, 0, 0, 1, 0, 0],
    [1, 0, 0, -2, 0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 1, -2, 0, 1, 0, 0],
    [0, 0, 0, 0, 1, 0, -2, 0, 0, 1],
    [0, 0, 0, 0, 0, 0, 0, 1, -2, 1],
];

/// The eight consistency equations for `n = 4` as printed: each is
/// `(p + q - r) - (s + t - y)` over pairs written as two-digit codes, applied
/// to both `u` and `v`.
pub const N4_CONSISTENCY: [[[usize; 3]; 2]; 8] = [
    [[12, 13, 23], [12, 14, 24]],
    [[12, 13, 23], [13, 14, 34]],
    [[12, 23, 13], [12, 24, 14]],
    [[12, 23, 13], [23, 24, 34]],
    [[13, 23, 12], [13, 34, 14]],
    [[13, 23, 12], [23, 34, 24]],
    [[14, 24, 12], [14, 34, 13]],
    [[14, 24, 12], [24, 34, 23]],
];

fn halves<const C: usize>(rows: &[[i64; C]]) -> DenseMatrix {
    let refs: Vec<&[i64]> = rows.iter().map(|r| &r[..]).collect();
    DenseMatrix::from_i64_rows(&Rational::new(1, 2), &refs)
}

fn q(s: &str) -> Rational {
    s.parse().expect("literal")
}

fn qs(v: &[&str]) -> Vec<Rational> {
    v.iter().map(|s| q(s)).collect()
}

fn show(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Rows of `A22` for `n = 4` as a set of integer vectors over `w`, each
/// normalized so that its first nonzero is positive.
pub fn consistency_row_set(rows: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    rows.iter()
        .map(|r| match r.iter().find(|&&v| v != 0) {
            Some(&v) if v < 0 => r.iter().map(|x| -x).collect(),
            _ => r.clone(),
        })
        .collect()
}

/// The printed `n = 4` equations as coefficient vectors over `w`.
pub fn printed_n4_consistency() -> Vec<Vec<i64>> {
    let layout = Layout::new(4).expect("n = 4");
    let pos = |code: usize| layout.u_pos(code / 10, code % 10);
    N4_CONSISTENCY
        .iter()
        .map(|[a, b]| {
            let mut row = vec![0i64; 12];
            for (terms, sign) in [(a, 1), (b, -1)] {
                for (t, s) in terms.iter().zip([1, 1, -1]) {
                    row[pos(*t)] += sign * s;
                    row[6 + pos(*t)] += sign * s;
                }
            }
            row
        })
        .collect()
}

struct Collector(Vec<Check>);

impl Collector {
    fn check(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.0.push(Check {
            name: name.to_string(),
            outcome: if ok { Outcome::Pass } else { Outcome::Fail },
            detail: if ok { String::new() } else { detail.into() },
        });
    }

    fn printed(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.0.push(Check {
            name: name.to_string(),
            outcome: if ok { Outcome::Pass } else { Outcome::PrintedDiffers },
            detail: if ok { String::new() } else { detail.into() },
        });
    }
}

fn end_to_end(c: &mut Collector, label: &str, inst: &crate::instance::UbqpInstance, opt: i64, w: &[Rational], x: &[u8]) {
    let lp = assemble(inst);
    let sol: LpSolution<Rational> = match solve(&lp.problem(), &LpOptions::default()) {
        Ok(s) => s,
        Err(e) => {
            c.check(&format!("{label}: LP solves"), false, e.to_string());
            return;
        }
    };
    c.check(
        &format!("{label}: LP optimum {opt}"),
        sol.status == LpStatus::Optimal && sol.objective == Rational::from_integer(opt),
        format!("status {}, objective {}", sol.status, sol.objective),
    );
    let got_w = lp.w_part(&sol.primal);
    c.check(&format!("{label}: optimal w"), got_w == w, format!("got {}", show(got_w)));
    let lifted = LiftedPoint::from_w(&lp.layout, got_w).expect("w length");
    let rec = recover_x(&lifted, &lp.layout, &Rational::zero());
    c.check(
        &format!("{label}: recovered x"),
        rec.as_ref().map(|r| r.x.as_slice()) == Ok(x),
        format!("{rec:?}"),
    );
    let bf = brute_force_min(inst);
    c.check(
        &format!("{label}: brute force"),
        bf.as_ref().ok().map(|b| (b.value.clone(), b.argmins())) == Some((Rational::from_integer(opt), vec![x.to_vec()])),
        format!("{bf:?}"),
    );
}

/// Runs every golden check.
pub fn run_selftest() -> Vec<Check> {
    let mut c = Collector(Vec::new());
    let id = |n| DenseMatrix::identity(n);

    let (e3, t3) = (build_e(3).expect("n = 3"), build_t(3).expect("n = 3"));
    c.check("E3 matches the printed matrix", e3 == halves(&E3), "");
    c.check("T3 matches the printed matrix", t3 == halves(&T3), "");
    c.check("T3 E3 = I6", t3.mul(&e3).ok() == Some(id(6)), "");
    let (e4, t4) = (build_e(4).expect("n = 4"), build_t(4).expect("n = 4"));
    c.check("E4 matches the printed matrix", e4 == halves(&E4), "");
    c.check("T4 matches the printed matrix", t4 == halves(&T4), "");
    c.check("T4 E4 = I10", t4.mul(&e4).ok() == Some(id(10)), "");
    c.check("L matches the printed matrix", build_l3() == halves(&L3), "");
    let b4 = halves(&B2);
    c.check("B matches the printed matrix", basic_block_b() == b4, "");

    let layout = Layout::new(4).expect("n = 4");
    let iota: Vec<usize> = layout.pairs().map(|(i, j)| layout.iota(i, j).expect("pair")).collect();
    c.check("iota positions for n = 4", iota == [1, 2, 3, 4, 5, 6], format!("{iota:?}"));

    let a22 = build_consistency(&layout).to_dense();
    let rows: Vec<Vec<i64>> = (0..a22.rows())
        .map(|r| a22.row(r).iter().map(|v| v.to_i64().expect("integer coefficients")).collect())
        .collect();
    c.check(
        "n = 4 consistency rows match the printed equations",
        consistency_row_set(&rows) == consistency_row_set(&printed_n4_consistency()) && rows.len() == 8,
        format!("{} rows", rows.len()),
    );

    let witnesses: [([&str; 3], Lambda8Policy, [&str; 8]); 5] = [
        (["1", "1/2", "1/2"], Lambda8Policy::Lower, ["0", "0", "0", "0", "1/4", "1/4", "1/4", "1/4"]),
        (["0", "1/4", "1/4"], Lambda8Policy::Lower, ["9/16", "3/16", "3/16", "1/16", "0", "0", "0", "0"]),
        (["1", "1/2", "0"], Lambda8Policy::Lower, ["0", "0", "0", "0", "1/2", "0", "1/2", "0"]),
        (
            ["1/4", "1/4", "1/4"],
            Lambda8Policy::Explicit(q("1/32")),
            ["13/32", "5/32", "5/32", "1/32", "5/32", "1/32", "1/32", "1/32"],
        ),
        (
            ["1/4", "1/4", "1/4"],
            Lambda8Policy::Upper,
            ["3/8", "3/16", "3/16", "0", "3/16", "0", "0", "1/16"],
        ),
    ];
    for (x, policy, want) in witnesses {
        let x3 = [q(x[0]), q(x[1]), q(x[2])];
        let got = lemma2_witness(&x3, &policy);
        let lifted = phi(&x3).map(|p| p.to_w());
        let ok = match (&got, &lifted) {
            (Ok(wit), Ok(w)) => wit.lambda.to_vec() == qs(&want) && basic_block_b().mul_vec(&wit.lambda) == *w,
            _ => false,
        };
        c.check(
            &format!("witness at ({}, {}, {}) with {policy:?}", x[0], x[1], x[2]),
            ok,
            format!("{got:?}"),
        );
    }

    let ce = nonconvexity_counterexample();
    c.check(
        "counterexample point w = B(e2 + e3)/2",
        ce.w == qs(&["1/4", "1/4", "1/2", "1/4", "1/4", "1/2"]),
        show(&ce.w),
    );
    c.check("counterexample phi(Lw) differs from w", ce.phi_lw != ce.w, "");
    c.printed(
        "counterexample Lw as printed (0, 1/4, 1/4)",
        ce.lw == qs(&["0", "1/4", "1/4"]),
        format!("L w = {}", show(&ce.lw)),
    );
    c.printed(
        "counterexample phi(Lw) as printed (1/8, 1/8, 5/16, 1/8, 1/8, 3/16)",
        ce.phi_lw == qs(&["1/8", "1/8", "5/16", "1/8", "1/8", "3/16"]),
        format!("phi(L w) = {}", show(&ce.phi_lw)),
    );

    let ints = |v: &[i64]| v.iter().map(|&x| Rational::from_integer(x)).collect::<Vec<_>>();
    let lp3 = example_lp3();
    c.check(
        "LP3 objective vector c",
        objective_vector(&lp3) == ints(&[-2, -20, -40, -2, -20, -26]),
        show(&objective_vector(&lp3)),
    );
    c.check(
        "LP3 transformed objective",
        transformed_objective(&lp3) == ints(&[1, -33, -23, 21, 7, -3]),
        show(&transformed_objective(&lp3)),
    );
    c.check(
        "LP3 f(1,1,1) = -110",
        lp3.evaluate(&[1, 1, 1]).ok() == Some(Rational::from_integer(-110)),
        "",
    );
    end_to_end(&mut c, "LP3", &lp3, -110, &ints(&[2, 2, 2, 0, 0, 0]), &[1, 1, 1]);

    let n4 = example_n4();
    c.check(
        "n = 4 example f(1,1,0,1) = -170",
        n4.evaluate(&[1, 1, 0, 1]).ok() == Some(Rational::from_integer(-170)),
        "",
    );
    let w4 = qs(&["2", "1/2", "2", "1/2", "2", "1/2", "0", "1/2", "0", "1/2", "0", "1/2"]);
    end_to_end(&mut c, "n = 4 example", &n4, -170, &w4, &[1, 1, 0, 1]);
    c.0
}
