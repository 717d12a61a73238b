//! Structural matrices of the reduction and the assembled LP
//!
//! ```text
//! [ A11  A12 ] [λ]   [0]   6N rows:  B·λ^(r) - w_(r) = 0
//! [  0   A22 ] [w] = [0]   N2 rows:  consistency of the recovered x_i
//! [ A31   0  ]       [1]   N rows:   Σ λ^(r) = 1
//! ```
//!
//! with `λ ≥ 0, w ≥ 0` and cost `(0, c̃)` where `c̃ᵀ = cᵀT_n`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::UbqpInstance;
use crate::layout::Layout;
use crate::lift::phi_triplet;
use crate::lpsolve::LpProblem;
use crate::scalar::{Rational, Scalar};

/// Row-major dense matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(DenseMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// `scale · rows`, for transcribing printed matrices.
    pub fn from_i64_rows(scale: &Rational, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| &Rational::from_integer(v) * scale).collect())
            .collect();
        Self::from_rows(rows).expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.cols, "vector length must match the column count");
        (0..self.rows)
            .map(|r| {
                self.row(r).iter().zip(x).fold(S::zero(), |acc, (a, xi)| {
                    if a.is_zero() {
                        acc
                    } else {
                        acc.add_ref(&S::from_rational(a).mul_ref(xi))
                    }
                })
            })
            .collect()
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }
}

/// Coordinate-format sparse matrix with 0-based indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseCoeffList {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, Rational)>,
}

impl SparseCoeffList {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseCoeffList {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, r: usize, c: usize, v: Rational) {
        debug_assert!(r < self.rows && c < self.cols, "({r}, {c}) outside {}x{}", self.rows, self.cols);
        self.entries.push((r, c, v));
    }

    /// Sorts by `(row, col)`, sums duplicates, drops zeros.
    pub fn canonicalize(&mut self) {
        let mut merged: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for (r, c, v) in self.entries.drain(..) {
            *merged.entry((r, c)).or_default() += v;
        }
        self.entries = merged
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|((r, c), v)| (r, c, v))
            .collect();
    }

    /// Copies `other` with its origin moved to `(row_off, col_off)`.
    pub fn place(&mut self, other: &SparseCoeffList, row_off: usize, col_off: usize) {
        assert!(row_off + other.rows <= self.rows && col_off + other.cols <= self.cols);
        for (r, c, v) in &other.entries {
            self.entries.push((r + row_off, c + col_off, v.clone()));
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (r, c, _) in &self.entries {
            if *r >= self.rows || *c >= self.cols {
                return Err(Error::Index(format!("entry ({r}, {c}) outside {}x{}", self.rows, self.cols)));
            }
        }
        Ok(())
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn mul_vec<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.cols, "vector length must match the column count");
        let mut out = vec![S::zero(); self.rows];
        for (r, c, v) in &self.entries {
            out[*r] = out[*r].add_ref(&S::from_rational(v).mul_ref(&x[*c]));
        }
        out
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.rows, self.cols);
        for (r, c, v) in &self.entries {
            let s = m.get(*r, *c) + v;
            m.set(*r, *c, s);
        }
        m
    }
}

/// Vertices of `{0,1}³` in the column order of `B`: `x1` is the most
/// significant bit, so column `l` holds the vertex with bits of `l - 1`.
pub fn cube_vertex(l: usize) -> [u8; 3] {
    let b = (l - 1) as u8;
    [(b >> 2) & 1, (b >> 1) & 1, b & 1]
}

/// The 6×8 basic block whose columns are `φ` of the cube vertices.
pub fn basic_block_b() -> DenseMatrix {
    let mut m = DenseMatrix::zeros(6, 8);
    for l in 1..=8 {
        let x = cube_vertex(l).map(|b| Rational::from_integer(b as i64));
        for (r, val) in phi_triplet(&x[0], &x[1], &x[2]).into_iter().enumerate() {
            m.set(r, l - 1, val);
        }
    }
    m
}

/// `E_n` with `φ(x) = E_n·α(x)`: rows are `u` then `v` in `ι` order, columns
/// follow `α`.
pub fn build_e(n: usize) -> Result<DenseMatrix> {
    let layout = Layout::new(n)?;
    let half = Rational::new(1, 2);
    let mut m = DenseMatrix::zeros(2 * layout.n1(), layout.alpha_len());
    for (i, j) in layout.pairs() {
        let (ci, cj, cij) = (layout.alpha_var(i) - 1, layout.alpha_var(j) - 1, layout.alpha_pair(i, j) - 1);
        for (row, cross) in [(layout.u_pos(i, j), 1), (layout.v_pos(i, j), -1)] {
            m.set(row, ci, half.clone());
            m.set(row, cj, half.clone());
            m.set(row, cij, Rational::from_integer(cross));
        }
    }
    Ok(m)
}

/// Nonzeros of the row of `T_n` for the `α` entry at 1-based position `p`.
fn t_row(layout: &Layout, p: usize) -> Vec<(usize, Rational)> {
    let half = Rational::new(1, 2);
    for i in 1..=layout.n() {
        if layout.alpha_var(i) == p {
            let (j, k) = layout.reference_pair(i);
            return vec![
                (layout.u_pos(i, j), half.clone()),
                (layout.v_pos(i, j), half.clone()),
                (layout.u_pos(i, k), half.clone()),
                (layout.v_pos(i, k), half.clone()),
                (layout.u_pos(j, k), -&half),
                (layout.v_pos(j, k), -&half),
            ];
        }
        for j in i + 1..=layout.n() {
            if layout.alpha_pair(i, j) == p {
                return vec![(layout.u_pos(i, j), half.clone()), (layout.v_pos(i, j), -&half)];
            }
        }
    }
    unreachable!("alpha position {p} out of range")
}

/// `T_n` with `T_n·E_n = I`: row of `x_i` is `g` over the reference triplet,
/// row of `x_ix_j` is `(u_ij - v_ij)/2`. Columns span `w` only.
pub fn build_t(n: usize) -> Result<DenseMatrix> {
    let layout = Layout::new(n)?;
    let mut m = DenseMatrix::zeros(layout.alpha_len(), 2 * layout.n1());
    for p in 1..=layout.alpha_len() {
        for (c, v) in t_row(&layout, p) {
            m.set(p - 1, c, v);
        }
    }
    Ok(m)
}

/// `L` with `x = L·φ(x)` on a triplet: the `x1, x2, x3` rows of `T_3`.
pub fn build_l3() -> DenseMatrix {
    let t = build_t(3).expect("n = 3 is valid");
    DenseMatrix::from_rows([0, 3, 5].iter().map(|&r| t.row(r).to_vec()).collect()).expect("rectangular")
}

/// `S_3` with `α(x) = S_3·(x̃ ⊗ x̃)`, `x̃ = (1, x1, x2, x3)`.
pub fn build_s3() -> DenseMatrix {
    let half = Rational::new(1, 2);
    let layout = Layout::new(3).expect("n = 3 is valid");
    let mut m = DenseMatrix::zeros(6, 16);
    for i in 1..=3 {
        let row = layout.alpha_var(i) - 1;
        m.set(row, i, half.clone());
        m.set(row, 4 * i, half.clone());
        for j in i + 1..=3 {
            let row = layout.alpha_pair(i, j) - 1;
            m.set(row, 4 * i + j, half.clone());
            m.set(row, 4 * j + i, half.clone());
        }
    }
    m
}

/// `c` with `f(x) = cᵀα(x)`: `b_i` on `x_i`, `2Q_ij` on `x_ix_j`.
pub fn objective_vector(inst: &UbqpInstance) -> Vec<Rational> {
    let n = inst.n();
    let two = Rational::from_integer(2);
    let mut c = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        c.push(inst.b()[i].clone());
        for j in i + 1..n {
            c.push(&two * &inst.q()[i][j]);
        }
    }
    c
}

/// `c̃ = T_nᵀ·c`, the cost on `w`.
pub fn transformed_objective(inst: &UbqpInstance) -> Vec<Rational> {
    let layout = Layout::new(inst.n()).expect("instances have n >= 3");
    let c = objective_vector(inst);
    let mut out = vec![Rational::zero(); 2 * layout.n1()];
    for (p, cp) in c.iter().enumerate() {
        if cp.is_zero() {
            continue;
        }
        for (col, t) in t_row(&layout, p + 1) {
            out[col] += &(cp * &t);
        }
    }
    out
}

/// Convexity blocks: `A11` (6N × 8N), `A12` (6N × 2N1), `A31` (N × 8N).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexityBlocks {
    pub a11: SparseCoeffList,
    pub a12: SparseCoeffList,
    pub a31: SparseCoeffList,
}

pub fn build_convexity(layout: &Layout) -> ConvexityBlocks {
    let nt = layout.big_n();
    let n1 = layout.n1();
    let b = basic_block_b();
    let mut a11 = SparseCoeffList::new(6 * nt, 8 * nt);
    let mut a12 = SparseCoeffList::new(6 * nt, 2 * n1);
    let mut a31 = SparseCoeffList::new(nt, 8 * nt);
    let minus_one = Rational::from_integer(-1);
    for (idx, (i, j, k)) in layout.triplets().enumerate() {
        let r0 = 6 * idx;
        let c0 = 8 * idx;
        for br in 0..6 {
            for bc in 0..8 {
                let v = b.get(br, bc);
                if !v.is_zero() {
                    a11.push(r0 + br, c0 + bc, v.clone());
                }
            }
        }
        for (off, (p, q)) in [(i, j), (i, k), (j, k)].into_iter().enumerate() {
            a12.push(r0 + off, layout.u_pos(p, q), minus_one.clone());
            a12.push(r0 + 3 + off, layout.v_pos(p, q), minus_one.clone());
        }
        for l in 0..8 {
            a31.push(idx, c0 + l, Rational::one());
        }
    }
    ConvexityBlocks { a11, a12, a31 }
}

/// Pairs `(j, k)`, `j < k`, drawn from `{1..n} \ {i}`, in lexicographic order.
fn pairs_without(n: usize, i: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n)
        .filter(move |&j| j != i)
        .flat_map(move |j| (j + 1..=n).filter(move |&k| k != i).map(move |k| (j, k)))
}

/// `A22 = (M, M)`: one row `2(g_{i,j1,k1} - g_{i,j,k}) = 0` per variable `i`
/// and pair `(j, k)` other than the reference pair `(j1, k1)`.
pub fn build_consistency(layout: &Layout) -> SparseCoeffList {
    let n1 = layout.n1();
    let mut a22 = SparseCoeffList::new(layout.n2(), 2 * n1);
    let mut row = 0;
    for i in 1..=layout.n() {
        let (j1, k1) = layout.reference_pair(i);
        for (j, k) in pairs_without(layout.n(), i) {
            if (j, k) == (j1, k1) {
                continue;
            }
            let mut coeffs: BTreeMap<usize, i64> = BTreeMap::new();
            *coeffs.entry(layout.u_pos(i, j1)).or_default() += 1;
            *coeffs.entry(layout.u_pos(i, k1)).or_default() += 1;
            *coeffs.entry(layout.u_pos(j1, k1)).or_default() -= 1;
            *coeffs.entry(layout.u_pos(i, j)).or_default() -= 1;
            *coeffs.entry(layout.u_pos(i, k)).or_default() -= 1;
            *coeffs.entry(layout.u_pos(j, k)).or_default() += 1;
            for (pos, v) in coeffs {
                if v != 0 {
                    a22.push(row, pos, Rational::from_integer(v));
                    a22.push(row, n1 + pos, Rational::from_integer(v));
                }
            }
            row += 1;
        }
    }
    debug_assert_eq!(row, layout.n2());
    a22.canonicalize();
    a22
}

/// The full equality system of the reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssembledLp {
    pub a: SparseCoeffList,
    pub rhs: Vec<Rational>,
    pub cost: Vec<Rational>,
    pub layout: Layout,
}

pub fn assemble(inst: &UbqpInstance) -> AssembledLp {
    let layout = Layout::new(inst.n()).expect("instances have n >= 3");
    let nt = layout.big_n();
    let lam = 8 * nt;
    let conv = build_convexity(&layout);
    let a22 = build_consistency(&layout);
    let mut a = SparseCoeffList::new(layout.rows(), layout.cols());
    a.place(&conv.a11, 0, 0);
    a.place(&conv.a12, 0, lam);
    a.place(&a22, 6 * nt, lam);
    a.place(&conv.a31, 6 * nt + layout.n2(), 0);
    a.canonicalize();
    let mut rhs = vec![Rational::zero(); layout.rows()];
    for r in rhs.iter_mut().skip(6 * nt + layout.n2()) {
        *r = Rational::one();
    }
    let mut cost = vec![Rational::zero(); lam];
    cost.extend(transformed_objective(inst));
    AssembledLp { a, rhs, cost, layout }
}

impl AssembledLp {
    pub fn problem(&self) -> LpProblem {
        LpProblem {
            a: self.a.clone(),
            rhs: self.rhs.clone(),
            cost: self.cost.clone(),
        }
    }

    /// The `w` part of a full variable vector.
    pub fn w_part<'a, S>(&self, point: &'a [S]) -> &'a [S] {
        &point[8 * self.layout.big_n()..]
    }

    pub fn var_names(&self) -> Vec<String> {
        var_names(&self.layout)
    }
}

/// Names `lam[r][l]`, `u[i][j]`, `v[i][j]` of the LP columns, 1-based.
pub fn var_names(layout: &Layout) -> Vec<String> {
    let mut names = Vec::with_capacity(layout.cols());
    for r in 1..=layout.big_n() {
        for l in 1..=8 {
            names.push(format!("lam[{r}][{l}]"));
        }
    }
    for band in ["u", "v"] {
        for (i, j) in layout.pairs() {
            names.push(format!("{band}[{i}][{j}]"));
        }
    }
    names
}

/// The feasible point attached to a binary `x`: each `λ^(i,j,k)` selects the
/// vertex `(x_i, x_j, x_k)` and `w = φ(x)`.
pub fn embed_binary(layout: &Layout, x: &[u8]) -> Result<Vec<Rational>> {
    if x.len() != layout.n() {
        return Err(Error::Dimension(format!("x has {} entries, n = {}", x.len(), layout.n())));
    }
    if let Some(p) = x.iter().position(|&v| v > 1) {
        return Err(Error::Domain(format!("x[{}] = {} is not binary", p + 1, x[p])));
    }
    let mut point = vec![Rational::zero(); layout.cols()];
    for (idx, (i, j, k)) in layout.triplets().enumerate() {
        let l = 4 * x[i - 1] as usize + 2 * x[j - 1] as usize + x[k - 1] as usize;
        point[8 * idx + l] = Rational::one();
    }
    let xs: Vec<Rational> = x.iter().map(|&b| Rational::from_integer(b as i64)).collect();
    let w = crate::lift::phi(&xs)?.to_w();
    let off = 8 * layout.big_n();
    point[off..].clone_from_slice(&w);
    Ok(point)
}

/// LP exchange format. Entries and names are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, Rational)>,
    pub rhs: Vec<Rational>,
    pub cost: Vec<Rational>,
    #[serde(default)]
    pub var_names: Vec<String>,
}

impl LpFile {
    pub fn from_assembled(lp: &AssembledLp) -> Self {
        let mut file = Self::from_problem(&lp.problem());
        file.var_names = lp.var_names();
        file
    }

    pub fn from_problem(p: &LpProblem) -> Self {
        LpFile {
            rows: p.a.rows,
            cols: p.a.cols,
            entries: p.a.entries.iter().map(|(r, c, v)| (r + 1, c + 1, v.clone())).collect(),
            rhs: p.rhs.clone(),
            cost: p.cost.clone(),
            var_names: Vec::new(),
        }
    }

    pub fn to_problem(&self) -> Result<LpProblem> {
        let mut a = SparseCoeffList::new(self.rows, self.cols);
        for (r, c, v) in &self.entries {
            if *r == 0 || *c == 0 || *r > self.rows || *c > self.cols {
                return Err(Error::Index(format!("entry ({r}, {c}) outside 1..={} x 1..={}", self.rows, self.cols)));
            }
            a.push(r - 1, c - 1, v.clone());
        }
        a.canonicalize();
        let p = LpProblem {
            a,
            rhs: self.rhs.clone(),
            cost: self.cost.clone(),
        };
        p.check_dims()?;
        Ok(p)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string(self)?;
        text.push('\n');
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}
