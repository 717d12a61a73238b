//! Index arithmetic for the lifted LP.
//!
//! Public indices are 1-based: variables `1..=n`, pairs `ι(i, j) ∈ 1..=N1`,
//! triplet ranks `1..=N`, `λ` slots `1..=8`. The `*_col` helpers are the one
//! place where these are turned into 0-based storage offsets.
//!
//! Column order of the full LP is `λ^(1)…λ^(N)` (eight per triplet), then the
//! `u` band, then the `v` band, each band ordered by `ι`.

use crate::error::{Error, Result};

/// `(N, N1, N2) = (C(n,3), C(n,2), n·(C(n-1,2) - 1))`.
pub fn dims(n: usize) -> Result<(usize, usize, usize)> {
    if n < 3 {
        return Err(Error::Parameter(format!("n = {n}, the reduction needs n >= 3")));
    }
    let c2 = |m: usize| m * (m - 1) / 2;
    let c3 = n * (n - 1) * (n - 2) / 6;
    Ok((c3, c2(n), n * (c2(n - 1) - 1)))
}

/// Dimensions and index maps for a fixed `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    n: usize,
    n_trip: usize,
    n_pair: usize,
    n_cons: usize,
}

impl Layout {
    pub fn new(n: usize) -> Result<Self> {
        let (n_trip, n_pair, n_cons) = dims(n)?;
        Ok(Layout {
            n,
            n_trip,
            n_pair,
            n_cons,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of triplets `N`.
    pub fn big_n(&self) -> usize {
        self.n_trip
    }

    /// Number of pairs `N1`.
    pub fn n1(&self) -> usize {
        self.n_pair
    }

    /// Number of consistency rows `N2`.
    pub fn n2(&self) -> usize {
        self.n_cons
    }

    /// Row count of the assembled system, `7N + N2`.
    pub fn rows(&self) -> usize {
        7 * self.n_trip + self.n_cons
    }

    /// Column count of the assembled system, `8N + 2N1`.
    pub fn cols(&self) -> usize {
        8 * self.n_trip + 2 * self.n_pair
    }

    /// Length of `α(x)`, `n(n+1)/2`.
    pub fn alpha_len(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    fn check_var(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            return Err(Error::Index(format!("variable {i} outside 1..={}", self.n)));
        }
        Ok(())
    }

    /// Position of the pair `{i, j}` inside `u` (and `v`), 1-based.
    pub fn iota(&self, i: usize, j: usize) -> Result<usize> {
        self.check_var(i)?;
        self.check_var(j)?;
        if i == j {
            return Err(Error::Index(format!("iota({i}, {j}) needs distinct indices")));
        }
        Ok(self.iota_unchecked(i, j))
    }

    pub(crate) fn iota_unchecked(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        (i - 1) * (2 * self.n - i) / 2 + (j - i)
    }

    /// Inverse of [`Layout::iota`]: the pair `(i, j)`, `i < j`, at position `p`.
    pub fn pair_at(&self, p: usize) -> Result<(usize, usize)> {
        if p == 0 || p > self.n_pair {
            return Err(Error::Index(format!("pair position {p} outside 1..={}", self.n_pair)));
        }
        let mut start = 0;
        for i in 1..self.n {
            let len = self.n - i;
            if p <= start + len {
                return Ok((i, i + p - start));
            }
            start += len;
        }
        unreachable!("pair position checked above")
    }

    /// Lexicographic rank of the triplet `i < j < k`, 1-based.
    pub fn triplet_rank(&self, i: usize, j: usize, k: usize) -> Result<usize> {
        self.check_var(i)?;
        self.check_var(j)?;
        self.check_var(k)?;
        if !(i < j && j < k) {
            return Err(Error::Index(format!("triplet ({i}, {j}, {k}) is not increasing")));
        }
        Ok(self.triplet_rank_unchecked(i, j, k))
    }

    pub(crate) fn triplet_rank_unchecked(&self, i: usize, j: usize, k: usize) -> usize {
        let n = self.n;
        let c2 = |m: usize| m * m.saturating_sub(1) / 2;
        // triplets whose first entry is below i
        let before_i: usize = (1..i).map(|a| c2(n - a)).sum();
        // triplets (i, b, _) with b below j
        let before_j: usize = (i + 1..j).map(|b| n - b).sum();
        before_i + before_j + (k - j)
    }

    /// Inverse of [`Layout::triplet_rank`].
    pub fn triplet_at(&self, r: usize) -> Result<(usize, usize, usize)> {
        if r == 0 || r > self.n_trip {
            return Err(Error::Index(format!("triplet rank {r} outside 1..={}", self.n_trip)));
        }
        let n = self.n;
        let mut rest = r;
        for i in 1..=n - 2 {
            let block = (n - i) * (n - i - 1) / 2;
            if rest > block {
                rest -= block;
                continue;
            }
            for j in i + 1..n {
                let row = n - j;
                if rest > row {
                    rest -= row;
                    continue;
                }
                return Ok((i, j, j + rest));
            }
        }
        unreachable!("rank checked above")
    }

    /// All triplets `i < j < k` in lexicographic order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, usize)> {
        let n = self.n;
        (1..=n).flat_map(move |i| (i + 1..=n).flat_map(move |j| (j + 1..=n).map(move |k| (i, j, k))))
    }

    /// All pairs `i < j` in `ι` order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.n;
        (1..=n).flat_map(move |i| (i + 1..=n).map(move |j| (i, j)))
    }

    /// 0-based column of `λ^(r)_l` in the full variable vector.
    pub fn lambda_col(&self, r: usize, l: usize) -> usize {
        8 * (r - 1) + (l - 1)
    }

    /// 0-based column of `u_ij` in the full variable vector.
    pub fn u_col(&self, i: usize, j: usize) -> usize {
        8 * self.n_trip + self.iota_unchecked(i, j) - 1
    }

    /// 0-based column of `v_ij` in the full variable vector.
    pub fn v_col(&self, i: usize, j: usize) -> usize {
        8 * self.n_trip + self.n_pair + self.iota_unchecked(i, j) - 1
    }

    /// 0-based offset of `u_ij` inside `w = (u, v)`.
    pub fn u_pos(&self, i: usize, j: usize) -> usize {
        self.iota_unchecked(i, j) - 1
    }

    /// 0-based offset of `v_ij` inside `w = (u, v)`.
    pub fn v_pos(&self, i: usize, j: usize) -> usize {
        self.n_pair + self.iota_unchecked(i, j) - 1
    }

    /// 1-based position of `x_i` in `α(x)`.
    pub fn alpha_var(&self, i: usize) -> usize {
        let n = self.n;
        (1..i).map(|a| n - a + 1).sum::<usize>() + 1
    }

    /// 1-based position of `x_i x_j` in `α(x)`.
    pub fn alpha_pair(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.alpha_var(i) + (j - i)
    }

    /// Reference pair `(j, k)` used to express `x_i` through `g_{i,j,k}`.
    pub fn reference_pair(&self, i: usize) -> (usize, usize) {
        match i {
            1 => (2, 3),
            2 => (1, 3),
            _ => (1, 2),
        }
    }
}
