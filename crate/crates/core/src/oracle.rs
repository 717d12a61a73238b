//! Exhaustive minimization over `{0,1}^n` by Gray-code enumeration.
//!
//! Flipping `x_k` changes `f` by `±h_k` with `h_k = b_k + 2Σ_j Q_kj x_j`, and
//! a flip of `x_k` moves every `h_j` by `±2Q_jk`, so each step is `O(n)`.
//! Values are scaled to a common denominator and accumulated in `i128` when
//! they fit, in exact rationals otherwise.

use std::ops::{AddAssign, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::UbqpInstance;
use crate::scalar::Rational;

/// Default refusal threshold on `n`.
pub const ORACLE_CAP: usize = 26;

/// Minimum value and every minimizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteForce {
    pub n: usize,
    pub value: Rational,
    /// Minimizers as bit masks, `x_1` in the most significant of `n` bits,
    /// so ascending order is lexicographic order of the vectors.
    masks: Vec<u64>,
}

impl BruteForce {
    pub fn argmins(&self) -> Vec<Vec<u8>> {
        self.masks.iter().map(|&m| mask_to_x(m, self.n)).collect()
    }

    pub fn argmin_count(&self) -> usize {
        self.masks.len()
    }

    pub fn is_argmin(&self, x: &[u8]) -> bool {
        x.len() == self.n && self.masks.binary_search(&x_to_mask(x)).is_ok()
    }
}

fn mask_to_x(m: u64, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((m >> (n - 1 - i)) & 1) as u8).collect()
}

fn x_to_mask(x: &[u8]) -> u64 {
    x.iter().fold(0u64, |acc, &b| (acc << 1) | (b & 1) as u64)
}

pub fn brute_force_min(inst: &UbqpInstance) -> Result<BruteForce> {
    brute_force_min_with_cap(inst, ORACLE_CAP)
}

pub fn brute_force_min_with_cap(inst: &UbqpInstance, cap: usize) -> Result<BruteForce> {
    let n = inst.n();
    if n > cap || n > 63 {
        return Err(Error::OracleCap { n, cap: cap.min(63) });
    }
    let prefix = if n >= 16 { 4 } else { 0 };
    brute_force_split(inst, prefix)
}

/// Splits the search over the `2^prefix` settings of `x_1..x_prefix` and
/// merges the parts; the result does not depend on `prefix`.
pub fn brute_force_split(inst: &UbqpInstance, prefix: usize) -> Result<BruteForce> {
    let n = inst.n();
    if prefix > n {
        return Err(Error::Parameter(format!("prefix {prefix} exceeds n = {n}")));
    }
    let parts: Vec<BruteForce> = match Scaled::new(inst) {
        Some(s) => (0..1u64 << prefix)
            .into_par_iter()
            .map(|p| search(&s.q, &s.b, n, prefix, p).unscale(&s.denom, n))
            .collect(),
        None => {
            let q = inst.q().to_vec();
            let b = inst.b().to_vec();
            (0..1u64 << prefix)
                .into_par_iter()
                .map(|p| {
                    let part = search(&q, &b, n, prefix, p);
                    BruteForce {
                        n,
                        value: part.value,
                        masks: part.masks,
                    }
                })
                .collect()
        }
    };
    let value = parts.iter().map(|p| p.value.clone()).min().expect("at least one part");
    let mut masks: Vec<u64> = parts.into_iter().filter(|p| p.value == value).flat_map(|p| p.masks).collect();
    masks.sort_unstable();
    Ok(BruteForce { n, value, masks })
}

/// Instance data multiplied by the common denominator, when it fits `i128`
/// with room for `n²` accumulated terms.
struct Scaled {
    q: Vec<Vec<i128>>,
    b: Vec<i128>,
    denom: BigInt,
}

impl Scaled {
    fn new(inst: &UbqpInstance) -> Option<Self> {
        let n = inst.n();
        let all = inst.q().iter().flatten().chain(inst.b());
        let denom = all.clone().fold(BigInt::one(), |acc, v| acc.lcm(&v.denom()));
        let limit = i128::MAX / (4 * (n * n + n) as i128);
        let scale = |v: &Rational| -> Option<i128> {
            let s = v.numer() * (&denom / v.denom());
            s.to_i128().filter(|x| x.abs() <= limit)
        };
        let q = inst
            .q()
            .iter()
            .map(|row| row.iter().map(scale).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        let b = inst.b().iter().map(scale).collect::<Option<Vec<_>>>()?;
        Some(Scaled { q, b, denom })
    }
}

trait Acc: Clone + Ord + for<'a> AddAssign<&'a Self> + for<'a> SubAssign<&'a Self> {
    fn zero() -> Self;
}

impl Acc for i128 {
    fn zero() -> Self {
        0
    }
}

impl Acc for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
}

struct Part<V> {
    value: V,
    masks: Vec<u64>,
}

impl Part<i128> {
    fn unscale(self, denom: &BigInt, n: usize) -> BruteForce {
        let value = Rational::from_bigints(BigInt::from(self.value), denom.clone()).expect("nonzero denominator");
        BruteForce {
            n,
            value,
            masks: self.masks,
        }
    }
}

/// Enumerates the points whose first `prefix` coordinates spell `p`.
fn search<V: Acc>(q: &[Vec<V>], b: &[V], n: usize, prefix: usize, p: u64) -> Part<V> {
    let mut x = vec![0u8; n];
    for i in 0..prefix {
        x[i] = ((p >> (prefix - 1 - i)) & 1) as u8;
    }
    // h_k = b_k + 2 Σ_j Q_kj x_j and f at the starting point
    let mut h: Vec<V> = b.to_vec();
    let mut f = V::zero();
    for k in 0..n {
        for j in 0..n {
            if x[j] == 1 {
                h[k] += &q[k][j];
                h[k] += &q[k][j];
            }
        }
    }
    for k in 0..n {
        if x[k] == 1 {
            f += &b[k];
            for j in 0..n {
                if x[j] == 1 {
                    f += &q[k][j];
                }
            }
        }
    }
    let mut best = f.clone();
    let mut masks = vec![x_to_mask(&x)];
    let free = n - prefix;
    for step in 1u64..(1u64 << free) {
        let k = prefix + free - 1 - step.trailing_zeros() as usize;
        if x[k] == 0 {
            f += &h[k];
            x[k] = 1;
            for j in 0..n {
                h[j] += &q[j][k];
                h[j] += &q[j][k];
            }
        } else {
            f -= &h[k];
            x[k] = 0;
            for j in 0..n {
                h[j] -= &q[j][k];
                h[j] -= &q[j][k];
            }
        }
        match f.cmp(&best) {
            std::cmp::Ordering::Less => {
                best = f.clone();
                masks.clear();
                masks.push(x_to_mask(&x));
            }
            std::cmp::Ordering::Equal => masks.push(x_to_mask(&x)),
            std::cmp::Ordering::Greater => {}
        }
    }
    Part { value: best, masks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{example_lp3, example_n4, ValueDomain};

    #[test]
    fn worked_examples() {
        let r = brute_force_min(&example_lp3()).unwrap();
        assert_eq!(r.value, Rational::from_integer(-110));
        assert_eq!(r.argmins(), vec![vec![1, 1, 1]]);
        let r = brute_force_min(&example_n4()).unwrap();
        assert_eq!(r.value, Rational::from_integer(-170));
        assert_eq!(r.argmins(), vec![vec![1, 1, 0, 1]]);
        assert!(r.is_argmin(&[1, 1, 0, 1]));
        assert!(!r.is_argmin(&[1, 1, 1, 1]));
    }

    #[test]
    fn zero_instance_has_every_point() {
        let r = brute_force_min(&UbqpInstance::zero(5).unwrap()).unwrap();
        assert_eq!(r.value, Rational::zero());
        assert_eq!(r.argmin_count(), 32);
        let all = r.argmins();
        assert_eq!(all[0], vec![0; 5]);
        assert_eq!(all[1], vec![0, 0, 0, 0, 1]);
        assert_eq!(all[31], vec![1; 5]);
    }

    #[test]
    fn cap_is_enforced() {
        let inst = UbqpInstance::zero(5).unwrap();
        assert!(matches!(brute_force_min_with_cap(&inst, 4), Err(Error::OracleCap { n: 5, cap: 4 })));
    }

    #[test]
    fn rational_fallback_matches() {
        // denominators whose lcm overflows i128 force the rational path
        let n = 4;
        let primes: [i64; 8] = [1_000_000_007, 998_244_353, 1_000_000_009, 999_999_937, 2_147_483_647, 1_073_741_789, 4_294_967_291, 3];
        let mut q = vec![vec![Rational::zero(); n]; n];
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                let v = Rational::new(1 - 2 * (k as i64 % 2), primes[k % 8]);
                q[i][j] = v.clone();
                q[j][i] = v;
                k += 1;
            }
        }
        let b = vec![Rational::new(-1, primes[6]), Rational::new(1, primes[7]), Rational::zero(), Rational::new(-1, 5)];
        let inst = UbqpInstance::new(q, b, ValueDomain::Real).unwrap();
        assert!(Scaled::new(&inst).is_none());
        let r = brute_force_min(&inst).unwrap();
        let mut best = None::<Rational>;
        for m in 0..16u64 {
            let v = inst.evaluate(&mask_to_x(m, n)).unwrap();
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        }
        assert_eq!(Some(r.value), best);
    }

    #[test]
    fn split_search_agrees() {
        let inst = crate::instance::random_instance(
            9,
            &Rational::from_integer(-3),
            &Rational::from_integer(3),
            ValueDomain::Integer,
            11,
        )
        .unwrap();
        let whole = brute_force_split(&inst, 0).unwrap();
        for p in 1..=9 {
            assert_eq!(brute_force_split(&inst, p).unwrap(), whole);
        }
    }
}
