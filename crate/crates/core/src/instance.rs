//! UBQP instances: `f(x) = xᵀQx + bᵀx` over `x ∈ {0,1}^n`.

use std::fmt;
use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Denominator used for "real" entries.
pub const REAL_DENOM_LOG2: u32 = 20;

/// Whether entries are integers or dyadic approximations of reals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ValueDomain {
    Integer,
    Real,
}

impl fmt::Display for ValueDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValueDomain::Integer => "integer",
            ValueDomain::Real => "real",
        })
    }
}

/// A validated instance. `Q` is stored as the full symmetric matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UbqpInstance {
    n: usize,
    q: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    domain: ValueDomain,
}

impl UbqpInstance {
    pub fn new(q: Vec<Vec<Rational>>, b: Vec<Rational>, domain: ValueDomain) -> Result<Self> {
        let n = b.len();
        if n < 3 {
            return Err(Error::Parameter(format!("n = {n}, the reduction needs n >= 3")));
        }
        if q.len() != n {
            return Err(Error::Dimension(format!("Q has {} rows, b has {n} entries", q.len())));
        }
        for (i, row) in q.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension(format!("Q row {} has {} entries, expected {n}", i + 1, row.len())));
            }
        }
        for i in 0..n {
            if !q[i][i].is_zero() {
                return Err(Error::Validation(format!("nonzero diagonal: Q[{0}][{0}] = {1}", i + 1, q[i][i])));
            }
            for j in i + 1..n {
                if q[i][j] != q[j][i] {
                    return Err(Error::Validation(format!(
                        "asymmetric Q: Q[{}][{}] = {} but Q[{}][{}] = {}",
                        i + 1,
                        j + 1,
                        q[i][j],
                        j + 1,
                        i + 1,
                        q[j][i]
                    )));
                }
            }
        }
        if domain == ValueDomain::Integer {
            for i in 0..n {
                for j in 0..n {
                    if !q[i][j].is_integer() {
                        return Err(Error::Validation(format!("Q[{}][{}] = {} in an integer instance", i + 1, j + 1, q[i][j])));
                    }
                }
                if !b[i].is_integer() {
                    return Err(Error::Validation(format!("b[{}] = {} in an integer instance", i + 1, b[i])));
                }
            }
        }
        Ok(UbqpInstance { n, q, b, domain })
    }

    /// Builds an instance from integer data (convenience for fixed examples).
    pub fn from_integers(q: &[Vec<i64>], b: &[i64]) -> Result<Self> {
        let q = q.iter().map(|row| row.iter().map(|&v| Rational::from_integer(v)).collect()).collect();
        let b = b.iter().map(|&v| Rational::from_integer(v)).collect();
        Self::new(q, b, ValueDomain::Integer)
    }

    /// The all-zero instance.
    pub fn zero(n: usize) -> Result<Self> {
        Self::new(vec![vec![Rational::zero(); n]; n], vec![Rational::zero(); n], ValueDomain::Integer)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Full matrix, 0-based.
    pub fn q(&self) -> &[Vec<Rational>] {
        &self.q
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    pub fn domain(&self) -> ValueDomain {
        self.domain
    }

    /// `xᵀQx + bᵀx`.
    pub fn evaluate(&self, x: &[u8]) -> Result<Rational> {
        if x.len() != self.n {
            return Err(Error::Dimension(format!("x has {} entries, instance has n = {}", x.len(), self.n)));
        }
        if let Some(p) = x.iter().position(|&v| v > 1) {
            return Err(Error::Domain(format!("x[{}] = {} is not binary", p + 1, x[p])));
        }
        let mut total = Rational::zero();
        for i in 0..self.n {
            if x[i] == 0 {
                continue;
            }
            total += &self.b[i];
            for j in 0..self.n {
                if x[j] == 1 {
                    total += &self.q[i][j];
                }
            }
        }
        Ok(total)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn to_json(&self) -> String {
        let file = InstanceFile {
            n: self.n,
            q: self.q.iter().map(|row| row.iter().map(|v| Value::String(v.to_string())).collect()).collect(),
            b: self.b.iter().map(|v| Value::String(v.to_string())).collect(),
            domain: self.domain,
        };
        let mut s = serde_json::to_string_pretty(&file).expect("instance serializes");
        s.push('\n');
        s
    }

    /// Parses instance JSON. `Q` may be the full matrix or its strict upper
    /// triangle (row `i` holding `Q[i][i+1..n]`).
    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        let n = file.n;
        if file.b.len() != n {
            return Err(Error::Dimension(format!("b has {} entries, n = {n}", file.b.len())));
        }
        let b = file
            .b
            .iter()
            .enumerate()
            .map(|(i, v)| parse_entry(v, &format!("b[{}]", i + 1)))
            .collect::<Result<Vec<_>>>()?;
        let full = file.q.len() == n && file.q.iter().all(|row| row.len() == n);
        let upper = (file.q.len() == n || file.q.len() + 1 == n)
            && file.q.iter().enumerate().all(|(i, row)| row.len() == n - 1 - i);
        let mut q = vec![vec![Rational::zero(); n]; n];
        if full {
            for (i, row) in file.q.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    q[i][j] = parse_entry(v, &format!("Q[{}][{}]", i + 1, j + 1))?;
                }
            }
        } else if upper {
            for (i, row) in file.q.iter().enumerate() {
                for (off, v) in row.iter().enumerate() {
                    let j = i + 1 + off;
                    let val = parse_entry(v, &format!("Q[{}][{}]", i + 1, j + 1))?;
                    q[j][i] = val.clone();
                    q[i][j] = val;
                }
            }
        } else {
            return Err(Error::Dimension(format!(
                "Q is neither a full {n}x{n} matrix nor a strict upper triangle"
            )));
        }
        Self::new(q, b, file.domain)
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    n: usize,
    #[serde(rename = "Q")]
    q: Vec<Vec<Value>>,
    b: Vec<Value>,
    domain: ValueDomain,
}

fn parse_entry(v: &Value, name: &str) -> Result<Rational> {
    let malformed = |reason: String| Error::Validation(format!("{name}: {reason}"));
    match v {
        Value::String(s) => s.parse::<Rational>().map_err(|e| malformed(e.to_string())),
        Value::Number(num) if num.is_i64() || num.is_u64() => num
            .to_string()
            .parse::<Rational>()
            .map_err(|e| malformed(e.to_string())),
        other => Err(malformed(format!("expected a rational string, found {other}"))),
    }
}

/// Draws a random instance with off-diagonal `Q` entries and `b` entries
/// uniform on `[lo, hi]`: integers in the integer domain, multiples of
/// `2^-20` in the real domain. The upper triangle is drawn row by row, then `b`.
pub fn random_instance(
    n: usize,
    lo: &Rational,
    hi: &Rational,
    domain: ValueDomain,
    seed: u64,
) -> Result<UbqpInstance> {
    if n < 3 {
        return Err(Error::Parameter(format!("n = {n}, the reduction needs n >= 3")));
    }
    if lo > hi {
        return Err(Error::Parameter(format!("empty range [{lo}, {hi}]")));
    }
    let scale = match domain {
        ValueDomain::Integer => Rational::one(),
        ValueDomain::Real => Rational::from_integer(1 << REAL_DENOM_LOG2),
    };
    let to_i64 = |v: BigInt| {
        v.to_i64()
            .ok_or_else(|| Error::Parameter(format!("range bound {v} is too large")))
    };
    let k_lo = to_i64((lo * &scale).ceil())?;
    let k_hi = to_i64((hi * &scale).floor())?;
    if k_lo > k_hi {
        return Err(Error::Parameter(format!("[{lo}, {hi}] holds no {domain} value")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || &Rational::from_integer(rng.gen_range(k_lo..=k_hi)) / &scale;
    let mut q = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = draw();
            q[j][i] = v.clone();
            q[i][j] = v;
        }
    }
    let b = (0..n).map(|_| draw()).collect();
    UbqpInstance::new(q, b, domain)
}

/// Instance of the three-variable worked example (optimum -110 at `(1,1,1)`).
pub fn example_lp3() -> UbqpInstance {
    UbqpInstance::from_integers(&[vec![0, -10, -20], vec![-10, 0, -10], vec![-20, -10, 0]], &[-2, -2, -26])
        .expect("valid example")
}

/// Instance of the four-variable worked example (optimum -170 at `(1,1,0,1)`).
pub fn example_n4() -> UbqpInstance {
    UbqpInstance::from_integers(
        &[
            vec![0, -30, 6, -22],
            vec![-30, 0, 15, -2],
            vec![6, 15, 0, -5],
            vec![-22, -2, -5, 0],
        ],
        &[-8, -22, 0, -32],
    )
    .expect("valid example")
}
