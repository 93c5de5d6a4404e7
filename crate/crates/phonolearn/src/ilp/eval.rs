//! Clause evaluation functions, computed as exact rationals.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalFn {
    /// (P+1)/(P+N+2).
    Laplace,
    /// P-N.
    Coverage,
}

impl EvalFn {
    pub fn score(self, p: usize, n: usize) -> Ratio<i64> {
        let p = p as i64;
        let n = n as i64;
        match self {
            EvalFn::Laplace => Ratio::new(p + 1, p + n + 2),
            EvalFn::Coverage => Ratio::from_integer(p - n),
        }
    }

    /// Upper bound on the score of any clause covering at most `p`
    /// positives: both functions are maximized at N = 0 and are monotone
    /// in P, so refinements (whose coverage only shrinks) cannot beat it.
    pub fn optimistic_bound(self, p: usize) -> Ratio<i64> {
        self.score(p, 0)
    }
}

impl FromStr for EvalFn {
    type Err = String;

    fn from_str(s: &str) -> Result<EvalFn, String> {
        match s {
            "laplace" => Ok(EvalFn::Laplace),
            "coverage" => Ok(EvalFn::Coverage),
            other => Err(format!("unknown evaluation function '{other}' (expected laplace or coverage)")),
        }
    }
}

impl fmt::Display for EvalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalFn::Laplace => "laplace",
            EvalFn::Coverage => "coverage",
        })
    }
}

/// Parses "0.85", "17/20", or "1" into an exact rational.
pub fn parse_fraction(s: &str) -> Result<Ratio<i64>, String> {
    let s = s.trim();
    let bad = || format!("'{s}' is not a fraction (expected e.g. 0.85 or 17/20)");
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den <= 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac_val: i64 = frac.parse().map_err(|_| bad())?;
        let scale = 10i64
            .checked_pow(frac.len() as u32)
            .ok_or_else(|| format!("'{s}' has too many decimal places"))?;
        let num = int.checked_mul(scale).and_then(|v| v.checked_add(frac_val)).ok_or_else(bad)?;
        return Ok(Ratio::new(num, scale));
    }
    let int: i64 = s.parse().map_err(|_| bad())?;
    Ok(Ratio::from_integer(int))
}
