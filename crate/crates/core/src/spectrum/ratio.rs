use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, ClockError, Result};

/// A reduced non-negative fraction `C/B` with `B ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalRatio {
    numer: BigUint,
    denom: BigUint,
}

impl RationalRatio {
    /// Rejects fractions that are not already in lowest terms.
    pub fn new(numer: impl Into<BigUint>, denom: impl Into<BigUint>) -> Result<Self> {
        let (numer, denom) = (numer.into(), denom.into());
        if denom.is_zero() {
            return Err(invalid("ratio denominator must be at least 1"));
        }
        if !numer.gcd(&denom).is_one() {
            return Err(invalid(format!("ratio {numer}/{denom} is not reduced")));
        }
        Ok(Self { numer, denom })
    }

    /// Reduces `numer/denom` to lowest terms first.
    pub fn reduced(numer: impl Into<BigUint>, denom: impl Into<BigUint>) -> Result<Self> {
        let (numer, denom) = (numer.into(), denom.into());
        if denom.is_zero() {
            return Err(invalid("ratio denominator must be at least 1"));
        }
        let g = numer.gcd(&denom);
        if g.is_zero() {
            return Self::new(numer, denom);
        }
        Self::new(&numer / &g, &denom / &g)
    }

    pub fn integer(n: u64) -> Self {
        Self {
            numer: BigUint::from(n),
            denom: BigUint::one(),
        }
    }

    pub fn numer(&self) -> &BigUint {
        &self.numer
    }

    pub fn denom(&self) -> &BigUint {
        &self.denom
    }

    pub fn to_big_rational(&self) -> BigRational {
        BigRational::new_raw(
            BigInt::from_biguint(Sign::Plus, self.numer.clone()),
            BigInt::from_biguint(Sign::Plus, self.denom.clone()),
        )
    }

    pub fn to_f64(&self) -> f64 {
        self.to_big_rational().to_f64().unwrap_or(f64::NAN)
    }

    fn from_big_rational(q: &BigRational) -> Self {
        // BigRational is kept reduced with a positive denominator.
        Self {
            numer: q.numer().magnitude().clone(),
            denom: q.denom().magnitude().clone(),
        }
    }
}

impl PartialOrd for RationalRatio {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RationalRatio {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.numer * &other.denom).cmp(&(&other.numer * &self.denom))
    }
}

impl fmt::Display for RationalRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer, self.denom)
    }
}

impl FromStr for RationalRatio {
    type Err = ClockError;

    /// Accepts `C/B` (must be reduced) or a bare integer `C`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<BigUint>()
                .map_err(|_| ClockError::Parse(format!("bad ratio component {t:?} in {s:?}")))
        };
        match s.split_once('/') {
            Some((c, b)) => Self::new(parse(c)?, parse(b)?),
            None => Self::new(parse(s)?, BigUint::one()),
        }
    }
}

/// Exact rational value of a finite float.
pub(crate) fn exact_rational(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Smallest-denominator fraction `C/B` with `|x − C/B| ≤ eps`, for `x ≥ 0`.
///
/// Candidates are the continued-fraction convergents of `x` and the
/// intermediate fractions between them, visited in order of increasing
/// denominator. Every fraction that is strictly closer to `x` than all
/// fractions of smaller denominator appears in that sequence, so the first
/// candidate inside the tolerance has the minimal denominator overall.
pub(crate) fn simplest_within(x: &BigRational, eps: &BigRational) -> BigRational {
    debug_assert!(!x.is_negative());
    let zero = BigInt::zero();
    let one = BigInt::one();
    // h_{k-2}/k_{k-2} and h_{k-1}/k_{k-1}, seeded with 0/1 and 1/0.
    let (mut h2, mut k2) = (zero.clone(), one.clone());
    let (mut h1, mut k1) = (one.clone(), zero.clone());

    let within = |h: &BigInt, k: &BigInt| -> bool {
        let q = BigRational::new(h.clone(), k.clone());
        (&q - x).abs() <= *eps
    };
    if within(&h2, &k2) {
        return BigRational::zero();
    }

    let mut rem = x.clone();
    loop {
        let a = rem.floor().to_integer();
        // Intermediate fractions (h2 + j h1)/(k2 + j k1), j = 1..=a, approach
        // x monotonically; binary-search the first one inside the tolerance.
        let at = |j: &BigInt| (&h2 + j * &h1, &k2 + j * &k1);
        if a >= one {
            let (h, k) = at(&a);
            if within(&h, &k) {
                let (mut lo, mut hi) = (one.clone(), a.clone());
                while lo < hi {
                    let mid: BigInt = (&lo + &hi) >> 1;
                    let (h, k) = at(&mid);
                    if within(&h, &k) {
                        hi = mid;
                    } else {
                        lo = mid + &one;
                    }
                }
                let (h, k) = at(&lo);
                return BigRational::new(h, k);
            }
        }
        let (h, k) = at(&a);
        h2 = std::mem::replace(&mut h1, h);
        k2 = std::mem::replace(&mut k1, k);
        let frac = &rem - BigRational::from_integer(a);
        if frac.is_zero() {
            // x is exactly h1/k1; unreachable since that lies within any eps.
            return BigRational::new(h1, k1);
        }
        rem = frac.recip();
    }
}

/// Continued-fraction rationalization of `E_n / E_1` for `n ≥ 2`.
///
/// Returns the ratios and the largest absolute deviation `|E_n/E_1 − C_n/B_n|`.
pub fn rationalize(levels: &[f64], epsilon: f64) -> Result<(Vec<RationalRatio>, f64)> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(invalid(format!(
            "epsilon must be finite and positive, got {epsilon}"
        )));
    }
    super::check_levels(levels)?;
    let eps = exact_rational(epsilon).ok_or_else(|| invalid("epsilon is not finite"))?;
    let e1 = levels[1];
    let mut ratios = Vec::with_capacity(levels.len().saturating_sub(2));
    let mut worst = 0.0f64;
    for &en in &levels[2..] {
        let x = exact_rational(en / e1).ok_or_else(|| invalid("level ratio is not finite"))?;
        let q = simplest_within(&x, &eps);
        let err = (&q - &x).abs().to_f64().unwrap_or(f64::INFINITY);
        worst = worst.max(err);
        ratios.push(RationalRatio::from_big_rational(&q));
    }
    Ok((ratios, worst))
}
