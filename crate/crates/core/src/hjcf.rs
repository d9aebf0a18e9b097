//! Negative (Hirzebruch–Jung) continued fractions
//! `[a1, ..., as] = a1 - 1/(a2 - 1/(... - 1/as))`, the Riemenschneider
//! point rule, and inverses modulo `b`.
//!
//! Everything here is exact; numerators and coefficients are `BigUint`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HjcfError {
    ZeroDenominator,
    NotReduced,
    NotGreaterThanOne,
    EmptySequence,
    /// A coefficient below 2 at the given position.
    NotCanonical(usize),
    NotCoprime,
    ModulusTooSmall,
    Parse(String),
}

impl fmt::Display for HjcfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HjcfError::ZeroDenominator => f.write_str("denominator is zero"),
            HjcfError::NotReduced => f.write_str("fraction is not in lowest terms"),
            HjcfError::NotGreaterThanOne => f.write_str("fraction must be greater than 1"),
            HjcfError::EmptySequence => f.write_str("coefficient sequence is empty"),
            HjcfError::NotCanonical(i) => {
                write!(f, "coefficient at position {} is smaller than 2", i)
            }
            HjcfError::NotCoprime => f.write_str("arguments are not coprime"),
            HjcfError::ModulusTooSmall => f.write_str("modulus must be at least 2"),
            HjcfError::Parse(s) => write!(f, "cannot parse `{}`", s),
        }
    }
}

/// A positive fraction in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PositiveRational {
    num: BigUint,
    den: BigUint,
}

impl PositiveRational {
    /// Rejects zero, zero denominators and fractions not in lowest terms.
    pub fn new(num: impl Into<BigUint>, den: impl Into<BigUint>) -> Result<Self, HjcfError> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() {
            return Err(HjcfError::ZeroDenominator);
        }
        if num.is_zero() || !num.gcd(&den).is_one() {
            return Err(HjcfError::NotReduced);
        }
        Ok(PositiveRational { num, den })
    }

    /// Like [`PositiveRational::new`] but divides out the common factor.
    pub fn reduced(num: impl Into<BigUint>, den: impl Into<BigUint>) -> Result<Self, HjcfError> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() {
            return Err(HjcfError::ZeroDenominator);
        }
        if num.is_zero() {
            return Err(HjcfError::NotReduced);
        }
        let g = num.gcd(&den);
        Ok(PositiveRational { num: num / &g, den: den / g })
    }

    pub fn numer(&self) -> &BigUint {
        &self.num
    }

    pub fn denom(&self) -> &BigUint {
        &self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }
}

impl fmt::Display for PositiveRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for PositiveRational {
    type Err = HjcfError;

    /// Accepts `p/q` or a bare integer `p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HjcfError::Parse(String::from(s));
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n = BigUint::from_str(n).map_err(|_| bad())?;
        let d = BigUint::from_str(d).map_err(|_| bad())?;
        PositiveRational::new(n, d)
    }
}

/// A canonical coefficient sequence: non-empty, every entry at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoeffSeq(Vec<BigUint>);

impl CoeffSeq {
    pub fn new(coefficients: Vec<BigUint>) -> Result<Self, HjcfError> {
        if coefficients.is_empty() {
            return Err(HjcfError::EmptySequence);
        }
        let two = BigUint::from(2u32);
        if let Some(i) = coefficients.iter().position(|a| *a < two) {
            return Err(HjcfError::NotCanonical(i));
        }
        Ok(CoeffSeq(coefficients))
    }

    pub fn from_u64s(coefficients: &[u64]) -> Result<Self, HjcfError> {
        CoeffSeq::new(coefficients.iter().map(|&a| BigUint::from(a)).collect())
    }

    pub fn as_slice(&self) -> &[BigUint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn to_u64_vec(&self) -> Option<Vec<u64>> {
        self.0.iter().map(|a| a.to_u64()).collect()
    }

    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|a| a.to_i64()).collect()
    }

    pub fn reversed(&self) -> CoeffSeq {
        let mut v = self.0.clone();
        v.reverse();
        CoeffSeq(v)
    }

    /// Sum of the coefficients.
    pub fn total(&self) -> BigUint {
        self.0.iter().sum()
    }
}

impl fmt::Display for CoeffSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", a)?;
        }
        f.write_str("]")
    }
}

impl FromStr for CoeffSeq {
    type Err = HjcfError;

    /// Comma separated, optionally bracketed: `2,2,2` or `[4,2]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('[').trim_end_matches(']');
        let mut v = Vec::new();
        for part in t.split(',') {
            let a = BigUint::from_str(part.trim()).map_err(|_| HjcfError::Parse(String::from(s)))?;
            v.push(a);
        }
        CoeffSeq::new(v)
    }
}

/// Canonical expansion of `x > 1`: `a1 = ceil(x)`, then recurse on
/// `1 / (a1 - x)`.
pub fn expand_neg_cf(x: &PositiveRational) -> Result<CoeffSeq, HjcfError> {
    if x.num <= x.den {
        return Err(HjcfError::NotGreaterThanOne);
    }
    let (mut p, mut q) = (x.num.clone(), x.den.clone());
    let mut out = Vec::new();
    loop {
        let a = Integer::div_ceil(&p, &q);
        let r = &a * &q - &p;
        out.push(a);
        if r.is_zero() {
            break;
        }
        p = core::mem::replace(&mut q, r);
    }
    Ok(CoeffSeq(out))
}

pub fn eval_neg_cf(s: &CoeffSeq) -> PositiveRational {
    let mut it = s.0.iter().rev();
    let mut num = it.next().expect("canonical sequences are non-empty").clone();
    let mut den = BigUint::one();
    for a in it {
        // a - den/num = (a*num - den)/num; stays reduced and > 1.
        let next = a * &num - &den;
        den = num;
        num = next;
    }
    PositiveRational { num, den }
}

/// The Riemenschneider dual: if `s` evaluates to `a/b` the result evaluates
/// to `a/(a-b)`.
///
/// Row `i` of the point diagram holds `a_i - 1` points and starts in the
/// column where row `i-1` ended; the dual coefficients are the column
/// counts plus one.
pub fn dual_point_rule(s: &CoeffSeq) -> CoeffSeq {
    let two = BigUint::from(2u32);
    let mut out = Vec::new();
    // points in the rightmost (still open) column
    let mut open = BigUint::one();
    for (i, a) in s.0.iter().enumerate() {
        let points = (a - 1u32)
            .to_usize()
            .expect("coefficient too large to materialise the dual sequence");
        // the first point of every row after the first lands in the open column
        if i > 0 {
            open += 1u32;
        }
        let fresh_columns = points - 1;
        if fresh_columns > 0 {
            out.push(&open + 1u32);
            out.extend(core::iter::repeat_n(two.clone(), fresh_columns - 1));
            open = BigUint::one();
        }
    }
    out.push(open + 1u32);
    CoeffSeq(out)
}

/// The unique `a*` with `0 < a* < b` and `a * a* = 1 (mod b)`.
pub fn star_inverse(a: &BigInt, b: &BigInt) -> Result<BigInt, HjcfError> {
    if *b < BigInt::from(2) {
        return Err(HjcfError::ModulusTooSmall);
    }
    let eg = a.extended_gcd(b);
    if !eg.gcd.abs().is_one() {
        return Err(HjcfError::NotCoprime);
    }
    let inv = eg.x * eg.gcd.signum();
    Ok(inv.mod_floor(b))
}

pub fn star_inverse_i64(a: i64, b: i64) -> Result<i64, HjcfError> {
    let r = star_inverse(&BigInt::from(a), &BigInt::from(b))?;
    Ok(r.to_i64().expect("result is below the modulus"))
}
