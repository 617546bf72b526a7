//! Exact rational scalars and the small helpers the rest of the crate leans on.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The scalar type used everywhere: an arbitrary precision rational.
pub type Q = BigRational;

/// Builds `num/den`.
///
/// # Panics
///
/// Panics if `den == 0`.
pub fn q(num: i64, den: i64) -> Q {
    assert!(den != 0, "zero denominator");
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Integer `n` as a rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Largest integer `<= x`, as a rational.
pub fn floor(x: &Q) -> Q {
    Q::from_integer(x.numer().div_floor(x.denom()))
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Q) -> Q {
    x - floor(x)
}

/// Nearest integer, ties rounded up.
pub fn round_half_up(x: &Q) -> Q {
    floor(&(x + q(1, 2)))
}

/// Distance on R/Z between two lifts.
pub fn circle_dist(a: &Q, b: &Q) -> Q {
    let f = frac(&(a - b));
    let g = one() - &f;
    if f < g {
        f
    } else {
        g
    }
}

/// Representative of `x` in `[base, base + 1)`.
pub fn unroll(x: &Q, base: &Q) -> Q {
    x - floor(&(x - base))
}

/// `2^-k`.
pub fn pow2_neg(k: u32) -> Q {
    Q::new(BigInt::one(), BigInt::one() << k)
}

/// `2^k` as a rational.
pub fn pow2(k: u32) -> Q {
    Q::from_integer(BigInt::one() << k)
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

pub fn min(a: &Q, b: &Q) -> Q {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn max(a: &Q, b: &Q) -> Q {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn midpoint(a: &Q, b: &Q) -> Q {
    (a + b) / qi(2)
}

/// The grid `{k / 2^bits : 0 <= k <= 2^bits}` on `[0, 1]`.
pub fn dyadic_grid(bits: u32) -> Vec<Q> {
    let n = 1u64 << bits;
    let den = BigInt::from(n);
    (0..=n)
        .map(|k| Q::new(BigInt::from(k), den.clone()))
        .collect()
}

/// Parses `p/q`, `p`, or `2^-k`.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    if let Some(exp) = s.strip_prefix("2^-") {
        let k: u32 = exp
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent in `{s}`")))?;
        return Ok(pow2_neg(k));
    }
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in `{s}`")))?;
    let d: BigInt = d
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in `{s}`")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Q::new(n, d))
}

/// Renders `x` as `p/q` (or `p` for integers).
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Linear interpolation through `(x0, y0)` and `(x1, y1)` evaluated at `x`.
pub fn lerp(x0: &Q, y0: &Q, x1: &Q, y1: &Q, x: &Q) -> Q {
    if x == x0 {
        return y0.clone();
    }
    if x == x1 {
        return y1.clone();
    }
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}
