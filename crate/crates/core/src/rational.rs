//! Exact rationals and their textual form (`p/q`, `-3`, `7`).

use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p`, `-p`, `p/q` or `-p/q`.
pub fn parse_rational(text: &str) -> Result<Q> {
    let s = text.trim();
    let bad = |msg: &str| Error::parse("rational", 0, s, msg);
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let digits_ok = |t: &str| {
        let t = t.strip_prefix('-').unwrap_or(t);
        !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits_ok(num) || !digits_ok(den) || den.starts_with('-') {
        return Err(bad("expected p or p/q with decimal integers"));
    }
    let n: BigInt = num.parse().map_err(|_| bad("bad numerator"))?;
    let d: BigInt = den.parse().map_err(|_| bad("bad denominator"))?;
    if d.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Q::new(n, d))
}

pub fn format_rational(q: &Q) -> String {
    q.to_string()
}

/// Largest integer not exceeding `q`.
pub fn floor(q: &Q) -> BigInt {
    q.floor().to_integer()
}

/// Dyadic enclosure `lo <= sqrt(square) <= hi` with `hi - lo <= 2^-bits`.
pub fn sqrt_enclosure(square: &Q, bits: u32) -> (Q, Q) {
    assert!(!square.is_negative(), "square root of a negative rational");
    let scale = BigInt::one() << (2 * bits as usize);
    let scaled = floor(&(square * Q::from_integer(scale)));
    let root = scaled.sqrt();
    let den = BigInt::one() << bits as usize;
    let lo = Q::new(root.clone(), den.clone());
    let hi = if &lo * &lo == *square {
        lo.clone()
    } else {
        Q::new(root + 1, den)
    };
    (lo, hi)
}

/// Exact rational square root when one exists.
pub fn exact_sqrt(q: &Q) -> Option<Q> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Q::new(n, d))
}

/// Rounded decimal rendering used in human-readable output only.
pub fn approx(q: &Q) -> f64 {
    use num::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}
