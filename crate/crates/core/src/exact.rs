//! Exact numbers for knife-edge decisions.
//!
//! Membership of a hypergeometric parameter in {0, -1, -2, ...} and
//! collisions between resonance positions are exact integer phenomena, so
//! the built-in spectra carry rationals and quadratic surds end to end.

use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::traits::{One, Signed, ToPrimitive, Zero};
use num::BigRational;

pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rational_int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn to_f64(r: &Rational) -> f64 {
    // Ratio<BigInt>::to_f64 is correctly rounded for huge operands too.
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Square root of a non-negative rational when it is itself rational.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer();
    let d = q.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(Rational::new(rn, rd))
    } else {
        None
    }
}

pub fn is_nonpositive_integer(r: &Rational) -> bool {
    r.is_integer() && !r.is_positive()
}

/// Parses `"p/q"`, an integer, or a plain decimal literal such as `"-0.25"`
/// into an exact rational. Scientific notation is rejected.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return None;
    }
    if t.contains('/') {
        let (p, q) = t.split_once('/')?;
        let p = BigInt::from_str(p.trim()).ok()?;
        let q = BigInt::from_str(q.trim()).ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    let (neg, body) = match t.as_bytes()[0] {
        b'-' => (true, &t[1..]),
        b'+' => (false, &t[1..]),
        _ => (false, t),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
    let denom = num::pow(BigInt::from(10), frac_part.len());
    let r = Rational::new(numer, denom);
    Some(if neg { -r } else { r })
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A number `rat + sign(irr_sq) * sqrt(|irr_sq|)` with rational `rat`,
/// `irr_sq`, where `|irr_sq|` is never the square of a rational (it is zero
/// when the number is rational).
///
/// The derived ordering is structural, not numeric; it exists so surds can
/// key ordered maps. Equality is exact numeric equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Surd {
    rat: Rational,
    irr_sq: Rational,
}

impl Surd {
    pub fn from_rational(rat: Rational) -> Self {
        Surd {
            rat,
            irr_sq: Rational::zero(),
        }
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(rational_int(v))
    }

    /// `sqrt(q)` for `q >= 0`.
    pub fn sqrt(q: &Rational) -> Option<Self> {
        if q.is_negative() {
            return None;
        }
        Some(match rational_sqrt(q) {
            Some(r) => Self::from_rational(r),
            None => Surd {
                rat: Rational::zero(),
                irr_sq: q.clone(),
            },
        })
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rat
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.irr_sq.is_zero().then_some(&self.rat)
    }

    pub fn is_rational(&self) -> bool {
        self.irr_sq.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.rat.is_integer()
    }

    pub fn is_nonpositive_integer(&self) -> bool {
        self.is_rational() && is_nonpositive_integer(&self.rat)
    }

    pub fn to_f64(&self) -> f64 {
        let irr = if self.irr_sq.is_zero() {
            0.0
        } else {
            let m = to_f64(&self.irr_sq.abs()).sqrt();
            if self.irr_sq.is_negative() {
                -m
            } else {
                m
            }
        };
        to_f64(&self.rat) + irr
    }

    pub fn add_rational(&self, r: &Rational) -> Self {
        Surd {
            rat: &self.rat + r,
            irr_sq: self.irr_sq.clone(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let irr_sq = if k.is_negative() {
            -(&self.irr_sq * k * k)
        } else {
            &self.irr_sq * k * k
        };
        Surd {
            rat: &self.rat * k,
            irr_sq,
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// Sum when it stays in a single quadratic field, `None` otherwise.
    pub fn checked_add(&self, other: &Surd) -> Option<Surd> {
        let rat = &self.rat + &other.rat;
        if other.irr_sq.is_zero() {
            return Some(Surd {
                rat,
                irr_sq: self.irr_sq.clone(),
            });
        }
        if self.irr_sq.is_zero() {
            return Some(Surd {
                rat,
                irr_sq: other.irr_sq.clone(),
            });
        }
        // other's irrational part = t * self's, with t rational, iff the
        // ratio of squared magnitudes is a rational square.
        let t = rational_sqrt(&(other.irr_sq.abs() / self.irr_sq.abs()))?;
        let t = if self.irr_sq.signum() == other.irr_sq.signum() {
            t
        } else {
            -t
        };
        let factor = Rational::one() + t;
        let mut out = Surd {
            rat,
            irr_sq: self.irr_sq.clone(),
        }
        .scale_irrational(&factor);
        if out.irr_sq.is_zero() {
            out.irr_sq = Rational::zero();
        }
        Some(out)
    }

    pub fn checked_sub(&self, other: &Surd) -> Option<Surd> {
        self.checked_add(&other.neg())
    }

    fn scale_irrational(mut self, k: &Rational) -> Self {
        self.irr_sq = if k.is_negative() {
            -(&self.irr_sq * k * k)
        } else {
            &self.irr_sq * k * k
        };
        self
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.irr_sq.is_zero() {
            return f.write_str(&format_rational(&self.rat));
        }
        let sign = if self.irr_sq.is_negative() { "-" } else { "+" };
        let root = format!("sqrt({})", format_rational(&self.irr_sq.abs()));
        if self.rat.is_zero() {
            if sign == "-" {
                write!(f, "-{root}")
            } else {
                f.write_str(&root)
            }
        } else {
            write!(f, "{}{}{}", format_rational(&self.rat), sign, root)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_forms() {
        assert_eq!(parse_rational("-3/2"), Some(rational(-3, 2)));
        assert_eq!(parse_rational("4"), Some(rational_int(4)));
        assert_eq!(parse_rational("-0.25"), Some(rational(-1, 4)));
        assert_eq!(parse_rational(".5"), Some(rational(1, 2)));
        assert_eq!(parse_rational("1e-3"), None);
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }

    #[test]
    fn sqrt_detects_rational_squares() {
        assert_eq!(rational_sqrt(&rational(9, 4)), Some(rational(3, 2)));
        assert_eq!(rational_sqrt(&rational(13, 4)), None);
        assert!(Surd::sqrt(&rational(49, 9)).unwrap().is_rational());
        assert!(!Surd::sqrt(&rational(2, 1)).unwrap().is_rational());
    }

    #[test]
    fn surd_arithmetic_is_exact() {
        let s = Surd::sqrt(&rational(13, 4)).unwrap();
        let a = s.neg();
        let b = a.checked_add(&s).unwrap();
        assert!(b.is_integer() && b.rat.is_zero());
        let c = a.scale(&rational_int(2));
        assert!((c.to_f64() + 13f64.sqrt()).abs() < 1e-15);
        assert!(!c.is_nonpositive_integer());
        // sqrt(8) == 2 sqrt(2)
        let r8 = Surd::sqrt(&rational_int(8)).unwrap();
        let r2 = Surd::sqrt(&rational_int(2)).unwrap().scale(&rational_int(2));
        assert_eq!(r8, r2);
        assert!(Surd::sqrt(&rational_int(2))
            .unwrap()
            .checked_add(&Surd::sqrt(&rational_int(3)).unwrap())
            .is_none());
    }

    #[test]
    fn display_is_readable() {
        let s = Surd::sqrt(&rational(13, 4))
            .unwrap()
            .add_rational(&rational(1, 2))
            .neg();
        assert_eq!(s.to_string(), "-1/2-sqrt(13/4)");
        assert_eq!(Surd::from_rational(rational(-3, 2)).to_string(), "-3/2");
    }
}
