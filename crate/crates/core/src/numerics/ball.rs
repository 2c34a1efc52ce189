//! Fixed-point midpoint-radius arithmetic.
//!
//! A ball at precision `p` stores integers `mid` and `rad` and represents the
//! interval `[(mid − rad)·2^−p, (mid + rad)·2^−p]`. Every operation rounds the
//! midpoint and pushes the rounding error into the radius, so the exact
//! result of the corresponding real operation stays inside.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    mid: BigInt,
    rad: BigUint,
    prec: u32,
}

fn ceil_div(n: &BigUint, d: &BigUint) -> BigUint {
    let (q, r) = n.div_rem(d);
    if r.is_zero() {
        q
    } else {
        q + 1u32
    }
}

fn ceil_shr(n: &BigUint, bits: u32) -> BigUint {
    let q = n >> bits;
    if (&q << bits) == *n {
        q
    } else {
        q + 1u32
    }
}

impl Ball {
    pub fn zero(prec: u32) -> Self {
        Ball {
            mid: BigInt::zero(),
            rad: BigUint::zero(),
            prec,
        }
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        Ball {
            mid: BigInt::from(n) << prec,
            rad: BigUint::zero(),
            prec,
        }
    }

    /// Nearest-below fixed-point value of `q`, exact when `q` is dyadic enough.
    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        let scaled = q.numer() << prec;
        let (mid, rem) = scaled.div_mod_floor(q.denom());
        let rad = if rem.is_zero() {
            BigUint::zero()
        } else {
            BigUint::one()
        };
        Ball { mid, rad, prec }
    }

    /// Exact decimal literal such as `-1.25e-3` or `0.125`.
    pub fn from_decimal_str(s: &str, prec: u32) -> Option<Self> {
        Some(Ball::from_rational(&parse_decimal(s)?, prec))
    }

    pub fn from_parts(mid: BigInt, rad: BigUint, prec: u32) -> Self {
        Ball { mid, rad, prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn mid_raw(&self) -> &BigInt {
        &self.mid
    }

    pub fn rad_raw(&self) -> &BigUint {
        &self.rad
    }

    /// Widens the radius by `ulps` units in the last place.
    pub fn add_error_ulps(mut self, ulps: &BigUint) -> Self {
        self.rad += ulps;
        self
    }

    /// Widens the radius by at least `bound ≥ 0`.
    pub fn add_error(self, bound: &Rational) -> Self {
        let scaled = (bound.abs() * Rational::from_integer(BigInt::one() << self.prec)).ceil();
        let ulps = scaled.to_integer().to_biguint().unwrap_or_default();
        self.add_error_ulps(&ulps)
    }

    /// Same value at another precision; lowering rounds and pads the radius.
    pub fn with_prec(&self, prec: u32) -> Self {
        if prec >= self.prec {
            let shift = prec - self.prec;
            Ball {
                mid: &self.mid << shift,
                rad: &self.rad << shift,
                prec,
            }
        } else {
            let shift = self.prec - prec;
            Ball {
                mid: &self.mid >> shift,
                rad: ceil_shr(&self.rad, shift) + 1u32,
                prec,
            }
        }
    }

    fn aligned(a: &Ball, b: &Ball) -> (Ball, Ball) {
        let p = a.prec.min(b.prec);
        (a.with_prec(p), b.with_prec(p))
    }

    /// Division by a nonzero integer.
    pub fn div_int(&self, d: i64) -> Self {
        assert!(d != 0, "division by zero");
        let (q, r) = self.mid.div_mod_floor(&BigInt::from(d));
        let dabs = BigUint::from(d.unsigned_abs());
        let mut rad = ceil_div(&self.rad, &dabs);
        if !r.is_zero() {
            rad += 1u32;
        }
        Ball {
            mid: q,
            rad,
            prec: self.prec,
        }
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        let num = q.numer();
        let den = q.denom();
        let (mid, r) = (&self.mid * num).div_mod_floor(den);
        let den_u = den.magnitude();
        let mut rad = ceil_div(&(&self.rad * num.magnitude()), den_u);
        if !r.is_zero() {
            rad += 1u32;
        }
        Ball {
            mid,
            rad,
            prec: self.prec,
        }
    }

    pub fn mul_int(&self, n: i64) -> Self {
        Ball {
            mid: &self.mid * n,
            rad: &self.rad * n.unsigned_abs(),
            prec: self.prec,
        }
    }

    /// Upper bound `|x|` over the ball, in ulps.
    fn abs_upper(&self) -> BigUint {
        self.mid.magnitude() + &self.rad
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.magnitude() <= &self.rad
    }

    /// True if every point of the ball satisfies `|x| < bound`.
    pub fn abs_below(&self, bound: &Rational) -> bool {
        let lhs = BigInt::from(self.abs_upper()) * bound.denom();
        let rhs = bound.numer() << self.prec;
        lhs < rhs
    }

    /// `|mid| ≤ rad + slack`.
    pub fn mid_within(&self, slack: &Rational) -> bool {
        let extra = (slack.abs() * Rational::from_integer(BigInt::one() << self.prec)).floor();
        let extra = extra.to_integer().to_biguint().unwrap_or_default();
        self.mid.magnitude() <= &(&self.rad + extra)
    }

    /// True if the exact rational `q` lies in the ball.
    pub fn contains_rational(&self, q: &Rational) -> bool {
        let scaled = Rational::from_integer(self.mid.clone())
            - q * Rational::from_integer(BigInt::one() << self.prec);
        scaled.abs() <= Rational::from_integer(BigInt::from(self.rad.clone()))
    }

    /// True if the two balls intersect.
    pub fn overlaps(&self, other: &Ball) -> bool {
        let (a, b) = Ball::aligned(self, other);
        let gap = (&a.mid - &b.mid).magnitude().clone();
        gap <= &a.rad + &b.rad
    }

    /// True if `other` lies entirely inside `self`.
    pub fn contains(&self, other: &Ball) -> bool {
        let (a, b) = Ball::aligned(self, other);
        let gap = (&a.mid - &b.mid).magnitude().clone();
        gap + &b.rad <= a.rad
    }

    /// Smallest `e` with `rad · 2^−prec ≤ 2^e`.
    pub fn rad_log2(&self) -> i64 {
        if self.rad.is_zero() {
            return -(self.prec as i64);
        }
        let bits = self.rad.bits() as i64;
        let pow = BigUint::one() << (bits - 1) as u64;
        let e = if pow == self.rad { bits - 1 } else { bits };
        e - self.prec as i64
    }

    pub fn mid_f64(&self) -> f64 {
        scaled_f64(&self.mid, self.prec)
    }

    pub fn rad_f64(&self) -> f64 {
        scaled_f64(&BigInt::from(self.rad.clone()), self.prec)
    }

    /// Midpoint as exact rational.
    pub fn mid_rational(&self) -> Rational {
        Rational::new(self.mid.clone(), BigInt::one() << self.prec)
    }

    /// Midpoint rounded to `digits` decimals after the point.
    pub fn mid_decimal(&self, digits: usize) -> String {
        let ten = BigInt::from(10u32).pow(digits as u32);
        let scaled = &self.mid * &ten;
        let half = BigInt::one() << self.prec.saturating_sub(1);
        let rounded = if self.prec == 0 {
            scaled
        } else {
            (scaled + half) >> self.prec
        };
        format_fixed(&rounded, digits)
    }

    /// The exact midpoint as a terminating decimal (`mid · 5^p / 10^p`).
    pub fn mid_exact_decimal(&self) -> String {
        let scaled = &self.mid * BigInt::from(5u32).pow(self.prec);
        format_fixed(&scaled, self.prec as usize)
    }
}

fn scaled_f64(n: &BigInt, prec: u32) -> f64 {
    let bits = n.bits();
    if bits > 1000 {
        let shift = bits - 900;
        let top = (n >> shift).to_f64().unwrap_or(f64::NAN);
        return top * 2f64.powi(shift as i32 - prec as i32);
    }
    let v = n.to_f64().unwrap_or(f64::NAN);
    // split the scaling so that 2^-prec does not underflow on its own
    let mut out = v;
    let mut p = prec as i32;
    while p > 0 {
        let step = p.min(1000);
        out *= 2f64.powi(-step);
        p -= step;
    }
    out
}

fn format_fixed(scaled: &BigInt, digits: usize) -> String {
    let neg = scaled.sign() == Sign::Minus;
    let mut s = scaled.magnitude().to_string();
    if s.len() <= digits {
        s = "0".repeat(digits + 1 - s.len()) + &s;
    }
    let split = s.len() - digits;
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&s[..split]);
    if digits > 0 {
        out.push('.');
        out.push_str(&s[split..]);
    }
    out
}

/// Parses `[-]int[.frac][e[-]exp]` exactly.
pub fn parse_decimal(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let mut value = if scale >= 0 {
        Rational::from_integer(digits * ten.pow(scale as u32))
    } else {
        Rational::new(digits, ten.pow((-scale) as u32))
    };
    if neg {
        value = -value;
    }
    Some(value)
}

impl Add for &Ball {
    type Output = Ball;

    fn add(self, rhs: &Ball) -> Ball {
        if self.prec == rhs.prec {
            return Ball {
                mid: &self.mid + &rhs.mid,
                rad: &self.rad + &rhs.rad,
                prec: self.prec,
            };
        }
        let (a, b) = Ball::aligned(self, rhs);
        &a + &b
    }
}

impl Sub for &Ball {
    type Output = Ball;

    fn sub(self, rhs: &Ball) -> Ball {
        self + &(-rhs)
    }
}

impl Neg for &Ball {
    type Output = Ball;

    fn neg(self) -> Ball {
        Ball {
            mid: -&self.mid,
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }
}

impl Mul for &Ball {
    type Output = Ball;

    fn mul(self, rhs: &Ball) -> Ball {
        if self.prec != rhs.prec {
            let (a, b) = Ball::aligned(self, rhs);
            return &a * &b;
        }
        let p = self.prec;
        let product = &self.mid * &rhs.mid;
        let mid = &product >> p;
        let exact = (&mid << p) == product;
        let cross = self.mid.magnitude() * &rhs.rad
            + rhs.mid.magnitude() * &self.rad
            + &self.rad * &rhs.rad;
        let mut rad = ceil_shr(&cross, p);
        if !exact {
            rad += 1u32;
        }
        Ball { mid, rad, prec: p }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Ball {
            type Output = Ball;

            fn $method(self, rhs: Ball) -> Ball {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Ball {
    type Output = Ball;

    fn neg(self) -> Ball {
        -&self
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        write!(f, "{} +/- {:.3e}", self.mid_decimal(digits), self.rad_f64())
    }
}
