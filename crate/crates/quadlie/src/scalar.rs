//! Exact scalars: rationals, optionally extended to Q(sqrt(d)) for one
//! square-free integer d fixed per computation.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

pub type Rational = BigRational;

/// An exact field element: either a rational or `a + b*sqrt(d)` with `b != 0`.
///
/// All quadratic scalars appearing in one computation share the same
/// square-free `d`; arithmetic between two different extensions is a logic
/// error and panics (public entry points guard against it).
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(Rational),
    Quad { a: Rational, b: Rational, d: i64 },
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rat(Rational::from(BigInt::from(n)))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Scalar::Rat(rat(n, d))
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar::Rat(r)
    }

    /// Builds `a + b*sqrt(d)`, collapsing to a plain rational when `b = 0`.
    pub fn quadratic(a: Rational, b: Rational, d: i64) -> Self {
        if b.is_zero() {
            Scalar::Rat(a)
        } else {
            Scalar::Quad { a, b, d }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Quad { .. } => false,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_one())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rat(_))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Quad { .. } => None,
        }
    }

    /// The `d` of this scalar if it genuinely involves `sqrt(d)`.
    pub fn extension(&self) -> Option<i64> {
        match self {
            Scalar::Rat(_) => None,
            Scalar::Quad { d, .. } => Some(*d),
        }
    }

    fn parts(&self, d: i64) -> (Rational, Rational) {
        match self {
            Scalar::Rat(r) => (r.clone(), Rational::zero()),
            Scalar::Quad { a, b, d: dd } => {
                assert_eq!(*dd, d, "incompatible field extensions sqrt({dd}) vs sqrt({d})");
                (a.clone(), b.clone())
            }
        }
    }

    fn common_d(&self, other: &Scalar) -> Option<i64> {
        match (self.extension(), other.extension()) {
            (None, None) => None,
            (Some(d), None) | (None, Some(d)) => Some(d),
            (Some(d1), Some(d2)) => {
                assert_eq!(d1, d2, "incompatible field extensions sqrt({d1}) vs sqrt({d2})");
                Some(d1)
            }
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(r) => {
                if r.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(r.recip()))
                }
            }
            Scalar::Quad { a, b, d } => {
                // (a + b sqrt d)^-1 = (a - b sqrt d) / (a^2 - b^2 d)
                let denom = a * a - b * b * Rational::from(BigInt::from(*d));
                if denom.is_zero() {
                    return None; // impossible for square-free d != 0,1 unless a=b=0
                }
                Some(Scalar::quadratic(a / &denom, -(b / &denom), *d))
            }
        }
    }

    /// Multiplies by (-1)^k.
    pub fn times_sign(self, negative: bool) -> Scalar {
        if negative {
            -self
        } else {
            self
        }
    }

    /// Canonical document string: `p/q` or `p/q+r/s*sqrt(d)`.
    pub fn canonical_string(&self) -> String {
        match self {
            Scalar::Rat(r) => format!("{}/{}", r.numer(), r.denom()),
            Scalar::Quad { a, b, d } => {
                format!("{}/{}+{}/{}*sqrt({})", a.numer(), a.denom(), b.numer(), b.denom(), d)
            }
        }
    }

    /// Parses a canonical coefficient string; rejects non-reduced rationals.
    pub fn parse_canonical(s: &str, expected_d: Option<i64>) -> std::result::Result<Scalar, String> {
        fn parse_rat(s: &str) -> std::result::Result<Rational, String> {
            let (n, d) = s
                .split_once('/')
                .ok_or_else(|| format!("expected p/q rational, got `{s}`"))?;
            let num: BigInt = n.parse().map_err(|_| format!("bad integer `{n}`"))?;
            let den: BigInt = d.parse().map_err(|_| format!("bad integer `{d}`"))?;
            if den <= BigInt::zero() {
                return Err(format!("non-canonical rational `{s}`: denominator must be positive"));
            }
            if num.gcd(&den) != BigInt::one() {
                return Err(format!("non-canonical rational `{s}`: not reduced"));
            }
            Ok(Rational::new_raw(num, den))
        }
        if let Some(idx) = s.find("*sqrt(") {
            let close = s
                .strip_suffix(')')
                .ok_or_else(|| format!("malformed sqrt coefficient `{s}`"))?;
            let d_str = &close[idx + 6..];
            let d: i64 = d_str.parse().map_err(|_| format!("bad sqrt argument `{d_str}`"))?;
            match expected_d {
                Some(e) if e == d => {}
                Some(e) => return Err(format!("coefficient uses sqrt({d}) but field is Q_sqrt {e}")),
                None => return Err(format!("coefficient uses sqrt({d}) but field is Q")),
            }
            let head = &s[..idx];
            let plus = head
                .find('+')
                .ok_or_else(|| format!("malformed quadratic coefficient `{s}`"))?;
            let a = parse_rat(&head[..plus])?;
            let b = parse_rat(&head[plus + 1..])?;
            if b.is_zero() {
                return Err(format!("non-canonical quadratic `{s}`: zero sqrt part"));
            }
            Ok(Scalar::Quad { a, b, d })
        } else {
            Ok(Scalar::Rat(parse_rat(s)?))
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn rr(r: &Rational) -> String {
            if r.denom().is_one() {
                format!("{}", r.numer())
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        }
        match self {
            Scalar::Rat(r) => write!(f, "{}", rr(r)),
            Scalar::Quad { a, b, d } => {
                if a.is_zero() {
                    write!(f, "{}*sqrt({})", rr(b), d)
                } else if b.is_negative() {
                    write!(f, "{}-{}*sqrt({})", rr(a), rr(&-b.clone()), d)
                } else {
                    write!(f, "{}+{}*sqrt({})", rr(a), rr(b), d)
                }
            }
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt, $quad:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match self.common_d(rhs) {
                    None => match (self, rhs) {
                        (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x $op y),
                        _ => unreachable!(),
                    },
                    Some(d) => {
                        let (a1, b1) = self.parts(d);
                        let (a2, b2) = rhs.parts(d);
                        $quad(a1, b1, a2, b2, d)
                    }
                }
            }
        }
    };
}

fn scalar_quad_add(a1: Rational, b1: Rational, a2: Rational, b2: Rational, d: i64) -> Scalar {
    Scalar::quadratic(a1 + a2, b1 + b2, d)
}

fn scalar_quad_sub(a1: Rational, b1: Rational, a2: Rational, b2: Rational, d: i64) -> Scalar {
    Scalar::quadratic(a1 - a2, b1 - b2, d)
}

fn scalar_quad_mul(a1: Rational, b1: Rational, a2: Rational, b2: Rational, d: i64) -> Scalar {
    let dd = Rational::from(BigInt::from(d));
    Scalar::quadratic(&a1 * &a2 + &b1 * &b2 * dd, &a1 * &b2 + &b1 * &a2, d)
}

scalar_binop!(Add, add, +, scalar_quad_add);
scalar_binop!(Sub, sub, -, scalar_quad_sub);
scalar_binop!(Mul, mul, *, scalar_quad_mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Quad { a, b, d } => Scalar::Quad { a: -a, b: -b, d },
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        let inv = rhs.inv().expect("division by zero scalar");
        &self * &inv
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

/// Square-free decomposition r = d * s^2 of a nonzero rational.
///
/// Returns (d, s) with d a square-free integer carrying the sign of r.
pub fn squarefree_part(r: &Rational) -> Result<(i64, Rational)> {
    assert!(!r.is_zero());
    let n = r.numer() * r.denom();
    let negative = n.is_negative();
    let mut m = n.abs();
    let mut d = BigInt::one();
    let mut s_num = BigInt::one();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1_000_000u64);
    while &p * &p <= m && p <= limit {
        let mut e = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            if e % 2 == 1 {
                d *= &p;
            }
            s_num *= p.pow(e / 2);
        }
        p += 1;
    }
    if !m.is_one() {
        // Leftover is free of primes <= 10^6; it is either a prime, a prime
        // square, or (if huge) undecidable by trial division.
        let root = m.sqrt();
        if &root * &root == m {
            s_num *= root;
        } else if m < BigInt::from(10u64).pow(12) {
            d *= &m;
        } else {
            return Err(Error::Other(format!(
                "cannot compute square-free part: residual factor {m} too large"
            )));
        }
    }
    if negative {
        d = -d;
    }
    let d_small = d
        .to_i64()
        .ok_or_else(|| Error::Other(format!("square-free part {d} exceeds i64")))?;
    // r = d * (s_num/denom)^2 ; recover s as sqrt(r/d) = s_num/denom.
    let s = Rational::new(s_num, r.denom().clone());
    Ok((d_small, s))
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(Rational::zero());
    }
    let ns = r.numer().sqrt();
    let ds = r.denom().sqrt();
    if &ns * &ns == *r.numer() && &ds * &ds == *r.denom() {
        Some(Rational::new(ns, ds))
    } else {
        None
    }
}

/// The active scalar field of a computation: Q or Q(sqrt(d)).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct FieldCtx {
    d: Option<i64>,
}

impl FieldCtx {
    pub fn rational() -> Self {
        FieldCtx { d: None }
    }

    pub fn with_sqrt(d: i64) -> Result<Self> {
        if d == 0 || d == 1 {
            return Err(Error::Other(format!("sqrt({d}) is not a field extension")));
        }
        let (sf, _) = squarefree_part(&Rational::from(BigInt::from(d)))?;
        if sf != d {
            return Err(Error::Other(format!("{d} is not square-free (use {sf})")));
        }
        Ok(FieldCtx { d: Some(d) })
    }

    pub fn d(&self) -> Option<i64> {
        self.d
    }

    /// Square root within the active field only.
    pub fn sqrt(&self, r: &Rational) -> Result<Scalar> {
        if let Some(s) = rational_sqrt(r) {
            return Ok(Scalar::Rat(s));
        }
        let (need, s) = squarefree_part(r)?;
        match self.d {
            Some(d) if d == need => Ok(Scalar::quadratic(Rational::zero(), s, d)),
            Some(d) => Err(Error::IncompatibleExtension { active: d, needed: need }),
            None => Err(Error::FieldExtensionRequired { d: need }),
        }
    }

    /// Square root, activating Q(sqrt(d)) if no extension is active yet.
    pub fn sqrt_or_extend(&self, r: &Rational) -> Result<(Scalar, FieldCtx)> {
        match self.sqrt(r) {
            Ok(s) => Ok((s, *self)),
            Err(Error::FieldExtensionRequired { d }) => {
                let ctx = FieldCtx { d: Some(d) };
                Ok((ctx.sqrt(r)?, ctx))
            }
            Err(e) => Err(e),
        }
    }

    /// Extends the context to cover a scalar already built elsewhere.
    pub fn absorb(&self, s: &Scalar) -> Result<FieldCtx> {
        match (self.d, s.extension()) {
            (_, None) => Ok(*self),
            (None, Some(d)) => Ok(FieldCtx { d: Some(d) }),
            (Some(a), Some(b)) if a == b => Ok(*self),
            (Some(a), Some(b)) => Err(Error::IncompatibleExtension { active: a, needed: b }),
        }
    }
}

/// Field context inferred from a slice of scalars.
pub fn infer_field(scalars: impl IntoIterator<Item = Scalar>) -> Result<FieldCtx> {
    let mut ctx = FieldCtx::rational();
    for s in scalars {
        ctx = ctx.absorb(&s)?;
    }
    Ok(ctx)
}
