//! Scalars in `Q_p`.
//!
//! A [`Padic`] is either an exact rational number or a capped-relative
//! p-adic number `p^v * u + O(p^(v + r))` where `u` is a unit known modulo
//! `p^r`. Exact and capped values mix freely: an exact operand is converted
//! to capped form at the field precision only when it meets a capped one.
//! Exact zero stays exact zero, which keeps sparse matrices cheap.
//!
//! Capped arithmetic is sound: whenever a value is reported nonzero its
//! valuation is the true one. When every tracked digit cancels the result is
//! a *vanished* value, known only to lie in `p^a Z_p`. Anything that needs an
//! exact valuation of such a value fails with [`Error::PrecisionLoss`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 64;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut acc = 1u128 % m;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

/// Smallest primitive root modulo the prime `p`, searching upward from 2.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("every prime has a primitive root")
}

/// Valuation of an element: `+inf` encodes zero, the norm is `p^(-v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

impl serde::Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

/// What is known about a valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValuationBound {
    Exact(Valuation),
    AtLeast(i64),
}

/// Tri-state zero test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroState {
    Nonzero,
    Zero,
    /// All tracked digits vanished; the value lies in `p^abs Z_p`.
    Unknown {
        abs: i64,
    },
}

struct FieldInner {
    p: u64,
    precision: u32,
    p_big: BigUint,
    powers: Vec<BigUint>,
}

/// The field `Q_p` together with the working precision for capped values.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl Field {
    pub fn new(p: u64, precision: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::ConfigInvalid(format!("{p} is not prime")));
        }
        if p >= 1 << 31 {
            return Err(Error::ConfigInvalid(format!("prime {p} too large")));
        }
        if precision == 0 {
            return Err(Error::ConfigInvalid("precision must be at least 1".into()));
        }
        let p_big = BigUint::from(p);
        let mut powers = Vec::with_capacity(precision as usize + 1);
        powers.push(BigUint::one());
        for i in 0..precision as usize {
            let next = &powers[i] * &p_big;
            powers.push(next);
        }
        Ok(Field(Arc::new(FieldInner {
            p,
            precision,
            p_big,
            powers,
        })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn precision(&self) -> u32 {
        self.0.precision
    }

    fn pow(&self, k: u32) -> &BigUint {
        &self.0.powers[k as usize]
    }

    fn p_big(&self) -> &BigUint {
        &self.0.p_big
    }

    /// Digits of absolute precision below which a vanished value is not
    /// accepted as zero.
    pub fn zero_margin(&self) -> i64 {
        (self.precision() as i64 + 1) / 2
    }

    pub fn zero(&self) -> Padic {
        Padic::exact(self.clone(), BigRational::zero())
    }

    pub fn one(&self) -> Padic {
        Padic::exact(self.clone(), BigRational::one())
    }

    pub fn int(&self, n: i64) -> Padic {
        Padic::exact(self.clone(), BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(&self, n: i64, d: i64) -> Padic {
        assert!(d != 0, "zero denominator");
        Padic::exact(
            self.clone(),
            BigRational::new(BigInt::from(n), BigInt::from(d)),
        )
    }

    pub fn rational(&self, r: BigRational) -> Padic {
        Padic::exact(self.clone(), r)
    }

    /// `p^k` as an exact scalar.
    pub fn p_power(&self, k: i64) -> Padic {
        let p = BigInt::from(self.p());
        let r = if k >= 0 {
            BigRational::from_integer(num_traits::pow(p, k as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(p, (-k) as usize))
        };
        Padic::exact(self.clone(), r)
    }

    /// Capped value `p^val * unit + O(p^(val + prec))`. The unit is reduced
    /// modulo `p^prec`; factors of `p` in `unit` are moved into the valuation.
    pub fn capped(&self, val: i64, unit: &BigInt, prec: u32) -> Padic {
        let prec = prec.min(self.precision()).max(1);
        let modulus = BigInt::from_biguint(Sign::Plus, self.pow(prec).clone());
        let u = unit.mod_floor(&modulus);
        let repr = if u.is_zero() {
            Repr::Vanished {
                abs: val + prec as i64,
            }
        } else {
            let mut u = u.to_biguint().expect("non-negative");
            let t = strip_p_uint(&mut u, self.p_big());
            let prec = prec - t as u32;
            Repr::Capped {
                val: val + t,
                unit: u,
                prec,
            }
        };
        Padic {
            field: self.clone(),
            repr,
        }
    }

    /// A value known only to lie in `p^abs Z_p`.
    pub fn vanished(&self, abs: i64) -> Padic {
        Padic {
            field: self.clone(),
            repr: Repr::Vanished { abs },
        }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.p() == other.p() && self.precision() == other.precision())
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q_{}(N={})", self.p(), self.precision())
    }
}

#[derive(Clone, Debug)]
enum Repr {
    Exact(BigRational),
    Capped { val: i64, unit: BigUint, prec: u32 },
    Vanished { abs: i64 },
}

/// An element of `Q_p`; see the module docs for the representation.
#[derive(Clone)]
pub struct Padic {
    field: Field,
    repr: Repr,
}

fn strip_p_int(n: &mut BigInt, p: &BigInt) -> i64 {
    let mut count = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return count;
        }
        *n = q;
        count += 1;
    }
}

fn strip_p_uint(n: &mut BigUint, p: &BigUint) -> i64 {
    let mut count = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return count;
        }
        *n = q;
        count += 1;
    }
}

fn rational_valuation(r: &BigRational, p: u64) -> Valuation {
    if r.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p);
    let mut n = r.numer().clone();
    let mut d = r.denom().clone();
    Valuation::Finite(strip_p_int(&mut n, &p) - strip_p_int(&mut d, &p))
}

fn rational_to_capped(field: &Field, r: &BigRational) -> Repr {
    debug_assert!(!r.is_zero());
    let p = BigInt::from(field.p());
    let mut n = r.numer().clone();
    let mut d = r.denom().clone();
    let val = strip_p_int(&mut n, &p) - strip_p_int(&mut d, &p);
    let prec = field.precision();
    let modulus = field.pow(prec);
    let m_int = BigInt::from_biguint(Sign::Plus, modulus.clone());
    let n = n.mod_floor(&m_int).to_biguint().expect("non-negative");
    let d = d.mod_floor(&m_int).to_biguint().expect("non-negative");
    let dinv = d.modinv(modulus).expect("denominator is a unit");
    Repr::Capped {
        val,
        unit: n * dinv % modulus,
        prec,
    }
}

fn truncate_capped(field: &Field, val: i64, unit: &BigUint, prec: u32, abs: i64) -> Repr {
    if abs >= val + prec as i64 {
        Repr::Capped {
            val,
            unit: unit.clone(),
            prec,
        }
    } else if abs <= val {
        Repr::Vanished { abs }
    } else {
        let np = (abs - val) as u32;
        Repr::Capped {
            val,
            unit: unit % field.pow(np),
            prec: np,
        }
    }
}

fn add_repr(field: &Field, a: &Repr, b: &Repr) -> Repr {
    use Repr::*;
    match (a, b) {
        (Exact(x), Exact(y)) => Exact(x + y),
        (Exact(x), other) | (other, Exact(x)) => {
            if x.is_zero() {
                other.clone()
            } else {
                add_repr(field, &rational_to_capped(field, x), other)
            }
        }
        (Vanished { abs: x }, Vanished { abs: y }) => Vanished { abs: *x.min(y) },
        (Capped { val, unit, prec }, Vanished { abs })
        | (Vanished { abs }, Capped { val, unit, prec }) => {
            truncate_capped(field, *val, unit, *prec, *abs)
        }
        (
            Capped {
                val: v1,
                unit: u1,
                prec: r1,
            },
            Capped {
                val: v2,
                unit: u2,
                prec: r2,
            },
        ) => {
            let abs = (v1 + *r1 as i64).min(v2 + *r2 as i64);
            let v = *v1.min(v2);
            let width = (abs - v) as u32;
            let m = field.pow(width);
            let mut s = BigUint::zero();
            for (vi, ui) in [(v1, u1), (v2, u2)] {
                let shift = (vi - v) as u32;
                if shift < width {
                    s += ui * field.pow(shift);
                }
            }
            s %= m;
            if s.is_zero() {
                Vanished { abs }
            } else {
                let t = strip_p_uint(&mut s, field.p_big());
                Capped {
                    val: v + t,
                    unit: s,
                    prec: width - t as u32,
                }
            }
        }
    }
}

fn mul_repr(field: &Field, a: &Repr, b: &Repr) -> Repr {
    use Repr::*;
    match (a, b) {
        (Exact(x), Exact(y)) => Exact(x * y),
        (Exact(x), other) | (other, Exact(x)) => {
            if x.is_zero() {
                Exact(BigRational::zero())
            } else {
                mul_repr(field, &rational_to_capped(field, x), other)
            }
        }
        (Vanished { abs: x }, Vanished { abs: y }) => Vanished { abs: x + y },
        (Capped { val, .. }, Vanished { abs }) | (Vanished { abs }, Capped { val, .. }) => {
            Vanished { abs: abs + val }
        }
        (
            Capped {
                val: v1,
                unit: u1,
                prec: r1,
            },
            Capped {
                val: v2,
                unit: u2,
                prec: r2,
            },
        ) => {
            let prec = *r1.min(r2);
            let m = field.pow(prec);
            Capped {
                val: v1 + v2,
                unit: (u1 * u2) % m,
                prec,
            }
        }
    }
}

impl Padic {
    fn exact(field: Field, r: BigRational) -> Padic {
        Padic {
            field,
            repr: Repr::Exact(r),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.repr, Repr::Exact(_))
    }

    /// True only for an exact zero.
    pub fn is_zero(&self) -> bool {
        matches!(&self.repr, Repr::Exact(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.repr, Repr::Exact(r) if r.is_one())
    }

    pub fn zero_state(&self) -> ZeroState {
        match &self.repr {
            Repr::Exact(r) if r.is_zero() => ZeroState::Zero,
            Repr::Exact(_) | Repr::Capped { .. } => ZeroState::Nonzero,
            Repr::Vanished { abs } => ZeroState::Unknown { abs: *abs },
        }
    }

    /// Certified nonzero.
    pub fn is_nonzero(&self) -> bool {
        self.zero_state() == ZeroState::Nonzero
    }

    pub fn valuation_bound(&self) -> ValuationBound {
        match &self.repr {
            Repr::Exact(r) => ValuationBound::Exact(rational_valuation(r, self.p())),
            Repr::Capped { val, .. } => ValuationBound::Exact(Valuation::Finite(*val)),
            Repr::Vanished { abs } => ValuationBound::AtLeast(*abs),
        }
    }

    /// Exact valuation; fails with `PrecisionLoss` when only a lower bound is known.
    pub fn valuation(&self) -> Result<Valuation> {
        match self.valuation_bound() {
            ValuationBound::Exact(v) => Ok(v),
            ValuationBound::AtLeast(a) => Err(Error::PrecisionLoss(format!(
                "value is zero to precision O({}^{a}); valuation only bounded below",
                self.p()
            ))),
        }
    }

    /// Largest `e` such that `|self| <= p^(-e)` is certified (`None` for exact zero).
    pub fn valuation_lower_bound(&self) -> Option<i64> {
        match self.valuation_bound() {
            ValuationBound::Exact(Valuation::Finite(v)) => Some(v),
            ValuationBound::Exact(Valuation::Infinite) => None,
            ValuationBound::AtLeast(a) => Some(a),
        }
    }

    /// Relative precision in digits (`None` for exact values).
    pub fn relative_precision(&self) -> Option<u32> {
        match &self.repr {
            Repr::Exact(_) => None,
            Repr::Capped { prec, .. } => Some(*prec),
            Repr::Vanished { .. } => Some(0),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Exact(r) => Some(r),
            _ => None,
        }
    }

    /// Whether this value may be treated as zero relative to a scale of
    /// valuation `reference`: exact zero, or vanished with at least
    /// `zero_margin` digits of absolute precision beyond `reference`.
    pub fn is_negligible(&self, reference: i64) -> Result<bool> {
        match &self.repr {
            Repr::Exact(r) => Ok(r.is_zero()),
            Repr::Capped { .. } => Ok(false),
            Repr::Vanished { abs } => {
                if *abs >= reference + self.field.zero_margin() {
                    Ok(true)
                } else {
                    Err(Error::PrecisionLoss(format!(
                        "cannot decide whether O({}^{abs}) is zero at scale {}^{reference}",
                        self.p(),
                        self.p()
                    )))
                }
            }
        }
    }

    /// Equality certified to the tracked precision.
    pub fn same_as(&self, other: &Padic) -> Result<bool> {
        let diff = self - other;
        let reference = [self, other]
            .iter()
            .filter_map(|x| x.valuation_lower_bound())
            .min()
            .unwrap_or(0)
            .min(0);
        diff.is_negligible(reference)
    }

    pub fn inv(&self) -> Result<Padic> {
        let repr = match &self.repr {
            Repr::Exact(r) => {
                if r.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Repr::Exact(r.recip())
            }
            Repr::Capped { val, unit, prec } => {
                let m = self.field.pow(*prec);
                Repr::Capped {
                    val: -val,
                    unit: unit.modinv(m).expect("unit is invertible"),
                    prec: *prec,
                }
            }
            Repr::Vanished { abs } => {
                return Err(Error::PrecisionLoss(format!(
                    "cannot invert O({}^{abs})",
                    self.p()
                )))
            }
        };
        Ok(Padic {
            field: self.field.clone(),
            repr,
        })
    }

    pub fn div(&self, other: &Padic) -> Result<Padic> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> Padic {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn powi(&self, e: i64) -> Result<Padic> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// Force capped representation at the field precision (exact zero stays exact).
    pub fn to_capped(&self) -> Padic {
        match &self.repr {
            Repr::Exact(r) if !r.is_zero() => Padic {
                field: self.field.clone(),
                repr: rational_to_capped(&self.field, r),
            },
            _ => self.clone(),
        }
    }

    /// Image in the residue field; requires certified `v >= 0`.
    pub fn reduce_residue(&self) -> Result<Residue> {
        let p = self.p();
        match &self.repr {
            Repr::Exact(r) => {
                if r.is_zero() {
                    return Ok(Residue::new(p, 0));
                }
                let v = rational_valuation(r, p).finite().expect("nonzero");
                if v < 0 {
                    return Err(Error::NotIntegral(v));
                }
                if v > 0 {
                    return Ok(Residue::new(p, 0));
                }
                let pb = BigInt::from(p);
                let n = r.numer().mod_floor(&pb).to_u64().expect("small");
                let d = r.denom().mod_floor(&pb).to_u64().expect("small");
                Ok(Residue::new(p, n) * Residue::new(p, d).inv().expect("unit denominator"))
            }
            Repr::Capped { val, unit, .. } => match val.cmp(&0) {
                Ordering::Less => Err(Error::NotIntegral(*val)),
                Ordering::Greater => Ok(Residue::new(p, 0)),
                Ordering::Equal => Ok(Residue::new(
                    p,
                    (unit % self.field.p_big()).to_u64().expect("small"),
                )),
            },
            Repr::Vanished { abs } => {
                if *abs >= 1 {
                    Ok(Residue::new(p, 0))
                } else {
                    Err(Error::PrecisionLoss(format!(
                        "residue of O({p}^{abs}) is not determined"
                    )))
                }
            }
        }
    }

    /// Exact integer lift of a residue class, in `0..p`.
    pub fn from_residue(field: &Field, r: Residue) -> Padic {
        assert_eq!(field.p(), r.p());
        field.int(r.value() as i64)
    }

    /// Multiply by `p^k`.
    pub fn shift(&self, k: i64) -> Padic {
        self * &self.field.p_power(k)
    }

    /// Literal form: `{"v", "unit", "N"}` for capped values.
    pub fn capped_parts(&self) -> Option<(i64, BigUint, u32)> {
        match &self.repr {
            Repr::Capped { val, unit, prec } => Some((*val, unit.clone(), *prec)),
            Repr::Vanished { abs } => Some((*abs, BigUint::zero(), 0)),
            Repr::Exact(_) => None,
        }
    }
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p();
        match &self.repr {
            Repr::Exact(r) => write!(f, "{r}"),
            Repr::Capped { val, unit, prec } => {
                write!(f, "{unit}*{p}^{val} + O({p}^{})", val + *prec as i64)
            }
            Repr::Vanished { abs } => write!(f, "O({p}^{abs})"),
        }
    }
}

impl fmt::Debug for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Certified equality; values that cannot be certified equal compare unequal.
impl PartialEq for Padic {
    fn eq(&self, other: &Padic) -> bool {
        self.same_as(other).unwrap_or(false)
    }
}

impl<'a> Add<&'a Padic> for &'a Padic {
    type Output = Padic;
    fn add(self, rhs: &'a Padic) -> Padic {
        assert_eq!(self.field, rhs.field, "mixed fields");
        Padic {
            field: self.field.clone(),
            repr: add_repr(&self.field, &self.repr, &rhs.repr),
        }
    }
}

impl<'a> Mul<&'a Padic> for &'a Padic {
    type Output = Padic;
    fn mul(self, rhs: &'a Padic) -> Padic {
        assert_eq!(self.field, rhs.field, "mixed fields");
        Padic {
            field: self.field.clone(),
            repr: mul_repr(&self.field, &self.repr, &rhs.repr),
        }
    }
}

impl Neg for &Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        let repr = match &self.repr {
            Repr::Exact(r) => Repr::Exact(-r),
            Repr::Capped { val, unit, prec } => Repr::Capped {
                val: *val,
                unit: self.field.pow(*prec) - unit,
                prec: *prec,
            },
            Repr::Vanished { abs } => Repr::Vanished { abs: *abs },
        };
        Padic {
            field: self.field.clone(),
            repr,
        }
    }
}

impl<'a> Sub<&'a Padic> for &'a Padic {
    type Output = Padic;
    fn sub(self, rhs: &'a Padic) -> Padic {
        self + &(-rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Padic> for Padic {
            type Output = Padic;
            fn $m(self, rhs: Padic) -> Padic {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Padic> for Padic {
            type Output = Padic;
            fn $m(self, rhs: &'a Padic) -> Padic {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        -&self
    }
}

/// Element of the residue field `F_p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    p: u64,
    value: u64,
}

impl Residue {
    pub fn new(p: u64, value: u64) -> Residue {
        Residue {
            p,
            value: value % p,
        }
    }

    pub fn from_i64(p: u64, value: i64) -> Residue {
        Residue::new(p, value.rem_euclid(p as i64) as u64)
    }

    pub fn p(self) -> u64 {
        self.p
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Option<Residue> {
        if self.value == 0 {
            None
        } else {
            Some(Residue::new(
                self.p,
                pow_mod(self.value, self.p - 2, self.p),
            ))
        }
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        debug_assert_eq!(self.p, rhs.p);
        Residue::new(self.p, self.value + rhs.value)
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        Residue::new(self.p, self.value + self.p - rhs.value)
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        Residue::new(self.p, self.value * rhs.value)
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue::new(self.p, self.p - self.value)
    }
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

/// Root of unity of exact order `m` in `Q_p`, for `m | p - 1`.
///
/// Orders 1 and 2 give the exact rationals `1` and `-1`. Otherwise the
/// residue `g^((p-1)/m)` of the smallest primitive root `g` is lifted to the
/// Teichmuller representative by repeated `p`-th powering; each round fixes
/// one more digit.
pub fn teichmuller_root(field: &Field, m: u64) -> Result<Padic> {
    let p = field.p();
    if m == 0 || !(p - 1).is_multiple_of(m) {
        return Err(Error::BadOrder { p, m });
    }
    match m {
        1 => return Ok(field.one()),
        2 => return Ok(field.int(-1)),
        _ => {}
    }
    let g = primitive_root(p);
    let c0 = pow_mod(g, (p - 1) / m, p);
    let n = field.precision();
    let modulus = field.pow(n);
    let mut x = BigUint::from(c0);
    for _ in 1..n {
        x = x.modpow(field.p_big(), modulus);
    }
    let zeta = field.capped(0, &BigInt::from_biguint(Sign::Plus, x), n);
    debug_assert!(check_root_order(&zeta, m));
    Ok(zeta)
}

/// `zeta^m = 1` and `zeta^(m/q) != 1` for every prime `q | m`, to tracked precision.
pub fn check_root_order(zeta: &Padic, m: u64) -> bool {
    let one = zeta.field().one();
    if !zeta.pow(m).same_as(&one).unwrap_or(false) {
        return false;
    }
    prime_factors(m)
        .into_iter()
        .all(|q| (&zeta.pow(m / q) - &one).is_nonzero())
}

/// Helper for parsing rationals like `"-3/25"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|e| Error::Input(format!("bad integer {t:?}: {e}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Input(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse_int(n)?, d))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Field {
        Field::new(5, 64).unwrap()
    }

    #[test]
    fn exact_examples() {
        let f = f5();
        let s = f.int(5) + f.int(20);
        assert_eq!(s, f.int(25));
        assert_eq!(s.valuation().unwrap(), Valuation::Finite(2));
        let t = f.ratio(1, 5) * f.int(10);
        assert_eq!(t, f.int(2));
        assert_eq!(t.valuation().unwrap(), Valuation::Finite(0));
    }

    #[test]
    fn valuation_examples() {
        let f = f5();
        assert_eq!(f.int(25).valuation().unwrap(), Valuation::Finite(2));
        assert_eq!(f.ratio(4, 25).valuation().unwrap(), Valuation::Finite(-2));
        let f3 = Field::new(3, 10).unwrap();
        assert_eq!(f3.zero().valuation().unwrap(), Valuation::Infinite);
    }

    #[test]
    fn total_cancellation_is_only_a_lower_bound() {
        let f = Field::new(5, 4).unwrap();
        let a = f.capped(0, &BigInt::from(1), 4);
        let b = f.capped(0, &BigInt::from(-1), 4);
        let s = &a + &b;
        assert_eq!(s.zero_state(), ZeroState::Unknown { abs: 4 });
        assert_eq!(s.valuation_bound(), ValuationBound::AtLeast(4));
        assert!(matches!(s.valuation(), Err(Error::PrecisionLoss(_))));
        assert!(matches!(s.inv(), Err(Error::PrecisionLoss(_))));
    }

    #[test]
    fn partial_cancellation_shrinks_precision() {
        let f = Field::new(5, 10).unwrap();
        let a = f.capped(0, &BigInt::from(1), 10);
        let b = f.capped(0, &BigInt::from(24), 10); // 24 = -1 + 25
        let s = &a + &b;
        assert_eq!(s.valuation().unwrap(), Valuation::Finite(2));
        assert_eq!(s.relative_precision(), Some(8));
        assert_eq!(s, f.int(25));
    }

    #[test]
    fn capped_matches_exact() {
        let f = Field::new(7, 20).unwrap();
        let x = f.ratio(-13, 49);
        let y = f.ratio(3, 14);
        let xc = x.to_capped();
        let yc = y.to_capped();
        assert_eq!(&xc * &yc, &x * &y);
        assert_eq!(&xc + &yc, &x + &y);
        assert_eq!(xc.inv().unwrap(), x.inv().unwrap());
        assert_eq!(-&xc, -&x);
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(f5().zero().inv().unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn teichmuller_examples() {
        let f3 = Field::new(3, 16).unwrap();
        assert_eq!(teichmuller_root(&f3, 2).unwrap(), f3.int(-1));
        assert!(teichmuller_root(&f3, 2).unwrap().is_exact());

        let f = Field::new(5, 2).unwrap();
        let z = teichmuller_root(&f, 4).unwrap();
        let (v, u, n) = z.capped_parts().unwrap();
        assert_eq!((v, u, n), (0, BigUint::from(7u32), 2));

        let f17 = Field::new(17, 30).unwrap();
        let z = teichmuller_root(&f17, 16).unwrap();
        assert!(check_root_order(&z, 16));
        assert_eq!(z.pow(8), f17.int(-1));
        assert_eq!(z.reduce_residue().unwrap().value(), primitive_root(17));

        assert_eq!(
            teichmuller_root(&f, 3).unwrap_err(),
            Error::BadOrder { p: 5, m: 3 }
        );
    }

    #[test]
    fn teichmuller_relift_agrees() {
        let lo = Field::new(13, 8).unwrap();
        let hi = Field::new(13, 40).unwrap();
        let a = teichmuller_root(&lo, 12).unwrap().capped_parts().unwrap().1;
        let b = teichmuller_root(&hi, 12).unwrap().capped_parts().unwrap().1;
        let m = num_traits::pow(BigUint::from(13u32), 8);
        assert_eq!(a, b % m);
    }

    #[test]
    fn residue_examples() {
        let f = f5();
        assert_eq!(f.int(7).reduce_residue().unwrap().value(), 2);
        assert_eq!(f.int(25).reduce_residue().unwrap().value(), 0);
        assert_eq!(
            f.ratio(1, 5).reduce_residue().unwrap_err(),
            Error::NotIntegral(-1)
        );
        assert_eq!(f.ratio(3, 2).reduce_residue().unwrap().value(), 4);
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(3), 2);
        assert_eq!(primitive_root(5), 2);
        assert_eq!(primitive_root(7), 3);
        assert_eq!(primitive_root(17), 3);
    }

    #[test]
    fn parse_rational_literals() {
        let r = parse_rational("-3/25").unwrap();
        assert_eq!(r, BigRational::new(BigInt::from(-3), BigInt::from(25)));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
