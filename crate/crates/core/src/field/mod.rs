//! Exact arithmetic in GF(p), GF(2^k) and the rational function field GF(2)(t).
//!
//! Elements are small `Copy` values that carry their [`Field`] descriptor, so
//! they can be passed around freely and compared by value. Rational functions
//! are kept in lowest terms (the denominator is automatically monic over GF(2)),
//! which makes equality representational.
//!
//! The operator impls (`+`, `*`, ...) panic on descriptor mismatch; they are used
//! by the linear algebra where all operands come from the same field. The
//! checked entry point is [`arith`].

mod poly;

pub use poly::{parse_poly, Poly2};

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use thiserror::Error;

/// Largest degree allowed for numerators and denominators in GF(2)(t).
pub const MAX_POLY_DEGREE: u32 = 63;
pub const MAX_PRIME: u8 = 97;
pub const MAX_GALOIS_DEGREE: u8 = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("operands belong to different fields ({0} and {1})")]
    DescriptorMismatch(Field, Field),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a square")]
    NotASquare(String),
    #[error("polynomial degree exceeds {MAX_POLY_DEGREE}")]
    DegreeOverflow,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("cannot parse {0:?} as an element of {1}")]
    BadElement(String, Field),
}

/// Descriptor of a supported coefficient field.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Field {
    /// GF(p) for an odd prime p ≤ 97.
    Prime(u8),
    /// GF(2^k) = GF(2)[x]/(modulus); `modulus` includes the leading x^k bit.
    Galois2 { degree: u8, modulus: u16 },
    /// GF(2)(t).
    RationalFunction,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Value {
    Residue(u8),
    Bits(u8),
    Fraction { num: Poly2, den: Poly2 },
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    value: Value,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Irreducibility over GF(2) by trial division.
pub fn is_irreducible_gf2(p: Poly2) -> bool {
    let Some(deg) = p.degree() else { return false };
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for cand in (1u128 << d)..(1u128 << (d + 1)) {
            if p.div_rem(Poly2(cand)).1.is_zero() {
                return false;
            }
        }
    }
    true
}

fn default_modulus(k: u8) -> Option<u16> {
    Some(match k {
        1 => 0b10,
        2 => 0b111,
        3 => 0b1011,
        4 => 0b1_0011,
        5 => 0b10_0101,
        6 => 0b100_0011,
        7 => 0b1000_0011,
        8 => 0b1_0001_1011,
        _ => return None,
    })
}

fn gf2k_mul(a: u8, b: u8, degree: u8, modulus: u16) -> u8 {
    let (mut acc, mut a, mut b) = (0u16, a as u16, b as u16);
    let top = 1u16 << degree;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= modulus;
        }
    }
    acc as u8
}

impl Field {
    pub fn prime(p: u8) -> Result<Field, FieldError> {
        if p.is_multiple_of(2) || p > MAX_PRIME || !is_prime(p as u32) {
            return Err(FieldError::InvalidField(format!(
                "GF({p}) must have an odd prime modulus ≤ {MAX_PRIME}"
            )));
        }
        Ok(Field::Prime(p))
    }

    /// GF(2^k) with an explicit modulus (bit i = coefficient of x^i).
    pub fn galois2(degree: u8, modulus: u16) -> Result<Field, FieldError> {
        if degree == 0 || degree > MAX_GALOIS_DEGREE {
            return Err(FieldError::InvalidField(format!("GF(2^{degree}) unsupported")));
        }
        let m = Poly2(modulus as u128);
        if m.degree() != Some(degree as u32) || !is_irreducible_gf2(m) {
            return Err(FieldError::InvalidField(format!(
                "modulus {m:?} is not an irreducible polynomial of degree {degree}"
            )));
        }
        Ok(Field::Galois2 { degree, modulus })
    }

    /// GF(2^k) with the conventional modulus (x²+x+1 for GF(4), ...).
    pub fn gf2k(degree: u8) -> Result<Field, FieldError> {
        let m = default_modulus(degree)
            .ok_or_else(|| FieldError::InvalidField(format!("GF(2^{degree}) unsupported")))?;
        Field::galois2(degree, m)
    }

    pub fn gf2() -> Field {
        Field::gf2k(1).unwrap()
    }

    pub fn gf4() -> Field {
        Field::gf2k(2).unwrap()
    }

    pub fn rational_function() -> Field {
        Field::RationalFunction
    }

    pub fn characteristic(self) -> u32 {
        match self {
            Field::Prime(p) => p as u32,
            _ => 2,
        }
    }

    /// Number of elements, `None` for GF(2)(t).
    pub fn order(self) -> Option<u32> {
        match self {
            Field::Prime(p) => Some(p as u32),
            Field::Galois2 { degree, .. } => Some(1 << degree),
            Field::RationalFunction => None,
        }
    }

    pub fn is_finite(self) -> bool {
        self.order().is_some()
    }

    pub fn zero(self) -> FieldElement {
        let value = match self {
            Field::Prime(_) => Value::Residue(0),
            Field::Galois2 { .. } => Value::Bits(0),
            Field::RationalFunction => Value::Fraction { num: Poly2::ZERO, den: Poly2::ONE },
        };
        FieldElement { field: self, value }
    }

    pub fn one(self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(self, n: i64) -> FieldElement {
        let value = match self {
            Field::Prime(p) => Value::Residue(n.rem_euclid(p as i64) as u8),
            Field::Galois2 { .. } => Value::Bits(n.rem_euclid(2) as u8),
            Field::RationalFunction => Value::Fraction {
                num: Poly2(n.rem_euclid(2) as u128),
                den: Poly2::ONE,
            },
        };
        FieldElement { field: self, value }
    }

    /// The class of `x` in GF(2^k), or `t` in GF(2)(t). `None` for prime fields.
    pub fn generator(self) -> Option<FieldElement> {
        match self {
            Field::Prime(_) => None,
            Field::Galois2 { degree, modulus } => {
                let bits = if degree == 1 { (modulus & 1) as u8 } else { 2 };
                Some(FieldElement { field: self, value: Value::Bits(bits) })
            }
            Field::RationalFunction => Some(FieldElement::fraction(Poly2::T, Poly2::ONE)),
        }
    }

    /// Element with the given index in `0..order()`; residues for GF(p), bit patterns for GF(2^k).
    pub fn element_from_index(self, index: u32) -> Option<FieldElement> {
        match self {
            Field::Prime(p) if index < p as u32 => {
                Some(FieldElement { field: self, value: Value::Residue(index as u8) })
            }
            Field::Galois2 { degree, .. } if index < 1 << degree => {
                Some(FieldElement { field: self, value: Value::Bits(index as u8) })
            }
            _ => None,
        }
    }

    /// All elements in index order, for finite fields.
    pub fn elements(self) -> Option<Vec<FieldElement>> {
        let q = self.order()?;
        Some((0..q).map(|i| self.element_from_index(i).unwrap()).collect())
    }

    /// Parses an element literal: `3`, `-1`, `w+1`, `(t^2+1)/t`.
    pub fn parse_element(self, s: &str) -> Result<FieldElement, FieldError> {
        let bad = || FieldError::BadElement(s.to_string(), self);
        let trimmed = s.trim();
        match self {
            Field::Prime(_) => trimmed.parse::<i64>().map(|n| self.from_int(n)).map_err(|_| bad()),
            Field::Galois2 { degree, modulus } => {
                let var = if trimmed.contains('x') { 'x' } else { 'w' };
                let p = parse_poly(trimmed, var).ok_or_else(bad)?;
                let r = p.div_rem(Poly2(modulus as u128)).1;
                debug_assert!(r.degree().is_none_or(|d| d < degree as u32));
                Ok(FieldElement { field: self, value: Value::Bits(r.0 as u8) })
            }
            Field::RationalFunction => {
                let (num, den) = split_fraction(trimmed).ok_or_else(bad)?;
                let num = parse_poly(num, 't').ok_or_else(bad)?;
                let den = parse_poly(den, 't').ok_or_else(bad)?;
                if den.is_zero() {
                    return Err(FieldError::DivisionByZero);
                }
                FieldElement::try_fraction(num, den)
            }
        }
    }
}

fn strip_parens(s: &str) -> &str {
    let s = s.trim();
    s.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(s)
}

fn split_fraction(s: &str) -> Option<(&str, &str)> {
    match s.find('/') {
        None => Some((strip_parens(s), "1")),
        Some(i) => {
            let (a, b) = (&s[..i], &s[i + 1..]);
            if b.contains('/') {
                return None;
            }
            Some((strip_parens(a), strip_parens(b)))
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Field::Prime(p) => write!(f, "gf({p})"),
            Field::Galois2 { degree, modulus } => {
                if default_modulus(degree) == Some(modulus) && degree == 1 {
                    return write!(f, "gf(2)");
                }
                write!(f, "gf({};", 1u32 << degree)?;
                Poly2(modulus as u128).fmt_in("x", f)?;
                write!(f, ")")
            }
            Field::RationalFunction => write!(f, "gf2(t)"),
        }
    }
}

impl FromStr for Field {
    type Err = FieldError;

    /// Accepts `gf(7)`, `gf(4)`, `gf(4;x^2+x+1)`, `gf2(t)`.
    fn from_str(s: &str) -> Result<Field, FieldError> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || FieldError::InvalidField(s.clone());
        if s == "gf2(t)" {
            return Ok(Field::RationalFunction);
        }
        let inner = s.strip_prefix("gf(").and_then(|x| x.strip_suffix(')')).ok_or_else(bad)?;
        let (size, modulus) = match inner.split_once(';') {
            Some((a, b)) => (a, Some(b)),
            None => (inner, None),
        };
        let q: u32 = size.parse().map_err(|_| bad())?;
        if q.is_power_of_two() && q >= 2 {
            let k = q.trailing_zeros() as u8;
            match modulus {
                None => Field::gf2k(k),
                Some(m) => {
                    let m = parse_poly(m, 'x').ok_or_else(bad)?;
                    if m.degree() != Some(k as u32) {
                        return Err(bad());
                    }
                    Field::galois2(k, m.0 as u16)
                }
            }
        } else if modulus.is_none() && q <= u8::MAX as u32 {
            Field::prime(q as u8)
        } else {
            Err(bad())
        }
    }
}

impl FieldElement {
    fn fraction(num: Poly2, den: Poly2) -> FieldElement {
        FieldElement::try_fraction(num, den).expect("rational function degree cap exceeded")
    }

    fn try_fraction(num: Poly2, den: Poly2) -> Result<FieldElement, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let (num, den) = if num.is_zero() {
            (Poly2::ZERO, Poly2::ONE)
        } else {
            let g = num.gcd(den);
            (num.div_rem(g).0, den.div_rem(g).0)
        };
        if num.degree().unwrap_or(0) > MAX_POLY_DEGREE || den.degree().unwrap_or(0) > MAX_POLY_DEGREE {
            return Err(FieldError::DegreeOverflow);
        }
        Ok(FieldElement { field: Field::RationalFunction, value: Value::Fraction { num, den } })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.value, Value::Residue(0) | Value::Bits(0))
            || matches!(self.value, Value::Fraction { num, .. } if num.is_zero())
    }

    pub fn is_one(&self) -> bool {
        *self == self.field.one()
    }

    /// Index in `0..order()` for finite fields.
    pub fn index(&self) -> Option<u32> {
        match self.value {
            Value::Residue(v) | Value::Bits(v) => Some(v as u32),
            Value::Fraction { .. } => None,
        }
    }

    /// Numerator and denominator, for elements of GF(2)(t).
    pub fn as_fraction(&self) -> Option<(Poly2, Poly2)> {
        match self.value {
            Value::Fraction { num, den } => Some((num, den)),
            _ => None,
        }
    }

    fn check_same(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.field != other.field {
            Err(FieldError::DescriptorMismatch(self.field, other.field))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check_same(other)?;
        let value = match (self.value, other.value, self.field) {
            (Value::Residue(a), Value::Residue(b), Field::Prime(p)) => {
                Value::Residue(((a as u16 + b as u16) % p as u16) as u8)
            }
            (Value::Bits(a), Value::Bits(b), _) => Value::Bits(a ^ b),
            (Value::Fraction { num: a, den: b }, Value::Fraction { num: c, den: d }, _) => {
                if b == d {
                    return FieldElement::try_fraction(a.add(c), b);
                }
                let ad = a.checked_mul(d).ok_or(FieldError::DegreeOverflow)?;
                let cb = c.checked_mul(b).ok_or(FieldError::DegreeOverflow)?;
                let bd = b.checked_mul(d).ok_or(FieldError::DegreeOverflow)?;
                return FieldElement::try_fraction(ad.add(cb), bd);
            }
            _ => unreachable!("value kind always matches its field"),
        };
        Ok(FieldElement { field: self.field, value })
    }

    pub fn checked_mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check_same(other)?;
        let value = match (self.value, other.value, self.field) {
            (Value::Residue(a), Value::Residue(b), Field::Prime(p)) => {
                Value::Residue(((a as u16 * b as u16) % p as u16) as u8)
            }
            (Value::Bits(a), Value::Bits(b), Field::Galois2 { degree, modulus }) => {
                Value::Bits(gf2k_mul(a, b, degree, modulus))
            }
            (Value::Fraction { num: a, den: b }, Value::Fraction { num: c, den: d }, _) => {
                // cross-cancel first to keep degrees small
                let g1 = a.gcd(d);
                let g2 = c.gcd(b);
                let (a, d) = if g1.is_zero() { (a, d) } else { (a.div_rem(g1).0, d.div_rem(g1).0) };
                let (c, b) = if g2.is_zero() { (c, b) } else { (c.div_rem(g2).0, b.div_rem(g2).0) };
                let num = a.checked_mul(c).ok_or(FieldError::DegreeOverflow)?;
                let den = b.checked_mul(d).ok_or(FieldError::DegreeOverflow)?;
                return FieldElement::try_fraction(num, den);
            }
            _ => unreachable!("value kind always matches its field"),
        };
        Ok(FieldElement { field: self.field, value })
    }

    pub fn neg(&self) -> FieldElement {
        match (self.value, self.field) {
            (Value::Residue(a), Field::Prime(p)) => FieldElement {
                field: self.field,
                value: Value::Residue(((p as u16 - a as u16) % p as u16) as u8),
            },
            _ => *self,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<FieldElement> {
        if self.is_zero() {
            return None;
        }
        Some(match (self.value, self.field) {
            (Value::Residue(_), Field::Prime(p)) => self.pow(p as u64 - 2),
            (Value::Bits(_), Field::Galois2 { degree, .. }) => self.pow((1u64 << degree) - 2),
            (Value::Fraction { num, den }, _) => FieldElement::fraction(den, num),
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check_same(other)?;
        let inv = other.inv().ok_or(FieldError::DivisionByZero)?;
        self.checked_mul(&inv)
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut base = *self;
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// True iff `self = c²` for some `c` in the field.
    pub fn is_square(&self) -> bool {
        match (self.value, self.field) {
            (Value::Residue(0), _) => true,
            (Value::Residue(_), Field::Prime(p)) => self.pow((p as u64 - 1) / 2).is_one(),
            (Value::Bits(_), _) => true,
            (Value::Fraction { num, den }, _) => num.is_square() && den.is_square(),
            _ => unreachable!(),
        }
    }

    /// A square root. For GF(p) the smaller of the two roots is returned.
    pub fn sqrt(&self) -> Result<FieldElement, FieldError> {
        let not_square = || FieldError::NotASquare(self.to_string());
        match (self.value, self.field) {
            (Value::Residue(_), Field::Prime(p)) => (0..p as u32)
                .map(|c| self.field.from_int(c as i64))
                .find(|c| *c * *c == *self)
                .ok_or_else(not_square),
            (Value::Bits(_), Field::Galois2 { degree, .. }) => Ok(self.pow(1u64 << (degree - 1))),
            (Value::Fraction { num, den }, _) => {
                let n = num.sqrt().ok_or_else(not_square)?;
                let d = den.sqrt().ok_or_else(not_square)?;
                FieldElement::try_fraction(n, d)
            }
            _ => unreachable!(),
        }
    }
}

/// Checked binary arithmetic.
pub fn arith(op: ArithOp, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_add(&b.neg()),
        ArithOp::Mul => a.checked_mul(b),
        ArithOp::Div => a.checked_div(b),
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.checked_add(&rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self.checked_add(&rhs.neg()).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.checked_mul(&rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Div for FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: FieldElement) -> FieldElement {
        self.checked_div(&rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(&self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            Value::Residue(v) => write!(f, "{v}"),
            Value::Bits(v) => Poly2(v as u128).fmt_in("w", f),
            Value::Fraction { num, den } => {
                if den == Poly2::ONE {
                    return num.fmt_in("t", f);
                }
                let wrap = |p: Poly2, f: &mut fmt::Formatter<'_>| {
                    if p.weight() > 1 {
                        write!(f, "(")?;
                        p.fmt_in("t", f)?;
                        write!(f, ")")
                    } else {
                        p.fmt_in("t", f)
                    }
                };
                wrap(num, f)?;
                write!(f, "/")?;
                wrap(den, f)
            }
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A square class `a·F^{×2}` (or the zero class).
#[derive(Clone, Copy, Debug)]
pub struct SquareClass {
    pub representative: FieldElement,
}

impl SquareClass {
    pub fn of(a: FieldElement) -> SquareClass {
        SquareClass { representative: a }
    }

    pub fn is_trivial(&self) -> bool {
        !self.representative.is_zero() && self.representative.is_square()
    }
}

impl PartialEq for SquareClass {
    fn eq(&self, other: &SquareClass) -> bool {
        let (a, b) = (self.representative, other.representative);
        match (a.is_zero(), b.is_zero()) {
            (true, true) => true,
            (false, false) => a.field() == b.field() && (a / b).is_square(),
            _ => false,
        }
    }
}
