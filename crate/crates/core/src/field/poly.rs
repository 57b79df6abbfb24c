//! Dense polynomials over GF(2), one bit per coefficient.

use std::fmt;

/// Bits at odd positions; a polynomial is a square iff none of them are set.
const ODD_BITS: u128 = 0xAAAA_AAAA_AAAA_AAAA_AAAA_AAAA_AAAA_AAAA;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Poly2(pub u128);

impl Poly2 {
    pub const ZERO: Poly2 = Poly2(0);
    pub const ONE: Poly2 = Poly2(1);
    /// The indeterminate `t`.
    pub const T: Poly2 = Poly2(2);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(self) -> Option<u32> {
        if self.0 == 0 {
            None
        } else {
            Some(127 - self.0.leading_zeros())
        }
    }

    pub fn add(self, other: Poly2) -> Poly2 {
        Poly2(self.0 ^ other.0)
    }

    /// Carry-less product. Returns `None` if the result would not fit in 128 bits.
    pub fn checked_mul(self, other: Poly2) -> Option<Poly2> {
        match (self.degree(), other.degree()) {
            (None, _) | (_, None) => Some(Poly2::ZERO),
            (Some(a), Some(b)) if a + b > 127 => None,
            _ => {
                let (mut acc, mut a, mut b) = (0u128, self.0, other.0);
                while b != 0 {
                    if b & 1 == 1 {
                        acc ^= a;
                    }
                    b >>= 1;
                    a <<= 1;
                }
                Some(Poly2(acc))
            }
        }
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(self, divisor: Poly2) -> (Poly2, Poly2) {
        let db = divisor.degree().expect("polynomial division by zero");
        let (mut q, mut r) = (0u128, self.0);
        while let Some(dr) = Poly2(r).degree() {
            if dr < db {
                break;
            }
            let shift = dr - db;
            q |= 1 << shift;
            r ^= divisor.0 << shift;
        }
        (Poly2(q), Poly2(r))
    }

    pub fn gcd(self, other: Poly2) -> Poly2 {
        let (mut a, mut b) = (self, other);
        while !b.is_zero() {
            let r = a.div_rem(b).1;
            a = b;
            b = r;
        }
        a
    }

    /// True iff the polynomial lies in GF(2)[t²].
    pub fn is_square(self) -> bool {
        self.0 & ODD_BITS == 0
    }

    /// Square root of a polynomial in GF(2)[t²] (halves every exponent).
    pub fn sqrt(self) -> Option<Poly2> {
        if !self.is_square() {
            return None;
        }
        let mut out = 0u128;
        let mut bits = self.0;
        let mut i = 0;
        while bits != 0 {
            if bits & 1 == 1 {
                out |= 1 << i;
            }
            bits >>= 2;
            i += 1;
        }
        Some(Poly2(out))
    }

    pub fn fmt_in(self, var: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(deg) = self.degree() else {
            return write!(f, "0");
        };
        let mut first = true;
        for e in (0..=deg).rev() {
            if (self.0 >> e) & 1 == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match e {
                0 => write!(f, "1")?,
                1 => write!(f, "{var}")?,
                _ => write!(f, "{var}^{e}")?,
            }
        }
        Ok(())
    }

    /// Number of monomials.
    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_in("t", f)
    }
}

/// Parses a GF(2) polynomial such as `t^2+t+1` in the given variable.
/// `-` is accepted as a synonym for `+`.
pub fn parse_poly(s: &str, var: char) -> Option<Poly2> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let mut acc = 0u128;
    for term in s.split(['+', '-']) {
        if term.is_empty() {
            return None;
        }
        let exp = if term == "0" {
            continue;
        } else if term == "1" {
            0
        } else {
            let mut chars = term.chars();
            if chars.next()? != var {
                return None;
            }
            let rest: &str = chars.as_str();
            if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')?.parse::<u32>().ok()?
            }
        };
        if exp > 127 {
            return None;
        }
        acc ^= 1 << exp;
    }
    Some(Poly2(acc))
}
