//! Exact arithmetic over prime fields F_p and extension fields F_{p^m}.
//!
//! Elements are kept in canonical coefficient form over the polynomial basis
//! (little-endian, fully reduced mod p). Every element also has a canonical
//! integer encoding: the little-endian base-p value of its coefficient
//! vector. File formats and code locators use that encoding throughout.

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_EXT_DEGREE: usize = 8;
/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;

/// A finite field F_{p^m}, p prime, with a deterministic modulus: the
/// lexicographically smallest (by integer encoding of the low coefficients)
/// monic irreducible polynomial of degree m over F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field {
    p: u64,
    m: usize,
    /// Monic modulus, little-endian, length m+1. Unused (and equal to x)
    /// when m = 1.
    modulus: Vec<u64>,
    order: u64,
}

/// An element of F_{p^m}. Carries the field's (p, m) tag so that mixing
/// elements of different fields is caught at run time.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FieldElement {
    p: u32,
    m: u8,
    digits: [u32; MAX_EXT_DEGREE],
}

impl FieldElement {
    /// Canonical integer encoding: little-endian base-p value of the
    /// coefficient vector.
    pub fn index(&self) -> u64 {
        let mut acc = 0u64;
        for i in (0..self.m as usize).rev() {
            acc = acc * self.p as u64 + self.digits[i] as u64;
        }
        acc
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits[..self.m as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.digits[..self.m as usize].iter().all(|&d| d == 0)
    }

    fn same_field(&self, other: &FieldElement) -> bool {
        self.p == other.p && self.m == other.m
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.index())
    }
}

impl Field {
    /// Builds F_{p^m} with the canonical modulus.
    pub fn new(p: u64, m: usize) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 || m > MAX_EXT_DEGREE {
            return Err(Error::UnsupportedField(format!(
                "extension degree {m} outside [1, {MAX_EXT_DEGREE}]"
            )));
        }
        let order = checked_pow(p, m)
            .filter(|&o| o <= MAX_ORDER)
            .ok_or_else(|| Error::UnsupportedField(format!("order {p}^{m} exceeds {MAX_ORDER}")))?;
        let modulus = if m == 1 {
            vec![0, 1]
        } else {
            canonical_modulus(p, m).ok_or_else(|| {
                Error::UnsupportedField(format!("no irreducible polynomial found for {p}^{m}"))
            })?
        };
        Ok(Field {
            p,
            m,
            modulus,
            order,
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn ext_degree(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Decodes an integer in [0, p^m) into an element (inverse of
    /// [`FieldElement::index`]).
    pub fn element(&self, k: u64) -> Result<FieldElement> {
        if k >= self.order {
            return Err(Error::IndexOutOfRange {
                index: k,
                size: self.order,
            });
        }
        let mut digits = [0u32; MAX_EXT_DEGREE];
        let mut rest = k;
        for d in digits.iter_mut().take(self.m) {
            *d = (rest % self.p) as u32;
            rest /= self.p;
        }
        Ok(FieldElement {
            p: self.p as u32,
            m: self.m as u8,
            digits,
        })
    }

    pub fn from_digits(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() != self.m {
            return Err(Error::LengthMismatch {
                expected: self.m,
                got: coeffs.len(),
            });
        }
        let mut digits = [0u32; MAX_EXT_DEGREE];
        for (d, &c) in digits.iter_mut().zip(coeffs) {
            if c >= self.p {
                return Err(Error::IndexOutOfRange {
                    index: c,
                    size: self.p,
                });
            }
            *d = c as u32;
        }
        Ok(FieldElement {
            p: self.p as u32,
            m: self.m as u8,
            digits,
        })
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0).expect("0 < order")
    }

    pub fn one(&self) -> FieldElement {
        self.element(1).expect("1 < order")
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order).map(|k| self.element(k).expect("k < order"))
    }

    pub fn contains(&self, a: &FieldElement) -> bool {
        a.p as u64 == self.p && a.m as usize == self.m
    }

    fn check(&self, a: &FieldElement, b: &FieldElement) {
        assert!(
            self.contains(a) && a.same_field(b),
            "field mismatch: F_{}^{} vs ({},{}) and ({},{})",
            self.p,
            self.m,
            a.p,
            a.m,
            b.p,
            b.m
        );
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(&a, &b);
        let mut digits = [0u32; MAX_EXT_DEGREE];
        for i in 0..self.m {
            digits[i] = ((a.digits[i] as u64 + b.digits[i] as u64) % self.p) as u32;
        }
        FieldElement {
            p: a.p,
            m: a.m,
            digits,
        }
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(&a, &b);
        let mut digits = [0u32; MAX_EXT_DEGREE];
        for i in 0..self.m {
            digits[i] = ((a.digits[i] as u64 + self.p - b.digits[i] as u64) % self.p) as u32;
        }
        FieldElement {
            p: a.p,
            m: a.m,
            digits,
        }
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.sub(self.zero(), a)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(&a, &b);
        if self.m == 1 {
            let mut digits = [0u32; MAX_EXT_DEGREE];
            digits[0] = ((a.digits[0] as u64 * b.digits[0] as u64) % self.p) as u32;
            return FieldElement {
                p: a.p,
                m: a.m,
                digits,
            };
        }
        // Schoolbook product, then reduce high coefficients with the monic
        // modulus: x^m = -(modulus[m-1] x^{m-1} + ... + modulus[0]).
        let mut prod = [0u64; 2 * MAX_EXT_DEGREE - 1];
        for i in 0..self.m {
            if a.digits[i] == 0 {
                continue;
            }
            for j in 0..self.m {
                prod[i + j] = (prod[i + j] + a.digits[i] as u64 * b.digits[j] as u64) % self.p;
            }
        }
        for i in (self.m..2 * self.m - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..self.m {
                let sub = c * self.modulus[j] % self.p;
                prod[i - self.m + j] = (prod[i - self.m + j] + self.p - sub) % self.p;
            }
        }
        let mut digits = [0u32; MAX_EXT_DEGREE];
        for i in 0..self.m {
            digits[i] = prod[i] as u32;
        }
        FieldElement {
            p: a.p,
            m: a.m,
            digits,
        }
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        // a^(q-2) = a^{-1} in F_q.
        Ok(self.pow(a, self.order - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn checked_pow(p: u64, m: usize) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..m {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

/// Smallest monic irreducible of degree m over F_p, enumerated by the
/// integer encoding of the low m coefficients.
fn canonical_modulus(p: u64, m: usize) -> Option<Vec<u64>> {
    let count = checked_pow(p, m)?;
    for k in 0..count {
        let mut cand = vec![0u64; m + 1];
        let mut rest = k;
        for c in cand.iter_mut().take(m) {
            *c = rest % p;
            rest /= p;
        }
        cand[m] = 1;
        if is_irreducible(&cand, p) {
            return Some(cand);
        }
    }
    None
}

/// Exhaustive factor check: trial division by every monic polynomial of
/// degree 1..=m/2 over F_p. For m <= 3 this degenerates to a root check.
fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let m = poly.len() - 1;
    for d in 1..=m / 2 {
        let count = checked_pow(p, d).expect("within caps");
        for k in 0..count {
            let mut div = vec![0u64; d + 1];
            let mut rest = k;
            for c in div.iter_mut().take(d) {
                *c = rest % p;
                rest /= p;
            }
            div[d] = 1;
            if prime_poly_rem_is_zero(poly, &div, p) {
                return false;
            }
        }
    }
    true
}

/// Whether `div` (monic) divides `poly` exactly over F_p.
fn prime_poly_rem_is_zero(poly: &[u64], div: &[u64], p: u64) -> bool {
    let mut rem: Vec<u64> = poly.to_vec();
    let d = div.len() - 1;
    while rem.len() > d {
        let lead = *rem.last().expect("nonempty");
        let deg = rem.len() - 1;
        if lead != 0 {
            for j in 0..d {
                let sub = lead * div[j] % p;
                rem[deg - d + j] = (rem[deg - d + j] + p - sub) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}
