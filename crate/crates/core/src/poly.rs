//! Univariate polynomial algebra over a [`Field`].
//!
//! Coefficients are little-endian with the highest index nonzero; the zero
//! polynomial has an empty coefficient list and no degree.

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly {
    coeffs: Vec<FieldElement>,
}

impl UniPoly {
    /// Normalizes (trims trailing zeros).
    pub fn new(coeffs: Vec<FieldElement>) -> UniPoly {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> UniPoly {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElement) -> UniPoly {
        UniPoly::new(vec![c])
    }

    pub fn from_indices(field: &Field, coeffs: &[u64]) -> Result<UniPoly> {
        let coeffs = coeffs
            .iter()
            .map(|&k| field.element(k))
            .collect::<Result<Vec<_>>>()?;
        Ok(UniPoly::new(coeffs))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of x^i, zero beyond the degree.
    pub fn coeff(&self, i: usize, field: &Field) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or_else(|| field.zero())
    }

    /// Coefficient indices padded with zeros to `len`. Errors if the degree
    /// does not fit.
    pub fn coeff_indices(&self, len: usize) -> Result<Vec<u64>> {
        if self.coeffs.len() > len {
            return Err(Error::DegreeOverflow);
        }
        let mut out: Vec<u64> = self.coeffs.iter().map(|c| c.index()).collect();
        out.resize(len, 0);
        Ok(out)
    }

    pub fn add(&self, other: &UniPoly, field: &Field) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| field.add(self.coeff(i, field), other.coeff(i, field)))
            .collect();
        UniPoly::new(coeffs)
    }

    pub fn sub(&self, other: &UniPoly, field: &Field) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| field.sub(self.coeff(i, field), other.coeff(i, field)))
            .collect();
        UniPoly::new(coeffs)
    }

    pub fn mul(&self, other: &UniPoly, field: &Field) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = field.add(coeffs[i + j], field.mul(a, b));
            }
        }
        UniPoly::new(coeffs)
    }

    pub fn scale(&self, c: FieldElement, field: &Field) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|&a| field.mul(a, c)).collect())
    }

    /// Multiplies by x^k.
    pub fn shift_up(&self, k: usize, field: &Field) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![field.zero(); k];
        coeffs.extend_from_slice(&self.coeffs);
        UniPoly::new(coeffs)
    }

    /// Divides by x^k; panics if x^k does not divide self.
    pub fn shift_down(&self, k: usize) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        assert!(
            self.coeffs.iter().take(k).all(FieldElement::is_zero),
            "not divisible by x^{k}"
        );
        UniPoly {
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    /// Largest k with x^k dividing self (0 for the zero polynomial).
    pub fn x_valuation(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn eval(&self, x: FieldElement, field: &Field) -> FieldElement {
        let mut acc = field.zero();
        for &c in self.coeffs.iter().rev() {
            acc = field.add(field.mul(acc, x), c);
        }
        acc
    }

    /// Unique polynomial of degree < #points through all points (Lagrange).
    pub fn interpolate(points: &[(FieldElement, FieldElement)], field: &Field) -> Result<UniPoly> {
        for (i, (xi, _)) in points.iter().enumerate() {
            for (xj, _) in &points[..i] {
                if xi == xj {
                    return Err(Error::DuplicateAbscissa);
                }
            }
        }
        let mut acc = UniPoly::zero();
        for (i, &(xi, yi)) in points.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut num = UniPoly::constant(field.one());
            let mut den = field.one();
            for (j, &(xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                num = num.mul(&UniPoly::new(vec![field.neg(xj), field.one()]), field);
                den = field.mul(den, field.sub(xi, xj));
            }
            let scale = field.mul(yi, field.inv(den)?);
            acc = acc.add(&num.scale(scale, field), field);
        }
        Ok(acc)
    }

    /// All roots in the field, by exhaustive evaluation, ascending by index.
    pub fn roots(&self, field: &Field) -> Vec<FieldElement> {
        field
            .elements()
            .filter(|&x| self.eval(x, field).is_zero())
            .collect()
    }
}
