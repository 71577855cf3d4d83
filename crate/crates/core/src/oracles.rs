//! Structured oracle builders: constrained-interpolation (CIP) tables over
//! a locator subset and noisy-polynomial-interpolation (NPIP) tables over
//! the whole field, with planted-instance generators for experiments.

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{is_prime, Field};
use crate::poly::UniPoly;
use crate::rng::substream;
use crate::table::CorruptedTable;

/// A CIP point set turned into a measurement table over its distinct
/// abscissae, plus the bias implied by the agreement target.
#[derive(Clone, Debug)]
pub struct CipOracle {
    pub q: u64,
    /// Points of A; the distinguished point is the unique one on a row of
    /// degree 1.
    pub points: Vec<(u64, u64)>,
    pub distinguished: (u64, u64),
    /// Distinct abscissae of A, ascending; the table's rows.
    pub locators: Vec<u64>,
    pub table: CorruptedTable,
    /// Agreement target e of the instance.
    pub agreement: usize,
    /// (e + 2) / (2 |D|) - 1/q.
    pub epsilon: f64,
}

/// Builds the CIP table: row x gives probability 1/deg_A(x) to each y with
/// (x, y) in A and 0 elsewhere. Requires the degree condition: exactly one
/// abscissa of degree 1, all others of degree 2.
pub fn cip_oracle(points: &[(u64, u64)], q: u64, agreement: usize) -> Result<CipOracle> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if points.is_empty() {
        return Err(Error::InvalidParameter("empty point set".into()));
    }
    for (i, &(x, y)) in points.iter().enumerate() {
        if x >= q || y >= q {
            return Err(Error::IndexOutOfRange {
                index: x.max(y),
                size: q,
            });
        }
        if points[..i].contains(&(x, y)) {
            return Err(Error::InvalidParameter(format!(
                "duplicate point ({x}, {y})"
            )));
        }
    }
    let mut locators: Vec<u64> = points.iter().map(|&(x, _)| x).collect();
    locators.sort_unstable();
    locators.dedup();
    let degree = |x: u64| points.iter().filter(|&&(px, _)| px == x).count();
    let mut distinguished = None;
    for &x in &locators {
        match degree(x) {
            1 => {
                if distinguished.is_some() {
                    return Err(Error::InvalidParameter(
                        "more than one abscissa of degree 1".into(),
                    ));
                }
                let &(px, py) = points.iter().find(|&&(px, _)| px == x).expect("degree 1");
                distinguished = Some((px, py));
            }
            2 => {}
            d => {
                return Err(Error::InvalidParameter(format!(
                    "abscissa {x} has degree {d}, want 1 or 2"
                )))
            }
        }
    }
    let distinguished =
        distinguished.ok_or_else(|| Error::InvalidParameter("no abscissa of degree 1".into()))?;
    let rows = locators
        .iter()
        .map(|&x| {
            let d = degree(x) as f64;
            let mut row = vec![0.0; q as usize];
            for &(px, py) in points {
                if px == x {
                    row[py as usize] = 1.0 / d;
                }
            }
            row
        })
        .collect();
    let table = CorruptedTable::from_rows(q, rows, None)?;
    let ell = locators.len() as f64;
    let epsilon = (agreement as f64 + 2.0) / (2.0 * ell) - 1.0 / q as f64;
    Ok(CipOracle {
        q,
        points: points.to_vec(),
        distinguished,
        locators,
        table,
        agreement,
        epsilon,
    })
}

impl CipOracle {
    /// How many points of A a polynomial passes through, and whether the
    /// distinguished point is among them.
    pub fn agreement_of(&self, field: &Field, poly: &UniPoly) -> Result<(usize, bool)> {
        let mut hits = 0;
        let mut hits_distinguished = false;
        for &(x, y) in &self.points {
            if poly.eval(field.element(x)?, field).index() == y {
                hits += 1;
                if (x, y) == self.distinguished {
                    hits_distinguished = true;
                }
            }
        }
        Ok((hits, hits_distinguished))
    }

    /// Presence averaged over the locator rows only.
    pub fn presence_over_locators(&self, field: &Field, poly: &UniPoly) -> Result<f64> {
        let symbols = self
            .locators
            .iter()
            .map(|&x| Ok(poly.eval(field.element(x)?, field).index()))
            .collect::<Result<Vec<u64>>>()?;
        self.table.presence(&symbols)
    }
}

/// Plants a degree-<= d polynomial through the distinguished point and
/// exactly `agreement` of the degree-2 rows; remaining rows get two decoy
/// values. Needs q >= 3 unless every row is hit.
pub fn cip_plant(
    q: u64,
    degree_bound: usize,
    num_locators: usize,
    agreement: usize,
    seed: u64,
) -> Result<(CipOracle, Vec<u64>)> {
    let field = Field::new(q, 1)?;
    if num_locators == 0 || num_locators as u64 > q {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= locators <= q, got {num_locators}"
        )));
    }
    if agreement + 1 > num_locators {
        return Err(Error::InvalidParameter(format!(
            "agreement {agreement} too large for {num_locators} locators"
        )));
    }
    if q < 3 && agreement + 1 < num_locators {
        return Err(Error::InvalidParameter(
            "over F_2 every degree-2 row contains the planted value".into(),
        ));
    }
    let mut rng = substream(seed, 0);
    let mut xs: Vec<u64> = (0..q).collect();
    xs.shuffle(&mut rng);
    let xs = &xs[..num_locators];
    let coeffs: Vec<u64> = (0..=degree_bound as u64)
        .map(|_| rng.random_range(0..q))
        .collect();
    let poly = UniPoly::from_indices(&field, &coeffs)?;
    let eval = |x: u64| poly.eval(field.element(x).unwrap(), &field).index();

    let mut points = vec![(xs[0], eval(xs[0]))];
    for (i, &x) in xs.iter().enumerate().skip(1) {
        let px = eval(x);
        if i <= agreement {
            // Planted hit plus one decoy.
            let decoy = loop {
                let y = rng.random_range(0..q);
                if y != px {
                    break y;
                }
            };
            points.push((x, px));
            points.push((x, decoy));
        } else {
            // Two decoys, both avoiding the planted value.
            let d1 = loop {
                let y = rng.random_range(0..q);
                if y != px {
                    break y;
                }
            };
            let d2 = loop {
                let y = rng.random_range(0..q);
                if y != px && y != d1 {
                    break y;
                }
            };
            points.push((x, d1));
            points.push((x, d2));
        }
    }
    let oracle = cip_oracle(&points, q, agreement)?;
    Ok((oracle, coeffs))
}

/// An NPIP promise instance: n locators, one candidate set of size m per
/// locator, and the unique hidden polynomial hitting every set.
#[derive(Clone, Debug)]
pub struct NpipInstance {
    pub q: u64,
    pub locators: Vec<u64>,
    pub sets: Vec<Vec<u64>>,
    pub set_size: usize,
    pub degree_bound: usize,
    pub hidden: Vec<u64>,
}

/// Builds the NPIP table over all of F_q: probability 1/m on each member
/// of S_i at locator x_i, uniform elsewhere.
pub fn npip_oracle(q: u64, locators: &[u64], sets: &[Vec<u64>]) -> Result<CorruptedTable> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if locators.len() != sets.len() {
        return Err(Error::LengthMismatch {
            expected: locators.len(),
            got: sets.len(),
        });
    }
    let m = sets.first().map_or(0, Vec::len);
    if m == 0 {
        return Err(Error::InvalidParameter("empty candidate sets".into()));
    }
    for (i, &x) in locators.iter().enumerate() {
        if x >= q {
            return Err(Error::IndexOutOfRange { index: x, size: q });
        }
        if locators[..i].contains(&x) {
            return Err(Error::DuplicateAbscissa);
        }
    }
    for s in sets {
        if s.len() != m {
            return Err(Error::LengthMismatch {
                expected: m,
                got: s.len(),
            });
        }
        for (i, &y) in s.iter().enumerate() {
            if y >= q {
                return Err(Error::IndexOutOfRange { index: y, size: q });
            }
            if s[..i].contains(&y) {
                return Err(Error::InvalidParameter("duplicate set member".into()));
            }
        }
    }
    let rows = (0..q)
        .map(|x| match locators.iter().position(|&l| l == x) {
            Some(i) => {
                let mut row = vec![0.0; q as usize];
                for &y in &sets[i] {
                    row[y as usize] = 1.0 / m as f64;
                }
                row
            }
            None => vec![1.0 / q as f64; q as usize],
        })
        .collect();
    CorruptedTable::from_rows(q, rows, None)
}

impl NpipInstance {
    /// Generates a promise instance: decoys are redrawn until the hidden
    /// polynomial is the unique degree-<= k polynomial hitting every set.
    pub fn generate(q: u64, n: usize, m: usize, k: usize, seed: u64) -> Result<NpipInstance> {
        let field = Field::new(q, 1)?;
        if n == 0 || n as u64 > q {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= n <= q, got n={n}"
            )));
        }
        if m == 0 || m as u64 > q {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= m <= q, got m={m}"
            )));
        }
        let candidates = (q as u128).pow(k as u32 + 1);
        if candidates > 1 << 24 {
            return Err(Error::CapExceeded {
                size: u64::MAX,
                cap: 1 << 24,
            });
        }
        let mut rng = substream(seed, 0);
        let mut xs: Vec<u64> = (0..q).collect();
        xs.shuffle(&mut rng);
        let mut locators: Vec<u64> = xs[..n].to_vec();
        locators.sort_unstable();
        let hidden: Vec<u64> = (0..=k as u64).map(|_| rng.random_range(0..q)).collect();
        let poly = UniPoly::from_indices(&field, &hidden)?;

        for _attempt in 0..200 {
            let sets: Vec<Vec<u64>> = locators
                .iter()
                .map(|&x| {
                    let hit = poly.eval(field.element(x).unwrap(), &field).index();
                    let mut s = vec![hit];
                    while s.len() < m {
                        let y = rng.random_range(0..q);
                        if !s.contains(&y) {
                            s.push(y);
                        }
                    }
                    s.sort_unstable();
                    s
                })
                .collect();
            let inst = NpipInstance {
                q,
                locators: locators.clone(),
                sets,
                set_size: m,
                degree_bound: k,
                hidden: hidden.clone(),
            };
            if inst.hitting_polynomials()?.len() == 1 {
                return Ok(inst);
            }
        }
        Err(Error::InvalidParameter(
            "could not isolate a unique hidden polynomial; lower m or raise n".into(),
        ))
    }

    pub fn table(&self) -> Result<CorruptedTable> {
        npip_oracle(self.q, &self.locators, &self.sets)
    }

    /// Presence of a degree-<= k polynomial in the NPIP table, in exact
    /// rational arithmetic.
    pub fn presence_exact(&self, coeffs: &[u64]) -> Result<Ratio<i64>> {
        let field = Field::new(self.q, 1)?;
        let poly = UniPoly::from_indices(&field, coeffs)?;
        let hits = self
            .locators
            .iter()
            .zip(&self.sets)
            .filter(|(&x, s)| s.contains(&poly.eval(field.element(x).unwrap(), &field).index()))
            .count() as i64;
        let q = self.q as i64;
        let n = self.locators.len() as i64;
        let m = self.set_size as i64;
        // (1/q) * (hits/m + (q - n)/q)
        Ok((Ratio::new(hits, m) + Ratio::new(q - n, q)) / Ratio::from_integer(q))
    }

    /// All degree-<= k polynomials hitting every candidate set, by brute
    /// force; the promise holds iff this is exactly the hidden one.
    pub fn hitting_polynomials(&self) -> Result<Vec<Vec<u64>>> {
        let field = Field::new(self.q, 1)?;
        let count = (self.q as u128).pow(self.degree_bound as u32 + 1) as u64;
        let mut out = Vec::new();
        for idx in 0..count {
            let mut coeffs = Vec::with_capacity(self.degree_bound + 1);
            let mut rest = idx;
            for _ in 0..=self.degree_bound {
                coeffs.push(rest % self.q);
                rest /= self.q;
            }
            let poly = UniPoly::from_indices(&field, &coeffs)?;
            let all_hit =
                self.locators.iter().zip(&self.sets).all(|(&x, s)| {
                    s.contains(&poly.eval(field.element(x).unwrap(), &field).index())
                });
            if all_hit {
                out.push(coeffs);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn cip_single_point_is_deterministic_row() {
        let oracle = cip_oracle(&[(3, 4)], 7, 0).unwrap();
        assert_eq!(oracle.locators, vec![3]);
        assert_eq!(oracle.table.prob(0, 4), 1.0);
        assert_eq!(oracle.distinguished, (3, 4));
    }

    #[test]
    fn cip_degree_condition_enforced() {
        // Two degree-1 abscissae.
        assert!(cip_oracle(&[(0, 1), (1, 2)], 5, 0).is_err());
        // Degree 3.
        assert!(cip_oracle(&[(0, 1), (1, 0), (1, 2), (1, 3)], 5, 1).is_err());
    }

    #[test]
    fn cip_planted_presence_meets_the_bias() {
        let q = 11;
        let (oracle, hidden) = cip_plant(q, 2, 5, 3, 99).unwrap();
        let field = Field::new(q, 1).unwrap();
        let poly = UniPoly::from_indices(&field, &hidden).unwrap();
        let (hits, has_distinguished) = oracle.agreement_of(&field, &poly).unwrap();
        assert!(has_distinguished);
        assert_eq!(hits, oracle.agreement + 1);
        let pre = oracle.presence_over_locators(&field, &poly).unwrap();
        let ell = oracle.locators.len() as f64;
        // (1/l)(1 + e/2) = 1/q + epsilon.
        assert!((pre - (1.0 + oracle.agreement as f64 / 2.0) / ell).abs() < 1e-12);
        assert!(pre >= 1.0 / q as f64 + oracle.epsilon - 1e-12);
    }

    #[test]
    fn cip_missing_polynomial_has_zero_presence() {
        let (oracle, hidden) = cip_plant(5, 1, 3, 2, 5).unwrap();
        let field = Field::new(5, 1).unwrap();
        // A polynomial through no A-point: shift the hidden one by a
        // nonzero constant that avoids every decoy.
        'shift: for c in 1..5u64 {
            let shifted: Vec<u64> = {
                let mut v = hidden.clone();
                v[0] = (v[0] + c) % 5;
                v
            };
            let poly = UniPoly::from_indices(&field, &shifted).unwrap();
            let (hits, _) = oracle.agreement_of(&field, &poly).unwrap();
            if hits > 0 {
                continue 'shift;
            }
            let pre = oracle.presence_over_locators(&field, &poly).unwrap();
            assert_eq!(pre, 0.0);
            return;
        }
        panic!("every shift hit a decoy; adjust the seed");
    }

    #[test]
    fn npip_presence_formula_exact() {
        let inst = NpipInstance::generate(11, 7, 3, 2, 42).unwrap();
        let pre = inst.presence_exact(&inst.hidden).unwrap();
        let q = 11i64;
        let n = 7i64;
        let m = 3i64;
        let expect = Ratio::new(1, q) + Ratio::new(n, q) * (Ratio::new(1, m) - Ratio::new(1, q));
        assert_eq!(pre, expect);

        // Table presence agrees with the exact value.
        let table = inst.table().unwrap();
        let field = Field::new(11, 1).unwrap();
        let poly = UniPoly::from_indices(&field, &inst.hidden).unwrap();
        let cw: Vec<u64> = (0..11)
            .map(|x| poly.eval(field.element(x).unwrap(), &field).index())
            .collect();
        let float_pre = table.presence(&cw).unwrap();
        let exact = *pre.numer() as f64 / *pre.denom() as f64;
        assert!((float_pre - exact).abs() < 1e-12);
    }

    #[test]
    fn npip_uniform_and_deterministic_degenerations() {
        // m = q: every set is all of F_q, the table is uniform.
        let q = 5u64;
        let locators: Vec<u64> = (0..q).collect();
        let sets: Vec<Vec<u64>> = (0..q).map(|_| (0..q).collect()).collect();
        let t = npip_oracle(q, &locators, &sets).unwrap();
        for r in 0..q as usize {
            for z in 0..q {
                assert!((t.prob(r, z) - 0.2).abs() < 1e-15);
            }
        }

        // n = q, m = 1: deterministic table, hidden presence 1.
        let inst = NpipInstance::generate(7, 7, 1, 1, 3).unwrap();
        let pre = inst.presence_exact(&inst.hidden).unwrap();
        assert_eq!(pre, Ratio::from_integer(1));
    }

    #[test]
    fn npip_promise_is_unique() {
        let inst = NpipInstance::generate(13, 9, 3, 2, 7).unwrap();
        let hitting = inst.hitting_polynomials().unwrap();
        assert_eq!(hitting, vec![inst.hidden.clone()]);
    }
}
