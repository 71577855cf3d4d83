//! The two reductions between corruption tables of a code C over F_{q^m}
//! and its Hadamard concatenation D(x, (r, s)) = C(x, r) . s mod q.
//!
//! Peeling inverts the inner Hadamard layer: phase-encode each inner row,
//! undo the encoding oracle, and Fourier-transform the inner index back
//! into a symbol of F_{q^m}. On measurement tables this whole pipeline only
//! depends on the row probabilities, so it is computed directly from them.
//! Lifting is the exact converse embedding; it obeys the affine presence
//! law Pre_D = 1/q + (1 - 1/q) Pre_C with no loss.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::table::CorruptedTable;

/// Phase-encoding coefficients of one (multiplier, outer index) pair.
///
/// `gamma[w]` is (1/q^m) sum_{s,z} omega^{k(z - w.s)} p(r, s, z); the
/// residual weight `delta_norm_sq` is what the inverse oracle call fails
/// to return to the work registers. Normalization forces
/// sum_w |gamma|^2 + delta_norm_sq = 1.
#[derive(Clone, Debug)]
pub struct GammaDelta {
    pub multiplier: u64,
    pub outer_index: u64,
    pub gamma: Vec<Complex64>,
    pub delta_norm_sq: f64,
}

/// q-th roots of unity with exact conjugate symmetry.
fn roots_of_unity(q: u64) -> Vec<Complex64> {
    let mut table = vec![Complex64::new(1.0, 0.0); q as usize];
    for j in 1..=q / 2 {
        let angle = 2.0 * std::f64::consts::PI * j as f64 / q as f64;
        let w = Complex64::new(angle.cos(), angle.sin());
        table[j as usize] = w;
        table[(q - j) as usize] = w.conj();
    }
    table
}

struct FactoredShape {
    q: u64,
    m: usize,
    /// q^m
    outer: u64,
    /// Little-endian base-q digits of every index below q^m.
    digits: Vec<Vec<u64>>,
}

impl FactoredShape {
    fn of(table: &CorruptedTable) -> Result<FactoredShape> {
        let m = table.factored_m().ok_or_else(|| {
            Error::InvalidParameter("table lacks the factored (outer, inner) index".into())
        })?;
        let q = table.alphabet();
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        let outer = q.pow(m as u32);
        if table.block_len() != outer * outer {
            return Err(Error::LengthMismatch {
                expected: (outer * outer) as usize,
                got: table.block_len() as usize,
            });
        }
        Ok(FactoredShape {
            q,
            m,
            outer,
            digits: digit_table(q, m),
        })
    }

    fn dot(&self, a: u64, b: u64) -> u64 {
        let da = &self.digits[a as usize];
        let db = &self.digits[b as usize];
        let mut acc = 0;
        for i in 0..self.m {
            acc = (acc + da[i] * db[i]) % self.q;
        }
        acc
    }
}

fn digit_table(q: u64, m: usize) -> Vec<Vec<u64>> {
    (0..q.pow(m as u32))
        .map(|k| {
            let mut rest = k;
            (0..m)
                .map(|_| {
                    let d = rest % q;
                    rest /= q;
                    d
                })
                .collect()
        })
        .collect()
}

/// Phase-encoding coefficients for multiplier `k` in [1, q-1] at outer
/// index `r` of a factored table.
pub fn gamma_delta(table: &CorruptedTable, k: u64, outer_index: u64) -> Result<GammaDelta> {
    let shape = FactoredShape::of(table)?;
    if k == 0 || k >= shape.q {
        return Err(Error::InvalidParameter(format!(
            "multiplier {k} outside [1, {}]",
            shape.q - 1
        )));
    }
    if outer_index >= shape.outer {
        return Err(Error::IndexOutOfRange {
            index: outer_index,
            size: shape.outer,
        });
    }
    let omega = roots_of_unity(shape.q);
    let q = shape.q;
    let qm = shape.outer;
    let base_row = (outer_index * qm) as usize;

    // Residual weight via the per-inner-row sums B_s = q^{-m/2} sum_z w^{kz} p.
    // |B_s|^2 is expanded pairwise so that a point-mass row yields an exact
    // 1 (the z = z' term) instead of cos^2 + sin^2 rounding.
    let mut b_total = 0.0;
    for s in 0..qm {
        let row = table.row(base_row + s as usize);
        let mut norm_sq = 0.0;
        for (z, &pz) in row.iter().enumerate() {
            if pz == 0.0 {
                continue;
            }
            for (z2, &pz2) in row.iter().enumerate() {
                if pz2 != 0.0 {
                    let e = (k * ((z as u64 + q - z2 as u64) % q) % q) as usize;
                    norm_sq += omega[e].re * pz * pz2;
                }
            }
        }
        b_total += norm_sq;
    }
    let delta_norm_sq = (1.0 - b_total / qm as f64).clamp(0.0, 1.0);

    // gamma accumulated with the combined exponent so that matching terms
    // contribute an exact 1.
    let mut gamma = Vec::with_capacity(qm as usize);
    for w in 0..qm {
        let mut acc = Complex64::new(0.0, 0.0);
        for s in 0..qm {
            let row = table.row(base_row + s as usize);
            let shift = (q - shape.dot(w, s)) % q;
            for (z, &p) in row.iter().enumerate() {
                if p != 0.0 {
                    acc += omega[(k * ((z as u64 + shift) % q) % q) as usize] * p;
                }
            }
        }
        gamma.push(acc / qm as f64);
    }
    Ok(GammaDelta {
        multiplier: k,
        outer_index,
        gamma,
        delta_norm_sq,
    })
}

/// Converts a factored table for D into a table for the outer code C over
/// the alphabet F_{q^m}: the induced measurement distribution
/// p'(r, w) = (1/(q-1)) sum_k (|gamma_{k,r,w}|^2 + q^{-m} |Delta_{k,r}|^2).
pub fn peel_hadamard(table: &CorruptedTable) -> Result<CorruptedTable> {
    let shape = FactoredShape::of(table)?;
    let qm = shape.outer;
    let mut rows = Vec::with_capacity(qm as usize);
    for r in 0..qm {
        let mut row = vec![0.0; qm as usize];
        for k in 1..shape.q {
            let gd = gamma_delta(table, k, r)?;
            let spread = gd.delta_norm_sq / qm as f64;
            for (w, g) in gd.gamma.iter().enumerate() {
                row[w] += g.norm_sqr() + spread;
            }
        }
        for cell in &mut row {
            *cell /= (shape.q - 1) as f64;
        }
        rows.push(row);
    }
    CorruptedTable::from_rows(qm, rows, None)
}

/// Embeds a table for C (alphabet q^m at q^m outer indices) into one for D:
/// p'((r, s), y) = sum over symbols z with z . s = y of p(r, z).
pub fn lift_hadamard(table: &CorruptedTable, q: u64, m: usize) -> Result<CorruptedTable> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let qm = q.pow(m as u32);
    if table.alphabet() != qm || table.block_len() != qm {
        return Err(Error::InvalidParameter(format!(
            "lift needs a q^m x q^m table for q={q}, m={m}; got {} rows over {}",
            table.block_len(),
            table.alphabet()
        )));
    }
    let digits = digit_table(q, m);
    let dot = |a: u64, b: u64| {
        let da = &digits[a as usize];
        let db = &digits[b as usize];
        let mut acc = 0;
        for i in 0..m {
            acc = (acc + da[i] * db[i]) % q;
        }
        acc
    };
    let mut rows = Vec::with_capacity((qm * qm) as usize);
    for r in 0..qm {
        let src = table.row(r as usize);
        for s in 0..qm {
            let mut row = vec![0.0; q as usize];
            for (z, &p) in src.iter().enumerate() {
                row[dot(z as u64, s) as usize] += p;
            }
            rows.push(row);
        }
    }
    CorruptedTable::from_rows(q, rows, Some(m))
}

/// Hadamard concatenation of an outer codeword vector: entry (r, s) is
/// a_r . s over the digit expansion.
pub fn concat_codeword(outer: &[u64], q: u64, m: usize) -> Result<Vec<u64>> {
    let qm = q.pow(m as u32);
    if outer.len() != qm as usize {
        return Err(Error::LengthMismatch {
            expected: qm as usize,
            got: outer.len(),
        });
    }
    let digits = digit_table(q, m);
    let mut out = Vec::with_capacity((qm * qm) as usize);
    for &a in outer {
        if a >= qm {
            return Err(Error::IndexOutOfRange { index: a, size: qm });
        }
        for s in 0..qm {
            let mut acc = 0;
            for i in 0..m {
                acc = (acc + digits[a as usize][i] * digits[s as usize][i]) % q;
            }
            out.push(acc);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use crate::table::CorruptedTable;
    use rand::Rng;

    fn random_outer_word(q: u64, m: usize, rng: &mut impl Rng) -> Vec<u64> {
        let qm = q.pow(m as u32);
        (0..qm).map(|_| rng.random_range(0..qm)).collect()
    }

    #[test]
    fn gamma_delta_on_uniform_table() {
        for (q, m) in [(2u64, 1usize), (3, 1), (5, 1), (2, 2), (3, 2)] {
            let qm = q.pow(m as u32);
            let t = CorruptedTable::uniform(qm * qm, q, Some(m)).unwrap();
            for k in 1..q {
                let gd = gamma_delta(&t, k, 0).unwrap();
                assert!(gd.gamma.iter().all(|g| g.norm() < 1e-12));
                assert!((gd.delta_norm_sq - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gamma_delta_on_deterministic_table() {
        let (q, m) = (3u64, 1usize);
        let mut rng = substream(5, 0);
        let outer = random_outer_word(q, m, &mut rng);
        let cw = concat_codeword(&outer, q, m).unwrap();
        let t = CorruptedTable::embed(&cw, q, Some(m)).unwrap();
        for k in 1..q {
            for (r, &a) in outer.iter().enumerate() {
                let gd = gamma_delta(&t, k, r as u64).unwrap();
                assert!(gd.delta_norm_sq.abs() < 1e-12);
                for (w, g) in gd.gamma.iter().enumerate() {
                    let want = if w as u64 == a { 1.0 } else { 0.0 };
                    assert!((g.norm() - want).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn gamma_delta_parseval() {
        let mut rng = substream(17, 0);
        for (q, m) in [(2u64, 1usize), (3, 1), (5, 1), (2, 2), (5, 2)] {
            let qm = q.pow(m as u32);
            let t = CorruptedTable::random(qm * qm, q, Some(m), &mut rng).unwrap();
            for k in 1..q {
                let gd = gamma_delta(&t, k, rng.random_range(0..qm)).unwrap();
                let total: f64 =
                    gd.gamma.iter().map(Complex64::norm_sqr).sum::<f64>() + gd.delta_norm_sq;
                assert!((total - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn peel_of_deterministic_is_deterministic() {
        for (q, m) in [(2u64, 1usize), (2, 2), (3, 1), (5, 1)] {
            let mut rng = substream(23, q * 8 + m as u64);
            let outer = random_outer_word(q, m, &mut rng);
            let cw = concat_codeword(&outer, q, m).unwrap();
            let t = CorruptedTable::embed(&cw, q, Some(m)).unwrap();
            let peeled = peel_hadamard(&t).unwrap();
            assert_eq!(peeled.presence(&outer).unwrap(), 1.0);
            for (r, &a) in outer.iter().enumerate() {
                assert_eq!(peeled.prob(r, a), 1.0);
            }
        }
    }

    #[test]
    fn peel_of_uniform_is_uniform() {
        for (q, m) in [(2u64, 2usize), (3, 1), (5, 1)] {
            let qm = q.pow(m as u32);
            let t = CorruptedTable::uniform(qm * qm, q, Some(m)).unwrap();
            let peeled = peel_hadamard(&t).unwrap();
            for r in 0..qm as usize {
                for w in 0..qm {
                    assert!((peeled.prob(r, w) - 1.0 / qm as f64).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn peel_presence_bound_on_random_tables() {
        let mut rng = substream(31, 0);
        for (q, m) in [(2u64, 1usize), (2, 2), (3, 1), (3, 2), (5, 1)] {
            let qm = q.pow(m as u32);
            for _ in 0..40 {
                let t = CorruptedTable::random(qm * qm, q, Some(m), &mut rng).unwrap();
                let outer = random_outer_word(q, m, &mut rng);
                let cw = concat_codeword(&outer, q, m).unwrap();
                let pre_d = t.presence(&cw).unwrap();
                if pre_d < 1.0 / q as f64 {
                    continue;
                }
                let peeled = peel_hadamard(&t).unwrap();
                let pre_c = peeled.presence(&outer).unwrap();
                let factor = (q * q) as f64 / ((q - 1) as f64).powi(3);
                let bound = factor * (pre_d - 1.0 / q as f64).powi(2);
                assert!(
                    pre_c >= bound - 1e-12,
                    "peel bound violated: q={q} m={m} pre_d={pre_d} pre_c={pre_c} bound={bound}"
                );
            }
        }
    }

    #[test]
    fn lift_affine_presence_law() {
        let mut rng = substream(37, 0);
        for (q, m) in [(2u64, 1usize), (2, 2), (3, 1), (3, 2), (5, 1), (5, 2)] {
            let qm = q.pow(m as u32);
            for _ in 0..25 {
                let tc = CorruptedTable::random(qm, qm, None, &mut rng).unwrap();
                let td = lift_hadamard(&tc, q, m).unwrap();
                let outer = random_outer_word(q, m, &mut rng);
                let cw = concat_codeword(&outer, q, m).unwrap();
                let pre_c = tc.presence(&outer).unwrap();
                let pre_d = td.presence(&cw).unwrap();
                let law = 1.0 / q as f64 + (1.0 - 1.0 / q as f64) * pre_c;
                assert!(
                    (pre_d - law).abs() < 1e-12,
                    "affine law broken: q={q} m={m} pre_c={pre_c} pre_d={pre_d}"
                );
            }
        }
    }

    #[test]
    fn lift_special_cases() {
        let (q, m) = (3u64, 1usize);
        let qm = q.pow(m as u32);
        // Presence 1 maps to presence 1.
        let mut rng = substream(41, 0);
        let outer = random_outer_word(q, m, &mut rng);
        let tc = CorruptedTable::embed(&outer, qm, None).unwrap();
        let td = lift_hadamard(&tc, q, m).unwrap();
        let cw = concat_codeword(&outer, q, m).unwrap();
        assert_eq!(td.presence(&cw).unwrap(), 1.0);

        // Uniform input: presence of every lifted codeword is
        // 1/q + (1-1/q) q^{-m}.
        let tu = CorruptedTable::uniform(qm, qm, None).unwrap();
        let td = lift_hadamard(&tu, q, m).unwrap();
        let want = 1.0 / q as f64 + (1.0 - 1.0 / q as f64) / qm as f64;
        for trial in 0..10 {
            let outer = random_outer_word(q, m, &mut substream(43, trial));
            let cw = concat_codeword(&outer, q, m).unwrap();
            assert!((td.presence(&cw).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn peel_after_lift_recovers_exact_codewords() {
        for (q, m) in [(2u64, 2usize), (3, 1), (5, 1)] {
            let qm = q.pow(m as u32);
            let mut rng = substream(47, q + m as u64);
            let outer = random_outer_word(q, m, &mut rng);
            let tc = CorruptedTable::embed(&outer, qm, None).unwrap();
            let lifted = lift_hadamard(&tc, q, m).unwrap();
            let back = peel_hadamard(&lifted).unwrap();
            assert!((back.presence(&outer).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn row_sums_stay_normalized() {
        let mut rng = substream(53, 0);
        for (q, m) in [(2u64, 2usize), (3, 2), (5, 1)] {
            let qm = q.pow(m as u32);
            let t = CorruptedTable::random(qm * qm, q, Some(m), &mut rng).unwrap();
            let peeled = peel_hadamard(&t).unwrap();
            for r in 0..peeled.block_len() as usize {
                let sum: f64 = peeled.row(r).iter().sum();
                assert!((sum - 1.0).abs() < 1e-10);
            }
            let tc = CorruptedTable::random(qm, qm, None, &mut rng).unwrap();
            let lifted = lift_hadamard(&tc, q, m).unwrap();
            for r in 0..lifted.block_len() as usize {
                let sum: f64 = lifted.row(r).iter().sum();
                assert!((sum - 1.0).abs() < 1e-10);
            }
        }
    }
}
