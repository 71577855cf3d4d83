//! Measurement tables: the classical shadow of a corrupted encoding oracle.
//!
//! A table holds, for each codeword index r, the probability of observing
//! each alphabet symbol z when the oracle is measured at r. Rows are
//! row-stochastic within [`ROW_SUM_TOL`]. Tables built from a concatenated
//! code additionally carry the factored index structure (outer, inner) via
//! `factored_m`.

use rand::Rng;

use crate::codes::BlockCode;
use crate::error::{Error, Result};

/// Tolerance on row sums of stored tables.
pub const ROW_SUM_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct CorruptedTable {
    alphabet: u64,
    rows: Vec<Vec<f64>>,
    factored_m: Option<usize>,
}

/// Compensated (Kahan) summation; presence identities are asserted to
/// 1e-12, which plain summation does not leave enough headroom for.
pub(crate) fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

impl CorruptedTable {
    pub fn from_rows(
        alphabet: u64,
        rows: Vec<Vec<f64>>,
        factored_m: Option<usize>,
    ) -> Result<CorruptedTable> {
        if alphabet < 2 {
            return Err(Error::InvalidParameter("alphabet size below 2".into()));
        }
        if let Some(m) = factored_m {
            let qm = (alphabet as f64).powi(m as i32);
            let expect = qm * qm;
            if m == 0 || rows.len() as f64 != expect {
                return Err(Error::InvalidParameter(format!(
                    "factored table needs q^(2m) = {expect} rows, got {}",
                    rows.len()
                )));
            }
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != alphabet as usize {
                return Err(Error::LengthMismatch {
                    expected: alphabet as usize,
                    got: row.len(),
                });
            }
            if row.iter().any(|&p| !p.is_finite() || p < 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "row {r} has a negative or non-finite probability"
                )));
            }
            let sum = kahan_sum(row.iter().copied());
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::RowNotNormalized { row: r, sum });
            }
        }
        Ok(CorruptedTable {
            alphabet,
            rows,
            factored_m,
        })
    }

    pub fn uniform(
        block_len: u64,
        alphabet: u64,
        factored_m: Option<usize>,
    ) -> Result<CorruptedTable> {
        let p = 1.0 / alphabet as f64;
        CorruptedTable::from_rows(
            alphabet,
            vec![vec![p; alphabet as usize]; block_len as usize],
            factored_m,
        )
    }

    /// Row-stochastic table with independent uniformly random rows.
    pub fn random(
        block_len: u64,
        alphabet: u64,
        factored_m: Option<usize>,
        rng: &mut impl Rng,
    ) -> Result<CorruptedTable> {
        let rows = (0..block_len)
            .map(|_| {
                let raw: Vec<f64> = (0..alphabet).map(|_| rng.random::<f64>() + 1e-3).collect();
                let sum: f64 = raw.iter().sum();
                raw.into_iter().map(|v| v / sum).collect()
            })
            .collect();
        CorruptedTable::from_rows(alphabet, rows, factored_m)
    }

    /// The 0/1 embedding of a codeword: a point mass per row.
    pub fn embed(
        codeword: &[u64],
        alphabet: u64,
        factored_m: Option<usize>,
    ) -> Result<CorruptedTable> {
        let rows = codeword
            .iter()
            .map(|&z| {
                if z >= alphabet {
                    return Err(Error::IndexOutOfRange {
                        index: z,
                        size: alphabet,
                    });
                }
                let mut row = vec![0.0; alphabet as usize];
                row[z as usize] = 1.0;
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        CorruptedTable::from_rows(alphabet, rows, factored_m)
    }

    /// Mixes a point mass on the codeword of `x` with the uniform
    /// distribution: presence of that codeword is lambda + (1-lambda)/q.
    pub fn plant(code: &BlockCode, x: &[u64], lambda: f64) -> Result<CorruptedTable> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidParameter(format!(
                "lambda {lambda} outside [0, 1]"
            )));
        }
        let q = code.alphabet_size();
        let background = (1.0 - lambda) / q as f64;
        let rows = code
            .codeword(x)?
            .into_iter()
            .map(|z| {
                let mut row = vec![background; q as usize];
                row[z as usize] = lambda + background;
                row
            })
            .collect();
        CorruptedTable::from_rows(q, rows, factored_meta(code))
    }

    pub fn alphabet(&self) -> u64 {
        self.alphabet
    }

    pub fn block_len(&self) -> u64 {
        self.rows.len() as u64
    }

    pub fn factored_m(&self) -> Option<usize> {
        self.factored_m
    }

    /// Reinterprets the same rows with a different factoring tag.
    pub fn with_factored_m(&self, factored_m: Option<usize>) -> Result<CorruptedTable> {
        CorruptedTable::from_rows(self.alphabet, self.rows.clone(), factored_m)
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.rows[r]
    }

    pub fn prob(&self, r: usize, z: u64) -> f64 {
        self.rows[r][z as usize]
    }

    fn check_codeword(&self, a: &[u64]) -> Result<()> {
        if a.len() != self.rows.len() {
            return Err(Error::LengthMismatch {
                expected: self.rows.len(),
                got: a.len(),
            });
        }
        for &z in a {
            if z >= self.alphabet {
                return Err(Error::IndexOutOfRange {
                    index: z,
                    size: self.alphabet,
                });
            }
        }
        Ok(())
    }

    /// Average over rows of the probability of the codeword's symbol.
    pub fn presence(&self, a: &[u64]) -> Result<f64> {
        self.check_codeword(a)?;
        let sum = kahan_sum(a.iter().enumerate().map(|(r, &z)| self.rows[r][z as usize]));
        Ok(sum / self.rows.len() as f64)
    }

    /// Extended distance M - <v|w>; on embedded codewords this is the
    /// Hamming distance.
    pub fn ext_distance(&self, other: &CorruptedTable) -> Result<f64> {
        if self.alphabet != other.alphabet || self.rows.len() != other.rows.len() {
            return Err(Error::LengthMismatch {
                expected: self.rows.len(),
                got: other.rows.len(),
            });
        }
        let inner = kahan_sum(
            self.rows
                .iter()
                .zip(&other.rows)
                .flat_map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| x * y)),
        );
        Ok(self.rows.len() as f64 - inner)
    }

    /// Draws one symbol from row `r`. Deterministic given the generator
    /// state; use [`crate::rng::substream`] for per-row streams.
    pub fn sample_row(&self, r: usize, rng: &mut impl Rng) -> u64 {
        let row = &self.rows[r];
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (z, &p) in row.iter().enumerate() {
            acc += p;
            if u < acc {
                return z as u64;
            }
        }
        // Row sums may fall short of u by rounding; the last symbol absorbs it.
        self.alphabet - 1
    }

    /// Line-oriented text format; probabilities at 17 significant digits
    /// round-trip bit-exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::from("QLD-TABLE v1\n");
        match self.factored_m {
            Some(m) => out.push_str(&format!("{} {} {m}\n", self.alphabet, self.rows.len())),
            None => out.push_str(&format!("{} {}\n", self.alphabet, self.rows.len())),
        }
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|p| format!("{p:.16e}")).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<CorruptedTable> {
        let mut lines = text.lines();
        let magic = lines
            .next()
            .ok_or_else(|| Error::Format("empty table".into()))?;
        if magic.trim() != "QLD-TABLE v1" {
            return Err(Error::Format(format!("bad magic line {magic:?}")));
        }
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("missing header".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 2 && fields.len() != 3 {
            return Err(Error::Format("header needs 'q M' or 'q M m'".into()));
        }
        let parse = |s: &str| -> Result<u64> {
            s.parse()
                .map_err(|_| Error::Format(format!("bad integer {s:?}")))
        };
        let q = parse(fields[0])?;
        let m_rows = parse(fields[1])?;
        let factored_m = if fields.len() == 3 {
            Some(parse(fields[2])? as usize)
        } else {
            None
        };
        let mut rows = Vec::with_capacity(m_rows as usize);
        for _ in 0..m_rows {
            let line = lines
                .next()
                .ok_or_else(|| Error::Format(format!("expected {m_rows} rows")))?;
            let row = line
                .split_whitespace()
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|_| Error::Format(format!("bad probability {s:?}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::Format("trailing content after table rows".into()));
        }
        CorruptedTable::from_rows(q, rows, factored_m)
    }
}

/// Factoring tag carried by tables built from a code.
pub fn factored_meta(code: &BlockCode) -> Option<usize> {
    match code.kind() {
        crate::codes::CodeKind::ConcatGrsH { m, .. } => Some(*m),
        _ => None,
    }
}
