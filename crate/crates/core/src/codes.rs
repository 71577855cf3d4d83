//! Block code encoders: q-ary Hadamard codes, (normalized) generalized
//! Reed-Solomon codes over arbitrary F_{p^m}, and the GRS-Hadamard
//! concatenation, plus brute-force distance tools.
//!
//! Messages and codeword symbols cross this module's API as canonical
//! integer encodings; index sets are always {0, ..., M-1} with the
//! concatenated code ordered lexicographically by (outer, inner) index.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::UniPoly;

/// Default cap on enumerable message spaces.
pub const MESSAGE_SPACE_CAP: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq)]
pub enum CodeKind {
    /// HAD(q, n): block length q^n over F_q, q prime.
    Hadamard { q: u64, n: usize },
    /// GRS with k distinct locators, message length n <= k, over `field`.
    Grs {
        field: Field,
        n: usize,
        locators: Vec<u64>,
    },
    /// Outer GRS over F_{q^m} at all q^m locators, inner HAD(q, m);
    /// theta is the outer rate as a reduced fraction.
    ConcatGrsH { q: u64, m: usize, theta: (u64, u64) },
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockCode {
    kind: CodeKind,
    message_len: usize,
    block_len: u64,
    /// Field of the codeword alphabet.
    alphabet: Field,
}

/// Inner product sum x_i r_i mod q.
pub fn had_encode(q: u64, x: &[u64], r: &[u64]) -> Result<u64> {
    if !crate::field::is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if x.len() != r.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            got: r.len(),
        });
    }
    let mut acc = 0u64;
    for (&xi, &ri) in x.iter().zip(r) {
        if xi >= q || ri >= q {
            return Err(Error::IndexOutOfRange {
                index: xi.max(ri),
                size: q,
            });
        }
        acc = (acc + xi * ri) % q;
    }
    Ok(acc)
}

fn digits_of(mut k: u64, base: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(k % base);
        k /= base;
    }
    out
}

fn value_of(digits: &[u64], base: u64) -> u64 {
    digits.iter().rev().fold(0, |acc, &d| acc * base + d)
}

impl BlockCode {
    pub fn hadamard(q: u64, n: usize) -> Result<BlockCode> {
        let alphabet = Field::new(q, 1)?;
        if n == 0 {
            return Err(Error::InvalidParameter("message length 0".into()));
        }
        let block_len = n
            .try_into()
            .ok()
            .and_then(|n32: u32| q.checked_pow(n32))
            .filter(|&b| b <= (1 << 30))
            .ok_or_else(|| Error::InvalidParameter(format!("q^n overflow: {q}^{n}")))?;
        Ok(BlockCode {
            kind: CodeKind::Hadamard { q, n },
            message_len: n,
            block_len,
            alphabet,
        })
    }

    /// GRS with the normalized default locator set: the first k field
    /// elements in canonical integer order.
    pub fn grs(field: Field, k: usize, n: usize) -> Result<BlockCode> {
        let locators: Vec<u64> = (0..k as u64).collect();
        Self::grs_with_locators(field, n, locators)
    }

    pub fn grs_with_locators(field: Field, n: usize, locators: Vec<u64>) -> Result<BlockCode> {
        let k = locators.len();
        if n == 0 || n > k || k as u64 > field.order() {
            return Err(Error::InvalidParameter(format!(
                "GRS needs 1 <= n <= k <= field order, got n={n}, k={k}, order={}",
                field.order()
            )));
        }
        for (i, &a) in locators.iter().enumerate() {
            if a >= field.order() {
                return Err(Error::IndexOutOfRange {
                    index: a,
                    size: field.order(),
                });
            }
            if locators[..i].contains(&a) {
                return Err(Error::DuplicateAbscissa);
            }
        }
        Ok(BlockCode {
            kind: CodeKind::Grs {
                field: field.clone(),
                n,
                locators,
            },
            message_len: n,
            block_len: k as u64,
            alphabet: field,
        })
    }

    /// The concatenated code with parameters (q, m, theta): outer GRS over
    /// F_{q^m} with q^m*theta message symbols at all q^m locators, inner
    /// Hadamard HAD(q, m). Messages are q-ary strings of length m*q^m*theta.
    pub fn concat_grs_h(q: u64, m: usize, theta_num: u64, theta_den: u64) -> Result<BlockCode> {
        let alphabet = Field::new(q, 1)?;
        if theta_den == 0 || theta_num > theta_den {
            return Err(Error::InvalidParameter(format!(
                "theta must be a fraction in (0, 1], got {theta_num}/{theta_den}"
            )));
        }
        let outer_field = Field::new(q, m)?;
        let qm = outer_field.order();
        if !(qm * theta_num).is_multiple_of(theta_den) {
            return Err(Error::InvalidParameter(format!(
                "q^m * theta = {qm} * {theta_num}/{theta_den} is not an integer"
            )));
        }
        let outer_len = qm * theta_num / theta_den;
        if outer_len == 0 || outer_len > qm {
            return Err(Error::InvalidParameter(format!(
                "outer message length {outer_len} outside [1, {qm}]"
            )));
        }
        let g = gcd(theta_num, theta_den);
        Ok(BlockCode {
            kind: CodeKind::ConcatGrsH {
                q,
                m,
                theta: (theta_num / g, theta_den / g),
            },
            message_len: m * outer_len as usize,
            block_len: qm * qm,
            alphabet,
        })
    }

    pub fn kind(&self) -> &CodeKind {
        &self.kind
    }

    pub fn message_len(&self) -> usize {
        self.message_len
    }

    pub fn block_len(&self) -> u64 {
        self.block_len
    }

    pub fn alphabet_field(&self) -> &Field {
        &self.alphabet
    }

    pub fn alphabet_size(&self) -> u64 {
        self.alphabet.order()
    }

    /// Size of the message symbol alphabet (q for Hadamard and the
    /// concatenation, the field order for GRS).
    pub fn message_alphabet(&self) -> u64 {
        match &self.kind {
            CodeKind::Hadamard { q, .. } | CodeKind::ConcatGrsH { q, .. } => *q,
            CodeKind::Grs { field, .. } => field.order(),
        }
    }

    pub fn message_space_size(&self) -> Option<u64> {
        let mut acc = 1u64;
        for _ in 0..self.message_len {
            acc = acc.checked_mul(self.message_alphabet())?;
            if acc > (1 << 40) {
                return None;
            }
        }
        Some(acc)
    }

    fn check_message(&self, x: &[u64]) -> Result<()> {
        if x.len() != self.message_len {
            return Err(Error::LengthMismatch {
                expected: self.message_len,
                got: x.len(),
            });
        }
        let a = self.message_alphabet();
        for &xi in x {
            if xi >= a {
                return Err(Error::IndexOutOfRange { index: xi, size: a });
            }
        }
        Ok(())
    }

    /// Symbol of the codeword of `x` at canonical index `idx`.
    pub fn encode(&self, x: &[u64], idx: u64) -> Result<u64> {
        self.check_message(x)?;
        if idx >= self.block_len {
            return Err(Error::IndexOutOfRange {
                index: idx,
                size: self.block_len,
            });
        }
        match &self.kind {
            CodeKind::Hadamard { q, n } => {
                let r = digits_of(idx, *q, *n);
                had_encode(*q, x, &r)
            }
            CodeKind::Grs {
                field, locators, ..
            } => self.grs_eval(field, x, locators[idx as usize]),
            CodeKind::ConcatGrsH { q, m, .. } => {
                let qm = self.outer_field()?.order();
                let r = idx / qm;
                let s = digits_of(idx % qm, *q, *m);
                self.concat_encode(x, r, &s)
            }
        }
    }

    /// GRS evaluation at a locator value (not a position); errors when `r`
    /// is not in the locator set.
    pub fn grs_encode_at(&self, x: &[u64], r: u64) -> Result<u64> {
        self.check_message(x)?;
        match &self.kind {
            CodeKind::Grs {
                field, locators, ..
            } => {
                if !locators.contains(&r) {
                    return Err(Error::NotALocator(r));
                }
                self.grs_eval(field, x, r)
            }
            _ => Err(Error::InvalidParameter("not a GRS code".into())),
        }
    }

    fn grs_eval(&self, field: &Field, x: &[u64], r: u64) -> Result<u64> {
        let poly = UniPoly::from_indices(field, x)?;
        Ok(poly.eval(field.element(r)?, field).index())
    }

    /// Concatenated encoding at outer locator `r` (an F_{q^m} index) and
    /// inner index vector `s` over F_q.
    pub fn concat_encode(&self, x: &[u64], r: u64, s: &[u64]) -> Result<u64> {
        self.check_message(x)?;
        let (q, m) = match &self.kind {
            CodeKind::ConcatGrsH { q, m, .. } => (*q, *m),
            _ => return Err(Error::InvalidParameter("not a concatenated code".into())),
        };
        let outer_field = self.outer_field()?;
        let outer_msg = self.regroup_message(x)?;
        let outer_poly = UniPoly::from_indices(&outer_field, &outer_msg)?;
        let symbol = outer_poly
            .eval(outer_field.element(r)?, &outer_field)
            .index();
        had_encode(q, &digits_of(symbol, q, m), s)
    }

    /// The outer GRS message: consecutive m-digit little-endian chunks of
    /// the q-ary message string, each decoded to an F_{q^m} index.
    pub fn regroup_message(&self, x: &[u64]) -> Result<Vec<u64>> {
        match &self.kind {
            CodeKind::ConcatGrsH { q, m, .. } => {
                self.check_message(x)?;
                Ok(x.chunks(*m).map(|chunk| value_of(chunk, *q)).collect())
            }
            _ => Err(Error::InvalidParameter("not a concatenated code".into())),
        }
    }

    /// Inverse of [`BlockCode::regroup_message`].
    pub fn expand_outer_message(&self, outer: &[u64]) -> Result<Vec<u64>> {
        match &self.kind {
            CodeKind::ConcatGrsH { q, m, .. } => {
                let outer_len = self.message_len / m;
                if outer.len() != outer_len {
                    return Err(Error::LengthMismatch {
                        expected: outer_len,
                        got: outer.len(),
                    });
                }
                let mut out = Vec::with_capacity(self.message_len);
                for &sym in outer {
                    out.extend(digits_of(sym, *q, *m));
                }
                Ok(out)
            }
            _ => Err(Error::InvalidParameter("not a concatenated code".into())),
        }
    }

    pub fn outer_field(&self) -> Result<Field> {
        match &self.kind {
            CodeKind::ConcatGrsH { q, m, .. } => Field::new(*q, *m),
            _ => Err(Error::InvalidParameter("not a concatenated code".into())),
        }
    }

    /// Full codeword as a symbol vector of length M.
    pub fn codeword(&self, x: &[u64]) -> Result<Vec<u64>> {
        self.check_message(x)?;
        match &self.kind {
            // The generic path re-derives the message polynomial per index;
            // specialize the two polynomial-based kinds.
            CodeKind::Grs {
                field, locators, ..
            } => {
                let poly = UniPoly::from_indices(field, x)?;
                locators
                    .iter()
                    .map(|&r| Ok(poly.eval(field.element(r)?, field).index()))
                    .collect()
            }
            CodeKind::ConcatGrsH { q, m, .. } => {
                let outer_field = self.outer_field()?;
                let qm = outer_field.order();
                let outer_poly = UniPoly::from_indices(&outer_field, &self.regroup_message(x)?)?;
                let mut out = Vec::with_capacity(self.block_len as usize);
                for r in 0..qm {
                    let symbol = outer_poly
                        .eval(outer_field.element(r)?, &outer_field)
                        .index();
                    let digits = digits_of(symbol, *q, *m);
                    for s in 0..qm {
                        out.push(had_encode(*q, &digits, &digits_of(s, *q, *m))?);
                    }
                }
                Ok(out)
            }
            CodeKind::Hadamard { .. } => {
                (0..self.block_len).map(|idx| self.encode(x, idx)).collect()
            }
        }
    }

    pub fn messages(&self) -> Result<impl Iterator<Item = Vec<u64>> + '_> {
        let size = self.message_space_size().ok_or(Error::CapExceeded {
            size: u64::MAX,
            cap: MESSAGE_SPACE_CAP,
        })?;
        let base = self.message_alphabet();
        let len = self.message_len;
        Ok((0..size).map(move |k| digits_of(k, base, len)))
    }

    /// Exact minimum Hamming distance by enumeration. All three kinds are
    /// linear, so the minimum over distinct pairs equals the minimum
    /// nonzero codeword weight.
    pub fn min_distance_bruteforce(&self, cap: u64) -> Result<u64> {
        let size = self
            .message_space_size()
            .filter(|&s| s <= cap)
            .ok_or(Error::CapExceeded {
                size: u64::MAX,
                cap,
            })?;
        if size < 2 {
            return Err(Error::InvalidParameter(
                "need at least two messages for a distance".into(),
            ));
        }
        let mut best = u64::MAX;
        for x in self.messages()?.skip(1) {
            let weight = self.codeword(&x)?.iter().filter(|&&sym| sym != 0).count() as u64;
            best = best.min(weight);
        }
        Ok(best)
    }

    /// Design distance of the concatenation: (1 - 1/q)(1 - theta) q^{2m}.
    pub fn design_distance(&self) -> Result<u64> {
        match &self.kind {
            CodeKind::ConcatGrsH { q, m, .. } => {
                let qm = self.outer_field()?.order();
                let outer_len = (self.message_len / m) as u64;
                Ok((q - 1) * qm / q * (qm - outer_len))
            }
            _ => Err(Error::InvalidParameter("not a concatenated code".into())),
        }
    }

    /// Arithmetic form of the block-size bound q^m <= n log q / (theta log(1/theta)).
    pub fn concat_size_bound_holds(&self) -> Result<bool> {
        match &self.kind {
            CodeKind::ConcatGrsH { q, m, theta } => {
                let qm = Field::new(*q, *m)?.order() as f64;
                let theta = theta.0 as f64 / theta.1 as f64;
                let n = self.message_len as f64;
                Ok(qm <= n * (*q as f64).ln() / (theta * (1.0 / theta).ln()))
            }
            _ => Err(Error::InvalidParameter("not a concatenated code".into())),
        }
    }

    /// One-line descriptor "KIND q m n theta_num theta_den k" with unused
    /// fields zero; GRS carries a second line of locators.
    pub fn to_descriptor(&self) -> String {
        match &self.kind {
            CodeKind::Hadamard { q, n } => format!("HAD {q} 0 {n} 0 0 0\n"),
            CodeKind::Grs { field, n, locators } => {
                let locs: Vec<String> = locators.iter().map(u64::to_string).collect();
                format!(
                    "GRS {} {} {n} 0 0 {}\n{}\n",
                    field.characteristic(),
                    field.ext_degree(),
                    locators.len(),
                    locs.join(" ")
                )
            }
            CodeKind::ConcatGrsH { q, m, theta } => {
                format!(
                    "CONCAT {q} {m} {} {} {} 0\n",
                    self.message_len, theta.0, theta.1
                )
            }
        }
    }

    pub fn from_descriptor(text: &str) -> Result<BlockCode> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty descriptor".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 7 {
            return Err(Error::Format(format!(
                "descriptor header needs 7 fields, got {}",
                parts.len()
            )));
        }
        let num = |s: &str| -> Result<u64> {
            s.parse()
                .map_err(|_| Error::Format(format!("bad integer {s:?}")))
        };
        let (q, m, n, tn, td, k) = (
            num(parts[1])?,
            num(parts[2])? as usize,
            num(parts[3])? as usize,
            num(parts[4])?,
            num(parts[5])?,
            num(parts[6])? as usize,
        );
        match parts[0] {
            "HAD" => BlockCode::hadamard(q, n),
            "GRS" => {
                let locline = lines
                    .next()
                    .ok_or_else(|| Error::Format("GRS descriptor missing locators".into()))?;
                let locators = locline
                    .split_whitespace()
                    .map(num)
                    .collect::<Result<Vec<u64>>>()?;
                if locators.len() != k {
                    return Err(Error::Format(format!(
                        "expected {k} locators, got {}",
                        locators.len()
                    )));
                }
                BlockCode::grs_with_locators(Field::new(q, m)?, n, locators)
            }
            "CONCAT" => {
                let code = BlockCode::concat_grs_h(q, m, tn, td)?;
                if code.message_len != n {
                    return Err(Error::Format(format!(
                        "inconsistent message length {n} for CONCAT {q} {m} theta {tn}/{td}"
                    )));
                }
                Ok(code)
            }
            other => Err(Error::Format(format!("unknown code kind {other:?}"))),
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn had_encode_examples() {
        assert_eq!(had_encode(2, &[1, 1], &[1, 0]).unwrap(), 1);
        let code = BlockCode::hadamard(2, 2).unwrap();
        for idx in 0..code.block_len() {
            assert_eq!(code.encode(&[0, 0], idx).unwrap(), 0);
        }
        assert_eq!(had_encode(3, &[2], &[2]).unwrap(), 1);
    }

    #[test]
    fn grs_encode_examples() {
        let f5 = Field::new(5, 1).unwrap();
        let code = BlockCode::grs(f5, 5, 2).unwrap();
        assert_eq!(code.grs_encode_at(&[1, 2], 3).unwrap(), 2); // 1 + 6 mod 5
        for r in 0..5 {
            assert_eq!(code.grs_encode_at(&[3, 0], r).unwrap(), 3); // constant
        }
        // alpha + alpha * alpha = alpha + (alpha + 1) = 1 over F_4.
        let f4 = Field::new(2, 2).unwrap();
        let code4 = BlockCode::grs(f4, 4, 2).unwrap();
        assert_eq!(code4.grs_encode_at(&[2, 2], 2).unwrap(), 1);
        assert!(matches!(
            code4.grs_encode_at(&[2, 2], 7),
            Err(Error::NotALocator(7))
        ));
    }

    #[test]
    fn concat_parameter_arithmetic() {
        let code = BlockCode::concat_grs_h(2, 2, 1, 2).unwrap();
        assert_eq!(code.message_len(), 4); // m q^m theta = 2*4*(1/2)
        assert_eq!(code.block_len(), 16);
        assert_eq!(code.design_distance().unwrap(), 4);
        assert!(code.concat_size_bound_holds().unwrap());
        // q^m theta not an integer
        assert!(BlockCode::concat_grs_h(2, 1, 1, 3).is_err());
    }

    #[test]
    fn concat_zero_message_is_zero_codeword() {
        let code = BlockCode::concat_grs_h(2, 2, 1, 2).unwrap();
        assert!(code.codeword(&[0; 4]).unwrap().iter().all(|&z| z == 0));
    }

    #[test]
    fn concat_regroup_round_trip() {
        let code = BlockCode::concat_grs_h(2, 2, 1, 2).unwrap();
        let x = [1, 0, 1, 1];
        let outer = code.regroup_message(&x).unwrap();
        assert_eq!(outer, vec![1, 3]); // little-endian chunks
        assert_eq!(code.expand_outer_message(&outer).unwrap(), x);
    }

    #[test]
    fn min_distance_examples() {
        let f5 = Field::new(5, 1).unwrap();
        let grs = BlockCode::grs(f5, 5, 2).unwrap();
        assert_eq!(grs.min_distance_bruteforce(MESSAGE_SPACE_CAP).unwrap(), 4); // k-n+1

        // Shortened locator sets stay at distance k-n+1.
        for (q, k, n) in [(7u64, 4usize, 2usize), (11, 6, 3), (13, 5, 2)] {
            let f = Field::new(q, 1).unwrap();
            let code = BlockCode::grs(f, k, n).unwrap();
            assert_eq!(
                code.min_distance_bruteforce(MESSAGE_SPACE_CAP).unwrap(),
                (k - n + 1) as u64
            );
        }

        let had = BlockCode::hadamard(2, 2).unwrap();
        assert_eq!(had.min_distance_bruteforce(MESSAGE_SPACE_CAP).unwrap(), 2); // q^n - q^{n-1}

        let concat = BlockCode::concat_grs_h(2, 2, 1, 2).unwrap();
        let d = concat.min_distance_bruteforce(MESSAGE_SPACE_CAP).unwrap();
        assert!(d >= concat.design_distance().unwrap());
        assert_eq!(d, 6); // outer weight 3 times inner weight 2
    }

    #[test]
    fn min_weight_equals_pairwise_minimum() {
        // Cross-check the linearity shortcut against the pairwise
        // definition on a small instance.
        let f7 = Field::new(7, 1).unwrap();
        let code = BlockCode::grs(f7, 4, 2).unwrap();
        let msgs: Vec<Vec<u64>> = code.messages().unwrap().collect();
        let mut pairwise = u64::MAX;
        for (i, x) in msgs.iter().enumerate() {
            let cx = code.codeword(x).unwrap();
            for y in &msgs[..i] {
                let cy = code.codeword(y).unwrap();
                let d = cx.iter().zip(&cy).filter(|(a, b)| a != b).count() as u64;
                pairwise = pairwise.min(d);
            }
        }
        assert_eq!(
            code.min_distance_bruteforce(MESSAGE_SPACE_CAP).unwrap(),
            pairwise
        );
    }

    #[test]
    fn encoders_are_linear() {
        let f5 = Field::new(5, 1).unwrap();
        let codes = [
            BlockCode::hadamard(3, 2).unwrap(),
            BlockCode::grs(f5, 5, 3).unwrap(),
            BlockCode::concat_grs_h(2, 2, 1, 2).unwrap(),
        ];
        for code in &codes {
            let a = code.message_alphabet();
            let field = match code.kind() {
                CodeKind::Grs { field, .. } => field.clone(),
                _ => code.alphabet_field().clone(),
            };
            for seed in 0..10u64 {
                let x: Vec<u64> = (0..code.message_len() as u64)
                    .map(|i| (seed * 31 + i * 7) % a)
                    .collect();
                let y: Vec<u64> = (0..code.message_len() as u64)
                    .map(|i| (seed * 17 + i * 13 + 1) % a)
                    .collect();
                let sum: Vec<u64> = x
                    .iter()
                    .zip(&y)
                    .map(|(&xi, &yi)| {
                        field
                            .add(field.element(xi).unwrap(), field.element(yi).unwrap())
                            .index()
                    })
                    .collect();
                let cs = code.codeword(&sum).unwrap();
                let cx = code.codeword(&x).unwrap();
                let cy = code.codeword(&y).unwrap();
                let alpha = code.alphabet_field();
                for i in 0..cs.len() {
                    let want = alpha
                        .add(alpha.element(cx[i]).unwrap(), alpha.element(cy[i]).unwrap())
                        .index();
                    assert_eq!(cs[i], want);
                }
            }
        }
    }

    #[test]
    fn descriptor_round_trip() {
        let f4 = Field::new(2, 2).unwrap();
        let codes = [
            BlockCode::hadamard(3, 2).unwrap(),
            BlockCode::grs(f4, 4, 2).unwrap(),
            BlockCode::concat_grs_h(2, 2, 1, 2).unwrap(),
        ];
        for code in &codes {
            let text = code.to_descriptor();
            let back = BlockCode::from_descriptor(&text).unwrap();
            assert_eq!(&back, code);
            assert!(!text.contains('.'), "descriptor must stay float-free");
        }
    }
}
