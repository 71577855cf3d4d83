//! Weighted-lattice view of list decoding: Lagrange coefficient matrices,
//! the bounded-distance vector instance built from a measurement table,
//! a brute-force solver over codeword indicators, and the map from
//! indicator vectors back to messages.

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::oracles::NpipInstance;
use crate::poly::UniPoly;
use crate::table::{kahan_sum, CorruptedTable};

/// Coefficient rows of the Lagrange basis for the locator set: row i holds
/// the coefficients of L_i with L_i(x_j) = [i == j], padded to M entries.
pub fn lagrange_coeffs(field: &Field, locators: &[FieldElement]) -> Result<Vec<Vec<FieldElement>>> {
    for (i, x) in locators.iter().enumerate() {
        if locators[..i].contains(x) {
            return Err(Error::DuplicateAbscissa);
        }
    }
    let m = locators.len();
    let mut rows = Vec::with_capacity(m);
    for (i, &xi) in locators.iter().enumerate() {
        let mut num = UniPoly::constant(field.one());
        let mut den = field.one();
        for (j, &xj) in locators.iter().enumerate() {
            if i == j {
                continue;
            }
            num = num.mul(&UniPoly::new(vec![field.neg(xj), field.one()]), field);
            den = field.mul(den, field.sub(xi, xj));
        }
        let li = num.scale(field.inv(den)?, field);
        let mut row: Vec<FieldElement> = li.coeffs().to_vec();
        row.resize(m, field.zero());
        rows.push(row);
    }
    Ok(rows)
}

/// Weighted lattice instance: membership constraints, weights from a
/// measurement table, and the presence-threshold radius.
#[derive(Clone, Debug)]
pub struct BdvpInstance {
    field: Field,
    locators: Vec<FieldElement>,
    message_len: usize,
    /// lagrange[i][k] = coefficient of x^k in L_i, as element indices.
    lagrange: Vec<Vec<u64>>,
    /// weights[i][j] = sqrt(1 - p(i, j)).
    weights: Vec<Vec<f64>>,
    /// M (1 - 1/q - eps).
    radius: f64,
    epsilon: f64,
}

/// Builds the instance for messages of length `message_len` over the
/// table's locator rows, with radius M(1 - 1/q - eps).
pub fn bdvp_build(
    table: &CorruptedTable,
    field: &Field,
    locators: &[u64],
    message_len: usize,
    epsilon: f64,
) -> Result<BdvpInstance> {
    let q = field.order();
    if table.alphabet() != q {
        return Err(Error::InvalidParameter(format!(
            "table alphabet {} differs from field order {q}",
            table.alphabet()
        )));
    }
    if locators.len() != table.block_len() as usize {
        return Err(Error::LengthMismatch {
            expected: table.block_len() as usize,
            got: locators.len(),
        });
    }
    let big_m = locators.len();
    if message_len == 0 || message_len > big_m {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= n <= M, got n={message_len}, M={big_m}"
        )));
    }
    let qf = q as f64;
    if !(epsilon > 0.0 && epsilon <= 1.0 - 1.0 / qf) {
        return Err(Error::InvalidParameter(format!(
            "bias must lie in (0, 1 - 1/q], got {epsilon}"
        )));
    }
    let locators = locators
        .iter()
        .map(|&x| field.element(x))
        .collect::<Result<Vec<_>>>()?;
    let lagrange = lagrange_coeffs(field, &locators)?
        .into_iter()
        .map(|row| row.into_iter().map(|c| c.index()).collect())
        .collect();
    let weights = (0..big_m)
        .map(|i| {
            (0..q)
                .map(|j| (1.0 - table.prob(i, j)).max(0.0).sqrt())
                .collect()
        })
        .collect();
    Ok(BdvpInstance {
        field: field.clone(),
        locators,
        message_len,
        lagrange,
        weights,
        radius: big_m as f64 * (1.0 - 1.0 / qf - epsilon),
        epsilon,
    })
}

impl BdvpInstance {
    pub fn num_locators(&self) -> usize {
        self.locators.len()
    }

    pub fn field_order(&self) -> u64 {
        self.field.order()
    }

    pub fn message_len(&self) -> usize {
        self.message_len
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn lagrange(&self) -> &[Vec<u64>] {
        &self.lagrange
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i][j]
    }

    fn dims(&self) -> usize {
        self.locators.len() * self.field.order() as usize
    }

    /// Lattice membership: equal row sums, and for every k in [n+1, M] the
    /// congruence sum_{i,j} d_ij z_j c_ik = 0 mod q.
    pub fn is_member(&self, d: &[i64]) -> Result<bool> {
        if d.len() != self.dims() {
            return Err(Error::LengthMismatch {
                expected: self.dims(),
                got: d.len(),
            });
        }
        let q = self.field.order() as i64;
        let big_m = self.locators.len();
        let row_sum0: i64 = d[..q as usize].iter().sum();
        for i in 1..big_m {
            let s: i64 = d[i * q as usize..(i + 1) * q as usize].iter().sum();
            if s != row_sum0 {
                return Ok(false);
            }
        }
        for k in self.message_len..big_m {
            let mut acc: i64 = 0;
            for i in 0..big_m {
                let cik = self.lagrange[i][k] as i64;
                if cik == 0 {
                    continue;
                }
                for j in 0..q {
                    let dij = d[i * q as usize + j as usize];
                    if dij != 0 {
                        acc = (acc + dij.rem_euclid(q) * j % q * cik) % q;
                    }
                }
            }
            if acc.rem_euclid(q) != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Squared weighted norm sum d_ij^2 (1 - p(i, j)).
    pub fn weighted_norm_sq(&self, d: &[i64]) -> Result<f64> {
        if d.len() != self.dims() {
            return Err(Error::LengthMismatch {
                expected: self.dims(),
                got: d.len(),
            });
        }
        let q = self.field.order() as usize;
        Ok(kahan_sum(d.iter().enumerate().map(|(idx, &v)| {
            let w = self.weights[idx / q][idx % q];
            (v * v) as f64 * w * w
        })))
    }

    /// Indicator embedding of a message: 1 at (i, p_a(x_i)) per locator row.
    pub fn embed_message(&self, message: &[u64]) -> Result<Vec<i64>> {
        if message.len() != self.message_len {
            return Err(Error::LengthMismatch {
                expected: self.message_len,
                got: message.len(),
            });
        }
        let poly = UniPoly::from_indices(&self.field, message)?;
        let q = self.field.order() as usize;
        let mut out = vec![0i64; self.dims()];
        for (i, &x) in self.locators.iter().enumerate() {
            let y = poly.eval(x, &self.field).index() as usize;
            out[i * q + y] = 1;
        }
        Ok(out)
    }

    /// Enumerates all message indicators in the lattice ball: exactly the
    /// messages with presence >= 1/q + eps, by the norm identity.
    pub fn solve_indicators(&self, cap: u64) -> Result<Vec<Vec<i64>>> {
        let q = self.field.order();
        let size = (q as u128).pow(self.message_len as u32);
        if size > cap as u128 {
            return Err(Error::CapExceeded {
                size: size as u64,
                cap,
            });
        }
        let mut out = Vec::new();
        for k in 0..size as u64 {
            let mut message = Vec::with_capacity(self.message_len);
            let mut rest = k;
            for _ in 0..self.message_len {
                message.push(rest % q);
                rest /= q;
            }
            let v = self.embed_message(&message)?;
            debug_assert!(self.is_member(&v)?, "indicator escaped the lattice");
            if self.weighted_norm_sq(&v)? <= self.radius {
                out.push(v);
            }
        }
        Ok(out)
    }

    /// All 0/1 lattice members, for membership testing on tiny instances.
    pub fn enumerate_box01(&self, cap: u64) -> Result<Vec<Vec<i64>>> {
        let dims = self.dims();
        if dims >= 63 || (1u64 << dims) > cap {
            return Err(Error::CapExceeded {
                size: u64::MAX,
                cap,
            });
        }
        let mut out = Vec::new();
        for mask in 0..(1u64 << dims) {
            let d: Vec<i64> = (0..dims).map(|b| ((mask >> b) & 1) as i64).collect();
            if self.is_member(&d)? {
                out.push(d);
            }
        }
        Ok(out)
    }

    /// Message whose indicator is `v`: interpolate the indicated points and
    /// require degree below the message length.
    pub fn vector_to_message(&self, v: &[i64]) -> Result<Vec<u64>> {
        if v.len() != self.dims() {
            return Err(Error::LengthMismatch {
                expected: self.dims(),
                got: v.len(),
            });
        }
        let q = self.field.order() as usize;
        let mut points = Vec::with_capacity(self.locators.len());
        for (i, &x) in self.locators.iter().enumerate() {
            let row = &v[i * q..(i + 1) * q];
            let mut hit = None;
            for (j, &val) in row.iter().enumerate() {
                match val {
                    0 => {}
                    1 if hit.is_none() => hit = Some(j),
                    _ => return Err(Error::NotIndicator),
                }
            }
            let j = hit.ok_or(Error::NotIndicator)?;
            points.push((x, self.field.element(j as u64)?));
        }
        let poly = UniPoly::interpolate(&points, &self.field)?;
        poly.coeff_indices(self.message_len)
    }

    /// Instance dump: header, locators, weight rows at 17 significant
    /// digits, then the Lagrange coefficient matrix.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "q {} M {} n {} xi {:.16e}\n",
            self.field.order(),
            self.locators.len(),
            self.message_len,
            self.radius
        );
        let locs: Vec<String> = self
            .locators
            .iter()
            .map(|x| x.index().to_string())
            .collect();
        out.push_str(&locs.join(" "));
        out.push('\n');
        for row in &self.weights {
            let cells: Vec<String> = row.iter().map(|w| format!("{w:.16e}")).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        for row in &self.lagrange {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Recovery route for a noisy-interpolation instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NpipRoute {
    /// Sampling decoder; needs the bias premise to hold.
    Decoder,
    /// Lattice-ball enumeration.
    Lattice,
    /// Decoder when admissible, lattice otherwise.
    Auto,
}

/// End-to-end recovery of the hidden polynomial of a promise instance.
/// The bias is backed off from the exact presence by half a row weight so
/// that only full-hit polynomials stay above the threshold.
pub fn recover_npip(inst: &NpipInstance, route: NpipRoute, seed: u64) -> Result<Vec<u64>> {
    let q = inst.q;
    let n = inst.locators.len();
    let m = inst.set_size;
    let table = inst.table()?;
    let field = Field::new(q, 1)?;
    let eps_exact = (n as f64 / q as f64) * (1.0 / m as f64 - 1.0 / q as f64);
    let margin = 1.0 / (2.0 * q as f64 * m as f64);
    let epsilon = eps_exact - margin;
    if epsilon <= 0.0 {
        return Err(Error::InvalidParameter(
            "instance bias is not positive; nothing to recover".into(),
        ));
    }
    let message_len = inst.degree_bound + 1;

    let decode_attempt = |field: &Field| -> Result<Vec<u64>> {
        let eps_inner = crate::decoder::choose_inner_bias(q, message_len, epsilon)?;
        let params =
            crate::decoder::DecodeParams::new(message_len, q, epsilon, eps_inner, 0.5, seed)?;
        let out = crate::decoder::decode_grs(&table, field, &params)?;
        match out.list.entries() {
            [(message, _)] => Ok(message.clone()),
            entries => Err(Error::InvalidParameter(format!(
                "expected a unique recovery, got {} candidates",
                entries.len()
            ))),
        }
    };

    match route {
        NpipRoute::Decoder => decode_attempt(&field),
        NpipRoute::Lattice => lattice_attempt(inst, &table, &field, epsilon),
        NpipRoute::Auto => {
            decode_attempt(&field).or_else(|_| lattice_attempt(inst, &table, &field, epsilon))
        }
    }
}

fn lattice_attempt(
    inst: &NpipInstance,
    table: &CorruptedTable,
    field: &Field,
    epsilon: f64,
) -> Result<Vec<u64>> {
    let locators: Vec<u64> = (0..inst.q).collect();
    let bdvp = bdvp_build(table, field, &locators, inst.degree_bound + 1, epsilon)?;
    let hits = bdvp.solve_indicators(1 << 22)?;
    match hits.as_slice() {
        [v] => bdvp.vector_to_message(v),
        vs => Err(Error::InvalidParameter(format!(
            "expected a unique lattice vector, got {}",
            vs.len()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::BlockCode;
    use crate::rng::substream;

    fn f5() -> Field {
        Field::new(5, 1).unwrap()
    }

    #[test]
    fn two_point_lagrange_row() {
        let f = f5();
        let locs = [f.element(0).unwrap(), f.element(1).unwrap()];
        let rows = lagrange_coeffs(&f, &locs).unwrap();
        let idx: Vec<u64> = rows[0].iter().map(FieldElement::index).collect();
        assert_eq!(idx, vec![1, 4]); // L_1 = 1 - x
    }

    #[test]
    fn lagrange_evaluation_property_and_partition_of_unity() {
        let f = Field::new(7, 1).unwrap();
        let locs: Vec<_> = [0u64, 2, 3, 6]
            .iter()
            .map(|&x| f.element(x).unwrap())
            .collect();
        let rows = lagrange_coeffs(&f, &locs).unwrap();
        for (i, row) in rows.iter().enumerate() {
            let li = UniPoly::new(row.clone());
            for (j, &xj) in locs.iter().enumerate() {
                let want = if i == j { f.one() } else { f.zero() };
                assert_eq!(li.eval(xj, &f), want);
            }
        }
        // Column sums: sum_i L_i is the constant 1.
        for k in 0..locs.len() {
            let mut acc = f.zero();
            for row in &rows {
                acc = f.add(acc, row[k]);
            }
            let want = if k == 0 { f.one() } else { f.zero() };
            assert_eq!(acc, want);
        }
        assert!(matches!(
            lagrange_coeffs(&f, &[locs[0], locs[0]]),
            Err(Error::DuplicateAbscissa)
        ));
    }

    fn planted_instance(lambda: f64, eps: f64) -> (BdvpInstance, Vec<u64>, CorruptedTable) {
        let f = f5();
        let code = BlockCode::grs(f.clone(), 5, 2).unwrap();
        let x = vec![3u64, 1];
        let table = CorruptedTable::plant(&code, &x, lambda).unwrap();
        let locators: Vec<u64> = (0..5).collect();
        let inst = bdvp_build(&table, &f, &locators, 2, eps).unwrap();
        (inst, x, table)
    }

    #[test]
    fn embedded_messages_are_members() {
        let (inst, x, _) = planted_instance(0.7, 0.3);
        let v = inst.embed_message(&x).unwrap();
        assert!(inst.is_member(&v).unwrap());
        let zero = vec![0i64; 25];
        assert!(inst.is_member(&zero).unwrap());
    }

    #[test]
    fn flipped_indicator_violates_the_congruences() {
        let (inst, x, _) = planted_instance(0.7, 0.3);
        let mut v = inst.embed_message(&x).unwrap();
        // Move row 0's mass to a different symbol: still an indicator,
        // but the indicated points no longer sit on a degree-<2 polynomial.
        let q = 5usize;
        let pos = v[..q].iter().position(|&b| b == 1).unwrap();
        v[pos] = 0;
        v[(pos + 2) % q] = 1;
        assert!(!inst.is_member(&v).unwrap());
    }

    #[test]
    fn norm_identity_matches_presence() {
        let f = f5();
        let code = BlockCode::grs(f.clone(), 5, 2).unwrap();
        let mut rng = substream(61, 0);
        let locators: Vec<u64> = (0..5).collect();
        for _ in 0..40 {
            let table = CorruptedTable::random(5, 5, None, &mut rng).unwrap();
            let inst = bdvp_build(&table, &f, &locators, 2, 0.4).unwrap();
            for x in code.messages().unwrap() {
                let v = inst.embed_message(&x).unwrap();
                let norm = inst.weighted_norm_sq(&v).unwrap();
                let presence = table.presence(&code.codeword(&x).unwrap()).unwrap();
                assert!((norm - 5.0 * (1.0 - presence)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn solver_is_the_presence_threshold_set() {
        let (inst, x, table) = planted_instance(0.8, 0.3);
        let f = f5();
        let code = BlockCode::grs(f, 5, 2).unwrap();
        let hits = inst.solve_indicators(1 << 16).unwrap();
        let mut got: Vec<Vec<u64>> = hits
            .iter()
            .map(|v| inst.vector_to_message(v).unwrap())
            .collect();
        got.sort();
        let mut want = Vec::new();
        for msg in code.messages().unwrap() {
            let pre = table.presence(&code.codeword(&msg).unwrap()).unwrap();
            if pre >= 0.2 + 0.3 {
                want.push(msg);
            }
        }
        want.sort();
        assert_eq!(got, want);
        assert!(got.contains(&x));
    }

    #[test]
    fn uniform_table_has_empty_ball() {
        let f = f5();
        let table = CorruptedTable::uniform(5, 5, None).unwrap();
        let locators: Vec<u64> = (0..5).collect();
        let inst = bdvp_build(&table, &f, &locators, 2, 0.3).unwrap();
        assert!(inst.solve_indicators(1 << 16).unwrap().is_empty());
    }

    #[test]
    fn deterministic_table_at_zero_radius() {
        let f = f5();
        let code = BlockCode::grs(f.clone(), 5, 2).unwrap();
        let x = vec![2u64, 4];
        let table = CorruptedTable::plant(&code, &x, 1.0).unwrap();
        let locators: Vec<u64> = (0..5).collect();
        // eps = 1 - 1/q gives radius exactly 0.
        let inst = bdvp_build(&table, &f, &locators, 2, 0.8).unwrap();
        assert_eq!(inst.radius(), 0.0);
        let hits = inst.solve_indicators(1 << 16).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(inst.vector_to_message(&hits[0]).unwrap(), x);
    }

    #[test]
    fn vector_to_message_rejects_bad_inputs() {
        let (inst, x, _) = planted_instance(0.9, 0.3);
        let v = inst.embed_message(&x).unwrap();
        assert_eq!(inst.vector_to_message(&v).unwrap(), x);

        let mut two_ones = v.clone();
        two_ones[0] = 1;
        two_ones[1] = 1;
        assert!(matches!(
            inst.vector_to_message(&two_ones),
            Err(Error::NotIndicator)
        ));

        // Indicator of the graph of x^2: interpolates to degree 2.
        let f = f5();
        let mut graph = vec![0i64; 25];
        for x in 0..5u64 {
            let y = (x * x) % 5;
            graph[(x * 5 + y) as usize] = 1;
        }
        let _ = f;
        assert!(matches!(
            inst.vector_to_message(&graph),
            Err(Error::DegreeOverflow)
        ));
    }

    #[test]
    fn box_enumeration_on_a_tiny_instance() {
        // q=2, M=2, n=1 (constant messages): 16 candidate 0/1 vectors.
        let f2 = Field::new(2, 1).unwrap();
        let table = CorruptedTable::embed(&[1, 1], 2, None).unwrap();
        let inst = bdvp_build(&table, &f2, &[0, 1], 1, 0.5).unwrap();
        let members = inst.enumerate_box01(1 << 10).unwrap();
        for v in &members {
            assert!(inst.is_member(v).unwrap());
        }
        // The zero vector and both constant-message indicators are members.
        assert!(members.contains(&vec![0, 0, 0, 0]));
        for msg in [[0u64], [1u64]] {
            assert!(members.contains(&inst.embed_message(&msg).unwrap()));
        }
        // At radius 0 the zero vector still sits in the ball over the box,
        // while the indicator path returns exactly the planted message.
        assert_eq!(inst.radius(), 0.0);
        assert!(inst.weighted_norm_sq(&[0, 0, 0, 0]).unwrap() <= 0.0);
        let hits = inst.solve_indicators(1 << 10).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(inst.vector_to_message(&hits[0]).unwrap(), vec![1]);
    }

    #[test]
    fn membership_is_closed_under_integer_combinations() {
        let (inst, x, _) = planted_instance(0.6, 0.3);
        let f = f5();
        let code = BlockCode::grs(f, 5, 2).unwrap();
        let msgs: Vec<Vec<u64>> = code.messages().unwrap().take(12).collect();
        for (i, a) in msgs.iter().enumerate() {
            for b in &msgs[..i] {
                let va = inst.embed_message(a).unwrap();
                let vb = inst.embed_message(b).unwrap();
                for (ca, cb) in [(1i64, 1i64), (2, -1), (-3, 2)] {
                    let comb: Vec<i64> =
                        va.iter().zip(&vb).map(|(&u, &v)| ca * u + cb * v).collect();
                    assert!(inst.is_member(&comb).unwrap());
                }
            }
        }
        let _ = x;
    }

    #[test]
    fn npip_end_to_end_both_routes() {
        // Lattice route on a noisy promise instance.
        let inst = NpipInstance::generate(11, 8, 2, 1, 5).unwrap();
        let got = recover_npip(&inst, NpipRoute::Lattice, 3).unwrap();
        assert_eq!(got, inst.hidden);

        // Decoder route on a noiseless one (m = 1, full locator set).
        let inst = NpipInstance::generate(7, 7, 1, 1, 9).unwrap();
        let got = recover_npip(&inst, NpipRoute::Auto, 4).unwrap();
        assert_eq!(got, inst.hidden);
    }
}
