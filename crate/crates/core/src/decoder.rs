//! Sampling-based list decoding of GRS codes from a measurement table,
//! and the concatenated-code pipeline (peel the inner Hadamard layer,
//! decode the outer GRS code, map back and re-filter).
//!
//! The decoder measures each index T times, feeds the distinct observed
//! points to polynomial reconstruction, and keeps exactly the candidates
//! whose table presence clears the bias threshold. The final filter is
//! computed from the exact table, so soundness is unconditional; only
//! completeness is statistical.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gs::{gs_reconstruct, ReconstructionInstance};
use crate::hadamard::peel_hadamard;
use crate::poly::UniPoly;
use crate::rng::substream;
use crate::table::CorruptedTable;

/// Cap on samples per index.
pub const MAX_SAMPLES_PER_INDEX: u64 = 1_000_000;

/// Validated parameters of one GRS decoding run over a field of order q.
#[derive(Clone, Debug)]
pub struct DecodeParams {
    pub message_len: usize,
    pub field_order: u64,
    /// Bias: list membership is owed above presence 1/q + epsilon.
    pub epsilon: f64,
    /// Per-symbol bias driving the sampling budget.
    pub epsilon_inner: f64,
    pub confidence: f64,
    pub samples_per_index: u64,
    pub seed: u64,
}

impl DecodeParams {
    pub fn new(
        message_len: usize,
        field_order: u64,
        epsilon: f64,
        epsilon_inner: f64,
        confidence: f64,
        seed: u64,
    ) -> Result<DecodeParams> {
        let n = message_len as f64;
        let q = field_order as f64;
        if message_len < 2 || message_len as u64 > field_order {
            return Err(Error::InvalidParameter(format!(
                "need 2 <= n <= q, got n={message_len}, q={field_order}"
            )));
        }
        // Tolerance absorbs rounding of fractions like 2/7 at the edges.
        if q * epsilon_inner < n - 2.0 - 1e-9 || q * epsilon_inner > q - 1.0 + 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "need n-2 <= q*eps' <= q-1, got q*eps' = {}",
                q * epsilon_inner
            )));
        }
        let floor = premise_floor(field_order, message_len, epsilon_inner);
        if !(epsilon > floor && epsilon <= 1.0 - 1.0 / q) {
            return Err(Error::InvalidParameter(format!(
                "bias must satisfy {floor} < eps <= {}, got {epsilon}",
                1.0 - 1.0 / q
            )));
        }
        let samples_per_index = sample_count(field_order, epsilon_inner, confidence)?;
        Ok(DecodeParams {
            message_len,
            field_order,
            epsilon,
            epsilon_inner,
            confidence,
            samples_per_index,
            seed,
        })
    }

    pub fn with_samples(mut self, samples: u64) -> DecodeParams {
        self.samples_per_index = samples;
        self
    }

    /// Agreement threshold ceil((1 - gamma) q) with
    /// gamma = (1 - 1/q - eps)/(1 - 1/q - eps').
    pub fn agreement_threshold(&self) -> usize {
        let q = self.field_order as f64;
        let gamma = (1.0 - 1.0 / q - self.epsilon) / (1.0 - 1.0 / q - self.epsilon_inner);
        ((1.0 - gamma) * q).ceil() as usize
    }
}

/// Lower edge of the admissible bias range:
/// eps' + (1 - 1/q - eps') sqrt((n-1)/(1 + q eps')).
pub fn premise_floor(field_order: u64, message_len: usize, epsilon_inner: f64) -> f64 {
    let q = field_order as f64;
    epsilon_inner
        + (1.0 - 1.0 / q - epsilon_inner)
            * ((message_len as f64 - 1.0) / (1.0 + q * epsilon_inner)).sqrt()
}

/// Minimal T with T >= (q/(1+q eps') - 1) ln(q / ((1+q eps')(1 - delta^{1/q}))),
/// clamped to at least one sample.
pub fn sample_count(field_order: u64, epsilon_inner: f64, confidence: f64) -> Result<u64> {
    if !(0.0 < confidence && confidence < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "confidence {confidence} outside (0, 1)"
        )));
    }
    let q = field_order as f64;
    let scale = 1.0 + q * epsilon_inner;
    if scale <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "1 + q*eps' must be positive, got {scale}"
        )));
    }
    let factor = q / scale - 1.0;
    let log_arg = q / (scale * (1.0 - confidence.powf(1.0 / q)));
    let t = (factor * log_arg.ln()).ceil();
    if !t.is_finite() || t > MAX_SAMPLES_PER_INDEX as f64 {
        return Err(Error::CapExceeded {
            size: u64::MAX,
            cap: MAX_SAMPLES_PER_INDEX,
        });
    }
    Ok((t.max(1.0)) as u64)
}

/// Decoded list: (message, exact table presence), presence descending then
/// message ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyList {
    entries: Vec<(Vec<u64>, f64)>,
}

impl PolyList {
    pub fn new(mut entries: Vec<(Vec<u64>, f64)>) -> PolyList {
        entries.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        entries.dedup_by(|a, b| a.0 == b.0);
        PolyList { entries }
    }

    pub fn empty() -> PolyList {
        PolyList {
            entries: Vec::new(),
        }
    }

    pub fn entries(&self) -> &[(Vec<u64>, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains_message(&self, message: &[u64]) -> bool {
        self.entries.iter().any(|(m, _)| m == message)
    }

    /// One line per entry: message integers then presence at 17
    /// significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (message, presence) in &self.entries {
            let syms: Vec<String> = message.iter().map(u64::to_string).collect();
            out.push_str(&syms.join(" "));
            out.push_str(&format!(" {presence:.16e}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<PolyList> {
        let mut entries = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let mut fields: Vec<&str> = line.split_whitespace().collect();
            let presence = fields
                .pop()
                .ok_or_else(|| Error::Format("empty list line".into()))?
                .parse::<f64>()
                .map_err(|_| Error::Format("bad presence value".into()))?;
            let message = fields
                .iter()
                .map(|s| {
                    s.parse()
                        .map_err(|_| Error::Format(format!("bad symbol {s:?}")))
                })
                .collect::<Result<Vec<u64>>>()?;
            entries.push((message, presence));
        }
        Ok(PolyList::new(entries))
    }
}

/// Diagnostics of one decoding run.
#[derive(Clone, Debug)]
pub struct DecodeReport {
    pub samples_per_index: u64,
    pub stored_points: usize,
    pub agreement_threshold: usize,
    /// t^2 - (#points) * degree; reconstruction needs it positive.
    pub applicability_margin: i64,
    pub reconstruction_ran: bool,
    pub candidates: usize,
}

#[derive(Clone, Debug)]
pub struct DecodeOutcome {
    pub list: PolyList,
    pub report: DecodeReport,
}

/// List decoding of the GRS code with locators = the whole field, from a
/// q-row measurement table. Samples T symbols per index, reconstructs
/// polynomials through the observed points, and keeps exactly the
/// messages with exact presence at least 1/q + eps.
///
/// When the sampled point set is too large for reconstruction to apply,
/// no candidates are produced and the report says so; the run itself
/// still succeeds with a sound (possibly incomplete) list.
pub fn decode_grs(
    table: &CorruptedTable,
    field: &Field,
    params: &DecodeParams,
) -> Result<DecodeOutcome> {
    let q = field.order();
    if params.field_order != q {
        return Err(Error::InvalidParameter(format!(
            "params are for order {}, field has order {q}",
            params.field_order
        )));
    }
    if table.block_len() != q || table.alphabet() != q {
        return Err(Error::InvalidParameter(format!(
            "table must be q x q over the full locator set, got {} x {}",
            table.block_len(),
            table.alphabet()
        )));
    }

    // Distinct observed points, one seeded substream per index.
    let mut points = Vec::new();
    for r in 0..q {
        let mut rng = substream(params.seed, r);
        let mut seen = Vec::new();
        for _ in 0..params.samples_per_index {
            let y = table.sample_row(r as usize, &mut rng);
            if !seen.contains(&y) {
                seen.push(y);
            }
        }
        seen.sort_unstable();
        for y in seen {
            points.push((field.element(r)?, field.element(y)?));
        }
    }

    let t = params.agreement_threshold();
    let degree = params.message_len - 1;
    let stored_points = points.len();
    let margin = t as i64 * t as i64 - stored_points as i64 * degree as i64;

    let (candidates, ran) =
        match ReconstructionInstance::new(field.clone(), points, degree, t, None) {
            Ok(inst) => match gs_reconstruct(&inst) {
                Ok(c) => (c, true),
                Err(Error::GsMultiplicityOverflow(_)) => (Vec::new(), false),
                Err(e) => return Err(e),
            },
            Err(Error::GsInapplicable { .. }) => (Vec::new(), false),
            Err(e) => return Err(e),
        };

    let threshold = 1.0 / q as f64 + params.epsilon;
    let mut entries = Vec::new();
    for poly in &candidates {
        let message = poly.coeff_indices(params.message_len)?;
        let codeword = grs_codeword(field, poly)?;
        let presence = table.presence(&codeword)?;
        if presence >= threshold {
            entries.push((message, presence));
        }
    }
    Ok(DecodeOutcome {
        list: PolyList::new(entries),
        report: DecodeReport {
            samples_per_index: params.samples_per_index,
            stored_points,
            agreement_threshold: t,
            applicability_margin: margin,
            reconstruction_ran: ran,
            candidates: candidates.len(),
        },
    })
}

/// Codeword of a message polynomial over the full locator set.
pub fn grs_codeword(field: &Field, poly: &UniPoly) -> Result<Vec<u64>> {
    (0..field.order())
        .map(|r| Ok(poly.eval(field.element(r)?, field).index()))
        .collect()
}

/// Structural and bias conditions of the concatenated pipeline.
#[derive(Clone, Debug)]
pub struct ConcatValidation {
    /// eps^2 >= ((q-1)^3/q^2) (q^{-2m} + eps'); gates the pipeline.
    pub reduction_ok: bool,
    pub reduction_lhs: f64,
    pub reduction_rhs: f64,
    /// The closed-form existence condition as printed, with its +q^{2m}
    /// term; None when q^m theta = 1 makes t undefined.
    pub closed_form_ok: Option<bool>,
    /// Same condition read with q^{-2m} in place of q^{2m}.
    pub closed_form_ok_inverse_reading: Option<bool>,
    pub t_parameter: Option<f64>,
}

/// Evaluates the pipeline conditions for parameters (q, m, theta, eps, eps').
/// Structural violations (q^m theta not integral, 2 theta >= 1 + q^{-m})
/// are hard errors; the bias conditions are reported.
pub fn validate_concat_params(
    q: u64,
    m: usize,
    theta: (u64, u64),
    epsilon: f64,
    epsilon_outer: f64,
) -> Result<ConcatValidation> {
    let code = crate::codes::BlockCode::concat_grs_h(q, m, theta.0, theta.1)?;
    let qm = code.outer_field()?.order() as f64;
    let theta_f = theta.0 as f64 / theta.1 as f64;
    if 2.0 * theta_f >= 1.0 + 1.0 / qm {
        return Err(Error::InvalidParameter(format!(
            "need 2 theta < 1 + q^-m, got theta = {theta_f}"
        )));
    }
    let qf = q as f64;
    let reduction_rhs = (qf - 1.0).powi(3) / (qf * qf) * (1.0 / (qm * qm) + epsilon_outer);
    let reduction_lhs = epsilon * epsilon;
    let outer_len = qm * theta_f;
    let (closed_form_ok, closed_inv, t_parameter) = if outer_len > 1.0 {
        let t = ((qm - 1.0) / (2.0 * (outer_len - 1.0))).cbrt();
        let base = t * t * (theta_f - 1.0 / qm) + (1.0 - 1.0 / qm) / t - 1.0 / qm;
        (
            Some(reduction_lhs > base + qm * qm),
            Some(reduction_lhs > base + 1.0 / (qm * qm)),
            Some(t),
        )
    } else {
        (None, None, None)
    };
    Ok(ConcatValidation {
        reduction_ok: reduction_lhs >= reduction_rhs,
        reduction_lhs,
        reduction_rhs,
        closed_form_ok,
        closed_form_ok_inverse_reading: closed_inv,
        t_parameter,
    })
}

/// Picks the sampling bias for the outer GRS decode: the admissible value
/// maximizing the distance between the requested outer bias and the
/// premise floor. Scanned on a fixed grid so runs are reproducible.
pub fn choose_inner_bias(field_order: u64, message_len: usize, epsilon: f64) -> Result<f64> {
    let q = field_order as f64;
    let lo = (message_len as f64 - 2.0) / q;
    let hi = (q - 1.0) / q;
    let steps = 4 * field_order;
    let mut best: Option<(f64, f64)> = None;
    // Endpoints are excluded: the admissible range is closed, but values
    // interior to it keep the downstream validation away from float ties.
    for i in 1..steps {
        let eps_inner = lo + (hi - lo) * i as f64 / steps as f64;
        let floor = premise_floor(field_order, message_len, eps_inner);
        let margin = epsilon - floor;
        if margin > 0.0 && best.is_none_or(|(bm, _)| margin > bm) {
            best = Some((margin, eps_inner));
        }
    }
    best.map(|(_, e)| e).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "no admissible sampling bias for order {field_order}, n={message_len}, eps={epsilon}"
        ))
    })
}

/// Full concatenated decode: peel the inner layer, list-decode the outer
/// GRS code over F_{q^m} with bias `epsilon_outer`, expand candidates back
/// to q-ary messages and keep those with presence >= 1/q + epsilon in the
/// original table.
#[allow(clippy::too_many_arguments)]
pub fn decode_concat(
    table: &CorruptedTable,
    q: u64,
    m: usize,
    theta: (u64, u64),
    epsilon: f64,
    epsilon_outer: f64,
    confidence: f64,
    seed: u64,
    skip_validation: bool,
) -> Result<DecodeOutcome> {
    if !skip_validation {
        let validation = validate_concat_params(q, m, theta, epsilon, epsilon_outer)?;
        if !validation.reduction_ok {
            return Err(Error::InvalidParameter(format!(
                "bias condition fails: eps^2 = {} < {}",
                validation.reduction_lhs, validation.reduction_rhs
            )));
        }
    }
    let code = crate::codes::BlockCode::concat_grs_h(q, m, theta.0, theta.1)?;
    if table.block_len() != code.block_len()
        || table.alphabet() != q
        || table.factored_m() != Some(m)
    {
        return Err(Error::InvalidParameter(
            "table shape does not match the concatenated code".into(),
        ));
    }
    let outer_field = code.outer_field()?;
    let outer_len = code.message_len() / m;

    let peeled = peel_hadamard(table)?;
    let eps_inner = choose_inner_bias(outer_field.order(), outer_len, epsilon_outer)?;
    let params = DecodeParams::new(
        outer_len,
        outer_field.order(),
        epsilon_outer,
        eps_inner,
        confidence,
        seed,
    )?;
    let outer = decode_grs(&peeled, &outer_field, &params)?;

    let threshold = 1.0 / q as f64 + epsilon;
    let mut entries = Vec::new();
    for (outer_message, _) in outer.list.entries() {
        let message = code.expand_outer_message(outer_message)?;
        let presence = table.presence(&code.codeword(&message)?)?;
        if presence >= threshold {
            entries.push((message, presence));
        }
    }
    Ok(DecodeOutcome {
        list: PolyList::new(entries),
        report: outer.report,
    })
}
