//! Closed-form q-ary Johnson-type list-size bounds and their sampled
//! empirical verification.

use crate::codes::BlockCode;
use crate::error::{Error, Result};
use crate::table::CorruptedTable;

/// Inputs of the list-size bound for an (M, n, d)_q code at presence
/// threshold epsilon.
#[derive(Clone, Copy, Debug)]
pub struct BoundQuery {
    pub q: u64,
    pub block_len: u64,
    pub distance: u64,
    pub epsilon: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JohnsonBound {
    Interior(u64),
    /// Epsilon sits on the applicability threshold; the cap degrades to
    /// 2M(q-1) - 1.
    Boundary(u64),
}

impl JohnsonBound {
    pub fn value(&self) -> u64 {
        match *self {
            JohnsonBound::Interior(v) | JohnsonBound::Boundary(v) => v,
        }
    }
}

/// Smallest epsilon the bound applies to:
/// 1/q + (1 - 1/q) sqrt(1 - (d/M) q/(q-1)).
pub fn presence_threshold(q: u64, block_len: u64, distance: u64) -> f64 {
    let q = q as f64;
    let radicand = 1.0 - (distance as f64 / block_len as f64) * (q / (q - 1.0));
    1.0 / q + (1.0 - 1.0 / q) * radicand.max(0.0).sqrt()
}

/// List-size cap min{ M(q-1), d(1-1/q) / (d(1-1/q) + M rho) } with
/// rho = (eps - 1/q)^2 - (1 - 1/q)^2, floor-ed; at the threshold (to
/// 1e-12 relative) the boundary cap 2M(q-1)-1 instead.
pub fn johnson_bound(query: &BoundQuery) -> Result<JohnsonBound> {
    let BoundQuery {
        q,
        block_len,
        distance,
        epsilon,
    } = *query;
    if q < 2 || block_len == 0 || distance == 0 || distance > block_len {
        return Err(Error::InvalidParameter(format!(
            "need q >= 2 and 0 < d <= M, got q={q}, M={block_len}, d={distance}"
        )));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!(
            "epsilon {epsilon} outside [0, 1]"
        )));
    }
    let ell = presence_threshold(q, block_len, distance);
    let boundary_cap = 2 * block_len * (q - 1) - 1;
    if (epsilon - ell).abs() <= 1e-12 * ell {
        return Ok(JohnsonBound::Boundary(boundary_cap));
    }
    if epsilon < ell {
        return Err(Error::BoundInapplicable {
            epsilon,
            threshold: ell,
        });
    }
    let qf = q as f64;
    let m = block_len as f64;
    let d = distance as f64;
    let rho = (epsilon - 1.0 / qf).powi(2) - (1.0 - 1.0 / qf).powi(2);
    let denom = d * (1.0 - 1.0 / qf) + m * rho;
    if denom <= 0.0 {
        // Only reachable by rounding right at the threshold.
        return Ok(JohnsonBound::Boundary(boundary_cap));
    }
    let ratio = d * (1.0 - 1.0 / qf) / denom;
    let cap = (m * (qf - 1.0)).min(ratio);
    Ok(JohnsonBound::Interior(cap.floor() as u64))
}

/// Placement of lambda inside the radicand; the finite and limiting forms
/// of the polynomial-list bound disagree on it, so both are exposed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LambdaPlacement {
    /// radicand 1 - lambda/(1 - 1/q), the an^c -> infinity limit of the
    /// finite form.
    Divisor,
    /// radicand 1 - lambda (1 - 1/q).
    Factor,
}

/// Finite-list lower bound
/// 1/q + (1-1/q) sqrt(1 - lambda/(1-1/q) + lambda/(a n^c (1-1/q))).
pub fn ql_poly_lower_finite(q: u64, lambda: f64, a: f64, c: f64, n: u64) -> Result<f64> {
    check_ql_args(q, lambda)?;
    if a <= 0.0 || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "need a > 0 and n >= 1, got a={a}, n={n}"
        )));
    }
    let one_minus = 1.0 - 1.0 / q as f64;
    let cap = a * (n as f64).powf(c);
    let radicand = 1.0 - lambda / one_minus + lambda / (cap * one_minus);
    sqrt_bound(q, radicand)
}

/// Limiting form of the bound, under either lambda placement.
pub fn ql_poly_lower_limit(q: u64, lambda: f64, placement: LambdaPlacement) -> Result<f64> {
    check_ql_args(q, lambda)?;
    let one_minus = 1.0 - 1.0 / q as f64;
    let radicand = match placement {
        LambdaPlacement::Divisor => 1.0 - lambda / one_minus,
        LambdaPlacement::Factor => 1.0 - lambda * one_minus,
    };
    sqrt_bound(q, radicand)
}

fn check_ql_args(q: u64, lambda: f64) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("q {q} below 2")));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParameter(format!(
            "lambda {lambda} outside [0, 1]"
        )));
    }
    Ok(())
}

fn sqrt_bound(q: u64, radicand: f64) -> Result<f64> {
    if radicand < 0.0 {
        return Err(Error::NegativeRadicand(radicand));
    }
    Ok(1.0 / q as f64 + (1.0 - 1.0 / q as f64) * radicand.sqrt())
}

/// Exact |{x : presence of C_x in w >= epsilon}| by brute force over the
/// message space.
pub fn empirical_list_count(
    code: &BlockCode,
    table: &CorruptedTable,
    epsilon: f64,
    cap: u64,
) -> Result<u64> {
    if table.block_len() != code.block_len() || table.alphabet() != code.alphabet_size() {
        return Err(Error::LengthMismatch {
            expected: code.block_len() as usize,
            got: table.block_len() as usize,
        });
    }
    let size = code
        .message_space_size()
        .filter(|&s| s <= cap)
        .ok_or(Error::CapExceeded {
            size: u64::MAX,
            cap,
        })?;
    let _ = size;
    let mut count = 0;
    for x in code.messages()? {
        if table.presence(&code.codeword(&x)?)? >= epsilon {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::rng::substream;

    #[test]
    fn worked_interior_example() {
        // q=2, M=4, d=2: threshold is 1/2 + (1/2) sqrt(1 - (1/2)*2) = 1/2,
        // rho = (1/4)^2 - (1/2)^2 = -3/16, ratio = 1 / (1 - 3/4) = 4.
        let b = johnson_bound(&BoundQuery {
            q: 2,
            block_len: 4,
            distance: 2,
            epsilon: 0.75,
        })
        .unwrap();
        assert_eq!(b, JohnsonBound::Interior(4));
    }

    #[test]
    fn boundary_and_inapplicable() {
        let ell = presence_threshold(2, 4, 2);
        assert_eq!(ell, 0.5);
        let b = johnson_bound(&BoundQuery {
            q: 2,
            block_len: 4,
            distance: 2,
            epsilon: ell,
        })
        .unwrap();
        assert_eq!(b, JohnsonBound::Boundary(7)); // 2M(q-1) - 1
        assert!(matches!(
            johnson_bound(&BoundQuery {
                q: 2,
                block_len: 4,
                distance: 2,
                epsilon: 0.4
            }),
            Err(Error::BoundInapplicable { .. })
        ));
    }

    #[test]
    fn bound_monotone_in_epsilon() {
        let ell = presence_threshold(3, 9, 4);
        let mut last = u64::MAX;
        for i in 1..=40 {
            let eps = ell + (1.0 - ell) * i as f64 / 40.0;
            let b = johnson_bound(&BoundQuery {
                q: 3,
                block_len: 9,
                distance: 4,
                epsilon: eps,
            })
            .unwrap();
            assert!(b.value() <= last);
            last = b.value();
        }
    }

    #[test]
    fn ql_poly_examples() {
        for q in [2, 3, 5, 7] {
            assert!((ql_poly_lower_finite(q, 0.0, 2.0, 2.0, 10).unwrap() - 1.0).abs() < 1e-15);
            assert!(
                (ql_poly_lower_limit(q, 0.0, LambdaPlacement::Factor).unwrap() - 1.0).abs() < 1e-15
            );
        }
        let v = ql_poly_lower_limit(2, 1.0, LambdaPlacement::Factor).unwrap();
        assert!((v - (0.5 + 0.5 * 0.5f64.sqrt())).abs() < 1e-15);

        // Huge a n^c reduces the finite form to the divisor-placement limit.
        let fin = ql_poly_lower_finite(5, 0.5, 1e9, 3.0, 1000).unwrap();
        let lim = ql_poly_lower_limit(5, 0.5, LambdaPlacement::Divisor).unwrap();
        assert!((fin - lim).abs() < 1e-9);

        assert!(matches!(
            ql_poly_lower_finite(2, 1.0, 10.0, 1.0, 10),
            Err(Error::NegativeRadicand(_))
        ));
    }

    #[test]
    fn empirical_count_examples() {
        let f5 = Field::new(5, 1).unwrap();
        let code = BlockCode::grs(f5, 5, 2).unwrap();
        let x = [2u64, 3];
        let cw = code.codeword(&x).unwrap();

        // Point mass: only x reaches presence 1 (positive distance).
        let v = CorruptedTable::embed(&cw, 5, None).unwrap();
        assert_eq!(empirical_list_count(&code, &v, 1.0, 1 << 16).unwrap(), 1);

        // Uniform: every message has presence exactly 1/q.
        let u = CorruptedTable::uniform(5, 5, None).unwrap();
        assert_eq!(empirical_list_count(&code, &u, 0.2, 1 << 16).unwrap(), 25);
    }

    #[test]
    fn sampled_counts_never_exceed_the_bound() {
        let f7 = Field::new(7, 1).unwrap();
        let code = BlockCode::grs(f7, 7, 2).unwrap();
        let d = code.min_distance_bruteforce(1 << 16).unwrap();
        let ell = presence_threshold(7, 7, d);
        let mut rng = substream(2024, 0);
        for trial in 0..200 {
            let t = CorruptedTable::random(7, 7, None, &mut rng).unwrap();
            let eps = ell + (1.0 - ell) * ((trial % 10) as f64 + 0.7) / 11.0;
            let bound = johnson_bound(&BoundQuery {
                q: 7,
                block_len: 7,
                distance: d,
                epsilon: eps,
            })
            .unwrap();
            let count = empirical_list_count(&code, &t, eps, 1 << 16).unwrap();
            assert!(
                count <= bound.value(),
                "count {count} above {bound:?} at eps {eps}"
            );
        }
    }
}
