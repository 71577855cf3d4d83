//! Named property checks covering every module's invariants, shared by the
//! CLI selftest command and the test suites. Each check returns Ok or a
//! description of the first violation.

use rand::Rng;

use crate::codes::BlockCode;
use crate::decoder::{decode_grs, DecodeParams, PolyList};
use crate::field::Field;
use crate::gs::{gs_reconstruct, reconstruct_bruteforce, ReconstructionInstance};
use crate::hadamard::{concat_codeword, lift_hadamard, peel_hadamard};
use crate::johnson::{
    empirical_list_count, johnson_bound, presence_threshold, ql_poly_lower_limit, BoundQuery,
    LambdaPlacement,
};
use crate::lattice::{bdvp_build, recover_npip, NpipRoute};
use crate::oracles::NpipInstance;
use crate::rng::substream;
use crate::table::CorruptedTable;

pub struct CheckResult {
    pub name: &'static str,
    pub outcome: Result<(), String>,
}

type Check = fn(u64) -> Result<(), String>;

pub const CHECKS: &[(&str, Check)] = &[
    ("field-axioms", check_field_axioms),
    ("element-codec-bijection", check_codec_bijection),
    ("interpolate-eval-identity", check_interpolate_eval),
    ("encoder-linearity", check_encoder_linearity),
    ("code-distances", check_code_distances),
    ("table-normalization", check_table_normalization),
    ("presence-distance-identity", check_presence_identity),
    ("planted-presence-formula", check_plant_formula),
    ("npip-presence-rational", check_npip_presence),
    ("johnson-sampled-counts", check_johnson_sampled),
    ("johnson-monotone", check_johnson_monotone),
    ("ql-poly-at-zero", check_ql_poly_zero),
    ("peel-lift-normalization", check_reduction_normalization),
    ("lift-affine-law", check_affine_law),
    ("peel-presence-bound", check_peel_bound),
    ("peel-lift-composition", check_composition),
    ("reconstruction-vs-bruteforce", check_gs_equivalence),
    ("decoder-soundness", check_decoder_soundness),
    ("decoder-determinism", check_decoder_determinism),
    ("decoder-completeness", check_decoder_completeness),
    ("norm-identity", check_norm_identity),
    ("lattice-ball-equivalence", check_ball_equivalence),
    ("lattice-closure", check_lattice_closure),
    ("npip-recovery", check_npip_recovery),
];

/// Runs every check with substreams of `seed`.
pub fn run_all(seed: u64) -> Vec<CheckResult> {
    CHECKS
        .iter()
        .enumerate()
        .map(|(i, (name, check))| CheckResult {
            name,
            outcome: check(crate::rng::mix_seed(seed, i as u64)),
        })
        .collect()
}

fn fail(msg: String) -> Result<(), String> {
    Err(msg)
}

fn check_field_axioms(_seed: u64) -> Result<(), String> {
    for (p, m) in [(2u64, 1usize), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2)] {
        let f = Field::new(p, m).map_err(|e| e.to_string())?;
        let els: Vec<_> = f.elements().collect();
        for &a in &els {
            if !a.is_zero() && f.mul(a, f.inv(a).map_err(|e| e.to_string())?) != f.one() {
                return fail(format!("inverse fails for {a} in F_{p}^{m}"));
            }
            for &b in &els {
                for &c in &els {
                    if f.add(f.add(a, b), c) != f.add(a, f.add(b, c))
                        || f.mul(a, f.add(b, c)) != f.add(f.mul(a, b), f.mul(a, c))
                    {
                        return fail(format!("axiom fails in F_{p}^{m}"));
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_codec_bijection(_seed: u64) -> Result<(), String> {
    for (p, m) in [(2u64, 1usize), (2, 3), (3, 2), (5, 1), (7, 2)] {
        let f = Field::new(p, m).map_err(|e| e.to_string())?;
        for k in 0..f.order() {
            let el = f.element(k).map_err(|e| e.to_string())?;
            if el.index() != k {
                return fail(format!("codec round trip fails at {k} in F_{p}^{m}"));
            }
        }
    }
    Ok(())
}

fn check_interpolate_eval(seed: u64) -> Result<(), String> {
    use crate::poly::UniPoly;
    let mut rng = substream(seed, 0);
    for (p, m) in [(5u64, 1usize), (7, 1), (2, 2), (3, 2)] {
        let f = Field::new(p, m).map_err(|e| e.to_string())?;
        for _ in 0..20 {
            let deg = rng.random_range(0..4u64) as usize;
            let coeffs: Vec<u64> = (0..=deg).map(|_| rng.random_range(0..f.order())).collect();
            let poly = UniPoly::from_indices(&f, &coeffs).map_err(|e| e.to_string())?;
            let pts: Vec<_> = f
                .elements()
                .take(deg + 1)
                .map(|x| (x, poly.eval(x, &f)))
                .collect();
            let back = UniPoly::interpolate(&pts, &f).map_err(|e| e.to_string())?;
            if back != poly {
                return fail(format!(
                    "interpolation does not invert evaluation in F_{p}^{m}"
                ));
            }
        }
    }
    Ok(())
}

fn check_encoder_linearity(seed: u64) -> Result<(), String> {
    let mut rng = substream(seed, 0);
    let f5 = Field::new(5, 1).map_err(|e| e.to_string())?;
    let codes = [
        BlockCode::hadamard(3, 2).map_err(|e| e.to_string())?,
        BlockCode::grs(f5, 5, 3).map_err(|e| e.to_string())?,
        BlockCode::concat_grs_h(2, 2, 1, 2).map_err(|e| e.to_string())?,
    ];
    for code in &codes {
        let a = code.message_alphabet();
        let alpha = code.alphabet_field().clone();
        for _ in 0..12 {
            let x: Vec<u64> = (0..code.message_len())
                .map(|_| rng.random_range(0..a))
                .collect();
            let y: Vec<u64> = (0..code.message_len())
                .map(|_| rng.random_range(0..a))
                .collect();
            // Message addition is componentwise mod the message alphabet
            // for all three kinds (GRS messages live in a prime field here).
            let sum: Vec<u64> = x.iter().zip(&y).map(|(&u, &v)| (u + v) % a).collect();
            let cs = code.codeword(&sum).map_err(|e| e.to_string())?;
            let cx = code.codeword(&x).map_err(|e| e.to_string())?;
            let cy = code.codeword(&y).map_err(|e| e.to_string())?;
            for i in 0..cs.len() {
                let want = alpha
                    .add(
                        alpha.element(cx[i]).map_err(|e| e.to_string())?,
                        alpha.element(cy[i]).map_err(|e| e.to_string())?,
                    )
                    .index();
                if cs[i] != want {
                    return fail(format!("linearity fails at position {i}"));
                }
            }
        }
    }
    Ok(())
}

fn check_code_distances(_seed: u64) -> Result<(), String> {
    for q in [2u64, 3, 5, 7, 11, 13] {
        let f = Field::new(q, 1).map_err(|e| e.to_string())?;
        for n in 2..=3usize.min(q as usize) {
            let code = BlockCode::grs(f.clone(), q as usize, n).map_err(|e| e.to_string())?;
            let d = code
                .min_distance_bruteforce(1 << 16)
                .map_err(|e| e.to_string())?;
            if d != q - n as u64 + 1 {
                return fail(format!("GRS({q},{n}) distance {d} != k-n+1"));
            }
        }
    }
    for (q, n) in [(2u64, 2usize), (2, 3), (3, 2), (5, 2), (3, 3)] {
        let code = BlockCode::hadamard(q, n).map_err(|e| e.to_string())?;
        let d = code
            .min_distance_bruteforce(1 << 16)
            .map_err(|e| e.to_string())?;
        let want = q.pow(n as u32) - q.pow(n as u32 - 1);
        if d != want {
            return fail(format!("HAD({q},{n}) distance {d} != {want}"));
        }
    }
    let concat = BlockCode::concat_grs_h(2, 2, 1, 2).map_err(|e| e.to_string())?;
    let d = concat
        .min_distance_bruteforce(1 << 16)
        .map_err(|e| e.to_string())?;
    if d < concat.design_distance().map_err(|e| e.to_string())? {
        return fail(format!("concatenated distance {d} below design"));
    }
    if !concat
        .concat_size_bound_holds()
        .map_err(|e| e.to_string())?
    {
        return fail("concatenated block-size bound fails".into());
    }
    Ok(())
}

fn check_table_normalization(seed: u64) -> Result<(), String> {
    let mut rng = substream(seed, 0);
    for _ in 0..50 {
        let q = [2u64, 3, 5, 7][rng.random_range(0..4u64) as usize];
        let rows = rng.random_range(1..20u64);
        let t = CorruptedTable::random(rows, q, None, &mut rng).map_err(|e| e.to_string())?;
        for r in 0..rows as usize {
            let sum: f64 = t.row(r).iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return fail(format!("row {r} sums to {sum}"));
            }
        }
    }
    Ok(())
}

fn check_presence_identity(seed: u64) -> Result<(), String> {
    let mut rng = substream(seed, 0);
    for _ in 0..40 {
        let q = [2u64, 3, 5][rng.random_range(0..3u64) as usize];
        let rows = rng.random_range(2..12u64);
        let t = CorruptedTable::random(rows, q, None, &mut rng).map_err(|e| e.to_string())?;
        let a: Vec<u64> = (0..rows).map(|_| rng.random_range(0..q)).collect();
        let v = CorruptedTable::embed(&a, q, None).map_err(|e| e.to_string())?;
        let lhs = t.presence(&a).map_err(|e| e.to_string())?;
        let rhs = 1.0 - v.ext_distance(&t).map_err(|e| e.to_string())? / rows as f64;
        if (lhs - rhs).abs() > 1e-12 {
            return fail(format!("presence identity off by {}", (lhs - rhs).abs()));
        }
    }
    Ok(())
}

fn check_plant_formula(seed: u64) -> Result<(), String> {
    let mut rng = substream(seed, 0);
    let f5 = Field::new(5, 1).map_err(|e| e.to_string())?;
    let code = BlockCode::grs(f5, 5, 2).map_err(|e| e.to_string())?;
    for _ in 0..25 {
        let lambda: f64 = rng.random();
        let x = [rng.random_range(0..5u64), rng.random_range(0..5u64)];
        let t = CorruptedTable::plant(&code, &x, lambda).map_err(|e| e.to_string())?;
        let pre = t
            .presence(&code.codeword(&x).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let want = lambda + (1.0 - lambda) / 5.0;
        if (pre - want).abs() > 1e-12 {
            return fail(format!("plant presence {pre} != {want}"));
        }
    }
    Ok(())
}

fn check_npip_presence(_seed: u64) -> Result<(), String> {
    use num_rational::Ratio;
    let inst = NpipInstance::generate(11, 7, 3, 2, 17).map_err(|e| e.to_string())?;
    let pre = inst
        .presence_exact(&inst.hidden)
        .map_err(|e| e.to_string())?;
    let want = Ratio::new(1, 11i64) + Ratio::new(7, 11) * (Ratio::new(1, 3) - Ratio::new(1, 11));
    if pre != want {
        return fail(format!("exact presence {pre} != {want}"));
    }
    Ok(())
}

fn check_johnson_sampled(seed: u64) -> Result<(), String> {
    let mut rng = substream(seed, 0);
    let f7 = Field::new(7, 1).map_err(|e| e.to_string())?;
    let code = BlockCode::grs(f7, 7, 2).map_err(|e| e.to_string())?;
    let d = code
        .min_distance_bruteforce(1 << 16)
        .map_err(|e| e.to_string())?;
    let ell = presence_threshold(7, 7, d);
    for _ in 0..120 {
        let t = CorruptedTable::random(7, 7, None, &mut rng).map_err(|e| e.to_string())?;
        let eps = ell + (1.0 - ell) * (0.05 + 0.9 * rng.random::<f64>());
        let bound = johnson_bound(&BoundQuery {
            q: 7,
            block_len: 7,
            distance: d,
            epsilon: eps,
        })
        .map_err(|e| e.to_string())?;
        let count = empirical_list_count(&code, &t, eps, 1 << 16).map_err(|e| e.to_string())?;
        if count > bound.value() {
            return fail(format!(
                "count {count} exceeds bound {} at eps {eps}",
                bound.value()
            ));
        }
    }
    Ok(())
}

fn check_johnson_monotone(_seed: u64) -> Result<(), String> {
    let ell = presence_threshold(3, 27, 15);
    let mut last = u64::MAX;
    for i in 1..=60 {
        let eps = ell + (1.0 - ell) * i as f64 / 60.0;
        let b = johnson_bound(&BoundQuery {
            q: 3,
            block_len: 27,
            distance: 15,
            epsilon: eps,
        })
        .map_err(|e| e.to_string())?;
        if b.value() > last {
            return fail(format!("bound grew at eps {eps}"));
        }
        last = b.value();
    }
    Ok(())
}

fn check_ql_poly_zero(_seed: u64) -> Result<(), String> {
    for q in [2u64, 3, 5, 7, 11] {
        for placement in [LambdaPlacement::Divisor, LambdaPlacement::Factor] {
            let v = ql_poly_lower_limit(q, 0.0, placement).map_err(|e| e.to_string())?;
            if (v - 1.0).abs() > 1e-15 {
                return fail(format!("limit bound at lambda 0 is {v} for q={q}"));
            }
        }
    }
    Ok(())
}

fn check_reduction_normalization(seed: u64) -> Result<(), String> {
    let mut rng = substream(seed, 0);
    for (q, m) in [(2u64, 1usize), (2, 2), (3, 1), (3, 2), (5, 1)] {
        let qm = q.pow(m as u32);
        for _ in 0..8 {
            let t =
                CorruptedTable::random(qm * qm, q, Some(m), &mut rng).map_err(|e| e.to_string())?;
            let peeled = peel_hadamard(&t).map_err(|e| e.to_string())?;
            for r in 0..peeled.block_len() as usize {
                let sum: f64 = peeled.row(r).iter().sum();
                if (sum - 1.0).abs() > 1e-10 {
                    return fail(format!("peeled row {r} sums to {sum}"));
                }
            }
            let tc = CorruptedTable::random(qm, qm, None, &mut rng).map_err(|e| e.to_string())?;
            let lifted = lift_hadamard(&tc, q, m).map_err(|e| e.to_string())?;
            for r in 0..lifted.block_len() as usize {
                let sum: f64 = lifted.row(r).iter().sum();
                if (sum - 1.0).abs() > 1e-10 {
                    return fail(format!("lifted row {r} sums to {sum}"));
                }
            }
        }
    }
    Ok(())
}

fn check_affine_law(seed: u64) -> Result<(), String> {
    let mut rng = substream(seed, 0);
    for (q, m) in [(2u64, 1usize), (2, 2), (3, 1), (3, 2), (5, 1), (5, 2)] {
        let qm = q.pow(m as u32);
        for _ in 0..12 {
            let tc = CorruptedTable::random(qm, qm, None, &mut rng).map_err(|e| e.to_string())?;
            let td = lift_hadamard(&tc, q, m).map_err(|e| e.to_string())?;
            let a: Vec<u64> = (0..qm).map(|_| rng.random_range(0..qm)).collect();
            let cw = concat_codeword(&a, q, m).map_err(|e| e.to_string())?;
            let pre_c = tc.presence(&a).map_err(|e| e.to_string())?;
            let pre_d = td.presence(&cw).map_err(|e| e.to_string())?;
            let law = 1.0 / q as f64 + (1.0 - 1.0 / q as f64) * pre_c;
            if (pre_d - law).abs() > 1e-12 {
                return fail(format!("affine law off by {:e}", (pre_d - law).abs()));
            }
        }
    }
    Ok(())
}

fn check_peel_bound(seed: u64) -> Result<(), String> {
    let mut rng = substream(seed, 0);
    for (q, m) in [(2u64, 1usize), (2, 2), (3, 1), (3, 2), (5, 1)] {
        let qm = q.pow(m as u32);
        for _ in 0..10 {
            let t =
                CorruptedTable::random(qm * qm, q, Some(m), &mut rng).map_err(|e| e.to_string())?;
            let a: Vec<u64> = (0..qm).map(|_| rng.random_range(0..qm)).collect();
            let cw = concat_codeword(&a, q, m).map_err(|e| e.to_string())?;
            let pre_d = t.presence(&cw).map_err(|e| e.to_string())?;
            if pre_d < 1.0 / q as f64 {
                continue;
            }
            let peeled = peel_hadamard(&t).map_err(|e| e.to_string())?;
            let pre_c = peeled.presence(&a).map_err(|e| e.to_string())?;
            let bound =
                (q * q) as f64 / ((q - 1) as f64).powi(3) * (pre_d - 1.0 / q as f64).powi(2);
            if pre_c < bound - 1e-12 {
                return fail(format!("peel bound violated: {pre_c} < {bound}"));
            }
        }
    }
    Ok(())
}

fn check_composition(seed: u64) -> Result<(), String> {
    let mut rng = substream(seed, 0);
    for (q, m) in [(2u64, 2usize), (3, 1), (5, 1)] {
        let qm = q.pow(m as u32);
        let a: Vec<u64> = (0..qm).map(|_| rng.random_range(0..qm)).collect();
        let tc = CorruptedTable::embed(&a, qm, None).map_err(|e| e.to_string())?;
        let lifted = lift_hadamard(&tc, q, m).map_err(|e| e.to_string())?;
        let back = peel_hadamard(&lifted).map_err(|e| e.to_string())?;
        let pre = back.presence(&a).map_err(|e| e.to_string())?;
        if (pre - 1.0).abs() > 1e-12 {
            return fail(format!("composition presence {pre} != 1"));
        }
    }
    Ok(())
}

fn check_gs_equivalence(seed: u64) -> Result<(), String> {
    let mut rng = substream(seed, 0);
    let mut done = 0;
    let mut attempt = 0u64;
    while done < 25 {
        attempt += 1;
        if attempt > 500 {
            return fail("could not build enough reconstruction instances".into());
        }
        let q = [2u64, 3, 5, 7, 11, 13][rng.random_range(0..6u64) as usize];
        let field = Field::new(q, 1).map_err(|e| e.to_string())?;
        let degree = 1 + rng.random_range(0..2u64).min(q - 2) as usize;
        let num_points = rng.random_range(degree as u64 + 1..=(2 * q).min(q * q));
        let mut pts = Vec::new();
        while (pts.len() as u64) < num_points {
            let x = rng.random_range(0..q);
            let y = rng.random_range(0..q);
            if !pts.contains(&(x, y)) {
                pts.push((x, y));
            }
        }
        let points: Vec<_> = pts
            .iter()
            .map(|&(x, y)| (field.element(x).unwrap(), field.element(y).unwrap()))
            .collect();
        let min_t = ((pts.len() * degree) as f64).sqrt() as usize + 1;
        let t = (min_t + 1).min(pts.len());
        let inst = match ReconstructionInstance::new(field, points, degree, t, None) {
            Ok(i) => i,
            Err(_) => continue,
        };
        let got = match gs_reconstruct(&inst) {
            Ok(g) => g,
            Err(_) => continue,
        };
        let brute = reconstruct_bruteforce(&inst).map_err(|e| e.to_string())?;
        if got != brute {
            return fail(format!("reconstruction mismatch at q={q}, t={t}"));
        }
        done += 1;
    }
    Ok(())
}

fn check_decoder_soundness(seed: u64) -> Result<(), String> {
    let field = Field::new(7, 1).map_err(|e| e.to_string())?;
    let code = BlockCode::grs(field.clone(), 7, 2).map_err(|e| e.to_string())?;
    let table = CorruptedTable::plant(&code, &[3, 5], 0.9).map_err(|e| e.to_string())?;
    for trial in 0..30 {
        let params = DecodeParams::new(2, 7, 0.65, 0.3, 0.5, crate::rng::mix_seed(seed, trial))
            .map_err(|e| e.to_string())?;
        let out = decode_grs(&table, &field, &params).map_err(|e| e.to_string())?;
        for (msg, presence) in out.list.entries() {
            let direct = table
                .presence(&code.codeword(msg).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            if direct < 1.0 / 7.0 + 0.65 || direct != *presence {
                return fail(format!("unsound listing of {msg:?}"));
            }
        }
    }
    Ok(())
}

fn check_decoder_determinism(seed: u64) -> Result<(), String> {
    let field = Field::new(5, 1).map_err(|e| e.to_string())?;
    let code = BlockCode::grs(field.clone(), 5, 2).map_err(|e| e.to_string())?;
    let table = CorruptedTable::plant(&code, &[1, 4], 0.85).map_err(|e| e.to_string())?;
    let params = DecodeParams::new(2, 5, 0.65, 0.25, 0.5, seed).map_err(|e| e.to_string())?;
    let a = decode_grs(&table, &field, &params).map_err(|e| e.to_string())?;
    let b = decode_grs(&table, &field, &params).map_err(|e| e.to_string())?;
    if a.list.to_text() != b.list.to_text() {
        return fail("same seed produced different lists".into());
    }
    let _: PolyList = PolyList::from_text(&a.list.to_text()).map_err(|e| e.to_string())?;
    Ok(())
}

fn check_decoder_completeness(seed: u64) -> Result<(), String> {
    let field = Field::new(5, 1).map_err(|e| e.to_string())?;
    let code = BlockCode::grs(field.clone(), 5, 3).map_err(|e| e.to_string())?;
    let x = [2u64, 0, 1];
    let lambda = 0.97;
    let table = CorruptedTable::plant(&code, &x, lambda).map_err(|e| e.to_string())?;
    let trials = 60u64;
    let mut hits = 0;
    for trial in 0..trials {
        let params = DecodeParams::new(3, 5, 0.75, 0.4, 0.5, crate::rng::mix_seed(seed, trial))
            .map_err(|e| e.to_string())?;
        let out = decode_grs(&table, &field, &params).map_err(|e| e.to_string())?;
        if out.list.contains_message(&x) {
            hits += 1;
        }
    }
    // delta = 0.5; allow the 3 sqrt(N) slack.
    let need = (0.5 * trials as f64 - 3.0 * (trials as f64).sqrt()).ceil() as u64;
    if hits < need {
        return fail(format!(
            "planted message found {hits}/{trials}, need {need}"
        ));
    }
    Ok(())
}

fn check_norm_identity(seed: u64) -> Result<(), String> {
    let mut rng = substream(seed, 0);
    let f = Field::new(5, 1).map_err(|e| e.to_string())?;
    let code = BlockCode::grs(f.clone(), 5, 2).map_err(|e| e.to_string())?;
    let locators: Vec<u64> = (0..5).collect();
    for _ in 0..20 {
        let table = CorruptedTable::random(5, 5, None, &mut rng).map_err(|e| e.to_string())?;
        let inst = bdvp_build(&table, &f, &locators, 2, 0.4).map_err(|e| e.to_string())?;
        for msg in code.messages().map_err(|e| e.to_string())? {
            let v = inst.embed_message(&msg).map_err(|e| e.to_string())?;
            let norm = inst.weighted_norm_sq(&v).map_err(|e| e.to_string())?;
            let pre = table
                .presence(&code.codeword(&msg).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            if (norm - 5.0 * (1.0 - pre)).abs() > 1e-12 {
                return fail(format!(
                    "norm identity off by {:e}",
                    (norm - 5.0 * (1.0 - pre)).abs()
                ));
            }
        }
    }
    Ok(())
}

fn check_ball_equivalence(seed: u64) -> Result<(), String> {
    let mut rng = substream(seed, 0);
    let f = Field::new(5, 1).map_err(|e| e.to_string())?;
    let code = BlockCode::grs(f.clone(), 5, 2).map_err(|e| e.to_string())?;
    let locators: Vec<u64> = (0..5).collect();
    for _ in 0..15 {
        let table = CorruptedTable::random(5, 5, None, &mut rng).map_err(|e| e.to_string())?;
        let eps = 0.2 + 0.5 * rng.random::<f64>();
        let inst = bdvp_build(&table, &f, &locators, 2, eps).map_err(|e| e.to_string())?;
        let mut got: Vec<Vec<u64>> = inst
            .solve_indicators(1 << 16)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|v| inst.vector_to_message(v).unwrap())
            .collect();
        got.sort();
        let mut want = Vec::new();
        for msg in code.messages().map_err(|e| e.to_string())? {
            let pre = table
                .presence(&code.codeword(&msg).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            if pre >= 0.2 + eps {
                want.push(msg);
            }
        }
        want.sort();
        if got != want {
            return fail(format!("ball/threshold sets differ at eps {eps}"));
        }
    }
    Ok(())
}

fn check_lattice_closure(seed: u64) -> Result<(), String> {
    let mut rng = substream(seed, 0);
    let f = Field::new(5, 1).map_err(|e| e.to_string())?;
    let table = CorruptedTable::random(5, 5, None, &mut rng).map_err(|e| e.to_string())?;
    let locators: Vec<u64> = (0..5).collect();
    let inst = bdvp_build(&table, &f, &locators, 2, 0.3).map_err(|e| e.to_string())?;
    for _ in 0..20 {
        let a = [rng.random_range(0..5u64), rng.random_range(0..5u64)];
        let b = [rng.random_range(0..5u64), rng.random_range(0..5u64)];
        let va = inst.embed_message(&a).map_err(|e| e.to_string())?;
        let vb = inst.embed_message(&b).map_err(|e| e.to_string())?;
        let ca = rng.random_range(-3i64..=3);
        let cb = rng.random_range(-3i64..=3);
        let comb: Vec<i64> = va.iter().zip(&vb).map(|(&u, &v)| ca * u + cb * v).collect();
        if !inst.is_member(&comb).map_err(|e| e.to_string())? {
            return fail(format!("closure fails for {ca} * v(a) + {cb} * v(b)"));
        }
    }
    Ok(())
}

fn check_npip_recovery(seed: u64) -> Result<(), String> {
    let inst = NpipInstance::generate(11, 8, 2, 1, seed).map_err(|e| e.to_string())?;
    let got = recover_npip(&inst, NpipRoute::Lattice, seed).map_err(|e| e.to_string())?;
    if got != inst.hidden {
        return fail(format!("recovered {got:?}, hidden {:?}", inst.hidden));
    }
    Ok(())
}
