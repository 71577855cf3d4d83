//! Long-running randomized campaigns, opt-in:
//!
//! ```sh
//! cargo test -p qld-core --test soak -- --ignored --nocapture
//! ```

use rand::Rng;

use qld_core::codes::BlockCode;
use qld_core::field::Field;
use qld_core::gs::{gs_reconstruct, reconstruct_bruteforce, ReconstructionInstance};
use qld_core::hadamard::{concat_codeword, lift_hadamard, peel_hadamard};
use qld_core::lattice::bdvp_build;
use qld_core::rng::substream;
use qld_core::table::CorruptedTable;

#[test]
#[ignore]
fn soak_reconstruction_equivalence() {
    let mut rng = substream(0x50AC, 0);
    let fields = [
        (2u64, 1usize),
        (3, 1),
        (5, 1),
        (7, 1),
        (11, 1),
        (13, 1),
        (2, 2),
        (3, 2),
        (2, 3),
    ];
    let mut done = 0u64;
    let mut attempts = 0u64;
    while done < 5000 {
        attempts += 1;
        assert!(attempts < 200_000);
        let (p, m) = fields[rng.random_range(0..fields.len() as u64) as usize];
        let field = Field::new(p, m).unwrap();
        let q = field.order();
        let degree = (1 + rng.random_range(0..3u64) as usize)
            .min(q as usize - 1)
            .min(3);
        let num_points = rng.random_range(degree as u64 + 1..=(2 * q).min(q * q));
        let mut pts: Vec<(u64, u64)> = Vec::new();
        while (pts.len() as u64) < num_points {
            let cand = (rng.random_range(0..q), rng.random_range(0..q));
            if !pts.contains(&cand) {
                pts.push(cand);
            }
        }
        let points: Vec<_> = pts
            .iter()
            .map(|&(x, y)| (field.element(x).unwrap(), field.element(y).unwrap()))
            .collect();
        let min_t = ((pts.len() * degree) as f64).sqrt() as usize + 1;
        let mut pair = None;
        for t in min_t..=pts.len() {
            match ReconstructionInstance::new(field.clone(), points.clone(), degree, t, None) {
                Ok(i) => match gs_reconstruct(&i) {
                    Ok(out) => {
                        pair = Some((i, out));
                        break;
                    }
                    Err(qld_core::Error::GsMultiplicityOverflow(_)) => continue,
                    Err(e) => panic!("{e}"),
                },
                Err(_) => continue,
            }
        }
        let Some((inst, got)) = pair else { continue };
        let brute = reconstruct_bruteforce(&inst).unwrap();
        assert_eq!(
            got, brute,
            "q={q} degree={degree} t={} pts={pts:?}",
            inst.agreement
        );
        done += 1;
    }
    println!("soak: {done} reconstruction instances matched brute force");
}

#[test]
#[ignore]
fn soak_reduction_laws() {
    let mut rng = substream(0xBEEF, 0);
    let mut peel_checks = 0u64;
    let mut lift_checks = 0u64;
    for round in 0..2000u64 {
        let (q, m) = [
            (2u64, 1usize),
            (2, 2),
            (3, 1),
            (3, 2),
            (5, 1),
            (5, 2),
            (7, 1),
        ][(round % 7) as usize];
        let qm = q.pow(m as u32);
        let t = CorruptedTable::random(qm * qm, q, Some(m), &mut rng).unwrap();
        let a: Vec<u64> = (0..qm).map(|_| rng.random_range(0..qm)).collect();
        let cw = concat_codeword(&a, q, m).unwrap();
        let pre_d = t.presence(&cw).unwrap();
        let peeled = peel_hadamard(&t).unwrap();
        for r in 0..peeled.block_len() as usize {
            let sum: f64 = peeled.row(r).iter().sum();
            assert!((sum - 1.0).abs() <= 1e-10);
        }
        if pre_d >= 1.0 / q as f64 {
            let pre_c = peeled.presence(&a).unwrap();
            let bound =
                (q * q) as f64 / ((q - 1) as f64).powi(3) * (pre_d - 1.0 / q as f64).powi(2);
            assert!(pre_c >= bound - 1e-12, "q={q} m={m}: {pre_c} < {bound}");
            peel_checks += 1;
        }

        let tc = CorruptedTable::random(qm, qm, None, &mut rng).unwrap();
        let td = lift_hadamard(&tc, q, m).unwrap();
        let pre_c = tc.presence(&a).unwrap();
        let lifted_pre = td.presence(&cw).unwrap();
        let law = 1.0 / q as f64 + (1.0 - 1.0 / q as f64) * pre_c;
        assert!((lifted_pre - law).abs() <= 1e-12, "q={q} m={m}");
        lift_checks += 1;
    }
    println!("soak: {peel_checks} peel bounds, {lift_checks} affine laws");
}

#[test]
#[ignore]
fn soak_lattice_equivalence() {
    let mut rng = substream(0xCAFE, 0);
    let mut checks = 0u64;
    for round in 0..600u64 {
        let (q, n) = [(2u64, 2usize), (3, 2), (5, 2), (5, 3), (7, 2), (7, 3)][(round % 6) as usize];
        let field = Field::new(q, 1).unwrap();
        let code = BlockCode::grs(field.clone(), q as usize, n).unwrap();
        let locators: Vec<u64> = (0..q).collect();
        let table = CorruptedTable::random(q, q, None, &mut rng).unwrap();
        let eps = (1.0 - 1.0 / q as f64) * (0.05 + 0.9 * rng.random::<f64>());
        let inst = bdvp_build(&table, &field, &locators, n, eps).unwrap();
        let mut got: Vec<Vec<u64>> = inst
            .solve_indicators(1 << 16)
            .unwrap()
            .iter()
            .map(|v| inst.vector_to_message(v).unwrap())
            .collect();
        got.sort();
        let mut want = Vec::new();
        for msg in code.messages().unwrap() {
            let v = inst.embed_message(&msg).unwrap();
            let norm = inst.weighted_norm_sq(&v).unwrap();
            let pre = table.presence(&code.codeword(&msg).unwrap()).unwrap();
            assert!((norm - q as f64 * (1.0 - pre)).abs() <= 1e-12);
            if pre >= 1.0 / q as f64 + eps {
                want.push(msg);
            }
        }
        want.sort();
        assert_eq!(got, want, "q={q} n={n} eps={eps}");
        checks += 1;
    }
    println!("soak: {checks} lattice-ball equivalences");
}
