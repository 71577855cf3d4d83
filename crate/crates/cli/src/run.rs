//! Subcommand implementations. All randomized paths derive their streams
//! from the --seed flag; repeated runs with identical inputs produce
//! byte-identical outputs.

use qld_core::codes::BlockCode;
use qld_core::decoder::{
    decode_concat, decode_grs, validate_concat_params, DecodeOutcome, DecodeParams,
};
use qld_core::field::Field;
use qld_core::gs::{gs_reconstruct, ReconstructionInstance};
use qld_core::johnson::{
    empirical_list_count, johnson_bound, ql_poly_lower_finite, ql_poly_lower_limit, BoundQuery,
    JohnsonBound, LambdaPlacement,
};
use qld_core::lattice::{bdvp_build, recover_npip, NpipRoute};
use qld_core::oracles::{cip_oracle, cip_plant, CipOracle, NpipInstance};
use qld_core::rng::substream;
use qld_core::table::{factored_meta, CorruptedTable};
use qld_core::{Error, Result};

use crate::args::*;
use crate::report::{run_trials, trials_table, write_atomic, TrialRow};

pub fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Encode(a) => encode(a),
        Command::Presence(a) => presence(a),
        Command::Bound(a) => bound(a),
        Command::Reduce(a) => reduce(a),
        Command::DecodeGrs(a) => decode_grs_cmd(a),
        Command::DecodeConcat(a) => decode_concat_cmd(a),
        Command::Cip(a) => cip(a),
        Command::Npip(a) => npip(a),
        Command::Bdvp(a) => bdvp(a),
        Command::Selftest(a) => selftest(a),
    }
}

fn parse_symbols(text: &str) -> Result<Vec<u64>> {
    text.split_whitespace()
        .map(|s| {
            s.parse()
                .map_err(|_| Error::Format(format!("bad symbol {s:?}")))
        })
        .collect()
}

fn parse_theta(text: &str) -> Result<(u64, u64)> {
    let (a, b) = text
        .split_once('/')
        .ok_or_else(|| Error::Format(format!("theta must be NUM/DEN, got {text:?}")))?;
    Ok((
        a.trim()
            .parse()
            .map_err(|_| Error::Format(format!("bad numerator {a:?}")))?,
        b.trim()
            .parse()
            .map_err(|_| Error::Format(format!("bad denominator {b:?}")))?,
    ))
}

fn build_code(args: &CodeArgs) -> Result<BlockCode> {
    match args.kind {
        CodeKindArg::Had => {
            let n = args
                .n
                .ok_or_else(|| Error::InvalidParameter("--n required".into()))?;
            BlockCode::hadamard(args.q, n)
        }
        CodeKindArg::Grs => {
            let field = Field::new(args.q, args.m)?;
            let n = args
                .n
                .ok_or_else(|| Error::InvalidParameter("--n required".into()))?;
            let k = args.k.unwrap_or(field.order() as usize);
            BlockCode::grs(field, k, n)
        }
        CodeKindArg::Concat => {
            let theta = args
                .theta
                .as_deref()
                .ok_or_else(|| Error::InvalidParameter("--theta required".into()))?;
            let (tn, td) = parse_theta(theta)?;
            let code = BlockCode::concat_grs_h(args.q, args.m, tn, td)?;
            if let Some(n) = args.n {
                if n != code.message_len() {
                    return Err(Error::InvalidParameter(format!(
                        "message length is {} for these parameters, not {n}",
                        code.message_len()
                    )));
                }
            }
            Ok(code)
        }
    }
}

fn emit(out: Option<&str>, content: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn encode(args: EncodeArgs) -> Result<()> {
    let code = build_code(&args.code)?;
    if let Some(path) = &args.code_out {
        write_atomic(path, &code.to_descriptor())?;
    }
    if args.uniform {
        let table =
            CorruptedTable::uniform(code.block_len(), code.alphabet_size(), factored_meta(&code))?;
        return emit(args.out.as_deref(), &table.to_text());
    }
    let message = parse_symbols(
        args.message
            .as_deref()
            .ok_or_else(|| Error::InvalidParameter("--message required".into()))?,
    )?;
    if let Some(lambda) = args.plant {
        let table = CorruptedTable::plant(&code, &message, lambda)?;
        return emit(args.out.as_deref(), &table.to_text());
    }
    let content = match args.index {
        Some(idx) => format!("{}\n", code.encode(&message, idx)?),
        None => {
            let cw: Vec<String> = code
                .codeword(&message)?
                .iter()
                .map(u64::to_string)
                .collect();
            format!("{}\n", cw.join(" "))
        }
    };
    emit(args.out.as_deref(), &content)
}

fn presence(args: PresenceArgs) -> Result<()> {
    let table = CorruptedTable::from_text(&std::fs::read_to_string(&args.table)?)?;
    let codeword = match (&args.codeword, &args.message) {
        (Some(cw), None) => parse_symbols(cw)?,
        (None, Some(msg)) => {
            let code = build_code(&CodeArgs {
                kind: args.code.kind.ok_or_else(|| {
                    Error::InvalidParameter("--kind required with --message".into())
                })?,
                q: args
                    .code
                    .q
                    .ok_or_else(|| Error::InvalidParameter("--q required with --message".into()))?,
                m: args.code.m,
                n: args.code.n,
                k: args.code.k,
                theta: args.code.theta.clone(),
            })?;
            code.codeword(&parse_symbols(msg)?)?
        }
        _ => {
            return Err(Error::InvalidParameter(
                "provide exactly one of --codeword or --message".into(),
            ))
        }
    };
    println!("{:.16e}", table.presence(&codeword)?);
    Ok(())
}

fn bound(args: BoundArgs) -> Result<()> {
    match args.which {
        BoundCommand::Johnson {
            q,
            block_len,
            distance,
            eps,
        } => {
            let result = johnson_bound(&BoundQuery {
                q,
                block_len,
                distance,
                epsilon: eps,
            })?;
            match result {
                JohnsonBound::Interior(v) => println!("johnson {v}"),
                JohnsonBound::Boundary(v) => println!("johnson-boundary {v}"),
            }
        }
        BoundCommand::QlPoly {
            q,
            lambda,
            a,
            c,
            n,
            placement,
        } => {
            let value = match (a, c, n) {
                (Some(a), Some(c), Some(n)) => ql_poly_lower_finite(q, lambda, a, c, n)?,
                (None, None, None) => {
                    let placement = match placement {
                        PlacementArg::Divisor => LambdaPlacement::Divisor,
                        PlacementArg::Factor => LambdaPlacement::Factor,
                    };
                    ql_poly_lower_limit(q, lambda, placement)?
                }
                _ => {
                    return Err(Error::InvalidParameter(
                        "--a, --c, --n must be given together".into(),
                    ))
                }
            };
            println!("{value:.16e}");
        }
        BoundCommand::Empirical { table, eps, code } => {
            let table = CorruptedTable::from_text(&std::fs::read_to_string(&table)?)?;
            let code = build_code(&code)?;
            println!("{}", empirical_list_count(&code, &table, eps, 1 << 16)?);
        }
    }
    Ok(())
}

fn reduce(args: ReduceArgs) -> Result<()> {
    let table = CorruptedTable::from_text(&std::fs::read_to_string(&args.input)?)?;
    let out = match (args.peel, args.lift) {
        (true, false) => qld_core::hadamard::peel_hadamard(&table)?,
        (false, true) => {
            let q = args
                .q
                .ok_or_else(|| Error::InvalidParameter("--q required".into()))?;
            let m = args
                .m
                .ok_or_else(|| Error::InvalidParameter("--m required".into()))?;
            qld_core::hadamard::lift_hadamard(&table, q, m)?
        }
        _ => {
            return Err(Error::InvalidParameter(
                "exactly one of --peel or --lift".into(),
            ))
        }
    };
    write_atomic(&args.output, &out.to_text())
}

fn oracle_table(
    oracle: &OracleArgs,
    code: Option<&BlockCode>,
    block_len: u64,
    alphabet: u64,
    factored: Option<usize>,
) -> Result<CorruptedTable> {
    match (&oracle.table, oracle.plant, oracle.uniform) {
        (Some(path), None, false) => CorruptedTable::from_text(&std::fs::read_to_string(path)?),
        (None, Some(lambda), false) => {
            let code = code
                .ok_or_else(|| Error::InvalidParameter("--plant needs code parameters".into()))?;
            let message =
                parse_symbols(oracle.message.as_deref().ok_or_else(|| {
                    Error::InvalidParameter("--plant requires --message".into())
                })?)?;
            CorruptedTable::plant(code, &message, lambda)
        }
        (None, None, true) => CorruptedTable::uniform(block_len, alphabet, factored),
        _ => Err(Error::InvalidParameter(
            "provide exactly one of --table, --plant, --uniform".into(),
        )),
    }
}

fn target_message(expect: &Option<String>, oracle: &OracleArgs) -> Result<Option<Vec<u64>>> {
    match (expect, oracle.plant.is_some(), &oracle.message) {
        (Some(e), _, _) => Ok(Some(parse_symbols(e)?)),
        (None, true, Some(m)) => Ok(Some(parse_symbols(m)?)),
        _ => Ok(None),
    }
}

fn report_decode(
    label: &str,
    outcome: Option<&DecodeOutcome>,
    list_out: Option<&str>,
    report_out: Option<&str>,
    rows: &[TrialRow],
    target_desc: Option<&str>,
) -> Result<()> {
    match outcome {
        Some(outcome) => {
            if let Some(path) = list_out {
                write_atomic(path, &outcome.list.to_text())?;
            }
            println!(
                "{label}: list_size={} samples_per_index={} stored_points={} agreement={} margin={} reconstruction_ran={}",
                outcome.list.len(),
                outcome.report.samples_per_index,
                outcome.report.stored_points,
                outcome.report.agreement_threshold,
                outcome.report.applicability_margin,
                outcome.report.reconstruction_ran,
            );
            for (msg, presence) in outcome.list.entries() {
                let syms: Vec<String> = msg.iter().map(u64::to_string).collect();
                println!("  {} {presence:.16e}", syms.join(" "));
            }
        }
        None => {
            let successes = rows
                .iter()
                .filter(|r| r.target_listed == Some(true))
                .count();
            println!("{label}: trials={} successes={successes}", rows.len());
        }
    }
    if let Some(path) = report_out {
        write_atomic(path, &trials_table(rows, target_desc))?;
    }
    Ok(())
}

fn decode_grs_cmd(args: DecodeGrsArgs) -> Result<()> {
    let field = Field::new(args.q, args.m)?;
    let order = field.order();
    let code = BlockCode::grs(field.clone(), order as usize, args.n)?;
    let table = oracle_table(&args.oracle, Some(&code), order, order, None)?;
    let target = target_message(&args.expect, &args.oracle)?;
    let base = DecodeParams::new(
        args.n,
        order,
        args.eps,
        args.eps_inner,
        args.delta,
        args.seed,
    )?;
    let base = match args.samples {
        Some(s) => base.with_samples(s),
        None => base,
    };
    let single = args.trials == 1;
    let mut last_outcome = None;
    let rows = if single {
        let outcome = decode_grs(&table, &field, &base)?;
        let row = TrialRow::from_outcome(0, args.seed, &outcome, target.as_deref());
        last_outcome = Some(outcome);
        vec![row]
    } else {
        run_trials(args.trials, args.jobs, args.seed, |trial, seed| {
            let params = DecodeParams {
                seed,
                ..base.clone()
            };
            let outcome = decode_grs(&table, &field, &params)?;
            Ok(TrialRow::from_outcome(
                trial,
                seed,
                &outcome,
                target.as_deref(),
            ))
        })?
    };
    let target_desc = target
        .as_ref()
        .map(|t| t.iter().map(u64::to_string).collect::<Vec<_>>().join(" "));
    report_decode(
        "decode-grs",
        last_outcome.as_ref(),
        args.list_out.as_deref(),
        args.report_out.as_deref(),
        &rows,
        target_desc.as_deref(),
    )
}

fn decode_concat_cmd(args: DecodeConcatArgs) -> Result<()> {
    let theta = parse_theta(&args.theta)?;
    if args.check_only {
        let v = validate_concat_params(args.q, args.m, theta, args.eps, args.eps_outer)?;
        println!(
            "reduction_ok={} lhs={:.6e} rhs={:.6e} closed_form={:?} closed_form_inverse={:?}",
            v.reduction_ok,
            v.reduction_lhs,
            v.reduction_rhs,
            v.closed_form_ok,
            v.closed_form_ok_inverse_reading
        );
        return Ok(());
    }
    let code = BlockCode::concat_grs_h(args.q, args.m, theta.0, theta.1)?;
    let table = oracle_table(
        &args.oracle,
        Some(&code),
        code.block_len(),
        args.q,
        Some(args.m),
    )?;
    let target = target_message(&args.expect, &args.oracle)?;
    let single = args.trials == 1;
    let run_one = |seed: u64| -> Result<DecodeOutcome> {
        decode_concat(
            &table,
            args.q,
            args.m,
            theta,
            args.eps,
            args.eps_outer,
            args.delta,
            seed,
            args.force,
        )
    };
    let mut last_outcome = None;
    let rows = if single {
        let outcome = run_one(args.seed)?;
        let row = TrialRow::from_outcome(0, args.seed, &outcome, target.as_deref());
        last_outcome = Some(outcome);
        vec![row]
    } else {
        run_trials(args.trials, args.jobs, args.seed, |trial, seed| {
            let outcome = run_one(seed)?;
            Ok(TrialRow::from_outcome(
                trial,
                seed,
                &outcome,
                target.as_deref(),
            ))
        })?
    };
    let target_desc = target
        .as_ref()
        .map(|t| t.iter().map(u64::to_string).collect::<Vec<_>>().join(" "));
    report_decode(
        "decode-concat",
        last_outcome.as_ref(),
        args.list_out.as_deref(),
        args.report_out.as_deref(),
        &rows,
        target_desc.as_deref(),
    )
}

fn read_points(path: &str) -> Result<Vec<(u64, u64)>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Format(format!(
                "point line needs two integers: {line:?}"
            )));
        }
        out.push((
            fields[0]
                .parse()
                .map_err(|_| Error::Format(format!("bad x {:?}", fields[0])))?,
            fields[1]
                .parse()
                .map_err(|_| Error::Format(format!("bad y {:?}", fields[1])))?,
        ));
    }
    Ok(out)
}

/// Samples the oracle rows, reconstructs candidate polynomials through the
/// observed points at agreement e+1, and keeps exactly those passing at
/// least e+1 points of A including the distinguished one.
fn cip_decode(
    oracle: &CipOracle,
    degree: usize,
    delta: f64,
    samples: Option<u64>,
    seed: u64,
) -> Result<(Vec<Vec<u64>>, usize, u64)> {
    let field = Field::new(oracle.q, 1)?;
    let ell = oracle.locators.len() as f64;
    // Every positive cell has probability at least 1/2; a union bound over
    // the at most 2l-1 cells gives the sample count.
    let samples = samples
        .unwrap_or_else(|| ((2.0 * ell - 1.0) / (1.0 - delta)).log2().ceil().max(1.0) as u64);
    let mut points = Vec::new();
    for (row, &x) in oracle.locators.iter().enumerate() {
        let mut rng = substream(seed, row as u64);
        let mut seen = Vec::new();
        for _ in 0..samples {
            let y = oracle.table.sample_row(row, &mut rng);
            if !seen.contains(&y) {
                seen.push(y);
            }
        }
        seen.sort_unstable();
        for y in seen {
            points.push((field.element(x)?, field.element(y)?));
        }
    }
    let stored = points.len();
    let t = oracle.agreement + 1;
    let candidates = match ReconstructionInstance::new(field.clone(), points, degree, t, None) {
        Ok(inst) => gs_reconstruct(&inst)?,
        Err(Error::GsInapplicable { .. }) => Vec::new(),
        Err(e) => return Err(e),
    };
    let mut verified = Vec::new();
    for poly in &candidates {
        let (hits, has_distinguished) = oracle.agreement_of(&field, poly)?;
        if hits > oracle.agreement && has_distinguished {
            verified.push(poly.coeff_indices(degree + 1)?);
        }
    }
    verified.sort();
    verified.dedup();
    Ok((verified, stored, samples))
}

fn cip(args: CipArgs) -> Result<()> {
    let (oracle, hidden) = match (&args.points, args.plant_locators) {
        (Some(path), None) => (
            cip_oracle(&read_points(path)?, args.q, args.agreement)?,
            None,
        ),
        (None, Some(ell)) => {
            let (oracle, hidden) = cip_plant(args.q, args.degree, ell, args.agreement, args.seed)?;
            (oracle, Some(hidden))
        }
        _ => {
            return Err(Error::InvalidParameter(
                "provide exactly one of --points or --plant-locators".into(),
            ))
        }
    };
    if let Some(path) = &args.table_out {
        write_atomic(path, &oracle.table.to_text())?;
    }
    let (found, stored, samples) =
        cip_decode(&oracle, args.degree, args.delta, args.samples, args.seed)?;
    let t = oracle.agreement + 1;
    let margin = (t * t) as i64 - (stored * args.degree) as i64;
    let mut out = format!(
        "cip q={} locators={} agreement={} epsilon={:.16e} samples={samples} stored_points={stored} margin={margin}\n",
        oracle.q,
        oracle.locators.len(),
        oracle.agreement,
        oracle.epsilon
    );
    out.push_str(&format!("found {}\n", found.len()));
    for poly in &found {
        let syms: Vec<String> = poly.iter().map(u64::to_string).collect();
        out.push_str(&format!("  {}\n", syms.join(" ")));
    }
    if let Some(hidden) = &hidden {
        let syms: Vec<String> = hidden.iter().map(u64::to_string).collect();
        out.push_str(&format!(
            "planted {} recovered={}\n",
            syms.join(" "),
            found.contains(hidden)
        ));
    }
    emit(args.out.as_deref(), &out)
}

fn npip(args: NpipArgs) -> Result<()> {
    let inst = NpipInstance::generate(args.q, args.n, args.m, args.degree, args.seed)?;
    if let Some(path) = &args.table_out {
        write_atomic(path, &inst.table()?.to_text())?;
    }
    let presence = inst.presence_exact(&inst.hidden)?;
    let route = match args.route {
        RouteArg::Auto => NpipRoute::Auto,
        RouteArg::Decoder => NpipRoute::Decoder,
        RouteArg::Lattice => NpipRoute::Lattice,
    };
    let recovered = recover_npip(&inst, route, args.seed)?;
    let hidden: Vec<String> = inst.hidden.iter().map(u64::to_string).collect();
    let got: Vec<String> = recovered.iter().map(u64::to_string).collect();
    let out = format!(
        "npip q={} n={} m={} degree={} presence={}/{}\nhidden {}\nrecovered {}\nmatch={}\n",
        args.q,
        args.n,
        args.m,
        args.degree,
        presence.numer(),
        presence.denom(),
        hidden.join(" "),
        got.join(" "),
        recovered == inst.hidden
    );
    emit(args.out.as_deref(), &out)
}

fn bdvp(args: BdvpArgs) -> Result<()> {
    let table = CorruptedTable::from_text(&std::fs::read_to_string(&args.table)?)?;
    let q = args.q.unwrap_or(table.alphabet());
    let field = Field::new(q, args.m)?;
    let locators = match &args.locators {
        Some(text) => parse_symbols(text)?,
        None => (0..table.block_len()).collect(),
    };
    let inst = bdvp_build(&table, &field, &locators, args.n, args.eps)?;
    if let Some(path) = &args.dump {
        write_atomic(path, &inst.to_text())?;
    }
    let mut out = format!(
        "bdvp q={} M={} n={} xi={:.16e}\n",
        inst.field_order(),
        inst.num_locators(),
        inst.message_len(),
        inst.radius()
    );
    if args.solve || args.map {
        let hits = inst.solve_indicators(1 << 16)?;
        out.push_str(&format!("solutions {}\n", hits.len()));
        for v in &hits {
            if args.map {
                let msg = inst.vector_to_message(v)?;
                let syms: Vec<String> = msg.iter().map(u64::to_string).collect();
                out.push_str(&format!("  message {}\n", syms.join(" ")));
            } else {
                let cells: Vec<String> = v.iter().map(i64::to_string).collect();
                out.push_str(&format!("  vector {}\n", cells.join(" ")));
            }
        }
    }
    emit(args.out.as_deref(), &out)
}

fn selftest(args: SelftestArgs) -> Result<()> {
    let results = qld_core::selftest::run_all(args.seed);
    let mut failures = 0;
    for r in &results {
        match &r.outcome {
            Ok(()) => println!("PASS {}", r.name),
            Err(msg) => {
                failures += 1;
                println!("FAIL {}: {msg}", r.name);
            }
        }
    }
    if failures > 0 {
        return Err(Error::InvalidParameter(format!("{failures} checks failed")));
    }
    println!("all {} checks passed", results.len());
    Ok(())
}
