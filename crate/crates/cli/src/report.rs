//! Trial execution and report files. Reports are byte-stable for fixed
//! inputs and seed: rows are emitted in trial order and carry no
//! environment-dependent data.

use qld_core::decoder::DecodeOutcome;
use qld_core::rng::mix_seed;
use qld_core::{Error, Result};

#[derive(Clone, Debug)]
pub struct TrialRow {
    pub trial: u64,
    pub seed: u64,
    pub reconstruction_ran: bool,
    pub list_size: usize,
    pub stored_points: usize,
    pub applicability_margin: i64,
    pub target_listed: Option<bool>,
}

impl TrialRow {
    pub fn from_outcome(
        trial: u64,
        seed: u64,
        outcome: &DecodeOutcome,
        target: Option<&[u64]>,
    ) -> TrialRow {
        TrialRow {
            trial,
            seed,
            reconstruction_ran: outcome.report.reconstruction_ran,
            list_size: outcome.list.len(),
            stored_points: outcome.report.stored_points,
            applicability_margin: outcome.report.applicability_margin,
            target_listed: target.map(|t| outcome.list.contains_message(t)),
        }
    }
}

/// Runs `trials` decodes with seeds derived from `master`, in parallel up
/// to `jobs` workers; rows come back in trial order regardless of
/// scheduling.
pub fn run_trials<F>(trials: u64, jobs: usize, master: u64, f: F) -> Result<Vec<TrialRow>>
where
    F: Fn(u64, u64) -> Result<TrialRow> + Sync,
{
    let indexed: Vec<(u64, u64)> = (0..trials).map(|t| (t, mix_seed(master, t))).collect();
    if jobs <= 1 {
        return indexed.into_iter().map(|(t, s)| f(t, s)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    pool.install(|| {
        use rayon::prelude::*;
        indexed.into_par_iter().map(|(t, s)| f(t, s)).collect()
    })
}

/// Two-section tab-separated report: per-trial rows, then a one-row
/// summary whose frequency is successes/trials exactly.
pub fn trials_table(rows: &[TrialRow], target_desc: Option<&str>) -> String {
    let mut out = String::new();
    out.push_str("# per-trial results\n");
    match target_desc {
        Some(t) => out.push_str(&format!("# target: {t}\n")),
        None => out.push_str("# target: none\n"),
    }
    out.push_str(
        "# columns: trial\tseed\treconstruction_ran\tlist_size\tstored_points\tapplicability_margin\ttarget_listed\n",
    );
    for r in rows {
        let listed = match r.target_listed {
            Some(true) => "1",
            Some(false) => "0",
            None => "NA",
        };
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            r.trial,
            r.seed,
            u8::from(r.reconstruction_ran),
            r.list_size,
            r.stored_points,
            r.applicability_margin,
            listed
        ));
    }
    out.push_str("# summary\n");
    out.push_str("# columns: trials\tsuccesses\tfrequency\n");
    let trials = rows.len() as u64;
    let successes = rows
        .iter()
        .filter(|r| r.target_listed == Some(true))
        .count() as u64;
    let frequency = if trials == 0 {
        0.0
    } else {
        successes as f64 / trials as f64
    };
    out.push_str(&format!("{trials}\t{successes}\t{frequency:.16e}\n"));
    out
}

/// Writes through a temp file so that a failed run leaves nothing behind.
pub fn write_atomic(path: &str, content: &str) -> Result<()> {
    let tmp = format!("{path}.tmp");
    std::fs::write(&tmp, content)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
