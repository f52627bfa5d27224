//! Fans a run configuration out into independent (suite, prime) cells.

use asd_forge_core::asd::suites::{run_suite, SuiteParams};
use rayon::prelude::*;

use crate::config::{RunConfig, SuitePlan};
use crate::report::{Entry, Report};
use crate::CliError;

pub const THREADS_ENV: &str = "ASD_FORGE_THREADS";

/// Thread count: the config value, capped by `ASD_FORGE_THREADS` when that is set.
pub fn thread_count(requested: Option<usize>) -> Result<usize, CliError> {
    let cap = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| CliError::Config(format!("{THREADS_ENV}=`{v}` is not a positive integer")))?,
        ),
        Err(_) => None,
    };
    let base = requested.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    Ok(cap.map_or(base, |c| base.min(c)))
}

fn run_cell(plan: &SuitePlan, p: u64, budget: u64) -> Vec<Entry> {
    let name = plan.suite.as_str();
    let n_max = plan.n_max_at(p);
    if n_max > budget {
        return vec![Entry::error(name, Some(p), "budget", format!("n_max = {n_max} exceeds the budget {budget} (raise budget_n_max)"))];
    }
    match run_suite(plan.suite, &SuiteParams { primes: vec![p], n_max }) {
        Ok(b) => b.cells.into_iter().map(Entry::from_cell).collect(),
        Err(e) => vec![Entry::error(name, Some(p), "run", e)],
    }
}

/// Runs every planned cell; entries come back ordered by (suite, prime, cell) whatever the thread count.
pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    let threads = thread_count(cfg.threads)?;
    let tasks: Vec<(&SuitePlan, u64)> = cfg.plans.iter().flat_map(|plan| plan.primes.iter().map(move |&p| (plan, p))).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| CliError::Io(e.to_string()))?;
    let results: Vec<Vec<Entry>> = pool.install(|| tasks.par_iter().map(|(plan, p)| run_cell(plan, *p, cfg.budget_n_max)).collect());
    let mut entries = Vec::new();
    let mut it = results.into_iter();
    for plan in &cfg.plans {
        let name = plan.suite.as_str();
        if !plan.skipped.is_empty() {
            entries.push(Entry::info(name, None, "skipped primes", format!("{name}: not defined at {:?}, skipped", plan.skipped)));
        }
        if plan.primes.is_empty() {
            entries.push(Entry::error(name, None, "no primes", format!("{name}: no admissible prime in the requested range")));
        }
        for _ in &plan.primes {
            entries.extend(it.next().expect("one result per task"));
        }
    }
    Ok(Report::new("suite", entries))
}
