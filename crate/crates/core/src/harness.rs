//! Mini-benchmark: generated SUTs built with IPOG and BOT-its, verified, tabulated.

use std::fmt::Write as _;
use std::time::Duration;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bot::{build_bot, BotConfig};
use crate::error::{Error, Result};
use crate::ipog::build_ipog;
use crate::model::{SutModel, TestSuite};
use crate::sat::random_kcnf;
use crate::sutgen::{generate, GenConfig};
use crate::verify::verify_mcac;

#[derive(Clone, Debug, PartialEq)]
pub struct HarnessConfig {
    pub n_models: usize,
    pub n_params: usize,
    pub t: usize,
    /// Variables of each random 3-CNF source.
    pub cnf_vars: usize,
    pub clause_ratio: f64,
    pub c_min: f64,
    pub c_max: f64,
    /// Source CNF seeds count up from here, one per attempt; the builders use it directly.
    pub seed: u64,
    /// Source CNFs tried per model before giving up.
    pub max_attempts: u64,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            n_models: 5,
            n_params: 20,
            t: 2,
            cnf_vars: 60,
            clause_ratio: 4.0,
            c_min: 1.0,
            c_max: 5000.0,
            seed: 0,
            max_attempts: 50,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HarnessRow {
    pub model: String,
    pub algorithm: String,
    pub size: usize,
    pub wall_time: Duration,
    pub sat_queries: u64,
    pub allowed: u128,
    pub valid: bool,
}

pub const TABLE_HEADER: &str = "model,algorithm,t,size,wall_time_ms,sat_queries,allowed,valid";

/// Generates `n_models` SUTs; the name of each records its source CNF seed.
pub fn generate_models(cfg: &HarnessConfig) -> Result<Vec<SutModel>> {
    let mut out = Vec::with_capacity(cfg.n_models);
    let mut cnf_seed = cfg.seed;
    let n_clauses = (cfg.cnf_vars as f64 * cfg.clause_ratio).round() as usize;
    while out.len() < cfg.n_models {
        let mut found = None;
        for _ in 0..cfg.max_attempts {
            let mut rng = ChaCha8Rng::seed_from_u64(cnf_seed);
            let cnf = random_kcnf(cfg.cnf_vars, n_clauses, 3, &mut rng);
            let gen = GenConfig {
                gen_seed: cnf_seed,
                ..GenConfig::new(cfg.n_params, cfg.c_min, cfg.c_max)
            };
            cnf_seed += 1;
            match generate(&cnf, &gen) {
                Ok(r) => {
                    let mut model = r.model;
                    model.name = format!("sutg-{}", cnf_seed - 1);
                    found = Some(model);
                    break;
                }
                Err(Error::GenerationFailed(reason)) => log::debug!("cnf seed {}: {reason}", cnf_seed - 1),
                Err(e) => return Err(e),
            }
        }
        out.push(found.ok_or_else(|| {
            Error::InvalidConfig(format!("no source CNF produced a SUT in {} attempts", cfg.max_attempts))
        })?);
    }
    Ok(out)
}

fn row(model: &SutModel, t: usize, suite: &TestSuite) -> Result<HarnessRow> {
    let report = verify_mcac(model, t, suite)?;
    Ok(HarnessRow {
        model: model.name.clone(),
        algorithm: suite.meta.algorithm.clone(),
        size: suite.len(),
        wall_time: suite.meta.wall_time,
        sat_queries: suite.meta.stats.sat_queries + suite.meta.stats.limited_queries,
        allowed: report.allowed,
        valid: report.valid(),
    })
}

/// Builds every model with IPOG and BOT-its. Models run on worker threads; rows keep model order.
pub fn run_mini_benchmark(cfg: &HarnessConfig) -> Result<Vec<HarnessRow>> {
    let models = generate_models(cfg)?;
    let bot = BotConfig {
        seed: cfg.seed,
        ..BotConfig::default()
    };
    let per_model: Vec<Result<Vec<HarnessRow>>> = std::thread::scope(|s| {
        let jobs: Vec<_> = models
            .iter()
            .map(|m| {
                s.spawn(move || -> Result<Vec<HarnessRow>> {
                    let ipog = build_ipog(m, cfg.t, Some(cfg.seed))?;
                    let bots = build_bot(m, cfg.t, bot)?;
                    Ok(vec![row(m, cfg.t, &ipog)?, row(m, cfg.t, &bots)?])
                })
            })
            .collect();
        jobs.into_iter()
            .map(|j| j.join().expect("benchmark worker panicked"))
            .collect()
    });
    let mut rows = Vec::new();
    for r in per_model {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn render_table(rows: &[HarnessRow], t: usize) -> String {
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{t},{},{},{},{},{}",
            r.model,
            r.algorithm,
            r.size,
            r.wall_time.as_millis(),
            r.sat_queries,
            r.allowed,
            r.valid
        );
    }
    out
}
