//! Reproducible agreement experiments: random edge subsets of the complete
//! ground hypergraph, each cross-validated, written as JSON lines.

use std::io::Write;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{child_seed, Field, PrimeField, Rationals, SeededRng, DEFAULT_PRIME};
use crate::hypergraph::{Hypergraph, Subsets};
use crate::matroid::{cross_validate, format_ratio, MatroidReport, RetryPolicy};
use crate::oracle::{SparsityOracle, DEFAULT_ORACLE_CAP};
use crate::params::SparsityParams;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub d: usize,
    /// `(k, l)` pairs; one cell per pair and per `n`.
    pub cells: Vec<(usize, usize)>,
    pub trials: usize,
    pub base_seed: u64,
    #[serde(default = "default_cap")]
    pub oracle_cap: usize,
    /// `0` selects the rationals.
    #[serde(default = "default_modulus")]
    pub modulus: u64,
}

fn default_cap() -> usize {
    DEFAULT_ORACLE_CAP
}

fn default_modulus() -> u64 {
    DEFAULT_PRIME
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_min > self.n_max {
            return Err(Error::Parameter(format!(
                "empty n range {}..={}",
                self.n_min, self.n_max
            )));
        }
        if self.n_min < self.d {
            return Err(Error::Parameter(format!(
                "n = {} is smaller than d = {}",
                self.n_min, self.d
            )));
        }
        if self.n_max > self.oracle_cap {
            return Err(Error::OracleCap {
                n: self.n_max,
                cap: self.oracle_cap,
            });
        }
        SparsityOracle::with_cap(self.oracle_cap)?;
        for &(k, ell) in &self.cells {
            SparsityParams::uniform(k, ell, self.d)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSummary {
    pub records: usize,
    pub agreements: usize,
    pub max_failure_bound: BigRational,
}

#[derive(Serialize)]
struct TrialRecord<'a> {
    cell: usize,
    trial: usize,
    n: usize,
    d: usize,
    k: usize,
    l: usize,
    graph: &'a Hypergraph,
    #[serde(flatten)]
    outcome: Outcome,
}

#[derive(Serialize)]
#[serde(untagged)]
enum Outcome {
    Report(MatroidReport),
    Failure { agree: bool, error: String },
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    summary: SummaryBody<'a>,
}

#[derive(Serialize)]
struct SummaryBody<'a> {
    records: usize,
    agreements: usize,
    disagreements: usize,
    max_failure_bound: &'a str,
}

/// Ground set of the `(k, l)` matroid for edge sizes `sizes`: every
/// `i`-subset repeated `i*k - l` times, sizes in the given order.
pub fn ground_set(n: usize, k: usize, ell: usize, sizes: &[usize]) -> Result<Hypergraph> {
    let mut edges = Vec::new();
    for &size in sizes {
        if size * k <= ell {
            return Err(Error::Parameter(format!(
                "edge size {size} admits no copies for k = {k}, l = {ell}"
            )));
        }
        for subset in Subsets::new(n, size) {
            for _ in 0..size * k - ell {
                edges.push(subset.clone());
            }
        }
    }
    Hypergraph::new(n, edges)
}

/// Uniformly sized random subset of the ground edges, in ground-set order.
pub fn random_edge_subset(ground: &Hypergraph, rng: &mut SeededRng) -> Hypergraph {
    let size = rng.below(ground.m() + 1);
    let idx = rng.subset(ground.m(), size);
    ground.edge_subset(&idx).expect("indices in range")
}

/// Seed of trial `trial` in cell `cell`.
pub fn trial_seed(base_seed: u64, cell: usize, trial: usize) -> u64 {
    child_seed(child_seed(base_seed, cell as u64), trial as u64)
}

/// Runs every cell and writes one JSON line per trial plus a summary line.
pub fn run_experiment(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<ExperimentSummary> {
    cfg.validate()?;
    match cfg.modulus {
        0 => run_with_field(cfg, &Rationals, out),
        p => run_with_field(cfg, &PrimeField::new(p)?, out),
    }
}

fn run_with_field<F: Field>(
    cfg: &ExperimentConfig,
    field: &F,
    out: &mut dyn Write,
) -> Result<ExperimentSummary> {
    let oracle = SparsityOracle::with_cap(cfg.oracle_cap)?;
    let mut records = 0;
    let mut agreements = 0;
    let mut max_bound = BigRational::zero();
    let mut cell = 0;
    for &(k, ell) in &cfg.cells {
        let p = SparsityParams::uniform(k, ell, cfg.d)?;
        for n in cfg.n_min..=cfg.n_max {
            let ground = ground_set(n, k, ell, &[cfg.d])?;
            let lines: Vec<(String, Option<BigRational>)> = (0..cfg.trials)
                .into_par_iter()
                .map(|trial| {
                    let seed = trial_seed(cfg.base_seed, cell, trial);
                    let g = random_edge_subset(&ground, &mut SeededRng::new(seed));
                    let outcome = match cross_validate(
                        &g,
                        &p,
                        field,
                        child_seed(seed, 0),
                        RetryPolicy::default(),
                        &oracle,
                    ) {
                        Ok(report) => Outcome::Report(report),
                        Err(e) => Outcome::Failure {
                            agree: false,
                            error: e.to_string(),
                        },
                    };
                    let bound = match &outcome {
                        Outcome::Report(r) if r.agree => Some(parse_ratio(&r.failure_bound)),
                        _ => None,
                    };
                    let record = TrialRecord {
                        cell,
                        trial,
                        n,
                        d: cfg.d,
                        k,
                        l: ell,
                        graph: &g,
                        outcome,
                    };
                    (serde_json::to_string(&record).expect("serializable"), bound)
                })
                .collect();
            for (line, bound) in lines {
                writeln!(out, "{line}")?;
                records += 1;
                if let Some(b) = bound {
                    agreements += 1;
                    if b > max_bound {
                        max_bound = b;
                    }
                }
            }
            cell += 1;
        }
    }
    let bound_text = format_ratio(&max_bound);
    let summary = SummaryLine {
        summary: SummaryBody {
            records,
            agreements,
            disagreements: records - agreements,
            max_failure_bound: &bound_text,
        },
    };
    writeln!(out, "{}", serde_json::to_string(&summary)?)?;
    Ok(ExperimentSummary {
        records,
        agreements,
        max_failure_bound: max_bound,
    })
}

fn parse_ratio(s: &str) -> BigRational {
    let (a, b) = s.split_once('/').expect("a/b");
    BigRational::new(a.parse().expect("integer"), b.parse().expect("integer"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(trials: usize) -> ExperimentConfig {
        ExperimentConfig {
            n_min: 4,
            n_max: 5,
            d: 2,
            cells: vec![(2, 3)],
            trials,
            base_seed: 1,
            oracle_cap: 12,
            modulus: DEFAULT_PRIME,
        }
    }

    #[test]
    fn small_run_agrees() {
        let mut out = Vec::new();
        let s = run_experiment(&cfg(10), &mut out).unwrap();
        assert_eq!((s.records, s.agreements), (20, 20));
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 21);
        for line in text.lines().take(20) {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert_eq!(v["agree"], true);
            Hypergraph::from_json(&v["graph"].to_string()).unwrap();
        }
        assert!(text
            .lines()
            .last()
            .unwrap()
            .starts_with(r#"{"summary":{"records":20,"#));
    }

    #[test]
    fn zero_trials_gives_summary_only() {
        let mut out = Vec::new();
        let s = run_experiment(&cfg(0), &mut out).unwrap();
        assert_eq!(s.records, 0);
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "{\"summary\":{\"records\":0,\"agreements\":0,\"disagreements\":0,\"max_failure_bound\":\"0/1\"}}\n"
        );
    }

    #[test]
    fn oversized_cells_rejected() {
        let mut c = cfg(1);
        c.n_max = 25;
        assert!(matches!(
            run_experiment(&c, &mut Vec::new()),
            Err(Error::OracleCap { .. })
        ));
        c.oracle_cap = 25;
        assert!(run_experiment(&c, &mut Vec::new()).is_err());
    }

    #[test]
    fn ground_sets() {
        assert_eq!(ground_set(4, 2, 3, &[2]).unwrap().m(), 6);
        assert_eq!(ground_set(4, 2, 1, &[3]).unwrap().m(), 20);
        // sizes {2,3} with (2,3): one copy per pair, three per triple
        assert_eq!(ground_set(4, 2, 3, &[2, 3]).unwrap().m(), 6 + 12);
        assert!(ground_set(4, 1, 2, &[2]).is_err());
    }
}
