//! Command-line front end.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::abgroup::{bimodule_from_spec, group_from_spec, ring_from_spec, FinAbGroup};
use crate::cache::Cache;
use crate::error::{Error, Result};
use crate::hochschild::{HochschildData, TotalOptions};
use crate::intlinalg::FPAbelianGroup;
use crate::qcomplex::{additivity_isomorphisms_from, QChainData, DEFAULT_BUDGET};
use crate::selftest;

#[derive(Debug, Parser)]
#[command(
    name = "maclane",
    version,
    about = "Exact MacLane homology of finite rings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Maximum number of cube functions enumerated per degree.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Directory for cached bases and differentials.
    #[arg(long, global = true, env = "MACLANE_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Include wall-clock timings in the output.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Hochschild homology of Q_*(R) with coefficients in an R-bimodule.
    Hml {
        /// `Z/n` or a ring table JSON file.
        #[arg(long)]
        ring: String,
        /// `self` or a bimodule table JSON file.
        #[arg(long, default_value = "self")]
        coefficients: String,
        #[arg(long)]
        max_degree: usize,
        /// Use the normalized bar complex.
        #[arg(long)]
        normalized: bool,
    },
    /// Homology of Q_*(A).
    QHomology {
        #[arg(long)]
        group: String,
        #[arg(long)]
        max_degree: usize,
    },
    /// Whether Q(U) + Q(V) -> Q(U + V) is an isomorphism on homology.
    Additivity {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        max_degree: usize,
    },
    /// Run the structural invariant suite.
    Selftest,
}

/// Result of one command, renderable as text or JSON.
#[derive(Debug, Clone)]
pub struct Report {
    pub json: Value,
    pub text: String,
    pub success: bool,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => serde_json::to_string(&self.json).expect("reports serialize"),
        }
    }
}

struct Timer {
    enabled: bool,
    marks: Vec<u128>,
    last: Instant,
}

impl Timer {
    fn new(enabled: bool) -> Self {
        Timer {
            enabled,
            marks: Vec::new(),
            last: Instant::now(),
        }
    }

    fn mark(&mut self) {
        let now = Instant::now();
        self.marks.push((now - self.last).as_millis());
        self.last = now;
    }

    fn attach(&self, json: &mut Value) {
        if self.enabled {
            json["timings_ms"] = json!(self.marks);
        }
    }
}

fn chain_data(common: &Common, group: &FinAbGroup, max_n: usize) -> Result<QChainData> {
    match &common.cache_dir {
        Some(dir) => Cache::open(dir)?.chain_data(group, max_n, common.budget),
        None => QChainData::build(group, max_n, common.budget),
    }
}

fn group_strings(groups: &[FPAbelianGroup]) -> Vec<String> {
    groups.iter().map(ToString::to_string).collect()
}

pub fn run(command: &Command, common: &Common) -> Result<Report> {
    let mut timer = Timer::new(common.timings);
    match command {
        Command::Hml {
            ring,
            coefficients,
            max_degree,
            normalized,
        } => {
            let k = *max_degree;
            let r = ring_from_spec(ring)?;
            let m = bimodule_from_spec(&r, coefficients)?;
            let chains = chain_data(common, r.additive(), k).map_err(|e| match e {
                Error::Budget { degree, .. } => Error::BarBudget {
                    p: 1,
                    q: degree,
                    source: Box::new(e),
                },
                e => e,
            })?;
            timer.mark();
            let total = HochschildData::from_chains(&r, &m, chains)?.total_complex(
                k,
                TotalOptions {
                    normalized: *normalized,
                },
            )?;
            timer.mark();
            let groups = (0..=k)
                .map(|n| total.homology(n))
                .collect::<Result<Vec<_>>>()?;
            timer.mark();
            let names = group_strings(&groups);
            let text = names
                .iter()
                .enumerate()
                .map(|(n, g)| format!("HML_{n}({ring}; {coefficients}) = {g}\n"))
                .collect();
            let mut json = json!({
                "command": "hml",
                "input": {
                    "ring": ring,
                    "coefficients": coefficients,
                    "max_degree": k,
                    "budget": common.budget,
                    "normalized": normalized,
                },
                "degrees": (0..=k).collect::<Vec<_>>(),
                "groups": names,
                "HML": names,
            });
            timer.attach(&mut json);
            Ok(Report {
                json,
                text,
                success: true,
            })
        }
        Command::QHomology { group, max_degree } => {
            let k = *max_degree;
            let g = group_from_spec(group)?;
            let chains = chain_data(common, &g, k + 1)?;
            timer.mark();
            let complex = chains.complex()?;
            let groups = (0..=k)
                .map(|n| complex.homology(n))
                .collect::<Result<Vec<_>>>()?;
            timer.mark();
            let names = group_strings(&groups);
            let text = names
                .iter()
                .enumerate()
                .map(|(n, h)| format!("H_{n}(Q({group})) = {h}\n"))
                .collect();
            let mut json = json!({
                "command": "q-homology",
                "input": { "group": group, "max_degree": k, "budget": common.budget },
                "degrees": (0..=k).collect::<Vec<_>>(),
                "groups": names,
            });
            timer.attach(&mut json);
            Ok(Report {
                json,
                text,
                success: true,
            })
        }
        Command::Additivity {
            left,
            right,
            max_degree,
        } => {
            let k = *max_degree;
            let (u, v) = (group_from_spec(left)?, group_from_spec(right)?);
            let sum = u.direct_sum(&v)?;
            let (cu, cv, cs) = (
                chain_data(common, &u, k + 1)?,
                chain_data(common, &v, k + 1)?,
                chain_data(common, &sum, k + 1)?,
            );
            timer.mark();
            let verdicts = additivity_isomorphisms_from(&cu, &cv, &cs, k)?;
            let groups = (0..=k)
                .map(|n| cs.complex()?.homology(n))
                .collect::<Result<Vec<_>>>()?;
            timer.mark();
            let names = group_strings(&groups);
            let text = verdicts
                .iter()
                .enumerate()
                .map(|(n, ok)| {
                    let verdict = if *ok {
                        "isomorphism"
                    } else {
                        "not an isomorphism"
                    };
                    format!(
                        "H_{n}: Q({left}) + Q({right}) -> Q({sum}): {verdict} ({})\n",
                        names[n]
                    )
                })
                .collect();
            let mut json = json!({
                "command": "additivity",
                "input": { "left": left, "right": right, "max_degree": k, "budget": common.budget },
                "degrees": (0..=k).collect::<Vec<_>>(),
                "groups": names,
                "isomorphisms": verdicts,
            });
            timer.attach(&mut json);
            let success = verdicts.iter().all(|&b| b);
            Ok(Report {
                json,
                text,
                success,
            })
        }
        Command::Selftest => {
            let checks = selftest::run_all();
            timer.mark();
            let text = checks
                .iter()
                .map(|c| {
                    format!(
                        "[{}] {}: {}\n",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.name,
                        c.detail
                    )
                })
                .collect();
            let success = checks.iter().all(|c| c.passed);
            let mut json = json!({
                "command": "selftest",
                "input": {},
                "checks": checks,
                "passed": success,
            });
            timer.attach(&mut json);
            Ok(Report {
                json,
                text,
                success,
            })
        }
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli.command, &cli.common) {
        Ok(report) => {
            let out = report.render(cli.common.format);
            if cli.common.format == Format::Json {
                println!("{out}");
            } else {
                print!("{out}");
            }
            if report.success {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            1
        }
    }
}
