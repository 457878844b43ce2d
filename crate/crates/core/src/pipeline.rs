//! One entry point for every solver.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Instance;
use crate::lp::rounding::DEFAULT_TRIALS;
use crate::lp::run_algorithm2;
use crate::main_algo::{run_main, MainOptions, MainTrace};
use crate::oracle::{brute_force_optimum, DEFAULT_CAP};
use crate::solution::{complete_witnesses, local_graphs, PreserverSolution};
use crate::thick::run_algorithm1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Oracle,
    Thick,
    Thin,
    Main,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Oracle, Algorithm::Thick, Algorithm::Thin, Algorithm::Main];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Oracle => "oracle",
            Algorithm::Thick => "thick",
            Algorithm::Thin => "thin",
            Algorithm::Main => "main",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Validation(format!("unknown algorithm '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub trials: usize,
    pub seed: u64,
    pub cap: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            trials: DEFAULT_TRIALS,
            seed: 0,
            cap: DEFAULT_CAP,
        }
    }
}

/// Runs `algorithm`; the trace is only produced by the main loop.
pub fn solve(instance: &Instance, algorithm: Algorithm, options: SolveOptions) -> Result<(PreserverSolution, Option<MainTrace>)> {
    match algorithm {
        Algorithm::Oracle => {
            let result = brute_force_optimum(instance, options.cap)?;
            let dags = local_graphs(instance)?;
            let witnesses = result.solution.witnesses().iter().cloned().map(Some).collect();
            Ok((complete_witnesses(instance, &dags, result.solution.edges(), witnesses), None))
        }
        Algorithm::Thick => Ok((run_algorithm1(instance)?, None)),
        Algorithm::Thin => Ok((run_algorithm2(instance, options.trials, options.seed)?, None)),
        Algorithm::Main => {
            let (solution, trace) = run_main(
                instance,
                MainOptions {
                    trials: options.trials,
                    seed: options.seed,
                },
            )?;
            Ok((solution, Some(trace)))
        }
    }
}
