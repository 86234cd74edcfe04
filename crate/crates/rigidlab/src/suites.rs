//! Randomized suites run in parallel. Each trial or simplex draws from its
//! own stream, and results are folded in index order, so reports do not
//! depend on scheduling.

use num_complex::Complex64;
use rayon::prelude::*;
use rigidlab_core::apartment::{check_simplex, enumerate_simplices, summarize, ApartmentReport};
use rigidlab_core::indefinite::{run_trial, ParabolicConfig, TrialResiduals};
use rigidlab_core::Quaternion;

use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Field {
    R,
    C,
    H,
}

impl Field {
    pub const ALL: [Field; 3] = [Field::R, Field::C, Field::H];

    pub fn name(self) -> &'static str {
        match self {
            Field::R => "R",
            Field::C => "C",
            Field::H => "H",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParabolicSummary {
    pub field: Field,
    pub config: ParabolicConfig,
    pub trials: usize,
    pub seed: u64,
    pub max: TrialResiduals,
    /// Trials with some residual above its bound.
    pub failures: usize,
}

impl ParabolicSummary {
    pub fn passes(&self) -> bool {
        self.failures == 0
    }
}

pub fn parabolic_suite(field: Field, config: ParabolicConfig, trials: usize, seed: u64) -> Result<ParabolicSummary, Error> {
    let run = |i: usize| match field {
        Field::R => run_trial::<f64>(config, seed, i as u64),
        Field::C => run_trial::<Complex64>(config, seed, i as u64),
        Field::H => run_trial::<Quaternion>(config, seed, i as u64),
    };
    let results = (0..trials).into_par_iter().map(run).collect::<Result<Vec<_>, _>>().map_err(|e| Error::Input(e.to_string()))?;
    let max = results.iter().fold(TrialResiduals::default(), |m, r| m.max(*r));
    let failures = results.iter().filter(|r| !r.passes()).count();
    Ok(ParabolicSummary { field, config, trials, seed, max, failures })
}

pub fn apartment_suite(p: usize, samples: usize, seed: u64) -> Result<ApartmentReport, Error> {
    let simplices = enumerate_simplices(p).map_err(|e| Error::Input(e.to_string()))?;
    let results: Vec<_> = simplices.par_iter().enumerate().map(|(i, s)| check_simplex(s, samples, seed, i as u64)).collect();
    Ok(summarize(p, samples, &results))
}
