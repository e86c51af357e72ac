use std::time::Instant;

use nalgebra::DVector;
use parc_core::{sample_bras, verify_plan, BrasResult, Violation};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::system::{setup, Setup};
use crate::cli::{SampleArgs, VerifyArgs};
use crate::error::{CliError, Result};
use crate::io::{read_json, write_json, write_meta};

/// One sampled plan: its augmented start and the verification outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanRecord {
    pub x0: Vec<f64>,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<Violation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanFile {
    pub seed: u64,
    pub attempts: usize,
    pub substeps: usize,
    pub plans: Vec<PlanRecord>,
}

impl PlanFile {
    pub fn failures(&self) -> usize {
        self.plans.iter().filter(|p| !p.passed).count()
    }
}

fn check(s: &Setup, starts: &[Vec<f64>], substeps: usize) -> Result<Vec<PlanRecord>> {
    let n = s.system.layout().total();
    starts
        .par_iter()
        .map(|x0| {
            if x0.len() != n {
                return Err(CliError::Usage(format!("plan start has {} entries, expected {n}", x0.len())));
            }
            let report = verify_plan(&s.system, &s.scenario, s.profile.as_ref(), &DVector::from_column_slice(x0), substeps)?;
            Ok(PlanRecord { x0: x0.clone(), passed: report.passed, violation: report.violation })
        })
        .collect()
}

fn finish(file: &PlanFile) -> Result<()> {
    let failed = file.failures();
    println!("verified: {} of {} plans passed", file.plans.len() - failed, file.plans.len());
    if failed > 0 {
        for (i, p) in file.plans.iter().enumerate().filter(|(_, p)| !p.passed) {
            log::warn!("plan {i} failed: {:?}", p.violation);
        }
        return Err(CliError::Verification { failed, total: file.plans.len() });
    }
    Ok(())
}

pub fn sample(args: SampleArgs) -> Result<()> {
    let started = Instant::now();
    let result: BrasResult = read_json(&args.result)?;
    let s = setup(&args.system)?;
    if result.reach.dim() != s.system.layout().total() {
        return Err(CliError::Usage("result and system dimensions differ".into()));
    }
    let (starts, attempts) = if args.n == 0 {
        (Vec::new(), 0)
    } else {
        let out = sample_bras(&result, args.n, args.seed, args.budget)?;
        if out.exhausted {
            return Err(CliError::Exhausted { attempts: out.attempts, found: out.samples.len(), wanted: args.n });
        }
        (out.samples.iter().map(|x| x.as_slice().to_vec()).collect::<Vec<_>>(), out.attempts)
    };
    let file = PlanFile { seed: args.seed, attempts, substeps: args.substeps, plans: check(&s, &starts, args.substeps)? };
    write_json(&args.out, &file)?;
    write_meta(&args.out, "sample", started.elapsed())?;
    finish(&file)
}

pub fn verify(args: VerifyArgs) -> Result<()> {
    let started = Instant::now();
    let input: PlanFile = read_json(&args.plans)?;
    let s = setup(&args.system)?;
    let starts: Vec<Vec<f64>> = input.plans.iter().map(|p| p.x0.clone()).collect();
    let file = PlanFile { plans: check(&s, &starts, args.substeps)?, substeps: args.substeps, ..input };
    if let Some(out) = &args.out {
        write_json(out, &file)?;
        write_meta(out, "verify", started.elapsed())?;
    }
    finish(&file)
}
