//! In-process versions of the solve and check subcommands.

use std::str::FromStr;

use acit_core::{check_certificate, solve, AcitParams, Float, Rational, Scalar};
use anyhow::{bail, Result};

use crate::instance::{CertificateFile, CertificateJson, InstanceFile, StatsJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Exact,
    Float,
}

impl ModeArg {
    pub fn as_str(self) -> &'static str {
        match self {
            ModeArg::Exact => "exact",
            ModeArg::Float => "float",
        }
    }

    /// `ACIT_MODE` wins over the flag when set.
    pub fn resolve(flag: ModeArg) -> Result<ModeArg> {
        match std::env::var("ACIT_MODE") {
            Ok(v) if !v.is_empty() => v.parse(),
            _ => Ok(flag),
        }
    }
}

impl FromStr for ModeArg {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" | "rational" => Ok(ModeArg::Exact),
            "float" | "f64" => Ok(ModeArg::Float),
            other => bail!("unknown mode {other:?}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub mode: ModeArg,
    pub seed: u64,
    pub alpha_constant: Option<f64>,
    pub check_invariants: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { mode: ModeArg::Exact, seed: 0, alpha_constant: None, check_invariants: true }
    }
}

fn solve_as<S: Scalar>(inst: &InstanceFile, opts: &SolveOptions) -> Result<CertificateFile> {
    let points = inst.points::<S>()?;
    let halfspaces = inst.inequalities::<S>()?;
    let mut params = AcitParams::for_dimension(inst.d, opts.seed).with_invariant_checks(opts.check_invariants);
    if let Some(c) = opts.alpha_constant {
        params = params.with_alpha_constant(inst.d, c);
    }
    let sol = solve(&points, &halfspaces, &params)?;
    Ok(CertificateFile {
        instance_hash: inst.hash(),
        mode: opts.mode.as_str().into(),
        decision: if sol.certificate.intersects() { "intersect" } else { "disjoint" }.into(),
        certificate: CertificateJson::from_certificate(&sol.certificate),
        stats: Some(StatsJson::from(&sol.stats)),
    })
}

pub fn solve_instance(inst: &InstanceFile, opts: &SolveOptions) -> Result<CertificateFile> {
    match opts.mode {
        ModeArg::Exact => solve_as::<Rational>(inst, opts),
        ModeArg::Float => solve_as::<Float>(inst, opts),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CheckOutcome {
    Valid,
    Invalid(Vec<String>),
}

fn check_as<S: Scalar>(inst: &InstanceFile, cert: &CertificateFile) -> Result<CheckOutcome> {
    let points = inst.points::<S>()?;
    let halfspaces = inst.inequalities::<S>()?;
    let c = cert.certificate.to_certificate::<S>()?;
    let report = check_certificate(&points, &halfspaces, &c);
    Ok(if report.valid { CheckOutcome::Valid } else { CheckOutcome::Invalid(report.failures) })
}

/// Errors on a hash mismatch; otherwise reports validity.
pub fn check_instance(inst: &InstanceFile, cert: &CertificateFile) -> Result<CheckOutcome> {
    if inst.hash() != cert.instance_hash {
        bail!("certificate was issued for a different instance");
    }
    match cert.mode.parse::<ModeArg>()? {
        ModeArg::Exact => check_as::<Rational>(inst, cert),
        ModeArg::Float => check_as::<Float>(inst, cert),
    }
}
