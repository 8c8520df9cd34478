//! The five subcommands. Each returns a report for stdout and, where the
//! command produces one, an artifact for `--out`.

use conformal_atlas::{lift_to_4gp, AtlasError, ConformalAtlas, Fixer, GlobalPair, Piece};
use dynamics::{integrate, run_diagnostics, DiagnosticsOptions, DynamicsError, HamiltonianSystem, Law};
use multivector::{Form, MultiVector};
use serde::Serialize;
use structures::{cascade_contract, cascade_stepwise, verify_with, Candidate, FunctionFamily, Kind, VerificationReport};
use thiserror::Error;

use crate::job::{atlas_options, sample_box, schema, Input, InputError, JobFile, Overrides, Structure};

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

macro_rules! schema_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for CommandError {
            fn from(e: $t) -> Self {
                CommandError::Input(schema(e))
            }
        }
    )*};
}

schema_errors!(AtlasError, structures::StructureError, scalar_expr::SampleError);

/// Result of a command that ran to completion.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub failed: Vec<String>,
    /// Pretty JSON report.
    pub report: String,
    /// File content for `--out`.
    pub artifact: Option<String>,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn outcome(report: &VerificationReport, artifact: Option<String>) -> Outcome {
    Outcome {
        passed: report.passed(),
        failed: report.failures().map(|(k, _)| k.clone()).collect(),
        report: json(report),
        artifact,
    }
}

pub fn verify(file: &JobFile, o: Overrides) -> Result<Outcome, CommandError> {
    let opts = atlas_options(&file.job(), o);
    let report = match file.input()? {
        Input::Structure(s) => {
            let fam = FunctionFamily::standard(s.candidate.dim(), opts.random_functions, opts.seed);
            let bx = sample_box(&s.bounds, &opts);
            verify_with(&s.candidate, &fam, &bx, opts.verify, Some(&file.coordinates))?
        }
        Input::Atlas(a) => a.validate(&opts)?,
    };
    Ok(outcome(&report, Some(json(&report))))
}

fn atlas_input(file: &JobFile, cmd: &str) -> Result<ConformalAtlas, CommandError> {
    match file.input()? {
        Input::Atlas(a) => Ok(a),
        Input::Structure(_) => Err(schema(format!("{cmd} needs an atlas file")).into()),
    }
}

/// Validated glue; `Err(report)` when validation fails.
fn glued(a: &ConformalAtlas, file: &JobFile, o: Overrides) -> Result<Result<(GlobalPair, VerificationReport), VerificationReport>, CommandError> {
    let opts = atlas_options(&file.job(), o);
    let report = a.validate(&opts)?;
    if !report.passed() {
        return Ok(Err(report));
    }
    Ok(Ok((a.glue_unchecked()?, report)))
}

fn hull(gp: &GlobalPair, file: &JobFile, o: Overrides) -> Vec<[f64; 2]> {
    let bx = gp.hull(&atlas_options(&file.job(), o));
    bx.lo.iter().zip(&bx.hi).map(|(l, h)| [*l, *h]).collect()
}

pub fn glue(file: &JobFile, o: Overrides) -> Result<Outcome, CommandError> {
    let a = atlas_input(file, "glue")?;
    let opts = atlas_options(&file.job(), o);
    let (gp, mut report) = match glued(&a, file, o)? {
        Ok(x) => x,
        Err(r) => return Ok(outcome(&r, None)),
    };
    report.extend_prefixed("glued.", gp.verify(a.coords(), &opts)?);
    report.extend_prefixed("", a.chart_independence(&gp, &opts)?);
    let coords = a.coords();
    let doc = if gp.companion.is_zero() {
        JobFile::structure(coords, gp.kind.conservative(), hull(&gp, file, o), &gp.eta, None, None)
    } else {
        JobFile::structure(coords, gp.kind, hull(&gp, file, o), &gp.eta, Some(&gp.companion), Some(&gp.theta))
    };
    Ok(outcome(&report, Some(json(&doc))))
}

fn parse_law(name: &str) -> Result<Law, InputError> {
    Ok(match name {
        "energy" => Law::Energy,
        "bracket_conservation" => Law::BracketConservation,
        "homomorphism" => Law::Homomorphism,
        "preservation" => Law::Preservation,
        "flow_agreement" => Law::FlowAgreement,
        other => return Err(schema(format!("unknown law {other:?}"))),
    })
}

pub fn flow(file: &JobFile, o: Overrides) -> Result<Outcome, CommandError> {
    let job = file.job();
    let opts = atlas_options(&job, o);
    let hs = job.hamiltonians.as_ref().ok_or_else(|| schema("flow needs job.hamiltonians"))?;
    let x0 = job.x0.as_ref().ok_or_else(|| schema("flow needs job.x0"))?;
    let t_end = job.t_end.ok_or_else(|| schema("flow needs job.t_end"))?;
    let h = job.h.ok_or_else(|| schema("flow needs job.h"))?;
    let hs = file.exprs("hamiltonian", hs)?;
    let (sys, bounds) = match file.input()? {
        Input::Structure(Structure { candidate, bounds }) => {
            let sys = HamiltonianSystem::new(candidate, hs)?;
            match file.bounds {
                Some(_) => (sys.with_bounds(bounds.clone()), bounds),
                None => (sys, bounds),
            }
        }
        Input::Atlas(a) => {
            let (gp, _) = match glued(&a, file, o)? {
                Ok(x) => x,
                Err(r) => return Ok(outcome(&r, None)),
            };
            let bounds = hull(&gp, file, o);
            (HamiltonianSystem::from_global(&gp, hs)?, bounds)
        }
    };
    let traj = integrate(&sys, x0, t_end, h)?;
    let laws = match &job.laws {
        Some(names) => Some(names.iter().map(|n| parse_law(n)).collect::<Result<Vec<_>, _>>()?),
        None => None,
    };
    let aux = |what: &str, list: &Option<Vec<String>>| list.as_ref().map(|l| file.exprs(what, l)).transpose();
    let dopts = DiagnosticsOptions {
        laws,
        partners: aux("partner", &job.partners)?,
        bracket_tuple: aux("bracket function", &job.bracket_tuple)?,
        sample: Some(sample_box(&bounds, &opts)),
        ..DiagnosticsOptions::default()
    };
    let report = run_diagnostics(&sys, &traj, &dopts)?;
    Ok(Outcome {
        passed: report.passed(),
        failed: report.laws.iter().filter(|(_, l)| !l.pass).map(|(k, _)| k.clone()).collect(),
        report: json(&report),
        artifact: Some(traj.to_csv()),
    })
}

pub fn cascade(file: &JobFile, o: Overrides) -> Result<Outcome, CommandError> {
    let job = file.job();
    let opts = atlas_options(&job, o);
    let fixers = file.exprs("fixer", job.fixers.as_deref().ok_or_else(|| schema("cascade needs job.fixers"))?)?;
    match file.input()? {
        Input::Structure(s) => {
            let c = &s.candidate;
            let k = c.arity();
            if !matches!(c.kind(), Kind::NambuPoisson(_) | Kind::NambuJacobi(_)) || k < 3 {
                return Err(schema(format!("cannot cascade a {} structure", c.kind())).into());
            }
            let closed = cascade_contract(c.eta(), c.companion(), &fixers)?;
            let steps = cascade_stepwise(c.eta(), c.companion(), &fixers)?;
            let bx = sample_box(&s.bounds, &opts);
            let mut report = VerificationReport::new();
            report.record("cascade_stepwise_lambda", &closed.lambda.check_equal(&steps.lambda, &bx)?, vec![]);
            report.record("cascade_stepwise_z", &closed.z.check_equal(&steps.z, &bx)?, vec![]);
            let (out, companion) = match c.companion() {
                Some(_) => (Candidate::jacobi(closed.lambda.clone(), closed.z.clone())?, Some(&closed.z)),
                None => (Candidate::poisson(closed.lambda.clone())?, None),
            };
            let fam = FunctionFamily::standard(c.dim(), opts.random_functions, opts.seed);
            report.extend_prefixed("", verify_with(&out, &fam, &bx, opts.verify, Some(&file.coordinates))?);
            let doc = JobFile::structure(&file.coordinates, out.kind(), s.bounds.clone(), &closed.lambda, companion, None);
            Ok(outcome(&report, Some(json(&doc))))
        }
        Input::Atlas(a) => {
            let mut cur = a;
            // fixers fill the trailing entries; the last one is fixed first
            for f in fixers.iter().rev() {
                cur = cur.contract(&Fixer::Global(f.clone()), &opts)?;
            }
            let report = cur.validate(&opts)?;
            Ok(outcome(&report, Some(json(&JobFile::atlas(&cur)))))
        }
    }
}

pub fn lift(file: &JobFile, o: Overrides) -> Result<Outcome, CommandError> {
    let job = file.job();
    let opts = atlas_options(&job, o);
    let hs = file.exprs("hamiltonian", job.hamiltonians.as_deref().ok_or_else(|| schema("lift needs job.hamiltonians"))?)?;
    let [h1, h2] = hs.as_slice() else {
        return Err(schema(format!("lift needs two Hamiltonians, got {}", hs.len())).into());
    };
    let (gp, bounds, mut report) = match file.input()? {
        Input::Structure(s) => {
            let n = s.candidate.dim();
            let (theta, companion) = match s.candidate.kind() {
                Kind::NambuPoisson(3) => (Form::zero(n, 1), MultiVector::zero(n, 2)),
                Kind::NambuJacobi(3) => {
                    let t = file.theta.as_ref().ok_or_else(|| schema("a Nambu-Jacobi lift needs its Lee form theta"))?;
                    let theta = Form::from_text(&file.coordinates, 1, t.iter().map(|(k, v)| (k.as_str(), v.as_str())))
                        .map_err(schema)?;
                    (theta, s.candidate.companion_or_zero())
                }
                other => return Err(schema(format!("cannot lift a {other} structure")).into()),
            };
            let eta = s.candidate.eta().clone();
            let piece = Piece { chart: "structure".into(), bounds: s.bounds.clone(), eta: eta.clone(), theta: theta.clone() };
            let gp = GlobalPair { kind: Kind::NambuJacobi(3), eta, theta, companion, pieces: vec![piece] };
            (gp, s.bounds, VerificationReport::new())
        }
        Input::Atlas(a) => match glued(&a, file, o)? {
            Ok((gp, r)) => {
                let b = hull(&gp, file, o);
                (gp, b, r)
            }
            Err(r) => return Ok(outcome(&r, None)),
        },
    };
    let lift = lift_to_4gp(&gp, h1, h2, &sample_box(&bounds, &opts))?;
    report.extend_prefixed("", lift.report);
    let doc = JobFile::structure(
        &file.coordinates,
        Kind::GeneralizedJacobi(4),
        bounds,
        &lift.eta4,
        Some(&lift.companion3),
        Some(&gp.theta),
    );
    Ok(outcome(&report, Some(json(&doc))))
}
