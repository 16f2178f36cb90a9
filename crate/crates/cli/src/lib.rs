//! `scx`: command-line front end for cooperative games on simplicial complexes.
//!
//! Exit codes: 0 success or pass, 1 check/oracle failure, 2 input error,
//! 3 infeasible system or enumeration cap exceeded.

mod render;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use scx_core::json::{self, ComplexDoc, SchemeDoc};
use scx_core::payoff::{self, CoefficientFamily, CoefficientLabel};
use scx_core::scheme::{self, DEFAULT_TOLERANCE};
use scx_core::{matroid, oracle, Error, Game, SimplicialComplex, ValueScheme};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axiom {
    Traditional,
    Probabilistic,
    Simplicial,
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "scx",
    version,
    about = "Cooperative games on simplicial complexes"
)]
pub struct RunConfig {
    /// Output rendering; JSON is the stable contract.
    #[arg(long, value_enum, global = true, default_value = "json")]
    pub format: Format,
    /// Write the result record here instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct TargetArgs {
    #[arg(long, value_enum)]
    pub axiom: Axiom,
    /// Coefficient map `{"face": value}` (required for probabilistic and generic).
    #[arg(long)]
    pub coeffs: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Complex summaries.
    Complex {
        #[command(subcommand)]
        command: ComplexCommand,
    },
    /// Total payoff of a game under an efficiency axiom.
    Payoff {
        #[command(flatten)]
        target: TargetArgs,
        game: PathBuf,
    },
    /// Signed facet-intersection counts d_T.
    Dcoeff { complex: PathBuf },
    /// Group value of a scheme on a game.
    Values {
        #[arg(long)]
        scheme: PathBuf,
        game: PathBuf,
    },
    /// Efficiency conditions of a scheme against an axiom's coefficients.
    Check {
        #[arg(long)]
        scheme: PathBuf,
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        /// Optional complex (or game/scheme) document; must match the scheme's complex.
        complex: Option<PathBuf>,
    },
    /// Minimum-norm scheme meeting an axiom's coefficients.
    Solve {
        #[command(flatten)]
        target: TargetArgs,
        complex: PathBuf,
    },
    /// Closed, alternating, sequential and matroid-reduction payoffs side by side.
    CompareFormulas {
        game: PathBuf,
        #[arg(long, default_value_t = 10)]
        orders: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Matroid recognition and shellings.
    Matroid {
        #[command(subcommand)]
        command: MatroidCommand,
    },
    /// Brute-force cross-checks.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum ComplexCommand {
    Info { complex: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum MatroidCommand {
    Check { complex: PathBuf },
    Shelling { complex: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    D {
        complex: PathBuf,
    },
    Characterization {
        #[arg(long)]
        scheme: PathBuf,
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        complex: PathBuf,
    },
    Orders {
        game: PathBuf,
        #[arg(long, default_value_t = 10)]
        orders: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

/// A run that stopped with a diagnostic and an exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::FacetCapExceeded { .. } | Error::CapacityExceeded { .. } => EXIT_INFEASIBLE,
            Error::NotAMatroid { .. } | Error::ShellingVerificationFailed { .. } => EXIT_FAIL,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// A record to print plus the exit code it implies.
struct Outcome {
    record: serde_json::Value,
    code: i32,
}

impl Outcome {
    fn new<T: Serialize>(record: &T, code: i32) -> Self {
        Outcome {
            record: serde_json::to_value(record).expect("records serialize"),
            code,
        }
    }

    fn ok<T: Serialize>(record: &T) -> Self {
        Self::new(record, EXIT_OK)
    }
}

fn pass_code(pass: bool) -> i32 {
    if pass {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn load_complex(path: &Path) -> Result<Arc<SimplicialComplex>, Failure> {
    Ok(Arc::new(json::load_complex(path)?))
}

fn target_family(
    target: &TargetArgs,
    complex: &Arc<SimplicialComplex>,
) -> Result<CoefficientFamily, Failure> {
    let coeffs = || -> Result<json::CoefficientMap, Failure> {
        let path = target.coeffs.as_ref().ok_or_else(|| {
            Failure::input(format!(
                "--coeffs is required for the {:?} axiom",
                target.axiom
            ))
        })?;
        Ok(json::load_coefficients(path)?)
    };
    Ok(match target.axiom {
        Axiom::Traditional => CoefficientFamily::traditional(complex.clone())?,
        Axiom::Simplicial => payoff::d_coefficients(complex)?,
        Axiom::Probabilistic => json::coefficients_from_map(
            complex.clone(),
            &coeffs()?,
            CoefficientLabel::Probabilistic,
        )?,
        Axiom::Generic => {
            json::coefficients_from_map(complex.clone(), &coeffs()?, CoefficientLabel::Generic)?
        }
    })
}

fn check_tolerance(tol: f64) -> Result<(), Failure> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Failure::input(format!("--tol must be positive, got {tol}")))
    }
}

#[derive(Serialize)]
struct PayoffRecord {
    axiom: Axiom,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    flags: Option<ProbabilisticFlags>,
}

#[derive(Serialize)]
struct ProbabilisticFlags {
    normalized: bool,
    nonnegative: bool,
}

#[derive(Serialize)]
struct ComplexInfo {
    n: usize,
    facets: Vec<Vec<usize>>,
    faces: usize,
    f_vector: Vec<usize>,
    dimension: isize,
    pure: bool,
    full_simplex: bool,
}

#[derive(Serialize)]
struct ValuesRecord {
    values: Vec<f64>,
    total: f64,
}

#[derive(Serialize)]
struct SolveRecord {
    axiom: Axiom,
    feasible: bool,
    residual_norm: f64,
    #[serde(flatten)]
    scheme: SchemeDoc,
}

#[derive(Serialize)]
struct MatroidRecord {
    is_matroid: bool,
    witness: Option<[Vec<usize>; 2]>,
    pure: bool,
}

#[derive(Serialize)]
struct StepRecord {
    index: usize,
    basis: Vec<usize>,
    intersection: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct ShellingRecord {
    rank: usize,
    verified: bool,
    order: Vec<Vec<usize>>,
    steps: Vec<StepRecord>,
}

#[derive(Serialize)]
struct OracleRecord<'a, T: Serialize> {
    #[serde(flatten)]
    report: &'a oracle::OracleReport,
    pass: bool,
    #[serde(flatten)]
    extra: T,
}

fn vertices(face: scx_core::Face) -> Vec<usize> {
    face.vertices().collect()
}

fn execute(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Complex {
            command: ComplexCommand::Info { complex },
        } => {
            let c = load_complex(complex)?;
            let mut f_vector = vec![0usize; c.facets()[0].len() + 1];
            for face in c.faces() {
                f_vector[face.len()] += 1;
            }
            Ok(Outcome::ok(&ComplexInfo {
                n: c.n(),
                facets: ComplexDoc::from_complex(&c).facets,
                faces: c.faces().len(),
                f_vector,
                dimension: c.dimension(),
                pure: c.is_pure(),
                full_simplex: c.is_full_simplex(),
            }))
        }
        Command::Payoff { target, game } => {
            let v = json::load_game(game)?;
            let (value, flags) = match target.axiom {
                Axiom::Traditional => (payoff::traditional_payoff(&v)?, None),
                Axiom::Simplicial => (payoff::simplicial_payoff(&v)?, None),
                Axiom::Generic => (
                    payoff::generic_payoff(&v, &target_family(target, v.complex())?)?,
                    None,
                ),
                Axiom::Probabilistic => {
                    let p = payoff::probabilistic_payoff(&v, &target_family(target, v.complex())?)?;
                    (
                        p.value,
                        Some(ProbabilisticFlags {
                            normalized: p.normalized,
                            nonnegative: p.nonnegative,
                        }),
                    )
                }
            };
            Ok(Outcome::ok(&PayoffRecord {
                axiom: target.axiom,
                value,
                flags,
            }))
        }
        Command::Dcoeff { complex } => {
            let c = load_complex(complex)?;
            let d: BTreeMap<String, i64> = payoff::d_counts(&c)?
                .into_iter()
                .map(|(f, x)| (f.key(), x))
                .collect();
            Ok(Outcome::ok(&d))
        }
        Command::Values { scheme, game } => {
            let s = json::load_scheme(scheme)?;
            let v = json::load_game(game)?;
            let g = scheme::group_value(&v, &s)?;
            Ok(Outcome::ok(&ValuesRecord {
                total: g.total(),
                values: g.values,
            }))
        }
        Command::Check {
            scheme,
            target,
            tol,
            complex,
        } => {
            check_tolerance(*tol)?;
            let s = json::load_scheme(scheme)?;
            if let Some(path) = complex {
                if *load_complex(path)? != **s.complex() {
                    return Err(Error::ComplexMismatch.into());
                }
            }
            let family = target_family(target, s.complex())?;
            let report = scheme::check_efficiency(&s, &family, *tol)?;
            Ok(Outcome::new(&report, pass_code(report.pass)))
        }
        Command::Solve { target, complex } => {
            let c = load_complex(complex)?;
            let family = target_family(target, &c)?;
            let solved = scheme::solve_scheme(&c, &family)?;
            let record = SolveRecord {
                axiom: target.axiom,
                feasible: solved.feasible(),
                residual_norm: solved.residual_norm,
                scheme: SchemeDoc::from_scheme(&solved.scheme),
            };
            Ok(Outcome::new(
                &record,
                if solved.feasible() {
                    EXIT_OK
                } else {
                    EXIT_INFEASIBLE
                },
            ))
        }
        Command::CompareFormulas { game, orders, seed } => {
            let v = json::load_game(game)?;
            Ok(Outcome::ok(&payoff::compare_formulas(&v, *orders, *seed)?))
        }
        Command::Matroid {
            command: MatroidCommand::Check { complex },
        } => {
            let c = load_complex(complex)?;
            let verdict = matroid::is_matroid(&c);
            let record = MatroidRecord {
                is_matroid: verdict.is_matroid(),
                witness: verdict.witness.map(|(a, b)| [vertices(a), vertices(b)]),
                pure: c.is_pure(),
            };
            Ok(Outcome::new(&record, pass_code(verdict.is_matroid())))
        }
        Command::Matroid {
            command: MatroidCommand::Shelling { complex },
        } => {
            let c = load_complex(complex)?;
            let shelling = matroid::shelling_order(&c)?;
            let record = ShellingRecord {
                rank: shelling.rank(),
                verified: true,
                order: shelling.order().iter().map(|f| vertices(*f)).collect(),
                steps: shelling
                    .steps()
                    .iter()
                    .map(|s| StepRecord {
                        index: s.index,
                        basis: vertices(s.basis),
                        intersection: s
                            .intersection
                            .facets()
                            .iter()
                            .map(|f| vertices(*f))
                            .collect(),
                    })
                    .collect(),
            };
            Ok(Outcome::ok(&record))
        }
        Command::Oracle {
            command: OracleCommand::D { complex },
        } => {
            let c = load_complex(complex)?;
            let report = oracle::oracle_d_report(&c)?;
            #[derive(Serialize)]
            struct Extra {
                d: BTreeMap<String, i64>,
            }
            let d = oracle::oracle_d_counts(&c)?
                .into_iter()
                .map(|(f, x)| (f.key(), x))
                .collect();
            let pass = report.pass();
            Ok(Outcome::new(
                &OracleRecord {
                    report: &report,
                    pass,
                    extra: Extra { d },
                },
                pass_code(pass),
            ))
        }
        Command::Oracle {
            command:
                OracleCommand::Characterization {
                    scheme,
                    target,
                    trials,
                    seed,
                    tol,
                    complex,
                },
        } => {
            check_tolerance(*tol)?;
            if *trials == 0 {
                return Err(Failure::input("--trials must be at least 1"));
            }
            let c = load_complex(complex)?;
            let s: ValueScheme = json::load_scheme(scheme)?;
            let family = target_family(target, &c)?;
            let report = oracle::oracle_characterization(&c, &family, &s, *trials, *seed, *tol)?;
            #[derive(Serialize)]
            struct Extra {
                efficiency_check_pass: bool,
            }
            let efficiency_check_pass = scheme::check_efficiency(&s, &family, *tol)?.pass;
            let pass = report.pass();
            Ok(Outcome::new(
                &OracleRecord {
                    report: &report,
                    pass,
                    extra: Extra {
                        efficiency_check_pass,
                    },
                },
                pass_code(pass),
            ))
        }
        Command::Oracle {
            command:
                OracleCommand::Orders {
                    game,
                    orders,
                    seed,
                    tol,
                },
        } => {
            check_tolerance(*tol)?;
            if *orders == 0 {
                return Err(Failure::input("--orders must be at least 1"));
            }
            let v: Game = json::load_game(game)?;
            let report = oracle::oracle_order_independence(&v, *orders, *seed, *tol)?;
            let pass = report.pass();
            Ok(Outcome::new(
                &OracleRecord {
                    report: &report,
                    pass,
                    extra: (),
                },
                pass_code(pass),
            ))
        }
    }
}

/// Dispatches one command, writes its record, and returns the exit code.
pub fn run(config: &RunConfig) -> i32 {
    let outcome = match execute(&config.command) {
        Ok(outcome) => outcome,
        Err(failure) => {
            eprintln!("scx: error: {}", failure.message);
            return failure.code;
        }
    };
    let text = match config.format {
        Format::Json => {
            serde_json::to_string_pretty(&outcome.record).expect("records serialize") + "\n"
        }
        Format::Text => render::text(&outcome.record),
    };
    match &config.output {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("scx: error: cannot write {}: {e}", path.display());
                return EXIT_INPUT;
            }
        }
        None => print!("{text}"),
    }
    outcome.code
}
