//! Command-line front end for `degenkit-core`.
//!
//! [`run`] does all the work and returns the exit code with the text for
//! stdout and stderr, so the binary is a thin wrapper and tests can drive
//! every verb in-process.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use degenkit_core::abelian::{is_symplectic, kunnemann_rho};
use degenkit_core::blowup::{blow_up_stratum, BlowupMove};
use degenkit_core::formats::{self, ModelFile};
use degenkit_core::kulikov::euler_discrepancy_warning;
use degenkit_core::mukai::{
    classify_monodromy, h2_gram, is_hodge_isometry, is_isometry, mukai_gram, IntegerLattice,
    MonodromyOperator, PeriodPoint, H2_RANK, MUKAI_RANK,
};
use degenkit_core::{Catalog, ComponentId, Error, Face, RatMatrix, SncModel, VarElement};

pub const CATALOG_ENV: &str = "DEGENKIT_CATALOG";

#[derive(Debug, Parser)]
#[command(
    name = "degenkit",
    version,
    about = "Specialization maps from snc degeneration data"
)]
struct Cli {
    /// Label catalog (TOML); defaults to $DEGENKIT_CATALOG, then the built-in catalog.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Report::Text)]
    report: Report,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Report {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Sgt,
    Var,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Check model invariants against the catalog.
    Validate {
        #[arg(long)]
        model: PathBuf,
    },
    /// Specialization in K0(Var).
    RhoVar {
        #[arg(long)]
        model: PathBuf,
    },
    /// Specialization in K0(sGT).
    RhoSgt {
        #[arg(long)]
        model: PathBuf,
    },
    /// Euler number of a class, or of a model's nearby fiber.
    Euler {
        #[arg(long, conflicts_with = "class", required_unless_present = "class")]
        model: Option<PathBuf>,
        #[arg(long)]
        class: Option<String>,
    },
    /// Class of the reduced special fiber.
    FiberClass {
        #[arg(long)]
        model: PathBuf,
    },
    /// Blow up a closed stratum; prints the new model file.
    Blowup {
        #[arg(long)]
        model: PathBuf,
        /// Comma-separated component ids.
        #[arg(long)]
        center: String,
        #[arg(long)]
        new_id: String,
    },
    /// Cross-check the two formulas for rho_var and the commuting square.
    IdentityCheck {
        #[arg(long)]
        model: PathBuf,
    },
    /// Build a Kulikov type II/III model and specialize it.
    Kulikov {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Target::Sgt)]
        rho: Target,
    },
    /// Kulikov type of a monodromy matrix.
    ClassifyMonodromy {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Is the matrix an isometry of the Mukai lattice (24x24) or of H2 (22x22)?
    CheckIsometry {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Does the matrix carry one period line onto the other?
    CheckHodgeIsometry {
        #[arg(long)]
        matrix: PathBuf,
        /// Period file: a 2x24 matrix with rows x and y.
        #[arg(long)]
        px: PathBuf,
        #[arg(long)]
        py: PathBuf,
    },
    /// Is a block homomorphism inverse to its signed block transpose?
    CheckSymplectic {
        #[arg(long)]
        hom: PathBuf,
    },
    /// Strata class of a degenerating abelian variety from orbit data.
    Kunnemann {
        #[arg(long)]
        orbits: PathBuf,
    },
}

impl Verb {
    fn name(&self) -> &'static str {
        match self {
            Verb::Validate { .. } => "validate",
            Verb::RhoVar { .. } => "rho-var",
            Verb::RhoSgt { .. } => "rho-sgt",
            Verb::Euler { .. } => "euler",
            Verb::FiberClass { .. } => "fiber-class",
            Verb::Blowup { .. } => "blowup",
            Verb::IdentityCheck { .. } => "identity-check",
            Verb::Kulikov { .. } => "kulikov",
            Verb::ClassifyMonodromy { .. } => "classify-monodromy",
            Verb::CheckIsometry { .. } => "check-isometry",
            Verb::CheckHodgeIsometry { .. } => "check-hodge-isometry",
            Verb::CheckSymplectic { .. } => "check-symplectic",
            Verb::Kunnemann { .. } => "kunnemann",
        }
    }

    fn inputs(&self) -> BTreeMap<&'static str, String> {
        let p = |p: &Path| p.display().to_string();
        let mut m = BTreeMap::new();
        match self {
            Verb::Validate { model }
            | Verb::RhoVar { model }
            | Verb::RhoSgt { model }
            | Verb::FiberClass { model }
            | Verb::IdentityCheck { model } => {
                m.insert("model", p(model));
            }
            Verb::Euler { model, class } => {
                if let Some(model) = model {
                    m.insert("model", p(model));
                }
                if let Some(class) = class {
                    m.insert("class", class.clone());
                }
            }
            Verb::Blowup {
                model,
                center,
                new_id,
            } => {
                m.insert("model", p(model));
                m.insert("center", center.clone());
                m.insert("new_id", new_id.clone());
            }
            Verb::Kulikov { input, rho } => {
                m.insert("in", p(input));
                m.insert(
                    "rho",
                    if *rho == Target::Sgt { "sgt" } else { "var" }.into(),
                );
            }
            Verb::ClassifyMonodromy { matrix } | Verb::CheckIsometry { matrix } => {
                m.insert("matrix", p(matrix));
            }
            Verb::CheckHodgeIsometry { matrix, px, py } => {
                m.insert("matrix", p(matrix));
                m.insert("px", p(px));
                m.insert("py", p(py));
            }
            Verb::CheckSymplectic { hom } => {
                m.insert("hom", p(hom));
            }
            Verb::Kunnemann { orbits } => {
                m.insert("orbits", p(orbits));
            }
        }
        m
    }
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Failure of a verb: exit 1 for domain errors, 2 for I/O and parse errors.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
    /// Structured details for the JSON report.
    details: Option<Value>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_parse() { 2 } else { 1 };
        let details = match &e {
            Error::InvalidModel(v) => {
                Some(json!(v.iter().map(ToString::to_string).collect::<Vec<_>>()))
            }
            _ => None,
        };
        Failure {
            code,
            message: e.to_string(),
            details,
        }
    }
}

/// Successful result: the text form, the JSON form, and whether a checked
/// property came out false (exit 1).
struct Done {
    text: String,
    json: Value,
    holds: bool,
}

impl Done {
    fn text(s: String) -> Self {
        Done {
            json: Value::String(s.clone()),
            text: s,
            holds: true,
        }
    }
}

struct Ctx {
    catalog_flag: Option<PathBuf>,
    catalog_env: Option<OsString>,
    warnings: Vec<String>,
}

impl Ctx {
    fn catalog(&self) -> Result<Catalog, Failure> {
        let path = self.catalog_flag.clone().or_else(|| {
            self.catalog_env
                .clone()
                .filter(|s| !s.is_empty())
                .map(PathBuf::from)
        });
        match path {
            None => Ok(Catalog::default_catalog()),
            Some(p) => {
                let text = read(&p)?;
                Catalog::from_toml_str(&text).map_err(|e| Failure {
                    code: 2,
                    message: format!("{}: {e}", p.display()),
                    details: None,
                })
            }
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
        details: None,
    })
}

fn in_file<T>(path: &Path, r: degenkit_core::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| {
        let mut f = Failure::from(e);
        if f.code == 2 {
            f.message = format!("{}: {}", path.display(), f.message);
        }
        f
    })
}

/// Reads any model file kind and builds the model. Kulikov inputs also
/// report their input warnings.
fn load_model(ctx: &mut Ctx, path: &Path, catalog: &Catalog) -> Result<(SncModel, bool), Failure> {
    let text = read(path)?;
    match in_file(path, formats::parse_model_file(&text))? {
        ModelFile::Snc(m) => Ok((m, false)),
        ModelFile::Kulikov(k) => {
            ctx.warnings.extend(k.input_warnings());
            Ok((k.build(catalog)?, true))
        }
    }
}

fn load_matrix(path: &Path) -> Result<RatMatrix, Failure> {
    let text = read(path)?;
    in_file(path, RatMatrix::parse(&text))
}

fn load_int_matrix(path: &Path) -> Result<degenkit_core::IntMatrix, Failure> {
    let m = load_matrix(path)?;
    in_file(path, m.to_integer())
}

fn lattice_for(n: usize) -> Result<IntegerLattice, Failure> {
    match n {
        MUKAI_RANK => Ok(mukai_gram()),
        H2_RANK => Ok(IntegerLattice::new(h2_gram())?),
        _ => Err(Error::DimensionMismatch(format!(
            "expected a {MUKAI_RANK}x{MUKAI_RANK} or {H2_RANK}x{H2_RANK} matrix, got size {n}"
        ))
        .into()),
    }
}

fn check(label: &str, holds: bool) -> Done {
    Done {
        text: format!("{label}: {holds}"),
        json: json!({ label: holds }),
        holds,
    }
}

fn execute(ctx: &mut Ctx, verb: &Verb) -> Result<Done, Failure> {
    match verb {
        Verb::Validate { model } => {
            let cat = ctx.catalog()?;
            let (m, _) = load_model(ctx, model, &cat)?;
            let v = m.violations(&cat);
            if v.is_empty() {
                return Ok(Done::text("valid".into()));
            }
            let lines: Vec<String> = v.iter().map(ToString::to_string).collect();
            Ok(Done {
                text: lines.join("\n"),
                json: json!({ "valid": false, "violations": lines }),
                holds: false,
            })
        }
        Verb::RhoVar { model } => {
            let cat = ctx.catalog()?;
            let (m, _) = load_model(ctx, model, &cat)?;
            m.validate(&cat)?;
            Ok(Done::text(m.rho_var()?.to_string()))
        }
        Verb::RhoSgt { model } => {
            let cat = ctx.catalog()?;
            let (m, k3_type) = load_model(ctx, model, &cat)?;
            m.validate(&cat)?;
            let rho = m.rho_sgt(&cat)?;
            if k3_type {
                ctx.warnings.extend(euler_discrepancy_warning(&rho));
            }
            Ok(Done::text(rho.to_string()))
        }
        Verb::Euler { model, class } => {
            let cat = ctx.catalog()?;
            let e = match (model, class) {
                (Some(path), _) => {
                    let (m, _) = load_model(ctx, path, &cat)?;
                    m.validate(&cat)?;
                    m.rho_var()?.euler(&cat)?
                }
                (None, Some(class)) => class.parse::<VarElement>()?.euler(&cat)?,
                (None, None) => unreachable!("clap requires one of --model, --class"),
            };
            Ok(Done::text(e.to_string()))
        }
        Verb::FiberClass { model } => {
            let cat = ctx.catalog()?;
            let (m, _) = load_model(ctx, model, &cat)?;
            m.validate(&cat)?;
            Ok(Done::text(m.special_fiber_class()?.to_string()))
        }
        Verb::Blowup {
            model,
            center,
            new_id,
        } => {
            let cat = ctx.catalog()?;
            let center: Face = center.parse()?;
            let new_id = ComponentId::new(new_id.as_str())?;
            let (m, _) = load_model(ctx, model, &cat)?;
            m.validate(&cat)?;
            let out = blow_up_stratum(&m, &BlowupMove::new(center, new_id))?;
            Ok(Done::text(formats::write_snc(&out).trim_end().to_string()))
        }
        Verb::IdentityCheck { model } => {
            let cat = ctx.catalog()?;
            let (m, _) = load_model(ctx, model, &cat)?;
            m.validate(&cat)?;
            let rv = m.rho_var()?;
            let bundles = rv == m.rho_var_via_bundles()?;
            let square = rv.mu(&cat)? == m.rho_sgt(&cat)?;
            Ok(Done {
                text: format!("bundle form: {bundles}\ncommuting square: {square}"),
                json: json!({ "bundle_form": bundles, "commuting_square": square }),
                holds: bundles && square,
            })
        }
        Verb::Kulikov { input, rho } => {
            let cat = ctx.catalog()?;
            let text = read(input)?;
            let data = match in_file(input, formats::parse_model_file(&text))? {
                ModelFile::Kulikov(k) => k,
                ModelFile::Snc(_) => {
                    return Err(Failure {
                        code: 2,
                        message: format!(
                            "{}: expected kind = \"kulikov-ii\" or \"kulikov-iii\"",
                            input.display()
                        ),
                        details: None,
                    })
                }
            };
            ctx.warnings.extend(data.input_warnings());
            let m = data.build(&cat)?;
            m.validate(&cat)?;
            let sgt = m.rho_sgt(&cat)?;
            ctx.warnings.extend(euler_discrepancy_warning(&sgt));
            Ok(Done::text(match rho {
                Target::Sgt => sgt.to_string(),
                Target::Var => m.rho_var()?.to_string(),
            }))
        }
        Verb::ClassifyMonodromy { matrix } => {
            let t = load_int_matrix(matrix)?;
            Ok(Done::text(
                classify_monodromy(&MonodromyOperator::new(t))?.to_string(),
            ))
        }
        Verb::CheckIsometry { matrix } => {
            let m = load_int_matrix(matrix)?;
            let lattice = lattice_for(m.rows())?;
            Ok(check("isometry", is_isometry(&m, &lattice)?))
        }
        Verb::CheckHodgeIsometry { matrix, px, py } => {
            let m = load_int_matrix(matrix)?;
            let lattice = lattice_for(m.rows())?;
            let px = PeriodPoint::from_matrix(&load_matrix(px)?)?;
            let py = PeriodPoint::from_matrix(&load_matrix(py)?)?;
            Ok(check(
                "hodge isometry",
                is_hodge_isometry(&m, &px, &py, &lattice)?,
            ))
        }
        Verb::CheckSymplectic { hom } => {
            let text = read(hom)?;
            let f = in_file(hom, formats::parse_block_hom(&text))?;
            Ok(check("symplectic", is_symplectic(&f)?))
        }
        Verb::Kunnemann { orbits } => {
            let cat = ctx.catalog()?;
            let text = read(orbits)?;
            let data = in_file(orbits, formats::parse_orbits(&text))?;
            let r = kunnemann_rho(&data, &cat)?;
            Ok(Done {
                text: format!(
                    "V = {}\nmu(V) = {}\nV mod (L-1) = {}",
                    r.var, r.sgt, r.reduced
                ),
                json: json!({
                    "V": r.var.to_string(),
                    "mu_V": r.sgt.to_string(),
                    "V_mod_L_minus_1": r.reduced.to_string(),
                }),
                holds: true,
            })
        }
    }
}

/// Runs one invocation; `args` includes the program name. The catalog
/// override from the environment is read here.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_env(args, std::env::var_os(CATALOG_ENV))
}

/// [`run`] with the catalog environment override passed explicitly.
pub fn run_with_env<I, T>(args: I, catalog_env: Option<OsString>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let mut ctx = Ctx {
        catalog_flag: cli.catalog.clone(),
        catalog_env,
        warnings: Vec::new(),
    };
    let result = execute(&mut ctx, &cli.verb);
    let (code, result_json, error) = match &result {
        Ok(done) => (if done.holds { 0 } else { 1 }, done.json.clone(), None),
        Err(f) => (
            f.code,
            f.details.clone().unwrap_or(Value::Null),
            Some(f.message.clone()),
        ),
    };

    match cli.report {
        Report::Json => {
            let mut record = json!({
                "verb": cli.verb.name(),
                "inputs": cli.verb.inputs(),
                "result": result_json,
                "warnings": ctx.warnings,
                "exit_code": code,
            });
            if let Some(msg) = error {
                record["error"] = Value::String(msg);
            }
            let mut stdout = serde_json::to_string_pretty(&record).expect("report serializes");
            stdout.push('\n');
            Outcome {
                code,
                stdout,
                stderr: String::new(),
            }
        }
        Report::Text => {
            let mut stderr = String::new();
            for w in &ctx.warnings {
                stderr.push_str(&format!("warning: {w}\n"));
            }
            let stdout = match result {
                Ok(done) => format!("{}\n", done.text),
                Err(f) => {
                    stderr.push_str(&format!("error: {}\n", f.message));
                    String::new()
                }
            };
            Outcome {
                code,
                stdout,
                stderr,
            }
        }
    }
}
