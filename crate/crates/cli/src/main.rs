use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use htcrystal::checks::{self, ComplexKind, COVERAGE};
use htcrystal::input::{eps_header, parse_eps, working_digits, ModuleSpec};
use htcrystal::random::instance_rng;
use htcrystal::report::Report;
use htcrystal::ring::{Ring, Scalar};
use htcrystal::stratification::{dump_eps, Stratification};
use htcrystal::suite::{selftest, SelftestOptions};
use htcrystal::{Error, PadicModule, Result};
use serde_json::json;

#[derive(Parser)]
#[command(name = "htcrystal", version, about = "Verifier for enhanced Higgs modules and their stratifications")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Module file (TOML or JSON).
    #[arg(value_name = "FILE")]
    file: Option<PathBuf>,
    /// Module file, alternative to the positional argument.
    #[arg(long = "in", value_name = "FILE", conflicts_with = "file")]
    input: Option<PathBuf>,
    /// Overrides the precision N of the input.
    #[arg(long)]
    precision: Option<u32>,
    /// Truncation degree D of the stratification.
    #[arg(long, default_value_t = 4)]
    degree: u32,
    /// Emit the JSON report instead of text.
    #[arg(long)]
    json: bool,
    /// Also write the output to this file.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

impl Common {
    fn path(&self) -> Option<&Path> {
        self.file.as_deref().or(self.input.as_deref())
    }
}

#[derive(Args, Clone)]
#[group(multiple = false)]
struct Kind {
    #[arg(long)]
    enhanced: bool,
    #[arg(long)]
    higgs: bool,
    #[arg(long)]
    cech: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the enhanced Higgs relations.
    Verify(Common),
    /// Build the stratification; `--out` writes the canonical dump.
    Stratify(Common),
    /// Check the cocycle condition for a module or a dump.
    Cocycle(Common),
    /// Cohomology of the Higgs, enhanced Higgs or Čech–Alexander complex.
    Cohomology {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        kind: Kind,
        /// Guard valuation in π-units.
        #[arg(long)]
        guard: Option<u32>,
    },
    /// Čech–Alexander identities and the rational comparison.
    Cech {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        guard: Option<u32>,
    },
    /// Sen operator from the Galois action.
    Sen {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        nmax: u32,
    },
    /// Cocycle, semidirect and equivariance checks on random group elements.
    Galois {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exponential and logarithm round trips of the Simpson correspondence.
    Roundtrip {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        guard: Option<u32>,
    },
    /// Randomized property suite over the standard configurations.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        /// Restrict to one prime.
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long, default_value_t = 6)]
        precision: u32,
        #[arg(long, default_value_t = 4)]
        degree: u32,
        #[arg(long, default_value_t = 3)]
        nmax: u32,
        /// Print the check coverage manifest and exit.
        #[arg(long)]
        list: bool,
        #[arg(long)]
        json: bool,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

fn load_spec(c: &Common) -> Result<ModuleSpec> {
    let path = c.path().ok_or_else(|| Error::Parse {
        path: "input".into(),
        message: "no module file given".into(),
    })?;
    let spec = ModuleSpec::load(path)?;
    match c.precision {
        Some(n) => spec.with_precision(n),
        None => Ok(spec),
    }
}

fn load_module(c: &Common) -> Result<(Ring, PadicModule)> {
    let spec = load_spec(c)?;
    let ring = spec.ring(working_digits(spec.cfg.p, c.degree))?;
    let m = spec.instantiate(&ring)?;
    Ok((ring, m))
}

fn is_dump(path: &Path) -> bool {
    std::fs::read_to_string(path)
        .map(|t| t.lines().any(|l| l.trim_start().starts_with("format") && l.contains("htcrystal-eps")))
        .unwrap_or(false)
}

fn params(c: &Common, extra: serde_json::Value) -> serde_json::Value {
    let mut v = json!({ "degree": c.degree });
    if let Some(n) = c.precision {
        v["precision"] = json!(n);
    }
    if let (Some(obj), serde_json::Value::Object(more)) = (v.as_object_mut(), extra) {
        obj.extend(more);
    }
    v
}

/// Runs `f` and records its error, if any, in the report.
fn fill(report: &mut Report, f: impl FnOnce(&mut Report) -> Result<()>) {
    if let Err(e) = f(report) {
        report.fail_with(&e);
    }
}

fn module_report(name: &str, c: &Common, extra: serde_json::Value) -> Report {
    Report::new(name, c.path().map(|p| p.display().to_string()), params(c, extra))
}

fn emit(report: &Report, json_out: bool, out: Option<&Path>) -> ExitCode {
    let text = if json_out { report.to_json() } else { report.render_text() };
    print!("{text}");
    if let Some(path) = out {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify(c) => {
            let mut r = module_report("verify", &c, json!({}));
            fill(&mut r, |r| {
                let (_, m) = load_module(&c)?;
                r.extend(checks::verify_checks(&m)?);
                Ok(())
            });
            emit(&r, c.json, c.out.as_deref())
        }
        Command::Stratify(c) => {
            let mut r = module_report("stratify", &c, json!({}));
            let mut dump = None;
            fill(&mut r, |r| {
                let (ring, m) = load_module(&c)?;
                let (cs, s) = checks::stratify_checks(&m, c.degree)?;
                r.extend(cs);
                dump = Some(dump_eps(&s, &eps_header(&ring)));
                Ok(())
            });
            let text = if c.json { r.to_json() } else { r.render_text() };
            print!("{text}");
            if let (Some(path), Some(d)) = (&c.out, dump) {
                if let Err(e) = std::fs::write(path, d) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(r.exit_code() as u8)
        }
        Command::Cocycle(c) => {
            let mut r = module_report("cocycle", &c, json!({}));
            fill(&mut r, |r| {
                let s: Stratification<Scalar> = match c.path() {
                    Some(p) if is_dump(p) => {
                        let text = std::fs::read_to_string(p).map_err(|e| Error::Parse {
                            path: p.display().to_string(),
                            message: e.to_string(),
                        })?;
                        parse_eps(&text)?.1
                    }
                    _ => {
                        let (_, m) = load_module(&c)?;
                        Stratification::from_family(&m, c.degree)?
                    }
                };
                r.extend(checks::cocycle_checks(&s));
                Ok(())
            });
            emit(&r, c.json, c.out.as_deref())
        }
        Command::Cohomology { common: c, kind, guard } => {
            let k = if kind.higgs {
                ComplexKind::Higgs
            } else if kind.cech {
                ComplexKind::Cech
            } else {
                ComplexKind::Enhanced
            };
            let mut r = module_report("cohomology", &c, json!({ "complex": k, "guard": guard }));
            fill(&mut r, |r| {
                let (_, m) = load_module(&c)?;
                let (cs, profile) = checks::cohomology_report(&m, k, c.degree, guard)?;
                r.extend(cs);
                r.set_data(profile);
                Ok(())
            });
            emit(&r, c.json, c.out.as_deref())
        }
        Command::Cech { common: c, guard } => {
            let mut r = module_report("cech", &c, json!({ "guard": guard }));
            fill(&mut r, |r| {
                let (_, m) = load_module(&c)?;
                r.extend(checks::cech_checks(&m, c.degree, guard)?);
                Ok(())
            });
            emit(&r, c.json, c.out.as_deref())
        }
        Command::Sen { common: c, nmax } => {
            let mut r = module_report("sen", &c, json!({ "nmax": nmax }));
            fill(&mut r, |r| {
                let (_, m) = load_module(&c)?;
                r.extend(checks::sen_checks(&m, nmax)?);
                Ok(())
            });
            emit(&r, c.json, c.out.as_deref())
        }
        Command::Galois { common: c, trials, seed } => {
            let mut r = module_report("galois", &c, json!({ "trials": trials, "seed": seed }));
            fill(&mut r, |r| {
                let (_, m) = load_module(&c)?;
                let mut rng = instance_rng(seed, 0);
                r.extend(checks::galois_checks(&m, trials, &mut rng, true)?);
                Ok(())
            });
            emit(&r, c.json, c.out.as_deref())
        }
        Command::Roundtrip { common: c, guard } => {
            let mut r = module_report("roundtrip", &c, json!({ "guard": guard }));
            fill(&mut r, |r| {
                let (_, m) = load_module(&c)?;
                r.extend(checks::roundtrip_checks(&m, guard)?);
                Ok(())
            });
            emit(&r, c.json, c.out.as_deref())
        }
        Command::Selftest { seed, trials, prime, precision, degree, nmax, list, json, out } => {
            if list {
                let text = if json {
                    let items: Vec<_> = COVERAGE
                        .iter()
                        .map(|(id, cmd, desc)| json!({ "id": id, "command": cmd, "description": desc }))
                        .collect();
                    serde_json::to_string_pretty(&items).unwrap_or_default() + "\n"
                } else {
                    COVERAGE.iter().map(|(id, cmd, desc)| format!("{id:<36}{cmd:<12}{desc}\n")).collect()
                };
                print!("{text}");
                return ExitCode::SUCCESS;
            }
            let opts = SelftestOptions {
                seed,
                trials,
                precision,
                degree,
                n_max: nmax,
                primes: prime.map(|p| vec![p]),
                ..SelftestOptions::default()
            };
            if opts.configs().is_empty() {
                let mut r = Report::new("selftest", None, &opts);
                r.fail_with(&Error::Parse {
                    path: "prime".into(),
                    message: "expected one of 2, 3, 5".into(),
                });
                return emit(&r, json, out.as_deref());
            }
            emit(&selftest(&opts), json, out.as_deref())
        }
    }
}
