//! Command-line driver: branch-structure files, caching, and the `coeffs`,
//! `funceq`, `abscissa`, `tower` and `catalog` commands.

#![allow(clippy::type_complexity)]

pub mod cache;
pub mod format;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use repzeta_core::analytic::{abscissa, SolverConfig};
use repzeta_core::branch::{builtin_recursion, builtin_spec, tower_zeta, BranchStructure, BUILTINS};
use repzeta_core::dirichlet::{iterate_system, iterates};
use repzeta_core::funceq::{build_system, FuncEqSystem};
use repzeta_core::triples::TripleCatalog;
use repzeta_core::{Error, Result};

use cache::{content_hash, Cache, CatalogRecord, SystemRecord};
use format::BranchFile;

#[derive(Parser, Debug)]
#[command(name = "repzeta", version, about = "Representation zeta functions of self-similar branched groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coefficients of the zeta function up to a modulus.
    Coeffs {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1_000_000)]
        max_modulus: u64,
    },
    /// The functional-equation system.
    Funceq {
        #[command(flatten)]
        input: InputArgs,
        /// Print the system after removing constant and duplicate variables.
        #[arg(long)]
        consolidated: bool,
    },
    /// Abscissa of convergence.
    Abscissa {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1_000_000)]
        truncation: u64,
        #[arg(long, default_value_t = 1e-6)]
        bisection_tol: f64,
        #[arg(long, default_value_t = 1e-12)]
        newton_tol: f64,
        #[arg(long, default_value_t = 0.25)]
        step: f64,
        #[arg(long, default_value_t = 12.0)]
        s_start: f64,
    },
    /// Direct zeta function of a finite quotient, next to the iterate.
    Tower {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        level: usize,
    },
    /// The catalog of triples over B.
    Catalog {
        #[command(flatten)]
        input: InputArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// One of grigorchuk, gupta_sidki_3, a5_wreath, a5_wreath_c2ext.
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    pub builtin: Option<String>,
    /// A branch-structure file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

/// An error together with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Validation(_) => 1,
            Error::Resource(_) => 2,
            Error::Consistency(_) => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub input: String,
    pub input_hash: String,
    pub parameters: BTreeMap<String, String>,
    pub version: String,
}

impl RunManifest {
    fn text(&self) -> String {
        let mut s = format!("# {} {} sha256={} version={}\n", self.command, self.input, self.input_hash, self.version);
        for (k, v) in &self.parameters {
            writeln!(s, "# {k} = {v}").unwrap();
        }
        s
    }
}

pub struct Loaded {
    pub file: BranchFile,
    pub label: String,
    pub hash: String,
    pub bs: BranchStructure,
}

pub fn builtin_file(name: &str) -> Result<BranchFile> {
    match builtin_recursion(name) {
        Some(rec) => Ok(BranchFile::Recursion { rec, levels: if name == "grigorchuk" { 6 } else { 5 } }),
        None => builtin_spec(name).map(BranchFile::Explicit),
    }
}

pub fn load(input: &InputArgs) -> Result<Loaded> {
    let (file, label) = match (&input.builtin, &input.input) {
        (Some(b), _) => {
            if !BUILTINS.contains(&b.as_str()) {
                return Err(Error::Validation(format!("unknown built-in {b:?}; choose one of {}", BUILTINS.join(", "))));
            }
            (builtin_file(b)?, format!("builtin:{b}"))
        }
        (None, Some(p)) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Validation(format!("cannot read {}: {e}", p.display())))?;
            (format::parse(&text)?, p.display().to_string())
        }
        (None, None) => return Err(Error::Validation("give --builtin or --input".into())),
    };
    let hash = content_hash(&format::serialize(&file));
    let bs = BranchStructure::new(file.to_spec()?)?;
    Ok(Loaded { file, label, hash, bs })
}

fn catalog(l: &Loaded) -> Result<TripleCatalog> {
    TripleCatalog::build(&l.bs.b, l.bs.field()?)
}

/// The system, from the cache when possible.
pub fn system(l: &Loaded, cache: Option<&Cache>) -> Result<FuncEqSystem> {
    let field = l.bs.field()?;
    if let Some(c) = cache {
        if let Some(rec) = c.load::<SystemRecord>("system", &l.hash, field.q) {
            if let Ok(s) = rec.to_system() {
                return Ok(s);
            }
            eprintln!("warning: ignoring unusable cached system");
        }
    }
    let cat = TripleCatalog::build(&l.bs.b, field)?;
    let sys = build_system(&l.bs, &cat)?;
    if let Some(c) = cache {
        if let Err(e) = c.store("system", &l.hash, field.q, &SystemRecord::from_system(&sys)) {
            eprintln!("warning: cannot write cache: {e}");
        }
    }
    Ok(sys)
}

/// Run a parsed command; returns the text to print on stdout.
pub fn run(cli: &Cli) -> std::result::Result<String, Failure> {
    let cache = Cache::from_env();
    let mut params = BTreeMap::new();
    let (name, input) = match &cli.command {
        Command::Coeffs { input, max_modulus } => {
            params.insert("max_modulus".into(), max_modulus.to_string());
            ("coeffs", input)
        }
        Command::Funceq { input, consolidated } => {
            params.insert("consolidated".into(), consolidated.to_string());
            ("funceq", input)
        }
        Command::Abscissa { input, truncation, bisection_tol, newton_tol, step, s_start } => {
            params.insert("truncation".into(), truncation.to_string());
            params.insert("bisection_tol".into(), bisection_tol.to_string());
            params.insert("newton_tol".into(), newton_tol.to_string());
            params.insert("step".into(), step.to_string());
            params.insert("s_start".into(), s_start.to_string());
            ("abscissa", input)
        }
        Command::Tower { input, level } => {
            params.insert("level".into(), level.to_string());
            ("tower", input)
        }
        Command::Catalog { input } => ("catalog", input),
    };
    let l = load(input)?;
    params.insert("q".into(), l.bs.field()?.q.to_string());
    let manifest = RunManifest {
        command: name.into(),
        input: l.label.clone(),
        input_hash: l.hash.clone(),
        parameters: params,
        version: cache::VERSION.into(),
    };
    let (text, value) = match &cli.command {
        Command::Coeffs { max_modulus, .. } => {
            let sys = system(&l, cache.as_ref())?;
            let z = iterate_system(&sys, *max_modulus)?.zeta;
            let pairs = z.integer_terms()?;
            let mut t = String::new();
            for (m, c) in &pairs {
                writeln!(t, "{m} {c}").unwrap();
            }
            let v: Vec<Value> = pairs.iter().map(|(m, c)| json!([m, c.to_string()])).collect();
            (t, json!({ "coefficients": v }))
        }
        Command::Funceq { consolidated, .. } => {
            let sys = system(&l, cache.as_ref())?;
            sys.check_homogeneous()?;
            let header = format!("# N = {}, M = {}, P = {}\n", sys.num_triples, sys.m, sys.p);
            let mut v = json!({
                "N": sys.num_triples, "M": sys.m, "P": sys.p,
                "system": SystemRecord::from_system(&sys),
            });
            let body = if *consolidated {
                let c = sys.consolidate();
                let mut t = String::new();
                for (x, val) in &c.constants {
                    writeln!(t, "# z[{x}] = {val}").unwrap();
                }
                for (x, y) in &c.merged {
                    writeln!(t, "# z[{x}] = z[{y}]").unwrap();
                }
                v["consolidated"] = json!({
                    "constants": c.constants.iter().map(|(x, q)| json!([x, q.to_string()])).collect::<Vec<_>>(),
                    "merged": c.merged,
                    "system": SystemRecord::from_system(&c.system),
                });
                t + &c.system.to_string()
            } else {
                sys.to_string()
            };
            (header + &body, v)
        }
        Command::Abscissa { truncation, bisection_tol, newton_tol, step, s_start, .. } => {
            let cfg = SolverConfig {
                truncation: *truncation,
                bisection_tol: *bisection_tol,
                newton_tol: *newton_tol,
                step: *step,
                s_start: *s_start,
                ..Default::default()
            };
            cfg.validate()?;
            let sys = system(&l, cache.as_ref())?;
            let it = iterate_system(&sys, *truncation)?;
            let r = abscissa(&sys, &it.per_triple, &cfg)?;
            let t = format!(
                "sigma {:.12}\nbracket {:.12} {:.12}\ntruncation {}\nsmallest_singular_value {:e}\nstart_singular_value {:e}\ncomplex_below {}\n",
                r.sigma, r.lo, r.hi, r.truncation, r.smallest_singular_value, r.start_singular_value, r.complex_below
            );
            let v = json!({
                "sigma": r.sigma, "lo": r.lo, "hi": r.hi, "truncation": r.truncation,
                "smallest_singular_value": r.smallest_singular_value,
                "start_singular_value": r.start_singular_value,
                "complex_below": r.complex_below,
                "trace": r.trace,
            });
            (t, v)
        }
        Command::Tower { level, .. } => {
            let (order, direct) = tower_zeta(&l.bs, *level, u64::MAX)?;
            let sys = system(&l, cache.as_ref())?;
            let its = iterates(&sys, u64::MAX, *level)?;
            let assembled = repzeta_core::dirichlet::assemble_row(&sys, &its[*level])?;
            let dp = direct.integer_terms()?;
            let ap = assembled.integer_terms()?;
            let mut t = format!("# |G_{level}| = {order}\n");
            for (m, c) in &dp {
                writeln!(t, "{m} {c}").unwrap();
            }
            writeln!(t, "# iterate {level} {}", if dp == ap { "agrees" } else { "DISAGREES" }).unwrap();
            let enc = |v: &[(u64, i128)]| v.iter().map(|(m, c)| json!([m, c.to_string()])).collect::<Vec<_>>();
            let v = json!({ "order": order, "direct": enc(&dp), "iterate": enc(&ap), "agrees": dp == ap });
            if dp != ap {
                return Err(Failure { code: 3, message: format!("tower level {level} disagrees with iterate {level}\n{t}") });
            }
            (t, v)
        }
        Command::Catalog { .. } => {
            let field = l.bs.field()?;
            let rec = match cache.as_ref().and_then(|c| c.load::<CatalogRecord>("catalog", &l.hash, field.q)) {
                Some(r) => r,
                None => {
                    let r = CatalogRecord::from_catalog(&catalog(&l)?);
                    if let Some(c) = &cache {
                        if let Err(e) = c.store("catalog", &l.hash, field.q, &r) {
                            eprintln!("warning: cannot write cache: {e}");
                        }
                    }
                    r
                }
            };
            let mut t = format!("# |B| = {}, {} subgroup classes, {} triples\n", rec.b_order, rec.classes, rec.entries.len());
            t += "# entry class |H| [B:H] [B:N] multiplier-class degrees\n";
            for (i, e) in rec.entries.iter().enumerate() {
                let degs: Vec<String> = e.degrees.iter().map(|(d, c)| format!("{c}*{d}")).collect();
                writeln!(t, "{i} {} {} {} {} {:?} {}", e.class, e.subgroup.len(), e.index, e.conjugates, e.coords, degs.join("+"))
                    .unwrap();
            }
            (t, serde_json::to_value(&rec).map_err(|e| Failure { code: 3, message: e.to_string() })?)
        }
    };
    if input.json {
        let out = json!({ "manifest": manifest, "result": value });
        Ok(serde_json::to_string_pretty(&out).unwrap() + "\n")
    } else {
        Ok(manifest.text() + &text)
    }
}
