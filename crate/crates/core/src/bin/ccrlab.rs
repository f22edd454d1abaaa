use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use ccrlab::classify::{equivalent, Side};
use ccrlab::config::{load_config, ScenarioConfig};
use ccrlab::index::{index_of, write_gram_csv, IndexOptions};
use ccrlab::rational::{self, format_strings, Q};
use ccrlab::runner::{self, build_scenario, unit_battery, weyl_battery, RunOptions};
use ccrlab::scenario::Scenario;
use ccrlab::shiftrep::{cocycle_space_dim, semigroup_generators, Multiplicity, ShiftRep};
use ccrlab::Error;

#[derive(Parser)]
#[command(name = "ccrlab", version, about = "Desk-scale verification of CCR flows on lattice quotients")]
struct Cli {
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Multiply every window extent by this rational factor.
    #[arg(long, global = true)]
    window_scale: Option<String>,
    /// JSON output (the default for `run`).
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// CSV summary instead of JSON (`run` only).
    #[arg(long, global = true)]
    csv: bool,
    /// Progress on standard error.
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks listed in a scenario file and emit a report.
    Run { config: PathBuf },
    /// Decide whether two scenarios give equivalent flows.
    Classify { a: PathBuf, b: PathBuf },
    /// Index from the Gram rank of the covariance kernel.
    Index { config: PathBuf },
    /// Dimension of the additive cocycle space.
    Cocycles { config: PathBuf },
    /// Whether the boundary of A is compact.
    Boundary { config: PathBuf },
    /// Weyl relations and unit axioms in truncated Fock space.
    VerifyFock { config: PathBuf },
    /// Write a Gram matrix, a membership mask or shift matrices.
    Export {
        config: PathBuf,
        #[arg(long, value_enum)]
        what: Export,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Export {
    Gram,
    Masks,
    Matrices,
}

/// Exit status of a failed command: 2 for unusable input, 3 for an
/// inconclusive numerical result, 1 otherwise.
fn error_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Io(_) | Error::IrrationalInput => 2,
        Error::Unstable(_) | Error::LadderTooShort { .. } => 3,
        _ => 1,
    }
}

struct Ctx {
    out: Option<PathBuf>,
    window_scale: Option<Q>,
    json: bool,
    csv: bool,
    verbose: bool,
}

impl Ctx {
    fn scenario(&self, path: &Path) -> Result<(ScenarioConfig, Scenario), Failure> {
        let config = load_config(path).map_err(|e| Failure::input(e, path))?;
        let s = build_scenario(&config, self.window_scale.as_ref()).map_err(|e| Failure::input(e, path))?;
        for w in &s.warnings {
            if self.verbose {
                eprintln!("warning: {w}");
            }
        }
        Ok((config, s))
    }

    fn emit(&self, bytes: &[u8]) -> io::Result<()> {
        match &self.out {
            Some(p) => std::fs::write(p, bytes),
            None => io::stdout().write_all(bytes),
        }
    }

    fn emit_text_or_json(&self, text: String, doc: Value) -> io::Result<()> {
        if self.json {
            self.emit(format!("{}\n", serde_json::to_string_pretty(&doc).expect("json")).as_bytes())
        } else {
            self.emit(text.as_bytes())
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(e: Error, path: &Path) -> Self {
        // Anything that stops a scenario from being built is a bad input.
        Self {
            code: 2,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: error_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self {
            code: 2,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let window_scale = match cli.window_scale.as_deref().map(rational::parse_rational) {
        None => None,
        Some(Ok(f)) => Some(f),
        Some(Err(e)) => {
            eprintln!("error: --window-scale: {e}");
            return ExitCode::from(2);
        }
    };
    let ctx = Ctx {
        out: cli.out,
        window_scale,
        json: cli.json,
        csv: cli.csv,
        verbose: cli.verbose,
    };
    let result = match &cli.command {
        Command::Run { config } => run(&ctx, config),
        Command::Classify { a, b } => classify(&ctx, a, b),
        Command::Index { config } => index(&ctx, config),
        Command::Cocycles { config } => cocycles(&ctx, config),
        Command::Boundary { config } => boundary(&ctx, config),
        Command::VerifyFock { config } => verify_fock(&ctx, config),
        Command::Export { config, what } => export(&ctx, config, *what),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(ctx: &Ctx, path: &Path) -> Result<u8, Failure> {
    let config = load_config(path).map_err(|e| Failure::input(e, path))?;
    let report = runner::run(&config, ctx.window_scale.as_ref(), RunOptions { verbose: ctx.verbose })
        .map_err(|e| Failure::input(e, path))?;
    let body = if ctx.csv {
        report.to_csv()
    } else {
        format!("{}\n", serde_json::to_string_pretty(&report.to_json(true)).expect("json"))
    };
    ctx.emit(body.as_bytes())?;
    Ok(report.exit_code() as u8)
}

fn classify(ctx: &Ctx, a: &Path, b: &Path) -> Result<u8, Failure> {
    let (_, sa) = ctx.scenario(a)?;
    let (_, sb) = ctx.scenario(b)?;
    let eq = equivalent(&sa, &sb)?;
    let mut text = format!("equivalent: {}\n", eq.equivalent);
    let cert = match &eq.certificate {
        None => Value::Null,
        Some(c) => {
            let from = match c.from {
                Side::A => "A",
                Side::B => "B",
            };
            text.push_str(&format!(
                "witness: {} (in lattice {from} only)\nspectrumA: {}\nspectrumB: {}\n",
                rational::format_vec(&c.witness),
                c.spectrum_a,
                c.spectrum_b
            ));
            json!({
                "witness": format_strings(&c.witness),
                "spectrumA": c.spectrum_a.to_string(),
                "spectrumB": c.spectrum_b.to_string(),
                "hnfA": c.hnf_a.iter().map(|v| format_strings(v)).collect::<Vec<_>>(),
                "hnfB": c.hnf_b.iter().map(|v| format_strings(v)).collect::<Vec<_>>(),
                "valid": c.is_valid(),
            })
        }
    };
    ctx.emit_text_or_json(text, json!({ "equivalent": eq.equivalent, "certificate": cert }))?;
    Ok(0)
}

fn index(ctx: &Ctx, path: &Path) -> Result<u8, Failure> {
    let (_, s) = ctx.scenario(path)?;
    let r = index_of(&s.pspace, &s.window, &s.ladder, &IndexOptions::new(s.k, s.seed))?;
    let text = format!(
        "index: {}\npointA: {}\npointB: {}\nindependent: {}\nstable: {}\n",
        r.index,
        rational::format_vec(&r.point_a),
        rational::format_vec(&r.point_b),
        r.independent,
        r.stable
    );
    let doc = json!({
        "index": r.index,
        "pointA": format_strings(&r.point_a),
        "pointB": format_strings(&r.point_b),
        "independent": r.independent,
        "stable": r.stable,
        "eigenvalues": r.eigenvalues,
        "cellVolume": r.cell_volume,
    });
    ctx.emit_text_or_json(text, doc)?;
    Ok(if r.stable { 0 } else { 3 })
}

fn cocycles(ctx: &Ctx, path: &Path) -> Result<u8, Failure> {
    let (_, s) = ctx.scenario(path)?;
    let space = cocycle_space_dim(&s.pspace, s.k, &[], &s.ladder)?;
    let text = format!("dim: {}\nrawDims: {:?}\n", space.dim, space.raw_dims);
    let doc = json!({
        "dim": space.dim,
        "rawDims": space.raw_dims,
        "extents": space.extents,
        "growthExponents": space.growth_exponents,
    });
    ctx.emit_text_or_json(text, doc)?;
    Ok(0)
}

fn boundary(ctx: &Ctx, path: &Path) -> Result<u8, Failure> {
    let (_, s) = ctx.scenario(path)?;
    let (compact, reason) = s.pspace.boundary_compact();
    ctx.emit_text_or_json(format!("{reason}\n"), json!({ "compact": compact, "reason": reason }))?;
    Ok(0)
}

fn verify_fock(ctx: &Ctx, path: &Path) -> Result<u8, Failure> {
    let (_, s) = ctx.scenario(path)?;
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let weyl = weyl_battery(&mut rng, 2)?;
    let units = unit_battery(&s, &mut rng)?;
    let ok = weyl["pass"] == json!(true) && units["pass"] == json!(true);
    let text = format!(
        "weyl: {} (worst ratios: relation {:.3e}, unitarity {:.3e}, action {:.3e})\nunits: {} (semigroup {:.3e}, intertwining {:.3e}; controls {:.3e}, {:.3e})\n",
        if weyl["pass"] == json!(true) { "pass" } else { "fail" },
        weyl["worstRelationRatio"].as_f64().unwrap_or(f64::NAN),
        weyl["worstUnitarityRatio"].as_f64().unwrap_or(f64::NAN),
        weyl["worstActionRatio"].as_f64().unwrap_or(f64::NAN),
        if units["pass"] == json!(true) { "pass" } else { "fail" },
        units["semigroup"].as_f64().unwrap_or(f64::NAN),
        units["intertwining"].as_f64().unwrap_or(f64::NAN),
        units["controlCharacter"].as_f64().unwrap_or(f64::NAN),
        units["controlCocycle"].as_f64().unwrap_or(f64::NAN),
    );
    ctx.emit_text_or_json(text, json!({ "weyl": weyl, "units": units }))?;
    Ok(if ok { 0 } else { 1 })
}

fn export(ctx: &Ctx, path: &Path, what: Export) -> Result<u8, Failure> {
    let (_, s) = ctx.scenario(path)?;
    let mut buf = Vec::new();
    match what {
        Export::Gram => {
            let r = index_of(&s.pspace, &s.window, &s.ladder, &IndexOptions::new(s.k, s.seed))?;
            write_gram_csv(&r.gram, &mut buf)?;
        }
        Export::Masks => {
            if ctx.out.is_none() {
                return Err(Failure {
                    code: 2,
                    message: "--what masks writes a binary file; pass --out".into(),
                });
            }
            s.pspace.mask(&s.window)?.write_to(&mut buf)?;
        }
        Export::Matrices => {
            let rep = ShiftRep::build(&s.pspace, &s.window, Multiplicity::Finite(s.k))?;
            let mut w = BufWriter::new(&mut buf);
            writeln!(w, "generator,dy,du,row,col,value")?;
            for (g, x) in semigroup_generators(&rep).iter().enumerate() {
                let dy = x.dy.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
                let du = x.du.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
                for (&(r, c), &v) in &rep.shift(x)?.to_sparse().entries {
                    writeln!(w, "{g},{dy},{du},{r},{c},{v}")?;
                }
            }
            w.flush()?;
        }
    }
    match &ctx.out {
        Some(p) => File::create(p)?.write_all(&buf)?,
        None => io::stdout().write_all(&buf)?,
    }
    Ok(0)
}
