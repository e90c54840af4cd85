mod config;

use clap::{Args, Parser, Subcommand};
use cmlax::dynamics::{conserved_report, integrate, to_csv, IntegrateOptions};
use cmlax::elliptic::TAU_MIN;
use cmlax::laxpairs::{
    admissibility_table, admissibility_text, random_state, PhasePoint, RootSystem,
};
use cmlax::report::{Expect, IdentityReport};
use cmlax::sampling::Sampler;
use cmlax::spin_tops::check_tops_suite;
use cmlax::suites::{override_expect, quantum_check, run_suite, Suite, SuiteOptions};
use cmlax::{Error, C64};
use config::{layered, ConfigFile, ENV_SAMPLES, ENV_TOL};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

/// Lax pairs for elliptic Calogero-Moser systems: identity checks,
/// trajectories and the admissibility table.
#[derive(Parser, Debug)]
#[command(name = "cmlax", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite and write a JSON report.
    Verify {
        #[arg(long)]
        suite: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Integrate the equations of motion and report conserved quantities.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Initial positions, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        /// Initial momenta, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        /// Spectral parameters to monitor, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        /// Output prefix: writes PREFIX.csv and PREFIX.json.
        #[arg(long)]
        prefix: Option<PathBuf>,
    },
    /// Print the table of admissible ranks and couplings.
    Table {
        #[arg(long)]
        json: bool,
    },
    /// Quantum Lax equation for one configuration.
    QuantumCheck {
        #[command(flatten)]
        common: Common,
    },
    /// Spin Calogero-Moser, interacting tops and their quantization.
    TopsCheck {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// key = value file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    system: Option<String>,
    /// Number of particles.
    #[arg(long)]
    n: Option<usize>,
    /// R-matrix rank.
    #[arg(long)]
    ntilde: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    g: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    hbar: Option<String>,
    /// pass or fail; overrides every entry's expectation.
    #[arg(long)]
    expect: Option<String>,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_)
            | Error::Inadmissible { .. }
            | Error::ShapeMismatch(_)
            | Error::Constraint(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

type Run<T> = Result<T, Failure>;

fn parse_complex(s: &str) -> Result<C64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    t.parse::<C64>()
        .map_err(|_| format!("'{s}' is not a complex number (expected a+bi)"))
}

fn parse_list(s: &str) -> Result<Vec<C64>, String> {
    s.split(',').map(parse_complex).collect()
}

/// Resolved flags: flag, then config file, then environment, then defaults.
struct Resolved {
    opts: SuiteOptions,
    file: ConfigFile,
    system: Option<RootSystem>,
}

const KEYS: [&str; 19] = [
    "suite", "system", "n", "ntilde", "tau", "seed", "samples", "tol", "nu", "mu", "g", "hbar",
    "expect", "q", "p", "z", "t-end", "dt", "prefix",
];

fn complex_opt(flag: &Option<String>, file: &ConfigFile, key: &str) -> Run<Option<C64>> {
    match flag.as_deref().or(file.get(key)) {
        Some(s) => parse_complex(s).map(Some).map_err(Failure::Usage),
        None => Ok(None),
    }
}

fn resolve(c: &Common) -> Run<Resolved> {
    let file = match &c.config {
        Some(p) => ConfigFile::load(p).map_err(Failure::Usage)?,
        None => ConfigFile::default(),
    };
    if let Some(k) = file.keys().find(|k| !KEYS.contains(k)) {
        return Err(Failure::Usage(format!("unknown config key '{k}'")));
    }
    let d = SuiteOptions::default();
    let u = Failure::Usage;
    let system = match c.system.as_deref().or(file.get("system")) {
        Some(s) => Some(RootSystem::parse(s)?),
        None => None,
    };
    let expect = match c.expect.as_deref().or(file.get("expect")) {
        Some("pass") => Some(Expect::Pass),
        Some("fail") => Some(Expect::Fail),
        Some(other) => return Err(u(format!("--expect must be pass or fail, got '{other}'"))),
        None => None,
    };
    let opts = SuiteOptions {
        tau: complex_opt(&c.tau, &file, "tau")?.unwrap_or(d.tau),
        seed: layered(c.seed, &file, "seed", None, d.seed).map_err(u)?,
        samples: layered(c.samples, &file, "samples", Some(ENV_SAMPLES), d.samples).map_err(u)?,
        tol: layered(c.tol, &file, "tol", Some(ENV_TOL), d.tol).map_err(u)?,
        n_tilde: layered(c.ntilde.map(Some), &file, "ntilde", None, None).map_err(u)?,
        system,
        particles: layered(c.n.map(Some), &file, "n", None, None).map_err(u)?,
        nu: complex_opt(&c.nu, &file, "nu")?.unwrap_or(d.nu),
        mu: complex_opt(&c.mu, &file, "mu")?,
        g: complex_opt(&c.g, &file, "g")?,
        hbar: complex_opt(&c.hbar, &file, "hbar")?.unwrap_or(d.hbar),
        expect,
    };
    if opts.tau.im < TAU_MIN {
        return Err(u(format!(
            "--tau needs Im tau >= {TAU_MIN}, got {}",
            opts.tau
        )));
    }
    if opts.samples == 0 {
        return Err(u("--samples must be positive".into()));
    }
    if !(opts.tol > 0.0) {
        return Err(u("--tol must be positive".into()));
    }
    if opts.n_tilde == Some(0) {
        return Err(u("--ntilde must be positive".into()));
    }
    Ok(Resolved { opts, file, system })
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Run<()> {
    match path {
        Some(p) => {
            fs::write(p, text).map_err(|e| Failure::Numeric(format!("{}: {e}", p.display())))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn finish(rep: &IdentityReport, out: &Option<PathBuf>) -> Run<()> {
    for e in &rep.entries {
        eprintln!(
            "{} {:<8} {:.3e} (tol {:.0e}, expect {:?}) {}",
            if e.pass { "PASS" } else { "FAIL" },
            e.suite,
            e.max_residual,
            e.tol,
            e.expect,
            e.identity
        );
    }
    write_out(out, &rep.to_json())?;
    let failed: Vec<&str> = rep.failures().map(|e| e.identity.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numeric(format!(
            "{} identities failed: {}",
            failed.len(),
            failed.join("; ")
        )))
    }
}

fn verify(suite: &Option<String>, c: &Common) -> Run<()> {
    let r = resolve(c)?;
    let name = suite.as_deref().or(r.file.get("suite")).unwrap_or("all");
    let suite = Suite::parse(name)?;
    let rep = run_suite(suite, &r.opts)?;
    finish(&rep, &c.out)
}

fn quantum(c: &Common) -> Run<()> {
    let r = resolve(c)?;
    let cfg = r.opts.model(r.system.unwrap_or(RootSystem::A))?;
    let mut rep = quantum_check(&cfg, &r.opts, &[r.opts.hbar])?;
    if let Some(e) = r.opts.expect {
        override_expect(&mut rep, e, r.opts.tol);
    }
    finish(&rep.sorted(), &c.out)
}

fn tops(c: &Common) -> Run<()> {
    let r = resolve(c)?;
    let o = &r.opts;
    let n = o.particles.unwrap_or(2);
    let nt = o.n_tilde.unwrap_or(2);
    if n < 2 {
        return Err(Failure::Usage("tops-check needs --n >= 2".into()));
    }
    let mut rep = check_tops_suite(n, nt, o.tau, o.nu, o.hbar, o.seed, o.samples, o.tol)?;
    if let Some(e) = o.expect {
        override_expect(&mut rep, e, o.tol);
    }
    finish(&rep.sorted(), &c.out)
}

struct SimArgs<'a> {
    q: &'a Option<String>,
    p: &'a Option<String>,
    z: &'a Option<String>,
    t_end: Option<f64>,
    dt: Option<f64>,
    prefix: &'a Option<PathBuf>,
}

fn simulate(c: &Common, a: SimArgs) -> Run<()> {
    let r = resolve(c)?;
    let f = &r.file;
    let u = Failure::Usage;
    let cfg = r.opts.model(r.system.unwrap_or(RootSystem::A))?;
    if cfg.force {
        return Err(u(format!(
            "{} is outside the admissibility table; refusing to integrate",
            cfg.label()
        )));
    }
    let list = |flag: &Option<String>, key: &str| -> Run<Option<Vec<C64>>> {
        match flag.as_deref().or(f.get(key)) {
            Some(s) => parse_list(s).map(Some).map_err(Failure::Usage),
            None => Ok(None),
        }
    };
    let n = cfg.particles;
    let state = match (list(a.q, "q")?, list(a.p, "p")?) {
        (Some(q), Some(p)) => PhasePoint::new(q, p)?,
        (None, None) if n == 2 => PhasePoint::new(
            vec![C64::new(-0.25, 0.0), C64::new(0.25, 0.0)],
            vec![C64::new(1.5, 0.0), C64::new(-0.45, 0.0)],
        )?,
        (None, None) => random_state(&cfg, &mut Sampler::split(r.opts.seed, "simulate", 0)),
        _ => return Err(u("give both --q and --p, or neither".into())),
    };
    if state.len() != n {
        return Err(u(format!(
            "state has {} particles, --n is {n}",
            state.len()
        )));
    }
    let z = list(a.z, "z")?.unwrap_or_else(|| vec![C64::new(0.3, 0.2)]);
    let t_end = layered(a.t_end, f, "t-end", None, 5.0).map_err(u)?;
    let dt = layered(a.dt, f, "dt", None, 1e-3).map_err(u)?;
    let traj = integrate(&cfg, &state, &IntegrateOptions::new(t_end, dt, z))?;
    let rep = conserved_report(&traj);
    let prefix = a
        .prefix
        .clone()
        .or_else(|| f.get("prefix").map(PathBuf::from));
    match prefix {
        Some(p) => {
            let csv = p.with_extension("csv");
            let json = p.with_extension("json");
            fs::write(&csv, to_csv(&traj))
                .map_err(|e| Failure::Numeric(format!("{}: {e}", csv.display())))?;
            fs::write(&json, rep.to_json())
                .map_err(|e| Failure::Numeric(format!("{}: {e}", json.display())))?;
        }
        None => print!("{}", to_csv(&traj)),
    }
    eprintln!(
        "{} t_end={t_end} dt={dt} split_steps={}",
        cfg.label(),
        traj.split_steps
    );
    for d in &rep.drifts {
        eprintln!("{:<22} {:.3e}", d.quantity, d.max_relative_drift);
    }
    Ok(())
}

fn table(json: bool) -> Run<()> {
    if json {
        let t = serde_json::to_string_pretty(&admissibility_table())
            .map_err(|e| Failure::Numeric(e.to_string()))?;
        println!("{t}");
    } else {
        print!("{}", admissibility_text());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = match &cli.command {
        Command::Verify { suite, common } => verify(suite, common),
        Command::Simulate {
            common,
            q,
            p,
            z,
            t_end,
            dt,
            prefix,
        } => simulate(
            common,
            SimArgs {
                q,
                p,
                z,
                t_end: *t_end,
                dt: *dt,
                prefix,
            },
        ),
        Command::Table { json } => table(*json),
        Command::QuantumCheck { common } => quantum(common),
        Command::TopsCheck { common } => tops(common),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
