mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lrp_core::dataset::{
    density_report, ingest, least_ramanujan_prime, s2_sum, synthesize_sato_tate, SyntheticConfig,
};
use lrp_core::dde::{
    buchstab_problem, sigma_constants, sigma_problem, solve, Buchstab, Sigma,
};
use lrp_core::hecke::{is_ramanujan, lift_coefficients, nonramanujan_growth, sample_local_data, u_closed, u_expanded};
use lrp_core::multfunc::{c_constant, mean_value_report, HSpec};
use lrp_core::sieve::{phi_band, phi_band_log, phi_rough_asymptotic, PrimeTable};
use lrp_core::special::dilog;
use lrp_core::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use config::RunConfig;
use output::{Cell, Table};

const EXIT_VALIDATION: u8 = 2;
const EXIT_COMPUTATION: u8 = 3;
const EXIT_USAGE: u8 = 64;

/// Sieve densities, Hecke local algebra and Ramanujan-prime statistics.
#[derive(Parser, Debug)]
#[command(name = "lrp", version, about)]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Output format [default: csv, or output_format from the config]
    #[arg(long, global = true, value_parser = ["csv", "json"])]
    format: Option<String>,

    /// Significant digits for real numbers
    #[arg(long, global = true, default_value_t = 17)]
    digits: usize,

    /// key=value config file (step_h, ramanujan_tol, output_format, prime_limit_guard)
    #[arg(long, global = true, env = "RS_CONFIG")]
    config: Option<PathBuf>,

    /// Solver step; must be 1/m for an integer m
    #[arg(long, global = true)]
    step_h: Option<f64>,

    /// Slack on |λ(p)| ≤ 2 when classifying Ramanujan primes
    #[arg(long, global = true)]
    ramanujan_tol: Option<f64>,

    /// Largest prime table any subcommand may build
    #[arg(long, global = true)]
    prime_limit_guard: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Smallest zero u0 of σ and the exponent 1/u0
    SigmaZero,
    /// σ(u)
    SigmaEval {
        #[arg(long)]
        u: f64,
    },
    /// Buchstab ω(u), u ≥ 1
    Buchstab {
        #[arg(long)]
        u: f64,
    },
    /// Real dilogarithm Li₂(x), x ≤ 1
    Dilog {
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
    },
    /// Φ(X,Y,Z) or Φ'(X,Y,Z) with the main terms of the lower bound
    SieveCount {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
        #[arg(long)]
        z: f64,
        /// Report Φ' = Σ log(X/l) instead of the count
        #[arg(long)]
        log_weighted: bool,
        /// Fill the asymptotic column from Buchstab main terms (count mode only)
        #[arg(long)]
        asymptotic: bool,
    },
    /// H(y^u) against c(N)σ(u)(log y)² y^u
    MeanValue {
        #[arg(long)]
        y: f64,
        #[arg(long)]
        u: f64,
        #[arg(long, default_value_t = 1)]
        level: u64,
    },
    /// c(N) truncated at primes ≤ P, with a bound on the log of the tail
    CConstant {
        #[arg(long, default_value_t = 1)]
        level: u64,
        #[arg(long)]
        cutoff: f64,
    },
    /// Ramanujan counts and U(p) means over primes ≤ X
    Density {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        x: f64,
    },
    /// Write a Sato–Tate dataset
    Synth {
        #[arg(long)]
        limit: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Overrides as p:lambda, comma separated, |lambda| > 2
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        violate: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Least Ramanujan prime in a dataset and the bound (N(1+|t|))^{1/u0}
    LeastPrime {
        #[arg(long)]
        input: PathBuf,
    },
    /// S(x) = Σ_{d<x} λ(d²) log(x/d) split by sign
    SSums {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        x: f64,
    },
    /// Lift identities and non-Ramanujan growth on random local data
    IdentityCheck {
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Solver grid as u,y CSV
    DumpGrid {
        #[arg(long, value_enum, default_value_t = Problem::Sigma)]
        problem: Problem,
        #[arg(long)]
        u_end: f64,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Problem {
    Sigma,
    Buchstab,
}

struct Ctx {
    cfg: RunConfig,
    digits: usize,
}

impl Ctx {
    fn table(&self, limit: u64) -> Result<PrimeTable> {
        PrimeTable::with_guard(limit.max(2), self.cfg.prime_limit_guard)
    }
}

fn resolve(g: &Global) -> Result<Ctx> {
    let mut cfg = match &g.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(f) = &g.format {
        cfg.output_format = f.parse().map_err(|e: String| Error::Validation { line: 0, msg: e })?;
    }
    if let Some(h) = g.step_h {
        cfg.step_h = h;
    }
    if let Some(t) = g.ramanujan_tol {
        cfg.ramanujan_tol = t;
    }
    if let Some(l) = g.prime_limit_guard {
        cfg.prime_limit_guard = l;
    }
    cfg.validate()?;
    if g.digits == 0 {
        return Err(Error::Validation { line: 0, msg: "--digits must be positive".into() });
    }
    Ok(Ctx { cfg, digits: g.digits })
}

fn parse_violations(items: &[String]) -> Result<Vec<(u64, f64)>> {
    items
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let bad = || Error::Validation { line: 0, msg: format!("bad --violate entry {s:?}, expected p:lambda") };
            let (p, l) = s.split_once(':').ok_or_else(bad)?;
            Ok((p.trim().parse().map_err(|_| bad())?, l.trim().parse().map_err(|_| bad())?))
        })
        .collect()
}

fn ceil_u64(x: f64) -> Result<u64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!("{x} is not a valid bound")));
    }
    Ok(x.ceil() as u64)
}

fn run(cmd: Command, ctx: &Ctx) -> Result<(Table, bool)> {
    let h = ctx.cfg.step_h;
    let tol = ctx.cfg.ramanujan_tol;
    let table = match cmd {
        Command::SigmaZero => {
            let c = sigma_constants(h)?;
            Table::new(&["u0", "exponent"]).row(vec![Cell::Real(c.u0), Cell::Real(c.exponent)])
        }
        Command::SigmaEval { u } => {
            let s = Sigma::new(u.max(1.0), h)?;
            Table::new(&["u", "sigma"]).row(vec![Cell::Input(u), Cell::Real(s.eval(u)?)])
        }
        Command::Buchstab { u } => {
            let w = Buchstab::new(Buchstab::DEFAULT_END.max(u), h)?;
            Table::new(&["u", "omega"]).row(vec![Cell::Input(u), Cell::Real(w.eval(u)?)])
        }
        Command::Dilog { x } => Table::new(&["x", "li2"]).row(vec![Cell::Input(x), Cell::Real(dilog(x)?)]),
        Command::SieveCount { x, y, z, log_weighted, asymptotic } => {
            let t = ctx.table(ceil_u64(x.min(y.max(z)))?)?;
            let exact = if log_weighted {
                Cell::Real(phi_band_log(x, y, z, &t)?)
            } else {
                Cell::Int(phi_band(x, y, z, &t)? as i128)
            };
            let asym = if asymptotic && !log_weighted {
                // Φ(X,Y,Z) = Φ(X,Z) − Φ(X,Y) for X ≤ YZ; Φ(X,Y) vanishes when X ≤ Y
                let w = Buchstab::new(Buchstab::DEFAULT_END, h)?;
                let upper = if x > y { phi_rough_asymptotic(x, y, &w)? } else { 0.0 };
                Cell::Real(phi_rough_asymptotic(x, z, &w)? - upper)
            } else {
                Cell::Empty
            };
            let main = x / (2.0 * z.ln()) - x / y.ln();
            Table::new(&["X", "Y", "Z", "exact", "asymptotic", "main_bound"]).row(vec![
                Cell::Input(x),
                Cell::Input(y),
                Cell::Input(z),
                exact,
                asym,
                Cell::Real(main),
            ])
        }
        Command::MeanValue { y, u, level } => {
            let spec = HSpec::new(y, level)?;
            let t = ctx.table(ceil_u64(y.powf(u))?)?;
            let sigma = Sigma::new(u.max(1.0), h)?;
            let r = mean_value_report(&spec, u, &t, &sigma)?;
            Table::new(&["y", "u", "N", "lhs", "rhs", "ratio"]).row(vec![
                Cell::Input(y),
                Cell::Input(u),
                Cell::Int(level as i128),
                Cell::Real(r.lhs),
                Cell::Real(r.rhs),
                Cell::Real(r.ratio),
            ])
        }
        Command::CConstant { level, cutoff } => {
            let t = ctx.table(ceil_u64(cutoff)?)?;
            let c = c_constant(level, cutoff, &t)?;
            Table::new(&["N", "P", "value", "tail_bound"]).row(vec![
                Cell::Int(level as i128),
                Cell::Input(cutoff),
                Cell::Real(c.value),
                Cell::Real(c.tail_bound),
            ])
        }
        Command::Density { input, x } => {
            let ds = ingest(&input)?;
            let r = density_report(&ds, x, tol)?;
            Table::new(&[
                "X",
                "pi_X",
                "ramanujan_count",
                "ramanujan_fraction",
                "mean_u",
                "mean_nine",
                "nonram_fraction_bound",
            ])
            .row(vec![
                Cell::Input(x),
                Cell::Int(r.pi_x as i128),
                Cell::Int(r.ramanujan_count as i128),
                Cell::Real(r.ramanujan_fraction),
                Cell::Real(r.mean_u),
                Cell::Real(r.mean_nine),
                Cell::Real(r.nonram_fraction_bound),
            ])
        }
        Command::Synth { limit, seed, violate, out } => {
            let mut cfg = SyntheticConfig::new(limit, seed);
            cfg.violations = parse_violations(&violate)?;
            let ds = synthesize_sato_tate(&cfg, &ctx.table(limit)?)?;
            ds.export(&out)?;
            Table::new(&["out", "records", "seed"]).row(vec![
                Cell::Text(out.display().to_string()),
                Cell::Int(ds.len() as i128),
                Cell::Int(seed as i128),
            ])
        }
        Command::LeastPrime { input } => {
            let ds = ingest(&input)?;
            let c = sigma_constants(h)?;
            let header = ["found", "p", "bound", "within_bound"];
            match least_ramanujan_prime(&ds, tol, &c) {
                Ok(r) => Table::new(&header).row(vec![
                    Cell::Bool(true),
                    Cell::Int(r.p as i128),
                    Cell::Real(r.bound),
                    Cell::Bool(r.within_bound),
                ]),
                Err(Error::NoneFound) => {
                    Table::new(&header).row(vec![Cell::Bool(false), Cell::Empty, Cell::Empty, Cell::Empty])
                }
                Err(e) => return Err(e),
            }
        }
        Command::SSums { input, x } => {
            let s = s2_sum(&ingest(&input)?, x)?;
            Table::new(&["x", "S", "S_plus", "S_minus"]).row(vec![
                Cell::Input(x),
                Cell::Real(s.s),
                Cell::Real(s.s_plus),
                Cell::Real(s.s_minus),
            ])
        }
        Command::IdentityCheck { trials, seed } => return identity_check(trials, seed),
        Command::DumpGrid { problem, u_end } => {
            let p = match problem {
                Problem::Sigma => sigma_problem(),
                Problem::Buchstab => buchstab_problem(),
            };
            let g = solve(&p, u_end, h)?;
            let mut t = Table::new(&["u", "y"]);
            for (u, y, _) in g.nodes() {
                t = t.row(vec![Cell::Real(u), Cell::Real(y)]);
            }
            t
        }
    };
    Ok((table, true))
}

fn identity_check(trials: u64, seed: u64) -> Result<(Table, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(1.0);
    let (mut r_adj, mut r_sym, mut r_u) = (0.0f64, 0.0f64, 0.0f64);
    let (mut nonram, mut growth_failures) = (0u64, 0u64);
    for i in 0..trials {
        let ramanujan: bool = rng.gen();
        let trivial: bool = rng.gen();
        let d = sample_local_data(&mut rng, 2 + i, ramanujan, trivial);
        let l = lift_coefficients(&d)?;
        let a = l.a_adj;
        r_adj = r_adj.max(rel(a * a, l.a_sym4 + a + 1.0));
        r_sym = r_sym.max(rel(a * l.a_sym4, l.a_sym3.norm_sqr() - 1.0));
        r_u = r_u.max(rel(u_closed(&l), u_expanded(&l)));
        if !is_ramanujan(&d, 0.0) {
            nonram += 1;
            for n in 1..=5u32 {
                if !(nonramanujan_growth(&d, n)? > (2 * n + 1) as f64) {
                    growth_failures += 1;
                }
            }
        }
    }
    let ok = r_adj.max(r_sym).max(r_u) < 1e-8 && growth_failures == 0;
    let t = Table::new(&["trials", "max_residual_adj", "max_residual_sym", "max_residual_u", "nonramanujan", "growth_failures", "ok"])
        .row(vec![
            Cell::Int(trials as i128),
            Cell::Real(r_adj),
            Cell::Real(r_sym),
            Cell::Real(r_u),
            Cell::Int(nonram as i128),
            Cell::Int(growth_failures as i128),
            Cell::Bool(ok),
        ]);
    Ok((t, ok))
}

fn exit_for(e: &Error) -> u8 {
    if e.is_validation() {
        EXIT_VALIDATION
    } else {
        EXIT_COMPUTATION
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let ctx = match resolve(&cli.global) {
        Ok(ctx) => ctx,
        Err(e) => {
            eprintln!("lrp: {e}");
            return ExitCode::from(exit_for(&e));
        }
    };
    match run(cli.command, &ctx) {
        Ok((table, ok)) => {
            let text = table.render(ctx.cfg.output_format, ctx.digits);
            if let Err(e) = std::io::stdout().lock().write_all(text.as_bytes()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("lrp: {e}");
                    return ExitCode::from(EXIT_COMPUTATION);
                }
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_COMPUTATION)
            }
        }
        Err(e) => {
            eprintln!("lrp: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
