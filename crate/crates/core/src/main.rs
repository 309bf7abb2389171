use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use multivalent::classes::{self, ClassParams};
use multivalent::closure::{closure_sigma, ClosureKind};
use multivalent::fractional::{self, quadrature, ComposeOrder, FracParams, GeneralizedSeries};
use multivalent::harness::{self, CampaignConfig};
use multivalent::neighborhood::{self, NeighborhoodSpec, PerturbationSampling};
use multivalent::operator::{self, OperatorParams};
use multivalent::partial_sums;
use multivalent::report::{MarginTracker, Witness};
use multivalent::{DiskGrid, Error, NegSeries, Result, SeriesAnp};

#[derive(Parser)]
#[command(name = "multivalent", version, about = "Multiplier transformations and coefficient classes of p-valent series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OpArgs {
    #[arg(long, default_value_t = 1)]
    p: u32,
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value_t = 0.0)]
    mu: f64,
    #[arg(long, default_value_t = 0.0)]
    l: f64,
    /// Pin λ, μ, l (and p) to a named special case, e.g. `salagean`.
    #[arg(long)]
    preset: Option<String>,
}

impl OpArgs {
    fn build(&self) -> Result<OperatorParams> {
        let op = OperatorParams::new(self.delta, self.lambda, self.mu, self.l, self.p)?;
        match &self.preset {
            Some(name) => operator::preset(name)?.apply_to(op),
            None => Ok(op),
        }
    }
}

#[derive(Args, Clone)]
struct ClassArgs {
    #[command(flatten)]
    op: OpArgs,
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
}

impl ClassArgs {
    fn build(&self) -> Result<ClassParams> {
        ClassParams::new(self.op.build()?, self.a, self.b, self.sigma, self.n)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Product,
    Squares,
}

#[derive(Clone, Copy, ValueEnum)]
enum FracMode {
    #[value(name = "74")]
    DerivativeOfBernardi,
    #[value(name = "75")]
    BernardiOfDerivative,
    Bounds71,
    Bounds72,
    Oracle,
}

#[derive(Subcommand)]
enum Command {
    /// Print the multiplier Φ at exponent k.
    Phi {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long)]
        k: u32,
    },
    /// Apply the operator to series JSON on stdin.
    Transform {
        #[command(flatten)]
        op: OpArgs,
        /// Use the differential recursion (integer delta only).
        #[arg(long)]
        recursive: bool,
    },
    /// Exact membership of a negative-coefficient series read from stdin.
    Membership {
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Sharp bound on |a_k|.
    Bound {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        k: u32,
    },
    /// The single-term function on the class boundary.
    Extremal {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        k: u32,
    },
    /// Growth and distortion bounds on |f^(q)| over |z| = r.
    Distortion {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, default_value_t = 0)]
        q: u32,
        #[arg(long)]
        r: f64,
    },
    /// Sample the class condition over a disk grid for series JSON on stdin.
    Scan {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, value_delimiter = ',', default_values_t = DiskGrid::default_grid().radii)]
        radii: Vec<f64>,
        #[arg(long, default_value_t = 128)]
        angles: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Extra uniformly random points inside the largest radius.
        #[arg(long, default_value_t = 0)]
        extra_random: usize,
    },
    /// Neighborhood checks around a series read from stdin.
    Neighborhood {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        eta: f64,
        /// Also test the witness pair at this radius.
        #[arg(long)]
        eta_star: Option<f64>,
        #[arg(long, default_value = "42", value_parser = ["41", "42"])]
        theorem: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Ratio bounds between a function and its partial sum.
    PartialSums {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        m: u32,
        /// Use the extremal function instead of reading stdin.
        #[arg(long)]
        extremal: bool,
    },
    /// Closure parameter for quasi-convolution or square sums.
    Closure {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, value_delimiter = ',', required = true)]
        sigmas: Vec<f64>,
    },
    /// Fractional calculus on series JSON.
    Fractional {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, allow_hyphen_values = true)]
        nu: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        vartheta: f64,
        #[arg(long, value_enum)]
        mode: FracMode,
        /// Radius for the bounds modes, real point for the oracle.
        #[arg(long, default_value_t = 0.5)]
        r: f64,
    },
    /// Run verification campaigns.
    Verify {
        #[arg(long, value_delimiter = ',')]
        theorems: Option<Vec<String>>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn stdin() -> Result<String> {
    let mut s = String::new();
    std::io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| Error::Format(format!("cannot read stdin: {e}")))?;
    Ok(s)
}

/// Accepts either JSON form; magnitudes become negative real coefficients.
fn read_series(text: &str) -> Result<SeriesAnp> {
    SeriesAnp::from_json(text).or_else(|_| NegSeries::from_json(text).map(|f| f.to_series()))
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("output serializes")
}

fn write(path: &PathBuf, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Format(format!("cannot write {}: {e}", path.display())))
}

fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Phi { op, n, k } => {
            let op = op.build()?;
            if k < n + op.p {
                return Err(Error::Parameter(format!("k = {k} is below n + p = {}", n + op.p)));
            }
            println!("{}", op.phi(k));
        }
        Command::Transform { op, recursive } => {
            let op = op.build()?;
            let f = SeriesAnp::from_json(&stdin()?)?;
            let g = if recursive {
                operator::apply_j_recursive(&op, &f)?
            } else {
                operator::apply_j(&op, &f)?
            };
            println!("{}", g.to_json());
        }
        Command::Membership { class } => {
            let cls = class.build()?;
            let text = stdin()?;
            let verdict = match NegSeries::from_json(&text) {
                Ok(f) => classes::coeff_sum(&cls, &f)?,
                Err(_) => classes::coeff_sum_abs(&cls, &SeriesAnp::from_json(&text)?)?,
            };
            println!("{}", pretty(&verdict));
        }
        Command::Bound { class, k } => println!("{}", classes::coeff_bound(&class.build()?, k)?),
        Command::Extremal { class, k } => println!("{}", classes::extremal_term(&class.build()?, k)?.to_json()),
        Command::Distortion { class, q, r } => {
            let (lower, upper) = classes::distortion_bounds(&class.build()?, q, r)?;
            println!("{}", pretty(&json!({ "lower": lower, "upper": upper })));
        }
        Command::Scan {
            class,
            radii,
            angles,
            seed,
            extra_random,
        } => {
            let mut grid = DiskGrid::new(radii, angles, seed)?;
            grid.extra_random = extra_random;
            let rep = classes::subordination_scan(&class.build()?, &read_series(&stdin()?)?, &grid)?;
            println!("{}", pretty(&rep));
            return Ok(rep.pass);
        }
        Command::Neighborhood {
            class,
            eta,
            eta_star,
            theorem,
            seed,
            samples,
        } => {
            let cls = class.build()?;
            let text = stdin()?;
            let rep = if theorem == "41" {
                let sampling = PerturbationSampling::default();
                neighborhood::theorem41_check(&cls, &read_series(&text)?, eta, sampling, &DiskGrid::default_grid(), seed)?
                    .report
            } else {
                let f = NegSeries::from_json(&text)?;
                let spec = NeighborhoodSpec::new(cls, eta)?;
                let mut t = MarginTracker::new();
                for i in 0..samples as u64 {
                    let mut rng = harness::rng::stream(seed, "neighborhood-cli", i);
                    let g = neighborhood::random_neg_neighbor(&cls, &f, eta, &mut rng)?;
                    if !spec.contains_negative(&f, &g)? {
                        return Err(Error::Parameter("sampled neighbor left the neighborhood".into()));
                    }
                    let v = classes::coeff_sum(&cls, &g)?;
                    t.record(v.margin, || Witness {
                        label: format!("neighbor {}", g.to_json()),
                        point: None,
                        value: v.lhs,
                    });
                }
                if let Some(star) = eta_star {
                    let (wf, wg) = neighborhood::witness_pair(&cls, star)?;
                    let v = classes::coeff_sum(&cls, &wg)?;
                    t.note(format!(
                        "witness pair at eta* = {star}: f = {}, g = {}, g margin {:e}, distance {}",
                        wf.to_json(),
                        wg.to_json(),
                        v.margin,
                        neighborhood::distance_negative(&cls, &wf, &wg)?
                    ));
                }
                t.note(format!("threshold radius {}", neighborhood::eta_threshold(&cls)));
                t.finish("neighborhood-radius", classes::MEMBERSHIP_TOL, false)
            };
            println!("{}", pretty(&rep));
            return Ok(rep.pass);
        }
        Command::PartialSums { class, m, extremal } => {
            let cls = class.build()?;
            let f = if extremal {
                partial_sums::extremal_partial(&cls, m)?
            } else {
                NegSeries::from_json(&stdin()?)?
            };
            let rep = partial_sums::ratio_report(&cls, &f, m, &DiskGrid::default_grid())?;
            println!("{}", pretty(&rep));
            return Ok(rep.report.pass);
        }
        Command::Closure { class, kind, sigmas } => {
            let base = class.build()?;
            let clss: Vec<ClassParams> = sigmas.iter().map(|&s| base.with_sigma(s)).collect();
            let kind = match kind {
                Kind::Product => ClosureKind::Product,
                Kind::Squares => ClosureKind::Squares,
            };
            println!("{}", pretty(&closure_sigma(kind, &clss)?));
        }
        Command::Fractional {
            class,
            nu,
            vartheta,
            mode,
            r,
        } => match mode {
            FracMode::DerivativeOfBernardi | FracMode::BernardiOfDerivative => {
                let order = match mode {
                    FracMode::DerivativeOfBernardi => ComposeOrder::DerivativeOfBernardi,
                    _ => ComposeOrder::BernardiOfDerivative,
                };
                let f = NegSeries::from_json(&stdin()?)?;
                println!("{}", fractional::lemma71_compose(&f, nu, vartheta, order)?.to_json());
            }
            FracMode::Bounds71 | FracMode::Bounds72 => {
                let cls = class.build()?;
                let (lower, upper) = match mode {
                    FracMode::Bounds71 => fractional::bounds_71(&cls, nu, vartheta, r)?,
                    _ => fractional::bounds_72(&cls, nu, vartheta, r)?,
                };
                println!("{}", pretty(&json!({ "lower": lower, "upper": upper })));
            }
            FracMode::Oracle => {
                let f = read_series(&stdin()?)?;
                let quad = quadrature::fractional_integral(&f.to_polynomial(), nu, r)?;
                let closed = fractional::frac_apply(&GeneralizedSeries::from_series(&f)?, &FracParams::integral(nu, vartheta)?)?
                    .evaluate_real(r)?;
                println!(
                    "{}",
                    pretty(&json!({ "quadrature": quad, "closed_form": closed, "difference": (quad - closed).abs() }))
                );
            }
        },
        Command::Verify {
            theorems,
            seed,
            config,
            json,
            csv,
        } => {
            let mut cfg = match &config {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))?;
                    CampaignConfig::parse(&text)?
                }
                None => CampaignConfig::default(),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let ids = theorems.unwrap_or_else(harness::all_checks);
            log::info!("running {} checks with seed {}", ids.len(), cfg.seed);
            let reports = harness::run_campaign(&cfg, &ids)?;
            for r in &reports {
                println!("{r}");
            }
            if let Some(path) = &json {
                write(path, &harness::reports_to_json(&reports))?;
            }
            if let Some(path) = &csv {
                write(path, &harness::reports_to_csv(&reports))?;
            }
            return Ok(reports.iter().all(|r| r.pass));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
