//! Argument parsing and dispatch for the `qcost` binary.
//!
//! Scalars print with 6 significant digits (plus a JSON line under
//! `--json`); tables print as CSV, or as one JSON object under `--json`.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use qcost::capacity::{self, CostChannel, OptConfig};
use qcost::gaussian::{self, format_sig, Figure, GaussianChannel, Task};
use qcost::hyptest;
use qcost::ppm::{self, PpmParams};
use qcost::qcore::io::ProblemFile;
use qcost::qcore::{CostObservable, DensityMatrix, PureState, QuantumChannel, DEFAULT_DIM_CAP};
use qcost::{Error, Exec, ExtendedReal};

/// Each library operation and the argument list that reaches it. The first
/// argument is the subcommand; finite-dimensional operations also need
/// `--input`.
pub const DISPATCH: &[(&str, &[&str])] = &[
    ("holevoCapacityCost", &["capacity", "--beta", "0.2"]),
    ("classicalPerUnitCost", &["per-unit-cost"]),
    ("eaPerUnitCost", &["ea"]),
    ("privatePerUnitCost", &["private"]),
    ("quantumCapacityCost", &["quantum", "--beta", "0.2"]),
    (
        "blocklengthConstrainedPerUnitCost",
        &["blocklength", "--alpha", "2"],
    ),
    (
        "binaryChannelPerUnitCost",
        &["binary", "--eps", "0.1", "--delta", "0.01"],
    ),
    ("gFunc", &["gaussian", "--g-func", "10"]),
    (
        "capacityCost",
        &[
            "gaussian", "--kind", "thermal", "--eta", "0.7", "--nth", "10", "--nbar", "1",
        ],
    ),
    (
        "perUnitCost",
        &[
            "gaussian",
            "--kind",
            "thermal",
            "--eta",
            "0.7",
            "--nth",
            "10",
            "--per-unit-cost",
        ],
    ),
    (
        "smallNoiseExpansion",
        &[
            "gaussian",
            "--eta",
            "0.7",
            "--nth",
            "0.001",
            "--small-noise",
        ],
    ),
    (
        "compositeCostPerUnitCost",
        &["gaussian", "--eta", "0.5", "--composite"],
    ),
    (
        "twoWayAssistedBounds",
        &["gaussian", "--kappa", "3", "--assisted-bounds"],
    ),
    ("figureData", &["figure", "--which", "ea-divergence"]),
    ("optimalTypeII", &["stein", "--n", "3"]),
    ("hypothesisTestingRelEntropy", &["stein", "--dh"]),
    ("steinDiagnostic", &["stein", "--nmax", "4"]),
    ("classicalPPM", &["ppm", "--n", "4", "--m", "2,4"]),
    (
        "quantumRejectionRate",
        &["ppm", "--scheme", "rejection", "--n", "8", "--eps", "0.07"],
    ),
    ("eaPPMRates", &["ppm", "--scheme", "ea"]),
    ("privatePPMCheck", &["ppm-private", "--l", "4"]),
    ("privateRatePerUnitCost", &["ppm-private", "--rate"]),
];

/// Names of all subcommands known to the parser.
pub fn subcommand_names() -> Vec<String> {
    Cli::command()
        .get_subcommands()
        .map(|c| c.get_name().to_string())
        .collect()
}

#[derive(Parser, Debug)]
#[command(
    name = "qcost",
    version,
    about = "Quantum channel capacities per unit cost"
)]
struct Cli {
    /// JSON problem file (channel, cost, zero_cost_state, pulse, input_state, rho, sigma).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long = "dim-cap", global = true, default_value_t = DEFAULT_DIM_CAP)]
    dim_cap: usize,
    #[arg(long, global = true, default_value_t = 32)]
    restarts: usize,
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cost-constrained Holevo capacity χ(β), or its β → 0 slope.
    Capacity {
        /// One budget prints a scalar; several print a CSV curve.
        #[arg(
            long,
            value_delimiter = ',',
            required_unless_present = "zero_cost_limit"
        )]
        beta: Vec<f64>,
        #[arg(long, conflicts_with = "beta")]
        zero_cost_limit: bool,
    },
    /// Classical capacity per unit cost.
    PerUnitCost,
    /// Entanglement-assisted capacity per unit cost.
    Ea,
    /// Private (and, for degradable channels, quantum) capacity per unit cost.
    Private,
    /// Cost-constrained coherent information.
    Quantum {
        #[arg(long)]
        beta: f64,
    },
    /// Bosonic Gaussian closed forms.
    #[command(group(ArgGroup::new("mode").required(true).args([
        "nbar", "per_unit_cost", "g_func", "small_noise", "composite", "assisted_bounds"
    ])))]
    Gaussian {
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        nth: Option<f64>,
        #[arg(long)]
        noise: Option<f64>,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long, value_enum, default_value_t = TaskArg::Classical)]
        task: TaskArg,
        /// Capacity at this mean photon number.
        #[arg(long)]
        nbar: Option<f64>,
        #[arg(long)]
        per_unit_cost: bool,
        #[arg(long)]
        g_func: Option<f64>,
        #[arg(long)]
        small_noise: bool,
        #[arg(long)]
        composite: bool,
        #[arg(long)]
        assisted_bounds: bool,
    },
    /// Rate-per-photon curves as CSV.
    Figure {
        #[arg(long, value_enum)]
        which: FigureArg,
        /// `lo:hi:count`, log-spaced; defaults to 50 points on [1e-6, 10].
        #[arg(long)]
        grid: Option<String>,
    },
    /// Optimal tests between `rho` and `sigma`.
    #[command(group(ArgGroup::new("mode").required(true).args(["n", "dh", "nmax"])))]
    Stein {
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Optimal type-II error at this blocklength.
        #[arg(long)]
        n: Option<usize>,
        /// Hypothesis-testing relative entropy.
        #[arg(long)]
        dh: bool,
        /// Stein exponents for N = 1..=nmax.
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Pulse-position modulation.
    Ppm {
        #[arg(long, value_enum, default_value_t = Scheme::Classical)]
        scheme: Scheme,
        /// Slot lengths; the rejection scheme uses the first.
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        /// Message counts; omitted means the largest feasible count per N.
        #[arg(long, value_delimiter = ',')]
        m: Vec<f64>,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Defaults to `--eps`.
        #[arg(long)]
        eps_prime: Option<f64>,
    },
    /// Private PPM: convex-split check, or the rate per unit cost.
    PpmPrivate {
        #[arg(long, required_unless_present = "rate")]
        l: Option<usize>,
        #[arg(long, default_value_t = 0.7)]
        delta: f64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, conflicts_with = "l")]
        rate: bool,
    },
    /// Blocklength-constrained capacity per unit cost.
    Blocklength {
        #[arg(long)]
        alpha: f64,
    },
    /// Binary toy channel in closed form.
    Binary {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Thermal,
    AdditiveNoise,
    Amplifier,
    ContravariantAmplifier,
    PureLoss,
    IdealAmplifier,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TaskArg {
    Classical,
    Ea,
    PrivateQuantum,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FigureArg {
    EaDivergence,
    PrivateQuantum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Scheme {
    Classical,
    Rejection,
    Ea,
}

#[derive(Debug)]
enum Failure {
    Invalid(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

#[derive(Clone, Debug)]
enum Cell {
    Num(f64),
    Int(usize),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format_sig(*v, 12),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => num(*v),
            Cell::Int(i) => json!(i),
            Cell::Bool(b) => json!(b),
            Cell::Empty => Value::Null,
        }
    }
}

enum Emit {
    Scalar {
        value: f64,
        details: Map<String, Value>,
    },
    Table {
        header: Vec<String>,
        rows: Vec<Vec<Cell>>,
    },
}

impl Emit {
    fn scalar(value: ExtendedReal, details: Value) -> Self {
        let details = match details {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        Emit::Scalar {
            value: value.to_f64(),
            details,
        }
    }

    fn render(&self, as_json: bool) -> String {
        match self {
            Emit::Scalar { value, details } => {
                let mut out = format!("{}\n", format_sig(*value, 6));
                if as_json {
                    let mut obj = Map::new();
                    obj.insert("value".into(), num(*value));
                    obj.extend(details.clone());
                    out.push_str(&Value::Object(obj).to_string());
                    out.push('\n');
                }
                out
            }
            Emit::Table { header, rows } if as_json => {
                let rows: Vec<Value> = rows
                    .iter()
                    .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
                    .collect();
                format!("{}\n", json!({ "header": header, "rows": rows }))
            }
            Emit::Table { header, rows } => {
                let mut out = header.join(",");
                out.push('\n');
                for r in rows {
                    out.push_str(&r.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
                    out.push('\n');
                }
                out
            }
        }
    }
}

/// Non-finite values become the tokens `inf`, `-inf`, `nan`.
fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(format_sig(v, 6))
    }
}

fn ext(v: ExtendedReal) -> Value {
    num(v.to_f64())
}

/// Parses `args` (without the program name), runs the command and returns
/// the exit code: 0 on success, 2 on invalid input, 1 on I/O failure.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv =
        std::iter::once(std::ffi::OsString::from("qcost")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(emit) => {
            let text = emit.render(cli.json);
            let written = match &cli.output {
                Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
                None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => 0,
                Err(msg) => {
                    let _ = writeln!(stderr, "error[io]: {msg}");
                    1
                }
            }
        }
        Err(Failure::Invalid(e)) => {
            let _ = writeln!(stderr, "error[{}]: {e}", e.check_name());
            2
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(stderr, "error[io]: {msg}");
            1
        }
    }
}

/// Applies `QCOST_THREADS` to the global worker pool.
pub fn configure_threads() -> std::result::Result<(), String> {
    let Ok(raw) = std::env::var("QCOST_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("QCOST_THREADS={raw} is not a positive integer"))?;
    if n == 0 {
        return Err("QCOST_THREADS must be at least 1".into());
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())?;
    Ok(())
}

struct Inputs {
    problem: ProblemFile,
}

impl Inputs {
    fn load(cli: &Cli) -> Outcome<Self> {
        let Some(path) = &cli.input else {
            return Err(Error::Parse("this subcommand needs --input".into()).into());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        Ok(Inputs {
            problem: ProblemFile::from_json(&text)?,
        })
    }

    fn need<T: Clone>(field: &Option<T>, name: &str) -> Outcome<T> {
        field
            .clone()
            .ok_or_else(|| Error::Parse(format!("input is missing `{name}`")).into())
    }

    fn channel(&self) -> Outcome<QuantumChannel> {
        Self::need(&self.problem.channel, "channel")
    }

    fn cost(&self) -> Outcome<CostObservable> {
        Self::need(&self.problem.cost, "cost")
    }

    fn baseline(&self) -> Outcome<PureState> {
        Self::need(&self.problem.zero_cost_state, "zero_cost_state")
    }

    fn pulse(&self) -> Outcome<PureState> {
        Self::need(&self.problem.pulse, "pulse")
    }

    fn cost_channel(&self) -> Outcome<CostChannel> {
        Ok(CostChannel::new(
            self.channel()?,
            self.cost()?,
            self.problem.zero_cost_state.clone(),
        )?)
    }
}

fn opt_config(cli: &Cli) -> OptConfig {
    OptConfig {
        restarts: cli.restarts,
        seed: cli.seed,
        ..OptConfig::default()
    }
}

fn opt_details(r: &capacity::OptResult) -> Value {
    json!({
        "argmax": r.argmax,
        "restarts": r.restarts,
        "converged": r.converged,
        "diagnostics": r.diagnostics,
    })
}

fn execute(cli: &Cli) -> Outcome<Emit> {
    if cli.dim_cap < 4 {
        return Err(Error::param("dim-cap", format!("{} is below 4", cli.dim_cap)).into());
    }
    if cli.restarts == 0 {
        return Err(Error::param("restarts", "must be at least 1").into());
    }
    let cfg = opt_config(cli);
    let cap = cli.dim_cap;
    match &cli.command {
        Command::Capacity {
            beta,
            zero_cost_limit,
        } => {
            let cc = Inputs::load(cli)?.cost_channel()?;
            if *zero_cost_limit {
                let z = capacity::zero_cost_limit(&cc, &cfg)?;
                let ratios: Vec<Value> =
                    z.ratios.iter().map(|&(b, r)| json!([b, num(r)])).collect();
                let details = json!({ "richardson": num(z.richardson), "ratios": ratios, "diagnostics": z.diagnostics });
                return Ok(Emit::scalar(z.value, details));
            }
            if let [b] = beta[..] {
                let r = capacity::holevo_capacity_cost(&cc, b, &cfg)?;
                return Ok(Emit::scalar(r.value, opt_details(&r)));
            }
            let curve = capacity::holevo_capacity_curve(&cc, beta, &cfg)?;
            let rows = beta
                .iter()
                .zip(&curve)
                .map(|(&b, r)| vec![Cell::Num(b), Cell::Num(r.value.to_f64())])
                .collect();
            Ok(Emit::Table {
                header: vec!["beta".into(), "chi".into()],
                rows,
            })
        }
        Command::PerUnitCost => {
            let r = capacity::classical_per_unit_cost(&Inputs::load(cli)?.cost_channel()?, &cfg)?;
            Ok(Emit::scalar(r.value, opt_details(&r)))
        }
        Command::Ea => {
            let r = capacity::ea_per_unit_cost(&Inputs::load(cli)?.cost_channel()?, &cfg)?;
            Ok(Emit::scalar(r.value, opt_details(&r)))
        }
        Command::Private => {
            let r = capacity::private_per_unit_cost(&Inputs::load(cli)?.cost_channel()?, &cfg)?;
            Ok(Emit::scalar(r.value, opt_details(&r)))
        }
        Command::Quantum { beta } => {
            let cc = Inputs::load(cli)?.cost_channel()?;
            let r = capacity::quantum_capacity_cost(&cc, *beta, &cfg)?;
            let mut details = opt_details(&r);
            details["degradability_residual"] = num(capacity::degradability_residual(&cc.channel));
            Ok(Emit::scalar(r.value, details))
        }
        Command::Gaussian { .. } => gaussian_command(&cli.command),
        Command::Figure { which, grid } => {
            let grid = match grid {
                Some(text) => parse_grid(text)?,
                None => gaussian::default_grid(),
            };
            let figure = match which {
                FigureArg::EaDivergence => Figure::EaDivergence,
                FigureArg::PrivateQuantum => Figure::PrivateQuantum,
            };
            let table = gaussian::figure_data(figure, &grid)?;
            let rows = table
                .rows
                .iter()
                .map(|r| r.iter().map(|&v| Cell::Num(v)).collect())
                .collect();
            Ok(Emit::Table {
                header: table.header,
                rows,
            })
        }
        Command::Stein { eps, n, dh, nmax } => {
            let inputs = Inputs::load(cli)?;
            let rho: DensityMatrix = Inputs::need(&inputs.problem.rho, "rho")?;
            let sigma: DensityMatrix = Inputs::need(&inputs.problem.sigma, "sigma")?;
            if let Some(n) = n {
                let t = hyptest::optimal_type_ii_capped(&rho, &sigma, *n, *eps, cap)?;
                let details = json!({ "threshold": num(t.t), "type_i": t.type_i, "mix": t.mix });
                Ok(Emit::scalar(ExtendedReal::Finite(t.type_ii), details))
            } else if *dh {
                Ok(Emit::scalar(
                    hyptest::hypothesis_testing_rel_entropy(&rho, &sigma, *eps)?,
                    json!({}),
                ))
            } else {
                let n_max = nmax.unwrap_or(1);
                let rows =
                    hyptest::stein_diagnostic(&rho, &sigma, *eps, n_max, cap, Exec::Parallel)?
                        .into_iter()
                        .map(|r| {
                            vec![
                                Cell::Int(r.n),
                                Cell::Num(r.type_ii),
                                Cell::Num(r.exponent.to_f64()),
                            ]
                        })
                        .collect();
                Ok(Emit::Table {
                    header: vec!["N".into(), "typeII".into(), "exponent".into()],
                    rows,
                })
            }
        }
        Command::Ppm {
            scheme,
            n,
            m,
            eps,
            eps_prime,
        } => ppm_command(cli, *scheme, n, m, *eps, eps_prime.unwrap_or(*eps)),
        Command::PpmPrivate {
            l,
            delta,
            eps,
            rate,
        } => {
            let inputs = Inputs::load(cli)?;
            let (channel, g, baseline) = (inputs.channel()?, inputs.cost()?, inputs.baseline()?);
            if *rate {
                let pulse = match &inputs.problem.input_state {
                    Some(rho) => rho.clone(),
                    None => inputs.pulse()?.density(),
                };
                let v = ppm::private_rate_per_unit_cost(&pulse, &baseline, &channel, &g)?;
                return Ok(Emit::scalar(v, json!({})));
            }
            let params = PpmParams {
                m: 2.0,
                n: 1,
                l: *l,
                eps: *eps,
                pulse: inputs.pulse()?,
                baseline,
            };
            let r = ppm::private_ppm_check(&params, &channel, &g, *delta, cap)?;
            let header = ["L", "Dmax", "threshold", "distance", "qualifies", "holds"];
            let row = vec![
                Cell::Int(r.l),
                Cell::Num(r.d_max.to_f64()),
                Cell::Num(r.threshold),
                Cell::Num(r.distance),
                Cell::Bool(r.qualifies),
                Cell::Bool(r.bound_holds),
            ];
            Ok(Emit::Table {
                header: header.iter().map(|s| s.to_string()).collect(),
                rows: vec![row],
            })
        }
        Command::Blocklength { alpha } => {
            let cc = Inputs::load(cli)?.cost_channel()?;
            Ok(Emit::scalar(
                capacity::blocklength_constrained_per_unit_cost(&cc, *alpha, &cfg)?,
                json!({}),
            ))
        }
        Command::Binary { eps, delta } => {
            let v = capacity::binary_channel_per_unit_cost(*eps, *delta)?;
            Ok(Emit::scalar(ExtendedReal::Finite(v), json!({})))
        }
    }
}

fn gaussian_command(command: &Command) -> Outcome<Emit> {
    let Command::Gaussian {
        kind,
        eta,
        nth,
        noise,
        kappa,
        task,
        nbar,
        per_unit_cost,
        g_func,
        small_noise,
        composite,
        assisted_bounds,
    } = command
    else {
        unreachable!("called for the gaussian subcommand only");
    };
    let need = |v: &Option<f64>, name: &'static str| {
        v.ok_or_else(|| Error::param(name, "is required here"))
    };
    if let Some(x) = g_func {
        return Ok(Emit::scalar(
            ExtendedReal::Finite(gaussian::g_func(*x)?),
            json!({}),
        ));
    }
    if *small_noise {
        let v = gaussian::small_noise_expansion(need(eta, "eta")?, need(nth, "nth")?)?;
        return Ok(Emit::scalar(ExtendedReal::Finite(v), json!({})));
    }
    if *composite {
        let o = gaussian::composite_cost_per_unit_cost(need(eta, "eta")?)?;
        return Ok(Emit::scalar(
            ExtendedReal::Finite(o.value),
            json!({ "beta": num(o.beta) }),
        ));
    }
    if *assisted_bounds {
        let b = gaussian::two_way_assisted_bounds(need(kappa, "kappa")?)?;
        return Ok(Emit::Table {
            header: vec!["lower".into(), "upper".into()],
            rows: vec![vec![Cell::Num(b.lower), Cell::Num(b.upper)]],
        });
    }
    let kind = kind.ok_or_else(|| Error::param("kind", "is required here"))?;
    let channel = match kind {
        Kind::Thermal => GaussianChannel::Thermal {
            eta: need(eta, "eta")?,
            n_th: need(nth, "nth")?,
        },
        Kind::AdditiveNoise => GaussianChannel::AdditiveNoise {
            noise: need(noise, "noise")?,
        },
        Kind::Amplifier => GaussianChannel::Amplifier {
            kappa: need(kappa, "kappa")?,
            n_th: need(nth, "nth")?,
        },
        Kind::ContravariantAmplifier => GaussianChannel::ContravariantAmplifier {
            kappa: need(kappa, "kappa")?,
            n_th: need(nth, "nth")?,
        },
        Kind::PureLoss => GaussianChannel::PureLoss {
            eta: need(eta, "eta")?,
        },
        Kind::IdealAmplifier => GaussianChannel::IdealAmplifier {
            kappa: need(kappa, "kappa")?,
        },
    };
    let task = match task {
        TaskArg::Classical => Task::Classical,
        TaskArg::Ea => Task::EntanglementAssisted,
        TaskArg::PrivateQuantum => Task::PrivateQuantum,
    };
    if *per_unit_cost {
        let r = gaussian::per_unit_cost(&channel, task)?;
        return Ok(Emit::scalar(r.value, json!({ "divergence": r.divergence })));
    }
    let nbar = need(nbar, "nbar")?;
    Ok(Emit::scalar(
        ExtendedReal::Finite(gaussian::capacity_cost(&channel, task, nbar)?),
        json!({}),
    ))
}

fn ppm_command(
    cli: &Cli,
    scheme: Scheme,
    ns: &[usize],
    ms: &[f64],
    eps: f64,
    eps_prime: f64,
) -> Outcome<Emit> {
    let inputs = Inputs::load(cli)?;
    let (channel, g, baseline) = (inputs.channel()?, inputs.cost()?, inputs.baseline()?);
    let cap = cli.dim_cap;
    if scheme == Scheme::Ea {
        let input = Inputs::need(&inputs.problem.input_state, "input_state")?;
        let r = ppm::ea_ppm_rates(&input, &baseline, &channel, &g)?;
        return Ok(Emit::scalar(
            r.rate,
            json!({ "entanglement_per_unit_cost": num(r.entanglement_per_unit_cost) }),
        ));
    }
    if ns.is_empty() {
        return Err(Error::param("N", "at least one slot length is required").into());
    }
    let pulse = inputs.pulse()?;
    if scheme == Scheme::Rejection {
        let r = ppm::quantum_rejection_rate(
            &pulse, &baseline, &channel, &g, ns[0], eps, eps_prime, cap,
        )?;
        let details = json!({
            "delta_n": r.delta_n,
            "d_h": ext(r.d_h),
            "d_max": ext(r.d_max),
            "rejected_cost": r.rejected_cost,
            "rejected_cost_formula": r.rejected_cost_formula,
            "notes": r.notes,
        });
        return match r.rate {
            Some(rate) => Ok(Emit::scalar(rate, details)),
            None => Err(Error::Indeterminate.into()),
        };
    }
    let header = ["M", "N", "L", "peBound", "cost", "rate", "feasible"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let to_row = |r: &ppm::PpmReport| {
        vec![
            Cell::Num(r.m),
            Cell::Int(r.n),
            Cell::Empty,
            Cell::Num(r.pe_bound),
            Cell::Num(r.cost_per_codeword),
            Cell::Num(r.rate_per_unit_cost.to_f64()),
            Cell::Bool(r.feasible),
        ]
    };
    let rows = if ms.is_empty() {
        ns.iter()
            .map(|&n| {
                Ok(
                    match ppm::best_feasible_ppm(&pulse, &baseline, n, eps, &channel, &g, cap)? {
                        Some(r) => to_row(&r),
                        None => {
                            let mut row = vec![Cell::Empty; 7];
                            row[1] = Cell::Int(n);
                            row[6] = Cell::Bool(false);
                            row
                        }
                    },
                )
            })
            .collect::<Outcome<Vec<_>>>()?
    } else {
        ppm::ppm_sweep(
            ms,
            ns,
            &pulse,
            &baseline,
            eps,
            &channel,
            &g,
            cap,
            Exec::Parallel,
        )?
        .iter()
        .map(|r| to_row(&r.report))
        .collect()
    };
    Ok(Emit::Table { header, rows })
}

/// `lo:hi:count`, log-spaced inclusive of both ends.
fn parse_grid(text: &str) -> Outcome<Vec<f64>> {
    let bad = || {
        Error::param(
            "grid",
            format!("`{text}` is not lo:hi:count with 0 < lo <= hi"),
        )
    };
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, count] = parts[..] else {
        return Err(bad().into());
    };
    let (lo, hi): (f64, f64) = (
        lo.parse().map_err(|_| bad())?,
        hi.parse().map_err(|_| bad())?,
    );
    let count: usize = count.parse().map_err(|_| bad())?;
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) || count == 0 {
        return Err(bad().into());
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let ratio = (hi / lo).ln();
    Ok((0..count)
        .map(|i| lo * (ratio * i as f64 / (count - 1) as f64).exp())
        .collect())
}
