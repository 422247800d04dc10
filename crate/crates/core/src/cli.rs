//! Batch driver behind the `powerfact` binary.
//!
//! Every subcommand writes `<name>.json` and a CSV mirror into the output
//! directory. Exit status: 0 when every clause passes, 2 when some clause
//! fails (the certificate is still written), 1 on configuration or runtime
//! errors.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::engine::{run_factorization, AlphaLaw, FactorizationConfig};
use crate::error::{Error, Result};
use crate::instances::{ApproximateIdentity, ConstantNet, Envelope, Grid, GridFunction, GridNet, LineNet, Matrix, NetKind, Vector};
use crate::representations::{GridRep, LineRep, MatrixRep, ProbeSet, Representation};
use crate::scalar::{ArithmeticMode, Rational, Scalar};
use crate::verification::{
    certify_engine, certify_worked, cone_witnesses, deficient_net_report, digest_of, lift_demo, unbounded_xn_witness,
    worked_probe, FactorizationCertificate, WITNESS_SEED,
};
use crate::worked::{WorkedExample, WorkedParams};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    #[default]
    Engine,
    WorkedExample,
    Witnesses,
    Lifted,
}

/// Which module, algebra and net the engine runs on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InstanceSpec {
    /// `c₀(ℤ)` acting on itself.
    Line { net: NetKind },
    /// `n × n` matrices on vectors with the constant identity net.
    IdentityMatrix { dim: usize },
    /// Sampled functions on `[-T, T]`; approximate mode only.
    Grid { half_width: f64, step: f64, net: NetKind },
}

impl Default for InstanceSpec {
    fn default() -> Self {
        InstanceSpec::Line { net: NetKind::Plateau }
    }
}

/// Probe elements: truncations of the default envelope, or explicit JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProbeSpec {
    /// `f₀` restricted to `|t| ≤ radius`, one element per radius; for the
    /// matrix instance, `radius` picks the vector `(radius, −1, 1/radius, …)`.
    Envelope { radii: Vec<i64> },
    /// `{"elements": […], "claims": {…}}` in the instance's own encoding.
    Inline { probe: Value },
}

impl Default for ProbeSpec {
    fn default() -> Self {
        ProbeSpec::Envelope { radii: vec![40, 10, 3] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: u32,
    #[serde(default)]
    pub pipeline: Pipeline,
    #[serde(default = "default_mode")]
    pub mode: ArithmeticMode,
    #[serde(default)]
    pub instance: InstanceSpec,
    #[serde(default)]
    pub probe: ProbeSpec,
    #[serde(default)]
    pub factorization: FactorizationConfig<Rational>,
    #[serde(default)]
    pub worked: WorkedParams,
    /// Envelope for the worked example; the default envelope when absent.
    #[serde(default)]
    pub envelope: Option<Envelope<Rational>>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn default_mode() -> ArithmeticMode {
    ArithmeticMode::Exact
}

fn default_seed() -> u64 {
    WITNESS_SEED
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            schema: SCHEMA_VERSION,
            pipeline: Pipeline::default(),
            mode: default_mode(),
            instance: InstanceSpec::default(),
            probe: ProbeSpec::default(),
            factorization: FactorizationConfig::default(),
            worked: WorkedParams::default(),
            envelope: None,
            seed: default_seed(),
            out: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        if cfg.schema != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema {}, expected {SCHEMA_VERSION}",
                cfg.schema
            )));
        }
        Ok(cfg)
    }

    pub fn digest(&self) -> Result<String> {
        digest_of(self)
    }
}

#[derive(Debug, Parser)]
#[command(name = "powerfact", version, about = "Constructive power factorization with clause certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON experiment config (`"schema": 1`).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// `exact` (rationals) or `approx` (f64).
    #[arg(long, global = true)]
    mode: Option<ArithmeticMode>,
    /// Output directory, `powerfact-out` by default.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Debug, Args)]
struct Overrides {
    /// Convex weight r, e.g. `1/4`.
    #[arg(long, global = true)]
    r: Option<Rational>,
    /// Approximation target ε.
    #[arg(long, global = true)]
    epsilon: Option<Rational>,
    /// Growth floor δ.
    #[arg(long, global = true)]
    delta: Option<Rational>,
    /// Smallest admissible power index.
    #[arg(long, global = true)]
    n0: Option<usize>,
    /// Number of chain steps K.
    #[arg(long, global = true)]
    steps: Option<usize>,
    /// Largest net index searched per step.
    #[arg(long, global = true)]
    cap: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the generic engine and certify the result.
    Factorize,
    /// The closed-form construction on the discrete line.
    WorkedExample {
        /// Use the default envelope even if the config supplies one.
        #[arg(long)]
        default_envelope: bool,
    },
    /// Cone, unbounded-approximant and deficient-net reports.
    Witnesses,
    /// Factorize lifted families over a finite index set and a sequence.
    Lift,
    /// Re-certify an artifact written by `factorize` or `worked-example`.
    Verify { artifact: PathBuf },
}

/// Outcome of one subcommand before it is written to disk.
struct Artifact {
    name: String,
    json: Value,
    csv: String,
    pass: bool,
}

/// Entry point for the binary.
pub fn main() -> i32 {
    run_cli(std::env::args_os())
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let msg = e.to_string();
            eprintln!("error: {}", msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: "));
            return 1;
        }
    };
    match execute(cli) {
        Ok(pass) => {
            if pass {
                0
            } else {
                2
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            1
        }
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::from_json_str(&fs::read_to_string(path)?)?,
        None => ExperimentConfig::default(),
    };
    if let Some(mode) = cli.mode {
        cfg.mode = mode;
    }
    if let Some(out) = &cli.out {
        cfg.out = Some(out.clone());
    }
    let o = &cli.overrides;
    if let Some(r) = &o.r {
        cfg.factorization.r = r.clone();
        cfg.worked.r = r.clone();
    }
    if let Some(e) = &o.epsilon {
        cfg.factorization.epsilon = e.clone();
        cfg.worked.epsilon = e.clone();
    }
    if let Some(d) = &o.delta {
        cfg.factorization.delta = d.clone();
        cfg.worked.delta = d.clone();
    }
    if let Some(n0) = o.n0 {
        cfg.factorization.n0 = n0;
        cfg.worked.n0 = n0;
    }
    if let Some(k) = o.steps {
        cfg.factorization.steps = k;
    }
    if let Some(cap) = o.cap {
        cfg.factorization.index_cap = cap;
    }
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<bool> {
    let mut cfg = load_config(&cli)?;
    // artifacts must not depend on where they are written
    let out = cfg.out.take().unwrap_or_else(|| PathBuf::from("powerfact-out"));
    let artifact = match &cli.command {
        Command::Factorize => {
            cfg.pipeline = Pipeline::Engine;
            factorize(&cfg)?
        }
        Command::WorkedExample { default_envelope } => {
            cfg.pipeline = Pipeline::WorkedExample;
            if *default_envelope {
                cfg.envelope = None;
            }
            worked_example(&cfg)?
        }
        Command::Witnesses => {
            cfg.pipeline = Pipeline::Witnesses;
            witnesses(&cfg)?
        }
        Command::Lift => {
            cfg.pipeline = Pipeline::Lifted;
            lift(&cfg)?
        }
        Command::Verify { artifact } => verify(artifact)?,
    };
    write_artifact(&out, &artifact)?;
    Ok(artifact.pass)
}

fn write_artifact(dir: &Path, artifact: &Artifact) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut text = serde_json::to_string_pretty(&artifact.json)?;
    text.push('\n');
    fs::write(dir.join(format!("{}.json", artifact.name)), text)?;
    fs::write(dir.join(format!("{}.csv", artifact.name)), &artifact.csv)?;
    Ok(())
}

fn envelope_of(cfg: &ExperimentConfig) -> Envelope<Rational> {
    cfg.envelope.clone().unwrap_or_else(Envelope::default_envelope)
}

fn approx_config(c: &FactorizationConfig<Rational>) -> FactorizationConfig<f64> {
    let f = |x: &Rational| x.to_f64();
    FactorizationConfig {
        r: f(&c.r),
        epsilon: f(&c.epsilon),
        delta: f(&c.delta),
        n0: c.n0,
        alpha: match &c.alpha {
            AlphaLaw::Affine { c } => AlphaLaw::Affine { c: f(c) },
            AlphaLaw::Power { c, p } => AlphaLaw::Power { c: f(c), p: *p },
        },
        steps: c.steps,
        index_cap: c.index_cap,
        tau: f(&c.tau),
        path: c.path,
        max_power: c.max_power,
    }
}

/// Exact for values whose numerator and denominator fit in `i64`.
fn from_rational<S: Scalar>(v: &Rational) -> S {
    match (v.numer().to_i64(), v.denom().to_i64()) {
        (Some(n), Some(d)) => S::ratio(n, d),
        _ => S::from_f64(v.to_f64()),
    }
}

fn line_probe<S: Scalar>(spec: &ProbeSpec) -> Result<ProbeSet<crate::instances::C0Line<S>>> {
    match spec {
        ProbeSpec::Envelope { radii } => {
            let f0 = Envelope::<Rational>::default_envelope().map_scalar(from_rational::<S>);
            ProbeSet::bounded(radii.iter().map(|&r| f0.truncate(r)).collect())
        }
        ProbeSpec::Inline { probe } => ProbeSet::from_json(probe.clone()),
    }
}

fn matrix_probe<S: Scalar>(spec: &ProbeSpec, dim: usize) -> Result<ProbeSet<Vector<S>>> {
    match spec {
        ProbeSpec::Envelope { radii } => ProbeSet::bounded(
            radii
                .iter()
                .map(|&r| {
                    let r = r.max(1);
                    Vector::new((0..dim).map(|i| match i % 3 {
                        0 => S::from_i64(r),
                        1 => -S::one(),
                        _ => S::ratio(1, r),
                    }).collect())
                })
                .collect(),
        ),
        ProbeSpec::Inline { probe } => ProbeSet::from_json(probe.clone()),
    }
}

fn grid_probe(spec: &ProbeSpec, grid: Grid) -> Result<ProbeSet<GridFunction>> {
    let f0 = |t: f64| if t.abs() <= 2.0 { 2.0 } else { 2f64.powf(-t.abs()) };
    match spec {
        ProbeSpec::Envelope { radii } => ProbeSet::bounded(
            radii
                .iter()
                .map(|&r| {
                    let r = r as f64;
                    GridFunction::tabulate(grid, |t| if t.abs() <= r { f0(t) } else { 0.0 }, 0.0)
                })
                .collect(),
        ),
        ProbeSpec::Inline { probe } => ProbeSet::from_json(probe.clone()),
    }
}

fn engine_artifact<R, N>(
    cfg: &ExperimentConfig,
    rep: &R,
    net: &N,
    probe: &ProbeSet<R::Module>,
    fcfg: &FactorizationConfig<R::Scalar>,
) -> Result<Artifact>
where
    R: Representation,
    R::Module: Serialize,
    R::Algebra: Serialize + DeserializeOwned,
    R::Super: Serialize + DeserializeOwned,
    N: ApproximateIdentity<Element = R::Algebra>,
{
    let digest = cfg.digest()?;
    let (certificate, result) = match run_factorization(rep, net, probe, fcfg) {
        Ok(result) => (certify_engine("factorize", rep, net, probe, &result)?, Some(result)),
        Err(e @ Error::Exhausted { .. }) => {
            let cert = FactorizationCertificate::from_exhausted("factorize", cfg.mode, digest.clone(), &e)
                .expect("exhausted error");
            (cert, None)
        }
        Err(e) => return Err(e),
    };
    let pass = certificate.all_pass();
    let json = json!({
        "schema": SCHEMA_VERSION,
        "command": "factorize",
        "mode": cfg.mode,
        "config_digest": digest,
        "config": cfg,
        "certificate": certificate,
        "result": result,
    });
    Ok(Artifact {
        name: "factorize".into(),
        csv: certificate.to_csv()?,
        json,
        pass,
    })
}

fn factorize(cfg: &ExperimentConfig) -> Result<Artifact> {
    match (&cfg.instance, cfg.mode) {
        (InstanceSpec::Line { net }, ArithmeticMode::Exact) => {
            let probe = line_probe::<Rational>(&cfg.probe)?;
            engine_artifact(cfg, &LineRep::new(), &LineNet::new(*net), &probe, &cfg.factorization)
        }
        (InstanceSpec::Line { net }, ArithmeticMode::Approx) => {
            let probe = line_probe::<f64>(&cfg.probe)?;
            engine_artifact(cfg, &LineRep::new(), &LineNet::new(*net), &probe, &approx_config(&cfg.factorization))
        }
        (InstanceSpec::IdentityMatrix { dim }, ArithmeticMode::Exact) => {
            let probe = matrix_probe::<Rational>(&cfg.probe, *dim)?;
            engine_artifact(cfg, &MatrixRep::new(*dim), &identity_net::<Rational>(*dim), &probe, &cfg.factorization)
        }
        (InstanceSpec::IdentityMatrix { dim }, ArithmeticMode::Approx) => {
            let probe = matrix_probe::<f64>(&cfg.probe, *dim)?;
            engine_artifact(cfg, &MatrixRep::new(*dim), &identity_net::<f64>(*dim), &probe, &approx_config(&cfg.factorization))
        }
        (InstanceSpec::Grid { half_width, step, net }, ArithmeticMode::Approx) => {
            let grid = Grid::new(*half_width, *step)?;
            let probe = grid_probe(&cfg.probe, grid)?;
            engine_artifact(cfg, &GridRep { grid }, &GridNet::new(*net, grid), &probe, &approx_config(&cfg.factorization))
        }
        (InstanceSpec::Grid { .. }, ArithmeticMode::Exact) => {
            Err(Error::Config("the grid instance samples real functions and needs --mode approx".into()))
        }
    }
}

fn identity_net<S: Scalar>(dim: usize) -> ConstantNet<Matrix<S>> {
    ConstantNet {
        element: Matrix::identity(dim),
        bound: S::one(),
        commutative: true,
        positive: true,
        largest: true,
    }
}

fn worked_example(cfg: &ExperimentConfig) -> Result<Artifact> {
    if cfg.mode != ArithmeticMode::Exact {
        return Err(Error::Config("the worked example runs in exact mode only".into()));
    }
    let ex = WorkedExample::build(envelope_of(cfg), cfg.worked.clone())?;
    let probe = worked_probe(&ex);
    let certificate = certify_worked(&ex, &probe)?;
    let s = &ex.schedules;
    let json = json!({
        "schema": SCHEMA_VERSION,
        "command": "worked-example",
        "mode": cfg.mode,
        "config_digest": cfg.digest()?,
        "config": cfg,
        "table": {
            "nu": ex.nu(),
            "n1": s.n1,
            "n2": s.n2,
            "n3": s.n3,
            "n_prime": s.n_prime,
            "k_constant": s.k_constant,
            "window": ex.window(),
        },
        "certificate": certificate,
    });
    Ok(Artifact {
        name: "worked-example".into(),
        csv: certificate.to_csv()?,
        pass: certificate.all_pass(),
        json,
    })
}

fn witnesses(cfg: &ExperimentConfig) -> Result<Artifact> {
    let cones = cone_witnesses(cfg.seed, 20)?;
    let ex = WorkedExample::build(envelope_of(cfg), cfg.worked.clone())?;
    let unbounded = unbounded_xn_witness(&ex, 2)?;
    let deficient = deficient_net_report(&[1, 10, 100], &[2, 3, 5, 10], &Rational::new(1, 2), 50)?;
    let deficient_ok = deficient.rows.iter().all(|r| r.residual == r.expected)
        && deficient.exhausted.is_some()
        && deficient.plateau_residual == Rational::zero();
    let checks = json!({
        "delta_inverse_outside_cone": !cones.delta.inverse_in_cone && cones.delta.product_is_unit,
        "scalar_inverse_in_cone": cones.scalar.inverse_in_cone,
        "random_inverses_positive": cones.all_random_positive(),
        "squares_positive": cones.squares_positive,
        "ratios_strictly_increasing": unbounded.strictly_increasing,
        "ratios_match_growth": unbounded.matches_expected,
        "deficient_residuals": deficient_ok,
    });
    let pass = checks.as_object().is_some_and(|m| m.values().all(|v| v == &Value::Bool(true)));
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["n", "band", "site", "ratio", "expected"]).map_err(io)?;
    for row in &unbounded.rows {
        w.write_record([row.n.to_string(), row.band.to_string(), row.site.to_string(), row.ratio.to_string(), row.expected.to_string()])
            .map_err(io)?;
    }
    let csv = String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?).map_err(|e| Error::Io(e.to_string()))?;
    let json = json!({
        "schema": SCHEMA_VERSION,
        "command": "witnesses",
        "mode": ArithmeticMode::Exact,
        "config_digest": cfg.digest()?,
        "checks": checks,
        "cones": cones,
        "unbounded": unbounded,
        "deficient": deficient,
    });
    Ok(Artifact {
        name: "witnesses".into(),
        json,
        csv,
        pass,
    })
}

fn lift(cfg: &ExperimentConfig) -> Result<Artifact> {
    if cfg.mode != ArithmeticMode::Exact {
        return Err(Error::Config("the lift pipeline runs in exact mode only".into()));
    }
    let report = lift_demo(&cfg.factorization)?;
    let mut csv = String::new();
    for (case, cert) in [("finite", &report.finite.certificate), ("sequence", &report.sequence.certificate)] {
        for (i, line) in cert.to_csv()?.lines().enumerate() {
            let prefix = if i == 0 { "case" } else { case };
            if i == 0 && !csv.is_empty() {
                continue;
            }
            csv.push_str(&format!("{prefix},{line}\n"));
        }
    }
    let json = json!({
        "schema": SCHEMA_VERSION,
        "command": "lift",
        "mode": cfg.mode,
        "config_digest": cfg.digest()?,
        "config": cfg,
        "report": report,
    });
    Ok(Artifact {
        name: "lift".into(),
        pass: report.holds(),
        json,
        csv,
    })
}

fn field<T: DeserializeOwned>(doc: &Value, key: &str) -> Result<T> {
    let v = doc
        .get(key)
        .ok_or_else(|| Error::Config(format!("artifact has no `{key}` field")))?;
    Ok(serde_json::from_value(v.clone())?)
}

fn recertify<R, N>(rep: &R, net: &N, probe: &ProbeSet<R::Module>, doc: &Value) -> Result<FactorizationCertificate>
where
    R: Representation,
    R::Module: Serialize,
    R::Algebra: Serialize + DeserializeOwned,
    R::Super: Serialize + DeserializeOwned,
    N: ApproximateIdentity<Element = R::Algebra>,
{
    let result: crate::engine::ResultOf<R> = field(doc, "result")?;
    certify_engine("factorize", rep, net, probe, &result)
}

fn recertify_engine(cfg: &ExperimentConfig, doc: &Value) -> Result<FactorizationCertificate> {
    match (&cfg.instance, cfg.mode) {
        (InstanceSpec::Line { net }, ArithmeticMode::Exact) => {
            recertify(&LineRep::<Rational>::new(), &LineNet::new(*net), &line_probe(&cfg.probe)?, doc)
        }
        (InstanceSpec::Line { net }, ArithmeticMode::Approx) => {
            recertify(&LineRep::<f64>::new(), &LineNet::new(*net), &line_probe(&cfg.probe)?, doc)
        }
        (InstanceSpec::IdentityMatrix { dim }, ArithmeticMode::Exact) => recertify(
            &MatrixRep::<Rational>::new(*dim),
            &identity_net(*dim),
            &matrix_probe(&cfg.probe, *dim)?,
            doc,
        ),
        (InstanceSpec::IdentityMatrix { dim }, ArithmeticMode::Approx) => {
            recertify(&MatrixRep::<f64>::new(*dim), &identity_net(*dim), &matrix_probe(&cfg.probe, *dim)?, doc)
        }
        (InstanceSpec::Grid { half_width, step, net }, _) => {
            let grid = Grid::new(*half_width, *step)?;
            recertify(&GridRep { grid }, &GridNet::new(*net, grid), &grid_probe(&cfg.probe, grid)?, doc)
        }
    }
}

fn verify(path: &Path) -> Result<Artifact> {
    let doc: Value = serde_json::from_str(&fs::read_to_string(path)?)?;
    let command: String = field(&doc, "command")?;
    let cfg: ExperimentConfig = field(&doc, "config")?;
    let stored: FactorizationCertificate = field(&doc, "certificate")?;
    let fresh = match command.as_str() {
        "factorize" if stored.exhausted.is_some() => stored.clone(),
        "factorize" => recertify_engine(&cfg, &doc)?,
        "worked-example" => {
            let ex = WorkedExample::build(envelope_of(&cfg), cfg.worked.clone())?;
            certify_worked(&ex, &worked_probe(&ex))?
        }
        other => return Err(Error::Config(format!("cannot verify a `{other}` artifact"))),
    };
    let matches = fresh == stored;
    let json = json!({
        "schema": SCHEMA_VERSION,
        "command": "verify",
        "mode": cfg.mode,
        "config_digest": cfg.digest()?,
        "verified": command,
        "matches_stored": matches,
        "certificate": fresh,
    });
    Ok(Artifact {
        name: "verify".into(),
        csv: fresh.to_csv()?,
        pass: matches && fresh.all_pass(),
        json,
    })
}
