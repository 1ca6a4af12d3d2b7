//! Command-line front end. [`run`] parses arguments, dispatches and returns
//! the process exit code: 0 on success, 1 on usage or domain errors, 2 when
//! a series fails to converge or an identity check fails.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::closedforms::{
    cf_bessel_complementary, cf_bessel_small, cf_besselpoly_complementary, cf_half_integer_odd_with,
    cf_half_integer_with, cf_pronic, cf_pronic_term, cf_shifted_linear, cf_shifted_linear_term, cf_squares,
    cf_squares_term, coeff_beta, coeff_eta, coeff_mu, coeff_mu_odd, pronic_decomposition, HalfIntegerForm,
    HalfIntegerOddForm, OddMuForm,
};
use crate::complementary::{complementary_zeta, higher_complementary_term, higher_complementary_zeta};
use crate::error::Error;
use crate::identities::{default_suite, run_suite, summarize, IdentityReport, SuiteEntry};
use crate::sequences::{make_sequence, SequenceSpec};
use crate::specialfn::{bessel_poly_roots, BesselZeroTable};
use crate::summation::{extended_mzv, extended_star_mzv, Composition, EvalResult, SummationConfig};

#[derive(Debug, Parser)]
#[command(name = "mzv", version, about = "Extended multiple zeta values over arbitrary sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// JSON config file; command-line flags override its fields
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output format [default: human]
    #[arg(long, value_enum, global = true)]
    pub format: Option<OutputFormat>,

    /// Relative tolerance of the summation engine [default: 1e-10]
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,

    /// Term budget per summation axis [default: 1000000]
    #[arg(long, global = true)]
    pub max_terms: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate ζ_Z(s₁,…,s_k), its star variant, or ζ̃_Z^(r)(s)
    Eval(EvalArgs),
    /// List complementary terms 1/z̃_k^(r)
    Complement(ComplementArgs),
    /// Evaluate a closed form or coefficient
    ClosedForm(ClosedFormArgs),
    /// Verify one identity, or a suite with --suite
    Verify(VerifyArgs),
    /// Bessel zeros and Bessel polynomial roots
    Bessel(BesselArgs),
    /// Run an identity suite (the default one unless --file is given)
    Suite(SuiteArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct SeqArgs {
    /// Family: natural, odd, shifted_linear, half_integer, squares, pronic,
    /// bessel_zeros, bessel_poly_roots, explicit
    #[arg(long = "seq")]
    pub family: Option<String>,
    /// Bessel order for bessel_zeros
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    /// Shift for shifted_linear
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Degree for bessel_poly_roots
    #[arg(long = "n")]
    pub degree: Option<usize>,
    /// Comma-separated real values for explicit
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub values: Option<Vec<f64>>,
    /// Truncate to the first N terms
    #[arg(long)]
    pub length: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub seq: SeqArgs,
    /// Composition, comma separated (a single s with --complementary)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub comp: Option<Vec<f64>>,
    /// Star variant (weak inequalities)
    #[arg(long)]
    pub star: bool,
    /// Evaluate the complementary zeta ζ̃^(r)(s) instead
    #[arg(long)]
    pub complementary: bool,
    /// Order r of the complementary zeta
    #[arg(long, default_value_t = 2)]
    pub order: usize,
}

#[derive(Debug, Args)]
pub struct ComplementArgs {
    #[command(flatten)]
    pub seq: SeqArgs,
    /// First index
    #[arg(long, default_value_t = 1)]
    pub from: usize,
    /// Number of terms
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// Order r
    #[arg(long, default_value_t = 2)]
    pub order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormName {
    /// ζ̃(s) for pronic numbers, exact
    Pronic,
    /// ζ̃(s) for pronic numbers from its three-series decomposition
    PronicSeries,
    /// 1/z̃_k for pronic numbers
    PronicTerm,
    /// ζ̃(s) for k + a (needs --a)
    ShiftedLinear,
    /// 1/z̃_k for k + a (needs --a, --k)
    ShiftedLinearTerm,
    /// ζ̃(s) for half integers
    HalfInteger,
    /// ζ̃(2s+1) for half integers
    HalfIntegerOdd,
    /// ζ̃(s) for squares
    Squares,
    /// 1/z̃_k for squares
    SquaresTerm,
    /// ζ_B(2s) for 2s ∈ {2, 4, 6} (needs --nu; --s is 2s)
    BesselSmall,
    /// ζ̃ over squared Bessel zeros (needs --nu)
    BesselComplementary,
    /// ζ̃ over the roots of θ_n (needs --n)
    BesselpolyComplementary,
    /// β_k^(s)
    Beta,
    /// μ_k^(s)
    Mu,
    /// μ_(2k+1)^(s) from the simplified odd-index form
    MuOdd,
    /// η^(s)
    Eta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormVariant {
    Printed,
    Unshifted,
    Corrected,
}

#[derive(Debug, Args)]
pub struct ClosedFormArgs {
    #[arg(value_enum)]
    pub form: FormName,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<i64>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long = "n")]
    pub degree: Option<usize>,
    /// Reading of a formula with a known misprint
    #[arg(long, value_enum)]
    pub variant: Option<FormVariant>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Identity id, e.g. euler, reflection, hirose
    pub identity: Option<String>,
    #[command(flatten)]
    pub seq: SeqArgs,
    /// Run a suite instead: `default` or a JSON file of entries
    #[arg(long)]
    pub suite: Option<String>,
    /// Identity parameter as key=value (repeatable)
    #[arg(short = 'p', long = "param", value_parser = parse_key_value)]
    pub params: Vec<(String, f64)>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
    /// Real part of x for the rational identities
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    /// Override the report tolerance
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BesselArgs {
    #[command(subcommand)]
    pub what: BesselCommand,
}

#[derive(Debug, Subcommand)]
pub enum BesselCommand {
    /// Positive zeros x_{ν,k} of J_ν
    Zeros {
        #[arg(long, allow_hyphen_values = true)]
        nu: f64,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Roots of the Bessel polynomial θ_n
    PolyRoots {
        #[arg(long = "n")]
        degree: usize,
    },
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    /// JSON file with an array of suite entries
    #[arg(long)]
    pub file: Option<PathBuf>,
}

fn parse_key_value(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("bad value in `{s}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

/// Contents of the optional `--config` file. Every field is optional and
/// command-line flags take precedence.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliConfig {
    /// If present, must name the subcommand being run.
    pub command: Option<String>,
    pub sequence: Option<SequenceSpec<f64>>,
    pub composition: Option<Vec<f64>>,
    #[serde(default)]
    pub parameters: BTreeMap<String, f64>,
    pub output: Option<OutputFormat>,
    pub rel_tol: Option<f64>,
    pub max_terms: Option<usize>,
}

impl CliConfig {
    pub fn load(path: &Path) -> std::result::Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }
}

/// Failure of a command, mapped onto an exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Math(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Math(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Math(Error::Divergent { .. } | Error::NoConvergence(_) | Error::Insufficient(_)) => 2,
            Failure::Math(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => f.write_str(m),
            Failure::Math(e) => write!(f, "{e}"),
        }
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Settings shared by all commands after merging the config file and flags.
struct Settings {
    file: CliConfig,
    format: OutputFormat,
    config: SummationConfig<f64>,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Eval(_) => "eval",
        Command::Complement(_) => "complement",
        Command::ClosedForm(_) => "closed-form",
        Command::Verify(_) => "verify",
        Command::Bessel(_) => "bessel",
        Command::Suite(_) => "suite",
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Results go to `out`, diagnostics to `err`.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    let file = match &cli.config {
        Some(p) => CliConfig::load(p).map_err(Failure::Usage)?,
        None => CliConfig::default(),
    };
    if let Some(c) = &file.command {
        if c != command_name(&cli.command) {
            return Err(Failure::Usage(format!(
                "config file is for `{c}`, not `{}`",
                command_name(&cli.command)
            )));
        }
    }
    let mut config = SummationConfig::<f64>::default();
    if let Some(t) = cli.rel_tol.or(file.rel_tol) {
        config.rel_tol = t;
    }
    if let Some(m) = cli.max_terms.or(file.max_terms) {
        config.max_terms_per_axis = m;
    }
    config.validate()?;
    let settings = Settings {
        format: cli.format.or(file.output).unwrap_or(OutputFormat::Human),
        file,
        config,
    };
    match &cli.command {
        Command::Eval(a) => cmd_eval(a, &settings, out),
        Command::Complement(a) => cmd_complement(a, &settings, out),
        Command::ClosedForm(a) => cmd_closed_form(a, &settings, out),
        Command::Verify(a) => cmd_verify(a, &settings, out),
        Command::Bessel(a) => cmd_bessel(a, &settings, out),
        Command::Suite(a) => {
            let entries = load_suite(a.file.as_deref())?;
            suite_reports(&entries, &settings, out)
        }
    }
}

/// Resolves the sequence from `--seq` and friends, falling back to the
/// config file. Individual parameter flags patch the file's sequence.
fn resolve_sequence(args: &SeqArgs, file: &CliConfig) -> std::result::Result<SequenceSpec<f64>, Failure> {
    let mut obj = match (&args.family, &file.sequence) {
        (Some(f), _) => {
            let mut m = serde_json::Map::new();
            m.insert("family".into(), Value::String(f.replace('-', "_")));
            m
        }
        (None, Some(spec)) => match serde_json::to_value(spec) {
            Ok(Value::Object(m)) => m,
            _ => return Err(Failure::Usage("config sequence is not an object".into())),
        },
        (None, None) => return Err(Failure::Usage("no sequence given; use --seq".into())),
    };
    let mut set = |k: &str, v: Value| {
        obj.insert(k.to_string(), v);
    };
    if let Some(nu) = args.nu {
        set("nu", nu.into());
    }
    if let Some(a) = args.a {
        set("a", a.into());
    }
    if let Some(n) = args.degree {
        set("n", n.into());
    }
    if let Some(v) = &args.values {
        set("values", v.clone().into());
    }
    if let Some(l) = args.length {
        set("length", l.into());
    }
    serde_json::from_value(Value::Object(obj)).map_err(|e| Failure::Usage(format!("bad sequence: {e}")))
}

fn composition(args: Option<&Vec<f64>>, file: &CliConfig) -> std::result::Result<Vec<f64>, Failure> {
    args.or(file.composition.as_ref())
        .cloned()
        .ok_or_else(|| Failure::Usage("no composition given; use --comp".into()))
}

/// One evaluated quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub quantity: String,
    pub sequence: SequenceSpec<f64>,
    pub value: Complex<f64>,
    pub abs_error_estimate: f64,
    pub terms_used: usize,
    pub converged: bool,
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn cmd_eval(a: &EvalArgs, st: &Settings, out: &mut dyn Write) -> CmdResult {
    let spec = resolve_sequence(&a.seq, &st.file)?;
    let comp = composition(a.comp.as_ref(), &st.file)?;
    let seq = make_sequence(spec.clone())?;
    let (quantity, res): (String, EvalResult<f64>) = if a.complementary {
        let [s] = comp[..] else {
            return Err(Failure::Usage("--complementary takes a single exponent".into()));
        };
        let res = if a.order == 2 {
            complementary_zeta(&seq, s, &st.config)?
        } else {
            higher_complementary_zeta(&seq, a.order, s, &st.config)?
        };
        let name = if a.order == 2 {
            format!("zeta_tilde({s})")
        } else {
            format!("zeta_tilde^({})({s})", a.order)
        };
        (name, res)
    } else {
        let c = Composition::new(comp.clone())?;
        if a.star {
            (format!("zeta_star({})", join(&comp)), extended_star_mzv(&seq, &c, &st.config)?)
        } else {
            (format!("zeta({})", join(&comp)), extended_mzv(&seq, &c, &st.config)?)
        }
    };
    let rec = EvalRecord {
        quantity,
        sequence: spec,
        value: res.value,
        abs_error_estimate: res.abs_error_estimate,
        terms_used: res.terms_used,
        converged: res.converged,
    };
    emit(out, st.format, &[rec])?;
    Ok(if res.converged { 0 } else { 2 })
}

/// One complementary term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub k: usize,
    pub z: Complex<f64>,
    pub inv_value: Complex<f64>,
    pub abs_error_estimate: f64,
}

fn cmd_complement(a: &ComplementArgs, st: &Settings, out: &mut dyn Write) -> CmdResult {
    let spec = resolve_sequence(&a.seq, &st.file)?;
    let seq = make_sequence(spec)?;
    if a.from == 0 {
        return Err(Failure::Usage("--from is 1-based".into()));
    }
    let last = match seq.len() {
        Some(n) => (a.from + a.count).saturating_sub(1).min(n),
        None => a.from + a.count - 1,
    };
    let mut rows = Vec::new();
    for k in a.from..=last {
        let h = higher_complementary_term(&seq, k, a.order, &st.config)?;
        rows.push(TermRecord {
            k,
            z: seq.term(k)?,
            inv_value: h.inv_value,
            abs_error_estimate: h.abs_error_estimate,
        });
    }
    emit(out, st.format, &rows)?;
    Ok(0)
}

/// A closed-form value with the parameters it was evaluated at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormRecord {
    pub form: String,
    pub parameters: BTreeMap<String, f64>,
    pub value: Complex<f64>,
    pub abs_error_estimate: f64,
    pub converged: bool,
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> std::result::Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("this form needs --{flag}")))
}

fn unsigned(s: i64) -> std::result::Result<u32, Failure> {
    u32::try_from(s).map_err(|_| Failure::Usage(format!("--s must be a nonnegative integer, got {s}")))
}

fn cmd_closed_form(a: &ClosedFormArgs, st: &Settings, out: &mut dyn Write) -> CmdResult {
    let cfg = &st.config;
    let mut params = BTreeMap::new();
    let mut note = |k: &str, v: f64| {
        params.insert(k.to_string(), v);
    };
    let s = || need(a.s, "s");
    let exact = |v: f64| EvalResult::exact(Complex::new(v, 0.0), 0.0, 0);
    let res: EvalResult<f64> = match a.form {
        FormName::Pronic => {
            let s = unsigned(s()?)?;
            note("s", f64::from(s));
            exact(cf_pronic(s)?)
        }
        FormName::PronicSeries => {
            let s = unsigned(s()?)?;
            note("s", f64::from(s));
            pronic_decomposition(s, cfg)?
        }
        FormName::PronicTerm => {
            let k = need(a.k, "k")?;
            note("k", f64::from(k));
            exact(cf_pronic_term(k as usize)?)
        }
        FormName::ShiftedLinear => {
            let (sv, av) = (unsigned(s()?)?, need(a.a, "a")?);
            note("s", f64::from(sv));
            note("a", av);
            cf_shifted_linear(av, sv, cfg)?
        }
        FormName::ShiftedLinearTerm => {
            let (k, av) = (need(a.k, "k")?, need(a.a, "a")?);
            note("k", f64::from(k));
            note("a", av);
            exact(cf_shifted_linear_term(av, k as usize)?)
        }
        FormName::HalfInteger => {
            let sv = unsigned(s()?)?;
            note("s", f64::from(sv));
            let form = match a.variant {
                None | Some(FormVariant::Printed) => HalfIntegerForm::Printed,
                Some(FormVariant::Unshifted) => HalfIntegerForm::Unshifted,
                Some(FormVariant::Corrected) => {
                    return Err(Failure::Usage("half-integer takes --variant printed or unshifted".into()))
                }
            };
            cf_half_integer_with(sv, form, cfg)?
        }
        FormName::HalfIntegerOdd => {
            let sv = unsigned(s()?)?;
            note("s", f64::from(sv));
            let form = match a.variant {
                None | Some(FormVariant::Corrected) => HalfIntegerOddForm::Corrected,
                Some(FormVariant::Printed) => HalfIntegerOddForm::Printed,
                Some(FormVariant::Unshifted) => {
                    return Err(Failure::Usage("half-integer-odd takes --variant corrected or printed".into()))
                }
            };
            exact(cf_half_integer_odd_with(sv, form)?)
        }
        FormName::Squares => {
            let sv = unsigned(s()?)?;
            note("s", f64::from(sv));
            cf_squares(sv, cfg)?
        }
        FormName::SquaresTerm => {
            let k = need(a.k, "k")?;
            note("k", f64::from(k));
            exact(cf_squares_term(k as usize)?)
        }
        FormName::BesselSmall => {
            let (two_s, nu) = (unsigned(s()?)?, need(a.nu, "nu")?);
            note("two_s", f64::from(two_s));
            note("nu", nu);
            exact(cf_bessel_small(nu, two_s)?)
        }
        FormName::BesselComplementary => {
            let (sv, nu) = (unsigned(s()?)?, need(a.nu, "nu")?);
            note("s", f64::from(sv));
            note("nu", nu);
            cf_bessel_complementary(nu, sv, cfg)?
        }
        FormName::BesselpolyComplementary => {
            let (sv, n) = (s()?, need(a.degree, "n")?);
            let sv = i32::try_from(sv).map_err(|_| Failure::Usage("--s out of range".into()))?;
            note("s", f64::from(sv));
            note("n", n as f64);
            cf_besselpoly_complementary(n, sv, cfg)?
        }
        FormName::Beta | FormName::Mu | FormName::MuOdd => {
            let (sv, k) = (unsigned(s()?)?, need(a.k, "k")?);
            note("s", f64::from(sv));
            note("k", f64::from(k));
            match a.form {
                FormName::Beta => exact(coeff_beta(k, sv)? as f64),
                FormName::Mu => exact(coeff_mu(k, sv)? as f64),
                _ => {
                    let form = match a.variant {
                        None | Some(FormVariant::Corrected) => OddMuForm::Corrected,
                        Some(FormVariant::Printed) => OddMuForm::Printed,
                        Some(FormVariant::Unshifted) => {
                            return Err(Failure::Usage("mu-odd takes --variant corrected or printed".into()))
                        }
                    };
                    exact(coeff_mu_odd(k, sv, form)?)
                }
            }
        }
        FormName::Eta => {
            let sv = unsigned(s()?)?;
            note("s", f64::from(sv));
            exact(coeff_eta(sv)?)
        }
    };
    let form = a
        .form
        .to_possible_value()
        .map_or_else(String::new, |v| v.get_name().to_string());
    let rec = FormRecord {
        form,
        parameters: params,
        value: res.value,
        abs_error_estimate: res.abs_error_estimate,
        converged: res.converged,
    };
    emit(out, st.format, &[rec])?;
    Ok(if res.converged { 0 } else { 2 })
}

fn cmd_verify(a: &VerifyArgs, st: &Settings, out: &mut dyn Write) -> CmdResult {
    if let Some(suite) = &a.suite {
        if a.identity.is_some() {
            return Err(Failure::Usage("give either an identity id or --suite".into()));
        }
        let entries = if suite == "default" {
            default_suite()
        } else {
            load_suite(Some(Path::new(suite)))?
        };
        return suite_reports(&entries, st, out);
    }
    let id = a
        .identity
        .clone()
        .ok_or_else(|| Failure::Usage("no identity given; pass an id or --suite default".into()))?;
    let mut parameters = st.file.parameters.clone();
    let shorthand = [("s", a.s), ("t", a.t), ("r", a.r), ("x_re", a.x), ("tolerance", a.tolerance)];
    for (k, v) in shorthand {
        if let Some(v) = v {
            parameters.insert(k.to_string(), v);
        }
    }
    for (k, v) in &a.params {
        parameters.insert(k.clone(), *v);
    }
    let entry = SuiteEntry {
        identity_id: id,
        sequence: resolve_sequence(&a.seq, &st.file)?,
        parameters,
    };
    suite_reports(&[entry], st, out)
}

fn load_suite(path: Option<&Path>) -> std::result::Result<Vec<SuiteEntry>, Failure> {
    let Some(path) = path else {
        return Ok(default_suite());
    };
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("bad suite file {}: {e}", path.display())))
}

fn suite_reports(entries: &[SuiteEntry], st: &Settings, out: &mut dyn Write) -> CmdResult {
    let reports = run_suite(entries, &st.config)?;
    emit(out, st.format, &reports)?;
    let summary = summarize(&reports);
    if st.format == OutputFormat::Human {
        writeln!(
            out,
            "\n{} passed, {} failed, {} skipped",
            summary.passed, summary.failed, summary.skipped
        )
        .map_err(io_failure)?;
    }
    Ok(if summary.failed == 0 { 0 } else { 2 })
}

/// One root or zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootRecord {
    pub k: usize,
    pub value: Complex<f64>,
}

fn cmd_bessel(a: &BesselArgs, st: &Settings, out: &mut dyn Write) -> CmdResult {
    let rows: Vec<RootRecord> = match a.what {
        BesselCommand::Zeros { nu, count } => BesselZeroTable::new(nu)?
            .first(count)?
            .into_iter()
            .enumerate()
            .map(|(i, x)| RootRecord {
                k: i + 1,
                value: Complex::new(x, 0.0),
            })
            .collect(),
        BesselCommand::PolyRoots { degree } => bessel_poly_roots::<f64>(degree)?
            .into_iter()
            .enumerate()
            .map(|(i, z)| RootRecord { k: i + 1, value: z })
            .collect(),
    };
    emit(out, st.format, &rows)?;
    Ok(0)
}

/// Column layout shared by the CSV and human formats.
trait Tabular {
    fn header() -> Vec<&'static str>;
    fn row(&self) -> Vec<String>;
    /// Lines printed after the human table.
    fn footnotes(&self) -> Vec<String> {
        Vec::new()
    }
}

fn num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:e}")
    }
}

fn params_text(p: &BTreeMap<String, f64>) -> String {
    p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}

impl Tabular for EvalRecord {
    fn header() -> Vec<&'static str> {
        vec!["quantity", "sequence", "value_re", "value_im", "abs_error_estimate", "terms_used", "converged"]
    }

    fn row(&self) -> Vec<String> {
        vec![
            self.quantity.clone(),
            self.sequence.to_string(),
            num(self.value.re),
            num(self.value.im),
            num(self.abs_error_estimate),
            self.terms_used.to_string(),
            self.converged.to_string(),
        ]
    }
}

impl Tabular for TermRecord {
    fn header() -> Vec<&'static str> {
        vec!["k", "z_re", "z_im", "inv_re", "inv_im", "abs_error_estimate"]
    }

    fn row(&self) -> Vec<String> {
        vec![
            self.k.to_string(),
            num(self.z.re),
            num(self.z.im),
            num(self.inv_value.re),
            num(self.inv_value.im),
            num(self.abs_error_estimate),
        ]
    }
}

impl Tabular for FormRecord {
    fn header() -> Vec<&'static str> {
        vec!["form", "parameters", "value_re", "value_im", "abs_error_estimate", "converged"]
    }

    fn row(&self) -> Vec<String> {
        vec![
            self.form.clone(),
            params_text(&self.parameters),
            num(self.value.re),
            num(self.value.im),
            num(self.abs_error_estimate),
            self.converged.to_string(),
        ]
    }
}

impl Tabular for RootRecord {
    fn header() -> Vec<&'static str> {
        vec!["k", "re", "im"]
    }

    fn row(&self) -> Vec<String> {
        vec![self.k.to_string(), num(self.value.re), num(self.value.im)]
    }
}

impl Tabular for IdentityReport {
    fn header() -> Vec<&'static str> {
        vec![
            "identity_id",
            "sequence",
            "parameters",
            "lhs_re",
            "lhs_im",
            "rhs_re",
            "rhs_im",
            "residual",
            "tolerance",
            "passed",
            "error_budget",
            "skipped",
            "notes",
        ]
    }

    fn row(&self) -> Vec<String> {
        vec![
            self.identity_id.clone(),
            self.sequence.to_string(),
            params_text(&self.parameters),
            num(self.lhs.re),
            num(self.lhs.im),
            num(self.rhs.re),
            num(self.rhs.im),
            num(self.residual),
            num(self.tolerance),
            self.passed.to_string(),
            num(self.error_budget),
            self.skipped.to_string(),
            self.notes.join(" | "),
        ]
    }

    fn footnotes(&self) -> Vec<String> {
        self.notes
            .iter()
            .map(|n| format!("{} [{}] {}: {n}", self.identity_id, self.sequence, params_text(&self.parameters)))
            .collect()
    }
}

fn io_failure(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("write failed: {e}"))
}

fn emit<R: Tabular + Serialize>(out: &mut dyn Write, format: OutputFormat, rows: &[R]) -> std::result::Result<(), Failure> {
    match format {
        OutputFormat::Json => {
            for r in rows {
                let line = serde_json::to_string(r).map_err(io_failure)?;
                writeln!(out, "{line}").map_err(io_failure)?;
            }
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(R::header()).map_err(io_failure)?;
            for r in rows {
                w.write_record(r.row()).map_err(io_failure)?;
            }
            w.flush().map_err(io_failure)?;
        }
        OutputFormat::Human => {
            let header: Vec<String> = R::header().iter().map(|h| h.to_string()).collect();
            // Notes go below the table rather than in a column.
            let keep = header.iter().position(|h| h == "notes").unwrap_or(header.len());
            let table: Vec<Vec<String>> = std::iter::once(header[..keep].to_vec())
                .chain(rows.iter().map(|r| r.row()[..keep].to_vec()))
                .collect();
            let widths: Vec<usize> = (0..keep)
                .map(|c| table.iter().map(|row| row[c].chars().count()).max().unwrap_or(0))
                .collect();
            for row in &table {
                let cells: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(cell, w)| format!("{cell:<w$}"))
                    .collect();
                writeln!(out, "{}", cells.join("  ").trim_end()).map_err(io_failure)?;
            }
            let notes: Vec<String> = rows.iter().flat_map(|r| r.footnotes()).collect();
            if !notes.is_empty() {
                writeln!(out).map_err(io_failure)?;
                for n in notes {
                    writeln!(out, "note: {n}").map_err(io_failure)?;
                }
            }
        }
    }
    Ok(())
}

/// Runs [`run`] on the process arguments and standard streams.
pub fn main_entry() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("mzv").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn key_value_parsing() {
        assert_eq!(parse_key_value("s=5").unwrap(), ("s".to_string(), 5.0));
        assert!(parse_key_value("s5").is_err());
        assert!(parse_key_value("s=x").is_err());
    }

    #[test]
    fn sequence_resolution() {
        let args = SeqArgs {
            family: Some("bessel-zeros".into()),
            nu: Some(1.5),
            ..Default::default()
        };
        let spec = resolve_sequence(&args, &CliConfig::default()).unwrap();
        assert_eq!(spec, SequenceSpec::infinite(crate::sequences::Family::BesselSquaredZeros(1.5)));
        let file = CliConfig {
            sequence: Some(spec),
            ..Default::default()
        };
        let patched = resolve_sequence(
            &SeqArgs {
                nu: Some(0.5),
                ..Default::default()
            },
            &file,
        )
        .unwrap();
        assert_eq!(patched.family, crate::sequences::Family::BesselSquaredZeros(0.5));
        assert!(resolve_sequence(&SeqArgs::default(), &CliConfig::default()).is_err());
        let missing = SeqArgs {
            family: Some("shifted_linear".into()),
            ..Default::default()
        };
        assert!(resolve_sequence(&missing, &CliConfig::default()).is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(call(&["eval", "--seq", "natural"]).0, 1);
        assert_eq!(call(&["no-such-command"]).0, 1);
        assert_eq!(call(&["verify"]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn csv_has_header() {
        let (code, out, _) = call(&["bessel", "poly-roots", "--n", "2", "--format", "csv"]);
        assert_eq!(code, 0);
        let lines: Vec<_> = out.lines().collect();
        assert_eq!(lines[0], "k,re,im");
        assert_eq!(lines.len(), 3);
    }
}
