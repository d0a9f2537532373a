use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::float::Round;
use rug::Float;
use serde::Serialize;
use serde_json::json;
use zg_core::bounds::{apply_bound, lookup, registry, verify_case, BoundCase};
use zg_core::parse::display_digits;
use zg_core::{chi, log_gamma, parse_complex, parse_decimal, r_eval, theta, z_eval, zeta_eval, ComplexBall, Containment, Enclosure, Precision};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] zg_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use zg_core::Error as E;
        match self {
            CliError::Core(E::Parse(_) | E::Precision(_)) | CliError::Usage(_) => 2,
            CliError::Core(E::Domain(_) | E::Pole(_) | E::Boundary(_)) => 3,
            CliError::Core(E::NotFound(_)) => 4,
            CliError::Io(_) => 5,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Function {
    Zeta,
    Theta,
    Chi,
    #[value(name = "R", alias = "r")]
    R,
    #[value(name = "Z", alias = "z")]
    Z,
    #[value(alias = "lgamma")]
    Loggamma,
}

impl Function {
    fn name(self) -> &'static str {
        match self {
            Function::Zeta => "zeta",
            Function::Theta => "theta",
            Function::Chi => "chi",
            Function::R => "R",
            Function::Z => "Z",
            Function::Loggamma => "loggamma",
        }
    }
}

#[derive(Debug, Args)]
struct Common {
    /// Working precision in bits.
    #[arg(long, global = true, env = "ZG_PREC_BITS", default_value_t = 64)]
    prec_bits: u32,
    /// Requested absolute error, as a decimal (default 2^-53).
    #[arg(long, global = true)]
    target_error: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

impl Common {
    fn precision(&self) -> CliResult<Precision> {
        let target = match &self.target_error {
            None => Float::with_val(64, 1) >> 53,
            Some(s) => Float::with_val_round(64, &parse_decimal(s)?, Round::Down).0,
        };
        Ok(Precision::new(self.prec_bits, target)?)
    }
}

#[derive(Debug, Parser)]
#[command(name = "zg", version, about = "Rigorous enclosures for zeta and related functions")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a function at a point.
    Eval {
        #[arg(value_enum)]
        function: Function,
        /// Complex argument `<re>[+|-]<im>i` (zeta, chi, R, loggamma).
        #[arg(long, allow_hyphen_values = true)]
        s: Option<String>,
        /// Argument of theta or Z.
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
    },
    /// Inspect the bound registry.
    Bounds {
        #[command(subcommand)]
        action: BoundsAction,
    },
    /// Run randomized verification sweeps.
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
enum BoundsAction {
    /// List every registered bound.
    List,
    /// Show region and formula of a bound.
    Show { id: String },
    /// Evaluate a bound at a point.
    Apply {
        id: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "which")]
struct Which {
    /// Bound id or id prefix.
    #[arg(long)]
    bound: Option<String>,
    /// Every registered bound.
    #[arg(long)]
    all: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    which: Which,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Worker threads (default: number of processors).
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, default_value = "zg-reports")]
    out_dir: PathBuf,
    /// Record the wall-clock time in each report.
    #[arg(long)]
    timestamp: bool,
}

#[derive(Serialize)]
struct EvalOutput {
    function: &'static str,
    input: String,
    prec_bits: u32,
    target_error: String,
    #[serde(flatten)]
    enclosure: Enclosure,
    #[serde(skip_serializing_if = "Option::is_none")]
    route: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    meets_target: Option<bool>,
}

fn fmt_target(p: &Precision) -> String {
    p.target_abs_error().to_string_radix(10, Some(6))
}

fn required<'a>(v: &'a Option<String>, flag: &str, f: Function) -> CliResult<&'a str> {
    v.as_deref()
        .ok_or_else(|| CliError::Usage(format!("eval {} needs --{flag}", f.name())))
}

fn cmd_eval(common: &Common, f: Function, s: &Option<String>, t: &Option<String>) -> CliResult<String> {
    let prec = common.precision()?;
    let bits = prec.working_bits();
    let digits = display_digits(bits);
    let mut route = None;
    let mut meets = None;
    let (input, value) = match f {
        Function::Theta | Function::Z => {
            let raw = required(t, "t", f)?;
            let arg = parse_complex(raw)?;
            let tb = arg.to_ball(bits);
            let v = if f == Function::Theta {
                theta(&tb)?.value
            } else {
                if !tb.is_real() {
                    return Err(zg_core::Error::Domain("Z needs a real t".into()).into());
                }
                let z = z_eval(&tb.re, &prec)?;
                ComplexBall::from_real(z.value)
            };
            (raw.to_string(), v)
        }
        _ => {
            let raw = required(s, "s", f)?;
            let sb = parse_complex(raw)?.to_ball(bits);
            let v = match f {
                Function::Zeta => {
                    let z = zeta_eval(&sb, &prec)?;
                    route = Some(z.route.name());
                    meets = Some(z.meets_target);
                    z.value
                }
                Function::Chi => chi(&sb)?.value,
                Function::R => r_eval(&sb, &prec)?,
                _ => log_gamma(&sb)?,
            };
            (raw.to_string(), v)
        }
    };
    let out = EvalOutput {
        function: f.name(),
        input,
        prec_bits: bits,
        target_error: fmt_target(&prec),
        enclosure: Enclosure::of(&value, digits),
        route,
        meets_target: meets,
    };
    Ok(match common.format {
        Format::Json => serde_json::to_string_pretty(&out).expect("serializable") + "\n",
        Format::Csv => format!(
            "function,input,prec_bits,mid_re,mid_im,rad\n{},{},{},{},{},{}\n",
            out.function, out.input, out.prec_bits, out.enclosure.mid_re, out.enclosure.mid_im, out.enclosure.rad
        ),
        Format::Text => {
            let mut s = format!("{}({}) = {}\n", out.function, out.input, out.enclosure.to_text());
            if let Some(r) = out.route {
                s += &format!("route: {r}\n");
            }
            s
        }
    })
}

fn case_json(c: &BoundCase) -> serde_json::Value {
    json!({
        "id": c.id,
        "anchor": c.anchor,
        "region": c.region_text(),
        "formula": c.formula,
    })
}

fn containment_str(c: Containment) -> &'static str {
    match c {
        Containment::Inside => "true",
        Containment::Outside => "false",
        Containment::Uncertain => "uncertain",
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cmd_bounds(common: &Common, action: &BoundsAction) -> CliResult<String> {
    let mut out = String::new();
    match action {
        BoundsAction::List => match common.format {
            Format::Json => {
                let v: Vec<_> = registry().iter().map(case_json).collect();
                out = serde_json::to_string_pretty(&v).expect("serializable") + "\n";
            }
            Format::Csv => {
                out += "id,anchor\n";
                for c in registry() {
                    out += &format!("{},{}\n", c.id, csv_field(c.anchor));
                }
            }
            Format::Text => {
                for c in registry() {
                    out += &format!("{:30} {}\n", c.id, c.anchor);
                }
            }
        },
        BoundsAction::Show { id } => {
            let cases = lookup(id)?;
            match common.format {
                Format::Json => {
                    let v: Vec<_> = cases.iter().map(|c| case_json(c)).collect();
                    out = serde_json::to_string_pretty(&v).expect("serializable") + "\n";
                }
                Format::Csv => {
                    out += "id,region,formula,anchor\n";
                    for c in cases {
                        out += &format!(
                            "{},{},{},{}\n",
                            c.id,
                            csv_field(&c.region_text()),
                            csv_field(c.formula),
                            csv_field(c.anchor)
                        );
                    }
                }
                Format::Text => {
                    for c in cases {
                        out += &format!(
                            "id: {}\nregion: {}\nformula: {}\nanchor: {}\n",
                            c.id,
                            c.region_text(),
                            c.formula,
                            c.anchor
                        );
                    }
                }
            }
        }
        BoundsAction::Apply { id, s } => {
            let prec = common.precision()?;
            let bits = prec.working_bits();
            let point = parse_complex(s)?.to_ball(bits);
            let cases = lookup(id)?;
            let results = apply_bound(id, &point, &prec)?;
            let digits = display_digits(bits);
            let rows: Vec<_> = results
                .iter()
                .zip(&cases)
                .map(|(a, c)| {
                    let rhs = a.rhs.as_ref().map(|r| Enclosure::of_real(r, digits));
                    (a.id, containment_str(a.in_region), rhs, c.formula)
                })
                .collect();
            match common.format {
                Format::Json => {
                    let v: Vec<_> = rows
                        .iter()
                        .map(|(id, inr, rhs, formula)| {
                            json!({"id": id, "s": s, "in_region": inr, "formula": formula, "rhs": rhs})
                        })
                        .collect();
                    out = serde_json::to_string_pretty(&v).expect("serializable") + "\n";
                }
                Format::Csv => {
                    out += "id,s,in_region,rhs_mid,rhs_rad\n";
                    for (id, inr, rhs, _) in &rows {
                        let (m, r) = rhs.as_ref().map_or((String::new(), String::new()), |e| (e.mid_re.clone(), e.rad.clone()));
                        out += &format!("{id},{},{inr},{m},{r}\n", csv_field(s));
                    }
                }
                Format::Text => {
                    for (id, inr, rhs, formula) in &rows {
                        let r = rhs
                            .as_ref()
                            .map_or("undefined".to_string(), |e| format!("{} +/- {}", e.mid_re, e.rad));
                        out += &format!("{id}: in-region={inr} rhs={r}  [{formula}]\n");
                    }
                }
            }
        }
    }
    Ok(out)
}

fn write_atomic(dir: &Path, name: &str, contents: &str) -> CliResult<PathBuf> {
    let path = dir.join(name);
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(&path).map_err(|e| CliError::Io(e.error))?;
    Ok(path)
}

fn cmd_verify(common: &Common, args: &VerifyArgs) -> CliResult<(String, bool)> {
    let prec = common.precision()?;
    let cases: Vec<&BoundCase> = if args.which.all {
        registry().iter().collect()
    } else {
        lookup(args.which.bound.as_deref().unwrap_or_default())?
    };
    if let Some(j) = args.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    std::fs::create_dir_all(&args.out_dir)?;
    let mut ok = true;
    let mut summary = Vec::new();
    let mut out = String::new();
    for c in cases {
        let mut report = verify_case(c, args.samples, args.seed, &prec)?;
        if args.timestamp {
            let now = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            report.timestamp = Some(now);
        }
        write_atomic(&args.out_dir, &format!("{}.json", c.id), &report.to_json())?;
        write_atomic(&args.out_dir, &format!("{}.csv", c.id), &report.to_csv()?)?;
        let passed = report.passed();
        ok &= passed;
        let min = report.min_margin.as_ref().map_or("none".to_string(), |m| m.mid.clone());
        match common.format {
            Format::Text => {
                out += &format!(
                    "{} {:30} samples={} violations={} skipped={} min_margin={}\n",
                    if passed { "PASS" } else { "FAIL" },
                    c.id,
                    report.samples,
                    report.violations.len(),
                    report.skipped,
                    min
                );
            }
            Format::Csv => {
                if summary.is_empty() && out.is_empty() {
                    out += "id,status,samples,violations,skipped,min_margin\n";
                }
                out += &format!(
                    "{},{},{},{},{},{}\n",
                    c.id,
                    if passed { "pass" } else { "fail" },
                    report.samples,
                    report.violations.len(),
                    report.skipped,
                    min
                );
            }
            Format::Json => summary.push(json!({
                "bound_id": c.id,
                "passed": passed,
                "samples": report.samples,
                "violations": report.violations.len(),
                "skipped": report.skipped,
                "min_margin": report.min_margin,
            })),
        }
    }
    if common.format == Format::Json {
        out = serde_json::to_string_pretty(&summary).expect("serializable") + "\n";
    }
    Ok((out, ok))
}

fn run(cli: &Cli) -> CliResult<ExitCode> {
    match &cli.command {
        Command::Eval { function, s, t } => {
            print!("{}", cmd_eval(&cli.common, *function, s, t)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounds { action } => {
            print!("{}", cmd_bounds(&cli.common, action)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let (out, ok) = cmd_verify(&cli.common, args)?;
            print!("{out}");
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
