use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nonbasis::families::{build_full, build_gapped, Domain, Family, Params};
use nonbasis::report::{FamilyInfo, Report};
use nonbasis::verify::{
    self, catalog_checks, certificate_holds, classify_window, Catalog, Check, Classifier, Verdict,
    DEFAULT_BUDGET,
};
use nonbasis::{GapGenerator, SetSpec, Window};

const BUDGET_VAR: &str = "NONBASIS_BUDGET";

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Lib(#[from] nonbasis::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

type CliResult<T> = Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// Construct nonbasis families, compute h-fold sumsets and verify their
/// structure against a brute-force oracle.
#[derive(Debug, Parser)]
#[command(name = "nonbasis", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    #[arg(long)]
    h: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<i64>,
    /// z or n0
    #[arg(long)]
    domain: Option<Domain>,
    /// Gap generator, e.g. `geometric,2,1`, `triangular`, `factorial`,
    /// `custom,[0,5],tail=factorial`.
    #[arg(long)]
    gap: Option<GapGenerator>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a family and print its set spec.
    Construct {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<Window>,
    },
    /// h-fold sumset of a family (or of `--spec` with `--order`) on a window.
    Sumset {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, allow_hyphen_values = true)]
        window: Window,
        /// Set spec in the textual grammar, instead of family parameters.
        #[arg(long, allow_hyphen_values = true)]
        spec: Option<SetSpec>,
        /// Number of summands for `--spec`.
        #[arg(long)]
        order: Option<usize>,
        /// Truncation radius over Z.
        #[arg(long)]
        radius: Option<i64>,
    },
    /// Decide whether one integer is an h-fold sum, with a certificate.
    Classify {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Split the complement of hA on a window into shifted-Y and exceptional parts.
    Catalog {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, allow_hyphen_values = true)]
        window: Window,
    },
    /// Run a verification preset.
    Verify {
        #[arg(value_enum)]
        preset: Preset,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<Window>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Preset {
    /// Full family over Z: gcd dichotomy and unique representation.
    Thm1,
    /// X = domain \ Y as a basis.
    Lemma,
    /// Gapped family over Z: complement, escapes, augmentation.
    Thm2,
    /// Full family over N0.
    Thm3,
    /// Gapped family over N0.
    Thm4,
}

fn budget() -> CliResult<u64> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{BUDGET_VAR} must be a nonnegative integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

impl FamilyArgs {
    fn params(&self, default_domain: Option<Domain>) -> CliResult<Params> {
        let (Some(h), Some(s), Some(t)) = (self.h, self.s, self.t) else {
            return usage("--h, --s and --t are required");
        };
        let Some(domain) = self.domain.or(default_domain) else {
            return usage("--domain is required");
        };
        Ok(Params::new(h, s, t, domain)?)
    }

    fn family(&self, default_domain: Option<Domain>) -> CliResult<Family> {
        let params = self.params(default_domain)?;
        Ok(match &self.gap {
            Some(y) => build_gapped(params, y.clone())?,
            None => build_full(params)?,
        })
    }
}

fn default_window(domain: Domain) -> Window {
    match domain {
        Domain::N0 => Window::new(0, 2000).unwrap(),
        Domain::Z => Window::new(-500, 500).unwrap(),
    }
}

fn construct(args: &FamilyArgs, window: Option<Window>) -> CliResult<Report> {
    let family = args.family(None)?;
    let window = window.unwrap_or(match family.domain() {
        Domain::N0 => Window::new(0, 40).unwrap(),
        Domain::Z => Window::new(-20, 20).unwrap(),
    });
    let members = family.materialize(window)?.enumerate();
    let checks = vec![
        Check::pass("gcd_case", format!("d = {}", family.params().gcd_case().d)),
        Check::pass("members", verify::format_ranges(&members)),
    ];
    Ok(Report { family: FamilyInfo::of(&family), window, catalog: None, checks })
}

fn sumset_cmd(
    args: &FamilyArgs,
    window: Window,
    spec: Option<&SetSpec>,
    order: Option<usize>,
    radius: Option<i64>,
) -> CliResult<Report> {
    let (info, source, domain, h) = match spec {
        Some(spec) => {
            let Some(h) = order else {
                return usage("--spec needs --order");
            };
            let domain = args.domain.unwrap_or(Domain::Z);
            let r = radius.unwrap_or_else(|| 2 * window.lo().abs().max(window.hi().abs()) + 64);
            let src = verify::source_window(domain, window, r)?;
            let members = spec.materialize_capped(src, nonbasis::intset::DEFAULT_WINDOW_CAP)?;
            let info = FamilyInfo { h: h as i64, s: None, t: None, domain, gap: None, spec: spec.to_string() };
            (info, members, domain, h)
        }
        None => {
            let family = args.family(None)?;
            let r = radius.unwrap_or_else(|| verify::default_z_radius(&family, window));
            let src = verify::source_window(family.domain(), window, r)?;
            (FamilyInfo::of(&family), family.materialize(src)?, family.domain(), family.h() as usize)
        }
    };
    if h == 0 {
        return usage("--order must be at least 1");
    }
    if domain == Domain::N0 && source.min().is_some_and(|m| m < 0) {
        return usage("a set over n0 cannot contain negative integers");
    }
    let result = verify::hfold_oracle(&source, domain, h, window)?;
    let complement = result.dense.complement_in().enumerate();
    let checks = vec![
        Check::pass("exactness", format!("{:?} (summands taken from {})", result.exactness, result.source)),
        Check::pass("members", verify::format_ranges(&result.dense.enumerate())),
        Check::pass("complement", verify::format_ranges(&complement)),
    ];
    Ok(Report { family: info, window, catalog: None, checks })
}

fn classify_cmd(args: &FamilyArgs, n: i64, budget: u64) -> CliResult<Report> {
    let family = args.family(None)?;
    let verdict = Classifier::new(&family, budget)?.classify(n)?;
    let status = if verdict == Verdict::Unknown { verify::Status::Unknown } else { verify::Status::Pass };
    let checks = vec![
        Check::new("verdict", status, verdict.to_string()),
        Check::from_bool("certificate", certificate_holds(&family, n, &verdict), "re-checked from the definition"),
    ];
    Ok(Report { family: FamilyInfo::of(&family), window: Window::new(n, n)?, catalog: None, checks })
}

fn catalog_cmd(args: &FamilyArgs, window: Window, budget: u64) -> CliResult<Report> {
    let family = args.family(None)?;
    let verdicts = classify_window(&family, window, budget)?;
    let catalog = Catalog::from_verdicts(&verdicts);
    let checks = catalog_checks(&family, window, &verdicts, &catalog, budget)?;
    Ok(Report { family: FamilyInfo::of(&family), window, catalog: Some(catalog), checks })
}

fn verify_cmd(preset: Preset, args: &FamilyArgs, window: Option<Window>, budget: u64) -> CliResult<Report> {
    let wanted = match preset {
        Preset::Thm1 | Preset::Thm2 => Some(Domain::Z),
        Preset::Thm3 | Preset::Thm4 => Some(Domain::N0),
        Preset::Lemma => None,
    };
    if let (Some(w), Some(given)) = (wanted, args.domain) {
        if w != given {
            return usage(format!("{preset:?} runs over {w}, not {given}").to_lowercase());
        }
    }
    let gapped = matches!(preset, Preset::Thm2 | Preset::Thm4 | Preset::Lemma);
    if gapped && args.gap.is_none() {
        return usage("this preset needs --gap");
    }
    if !gapped && args.gap.is_some() {
        return usage("this preset takes no --gap");
    }
    if preset == Preset::Lemma {
        let (Some(h), Some(y)) = (args.h, &args.gap) else {
            return usage("--h is required");
        };
        let domain = args.domain.unwrap_or(Domain::N0);
        let window = window.unwrap_or(default_window(domain));
        return Ok(verify::verify_lemma(y, h, domain, window, budget)?);
    }
    let family = args.family(wanted)?;
    let window = window.unwrap_or(default_window(family.domain()));
    Ok(if gapped {
        verify::verify_gapped(&family, window, budget)?
    } else {
        verify::verify_full(&family, window, budget)?
    })
}

fn run(cli: &Cli) -> CliResult<i32> {
    let budget = budget()?;
    let report = match &cli.command {
        Command::Construct { family, window } => construct(family, *window)?,
        Command::Sumset { family, window, spec, order, radius } => {
            sumset_cmd(family, *window, spec.as_ref(), *order, *radius)?
        }
        Command::Classify { family, n } => classify_cmd(family, *n, budget)?,
        Command::Catalog { family, window } => catalog_cmd(family, *window, budget)?,
        Command::Verify { preset, family, window } => verify_cmd(*preset, family, *window, budget)?,
    };
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
