use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use monadlab::cohomology::{
    admissibility_check, cohomology_table, dual_vanishing_check, stability_report, StabilityVerdict, REQUIRED_WINDOW,
};
use monadlab::monad::{
    decode, encode, example, floystad_exists, random_monad, validate_with, EXAMPLE_NAMES,
};
use monadlab::pencil::{line_status, restrict, splitting_type, Line, LineStatus};
use monadlab::pointwise::{classify, dualize_verified, Budget};
use monadlab::scan::{codim_evidence, jumping_scan, trivial_splitting_test, uniformity_evidence, ScanReport};
use monadlab::{with_monad, AnyMonad, Error, Field, FieldKind, PrimeField, Rationals, SpecialMonad};

#[derive(Parser)]
#[command(name = "monadlab", version, about = "Special monads on projective space")]
struct Cli {
    /// Prime for finite-field evidence and scans.
    #[arg(long, global = true, env = "MONADLAB_PRIME", default_value_t = 32003)]
    prime: u64,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Random slices per codimension in degeneracy scans.
    #[arg(long, global = true, default_value_t = 50)]
    slices: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Check composition, surjectivity of beta and injectivity of alpha.
    Validate { file: PathBuf },
    /// Rank and Chern data.
    Invariants { file: PathBuf },
    /// Locally free / reflexive / torsion-free classification.
    Classify { file: PathBuf },
    /// Table of h^p(E(k)).
    Cohomology {
        file: PathBuf,
        #[arg(long, default_value_t = REQUIRED_WINDOW.0, allow_negative_numbers = true)]
        kmin: i64,
        #[arg(long, default_value_t = REQUIRED_WINDOW.1, allow_negative_numbers = true)]
        kmax: i64,
    },
    /// Check the admissible vanishing pattern.
    Admissible {
        file: PathBuf,
        #[arg(long, default_value_t = REQUIRED_WINDOW.0, allow_negative_numbers = true)]
        kmin: i64,
        #[arg(long, default_value_t = REQUIRED_WINDOW.1, allow_negative_numbers = true)]
        kmax: i64,
    },
    /// Stability via sections of E and E*.
    Stability { file: PathBuf },
    /// Dual monad of a locally free sheaf.
    Dualize { file: PathBuf },
    /// Direct sum of two monads.
    Dsum { first: PathBuf, second: PathBuf },
    /// Restrict to a line given by two points, e.g. "1,0,0,0;0,1,0,0".
    Restrict {
        file: PathBuf,
        #[arg(long)]
        line: String,
    },
    /// Splitting type on one line, or the trivial-splitting test on sampled lines.
    Splitting {
        file: PathBuf,
        #[arg(long, conflicts_with = "samples", required_unless_present = "samples")]
        line: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Jumping lines among random lines over F_p.
    JumpingScan {
        file: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Also write one JSON object per sampled line to this path.
        #[arg(long)]
        emit_lines: Option<PathBuf>,
    },
    /// Jumping fractions across primes and the fitted scaling exponent.
    CodimEvidence {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [101u64, 1009])]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 20000)]
        samples: usize,
    },
    /// Try to refute uniformity by comparing splitting types.
    Uniformity {
        file: PathBuf,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Extra lines to include (repeatable).
        #[arg(long)]
        line: Vec<String>,
    },
    /// Random valid monad on P^3.
    Generate {
        #[arg(long)]
        v: usize,
        #[arg(long)]
        w: usize,
        #[arg(long = "v-prime")]
        v_prime: usize,
        /// Q or Fp:p
        #[arg(long, default_value = "Q")]
        field: String,
    },
    /// Built-in example monads; lists names without --name.
    Examples {
        #[arg(long)]
        name: Option<String>,
    },
}

enum Failure {
    /// Exit 1.
    Math(String),
    /// Exit 2.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::Malformed { .. }
            | Error::UnknownExample(_)
            | Error::InvalidPrime(_)
            | Error::WindowTooSmall(..)
            | Error::SampleCap(..)
            | Error::FieldMismatch
            | Error::DimensionMismatch(_)
            | Error::ZeroPoint
            | Error::DegenerateLine(_)
            | Error::Json(_) => Failure::Usage(e.to_string()),
            _ => Failure::Math(e.to_string()),
        }
    }
}

/// Text to emit plus an optional failure reported after emitting.
struct Output {
    text: String,
    failure: Option<String>,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, failure: None }
    }
}

type Run = Result<Output, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = run(&cli).and_then(|out| {
        emit(cli.out.as_deref(), &out.text)?;
        Ok(out.failure)
    });
    match result {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(msg)) | Err(Failure::Math(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<AnyMonad, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    decode(&bytes).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn report<T: Serialize>(summary: &str, body: &T) -> Result<String, Failure> {
    let mut v = json!({ "summary": summary });
    if let Value::Object(extra) = serde_json::to_value(body).map_err(Error::from)? {
        v.as_object_mut().expect("object").extend(extra);
    }
    Ok(serde_json::to_string_pretty(&v).map_err(Error::from)? + "\n")
}

fn json_only(cli: &Cli, what: &str) -> Result<(), Failure> {
    if cli.format != Format::Json {
        return Err(Failure::Usage(format!("{what} only supports --format json")));
    }
    Ok(())
}

fn window(kmin: i64, kmax: i64) -> Result<(), Failure> {
    if kmin > kmax {
        return Err(Failure::Usage(format!("empty twist window: --kmin {kmin} > --kmax {kmax}")));
    }
    Ok(())
}

fn budget(cli: &Cli) -> Result<Budget, Failure> {
    PrimeField::new(cli.prime)?;
    Ok(Budget {
        prime: cli.prime,
        slices: cli.slices,
        seed: cli.seed,
        ..Budget::default()
    })
}

fn run(cli: &Cli) -> Run {
    let budget = budget(cli)?;
    match &cli.command {
        Command::Validate { file } => {
            json_only(cli, "validate")?;
            with_monad!(&load(file)?, m => cmd_validate(m, &budget))
        }
        Command::Invariants { file } => {
            json_only(cli, "invariants")?;
            with_monad!(&load(file)?, m => cmd_invariants(m))
        }
        Command::Classify { file } => {
            json_only(cli, "classify")?;
            with_monad!(&load(file)?, m => {
                let r = classify(m, &budget)?;
                Ok(Output::ok(report(&r.summary(), &r)?))
            })
        }
        Command::Cohomology { file, kmin, kmax } => {
            window(*kmin, *kmax)?;
            with_monad!(&load(file)?, m => cmd_cohomology(cli, m, *kmin, *kmax))
        }
        Command::Admissible { file, kmin, kmax } => {
            window(*kmin, *kmax)?;
            json_only(cli, "admissible")?;
            with_monad!(&load(file)?, m => {
                let r = admissibility_check(m, *kmin, *kmax)?;
                let summary = if r.pass { "admissible".to_string() } else { format!("not admissible ({} violations)", r.violations.len()) };
                let failure = (!r.pass).then(|| summary.clone());
                Ok(Output { text: report(&summary, &r)?, failure })
            })
        }
        Command::Stability { file } => {
            json_only(cli, "stability")?;
            with_monad!(&load(file)?, m => cmd_stability(m, &budget))
        }
        Command::Dualize { file } => {
            json_only(cli, "dualize")?;
            with_monad!(&load(file)?, m => Ok(Output::ok(encode(&dualize_verified(m, &budget)?))))
        }
        Command::Dsum { first, second } => {
            json_only(cli, "dsum")?;
            let text = match (load(first)?, load(second)?) {
                (AnyMonad::Rational(a), AnyMonad::Rational(b)) => encode(&a.direct_sum(&b)?),
                (AnyMonad::Prime(a), AnyMonad::Prime(b)) => encode(&a.direct_sum(&b)?),
                _ => return Err(Error::FieldMismatch.into()),
            };
            Ok(Output::ok(text))
        }
        Command::Restrict { file, line } => {
            json_only(cli, "restrict")?;
            with_monad!(&load(file)?, m => cmd_restrict(m, line))
        }
        Command::Splitting { file, line, samples } => {
            json_only(cli, "splitting")?;
            with_monad!(&load(file)?, m => match (line, samples) {
                (Some(l), _) => cmd_splitting_line(m, l),
                (None, Some(n)) => {
                    let r = trivial_splitting_test(m, *n, cli.seed)?;
                    Ok(Output::ok(report(&r.verdict, &r)?))
                }
                (None, None) => Err(Failure::Usage("give --line or --samples".into())),
            })
        }
        Command::JumpingScan { file, samples, emit_lines } => {
            with_monad!(&load(file)?, m => {
                let r = jumping_scan(m, cli.prime, *samples, cli.seed, &budget)?;
                if let Some(path) = emit_lines {
                    emit(Some(path), &r.to_jsonl()?)?;
                }
                let text = match cli.format {
                    Format::Json => {
                        let summary = format!("{} of {} lines jumping over F_{} (seed {})", r.jumping, r.samples, r.prime, r.seed);
                        report(&summary, &r)?
                    }
                    Format::Csv => format!("{}\n{}\n", ScanReport::csv_header(), r.csv_row()),
                    Format::Md => return Err(Failure::Usage("jumping-scan supports --format json or csv".into())),
                };
                Ok(Output::ok(text))
            })
        }
        Command::CodimEvidence { file, primes, samples } => {
            with_monad!(&load(file)?, m => {
                let r = codim_evidence(m, primes, *samples, cli.seed, &budget)?;
                let text = match cli.format {
                    Format::Json => report(&r.verdict, &r)?,
                    Format::Csv => r.to_csv(),
                    Format::Md => return Err(Failure::Usage("codim-evidence supports --format json or csv".into())),
                };
                Ok(Output::ok(text))
            })
        }
        Command::Uniformity { file, samples, line } => {
            json_only(cli, "uniformity")?;
            with_monad!(&load(file)?, m => {
                let extra = line.iter().map(|l| parse_line(m.field(), m.ambient(), l)).collect::<Result<Vec<_>, _>>()?;
                let r = uniformity_evidence(m, *samples, cli.seed, &extra, &budget)?;
                Ok(Output::ok(report(&r.verdict, &r)?))
            })
        }
        Command::Generate { v, w, v_prime, field } => {
            json_only(cli, "generate")?;
            let kind: FieldKind = field.parse()?;
            if !floystad_exists(*v, *w, *v_prime) && !(*v == 0 && *v_prime == 0) {
                return Err(Error::NotRepresentable(*v, *w, *v_prime).into());
            }
            let text = match kind {
                FieldKind::Rational => encode(&random_monad(*v, *w, *v_prime, cli.seed, &Rationals)?),
                FieldKind::Prime(p) => encode(&random_monad(*v, *w, *v_prime, cli.seed, &PrimeField::new(p)?)?),
            };
            Ok(Output::ok(text))
        }
        Command::Examples { name } => {
            json_only(cli, "examples")?;
            let text = match name {
                Some(n) => encode(&example(n)?),
                None => serde_json::to_string_pretty(&EXAMPLE_NAMES).map_err(Error::from)? + "\n",
            };
            Ok(Output::ok(text))
        }
    }
}

fn cmd_validate<F: Field>(m: &SpecialMonad<F>, budget: &Budget) -> Run {
    let r = validate_with(m, budget)?;
    let failure = r.failure().map(|(name, c)| {
        let mut msg = format!("{name} fails: {}", c.detail);
        if let Some(w) = &c.witness {
            msg.push_str(&format!(" at point [{}]", w.join(":")));
        }
        msg
    });
    let summary = match &failure {
        None if r.rank_zero => "valid (rank 0 cohomology sheaf)".to_string(),
        None => "valid".to_string(),
        Some(msg) => format!("invalid: {msg}"),
    };
    Ok(Output { text: report(&summary, &r)?, failure })
}

fn cmd_invariants<F: Field>(m: &SpecialMonad<F>) -> Run {
    let c = m.invariants();
    let (v, w, vp) = m.dims();
    let mut summary = format!("rank {}, c1 = {}, c2 = {}", c.rank, c.c1, c.c2);
    if let Some(c3) = c.c3 {
        summary.push_str(&format!(", c3 = {c3}"));
    }
    let body = json!({
        "ambient": m.ambient(),
        "field": m.field().kind().to_string(),
        "dims": { "v": v, "w": w, "v_prime": vp },
        "chern": c,
    });
    Ok(Output::ok(report(&summary, &body)?))
}

fn cmd_cohomology<F: Field>(cli: &Cli, m: &SpecialMonad<F>, kmin: i64, kmax: i64) -> Run {
    let t = cohomology_table(m, kmin, kmax)?;
    let text = match cli.format {
        Format::Json => report(&format!("h^p(E(k)) for k in [{kmin}, {kmax}]"), &t)?,
        Format::Csv => t.to_csv(),
        Format::Md => t.to_markdown(),
    };
    Ok(Output::ok(text))
}

fn cmd_stability<F: Field>(m: &SpecialMonad<F>, budget: &Budget) -> Run {
    let class = classify(m, budget)?;
    let r = stability_report(m, &class)?;
    let mut body = serde_json::to_value(&r).map_err(Error::from)?;
    if class.level == monadlab::monad::Regularity::LocallyFree {
        let dv = dual_vanishing_check(m, budget)?;
        body["dual_vanishing"] = serde_json::to_value(dv).map_err(Error::from)?;
    }
    let summary = match r.verdict {
        StabilityVerdict::Stable => "stable",
        StabilityVerdict::SemistableNotStable => "semistable, not stable",
        StabilityVerdict::Inconclusive => "inconclusive",
    };
    Ok(Output::ok(report(summary, &body)?))
}

fn parse_line<F: Field>(field: &F, ambient: usize, spec: &str) -> Result<Line<F>, Failure> {
    let pts: Vec<&str> = spec.split(';').collect();
    if pts.len() != 2 {
        return Err(Failure::Usage(format!("line {spec:?}: expected two points separated by ';'")));
    }
    let mut coords = Vec::new();
    for p in pts {
        let c = p.split(',').map(|s| field.parse(s.trim())).collect::<Result<Vec<_>, _>>()?;
        if c.len() != ambient + 1 {
            return Err(Failure::Usage(format!("point {p:?}: expected {} coordinates", ambient + 1)));
        }
        coords.push(c);
    }
    let q = coords.pop().expect("two points");
    let p = coords.pop().expect("two points");
    Ok(Line::from_points(field, p, q)?)
}

fn forms_table<F: Field>(l: &monadlab::LinearFormMatrix<F>) -> Vec<Vec<String>> {
    (0..l.rows())
        .map(|i| (0..l.cols()).map(|j| l.format_entry(i, j, &["s", "t"])).collect())
        .collect()
}

fn cmd_restrict<F: Field>(m: &SpecialMonad<F>, spec: &str) -> Run {
    let line = parse_line(m.field(), m.ambient(), spec)?;
    let pc = restrict(m, &line)?;
    let status = line_status(&pc);
    let summary = match &status {
        LineStatus::Clean => "clean".to_string(),
        LineStatus::AlphaDegenerate { gcd } => format!("alpha degenerate (gcd {gcd})"),
    };
    let body = json!({
        "line": line.summary(),
        "status": status,
        "rank": pc.rank(),
        "c1": pc.c1(),
        "composes_to_zero": pc.composes_to_zero(),
        "alpha": forms_table(&pc.alpha_forms()),
        "beta": forms_table(&pc.beta_forms()),
    });
    Ok(Output::ok(report(&summary, &body)?))
}

fn cmd_splitting_line<F: Field>(m: &SpecialMonad<F>, spec: &str) -> Run {
    let line = parse_line(m.field(), m.ambient(), spec)?;
    let pc = restrict(m, &line)?;
    match line_status(&pc) {
        LineStatus::Clean => {
            let s = splitting_type(&pc)?;
            let body = json!({ "line": line.summary(), "status": LineStatus::Clean, "splitting": s });
            Ok(Output::ok(report(&s.to_string(), &body)?))
        }
        status @ LineStatus::AlphaDegenerate { .. } => {
            let body = json!({ "line": line.summary(), "status": status });
            let msg = "alpha drops rank on this line; no splitting type".to_string();
            Ok(Output { text: report(&msg, &body)?, failure: Some(msg) })
        }
    }
}
