//! towerlab: exact suites over the recursive towers defined by the coupled
//! a/b/c relation systems over cubic finite fields.
//!
//! Exit codes: 0 all executed checks passed; 1 a check failed; 2 usage
//! error; 3 a suite was inconclusive (too few points/classes); 4 a size or
//! point cap was exceeded.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use towerlab_core::algebra::FieldCtx;
use towerlab_core::error::Error;
use towerlab_core::report::{FieldInfo, Report, ReportFormat, RunConfig};
use towerlab_core::towers::{
    count_points, relations, write_points_csv, EnumOpts, Model, Projection,
};
use towerlab_core::verify::{
    catalog, degree_report, identities_within_level, partition_compare, prove_identity,
    remark_suite, test_identity_points, witness_suite, GenSel, IdentityId, IdentityOutcome,
    TowerLetter,
};

#[derive(Parser)]
#[command(
    name = "towerlab",
    version,
    about = "Exact verification suites for recursive function-field towers over cubic finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, clap::ValueEnum)]
enum Mode {
    Symbolic,
    Points,
    Both,
}

impl Mode {
    fn symbolic(self) -> bool {
        self != Mode::Points
    }
    fn points(self) -> bool {
        self != Mode::Symbolic
    }
}

fn parse_model(s: &str) -> Result<Model, String> {
    Model::from_str(s).map_err(|e| e.to_string())
}

fn parse_step(s: &str) -> Result<TowerLetter, String> {
    TowerLetter::from_str(s).map_err(|e| e.to_string())
}

fn parse_format(s: &str) -> Result<ReportFormat, String> {
    ReportFormat::from_str(s).map_err(|e| e.to_string())
}

fn parse_identity(s: &str) -> Result<String, String> {
    if s == "all" {
        return Ok(s.to_string());
    }
    IdentityId::from_str(s)
        .map(|id| id.name().to_string())
        .map_err(|e| e.to_string())
}

fn parse_projection(s: &str) -> Result<String, String> {
    match s {
        "A" | "B" | "C" => Ok(s.to_string()),
        other => Err(format!("unknown tower: {other} (expected A, B or C)")),
    }
}

#[derive(Args, Clone)]
struct Common {
    /// Prime characteristic.
    #[arg(long, default_value_t = 2)]
    p: u32,
    /// Exponent m with q = p^m.
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Outer extension degree: points live in F_{ell^k}, ell = q^3.
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Tower level n (1..=4).
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=4))]
    levels: u32,
    /// Relation model for enumeration.
    #[arg(long, default_value = "free", value_parser = parse_model)]
    model: Model,
    /// Output format.
    #[arg(long, default_value = "text", value_parser = parse_format)]
    format: ReportFormat,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for enumeration-heavy suites (wall time only).
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Cap on enumerated points per run.
    #[arg(long = "max-points", default_value_t = towerlab_core::towers::DEFAULT_POINT_CAP)]
    max_points: u64,
}

impl Common {
    fn ctx(&self) -> Result<FieldCtx, Error> {
        FieldCtx::new(self.p, self.m, self.k)
    }

    fn opts(&self) -> EnumOpts {
        EnumOpts {
            seed_range: None,
            max_points: self.max_points,
        }
    }

    fn config(&self, command: &str) -> RunConfig {
        RunConfig {
            command: command.to_string(),
            p: self.p,
            m: self.m,
            k: self.k,
            levels: self.levels,
            model: self.model,
            tower: None,
            step: None,
            from: None,
            identity: None,
            mode: None,
            format: self.format,
            out: self.out.as_ref().map(|p| p.display().to_string()),
            workers: self.workers,
            max_points: self.max_points,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Construct the field tower and print its deterministic moduli.
    Field {
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate tower points: CSV point rows, or count totals as json/text.
    Enumerate {
        #[command(flatten)]
        common: Common,
        /// Restrict exported coordinates to one tower (A: a, B: a+b, C: c).
        #[arg(long, value_parser = parse_projection)]
        tower: Option<String>,
    },
    /// Prove registry identities symbolically and/or on enumerated points.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Identity id (e.g. ID-CPROD) or "all".
        #[arg(long, default_value = "all", value_parser = parse_identity)]
        identity: String,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
    },
    /// Fiber-size histogram for one tower step on the canonical branch.
    Degrees {
        #[command(flatten)]
        common: Common,
        /// Tower step to measure.
        #[arg(long, value_parser = parse_step)]
        step: TowerLetter,
        /// Base level of the step (fibers of level from+1 over level from).
        #[arg(long, default_value_t = 2)]
        from: u32,
    },
    /// Partition-based field equality plus the witness identities.
    Equality {
        #[command(flatten)]
        common: Common,
        /// Left side, e.g. "H2" or "A3+C2" (default H at --levels).
        #[arg(long)]
        left: Option<String>,
        /// Right side, e.g. "C2" (default C at --levels).
        #[arg(long)]
        right: Option<String>,
    },
    /// The structural side facts: q=2 collapse, compositum rows, H-step
    /// degree against the older literature value.
    Remarks {
        #[command(flatten)]
        common: Common,
    },
    /// Run every suite at the given parameters and emit one report.
    Report {
        #[command(flatten)]
        common: Common,
    },
}

fn parse_gensel(s: &str) -> Result<GenSel, Error> {
    let parts: Vec<&str> = s.split('+').collect();
    let mut gens = Vec::new();
    for part in &parts {
        if part.len() < 2 {
            return Err(Error::BadFieldParam(format!("bad generator set: {s}")));
        }
        let letter = TowerLetter::from_str(&part[..1])?;
        let n: u32 = part[1..]
            .parse()
            .map_err(|_| Error::BadFieldParam(format!("bad generator set: {s}")))?;
        gens.push(letter.gens(n));
    }
    let flat: Vec<&[towerlab_core::Var]> = gens.iter().map(|g| g.as_slice()).collect();
    Ok(GenSel::compositum(s.to_string(), &flat))
}

fn run(cli: Cli) -> Result<Report, Error> {
    match cli.command {
        Command::Field { common } => {
            let ctx = common.ctx()?;
            let mut report = Report::new(common.config("field"));
            report.field = Some(FieldInfo::of(&ctx));
            report.reference_ratios = ratio_rows(ctx.q());
            report.finalize();
            report.emit(common.format, common.out.as_deref())?;
            Ok(report)
        }
        Command::Enumerate { common, tower } => {
            let ctx = common.ctx()?;
            let spec = relations(ctx.q(), common.model, common.levels);
            let mut config = common.config("enumerate");
            config.tower = tower.clone();
            if common.format == ReportFormat::Csv {
                let projection = match tower.as_deref() {
                    Some("A") => Projection::A,
                    Some("B") => Projection::AB,
                    Some("C") => Projection::C,
                    _ => Projection::All,
                };
                match &common.out {
                    Some(path) => {
                        let file = std::fs::File::create(path)?;
                        write_points_csv(&ctx, &spec, &common.opts(), projection, file)?;
                    }
                    None => {
                        let stdout = std::io::stdout();
                        write_points_csv(&ctx, &spec, &common.opts(), projection, stdout.lock())?;
                    }
                }
                // CSV rows already written; still return a pass report for the exit code
                let mut report = Report::new(config);
                report.finalize();
                return Ok(report);
            }
            let counts = count_points(&ctx, &spec, &common.opts(), common.workers)?;
            let mut report = Report::new(config);
            report.field = Some(FieldInfo::of(&ctx));
            report.counts.push(counts);
            report.reference_ratios = ratio_rows(ctx.q());
            report.finalize();
            report.emit(common.format, common.out.as_deref())?;
            Ok(report)
        }
        Command::Verify {
            common,
            identity,
            mode,
        } => {
            let ctx = common.ctx()?;
            let mut config = common.config("verify");
            config.identity = Some(identity.clone());
            config.mode = Some(format!("{mode:?}").to_lowercase());
            let mut report = Report::new(config);
            let specs = identities_within_level(&ctx, common.levels);
            let specs: Vec<_> = specs
                .into_iter()
                .filter(|s| identity == "all" || s.id.name() == identity)
                .collect();
            if specs.is_empty() {
                return Err(Error::LevelTooLow {
                    id: identity,
                    needed: common.levels + 1,
                    level: common.levels,
                });
            }
            for spec in &specs {
                let symbolic = if mode.symbolic() {
                    Some(prove_identity(spec)?.trace)
                } else {
                    None
                };
                let points = if mode.points() {
                    Some(test_identity_points(
                        spec,
                        &ctx,
                        common.levels,
                        common.model,
                        &common.opts(),
                        common.workers,
                    )?)
                } else {
                    None
                };
                let pass = symbolic
                    .as_ref()
                    .map(|t| t.verdict == towerlab_core::verify::Verdict::Proved)
                    .unwrap_or(true)
                    && points.as_ref().map(|p| p.pass).unwrap_or(true);
                report.identities.push(IdentityOutcome {
                    id: spec.id.name().to_string(),
                    index: spec.index,
                    pass,
                    symbolic,
                    points,
                });
            }
            report.reference_ratios = ratio_rows(ctx.q());
            report.finalize();
            report.emit(common.format, common.out.as_deref())?;
            Ok(report)
        }
        Command::Degrees { common, step, from } => {
            let mut config = common.config("degrees");
            config.step = Some(step.to_string());
            config.from = Some(from);
            let mut report = Report::new(config);
            report.degrees.push(degree_report(
                common.p,
                common.m,
                common.k,
                step,
                from,
                &common.opts(),
                common.workers,
            )?);
            report.reference_ratios = ratio_rows((common.p as u64).pow(common.m));
            report.finalize();
            report.emit(common.format, common.out.as_deref())?;
            Ok(report)
        }
        Command::Equality {
            common,
            left,
            right,
        } => {
            let ctx = common.ctx()?;
            let left_sel = match &left {
                Some(s) => parse_gensel(s)?,
                None => GenSel::tower(TowerLetter::H, common.levels),
            };
            let right_sel = match &right {
                Some(s) => parse_gensel(s)?,
                None => GenSel::tower(TowerLetter::C, common.levels),
            };
            let mut config = common.config("equality");
            config.tower = Some(format!("{}|{}", left_sel.label, right_sel.label));
            let mut report = Report::new(config);
            report.equalities.push(partition_compare(
                &ctx,
                common.levels,
                &left_sel,
                &right_sel,
                &common.opts(),
            )?);
            report.witnesses.push(witness_suite(
                &ctx,
                common.levels,
                &common.opts(),
                common.workers,
            )?);
            report.reference_ratios = ratio_rows(ctx.q());
            report.finalize();
            report.emit(common.format, common.out.as_deref())?;
            Ok(report)
        }
        Command::Remarks { common } => {
            let mut report = Report::new(common.config("remarks"));
            report.remarks = Some(remark_suite(
                common.p,
                common.m,
                &common.opts(),
                common.workers,
            )?);
            let q = (common.p as u64).pow(common.m);
            report.reference_ratios = ratio_rows(q);
            report.finalize();
            report.emit(common.format, common.out.as_deref())?;
            Ok(report)
        }
        Command::Report { common } => {
            let ctx = common.ctx()?;
            let mut report = Report::new(common.config("report"));
            report.field = Some(FieldInfo::of(&ctx));
            report.catalog = catalog(&ctx, common.levels.max(2))?;
            for spec in identities_within_level(&ctx, common.levels) {
                let symbolic = prove_identity(&spec)?.trace;
                let points = test_identity_points(
                    &spec,
                    &ctx,
                    common.levels,
                    common.model,
                    &common.opts(),
                    common.workers,
                )?;
                let pass =
                    symbolic.verdict == towerlab_core::verify::Verdict::Proved && points.pass;
                report.identities.push(IdentityOutcome {
                    id: spec.id.name().to_string(),
                    index: spec.index,
                    pass,
                    symbolic: Some(symbolic),
                    points: Some(points),
                });
            }
            if common.levels >= 2 {
                for step in [
                    TowerLetter::A,
                    TowerLetter::C,
                    TowerLetter::H,
                    TowerLetter::G,
                ] {
                    report.degrees.push(degree_report(
                        common.p,
                        common.m,
                        common.k,
                        step,
                        common.levels - 1,
                        &common.opts(),
                        common.workers,
                    )?);
                }
                for n in 2..=common.levels {
                    report.equalities.push(partition_compare(
                        &ctx,
                        n,
                        &GenSel::tower(TowerLetter::H, n),
                        &GenSel::tower(TowerLetter::C, n),
                        &common.opts(),
                    )?);
                }
            }
            report.witnesses.push(witness_suite(
                &ctx,
                common.levels,
                &common.opts(),
                common.workers,
            )?);
            let spec = relations(ctx.q(), common.model, common.levels);
            report
                .counts
                .push(count_points(&ctx, &spec, &common.opts(), common.workers)?);
            report.remarks = Some(remark_suite(
                common.p,
                common.m,
                &common.opts(),
                common.workers,
            )?);
            report.reference_ratios = ratio_rows(ctx.q());
            report.finalize();
            report.emit(common.format, common.out.as_deref())?;
            Ok(report)
        }
    }
}

/// The reference constant rows shown with every report: q = 2, 3, 4 plus the
/// configured q.
fn ratio_rows(q: u64) -> Vec<(u64, towerlab_core::report::Rational)> {
    let mut qs = vec![2u64, 3, 4];
    if !qs.contains(&q) {
        qs.push(q);
    }
    qs.into_iter()
        .map(|q| (q, Report::reference_ratio(q)))
        .collect()
}

fn exit_for_error(e: &Error) -> u8 {
    match e {
        Error::PointCapExceeded { .. } | Error::SizeCapExceeded { .. } => 4,
        Error::NotPrime(_)
        | Error::BadFieldParam(_)
        | Error::UnknownIdentity(_)
        | Error::UnsupportedModel(_)
        | Error::LevelTooLow { .. }
        | Error::IndexTooSmall { .. } => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => ExitCode::from(report.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for_error(&e))
        }
    }
}
