//! The `ryuo` command line: single-position evaluation, best moves, Grundy
//! tables, verification sweeps and the HTTP service.
//!
//! Exit status is 0 on success, 1 when a verification sweep finds a
//! mismatch and 2 for usage or parameter errors.

use std::ffi::OsString;
use std::io::Write;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{GameState, Offset, Outcome, PassPosition, Position, RuleSet};
use crate::grundy::{
    grundy_closed_form, necessary_condition_witness, verify_equivalence,
    verify_literal_restricted_side, verify_same_game, verify_three_dim_p_positions, GrundyTable,
    Region, VerificationReport,
};
use crate::pass::{pass_grundy_table, verify_pass_theorem};
use crate::service;
use crate::strategy::{best_moves, needs_oracle, outcome};
use crate::table::{grundy_table_document, Layer};

/// Per-axis cap on oracle regions and tables.
pub const CLI_MAX_REGION: u64 = 4096;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ryuo", version, about = "Generalized Ryuo Nim engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Grundy value and outcome of one position
    Eval(PositionArgs),
    /// Optimal moves from one position
    Best(PositionArgs),
    /// Grundy table of a two-heap variant
    Table(TableArgs),
    /// Check closed forms against the brute-force oracle
    Verify(VerifyArgs),
    /// Run the HTTP service on 127.0.0.1
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
struct GameArgs {
    /// ryuo, pass-ryuo, restricted-side, restricted-hv, 3dim, 3dim-modified or ndim
    #[arg(long)]
    game: String,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    r: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
}

impl GameArgs {
    fn rules(&self) -> Result<RuleSet> {
        RuleSet::from_parts(&self.game, self.p, self.q, self.r, self.n)
    }
}

#[derive(Debug, Args)]
struct PositionArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Whether the pass is still available (pass-ryuo only)
    #[arg(long, action = ArgAction::Set, value_parser = clap::value_parser!(bool))]
    pass: Option<bool>,
    #[arg(required = true, num_args = 1.., value_name = "COORD")]
    coords: Vec<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Largest coordinate on both axes
    #[arg(long)]
    max: u64,
    /// pass or nopass (pass-ryuo only)
    #[arg(long)]
    layer: Option<String>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long, value_name = "FILE")]
    out: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Suite {
    Ryuo,
    Pass,
    Restricted,
    Ndim,
    Moveset,
    All,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// Largest coordinate of the sweep region, overriding the suite default
    #[arg(long)]
    max: Option<u64>,
    /// Print a JSON report instead of the summary
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long, env = "RYUO_PORT", default_value_t = service::DEFAULT_PORT)]
    port: u16,
}

/// Runs the command line with `args` (program name first).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Eval(args) => eval(&args, stdout),
        Command::Best(args) => best(&args, stdout),
        Command::Table(args) => table(&args, stdout),
        Command::Verify(args) => verify(&args, stdout, stderr),
        Command::Serve(args) => serve(&args, stderr),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Engine(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Engine(#[from] Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

type CliResult = std::result::Result<i32, CliError>;

fn state(rules: &RuleSet, args: &PositionArgs) -> Result<GameState> {
    let state = match (rules.is_pass(), args.pass) {
        (true, Some(pass)) => match args.coords[..] {
            [x, y] => GameState::Pass(PassPosition::new(x, y, pass)),
            _ => {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    got: args.coords.len(),
                })
            }
        },
        (true, None) => {
            return Err(Error::InvalidArgument("pass-ryuo needs --pass true|false".into()))
        }
        (false, Some(_)) => {
            return Err(Error::InvalidArgument(format!(
                "--pass only applies to pass-ryuo, not {}",
                rules.name()
            )))
        }
        (false, None) => {
            let pos = Position::new(args.coords.clone());
            rules.check_position(&pos)?;
            GameState::Plain(pos)
        }
    };
    if needs_oracle(rules) || matches!(rules, RuleSet::ThreeDim | RuleSet::PassRyuo { .. }) {
        if let Some(&c) = state.coords().iter().find(|&&c| c > CLI_MAX_REGION) {
            return Err(Error::InvalidArgument(format!(
                "coordinate {c} exceeds the oracle cap of {CLI_MAX_REGION}"
            )));
        }
    }
    Ok(state)
}

fn eval(args: &PositionArgs, out: &mut dyn Write) -> CliResult {
    let rules = args.game.rules()?;
    let state = state(&rules, args)?;
    let line = match &state {
        GameState::Plain(pos) if rules.has_closed_form() => {
            let g = grundy_closed_form(&rules, pos)?;
            format!("grundy={g} outcome={}", Outcome::from_grundy(g))
        }
        GameState::Pass(pos) => {
            let p = match rules {
                RuleSet::PassRyuo { p } => p,
                _ => unreachable!("pass positions only exist in the pass game"),
            };
            let region = Region::new(vec![pos.x, pos.y]);
            let g = pass_grundy_table(p, &region, pos.pass)?
                .get(&[pos.x, pos.y])
                .expect("position encloses itself");
            format!("outcome={} (grundy via oracle: {g})", outcome(&rules, &state)?)
        }
        GameState::Plain(pos) => {
            let g = GrundyTable::for_rules(&rules, Region::enclosing(pos))?.value(pos)?;
            if rules == RuleSet::ThreeDim {
                format!("outcome={} (grundy via oracle: {g})", outcome(&rules, &state)?)
            } else {
                format!("no closed form; oracle value: {g} outcome={}", Outcome::from_grundy(g))
            }
        }
    };
    writeln!(out, "{line}")?;
    Ok(EXIT_OK)
}

fn best(args: &PositionArgs, out: &mut dyn Write) -> CliResult {
    let rules = args.game.rules()?;
    let state = state(&rules, args)?;
    let moves = best_moves(&rules, &state)?;
    if moves.is_empty() {
        writeln!(out, "none (P-position)")?;
    } else {
        let targets: Vec<String> = moves.iter().map(|m| m.target.to_string()).collect();
        writeln!(out, "{}", targets.join(" "))?;
    }
    Ok(EXIT_OK)
}

fn table(args: &TableArgs, out: &mut dyn Write) -> CliResult {
    let rules = args.game.rules()?;
    if args.max > CLI_MAX_REGION {
        return Err(Error::RegionTooLarge(format!(
            "--max {} exceeds the cap of {CLI_MAX_REGION}",
            args.max
        ))
        .into());
    }
    let layer = args.layer.as_deref().map(str::parse::<Layer>).transpose()?;
    if layer.is_some() && !rules.is_pass() {
        return Err(Error::InvalidArgument(format!(
            "--layer only applies to pass-ryuo, not {}",
            rules.name()
        ))
        .into());
    }
    let doc = grundy_table_document(&rules, args.max, layer)?;
    let text = match args.format {
        Format::Csv => doc.to_csv(),
        Format::Json => doc.to_json(),
    };
    match &args.out {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}

const RYUO_MAX: u64 = 59;
const PASS_MAX: u64 = 39;
const RESTRICTED_MAX: u64 = 47;
const CUBE_MAX: u64 = 19;
const NDIM_MAX: u64 = 9;
const NDIM_CROSS_MAX: u64 = 14;

const RESTRICTED_SIDE: [(u64, u64); 7] = [(2, 4), (3, 3), (3, 6), (4, 8), (3, 4), (3, 7), (4, 5)];
const RESTRICTED_HV: [(u64, u64, u64); 3] = [(3, 3, 6), (2, 4, 2), (3, 6, 3)];

#[derive(Debug, Serialize)]
struct WitnessEntry {
    p: u64,
    dropped: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    position: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    formula: Option<u64>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct SuiteResult {
    suite: Suite,
    ok: bool,
    reports: Vec<VerificationReport>,
    /// Sweeps expected to disagree.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    negative_controls: Vec<VerificationReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    witnesses: Vec<WitnessEntry>,
    #[serde(skip)]
    summary: Vec<String>,
}

impl SuiteResult {
    fn new(suite: Suite) -> Self {
        SuiteResult {
            suite,
            ok: true,
            reports: Vec::new(),
            negative_controls: Vec::new(),
            witnesses: Vec::new(),
            summary: Vec::new(),
        }
    }

    fn add(&mut self, report: VerificationReport) {
        self.ok &= report.is_clean();
        self.reports.push(report);
    }

    fn mismatches(&self) -> usize {
        self.reports.iter().map(|r| r.mismatches.len()).sum()
    }
}

fn run_suite(suite: Suite, max: Option<u64>) -> Result<SuiteResult> {
    let square2 = |default| Region::square(2, max.unwrap_or(default));
    let mut result = SuiteResult::new(suite);
    match suite {
        Suite::Ryuo => {
            for p in 1..=6 {
                result.add(verify_equivalence(&RuleSet::GeneralizedRyuo { p }, square2(RYUO_MAX))?);
            }
            result.summary.push(format!("ryuo p=1..6: {} mismatches", result.mismatches()));
        }
        Suite::Pass => {
            for p in 3..=5 {
                result.add(verify_pass_theorem(p, &square2(PASS_MAX))?);
            }
            result
                .summary
                .push(format!("pass-ryuo p=3..5: {} mismatches", result.mismatches()));
        }
        Suite::Restricted => {
            for (p, q) in RESTRICTED_SIDE {
                result.add(verify_equivalence(&RuleSet::RestrictedSide { p, q }, square2(RESTRICTED_MAX))?);
            }
            for (p, q, r) in RESTRICTED_HV {
                result.add(verify_equivalence(&RuleSet::RestrictedHv { p, q, r }, square2(RESTRICTED_MAX))?);
            }
            result
                .summary
                .push(format!("restricted: {} mismatches", result.mismatches()));
            let control = verify_literal_restricted_side(2, 2, Region::square(2, 2))?;
            let found = control.mismatches.len();
            result.ok &= found >= 1;
            result.summary.push(format!(
                "negative control (literal restricted-side p=2 q=2, 3x3): {found} mismatches, expected at least 1"
            ));
            result.negative_controls.push(control);
        }
        Suite::Ndim => {
            let cube = Region::square(3, max.unwrap_or(CUBE_MAX));
            result.add(verify_equivalence(&RuleSet::ModifiedThreeDim, cube.clone())?);
            result.add(verify_three_dim_p_positions(cube)?);
            for p in [2, 3] {
                let rules = RuleSet::NDim { p, n: 4 };
                result.add(verify_equivalence(&rules, Region::square(4, max.unwrap_or(NDIM_MAX)))?);
            }
            result.add(verify_same_game(
                &RuleSet::NDim { p: 3, n: 3 },
                &RuleSet::ModifiedThreeDim,
                Region::square(3, max.unwrap_or(NDIM_CROSS_MAX)),
            )?);
            result.summary.push(format!("ndim: {} mismatches", result.mismatches()));
        }
        Suite::Moveset => {
            let mut missing = 0;
            for p in 3..=5 {
                for total in 1..p {
                    for s in 0..=total {
                        let dropped = Offset::planar(s, total - s);
                        let entry = match necessary_condition_witness(p, &dropped) {
                            Ok(w) => WitnessEntry {
                                p,
                                dropped: dropped.deltas().to_vec(),
                                position: Some(w.position.into_inner()),
                                oracle: Some(w.oracle),
                                formula: Some(w.formula),
                            },
                            Err(Error::NoWitness(_)) => {
                                missing += 1;
                                WitnessEntry {
                                    p,
                                    dropped: dropped.deltas().to_vec(),
                                    position: None,
                                    oracle: None,
                                    formula: None,
                                }
                            }
                            Err(e) => return Err(e),
                        };
                        result.witnesses.push(entry);
                    }
                }
            }
            result.ok &= missing == 0;
            result.summary.push(format!(
                "moveset p=3..5: {} of {} dropped offsets have a witness",
                result.witnesses.len() - missing,
                result.witnesses.len()
            ));
        }
        Suite::All => unreachable!("expanded by the caller"),
    }
    Ok(result)
}

fn region_label(region: &Region) -> String {
    let parts: Vec<String> = region.maxima().iter().map(|m| (m + 1).to_string()).collect();
    parts.join("x")
}

fn verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let suites = match args.suite {
        Suite::All => vec![Suite::Ryuo, Suite::Pass, Suite::Restricted, Suite::Ndim, Suite::Moveset],
        one => vec![one],
    };
    let mut results = Vec::new();
    for suite in suites {
        results.push(run_suite(suite, args.max)?);
    }
    let ok = results.iter().all(|r| r.ok);
    if args.json {
        let doc = serde_json::json!({ "ok": ok, "suites": results });
        writeln!(out, "{doc}")?;
    } else {
        for result in &results {
            for report in result.reports.iter().chain(&result.negative_controls) {
                writeln!(
                    out,
                    "{} on {}: {} checked, {} mismatches",
                    report.subject,
                    region_label(&report.region),
                    report.checked,
                    report.mismatches.len()
                )?;
            }
            for w in &result.witnesses {
                let dropped = Offset::new(w.dropped.clone()).expect("dropped offsets are nonzero");
                match (&w.position, w.oracle, w.formula) {
                    (Some(pos), Some(oracle), Some(formula)) => writeln!(
                        out,
                        "moveset p={} without {dropped}: witness {} oracle={oracle} formula={formula}",
                        w.p,
                        Position::new(pos.clone())
                    )?,
                    _ => writeln!(out, "moveset p={} without {dropped}: no witness", w.p)?,
                }
            }
            for line in &result.summary {
                writeln!(out, "{line}")?;
            }
        }
    }
    if !ok {
        for result in results.iter().filter(|r| !r.ok) {
            for report in &result.reports {
                for m in report.mismatches.iter().take(5) {
                    writeln!(
                        err,
                        "mismatch in {} at {}: oracle {} vs formula {}",
                        report.subject,
                        Position::new(m.position.clone()),
                        serde_json::to_string(&m.oracle).unwrap_or_default(),
                        serde_json::to_string(&m.formula).unwrap_or_default()
                    )?;
                }
            }
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_MISMATCH })
}

fn serve(args: &ServeArgs, err: &mut dyn Write) -> CliResult {
    let runtime = tokio::runtime::Runtime::new()?;
    let listener = match runtime.block_on(service::bind(args.port)) {
        Ok(l) => l,
        Err(e) => {
            writeln!(err, "error: cannot listen on 127.0.0.1:{}: {e}", args.port)?;
            return Ok(EXIT_USAGE);
        }
    };
    writeln!(err, "listening on http://127.0.0.1:{}", args.port)?;
    err.flush()?;
    runtime.block_on(service::serve(listener))?;
    Ok(EXIT_OK)
}
