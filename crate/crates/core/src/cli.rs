//! Command-line front end.
//!
//! Every command renders its full output into memory first; nothing is
//! written to stdout (or to a plot file) unless the whole command succeeded.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analysis::{self, SummaryTable, TrajectorySeries};
use crate::error::{Error, Result};
use crate::index::{compute_pir, IndexKind, Phase, ScopeKind, StatLine, WeightProfile};
use crate::ingest::{load_dataset, load_exclusions, DatasetSchema};
use crate::outliers::{apply_policy, OutlierPolicy, DEFAULT_IQR_MULTIPLIER};
use crate::svg::render_trajectories;

/// Set to `always` to color table headers.
pub const COLOR_ENV: &str = "PIR_RESCALE_COLOR";

#[derive(Debug, Parser)]
#[command(
    name = "pir-rescale",
    version,
    about = "Min-Max rescaled basketball performance indices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a dataset (and optional exclusion list) and print a summary
    Validate(CommonArgs),
    /// Classic PIR per record
    Pir(IndexArgs),
    /// PIR rescaled against individual and joint bounds, per record
    Rescale(CommonArgs),
    /// Weighted sum of rescaled variables, per record
    Rees(IndexArgs),
    /// PIR weighted by each variable's own rescaled value, per record
    Pond(IndexArgs),
    /// List the records the outlier settings exclude
    Outliers(CommonArgs),
    /// Per-player means laid out as phase x scope rows
    Report(ReportArgs),
    /// One player's values season by season, optionally plotted as SVG
    Trajectory(TrajectoryArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Per-game season table (CSV)
    dataset: PathBuf,
    #[arg(long, value_enum, default_value_t = PhaseFilter::Both)]
    phase: PhaseFilter,
    /// Outlier handling; defaults to `manual` when --exclusions is given
    #[arg(long, value_enum)]
    outliers: Option<OutlierMethod>,
    /// Exclusion list (CSV with player, season, phase)
    #[arg(long)]
    exclusions: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_IQR_MULTIPLIER)]
    iqr_multiplier: f64,
    /// Omit excluded records instead of rescaling them with clamping
    #[arg(long)]
    no_clamp: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct IndexArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum, default_value_t = ScopeArg::Joint)]
    scope: ScopeArg,
    /// Eleven comma-separated weights, or a file holding them (default: all 1)
    #[arg(long)]
    weights: Option<String>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum, default_value_t = KindArg::RescaledPir)]
    kind: KindArg,
    /// Restrict to one scope (default: both)
    #[arg(long, value_enum)]
    scope: Option<ScopeArg>,
    #[arg(long)]
    weights: Option<String>,
}

#[derive(Debug, Args)]
struct TrajectoryArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    player: String,
    #[arg(long, value_enum, default_value_t = KindArg::RescaledPir)]
    kind: KindArg,
    /// Restrict to one scope (default: both)
    #[arg(long, value_enum)]
    scope: Option<ScopeArg>,
    #[arg(long)]
    weights: Option<String>,
    /// Write an SVG line chart here
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PhaseFilter {
    Regular,
    Playoff,
    Both,
}

impl PhaseFilter {
    fn phases(self) -> Vec<Phase> {
        match self {
            PhaseFilter::Regular => vec![Phase::Regular],
            PhaseFilter::Playoff => vec![Phase::Playoff],
            PhaseFilter::Both => Phase::ALL.to_vec(),
        }
    }

    fn single(self) -> Option<Phase> {
        match self {
            PhaseFilter::Regular => Some(Phase::Regular),
            PhaseFilter::Playoff => Some(Phase::Playoff),
            PhaseFilter::Both => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutlierMethod {
    None,
    Manual,
    Iqr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScopeArg {
    Individual,
    Joint,
}

impl From<ScopeArg> for ScopeKind {
    fn from(s: ScopeArg) -> Self {
        match s {
            ScopeArg::Individual => ScopeKind::Individual,
            ScopeArg::Joint => ScopeKind::Joint,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Pir,
    RescaledPir,
    Rees,
    Pond,
}

impl From<KindArg> for IndexKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Pir => IndexKind::Pir,
            KindArg::RescaledPir => IndexKind::RescaledPir,
            KindArg::Rees => IndexKind::Rees,
            KindArg::Pond => IndexKind::Pond,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Validate,
    Pir,
    Rescale,
    Rees,
    Pond,
    Outliers,
    Report,
    Trajectory,
}

/// Fully resolved settings of one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub dataset: PathBuf,
    pub command: CommandKind,
    pub kind: IndexKind,
    /// `None` means both scopes.
    pub scope: Option<ScopeKind>,
    pub phase: PhaseFilter,
    pub outliers: OutlierMethod,
    pub iqr_multiplier: f64,
    pub exclusions: Option<PathBuf>,
    pub clamp_excluded: bool,
    pub weights: WeightProfile,
    pub format: OutputFormat,
    pub player: Option<String>,
    pub plot: Option<PathBuf>,
}

impl RunConfig {
    fn from_cli(cli: Cli) -> Result<Self> {
        let (command, common, kind, scope, weights, player, plot) = match cli.command {
            Command::Validate(c) => (
                CommandKind::Validate,
                c,
                IndexKind::Pir,
                None,
                None,
                None,
                None,
            ),
            Command::Rescale(c) => (
                CommandKind::Rescale,
                c,
                IndexKind::RescaledPir,
                None,
                None,
                None,
                None,
            ),
            Command::Outliers(c) => (
                CommandKind::Outliers,
                c,
                IndexKind::Pir,
                None,
                None,
                None,
                None,
            ),
            Command::Pir(a) => (
                CommandKind::Pir,
                a.common,
                IndexKind::Pir,
                Some(a.scope.into()),
                a.weights,
                None,
                None,
            ),
            Command::Rees(a) => (
                CommandKind::Rees,
                a.common,
                IndexKind::Rees,
                Some(a.scope.into()),
                a.weights,
                None,
                None,
            ),
            Command::Pond(a) => (
                CommandKind::Pond,
                a.common,
                IndexKind::Pond,
                Some(a.scope.into()),
                a.weights,
                None,
                None,
            ),
            Command::Report(a) => (
                CommandKind::Report,
                a.common,
                a.kind.into(),
                a.scope.map(Into::into),
                a.weights,
                None,
                None,
            ),
            Command::Trajectory(a) => (
                CommandKind::Trajectory,
                a.common,
                a.kind.into(),
                a.scope.map(Into::into),
                a.weights,
                Some(a.player),
                a.plot,
            ),
        };
        let outliers = match (common.outliers, &common.exclusions) {
            (Some(m), _) => m,
            (None, Some(_)) => OutlierMethod::Manual,
            (None, None) => OutlierMethod::None,
        };
        let weights = match weights {
            Some(spec) => parse_weights(&spec)?,
            None => WeightProfile::unit(),
        };
        let cfg = RunConfig {
            dataset: common.dataset,
            command,
            kind,
            scope,
            phase: common.phase,
            outliers,
            iqr_multiplier: common.iqr_multiplier,
            exclusions: common.exclusions,
            clamp_excluded: !common.no_clamp,
            weights,
            format: common.format,
            player,
            plot,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.plot.is_some() && self.command != CommandKind::Trajectory {
            return Err(Error::InvalidPolicy(
                "--plot is only valid for trajectory".into(),
            ));
        }
        if self.outliers == OutlierMethod::Manual && self.exclusions.is_none() {
            return Err(Error::InvalidPolicy(
                "manual outlier mode needs --exclusions <file>".into(),
            ));
        }
        if self.outliers != OutlierMethod::Manual && self.exclusions.is_some() {
            return Err(Error::InvalidPolicy(
                "--exclusions only applies to manual outlier mode".into(),
            ));
        }
        Ok(())
    }

    fn policy(&self) -> Result<OutlierPolicy> {
        let policy = match self.outliers {
            OutlierMethod::None => OutlierPolicy::none(),
            OutlierMethod::Iqr => OutlierPolicy::iqr(self.iqr_multiplier)?,
            OutlierMethod::Manual => {
                let path = self.exclusions.as_ref().expect("checked in validate");
                OutlierPolicy::manual(load_exclusions(path)?)
            }
        };
        Ok(policy.with_clamp_excluded(self.clamp_excluded))
    }

    fn scopes(&self) -> Vec<ScopeKind> {
        match self.scope {
            Some(s) => vec![s],
            None => ScopeKind::ALL.to_vec(),
        }
    }
}

/// Inline comma-separated list, or the path of a file holding one.
fn parse_weights(spec: &str) -> Result<WeightProfile> {
    let path = Path::new(spec);
    let text = if !spec.contains(',') && path.is_file() {
        std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?
    } else {
        spec.to_string()
    };
    let values = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::InvalidWeights(format!("{t:?} is not a number")))
        })
        .collect::<Result<Vec<f64>>>()?;
    WeightProfile::from_slice(&values)
}

/// What a successful command produced.
#[derive(Debug, Default)]
pub struct Output {
    pub text: String,
    pub plot: Option<(PathBuf, String)>,
}

#[derive(Serialize)]
struct ScoreRow<'a> {
    player: &'a str,
    season: &'a str,
    phase: Phase,
    kind: IndexKind,
    scope: Option<ScopeKind>,
    value: f64,
    excluded: bool,
}

#[derive(Serialize)]
struct RescaleRow<'a> {
    player: &'a str,
    season: &'a str,
    phase: Phase,
    pir: f64,
    individual: f64,
    joint: f64,
    excluded: bool,
}

#[derive(Serialize)]
struct OutlierRow<'a> {
    player: &'a str,
    season: &'a str,
    phase: Phase,
    games: u32,
    pir: f64,
}

#[derive(Serialize)]
struct ValidateRow<'a> {
    player: &'a str,
    phase: Phase,
    records: usize,
    excluded: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub phase: Phase,
    pub scope: ScopeKind,
    pub player: String,
    pub mean_with_outliers: f64,
    pub mean_without_outliers: f64,
}

#[derive(Serialize)]
struct TrajectoryRow<'a> {
    player: &'a str,
    phase: Phase,
    kind: IndexKind,
    scope: ScopeKind,
    season: &'a str,
    value: f64,
    excluded: bool,
}

/// Rows of a summary table in machine-readable form.
pub fn report_rows(table: &SummaryTable) -> Vec<ReportRow> {
    let mut out = Vec::new();
    for row in &table.rows {
        for player in &table.players {
            if let Some(c) = row.cells.get(player) {
                out.push(ReportRow {
                    phase: row.phase,
                    scope: row.scope,
                    player: player.clone(),
                    mean_with_outliers: c.mean_with_outliers,
                    mean_without_outliers: c.mean_without_outliers,
                });
            }
        }
    }
    out
}

fn color_enabled() -> bool {
    std::env::var(COLOR_ENV).is_ok_and(|v| v.eq_ignore_ascii_case("always"))
}

fn render_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = String::new();
    let head = line(headers.to_vec());
    if color_enabled() {
        let _ = writeln!(out, "\x1b[1m{head}\x1b[0m");
    } else {
        let _ = writeln!(out, "{head}");
    }
    for row in rows {
        let _ = writeln!(out, "{}", line(row.iter().map(String::as_str).collect()));
    }
    out
}

fn fmt4(v: f64) -> String {
    format!("{v:.4}")
}

fn emit<T: Serialize>(
    format: OutputFormat,
    rows: &[T],
    headers: &[&str],
    table: impl Fn(&T) -> Vec<String>,
) -> Result<String> {
    match format {
        OutputFormat::Table => {
            let cells: Vec<Vec<String>> = rows.iter().map(table).collect();
            Ok(render_table(headers, &cells))
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            if rows.is_empty() {
                w.write_record(headers)?;
            }
            for r in rows {
                w.serialize(r)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io {
                path: "<output>".into(),
                source: e.into_error(),
            })?;
            Ok(String::from_utf8_lossy(&bytes).into_owned())
        }
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(rows)?;
            s.push('\n');
            Ok(s)
        }
    }
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "" }.to_string()
}

fn phase_records(records: &[StatLine], phase: PhaseFilter) -> Vec<&StatLine> {
    let phases = phase.phases();
    records
        .iter()
        .filter(|s| phases.contains(&s.phase))
        .collect()
}

fn cmd_validate(cfg: &RunConfig, records: &[StatLine], policy: &OutlierPolicy) -> Result<String> {
    let partition = apply_policy(records, policy)?;
    let mut rows = Vec::new();
    for phase in cfg.phase.phases() {
        for player in analysis::players(records) {
            let own: Vec<&StatLine> = records
                .iter()
                .filter(|s| s.phase == phase && s.player == player)
                .collect();
            if own.is_empty() {
                continue;
            }
            let excluded = own.iter().filter(|s| partition.is_excluded(s)).count();
            rows.push((player, phase, own.len(), excluded));
        }
    }
    let rows: Vec<ValidateRow> = rows
        .iter()
        .map(|(p, phase, n, x)| ValidateRow {
            player: p,
            phase: *phase,
            records: *n,
            excluded: *x,
        })
        .collect();
    let mut out = emit(
        cfg.format,
        &rows,
        &["player", "phase", "records", "excluded"],
        |r| {
            vec![
                r.player.to_string(),
                r.phase.to_string(),
                r.records.to_string(),
                r.excluded.to_string(),
            ]
        },
    )?;
    if cfg.format == OutputFormat::Table {
        let _ = writeln!(out, "ok: {} records valid", records.len());
    }
    Ok(out)
}

fn cmd_scores(cfg: &RunConfig, records: &[StatLine], policy: &OutlierPolicy) -> Result<String> {
    let scope = cfg.scope.unwrap_or(ScopeKind::Joint);
    let scores = analysis::evaluate(
        records,
        cfg.kind,
        scope,
        policy,
        &cfg.weights,
        cfg.phase.single(),
    )?;
    let shown_scope = (cfg.kind != IndexKind::Pir).then_some(scope);
    let rows: Vec<ScoreRow> = scores
        .iter()
        .map(|s| ScoreRow {
            player: &s.player,
            season: &s.season,
            phase: s.phase,
            kind: cfg.kind,
            scope: shown_scope,
            value: s.value,
            excluded: s.excluded,
        })
        .collect();
    emit(
        cfg.format,
        &rows,
        &[
            "player", "season", "phase", "kind", "scope", "value", "excluded",
        ],
        |r| {
            vec![
                r.player.to_string(),
                r.season.to_string(),
                r.phase.to_string(),
                r.kind.to_string(),
                r.scope.map(|s| s.to_string()).unwrap_or_default(),
                fmt4(r.value),
                yes_no(r.excluded),
            ]
        },
    )
}

fn cmd_rescale(cfg: &RunConfig, records: &[StatLine], policy: &OutlierPolicy) -> Result<String> {
    let phase = cfg.phase.single();
    let w = &cfg.weights;
    let ind = analysis::evaluate(
        records,
        IndexKind::RescaledPir,
        ScopeKind::Individual,
        policy,
        w,
        phase,
    )?;
    let joint = analysis::evaluate(
        records,
        IndexKind::RescaledPir,
        ScopeKind::Joint,
        policy,
        w,
        phase,
    )?;
    let pir = analysis::evaluate(records, IndexKind::Pir, ScopeKind::Joint, policy, w, phase)?;
    let rows: Vec<RescaleRow> = ind
        .iter()
        .zip(&joint)
        .zip(&pir)
        .map(|((i, j), p)| RescaleRow {
            player: &i.player,
            season: &i.season,
            phase: i.phase,
            pir: p.value,
            individual: i.value,
            joint: j.value,
            excluded: i.excluded,
        })
        .collect();
    emit(
        cfg.format,
        &rows,
        &[
            "player",
            "season",
            "phase",
            "pir",
            "individual",
            "joint",
            "excluded",
        ],
        |r| {
            vec![
                r.player.to_string(),
                r.season.to_string(),
                r.phase.to_string(),
                fmt4(r.pir),
                fmt4(r.individual),
                fmt4(r.joint),
                yes_no(r.excluded),
            ]
        },
    )
}

fn cmd_outliers(cfg: &RunConfig, records: &[StatLine], policy: &OutlierPolicy) -> Result<String> {
    let partition = apply_policy(records, policy)?;
    let phases = cfg.phase.phases();
    let rows: Vec<OutlierRow> = partition
        .excluded
        .iter()
        .filter(|s| phases.contains(&s.phase))
        .map(|s| OutlierRow {
            player: &s.player,
            season: &s.season,
            phase: s.phase,
            games: s.games,
            pir: compute_pir(s),
        })
        .collect();
    emit(
        cfg.format,
        &rows,
        &["player", "season", "phase", "games", "pir"],
        |r| {
            vec![
                r.player.to_string(),
                r.season.to_string(),
                r.phase.to_string(),
                r.games.to_string(),
                fmt4(r.pir),
            ]
        },
    )
}

/// Summary table for the configured kind, scopes and phases.
pub fn build_report(
    cfg: &RunConfig,
    records: &[StatLine],
    policy: &OutlierPolicy,
) -> Result<SummaryTable> {
    let mut table: Option<SummaryTable> = None;
    for scope in cfg.scopes() {
        let t = analysis::summarize(records, cfg.kind, scope, policy, &cfg.weights)?;
        table = Some(match table {
            Some(acc) => acc.merge(t),
            None => t,
        });
    }
    let mut table = table.expect("at least one scope");
    let phases = cfg.phase.phases();
    table.rows.retain(|r| phases.contains(&r.phase));
    Ok(table)
}

fn cmd_report(cfg: &RunConfig, records: &[StatLine], policy: &OutlierPolicy) -> Result<String> {
    let table = build_report(cfg, records, policy)?;
    if cfg.format != OutputFormat::Table {
        let rows = report_rows(&table);
        return emit(cfg.format, &rows, &[], |_| vec![]);
    }
    let mut headers = vec!["phase", "scope"];
    headers.extend(table.players.iter().map(String::as_str));
    let rows: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|row| {
            let mut cells = vec![row.phase.to_string(), row.scope.to_string()];
            for p in &table.players {
                cells.push(match row.cells.get(p) {
                    Some(c) => format!(
                        "{} ({})",
                        fmt4(c.mean_with_outliers),
                        fmt4(c.mean_without_outliers)
                    ),
                    None => "-".to_string(),
                });
            }
            cells
        })
        .collect();
    let mut out = format!(
        "{} means; parenthesized: without excluded seasons\n",
        table.kind
    );
    out.push_str(&render_table(&headers, &rows));
    Ok(out)
}

fn cmd_trajectory(cfg: &RunConfig, records: &[StatLine], policy: &OutlierPolicy) -> Result<Output> {
    let player = cfg.player.as_deref().expect("trajectory has a player");
    let mut series: Vec<TrajectorySeries> = Vec::new();
    for phase in cfg.phase.phases() {
        if !records
            .iter()
            .any(|s| s.phase == phase && s.player == player)
        {
            continue;
        }
        for scope in cfg.scopes() {
            series.push(analysis::trajectory(
                records,
                player,
                phase,
                cfg.kind,
                scope,
                policy,
                &cfg.weights,
            )?);
        }
    }
    if series.is_empty() {
        return Err(Error::NoData(format!("no records for player {player}")));
    }
    let mut rows = Vec::new();
    for s in &series {
        for p in &s.points {
            rows.push(TrajectoryRow {
                player: &s.player,
                phase: s.phase,
                kind: s.kind,
                scope: s.scope,
                season: &p.season,
                value: p.value,
                excluded: p.excluded,
            });
        }
    }
    let text = emit(
        cfg.format,
        &rows,
        &[
            "player", "phase", "kind", "scope", "season", "value", "excluded",
        ],
        |r| {
            vec![
                r.player.to_string(),
                r.phase.to_string(),
                r.kind.to_string(),
                r.scope.to_string(),
                r.season.to_string(),
                fmt4(r.value),
                yes_no(r.excluded),
            ]
        },
    )?;
    let plot = cfg.plot.as_ref().map(|path| {
        let title = format!("{} {} by season", player, cfg.kind);
        (path.clone(), render_trajectories(&title, &series))
    });
    Ok(Output { text, plot })
}

/// Runs a resolved configuration without touching stdout.
pub fn execute(cfg: &RunConfig) -> Result<Output> {
    let records = load_dataset(&cfg.dataset, &DatasetSchema::default())?;
    if records.is_empty() {
        return Err(Error::NoData(format!(
            "{} has no records",
            cfg.dataset.display()
        )));
    }
    let policy = cfg.policy()?;
    if phase_records(&records, cfg.phase).is_empty() {
        return Err(Error::NoData("no records in the selected phase".into()));
    }
    let text = match cfg.command {
        CommandKind::Validate => cmd_validate(cfg, &records, &policy)?,
        CommandKind::Pir | CommandKind::Rees | CommandKind::Pond => {
            cmd_scores(cfg, &records, &policy)?
        }
        CommandKind::Rescale => cmd_rescale(cfg, &records, &policy)?,
        CommandKind::Outliers => cmd_outliers(cfg, &records, &policy)?,
        CommandKind::Report => cmd_report(cfg, &records, &policy)?,
        CommandKind::Trajectory => return cmd_trajectory(cfg, &records, &policy),
    };
    Ok(Output { text, plot: None })
}

/// Parses arguments into a configuration.
pub fn parse_args<I, T>(argv: I) -> std::result::Result<RunConfig, String>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| e.to_string())?;
    RunConfig::from_cli(cli).map_err(|e| e.to_string())
}

fn one_line(msg: &str) -> String {
    let first = msg
        .lines()
        .find(|l| !l.trim().is_empty())
        .unwrap_or("unknown error");
    let first = first.trim();
    first.strip_prefix("error: ").unwrap_or(first).to_string()
}

/// Entry point: returns the process exit status.
///
/// Errors are reported as a single `error: ...` line on `err`; on failure
/// nothing is written to `out`.
pub fn run<W: Write + ?Sized, E: Write + ?Sized>(argv: &[String], out: &mut W, err: &mut E) -> u8 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            let _ = writeln!(err, "error: {}", one_line(&e.to_string()));
            return 2;
        }
    };
    let result = RunConfig::from_cli(cli).and_then(|cfg| {
        let output = execute(&cfg)?;
        if let Some((path, svg)) = &output.plot {
            std::fs::write(path, svg).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
        }
        Ok(output)
    });
    match result {
        Ok(output) => {
            if out.write_all(output.text.as_bytes()).is_err() {
                return 1;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", one_line(&e.to_string()));
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_inline_and_invalid() {
        let w = parse_weights("3,2,1,1,1,1,1,1,1,1,1").unwrap();
        assert_eq!(w.as_array()[0], 3.0);
        assert!(parse_weights("1,1,1").is_err());
        assert!(parse_weights("1,1,1,1,1,1,1,1,1,1,-1").is_err());
        assert!(parse_weights("1,1,1,1,1,1,1,1,1,1,x").is_err());
    }

    #[test]
    fn weights_from_file() {
        let dir = std::env::temp_dir().join(format!("pir-w-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let f = dir.join("w.txt");
        std::fs::write(&f, "2 1 1 1 1 1\n1 1 1 1 1\n").unwrap();
        let w = parse_weights(f.to_str().unwrap()).unwrap();
        assert_eq!(w.a_max(), 7.0);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn unknown_subcommand_fails_with_one_line() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(&["pir-rescale".into(), "bogus".into()], &mut out, &mut err);
        assert_ne!(code, 0);
        assert!(out.is_empty());
        let msg = String::from_utf8(err).unwrap();
        assert_eq!(msg.lines().count(), 1, "{msg}");
        assert!(msg.starts_with("error: "));
    }

    #[test]
    fn plot_requires_trajectory_and_manual_requires_list() {
        assert!(parse_args(["p", "report", "x.csv", "--plot", "a.svg"]).is_err());
        assert!(parse_args(["p", "report", "x.csv", "--outliers", "manual"]).is_err());
        let cfg = parse_args(["p", "report", "x.csv", "--exclusions", "e.csv"]).unwrap();
        assert_eq!(cfg.outliers, OutlierMethod::Manual);
    }

    #[test]
    fn one_line_strips_prefix() {
        assert_eq!(one_line("error: bad thing\n\nUsage: x"), "bad thing");
    }

    #[test]
    fn table_rendering_aligns_columns() {
        let t = render_table(&["a", "bbb"], &[vec!["xxxx".into(), "1".into()]]);
        assert_eq!(t, "a     bbb\nxxxx  1\n");
    }
}
