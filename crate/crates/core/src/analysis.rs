//! Context building and the aggregate views over a dataset: per-record
//! scores, per-player summary tables, rankings and season trajectories.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{
    compute_pir_pond, compute_pir_rees, compute_plain_pir, compute_rescaled_pir, mean,
    mean_point_weight, BoundKey, Bounds, IndexKind, IndexResult, Phase, RescaleContext, Scope,
    ScopeKind, StatLine, Target, Variable, WeightProfile,
};
use crate::outliers::{apply_policy, OutlierPolicy, Partition};

/// Players in order of first appearance.
pub fn players(records: &[StatLine]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for s in records {
        if !out.iter().any(|p| p == &s.player) {
            out.push(s.player.clone());
        }
    }
    out
}

fn in_scope(s: &StatLine, phase: Phase, scope: &Scope) -> bool {
    s.phase == phase
        && match scope {
            Scope::Individual(p) => &s.player == p,
            Scope::Joint => true,
        }
}

fn context_from_kept(
    kept: &[&StatLine],
    phase: Phase,
    scope: &Scope,
    target: Target,
) -> Result<RescaleContext> {
    let in_scope: Vec<&StatLine> = kept
        .iter()
        .copied()
        .filter(|s| in_scope(s, phase, scope))
        .collect();
    if in_scope.is_empty() {
        let who = match scope {
            Scope::Individual(p) => p.as_str(),
            Scope::Joint => "all players",
        };
        return Err(Error::NoData(format!("no data in scope ({who}, {phase})")));
    }
    RescaleContext::from_records(scope.clone(), target, in_scope)
}

/// Reference bounds for `phase` and `scope`, taken from the records `policy` keeps.
pub fn build_context(
    records: &[StatLine],
    phase: Phase,
    scope: &Scope,
    target: Target,
    policy: &OutlierPolicy,
) -> Result<RescaleContext> {
    let partition = apply_policy(records, policy)?;
    context_from_kept(&partition.kept, phase, scope, target)
}

fn scope_for(kind: ScopeKind, player: &str) -> Scope {
    match kind {
        ScopeKind::Individual => Scope::Individual(player.to_string()),
        ScopeKind::Joint => Scope::Joint,
    }
}

fn score(
    kind: IndexKind,
    s: &StatLine,
    ctx: Option<&RescaleContext>,
    weights: &WeightProfile,
) -> Result<IndexResult> {
    let need = || Error::NoData(format!("{kind} needs a rescaling context"));
    match kind {
        IndexKind::Pir => Ok(compute_plain_pir(s)),
        IndexKind::RescaledPir => compute_rescaled_pir(s, ctx.ok_or_else(need)?),
        IndexKind::Rees => compute_pir_rees(s, ctx.ok_or_else(need)?, weights),
        IndexKind::Pond => compute_pir_pond(s, ctx.ok_or_else(need)?),
    }
}

/// Lazily built contexts for one partition, keyed by phase and scope.
struct Contexts<'p, 'a> {
    partition: &'p Partition<'a>,
    target: Option<Target>,
    cache: HashMap<(Phase, Scope), RescaleContext>,
}

impl<'p, 'a> Contexts<'p, 'a> {
    fn new(partition: &'p Partition<'a>, kind: IndexKind) -> Self {
        Self {
            partition,
            target: kind.target(),
            cache: HashMap::new(),
        }
    }

    fn get(&mut self, phase: Phase, scope: Scope) -> Result<Option<&RescaleContext>> {
        let Some(target) = self.target else {
            return Ok(None);
        };
        let key = (phase, scope);
        if !self.cache.contains_key(&key) {
            let ctx = context_from_kept(&self.partition.kept, phase, &key.1, target)?;
            self.cache.insert(key.clone(), ctx);
        }
        Ok(self.cache.get(&key))
    }
}

/// One record's index value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordScore {
    pub player: String,
    pub season: String,
    pub phase: Phase,
    pub value: f64,
    pub excluded: bool,
    pub degenerate: bool,
}

/// Index value of every record (optionally one phase only), in dataset order.
///
/// Excluded records are scored against the kept bounds (and thereby clamped)
/// when the policy says so, and omitted otherwise.
pub fn evaluate(
    records: &[StatLine],
    kind: IndexKind,
    scope: ScopeKind,
    policy: &OutlierPolicy,
    weights: &WeightProfile,
    phase: Option<Phase>,
) -> Result<Vec<RecordScore>> {
    let partition = apply_policy(records, policy)?;
    let mut contexts = Contexts::new(&partition, kind);
    let mut out = Vec::new();
    for s in records {
        if phase.is_some_and(|p| p != s.phase) {
            continue;
        }
        let excluded = partition.is_excluded(s);
        if excluded && !policy.clamp_excluded {
            continue;
        }
        let ctx = contexts.get(s.phase, scope_for(scope, &s.player))?;
        let r = score(kind, s, ctx, weights)?;
        out.push(RecordScore {
            player: s.player.clone(),
            season: s.season.clone(),
            phase: s.phase,
            value: r.value,
            excluded,
            degenerate: r.degenerate,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryCell {
    /// Mean over every season, bounds from every season.
    pub mean_with_outliers: f64,
    /// Mean over kept seasons, bounds from kept seasons.
    pub mean_without_outliers: f64,
    pub seasons: Vec<String>,
    pub excluded: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub phase: Phase,
    pub scope: ScopeKind,
    pub cells: BTreeMap<String, SummaryCell>,
}

/// Per-player index means laid out as phase x scope rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryTable {
    pub kind: IndexKind,
    pub players: Vec<String>,
    pub rows: Vec<SummaryRow>,
}

impl SummaryTable {
    pub fn row(&self, phase: Phase, scope: ScopeKind) -> Option<&SummaryRow> {
        self.rows
            .iter()
            .find(|r| r.phase == phase && r.scope == scope)
    }

    pub fn cell(&self, phase: Phase, scope: ScopeKind, player: &str) -> Option<&SummaryCell> {
        self.row(phase, scope)?.cells.get(player)
    }

    /// Appends the rows of `other`, keeping rows ordered phase-major.
    pub fn merge(mut self, other: SummaryTable) -> SummaryTable {
        for p in other.players {
            if !self.players.contains(&p) {
                self.players.push(p);
            }
        }
        self.rows.extend(other.rows);
        self.rows.sort_by_key(|r| (r.phase, r.scope));
        self
    }
}

/// Per player: mean, all seasons, excluded seasons.
type PlayerMeans = BTreeMap<String, (f64, Vec<String>, Vec<String>)>;

fn player_means(
    records: &[StatLine],
    partition: &Partition<'_>,
    kind: IndexKind,
    phase: Phase,
    scope: ScopeKind,
    weights: &WeightProfile,
    players: &[String],
) -> Result<PlayerMeans> {
    let mut contexts = Contexts::new(partition, kind);
    let mut out = BTreeMap::new();
    for player in players {
        let mut values = Vec::new();
        let mut seasons = Vec::new();
        let mut excluded = Vec::new();
        for s in records
            .iter()
            .filter(|s| s.phase == phase && &s.player == player)
        {
            seasons.push(s.season.clone());
            if partition.is_excluded(s) {
                excluded.push(s.season.clone());
                continue;
            }
            let ctx = contexts.get(phase, scope_for(scope, player))?;
            values.push(score(kind, s, ctx, weights)?.value);
        }
        if seasons.is_empty() {
            continue;
        }
        let m = mean(&values).ok_or_else(|| {
            Error::NoData(format!("every {phase} season of {player} is excluded"))
        })?;
        out.insert(player.clone(), (m, seasons, excluded));
    }
    Ok(out)
}

/// Mean index value per player for both phases, with and without the
/// policy's exclusions. Means weight every season equally.
pub fn summarize(
    records: &[StatLine],
    kind: IndexKind,
    scope: ScopeKind,
    policy: &OutlierPolicy,
    weights: &WeightProfile,
) -> Result<SummaryTable> {
    let everything = apply_policy(records, &OutlierPolicy::none())?;
    let filtered = apply_policy(records, policy)?;
    let players = players(records);
    let mut rows = Vec::new();
    for phase in Phase::ALL {
        if !records.iter().any(|s| s.phase == phase) {
            continue;
        }
        let with = player_means(records, &everything, kind, phase, scope, weights, &players)?;
        let without = player_means(records, &filtered, kind, phase, scope, weights, &players)?;
        let cells = with
            .into_iter()
            .map(|(player, (m_with, seasons, _))| {
                let (m_without, _, excluded) = &without[&player];
                let cell = SummaryCell {
                    mean_with_outliers: m_with,
                    mean_without_outliers: *m_without,
                    seasons,
                    excluded: excluded.clone(),
                };
                (player, cell)
            })
            .collect();
        rows.push(SummaryRow {
            phase,
            scope,
            cells,
        });
    }
    Ok(SummaryTable {
        kind,
        players,
        rows,
    })
}

/// Which of a cell's two means to rank on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeanSelector {
    WithOutliers,
    WithoutOutliers,
}

/// Players ordered by mean (with outliers), highest first; ties by identifier.
pub fn rank_players(
    table: &SummaryTable,
    phase: Phase,
    scope: ScopeKind,
) -> Result<Vec<(String, f64)>> {
    rank_players_by(table, phase, scope, MeanSelector::WithOutliers)
}

pub fn rank_players_by(
    table: &SummaryTable,
    phase: Phase,
    scope: ScopeKind,
    which: MeanSelector,
) -> Result<Vec<(String, f64)>> {
    let row = table
        .row(phase, scope)
        .ok_or_else(|| Error::MissingRow(format!("{phase} / {scope}")))?;
    let mut out: Vec<(String, f64)> = row
        .cells
        .iter()
        .map(|(p, c)| {
            let v = match which {
                MeanSelector::WithOutliers => c.mean_with_outliers,
                MeanSelector::WithoutOutliers => c.mean_without_outliers,
            };
            (p.clone(), v)
        })
        .collect();
    out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub season: String,
    pub value: f64,
    pub excluded: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySeries {
    pub player: String,
    pub phase: Phase,
    pub kind: IndexKind,
    pub scope: ScopeKind,
    /// Fixed bounds of the index kind, when it has them.
    pub bounds: Option<(f64, f64)>,
    pub points: Vec<TrajectoryPoint>,
}

impl TrajectorySeries {
    pub fn value(&self, season: &str) -> Option<f64> {
        self.points
            .iter()
            .find(|p| p.season == season)
            .map(|p| p.value)
    }

    /// Seasons strictly increasing and every value inside the kind's bounds.
    pub fn is_well_formed(&self) -> bool {
        let years: Vec<Option<i32>> = self
            .points
            .iter()
            .map(|p| crate::index::season_start_year(&p.season))
            .collect();
        let increasing = years.iter().all(Option::is_some) && years.windows(2).all(|w| w[0] < w[1]);
        let bounded = match self.bounds {
            Some((lo, hi)) => self.points.iter().all(|p| p.value >= lo && p.value <= hi),
            None => true,
        };
        increasing && bounded
    }
}

/// One player's index values season by season.
///
/// Joint scope needs the whole dataset, so `records` is every record and
/// `player` picks the series.
pub fn trajectory(
    records: &[StatLine],
    player: &str,
    phase: Phase,
    kind: IndexKind,
    scope: ScopeKind,
    policy: &OutlierPolicy,
    weights: &WeightProfile,
) -> Result<TrajectorySeries> {
    let partition = apply_policy(records, policy)?;
    let mut own: Vec<&StatLine> = records
        .iter()
        .filter(|s| s.phase == phase && s.player == player)
        .collect();
    if own.is_empty() {
        return Err(Error::NoData(format!("no {phase} records for {player}")));
    }
    own.sort_by_key(|s| s.start_year());
    let mut contexts = Contexts::new(&partition, kind);
    let mut bounds = None;
    let mut points = Vec::new();
    for s in own {
        let excluded = partition.is_excluded(s);
        if excluded && !policy.clamp_excluded {
            continue;
        }
        let ctx = contexts.get(phase, scope_for(scope, player))?;
        let r = score(kind, s, ctx, weights)?;
        bounds = r.bounds;
        points.push(TrajectoryPoint {
            season: s.season.clone(),
            value: r.value,
            excluded,
        });
    }
    Ok(TrajectorySeries {
        player: player.to_string(),
        phase,
        kind,
        scope,
        bounds,
        points,
    })
}

/// Mean rescaled-points value per player: the average weight a point carries
/// in the self-weighted index.
pub fn point_weights(
    records: &[StatLine],
    phase: Phase,
    scope: ScopeKind,
    policy: &OutlierPolicy,
) -> Result<Vec<(String, f64)>> {
    let partition = apply_policy(records, policy)?;
    let mut out = Vec::new();
    for player in players(records) {
        if !records
            .iter()
            .any(|s| s.phase == phase && s.player == player)
        {
            continue;
        }
        let sc = scope_for(scope, &player);
        let ctx = context_from_kept(&partition.kept, phase, &sc, Target::PerVariable)?;
        let kept: Vec<&StatLine> = partition
            .kept
            .iter()
            .copied()
            .filter(|s| s.phase == phase && s.player == player)
            .collect();
        out.push((player, mean_point_weight(&kept, &ctx)?));
    }
    Ok(out)
}

/// Each player's own extremes of one variable in one phase.
pub fn per_player_bounds(
    records: &[StatLine],
    phase: Phase,
    var: Variable,
    policy: &OutlierPolicy,
) -> Result<Vec<(String, Bounds)>> {
    let partition = apply_policy(records, policy)?;
    let mut out = Vec::new();
    for player in players(records) {
        let sc = Scope::Individual(player.clone());
        if let Ok(ctx) = context_from_kept(&partition.kept, phase, &sc, Target::PerVariable) {
            out.push((player, ctx.bounds(BoundKey::Variable(var))?));
        }
    }
    Ok(out)
}
