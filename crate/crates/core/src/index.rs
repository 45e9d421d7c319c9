//! Domain types and the pure arithmetic of Min-Max rescaling and the
//! performance indices built on top of it.
//!
//! Four index kinds are supported:
//!
//! * [`IndexKind::Pir`]: the classic additive Performance Index Rating.
//! * [`IndexKind::RescaledPir`]: the PIR value itself Min-Max rescaled against
//!   an individual or joint context.
//! * [`IndexKind::Rees`]: a weighted sum of the eleven PIR variables, each one
//!   Min-Max rescaled first. Bounded by `[a_min, a_max]`.
//! * [`IndexKind::Pond`]: the PIR expression where every raw variable is
//!   multiplied by its own rescaled value.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Competition segment a stat line belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Regular,
    Playoff,
}

impl Phase {
    pub const ALL: [Phase; 2] = [Phase::Regular, Phase::Playoff];

    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Regular => "regular",
            Phase::Playoff => "playoff",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Phase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "regular" => Ok(Phase::Regular),
            "playoff" => Ok(Phase::Playoff),
            other => Err(Error::InvalidValue(format!(
                "unknown phase {other:?} (expected \"regular\" or \"playoff\")"
            ))),
        }
    }
}

/// The eleven box-score variables of the PIR expression, in index order.
///
/// The first six are added, the last five subtracted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variable {
    Points,
    Rebounds,
    Assists,
    Steals,
    BlocksMade,
    FoulsDrawn,
    FgMissed,
    FtMissed,
    Turnovers,
    BlocksReceived,
    FoulsCommitted,
}

impl Variable {
    pub const ALL: [Variable; 11] = [
        Variable::Points,
        Variable::Rebounds,
        Variable::Assists,
        Variable::Steals,
        Variable::BlocksMade,
        Variable::FoulsDrawn,
        Variable::FgMissed,
        Variable::FtMissed,
        Variable::Turnovers,
        Variable::BlocksReceived,
        Variable::FoulsCommitted,
    ];

    /// Position in [`Variable::ALL`] (0-based; weight `a_{i+1}`).
    pub fn ordinal(self) -> usize {
        self as usize
    }

    pub fn is_positive(self) -> bool {
        self.ordinal() < 6
    }

    pub fn name(self) -> &'static str {
        match self {
            Variable::Points => "points",
            Variable::Rebounds => "rebounds",
            Variable::Assists => "assists",
            Variable::Steals => "steals",
            Variable::BlocksMade => "blocks_made",
            Variable::FoulsDrawn => "fouls_drawn",
            Variable::FgMissed => "fg_missed",
            Variable::FtMissed => "ft_missed",
            Variable::Turnovers => "turnovers",
            Variable::BlocksReceived => "blocks_received",
            Variable::FoulsCommitted => "fouls_committed",
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Identity of a record within a dataset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RecordKey {
    pub player: String,
    pub season: String,
    pub phase: Phase,
}

impl RecordKey {
    pub fn new(player: impl Into<String>, season: impl Into<String>, phase: Phase) -> Self {
        Self {
            player: player.into(),
            season: season.into(),
            phase,
        }
    }
}

impl fmt::Display for RecordKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.player, self.season, self.phase)
    }
}

/// One player-season-phase record. All statistics are per-game averages.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatLine {
    pub player: String,
    pub season: String,
    pub phase: Phase,
    pub games: u32,
    pub points: f64,
    pub rebounds: f64,
    pub assists: f64,
    pub steals: f64,
    pub blocks_made: f64,
    pub fouls_drawn: f64,
    pub fg_missed: f64,
    pub ft_missed: f64,
    pub turnovers: f64,
    pub blocks_received: f64,
    pub fouls_committed: f64,
}

impl StatLine {
    /// A record with every statistic set to zero and one game played.
    pub fn zeroed(player: impl Into<String>, season: impl Into<String>, phase: Phase) -> Self {
        Self {
            player: player.into(),
            season: season.into(),
            phase,
            games: 1,
            points: 0.0,
            rebounds: 0.0,
            assists: 0.0,
            steals: 0.0,
            blocks_made: 0.0,
            fouls_drawn: 0.0,
            fg_missed: 0.0,
            ft_missed: 0.0,
            turnovers: 0.0,
            blocks_received: 0.0,
            fouls_committed: 0.0,
        }
    }

    pub fn key(&self) -> RecordKey {
        RecordKey::new(self.player.clone(), self.season.clone(), self.phase)
    }

    pub fn get(&self, var: Variable) -> f64 {
        match var {
            Variable::Points => self.points,
            Variable::Rebounds => self.rebounds,
            Variable::Assists => self.assists,
            Variable::Steals => self.steals,
            Variable::BlocksMade => self.blocks_made,
            Variable::FoulsDrawn => self.fouls_drawn,
            Variable::FgMissed => self.fg_missed,
            Variable::FtMissed => self.ft_missed,
            Variable::Turnovers => self.turnovers,
            Variable::BlocksReceived => self.blocks_received,
            Variable::FoulsCommitted => self.fouls_committed,
        }
    }

    pub fn set(&mut self, var: Variable, value: f64) {
        let slot = match var {
            Variable::Points => &mut self.points,
            Variable::Rebounds => &mut self.rebounds,
            Variable::Assists => &mut self.assists,
            Variable::Steals => &mut self.steals,
            Variable::BlocksMade => &mut self.blocks_made,
            Variable::FoulsDrawn => &mut self.fouls_drawn,
            Variable::FgMissed => &mut self.fg_missed,
            Variable::FtMissed => &mut self.ft_missed,
            Variable::Turnovers => &mut self.turnovers,
            Variable::BlocksReceived => &mut self.blocks_received,
            Variable::FoulsCommitted => &mut self.fouls_committed,
        };
        *slot = value;
    }

    /// Checks the record invariants: at least one game, every statistic finite and non-negative.
    pub fn validate(&self) -> Result<()> {
        if self.games < 1 {
            return Err(Error::InvalidValue(format!(
                "{}: games must be >= 1",
                self.key()
            )));
        }
        for var in Variable::ALL {
            let v = self.get(var);
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidValue(format!(
                    "{}: {var} = {v} (must be finite and >= 0)",
                    self.key()
                )));
            }
        }
        Ok(())
    }

    /// Starting year of the season label (`"1988-89"` -> 1988).
    pub fn start_year(&self) -> Option<i32> {
        season_start_year(&self.season)
    }
}

/// Parses the starting year out of a `YYYY-YY` season label.
pub fn season_start_year(label: &str) -> Option<i32> {
    let (start, end) = label.split_once('-')?;
    if start.len() != 4 || end.len() != 2 {
        return None;
    }
    if !start.bytes().chain(end.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    start.parse().ok()
}

/// Classic PIR: positive actions minus negative actions.
pub fn compute_pir(s: &StatLine) -> f64 {
    s.points + s.rebounds + s.assists + s.steals + s.blocks_made + s.fouls_drawn
        - s.fg_missed
        - s.ft_missed
        - s.turnovers
        - s.blocks_received
        - s.fouls_committed
}

/// What [`minmax_rescale`] returns when the reference range is a single point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegeneratePolicy {
    /// Return this constant (the default is the midpoint 0.5).
    Constant(f64),
    /// Refuse to rescale against a degenerate range.
    Reject,
}

impl Default for DegeneratePolicy {
    fn default() -> Self {
        DegeneratePolicy::Constant(0.5)
    }
}

/// Min-Max rescaling of `x` against `[min, max]`.
///
/// Inputs outside the range are clamped to the nearest bound first, so the
/// result always lies in `[0, 1]`.
pub fn minmax_rescale(x: f64, min: f64, max: f64, degenerate: DegeneratePolicy) -> Result<f64> {
    if !x.is_finite() || !min.is_finite() || !max.is_finite() {
        return Err(Error::InvalidValue(format!(
            "non-finite input to rescale (x={x}, min={min}, max={max})"
        )));
    }
    if min > max {
        return Err(Error::InvertedBounds { min, max });
    }
    if min == max {
        return match degenerate {
            DegeneratePolicy::Constant(v) => Ok(v),
            DegeneratePolicy::Reject => Err(Error::InvalidValue(format!(
                "degenerate range [{min}, {max}]"
            ))),
        };
    }
    let clamped = x.clamp(min, max);
    Ok((clamped - min) / (max - min))
}

/// Closed reference interval of a variable or index.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub min: f64,
    pub max: f64,
}

impl Bounds {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() {
            return Err(Error::InvalidValue(format!(
                "non-finite bounds [{min}, {max}]"
            )));
        }
        if min > max {
            return Err(Error::InvertedBounds { min, max });
        }
        Ok(Self { min, max })
    }

    /// Exact extremes of a series, or `None` when it is empty.
    pub fn of<I: IntoIterator<Item = f64>>(values: I) -> Option<Self> {
        values.into_iter().fold(None, |acc, v| match acc {
            None => Some(Bounds { min: v, max: v }),
            Some(b) => Some(Bounds {
                min: b.min.min(v),
                max: b.max.max(v),
            }),
        })
    }

    pub fn width(&self) -> f64 {
        self.max - self.min
    }

    pub fn is_degenerate(&self) -> bool {
        self.min == self.max
    }

    /// Both ends are exactly zero: the variable is absent from the source.
    pub fn is_zeroed(&self) -> bool {
        self.min == 0.0 && self.max == 0.0
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.min && x <= self.max
    }
}

/// Key under which a context stores bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKey {
    Variable(Variable),
    Pir,
}

impl fmt::Display for BoundKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundKey::Variable(v) => write!(f, "{v}"),
            BoundKey::Pir => f.write_str("pir"),
        }
    }
}

/// Whose records define the reference bounds.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    Individual(String),
    Joint,
}

impl Scope {
    pub fn kind(&self) -> ScopeKind {
        match self {
            Scope::Individual(_) => ScopeKind::Individual,
            Scope::Joint => ScopeKind::Joint,
        }
    }
}

/// [`Scope`] without the player attached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScopeKind {
    Individual,
    Joint,
}

impl ScopeKind {
    pub const ALL: [ScopeKind; 2] = [ScopeKind::Individual, ScopeKind::Joint];

    pub fn as_str(self) -> &'static str {
        match self {
            ScopeKind::Individual => "individual",
            ScopeKind::Joint => "joint",
        }
    }
}

impl fmt::Display for ScopeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Whether bounds are kept for each of the eleven variables or for the PIR value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    PerVariable,
    WholeIndex,
}

/// Reference bounds used for rescaling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RescaleContext {
    pub scope: Scope,
    pub target: Target,
    bounds: BTreeMap<BoundKey, Bounds>,
    pub degenerate: DegeneratePolicy,
}

impl RescaleContext {
    pub fn new(scope: Scope, target: Target) -> Self {
        Self {
            scope,
            target,
            bounds: BTreeMap::new(),
            degenerate: DegeneratePolicy::default(),
        }
    }

    pub fn with_degenerate(mut self, policy: DegeneratePolicy) -> Self {
        self.degenerate = policy;
        self
    }

    pub fn insert(&mut self, key: BoundKey, bounds: Bounds) {
        self.bounds.insert(key, bounds);
    }

    /// Builds a context whose bounds are the exact extremes over `records`.
    ///
    /// Which records to pass (player filter, exclusions) is the caller's concern.
    pub fn from_records<'a, I>(scope: Scope, target: Target, records: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a StatLine>,
        I::IntoIter: Clone,
    {
        let records = records.into_iter();
        let mut ctx = Self::new(scope, target);
        match target {
            Target::WholeIndex => {
                let b = Bounds::of(records.map(compute_pir))
                    .ok_or_else(|| Error::NoData("no records to build bounds from".into()))?;
                ctx.insert(BoundKey::Pir, b);
            }
            Target::PerVariable => {
                for var in Variable::ALL {
                    let b = Bounds::of(records.clone().map(|s| s.get(var)))
                        .ok_or_else(|| Error::NoData("no records to build bounds from".into()))?;
                    ctx.insert(BoundKey::Variable(var), b);
                }
            }
        }
        Ok(ctx)
    }

    pub fn bounds(&self, key: BoundKey) -> Result<Bounds> {
        self.bounds
            .get(&key)
            .copied()
            .ok_or(Error::IncompleteContext(key))
    }

    pub fn iter(&self) -> impl Iterator<Item = (BoundKey, Bounds)> + '_ {
        self.bounds.iter().map(|(k, b)| (*k, *b))
    }

    pub fn rescale(&self, key: BoundKey, x: f64) -> Result<f64> {
        let b = self.bounds(key)?;
        minmax_rescale(x, b.min, b.max, self.degenerate)
    }

    /// Keys whose range collapses to a single point.
    pub fn degenerate_keys(&self) -> Vec<BoundKey> {
        self.bounds
            .iter()
            .filter(|(_, b)| b.is_degenerate())
            .map(|(k, _)| *k)
            .collect()
    }

    /// A variable identically zero in the records behind this context.
    pub fn is_zeroed(&self, var: Variable) -> bool {
        self.bounds
            .get(&BoundKey::Variable(var))
            .is_some_and(Bounds::is_zeroed)
    }

    fn require_per_variable(&self) -> Result<()> {
        for var in Variable::ALL {
            self.bounds(BoundKey::Variable(var))?;
        }
        Ok(())
    }
}

/// The eleven non-negative weights `a_1..a_11` of the weighted rescaled index.
///
/// Weights of the negative group are stored as magnitudes and applied with
/// subtraction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightProfile {
    a: [f64; 11],
}

impl WeightProfile {
    pub fn new(a: [f64; 11]) -> Result<Self> {
        for (i, w) in a.iter().enumerate() {
            if !w.is_finite() || *w < 0.0 {
                return Err(Error::InvalidWeights(format!(
                    "a_{} = {w} (weights must be finite and >= 0)",
                    i + 1
                )));
            }
        }
        Ok(Self { a })
    }

    pub fn from_slice(a: &[f64]) -> Result<Self> {
        let arr: [f64; 11] = a
            .try_into()
            .map_err(|_| Error::InvalidWeights(format!("expected 11 weights, got {}", a.len())))?;
        Self::new(arr)
    }

    pub fn unit() -> Self {
        Self { a: [1.0; 11] }
    }

    pub fn get(&self, var: Variable) -> f64 {
        self.a[var.ordinal()]
    }

    pub fn as_array(&self) -> &[f64; 11] {
        &self.a
    }

    /// `a_1 + ... + a_6`.
    pub fn a_max(&self) -> f64 {
        self.a[..6].iter().sum()
    }

    /// `-(a_7 + ... + a_11)`.
    pub fn a_min(&self) -> f64 {
        -self.a[6..].iter().sum::<f64>()
    }

    /// Weights actually applied under `ctx`: variables identically zero there get 0.
    pub fn effective(&self, ctx: &RescaleContext) -> WeightProfile {
        let mut a = self.a;
        for var in Variable::ALL {
            if ctx.is_zeroed(var) {
                a[var.ordinal()] = 0.0;
            }
        }
        WeightProfile { a }
    }
}

impl Default for WeightProfile {
    fn default() -> Self {
        Self::unit()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexKind {
    Pir,
    RescaledPir,
    Rees,
    Pond,
}

impl IndexKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IndexKind::Pir => "pir",
            IndexKind::RescaledPir => "rescaled-pir",
            IndexKind::Rees => "rees",
            IndexKind::Pond => "pond",
        }
    }

    /// Bounds target the index needs, `None` for raw PIR.
    pub fn target(self) -> Option<Target> {
        match self {
            IndexKind::Pir => None,
            IndexKind::RescaledPir => Some(Target::WholeIndex),
            IndexKind::Rees | IndexKind::Pond => Some(Target::PerVariable),
        }
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A computed index value plus the metadata needed to interpret it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexResult {
    pub kind: IndexKind,
    pub value: f64,
    pub scope: Option<Scope>,
    /// `(lower, upper)` when the index kind has fixed bounds.
    pub bounds: Option<(f64, f64)>,
    /// The record was dropped from bound computation as anomalous.
    pub excluded: bool,
    /// Some rescaled term fell back to the degenerate policy.
    pub degenerate: bool,
}

impl IndexResult {
    pub fn mark_excluded(mut self, excluded: bool) -> Self {
        self.excluded = excluded;
        self
    }
}

pub fn compute_plain_pir(s: &StatLine) -> IndexResult {
    IndexResult {
        kind: IndexKind::Pir,
        value: compute_pir(s),
        scope: None,
        bounds: None,
        excluded: false,
        degenerate: false,
    }
}

/// PIR rescaled against a whole-index context.
pub fn compute_rescaled_pir(s: &StatLine, ctx: &RescaleContext) -> Result<IndexResult> {
    let b = ctx.bounds(BoundKey::Pir)?;
    Ok(IndexResult {
        kind: IndexKind::RescaledPir,
        value: ctx.rescale(BoundKey::Pir, compute_pir(s))?,
        scope: Some(ctx.scope.clone()),
        bounds: Some((0.0, 1.0)),
        excluded: false,
        degenerate: b.is_degenerate(),
    })
}

/// Rescales a series of PIR values against the context's PIR bounds.
pub fn rescale_index(pir_values: &[f64], ctx: &RescaleContext) -> Result<Vec<f64>> {
    if pir_values.is_empty() {
        return Err(Error::NoData("empty PIR series".into()));
    }
    let b = ctx.bounds(BoundKey::Pir)?;
    pir_values
        .iter()
        .map(|&x| minmax_rescale(x, b.min, b.max, ctx.degenerate))
        .collect()
}

/// Weighted sum of the rescaled variables: positive group added, negative group subtracted.
pub fn compute_pir_rees(
    s: &StatLine,
    ctx: &RescaleContext,
    w: &WeightProfile,
) -> Result<IndexResult> {
    ctx.require_per_variable()?;
    let eff = w.effective(ctx);
    let mut positive = 0.0;
    let mut negative = 0.0;
    let mut degenerate = false;
    for var in Variable::ALL {
        let weight = eff.get(var);
        if weight == 0.0 {
            continue;
        }
        let key = BoundKey::Variable(var);
        degenerate |= ctx.bounds(key)?.is_degenerate();
        let term = weight * ctx.rescale(key, s.get(var))?;
        if var.is_positive() {
            positive += term;
        } else {
            negative += term;
        }
    }
    Ok(IndexResult {
        kind: IndexKind::Rees,
        value: positive - negative,
        scope: Some(ctx.scope.clone()),
        bounds: Some((eff.a_min(), eff.a_max())),
        excluded: false,
        degenerate,
    })
}

/// PIR where every raw variable is weighted by its own rescaled value.
pub fn compute_pir_pond(s: &StatLine, ctx: &RescaleContext) -> Result<IndexResult> {
    ctx.require_per_variable()?;
    let mut positive = 0.0;
    let mut negative = 0.0;
    let mut degenerate = false;
    for var in Variable::ALL {
        if ctx.is_zeroed(var) {
            continue;
        }
        let key = BoundKey::Variable(var);
        degenerate |= ctx.bounds(key)?.is_degenerate();
        let raw = s.get(var);
        let term = ctx.rescale(key, raw)? * raw;
        if var.is_positive() {
            positive += term;
        } else {
            negative += term;
        }
    }
    Ok(IndexResult {
        kind: IndexKind::Pond,
        value: positive - negative,
        scope: Some(ctx.scope.clone()),
        bounds: None,
        excluded: false,
        degenerate,
    })
}

/// Average rescaled points value, i.e. the mean weight a point carries in the
/// self-weighted index. `records` are the non-excluded seasons.
pub fn mean_point_weight(records: &[&StatLine], ctx: &RescaleContext) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::NoData("every record is excluded".into()));
    }
    let key = BoundKey::Variable(Variable::Points);
    let mut sum = 0.0;
    for s in records {
        sum += ctx.rescale(key, s.points)?;
    }
    Ok(sum / records.len() as f64)
}

/// Arithmetic mean, `None` for an empty slice.
pub fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}
