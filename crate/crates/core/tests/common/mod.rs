#![allow(dead_code)]

use std::path::PathBuf;

use pir_rescale::analysis::{per_player_bounds, point_weights, summarize, SummaryTable};
use pir_rescale::ingest::{load_dataset, load_exclusions, DatasetSchema};
use pir_rescale::{IndexKind, OutlierPolicy, Phase, ScopeKind, StatLine, Variable, WeightProfile};

pub const PLAYERS: [&str; 4] = ["LB", "EJ", "MJ", "KB"];

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn dataset_path() -> PathBuf {
    fixture_dir().join("four_players.csv")
}

pub fn exclusions_path() -> PathBuf {
    fixture_dir().join("exclusions.csv")
}

pub fn fixture() -> Vec<StatLine> {
    load_dataset(dataset_path(), &DatasetSchema::default()).expect("fixture loads")
}

pub fn published_exclusions() -> OutlierPolicy {
    OutlierPolicy::manual(load_exclusions(exclusions_path()).expect("exclusions load"))
}

/// Which of a summary cell's two means a reference value refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mean {
    With,
    Without,
}

/// One published value next to what the fixture yields.
#[derive(Clone, Debug)]
pub struct Cell {
    pub label: String,
    pub published: f64,
    pub computed: f64,
    /// Frozen computed value for cells outside tolerance.
    pub pinned: f64,
}

impl Cell {
    pub fn within(&self, tol: f64) -> bool {
        (self.computed - self.published).abs() <= tol
    }

    pub fn matches_pin(&self) -> bool {
        (self.computed - self.pinned).abs() <= PIN_TOL
    }
}

/// Tolerance for frozen fixture goldens (values are pinned to 6 decimals).
pub const PIN_TOL: f64 = 5e-6;

// (phase, scope, mean, [LB, EJ, MJ, KB] published, [LB, EJ, MJ, KB] pinned)
type Row = (Phase, ScopeKind, Mean, [f64; 4], [f64; 4]);

pub const TABLE1: [Row; 8] = [
    (
        Phase::Regular,
        ScopeKind::Individual,
        Mean::With,
        [0.614, 0.658, 0.527, 0.673],
        [0.580848, 0.621699, 0.528351, 0.677913],
    ),
    (
        Phase::Regular,
        ScopeKind::Individual,
        Mean::Without,
        [0.533, 0.555, 0.527, 0.652],
        [0.495370, 0.529570, 0.526455, 0.646595],
    ),
    (
        Phase::Regular,
        ScopeKind::Joint,
        Mean::With,
        [0.745, 0.744, 0.714, 0.475],
        [0.749602, 0.745889, 0.717011, 0.481552],
    ),
    (
        Phase::Regular,
        ScopeKind::Joint,
        Mean::Without,
        [0.722, 0.722, 0.751, 0.423],
        [0.725941, 0.720711, 0.750349, 0.419340],
    ),
    (
        Phase::Playoff,
        ScopeKind::Individual,
        Mean::With,
        [0.657, 0.637, 0.551, 0.683],
        [0.624776, 0.651459, 0.563854, 0.633040],
    ),
    (
        Phase::Playoff,
        ScopeKind::Individual,
        Mean::Without,
        [0.657, 0.649, 0.551, 0.536],
        [0.624776, 0.525926, 0.563854, 0.450265],
    ),
    (
        Phase::Playoff,
        ScopeKind::Joint,
        Mean::With,
        [0.732, 0.794, 0.847, 0.504],
        [0.704520, 0.794785, 0.847718, 0.493559],
    ),
    (
        Phase::Playoff,
        ScopeKind::Joint,
        Mean::Without,
        [0.591, 0.718, 0.766, 0.355],
        [0.572712, 0.741830, 0.779788, 0.368778],
    ),
];

pub const TABLE2: [Row; 4] = [
    (
        Phase::Regular,
        ScopeKind::Individual,
        Mean::With,
        [1.4137, 0.8914, 1.215, 1.357],
        [0.719274, 0.554735, 0.558288, 0.805981],
    ),
    (
        Phase::Regular,
        ScopeKind::Joint,
        Mean::With,
        [1.6264, 1.304, 0.822, -0.0199],
        [1.058040, 0.784483, 0.385844, -0.334199],
    ),
    (
        Phase::Playoff,
        ScopeKind::Individual,
        Mean::With,
        [0.942, 0.809, 1.164, 1.2109],
        [0.357660, 0.250400, 0.486939, 0.772048],
    ),
    (
        Phase::Playoff,
        ScopeKind::Joint,
        Mean::With,
        [1.179, 0.943, 0.451, -0.1857],
        [0.591185, 0.565365, 0.081477, -0.356439],
    ),
];

pub const TABLE3: [Row; 4] = [
    (
        Phase::Regular,
        ScopeKind::Individual,
        Mean::With,
        [15.995, 16.213, 17.035, 13.569],
        [16.326700, 15.779920, 16.757626, 13.684017],
    ),
    (
        Phase::Regular,
        ScopeKind::Joint,
        Mean::With,
        [17.627, 17.281, 17.515, 8.662],
        [17.805454, 17.391937, 17.514061, 8.643765],
    ),
    (
        Phase::Playoff,
        ScopeKind::Individual,
        Mean::With,
        [15.521, 13.842, 10.871, 15.139],
        [15.883325, 12.876449, 9.591597, 15.078669],
    ),
    (
        Phase::Playoff,
        ScopeKind::Joint,
        Mean::With,
        [11.888, 14.7633, 16.719, 5.656],
        [11.423932, 15.366307, 17.083714, 5.635283],
    ),
];

/// Playoff scoring extremes per player: (min, max).
pub const TABLE4: [(&str, f64, f64); 4] = [
    ("LB", 11.3, 27.5),
    ("EJ", 15.3, 25.2),
    ("MJ", 29.3, 43.7),
    ("KB", 8.2, 32.8),
];

/// Mean point weight, joint playoff context: (player, published, pinned).
pub const POINT_WEIGHTS: [(&str, f64, f64); 4] = [
    ("LB", 0.3915, 0.391548),
    ("EJ", 0.3113, 0.311376),
    ("MJ", 0.7287, 0.728711),
    ("KB", 0.4702, 0.470235),
];

pub fn table(records: &[StatLine], kind: IndexKind, policy: &OutlierPolicy) -> SummaryTable {
    let w = WeightProfile::unit();
    let ind =
        summarize(records, kind, ScopeKind::Individual, policy, &w).expect("individual summary");
    let joint = summarize(records, kind, ScopeKind::Joint, policy, &w).expect("joint summary");
    ind.merge(joint)
}

fn cells_for(name: &str, t: &SummaryTable, rows: &[Row]) -> Vec<Cell> {
    let mut out = Vec::new();
    for (phase, scope, which, published, pinned) in rows {
        for (i, player) in PLAYERS.iter().enumerate() {
            let c = t.cell(*phase, *scope, player).expect("cell present");
            let computed = match which {
                Mean::With => c.mean_with_outliers,
                Mean::Without => c.mean_without_outliers,
            };
            let suffix = if *which == Mean::Without {
                " (excl.)"
            } else {
                ""
            };
            out.push(Cell {
                label: format!("{name} {phase}/{scope} {player}{suffix}"),
                published: published[i],
                computed,
                pinned: pinned[i],
            });
        }
    }
    out
}

pub fn table1_cells(records: &[StatLine]) -> Vec<Cell> {
    let t = table(records, IndexKind::RescaledPir, &published_exclusions());
    cells_for("T1", &t, &TABLE1)
}

pub fn table2_cells(records: &[StatLine]) -> Vec<Cell> {
    let t = table(records, IndexKind::Rees, &published_exclusions());
    cells_for("T2", &t, &TABLE2)
}

pub fn table3_cells(records: &[StatLine]) -> Vec<Cell> {
    let t = table(records, IndexKind::Pond, &published_exclusions());
    cells_for("T3", &t, &TABLE3)
}

pub fn point_weight_cells(records: &[StatLine]) -> Vec<Cell> {
    let got = point_weights(
        records,
        Phase::Playoff,
        ScopeKind::Joint,
        &OutlierPolicy::none(),
    )
    .expect("point weights");
    POINT_WEIGHTS
        .iter()
        .map(|(player, published, pinned)| Cell {
            label: format!("point weight {player}"),
            published: *published,
            computed: got.iter().find(|(p, _)| p == player).expect("player").1,
            pinned: *pinned,
        })
        .collect()
}

/// Playoff points extremes per player as computed from the fixture.
pub fn table4_computed(records: &[StatLine]) -> Vec<(String, f64, f64)> {
    per_player_bounds(
        records,
        Phase::Playoff,
        Variable::Points,
        &OutlierPolicy::none(),
    )
    .expect("bounds")
    .into_iter()
    .map(|(p, b)| (p, b.min, b.max))
    .collect()
}
