//! CSV ingestion of per-game season tables.
//!
//! The expected layout mirrors the public per-game tables: one row per
//! player, season and phase, with attempts and makes instead of misses.
//! Misses are derived on load (`fg_missed = fga - fg`, `ft_missed = fta - ft`).

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::index::{season_start_year, Phase, RecordKey, StatLine};

/// Column layout of a dataset file. Header names match case-insensitively.
#[derive(Clone, Debug)]
pub struct DatasetSchema {
    pub required: Vec<&'static str>,
    /// Columns defaulting to 0 when absent.
    pub optional: Vec<&'static str>,
}

impl Default for DatasetSchema {
    fn default() -> Self {
        Self {
            required: vec![
                "player", "season", "phase", "games", "pts", "trb", "ast", "stl", "blk", "tov",
                "pf", "fga", "fg", "fta", "ft",
            ],
            optional: vec!["fouls_drawn", "blocks_received"],
        }
    }
}

// A column pair that may be given either as attempts/makes or as misses directly.
const MISS_ALTERNATIVES: [(&str, &str, &str); 2] =
    [("fg_missed", "fga", "fg"), ("ft_missed", "fta", "ft")];

impl DatasetSchema {
    fn resolve(&self, header: &csv::StringRecord) -> Result<HashMap<String, usize>> {
        let mut cols = HashMap::new();
        for (i, name) in header.iter().enumerate() {
            cols.entry(name.trim().to_ascii_lowercase()).or_insert(i);
        }
        let mut missing = Vec::new();
        for &name in &self.required {
            if cols.contains_key(name) {
                continue;
            }
            let covered = MISS_ALTERNATIVES
                .iter()
                .any(|(miss, a, m)| (name == *a || name == *m) && cols.contains_key(*miss));
            if !covered {
                missing.push(name.to_string());
            }
        }
        if !missing.is_empty() {
            return Err(Error::MissingColumns(missing));
        }
        Ok(cols)
    }
}

struct Row<'r> {
    record: &'r csv::StringRecord,
    cols: &'r HashMap<String, usize>,
    line: usize,
}

impl Row<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Row {
            row: self.line,
            message: message.into(),
        }
    }

    fn text(&self, name: &str) -> Result<&str> {
        let i = self.cols[name];
        let v = self.record.get(i).map(str::trim).unwrap_or("");
        if v.is_empty() {
            return Err(self.err(format!("empty value in column {name:?}")));
        }
        Ok(v)
    }

    fn number(&self, name: &str) -> Result<f64> {
        let raw = self.text(name)?;
        let v: f64 = raw
            .parse()
            .map_err(|_| self.err(format!("column {name:?}: {raw:?} is not a number")))?;
        if !v.is_finite() || v < 0.0 {
            return Err(self.err(format!("column {name:?}: {v} must be finite and >= 0")));
        }
        Ok(v)
    }

    fn optional_number(&self, name: &str) -> Result<f64> {
        if self.cols.contains_key(name) {
            self.number(name)
        } else {
            Ok(0.0)
        }
    }

    fn misses(&self, miss: &str, attempts: &str, makes: &str) -> Result<f64> {
        if self.cols.contains_key(attempts) && self.cols.contains_key(makes) {
            let a = self.number(attempts)?;
            let m = self.number(makes)?;
            if m > a {
                return Err(self.err(format!("{makes} ({m}) exceeds {attempts} ({a})")));
            }
            Ok(a - m)
        } else {
            self.number(miss)
        }
    }

    fn stat_line(&self) -> Result<StatLine> {
        let season = self.text("season")?.to_string();
        if season_start_year(&season).is_none() {
            return Err(self.err(format!("season {season:?} does not match YYYY-YY")));
        }
        let phase: Phase = self
            .text("phase")?
            .parse()
            .map_err(|e: Error| self.err(e.to_string()))?;
        let games_raw = self.text("games")?;
        let games: u32 = games_raw
            .parse()
            .map_err(|_| self.err(format!("games {games_raw:?} is not a whole number")))?;
        if games < 1 {
            return Err(self.err("games must be >= 1"));
        }
        let s = StatLine {
            player: self.text("player")?.to_string(),
            season,
            phase,
            games,
            points: self.number("pts")?,
            rebounds: self.number("trb")?,
            assists: self.number("ast")?,
            steals: self.number("stl")?,
            blocks_made: self.number("blk")?,
            fouls_drawn: self.optional_number("fouls_drawn")?,
            fg_missed: self.misses("fg_missed", "fga", "fg")?,
            ft_missed: self.misses("ft_missed", "fta", "ft")?,
            turnovers: self.number("tov")?,
            blocks_received: self.optional_number("blocks_received")?,
            fouls_committed: self.number("pf")?,
        };
        s.validate().map_err(|e| self.err(e.to_string()))?;
        Ok(s)
    }
}

/// Reads a dataset from any CSV source.
pub fn read_dataset<R: Read>(reader: R, schema: &DatasetSchema) -> Result<Vec<StatLine>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    let cols = schema.resolve(&header)?;
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let row = Row {
            record: &record,
            cols: &cols,
            line,
        };
        let s = row.stat_line()?;
        if !seen.insert(s.key()) {
            return Err(Error::Duplicate {
                player: s.player,
                season: s.season,
                phase: s.phase,
            });
        }
        out.push(s);
    }
    Ok(out)
}

pub fn load_dataset(path: impl AsRef<Path>, schema: &DatasetSchema) -> Result<Vec<StatLine>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_dataset(file, schema)
}

/// Writes records back out. Misses are written directly (`fg_missed`,
/// `ft_missed`) since attempts and makes are not retained after loading.
pub fn write_dataset<W: Write>(records: &[StatLine], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "player",
        "season",
        "phase",
        "games",
        "pts",
        "trb",
        "ast",
        "stl",
        "blk",
        "tov",
        "pf",
        "fg_missed",
        "ft_missed",
        "fouls_drawn",
        "blocks_received",
    ])?;
    for s in records {
        w.write_record([
            s.player.clone(),
            s.season.clone(),
            s.phase.to_string(),
            s.games.to_string(),
            s.points.to_string(),
            s.rebounds.to_string(),
            s.assists.to_string(),
            s.steals.to_string(),
            s.blocks_made.to_string(),
            s.turnovers.to_string(),
            s.fouls_committed.to_string(),
            s.fg_missed.to_string(),
            s.ft_missed.to_string(),
            s.fouls_drawn.to_string(),
            s.blocks_received.to_string(),
        ])?;
    }
    w.flush().map_err(|source| Error::Io {
        path: "<output>".into(),
        source,
    })?;
    Ok(())
}

/// Reads an exclusion list (`player,season,phase` columns).
pub fn read_exclusions<R: Read>(reader: R) -> Result<Vec<RecordKey>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    let schema = DatasetSchema {
        required: vec!["player", "season", "phase"],
        optional: vec![],
    };
    let cols = schema.resolve(&header)?;
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let row = Row {
            record: &record,
            cols: &cols,
            line,
        };
        let season = row.text("season")?;
        if season_start_year(season).is_none() {
            return Err(row.err(format!("season {season:?} does not match YYYY-YY")));
        }
        let phase: Phase = row
            .text("phase")?
            .parse()
            .map_err(|e: Error| row.err(e.to_string()))?;
        out.push(RecordKey::new(row.text("player")?, season, phase));
    }
    Ok(out)
}

pub fn load_exclusions(path: impl AsRef<Path>) -> Result<Vec<RecordKey>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_exclusions(file)
}
