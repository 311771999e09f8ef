//! Player-stat rosters, league standings, and hypothetical trades.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, PointCloud};

/// The twelve per-player statistics, in canonical column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StatColumn {
    /// Goals.
    G,
    /// Assists.
    A,
    /// Setup passes.
    SP,
    /// Primary points (goals + primary assists).
    P1,
    /// Shots on goal.
    S,
    /// Corsi for.
    CF,
    /// Pass/shot ratio, as a percentage.
    PSR,
    /// Penalties drawn.
    PenDr,
    /// Hits for.
    HitF,
    /// Hits against.
    HitA,
    /// Takeaways.
    Tk,
    /// Giveaways.
    Gv,
}

impl StatColumn {
    pub const ALL: [StatColumn; 12] = [
        StatColumn::G,
        StatColumn::A,
        StatColumn::SP,
        StatColumn::P1,
        StatColumn::S,
        StatColumn::CF,
        StatColumn::PSR,
        StatColumn::PenDr,
        StatColumn::HitF,
        StatColumn::HitA,
        StatColumn::Tk,
        StatColumn::Gv,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn header(self) -> &'static str {
        match self {
            StatColumn::G => "G",
            StatColumn::A => "A",
            StatColumn::SP => "SP",
            StatColumn::P1 => "P1",
            StatColumn::S => "S",
            StatColumn::CF => "CF",
            StatColumn::PSR => "PSR",
            StatColumn::PenDr => "PenDr",
            StatColumn::HitF => "HitF",
            StatColumn::HitA => "HitA",
            StatColumn::Tk => "Tk",
            StatColumn::Gv => "Gv",
        }
    }

    /// Parses a comma-separated list such as `G,A,CF`.
    pub fn parse_list(list: &str) -> Result<Vec<StatColumn>> {
        let cols = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>>>()?;
        if cols.is_empty() {
            return Err(Error::EmptySelection);
        }
        Ok(cols)
    }
}

impl fmt::Display for StatColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.header())
    }
}

impl FromStr for StatColumn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StatColumn::ALL
            .into_iter()
            .find(|c| c.header().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown stat column {s:?}")))
    }
}

/// Exact roster CSV header.
pub const ROSTER_HEADER: &str = "Name,G,A,SP,P1,S,CF,PSR,PenDr,HitF,HitA,Tk,Gv";
/// Exact league CSV header.
pub const LEAGUE_HEADER: &str = "Team,Rank,CorsiFor,Points,Standing";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerRecord {
    pub name: String,
    pub stats: [f64; 12],
}

impl PlayerRecord {
    pub fn stat(&self, col: StatColumn) -> f64 {
        self.stats[col.index()]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamRoster {
    pub team_name: String,
    players: Vec<PlayerRecord>,
}

impl TeamRoster {
    pub fn new(team_name: impl Into<String>, players: Vec<PlayerRecord>) -> Result<Self> {
        if players.len() < 2 {
            return Err(Error::RosterValidation(format!(
                "roster needs at least 2 players, found {}",
                players.len()
            )));
        }
        let mut seen = HashSet::new();
        for p in &players {
            if !seen.insert(p.name.as_str()) {
                return Err(Error::RosterValidation(format!(
                    "duplicate player {:?}",
                    p.name
                )));
            }
            if p.stats.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::RosterValidation(format!(
                    "player {:?} has a negative or non-finite stat",
                    p.name
                )));
            }
        }
        Ok(Self {
            team_name: team_name.into(),
            players,
        })
    }

    pub fn players(&self) -> &[PlayerRecord] {
        &self.players
    }

    pub fn len(&self) -> usize {
        self.players.len()
    }

    pub fn is_empty(&self) -> bool {
        self.players.is_empty()
    }

    pub fn player(&self, name: &str) -> Option<&PlayerRecord> {
        self.players.iter().find(|p| p.name == name)
    }

    /// Writes the roster back out as CSV, stats as shortest round-trip decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(ROSTER_HEADER);
        out.push('\n');
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(Vec::new());
        for p in &self.players {
            let mut rec = vec![p.name.clone()];
            rec.extend(p.stats.iter().map(|v| v.to_string()));
            w.write_record(&rec).expect("writing to memory");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf8"));
        out
    }
}

fn csv_reader(content: &[u8]) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(content)
}

fn check_header(reader: &mut csv::Reader<&[u8]>, expected: &str) -> Result<()> {
    let header = reader.headers().map_err(|e| Error::Parse {
        row: 1,
        column: String::new(),
        message: e.to_string(),
    })?;
    let want: Vec<&str> = expected.split(',').collect();
    for (i, col) in want.iter().enumerate() {
        if header.get(i) != Some(*col) {
            return Err(Error::Parse {
                row: 1,
                column: col.to_string(),
                message: format!("expected header {expected:?}"),
            });
        }
    }
    if header.len() != want.len() {
        return Err(Error::Parse {
            row: 1,
            column: header.get(want.len()).unwrap_or_default().to_string(),
            message: format!("expected header {expected:?}"),
        });
    }
    Ok(())
}

/// Parses a roster CSV with header [`ROSTER_HEADER`]. Rows are numbered from
/// 1 (the header), so the first player is row 2.
pub fn parse_roster_csv(team_name: &str, content: &[u8]) -> Result<TeamRoster> {
    if content.iter().all(|b| b.is_ascii_whitespace()) {
        return Err(Error::Parse {
            row: 0,
            column: String::new(),
            message: "empty file".into(),
        });
    }
    let mut reader = csv_reader(content);
    check_header(&mut reader, ROSTER_HEADER)?;
    let mut players = Vec::new();
    let mut seen = HashSet::new();
    for (i, rec) in reader.records().enumerate() {
        let row = i + 2;
        let rec = rec.map_err(|e| Error::Parse {
            row,
            column: String::new(),
            message: e.to_string(),
        })?;
        let name = rec.get(0).unwrap_or_default().to_string();
        if name.is_empty() {
            return Err(Error::Parse {
                row,
                column: "Name".into(),
                message: "missing player name".into(),
            });
        }
        if !seen.insert(name.clone()) {
            return Err(Error::Parse {
                row,
                column: "Name".into(),
                message: format!("duplicate player {name:?}"),
            });
        }
        let mut stats = [0.0; 12];
        for col in StatColumn::ALL {
            let raw = rec.get(col.index() + 1).ok_or_else(|| Error::Parse {
                row,
                column: col.header().into(),
                message: "missing value".into(),
            })?;
            let v: f64 = raw.parse().map_err(|_| Error::Parse {
                row,
                column: col.header().into(),
                message: format!("not a number: {raw:?}"),
            })?;
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Parse {
                    row,
                    column: col.header().into(),
                    message: format!("stat must be finite and non-negative: {raw:?}"),
                });
            }
            stats[col.index()] = v;
        }
        players.push(PlayerRecord { name, stats });
    }
    TeamRoster::new(team_name, players)
}

/// Projects a roster onto the selected stats (canonical order, duplicates
/// ignored), optionally rescaling each selected column.
pub fn to_point_cloud(
    roster: &TeamRoster,
    selected: &[StatColumn],
    scaling: Option<&[f64]>,
) -> Result<PointCloud> {
    let mut cols = selected.to_vec();
    cols.sort();
    cols.dedup();
    if cols.is_empty() {
        return Err(Error::EmptySelection);
    }
    if let Some(s) = scaling {
        if s.len() != cols.len() {
            return Err(Error::InvalidParameter(format!(
                "scaling has {} factors for {} selected stats",
                s.len(),
                cols.len()
            )));
        }
    }
    let points = roster
        .players
        .iter()
        .map(|p| Point {
            label: p.name.clone(),
            coords: cols
                .iter()
                .enumerate()
                .map(|(k, &c)| p.stat(c) * scaling.map_or(1.0, |s| s[k]))
                .collect(),
        })
        .collect();
    PointCloud::new(points)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeSpec {
    pub team: String,
    pub outgoing_player: String,
    pub incoming: PlayerRecord,
    pub incoming_team: String,
}

/// Removes the outgoing player and appends the incoming one. The incoming
/// name may equal the outgoing name (a player traded for himself).
pub fn apply_trade(roster: &TeamRoster, trade: &TradeSpec) -> Result<TeamRoster> {
    let pos = roster
        .players
        .iter()
        .position(|p| p.name == trade.outgoing_player)
        .ok_or_else(|| {
            Error::Trade(format!(
                "{:?} is not on {}",
                trade.outgoing_player, roster.team_name
            ))
        })?;
    let mut players = roster.players.clone();
    players.remove(pos);
    if players.iter().any(|p| p.name == trade.incoming.name) {
        return Err(Error::Trade(format!(
            "{:?} is already on {}",
            trade.incoming.name, roster.team_name
        )));
    }
    players.push(trade.incoming.clone());
    TeamRoster::new(roster.team_name.clone(), players)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeagueRow {
    pub team: String,
    pub corsi_rank: u32,
    pub corsi_for: u32,
    pub points: u32,
    pub standing: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct League {
    rows: Vec<LeagueRow>,
}

impl League {
    pub fn new(rows: Vec<LeagueRow>) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::LeagueValidation(
                "league needs at least two teams".into(),
            ));
        }
        let is_permutation = |vals: Vec<u32>, what: &str| -> Result<()> {
            let mut seen = vec![false; n];
            for v in vals {
                let slot = (v as usize)
                    .checked_sub(1)
                    .filter(|&i| i < n)
                    .ok_or_else(|| {
                        Error::LeagueValidation(format!("{what} {v} outside 1..={n}"))
                    })?;
                if std::mem::replace(&mut seen[slot], true) {
                    return Err(Error::LeagueValidation(format!("duplicate {what} {v}")));
                }
            }
            Ok(())
        };
        is_permutation(rows.iter().map(|r| r.corsi_rank).collect(), "rank")?;
        is_permutation(rows.iter().map(|r| r.standing).collect(), "standing")?;
        let mut by_rank: Vec<&LeagueRow> = rows.iter().collect();
        by_rank.sort_by_key(|r| r.corsi_rank);
        if by_rank.windows(2).any(|w| w[1].corsi_for > w[0].corsi_for) {
            return Err(Error::LeagueValidation(
                "CorsiFor must be nonincreasing in rank".into(),
            ));
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[LeagueRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{LEAGUE_HEADER}\n");
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(Vec::new());
        for r in &self.rows {
            w.write_record([
                r.team.clone(),
                r.corsi_rank.to_string(),
                r.corsi_for.to_string(),
                r.points.to_string(),
                r.standing.to_string(),
            ])
            .expect("writing to memory");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf8"));
        out
    }
}

pub fn parse_league_csv(content: &[u8]) -> Result<League> {
    let mut reader = csv_reader(content);
    check_header(&mut reader, LEAGUE_HEADER)?;
    let headers: Vec<&str> = LEAGUE_HEADER.split(',').collect();
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let row = i + 2;
        let rec = rec.map_err(|e| Error::Parse {
            row,
            column: String::new(),
            message: e.to_string(),
        })?;
        let int = |k: usize| -> Result<u32> {
            let raw = rec.get(k).unwrap_or_default();
            raw.parse().map_err(|_| Error::Parse {
                row,
                column: headers[k].into(),
                message: format!("not a non-negative integer: {raw:?}"),
            })
        };
        rows.push(LeagueRow {
            team: rec.get(0).unwrap_or_default().to_string(),
            corsi_rank: int(1)?,
            corsi_for: int(2)?,
            points: int(3)?,
            standing: int(4)?,
        });
    }
    League::new(rows)
}
