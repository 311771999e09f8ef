use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use persistry_core::analytics::{
    analyze_roster, compare, noise_floor, rank_correlation, summarize, AnalysisConfig,
    SummaryConfig, TeamSummary,
};
use persistry_core::geometry::TunnelingConfig;
use persistry_core::persistence::Barcode;
use persistry_core::render::{render_barcode_svg, render_text, RenderOptions};
use persistry_core::roster::{apply_trade, PlayerRecord, StatColumn, TradeSpec};

use crate::dataset::{Dataset, TeamEntry};

#[derive(Debug, Error, PartialEq)]
pub enum ApiError {
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    BadRequest(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl ApiError {
    pub fn is_user_error(&self) -> bool {
        !matches!(self, ApiError::Internal(_))
    }

    /// `{"error": "..."}` through the same serializer as every other answer.
    pub fn to_json(&self) -> String {
        to_json_text(&json!({ "error": self.to_string() }))
    }
}

impl From<persistry_core::Error> for ApiError {
    fn from(e: persistry_core::Error) -> Self {
        use persistry_core::Error as E;
        match e {
            E::FiltrationOrder | E::HullTooLarge(_) => ApiError::Internal(e.to_string()),
            other => ApiError::BadRequest(other.to_string()),
        }
    }
}

pub type ApiResult = Result<String, ApiError>;

/// The one JSON serializer: pretty-printed with a trailing newline.
pub fn to_json_text<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct ServiceConfig {
    pub stats: Vec<StatColumn>,
    pub noise_fraction: f64,
    pub tunneling: TunnelingConfig,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        let summary = SummaryConfig::default();
        Self {
            stats: StatColumn::ALL.to_vec(),
            noise_fraction: summary.noise_fraction,
            tunneling: summary.tunneling,
        }
    }
}

impl ServiceConfig {
    pub fn validate(&self) -> Result<(), ApiError> {
        if !(0.0..=0.5).contains(&self.noise_fraction) {
            return Err(ApiError::BadRequest(format!(
                "noise fraction {} is outside [0, 0.5]",
                self.noise_fraction
            )));
        }
        if self.stats.is_empty() {
            return Err(ApiError::BadRequest("no stats selected".into()));
        }
        Ok(())
    }

    fn analysis(&self) -> AnalysisConfig {
        AnalysisConfig {
            stats: self.stats.clone(),
            scaling: None,
            summary: SummaryConfig {
                noise_fraction: self.noise_fraction,
                tunneling: self.tunneling,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Svg,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TradeRequest {
    pub team: String,
    pub outgoing: String,
    pub incoming_team: String,
    pub incoming_player: String,
}

#[derive(Serialize)]
struct TeamListing<'a> {
    slug: &'a str,
    name: &'a str,
    players: usize,
}

#[derive(Serialize)]
struct PlayerListing<'a> {
    name: &'a str,
    stats: CanonicalStats<'a>,
}

/// Stat map keyed by CSV header, in canonical column order.
struct CanonicalStats<'a>(&'a PlayerRecord);

impl Serialize for CanonicalStats<'_> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(StatColumn::ALL.len()))?;
        for c in StatColumn::ALL {
            map.serialize_entry(c.header(), &self.0.stat(c))?;
        }
        map.end()
    }
}

/// Read-only queries over a loaded dataset. Every method is a pure function
/// of the dataset, the configuration and its arguments.
#[derive(Debug, Clone)]
pub struct Service {
    dataset: Dataset,
    config: ServiceConfig,
}

impl Service {
    pub fn new(dataset: Dataset, config: ServiceConfig) -> Result<Self, ApiError> {
        config.validate()?;
        Ok(Self { dataset, config })
    }

    pub fn dataset(&self) -> &Dataset {
        &self.dataset
    }

    fn team(&self, slug: &str) -> Result<&TeamEntry, ApiError> {
        self.dataset
            .team(slug)
            .ok_or_else(|| ApiError::NotFound(format!("unknown team {slug:?}")))
    }

    fn player<'a>(&self, team: &'a TeamEntry, name: &str) -> Result<&'a PlayerRecord, ApiError> {
        team.roster
            .player(name)
            .ok_or_else(|| ApiError::NotFound(format!("{name:?} is not on {}", team.name)))
    }

    pub fn teams(&self) -> ApiResult {
        let list: Vec<TeamListing> = self
            .dataset
            .teams()
            .map(|t| TeamListing {
                slug: &t.slug,
                name: &t.name,
                players: t.roster.len(),
            })
            .collect();
        Ok(to_json_text(&list))
    }

    pub fn players(&self, slug: &str) -> ApiResult {
        let team = self.team(slug)?;
        let list: Vec<PlayerListing> = team
            .roster
            .players()
            .iter()
            .map(|p| PlayerListing {
                name: &p.name,
                stats: CanonicalStats(p),
            })
            .collect();
        Ok(to_json_text(&list))
    }

    fn barcode_and_summary(&self, team: &TeamEntry) -> Result<(Barcode, TeamSummary), ApiError> {
        let analysis = self.config.analysis();
        let a = analyze_roster(&team.roster, &analysis)?;
        let summary = summarize(&team.name, &a.barcode, &a.cloud, &analysis.summary)?;
        Ok((a.barcode, summary))
    }

    pub fn summary(&self, slug: &str) -> ApiResult {
        let (_, summary) = self.barcode_and_summary(self.team(slug)?)?;
        Ok(to_json_text(&summary))
    }

    /// Barcode of the team cloud with dimension-1 bars below the noise floor
    /// removed. `dim` restricts the JSON to one key; SVG and text draw one
    /// dimension, 0 unless given.
    pub fn barcode(&self, slug: &str, dim: Option<usize>, format: Format) -> ApiResult {
        if let Some(d) = dim {
            if d > 1 {
                return Err(ApiError::BadRequest(format!("dim must be 0 or 1, got {d}")));
            }
        }
        let team = self.team(slug)?;
        let a = analyze_roster(&team.roster, &self.config.analysis())?;
        let barcode = a
            .barcode
            .without_short_dim1(noise_floor(&a.barcode, self.config.noise_fraction));
        match format {
            Format::Json => {
                let mut value = serde_json::to_value(&barcode)
                    .map_err(|e| ApiError::Internal(e.to_string()))?;
                if let (Some(d), Value::Object(map)) = (dim, &mut value) {
                    let key = format!("dim{d}");
                    map.retain(|k, _| *k == key);
                }
                Ok(to_json_text(&value))
            }
            Format::Svg => Ok(render_barcode_svg(
                &barcode,
                &RenderOptions {
                    dim: dim.unwrap_or(0),
                    ..RenderOptions::default()
                },
            )?),
            Format::Text => Ok(render_text(&barcode, dim.unwrap_or(0), 60)?),
        }
    }

    pub fn evaluate_trade(&self, req: &TradeRequest) -> ApiResult {
        let team = self.team(&req.team)?;
        let source = self.team(&req.incoming_team)?;
        self.player(team, &req.outgoing)?;
        let incoming = self.player(source, &req.incoming_player)?.clone();
        let traded = apply_trade(
            &team.roster,
            &TradeSpec {
                team: team.name.clone(),
                outgoing_player: req.outgoing.clone(),
                incoming,
                incoming_team: source.name.clone(),
            },
        )?;
        let (_, before) = self.barcode_and_summary(team)?;
        let after_entry = TeamEntry {
            roster: traded,
            ..team.clone()
        };
        let (_, after) = self.barcode_and_summary(&after_entry)?;
        Ok(to_json_text(&compare(&before, &after)?))
    }

    pub fn correlate(&self) -> ApiResult {
        let league = self
            .dataset
            .league()
            .ok_or_else(|| ApiError::NotFound("dataset has no league table".into()))?;
        Ok(to_json_text(&rank_correlation(league)))
    }
}
