//! Team-level metrics derived from barcodes, before/after trade comparison,
//! and the Corsi-rank vs standing correlation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::filtration::{default_max_value, rips_filtration};
use crate::geometry::{
    build_distance_matrix, degree_sparsity, tunneling, PointCloud, SparsityProfile,
    TunnelingConfig, TunnelingEstimate,
};
use crate::persistence::{compute_intervals, Barcode};
use crate::roster::{to_point_cloud, League, StatColumn, TeamRoster};

pub const DEFAULT_NOISE_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryConfig {
    /// Dimension-1 bars shorter than `noise_fraction * top_line` are ignored.
    pub noise_fraction: f64,
    pub tunneling: TunnelingConfig,
}

impl Default for SummaryConfig {
    fn default() -> Self {
        Self {
            noise_fraction: DEFAULT_NOISE_FRACTION,
            tunneling: TunnelingConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamSummary {
    pub team: String,
    pub top_line: f64,
    pub mean_bar_length: f64,
    pub h1_count: usize,
    pub h1_total_length: f64,
    pub sparsity_profile: SparsityProfile,
    pub tunneling: TunnelingEstimate,
    pub config: SummaryConfig,
}

impl TeamSummary {
    pub fn noise_floor(&self) -> f64 {
        self.config.noise_fraction * self.top_line
    }
}

/// Noise floor for a barcode: `noise_fraction` times its largest finite
/// dimension-0 death.
pub fn noise_floor(barcode: &Barcode, noise_fraction: f64) -> f64 {
    noise_fraction * barcode.finite_deaths(0).last().copied().unwrap_or(0.0)
}

pub fn summarize(
    team: &str,
    barcode: &Barcode,
    cloud: &PointCloud,
    config: &SummaryConfig,
) -> Result<TeamSummary> {
    let deaths = barcode.finite_deaths(0);
    let top_line = deaths.last().copied().unwrap_or(0.0);
    let mean_bar_length = if deaths.is_empty() {
        0.0
    } else {
        deaths.iter().sum::<f64>() / deaths.len() as f64
    };
    let floor = config.noise_fraction * top_line;
    let kept: Vec<_> = barcode
        .intervals(1)
        .iter()
        .filter(|i| i.length() >= floor)
        .collect();
    let h1_total_length = kept
        .iter()
        .filter(|i| !i.is_infinite())
        .map(|i| i.length())
        .sum();
    Ok(TeamSummary {
        team: team.to_string(),
        top_line,
        mean_bar_length,
        h1_count: kept.len(),
        h1_total_length,
        sparsity_profile: degree_sparsity(cloud)?,
        tunneling: tunneling(cloud, &config.tunneling)?,
        config: config.clone(),
    })
}

/// Everything needed to go from a roster to a summary.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AnalysisConfig {
    /// Empty means all twelve stats.
    pub stats: Vec<StatColumn>,
    pub scaling: Option<Vec<f64>>,
    pub summary: SummaryConfig,
}

impl AnalysisConfig {
    pub fn selected_stats(&self) -> Vec<StatColumn> {
        if self.stats.is_empty() {
            StatColumn::ALL.to_vec()
        } else {
            self.stats.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeamAnalysis {
    pub cloud: PointCloud,
    pub barcode: Barcode,
}

/// Roster to cloud to full Rips filtration to barcode.
pub fn analyze_roster(roster: &TeamRoster, config: &AnalysisConfig) -> Result<TeamAnalysis> {
    let cloud = to_point_cloud(roster, &config.selected_stats(), config.scaling.as_deref())?;
    let barcode = barcode_of(&cloud)?;
    Ok(TeamAnalysis { cloud, barcode })
}

/// Dimension 0/1 barcode of the complete Rips filtration of a cloud.
pub fn barcode_of(cloud: &PointCloud) -> Result<Barcode> {
    let dm = build_distance_matrix(cloud);
    let filtration = rips_filtration(&dm, 2, default_max_value(&dm))?;
    compute_intervals(&filtration, 1)
}

pub fn summarize_roster(roster: &TeamRoster, config: &AnalysisConfig) -> Result<TeamSummary> {
    let a = analyze_roster(roster, config)?;
    summarize(&roster.team_name, &a.barcode, &a.cloud, &config.summary)
}

/// Summaries for many rosters, in input order.
pub fn summarize_league(
    rosters: &[TeamRoster],
    config: &AnalysisConfig,
    exec: Execution,
) -> Vec<Result<TeamSummary>> {
    exec.map_slice(rosters, |r| summarize_roster(r, config))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Improved,
    Worsened,
    Neutral,
}

impl Verdict {
    fn flip(self) -> Self {
        match self {
            Verdict::Improved => Verdict::Worsened,
            Verdict::Worsened => Verdict::Improved,
            Verdict::Neutral => Verdict::Neutral,
        }
    }
}

/// Signed `after - before` differences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryDeltas {
    pub top_line: f64,
    pub mean_bar_length: f64,
    pub h1_count: i64,
    pub h1_total_length: f64,
    pub sparsity: f64,
    pub tunneling: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeReport {
    pub before: TeamSummary,
    pub after: TeamSummary,
    pub deltas: SummaryDeltas,
    pub verdict: Verdict,
}

/// Decides whether `after` is a better team shape than `before`.
pub trait VerdictPolicy {
    fn verdict(&self, before: &TeamSummary, after: &TeamSummary) -> Verdict;
}

/// Dimension-1 structure first (fewer classes, then less total length),
/// then longer-lived dimension-0 bars.
#[derive(Debug, Clone, Copy)]
pub struct LexicographicPolicy {
    /// Relative tolerance under which two lengths count as unchanged.
    pub tolerance: f64,
}

impl Default for LexicographicPolicy {
    fn default() -> Self {
        Self { tolerance: 1e-9 }
    }
}

impl LexicographicPolicy {
    /// `Improved` when the quantity went down, relative to the tolerance.
    fn lower_is_better(&self, before: f64, after: f64) -> Verdict {
        let scale = before.abs().max(after.abs()).max(1.0);
        if after < before - self.tolerance * scale {
            Verdict::Improved
        } else if after > before + self.tolerance * scale {
            Verdict::Worsened
        } else {
            Verdict::Neutral
        }
    }
}

impl VerdictPolicy for LexicographicPolicy {
    fn verdict(&self, before: &TeamSummary, after: &TeamSummary) -> Verdict {
        if after.h1_count != before.h1_count {
            return if after.h1_count < before.h1_count {
                Verdict::Improved
            } else {
                Verdict::Worsened
            };
        }
        match self.lower_is_better(before.h1_total_length, after.h1_total_length) {
            Verdict::Neutral => self
                .lower_is_better(before.mean_bar_length, after.mean_bar_length)
                .flip(),
            v => v,
        }
    }
}

pub fn compare(before: &TeamSummary, after: &TeamSummary) -> Result<TradeReport> {
    compare_with(before, after, &LexicographicPolicy::default())
}

pub fn compare_with(
    before: &TeamSummary,
    after: &TeamSummary,
    policy: &dyn VerdictPolicy,
) -> Result<TradeReport> {
    if before.team != after.team {
        return Err(Error::Mismatch(format!(
            "team {:?} vs {:?}",
            before.team, after.team
        )));
    }
    if before.config != after.config {
        return Err(Error::Mismatch(
            "summaries use different configurations".into(),
        ));
    }
    let deltas = SummaryDeltas {
        top_line: after.top_line - before.top_line,
        mean_bar_length: after.mean_bar_length - before.mean_bar_length,
        h1_count: after.h1_count as i64 - before.h1_count as i64,
        h1_total_length: after.h1_total_length - before.h1_total_length,
        sparsity: after.sparsity_profile.first() - before.sparsity_profile.first(),
        tunneling: after.tunneling.diameter - before.tunneling.diameter,
    };
    Ok(TradeReport {
        before: before.clone(),
        after: after.clone(),
        deltas,
        verdict: policy.verdict(before, after),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub rho: f64,
    pub n: usize,
    /// `(corsi_rank, standing)` in league-file order.
    pub pairs: Vec<(u32, u32)>,
}

/// Spearman correlation between Corsi rank and final standing. Both columns
/// are permutations, so the tie-free closed form applies.
pub fn rank_correlation(league: &League) -> CorrelationReport {
    let pairs: Vec<(u32, u32)> = league
        .rows()
        .iter()
        .map(|r| (r.corsi_rank, r.standing))
        .collect();
    let n = pairs.len() as f64;
    let sum_sq: f64 = pairs
        .iter()
        .map(|&(a, b)| {
            let d = a as f64 - b as f64;
            d * d
        })
        .sum();
    let rho = (1.0 - 6.0 * sum_sq / (n * (n * n - 1.0))).clamp(-1.0, 1.0);
    CorrelationReport {
        rho,
        n: pairs.len(),
        pairs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::TunnelingMethod;
    use crate::roster::LeagueRow;

    fn summary(h1_count: usize, h1_len: f64, mean: f64) -> TeamSummary {
        TeamSummary {
            team: "t".into(),
            top_line: 10.0,
            mean_bar_length: mean,
            h1_count,
            h1_total_length: h1_len,
            sparsity_profile: SparsityProfile {
                values: vec![1.0, 10.0],
            },
            tunneling: TunnelingEstimate {
                diameter: 1.0,
                center: vec![0.0],
                method: TunnelingMethod::MultistartMaxmin,
                starts_used: 1,
            },
            config: SummaryConfig::default(),
        }
    }

    #[test]
    fn identical_is_neutral() {
        let s = summary(1, 2.0, 5.0);
        let r = compare(&s, &s).unwrap();
        assert_eq!(r.verdict, Verdict::Neutral);
        assert_eq!(r.deltas.h1_count, 0);
        assert_eq!(r.deltas.mean_bar_length, 0.0);
    }

    #[test]
    fn losing_a_cycle_improves() {
        let r = compare(&summary(2, 4.0, 5.0), &summary(1, 4.0, 5.0)).unwrap();
        assert_eq!(r.verdict, Verdict::Improved);
        assert_eq!(r.deltas.h1_count, -1);
    }

    #[test]
    fn shorter_zero_bars_worsen() {
        let r = compare(&summary(1, 2.0, 5.0), &summary(1, 2.0, 4.0)).unwrap();
        assert_eq!(r.verdict, Verdict::Worsened);
    }

    #[test]
    fn swapping_flips_verdict() {
        let a = summary(1, 2.0, 5.0);
        let b = summary(1, 3.0, 6.0);
        let ab = compare(&a, &b).unwrap();
        let ba = compare(&b, &a).unwrap();
        assert_eq!(ab.verdict, Verdict::Worsened);
        assert_eq!(ba.verdict, Verdict::Improved);
        assert_eq!(ab.deltas.h1_total_length, -ba.deltas.h1_total_length);
    }

    #[test]
    fn mismatched_team_is_rejected() {
        let a = summary(1, 2.0, 5.0);
        let mut b = a.clone();
        b.team = "other".into();
        assert!(matches!(compare(&a, &b), Err(Error::Mismatch(_))));
        let mut c = a.clone();
        c.config.noise_fraction = 0.2;
        assert!(compare(&a, &c).is_err());
    }

    fn league(pairs: &[(u32, u32)]) -> League {
        League::new(
            pairs
                .iter()
                .map(|&(rank, standing)| LeagueRow {
                    team: format!("team{rank}"),
                    corsi_rank: rank,
                    corsi_for: 1000 - rank,
                    points: 0,
                    standing,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn spearman_extremes() {
        let same = league(&[(1, 1), (2, 2), (3, 3), (4, 4)]);
        assert_eq!(rank_correlation(&same).rho, 1.0);
        let rev = league(&[(1, 4), (2, 3), (3, 2), (4, 1)]);
        assert_eq!(rank_correlation(&rev).rho, -1.0);
    }

    #[test]
    fn two_point_summary() {
        let cloud = PointCloud::from_coords([[0.0, 0.0], [3.0, 4.0]]).unwrap();
        let b = barcode_of(&cloud).unwrap();
        let s = summarize("pair", &b, &cloud, &SummaryConfig::default()).unwrap();
        assert_eq!(s.top_line, 5.0);
        assert_eq!(s.h1_count, 0);
        assert_eq!(s.h1_total_length, 0.0);
        assert_eq!(s.top_line, s.sparsity_profile.last());
    }
}
