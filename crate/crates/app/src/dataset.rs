use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use persistry_core::roster::{parse_league_csv, parse_roster_csv, League, TeamRoster};
use thiserror::Error;

pub const LEAGUE_FILE: &str = "league.csv";

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("dataset root {0} does not exist")]
    MissingRoot(PathBuf),
    #[error("season directory {0} does not exist")]
    MissingSeason(PathBuf),
    #[error("no season given and {root} holds {found} season directories")]
    AmbiguousSeason { root: PathBuf, found: usize },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Invalid {
        path: PathBuf,
        source: persistry_core::Error,
    },
    #[error("{0} contains no team files")]
    NoTeams(PathBuf),
}

#[derive(Debug, Clone)]
pub struct TeamEntry {
    pub slug: String,
    pub name: String,
    pub roster: TeamRoster,
}

/// All rosters and the league table of one season, validated up front and
/// immutable afterwards.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub season: String,
    teams: BTreeMap<String, TeamEntry>,
    league: Option<League>,
}

/// Lowercase ASCII alphanumerics, everything else collapsed to `-`.
pub fn slugify(name: &str) -> String {
    let mut out = String::new();
    for c in name.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
        } else if !out.ends_with('-') && !out.is_empty() {
            out.push('-');
        }
    }
    out.trim_end_matches('-').to_string()
}

fn read(path: &Path) -> Result<Vec<u8>, DatasetError> {
    fs::read(path).map_err(|source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn subdirs(root: &Path) -> Result<Vec<String>, DatasetError> {
    let entries = fs::read_dir(root).map_err(|source| DatasetError::Io {
        path: root.to_path_buf(),
        source,
    })?;
    let mut out = Vec::new();
    for e in entries.flatten() {
        if e.path().is_dir() {
            out.push(e.file_name().to_string_lossy().into_owned());
        }
    }
    out.sort();
    Ok(out)
}

impl Dataset {
    /// Loads `<root>/<season>/*.csv`. Without a season, the root must hold
    /// exactly one season directory.
    pub fn load(root: &Path, season: Option<&str>) -> Result<Self, DatasetError> {
        if !root.is_dir() {
            return Err(DatasetError::MissingRoot(root.to_path_buf()));
        }
        let season = match season {
            Some(s) => s.to_string(),
            None => {
                let mut found = subdirs(root)?;
                if found.len() != 1 {
                    return Err(DatasetError::AmbiguousSeason {
                        root: root.to_path_buf(),
                        found: found.len(),
                    });
                }
                found.remove(0)
            }
        };
        let dir = root.join(&season);
        if !dir.is_dir() {
            return Err(DatasetError::MissingSeason(dir));
        }

        let league_path = dir.join(LEAGUE_FILE);
        let league = if league_path.is_file() {
            let league =
                parse_league_csv(&read(&league_path)?).map_err(|source| DatasetError::Invalid {
                    path: league_path.clone(),
                    source,
                })?;
            Some(league)
        } else {
            None
        };

        let mut files: Vec<PathBuf> = fs::read_dir(&dir)
            .map_err(|source| DatasetError::Io {
                path: dir.clone(),
                source,
            })?
            .flatten()
            .map(|e| e.path())
            .filter(|p| {
                p.is_file()
                    && p.extension().is_some_and(|e| e == "csv")
                    && p.file_name().is_some_and(|n| n != LEAGUE_FILE)
            })
            .collect();
        files.sort();
        if files.is_empty() {
            return Err(DatasetError::NoTeams(dir));
        }

        let mut teams = BTreeMap::new();
        for path in files {
            let slug = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            let name = resolve_name(&slug, league.as_ref());
            let roster = parse_roster_csv(&name, &read(&path)?)
                .map_err(|source| DatasetError::Invalid { path, source })?;
            teams.insert(slug.clone(), TeamEntry { slug, name, roster });
        }
        Ok(Self {
            season,
            teams,
            league,
        })
    }

    pub fn teams(&self) -> impl Iterator<Item = &TeamEntry> {
        self.teams.values()
    }

    pub fn team(&self, slug: &str) -> Option<&TeamEntry> {
        self.teams.get(slug)
    }

    pub fn league(&self) -> Option<&League> {
        self.league.as_ref()
    }
}

/// The league row whose slugified name equals or ends with `-<slug>`
/// ("sharks" matches "San Jose Sharks"); the slug itself otherwise.
fn resolve_name(slug: &str, league: Option<&League>) -> String {
    let suffix = format!("-{slug}");
    league
        .and_then(|l| {
            l.rows().iter().find(|r| {
                let s = slugify(&r.team);
                s == slug || s.ends_with(&suffix)
            })
        })
        .map_or_else(|| slug.to_string(), |r| r.team.clone())
}
