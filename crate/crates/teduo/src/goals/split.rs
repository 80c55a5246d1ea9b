//! Train/test goal splits and the goal list file format.

use std::io::{BufRead, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{canonicalize_text, render, Goal, GoalKind, Variant};
use crate::seeding;

/// Disjoint train/test goal sets. Test goals are evaluated through
/// paraphrased renderings only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoalSplit {
    pub train: Vec<Goal>,
    pub test: Vec<Goal>,
}

#[derive(Debug, thiserror::Error)]
pub enum SplitError {
    #[error("requested split sizes {train}+{test} exceed the {available} available goals")]
    TooFewGoals {
        train: usize,
        test: usize,
        available: usize,
    },
    #[error("goal file I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("goal file line {0}: {1}")]
    BadLine(usize, serde_json::Error),
}

/// Splits a goal pool into disjoint train and test sets, seeded.
///
/// Goals are structurally distinct by id, so disjointness survives
/// canonicalizing synonyms back to the original vocabulary.
pub fn split_goals(
    all: &[Goal],
    train_size: usize,
    test_size: usize,
    seed: u64,
) -> Result<GoalSplit, SplitError> {
    let mut pool: Vec<Goal> = all.to_vec();
    pool.sort_by(|a, b| a.id.cmp(&b.id));
    pool.dedup_by(|a, b| a.id == b.id);
    if train_size + test_size > pool.len() {
        return Err(SplitError::TooFewGoals {
            train: train_size,
            test: test_size,
            available: pool.len(),
        });
    }
    let mut rng = seeding::rng(seeding::derive_seed(seed, "goal-split"));
    pool.shuffle(&mut rng);
    let mut train: Vec<Goal> = pool[..train_size].to_vec();
    let mut test: Vec<Goal> = pool[train_size..train_size + test_size].to_vec();
    train.sort_by(|a, b| a.id.cmp(&b.id));
    test.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(GoalSplit { train, test })
}

impl GoalSplit {
    /// The instruction text a policy sees for a train goal.
    pub fn train_text(goal: &Goal) -> String {
        goal.canonical_text()
    }

    /// The instruction text a policy sees for a test goal: paraphrase only.
    pub fn test_text(goal: &Goal, seed: u64) -> String {
        render(goal, Variant::Paraphrase { seed }).text
    }

    /// Checks disjointness under canonicalization (a defensive re-assertion
    /// of the structural split).
    pub fn is_disjoint_under_canonicalization(&self, paraphrase_seed: u64) -> bool {
        let train_forms: Vec<String> = self
            .train
            .iter()
            .map(|g| canonicalize_text(&g.canonical_text()))
            .collect();
        self.test.iter().all(|g| {
            let text = Self::test_text(g, paraphrase_seed);
            !train_forms.contains(&canonicalize_text(&text))
        })
    }
}

#[derive(Serialize, Deserialize)]
struct GoalRecord {
    id: String,
    #[serde(flatten)]
    kind: GoalKind,
    canonical_text: String,
}

/// Writes a goal list as JSONL: one `{id, kind, args, canonical_text}` per
/// line.
pub fn write_goal_file(path: &Path, goals: &[Goal]) -> Result<(), SplitError> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    for goal in goals {
        let record = GoalRecord {
            id: goal.id.clone(),
            kind: goal.kind.clone(),
            canonical_text: goal.canonical_text(),
        };
        serde_json::to_writer(&mut out, &record).map_err(std::io::Error::other)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a goal list written by [`write_goal_file`]. Ids are re-derived from
/// the structured kind, so stale ids in the file cannot desynchronize.
pub fn read_goal_file(path: &Path) -> Result<Vec<Goal>, SplitError> {
    let file = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut goals = Vec::new();
    for (line_no, line) in file.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: GoalRecord =
            serde_json::from_str(&line).map_err(|e| SplitError::BadLine(line_no, e))?;
        goals.push(Goal::new(record.kind));
    }
    Ok(goals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Color, Shape, Tile};

    fn pool(n: usize) -> Vec<Goal> {
        (0..n)
            .map(|i| {
                Goal::new(GoalKind::GoToTile {
                    tile: Tile::new((i % 20) as u8 + 1, (i / 20) as u8 + 1),
                })
            })
            .collect()
    }

    #[test]
    fn split_sizes_and_disjointness() {
        let goals = pool(600);
        let split = split_goals(&goals, 500, 100, 11).unwrap();
        assert_eq!(split.train.len(), 500);
        assert_eq!(split.test.len(), 100);
        let train_ids: Vec<&str> = split.train.iter().map(|g| g.id.as_str()).collect();
        assert!(split.test.iter().all(|g| !train_ids.contains(&g.id.as_str())));
        assert!(split.is_disjoint_under_canonicalization(7));
    }

    #[test]
    fn minimal_split_assigns_both() {
        let goals = pool(2);
        let split = split_goals(&goals, 1, 1, 0).unwrap();
        assert_eq!(split.train.len() + split.test.len(), 2);
        assert_ne!(split.train[0].id, split.test[0].id);
    }

    #[test]
    fn oversized_split_is_rejected() {
        let goals = pool(10);
        assert!(matches!(
            split_goals(&goals, 8, 3, 0),
            Err(SplitError::TooFewGoals { .. })
        ));
    }

    #[test]
    fn goal_file_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("goals.jsonl");
        let goals = vec![
            Goal::new(GoalKind::PickUp {
                color: Some(Color::Blue),
                shape: Shape::Key,
            }),
            Goal::new(GoalKind::OpenDoor { color: None }),
            Goal::new(GoalKind::GoToTile {
                tile: Tile::new(5, 6),
            }),
        ];
        write_goal_file(&path, &goals).unwrap();
        let read = read_goal_file(&path).unwrap();
        assert_eq!(read, goals);
        let first_line = std::fs::read_to_string(&path)
            .unwrap()
            .lines()
            .next()
            .unwrap()
            .to_string();
        assert!(first_line.contains("\"id\":\"pick_up_blue_key\""));
        assert!(first_line.contains("\"canonical_text\":\"pick up the blue key\""));
    }
}
