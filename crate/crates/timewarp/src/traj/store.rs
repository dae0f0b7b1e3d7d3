//! Append-only trajectory persistence: one JSON file per kept trajectory, a
//! manifest with the kept ids, and a drop log for filtered attempts.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::harness::Trajectory;
use crate::judge::Label;
use crate::types::Version;

use super::TrajError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DropEntry {
    pub goal_id: String,
    pub version: Version,
    pub label: Option<Label>,
    pub final_message: Option<String>,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoreManifest {
    pub kept: usize,
    pub dropped: usize,
    pub trajectory_ids: Vec<String>,
}

/// Single-writer trajectory directory.
pub struct TrajectoryStore {
    dir: PathBuf,
}

impl TrajectoryStore {
    pub fn create(dir: &Path) -> Result<TrajectoryStore, TrajError> {
        fs::create_dir_all(dir)?;
        Ok(TrajectoryStore { dir: dir.to_path_buf() })
    }

    pub fn open(dir: &Path) -> Result<TrajectoryStore, TrajError> {
        if !dir.is_dir() {
            return Err(TrajError::Io(std::io::Error::new(
                std::io::ErrorKind::NotFound,
                format!("no trajectory store at {}", dir.display()),
            )));
        }
        Ok(TrajectoryStore { dir: dir.to_path_buf() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn file_of(&self, trajectory_id: &str) -> PathBuf {
        self.dir.join(format!("{}.traj.json", trajectory_id.replace(['/', ':'], "_")))
    }

    /// Persist one kept trajectory immediately (partial results survive
    /// interruption).
    pub fn save(&self, trajectory: &Trajectory) -> Result<(), TrajError> {
        let path = self.file_of(&trajectory.id());
        let json = serde_json::to_string(trajectory)?;
        fs::write(path, json)?;
        Ok(())
    }

    pub fn append_drop(&self, entry: &DropEntry) -> Result<(), TrajError> {
        use std::io::Write;
        let mut file = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(self.dir.join("drop_log.jsonl"))?;
        writeln!(file, "{}", serde_json::to_string(entry)?)?;
        Ok(())
    }

    pub fn write_manifest(&self, manifest: &StoreManifest) -> Result<(), TrajError> {
        fs::write(
            self.dir.join("manifest.json"),
            serde_json::to_string_pretty(manifest)?,
        )?;
        Ok(())
    }

    pub fn manifest(&self) -> Result<StoreManifest, TrajError> {
        let raw = fs::read_to_string(self.dir.join("manifest.json"))?;
        Ok(serde_json::from_str(&raw)?)
    }

    pub fn drop_log(&self) -> Result<Vec<DropEntry>, TrajError> {
        let path = self.dir.join("drop_log.jsonl");
        if !path.exists() {
            return Ok(Vec::new());
        }
        let raw = fs::read_to_string(path)?;
        raw.lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| serde_json::from_str(l).map_err(TrajError::from))
            .collect()
    }

    /// All stored trajectories, ordered by id.
    pub fn load_all(&self) -> Result<Vec<Trajectory>, TrajError> {
        let mut out = Vec::new();
        for entry in fs::read_dir(&self.dir)? {
            let path = entry?.path();
            if path.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.ends_with(".traj.json")) {
                let raw = fs::read_to_string(&path)?;
                out.push(serde_json::from_str::<Trajectory>(&raw)?);
            }
        }
        out.sort_by_key(|t| t.id());
        Ok(out)
    }
}
