//! Robot description files and path files (JSON).
//!
//! A robot file holds `{"base": [[x, y] × 3], "platform": [[x, y] × 3], "name": "..."}`
//! with `name` optional. A path file holds `{"waypoints": [{"x", "y", "phi"}, ...]}`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::{Pose, RobotGeometry};
use crate::modeplan::WorkspacePath;
use crate::singularity::{is_architecturally_singular, passage_safety};

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedRobot {
    pub geometry: RobotGeometry,
    pub warnings: Vec<String>,
}

fn points(obj: &serde_json::Map<String, Value>, key: &str) -> Result<[[f64; 2]; 3]> {
    let v = obj.get(key).ok_or_else(|| Error::Parse(format!("missing key \"{key}\"")))?;
    let arr = v.as_array().ok_or_else(|| Error::Parse(format!("\"{key}\" must be an array")))?;
    if arr.len() != 3 {
        return Err(Error::Parse(format!("\"{key}\" must hold exactly 3 points, found {}", arr.len())));
    }
    let mut out = [[0.0; 2]; 3];
    for (i, p) in arr.iter().enumerate() {
        let pair = p
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| Error::Parse(format!("\"{key}\"[{i}] must be an [x, y] pair")))?;
        for (c, n) in pair.iter().enumerate() {
            out[i][c] = n.as_f64().ok_or_else(|| Error::Parse(format!("\"{key}\"[{i}][{c}] is not a number")))?;
        }
    }
    Ok(out)
}

/// Parses and validates a robot description.
pub fn parse_robot(text: &str) -> Result<RobotGeometry> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| Error::Parse("robot description must be a JSON object".into()))?;
    if let Some(k) = obj.keys().find(|k| !matches!(k.as_str(), "base" | "platform" | "name")) {
        return Err(Error::Parse(format!("unknown key \"{k}\"")));
    }
    let base = points(obj, "base")?;
    let platform = points(obj, "platform")?;
    let name = match obj.get("name") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(Error::Parse("\"name\" must be a string".into())),
    };
    let geom = RobotGeometry::from_arrays(base, platform).map_err(|e| match e {
        Error::InvalidGeometry(m) => Error::Validation(m),
        other => other,
    })?;
    Ok(match name {
        Some(n) => geom.with_name(n),
        None => geom,
    })
}

/// Design warnings: architectural singularity and legs without a safe passage.
pub fn robot_warnings(geom: &RobotGeometry) -> Vec<String> {
    let mut out = Vec::new();
    let arch = is_architecturally_singular(geom);
    if arch.singular {
        out.push(format!("architectural singularity: {}", arch.detail));
    }
    let safety = passage_safety(geom);
    for (i, safe) in safety.safe.iter().enumerate() {
        if !safe {
            out.push(format!(
                "leg {}: base angle {:.9} matches platform angle {:.9}; its serial point can be a parallel singularity",
                i + 1,
                safety.base_angles[i],
                safety.platform_angles[i]
            ));
        }
    }
    out
}

pub fn load_robot(path: impl AsRef<Path>) -> Result<LoadedRobot> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let geometry = parse_robot(&text)?;
    let warnings = robot_warnings(&geometry);
    Ok(LoadedRobot { geometry, warnings })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PathFile {
    waypoints: Vec<Pose>,
}

pub fn parse_path(text: &str, samples_per_segment: usize) -> Result<WorkspacePath> {
    let file: PathFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    WorkspacePath::new(file.waypoints, samples_per_segment)
}

pub fn load_path(path: impl AsRef<Path>, samples_per_segment: usize) -> Result<WorkspacePath> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_path(&text, samples_per_segment)
}

pub fn path_to_json(path: &WorkspacePath) -> String {
    let file = PathFile { waypoints: path.waypoints.clone() };
    serde_json::to_string_pretty(&file).expect("poses serialize")
}
