//! JSON instance and schedule files.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::CliError;
use crate::model::{Instance, Schedule};
use crate::solver::SolveResult;

const INSTANCE_KEYS: [&str; 4] = ["tx_times", "comp_times", "initial_age", "deadline"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub tx_times: Vec<f64>,
    pub comp_times: Vec<f64>,
    pub initial_age: f64,
    pub deadline: f64,
}

impl InstanceFile {
    pub fn to_instance(&self) -> Result<Instance, CliError> {
        Instance::new(
            self.tx_times.clone(),
            self.comp_times.clone(),
            self.initial_age,
            self.deadline,
        )
        .map_err(|e| CliError::Parse(e.to_string()))
    }
}

impl From<&Instance> for InstanceFile {
    fn from(instance: &Instance) -> Self {
        Self {
            tx_times: instance.tx_times().to_vec(),
            comp_times: instance.comp_times().to_vec(),
            initial_age: instance.initial_age(),
            deadline: instance.deadline(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleFile {
    pub gen_times: Vec<f64>,
    pub comp_starts: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub average: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peaks: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
}

impl ScheduleFile {
    pub fn schedule(&self) -> Schedule {
        Schedule::new(self.gen_times.clone(), self.comp_starts.clone())
    }
}

impl From<&SolveResult> for ScheduleFile {
    fn from(r: &SolveResult) -> Self {
        Self {
            gen_times: r.schedule.gen_times.clone(),
            comp_starts: r.schedule.comp_starts.clone(),
            area: Some(r.metrics.area),
            average: Some(r.metrics.average),
            peaks: Some(r.metrics.peaks.clone()),
            method: Some(r.method.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn parse_json(path: &Path, text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// Parses an instance document. Unknown keys are ignored and returned so
/// the caller can warn about them.
pub fn parse_instance(path: &Path, text: &str) -> Result<(Instance, Vec<String>), CliError> {
    let value = parse_json(path, text)?;
    let Value::Object(map) = &value else {
        return Err(CliError::Parse(format!(
            "{}: expected a JSON object",
            path.display()
        )));
    };
    let unknown: Vec<String> = map
        .keys()
        .filter(|k| !INSTANCE_KEYS.contains(&k.as_str()))
        .cloned()
        .collect();
    let file: InstanceFile = serde_json::from_value(value)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let instance = file
        .to_instance()
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    Ok((instance, unknown))
}

pub fn read_instance(path: &Path) -> Result<(Instance, Vec<String>), CliError> {
    parse_instance(path, &read(path)?)
}

pub fn read_schedule(path: &Path) -> Result<ScheduleFile, CliError> {
    let text = read(path)?;
    let file: ScheduleFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    if file.gen_times.len() != file.comp_starts.len() {
        return Err(CliError::Parse(format!(
            "{}: gen_times has {} entries but comp_starts has {}",
            path.display(),
            file.gen_times.len(),
            file.comp_starts.len()
        )));
    }
    Ok(file)
}

pub fn write_schedule(path: &Path, file: &ScheduleFile) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(file).expect("schedule serializes");
    text.push('\n');
    write_text(path, &text)
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}
