//! Job files: a TOML document describing a pointed model and the tasks to run.
//!
//! ```toml
//! variables = ["x", "y"]
//! ideal = ["y*x", "y*(x - 1)"]
//! point = ["0", "0"]
//! max_index = 4
//! tasks = ["all"]
//! cosection = ["x - 1", "-x"]
//! jets = [["t", "0"]]
//!
//! [sweep]
//! order = 3
//! grid = 1
//!
//! [caps]
//! generators = 512
//! seconds = 60.0
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cone::{jet_names, Cosection, SweepConfig};
use crate::dg::DEFAULT_GENERATOR_CAP;
use crate::error::{Error, Result};
use crate::poly::{parse_polynomial, parse_rational, PointedModel, Polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Task {
    Tangent,
    Classify,
    Bracket,
    Cone,
    Obstruct,
    Cosection,
    All,
}

impl Task {
    pub const CONCRETE: [Task; 6] =
        [Task::Tangent, Task::Classify, Task::Bracket, Task::Cone, Task::Obstruct, Task::Cosection];

    pub fn name(self) -> &'static str {
        match self {
            Task::Tangent => "tangent",
            Task::Classify => "classify",
            Task::Bracket => "bracket",
            Task::Cone => "cone",
            Task::Obstruct => "obstruct",
            Task::Cosection => "cosection",
            Task::All => "all",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Task::CONCRETE.iter().chain([Task::All].iter()).find(|t| t.name() == s).copied().ok_or_else(|| {
            Error::InvalidInput(format!(
                "unknown task '{s}' (expected one of tangent, classify, bracket, cone, obstruct, cosection, all)"
            ))
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Caps {
    pub generators: usize,
    pub seconds: Option<f64>,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { generators: DEFAULT_GENERATOR_CAP, seconds: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JobSpec {
    pub model: PointedModel,
    pub tasks: Vec<Task>,
    pub max_index: u32,
    pub cosection: Option<Cosection>,
    pub jets: Vec<Vec<Polynomial>>,
    pub sweep: SweepConfig,
    pub caps: Caps,
}

impl JobSpec {
    /// Requested tasks with `all` expanded, in canonical order.
    pub fn expanded_tasks(&self) -> Vec<Task> {
        let all = self.tasks.contains(&Task::All);
        Task::CONCRETE
            .iter()
            .copied()
            .filter(|t| {
                if *t == Task::Cosection {
                    self.cosection.is_some() && (all || self.tasks.contains(t))
                } else {
                    all || self.tasks.contains(t)
                }
            })
            .collect()
    }

    /// Jet order: one more than the highest `t` power, at least 2.
    pub fn jet_order(jet: &[Polynomial]) -> u32 {
        jet.iter().filter_map(Polynomial::total_degree).max().map_or(2, |d| (d + 1).max(2))
    }
}

#[derive(Serialize, Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<usize>,
}

#[derive(Serialize, Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct RawCaps {
    #[serde(skip_serializing_if = "Option::is_none")]
    generators: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seconds: Option<f64>,
}

#[derive(Serialize, Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RawJob {
    variables: Vec<String>,
    ideal: Vec<String>,
    point: Vec<String>,
    max_index: u32,
    tasks: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cosection: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    jets: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sweep: Option<RawSweep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    caps: Option<RawCaps>,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_poly_field(field: &str, i: usize, src: &str, names: &[String]) -> Result<Polynomial> {
    parse_polynomial(src, names).map_err(|e| Error::Syntax(format!("{field}[{i}] = {src:?}: {e}")))
}

pub fn parse_job(text: &str) -> Result<JobSpec> {
    let raw: RawJob =
        toml::from_str(text).map_err(|e| Error::Syntax(format!("job syntax: {}", e.to_string().trim_end())))?;
    let vars = raw.variables;
    for (i, v) in vars.iter().enumerate() {
        if !is_identifier(v) {
            return Err(Error::InvalidInput(format!("variables[{i}] = {v:?} is not an identifier")));
        }
        if vars[..i].contains(v) {
            return Err(Error::InvalidInput(format!("variable '{v}' is declared twice")));
        }
        if v == "t" {
            return Err(Error::InvalidInput("'t' is reserved for jet parameters".into()));
        }
    }
    let ideal = raw
        .ideal
        .iter()
        .enumerate()
        .map(|(i, s)| parse_poly_field("ideal", i, s, &vars))
        .collect::<Result<Vec<_>>>()?;
    let point = raw
        .point
        .iter()
        .enumerate()
        .map(|(i, s)| parse_rational(s).map_err(|e| Error::Syntax(format!("point[{i}] = {s:?}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let model = PointedModel::new(vars.clone(), ideal, point)?;
    model.check_on_locus()?;

    if raw.max_index == 0 {
        return Err(Error::InvalidInput("max_index must be at least 1".into()));
    }
    if raw.tasks.is_empty() {
        return Err(Error::InvalidInput("tasks must not be empty".into()));
    }
    let mut tasks = Vec::new();
    for t in &raw.tasks {
        let t: Task = t.parse()?;
        if !tasks.contains(&t) {
            tasks.push(t);
        }
    }
    let cosection = match raw.cosection {
        None => None,
        Some(c) => {
            if c.len() != model.ngens() {
                return Err(Error::InvalidInput(format!(
                    "cosection has {} components but the ideal has {} generators",
                    c.len(),
                    model.ngens()
                )));
            }
            let comps =
                c.iter().enumerate().map(|(i, s)| parse_poly_field("cosection", i, s, &vars)).collect::<Result<_>>()?;
            Some(Cosection::new(comps))
        }
    };
    if tasks.contains(&Task::Cosection) && cosection.is_none() {
        return Err(Error::InvalidInput("task 'cosection' requires a cosection".into()));
    }
    let tnames = jet_names();
    let mut jets = Vec::new();
    for (k, jet) in raw.jets.iter().enumerate() {
        if jet.len() != model.nvars() {
            return Err(Error::InvalidInput(format!(
                "jets[{k}] has {} components, expected {}",
                jet.len(),
                model.nvars()
            )));
        }
        let parsed = jet
            .iter()
            .enumerate()
            .map(|(i, s)| {
                parse_polynomial(s, &tnames).map_err(|e| Error::Syntax(format!("jets[{k}][{i}] = {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        jets.push(parsed);
    }
    let defaults = SweepConfig::default();
    let rs = raw.sweep.unwrap_or_default();
    let sweep = SweepConfig {
        max_order: rs.order.unwrap_or(defaults.max_order),
        grid: rs.grid.unwrap_or(defaults.grid),
        seed: rs.seed,
        random_samples: rs.samples.unwrap_or(if rs.seed.is_some() { 8 } else { 0 }),
    };
    if sweep.max_order < 2 {
        return Err(Error::InvalidInput("sweep.order must be at least 2".into()));
    }
    if sweep.grid < 0 {
        return Err(Error::InvalidInput("sweep.grid must be non-negative".into()));
    }
    let rc = raw.caps.unwrap_or_default();
    let caps = Caps { generators: rc.generators.unwrap_or(DEFAULT_GENERATOR_CAP), seconds: rc.seconds };
    if matches!(caps.seconds, Some(s) if !(s > 0.0 && s.is_finite())) {
        return Err(Error::InvalidInput("caps.seconds must be a positive number".into()));
    }
    Ok(JobSpec { model, tasks, max_index: raw.max_index, cosection, jets, sweep, caps })
}

/// Canonical TOML text for a job; `parse_job` reads it back to an equal spec.
pub fn print_job(spec: &JobSpec) -> String {
    let vars = &spec.model.variables;
    let tnames = jet_names();
    let raw = RawJob {
        variables: vars.clone(),
        ideal: spec.model.generators.iter().map(|g| g.to_string_with(vars)).collect(),
        point: spec.model.point.iter().map(|c| c.to_string()).collect(),
        max_index: spec.max_index,
        tasks: spec.tasks.iter().map(|t| t.name().to_string()).collect(),
        cosection: spec.cosection.as_ref().map(|c| c.components.iter().map(|p| p.to_string_with(vars)).collect()),
        jets: spec.jets.iter().map(|j| j.iter().map(|p| p.to_string_with(&tnames)).collect()).collect(),
        sweep: Some(RawSweep {
            order: Some(spec.sweep.max_order),
            grid: Some(spec.sweep.grid),
            seed: spec.sweep.seed,
            samples: Some(spec.sweep.random_samples),
        }),
        caps: Some(RawCaps { generators: Some(spec.caps.generators), seconds: spec.caps.seconds }),
    };
    toml::to_string(&raw).expect("job fields are always serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    const NODE: &str = r#"
variables = ["x", "y"]
ideal = ["x*y"]
point = ["0", "0"]
max_index = 4
tasks = ["all"]
"#;

    #[test]
    fn node_job() {
        let spec = parse_job(NODE).unwrap();
        assert_eq!(spec.model.ngens(), 1);
        assert_eq!(spec.tasks, vec![Task::All]);
        assert_eq!(spec.max_index, 4);
        assert_eq!(spec.expanded_tasks().len(), 5);
    }

    #[test]
    fn point_off_locus() {
        let text = NODE.replace(r#"point = ["0", "0"]"#, r#"point = ["1", "1"]"#);
        let err = parse_job(&text).unwrap_err();
        assert!(err.to_string().starts_with("point not on zero locus"), "{err}");
    }

    #[test]
    fn power_operator_is_rejected() {
        let text = NODE.replace("x*y", "x**2");
        let err = parse_job(&text).unwrap_err().to_string();
        assert!(err.contains("column 3") && err.contains("'^'"), "{err}");
    }

    #[test]
    fn bad_task_and_syntax() {
        let err = parse_job(&NODE.replace("\"all\"", "\"everything\"")).unwrap_err().to_string();
        assert!(err.contains("unknown task 'everything'"), "{err}");
        let err = parse_job("variables = [\"x\"\n").unwrap_err().to_string();
        assert!(err.contains("line"), "{err}");
        let err = parse_job(&NODE.replace("tasks = [\"all\"]", "tasks = [\"cosection\"]")).unwrap_err().to_string();
        assert!(err.contains("requires a cosection"), "{err}");
    }

    #[test]
    fn round_trip() {
        let text = r#"
variables = ["x", "y"]
ideal = ["y*x", "y*(x - 1)"]
point = ["0", "0"]
max_index = 3
tasks = ["cone", "cosection"]
cosection = ["x - 1", "-x"]
jets = [["t", "0"], ["t + 1/2*t^2", "0"]]

[sweep]
order = 3
grid = 1
seed = 11

[caps]
generators = 100
seconds = 12.5
"#;
        let spec = parse_job(text).unwrap();
        assert_eq!(parse_job(&print_job(&spec)).unwrap(), spec);
        assert_eq!(JobSpec::jet_order(&spec.jets[1]), 3);
    }
}
