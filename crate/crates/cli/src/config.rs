//! Experiment configs: one JSON document, optionally with a `batch` array whose entries
//! override the top-level keys.

use std::fmt;

use amvlab::graph::{GraphPoint, GraphSpec};
use amvlab::limits::{FitOptions, RadiiSpec, RegionNorm};
use amvlab::operators::PairingVariant;
use amvlab::{DistanceDescriptor, ScalarField, Scheme, SpaceDescriptor, WeightDescriptor};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// A config problem, located by its field path.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
    pub line: Option<usize>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = if self.path.is_empty() { "<root>" } else { &self.path };
        match self.line {
            Some(l) => write!(f, "{path}: {} (line {l})", self.message),
            None => write!(f, "{path}: {}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(path: impl Into<String>, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError { path: path.into(), message: message.into(), line: None })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Point,
    Sweep,
    Distortion,
    Moments,
    Weak,
    Graph,
    Verify,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Operator {
    #[default]
    Amv,
    Samv,
    Average,
    AdjointAverage,
    BallMeasure,
    /// `v_r / r²` on model spaces.
    Deviation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceBlock {
    pub distance: DistanceDescriptor,
    #[serde(default = "WeightDescriptor::lebesgue")]
    pub weight: WeightDescriptor,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionBlock {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub per_axis: usize,
    pub norm: RegionNorm,
    /// Constant the operator is compared against.
    #[serde(default)]
    pub reference: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSource {
    Inline { graph: GraphSpec },
    CircleSpokes {
        n: usize,
        #[serde(default)]
        include_circle: bool,
    },
    ThreePointLine { masses: [f64; 3] },
    Atomic { distances: Vec<Vec<f64>>, masses: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphBlock {
    pub source: GraphSource,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<GraphPoint>,
    /// One value per vertex, extended affinely along edges.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default)]
    pub comparability: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan_resolution: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Experiment {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub task: Task,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<ScalarField>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<ScalarField>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii: Option<RadiiSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<Scheme>,
    #[serde(default)]
    pub operator: Operator,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<PairingVariant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<RegionBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitOptions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// Sample budget for sup probes in distortion reports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
}

/// A validated experiment with its position in the document.
#[derive(Clone, Debug)]
pub struct Entry {
    pub path: String,
    pub name: String,
    pub experiment: Experiment,
}

fn line_of(e: &serde_json::Error) -> Option<usize> {
    (e.line() > 0).then_some(e.line())
}

/// Parses and validates a config document. `stem` names unnamed experiments.
pub fn parse(text: &str, stem: &str) -> Result<Vec<Entry>, ConfigError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| ConfigError { path: String::new(), message: e.to_string(), line: line_of(&e) })?;
    let Value::Object(mut top) = doc else {
        return err("", "config must be a JSON object");
    };
    let raw: Vec<(String, Value)> = match top.remove("batch") {
        None => vec![(String::new(), Value::Object(top))],
        Some(Value::Array(items)) => {
            if items.is_empty() {
                return err("batch", "batch array is empty");
            }
            let mut out = Vec::with_capacity(items.len());
            for (i, item) in items.into_iter().enumerate() {
                let Value::Object(over) = item else {
                    return err(format!("batch[{i}]"), "batch entries must be objects");
                };
                let mut merged: Map<String, Value> = top.clone();
                merged.extend(over);
                out.push((format!("batch[{i}]"), Value::Object(merged)));
            }
            out
        }
        Some(_) => return err("batch", "batch must be an array"),
    };
    let batch = raw.len() > 1 || raw.first().is_some_and(|(p, _)| !p.is_empty());
    let mut entries = Vec::with_capacity(raw.len());
    for (i, (prefix, value)) in raw.into_iter().enumerate() {
        let experiment: Experiment = serde_path_to_error::deserialize(value).map_err(|e| {
            let inner = e.path().to_string();
            let path = join(&prefix, if inner == "." { "" } else { &inner });
            ConfigError { path, message: e.into_inner().to_string(), line: None }
        })?;
        validate(&experiment).map_err(|mut e| {
            e.path = join(&prefix, &e.path);
            e
        })?;
        let name = match &experiment.name {
            Some(n) => n.clone(),
            None if batch => format!("{stem}-{i:03}"),
            None => stem.to_string(),
        };
        if name.is_empty() || name.contains(['/', '\\']) || name.starts_with('.') {
            return err(join(&prefix, "name"), "name must be a plain file stem");
        }
        if entries.iter().any(|e: &Entry| e.name == name) {
            return err(join(&prefix, "name"), format!("duplicate experiment name {name:?}"));
        }
        entries.push(Entry { path: prefix, name, experiment });
    }
    Ok(entries)
}

fn join(prefix: &str, path: &str) -> String {
    match (prefix.is_empty(), path.is_empty()) {
        (true, _) => path.to_string(),
        (false, true) => prefix.to_string(),
        (false, false) => format!("{prefix}.{path}"),
    }
}

fn need<'a, T>(v: &'a Option<T>, path: &str, task: Task) -> Result<&'a T, ConfigError> {
    v.as_ref().ok_or_else(|| ConfigError { path: path.into(), message: format!("required for task {task:?}").to_lowercase(), line: None })
}

fn check_radius(r: f64, path: &str) -> Result<(), ConfigError> {
    if !(r > 0.0) || !r.is_finite() {
        return err(path, format!("radius must be positive and finite, got {r}"));
    }
    Ok(())
}

fn check_radii(spec: &RadiiSpec) -> Result<(), ConfigError> {
    match spec {
        RadiiSpec::Geometric { r0, ratio, count } => {
            check_radius(*r0, "radii.r0")?;
            if !(*ratio > 0.0 && *ratio < 1.0) {
                return err("radii.ratio", format!("ratio must lie in (0, 1), got {ratio}"));
            }
            if *count < 2 {
                return err("radii.count", "a sweep needs at least two radii");
            }
        }
        RadiiSpec::List(list) => {
            for (i, r) in list.iter().enumerate() {
                check_radius(*r, &format!("radii[{i}]"))?;
            }
        }
    }
    spec.validate().map_err(|e| ConfigError { path: "radii".into(), message: e.to_string(), line: None })
}

/// Builds the space descriptor of an experiment.
pub fn space_of(e: &Experiment) -> Result<SpaceDescriptor, ConfigError> {
    let s = need(&e.space, "space", e.task)?;
    SpaceDescriptor::new(s.distance.clone(), s.weight.clone()).map_err(|err| ConfigError { path: "space".into(), message: err.to_string(), line: None })
}

fn check_point(e: &Experiment, space: &SpaceDescriptor) -> Result<(), ConfigError> {
    // weak pairings and region sweeps integrate over x themselves
    if space.model().is_some() || e.task == Task::Weak || e.region.is_some() {
        return Ok(());
    }
    let x = need(&e.x, "x", e.task)?;
    if x.len() != space.dim() {
        return err("x", format!("point has dimension {}, space has dimension {}", x.len(), space.dim()));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return err("x", "coordinates must be finite");
    }
    Ok(())
}

fn check_field(space: &SpaceDescriptor, key: &str, f: &ScalarField) -> Result<(), ConfigError> {
    f.validate().and_then(|_| f.check_dim(space.dim())).map_err(|err| ConfigError { path: key.into(), message: err.to_string(), line: None })
}

fn validate(e: &Experiment) -> Result<(), ConfigError> {
    if let Some(s) = &e.scheme {
        s.validate().map_err(|err| ConfigError { path: "scheme".into(), message: err.to_string(), line: None })?;
    }
    if let Some(r) = e.r {
        check_radius(r, "r")?;
    }
    if let Some(spec) = &e.radii {
        check_radii(spec)?;
    }
    if let Some(t) = e.tolerance {
        if !(t > 0.0) || !t.is_finite() {
            return err("tolerance", "tolerance must be positive");
        }
    }
    if let Some(f) = &e.fit {
        if f.degree > 4 {
            return err("fit.degree", "fit degree must be at most 4");
        }
        if !(f.agreement > 0.0) {
            return err("fit.agreement", "agreement must be positive");
        }
    }
    if e.budget == Some(0) {
        return err("budget", "budget must be positive");
    }
    match e.task {
        Task::Graph => {
            let g = need(&e.graph, "graph", e.task)?;
            need(&e.radii, "radii", e.task)?;
            if let Some(h) = g.scan_resolution {
                if !(h > 0.0) {
                    return err("graph.scan_resolution", "scan resolution must be positive");
                }
            }
            if let GraphSource::CircleSpokes { n: 0, .. } = g.source {
                return err("graph.source.n", "circle_spokes needs n ≥ 1");
            }
            return Ok(());
        }
        Task::Moments => {
            let space = space_of(e)?;
            if space.model().is_some() {
                return err("space.distance", "moments need point quadrature; model spaces only expose ball volumes");
            }
            check_point(e, &space)?;
            need(&e.radii, "radii", e.task)?;
            return Ok(());
        }
        _ => {}
    }
    let space = space_of(e)?;
    check_point(e, &space)?;
    let model = space.model().is_some();
    let needs_field = !matches!(e.operator, Operator::BallMeasure | Operator::Deviation) && e.task != Task::Distortion;
    if model && needs_field && e.task != Task::Distortion {
        return err("operator", "model spaces only support the ball_measure and deviation operators");
    }
    if e.operator == Operator::Deviation && !model && e.task != Task::Distortion {
        return err("operator", "deviation is defined on model spaces");
    }
    if needs_field {
        check_field(&space, "field", need(&e.field, "field", e.task)?)?;
    }
    match e.task {
        Task::Point => {
            need(&e.r, "r", e.task)?;
        }
        Task::Sweep | Task::Verify | Task::Distortion => {
            need(&e.radii, "radii", e.task)?;
        }
        Task::Weak => {
            need(&e.radii, "radii", e.task)?;
            let phi = need(&e.phi, "phi", e.task)?;
            check_field(&space, "phi", phi)?;
            if !matches!(phi, ScalarField::Bump { .. }) {
                return err("phi", "the test function must be a bump");
            }
        }
        Task::Graph | Task::Moments => unreachable!(),
    }
    if let Some(region) = &e.region {
        if e.task != Task::Sweep {
            return err("region", "region norms apply to sweeps only");
        }
        if region.lo.len() != space.dim() || region.hi.len() != space.dim() {
            return err("region", "region corners must match the space dimension");
        }
        if region.per_axis == 0 {
            return err("region.per_axis", "per_axis must be positive");
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#""space":{"distance":{"kind":"norm","n":2}},"field":{"kind":"polynomial","n":2,"coefficients":[{"powers":[2,0],"coef":1}]},"x":[0,0]"#;

    fn doc(extra: &str) -> String {
        format!("{{{BASE},{extra}}}")
    }

    #[test]
    fn single_experiment_takes_the_stem() {
        let e = parse(&doc(r#""task":"point","r":0.1"#), "run").unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].name, "run");
        assert_eq!(e[0].experiment.operator, Operator::Amv);
    }

    #[test]
    fn batch_overrides_are_shallow() {
        let e = parse(&doc(r#""task":"point","r":0.1,"batch":[{"r":0.2},{"name":"w","space":{"distance":{"kind":"norm","n":2,"p":1}}}]"#), "s").unwrap();
        assert_eq!(e[0].name, "s-000");
        assert_eq!(e[0].experiment.r, Some(0.2));
        assert_eq!(e[1].name, "w");
        assert_eq!(e[1].experiment.r, Some(0.1));
        assert_eq!(e[1].experiment.space.as_ref().unwrap().weight, WeightDescriptor::lebesgue());
        assert_eq!(e[1].path, "batch[1]");
    }

    #[test]
    fn errors_carry_paths() {
        let path = |text: &str| parse(text, "t").unwrap_err().path;
        assert_eq!(path(&doc(r#""task":"point","r":-1"#)), "r");
        assert_eq!(path(&doc(r#""task":"sweep","radii":[0.1,0.0]"#)), "radii[1]");
        assert_eq!(path(&doc(r#""task":"sweep","radii":{"r0":0.1,"ratio":2}"#)), "radii.ratio");
        assert_eq!(path(&doc(r#""task":"point","r":0.1,"x":[0]"#)), "x");
        assert_eq!(path(&doc(r#""task":"point""#)), "r");
        assert_eq!(path(&doc(r#""task":"point","r":0.1,"batch":[{},{"fit":{"degree":9}}]"#)), "batch[1].fit.degree");
        assert_eq!(path(&doc(r#""task":"teleport""#)), "task");
        assert!(path(&doc(r#""task":"point","r":0.1,"field":{"kind":"polynomial","n":2,"coefficients":[{"powers":[1],"coef":1}]}"#)).starts_with("field"));
        let syntax = parse("{\n\"task\": ", "t").unwrap_err();
        assert!(syntax.line.is_some());
    }

    #[test]
    fn weak_pairings_need_a_bump() {
        let e = parse(&doc(r#""task":"weak","radii":[0.1,0.05],"phi":{"kind":"sign"}"#), "t").unwrap_err();
        assert!(e.path.starts_with("phi"), "{e}");
        let ok = parse(&doc(r#""task":"weak","radii":[0.1,0.05],"phi":{"kind":"bump","center":[0,0],"radius":0.5,"power":2}"#), "t");
        assert!(ok.is_ok());
    }

    #[test]
    fn names_must_be_file_stems() {
        assert_eq!(parse(&doc(r#""task":"point","r":0.1,"name":"../x""#), "t").unwrap_err().path, "name");
        assert_eq!(parse(&doc(r#""task":"point","r":0.1,"batch":[]"#), "t").unwrap_err().path, "batch");
    }
}
