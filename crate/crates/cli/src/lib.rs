//! Library side of the `amvlab` command: config parsing, task execution and output bundles.

pub mod config;
pub mod tasks;

use std::fs;
use std::path::{Path, PathBuf};

use amvlab::limits::RadiusProfile;

pub use config::{parse, ConfigError, Entry};
pub use tasks::{Bundle, Context, TaskError};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VERIFY_FAILED: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const RUNTIME: i32 = 3;
}

/// A failure with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Failure { code: exit::CONFIG, message: message.into() }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        Failure { code: exit::RUNTIME, message: message.into() }
    }
}

impl From<TaskError> for Failure {
    fn from(e: TaskError) -> Self {
        match e {
            TaskError::Config(c) => Failure::config(format!("config error at {c}")),
            TaskError::Runtime(m) => Failure::runtime(m),
        }
    }
}

/// Reads `AMVLAB_THREADS`; unset means rayon's default.
pub fn thread_count(var: Option<&str>) -> Result<Option<usize>, Failure> {
    match var {
        None => Ok(None),
        Some(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::config(format!("AMVLAB_THREADS must be a positive integer, got {s:?}"))),
        },
    }
}

pub fn load(path: &Path) -> Result<Vec<Entry>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("experiment");
    config::parse(&text, stem).map_err(|e| Failure::config(format!("config error at {e}")))
}

fn csv_name(name: &str, suffix: &str) -> String {
    format!("{name}{suffix}.csv")
}

fn csv_of(p: &RadiusProfile) -> String {
    p.to_csv()
}

/// Writes `name.json` and one CSV per table; returns the written paths.
pub fn write_bundle(dir: &Path, b: &Bundle) -> Result<Vec<PathBuf>, Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::runtime(format!("cannot create {}: {e}", dir.display())))?;
    let mut written = vec![];
    let json = dir.join(format!("{}.json", b.name));
    fs::write(&json, b.json_text()).map_err(|e| Failure::runtime(format!("cannot write {}: {e}", json.display())))?;
    written.push(json);
    for t in &b.tables {
        let p = dir.join(csv_name(&b.name, &t.suffix));
        fs::write(&p, csv_of(&t.profile)).map_err(|e| Failure::runtime(format!("cannot write {}: {e}", p.display())))?;
        written.push(p);
    }
    Ok(written)
}

/// Summary of a finished run.
#[derive(Debug, Default)]
pub struct Report {
    pub lines: Vec<String>,
    pub failed_verifications: usize,
}

/// Runs the selected entries and writes their bundles. Stops at the first config or runtime error
/// (in document order), after writing the bundles that precede it.
pub fn execute(entries: &[Entry], ctx: &Context, out_dir: &Path, threads: Option<usize>) -> Result<Report, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Failure::runtime(format!("thread pool: {e}")))?;
    let results = pool.install(|| tasks::run_all(entries, ctx));
    let mut report = Report::default();
    for res in results {
        let b = res?;
        write_bundle(out_dir, &b)?;
        if b.verified == Some(false) {
            report.failed_verifications += 1;
        }
        report.lines.push(format!("{}: {}", b.name, b.summary));
    }
    Ok(report)
}

/// The human-readable catalog of fields, weights, distances, schemes and graph presets.
pub fn catalog() -> String {
    let lines = [
        "fields (\"field\", \"phi\")",
        "  polynomial      {\"kind\":\"polynomial\",\"n\":2,\"coefficients\":[{\"powers\":[2,0],\"coef\":1}]}",
        "  sign            {\"kind\":\"sign\"}   (n = 1)",
        "  weight          {\"kind\":\"weight\",\"weight\":{\"kind\":\"exp_linear\",\"a\":[1,0]}}",
        "  bump            {\"kind\":\"bump\",\"center\":[0,0],\"radius\":0.5,\"power\":2}",
        "weights (\"space.weight\")",
        "  constant        {\"kind\":\"constant\",\"c\":1}",
        "  exp_linear      {\"kind\":\"exp_linear\",\"a\":[1,0]}",
        "  power_alpha     {\"kind\":\"power_alpha\",\"alpha\":2}",
        "  separable       {\"kind\":\"separable\",\"radial\":{\"kind\":\"power\",\"alpha\":2},\"fourier\":{\"a0\":1,\"am\":[0,0.5],\"bm\":[]}}",
        "  product         {\"kind\":\"product\",\"factors\":[...]}",
        "distances (\"space.distance\")",
        "  norm            {\"kind\":\"norm\",\"n\":2,\"p\":2}",
        "  alpha_warped    {\"kind\":\"alpha_warped\",\"alpha\":[1,2],\"p\":2}",
        "  asymmetric_half_line {\"kind\":\"asymmetric_half_line\"}",
        "  model           {\"kind\":\"model\",\"model\":\"sphere\",\"n\":3}   (also euclidean, hyperbolic)",
        "schemes (\"scheme\")",
        "  auto            {\"kind\":\"auto\",\"tolerance\":1e-10}",
        "  exact           {\"kind\":\"exact\"}",
        "  gauss           {\"kind\":\"gauss\",\"level\":4}",
        "  qmc, mc         {\"kind\":\"qmc\",\"count\":65536}",
        "operators (\"operator\")",
        "  amv samv average adjoint_average ball_measure deviation",
        "tasks (\"task\")",
        "  point sweep verify distortion moments weak graph",
        "graph sources (\"graph.source\")",
        "  inline          {\"kind\":\"inline\",\"graph\":{\"vertices\":[...],\"edges\":[...],\"rays\":[...]}}",
        "  circle_spokes   {\"kind\":\"circle_spokes\",\"n\":8,\"include_circle\":false}",
        "  three_point_line {\"kind\":\"three_point_line\",\"masses\":[1,1,1]}",
        "  atomic          {\"kind\":\"atomic\",\"distances\":[[0,1],[1,0]],\"masses\":[1,1]}",
    ];
    let mut s = lines.join("\n");
    s.push('\n');
    s
}
