use std::fmt::Write as _;
use std::path::Path;

use expanders::acceptance::{run_suite, Level};
use expanders::generators::GenSpec;
use expanders::graph::{Graph, VertexSet};
use expanders::io::{parse_edge_list, write_edge_list};
use expanders::oracles::rho_exact;
use expanders::partition::{partition_into_expanders, verify_clustering, AlgoConfig, PartitionError, VerifyMode};
use expanders::spectral::{eigenpairs_with, sweep_cut, EigenOptions, Method};
use serde::Serialize;
use serde_json::Value;

use crate::report::{emit, write_text, CliError, InputRef, Manifest, Report, SCHEMA};
use crate::{MethodArg, Output, Source};

struct Loaded {
    graph: Graph,
    input: InputRef,
}

fn load(source: &Source) -> Result<Loaded, CliError> {
    match (&source.input, &source.generator) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let graph = parse_edge_list(&text).map_err(|source| CliError::Parse {
                path: path.display().to_string(),
                source,
            })?;
            Ok(Loaded {
                graph,
                input: InputRef::Path(path.clone()),
            })
        }
        (None, Some(spec)) => {
            let parsed: GenSpec = spec.parse()?;
            Ok(Loaded {
                graph: parsed.generate()?.graph,
                input: InputRef::Generator(parsed.to_string()),
            })
        }
        (None, None) => Err(CliError::Input("one of --input or --gen is required".into())),
    }
}

fn report<C: Serialize, R: Serialize>(
    command: &'static str,
    input: Option<InputRef>,
    config: C,
    seed: Option<u64>,
    result: R,
    output: &Output,
) -> Result<(), CliError> {
    let envelope = Report {
        schema: SCHEMA,
        manifest: Manifest::new(command, input, config, seed),
        result,
    };
    emit(&envelope, output.out.as_deref())
}

#[derive(Serialize)]
struct PartialResult<'a> {
    status: &'static str,
    cap: usize,
    partial: &'a expanders::partition::PartialRun,
}

#[allow(clippy::too_many_arguments)]
pub fn partition(
    source: &Source,
    k: usize,
    c0: f64,
    tol: f64,
    max_iter: Option<usize>,
    seed: u64,
    trace: bool,
    output: &Output,
) -> Result<(), CliError> {
    let Loaded { graph, input } = load(source)?;
    let cfg = AlgoConfig {
        k,
        c0,
        tol,
        max_iterations: max_iter,
        seed,
    };
    match partition_into_expanders(&graph, &cfg) {
        Ok((_, mut result)) => {
            for w in &result.warnings {
                eprintln!("warning: {w}");
            }
            if !trace {
                result.trace.clear();
            }
            report("partition", Some(input), &cfg, Some(seed), &result, output)
        }
        Err(PartitionError::CapExceeded { cap, partial }) => {
            // The state reached so far is still worth keeping.
            let mut partial = *partial;
            if !trace {
                partial.trace.clear();
            }
            let result = PartialResult {
                status: "cap-exceeded",
                cap,
                partial: &partial,
            };
            report("partition", Some(input), &cfg, Some(seed), &result, output)?;
            Err(CliError::CapExceeded(format!(
                "iteration cap of {cap} reached before the search converged"
            )))
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Serialize)]
struct SpectralConfig {
    k: usize,
    sweep: bool,
    tol: f64,
    method: Method,
}

#[derive(Serialize)]
struct SweepSummary {
    set: VertexSet,
    conductance: f64,
    cheeger_lower: f64,
    cheeger_upper: f64,
}

#[derive(Serialize)]
struct SpectralSummary {
    eigenvalues: Vec<f64>,
    residuals: Vec<f64>,
    method: Method,
    sweep: Option<SweepSummary>,
}

pub fn spectral(
    source: &Source,
    k: usize,
    sweep: bool,
    tol: f64,
    method: MethodArg,
    seed: u64,
    output: &Output,
) -> Result<(), CliError> {
    let Loaded { graph, input } = load(source)?;
    let method = match method {
        MethodArg::Auto => Method::Auto,
        MethodArg::Dense => Method::Dense,
        MethodArg::Iterative => Method::Iterative,
    };
    let opts = EigenOptions {
        tol,
        method,
        seed,
        max_matvecs: None,
    };
    let count = if sweep { k.max(2) } else { k };
    let res = eigenpairs_with(&graph, count, &opts)?;
    let sweep_summary = if sweep {
        let lambda2 = res.eigenvalues[1];
        let cut = sweep_cut(&graph, &res.embedding(&graph, 1))?;
        Some(SweepSummary {
            set: cut.set,
            conductance: cut.conductance,
            cheeger_lower: lambda2 / 2.0,
            cheeger_upper: (2.0 * lambda2.max(0.0)).sqrt(),
        })
    } else {
        None
    };
    let summary = SpectralSummary {
        eigenvalues: res.eigenvalues[..k].to_vec(),
        residuals: res.residuals[..k].to_vec(),
        method: res.method,
        sweep: sweep_summary,
    };
    let config = SpectralConfig { k, sweep, tol, method };
    report("spectral", Some(input), config, Some(seed), summary, output)
}

fn parse_set(csv: &str, n: usize) -> Result<VertexSet, CliError> {
    let mut ids = Vec::new();
    for token in csv.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let v: usize = token
            .parse()
            .map_err(|_| CliError::Input(format!("invalid vertex id '{token}' in --set")))?;
        if v >= n {
            return Err(CliError::Input(format!("vertex {v} out of range for n = {n}")));
        }
        ids.push(v);
    }
    Ok(VertexSet::from_vec(ids))
}

#[derive(Serialize)]
struct SetConfig<'a> {
    set: &'a VertexSet,
}

#[derive(Serialize)]
struct ConductanceSummary {
    size: usize,
    volume: f64,
    boundary: f64,
    conductance: f64,
}

pub fn conductance(source: &Source, csv: &str, output: &Output) -> Result<(), CliError> {
    let Loaded { graph, input } = load(source)?;
    let set = parse_set(csv, graph.n())?;
    let summary = ConductanceSummary {
        size: set.len(),
        volume: graph.volume(&set)?,
        boundary: graph.boundary(&set)?,
        conductance: graph.conductance(&set)?,
    };
    report("conductance", Some(input), SetConfig { set: &set }, None, summary, output)
}

#[derive(Serialize)]
struct KConfig {
    k: usize,
}

pub fn rho(source: &Source, k: usize, output: &Output) -> Result<(), CliError> {
    let Loaded { graph, input } = load(source)?;
    let entry = rho_exact(&graph, k)?;
    report("rho", Some(input), KConfig { k }, None, entry, output)
}

/// Accepts `[[..], ..]`, `{"parts": [[..], ..]}` or a partition report,
/// whose parts sit under `result`.
fn parse_parts(value: &Value) -> Option<Vec<VertexSet>> {
    let list = match value {
        Value::Array(_) => value,
        Value::Object(map) => match (map.get("parts"), map.get("result")) {
            (Some(parts), _) => parts,
            (None, Some(inner)) => return parse_parts(inner),
            (None, None) => return None,
        },
        _ => return None,
    };
    list.as_array()?
        .iter()
        .map(|part| {
            part.as_array()?
                .iter()
                .map(|v| v.as_u64().map(|x| x as usize))
                .collect::<Option<Vec<_>>>()
                .map(VertexSet::from_vec)
        })
        .collect()
}

#[derive(Serialize)]
struct VerifyConfig<'a> {
    parts_file: &'a Path,
    phi_in: f64,
    phi_out: f64,
    mode: VerifyMode,
    tol: f64,
}

pub fn verify(
    source: &Source,
    parts_file: &Path,
    phi_in: f64,
    phi_out: f64,
    mode: VerifyMode,
    tol: f64,
    output: &Output,
) -> Result<(), CliError> {
    let Loaded { graph, input } = load(source)?;
    let text = std::fs::read_to_string(parts_file).map_err(|e| CliError::io(parts_file, e))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", parts_file.display())))?;
    let parts = parse_parts(&value).ok_or_else(|| {
        CliError::Input(format!(
            "{}: expected a list of vertex-id lists, or an object with 'parts'",
            parts_file.display()
        ))
    })?;
    let result = verify_clustering(&graph, &parts, phi_in, phi_out, mode, tol)?;
    let passed = result.passed;
    let config = VerifyConfig {
        parts_file,
        phi_in,
        phi_out,
        mode,
        tol,
    };
    report("verify", Some(input), config, None, &result, output)?;
    if passed {
        Ok(())
    } else {
        Err(CliError::NotCertified("partition is not certified at the requested thresholds".into()))
    }
}

pub fn generate(spec: &str, output: &Output) -> Result<(), CliError> {
    let parsed: GenSpec = spec.parse()?;
    let generated = parsed.generate()?;
    let mut text = String::new();
    let _ = writeln!(text, "# {parsed}");
    if let Some(labels) = &generated.labels {
        let joined: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
        let _ = writeln!(text, "# labels {}", joined.join(" "));
    }
    text.push_str(&write_edge_list(&generated.graph));
    write_text(&text, output.out.as_deref())
}

pub fn suite(level: Level, output: &Output) -> Result<(), CliError> {
    let result = run_suite(level);
    // The table always goes to stdout; --out additionally gets the JSON.
    for c in &result.criteria {
        println!("{c}");
        for f in &c.failures {
            println!("    fail: {f}");
        }
    }
    if output.out.is_some() {
        report("suite", None, level, None, &result, output)?;
    }
    let failed = result.criteria.iter().filter(|c| !c.passed).count();
    if failed == 0 {
        println!("{} of {} criteria passed", result.criteria.len(), result.criteria.len());
        Ok(())
    } else {
        Err(CliError::NotCertified(format!(
            "{failed} of {} criteria failed",
            result.criteria.len()
        )))
    }
}
