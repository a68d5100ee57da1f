//! Python bindings. Build with `maturin develop --features extension-module`
//! from this directory, or see `python/smoke_test.py`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use cnlasp_core::asp::Term;
use cnlasp_core::bundled::{self, parse_facts};
use cnlasp_core::cnl::SyntaxVerdict;
use cnlasp_core::dataset::{audit_manifest, DatasetManifest};
use cnlasp_core::metrics::{evaluate, EvalPair, MetricConfig};
use cnlasp_core::pipeline::{
    run_pipeline, serve_echo, PipelineInputs, TranslatorSpec, PROTOCOL_NAME, PROTOCOL_VERSION,
};
use cnlasp_core::solver::{
    check_uniform_equivalence_bounded, solve, Sample, Signature, SolverConfig,
};
use cnlasp_core::{compile, parse_cnl, parse_program, print_program};

type Result<T> = std::result::Result<T, String>;

pub fn compile_text(cnl: &str) -> Result<String> {
    let doc = parse_cnl(cnl).map_err(|e| e.to_string())?;
    Ok(print_program(&compile(&doc).map_err(|e| e.to_string())?))
}

pub fn syntax_category(sentence: &str) -> Option<String> {
    match cnlasp_core::check_syntax(sentence, None) {
        SyntaxVerdict::Accepted { category } => Some(category.to_string()),
        SyntaxVerdict::Rejected { .. } => None,
    }
}

pub fn answer_sets(program: &str, facts: &str) -> Result<Vec<Vec<String>>> {
    let program = parse_program(program).map_err(|e| e.to_string())?;
    let facts = parse_facts(facts)?;
    let sets = solve(&program, &facts, &SolverConfig::default()).map_err(|e| e.to_string())?;
    Ok(sets
        .into_iter()
        .map(|s| s.atoms.iter().map(ToString::to_string).collect())
        .collect())
}

/// Exhaustive check; returns the verdict as JSON.
pub fn equivalence_json(
    left: &str,
    right: &str,
    signature: &[String],
    universe: &[String],
) -> Result<String> {
    let left = parse_program(left).map_err(|e| e.to_string())?;
    let right = parse_program(right).map_err(|e| e.to_string())?;
    let signature = signature
        .iter()
        .map(|s| s.parse::<Signature>())
        .collect::<Result<Vec<_>>>()?;
    let universe: Vec<Term> = universe
        .iter()
        .map(|s| {
            s.parse::<i64>()
                .map_or_else(|_| Term::constant(s.as_str()), Term::Int)
        })
        .collect();
    let verdict =
        check_uniform_equivalence_bounded(&left, &right, &signature, &universe, Sample::Exhaustive)
            .map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&verdict).expect("verdict serializes"))
}

pub fn evaluate_json(
    hypotheses: &[String],
    references: &[String],
    cnl_syntax: bool,
) -> Result<String> {
    if hypotheses.len() != references.len() {
        return Err(format!(
            "{} hypotheses but {} references",
            hypotheses.len(),
            references.len()
        ));
    }
    let pairs: Vec<EvalPair> = hypotheses
        .iter()
        .zip(references)
        .map(|(h, r)| EvalPair::new(h.as_str(), r.as_str()))
        .collect();
    let report =
        evaluate(&pairs, &MetricConfig::default(), cnl_syntax).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&report).expect("report serializes"))
}

/// Runs a bundled problem through the retrieval translator.
pub fn run_problem_json(name: &str) -> Result<String> {
    let p = bundled::problem(name).ok_or_else(|| format!("unknown problem '{name}'"))?;
    let inputs = PipelineInputs {
        sentences: p.nl.clone(),
        references: Some(p.cnl.clone()),
        gold: Some(p.gold_program().map_err(|e| e.to_string())?),
        equivalence: Some(p.equivalence_setup().map_err(|e| e.to_string())?),
        ..PipelineInputs::default()
    };
    let run = run_pipeline(
        &inputs,
        &TranslatorSpec::BuiltinRetrieval,
        &bundled::templates(),
    )
    .map_err(|e| e.to_string())?;
    Ok(run.to_json())
}

pub fn manifest_violations(manifest_json: &str) -> Result<Vec<String>> {
    let m: DatasetManifest = serde_json::from_str(manifest_json).map_err(|e| e.to_string())?;
    Ok(match audit_manifest(&m) {
        Ok(()) => Vec::new(),
        Err(v) => v.iter().map(ToString::to_string).collect(),
    })
}

/// Output of the reference echo plugin for a block of request lines.
pub fn echo_transcript(requests: &str) -> String {
    let mut out = Vec::new();
    serve_echo(requests.as_bytes(), &mut out).expect("in-memory io");
    String::from_utf8(out).expect("utf-8 output")
}

fn py<T>(r: Result<T>) -> PyResult<T> {
    r.map_err(PyValueError::new_err)
}

#[pyfunction]
#[pyo3(name = "compile")]
fn py_compile(cnl: &str) -> PyResult<String> {
    py(compile_text(cnl))
}

#[pyfunction]
#[pyo3(name = "check_syntax")]
fn py_check_syntax(sentence: &str) -> Option<String> {
    syntax_category(sentence)
}

#[pyfunction]
#[pyo3(name = "solve", signature = (program, facts = ""))]
fn py_solve(program: &str, facts: &str) -> PyResult<Vec<Vec<String>>> {
    py(answer_sets(program, facts))
}

#[pyfunction]
#[pyo3(name = "equivalence")]
fn py_equivalence(
    left: &str,
    right: &str,
    signature: Vec<String>,
    universe: Vec<String>,
) -> PyResult<String> {
    py(equivalence_json(left, right, &signature, &universe))
}

#[pyfunction]
#[pyo3(name = "evaluate", signature = (hypotheses, references, cnl_syntax = false))]
fn py_evaluate(
    hypotheses: Vec<String>,
    references: Vec<String>,
    cnl_syntax: bool,
) -> PyResult<String> {
    py(evaluate_json(&hypotheses, &references, cnl_syntax))
}

#[pyfunction]
#[pyo3(name = "run_problem")]
fn py_run_problem(name: &str) -> PyResult<String> {
    py(run_problem_json(name))
}

#[pyfunction]
#[pyo3(name = "audit_manifest")]
fn py_audit_manifest(manifest_json: &str) -> PyResult<Vec<String>> {
    py(manifest_violations(manifest_json))
}

#[pyfunction]
#[pyo3(name = "echo_transcript")]
fn py_echo_transcript(requests: &str) -> String {
    echo_transcript(requests)
}

#[pymodule]
fn cnlasp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("PROTOCOL_NAME", PROTOCOL_NAME)?;
    m.add("PROTOCOL_VERSION", PROTOCOL_VERSION)?;
    m.add_function(wrap_pyfunction!(py_compile, m)?)?;
    m.add_function(wrap_pyfunction!(py_check_syntax, m)?)?;
    m.add_function(wrap_pyfunction!(py_solve, m)?)?;
    m.add_function(wrap_pyfunction!(py_equivalence, m)?)?;
    m.add_function(wrap_pyfunction!(py_evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(py_run_problem, m)?)?;
    m.add_function(wrap_pyfunction!(py_audit_manifest, m)?)?;
    m.add_function(wrap_pyfunction!(py_echo_transcript, m)?)?;
    Ok(())
}
