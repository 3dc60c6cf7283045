//! Writers and readers for the analysis outputs: edge-probability CSV,
//! posterior summary JSON, fitted-values CSV, DOT export and ROC CSV.

use std::path::Path;

use serde::Serialize;

use crate::data::TimeCourseDataset;
use crate::error::{CdbnError, Result};
use crate::evaluate::RocCurve;
use crate::inference::{EdgeProbabilityMatrix, FittedSeries, NodePosterior};

fn write_file(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|e| CdbnError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

/// Write a p × p probability matrix with node names on both the header
/// row and the first column; rows are parents, columns are children.
pub fn write_edge_matrix_csv(
    probs: &EdgeProbabilityMatrix,
    names: &[String],
    path: impl AsRef<Path>,
) -> Result<()> {
    let p = probs.num_nodes();
    let mut out = String::new();
    out.push_str("parent");
    for name in names {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for i in 0..p {
        out.push_str(&names[i]);
        for j in 0..p {
            out.push_str(&format!(",{}", probs.get(i, j)));
        }
        out.push('\n');
    }
    write_file(path.as_ref(), &out)
}

/// Read a matrix written by [`write_edge_matrix_csv`].
pub fn load_edge_matrix_csv(
    path: impl AsRef<Path>,
) -> Result<(Vec<String>, EdgeProbabilityMatrix)> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| CdbnError::InvalidEvaluation(format!("{}: {e}", path.display())))?;
    let names: Vec<String> = reader
        .headers()
        .map_err(|e| CdbnError::InvalidEvaluation(format!("{}: {e}", path.display())))?
        .iter()
        .skip(1)
        .map(str::to_owned)
        .collect();
    let p = names.len();
    let mut probs = vec![0.0; p * p];
    for (i, record) in reader.records().enumerate() {
        let record =
            record.map_err(|e| CdbnError::InvalidEvaluation(format!("{}: {e}", path.display())))?;
        for j in 0..p {
            probs[i * p + j] = record[j + 1].parse().map_err(|_| {
                CdbnError::InvalidEvaluation(format!(
                    "non-numeric probability `{}` at row {i}",
                    &record[j + 1]
                ))
            })?;
        }
    }
    Ok((names, EdgeProbabilityMatrix::from_vec(p, probs)))
}

#[derive(Serialize)]
struct ModelSummary {
    parents: Vec<String>,
    probability: f64,
    log_marginal: f64,
    log_prior: f64,
}

#[derive(Serialize)]
struct NodeSummary {
    node: String,
    log_evidence: f64,
    top_models: Vec<ModelSummary>,
    excluded: Vec<String>,
}

/// Posterior summary JSON: the top-K models per node with log scores,
/// plus any excluded models.
pub fn write_posterior_json(
    posteriors: &[NodePosterior],
    names: &[String],
    top_k: usize,
    path: impl AsRef<Path>,
) -> Result<()> {
    let summary: Vec<NodeSummary> = posteriors
        .iter()
        .map(|post| NodeSummary {
            node: names[post.node].clone(),
            log_evidence: post.log_evidence,
            top_models: post
                .top_models(top_k)
                .into_iter()
                .map(|(pset, prob, score)| ModelSummary {
                    parents: pset.parents().iter().map(|&i| names[i].clone()).collect(),
                    probability: *prob,
                    log_marginal: score.log_marginal,
                    log_prior: score.log_prior,
                })
                .collect(),
            excluded: post
                .excluded
                .iter()
                .map(|(pset, reason)| {
                    format!(
                        "γ={:?}: {reason}",
                        pset.parents()
                            .iter()
                            .map(|&i| &names[i])
                            .collect::<Vec<_>>()
                    )
                })
                .collect(),
        })
        .collect();
    write_file(
        path.as_ref(),
        &serde_json::to_string_pretty(&summary).expect("serializable summary"),
    )
}

/// Fitted values in the same wide CSV layout as a dataset.
pub fn write_fitted_csv(
    fitted: &FittedSeries,
    data: &TimeCourseDataset,
    path: impl AsRef<Path>,
) -> Result<()> {
    let mut out = String::from("condition,time");
    for name in data.node_names() {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (c, label) in data.conditions().iter().enumerate() {
        for (t, time) in data.times().iter().enumerate() {
            out.push_str(&format!("{label},{time}"));
            for j in 0..data.num_nodes() {
                out.push_str(&format!(",{}", fitted.value(j, c, t)));
            }
            out.push('\n');
        }
    }
    write_file(path.as_ref(), &out)
}

/// DOT export of a directed edge set.
pub fn write_dot(edges: &[(usize, usize)], names: &[String], path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::from("digraph network {\n");
    for name in names {
        out.push_str(&format!("  \"{name}\";\n"));
    }
    for &(i, j) in edges {
        out.push_str(&format!("  \"{}\" -> \"{}\";\n", names[i], names[j]));
    }
    out.push_str("}\n");
    write_file(path.as_ref(), &out)
}

/// ROC points as CSV (`threshold,fpr,tpr`).
pub fn write_roc_csv(curve: &RocCurve, path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::from("threshold,fpr,tpr\n");
    for point in &curve.points {
        out.push_str(&format!(
            "{},{},{}\n",
            point.threshold, point.fpr, point.tpr
        ));
    }
    write_file(path.as_ref(), &out)
}
