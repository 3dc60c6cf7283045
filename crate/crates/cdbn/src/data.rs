//! Time-course datasets, intervention designs and prior networks.
//!
//! File formats:
//!
//! - Dataset: wide CSV with header `condition,time,<node1>,...,<nodep>`,
//!   one row per (condition, time) pair. Wide format is used because the
//!   model consumes one observation vector per row; a long format would
//!   need to be pivoted before every analysis.
//! - Intervention design: JSON object mapping condition labels to arrays
//!   of inhibited node names.
//! - Prior network: edge-list CSV with header `parent,child`.
//!
//! Missing cells are rejected rather than imputed: the model assumes a
//! complete design. Time stamps are kept only to order rows within a
//! condition and to identify the first observation per condition.
//!
//! All types are immutable after construction and safe to share across
//! parallel workers.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CdbnError, Result};

/// Log-expression time-course data: `p` nodes observed at `T` time points
/// under each of `|C|` experimental conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeCourseDataset {
    node_names: Vec<String>,
    conditions: Vec<String>,
    times: Vec<f64>,
    /// Dense values, indexed `[node][condition][time]` (row-major).
    values: Vec<f64>,
}

impl TimeCourseDataset {
    /// Build a dataset from parts, validating all invariants.
    pub fn new(
        node_names: Vec<String>,
        conditions: Vec<String>,
        times: Vec<f64>,
        values: Vec<f64>,
    ) -> Result<Self> {
        let p = node_names.len();
        let n_cond = conditions.len();
        let n_time = times.len();
        if p < 1 {
            return Err(CdbnError::InvalidDataset("need at least one node".into()));
        }
        if n_time < 2 {
            return Err(CdbnError::InvalidDataset(
                "need at least two time points".into(),
            ));
        }
        if n_cond < 1 {
            return Err(CdbnError::InvalidDataset(
                "need at least one condition".into(),
            ));
        }
        if node_names.iter().collect::<HashSet<_>>().len() != p {
            return Err(CdbnError::InvalidDataset("duplicate node names".into()));
        }
        if conditions.iter().collect::<HashSet<_>>().len() != n_cond {
            return Err(CdbnError::InvalidDataset(
                "duplicate condition labels".into(),
            ));
        }
        if !times.windows(2).all(|w| w[0] < w[1]) {
            return Err(CdbnError::InvalidDataset(
                "time stamps must be strictly increasing".into(),
            ));
        }
        if values.len() != p * n_cond * n_time {
            return Err(CdbnError::InvalidDataset(format!(
                "expected {} values, got {}",
                p * n_cond * n_time,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            let (j, c, t) = (
                pos / (n_cond * n_time),
                (pos / n_time) % n_cond,
                pos % n_time,
            );
            return Err(CdbnError::InvalidDataset(format!(
                "non-finite value for node {} in condition {} at time {}",
                node_names[j], conditions[c], times[t]
            )));
        }
        Ok(Self {
            node_names,
            conditions,
            times,
            values,
        })
    }

    /// Number of nodes `p`.
    pub fn num_nodes(&self) -> usize {
        self.node_names.len()
    }

    /// Number of experimental conditions `|C|`.
    pub fn num_conditions(&self) -> usize {
        self.conditions.len()
    }

    /// Number of time points `T` per condition.
    pub fn num_times(&self) -> usize {
        self.times.len()
    }

    /// Total observations per node, `n = T * |C|`.
    pub fn num_observations(&self) -> usize {
        self.num_times() * self.num_conditions()
    }

    pub fn node_names(&self) -> &[String] {
        &self.node_names
    }

    pub fn conditions(&self) -> &[String] {
        &self.conditions
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Value `x_{j,c,t}` by (node, condition, time) index.
    pub fn value(&self, node: usize, condition: usize, time: usize) -> f64 {
        self.values[(node * self.num_conditions() + condition) * self.num_times() + time]
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.node_names.iter().position(|n| n == name)
    }

    pub fn condition_index(&self, label: &str) -> Option<usize> {
        self.conditions.iter().position(|c| c == label)
    }

    /// Return a copy with every value replaced by `ln(v)`.
    ///
    /// Fails if any value is not strictly positive.
    pub fn log_transformed(&self) -> Result<Self> {
        if let Some(v) = self.values.iter().find(|v| **v <= 0.0) {
            return Err(CdbnError::InvalidDataset(format!(
                "cannot log-transform nonpositive value {v}"
            )));
        }
        Self::new(
            self.node_names.clone(),
            self.conditions.clone(),
            self.times.clone(),
            self.values.iter().map(|v| v.ln()).collect(),
        )
    }
}

/// Load a dataset from wide CSV (`condition,time,<node1>,...,<nodep>`).
///
/// Rows are grouped by condition (in order of first appearance) and sorted
/// by time within each condition, regardless of file order. Every condition
/// must cover exactly the same set of time points, with no duplicates or
/// missing cells.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<TimeCourseDataset> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| CdbnError::InvalidDataset(format!("{}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| CdbnError::InvalidDataset(format!("{}: {e}", path.display())))?
        .clone();
    if headers.len() < 3 || &headers[0] != "condition" || &headers[1] != "time" {
        return Err(CdbnError::InvalidDataset(format!(
            "{}: header must start with `condition,time` followed by node names",
            path.display()
        )));
    }
    let node_names: Vec<String> = headers.iter().skip(2).map(str::to_owned).collect();
    let p = node_names.len();

    let mut conditions: Vec<String> = Vec::new();
    let mut rows: Vec<(usize, f64, Vec<f64>)> = Vec::new();
    let mut seen: HashSet<(usize, u64)> = HashSet::new();
    for (line, record) in reader.records().enumerate() {
        let record =
            record.map_err(|e| CdbnError::InvalidDataset(format!("{}: {e}", path.display())))?;
        let row_no = line + 2; // 1-based, after header
        if record.len() != p + 2 {
            return Err(CdbnError::InvalidDataset(format!(
                "row {row_no}: expected {} fields, got {}",
                p + 2,
                record.len()
            )));
        }
        let cond_label = record[0].to_string();
        let cond = match conditions.iter().position(|c| *c == cond_label) {
            Some(i) => i,
            None => {
                conditions.push(cond_label);
                conditions.len() - 1
            }
        };
        let time: f64 = record[1].parse().map_err(|_| {
            CdbnError::InvalidDataset(format!("row {row_no}: non-numeric time `{}`", &record[1]))
        })?;
        if !seen.insert((cond, time.to_bits())) {
            return Err(CdbnError::InvalidDataset(format!(
                "row {row_no}: duplicate (condition, time) pair ({}, {time})",
                conditions[cond]
            )));
        }
        let mut vals = Vec::with_capacity(p);
        for (k, field) in record.iter().skip(2).enumerate() {
            if field.trim().is_empty() {
                return Err(CdbnError::InvalidDataset(format!(
                    "row {row_no}, column {}: missing value",
                    node_names[k]
                )));
            }
            let v: f64 = field.parse().map_err(|_| {
                CdbnError::InvalidDataset(format!(
                    "row {row_no}, column {}: non-numeric value `{field}`",
                    node_names[k]
                ))
            })?;
            vals.push(v);
        }
        rows.push((cond, time, vals));
    }

    // Each condition must observe the same, strictly increasing time grid.
    let mut times: Vec<f64> = rows
        .iter()
        .filter(|(c, _, _)| *c == 0)
        .map(|(_, t, _)| *t)
        .collect();
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for (ci, label) in conditions.iter().enumerate() {
        let mut ct: Vec<f64> = rows
            .iter()
            .filter(|(c, _, _)| *c == ci)
            .map(|(_, t, _)| *t)
            .collect();
        ct.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if ct != times {
            return Err(CdbnError::InvalidDataset(format!(
                "condition {label} does not cover the same time points as {}",
                conditions[0]
            )));
        }
    }

    rows.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.partial_cmp(&b.1).unwrap()));
    let n_cond = conditions.len();
    let n_time = times.len();
    let mut values = vec![0.0; p * n_cond * n_time];
    for (r, (cond, _, vals)) in rows.iter().enumerate() {
        let t = r % n_time;
        debug_assert_eq!(r / n_time, *cond);
        for (j, v) in vals.iter().enumerate() {
            values[(j * n_cond + cond) * n_time + t] = *v;
        }
    }
    TimeCourseDataset::new(node_names, conditions, times, values)
}

/// Write a dataset as wide CSV. Values are serialized with the shortest
/// decimal representation that round-trips to the same `f64`.
pub fn write_dataset(data: &TimeCourseDataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = std::fs::File::create(path).map_err(|e| CdbnError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let io_err = |e| CdbnError::Io {
        path: path.display().to_string(),
        source: e,
    };
    write!(out, "condition,time").map_err(io_err)?;
    for name in data.node_names() {
        write!(out, ",{name}").map_err(io_err)?;
    }
    writeln!(out).map_err(io_err)?;
    for (c, label) in data.conditions().iter().enumerate() {
        for (t, time) in data.times().iter().enumerate() {
            write!(out, "{label},{time}").map_err(io_err)?;
            for j in 0..data.num_nodes() {
                write!(out, ",{}", data.value(j, c, t)).map_err(io_err)?;
            }
            writeln!(out).map_err(io_err)?;
        }
    }
    Ok(())
}

/// How an intervention enters the likelihood.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InterventionKind {
    /// Interventions are ignored; the classical DBN likelihood is used.
    None,
    /// Edges touching the target are removed while the intervention is
    /// active (predictor columns zeroed).
    Perfect,
    /// An additive shift parameter absorbs the inhibitor's effect.
    FixedEffect,
    /// Edge coefficients are re-estimated separately under intervention.
    MechanismChange,
    /// Perfect edge removal combined with a fixed-effect shift; the
    /// recommended default for kinase inhibition.
    ///
    /// Perfect and mechanism-change cannot be combined: zeroing a column
    /// and then splitting it would introduce a column of zeros. No such
    /// variant exists.
    PerfectFixedEffect,
}

/// Whether the intervention acts on edges out of the target (its children)
/// or into the target (its own regression).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InterventionDirection {
    In,
    Out,
}

/// An intervention model: kind plus direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterventionScheme {
    pub kind: InterventionKind,
    pub direction: InterventionDirection,
}

impl InterventionScheme {
    pub const fn new(kind: InterventionKind, direction: InterventionDirection) -> Self {
        Self { kind, direction }
    }

    pub const fn none() -> Self {
        Self::new(InterventionKind::None, InterventionDirection::Out)
    }
}

impl fmt::Display for InterventionScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            InterventionKind::None => return write!(f, "none"),
            InterventionKind::Perfect => "perfect",
            InterventionKind::FixedEffect => "fixed-effect",
            InterventionKind::MechanismChange => "mechanism-change",
            InterventionKind::PerfectFixedEffect => "perfect-fixed-effect",
        };
        let dir = match self.direction {
            InterventionDirection::In => "in",
            InterventionDirection::Out => "out",
        };
        write!(f, "{kind}-{dir}")
    }
}

/// Which nodes are inhibited in which conditions, plus the intervention
/// scheme used to model them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterventionDesign {
    /// Inhibited node indices per condition index.
    targets: Vec<BTreeSet<usize>>,
    pub scheme: InterventionScheme,
}

impl InterventionDesign {
    /// Build a design from per-condition target sets, validated against a
    /// dataset's dimensions.
    pub fn new(
        targets: Vec<BTreeSet<usize>>,
        scheme: InterventionScheme,
        data: &TimeCourseDataset,
    ) -> Result<Self> {
        if targets.len() != data.num_conditions() {
            return Err(CdbnError::InvalidDesign(format!(
                "expected {} condition target sets, got {}",
                data.num_conditions(),
                targets.len()
            )));
        }
        for (c, set) in targets.iter().enumerate() {
            for &i in set {
                if i >= data.num_nodes() {
                    return Err(CdbnError::InvalidDesign(format!(
                        "target index {i} out of range in condition {}",
                        data.conditions()[c]
                    )));
                }
            }
        }
        Ok(Self { targets, scheme })
    }

    /// A design with no targets in any condition.
    pub fn empty(scheme: InterventionScheme, data: &TimeCourseDataset) -> Self {
        Self {
            targets: vec![BTreeSet::new(); data.num_conditions()],
            scheme,
        }
    }

    /// Inhibited node indices in condition `c`.
    pub fn targets(&self, condition: usize) -> &BTreeSet<usize> {
        &self.targets[condition]
    }

    /// Conditions (indices) in which node `i` is inhibited.
    pub fn conditions_inhibiting(&self, node: usize) -> BTreeSet<usize> {
        self.targets
            .iter()
            .enumerate()
            .filter(|(_, set)| set.contains(&node))
            .map(|(c, _)| c)
            .collect()
    }

    /// All nodes inhibited in at least one condition.
    pub fn inhibited_nodes(&self) -> BTreeSet<usize> {
        self.targets.iter().flatten().copied().collect()
    }

    pub fn has_targets(&self) -> bool {
        self.targets.iter().any(|s| !s.is_empty())
    }
}

/// Load an intervention design from a JSON map of condition label to
/// inhibited node names, resolving names against `data`.
pub fn load_intervention_design(
    path: impl AsRef<Path>,
    scheme: InterventionScheme,
    data: &TimeCourseDataset,
) -> Result<InterventionDesign> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| CdbnError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let map: BTreeMap<String, Vec<String>> = serde_json::from_str(&text)
        .map_err(|e| CdbnError::InvalidDesign(format!("{}: {e}", path.display())))?;
    parse_intervention_design(&map, scheme, data)
}

/// Resolve a condition-label → node-name map into an [`InterventionDesign`].
pub fn parse_intervention_design(
    map: &BTreeMap<String, Vec<String>>,
    scheme: InterventionScheme,
    data: &TimeCourseDataset,
) -> Result<InterventionDesign> {
    let mut targets = vec![BTreeSet::new(); data.num_conditions()];
    for (label, names) in map {
        let c = data
            .condition_index(label)
            .ok_or_else(|| CdbnError::InvalidDesign(format!("unknown condition `{label}`")))?;
        for name in names {
            let i = data
                .node_index(name)
                .ok_or_else(|| CdbnError::InvalidDesign(format!("unknown node `{name}`")))?;
            targets[c].insert(i);
        }
    }
    InterventionDesign::new(targets, scheme, data)
}

/// Write an intervention design back to its JSON format.
pub fn write_intervention_design(
    design: &InterventionDesign,
    data: &TimeCourseDataset,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let map: BTreeMap<&str, Vec<&str>> = data
        .conditions()
        .iter()
        .enumerate()
        .map(|(c, label)| {
            (
                label.as_str(),
                design
                    .targets(c)
                    .iter()
                    .map(|&i| data.node_names()[i].as_str())
                    .collect(),
            )
        })
        .collect();
    let text = serde_json::to_string_pretty(&map).expect("serializable map");
    std::fs::write(path, text).map_err(|e| CdbnError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

/// A prior network `G0` with penalty strength `lambda`.
///
/// `lambda = 0` recovers the pure multiplicity-corrected model prior.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkPrior {
    p: usize,
    /// Adjacency, `edges[i * p + j]` true when `i -> j` is in the prior.
    edges: Vec<bool>,
    pub lambda: f64,
}

impl NetworkPrior {
    pub fn new(p: usize, edges: Vec<bool>, lambda: f64) -> Result<Self> {
        if edges.len() != p * p {
            return Err(CdbnError::InvalidPrior(format!(
                "expected {} adjacency entries, got {}",
                p * p,
                edges.len()
            )));
        }
        if !(lambda >= 0.0) {
            return Err(CdbnError::InvalidPrior(format!(
                "lambda must be nonnegative, got {lambda}"
            )));
        }
        Ok(Self { p, edges, lambda })
    }

    /// An empty prior graph with `lambda = 0`.
    pub fn flat(p: usize) -> Self {
        Self {
            p,
            edges: vec![false; p * p],
            lambda: 0.0,
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.p
    }

    pub fn has_edge(&self, parent: usize, child: usize) -> bool {
        self.edges[parent * self.p + child]
    }

    /// Prior parent set of node `j`.
    pub fn prior_parents(&self, child: usize) -> BTreeSet<usize> {
        (0..self.p).filter(|&i| self.has_edge(i, child)).collect()
    }
}

/// Load a prior network from edge-list CSV (`parent,child` by node name).
pub fn load_prior_network(
    path: impl AsRef<Path>,
    lambda: f64,
    data: &TimeCourseDataset,
) -> Result<NetworkPrior> {
    let path = path.as_ref();
    let edges = load_edge_list(path, data.node_names())?;
    let p = data.num_nodes();
    let mut adj = vec![false; p * p];
    for (i, j) in edges {
        adj[i * p + j] = true;
    }
    NetworkPrior::new(p, adj, lambda)
}

fn read_edge_records(path: &Path) -> Result<Vec<(String, String)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| CdbnError::InvalidPrior(format!("{}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| CdbnError::InvalidPrior(format!("{}: {e}", path.display())))?;
    if headers.len() < 2 || &headers[0] != "parent" || &headers[1] != "child" {
        return Err(CdbnError::InvalidPrior(format!(
            "{}: header must be `parent,child`",
            path.display()
        )));
    }
    let mut pairs = Vec::new();
    for record in reader.records() {
        let record =
            record.map_err(|e| CdbnError::InvalidPrior(format!("{}: {e}", path.display())))?;
        pairs.push((record[0].to_string(), record[1].to_string()));
    }
    Ok(pairs)
}

/// Load an edge list CSV (`parent,child` header) as index pairs, resolving
/// node names against `names`.
pub fn load_edge_list(path: impl AsRef<Path>, names: &[String]) -> Result<Vec<(usize, usize)>> {
    let resolve = |name: &str| {
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| CdbnError::InvalidPrior(format!("unknown node `{name}`")))
    };
    read_edge_records(path.as_ref())?
        .into_iter()
        .map(|(a, b)| Ok((resolve(&a)?, resolve(&b)?)))
        .collect()
}

/// Load an edge list CSV where the node set is defined by the file itself:
/// names are collected in order of first appearance.
pub fn load_edge_list_discover(
    path: impl AsRef<Path>,
) -> Result<(Vec<String>, Vec<(usize, usize)>)> {
    let pairs = read_edge_records(path.as_ref())?;
    let mut names: Vec<String> = Vec::new();
    let intern = |name: &str, names: &mut Vec<String>| match names.iter().position(|n| n == name) {
        Some(i) => i,
        None => {
            names.push(name.to_string());
            names.len() - 1
        }
    };
    let edges = pairs
        .iter()
        .map(|(a, b)| {
            let i = intern(a, &mut names);
            let j = intern(b, &mut names);
            (i, j)
        })
        .collect();
    Ok((names, edges))
}

/// Write an edge list CSV (`parent,child` by node name).
pub fn write_edge_list(
    edges: &[(usize, usize)],
    names: &[String],
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::from("parent,child\n");
    for &(i, j) in edges {
        out.push_str(&format!("{},{}\n", names[i], names[j]));
    }
    std::fs::write(path, out).map_err(|e| CdbnError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn loads_minimal_dataset() {
        let f = write_tmp("condition,time,A\nctrl,0,1.5\nctrl,1,2.5\n");
        let data = load_dataset(f.path()).unwrap();
        assert_eq!(data.num_nodes(), 1);
        assert_eq!(data.num_times(), 2);
        assert_eq!(data.num_observations(), 2);
        assert_eq!(data.value(0, 0, 1), 2.5);
    }

    #[test]
    fn sorts_rows_by_time_within_condition() {
        let f =
            write_tmp("condition,time,A,B\nctrl,2,3.0,30.0\nctrl,0,1.0,10.0\nctrl,1,2.0,20.0\n");
        let data = load_dataset(f.path()).unwrap();
        assert_eq!(data.times(), &[0.0, 1.0, 2.0]);
        assert_eq!(data.value(0, 0, 0), 1.0);
        assert_eq!(data.value(1, 0, 2), 30.0);
    }

    #[test]
    fn rejects_blank_cell_with_location() {
        let f = write_tmp("condition,time,A,B\nctrl,0,1.0,2.0\nctrl,1,,2.0\n");
        let err = load_dataset(f.path()).unwrap_err().to_string();
        assert!(err.contains("row 3"), "{err}");
        assert!(err.contains("column A"), "{err}");
    }

    #[test]
    fn rejects_duplicate_condition_time() {
        let f = write_tmp("condition,time,A\nctrl,0,1.0\nctrl,0,2.0\n");
        let err = load_dataset(f.path()).unwrap_err().to_string();
        assert!(err.contains("duplicate"), "{err}");
    }

    #[test]
    fn rejects_non_numeric_value() {
        let f = write_tmp("condition,time,A\nctrl,0,abc\nctrl,1,2.0\n");
        assert!(load_dataset(f.path()).is_err());
    }

    #[test]
    fn rejects_ragged_time_grid() {
        let f = write_tmp("condition,time,A\nctrl,0,1.0\nctrl,1,2.0\ntrt,0,1.0\ntrt,2,2.0\n");
        let err = load_dataset(f.path()).unwrap_err().to_string();
        assert!(err.contains("same time points"), "{err}");
    }

    #[test]
    fn roundtrips_values_bit_exactly() {
        let names = vec!["A".to_string(), "B".to_string()];
        let conds = vec!["ctrl".to_string(), "trt".to_string()];
        let times = vec![0.0, 0.5, 24.0];
        let values: Vec<f64> = (0..12).map(|i| (i as f64 * 0.1234567891).sin()).collect();
        let data = TimeCourseDataset::new(names, conds, times, values).unwrap();
        let f = tempfile::NamedTempFile::new().unwrap();
        write_dataset(&data, f.path()).unwrap();
        let back = load_dataset(f.path()).unwrap();
        assert_eq!(data, back);
    }

    #[test]
    fn design_resolves_names_and_rejects_unknowns() {
        let f = write_tmp(
            "condition,time,EGFR,AKT\nDMSO,0,1,1\nDMSO,1,1,1\nEGFRi,0,1,1\nEGFRi,1,1,1\n",
        );
        let data = load_dataset(f.path()).unwrap();
        let scheme = InterventionScheme::new(
            InterventionKind::PerfectFixedEffect,
            InterventionDirection::Out,
        );
        let j = write_tmp("{\"DMSO\":[],\"EGFRi\":[\"EGFR\"]}");
        let design = load_intervention_design(j.path(), scheme, &data).unwrap();
        assert!(design.targets(0).is_empty());
        assert_eq!(design.targets(1).iter().copied().collect::<Vec<_>>(), [0]);
        assert_eq!(design.conditions_inhibiting(0), BTreeSet::from([1]));

        let bad_cond = write_tmp("{\"missing\":[]}");
        assert!(load_intervention_design(bad_cond.path(), scheme, &data).is_err());
        let bad_node = write_tmp("{\"DMSO\":[\"MAPK\"]}");
        assert!(load_intervention_design(bad_node.path(), scheme, &data).is_err());
    }

    #[test]
    fn prior_network_from_edge_list() {
        let f = write_tmp("condition,time,A,B\nctrl,0,1,1\nctrl,1,1,1\n");
        let data = load_dataset(f.path()).unwrap();
        let e = write_tmp("parent,child\nA,B\nB,B\n");
        let prior = load_prior_network(e.path(), 4.0, &data).unwrap();
        assert!(prior.has_edge(0, 1));
        assert!(prior.has_edge(1, 1));
        assert!(!prior.has_edge(1, 0));
        assert_eq!(prior.prior_parents(1), BTreeSet::from([0, 1]));
    }
}
