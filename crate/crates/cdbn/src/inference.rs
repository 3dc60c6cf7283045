//! Exact per-node posteriors over parent sets and what follows from them:
//! edge probabilities and model-averaged fitted values.
//!
//! With a modular model prior the graph posterior factorizes over nodes,
//! so network inference reduces to variable selection for each node in
//! turn. All parent sets with `|γ| ≤ m` are enumerated (sizes ascending,
//! colex order within a size), scored, and normalized in the log domain.
//! Degenerate models (rank-deficient designs, numerically exact fits) are
//! excluded with a recorded warning and the survivors renormalized; a node
//! fails only if every model is excluded.
//!
//! Everything here is a pure function of immutable inputs; nodes are
//! scored in parallel and merged in node order, so single-threaded and
//! multi-threaded runs produce identical output.

use nalgebra::DVector;
use rayon::prelude::*;

use crate::data::{InterventionDesign, NetworkPrior, TimeCourseDataset};
use crate::design::{build_design, ParentSet};
use crate::error::{CdbnError, Result};
use crate::likelihood::{log_marginal_likelihood, log_model_prior, ModelScore};

/// Normalized posterior over parent sets for one node.
#[derive(Debug, Clone)]
pub struct NodePosterior {
    pub node: usize,
    /// `(γ, posterior probability, score)` for every retained model, in
    /// enumeration order. Probabilities sum to one.
    pub models: Vec<(ParentSet, f64, ModelScore)>,
    /// Log of the normalizing sum over retained models.
    pub log_evidence: f64,
    /// Models excluded as degenerate, with the reason.
    pub excluded: Vec<(ParentSet, String)>,
}

impl NodePosterior {
    /// Posterior inclusion probability of parent `i` for this node.
    pub fn inclusion_probability(&self, i: usize) -> f64 {
        self.models
            .iter()
            .filter(|(pset, _, _)| pset.contains(i))
            .map(|(_, prob, _)| prob)
            .sum()
    }

    /// Retained models sorted by decreasing posterior probability.
    pub fn top_models(&self, k: usize) -> Vec<&(ParentSet, f64, ModelScore)> {
        let mut sorted: Vec<_> = self.models.iter().collect();
        sorted.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
        sorted.truncate(k);
        sorted
    }
}

/// Posterior edge probabilities; entry `(i, j)` is `P(i → j | data)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeProbabilityMatrix {
    p: usize,
    probs: Vec<f64>,
}

impl EdgeProbabilityMatrix {
    pub fn from_vec(p: usize, probs: Vec<f64>) -> Self {
        assert_eq!(probs.len(), p * p);
        Self { p, probs }
    }

    pub fn num_nodes(&self) -> usize {
        self.p
    }

    pub fn get(&self, parent: usize, child: usize) -> f64 {
        self.probs[parent * self.p + child]
    }

    /// Directed edges with probability at or above `threshold`.
    pub fn thresholded(&self, threshold: f64) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for i in 0..self.p {
            for j in 0..self.p {
                if self.get(i, j) >= threshold {
                    edges.push((i, j));
                }
            }
        }
        edges
    }
}

/// Posterior-expected fitted values, same shape as the dataset.
#[derive(Debug, Clone)]
pub struct FittedSeries {
    n_cond: usize,
    n_time: usize,
    /// Indexed `[node][condition][time]`.
    values: Vec<f64>,
}

impl FittedSeries {
    pub fn value(&self, node: usize, condition: usize, time: usize) -> f64 {
        self.values[(node * self.n_cond + condition) * self.n_time + time]
    }
}

/// Iterate all subsets of `{0..p-1}` with size at most `m`: sizes
/// ascending, colex order within each size. Deterministic.
pub fn enumerate_parent_sets(node: usize, p: usize, m: usize) -> Vec<ParentSet> {
    let mut out = vec![ParentSet::empty(node)];
    for k in 1..=m.min(p) {
        let mut subset: Vec<usize> = (0..k).collect();
        loop {
            out.push(ParentSet::new(node, subset.clone()));
            // Next subset in colex order: bump the lowest element with
            // headroom and reset everything below it.
            let mut i = 0;
            while i < k {
                let limit = if i + 1 < k { subset[i + 1] } else { p };
                if subset[i] + 1 < limit {
                    break;
                }
                i += 1;
            }
            if i == k {
                break;
            }
            subset[i] += 1;
            for (r, s) in subset.iter_mut().take(i).enumerate() {
                *s = r;
            }
        }
    }
    out
}

/// Number of models enumerated per node: `Σ_{k=0}^{m} C(p, k)`.
pub fn model_count(p: usize, m: usize) -> u64 {
    let mut total = 0u64;
    for k in 0..=m.min(p) {
        let mut c = 1u64;
        for r in 0..k {
            c = c * (p - r) as u64 / (r + 1) as u64;
        }
        total += c;
    }
    total
}

/// Exact posterior over parent sets for node `j` under in-degree bound `m`.
pub fn infer_node(
    j: usize,
    data: &TimeCourseDataset,
    design: &InterventionDesign,
    prior: &NetworkPrior,
    m: usize,
) -> Result<NodePosterior> {
    let p = data.num_nodes();
    if m > p {
        return Err(CdbnError::InvalidConfig(format!(
            "in-degree bound {m} exceeds node count {p}"
        )));
    }
    let candidates = enumerate_parent_sets(j, p, m);
    let scored: Vec<std::result::Result<ModelScore, String>> = candidates
        .par_iter()
        .map(|pset| {
            let dp = build_design(data, design, pset).map_err(|e| e.to_string())?;
            let log_marginal = log_marginal_likelihood(&dp).map_err(|e| e.to_string())?;
            Ok(ModelScore::new(
                log_marginal,
                log_model_prior(pset, prior, p, m),
            ))
        })
        .collect();

    let mut models: Vec<(ParentSet, ModelScore)> = Vec::with_capacity(candidates.len());
    let mut excluded = Vec::new();
    for (pset, res) in candidates.into_iter().zip(scored) {
        match res {
            Ok(score) => models.push((pset, score)),
            Err(reason) => excluded.push((pset, reason)),
        }
    }
    if models.is_empty() {
        return Err(CdbnError::AllModelsExcluded {
            node: j,
            count: excluded.len(),
        });
    }

    // log-sum-exp in enumeration order.
    let max = models
        .iter()
        .map(|(_, s)| s.log_posterior_unnorm)
        .fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = models
        .iter()
        .map(|(_, s)| (s.log_posterior_unnorm - max).exp())
        .sum();
    let log_evidence = max + sum.ln();
    let models = models
        .into_iter()
        .map(|(pset, score)| {
            let prob = (score.log_posterior_unnorm - log_evidence).exp();
            (pset, prob, score)
        })
        .collect();

    Ok(NodePosterior {
        node: j,
        models,
        log_evidence,
        excluded,
    })
}

/// Posterior edge probabilities from per-node posteriors:
/// entry `(i, j) = Σ_γ I(i ∈ γ) P(γ^{(j)} = γ | data)`.
pub fn edge_probabilities(posteriors: &[NodePosterior], p: usize) -> EdgeProbabilityMatrix {
    let mut probs = vec![0.0; p * p];
    for post in posteriors {
        let j = post.node;
        for (pset, prob, _) in &post.models {
            for &i in pset.parents() {
                probs[i * p + j] += prob;
            }
        }
    }
    EdgeProbabilityMatrix::from_vec(p, probs)
}

/// Model-averaged fitted values. Per model the coefficients are the
/// posterior means under the g-prior (g = n): `α̂ = (X0ᵀX0)⁻¹X0ᵀx` and
/// `β̂ = n/(n+1) (XγᵀXγ)⁻¹Xγᵀx`; the fitted vector is `X0α̂ + Xγβ̂`,
/// averaged over models by posterior probability.
pub fn fitted_values(
    posteriors: &[NodePosterior],
    data: &TimeCourseDataset,
    design: &InterventionDesign,
) -> Result<FittedSeries> {
    let n_cond = data.num_conditions();
    let n_time = data.num_times();
    let n = data.num_observations();
    let nf = n as f64;
    let mut values = vec![0.0; data.num_nodes() * n_cond * n_time];
    for post in posteriors {
        let j = post.node;
        let mut averaged = DVector::zeros(n);
        for (pset, prob, _) in &post.models {
            let dp = build_design(data, design, pset)?;
            // X0 columns are orthogonal indicators: α̂ is the pair of block means.
            let mut fit = DVector::zeros(n);
            for k in 0..dp.a() {
                let col = dp.x0.column(k);
                let mean = col.dot(&dp.response) / col.norm_squared();
                fit += col * mean;
            }
            if dp.b() > 0 {
                let qr = dp.xgamma.clone().qr();
                let q = qr.q();
                fit += &q * (q.transpose() * &dp.response) * (nf / (nf + 1.0));
            }
            averaged += fit * *prob;
        }
        for c in 0..n_cond {
            for t in 0..n_time {
                values[(j * n_cond + c) * n_time + t] = averaged[c * n_time + t];
            }
        }
    }
    Ok(FittedSeries {
        n_cond,
        n_time,
        values,
    })
}

/// Run [`infer_node`] for every node in parallel and assemble the edge
/// probability matrix.
pub fn infer_network(
    data: &TimeCourseDataset,
    design: &InterventionDesign,
    prior: &NetworkPrior,
    m: usize,
) -> Result<(EdgeProbabilityMatrix, Vec<NodePosterior>)> {
    let p = data.num_nodes();
    let posteriors: Result<Vec<NodePosterior>> = (0..p)
        .into_par_iter()
        .map(|j| infer_node(j, data, design, prior, m))
        .collect();
    let posteriors = posteriors?;
    let probs = edge_probabilities(&posteriors, p);
    Ok((probs, posteriors))
}

/// Baseline co-expression scores: entry `(i, j)` is the absolute Pearson
/// correlation between `x_{i,·,t-1}` and `x_{j,·,t}`, pooled across
/// conditions with lag-1 alignment.
pub fn lagged_correlation_matrix(data: &TimeCourseDataset) -> EdgeProbabilityMatrix {
    let p = data.num_nodes();
    let n_cond = data.num_conditions();
    let n_time = data.num_times();
    let pairs = n_cond * (n_time - 1);
    let mut scores = vec![0.0; p * p];
    for i in 0..p {
        for j in 0..p {
            let mut xs = Vec::with_capacity(pairs);
            let mut ys = Vec::with_capacity(pairs);
            for c in 0..n_cond {
                for t in 1..n_time {
                    xs.push(data.value(i, c, t - 1));
                    ys.push(data.value(j, c, t));
                }
            }
            scores[i * p + j] = pearson(&xs, &ys).abs();
        }
    }
    EdgeProbabilityMatrix::from_vec(p, scores)
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut cov, mut vx, mut vy) = (0.0f64, 0.0f64, 0.0f64);
    for (a, b) in x.iter().zip(y) {
        cov += (a - mx) * (b - my);
        vx += (a - mx).powi(2);
        vy += (b - my).powi(2);
    }
    if vx <= 0.0 || vy <= 0.0 {
        0.0
    } else {
        cov / (vx * vy).sqrt()
    }
}
