//! Evaluation against a known graph (edge ROC) and against interventional
//! ground truth (descendancy ROC via paired t-tests).
//!
//! ROC curves sweep a threshold `τ` over all distinct score values plus
//! `{0, 1}`; an edge is called present when its score is `≥ τ`, so tied
//! scores enter together and the area is the trapezoidal integral of the
//! resulting staircase.
//!
//! The descendancy analysis tests each node for change between a baseline
//! and an inhibited condition with a paired t-test, giving a set `D` of
//! nodes interventionally downstream of the target. The inferred network,
//! thresholded at `τ`, yields an estimated set `D̂(τ)` (descendants by
//! reachability, or direct children); true and false positives at `τ` are
//! `|D̂ ∩ D|` and `|D̂ \ D|`. Descendants are computed by breadth-first
//! search on the thresholded directed graph, cycles included; the target
//! itself is excluded from both sets.

use std::collections::BTreeSet;

use statrs::function::gamma::ln_gamma;

use crate::data::TimeCourseDataset;
use crate::error::{CdbnError, Result};
use crate::inference::EdgeProbabilityMatrix;

/// One point of an ROC curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
    pub threshold: f64,
}

/// An ROC curve with its trapezoidal area and the τ = 1/2 operating point.
#[derive(Debug, Clone)]
pub struct RocCurve {
    /// Points ordered by decreasing threshold, from (0,0) to (1,1).
    pub points: Vec<RocPoint>,
    pub auc: f64,
    /// The point-estimate operating point at τ = 1/2.
    pub operating_point: RocPoint,
}

/// Which estimated set a descendancy ROC compares against `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DescendancyMode {
    /// Nodes reachable from the target via directed paths.
    Descendants,
    /// Direct children of the target only.
    Children,
}

/// Sweep thresholds and build a curve from a counting function that maps
/// `τ` to (true positives, false positives).
fn sweep(
    mut thresholds: Vec<f64>,
    positives: usize,
    negatives: usize,
    count_at: impl Fn(f64) -> (usize, usize),
) -> RocCurve {
    thresholds.push(0.0);
    thresholds.push(1.0);
    thresholds.sort_by(|a, b| b.partial_cmp(a).unwrap());
    thresholds.dedup();

    let mut points = Vec::with_capacity(thresholds.len() + 1);
    for &tau in &thresholds {
        let (tp, fp) = count_at(tau);
        points.push(RocPoint {
            fpr: fp as f64 / negatives as f64,
            tpr: tp as f64 / positives as f64,
            threshold: tau,
        });
    }
    if points[0].fpr > 0.0 || points[0].tpr > 0.0 {
        points.insert(
            0,
            RocPoint {
                fpr: 0.0,
                tpr: 0.0,
                threshold: f64::INFINITY,
            },
        );
    }

    let mut auc = 0.0;
    for w in points.windows(2) {
        auc += (w[1].fpr - w[0].fpr) * (w[1].tpr + w[0].tpr) / 2.0;
    }
    let (tp, fp) = count_at(0.5);
    let operating_point = RocPoint {
        fpr: fp as f64 / negatives as f64,
        tpr: tp as f64 / positives as f64,
        threshold: 0.5,
    };
    RocCurve {
        points,
        auc,
        operating_point,
    }
}

/// Edge-recovery ROC of a score matrix against a boolean truth adjacency
/// (`truth[i * p + j]` for edge `i → j`). Ordered pairs are scored;
/// self-edges are included when `include_self` is set (the model permits
/// them).
pub fn roc_edges(
    probs: &EdgeProbabilityMatrix,
    truth: &[bool],
    include_self: bool,
) -> Result<RocCurve> {
    let p = probs.num_nodes();
    if truth.len() != p * p {
        return Err(CdbnError::InvalidEvaluation(format!(
            "truth adjacency has {} entries, expected {}",
            truth.len(),
            p * p
        )));
    }
    let mut scored: Vec<(f64, bool)> = Vec::new();
    for i in 0..p {
        for j in 0..p {
            if i == j && !include_self {
                continue;
            }
            scored.push((probs.get(i, j), truth[i * p + j]));
        }
    }
    let positives = scored.iter().filter(|(_, t)| *t).count();
    let negatives = scored.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(CdbnError::InvalidEvaluation(
            "truth graph must contain both present and absent edges".into(),
        ));
    }
    let thresholds: Vec<f64> = scored.iter().map(|(s, _)| *s).collect();
    Ok(sweep(thresholds, positives, negatives, |tau| {
        let mut tp = 0;
        let mut fp = 0;
        for &(s, t) in &scored {
            if s >= tau {
                if t {
                    tp += 1;
                } else {
                    fp += 1;
                }
            }
        }
        (tp, fp)
    }))
}

/// Regularized incomplete beta function `I_x(a, b)` by the Lentz continued
/// fraction, accurate to ~1e-14 for the arguments used here.
fn incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    // Continued fraction converges fastest for x < (a+1)/(a+b+2); use the
    // symmetry I_x(a,b) = 1 - I_{1-x}(b,a) otherwise.
    if x >= (a + 1.0) / (a + b + 2.0) {
        return 1.0 - incomplete_beta(b, a, 1.0 - x);
    }
    let tiny = 1e-300;
    let mut c = 1.0;
    let mut d = 1.0 - (a + b) * x / (a + 1.0);
    if d.abs() < tiny {
        d = tiny;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..200 {
        let mf = m as f64;
        // Even step.
        let numerator = mf * (b - mf) * x / ((a + 2.0 * mf - 1.0) * (a + 2.0 * mf));
        d = 1.0 + numerator * d;
        if d.abs() < tiny {
            d = tiny;
        }
        d = 1.0 / d;
        c = 1.0 + numerator / c;
        if c.abs() < tiny {
            c = tiny;
        }
        h *= d * c;
        // Odd step.
        let numerator = -(a + mf) * (a + b + mf) * x / ((a + 2.0 * mf) * (a + 2.0 * mf + 1.0));
        d = 1.0 + numerator * d;
        if d.abs() < tiny {
            d = tiny;
        }
        d = 1.0 / d;
        c = 1.0 + numerator / c;
        if c.abs() < tiny {
            c = tiny;
        }
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-15 {
            break;
        }
    }
    front * h / a
}

/// Two-sided survival probability of a Student-t statistic with `df`
/// degrees of freedom: `P(|T| ≥ |t|)`.
fn t_two_sided_p(t: f64, df: f64) -> f64 {
    incomplete_beta(df / 2.0, 0.5, df / (df + t * t))
}

/// Two-sided paired t-test. Returns the p-value of the one-sample t
/// statistic on the differences, with `len - 1` degrees of freedom.
pub fn paired_t_test(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(CdbnError::DegenerateTest(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(CdbnError::DegenerateTest("need at least two pairs".into()));
    }
    let n = x.len() as f64;
    let diffs: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let mean = diffs.iter().sum::<f64>() / n;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0);
    if var <= 0.0 {
        return Err(CdbnError::DegenerateTest(
            "differences have zero variance".into(),
        ));
    }
    let t = mean / (var / n).sqrt();
    Ok(t_two_sided_p(t, n - 1.0))
}

/// Nodes whose level changes significantly between a baseline and an
/// inhibited condition: `k ∈ D` iff the paired t-test over time-matched
/// pairs rejects at level `alpha`. The target is excluded; nodes with
/// degenerate tests are skipped with a warning.
pub fn descendancy_sets(
    data: &TimeCourseDataset,
    target: usize,
    baseline_condition: usize,
    inhibited_condition: usize,
    alpha: f64,
) -> (BTreeSet<usize>, Vec<String>) {
    let mut set = BTreeSet::new();
    let mut warnings = Vec::new();
    for k in 0..data.num_nodes() {
        if k == target {
            continue;
        }
        let baseline: Vec<f64> = (0..data.num_times())
            .map(|t| data.value(k, baseline_condition, t))
            .collect();
        let inhibited: Vec<f64> = (0..data.num_times())
            .map(|t| data.value(k, inhibited_condition, t))
            .collect();
        match paired_t_test(&baseline, &inhibited) {
            Ok(p) if p < alpha => {
                set.insert(k);
            }
            Ok(_) => {}
            Err(e) => warnings.push(format!("node {k}: {e}")),
        }
    }
    (set, warnings)
}

/// Nodes reachable from `target` in the thresholded graph, target excluded.
pub fn descendants_at(probs: &EdgeProbabilityMatrix, target: usize, tau: f64) -> BTreeSet<usize> {
    let p = probs.num_nodes();
    let mut visited = vec![false; p];
    let mut queue = std::collections::VecDeque::from([target]);
    let mut out = BTreeSet::new();
    while let Some(i) = queue.pop_front() {
        for j in 0..p {
            if probs.get(i, j) >= tau && !visited[j] {
                visited[j] = true;
                if j != target {
                    out.insert(j);
                }
                queue.push_back(j);
            }
        }
    }
    out
}

fn estimated_set(
    probs: &EdgeProbabilityMatrix,
    target: usize,
    tau: f64,
    mode: DescendancyMode,
) -> BTreeSet<usize> {
    match mode {
        DescendancyMode::Descendants => descendants_at(probs, target, tau),
        DescendancyMode::Children => (0..probs.num_nodes())
            .filter(|&j| j != target && probs.get(target, j) >= tau)
            .collect(),
    }
}

/// One descendancy-ROC instance: an inferred network, the inhibited
/// target, and the interventionally grounded downstream set `D`.
#[derive(Debug, Clone)]
pub struct DescendancyInstance<'a> {
    pub probs: &'a EdgeProbabilityMatrix,
    pub target: usize,
    pub downstream: &'a BTreeSet<usize>,
}

/// Causal-fit ROC for one target: at each threshold, the estimated
/// descendant (or child) set is compared against `D`.
pub fn roc_descendancy(
    probs: &EdgeProbabilityMatrix,
    target: usize,
    downstream: &BTreeSet<usize>,
    mode: DescendancyMode,
) -> Result<RocCurve> {
    roc_descendancy_pooled(
        &[DescendancyInstance {
            probs,
            target,
            downstream,
        }],
        mode,
    )
}

/// Pooled causal-fit ROC: true/false positive counts are summed across
/// instances (e.g. multiple targets or cell lines) at a shared τ grid.
pub fn roc_descendancy_pooled(
    instances: &[DescendancyInstance<'_>],
    mode: DescendancyMode,
) -> Result<RocCurve> {
    if instances.is_empty() {
        return Err(CdbnError::InvalidEvaluation("no instances".into()));
    }
    let mut positives = 0;
    let mut negatives = 0;
    let mut thresholds = Vec::new();
    for inst in instances {
        let p = inst.probs.num_nodes();
        if inst.downstream.contains(&inst.target) {
            return Err(CdbnError::InvalidEvaluation(
                "downstream set must not contain the target".into(),
            ));
        }
        if inst.downstream.is_empty() || inst.downstream.len() >= p - 1 {
            return Err(CdbnError::InvalidEvaluation(
                "downstream set must be nonempty and not cover all nodes".into(),
            ));
        }
        positives += inst.downstream.len();
        negatives += p - 1 - inst.downstream.len();
        for i in 0..p {
            for j in 0..p {
                thresholds.push(inst.probs.get(i, j));
            }
        }
    }
    Ok(sweep(thresholds, positives, negatives, |tau| {
        let mut tp = 0;
        let mut fp = 0;
        for inst in instances {
            let estimated = estimated_set(inst.probs, inst.target, tau, mode);
            tp += estimated.intersection(inst.downstream).count();
            fp += estimated.difference(inst.downstream).count();
        }
        (tp, fp)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn matrix(p: usize, entries: &[f64]) -> EdgeProbabilityMatrix {
        EdgeProbabilityMatrix::from_vec(p, entries.to_vec())
    }

    #[test]
    fn perfect_classifier_has_auc_one() {
        let truth = vec![false, true, true, false];
        let probs = matrix(2, &[0.0, 1.0, 1.0, 0.0]);
        let roc = roc_edges(&probs, &truth, true).unwrap();
        assert_abs_diff_eq!(roc.auc, 1.0, epsilon = 1e-12);
        assert_eq!(roc.points.first().map(|p| (p.fpr, p.tpr)), Some((0.0, 0.0)));
        assert_eq!(roc.points.last().map(|p| (p.fpr, p.tpr)), Some((1.0, 1.0)));
    }

    #[test]
    fn constant_scores_give_auc_half() {
        let truth = vec![false, true, true, false];
        let probs = matrix(2, &[0.5; 4]);
        let roc = roc_edges(&probs, &truth, true).unwrap();
        assert_abs_diff_eq!(roc.auc, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn auc_matches_mann_whitney_statistic() {
        // Deterministic pseudo-random 5x5 instance, tie-free.
        let p = 5;
        let scores: Vec<f64> = (0..p * p)
            .map(|k| ((k * 37 + 11) % 101) as f64 / 101.0)
            .collect();
        let truth: Vec<bool> = (0..p * p).map(|k| (k * 13 + 5) % 3 == 0).collect();
        let probs = matrix(p, &scores);
        let roc = roc_edges(&probs, &truth, true).unwrap();
        // Mann-Whitney U / (n_pos * n_neg): fraction of (pos, neg) pairs
        // with score_pos > score_neg (+ half the ties).
        let (mut wins, mut pairs) = (0.0, 0.0);
        for a in 0..p * p {
            for b in 0..p * p {
                if truth[a] && !truth[b] {
                    pairs += 1.0;
                    if scores[a] > scores[b] {
                        wins += 1.0;
                    } else if scores[a] == scores[b] {
                        wins += 0.5;
                    }
                }
            }
        }
        assert_abs_diff_eq!(roc.auc, wins / pairs, epsilon = 1e-12);
    }

    #[test]
    fn auc_invariant_under_monotone_transform() {
        let p = 4;
        let scores: Vec<f64> = (0..16).map(|k| ((k * 29 + 3) % 97) as f64 / 97.0).collect();
        let truth: Vec<bool> = (0..16).map(|k| k % 4 == 1).collect();
        let base = roc_edges(&matrix(p, &scores), &truth, true).unwrap();
        let squashed: Vec<f64> = scores.iter().map(|s| s.powi(3)).collect();
        let got = roc_edges(&matrix(p, &squashed), &truth, true).unwrap();
        assert_abs_diff_eq!(base.auc, got.auc, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_truth_rejected() {
        let probs = matrix(2, &[0.1, 0.2, 0.3, 0.4]);
        assert!(roc_edges(&probs, &[true; 4], true).is_err());
        assert!(roc_edges(&probs, &[false; 4], true).is_err());
    }

    #[test]
    fn t_test_reference_values() {
        // Frozen against scipy.stats: ttest_rel p-values.
        // d = (1,1,1,1,-1): t = 1.5, df = 4.
        let x = [1.0, 1.0, 1.0, 1.0, -1.0];
        let y = [0.0; 5];
        let p = paired_t_test(&x, &y).unwrap();
        assert_abs_diff_eq!(p, 0.208, epsilon = 1e-6);
        // d = (0.5, -0.2, 0.3, 0.1, 0.4, -0.1, 0.2, 0.6): t = 2.26011, df = 7.
        let x2 = [0.5, -0.2, 0.3, 0.1, 0.4, -0.1, 0.2, 0.6];
        let y2 = [0.0; 8];
        let p2 = paired_t_test(&x2, &y2).unwrap();
        assert_abs_diff_eq!(p2, 0.0583217117, epsilon = 1e-6);
    }

    #[test]
    fn t_test_degenerate_and_power() {
        let x = [1.0, 2.0, 3.0];
        assert!(paired_t_test(&x, &x).is_err());
        let shifted: Vec<f64> = (0..20)
            .map(|i| 10.0 + (i as f64 * 0.9).sin() * 0.01)
            .collect();
        let zeros = vec![0.0; 20];
        assert!(paired_t_test(&shifted, &zeros).unwrap() < 1e-6);
    }

    #[test]
    fn chain_descendancy_modes() {
        // target(0) -> 1 -> 2, D = {1, 2}, one unrelated node 3.
        let mut scores = vec![0.0; 16];
        scores[1] = 0.9; // 0 -> 1
        scores[6] = 0.8; // 1 -> 2
        let probs = matrix(4, &scores);
        let d: BTreeSet<usize> = [1, 2].into_iter().collect();
        let desc = roc_descendancy(&probs, 0, &d, DescendancyMode::Descendants).unwrap();
        assert_abs_diff_eq!(desc.auc, 1.0, epsilon = 1e-12);
        // Children mode: node 2 is never a direct child, so AUC < 1.
        let child = roc_descendancy(&probs, 0, &d, DescendancyMode::Children).unwrap();
        assert!(child.auc < 1.0);
    }

    #[test]
    fn descendants_monotone_in_threshold() {
        let p = 6;
        let scores: Vec<f64> = (0..p * p)
            .map(|k| ((k * 17 + 7) % 53) as f64 / 53.0)
            .collect();
        let probs = matrix(p, &scores);
        let mut taus: Vec<f64> = scores.clone();
        taus.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let mut prev: Option<BTreeSet<usize>> = None;
        for tau in taus {
            let d = descendants_at(&probs, 0, tau);
            if let Some(prev) = &prev {
                assert!(prev.is_subset(&d));
            }
            prev = Some(d);
        }
    }

    #[test]
    fn incomplete_beta_basic_identities() {
        assert_abs_diff_eq!(incomplete_beta(2.0, 3.0, 0.0), 0.0);
        assert_abs_diff_eq!(incomplete_beta(2.0, 3.0, 1.0), 1.0);
        // I_x(1,1) = x.
        for x in [0.1, 0.37, 0.8] {
            assert_abs_diff_eq!(incomplete_beta(1.0, 1.0, x), x, epsilon = 1e-12);
        }
        // Symmetry.
        assert_abs_diff_eq!(
            incomplete_beta(2.5, 4.5, 0.3),
            1.0 - incomplete_beta(4.5, 2.5, 0.7),
            epsilon = 1e-12
        );
    }
}
