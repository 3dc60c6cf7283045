//! Per-node regression design matrices with intervention augmentation.
//!
//! For node `j` the response stacks `x_{j,c,t}` over all conditions and
//! times. The design splits into `X0` (two indicator columns, `1{t>0}` and
//! `1{t=0}`) and `Xγ` (lagged parent observations plus any columns the
//! intervention scheme introduces). Every `Xγ` column is projected onto the
//! orthogonal complement of `span(X0)` so that `X0ᵀXγ = 0`.
//!
//! Intervention augmentation, per scheme (targets are per condition):
//!
//! - `Perfect/Out`: zero parent column `i` in all rows of conditions where
//!   `i` is inhibited. `Perfect/In`: zero all parent columns in rows of
//!   conditions where `j` itself is inhibited.
//! - `FixedEffect/Out`: for each inhibited `i ∈ γ`, add an indicator column
//!   over the rows of the conditions inhibiting `i`. Identical indicators
//!   are merged. `FixedEffect/In`: if `j` is inhibited anywhere, add one
//!   indicator over the rows of the conditions inhibiting `j`.
//!   Indicators cover the `t=0` rows: the inhibitor is in effect for the
//!   entire experiment, including the first observation.
//! - `MechanismChange/Out`: split each inhibited parent column into an
//!   uninhibited-rows copy and an inhibited-rows copy, so the coefficient
//!   is re-estimated under intervention. `MechanismChange/In`: split every
//!   parent column by the conditions inhibiting `j`.
//! - `PerfectFixedEffect`: perfect zeroing plus the fixed-effect indicator,
//!   same direction.
//!
//! An augmentation that produces an all-zero or linearly dependent column
//! (e.g. a parent inhibited in every condition under `Perfect`) fails with
//! a structured rank error naming the column.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::data::{InterventionDesign, InterventionDirection, InterventionKind, TimeCourseDataset};
use crate::error::{CdbnError, Result};

/// Tolerance below which a column is treated as zero / linearly dependent,
/// relative to its pre-orthogonalization norm.
const RANK_TOL: f64 = 1e-9;

/// A candidate parent subset γ for one node. Self-edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParentSet {
    pub node: usize,
    parents: Vec<usize>,
}

impl ParentSet {
    /// Build a parent set; `parents` is deduplicated and sorted.
    pub fn new(node: usize, mut parents: Vec<usize>) -> Self {
        parents.sort_unstable();
        parents.dedup();
        Self { node, parents }
    }

    pub fn empty(node: usize) -> Self {
        Self {
            node,
            parents: Vec::new(),
        }
    }

    pub fn parents(&self) -> &[usize] {
        &self.parents
    }

    pub fn len(&self) -> usize {
        self.parents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parents.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.parents.binary_search(&i).is_ok()
    }
}

/// Provenance of one `Xγ` column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnTag {
    /// Lagged observations of a parent node.
    Parent(usize),
    /// Fixed-effect indicator over the rows of a set of conditions.
    FixedEffect { conditions: BTreeSet<usize> },
    /// Mechanism-change copy of a parent column; `inhibited` selects the
    /// intervention regime rows.
    MechanismCopy { parent: usize, inhibited: bool },
}

impl fmt::Display for ColumnTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnTag::Parent(i) => write!(f, "parent({i})"),
            ColumnTag::FixedEffect { conditions } => {
                write!(f, "fixed-effect(conditions={conditions:?})")
            }
            ColumnTag::MechanismCopy { parent, inhibited } => {
                let regime = if *inhibited {
                    "inhibited"
                } else {
                    "uninhibited"
                };
                write!(f, "mechanism-copy(parent={parent}, {regime})")
            }
        }
    }
}

/// The two-part design for one node and one parent set.
#[derive(Debug, Clone)]
pub struct DesignPair {
    /// `n × 2` indicator matrix `[1{t>0}, 1{t=0}]`.
    pub x0: DMatrix<f64>,
    /// `n × b` augmented, orthogonalized predictor matrix.
    pub xgamma: DMatrix<f64>,
    /// Length-`n` response for the node.
    pub response: DVector<f64>,
    /// Provenance of each `xgamma` column.
    pub column_tags: Vec<ColumnTag>,
}

impl DesignPair {
    pub fn n(&self) -> usize {
        self.x0.nrows()
    }

    /// Number of `X0` columns (always 2).
    pub fn a(&self) -> usize {
        self.x0.ncols()
    }

    /// Number of `Xγ` columns after augmentation.
    pub fn b(&self) -> usize {
        self.xgamma.ncols()
    }
}

/// Build `X0` for a dataset: row index `r = c*T + t`.
fn build_x0(data: &TimeCourseDataset) -> DMatrix<f64> {
    let n_time = data.num_times();
    let n = data.num_observations();
    DMatrix::from_fn(n, 2, |r, k| {
        let is_first = r % n_time == 0;
        if (k == 0) != is_first {
            1.0
        } else {
            0.0
        }
    })
}

/// Raw augmented predictor columns, before orthogonalization.
fn augmented_columns(
    data: &TimeCourseDataset,
    design: &InterventionDesign,
    pset: &ParentSet,
) -> Vec<(ColumnTag, DVector<f64>)> {
    let n_cond = data.num_conditions();
    let n_time = data.num_times();
    let n = data.num_observations();
    let scheme = design.scheme;
    let j = pset.node;

    let row = |c: usize, t: usize| c * n_time + t;

    // Lagged parent columns: x_{i,c,t-1} for t>0, zero at t=0.
    let lag_column = |i: usize| {
        let mut col = DVector::zeros(n);
        for c in 0..n_cond {
            for t in 1..n_time {
                col[row(c, t)] = data.value(i, c, t - 1);
            }
        }
        col
    };

    let perfect = matches!(
        scheme.kind,
        InterventionKind::Perfect | InterventionKind::PerfectFixedEffect
    );
    let fixed_effect = matches!(
        scheme.kind,
        InterventionKind::FixedEffect | InterventionKind::PerfectFixedEffect
    );
    let mechanism = scheme.kind == InterventionKind::MechanismChange;

    // Conditions whose rows are under intervention for a given parent column.
    let regime_conditions = |parent: usize| -> BTreeSet<usize> {
        match scheme.direction {
            InterventionDirection::Out => design.conditions_inhibiting(parent),
            InterventionDirection::In => design.conditions_inhibiting(j),
        }
    };

    let mut columns: Vec<(ColumnTag, DVector<f64>)> = Vec::new();
    for &i in pset.parents() {
        let mut col = lag_column(i);
        let regime = regime_conditions(i);
        if mechanism && !regime.is_empty() {
            let mut uninhibited = col.clone();
            let mut inhibited = DVector::zeros(n);
            for &c in &regime {
                for t in 0..n_time {
                    inhibited[row(c, t)] = uninhibited[row(c, t)];
                    uninhibited[row(c, t)] = 0.0;
                }
            }
            columns.push((
                ColumnTag::MechanismCopy {
                    parent: i,
                    inhibited: false,
                },
                uninhibited,
            ));
            columns.push((
                ColumnTag::MechanismCopy {
                    parent: i,
                    inhibited: true,
                },
                inhibited,
            ));
            continue;
        }
        if perfect {
            for &c in &regime {
                for t in 0..n_time {
                    col[row(c, t)] = 0.0;
                }
            }
        }
        columns.push((ColumnTag::Parent(i), col));
    }

    if fixed_effect {
        // Distinct condition sets that get an additive shift. Indicators
        // cover t=0 rows; identical indicators are merged.
        let mut indicator_sets: Vec<BTreeSet<usize>> = Vec::new();
        match scheme.direction {
            InterventionDirection::Out => {
                for &i in pset.parents() {
                    let set = design.conditions_inhibiting(i);
                    if !set.is_empty() && !indicator_sets.contains(&set) {
                        indicator_sets.push(set);
                    }
                }
            }
            InterventionDirection::In => {
                let set = design.conditions_inhibiting(j);
                if !set.is_empty() {
                    indicator_sets.push(set);
                }
            }
        }
        for set in indicator_sets {
            let mut col = DVector::zeros(n);
            for &c in &set {
                for t in 0..n_time {
                    col[row(c, t)] = 1.0;
                }
            }
            columns.push((ColumnTag::FixedEffect { conditions: set }, col));
        }
    }

    columns
}

/// Build the design pair for node `pset.node` under the given intervention
/// design, applying augmentation and orthogonalization.
pub fn build_design(
    data: &TimeCourseDataset,
    design: &InterventionDesign,
    pset: &ParentSet,
) -> Result<DesignPair> {
    let n_cond = data.num_conditions();
    let n_time = data.num_times();
    let n = data.num_observations();
    let j = pset.node;
    debug_assert!(j < data.num_nodes());

    let response = DVector::from_fn(n, |r, _| data.value(j, r / n_time, r % n_time));
    let x0 = build_x0(data);

    let columns = augmented_columns(data, design, pset);
    let _ = n_cond;

    let mut raw = DMatrix::zeros(n, columns.len());
    let mut column_tags = Vec::with_capacity(columns.len());
    let mut raw_norms = Vec::with_capacity(columns.len());
    for (k, (tag, col)) in columns.into_iter().enumerate() {
        let norm = col.norm();
        if norm <= RANK_TOL {
            return Err(CdbnError::RankDeficient {
                node: j,
                column: tag.to_string(),
                reason: "is identically zero after augmentation".into(),
            });
        }
        raw.set_column(k, &col);
        column_tags.push(tag);
        raw_norms.push(norm);
    }

    let xgamma = orthogonalize(&x0, &raw)?;

    // Full-column-rank check via modified Gram-Schmidt; the first column
    // whose residual collapses is reported.
    let b = xgamma.ncols();
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(b);
    for k in 0..b {
        let mut v = xgamma.column(k).clone_owned();
        for q in &basis {
            let coef = q.dot(&v);
            v -= q * coef;
        }
        let norm = v.norm();
        if norm <= RANK_TOL * raw_norms[k] {
            return Err(CdbnError::RankDeficient {
                node: j,
                column: column_tags[k].to_string(),
                reason: "is linearly dependent on X0 and earlier columns".into(),
            });
        }
        basis.push(v / norm);
    }

    Ok(DesignPair {
        x0,
        xgamma,
        response,
        column_tags,
    })
}

/// Project every column of `xraw` onto the orthogonal complement of the
/// column space of `x0`, i.e. return `(I - P0)·Xraw`.
pub fn orthogonalize(x0: &DMatrix<f64>, xraw: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let a = x0.ncols();
    let qr = x0.clone().qr();
    let r = qr.r();
    for k in 0..a {
        if r[(k, k)].abs() <= 1e-12 {
            return Err(CdbnError::InvalidDesign(
                "X0 is rank-deficient; cannot orthogonalize".into(),
            ));
        }
    }
    let q = qr.q();
    Ok(xraw - &q * (q.transpose() * xraw))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::InterventionScheme;
    use std::collections::BTreeSet;

    /// Deterministic synthetic dataset: value(j,c,t) = sin((j+1)(1 + 2c + 0.7t)).
    fn toy_dataset(p: usize, n_cond: usize, n_time: usize) -> TimeCourseDataset {
        let names = (0..p).map(|j| format!("N{j}")).collect();
        let conds = (0..n_cond).map(|c| format!("C{c}")).collect();
        let times = (0..n_time).map(|t| t as f64).collect();
        let mut values = Vec::new();
        for j in 0..p {
            for c in 0..n_cond {
                for t in 0..n_time {
                    values.push(((j as f64 + 1.0) * (1.0 + 2.0 * c as f64 + 0.7 * t as f64)).sin());
                }
            }
        }
        TimeCourseDataset::new(names, conds, times, values).unwrap()
    }

    fn scheme(kind: InterventionKind, direction: InterventionDirection) -> InterventionScheme {
        InterventionScheme::new(kind, direction)
    }

    fn design_with_targets(
        data: &TimeCourseDataset,
        s: InterventionScheme,
        targets: &[&[usize]],
    ) -> InterventionDesign {
        let sets = targets
            .iter()
            .map(|t| t.iter().copied().collect())
            .collect();
        InterventionDesign::new(sets, s, data).unwrap()
    }

    #[test]
    fn scheme_none_shapes() {
        let data = toy_dataset(3, 4, 8);
        let design = InterventionDesign::empty(InterventionScheme::none(), &data);
        let dp = build_design(&data, &design, &ParentSet::new(2, vec![0])).unwrap();
        assert_eq!(dp.x0.shape(), (32, 2));
        assert_eq!(dp.xgamma.shape(), (32, 1));
        assert_eq!(dp.column_tags, vec![ColumnTag::Parent(0)]);
    }

    #[test]
    fn empty_parent_set_gives_empty_xgamma() {
        let data = toy_dataset(3, 2, 4);
        let design = InterventionDesign::empty(InterventionScheme::none(), &data);
        let dp = build_design(&data, &design, &ParentSet::empty(1)).unwrap();
        assert_eq!(dp.b(), 0);
        assert_eq!(dp.a(), 2);
    }

    #[test]
    fn lag_structure_and_perfect_out_zeroing() {
        // Two nodes, two conditions, T=3; node 0 inhibited in condition 1.
        let data = toy_dataset(2, 2, 3);
        let s = scheme(InterventionKind::Perfect, InterventionDirection::Out);
        let design = design_with_targets(&data, s, &[&[], &[0]]);
        let pset = ParentSet::new(1, vec![0]);
        let cols = augmented_columns(&data, &design, &pset);
        assert_eq!(cols.len(), 1);
        let col = &cols[0].1;
        // Condition 0 rows carry the lagged values of node 0.
        assert_eq!(col[0], 0.0); // t=0
        assert_eq!(col[1], data.value(0, 0, 0));
        assert_eq!(col[2], data.value(0, 0, 1));
        // Condition 1 rows are zeroed by the perfect-out intervention.
        assert_eq!(col[3], 0.0);
        assert_eq!(col[4], 0.0);
        assert_eq!(col[5], 0.0);
    }

    #[test]
    fn perfect_in_zeroes_all_parents_in_inhibited_condition() {
        let data = toy_dataset(3, 2, 3);
        let s = scheme(InterventionKind::Perfect, InterventionDirection::In);
        // Node 1 (the regression target) is inhibited in condition 1.
        let design = design_with_targets(&data, s, &[&[], &[1]]);
        let pset = ParentSet::new(1, vec![0, 2]);
        let cols = augmented_columns(&data, &design, &pset);
        for (_, col) in &cols {
            for t in 0..3 {
                assert_eq!(col[3 + t], 0.0);
            }
            assert!(col.iter().take(3).any(|v| *v != 0.0));
        }
    }

    #[test]
    fn fixed_effect_out_gated_on_membership_and_merged() {
        let data = toy_dataset(4, 4, 3);
        let s = scheme(InterventionKind::FixedEffect, InterventionDirection::Out);
        // Nodes 0 and 1 inhibited in exactly the same conditions {1, 3};
        // node 2 never inhibited.
        let design = design_with_targets(&data, s, &[&[], &[0, 1], &[], &[0, 1]]);

        // Inhibited parent not in γ: no indicator.
        let dp = build_design(&data, &design, &ParentSet::new(3, vec![2])).unwrap();
        assert_eq!(dp.column_tags, vec![ColumnTag::Parent(2)]);

        // Two inhibited parents with identical condition sets: one merged
        // indicator column covering t=0 rows.
        let dp = build_design(&data, &design, &ParentSet::new(3, vec![0, 1])).unwrap();
        assert_eq!(dp.b(), 3);
        let tag = ColumnTag::FixedEffect {
            conditions: BTreeSet::from([1, 3]),
        };
        assert_eq!(dp.column_tags.iter().filter(|t| **t == tag).count(), 1);
        let cols = augmented_columns(&data, &design, &ParentSet::new(3, vec![0, 1]));
        let ind = &cols.last().unwrap().1;
        for t in 0..3 {
            assert_eq!(ind[3 + t], 1.0); // condition 1, incl. t=0
            assert_eq!(ind[9 + t], 1.0); // condition 3
            assert_eq!(ind[t], 0.0);
            assert_eq!(ind[6 + t], 0.0);
        }
    }

    #[test]
    fn fixed_effect_in_unconditional_on_gamma() {
        let data = toy_dataset(3, 2, 3);
        let s = scheme(InterventionKind::FixedEffect, InterventionDirection::In);
        let design = design_with_targets(&data, s, &[&[], &[1]]);
        // Even with γ=∅, node 1's own regression gets the indicator.
        let dp = build_design(&data, &design, &ParentSet::empty(1)).unwrap();
        assert_eq!(
            dp.column_tags,
            vec![ColumnTag::FixedEffect {
                conditions: BTreeSet::from([1])
            }]
        );
        // A different node gets nothing.
        let dp = build_design(&data, &design, &ParentSet::empty(0)).unwrap();
        assert_eq!(dp.b(), 0);
    }

    #[test]
    fn mechanism_change_out_splits_inhibited_parent() {
        let data = toy_dataset(2, 2, 3);
        let s = scheme(
            InterventionKind::MechanismChange,
            InterventionDirection::Out,
        );
        let design = design_with_targets(&data, s, &[&[], &[0]]);
        let cols = augmented_columns(&data, &design, &ParentSet::new(1, vec![0]));
        assert_eq!(cols.len(), 2);
        let (uninhib, inhib) = (&cols[0].1, &cols[1].1);
        // The two copies partition the original lagged column.
        assert_eq!(uninhib[1], data.value(0, 0, 0));
        assert_eq!(inhib[1], 0.0);
        assert_eq!(uninhib[4], 0.0);
        assert_eq!(inhib[4], data.value(0, 1, 0));
    }

    #[test]
    fn uninhibited_condition_rows_match_scheme_none() {
        let data = toy_dataset(3, 3, 4);
        let pset = ParentSet::new(2, vec![0, 1]);
        let none = InterventionDesign::empty(InterventionScheme::none(), &data);
        let base = augmented_columns(&data, &none, &pset);
        for kind in [
            InterventionKind::Perfect,
            InterventionKind::FixedEffect,
            InterventionKind::PerfectFixedEffect,
            InterventionKind::MechanismChange,
        ] {
            for dir in [InterventionDirection::Out, InterventionDirection::In] {
                let design = design_with_targets(&data, scheme(kind, dir), &[&[], &[0], &[]]);
                let cols = augmented_columns(&data, &design, &pset);
                // Conditions 0 and 2 have no targets: parent-column rows there
                // must match the scheme-None rows (summing mechanism copies).
                for r in (0..4).chain(8..12) {
                    for (k, (tag, base_col)) in base.iter().enumerate() {
                        let ColumnTag::Parent(i) = tag else {
                            unreachable!()
                        };
                        let got: f64 = cols
                            .iter()
                            .filter(|(t, _)| {
                                matches!(t, ColumnTag::Parent(pi) if pi == i)
                                    || matches!(t, ColumnTag::MechanismCopy { parent, .. } if parent == i)
                            })
                            .map(|(_, c)| c[r])
                            .sum();
                        let _ = k;
                        assert_eq!(got, base_col[r], "{kind:?}/{dir:?} row {r}");
                    }
                }
            }
        }
    }

    #[test]
    fn orthogonality_invariant_and_idempotence() {
        let data = toy_dataset(4, 2, 5);
        let design = InterventionDesign::empty(InterventionScheme::none(), &data);
        let dp = build_design(&data, &design, &ParentSet::new(0, vec![0, 1, 3])).unwrap();
        let cross = dp.x0.transpose() * &dp.xgamma;
        assert!(cross.amax() <= 1e-10, "X0'Xg max {}", cross.amax());
        let again = orthogonalize(&dp.x0, &dp.xgamma).unwrap();
        assert!((&again - &dp.xgamma).amax() <= 1e-12);
    }

    #[test]
    fn orthogonalize_random_matrix_check() {
        // 8x3 deterministic pseudo-random matrix; X0'·result must vanish.
        let x0 = DMatrix::from_fn(
            8,
            2,
            |r, k| if (r % 4 == 0) == (k == 1) { 1.0 } else { 0.0 },
        );
        let xraw = DMatrix::from_fn(8, 3, |r, k| ((r * 7 + k * 13 + 1) as f64).sin());
        let out = orthogonalize(&x0, &xraw).unwrap();
        assert!((x0.transpose() * &out).amax() < 1e-10);
    }

    #[test]
    fn constant_column_lies_in_x0_span() {
        // A column constant on t>0 rows and zero at t=0 is in span(X0).
        let data = toy_dataset(1, 2, 4);
        let x0 = build_x0(&data);
        let col = DMatrix::from_fn(8, 1, |r, _| if r % 4 == 0 { 0.0 } else { 5.0 });
        let out = orthogonalize(&x0, &col).unwrap();
        assert!(out.amax() < 1e-12);
    }

    #[test]
    fn parent_inhibited_everywhere_yields_zero_column_error() {
        let data = toy_dataset(2, 2, 3);
        let s = scheme(InterventionKind::Perfect, InterventionDirection::Out);
        let design = design_with_targets(&data, s, &[&[0], &[0]]);
        let err = build_design(&data, &design, &ParentSet::new(1, vec![0])).unwrap_err();
        match err {
            CdbnError::RankDeficient { column, .. } => {
                assert!(column.contains("parent(0)"), "{column}");
            }
            other => panic!("expected rank error, got {other}"),
        }
    }

    #[test]
    fn duplicate_parent_columns_yield_rank_error() {
        // Two nodes with identical trajectories produce identical lag columns.
        let names = vec!["A".into(), "B".into(), "C".into()];
        let conds = vec!["c0".into()];
        let times = vec![0.0, 1.0, 2.0, 3.0, 4.0];
        let mut values = Vec::new();
        for j in 0..3 {
            for t in 0..5 {
                let base = (t as f64 * 0.7).sin();
                values.push(if j < 2 { base } else { base * base });
            }
        }
        let data = TimeCourseDataset::new(names, conds, times, values).unwrap();
        let design = InterventionDesign::empty(InterventionScheme::none(), &data);
        let err = build_design(&data, &design, &ParentSet::new(2, vec![0, 1])).unwrap_err();
        assert!(matches!(err, CdbnError::RankDeficient { .. }), "{err}");
    }
}
