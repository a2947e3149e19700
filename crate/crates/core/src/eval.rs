//! Cross-validation of layouts against held-out causal paths.
//!
//! Each repetition splits the path occurrences into a training and a test
//! part, lays out the training part at every requested maximum order and
//! measures the layout against the test part.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layout::{compute_layout, Layout, LayoutConfig};
use crate::metrics::{
    barycentre, causal_path_dispersion, closeness_eccentricity, edge_crossing, temporal_closeness,
    top_percentile,
};
use crate::paths::{split, PathCollection};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub orders: Vec<usize>,
    pub repetitions: usize,
    pub train_fraction: f64,
    /// Percentile defining the top-closeness vertices.
    pub gamma: f64,
    pub base_seed: u64,
}

impl Default for ExperimentPlan {
    fn default() -> Self {
        Self {
            orders: vec![1, 2],
            repetitions: 100,
            train_fraction: 0.7,
            gamma: 10.0,
            base_seed: 0,
        }
    }
}

impl ExperimentPlan {
    fn validate(&self, pc: &PathCollection) -> Result<()> {
        if self.orders.is_empty() || self.orders.contains(&0) {
            return Err(Error::invalid("orders must be non-empty and each at least 1"));
        }
        if self.repetitions < 1 {
            return Err(Error::invalid("at least one repetition is required"));
        }
        let max = *self.orders.iter().max().expect("non-empty");
        if max > pc.max_length() {
            return Err(Error::invalid(format!(
                "order {max} exceeds maximum path length {} of the data",
                pc.max_length()
            )));
        }
        Ok(())
    }

    /// Seed of repetition `r`, used for both the split and the layout.
    pub fn seed_for(&self, repetition: usize) -> u64 {
        self.base_seed ^ repetition as u64
    }
}

/// Receiver operating characteristic of a scored binary classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Roc {
    /// `(false positive rate, true positive rate)` from `(0,0)` to `(1,1)`.
    pub points: Vec<(f64, f64)>,
    pub auc: f64,
}

/// ROC curve from `(score, is_positive)` pairs, sweeping the threshold from
/// the highest score down. Equal scores are crossed in a single step, so
/// ties contribute half a correctly ordered pair to the area.
pub fn roc_curve(scored: &[(f64, bool)]) -> Result<Roc> {
    let positives = scored.iter().filter(|s| s.1).count();
    let negatives = scored.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::invalid(format!(
            "ROC needs both classes (got {positives} positives, {negatives} negatives)"
        )));
    }
    let mut sorted = scored.to_vec();
    sorted.sort_by(|a, b| b.0.total_cmp(&a.0));

    let (p, n) = (positives as f64, negatives as f64);
    let mut points = vec![(0.0, 0.0)];
    let (mut tp, mut fp) = (0u64, 0u64);
    // twice the area in units of (pairs)
    let mut doubled = 0u64;
    let mut i = 0;
    while i < sorted.len() {
        let score = sorted[i].0;
        let (tp0, fp0) = (tp, fp);
        while i < sorted.len() && sorted[i].0.total_cmp(&score).is_eq() {
            if sorted[i].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        doubled += (fp - fp0) * (tp + tp0);
        points.push((fp as f64 / n, tp as f64 / p));
    }
    Ok(Roc {
        points,
        auc: doubled as f64 / (2.0 * p * n),
    })
}

/// Predicts the top-`gamma` temporal-closeness vertices of `test_closeness`
/// by proximity to the barycentre of `layout`.
pub fn closeness_roc(layout: &Layout, test_closeness: &BTreeMap<String, f64>, gamma: f64) -> Result<Roc> {
    if !(gamma > 0.0 && gamma <= 100.0) {
        return Err(Error::invalid(format!("gamma must lie in (0, 100], got {gamma}")));
    }
    let points: Vec<_> = layout.positions().values().copied().collect();
    let centre = barycentre(&points)?;
    let positives: std::collections::BTreeSet<&str> = top_percentile(
        layout.positions().keys().map(String::as_str),
        test_closeness,
        gamma,
    )
    .into_iter()
    .collect();
    if positives.is_empty() {
        return Err(Error::invalid("gamma selects no positive vertices"));
    }
    let scored: Vec<(f64, bool)> = layout
        .positions()
        .iter()
        .map(|(v, p)| (-p.distance(centre), positives.contains(v.as_str())))
        .collect();
    roc_curve(&scored)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub order: usize,
    pub repetition: usize,
    pub seed: u64,
    pub edge_crossings: u64,
    pub dispersion: f64,
    pub eccentricity: f64,
    pub roc: Roc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation; 0 for a single sample.
    pub std: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Self { mean, std }
    }

    pub fn standard_error(&self, samples: usize) -> f64 {
        self.std / (samples as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderSummary {
    pub order: usize,
    pub samples: usize,
    pub edge_crossings: Summary,
    pub dispersion: Summary,
    pub eccentricity: Summary,
    pub auc: Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub plan: ExperimentPlan,
    pub layout: LayoutConfig,
    /// Ordered by order, then repetition.
    pub runs: Vec<RunRecord>,
    pub summary: Vec<OrderSummary>,
}

impl ExperimentReport {
    pub fn summary_for(&self, order: usize) -> Option<&OrderSummary> {
        self.summary.iter().find(|s| s.order == order)
    }

    /// One row per run, for external plotting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("order,repetition,seed,edge_crossings,dispersion,eccentricity,auc\n");
        for r in &self.runs {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.order, r.repetition, r.seed, r.edge_crossings, r.dispersion, r.eccentricity, r.roc.auc
            );
        }
        out
    }
}

/// Runs the cross-validation protocol. Runs execute in parallel; the report
/// does not depend on scheduling.
pub fn run_experiment(pc: &PathCollection, plan: &ExperimentPlan, cfg: &LayoutConfig) -> Result<ExperimentReport> {
    plan.validate(pc)?;
    let edges: Vec<(&str, &str)> = pc
        .of_length(1)
        .map(|(p, _)| (pc.vertices().name(p[0]), pc.vertices().name(p[1])))
        .collect();
    let jobs: Vec<(usize, usize)> = plan
        .orders
        .iter()
        .flat_map(|&k| (0..plan.repetitions).map(move |r| (k, r)))
        .collect();

    let runs: Vec<RunRecord> = jobs
        .par_iter()
        .map(|&(order, repetition)| {
            run_single(pc, &edges, plan, cfg, order, repetition).map_err(|e| Error::Experiment {
                order,
                repetition,
                source: Box::new(e),
            })
        })
        .collect::<Result<_>>()?;

    let mut summary = Vec::new();
    for &order in &plan.orders {
        let rows: Vec<&RunRecord> = runs.iter().filter(|r| r.order == order).collect();
        let col = |f: fn(&RunRecord) -> f64| Summary::of(&rows.iter().map(|r| f(r)).collect::<Vec<_>>());
        summary.push(OrderSummary {
            order,
            samples: rows.len(),
            edge_crossings: col(|r| r.edge_crossings as f64),
            dispersion: col(|r| r.dispersion),
            eccentricity: col(|r| r.eccentricity),
            auc: col(|r| r.roc.auc),
        });
    }
    Ok(ExperimentReport {
        plan: plan.clone(),
        layout: cfg.clone(),
        runs,
        summary,
    })
}

fn run_single(
    pc: &PathCollection,
    edges: &[(&str, &str)],
    plan: &ExperimentPlan,
    cfg: &LayoutConfig,
    order: usize,
    repetition: usize,
) -> Result<RunRecord> {
    let seed = plan.seed_for(repetition);
    let (train, test) = split(pc, plan.train_fraction, seed)?;
    let layout_cfg = LayoutConfig {
        max_order: order,
        seed,
        ..cfg.clone()
    };
    let layout = compute_layout(&train, &layout_cfg)?;
    let closeness = temporal_closeness(&test);
    Ok(RunRecord {
        order,
        repetition,
        seed,
        edge_crossings: edge_crossing(&layout, edges)?,
        dispersion: causal_path_dispersion(&layout, &test)?,
        eccentricity: closeness_eccentricity(&layout, &closeness, plan.gamma)?,
        roc: closeness_roc(&layout, &closeness, plan.gamma)?,
    })
}
