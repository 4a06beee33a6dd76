//! Ranking metrics and the repeated stratified evaluation protocol.

use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dataset::{stratified_split, MixedTable};
use crate::detector::{FittedDetector, LabeledScoring};
use crate::error::{FrodError, Result};

fn check_truth(scores: &[f64], truth: &[bool], need_negative: bool) -> Result<(usize, usize)> {
    if scores.len() != truth.len() {
        return Err(FrodError::DegenerateTruth(format!(
            "{} scores but {} labels",
            scores.len(),
            truth.len()
        )));
    }
    let pos = truth.iter().filter(|&&t| t).count();
    let neg = truth.len() - pos;
    if pos == 0 {
        return Err(FrodError::DegenerateTruth("no positive objects".into()));
    }
    if need_negative && neg == 0 {
        return Err(FrodError::DegenerateTruth("no negative objects".into()));
    }
    Ok((pos, neg))
}

/// Area under the ROC curve via average ranks (ties count one half).
///
/// Rank sums are kept doubled in integers, so the result is exactly
/// `(2 * #correctly ordered pairs + #tied pairs) / (2 * P * N)`.
pub fn auc(scores: &[f64], truth: &[bool]) -> Result<f64> {
    let (pos, neg) = check_truth(scores, truth, true)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    let mut doubled_rank_sum: u128 = 0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len()
            && scores[order[end]].total_cmp(&scores[order[start]]) == Ordering::Equal
        {
            end += 1;
        }
        // ranks start+1..=end share the doubled average rank start+1+end
        let doubled = (start + 1 + end) as u128;
        let positives = order[start..end].iter().filter(|&&i| truth[i]).count() as u128;
        doubled_rank_sum += doubled * positives;
        start = end;
    }
    let p = pos as u128;
    let numerator = doubled_rank_sum - p * (p + 1);
    Ok(numerator as f64 / (2 * p * neg as u128) as f64)
}

/// Mean of the precision at each positive's rank, ranking by descending score
/// with ties kept in object-id order.
pub fn average_precision(scores: &[f64], truth: &[bool]) -> Result<f64> {
    let (pos, _) = check_truth(scores, truth, false)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (rank, &i) in order.iter().enumerate() {
        if truth[i] {
            hits += 1;
            sum += hits as f64 / (rank + 1) as f64;
        }
    }
    Ok(sum / pos as f64)
}

/// Candidate `(delta, beta)` values. Iteration order is ascending `delta`,
/// then ascending `beta`, which is also the tie-break order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub deltas: Vec<f64>,
    pub betas: Vec<f64>,
}

impl Grid {
    /// `delta` from 0.1 to 3 in steps of 0.5; `beta` over five decades.
    pub fn standard() -> Self {
        Grid {
            deltas: vec![0.1, 0.6, 1.1, 1.6, 2.1, 2.6],
            betas: vec![0.01, 0.1, 1.0, 10.0, 100.0],
        }
    }

    pub fn single(delta: f64, beta: f64) -> Self {
        Grid {
            deltas: vec![delta],
            betas: vec![beta],
        }
    }

    fn sorted(&self) -> Result<Grid> {
        if self.deltas.is_empty() || self.betas.is_empty() {
            return Err(FrodError::Param("parameter grid is empty".into()));
        }
        let mut g = self.clone();
        g.deltas.sort_by(f64::total_cmp);
        g.deltas.dedup();
        g.betas.sort_by(f64::total_cmp);
        g.betas.dedup();
        Ok(g)
    }
}

/// How grid points with equal labeled AUC are ordered.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    /// Prefer the larger threshold margin (lowest labeled-outlier score minus
    /// highest labeled-normal score), then the smaller `delta` and `beta`.
    #[default]
    Margin,
    /// Prefer the smaller `delta`, then the smaller `beta`.
    SmallerParameters,
}

/// Lowest labeled-outlier score minus highest labeled-normal score.
pub fn threshold_margin(scores: &[f64], truth: &[bool]) -> f64 {
    let mut min_out = f64::INFINITY;
    let mut max_norm = f64::NEG_INFINITY;
    for (&s, &t) in scores.iter().zip(truth) {
        if t {
            min_out = min_out.min(s);
        } else {
            max_norm = max_norm.max(s);
        }
    }
    min_out - max_norm
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dataset: String,
    pub labeled_fraction: f64,
    pub seeds: Vec<u64>,
    pub grid: Grid,
    #[serde(default)]
    pub labeled_scoring: LabeledScoring,
    #[serde(default)]
    pub tie_break: TieBreak,
    /// Keep per-run unlabeled scores in the report.
    #[serde(default)]
    pub keep_scores: bool,
}

impl ExperimentConfig {
    pub fn new(
        dataset: impl Into<String>,
        labeled_fraction: f64,
        seeds: Vec<u64>,
        grid: Grid,
    ) -> Self {
        ExperimentConfig {
            dataset: dataset.into(),
            labeled_fraction,
            seeds,
            grid,
            labeled_scoring: LabeledScoring::default(),
            tie_break: TieBreak::default(),
            keep_scores: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunScores {
    pub unlabeled: Vec<usize>,
    pub scores: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub n_labeled: usize,
    pub delta: f64,
    pub beta: f64,
    /// AUC on the labeled objects that selected this configuration.
    pub selection_auc: f64,
    /// Threshold margin on the labeled objects for this configuration.
    pub selection_margin: f64,
    pub auc: f64,
    pub ap: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub scores: Option<RunScores>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl MetricSummary {
    fn of(values: &[f64]) -> MetricSummary {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        MetricSummary {
            mean,
            std,
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub dataset: String,
    pub n_objects: usize,
    pub n_attributes: usize,
    pub n_outliers: usize,
    pub labeled_fraction: f64,
    pub grid: Grid,
    pub runs: Vec<RunRecord>,
    pub auc: MetricSummary,
    pub ap: MetricSummary,
    /// Most frequently selected `(delta, beta)`; ties go to the smaller pair.
    pub best_config: (f64, f64),
}

impl ExperimentReport {
    pub fn to_text_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "dataset {}  objects {}  attributes {}  outliers {}  labeled fraction {}",
            self.dataset, self.n_objects, self.n_attributes, self.n_outliers, self.labeled_fraction
        );
        let _ = writeln!(
            s,
            "{:>8} {:>8} {:>7} {:>8} {:>8} {:>8}",
            "seed", "labeled", "delta", "beta", "AUC", "AP"
        );
        for r in &self.runs {
            let _ = writeln!(
                s,
                "{:>8} {:>8} {:>7.2} {:>8} {:>8.4} {:>8.4}",
                r.seed, r.n_labeled, r.delta, r.beta, r.auc, r.ap
            );
        }
        let _ = writeln!(
            s,
            "mean AUC {:.4} (std {:.4})  mean AP {:.4} (std {:.4})  best delta {} beta {}",
            self.auc.mean,
            self.auc.std,
            self.ap.mean,
            self.ap.std,
            self.best_config.0,
            self.best_config.1
        );
        s
    }
}

/// Stratified split, grid search on the labeled part by AUC (ties ordered by
/// [`TieBreak`]), and scoring of
/// the unlabeled remainder against its held-out truth, once per seed.
pub fn run_experiment(table: &MixedTable, config: &ExperimentConfig) -> Result<ExperimentReport> {
    if config.seeds.is_empty() {
        return Err(FrodError::Param("at least one seed is required".into()));
    }
    let truth = table.ground_truth()?;
    let grid = config.grid.sorted()?;
    let runs = map_runs(&config.seeds, |seed| {
        run_once(table, &truth, config, &grid, seed)
    })?;

    let aucs: Vec<f64> = runs.iter().map(|r| r.auc).collect();
    let aps: Vec<f64> = runs.iter().map(|r| r.ap).collect();
    Ok(ExperimentReport {
        dataset: config.dataset.clone(),
        n_objects: table.n_objects(),
        n_attributes: table.n_attributes(),
        n_outliers: truth.iter().filter(|&&t| t).count(),
        labeled_fraction: config.labeled_fraction,
        best_config: most_selected(&runs),
        grid,
        auc: MetricSummary::of(&aucs),
        ap: MetricSummary::of(&aps),
        runs,
    })
}

#[cfg(feature = "parallel")]
fn map_runs<F>(seeds: &[u64], f: F) -> Result<Vec<RunRecord>>
where
    F: Fn(u64) -> Result<RunRecord> + Sync,
{
    use rayon::prelude::*;
    seeds.par_iter().map(|&s| f(s)).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_runs<F>(seeds: &[u64], f: F) -> Result<Vec<RunRecord>>
where
    F: Fn(u64) -> Result<RunRecord>,
{
    seeds.iter().map(|&s| f(s)).collect()
}

fn run_once(
    table: &MixedTable,
    truth: &[bool],
    config: &ExperimentConfig,
    grid: &Grid,
    seed: u64,
) -> Result<RunRecord> {
    let split = stratified_split(table, config.labeled_fraction, seed)?;
    let labeled_truth: Vec<bool> = split.labeled.iter().map(|&i| truth[i]).collect();
    let unlabeled_truth: Vec<bool> = split.unlabeled.iter().map(|&i| truth[i]).collect();

    // (delta, beta, (labeled AUC, margin), unlabeled scores)
    type Candidate = (f64, f64, (f64, f64), Vec<f64>);
    let mut best: Option<Candidate> = None;
    for &delta in &grid.deltas {
        let fitted = FittedDetector::fit(
            table,
            &split.labeled,
            &split.unlabeled,
            delta,
            config.labeled_scoring,
        )?;
        for &beta in &grid.betas {
            let (unlabeled_scores, labeled_scores) = fitted.scores(beta)?;
            let selection = (
                auc(&labeled_scores, &labeled_truth)?,
                threshold_margin(&labeled_scores, &labeled_truth),
            );
            let better = |b: &(f64, f64)| match config.tie_break {
                TieBreak::Margin => selection.0 > b.0 || (selection.0 == b.0 && selection.1 > b.1),
                TieBreak::SmallerParameters => selection.0 > b.0,
            };
            if best.as_ref().is_none_or(|b| better(&b.2)) {
                best = Some((delta, beta, selection, unlabeled_scores));
            }
        }
    }
    let (delta, beta, (selection_auc, selection_margin), scores) = best.expect("grid is non-empty");
    Ok(RunRecord {
        seed,
        n_labeled: split.labeled.len(),
        delta,
        beta,
        selection_auc,
        selection_margin,
        auc: auc(&scores, &unlabeled_truth)?,
        ap: average_precision(&scores, &unlabeled_truth)?,
        scores: config.keep_scores.then(|| RunScores {
            unlabeled: split.unlabeled.clone(),
            scores,
        }),
    })
}

fn most_selected(runs: &[RunRecord]) -> (f64, f64) {
    let mut counts: Vec<((f64, f64), usize)> = Vec::new();
    for r in runs {
        match counts.iter_mut().find(|(c, _)| *c == (r.delta, r.beta)) {
            Some((_, n)) => *n += 1,
            None => counts.push(((r.delta, r.beta), 1)),
        }
    }
    counts.sort_by(|(a, na), (b, nb)| {
        nb.cmp(na)
            .then(a.0.total_cmp(&b.0))
            .then(a.1.total_cmp(&b.1))
    });
    counts[0].0
}
