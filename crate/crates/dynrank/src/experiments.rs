//! The two satisfaction experiments: implemented-set satisfaction against
//! group size, and top-5 satisfaction over time for a quarter-size group.

use std::io::Write;
use std::str::FromStr;

use anyhow::bail;
use dynrank_core::generators::{ctr_select, generate, rng_from_seed, GenConfig, Model, RNG_ALGORITHM};
use dynrank_core::rational::{from_usize, ratio, to_f64};
use dynrank_core::{avg_satisfaction, prefix, rank_top, CandidateId, ImplementedSequence, Ranking, Rational, RuleId};
use rayon::prelude::*;
use serde::Serialize;

/// Only this many positions can ever be selected by the click-through
/// decision maker.
const CTR_DEPTH: usize = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Figure {
    /// Satisfaction with the implemented set against `α`.
    Row1,
    /// Satisfaction with the top of the ranking over the iterations.
    Row2,
}

impl FromStr for Figure {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        match s {
            "row1" => Ok(Figure::Row1),
            "row2" => Ok(Figure::Row2),
            _ => bail!("unknown figure `{s}` (expected row1 or row2)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Settings {
    pub elections: usize,
    pub seed_base: u64,
    /// Group sizes `step, 2·step, …, n` for row 1.
    pub grid_step: usize,
    /// Depth of the ranking prefix measured in row 2.
    pub depth: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { elections: 100, seed_base: 0, grid_step: 3, depth: 5 }
    }
}

/// Number of candidates associated with the group under study.
pub fn group_candidates(model: Model) -> usize {
    match model {
        Model::BlurredParties => 10,
        Model::Spatial => 7,
    }
}

/// Number of iterations shown in row 2.
pub fn horizon(model: Model) -> usize {
    match model {
        Model::BlurredParties => 11,
        Model::Spatial => 8,
    }
}

/// Mean and spread of one series point over all elections.
#[derive(Clone, Debug)]
pub struct Point {
    pub model: Model,
    pub rule: RuleId,
    pub group_size: usize,
    pub voters: usize,
    pub iteration: usize,
    pub values: Vec<Rational>,
}

impl Point {
    pub fn alpha(&self) -> Rational {
        ratio(self.group_size as i64, self.voters as i64)
    }

    pub fn mean(&self) -> Rational {
        let sum = self.values.iter().fold(ratio(0, 1), |acc, v| acc + v);
        sum / from_usize(self.values.len().max(1))
    }

    /// Population standard deviation.
    pub fn stddev(&self) -> f64 {
        let mean = to_f64(&self.mean());
        let n = self.values.len().max(1) as f64;
        (self.values.iter().map(|v| (to_f64(v) - mean).powi(2)).sum::<f64>() / n).sqrt()
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub figure: Figure,
    pub model: Model,
    pub settings: Settings,
    pub points: Vec<Point>,
}

impl ExperimentResult {
    pub fn series(&self, rule: RuleId) -> impl Iterator<Item = &Point> {
        self.points.iter().filter(move |p| p.rule == rule)
    }

    pub fn mean_at(&self, rule: RuleId, group_size: usize, iteration: usize) -> Option<f64> {
        self.series(rule).find(|p| p.group_size == group_size && p.iteration == iteration).map(|p| to_f64(&p.mean()))
    }

    pub fn write_csv<W: Write>(&self, out: W) -> anyhow::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for p in &self.points {
            let alpha = p.alpha();
            w.serialize(CsvRow {
                model: p.model.as_str(),
                rule: p.rule.as_str(),
                alpha_num: alpha.numer().to_string(),
                alpha_den: alpha.denom().to_string(),
                iteration: p.iteration,
                mean_satisfaction: format!("{:.6}", to_f64(&p.mean())),
                stddev: format!("{:.6}", p.stddev()),
                runs: p.values.len(),
                seed_base: self.settings.seed_base,
            })?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    model: &'a str,
    rule: &'a str,
    alpha_num: String,
    alpha_den: String,
    iteration: usize,
    mean_satisfaction: String,
    stddev: String,
    runs: usize,
    seed_base: u64,
}

/// Seed of the decision maker's stream in election `seed`.
fn dm_seed(seed: u64) -> u64 {
    seed ^ 0xD1B5_4A32_D192_ED03
}

/// The supported part of the top `CTR_DEPTH`. Unsupported candidates are
/// last under every rule and cannot be paid for, so the decision maker
/// skips them.
fn selectable(profile: &dynrank_core::ApprovalProfile, r: &Ranking) -> Ranking {
    Ranking::new(r.as_slice().iter().copied().filter(|&c| profile.approval_score(c) > 0).collect())
}

/// One election of row 1: `k` click-through selections, returning the
/// implemented sequence and `avg_V(X^{k+1})`.
pub fn run_row1_election(
    model: Model,
    rule: RuleId,
    group_size: usize,
    seed: u64,
) -> anyhow::Result<(Vec<CandidateId>, Rational)> {
    let g = generate(&GenConfig::new(model, group_size, seed))?;
    let mut rng = rng_from_seed(dm_seed(seed));
    let mut x = ImplementedSequence::empty(&g.profile);
    for _ in 0..group_candidates(model) {
        let r = selectable(&g.profile, &rank_top(rule, &g.profile, &x, CTR_DEPTH)?);
        if r.is_empty() {
            break;
        }
        let c = ctr_select(&r, &mut rng)?;
        x.push(&g.profile, c)?;
    }
    let sat = avg_satisfaction(&g.profile, &g.group, x.as_set())?;
    Ok((x.as_slice().to_vec(), sat))
}

/// One election of row 2: `avg_V(r^t_{≤depth})` for every iteration.
pub fn run_row2_election(
    model: Model,
    rule: RuleId,
    depth: usize,
    seed: u64,
) -> anyhow::Result<(Vec<CandidateId>, Vec<Rational>)> {
    let cfg = GenConfig::new(model, 0, seed);
    let g = generate(&GenConfig { group_size: cfg.voters / 4, ..cfg })?;
    let mut rng = rng_from_seed(dm_seed(seed));
    let mut x = ImplementedSequence::empty(&g.profile);
    let mut out = Vec::new();
    for _ in 0..horizon(model) {
        let top = rank_top(rule, &g.profile, &x, CTR_DEPTH.max(depth))?;
        out.push(avg_satisfaction(&g.profile, &g.group, &prefix(&top, depth))?);
        let r = selectable(&g.profile, &top);
        if r.is_empty() {
            break;
        }
        x.push(&g.profile, ctr_select(&r, &mut rng)?)?;
    }
    Ok((x.as_slice().to_vec(), out))
}

fn seeds(settings: &Settings) -> Vec<u64> {
    (0..settings.elections as u64).map(|e| settings.seed_base.wrapping_add(e)).collect()
}

/// Row 1 for every rule. Elections share seeds across rules and group sizes.
pub fn run_satisfaction_vs_alpha(
    model: Model,
    rules: &[RuleId],
    settings: &Settings,
) -> anyhow::Result<ExperimentResult> {
    let voters = GenConfig::new(model, 0, 0).voters;
    let mut points = Vec::new();
    for &rule in rules {
        for group_size in (settings.grid_step..=voters).step_by(settings.grid_step.max(1)) {
            let values = seeds(settings)
                .into_par_iter()
                .map(|s| run_row1_election(model, rule, group_size, s).map(|(_, v)| v))
                .collect::<anyhow::Result<Vec<_>>>()?;
            points.push(Point { model, rule, group_size, voters, iteration: group_candidates(model), values });
        }
    }
    Ok(ExperimentResult { figure: Figure::Row1, model, settings: settings.clone(), points })
}

/// Row 2 for every rule.
pub fn run_satisfaction_over_time(
    model: Model,
    rules: &[RuleId],
    settings: &Settings,
) -> anyhow::Result<ExperimentResult> {
    let voters = GenConfig::new(model, 0, 0).voters;
    let t_max = horizon(model);
    let mut points = Vec::new();
    for &rule in rules {
        let runs = seeds(settings)
            .into_par_iter()
            .map(|s| run_row2_election(model, rule, settings.depth, s).map(|(_, v)| v))
            .collect::<anyhow::Result<Vec<_>>>()?;
        for t in 1..=t_max {
            let values = runs.iter().filter_map(|r| r.get(t - 1).cloned()).collect();
            points.push(Point { model, rule, group_size: voters / 4, voters, iteration: t, values });
        }
    }
    Ok(ExperimentResult { figure: Figure::Row2, model, settings: settings.clone(), points })
}

pub fn run(figure: Figure, model: Model, rules: &[RuleId], settings: &Settings) -> anyhow::Result<ExperimentResult> {
    match figure {
        Figure::Row1 => run_satisfaction_vs_alpha(model, rules, settings),
        Figure::Row2 => run_satisfaction_over_time(model, rules, settings),
    }
}

/// Metadata line written next to the CSV.
pub fn run_metadata(result: &ExperimentResult) -> serde_json::Value {
    serde_json::json!({
        "rng": RNG_ALGORITHM,
        "seed_base": result.settings.seed_base,
        "elections": result.settings.elections,
        "model": result.model.as_str(),
    })
}
