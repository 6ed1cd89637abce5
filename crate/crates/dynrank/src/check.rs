//! Axiom reports over recorded trajectories, as emitted by `dynrank check`.

use std::str::FromStr;

use anyhow::{bail, Context};
use dynrank_core::axioms::groups::{at_least, standard_groups, GroupFamily};
use dynrank_core::axioms::{
    check_group_representation, check_h_alpha_monotonicity, check_js, check_pjs, check_weak_monotonicity,
    MonotonicityViolation, RepresentationQuery, SelectionCheck,
};
use dynrank_core::rational::{fraction, ratio};
use dynrank_core::{ApprovalProfile, CandidateId, Rational, RuleId, Trajectory, VoterGroup};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    Mono,
    WeakMono,
    Gr,
    Js,
    Pjs,
}

impl FromStr for Axiom {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        Ok(match s {
            "mono" => Axiom::Mono,
            "weak-mono" => Axiom::WeakMono,
            "gr" => Axiom::Gr,
            "js" => Axiom::Js,
            "pjs" => Axiom::Pjs,
            _ => bail!("unknown axiom `{s}` (expected mono, weak-mono, gr, js or pjs)"),
        })
    }
}

impl Axiom {
    pub fn as_str(self) -> &'static str {
        match self {
            Axiom::Mono => "mono",
            Axiom::WeakMono => "weak-mono",
            Axiom::Gr => "gr",
            Axiom::Js => "js",
            Axiom::Pjs => "pjs",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct CheckOptions {
    /// Depth for the monotonicity axioms; a fixed `κ` for group
    /// representation under rules without a closed-form bound.
    pub h: Option<usize>,
    pub alpha: Option<Rational>,
    pub ell: Option<usize>,
}

#[derive(Serialize)]
pub struct Report {
    pub axiom: &'static str,
    pub rule: String,
    pub holds: bool,
    pub groups_checked: usize,
    pub violations: Vec<Value>,
}

fn names(profile: &ApprovalProfile, cs: &[CandidateId]) -> Vec<String> {
    cs.iter().map(|&c| profile.name(c).to_string()).collect()
}

fn mono_json(v: &MonotonicityViolation) -> Value {
    json!({
        "iteration": v.iteration,
        "group": v.group.members(),
        "h": v.depth,
        "alpha": fraction(&v.alpha),
        "before": fraction(&v.before),
        "after": fraction(&v.after),
    })
}

fn selection_json(profile: &ApprovalProfile, t: usize, ell: usize, c: &SelectionCheck) -> Option<Value> {
    let w = c.witness.as_ref()?;
    Some(json!({
        "iteration": t,
        "ell": ell,
        "group": w.group.members(),
        "common": names(profile, &w.common),
        "represented": names(profile, &w.represented),
    }))
}

pub fn check(traj: &Trajectory, axiom: Axiom, opts: &CheckOptions) -> anyhow::Result<Report> {
    let profile = traj.profile();
    let n = profile.num_voters().max(1);
    let groups = standard_groups(profile, GroupFamily::default(), &[]);
    let mut violations = Vec::new();
    let mut groups_checked = 0;
    match axiom {
        Axiom::Mono | Axiom::WeakMono => {
            let h = opts.h.or(traj.depth()).context("--h is required when the trajectory has no depth")?;
            let alpha = opts.alpha.clone().unwrap_or_else(|| ratio(1, n as i64));
            let groups = at_least(profile, groups, &alpha);
            groups_checked = groups.len();
            let found = if axiom == Axiom::Mono {
                check_h_alpha_monotonicity(traj, h, &alpha, &groups)?
            } else {
                check_weak_monotonicity(traj, h, &alpha, &groups)?
            };
            violations.extend(found.iter().map(mono_json));
        }
        Axiom::Gr => {
            let groups: Vec<VoterGroup> = match &opts.alpha {
                Some(alpha) => at_least(profile, groups, alpha),
                None => groups,
            };
            groups_checked = groups.len();
            for t in 1..=traj.len() + 1 {
                let x = traj.implemented_before(t)?;
                let ranking = traj.ranking(t)?;
                for group in &groups {
                    let base = match &opts.alpha {
                        Some(alpha) => RepresentationQuery::new(profile, &x, group.clone(), alpha.clone(), 0)?,
                        None => RepresentationQuery::with_own_share(profile, &x, group.clone(), 0)?,
                    };
                    for lambda in 1..=base.cohesion {
                        let query = RepresentationQuery { lambda, ..base.clone() };
                        let kappa = match (traj.rule(), opts.h) {
                            (_, Some(h)) => h as u64,
                            (RuleId::DynPhragmen, None) => query.kappa_dyn_phragmen()?,
                            (RuleId::DynSeqPav, None) => query.kappa_dyn_seqpav()?,
                            (rule, None) => bail!("no closed-form bound for {rule}; pass --h as κ"),
                        };
                        let out = check_group_representation(profile, ranking, &query, kappa)?;
                        if !out.holds {
                            violations.push(json!({
                                "iteration": t,
                                "group": group.members(),
                                "alpha": fraction(&query.alpha),
                                "lambda": lambda,
                                "kappa": kappa,
                                "satisfaction": out.satisfaction.as_ref().map(fraction),
                            }));
                        }
                    }
                }
            }
        }
        Axiom::Js | Axiom::Pjs => {
            for t in 1..=traj.len() {
                let ells: Vec<usize> = match (axiom, opts.ell) {
                    (Axiom::Js, _) => vec![1],
                    (_, Some(ell)) => vec![ell],
                    (_, None) => (1..=t).collect(),
                };
                for ell in ells {
                    let out = if ell == 1 { check_js(traj, t)? } else { check_pjs(traj, t, ell)? };
                    violations.extend(selection_json(profile, t, ell, &out));
                }
            }
        }
    }
    Ok(Report {
        axiom: axiom.as_str(),
        rule: traj.rule().to_string(),
        holds: violations.is_empty(),
        groups_checked,
        violations,
    })
}
