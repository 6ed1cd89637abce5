//! JSON documents for profiles and trajectories.

use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context};
use dynrank_core::session::Step;
use dynrank_core::{ApprovalProfile, Ranking, Rational, RuleId, Trajectory};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileDoc {
    /// In priority order.
    pub candidates: Vec<String>,
    pub voters: Vec<Vec<String>>,
}

impl ProfileDoc {
    pub fn from_profile(profile: &ApprovalProfile) -> Self {
        let voters =
            profile.ballots().iter().map(|b| b.iter().map(|&c| profile.name(c).to_string()).collect()).collect();
        ProfileDoc { candidates: profile.names().to_vec(), voters }
    }

    pub fn to_profile(&self) -> dynrank_core::Result<ApprovalProfile> {
        ApprovalProfile::from_names(&self.candidates, &self.voters)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDoc {
    pub ranking: Vec<String>,
    pub implemented: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryDoc {
    pub profile: ProfileDoc,
    pub rule: String,
    pub h: Option<usize>,
    pub steps: Vec<StepDoc>,
}

impl TrajectoryDoc {
    pub fn from_trajectory(traj: &Trajectory) -> Self {
        let profile = traj.profile();
        let steps = traj
            .steps()
            .iter()
            .map(|s| StepDoc {
                ranking: s.ranking.names(profile).into_iter().map(String::from).collect(),
                implemented: s.implemented.map(|c| profile.name(c).to_string()),
            })
            .collect();
        TrajectoryDoc {
            profile: ProfileDoc::from_profile(profile),
            rule: traj.rule().to_string(),
            h: traj.depth(),
            steps,
        }
    }

    /// Parses names and validates every recorded ranking against the rule.
    pub fn to_trajectory(&self) -> anyhow::Result<Trajectory> {
        let profile = Arc::new(self.profile.to_profile()?);
        let rule: RuleId = self.rule.parse()?;
        let mut steps = Vec::with_capacity(self.steps.len());
        for s in &self.steps {
            let ranking = s.ranking.iter().map(|n| profile.id(n)).collect::<Result<Vec<_>, _>>()?;
            let implemented = s.implemented.as_deref().map(|n| profile.id(n)).transpose()?;
            steps.push(Step { ranking: Ranking::new(ranking), implemented });
        }
        Ok(Trajectory::from_steps(profile, rule, self.h, steps)?)
    }
}

pub fn read_profile(path: &Path) -> anyhow::Result<ApprovalProfile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc: ProfileDoc = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(doc.to_profile()?)
}

pub fn read_trajectory(path: &Path) -> anyhow::Result<Trajectory> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc: TrajectoryDoc = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    doc.to_trajectory()
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> anyhow::Result<Rational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: i64 = num.parse().with_context(|| format!("bad numerator in `{s}`"))?;
    let den: i64 = den.parse().with_context(|| format!("bad denominator in `{s}`"))?;
    if den == 0 {
        bail!("zero denominator in `{s}`");
    }
    Ok(dynrank_core::rational::ratio(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use dynrank_core::fixtures;

    #[test]
    fn profile_round_trip() {
        let p = fixtures::five_three_one();
        let doc = ProfileDoc::from_profile(&p);
        let json = serde_json::to_string(&doc).unwrap();
        let back: ProfileDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_profile().unwrap(), p);
    }

    #[test]
    fn duplicate_approval_rejected() {
        let doc = ProfileDoc { candidates: vec!["a".into()], voters: vec![vec!["a".into(), "a".into()]] };
        assert!(doc.to_profile().is_err());
    }

    #[test]
    fn tampered_trajectory_rejected() {
        let p = fixtures::five_three_one();
        let b = p.id("b").unwrap();
        let traj = Trajectory::replay(p, RuleId::DynPhragmen, None, &[b]).unwrap();
        let mut doc = TrajectoryDoc::from_trajectory(&traj);
        assert!(doc.to_trajectory().is_ok());
        doc.steps[1].ranking.swap(0, 1);
        assert!(doc.to_trajectory().is_err());
    }

    #[test]
    fn rationals() {
        use dynrank_core::rational::fraction;
        assert_eq!(fraction(&parse_rational("6/4").unwrap()), "3/2");
        assert_eq!(fraction(&parse_rational("-2").unwrap()), "-2/1");
        assert!(parse_rational("1/0").is_err());
    }
}
