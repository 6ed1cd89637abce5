//! Random profiles for the experiments and the click-through decision maker.
//!
//! All randomness comes from a [`ChaCha8Rng`] seeded with `seed_from_u64`,
//! so a `(config, seed)` pair always yields the same profile.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::rational::{ratio, Rational};
use crate::{ApprovalProfile, CandidateId, Error, Ranking, Result, VoterGroup};

/// Identifier of the generator algorithm, recorded alongside results.
pub const RNG_ALGORITHM: &str = "chacha8-seed_from_u64";

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    BlurredParties,
    Spatial,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::BlurredParties => "blurred",
            Model::Spatial => "spatial",
        }
    }
}

impl core::fmt::Display for Model {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "blurred" => Ok(Model::BlurredParties),
            "spatial" => Ok(Model::Spatial),
            _ => Err(Error::InvalidParameter("unknown model")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub model: Model,
    pub voters: usize,
    pub candidates: usize,
    /// Size of the first party, the group `V` under study.
    pub group_size: usize,
    pub seed: u64,
    pub p_in: f64,
    pub p_out: f64,
    pub sigma: f64,
    pub radius: f64,
}

impl GenConfig {
    /// 60 voters, 20 candidates, and the published model parameters.
    pub fn new(model: Model, group_size: usize, seed: u64) -> Self {
        GenConfig {
            model,
            voters: 60,
            candidates: 20,
            group_size,
            seed,
            p_in: 0.95,
            p_out: 0.05,
            sigma: 0.4,
            radius: 0.8,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.group_size > self.voters {
            return Err(Error::InvalidParameter("group size exceeds voter count"));
        }
        let unit = |p: f64| (0.0..=1.0).contains(&p);
        if !unit(self.p_in) || !unit(self.p_out) {
            return Err(Error::InvalidParameter("probabilities must lie in [0, 1]"));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) || self.radius.is_nan() || self.radius < 0.0 {
            return Err(Error::InvalidParameter("sigma and radius must be non-negative"));
        }
        Ok(())
    }
}

/// A generated election.
#[derive(Clone, Debug)]
pub struct Generated {
    pub profile: ApprovalProfile,
    /// The first party's voters, always `0..group_size`.
    pub group: VoterGroup,
    /// Party index of each voter.
    pub voter_party: Vec<usize>,
    /// Party index of each candidate, by candidate id.
    pub candidate_party: Vec<usize>,
}

pub fn generate(cfg: &GenConfig) -> Result<Generated> {
    match cfg.model {
        Model::BlurredParties => gen_blurred_parties(cfg),
        Model::Spatial => gen_spatial(cfg),
    }
}

const PARTY_LETTERS: [char; 3] = ['a', 'b', 'c'];

/// Candidate names `a1.., b1.., c1..` per party, in a random priority order.
fn candidate_slate(rng: &mut ChaCha8Rng, per_party: &[usize]) -> (Vec<String>, Vec<usize>) {
    let mut slate: Vec<(String, usize)> = Vec::new();
    for (party, &count) in per_party.iter().enumerate() {
        for k in 1..=count {
            slate.push((format!("{}{k}", PARTY_LETTERS[party]), party));
        }
    }
    slate.shuffle(rng);
    slate.into_iter().unzip()
}

fn voter_parties(sizes: &[usize]) -> Vec<usize> {
    sizes.iter().enumerate().flat_map(|(p, &n)| core::iter::repeat_n(p, n)).collect()
}

/// Two parties: `V` and the rest. Each voter approves each candidate
/// independently, with probability `p_in` for own-party candidates and
/// `p_out` otherwise. Candidates split evenly, so `m` must be even.
pub fn gen_blurred_parties(cfg: &GenConfig) -> Result<Generated> {
    cfg.validate()?;
    if !cfg.candidates.is_multiple_of(2) {
        return Err(Error::InvalidParameter("blurred parties need an even number of candidates"));
    }
    let mut rng = rng_from_seed(cfg.seed);
    let (names, candidate_party) = candidate_slate(&mut rng, &[cfg.candidates / 2, cfg.candidates / 2]);
    let voter_party = voter_parties(&[cfg.group_size, cfg.voters - cfg.group_size]);
    let ballots = voter_party
        .iter()
        .map(|&vp| {
            (0..names.len())
                .filter(|&c| rng.random_bool(if candidate_party[c] == vp { cfg.p_in } else { cfg.p_out }))
                .map(CandidateId::new)
                .collect()
        })
        .collect();
    finish(cfg, names, ballots, voter_party, candidate_party)
}

/// Three parties centred at 0°, 120° and 240° on the unit circle. Voters
/// and candidates are drawn from a Gaussian of deviation `sigma` around
/// their party centre; voters approve candidates within `radius`. The first
/// party has 7 candidates and the others split the rest (7/6 for `m = 20`);
/// non-`V` voters split `⌈(n−|V|)/2⌉ / ⌊(n−|V|)/2⌋`.
pub fn gen_spatial(cfg: &GenConfig) -> Result<Generated> {
    cfg.validate()?;
    if cfg.candidates < 7 {
        return Err(Error::InvalidParameter("spatial model needs at least 7 candidates"));
    }
    let mut rng = rng_from_seed(cfg.seed);
    let rest = cfg.candidates - 7;
    let (names, candidate_party) = candidate_slate(&mut rng, &[7, rest.div_ceil(2), rest / 2]);
    let others = cfg.voters - cfg.group_size;
    let voter_party = voter_parties(&[cfg.group_size, others.div_ceil(2), others / 2]);

    let noise = Normal::new(0.0, cfg.sigma).map_err(|_| Error::InvalidParameter("sigma"))?;
    let mut sample = |party: usize| {
        let (cx, cy) = party_center(party);
        (cx + noise.sample(&mut rng), cy + noise.sample(&mut rng))
    };
    let candidate_points: Vec<(f64, f64)> = candidate_party.iter().map(|&p| sample(p)).collect();
    let voter_points: Vec<(f64, f64)> = voter_party.iter().map(|&p| sample(p)).collect();
    let r2 = cfg.radius * cfg.radius;
    let ballots = voter_points
        .iter()
        .map(|&(vx, vy)| {
            candidate_points
                .iter()
                .enumerate()
                .filter(|(_, &(x, y))| (x - vx) * (x - vx) + (y - vy) * (y - vy) <= r2)
                .map(|(c, _)| CandidateId::new(c))
                .collect()
        })
        .collect();
    finish(cfg, names, ballots, voter_party, candidate_party)
}

/// Centre of party `k` on the unit circle.
pub fn party_center(k: usize) -> (f64, f64) {
    // cos/sin of 0°, 120°, 240°.
    const HALF_SQRT3: f64 = 0.866_025_403_784_438_6;
    match k % 3 {
        0 => (1.0, 0.0),
        1 => (-0.5, HALF_SQRT3),
        _ => (-0.5, -HALF_SQRT3),
    }
}

fn finish(
    cfg: &GenConfig,
    names: Vec<String>,
    ballots: Vec<Vec<CandidateId>>,
    voter_party: Vec<usize>,
    candidate_party: Vec<usize>,
) -> Result<Generated> {
    let profile = ApprovalProfile::new(names, ballots)?;
    let group = VoterGroup::from_sorted_unchecked((0..cfg.group_size).collect());
    Ok(Generated { profile, group, voter_party, candidate_party })
}

/// Click-through rates of the first 15 result positions, in tenths of a
/// percent.
pub const CTR_TENTHS: [u32; 15] = [325, 176, 114, 81, 61, 44, 35, 31, 26, 24, 10, 8, 7, 6, 4];

/// Selection probability of 1-based `position` in a ranking of length
/// `len`: the rate renormalised over the first `min(15, len)` positions.
pub fn ctr_probability(position: usize, len: usize) -> Rational {
    let k = len.min(CTR_TENTHS.len());
    if position == 0 || position > k {
        return ratio(0, 1);
    }
    let total: u32 = CTR_TENTHS[..k].iter().sum();
    ratio(i64::from(CTR_TENTHS[position - 1]), i64::from(total))
}

/// Samples a 1-based position by click-through rate.
pub fn ctr_position<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Result<usize> {
    let k = len.min(CTR_TENTHS.len());
    if k == 0 {
        return Err(Error::EmptyRanking);
    }
    let total: u32 = CTR_TENTHS[..k].iter().sum();
    let mut draw = rng.random_range(0..total);
    for (i, &w) in CTR_TENTHS[..k].iter().enumerate() {
        if draw < w {
            return Ok(i + 1);
        }
        draw -= w;
    }
    unreachable!("draw below the total weight")
}

/// The candidate a click-through decision maker picks from `ranking`.
pub fn ctr_select<R: Rng + ?Sized>(ranking: &Ranking, rng: &mut R) -> Result<CandidateId> {
    let position = ctr_position(ranking.len(), rng)?;
    Ok(ranking.as_slice()[position - 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blurred_shape_and_determinism() {
        let cfg = GenConfig::new(Model::BlurredParties, 21, 7);
        let a = generate(&cfg).unwrap();
        let b = generate(&cfg).unwrap();
        assert_eq!(a.profile.ballots(), b.profile.ballots());
        assert_eq!(a.profile.names(), b.profile.names());
        assert_eq!(a.profile.num_voters(), 60);
        assert_eq!(a.profile.num_candidates(), 20);
        assert_eq!(a.group.len(), 21);
        assert_eq!(a.candidate_party.iter().filter(|&&p| p == 0).count(), 10);
        assert_eq!(a.voter_party.iter().filter(|&&p| p == 0).count(), 21);
        let other = generate(&GenConfig { seed: 8, ..cfg }).unwrap();
        assert_ne!(a.profile.ballots(), other.profile.ballots());
    }

    #[test]
    fn blurred_empty_group() {
        let g = generate(&GenConfig::new(Model::BlurredParties, 0, 1)).unwrap();
        assert!(g.group.is_empty());
        assert!(g.voter_party.iter().all(|&p| p == 1));
        let odd = GenConfig { candidates: 19, ..GenConfig::new(Model::BlurredParties, 0, 1) };
        assert!(generate(&odd).is_err());
    }

    #[test]
    fn spatial_split() {
        let g = generate(&GenConfig::new(Model::Spatial, 15, 3)).unwrap();
        let count = |parties: &[usize], k| parties.iter().filter(|&&p| p == k).count();
        assert_eq!([0, 1, 2].map(|k| count(&g.candidate_party, k)), [7, 7, 6]);
        assert_eq!([0, 1, 2].map(|k| count(&g.voter_party, k)), [15, 23, 22]);
    }

    #[test]
    fn spatial_without_noise_is_partisan() {
        let cfg = GenConfig { sigma: 0.0, ..GenConfig::new(Model::Spatial, 20, 11) };
        let g = generate(&cfg).unwrap();
        for i in 0..g.profile.num_voters() {
            for c in g.profile.candidates() {
                let own = g.candidate_party[c.index()] == g.voter_party[i];
                assert_eq!(g.profile.approves(i, c), own);
            }
        }
    }

    #[test]
    fn ctr_probabilities() {
        assert_eq!(ctr_probability(1, 1), ratio(1, 1));
        assert_eq!(ctr_probability(1, 2), ratio(325, 501));
        assert_eq!(ctr_probability(1, 20), ratio(325, 952));
        assert_eq!(ctr_probability(16, 20), ratio(0, 1));
        let total = (1..=20).fold(ratio(0, 1), |acc, p| acc + ctr_probability(p, 20));
        assert_eq!(total, ratio(1, 1));
    }

    #[test]
    fn ctr_selection_bounds() {
        let mut rng = rng_from_seed(5);
        let single = Ranking::new(alloc::vec![CandidateId::new(3)]);
        for _ in 0..50 {
            assert_eq!(ctr_select(&single, &mut rng).unwrap(), CandidateId::new(3));
        }
        for _ in 0..1000 {
            assert!(ctr_position(40, &mut rng).unwrap() <= 15);
        }
        assert_eq!(ctr_select(&Ranking::default(), &mut rng), Err(Error::EmptyRanking));
    }

    #[test]
    fn weights_strictly_decrease() {
        assert!(CTR_TENTHS.windows(2).all(|w| w[0] > w[1]));
        assert_eq!(CTR_TENTHS.iter().sum::<u32>(), 952);
    }
}
