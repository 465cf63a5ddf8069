//! Seeded Monte-Carlo runs of the impersonation and substitution games.
//!
//! Each trial draws a fresh uniform key. The impersonator submits a fixed
//! forged message; the substitutor sees an honest `(s, t)` for a uniform
//! source `s` and submits `(s + delta_s, t + delta_t)`. Because tags are
//! linear in the source, the substitutor's success probability does not
//! depend on which `(s, t)` it observed, so the exact rate of an offset
//! strategy is the tag-collision count of `delta_t` in the codeword of
//! `delta_s` over `C(n, l)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::auth::{generate_tag, sample_key_with, verify, AuthConfig, AuthKey, Message};
use crate::bits::BitVector;
use crate::deception::{best_substitution, p_impersonation, tag_distribution_with, to_dec4, to_exact, Limits};
use crate::error::{Error, Result};
use crate::subsets::for_each_subset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Attack {
    #[serde(rename = "imp")]
    Impersonation,
    #[serde(rename = "sub")]
    Substitution,
}

impl fmt::Display for Attack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Attack::Impersonation => "imp",
            Attack::Substitution => "sub",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttackOutcome {
    pub attack: Attack,
    pub m: u32,
    pub r: u32,
    pub source_len: usize,
    pub tag_len: usize,
    pub seed: u64,
    pub trials: u64,
    pub successes: u64,
    pub empirical_rate: BigRational,
    pub reference_rate: BigRational,
    /// `(successes - trials * p) / sqrt(trials * p * (1 - p))` with `p` the
    /// reference rate.
    pub z_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeRecord {
    pub attack: Attack,
    pub m: u32,
    pub r: u32,
    #[serde(rename = "M")]
    pub source_len: usize,
    pub l: usize,
    pub trials: u64,
    pub seed: u64,
    pub successes: u64,
    pub rate: String,
    pub rate_dec4: String,
    pub reference: String,
    pub reference_dec4: String,
    pub z: f64,
}

impl AttackOutcome {
    fn new(attack: Attack, config: &AuthConfig, seed: u64, trials: u64, successes: u64, reference: BigRational) -> Self {
        let p = reference.to_f64().unwrap_or(f64::NAN);
        let sd = (trials as f64 * p * (1.0 - p)).sqrt();
        let diff = successes as f64 - trials as f64 * p;
        let z_score = if sd > 0.0 {
            diff / sd
        } else if diff == 0.0 {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        };
        AttackOutcome {
            attack,
            m: config.code().m(),
            r: config.code().r(),
            source_len: config.source_len(),
            tag_len: config.tag_len(),
            seed,
            trials,
            successes,
            empirical_rate: BigRational::new(BigInt::from(successes), BigInt::from(trials)),
            reference_rate: reference,
            z_score,
        }
    }

    pub fn record(&self) -> OutcomeRecord {
        OutcomeRecord {
            attack: self.attack,
            m: self.m,
            r: self.r,
            source_len: self.source_len,
            l: self.tag_len,
            trials: self.trials,
            seed: self.seed,
            successes: self.successes,
            rate: to_exact(&self.empirical_rate),
            rate_dec4: to_dec4(&self.empirical_rate),
            reference: to_exact(&self.reference_rate),
            reference_dec4: to_dec4(&self.reference_rate),
            z: self.z_score,
        }
    }

    /// `attack=<imp|sub> m= r= M= l= trials= seed= successes= rate= reference= z=`.
    pub fn record_line(&self) -> String {
        format!(
            "attack={} m={} r={} M={} l={} trials={} seed={} successes={} rate={} reference={} z={:.4}",
            self.attack,
            self.m,
            self.r,
            self.source_len,
            self.tag_len,
            self.trials,
            self.seed,
            self.successes,
            to_dec4(&self.empirical_rate),
            to_exact(&self.reference_rate),
            self.z_score
        )
    }
}

/// An offset attack: replace `(s, t)` with `(s + delta_s, t + delta_t)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubstitutionStrategy {
    delta_s: BitVector,
    delta_t: BitVector,
}

impl SubstitutionStrategy {
    /// `delta_s` must be nonzero, otherwise the substituted source equals the observed one.
    pub fn new(delta_s: BitVector, delta_t: BitVector) -> Result<Self> {
        if delta_s.is_zero() {
            return Err(Error::param("substitution offset delta_s must be nonzero"));
        }
        Ok(SubstitutionStrategy { delta_s, delta_t })
    }

    pub fn delta_s(&self) -> &BitVector {
        &self.delta_s
    }

    pub fn delta_t(&self) -> &BitVector {
        &self.delta_t
    }

    fn check(&self, config: &AuthConfig) -> Result<()> {
        if self.delta_s.len() != config.source_len() {
            return Err(Error::dim(config.source_len(), self.delta_s.len()));
        }
        if self.delta_t.len() != config.tag_len() {
            return Err(Error::dim(config.tag_len(), self.delta_t.len()));
        }
        Ok(())
    }
}

/// The offset pair with the highest success probability, and that probability.
pub fn best_substitution_strategy(config: &AuthConfig) -> Result<(SubstitutionStrategy, BigRational)> {
    best_substitution_strategy_with(config, &Limits::default())
}

pub fn best_substitution_strategy_with(
    config: &AuthConfig,
    limits: &Limits,
) -> Result<(SubstitutionStrategy, BigRational)> {
    let opt = best_substitution(config.code(), config.params(), limits)?;
    let p = opt.probability();
    Ok((SubstitutionStrategy::new(opt.delta_s, opt.delta_t)?, p))
}

/// Exact success probability of an offset strategy over uniform keys.
pub fn exact_substitution_success(config: &AuthConfig, strategy: &SubstitutionStrategy) -> Result<BigRational> {
    exact_substitution_success_with(config, strategy, &Limits::default())
}

pub fn exact_substitution_success_with(
    config: &AuthConfig,
    strategy: &SubstitutionStrategy,
    limits: &Limits,
) -> Result<BigRational> {
    strategy.check(config)?;
    let c = config.encode_source(&strategy.delta_s)?;
    let dist = tag_distribution_with(&c, config.tag_len(), limits)?;
    Ok(BigRational::new(
        BigInt::from(dist.count(&strategy.delta_t)),
        BigInt::from(dist.total()),
    ))
}

/// Exact fraction of all keys accepting `forged`, by enumerating `K1 x K2`.
pub fn exact_impersonation_success(config: &AuthConfig, forged: &Message) -> Result<BigRational> {
    let l = config.tag_len();
    if l > 20 {
        return Err(Error::Guardrail {
            what: "tag length for key enumeration",
            value: l as u128,
            limit: 20,
        });
    }
    let mut accepted = 0u64;
    let mut total = 0u64;
    let mut outcome = Ok(());
    for_each_subset(config.n(), l, |k1| {
        for k2 in 0..1u64 << l {
            if outcome.is_err() {
                return;
            }
            let key = AuthKey::new(k1.to_vec(), BitVector::from_u64(k2, l), config.n())
                .expect("enumerated keys are well formed");
            match verify(config, forged, &key) {
                Ok(true) => accepted += 1,
                Ok(false) => {}
                Err(e) => outcome = Err(e),
            }
            total += 1;
        }
    });
    outcome?;
    Ok(BigRational::new(BigInt::from(accepted), BigInt::from(total)))
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::param("trials must be at least 1"));
    }
    Ok(())
}

fn random_bits<R: Rng + ?Sized>(rng: &mut R, len: usize) -> BitVector {
    let mut v = BitVector::zeros(len);
    for i in 0..len {
        v.set(i, rng.gen::<bool>());
    }
    v
}

/// The impersonator's default forgery: all-one source with an all-zero tag.
pub fn default_forgery(config: &AuthConfig) -> Message {
    Message::new(
        BitVector::ones(config.source_len()),
        BitVector::zeros(config.tag_len()),
    )
}

pub fn run_impersonation(config: &AuthConfig, trials: u64, seed: u64) -> Result<AttackOutcome> {
    run_impersonation_traced(config, &default_forgery(config), trials, seed).map(|(o, _)| o)
}

/// Runs the impersonation game with a chosen forgery, also returning the
/// per-trial success flags.
pub fn run_impersonation_traced(
    config: &AuthConfig,
    forged: &Message,
    trials: u64,
    seed: u64,
) -> Result<(AttackOutcome, Vec<bool>)> {
    check_trials(trials)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trace = Vec::with_capacity(trials as usize);
    for _ in 0..trials {
        let key = sample_key_with(config, &mut rng);
        trace.push(verify(config, forged, &key)?);
    }
    let successes = trace.iter().filter(|&&ok| ok).count() as u64;
    let reference = p_impersonation(config.tag_len());
    Ok((
        AttackOutcome::new(Attack::Impersonation, config, seed, trials, successes, reference),
        trace,
    ))
}

pub fn run_substitution(
    config: &AuthConfig,
    strategy: &SubstitutionStrategy,
    trials: u64,
    seed: u64,
) -> Result<AttackOutcome> {
    run_substitution_traced(config, strategy, trials, seed).map(|(o, _)| o)
}

/// Runs the substitution game; the reference rate is the strategy's exact
/// success probability, which is `P_S` for the optimal strategy.
pub fn run_substitution_traced(
    config: &AuthConfig,
    strategy: &SubstitutionStrategy,
    trials: u64,
    seed: u64,
) -> Result<(AttackOutcome, Vec<bool>)> {
    check_trials(trials)?;
    strategy.check(config)?;
    let reference = exact_substitution_success(config, strategy)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trace = Vec::with_capacity(trials as usize);
    for _ in 0..trials {
        let key = sample_key_with(config, &mut rng);
        let source = random_bits(&mut rng, config.source_len());
        let tag = generate_tag(config, &source, &key)?;
        let forged = Message::new(source.xor(&strategy.delta_s), tag.xor(&strategy.delta_t));
        trace.push(verify(config, &forged, &key)?);
    }
    let successes = trace.iter().filter(|&&ok| ok).count() as u64;
    Ok((
        AttackOutcome::new(Attack::Substitution, config, seed, trials, successes, reference),
        trace,
    ))
}

/// `trial,success` CSV of a trace.
pub fn trace_csv(trace: &[bool]) -> String {
    let mut out = String::from("trial,success\n");
    for (i, ok) in trace.iter().enumerate() {
        out.push_str(&format!("{i},{}\n", u8::from(*ok)));
    }
    out
}

/// Binomial standard deviation of the success count.
pub fn binomial_sd(trials: u64, p: &BigRational) -> f64 {
    let p = p.to_f64().unwrap_or(f64::NAN);
    (trials as f64 * p * (1.0 - p)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    fn frac(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn toy_best_strategy() {
        let config = AuthConfig::rm(2, 1, 2, 1).unwrap();
        let (strategy, p) = best_substitution_strategy(&config).unwrap();
        assert_eq!(p, frac(1, 2));
        assert_eq!(config.encode_source(strategy.delta_s()).unwrap().weight(), 2);
        assert_eq!(exact_substitution_success(&config, &strategy).unwrap(), p);
    }

    #[test]
    fn rm41_best_strategy_uses_prefix_codeword() {
        let config = AuthConfig::rm(4, 1, 4, 3).unwrap();
        let (strategy, p) = best_substitution_strategy(&config).unwrap();
        assert_eq!(p, frac(2, 5));
        assert_eq!(
            config.encode_source(strategy.delta_s()).unwrap(),
            BitVector::prefix(8, 16)
        );
        assert_eq!(strategy.delta_t(), &bv("100"));
    }

    #[test]
    fn zero_offset_is_rejected() {
        assert!(SubstitutionStrategy::new(bv("00"), bv("1")).is_err());
    }

    #[test]
    fn zero_trials_rejected() {
        let config = AuthConfig::rm(2, 1, 2, 1).unwrap();
        assert!(run_impersonation(&config, 0, 1).is_err());
    }

    #[test]
    fn runs_are_deterministic() {
        let config = AuthConfig::rm(3, 1, 3, 2).unwrap();
        let a = run_impersonation(&config, 500, 11).unwrap();
        let b = run_impersonation(&config, 500, 11).unwrap();
        assert_eq!(a, b);
        let (strategy, _) = best_substitution_strategy(&config).unwrap();
        let a = run_substitution(&config, &strategy, 500, 5).unwrap();
        let b = run_substitution(&config, &strategy, 500, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.record_line(), b.record_line());
    }

    #[test]
    fn impersonation_exact_rate_is_independent_of_forgery() {
        let config = AuthConfig::rm(2, 1, 2, 1).unwrap();
        for s in 0..4 {
            for t in 0..2 {
                let forged = Message::new(BitVector::from_u64(s, 2), BitVector::from_u64(t, 1));
                assert_eq!(exact_impersonation_success(&config, &forged).unwrap(), frac(1, 2));
            }
        }
    }

    #[test]
    fn record_line_layout() {
        let config = AuthConfig::rm(2, 1, 2, 1).unwrap();
        let o = run_impersonation(&config, 10, 3).unwrap();
        let line = o.record_line();
        assert!(line.starts_with("attack=imp m=2 r=1 M=2 l=1 trials=10 seed=3 successes="));
        assert!(line.contains("reference=1/2"));
    }

    #[test]
    fn trace_matches_successes() {
        let config = AuthConfig::rm(2, 1, 2, 1).unwrap();
        let (o, trace) = run_impersonation_traced(&config, &default_forgery(&config), 100, 9).unwrap();
        assert_eq!(trace.iter().filter(|&&b| b).count() as u64, o.successes);
        assert_eq!(trace_csv(&trace).lines().count(), 101);
    }
}
