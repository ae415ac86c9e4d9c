//! Difficulty-controlled move selection. A target value is drawn from a
//! Gaussian, clipped to `[0, 1]`, and the move whose evaluation is closest
//! to it is played. Selection sees nothing but the evaluation.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal as NormalDist};

use crate::error::{EngineError, Result};
use crate::moves::Move;
use crate::search::Evaluation;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DifficultyParams {
    pub mu: f64,
    pub sigma: f64,
}

impl DifficultyParams {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) || !mu.is_finite() {
            return Err(EngineError::Config(format!("invalid difficulty (mu={mu}, sigma={sigma}): sigma must be > 0")));
        }
        Ok(DifficultyParams { mu, sigma })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DifficultyPreset {
    Easy,
    Medium,
    Hard,
}

impl DifficultyPreset {
    pub const ALL: [DifficultyPreset; 3] = [DifficultyPreset::Easy, DifficultyPreset::Medium, DifficultyPreset::Hard];

    pub fn params(self) -> DifficultyParams {
        let mu = match self {
            DifficultyPreset::Easy => 0.4,
            DifficultyPreset::Medium => 0.6,
            DifficultyPreset::Hard => 1.0,
        };
        DifficultyParams { mu, sigma: 0.3 }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DifficultyPreset::Easy => "Easy",
            DifficultyPreset::Medium => "Medium",
            DifficultyPreset::Hard => "Hard",
        }
    }
}

impl fmt::Display for DifficultyPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DifficultyPreset {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self> {
        DifficultyPreset::ALL
            .into_iter()
            .find(|p| p.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| EngineError::Config(format!("unknown difficulty `{}` (expected Easy, Medium or Hard)", s.trim())))
    }
}

/// Unclipped draw from N(mu, sigma).
pub fn sample_raw<R: Rng + ?Sized>(params: DifficultyParams, rng: &mut R) -> f64 {
    Normal::new(params.mu, params.sigma).expect("sigma validated positive").sample(rng)
}

pub fn clip_target(raw: f64) -> f64 {
    raw.clamp(0.0, 1.0)
}

pub fn sample_target<R: Rng + ?Sized>(params: DifficultyParams, rng: &mut R) -> f64 {
    clip_target(sample_raw(params, rng))
}

/// Move whose value is nearest `target`. A later move must be strictly
/// closer to replace an earlier one.
pub fn select_nearest(evaluation: &Evaluation, target: f64) -> Result<&Move> {
    let mut selected = None;
    let mut difference = f64::INFINITY;
    for e in evaluation.entries() {
        let d = (e.value - target).abs();
        if d < difference {
            selected = Some(&e.mv);
            difference = d;
        }
    }
    selected.ok_or(EngineError::EmptyEvaluation)
}

pub fn stochastic_select<'a, R: Rng + ?Sized>(
    evaluation: &'a Evaluation,
    params: DifficultyParams,
    rng: &mut R,
) -> Result<&'a Move> {
    if evaluation.is_empty() {
        return Err(EngineError::EmptyEvaluation);
    }
    select_nearest(evaluation, sample_target(params, rng))
}

/// `(P(X < 0.25), P(0.25 <= X <= 0.75), P(X > 0.75))` for X ~ N(mu, sigma).
pub fn selection_band_probabilities(params: DifficultyParams) -> (f64, f64, f64) {
    let dist = NormalDist::new(params.mu, params.sigma).expect("sigma validated positive");
    let low = dist.cdf(0.25);
    let high = dist.sf(0.75);
    (low, 1.0 - low - high, high)
}
