use serde::{Deserialize, Serialize};

use super::word::Word;
use crate::error::ModelError;
use crate::map_model::{check_unit, MapSystem, Variant};
use crate::real::Real;

/// Default ambiguity radius around `rho` for floating-point orbits.
pub const DEFAULT_EPS_AMB: f64 = 1e-12;

/// Certified depth limit for floating-point itineraries.
pub const FLOAT_DEPTH_CAP: usize = 64;

/// A computed itinerary prefix together with how much of it can be trusted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItineraryResult {
    pub word: Word,
    /// Digits `0..reliable_len` are certified.
    pub reliable_len: usize,
    /// First iterate that landed on (exact mode) or within the ambiguity
    /// radius of (float mode) the threshold.
    pub hit_critical: Option<usize>,
}

impl ItineraryResult {
    pub fn reliable_word(&self) -> Word {
        self.word.truncate(self.reliable_len)
    }

    pub fn is_complete(&self) -> bool {
        self.reliable_len == self.word.len()
    }
}

/// `τ(x)|ₙ` (left closed) or `τ⁺(x)|ₙ` (right closed).
///
/// Digit `k` records the branch region of the `k`-th iterate. In float mode
/// the reliable prefix stops at the first iterate within `eps_amb` of `rho`.
pub fn itinerary<T: Real>(
    system: &MapSystem<T>,
    x: &T,
    n: usize,
    variant: Variant,
    eps_amb: f64,
) -> Result<ItineraryResult, ModelError> {
    check_unit(x)?;
    let rho = system.rho();
    let mut word = Word::empty();
    let mut hit_critical = None;
    let mut reliable_len = n;
    let mut current = x.clone();
    for k in 0..n {
        if hit_critical.is_none() {
            let hit = if T::EXACT {
                current == *rho
            } else {
                current.abs_diff(rho).to_f64() < eps_amb
            };
            if hit {
                hit_critical = Some(k);
                if !T::EXACT {
                    reliable_len = k;
                }
            }
        }
        let (next, digit) = system.eval(&current, variant);
        word.push(digit);
        current = next;
    }
    if !T::EXACT {
        reliable_len = reliable_len.min(FLOAT_DEPTH_CAP);
    }
    Ok(ItineraryResult {
        word,
        reliable_len,
        hit_critical,
    })
}

/// Bare digit sequence without reliability bookkeeping; `x` must lie in
/// `[0, 1]`.
pub fn itinerary_word<T: Real>(system: &MapSystem<T>, x: &T, n: usize, variant: Variant) -> Word {
    let mut word = Word::empty();
    let mut current = x.clone();
    for _ in 0..n {
        let (next, digit) = system.eval(&current, variant);
        word.push(digit);
        current = next;
    }
    word
}
