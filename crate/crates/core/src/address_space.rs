//! Depth-`k` prefix sets of the address space, built three independent ways:
//!
//! * iterating the two-sided prepend operator on words (`refine`),
//! * filtering all `2ᵏ` words by the critical-itinerary admissibility test,
//! * reading the itineraries of the intervals cut out by the preimages of
//!   the threshold (`discontinuities`).
//!
//! All three coincide for a correct implementation; the acceptance suite
//! checks that they do.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::ReliabilityError;
use crate::map_model::{MapSystem, Variant};
use crate::par;
use crate::real::Real;
use crate::symbolic::{itinerary, itinerary_word, ItineraryResult, PrefixOrdering, Word};

/// Points closer than this are merged in float mode.
pub const MERGE_TOL: f64 = 1e-10;

/// Itineraries of the two images of the threshold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalPair {
    /// `α = τ(W₀(ρ))`.
    pub alpha: ItineraryResult,
    /// `β = τ⁺(W₁(ρ))`.
    pub beta: ItineraryResult,
    /// `τ(ρ) = 0α`.
    pub tau_rho: Word,
    /// `τ⁺(ρ) = 1β`.
    pub tau_plus_rho: Word,
}

impl CriticalPair {
    pub fn reliable_len(&self) -> usize {
        self.alpha.reliable_len.min(self.beta.reliable_len)
    }

    pub fn alpha_prefix(&self, k: usize) -> Word {
        self.alpha.word.truncate(k)
    }

    pub fn beta_prefix(&self, k: usize) -> Word {
        self.beta.word.truncate(k)
    }

    pub fn require(&self, needed: usize) -> Result<(), ReliabilityError> {
        let available = self.reliable_len();
        if available < needed {
            Err(ReliabilityError { needed, available })
        } else {
            Ok(())
        }
    }

    /// `α₀ = 1`, `β₀ = 0` and `β ≺ α` on the reliable prefix.
    pub fn is_consistent(&self) -> bool {
        let m = self.reliable_len();
        if m == 0 {
            return true;
        }
        self.alpha.word.get(0) == Some(1)
            && self.beta.word.get(0) == Some(0)
            && self.beta_prefix(m) < self.alpha_prefix(m)
    }
}

/// `α|ₙ` and `β|ₙ` for the system's threshold.
pub fn critical_itineraries<T: Real>(system: &MapSystem<T>, n: usize, eps_amb: f64) -> CriticalPair {
    let clamp = |y: T| {
        if y > T::one() {
            T::one()
        } else if y < T::zero() {
            T::zero()
        } else {
            y
        }
    };
    let rho = system.rho();
    let image0 = clamp(system.branch(0, rho));
    let image1 = clamp(system.branch(1, rho));
    let alpha = itinerary(system, &image0, n, Variant::LeftClosed, eps_amb)
        .expect("clamped into the unit interval");
    let beta = itinerary(system, &image1, n, Variant::RightClosed, eps_amb)
        .expect("clamped into the unit interval");
    if alpha.reliable_len < n || beta.reliable_len < n {
        log::warn!(
            "critical itineraries reliable to {} / {} of {n} digits",
            alpha.reliable_len,
            beta.reliable_len
        );
    }
    let pair = CriticalPair {
        tau_rho: alpha.word.prepend(0),
        tau_plus_rho: beta.word.prepend(1),
        alpha,
        beta,
    };
    debug_assert!(pair.is_consistent());
    pair
}

/// Which address space a [`PrefixSet`] approximates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaMode {
    /// Itineraries under `W`: `s₀ on [0̄, α]`, `s₁ on (β, 1̄]`.
    Omega,
    /// Itineraries under `W₊`: `s₀ on [0̄, α)`, `s₁ on [β, 1̄]`.
    OmegaPlus,
    /// Closure: both ends closed.
    Closure,
}

impl OmegaMode {
    // An open end only excludes the boundary word itself, and a word of
    // length k equal to α|ₖ or β|ₖ never decides that comparison, so the
    // boundary word is always kept.
    fn keep_zero(self, against_alpha: PrefixOrdering) -> bool {
        match self {
            OmegaMode::Omega | OmegaMode::Closure => against_alpha.at_most(),
            OmegaMode::OmegaPlus => matches!(
                against_alpha,
                PrefixOrdering::Less | PrefixOrdering::EqualPrefix
            ),
        }
    }

    fn keep_one(self, against_beta: PrefixOrdering) -> bool {
        match self {
            OmegaMode::OmegaPlus | OmegaMode::Closure => against_beta.at_least(),
            OmegaMode::Omega => matches!(
                against_beta,
                PrefixOrdering::Greater | PrefixOrdering::EqualPrefix
            ),
        }
    }
}

/// Sorted set of distinct words of one length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixSet {
    pub depth: usize,
    pub mode: OmegaMode,
    pub words: Vec<Word>,
}

impl PrefixSet {
    /// `{ε}`, the start of every refinement.
    pub fn root(mode: OmegaMode) -> Self {
        PrefixSet {
            depth: 0,
            mode,
            words: vec![Word::empty()],
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }

    pub fn to_set(&self) -> BTreeSet<Word> {
        self.words.iter().cloned().collect()
    }

    /// Digitwise flip of every word, re-sorted.
    pub fn star(&self) -> PrefixSet {
        let mut words: Vec<Word> = self.words.iter().map(Word::star).collect();
        words.sort();
        PrefixSet {
            depth: self.depth,
            mode: self.mode,
            words,
        }
    }
}

/// One application of the prepend operator: `0w` for `w ⪯ α|ₖ`, `1w` for
/// `w ⪰ β|ₖ`.
pub fn refine(set: &PrefixSet, crit: &CriticalPair) -> Result<PrefixSet, ReliabilityError> {
    let k = set.depth;
    crit.require(k + 1)?;
    let alpha = crit.alpha_prefix(k);
    let beta = crit.beta_prefix(k);
    let mode = set.mode;
    // 0w < 1w', and both halves inherit the order of `set.words`.
    let zeros = set
        .words
        .iter()
        .filter(|w| mode.keep_zero(w.lex_compare(&alpha)))
        .map(|w| w.prepend(0));
    let ones = set
        .words
        .iter()
        .filter(|w| mode.keep_one(w.lex_compare(&beta)))
        .map(|w| w.prepend(1));
    let words: Vec<Word> = zeros.chain(ones).collect();
    debug_assert!(words.windows(2).all(|p| p[0] < p[1]));
    Ok(PrefixSet {
        depth: k + 1,
        mode,
        words,
    })
}

/// `k` refinements of `{ε}` against a fixed critical pair.
pub fn omega_from_critical(
    crit: &CriticalPair,
    k: usize,
    mode: OmegaMode,
) -> Result<PrefixSet, ReliabilityError> {
    let mut set = PrefixSet::root(mode);
    for _ in 0..k {
        set = refine(&set, crit)?;
    }
    Ok(set)
}

/// Depth-`k` outer approximation of the address space.
pub fn omega_approx<T: Real>(
    system: &MapSystem<T>,
    k: usize,
    mode: OmegaMode,
    eps_amb: f64,
) -> Result<PrefixSet, ReliabilityError> {
    let crit = critical_itineraries(system, k + 1, eps_amb);
    omega_from_critical(&crit, k, mode)
}

/// Every tail starting with 0 is `⪯ τ(ρ)` and every tail starting with 1 is
/// `⪰ τ⁺(ρ)`, undecided prefix comparisons counting as satisfied.
pub fn is_admissible(w: &Word, crit: &CriticalPair) -> Result<bool, ReliabilityError> {
    crit.require(w.len())?;
    Ok(admissible_unchecked(w, crit))
}

fn admissible_unchecked(w: &Word, crit: &CriticalPair) -> bool {
    let digits = w.digits();
    (0..digits.len()).all(|j| {
        let tail = &digits[j..];
        if digits[j] == 0 {
            crate::symbolic::lex_cmp(tail, crit.tau_rho.digits()).at_most()
        } else {
            crate::symbolic::lex_cmp(tail, crit.tau_plus_rho.digits()).at_least()
        }
    })
}

/// All admissible words of length `k`, by exhaustive filtering of `2ᵏ`
/// candidates (`k ≤ 30`).
pub fn admissible_words(k: usize, crit: &CriticalPair) -> Result<Vec<Word>, ReliabilityError> {
    assert!(k <= 30, "exhaustive enumeration is limited to 30 digits");
    crit.require(k)?;
    let candidates: Vec<u64> = (0..(1u64 << k)).collect();
    let kept = par::filter(candidates, |bits| {
        admissible_unchecked(&Word::from_bits(*bits, k), crit)
    });
    Ok(kept.into_iter().map(|b| Word::from_bits(b, k)).collect())
}

/// Level-`k` partition of `[0, 1]` by the `≤ k−1`-step preimages of the
/// threshold, with the itinerary of each open interval.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscontinuitySet<T> {
    pub level: usize,
    /// `0 = D₀ < D₁ < … < D_last = 1`.
    pub points: Vec<T>,
    /// `addresses[i]` labels `(points[i], points[i+1])`.
    pub addresses: Vec<Word>,
    /// Pairs of candidate points closer than ten machine epsilons.
    pub near_collisions: usize,
}

impl<T: Real> DiscontinuitySet<T> {
    pub fn address_set(&self) -> BTreeSet<Word> {
        self.addresses.iter().cloned().collect()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.points
            .windows(2)
            .map(|p| p[1].sub(&p[0]).to_f64())
            .collect()
    }
}

fn sort_merge<T: Real>(points: &mut Vec<T>) -> usize {
    points.sort_by(|x, y| x.partial_cmp(y).expect("finite points"));
    let mut near = 0;
    if !T::EXACT {
        near = points
            .windows(2)
            .filter(|p| p[0] != p[1] && p[1].sub(&p[0]).to_f64() < 10.0 * f64::EPSILON)
            .count();
    }
    points.dedup_by(|later, earlier| later.close_to(earlier, MERGE_TOL));
    near
}

/// Geometric address oracle at level `k ≥ 1`.
pub fn discontinuities<T: Real>(system: &MapSystem<T>, k: usize) -> DiscontinuitySet<T> {
    assert!(k >= 1, "level must be at least 1");
    let mut all = vec![T::zero(), T::one(), system.rho().clone()];
    let mut frontier = vec![system.rho().clone()];
    let mut near_collisions = 0;
    for _ in 1..k {
        let mut next: Vec<T> = par::map(&frontier, |y| system.preimages(y))
            .into_iter()
            .flatten()
            .collect();
        near_collisions += sort_merge(&mut next);
        all.extend(next.iter().cloned());
        frontier = next;
    }
    near_collisions += sort_merge(&mut all);
    if near_collisions > 0 {
        log::warn!("{near_collisions} discontinuity candidates within 10 machine epsilons");
    }
    let midpoints: Vec<T> = all.windows(2).map(|p| p[0].midpoint(&p[1])).collect();
    let addresses = par::map(&midpoints, |m| {
        itinerary_word(system, m, k, Variant::LeftClosed)
    });
    DiscontinuitySet {
        level: k,
        points: all,
        addresses,
        near_collisions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::parse_rational;
    use crate::symbolic::DEFAULT_EPS_AMB;
    use num_rational::BigRational;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn symmetric() -> MapSystem<BigRational> {
        MapSystem::affine(q("3/5"), q("3/5"), q("1/2")).unwrap()
    }

    #[test]
    fn critical_pair_of_symmetric_system() {
        let crit = critical_itineraries(&symmetric(), 12, DEFAULT_EPS_AMB);
        assert_eq!(crit.alpha_prefix(4), w("1110"));
        assert_eq!(crit.beta_prefix(4), w("0001"));
        assert_eq!(crit.beta.word, crit.alpha.word.star());
        assert_eq!(crit.tau_rho.shift().unwrap(), crit.alpha.word);
        assert_eq!(crit.tau_plus_rho.shift().unwrap(), crit.beta.word);
        assert!(crit.is_consistent());
    }

    #[test]
    fn refine_from_root() {
        let crit = critical_itineraries(&symmetric(), 8, DEFAULT_EPS_AMB);
        let p1 = refine(&PrefixSet::root(OmegaMode::Closure), &crit).unwrap();
        assert_eq!(p1.words, vec![w("0"), w("1")]);
        let p2 = refine(&p1, &crit).unwrap();
        assert_eq!(p2.words, vec![w("00"), w("01"), w("10"), w("11")]);
    }

    #[test]
    fn refine_rejects_unreliable_pair() {
        let crit = critical_itineraries(&symmetric(), 3, DEFAULT_EPS_AMB);
        let p2 = omega_from_critical(&crit, 2, OmegaMode::Closure).unwrap();
        let p3 = refine(&p2, &crit).unwrap();
        assert_eq!(
            refine(&p3, &crit).unwrap_err(),
            ReliabilityError { needed: 4, available: 3 }
        );
    }

    #[test]
    fn admissibility_examples() {
        let crit = critical_itineraries(&symmetric(), 12, DEFAULT_EPS_AMB);
        for k in 1..=8 {
            assert!(is_admissible(&Word::constant(0, k), &crit).unwrap());
            assert!(is_admissible(&Word::constant(1, k), &crit).unwrap());
        }
        // 0100 sits on the τ⁺(ρ) boundary (tail 100 vs 10001…); the
        // verdict must match the geometric oracle.
        let geometric = discontinuities(&symmetric(), 4).address_set();
        assert_eq!(
            is_admissible(&w("0100"), &crit).unwrap(),
            geometric.contains(&w("0100"))
        );
    }

    #[test]
    fn level_two_partition() {
        let d = discontinuities(&symmetric(), 2);
        assert_eq!(d.points, vec![q("0"), q("3/10"), q("1/2"), q("7/10"), q("1")]);
        assert_eq!(d.addresses.len(), 4);
        assert!(d.addresses.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn level_one_partition_is_split_at_rho() {
        let sys = MapSystem::affine(0.7, 0.55, 0.6).unwrap();
        let d = discontinuities(&sys, 1);
        assert_eq!(d.points, vec![0.0, 0.6, 1.0]);
        assert_eq!(d.addresses, vec![w("0"), w("1")]);
    }

    #[test]
    fn modes_agree_at_prefix_level() {
        let crit = critical_itineraries(&symmetric(), 11, DEFAULT_EPS_AMB);
        let closure = omega_from_critical(&crit, 10, OmegaMode::Closure).unwrap();
        for mode in [OmegaMode::Omega, OmegaMode::OmegaPlus] {
            let other = omega_from_critical(&crit, 10, mode).unwrap();
            assert!(other.to_set().is_subset(&closure.to_set()));
        }
    }

    #[test]
    fn prefix_set_json_shape() {
        let crit = critical_itineraries(&symmetric(), 4, DEFAULT_EPS_AMB);
        let p1 = omega_from_critical(&crit, 1, OmegaMode::Closure).unwrap();
        assert_eq!(
            serde_json::to_string(&p1).unwrap(),
            r#"{"depth":1,"mode":"closure","words":["0","1"]}"#
        );
    }
}
