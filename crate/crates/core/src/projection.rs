//! Maps from words back to the interval: the itinerary projection `π̂`, the
//! binary coding map `π`, word intervals, and the involution `h` induced by
//! the star map at the symmetric parameter.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::address_space::{critical_itineraries, is_admissible};
use crate::error::{ModelError, ReliabilityError};
use crate::map_model::{check_unit, MapSystem, Variant};
use crate::par;
use crate::real::Real;
use crate::symbolic::{itinerary_word, Word, DEFAULT_EPS_AMB};

/// Default bisection tolerance for `π̂`.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Word depth used to evaluate `h` in float mode.
pub const HOMEO_DEPTH: usize = 48;

/// `α` and `β*` must agree on at least this many digits before `h` is
/// considered meaningful.
pub const MIN_SYMMETRIC_DEPTH: usize = 24;

fn bisection_steps(tol: f64) -> usize {
    assert!(tol > 0.0, "tolerance must be positive");
    (1.0 / tol).log2().ceil().max(1.0) as usize
}

/// `π̂(w) = sup{x : τ⁺(x)|ₙ ⪯ w}` by bisection on `x`, `n = |w|`.
///
/// For a finite word this is the right end of its interval `𝓘(w)`; the
/// midpoint of the final bracket is returned.
pub fn pi_hat<T: Real>(system: &MapSystem<T>, w: &Word, tol: f64) -> T {
    let n = w.len();
    let (mut lo, mut hi) = (T::zero(), T::one());
    for _ in 0..bisection_steps(tol) {
        let mid = lo.midpoint(&hi);
        let word = itinerary_word(system, &mid, n, Variant::RightClosed);
        if word.lex_compare(w).at_most() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo.midpoint(&hi)
}

/// `inf{x : τ(x)|ₙ ⪰ w}`, the left end of `𝓘(w)`.
pub fn pi_hat_lower<T: Real>(system: &MapSystem<T>, w: &Word, tol: f64) -> T {
    let n = w.len();
    let (mut lo, mut hi) = (T::zero(), T::one());
    for _ in 0..bisection_steps(tol) {
        let mid = lo.midpoint(&hi);
        let word = itinerary_word(system, &mid, n, Variant::LeftClosed);
        if word.lex_compare(w).at_least() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    lo.midpoint(&hi)
}

/// Dyadic cylinder `[π(w), π(w) + 2^{-|w|}]` of the binary coding map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicInterval {
    pub word: Word,
    /// `lo = numerator / 2^{|word|}`.
    pub numerator: BigUint,
}

impl DyadicInterval {
    pub fn scale(&self) -> usize {
        self.word.len()
    }

    pub fn lo(&self) -> BigRational {
        BigRational::new(
            self.numerator.clone().into(),
            (BigUint::one() << self.scale()).into(),
        )
    }

    pub fn hi(&self) -> BigRational {
        BigRational::new(
            (&self.numerator + 1u32).into(),
            (BigUint::one() << self.scale()).into(),
        )
    }

    pub fn lo_f64(&self) -> f64 {
        self.numerator.to_f64().unwrap_or(f64::NAN) * (-(self.scale() as f64)).exp2()
    }

    pub fn hi_f64(&self) -> f64 {
        (&self.numerator + 1u32).to_f64().unwrap_or(f64::NAN) * (-(self.scale() as f64)).exp2()
    }
}

impl std::fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lo(), self.hi())
    }
}

/// `π(w) = Σ w_k 2^{-k-1}` together with the cylinder width `2^{-|w|}`.
pub fn coding_pi(w: &Word) -> DyadicInterval {
    let numerator = w.digits().iter().fold(BigUint::zero(), |acc, d| {
        (acc << 1u32) + BigUint::from(*d as u32)
    });
    DyadicInterval {
        word: w.clone(),
        numerator,
    }
}

/// Closure of the points whose `τ` or `τ⁺` prefix is `word`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WordInterval<T> {
    pub word: Word,
    pub lo: T,
    pub hi: T,
}

/// `𝓘(w)`, or `None` when no point has address prefix `w`.
pub fn word_interval<T: Real>(
    system: &MapSystem<T>,
    w: &Word,
    tol: f64,
) -> Result<Option<WordInterval<T>>, ReliabilityError> {
    let crit = critical_itineraries(system, w.len().max(1), DEFAULT_EPS_AMB);
    if !is_admissible(w, &crit)? {
        return Ok(None);
    }
    Ok(Some(WordInterval {
        word: w.clone(),
        lo: pi_hat_lower(system, w, tol),
        hi: pi_hat(system, w, tol),
    }))
}

/// `h(x) = π̂(τ(x)|ₙ*)`.
pub fn homeo<T: Real>(system: &MapSystem<T>, x: &T, n: usize, tol: f64) -> Result<T, ModelError> {
    check_unit(x)?;
    let word = itinerary_word(system, x, n, Variant::LeftClosed);
    Ok(pi_hat(system, &word.star(), tol))
}

/// The involution `h` at a fixed word depth, with a symmetry check of the
/// parameter done once up front.
#[derive(Debug, Clone)]
pub struct Homeomorphism<T> {
    system: MapSystem<T>,
    depth: usize,
    tol: f64,
    symmetric_depth: usize,
}

impl<T: Real> Homeomorphism<T> {
    pub fn new(system: MapSystem<T>, depth: usize, tol: f64) -> Self {
        let crit = critical_itineraries(&system, depth, DEFAULT_EPS_AMB);
        let m = crit.reliable_len();
        let symmetric_depth = crit
            .alpha_prefix(m)
            .first_difference(&crit.beta_prefix(m).star())
            .unwrap_or(m);
        if symmetric_depth < MIN_SYMMETRIC_DEPTH.min(depth) {
            log::warn!(
                "alpha and beta* agree on only {symmetric_depth} digits; h is not an involution at this rho"
            );
        }
        Homeomorphism {
            system,
            depth,
            tol,
            symmetric_depth,
        }
    }

    /// Number of leading digits on which `α` and `β*` agree.
    pub fn symmetric_depth(&self) -> usize {
        self.symmetric_depth
    }

    pub fn is_trustworthy(&self) -> bool {
        self.symmetric_depth >= MIN_SYMMETRIC_DEPTH.min(self.depth)
    }

    pub fn system(&self) -> &MapSystem<T> {
        &self.system
    }

    pub fn eval(&self, x: &T) -> Result<T, ModelError> {
        homeo(&self.system, x, self.depth, self.tol)
    }

    /// `h` on many points; parallel with the `parallel` feature.
    pub fn eval_many(&self, xs: &[T]) -> Result<Vec<T>, ModelError> {
        par::map(xs, |x| self.eval(x)).into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::parse_rational;
    use crate::symbolic::itinerary;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn coding_map_examples() {
        let one = coding_pi(&w("1"));
        assert_eq!((one.lo(), one.hi()), (q("1/2"), q("1")));
        let zero_one = coding_pi(&w("01"));
        assert_eq!((zero_one.lo_f64(), zero_one.hi_f64()), (0.25, 0.5));
        let empty = coding_pi(&Word::empty());
        assert_eq!((empty.lo(), empty.hi()), (q("0"), q("1")));
    }

    #[test]
    fn pi_hat_endpoints() {
        let sys = MapSystem::affine(0.6, 0.6, 0.5).unwrap();
        let n = 40;
        assert!(pi_hat(&sys, &Word::constant(0, n), DEFAULT_TOL) < 1e-8);
        assert!((pi_hat(&sys, &Word::constant(1, n), DEFAULT_TOL) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn pi_hat_inverts_itinerary_within_cylinder_width() {
        let sys = MapSystem::affine(q("3/5"), q("3/5"), q("1/2")).unwrap();
        let bound = (0.6f64).powi(20) + 1e-12;
        for x in ["1/7", "2/9", "1/2", "13/17", "99/100"] {
            let x = q(x);
            let word = itinerary(&sys, &x, 20, Variant::LeftClosed, DEFAULT_EPS_AMB)
                .unwrap()
                .word;
            let y = pi_hat(&sys, &word, DEFAULT_TOL);
            assert!((Real::to_f64(&y) - Real::to_f64(&x)).abs() <= bound);
        }
    }

    #[test]
    fn word_interval_of_double_zero() {
        let sys = MapSystem::affine(q("3/5"), q("3/5"), q("1/2")).unwrap();
        let i = word_interval(&sys, &w("00"), DEFAULT_TOL).unwrap().unwrap();
        assert!((Real::to_f64(&i.hi) - 0.3).abs() < 1e-12);
        assert!(Real::to_f64(&i.lo) < 1e-12);
    }

    #[test]
    fn forbidden_word_has_empty_interval() {
        // a = 0.7, b = 0.55, rho = 0.6: find a forbidden word by brute force.
        let sys = MapSystem::affine(q("7/10"), q("11/20"), q("3/5")).unwrap();
        let crit = critical_itineraries(&sys, 8, DEFAULT_EPS_AMB);
        let forbidden = (0..1u64 << 6)
            .map(|b| Word::from_bits(b, 6))
            .find(|v| !is_admissible(v, &crit).unwrap())
            .expect("some length-6 word is forbidden");
        assert!(word_interval(&sys, &forbidden, DEFAULT_TOL).unwrap().is_none());
    }

    #[test]
    fn homeo_swaps_endpoints() {
        let h = Homeomorphism::new(MapSystem::affine(0.6, 0.6, 0.5).unwrap(), HOMEO_DEPTH, DEFAULT_TOL);
        assert!(h.is_trustworthy());
        assert!((h.eval(&0.0).unwrap() - 1.0).abs() < 1e-8);
        assert!(h.eval(&1.0).unwrap().abs() < 1e-8);
        assert!(h.eval(&1.5).is_err());
    }

    #[test]
    fn off_symmetric_parameter_is_flagged() {
        let h = Homeomorphism::new(MapSystem::affine(0.6, 0.6, 0.45).unwrap(), HOMEO_DEPTH, DEFAULT_TOL);
        assert!(!h.is_trustworthy());
    }
}
