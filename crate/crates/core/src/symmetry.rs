//! Locating the threshold whose address space is invariant under the star
//! map.
//!
//! `τ(ρ)` and `τ⁺(ρ)` both increase with `ρ`, so the sign of the comparison
//! between `τ(ρ)` and `τ⁺(ρ)*` flips exactly once. The solver bisects on that
//! sign, comparing only finite prefixes and deepening them whenever the
//! comparison is undecided.

use serde::Serialize;

use crate::address_space::{critical_itineraries, omega_from_critical, OmegaMode};
use crate::error::{ModelError, ReliabilityError, SolveError};
use crate::map_model::MapSystem;
use crate::par;
use crate::real::Real;
use crate::symbolic::{PrefixOrdering, DEFAULT_EPS_AMB};

/// Below this many certified digits the solver gives up.
pub const MIN_RELIABLE_DIGITS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DefectOrdering {
    TauLess,
    EqualToDepth,
    TauGreater,
}

/// Comparison of `τ(ρ)|ₘ` with `τ⁺(ρ)*|ₘ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SymmetryDefect {
    pub ordering: DefectOrdering,
    pub decided_at: Option<usize>,
    pub depth_used: usize,
}

pub fn symmetry_defect<T: Real>(
    system: &MapSystem<T>,
    rho: &T,
    n: usize,
    eps_amb: f64,
) -> Result<SymmetryDefect, ModelError> {
    let system = system.with_rho(rho.clone())?;
    let crit = critical_itineraries(&system, n, eps_amb);
    let m = n.min(crit.reliable_len() + 1);
    let tau = crit.tau_rho.truncate(m);
    let tau_plus_star = crit.tau_plus_rho.truncate(m).star();
    let ordering = match tau.lex_compare(&tau_plus_star) {
        PrefixOrdering::Less => DefectOrdering::TauLess,
        PrefixOrdering::EqualPrefix => DefectOrdering::EqualToDepth,
        PrefixOrdering::Greater => DefectOrdering::TauGreater,
    };
    Ok(SymmetryDefect {
        ordering,
        decided_at: tau.first_difference(&tau_plus_star),
        depth_used: m,
    })
}

/// Defects over a parameter grid.
pub fn defect_scan<T: Real>(
    system: &MapSystem<T>,
    grid: &[T],
    n: usize,
    eps_amb: f64,
) -> Result<Vec<SymmetryDefect>, ModelError> {
    par::map(grid, |rho| symmetry_defect(system, rho, n, eps_amb))
        .into_iter()
        .collect()
}

#[derive(Debug, Clone)]
pub struct SolveOptions<T> {
    pub rho_tol: f64,
    pub start_depth: usize,
    /// Defaults to 128 digits in exact mode and 52 in float mode.
    pub depth_cap: Option<usize>,
    pub max_iter: usize,
    pub eps_amb: f64,
    /// Sub-bracket of `[1 − b, a]`; the whole range when `None`.
    pub bracket: Option<(T, T)>,
}

impl<T> Default for SolveOptions<T> {
    fn default() -> Self {
        SolveOptions {
            rho_tol: 1e-9,
            start_depth: 32,
            depth_cap: None,
            max_iter: 200,
            eps_amb: DEFAULT_EPS_AMB,
            bracket: None,
        }
    }
}

impl<T: Real> SolveOptions<T> {
    fn cap(&self) -> usize {
        self.depth_cap
            .unwrap_or(if T::EXACT { 128 } else { 52 })
            .max(self.start_depth)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetrySolution<T> {
    pub rho_star: T,
    /// Final bracket `[lo, hi]` with `τ ⪯ τ⁺*` at `lo` and `τ ⪰ τ⁺*` at `hi`.
    pub bracket: (T, T),
    pub certificate: SymmetryDefect,
    pub iterations: usize,
    /// The returned point compared equal at the deepest allowed depth.
    pub plateau: bool,
}

fn deepened_defect<T: Real>(
    system: &MapSystem<T>,
    rho: &T,
    opts: &SolveOptions<T>,
) -> Result<SymmetryDefect, SolveError> {
    let cap = opts.cap();
    let mut n = opts.start_depth;
    loop {
        let defect = symmetry_defect(system, rho, n, opts.eps_amb)?;
        if defect.ordering != DefectOrdering::EqualToDepth {
            return Ok(defect);
        }
        if defect.depth_used < MIN_RELIABLE_DIGITS {
            return Err(SolveError::ReliabilityCollapse {
                depth: defect.depth_used,
                rho: rho.display(),
            });
        }
        if n >= cap {
            return Ok(defect);
        }
        n = (2 * n).min(cap);
    }
}

/// Bisection for the symmetric threshold `ρ*`.
pub fn solve_symmetric<T: Real>(
    system: &MapSystem<T>,
    opts: &SolveOptions<T>,
) -> Result<SymmetrySolution<T>, SolveError> {
    if opts.rho_tol.is_nan() || opts.rho_tol <= 0.0 {
        return Err(ModelError::Precondition("rho_tol must be positive".into()).into());
    }
    let (mut lo, mut hi) = match &opts.bracket {
        Some((lo, hi)) => (lo.clone(), hi.clone()),
        None => (system.one_minus_b().clone(), system.a().clone()),
    };
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let at_lo = deepened_defect(system, &lo, opts)?;
    let at_hi = deepened_defect(system, &hi, opts)?;
    if at_lo.ordering == DefectOrdering::TauGreater || at_hi.ordering == DefectOrdering::TauLess {
        return Err(SolveError::NoBracket {
            lo: lo.display(),
            hi: hi.display(),
            at_lo: format!("{:?}", at_lo.ordering),
            at_hi: format!("{:?}", at_hi.ordering),
        });
    }
    for (end, defect) in [(&lo, at_lo), (&hi, at_hi)] {
        if defect.ordering == DefectOrdering::EqualToDepth {
            return Ok(SymmetrySolution {
                rho_star: end.clone(),
                bracket: (end.clone(), end.clone()),
                certificate: defect,
                iterations: 0,
                plateau: true,
            });
        }
    }
    let mut iterations = 0;
    while iterations < opts.max_iter && hi.sub(&lo).to_f64() > opts.rho_tol {
        iterations += 1;
        let mid = lo.midpoint(&hi);
        let defect = deepened_defect(system, &mid, opts)?;
        match defect.ordering {
            DefectOrdering::TauLess => lo = mid,
            DefectOrdering::TauGreater => hi = mid,
            DefectOrdering::EqualToDepth => {
                return Ok(SymmetrySolution {
                    rho_star: mid.clone(),
                    bracket: (mid.clone(), mid),
                    certificate: defect,
                    iterations,
                    plateau: true,
                });
            }
        }
    }
    let rho_star = lo.midpoint(&hi);
    let certificate = deepened_defect(system, &rho_star, opts)?;
    Ok(SymmetrySolution {
        rho_star,
        bracket: (lo, hi),
        certificate,
        iterations,
        plateau: false,
    })
}

/// Prefix-level symmetry checks at one threshold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    pub depth: usize,
    /// `α|ₖ = (β|ₖ)*`.
    pub alpha_matches: bool,
    pub alpha_mismatch_at: Option<usize>,
    /// `P_k* = P_k` for the closure-mode prefix set.
    pub star_invariant: bool,
    /// First sorted position where `P_k*` and `P_k` differ.
    pub star_mismatch_at: Option<usize>,
}

impl SymmetryReport {
    pub fn passes(&self) -> bool {
        self.alpha_matches && self.star_invariant
    }
}

pub fn verify_symmetry<T: Real>(
    system: &MapSystem<T>,
    k: usize,
    eps_amb: f64,
) -> Result<SymmetryReport, ReliabilityError> {
    let crit = critical_itineraries(system, k + 1, eps_amb);
    let alpha_mismatch_at = crit.alpha_prefix(k).first_difference(&crit.beta_prefix(k).star());
    let set = omega_from_critical(&crit, k, OmegaMode::Closure)?;
    let starred = set.star();
    let star_mismatch_at = set
        .words
        .iter()
        .zip(&starred.words)
        .position(|(x, y)| x != y)
        .or_else(|| (set.len() != starred.len()).then(|| set.len().min(starred.len())));
    Ok(SymmetryReport {
        depth: k,
        alpha_matches: alpha_mismatch_at.is_none(),
        alpha_mismatch_at,
        star_invariant: star_mismatch_at.is_none(),
        star_mismatch_at,
    })
}
