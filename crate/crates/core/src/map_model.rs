//! The two-branch piecewise expanding maps `W` and `W₊` of the unit interval.
//!
//! Branch 0 maps `[0, a]` onto `[0, 1]`, branch 1 maps `[1 - b, 1]` onto
//! `[0, 1]`, and the two domains overlap because `a + b > 1`. The threshold
//! `rho ∈ [1 - b, a]` decides which branch is applied; the two variants only
//! differ at `x = rho` itself.

use std::f64::consts::TAU;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::real::Real;

/// Binary digit: 0 for the left branch, 1 for the right one.
pub type Digit = u8;

/// Absolute tolerance for numerically inverted branches.
pub const INVERSE_TOL: f64 = 1e-14;

/// Which map is iterated: `W` sends `rho` through branch 0, `W₊` through
/// branch 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    LeftClosed,
    RightClosed,
}

/// Shape of one branch, normalised to its own domain.
///
/// `Sine { eps }` is `t ↦ t + eps·sin(2πt)/(2π)` composed with the affine
/// rescaling of the branch domain onto `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum BranchSpec {
    Affine,
    #[serde(alias = "sine-perturbed")]
    Sine { eps: f64 },
}

impl BranchSpec {
    pub fn eps(&self) -> f64 {
        match self {
            BranchSpec::Affine => 0.0,
            BranchSpec::Sine { eps } => *eps,
        }
    }

    fn shape(&self, t: f64) -> f64 {
        match self {
            BranchSpec::Affine => t,
            BranchSpec::Sine { eps } => t + eps * (TAU * t).sin() / TAU,
        }
    }

    fn shape_derivative(&self, t: f64) -> f64 {
        match self {
            BranchSpec::Affine => 1.0,
            BranchSpec::Sine { eps } => 1.0 + eps * (TAU * t).cos(),
        }
    }

    /// Solves `shape(t) = y` on `[0, 1]` by safeguarded Newton iteration.
    fn shape_inverse(&self, y: f64) -> f64 {
        if let BranchSpec::Affine = self {
            return y;
        }
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        let mut t = y.clamp(0.0, 1.0);
        for _ in 0..200 {
            let r = self.shape(t) - y;
            if r == 0.0 {
                return t;
            }
            if r > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let step = t - r / self.shape_derivative(t);
            let next = if step > lo && step < hi {
                step
            } else {
                0.5 * (lo + hi)
            };
            if (next - t).abs() <= 0.25 * INVERSE_TOL || hi - lo <= 0.25 * INVERSE_TOL {
                return next;
            }
            t = next;
        }
        t
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapSystem<T> {
    a: T,
    b: T,
    rho: T,
    one_minus_b: T,
    branch0: BranchSpec,
    branch1: BranchSpec,
}

/// Outcome of [`MapSystem::validate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    /// `|W₀(0)|, |W₀(a) − 1|, |W₁(1−b)|, |W₁(1) − 1|`.
    pub endpoint_residuals: [f64; 4],
    pub min_derivative: f64,
    pub d: f64,
    pub grid_points: usize,
    pub pass: bool,
}

impl<T: Real> MapSystem<T> {
    pub fn new(
        a: T,
        b: T,
        rho: T,
        branch0: BranchSpec,
        branch1: BranchSpec,
    ) -> Result<Self, ModelError> {
        let zero = T::zero();
        let one = T::one();
        for (name, v) in [("a", &a), ("b", &b)] {
            if !(*v > zero && *v < one) {
                return Err(ModelError::ParamOutOfRange {
                    name,
                    value: v.display(),
                });
            }
        }
        if a.add(&b) <= one {
            return Err(ModelError::NotOverlapping {
                a: a.display(),
                b: b.display(),
            });
        }
        let one_minus_b = one.sub(&b);
        if rho < one_minus_b || rho > a {
            return Err(ModelError::RhoOutOfRange {
                rho: rho.display(),
                lo: one_minus_b.display(),
                hi: a.display(),
            });
        }
        for (i, spec, width) in [(0u8, &branch0, &a), (1u8, &branch1, &b)] {
            if T::EXACT && !matches!(spec, BranchSpec::Affine) {
                return Err(ModelError::RationalNeedsAffine);
            }
            let limit = 1.0 - width.to_f64();
            let eps = spec.eps();
            if !(eps >= 0.0 && eps < limit) {
                return Err(ModelError::EpsTooLarge {
                    branch: i,
                    eps,
                    limit,
                });
            }
        }
        Ok(MapSystem {
            a,
            b,
            rho,
            one_minus_b,
            branch0,
            branch1,
        })
    }

    /// Affine system with both branches linear.
    pub fn affine(a: T, b: T, rho: T) -> Result<Self, ModelError> {
        Self::new(a, b, rho, BranchSpec::Affine, BranchSpec::Affine)
    }

    /// Same branches, different threshold.
    pub fn with_rho(&self, rho: T) -> Result<Self, ModelError> {
        Self::new(
            self.a.clone(),
            self.b.clone(),
            rho,
            self.branch0,
            self.branch1,
        )
    }

    pub fn a(&self) -> &T {
        &self.a
    }
    pub fn b(&self) -> &T {
        &self.b
    }
    pub fn rho(&self) -> &T {
        &self.rho
    }
    /// Left end `1 − b` of the branch-1 domain.
    pub fn one_minus_b(&self) -> &T {
        &self.one_minus_b
    }
    pub fn branch_spec(&self, i: Digit) -> BranchSpec {
        if i == 0 {
            self.branch0
        } else {
            self.branch1
        }
    }

    /// Certified lower bound `d > 1` on both branch derivatives.
    pub fn d(&self) -> f64 {
        let d0 = (1.0 - self.branch0.eps()) / self.a.to_f64();
        let d1 = (1.0 - self.branch1.eps()) / self.b.to_f64();
        d0.min(d1)
    }

    /// Largest branch derivative; used for error budgets.
    pub fn max_derivative(&self) -> f64 {
        let d0 = (1.0 + self.branch0.eps()) / self.a.to_f64();
        let d1 = (1.0 + self.branch1.eps()) / self.b.to_f64();
        d0.max(d1)
    }

    /// Domain-normalised coordinate of `x` on branch `i`.
    fn normalise(&self, i: Digit, x: &T) -> T {
        if i == 0 {
            x.div(&self.a)
        } else {
            x.sub(&self.one_minus_b).div(&self.b)
        }
    }

    /// `W_i(x)` on the branch domain.
    pub fn branch(&self, i: Digit, x: &T) -> T {
        let t = self.normalise(i, x);
        match self.branch_spec(i) {
            BranchSpec::Affine => t,
            spec => T::from_f64(spec.shape(t.to_f64())),
        }
    }

    /// `W_i'(x)`.
    pub fn branch_derivative(&self, i: Digit, x: f64) -> f64 {
        let (width, t) = if i == 0 {
            let a = self.a.to_f64();
            (a, x / a)
        } else {
            let b = self.b.to_f64();
            (b, (x - (1.0 - b)) / b)
        };
        self.branch_spec(i).shape_derivative(t) / width
    }

    /// The unique `x` in the branch-`i` domain with `W_i(x) = y`.
    pub fn branch_inverse(&self, i: Digit, y: &T) -> T {
        let t = match self.branch_spec(i) {
            BranchSpec::Affine => y.clone(),
            spec => T::from_f64(spec.shape_inverse(y.to_f64())),
        };
        if i == 0 {
            self.a.mul(&t)
        } else {
            self.one_minus_b.add(&self.b.mul(&t))
        }
    }

    /// Digit assigned to `x` by the chosen variant.
    pub fn digit(&self, x: &T, variant: Variant) -> Digit {
        let left = match variant {
            Variant::LeftClosed => *x <= self.rho,
            Variant::RightClosed => *x < self.rho,
        };
        if left {
            0
        } else {
            1
        }
    }

    /// One step of `W` (left closed) or `W₊` (right closed).
    pub fn eval(&self, x: &T, variant: Variant) -> (T, Digit) {
        let i = self.digit(x, variant);
        (self.branch(i, x), i)
    }

    /// Checked version of [`MapSystem::eval`].
    pub fn eval_checked(&self, x: &T, variant: Variant) -> Result<(T, Digit), ModelError> {
        check_unit(x)?;
        Ok(self.eval(x, variant))
    }

    /// `W⁻¹({y})`: the branch-0 preimage if it is `≤ rho`, the branch-1
    /// preimage if it is `> rho`.
    pub fn preimages(&self, y: &T) -> Vec<T> {
        let mut out = Vec::with_capacity(2);
        let x0 = self.branch_inverse(0, y);
        if x0 <= self.rho {
            out.push(x0);
        }
        let x1 = self.branch_inverse(1, y);
        if x1 > self.rho {
            out.push(x1);
        }
        out
    }

    /// Endpoint residuals and the sampled derivative bound.
    pub fn validate(&self, grid_points: usize) -> Result<ValidationReport, ModelError> {
        if grid_points < 2 {
            return Err(ModelError::Precondition(
                "validation needs at least 2 grid points".into(),
            ));
        }
        let residual = |i: Digit, x: &T, target: f64| (self.branch(i, x).to_f64() - target).abs();
        let endpoint_residuals = [
            residual(0, &T::zero(), 0.0),
            residual(0, &self.a, 1.0),
            residual(1, &self.one_minus_b, 0.0),
            residual(1, &T::one(), 1.0),
        ];
        let a = self.a.to_f64();
        let lo1 = self.one_minus_b.to_f64();
        let mut min_derivative = f64::INFINITY;
        for j in 0..grid_points {
            let s = j as f64 / (grid_points - 1) as f64;
            min_derivative = min_derivative
                .min(self.branch_derivative(0, s * a))
                .min(self.branch_derivative(1, lo1 + s * (1.0 - lo1)));
        }
        let d = self.d();
        let pass = min_derivative >= d * (1.0 - 1e-12)
            && d > 1.0
            && endpoint_residuals.iter().all(|r| *r <= 1e-12);
        Ok(ValidationReport {
            endpoint_residuals,
            min_derivative,
            d,
            grid_points,
            pass,
        })
    }
}

impl MapSystem<BigRational> {
    /// Floating-point copy of an exact system.
    pub fn to_float(&self) -> MapSystem<f64> {
        MapSystem::new(
            self.a.to_f64(),
            self.b.to_f64(),
            self.rho.to_f64(),
            self.branch0,
            self.branch1,
        )
        .expect("a valid rational system stays valid in floating point")
    }
}

pub(crate) fn check_unit<T: Real>(x: &T) -> Result<(), ModelError> {
    if *x < T::zero() || *x > T::one() {
        Err(ModelError::OutOfDomain(x.display()))
    } else {
        Ok(())
    }
}
