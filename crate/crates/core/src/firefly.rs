//! Firefly dynamics over the five tuned parameters `(β, ρ, q0, γ, δ)`.
//!
//! Each firefly is a point in a box. Dimmer fireflies move toward brighter
//! ones with attraction `β0·exp(−γ r²)` plus a uniform random kick scaled by
//! the current randomisation weight, which shrinks by `δ` every iteration.

use std::cmp::Ordering;
use std::ops::Index;

use rand::Rng;

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// Number of tuned parameters.
pub const DIMS: usize = 5;

/// Names of the tuned parameters, in storage order.
pub const PARAM_NAMES: [&str; DIMS] = ["beta", "rho", "q0", "ff_gamma", "ff_delta"];

/// One firefly's position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamVector<F>(pub [F; DIMS]);

impl<F: Scalar> ParamVector<F> {
    pub fn new(beta: F, rho: F, q0: F, gamma: F, delta: F) -> Self {
        Self([beta, rho, q0, gamma, delta])
    }

    pub fn beta(&self) -> F {
        self.0[0]
    }

    pub fn rho(&self) -> F {
        self.0[1]
    }

    pub fn q0(&self) -> F {
        self.0[2]
    }

    /// Light absorption coefficient carried by this firefly.
    pub fn gamma(&self) -> F {
        self.0[3]
    }

    /// Randomness reduction factor carried by this firefly.
    pub fn delta(&self) -> F {
        self.0[4]
    }

    pub fn as_array(&self) -> &[F; DIMS] {
        &self.0
    }
}

impl<F> Index<usize> for ParamVector<F> {
    type Output = F;

    fn index(&self, d: usize) -> &F {
        &self.0[d]
    }
}

/// Per-dimension closed ranges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamBounds<F> {
    ranges: [(F, F); DIMS],
}

impl<F: Scalar> ParamBounds<F> {
    /// `low == high` is accepted and pins that component.
    pub fn new(ranges: [(F, F); DIMS]) -> Result<Self> {
        for (d, &(lo, hi)) in ranges.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(invalid(PARAM_NAMES[d], format!("bad range [{lo}, {hi}]")));
            }
        }
        Ok(Self { ranges })
    }

    /// `β ∈ [0,8], ρ ∈ [0.5,1], q0 ∈ [0.5,1], γ ∈ [0,10], δ ∈ [0.8,1]`.
    pub fn standard() -> Self {
        let r = |a: f64, b: f64| (F::of(a), F::of(b));
        Self {
            ranges: [
                r(0.0, 8.0),
                r(0.5, 1.0),
                r(0.5, 1.0),
                r(0.0, 10.0),
                r(0.8, 1.0),
            ],
        }
    }

    pub fn low(&self, d: usize) -> F {
        self.ranges[d].0
    }

    pub fn high(&self, d: usize) -> F {
        self.ranges[d].1
    }

    pub fn width(&self, d: usize) -> F {
        self.ranges[d].1 - self.ranges[d].0
    }

    pub fn ranges(&self) -> &[(F, F); DIMS] {
        &self.ranges
    }

    pub fn contains(&self, p: &ParamVector<F>) -> bool {
        p.0.iter()
            .zip(&self.ranges)
            .all(|(&v, &(lo, hi))| v >= lo && v <= hi)
    }

    pub fn clamp(&self, mut p: ParamVector<F>) -> ParamVector<F> {
        for (v, &(lo, hi)) in p.0.iter_mut().zip(&self.ranges) {
            *v = v.max(lo).min(hi);
        }
        p
    }

    pub fn midpoint(&self) -> ParamVector<F> {
        let two = F::of(2.0);
        ParamVector(std::array::from_fn(|d| (self.low(d) + self.high(d)) / two))
    }
}

/// Global state of the firefly dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaState<F> {
    /// Current randomisation weight.
    pub alpha: F,
    /// Attraction at zero distance.
    pub beta0: F,
    /// Initial randomisation weight.
    pub alpha0: F,
}

impl<F: Scalar> FaState<F> {
    pub fn new(alpha0: F, beta0: F) -> Result<Self> {
        if !(alpha0 >= F::zero() && alpha0.is_finite()) {
            return Err(invalid("ff_alpha0", format!("must be >= 0, got {alpha0}")));
        }
        if !(beta0 >= F::zero() && beta0.is_finite()) {
            return Err(invalid("ff_beta0", format!("must be >= 0, got {beta0}")));
        }
        Ok(Self {
            alpha: alpha0,
            beta0,
            alpha0,
        })
    }

    /// `α0 = 2.3`, `β0 = 1`.
    pub fn standard() -> Self {
        Self {
            alpha: F::of(2.3),
            beta0: F::one(),
            alpha0: F::of(2.3),
        }
    }
}

/// Euclidean distance after normalising each dimension by its range width.
pub fn param_distance<F: Scalar>(
    a: &ParamVector<F>,
    b: &ParamVector<F>,
    bounds: &ParamBounds<F>,
) -> F {
    let mut sum = F::zero();
    for d in 0..DIMS {
        let w = bounds.width(d);
        if w > F::zero() {
            let t = (a[d] - b[d]) / w;
            sum += t * t;
        }
    }
    sum.sqrt()
}

/// `β0 · exp(−γ r²)`.
pub fn attractiveness<F: Scalar>(beta0: F, gamma: F, r: F) -> F {
    beta0 * (-gamma * r * r).exp()
}

/// Moves `xi` toward `xj`; the result is clamped into `bounds`.
pub fn move_toward<F: Scalar, R: Rng + ?Sized>(
    xi: &ParamVector<F>,
    xj: &ParamVector<F>,
    fa: &FaState<F>,
    gamma: F,
    bounds: &ParamBounds<F>,
    rng: &mut R,
) -> ParamVector<F> {
    let beta = attractiveness(fa.beta0, gamma, param_distance(xi, xj, bounds));
    let half = F::of(0.5);
    let mut out = *xi;
    for d in 0..DIMS {
        let kick = fa.alpha * (F::sample_unit(rng) - half);
        out.0[d] = xi[d] + beta * (xj[d] - xi[d]) + kick;
    }
    bounds.clamp(out)
}

/// `α ← α·δ`.
pub fn reduce_alpha<F: Scalar>(fa: &mut FaState<F>, delta: F) {
    fa.alpha *= delta;
}

/// A parameter vector paired with the quality of the tour it produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Firefly<F> {
    pub position: ParamVector<F>,
    pub brightness: F,
}

/// One sweep of the firefly dynamics followed by ranking, brightest first.
///
/// Pairs are visited with ascending `i` then ascending `j`; firefly `i` moves
/// toward `j` only when `j` is strictly brighter, using `j`'s own `γ`. Moves
/// take effect immediately within the sweep. Brightness is left untouched.
pub fn firefly_step<F: Scalar, R: Rng + ?Sized>(
    population: &mut [Firefly<F>],
    fa: &FaState<F>,
    bounds: &ParamBounds<F>,
    rng: &mut R,
) {
    let m = population.len();
    for i in 0..m {
        for j in 0..m {
            if population[j].brightness > population[i].brightness {
                let target = population[j].position;
                population[i].position = move_toward(
                    &population[i].position,
                    &target,
                    fa,
                    target.gamma(),
                    bounds,
                    rng,
                );
            }
        }
    }
    population.sort_by(|a, b| {
        b.brightness
            .partial_cmp(&a.brightness)
            .unwrap_or(Ordering::Equal)
    });
}
