//! ACS whose `β, ρ, q0` are evolved online by a self-tuning firefly swarm.
//!
//! Every ant carries a [`ParamVector`] and builds its tour with its own
//! parameters on a shared pheromone matrix. After the global update the ants
//! act as fireflies whose brightness is the inverse tour length; the swarm
//! also carries its own `γ` and `δ`, so no tuning knob is left to the user
//! apart from the fixed `α`, `α0` and `β0`.

use std::time::{Duration, Instant};

use rand::Rng;

use crate::acs::{
    compute_tau0, construct_tour, global_update, nearest_neighbor_tour, AcsParams, PheromoneMatrix,
    RunRecord,
};
use crate::error::{invalid, Result};
use crate::firefly::{
    firefly_step, reduce_alpha, FaState, Firefly, ParamBounds, ParamVector, DIMS,
};
use crate::scalar::Scalar;
use crate::tsplib::TspInstance;

/// Settings of a hybrid run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridConfig<F> {
    pub iterations: usize,
    /// Ants, which are also the fireflies.
    pub ants: usize,
    /// Global pheromone decay.
    pub alpha: F,
    /// Pheromone exponent.
    pub theta: F,
    pub bounds: ParamBounds<F>,
    pub ff_alpha0: F,
    pub ff_beta0: F,
    /// Optional wall-clock cap checked between iterations.
    pub time_limit: Option<Duration>,
}

impl<F: Scalar> Default for HybridConfig<F> {
    fn default() -> Self {
        Self {
            iterations: 1000,
            ants: 10,
            alpha: F::of(0.1),
            theta: F::one(),
            bounds: ParamBounds::standard(),
            ff_alpha0: F::of(2.3),
            ff_beta0: F::one(),
            time_limit: None,
        }
    }
}

impl<F: Scalar> HybridConfig<F> {
    pub fn validate(&self) -> Result<()> {
        if self.ants == 0 {
            return Err(invalid("ants", "must be positive"));
        }
        let b = &self.bounds;
        if b.low(0) < F::zero() {
            return Err(invalid("beta", "range must be non-negative"));
        }
        if !(b.low(1) > F::zero() && b.high(1) <= F::one()) {
            return Err(invalid("rho", "range must lie within (0, 1]"));
        }
        if !(b.low(2) >= F::zero() && b.high(2) <= F::one()) {
            return Err(invalid("q0", "range must lie within [0, 1]"));
        }
        if b.low(3) < F::zero() {
            return Err(invalid("ff_gamma", "range must be non-negative"));
        }
        if !(b.low(4) >= F::zero() && b.high(4) <= F::one()) {
            return Err(invalid("ff_delta", "range must lie within [0, 1]"));
        }
        FaState::new(self.ff_alpha0, self.ff_beta0)?;
        let probe = AcsParams {
            beta: b.low(0),
            theta: self.theta,
            rho: b.high(1),
            q0: b.low(2),
            alpha: self.alpha,
            ants: self.ants,
            tau0: F::one(),
        };
        probe.validate()
    }
}

/// Population statistics of one iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow<F> {
    pub mean: [F; DIMS],
    pub min: [F; DIMS],
    pub max: [F; DIMS],
}

impl<F: Scalar> TraceRow<F> {
    fn of(population: &[Firefly<F>]) -> Self {
        let m = F::of_u64(population.len() as u64);
        let mut mean = [F::zero(); DIMS];
        let mut min = [F::infinity(); DIMS];
        let mut max = [F::neg_infinity(); DIMS];
        for f in population {
            for d in 0..DIMS {
                let v = f.position[d];
                mean[d] += v;
                min[d] = min[d].min(v);
                max[d] = max[d].max(v);
            }
        }
        for v in &mut mean {
            *v /= m;
        }
        Self { mean, min, max }
    }
}

/// Per-iteration evolution of the tuned parameters across the swarm.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParameterTrace<F> {
    pub rows: Vec<TraceRow<F>>,
}

impl<F: Scalar> ParameterTrace<F> {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Series of population means for parameter `d`.
    pub fn mean_series(&self, d: usize) -> Vec<F> {
        self.rows.iter().map(|r| r.mean[d]).collect()
    }
}

/// Inverse tour length.
pub fn brightness<F: Scalar>(length: u64) -> Result<F> {
    if length == 0 {
        return Err(invalid(
            "length",
            "brightness is undefined for a zero-length tour",
        ));
    }
    Ok(F::one() / F::of_u64(length))
}

/// `m` vectors drawn uniformly inside `bounds`.
pub fn init_population<F: Scalar, R: Rng + ?Sized>(
    bounds: &ParamBounds<F>,
    m: usize,
    rng: &mut R,
) -> Vec<ParamVector<F>> {
    (0..m)
        .map(|_| {
            let v = std::array::from_fn(|d| bounds.low(d) + F::sample_unit(rng) * bounds.width(d));
            bounds.clamp(ParamVector(v))
        })
        .collect()
}

/// Runs the hybrid for the configured budget.
pub fn run_acsfa<F: Scalar, R: Rng + ?Sized>(
    inst: &TspInstance,
    config: &HybridConfig<F>,
    rng: &mut R,
) -> Result<(RunRecord<F>, ParameterTrace<F>)> {
    config.validate()?;
    let started = Instant::now();
    let n = inst.dimension();
    let tau0: F = compute_tau0(inst);
    let colony = AcsParams {
        beta: F::zero(),
        theta: config.theta,
        rho: F::one(),
        q0: F::zero(),
        alpha: config.alpha,
        ants: config.ants,
        tau0,
    };
    let mut tau = PheromoneMatrix::new(n, tau0);
    let mut fa = FaState::new(config.ff_alpha0, config.ff_beta0)?;
    let mut swarm: Vec<Firefly<F>> = init_population(&config.bounds, config.ants, rng)
        .into_iter()
        .map(|position| Firefly {
            position,
            brightness: F::zero(),
        })
        .collect();

    let mut best = nearest_neighbor_tour(inst, 0)?;
    let mut have_ant_tour = false;
    let mut best_trace = Vec::with_capacity(config.iterations);
    let mut trace = ParameterTrace {
        rows: Vec::with_capacity(config.iterations),
    };

    for _ in 0..config.iterations {
        if config
            .time_limit
            .is_some_and(|cap| started.elapsed() >= cap)
        {
            break;
        }
        for ff in swarm.iter_mut() {
            let params = colony.with_tuned(&ff.position);
            let start = rng.random_range(0..n);
            let tour = construct_tour(inst, &mut tau, &params, rng, start);
            ff.brightness = brightness(tour.length().max(1))?;
            if !have_ant_tour || tour.length() < best.length() {
                best = tour;
                have_ant_tour = true;
            }
        }
        global_update(&mut tau, &best, &colony);
        firefly_step(&mut swarm, &fa, &config.bounds, rng);
        let delta = swarm[0].position.delta();
        reduce_alpha(&mut fa, delta);
        trace.rows.push(TraceRow::of(&swarm));
        best_trace.push(best.length());
    }

    let record = RunRecord {
        best,
        best_trace,
        elapsed: started.elapsed(),
        best_params: Some(swarm[0].position),
    };
    Ok((record, trace))
}
