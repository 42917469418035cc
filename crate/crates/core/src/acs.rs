//! Ant Colony System for the symmetric TSP.
//!
//! Tour construction uses the pseudo-random proportional rule: with
//! probability `q0` an ant takes the edge maximising `τ^θ · η^β`, otherwise it
//! samples the next city proportionally to that score. Every traversed edge is
//! pulled back toward `τ0` (local update) and after each iteration the whole
//! matrix evaporates while the global-best tour is reinforced by `1/L_gb`.

use std::time::{Duration, Instant};

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::firefly::ParamVector;
use crate::scalar::Scalar;
use crate::tsplib::{Tour, TspInstance};

/// Fixed parameters of one ACS colony.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcsParams<F> {
    /// Heuristic exponent.
    pub beta: F,
    /// Pheromone exponent.
    pub theta: F,
    /// Local evaporation.
    pub rho: F,
    /// Exploitation threshold.
    pub q0: F,
    /// Global decay.
    pub alpha: F,
    /// Number of ants.
    pub ants: usize,
    /// Initial and local-update pheromone level.
    pub tau0: F,
}

impl<F: Scalar> AcsParams<F> {
    pub fn new(beta: F, theta: F, rho: F, q0: F, alpha: F, ants: usize, tau0: F) -> Result<Self> {
        let p = Self {
            beta,
            theta,
            rho,
            q0,
            alpha,
            ants,
            tau0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Fixed-parameter baseline: `α = 0.1, β = 2, ρ = 0.1, q0 = 0.9, θ = 1, m = 10`.
    pub fn baseline(tau0: F) -> Self {
        Self {
            beta: F::of(2.0),
            theta: F::one(),
            rho: F::of(0.1),
            q0: F::of(0.9),
            alpha: F::of(0.1),
            ants: 10,
            tau0,
        }
    }

    /// Baseline parameters with `τ0` derived from the nearest-neighbour tour.
    pub fn baseline_for(inst: &TspInstance) -> Self {
        Self::baseline(compute_tau0(inst))
    }

    pub fn validate(&self) -> Result<()> {
        let finite_nonneg = |v: F| v.is_finite() && v >= F::zero();
        if !finite_nonneg(self.beta) {
            return Err(invalid("beta", format!("must be >= 0, got {}", self.beta)));
        }
        if !finite_nonneg(self.theta) {
            return Err(invalid(
                "theta",
                format!("must be >= 0, got {}", self.theta),
            ));
        }
        // rho = 1 is reachable from clamped firefly positions, so the upper end is closed
        if !(self.rho > F::zero() && self.rho <= F::one()) {
            return Err(invalid(
                "rho",
                format!("must lie in (0, 1], got {}", self.rho),
            ));
        }
        if !(self.q0 >= F::zero() && self.q0 <= F::one()) {
            return Err(invalid(
                "q0",
                format!("must lie in [0, 1], got {}", self.q0),
            ));
        }
        if !(self.alpha >= F::zero() && self.alpha < F::one()) {
            return Err(invalid(
                "alpha",
                format!("must lie in [0, 1), got {}", self.alpha),
            ));
        }
        if self.ants == 0 {
            return Err(invalid("ants", "must be positive"));
        }
        if !(self.tau0 > F::zero() && self.tau0.is_finite()) {
            return Err(invalid(
                "tau0",
                format!("must be positive, got {}", self.tau0),
            ));
        }
        Ok(())
    }

    /// Same colony settings with an ant's own `β, ρ, q0`.
    pub fn with_tuned(&self, p: &ParamVector<F>) -> Self {
        Self {
            beta: p.beta(),
            rho: p.rho(),
            q0: p.q0(),
            ..*self
        }
    }
}

/// Symmetric matrix of trail intensities.
#[derive(Debug, Clone, PartialEq)]
pub struct PheromoneMatrix<F> {
    n: usize,
    data: Vec<F>,
}

impl<F: Scalar> PheromoneMatrix<F> {
    pub fn new(n: usize, tau0: F) -> Self {
        Self {
            n,
            data: vec![tau0; n * n],
        }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, r: usize, s: usize) -> F {
        self.data[r * self.n + s]
    }

    #[inline]
    fn set(&mut self, r: usize, s: usize, v: F) {
        self.data[r * self.n + s] = v;
        self.data[s * self.n + r] = v;
    }

    /// Smallest off-diagonal entry.
    pub fn min_entry(&self) -> F {
        let mut m = F::infinity();
        for r in 0..self.n {
            for s in 0..self.n {
                if r != s {
                    m = m.min(self.get(r, s));
                }
            }
        }
        m
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|r| (r + 1..self.n).all(|s| self.get(r, s) == self.get(s, r)))
    }
}

/// Construction state of a single ant.
#[derive(Debug, Clone)]
pub struct AntState<F> {
    pub current: usize,
    visited: Vec<bool>,
    unvisited: Vec<usize>,
    pub tour: Vec<usize>,
    pub params: Option<ParamVector<F>>,
}

impl<F> AntState<F> {
    pub fn new(n: usize, start: usize) -> Self {
        let mut visited = vec![false; n];
        visited[start] = true;
        Self {
            current: start,
            visited,
            unvisited: (0..n).filter(|&c| c != start).collect(),
            tour: vec![start],
            params: None,
        }
    }

    /// Cities that remain to be visited.
    pub fn candidates(&self) -> &[usize] {
        &self.unvisited
    }

    pub fn is_visited(&self, city: usize) -> bool {
        self.visited[city]
    }

    pub fn visit(&mut self, city: usize) {
        debug_assert!(!self.visited[city]);
        self.visited[city] = true;
        if let Some(k) = self.unvisited.iter().position(|&c| c == city) {
            self.unvisited.swap_remove(k);
        }
        self.tour.push(city);
        self.current = city;
    }

    pub fn is_complete(&self) -> bool {
        self.unvisited.is_empty()
    }
}

/// Greedy tour: always move to the nearest unvisited city, lowest index on ties.
pub fn nearest_neighbor_tour(inst: &TspInstance, start: usize) -> Result<Tour> {
    let n = inst.dimension();
    if start >= n {
        return Err(Error::IndexOutOfRange {
            index: start,
            dimension: n,
        });
    }
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut cur = start;
    visited[cur] = true;
    order.push(cur);
    for _ in 1..n {
        let next = (0..n)
            .filter(|&c| !visited[c])
            .min_by_key(|&c| (inst.cost(cur, c), c))
            .expect("unvisited city remains");
        visited[next] = true;
        order.push(next);
        cur = next;
    }
    Ok(Tour::from_valid(inst, order))
}

/// `τ0 = 1 / (n · L_nn)` with `L_nn` the greedy tour from city 0.
pub fn compute_tau0<F: Scalar>(inst: &TspInstance) -> F {
    let nn = nearest_neighbor_tour(inst, 0).expect("city 0 exists");
    let denom = inst.dimension() as u64 * nn.length().max(1);
    F::one() / F::of_u64(denom)
}

/// `η(r, u) = 1 / d(r, u)`, with zero distances treated as 1.
#[inline]
pub fn visibility<F: Scalar>(inst: &TspInstance, r: usize, u: usize) -> F {
    F::one() / F::of_u64(u64::from(inst.cost(r, u).max(1)))
}

#[inline]
fn edge_score<F: Scalar>(
    r: usize,
    u: usize,
    tau: &PheromoneMatrix<F>,
    inst: &TspInstance,
    params: &AcsParams<F>,
) -> F {
    let t = tau.get(r, u);
    let t = if params.theta == F::one() {
        t
    } else {
        t.powf(params.theta)
    };
    let eta: F = visibility(inst, r, u);
    let e = if params.beta == F::zero() {
        F::one()
    } else if params.beta == F::one() {
        eta
    } else {
        eta.powf(params.beta)
    };
    t * e
}

/// Probability of moving from `r` to each city in `candidates`, aligned with it.
pub fn transition_probabilities<F: Scalar>(
    r: usize,
    candidates: &[usize],
    tau: &PheromoneMatrix<F>,
    inst: &TspInstance,
    params: &AcsParams<F>,
) -> Result<Vec<F>> {
    if candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    let mut w: Vec<F> = candidates
        .iter()
        .map(|&u| edge_score(r, u, tau, inst, params))
        .collect();
    let total = w.iter().fold(F::zero(), |a, &b| a + b);
    if total > F::zero() && total.is_finite() {
        for p in &mut w {
            *p /= total;
        }
    } else {
        // every score underflowed
        let uniform = F::one() / F::of_u64(candidates.len() as u64);
        w.iter_mut().for_each(|p| *p = uniform);
    }
    Ok(w)
}

/// Pseudo-random proportional choice of the next city.
pub fn select_next_city<F: Scalar, R: Rng + ?Sized>(
    r: usize,
    candidates: &[usize],
    tau: &PheromoneMatrix<F>,
    inst: &TspInstance,
    params: &AcsParams<F>,
    rng: &mut R,
) -> Result<usize> {
    match candidates {
        [] => return Err(Error::EmptyCandidates),
        [only] => return Ok(*only),
        _ => {}
    }
    let q = F::sample_unit(rng);
    if q <= params.q0 {
        let mut best = candidates[0];
        let mut best_score = edge_score(r, best, tau, inst, params);
        for &u in &candidates[1..] {
            let s = edge_score(r, u, tau, inst, params);
            if s > best_score || (s == best_score && u < best) {
                best = u;
                best_score = s;
            }
        }
        return Ok(best);
    }
    let probs = transition_probabilities(r, candidates, tau, inst, params)?;
    let target = F::sample_unit(rng);
    let mut acc = F::zero();
    for (&u, &p) in candidates.iter().zip(&probs) {
        acc += p;
        if target < acc {
            return Ok(u);
        }
    }
    // rounding left the cumulative sum just below one
    Ok(*candidates
        .iter()
        .zip(&probs)
        .rev()
        .find(|(_, p)| **p > F::zero())
        .map(|(u, _)| u)
        .unwrap_or(&candidates[candidates.len() - 1]))
}

/// `τ(r,s) ← (1−ρ)·τ(r,s) + ρ·τ0`, symmetric.
pub fn local_update<F: Scalar>(
    tau: &mut PheromoneMatrix<F>,
    r: usize,
    s: usize,
    params: &AcsParams<F>,
) {
    let v = (F::one() - params.rho) * tau.get(r, s) + params.rho * params.tau0;
    tau.set(r, s, v);
}

/// Evaporates every edge by `(1−α)` and deposits `α / L_gb` on the best tour's edges.
pub fn global_update<F: Scalar>(tau: &mut PheromoneMatrix<F>, best: &Tour, params: &AcsParams<F>) {
    if params.alpha == F::zero() {
        return;
    }
    let keep = F::one() - params.alpha;
    for v in &mut tau.data {
        *v *= keep;
    }
    let deposit = params.alpha / F::of_u64(best.length().max(1));
    for (r, s) in best.edges() {
        let v = tau.get(r, s) + deposit;
        tau.set(r, s, v);
    }
}

/// Builds one tour from `start`, applying the local update on every traversed edge.
pub fn construct_tour<F: Scalar, R: Rng + ?Sized>(
    inst: &TspInstance,
    tau: &mut PheromoneMatrix<F>,
    params: &AcsParams<F>,
    rng: &mut R,
    start: usize,
) -> Tour {
    let n = inst.dimension();
    let mut ant: AntState<F> = AntState::new(n, start);
    while !ant.is_complete() {
        let r = ant.current;
        let s = select_next_city(r, ant.candidates(), tau, inst, params, rng)
            .expect("candidates non-empty");
        ant.visit(s);
        local_update(tau, r, s, params);
    }
    local_update(tau, ant.current, start, params);
    Tour::from_valid(inst, ant.tour)
}

/// Outcome of one solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord<F> {
    pub best: Tour,
    /// Global-best length after each iteration.
    pub best_trace: Vec<u64>,
    pub elapsed: Duration,
    /// Brightest parameter vector at termination (hybrid runs only).
    pub best_params: Option<ParamVector<F>>,
}

/// Fixed-parameter ACS for `iterations` iterations of `params.ants` ants.
///
/// With zero iterations the greedy tour used for `τ0` is returned.
pub fn run_acs<F: Scalar, R: Rng + ?Sized>(
    inst: &TspInstance,
    params: &AcsParams<F>,
    iterations: usize,
    rng: &mut R,
) -> Result<RunRecord<F>> {
    params.validate()?;
    let started = Instant::now();
    let n = inst.dimension();
    let mut tau = PheromoneMatrix::new(n, params.tau0);
    let mut best = nearest_neighbor_tour(inst, 0)?;
    let mut trace = Vec::with_capacity(iterations);
    let mut have_ant_tour = false;
    for _ in 0..iterations {
        for _ in 0..params.ants {
            let start = rng.random_range(0..n);
            let tour = construct_tour(inst, &mut tau, params, rng, start);
            if !have_ant_tour || tour.length() < best.length() {
                best = tour;
                have_ant_tour = true;
            }
        }
        global_update(&mut tau, &best, params);
        trace.push(best.length());
    }
    Ok(RunRecord {
        best,
        best_trace: trace,
        elapsed: started.elapsed(),
        best_params: None,
    })
}
