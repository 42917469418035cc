//! Exact solvers for small instances.

use crate::error::{Error, Result};
use crate::tsplib::{Tour, TspInstance};

/// Largest instance [`brute_force`] accepts.
pub const BRUTE_FORCE_MAX_N: usize = 10;
/// Largest instance [`held_karp`] accepts.
pub const HELD_KARP_MAX_N: usize = 18;

/// Exhaustive enumeration of all `(n−1)!/2` undirected tours.
pub fn brute_force(inst: &TspInstance) -> Result<Tour> {
    brute_force_capped(inst, BRUTE_FORCE_MAX_N)
}

pub fn brute_force_capped(inst: &TspInstance, cap: usize) -> Result<Tour> {
    let n = inst.dimension();
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut best_order = order.clone();
    let mut best = u64::MAX;
    // city 0 is pinned first; the rest are permuted in place
    permute(inst, &mut order, 1, 0, &mut best, &mut best_order);
    Tour::new(inst, best_order)
}

fn permute(
    inst: &TspInstance,
    order: &mut [usize],
    k: usize,
    partial: u64,
    best: &mut u64,
    best_order: &mut Vec<usize>,
) {
    let n = order.len();
    if k == n {
        // each undirected tour is counted once: its second city precedes its last
        if order[1] < order[n - 1] || n < 3 {
            let total = partial + u64::from(inst.cost(order[n - 1], order[0]));
            if total < *best {
                *best = total;
                best_order.copy_from_slice(order);
            }
        }
        return;
    }
    for i in k..n {
        order.swap(k, i);
        let step = partial + u64::from(inst.cost(order[k - 1], order[k]));
        permute(inst, order, k + 1, step, best, best_order);
        order.swap(k, i);
    }
}

/// Optimal tour length by dynamic programming over subsets.
pub fn held_karp(inst: &TspInstance) -> Result<u64> {
    held_karp_capped(inst, HELD_KARP_MAX_N)
}

pub fn held_karp_capped(inst: &TspInstance, cap: usize) -> Result<u64> {
    let n = inst.dimension();
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    // city n-1 is the fixed start; subsets range over the other m cities
    let m = n - 1;
    let full = 1usize << m;
    let mut dp = vec![u64::MAX; full * m];
    for j in 0..m {
        dp[(1 << j) * m + j] = u64::from(inst.cost(m, j));
    }
    for set in 1..full {
        for last in 0..m {
            if set & (1 << last) == 0 {
                continue;
            }
            let here = dp[set * m + last];
            if here == u64::MAX {
                continue;
            }
            let mut rest = !set & (full - 1);
            while rest != 0 {
                let next = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let slot = &mut dp[(set | (1 << next)) * m + next];
                let cand = here + u64::from(inst.cost(last, next));
                if cand < *slot {
                    *slot = cand;
                }
            }
        }
    }
    let all = full - 1;
    Ok((0..m)
        .map(|j| dp[all * m + j] + u64::from(inst.cost(j, m)))
        .min()
        .expect("n >= 3"))
}
