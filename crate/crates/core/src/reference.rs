//! Centralized cycle detection used as ground truth for the distributed
//! protocol.
//!
//! Successor functions return `None` for a terminal element (the walk
//! leaves the network). Each detector takes a step budget counted in
//! successor evaluations of its leading pointer, so adversarial inputs
//! cannot spin forever.

use std::collections::HashMap;
use std::hash::Hash;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ReferenceError {
    #[error("walk neither terminated nor revealed a cycle within {0} steps")]
    StepBudgetExceeded(usize),
    #[error("cycle length must be at least 1")]
    EmptyCycle,
}

/// Tail length `mu` and cycle length `lambda` of a rho-shaped walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CycleStructure {
    mu: usize,
    lambda: usize,
}

impl CycleStructure {
    pub fn new(mu: usize, lambda: usize) -> Result<Self, ReferenceError> {
        if lambda == 0 {
            return Err(ReferenceError::EmptyCycle);
        }
        Ok(Self { mu, lambda })
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    /// Number of distinct elements on the walk.
    pub fn len(&self) -> usize {
        self.mu + self.lambda
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Brent's cycle detection, base 2.
///
/// The tortoise parks on the hare at every power-of-two boundary and the
/// hare runs ahead one step at a time until it meets the tortoise, reaches
/// the next boundary, or falls off the end of the walk.
pub fn brent_detect<T, F>(start: T, next: F, max_steps: usize) -> Result<bool, ReferenceError>
where
    T: Clone + PartialEq,
    F: Fn(&T) -> Option<T>,
{
    let mut hare = start;
    let mut power: usize = 1;
    let mut hops: usize = 0;
    loop {
        let tortoise = hare.clone();
        power = power.saturating_mul(2);
        loop {
            if hops >= max_steps {
                return Err(ReferenceError::StepBudgetExceeded(max_steps));
            }
            hops += 1;
            hare = match next(&hare) {
                Some(x) => x,
                None => return Ok(false),
            };
            if tortoise == hare {
                return Ok(true);
            }
            if hops >= power {
                break;
            }
        }
    }
}

/// Floyd's tortoise and hare: the hare takes two steps for each tortoise
/// step and the walk has a cycle iff they meet.
pub fn floyd_detect<T, F>(start: T, next: F, max_steps: usize) -> Result<bool, ReferenceError>
where
    T: Clone + PartialEq,
    F: Fn(&T) -> Option<T>,
{
    let mut tortoise = start.clone();
    let mut hare = start;
    let mut steps = 0;
    loop {
        for _ in 0..2 {
            if steps >= max_steps {
                return Err(ReferenceError::StepBudgetExceeded(max_steps));
            }
            steps += 1;
            hare = match next(&hare) {
                Some(x) => x,
                None => return Ok(false),
            };
        }
        // The hare already walked past this point, so it cannot be terminal.
        tortoise = next(&tortoise).expect("successor function is not deterministic");
        if tortoise == hare {
            return Ok(true);
        }
    }
}

/// Walks from `start` remembering every element. Returns the exact cycle
/// structure on the first revisit, or `None` if the walk terminates.
pub fn visited_set_oracle<T, F>(
    start: T,
    next: F,
    max_steps: usize,
) -> Result<Option<CycleStructure>, ReferenceError>
where
    T: Clone + Eq + Hash,
    F: Fn(&T) -> Option<T>,
{
    let mut seen = HashMap::new();
    let mut current = start;
    let mut index = 0;
    loop {
        if let Some(&first) = seen.get(&current) {
            return Ok(Some(CycleStructure {
                mu: first,
                lambda: index - first,
            }));
        }
        if index >= max_steps {
            return Err(ReferenceError::StepBudgetExceeded(max_steps));
        }
        seen.insert(current.clone(), index);
        current = match next(&current) {
            Some(x) => x,
            None => return Ok(None),
        };
        index += 1;
    }
}

/// Hop at which the distributed protocol first reports a loop on a walk
/// with the given structure and pairwise distinct node ids.
///
/// A tortoise snapshotted at walk position `p` is compared against positions
/// `p + 1 ..= 2p` (just position 1 for the origin at `p = 0`), so it catches
/// the loop when `p >= mu` and the cycle fits in that window.
pub fn predict_detection_hop(structure: CycleStructure) -> usize {
    let CycleStructure { mu, lambda } = structure;
    if mu == 0 && lambda == 1 {
        return 1;
    }
    let snapshot = mu.max(lambda).max(1).next_power_of_two();
    snapshot + lambda
}
