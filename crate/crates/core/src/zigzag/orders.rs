//! Orders on endpoints and bars that depend on the arrow directions.

use std::cmp::Ordering;

use crate::persistence::{BarOrder, Direction, Interval};

use super::ZigzagType;

/// A total order on `{0, …, ℓ}` given by the rank of each element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndpointOrder {
    rank: Vec<usize>,
}

impl EndpointOrder {
    /// The permutation `k ↦ rank of k`.
    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    pub fn rank(&self, k: usize) -> usize {
        self.rank[k]
    }

    /// Elements from smallest to largest.
    pub fn sequence(&self) -> Vec<usize> {
        let mut seq = vec![0; self.rank.len()];
        for (k, &r) in self.rank.iter().enumerate() {
            seq[r] = k;
        }
        seq
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.rank[a] <= self.rank[b]
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.rank.len()];
        self.rank.iter().all(|&r| r < seen.len() && !std::mem::replace(&mut seen[r], true))
    }
}

/// `≤_τ`: built left to right; a new endpoint goes above everything seen so
/// far across a forward arrow and below it across a backward one.
pub fn order_tau(tau: &ZigzagType) -> EndpointOrder {
    let mut rank = vec![0];
    for (i, &dir) in tau.arrows().iter().enumerate() {
        match dir {
            Direction::Forward => rank.push(i + 1),
            Direction::Backward => {
                rank.iter_mut().for_each(|r| *r += 1);
                rank.push(0);
            }
        }
    }
    EndpointOrder { rank }
}

/// `≤*_τ`: built right to left; a new endpoint goes below everything seen
/// so far across a forward arrow and above it across a backward one.
pub fn order_tau_star(tau: &ZigzagType) -> EndpointOrder {
    let length = tau.len();
    let mut rank = vec![0; length + 1];
    rank[length] = length;
    for j in (0..length).rev() {
        match tau.arrows()[j] {
            Direction::Forward => rank[j] = j,
            Direction::Backward => {
                rank[j + 1..].iter_mut().for_each(|r| *r -= 1);
                rank[j] = length;
            }
        }
    }
    EndpointOrder { rank }
}

/// `⪯_τ` and `⊴_τ` for a fixed type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauOrder {
    tau: ZigzagType,
    starts: EndpointOrder,
    ends: EndpointOrder,
}

impl TauOrder {
    pub fn new(tau: &ZigzagType) -> Self {
        TauOrder {
            tau: tau.clone(),
            starts: order_tau(tau),
            ends: order_tau_star(tau),
        }
    }

    pub fn tau(&self) -> &ZigzagType {
        &self.tau
    }
}

impl BarOrder for TauOrder {
    fn length(&self) -> usize {
        self.tau.len()
    }

    fn directions(&self) -> Vec<Direction> {
        self.tau.arrows().to_vec()
    }

    fn preceq(&self, a: Interval, b: Interval) -> bool {
        preceq_tau(a, b, &self.tau)
    }

    fn compare(&self, a: Interval, b: Interval) -> Ordering {
        self.starts
            .rank(a.start())
            .cmp(&self.starts.rank(b.start()))
            .then(self.ends.rank(a.end()).cmp(&self.ends.rank(b.end())))
    }
}

/// `a ⪯_τ b`: the bars meet in `[i,j]`, and at each end of the overlap the
/// arrow leaving it decides which bar may stick out.
pub fn preceq_tau(a: Interval, b: Interval, tau: &ZigzagType) -> bool {
    let Some(overlap) = a.intersection(b) else {
        return false;
    };
    let (i, j) = (overlap.start(), overlap.end());
    let arrows = tau.arrows();
    let start_ok = i == 0
        || match arrows[i - 1] {
            Direction::Forward => a.start() <= b.start(),
            Direction::Backward => b.start() <= a.start(),
        };
    let end_ok = j == arrows.len()
        || match arrows[j] {
            Direction::Forward => a.end() <= b.end(),
            Direction::Backward => b.end() <= a.end(),
        };
    start_ok && end_ok
}

/// `a ⊴_τ b`.
pub fn lex_tau(a: Interval, b: Interval, tau: &ZigzagType) -> bool {
    TauOrder::new(tau).lex_leq(a, b)
}

/// `b ⊂_τ a`: intersecting, `a ⊴_τ b`, and `a ⋠_τ b`.
pub fn strictly_nested_tau(a: Interval, b: Interval, tau: &ZigzagType) -> bool {
    TauOrder::new(tau).nested(a, b)
}
