use std::cmp::Ordering;

use super::{interval, Direction, Interval};

/// The two relations on bars that drive the stabiliser and ladder machinery:
/// a total order ⊴ used to lay out barcode bases, and the overlap relation
/// ⪯ recording when one interval module receives a nonzero map from another.
pub trait BarOrder: Clone + Send + Sync {
    /// Number of arrows ℓ.
    fn length(&self) -> usize;

    fn directions(&self) -> Vec<Direction>;

    /// `a ⪯ b`: the interval module of `b` maps nontrivially into that of `a`.
    fn preceq(&self, a: Interval, b: Interval) -> bool;

    /// The total order ⊴ on bars.
    fn compare(&self, a: Interval, b: Interval) -> Ordering;

    fn lex_leq(&self, a: Interval, b: Interval) -> bool {
        self.compare(a, b) != Ordering::Greater
    }

    /// Intersecting, `a ⊴ b`, yet `a ⋠ b`: the pair obstructing a matching
    /// decomposition. For ordinary persistence this is strict nesting of `b`
    /// inside `a`.
    fn nested(&self, a: Interval, b: Interval) -> bool {
        a.intersects(b) && self.lex_leq(a, b) && !self.preceq(a, b)
    }

    fn sort(&self, bars: &mut [Interval]) {
        bars.sort_by(|&a, &b| self.compare(a, b));
    }
}

/// ⪯ and ⊴ of ordinary (all arrows forward) persistence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StandardOrder {
    length: usize,
}

impl StandardOrder {
    pub fn new(length: usize) -> Self {
        StandardOrder { length }
    }
}

impl BarOrder for StandardOrder {
    fn length(&self) -> usize {
        self.length
    }

    fn directions(&self) -> Vec<Direction> {
        vec![Direction::Forward; self.length]
    }

    fn preceq(&self, a: Interval, b: Interval) -> bool {
        interval::preceq(a, b)
    }

    fn compare(&self, a: Interval, b: Interval) -> Ordering {
        a.cmp(&b)
    }
}
