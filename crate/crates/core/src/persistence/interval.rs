use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid interval [{start},{end}]")]
pub struct IntervalError {
    pub start: usize,
    pub end: usize,
}

/// A closed integer interval `[start, end]`.
///
/// The derived `Ord` is lexicographic on `(start, end)`, which is the bar
/// order ⊴ of ordinary persistence.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    start: usize,
    end: usize,
}

impl Interval {
    pub fn new(start: usize, end: usize) -> Result<Self, IntervalError> {
        if start > end {
            return Err(IntervalError { start, end });
        }
        Ok(Interval { start, end })
    }

    /// Panicking constructor for literals in tests and examples.
    pub fn of(start: usize, end: usize) -> Self {
        Self::new(start, end).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn start(self) -> usize {
        self.start
    }

    pub fn end(self) -> usize {
        self.end
    }

    pub fn contains(self, k: usize) -> bool {
        self.start <= k && k <= self.end
    }

    pub fn intersection(self, other: Interval) -> Option<Interval> {
        let start = self.start.max(other.start);
        let end = self.end.min(other.end);
        (start <= end).then_some(Interval { start, end })
    }

    pub fn intersects(self, other: Interval) -> bool {
        self.intersection(other).is_some()
    }

    /// `self ⪯ other`: `self.start ≤ other.start ≤ self.end ≤ other.end`.
    pub fn preceq(self, other: Interval) -> bool {
        preceq(self, other)
    }

    /// Every closed interval inside `[0, length]`, in ⊴ order.
    pub fn all(length: usize) -> impl Iterator<Item = Interval> {
        (0..=length).flat_map(move |start| (start..=length).map(move |end| Interval { start, end }))
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.start, self.end)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.start, self.end)
    }
}

/// `a ⪯ b` iff `a.start ≤ b.start ≤ a.end ≤ b.end`.
///
/// For bars of a module, `a ⪯ b` is exactly when the interval module of `b`
/// maps nontrivially into that of `a`.
pub fn preceq(a: Interval, b: Interval) -> bool {
    a.start <= b.start && b.start <= a.end && a.end <= b.end
}

/// `a ⊴ b`, the lexicographic order on `(start, end)`.
pub fn lex_leq(a: Interval, b: Interval) -> bool {
    a <= b
}

/// True iff `inner` sits strictly inside `outer` at both ends.
pub fn strictly_nested(outer: Interval, inner: Interval) -> bool {
    outer.start < inner.start && inner.end < outer.end
}
