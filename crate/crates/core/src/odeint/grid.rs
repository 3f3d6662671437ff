use crate::error::{Error, Result};
use crate::problem::Interval;
use crate::scalar::Real;

/// Uniform grid `t_i = a + i h`, `i = 0..=N`, with `N` even.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<T: Real> {
    interval: Interval<T>,
    steps: usize,
}

impl<T: Real> Grid<T> {
    pub fn new(interval: Interval<T>, steps: usize) -> Result<Self> {
        if steps < 4 || !steps.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "grid step count must be even and at least 4, got {steps}"
            )));
        }
        Ok(Self { interval, steps })
    }

    pub fn interval(&self) -> Interval<T> {
        self.interval
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> T {
        self.interval.length() / T::lit(self.steps as f64)
    }

    /// Node `i`; the last node is `b` exactly.
    pub fn node(&self, i: usize) -> T {
        if i == self.steps {
            self.interval.b
        } else {
            self.interval.a + self.step() * T::lit(i as f64)
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = T> + '_ {
        (0..=self.steps).map(move |i| self.node(i))
    }
}
