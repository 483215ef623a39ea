//! Doubling-and-agreement certification for windowed computations.
//!
//! A windowed quantity is evaluated at window level `0, 1, 2, …` (each level
//! doubles the previous bounds). The value is accepted as soon as two
//! consecutive levels produce the same answer; running out of levels is an
//! error, never a guess.

use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: usize = 3;

/// How far windowed computations may grow.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Number of doublings allowed after the initial window.
    pub doublings: usize,
    /// Overrides the initial window `(max_y, max_x)` of ideal computations;
    /// `max_y` also seeds the height of realized-module windows.
    pub initial: Option<(usize, usize)>,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            doublings: DEFAULT_BUDGET,
            initial: None,
        }
    }
}

impl Budget {
    pub fn with_doublings(doublings: usize) -> Budget {
        Budget {
            doublings,
            initial: None,
        }
    }
}

/// Runs `eval(level)` for increasing levels until two consecutive levels
/// agree. `eval` returns `None` when the window is known to be too small.
pub fn certify<T, F>(what: &str, budget: &Budget, mut eval: F) -> Result<T>
where
    T: PartialEq,
    F: FnMut(usize) -> Result<Option<T>>,
{
    let mut previous: Option<T> = None;
    for level in 0..=budget.doublings {
        let current = eval(level)?;
        if let (Some(p), Some(c)) = (&previous, &current) {
            if p == c {
                return Ok(current.unwrap());
            }
        }
        previous = current;
    }
    Err(Error::NonStabilization {
        what: what.to_string(),
        attempts: budget.doublings + 1,
    })
}
