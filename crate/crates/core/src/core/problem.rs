use super::solution::{Objective, Solution};
use crate::error::{Error, Result};

/// An immutable problem instance.
///
/// Implementations must be pure: the same solution always evaluates to the
/// same objective. Instances are shared read-only between concurrent runs.
pub trait Problem: Sync {
    type Solution: Solution;

    /// Number of vertices.
    fn size(&self) -> usize;

    /// Full objective computation. The caller guarantees that `solution`
    /// has `size()` positions.
    fn objective_of(&self, solution: &Self::Solution) -> Objective;

    /// Checks dimensions, computes the objective and caches it on the solution.
    fn evaluate(&self, solution: &mut Self::Solution) -> Result<Objective> {
        if solution.len() != self.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                actual: solution.len(),
            });
        }
        let value = self.objective_of(solution);
        solution.set_objective(value);
        Ok(value)
    }

    /// Cached objective if present, otherwise a fresh evaluation.
    fn objective(&self, solution: &Self::Solution) -> Objective {
        solution
            .objective()
            .unwrap_or_else(|| self.objective_of(solution))
    }

    /// Makes sure the cached objective is present.
    fn ensure_evaluated(&self, solution: &mut Self::Solution) -> Objective {
        match solution.objective() {
            Some(v) => v,
            None => {
                let v = self.objective_of(solution);
                solution.set_objective(v);
                v
            }
        }
    }
}

pub fn evaluate<P: Problem>(problem: &P, solution: &mut P::Solution) -> Result<Objective> {
    problem.evaluate(solution)
}
