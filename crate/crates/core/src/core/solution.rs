use std::fmt::Debug;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

/// Objective value of a solution. Every problem is a maximization problem
/// with integer weights, so comparisons are always exact.
pub type Objective = i64;

/// Behaviour shared by the two solution representations.
///
/// Equality and hashing only look at the representation, never at the
/// cached objective.
pub trait Solution: Clone + Debug + Eq + Hash + Send + Sync {
    /// Number of positions (vertices) in the representation.
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn objective(&self) -> Option<Objective>;

    fn set_objective(&mut self, value: Objective);

    fn clear_objective(&mut self);

    /// Indices at which the two solutions disagree.
    fn difference(&self, other: &Self) -> Vec<usize>;

    /// Size of the symmetric difference. Panics on length mismatch.
    fn distance(&self, other: &Self) -> usize;

    /// Single-line text form used by elite dumps and solution files.
    fn to_line(&self) -> String;
}

/// Returns the symmetric difference of two solutions together with its size.
pub fn symmetric_difference<S: Solution>(a: &S, b: &S) -> Result<(Vec<usize>, usize)> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let delta = a.difference(b);
    let size = delta.len();
    Ok((delta, size))
}

/// A linear order of the vertices `0..n`.
#[derive(Clone, Debug)]
pub struct PermutationSolution {
    order: Vec<usize>,
    objective: Option<Objective>,
}

impl PermutationSolution {
    pub fn from_order(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n {
                return Err(Error::InvalidSolution(format!(
                    "vertex {v} out of range for a permutation of length {n}"
                )));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidSolution(format!("vertex {v} appears twice")));
            }
        }
        Ok(Self {
            order,
            objective: None,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            order: (0..n).collect(),
            objective: None,
        }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// `positions()[v]` is the index of vertex `v` in the order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    /// Moves the element at `from` so that it ends up at index `to`.
    /// Invalidates the cached objective.
    pub fn insert(&mut self, from: usize, to: usize) {
        let v = self.order.remove(from);
        self.order.insert(to, v);
        self.objective = None;
    }

    pub fn swap(&mut self, a: usize, b: usize) {
        self.order.swap(a, b);
        self.objective = None;
    }

    pub fn reversed(&self) -> Self {
        let mut order = self.order.clone();
        order.reverse();
        Self {
            order,
            objective: None,
        }
    }
}

impl PartialEq for PermutationSolution {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl Eq for PermutationSolution {}

impl Hash for PermutationSolution {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.order.hash(state);
    }
}

impl Solution for PermutationSolution {
    fn len(&self) -> usize {
        self.order.len()
    }

    fn objective(&self) -> Option<Objective> {
        self.objective
    }

    fn set_objective(&mut self, value: Objective) {
        self.objective = Some(value);
    }

    fn clear_objective(&mut self) {
        self.objective = None;
    }

    fn difference(&self, other: &Self) -> Vec<usize> {
        self.order
            .iter()
            .zip(&other.order)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(j, _)| j)
            .collect()
    }

    fn distance(&self, other: &Self) -> usize {
        assert_eq!(self.len(), other.len(), "permutation length mismatch");
        self.order
            .iter()
            .zip(&other.order)
            .filter(|(a, b)| a != b)
            .count()
    }

    fn to_line(&self) -> String {
        let parts: Vec<String> = self.order.iter().map(|v| v.to_string()).collect();
        parts.join(" ")
    }
}

/// Two-sided partition of the vertices; `true` marks membership in S.
#[derive(Clone, Debug)]
pub struct PartitionSolution {
    membership: Vec<bool>,
    objective: Option<Objective>,
}

impl PartitionSolution {
    pub fn new(membership: Vec<bool>) -> Self {
        Self {
            membership,
            objective: None,
        }
    }

    /// Parses a string of `0`/`1` characters.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let membership = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidSolution(format!("unexpected bit {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(membership))
    }

    pub fn membership(&self) -> &[bool] {
        &self.membership
    }

    pub fn side(&self, v: usize) -> bool {
        self.membership[v]
    }

    pub fn flip(&mut self, v: usize) {
        self.membership[v] = !self.membership[v];
        self.objective = None;
    }

    pub fn complement(&self) -> Self {
        Self::new(self.membership.iter().map(|b| !b).collect())
    }
}

impl PartialEq for PartitionSolution {
    fn eq(&self, other: &Self) -> bool {
        self.membership == other.membership
    }
}

impl Eq for PartitionSolution {}

impl Hash for PartitionSolution {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.membership.hash(state);
    }
}

impl Solution for PartitionSolution {
    fn len(&self) -> usize {
        self.membership.len()
    }

    fn objective(&self) -> Option<Objective> {
        self.objective
    }

    fn set_objective(&mut self, value: Objective) {
        self.objective = Some(value);
    }

    fn clear_objective(&mut self) {
        self.objective = None;
    }

    fn difference(&self, other: &Self) -> Vec<usize> {
        self.membership
            .iter()
            .zip(&other.membership)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(j, _)| j)
            .collect()
    }

    fn distance(&self, other: &Self) -> usize {
        assert_eq!(self.len(), other.len(), "partition length mismatch");
        self.membership
            .iter()
            .zip(&other.membership)
            .filter(|(a, b)| a != b)
            .count()
    }

    fn to_line(&self) -> String {
        self.membership
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }
}
