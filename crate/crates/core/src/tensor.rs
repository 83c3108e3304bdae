//! Dense component storage for covariant tensor fields.

use std::fmt;

use rayon::prelude::*;

use crate::expr::RatFunc;

/// A (0,k) or (1,k) tensor with `n^(k + upper)` components in row-major
/// order. Indices are 0-based in the API and 1-based when printed.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorField {
    n: usize,
    lower: usize,
    upper: usize,
    comps: Vec<RatFunc>,
    label: String,
}

/// Every multi-index of the given rank over `0..n`, in lexicographic order.
pub fn multi_indices(n: usize, rank: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(rank as u32);
    (0..total).map(move |mut flat| {
        let mut idx = vec![0; rank];
        for slot in (0..rank).rev() {
            idx[slot] = flat % n;
            flat /= n;
        }
        idx
    })
}

impl TensorField {
    pub fn zeros(n: usize, lower: usize, label: impl Into<String>) -> Self {
        TensorField {
            n,
            lower,
            upper: 0,
            comps: vec![RatFunc::zero(); n.pow(lower as u32)],
            label: label.into(),
        }
    }

    /// Builds a covariant tensor by evaluating `f` at every multi-index, in
    /// parallel.
    pub fn from_fn<F>(n: usize, lower: usize, label: impl Into<String>, f: F) -> Self
    where
        F: Fn(&[usize]) -> RatFunc + Sync,
    {
        let idx: Vec<Vec<usize>> = multi_indices(n, lower).collect();
        let comps = idx.par_iter().map(|i| f(i)).collect();
        TensorField {
            n,
            lower,
            upper: 0,
            comps,
            label: label.into(),
        }
    }

    /// A (1,k) tensor; the contravariant slot is stored first.
    pub fn mixed_from_fn<F>(n: usize, lower: usize, label: impl Into<String>, f: F) -> Self
    where
        F: Fn(&[usize]) -> RatFunc + Sync,
    {
        let mut t = TensorField::from_fn(n, lower + 1, label, f);
        t.lower = lower;
        t.upper = 1;
        t
    }

    pub fn from_components(
        n: usize,
        lower: usize,
        comps: Vec<RatFunc>,
        label: impl Into<String>,
    ) -> Self {
        assert_eq!(
            comps.len(),
            n.pow(lower as u32),
            "component count does not match valence"
        );
        TensorField {
            n,
            lower,
            upper: 0,
            comps,
            label: label.into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of covariant slots.
    pub fn rank(&self) -> usize {
        self.lower
    }

    pub fn is_mixed(&self) -> bool {
        self.upper == 1
    }

    pub fn total_rank(&self) -> usize {
        self.lower + self.upper
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn components(&self) -> &[RatFunc] {
        &self.comps
    }

    fn flat(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.total_rank());
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.n);
            acc * self.n + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> &RatFunc {
        &self.comps[self.flat(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: RatFunc) {
        let k = self.flat(idx);
        self.comps[k] = value;
    }

    pub fn indices(&self) -> impl Iterator<Item = Vec<usize>> {
        multi_indices(self.n, self.total_rank())
    }

    /// Nonzero components with their indices, in lexicographic order.
    pub fn nonzero(&self) -> Vec<(Vec<usize>, &RatFunc)> {
        self.indices()
            .zip(self.comps.iter())
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(RatFunc::is_zero)
    }

    fn zip_with(
        &self,
        other: &TensorField,
        f: impl Fn(&RatFunc, &RatFunc) -> RatFunc + Sync,
    ) -> TensorField {
        assert_eq!(
            (self.n, self.lower, self.upper),
            (other.n, other.lower, other.upper)
        );
        let comps = self
            .comps
            .par_iter()
            .zip(other.comps.par_iter())
            .map(|(a, b)| f(a, b))
            .collect();
        TensorField {
            comps,
            ..self.clone()
        }
    }

    pub fn add(&self, other: &TensorField) -> TensorField {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &TensorField) -> TensorField {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, k: &RatFunc) -> TensorField {
        let comps = self.comps.par_iter().map(|c| c * k).collect();
        TensorField {
            comps,
            ..self.clone()
        }
    }

    /// First index where the two tensors differ.
    pub fn first_difference(&self, other: &TensorField) -> Option<Vec<usize>> {
        self.indices()
            .zip(self.comps.iter().zip(other.comps.iter()))
            .find(|(_, (a, b))| !(*a - *b).is_zero())
            .map(|(i, _)| i)
    }
}

/// 1-based rendering of a multi-index, e.g. `2,3,2,3`.
pub fn format_index(idx: &[usize]) -> String {
    idx.iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Debug for TensorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} (n = {}, rank = {})",
            self.label,
            self.n,
            self.total_rank()
        )?;
        for (idx, c) in self.nonzero() {
            writeln!(f, "  [{}] = {c}", format_index(&idx))?;
        }
        Ok(())
    }
}
