//! Labeled outcome spaces.
//!
//! Every distribution, channel and code in the crate carries its outcome
//! labels so that file output stays human-readable; all arithmetic happens
//! on indices.

use crate::error::{Error, Result};

/// One outcome of a finite space: its label and 0-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub label: String,
    pub index: usize,
}

/// An ordered set of uniquely labeled outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Space {
    labels: Vec<String>,
}

/// Separator used when tuple outcomes are labeled (extended channels, block codes).
pub const TUPLE_SEP: char = '\u{00b7}'; // '·'

impl Space {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::ZeroStates);
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel { label: l.clone() });
            }
        }
        Ok(Space { labels })
    }

    /// Space `{x0, x1, ..}` with generated labels, for callers that have none.
    pub fn indexed(prefix: &str, len: usize) -> Self {
        Space {
            labels: (0..len).map(|i| format!("{prefix}{i}")).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn outcome(&self, index: usize) -> Outcome {
        Outcome {
            label: self.labels[index].clone(),
            index,
        }
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel {
                label: label.to_string(),
            })
    }

    /// `n`-fold product space; tuple labels join components with [`TUPLE_SEP`].
    pub fn product(&self, n: usize) -> Space {
        assert!(n >= 1, "product space needs n >= 1");
        if n == 1 {
            return self.clone();
        }
        let mut labels = vec![String::new()];
        for _ in 0..n {
            let mut next = Vec::with_capacity(labels.len() * self.len());
            for prefix in &labels {
                for l in &self.labels {
                    if prefix.is_empty() {
                        next.push(l.clone());
                    } else {
                        next.push(format!("{prefix}{TUPLE_SEP}{l}"));
                    }
                }
            }
            labels = next;
        }
        Space { labels }
    }
}

/// Decompose a flat index of the `n`-fold product of a `base`-sized space
/// into its component indices, most significant first.
pub fn unrank_tuple(mut index: usize, base: usize, n: usize) -> Vec<usize> {
    let mut digits = vec![0usize; n];
    for d in (0..n).rev() {
        digits[d] = index % base;
        index /= base;
    }
    digits
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates() {
        assert_eq!(
            Space::new(["a", "b", "a"]).unwrap_err(),
            Error::DuplicateLabel {
                label: "a".into()
            }
        );
    }

    #[test]
    fn product_enumerates_in_row_major_order() {
        let s = Space::new(["0", "1"]).unwrap();
        let p = s.product(2);
        assert_eq!(p.labels(), &["0·0", "0·1", "1·0", "1·1"]);
        assert_eq!(unrank_tuple(2, 2, 2), vec![1, 0]);
    }

    #[test]
    fn outcome_carries_label_and_index() {
        let s = Space::new(["blue", "gray"]).unwrap();
        let o = s.outcome(1);
        assert_eq!(o.label, "gray");
        assert_eq!(o.index, 1);
        assert_eq!(s.index_of("blue").unwrap(), 0);
        assert!(s.index_of("pink").is_err());
    }
}
