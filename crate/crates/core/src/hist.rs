//! Equal-width histograms with exact big-integer counts and floating-point
//! probability mass, shared by the typicality and channel-spectrum reports.

use num_bigint::BigUint;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    /// `bins + 1` edges; bin `i` covers `[edges[i], edges[i+1])`, last bin closed.
    pub edges: Vec<f64>,
    /// Exact number of items per bin.
    pub counts: Vec<BigUint>,
    /// Probability mass per bin.
    pub masses: Vec<f64>,
}

impl Histogram {
    /// Build from `(value, count, mass)` triples over `bins` equal-width bins
    /// spanning the observed value range. A degenerate range widens to one
    /// unit so the histogram stays well formed.
    pub fn build(items: &[(f64, BigUint, f64)], bins: usize) -> Histogram {
        assert!(bins >= 1, "histogram needs at least one bin");
        let finite: Vec<f64> = items
            .iter()
            .map(|&(v, _, _)| v)
            .filter(|v| v.is_finite())
            .collect();
        let (mut lo, mut hi) = finite.iter().fold(
            (f64::INFINITY, f64::NEG_INFINITY),
            |(lo, hi), &v| (lo.min(v), hi.max(v)),
        );
        if finite.is_empty() {
            (lo, hi) = (0.0, 1.0);
        } else if lo == hi {
            lo -= 0.5;
            hi += 0.5;
        }
        let width = (hi - lo) / bins as f64;
        let edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
        let mut counts = vec![BigUint::zero(); bins];
        let mut masses = vec![0.0; bins];
        for (value, count, mass) in items {
            if !value.is_finite() {
                continue;
            }
            let mut bin = ((value - lo) / width) as usize;
            if bin >= bins {
                bin = bins - 1;
            }
            counts[bin] += count;
            masses[bin] += mass;
        }
        Histogram {
            edges,
            counts,
            masses,
        }
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn bins_cover_range_and_keep_totals() {
        let items: Vec<(f64, BigUint, f64)> = (0..10)
            .map(|i| (i as f64, BigUint::one(), 0.1))
            .collect();
        let h = Histogram::build(&items, 4);
        assert_eq!(h.bins(), 4);
        let total: BigUint = h.counts.iter().sum();
        assert_eq!(total, BigUint::from(10u32));
        assert!((h.masses.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(h.edges.first().copied(), Some(0.0));
        assert_eq!(h.edges.last().copied(), Some(9.0));
    }

    #[test]
    fn degenerate_range_widens() {
        let items = [(2.0, BigUint::one(), 1.0)];
        let h = Histogram::build(&items, 8);
        assert_eq!(h.edges.first().copied(), Some(1.5));
        assert_eq!(h.edges.last().copied(), Some(2.5));
    }
}
