use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Tolerance on `Σ p = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// A distribution over labelled outcomes, either exact or estimated from
/// counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub labels: Vec<String>,
    pub probs: Vec<f64>,
    /// Present for sampled distributions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<Vec<u64>>,
}

/// `"00", "01", "10", "11"`: `m₁m₂`.
pub fn two_bit_labels() -> Vec<String> {
    ["00", "01", "10", "11"].map(String::from).to_vec()
}

impl Distribution {
    pub fn from_probs(labels: Vec<String>, probs: Vec<f64>) -> Result<Self> {
        if labels.len() != probs.len() {
            return Err(Error::Arity {
                expected: labels.len(),
                got: probs.len(),
            });
        }
        if labels.is_empty() {
            return Err(Error::Empty("distribution without outcomes"));
        }
        let total: f64 = probs.iter().sum();
        if probs.iter().any(|&p| p.is_nan() || p < -NORMALIZATION_TOL) || (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::ParameterOutOfRange(format!(
                "probabilities must be nonnegative and sum to 1, got {probs:?}"
            )));
        }
        Ok(Distribution {
            labels,
            probs: probs.into_iter().map(|p| p.max(0.0)).collect(),
            counts: None,
        })
    }

    pub fn from_counts(labels: Vec<String>, counts: Vec<u64>) -> Result<Self> {
        let n: u64 = counts.iter().sum();
        if n == 0 {
            return Err(Error::Empty("no shots"));
        }
        let probs = counts.iter().map(|&c| c as f64 / n as f64).collect();
        let mut d = Distribution::from_probs(labels, probs)?;
        d.counts = Some(counts);
        Ok(d)
    }

    pub fn uniform(labels: Vec<String>) -> Result<Self> {
        let n = labels.len();
        Distribution::from_probs(labels, vec![1.0 / n.max(1) as f64; n])
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn shots(&self) -> Option<u64> {
        self.counts.as_ref().map(|c| c.iter().sum())
    }

    /// One-sigma Poisson error on each frequency, `√cᵢ / N`; zero for exact
    /// distributions.
    pub fn errors(&self) -> Vec<f64> {
        match &self.counts {
            Some(c) => {
                let n: u64 = c.iter().sum();
                c.iter().map(|&k| (k as f64).sqrt() / n as f64).collect()
            }
            None => vec![0.0; self.len()],
        }
    }
}

/// `Σ |pᵢ − qᵢ| / N` with `N` the number of outcomes.
pub fn avg_distance(p: &Distribution, q: &Distribution) -> Result<f64> {
    if p.labels != q.labels {
        return Err(Error::LabelMismatch);
    }
    let sum: f64 = p.probs.iter().zip(&q.probs).map(|(a, b)| (a - b).abs()).sum();
    Ok(sum / p.len() as f64)
}

pub fn distance_from_uniform(p: &Distribution) -> f64 {
    let u = 1.0 / p.len() as f64;
    p.probs.iter().map(|a| (a - u).abs()).sum::<f64>() / p.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(p: [f64; 4]) -> Distribution {
        Distribution::from_probs(two_bit_labels(), p.to_vec()).unwrap()
    }

    #[test]
    fn distance_examples() {
        let p = d([1.0, 0.0, 0.0, 0.0]);
        let u = d([0.25; 4]);
        assert_eq!(avg_distance(&p, &p).unwrap(), 0.0);
        assert!((avg_distance(&p, &u).unwrap() - 0.375).abs() < 1e-15);
        assert_eq!(avg_distance(&p, &u).unwrap(), avg_distance(&u, &p).unwrap());
        assert!((distance_from_uniform(&p) - 0.375).abs() < 1e-15);
        assert_eq!(distance_from_uniform(&u), 0.0);
    }

    #[test]
    fn validation() {
        assert!(Distribution::from_probs(two_bit_labels(), vec![0.5, 0.5, 0.1, 0.0]).is_err());
        assert!(Distribution::from_probs(two_bit_labels(), vec![1.1, -0.1, 0.0, 0.0]).is_err());
        assert!(Distribution::from_probs(two_bit_labels(), vec![f64::NAN, 1.0, 0.0, 0.0]).is_err());
        let other = Distribution::uniform(vec!["a".into(), "b".into(), "c".into(), "d".into()]).unwrap();
        assert_eq!(avg_distance(&d([0.25; 4]), &other), Err(Error::LabelMismatch));
    }

    #[test]
    fn counts_and_errors() {
        let c = Distribution::from_counts(two_bit_labels(), vec![25, 25, 0, 50]).unwrap();
        assert_eq!(c.shots(), Some(100));
        assert_eq!(c.probs, vec![0.25, 0.25, 0.0, 0.5]);
        assert!((c.errors()[3] - 50f64.sqrt() / 100.0).abs() < 1e-15);
        assert!(Distribution::from_counts(two_bit_labels(), vec![0; 4]).is_err());
    }
}
