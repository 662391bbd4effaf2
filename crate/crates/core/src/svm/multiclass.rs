use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};

use super::kernel::KernelSpec;
use super::smo::{train_binary, BinaryModel, SmoParams};

/// Per-dimension min/max recorded on the training set; maps features to
/// `[0, 1]` on that set. Constant dimensions map to 0.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureScaling {
    pub ranges: Vec<(f64, f64)>,
}

impl FeatureScaling {
    pub fn fit(samples: &[&[f32]]) -> Self {
        let dim = samples.first().map_or(0, |s| s.len());
        let mut ranges = vec![(f64::INFINITY, f64::NEG_INFINITY); dim];
        for s in samples {
            for (r, &v) in ranges.iter_mut().zip(s.iter()) {
                let v = v as f64;
                r.0 = r.0.min(v);
                r.1 = r.1.max(v);
            }
        }
        Self { ranges }
    }

    /// No-op scaling for `dim` dimensions.
    pub fn identity(dim: usize) -> Self {
        Self {
            ranges: vec![(0.0, 1.0); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.ranges.len()
    }

    pub fn apply(&self, x: &[f32]) -> Vec<f32> {
        x.iter()
            .zip(&self.ranges)
            .map(|(&v, &(lo, hi))| {
                if hi > lo {
                    ((v as f64 - lo) / (hi - lo)) as f32
                } else {
                    0.0
                }
            })
            .collect()
    }
}

/// One-against-one ensemble over lexicographically ordered class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct MulticlassModel {
    pub classes: Vec<String>,
    /// Pairs `(a, b)` with `a < b`, in `(0,1), (0,2), …, (k-2,k-1)` order.
    pub binaries: Vec<BinaryModel>,
    pub kernel: KernelSpec,
    pub scaling: FeatureScaling,
}

/// Vote tally for one prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub class_index: usize,
    pub votes: Vec<u32>,
    pub decisions: Vec<f64>,
}

pub fn pair_count(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// Trains `k(k−1)/2` binary models after rescaling every feature to `[0, 1]`.
pub fn train_multiclass(
    features: &[&[f32]],
    labels: &[&str],
    kernel: &KernelSpec,
    params: &SmoParams,
) -> Result<MulticlassModel> {
    train_multiclass_with(features, labels, kernel, params, true)
}

/// As [`train_multiclass`], optionally skipping feature scaling.
pub fn train_multiclass_with(
    features: &[&[f32]],
    labels: &[&str],
    kernel: &KernelSpec,
    params: &SmoParams,
    scale_features: bool,
) -> Result<MulticlassModel> {
    if features.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: features.len(),
            actual: labels.len(),
        });
    }
    let mut by_class: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        by_class.entry(l).or_default().push(i);
    }
    if by_class.len() < 2 {
        return Err(Error::FewerThanTwoClasses(by_class.len()));
    }
    let dim = features[0].len();
    if let Some(bad) = features.iter().find(|f| f.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: bad.len(),
        });
    }

    let scaling = if scale_features {
        FeatureScaling::fit(features)
    } else {
        FeatureScaling::identity(dim)
    };
    let scaled: Vec<Vec<f32>> = features.iter().map(|f| scaling.apply(f)).collect();
    let members: Vec<&Vec<usize>> = by_class.values().collect();
    let classes: Vec<String> = by_class.keys().map(|s| s.to_string()).collect();
    let k = classes.len();

    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
        .collect();
    let binaries = pairs
        .par_iter()
        .map(|&(a, b)| {
            let mut xs: Vec<&[f32]> = Vec::with_capacity(members[a].len() + members[b].len());
            let mut ys: Vec<i8> = Vec::with_capacity(xs.capacity());
            for &i in members[a] {
                xs.push(&scaled[i]);
                ys.push(1);
            }
            for &i in members[b] {
                xs.push(&scaled[i]);
                ys.push(-1);
            }
            let mut model = train_binary(&xs, &ys, kernel, params)?;
            model.class_pair = (a, b);
            Ok(model)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(MulticlassModel {
        classes,
        binaries,
        kernel: *kernel,
        scaling,
    })
}

impl MulticlassModel {
    pub fn dim(&self) -> usize {
        self.scaling.dim()
    }

    /// Majority vote; ties go to the label whose won votes carry the larger
    /// total `|decision|`, then to the lexicographically smaller label.
    pub fn predict_detailed(&self, x: &[f32]) -> Result<Prediction> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: x.len(),
            });
        }
        let scaled = self.scaling.apply(x);
        let k = self.classes.len();
        let mut votes = vec![0u32; k];
        let mut strength = vec![0.0f64; k];
        let mut decisions = Vec::with_capacity(self.binaries.len());
        for m in &self.binaries {
            let d = m.decision_unchecked(&self.kernel, &scaled);
            let winner = if d > 0.0 {
                m.class_pair.0
            } else {
                m.class_pair.1
            };
            votes[winner] += 1;
            strength[winner] += d.abs();
            decisions.push(d);
        }
        let mut best = 0;
        for c in 1..k {
            let better =
                votes[c] > votes[best] || (votes[c] == votes[best] && strength[c] > strength[best]);
            if better {
                best = c;
            }
        }
        Ok(Prediction {
            class_index: best,
            votes,
            decisions,
        })
    }

    pub fn predict(&self, x: &[f32]) -> Result<&str> {
        let p = self.predict_detailed(x)?;
        Ok(&self.classes[p.class_index])
    }
}

pub fn predict<'m>(model: &'m MulticlassModel, x: &[f32]) -> Result<&'m str> {
    model.predict(x)
}

/// Fraction of exact label matches.
pub fn accuracy(model: &MulticlassModel, features: &[&[f32]], labels: &[&str]) -> Result<f64> {
    if features.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    let mut correct = 0usize;
    for (x, y) in features.iter().zip(labels) {
        if model.predict(x)? == *y {
            correct += 1;
        }
    }
    Ok(correct as f64 / features.len() as f64)
}

/// `|correct| / |total|` over already-predicted labels.
pub fn accuracy_of<S: AsRef<str>, T: AsRef<str>>(predicted: &[S], truth: &[T]) -> Result<f64> {
    if truth.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    let correct = predicted
        .iter()
        .zip(truth)
        .filter(|(p, t)| p.as_ref() == t.as_ref())
        .count();
    Ok(correct as f64 / truth.len() as f64)
}
