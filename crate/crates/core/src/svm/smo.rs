//! Soft-margin binary SVM trained by SMO.
//!
//! Solves the dual
//!
//! ```text
//! min_α  ½ αᵀQα − eᵀα   s.t.  yᵀα = 0,  0 ≤ α_i ≤ C,   Q_ij = y_i y_j K(x_i, x_j)
//! ```
//!
//! two multipliers at a time. The first index maximizes the KKT violation,
//! the second is chosen by the second-order gain `−(grad diff)² / curvature`.
//! Iteration stops once the maximal violating pair is within `tol`.

use std::collections::HashMap;

use crate::error::{Error, Result};

use super::kernel::KernelSpec;

const TAU: f64 = 1e-12;
/// Multipliers at or below this magnitude are dropped from the model.
pub const SV_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SmoParams {
    pub c: f64,
    pub tol: f64,
    /// Iteration cap is `max_passes · n` (at least 10 000).
    pub max_passes: usize,
    /// Kernel row cache budget in MiB.
    pub cache_mb: usize,
}

impl Default for SmoParams {
    fn default() -> Self {
        Self {
            c: 32.0,
            tol: 1e-3,
            max_passes: 100,
            cache_mb: 64,
        }
    }
}

impl SmoParams {
    pub fn with_c(c: f64) -> Self {
        Self {
            c,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.c > 0.0) || !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "C ({}) and tol ({}) must be positive",
                self.c, self.tol
            )));
        }
        Ok(())
    }
}

/// Trained two-class decision function `b + Σ alphas[i]·K(sv[i], x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryModel {
    pub support_vectors: Vec<Vec<f32>>,
    /// Signed multipliers `α_i·y_i`.
    pub alphas: Vec<f64>,
    pub bias: f64,
    /// Class indices of the owning multiclass model; the positive side is
    /// `class_pair.0`. Standalone models use `(0, 1)`.
    pub class_pair: (usize, usize),
}

impl BinaryModel {
    pub fn dim(&self) -> Option<usize> {
        self.support_vectors.first().map(Vec::len)
    }

    /// Pre-sign decision value.
    pub fn decision_value(&self, kernel: &KernelSpec, x: &[f32]) -> Result<f64> {
        if let Some(d) = self.dim() {
            if d != x.len() {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: x.len(),
                });
            }
        }
        Ok(self.decision_unchecked(kernel, x))
    }

    pub(crate) fn decision_unchecked(&self, kernel: &KernelSpec, x: &[f32]) -> f64 {
        self.bias
            + self
                .support_vectors
                .iter()
                .zip(&self.alphas)
                .map(|(sv, a)| a * kernel.eval(sv, x))
                .sum::<f64>()
    }
}

pub fn decision_value(model: &BinaryModel, kernel: &KernelSpec, x: &[f32]) -> Result<f64> {
    model.decision_value(kernel, x)
}

/// Full solver output, including multipliers for non-support samples.
#[derive(Debug, Clone)]
pub struct DualSolution {
    /// Unsigned multipliers, one per training sample.
    pub alpha: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Trains a binary model. `labels` must be `+1`/`-1`.
pub fn train_binary(
    samples: &[&[f32]],
    labels: &[i8],
    kernel: &KernelSpec,
    params: &SmoParams,
) -> Result<BinaryModel> {
    let (model, _) = train_binary_detailed(samples, labels, kernel, params)?;
    Ok(model)
}

pub fn train_binary_detailed(
    samples: &[&[f32]],
    labels: &[i8],
    kernel: &KernelSpec,
    params: &SmoParams,
) -> Result<(BinaryModel, DualSolution)> {
    kernel.validate()?;
    params.validate()?;
    if samples.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: samples.len(),
            actual: labels.len(),
        });
    }
    if let Some(bad) = labels.iter().find(|&&y| y != 1 && y != -1) {
        return Err(Error::InvalidParameter(format!(
            "binary label {bad} is not ±1"
        )));
    }
    if !labels.contains(&1) || !labels.contains(&-1) {
        return Err(Error::SingleClassData);
    }
    let dim = samples[0].len();
    for (i, s) in samples.iter().enumerate() {
        if s.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: s.len(),
            });
        }
        if s.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteFeature(i));
        }
    }

    let solution = Solver::new(samples, labels, kernel, params).solve();
    let mut model = BinaryModel {
        support_vectors: Vec::new(),
        alphas: Vec::new(),
        bias: solution.bias,
        class_pair: (0, 1),
    };
    for (i, &a) in solution.alpha.iter().enumerate() {
        if a > SV_EPS {
            model.support_vectors.push(samples[i].to_vec());
            model.alphas.push(a * labels[i] as f64);
        }
    }
    Ok((model, solution))
}

struct KernelCache<'a> {
    samples: &'a [&'a [f32]],
    kernel: &'a KernelSpec,
    rows: HashMap<usize, (Vec<f64>, u64)>,
    capacity: usize,
    clock: u64,
}

impl<'a> KernelCache<'a> {
    fn new(samples: &'a [&'a [f32]], kernel: &'a KernelSpec, budget_mb: usize) -> Self {
        let row_bytes = (samples.len() * 8).max(1);
        let capacity = (budget_mb * 1024 * 1024 / row_bytes).max(2);
        Self {
            samples,
            kernel,
            rows: HashMap::new(),
            capacity,
            clock: 0,
        }
    }

    fn row(&mut self, i: usize) -> &[f64] {
        self.clock += 1;
        let clock = self.clock;
        if !self.rows.contains_key(&i) {
            if self.rows.len() >= self.capacity {
                let oldest = *self
                    .rows
                    .iter()
                    .min_by_key(|(_, (_, stamp))| *stamp)
                    .map(|(k, _)| k)
                    .expect("non-empty cache");
                self.rows.remove(&oldest);
            }
            let xi = self.samples[i];
            let row = self
                .samples
                .iter()
                .map(|xj| self.kernel.eval(xi, xj))
                .collect();
            self.rows.insert(i, (row, clock));
        }
        let entry = self.rows.get_mut(&i).expect("just inserted");
        entry.1 = clock;
        &entry.0
    }
}

struct Solver<'a> {
    y: Vec<f64>,
    c: f64,
    tol: f64,
    max_iter: usize,
    alpha: Vec<f64>,
    grad: Vec<f64>,
    diag: Vec<f64>,
    cache: KernelCache<'a>,
}

impl<'a> Solver<'a> {
    fn new(
        samples: &'a [&'a [f32]],
        labels: &[i8],
        kernel: &'a KernelSpec,
        params: &SmoParams,
    ) -> Self {
        let n = samples.len();
        Self {
            y: labels.iter().map(|&l| l as f64).collect(),
            c: params.c,
            tol: params.tol,
            max_iter: params.max_passes.saturating_mul(n).max(10_000),
            alpha: vec![0.0; n],
            grad: vec![-1.0; n],
            diag: samples.iter().map(|x| kernel.eval(x, x)).collect(),
            cache: KernelCache::new(samples, kernel, params.cache_mb),
        }
    }

    fn in_up(&self, t: usize) -> bool {
        if self.y[t] > 0.0 {
            self.alpha[t] < self.c
        } else {
            self.alpha[t] > 0.0
        }
    }

    fn in_low(&self, t: usize) -> bool {
        if self.y[t] > 0.0 {
            self.alpha[t] > 0.0
        } else {
            self.alpha[t] < self.c
        }
    }

    /// Returns the working pair, or `None` when optimal within `tol`.
    fn select_working_set(&mut self) -> Option<(usize, usize)> {
        let n = self.alpha.len();
        let mut gmax = f64::NEG_INFINITY;
        let mut i = None;
        for t in 0..n {
            if self.in_up(t) {
                let v = -self.y[t] * self.grad[t];
                if v >= gmax {
                    gmax = v;
                    i = Some(t);
                }
            }
        }
        let i = i?;
        let kii = self.diag[i];
        let row_i = self.cache.row(i).to_vec();

        let mut gmin = f64::INFINITY;
        let mut best = f64::INFINITY;
        let mut j = None;
        for t in 0..n {
            if !self.in_low(t) {
                continue;
            }
            let v = -self.y[t] * self.grad[t];
            gmin = gmin.min(v);
            let grad_diff = gmax - v;
            if grad_diff > 0.0 {
                let mut curvature = kii + self.diag[t] - 2.0 * row_i[t];
                if curvature <= 0.0 {
                    curvature = TAU;
                }
                let gain = -(grad_diff * grad_diff) / curvature;
                if gain <= best {
                    best = gain;
                    j = Some(t);
                }
            }
        }
        if gmax - gmin < self.tol {
            return None;
        }
        j.map(|j| (i, j))
    }

    fn solve(mut self) -> DualSolution {
        let mut iterations = 0;
        let mut converged = false;
        while iterations < self.max_iter {
            let Some((i, j)) = self.select_working_set() else {
                converged = true;
                break;
            };
            iterations += 1;
            self.update_pair(i, j);
        }
        let bias = self.bias();
        DualSolution {
            alpha: self.alpha,
            bias,
            iterations,
            converged,
        }
    }

    fn update_pair(&mut self, i: usize, j: usize) {
        let c = self.c;
        let (yi, yj) = (self.y[i], self.y[j]);
        let row_i = self.cache.row(i).to_vec();
        let row_j = self.cache.row(j).to_vec();
        let kij = row_i[j];
        let mut curvature = self.diag[i] + self.diag[j] - 2.0 * kij;
        if curvature <= 0.0 {
            curvature = TAU;
        }
        let (old_i, old_j) = (self.alpha[i], self.alpha[j]);
        let (mut ai, mut aj) = (old_i, old_j);

        if yi != yj {
            let delta = (-self.grad[i] - self.grad[j]) / curvature;
            let diff = ai - aj;
            ai += delta;
            aj += delta;
            if diff > 0.0 {
                if aj < 0.0 {
                    aj = 0.0;
                    ai = diff;
                }
            } else if ai < 0.0 {
                ai = 0.0;
                aj = -diff;
            }
            if diff > 0.0 {
                if ai > c {
                    ai = c;
                    aj = c - diff;
                }
            } else if aj > c {
                aj = c;
                ai = c + diff;
            }
        } else {
            let delta = (self.grad[i] - self.grad[j]) / curvature;
            let sum = ai + aj;
            ai -= delta;
            aj += delta;
            if sum > c {
                if ai > c {
                    ai = c;
                    aj = sum - c;
                }
            } else if aj < 0.0 {
                aj = 0.0;
                ai = sum;
            }
            if sum > c {
                if aj > c {
                    aj = c;
                    ai = sum - c;
                }
            } else if ai < 0.0 {
                ai = 0.0;
                aj = sum;
            }
        }
        self.alpha[i] = ai;
        self.alpha[j] = aj;

        let (di, dj) = (ai - old_i, aj - old_j);
        for t in 0..self.grad.len() {
            let yt = self.y[t];
            self.grad[t] += yt * (yi * row_i[t] * di + yj * row_j[t] * dj);
        }
    }

    fn bias(&self) -> f64 {
        let mut upper = f64::INFINITY;
        let mut lower = f64::NEG_INFINITY;
        let mut free_sum = 0.0;
        let mut n_free = 0usize;
        for t in 0..self.alpha.len() {
            let v = -self.y[t] * self.grad[t];
            let at_lower = self.alpha[t] <= 0.0;
            let at_upper = self.alpha[t] >= self.c;
            if !at_lower && !at_upper {
                free_sum += v;
                n_free += 1;
            } else if (at_lower && self.y[t] > 0.0) || (at_upper && self.y[t] < 0.0) {
                // I_up only: b must be at least v.
                lower = lower.max(v);
            } else {
                upper = upper.min(v);
            }
        }
        if n_free > 0 {
            free_sum / n_free as f64
        } else {
            (upper + lower) / 2.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn refs(points: &[[f32; 2]]) -> Vec<&[f32]> {
        points.iter().map(|p| p.as_slice()).collect()
    }

    #[test]
    fn two_point_midpoint() {
        let pts = [[0.0f32, 0.0], [2.0, 0.0]];
        let params = SmoParams {
            c: 1e6,
            ..SmoParams::default()
        };
        let k = KernelSpec::linear();
        let m = train_binary(&refs(&pts), &[-1, 1], &k, &params).unwrap();
        assert!(m.decision_value(&k, &[1.0, 0.0]).unwrap().abs() < 1e-3);
        assert!(m.decision_value(&k, &[0.0, 0.0]).unwrap() < 0.0);
        assert!(m.decision_value(&k, &[2.0, 0.0]).unwrap() > 0.0);
    }

    #[test]
    fn xor_with_rbf() {
        let pts = [[0.0f32, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
        let labels = [-1, -1, 1, 1];
        let k = KernelSpec::rbf(1.0);
        let m = train_binary(&refs(&pts), &labels, &k, &SmoParams::with_c(10.0)).unwrap();
        for (p, &y) in pts.iter().zip(&labels) {
            let d = m.decision_value(&k, p).unwrap();
            assert!(d * y as f64 > 0.0, "{p:?} -> {d}");
        }
        assert!(m.decision_value(&k, &[0.0, 0.0]).unwrap() < 0.0);
    }

    #[test]
    fn empty_support_set_returns_bias() {
        let m = BinaryModel {
            support_vectors: vec![],
            alphas: vec![],
            bias: 0.7,
            class_pair: (0, 1),
        };
        assert_eq!(
            m.decision_value(&KernelSpec::linear(), &[1.0, 2.0])
                .unwrap(),
            0.7
        );
    }

    #[test]
    fn single_sv_linear() {
        let m = BinaryModel {
            support_vectors: vec![vec![1.0, 2.0, 3.0]],
            alphas: vec![1.0],
            bias: 0.5,
            class_pair: (0, 1),
        };
        let v = m
            .decision_value(&KernelSpec::linear(), &[1.0, 2.0, 3.0])
            .unwrap();
        assert_eq!(v, 0.5 + 14.0);
        assert!(m.decision_value(&KernelSpec::linear(), &[1.0]).is_err());
    }

    #[test]
    fn error_paths() {
        let pts = [[0.0f32, 0.0], [1.0, 1.0]];
        let k = KernelSpec::linear();
        let p = SmoParams::default();
        assert!(matches!(
            train_binary(&refs(&pts), &[1, 1], &k, &p),
            Err(Error::SingleClassData)
        ));
        let nan = [[f32::NAN, 0.0], [1.0, 1.0]];
        assert!(matches!(
            train_binary(&refs(&nan), &[1, -1], &k, &p),
            Err(Error::NonFiniteFeature(0))
        ));
    }

    #[test]
    fn multipliers_respect_box_and_equality() {
        let pts: Vec<[f32; 2]> = (0..30)
            .map(|i| {
                let t = i as f32 * 0.37;
                [t.sin() * 2.0, (t * 1.7).cos() * 2.0]
            })
            .collect();
        let labels: Vec<i8> = pts
            .iter()
            .map(|p| if p[0] * p[1] > 0.2 { 1 } else { -1 })
            .collect();
        let params = SmoParams::with_c(5.0);
        let (m, sol) =
            train_binary_detailed(&refs(&pts), &labels, &KernelSpec::rbf(0.8), &params).unwrap();
        assert!(sol.converged);
        assert!(m.alphas.iter().all(|a| a.abs() <= params.c + 1e-12));
        assert!(m.alphas.iter().sum::<f64>().abs() < 1e-6);
    }

    #[test]
    fn tiny_cache_gives_same_model() {
        let pts: Vec<[f32; 2]> = (0..40).map(|i| [(i % 7) as f32, (i / 7) as f32]).collect();
        let labels: Vec<i8> = pts
            .iter()
            .map(|p| if p[0] + p[1] > 5.0 { 1 } else { -1 })
            .collect();
        let k = KernelSpec::rbf(0.3);
        let big = train_binary(&refs(&pts), &labels, &k, &SmoParams::default()).unwrap();
        let small = SmoParams {
            cache_mb: 0,
            ..SmoParams::default()
        };
        let small = train_binary(&refs(&pts), &labels, &k, &small).unwrap();
        assert_eq!(big, small);
    }
}
