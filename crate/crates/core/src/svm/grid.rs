//! Cross-validated grid search over `C` and RBF `gamma`.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};

use super::kernel::KernelSpec;
use super::multiclass::{accuracy, train_multiclass};
use super::smo::SmoParams;

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub c_values: Vec<f64>,
    /// Multiplied by `1 / dim` to give the RBF gamma.
    pub gamma_scales: Vec<f64>,
    pub folds: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            c_values: vec![1.0, 8.0, 32.0, 128.0],
            gamma_scales: vec![0.25, 1.0, 4.0],
            folds: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub c: f64,
    pub gamma: f64,
    pub cv_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    /// In grid order (`C`-major).
    pub points: Vec<GridPoint>,
    pub best: GridPoint,
}

/// Fold of each sample: its rank within its own class, modulo `folds`.
pub fn stratified_folds(labels: &[&str], folds: usize) -> Vec<usize> {
    let mut seen: HashMap<&str, usize> = HashMap::new();
    labels
        .iter()
        .map(|l| {
            let rank = seen.entry(l).or_insert(0);
            let fold = *rank % folds;
            *rank += 1;
            fold
        })
        .collect()
}

/// Evaluates every grid point by k-fold CV; the best point is the first
/// with maximal accuracy in grid order.
pub fn grid_search(
    features: &[&[f32]],
    labels: &[&str],
    grid: &GridSpec,
    base: &SmoParams,
) -> Result<GridResult> {
    if grid.folds < 2 {
        return Err(Error::InvalidParameter(
            "grid search needs at least 2 folds".into(),
        ));
    }
    let dim = features.first().map_or(0, |f| f.len());
    if dim == 0 {
        return Err(Error::EmptyTestSet);
    }
    let fold_of = stratified_folds(labels, grid.folds);
    let points: Vec<(f64, f64)> = grid
        .c_values
        .iter()
        .flat_map(|&c| grid.gamma_scales.iter().map(move |&g| (c, g / dim as f64)))
        .collect();

    let scored = points
        .par_iter()
        .map(|&(c, gamma)| {
            let params = SmoParams { c, ..base.clone() };
            let kernel = KernelSpec::rbf(gamma);
            let mut correct = 0.0;
            let mut total = 0usize;
            for fold in 0..grid.folds {
                let (mut tx, mut ty, mut vx, mut vy) = (vec![], vec![], vec![], vec![]);
                for (i, &f) in fold_of.iter().enumerate() {
                    if f == fold {
                        vx.push(features[i]);
                        vy.push(labels[i]);
                    } else {
                        tx.push(features[i]);
                        ty.push(labels[i]);
                    }
                }
                if vx.is_empty() {
                    continue;
                }
                let model = train_multiclass(&tx, &ty, &kernel, &params)?;
                correct += accuracy(&model, &vx, &vy)? * vx.len() as f64;
                total += vx.len();
            }
            Ok(GridPoint {
                c,
                gamma,
                cv_accuracy: correct / total.max(1) as f64,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let best = scored
        .iter()
        .fold(None::<&GridPoint>, |best, p| match best {
            Some(b) if b.cv_accuracy >= p.cv_accuracy => Some(b),
            _ => Some(p),
        })
        .cloned()
        .expect("non-empty grid");
    Ok(GridResult {
        points: scored,
        best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folds_are_stratified() {
        let labels = ["a", "b", "a", "a", "b", "a"];
        assert_eq!(stratified_folds(&labels, 2), vec![0, 0, 1, 0, 1, 1]);
    }

    #[test]
    fn picks_a_working_point_on_separable_blobs() {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..30 {
            let t = i as f32 * 0.21;
            let (cls, cx) = match i % 3 {
                0 => ("a", 0.0),
                1 => ("b", 3.0),
                _ => ("c", 6.0),
            };
            xs.push(vec![cx + 0.3 * t.sin(), 0.3 * t.cos()]);
            ys.push(cls);
        }
        let refs: Vec<&[f32]> = xs.iter().map(|x| x.as_slice()).collect();
        let grid = GridSpec {
            c_values: vec![1.0, 32.0],
            gamma_scales: vec![1.0],
            folds: 3,
        };
        let r = grid_search(&refs, &ys, &grid, &SmoParams::default()).unwrap();
        assert_eq!(r.points.len(), 2);
        assert_eq!(r.best.cv_accuracy, 1.0);
        assert_eq!(r.best.c, 1.0);
    }
}
