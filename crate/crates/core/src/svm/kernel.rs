use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    Rbf,
    Polynomial,
    Linear,
}

impl KernelKind {
    pub fn name(self) -> &'static str {
        match self {
            KernelKind::Rbf => "rbf",
            KernelKind::Polynomial => "polynomial",
            KernelKind::Linear => "linear",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "rbf" => Ok(KernelKind::Rbf),
            "polynomial" | "poly" => Ok(KernelKind::Polynomial),
            "linear" => Ok(KernelKind::Linear),
            other => Err(Error::InvalidParameter(format!("unknown kernel {other:?}"))),
        }
    }
}

/// Kernel function and its parameters.
///
/// * rbf: `exp(-gamma·|x - y|²)`
/// * polynomial: `(x·y + coef0)^degree`
/// * linear: `x·y`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub gamma: f64,
    pub degree: u32,
    pub coef0: f64,
}

impl KernelSpec {
    pub fn rbf(gamma: f64) -> Self {
        Self {
            kind: KernelKind::Rbf,
            gamma,
            degree: 3,
            coef0: 1.0,
        }
    }

    pub fn polynomial(degree: u32, coef0: f64) -> Self {
        Self {
            kind: KernelKind::Polynomial,
            gamma: 1.0,
            degree,
            coef0,
        }
    }

    pub fn linear() -> Self {
        Self {
            kind: KernelKind::Linear,
            gamma: 1.0,
            degree: 1,
            coef0: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            KernelKind::Rbf if !(self.gamma > 0.0 && self.gamma.is_finite()) => Err(
                Error::InvalidParameter(format!("rbf gamma must be positive, got {}", self.gamma)),
            ),
            KernelKind::Polynomial if self.degree == 0 => Err(Error::InvalidParameter(
                "polynomial degree must be positive".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Unchecked evaluation; slices must have equal length.
    #[inline]
    pub fn eval(&self, x: &[f32], y: &[f32]) -> f64 {
        debug_assert_eq!(x.len(), y.len());
        match self.kind {
            KernelKind::Rbf => {
                let d2: f64 = x
                    .iter()
                    .zip(y)
                    .map(|(&a, &b)| {
                        let d = a as f64 - b as f64;
                        d * d
                    })
                    .sum();
                (-self.gamma * d2).exp()
            }
            KernelKind::Polynomial => (dot(x, y) + self.coef0).powi(self.degree as i32),
            KernelKind::Linear => dot(x, y),
        }
    }
}

#[inline]
fn dot(x: &[f32], y: &[f32]) -> f64 {
    x.iter().zip(y).map(|(&a, &b)| a as f64 * b as f64).sum()
}

pub fn kernel_eval(spec: &KernelSpec, x: &[f32], y: &[f32]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    Ok(spec.eval(x, y))
}
