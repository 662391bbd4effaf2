use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Parameters of a `scales x orientations` Gabor filter bank.
#[derive(Debug, Clone, PartialEq)]
pub struct GaborParams {
    pub scales: usize,
    pub orientations: usize,
    /// Window height, odd.
    pub win_h: usize,
    /// Window width, odd.
    pub win_w: usize,
    /// Central frequency of scale 0, cycles/pixel.
    pub f_max: f64,
    /// Ratio between successive scale frequencies.
    pub scale_factor: f64,
    /// Spatial aspect ratio.
    pub gamma: f64,
    /// Half-magnitude bandwidth in octaves; sets the Gaussian width.
    pub bandwidth: f64,
    /// Phase offset, radians.
    pub phi: f64,
    /// Subtract the mean of each kernel's real part.
    pub dc_correct: bool,
}

impl Default for GaborParams {
    fn default() -> Self {
        Self {
            scales: 4,
            orientations: 5,
            win_h: 23,
            win_w: 23,
            f_max: 0.25,
            scale_factor: std::f64::consts::SQRT_2,
            gamma: 0.5,
            bandwidth: 1.0,
            phi: 0.0,
            dc_correct: true,
        }
    }
}

impl GaborParams {
    /// Bank with the given (scales, orientations) and default everything else.
    pub fn with_shape(scales: usize, orientations: usize) -> Self {
        Self {
            scales,
            orientations,
            ..Self::default()
        }
    }

    pub fn n_filters(&self) -> usize {
        self.scales * self.orientations
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.scales == 0 || self.orientations == 0 {
            return bad(format!("empty bank {}x{}", self.scales, self.orientations));
        }
        if self.win_h % 2 == 0 || self.win_w % 2 == 0 {
            return bad(format!("window {}x{} must be odd", self.win_h, self.win_w));
        }
        if !(self.f_max > 0.0 && self.f_max <= 0.5) {
            return bad(format!("f_max {} outside (0, 0.5]", self.f_max));
        }
        if !(self.scale_factor > 1.0) {
            return bad(format!("scale_factor {} must exceed 1", self.scale_factor));
        }
        if !(self.gamma > 0.0) || !(self.bandwidth > 0.0) || !self.phi.is_finite() {
            return bad("gamma and bandwidth must be positive, phi finite".into());
        }
        Ok(())
    }

    pub fn frequency(&self, scale: usize) -> f64 {
        self.f_max / self.scale_factor.powi(scale as i32)
    }

    pub fn orientation(&self, orient: usize) -> f64 {
        PI * orient as f64 / self.orientations as f64
    }
}

/// Gaussian width for a sinusoid of `frequency` with the given octave bandwidth.
pub fn sigma_for(frequency: f64, bandwidth: f64) -> f64 {
    let b = 2f64.powf(bandwidth);
    (1.0 / (PI * frequency)) * (2f64.ln() / 2.0).sqrt() * (b + 1.0) / (b - 1.0)
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPlane {
    pub width: usize,
    pub height: usize,
    pub data: Vec<Complex64>,
}

impl ComplexPlane {
    pub fn zeros(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![Complex64::new(0.0, 0.0); width * height],
        }
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Complex64 {
        self.data[y * self.width + x]
    }

    pub fn magnitude(&self) -> Vec<f64> {
        self.data.iter().map(|z| z.norm()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaborKernel {
    pub scale: usize,
    pub orient: usize,
    /// Central frequency ω, cycles/pixel.
    pub frequency: f64,
    /// Orientation θ, radians.
    pub theta: f64,
    pub sigma: f64,
    pub taps: ComplexPlane,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaborBank {
    pub params: GaborParams,
    /// Scale-major: index `scale * orientations + orient`.
    pub kernels: Vec<GaborKernel>,
}

impl GaborBank {
    pub fn len(&self) -> usize {
        self.kernels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kernels.is_empty()
    }

    pub fn kernel(&self, scale: usize, orient: usize) -> &GaborKernel {
        &self.kernels[scale * self.params.orientations + orient]
    }
}

pub fn build_bank(params: &GaborParams) -> Result<GaborBank> {
    params.validate()?;
    let mut kernels = Vec::with_capacity(params.n_filters());
    for scale in 0..params.scales {
        for orient in 0..params.orientations {
            kernels.push(gabor_kernel(params, scale, orient));
        }
    }
    Ok(GaborBank {
        params: params.clone(),
        kernels,
    })
}

fn gabor_kernel(params: &GaborParams, scale: usize, orient: usize) -> GaborKernel {
    let omega = params.frequency(scale);
    let theta = params.orientation(orient);
    let sigma = sigma_for(omega, params.bandwidth);
    let (w, h) = (params.win_w, params.win_h);
    let (cx, cy) = ((w / 2) as f64, (h / 2) as f64);
    let (st, ct) = theta.sin_cos();
    let amplitude = omega * omega / (PI * params.gamma);
    let g2 = params.gamma * params.gamma;

    let mut taps = ComplexPlane::zeros(w, h);
    for row in 0..h {
        let y = row as f64 - cy;
        for col in 0..w {
            let x = col as f64 - cx;
            let xr = x * ct + y * st;
            let yr = -x * st + y * ct;
            let envelope = (-(xr * xr + g2 * yr * yr) / (2.0 * sigma * sigma)).exp();
            let carrier = Complex64::from_polar(1.0, 2.0 * PI * omega * xr + params.phi);
            taps.data[row * w + col] = carrier * (amplitude * envelope);
        }
    }
    if params.dc_correct {
        let mean = taps.data.iter().map(|z| z.re).sum::<f64>() / taps.data.len() as f64;
        taps.data.iter_mut().for_each(|z| z.re -= mean);
    }
    GaborKernel {
        scale,
        orient,
        frequency: omega,
        theta,
        sigma,
        taps,
    }
}
