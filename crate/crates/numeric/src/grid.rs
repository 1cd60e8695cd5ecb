//! Periodic 2-D spectral grid: transforms, wavenumbers, derivative and
//! dealiasing operators.

use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Result, SolverError};

/// Uniform periodic grid on `[0, lx) x [0, ly)` with power-of-two
/// resolution.
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    /// Angular wavenumbers in standard DFT ordering.
    pub kx: Vec<f64>,
    pub ky: Vec<f64>,
    fft_x: Arc<dyn Fft<f64>>,
    ifft_x: Arc<dyn Fft<f64>>,
    fft_y: Arc<dyn Fft<f64>>,
    ifft_y: Arc<dyn Fft<f64>>,
}

fn wavenumbers(n: usize, l: f64) -> Vec<f64> {
    let base = 2.0 * std::f64::consts::PI / l;
    (0..n)
        .map(|i| {
            let s = if i <= n / 2 {
                i as i64
            } else {
                i as i64 - n as i64
            };
            base * s as f64
        })
        .collect()
}

impl Grid {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        for (n, name) in [(nx, "nx"), (ny, "ny")] {
            if n < 16 || !n.is_power_of_two() {
                return Err(SolverError::Config(format!(
                    "{name} must be a power of two >= 16, got {n}"
                )));
            }
        }
        if lx <= 0.0 || ly <= 0.0 {
            return Err(SolverError::Config("domain lengths must be positive".into()));
        }
        let mut planner = FftPlanner::new();
        Ok(Grid {
            nx,
            ny,
            lx,
            ly,
            kx: wavenumbers(nx, lx),
            ky: wavenumbers(ny, ly),
            fft_x: planner.plan_fft_forward(nx),
            ifft_x: planner.plan_fft_inverse(nx),
            fft_y: planner.plan_fft_forward(ny),
            ifft_y: planner.plan_fft_inverse(ny),
        })
    }

    pub fn x(&self, i: usize) -> f64 {
        self.lx * i as f64 / self.nx as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        self.ly * j as f64 / self.ny as f64
    }

    pub fn cell_area(&self) -> f64 {
        (self.lx / self.nx as f64) * (self.ly / self.ny as f64)
    }

    fn transform_x(&self, data: &mut Array2<Complex64>, inverse: bool) {
        let mut scratch = vec![Complex64::default(); self.nx];
        for j in 0..self.ny {
            for i in 0..self.nx {
                scratch[i] = data[[i, j]];
            }
            if inverse {
                self.ifft_x.process(&mut scratch);
            } else {
                self.fft_x.process(&mut scratch);
            }
            for i in 0..self.nx {
                data[[i, j]] = scratch[i];
            }
        }
    }

    fn transform_y(&self, data: &mut Array2<Complex64>, inverse: bool) {
        let mut scratch = vec![Complex64::default(); self.ny];
        for i in 0..self.nx {
            for j in 0..self.ny {
                scratch[j] = data[[i, j]];
            }
            if inverse {
                self.ifft_y.process(&mut scratch);
            } else {
                self.fft_y.process(&mut scratch);
            }
            for j in 0..self.ny {
                data[[i, j]] = scratch[j];
            }
        }
    }

    /// Forward transform of a real field (unnormalized spectrum / (nx*ny)).
    pub fn fft2(&self, field: &Array2<f64>) -> Array2<Complex64> {
        let mut data = field.mapv(|v| Complex64::new(v, 0.0));
        self.transform_x(&mut data, false);
        self.transform_y(&mut data, false);
        let scale = 1.0 / (self.nx * self.ny) as f64;
        data.mapv_inplace(|v| v * scale);
        data
    }

    /// Inverse transform back to a real field (imaginary parts dropped).
    pub fn ifft2(&self, spec: &Array2<Complex64>) -> Array2<f64> {
        let mut data = spec.clone();
        self.transform_x(&mut data, true);
        self.transform_y(&mut data, true);
        data.mapv(|v| v.re)
    }

    /// Multiply by `(i kx)^a (i ky)^b`.
    pub fn spectral_derivative(
        &self,
        spec: &Array2<Complex64>,
        a: u32,
        b: u32,
    ) -> Array2<Complex64> {
        let mut out = spec.clone();
        for i in 0..self.nx {
            let fx = Complex64::new(0.0, self.kx[i]).powu(a);
            for j in 0..self.ny {
                let fy = Complex64::new(0.0, self.ky[j]).powu(b);
                out[[i, j]] *= fx * fy;
            }
        }
        out
    }

    /// Divide by `(i kx)`, projecting out the `kx = 0` modes.
    pub fn spectral_antiderivative_x(&self, spec: &Array2<Complex64>) -> Array2<Complex64> {
        let mut out = spec.clone();
        for i in 0..self.nx {
            for j in 0..self.ny {
                if self.kx[i] == 0.0 {
                    out[[i, j]] = Complex64::default();
                } else {
                    out[[i, j]] /= Complex64::new(0.0, self.kx[i]);
                }
            }
        }
        out
    }

    /// Zero every `kx = 0` mode: the zero-x-mean gauge, enforced per y line.
    pub fn project_zero_x_mean(&self, spec: &mut Array2<Complex64>) {
        for j in 0..self.ny {
            spec[[0, j]] = Complex64::default();
        }
    }

    /// Mask for the dealiasing rule: keep `|k| < fraction * k_max`.
    pub fn dealias_mask(&self, fraction: f64) -> Array2<f64> {
        let mut mask = Array2::<f64>::zeros((self.nx, self.ny));
        let kx_cut = fraction * self.kx.iter().cloned().fold(0.0, f64::max);
        let ky_cut = fraction * self.ky.iter().cloned().fold(0.0, f64::max);
        for i in 0..self.nx {
            for j in 0..self.ny {
                if self.kx[i].abs() <= kx_cut && self.ky[j].abs() <= ky_cut {
                    mask[[i, j]] = 1.0;
                }
            }
        }
        mask
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transforms_round_trip() {
        let g = Grid::new(32, 16, 2.0 * std::f64::consts::PI, 4.0).unwrap();
        let mut f = Array2::<f64>::zeros((32, 16));
        for i in 0..32 {
            for j in 0..16 {
                f[[i, j]] = (g.x(i)).sin() + 0.3 * (2.0 * std::f64::consts::PI * g.y(j) / g.ly).cos();
            }
        }
        let back = g.ifft2(&g.fft2(&f));
        for (a, b) in f.iter().zip(back.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn spectral_derivative_of_sine_is_cosine() {
        let g = Grid::new(64, 16, 2.0 * std::f64::consts::PI, 1.0).unwrap();
        let mut f = Array2::<f64>::zeros((64, 16));
        for i in 0..64 {
            for j in 0..16 {
                f[[i, j]] = (3.0 * g.x(i)).sin();
            }
        }
        let df = g.ifft2(&g.spectral_derivative(&g.fft2(&f), 1, 0));
        for i in 0..64 {
            assert!((df[[i, 0]] - 3.0 * (3.0 * g.x(i)).cos()).abs() < 1e-10);
        }
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(8, 64, 1.0, 1.0).is_err());
        assert!(Grid::new(48, 64, 1.0, 1.0).is_err());
        assert!(Grid::new(64, 64, -1.0, 1.0).is_err());
        assert!(Grid::new(16, 16, 1.0, 1.0).is_ok());
    }
}
