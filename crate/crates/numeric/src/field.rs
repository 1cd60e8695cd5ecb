//! Discrete field state: the primary variable `u` on the grid, with the
//! potential-like variable `w` reconstructed spectrally from `w_x = u_y`
//! under the zero-x-mean gauge.

use ndarray::Array2;

use crate::grid::Grid;

#[derive(Clone, Debug)]
pub struct Field {
    pub u: Array2<f64>,
}

impl Field {
    pub fn zeros(grid: &Grid) -> Self {
        Field {
            u: Array2::zeros((grid.nx, grid.ny)),
        }
    }

    pub fn from_values(grid: &Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut u = Array2::zeros((grid.nx, grid.ny));
        for i in 0..grid.nx {
            for j in 0..grid.ny {
                u[[i, j]] = f(grid.x(i), grid.y(j));
            }
        }
        Field { u }
    }

    /// Enforce the zero-x-mean constraint (removes every `kx = 0` mode).
    pub fn project(&mut self, grid: &Grid) {
        let mut spec = grid.fft2(&self.u);
        grid.project_zero_x_mean(&mut spec);
        self.u = grid.ifft2(&spec);
    }

    /// Maximum violation of the zero-x-mean invariant over y lines.
    pub fn max_x_mean(&self, grid: &Grid) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..grid.ny {
            let mut s = 0.0;
            for i in 0..grid.nx {
                s += self.u[[i, j]];
            }
            worst = worst.max((s / grid.nx as f64).abs());
        }
        worst
    }

    /// `w = dx^{ -1} u_y` with zero x-mean per y line.
    pub fn omega(&self, grid: &Grid) -> Array2<f64> {
        let spec = grid.fft2(&self.u);
        let wy = grid.spectral_derivative(&spec, 0, 1);
        grid.ifft2(&grid.spectral_antiderivative_x(&wy))
    }

    /// Spatial jet `d^a_x d^b_y` of `u` (or of `w` when `of_omega`).
    pub fn jet(&self, grid: &Grid, of_omega: bool, a: u32, b: u32) -> Array2<f64> {
        let spec = grid.fft2(&self.u);
        let base = if of_omega {
            grid.spectral_antiderivative_x(&grid.spectral_derivative(&spec, 0, 1))
        } else {
            spec
        };
        grid.ifft2(&grid.spectral_derivative(&base, a, b))
    }

    pub fn is_finite(&self) -> bool {
        self.u.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.u.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_solves_wx_eq_uy() {
        // u = sin(x) cos(y) on a 2pi x 2pi box: w with w_x = u_y is
        // -cos(x) * -sin(y)... check spectrally against the closed form
        // w = -cos(x) sin(y) (zero x-mean).
        let l = 2.0 * std::f64::consts::PI;
        let g = Grid::new(32, 32, l, l).unwrap();
        let f = Field::from_values(&g, |x, y| x.sin() * y.cos());
        let w = f.omega(&g);
        for i in 0..g.nx {
            for j in 0..g.ny {
                let expect = -g.x(i).cos() * -g.y(j).sin();
                assert!((w[[i, j]] - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn projection_zeroes_x_means() {
        let g = Grid::new(16, 16, 1.0, 1.0).unwrap();
        let mut f = Field::from_values(&g, |x, y| 1.0 + x.sin() + y);
        assert!(f.max_x_mean(&g) > 0.5);
        f.project(&g);
        assert!(f.max_x_mean(&g) < 1e-13);
    }
}
