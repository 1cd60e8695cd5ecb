//! Numeric cross-checks of symbolic conservation laws: density integrals
//! over the periodic box, drift series along a trajectory, and the
//! pointwise divergence residual.

use std::collections::BTreeMap;

use ndarray::Array2;

use conslaw_core::conslaw::ConservedVector;
use conslaw_core::poly::{Assignment, DiffPoly};

use crate::error::{Result, SolverError};
use crate::field::Field;
use crate::grid::Grid;
use crate::solver::Trajectory;

/// Arbitrary-function values supplied as polynomials in `t` (the regime in
/// which the integral form of a conservation law is meaningful); `F^(k)` is
/// evaluated as the k-th derivative of the polynomial.
#[derive(Clone, Debug, Default)]
pub struct FuncParams {
    polys: BTreeMap<String, Vec<f64>>,
}

impl FuncParams {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_poly(mut self, name: &str, coeffs: &[f64]) -> Self {
        self.polys.insert(name.to_string(), coeffs.to_vec());
        self
    }

    pub fn value(&self, name: &str, deriv: u32, t: f64) -> Option<f64> {
        let coeffs = self.polys.get(name)?;
        // Differentiate the coefficient list `deriv` times, then evaluate.
        let mut c = coeffs.clone();
        for _ in 0..deriv {
            c = c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, v)| v * k as f64)
                .collect();
        }
        Some(c.iter().rev().fold(0.0, |acc, v| acc * t + v))
    }
}

/// The grid fields a density needs: `(of_omega, x-order, y-order)` per jet
/// variable, after validation.
struct DensityPlan {
    jets: Vec<(usize, conslaw_core::MultiIndex, bool, u32, u32)>,
    funcs: Vec<(usize, u32, String)>,
    uses_t: bool,
}

fn plan_density(density: &DiffPoly, allow_xy: bool) -> Result<DensityPlan> {
    let ctx = density.ctx();
    let u_dep = ctx.dep_index("u");
    let w_dep = ctx.dep_index("w");
    let t_idx = ctx.indep_index("t");
    let x_idx = ctx.indep_index("x");
    let y_idx = ctx.indep_index("y");

    for i in density.coords_used() {
        if Some(i) == t_idx {
            continue;
        }
        if !allow_xy && (Some(i) == x_idx || Some(i) == y_idx) {
            return Err(SolverError::ExplicitCoordinate {
                name: ctx.indep_name(i).to_string(),
            });
        }
    }
    let mut jets = Vec::new();
    for var in density.jet_vars() {
        let of_omega = if Some(var.dep) == u_dep {
            false
        } else if Some(var.dep) == w_dep {
            true
        } else {
            return Err(SolverError::AdjointVariable {
                name: ctx.dep_name(var.dep).to_string(),
            });
        };
        let t_count = t_idx.map(|i| var.multi.get(i)).unwrap_or(0);
        if t_count > 0 {
            return Err(SolverError::TimeDerivative {
                var: format!("{}_{}", ctx.dep_name(var.dep), var.multi),
            });
        }
        let a = x_idx.map(|i| var.multi.get(i) as u32).unwrap_or(0);
        let b = y_idx.map(|i| var.multi.get(i) as u32).unwrap_or(0);
        jets.push((var.dep, var.multi.clone(), of_omega, a, b));
    }
    let funcs = density
        .func_syms()
        .into_iter()
        .map(|s| (s.func, s.deriv, ctx.func(s.func).name.clone()))
        .collect();
    Ok(DensityPlan {
        jets,
        funcs,
        uses_t: t_idx.map(|i| density.coords_used().contains(&i)).unwrap_or(false),
    })
}

/// Evaluate a density pointwise on the grid at time `t`.
pub fn density_field(
    grid: &Grid,
    field: &Field,
    density: &DiffPoly,
    t: f64,
    params: &FuncParams,
) -> Result<Array2<f64>> {
    density_field_inner(grid, field, density, t, params, false)
}

fn density_field_inner(
    grid: &Grid,
    field: &Field,
    density: &DiffPoly,
    t: f64,
    params: &FuncParams,
    allow_xy: bool,
) -> Result<Array2<f64>> {
    let ctx = density.ctx();
    let plan = plan_density(density, allow_xy)?;
    let grids: Vec<Array2<f64>> = plan
        .jets
        .iter()
        .map(|(_, _, of_omega, a, b)| field.jet(grid, *of_omega, *a, *b))
        .collect();
    let mut point: Assignment<f64> = Assignment::new();
    if plan.uses_t {
        point.set_coord(ctx.indep_index("t").unwrap(), t);
    }
    for (func, deriv, name) in &plan.funcs {
        let v = params
            .value(name, *deriv, t)
            .ok_or_else(|| SolverError::MissingFunction { name: name.clone() })?;
        point.set_func(*func, *deriv, v);
    }
    let mut out = Array2::<f64>::zeros((grid.nx, grid.ny));
    for i in 0..grid.nx {
        for j in 0..grid.ny {
            if allow_xy {
                if let Some(xi) = ctx.indep_index("x") {
                    point.set_coord(xi, grid.x(i));
                }
                if let Some(yi) = ctx.indep_index("y") {
                    point.set_coord(yi, grid.y(j));
                }
            }
            for ((dep, multi, _, _, _), values) in plan.jets.iter().zip(&grids) {
                point.set_jet(*dep, multi.clone(), values[[i, j]]);
            }
            out[[i, j]] = density.evaluate(&point)?;
        }
    }
    Ok(out)
}

/// Integral of the density over the periodic box (the trapezoid rule is
/// exact for periodic data: a plain scaled sum).
pub fn density_integral(
    grid: &Grid,
    field: &Field,
    density: &DiffPoly,
    t: f64,
    params: &FuncParams,
) -> Result<f64> {
    let values = density_field(grid, field, density, t, params)?;
    Ok(values.sum() * grid.cell_area())
}

/// Time series of one conserved integral along a trajectory.
#[derive(Clone, Debug)]
pub struct DiagnosticSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

/// Track the integral of the vector's density along a trajectory.
///
/// Every component (density and fluxes) must be free of explicit `x`, `y`;
/// only then does the periodic integral of the density close. Returns the
/// series and the maximum relative drift
/// `max |I(t) - I(0)| / max(|I(0)|, floor)` with the floor set to the
/// integral of `|C1|` at the initial time.
pub fn conservation_drift(
    grid: &Grid,
    trajectory: &Trajectory,
    cv: &ConservedVector,
    params: &FuncParams,
) -> Result<(DiagnosticSeries, f64)> {
    for c in &cv.components {
        plan_density(c, false)?;
    }
    let density = &cv.components[0];
    let mut times = Vec::with_capacity(trajectory.times.len());
    let mut values = Vec::with_capacity(trajectory.times.len());
    for (t, f) in trajectory.times.iter().zip(&trajectory.snapshots) {
        times.push(*t);
        values.push(density_integral(grid, f, density, *t, params)?);
    }
    let abs0 = {
        let v = density_field(grid, &trajectory.snapshots[0], density, times[0], params)?;
        v.mapv(f64::abs).sum() * grid.cell_area()
    };
    let floor = abs0.max(f64::MIN_POSITIVE);
    let i0 = values[0];
    let drift = values
        .iter()
        .map(|v| (v - i0).abs())
        .fold(0.0f64, f64::max)
        / i0.abs().max(floor);
    Ok((DiagnosticSeries { times, values }, drift))
}

/// Pointwise residual `d_t C1 + D_x C2 + D_y C3` at interior snapshot `k`,
/// with the time derivative by centered differences of the recorded
/// snapshots and space derivatives spectral. Converges to zero as the
/// snapshot spacing shrinks when the vector is conserved.
pub fn divergence_residual(
    grid: &Grid,
    trajectory: &Trajectory,
    cv: &ConservedVector,
    params: &FuncParams,
    k: usize,
) -> Result<Array2<f64>> {
    assert!(k >= 1 && k + 1 < trajectory.snapshots.len(), "interior snapshot");
    let (t_prev, t_mid, t_next) = (
        trajectory.times[k - 1],
        trajectory.times[k],
        trajectory.times[k + 1],
    );
    let c1_prev = density_field_inner(
        grid,
        &trajectory.snapshots[k - 1],
        &cv.components[0],
        t_prev,
        params,
        true,
    )?;
    let c1_next = density_field_inner(
        grid,
        &trajectory.snapshots[k + 1],
        &cv.components[0],
        t_next,
        params,
        true,
    )?;
    let c2 = density_field_inner(
        grid,
        &trajectory.snapshots[k],
        &cv.components[1],
        t_mid,
        params,
        true,
    )?;
    let c3 = density_field_inner(
        grid,
        &trajectory.snapshots[k],
        &cv.components[2],
        t_mid,
        params,
        true,
    )?;
    let dt2 = t_next - t_prev;
    let dxc2 = grid.ifft2(&grid.spectral_derivative(&grid.fft2(&c2), 1, 0));
    let dyc3 = grid.ifft2(&grid.spectral_derivative(&grid.fft2(&c3), 0, 1));
    let mut out = Array2::<f64>::zeros((grid.nx, grid.ny));
    for i in 0..grid.nx {
        for j in 0..grid.ny {
            out[[i, j]] = (c1_next[[i, j]] - c1_prev[[i, j]]) / dt2 + dxc2[[i, j]] + dyc3[[i, j]];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use conslaw_core::corpus;
    use conslaw_core::parser::parse_expression;

    #[test]
    fn polynomial_function_values() {
        // f = t^2 - 3t: f' = 2t - 3, f'' = 2, f''' = 0.
        let p = FuncParams::new().with_poly("f", &[0.0, -3.0, 1.0]);
        assert_eq!(p.value("f", 0, 2.0), Some(-2.0));
        assert_eq!(p.value("f", 1, 2.0), Some(1.0));
        assert_eq!(p.value("f", 2, 10.0), Some(2.0));
        assert_eq!(p.value("f", 3, 10.0), Some(0.0));
        assert_eq!(p.value("g", 0, 0.0), None);
    }

    #[test]
    fn adjoint_and_coordinate_densities_are_rejected() {
        let sys = corpus::kp_system();
        let lagr = conslaw_core::selfadjoint::formal_lagrangian(&sys).unwrap();
        let ctx = lagr.ctx();
        let g = Grid::new(16, 16, 5.0, 5.0).unwrap();
        let f = Field::zeros(&g);
        let p = FuncParams::new();

        let with_adjoint = parse_expression("v*u", ctx).unwrap();
        assert!(matches!(
            density_integral(&g, &f, &with_adjoint, 0.0, &p),
            Err(SolverError::AdjointVariable { .. })
        ));

        let with_coord = parse_expression("y*u", ctx).unwrap();
        assert!(matches!(
            density_integral(&g, &f, &with_coord, 0.0, &p),
            Err(SolverError::ExplicitCoordinate { .. })
        ));

        let with_tderiv = parse_expression("u_t*u", ctx).unwrap();
        assert!(matches!(
            density_integral(&g, &f, &with_tderiv, 0.0, &p),
            Err(SolverError::TimeDerivative { .. })
        ));
    }

    #[test]
    fn zero_mean_density_integrates_to_zero() {
        let sys = corpus::kp_system();
        let ctx = sys.ctx();
        let g = Grid::new(32, 16, 2.0 * std::f64::consts::PI, 3.0).unwrap();
        let f = Field::from_values(&g, |x, _| x.sin());
        let u = parse_expression("u", ctx).unwrap();
        let v = density_integral(&g, &f, &u, 0.0, &FuncParams::new()).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn density_integral_matches_direct_grid_sum() {
        let sys = corpus::kp_system();
        let ctx = sys.ctx();
        let g = Grid::new(32, 32, 7.0, 9.0).unwrap();
        let f = crate::solver::random_smooth_field(&g, 5, 0.8, 3);
        let density = parse_expression("-(1/2)*u^2", ctx).unwrap();
        let got = density_integral(&g, &f, &density, 0.0, &FuncParams::new()).unwrap();
        let direct: f64 =
            f.u.iter().map(|v| -0.5 * v * v).sum::<f64>() * g.cell_area();
        assert!((got - direct).abs() < 1e-12 * direct.abs().max(1.0));
    }
}
