//! Random-point verification of symbolic identities: exact rational trials
//! plus floating-point trials over the union of both sides' symbols.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use conslaw_core::corpus::sampling::random_rat;
use conslaw_core::poly::{Assignment, DiffPoly, Rat};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Result;

#[derive(Clone, Debug)]
pub struct PointCheckReport {
    pub rational_trials: usize,
    pub float_trials: usize,
    /// Whether every rational trial evaluated to exactly zero.
    pub rational_exact: bool,
    /// Largest rational discrepancy seen (as f64, diagnostics only).
    pub rational_max: f64,
    pub float_max: f64,
}

impl PointCheckReport {
    pub fn pass(&self) -> bool {
        self.rational_exact
    }
}

/// Evaluate `lhs - rhs` at random rational points (exact arithmetic) and at
/// random float points; the identity holds when every rational trial is
/// exactly zero.
pub fn random_point_check(
    lhs: &DiffPoly,
    rhs: &DiffPoly,
    trials: usize,
    seed: u64,
) -> Result<PointCheckReport> {
    let diff = lhs.sub(rhs);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = diff.ctx();

    // Union of symbols of both sides (the difference may have cancelled
    // some; assign over the originals to stay faithful to "both sides").
    let mut jets = lhs.jet_vars();
    for v in rhs.jet_vars() {
        if !jets.contains(&v) {
            jets.push(v);
        }
    }
    let mut funcs = lhs.func_syms();
    for s in rhs.func_syms() {
        if !funcs.contains(&s) {
            funcs.push(s);
        }
    }

    let mut rational_exact = true;
    let mut rational_max = 0.0f64;
    for _ in 0..trials {
        let mut point: Assignment<Rat> = Assignment::new();
        for i in 0..ctx.n_indep() {
            point.set_coord(i, random_rat(&mut rng));
        }
        for v in &jets {
            point.set_jet(v.dep, v.multi.clone(), random_rat(&mut rng));
        }
        for s in &funcs {
            point.set_func(s.func, s.deriv, random_rat(&mut rng));
        }
        let value = diff.evaluate(&point)?;
        if !value.is_zero() {
            rational_exact = false;
            rational_max = rational_max.max(value.abs().to_f64().unwrap_or(f64::INFINITY));
        }
    }

    let mut float_max = 0.0f64;
    for _ in 0..trials {
        let mut point: Assignment<f64> = Assignment::new();
        for i in 0..ctx.n_indep() {
            point.set_coord(i, rng.gen_range(-1.0..1.0));
        }
        for v in &jets {
            point.set_jet(v.dep, v.multi.clone(), rng.gen_range(-1.0..1.0));
        }
        for s in &funcs {
            point.set_func(s.func, s.deriv, rng.gen_range(-1.0..1.0));
        }
        float_max = float_max.max(diff.evaluate(&point)?.abs());
    }

    Ok(PointCheckReport {
        rational_trials: trials,
        float_trials: trials,
        rational_exact,
        rational_max,
        float_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use conslaw_core::corpus;
    use conslaw_core::parser::parse_expression;
    use conslaw_core::poly::rat_int;

    #[test]
    fn identical_sides_check_out() {
        let ctx = corpus::kp_system().ctx().clone();
        let p = parse_expression("u*u_x - 3*w_y + x*u_xx", &ctx).unwrap();
        let r = random_point_check(&p, &p, 50, 1).unwrap();
        assert!(r.pass());
        assert_eq!(r.float_max, 0.0);
    }

    #[test]
    fn perturbed_coefficient_is_caught() {
        let ctx = corpus::kp_system().ctx().clone();
        let p = parse_expression("u*u_x - 3*w_y", &ctx).unwrap();
        let q = p.add(&parse_expression("w_y", &ctx).unwrap().scale(&rat_int(1)));
        let r = random_point_check(&p, &q, 50, 2).unwrap();
        assert!(!r.pass());
    }
}
