//! Seeded random differential polynomials and generators for property
//! suites and the closed-form consistency check.

use num_bigint::BigInt;
use rand::Rng;

use crate::context::Ctx;
use crate::multiindex::MultiIndex;
use crate::poly::{DiffPoly, Rat, Term};
use crate::symmetry::Generator;

#[derive(Clone, Debug)]
pub struct PolyConfig {
    pub max_terms: usize,
    pub max_jet_order: u32,
    pub max_jet_factors: usize,
    pub max_exp: u8,
    pub with_coords: bool,
    pub with_funcs: bool,
    /// Highest function-symbol derivative order to draw.
    pub max_func_deriv: u32,
}

impl Default for PolyConfig {
    fn default() -> Self {
        PolyConfig {
            max_terms: 3,
            max_jet_order: 2,
            max_jet_factors: 2,
            max_exp: 2,
            with_coords: true,
            with_funcs: true,
            max_func_deriv: 2,
        }
    }
}

pub fn random_rat<R: Rng>(rng: &mut R) -> Rat {
    let mut num: i64 = rng.gen_range(-6..=6);
    if num == 0 {
        num = 1;
    }
    let den: i64 = rng.gen_range(1..=4);
    Rat::new(BigInt::from(num), BigInt::from(den))
}

fn random_multi<R: Rng>(rng: &mut R, n: usize, max_order: u32) -> MultiIndex {
    let order = rng.gen_range(0..=max_order);
    let mut counts = vec![0u8; n];
    for _ in 0..order {
        counts[rng.gen_range(0..n)] += 1;
    }
    MultiIndex::new(counts)
}

/// A small random canonical polynomial over the given convention.
pub fn random_poly<R: Rng>(ctx: &Ctx, rng: &mut R, cfg: &PolyConfig) -> DiffPoly {
    let n_terms = rng.gen_range(0..=cfg.max_terms);
    let mut terms: Vec<Term> = Vec::new();
    for _ in 0..n_terms {
        let mut mono = crate::poly::Monomial::one(ctx.n_indep());
        if cfg.with_coords {
            for e in mono.coord.iter_mut() {
                if rng.gen_bool(0.3) {
                    *e = rng.gen_range(1..=2);
                }
            }
        }
        if cfg.with_funcs && ctx.n_funcs() > 0 && rng.gen_bool(0.4) {
            let func = rng.gen_range(0..ctx.n_funcs());
            let deriv = rng.gen_range(0..=cfg.max_func_deriv);
            mono.funcs.push((crate::poly::FuncSym { func, deriv }, 1));
        }
        let n_jets = rng.gen_range(0..=cfg.max_jet_factors);
        for _ in 0..n_jets {
            let dep = rng.gen_range(0..ctx.n_dep());
            let multi = random_multi(rng, ctx.n_indep(), cfg.max_jet_order);
            let var = crate::poly::JetVar { dep, multi };
            let exp = rng.gen_range(1..=cfg.max_exp);
            let merged = mono.jet_exp(&var) + exp;
            mono = mono.with_jet_exp(&var, merged);
        }
        terms.push(Term {
            coeff: random_rat(rng),
            mono,
        });
    }
    DiffPoly::from_terms(ctx, terms)
}

/// A random point-symmetry generator: jet-order-0 coefficients for every
/// independent and dependent variable of the convention.
pub fn random_generator<R: Rng>(ctx: &Ctx, rng: &mut R, name: &str) -> Generator {
    let cfg = PolyConfig {
        max_terms: 2,
        max_jet_order: 0,
        max_jet_factors: 1,
        max_exp: 2,
        with_coords: true,
        with_funcs: ctx.n_funcs() > 0,
        max_func_deriv: 2,
    };
    let xi = (0..ctx.n_indep())
        .map(|_| random_poly(ctx, rng, &cfg))
        .collect();
    let eta = (0..ctx.n_dep())
        .map(|_| random_poly(ctx, rng, &cfg))
        .collect();
    Generator::new(name, xi, eta).expect("order-0 coefficients")
}
