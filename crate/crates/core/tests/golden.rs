//! Corpus golden suite plus targeted pipeline checks that cut across
//! modules.

use conslaw_core::conslaw::{
    conserved_vector, kp_closed_form, reduce_modulo, simplify_density, verify_divergence,
};
use conslaw_core::corpus::{self, files, golden_entry, kp_pipeline, kp_raw_vector};
use conslaw_core::parser::{parse_expression, parse_substitution, render_plain};
use conslaw_core::poly::DiffPoly;
use conslaw_core::selfadjoint::{check_selfadjointness, formal_lagrangian};
use conslaw_core::symmetry::{characteristic, check_symmetry, Generator, KpGeneratorKind};

#[test]
fn golden_suite_is_green() {
    let results = corpus::run_all().unwrap();
    for r in &results {
        println!(
            "{} [{}] {:?} {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.id,
            r.mode,
            r.detail
        );
    }
    assert!(results.iter().all(|r| r.pass), "golden suite has failures");
    assert_eq!(results.len(), corpus::case_ids().len());
}

#[test]
fn substitution_turns_adjoint_into_kp() {
    let sys = corpus::kp_system();
    let lagr = formal_lagrangian(&sys).unwrap();
    let ctx = lagr.ctx();
    let rule = parse_substitution("v=u, z=w", ctx).unwrap();
    let adjoint1 = parse_expression("v_t - u*v_x - v_xxx - z_y", ctx).unwrap();
    let got = adjoint1.substitute(&rule).unwrap();
    let expected = parse_expression("u_t - u*u_x - u_xxx - w_y", ctx).unwrap();
    assert_eq!(got, expected);

    let adjoint2 = parse_expression("z_x - v_y", ctx).unwrap();
    assert_eq!(
        adjoint2.substitute(&rule).unwrap(),
        parse_expression("w_x - u_y", ctx).unwrap()
    );

    // Untouched variables pass through.
    let ux = parse_expression("u_x", ctx).unwrap();
    assert_eq!(ux.substitute(&rule).unwrap(), ux);
}

#[test]
fn trivial_constant_multiplier_is_self_adjoint_too() {
    let sys = corpus::kp_system();
    let lagr = formal_lagrangian(&sys).unwrap();
    let rule = parse_substitution("v=1, z=0", lagr.ctx()).unwrap();
    let report = check_selfadjointness(&lagr, &rule).unwrap();
    assert!(report.verdict);
    assert!(report.substituted.iter().all(|p| p.is_zero()));
}

#[test]
fn nonlinear_substitution_fails_with_residual() {
    let sys = corpus::kp_system();
    let lagr = formal_lagrangian(&sys).unwrap();
    let rule = parse_substitution("v=u^2, z=w", lagr.ctx()).unwrap();
    let report = check_selfadjointness(&lagr, &rule).unwrap();
    assert!(!report.verdict);
    assert!(report.residuals.iter().any(|r| !r.is_zero()));
}

#[test]
fn missing_adjoint_target_is_an_error() {
    let sys = corpus::kp_system();
    let lagr = formal_lagrangian(&sys).unwrap();
    let rule = parse_substitution("v=u", lagr.ctx()).unwrap();
    assert!(check_selfadjointness(&lagr, &rule).is_err());
}

#[test]
fn translation_generator_is_a_symmetry() {
    // The h family with h = 1 is plain x-translation.
    let sys = corpus::kp_system();
    let ctx = sys.ctx();
    let zero = DiffPoly::zero(ctx);
    let one = DiffPoly::int(ctx, 1);
    let gen = Generator::new(
        "translation-x",
        vec![zero.clone(), one, zero.clone()],
        vec![zero.clone(), zero.clone()],
    )
    .unwrap();
    let report = check_symmetry(&gen, &sys).unwrap();
    assert!(report.pass);
}

#[test]
fn bogus_generator_fails_with_nonzero_residual() {
    let sys = corpus::kp_system();
    let ctx = sys.ctx();
    let zero = DiffPoly::zero(ctx);
    let one = DiffPoly::int(ctx, 1);
    let gen = Generator::new(
        "bogus",
        vec![zero.clone(), one.clone(), zero.clone()],
        vec![one, zero.clone()],
    )
    .unwrap();
    let report = check_symmetry(&gen, &sys).unwrap();
    assert!(!report.pass);
    assert!(report.residuals.iter().any(|r| !r.is_zero()));
}

#[test]
fn xh_density_before_normalization() {
    // u W1 for the h family is -h' u - h u u_x before gauge and sign work.
    let (cv, pipe) = kp_raw_vector(KpGeneratorKind::H).unwrap();
    let expected = parse_expression("-h'*u - h*u*u_x", &pipe.ctx).unwrap();
    assert_eq!(cv.components[0], expected);

    // Simplification moves the exact part into the gauge and flips the sign.
    let out = simplify_density(&cv, &pipe.system).unwrap();
    assert_eq!(out.sign, -1);
    assert_eq!(
        out.vector.components[0],
        parse_expression("h'*u", &pipe.ctx).unwrap()
    );
    assert_eq!(
        out.gauge.p,
        parse_expression("-(1/2)*h*u^2", &pipe.ctx).unwrap()
    );
}

#[test]
fn zero_generator_gives_the_zero_vector() {
    let pipe = kp_pipeline(KpGeneratorKind::F).unwrap();
    let ctx = &pipe.ctx;
    let zero = DiffPoly::zero(ctx);
    let gen = Generator::new(
        "zero",
        vec![zero.clone(), zero.clone(), zero.clone()],
        vec![zero.clone(), zero.clone()],
    )
    .unwrap();
    let cv = conserved_vector(&pipe.lagrangian, &gen, &pipe.substitution, false).unwrap();
    assert!(cv.components.iter().all(|c| c.is_zero()));
}

#[test]
fn keep_xi_lagrangian_changes_vector_only_on_solutions() {
    for kind in [KpGeneratorKind::F, KpGeneratorKind::G, KpGeneratorKind::H] {
        let pipe = kp_pipeline(kind).unwrap();
        let with = conserved_vector(&pipe.lagrangian, &pipe.generator, &pipe.substitution, true)
            .unwrap();
        let without =
            conserved_vector(&pipe.lagrangian, &pipe.generator, &pipe.substitution, false)
                .unwrap();
        // Both pass the divergence identity.
        assert!(verify_divergence(&with, &pipe.system).unwrap().pass);
        assert!(verify_divergence(&without, &pipe.system).unwrap().pass);
        // The difference vanishes on solutions componentwise.
        for (a, b) in with.components.iter().zip(&without.components) {
            let diff = a.sub(b);
            let red = reduce_modulo(&diff, &pipe.system).unwrap();
            assert!(
                red.normal_form.is_zero(),
                "xi L residual: {}",
                render_plain(&red.normal_form)
            );
        }
    }
}

#[test]
fn xg_closed_form_density_reduces_to_prop2_up_to_sign_and_gauge() {
    let (cv, pipe) = kp_raw_vector(KpGeneratorKind::G).unwrap();
    let closed = kp_closed_form(&characteristic(&pipe.generator).unwrap()).unwrap();
    assert_eq!(cv.components, closed.components);
    let out = simplify_density(&closed, &pipe.system).unwrap();
    assert_eq!(
        out.vector.components[0],
        golden_entry(files::PROP2, "C1", &pipe.ctx).unwrap()
    );
}

#[test]
fn jet_partials_of_the_formal_lagrangian() {
    // d/du_t of L is the first adjoint variable; d/du_xxx over the ordered
    // triple (x,x,x) is its negative.
    let sys = corpus::kp_system();
    let lagr = formal_lagrangian(&sys).unwrap();
    let ctx = lagr.ctx();
    let v = parse_expression("v", ctx).unwrap();
    let ut = conslaw_core::MultiIndex::new(vec![1, 0, 0]);
    let uxxx = conslaw_core::MultiIndex::new(vec![0, 3, 0]);
    assert_eq!(lagr.lagrangian.partial_jet(0, &ut), v);
    assert_eq!(lagr.lagrangian.partial_jet(0, &uxxx), v.neg());
}

#[test]
fn raw_variational_derivatives_of_kp() {
    let sys = corpus::kp_system();
    let lagr = formal_lagrangian(&sys).unwrap();
    let ctx = lagr.ctx();
    let adj = conslaw_core::selfadjoint::adjoint_system(&lagr).unwrap();
    assert_eq!(
        adj.raw[0],
        parse_expression("-v_t + u*v_x + v_xxx + z_y", ctx).unwrap()
    );
    assert_eq!(adj.raw[1], parse_expression("v_y - z_x", ctx).unwrap());
}

#[test]
fn lrt_corpus_file_parses_and_reduces() {
    let sys = corpus::lrt_system();
    assert_eq!(sys.n_equations(), 1);
    let expr = &sys.equations[0].expr;
    let red = reduce_modulo(expr, &sys).unwrap();
    assert!(red.normal_form.is_zero());
}

#[test]
fn lagrangian_of_order_above_three_is_rejected() {
    use conslaw_core::parser::parse_system;
    let sys = parse_system("dep u;\neq u_t - u_xxxx = 0 solve u_t;").unwrap();
    let lagr = formal_lagrangian(&sys).unwrap();
    let base = sys.ctx();
    let zero = DiffPoly::zero(base);
    let one = DiffPoly::int(base, 1);
    let gen = Generator::new(
        "shift",
        vec![zero.clone(), one, zero.clone()],
        vec![zero.clone()],
    )
    .unwrap();
    let rule = parse_substitution("v=u", lagr.ctx()).unwrap();
    let err = conserved_vector(&lagr, &gen, &rule, false).unwrap_err();
    assert!(matches!(
        err,
        conslaw_core::DiffAlgError::UnsupportedLagrangianOrder { order: 4 }
    ));
}
