//! Operator-level checks for the concentration machinery: projection laws,
//! both Hilbert-Schmidt routes, operator norms against a dense eigensolver
//! oracle, prolate eigenpairs and monotonicity.

use nalgebra::{DMatrix, DVector};
use uncertop::concentration::*;
use uncertop::discretize::Grid;
use uncertop::families::random_combinations;
use uncertop::linalg;
use uncertop::transforms::TransformSpec;
use uncertop::C64;

/// Independent eigensolver oracle: conjugate by diag(√w) to a Euclidean
/// Hermitian matrix and use nalgebra's symmetric eigendecomposition.
fn eigs_oracle(m: &DMatrix<C64>, w: &[f64]) -> Vec<f64> {
    let n = m.nrows();
    let mut b = m.clone();
    for i in 0..n {
        for j in 0..n {
            b[(i, j)] *= (w[i] / w[j]).sqrt();
        }
    }
    let mut v: Vec<f64> = nalgebra::SymmetricEigen::new(b)
        .eigenvalues
        .iter()
        .cloned()
        .collect();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

fn pair_alpha0_unit() -> ConcentrationPair {
    let spec = TransformSpec::hankel(0.0).unwrap();
    ConcentrationPair::build_default(
        &spec,
        12.0,
        48,
        16,
        SetSpec::single(0.0, 1.0).unwrap(),
        SetSpec::single(0.0, 1.0).unwrap(),
    )
    .unwrap()
}

#[test]
fn band_projection_limits() {
    let spec = TransformSpec::hankel(0.0).unwrap();
    let grid = Grid::build(&spec, 12.0, 32, 16).unwrap();
    let fwd = uncertop::discretize::assemble_forward(&spec, &grid, &grid).unwrap();
    let inv = uncertop::discretize::assemble_inverse(&spec, &grid, &grid).unwrap();

    // Σ = full truncated cone: identity up to the round-trip defect on
    // resolved functions
    let full = SetSpec::single(0.0, 12.0).unwrap();
    let f_full = project_band(&full, &fwd, &inv).unwrap();
    let g = grid.sample(|x| (-0.5 * x * x).exp());
    let fg = &f_full.matrix * &g;
    assert!(grid.norm(&(&fg - &g)) / grid.norm(&g) < 1e-8);

    // Σ = ∅: the zero operator
    let none = project_band(&SetSpec::empty(), &fwd, &inv).unwrap();
    assert!(none.matrix.iter().all(|c| c.norm() == 0.0));
}

#[test]
fn band_projection_defects_match_spectrum() {
    // F_Σ on the truncated cone is the concentration operator of ([0,R], Σ):
    // self-adjoint to round-off, with idempotency defect exactly max λ(1-λ)
    // over its spectrum.
    let spec = TransformSpec::hankel(0.0).unwrap();
    let pair = ConcentrationPair::build_default(
        &spec,
        12.0,
        48,
        16,
        SetSpec::single(0.0, 1.0).unwrap(),
        SetSpec::single(0.0, 2.0).unwrap(),
    )
    .unwrap();
    let defects = projection_defects(&pair);
    assert!(defects.self_adjoint < 1e-12, "{:e}", defects.self_adjoint);

    let eigs = eigs_oracle(&pair.f_sigma, pair.grid.weights());
    assert!(eigs.iter().all(|&l| (-1e-9..=1.0 + 1e-9).contains(&l)));
    let max_ll = eigs.iter().map(|&l| l * (1.0 - l)).fold(0.0f64, f64::max);
    assert!(
        (defects.idempotency - max_ll).abs() < 1e-6,
        "defect {} vs max λ(1-λ) {}",
        defects.idempotency,
        max_ll
    );
}

#[test]
fn hs_norm_small_set_asymptotics() {
    // kernel ≈ 1 near the origin, so ‖E_S F_Σ‖²_HS ≈ μ(S) μ̂(Σ)
    let spec = TransformSpec::hankel(0.0).unwrap();
    let pair = ConcentrationPair::build_default(
        &spec,
        12.0,
        48,
        16,
        SetSpec::single(0.0, 0.01).unwrap(),
        SetSpec::single(0.0, 0.01).unwrap(),
    )
    .unwrap();
    let hs = hs_norm_kernel(&pair).unwrap();
    let product = weighted_measure(&pair.s, &spec, 0.0).unwrap()
        * weighted_measure(&pair.sigma, &spec, 0.0).unwrap();
    let rel = (hs.value * hs.value - product).abs() / product;
    assert!(rel < 1e-3, "{rel:e}");
    assert!(hs.value <= hs.bound);
}

#[test]
fn hs_norm_empty_sets_are_zero() {
    let spec = TransformSpec::hankel(0.0).unwrap();
    let pair = ConcentrationPair::build_default(
        &spec,
        12.0,
        48,
        16,
        SetSpec::empty(),
        SetSpec::single(0.0, 1.0).unwrap(),
    )
    .unwrap();
    assert_eq!(hs_norm_kernel(&pair).unwrap().value, 0.0);
    assert_eq!(hs_norm_matrix(&pair), 0.0);
    let on = op_norm(&pair, 1e-10, 100).unwrap();
    assert_eq!(on.value, 0.0);
    assert_eq!(on.iterations, 0);
}

#[test]
fn hs_dual_route_and_chain() {
    for &(alpha, s_iv, sg_iv) in &[(0.0, [0.0, 1.0], [0.0, 1.0]), (1.0, [0.5, 1.5], [0.0, 2.0])] {
        let spec = TransformSpec::hankel(alpha).unwrap();
        let pair = ConcentrationPair::build_default(
            &spec,
            12.0,
            48,
            16,
            SetSpec::new(vec![s_iv]).unwrap(),
            SetSpec::new(vec![sg_iv]).unwrap(),
        )
        .unwrap();
        let hk = hs_norm_kernel(&pair).unwrap();
        let hm = hs_norm_matrix(&pair);
        assert!(
            (hk.value - hm).abs() / hk.value < 1e-5,
            "dual-route gap {:e}",
            (hk.value - hm).abs() / hk.value
        );
        let on = op_norm(&pair, 1e-12, 30000).unwrap();
        assert!(on.value <= hm + 1e-10);
        assert!(hm <= hk.bound + 1e-10);
        // the round-trip Frobenius diagnostic sits below the true HS norm
        let rt = hs_norm_roundtrip(&pair);
        assert!(rt <= hk.value + 1e-10 && rt > 0.8 * hk.value);
    }
}

#[test]
fn op_norm_matches_dense_eigensolver_and_anchor() {
    let pair = pair_alpha0_unit();
    let on = op_norm(&pair, 1e-12, 30000).unwrap();
    let eigs = eigs_oracle(&pair.composite, pair.grid.weights());
    assert!((on.value * on.value - eigs[0]).abs() < 1e-8);
    // regression anchor at the reference discretization (R=12, aligned 0.25
    // panels, 16 nodes); stable to 1e-13 under panel refinement at fixed R
    assert!(
        (on.value - 0.45927071033316).abs() < 1e-9,
        "anchor drifted: {}",
        on.value
    );
    assert!(on.value > 0.0 && on.value < 1.0);
}

#[test]
fn prolate_pairs_contract() {
    let pair = pair_alpha0_unit();
    let on = op_norm(&pair, 1e-12, 30000).unwrap();
    let pro = prolate_pairs(&pair, 5, 1e-11, 50000).unwrap();
    // top eigenvalue is the squared operator norm
    assert!((pro[0].eigenvalue - on.value * on.value).abs() < 1e-8);
    // eigenvalues lie in [0,1] up to defect and are non-increasing
    for w in pro.windows(2) {
        assert!(w[1].eigenvalue <= w[0].eigenvalue + 1e-9);
    }
    for p in &pro {
        assert!(p.eigenvalue >= -1e-9 && p.eigenvalue <= 1.0 + 1e-6);
    }
    // orthonormal in the weighted inner product
    let w = pair.grid.weights();
    for i in 0..pro.len() {
        for j in 0..=i {
            let d = linalg::dot_w(w, &pro[i].vector, &pro[j].vector);
            let expect = if i == j { 1.0 } else { 0.0 };
            assert!(
                (d.re - expect).abs().max(d.im.abs()) < 1e-8,
                "({i},{j}): {d}"
            );
        }
    }
    // against the dense oracle, down to the eigensolver noise floor
    let eigs = eigs_oracle(&pair.composite, pair.grid.weights());
    for (i, p) in pro.iter().enumerate() {
        assert!(
            (p.eigenvalue - eigs[i]).abs() < 1e-11,
            "λ{i}: {} vs {}",
            p.eigenvalue,
            eigs[i]
        );
    }
}

#[test]
fn op_norm_monotone_in_s() {
    let spec = TransformSpec::hankel(0.0).unwrap();
    let sigma = SetSpec::single(0.0, 1.0).unwrap();
    let mut last = 0.0;
    for hi in [0.5, 1.0, 1.5, 2.0] {
        let pair = ConcentrationPair::build_default(
            &spec,
            12.0,
            48,
            16,
            SetSpec::single(0.0, hi).unwrap(),
            sigma.clone(),
        )
        .unwrap();
        let on = op_norm(&pair, 1e-12, 30000).unwrap();
        assert!(on.value >= last - 1e-9, "S=[0,{hi}]: {} < {last}", on.value);
        last = on.value;
    }
}

#[test]
fn plancherel_transfer_quadratic_form() {
    // ⟨(I-F_Σ)f, f⟩ = ‖Tf‖²_{L²(Σ^c)} holds to round-off discretely.
    let spec = TransformSpec::hankel(0.0).unwrap();
    for sg in [[0.0, 1.0], [0.0, 2.5], [0.0, 8.0]] {
        let pair = ConcentrationPair::build_default(
            &spec,
            12.0,
            48,
            16,
            SetSpec::single(0.0, 1.0).unwrap(),
            SetSpec::new(vec![sg]).unwrap(),
        )
        .unwrap();
        let f = pair.grid.sample(|x| (-0.5 * x * x).exp());
        let nf = pair.grid.norm(&f);
        let fu = &f / C64::new(nf, 0.0);
        let lhs = pair.band_complement_mass(&fu);
        let rhs = pair.transform_complement_norm(&fu);
        assert!(
            (lhs * lhs - rhs * rhs).abs() < 1e-9,
            "Σ={sg:?}: {lhs} vs {rhs}"
        );
    }
}

#[test]
fn annihilation_certificate_on_random_functions() {
    let pair = pair_alpha0_unit();
    let on = op_norm(&pair, 1e-12, 30000).unwrap();
    let c = annihilation_constant(on.value).value().unwrap();
    let spec = pair.spec;
    let w = pair.grid.weights();
    for f in random_combinations(&spec, 11, 20, 6) {
        let fv = pair.grid.sample(&f);
        let nf = linalg::norm_w(w, &fv);
        if nf == 0.0 {
            continue;
        }
        let fu: DVector<C64> = &fv / C64::new(nf, 0.0);
        let e1 = pair.time_complement_norm(&fu);
        let e2 = pair.band_complement_norm(&fu);
        let rhs = c * (e1 * e1 + e2 * e2);
        assert!(rhs >= 1.0 - 1e-6, "certificate slack violated: {rhs}");
    }
}
