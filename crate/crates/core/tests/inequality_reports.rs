//! Certificate-level checks: local and global inequality reports on the
//! shipped families, Donoho-Stark with computed prolates, strong annihilation,
//! and the printed Dunkl constants against an independent high-precision
//! evaluation.

use uncertop::concentration::*;
use uncertop::discretize::*;
use uncertop::families::*;
use uncertop::inequalities::*;
use uncertop::transforms::*;

fn shipped_family(spec: &TransformSpec) -> Vec<RealFn> {
    let mut fam = laguerre_gaussian_family(spec, 6);
    fam.extend(default_dilation_family(spec));
    fam.extend(random_combinations(spec, 42, 50, 6));
    fam
}

fn forward_for(spec: &TransformSpec, criticals: &[f64]) -> DiscreteOperator {
    let grid = Grid::build_aligned(spec, 12.0, 48, 16, criticals).unwrap();
    assemble_forward(spec, &grid, &grid).unwrap()
}

#[test]
fn local_certificates_pass_in_both_regimes() {
    for &alpha in &[0.0, 1.0] {
        let spec = TransformSpec::hankel(alpha).unwrap();
        let a = spec.a();
        let sigma = SetSpec::single(0.0, 1.0).unwrap();
        let fwd = forward_for(&spec, &sigma.endpoints());
        let fam = shipped_family(&spec);
        for &frac in &[0.25, 0.5, 0.75, 1.5, 2.0] {
            let rep = verify_local(&fwd, frac * a, &sigma, &fam).unwrap();
            assert!(
                rep.pass,
                "alpha={alpha}, s={}: ratio {}",
                frac * a,
                rep.left
            );
            assert!(rep.left > 0.0 && rep.left <= 1.0);
        }
    }
}

#[test]
fn local_zero_function_gives_zero_ratio() {
    let spec = TransformSpec::hankel(0.0).unwrap();
    let sigma = SetSpec::single(0.0, 1.0).unwrap();
    let fwd = forward_for(&spec, &sigma.endpoints());
    let fam: Vec<RealFn> = vec![Box::new(|_| 0.0)];
    let rep = verify_local(&fwd, 0.5, &sigma, &fam).unwrap();
    assert_eq!(rep.left, 0.0);
    assert!(rep.pass);
}

#[test]
fn local_dilation_sweep_peaks_in_the_interior() {
    // the worst ratio over the dilation sweep sits strictly inside the λ
    // range, matching the balance structure of the bound
    let spec = TransformSpec::hankel(0.0).unwrap();
    let sigma = SetSpec::single(0.0, 1.0).unwrap();
    let fwd = forward_for(&spec, &sigma.endpoints());
    let fam = default_dilation_family(&spec);
    let mut ratios = Vec::new();
    for f in &fam {
        let rep = verify_local(&fwd, 0.5, &sigma, std::slice::from_ref(f)).unwrap();
        ratios.push(rep.left);
    }
    let (imax, _) = ratios
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap();
    assert!(
        imax > 0 && imax < ratios.len() - 1,
        "peak at endpoint {imax}"
    );
}

#[test]
fn global_certificates_and_dilation_invariance() {
    // α = 1: s = 1 < a = 2, the local route applies
    let spec = TransformSpec::hankel(1.0).unwrap();
    let fwd = forward_for(&spec, &[1.0]);
    let fam = shipped_family(&spec);
    let rep = verify_global(&fwd, 1.0, 1.0, &fam, GlobalRoute::LocalUncertainty).unwrap();
    assert!(
        rep.pass,
        "min ratio {} below constant {}",
        rep.right, rep.left
    );
    assert!(rep.constant < spec.a()); // any valid constant sits below sharp

    // the uncertainty product is dilation invariant
    let a = spec.a();
    let g1: RealFn = Box::new(|x: f64| (-0.5 * x * x).exp());
    for &lambda in &[0.5f64, 2.0] {
        let g2: RealFn =
            Box::new(move |x: f64| lambda.powf(-a) * (-0.5 * (x / lambda).powi(2)).exp());
        let r1 = global_ratio(&fwd, 1.0, 1.0, &g1);
        let r2 = global_ratio(&fwd, 1.0, 1.0, &g2);
        assert!((r1 - r2).abs() / r1 < 1e-8, "λ={lambda}: {r1} vs {r2}");
    }

    // annihilation route at s = a where the local route is unavailable
    let spec0 = TransformSpec::hankel(0.0).unwrap();
    let fwd0 = forward_for(&spec0, &[1.0]);
    assert!(global_constant(&spec0, 1.0, 1.0, GlobalRoute::LocalUncertainty).is_err());
    let pair = ConcentrationPair::build_default(
        &spec0,
        12.0,
        48,
        16,
        SetSpec::single(0.0, 1.0).unwrap(),
        SetSpec::single(0.0, 1.0).unwrap(),
    )
    .unwrap();
    let on = op_norm(&pair, 1e-12, 30000).unwrap();
    let rep0 = verify_global(
        &fwd0,
        1.0,
        1.0,
        &random_combinations(&spec0, 42, 50, 6),
        GlobalRoute::Annihilation {
            unit_ball_op_norm: on.value,
        },
    )
    .unwrap();
    assert!(rep0.pass);
    // sharp data recorded for s = β = 1
    assert!((rep0.params["sharp_constant"] - 1.0).abs() < 1e-15);
    assert!((rep0.params["gaussian_ratio"] - 1.0).abs() < 1e-6);
}

#[test]
fn donoho_stark_with_top_prolate_and_degenerate_sets() {
    let spec = TransformSpec::hankel(0.0).unwrap();
    let pair = ConcentrationPair::build_default(
        &spec,
        12.0,
        48,
        16,
        SetSpec::single(0.0, 1.0).unwrap(),
        SetSpec::single(0.0, 1.0).unwrap(),
    )
    .unwrap();
    let pro = prolate_pairs(&pair, 1, 1e-11, 50000).unwrap();
    let rep = verify_donoho_stark(&pair, &pro[0].vector).unwrap();
    assert!(rep.pass && rep.margin > 0.0, "margin {}", rep.margin);
    assert!(rep.params["eps1"] > 0.0 && rep.params["eps2"] < 0.2);

    // Σ = full truncated cone: ε₂ is tiny, the bound degenerates and the
    // measure product beats it trivially
    let full = ConcentrationPair::build_default(
        &spec,
        12.0,
        48,
        16,
        SetSpec::single(0.0, 1.0).unwrap(),
        SetSpec::single(0.0, 12.0).unwrap(),
    )
    .unwrap();
    let f = full.grid.sample(|x| (-0.5 * x * x).exp());
    let rep = verify_donoho_stark(&full, &f).unwrap();
    assert!(rep.pass);
    assert!(rep.params["eps2"] < 1e-6);
}

#[test]
fn donoho_stark_vacuous_case_is_flagged() {
    // a function concentrated far away from S with little band mass in Σ:
    // ε₁² + ε₂² reaches 1 and the bound degenerates to zero
    let spec = TransformSpec::hankel(0.0).unwrap();
    let pair = ConcentrationPair::build_default(
        &spec,
        12.0,
        48,
        16,
        SetSpec::single(0.0, 0.25).unwrap(),
        SetSpec::single(0.0, 0.25).unwrap(),
    )
    .unwrap();
    let f = pair
        .grid
        .sample(|x| (-0.5 * (x - 8.0) * (x - 8.0) / 0.01).exp());
    let rep = verify_donoho_stark(&pair, &f).unwrap();
    assert_eq!(rep.params["vacuous"], 1.0);
    assert!(rep.pass);
    assert_eq!(rep.left, 0.0);
}

#[test]
fn strong_annihilation_reports() {
    let spec = TransformSpec::hankel(0.0).unwrap();
    let fam = random_combinations(&spec, 7, 20, 6);
    for (s_iv, sg_iv) in [
        ([0.0, 1.0], [0.0, 1.0]),
        ([0.0, 0.5], [0.0, 1.0]),
        ([0.5, 1.5], [0.0, 2.0]),
    ] {
        let pair = ConcentrationPair::build_default(
            &spec,
            12.0,
            48,
            16,
            SetSpec::new(vec![s_iv]).unwrap(),
            SetSpec::new(vec![sg_iv]).unwrap(),
        )
        .unwrap();
        let on = op_norm(&pair, 1e-12, 30000).unwrap();
        assert!(on.value < 0.95);
        let rep = verify_strong_annihilation(&pair, on.value, &fam).unwrap();
        assert!(rep.pass, "S={s_iv:?}, Σ={sg_iv:?}: margin {}", rep.margin);
    }
}

/// Independent high-precision route for the printed constants: log-domain
/// evaluation with a shift-plus-Stirling log-gamma.
mod hp {
    pub fn ln_gamma(x: f64) -> f64 {
        assert!(x > 0.0);
        let mut y = x;
        let mut shift = 1.0;
        while y < 40.0 {
            shift *= y;
            y += 1.0;
        }
        const C: [f64; 9] = [
            1.0 / 12.0,
            -1.0 / 360.0,
            1.0 / 1260.0,
            -1.0 / 1680.0,
            1.0 / 1188.0,
            -691.0 / 360_360.0,
            1.0 / 156.0,
            -3617.0 / 122_400.0,
            43_867.0 / 244_188.0,
        ];
        let mut s = (y - 0.5) * y.ln() - y + 0.5 * (2.0 * std::f64::consts::PI).ln();
        let mut inv = 1.0 / y;
        let inv2 = inv * inv;
        for c in C {
            s += c * inv;
            inv *= inv2;
        }
        s - shift.ln()
    }

    /// ln c_k for the rank-one Mehta constant.
    pub fn ln_c_k(k: f64) -> f64 {
        -(k + 0.5) * 2.0f64.ln() - ln_gamma(k + 0.5)
    }

    /// ln d_k from ln c_k.
    pub fn ln_d_k(ln_ck: f64, gamma_idx: f64, d: u32) -> f64 {
        let e = gamma_idx + d as f64 / 2.0;
        -ln_ck - (e - 1.0) * 2.0f64.ln() - ln_gamma(e)
    }
}

#[test]
fn printed_dunkl_constants_match_high_precision_oracle() {
    // spot values at (d, γ, s) = (1, 1, 0.5) and (1, 1, 2.5)
    let d = 1u32;
    let gamma_idx = 1.0;
    let g = 2.0 * gamma_idx + d as f64;
    let ln_ck = hp::ln_c_k(gamma_idx);
    let c_k = ln_ck.exp();
    let ln_dk = hp::ln_d_k(ln_ck, gamma_idx, d);

    // small-s: ln c = ln(G/(G-2s)) + (G/2s)(ln c_k - ln 2s + ½ ln((G-2s) d_k))
    let s = 0.5;
    let expect_small = ((g / (g - 2.0 * s)).ln()
        + (g / (2.0 * s)) * (ln_ck - (2.0 * s).ln() + 0.5 * ((g - 2.0 * s).ln() + ln_dk)))
        .exp();
    let got_small = dunkl_local_constant_small_s(d, gamma_idx, s, c_k).unwrap();
    assert!(
        ((got_small - expect_small) / expect_small).abs() < 1e-10,
        "{got_small} vs {expect_small}"
    );

    // large-s: ln c' = ln c_k + ½[ln d_k - ln G + (G/2s - 1) ln(2s/G - 1)
    //                              + lnΓ(G/2s) + lnΓ(1 - G/2s)]
    let s = 2.5;
    let r = g / (2.0 * s);
    let expect_large = (ln_ck
        + 0.5
            * (ln_dk - g.ln()
                + (r - 1.0) * (2.0 * s / g - 1.0).ln()
                + hp::ln_gamma(r)
                + hp::ln_gamma(1.0 - r)))
    .exp();
    let got_large = dunkl_local_constant_large_s(d, gamma_idx, s, c_k).unwrap();
    assert!(
        ((got_large - expect_large) / expect_large).abs() < 1e-10,
        "{got_large} vs {expect_large}"
    );
}

#[test]
fn dunkl_certificates_pass_on_the_full_line() {
    let spec = TransformSpec::dunkl1d(0.5).unwrap();
    let a = spec.a(); // 1
    let sigma = SetSpec::single(-1.0, 1.0).unwrap();
    let fwd = forward_for(&spec, &sigma.endpoints());
    // even/odd Gaussian-type functions resolved on the two-sided grid
    let fam: Vec<RealFn> = vec![
        Box::new(|x: f64| (-0.5 * x * x).exp()),
        Box::new(|x: f64| x * (-0.5 * x * x).exp()),
        Box::new(|x: f64| (1.0 - x * x) * (-0.5 * x * x).exp()),
    ];
    for &s in &[0.25 * a, 0.5 * a, 1.5 * a, 2.0 * a] {
        let rep = verify_local(&fwd, s, &sigma, &fam).unwrap();
        assert!(rep.pass, "s={s}: ratio {}", rep.left);
    }
    // sharp Heisenberg constant for the Dunkl family is a = k + 1/2,
    // attained by the Gaussian
    let g: RealFn = Box::new(|x: f64| (-0.5 * x * x).exp());
    let ratio = global_ratio(&fwd, 1.0, 1.0, &g);
    assert!(
        (ratio - a).abs() < 1e-6 * a,
        "gaussian ratio {ratio} vs {a}"
    );
    for f in &fam {
        assert!(global_ratio(&fwd, 1.0, 1.0, f) >= a * (1.0 - 1e-6));
    }
}

#[test]
fn report_serialization_and_csv() {
    let spec = TransformSpec::hankel(0.0).unwrap();
    let sigma = SetSpec::single(0.0, 1.0).unwrap();
    let fwd = forward_for(&spec, &sigma.endpoints());
    let fam: Vec<RealFn> = vec![Box::new(|x: f64| (-0.5 * x * x).exp())];
    let rep = verify_local(&fwd, 0.5, &sigma, &fam).unwrap();
    let js = serde_json::to_string(&rep).unwrap();
    assert!(js.contains("\"id\":\"local\""));
    let row = rep.csv_row();
    assert!(row.starts_with("local,"));
    assert_eq!(row.trim_end().split(',').count(), 6);
}
