//! Kernel values against independent references.
//!
//! Two oracles are used, neither sharing code with the production recurrences:
//!
//! * positive-term series for `s_l` (power series) and `e_l` (finite sum),
//!   evaluated in f64 without cancellation;
//! * 60-digit mpmath values from `oracle/mp_reference.py`, frozen below.

// Oracle digits are kept exactly as printed by the reference script.
#![allow(clippy::excessive_precision)]

use casimir_core::modes::{
    coeff_af, coeff_ag, dlambda_dy, er2_integrand, hperp_integrand, lambda_term, Geometry,
};
use casimir_core::riccati::riccati_table;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// `(s_l, s_l', e_l, e_l')` from positive-term series.
fn series(l: usize, x: f64) -> (f64, f64, f64, f64) {
    // s_l = x^{l+1}/(2l+1)!! sum_k t_k,  t_{k+1} = t_k (x^2/2) / ((k+1)(2l+2k+3))
    let ln_pref =
        (l as f64 + 1.0) * x.ln() - (0..=l).map(|j| ((2 * j + 1) as f64).ln()).sum::<f64>();
    let mut t = 1.0;
    let mut sum = 0.0;
    let mut dsum = 0.0;
    for k in 0..2000 {
        sum += t;
        dsum += (l + 1 + 2 * k) as f64 * t;
        if t < 1e-18 * sum && k > 2 {
            break;
        }
        t *= 0.5 * x * x / ((k + 1) as f64 * (2 * l + 2 * k + 3) as f64);
    }
    let pref = ln_pref.exp();
    let s = pref * sum;
    let ds = pref * dsum / x;

    // e_l = exp(-x) sum_{k=0}^{l} (l+k)!/(k!(l-k)!) (2x)^{-k}
    let mut c = 1.0;
    let mut esum = 0.0;
    let mut desum = 0.0;
    for k in 0..=l {
        esum += c;
        desum += c * (1.0 + k as f64 / x);
        c *= ((l + k + 1) * (l - k)) as f64 / ((k + 1) as f64 * 2.0 * x);
    }
    let ex = (-x).exp();
    (s, ds, ex * esum, -ex * desum)
}

#[test]
fn table_matches_series_oracle() {
    let xs = [0.01, 0.05, 0.3, 1.0, 2.7, 6.0, 13.0, 27.5, 50.0];
    for &x in &xs {
        let table = riccati_table(x, 60).unwrap();
        for l in 0..=60 {
            let (s, ds, e, de) = series(l, x);
            if !(s.is_normal() && e.is_finite() && de.is_finite()) {
                continue;
            }
            let got = table.get(l);
            let (gs, gds, ge, gde) = got.unscaled();
            // Compare logarithms: both sides may sit far from 1.
            assert!(
                (got.ln_s() - s.ln()).abs() < 1e-10,
                "s x={x} l={l}: {gs} vs {s}"
            );
            assert!(
                (got.ln_e() - e.ln()).abs() < 1e-10,
                "e x={x} l={l}: {ge} vs {e}"
            );
            if gds.is_normal() && ds.is_normal() {
                assert!(rel(gds, ds) < 1e-10, "s' x={x} l={l}: {gds} vs {ds}");
            }
            if gde.is_normal() {
                assert!(rel(gde, de) < 1e-10, "e' x={x} l={l}: {gde} vs {de}");
            }
        }
    }
}

#[test]
fn table_matches_mpmath() {
    // (l, x, s, s', e, e')
    let cases: [(usize, f64, f64, f64, f64, f64); 7] = [
        (
            0,
            1.0,
            1.175_201_193_643_801_5,
            1.543_080_634_815_243_8,
            0.367_879_441_171_442_32,
            -0.367_879_441_171_442_32,
        ),
        (
            3,
            2.7,
            0.748_456_385_473_270_59,
            1.318_635_778_705_112_1,
            0.406_049_951_305_657_63,
            -0.620_701_506_839_482_1,
        ),
        (
            10,
            0.5,
            3.570_663_374_522_377_8e-14,
            7.863_218_363_429_593_2e-13,
            666_047_937_663.035_7,
            -13_338_472_788_073.123,
        ),
        (
            25,
            7.0,
            4.982_031_181_637_484e-12,
            1.915_197_580_919_347_8e-11,
            26_565_959_195.194_58,
            -98_596_209_906.531_06,
        ),
        (
            40,
            3.0,
            5.958_469_070_729_421e-42,
            8.164_750_292_710_547e-41,
            6.198_871_152_119_451e39,
            -8.288_666_830_356_11e40,
        ),
        (
            60,
            50.0,
            6_688_684.502_897_597,
            10_539_444.021_035_343,
            4.762_040_461_588_804e-8,
            -7.447_016_092_267_626e-8,
        ),
        (
            5,
            0.01,
            9.620_046_620_108_288e-17,
            5.772_035_372_097_039e-14,
            9_449_947_500_187.498,
            -4_724_984_250_018_749.5,
        ),
    ];
    for &(l, x, s, ds, e, de) in &cases {
        let t = riccati_table(x, l.max(1)).unwrap();
        let (gs, gds, ge, gde) = t.get(l).unscaled();
        for (name, got, want) in [("s", gs, s), ("s'", gds, ds), ("e", ge, e), ("e'", gde, de)] {
            assert!(rel(got, want) < 1e-10, "{name}_{l}({x}): {got} vs {want}");
        }
    }
}

#[test]
fn mode_kernels_match_mpmath() {
    assert!(rel(coeff_af(1, 1.0).unwrap(), 0.5) < 1e-12);
    assert!(rel(coeff_ag(1, 1.0).unwrap(), -0.731_509_349_821_775_04) < 1e-10);

    assert!(
        rel(
            lambda_term(3, 1.0, 2.0).unwrap(),
            -0.010_549_059_295_838_296
        ) < 1e-10
    );
    assert!(rel(lambda_term(1, 0.5, 1.0).unwrap(), -0.218_258_162_250_424_41) < 1e-10);
    assert!(rel(lambda_term(7, 4.5, 5.0).unwrap(), -0.335_156_898_062_935_65) < 1e-10);
    assert!(rel(dlambda_dy(1, 0.5, 1.0).unwrap(), 0.810_837_109_104_301_33) < 1e-10);
    assert!(rel(dlambda_dy(4, 2.7, 3.0).unwrap(), 3.485_579_162_235_677_3) < 1e-10);

    let half = Geometry::from_ratio(0.5).unwrap();
    assert!(
        rel(
            er2_integrand(1, &half, 1.0).unwrap(),
            0.285_679_771_277_287_03
        ) < 1e-10
    );
    assert!(
        rel(
            hperp_integrand(1, &half, 1.0).unwrap(),
            0.758_154_240_543_177_23
        ) < 1e-10
    );
    let g = Geometry::from_ratio(0.8).unwrap();
    assert!(rel(er2_integrand(6, &g, 2.5).unwrap(), 6.479_905_062_010_72) < 1e-10);
    assert!(
        rel(
            hperp_integrand(6, &g, 2.5).unwrap(),
            3.731_003_537_636_057_7
        ) < 1e-10
    );
}
