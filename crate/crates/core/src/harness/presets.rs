//! Catalog of ready-made configurations.

use std::collections::BTreeMap;

use crate::fieldlang::{parse_scalar_expr, ScalarFieldExpr};
use crate::linalg::{standard_basis, MatrixField2};

use super::config::{ChartSpec, ConfigFile, GaugeSpec, MatrixText, OperatorSpec, RawSpec};

/// Names of the catalog presets, each expected to pass every suite.
pub const CATALOG: [&str; 6] = ["minkowski", "conformal", "em_wave", "boosted", "curved", "sl2c_xdep"];

/// Presets built to fail a suite.
pub const NEGATIVE_CONTROLS: [&str; 2] = ["neg_broken_csub", "neg_non_hermitian"];

/// Default conformal factor exponent `ψ` of the `conformal` preset.
pub const CONFORMAL_PSI: &str = "0.3*x1 + 0.2*sin(x2 + x4)";

/// `R(x) = I + x¹ n` with `n = 0.3 (1 i; i −1)`, `n² = 0`, so `det R = 1`.
pub const SHEAR_R: [[&str; 2]; 2] = [["1 + 0.3*x1", "0.3*i*x1"], ["0.3*i*x1", "1 - 0.3*x1"]];

/// Constant `R` with `det R = 1`.
pub const BOOST_R: [[&str; 2]; 2] = [["1.2", "0.3 + 0.1*i"], ["-0.2*i", "0.85 - 0.05*i"]];

fn e(s: &str) -> ScalarFieldExpr {
    parse_scalar_expr(s).expect("preset expression parses")
}

fn m(t: [[&str; 2]; 2]) -> MatrixField2 {
    MatrixField2::parse(&t).expect("preset matrix parses")
}

fn basis() -> [MatrixField2; 4] {
    std::array::from_fn(|a| MatrixField2::constant(&standard_basis(a)))
}

fn text(m: [[&str; 2]; 2]) -> MatrixText {
    m.map(|row| row.map(String::from))
}

fn sigma_text(sigma: &[MatrixField2; 4]) -> [MatrixText; 4] {
    std::array::from_fn(|a| sigma[a].to_strings())
}

fn conjugated(sigma: [MatrixField2; 4], r: &MatrixField2) -> [MatrixField2; 4] {
    let rs = r.adjoint();
    sigma.map(|s| rs.mul(&s).mul(r))
}

/// Gauges exercised by every catalog preset: one of each kind plus an
/// `x`-dependent `SL(2,C)` shear.
pub fn default_gauges() -> Vec<GaugeSpec> {
    let scalar = |kind: &str, expr: &str| GaugeSpec {
        kind: kind.into(),
        expr: Some(expr.into()),
        matrix: None,
    };
    let matrix = |kind: &str, t: [[&str; 2]; 2]| GaugeSpec {
        kind: kind.into(),
        expr: None,
        matrix: Some(text(t)),
    };
    vec![
        scalar("scalar_psi", "0.2*x4 + 0.1*sin(x1)"),
        scalar("phase_phi", "0.3*x3 - 0.2*x1*x2"),
        matrix(
            "sl2c_R",
            [["exp(0.2*x2 + 0.1*i*x3)", "0.3*x1 + 0.2*i*x4"], ["0", "exp(-0.2*x2 - 0.1*i*x3)"]],
        ),
        matrix("sl2c_R", SHEAR_R),
        matrix("gl2c_Q", [["2 + x1", "i*x2"], ["0.3", "1 + 0.5*i*x3"]]),
    ]
}

fn config(name: &str, sigma: [MatrixField2; 4], potential: [&str; 4], rho: &str) -> ConfigFile {
    ConfigFile {
        name: name.into(),
        operator: OperatorSpec {
            sigma: Some(sigma_text(&sigma)),
            raw: None,
        },
        csub: None,
        potential: Some(potential.map(String::from)),
        rho: rho.into(),
        reference_potential: None,
        chart: ChartSpec::default(),
        seed: 42,
        samples: 200,
        gauges: default_gauges(),
        mass_values: vec![0.0, 1.0, 2.5],
        bispinor: None,
        suites: Vec::new(),
        tolerances: BTreeMap::new(),
    }
}

/// `σ^α = e^{2ψ} s^α` with zero covariant subprincipal symbol.
pub fn conformal(psi: &str) -> ConfigFile {
    let w = ScalarFieldExpr::call(crate::fieldlang::Func::Exp, ScalarFieldExpr::real(2.0) * e(psi));
    config("conformal", basis().map(|s| s.scale(&w)), ["0"; 4], "1")
}

/// Looks up a catalog preset or negative control by name.
pub fn preset(name: &str) -> Option<ConfigFile> {
    let cfg = match name {
        "minkowski" => config(name, basis(), ["0.3", "-0.2", "0.1", "0.7"], "1"),
        "conformal" => conformal(CONFORMAL_PSI),
        "em_wave" => config(name, basis(), ["0", "0", "0", "0.5*cos(x1)"], "1"),
        "boosted" => config(name, conjugated(basis(), &m(BOOST_R)), ["0.2", "0.1*x3", "0", "0.4"], "exp(0.2*x2)"),
        "curved" => {
            let mut sigma = basis();
            sigma[3] = sigma[3].scale(&e("1 + 0.1*sin(x1)"));
            config(name, sigma, ["0.1*x2", "0", "0.2*sin(x3)", "0.3"], "exp(0.1*x2)")
        }
        "sl2c_xdep" => config(name, conjugated(basis(), &m(SHEAR_R)), ["0", "0.2", "0", "0.5"], "1"),
        "neg_broken_csub" => {
            // The operator carries −A while the geometric side is given +A.
            let mut c = conformal(CONFORMAL_PSI);
            c.name = name.into();
            c.potential = Some(["-0.1", "0", "0.2", "-0.3"].map(String::from));
            c.reference_potential = Some(["0.1", "0", "-0.2", "0.3"].map(String::from));
            c
        }
        "neg_non_hermitian" => {
            // P^α = −i σ^α with σ¹ = s¹ + 0.1 i s³ not Hermitian.
            let mut c = config(name, basis(), ["0"; 4], "1");
            c.operator = OperatorSpec {
                sigma: None,
                raw: Some(RawSpec {
                    p: [
                        text([["0.1", "-i"], ["-i", "-0.1"]]),
                        text([["0", "-1"], ["1", "0"]]),
                        text([["-i", "0"], ["0", "i"]]),
                        text([["-i", "0"], ["0", "-i"]]),
                    ],
                    q: text([["0", "0"], ["0", "0"]]),
                }),
            };
            c.potential = None;
            c.gauges = Vec::new();
            c.suites = vec!["selfadjoint".into()];
            c
        }
        _ => return None,
    };
    Some(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::validate;

    #[test]
    fn every_preset_validates() {
        for name in CATALOG.iter().chain(NEGATIVE_CONTROLS.iter()) {
            let mut c = preset(name).unwrap();
            c.samples = 20;
            validate(c).unwrap_or_else(|err| panic!("{name}: {err}"));
        }
    }

    #[test]
    fn boost_matrix_is_unimodular() {
        let d = m(BOOST_R).eval(&[0.0; 4]).unwrap().determinant();
        assert!((d - crate::linalg::ONE).norm() < 1e-15);
    }

    #[test]
    fn preset_files_round_trip_through_json() {
        for name in CATALOG {
            let c = preset(name).unwrap();
            let json = serde_json::to_string_pretty(&c).unwrap();
            assert_eq!(crate::harness::config::parse_config_text(&json).unwrap(), c);
        }
    }
}
