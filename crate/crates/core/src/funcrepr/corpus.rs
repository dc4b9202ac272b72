//! Named example functions.

use crate::error::Error;
use crate::funcrepr::FunctionExpr;
use crate::scalar::Real;

/// Every name accepted by [`corpus`].
pub const NAMES: &[&str] = &[
    "indicator",
    "heaviside",
    "gaussian",
    "power_tail",
    "sin_over_abs",
    "osc_exp_cube",
    "x2_sin_inv4",
    "gamma_cusp",
    "log_cusp",
    "cantor_primitive",
    "weierstrass",
    "weierstrass_primitive",
    "sobolev_gn",
    "sobolev_tent",
];

fn param(params: &[f64], i: usize, default: f64) -> f64 {
    params.get(i).copied().unwrap_or(default)
}

fn lit(v: f64) -> String {
    format!("({v:?})")
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn build<T: Real>(text: &str, label: String) -> Result<FunctionExpr<T>, Error> {
    Ok(FunctionExpr::parse(text)?.with_label(label))
}

fn level(v: f64, max: f64, what: &str) -> Result<u32, Error> {
    if v < 0.0 || v.fract() != 0.0 || v > max {
        return Err(invalid(format!("{what} must be an integer in [0, {max}]")));
    }
    Ok(v as u32)
}

/// `Σ_{n<terms} a^n cos(b^n π x)` as DSL text.
fn weierstrass_text(a: f64, b: f64, terms: u32) -> String {
    let parts: Vec<String> = (0..terms)
        .map(|n| format!("{}*cos({}*x)", lit(a.powi(n as i32)), lit(b.powi(n as i32) * std::f64::consts::PI)))
        .collect();
    parts.join(" + ")
}

/// Looks up a named example. Parameters are positional:
///
/// | name | parameters (defaults) |
/// |---|---|
/// | `indicator` | `a = 0, b = 1` |
/// | `heaviside` | none; `χ_(0,∞)`, in no `L^p` |
/// | `gaussian` | width `w = 1`: `exp(-(x/w)^2)` |
/// | `power_tail` | `γ = 3`: `x (|x|+1)^(-γ)` |
/// | `sin_over_abs` | none |
/// | `osc_exp_cube` | none: `sin(exp(|x|^3))/(x^2+1)` |
/// | `x2_sin_inv4` | none: `x^2 sin(x^(-4))`, `0` at `0` |
/// | `gamma_cusp` | `γ = 0.25`, optional `p`: `|x|^(-γ) e^(-|x|)`; needs `γ < 1/p` |
/// | `log_cusp` | none: `log|x| e^(-|x|)` |
/// | `cantor_primitive` | `level = 8`: `exp(-x^2) c_level(x)` |
/// | `weierstrass` | `a = 0.5, b = 3, terms = 40`: `Σ a^n cos(b^n π x)` |
/// | `weierstrass_primitive` | same, times `exp(-x^2)` |
/// | `sobolev_gn` | `α = 1, β = 1`: `β χ_(0,α) - β χ_(α,2α)` |
/// | `sobolev_tent` | `α = 1, β = 1`: the primitive of `sobolev_gn` |
///
/// `cantor_primitive` and `weierstrass` are finite-level approximants; the
/// level or term count is part of the label.
pub fn corpus<T: Real>(name: &str, params: &[f64]) -> Result<FunctionExpr<T>, Error> {
    match name {
        "indicator" => {
            let (a, b) = (param(params, 0, 0.0), param(params, 1, 1.0));
            if !(a < b) {
                return Err(invalid("indicator needs a < b"));
            }
            build(&format!("indicator({}, {})", lit(a), lit(b)), format!("indicator({a:?},{b:?})"))
        }
        "heaviside" => build("piecewise(x > 0 -> 1, 0)", "heaviside".into()),
        "gaussian" => {
            let w = param(params, 0, 1.0);
            if !(w > 0.0) {
                return Err(invalid("gaussian width must be positive"));
            }
            let text = if w == 1.0 {
                "exp(-x^2)".to_string()
            } else {
                format!("exp(-(x/{})^2)", lit(w))
            };
            build(&text, format!("gaussian({w:?})"))
        }
        "power_tail" => {
            let g = param(params, 0, 3.0);
            build(&format!("x*(abs(x)+1)^(-{})", lit(g)), format!("power_tail({g:?})"))
        }
        "sin_over_abs" => build("sin(x)/abs(x)", "sin_over_abs".into()),
        "osc_exp_cube" => build("sin(exp(abs(x)^3))/(x^2+1)", "osc_exp_cube".into()),
        "x2_sin_inv4" => build("piecewise(x == 0 -> 0, x^2*sin(x^(-4)))", "x2_sin_inv4".into()),
        "gamma_cusp" => {
            let g = param(params, 0, 0.25);
            if !(g > 0.0 && g < 1.0) {
                return Err(invalid("gamma_cusp needs 0 < γ < 1"));
            }
            if let Some(&p) = params.get(1) {
                if !(p >= 1.0) {
                    return Err(invalid("exponent p must be at least 1"));
                }
                if g >= 1.0 / p {
                    return Err(invalid(format!("gamma_cusp with γ = {g} is not in L^{p}: need γ < 1/p")));
                }
            }
            build(&format!("abs(x)^(-{})*exp(-abs(x))", lit(g)), format!("gamma_cusp({g:?})"))
        }
        "log_cusp" => build("log(abs(x))*exp(-abs(x))", "log_cusp".into()),
        "cantor_primitive" => {
            let l = level(param(params, 0, 8.0), 16.0, "cantor level")?;
            build(&format!("exp(-x^2)*cantor({l}, x)"), format!("cantor_primitive(level={l})"))
        }
        "weierstrass" | "weierstrass_primitive" => {
            let (a, b) = (param(params, 0, 0.5), param(params, 1, 3.0));
            let terms = level(param(params, 2, 40.0), 64.0, "term count")?;
            if !(a > 0.0 && a < 1.0) || !(b > 0.0) || terms == 0 {
                return Err(invalid("weierstrass needs 0 < a < 1, b > 0, terms ≥ 1"));
            }
            let sum = weierstrass_text(a, b, terms);
            if name == "weierstrass" {
                build(&sum, format!("weierstrass(a={a:?},b={b:?},terms={terms})"))
            } else {
                build(
                    &format!("exp(-x^2)*({sum})"),
                    format!("weierstrass_primitive(a={a:?},b={b:?},terms={terms})"),
                )
            }
        }
        "sobolev_gn" | "sobolev_tent" => {
            let (al, be) = (param(params, 0, 1.0), param(params, 1, 1.0));
            if !(al > 0.0) {
                return Err(invalid("sobolev_gn needs α > 0"));
            }
            let (a, b, a2) = (lit(al), lit(be), lit(2.0 * al));
            let text = if name == "sobolev_gn" {
                format!("{b}*indicator(0, {a}) - {b}*indicator({a}, {a2})")
            } else {
                format!("piecewise(x > 0 && x <= {a} -> {b}*x, x > {a} && x < {a2} -> {b}*({a2} - x), 0)")
            };
            build(&text, format!("{name}({al:?},{be:?})"))
        }
        _ => Err(Error::UnknownCorpus(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcrepr::DecayClass;

    type E = FunctionExpr<f64>;

    #[test]
    fn every_name_builds() {
        for n in NAMES {
            let e: E = corpus(n, &[]).unwrap();
            assert!(e.label().is_some());
        }
        assert!(matches!(corpus::<f64>("nope", &[]), Err(Error::UnknownCorpus(_))));
    }

    #[test]
    fn metadata() {
        let s: E = corpus("sin_over_abs", &[]).unwrap();
        assert_eq!(s.singularities(), &[0.0]);
        let g: E = corpus("sobolev_gn", &[2.0, 0.5]).unwrap();
        assert_eq!(g.support_hint(), Some((0.0, 4.0)));
        assert_eq!(g.eval(1.0).unwrap(), 0.5);
        assert_eq!(g.eval(3.0).unwrap(), -0.5);
        let t: E = corpus("sobolev_tent", &[2.0, 0.5]).unwrap();
        assert_eq!(t.eval(2.0).unwrap(), 1.0);
        assert_eq!(t.eval(3.0).unwrap(), 0.5);
        let o: E = corpus("osc_exp_cube", &[]).unwrap();
        assert_eq!(o.decay_class(), DecayClass::Power(2.0));
        let c: E = corpus("cantor_primitive", &[3.0]).unwrap();
        assert_eq!(c.support_hint(), None);
        assert_eq!(c.eval(-1.0).unwrap(), 0.0);
        assert_eq!(c.decay_class(), DecayClass::Gaussian);
        let w: E = corpus("x2_sin_inv4", &[]).unwrap();
        assert_eq!(w.decay_class(), DecayClass::Power(2.0));
        let l: E = corpus("log_cusp", &[]).unwrap();
        assert_eq!(l.singularities(), &[0.0]);
    }

    #[test]
    fn gamma_cusp_range() {
        assert!(corpus::<f64>("gamma_cusp", &[0.25, 2.0]).is_ok());
        assert!(matches!(corpus::<f64>("gamma_cusp", &[0.5, 2.0]), Err(Error::InvalidParameter(_))));
        assert!(corpus::<f64>("gamma_cusp", &[1.5]).is_err());
    }

    #[test]
    fn weierstrass_partial_sum_bound() {
        let w: E = corpus("weierstrass", &[0.5, 3.0, 40.0]).unwrap();
        // Σ a^n = 2 (1 - 2^-40); value at 0 attains it.
        let bound = 2.0 * (1.0 - 0.5f64.powi(40));
        assert!((w.eval(0.0).unwrap() - bound).abs() < 1e-12);
        for i in 0..200 {
            let x = -3.0 + 0.0317 * i as f64;
            assert!(w.eval(x).unwrap().abs() <= bound + 1e-12);
        }
    }
}
