//! Gauss–Kronrod 7/15 panel rule with QUADPACK error rescaling.

use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Clone, Copy, Debug)]
pub struct PanelEstimate<T> {
    pub value: T,
    pub err: T,
    /// Error floor from rounding; refining below it is pointless.
    pub floor: T,
    /// First non-finite sample, if any.
    pub bad: Option<T>,
}

/// Applies the 15-point Kronrod rule on `[a, b]`.
pub fn gk15<T: Real, F: Fn(T) -> T + ?Sized>(f: &F, a: T, b: T) -> PanelEstimate<T> {
    let half = T::lit(0.5);
    let c = half * (a + b);
    let h = half * (b - a);
    let mut bad = None;
    let mut sample = |x: T| {
        let v = f(x);
        if !v.is_finite() {
            bad.get_or_insert(x);
            T::zero()
        } else {
            v
        }
    };
    let fc = sample(c);
    let mut resk = fc * T::lit(WGK[7]);
    let mut resg = fc * T::lit(WG[3]);
    let mut resabs = resk.abs();
    let mut f1 = [T::zero(); 7];
    let mut f2 = [T::zero(); 7];
    for j in 0..7 {
        let dx = h * T::lit(XGK[j]);
        let (v1, v2) = (sample(c - dx), sample(c + dx));
        f1[j] = v1;
        f2[j] = v2;
        let w = T::lit(WGK[j]);
        resk = resk + w * (v1 + v2);
        resabs = resabs + w * (v1.abs() + v2.abs());
        if j % 2 == 1 {
            resg = resg + T::lit(WG[j / 2]) * (v1 + v2);
        }
    }
    let mean = resk * half;
    let mut resasc = T::lit(WGK[7]) * (fc - mean).abs();
    for j in 0..7 {
        resasc = resasc + T::lit(WGK[j]) * ((f1[j] - mean).abs() + (f2[j] - mean).abs());
    }
    let ah = h.abs();
    let value = resk * h;
    let resabs = resabs * ah;
    let resasc = resasc * ah;
    let mut err = ((resk - resg) * h).abs();
    if resasc != T::zero() && err != T::zero() {
        let r = (T::lit(200.0) * err / resasc).powf(T::lit(1.5));
        err = resasc * r.min(T::one());
    }
    let floor = T::lit(50.0) * T::epsilon() * resabs;
    if resabs > T::min_positive_value() / (T::lit(50.0) * T::epsilon()) {
        err = err.max(floor);
    }
    PanelEstimate { value, err, floor, bad }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_polynomials() {
        let r = gk15(&|x: f64| x.powi(10) - 3.0 * x.powi(7) + 1.0, -1.0, 2.0);
        let exact = (2f64.powi(11) + 1.0) / 11.0 - 3.0 * (2f64.powi(8) - 1.0) / 8.0 + 3.0;
        assert!((r.value - exact).abs() < 1e-12);
        assert!(r.err < 1e-10);
    }

    #[test]
    fn flags_non_finite() {
        let r = gk15(&|x: f64| 1.0 / x, -1.0, 1.0);
        assert_eq!(r.bad, Some(0.0));
    }
}
