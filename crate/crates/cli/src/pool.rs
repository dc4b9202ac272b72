//! Seeded random draws of example functions for the property suites.

use lprim::funcrepr::corpus::corpus;
use lprim::Expr;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

fn parse(s: &str) -> Expr {
    Expr::parse(s).expect("pool expression parses")
}

/// A random member of `L^p` drawn from a few shape families, shifted and
/// scaled. `bounded` excludes the unbounded cusp family.
pub fn function(rng: &mut Rng64, p: f64, bounded: bool) -> Expr {
    let families = if bounded { 6 } else { 7 };
    let c: f64 = rng.gen_range(0.25..2.0) * if rng.gen_bool(0.3) { -1.0 } else { 1.0 };
    let m: f64 = rng.gen_range(-2.0..2.0);
    let w: f64 = rng.gen_range(0.3..2.5);
    let e = match rng.gen_range(0..families) {
        0 => Expr::indicator(m, m + w),
        1 => parse(&format!("exp(-((x - ({m:?}))/{w:?})^2)")),
        2 => corpus("power_tail", &[rng.gen_range(2.5..4.0)]).unwrap().shift(m),
        3 => corpus("sobolev_tent", &[w * 0.5, 1.0]).unwrap().shift(m),
        4 => parse(&format!("exp(-abs(x - ({m:?}))/{w:?})")),
        5 => parse(&format!("indicator({:?}, {:?})*sin(3*x)", m, m + 2.0 * w)),
        _ => {
            // Kept at the origin: near a shifted singularity the distance
            // to it is only resolved to one ulp of the shift.
            let g = rng.gen_range(0.05..0.9 / p);
            corpus("gamma_cusp", &[g]).unwrap().compose_affine(1.0 / w, 0.0)
        }
    };
    e.scale(c)
}

/// A random nonnegative compactly supported function on `[a, a + w]`.
pub fn positive_bump(rng: &mut Rng64, a: f64, w: f64) -> Expr {
    let c: f64 = rng.gen_range(0.2..3.0);
    let e = match rng.gen_range(0..3) {
        0 => Expr::indicator(a, a + w),
        1 => corpus("sobolev_tent", &[w / 2.0, 1.0]).unwrap().shift(a),
        _ => parse(&format!("exp(-(x - ({:?}))^2)", a + w / 2.0)).truncate(a, a + w),
    };
    e.scale(c)
}
