//! The `verify` suites. Each returns one assertion per checked property.

use std::f64::consts::PI;
use std::fmt::Display;

use rand::Rng;
use rayon::prelude::*;

use lprim::convolution::{conv_lq, conv_multiplier, star};
use lprim::fourier::{
    dfhat_vs_hatdf_exhibit, exchange_identity, fourier, fourier_n, fourier_primitive, inner_product, parseval_check,
    polarization, riemann_lebesgue_ratios, translation_modulation, PARSEVAL_WINDOW,
};
use lprim::funcrepr::corpus::corpus;
use lprim::higher::{intermediate_identity_check, norm_comparison_example, pair_n};
use lprim::lpspace::{
    abs, conjugate, join, leq, meet, membership_check, pair, reconstruct, step_approximate, Atom, Membership,
};
use lprim::poisson::{
    boundary_convergence, extension_function, extension_n, harmonic_extension, harmonicity_residual, kernel_expr,
};
use lprim::quadrature::{integrate_line, lp_norm};
use lprim::{
    Config, DeltaTrain, Distribution, Expr, HalfPlanePoint, IteratedMultiplier, Multiplier, NthDistribution,
};

use crate::pool::{self, positive_bump};
use crate::report::Assertion;

type R<T> = lprim::Result<T>;

/// Collects assertions for one suite.
pub struct Checks {
    suite: &'static str,
    pub items: Vec<Assertion>,
}

impl Checks {
    pub fn new(suite: &'static str) -> Self {
        Checks { suite, items: vec![] }
    }

    #[allow(clippy::too_many_arguments)]
    fn record(&mut self, name: String, relation: &str, value: f64, target: f64, tolerance: f64, passed: bool, detail: String) {
        self.items.push(Assertion {
            suite: self.suite.into(),
            name,
            relation: relation.into(),
            value,
            target,
            tolerance,
            passed,
            detail,
        });
    }

    pub fn fail(&mut self, name: impl Into<String>, err: impl Display) {
        self.record(name.into(), "computes", f64::NAN, f64::NAN, 0.0, false, err.to_string());
    }

    /// `|v - target| <= tol`.
    pub fn close(&mut self, name: impl Into<String>, v: R<f64>, target: f64, tol: f64) {
        match v {
            Ok(v) => {
                let ok = (v - target).abs() <= tol;
                self.record(name.into(), "|v - t| <= tol", v, target, tol, ok, String::new());
            }
            Err(e) => self.fail(name, e),
        }
    }

    /// `v <= bound + tol`.
    pub fn at_most(&mut self, name: impl Into<String>, v: R<f64>, bound: f64, tol: f64) {
        match v {
            Ok(v) => {
                let ok = v <= bound + tol;
                self.record(name.into(), "v <= t + tol", v, bound, tol, ok, String::new());
            }
            Err(e) => self.fail(name, e),
        }
    }

    /// `v > bound`.
    pub fn above(&mut self, name: impl Into<String>, v: R<f64>, bound: f64) {
        match v {
            Ok(v) => {
                let ok = v > bound;
                self.record(name.into(), "v > t", v, bound, 0.0, ok, String::new());
            }
            Err(e) => self.fail(name, e),
        }
    }

    /// Strictly decreasing sequence; the value is the last element.
    pub fn decreasing(&mut self, name: impl Into<String>, v: R<Vec<f64>>) {
        match v {
            Ok(v) => {
                let ok = !v.is_empty() && v.windows(2).all(|w| w[1] < w[0]);
                let detail = v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(" > ");
                let last = v.last().copied().unwrap_or(f64::NAN);
                self.record(name.into(), "strictly decreasing", last, f64::NAN, 0.0, ok, detail);
            }
            Err(e) => self.fail(name, e),
        }
    }

    pub fn holds(&mut self, name: impl Into<String>, v: R<bool>, detail: impl Into<String>) {
        match v {
            Ok(b) => self.record(
                name.into(),
                "holds",
                if b { 1.0 } else { 0.0 },
                1.0,
                0.0,
                b,
                detail.into(),
            ),
            Err(e) => self.fail(name, e),
        }
    }

    /// Runs `f`, recording any error under `name`.
    pub fn guard(&mut self, name: &str, f: impl FnOnce(&mut Checks) -> R<()>) {
        if let Err(e) = f(self) {
            self.fail(name, e);
        }
    }
}

pub struct Suite {
    pub name: &'static str,
    pub about: &'static str,
    run: fn(&Config) -> Vec<Assertion>,
}

impl Suite {
    pub fn run(&self, cfg: &Config) -> Vec<Assertion> {
        (self.run)(cfg)
    }
}

pub const SUITES: &[Suite] = &[
    Suite { name: "pairing", about: "pairing integral: closed form and delta-train route", run: pairing },
    Suite { name: "norms", about: "norm formulas for g_n and G_n, norm properties", run: norms },
    Suite { name: "dualnorm", about: "equivalent dual norm on corpus members", run: dualnorm },
    Suite { name: "holder", about: "Hölder inequality on 200 random pairs", run: holder },
    Suite { name: "lattice", about: "lattice operations and L-space additivity", run: lattice },
    Suite { name: "reconstruct", about: "tent reconstruction and step approximation", run: reconstruction },
    Suite { name: "membership", about: "membership criterion on the example corpus", run: membership },
    Suite { name: "conv-exhibits", about: "convolution exhibits and the Φ_f witness", run: conv_exhibits },
    Suite { name: "conv-young", about: "Young's inequality on 50 random pairs", run: conv_young },
    Suite { name: "star-algebra", about: "⋆ product: commutativity and submultiplicativity", run: star_algebra },
    Suite { name: "fourier-exhibits", about: "transform exhibits, modulation, exchange, convolution", run: fourier_exhibits },
    Suite { name: "fourier-rl", about: "Riemann-Lebesgue decay of f̂(s)/s^n", run: fourier_rl },
    Suite { name: "parseval", about: "L'^2 inner product and Parseval on a grid", run: parseval },
    Suite { name: "higher", about: "higher order pairing and norm comparison", run: higher },
    Suite { name: "poisson-exact", about: "Poisson kernel, extension values, harmonicity, contraction", run: poisson_exact },
    Suite { name: "poisson-boundary", about: "norm convergence of U_y to the boundary data", run: poisson_boundary },
];

pub fn find(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

/// Runs the named suites (or all of them for `"all"`) in parallel; the
/// result keeps the order of [`SUITES`].
pub fn run_named(names: &[String], cfg: &Config) -> Result<Vec<Assertion>, String> {
    let chosen: Vec<&Suite> = if names.iter().any(|n| n == "all") {
        SUITES.iter().collect()
    } else {
        let mut v = vec![];
        for n in names {
            v.push(find(n).ok_or_else(|| format!("unknown suite `{n}`"))?);
        }
        v
    };
    let results: Vec<Vec<Assertion>> = chosen.par_iter().map(|s| s.run(cfg)).collect();
    Ok(results.into_iter().flatten().collect())
}

fn parse(s: &str) -> Expr {
    Expr::parse(s).expect("suite expression parses")
}

fn pairing(cfg: &Config) -> Vec<Assertion> {
    let mut c = Checks::new("pairing");
    c.guard("pairing setup", |c| {
        let f = Distribution::new(Expr::indicator(0.0, 1.0), 1.0, cfg)?;
        let g = Multiplier::local_with(parse("exp(-x)"), f64::INFINITY, cfg)?;
        let quad = pair(&f, &g, cfg);
        let q = *quad.as_ref().unwrap_or(&f64::NAN);
        c.close("pair(chi_(0,1)', exp(-x)) = e^-1 - 1", quad, (-1f64).exp() - 1.0, 1e-8);
        let train = DeltaTrain::single(1.0, 0.0, 1.0)?;
        c.close("delta-train route = quadrature route", train.pair(&g), q, 1e-8);
        Ok(())
    });
    let mut rng = pool::rng(11);
    for k in 0..10 {
        c.guard(&format!("random delta train {k}"), |c| {
            let n = rng.gen_range(1..5);
            let mut x = rng.gen_range(-3.0..0.0);
            let mut atoms = vec![];
            for _ in 0..n {
                let w = rng.gen_range(0.1..1.0);
                atoms.push(Atom { weight: rng.gen_range(-2.0..2.0), left: x, right: x + w });
                x += w + rng.gen_range(0.0..0.5);
            }
            let train = DeltaTrain::new(atoms)?;
            let q: f64 = [1.5, 2.0, 3.0][k % 3];
            let g = Multiplier::new(pool::function(&mut rng, q, true), q, cfg)?;
            let d = train.to_distribution(conjugate(q), cfg)?;
            c.close(format!("random delta train {k}: exact = quadrature"), train.pair(&g), pair(&d, &g, cfg)?, 1e-8);
            Ok(())
        });
    }
    c.items
}

fn norms(cfg: &Config) -> Vec<Assertion> {
    let mut c = Checks::new("norms");
    for (al, be) in [(1.0f64, 1.0f64), (4.0, 0.5)] {
        for p in [1.0f64, 2.0, 3.0] {
            c.guard("sobolev norms", |c| {
                let g: Expr = corpus("sobolev_gn", &[al, be])?;
                let big: Expr = corpus("sobolev_tent", &[al, be])?;
                let want_g = 2f64.powf(1.0 / p) * al.powf(1.0 / p) * be;
                let want_big = 2f64.powf(1.0 / p) * (p + 1.0).powf(-1.0 / p) * al.powf(1.0 + 1.0 / p) * be;
                c.close(format!("||g_n||_{p} (α={al}, β={be})"), lp_norm(&g, p, cfg), want_g, 1e-8);
                c.close(format!("||G_n||_{p} (α={al}, β={be})"), lp_norm(&big, p, cfg), want_big, 1e-8);
                Ok(())
            });
        }
    }
    let mut rng = pool::rng(12);
    for k in 0..6 {
        c.guard("norm properties", |c| {
            let p = [1.0, 2.0, 3.0][k % 3];
            // Bounded draws: translating a cusp moves it off the origin.
            let f = Distribution::new(pool::function(&mut rng, p, true), p, cfg)?;
            let g = Distribution::new(pool::function(&mut rng, p, true), p, cfg)?;
            let t = rng.gen_range(-5.0..5.0);
            c.close(format!("translation invariance {k}"), f.translate(t, cfg).map(|d| d.norm()), f.norm(), 1e-8);
            c.close(format!("homogeneity {k}"), f.scale(-2.5, cfg).map(|d| d.norm()), 2.5 * f.norm(), 1e-8);
            c.at_most(format!("triangle inequality {k}"), f.add(&g, cfg).map(|d| d.norm()), f.norm() + g.norm(), 1e-8);
            Ok(())
        });
    }
    c.items
}

/// Corpus members used by the dual-norm and contraction checks.
fn corpus_members() -> Vec<(String, Expr)> {
    let members: &[(&str, &[f64])] = &[
        ("indicator", &[0.0, 1.0]),
        ("gaussian", &[1.0]),
        ("gaussian", &[0.5]),
        ("power_tail", &[3.0]),
        ("gamma_cusp", &[0.25]),
        ("log_cusp", &[]),
        ("cantor_primitive", &[8.0]),
        ("weierstrass_primitive", &[0.5, 3.0, 6.0]),
        ("sobolev_gn", &[1.0, 1.0]),
        ("sobolev_tent", &[4.0, 0.5]),
    ];
    members.iter()
        .map(|(n, p)| {
            let e: Expr = corpus(n, p).expect("corpus entry");
            (e.label().unwrap_or(n).to_string(), e)
        })
        .collect()
}

fn dualnorm(cfg: &Config) -> Vec<Assertion> {
    let members = corpus_members();
    let rows: Vec<Vec<Assertion>> = members
        .par_iter()
        .map(|(label, e)| {
            let mut c = Checks::new("dualnorm");
            for p in [1.5, 2.0, 3.0] {
                let name = format!("dual norm {label}, p = {p}");
                c.guard(&name, |c| {
                    let f = Distribution::new(e.clone(), p, cfg)?;
                    let rel = f.dual_norm(cfg).map(|d| (d - f.norm()).abs() / f.norm());
                    c.at_most(name.clone(), rel, 0.0, 1e-6);
                    Ok(())
                });
            }
            c.items
        })
        .collect();
    rows.into_iter().flatten().collect()
}

fn holder(cfg: &Config) -> Vec<Assertion> {
    let mut rng = pool::rng(13);
    let cases: Vec<(usize, f64, Expr, Expr)> = (0..200)
        .map(|k| {
            let p = [1.0, 1.5, 2.0, 3.0][rng.gen_range(0..4)];
            let q = conjugate(p);
            let f = pool::function(&mut rng, p, false);
            let g = pool::function(&mut rng, q, q.is_infinite());
            (k, p, f, g)
        })
        .collect();
    let rows: Vec<Vec<Assertion>> = cases
        .par_iter()
        .map(|(k, p, f, g)| {
            let mut c = Checks::new("holder");
            let name = format!("pair {k}: |∫fG| <= ||f||'_{p} ||G||_I,q");
            c.guard(&name, |c| {
                let d = Distribution::new(f.clone(), *p, cfg)?;
                let m = Multiplier::new(g.clone(), conjugate(*p), cfg)?;
                let bound = d.norm() * m.norm().unwrap_or(f64::INFINITY);
                c.at_most(name.clone(), pair(&d, &m, cfg).map(f64::abs), bound, 1e-8);
                Ok(())
            });
            c.items
        })
        .collect();
    rows.into_iter().flatten().collect()
}

fn lattice(cfg: &Config) -> Vec<Assertion> {
    let mut c = Checks::new("lattice");
    for (label, e) in corpus_members().into_iter().take(6) {
        for p in [1.0, 2.0] {
            c.guard("abs norm", |c| {
                let f = Distribution::new(e.clone(), p, cfg)?;
                c.close(format!("|| |f| ||' = ||f||' for {label}, p = {p}"), abs(&f, cfg).map(|a| a.norm()), f.norm(), 1e-8);
                Ok(())
            });
        }
    }
    let mut rng = pool::rng(14);
    for k in 0..3 {
        c.guard("join and meet", |c| {
            let f = Distribution::new(pool::function(&mut rng, 2.0, true), 2.0, cfg)?;
            let g = Distribution::new(pool::function(&mut rng, 2.0, true), 2.0, cfg)?;
            let j = join(&f, &g, cfg)?;
            let m = meet(&f, &g, cfg)?;
            c.at_most(format!("f ∨ g + f ∧ g = f + g ({k})"), j.add(&m, cfg)?.distance(&f.add(&g, cfg)?, cfg), 0.0, 1e-8);
            c.holds(format!("f ∧ g <= f ∨ g ({k})"), leq(&m, &j), "");
            Ok(())
        });
    }
    for k in 0..20 {
        c.guard("disjoint additivity", |c| {
            let a = rng.gen_range(-3.0..0.0);
            let w1 = rng.gen_range(0.2..2.0);
            let gap = rng.gen_range(0.0..1.5);
            let w2 = rng.gen_range(0.2..2.0);
            let f = Distribution::new(positive_bump(&mut rng, a, w1), 1.0, cfg)?;
            let g = Distribution::new(positive_bump(&mut rng, a + w1 + gap, w2), 1.0, cfg)?;
            c.close(
                format!("||f + g||'_1 = ||f||'_1 + ||g||'_1 ({k})"),
                f.add(&g, cfg).map(|s| s.norm()),
                f.norm() + g.norm(),
                1e-8,
            );
            c.at_most(format!("|f| ∧ |g| = 0 ({k})"), meet(&abs(&f, cfg)?, &abs(&g, cfg)?, cfg).map(|m| m.norm()), 0.0, 1e-12);
            Ok(())
        });
    }
    c.items
}

fn reconstruction(cfg: &Config) -> Vec<Assertion> {
    let mut c = Checks::new("reconstruct");
    c.guard("reconstruct", |c| {
        let f = Distribution::new(Expr::indicator(0.0, 1.0), 1.0, cfg)?;
        for n in [2.0, 3.0, 4.0, 16.0, 64.0] {
            c.close(format!("F_n(0.5) = 1 for chi_(0,1), n = {n}"), reconstruct(&f, 0.5, n, cfg), 1.0, 2.0 * f64::EPSILON);
        }
        let g = Distribution::new(parse("exp(-x^2)"), 1.0, cfg)?;
        let errs: R<Vec<f64>> = [4.0, 16.0, 64.0]
            .iter()
            .map(|&n| reconstruct(&g, 0.0, n, cfg).map(|v| (v - 1.0).abs()))
            .collect();
        c.decreasing("|F_n(0) - 1| for exp(-x^2), n = 4, 16, 64", errs);
        let g2 = g.with_p(2.0, cfg)?;
        let steps: R<Vec<f64>> = [4, 16, 64].iter().map(|&n| step_approximate(&g2, n, cfg).map(|s| s.error)).collect();
        c.decreasing("step approximation error, n = 4, 16, 64", steps);
        Ok(())
    });
    c.items
}

fn membership(cfg: &Config) -> Vec<Assertion> {
    let mut c = Checks::new("membership");
    for (text, want) in [("sin(x)/abs(x)", true), ("x*(abs(x)+1)^(-3)", true), ("exp(-x^2)", false)] {
        let m = membership_check(&parse(text), 2.0, 0.75, cfg);
        let label = m.as_ref().map(|m| m.label().to_string()).unwrap_or_default();
        c.holds(
            format!("{text}: {}", if want { "certified" } else { "not certified" }),
            m.map(|m| if want { m.is_certified() } else { matches!(m, Membership::NotCertified { .. }) }),
            label,
        );
    }
    c.items
}

fn conv_exhibits(cfg: &Config) -> Vec<Assertion> {
    let mut c = Checks::new("conv-exhibits");
    c.guard("convolution exhibits", |c| {
        let f1 = Distribution::new(Expr::indicator(0.0, 1.0), 1.0, cfg)?;
        let g = parse("-2*x*exp(-x^2)");
        let lq = conv_lq(&f1, &g, 1.0, 1.0, true, cfg)?;
        c.close("f * g (0) = -2/e", lq.density_at(0.0, cfg), -2.0 / 1f64.exp(), 1e-6);
        let st = star(&f1, &Distribution::new(parse("exp(-x^2)"), 1.0, cfg)?, cfg)?;
        c.close("f ⋆ g (0) = 1 - 1/e", st.density_at(0.0, cfg), 1.0 - (-1f64).exp(), 1e-6);
        c.above("||f * g - f ⋆ g||'_1 > 0.1", lq.distribution.distance(&st.distribution, cfg), 0.1);
        c.decreasing(
            "Cauchy bounds ||f|| ||g_n - g_m||_q",
            Ok(lq.diagnostics.iter().map(|s| s.bound).collect()),
        );
        let f2 = f1.with_p(2.0, cfg)?;
        let m = Multiplier::new(g.clone(), 2.0, cfg)?;
        c.close("(f * G)(0) = 1 - 1/e", conv_multiplier(&f2, &m, 0.0, cfg), 1.0 - (-1f64).exp(), 1e-8);
        let big = parse("exp(-x^2)");
        let fp = Distribution::new(big.clone(), 2.0, cfg)?;
        let witness = Multiplier::new(big.reflect().scale(1.0 / fp.norm()), 2.0, cfg)?;
        c.close("Φ_f witness: (F * g)(0) = ||F||_2", conv_multiplier(&fp, &witness, 0.0, cfg), fp.norm(), 1e-8);
        Ok(())
    });
    c.items
}

const YOUNG_EXPONENTS: [(f64, f64); 8] =
    [(1.0, 1.0), (1.0, 1.5), (1.0, 2.0), (1.5, 1.0), (1.5, 1.5), (2.0, 1.0), (1.5, 1.2), (1.2, 1.5)];

fn conv_young(cfg: &Config) -> Vec<Assertion> {
    let mut rng = pool::rng(15);
    let cases: Vec<(usize, f64, f64, Expr, Expr)> = (0..50)
        .map(|k| {
            let (p, q) = YOUNG_EXPONENTS[rng.gen_range(0..YOUNG_EXPONENTS.len())];
            (k, p, q, pool::function(&mut rng, p, true), pool::function(&mut rng, q, true))
        })
        .collect();
    let rows: Vec<Vec<Assertion>> = cases
        .par_iter()
        .map(|(k, p, q, f, g)| {
            let mut c = Checks::new("conv-young");
            let r = 1.0 / (1.0 / p + 1.0 / q - 1.0);
            let name = format!("pair {k}: ||f * g||'_{r:.3} <= ||f||'_{p} ||g||_{q}");
            c.guard(&name, |c| {
                let d = Distribution::new(f.clone(), *p, cfg)?;
                let gq = lp_norm(g, *q, cfg)?;
                let res = conv_lq(&d, g, *q, r, false, cfg)?;
                c.at_most(name.clone(), Ok(res.distribution.norm()), d.norm() * gq, 1e-6);
                Ok(())
            });
            c.items
        })
        .collect();
    rows.into_iter().flatten().collect()
}

fn star_algebra(cfg: &Config) -> Vec<Assertion> {
    let mut rng = pool::rng(16);
    let cases: Vec<(usize, Expr, Expr)> =
        (0..6).map(|k| (k, pool::function(&mut rng, 1.0, true), pool::function(&mut rng, 1.0, true))).collect();
    let rows: Vec<Vec<Assertion>> = cases
        .par_iter()
        .map(|(k, f, g)| {
            let mut c = Checks::new("star-algebra");
            c.guard(&format!("star pair {k}"), |c| {
                let a = Distribution::new(f.clone(), 1.0, cfg)?;
                let b = Distribution::new(g.clone(), 1.0, cfg)?;
                let ab = star(&a, &b, cfg)?;
                let ba = star(&b, &a, cfg)?;
                c.at_most(format!("||f ⋆ g - g ⋆ f||'_1 ({k})"), ab.distribution.distance(&ba.distribution, cfg), 0.0, 1e-8);
                c.at_most(format!("||f ⋆ g||'_1 <= ||f||'_1 ||g||'_1 ({k})"), Ok(ab.distribution.norm()), a.norm() * b.norm(), 1e-8);
                Ok(())
            });
            c.items
        })
        .collect();
    rows.into_iter().flatten().collect()
}

fn fourier_exhibits(cfg: &Config) -> Vec<Assertion> {
    let mut c = Checks::new("fourier-exhibits");
    c.guard("fourier exhibits", |c| {
        let f = Distribution::new(Expr::indicator(-1.0, 1.0), 1.0, cfg)?;
        let v = fourier(&f, PI / 2.0, cfg)?;
        c.close("Re f̂(π/2) = 0 for F = chi_(-1,1)", Ok(v.re), 0.0, 1e-6);
        c.close("Im f̂(π/2) = 2", Ok(v.im), 2.0, 1e-6);
        c.close("f̂(0) = 0 exactly", fourier(&f, 0.0, cfg).map(|z| z.norm()), 0.0, 0.0);
        let rows = dfhat_vs_hatdf_exhibit(&[PI, PI / 2.0, 1.0, 2.5], cfg)?;
        c.close("D F̂(π) = -2/π", Ok(rows[0].d_fhat), -2.0 / PI, 1e-6);
        c.close("(DF)^(π) = 0", Ok(rows[0].hat_df.norm()), 0.0, 1e-6);
        c.close("D F̂(π/2) = -8/π^2", Ok(rows[1].d_fhat), -8.0 / (PI * PI), 1e-6);
        let gap = rows.iter().map(|r| (r.hat_df - lprim::Complex::new(r.d_fhat, 0.0)).norm()).fold(0.0, f64::max);
        c.above("max |D F̂ - (DF)^| over samples", Ok(gap), 0.5);
        for s in [0.5, 3.0, 20.0] {
            c.at_most(format!("|f̂({s})| <= |s| ||f||'_1"), fourier(&f, s, cfg).map(|z| z.norm()), s * f.norm(), 1e-9);
        }
        let two = NthDistribution::from_distribution(f.clone(), 2)?;
        c.close("n = 2: f̂(π/2) = -π", fourier_n(&two, PI / 2.0, cfg).map(|z| z.re), -PI, 1e-6);

        let f01 = Distribution::new(Expr::indicator(0.0, 1.0), 1.0, cfg)?;
        c.at_most("translation/modulation gap, y = 1, s = 1", translation_modulation(&f01, 1.0, 1.0, cfg).map(|m| m.gap), 0.0, 1e-8);
        let (l, r) = exchange_identity(&f01, &parse("exp(-x^2)"), cfg)?;
        c.at_most("∫ f̂ g = ∫ f ĝ", Ok((l - r).norm()), 0.0, 1e-6 * (1.0 + l.norm()));

        let g = parse("-2*x*exp(-x^2)");
        let conv = conv_lq(&f01, &g, 1.0, 1.0, false, cfg)?;
        for k in 0..10 {
            let s = 0.4 + 0.6 * k as f64;
            let lhs = fourier(&conv.distribution, s, cfg)?;
            let rhs = fourier(&f01, s, cfg)? * fourier_primitive(&g, s, cfg)?;
            c.at_most(format!("(f * g)^({s}) = f̂ ĝ"), Ok((lhs - rhs).norm()), 0.0, 1e-6);
        }
        Ok(())
    });
    for (label, e) in [("gaussian", parse("exp(-x^2)")), ("indicator", Expr::indicator(0.0, 1.0)), ("exp(-|x|)", parse("exp(-abs(x))"))] {
        c.guard("continuity", |c| {
            let f = Distribution::new(e.clone(), 1.0, cfg)?;
            for s in [0.7, 4.0] {
                let base = fourier(&f, s, cfg)?;
                let d: R<Vec<f64>> = [1e-1, 1e-2, 1e-3].iter().map(|h| Ok((fourier(&f, s + h, cfg)? - base).norm())).collect();
                c.decreasing(format!("|f̂(s+h) - f̂(s)| for {label} at s = {s}"), d);
            }
            Ok(())
        });
    }
    c.items
}

/// Width of the Gaussian primitive in the decay check. For `exp(-x^2)`,
/// `F̂(s)` underflows to zero long before `s = 10^2`.
pub const RL_WIDTH: f64 = 2e-4;

fn fourier_rl(cfg: &Config) -> Vec<Assertion> {
    let mut c = Checks::new("fourier-rl");
    c.guard("riemann-lebesgue", |c| {
        let big: Expr = corpus("gaussian", &[RL_WIDTH])?;
        let f = Distribution::new(big, 1.0, cfg)?;
        let ss = [1e2, 1e3, 1e4];
        c.decreasing("|f̂(s)/s|, s = 1e2, 1e3, 1e4", riemann_lebesgue_ratios(&f, &ss, cfg));
        let two = NthDistribution::from_distribution(f, 2)?;
        let r: R<Vec<f64>> = ss.iter().map(|&s| Ok(fourier_n(&two, s, cfg)?.norm() / (s * s))).collect();
        c.decreasing("|f̂(s)/s^2| for n = 2", r);
        Ok(())
    });
    c.items
}

fn parseval(cfg: &Config) -> Vec<Assertion> {
    let mut c = Checks::new("parseval");
    c.guard("parseval", |c| {
        let ind = Distribution::new(Expr::indicator(-1.0, 1.0), 2.0, cfg)?;
        let gau = Distribution::new(parse("exp(-x^2)"), 2.0, cfg)?;
        let tent = Distribution::new(corpus("sobolev_tent", &[1.0, 1.0])?, 2.0, cfg)?;
        c.close("(f, g) = √π erf(1)", inner_product(&ind, &gau, cfg), PI.sqrt() * lprim::special::erf(1.0), 1e-6);
        c.close("polarization = ∫ F G", polarization(&ind, &gau, cfg), inner_product(&ind, &gau, cfg)?, 1e-6);
        for (label, a, b) in [("indicator/gaussian", &ind, &gau), ("gaussian/tent", &gau, &tent)] {
            let gaps: R<Vec<f64>> = [1usize << 12, 1 << 13, 1 << 14]
                .iter()
                .map(|&n| parseval_check(a, b, n, PARSEVAL_WINDOW, cfg).map(|p| p.gap))
                .collect();
            let gaps = gaps?;
            c.at_most(format!("Parseval gap {label}, N = 2^14"), Ok(gaps[2]), 0.0, 1e-4);
            c.decreasing(format!("Parseval gap {label}, N = 2^12, 2^13, 2^14"), Ok(gaps));
        }
        Ok(())
    });
    c.items
}

fn higher(cfg: &Config) -> Vec<Assertion> {
    let mut c = Checks::new("higher");
    for m in [1usize, 10, 100] {
        c.guard("norm comparison", |c| {
            let (a, b) = norm_comparison_example(m, 1, cfg)?;
            c.close(format!("||f_m||^(n)_1 = 4, m = {m}"), Ok(a), 4.0, 1e-8);
            c.close(format!("Alexiewicz norm = 2/m, m = {m}"), Ok(b), 2.0 / m as f64, 1e-8);
            Ok(())
        });
    }
    c.guard("polynomial annihilation", |c| {
        let f = NthDistribution::new(parse("exp(-x^2)"), 1.5, 3, cfg)?;
        let g = IteratedMultiplier::new(Expr::indicator(-1.0, 2.0), 3.0, 3, cfg)?;
        let base = pair_n(&f, &g, cfg)?;
        let shifted = g.with_polynomial(&[2.0, -1.0, 0.5])?;
        c.close("pair_n unchanged by adding a degree-2 polynomial", pair_n(&f, &shifted, cfg), base, 1e-10);
        let zero = IteratedMultiplier::new(Expr::zero(), 3.0, 3, cfg)?.with_polynomial(&[1.0, 3.0, -2.0])?;
        c.close("pair_n with a degree-2 polynomial = 0", pair_n(&f, &zero, cfg), 0.0, 1e-10);
        Ok(())
    });
    c.guard("pair_n", |c| {
        let f1 = NthDistribution::new(Expr::indicator(0.0, 1.0), 2.0, 1, cfg)?;
        let g = parse("exp(-x^2)");
        let m1 = IteratedMultiplier::new(g.clone(), 2.0, 1, cfg)?;
        let m = Multiplier::new(g.clone(), 2.0, cfg)?;
        c.close("pair_n with n = 1 equals pair", pair_n(&f1, &m1, cfg), pair(f1.as_distribution(), &m, cfg)?, 1e-10);
        let f2 = NthDistribution::new(Expr::indicator(0.0, 1.0), 2.0, 2, cfg)?;
        let m2 = IteratedMultiplier::new(Expr::indicator(-2.0, 2.0), 2.0, 2, cfg)?;
        c.close("n = 2: pair = ∫_0^1 g = 1", pair_n(&f2, &m2, cfg), 1.0, 1e-10);
        let (l, r) = intermediate_identity_check(&g, &g, 2, 1, cfg)?;
        c.close("∫ F'' G = -∫ F' G'", Ok(l), r, 1e-6);
        Ok(())
    });
    let mut rng = pool::rng(17);
    for k in 0..10 {
        c.guard("higher Hölder", |c| {
            let p = [1.5, 2.0, 3.0][k % 3];
            let n = 1 + k % 3;
            let q = conjugate(p);
            let f = NthDistribution::new(pool::function(&mut rng, p, false), p, n, cfg)?;
            let g = IteratedMultiplier::new(pool::function(&mut rng, q, false), q, n, cfg)?;
            let bound = f.norm() * g.norm().unwrap_or(f64::INFINITY);
            c.at_most(format!("|pair_n| <= ||f||^(n)_p ||G||_nI,q ({k})"), pair_n(&f, &g, cfg).map(f64::abs), bound, 1e-8);
            Ok(())
        });
    }
    c.items
}

fn poisson_exact(cfg: &Config) -> Vec<Assertion> {
    let mut c = Checks::new("poisson-exact");
    c.guard("poisson values", |c| {
        let ind = Expr::indicator(-1.0, 1.0);
        c.close("U_1(0) = 1/2 for chi_(-1,1)", harmonic_extension(&ind, HalfPlanePoint::new(0.0, 1.0)?, cfg), 0.5, 1e-8);
        for y in [0.1, 1.0, 10.0] {
            c.close(format!("∫ Φ_y = 1, y = {y}"), integrate_line(&kernel_expr(y), cfg).map_err(Into::into).and_then(|r| r.certified()), 1.0, 1e-8);
        }
        let f = NthDistribution::new(ind.clone(), 1.0, 1, cfg)?;
        c.close("u at (1, 1), n = 1: -4/(5π)", extension_n(&f, HalfPlanePoint::new(1.0, 1.0)?, cfg), -4.0 / (5.0 * PI), 1e-8);
        for n in [0usize, 1] {
            let pt = HalfPlanePoint::new(0.3, 1.0)?;
            let a = harmonicity_residual(&ind, n, pt, 0.1, cfg)?;
            let b = harmonicity_residual(&ind, n, pt, 0.05, cfg)?;
            c.close(format!("residual ratio for h = 0.1 / 0.05, n = {n}"), Ok(a / b), 4.0, 0.4);
        }
        Ok(())
    });
    let members: Vec<(String, Expr)> = vec![
        ("indicator(-1,1)".into(), Expr::indicator(-1.0, 1.0)),
        ("gaussian".into(), parse("exp(-x^2)")),
        ("power_tail(3)".into(), corpus("power_tail", &[3.0]).expect("corpus")),
        ("sobolev_tent(1,1)".into(), corpus("sobolev_tent", &[1.0, 1.0]).expect("corpus")),
        ("exp(-|x|)".into(), parse("exp(-abs(x))")),
    ];
    let mut cases: Vec<(String, Expr, f64, f64)> = vec![];
    for (l, e) in &members {
        for p in [1.0, 2.0] {
            for y in [0.1, 1.0, 10.0] {
                cases.push((l.clone(), e.clone(), p, y));
            }
        }
    }
    let rows: Vec<Vec<Assertion>> = cases
        .par_iter()
        .map(|(label, e, p, y)| {
            let mut c = Checks::new("poisson-exact");
            let name = format!("||U_y||_{p} <= ||F||_{p} for {label}, y = {y}");
            c.guard(&name, |c| {
                let u = extension_function(e, *y, cfg)?;
                c.at_most(name.clone(), lp_norm(&u, *p, cfg), lp_norm(e, *p, cfg)?, 1e-6);
                Ok(())
            });
            c.items
        })
        .collect();
    c.items.extend(rows.into_iter().flatten());
    c.items
}

fn poisson_boundary(cfg: &Config) -> Vec<Assertion> {
    let mut c = Checks::new("poisson-boundary");
    let ys = [1.0, 0.3, 0.1, 0.03];
    for (label, e, p) in [("gaussian", parse("exp(-x^2)"), 2.0), ("indicator(-1,1)", Expr::indicator(-1.0, 1.0), 1.0)] {
        c.guard("boundary convergence", |c| {
            let f = NthDistribution::new(e.clone(), p, 1, cfg)?;
            let rows = boundary_convergence(&f, &ys, cfg)?;
            c.decreasing(format!("||U_y - F||_{p} for {label}, y = 1, 0.3, 0.1, 0.03"), Ok(rows.iter().map(|r| r.distance).collect()));
            if label == "gaussian" {
                c.at_most("||U_0.03 - F||_2 < 0.05 for the gaussian", Ok(rows[3].distance), 0.05, 0.0);
            }
            for r in &rows {
                c.at_most(format!("contraction for {label}, y = {}", r.y), Ok(r.norm), f.norm(), 1e-6);
            }
            Ok(())
        });
    }
    c.items
}
