//! The diagnostic suites. Each check becomes one case; a failing computation
//! becomes an error verdict on its case and never aborts the sweep.

use super::config::ExperimentConfig;
use super::report::Case;
use super::Suite;
use crate::cocycles::{coboundary_admissibility, cocycle_law_residual, growth_fit, growth_grid, mdot0};
use crate::flows::{fixed_points, generator_fd, semiflow_law_residual};
use crate::holo::{derivative, FnKind, HoloFn, QuadPolicy};
use crate::semigroup::{
    bound_table, continuity_probe_with, equicontinuity_probe, generator_residual, law_testset, real_testset,
    WcSemigroup,
};
use crate::spaces::{SpaceKind, SpaceSpec, Weight};
use crate::{Complex, Error, Result};

struct Setup<'a> {
    cfg: &'a ExperimentConfig,
    space: SpaceSpec,
    sg: WcSemigroup,
    grid: Vec<Complex>,
}

pub(super) fn run_suite(suite: Suite, cfg: &ExperimentConfig) -> Result<Vec<Case>> {
    let space = cfg.build_space()?;
    let phi = cfg.build_flow()?;
    let m = cfg.build_cocycle(&phi)?;
    let sg = WcSemigroup::new(phi, m, space.clone()).map_err(|e| Error::Config {
        path: "flow".into(),
        msg: e.to_string(),
    })?;
    let grid = cfg.sweep.grid.points(space.domain());
    let s = Setup { cfg, space, sg, grid };
    match suite {
        Suite::NormTable => norm_table(&s),
        Suite::SemigroupCheck => Ok(semigroup_check(&s)),
        Suite::CocycleCheck => Ok(cocycle_check(&s)),
        Suite::BoundTable => Ok(bound_cases(&s)),
        Suite::GeneratorCheck => generator_check(&s),
        Suite::Reconstruct => reconstruct(&s),
        Suite::ContinuityProbe => continuity(&s),
        Suite::Admissibility => Ok(admissibility(&s)),
    }
}

/// Runs `body` on `case`; `Ok((ok, msg))` sets the verdict, `Err` marks the
/// case as an error.
fn attempt<F>(mut case: Case, body: F) -> Case
where
    F: FnOnce(&mut Case) -> Result<(bool, String)>,
{
    match body(&mut case) {
        Ok((ok, msg)) => case.check(ok, msg),
        Err(e) => case.error(&e),
    }
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Configured corpus, or `default` without expected values.
fn corpus(s: &Setup, default: Vec<HoloFn>) -> Result<Vec<(HoloFn, Option<f64>)>> {
    Ok(match s.cfg.build_corpus(s.space.domain())? {
        Some(items) => items,
        None => default.into_iter().map(|f| (f, None)).collect(),
    })
}

/// Sorted union of the sweep times `t` and `s`.
fn time_union(cfg: &ExperimentConfig) -> Vec<f64> {
    let mut ts: Vec<f64> = cfg.sweep.t.iter().chain(&cfg.sweep.s).copied().collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts
}

/// `sup_{0≤r<1} r^k (1 − r²)^α` for `k ≥ 0`, `α > 0`.
fn sup_power_weight(k: f64, alpha: f64) -> f64 {
    let r2 = k / (k + 2.0 * alpha);
    r2.powf(k / 2.0) * (1.0 - r2).powf(alpha)
}

/// Monomials `e_0…e_8` with their exact norms where a closed form exists.
fn default_norm_corpus(space: &SpaceSpec) -> Vec<(HoloFn, Option<f64>)> {
    if space.domain().is_real() {
        return real_testset().into_iter().map(|f| (f, None)).collect();
    }
    (0..=8u32)
        .map(|n| {
            let k = n as f64;
            let expected = match &space.kind {
                SpaceKind::Hardy { .. } | SpaceKind::SupWeightedHolo { weight: Weight::One } => Some(1.0),
                SpaceKind::Dirichlet => Some(k.max(1.0).sqrt()),
                SpaceKind::SupWeightedHolo {
                    weight: Weight::Standard { alpha },
                } => Some(sup_power_weight(k, *alpha)),
                SpaceKind::BlochWeighted {
                    weight: Weight::Standard { alpha },
                } => Some(if n == 0 {
                    1.0
                } else {
                    k * sup_power_weight(k - 1.0, *alpha)
                }),
                _ => None,
            };
            (HoloFn::monomial(n), expected)
        })
        .collect()
}

fn norm_table(s: &Setup) -> Result<Vec<Case>> {
    let items = match s.cfg.build_corpus(s.space.domain())? {
        Some(items) => items,
        None => default_norm_corpus(&s.space),
    };
    let tol = s.cfg.tolerances.norm;
    Ok(items
        .iter()
        .map(|(f, expected)| {
            let case = Case::new(format!("norm/{}", f.label()))
                .input("f", f.label())
                .input("space", s.space.label());
            attempt(case, |c| {
                let est = s.space.norm_estimate(f)?;
                c.num("norm", est.value);
                c.num("truncated", est.truncated);
                c.num("correction", est.correction);
                if let Some(w) = est.window {
                    c.num("window", w);
                }
                match expected {
                    Some(e) => {
                        let err = (est.value - e).abs();
                        c.num("expected", *e);
                        c.num("error", err);
                        Ok((err <= tol * e.abs().max(1.0), format!("expected {e}")))
                    }
                    None => Ok((true, "no expected value".into())),
                }
            })
        })
        .collect())
}

/// Verdict tolerance for laws: tight for closed forms, looser when
/// quadrature or ODE integration is involved.
fn law_tol(s: &Setup, closed: bool) -> f64 {
    if closed {
        s.cfg.tolerances.law
    } else {
        s.cfg.tolerances.law_quadrature
    }
}

fn semiflow_law_case(s: &Setup, ts: &[f64]) -> Case {
    let tol = law_tol(s, s.sg.phi.is_closed_form());
    attempt(Case::new("semiflow-law").input("flow", s.sg.phi.label()), |c| {
        let r = semiflow_law_residual(&s.sg.phi, ts, &s.grid)?;
        c.num("residual", r);
        c.num("tol", tol);
        Ok((r < tol, String::new()))
    })
}

fn cocycle_law_case(s: &Setup, ts: &[f64]) -> Case {
    let tol = law_tol(s, s.sg.phi.is_closed_form() && s.sg.m.is_closed_form());
    let case = Case::new("cocycle-law")
        .input("flow", s.sg.phi.label())
        .input("cocycle", s.sg.m.label());
    attempt(case, |c| {
        let r = cocycle_law_residual(&s.sg.m, &s.sg.phi, ts, &s.grid)?;
        c.num("residual", r);
        c.num("tol", tol);
        Ok((r < tol, String::new()))
    })
}

fn semigroup_check(s: &Setup) -> Vec<Case> {
    let ts = time_union(s.cfg);
    let mut cases = vec![semiflow_law_case(s, &ts), cocycle_law_case(s, &ts)];
    let fs = match corpus(s, law_testset(&s.space)) {
        Ok(items) => items.into_iter().map(|x| x.0).collect::<Vec<_>>(),
        Err(e) => return vec![Case::new("semigroup-law").error(&e)],
    };
    let tol = law_tol(s, s.sg.phi.is_closed_form() && s.sg.m.is_closed_form());
    for &t in &s.cfg.sweep.t {
        for &u in &s.cfg.sweep.s {
            let case = Case::new(format!("semigroup-law/t={t},s={u}")).input("space", s.space.label());
            cases.push(attempt(case, |c| {
                c.num("t", t);
                c.num("s", u);
                let mut worst = 0.0f64;
                for f in &fs {
                    let lhs = s.sg.apply(t + u, f)?;
                    let rhs = s.sg.apply(t, &s.sg.apply(u, f)?)?;
                    for &z in &s.grid {
                        worst = worst.max((lhs.eval(z)? - rhs.eval(z)?).norm());
                    }
                }
                c.num("residual", worst);
                c.num("tol", tol);
                Ok((worst < tol, String::new()))
            }));
        }
    }
    let t0 = s.cfg.sweep.t.iter().copied().fold(0.0, f64::max);
    if t0 > 0.0 {
        let g = &s.cfg.sweep.grid;
        let k = if s.space.domain().is_real() { g.half_width } else { g.radius };
        cases.push(attempt(Case::new("equicontinuity"), |c| {
            let rep = equicontinuity_probe(&s.sg, t0, k)?;
            c.num("t0", t0);
            c.num("k_radius", k);
            c.num("r_prime", rep.r_prime);
            c.num("m_prime", rep.m_prime);
            Ok((rep.holds, String::new()))
        }));
    }
    cases
}

fn cocycle_check(s: &Setup) -> Vec<Case> {
    let ts = time_union(s.cfg);
    let tol = &s.cfg.tolerances;
    let m = &s.sg.m;
    let mut cases = vec![cocycle_law_case(s, &ts)];
    let g = m.mdot0_fn().cloned();
    if let Some(g) = &g {
        cases.push(attempt(Case::new("mdot0").input("g", g.label()), |c| {
            let mut worst = 0.0f64;
            for &z in &s.grid {
                let est = mdot0(m, z, &s.cfg.sweep.steps)?;
                worst = worst.max((est.value - g.eval(z)?).norm());
            }
            c.num("residual", worst);
            c.num("tol", tol.fd);
            Ok((worst < tol.fd, String::new()))
        }));
    }
    cases.push(attempt(Case::new("growth-fit").input("cocycle", m.label()), |c| {
        let pts = growth_grid(s.space.domain(), &s.space.policy);
        let fit = growth_fit(m, &s.cfg.sweep.t, &pts)?;
        c.num("m_const", fit.m_const);
        c.num("omega", fit.omega);
        c.num("ls_omega", fit.ls_omega);
        let Some(g) = &g else {
            return Ok((true, "no closed-form generator; envelope not checked".into()));
        };
        // |m_t| ≤ exp(t·sup Re g), so ω cannot exceed max(sup Re g, 0).
        let sup_re = pts
            .iter()
            .map(|&z| g.eval(z).map(|v| v.re))
            .try_fold(f64::NEG_INFINITY, |a, v| v.map(|v| a.max(v)))?;
        c.num("sup_re_g", sup_re);
        let bound = sup_re.max(0.0);
        let ok = fit.omega <= bound + tol.growth * bound.max(1.0) && fit.m_const <= 1.0 + tol.growth;
        Ok((ok, format!("envelope exp({bound}·t)")))
    }));
    cases
}

fn bound_cases(s: &Setup) -> Vec<Case> {
    let slack = s.cfg.tolerances.bound_slack;
    let base = || {
        Case::new("")
            .input("space", s.space.label())
            .input("flow", s.sg.phi.label())
            .input("cocycle", s.sg.m.label())
    };
    let rows = match bound_table(&s.sg, &s.cfg.sweep.t) {
        Ok(rows) => rows,
        Err(e) => return vec![Case { id: "bound".into(), ..base() }.error(&e)],
    };
    s.cfg
        .sweep
        .t
        .iter()
        .zip(rows)
        .map(|(&t, row)| {
            let case = Case {
                id: format!("bound/t={t}"),
                ..base()
            };
            attempt(case, |c| {
                c.num("t", t);
                let (b, w) = row?;
                c.num("theoretical", b.theoretical);
                c.num("empirical_lower", w.value);
                c.num("ratio", w.value / b.theoretical);
                for (k, v) in &b.components {
                    c.num(&format!("c.{k}"), *v);
                }
                let mut msg = format!("witness {}", w.witness);
                if !w.skipped.is_empty() {
                    msg.push_str(&format!(", skipped {}", w.skipped.join(" ")));
                }
                Ok((b.dominates(slack), msg))
            })
        })
        .collect()
}

fn default_generator_corpus(s: &Setup) -> Vec<HoloFn> {
    if s.space.domain().is_real() {
        let all = real_testset();
        return vec![all[1].clone(), all[3].clone(), all[4].clone()];
    }
    vec![
        HoloFn::identity(),
        HoloFn::monomial(2),
        HoloFn::kernel(Complex::new(0.5, 0.0)),
        HoloFn::exp_scaled(Complex::new(0.5, 0.0)),
    ]
}

fn generator_check(s: &Setup) -> Result<Vec<Case>> {
    let fs = corpus(s, default_generator_corpus(s))?;
    let tol = &s.cfg.tolerances;
    let big_g = s.sg.phi.generator();
    let Some(g) = s.sg.m.mdot0_fn() else {
        let e = Error::InvalidParam("the cocycle has no closed-form generator".into());
        return Ok(vec![Case::new("generator").error(&e)]);
    };
    Ok(fs
        .iter()
        .map(|(f, _)| {
            let case = Case::new(format!("generator/{}", f.label()))
                .input("f", f.label())
                .input("G", big_g.label())
                .input("g", g.label());
            attempt(case, |c| {
                let rep = generator_residual(&s.sg, big_g, g, f, &s.cfg.sweep.steps, s.cfg.sweep.generator_radius)?;
                c.num("extrapolated_residual", rep.extrapolated_residual);
                if let Some(o) = rep.observed_order {
                    c.num("observed_order", o);
                }
                for (h, r) in rep.steps.iter().zip(&rep.residuals) {
                    c.num(&format!("residual_h={h}"), *r);
                }
                for (h, n) in &rep.dq_norms {
                    if let Some(n) = n {
                        c.num(&format!("dq_norm_h={h}"), *n);
                    }
                }
                c.num("dq_bounded", flag(rep.bounded));
                let ok = rep.extrapolated_residual < tol.generator
                    && rep.observed_order.is_none_or(|o| o >= tol.order_min);
                let msg = if rep.bounded {
                    String::new()
                } else {
                    "difference quotients grow along the step ladder: not in D(A)".into()
                };
                Ok((ok, msg))
            })
        })
        .collect())
}

fn reconstruct(s: &Setup) -> Result<Vec<Case>> {
    let phi = &s.sg.phi;
    let tol = &s.cfg.tolerances;
    let mut cases = Vec::new();
    match s.cfg.build_reference()? {
        None => cases.push(Case::new("reconstruct").error(&Error::Config {
            path: "reference".into(),
            msg: "reconstruct needs a reference flow".into(),
        })),
        Some(reference) => {
            for &t in &s.cfg.sweep.t {
                let case = Case::new(format!("reconstruct/t={t}"))
                    .input("flow", phi.label())
                    .input("reference", reference.label());
                cases.push(attempt(case, |c| {
                    c.num("t", t);
                    let mut worst = 0.0f64;
                    for &z in &s.grid {
                        worst = worst.max((phi.eval(t, z)? - reference.eval(t, z)?).norm());
                    }
                    c.num("deviation", worst);
                    c.num("tol", tol.ode);
                    Ok((worst < tol.ode, String::new()))
                }));
            }
        }
    }
    cases.push(attempt(Case::new("generator-fd").input("G", phi.generator().label()), |c| {
        let mut worst = 0.0f64;
        for &z in &s.grid {
            let est = generator_fd(phi, z, &s.cfg.sweep.steps)?;
            worst = worst.max((est.value - phi.generator().eval(z)?).norm());
        }
        c.num("residual", worst);
        c.num("tol", tol.fd);
        Ok((worst < tol.fd, String::new()))
    }));
    Ok(cases)
}

fn default_continuity_corpus(s: &Setup) -> Vec<HoloFn> {
    if s.space.domain().is_real() {
        vec![real_testset()[4].clone()]
    } else if s.space.contains_h_infinity() {
        vec![HoloFn::singular_inner()]
    } else {
        vec![HoloFn::identity()]
    }
}

fn continuity(s: &Setup) -> Result<Vec<Case>> {
    let fs = corpus(s, default_continuity_corpus(s))?;
    let sw = &s.cfg.sweep;
    let tol = &s.cfg.tolerances;
    let mut ts: Vec<f64> = sw.t.iter().copied().filter(|&t| t > 0.0).collect();
    ts.sort_by(|a, b| b.total_cmp(a));
    ts.dedup();
    let mut cases = Vec::new();
    for (f, _) in &fs {
        let id = format!("continuity/{}", f.label());
        let rep = match continuity_probe_with(&s.sg, f, &ts, &sw.radii, tol.conv, tol.norm_cap) {
            Ok(rep) => rep,
            Err(e) => {
                cases.push(Case::new(id).input("f", f.label()).error(&e));
                continue;
            }
        };
        for r in &rep.records {
            let mut c = Case::new(format!("{id}/t={}", r.t)).input("f", f.label());
            c.num("t", r.t);
            c.num("norm_residual", r.norm_residual);
            c.num("norm_of_cf", r.norm_of_cf);
            for (radius, v) in &r.co_residuals {
                c.num(&format!("co_r={radius}"), *v);
            }
            cases.push(c.check(true, "record"));
        }
        let mut c = Case::new(id).input("f", f.label());
        c.num("gamma_convergent", flag(rep.gamma_convergent));
        c.num("norm_convergent", flag(rep.norm_convergent));
        let mut ok = true;
        let mut msg = Vec::new();
        if let Some(want) = sw.expect_gamma {
            ok &= want == rep.gamma_convergent;
            msg.push(format!("expected gamma-convergent = {want}"));
        }
        if let Some(want) = sw.expect_norm {
            ok &= want == rep.norm_convergent;
            msg.push(format!("expected norm-convergent = {want}"));
        }
        cases.push(c.check(ok, msg.join(", ")));
    }
    Ok(cases)
}

/// `G′` in closed form when the flow knows it, numerically otherwise.
fn generator_prime(s: &Setup) -> HoloFn {
    let phi = &s.sg.phi;
    if let Some(d) = phi.generator_prime() {
        return d.clone();
    }
    let (g, pol): (HoloFn, QuadPolicy) = (phi.generator().clone(), s.space.policy);
    HoloFn::try_new(format!("({})'", g.label()), g.domain(), FnKind::Composite, move |z| {
        derivative(&g, z, &pol)
    })
}

fn admissibility(s: &Setup) -> Vec<Case> {
    let sw = &s.cfg.sweep;
    let phi = &s.sg.phi;
    let Some(g) = s.sg.m.mdot0_fn() else {
        let e = Error::InvalidParam("the cocycle has no closed-form generator".into());
        return vec![Case::new("admissibility").error(&e)];
    };
    let points: Vec<Complex> = if sw.fixed_points.is_empty() {
        match fixed_points(phi, phi.generator(), &s.grid, &s.space.policy) {
            Ok(fp) if fp.trivial => {
                return vec![Case::new("fixed-points").check(true, "trivial flow: every point is fixed")];
            }
            Ok(fp) => fp.points,
            Err(e) => return vec![Case::new("fixed-points").error(&e)],
        }
    } else {
        sw.fixed_points.iter().map(|p| Complex::new(p[0], p[1])).collect()
    };
    if points.is_empty() {
        return vec![Case::new("fixed-points").check(true, "no interior fixed points")];
    }
    let gprime = generator_prime(s);
    match coboundary_admissibility(g, &gprime, &points, s.cfg.tolerances.admissibility) {
        Err(e) => vec![Case::new("admissibility").input("g", g.label()).error(&e)],
        Ok(list) => list
            .into_iter()
            .map(|a| {
                let mut c = Case::new(format!("admissibility/b={}", a.point)).input("g", g.label());
                c.num("re", a.point.re);
                c.num("im", a.point.im);
                c.num("ratio_re", a.ratio.re);
                c.num("ratio_im", a.ratio.im);
                c.num("nearest_order", a.nearest_order as f64);
                c.num("distance", a.distance);
                c.num("admissible", flag(a.admissible));
                match sw.expect_admissible {
                    Some(want) => c.check(want == a.admissible, format!("expected admissible = {want}")),
                    None => c.check(true, String::new()),
                }
            })
            .collect(),
    }
}
