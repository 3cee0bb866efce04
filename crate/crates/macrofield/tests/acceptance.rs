//! Acceptance criteria A1-A12. Prints one PASS/FAIL line per criterion and
//! exits non-zero when any criterion fails.

use macrofield::analytic::{basis_solution, characteristic_time, t_max, AnalyticBranch, BranchKind};
use macrofield::calibrate::{capital_extremes, fit_quadratic_yk, QuadraticFit};
use macrofield::dataset::{derive_indicators, frg_dataset};
use macrofield::diagnostics::{
    annual_from_series, debt_path, inflation_series, phase_classify, price_level,
    substitution_trajectory, InflationMethod, InflationOptions, SubstitutionParams,
    DEFAULT_STATES_QUOTA,
};
use macrofield::model::{integrate, rhs, Integration, ModelParams, RateFn};
use macrofield::multiworld::{
    capital_export_experiment, transfer_matrices, Transfer, TransferKind, TransferRate, WorldParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

type Check = fn() -> Outcome;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn a1() -> Outcome {
    let t = t_max(80.0);
    let exact = 80.0 * std::f64::consts::LN_2;
    let rel = (t - exact).abs() / exact;
    outcome(rel < 1e-9 && (t - 55.45).abs() < 0.005, format!("t_max(80) = {t:.4}, rel err vs T_h ln 2 = {rel:.1e}"))
}

fn a2() -> Outcome {
    match characteristic_time(-0.179, 0.042) {
        Ok(t) => outcome((t - 50.4).abs() <= 0.1, format!("T_c = {t:.4} years")),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn a3() -> Outcome {
    let d = derive_indicators(&frg_dataset());
    let k1950 = d.get(1950).unwrap().k_t;
    let k2010 = d.get(2010).unwrap().k_t;
    outcome(
        (k1950 - 0.3797).abs() < 5e-5 && (k2010 - 3.346).abs() < 5e-4,
        format!("k_t(1950) = {k1950:.4}, k_t(2010) = {k2010:.4}"),
    )
}

fn a4() -> Outcome {
    let traj = integrate(&ModelParams::frg_default(), &Integration::new(85.0)).unwrap();
    let peak = traj.peak().0;
    let collapse = traj.collapse();
    let pass = (peak - 2005.0).abs() <= 5.0 && collapse.is_some_and(|c| (c - 2032.0).abs() <= 3.0);
    outcome(pass, format!("peak {peak}, first Y <= 0 in {collapse:?}"))
}

fn a5() -> Outcome {
    let c = phase_classify(&frg_dataset(), DEFAULT_STATES_QUOTA).crossings;
    let got = (c.k_y_1, c.l_y_1, c.p_rel_half, c.k_y_3);
    let want = (Some(1966), Some(1982), Some(2000), Some(2000));
    outcome(got == want, format!("K/Y>=1 {:?}, L/Y>=1 {:?}, p_rel<=1/2 {:?}, K/Y>=3 {:?}", got.0, got.1, got.2, got.3))
}

fn a6() -> Outcome {
    let target = (2.852e-5, 0.5174, 197.9);
    let fit = fit_quadratic_yk(&frg_dataset().window(Some(1950), Some(2010)).unwrap()).unwrap();
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
    let errs = [rel(fit.a_k, target.0), rel(fit.b_k, target.1), rel(fit.c_k, target.2)];
    let fit_ok = errs.iter().all(|e| *e <= 0.05);
    let exact = QuadraticFit {
        a_k: target.0,
        b_k: target.1,
        c_k: target.2,
        residual_rms: 0.0,
        n: 0,
        from_year: 1950,
        to_year: 2010,
    };
    let late = fit_quadratic_yk(&frg_dataset().window(Some(1968), Some(2011)).unwrap()).unwrap();
    let late_err = [rel(late.a_k, target.0), rel(late.b_k, target.1), rel(late.c_k, target.2)]
        .into_iter()
        .fold(0.0, f64::max);
    let ex = capital_extremes(&exact).unwrap();
    let k_e = ex.k_e_high.unwrap_or(f64::NAN);
    let ext_ok = (ex.k_max - 9071.0).abs() <= 1.0 && (k_e - 18516.0).abs() <= 20.0;
    outcome(
        fit_ok && ext_ok,
        format!(
            "fit 1950-2010 a={:.4e} b={:.4} c={:.2} (rel err {:.0}%/{:.0}%/{:.0}%, {}); 1968-2011 window max rel err {:.1}%; extremes K_max={:.1} K_E={:.1} ({})",
            fit.a_k,
            fit.b_k,
            fit.c_k,
            100.0 * errs[0],
            100.0 * errs[1],
            100.0 * errs[2],
            if fit_ok { "ok" } else { "outside 5%" },
            100.0 * late_err,
            ex.k_max,
            k_e,
            if ext_ok { "ok" } else { "off" },
        ),
    )
}

fn a7() -> Outcome {
    let states = annual_from_series(&frg_dataset());
    let opts = InflationOptions::default();
    let core = inflation_series(&states, InflationMethod::Core, &opts);
    let cpi = inflation_series(&states, InflationMethod::DataCpi, &opts);
    let mut pairs = Vec::new();
    for ((year, m), (_, c)) in core.iter().zip(&cpi) {
        if (1955..=2000).contains(year) {
            if let (Some(m), Some(c)) = (m, c) {
                pairs.push((*year, *m, *c));
            }
        }
    }
    let n = pairs.len() as f64;
    let same_sign = pairs.iter().filter(|(_, m, c)| m.signum() == c.signum()).count() as f64 / n;
    let mad = pairs.iter().map(|(_, m, c)| (m - c).abs()).sum::<f64>() / n * 100.0;
    let mut worst: Vec<_> = pairs.iter().map(|(y, m, c)| (*y, (m - c).abs() * 100.0)).collect();
    worst.sort_by(|a, b| b.1.total_cmp(&a.1));
    let top: Vec<String> = worst.iter().take(3).map(|(y, d)| format!("{y}: {d:.1}pp")).collect();
    outcome(
        same_sign >= 0.7 && mad <= 3.0,
        format!(
            "{} years, same sign {:.0}%, MAD {:.2}pp (bound 3); largest {}",
            pairs.len(),
            100.0 * same_sign,
            mad,
            top.join(", ")
        ),
    )
}

fn a8() -> Outcome {
    let series = frg_dataset().window(Some(1950), Some(2005)).unwrap();
    let states = annual_from_series(&series);
    let path = debt_path(&states, 0.03, 10.53);
    let within = path
        .iter()
        .zip(&series.records)
        .filter(|((_, m), r)| (m / r.state_debt - 1.0).abs() <= 0.3)
        .count();
    let share = within as f64 / path.len() as f64;
    let end = path.last().unwrap().1 / series.records.last().unwrap().state_debt;
    outcome(
        share >= 0.8,
        format!("{within}/{} years within 30% ({:.0}%, need 80%); model/official in 2005 = {end:.1}", path.len(), 100.0 * share),
    )
}

fn a9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let run = Integration::new(50.0).with_step(1e-3);
    let run = Integration { allow_negative: true, ..run };
    let mut worst: f64 = 0.0;
    let mut counts = [0usize; 4];
    for i in 0..200 {
        let p_s: f64 = rng.gen_range(0.01..0.3);
        let p_n: f64 = match i % 4 {
            0 => loop {
                let v: f64 = rng.gen_range(-0.2..0.2);
                if v < 0.0 || v > 4.0 * p_s {
                    break v;
                }
            },
            1 => rng.gen_range(0.0..(4.0 * p_s).min(0.2)).max(1e-3),
            2 => 0.0,
            _ => 4.0 * p_s,
        };
        let (y0, k0) = (rng.gen_range(1.0..100.0), rng.gen_range(1.0..100.0));
        let branch = AnalyticBranch::new(p_n, p_s, y0, k0);
        counts[match branch.kind {
            BranchKind::Hyperbolic => 0,
            BranchKind::Harmonic => 1,
            BranchKind::DegeneratePn0 => 2,
            BranchKind::DegeneratePn4ps => 3,
        }] += 1;
        let traj = integrate(&ModelParams::constant(p_n, p_s, y0, k0), &run).unwrap();
        let scale = traj.points.iter().map(|p| p.y.abs().max(p.k.abs())).fold(0.0, f64::max);
        for p in &traj.points {
            let (y, k) = basis_solution(&branch, p.t);
            worst = worst.max((y - p.y).abs().max((k - p.k).abs()) / scale);
        }
    }
    outcome(
        worst <= 1e-6 && counts.iter().all(|c| *c > 0),
        format!("200 configs, branches {counts:?}, max relative error {worst:.2e}"),
    )
}

fn a10() -> Outcome {
    match price_level(7625.7, 0.3385, 26.988) {
        Ok(p) => outcome((p - 95.65).abs() <= 0.05, format!("P = {p:.3}")),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn a11() -> Outcome {
    let strong = ModelParams::frg_default();
    let ex = capital_export_experiment(&strong, &strong.scaled(0.5), 0.1, 25, &Integration::new(150.0)).unwrap();
    let s = &ex.coupled.economies[0].trajectory;
    let w = &ex.coupled.economies[1].trajectory;
    let (sc, wc) = (s.collapse(), w.collapse());
    let (sa, wa) = (ex.strong_alone.collapse(), ex.weak_alone.collapse());
    let pass = w.peak().1 > s.peak().1
        && matches!((wc, wa), (Some(a), Some(b)) if a < b)
        && matches!((sc, sa), (Some(a), Some(b)) if a > b);
    outcome(
        pass,
        format!(
            "peaks Y1 {:.1} Y2 {:.1}; collapse Y1 {sc:?} (alone {sa:?}), Y2 {wc:?} (alone {wa:?})",
            s.peak().1,
            w.peak().1
        ),
    )
}

fn a12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut model_err: f64 = 0.0;
    let mut subst_err: f64 = 0.0;
    let mut transfer_err: f64 = 0.0;
    for _ in 0..2000 {
        // d(Y + K)/dt = b0 + a0 + (p_B + p_P + p_s) Y; the p_n K terms cancel
        let mut p = ModelParams::constant(rng.gen_range(-0.2..0.2), rng.gen_range(0.0..0.5), 1.0, 1.0);
        let (a0, b0, pb, pp) = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), rng.gen_range(-0.05..0.05), rng.gen_range(-0.05..0.05));
        p.a0 = RateFn::Constant(a0);
        p.b0 = RateFn::Constant(b0);
        p.p_b = RateFn::Constant(pb);
        p.p_p = RateFn::Constant(pp);
        let (y, k) = (rng.gen_range(-100.0..1000.0), rng.gen_range(0.0..5000.0));
        let (dy, dk) = rhs(&p, rng.gen_range(0.0..100.0), y, k);
        let p_s = match p.p_s {
            RateFn::Constant(v) => v,
            _ => unreachable!(),
        };
        let expected = b0 + a0 + (pb + pp + p_s) * y;
        model_err = model_err.max((dy + dk - expected).abs() / (1.0 + y.abs() + k.abs()));

        let sp = SubstitutionParams {
            h0x: rng.gen_range(1.0..100.0),
            p0x: rng.gen_range(0.1..10.0),
            h0y: rng.gen_range(1.0..100.0),
            p0y: rng.gen_range(0.1..10.0),
            h_min_x: rng.gen_range(0.0..1.0),
            t0x: rng.gen_range(0.0..10.0),
            t_sh_x: rng.gen_range(0.5..20.0),
        };
        let s = substitution_trajectory(&sp, rng.gen_range(0.0..50.0)).unwrap();
        let total0 = sp.h0x * sp.p0x + sp.h0y * sp.p0y;
        subst_err = subst_err.max((s.hp_x + s.hp_y - total0).abs() / total0 + (s.rate_x + s.rate_y).abs());

        let n = rng.gen_range(2..6);
        let mut w = WorldParams::new(vec![ModelParams::frg_default(); n]);
        for _ in 0..rng.gen_range(0..10) {
            let (from, to) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if from == to {
                continue;
            }
            let rate = if rng.gen_bool(0.5) {
                TransferRate::GdpFraction(rng.gen_range(0.0..0.2))
            } else {
                TransferRate::Fixed(RateFn::Constant(rng.gen_range(-10.0..10.0)))
            };
            let kind = if rng.gen_bool(0.5) { TransferKind::Capital } else { TransferKind::Gdp };
            w.transfers.push(Transfer { from, to, kind, rate });
        }
        let gdp: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1000.0)).collect();
        let m = transfer_matrices(&w, 1960.0, &vec![true; n], &gdp);
        let (c, g) = m.inflows().iter().fold((0.0, 0.0), |a, f| (a.0 + f.0, a.1 + f.1));
        transfer_err = transfer_err.max(c.abs().max(g.abs()));
    }
    outcome(
        model_err < 1e-12 && subst_err < 1e-12 && transfer_err < 1e-10,
        format!("2000 draws each: balance {model_err:.1e}, substitution {subst_err:.1e}, transfers {transfer_err:.1e}"),
    )
}

fn main() {
    let criteria: [(&str, &str, Check, Duration); 12] = [
        ("A1", "t_max formula", a1, Duration::from_secs(1)),
        ("A2", "characteristic time", a2, Duration::from_secs(1)),
        ("A3", "dataset fidelity", a3, Duration::from_secs(1)),
        ("A4", "basic-model IVP", a4, Duration::from_secs(1)),
        ("A5", "phase crossings", a5, Duration::from_secs(1)),
        ("A6", "regression and extremes", a6, Duration::from_secs(1)),
        ("A7", "inflation tracking", a7, Duration::from_secs(1)),
        ("A8", "debt model", a8, Duration::from_secs(1)),
        ("A9", "analytic-numeric equivalence", a9, Duration::from_secs(10)),
        ("A10", "price-level example", a10, Duration::from_secs(1)),
        ("A11", "two-economy experiment", a11, Duration::from_secs(1)),
        ("A12", "conservation suite", a12, Duration::from_secs(10)),
    ];
    let mut failed = Vec::new();
    for (id, name, check, budget) in criteria {
        let start = Instant::now();
        let o = check();
        let took = start.elapsed();
        let pass = o.pass && took <= budget;
        let timing = if took <= budget { String::new() } else { format!(" over budget {budget:?}") };
        println!(
            "{id:<4} {} {name}: {} [{:.3}s{timing}]",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            took.as_secs_f64()
        );
        if !pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 12 criteria pass");
    } else {
        println!("acceptance: {} of 12 fail ({})", failed.len(), failed.join(", "));
        std::process::exit(1);
    }
}
