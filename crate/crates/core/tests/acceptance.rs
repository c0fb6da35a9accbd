//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;

use evsc_core::asymptotics::{ln_lr_envelope, p_approx};
use evsc_core::exact::{exact_lr_rational, exact_lr_uniform_vs_fair, ln_exact_lr_uniform_vs_fair, exact_p_value_fair, exact_p_value_rational, standardize};
use evsc_core::families::{lr_alpha, lr_alpha_limit, lr_f, lr_normal_family, lr_x_approx, lr_x_exact};
use evsc_core::special_fn::phi_cdf;
use evsc_core::stopping::{
    expected_lr_at_stopping, finiteness_threshold, shepp_moment, simulate_stopping_with_workers,
};
use evsc_core::tables::{table1, table2, table3, TABLE1_PRINTED, TABLE2_PRINTED, TABLE3_PRINTED};
use evsc_core::{DensityAlternative, Experiment, Sided, StoppingConfig};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn timed(f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn table1_reproduction() -> Outcome {
    let start = Instant::now();
    let rows = match table1() {
        Ok(rows) => rows,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    let elapsed = start.elapsed();
    let mut bad = Vec::new();
    for (row, printed) in rows.iter().zip(TABLE1_PRINTED) {
        let (u, lr, p) = row.printed();
        if row.k != printed.1 || u != printed.2 || lr != printed.3 || p != printed.4 {
            bad.push(format!("n={} got k={} u={u} LR={lr} p={p}", row.n, row.k));
        }
    }
    let fast = elapsed < Duration::from_secs(5);
    outcome(
        bad.is_empty() && fast,
        format!("{} of 6 rows match; {:.2}s (limit 5s) {}", 6 - bad.len(), elapsed.as_secs_f64(), bad.join("; ")),
    )
}

fn table2_reproduction() -> Outcome {
    let start = Instant::now();
    let rows = match table2() {
        Ok(rows) => rows,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    let elapsed = start.elapsed();
    let mut shown = Vec::new();
    let mut pass = elapsed < Duration::from_secs(1);
    for (row, printed) in rows.iter().zip(TABLE2_PRINTED) {
        let (u, p, lr) = row.printed();
        pass &= u == printed.1 && p == printed.2 && lr == printed.3;
        shown.push(format!("{}: u={u} p={p} LR={lr}", row.label));
    }
    outcome(pass, format!("{}; {:.3}s (limit 1s)", shown.join(", "), elapsed.as_secs_f64()))
}

fn table3_reproduction() -> Outcome {
    let rows = match table3() {
        Ok(rows) => rows,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    let matched = rows
        .iter()
        .zip(TABLE3_PRINTED)
        .filter(|(row, printed)| {
            row.sided == printed.0 && row.printed() == (printed.1.into(), printed.2.into(), printed.3.into())
        })
        .count();
    let headline = rows
        .iter()
        .find(|r| r.sided == Sided::Two && r.p == 0.05)
        .map(|r| r.printed())
        .unwrap_or_default();
    outcome(
        matched == 8 && rows.len() == 8,
        format!("{matched} of 8 triples match; two-sided 0.05 -> u={} LR={}", headline.1, headline.2),
    )
}

fn envelope_theorem() -> Outcome {
    let mut checked = 0u64;
    let mut violations = Vec::new();
    for n in [20u64, 100, 1000, 10_000] {
        for k in 0..=n {
            if !(n <= 4 * k && 4 * k <= 3 * n) {
                continue;
            }
            let e = Experiment::new(n, k).unwrap();
            let u = standardize(e, 0.5).unwrap().u;
            let env = match ln_lr_envelope(n, u) {
                Ok(env) => env,
                Err(err) => {
                    violations.push(format!("({n},{k}): {err}"));
                    continue;
                }
            };
            checked += 1;
            if !env.contains(ln_exact_lr_uniform_vs_fair(e)) {
                violations.push(format!("({n},{k})"));
            }
        }
    }
    outcome(violations.is_empty(), format!("{checked} experiments, {} violations {}", violations.len(), violations.join(" ")))
}

fn mills_ladder() -> Outcome {
    let mut pass = true;
    let mut shown = Vec::new();
    for (u, limit) in [(2.0, 0.19), (3.0, 0.10), (5.0, 0.04)] {
        let approx = p_approx(u).unwrap().value;
        let exact = 2.0 * phi_cdf(-u).unwrap();
        let rel = (approx - exact).abs() / exact;
        pass &= rel < limit;
        shown.push(format!("u={u}: {:.1}% (< {:.0}%)", 100.0 * rel, 100.0 * limit));
    }
    outcome(pass, shown.join(", "))
}

fn stopping_mc() -> Outcome {
    let (m, c) = (10_000, 2.0);
    let cfg = StoppingConfig::new(m, c, 100_000, 100_000_000, 20_240_601).unwrap();
    let start = Instant::now();
    let r = match simulate_stopping_with_workers(&cfg, 0) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    let elapsed = start.elapsed();
    let analytic = shepp_moment(m, -0.5, c).unwrap();
    let target = expected_lr_at_stopping(m, c).unwrap();
    let gap = (r.mean_inv_sqrt_n.mean - analytic).abs();
    let allowed = 3.0 * r.mean_inv_sqrt_n.std_error + r.truncation_bias_bound;
    let lr_rel = (r.mean_lr.mean - target).abs() / target;
    outcome(
        gap <= allowed && lr_rel < 0.15,
        format!(
            "E[N^-1/2] = {:.6e} +- {:.1e} vs {:.6e} (|diff| {:.1e} <= {:.1e}); mean LR {:.5} vs 0.025 ({:.1}% < 15%); truncated {:.1}%; {:.0}s",
            r.mean_inv_sqrt_n.mean,
            r.mean_inv_sqrt_n.std_error,
            analytic,
            gap,
            allowed,
            r.mean_lr.mean,
            100.0 * lr_rel,
            100.0 * r.truncated_fraction,
            elapsed.as_secs_f64()
        ),
    )
}

fn finiteness() -> Outcome {
    let one = finiteness_threshold(1.0);
    let half = finiteness_threshold(0.5);
    match (one, half) {
        (Ok(one), Ok(half)) => outcome(
            (one - 1.0).abs() <= 1e-6 && (half - 1.3069).abs() <= 1e-3,
            format!("mu=1 -> {one:.9}, mu=1/2 -> {half:.6}"),
        ),
        (a, b) => outcome(false, format!("error: {a:?} {b:?}")),
    }
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

fn brute_force() -> Outcome {
    let mut mismatches = Vec::new();
    let mut cases = 0;
    for n in 1..=20u64 {
        // Head counts of all 2^n sequences.
        let mut counts = vec![0u64; n as usize + 1];
        for seq in 0u32..(1 << n) {
            counts[seq.count_ones() as usize] += 1;
        }
        let total = BigUint::one() << n;
        for k in 0..=n {
            cases += 1;
            let e = Experiment::new(n, k).unwrap();
            let lower: u64 = counts[..=k.min(n - k) as usize].iter().sum();
            let one_sided = BigRational::new(lower.into(), total.clone().into());
            let two_sided = {
                let d = one_sided.clone() * BigRational::from_integer(2.into());
                if d > BigRational::one() {
                    BigRational::one()
                } else {
                    d
                }
            };
            // Probability of a deviation from n/2 at least as large as observed.
            let far: u64 = (0..=n)
                .filter(|&j| (2 * j).abs_diff(n) >= (2 * k).abs_diff(n))
                .map(|j| counts[j as usize])
                .sum();
            if BigRational::new(far.into(), total.clone().into()) != two_sided {
                mismatches.push(format!("tail ({n},{k})"));
            }
            if exact_p_value_rational(e, Sided::One) != one_sided || exact_p_value_rational(e, Sided::Two) != two_sided {
                mismatches.push(format!("p ({n},{k})"));
            }
            let as_float = num_traits::ToPrimitive::to_f64(&two_sided).unwrap();
            if exact_p_value_fair(e, Sided::Two) != as_float {
                mismatches.push(format!("p float ({n},{k})"));
            }
            let direct = BigRational::new(
                (factorial(k) * factorial(n - k) * (BigUint::one() << n)).into(),
                factorial(n + 1).into(),
            );
            if exact_lr_rational(e) != direct {
                mismatches.push(format!("LR ({n},{k})"));
            }
            if exact_lr_uniform_vs_fair(e) != num_traits::ToPrimitive::to_f64(&direct).unwrap() {
                mismatches.push(format!("LR float ({n},{k})"));
            }
        }
    }
    outcome(mismatches.is_empty(), format!("{cases} (n, k) pairs, {} mismatches {}", mismatches.len(), mismatches.join(" ")))
}

fn property_suites() -> Outcome {
    let mut failures = Vec::new();
    let mut checks = 0u64;

    // ln LR_x ≤ -½ p0 q0 y² + u y.
    for p0 in [0.2, 0.5, 0.8] {
        for n in [100u64, 10_000] {
            let sigma = (p0 * (1.0 - p0) * n as f64).sqrt();
            let k_lo = (p0 * n as f64 - 3.0 * sigma).ceil() as u64;
            let k_hi = (p0 * n as f64 + 3.0 * sigma).floor() as u64;
            let step = ((k_hi - k_lo) / 24).max(1) as usize;
            for k in (k_lo..=k_hi).step_by(step) {
                let e = Experiment::new(n, k).unwrap();
                let u = standardize(e, p0).unwrap().u;
                for i in -40..=40 {
                    let y = i as f64 * 0.25;
                    let x = y - u;
                    let Ok(lr) = lr_x_exact(e, p0, x) else { continue };
                    checks += 1;
                    let bound = -0.5 * p0 * (1.0 - p0) * y * y + u * y;
                    if lr.ln() > bound + 1e-9 * (1.0 + bound.abs()) {
                        failures.push(format!("bound p0={p0} n={n} k={k} y={y}"));
                    }
                    // The exact ratio peaks at the observed rate, x = 0.
                    if lr > lr_x_exact(e, p0, 0.0).unwrap() * (1.0 + 1e-12) {
                        failures.push(format!("argmax p0={p0} n={n} k={k} x={x}"));
                    }
                }
            }
        }
    }
    for i in -30..=30 {
        let u = i as f64 * 0.1;
        for j in -40..=40 {
            let x = j as f64 * 0.1;
            checks += 1;
            if j != 0 && lr_x_approx(u, x) >= lr_x_approx(u, 0.0) {
                failures.push(format!("approx argmax u={u} x={x}"));
            }
        }
    }

    // Quadrature against the closed form for normal alternatives.
    for n in [1_000u64, 10_000] {
        for u in [0.0, 1.0, 2.5] {
            let k = (n as f64 / 2.0 - u * (n as f64).sqrt() / 2.0).round() as u64;
            let e = Experiment::new(n, k).unwrap();
            for s in [0.01, 0.05] {
                for shift in [0.0, 0.01, -0.02] {
                    checks += 1;
                    let alt = DensityAlternative::normal(0.5 - shift, s).unwrap();
                    let quad = lr_f(e, 0.5, &alt).unwrap();
                    let closed = lr_normal_family(e, 0.5, shift, s).unwrap();
                    if (quad / closed - 1.0).abs() > 0.01 {
                        failures.push(format!("normal n={n} k={k} s={s} shift={shift}: {quad} vs {closed}"));
                    }
                }
            }
        }
    }

    // One-sided uniform alternatives at n = 10^6.
    let n = 1_000_000u64;
    for k in [500_000u64, 499_500, 499_178, 498_500, 500_822] {
        checks += 1;
        let e = Experiment::new(n, k).unwrap();
        let u = standardize(e, 0.5).unwrap().u;
        let got = lr_alpha(e, 0.5, 0.1).unwrap();
        let limit = lr_alpha_limit(u).unwrap();
        if (got / limit - 1.0).abs() > 0.01 {
            failures.push(format!("lr_alpha k={k}: {got} vs {limit}"));
        }
    }

    // Worker count does not change stopping results.
    for (c, seed) in [(1.0, 1u64), (2.0, 2), (3.0, 3)] {
        checks += 1;
        let cfg = StoppingConfig::new(1_000, c, 5_000, 1_000_000, seed).unwrap();
        let one = simulate_stopping_with_workers(&cfg, 1).unwrap();
        let four = simulate_stopping_with_workers(&cfg, 4).unwrap();
        if one != four {
            failures.push(format!("determinism c={c}"));
        }
    }

    outcome(failures.is_empty(), format!("{checks} checks, {} failures {}", failures.len(), failures.join("; ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("table 1 reproduction", table1_reproduction),
        ("table 2 reproduction", table2_reproduction),
        ("table 3 reproduction", table3_reproduction),
        ("envelope theorem", envelope_theorem),
        ("Mills-ratio ladder", mills_ladder),
        ("stopping Monte Carlo vs analytic", stopping_mc),
        ("finiteness thresholds", finiteness),
        ("brute-force oracle equivalence", brute_force),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (out, elapsed) = timed(check);
        if !out.pass {
            failed += 1;
        }
        println!(
            "{} criterion {}: {name}: {} [{:.2}s]",
            if out.pass { "PASS" } else { "FAIL" },
            i + 1,
            out.detail.trim_end(),
            elapsed.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
