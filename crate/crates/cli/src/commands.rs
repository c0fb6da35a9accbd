use evsc_core::exact::standardize;
use evsc_core::families::{
    lr_alpha, lr_alpha_limit, lr_f, lr_f_upper_bound, lr_f_with, lr_normal_family, lr_x_approx, lr_x_exact,
    max_lr_for_pvalue, Integrand, LrfOptions,
};
use evsc_core::stopping::{
    expected_lr_at_stopping, expected_lr_at_stopping_analytic, finiteness_threshold, shepp_moment,
    simulate_stopping_with_workers,
};
use evsc_core::tables::{table1, table2, table3, TABLE1_PRINTED};
use evsc_core::{DensityAlternative, EvidenceReport, Experiment, PointAlternative, Sided, StoppingConfig};

use crate::error::{usage, CliError};
use crate::output::{Format, Precision, Record, Style, Table, Value};
use crate::{ExperimentArgs, FamilyCommand, IntegrandArg, Shared, SidedArg, StoppingArgs};

pub enum Output {
    Table(Table),
    Record(Record),
}

impl Output {
    pub fn render(&self, format: Format, precision: Precision) -> String {
        match self {
            Output::Table(t) => t.render(format, precision),
            Output::Record(r) => r.render(format, precision),
        }
    }
}

const U: Style = Style::Fixed(3);
const LR: Style = Style::Ratio;
const P: Style = Style::PValue;

fn experiment(args: &ExperimentArgs) -> Result<Experiment, CliError> {
    let e = usage(Experiment::new(args.n, args.k))?;
    usage(standardize(e, args.p0))?;
    Ok(e)
}

pub fn report(args: &ExperimentArgs) -> Result<Output, CliError> {
    let e = experiment(args)?;
    let report = EvidenceReport::compute(e, args.p0)?;
    let flat = report.to_flat();
    let mut r = Record::default();
    r.add("n", Value::Int(flat.n))
        .add("k", Value::Int(flat.k))
        .add("p0", Value::float(flat.p0, Style::Significant(3)))
        .add("u", Value::float(flat.u, U))
        .add("ln_exact_lr", Value::float(flat.ln_exact_lr, Style::Fixed(4)))
        .add("exact_lr", Value::float(flat.exact_lr, LR))
        .add("approx_lr", Value::float(flat.approx_lr, LR))
        .add("lr_envelope_lower", Value::opt(flat.lr_envelope_lower, LR))
        .add("lr_envelope_upper", Value::opt(flat.lr_envelope_upper, LR))
        .add("exact_p_two_sided", Value::opt(flat.exact_p_two_sided, P))
        .add("approx_p", Value::opt(flat.approx_p, P))
        .add("approx_p_lower", Value::opt(flat.approx_p_lower, P))
        .add("approx_p_upper", Value::opt(flat.approx_p_upper, P))
        .add("normal_p_two_sided", Value::float(flat.normal_p_two_sided, P))
        .add("max_attainable_lr", Value::float(flat.max_attainable_lr, LR));
    if let Some(env) = report.lr_envelope {
        r.add("exact_lr_in_envelope", Value::Bool(env.contains(report.exact_lr)));
    }
    Ok(Output::Record(r))
}

pub fn table(which: u8) -> Result<Output, CliError> {
    let table = match which {
        1 => {
            let mut t = Table::new(vec!["n", "k", "u", "lr", "p", "matches_printed"])
                .titled("Likelihood ratio closest to 1 (uniform prior vs fair coin)");
            for (row, printed) in table1()?.iter().zip(TABLE1_PRINTED) {
                let (u, lr, p) = row.printed();
                let matches = row.k == printed.1 && u == printed.2 && lr == printed.3 && p == printed.4;
                if !matches {
                    t.notes.push(format!(
                        "n = {}: got k = {}, u = {u}, LR = {lr}, p = {p}; printed k = {}, u = {}, LR = {}, p = {}",
                        row.n, row.k, printed.1, printed.2, printed.3, printed.4
                    ));
                }
                t.push(vec![
                    Value::Int(row.n),
                    Value::Int(row.k),
                    Value::float(row.u, Style::Fixed(3)),
                    Value::float(row.lr, Style::Fixed(3)),
                    Value::float(row.p, Style::Fixed(5)),
                    Value::Bool(matches),
                ]);
            }
            t.notes.push("p: exact two-sided binomial tail, min(1, 2 min(P(X <= k), P(X >= k))).".into());
            t
        }
        2 => {
            let rows = table2()?;
            let mut t = Table::new(vec!["quantity", "a", "b"]).titled("Two researchers, same p-value, different evidence");
            let (a, b) = (&rows[0], &rows[1]);
            t.push(vec![Value::Text("n".into()), Value::Int(a.n), Value::Int(b.n)]);
            t.push(vec![Value::Text("k".into()), Value::Int(a.k), Value::Int(b.k)]);
            t.push(vec![Value::Text("u".into()), Value::float(a.u, Style::Fixed(2)), Value::float(b.u, Style::Fixed(2))]);
            t.push(vec![Value::Text("p".into()), Value::float(a.p, P), Value::float(b.p, P)]);
            let lr = Style::Significant(3);
            t.push(vec![Value::Text("lr".into()), Value::float(a.lr, lr), Value::float(b.lr, lr)]);
            t
        }
        _ => {
            let rows = table3()?;
            let mut t = Table::new(vec!["p_value", "one_sided_u", "one_sided_lr", "two_sided_u", "two_sided_lr"])
                .titled("Maximal likelihood ratios for given p-values");
            let (one, two): (Vec<&evsc_core::tables::Table3Row>, Vec<_>) = rows.iter().partition(|r| r.sided == Sided::One);
            for (o, w) in one.iter().zip(&two) {
                t.push(vec![
                    Value::float(o.p, Style::Fixed(3)),
                    Value::float(o.u, Style::Fixed(3)),
                    Value::float(o.sup_lr, Style::Fixed(1)),
                    Value::float(w.u, Style::Fixed(3)),
                    Value::float(w.sup_lr, Style::Fixed(1)),
                ]);
            }
            t
        }
    };
    Ok(Output::Table(table))
}

pub fn stopping(args: &StoppingArgs, shared: &Shared) -> Result<Output, CliError> {
    let cfg = usage(StoppingConfig::new(args.m, args.c, args.trials, args.max_tosses, shared.seed))?;
    let result = simulate_stopping_with_workers(&cfg, shared.workers)?;
    let hist = &result.stopped_n_histogram;
    let e = Style::Significant(4);
    let mut r = Record::default();
    r.add("m", Value::Int(cfg.m))
        .add("c", Value::float(cfg.c, Style::Significant(4)))
        .add("trials", Value::Int(cfg.trials))
        .add("max_tosses", Value::Int(cfg.max_tosses))
        .add("seed", Value::Int(cfg.seed))
        .add("mean_inv_sqrt_n", Value::float(result.mean_inv_sqrt_n.mean, e))
        .add("mean_inv_sqrt_n_se", Value::float(result.mean_inv_sqrt_n.std_error, Style::Significant(2)))
        .add("shepp_inv_sqrt_n", Value::float(shepp_moment(cfg.m, -0.5, cfg.c)?, e))
        .add("mean_lr", Value::float(result.mean_lr.mean, e))
        .add("mean_lr_se", Value::float(result.mean_lr.std_error, Style::Significant(2)))
        .add("expected_lr_formula", Value::float(expected_lr_at_stopping(cfg.m, cfg.c)?, e))
        .add("expected_lr_analytic", Value::float(expected_lr_at_stopping_analytic(cfg.m, cfg.c)?, e))
        .add("truncated", Value::Int(result.truncated))
        .add("truncated_fraction", Value::float(result.truncated_fraction, Style::Fixed(4)))
        .add("truncation_bias_bound", Value::float(result.truncation_bias_bound, Style::Significant(2)))
        .add("lr_truncation_bias_bound", Value::float(result.lr_truncation_bias_bound, Style::Significant(2)))
        .add("mean_n_stopped", Value::opt(result.mean_n_stopped, Style::Fixed(0)))
        .add("n_min", Value::Int(hist.min))
        .add("n_median", Value::Int(hist.median))
        .add("n_p90", Value::Int(hist.p90))
        .add("n_p99", Value::Int(hist.p99))
        .add("n_max", Value::Int(hist.max));
    Ok(Output::Record(r))
}

fn parse_density(spec: &str) -> Result<DensityAlternative, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let nums = |a: &str, b: &str| -> Result<(f64, f64), CliError> {
        let parse = |s: &str| s.parse::<f64>().map_err(|_| CliError::Usage(format!("not a number in --density: {s:?}")));
        Ok((parse(a)?, parse(b)?))
    };
    let alt = match parts.as_slice() {
        ["uniform", a, b] => {
            let (a, b) = nums(a, b)?;
            DensityAlternative::uniform(a, b)
        }
        ["normal", mean, sd] => {
            let (mean, sd) = nums(mean, sd)?;
            DensityAlternative::normal(mean, sd)
        }
        _ => return Err(CliError::Usage(format!("--density must be uniform:A:B or normal:MEAN:SD, got {spec:?}"))),
    };
    usage(alt)
}

fn experiment_fields(r: &mut Record, args: &ExperimentArgs, u: f64) {
    r.add("n", Value::Int(args.n))
        .add("k", Value::Int(args.k))
        .add("p0", Value::float(args.p0, Style::Significant(3)))
        .add("u", Value::float(u, U));
}

pub fn family(cmd: &FamilyCommand) -> Result<Output, CliError> {
    let mut r = Record::default();
    match cmd {
        FamilyCommand::LrX { experiment: args, x } => {
            let e = experiment(args)?;
            let param = standardize(e, args.p0)?;
            let alt = usage(PointAlternative::new(&param, *x))?;
            experiment_fields(&mut r, args, param.u);
            r.add("x", Value::float(*x, U))
                .add("y", Value::float(alt.y, U))
                .add("z", Value::float(alt.z, Style::Significant(4)))
                .add("p", Value::float(alt.p, Style::Significant(6)))
                .add("lr_x_exact", Value::float(lr_x_exact(e, args.p0, *x)?, LR))
                .add("lr_x_approx", Value::float(lr_x_approx(param.u, *x), LR));
        }
        FamilyCommand::LrF { experiment: args, density, integrand } => {
            let e = experiment(args)?;
            let alt = parse_density(density)?.certify_sup_bound(args.p0);
            let opts = LrfOptions {
                integrand: match integrand {
                    IntegrandArg::Approx => Integrand::Approx,
                    IntegrandArg::Exact => Integrand::Exact,
                },
                ..Default::default()
            };
            experiment_fields(&mut r, args, standardize(e, args.p0)?.u);
            r.add("density", Value::Text(alt.label().to_string()))
                .add("lr_f", Value::float(lr_f_with(e, args.p0, &alt, opts)?, LR))
                .add("upper_bound", Value::opt(lr_f_upper_bound(e, args.p0, &alt)?, LR));
        }
        FamilyCommand::LrNormal { experiment: args, shift, s } => {
            let e = experiment(args)?;
            experiment_fields(&mut r, args, standardize(e, args.p0)?.u);
            let closed = usage(lr_normal_family(e, args.p0, *shift, *s))?;
            let quad = DensityAlternative::normal(args.p0 - shift, *s).and_then(|alt| lr_f(e, args.p0, &alt)).ok();
            r.add("shift", Value::float(*shift, Style::Significant(4)))
                .add("s", Value::float(*s, Style::Significant(4)))
                .add("lr_normal", Value::float(closed, LR))
                .add("lr_f_quadrature", Value::opt(quad, LR));
        }
        FamilyCommand::LrAlpha { experiment: args, alpha } => {
            let e = experiment(args)?;
            let u = standardize(e, args.p0)?.u;
            experiment_fields(&mut r, args, u);
            r.add("alpha", Value::float(*alpha, Style::Significant(4)))
                .add("lr_alpha", Value::float(usage(lr_alpha(e, args.p0, *alpha))?, Style::Significant(4)))
                .add("limit", Value::float(lr_alpha_limit(u)?, Style::Significant(4)));
        }
        FamilyCommand::MaxLr { p, sided } => {
            let sided = match sided {
                SidedArg::One => Sided::One,
                SidedArg::Two => Sided::Two,
            };
            let m = usage(max_lr_for_pvalue(*p, sided))?;
            r.add("p_value", Value::float(m.p_value, Style::Significant(3)))
                .add(
                    "sided",
                    Value::Text(
                        match sided {
                            Sided::One => "one",
                            Sided::Two => "two",
                        }
                        .into(),
                    ),
                )
                .add("u", Value::float(m.u, U))
                .add("sup_lr", Value::float(m.sup_lr, Style::Fixed(1)));
        }
    }
    Ok(Output::Record(r))
}

pub fn threshold(mus: &[f64]) -> Result<Output, CliError> {
    let mut t = Table::new(vec!["mu", "z_star", "c_star"]).titled("E(T^mu) is finite exactly when c < c_star");
    for &mu in mus {
        let c = usage(finiteness_threshold(mu))?;
        t.push(vec![
            Value::float(mu, Style::Significant(3)),
            Value::float(0.5 * c * c, Style::Fixed(6)),
            Value::float(c, Style::Fixed(6)),
        ]);
    }
    Ok(Output::Table(t))
}
