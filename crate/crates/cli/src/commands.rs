use gkcs_core::coherent::{make_state_with_cap, DEFAULT_NMAX_CAP};
use gkcs_core::geometry::metric_components;
use gkcs_core::quadrature::QuadratureOptions;
use gkcs_core::quantize::{
    op_angular, op_monomial, op_radial, op_z, op_zbar, rescaled_boson, OperatorMatrix, DEFAULT_NMAX,
};
use gkcs_core::statistics::{fano, g2, mandel_q, mean_n, quadrature_variances, squeezing, Squeezing};
use gkcs_core::verify::{run_suite, CriterionOutcome, SuiteConfig};
use gkcs_core::{spectrum, Error, ModelParams, C64};
use rayon::prelude::*;
use serde_json::Value;

use crate::output::{bar_chart, csv_text, emit, jint, jnum, json_text, line_chart, num, object, Format};
use crate::{eval_budget, Command, Common, Failure, Range, SymbolArg};

pub fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Spectrum { common, levels } => spectrum_table(&common, levels),
        Command::Cs { common } => coherent_state(&common),
        Command::StatsScan { common, x } => stats_scan(&common, x),
        Command::GeometryScan { common, x } => geometry_scan(&common, x),
        Command::Quantize {
            common,
            symbol,
            alpha,
            sigma,
            power,
            harmonic,
        } => quantize(&common, symbol, alpha, sigma, power, harmonic),
        Command::Validate { common, acceptance } => validate(&common, acceptance),
    }
}

fn format_of(common: &Common, default: Format, allowed: &[Format], command: &str) -> Result<Format, Failure> {
    let f = common.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Failure::Config(format!(
            "--format {} is not available for {command}",
            clap::ValueEnum::to_possible_value(&f).map(|v| v.get_name().to_string()).unwrap_or_default()
        )))
    }
}

fn params_json(p: &ModelParams) -> Value {
    object([
        ("nu", jnum(p.nu())),
        ("beta", jnum(p.beta())),
        ("s", jnum(p.scale_s())),
        ("L", jnum(p.box_l())),
    ])
}

fn spectrum_table(common: &Common, levels: usize) -> Result<(), Failure> {
    let p = common.params()?;
    let format = format_of(common, Format::Json, &[Format::Json, Format::Csv, Format::Svg], "spectrum")?;
    let points = spectrum::spectrum(&p, levels);
    let text = match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = points
                .iter()
                .map(|q| vec![q.n.to_string(), num(q.energy), num(q.excitation), num(q.rho)])
                .collect();
            csv_text(&["n", "energy", "excitation", "rho"], &rows)?
        }
        Format::Svg => {
            let bars: Vec<(usize, f64)> = points.iter().map(|q| (q.n, q.energy)).collect();
            bar_chart("E_n (units of eps0)", "n", &bars)
        }
        _ => json_text(&object([
            ("params", params_json(&p)),
            (
                "levels",
                Value::Array(
                    points
                        .iter()
                        .map(|q| {
                            object([
                                ("n", jint(q.n)),
                                ("energy", jnum(q.energy)),
                                ("excitation", jnum(q.excitation)),
                                ("rho", jnum(q.rho)),
                            ])
                        })
                        .collect(),
                ),
            ),
        ])),
    };
    emit(common.out.as_deref(), &text)
}

fn squeezing_name(s: Squeezing) -> &'static str {
    match s {
        Squeezing::XSqueezed => "x-squeezed",
        Squeezing::PSqueezed => "p-squeezed",
        Squeezing::Neither => "neither",
    }
}

fn coherent_state(common: &Common) -> Result<(), Failure> {
    let p = common.params()?;
    let format = format_of(common, Format::Json, &[Format::Json, Format::Csv, Format::Svg], "cs")?;
    let z = C64::new(common.z_re, common.z_im);
    let cap = common.nmax.unwrap_or(DEFAULT_NMAX_CAP);
    let st = make_state_with_cap(&p, z, common.gamma, common.tol()?, cap)?;
    let probs: Vec<(usize, f64)> = st.coefficients().iter().enumerate().map(|(n, c)| (n, c.norm_sqr())).collect();
    let text = match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = st
                .coefficients()
                .iter()
                .enumerate()
                .map(|(n, c)| vec![n.to_string(), num(c.re), num(c.im), num(c.norm_sqr())])
                .collect();
            csv_text(&["n", "re", "im", "probability"], &rows)?
        }
        Format::Svg => bar_chart(&format!("P(n) at |z|^2 = {:.6}", st.x()), "n", &probs),
        _ => {
            let x = st.x();
            let v = quadrature_variances(&st)?;
            let sq = squeezing(&st)?;
            let g = metric_components(&p, x)?;
            json_text(&object([
                ("params", params_json(&p)),
                ("z", object([("re", jnum(z.re)), ("im", jnum(z.im))])),
                ("gamma", jnum(st.gamma())),
                ("x", jnum(x)),
                ("n_max", jint(st.n_max())),
                ("tail_tol", jnum(st.tail_tol())),
                ("tail_bound", jnum(st.tail_bound())),
                ("ln_normalization", jnum(st.ln_normalization())),
                ("action", jnum(st.action())),
                ("mean_n", jnum(mean_n(&p, x)?)),
                ("mandel_q", jnum(mandel_q(&p, x)?)),
                ("fano", jnum(fano(&p, x)?)),
                ("g2", jnum(g2(&p, x)?)),
                ("metric_w", jnum(g.tangent_norm - g.projection)),
                ("sigma_x", jnum(v.sigma_x)),
                ("sigma_p", jnum(v.sigma_p)),
                ("delta_h", jnum(sq.delta_h)),
                ("squeezing", Value::from(squeezing_name(sq.label))),
                (
                    "coefficients",
                    Value::Array(
                        st.coefficients()
                            .iter()
                            .enumerate()
                            .map(|(n, c)| {
                                object([
                                    ("n", jint(n)),
                                    ("re", jnum(c.re)),
                                    ("im", jnum(c.im)),
                                    ("probability", jnum(c.norm_sqr())),
                                ])
                            })
                            .collect(),
                    ),
                ),
            ]))
        }
    };
    emit(common.out.as_deref(), &text)
}

/// Evaluate `f` at every grid point in parallel, keeping grid order.
fn scan<T, F>(range: Range, f: F) -> Result<Vec<T>, Failure>
where
    T: Send,
    F: Fn(f64) -> Result<T, Error> + Sync + Send,
{
    Ok(range.points().into_par_iter().map(f).collect::<Result<Vec<_>, _>>()?)
}

fn table_output(
    common: &Common,
    p: &ModelParams,
    columns: &[&str],
    rows: &[Vec<f64>],
    chart: (&str, &[usize]),
) -> Result<String, Failure> {
    let format = common.format.unwrap_or(Format::Json);
    Ok(match format {
        Format::Csv => {
            let text: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|&v| num(v)).collect()).collect();
            csv_text(columns, &text)?
        }
        Format::Svg => {
            let series: Vec<(&str, Vec<(f64, f64)>)> = chart
                .1
                .iter()
                .map(|&c| (columns[c], rows.iter().map(|r| (r[0], r[c])).collect()))
                .collect();
            line_chart(chart.0, columns[0], &series)
        }
        Format::Json => json_text(&object([
            ("params", params_json(p)),
            (
                "rows",
                Value::Array(
                    rows.iter()
                        .map(|r| object(columns.iter().zip(r).map(|(c, &v)| (*c, jnum(v)))))
                        .collect(),
                ),
            ),
        ])),
        Format::Table => return Err(Failure::Config("--format table is only available for validate".into())),
    })
}

fn stats_scan(common: &Common, range: Range) -> Result<(), Failure> {
    let p = common.params()?;
    let rows = scan(range, |x| {
        let g = metric_components(&p, x)?;
        Ok(vec![
            x,
            mean_n(&p, x)?,
            mandel_q(&p, x)?,
            fano(&p, x)?,
            g2(&p, x)?,
            g.tangent_norm - g.projection,
        ])
    })?;
    let columns = ["x", "mean_n", "mandel_q", "fano", "g2", "metric_w"];
    let text = table_output(common, &p, &columns, &rows, ("Q(x), g2(x), W(x)", &[2, 4, 5]))?;
    emit(common.out.as_deref(), &text)
}

fn geometry_scan(common: &Common, range: Range) -> Result<(), Failure> {
    let p = common.params()?;
    let rows = scan(range, |x| {
        let g = metric_components(&p, x)?;
        Ok(vec![x, g.tangent_norm - g.projection, g.tangent_norm, g.projection])
    })?;
    let columns = ["x", "metric_w", "tangent_norm", "projection"];
    let text = table_output(common, &p, &columns, &rows, ("W(x)", &[1]))?;
    emit(common.out.as_deref(), &text)
}

fn quantize(
    common: &Common,
    symbol: SymbolArg,
    alpha: usize,
    sigma: usize,
    power: f64,
    harmonic: i64,
) -> Result<(), Failure> {
    let p = common.params()?;
    let format = format_of(common, Format::Json, &[Format::Json, Format::Csv], "quantize")?;
    let n_max = common.nmax.unwrap_or(DEFAULT_NMAX);
    let gamma = common.gamma;
    let (name, extra, m): (&str, Vec<(&str, Value)>, OperatorMatrix) = match symbol {
        SymbolArg::Z => ("z", vec![], op_z(&p, gamma, n_max)),
        SymbolArg::Zbar => ("zbar", vec![], op_zbar(&p, gamma, n_max)),
        SymbolArg::Monomial => (
            "monomial",
            vec![("alpha", jint(alpha)), ("sigma", jint(sigma))],
            op_monomial(&p, alpha, sigma, gamma, n_max)?,
        ),
        SymbolArg::RadialPower => {
            if !(power > -1.0) || !power.is_finite() {
                return Err(Failure::Config(format!("--power must be finite and > -1, got {power}")));
            }
            let opts = QuadratureOptions::new(common.tol()?).with_budget(eval_budget()?);
            (
                "radial-power",
                vec![("power", jnum(power))],
                op_radial(&p, |x| x.powf(power), n_max, &opts)?,
            )
        }
        SymbolArg::AngularHarmonic => {
            let one = |k: i64| if k == harmonic { C64::new(1.0, 0.0) } else { C64::default() };
            (
                "angular-harmonic",
                vec![("harmonic", Value::from(harmonic))],
                op_angular(&p, one, gamma, n_max)?,
            )
        }
        SymbolArg::BosonA => ("boson-a", vec![], rescaled_boson(n_max).0),
        SymbolArg::BosonAdag => ("boson-adag", vec![], rescaled_boson(n_max).1),
    };
    let dim = m.dim();
    let text = if format == Format::Csv {
        let mut rows = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let v = m.get(i, j);
                rows.push(vec![i.to_string(), j.to_string(), num(v.re), num(v.im)]);
            }
        }
        csv_text(&["row", "col", "re", "im"], &rows)?
    } else {
        let entries: Vec<Value> = (0..dim)
            .map(|i| {
                Value::Array(
                    (0..dim)
                        .map(|j| {
                            let v = m.get(i, j);
                            Value::Array(vec![jnum(v.re), jnum(v.im)])
                        })
                        .collect(),
                )
            })
            .collect();
        let mut fields = vec![
            ("symbol", Value::from(name)),
            ("params", params_json(&p)),
            ("gamma", jnum(m.gamma())),
            ("n_max", jint(m.n_max())),
            ("dim", jint(dim)),
        ];
        fields.extend(extra);
        fields.push(("entries", Value::Array(entries)));
        json_text(&object(fields))
    };
    emit(common.out.as_deref(), &text)
}

fn outcome_status(o: &CriterionOutcome) -> &'static str {
    if o.passed() {
        "pass"
    } else {
        "FAIL"
    }
}

fn validate(common: &Common, acceptance: bool) -> Result<(), Failure> {
    let format = format_of(common, Format::Table, &[Format::Table, Format::Json, Format::Csv], "validate")?;
    let cfg = if acceptance {
        SuiteConfig::acceptance()?
    } else {
        SuiteConfig::for_model(&common.params()?)
    }
    .with_budget(eval_budget()?);
    let outcomes = run_suite(&cfg);
    let text = match format {
        Format::Json => json_text(&object([
            ("passed", Value::from(outcomes.iter().all(|o| o.passed()))),
            (
                "criteria",
                Value::Array(
                    outcomes
                        .iter()
                        .map(|o| {
                            object([
                                ("id", jint(o.id)),
                                ("title", Value::from(o.title)),
                                ("passed", Value::from(o.passed())),
                                ("error", o.error.as_ref().map_or(Value::Null, |e| Value::from(e.to_string()))),
                                (
                                    "checks",
                                    Value::Array(
                                        o.reports
                                            .iter()
                                            .map(|r| {
                                                object([
                                                    ("name", Value::from(r.name.as_str())),
                                                    ("status", Value::from(r.status())),
                                                    ("residual", jnum(r.residual)),
                                                    ("tolerance", jnum(r.tolerance)),
                                                    ("detail", Value::from(r.detail.as_str())),
                                                ])
                                            })
                                            .collect(),
                                    ),
                                ),
                            ])
                        })
                        .collect(),
                ),
            ),
        ])),
        Format::Csv => {
            let mut rows = Vec::new();
            for o in &outcomes {
                if let Some(e) = &o.error {
                    rows.push(vec![o.id.to_string(), "error".into(), e.to_string(), String::new(), String::new()]);
                }
                for r in &o.reports {
                    let tol = if r.informational { String::new() } else { num(r.tolerance) };
                    rows.push(vec![o.id.to_string(), r.status().into(), r.name.clone(), num(r.residual), tol]);
                }
            }
            csv_text(&["criterion", "status", "check", "residual", "tolerance"], &rows)?
        }
        _ => {
            let mut t = String::new();
            for o in &outcomes {
                t.push_str(&format!("{:>2} {} {}\n", o.id, outcome_status(o), o.title));
                if let Some(e) = &o.error {
                    t.push_str(&format!("     error  {e}\n"));
                }
                for r in &o.reports {
                    let tol = if r.informational { "-".to_string() } else { num(r.tolerance) };
                    t.push_str(&format!("     {:<5} {:>24} {:>24}  {}\n", r.status(), num(r.residual), tol, r.name));
                }
            }
            let passed = outcomes.iter().filter(|o| o.passed()).count();
            t.push_str(&format!("{passed}/{} criteria passed\n", outcomes.len()));
            t
        }
    };
    emit(common.out.as_deref(), &text)?;

    if let Some(e) = outcomes.iter().find_map(|o| o.error.clone()) {
        return Err(e.into());
    }
    let failed: Vec<String> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.id.to_string()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("criteria {}", failed.join(", "))))
    }
}
