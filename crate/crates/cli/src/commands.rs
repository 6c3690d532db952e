use std::path::PathBuf;

use dunkl_hankel::bessel::{dunkl_residual_psi, l_residual_phi, phi, psi, shift_check, EvalRecord, SeriesEvalSpec};
use dunkl_hankel::poly::Polynomial;
use dunkl_hankel::quadrature::QuadratureSpec;
use dunkl_hankel::report::{curve_csv, rel_err, CheckReport, SCHEMA_VERSION};
use dunkl_hankel::special::gamma;
use dunkl_hankel::transform::{
    adjointness_check, grid_map, hankel_gaussian_oracle, hankel_nonsym, inner_re, inversion_check_im_re,
    inversion_check_re_im, master_check, master_check_sym, master_scaling, nonsym_from_sym_check,
    operator_lambda_grid, operator_test_functions, operator_transform_check, plancherel_check, GaussianPolynomial,
};
use dunkl_hankel::truncated::{braid_variants, normalization_anomaly, truncated_json, truncated_report as report_n};
use dunkl_hankel::Error;
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::{
    EvalArgs, Format, InversionArgs, KArgs, MasterArgs, OutputArgs, PlancherelArgs, SuiteArgs, TransformArgs,
    TruncatedArgs,
};

pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Precondition(_) => 2,
            _ => 3,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError {
        code: 2,
        message: message.into(),
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn parse_grid(s: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || usage(format!("grid must be start:stop:count, got {s:?}"));
    let [a, b, n] = parts.as_slice() else {
        return Err(bad());
    };
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    match n {
        0 => Err(usage("grid count must be positive")),
        1 => Ok(vec![a]),
        _ => Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()),
    }
}

fn parse_poly(s: &str) -> CliResult<Polynomial<Complex64>> {
    let coeffs = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| usage(format!("polynomial must be comma separated numbers, got {s:?}")))?;
    Ok(Polynomial::from_real(&coeffs))
}

fn require_json(output: &OutputArgs, command: &str) -> CliResult<()> {
    if output.format == Format::Csv {
        return Err(usage(format!("{command} only supports --format json")));
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json serializes") + "\n"
}

fn reports_outcome(reports: Vec<CheckReport>, single: bool) -> Outcome {
    let pass = reports.iter().all(|r| r.pass);
    let value = if single && reports.len() == 1 {
        serde_json::to_value(&reports[0])
    } else {
        serde_json::to_value(&reports)
    }
    .expect("reports serialize");
    Outcome {
        text: pretty(&value),
        pass,
    }
}

/// Writes to `--out`, else `$DUNKL_OUT_DIR/<command>.<ext>`, else stdout.
pub fn emit(command: &str, output: &OutputArgs, text: &str) -> std::result::Result<(), String> {
    let ext = match output.format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    let path: Option<PathBuf> = output
        .out
        .clone()
        .or_else(|| output.out_dir.as_ref().map(|d| d.join(format!("{command}.{ext}"))));
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| format!("{}: {e}", parent.display()))?;
            }
            std::fs::write(&p, text).map_err(|e| format!("{}: {e}", p.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Clone, Copy)]
pub enum Kernel {
    Phi,
    Psi,
}

pub fn eval(a: &EvalArgs, kernel: Kernel) -> CliResult<Outcome> {
    let xs = match (&a.grid, a.x) {
        (Some(g), _) => parse_grid(g)?,
        (None, Some(x)) => vec![x],
        (None, None) => return Err(usage("one of --x or --grid is required")),
    };
    let spec = SeriesEvalSpec::default();
    let f = match kernel {
        Kernel::Phi => phi,
        Kernel::Psi => psi,
    };
    let mut records = Vec::with_capacity(xs.len());
    for &x in &xs {
        let v = f(c(x), c(a.lambda), c(a.k), &spec)?;
        records.push(EvalRecord::new(x, a.lambda, a.k, v));
    }
    let text = match a.output.format {
        Format::Csv => {
            let rows: Vec<(f64, Complex64)> = records.iter().map(|r| (r.x, Complex64::new(r.value_re, r.value_im))).collect();
            curve_csv("x", &rows)
        }
        Format::Json if a.grid.is_none() => pretty(&serde_json::to_value(&records[0]).expect("record serializes")),
        Format::Json => pretty(&serde_json::to_value(&records).expect("records serialize")),
    };
    Ok(Outcome { text, pass: true })
}

pub fn transform(a: &TransformArgs) -> CliResult<Outcome> {
    let lambdas = match (&a.grid, a.lambda) {
        (Some(g), _) => parse_grid(g)?,
        (None, Some(l)) => vec![l],
        (None, None) => return Err(usage("one of --lambda or --grid is required")),
    };
    let f = GaussianPolynomial::decaying(parse_poly(&a.poly)?, c(a.k));
    let q = a.quad.spec();
    let oracle = hankel_gaussian_oracle(&f)?;
    let values = grid_map(&lambdas, |&l| hankel_nonsym(&f, c(l), c(a.k), &q));
    let mut reports = Vec::with_capacity(lambdas.len());
    let mut rows = Vec::with_capacity(lambdas.len());
    for (&l, v) in lambdas.iter().zip(values) {
        let v = v?;
        let want = oracle.eval(c(l));
        rows.push((l, v.value));
        reports.push(
            CheckReport::new("transform")
                .param("k", a.k)
                .param("lambda", l)
                .param("poly", &a.poly)
                .sides(v.value, want)
                .judge(rel_err(v.value, want), a.tol)
                .with_quadrature(v.info),
        );
    }
    match a.output.format {
        Format::Csv => Ok(Outcome {
            text: curve_csv("lambda", &rows),
            pass: reports.iter().all(|r| r.pass),
        }),
        Format::Json => Ok(reports_outcome(reports, a.grid.is_none())),
    }
}

pub fn verify_master(a: &MasterArgs) -> CliResult<Outcome> {
    require_json(&a.output, "verify-master")?;
    let q = a.quad.spec();
    let ns = master_check(c(a.k), c(a.lambda), c(a.mu), a.alpha, &q)?;
    let sym = master_check_sym(c(a.k), c(a.lambda), c(a.mu), a.alpha, &q)?;
    let mut report = CheckReport::new("master")
        .param("k", a.k)
        .param("lambda", a.lambda)
        .param("mu", a.mu)
        .param("alpha", a.alpha)
        .sides(ns.lhs, ns.rhs)
        .judge(ns.rel_err.max(sym.rel_err), a.tol)
        .with_quadrature(ns.quadrature)
        .with_details(json!({
            "nonsymmetric": { "lhs": [ns.lhs.re, ns.lhs.im], "rhs": [ns.rhs.re, ns.rhs.im], "rel_err": ns.rel_err },
            "symmetric": { "lhs": [sym.lhs.re, sym.lhs.im], "rhs": [sym.rhs.re, sym.rhs.im], "rel_err": sym.rel_err },
        }));
    if ns.rel_err.is_nan() || sym.rel_err.is_nan() {
        report.pass = false;
    }
    Ok(reports_outcome(vec![report], true))
}

fn operator_reports(k: f64, tol: f64, q: &QuadratureSpec) -> CliResult<Vec<CheckReport>> {
    let ids = operator_transform_check(c(k), &operator_test_functions(c(k)), &operator_lambda_grid(), q)?;
    Ok(ids
        .into_iter()
        .map(|id| {
            CheckReport::new(format!("operator: {}", id.name))
                .param("k", k)
                .param("test_functions", id.test_functions)
                .param("lambda_samples", id.samples)
                .judge(id.max_rel_err, tol)
        })
        .collect())
}

pub fn verify_operators(a: &KArgs) -> CliResult<Outcome> {
    require_json(&a.output, "verify-operators")?;
    Ok(reports_outcome(operator_reports(a.k, a.tol, &a.quad.spec())?, false))
}

fn plancherel_reports(
    f: &GaussianPolynomial,
    g: &GaussianPolynomial,
    labels: (&str, &str),
    tol: f64,
    q: &QuadratureSpec,
) -> CliResult<Vec<CheckReport>> {
    let k = f.k.re;
    let p = plancherel_check(f, g, q)?;
    let adj = adjointness_check(f, g, q)?;
    let base = |name: &str| CheckReport::new(name).param("k", k).param("f", labels.0).param("g", labels.1);
    Ok(vec![
        base("plancherel").sides(p.lhs, p.rhs).judge(p.rel_err, tol).with_quadrature(p.quadrature.clone()),
        base("adjointness: <Lf,g> = <f,Lg>")
            .param("absolute", true)
            .judge(adj.laplacian, tol)
            .with_quadrature(p.quadrature.clone()),
        base("adjointness: <Df,g> = -<f,Dg>")
            .param("absolute", true)
            .judge(adj.dunkl, tol)
            .with_quadrature(p.quadrature),
    ])
}

pub fn verify_plancherel(a: &PlancherelArgs) -> CliResult<Outcome> {
    require_json(&a.output, "verify-plancherel")?;
    let f = GaussianPolynomial::decaying(parse_poly(&a.poly)?, c(a.k));
    let g = GaussianPolynomial::decaying(parse_poly(&a.poly2)?, c(a.k));
    let reports = plancherel_reports(&f, &g, (&a.poly, &a.poly2), a.tol, &a.quad.spec())?;
    Ok(reports_outcome(reports, false))
}

fn inversion_reports(k: f64, nmax: usize, tol: f64, q: &QuadratureSpec) -> CliResult<Vec<CheckReport>> {
    let mut out = Vec::new();
    for j in 0..=nmax {
        let f = GaussianPolynomial::monomial(j, c(k));
        let g = hankel_gaussian_oracle(&f)?;
        for (name, r) in [
            ("inversion: F_im F_re = id", inversion_check_re_im(&f, q)?),
            ("inversion: F_re F_im = id", inversion_check_im_re(&g, q)?),
        ] {
            out.push(
                CheckReport::new(name)
                    .param("k", k)
                    .param("j", j)
                    .judge(r.rel_err, tol)
                    .with_quadrature(r.quadrature)
                    .with_details(json!({ "fit_residual": r.fit_residual, "oracle_distance": r.oracle_distance })),
            );
        }
    }
    Ok(out)
}

pub fn verify_inversion(a: &InversionArgs) -> CliResult<Outcome> {
    require_json(&a.output, "verify-inversion")?;
    Ok(reports_outcome(inversion_reports(a.k, a.nmax, a.tol, &a.quad.spec())?, false))
}

fn truncated_value(n: usize) -> (Value, bool) {
    let pass = report_n(n).pass();
    let mut v = truncated_json(n);
    let obj = v.as_object_mut().expect("object");
    obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
    obj.insert("check_name".into(), json!("truncated-report"));
    obj.insert("pass".into(), json!(pass));
    (v, pass)
}

pub fn truncated_report(a: &TruncatedArgs) -> CliResult<Outcome> {
    require_json(&a.output, "truncated-report")?;
    match (a.n, a.nmax) {
        (Some(n), _) => {
            let (v, pass) = truncated_value(n);
            Ok(Outcome { text: pretty(&v), pass })
        }
        (None, Some(nmax)) => {
            let (values, passes): (Vec<Value>, Vec<bool>) = (0..=nmax).map(truncated_value).unzip();
            Ok(Outcome {
                text: pretty(&Value::Array(values)),
                pass: passes.iter().all(|&p| p),
            })
        }
        (None, None) => Err(usage("one of --n or --nmax is required")),
    }
}

/// Worst relative error over a grid, reported as one check.
fn aggregate(name: &str, k: f64, errors: &[f64], tol: f64, extra: Value) -> CheckReport {
    let worst = errors.iter().copied().fold(0.0, |a: f64, e| if e.is_nan() { f64::NAN } else { a.max(e) });
    CheckReport::new(name)
        .param("k", k)
        .param("cells", errors.len())
        .judge(worst, tol)
        .with_details(extra)
}

fn suite_for_k(k: f64, q: &QuadratureSpec) -> CliResult<Vec<CheckReport>> {
    let mut reports = Vec::new();
    let spec = SeriesEvalSpec::default();

    let axis: Vec<f64> = (-8..=8).filter(|&i| i != 0).map(|i| 0.25 * i as f64).collect();
    let mut residuals = Vec::new();
    let mut shifts = Vec::new();
    for &x in &axis {
        for &l in &axis {
            let d = dunkl_residual_psi(c(x), c(l), c(k), &spec)?;
            let lr = l_residual_phi(c(x), c(l), c(k), &spec)?;
            residuals.push(d.max(lr.direct).max(lr.conjugated));
            shifts.push(shift_check(c(x), c(l), c(k), &spec)?);
        }
    }
    reports.push(aggregate("eigen residuals", k, &residuals, 1e-9, json!({ "absolute": true })));
    reports.push(aggregate("shift formula", k, &shifts, 1e-9, Value::Null));

    let mut cells = Vec::new();
    for &l in &[0.0, 0.3, -0.3, 1.2, -1.2] {
        for &m in &[0.0, 0.5, -0.5, 1.5, -1.5] {
            for &alpha in &[0.5, 1.0, 2.0] {
                cells.push((l, m, alpha));
            }
        }
    }
    let master = grid_map(&cells, |&(l, m, alpha)| {
        Ok::<_, Error>((
            master_check(c(k), c(l), c(m), alpha, q)?.rel_err,
            master_check_sym(c(k), c(l), c(m), alpha, q)?.rel_err,
        ))
    });
    let mut ns = Vec::new();
    let mut sym = Vec::new();
    for r in master {
        let (a, b) = r?;
        ns.push(a);
        sym.push(b);
    }
    reports.push(aggregate("master grid", k, &ns, 1e-8, Value::Null));
    reports.push(aggregate("master grid (symmetric)", k, &sym, 1e-8, Value::Null));

    let pairs: Vec<(f64, f64)> = [(0.0, 0.0), (0.3, -0.5), (1.2, 1.5)].to_vec();
    let from_sym = grid_map(&pairs, |&(l, m)| nonsym_from_sym_check(c(k), c(l), c(m), q).map(|v| v.rel_err));
    let from_sym: Vec<f64> = from_sym.into_iter().collect::<Result<_, _>>()?;
    reports.push(aggregate("nonsymmetric master from symmetric", k, &from_sym, 1e-8, Value::Null));

    let mut scaling = Vec::new();
    let mut plain = Vec::new();
    for &alpha in &[0.5, 2.0] {
        let s = master_scaling(c(k), alpha, q)?;
        scaling.push(s.rel_err_half_shift);
        plain.push(s.rel_err_plain);
    }
    reports.push(aggregate(
        "master scaling alpha^(-k-1/2)",
        k,
        &scaling,
        1e-8,
        json!({ "rel_err_alpha_minus_k": plain }),
    ));

    let g = GaussianPolynomial::monomial(0, c(k));
    let norm = inner_re(&g, &g, c(k), q)?;
    let want = c(2f64.sqrt()).powc(c(-2.0 * k - 1.0)) * gamma(c(k + 0.5));
    reports.push(
        CheckReport::new("gaussian norm")
            .param("k", k)
            .sides(norm.value, want)
            .judge(rel_err(norm.value, want), 1e-9)
            .with_quadrature(norm.info),
    );

    reports.extend(operator_reports(k, 1e-7, q)?);

    let mut pl = Vec::new();
    let mut adj = Vec::new();
    for i in 0..=3 {
        for j in 0..=3 {
            let f = GaussianPolynomial::monomial(i, c(k));
            let h = GaussianPolynomial::monomial(j, c(k));
            pl.push(plancherel_check(&f, &h, q)?.rel_err);
            let d = adjointness_check(&f, &h, q)?;
            adj.push(d.laplacian.max(d.dunkl));
        }
    }
    reports.push(aggregate("plancherel (monomial pairs)", k, &pl, 1e-7, Value::Null));
    reports.push(aggregate("adjointness (monomial pairs)", k, &adj, 1e-7, json!({ "absolute": true })));

    reports.extend(inversion_reports(k, 4, 1e-7, q)?);
    Ok(reports)
}

pub fn full_suite(a: &SuiteArgs) -> CliResult<Outcome> {
    require_json(&a.output, "full-suite")?;
    let q = a.quad.spec();
    let ks = match a.k {
        Some(k) => vec![k],
        None => vec![0.25, 1.0, 2.5],
    };
    let mut reports = Vec::new();
    for k in ks {
        reports.extend(suite_for_k(k, &q)?);
    }
    for n in 0..=a.nmax {
        let r = report_n(n);
        let pass = r.pass();
        let mut check = CheckReport::new("truncated")
            .param("n", n)
            .judge(if pass { 0.0 } else { 1.0 }, 0.5)
            .with_details(serde_json::to_value(&r).expect("report serializes"));
        check.parameters.remove("tolerance");
        reports.push(check);
    }
    let anomalies: Vec<Value> = (0..=a.nmax.min(6))
        .map(|n| {
            json!({
                "n": n,
                "braid": braid_variants(n),
                "normalization": normalization_anomaly(n),
            })
        })
        .collect();
    let pass = reports.iter().all(|r| r.pass);
    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.check_name.as_str()).collect();
    let value = json!({
        "schema_version": SCHEMA_VERSION,
        "check_name": "full-suite",
        "pass": pass,
        "checks": reports.len(),
        "failed": failed,
        "reports": reports,
        "anomalies": anomalies,
    });
    Ok(Outcome {
        text: pretty(&value),
        pass,
    })
}
