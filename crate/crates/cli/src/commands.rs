use std::path::Path;

use serde_json::{json, Value};
use tregular::acceptance::{run_suite, Backend, SuiteConfig};
use tregular::cauchy::{error_table, interior_points};
use tregular::hypercomplex::{hat_extension, verify_basis};
use tregular::quat13::{Coefficients, KIndex, Quat13};
use tregular::sampling;
use tregular::tregular::{check_regular, check_slice_preserving, CheckOptions};
use tregular::{
    algebra_by_name, AlgebraSpec, Element, Error, HypercomplexBasis, PolyMap, Sampler, Scalar, TFan,
};

use crate::args::{Family, Format};

/// A finished command: the rendered report and whether every check passed.
pub struct Report {
    pub body: String,
    pub passed: bool,
}

impl Report {
    fn new(body: String, passed: bool) -> Self {
        Self { body, passed }
    }
}

/// Usage errors carry a message and map to exit status 2.
pub type CmdResult = Result<Report, String>;

fn usage(e: Error) -> String {
    e.to_string()
}

pub fn read_json(path: &Path) -> Result<Value, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: malformed JSON: {e}", path.display()))
}

fn parse_scalar<S: Scalar>(text: &str) -> Result<S, String> {
    S::from_json(&Value::String(text.trim().to_string())).map_err(usage)
}

fn parse_list<S: Scalar>(text: &str) -> Result<Vec<S>, String> {
    text.split(',').map(parse_scalar).collect()
}

fn parse_pair<S: Scalar>(text: &str, what: &str) -> Result<(S, S), String> {
    match parse_list::<S>(text)?.as_slice() {
        [a, b] => Ok((a.clone(), b.clone())),
        _ => Err(format!(
            "{what} needs two comma-separated values, got {text:?}"
        )),
    }
}

fn load_poly<S: Scalar>(
    path: &Path,
    alg: &std::sync::Arc<AlgebraSpec>,
) -> Result<PolyMap<S>, String> {
    let f = PolyMap::from_json(&read_json(path)?, Some(alg))
        .map_err(|e| format!("{}: {e}", path.display()))?;
    if f.algebra().name() != alg.name() {
        return Err(format!(
            "{}: polynomial lives in {}, expected {}",
            path.display(),
            f.algebra().name(),
            alg.name()
        ));
    }
    Ok(f)
}

fn load_quaternionic<S: Scalar>(path: &Path, q: &Quat13<S>) -> Result<PolyMap<S>, String> {
    let f = load_poly(path, q.algebra())?;
    if f.vars() != 4 {
        return Err(format!(
            "{}: expected 4 variables, found {}",
            path.display(),
            f.vars()
        ));
    }
    Ok(f)
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn pretty(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn exponent(m: &[u32]) -> String {
    m.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn components<S: Scalar>(c: &Element<S>) -> Vec<String> {
    c.coeffs().iter().map(ToString::to_string).collect()
}

fn basis_header<'a>(alg: &'a AlgebraSpec, lead: &[&'a str]) -> Vec<&'a str> {
    lead.iter()
        .copied()
        .chain(alg.labels().iter().map(String::as_str))
        .collect()
}

fn not_text(format: Format, command: &str) -> Result<(), String> {
    if format == Format::Text {
        Err(format!("{command} supports --format json or csv"))
    } else {
        Ok(())
    }
}

const AMBIENT: [&str; 4] = ["x0", "x1", "x2", "x3"];
const SLICE: [&str; 3] = ["x0", "x1", "beta"];
const AB_VARS: [&str; 3] = ["x0", "x1", "gamma"];

pub fn table<S: Scalar>(family: Family, maxdeg: u32, format: Format) -> CmdResult {
    not_text(format, "table")?;
    let q = Quat13::<S>::new();
    let ks: Vec<KIndex> = (0..=maxdeg).flat_map(Quat13::<S>::family_indices).collect();
    let entries: Vec<(KIndex, &str, PolyMap<S>, &[&str])> = match family {
        Family::Tk => ks
            .iter()
            .map(|&k| (k, "T", q.tk(k), &AMBIENT[..]))
            .collect(),
        Family::Akbk => ks
            .iter()
            .flat_map(|&k| {
                let ab = q.akbk(k);
                [(k, "A", ab.a, &AB_VARS[..]), (k, "B", ab.b, &AB_VARS[..])]
            })
            .collect(),
    };
    let body = match format {
        Format::Csv => {
            let header = basis_header(q.algebra(), &["k1", "k2", "part", "exponent"]);
            csv_string(
                &header,
                entries.iter().flat_map(|((k1, k2), part, p, _)| {
                    p.terms()
                        .map(|(m, c)| {
                            let mut row = vec![
                                k1.to_string(),
                                k2.to_string(),
                                part.to_string(),
                                exponent(m),
                            ];
                            row.extend(components(c));
                            row
                        })
                        .collect::<Vec<_>>()
                }),
            )
        }
        _ => {
            let rows: Vec<Value> = entries
                .iter()
                .map(|((k1, k2), part, p, names)| {
                    json!({"k": [k1, k2], "part": part, "poly": p.to_json(), "text": p.display_with(names)})
                })
                .collect();
            pretty(
                &json!({"family": format!("{family:?}").to_lowercase(), "maxdeg": maxdeg, "entries": rows}),
            )
        }
    };
    Ok(Report::new(body, true))
}

pub struct CheckArgs<'a> {
    pub fan: &'a str,
    pub input: &'a Path,
    pub sampler: Sampler,
    pub opts: CheckOptions,
    pub slice_preserving: bool,
}

pub fn check<S: Scalar>(args: &CheckArgs<'_>, format: Format) -> CmdResult {
    not_text(format, "check")?;
    let fan = TFan::<S>::parse(args.fan).map_err(usage)?;
    let f = load_poly::<S>(args.input, fan.basis().algebra())?;
    if args.slice_preserving {
        let report = check_slice_preserving(&f, &fan, &args.sampler).map_err(usage)?;
        let body = match format {
            Format::Csv => csv_string(
                &["fan", "backend", "samples", "verdict"],
                [vec![
                    report.fan.clone(),
                    S::BACKEND.into(),
                    report.sample_count.to_string(),
                    report.to_json()["verdict"]
                        .as_str()
                        .unwrap_or_default()
                        .into(),
                ]],
            ),
            _ => pretty(&report.to_json()),
        };
        return Ok(Report::new(body, report.is_preserving()));
    }
    let report = check_regular(&f, &fan, &args.sampler, &args.opts).map_err(usage)?;
    let body = match format {
        Format::Csv => {
            let j = report.to_json();
            csv_string(
                &["fan", "backend", "samples", "symbolic", "verdict"],
                [vec![
                    report.fan.clone(),
                    S::BACKEND.into(),
                    report.samples.len().to_string(),
                    j["symbolic"].as_str().unwrap_or_default().into(),
                    report.verdict_tag().into(),
                ]],
            )
        }
        _ => pretty(&report.to_json()),
    };
    Ok(Report::new(body, report.is_regular()))
}

fn coefficient_output<S: Scalar>(
    coeffs: &Coefficients<S>,
    center: &(S, S),
    format: Format,
) -> String {
    match format {
        Format::Csv => {
            let header = ["k1", "k2", "1", "i", "j", "k"];
            csv_string(
                &header,
                coeffs.iter().map(|((k1, k2), c)| {
                    let mut row = vec![k1.to_string(), k2.to_string()];
                    row.extend(components(c));
                    row
                }),
            )
        }
        _ => {
            let rows: Vec<Value> = coeffs
                .iter()
                .map(|((k1, k2), c)| json!({"k": [k1, k2], "coeff": c.to_json()}))
                .collect();
            pretty(&json!({
                "center": [center.0.to_json(), center.1.to_json()],
                "backend": S::BACKEND,
                "coeffs": rows,
            }))
        }
    }
}

pub fn expand<S: Scalar>(
    input: &Path,
    center: &str,
    maxdeg: Option<u32>,
    format: Format,
) -> CmdResult {
    not_text(format, "expand")?;
    let q = Quat13::<S>::new();
    let f = load_quaternionic(input, &q)?;
    let center = parse_pair::<S>(center, "--center")?;
    let maxdeg = maxdeg.unwrap_or_else(|| f.degree().unwrap_or(0));
    match q.series_expand(&f, center.clone(), maxdeg) {
        Ok(e) => Ok(Report::new(
            coefficient_output(&e.coeffs, &center, format),
            true,
        )),
        Err(Error::NotRegular) => {
            eprintln!("input is not (1,3)-regular: no expansion in the T_k family reproduces it");
            let body = match format {
                Format::Csv => String::new(),
                _ => pretty(&json!({"verdict": "not_regular"})),
            };
            Ok(Report::new(body, false))
        }
        Err(e) => Err(usage(e)),
    }
}

pub fn represent<S: Scalar>(input: &Path, count: usize, seed: u64, format: Format) -> CmdResult {
    not_text(format, "represent")?;
    let q = Quat13::<S>::new();
    let f = load_quaternionic(input, &q)?;
    let eval = |x: &Element<S>| f.evaluate_at(x);
    let mut rng = sampling::rng(seed);
    let mut rows = Vec::with_capacity(count);
    let mut passed = true;
    for t in 0..count {
        let i = q.random_circle_point(&mut rng).unit(1).clone();
        let j = q.random_circle_point(&mut rng).unit(1).clone();
        let k = loop {
            let k = q.random_circle_point(&mut rng).unit(1).clone();
            if k != j {
                break k;
            }
        };
        let z = q.random_mirror_point(&mut rng);
        let beta: S = sampling::nonzero_scalar(&mut rng);
        let direct = eval(&(&z + &i.scale_by(&beta))).map_err(usage)?;
        let general = q
            .represent_general(&eval, &i, &j, &k, &z, &beta)
            .map_err(usage)?;
        let two = q
            .represent_two_point(&eval, &i, &j, &z, &beta)
            .map_err(usage)?;
        let (ok_general, ok_two) = (general.approx_eq(&direct), two.approx_eq(&direct));
        passed &= ok_general && ok_two;
        rows.push((t, i, j, k, z, beta, ok_general, ok_two));
    }
    let body = match format {
        Format::Csv => csv_string(
            &["tuple", "I", "J", "K", "z", "beta", "general", "two_point"],
            rows.iter().map(|(t, i, j, k, z, b, g, p)| {
                vec![
                    t.to_string(),
                    i.to_string(),
                    j.to_string(),
                    k.to_string(),
                    z.to_string(),
                    b.to_string(),
                    g.to_string(),
                    p.to_string(),
                ]
            }),
        ),
        _ => {
            let tuples: Vec<Value> = rows
                .iter()
                .map(|(t, i, j, k, z, b, g, p)| {
                    json!({
                        "tuple": t, "I": i.to_json(), "J": j.to_json(), "K": k.to_json(),
                        "z": z.to_json(), "beta": b.to_json(), "general": g, "two_point": p,
                    })
                })
                .collect();
            pretty(&json!({"backend": S::BACKEND, "all_hold": passed, "tuples": tuples}))
        }
    };
    Ok(Report::new(body, passed))
}

pub fn stems<S: Scalar>(input: &Path, j: &str, format: Format) -> CmdResult {
    not_text(format, "stems")?;
    let q = Quat13::<S>::new();
    let f = load_quaternionic(input, &q)?;
    let (a, b) = parse_pair::<S>(j, "--j")?;
    let mut unit = q.unit("j").scale_by(&a);
    unit.add_scaled(&b, &q.unit("k"));
    let torus = q.circle_point(&unit).map_err(usage)?;
    let stem = q.extract_stem(&f, &torus).map_err(usage)?;
    let parity = q.stem_function(&stem).is_ok();
    let (r1, r2) = q.stem_system(&stem);
    let zero = PolyMap::zero(q.algebra(), 3);
    let system = r1.approx_eq(&zero) && r2.approx_eq(&zero);
    let harmonic = q.stem_is_harmonic(&stem);
    if !system {
        eprintln!(
            "the stem components do not satisfy the coupled system: input is not (1,3)-regular"
        );
    }
    let body = match format {
        Format::Csv => {
            let header = basis_header(q.algebra(), &["component", "exponent"]);
            let rows = [("F_empty", &stem.f_empty), ("F_1", &stem.f_one)]
                .into_iter()
                .flat_map(|(name, p)| {
                    p.terms()
                        .map(|(m, c)| {
                            let mut row = vec![name.to_string(), exponent(m)];
                            row.extend(components(c));
                            row
                        })
                        .collect::<Vec<_>>()
                });
            csv_string(&header, rows)
        }
        _ => pretty(&json!({
            "J": unit.to_json(),
            "backend": S::BACKEND,
            "f_empty": stem.f_empty.to_json(),
            "f_one": stem.f_one.to_json(),
            "f_empty_text": stem.f_empty.display_with(&SLICE),
            "f_one_text": stem.f_one.display_with(&SLICE),
            "parity": parity,
            "system": system,
            "harmonic": harmonic,
        })),
    };
    Ok(Report::new(body, parity && system))
}

pub struct CauchyArgs<'a> {
    pub input: Option<&'a Path>,
    pub count: usize,
    pub orders: &'a str,
    pub radius: f64,
    pub spread: f64,
    pub seed: u64,
    pub tol: f64,
}

pub fn cauchy_demo(args: &CauchyArgs<'_>, format: Format) -> CmdResult {
    not_text(format, "cauchy-demo")?;
    let q = Quat13::<f64>::new();
    let f = match args.input {
        Some(path) => load_quaternionic(path, &q)?,
        None => {
            let j = q.unit("j");
            q.tk((1, 1))
                .add(&q.tk((0, 2)).right_mul(&j))
                .add(&q.tk((2, 2)))
        }
    };
    let orders: Vec<usize> = args
        .orders
        .split(',')
        .map(|o| {
            o.trim()
                .parse()
                .map_err(|_| format!("bad quadrature order {o:?}"))
        })
        .collect::<Result<_, _>>()?;
    if !(0.0..1.0).contains(&args.spread) {
        return Err(format!("--spread must lie in [0, 1), got {}", args.spread));
    }
    let unit = q.unit("j");
    let center = Element::zero(q.algebra());
    let points = interior_points(
        &unit,
        &center,
        args.spread * args.radius,
        args.count,
        args.seed,
    );
    let eval = |x: &Element<f64>| f.evaluate_at(x);
    let rows = error_table(&eval, &unit, &center, args.radius, &points, &orders).map_err(usage)?;
    let top = orders.iter().copied().max().unwrap_or(0);
    let passed = rows
        .iter()
        .filter(|r| r.order == top)
        .all(|r| r.rel_error <= args.tol);
    if !passed {
        eprintln!(
            "reconstruction error exceeds {:e} at order {top}: input is not reproduced",
            args.tol
        );
    }
    let body = match format {
        Format::Csv => csv_string(
            &["order", "x", "abs_error", "rel_error"],
            rows.iter().map(|r| {
                vec![
                    r.order.to_string(),
                    r.x.to_string(),
                    format!("{:e}", r.abs_error),
                    format!("{:e}", r.rel_error),
                ]
            }),
        ),
        _ => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| json!({"order": r.order, "x": r.x.to_json(), "abs_error": r.abs_error, "rel_error": r.rel_error}))
                .collect();
            pretty(&json!({"tolerance": args.tol, "rows": rows}))
        }
    };
    Ok(Report::new(body, passed))
}

pub fn basis_verify<S: Scalar>(
    input: Option<&Path>,
    fan: Option<&str>,
    hat: bool,
    format: Format,
) -> CmdResult {
    not_text(format, "basis-verify")?;
    let (name, vectors): (String, Vec<Element<S>>) = match (input, fan) {
        (Some(path), _) => {
            let value = read_json(path)?;
            let alg_name = value
                .get("algebra")
                .and_then(Value::as_str)
                .ok_or_else(|| format!("{}: basis needs an \"algebra\" name", path.display()))?;
            let alg = algebra_by_name(alg_name).map_err(usage)?;
            let vectors = value
                .get("vectors")
                .and_then(Value::as_array)
                .ok_or_else(|| format!("{}: basis needs a \"vectors\" array", path.display()))?
                .iter()
                .map(|v| Element::from_json_in(&alg, v))
                .collect::<tregular::Result<Vec<_>>>()
                .map_err(|e| format!("{}: {e}", path.display()))?;
            let name = value
                .get("name")
                .and_then(Value::as_str)
                .unwrap_or(alg_name)
                .to_string();
            (name, vectors)
        }
        (None, Some(fan)) => {
            let fan = TFan::<S>::parse(fan).map_err(usage)?;
            (
                fan.basis().name().to_string(),
                fan.basis().vectors().to_vec(),
            )
        }
        (None, None) => return Err("basis-verify needs --input or --fan".into()),
    };
    let verdict = verify_basis(&vectors);
    let mut passed = verdict.is_ok();
    let mut report = json!({
        "name": name,
        "backend": S::BACKEND,
        "valid": verdict.is_ok(),
    });
    if let Err(v) = &verdict {
        report["violation"] = json!({
            "condition": v.condition.to_string(),
            "indices": v.indices,
            "detail": v.detail,
        });
    }
    if hat && verdict.is_ok() {
        let basis = HypercomplexBasis::new(name.clone(), vectors).map_err(usage)?;
        report["hat"] = match hat_extension(&basis) {
            Ok(ext) => json!({"extends": true, "basis": ext.to_json()}),
            Err(Error::NotExtendable { m, failed }) => {
                passed = false;
                json!({"extends": false, "m": m, "failed": failed.to_string()})
            }
            Err(e) => return Err(usage(e)),
        };
    }
    let body = match format {
        Format::Csv => csv_string(
            &["name", "valid", "violation", "hat"],
            [vec![
                name,
                verdict.is_ok().to_string(),
                verdict
                    .as_ref()
                    .err()
                    .map(|v| v.condition.to_string())
                    .unwrap_or_default(),
                match report.get("hat") {
                    Some(h) if h["extends"] == true => "extends".into(),
                    Some(h) => format!("fails: {}", h["failed"].as_str().unwrap_or_default()),
                    None => String::new(),
                },
            ]],
        ),
        _ => pretty(&report),
    };
    Ok(Report::new(body, passed))
}

pub fn cone<S: Scalar>(
    algebra: &str,
    element: Option<&str>,
    input: Option<&Path>,
    format: Format,
) -> CmdResult {
    not_text(format, "cone")?;
    let x: Element<S> = match (input, element) {
        (Some(path), _) => {
            let value = read_json(path)?;
            if value.get("algebra").is_some() {
                Element::from_json(&value)
            } else {
                Element::from_json_in(&algebra_by_name(algebra).map_err(usage)?, &value)
            }
            .map_err(|e| format!("{}: {e}", path.display()))?
        }
        (None, Some(text)) => {
            let alg = algebra_by_name(algebra).map_err(usage)?;
            Element::new(&alg, parse_list(text)?).map_err(usage)?
        }
        (None, None) => return Err("cone needs --element or --input".into()),
    };
    let in_cone = x.in_quadratic_cone();
    let inverse = x.cone_inverse().ok();
    let body = match format {
        Format::Csv => csv_string(
            &[
                "element",
                "trace",
                "norm",
                "in_cone",
                "in_sphere",
                "inverse",
            ],
            [vec![
                x.to_string(),
                x.trace().to_string(),
                x.norm_form().to_string(),
                in_cone.to_string(),
                x.in_sphere().to_string(),
                inverse
                    .as_ref()
                    .map(ToString::to_string)
                    .unwrap_or_default(),
            ]],
        ),
        _ => pretty(&json!({
            "element": x.to_json(),
            "trace": x.trace().to_json(),
            "norm": x.norm_form().to_json(),
            "in_cone": in_cone,
            "in_sphere": x.in_sphere(),
            "inverse": inverse.map(|i| i.to_json()),
        })),
    };
    Ok(Report::new(body, in_cone))
}

pub fn selftest(
    backend: Backend,
    only: Option<&str>,
    input: Option<&Path>,
    seed: Option<u64>,
    format: Format,
) -> CmdResult {
    let only = match only {
        Some(text) => text
            .split(',')
            .map(|s| match s.trim().parse::<u8>() {
                Ok(id @ 1..=12) => Ok(id),
                _ => Err(format!("criteria are numbered 1 to 12, got {s:?}")),
            })
            .collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };
    let extra_algebras = match input {
        Some(path) => {
            let spec = AlgebraSpec::from_json(&read_json(path)?)
                .map_err(|e| format!("{}: {e}", path.display()))?;
            vec![std::sync::Arc::new(spec)]
        }
        None => Vec::new(),
    };
    let mut config = SuiteConfig {
        backend,
        only,
        extra_algebras,
        ..SuiteConfig::default()
    };
    if let Some(seed) = seed {
        config.seed = seed;
    }
    let outcomes = run_suite(&config);
    let passed = outcomes.iter().all(|o| o.passed);
    let body = match format {
        Format::Text => {
            let mut s: String = outcomes.iter().map(|o| format!("{o}\n")).collect();
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            s += &format!(
                "selftest ({}): {} passed, {failed} failed\n",
                backend.name(),
                outcomes.len() - failed
            );
            s
        }
        Format::Csv => csv_string(
            &["id", "name", "status", "seconds", "tolerance", "detail"],
            outcomes.iter().map(|o| {
                vec![
                    o.id.to_string(),
                    o.name.to_string(),
                    if o.passed { "PASS" } else { "FAIL" }.to_string(),
                    format!("{:.3}", o.elapsed.as_secs_f64()),
                    o.tolerance.map(|t| format!("{t:e}")).unwrap_or_default(),
                    o.detail.clone(),
                ]
            }),
        ),
        Format::Json => {
            let rows: Vec<Value> = outcomes
                .iter()
                .map(|o| {
                    json!({
                        "id": o.id, "name": o.name, "passed": o.passed,
                        "seconds": o.elapsed.as_secs_f64(), "tolerance": o.tolerance, "detail": o.detail,
                    })
                })
                .collect();
            pretty(&json!({"backend": backend.name(), "passed": passed, "criteria": rows}))
        }
    };
    Ok(Report::new(body, passed))
}
