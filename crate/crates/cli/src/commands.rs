use pentalab::dynamics::{pentagram_corner_step, tbar_inverse, tbar_step, tk_inverse, tk_step};
use pentalab::geometry::{
    extract_xy, gk_step, plane_polygon_from_xy, plane_polygon_projected, polygon_from_xy, psi,
    standard_seed, CorrugatedPolygon, PlanePolygon,
};
use pentalab::lax::integrals as lax_integrals;
use pentalab::leapfrog::{crossratio_extend, f2_step, phi, seed_from_orbit, ProjPoint, SPairState};
use pentalab::random::RandomScalar;
use pentalab::render::{affine_seed, render_circle_pattern, render_polygon_layers};
use pentalab::states::{
    corner_to_xy, edgeweights_to_xy, pq_to_xy, xy_to_corner, xy_to_pq, AnyState, SizeGuard,
};
use pentalab::verify::{run_suite, Suite, VerifyConfig};
use pentalab::{Complex64, Error, Rational, Scalar, ScalarIo, XYState};
use serde_json::Value;

use crate::input::{emit, load, read_json, size_guard, CliError, CliResult, Input, EXIT_FAILED};
use crate::{
    Backend, ConvertArgs, IntegralsArgs, IterateArgs, LatticeArgs, RenderArgs, Target, VerifyArgs,
};

macro_rules! on_backend {
    ($backend:expr, $f:ident($($arg:expr),*)) => {
        match $backend {
            Backend::Rational => $f::<Rational>($($arg),*),
            Backend::Float => $f::<f64>($($arg),*),
            Backend::Complex => $f::<Complex64>($($arg),*),
        }
    };
}

fn csv_text(header: &[String], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::invalid(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::invalid(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::invalid(format!("csv: {e}")))
}

fn named<S: ScalarIo>(cols: &mut Vec<(String, S)>, name: &str, v: &[S]) {
    for (i, x) in v.iter().enumerate() {
        cols.push((format!("{name}{}", i + 1), x.clone()));
    }
}

/// Exact columns of a state, in output order.
fn columns<S: ScalarIo>(st: &AnyState<S>) -> Vec<(String, S)> {
    let mut cols = Vec::new();
    match st {
        AnyState::Xy(s) => {
            named(&mut cols, "x", &s.x);
            named(&mut cols, "y", &s.y);
        }
        AnyState::Pq(s) => {
            named(&mut cols, "p", &s.p);
            named(&mut cols, "q", &s.q);
            cols.push(("casimir".into(), s.casimir()));
        }
        AnyState::Corner(s) => {
            named(&mut cols, "X", &s.x);
            named(&mut cols, "Y", &s.y);
        }
        AnyState::Edge(s) => {
            for (name, v) in [("a", &s.a), ("b", &s.b), ("c", &s.c), ("d", &s.d)] {
                named(&mut cols, name, v);
            }
        }
    }
    cols
}

fn point_text<S: ScalarIo>(p: &ProjPoint<S>) -> String {
    match p.value() {
        Ok(z) if !p.is_infinite() => z.to_text(),
        _ => "inf".into(),
    }
}

fn decimal<S: Scalar>(v: &S) -> String {
    format!("{:.12e}", v.to_complex().re)
}

/// Orbit rows: a step column, then every coordinate. Decimal columns are
/// added on the exact backend only; the others already print decimals.
fn orbit_csv<S: ScalarIo + RandomScalar>(
    args: &IterateArgs,
    guard: SizeGuard,
) -> CliResult<String> {
    let input = load::<S>(&args.source)?;
    let decimals = args.decimal && S::EXACT;
    let mut header = vec!["step".to_string()];
    let mut rows = Vec::with_capacity(args.steps + 1);
    match input {
        Input::Spair(mut st) => {
            if args.inverse {
                return Err(CliError::invalid(
                    "the inverse leapfrog map is not available; swap S and S^- instead",
                ));
            }
            header.extend((1..=st.n()).map(|i| format!("S{i}")));
            for t in 0..=args.steps {
                if t > 0 {
                    st =
                        f2_step(&st).map_err(|e| CliError::from(e).context(format!("step {t}")))?;
                }
                let mut row = vec![t.to_string()];
                row.extend(st.s.iter().map(point_text));
                rows.push(row);
            }
        }
        Input::Polygon(_) => {
            return Err(CliError::invalid(
                "iterate expects a state; convert the polygon with `convert --to xy`",
            ))
        }
        Input::State(st) => {
            let mut st = match st {
                AnyState::Edge(w) => AnyState::Xy(edgeweights_to_xy(&w)?),
                other => other,
            };
            let cols = columns(&st);
            header.extend(cols.iter().map(|c| c.0.clone()));
            if decimals {
                header.extend(cols.iter().map(|c| format!("{}~", c.0)));
            }
            for t in 0..=args.steps {
                if t > 0 {
                    st = step(&st, args.inverse).map_err(|e| e.context(format!("step {t}")))?;
                }
                let cols = columns(&st);
                guard
                    .check(cols.iter().map(|c| &c.1))
                    .map_err(|e| CliError::from(e).context(format!("step {t}")))?;
                let mut row = vec![t.to_string()];
                row.extend(cols.iter().map(|c| c.1.to_text()));
                if decimals {
                    row.extend(cols.iter().map(|c| decimal(&c.1)));
                }
                rows.push(row);
            }
        }
    }
    csv_text(&header, &rows)
}

fn step<S: ScalarIo>(st: &AnyState<S>, inverse: bool) -> CliResult<AnyState<S>> {
    Ok(match (st, inverse) {
        (AnyState::Xy(s), false) => AnyState::Xy(tk_step(s)?),
        (AnyState::Xy(s), true) => AnyState::Xy(tk_inverse(s)?),
        (AnyState::Pq(s), false) => AnyState::Pq(tbar_step(s)?),
        (AnyState::Pq(s), true) => AnyState::Pq(tbar_inverse(s)?),
        (AnyState::Corner(s), false) => AnyState::Corner(pentagram_corner_step(s)?),
        (AnyState::Corner(_), true) => {
            return Err(CliError::invalid(
                "inverse map in corner coordinates: convert to xy first",
            ))
        }
        (AnyState::Edge(_), _) => unreachable!("edge weights are converted before iterating"),
    })
}

pub fn iterate(args: &IterateArgs) -> CliResult<u8> {
    let guard = size_guard()?;
    let text = on_backend!(args.source.backend, orbit_csv(args, guard))?;
    emit(args.out.as_deref(), &text)?;
    Ok(0)
}

/// Any input as `(x, y)` weights.
fn to_xy<S: ScalarIo>(input: Input<S>, x1: &str) -> CliResult<XYState<S>> {
    Ok(match input {
        Input::State(AnyState::Xy(s)) => s,
        Input::State(AnyState::Pq(s)) => {
            let x1 = S::parse_text(x1).map_err(|e| CliError::from(e).context("--x1"))?;
            pq_to_xy(&s, x1)?
        }
        Input::State(AnyState::Corner(s)) => corner_to_xy(&s)?,
        Input::State(AnyState::Edge(w)) => edgeweights_to_xy(&w)?,
        Input::Spair(st) => phi(&st)?,
        Input::Polygon(doc) => polygon_xy(&doc)?,
    })
}

/// Plane polygons are recognized by 3-dimensional lifts.
fn polygon_xy<S: ScalarIo>(doc: &Value) -> CliResult<XYState<S>> {
    let dim = doc
        .get("lifts")
        .and_then(Value::as_array)
        .and_then(|l| l.first())
        .and_then(Value::as_array)
        .map_or(0, Vec::len);
    let k = doc.get("k").and_then(Value::as_u64).unwrap_or(0) as usize;
    if dim == 3 && k != 3 {
        Ok(psi(&PlanePolygon::<S>::from_json(doc)?)?)
    } else {
        Ok(extract_xy(&CorrugatedPolygon::<S>::from_json(doc)?)?)
    }
}

fn integrals_csv<S: ScalarIo + RandomScalar>(args: &IntegralsArgs) -> CliResult<String> {
    let s = to_xy(load::<S>(&args.source)?, &args.x1)?;
    let decimals = args.decimal && S::EXACT;
    let mut header: Vec<String> = ["i", "j", "value"].map(String::from).to_vec();
    if decimals {
        header.push("value~".into());
    }
    let rows: Vec<Vec<String>> = lax_integrals(&s)
        .into_iter()
        .map(|(i, j, v)| {
            let mut row = vec![i.to_string(), j.to_string(), v.to_text()];
            if decimals {
                row.push(decimal(&v));
            }
            row
        })
        .collect();
    csv_text(&header, &rows)
}

pub fn integrals(args: &IntegralsArgs) -> CliResult<u8> {
    let text = on_backend!(args.source.backend, integrals_csv(args))?;
    emit(args.out.as_deref(), &text)?;
    Ok(0)
}

/// Configuration errors that make a suite inapplicable to `(k, n)`.
fn inapplicable(e: &Error) -> bool {
    matches!(
        e,
        Error::OutsideStableRange { .. }
            | Error::UnsupportedSpan(_)
            | Error::WrongSpan { .. }
            | Error::BadSpan { .. }
    )
}

pub fn verify(args: &VerifyArgs) -> CliResult<u8> {
    let suites = if args.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![Suite::parse(&args.suite)?]
    };
    let cfg = VerifyConfig {
        k: args.k,
        n: args.n,
        trials: args.trials,
        seed: args.seed,
        inject_fault: args.inject_fault,
    };
    let mut failed = false;
    for suite in &suites {
        match run_suite(*suite, &cfg) {
            Ok(report) => {
                print!("{report}");
                failed |= !report.all_passed();
            }
            Err(e) if suites.len() > 1 && inapplicable(&e) => {
                println!("suite {} skipped: {e}", suite.name())
            }
            Err(e) => return Err(CliError::from(e).context(format!("suite {}", suite.name()))),
        }
    }
    Ok(if failed { EXIT_FAILED } else { 0 })
}

pub fn render(args: &RenderArgs) -> CliResult<u8> {
    if args.source.backend == Backend::Rational {
        return Err(CliError::invalid(
            "rendering requires an embedding; use --backend float or --backend complex",
        ));
    }
    let svg = match load::<Complex64>(&args.source)? {
        Input::Spair(mut st) => {
            if args.site == 0 || args.site > st.n() {
                return Err(CliError::invalid(format!(
                    "--site must lie in 1..={}",
                    st.n()
                )));
            }
            for t in 1..=args.steps {
                st = f2_step(&st).map_err(|e| CliError::from(e).context(format!("step {t}")))?;
            }
            render_circle_pattern(&st, args.site - 1)?
        }
        input => {
            let first = match input {
                Input::Polygon(doc) => PlanePolygon::<Complex64>::from_json(&doc)?,
                other => {
                    let s = to_xy(other, "1")?;
                    if s.k() == 3 {
                        plane_polygon_from_xy(&s, &affine_seed())?
                    } else {
                        plane_polygon_projected(&s, [0, 1, 2])?
                    }
                }
            };
            let mut layers = vec![first];
            for t in 1..=args.steps {
                let next = gk_step(layers.last().expect("nonempty"))
                    .map_err(|e| CliError::from(e).context(format!("step {t}")))?;
                layers.push(next);
            }
            render_polygon_layers(&layers)?
        }
    };
    emit(args.out.as_deref(), &svg)?;
    Ok(0)
}

fn convert_doc<S: ScalarIo + RandomScalar>(args: &ConvertArgs) -> CliResult<Value> {
    let input = load::<S>(&args.source)?;
    if let (Target::Pq, Input::State(AnyState::Pq(s))) = (args.to, &input) {
        return Ok(AnyState::Pq(s.clone()).to_json());
    }
    let s = to_xy(input, &args.x1)?;
    Ok(match args.to {
        Target::Xy => AnyState::Xy(s).to_json(),
        Target::Pq => AnyState::Pq(xy_to_pq(&s)?).to_json(),
        Target::Corner => AnyState::Corner(xy_to_corner(&s)?).to_json(),
        Target::Polygon => polygon_from_xy(&s, &standard_seed(s.k()))?.to_json(),
        Target::Plane => plane_polygon_from_xy(&s, &affine_seed())?.to_json(),
    })
}

pub fn convert(args: &ConvertArgs) -> CliResult<u8> {
    let doc = on_backend!(args.source.backend, convert_doc(args))?;
    let text =
        serde_json::to_string_pretty(&doc).map_err(|e| CliError::invalid(format!("json: {e}")))?;
    emit(args.out.as_deref(), &(text + "\n"))?;
    Ok(0)
}

pub fn lattice(args: &LatticeArgs) -> CliResult<u8> {
    let doc = read_json(&args.state)?;
    let st = SPairState::<Complex64>::from_json(&doc)
        .map_err(|e| CliError::from(e).context(args.state.display()))?;
    let q = Complex64::parse_text(&args.q).map_err(|e| CliError::from(e).context("--q"))?;
    let z01 = Complex64::parse_text(&args.z01).map_err(|e| CliError::from(e).context("--z01"))?;
    let field = seed_from_orbit(&st, args.size)?;
    let field = crossratio_extend(&field, z01, q, 1e-6)?;
    let header: Vec<String> = ["m", "n", "re", "im"].map(String::from).to_vec();
    let rows: Vec<Vec<String>> = field
        .entries()
        .into_iter()
        .map(|(m, n, z)| {
            vec![
                m.to_string(),
                n.to_string(),
                format!("{:?}", z.re),
                format!("{:?}", z.im),
            ]
        })
        .collect();
    emit(args.out.as_deref(), &csv_text(&header, &rows)?)?;
    Ok(0)
}
