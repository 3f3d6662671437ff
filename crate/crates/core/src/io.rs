//! JSON problem and family descriptions.
//!
//! Matrices are arrays of rows; entries are numbers or `[re, im]` pairs.
//! Column-shaped values (`m × 1`, `c`) may also be given as flat arrays and
//! `1 × 1` values as a bare entry. Every error names the offending key.

use std::path::Path;

use num_complex::Complex;
use serde_json::{Map, Value};

use crate::continuity::{FamilyLaw, Perturbations, ProblemFamily, Schedule};
use crate::error::{Error, Result};
use crate::problem::{
    BoundaryOperator, BvProblem, Exponent, Interval, MatrixFunction, MatrixPolynomial,
    PointCondition, ProblemDims,
};
use crate::scalar::{CMatrix, CVector, Real};

const PROBLEM_KEYS: &[&str] = &["interval", "dims", "coefficients", "rhs", "boundary", "c"];
const FAMILY_KEYS: &[&str] = &["base", "perturbations", "schedule"];

pub fn read_problem<T: Real>(path: impl AsRef<Path>) -> Result<BvProblem<T>> {
    parse_problem(&read(path.as_ref())?)
}

pub fn read_family<T: Real>(path: impl AsRef<Path>) -> Result<ProblemFamily<T>> {
    parse_family(&read(path.as_ref())?)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::schema("<document>", e.to_string()))
}

pub fn parse_problem<T: Real>(text: &str) -> Result<BvProblem<T>> {
    problem_from_value(&parse_json(text)?, "")
}

pub fn parse_family<T: Real>(text: &str) -> Result<ProblemFamily<T>> {
    family_from_value(&parse_json(text)?)
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn object<'a>(v: &'a Value, key: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::schema(key, "expected an object"))
}

fn array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::schema(key, "expected an array"))
}

fn field<'a>(obj: &'a Map<String, Value>, prefix: &str, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::schema(join(prefix, key), "missing key"))
}

/// `Some` unless absent or `null`.
fn optional<'a>(obj: &'a Map<String, Value>, key: &str) -> Option<&'a Value> {
    obj.get(key).filter(|v| !v.is_null())
}

fn reject_unknown(obj: &Map<String, Value>, prefix: &str, allowed: &[&str]) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::schema(join(prefix, k), "unknown key")),
        None => Ok(()),
    }
}

fn real<T: Real>(v: &Value, key: &str) -> Result<T> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .map(T::lit)
        .ok_or_else(|| Error::schema(key, "expected a finite number"))
}

fn count(v: &Value, key: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::schema(key, "expected a non-negative integer"))
}

fn reals<T: Real>(v: &Value, key: &str) -> Result<Vec<T>> {
    array(v, key)?
        .iter()
        .enumerate()
        .map(|(i, x)| real(x, &format!("{key}[{i}]")))
        .collect()
}

fn is_entry(v: &Value) -> bool {
    v.is_number() || v.as_array().is_some_and(|a| a.len() == 2 && a.iter().all(Value::is_number))
}

fn entry<T: Real>(v: &Value, key: &str) -> Result<Complex<T>> {
    if v.is_number() {
        return Ok(Complex::new(real(v, key)?, T::zero()));
    }
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok(Complex::new(real(re, key)?, real(im, key)?)),
        _ => Err(Error::schema(key, "expected a number or an [re, im] pair")),
    }
}

fn matrix<T: Real>(v: &Value, key: &str, rows: usize, cols: usize) -> Result<CMatrix<T>> {
    let shape_err = || Error::schema(key, format!("expected a {rows}x{cols} matrix"));
    if rows == 1 && cols == 1 && is_entry(v) {
        return Ok(CMatrix::from_element(1, 1, entry(v, key)?));
    }
    let outer = array(v, key)?;
    if outer.len() != rows {
        return Err(shape_err());
    }
    let flat_column = cols == 1
        && outer
            .iter()
            .all(|x| x.as_array().is_none_or(|a| a.len() != 1));
    let mut out = CMatrix::<T>::zeros(rows, cols);
    for (i, row) in outer.iter().enumerate() {
        if flat_column {
            out[(i, 0)] = entry(row, &format!("{key}[{i}]"))?;
            continue;
        }
        let row = array(row, &format!("{key}[{i}]"))?;
        if row.len() != cols {
            return Err(shape_err());
        }
        for (j, x) in row.iter().enumerate() {
            out[(i, j)] = entry(x, &format!("{key}[{i}][{j}]"))?;
        }
    }
    Ok(out)
}

fn vector<T: Real>(v: &Value, key: &str, len: usize) -> Result<CVector<T>> {
    let values = array(v, key)?;
    if values.len() != len {
        return Err(Error::schema(key, format!("expected {len} entries, got {}", values.len())));
    }
    values
        .iter()
        .enumerate()
        .map(|(i, x)| entry(x, &format!("{key}[{i}]")))
        .collect::<Result<Vec<_>>>()
        .map(CVector::from_vec)
}

fn matrices<T: Real>(v: &Value, key: &str, rows: usize, cols: usize) -> Result<Vec<CMatrix<T>>> {
    array(v, key)?
        .iter()
        .enumerate()
        .map(|(i, x)| matrix(x, &format!("{key}[{i}]"), rows, cols))
        .collect()
}

fn schema_context(key: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Schema { .. } => e,
        other => Error::schema(key, other.to_string()),
    }
}

fn polynomial<T: Real>(v: &Value, key: &str, rows: usize, cols: usize) -> Result<MatrixPolynomial<T>> {
    let (coeffs, center) = match v {
        Value::Object(obj) => {
            reject_unknown(obj, key, &["coefficients", "center"])?;
            let center = match optional(obj, "center") {
                Some(c) => real(c, &join(key, "center"))?,
                None => T::zero(),
            };
            let ck = join(key, "coefficients");
            (matrices(field(obj, key, "coefficients")?, &ck, rows, cols)?, center)
        }
        _ => (matrices(v, key, rows, cols)?, T::zero()),
    };
    if coeffs.is_empty() {
        return Err(Error::schema(key, "polynomial needs at least one coefficient"));
    }
    MatrixPolynomial::new(rows, cols, center, coeffs).map_err(schema_context(key))
}

/// A `{"kind", "data"}` descriptor of shape `rows × cols`. A bare matrix is
/// read as a constant.
pub(crate) fn function<T: Real>(
    v: &Value,
    key: &str,
    rows: usize,
    cols: usize,
) -> Result<MatrixFunction<T>> {
    let obj = match v {
        Value::Object(obj) => obj,
        _ => return Ok(MatrixFunction::Constant(matrix(v, key, rows, cols)?)),
    };
    reject_unknown(obj, key, &["order", "kind", "data"])?;
    let kind_key = join(key, "kind");
    let kind = field(obj, key, "kind")?
        .as_str()
        .ok_or_else(|| Error::schema(&kind_key, "expected a string"))?;
    let data_key = join(key, "data");
    let data = field(obj, key, "data")?;
    match kind {
        "constant" => Ok(MatrixFunction::Constant(matrix(data, &data_key, rows, cols)?)),
        "polynomial" => Ok(MatrixFunction::Polynomial(polynomial(data, &data_key, rows, cols)?)),
        "sampled" => {
            let d = object(data, &data_key)?;
            reject_unknown(d, &data_key, &["t", "values"])?;
            let t = reals(field(d, &data_key, "t")?, &join(&data_key, "t"))?;
            let values = matrices(field(d, &data_key, "values")?, &join(&data_key, "values"), rows, cols)?;
            if t.len() != values.len() {
                return Err(Error::schema(&data_key, "`t` and `values` differ in length"));
            }
            MatrixFunction::sampled(t, values).map_err(schema_context(&data_key))
        }
        "piecewise" => {
            let d = object(data, &data_key)?;
            reject_unknown(d, &data_key, &["breaks", "pieces"])?;
            let breaks = reals(field(d, &data_key, "breaks")?, &join(&data_key, "breaks"))?;
            let pk = join(&data_key, "pieces");
            let pieces = array(field(d, &data_key, "pieces")?, &pk)?
                .iter()
                .enumerate()
                .map(|(i, p)| polynomial(p, &format!("{pk}[{i}]"), rows, cols))
                .collect::<Result<Vec<_>>>()?;
            MatrixFunction::piecewise(breaks, pieces).map_err(schema_context(&data_key))
        }
        other => Err(Error::schema(
            kind_key,
            format!("unknown kind `{other}`, expected constant, polynomial, sampled or piecewise"),
        )),
    }
}

fn exponent(v: &Value, key: &str) -> Result<Exponent> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(Error::schema(key, "expected 1, 2 or \"inf\"")),
    };
    text.parse()
        .map_err(|_| Error::schema(key, format!("expected 1, 2 or \"inf\", got {text}")))
}

fn dims(v: &Value) -> Result<ProblemDims> {
    let obj = object(v, "dims")?;
    reject_unknown(obj, "dims", &["m", "r", "n", "l", "p"])?;
    let get = |k: &str| count(field(obj, "dims", k)?, &join("dims", k));
    let p = match optional(obj, "p") {
        Some(p) => exponent(p, "dims.p")?,
        None => Exponent::Two,
    };
    let d = ProblemDims::new(get("m")?, get("r")?, get("n")?, get("l")?, p);
    for (k, x) in [("m", d.m), ("r", d.r), ("l", d.l)] {
        if x == 0 {
            return Err(Error::schema(join("dims", k), "must be positive"));
        }
    }
    Ok(d)
}

/// Coefficient descriptors keyed by `"order"`; missing orders are zero.
fn coefficients<T: Real>(
    v: &Value,
    key: &str,
    d: &ProblemDims,
) -> Result<Vec<Option<MatrixFunction<T>>>> {
    let mut out: Vec<Option<MatrixFunction<T>>> = vec![None; d.r];
    for (i, c) in array(v, key)?.iter().enumerate() {
        let ck = format!("{key}[{i}]");
        let obj = object(c, &ck)?;
        let ok = join(&ck, "order");
        let j = count(field(obj, &ck, "order")?, &ok)?;
        if j >= d.r {
            return Err(Error::schema(ok, format!("order {j} is not below r = {}", d.r)));
        }
        if out[j].is_some() {
            return Err(Error::schema(ok, format!("order {j} given twice")));
        }
        out[j] = Some(function(c, &ck, d.m, d.m)?);
    }
    Ok(out)
}

fn boundary<T: Real>(v: &Value, key: &str, d: &ProblemDims, interval: Interval<T>) -> Result<BoundaryOperator<T>> {
    let obj = object(v, key)?;
    reject_unknown(obj, key, &["alphas", "phi", "points"])?;
    let jets = d.jet_len();
    let ak = join(key, "alphas");
    let alphas = match optional(obj, "alphas") {
        Some(a) => {
            let alphas = matrices(a, &ak, d.l, d.m)?;
            if alphas.len() != jets {
                return Err(Error::schema(
                    ak,
                    format!("expected n + r = {jets} matrices, got {}", alphas.len()),
                ));
            }
            alphas
        }
        None if obj.contains_key("points") => vec![CMatrix::zeros(d.l, d.m); jets],
        None => return Err(Error::schema(ak, "missing key")),
    };
    let phi = match optional(obj, "phi") {
        Some(p) => Some(function(p, &join(key, "phi"), d.l, d.m)?),
        None => None,
    };
    let mut op = BoundaryOperator::new(alphas, phi);
    if let Some(points) = optional(obj, "points") {
        let pk = join(key, "points");
        let conditions = array(points, &pk)?
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let ck = format!("{pk}[{i}]");
                let o = object(p, &ck)?;
                reject_unknown(o, &ck, &["t", "order", "weight"])?;
                Ok(PointCondition {
                    point: real(field(o, &ck, "t")?, &join(&ck, "t"))?,
                    order: count(field(o, &ck, "order")?, &join(&ck, "order"))?,
                    weight: matrix(field(o, &ck, "weight")?, &join(&ck, "weight"), d.l, d.m)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let extra = BoundaryOperator::from_point_conditions(interval, jets, d.l, d.m, &conditions)
            .map_err(schema_context(&pk))?;
        op = op.plus(&extra).map_err(schema_context(&pk))?;
    }
    Ok(op)
}

fn interval<T: Real>(v: &Value, key: &str) -> Result<Interval<T>> {
    match array(v, key)?.as_slice() {
        [a, b] => Interval::new(real(a, &format!("{key}[0]"))?, real(b, &format!("{key}[1]"))?)
            .map_err(schema_context(key)),
        _ => Err(Error::schema(key, "expected [a, b]")),
    }
}

fn problem_from_value<T: Real>(v: &Value, prefix: &str) -> Result<BvProblem<T>> {
    let obj = object(v, if prefix.is_empty() { "<document>" } else { prefix })?;
    reject_unknown(obj, prefix, PROBLEM_KEYS)?;
    let k = |key: &str| join(prefix, key);
    let interval = interval(field(obj, prefix, "interval")?, &k("interval"))?;
    let d = dims(field(obj, prefix, "dims")?).map_err(|e| match e {
        Error::Schema { key, message } => Error::schema(join(prefix, &key), message),
        other => other,
    })?;
    let coefficients = coefficients(field(obj, prefix, "coefficients")?, &k("coefficients"), &d)?
        .into_iter()
        .map(|c| c.unwrap_or_else(|| MatrixFunction::zeros(d.m, d.m)))
        .collect();
    let rhs = function(field(obj, prefix, "rhs")?, &k("rhs"), d.m, 1)?;
    let boundary = boundary(field(obj, prefix, "boundary")?, &k("boundary"), &d, interval)?;
    let c = vector(field(obj, prefix, "c")?, &k("c"), d.l)?;
    Ok(BvProblem {
        dims: d,
        interval,
        coefficients,
        rhs,
        boundary,
        c,
    })
}

fn perturbations<T: Real>(v: &Value, d: &ProblemDims) -> Result<Perturbations<T>> {
    const KEY: &str = "perturbations";
    let obj = object(v, KEY)?;
    reject_unknown(obj, KEY, &["coefficients", "alphas", "phi", "rhs", "c"])?;
    let mut out = Perturbations::default();
    if let Some(c) = optional(obj, "coefficients") {
        out.coefficients = coefficients(c, &join(KEY, "coefficients"), d)?;
    }
    if let Some(a) = optional(obj, "alphas") {
        let ak = join(KEY, "alphas");
        let list = array(a, &ak)?;
        if list.len() > d.jet_len() {
            return Err(Error::schema(ak, format!("more than n + r = {} matrices", d.jet_len())));
        }
        out.alphas = list
            .iter()
            .enumerate()
            .map(|(i, x)| match x {
                Value::Null => Ok(None),
                x => matrix(x, &format!("{ak}[{i}]"), d.l, d.m).map(Some),
            })
            .collect::<Result<_>>()?;
    }
    if let Some(p) = optional(obj, "phi") {
        out.phi = Some(function(p, &join(KEY, "phi"), d.l, d.m)?);
    }
    if let Some(f) = optional(obj, "rhs") {
        out.rhs = Some(function(f, &join(KEY, "rhs"), d.m, 1)?);
    }
    if let Some(c) = optional(obj, "c") {
        out.c = Some(vector(c, &join(KEY, "c"), d.l)?);
    }
    Ok(out)
}

fn schedule<T: Real>(v: &Value) -> Result<Schedule<T>> {
    const KEY: &str = "schedule";
    let sched = match v {
        Value::Array(_) => Schedule::new(reals(v, KEY)?),
        Value::Object(obj) => {
            reject_unknown(obj, KEY, &["start", "factor", "count"])?;
            Schedule::geometric(
                real(field(obj, KEY, "start")?, "schedule.start")?,
                real(field(obj, KEY, "factor")?, "schedule.factor")?,
                count(field(obj, KEY, "count")?, "schedule.count")?,
            )
        }
        _ => return Err(Error::schema(KEY, "expected an array or {start, factor, count}")),
    };
    sched.map_err(schema_context(KEY))
}

fn family_from_value<T: Real>(v: &Value) -> Result<ProblemFamily<T>> {
    let obj = object(v, "<document>")?;
    reject_unknown(obj, "", FAMILY_KEYS)?;
    let base = problem_from_value(field(obj, "", "base")?, "base")?;
    let perturbations = match optional(obj, "perturbations") {
        Some(p) => perturbations(p, &base.dims)?,
        None => Perturbations::default(),
    };
    let schedule = schedule(field(obj, "", "schedule")?)?;
    Ok(ProblemFamily {
        base,
        law: FamilyLaw::Linear(perturbations),
        schedule,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SCALAR: &str = r#"{
        "interval": [0, 1],
        "dims": {"m": 1, "r": 1, "n": 2, "l": 1, "p": "inf"},
        "coefficients": [{"order": 0, "kind": "constant", "data": [[2]]}],
        "rhs": {"kind": "constant", "data": [0]},
        "boundary": {"alphas": [1, 3, [0, 0]], "phi": null},
        "c": [[1, -1]]
    }"#;

    fn schema_key(e: Error) -> String {
        match e {
            Error::Schema { key, .. } => key,
            other => panic!("expected a schema error, got {other}"),
        }
    }

    fn edit(f: impl FnOnce(&mut Value)) -> String {
        let mut v: Value = serde_json::from_str(SCALAR).unwrap();
        f(&mut v);
        v.to_string()
    }

    #[test]
    fn parses_scalar_problem() {
        let p: BvProblem<f64> = parse_problem(SCALAR).unwrap();
        p.ensure_valid().unwrap();
        assert_eq!(p.dims.p, Exponent::Infinity);
        assert_eq!(p.boundary.alphas.len(), 3);
        assert_eq!(p.boundary.alphas[1][0], Complex::new(3.0, 0.0));
        assert_eq!(p.c[0], Complex::new(1.0, -1.0));
        assert_eq!(p.coefficients[0].eval(0.3)[0], Complex::new(2.0, 0.0));
    }

    #[test]
    fn missing_keys_are_named() {
        let text = edit(|v| {
            v.as_object_mut().unwrap().remove("boundary");
        });
        assert_eq!(schema_key(parse_problem::<f64>(&text).unwrap_err()), "boundary");
        let text = edit(|v| {
            v["dims"].as_object_mut().unwrap().remove("l");
        });
        assert_eq!(schema_key(parse_problem::<f64>(&text).unwrap_err()), "dims.l");
    }

    #[test]
    fn bad_values_are_named() {
        let text = edit(|v| v["boundary"]["alphas"][1] = Value::from("x"));
        assert_eq!(schema_key(parse_problem::<f64>(&text).unwrap_err()), "boundary.alphas[1]");
        let text = edit(|v| v["coefficients"][0]["kind"] = Value::from("spline"));
        assert_eq!(schema_key(parse_problem::<f64>(&text).unwrap_err()), "coefficients[0].kind");
        let text = edit(|v| v["coefficients"][0]["order"] = Value::from(1));
        assert_eq!(schema_key(parse_problem::<f64>(&text).unwrap_err()), "coefficients[0].order");
        let text = edit(|v| v["c"] = serde_json::json!([1, 2]));
        assert_eq!(schema_key(parse_problem::<f64>(&text).unwrap_err()), "c");
        let text = edit(|v| v["extra"] = Value::from(1));
        assert_eq!(schema_key(parse_problem::<f64>(&text).unwrap_err()), "extra");
        let text = edit(|v| v["interval"] = serde_json::json!([1, 0]));
        assert_eq!(schema_key(parse_problem::<f64>(&text).unwrap_err()), "interval");
        assert_eq!(schema_key(parse_problem::<f64>("{").unwrap_err()), "<document>");
    }

    #[test]
    fn matrix_forms() {
        let m: CMatrix<f64> = matrix(&serde_json::json!([[1, [0, 2]], [3, 4]]), "x", 2, 2).unwrap();
        assert_eq!(m[(0, 1)], Complex::new(0.0, 2.0));
        assert_eq!(m[(1, 0)], Complex::new(3.0, 0.0));
        // flat columns: entries may be complex pairs
        let c: CMatrix<f64> = matrix(&serde_json::json!([[1, 2], 3]), "x", 2, 1).unwrap();
        assert_eq!(c[0], Complex::new(1.0, 2.0));
        let c: CMatrix<f64> = matrix(&serde_json::json!([[1], [3]]), "x", 2, 1).unwrap();
        assert_eq!(c[1], Complex::new(3.0, 0.0));
        let s: CMatrix<f64> = matrix(&serde_json::json!([1, 2]), "x", 1, 1).unwrap();
        assert_eq!(s[0], Complex::new(1.0, 2.0));
        assert!(matrix::<f64>(&serde_json::json!([[1, 2, 3]]), "x", 1, 2).is_err());
    }

    #[test]
    fn function_kinds() {
        let poly: MatrixFunction<f64> = function(
            &serde_json::json!({"kind": "polynomial", "data": {"coefficients": [1, 2], "center": 1}}),
            "f",
            1,
            1,
        )
        .unwrap();
        assert_eq!(poly.eval(3.0)[0].re, 5.0);
        let sampled: MatrixFunction<f64> = function(
            &serde_json::json!({"kind": "sampled", "data": {"t": [0, 1, 2, 3], "values": [0, 1, 4, 9]}}),
            "f",
            1,
            1,
        )
        .unwrap();
        assert!((sampled.eval(1.5)[0].re - 2.25).abs() < 1e-12);
        let pw: MatrixFunction<f64> = function(
            &serde_json::json!({"kind": "piecewise", "data": {"breaks": [0, 1, 2], "pieces": [[1], [[2]]]}}),
            "f",
            1,
            1,
        )
        .unwrap();
        assert_eq!(pw.eval(1.5)[0].re, 2.0);
        let err = function::<f64>(
            &serde_json::json!({"kind": "sampled", "data": {"t": [0, 1], "values": [0]}}),
            "f",
            1,
            1,
        )
        .unwrap_err();
        assert_eq!(schema_key(err), "f.data");
    }

    #[test]
    fn point_conditions_join_the_jets() {
        let text = edit(|v| {
            v["boundary"] = serde_json::json!({
                "points": [{"t": 0, "order": 0, "weight": 1}, {"t": 1, "order": 0, "weight": -1}]
            });
        });
        let p: BvProblem<f64> = parse_problem(&text).unwrap();
        p.ensure_valid().unwrap();
        // y(0) - y(1) on polynomials of degree < 3 is exact in the jet part
        assert_eq!(p.boundary.alphas[0][0].re, 0.0);
        assert_eq!(p.boundary.alphas[1][0].re, -1.0);
        assert_eq!(p.boundary.alphas[2][0].re, -0.5);
        assert!(p.boundary.phi.is_some());
    }

    #[test]
    fn family_document() {
        let text = format!(
            r#"{{"base": {SCALAR},
                "perturbations": {{"coefficients": [{{"order": 0, "kind": "constant", "data": 1}}],
                                   "alphas": [null, 1], "c": [1]}},
                "schedule": {{"start": 0.1, "factor": 0.5, "count": 4}}}}"#
        );
        let fam: ProblemFamily<f64> = parse_family(&text).unwrap();
        assert_eq!(fam.schedule.values(), &[0.1, 0.05, 0.025, 0.0125]);
        let p = fam.at(0.5).unwrap();
        assert_eq!(p.coefficients[0].eval(0.0)[0].re, 2.5);
        assert_eq!(p.boundary.alphas[1][0].re, 3.5);
        assert_eq!(p.c[0], Complex::new(1.5, -1.0));

        let bad = text.replace("\"count\": 4", "\"count\": \"4\"");
        assert_eq!(schema_key(parse_family::<f64>(&bad).unwrap_err()), "schedule.count");
        let bad = text.replace("[null, 1]", "[null, 1, 1, 1]");
        assert_eq!(schema_key(parse_family::<f64>(&bad).unwrap_err()), "perturbations.alphas");
        let bad = text.replace("\"dims\": {", "\"dims\": {\"q\": 1, ");
        assert_eq!(schema_key(parse_family::<f64>(&bad).unwrap_err()), "base.dims.q");
    }
}
