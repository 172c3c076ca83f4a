//! JSON formats for matrices, index sets, index maps, tensors, vectors and
//! Jordan specs.
//!
//! Output is built from `serde_json::Value`, whose maps keep keys sorted, so
//! serializing the same value twice is byte-identical. Exact fractions are
//! always written as `"p/q"`.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::index::{IndexMap, IndexSet, MapRule, MultiIndex};
use crate::jordan::JordanSpec;
use crate::linalg::{DenseMatrix, DenseVector};
use crate::scalar::{format_fraction, parse_fraction, GaussQ, Scalar, C64};
use crate::stretch::StretchedMatrix;
use crate::tensor::{Tensor, TensorVector};

/// Scalars with a JSON encoding and a `"scalar"` tag.
pub trait JsonScalar: Scalar {
    const TAG: &'static str;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value, field: &str) -> Result<Self>;
}

fn clean(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

impl JsonScalar for C64 {
    const TAG: &'static str = "cf64";

    fn to_json(&self) -> Value {
        json!({ "re": clean(self.re), "im": clean(self.im) })
    }

    fn from_json(v: &Value, field: &str) -> Result<Self> {
        let part = |key: &str| -> Result<f64> {
            match v.get(key) {
                None if key == "im" => Ok(0.0),
                None => Err(Error::parse(field, format!("missing `{key}`"))),
                Some(Value::Number(n)) => n
                    .as_f64()
                    .ok_or_else(|| Error::parse(field, "number out of range")),
                Some(Value::String(_)) => Err(Error::ScalarMismatch(format!(
                    "{field}: fraction string in a cf64 value"
                ))),
                Some(_) => Err(Error::parse(field, format!("`{key}` must be a number"))),
            }
        };
        if !v.is_object() {
            return Err(Error::parse(field, "scalar must be an object with `re` and `im`"));
        }
        Ok(C64::new(part("re")?, part("im")?))
    }
}

impl JsonScalar for GaussQ {
    const TAG: &'static str = "gq";

    fn to_json(&self) -> Value {
        json!({ "re": format_fraction(&self.re), "im": format_fraction(&self.im) })
    }

    fn from_json(v: &Value, field: &str) -> Result<Self> {
        let part = |key: &str| -> Result<num_rational::BigRational> {
            match v.get(key) {
                None if key == "im" => Ok(num_traits::Zero::zero()),
                None => Err(Error::parse(field, format!("missing `{key}`"))),
                Some(Value::String(s)) => parse_fraction(s).map_err(|e| match e {
                    Error::Parse { reason, .. } => Error::parse(format!("{field}.{key}"), reason),
                    other => other,
                }),
                Some(Value::Number(_)) => Err(Error::ScalarMismatch(format!(
                    "{field}: floating-point number in a gq value"
                ))),
                Some(_) => Err(Error::parse(field, format!("`{key}` must be a fraction string"))),
            }
        };
        if !v.is_object() {
            return Err(Error::parse(field, "scalar must be an object with `re` and `im`"));
        }
        Ok(GaussQ::new(part("re")?, part("im")?))
    }
}

/// Which field a document declares via its `"scalar"` tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarTag {
    Cf64,
    Gq,
}

impl ScalarTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ScalarTag::Cf64 => "cf64",
            ScalarTag::Gq => "gq",
        }
    }
}

pub fn scalar_tag(doc: &Value) -> Result<ScalarTag> {
    match doc.get("scalar").and_then(Value::as_str) {
        Some("cf64") => Ok(ScalarTag::Cf64),
        Some("gq") => Ok(ScalarTag::Gq),
        Some(other) => Err(Error::parse("scalar", format!("unknown scalar kind `{other}`"))),
        None => Err(Error::parse("scalar", "missing or not a string")),
    }
}

fn field<'a>(doc: &'a Value, key: &str) -> Result<&'a Value> {
    doc.get(key).ok_or_else(|| Error::parse(key, "missing"))
}

fn as_array<'a>(v: &'a Value, name: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::parse(name, "expected an array"))
}

fn as_usize(v: &Value, name: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::parse(name, "expected a non-negative integer"))
}

fn int_list(v: &Value, name: &str) -> Result<Vec<i64>> {
    as_array(v, name)?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| Error::parse(name, "expected integers")))
        .collect()
}

fn multi_index(v: &Value, name: &str) -> Result<MultiIndex> {
    MultiIndex::new(int_list(v, name)?).map_err(|_| Error::parse(name, "empty multi-index"))
}

// ---- matrices -------------------------------------------------------------

pub fn matrix_to_json<S: JsonScalar>(m: &DenseMatrix<S>) -> Value {
    let data: Vec<Value> = (0..m.rows())
        .map(|i| Value::Array(m.row(i).iter().map(JsonScalar::to_json).collect()))
        .collect();
    let mut obj = Map::new();
    obj.insert("rows".into(), json!(m.rows()));
    obj.insert("cols".into(), json!(m.cols()));
    obj.insert("scalar".into(), json!(S::TAG));
    obj.insert("data".into(), Value::Array(data));
    if let Some(l) = m.row_labels() {
        obj.insert("row_labels".into(), json!(l));
    }
    if let Some(l) = m.col_labels() {
        obj.insert("col_labels".into(), json!(l));
    }
    Value::Object(obj)
}

pub fn matrix_from_json<S: JsonScalar>(doc: &Value) -> Result<DenseMatrix<S>> {
    let tag = scalar_tag(doc)?;
    if tag.as_str() != S::TAG {
        return Err(Error::ScalarMismatch(format!("expected {}, found {}", S::TAG, tag.as_str())));
    }
    let rows = as_usize(field(doc, "rows")?, "rows")?;
    let cols = as_usize(field(doc, "cols")?, "cols")?;
    let data = as_array(field(doc, "data")?, "data")?;
    if data.len() != rows {
        return Err(Error::parse("data", format!("{} rows given, `rows` says {rows}", data.len())));
    }
    let mut flat = Vec::with_capacity(rows * cols);
    for (i, row) in data.iter().enumerate() {
        let row = as_array(row, "data")?;
        if row.len() != cols {
            return Err(Error::parse(format!("data[{i}]"), format!("expected {cols} entries")));
        }
        for (j, v) in row.iter().enumerate() {
            flat.push(S::from_json(v, &format!("data[{i}][{j}]"))?);
        }
    }
    let labels = |key: &str| doc.get(key).map(|v| int_list(v, key)).transpose();
    DenseMatrix::new(rows, cols, flat)?
        .with_labels(labels("row_labels")?, labels("col_labels")?)
        .map_err(|e| Error::parse("row_labels/col_labels", e.to_string()))
}

pub fn stretched_to_json<S: JsonScalar>(s: &StretchedMatrix<S>) -> Value {
    matrix_to_json(s.matrix())
}

pub fn dense_vector_to_json<S: JsonScalar>(v: &DenseVector<S>) -> Value {
    let mut obj = Map::new();
    obj.insert("n".into(), json!(v.len()));
    obj.insert("scalar".into(), json!(S::TAG));
    obj.insert("data".into(), Value::Array(v.data().iter().map(JsonScalar::to_json).collect()));
    if let Some(l) = v.labels() {
        obj.insert("labels".into(), json!(l));
    }
    Value::Object(obj)
}

// ---- index sets and maps --------------------------------------------------

pub fn index_set_to_json(s: &IndexSet) -> Value {
    match s.dims() {
        Some(dims) => json!({ "kind": "rectangular", "dims": dims }),
        None => json!({
            "kind": "explicit",
            "points": s.points().iter().map(|p| json!(p.coords())).collect::<Vec<_>>(),
        }),
    }
}

pub fn index_set_from_json(v: &Value) -> Result<IndexSet> {
    let kind = v.get("kind").and_then(Value::as_str);
    let wrap = |e: Error| Error::parse("index_set", e.to_string());
    match kind {
        Some("rectangular") => {
            let dims = as_array(field(v, "dims")?, "index_set.dims")?
                .iter()
                .map(|d| as_usize(d, "index_set.dims"))
                .collect::<Result<Vec<_>>>()?;
            IndexSet::rectangular(&dims).map_err(wrap)
        }
        Some("explicit") => {
            let points = as_array(field(v, "points")?, "index_set.points")?
                .iter()
                .map(|p| multi_index(p, "index_set.points"))
                .collect::<Result<Vec<_>>>()?;
            IndexSet::explicit(points).map_err(wrap)
        }
        Some(other) => Err(Error::parse("index_set.kind", format!("unknown kind `{other}`"))),
        None => Err(Error::parse("index_set.kind", "missing")),
    }
}

pub fn map_rule_to_json(rule: &MapRule) -> Value {
    match rule {
        MapRule::Linear(k) => json!({ "kind": "linear", "k": k.coords() }),
        MapRule::MixedRadix => json!({ "kind": "mixed-radix" }),
        MapRule::MaxCoord => json!({ "kind": "max" }),
        MapRule::Enumeration => json!({ "kind": "enumeration" }),
        MapRule::Table(pairs) => {
            let mut sorted: Vec<_> = pairs.iter().collect();
            sorted.sort_by(|a, b| a.0.canonical_cmp(b.0));
            json!({
                "kind": "table",
                "pairs": sorted
                    .into_iter()
                    .map(|(p, v)| json!({ "point": p.coords(), "value": v }))
                    .collect::<Vec<_>>(),
            })
        }
    }
}

/// A parsed map document: the rule, plus the index set if the document
/// names one under `"index_set"`.
#[derive(Debug, Clone)]
pub struct MapDoc {
    pub rule: MapRule,
    pub index_set: Option<IndexSet>,
}

impl MapDoc {
    /// Binds the rule to `domain`. A document that carries its own index set
    /// must agree with `domain`.
    pub fn bind(&self, domain: &IndexSet) -> Result<IndexMap> {
        if let Some(own) = &self.index_set {
            if own != domain {
                return Err(Error::DomainMismatch("map index_set differs from the tensor's".into()));
            }
        }
        IndexMap::new(domain.clone(), self.rule.clone())
    }

    /// Binds to the document's own index set.
    pub fn bind_own(&self) -> Result<IndexMap> {
        let domain = self
            .index_set
            .as_ref()
            .ok_or_else(|| Error::parse("index_set", "map has no index set and none was supplied"))?;
        IndexMap::new(domain.clone(), self.rule.clone())
    }
}

pub fn map_from_json(v: &Value) -> Result<MapDoc> {
    let rule = match v.get("kind").and_then(Value::as_str) {
        Some("linear") => MapRule::Linear(multi_index(field(v, "k")?, "k")?),
        Some("mixed-radix") => MapRule::MixedRadix,
        Some("max") => MapRule::MaxCoord,
        Some("enumeration") => MapRule::Enumeration,
        Some("table") => {
            let mut pairs = BTreeMap::new();
            for (n, item) in as_array(field(v, "pairs")?, "pairs")?.iter().enumerate() {
                let name = format!("pairs[{n}]");
                let point = multi_index(field(item, "point").map_err(|_| Error::parse(&name, "missing `point`"))?, &name)?;
                let value = item
                    .get("value")
                    .and_then(Value::as_i64)
                    .ok_or_else(|| Error::parse(&name, "`value` must be an integer"))?;
                if pairs.insert(point, value).is_some() {
                    return Err(Error::parse(name, "duplicate point"));
                }
            }
            MapRule::Table(pairs)
        }
        Some(other) => return Err(Error::parse("kind", format!("unknown map kind `{other}`"))),
        None => return Err(Error::parse("kind", "missing")),
    };
    let index_set = v.get("index_set").map(index_set_from_json).transpose()?;
    Ok(MapDoc { rule, index_set })
}

pub fn map_to_json(map: &IndexMap) -> Value {
    let mut v = map_rule_to_json(map.rule());
    v["index_set"] = index_set_to_json(map.domain());
    v
}

// ---- tensors and vectors --------------------------------------------------

pub fn tensor_to_json<S: JsonScalar>(t: &Tensor<S>) -> Value {
    let pts = t.domain().points();
    let mut entries = Vec::new();
    for r in 0..t.side() {
        for c in 0..t.side() {
            let v = t.get_pos(r, c);
            if !v.is_zero() {
                entries.push(json!({ "row": pts[r].coords(), "col": pts[c].coords(), "value": v.to_json() }));
            }
        }
    }
    json!({ "index_set": index_set_to_json(t.domain()), "scalar": S::TAG, "entries": entries })
}

pub fn tensor_from_json<S: JsonScalar>(doc: &Value) -> Result<Tensor<S>> {
    let domain = index_set_from_json(field(doc, "index_set")?)?;
    let mut t = Tensor::zeros(domain.clone());
    let mut seen = BTreeSet::new();
    for (n, e) in as_array(field(doc, "entries")?, "entries")?.iter().enumerate() {
        let name = format!("entries[{n}]");
        let row = multi_index(field(e, "row").map_err(|_| Error::parse(&name, "missing `row`"))?, &name)?;
        let col = multi_index(field(e, "col").map_err(|_| Error::parse(&name, "missing `col`"))?, &name)?;
        let value = S::from_json(field(e, "value").map_err(|_| Error::parse(&name, "missing `value`"))?, &name)?;
        let (r, c) = match (domain.position(&row), domain.position(&col)) {
            (Some(r), Some(c)) => (r, c),
            _ => return Err(Error::DomainMismatch(format!("{name}: ({row}, {col}) lies outside the index set"))),
        };
        if !seen.insert((r, c)) {
            return Err(Error::parse(name, "duplicate entry"));
        }
        t.set_pos(r, c, value);
    }
    Ok(t)
}

pub fn vector_to_json<S: JsonScalar>(x: &TensorVector<S>) -> Value {
    let entries: Vec<Value> = x
        .domain()
        .points()
        .iter()
        .zip(x.entries())
        .filter(|(_, v)| !v.is_zero())
        .map(|(p, v)| json!({ "point": p.coords(), "value": v.to_json() }))
        .collect();
    json!({ "index_set": index_set_to_json(x.domain()), "scalar": S::TAG, "entries": entries })
}

pub fn vector_from_json<S: JsonScalar>(doc: &Value) -> Result<TensorVector<S>> {
    let domain = index_set_from_json(field(doc, "index_set")?)?;
    let mut entries = vec![S::zero(); domain.len()];
    let mut seen = BTreeSet::new();
    for (n, e) in as_array(field(doc, "entries")?, "entries")?.iter().enumerate() {
        let name = format!("entries[{n}]");
        let point = multi_index(field(e, "point").map_err(|_| Error::parse(&name, "missing `point`"))?, &name)?;
        let value = S::from_json(field(e, "value").map_err(|_| Error::parse(&name, "missing `value`"))?, &name)?;
        let pos = domain
            .position(&point)
            .ok_or_else(|| Error::DomainMismatch(format!("{name}: {point} lies outside the index set")))?;
        if !seen.insert(pos) {
            return Err(Error::parse(name, "duplicate entry"));
        }
        entries[pos] = value;
    }
    TensorVector::from_entries(domain, entries)
}

/// A tensor whose field is decided at runtime by its `"scalar"` tag.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyTensor {
    Cf64(Tensor<C64>),
    Gq(Tensor<GaussQ>),
}

impl AnyTensor {
    pub fn from_json(doc: &Value) -> Result<Self> {
        match scalar_tag(doc)? {
            ScalarTag::Cf64 => tensor_from_json(doc).map(AnyTensor::Cf64),
            ScalarTag::Gq => tensor_from_json(doc).map(AnyTensor::Gq),
        }
    }

    pub fn domain(&self) -> &IndexSet {
        match self {
            AnyTensor::Cf64(t) => t.domain(),
            AnyTensor::Gq(t) => t.domain(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyTensor::Cf64(t) => tensor_to_json(t),
            AnyTensor::Gq(t) => tensor_to_json(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyVector {
    Cf64(TensorVector<C64>),
    Gq(TensorVector<GaussQ>),
}

impl AnyVector {
    pub fn from_json(doc: &Value) -> Result<Self> {
        match scalar_tag(doc)? {
            ScalarTag::Cf64 => vector_from_json(doc).map(AnyVector::Cf64),
            ScalarTag::Gq => vector_from_json(doc).map(AnyVector::Gq),
        }
    }

    pub fn domain(&self) -> &IndexSet {
        match self {
            AnyVector::Cf64(x) => x.domain(),
            AnyVector::Gq(x) => x.domain(),
        }
    }
}

// ---- Jordan specs ---------------------------------------------------------

pub fn jordan_spec_to_json(spec: &JordanSpec<GaussQ>) -> Value {
    json!({
        "blocks": spec
            .blocks()
            .iter()
            .map(|b| json!({ "size": b.size, "eigenvalue": b.eigenvalue.to_json() }))
            .collect::<Vec<_>>(),
    })
}

/// Jordan specs are exact; a floating-point eigenvalue is a scalar-variant error.
pub fn jordan_spec_from_json(v: &Value, name: &str) -> Result<JordanSpec<GaussQ>> {
    let blocks = as_array(field(v, "blocks").map_err(|_| Error::parse(name, "missing `blocks`"))?, name)?
        .iter()
        .enumerate()
        .map(|(n, b)| {
            let bname = format!("{name}.blocks[{n}]");
            let size = b
                .get("size")
                .and_then(Value::as_u64)
                .filter(|&s| s > 0)
                .ok_or_else(|| Error::parse(&bname, "`size` must be a positive integer"))?;
            let ev = GaussQ::from_json(
                b.get("eigenvalue").ok_or_else(|| Error::parse(&bname, "missing `eigenvalue`"))?,
                &bname,
            )?;
            Ok((size as usize, ev))
        })
        .collect::<Result<Vec<_>>>()?;
    JordanSpec::new(blocks)
}

/// Accepts either a list of specs or a single spec.
pub fn jordan_specs_from_json(v: &Value) -> Result<Vec<JordanSpec<GaussQ>>> {
    match v {
        Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(n, s)| jordan_spec_from_json(s, &format!("[{n}]")))
            .collect(),
        Value::Object(_) => Ok(vec![jordan_spec_from_json(v, "spec")?]),
        _ => Err(Error::parse("spec", "expected a list of Jordan specs")),
    }
}

/// Deterministic pretty serialization with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::mi;
    use crate::scalar::{gq, gqi};
    use proptest::prelude::*;

    #[test]
    fn matrix_round_trip_with_labels() {
        let m = DenseMatrix::from_rows(vec![vec![gq(1, 2, 0, 1), gqi(-3)], vec![gqi(0), gq(0, 1, 5, 7)]])
            .unwrap()
            .with_labels(Some(vec![-1, 4]), Some(vec![0, 2]))
            .unwrap();
        let v = matrix_to_json(&m);
        assert_eq!(v["data"][0][0], json!({ "re": "1/2", "im": "0/1" }));
        assert_eq!(matrix_from_json::<GaussQ>(&v).unwrap(), m);
        assert!(matches!(matrix_from_json::<C64>(&v), Err(Error::ScalarMismatch(_))));
    }

    #[test]
    fn scalar_variants_do_not_mix() {
        assert!(matches!(
            GaussQ::from_json(&json!({ "re": 1.5, "im": 0 }), "x"),
            Err(Error::ScalarMismatch(_))
        ));
        assert!(matches!(
            C64::from_json(&json!({ "re": "1/2" }), "x"),
            Err(Error::ScalarMismatch(_))
        ));
        assert_eq!(GaussQ::from_json(&json!({ "re": "4/6" }), "x").unwrap(), gq(2, 3, 0, 1));
        let e = GaussQ::from_json(&json!({ "re": "1/0" }), "data[0][1]").unwrap_err();
        assert!(e.to_string().contains("data[0][1].re"), "{e}");
    }

    #[test]
    fn maps_parse() {
        let d = map_from_json(&json!({ "kind": "linear", "k": [1, -1] })).unwrap();
        let f = d.bind(&IndexSet::rectangular(&[2, 2]).unwrap()).unwrap();
        assert_eq!(f.evaluate(&mi(&[0, 1])).unwrap(), -1);
        let t = map_from_json(&json!({
            "kind": "table",
            "pairs": [{ "point": [0], "value": 3 }, { "point": [1], "value": -2 }],
            "index_set": { "kind": "rectangular", "dims": [2] },
        }))
        .unwrap();
        let g = t.bind_own().unwrap();
        assert_eq!(g.values(), &[3, -2]);
        assert_eq!(map_from_json(&map_to_json(&g)).unwrap().bind_own().unwrap(), g);
        assert!(matches!(
            t.bind(&IndexSet::rectangular(&[3]).unwrap()),
            Err(Error::DomainMismatch(_))
        ));
        assert!(map_from_json(&json!({ "kind": "spiral" })).is_err());
    }

    #[test]
    fn tensor_entries_outside_domain() {
        let doc = json!({
            "index_set": { "kind": "rectangular", "dims": [2] },
            "scalar": "gq",
            "entries": [{ "row": [0], "col": [5], "value": { "re": "1/1", "im": "0/1" } }],
        });
        assert!(matches!(AnyTensor::from_json(&doc), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn jordan_specs() {
        let v = json!([{ "blocks": [{ "size": 2, "eigenvalue": { "re": "2", "im": "0" } }] }]);
        let specs = jordan_specs_from_json(&v).unwrap();
        assert_eq!(specs[0].dimension(), 2);
        assert_eq!(
            jordan_spec_to_json(&specs[0]),
            json!({ "blocks": [{ "size": 2, "eigenvalue": { "re": "2/1", "im": "0/1" } }] })
        );
        let float = json!([{ "blocks": [{ "size": 2, "eigenvalue": { "re": 2.0, "im": 0.0 } }] }]);
        assert!(matches!(jordan_specs_from_json(&float), Err(Error::ScalarMismatch(_))));
    }

    fn arb_gq() -> impl Strategy<Value = GaussQ> {
        (-50i64..50, 1i64..20, -50i64..50, 1i64..20).prop_map(|(a, b, c, d)| gq(a, b, c, d))
    }

    proptest! {
        #[test]
        fn tensor_json_round_trips(entries in proptest::collection::vec(arb_gq(), 36)) {
            let d = IndexSet::explicit(vec![mi(&[0, 0]), mi(&[-1, 3]), mi(&[2, 2]), mi(&[5, -4]), mi(&[1, 0]), mi(&[0, 7])]).unwrap();
            let t = Tensor::from_entries(d, entries).unwrap();
            let v = tensor_to_json(&t);
            let back: Tensor<GaussQ> = tensor_from_json(&v).unwrap();
            prop_assert_eq!(&back, &t);
            prop_assert_eq!(render(&tensor_to_json(&back)), render(&v));
        }

        #[test]
        fn cf64_values_round_trip(re in -1e6f64..1e6, im in -1e6f64..1e6) {
            let z = C64::new(re, im);
            prop_assert_eq!(C64::from_json(&z.to_json(), "x").unwrap(), z);
        }
    }
}
