//! Exact JSON encodings: rationals as `"p/q"` strings, dual vectors as arrays of
//! rationals in the lattice basis, mode indices 1-based.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::affine_sl2::HomLattice;
use crate::error::{Error, Result};
use crate::fock::{FockMonomial, FockSpace, FockVector, IntegralBasis};
use crate::lattice::{CosetLabel, DualVector, EvenLattice};
use crate::scalars::{fmt_rational, parse_rational, Cyclotomic, CyclotomicField, Rational};
use crate::series::TruncSeries;
use crate::vertexops::{CheckReport, Discrepancy, ScanReport, SymmetryReport};

fn bad(what: &str, v: &Value) -> Error {
    Error::Parse(format!("expected {what}, got {v}"))
}

pub fn rational_to_json(q: &Rational) -> Value {
    Value::String(fmt_rational(q))
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().expect("checked").into())),
        _ => Err(bad("a rational \"p/q\"", v)),
    }
}

pub fn dual_vector_to_json(v: &DualVector) -> Value {
    Value::Array(v.coords().iter().map(rational_to_json).collect())
}

pub fn dual_vector_from_json(v: &Value) -> Result<DualVector> {
    let arr = v.as_array().ok_or_else(|| bad("an array of rationals", v))?;
    Ok(DualVector(arr.iter().map(rational_from_json).collect::<Result<_>>()?))
}

pub fn cyclotomic_to_json(c: &Cyclotomic) -> Value {
    json!({
        "N": c.order(),
        "coords": c.coords().iter().map(rational_to_json).collect::<Vec<_>>(),
    })
}

/// Reads `{"N", "coords"}` into the field of order `order`; `N` must divide `order`.
pub fn cyclotomic_from_json(v: &Value, field: &Arc<CyclotomicField>) -> Result<Cyclotomic> {
    if let Ok(q) = rational_from_json(v) {
        return Ok(Cyclotomic::from_rational(field, q));
    }
    let n = v.get("N").and_then(Value::as_u64).ok_or_else(|| bad("a cyclotomic {\"N\", \"coords\"}", v))?;
    let coords = v
        .get("coords")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("a coords array", v))?;
    if n == 0 || !field.order().is_multiple_of(n) {
        return Err(Error::IncompatibleOrder {
            value: v.to_string(),
            order: field.order(),
            required: num_integer::lcm(n.max(1), field.order()).to_string(),
        });
    }
    let step = (field.order() / n) as i64;
    let mut out = Cyclotomic::zero(field);
    for (k, c) in coords.iter().enumerate() {
        let q = rational_from_json(c)?;
        if !q.is_zero() {
            out += &Cyclotomic::zeta_pow(field, step * k as i64).scale(&q);
        }
    }
    Ok(out)
}

pub fn coset_to_json(c: &CosetLabel) -> Value {
    dual_vector_to_json(c.rep())
}

pub fn monomial_to_json(m: &FockMonomial) -> Value {
    json!({
        "modes": m.modes().iter().map(|&(i, n)| json!([i + 1, n])).collect::<Vec<_>>(),
        "charge": dual_vector_to_json(m.charge()),
    })
}

pub fn fock_vector_to_json(v: &FockVector) -> Value {
    let terms: Vec<Value> = v
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut t = monomial_to_json(m);
            t["coeff"] = cyclotomic_to_json(c);
            t
        })
        .collect();
    json!({ "coset": coset_to_json(v.coset()), "terms": terms })
}

pub fn fock_vector_from_json(fs: &FockSpace, v: &Value) -> Result<FockVector> {
    let l = fs.lattice();
    let coset = match v.get("coset") {
        Some(c) => Some(l.coset(&dual_vector_from_json(c)?)?),
        None => None,
    };
    let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("a terms array", v))?;
    let mut parsed = Vec::with_capacity(terms.len());
    for t in terms {
        let charge = dual_vector_from_json(t.get("charge").ok_or_else(|| bad("a charge", t))?)?;
        let mut modes = Vec::new();
        for m in t.get("modes").and_then(Value::as_array).map(|a| a.as_slice()).unwrap_or(&[]) {
            let pair = m.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("a mode [index, n]", m))?;
            let i = pair[0].as_u64().filter(|&i| i >= 1).ok_or_else(|| bad("a 1-based mode index", &pair[0]))?;
            let n = pair[1]
                .as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .filter(|&n| n >= 1)
                .ok_or_else(|| bad("a positive mode number", &pair[1]))?;
            modes.push((i as usize - 1, n));
        }
        let coeff = match t.get("coeff") {
            Some(c) => cyclotomic_from_json(c, l.field())?,
            None => fs.one(),
        };
        parsed.push((FockMonomial::new(modes, charge), coeff));
    }
    fs.from_terms(coset, parsed)
}

pub fn series_to_json(s: &TruncSeries) -> Value {
    let coeffs: Map<String, Value> = s.iter().map(|(k, v)| (k.to_string(), fock_vector_to_json(v))).collect();
    json!({
        "offset": rational_to_json(s.offset()),
        "exp_min": s.exp_min(),
        "exp_max": s.exp_max(),
        "coset": coset_to_json(s.coset()),
        "coeffs": coeffs,
    })
}

pub fn series_from_json(fs: &FockSpace, v: &Value) -> Result<TruncSeries> {
    let offset = rational_from_json(v.get("offset").ok_or_else(|| bad("an offset", v))?)?;
    let coset = fs
        .lattice()
        .coset(&dual_vector_from_json(v.get("coset").ok_or_else(|| bad("a coset", v))?)?)?;
    let obj = v.get("coeffs").and_then(Value::as_object).ok_or_else(|| bad("a coeffs object", v))?;
    let mut coeffs = BTreeMap::new();
    for (k, c) in obj {
        let k: i64 = k.parse().map_err(|_| Error::Parse(format!("bad shift {k}")))?;
        coeffs.insert(k, fock_vector_from_json(fs, c)?);
    }
    let lo = coeffs.keys().next().copied().unwrap_or(0);
    let hi = coeffs.keys().last().copied().unwrap_or(0);
    let exp_min = v.get("exp_min").and_then(Value::as_i64).unwrap_or(lo);
    let exp_max = v.get("exp_max").and_then(Value::as_i64).unwrap_or(hi);
    if coeffs.keys().any(|&k| k < exp_min || k > exp_max) {
        return Err(Error::Parse("coefficient outside the stated window".into()));
    }
    Ok(TruncSeries::from_parts(offset, coeffs, exp_min, exp_max, coset))
}

/// Accepts `{"name": ..., "gram": [[...]]}` or a bare Gram matrix.
pub fn lattice_from_json(v: &Value) -> Result<Arc<EvenLattice>> {
    let (gram, name) = match v {
        Value::Array(_) => (v, None),
        Value::Object(o) => (
            o.get("gram").ok_or_else(|| bad("a gram field", v))?,
            o.get("name").and_then(Value::as_str).map(str::to_string),
        ),
        _ => return Err(bad("a lattice object", v)),
    };
    let rows = gram.as_array().ok_or_else(|| bad("a Gram matrix", gram))?;
    let mut m = Vec::with_capacity(rows.len());
    for r in rows {
        let r = r.as_array().ok_or_else(|| bad("a Gram row", r))?;
        m.push(
            r.iter()
                .map(|x| match x {
                    Value::Number(n) if n.is_i64() => Ok(BigInt::from(n.as_i64().expect("checked"))),
                    Value::String(s) => s.trim().parse::<BigInt>().map_err(|_| bad("an integer", x)),
                    _ => Err(bad("an integer", x)),
                })
                .collect::<Result<Vec<_>>>()?,
        );
    }
    EvenLattice::new(m, name)
}

pub fn lattice_info_to_json(l: &EvenLattice) -> Value {
    let cosets: Vec<Value> = l.cosets().iter().map(coset_to_json).collect();
    json!({
        "name": l.name(),
        "rank": l.rank(),
        "gram": l.gram().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "determinant": l.determinant().to_string(),
        "positive_definite": l.is_positive_definite(),
        "divisors": l.divisors().iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "dual_gram": l.dual_gram().iter().map(|r| r.iter().map(rational_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "field_order": l.field().order(),
        "deltas": l.deltas().iter().map(dual_vector_to_json).collect::<Vec<_>>(),
        "cosets": cosets,
    })
}

pub fn basis_to_json(b: &IntegralBasis) -> Value {
    let items: Vec<Value> = b
        .labels
        .iter()
        .zip(&b.vectors)
        .map(|(lab, v)| {
            json!({
                "alpha": dual_vector_to_json(&lab.alpha),
                "charge": dual_vector_to_json(&lab.charge),
                "partitions": lab.parts.iter().map(|p| p.parts().to_vec()).collect::<Vec<_>>(),
                "weight": rational_to_json(&lab.weight),
                "vector": fock_vector_to_json(v),
            })
        })
        .collect();
    json!({
        "kind": format!("{:?}", b.kind).to_lowercase(),
        "rep": dual_vector_to_json(&b.rep),
        "cutoff": rational_to_json(&b.cutoff),
        "size": b.len(),
        "basis": items,
    })
}

pub fn check_report_to_json(r: &CheckReport) -> Value {
    let witness = r.witness.as_ref().map(|w| {
        let (lhs, rhs) = match &w.discrepancy {
            Discrepancy::Vectors { lhs, rhs } => (fock_vector_to_json(lhs), fock_vector_to_json(rhs)),
            Discrepancy::Scalars { lhs, rhs } => (cyclotomic_to_json(lhs), cyclotomic_to_json(rhs)),
        };
        json!({ "location": w.location, "lhs": lhs, "rhs": rhs })
    });
    json!({ "check": r.name, "pass": r.pass, "checked": r.checked, "witness": witness })
}

pub fn symmetry_report_to_json(r: &SymmetryReport) -> Value {
    json!({
        "pass": r.pass(),
        "parts": r.parts().iter().map(|p| check_report_to_json(p)).collect::<Vec<_>>(),
    })
}

pub fn scan_report_to_json(r: &ScanReport) -> Value {
    let witnesses: Vec<Value> = r
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "w1": w.i,
                "w2": w.j,
                "exponent": rational_to_json(&w.exponent),
                "target_index": w.target_index,
                "coordinate": cyclotomic_to_json(&w.coordinate),
            })
        })
        .collect();
    json!({
        "pass": r.pass,
        "beta": coset_to_json(&r.beta),
        "gamma": coset_to_json(&r.gamma),
        "target": coset_to_json(&r.target),
        "scale": cyclotomic_to_json(&r.scale),
        "cutoff": rational_to_json(&r.cutoff),
        "out_cutoff": rational_to_json(&r.out_cutoff),
        "pairs": r.pairs,
        "coefficients": r.coefficients,
        "coordinates": r.coordinates,
        "witnesses": witnesses,
    })
}

pub fn hom_lattice_to_json(h: &HomLattice) -> Value {
    let basis: Vec<Vec<String>> = h
        .basis
        .iter()
        .map(|m| m.iter().flatten().map(|x| x.to_string()).collect())
        .collect();
    json!({
        "level": h.level,
        "weights": h.weights,
        "rank": h.rank,
        "basis": basis,
        "basis_shape": [h.weights[2] + 1, (h.weights[0] + 1) * (h.weights[1] + 1)],
        "quotient_rank": h.quotient_rank,
        "quotient_elementary_divisors": h.quotient_torsion().iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "wz_elementary_divisors": h.wz_divisors.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;
    use crate::series::Window;
    use crate::vertexops::Intertwiner;

    #[test]
    fn round_trips() {
        let fs = FockSpace::new(EvenLattice::from_i64(&[vec![2, -1], vec![-1, 2]]).unwrap());
        let l = fs.lattice().clone();
        let g = DualVector(vec![rat(1, 3), rat(2, 3)]);
        let v = fs
            .monomial(&[(0, 1), (1, 2)], &g)
            .unwrap()
            .scale(&l.root(&rat(1, 12)).unwrap())
            .plus(&fs.iota(&(&g + &DualVector::from_ints(&[1, 0]))).unwrap());
        let j = fock_vector_to_json(&v);
        assert_eq!(fock_vector_from_json(&fs, &j).unwrap(), v);
        let y = Intertwiner::new(&fs, &g).unwrap();
        let s = y.series(&fs.iota(&g).unwrap(), &v, Window::new(-2, 2).unwrap()).unwrap();
        let back = series_from_json(&fs, &series_to_json(&s)).unwrap();
        assert_eq!(back, s);
        let c = l.root(&rat(5, 12)).unwrap();
        assert_eq!(cyclotomic_from_json(&cyclotomic_to_json(&c), l.field()).unwrap(), c);
    }

    #[test]
    fn embeds_smaller_orders() {
        let f12 = CyclotomicField::get(12);
        let f4 = CyclotomicField::get(4);
        let i4 = Cyclotomic::root_of_unity(&f4, &rat(1, 4)).unwrap();
        let i12 = Cyclotomic::root_of_unity(&f12, &rat(1, 4)).unwrap();
        assert_eq!(cyclotomic_from_json(&cyclotomic_to_json(&i4), &f12).unwrap(), i12);
        assert!(cyclotomic_from_json(&json!({"N": 5, "coords": ["1"]}), &f12).is_err());
    }

    #[test]
    fn lattice_files() {
        let l = lattice_from_json(&json!({"name": "A1", "gram": [[2]]})).unwrap();
        assert_eq!(l.name(), Some("A1"));
        assert!(lattice_from_json(&json!([[1]])).is_err());
        assert!(lattice_from_json(&json!("x")).is_err());
    }
}
