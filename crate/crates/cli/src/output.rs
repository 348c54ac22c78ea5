use bosonbell::{Direction, ProbabilityTable};
use serde_json::{json, Map, Value};

use bosonbell::Outcome;

/// `v` rounded to `digits` significant digits.
pub fn round_sig(v: f64, digits: u32) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return if v == 0.0 { 0.0 } else { v };
    }
    let s = format!("{:.*e}", digits.saturating_sub(1) as usize, v);
    let r: f64 = s.parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Locale-independent text for `v` at `digits` significant digits.
pub fn fmt_num(v: f64, digits: u32) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round_sig(v, digits);
    let a = r.abs();
    if r == 0.0 || (1e-6..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

pub fn num(v: f64, digits: u32) -> Value {
    let r = round_sig(v, digits);
    if r.is_finite() {
        json!(r)
    } else {
        Value::Null
    }
}

pub fn direction(d: &Direction, digits: u32) -> Value {
    let u = d.unit();
    json!({
        "theta": num(d.theta(), digits),
        "phi": num(d.phi(), digits),
        "unit": [num(u[0], digits), num(u[1], digits), num(u[2], digits)],
    })
}

/// `{"+1": {"+1": p, "0": p, "-1": p}, ...}` keyed Alice then Bob.
pub fn table(t: &ProbabilityTable, digits: u32) -> Value {
    let mut rows = Map::new();
    for a in Outcome::ALL {
        let mut row = Map::new();
        for b in Outcome::ALL {
            row.insert(b.label().into(), num(t.get(a, b), digits));
        }
        rows.insert(a.label().into(), Value::Object(row));
    }
    Value::Object(rows)
}

pub fn csv_line<I, S>(fields: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut line = fields
        .into_iter()
        .map(|f| f.as_ref().to_string())
        .collect::<Vec<_>>()
        .join(",");
    line.push('\n');
    line
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt_num(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(fmt_num(4.0 / 3.0, 12), "1.33333333333");
        assert_eq!(fmt_num(2.0, 12), "2");
        assert_eq!(fmt_num(-0.0, 12), "0");
        assert_eq!(fmt_num(267_379_679.144_385, 12), "267379679.144");
        assert_eq!(fmt_num(1.234_567_890_123_4e-9, 12), "1.23456789012e-9");
        assert_eq!(fmt_num(f64::NAN, 12), "nan");
    }

    #[test]
    fn rounding_in_json() {
        assert_eq!(num(1.0 / 3.0, 12).to_string(), "0.333333333333");
        assert_eq!(num(1e-300 * 1e-300, 12), json!(0.0));
        assert_eq!(num(f64::INFINITY, 12), Value::Null);
        assert_eq!(round_sig(0.123456, 3), 0.123);
    }

    #[test]
    fn csv_lines() {
        assert_eq!(csv_line(["x", "value_psi"]), "x,value_psi\n");
    }
}
