//! Deterministic number and document formatting: every float prints with
//! exactly 12 significant digits, so identical configs give byte-identical
//! output.

use serde::Serialize;
use serde_json::Value;
use std::io;

/// Formats with 12 significant digits: fixed notation for decimal
/// exponents in [-5, 12), scientific outside.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific form");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{mantissa}e{exp}")
    }
}

struct TwelveDigitFormatter;

impl serde_json::ser::Formatter for TwelveDigitFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        writer.write_all(fmt_f64(value).as_bytes())
    }
}

/// Serializes a JSON document with 12-significant-digit floats and sorted
/// object keys, followed by a newline.
pub fn json_to_string(value: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, TwelveDigitFormatter);
    value.serialize(&mut ser).expect("serializing Value");
    let mut text = String::from_utf8(out).expect("utf8 json");
    text.push('\n');
    text
}

/// Integer-or-string for counts that may exceed what a JSON number holds.
pub fn count_value(n: u128) -> Value {
    match u64::try_from(n) {
        Ok(v) => Value::from(v),
        Err(_) => Value::from(n.to_string()),
    }
}
