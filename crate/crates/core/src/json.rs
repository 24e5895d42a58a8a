//! Canonical JSON output: sorted keys, compact layout, and every float written
//! with 17 significant digits so reruns are byte-identical.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::error::Result;

#[derive(Default)]
struct FixedDigits;

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Serializes `value` to canonical JSON text.
pub fn to_canonical_string<T: Serialize>(value: &T) -> Result<String> {
    // Round-trip through Value so object keys come out sorted.
    let value = serde_json::to_value(value)?;
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedDigits);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_have_seventeen_digits_and_keys_sort() {
        let s = to_canonical_string(&json!({"b": 0.1, "a": 1, "c": [2.5]})).unwrap();
        assert_eq!(
            s,
            "{\"a\":1,\"b\":1.0000000000000001e-1,\"c\":[2.5000000000000000e0]}\n"
        );
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["b"].as_f64().unwrap(), 0.1);
    }
}
