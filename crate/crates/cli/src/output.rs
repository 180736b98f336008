use serde::Serialize;
use serde_json::Value;

/// Significant digits kept in emitted JSON numbers.
pub const JSON_DIGITS: usize = 12;

/// Rounds every non-integer number in `value` to `digits` significant digits.
pub fn round_significant(value: &mut Value, digits: usize) {
    match value {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            if let Some(x) = n.as_f64() {
                let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x);
                if let Some(r) = serde_json::Number::from_f64(rounded) {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|v| round_significant(v, digits)),
        Value::Object(map) => map.values_mut().for_each(|v| round_significant(v, digits)),
        _ => {}
    }
}

/// JSON value of `data`, rounded unless `exact`.
pub fn json_value<T: Serialize>(data: &T, exact: bool) -> serde_json::Result<Value> {
    let mut v = serde_json::to_value(data)?;
    if !exact {
        round_significant(&mut v, JSON_DIGITS);
    }
    Ok(v)
}

pub fn to_json_string<T: Serialize>(data: &T, exact: bool) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(&json_value(data, exact)?)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rounds_floats_only() {
        let mut v = json!({"a": 0.123456789012345, "b": [1, 2.0000000000004, -3e-20], "c": 7});
        round_significant(&mut v, 12);
        assert_eq!(v, json!({"a": 0.123456789012, "b": [1, 2.0, -3e-20], "c": 7}));
    }
}
