//! Output plumbing: 12-significant-digit numeric formatting, JSON float
//! rounding, and atomic file writes (temp file + rename).

use std::fs;
use std::io::Write;
use std::path::Path;

/// Round to 12 significant digits. Goes through the decimal text so the
/// result is the double nearest a true 12-digit decimal; its shortest
/// round-trip representation then never exceeds those 12 digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("parses back")
}

/// Decimal text of the 12-significant-digit value, trailing zeros trimmed;
/// e-notation only for extreme magnitudes.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp_form = format!("{x:.11e}");
    let (mantissa, exponent) = exp_form.split_once('e').expect("e-notation");
    let exponent: i32 = exponent.parse().expect("exponent parses");
    let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
    if !(-7..=15).contains(&exponent) {
        return format!("{mantissa}e{exponent}");
    }
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let point = exponent + 1;
    let mut s = String::new();
    if negative {
        s.push('-');
    }
    if point <= 0 {
        s.push_str("0.");
        s.extend(std::iter::repeat('0').take(-point as usize));
        s.push_str(&digits);
    } else if point as usize >= digits.len() {
        s.push_str(&digits);
        s.extend(std::iter::repeat('0').take(point as usize - digits.len()));
    } else {
        s.push_str(&digits[..point as usize]);
        s.push('.');
        s.push_str(&digits[point as usize..]);
    }
    s
}

/// Round every number inside a JSON tree to 12 significant digits.
pub fn round_json(value: &mut serde_json::Value) {
    match value {
        serde_json::Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if n.is_f64() {
                    if let Some(rounded) = serde_json::Number::from_f64(round_sig(f)) {
                        *n = rounded;
                    }
                }
            }
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(round_json),
        serde_json::Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

pub fn json_text(mut value: serde_json::Value) -> String {
    round_json(&mut value);
    let mut text = serde_json::to_string_pretty(&value).expect("json serializes");
    text.push('\n');
    text
}

/// Write via a sibling temp file and rename, so readers never observe a
/// partial file.
pub fn atomic_write(path: &Path, contents: &str) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(contents.as_bytes())?;
        file.sync_all()?;
    }
    fs::rename(&tmp, path)
}

/// Write to `out` when given, otherwise print to stdout.
pub fn emit(out: Option<&Path>, contents: &str) -> std::io::Result<()> {
    match out {
        Some(path) => atomic_write(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounds_to_twelve_significant_digits() {
        assert_eq!(fmt_sig(1.75), "1.75");
        assert_eq!(fmt_sig(0.2780719051126377), "0.278071905113");
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(123456789012345.0), "123456789012000");
        assert_eq!(fmt_sig(0.104), "0.104");
        assert_eq!(fmt_sig(-0.5), "-0.5");
        assert_eq!(fmt_sig(8.664339753899999e-14), "8.6643397539e-14");
        assert_eq!(fmt_sig(2.0), "2");
    }

    #[test]
    fn json_rounding_recurses() {
        let v = serde_json::json!({
            "a": 0.12345678901234567,
            "b": [1.0000000000001, {"c": 2.0}],
        });
        let text = json_text(v);
        assert!(text.contains("0.123456789012"));
        assert!(text.contains("\"c\": 2.0"));
    }
}
