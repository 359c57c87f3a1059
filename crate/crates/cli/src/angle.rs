//! Angles given either as decimal radians or as multiples of pi.

use std::f64::consts::PI;

/// Parses `0.3927`, `pi`, `-pi/8`, `3pi/8`, `3*pi/8`, `pi/4.5` or the same
/// with `π`.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase().replace('π', "pi");
    if s.is_empty() {
        return Err("empty angle".into());
    }
    let value = match s.find("pi") {
        None => s.parse::<f64>().map_err(|_| format!("cannot parse angle {text:?}"))?,
        Some(at) => {
            let head = &s[..at];
            let coefficient = match head.strip_suffix('*').unwrap_or(head) {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| format!("bad coefficient in angle {text:?}"))?,
            };
            let denominator = match &s[at + 2..] {
                "" => 1.0,
                rest => rest
                    .strip_prefix('/')
                    .and_then(|d| d.parse::<f64>().ok())
                    .filter(|d| *d != 0.0)
                    .ok_or_else(|| format!("bad denominator in angle {text:?}"))?,
            };
            coefficient * PI / denominator
        }
    };
    if !value.is_finite() {
        return Err(format!("angle {text:?} is not finite"));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals() {
        let cases = [
            ("0.25", 0.25),
            ("pi", PI),
            ("pi/8", PI / 8.0),
            ("-pi/8", -PI / 8.0),
            ("3pi/8", 3.0 * PI / 8.0),
            ("3*pi/8", 3.0 * PI / 8.0),
            ("π/4", PI / 4.0),
            (" PI / 2 ", PI / 2.0),
            ("0.5pi", PI / 2.0),
            ("-0.1", -0.1),
        ];
        for (text, want) in cases {
            assert!((parse_angle(text).unwrap() - want).abs() < 1e-15, "{text}");
        }
    }

    #[test]
    fn rejects_garbage() {
        for text in ["", "pi/", "pi/0", "2x", "pi8", "3**pi", "nan", "inf"] {
            assert!(parse_angle(text).is_err(), "{text}");
        }
    }
}
