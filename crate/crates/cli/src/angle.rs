//! Radian literals: plain numbers or multiples of `pi` such as `pi/4`,
//! `-3pi/8`, `7*pi/8`, `0.5pi`.

use std::f64::consts::PI;

pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    let value = match t.find("pi") {
        None => t
            .parse::<f64>()
            .map_err(|_| format!("invalid angle '{s}'"))?,
        Some(at) => {
            let coeff = t[..at].trim_end_matches('*').trim();
            let coeff = match coeff {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c
                    .parse::<f64>()
                    .map_err(|_| format!("invalid coefficient in angle '{s}'"))?,
            };
            let rest = t[at + 2..].trim();
            let denom = if rest.is_empty() {
                1.0
            } else {
                let d = rest
                    .strip_prefix('/')
                    .ok_or_else(|| format!("invalid angle '{s}'"))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| format!("invalid denominator in angle '{s}'"))?;
                if d == 0.0 {
                    return Err(format!("zero denominator in angle '{s}'"));
                }
                d
            };
            coeff * PI / denom
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("angle '{s}' is not finite"))
    }
}
