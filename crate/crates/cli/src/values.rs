//! Value parsers for command-line flags.

use hf_core::{ComplexVal, EntireMap, TransitionMatrix};

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` (spaces ignored).
pub fn complex(s: &str) -> Result<ComplexVal, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("expected a complex number like 1, -2.5i or 1+1i, got '{s}'");
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| ComplexVal::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re.is_empty() { 0.0 } else { re.parse::<f64>().map_err(|_| bad())? };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    if !(re.is_finite() && im.is_finite()) {
        return Err(bad());
    }
    Ok(ComplexVal::new(re, im))
}

/// Parsed list flag; a bare `Vec` would make clap expect repeated flags.
#[derive(Debug, Clone, PartialEq)]
pub struct List<T>(pub Vec<T>);

/// Items separated by `;` or `,`.
pub fn complex_list(s: &str) -> Result<List<ComplexVal>, String> {
    let items: Vec<&str> = s.split([';', ',']).map(str::trim).filter(|x| !x.is_empty()).collect();
    if items.is_empty() {
        return Err("expected a list of complex numbers separated by ';'".into());
    }
    items.into_iter().map(complex).collect::<Result<_, _>>().map(List)
}

pub fn target_list(s: &str) -> Result<List<u32>, String> {
    s.split([';', ','])
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| match x.parse::<u32>() {
            Ok(m) if m >= 2 => Ok(m),
            _ => Err(format!("targets must be integers >= 2, got '{x}'")),
        })
        .collect::<Result<Vec<_>, _>>()
        .and_then(|t| match t.windows(2).all(|w| w[0] < w[1]) {
            true if !t.is_empty() => Ok(List(t)),
            _ => Err("targets must be a nonempty strictly increasing list".into()),
        })
}

pub fn positive(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a positive number, got '{s}'")),
    }
}

pub fn function(s: &str) -> Result<EntireMap, String> {
    EntireMap::parse(s).map_err(|e| format!("{e}"))
}

pub fn matrix(s: &str) -> Result<TransitionMatrix, String> {
    serde_json::from_str(s).map_err(|e| format!("expected {{\"n\": N, \"rows\": [\"0101\", ...]}}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let c = ComplexVal::new;
        assert_eq!(complex("1+1i"), Ok(c(1.0, 1.0)));
        assert_eq!(complex("2i"), Ok(c(0.0, 2.0)));
        assert_eq!(complex("-i"), Ok(c(0.0, -1.0)));
        assert_eq!(complex("i"), Ok(c(0.0, 1.0)));
        assert_eq!(complex("-0.5"), Ok(c(-0.5, 0.0)));
        assert_eq!(complex("1e-3-2.5e+1i"), Ok(c(1e-3, -25.0)));
        assert_eq!(complex(" 3 - i "), Ok(c(3.0, -1.0)));
        assert!(complex("1+").is_err());
        assert!(complex("x").is_err());
        assert!(complex("").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(complex_list("1; 2i").unwrap().0.len(), 2);
        assert_eq!(target_list("2,4,8"), Ok(List(vec![2, 4, 8])));
        assert!(target_list("1").is_err());
        assert!(positive("0").is_err());
        assert!(positive("-1").is_err());
    }
}
