//! Text-form parsers: quaternion literals "w+xi+yj+zk", slice-plane
//! directions, and grid centers. Locale-independent ('.' decimal point).

use qspectra::{ImaginaryUnit, Quaternion};

/// Parses "w+xi+yj+zk" with optional terms: "1", "0.5+0.5i", "-2i+k", "j-k".
pub fn parse_quaternion(text: &str) -> Result<Quaternion, String> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err("empty quaternion literal".into());
    }
    let mut parts = [0.0f64; 4];
    let mut term = String::new();
    let mut chars = compact.chars().peekable();
    let flush = |term: &mut String, parts: &mut [f64; 4]| -> Result<(), String> {
        if term.is_empty() {
            return Ok(());
        }
        let (idx, numeric) = match term.chars().last().unwrap() {
            'i' => (1, &term[..term.len() - 1]),
            'j' => (2, &term[..term.len() - 1]),
            'k' => (3, &term[..term.len() - 1]),
            _ => (0, term.as_str()),
        };
        let value = match numeric {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other
                .parse::<f64>()
                .map_err(|_| format!("cannot parse coefficient '{other}'"))?,
        };
        parts[idx] += value;
        term.clear();
        Ok(())
    };
    while let Some(c) = chars.next() {
        match c {
            '+' | '-' if !term.is_empty() && !term.ends_with(['e', 'E']) => {
                flush(&mut term, &mut parts)?;
                term.push(c);
            }
            '0'..='9' | '.' | 'i' | 'j' | 'k' | 'e' | 'E' | '+' | '-' => term.push(c),
            other => return Err(format!("unexpected character '{other}' in quaternion literal")),
        }
        // units terminate a term
        if term.ends_with(['i', 'j', 'k']) && chars.peek().is_some() {
            flush(&mut term, &mut parts)?;
        }
    }
    flush(&mut term, &mut parts)?;
    Ok(Quaternion::new(parts[0], parts[1], parts[2], parts[3]))
}

/// Parses a whitespace/newline-separated list of quaternion literals or a
/// JSON array of [w,x,y,z] rows.
pub fn parse_quaternion_list(text: &str) -> Result<Vec<Quaternion>, String> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        let rows: Vec<[f64; 4]> =
            serde_json::from_str(trimmed).map_err(|e| format!("bad quaternion list: {e}"))?;
        if rows.is_empty() {
            return Err("empty quaternion list".into());
        }
        return Ok(rows.iter().map(|r| Quaternion::new(r[0], r[1], r[2], r[3])).collect());
    }
    let out: Result<Vec<Quaternion>, String> =
        trimmed.split_whitespace().map(parse_quaternion).collect();
    let out = out?;
    if out.is_empty() {
        return Err("empty quaternion list".into());
    }
    Ok(out)
}

/// Parses a slice direction: "i", "j", "k", or "x,y,z".
pub fn parse_slice(text: &str) -> Result<ImaginaryUnit, String> {
    match text.trim() {
        "i" => Ok(ImaginaryUnit::I),
        "j" => Ok(ImaginaryUnit::J),
        "k" => Ok(ImaginaryUnit::K),
        other => {
            let comps: Vec<&str> = other.split(',').collect();
            if comps.len() != 3 {
                return Err(format!("slice '{other}' is not i, j, k, or x,y,z"));
            }
            let mut v = [0.0f64; 3];
            for (slot, c) in v.iter_mut().zip(&comps) {
                *slot = c
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| format!("bad slice component '{c}'"))?;
            }
            ImaginaryUnit::new(v[0], v[1], v[2]).map_err(|e| e.to_string())
        }
    }
}

/// Parses a grid center "x,y".
pub fn parse_center(text: &str) -> Result<(f64, f64), String> {
    let comps: Vec<&str> = text.split(',').collect();
    if comps.len() != 2 {
        return Err(format!("center '{text}' is not of the form x,y"));
    }
    let x = comps[0].trim().parse::<f64>().map_err(|_| format!("bad center x '{}'", comps[0]))?;
    let y = comps[1].trim().parse::<f64>().map_err(|_| format!("bad center y '{}'", comps[1]))?;
    Ok((x, y))
}
