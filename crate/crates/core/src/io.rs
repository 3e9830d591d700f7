//! Text formats: parameter blocks, sequence CSV, coefficient CSV and sampled
//! function CSV.

use std::fmt::Write as _;

use crate::dyadic::{DyadicSequence, SpaceParams};
use crate::error::{Error, Result};
use crate::lq::LqExponent;
use crate::phi::PhiSpec;
use crate::wavelet::{Gender, SampledFunction, WaveletCoefficients};

/// Splits on commas that are not inside parentheses.
pub fn split_top_level(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(text[start..].trim());
    parts.retain(|p| !p.is_empty());
    parts
}

/// `key=value` pairs of an inline block such as `s=1, p=2, q=inf, phi=power(2), d=1`.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    split_top_level(text)
        .into_iter()
        .map(|part| {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::parse(0, format!("expected key=value, got '{part}'")))?;
            Ok((k.trim().to_ascii_lowercase(), v.trim().to_string()))
        })
        .collect()
}

fn number(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .map_err(|_| Error::InvalidParameter(format!("{key}: '{v}' is not a number")))
}

/// Builds space parameters from key-value pairs; `d` defaults to 1.
pub fn space_from_pairs(pairs: &[(String, String)]) -> Result<SpaceParams> {
    let get = |k: &str| pairs.iter().rev().find(|(key, _)| key == k).map(|(_, v)| v.as_str());
    for (k, _) in pairs {
        if !matches!(k.as_str(), "s" | "p" | "q" | "phi" | "d") {
            return Err(Error::InvalidParameter(format!("unknown key '{k}'")));
        }
    }
    let need = |k: &str| get(k).ok_or_else(|| Error::InvalidParameter(format!("missing key '{k}'")));
    let dim = match get("d") {
        Some(v) => v
            .parse::<usize>()
            .ok()
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::InvalidParameter(format!("d: '{v}' is not a positive integer")))?,
        None => 1,
    };
    let s = number("s", need("s")?)?;
    let p = number("p", need("p")?)?;
    let q: LqExponent = need("q")?.parse()?;
    let phi = PhiSpec::parse(need("phi")?, dim)?;
    SpaceParams::new(s, p, q, phi)
}

pub fn parse_space(text: &str) -> Result<SpaceParams> {
    space_from_pairs(&parse_key_values(text)?)
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// `key=value` settings from comment lines, e.g. `# d=2 Js=6`.
fn header_settings(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| l.trim().strip_prefix('#'))
        .flat_map(|l| l.split_whitespace())
        .filter_map(|tok| tok.split_once('='))
        .map(|(k, v)| (k.to_ascii_lowercase(), v.trim_end_matches(',').to_string()))
        .collect()
}

fn header_value<'a>(settings: &'a [(String, String)], key: &str) -> Option<&'a str> {
    settings.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

fn fields(line: &str) -> Vec<&str> {
    line.split(',').map(str::trim).collect()
}

fn parse_int(line: usize, s: &str) -> Result<i64> {
    s.parse().map_err(|_| Error::parse(line, format!("'{s}' is not an integer")))
}

fn parse_float(line: usize, s: &str) -> Result<f64> {
    s.parse().map_err(|_| Error::parse(line, format!("'{s}' is not a number")))
}

fn is_header_row(line: &str) -> bool {
    line.split(',').next().map_or(false, |f| {
        let f = f.trim();
        f.parse::<f64>().is_err() && f.parse::<Gender>().is_err()
    })
}

/// Rows `j,m1,...,md,value` after a `# d=<d>` header. Without the header the
/// dimension is the column count minus two. Repeated cells are summed.
pub fn read_sequence_csv(text: &str) -> Result<DyadicSequence> {
    let settings = header_settings(text);
    let mut dim = match header_value(&settings, "d") {
        Some(v) => Some(parse_int(0, v)?.max(0) as usize).filter(|&d| d > 0),
        None => None,
    };
    let mut seq: Option<DyadicSequence> = dim.map(DyadicSequence::new);
    for (n, line) in data_lines(text) {
        if seq.as_ref().map_or(true, |s| s.is_empty()) && is_header_row(line) {
            continue;
        }
        let f = fields(line);
        let d = *dim.get_or_insert(f.len().saturating_sub(2));
        if d == 0 || f.len() != d + 2 {
            return Err(Error::parse(n, format!("expected {} columns, found {}", d + 2, f.len())));
        }
        let j = parse_int(n, f[0])?;
        if j < 0 || j > u32::MAX as i64 {
            return Err(Error::parse(n, format!("level {j} out of range")));
        }
        let m = f[1..=d].iter().map(|x| parse_int(n, x)).collect::<Result<Vec<_>>>()?;
        let v = parse_float(n, f[d + 1])?;
        if !v.is_finite() {
            return Err(Error::parse(n, "non-finite value"));
        }
        seq.get_or_insert_with(|| DyadicSequence::new(d))
            .add(j as u32, m, v)
            .map_err(|e| Error::parse(n, e.to_string()))?;
    }
    seq.ok_or_else(|| Error::parse(0, "no dimension: add a '# d=<d>' header or data rows"))
}

pub fn write_sequence_csv(seq: &DyadicSequence, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "# d={}", seq.dim());
    let names: Vec<String> = (1..=seq.dim()).map(|i| format!("m{i}")).collect();
    let _ = writeln!(out, "j,{},value", names.join(","));
    for (j, m, v) in seq.iter() {
        let idx: Vec<String> = m.iter().map(i64::to_string).collect();
        let _ = writeln!(out, "{j},{},{v}", idx.join(","));
    }
    out
}

/// Rows `gender,j,m1,...,md,value`; the scaling block uses the all-F gender at j = 0.
pub fn read_coefficients_csv(text: &str) -> Result<WaveletCoefficients> {
    let settings = header_settings(text);
    let dim = header_value(&settings, "d")
        .ok_or_else(|| Error::parse(0, "missing '# d=<d>' header"))
        .and_then(|v| parse_int(0, v))? as usize;
    let depth = header_value(&settings, "depth")
        .ok_or_else(|| Error::parse(0, "missing '# depth=<J>' header"))
        .and_then(|v| parse_int(0, v))?;
    let mut coeffs =
        WaveletCoefficients::new(dim, depth.max(0) as u32).map_err(|e| Error::parse(0, e.to_string()))?;
    for (n, line) in data_lines(text) {
        let f = fields(line);
        if f.first().map_or(false, |g| g.eq_ignore_ascii_case("gender")) {
            continue;
        }
        if f.len() != dim + 3 {
            return Err(Error::parse(n, format!("expected {} columns, found {}", dim + 3, f.len())));
        }
        let gender: Gender = f[0].parse().map_err(|e: Error| Error::parse(n, e.to_string()))?;
        let j = parse_int(n, f[1])?;
        let m = f[2..dim + 2].iter().map(|x| parse_int(n, x)).collect::<Result<Vec<_>>>()?;
        let v = parse_float(n, f[dim + 2])?;
        let res = if gender.is_scaling() {
            if j != 0 {
                return Err(Error::parse(n, "scaling coefficients live at level 0"));
            }
            coeffs.set_scaling(m, v)
        } else if j < 0 {
            return Err(Error::parse(n, "negative level"));
        } else {
            coeffs.set_detail(gender, j as u32, m, v)
        };
        res.map_err(|e| Error::parse(n, e.to_string()))?;
    }
    Ok(coeffs)
}

pub fn write_coefficients_csv(coeffs: &WaveletCoefficients, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let dim = coeffs.dim();
    let _ = writeln!(out, "# d={dim} depth={}", coeffs.depth());
    let names: Vec<String> = (1..=dim).map(|i| format!("m{i}")).collect();
    let _ = writeln!(out, "gender,j,{},value", names.join(","));
    let join = |m: &[i64]| m.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
    for (m, v) in coeffs.scaling() {
        let _ = writeln!(out, "{},0,{},{v}", Gender::scaling(dim), join(m));
    }
    for (g, seq) in coeffs.details() {
        for (j, m, v) in seq.iter() {
            let _ = writeln!(out, "{g},{j},{},{v}", join(m));
        }
    }
    out
}

fn parse_box(v: &str) -> Result<(Vec<i64>, Vec<i64>)> {
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for axis in v.split(';') {
        let (a, b) = axis
            .split_once(':')
            .ok_or_else(|| Error::parse(0, format!("box axis '{axis}' is not a:b")))?;
        lo.push(parse_int(0, a.trim())?);
        hi.push(parse_int(0, b.trim())?);
    }
    Ok((lo, hi))
}

/// Header `# d=<d> Js=<Js> box=a:b;a:b`, rows `k1,...,kd,value` with k the
/// sample index (position k·2^{−Js}). Missing samples are zero.
pub fn read_sampled_csv(text: &str) -> Result<SampledFunction> {
    let settings = header_settings(text);
    let need = |k: &str| header_value(&settings, k).ok_or_else(|| Error::parse(0, format!("missing header '{k}='")));
    let dim = parse_int(0, need("d")?)? as usize;
    let js = parse_int(0, need("js")?)?;
    let (lo, hi) = parse_box(need("box")?)?;
    if js < 0 {
        return Err(Error::parse(0, "Js must be nonnegative"));
    }
    let mut f = SampledFunction::zeros(dim, js as u32, lo, hi).map_err(|e| Error::parse(0, e.to_string()))?;
    for (n, line) in data_lines(text) {
        if is_header_row(line) {
            continue;
        }
        let parts = fields(line);
        if parts.len() != dim + 1 {
            return Err(Error::parse(n, format!("expected {} columns, found {}", dim + 1, parts.len())));
        }
        let k = parts[..dim].iter().map(|x| parse_int(n, x)).collect::<Result<Vec<_>>>()?;
        let v = parse_float(n, parts[dim])?;
        f.set(&k, v).map_err(|e| Error::parse(n, e.to_string()))?;
    }
    Ok(f)
}

pub fn write_sampled_csv(f: &SampledFunction, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let (lo, hi) = f.bounds();
    let bx: Vec<String> = lo.iter().zip(hi).map(|(a, b)| format!("{a}:{b}")).collect();
    let _ = writeln!(out, "# d={} Js={} box={}", f.dim(), f.js(), bx.join(";"));
    let shape = f.shape();
    let first = f.first_index();
    for (idx, v) in f.values().iter().enumerate() {
        if *v == 0.0 {
            continue;
        }
        let mut k = vec![0i64; shape.len()];
        let mut rest = idx;
        for a in (0..shape.len()).rev() {
            k[a] = first[a] + (rest % shape[a]) as i64;
            rest /= shape[a];
        }
        let ks: Vec<String> = k.iter().map(i64::to_string).collect();
        let _ = writeln!(out, "{},{v}", ks.join(","));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_block() {
        let sp = parse_space("s=1, p=2, q=inf, phi=twopower(2,3), d=2").unwrap();
        assert_eq!(sp.s(), 1.0);
        assert_eq!(sp.dim(), 2);
        assert!(sp.q().is_infinite());
        assert!(parse_space("s=1, p=2, q=inf").is_err());
        assert!(parse_space("s=1, p=2, q=inf, phi=power(2), x=3").is_err());
    }

    #[test]
    fn sequence_round_trip() {
        let seq = DyadicSequence::from_entries(2, [(0, vec![0, -1], 1.5), (3, vec![7, 2], -0.25)]).unwrap();
        let text = write_sequence_csv(&seq, &["made by test".into()]);
        assert_eq!(read_sequence_csv(&text).unwrap(), seq);
        let bad = "# d=1\n0,1\n";
        assert!(matches!(read_sequence_csv(bad), Err(Error::Parse { line: 2, .. })));
        assert!(read_sequence_csv("# d=1\n").unwrap().is_empty());
    }

    #[test]
    fn coefficient_round_trip() {
        let mut c = WaveletCoefficients::new(2, 3).unwrap();
        c.set_scaling(vec![1, 2], 0.5).unwrap();
        c.set_detail("FM".parse().unwrap(), 2, vec![3, -1], 2.0).unwrap();
        let text = write_coefficients_csv(&c, &[]);
        assert_eq!(read_coefficients_csv(&text).unwrap(), c);
    }

    #[test]
    fn sampled_round_trip() {
        let mut f = SampledFunction::zeros(2, 1, vec![0, -1], vec![1, 1]).unwrap();
        f.set(&[1, -2], 3.0).unwrap();
        let text = write_sampled_csv(&f, &[]);
        assert_eq!(read_sampled_csv(&text).unwrap(), f);
    }
}
