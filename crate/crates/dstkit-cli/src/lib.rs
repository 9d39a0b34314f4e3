//! Library surface of the command-line harness: file formats, instance
//! generation, independent verification, benchmarking and drawing.

pub mod bench;
pub mod draw;
pub mod format;
pub mod generate;
pub mod records;
pub mod verify;

/// Parses an epsilon argument: `N/D`, a decimal like `0.5`, or an integer.
pub fn parse_epsilon(s: &str) -> Result<(u64, u64), String> {
    let bad = || format!("bad epsilon {s:?}; use e.g. 1/2 or 0.5");
    let (num, den) = if let Some((a, b)) = s.split_once('/') {
        (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?)
    } else if let Some((int, frac)) = s.split_once('.') {
        let digits = frac.len() as u32;
        if digits == 0 || digits > 9 {
            return Err(bad());
        }
        let scale = 10u64.pow(digits);
        let i: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let f: u64 = frac.parse().map_err(|_| bad())?;
        (i * scale + f, scale)
    } else {
        (s.parse().map_err(|_| bad())?, 1)
    };
    if num == 0 || den == 0 {
        return Err("epsilon must be positive".into());
    }
    Ok((num, den))
}
