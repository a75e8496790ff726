//! Parsing of range and list arguments.

use skinning_bounds::contraction::BoundaryComponent;

/// `a..b` or `a..=b` (both inclusive), or a single integer.
pub fn parse_int_range(name: &str, s: &str) -> Result<Vec<u64>, String> {
    let s = s.trim();
    let int = |x: &str| {
        x.trim()
            .parse::<u64>()
            .map_err(|e| format!("{name}: cannot parse {x:?} as a non-negative integer: {e}"))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (int(a)?, int(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = int(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("{name}: empty range {s:?}"));
    }
    if hi - lo >= 10_000_000 {
        return Err(format!("{name}: range {s:?} has too many values"));
    }
    Ok((lo..=hi).collect())
}

fn real(name: &str, x: &str) -> Result<f64, String> {
    let v = x
        .trim()
        .parse::<f64>()
        .map_err(|e| format!("{name}: cannot parse {x:?} as a number: {e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{name}: {x:?} is not finite"))
    }
}

/// `x`, `start:stop:step` (stop included up to rounding), or `x,y,z`.
/// Returned sorted ascending without duplicates.
pub fn parse_real_list(name: &str, s: &str) -> Result<Vec<f64>, String> {
    let s = s.trim();
    let mut values = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err(format!("{name}: expected start:stop:step, got {s:?}"));
        };
        let (start, stop, step) = (real(name, start)?, real(name, stop)?, real(name, step)?);
        if step <= 0.0 {
            return Err(format!("{name}: step must be positive, got {step}"));
        }
        if stop < start {
            return Err(format!("{name}: empty range {s:?}"));
        }
        let count = ((stop - start) / step * (1.0 + 1e-12)).floor() as u64;
        if count >= 10_000_000 {
            return Err(format!("{name}: range {s:?} has too many values"));
        }
        (0..=count).map(|i| start + i as f64 * step).collect()
    } else {
        s.split(',').map(|x| real(name, x)).collect::<Result<Vec<_>, _>>()?
    };
    values.sort_by(f64::total_cmp);
    values.dedup();
    Ok(values)
}

/// `g,n,l;g,n,l;...`; errors name the one-based component.
pub fn parse_boundary(s: &str) -> Result<Vec<BoundaryComponent>, String> {
    let parts: Vec<&str> = s.split(';').map(str::trim).filter(|p| !p.is_empty()).collect();
    if parts.is_empty() {
        return Err("boundary: at least one component g,n,l is required".into());
    }
    parts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let fields: Vec<&str> = p.split(',').map(str::trim).collect();
            let [g, n, l] = fields[..] else {
                return Err(format!("boundary component {}: expected g,n,l, got {p:?}", i + 1));
            };
            let int = |x: &str| {
                x.parse::<u64>()
                    .map_err(|e| format!("boundary component {}: cannot parse {x:?}: {e}", i + 1))
            };
            let systole = l
                .parse::<f64>()
                .map_err(|e| format!("boundary component {}: cannot parse {l:?}: {e}", i + 1))?;
            Ok(BoundaryComponent {
                genus: int(g)?,
                punctures: int(n)?,
                systole,
            })
        })
        .collect()
}

/// `10, 20, 50, 100, 200, 500, …` up to `max`, with `max` itself appended.
pub fn genus_ladder(max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut decade = 10u64;
    'outer: loop {
        for m in [1, 2, 5] {
            match decade.checked_mul(m) {
                Some(g) if g <= max => out.push(g),
                _ => break 'outer,
            }
        }
        match decade.checked_mul(10) {
            Some(d) => decade = d,
            None => break,
        }
    }
    if out.last() != Some(&max) {
        out.push(max);
    }
    out
}
