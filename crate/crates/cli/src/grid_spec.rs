use std::fmt;
use std::str::FromStr;

use pgal_core::{Axis, Grid};

/// Grid written as `v1=lo:hi:n,v2=lo:hi:n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec(pub Grid);

fn axis(text: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(format!("expected lo:hi:n, got `{text}`"));
    };
    let num = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
    let n = n
        .trim()
        .parse::<usize>()
        .map_err(|e| format!("`{n}`: {e}"))?;
    Axis::new(num(lo)?, num(hi)?, n).map_err(|e| e.to_string())
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut v1 = None;
        let mut v2 = None;
        for part in s.split(',') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("expected v1=... or v2=..., got `{part}`"))?;
            let slot = match key.trim() {
                "v1" => &mut v1,
                "v2" => &mut v2,
                other => return Err(format!("unknown axis `{other}`")),
            };
            if slot.is_some() {
                return Err(format!("axis `{}` given twice", key.trim()));
            }
            *slot = Some(axis(value)?);
        }
        match (v1, v2) {
            (Some(a), Some(b)) => Ok(GridSpec(Grid::new(a, b))),
            _ => Err("both v1 and v2 are required".into()),
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = &self.0;
        write!(
            f,
            "v1={}:{}:{},v2={}:{}:{}",
            g.v1.lo, g.v1.hi, g.v1.n, g.v2.lo, g.v2.hi, g.v2.n
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_axes() {
        let g: GridSpec = "v1=0.5:1.5:10,v2=-1:1:3".parse().unwrap();
        assert_eq!(g.0.v1.n, 10);
        assert_eq!(g.0.v2.lo, -1.0);
        assert_eq!(g.to_string(), "v1=0.5:1.5:10,v2=-1:1:3");
    }

    #[test]
    fn single_point_axis() {
        let g: GridSpec = "v1=1:1:1,v2=1:1:1".parse().unwrap();
        assert_eq!(g.0.len(), 1);
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "",
            "v1=0:1:2",
            "v1=0:1,v2=0:1:2",
            "v3=0:1:2,v2=0:1:2",
            "v1=1:0:3,v2=0:1:2",
            "v1=0:1:0,v2=0:1:2",
            "v1=0:1:2,v1=0:1:2",
        ] {
            assert!(bad.parse::<GridSpec>().is_err(), "{bad}");
        }
    }
}
