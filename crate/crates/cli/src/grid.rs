use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

/// `start:stop:points[:log]`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub scale: Scale,
}

impl GridSpec {
    /// Grid values; the endpoints are reproduced exactly.
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i == self.points - 1 {
                    return self.stop;
                }
                let t = i as f64 / last;
                match self.scale {
                    Scale::Linear => self.start + (self.stop - self.start) * t,
                    Scale::Log => (self.start.ln() + (self.stop / self.start).ln() * t).exp(),
                }
            })
            .collect()
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.points)?;
        if self.scale == Scale::Log {
            f.write_str(":log")?;
        }
        Ok(())
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let scale = match parts.as_slice() {
            [_, _, _] => Scale::Linear,
            [_, _, _, "log"] => Scale::Log,
            [_, _, _, "linear"] => Scale::Linear,
            _ => return Err(format!("expected start:stop:points[:log], got {s:?}")),
        };
        let num = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad grid bound {x:?}: {e}"))
        };
        let start = num(parts[0])?;
        let stop = num(parts[1])?;
        let points: usize = parts[2]
            .trim()
            .parse()
            .map_err(|e| format!("bad point count {:?}: {e}", parts[2]))?;
        if points == 0 {
            return Err("grid needs at least one point".into());
        }
        if !(start.is_finite() && stop.is_finite()) {
            return Err("grid bounds must be finite".into());
        }
        if !(start < stop) && points > 1 {
            return Err(format!("grid start {start} must be below stop {stop}"));
        }
        if scale == Scale::Log && start <= 0.0 {
            return Err("log grid needs a positive start".into());
        }
        Ok(GridSpec {
            start,
            stop,
            points,
            scale,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_linear_and_log() {
        let g: GridSpec = "0.01:0.99:99".parse().unwrap();
        assert_eq!(g.scale, Scale::Linear);
        let v = g.values();
        assert_eq!(v.len(), 99);
        assert_eq!(v[0], 0.01);
        assert_eq!(v[98], 0.99);
        assert!((v[49] - 0.5).abs() < 1e-15);

        let g: GridSpec = "1e-6:0.5:7:log".parse().unwrap();
        let v = g.values();
        assert_eq!(v[0], 1e-6);
        assert_eq!(v[6], 0.5);
        for w in v.windows(2) {
            assert!((w[1] / w[0] - v[1] / v[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn single_point() {
        let g: GridSpec = "0.3:0.3:1".parse().unwrap();
        assert_eq!(g.values(), vec![0.3]);
    }

    #[test]
    fn rejects_malformed() {
        for s in ["", "0.1:0.2", "0.2:0.1:5", "0.1:0.2:0", "0:1:5:log", "a:1:3", "0.1:0.2:3:cubic"] {
            assert!(s.parse::<GridSpec>().is_err(), "{s}");
        }
    }
}
