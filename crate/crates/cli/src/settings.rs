use bigonal_core::quartics::Tolerances;
use serde::Serialize;

use crate::CliError;

/// Every threshold used by a run. Printed in each report header.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Settings {
    pub newton: f64,
    pub newton_iterations: usize,
    pub charts: usize,
    pub starts_per_chart: usize,
    pub dedup: f64,
    pub certify: f64,
    pub separation: f64,
    pub hyperflex: f64,
    pub conic: f64,
    pub conic_gap: f64,
    pub tangency: f64,
    /// Agreement of independently computed branch values and divisors.
    pub numeric: f64,
    /// Root-cluster radius for counting ramification in the genus ledger.
    pub cluster: f64,
}

impl Default for Settings {
    fn default() -> Self {
        let t = Tolerances::default();
        Settings {
            newton: t.newton,
            newton_iterations: t.newton_iterations,
            charts: t.charts,
            starts_per_chart: t.starts_per_chart,
            dedup: t.dedup,
            certify: t.certify,
            separation: t.separation,
            hyperflex: t.hyperflex,
            conic: t.conic,
            conic_gap: t.conic_gap,
            tangency: t.tangency,
            numeric: 1e-10,
            cluster: 1e-6,
        }
    }
}

impl Settings {
    pub const KEYS: [&'static str; 13] = [
        "newton",
        "newton_iterations",
        "charts",
        "starts_per_chart",
        "dedup",
        "certify",
        "separation",
        "hyperflex",
        "conic",
        "conic_gap",
        "tangency",
        "numeric",
        "cluster",
    ];

    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            newton: self.newton,
            newton_iterations: self.newton_iterations,
            charts: self.charts,
            starts_per_chart: self.starts_per_chart,
            dedup: self.dedup,
            certify: self.certify,
            separation: self.separation,
            hyperflex: self.hyperflex,
            conic: self.conic,
            conic_gap: self.conic_gap,
            tangency: self.tangency,
        }
    }

    pub fn set(&mut self, key: &str, value: f64) -> Result<(), CliError> {
        let bad = |what: &str| CliError::Input(format!("tolerance `{key}`: {what}"));
        if !value.is_finite() || value <= 0.0 {
            return Err(bad("must be a positive number"));
        }
        let count = || -> Result<usize, CliError> {
            if value.fract() != 0.0 || value > 1e9 {
                return Err(bad("must be a positive integer"));
            }
            Ok(value as usize)
        };
        match key {
            "newton" => self.newton = value,
            "newton_iterations" => self.newton_iterations = count()?,
            "charts" => self.charts = count()?.min(3),
            "starts_per_chart" => self.starts_per_chart = count()?,
            "dedup" => self.dedup = value,
            "certify" => self.certify = value,
            "separation" => self.separation = value,
            "hyperflex" => self.hyperflex = value,
            "conic" => self.conic = value,
            "conic_gap" => self.conic_gap = value,
            "tangency" => self.tangency = value,
            "numeric" => self.numeric = value,
            "cluster" => self.cluster = value,
            _ => return Err(bad(&format!("unknown key (expected one of {})", Settings::KEYS.join(", ")))),
        }
        Ok(())
    }

    /// Applies `key=value` overrides in order.
    pub fn apply(&mut self, overrides: &[String]) -> Result<(), CliError> {
        for o in overrides {
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| CliError::Input(format!("tolerance override `{o}`: expected key=value")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| CliError::Input(format!("tolerance `{}`: not a number", k.trim())))?;
            self.set(k.trim(), v)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let mut s = Settings::default();
        s.apply(&["certify=1e-8".into(), " charts = 2".into()]).unwrap();
        assert_eq!(s.certify, 1e-8);
        assert_eq!(s.tolerances().charts, 2);
        assert!(s.apply(&["nope=1".into()]).is_err());
        assert!(s.apply(&["charts=1.5".into()]).is_err());
        assert!(s.apply(&["certify=-1".into()]).is_err());
        assert!(s.apply(&["certify".into()]).is_err());
    }
}
