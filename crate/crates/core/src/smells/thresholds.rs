use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{SmellError, SmellKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Risk {
    None,
    Low,
    Medium,
    High,
}

impl Risk {
    pub fn as_str(self) -> &'static str {
        match self {
            Risk::None => "none",
            Risk::Low => "low",
            Risk::Medium => "medium",
            Risk::High => "high",
        }
    }
}

impl fmt::Display for Risk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Risk {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Risk::None),
            "low" => Ok(Risk::Low),
            "medium" => Ok(Risk::Medium),
            "high" => Ok(Risk::High),
            _ => Err(format!("unknown risk level {s:?}")),
        }
    }
}

/// Which threshold pair a metric is judged by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Threshold {
    LongChain,
    FeatureEnvy,
    OverburdenedBlocks,
    OverburdenedGroups,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Band {
    pub low: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub medium: Option<f64>,
    pub high: f64,
}

impl Band {
    pub const fn new(low: f64, high: f64) -> Self {
        Band {
            low,
            medium: None,
            high,
        }
    }

    pub fn classify(&self, value: f64) -> Risk {
        if value >= self.high {
            Risk::High
        } else if self.medium.is_some_and(|m| value >= m) {
            Risk::Medium
        } else if value >= self.low {
            Risk::Low
        } else {
            Risk::None
        }
    }

    fn validate(&self, name: &str) -> Result<(), SmellError> {
        let ordered = match self.medium {
            Some(m) => self.low <= m && m <= self.high,
            None => self.low <= self.high,
        };
        if ordered && self.low.is_finite() && self.high.is_finite() {
            Ok(())
        } else {
            Err(SmellError::InvalidThresholds(format!(
                "{name}: expected low <= medium <= high"
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Thresholds {
    pub long_chain: Band,
    pub feature_envy: Band,
    pub overburdened_blocks: Band,
    pub overburdened_groups: Band,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            long_chain: Band::new(4.0, 7.0),
            feature_envy: Band::new(3.0, 7.0),
            overburdened_blocks: Band::new(4.0, 9.0),
            overburdened_groups: Band::new(11.0, 37.0),
        }
    }
}

impl Thresholds {
    /// Defaults plus the 80% marks for the overburdened metrics as medium risk.
    pub fn with_medium() -> Self {
        let mut t = Thresholds::default();
        t.overburdened_blocks.medium = Some(5.0);
        t.overburdened_groups.medium = Some(19.0);
        t
    }

    pub fn band(&self, t: Threshold) -> &Band {
        match t {
            Threshold::LongChain => &self.long_chain,
            Threshold::FeatureEnvy => &self.feature_envy,
            Threshold::OverburdenedBlocks => &self.overburdened_blocks,
            Threshold::OverburdenedGroups => &self.overburdened_groups,
        }
    }

    pub fn validate(&self) -> Result<(), SmellError> {
        self.long_chain.validate("long_chain")?;
        self.feature_envy.validate("feature_envy")?;
        self.overburdened_blocks.validate("overburdened_blocks")?;
        self.overburdened_groups.validate("overburdened_groups")
    }

    /// Parses a JSON object; omitted entries keep their defaults.
    pub fn from_json(text: &str) -> Result<Self, SmellError> {
        let t: Thresholds = serde_json::from_str(text).map_err(|e| SmellError::InvalidThresholds(e.to_string()))?;
        t.validate()?;
        Ok(t)
    }

    pub fn classify_metric(&self, value: f64, t: Threshold) -> Risk {
        self.band(t).classify(value)
    }
}

/// Risk for a thresholded kind; overburdened worksheets are judged by block count.
pub fn classify(value: f64, kind: SmellKind, t: &Thresholds) -> Result<Risk, SmellError> {
    let which = match kind {
        SmellKind::BaselineLongChain | SmellKind::GroupLongChain => Threshold::LongChain,
        SmellKind::BaselineFeatureEnvy | SmellKind::GroupFeatureEnvy => Threshold::FeatureEnvy,
        SmellKind::OverburdenedWorksheet => Threshold::OverburdenedBlocks,
        _ => return Err(SmellError::PerInstance(kind)),
    };
    Ok(t.classify_metric(value, which))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_edges() {
        let t = Thresholds::default();
        assert_eq!(classify(7.0, SmellKind::GroupLongChain, &t).unwrap(), Risk::High);
        assert_eq!(classify(6.0, SmellKind::BaselineLongChain, &t).unwrap(), Risk::Low);
        assert_eq!(classify(3.0, SmellKind::GroupLongChain, &t).unwrap(), Risk::None);
        assert_eq!(classify(0.0, SmellKind::GroupFeatureEnvy, &t).unwrap(), Risk::None);
        assert_eq!(classify(5.0, SmellKind::OverburdenedWorksheet, &t).unwrap(), Risk::Low);
        let e = classify(1.0, SmellKind::MissingHeader, &t).unwrap_err();
        assert_eq!(e.to_string(), "missing-header: kind is per-instance");
        let m = Thresholds::with_medium();
        assert_eq!(m.classify_metric(5.0, Threshold::OverburdenedBlocks), Risk::Medium);
        assert_eq!(m.classify_metric(18.0, Threshold::OverburdenedGroups), Risk::Low);
    }

    #[test]
    fn json_overrides_and_validation() {
        let t = Thresholds::from_json(r#"{"long_chain": {"low": 2, "high": 3}}"#).unwrap();
        assert_eq!(t.long_chain, Band::new(2.0, 3.0));
        assert_eq!(t.feature_envy, Thresholds::default().feature_envy);
        assert!(Thresholds::from_json(r#"{"long_chain": {"low": 5, "high": 3}}"#).is_err());
        assert!(Thresholds::from_json(r#"{"overburdened_blocks": {"low": 4, "medium": 10, "high": 9}}"#).is_err());
        assert!(Thresholds::from_json(r#"{"chain": {"low": 1, "high": 2}}"#).is_err());
    }
}
