use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{sorted, sorted_quantile, RunSample, StatsError};

/// Scale constant of the modified z-score.
pub const MODIFIED_Z_CONSTANT: f64 = 0.6745;
/// Values whose modified z-score exceeds this in absolute value are outliers.
pub const MODIFIED_Z_CUTOFF: f64 = 3.5;

const IQR_FENCE: f64 = 1.5;
const PERCENTILE_LOW: f64 = 0.025;
const PERCENTILE_HIGH: f64 = 0.975;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OutlierMethod {
    /// Tukey fences at `q25 - 1.5 IQR` and `q75 + 1.5 IQR`.
    #[serde(rename = "iqr")]
    Iqr,
    /// Everything outside the 2.5th and 97.5th percentiles.
    #[serde(rename = "percentile")]
    Percentile,
    /// Modified z-score around the median, scaled by the MAD.
    #[serde(rename = "mad", alias = "modified_z")]
    ModifiedZ,
}

impl OutlierMethod {
    pub const ALL: [OutlierMethod; 3] = [OutlierMethod::Iqr, OutlierMethod::Percentile, OutlierMethod::ModifiedZ];

    pub fn as_str(self) -> &'static str {
        match self {
            OutlierMethod::Iqr => "iqr",
            OutlierMethod::Percentile => "percentile",
            OutlierMethod::ModifiedZ => "mad",
        }
    }
}

impl fmt::Display for OutlierMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OutlierMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "iqr" => Ok(OutlierMethod::Iqr),
            "percentile" | "pct" => Ok(OutlierMethod::Percentile),
            "mad" | "modified_z" | "modified-z" | "modifiedz" => Ok(OutlierMethod::ModifiedZ),
            other => Err(format!(
                "unknown outlier method '{other}' (expected iqr, percentile or mad)"
            )),
        }
    }
}

/// Positions flagged as outliers, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutlierReport {
    flagged: Vec<usize>,
    retained_count: usize,
}

impl OutlierReport {
    pub fn flagged_indices(&self) -> &[usize] {
        &self.flagged
    }

    pub fn flagged_count(&self) -> usize {
        self.flagged.len()
    }

    pub fn retained_count(&self) -> usize {
        self.retained_count
    }

    pub fn is_flagged(&self, index: usize) -> bool {
        self.flagged.binary_search(&index).is_ok()
    }
}

/// Flags outliers with strict fences; values exactly on a fence are kept.
pub fn detect_outliers(sample: &RunSample, method: OutlierMethod) -> Result<OutlierReport, StatsError> {
    let values = sample.values();
    if values.len() < 3 {
        return Err(StatsError::SampleTooSmall {
            len: values.len(),
            min: 3,
        });
    }
    let flagged = match method {
        OutlierMethod::Iqr => {
            let s = sorted(values);
            let q1 = sorted_quantile(&s, 0.25);
            let q3 = sorted_quantile(&s, 0.75);
            let iqr = q3 - q1;
            fenced(values, q1 - IQR_FENCE * iqr, q3 + IQR_FENCE * iqr)
        }
        OutlierMethod::Percentile => {
            let s = sorted(values);
            fenced(
                values,
                sorted_quantile(&s, PERCENTILE_LOW),
                sorted_quantile(&s, PERCENTILE_HIGH),
            )
        }
        OutlierMethod::ModifiedZ => modified_z_flags(values),
    };
    Ok(OutlierReport {
        retained_count: values.len() - flagged.len(),
        flagged,
    })
}

fn fenced(values: &[f64], low: f64, high: f64) -> Vec<usize> {
    values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v < low || v > high)
        .map(|(i, _)| i)
        .collect()
}

fn modified_z_flags(values: &[f64]) -> Vec<usize> {
    let med = sorted_quantile(&sorted(values), 0.5);
    let abs_dev: Vec<f64> = values.iter().map(|v| (v - med).abs()).collect();
    let mad = sorted_quantile(&sorted(&abs_dev), 0.5);
    let scale = if mad > 0.0 {
        mad
    } else {
        // MAD collapses when more than half the values coincide; fall back to
        // the mean absolute deviation from the median.
        abs_dev.iter().sum::<f64>() / abs_dev.len() as f64
    };
    if scale == 0.0 {
        return Vec::new();
    }
    values
        .iter()
        .enumerate()
        .filter(|(_, &v)| (MODIFIED_Z_CONSTANT * (v - med) / scale).abs() > MODIFIED_Z_CUTOFF)
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(v: &[f64], m: OutlierMethod) -> Vec<usize> {
        detect_outliers(&RunSample::new(v.to_vec()).unwrap(), m)
            .unwrap()
            .flagged_indices()
            .to_vec()
    }

    const SAMPLE: [f64; 5] = [1.0, 2.0, 3.0, 4.0, 100.0];

    #[test]
    fn iqr_flags_only_the_large_value() {
        // q25 = 2, q75 = 4, fences [-1, 7]
        assert_eq!(flags(&SAMPLE, OutlierMethod::Iqr), vec![4]);
    }

    #[test]
    fn modified_z_flags_only_the_large_value() {
        assert_eq!(flags(&SAMPLE, OutlierMethod::ModifiedZ), vec![4]);
        assert_eq!(flags(&[5.0; 5], OutlierMethod::ModifiedZ), Vec::<usize>::new());
    }

    #[test]
    fn percentile_trims_both_extremes() {
        assert_eq!(flags(&SAMPLE, OutlierMethod::Percentile), vec![0, 4]);
    }

    #[test]
    fn modified_z_falls_back_to_mean_absolute_deviation() {
        // MAD = 0; mean abs deviation from median 10 is 90/8 = 11.25,
        // score of 100 is 0.6745 * 90 / 11.25 = 5.396.
        let v = [10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 100.0];
        assert_eq!(flags(&v, OutlierMethod::ModifiedZ), vec![7]);
        let report = detect_outliers(&RunSample::new(v.to_vec()).unwrap(), OutlierMethod::ModifiedZ).unwrap();
        assert_eq!(report.retained_count(), 7);
    }

    #[test]
    fn boundary_values_are_retained() {
        // q25 = 1, q75 = 2, IQR = 1, upper fence 3.5 exactly.
        let v = [1.0, 1.0, 1.0, 2.0, 2.0, 3.5, 1.5, 1.5, 2.0];
        let s = RunSample::new(v.to_vec()).unwrap();
        let q1 = super::super::quantile(&s, 0.25).unwrap();
        let q3 = super::super::quantile(&s, 0.75).unwrap();
        assert_eq!(q3 + 1.5 * (q3 - q1), 3.5);
        assert!(flags(&v, OutlierMethod::Iqr).is_empty());
    }

    #[test]
    fn too_small() {
        let s = RunSample::new(vec![1.0, 2.0]).unwrap();
        assert!(matches!(
            detect_outliers(&s, OutlierMethod::Iqr),
            Err(StatsError::SampleTooSmall { len: 2, min: 3 })
        ));
    }

    #[test]
    fn method_names_round_trip() {
        for m in OutlierMethod::ALL {
            assert_eq!(m.as_str().parse::<OutlierMethod>().unwrap(), m);
        }
        assert_eq!("MAD".parse::<OutlierMethod>().unwrap(), OutlierMethod::ModifiedZ);
        assert!("zscore".parse::<OutlierMethod>().is_err());
    }
}
