use std::iter::Sum;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::stats::clopper_pearson;

use super::EvalError;

/// Two-class confusion matrix; class index 1 is the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl ConfusionMatrix {
    pub const POSITIVE: usize = 1;

    pub fn new(tp: usize, tn: usize, fp: usize, fn_: usize) -> Self {
        Self { tp, tn, fp, fn_ }
    }

    pub fn total(&self) -> usize {
        self.tp + self.tn + self.fp + self.fn_
    }

    pub fn correct(&self) -> usize {
        self.tp + self.tn
    }

    pub fn positives(&self) -> usize {
        self.tp + self.fn_
    }

    pub fn negatives(&self) -> usize {
        self.tn + self.fp
    }

    pub fn record(&mut self, actual: usize, predicted: usize) {
        match (actual == Self::POSITIVE, predicted == Self::POSITIVE) {
            (true, true) => self.tp += 1,
            (true, false) => self.fn_ += 1,
            (false, true) => self.fp += 1,
            (false, false) => self.tn += 1,
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut cm = Self::default();
        for (actual, predicted) in pairs {
            cm.record(actual, predicted);
        }
        cm
    }
}

impl Add for ConfusionMatrix {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self::new(self.tp + o.tp, self.tn + o.tn, self.fp + o.fp, self.fn_ + o.fn_)
    }
}

impl Sum for ConfusionMatrix {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), Add::add)
    }
}

fn percent(num: usize, den: usize) -> f64 {
    100.0 * num as f64 / den as f64
}

pub fn accuracy(cm: &ConfusionMatrix) -> Result<f64, EvalError> {
    match cm.total() {
        0 => Err(EvalError::EmptyMatrix),
        n => Ok(percent(cm.correct(), n)),
    }
}

pub fn sensitivity(cm: &ConfusionMatrix) -> Result<f64, EvalError> {
    match cm.positives() {
        0 => Err(EvalError::NoPositives),
        n => Ok(percent(cm.tp, n)),
    }
}

pub fn specificity(cm: &ConfusionMatrix) -> Result<f64, EvalError> {
    match cm.negatives() {
        0 => Err(EvalError::NoNegatives),
        n => Ok(percent(cm.tn, n)),
    }
}

pub fn misclassification_rate(cm: &ConfusionMatrix) -> Result<f64, EvalError> {
    match cm.total() {
        0 => Err(EvalError::EmptyMatrix),
        n => Ok(percent(cm.fp + cm.fn_, n)),
    }
}

/// Clopper-Pearson interval for `successes / n`, in percent.
pub fn exact_binomial_ci(successes: usize, n: usize, level: f64) -> Result<(f64, f64), EvalError> {
    if n == 0 || successes > n {
        return Err(EvalError::InvalidCount { successes, n });
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(EvalError::InvalidLevel(level));
    }
    let (lo, hi) = clopper_pearson(successes, n, level);
    Ok((100.0 * lo, 100.0 * hi))
}

/// `100 * num / den` rounded half-up to two decimals, computed exactly.
pub fn format_ratio_percent(num: usize, den: usize) -> String {
    let hundredths = (20_000 * num as u128 + den as u128) / (2 * den as u128);
    format!("{}.{:02}", hundredths / 100, hundredths % 100)
}

/// A percentage rounded half-up to two decimals.
pub fn format_percent(x: f64) -> String {
    let hundredths = (x * 100.0 + 0.5 + 1e-9).floor() as u64;
    format!("{}.{:02}", hundredths / 100, hundredths % 100)
}

/// A rate with its exact interval. `None` fields mean the rate is
/// undefined because `n` is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub successes: usize,
    pub n: usize,
    pub percent: Option<f64>,
    pub ci_lower: Option<f64>,
    pub ci_upper: Option<f64>,
}

impl RateEstimate {
    pub fn new(successes: usize, n: usize, level: f64) -> Self {
        let ci = exact_binomial_ci(successes, n, level).ok();
        Self {
            successes,
            n,
            percent: (n > 0).then(|| percent(successes, n)),
            ci_lower: ci.map(|c| c.0),
            ci_upper: ci.map(|c| c.1),
        }
    }

    /// Two-decimal rendering of the point value, or `undefined`.
    pub fn display(&self) -> String {
        if self.n == 0 {
            "undefined".into()
        } else {
            format_ratio_percent(self.successes, self.n)
        }
    }

    pub fn display_ci(&self) -> String {
        match (self.ci_lower, self.ci_upper) {
            (Some(lo), Some(hi)) => format!("{}% to {}%", format_percent(lo), format_percent(hi)),
            _ => "undefined".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub confidence_level: f64,
    pub accuracy: RateEstimate,
    pub sensitivity: RateEstimate,
    pub specificity: RateEstimate,
    pub misclassification: RateEstimate,
}

impl MetricsReport {
    pub fn from_matrix(cm: &ConfusionMatrix, level: f64) -> Self {
        Self {
            confidence_level: level,
            accuracy: RateEstimate::new(cm.correct(), cm.total(), level),
            sensitivity: RateEstimate::new(cm.tp, cm.positives(), level),
            specificity: RateEstimate::new(cm.tn, cm.negatives(), level),
            misclassification: RateEstimate::new(cm.fp + cm.fn_, cm.total(), level),
        }
    }
}
