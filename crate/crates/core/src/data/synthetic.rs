//! Class-conditional synthetic data.
//!
//! A [`SyntheticSpec`] is a TOML document giving class priors (keyed by
//! target label) and, for every non-target attribute, per-class category
//! probabilities or per-class Gaussian parameters:
//!
//! ```toml
//! [priors]
//! "0" = 0.431
//! "1" = 0.569
//!
//! [attributes.Age]
//! kind = "numeric"
//! decimals = 0          # optional rounding
//! min = 29.0            # optional clamp, applied after rounding
//! max = 77.0
//! classes."0" = { mean = 52.0, stddev = 9.5 }
//! classes."1" = { mean = 56.5, stddev = 8.0 }
//!
//! [attributes.Sex]
//! kind = "nominal"
//! classes."0" = [0.45, 0.55]   # category declaration order
//! classes."1" = [0.25, 0.75]
//! ```
//!
//! Class counts are fixed up front by largest-remainder rounding of
//! `n * prior`, so the split is exact rather than sampled.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{AttributeKind, DataError, Dataset, Schema, Value};

const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub priors: BTreeMap<String, f64>,
    pub attributes: BTreeMap<String, AttributeDistribution>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gaussian {
    pub mean: f64,
    pub stddev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AttributeDistribution {
    Numeric {
        #[serde(default)]
        decimals: Option<u32>,
        #[serde(default)]
        min: Option<f64>,
        #[serde(default)]
        max: Option<f64>,
        classes: BTreeMap<String, Gaussian>,
    },
    Nominal {
        classes: BTreeMap<String, Vec<f64>>,
    },
}

impl SyntheticSpec {
    pub fn from_toml(text: &str) -> Result<Self, DataError> {
        toml::from_str(text).map_err(|e| DataError::InvalidSpec(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec is serializable")
    }
}

enum Sampler {
    Target,
    Numeric {
        decimals: Option<u32>,
        min: f64,
        max: f64,
        per_class: Vec<Gaussian>,
    },
    Nominal {
        cumulative: Vec<Vec<f64>>,
    },
}

fn check_sum(what: &str, probs: &[f64]) -> Result<(), DataError> {
    if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(DataError::InvalidSpec(format!("{what}: probabilities must be finite and non-negative")));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > SUM_TOLERANCE {
        return Err(DataError::InvalidSpec(format!("{what}: probabilities sum to {total}, not 1")));
    }
    Ok(())
}

fn per_class<'a, T>(
    attr: &str,
    labels: &[String],
    classes: &'a BTreeMap<String, T>,
) -> Result<Vec<&'a T>, DataError> {
    if let Some(extra) = classes.keys().find(|k| !labels.contains(k)) {
        return Err(DataError::InvalidSpec(format!("{attr}: unknown class `{extra}`")));
    }
    labels
        .iter()
        .map(|l| {
            classes
                .get(l)
                .ok_or_else(|| DataError::InvalidSpec(format!("{attr}: no parameters for class `{l}`")))
        })
        .collect()
}

fn build_samplers(schema: &Schema, spec: &SyntheticSpec) -> Result<Vec<Sampler>, DataError> {
    let labels = schema.class_labels();
    if let Some(extra) = spec.attributes.keys().find(|k| {
        schema.index_of(k).is_none_or(|i| i == schema.target_index())
    }) {
        return Err(DataError::InvalidSpec(format!("attribute `{extra}` is not a schema feature")));
    }
    let mut samplers = Vec::with_capacity(schema.len());
    for (i, attr) in schema.attributes().iter().enumerate() {
        if i == schema.target_index() {
            samplers.push(Sampler::Target);
            continue;
        }
        let dist = spec
            .attributes
            .get(&attr.name)
            .ok_or_else(|| DataError::InvalidSpec(format!("no distribution for attribute `{}`", attr.name)))?;
        let sampler = match (dist, &attr.kind) {
            (AttributeDistribution::Numeric { decimals, min, max, classes }, AttributeKind::Numeric) => {
                let per_class: Vec<Gaussian> = per_class(&attr.name, labels, classes)?.into_iter().copied().collect();
                for g in &per_class {
                    if !g.mean.is_finite() || !g.stddev.is_finite() || g.stddev < 0.0 {
                        return Err(DataError::InvalidSpec(format!(
                            "{}: mean must be finite and stddev finite and >= 0",
                            attr.name
                        )));
                    }
                }
                let (min, max) = (min.unwrap_or(f64::NEG_INFINITY), max.unwrap_or(f64::INFINITY));
                if min > max {
                    return Err(DataError::InvalidSpec(format!("{}: min exceeds max", attr.name)));
                }
                Sampler::Numeric {
                    decimals: *decimals,
                    min,
                    max,
                    per_class,
                }
            }
            (AttributeDistribution::Nominal { classes }, AttributeKind::Nominal(cats)) => {
                let mut cumulative = Vec::with_capacity(labels.len());
                for (label, probs) in labels.iter().zip(per_class(&attr.name, labels, classes)?) {
                    let what = format!("{} | class {label}", attr.name);
                    if probs.len() != cats.len() {
                        return Err(DataError::InvalidSpec(format!(
                            "{what}: {} probabilities for {} categories",
                            probs.len(),
                            cats.len()
                        )));
                    }
                    check_sum(&what, probs)?;
                    cumulative.push(
                        probs
                            .iter()
                            .scan(0.0, |acc, p| {
                                *acc += p;
                                Some(*acc)
                            })
                            .collect(),
                    );
                }
                Sampler::Nominal { cumulative }
            }
            _ => {
                return Err(DataError::InvalidSpec(format!(
                    "attribute `{}`: distribution kind does not match schema",
                    attr.name
                )))
            }
        };
        samplers.push(sampler);
    }
    Ok(samplers)
}

/// Splits `n` items in proportion to `weights` (which sum to 1), giving
/// leftover units to the largest fractional parts; ties go to the lower index.
pub fn largest_remainder(n: usize, weights: &[f64]) -> Vec<usize> {
    let quotas: Vec<f64> = weights.iter().map(|w| w * n as f64).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = quotas[a] - quotas[a].floor();
        let fb = quotas[b] - quotas[b].floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    for &i in order.iter().take(n.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

/// Generates `n` rows. Pure function of `(schema, n, seed, spec)`.
pub fn generate_synthetic(schema: &Schema, n: usize, seed: u64, spec: &SyntheticSpec) -> Result<Dataset, DataError> {
    if n == 0 {
        return Err(DataError::InvalidSpec("n must be at least 1".into()));
    }
    let labels = schema.class_labels();
    let priors: Vec<f64> = per_class("priors", labels, &spec.priors)?.into_iter().copied().collect();
    check_sum("priors", &priors)?;
    let samplers = build_samplers(schema, spec)?;

    let counts = largest_remainder(n, &priors);
    let mut classes: Vec<usize> = counts
        .iter()
        .enumerate()
        .flat_map(|(c, &k)| std::iter::repeat_n(c, k))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    classes.shuffle(&mut rng);

    let rows = classes
        .iter()
        .map(|&class| {
            samplers
                .iter()
                .map(|s| match s {
                    Sampler::Target => Value::Nominal(class),
                    Sampler::Numeric {
                        decimals,
                        min,
                        max,
                        per_class,
                    } => {
                        let g = per_class[class];
                        let mut x = if g.stddev == 0.0 {
                            g.mean
                        } else {
                            Normal::new(g.mean, g.stddev).expect("validated").sample(&mut rng)
                        };
                        if let Some(d) = decimals {
                            let scale = 10f64.powi(*d as i32);
                            x = (x * scale).round() / scale;
                        }
                        // adding 0.0 turns a rounded -0.0 into 0.0
                        Value::Numeric(x.clamp(*min, *max) + 0.0)
                    }
                    Sampler::Nominal { cumulative } => {
                        let cum = &cumulative[class];
                        let u: f64 = rng.random();
                        // u can land in the rounding slack above the last cumulative value
                        let k = cum.iter().position(|&c| u < c).unwrap_or(cum.len() - 1);
                        Value::Nominal(k)
                    }
                })
                .collect()
        })
        .collect();

    Dataset::new("synthetic", schema.clone(), rows)
}
