use std::collections::BTreeMap;

use crate::data::Dataset;
use crate::stats::entropy;

use super::SelectionError;

/// How numeric attributes are binned before correlations are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Discretization {
    /// Supervised recursive entropy cuts with the MDL acceptance test.
    Mdl,
    /// `k` bins of (roughly) equal population, ignoring the class.
    EqualFrequency(usize),
}

impl std::str::FromStr for Discretization {
    type Err = String;

    /// Accepts `mdl` or `equal-frequency:<k>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "mdl" {
            return Ok(Self::Mdl);
        }
        match s.strip_prefix("equal-frequency:").map(str::parse::<usize>) {
            Some(Ok(k)) if k >= 1 => Ok(Self::EqualFrequency(k)),
            _ => Err(format!("expected `mdl` or `equal-frequency:<k>`, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MdlMode {
    Standard,
    /// Accept the single best cut without the MDL test and do not recurse.
    ForceOneCut,
}

/// Per numeric attribute, strictly increasing cut points. A value `x` falls
/// in bin `#{c : x > c}`, so a value equal to a cut goes to the lower bin.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiscretizationMap {
    cuts: BTreeMap<usize, Vec<f64>>,
}

impl DiscretizationMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Discretizes every numeric feature of `ds`.
    pub fn build(ds: &Dataset, method: &Discretization) -> Self {
        let schema = ds.schema();
        let mut map = Self::new();
        for attr in schema.feature_indices() {
            if !schema.attribute(attr).is_numeric() {
                continue;
            }
            let cuts = match *method {
                Discretization::Mdl => discretize_mdl(ds, attr, MdlMode::Standard),
                Discretization::EqualFrequency(k) => discretize_equal_frequency(ds, attr, k),
            }
            .expect("attribute is numeric");
            map.insert(attr, cuts);
        }
        map
    }

    pub fn insert(&mut self, attr: usize, cuts: Vec<f64>) {
        assert!(cuts.windows(2).all(|w| w[0] < w[1]), "cut points must be strictly increasing");
        self.cuts.insert(attr, cuts);
    }

    pub fn cuts(&self, attr: usize) -> Option<&[f64]> {
        self.cuts.get(&attr).map(Vec::as_slice)
    }

    pub fn bin(cuts: &[f64], x: f64) -> usize {
        cuts.partition_point(|&c| x > c)
    }

    /// Discrete code per row (`None` for missing) and the number of codes.
    pub fn codes(&self, ds: &Dataset, attr: usize) -> Result<(Vec<Option<usize>>, usize), SelectionError> {
        let spec = ds.schema().attribute(attr);
        match spec.categories() {
            Some(labels) => Ok(((0..ds.len()).map(|r| ds.value(r, attr).as_nominal()).collect(), labels.len())),
            None => {
                let cuts = self.cuts(attr).ok_or(SelectionError::NotDiscretized(attr))?;
                let codes = (0..ds.len())
                    .map(|r| ds.value(r, attr).as_f64().map(|x| Self::bin(cuts, x)))
                    .collect();
                Ok((codes, cuts.len() + 1))
            }
        }
    }
}

/// Known `(value, class)` pairs of a numeric attribute, sorted by value.
fn labelled_values(ds: &Dataset, attr: usize) -> Result<Vec<(f64, usize)>, SelectionError> {
    if !ds.schema().attribute(attr).is_numeric() {
        return Err(SelectionError::NotNumeric(attr));
    }
    let mut pairs: Vec<(f64, usize)> = (0..ds.len())
        .filter_map(|r| Some((ds.value(r, attr).as_f64()?, ds.class_of(r)?)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(pairs)
}

/// Runs of equal values with their class counts.
fn value_runs(pairs: &[(f64, usize)], num_classes: usize) -> Vec<(f64, Vec<usize>)> {
    let mut runs: Vec<(f64, Vec<usize>)> = Vec::new();
    for &(x, c) in pairs {
        match runs.last_mut() {
            Some((v, counts)) if *v == x => counts[c] += 1,
            _ => {
                let mut counts = vec![0; num_classes];
                counts[c] = 1;
                runs.push((x, counts));
            }
        }
    }
    runs
}

/// Class of a run if it is pure.
fn pure_class(counts: &[usize]) -> Option<usize> {
    let mut nonzero = counts.iter().enumerate().filter(|(_, &c)| c > 0);
    let first = nonzero.next()?.0;
    nonzero.next().is_none().then_some(first)
}

/// Whether a cut between two adjacent value runs can be optimal: not when
/// both sides are pure in the same class.
pub(crate) fn is_boundary(left: &[usize], right: &[usize]) -> bool {
    match (pure_class(left), pure_class(right)) {
        (Some(a), Some(b)) => a != b,
        _ => true,
    }
}

struct BestCut {
    index: usize,
    cut: f64,
    left: Vec<usize>,
    right: Vec<usize>,
    weighted_entropy: f64,
}

fn best_cut(runs: &[(f64, Vec<usize>)]) -> Option<BestCut> {
    let num_classes = runs.first()?.1.len();
    let total: Vec<usize> = (0..num_classes).map(|c| runs.iter().map(|r| r.1[c]).sum()).collect();
    let n: usize = total.iter().sum();
    let mut left = vec![0; num_classes];
    let mut best: Option<BestCut> = None;
    for i in 0..runs.len() - 1 {
        for (l, r) in left.iter_mut().zip(&runs[i].1) {
            *l += r;
        }
        if !is_boundary(&runs[i].1, &runs[i + 1].1) {
            continue;
        }
        let right: Vec<usize> = total.iter().zip(&left).map(|(t, l)| t - l).collect();
        let nl: usize = left.iter().sum();
        let e = (nl as f64 * entropy(&left) + (n - nl) as f64 * entropy(&right)) / n as f64;
        if best.as_ref().is_none_or(|b| e < b.weighted_entropy) {
            best = Some(BestCut {
                index: i,
                cut: 0.5 * (runs[i].0 + runs[i + 1].0),
                left: left.clone(),
                right,
                weighted_entropy: e,
            });
        }
    }
    best
}

fn mdl_accepts(total: &[usize], cut: &BestCut) -> bool {
    let n: usize = total.iter().sum();
    let classes = |c: &[usize]| c.iter().filter(|&&x| x > 0).count() as i32;
    let (k, k1, k2) = (classes(total), classes(&cut.left), classes(&cut.right));
    let (h, h1, h2) = (entropy(total), entropy(&cut.left), entropy(&cut.right));
    let gain = h - cut.weighted_entropy;
    let delta = (3f64.powi(k) - 2.0).log2() - (k as f64 * h - k1 as f64 * h1 - k2 as f64 * h2);
    gain > ((n as f64 - 1.0).log2() + delta) / n as f64
}

fn split_recursive(runs: &[(f64, Vec<usize>)], mode: MdlMode, cuts: &mut Vec<f64>) {
    if runs.len() < 2 {
        return;
    }
    let num_classes = runs[0].1.len();
    let total: Vec<usize> = (0..num_classes).map(|c| runs.iter().map(|r| r.1[c]).sum()).collect();
    let Some(cut) = best_cut(runs) else {
        return;
    };
    if entropy(&total) - cut.weighted_entropy <= 0.0 {
        return;
    }
    match mode {
        MdlMode::ForceOneCut => cuts.push(cut.cut),
        MdlMode::Standard => {
            if !mdl_accepts(&total, &cut) {
                return;
            }
            split_recursive(&runs[..=cut.index], mode, cuts);
            cuts.push(cut.cut);
            split_recursive(&runs[cut.index + 1..], mode, cuts);
        }
    }
}

/// Supervised cut points for numeric attribute `attr`. Candidate cuts are
/// midpoints between adjacent distinct values; ties in entropy go to the
/// lowest cut. Fewer than two known values yields no cuts.
pub fn discretize_mdl(ds: &Dataset, attr: usize, mode: MdlMode) -> Result<Vec<f64>, SelectionError> {
    let pairs = labelled_values(ds, attr)?;
    let runs = value_runs(&pairs, ds.schema().num_classes());
    let mut cuts = Vec::new();
    split_recursive(&runs, mode, &mut cuts);
    Ok(cuts)
}

/// Unsupervised cuts giving `k` bins of roughly equal population. Bins never
/// split a run of equal values, so fewer than `k` bins may result.
pub fn discretize_equal_frequency(ds: &Dataset, attr: usize, k: usize) -> Result<Vec<f64>, SelectionError> {
    if !ds.schema().attribute(attr).is_numeric() {
        return Err(SelectionError::NotNumeric(attr));
    }
    let mut values: Vec<f64> = (0..ds.len()).filter_map(|r| ds.value(r, attr).as_f64()).collect();
    values.sort_by(f64::total_cmp);
    let n = values.len();
    let mut cuts: Vec<f64> = Vec::new();
    for j in 1..k.max(1) {
        let idx = j * n / k;
        if idx == 0 || idx >= n || values[idx - 1] == values[idx] {
            continue;
        }
        let c = 0.5 * (values[idx - 1] + values[idx]);
        if cuts.last().is_none_or(|&last| c > last) {
            cuts.push(c);
        }
    }
    Ok(cuts)
}
