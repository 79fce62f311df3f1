use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Schema, Value};
use crate::selection::is_boundary;
use crate::stats::{binomial_upper_bound, entropy};

use super::{argmax_counts, check_row, training_classes, ClassDistribution, Classifier, ClassifierError, Learner};

const GAIN_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TreeParams {
    /// Minimum instances in at least two branches of any split.
    pub min_leaf: usize,
    /// Confidence factor for error-based pruning.
    pub confidence: f64,
    pub prune: bool,
    /// Let the tree split when every candidate has zero gain.
    pub allow_zero_gain_splits: bool,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            min_leaf: 2,
            confidence: 0.25,
            prune: true,
            allow_zero_gain_splits: false,
        }
    }
}

impl TreeParams {
    pub(crate) fn validate(&self) -> Result<(), ClassifierError> {
        if self.min_leaf == 0 {
            return Err(ClassifierError::InvalidParameter("min_leaf must be at least 1".into()));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(ClassifierError::InvalidParameter(format!(
                "confidence factor must lie in (0, 1), got {}",
                self.confidence
            )));
        }
        Ok(())
    }
}

/// Tree node. Children are indices into the owning tree's node list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum Node {
    Leaf {
        counts: Vec<usize>,
        class: usize,
    },
    /// `value <= threshold` goes left.
    Numeric {
        attr: usize,
        threshold: f64,
        counts: Vec<usize>,
        left: usize,
        right: usize,
        /// Missing values follow the left branch when set.
        missing_left: bool,
    },
    Nominal {
        attr: usize,
        counts: Vec<usize>,
        /// One child per category of `attr`.
        children: Vec<usize>,
        /// Branch taken by missing values.
        majority: usize,
    },
}

impl Node {
    pub fn counts(&self) -> &[usize] {
        match self {
            Node::Leaf { counts, .. } | Node::Numeric { counts, .. } | Node::Nominal { counts, .. } => counts,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Leaf { .. })
    }

    pub fn children(&self) -> Vec<usize> {
        match self {
            Node::Leaf { .. } => Vec::new(),
            Node::Numeric { left, right, .. } => vec![*left, *right],
            Node::Nominal { children, .. } => children.clone(),
        }
    }

    /// Split attribute of an internal node.
    pub fn attr(&self) -> Option<usize> {
        match self {
            Node::Leaf { .. } => None,
            Node::Numeric { attr, .. } | Node::Nominal { attr, .. } => Some(*attr),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitKind {
    Threshold(f64),
    Multiway,
}

/// One admissible split with its scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitCandidate {
    pub attr: usize,
    pub kind: SplitKind,
    /// Information gain in bits, scaled by the fraction of known values.
    pub gain: f64,
    pub split_info: f64,
    pub gain_ratio: f64,
}

/// Decision tree; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    schema: Schema,
    nodes: Vec<Node>,
}

struct GrowContext<'a> {
    ds: &'a Dataset,
    classes: &'a [usize],
    num_classes: usize,
    min_leaf: usize,
    allow_zero_gain: bool,
}

fn class_counts(ctx: &GrowContext, rows: &[usize]) -> Vec<usize> {
    let mut counts = vec![0; ctx.num_classes];
    for &r in rows {
        counts[ctx.classes[r]] += 1;
    }
    counts
}

fn branch_entropy(branches: &[Vec<usize>]) -> (f64, usize) {
    let n: usize = branches.iter().flatten().sum();
    if n == 0 {
        return (0.0, 0);
    }
    let weighted = branches
        .iter()
        .map(|b| b.iter().sum::<usize>() as f64 / n as f64 * entropy(b))
        .sum();
    (weighted, n)
}

fn candidate(ctx: &GrowContext, rows: &[usize], attr: usize) -> Option<SplitCandidate> {
    let schema = ctx.ds.schema();
    let k = ctx.num_classes;
    match schema.attribute(attr).categories() {
        Some(cats) => {
            let mut branches = vec![vec![0usize; k]; cats.len()];
            for &r in rows {
                if let Value::Nominal(v) = ctx.ds.value(r, attr) {
                    branches[v][ctx.classes[r]] += 1;
                }
            }
            let sizes: Vec<usize> = branches.iter().map(|b| b.iter().sum()).collect();
            if sizes.iter().filter(|&&s| s >= ctx.min_leaf).count() < 2 {
                return None;
            }
            let known: Vec<usize> = (0..k).map(|c| branches.iter().map(|b| b[c]).sum()).collect();
            let (weighted, n_known) = branch_entropy(&branches);
            let frac = n_known as f64 / rows.len() as f64;
            let gain = frac * (entropy(&known) - weighted);
            let split_info = entropy(&sizes);
            Some(SplitCandidate {
                attr,
                kind: SplitKind::Multiway,
                gain,
                split_info,
                gain_ratio: gain / split_info,
            })
        }
        None => {
            let mut known: Vec<(f64, usize)> = rows
                .iter()
                .filter_map(|&r| ctx.ds.value(r, attr).as_f64().map(|x| (x, ctx.classes[r])))
                .collect();
            if known.len() < 2 * ctx.min_leaf {
                return None;
            }
            known.sort_by(|a, b| a.0.total_cmp(&b.0));
            // runs of equal values with their class counts
            let mut runs: Vec<(f64, Vec<usize>, usize)> = Vec::new();
            for (i, &(x, c)) in known.iter().enumerate() {
                match runs.last_mut() {
                    Some((v, counts, end)) if *v == x => {
                        counts[c] += 1;
                        *end = i + 1;
                    }
                    _ => {
                        let mut counts = vec![0; k];
                        counts[c] = 1;
                        runs.push((x, counts, i + 1));
                    }
                }
            }
            let n_known = known.len();
            let total: Vec<usize> = (0..k).map(|c| runs.iter().map(|r| r.1[c]).sum()).collect();
            let h = entropy(&total);
            let mut left = vec![0usize; k];
            let mut best: Option<(f64, f64, usize)> = None;
            for j in 0..runs.len() - 1 {
                for c in 0..k {
                    left[c] += runs[j].1[c];
                }
                let n_left = runs[j].2;
                if n_left < ctx.min_leaf || n_known - n_left < ctx.min_leaf {
                    continue;
                }
                if !is_boundary(&runs[j].1, &runs[j + 1].1) {
                    continue;
                }
                let right: Vec<usize> = (0..k).map(|c| total[c] - left[c]).collect();
                let (weighted, _) = branch_entropy(&[left.clone(), right]);
                let gain = h - weighted;
                if best.is_none_or(|(g, _, _)| gain > g + GAIN_EPS) {
                    let (a, b) = (runs[j].0, runs[j + 1].0);
                    let mut t = a + (b - a) / 2.0;
                    if t >= b {
                        t = a;
                    }
                    best = Some((gain, t, n_left));
                }
            }
            let (gain, threshold, n_left) = best?;
            let frac = n_known as f64 / rows.len() as f64;
            let split_info = entropy(&[n_left, n_known - n_left]);
            let gain = frac * gain;
            Some(SplitCandidate {
                attr,
                kind: SplitKind::Threshold(threshold),
                gain,
                split_info,
                gain_ratio: gain / split_info,
            })
        }
    }
}

/// Picks the highest gain ratio among candidates whose gain is at least
/// the mean gain. Ties go to the earliest candidate.
fn choose(candidates: Vec<SplitCandidate>, allow_zero_gain: bool) -> Option<SplitCandidate> {
    let pool: Vec<SplitCandidate> = candidates
        .into_iter()
        .filter(|c| c.gain > GAIN_EPS || (allow_zero_gain && c.gain >= -GAIN_EPS))
        .collect();
    if pool.is_empty() {
        return None;
    }
    let mean = pool.iter().map(|c| c.gain).sum::<f64>() / pool.len() as f64;
    let mut best: Option<SplitCandidate> = None;
    for c in pool {
        if c.gain < mean - GAIN_EPS {
            continue;
        }
        if best.as_ref().is_none_or(|b| c.gain_ratio > b.gain_ratio + GAIN_EPS) {
            best = Some(c);
        }
    }
    best
}

/// Scores every admissible split of the full dataset, one per feature in
/// attribute order. Features with no admissible split are omitted.
pub fn evaluate_splits(ds: &Dataset, min_leaf: usize) -> Result<Vec<SplitCandidate>, ClassifierError> {
    let classes = training_classes(ds)?;
    let ctx = GrowContext {
        ds,
        classes: &classes,
        num_classes: ds.schema().num_classes(),
        min_leaf: min_leaf.max(1),
        allow_zero_gain: true,
    };
    let rows: Vec<usize> = (0..ds.len()).collect();
    Ok(ds
        .schema()
        .feature_indices()
        .into_iter()
        .filter_map(|a| candidate(&ctx, &rows, a))
        .collect())
}

fn grow(
    ctx: &GrowContext,
    rows: &[usize],
    fallback: usize,
    sampler: &mut dyn FnMut() -> Vec<usize>,
    nodes: &mut Vec<Node>,
) -> usize {
    let counts = class_counts(ctx, rows);
    let id = nodes.len();
    let class = if rows.is_empty() { fallback } else { argmax_counts(&counts) };
    nodes.push(Node::Leaf {
        counts: counts.clone(),
        class,
    });
    let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
    if pure || rows.len() < 2 * ctx.min_leaf {
        return id;
    }
    let candidates = sampler()
        .into_iter()
        .filter_map(|a| candidate(ctx, rows, a))
        .collect();
    let Some(split) = choose(candidates, ctx.allow_zero_gain) else {
        return id;
    };
    let attr = split.attr;
    match split.kind {
        SplitKind::Threshold(t) => {
            let (mut left, mut right, mut missing) = (Vec::new(), Vec::new(), Vec::new());
            for &r in rows {
                match ctx.ds.value(r, attr).as_f64() {
                    Some(x) if x <= t => left.push(r),
                    Some(_) => right.push(r),
                    None => missing.push(r),
                }
            }
            let missing_left = left.len() >= right.len();
            if missing_left { &mut left } else { &mut right }.extend(missing);
            let l = grow(ctx, &left, class, sampler, nodes);
            let r = grow(ctx, &right, class, sampler, nodes);
            nodes[id] = Node::Numeric {
                attr,
                threshold: t,
                counts,
                left: l,
                right: r,
                missing_left,
            };
        }
        SplitKind::Multiway => {
            let ncat = ctx.ds.schema().attribute(attr).categories().map_or(0, <[_]>::len);
            let mut parts = vec![Vec::new(); ncat];
            let mut missing = Vec::new();
            for &r in rows {
                match ctx.ds.value(r, attr) {
                    Value::Nominal(v) => parts[v].push(r),
                    _ => missing.push(r),
                }
            }
            let sizes: Vec<usize> = parts.iter().map(Vec::len).collect();
            let majority = argmax_counts(&sizes);
            parts[majority].extend(missing);
            let children = parts
                .iter()
                .map(|p| grow(ctx, p, class, sampler, nodes))
                .collect();
            nodes[id] = Node::Nominal {
                attr,
                counts,
                children,
                majority,
            };
        }
    }
    id
}

/// Grows an unpruned tree on `rows` (repeats allowed). `sampler` yields the
/// candidate attributes for each node that is considered for a split.
pub(crate) fn grow_tree(
    ds: &Dataset,
    classes: &[usize],
    rows: &[usize],
    params: &TreeParams,
    sampler: &mut dyn FnMut() -> Vec<usize>,
) -> DecisionTree {
    let ctx = GrowContext {
        ds,
        classes,
        num_classes: ds.schema().num_classes(),
        min_leaf: params.min_leaf,
        allow_zero_gain: params.allow_zero_gain_splits,
    };
    let mut nodes = Vec::new();
    grow(&ctx, rows, 0, sampler, &mut nodes);
    DecisionTree {
        schema: ds.schema().clone(),
        nodes,
    }
}

/// Pessimistic error count of a leaf holding `counts`.
fn leaf_error(counts: &[usize], confidence: f64) -> f64 {
    let n: usize = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let errors = n - counts.iter().max().copied().unwrap_or(0);
    n as f64 * binomial_upper_bound(errors, n, confidence)
}

fn prune_at(nodes: &mut [Node], id: usize, confidence: f64) -> f64 {
    if nodes[id].is_leaf() {
        return leaf_error(nodes[id].counts(), confidence);
    }
    let subtree: f64 = nodes[id]
        .children()
        .into_iter()
        .map(|c| prune_at(nodes, c, confidence))
        .sum();
    let counts = nodes[id].counts().to_vec();
    let as_leaf = leaf_error(&counts, confidence);
    if as_leaf <= subtree + 1e-9 {
        let class = argmax_counts(&counts);
        nodes[id] = Node::Leaf { counts, class };
        as_leaf
    } else {
        subtree
    }
}

impl DecisionTree {
    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> &Node {
        &self.nodes[0]
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_leaf()).count()
    }

    /// Length of the longest root-to-leaf path in edges.
    pub fn depth(&self) -> usize {
        fn go(t: &DecisionTree, id: usize) -> usize {
            t.nodes[id]
                .children()
                .into_iter()
                .map(|c| 1 + go(t, c))
                .max()
                .unwrap_or(0)
        }
        go(self, 0)
    }

    /// Sum of leaf pessimistic error counts at confidence factor `cf`.
    pub fn pessimistic_error(&self, cf: f64) -> f64 {
        self.nodes
            .iter()
            .filter(|n| n.is_leaf())
            .map(|n| leaf_error(n.counts(), cf))
            .sum()
    }

    /// Error-based pruning, bottom-up. Unreachable nodes are dropped and the
    /// rest renumbered in pre-order.
    pub fn pruned(&self, cf: f64) -> DecisionTree {
        let mut nodes = self.nodes.clone();
        prune_at(&mut nodes, 0, cf);
        let mut out = DecisionTree {
            schema: self.schema.clone(),
            nodes: Vec::new(),
        };
        copy_subtree(&nodes, 0, &mut out.nodes);
        out
    }

    /// Index of the leaf a row ends up in.
    pub fn leaf_index(&self, row: &[Value]) -> usize {
        let mut id = 0;
        loop {
            match &self.nodes[id] {
                Node::Leaf { .. } => return id,
                Node::Numeric {
                    attr,
                    threshold,
                    left,
                    right,
                    missing_left,
                    ..
                } => {
                    id = match row[*attr].as_f64() {
                        Some(x) if x <= *threshold => *left,
                        Some(_) => *right,
                        None if *missing_left => *left,
                        None => *right,
                    }
                }
                Node::Nominal {
                    attr,
                    children,
                    majority,
                    ..
                } => {
                    id = match row[*attr] {
                        Value::Nominal(v) => children[v],
                        _ => children[*majority],
                    }
                }
            }
        }
    }

    /// Text rendering in the usual indented `attr <= t` style.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if let Node::Leaf { .. } = self.root() {
            let _ = writeln!(out, ": {}", self.leaf_label(0));
        } else {
            self.render_node(0, 0, &mut out);
        }
        out
    }

    fn leaf_label(&self, id: usize) -> String {
        let Node::Leaf { counts, class } = &self.nodes[id] else {
            unreachable!()
        };
        let n: usize = counts.iter().sum();
        let wrong = n - counts[*class];
        let label = &self.schema.class_labels()[*class];
        if wrong == 0 {
            format!("{label} ({n}.0)")
        } else {
            format!("{label} ({n}.0/{wrong}.0)")
        }
    }

    fn render_node(&self, id: usize, depth: usize, out: &mut String) {
        let indent = "|   ".repeat(depth);
        let branches: Vec<(String, usize)> = match &self.nodes[id] {
            Node::Leaf { .. } => return,
            Node::Numeric {
                attr,
                threshold,
                left,
                right,
                ..
            } => {
                let name = &self.schema.attribute(*attr).name;
                vec![
                    (format!("{name} <= {threshold}"), *left),
                    (format!("{name} > {threshold}"), *right),
                ]
            }
            Node::Nominal { attr, children, .. } => {
                let a = self.schema.attribute(*attr);
                let cats = a.categories().unwrap_or_default();
                children
                    .iter()
                    .zip(cats)
                    .map(|(&c, label)| (format!("{} = {label}", a.name), c))
                    .collect()
            }
        };
        for (test, child) in branches {
            if self.nodes[child].is_leaf() {
                let _ = writeln!(out, "{indent}{test}: {}", self.leaf_label(child));
            } else {
                let _ = writeln!(out, "{indent}{test}");
                self.render_node(child, depth + 1, out);
            }
        }
    }
}

fn copy_subtree(src: &[Node], id: usize, dst: &mut Vec<Node>) -> usize {
    let new_id = dst.len();
    dst.push(src[id].clone());
    match &src[id] {
        Node::Leaf { .. } => {}
        Node::Numeric { left, right, .. } => {
            let l = copy_subtree(src, *left, dst);
            let r = copy_subtree(src, *right, dst);
            if let Node::Numeric { left, right, .. } = &mut dst[new_id] {
                *left = l;
                *right = r;
            }
        }
        Node::Nominal { children, .. } => {
            let mapped: Vec<usize> = children.iter().map(|&c| copy_subtree(src, c, dst)).collect();
            if let Node::Nominal { children, .. } = &mut dst[new_id] {
                *children = mapped;
            }
        }
    }
    new_id
}

pub fn c45_train(ds: &Dataset, params: &TreeParams) -> Result<DecisionTree, ClassifierError> {
    params.validate()?;
    let classes = training_classes(ds)?;
    let features = ds.schema().feature_indices();
    if features.is_empty() {
        return Err(ClassifierError::InvalidParameter("dataset has no features".into()));
    }
    let rows: Vec<usize> = (0..ds.len()).collect();
    let tree = grow_tree(ds, &classes, &rows, params, &mut || features.clone());
    Ok(if params.prune {
        tree.pruned(params.confidence)
    } else {
        tree
    })
}

pub fn c45_predict(t: &DecisionTree, row: &[Value]) -> Result<ClassDistribution, ClassifierError> {
    check_row(&t.schema, row)?;
    let Node::Leaf { counts, class } = &t.nodes[t.leaf_index(row)] else {
        unreachable!()
    };
    Ok(if counts.iter().all(|&c| c == 0) {
        ClassDistribution::one_hot(*class, counts.len())
    } else {
        ClassDistribution::from_counts(counts)
    })
}

impl Classifier for DecisionTree {
    fn schema(&self) -> &Schema {
        &self.schema
    }

    fn predict(&self, row: &[Value]) -> Result<ClassDistribution, ClassifierError> {
        c45_predict(self, row)
    }
}

impl Learner for TreeParams {
    type Model = DecisionTree;

    fn fit(&self, ds: &Dataset) -> Result<DecisionTree, ClassifierError> {
        c45_train(ds, self)
    }
}
