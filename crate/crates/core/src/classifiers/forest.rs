use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Schema, Value};

use super::tree::grow_tree;
use super::{
    check_row, training_classes, ClassDistribution, Classifier, ClassifierError, DecisionTree, Learner, TreeParams,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestParams {
    pub trees: usize,
    /// Features tried per split; `None` means `floor(log2 M) + 1`.
    pub k_per_split: Option<usize>,
    pub seed: u64,
    pub min_leaf: usize,
    /// Train each tree on a bootstrap sample. Turning this off trains every
    /// tree on the full data, which is only useful for testing.
    pub bootstrap: bool,
    pub allow_zero_gain_splits: bool,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            trees: 100,
            k_per_split: None,
            seed: 1,
            min_leaf: 1,
            bootstrap: true,
            allow_zero_gain_splits: false,
        }
    }
}

/// `floor(log2 m) + 1`, for `m >= 1`.
pub fn default_k_per_split(m: usize) -> usize {
    m.max(1).ilog2() as usize + 1
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of tree `index` in a forest with master seed `seed`.
pub fn tree_seed(seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ index)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestTree {
    pub seed: u64,
    pub tree: DecisionTree,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForestModel {
    schema: Schema,
    k_per_split: usize,
    seed: u64,
    trees: Vec<ForestTree>,
}

impl RandomForestModel {
    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn k_per_split(&self) -> usize {
        self.k_per_split
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn trees(&self) -> &[ForestTree] {
        &self.trees
    }

    /// Votes per class.
    pub fn votes(&self, row: &[Value]) -> Result<Vec<usize>, ClassifierError> {
        check_row(&self.schema, row)?;
        let mut votes = vec![0; self.schema.num_classes()];
        for t in &self.trees {
            votes[t.tree.predict_class(row)?.0] += 1;
        }
        Ok(votes)
    }

    /// Copy without tree `i`. Panics when that would leave no trees.
    pub fn without_tree(&self, i: usize) -> Self {
        assert!(self.trees.len() > 1, "a forest needs at least one tree");
        let mut out = self.clone();
        out.trees.remove(i);
        out
    }
}

pub fn rf_train(ds: &Dataset, params: &ForestParams) -> Result<RandomForestModel, ClassifierError> {
    let classes = training_classes(ds)?;
    let features = ds.schema().feature_indices();
    let m = features.len();
    if m == 0 {
        return Err(ClassifierError::InvalidParameter("dataset has no features".into()));
    }
    if params.trees == 0 {
        return Err(ClassifierError::InvalidParameter("a forest needs at least one tree".into()));
    }
    let k = params.k_per_split.unwrap_or_else(|| default_k_per_split(m));
    if k == 0 || k > m {
        return Err(ClassifierError::InvalidParameter(format!(
            "k_per_split must lie in 1..={m}, got {k}"
        )));
    }
    let tree_params = TreeParams {
        min_leaf: params.min_leaf,
        prune: false,
        allow_zero_gain_splits: params.allow_zero_gain_splits,
        ..TreeParams::default()
    };
    tree_params.validate()?;
    let n = ds.len();

    let trees = (0..params.trees as u64)
        .into_par_iter()
        .map(|i| {
            let seed = tree_seed(params.seed, i);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rows: Vec<usize> = if params.bootstrap {
                (0..n).map(|_| rng.random_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            let mut sampler = || {
                let mut picked: Vec<usize> = index::sample(&mut rng, m, k).into_iter().map(|j| features[j]).collect();
                picked.sort_unstable();
                picked
            };
            let tree = grow_tree(ds, &classes, &rows, &tree_params, &mut sampler);
            ForestTree { seed, tree }
        })
        .collect();

    Ok(RandomForestModel {
        schema: ds.schema().clone(),
        k_per_split: k,
        seed: params.seed,
        trees,
    })
}

pub fn rf_predict(m: &RandomForestModel, row: &[Value]) -> Result<ClassDistribution, ClassifierError> {
    let votes = m.votes(row)?;
    Ok(ClassDistribution::from_counts(&votes))
}

impl Classifier for RandomForestModel {
    fn schema(&self) -> &Schema {
        &self.schema
    }

    fn predict(&self, row: &[Value]) -> Result<ClassDistribution, ClassifierError> {
        rf_predict(self, row)
    }
}

impl Learner for ForestParams {
    type Model = RandomForestModel;

    fn fit(&self, ds: &Dataset) -> Result<RandomForestModel, ClassifierError> {
        rf_train(ds, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::c45_train;
    use crate::data::AttributeSpec;

    fn toy() -> Dataset {
        let schema = Schema::new(vec![
            AttributeSpec::numeric("x"),
            AttributeSpec::numeric("y"),
            AttributeSpec::nominal("z", ["a", "b", "c"]),
            AttributeSpec::nominal("c", ["0", "1"]).as_target(),
        ])
        .unwrap();
        let rows = (0..40)
            .map(|i| {
                let x = f64::from(i % 7) + f64::from(i) * 0.1;
                let y = f64::from((i * 13) % 11);
                let z = (i as usize * 5) % 3;
                let c = usize::from(x + y > 9.0);
                vec![Value::Numeric(x), Value::Numeric(y), Value::Nominal(z), Value::Nominal(c)]
            })
            .collect();
        Dataset::new("toy", schema, rows).unwrap()
    }

    #[test]
    fn default_k() {
        assert_eq!(default_k_per_split(13), 4);
        assert_eq!(default_k_per_split(1), 1);
        assert_eq!(default_k_per_split(8), 4);
        assert_eq!(default_k_per_split(7), 3);
    }

    #[test]
    fn degenerate_forest_matches_tree() {
        let ds = toy();
        let f = rf_train(
            &ds,
            &ForestParams {
                trees: 1,
                k_per_split: Some(3),
                bootstrap: false,
                ..ForestParams::default()
            },
        )
        .unwrap();
        let t = c45_train(
            &ds,
            &TreeParams {
                min_leaf: 1,
                prune: false,
                ..TreeParams::default()
            },
        )
        .unwrap();
        assert_eq!(f.trees()[0].tree, t);
        for r in 0..ds.len() {
            assert_eq!(f.predict_class(ds.row(r)).unwrap(), t.predict_class(ds.row(r)).unwrap());
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let ds = toy();
        let p = ForestParams {
            trees: 10,
            seed: 7,
            ..ForestParams::default()
        };
        let a = serde_json::to_string(&rf_train(&ds, &p).unwrap()).unwrap();
        let b = serde_json::to_string(&rf_train(&ds, &p).unwrap()).unwrap();
        assert_eq!(a, b);
        let other = serde_json::to_string(&rf_train(&ds, &ForestParams { seed: 8, ..p }).unwrap()).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn vote_shares() {
        let ds = toy();
        let f = rf_train(
            &ds,
            &ForestParams {
                trees: 9,
                ..ForestParams::default()
            },
        )
        .unwrap();
        for r in 0..ds.len() {
            let v = f.votes(ds.row(r)).unwrap();
            assert_eq!(v.iter().sum::<usize>(), 9);
            let d = f.predict(ds.row(r)).unwrap();
            assert!((d.probability(1) - v[1] as f64 / 9.0).abs() < 1e-15);
            let fewer = f.without_tree(0).votes(ds.row(r)).unwrap();
            for c in 0..2 {
                assert!(v[c].abs_diff(fewer[c]) <= 1);
            }
        }
    }

    #[test]
    fn rejects_bad_params() {
        let ds = toy();
        let bad = |p: ForestParams| rf_train(&ds, &p).is_err();
        assert!(bad(ForestParams { trees: 0, ..ForestParams::default() }));
        assert!(bad(ForestParams { k_per_split: Some(0), ..ForestParams::default() }));
        assert!(bad(ForestParams { k_per_split: Some(4), ..ForestParams::default() }));
    }
}
