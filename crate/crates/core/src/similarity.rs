//! Dimension-wise concept similarity.
//!
//! Two senses are compared filler by filler along each dimension. Only
//! fillers both senses carry contribute; unshared fillers are ignored
//! entirely, and a dimension with no shared filler scores 0.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{ConceptSense, DimensionTag};
use crate::store::{Snapshot, WeightedFiller};

/// A matched pair of weighted fillers.
#[derive(Clone, Debug, PartialEq)]
pub struct FeaturePair {
    pub left: WeightedFiller,
    pub right: WeightedFiller,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeatureSet {
    pub dimension: DimensionTag,
    pub pairs: Vec<FeaturePair>,
}

impl FeatureSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

pub fn feature_set(c1: &ConceptSense, c2: &ConceptSense, dimension: DimensionTag, s: &Snapshot) -> FeatureSet {
    let p1 = s.profile(c1);
    let p2 = s.profile(c2);
    let right: BTreeMap<&str, &WeightedFiller> = p2
        .get(dimension)
        .iter()
        .map(|wf| (wf.filler.as_str(), wf))
        .collect();
    let pairs = p1
        .get(dimension)
        .iter()
        .filter_map(|l| {
            right.get(l.filler.as_str()).map(|r| FeaturePair {
                left: l.clone(),
                right: (*r).clone(),
            })
        })
        .collect();
    FeatureSet { dimension, pairs }
}

/// `1 - |w1 - w2|` when the fillers agree, 0 otherwise.
pub fn f_similarity(pair: &FeaturePair) -> f64 {
    if pair.left.filler == pair.right.filler {
        1.0 - (pair.left.weight - pair.right.weight).abs()
    } else {
        0.0
    }
}

/// Mean pair similarity over the feature set; 0 when nothing is shared.
pub fn d_similarity(c1: &ConceptSense, c2: &ConceptSense, dimension: DimensionTag, s: &Snapshot) -> f64 {
    let fs = feature_set(c1, c2, dimension, s);
    if fs.is_empty() {
        return 0.0;
    }
    fs.pairs.iter().map(f_similarity).sum::<f64>() / fs.len() as f64
}

/// Mean of [`d_similarity`] over `dims`, uniform unless `dim_weights` is
/// given. Dimensions missing from `dim_weights` weigh 0.
pub fn c_similarity(
    c1: &ConceptSense,
    c2: &ConceptSense,
    dims: &[DimensionTag],
    dim_weights: Option<&BTreeMap<DimensionTag, f64>>,
    s: &Snapshot,
) -> Result<f64> {
    if dims.is_empty() {
        return Err(Error::EmptyDimensionList);
    }
    let weights: Vec<f64> = match dim_weights {
        None => vec![1.0; dims.len()],
        Some(map) => {
            let w: Vec<f64> = dims.iter().map(|d| map.get(d).copied().unwrap_or(0.0)).collect();
            if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
                return Err(Error::InvalidDimensionWeights("weights must be finite and >= 0".into()));
            }
            if w.iter().sum::<f64>() <= 0.0 {
                return Err(Error::InvalidDimensionWeights(
                    "weights over the selected dimensions sum to 0".into(),
                ));
            }
            w
        }
    };
    let total: f64 = weights.iter().sum();
    let score = dims
        .iter()
        .zip(&weights)
        .map(|(d, w)| w * d_similarity(c1, c2, *d, s))
        .sum::<f64>()
        / total;
    Ok(score)
}
