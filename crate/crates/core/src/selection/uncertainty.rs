use crate::data::Dataset;
use crate::stats::entropy;

use super::{DiscretizationMap, SelectionError};

/// `2 * IG(a; b) / (H(a) + H(b))` over rows where both codes are known.
/// The pair is put in a canonical order first so the result is exactly
/// symmetric.
pub(crate) fn su_from_codes(a: (&[Option<usize>], usize), b: (&[Option<usize>], usize)) -> f64 {
    let ((ca, ka), (cb, kb)) = (a, b);
    let mut joint = vec![0usize; ka * kb];
    let mut ma = vec![0usize; ka];
    let mut mb = vec![0usize; kb];
    for (x, y) in ca.iter().zip(cb) {
        if let (Some(x), Some(y)) = (x, y) {
            joint[x * kb + y] += 1;
            ma[*x] += 1;
            mb[*y] += 1;
        }
    }
    let (ha, hb) = (entropy(&ma), entropy(&mb));
    let denom = ha + hb;
    if denom <= 0.0 {
        return 0.0;
    }
    let gain = denom - entropy(&joint);
    (2.0 * gain / denom).clamp(0.0, 1.0)
}

/// Symmetric uncertainty between attributes `a` and `b`. Numeric
/// attributes are binned through `dmap`; missing values are dropped pairwise.
pub fn symmetric_uncertainty(ds: &Dataset, a: usize, b: usize, dmap: &DiscretizationMap) -> Result<f64, SelectionError> {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let (ca, ka) = dmap.codes(ds, lo)?;
    let (cb, kb) = dmap.codes(ds, hi)?;
    Ok(su_from_codes((&ca, ka), (&cb, kb)))
}
