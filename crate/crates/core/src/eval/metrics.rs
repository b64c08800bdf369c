use crate::error::{Error, Result};

/// Area under the ROC curve via the Mann-Whitney statistic, ties counted
/// one half. `O(n log n)`.
pub fn auc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    let (pos, neg) = class_counts(scores, labels)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    // Sum of (1-based, tie-averaged) ranks of the positives.
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let avg_rank = (i + j) as f64 / 2.0 + 1.0;
        let tied_pos = order[i..=j].iter().filter(|&&k| labels[k]).count();
        rank_sum += avg_rank * tied_pos as f64;
        i = j + 1;
    }
    let (p, q) = (pos as f64, neg as f64);
    Ok((rank_sum - p * (p + 1.0) / 2.0) / (p * q))
}

/// Reference `O(P * Q)` pair-counting AUC.
pub fn auc_pairwise(scores: &[f64], labels: &[bool]) -> Result<f64> {
    let (pos, neg) = class_counts(scores, labels)?;
    let mut wins = 0.0;
    for (sp, _) in scores.iter().zip(labels).filter(|(_, &l)| l) {
        for (sn, _) in scores.iter().zip(labels).filter(|(_, &l)| !l) {
            if sp > sn {
                wins += 1.0;
            } else if sp == sn {
                wins += 0.5;
            }
        }
    }
    Ok(wins / (pos as f64 * neg as f64))
}

fn class_counts(scores: &[f64], labels: &[bool]) -> Result<(usize, usize)> {
    if scores.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: scores.len(),
            actual: labels.len(),
        });
    }
    let pos = labels.iter().filter(|&&l| l).count();
    let neg = labels.len() - pos;
    if pos == 0 {
        return Err(Error::SingleClass {
            present: "negative",
        });
    }
    if neg == 0 {
        return Err(Error::SingleClass {
            present: "positive",
        });
    }
    Ok((pos, neg))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F1Scores {
    pub micro: f64,
    pub macro_: f64,
}

/// Micro- and macro-averaged F1 over multi-label decisions.
///
/// `truth[i]` and `predicted[i]` are the label sets of test node `i`; labels
/// are `0..label_count`. A label with no true and no predicted positives has
/// F1 = 0 in the macro average.
pub fn multilabel_f1(truth: &[Vec<u32>], predicted: &[Vec<u32>], label_count: usize) -> F1Scores {
    let mut tp = vec![0usize; label_count];
    let mut fp = vec![0usize; label_count];
    let mut fnc = vec![0usize; label_count];
    for (t, p) in truth.iter().zip(predicted) {
        for &l in p {
            if t.contains(&l) {
                tp[l as usize] += 1;
            } else {
                fp[l as usize] += 1;
            }
        }
        for &l in t {
            if !p.contains(&l) {
                fnc[l as usize] += 1;
            }
        }
    }
    let f1 = |tp: usize, fp: usize, fnc: usize| {
        let denom = 2 * tp + fp + fnc;
        if denom == 0 {
            0.0
        } else {
            2.0 * tp as f64 / denom as f64
        }
    };
    let micro = f1(tp.iter().sum(), fp.iter().sum(), fnc.iter().sum());
    let macro_ = if label_count == 0 {
        0.0
    } else {
        (0..label_count)
            .map(|l| f1(tp[l], fp[l], fnc[l]))
            .sum::<f64>()
            / label_count as f64
    };
    F1Scores { micro, macro_ }
}
