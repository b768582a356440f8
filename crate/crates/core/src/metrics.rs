//! Confusion counts, per-replication proportions and their Monte-Carlo rate
//! estimates.
//!
//! Every ratio follows the `0/0 = 0` convention, so all functionals are total.
//! Rates are arithmetic means of per-replication proportions; standard errors
//! are `sd / sqrt(R)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primitives::{mean, sample_std, SelectionMask};

/// k values reported when none are configured.
pub const DEFAULT_KS: [usize; 3] = [1, 2, 5];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    /// `|Î \ I*|`
    pub false_pos: usize,
    /// `|I* \ Î|`
    pub false_neg: usize,
    pub selected_size: usize,
    pub active_size: usize,
    pub n: usize,
}

impl ConfusionCounts {
    /// Checks the count invariants; used when counts come from outside
    /// (e.g. a CSV file).
    pub fn validate(&self) -> Result<()> {
        let ok = self.active_size <= self.n
            && self.selected_size <= self.n
            && self.false_pos <= self.selected_size.min(self.n - self.active_size)
            && self.false_neg <= self.active_size
            && self.selected_size - self.false_pos == self.active_size - self.false_neg;
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("inconsistent confusion counts {self:?}")))
        }
    }

    pub fn hamming(&self) -> usize {
        self.false_pos + self.false_neg
    }
}

#[inline]
fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Per-replication proportions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProportionSet {
    pub fdp: f64,
    pub fpp: f64,
    pub ndp: f64,
    pub fnp: f64,
    pub hamming_loss: usize,
}

/// Exact set-difference counts between a selection and the active set.
pub fn confusion(selected: &SelectionMask, active: &SelectionMask) -> Result<ConfusionCounts> {
    let false_pos = selected.difference_len(active)?;
    let false_neg = active.difference_len(selected)?;
    Ok(ConfusionCounts {
        false_pos,
        false_neg,
        selected_size: selected.len(),
        active_size: active.len(),
        n: selected.n(),
    })
}

pub fn proportions(c: &ConfusionCounts) -> ProportionSet {
    ProportionSet {
        fdp: ratio(c.false_pos, c.selected_size),
        fpp: ratio(c.false_pos, c.n - c.active_size),
        ndp: ratio(c.false_neg, c.active_size),
        fnp: ratio(c.false_neg, c.n - c.selected_size),
        hamming_loss: c.hamming(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardErrors {
    pub fdr: f64,
    pub fpr: f64,
    pub ndr: f64,
    pub fnr: f64,
    pub hamming_risk: f64,
}

/// Aggregated rates over replications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub fdr: f64,
    pub fpr: f64,
    pub ndr: f64,
    pub fnr: f64,
    /// `[FDR+NDR, FDR+FNR, FPR+NDR, FPR+FNR]`
    pub mtr: [f64; 4],
    /// Mean Hamming loss `R_H`.
    pub hamming_risk: f64,
    /// Mean number of false positives `R_FP`.
    pub mean_false_pos: f64,
    /// Mean number of false negatives `R_FN`.
    pub mean_false_neg: f64,
    /// `P(false_pos ≥ k)`
    pub kfwer: BTreeMap<usize, f64>,
    /// `P(false_neg ≥ k)`
    pub kfwnr: BTreeMap<usize, f64>,
    pub replications: usize,
    pub standard_errors: StandardErrors,
}

/// Averages per-replication proportions in replication order.
///
/// `k = 1` (the ordinary FWER) is always reported, whether or not it is in
/// `ks`.
pub fn aggregate(per_rep: &[ConfusionCounts], ks: &[usize]) -> Result<RateReport> {
    let first = per_rep.first().ok_or(Error::Empty("aggregate needs at least one replication"))?;
    if let Some(c) = per_rep.iter().find(|c| c.n != first.n) {
        return Err(Error::Dimension { expected: first.n, got: c.n });
    }
    if ks.contains(&0) {
        return Err(Error::invalid("kfwer_ks", "k must be >= 1"));
    }

    let props: Vec<ProportionSet> = per_rep.iter().map(proportions).collect();
    let column = |f: fn(&ProportionSet) -> f64| -> Vec<f64> { props.iter().map(f).collect() };
    let fdp = column(|p| p.fdp);
    let fpp = column(|p| p.fpp);
    let ndp = column(|p| p.ndp);
    let fnp = column(|p| p.fnp);
    let ham = column(|p| p.hamming_loss as f64);
    let fp: Vec<f64> = per_rep.iter().map(|c| c.false_pos as f64).collect();
    let fneg: Vec<f64> = per_rep.iter().map(|c| c.false_neg as f64).collect();

    let r = per_rep.len();
    let se = |v: &[f64]| sample_std(v) / (r as f64).sqrt();
    let (fdr, fpr, ndr, fnr) = (mean(&fdp), mean(&fpp), mean(&ndp), mean(&fnp));

    let mut all_ks: Vec<usize> = ks.to_vec();
    all_ks.push(1);
    all_ks.sort_unstable();
    all_ks.dedup();
    let exceed = |k: usize, f: fn(&ConfusionCounts) -> usize| {
        per_rep.iter().filter(|c| f(c) >= k).count() as f64 / r as f64
    };
    let kfwer = all_ks.iter().map(|&k| (k, exceed(k, |c| c.false_pos))).collect();
    let kfwnr = all_ks.iter().map(|&k| (k, exceed(k, |c| c.false_neg))).collect();

    Ok(RateReport {
        fdr,
        fpr,
        ndr,
        fnr,
        mtr: [fdr + ndr, fdr + fnr, fpr + ndr, fpr + fnr],
        hamming_risk: mean(&ham),
        mean_false_pos: mean(&fp),
        mean_false_neg: mean(&fneg),
        kfwer,
        kfwnr,
        replications: r,
        standard_errors: StandardErrors {
            fdr: se(&fdp),
            fpr: se(&fpp),
            ndr: se(&ndp),
            fnr: se(&fnp),
            hamming_risk: se(&ham),
        },
    })
}

impl RateReport {
    /// CSV header: `fdr,fpr,ndr,fnr,mtr1,…,mtr4,hamming_risk,kfwer_k…,kfwnr_k…`.
    pub fn csv_header(&self) -> String {
        let mut cols: Vec<String> = ["fdr", "fpr", "ndr", "fnr", "mtr1", "mtr2", "mtr3", "mtr4", "hamming_risk"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        cols.extend(self.kfwer.keys().map(|k| format!("kfwer_{k}")));
        cols.extend(self.kfwnr.keys().map(|k| format!("kfwnr_{k}")));
        cols.join(",")
    }

    /// One CSV row matching [`RateReport::csv_header`].
    pub fn csv_row(&self) -> String {
        let mut vals = vec![self.fdr, self.fpr, self.ndr, self.fnr];
        vals.extend(self.mtr);
        vals.push(self.hamming_risk);
        vals.extend(self.kfwer.values());
        vals.extend(self.kfwnr.values());
        vals.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    }
}
