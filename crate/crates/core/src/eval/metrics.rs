use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Label;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub positive_class: Label,
    pub confusion: Confusion,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Zero denominators yield 0 rather than NaN.
pub fn compute_metrics(y_true: &[Label], y_pred: &[Label], positive_class: Label) -> Result<Metrics> {
    if y_true.len() != y_pred.len() {
        return Err(Error::invalid_arg(format!(
            "label vectors differ in length: {} vs {}",
            y_true.len(),
            y_pred.len()
        )));
    }
    if y_true.is_empty() {
        return Err(Error::invalid_arg("cannot score an empty prediction set"));
    }
    let mut c = Confusion { tp: 0, fp: 0, tn: 0, fn_: 0 };
    for (&t, &p) in y_true.iter().zip(y_pred) {
        match (t == positive_class, p == positive_class) {
            (true, true) => c.tp += 1,
            (false, true) => c.fp += 1,
            (true, false) => c.fn_ += 1,
            (false, false) => c.tn += 1,
        }
    }
    let (tp, fp, fn_) = (c.tp, c.fp, c.fn_);
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    let f1 = if precision + recall == 0.0 { 0.0 } else { 2.0 * precision * recall / (precision + recall) };
    Ok(Metrics { accuracy: ratio(c.tp + c.tn, y_true.len()), precision, recall, f1, positive_class, confusion: c })
}

pub fn accuracy(y_true: &[Label], y_pred: &[Label]) -> Result<f64> {
    Ok(compute_metrics(y_true, y_pred, 1)?.accuracy)
}
