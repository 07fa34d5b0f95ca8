use serde::{Deserialize, Serialize};

use crate::{Complex, Error, Result};

/// Value of the interpolating polynomial through `(h_i, y_i)` at `h = 0`
/// (Neville's scheme).
pub fn neville_at_zero(hs: &[f64], ys: &[Complex]) -> Complex {
    assert_eq!(hs.len(), ys.len());
    let mut p = ys.to_vec();
    let n = hs.len();
    for level in 1..n {
        for i in 0..n - level {
            let (hi, hj) = (hs[i], hs[i + level]);
            p[i] = (hj * p[i] - hi * p[i + 1]) / (hj - hi);
        }
    }
    p[0]
}

/// Right-derivative estimate at zero from one-sided difference quotients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorEstimate {
    pub value: Complex,
    /// Observed convergence order of the raw quotients, `None` when they agree
    /// to rounding (the quotient is exact).
    pub order_evidence: Option<f64>,
    pub steps_used: Vec<f64>,
}

/// Extrapolates the difference quotients `quotients[i]` taken at
/// `steps[i]` (positive, strictly decreasing) to `h → 0`.
pub fn extrapolate_quotients(steps: &[f64], quotients: &[Complex]) -> Result<GeneratorEstimate> {
    if steps.len() < 2 {
        return Err(Error::InvalidParam("need at least two steps".into()));
    }
    if steps.iter().any(|&h| !(h > 0.0)) || steps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParam("steps must be positive and decreasing".into()));
    }
    let value = neville_at_zero(steps, quotients);
    let scale = quotients.iter().map(|q| q.norm()).fold(1.0, f64::max);
    let diffs: Vec<f64> = quotients.windows(2).map(|w| (w[0] - w[1]).norm()).collect();
    let noise = 1e-13 * scale;
    let order_evidence = if diffs.len() >= 2 && diffs.iter().all(|&d| d > noise) {
        let k = diffs.len();
        let ratio = (steps[k - 2] - steps[k - 1]) / (steps[k - 1] - steps[k]);
        Some((diffs[k - 2] / diffs[k - 1]).ln() / ratio.ln())
    } else {
        None
    };
    // Differences that grow as h shrinks mean the quotients do not settle.
    if diffs.len() >= 2 {
        let k = diffs.len();
        if diffs[k - 1] > 1.5 * diffs[k - 2] && diffs[k - 1] > 1e-6 * scale {
            return Err(Error::NonConvergent {
                what: "difference quotients",
                delta: diffs[k - 1],
            });
        }
    }
    Ok(GeneratorEstimate {
        value,
        order_evidence,
        steps_used: steps.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neville_recovers_polynomials() {
        let hs = [0.1, 0.05, 0.025];
        let f = |h: f64| Complex::new(3.0 - 2.0 * h + 5.0 * h * h, h);
        let ys: Vec<Complex> = hs.iter().map(|&h| f(h)).collect();
        let v = neville_at_zero(&hs, &ys);
        assert!((v - Complex::new(3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn first_order_quotients_report_order_one() {
        let hs = [1e-2f64, 5e-3, 2.5e-3];
        let qs: Vec<Complex> = hs.iter().map(|&h| Complex::new((1.0 - (-h).exp()) / h, 0.0)).collect();
        let est = extrapolate_quotients(&hs, &qs).unwrap();
        assert!((est.value.re - 1.0).abs() < 1e-7);
        let order = est.order_evidence.unwrap();
        assert!((order - 1.0).abs() < 0.05, "order {order}");
    }

    #[test]
    fn constant_quotients_have_no_order() {
        let hs = [1e-2, 5e-3, 2.5e-3];
        let qs = [Complex::new(0.0, 0.0); 3];
        let est = extrapolate_quotients(&hs, &qs).unwrap();
        assert_eq!(est.value, Complex::new(0.0, 0.0));
        assert!(est.order_evidence.is_none());
    }

    #[test]
    fn diverging_quotients_are_rejected() {
        let hs = [1e-2, 5e-3, 2.5e-3];
        let qs: Vec<Complex> = hs.iter().map(|&h| Complex::new(1.0 / h, 0.0)).collect();
        assert!(extrapolate_quotients(&hs, &qs).is_err());
        assert!(extrapolate_quotients(&[1e-2, 2e-2], &qs[..2]).is_err());
    }
}
