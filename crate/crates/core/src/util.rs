//! Small numeric helpers shared across modules.

/// Pairwise (cascade) summation.
///
/// Used for every per-mode reduction so that results do not depend on how
/// work is chunked: the reduction tree is a function of the slice length
/// only, which keeps scenario output bit-reproducible.
pub fn pairwise_sum(terms: &[f64]) -> f64 {
    match terms.len() {
        0 => 0.0,
        1 => terms[0],
        2 => terms[0] + terms[1],
        n => {
            let (lo, hi) = terms.split_at(n / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

/// `x * ln(x)` with the measure-zero convention `0 ln 0 = 0`.
pub fn x_ln_x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Shannon entropy of a two-outcome distribution `(p, 1 - p)`, in nats.
pub fn binary_entropy(p: f64) -> f64 {
    -x_ln_x(p) - x_ln_x(1.0 - p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_sequential() {
        let terms: Vec<f64> = (1..=101).map(|k| 1.0 / k as f64).collect();
        let seq: f64 = terms.iter().sum();
        assert!((pairwise_sum(&terms) - seq).abs() < 1e-12);
    }

    #[test]
    fn pairwise_empty_is_zero() {
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn binary_entropy_endpoints() {
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert!((binary_entropy(0.5) - std::f64::consts::LN_2).abs() < 1e-15);
    }
}
