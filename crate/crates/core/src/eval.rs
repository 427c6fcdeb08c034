//! Precision / recall / F-score evaluation of a candidate compression
//! against a reference, plus compression-rate accounting.

use crate::tokens::TokenSeq;
use std::collections::HashMap;

/// Token-overlap report. `a` counts tokens shared by candidate and reference
/// (multiset intersection, case-sensitive, punctuation included), `b` tokens
/// only in the reference, `c` tokens only in the candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub precision: f64,
    pub recall: f64,
    pub f: f64,
    pub mu: f64,
    pub compression_rate: Option<f64>,
}

fn counts(tokens: &[String]) -> HashMap<&str, usize> {
    let mut m = HashMap::new();
    for t in tokens {
        *m.entry(t.as_str()).or_insert(0) += 1;
    }
    m
}

/// F_mu between a candidate and a reference compression.
pub fn fscore(candidate: &TokenSeq, reference: &TokenSeq, mu: f64) -> EvalReport {
    assert!(mu >= 0.0, "preference parameter must be nonnegative");
    let cand = counts(candidate.tokens());
    let rf = counts(reference.tokens());
    let a: usize = cand
        .iter()
        .map(|(w, &n)| n.min(rf.get(w).copied().unwrap_or(0)))
        .sum();
    let c = candidate.len() - a;
    let b = reference.len() - a;

    let precision = if a + c > 0 {
        a as f64 / (a + c) as f64
    } else if a + b == 0 {
        1.0
    } else {
        0.0
    };
    let recall = if a + b > 0 {
        a as f64 / (a + b) as f64
    } else if a + c == 0 {
        1.0
    } else {
        0.0
    };
    let f = if a == 0 {
        if b == 0 && c == 0 {
            1.0
        } else {
            0.0
        }
    } else {
        let denom = mu * mu * precision + recall;
        if denom > 0.0 {
            (mu * mu + 1.0) * precision * recall / denom
        } else {
            0.0
        }
    };
    EvalReport {
        a,
        b,
        c,
        precision,
        recall,
        f,
        mu,
        compression_rate: None,
    }
}

/// Ratio of retained tokens to original tokens.
pub fn compression_rate(candidate: &TokenSeq, original: &TokenSeq) -> f64 {
    candidate.len() as f64 / original.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> TokenSeq {
        TokenSeq::parse(s).unwrap()
    }

    #[test]
    fn worked_example() {
        // Reference and candidate of the published worked example; '.' counts
        // as a matched token and "The" does not match "the".
        let reference = seq("The aim is to give councils control over the growth of homes .");
        let candidate = seq("aim is to give councils some control .");
        let r = fscore(&candidate, &reference, 1.0);
        assert_eq!((r.a, r.b, r.c), (7, 6, 1));
        assert!((r.precision - 0.875).abs() < 1e-3);
        assert!((r.recall - 0.538).abs() < 1e-3);
        assert!((r.f - 0.667).abs() < 1e-3);
    }

    #[test]
    fn identical_sequences() {
        let s = seq("a b c .");
        let r = fscore(&s, &s, 1.0);
        assert_eq!((r.precision, r.recall, r.f), (1.0, 1.0, 1.0));
    }

    #[test]
    fn disjoint_sequences() {
        let r = fscore(&seq("x y"), &seq("a b"), 1.0);
        assert_eq!(r.a, 0);
        assert_eq!(r.f, 0.0);
    }

    #[test]
    fn multiset_accounting() {
        let cand = seq("the the cat");
        let rf = seq("the cat sat");
        let r = fscore(&cand, &rf, 1.0);
        // one "the" matches, the duplicate does not
        assert_eq!((r.a, r.b, r.c), (2, 1, 1));
        assert_eq!(r.a + r.c, cand.len());
        assert_eq!(r.a + r.b, rf.len());
    }

    #[test]
    fn symmetry_swaps_p_and_r() {
        let x = seq("a b c d");
        let y = seq("a b e");
        let r1 = fscore(&x, &y, 1.0);
        let r2 = fscore(&y, &x, 1.0);
        assert!((r1.precision - r2.recall).abs() < 1e-12);
        assert!((r1.recall - r2.precision).abs() < 1e-12);
        assert!((r1.f - r2.f).abs() < 1e-12);
    }

    #[test]
    fn mu_monotone_between_p_and_r() {
        let cand = seq("a b c d e f g h");
        let rf = seq("a b c d x y");
        let lo = fscore(&cand, &rf, 1e-3);
        let mid = fscore(&cand, &rf, 1.0);
        let hi = fscore(&cand, &rf, 1e3);
        // P = 4/8 = 0.5, R = 4/6; F_mu runs from P to R as mu grows
        assert!((lo.f - lo.precision).abs() < 1e-3);
        assert!((hi.f - hi.recall).abs() < 1e-3);
        assert!(lo.f < mid.f && mid.f < hi.f);
    }

    #[test]
    fn compression_rates() {
        let orig = seq("a b c d e f g h i j");
        assert!((compression_rate(&seq("a b c d e f g"), &orig) - 0.7).abs() < 1e-12);
        assert!((compression_rate(&orig, &orig) - 1.0).abs() < 1e-12);
    }
}
