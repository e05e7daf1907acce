//! Closed-form rate bounds and the shared kernel-maximum-to-rate formula.
//!
//! All logarithms are base 2; values are in bits per coordinate.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{params, Result};

/// Which bound produced a [`BoundReport`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    FredmanKomlos,
    KornerMarton,
    Dvj,
    Conjecture,
    FromKernelMaximum,
    PsiMax,
    ClusterMax,
    ClusterMin,
}

impl Method {
    pub fn short_name(self) -> &'static str {
        match self {
            Method::FredmanKomlos => "fk",
            Method::KornerMarton => "km",
            Method::Dvj => "dvj",
            Method::Conjecture => "conjecture",
            Method::FromKernelMaximum => "from-m",
            Method::PsiMax => "psimax",
            Method::ClusterMax => "cluster-max",
            Method::ClusterMin => "cluster-min",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        use Method::*;
        [FredmanKomlos, KornerMarton, Dvj, Conjecture, FromKernelMaximum, PsiMax, ClusterMax, ClusterMin]
            .into_iter()
            .find(|m| m.short_name() == s)
            .ok_or_else(|| params(format!("unknown method `{s}`")))
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundParams {
    pub b: usize,
    pub k: usize,
    pub j: Option<usize>,
}

impl BoundParams {
    pub fn new(b: usize, k: usize, j: Option<usize>) -> Result<Self> {
        if k < 3 {
            return Err(params(format!("k must be at least 3, got {k}")));
        }
        if b < k {
            return Err(params(format!("need b >= k, got b={b}, k={k}")));
        }
        Ok(Self { b, k, j })
    }
}

/// A rate upper bound with the quantities that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub method: Method,
    pub value: f64,
    pub params: BoundParams,
    pub epsilon: Option<f64>,
    /// Named intermediate quantities (kernel maxima, minimizing `j`, witnesses, ...).
    pub intermediates: BTreeMap<String, Value>,
    pub notes: Vec<String>,
}

impl BoundReport {
    fn new(method: Method, value: f64, params: BoundParams) -> Self {
        Self {
            method,
            value,
            params,
            epsilon: None,
            intermediates: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.intermediates.insert(key.to_string(), value.into());
        self
    }

    pub fn intermediate_f64(&self, key: &str) -> Option<f64> {
        self.intermediates.get(key).and_then(Value::as_f64)
    }

    pub fn is_conjecture(&self) -> bool {
        self.method == Method::Conjecture
    }
}

/// `b (b-1) ... (b-m+1)`, exact while it fits in `u128`.
pub fn falling_factorial(b: usize, m: usize) -> Option<u128> {
    (0..m).try_fold(1u128, |acc, i| {
        (b as u128).checked_sub(i as u128).and_then(|f| acc.checked_mul(f))
    })
}

/// `b^{(m)} / b^m`, the chance that `m` uniform symbols are pairwise distinct.
pub fn distinct_fraction(b: usize, m: usize) -> f64 {
    match (falling_factorial(b, m), (b as u128).checked_pow(m as u32)) {
        (Some(num), Some(den)) => num as f64 / den as f64,
        _ => (0..m).map(|i| (b - i.min(b)) as f64 / b as f64).product(),
    }
}

fn check_bk(b: usize, k: usize) -> Result<BoundParams> {
    BoundParams::new(b, k, None)
}

/// Fredman–Komlós: `(b^{(k-1)} / b^{k-1}) log(b - k + 2)`.
pub fn fk_bound(b: usize, k: usize) -> Result<BoundReport> {
    let p = check_bk(b, k)?;
    let value = distinct_fraction(b, k - 1) * ((b - k + 2) as f64).log2();
    Ok(BoundReport::new(Method::FredmanKomlos, value, p))
}

/// One term of the Körner–Marton minimum.
pub fn km_term(b: usize, k: usize, j: usize) -> f64 {
    distinct_fraction(b, j + 1) * ((b - j) as f64 / (k - j - 1) as f64).log2()
}

/// Default minimization range `0..=k-2`.
pub fn km_default_range(k: usize) -> RangeInclusive<usize> {
    0..=k.saturating_sub(2)
}

/// Körner–Marton: minimum over `j` in `j_range` of `(b^{(j+1)}/b^{j+1}) log((b-j)/(k-j-1))`.
///
/// Ties keep the smallest `j`; the minimizer is stored under `"j"`.
pub fn km_bound(b: usize, k: usize, j_range: RangeInclusive<usize>) -> Result<BoundReport> {
    let p = check_bk(b, k)?;
    if j_range.is_empty() || *j_range.end() > k - 2 {
        return Err(params(format!(
            "j range {}..={} must be non-empty and within 0..={}",
            j_range.start(),
            j_range.end(),
            k - 2
        )));
    }
    let (j, value) = j_range
        .map(|j| (j, km_term(b, k, j)))
        .fold(None, |best: Option<(usize, f64)>, (j, v)| match best {
            Some((_, bv)) if bv <= v => best,
            _ => Some((j, v)),
        })
        .expect("non-empty range");
    let mut report = BoundReport::new(Method::KornerMarton, value, p).with("j", j);
    report.params.j = Some(j);
    Ok(report)
}

/// The generalized bound with `j = 2`:
/// `(1/log b + b² / ((b² - 3b + 2) log((b-2)/(k-3))))⁻¹`.
pub fn dvj_bound(b: usize, k: usize) -> Result<BoundReport> {
    let mut p = check_bk(b, k)?;
    if k < 4 {
        return Err(params(format!("the j=2 bound needs k >= 4, got {k}")));
    }
    let bf = b as f64;
    let inv = 1.0 / bf.log2()
        + bf * bf / ((bf * bf - 3.0 * bf + 2.0) * ((b - 2) as f64 / (k - 3) as f64).log2());
    p.j = Some(2);
    Ok(BoundReport::new(Method::Dvj, 1.0 / inv, p))
}

/// One term of the conjectured bound.
pub fn conjecture_term(b: usize, k: usize, j: usize) -> f64 {
    let prefix = 1.0 / (b as f64 / (j - 1) as f64).log2();
    let km = 1.0 / (distinct_fraction(b, j + 1) * ((b - j) as f64 / (k - j - 1) as f64).log2());
    1.0 / (prefix + km)
}

/// The conjectured bound: minimum over `2 <= j <= k-2` of
/// `(1/log(b/(j-1)) + b^{j+1} / (b^{(j+1)} log((b-j)/(k-j-1))))⁻¹`. Not a theorem.
pub fn conjecture_bound(b: usize, k: usize) -> Result<BoundReport> {
    let p = check_bk(b, k)?;
    if k < 4 {
        return Err(params(format!("the conjectured bound needs k > 3, got {k}")));
    }
    let (j, value) = (2..=k - 2)
        .map(|j| (j, conjecture_term(b, k, j)))
        .fold(None, |best: Option<(usize, f64)>, (j, v)| match best {
            Some((_, bv)) if bv <= v => best,
            _ => Some((j, v)),
        })
        .expect("k >= 4 gives a non-empty range");
    let mut report = BoundReport::new(Method::Conjecture, value, p).with("j", j);
    report.params.j = Some(j);
    report.notes.push("CONJECTURE: not a proven bound".into());
    Ok(report)
}

/// Rate bound from a bound `M` on the kernel quadratic form:
/// `(2/(M log((b-j)/(k-j-1))) + 1/log(b/(j-1)))⁻¹`.
pub fn rate_bound_from_m(b: usize, k: usize, j: usize, m: f64) -> Result<BoundReport> {
    let mut p = check_bk(b, k)?;
    if j < 2 || j + 2 > k {
        return Err(params(format!("j must lie in 2..={}, got {j}", k - 2)));
    }
    if !(m > 0.0 && m.is_finite()) {
        return Err(params(format!("M must be positive and finite, got {m}")));
    }
    let hansel = ((b - j) as f64 / (k - j - 1) as f64).log2();
    let prefix = (b as f64 / (j - 1) as f64).log2();
    let value = 1.0 / (2.0 / (m * hansel) + 1.0 / prefix);
    p.j = Some(j);
    Ok(BoundReport::new(Method::FromKernelMaximum, value, p).with("M", m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fredman_komlos_by_hand() {
        assert!((fk_bound(3, 3).unwrap().value - 2.0 / 3.0).abs() < 1e-15);
        assert!((fk_bound(4, 4).unwrap().value - 0.375).abs() < 1e-15);
        assert!(fk_bound(4, 5).is_err());
        assert!(fk_bound(4, 2).is_err());
    }

    #[test]
    fn fk_diagonal_decreases() {
        let vals: Vec<f64> = (3..20).map(|b| fk_bound(b, b).unwrap().value).collect();
        assert!(vals.iter().all(|v| *v > 0.0));
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn korner_marton_minimizers() {
        let r = km_bound(5, 4, 0..=2).unwrap();
        assert_eq!(r.params.j, Some(0));
        assert!((r.value - (5.0f64 / 3.0).log2()).abs() < 1e-15);
        assert_eq!(km_bound(6, 6, 0..=4).unwrap().params.j, Some(4));
        assert_eq!(km_bound(11, 10, 0..=8).unwrap().params.j, Some(8));
        assert!(km_bound(5, 4, 0..=3).is_err());
        #[allow(clippy::reversed_empty_ranges)]
        let empty = 2..=1;
        assert!(km_bound(5, 4, empty).is_err());
    }

    #[test]
    fn km_top_term_equals_fk() {
        for b in 3..14 {
            for k in 3..=b {
                let fk = fk_bound(b, k).unwrap().value;
                let km = km_bound(b, k, k - 2..=k - 2).unwrap().value;
                assert!((fk - km).abs() <= 1e-14 * fk.max(1.0), "b={b} k={k}");
            }
        }
    }

    #[test]
    fn dvj_requires_k4() {
        assert!(dvj_bound(5, 3).is_err());
        assert!((dvj_bound(5, 4).unwrap().value - 0.573029).abs() < 1e-6);
    }

    #[test]
    fn rate_formula_golden() {
        let r = rate_bound_from_m(6, 6, 4, 5.0 / 27.0).unwrap();
        assert!((r.value - 5.0 / 59.0).abs() < 1e-15);
        let r = rate_bound_from_m(7, 7, 5, 0.0861594).unwrap();
        assert!((r.value - 0.0408975).abs() < 5e-8);
        let r = rate_bound_from_m(5, 5, 3, 0.3873676).unwrap();
        assert!((r.value - 0.1689325).abs() < 5e-8);
        assert!(rate_bound_from_m(6, 6, 1, 0.2).is_err());
        assert!(rate_bound_from_m(6, 6, 5, 0.2).is_err());
        assert!(rate_bound_from_m(6, 6, 4, 0.0).is_err());
        assert!(rate_bound_from_m(6, 6, 4, -1.0).is_err());
    }

    #[test]
    fn conjecture_cases() {
        let c = conjecture_bound(6, 6).unwrap();
        let direct = rate_bound_from_m(6, 6, 4, 5.0 / 27.0).unwrap().value;
        assert!((conjecture_term(6, 6, 4) - direct).abs() < 1e-15);
        assert!(c.value <= direct + 1e-15);
        assert!(c.is_conjecture());

        let t = 1.0 / (1.0 / (5.0f64 / 2.0).log2() + 625.0 / 120.0);
        assert!((conjecture_term(5, 5, 3) - t).abs() < 1e-15);
        assert!((t - 0.16765).abs() < 1e-5);

        for (b, k) in [(5, 5), (8, 7), (11, 10)] {
            let r = conjecture_bound(b, k).unwrap();
            let brute = (2..=k - 2)
                .map(|j| conjecture_term(b, k, j))
                .fold(f64::INFINITY, f64::min);
            assert_eq!(r.value, brute);
        }
        assert!(conjecture_bound(5, 3).is_err());
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling_factorial(6, 5), Some(720));
        assert_eq!(falling_factorial(3, 4), Some(0));
        assert!(falling_factorial(40, 40).is_none());
        assert!((distinct_fraction(40, 3) - 40.0 * 39.0 * 38.0 / 64000.0).abs() < 1e-15);
    }
}
