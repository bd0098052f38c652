//! Student-t tests.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TTest {
    pub t: f64,
    /// Two-sided p-value.
    pub p: f64,
    pub dof: f64,
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance; needs two values.
pub fn sample_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// `P(|T| > |t|)` for Student's t with `dof` degrees of freedom.
pub fn two_sided_p(t: f64, dof: f64) -> Result<f64> {
    if !(dof > 0.0) || !t.is_finite() {
        return Err(Error::Statistics("t statistic needs finite t and positive dof"));
    }
    let dist = StudentsT::new(0.0, 1.0, dof).map_err(|_| Error::Statistics("invalid dof"))?;
    Ok((2.0 * dist.sf(t.abs())).min(1.0))
}

/// One-sample t-test of the mean against zero.
pub fn t_test_one_sample(values: &[f64]) -> Result<TTest> {
    if values.len() < 2 {
        return Err(Error::Statistics("one-sample t-test needs at least 2 values"));
    }
    let var = sample_variance(values);
    if !(var > 0.0) {
        return Err(Error::Statistics("one-sample t-test on zero-variance data"));
    }
    let n = values.len() as f64;
    let t = mean(values) / (var / n).sqrt();
    let dof = n - 1.0;
    Ok(TTest { t, p: two_sided_p(t, dof)?, dof })
}

/// Welch's unequal-variance two-sample t-test of `mean(a) - mean(b)`.
pub fn t_test_two_sample(a: &[f64], b: &[f64]) -> Result<TTest> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::Statistics("two-sample t-test needs at least 2 values per group"));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (va, vb) = (sample_variance(a) / na, sample_variance(b) / nb);
    let se2 = va + vb;
    if !(se2 > 0.0) {
        return Err(Error::Statistics("two-sample t-test on zero-variance data"));
    }
    let t = (mean(a) - mean(b)) / se2.sqrt();
    let dof = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    Ok(TTest { t, p: two_sided_p(t, dof)?, dof })
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::gamma::ln_gamma;

    /// `P(|T| > t)` by Simpson quadrature of the density over `[0, t]`.
    fn p_by_quadrature(t: f64, dof: f64) -> f64 {
        let norm = (ln_gamma((dof + 1.0) / 2.0) - ln_gamma(dof / 2.0)).exp() / (dof * std::f64::consts::PI).sqrt();
        let f = |x: f64| norm * (1.0 + x * x / dof).powf(-(dof + 1.0) / 2.0);
        let n = 20_000;
        let h = t / n as f64;
        let mut s = f(0.0) + f(t);
        for i in 1..n {
            s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        1.0 - 2.0 * s * h / 3.0
    }

    #[test]
    fn cdf_matches_quadrature() {
        for &dof in &[1.0, 2.0, 3.5, 5.0, 10.0, 30.0, 100.0] {
            for &t in &[0.1, 0.5, 1.0, 2.0, 3.0, 5.0] {
                let want = p_by_quadrature(t, dof);
                let got = two_sided_p(t, dof).unwrap();
                assert!((want - got).abs() < 1e-6, "t={t} dof={dof}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn table_critical_values() {
        // two-sided critical values from a printed t-table
        for (t, dof, alpha) in [(12.706, 1.0, 0.05), (2.776, 4.0, 0.05), (2.228, 10.0, 0.05), (3.169, 10.0, 0.01), (2.845, 20.0, 0.01)] {
            let p = two_sided_p(t, dof).unwrap();
            assert!((p - alpha).abs() < 2e-4 * (1.0 + alpha * 100.0), "t={t} dof={dof}: {p}");
        }
    }

    #[test]
    fn one_sample() {
        let r = t_test_one_sample(&[-1.0, 1.0, -1.0, 1.0]).unwrap();
        assert_eq!((r.t, r.p), (0.0, 1.0));
        let r = t_test_one_sample(&[1.0, 1.0, 1.0, 1.0, 1.0001, 0.9999]).unwrap();
        assert!(r.p < 1e-3);
        let r = t_test_one_sample(&[0.0, 2.0]).unwrap();
        assert!((r.t - 1.0).abs() < 1e-15);
        assert!((r.p - 0.5).abs() < 1e-12);
        // reference values from an independent statistics package
        let r = t_test_one_sample(&[3.0, -1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0]).unwrap();
        assert!((r.t - 3.292_661_632_502_042_6).abs() < 1e-12);
        assert!((r.p - 0.013_253_878_484_109_437).abs() < 1e-8);
        assert!(t_test_one_sample(&[1.0]).is_err());
        assert!(t_test_one_sample(&[2.0, 2.0, 2.0]).is_err());
    }

    #[test]
    fn welch() {
        let a = [1.0, 3.0, 2.0, 5.0];
        let r = t_test_two_sample(&a, &a).unwrap();
        assert_eq!((r.t, r.p), (0.0, 1.0));
        let b: Vec<f64> = a.iter().map(|x| x + 1000.0).collect();
        assert!(t_test_two_sample(&b, &a).unwrap().p < 1e-6);

        let cases: [(&[f64], &[f64], f64, f64, f64); 3] = [
            (&[5.1, 4.9, 5.6, 5.8, 6.0, 5.2], &[4.1, 4.4, 4.0, 4.6, 4.9], 4.286_579_171_584_71, 0.002_037_953_586_580_49, 8.985_176_851_251_138),
            (&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.0, 4.0, 6.0, 8.0, 10.0, 12.0], -2.376_354_103_144_018_3, 0.049_284_338_206_730_49, 6.972_255_729_794_934),
            (&[0.2, -0.1, 0.4, 0.3], &[0.1, 0.0, -0.2, 0.05, 0.15, -0.1, 0.0], 1.709_309_547_868_607_3, 0.161_342_603_861_442_2, 4.069_856_901_061_702),
        ];
        for (a, b, t, p, dof) in cases {
            let r = t_test_two_sample(a, b).unwrap();
            assert!((r.t - t).abs() < 1e-10, "{r:?}");
            assert!((r.dof - dof).abs() < 1e-9, "{r:?}");
            assert!((r.p - p).abs() < 1e-8, "{r:?}");
        }
    }
}
