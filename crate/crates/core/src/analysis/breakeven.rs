//! Depolarizing-bias breakeven model for a single cut.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::Strategy;

/// Sampling overhead of one CX/CZ cut.
pub const GAMMA: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BreakevenParams {
    /// Per-gate error rate.
    pub p: f64,
    /// Baseline native two-qubit count.
    pub n: f64,
    /// Reduction in native two-qubit count from the cut.
    pub delta_n: f64,
    pub sigma_h: f64,
    /// `|<H>_ideal|`.
    pub h_ideal: f64,
}

impl BreakevenParams {
    pub fn validate(&self) -> Result<()> {
        self.check(false)
    }

    // mse_model also accepts ΔN = 0
    fn check(&self, allow_zero_delta: bool) -> Result<()> {
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::param("p", format!("must lie in (0, 1), got {}", self.p)));
        }
        let lo_ok = if allow_zero_delta {
            self.delta_n >= 0.0
        } else {
            self.delta_n > 0.0
        };
        if !(lo_ok && self.delta_n <= self.n && self.n.is_finite()) {
            return Err(Error::param(
                "delta_n",
                format!("need 0 < ΔN <= N, got ΔN = {} and N = {}", self.delta_n, self.n),
            ));
        }
        if !(self.sigma_h > 0.0 && self.sigma_h.is_finite()) {
            return Err(Error::param("sigma_h", format!("must be positive, got {}", self.sigma_h)));
        }
        if !(self.h_ideal >= 0.0 && self.h_ideal.is_finite()) {
            return Err(Error::param("h_ideal", format!("must be >= 0, got {}", self.h_ideal)));
        }
        Ok(())
    }
}

/// Shared-budget shot count above which the cut circuit has lower MSE.
/// Infinite when `h_ideal` is zero.
pub fn m_star(bp: &BreakevenParams) -> Result<f64> {
    bp.validate()?;
    if bp.h_ideal == 0.0 {
        return Ok(f64::INFINITY);
    }
    let b0 = 1.0 - (-bp.p * bp.n).exp();
    let b1 = 1.0 - (-bp.p * (bp.n - bp.delta_n)).exp();
    let denom = bp.h_ideal * bp.h_ideal * (b0 * b0 - b1 * b1);
    Ok((GAMMA * GAMMA - 1.0) * bp.sigma_h * bp.sigma_h / denom)
}

/// `|<H>_ideal| (1 - exp(-p N))` at `ecr_count` native gates.
pub fn bias(bp: &BreakevenParams, ecr_count: f64) -> f64 {
    bp.h_ideal * (1.0 - (-bp.p * ecr_count).exp())
}

/// `(MSE_base, MSE_QPD)` at `shots` total baseline shots.
pub fn mse_model(bp: &BreakevenParams, shots: u64, strategy: Strategy) -> Result<(f64, f64)> {
    bp.check(true)?;
    if shots == 0 {
        return Err(Error::param("shots", "must be >= 1"));
    }
    let m = shots as f64;
    let var = bp.sigma_h * bp.sigma_h / m;
    let base = bias(bp, bp.n).powi(2) + var;
    let penalty = match strategy {
        Strategy::Shared => GAMMA * GAMMA,
        Strategy::PerSubcircuit => 1.0,
    };
    let qpd = bias(bp, bp.n - bp.delta_n).powi(2) + penalty * var;
    Ok((base, qpd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::Strategy;
    use proptest::prelude::*;
    use proptest::strategy::Strategy as _;

    fn reference() -> BreakevenParams {
        BreakevenParams {
            p: 0.005,
            n: 200.0,
            delta_n: 15.0,
            sigma_h: 7.0,
            h_ideal: 5.0,
        }
    }

    #[test]
    fn reference_point() {
        let m = m_star(&reference()).unwrap();
        assert!(m < 1000.0);
        // evaluated separately in 50-digit arithmetic
        assert!((m / 442.911_919_862_660_44 - 1.0).abs() < 1e-9, "{m}");
    }

    #[test]
    fn zero_signal_is_infinite() {
        let bp = BreakevenParams {
            h_ideal: 0.0,
            ..reference()
        };
        assert_eq!(m_star(&bp).unwrap(), f64::INFINITY);
    }

    #[test]
    fn invalid() {
        for bp in [
            BreakevenParams { p: 0.0, ..reference() },
            BreakevenParams { delta_n: 0.0, ..reference() },
            BreakevenParams { delta_n: 201.0, ..reference() },
            BreakevenParams { sigma_h: 0.0, ..reference() },
        ] {
            assert!(m_star(&bp).is_err(), "{bp:?}");
        }
    }

    #[test]
    fn bias_values() {
        let bp = reference();
        assert_eq!(bias(&bp, 0.0), 0.0);
        assert!((bias(&bp, 200.0) - 5.0 * (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert!((bias(&bp, 200.0) - 3.1606).abs() < 1e-4);
        let sat = BreakevenParams { p: 1e6, ..bp };
        assert_eq!(bias(&sat, 1.0), 5.0);
    }

    #[test]
    fn no_reduction_never_wins_shared() {
        let bp = BreakevenParams { delta_n: 0.0, ..reference() };
        for m in [1, 10, 1000, 1_000_000_000] {
            let (b, q) = mse_model(&bp, m, Strategy::Shared).unwrap();
            assert!(q > b);
        }
    }

    fn arb_bp() -> impl proptest::strategy::Strategy<Value = BreakevenParams> {
        (1e-4..0.05f64, 10.0..400.0f64, 0.01..1.0f64, 0.1..10.0f64, 0.05..10.0f64).prop_map(
            |(p, n, frac, sigma_h, h_ideal)| BreakevenParams {
                p,
                n,
                delta_n: (n * frac).max(1e-3),
                sigma_h,
                h_ideal,
            },
        )
    }

    proptest! {
        #[test]
        fn decreasing_in_delta_n_and_signal(bp in arb_bp(), f in 1.01..2.0f64) {
            let m = m_star(&bp).unwrap();
            let more = BreakevenParams { delta_n: (bp.delta_n * f).min(bp.n), ..bp };
            if more.delta_n > bp.delta_n {
                prop_assert!(m_star(&more).unwrap() < m);
            }
            let louder = BreakevenParams { h_ideal: bp.h_ideal * f, ..bp };
            prop_assert!(m_star(&louder).unwrap() < m);
        }

        #[test]
        fn breakeven_matches_mse(bp in arb_bp()) {
            let m = m_star(&bp).unwrap();
            prop_assume!(m > 2.0 && m < 1e12);
            let below = (m.floor() - 1.0).max(1.0) as u64;
            let above = m.ceil() as u64 + 1;
            let (b, q) = mse_model(&bp, below, Strategy::Shared).unwrap();
            prop_assert!(q >= b);
            let (b, q) = mse_model(&bp, above, Strategy::Shared).unwrap();
            prop_assert!(q < b);
        }

        #[test]
        fn per_subcircuit_always_wins(bp in arb_bp(), m in 1u64..1_000_000) {
            let (b, q) = mse_model(&bp, m, Strategy::PerSubcircuit).unwrap();
            prop_assert!(q < b);
        }
    }
}
