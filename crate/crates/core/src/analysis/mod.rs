//! Breakeven model, statistics and experiment drivers.

pub mod bench;
mod breakeven;
pub mod failure;
pub mod stats;

use std::io::Write;

use serde::{Serialize, Serializer};

use crate::error::Result;

pub use breakeven::{bias, m_star, mse_model, BreakevenParams, GAMMA};
pub use stats::{t_test_one_sample, t_test_two_sample, TTest};

/// Writes infinities as the string `"inf"` so JSON stays valid.
pub fn serialize_inf<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_infinite() && *x > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BreakevenRow {
    #[serde(flatten)]
    pub params: BreakevenParams,
    #[serde(serialize_with = "serialize_inf")]
    pub m_star: f64,
}

/// `M*` over every `(ΔN, H_ideal)` pair, ΔN outermost. Points with ΔN
/// outside `(0, N]` are skipped.
pub fn breakeven_grid(
    p: f64,
    n: f64,
    sigma_h: f64,
    delta_ns: &[f64],
    h_ideals: &[f64],
) -> Result<Vec<BreakevenRow>> {
    let mut rows = Vec::new();
    for &delta_n in delta_ns {
        for &h_ideal in h_ideals {
            let params = BreakevenParams {
                p,
                n,
                delta_n,
                sigma_h,
                h_ideal,
            };
            if delta_n <= 0.0 || delta_n > n {
                continue;
            }
            rows.push(BreakevenRow {
                params,
                m_star: m_star(&params)?,
            });
        }
    }
    Ok(rows)
}

/// `breakeven.csv`: `p,n,delta_n,sigma_h,h_ideal,m_star`, infinite
/// thresholds written as `inf`.
pub fn write_breakeven_csv<W: Write>(rows: &[BreakevenRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["p", "n", "delta_n", "sigma_h", "h_ideal", "m_star"])?;
    for r in rows {
        let b = r.params;
        let m = if r.m_star.is_infinite() {
            "inf".to_string()
        } else {
            r.m_star.to_string()
        };
        w.write_record([
            b.p.to_string(),
            b.n.to_string(),
            b.delta_n.to_string(),
            b.sigma_h.to_string(),
            b.h_ideal.to_string(),
            m,
        ])?;
    }
    w.flush()?;
    Ok(())
}
