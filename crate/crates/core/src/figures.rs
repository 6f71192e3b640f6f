//! Tabulated data for the three reference figures.

use serde::{Deserialize, Serialize};

use crate::gaussian::DetectorModel;
use crate::keyrate::{achievable_distance, sweep, FiniteSize, RateInputs, SweepAxis};
use crate::modulation::{CorrelationSummary, ZSeries};
use crate::par::Execution;
use crate::{Error, Result};

/// Numeric table with named columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.headers.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// Evenly spaced grid `start, start + step, …` up to `end` inclusive.
pub fn linear_grid(start: f64, end: f64, step: f64) -> Vec<f64> {
    let n = ((end - start) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| start + i as f64 * step).collect()
}

/// Parameters shared by the figures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FigureParams {
    pub eta: f64,
    pub v_el: f64,
    pub trusted: bool,
    pub excess_noise: f64,
    pub distance_km: f64,
    pub series: ZSeries,
}

impl FigureParams {
    /// 50 km, `η = 0.6`, `ξ = 0.01`.
    pub fn figure2() -> Self {
        FigureParams { eta: 0.6, v_el: 0.0, trusted: true, excess_noise: 0.01, distance_km: 50.0, series: ZSeries::default() }
    }

    /// `η = 0.6`, `ξ = 0.005`.
    pub fn figure3() -> Self {
        FigureParams { excess_noise: 0.005, ..FigureParams::figure2() }
    }

    fn detector(&self) -> Result<DetectorModel> {
        DetectorModel::new(self.eta, self.v_el, self.trusted)
    }
}

/// Efficiencies plotted in figure 2.
pub const FIGURE2_BETAS: [f64; 2] = [0.8, 0.9];
/// Efficiency used in figure 3.
pub const FIGURE3_BETA: f64 = 0.8;
/// Block lengths (quadrature coordinates) of figure 3.
pub const FIGURE3_BLOCK_LENGTHS: [u64; 4] = [100_000_000, 10_000_000_000, 1_000_000_000_000, 100_000_000_000_000];

/// Figure 1: equivalent excess noise against `V_A`.
pub fn figure1(grid: &[f64], series: ZSeries) -> Result<Table> {
    let rows = grid
        .iter()
        .map(|&v| {
            let s = CorrelationSummary::compute(v, series)?;
            Ok(vec![v, s.delta_xi, s.z, s.z_tms, s.f])
        })
        .collect::<Result<_>>()?;
    Ok(Table { headers: ["v_a", "delta_xi", "z", "z_tms", "f"].map(String::from).to_vec(), rows })
}

/// Figure 2: asymptotic rate against `V_A`, one column per efficiency.
pub fn figure2(grid: &[f64], betas: &[f64], params: &FigureParams, exec: Execution) -> Result<Table> {
    let det = params.detector()?;
    let mut headers = vec!["v_a".to_string()];
    let mut columns = Vec::new();
    for &beta in betas {
        let mut base = RateInputs::asymptotic(1.0, 1.0, params.excess_noise, det, beta).at_distance(params.distance_km);
        base.series = params.series;
        let reports = sweep(SweepAxis::ModulationVariance, grid, &base, false, exec)?;
        headers.push(format!("k_beta_{beta}"));
        columns.push(reports.iter().map(|r| r.k_asymptotic).collect::<Vec<_>>());
    }
    let rows = grid
        .iter()
        .enumerate()
        .map(|(i, &v)| std::iter::once(v).chain(columns.iter().map(|c| c[i])).collect())
        .collect();
    Ok(Table { headers, rows })
}

fn figure3_base(params: &FigureParams, n_total: u64) -> Result<RateInputs> {
    let mut base = RateInputs::asymptotic(1.0, 1.0, params.excess_noise, params.detector()?, FIGURE3_BETA)
        .with_finite(FiniteSize::new(n_total));
    base.series = params.series;
    Ok(base)
}

/// Figure 3: finite-size rate (optimised over `V_A`) against distance, one
/// column per block length.
pub fn figure3(distances: &[f64], block_lengths: &[u64], params: &FigureParams, exec: Execution) -> Result<Table> {
    if block_lengths.is_empty() {
        return Err(Error::usage("no block lengths"));
    }
    let mut headers = vec!["distance_km".to_string()];
    let mut columns = Vec::new();
    for &n in block_lengths {
        let reports = sweep(SweepAxis::Distance, distances, &figure3_base(params, n)?, true, exec)?;
        headers.push(format!("k_n{n:e}"));
        columns.push(reports.iter().map(|r| r.key_rate()).collect::<Vec<_>>());
    }
    let rows = distances
        .iter()
        .enumerate()
        .map(|(i, &d)| std::iter::once(d).chain(columns.iter().map(|c| c[i])).collect())
        .collect();
    Ok(Table { headers, rows })
}

/// Largest distance with a positive finite-size rate for each block length.
pub fn figure3_reach(block_lengths: &[u64], params: &FigureParams, max_km: f64, exec: Execution) -> Result<Table> {
    let reach = exec.map_slice(block_lengths, |&n| achievable_distance(&figure3_base(params, n)?, max_km, 0.1));
    let rows = block_lengths
        .iter()
        .zip(reach)
        .map(|(&n, d)| Ok(vec![n as f64, d?]))
        .collect::<Result<_>>()?;
    Ok(Table { headers: vec!["n_total".into(), "max_distance_km".into()], rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        let g = linear_grid(0.1, 5.0, 0.1);
        assert_eq!(g.len(), 50);
        assert!((g[49] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn figure1_columns() {
        let t = figure1(&[0.5, 1.0], ZSeries::default()).unwrap();
        assert_eq!(t.headers[..2], ["v_a", "delta_xi"]);
        assert!(t.column("delta_xi").unwrap().iter().all(|&d| d > 0.0));
        assert_eq!(t.rows[1][3], 3f64.sqrt());
    }

    #[test]
    fn figure2_has_one_column_per_beta() {
        let t = figure2(&[0.5, 1.0, 2.0], &FIGURE2_BETAS, &FigureParams::figure2(), Execution::Sequential).unwrap();
        assert_eq!(t.headers, ["v_a", "k_beta_0.8", "k_beta_0.9"]);
        assert!(t.rows.iter().any(|r| r[1] > 0.0));
    }

    #[test]
    fn figure3_headers() {
        let t = figure3(&[20.0], &FIGURE3_BLOCK_LENGTHS, &FigureParams::figure3(), Execution::Parallel).unwrap();
        assert_eq!(t.headers, ["distance_km", "k_n1e8", "k_n1e10", "k_n1e12", "k_n1e14"]);
        assert!(t.rows[0][1..].windows(2).all(|w| w[1] > w[0]));
    }
}
