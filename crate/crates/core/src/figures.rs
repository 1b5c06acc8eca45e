//! Preset sweeps for the six standard concurrence plots.
//!
//! All presets use zero Larmor frequencies. Temperature axes default to a
//! logarithmic `tau` grid over `[0.05, 50]` with 200 points.

use crate::error::{Error, Result};
use crate::spectrum::ChainSpec;
use crate::sweep::{Engine, PairSelector, SweepMode, SweepRequest, VaryRange};

/// Temperature grid shared by the temperature-axis figures.
pub const TAU_GRID: VaryRange = VaryRange {
    start: 0.05,
    stop: 50.0,
    count: 200,
    scale: crate::sweep::Scale::Log,
};

/// Low-temperature point used where a figure fixes `beta D1 / 2`; also the
/// assumed temperature of the homogeneous site-profile figure, which does
/// not state one.
pub const LOW_TAU: f64 = 30.0;

/// Coupling-ratio grid of the ratio figure.
pub const DELTA_GRID: VaryRange = VaryRange {
    start: 0.1,
    stop: 10.0,
    count: 200,
    scale: crate::sweep::Scale::Log,
};

/// Chain lengths of the length-parity figures.
pub const PARITY_LENGTHS: [usize; 6] = [3, 4, 6, 7, 100, 105];

/// One curve of a figure, written to `<file_stem>.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureCurve {
    pub file_stem: String,
    pub request: SweepRequest,
    pub notes: Vec<String>,
}

impl FigureCurve {
    pub fn metadata(&self) -> Vec<String> {
        let mut lines = self.request.metadata();
        lines.extend(self.notes.iter().cloned());
        lines
    }
}

fn zero_field(n: usize, delta: f64, tau: f64) -> ChainSpec {
    ChainSpec {
        n_spins: n,
        omega_odd: 0.0,
        omega_even: 0.0,
        delta,
        tau,
    }
}

fn curve(file_stem: String, request: SweepRequest, notes: &[&str]) -> FigureCurve {
    let mut all = vec!["zero Larmor frequencies".to_string()];
    all.extend(notes.iter().map(|s| s.to_string()));
    FigureCurve {
        file_stem,
        request,
        notes: all,
    }
}

fn temperature(n: usize, delta: f64, pair: (usize, usize)) -> SweepRequest {
    SweepRequest {
        mode: SweepMode::Temperature,
        base: zero_field(n, delta, 0.0),
        range: Some(TAU_GRID),
        pairs: PairSelector::Explicit(pair.0, pair.1),
        engine: Engine::Fastpath,
    }
}

fn site_profile(n: usize, delta: f64, tau: f64) -> SweepRequest {
    SweepRequest {
        mode: SweepMode::Site,
        base: zero_field(n, delta, tau),
        range: None,
        pairs: PairSelector::NearestNeighbors,
        engine: Engine::Fastpath,
    }
}

/// Curves for figure `id` (1 to 6).
pub fn figure_preset(id: u8) -> Result<Vec<FigureCurve>> {
    let fmt_delta = |d: f64| format!("{d}").replace('.', "p");
    let curves = match id {
        1 => vec![curve(
            "fig1_n101_delta1p5_pair2-3".into(),
            temperature(101, 1.5, (2, 3)),
            &["tau grid 0.05..50 log, 200 points (default)"],
        )],
        2 => vec![curve(
            "fig2_n100_homogeneous".into(),
            site_profile(100, 1.0, LOW_TAU),
            &["assumption: tau=30, temperature not stated for this figure"],
        )],
        3 => [1.0, 1.17, 3.0]
            .iter()
            .map(|&d| {
                curve(
                    format!("fig3_n17_delta{}", fmt_delta(d)),
                    site_profile(17, d, LOW_TAU),
                    &["tau=30 (beta D1 / 2 = 30)"],
                )
            })
            .collect(),
        4 => [(1, 2), (2, 3)]
            .iter()
            .map(|&(i, j)| {
                curve(
                    format!("fig4_n55_pair{i}-{j}"),
                    SweepRequest {
                        mode: SweepMode::Delta,
                        base: zero_field(55, 1.0, LOW_TAU),
                        range: Some(DELTA_GRID),
                        pairs: PairSelector::Explicit(i, j),
                        engine: Engine::Fastpath,
                    },
                    &["tau=30", "delta grid 0.1..10 log, 200 points (default)"],
                )
            })
            .collect(),
        5 | 6 => {
            let pair = if id == 5 { (1, 2) } else { (2, 3) };
            PARITY_LENGTHS
                .iter()
                .map(|&n| {
                    curve(
                        format!("fig{id}_n{n}_pair{}-{}", pair.0, pair.1),
                        temperature(n, 1.0, pair),
                        &["homogeneous chain", "tau grid 0.05..50 log, 200 points (default)"],
                    )
                })
                .collect()
        }
        other => return Err(Error::InvalidRequest(format!("no figure preset {other}; valid ids are 1-6"))),
    };
    Ok(curves)
}
