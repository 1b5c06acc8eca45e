//! Parameter sweeps and the CSV record format.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use crate::correlator::{greens_matrix, reduced_density_matrix};
use crate::ed::{Oracle, ORACLE_MAX_SPINS};
use crate::entanglement::concurrence_xstate;
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::spectrum::{build_one_particle_matrix, numeric_spectrum, ChainSpec, Spectrum};

pub const CSV_HEADER: &str = "n,omega1,omega2,delta,tau,i,j,a,b,c,d,x,concurrence,source";

/// Which evaluator produces a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    /// Free-fermion path for bonds, oracle for longer range pairs when the
    /// chain is small enough.
    #[default]
    Auto,
    Fastpath,
    Oracle,
}

impl FromStr for Engine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Self::Auto),
            "fastpath" => Ok(Self::Fastpath),
            "oracle" => Ok(Self::Oracle),
            other => Err(Error::InvalidRequest(format!("unknown engine '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Fastpath,
    Oracle,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Fastpath => "fastpath",
            Source::Oracle => "oracle",
        })
    }
}

impl FromStr for Source {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fastpath" => Ok(Self::Fastpath),
            "oracle" => Ok(Self::Oracle),
            other => Err(Error::InvalidRequest(format!("unknown source '{other}'"))),
        }
    }
}

/// One CSV row: chain parameters, pair, X-state entries and concurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub spec: ChainSpec,
    pub i: usize,
    pub j: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub x: f64,
    pub concurrence: f64,
    pub source: Source,
}

fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

impl SweepRecord {
    pub fn to_csv_row(&self) -> String {
        let s = &self.spec;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            s.n_spins,
            sci(s.omega_odd),
            sci(s.omega_even),
            sci(s.delta),
            sci(s.tau),
            self.i,
            self.j,
            sci(self.a),
            sci(self.b),
            sci(self.c),
            sci(self.d),
            sci(self.x),
            sci(self.concurrence),
            self.source
        )
    }

    pub fn from_csv_row(line: &str) -> Result<Self> {
        let fields: Vec<&str> = line.trim_end().split(',').collect();
        if fields.len() != 14 {
            return Err(Error::InvalidRequest(format!(
                "expected 14 CSV fields, got {}",
                fields.len()
            )));
        }
        let float = |k: usize| {
            fields[k]
                .parse::<f64>()
                .map_err(|e| Error::InvalidRequest(format!("field {k}: {e}")))
        };
        let int = |k: usize| {
            fields[k]
                .parse::<usize>()
                .map_err(|e| Error::InvalidRequest(format!("field {k}: {e}")))
        };
        Ok(Self {
            spec: ChainSpec {
                n_spins: int(0)?,
                omega_odd: float(1)?,
                omega_even: float(2)?,
                delta: float(3)?,
                tau: float(4)?,
            },
            i: int(5)?,
            j: int(6)?,
            a: float(7)?,
            b: float(8)?,
            c: float(9)?,
            d: float(10)?,
            x: float(11)?,
            concurrence: float(12)?,
            source: fields[13].parse()?,
        })
    }
}

/// Write `#`-prefixed metadata lines, the header and all records.
pub fn write_csv<W: Write>(mut out: W, metadata: &[String], records: &[SweepRecord]) -> io::Result<()> {
    for line in metadata {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.to_csv_row())?;
    }
    Ok(())
}

/// Parse records from CSV text, skipping comments and the header.
pub fn read_csv(text: &str) -> Result<Vec<SweepRecord>> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty() && *l != CSV_HEADER)
        .map(SweepRecord::from_csv_row)
        .collect()
}

/// Evaluates pairs of one chain, sharing the expensive parts.
pub struct PointEvaluator<'a> {
    spec: ChainSpec,
    spectrum: Option<&'a Spectrum>,
}

impl<'a> PointEvaluator<'a> {
    pub fn new(spec: ChainSpec) -> Self {
        Self { spec, spectrum: None }
    }

    /// Reuse a precomputed one-particle spectrum (it does not depend on tau).
    pub fn with_spectrum(spec: ChainSpec, spectrum: &'a Spectrum) -> Self {
        Self {
            spec,
            spectrum: Some(spectrum),
        }
    }

    fn resolve(&self, i: usize, j: usize, engine: Engine) -> Result<Source> {
        let n = self.spec.n_spins;
        if i == 0 || i >= j || j > n {
            return Err(Error::SiteOutOfRange { i, j, n });
        }
        let adjacent = j == i + 1;
        match engine {
            Engine::Fastpath if adjacent => Ok(Source::Fastpath),
            Engine::Fastpath => Err(Error::NonAdjacentPair { i, j }),
            Engine::Oracle if n <= ORACLE_MAX_SPINS => Ok(Source::Oracle),
            Engine::Oracle => Err(Error::OracleTooLarge {
                n,
                cap: ORACLE_MAX_SPINS,
            }),
            Engine::Auto if adjacent => Ok(Source::Fastpath),
            Engine::Auto if n <= ORACLE_MAX_SPINS => Ok(Source::Oracle),
            Engine::Auto => Err(Error::NonAdjacentPair { i, j }),
        }
    }

    pub fn evaluate(&self, pairs: &[(usize, usize)], engine: Engine) -> Result<Vec<SweepRecord>> {
        self.spec.validate()?;
        let sources = pairs
            .iter()
            .map(|&(i, j)| self.resolve(i, j, engine))
            .collect::<Result<Vec<_>>>()?;

        let greens = if sources.contains(&Source::Fastpath) {
            let owned;
            let spectrum = match self.spectrum {
                Some(s) => s,
                None => {
                    owned = numeric_spectrum(&build_one_particle_matrix(&self.spec)?)?;
                    &owned
                }
            };
            Some(greens_matrix(&self.spec, spectrum)?)
        } else {
            None
        };
        let oracle = if sources.contains(&Source::Oracle) {
            Some(Oracle::with_execution(&self.spec, Execution::Sequential)?)
        } else {
            None
        };

        pairs
            .iter()
            .zip(&sources)
            .map(|(&(i, j), source)| match source {
                Source::Fastpath => {
                    let g = greens.as_ref().expect("fast path prepared");
                    let st = reduced_density_matrix(&self.spec, g, i, j)?;
                    Ok(SweepRecord {
                        spec: self.spec,
                        i,
                        j,
                        a: st.a,
                        b: st.b,
                        c: st.c,
                        d: st.d,
                        x: st.x,
                        concurrence: concurrence_xstate(&st).concurrence,
                        source: Source::Fastpath,
                    })
                }
                Source::Oracle => {
                    let oracle = oracle.as_ref().expect("oracle prepared");
                    let rho = oracle.pair_state(i, j)?;
                    Ok(SweepRecord {
                        spec: self.spec,
                        i,
                        j,
                        a: rho[(0, 0)].re,
                        b: rho[(1, 1)].re,
                        c: rho[(2, 2)].re,
                        d: rho[(3, 3)].re,
                        x: rho[(1, 2)].re,
                        concurrence: crate::entanglement::concurrence_general(&rho)?.concurrence,
                        source: Source::Oracle,
                    })
                }
            })
            .collect()
    }
}

/// Concurrence of one pair with engine selection.
pub fn concurrence_record(spec: &ChainSpec, i: usize, j: usize, engine: Engine) -> Result<SweepRecord> {
    let mut rows = PointEvaluator::new(*spec).evaluate(&[(i, j)], engine)?;
    Ok(rows.remove(0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Temperature,
    Site,
    Delta,
    Length,
}

impl FromStr for SweepMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "temperature" => Ok(Self::Temperature),
            "site" => Ok(Self::Site),
            "delta" => Ok(Self::Delta),
            "length" => Ok(Self::Length),
            other => Err(Error::InvalidRequest(format!("unknown sweep mode '{other}'"))),
        }
    }
}

impl fmt::Display for SweepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepMode::Temperature => "temperature",
            SweepMode::Site => "site",
            SweepMode::Delta => "delta",
            SweepMode::Length => "length",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

/// `start:stop:count[:log]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VaryRange {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub scale: Scale,
}

impl VaryRange {
    pub fn linear(start: f64, stop: f64, count: usize) -> Self {
        Self {
            start,
            stop,
            count,
            scale: Scale::Linear,
        }
    }

    pub fn log(start: f64, stop: f64, count: usize) -> Self {
        Self {
            start,
            stop,
            count,
            scale: Scale::Log,
        }
    }

    /// Grid points, endpoints included.
    pub fn values(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                let t = k as f64 / last;
                match self.scale {
                    Scale::Linear => self.start + t * (self.stop - self.start),
                    Scale::Log => (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp(),
                }
            })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::InvalidRequest(format!("range needs at least 2 points, got {}", self.count)));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::InvalidRequest("range bounds must be finite".into()));
        }
        if self.scale == Scale::Log && !(self.start > 0.0 && self.stop > 0.0) {
            return Err(Error::InvalidRequest("log range needs positive bounds".into()));
        }
        Ok(())
    }
}

impl FromStr for VaryRange {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidRequest(format!("range '{s}' is not start:stop:count[:log]"));
        if !(3..=4).contains(&parts.len()) {
            return Err(bad());
        }
        let start = parts[0].parse().map_err(|_| bad())?;
        let stop = parts[1].parse().map_err(|_| bad())?;
        let count = parts[2].parse().map_err(|_| bad())?;
        let scale = match parts.get(3) {
            None => Scale::Linear,
            Some(&"log") => Scale::Log,
            Some(&"lin") | Some(&"linear") => Scale::Linear,
            Some(_) => return Err(bad()),
        };
        let range = Self {
            start,
            stop,
            count,
            scale,
        };
        range.validate()?;
        Ok(range)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSelector {
    Explicit(usize, usize),
    NearestNeighbors,
}

impl PairSelector {
    fn pairs(&self, n: usize) -> Vec<(usize, usize)> {
        match *self {
            PairSelector::Explicit(i, j) => vec![(i, j)],
            PairSelector::NearestNeighbors => (1..n).map(|i| (i, i + 1)).collect(),
        }
    }
}

impl FromStr for PairSelector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "nn" || s == "all" {
            return Ok(Self::NearestNeighbors);
        }
        let bad = || Error::InvalidRequest(format!("pair '{s}' is not i,j"));
        let (i, j) = s.split_once(',').ok_or_else(bad)?;
        Ok(Self::Explicit(
            i.trim().parse().map_err(|_| bad())?,
            j.trim().parse().map_err(|_| bad())?,
        ))
    }
}

/// A one-dimensional sweep over one chain parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRequest {
    pub mode: SweepMode,
    /// Fixed parameters; the varied field is overwritten per grid point.
    pub base: ChainSpec,
    /// Required except for `site` sweeps, which default to every bond.
    pub range: Option<VaryRange>,
    pub pairs: PairSelector,
    pub engine: Engine,
}

/// Grid point of a sweep: the chain and the pairs evaluated on it.
#[derive(Debug, Clone, PartialEq)]
struct GridPoint {
    spec: ChainSpec,
    pairs: Vec<(usize, usize)>,
}

fn integer_grid(range: &VaryRange) -> Vec<usize> {
    let mut v: Vec<usize> = range.values().iter().map(|x| x.round().max(0.0) as usize).collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn sorted_grid(range: &VaryRange) -> Vec<f64> {
    let mut v = range.values();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

impl SweepRequest {
    fn grid(&self) -> Result<Vec<GridPoint>> {
        self.base.validate()?;
        if let Some(r) = &self.range {
            r.validate()?;
        }
        let need_range = || {
            self.range
                .ok_or_else(|| Error::InvalidRequest(format!("{} sweep needs a --range", self.mode)))
        };
        let points = match self.mode {
            SweepMode::Temperature => {
                let r = need_range()?;
                if r.start < 0.0 || r.stop < 0.0 {
                    return Err(Error::InvalidRequest("tau must be non-negative".into()));
                }
                sorted_grid(&r)
                    .into_iter()
                    .map(|tau| self.base.with_tau(tau))
                    .collect::<Vec<_>>()
            }
            SweepMode::Delta => {
                let r = need_range()?;
                if r.start <= 0.0 || r.stop <= 0.0 {
                    return Err(Error::InvalidRequest("delta must be positive".into()));
                }
                sorted_grid(&r)
                    .into_iter()
                    .map(|d| self.base.with_delta(d))
                    .collect()
            }
            SweepMode::Length => {
                let r = need_range()?;
                let lengths = integer_grid(&r);
                if lengths.iter().any(|&n| n < 2) {
                    return Err(Error::InvalidRequest("chain length must be at least 2".into()));
                }
                lengths.into_iter().map(|n| self.base.with_n(n)).collect()
            }
            SweepMode::Site => {
                let n = self.base.n_spins;
                let bonds = match &self.range {
                    Some(r) => integer_grid(r),
                    None => (1..n).collect(),
                };
                if bonds.iter().any(|&b| b == 0 || b >= n) {
                    return Err(Error::InvalidRequest(format!("bond index outside 1..{}", n - 1)));
                }
                return Ok(vec![GridPoint {
                    spec: self.base,
                    pairs: bonds.into_iter().map(|b| (b, b + 1)).collect(),
                }]);
            }
        };
        points
            .into_iter()
            .map(|spec| {
                let pairs = self.pairs.pairs(spec.n_spins);
                for &(i, j) in &pairs {
                    if i == 0 || i >= j || j > spec.n_spins {
                        return Err(Error::SiteOutOfRange {
                            i,
                            j,
                            n: spec.n_spins,
                        });
                    }
                }
                Ok(GridPoint { spec, pairs })
            })
            .collect()
    }

    /// Metadata lines describing the request.
    pub fn metadata(&self) -> Vec<String> {
        let mut lines = vec![
            format!("xychain {}", crate::VERSION),
            format!("mode={}", self.mode),
            format!(
                "base n={} omega1={} omega2={} delta={} tau={}",
                self.base.n_spins, self.base.omega_odd, self.base.omega_even, self.base.delta, self.base.tau
            ),
        ];
        if let Some(r) = &self.range {
            lines.push(format!(
                "range {}:{}:{}{}",
                r.start,
                r.stop,
                r.count,
                if r.scale == Scale::Log { ":log" } else { "" }
            ));
        }
        lines
    }
}

/// Run a sweep. Rows are ordered by varied value, then by first site.
pub fn run_sweep(req: &SweepRequest, exec: Execution) -> Result<Vec<SweepRecord>> {
    let grid = req.grid()?;
    // temperature does not enter the one-particle spectrum
    let shared = if req.mode == SweepMode::Temperature {
        Some(numeric_spectrum(&build_one_particle_matrix(&req.base)?)?)
    } else {
        None
    };
    let rows = par::try_map(exec, &grid, |point| {
        let evaluator = match &shared {
            Some(s) => PointEvaluator::with_spectrum(point.spec, s),
            None => PointEvaluator::new(point.spec),
        };
        let mut records = evaluator.evaluate(&point.pairs, req.engine)?;
        records.sort_by_key(|r| (r.i, r.j));
        Ok(records)
    })?;
    Ok(rows.into_iter().flatten().collect())
}
