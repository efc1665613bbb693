//! Reliability curves: estimates of R(t) on a time grid with their standard
//! errors and provenance, plus CSV serialization.

use crate::error::{Error, Result};
use crate::numerics::interp_linear;
use crate::real::Real;

/// How a curve entry was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveMethod {
    /// Exact evaluation; standard error is zero by construction.
    ClosedForm,
    /// Replication average; standard error estimated from the sample.
    MonteCarlo,
}

impl std::fmt::Display for CurveMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CurveMethod::ClosedForm => write!(f, "closed-form"),
            CurveMethod::MonteCarlo => write!(f, "monte-carlo"),
        }
    }
}

impl std::str::FromStr for CurveMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed-form" => Ok(CurveMethod::ClosedForm),
            "monte-carlo" => Ok(CurveMethod::MonteCarlo),
            other => Err(Error::parse(
                "curve method",
                format!("unknown method '{other}'"),
            )),
        }
    }
}

/// One (t, R̂(t)) entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint<R> {
    pub t: R,
    pub reliability: R,
    pub std_error: R,
    pub method: CurveMethod,
}

/// Diagnostics of the count-weight residuals accumulated while estimating a
/// curve. Scenario weights are count probabilities evaluated at per-scenario
/// accumulated intensities, so a truncated weight row can sum to less or
/// more than one; both directions are logged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationAudit<R> {
    /// Worst per-replication missing weight mass, max(0, 1 − Σ_m w_m):
    /// the truncation side.
    pub max_tail_mass: R,
    /// Worst per-replication overshoot of the raw reliability above 1
    /// before clamping: the over-coverage side.
    pub max_overshoot: R,
    /// Whether the weight rows were renormalized to sum to one.
    pub renormalized: bool,
}

impl<R: Real> Default for TruncationAudit<R> {
    fn default() -> Self {
        Self {
            max_tail_mass: R::zero(),
            max_overshoot: R::zero(),
            renormalized: false,
        }
    }
}

impl<R: Real> TruncationAudit<R> {
    /// Worst-case combination of two audits (e.g. over several curves
    /// estimated for one optimization).
    pub fn merge(self, other: Self) -> Self {
        Self {
            max_tail_mass: self.max_tail_mass.max(other.max_tail_mass),
            max_overshoot: self.max_overshoot.max(other.max_overshoot),
            renormalized: self.renormalized || other.renormalized,
        }
    }
}

/// R̂(t) on a time grid, with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityCurve<R> {
    pub points: Vec<CurvePoint<R>>,
    pub seed: u64,
    pub replications: usize,
    pub audit: TruncationAudit<R>,
}

impl<R: Real> ReliabilityCurve<R> {
    /// Linear interpolation of R̂ at `t` (clamped to the grid ends).
    pub fn reliability_at(&self, t: R) -> R {
        let ts: Vec<R> = self.points.iter().map(|p| p.t).collect();
        let rs: Vec<R> = self.points.iter().map(|p| p.reliability).collect();
        interp_linear(&ts, &rs, t)
    }

    pub fn first_t(&self) -> R {
        self.points.first().expect("curves are never empty").t
    }

    pub fn last_t(&self) -> R {
        self.points.last().expect("curves are never empty").t
    }

    /// CSV rendering with header `t,R,stderr,method,seed,N`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,R,stderr,method,seed,N\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                p.t, p.reliability, p.std_error, p.method, self.seed, self.replications
            ));
        }
        out
    }

    /// Parses the CSV produced by [`Self::to_csv`]. The audit block is not
    /// serialized and comes back as its default.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse("reliability CSV", "empty input"))?;
        if header.trim() != "t,R,stderr,method,seed,N" {
            return Err(Error::parse(
                "reliability CSV",
                format!("unexpected header '{header}'"),
            ));
        }
        let mut points = Vec::new();
        let mut seed = 0u64;
        let mut replications = 0usize;
        for (idx, line) in lines {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 6 {
                return Err(Error::parse(
                    "reliability CSV",
                    format!("line {}: expected 6 fields, got {}", idx + 1, fields.len()),
                ));
            }
            let bad = |what: &str, v: &str| {
                Error::parse(
                    "reliability CSV",
                    format!("line {}: bad {what} value '{v}'", idx + 1),
                )
            };
            let t = R::parse_decimal(fields[0]).ok_or_else(|| bad("t", fields[0]))?;
            let r = R::parse_decimal(fields[1]).ok_or_else(|| bad("R", fields[1]))?;
            let se = R::parse_decimal(fields[2]).ok_or_else(|| bad("stderr", fields[2]))?;
            let method: CurveMethod = fields[3].parse()?;
            seed = fields[4].parse().map_err(|_| bad("seed", fields[4]))?;
            replications = fields[5].parse().map_err(|_| bad("N", fields[5]))?;
            points.push(CurvePoint {
                t,
                reliability: r,
                std_error: se,
                method,
            });
        }
        if points.is_empty() {
            return Err(Error::parse("reliability CSV", "no data rows"));
        }
        Ok(Self {
            points,
            seed,
            replications,
            audit: TruncationAudit::default(),
        })
    }
}
