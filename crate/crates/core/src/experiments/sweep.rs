//! Sweep of the two-level probe `sqrt(p)|00> + sqrt(1-p)|11>` on the V family.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::constructions::{build_thm3_probe, build_v};
use crate::error::{Error, Result};
use crate::states::{three_pure_condition, OverlapTriple, Verdict};
use crate::unitary::{antidist_value_with_probe, probe_overlaps, UnitaryEnsemble};

/// Lower end of the claimed interval, `(14 - 2 sqrt 7) / 21`.
pub const PUBLISHED_P_STAR: f64 = 0.414_690_351_327_181_85;

/// Width of the final bisection bracket.
const BISECTION_WIDTH: f64 = 1e-9;
/// Largest binding margin accepted at the bisected boundary.
const BOUNDARY_MARGIN_TOL: f64 = 1e-8;
/// Distance under which the bisected boundary counts as agreeing with the
/// claimed constant.
const AGREEMENT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    /// `1 - sum x`.
    pub sum_margin: f64,
    /// `(sum x - 1)^2 - 4 prod x`.
    pub cubic_margin: f64,
    pub verdict: Verdict,
    pub sdp_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub p_star: Option<f64>,
    pub bracket_width: f64,
    pub binding_condition: Option<String>,
    pub sum_margin_at_p_star: Option<f64>,
    pub cubic_margin_at_p_star: Option<f64>,
    pub boundary_margin_tol: f64,
    pub grid_spacing: f64,
    pub sdp_below: Option<f64>,
    pub sdp_above: Option<f64>,
    pub decision_tol: f64,
    pub published_p_star: f64,
    pub agreement_tol: f64,
    pub agrees_with_published: bool,
    pub internally_consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub d: usize,
    pub rows: Vec<SweepRow>,
    pub summary: SweepSummary,
}

fn overlaps_at(v: &UnitaryEnsemble, p: f64, cfg: &Config) -> Result<OverlapTriple> {
    probe_overlaps(v, &build_thm3_probe(p, v.dim())?, &cfg.tol)
}

fn sdp_at(v: &UnitaryEnsemble, p: f64, cfg: &Config) -> Result<f64> {
    Ok(antidist_value_with_probe(v, &build_thm3_probe(p, v.dim())?, &cfg.solver)?.value)
}

/// Rows on an even `p` grid, then the antidistinguishability boundary
/// bracketed by bisection on the closed-form margin and cross-checked with
/// the solver one grid step on either side.
pub fn sweep_p(d: usize, p_min: f64, p_max: f64, steps: usize, cfg: &Config) -> Result<SweepReport> {
    if !(p_min > 0.0 && p_min < p_max && p_max <= 1.0) {
        return Err(Error::OutOfRange(format!("need 0 < p_min < p_max <= 1, got [{p_min}, {p_max}]")));
    }
    if steps < 2 {
        return Err(Error::OutOfRange(format!("steps = {steps}, need at least 2")));
    }
    let v = build_v(d)?;
    let spacing = (p_max - p_min) / (steps - 1) as f64;
    let mut rows = Vec::with_capacity(steps);
    for k in 0..steps {
        let p = if k + 1 == steps { p_max } else { p_min + spacing * k as f64 };
        let x = overlaps_at(&v, p, cfg)?;
        let decision = three_pure_condition(&x, cfg.tol.condition)?;
        rows.push(SweepRow {
            p,
            x1: x.x1,
            x2: x.x2,
            x3: x.x3,
            sum_margin: decision.sum_margin,
            cubic_margin: decision.cubic_margin,
            verdict: decision.verdict,
            sdp_value: sdp_at(&v, p, cfg)?,
        });
    }

    let mut summary = SweepSummary {
        p_star: None,
        bracket_width: BISECTION_WIDTH,
        binding_condition: None,
        sum_margin_at_p_star: None,
        cubic_margin_at_p_star: None,
        boundary_margin_tol: BOUNDARY_MARGIN_TOL,
        grid_spacing: spacing,
        sdp_below: None,
        sdp_above: None,
        decision_tol: cfg.solver.decision_tol,
        published_p_star: PUBLISHED_P_STAR,
        agreement_tol: AGREEMENT_TOL,
        agrees_with_published: false,
        internally_consistent: false,
    };

    let margin = |r: &SweepRow| r.sum_margin.min(r.cubic_margin);
    let crossing = rows.windows(2).find(|w| margin(&w[0]) < 0.0 && margin(&w[1]) >= 0.0);
    if let Some(w) = crossing {
        let (mut lo, mut hi) = (w[0].p, w[1].p);
        while hi - lo > BISECTION_WIDTH {
            let mid = 0.5 * (lo + hi);
            if overlaps_at(&v, mid, cfg)?.margin() >= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let p_star = 0.5 * (lo + hi);
        let x = overlaps_at(&v, p_star, cfg)?;
        let (sm, cm) = (x.sum_margin(), x.cubic_margin());
        let below = sdp_at(&v, (p_star - spacing).max(f64::MIN_POSITIVE), cfg)?;
        let above = sdp_at(&v, (p_star + spacing).min(1.0), cfg)?;
        let threshold = 1.0 - cfg.solver.decision_tol;
        summary.p_star = Some(p_star);
        summary.binding_condition = Some(if cm.abs() <= sm.abs() { "cubic" } else { "sum" }.to_string());
        summary.sum_margin_at_p_star = Some(sm);
        summary.cubic_margin_at_p_star = Some(cm);
        summary.sdp_below = Some(below);
        summary.sdp_above = Some(above);
        summary.agrees_with_published = (p_star - PUBLISHED_P_STAR).abs() <= AGREEMENT_TOL;
        summary.internally_consistent =
            sm.min(cm).abs() <= BOUNDARY_MARGIN_TOL && below < threshold && above >= threshold;
    }
    Ok(SweepReport { d, rows, summary })
}

impl SweepReport {
    /// Header, one row per grid point, then a `p_star` summary row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,x1,x2,x3,sum_margin,cubic_margin,verdict,sdp_value\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.p,
                r.x1,
                r.x2,
                r.x3,
                r.sum_margin,
                r.cubic_margin,
                r.verdict,
                r.sdp_value
            );
        }
        let s = &self.summary;
        match s.p_star {
            Some(p) => {
                let _ = writeln!(
                    out,
                    "# p_star={p},binding={},sum_margin={},cubic_margin={},published_p_star={},agrees_with_published={},internally_consistent={}",
                    s.binding_condition.as_deref().unwrap_or(""),
                    s.sum_margin_at_p_star.unwrap_or(f64::NAN),
                    s.cubic_margin_at_p_star.unwrap_or(f64::NAN),
                    s.published_p_star,
                    s.agrees_with_published,
                    s.internally_consistent
                );
            }
            None => {
                let _ = writeln!(out, "# p_star=none,published_p_star={}", s.published_p_star);
            }
        }
        out
    }
}
