//! Grid estimators for `c_B`, `c_S` and `D`, the sampled inner-product test
//! and a random search for small values of `c_B`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use crate::bisector::{InnerCurve, Truncation};
use crate::error::{Error, Result};
use crate::geometry::{ConvexPolygon, Point};
use crate::minimize::{bisect_predicate, golden_section};
use crate::norm::{half_circle_grid, NormSpec};
use crate::oracle::{random_linear_map, random_polygon_norm};
use crate::ortho::{build_reflection, invariance_defect, reflection_distortion, sine};
use crate::tolerances::Tolerances;

pub const MIN_RESOLUTION: usize = 8;
pub const MAX_RESOLUTION: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConstantName {
    #[serde(rename = "cB")]
    CB,
    #[serde(rename = "cS")]
    CS,
    D,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exactness {
    PolygonExactCombinatorics,
    Floating,
}

/// The extremal configuration: `(x, w)` for `c_B`, `(x, y)` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub x: Point,
    pub y: Point,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inf: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantReport {
    pub name: ConstantName,
    pub value: f64,
    pub witness: Witness,
    pub resolution: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner_resolution: Option<usize>,
    /// Same estimate restricted to the grid of half the resolution.
    pub coarse_value: f64,
    /// One-sided first-order extrapolation from the two grids.
    pub extrapolated: f64,
    pub tolerances: Tolerances,
    pub bounds_ok: bool,
    pub exactness: Exactness,
    /// Grid directions whose inner bisector stopped at an apex inside the ball.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flagged: Option<usize>,
    /// Largest `|sup · inf − 1|` over all reflections, `inf` minimized directly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reciprocity_defect: Option<f64>,
}

/// How grid cells are distributed over threads. Results are collected in
/// grid order and reduced sequentially, so every mode gives the same bits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Parallelism {
    pub deterministic: bool,
    pub threads: Option<usize>,
}

impl Parallelism {
    pub fn sequential() -> Self {
        Self {
            deterministic: true,
            threads: Some(1),
        }
    }

    /// Thread cap from `MC_THREADS`, if set to a positive integer.
    pub fn from_env() -> Self {
        let threads = std::env::var("MC_THREADS")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .filter(|&n: &usize| n > 0);
        Self {
            deterministic: false,
            threads,
        }
    }

    fn map<T, U, F>(&self, items: &[T], f: F) -> Result<Vec<U>>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> Result<U> + Sync + Send,
    {
        if self.deterministic || self.threads == Some(1) {
            return items.iter().map(f).collect();
        }
        match self.threads {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
                .install(|| items.par_iter().map(&f).collect()),
            None => items.par_iter().map(f).collect(),
        }
    }
}

fn check_resolution(resolution: usize) -> Result<()> {
    if !(MIN_RESOLUTION..=MAX_RESOLUTION).contains(&resolution) {
        return Err(Error::InvalidArgument(format!(
            "resolution {resolution} outside [{MIN_RESOLUTION}, {MAX_RESOLUTION}]"
        )));
    }
    Ok(())
}

fn exactness(norm: &NormSpec) -> Exactness {
    if norm.as_polygon().is_some() {
        Exactness::PolygonExactCombinatorics
    } else {
        Exactness::Floating
    }
}

/// Whether `theta` belongs to the grid of half the resolution.
fn in_coarse_grid(norm: &NormSpec, resolution: usize, theta: f64) -> bool {
    let half = resolution / 2;
    let k = theta * half as f64 / PI;
    (k - k.round()).abs() < 1e-9
        || norm
            .feature_angles()
            .iter()
            .any(|&f| (f - theta).abs() < 1e-15)
}

struct Cell {
    theta: f64,
    value: f64,
    witness: Witness,
    flagged: bool,
    defect: f64,
}

/// Best cell under `better`, first in grid order on ties.
fn reduce<'a>(
    cells: impl Iterator<Item = &'a Cell>,
    better: impl Fn(f64, f64) -> bool,
) -> Option<&'a Cell> {
    cells.fold(None, |best: Option<&Cell>, c| match best {
        Some(b) if !better(c.value, b.value) => Some(b),
        _ => Some(c),
    })
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    name: ConstantName,
    norm: &NormSpec,
    cells: &[Cell],
    resolution: usize,
    inner_resolution: Option<usize>,
    tol: &Tolerances,
    minimize: bool,
    bounds: (f64, f64),
) -> Result<ConstantReport> {
    let better = |a: f64, b: f64| if minimize { a < b } else { a > b };
    let best = reduce(cells.iter(), better)
        .ok_or_else(|| Error::NonConvergence("empty direction grid".into()))?;
    let coarse = reduce(
        cells
            .iter()
            .filter(|c| in_coarse_grid(norm, resolution, c.theta)),
        better,
    )
    .unwrap_or(best);
    let value = best.value;
    // Grid estimates converge monotonically; step once more by the last gain.
    let extrapolated = value - (coarse.value - value);
    let extrapolated = if minimize {
        extrapolated.max(bounds.0)
    } else {
        extrapolated.min(bounds.1)
    };
    let flagged = cells.iter().filter(|c| c.flagged).count();
    let defect = cells.iter().map(|c| c.defect).fold(0.0, f64::max);
    Ok(ConstantReport {
        name,
        value,
        witness: best.witness,
        resolution,
        inner_resolution,
        coarse_value: coarse.value,
        extrapolated,
        tolerances: *tol,
        bounds_ok: value >= bounds.0 - tol.tol_const && value <= bounds.1 + tol.tol_const,
        exactness: exactness(norm),
        flagged: (name == ConstantName::CB).then_some(flagged),
        reciprocity_defect: (name == ConstantName::CS).then_some(defect),
    })
}

/// `inf_{w ∈ P_I(x)} s(w, x)` with its minimizer.
pub fn inner_sine_infimum(
    norm: &NormSpec,
    x: Point,
    inner_resolution: usize,
    tol: &Tolerances,
) -> Result<(f64, Point, bool)> {
    let curve = InnerCurve::new(norm, x, tol)?;
    let (samples, truncation) = curve.half(inner_resolution)?;
    let flagged = matches!(truncation, Truncation::ApexInsideBall { .. });
    let values = samples
        .iter()
        .map(|s| Ok(sine(norm, s.point, x)?.value))
        .collect::<Result<Vec<f64>>>()?;
    let (k, &best) = values
        .iter()
        .enumerate()
        .fold(None, |b: Option<(usize, &f64)>, c| match b {
            Some(b) if *c.1 >= *b.1 => Some(b),
            _ => Some(c),
        })
        .ok_or_else(|| Error::NonConvergence("empty inner bisector".into()))?;
    let (mut value, mut w) = (best, samples[k].point);

    // Refine between the neighbouring samples along the curve.
    if samples.len() >= 2 {
        let lo = samples[k.saturating_sub(1)].offset;
        let hi = samples[(k + 1).min(samples.len() - 1)].offset;
        if hi > lo {
            let objective = |o: f64| match curve.point(o) {
                Ok(p) if !p.is_zero() => sine(norm, p, x).map(|s| s.value).unwrap_or(f64::INFINITY),
                _ => f64::INFINITY,
            };
            let m = golden_section(objective, lo, hi, 1e-10 * (hi - lo).max(1e-12));
            if m.value < value {
                if let Ok(p) = curve.point(m.arg) {
                    value = m.value;
                    w = p;
                }
            }
        }
    }
    Ok((value, norm.normalize(w), flagged))
}

/// `c_B = inf_{x ∈ S} inf_{w ∈ P_I(x)} s(w, x)` over a half-circle grid.
pub fn estimate_cb(
    norm: &NormSpec,
    resolution: usize,
    inner_resolution: usize,
    tol: &Tolerances,
    par: Parallelism,
) -> Result<ConstantReport> {
    check_resolution(resolution)?;
    check_resolution(inner_resolution)?;
    let grid = half_circle_grid(norm, resolution);
    let cells = par.map(&grid, |&theta| {
        let x = norm.circle_point(theta).point;
        let (value, w, flagged) = inner_sine_infimum(norm, x, inner_resolution, tol)?;
        Ok(Cell {
            theta,
            value,
            witness: Witness {
                x,
                y: w,
                sup: None,
                inf: None,
            },
            flagged,
            defect: 0.0,
        })
    })?;
    assemble(
        ConstantName::CB,
        norm,
        &cells,
        resolution,
        Some(inner_resolution),
        tol,
        true,
        (1.0 / 3.0, 1.0),
    )
}

/// `c_S = sup_{x ⊣_B y} (M − 1/M)` with `M = sup_{z ∈ S} ‖T_xy z‖`.
pub fn estimate_cs(
    norm: &NormSpec,
    resolution: usize,
    tol: &Tolerances,
    par: Parallelism,
) -> Result<ConstantReport> {
    check_resolution(resolution)?;
    let grid = half_circle_grid(norm, resolution);
    let cells = par.map(&grid, |&theta| {
        let x = norm.circle_point(theta).point;
        let mut best: Option<Cell> = None;
        let mut defect = 0.0_f64;
        for y in norm.supporting_directions(x).fan(norm, tol.n_fan) {
            let dist = reflection_distortion(norm, &build_reflection(x, y)?);
            defect = defect.max((dist.sup * dist.inf_direct - 1.0).abs());
            let value = dist.sup - dist.inf;
            if best.as_ref().is_none_or(|b| value > b.value) {
                let witness = Witness {
                    x,
                    y,
                    sup: Some(dist.sup),
                    inf: Some(dist.inf),
                };
                best = Some(Cell {
                    theta,
                    value,
                    witness,
                    flagged: false,
                    defect: 0.0,
                });
            }
        }
        let mut cell =
            best.ok_or_else(|| Error::NonConvergence("no supporting direction".into()))?;
        cell.defect = defect;
        Ok(cell)
    })?;
    assemble(
        ConstantName::CS,
        norm,
        &cells,
        resolution,
        None,
        tol,
        false,
        (0.0, 8.0 / 3.0),
    )
}

/// Unit vectors `y` with `x ⊣_I y`, one per sign change (and per near-zero
/// node) of `φ ↦ ‖x + y(φ)‖ − ‖x − y(φ)‖` over half a turn.
pub fn isosceles_partners(
    norm: &NormSpec,
    theta: f64,
    scan: usize,
    tol: &Tolerances,
) -> Vec<Point> {
    let x = norm.circle_point(theta).point;
    let y = |phi: f64| norm.circle_point(theta + phi).point;
    let h = |phi: f64| {
        let y = y(phi);
        norm.gauge(x + y) - norm.gauge(x - y)
    };
    let step = PI / scan as f64;
    let mut out = Vec::new();
    let mut prev = (0.0, h(0.0));
    for k in 1..=scan {
        let phi = step * k as f64;
        let cur = (phi, h(phi));
        if cur.1.abs() <= tol.tol_orth && k < scan {
            out.push(y(phi));
        } else if prev.1 > tol.tol_orth && cur.1 < -tol.tol_orth
            || prev.1 < -tol.tol_orth && cur.1 > tol.tol_orth
        {
            let positive_left = prev.1 > 0.0;
            let (a, b) = bisect_predicate(|t| (h(t) > 0.0) == positive_left, prev.0, cur.0, 1e-15);
            out.push(y(0.5 * (a + b)));
        }
        prev = cur;
    }
    out
}

/// `D = inf { s(x, y) : x, y ∈ S, x ⊣_I y }`.
pub fn estimate_d(
    norm: &NormSpec,
    resolution: usize,
    tol: &Tolerances,
    par: Parallelism,
) -> Result<ConstantReport> {
    check_resolution(resolution)?;
    let grid = half_circle_grid(norm, resolution);
    let scan = resolution.clamp(256, 4096);
    let cells = par.map(&grid, |&theta| {
        let x = norm.circle_point(theta).point;
        let mut best: Option<Cell> = None;
        for y in isosceles_partners(norm, theta, scan, tol) {
            let value = sine(norm, x, y)?.value;
            if best.as_ref().is_none_or(|b| value < b.value) {
                best = Some(Cell {
                    theta,
                    value,
                    witness: Witness {
                        x,
                        y,
                        sup: None,
                        inf: None,
                    },
                    flagged: false,
                    defect: 0.0,
                });
            }
        }
        best.ok_or_else(|| {
            Error::NonConvergence(format!("no isosceles partner found at angle {theta}"))
        })
    })?;
    assemble(
        ConstantName::D,
        norm,
        &cells,
        resolution,
        None,
        tol,
        true,
        (0.0, 1.0),
    )
}

/// Whether every sampled chord `[xy]` of `S` has a bisector containing a
/// line, i.e. `S` is invariant under the reflection fixing `y − x` and
/// negating `x + y`. True exactly for ellipses, up to sampling.
pub fn inner_product_test(
    norm: &NormSpec,
    resolution: usize,
    tol: &Tolerances,
    par: Parallelism,
) -> Result<bool> {
    check_resolution(resolution)?;
    let pts: Vec<Point> = (0..resolution)
        .map(|k| {
            norm.circle_point(2.0 * PI * k as f64 / resolution as f64)
                .point
        })
        .collect();
    let rows: Vec<usize> = (0..resolution).collect();
    let ok = par.map(&rows, |&i| {
        for j in i + 1..resolution {
            let (x, y) = (pts[i], pts[j]);
            let (chord, sum) = (y - x, x + y);
            if chord.is_zero() || sum.euclid() <= 1e-12 * chord.euclid() {
                continue;
            }
            let t = build_reflection(chord, sum)?;
            if invariance_defect(norm, &t, tol.n_roberts) > tol.tol_orth {
                return Ok(false);
            }
        }
        Ok(true)
    })?;
    Ok(ok.into_iter().all(|b| b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolygonFamily {
    /// Hulls of random symmetric point sets.
    RandomHull,
    /// The square under random linear maps.
    LinearSquares,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub family: PolygonFamily,
    pub count: usize,
    /// Inclusive range for the number of generating points.
    pub n_half: (usize, usize),
    pub seed: u64,
    pub resolution: usize,
    pub inner_resolution: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchReport {
    pub index: usize,
    pub vertices: Vec<Point>,
    pub value: f64,
    pub running_min: f64,
    pub running_min_index: usize,
}

/// Lazily estimates `c_B` on a stream of random polygons. Empirical only.
pub struct CbSearch<'a> {
    cfg: SearchConfig,
    tol: &'a Tolerances,
    par: Parallelism,
    rng: ChaCha8Rng,
    index: usize,
    best: Option<(f64, usize)>,
}

pub fn search_cb_lower(
    cfg: SearchConfig,
    tol: &Tolerances,
    par: Parallelism,
) -> Result<CbSearch<'_>> {
    if cfg.n_half.0 < 2 || cfg.n_half.0 > cfg.n_half.1 {
        return Err(Error::InvalidArgument(
            "vertex range must satisfy 2 <= lo <= hi".into(),
        ));
    }
    check_resolution(cfg.resolution)?;
    check_resolution(cfg.inner_resolution)?;
    Ok(CbSearch {
        cfg,
        tol,
        par,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        index: 0,
        best: None,
    })
}

impl CbSearch<'_> {
    fn next_norm(&mut self) -> Result<NormSpec> {
        use rand::Rng;
        match self.cfg.family {
            PolygonFamily::RandomHull => {
                let n = self.rng.gen_range(self.cfg.n_half.0..=self.cfg.n_half.1);
                random_polygon_norm(n, self.rng.gen())
            }
            PolygonFamily::LinearSquares => {
                NormSpec::square().linear_image(random_linear_map(&mut self.rng))
            }
        }
    }
}

impl Iterator for CbSearch<'_> {
    type Item = Result<SearchReport>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.index >= self.cfg.count {
            return None;
        }
        let index = self.index;
        self.index += 1;
        let result = self.next_norm().and_then(|norm| {
            let report = estimate_cb(
                &norm,
                self.cfg.resolution,
                self.cfg.inner_resolution,
                self.tol,
                self.par,
            )?;
            if self.best.is_none_or(|(v, _)| report.value < v) {
                self.best = Some((report.value, index));
            }
            let (running_min, running_min_index) = self.best.expect("set above");
            let vertices = norm
                .as_polygon()
                .map(|p| p.vertices().to_vec())
                .unwrap_or_default();
            Ok(SearchReport {
                index,
                vertices,
                value: report.value,
                running_min,
                running_min_index,
            })
        });
        Some(result)
    }
}

/// Polygon of a search report, for re-analysis.
pub fn search_polygon(report: &SearchReport) -> Result<ConvexPolygon> {
    ConvexPolygon::from_cycle(&report.vertices)
}
