//! Norm file format.
//!
//! ```json
//! {"type":"polygon","vertices":[[1,1],[-1,1]]}
//! {"type":"lp","p":4.0}
//! {"type":"euclidean"}
//! {"type":"sampled","pairs":[[0.0,1.0],[0.1,1.02]]}
//! ```

use serde::{Deserialize, Serialize};

use super::{NormSpec, PolygonNorm, SampledGauge};
use crate::error::{Error, Result};
use crate::geometry::{ConvexPolygon, Point};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum NormFile {
    Polygon { vertices: Vec<[f64; 2]> },
    Lp { p: f64 },
    Euclidean,
    Sampled { pairs: Vec<[f64; 2]> },
}

pub(super) fn from_file(file: &NormFile) -> Result<NormSpec> {
    match file {
        NormFile::Polygon { vertices } => {
            let pts: Vec<Point> = vertices.iter().map(|&p| p.into()).collect();
            Ok(NormSpec::Polygon(polygon_from_list(&pts)?))
        }
        NormFile::Lp { p } => NormSpec::lp(*p),
        NormFile::Euclidean => Ok(NormSpec::Euclidean),
        NormFile::Sampled { pairs } => {
            let pairs: Vec<(f64, f64)> = pairs.iter().map(|&[t, r]| (t, r)).collect();
            Ok(NormSpec::Sampled(SampledGauge::new(&pairs, 1e-9)?))
        }
    }
}

/// Builds a polygonal ball from either a full symmetric vertex list or a
/// half list in which no vertex has its antipode.
pub(crate) fn polygon_from_list(input: &[Point]) -> Result<PolygonNorm> {
    if input.is_empty() {
        return Err(Error::invalid_norm("empty vertex list"));
    }
    for (i, p) in input.iter().enumerate() {
        if !p.is_finite() {
            return Err(Error::invalid_vertex("non-finite coordinate", i, *p));
        }
        if p.is_zero() {
            return Err(Error::invalid_vertex(
                "the origin must be interior, not a vertex",
                i,
                *p,
            ));
        }
    }
    let has_partner: Vec<bool> = input.iter().map(|p| input.contains(&-*p)).collect();
    // (input index, point)
    let mut tagged: Vec<(usize, Point)> = input.iter().copied().enumerate().collect();
    if has_partner.iter().all(|&h| !h) {
        tagged.extend(input.iter().enumerate().map(|(i, &p)| (i, -p)));
    } else if let Some(bad) = has_partner.iter().position(|&h| !h) {
        return Err(Error::invalid_vertex(
            "vertex has no antipodal partner (asymmetric ball)",
            bad,
            input[bad],
        ));
    }
    tagged.sort_by(|a, b| a.1.angle().total_cmp(&b.1.angle()));
    let cycle: Vec<Point> = tagged.iter().map(|t| t.1).collect();
    let polygon = ConvexPolygon::from_cycle(&cycle).map_err(|e| match e {
        Error::InvalidNorm {
            reason,
            vertex: Some((k, p)),
        } => Error::InvalidNorm {
            reason,
            vertex: Some((tagged[k].0, p)),
        },
        other => other,
    })?;
    PolygonNorm::new(polygon)
}
