use serde::Serialize;
use std::cmp::Ordering;

use super::{exact, Point, Segment};
use crate::error::{Error, Result};

/// Strictly convex polygon with counterclockwise vertices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    /// Canonicalizes a closed vertex cycle: drops repeated vertices, merges
    /// collinear runs, enforces counterclockwise order and rejects anything
    /// that is not strictly convex. Diagnostics index into `input`.
    pub fn from_cycle(input: &[Point]) -> Result<Self> {
        for (i, p) in input.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::invalid_vertex("non-finite coordinate", i, *p));
            }
        }
        let mut idx: Vec<usize> = Vec::with_capacity(input.len());
        for i in 0..input.len() {
            if idx.last().is_none_or(|&j| input[j] != input[i]) {
                idx.push(i);
            }
        }
        while idx.len() > 1 && input[idx[0]] == input[*idx.last().unwrap()] {
            idx.pop();
        }
        if idx.len() < 3 {
            return Err(Error::invalid_norm("fewer than three distinct vertices"));
        }

        let twice_area: f64 = (0..idx.len())
            .map(|k| input[idx[k]].cross(input[idx[(k + 1) % idx.len()]]))
            .sum();
        if twice_area < 0.0 {
            idx.reverse();
        }

        // Merge collinear runs; a reversal (spike) is a convexity failure.
        let mut changed = true;
        while changed && idx.len() >= 3 {
            changed = false;
            let n = idx.len();
            for k in 0..n {
                let prev = input[idx[(k + n - 1) % n]];
                let cur = input[idx[k]];
                let next = input[idx[(k + 1) % n]];
                if exact::orient(prev, cur, next) == Ordering::Equal {
                    if exact::direction_dot_sign(prev, cur, cur, next) != Ordering::Greater {
                        return Err(Error::invalid_vertex(
                            "polygon folds back on itself",
                            idx[k],
                            cur,
                        ));
                    }
                    idx.remove(k);
                    changed = true;
                    break;
                }
            }
        }
        if idx.len() < 3 {
            return Err(Error::invalid_norm("polygon has empty interior"));
        }

        let n = idx.len();
        for k in 0..n {
            let prev = input[idx[(k + n - 1) % n]];
            let cur = input[idx[k]];
            let next = input[idx[(k + 1) % n]];
            if exact::orient(prev, cur, next) != Ordering::Greater {
                return Err(Error::invalid_vertex("non-convex vertex", idx[k], cur));
            }
        }
        // Strict local convexity plus a single winding rules out
        // self-intersecting stars.
        let winding: f64 = (0..n)
            .map(|k| {
                let a = input[idx[k]] - input[idx[(k + n - 1) % n]];
                let b = input[idx[(k + 1) % n]] - input[idx[k]];
                b.cross(a).atan2(a.dot(b)).abs()
            })
            .sum();
        if winding > 2.0 * std::f64::consts::PI + 1e-6 {
            return Err(Error::invalid_norm("vertex cycle winds more than once"));
        }

        Ok(Self {
            vertices: idx.into_iter().map(|i| input[i]).collect(),
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.vertices.len()]
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> Segment {
        Segment::new(self.vertex(i), self.vertex(i + 1))
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        (0..self.len()).map(|i| self.edge(i))
    }

    /// Exact test that `v ↦ -v` permutes the vertex set.
    pub fn is_centrally_symmetric(&self) -> bool {
        let n = self.len();
        n.is_multiple_of(2) && (0..n).all(|i| self.vertex(i + n / 2) == -self.vertex(i))
    }

    pub fn map(&self, f: impl Fn(Point) -> Point) -> Result<Self> {
        let pts: Vec<Point> = self.vertices.iter().map(|&p| f(p)).collect();
        Self::from_cycle(&pts)
    }
}

/// Convex hull (counterclockwise, no collinear vertices) by monotone chain
/// with exact orientation tests.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.u.total_cmp(&b.u).then(a.v.total_cmp(&b.v)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && exact::orient(hull[hull.len() - 2], hull[hull.len() - 1], p) != Ordering::Greater
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(raw: &[[f64; 2]]) -> Vec<Point> {
        raw.iter().map(|&p| p.into()).collect()
    }

    #[test]
    fn clockwise_input_is_reversed() {
        let poly =
            ConvexPolygon::from_cycle(&pts(&[[1.0, 1.0], [1.0, -1.0], [-1.0, -1.0], [-1.0, 1.0]]))
                .unwrap();
        let v = poly.vertices();
        assert!(v[0].cross(v[1]) > 0.0);
        assert!(poly.is_centrally_symmetric());
    }

    #[test]
    fn collinear_vertices_are_merged() {
        let poly = ConvexPolygon::from_cycle(&pts(&[
            [1.0, -1.0],
            [1.0, 0.0],
            [1.0, 1.0],
            [-1.0, 1.0],
            [-1.0, -1.0],
            [0.0, -1.0],
        ]))
        .unwrap();
        assert_eq!(poly.len(), 4);
    }

    #[test]
    fn reflex_vertex_is_named() {
        let err = ConvexPolygon::from_cycle(&pts(&[
            [1.0, 0.0],
            [0.2, 0.2],
            [0.0, 1.0],
            [-1.0, 0.0],
            [0.0, -1.0],
        ]))
        .unwrap_err();
        match err {
            Error::InvalidNorm {
                vertex: Some((1, p)),
                ..
            } => assert_eq!(p, Point::new(0.2, 0.2)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let hull = convex_hull(&pts(&[
            [0.0, 0.0],
            [2.0, 0.0],
            [1.0, 0.0],
            [2.0, 2.0],
            [0.0, 2.0],
            [1.0, 1.0],
        ]));
        assert_eq!(hull, pts(&[[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]]));
    }
}
