//! Exact convex-hull volumes of integer point sets in dimensions 1 to 3.
//!
//! All predicates are evaluated in `i128`, so the result is exact: a
//! polygon area is a multiple of `1/2` and a polyhedron volume a multiple of
//! `1/6`.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Volume of `conv(points)`; every point must have the same length `d <= 3`.
pub fn hull_volume(points: &[Vec<i64>]) -> Result<Rational> {
    let Some(first) = points.first() else {
        return Ok(Rational::from_integer(0.into()));
    };
    match first.len() {
        1 => {
            let lo = points.iter().map(|p| p[0]).min().unwrap();
            let hi = points.iter().map(|p| p[0]).max().unwrap();
            Ok(Rational::from_integer(BigInt::from(hi - lo)))
        }
        2 => {
            let pts: Vec<[i64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
            Ok(Rational::new(BigInt::from(twice_area(&pts)), BigInt::from(2)))
        }
        3 => {
            let pts: Vec<[i64; 3]> = points.iter().map(|p| [p[0], p[1], p[2]]).collect();
            Ok(Rational::new(BigInt::from(six_volume(&pts)), BigInt::from(6)))
        }
        d => Err(Error::DimensionUnsupported(d)),
    }
}

fn cross(o: [i64; 2], a: [i64; 2], b: [i64; 2]) -> i128 {
    (a[0] - o[0]) as i128 * (b[1] - o[1]) as i128 - (a[1] - o[1]) as i128 * (b[0] - o[0]) as i128
}

/// Andrew's monotone chain; returns the hull in counter-clockwise order
/// without collinear points.
pub fn convex_hull_2d(points: &[[i64; 2]]) -> Vec<[i64; 2]> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<[i64; 2]> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[i64; 2]>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

fn twice_area(points: &[[i64; 2]]) -> i128 {
    let hull = convex_hull_2d(points);
    if hull.len() < 3 {
        return 0;
    }
    let mut acc = 0i128;
    for i in 0..hull.len() {
        let a = hull[i];
        let b = hull[(i + 1) % hull.len()];
        acc += a[0] as i128 * b[1] as i128 - a[1] as i128 * b[0] as i128;
    }
    acc.abs()
}

fn sub3(a: [i64; 3], b: [i64; 3]) -> [i128; 3] {
    [(a[0] - b[0]) as i128, (a[1] - b[1]) as i128, (a[2] - b[2]) as i128]
}

fn det3(u: [i128; 3], v: [i128; 3], w: [i128; 3]) -> i128 {
    u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0]) + u[2] * (v[0] * w[1] - v[1] * w[0])
}

fn orient(a: [i64; 3], b: [i64; 3], c: [i64; 3], p: [i64; 3]) -> i128 {
    det3(sub3(b, a), sub3(c, a), sub3(p, a))
}

fn collinear(a: [i64; 3], b: [i64; 3], c: [i64; 3]) -> bool {
    let u = sub3(b, a);
    let v = sub3(c, a);
    u[1] * v[2] - u[2] * v[1] == 0 && u[2] * v[0] - u[0] * v[2] == 0 && u[0] * v[1] - u[1] * v[0] == 0
}

/// Six times the volume of the hull, by incremental construction.
///
/// A face is visible from a new point only under strictly positive
/// orientation, so points on the current surface are absorbed and
/// coplanar triangles may coexist; the volume is unaffected.
fn six_volume(points: &[[i64; 3]]) -> i128 {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    let n = pts.len();
    if n < 4 {
        return 0;
    }
    let i0 = 0;
    let Some(i1) = (1..n).find(|&i| pts[i] != pts[i0]) else { return 0 };
    let Some(i2) = (1..n).find(|&i| !collinear(pts[i0], pts[i1], pts[i])) else { return 0 };
    let Some(i3) = (1..n).find(|&i| orient(pts[i0], pts[i1], pts[i2], pts[i]) != 0) else { return 0 };

    // Faces are stored with outward orientation: interior points see orient < 0.
    let mut faces: Vec<[usize; 3]> = Vec::new();
    let mut alive: Vec<bool> = Vec::new();
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();

    let add_face = |f: [usize; 3], faces: &mut Vec<[usize; 3]>, alive: &mut Vec<bool>, edges: &mut HashMap<(usize, usize), usize>| {
        let id = faces.len();
        faces.push(f);
        alive.push(true);
        for k in 0..3 {
            edges.insert((f[k], f[(k + 1) % 3]), id);
        }
    };

    let tet = [i0, i1, i2, i3];
    for skip in 0..4 {
        let mut f: Vec<usize> = tet.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &v)| v).collect();
        let other = tet[skip];
        if orient(pts[f[0]], pts[f[1]], pts[f[2]], pts[other]) > 0 {
            f.swap(1, 2);
        }
        add_face([f[0], f[1], f[2]], &mut faces, &mut alive, &mut edges);
    }

    for p in 0..n {
        if tet.contains(&p) {
            continue;
        }
        let visible: Vec<usize> = (0..faces.len())
            .filter(|&f| alive[f] && {
                let [a, b, c] = faces[f];
                orient(pts[a], pts[b], pts[c], pts[p]) > 0
            })
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut is_visible = vec![false; faces.len()];
        for &f in &visible {
            is_visible[f] = true;
        }
        let mut horizon = Vec::new();
        for &f in &visible {
            let face = faces[f];
            for k in 0..3 {
                let (u, v) = (face[k], face[(k + 1) % 3]);
                let across = edges[&(v, u)];
                if !is_visible[across] {
                    horizon.push((u, v));
                }
            }
        }
        for &f in &visible {
            alive[f] = false;
            let face = faces[f];
            for k in 0..3 {
                let key = (face[k], face[(k + 1) % 3]);
                if edges.get(&key) == Some(&f) {
                    edges.remove(&key);
                }
            }
        }
        for (u, v) in horizon {
            add_face([u, v, p], &mut faces, &mut alive, &mut edges);
        }
    }

    let o = pts[i0];
    let mut acc = 0i128;
    for (f, face) in faces.iter().enumerate() {
        if alive[f] {
            acc += orient(o, pts[face[0]], pts[face[1]], pts[face[2]]);
        }
    }
    acc.abs()
}
