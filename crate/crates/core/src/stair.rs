//! Stair-convexity: stair-paths, hull membership by point types, and
//! stair-Tverberg partitions.
//!
//! Hull membership only compares coordinates, so the enumeration routines
//! work on coordinate ranks and map the result back at the end.

use rayon::prelude::*;
use serde::Serialize;

use crate::combin::{self, permutations};
use crate::error::{Error, Result};
use crate::kernel::{Point, Rational};
use crate::sequence::PointSequence;
use crate::types::{canonical_assignment, t_param, TverbergType};

/// Axis-parallel polygonal path between two points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StairPath {
    vertices: Vec<Point>,
}

impl StairPath {
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn segments(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    /// Position of `x` along the path as (segment, is-on-segment), if on it.
    fn locate(&self, x: &Point) -> Option<usize> {
        if self.vertices.len() == 1 {
            return (self.vertices[0] == *x).then_some(0);
        }
        self.vertices
            .windows(2)
            .position(|w| on_segment(x, &w[0], &w[1]))
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.locate(x).is_some()
    }

    /// The part of the path between two of its points, oriented from `c` to `e`.
    pub fn portion(&self, c: &Point, e: &Point) -> Option<StairPath> {
        let (i, j) = (self.locate(c)?, self.locate(e)?);
        let ahead = |a: &Point, b: &Point, seg: usize| {
            let start = &self.vertices[seg];
            distance_l1(start, a) <= distance_l1(start, b)
        };
        let forward = i < j || (i == j && ahead(c, e, i));
        let mut v = vec![c.clone()];
        if forward {
            v.extend(self.vertices[i + 1..=j].iter().cloned());
        } else {
            v.extend(self.vertices[j + 1..=i].iter().rev().cloned());
        }
        v.push(e.clone());
        Some(StairPath { vertices: collapse(v) })
    }
}

fn distance_l1(a: &Point, b: &Point) -> Rational {
    a.sub(b).iter().map(|x| if x < &Rational::from_integer(0.into()) { -x } else { x.clone() }).sum()
}

fn on_segment(x: &Point, a: &Point, b: &Point) -> bool {
    x.coords()
        .iter()
        .zip(a.coords().iter().zip(b.coords()))
        .all(|(xi, (ai, bi))| {
            let (lo, hi) = if ai <= bi { (ai, bi) } else { (bi, ai) };
            lo <= xi && xi <= hi
        })
}

fn collapse(v: Vec<Point>) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(v.len());
    for p in v {
        if out.last() != Some(&p) {
            out.push(p);
        }
    }
    out
}

/// The stair-path from `a` to `b`: rise along the last axis from the lower
/// endpoint, then recurse on the remaining coordinates.
pub fn stair_path(a: &Point, b: &Point) -> Result<StairPath> {
    if a.dim() != b.dim() || a.dim() == 0 {
        return Err(Error::Dimension(format!(
            "stair path between dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    fn rec(a: &Point, b: &Point, k: usize) -> Vec<Point> {
        if k == 1 {
            return vec![a.clone(), b.clone()];
        }
        let last = k - 1;
        if a.coord(last) <= b.coord(last) {
            let mut coords = a.coords().to_vec();
            coords[last] = b.coord(last).clone();
            let turn = Point::new(coords);
            let mut out = vec![a.clone()];
            out.extend(rec(&turn, b, k - 1));
            out
        } else {
            let mut out = rec(b, a, k);
            out.reverse();
            out
        }
    }
    Ok(StairPath {
        vertices: collapse(rec(a, b, a.dim())),
    })
}

/// Bitmask of the types of `b` with respect to `a` (bit `j` for type `j`).
fn type_mask<T: PartialOrd>(b: &[T], a: &[T]) -> u64 {
    let d = a.len();
    // highest 1-based axis where b exceeds a
    let m = (1..=d).rev().find(|&i| b[i - 1] > a[i - 1]).unwrap_or(0);
    let mut mask = u64::from(m == 0);
    for j in m.max(1)..=d {
        if b[j - 1] >= a[j - 1] {
            mask |= 1 << j;
        }
    }
    mask
}

fn full_mask(d: usize) -> u64 {
    (1u64 << (d + 1)) - 1
}

fn hull_contains<'a, T: PartialOrd + 'a>(x: &[T], s: impl IntoIterator<Item = &'a [T]>) -> bool {
    let full = full_mask(x.len());
    let mut acc = 0;
    for p in s {
        acc |= type_mask(p, x);
        if acc == full {
            return true;
        }
    }
    false
}

/// The types `j` in `0..=d` that `b` has with respect to `a`.
pub fn point_type(b: &Point, a: &Point) -> Result<Vec<usize>> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!("dimensions {} and {}", b.dim(), a.dim())));
    }
    let mask = type_mask(b.coords(), a.coords());
    Ok((0..=a.dim()).filter(|j| mask >> j & 1 == 1).collect())
}

/// Whether `x` lies in the stair-convex hull of `s`: `s` has a point of
/// every type with respect to `x`.
pub fn in_stair_hull(x: &Point, s: &[Point]) -> Result<bool> {
    if let Some(p) = s.iter().find(|p| p.dim() != x.dim()) {
        return Err(Error::Dimension(format!("dimensions {} and {}", p.dim(), x.dim())));
    }
    Ok(hull_contains(x.coords(), s.iter().map(Point::coords)))
}

/// No two distinct points share any coordinate.
pub fn is_stair_general(s: &[Point]) -> bool {
    let d = s.first().map_or(0, Point::dim);
    (0..d).all(|k| {
        let mut v: Vec<&Rational> = s.iter().map(|p| p.coord(k)).collect();
        v.sort();
        v.windows(2).all(|w| w[0] != w[1])
    })
}

/// Points replaced by their per-coordinate ranks.
struct Ranked {
    d: usize,
    ranks: Vec<Vec<u32>>,
    values: Vec<Vec<Rational>>,
}

impl Ranked {
    fn new(points: &[Point]) -> Result<Ranked> {
        let d = points.first().map_or(0, Point::dim);
        if points.iter().any(|p| p.dim() != d) {
            return Err(Error::Dimension("mixed point dimensions".into()));
        }
        if !is_stair_general(points) {
            return Err(Error::Precondition("points are not in stair-general position".into()));
        }
        let mut ranks = vec![vec![0u32; d]; points.len()];
        let mut values = Vec::with_capacity(d);
        for k in 0..d {
            let mut order: Vec<usize> = (0..points.len()).collect();
            order.sort_by(|&i, &j| points[i].coord(k).cmp(points[j].coord(k)));
            for (rank, &i) in order.iter().enumerate() {
                ranks[i][k] = rank as u32;
            }
            values.push(order.iter().map(|&i| points[i].coord(k).clone()).collect());
        }
        Ok(Ranked { d, ranks, values })
    }

    fn point(&self, rank: &[u32]) -> Point {
        Point::new(
            rank.iter()
                .enumerate()
                .map(|(k, &r)| self.values[k][r as usize].clone())
                .collect(),
        )
    }

    /// The unique grid point in every part's hull, or an error if there are several.
    fn intersection(&self, parts: &[Vec<usize>]) -> Result<Option<Vec<u32>>> {
        let n = self.ranks.len() as u32;
        let d = self.d;
        let mut cand = vec![0u32; d];
        let mut found: Option<Vec<u32>> = None;
        loop {
            let inside = parts
                .iter()
                .all(|part| hull_contains(&cand, part.iter().map(|&i| self.ranks[i].as_slice())));
            if inside {
                if found.is_some() {
                    return Err(Error::Invariant(
                        "stair hulls meet in more than one grid point".into(),
                    ));
                }
                found = Some(cand.clone());
            }
            let mut k = 0;
            loop {
                if k == d {
                    return Ok(found);
                }
                cand[k] += 1;
                if cand[k] < n {
                    break;
                }
                cand[k] = 0;
                k += 1;
            }
        }
    }
}

/// Common point of the stair hulls of the parts, found by testing every
/// point whose coordinates are all taken from the input points.
///
/// The union must be in stair-general position. With more than `T(d, r)`
/// points the intersection may be a continuum, reported as an invariant error.
pub fn stair_hull_intersection_point(parts: &[Vec<Point>]) -> Result<Option<Point>> {
    let all: Vec<Point> = parts.iter().flatten().cloned().collect();
    if all.is_empty() {
        return Ok(None);
    }
    let ranked = Ranked::new(&all)?;
    let mut start = 0;
    let index_parts: Vec<Vec<usize>> = parts
        .iter()
        .map(|p| {
            let ids = (start..start + p.len()).collect();
            start += p.len();
            ids
        })
        .collect();
    Ok(ranked.intersection(&index_parts)?.map(|r| ranked.point(&r)))
}

/// How [`enumerate_stair_tverberg`] finds the partitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StairMethod {
    /// Peel the `r - 1` highest points and recurse on the projection.
    Recursive,
    /// Test every partition with [`stair_hull_intersection_point`].
    BruteForce,
}

/// Stair-Tverberg partitions of a point set and their shared point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StairTverbergResult {
    /// Sorted by canonical encoding.
    pub partitions: Vec<TverbergType>,
    pub point: Option<Point>,
}

pub fn enumerate_stair_tverberg(seq: &PointSequence, r: usize, method: StairMethod) -> Result<StairTverbergResult> {
    let d = seq.dim();
    if d == 0 || r < 2 {
        return Err(Error::Precondition(format!("need d >= 1 and r >= 2, got d={d}, r={r}")));
    }
    let n = t_param(d, r);
    if seq.len() != n {
        return Err(Error::Dimension(format!("need T({d},{r}) = {n} points, got {}", seq.len())));
    }
    let ranked = Ranked::new(seq.points())?;
    let (mut codes, point) = match method {
        StairMethod::Recursive => {
            let ids: Vec<usize> = (0..n).collect();
            let (raw, y) = recursive_partitions(&ranked, &ids, d, r);
            let codes: Vec<Vec<u8>> = raw.iter().map(|a| canonical_assignment(a)).collect();
            (codes, Some(y))
        }
        StairMethod::BruteForce => {
            let hits: Vec<Option<(Vec<u8>, Vec<u32>)>> = combin::set_partitions(n, r)
                .into_par_iter()
                .map(|a| {
                    let parts = combin::blocks_of(&a);
                    Ok(ranked.intersection(&parts)?.map(|x| (a, x)))
                })
                .collect::<Result<_>>()?;
            let hits: Vec<(Vec<u8>, Vec<u32>)> = hits.into_iter().flatten().collect();
            let point = hits.first().map(|(_, x)| x.clone());
            if hits.iter().any(|(_, x)| Some(x) != point.as_ref()) {
                return Err(Error::Invariant("stair-Tverberg partitions with different points".into()));
            }
            (hits.into_iter().map(|(a, _)| a).collect(), point)
        }
    };
    codes.sort();
    codes.dedup();
    let partitions = codes
        .iter()
        .map(|a| TverbergType::from_assignment(d, r, a))
        .collect::<Result<_>>()?;
    Ok(StairTverbergResult {
        partitions,
        point: point.map(|p| ranked.point(&p)),
    })
}

/// Partitions of the points `ids` (by their first `k` coordinates) as raw
/// labels aligned with `ids`, plus the rank vector of the common point.
fn recursive_partitions(ranked: &Ranked, ids: &[usize], k: usize, r: usize) -> (Vec<Vec<u8>>, Vec<u32>) {
    if k == 0 {
        return (vec![(0..r as u8).collect()], Vec::new());
    }
    let mut order: Vec<usize> = (0..ids.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(ranked.ranks[ids[i]][k - 1]));
    let (top, rest) = order.split_at(r - 1);
    let rest_ids: Vec<usize> = rest.iter().map(|&i| ids[i]).collect();
    let (sub, mut y) = recursive_partitions(ranked, &rest_ids, k - 1, r);
    // rest[0] is the highest remaining point p_r
    let pr_height = ranked.ranks[ids[rest[0]]][k - 1];
    y.push(pr_height);

    let mut out = Vec::with_capacity(sub.len() * combin::factorial(r as u64 - 1) as usize);
    for labels in &sub {
        let owner = labels[0];
        let free: Vec<u8> = (0..r as u8).filter(|&c| c != owner).collect();
        for perm in permutations(&free) {
            let mut a = vec![0u8; ids.len()];
            for (pos, &i) in rest.iter().enumerate() {
                a[i] = labels[pos];
            }
            for (&i, &c) in top.iter().zip(&perm) {
                a[i] = c;
            }
            out.push(a);
        }
    }
    (out, y)
}

/// Shrink parts whose stair hulls share the point `x` to subsets of total
/// size `T(d, r)` whose hulls still meet. Returns, per part, the indices of
/// the kept points.
pub fn stair_kirchberger_reduce(parts: &[Vec<Point>], x: &Point) -> Result<Vec<Vec<usize>>> {
    let r = parts.len();
    let d = x.dim();
    if d == 0 || r < 2 {
        return Err(Error::Precondition(format!("need d >= 1 and r >= 2, got d={d}, r={r}")));
    }
    let all: Vec<Point> = parts.iter().flatten().cloned().collect();
    if all.iter().any(|p| p.dim() != d) {
        return Err(Error::Dimension("mixed point dimensions".into()));
    }
    if !is_stair_general(&all) {
        return Err(Error::Precondition("points are not in stair-general position".into()));
    }
    for (i, p) in parts.iter().enumerate() {
        if !in_stair_hull(x, p)? {
            return Err(Error::Precondition(format!("witness not in the stair hull of part {}", i + 1)));
        }
    }
    let total: usize = parts.iter().map(Vec::len).sum();
    if total < t_param(d, r) {
        return Err(Error::Precondition("fewer than T(d, r) points".into()));
    }
    let ids: Vec<Vec<usize>> = parts.iter().map(|p| (0..p.len()).collect()).collect();
    let (kept, _) = reduce_rec(parts, &ids, x.coords(), d);
    Ok(kept)
}

/// Works on the first `k` coordinates of the points `parts[i][ids[i][..]]`.
/// Returns the kept indices and a common point of the reduced hulls.
fn reduce_rec(parts: &[Vec<Point>], ids: &[Vec<usize>], x: &[Rational], k: usize) -> (Vec<Vec<usize>>, Vec<Rational>) {
    let c = |i: usize, j: usize, axis: usize| parts[i][j].coord(axis);
    let axis = k - 1;
    if k == 1 {
        // rightmost point of the intersection of the intervals
        let (owner, &best) = ids
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.iter().max_by(|&&a, &&b| c(i, a, 0).cmp(c(i, b, 0))).expect("nonempty part")))
            .min_by(|(i, a), (j, b)| c(*i, **a, 0).cmp(c(*j, **b, 0)))
            .expect("at least one part");
        let kept = ids
            .iter()
            .enumerate()
            .map(|(i, v)| {
                if i == owner {
                    vec![best]
                } else {
                    let lo = *v.iter().min_by(|&&a, &&b| c(i, a, 0).cmp(c(i, b, 0))).expect("nonempty");
                    let hi = *v.iter().max_by(|&&a, &&b| c(i, a, 0).cmp(c(i, b, 0))).expect("nonempty");
                    let mut s = vec![lo, hi];
                    s.dedup();
                    s
                }
            })
            .collect();
        return (kept, vec![c(owner, best, 0).clone()]);
    }
    let lower: Vec<Vec<usize>> = ids
        .iter()
        .enumerate()
        .map(|(i, v)| v.iter().copied().filter(|&j| c(i, j, axis) <= &x[axis]).collect())
        .collect();
    let (mut kept, mut y) = reduce_rec(parts, &lower, &x[..axis], k - 1);
    let (owner, q) = kept
        .iter()
        .enumerate()
        .flat_map(|(i, v)| v.iter().map(move |&j| (i, j)))
        .max_by(|&(i, a), &(j, b)| c(i, a, axis).cmp(c(j, b, axis)))
        .expect("reduced parts are nonempty");
    y.push(c(owner, q, axis).clone());
    for (i, v) in ids.iter().enumerate() {
        if i == owner {
            continue;
        }
        let top = *v.iter().max_by(|&&a, &&b| c(i, a, axis).cmp(c(i, b, axis))).expect("nonempty part");
        if !kept[i].contains(&top) {
            kept[i].push(top);
        }
        kept[i].sort_unstable();
    }
    (kept, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;
    use crate::types::colorful_count;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Point {
        Point::from_ints(c)
    }

    /// Slice recursion: a point is in the hull iff some point is at least as
    /// high and the projection of the points not above it covers the rest.
    fn in_hull_by_slices(x: &[Rational], s: &[Vec<Rational>]) -> bool {
        let d = x.len();
        if d == 1 {
            return s.iter().any(|p| p[0] <= x[0]) && s.iter().any(|p| p[0] >= x[0]);
        }
        if !s.iter().any(|p| p[d - 1] >= x[d - 1]) {
            return false;
        }
        let below: Vec<Vec<Rational>> = s
            .iter()
            .filter(|p| p[d - 1] <= x[d - 1])
            .map(|p| p[..d - 1].to_vec())
            .collect();
        !below.is_empty() && in_hull_by_slices(&x[..d - 1], &below)
    }

    #[test]
    fn path_examples() {
        let a = stair_path(&p(&[0]), &p(&[1])).unwrap();
        assert_eq!(a.segments(), 1);
        let b = stair_path(&p(&[0, 0]), &p(&[1, 1])).unwrap();
        assert_eq!(b.vertices(), &[p(&[0, 0]), p(&[0, 1]), p(&[1, 1])]);
        let c = stair_path(&p(&[0, 0, 0]), &p(&[1, 1, 1])).unwrap();
        assert_eq!(c.vertices(), &[p(&[0, 0, 0]), p(&[0, 0, 1]), p(&[0, 1, 1]), p(&[1, 1, 1])]);
        let back = stair_path(&p(&[1, 1]), &p(&[0, 0])).unwrap();
        assert_eq!(back.vertices(), &[p(&[1, 1]), p(&[0, 1]), p(&[0, 0])]);
        let tie = stair_path(&p(&[0, 2]), &p(&[3, 2])).unwrap();
        assert_eq!(tie.segments(), 1);
        assert!(stair_path(&p(&[0]), &p(&[0, 1])).is_err());
    }

    #[test]
    fn type_examples() {
        assert_eq!(point_type(&p(&[-1, -1]), &p(&[0, 0])).unwrap(), vec![0]);
        assert_eq!(point_type(&p(&[2, 3, 4]), &p(&[2, 3, 4])).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(point_type(&p(&[5, -1]), &p(&[0, 0])).unwrap(), vec![1]);
        assert_eq!(point_type(&p(&[-5, 1]), &p(&[0, 0])).unwrap(), vec![2]);
    }

    #[test]
    fn hull_examples() {
        let s = vec![p(&[0, 3]), p(&[2, 0]), p(&[3, 2])];
        for q in &s {
            assert!(in_stair_hull(q, &s).unwrap());
        }
        let x = p(&[1, 1]);
        let coords: Vec<Vec<Rational>> = s.iter().map(|q| q.coords().to_vec()).collect();
        assert_eq!(in_stair_hull(&x, &s).unwrap(), in_hull_by_slices(x.coords(), &coords));
        let line = vec![p(&[1]), p(&[5])];
        assert!(in_stair_hull(&p(&[3]), &line).unwrap());
        assert!(!in_stair_hull(&p(&[6]), &line).unwrap());
    }

    #[test]
    fn general_position_examples() {
        assert!(!is_stair_general(&[p(&[1, 2]), p(&[1, 3])]));
        assert!(is_stair_general(&[p(&[1, 2]), p(&[2, 3]), p(&[5, 0])]));
    }

    #[test]
    fn intersection_examples() {
        let parts = vec![vec![p(&[1]), p(&[3])], vec![p(&[2])]];
        assert_eq!(stair_hull_intersection_point(&parts).unwrap(), Some(p(&[2])));
        let four = PointSequence::from_ints(&[&[0, 3], &[2, 0], &[3, 2], &[1, 1]]).unwrap();
        let brute = enumerate_stair_tverberg(&four, 2, StairMethod::BruteForce).unwrap();
        assert_eq!(brute.partitions.len(), 1);
    }

    #[test]
    fn enumeration_examples() {
        let line = PointSequence::from_ints(&[&[4], &[1], &[5], &[2], &[3]]).unwrap();
        for m in [StairMethod::Recursive, StairMethod::BruteForce] {
            assert_eq!(enumerate_stair_tverberg(&line, 3, m).unwrap().partitions.len(), 2);
        }
        let plane = PointSequence::from_ints(&[&[3, 6], &[0, 2], &[5, 0], &[6, 5], &[1, 4], &[2, 1], &[4, 3]]).unwrap();
        let rec = enumerate_stair_tverberg(&plane, 3, StairMethod::Recursive).unwrap();
        let brute = enumerate_stair_tverberg(&plane, 3, StairMethod::BruteForce).unwrap();
        assert_eq!(rec.partitions.len(), 4);
        assert_eq!(rec, brute);
        let tie = PointSequence::from_ints(&[&[1, 6], &[1, 2], &[5, 0], &[6, 5], &[2, 4], &[3, 1], &[4, 3]]).unwrap();
        assert!(matches!(
            enumerate_stair_tverberg(&tie, 3, StairMethod::Recursive),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn kirchberger_examples() {
        let parts = vec![vec![p(&[1]), p(&[5])], vec![p(&[2]), p(&[4]), p(&[6])]];
        let kept = stair_kirchberger_reduce(&parts, &p(&[3])).unwrap();
        assert_eq!(kept.iter().map(Vec::len).sum::<usize>(), 3);
        let sub: Vec<Vec<Point>> = kept
            .iter()
            .zip(&parts)
            .map(|(k, part)| k.iter().map(|&i| part[i].clone()).collect())
            .collect();
        assert!(stair_hull_intersection_point(&sub).unwrap().is_some());

        let exact = vec![vec![p(&[1]), p(&[3])], vec![p(&[2])]];
        assert_eq!(stair_kirchberger_reduce(&exact, &p(&[2])).unwrap(), vec![vec![0, 1], vec![0]]);
        assert!(stair_kirchberger_reduce(&exact, &p(&[5])).is_err());
    }

    fn stair_general(d: usize, n: usize) -> impl Strategy<Value = Vec<Point>> {
        let column = Just((0..n as i64 * 3).collect::<Vec<_>>()).prop_shuffle();
        prop::collection::vec(column, d).prop_map(move |cols| {
            (0..n).map(|i| Point::from_ints(&cols.iter().map(|c| c[i]).collect::<Vec<_>>())).collect()
        })
    }

    fn small_set(d: usize) -> impl Strategy<Value = (Vec<Point>, Point)> {
        (
            prop::collection::vec(prop::collection::vec(0i64..6, d), 1..=7),
            prop::collection::vec(0i64..6, d),
        )
            .prop_map(|(s, x)| (s.iter().map(|c| Point::from_ints(c)).collect(), Point::from_ints(&x)))
    }

    fn stair_instance() -> impl Strategy<Value = (usize, usize, Vec<Point>)> {
        prop::sample::select(vec![(1usize, 2usize), (1, 3), (2, 2), (2, 3), (3, 2), (3, 3)])
            .prop_flat_map(|(d, r)| (Just(d), Just(r), stair_general(d, t_param(d, r))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn caratheodory_matches_slices((s, x) in (1usize..=3).prop_flat_map(small_set)) {
            let coords: Vec<Vec<Rational>> = s.iter().map(|q| q.coords().to_vec()).collect();
            prop_assert_eq!(in_stair_hull(&x, &s).unwrap(), in_hull_by_slices(x.coords(), &coords));
        }

        #[test]
        fn subpaths_coincide(
            a in prop::collection::vec(-5i64..5, 3),
            b in prop::collection::vec(-5i64..5, 3),
            s in 0usize..3, t in 0usize..3,
            u in 0i64..=4, v in 0i64..=4,
        ) {
            let path = stair_path(&Point::from_ints(&a), &Point::from_ints(&b)).unwrap();
            let verts = path.vertices();
            let along = |seg: usize, w: i64| -> Point {
                let seg = seg.min(path.segments().saturating_sub(1));
                let p0 = &verts[seg];
                let p1 = verts.get(seg + 1).unwrap_or(p0);
                let w = rat(w, 4);
                Point::combination(3, [(&(rat(1, 1) - &w), p0), (&w, p1)])
            };
            let c = along(s, u);
            let e = along(t, v);
            prop_assert!(path.contains(&c) && path.contains(&e));
            let portion = path.portion(&c, &e).unwrap();
            prop_assert_eq!(portion, stair_path(&c, &e).unwrap());
        }

        #[test]
        fn share_coordinates((s, x) in (1usize..=3).prop_flat_map(small_set)) {
            let d = x.dim();
            prop_assume!(s.len() <= d + 1 && is_stair_general(&s));
            if in_stair_hull(&x, &s).unwrap() {
                let shared = (0..d).filter(|&k| s.iter().any(|q| q.coord(k) == x.coord(k))).count();
                prop_assert!(shared + s.len() >= d + 1);
            }
        }

        #[test]
        fn axis_closedness((s, x) in (1usize..=3).prop_flat_map(small_set), axis in 0usize..3, w in 0i64..=8) {
            let d = x.dim();
            let axis = axis % d;
            prop_assume!(in_stair_hull(&x, &s).unwrap());
            let xi = x.coord(axis);
            let lo = s.iter().map(|q| q.coord(axis)).filter(|c| *c <= xi).max().unwrap().clone();
            let hi = s.iter().map(|q| q.coord(axis)).filter(|c| *c >= xi).min().unwrap().clone();
            let t = &lo + (&hi - &lo) * rat(w, 8);
            let mut moved = x.coords().to_vec();
            moved[axis] = t;
            prop_assert!(in_stair_hull(&Point::new(moved), &s).unwrap());
        }

        #[test]
        fn too_few_points_never_meet(
            (d, r, pts) in prop::sample::select(vec![(1usize, 2usize), (1, 3), (2, 2), (2, 3)])
                .prop_flat_map(|(d, r)| (Just(d), Just(r), stair_general(d, t_param(d, r) - 1)))
        ) {
            let _ = d;
            for a in combin::set_partitions(pts.len(), r) {
                let parts: Vec<Vec<Point>> = combin::blocks_of(&a)
                    .iter()
                    .map(|b| b.iter().map(|&i| pts[i].clone()).collect())
                    .collect();
                prop_assert_eq!(stair_hull_intersection_point(&parts).unwrap(), None);
            }
        }

        #[test]
        fn reduce_keeps_an_intersection(
            (d, r, pts, extra) in prop::sample::select(vec![(1usize, 2usize), (1, 3), (2, 2), (2, 3)])
                .prop_flat_map(|(d, r)| (Just(d), Just(r), stair_general(d, t_param(d, r) + 2), 0usize..1000))
        ) {
            // find a partition of the first T points that works, then deal the extras in
            let n = t_param(d, r);
            let seq = PointSequence::new(pts[..n].to_vec()).unwrap();
            let found = enumerate_stair_tverberg(&seq, r, StairMethod::Recursive).unwrap();
            let ty = &found.partitions[extra % found.partitions.len()];
            let x = found.point.unwrap();
            let mut parts: Vec<Vec<Point>> = ty.parts().iter().map(|b| b.iter().map(|&i| pts[i].clone()).collect()).collect();
            for (k, q) in pts[n..].iter().enumerate() {
                parts[(extra + k) % r].push(q.clone());
            }
            let kept = stair_kirchberger_reduce(&parts, &x).unwrap();
            prop_assert_eq!(kept.iter().map(Vec::len).sum::<usize>(), n);
            let sub: Vec<Vec<Point>> = kept.iter().zip(&parts).map(|(k, part)| k.iter().map(|&i| part[i].clone()).collect()).collect();
            prop_assert!(stair_hull_intersection_point(&sub).unwrap().is_some());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn recursive_matches_brute_force((d, r, pts) in stair_instance()) {
            let seq = PointSequence::new(pts).unwrap();
            let rec = enumerate_stair_tverberg(&seq, r, StairMethod::Recursive).unwrap();
            let brute = enumerate_stair_tverberg(&seq, r, StairMethod::BruteForce).unwrap();
            prop_assert_eq!(rec.partitions.len() as u64, colorful_count(d, r));
            let highest: Vec<usize> = {
                let mut idx: Vec<usize> = (0..seq.len()).collect();
                idx.sort_by(|&a, &b| seq.point(b).coord(d - 1).cmp(seq.point(a).coord(d - 1)));
                idx[..r].to_vec()
            };
            for ty in &rec.partitions {
                let a = ty.assignment();
                let mut owners: Vec<u8> = highest.iter().map(|&i| a[i]).collect();
                owners.sort();
                owners.dedup();
                prop_assert_eq!(owners.len(), r);
            }
            prop_assert_eq!(rec, brute);
        }
    }
}
