//! Euclidean predicates: Radon partitions, point-in-simplex, exact Tverberg
//! verification and enumeration, and central projection from an endpoint.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::combin::{self, Combinations};
use crate::error::{Error, Result};
use crate::kernel::{
    self, det, orientation, ratio, solve_system, solve_system_integral, IntegralSolution, Point, Rational, Sign,
    SystemSolution,
};
use crate::sequence::PointSequence;
use crate::types::{t_param, TverbergType};

/// The Radon partition of `d + 2` points with its common point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RadonResult {
    /// 0-based positions; the first side contains position 0.
    pub sides: [Vec<usize>; 2],
    /// Convex weights aligned with `sides`.
    #[serde(serialize_with = "kernel::serialize_rational_rows")]
    pub weights: [Vec<Rational>; 2],
    pub point: Point,
}

impl RadonResult {
    pub fn as_type(&self) -> TverbergType {
        let n = self.sides[0].len() + self.sides[1].len();
        let mut owner = vec![0u8; n];
        for &i in &self.sides[1] {
            owner[i] = 1;
        }
        TverbergType::from_assignment(n - 2, 2, &owner).expect("radon sides form a type")
    }
}

/// A Tverberg partition together with its common point and positive weights.
///
/// The exact solution is kept as integer numerators over one positive
/// denominator; reduced rationals are produced on first access, since gcds
/// on grid-sized integers dominate the cost of verification.
#[derive(Debug, Clone)]
pub struct TverbergCertificate {
    pub ty: TverbergType,
    numerators: Vec<BigInt>,
    denominator: BigInt,
    point_raw: Vec<(BigInt, BigInt)>,
    reduced: OnceLock<(Point, Vec<Vec<Rational>>)>,
}

impl TverbergCertificate {
    fn new(ty: TverbergType, numerators: Vec<BigInt>, denominator: BigInt, seq: &PointSequence) -> Self {
        let part = &ty.parts()[0];
        let point_raw = Point::combination_unreduced(
            seq.dim(),
            &denominator,
            numerators.iter().zip(part.iter().map(|&i| seq.point(i))),
        );
        TverbergCertificate {
            ty,
            numerators,
            denominator,
            point_raw,
            reduced: OnceLock::new(),
        }
    }

    fn reduced(&self) -> &(Point, Vec<Vec<Rational>>) {
        self.reduced.get_or_init(|| {
            let point = Point::new(self.point_raw.iter().map(|(n, d)| ratio(n.clone(), d.clone())).collect());
            let mut rest = self.numerators.iter();
            let weights = self
                .ty
                .parts()
                .iter()
                .map(|part| {
                    rest.by_ref()
                        .take(part.len())
                        .map(|y| ratio(y.clone(), self.denominator.clone()))
                        .collect()
                })
                .collect();
            (point, weights)
        })
    }

    /// The common point of all parts.
    pub fn point(&self) -> &Point {
        &self.reduced().0
    }

    /// Weights aligned with `ty.parts()`.
    pub fn weights(&self) -> &[Vec<Rational>] {
        &self.reduced().1
    }

    /// Recompute every part's combination and compare with the stored point,
    /// in integers.
    pub fn check(&self, seq: &PointSequence) -> bool {
        let mut rest = self.numerators.iter();
        self.ty.parts().iter().all(|part| {
            let y: Vec<&BigInt> = rest.by_ref().take(part.len()).collect();
            if y.len() != part.len() || !y.iter().all(|v| v.is_positive()) {
                return false;
            }
            let sum: BigInt = y.iter().copied().sum();
            let combo = Point::combination_unreduced(
                seq.dim(),
                &self.denominator,
                y.iter().copied().zip(part.iter().map(|&i| seq.point(i))),
            );
            sum == self.denominator
                && combo
                    .iter()
                    .zip(&self.point_raw)
                    .all(|((n1, d1), (n2, d2))| n1 * d2 == n2 * d1)
        }) && rest.next().is_none()
    }
}

impl PartialEq for TverbergCertificate {
    fn eq(&self, other: &Self) -> bool {
        self.ty == other.ty
            && self.numerators.len() == other.numerators.len()
            && self
                .numerators
                .iter()
                .zip(&other.numerators)
                .all(|(a, b)| a * &other.denominator == b * &self.denominator)
    }
}

impl Eq for TverbergCertificate {}

impl Serialize for TverbergCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let weights: Vec<Vec<String>> = self
            .weights()
            .iter()
            .map(|w| w.iter().map(kernel::format_rational).collect())
            .collect();
        let mut st = s.serialize_struct("TverbergCertificate", 3)?;
        st.serialize_field("type", &self.ty)?;
        st.serialize_field("point", self.point())?;
        st.serialize_field("weights", &weights)?;
        st.end()
    }
}

/// Common dimension `d` of the points, which must number `d + extra`.
fn check_dim(points: &[Point], extra: usize, what: &str) -> Result<usize> {
    let d = points.first().map_or(0, Point::dim);
    if points.iter().any(|p| p.dim() != d) {
        return Err(Error::Dimension("mixed point dimensions".into()));
    }
    if points.len() != d + extra {
        return Err(Error::Dimension(format!(
            "{what} in dimension {d} needs {} points, got {}",
            d + extra,
            points.len()
        )));
    }
    Ok(d)
}

/// The unique partition of `d + 2` generic points into two parts with
/// intersecting hulls.
pub fn radon_partition(points: &[Point]) -> Result<RadonResult> {
    let d = check_dim(points, 2, "a Radon partition")?;
    let n = d + 2;
    // sum a_i = 0, sum a_i p_i = 0, a_1 = 1
    let mut a = Vec::with_capacity(n);
    a.push(vec![Rational::one(); n]);
    for k in 0..d {
        a.push(points.iter().map(|p| p.coord(k).clone()).collect());
    }
    let mut pin = vec![Rational::zero(); n];
    pin[0] = Rational::one();
    a.push(pin);
    let mut b = vec![Rational::zero(); n];
    b[n - 1] = Rational::one();
    let alpha = match solve_system(&a, &b)? {
        SystemSolution::Unique(x) => x,
        _ => return Err(Error::Genericity("affinely dependent Radon input".into())),
    };
    if let Some(i) = alpha.iter().position(Zero::is_zero) {
        return Err(Error::Genericity(format!(
            "point {} has zero Radon coefficient",
            i + 1
        )));
    }
    let (pos, neg): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| alpha[i].is_positive());
    let total: Rational = pos.iter().map(|&i| &alpha[i]).sum();
    let wp: Vec<Rational> = pos.iter().map(|&i| &alpha[i] / &total).collect();
    let wn: Vec<Rational> = neg.iter().map(|&i| -&alpha[i] / &total).collect();
    let point = Point::combination(d, wp.iter().zip(pos.iter().map(|&i| &points[i])));
    Ok(RadonResult {
        sides: [pos, neg],
        weights: [wp, wn],
        point,
    })
}

/// Whether `q` lies in the interior of the simplex spanned by `d + 1` points.
pub fn point_in_simplex(q: &Point, simplex: &[Point]) -> Result<bool> {
    let d = check_dim(simplex, 1, "a simplex")?;
    if q.dim() != d {
        return Err(Error::Dimension(format!("query point has dimension {}, expected {d}", q.dim())));
    }
    let refs: Vec<&Point> = simplex.iter().collect();
    let base = orientation(&refs)?;
    if base.is_zero() {
        return Err(Error::Genericity("degenerate simplex".into()));
    }
    let mut inside = true;
    for i in 0..=d {
        let mut replaced = refs.clone();
        replaced[i] = q;
        let s = orientation(&replaced)?;
        if s.is_zero() {
            return Err(Error::Genericity(format!("query point on facet opposite vertex {}", i + 1)));
        }
        inside &= s == base;
    }
    Ok(inside)
}

/// Rows of the Tverberg system for the given parts: one sum-to-one row per
/// part, then `d` rows per part `j > 1` equating its combination with that of
/// the first part. Unknowns are the weights, part by part.
fn tverberg_system(seq: &PointSequence, parts: &[Vec<usize>]) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let d = seq.dim();
    let offsets: Vec<usize> = parts
        .iter()
        .scan(0, |acc, p| {
            let o = *acc;
            *acc += p.len();
            Some(o)
        })
        .collect();
    let width: usize = parts.iter().map(Vec::len).sum();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (j, part) in parts.iter().enumerate() {
        let mut row = vec![Rational::zero(); width];
        for k in 0..part.len() {
            row[offsets[j] + k] = Rational::one();
        }
        a.push(row);
        b.push(Rational::one());
    }
    for j in 1..parts.len() {
        for c in 0..d {
            let mut row = vec![Rational::zero(); width];
            for (k, &i) in parts[0].iter().enumerate() {
                row[k] = seq.point(i).coord(c).clone();
            }
            for (k, &i) in parts[j].iter().enumerate() {
                row[offsets[j] + k] = -seq.point(i).coord(c);
            }
            a.push(row);
            b.push(Rational::zero());
        }
    }
    (a, b)
}

/// Exact test of whether the parts of `ty` have a common point in their
/// convex hulls, returning the certificate if so. An inconsistent system
/// (affine hulls that miss each other) yields `None`; an underdetermined one
/// is a genericity error.
///
/// Parts larger than `d + 1` make the square system singular. They are cut
/// to their first `d + 1` points, which keeps every affine hull unchanged;
/// for generic input the resulting overdetermined system is inconsistent.
pub fn verify_tverberg(seq: &PointSequence, ty: &TverbergType) -> Result<Option<TverbergCertificate>> {
    let d = seq.dim();
    let n = t_param(d, ty.r());
    if ty.d() != d {
        return Err(Error::Dimension(format!(
            "type for dimension {} applied to points of dimension {d}",
            ty.d()
        )));
    }
    if seq.len() != n {
        return Err(Error::Dimension(format!(
            "need T({d},{}) = {n} points, got {}",
            ty.r(),
            seq.len()
        )));
    }
    let parts = ty.parts();
    if parts.iter().any(|p| p.len() > d + 1) {
        let cut: Vec<Vec<usize>> = parts.iter().map(|p| p[..p.len().min(d + 1)].to_vec()).collect();
        let (a, b) = tverberg_system(seq, &cut);
        return match solve_system(&a, &b)? {
            SystemSolution::Inconsistent => Ok(None),
            _ => Err(Error::Genericity(format!(
                "affine hulls of the parts of {ty} meet despite an oversized part"
            ))),
        };
    }
    let (a, b) = tverberg_system(seq, parts);
    let (y, den) = match solve_system_integral(&a, &b)? {
        IntegralSolution::Unique {
            numerators,
            denominator,
        } => (numerators, denominator),
        // Parallel affine hulls, e.g. chords t1 t4 and t2 t3 of a parabola
        // with t1 + t4 = t2 + t3: no common point at all.
        IntegralSolution::Inconsistent => return Ok(None),
        IntegralSolution::Underdetermined => {
            return Err(Error::Genericity(format!("singular Tverberg system for {ty}")))
        }
    };
    if !y.iter().all(Signed::is_positive) {
        return Ok(None);
    }
    Ok(Some(TverbergCertificate::new(ty.clone(), y, den, seq)))
}

/// Every Tverberg partition of `T(d, r)` points into `r` parts, in canonical
/// order (restricted growth strings, lexicographic).
pub fn enumerate_tverberg_partitions(seq: &PointSequence, r: usize) -> Result<Vec<TverbergCertificate>> {
    let d = seq.dim();
    if d == 0 || r < 2 {
        return Err(Error::Precondition(format!("need d >= 1 and r >= 2, got d={d}, r={r}")));
    }
    let n = t_param(d, r);
    if seq.len() != n {
        return Err(Error::Dimension(format!("need T({d},{r}) = {n} points, got {}", seq.len())));
    }
    let found: Vec<Option<TverbergCertificate>> = combin::set_partitions(n, r)
        .into_par_iter()
        .map(|a| {
            let ty = TverbergType::from_assignment(d, r, &a)?;
            verify_tverberg(seq, &ty)
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Which end of the sequence to project from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    First,
    Last,
}

/// `det[v_1, ..., v_{d-1}, w]` as a linear functional of `w`.
fn cofactor_normal(vectors: &[Vec<Rational>], d: usize) -> Result<Vec<Rational>> {
    (0..d)
        .map(|k| {
            let minor: Vec<Vec<Rational>> = vectors
                .iter()
                .map(|v| v.iter().enumerate().filter(|&(c, _)| c != k).map(|(_, x)| x.clone()).collect())
                .collect();
            let m = det(&minor)?;
            Ok(if (d - 1 + k) % 2 == 0 { m } else { -m })
        })
        .collect()
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Centrally project the other points from an endpoint `p` into a hyperplane
/// `H` separating `p` from them, and express the images in a
/// `(d-1)`-dimensional chart of `H`.
///
/// `H = {x : f(x - p) = 1}` where `f` is the sum of the inward normals of the
/// facets of the cone at `p` spanned by the other points. The chart drops a
/// coordinate and is signed so that the chart orientation of `d` images
/// equals `orient(q_1, ..., q_d, p)` of their preimages.
pub fn central_project(seq: &PointSequence, endpoint: Endpoint) -> Result<PointSequence> {
    let d = seq.dim();
    if d < 2 {
        return Err(Error::Precondition("central projection needs d >= 2".into()));
    }
    if seq.len() < 2 {
        return Err(Error::Precondition("central projection needs at least two points".into()));
    }
    let (p, others): (&Point, Vec<&Point>) = match endpoint {
        Endpoint::First => (seq.point(0), seq.points()[1..].iter().collect()),
        Endpoint::Last => (seq.point(seq.len() - 1), seq.points()[..seq.len() - 1].iter().collect()),
    };
    let diffs: Vec<Vec<Rational>> = others.iter().map(|q| q.sub(p)).collect();

    let mut f = vec![Rational::zero(); d];
    let mut facets = 0;
    for subset in Combinations::new(diffs.len(), d - 1) {
        let span: Vec<Vec<Rational>> = subset.iter().map(|&i| diffs[i].clone()).collect();
        let normal = cofactor_normal(&span, d)?;
        let mut side = None;
        let mut facet = true;
        for (j, v) in diffs.iter().enumerate() {
            if subset.contains(&j) {
                continue;
            }
            let s = Sign::of(&dot(&normal, v));
            if s.is_zero() {
                return Err(Error::Genericity("endpoint cone has a degenerate facet".into()));
            }
            if side.is_some_and(|t| t != s) {
                facet = false;
                break;
            }
            side = Some(s);
        }
        if facet {
            facets += 1;
            let flip = side == Some(Sign::Negative);
            for (fk, nk) in f.iter_mut().zip(normal) {
                if flip {
                    *fk -= nk;
                } else {
                    *fk += nk;
                }
            }
        }
    }
    if facets == 0 {
        return Err(Error::Precondition("projection endpoint lies inside the hull of the others".into()));
    }

    let mut images = Vec::with_capacity(diffs.len());
    for v in &diffs {
        let h = dot(&f, v);
        if !h.is_positive() {
            return Err(Error::Precondition("projection endpoint is not separated from the others".into()));
        }
        images.push(v.iter().map(|x| x / &h).collect::<Vec<_>>());
    }
    let drop = f.iter().position(|x| !x.is_zero()).expect("nonzero functional");
    let mut chart: Vec<Vec<Rational>> = images
        .iter()
        .map(|v| v.iter().enumerate().filter(|&(k, _)| k != drop).map(|(_, x)| x.clone()).collect())
        .collect();

    if images.len() >= d {
        // sign of det[v_1..v_d] is orient(q_1..q_d, p) up to (-1)^d
        let target = Sign::of(&det(&images[..d])?) * parity_sign(d);
        let pts: Vec<Point> = chart[..d].iter().cloned().map(Point::new).collect();
        let got = kernel::orientation_of(&pts)?;
        if got.is_zero() || target.is_zero() {
            return Err(Error::Genericity("projected points are affinely dependent".into()));
        }
        if got != target {
            for row in &mut chart {
                row[0] = -&row[0];
            }
        }
    }
    PointSequence::with_dim(d - 1, chart.into_iter().map(Point::new).collect())
}

/// `orient(q_1, ..., q_d, p) = (-1)^d sign det[q_i - p]`.
fn parity_sign(d: usize) -> Sign {
    if d % 2 == 0 {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

/// Point `t` of the moment curve `(t, t^2, ..., t^d)`.
pub fn moment_point(t: i64, d: usize) -> Point {
    Point::from_ints(&(1..=d as u32).map(|k| t.pow(k)).collect::<Vec<_>>())
}

/// Moment-curve points at the given parameters.
pub fn moment_curve(params: impl IntoIterator<Item = i64>, d: usize) -> PointSequence {
    PointSequence::with_dim(d, params.into_iter().map(|t| moment_point(t, d)).collect())
        .expect("uniform dimension")
}

/// Sierksma's configuration: `r - 1` slightly perturbed copies of each vertex
/// of a large simplex, followed by a center point. The vertex clouds come in
/// order, so cloud `i` occupies positions `(r-1) i .. (r-1)(i+1)`.
pub fn sierksma_configuration(d: usize, r: usize) -> Result<PointSequence> {
    if d == 0 || r < 2 {
        return Err(Error::Precondition(format!("need d >= 1 and r >= 2, got d={d}, r={r}")));
    }
    let scale = 1000 * (d as i64 + 1);
    let mut points = Vec::with_capacity(t_param(d, r));
    let mut t = 1i64;
    for v in 0..=d {
        for _ in 0..r - 1 {
            let jitter = moment_point(t, d);
            let coords: Vec<Rational> = (0..d)
                .map(|k| {
                    let base = if v == k + 1 { scale } else { 0 };
                    Rational::from_integer(base.into()) + jitter.coord(k)
                })
                .collect();
            points.push(Point::new(coords));
            t += 1;
        }
    }
    // near the barycenter, jittered off every hyperplane through the clouds
    let center: Vec<Rational> = (0..d)
        .map(|k| kernel::rat(scale, d as i64 + 1) + kernel::rat(k as i64 + 1, 7))
        .collect();
    points.push(Point::new(center));
    PointSequence::with_dim(d, points)
}
