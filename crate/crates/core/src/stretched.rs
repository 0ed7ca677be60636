//! The stretched grid, its diagonal, stretched distances, and experiments
//! comparing Euclidean Tverberg partitions of far-apart grid points with
//! stair-Tverberg partitions of their exponent vectors.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, ToPrimitive};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::combin;
use crate::convex::{enumerate_tverberg_partitions, verify_tverberg};
use crate::error::{Error, Result};
use crate::kernel::{Point, Rational};
use crate::sequence::PointSequence;
use crate::stair::{self, stair_hull_intersection_point};
use crate::types::{colorful_count, t_param, TverbergType, TypeEncoding};

/// Grid constants `K_1 = 2`, `K_i = 2 d^2 K_{i-1}^m`.
#[derive(Debug, Clone, Serialize)]
pub struct StretchedGrid {
    pub d: usize,
    pub m: u32,
    #[serde(serialize_with = "serialize_bigints")]
    pub k: Vec<BigInt>,
    #[serde(skip)]
    ln_k: Vec<f64>,
}

impl PartialEq for StretchedGrid {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.m == other.m
    }
}

impl Eq for StretchedGrid {}

fn serialize_bigints<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
}

/// Natural logarithm of a positive integer, accurate to about `1e-15`
/// relative error regardless of size.
pub fn ln_bigint(x: &BigInt) -> f64 {
    debug_assert!(x.is_positive());
    let bits = x.bits();
    if bits <= 64 {
        return x.to_f64().expect("small integer").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("64-bit mantissa") as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn ln_rational(x: &Rational) -> f64 {
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

impl StretchedGrid {
    pub fn new(d: usize, m: u32) -> Result<StretchedGrid> {
        if d == 0 || m < 2 {
            return Err(Error::Precondition(format!("need d >= 1 and m >= 2, got d={d}, m={m}")));
        }
        let factor = BigInt::from(2 * d * d);
        let mut k = vec![BigInt::from(2)];
        for i in 1..d {
            let next = &factor * Pow::pow(&k[i - 1], m);
            k.push(next);
        }
        let ln_k = k.iter().map(ln_bigint).collect();
        Ok(StretchedGrid { d, m, k, ln_k })
    }

    /// Coordinates `(K_1^{a_1}, ..., K_d^{a_d})`.
    pub fn coordinates(&self, exponents: &[u32]) -> Result<Point> {
        self.check_exponents(exponents)?;
        Ok(Point::from_bigints(
            exponents.iter().zip(&self.k).map(|(&a, k)| Pow::pow(k, a)).collect(),
        ))
    }

    fn check_exponents(&self, exponents: &[u32]) -> Result<()> {
        if exponents.len() != self.d {
            return Err(Error::Dimension(format!(
                "exponent vector of length {} for a grid of dimension {}",
                exponents.len(),
                self.d
            )));
        }
        if let Some(a) = exponents.iter().find(|&&a| a >= self.m) {
            return Err(Error::Precondition(format!("exponent {a} outside 0..{}", self.m)));
        }
        Ok(())
    }

    fn check_in_box(&self, x: &Point) -> Result<()> {
        if x.dim() != self.d {
            return Err(Error::Dimension(format!("point of dimension {} for grid of dimension {}", x.dim(), self.d)));
        }
        for (i, (c, k)) in x.coords().iter().zip(&self.k).enumerate() {
            let hi = Rational::from_integer(Pow::pow(k, self.m - 1));
            if c < &Rational::one() || c > &hi {
                return Err(Error::Precondition(format!(
                    "coordinate {} of {x} outside the bounding box",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// `log_{K_i} x_i` for every coordinate.
    fn log_coords(&self, x: &Point) -> Vec<f64> {
        x.coords()
            .iter()
            .zip(&self.ln_k)
            .map(|(c, lk)| ln_rational(c) / lk)
            .collect()
    }

    /// The logarithmic map of the bounding box onto the unit cube.
    pub fn pi_map(&self, x: &Point) -> Result<Vec<f64>> {
        self.check_in_box(x)?;
        let scale = f64::from(self.m - 1);
        Ok(self.log_coords(x).into_iter().map(|v| v / scale).collect())
    }

    /// `|log_{K_i} p_i - log_{K_i} q_i|` for the 0-based direction `i`.
    pub fn stretched_distance(&self, p: &Point, q: &Point, i: usize) -> Result<f64> {
        if i >= self.d {
            return Err(Error::Dimension(format!("direction {i} in dimension {}", self.d)));
        }
        for x in [p, q] {
            if x.dim() != self.d || !x.coord(i).is_positive() {
                return Err(Error::Precondition(format!("{x} is not a positive point of dimension {}", self.d)));
            }
        }
        let (a, b) = (p.coord(i), q.coord(i));
        if let (Some(ea), Some(eb)) = (self.exact_exponent(a, i), self.exact_exponent(b, i)) {
            return Ok((ea - eb).unsigned_abs() as f64);
        }
        Ok((ln_rational(&(a / b)) / self.ln_k[i]).abs())
    }

    fn exact_exponent(&self, x: &Rational, i: usize) -> Option<i64> {
        if !x.is_integer() {
            return None;
        }
        let guess = (ln_bigint(x.numer()) / self.ln_k[i]).round();
        if !(0.0..=f64::from(u32::MAX)).contains(&guess) {
            return None;
        }
        (Pow::pow(&self.k[i], guess as u32) == *x.numer()).then_some(guess as i64)
    }

    /// Bit lengths of the constants.
    pub fn k_bits(&self) -> Vec<u64> {
        self.k.iter().map(BigInt::bits).collect()
    }
}

/// A set of grid points given by their exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridSample {
    pub grid: StretchedGrid,
    pub exponents: Vec<Vec<u32>>,
}

impl GridSample {
    pub fn sequence(&self) -> Result<PointSequence> {
        let points = self
            .exponents
            .iter()
            .map(|e| self.grid.coordinates(e))
            .collect::<Result<_>>()?;
        PointSequence::with_dim(self.grid.d, points)
    }

    pub fn exponent_points(&self) -> Vec<Point> {
        self.exponents
            .iter()
            .map(|e| Point::from_ints(&e.iter().map(|&a| i64::from(a)).collect::<Vec<_>>()))
            .collect()
    }

    /// Every two points are `gap`-far apart in every direction.
    pub fn is_far_apart(&self, gap: u32) -> bool {
        (0..self.grid.d).all(|k| {
            let mut col: Vec<u32> = self.exponents.iter().map(|e| e[k]).collect();
            col.sort_unstable();
            col.windows(2).all(|w| w[1] - w[0] >= gap)
        })
    }
}

/// The gap `2d + 3` that makes Euclidean and stair structure agree.
pub fn far_gap(d: usize) -> u32 {
    2 * d as u32 + 3
}

/// `count` diagonal points with exponents `(2d+3) j` in every coordinate, on
/// the smallest grid that holds them.
pub fn stretched_diagonal(d: usize, count: usize) -> Result<GridSample> {
    if count == 0 {
        return Err(Error::Precondition("empty diagonal".into()));
    }
    let g = far_gap(d);
    let m = g * (count as u32 - 1) + 1;
    let grid = StretchedGrid::new(d, m.max(2))?;
    let exponents = (0..count as u32).map(|j| vec![g * j; d]).collect();
    Ok(GridSample { grid, exponents })
}

/// The default grid side for random far-apart samples of `count` points.
pub fn default_side(d: usize, count: usize) -> u32 {
    far_gap(d) * count as u32
}

/// Uniformly random `count` grid points, pairwise `(2d+3)`-far apart in every
/// direction, sorted by first exponent.
///
/// Each coordinate is an independent uniformly random gap-respecting set of
/// values in uniformly random order, which is the distribution obtained by
/// rejection sampling uniform points.
pub fn random_far_sample<R: Rng>(d: usize, count: usize, m: u32, rng: &mut R) -> Result<GridSample> {
    let g = far_gap(d);
    let needed = g as u64 * (count as u64).saturating_sub(1) + 1;
    if count == 0 || u64::from(m) < needed {
        return Err(Error::Precondition(format!(
            "a side of {m} cannot hold {count} points that are {g}-far apart"
        )));
    }
    let grid = StretchedGrid::new(d, m)?;
    let slack = m - (g - 1) * (count as u32 - 1);
    let mut exponents = vec![vec![0u32; d]; count];
    for k in 0..d {
        let mut base = rand::seq::index::sample(rng, slack as usize, count).into_vec();
        base.sort_unstable();
        let mut values: Vec<u32> = base
            .iter()
            .enumerate()
            .map(|(i, &b)| b as u32 + i as u32 * (g - 1))
            .collect();
        values.shuffle(rng);
        for (e, v) in exponents.iter_mut().zip(values) {
            e[k] = v;
        }
    }
    exponents.sort();
    Ok(GridSample { grid, exponents })
}

/// Euclidean and stair verdicts for every partition of a grid sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransferenceReport {
    pub d: usize,
    pub r: usize,
    pub partitions_checked: usize,
    pub euclidean: Vec<TypeEncoding>,
    pub stair: Vec<TypeEncoding>,
    pub disagreements: Vec<TypeEncoding>,
}

impl TransferenceReport {
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty()
    }
}

pub fn check_transference(sample: &GridSample, r: usize) -> Result<TransferenceReport> {
    let d = sample.grid.d;
    let n = t_param(d, r);
    if sample.exponents.len() != n {
        return Err(Error::Dimension(format!("need T({d},{r}) = {n} points, got {}", sample.exponents.len())));
    }
    if !sample.is_far_apart(far_gap(d)) {
        return Err(Error::Precondition(format!("points are not {}-far apart", far_gap(d))));
    }
    let seq = sample.sequence()?;
    let exps = sample.exponent_points();
    let verdicts: Vec<(TypeEncoding, bool, bool)> = combin::set_partitions(n, r)
        .into_par_iter()
        .map(|a| {
            let ty = TverbergType::from_assignment(d, r, &a)?;
            let euclid = verify_tverberg(&seq, &ty)?.is_some();
            let parts: Vec<Vec<Point>> = ty
                .parts()
                .iter()
                .map(|b| b.iter().map(|&i| exps[i].clone()).collect())
                .collect();
            let stair = stair_hull_intersection_point(&parts)?.is_some();
            Ok((ty.encode(), euclid, stair))
        })
        .collect::<Result<_>>()?;
    let pick = |f: fn(&(TypeEncoding, bool, bool)) -> bool| {
        verdicts.iter().filter(|v| f(v)).map(|v| v.0.clone()).collect::<Vec<_>>()
    };
    Ok(TransferenceReport {
        d,
        r,
        partitions_checked: verdicts.len(),
        euclidean: pick(|v| v.1),
        stair: pick(|v| v.2),
        disagreements: pick(|v| v.1 != v.2),
    })
}

/// Distribution of Euclidean Tverberg counts over random far-apart samples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SierksmaReport {
    pub d: usize,
    pub r: usize,
    pub m: u32,
    pub seed: u64,
    pub trials: usize,
    pub expected: u64,
    /// Partition count to number of trials.
    pub counts: BTreeMap<usize, usize>,
}

impl SierksmaReport {
    pub fn is_constant(&self) -> bool {
        self.counts.len() == 1 && self.counts.contains_key(&(self.expected as usize))
    }
}

/// `trials` seeded samples; the `i`-th uses its own stream so results do not
/// depend on scheduling.
pub fn random_far_samples(d: usize, r: usize, m: u32, trials: usize, seed: u64) -> Result<Vec<GridSample>> {
    let n = t_param(d, r);
    (0..trials)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            random_far_sample(d, n, m, &mut rng)
        })
        .collect()
}

pub fn sierksma_experiment(d: usize, r: usize, trials: usize, seed: u64, m: Option<u32>) -> Result<SierksmaReport> {
    let n = t_param(d, r);
    let m = m.unwrap_or_else(|| default_side(d, n));
    let samples = random_far_samples(d, r, m, trials, seed)?;
    let found: Vec<usize> = samples
        .par_iter()
        .map(|s| Ok(enumerate_tverberg_partitions(&s.sequence()?, r)?.len()))
        .collect::<Result<_>>()?;
    let mut counts = BTreeMap::new();
    for c in found {
        *counts.entry(c).or_insert(0) += 1;
    }
    Ok(SierksmaReport {
        d,
        r,
        m,
        seed,
        trials,
        expected: colorful_count(d, r),
        counts,
    })
}

/// Types of the Euclidean Tverberg partitions of the first `T(d, r)`
/// diagonal points, sorted.
pub fn diagonal_type_census(d: usize, r: usize) -> Result<Vec<TypeEncoding>> {
    let diag = stretched_diagonal(d, t_param(d, r))?;
    let mut out: Vec<TypeEncoding> = enumerate_tverberg_partitions(&diag.sequence()?, r)?
        .into_iter()
        .map(|c| c.ty.encode())
        .collect();
    out.sort();
    Ok(out)
}

/// Largest stretched deviation, over `samples + 1` evenly spaced points of
/// segment `ab`, from the stair-path between `a` and `b` (sup-distance after
/// the logarithmic map, scaled by `m - 1`).
pub fn closeness_probe(grid: &StretchedGrid, a: &Point, b: &Point, samples: usize) -> Result<f64> {
    grid.check_in_box(a)?;
    grid.check_in_box(b)?;
    let path = stair::stair_path(a, b)?;
    let corners: Vec<Vec<f64>> = path.vertices().iter().map(|v| grid.log_coords(v)).collect();
    let samples = samples.max(1);
    let mut worst = 0.0f64;
    for s in 0..=samples {
        let (w, t) = (BigInt::from(samples - s), BigInt::from(s));
        let x = Point::combination_unreduced(grid.d, &BigInt::from(samples), [(&w, a), (&t, b)]);
        let lx: Vec<f64> = x
            .iter()
            .zip(&grid.ln_k)
            .map(|((n, d), lk)| (ln_bigint(n) - ln_bigint(d)) / lk)
            .collect();
        let dist = if corners.len() == 1 {
            sup_distance(&lx, &corners[0])
        } else {
            corners
                .windows(2)
                .map(|w| distance_to_box(&lx, &w[0], &w[1]))
                .fold(f64::INFINITY, f64::min)
        };
        worst = worst.max(dist);
    }
    Ok(worst)
}

fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Sup-distance from `x` to the axis-parallel segment (box) spanned by `p, q`.
fn distance_to_box(x: &[f64], p: &[f64], q: &[f64]) -> f64 {
    x.iter()
        .zip(p.iter().zip(q))
        .map(|(&v, (&a, &b))| {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            if v < lo {
                lo - v
            } else if v > hi {
                v - hi
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max)
}

/// For `a` on layer 0 and `b` on layer `i >= 1`, the largest stretched
/// distance in directions `1..d-1` between `a` and the point where segment
/// `ab` crosses the height of layer `i - 1`.
pub fn layer_crossing_deviation(grid: &StretchedGrid, a: &[u32], b: &[u32]) -> Result<f64> {
    let d = grid.d;
    grid.check_exponents(a)?;
    grid.check_exponents(b)?;
    if a[d - 1] != 0 || b[d - 1] == 0 {
        return Err(Error::Precondition("need a on layer 0 and b above it".into()));
    }
    let pa = grid.coordinates(a)?;
    let pb = grid.coordinates(b)?;
    let kd = &grid.k[d - 1];
    let i = b[d - 1];
    let lo: BigInt = Pow::pow(kd, i - 1);
    let hi: BigInt = Pow::pow(kd, i);
    let (t, w, den) = (&lo - 1, &hi - &lo, &hi - 1);
    let c = Point::combination_unreduced(d, &den, [(&w, &pa), (&t, &pb)]);
    Ok((0..d - 1)
        .map(|j| {
            let (n, q) = &c[j];
            let lc = ln_bigint(n) - ln_bigint(q);
            ((lc - ln_bigint(pa.coord(j).numer())) / grid.ln_k[j]).abs()
        })
        .fold(0.0f64, f64::max))
}
