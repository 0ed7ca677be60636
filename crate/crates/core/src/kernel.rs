//! Exact rational linear algebra and the orientation predicate.
//!
//! Every geometric test in the crate bottoms out here: determinants are
//! computed by fraction-free (Bareiss) elimination over integers after
//! clearing row denominators, so intermediate values stay polynomial in the
//! input size even for the astronomically large coordinates of the stretched
//! grid.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Convenience constructor for integers.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Least common multiple of the magnitudes.
pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    a.lcm(b)
}

/// `n / d` in lowest terms.
pub fn ratio(n: BigInt, d: BigInt) -> Rational {
    assert!(!d.is_zero(), "zero denominator");
    let g = n.gcd(&d);
    let (mut n, mut d) = if g.is_one() { (n, d) } else { (n / &g, d / &g) };
    if d.is_negative() {
        n = -n;
        d = -d;
    }
    Rational::new_raw(n, d)
}

/// `sum w_i c_i`, reduced once at the end.
pub fn dot(terms: impl IntoIterator<Item = (Rational, Rational)>) -> Rational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for (w, c) in terms {
        let (wn, wd) = w.into_raw();
        let (cn, cd) = c.into_raw();
        let tn = wn * cn;
        let td = wd * cd;
        if td == den {
            num += tn;
        } else {
            let l = lcm(&den, &td);
            num = num * (&l / &den) + tn * (&l / &td);
            den = l;
        }
    }
    ratio(num, den)
}

/// Parse `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::parse(0, format!("not an exact rational: {text:?}"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

/// Format as `"p/q"`, or `"p"` for integers.
pub fn format_rational(v: &Rational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Three-way sign classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of_int(v: &BigInt) -> Sign {
        if v.is_positive() {
            Sign::Positive
        } else if v.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn of(v: &Rational) -> Sign {
        Sign::of_int(v.numer())
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        match (self, rhs) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }
}

/// A point of `R^d` with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    coords: Vec<Rational>,
}

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point::new(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn from_bigints(coords: Vec<BigInt>) -> Self {
        Point::new(coords.into_iter().map(Rational::from_integer).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Rational {
        &self.coords[i]
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    /// Drop the last coordinate (vertical projection).
    pub fn project_last(&self) -> Point {
        Point::new(self.coords[..self.coords.len() - 1].to_vec())
    }

    pub fn sub(&self, other: &Point) -> Vec<Rational> {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect()
    }

    /// `sum w_i * p_i` for points of a common dimension.
    pub fn combination<'a>(
        dim: usize,
        terms: impl IntoIterator<Item = (&'a Rational, &'a Point)>,
    ) -> Point {
        let terms: Vec<(&Rational, &Point)> = terms.into_iter().collect();
        Point::new(
            (0..dim)
                .map(|k| dot(terms.iter().map(|(w, p)| ((*w).clone(), p.coords[k].clone()))))
                .collect(),
        )
    }

    /// `sum (y_i / den) p_i` as unreduced `(numerator, denominator)` pairs,
    /// avoiding gcds on huge integers.
    pub fn combination_unreduced<'a>(
        dim: usize,
        den: &BigInt,
        terms: impl IntoIterator<Item = (&'a BigInt, &'a Point)>,
    ) -> Vec<(BigInt, BigInt)> {
        let mut acc = vec![(BigInt::zero(), BigInt::one()); dim];
        for (y, p) in terms {
            for ((n, d), c) in acc.iter_mut().zip(&p.coords) {
                let tn = y * c.numer();
                let td = c.denom();
                if td == d {
                    *n += tn;
                } else {
                    *n = &*n * td + tn * &*d;
                    *d *= td;
                }
            }
        }
        for (_, d) in acc.iter_mut() {
            *d *= den;
        }
        acc
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(format_rational).collect()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, ")")
    }
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

/// `serialize_with` helper writing rows of rationals as strings.
pub fn serialize_rational_rows<T, S>(rows: &T, s: S) -> std::result::Result<S::Ok, S::Error>
where
    T: AsRef<[Vec<Rational>]>,
    S: serde::Serializer,
{
    let text: Vec<Vec<String>> = rows
        .as_ref()
        .iter()
        .map(|r| r.iter().map(format_rational).collect())
        .collect();
    text.serialize(s)
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map(Point::new)
            .map_err(serde::de::Error::custom)
    }
}

/// Scale every row by the lcm of its denominators. Returns the integer rows
/// and the product of the scale factors.
fn clear_denominators(rows: &[Vec<Rational>]) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut total = BigInt::one();
    let out = rows
        .iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, v| {
                    if v.denom().is_one() {
                        acc
                    } else {
                        lcm(&acc, v.denom())
                    }
                });
            let scaled = row
                .iter()
                .map(|v| v.numer() * (&l / v.denom()))
                .collect();
            total *= &l;
            scaled
        })
        .collect();
    (out, total)
}

/// Fraction-free determinant of a square integer matrix.
pub fn det_int(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let pivot_row = &head[k];
        for row in tail.iter_mut() {
            for j in k + 1..n {
                let v = &pivot_row[k] * &row[j] - &row[k] * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

fn check_square(m: &[Vec<Rational>]) -> Result<()> {
    let n = m.len();
    match m.iter().find(|row| row.len() != n) {
        Some(row) => Err(Error::Dimension(format!(
            "expected a square matrix, got {n} rows with a row of length {}",
            row.len()
        ))),
        None => Ok(()),
    }
}

/// Exact determinant of a square rational matrix.
pub fn det(matrix: &[Vec<Rational>]) -> Result<Rational> {
    check_square(matrix)?;
    let (rows, scale) = clear_denominators(matrix);
    Ok(ratio(det_int(rows), scale))
}

/// Outcome of fraction-free elimination on an augmented system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemSolution {
    Unique(Vec<Rational>),
    Inconsistent,
    /// Consistent, with a solution space of positive dimension.
    Underdetermined,
}

/// Fraction-free row echelon form on an integer matrix with `cols` leading
/// columns eligible for pivots. Returns the pivot columns.
fn echelon(a: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let m = a.len();
    let width = a.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m {
            break;
        }
        let Some(p) = (row..m).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let (head, tail) = a.split_at_mut(row + 1);
        let pivot_row = &head[row];
        for r in tail.iter_mut() {
            if r[col].is_zero() {
                // Still needs the Bareiss rescaling to keep later divisions exact.
                for j in col + 1..width {
                    let v = &pivot_row[col] * &r[j];
                    r[j] = v / &prev;
                }
                continue;
            }
            for j in col + 1..width {
                let v = &pivot_row[col] * &r[j] - &r[col] * &pivot_row[j];
                r[j] = v / &prev;
            }
            r[col] = BigInt::zero();
        }
        prev = a[row][col].clone();
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Solution of a linear system with a common denominator: `x_k = numerators[k] / denominator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntegralSolution {
    /// `denominator` is positive; the fractions are not reduced.
    Unique { numerators: Vec<BigInt>, denominator: BigInt },
    Inconsistent,
    Underdetermined,
}

/// Solve `A x = b` for a rectangular `A` without any gcd computations.
pub fn solve_system_integral(a: &[Vec<Rational>], b: &[Rational]) -> Result<IntegralSolution> {
    let m = a.len();
    if b.len() != m {
        return Err(Error::Dimension(format!(
            "{m} equations but right-hand side of length {}",
            b.len()
        )));
    }
    let n = a.first().map_or(0, |r| r.len());
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("ragged coefficient matrix".into()));
    }
    let augmented: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let (mut rows, _) = clear_denominators(&augmented);
    let pivots = echelon(&mut rows, n);
    let rank = pivots.len();
    if rows[rank..].iter().any(|r| !r[n].is_zero()) {
        return Ok(IntegralSolution::Inconsistent);
    }
    if rank < n {
        return Ok(IntegralSolution::Underdetermined);
    }
    if n == 0 {
        return Ok(IntegralSolution::Unique {
            numerators: Vec::new(),
            denominator: BigInt::one(),
        });
    }
    // The last Bareiss pivot is the determinant of the pivot rows, so by
    // Cramer's rule every `D x_k` is an integer and each division is exact.
    let mut den = rows[n - 1][n - 1].clone();
    let mut y = vec![BigInt::zero(); n];
    for k in (0..n).rev() {
        let mut acc = &den * &rows[k][n];
        for j in k + 1..n {
            acc -= &rows[k][j] * &y[j];
        }
        y[k] = acc / &rows[k][k];
    }
    if den.is_negative() {
        den = -den;
        for v in &mut y {
            *v = -&*v;
        }
    }
    Ok(IntegralSolution::Unique {
        numerators: y,
        denominator: den,
    })
}

/// Solve `A x = b` for a rectangular `A`, classifying the solution set.
pub fn solve_system(a: &[Vec<Rational>], b: &[Rational]) -> Result<SystemSolution> {
    Ok(match solve_system_integral(a, b)? {
        IntegralSolution::Unique {
            numerators,
            denominator,
        } => SystemSolution::Unique(
            numerators
                .into_iter()
                .map(|v| ratio(v, denominator.clone()))
                .collect(),
        ),
        IntegralSolution::Inconsistent => SystemSolution::Inconsistent,
        IntegralSolution::Underdetermined => SystemSolution::Underdetermined,
    })
}

/// Exact solution of a nonsingular square system.
pub fn solve_linear(a: &[Vec<Rational>], b: &[Rational]) -> Result<Vec<Rational>> {
    check_square(a)?;
    match solve_system(a, b)? {
        SystemSolution::Unique(x) => Ok(x),
        _ => Err(Error::Singular),
    }
}

/// Rank of a rational matrix.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let (mut ints, _) = clear_denominators(rows);
    let cols = ints[0].len();
    echelon(&mut ints, cols).len()
}

fn check_dims(points: &[&Point]) -> Result<usize> {
    let d = points.first().map_or(0, |p| p.dim());
    if let Some(p) = points.iter().find(|p| p.dim() != d) {
        return Err(Error::Dimension(format!(
            "mixed point dimensions {d} and {}",
            p.dim()
        )));
    }
    Ok(d)
}

/// Sign of `det [1 ... 1; p_1 ... p_{d+1}]`.
pub fn orientation(points: &[&Point]) -> Result<Sign> {
    let d = check_dims(points)?;
    if points.len() != d + 1 {
        return Err(Error::Dimension(format!(
            "orientation in dimension {d} needs {} points, got {}",
            d + 1,
            points.len()
        )));
    }
    // Subtracting the first row from the others reduces the bordered
    // determinant to the d x d determinant of difference vectors.
    let base = points[0];
    let diffs: Vec<Vec<Rational>> = points[1..].iter().map(|p| p.sub(base)).collect();
    let (rows, _) = clear_denominators(&diffs);
    Ok(Sign::of_int(&det_int(rows)))
}

/// Orientation of owned points; see [`orientation`].
pub fn orientation_of(points: &[Point]) -> Result<Sign> {
    let refs: Vec<&Point> = points.iter().collect();
    orientation(&refs)
}

/// True iff every `arity`-subset of the points is affinely independent.
///
/// With `arity = d + 1` this is exactly "no orientation determinant over any
/// (d+1)-subset vanishes".
pub fn is_generic(points: &[Point], arity: usize) -> bool {
    let d = match points.first() {
        Some(p) => p.dim(),
        None => return true,
    };
    if points.iter().any(|p| p.dim() != d) || arity > d + 1 {
        return false;
    }
    if arity == 0 || arity > points.len() {
        return true;
    }
    crate::combin::Combinations::new(points.len(), arity).all(|subset| {
        let base = &points[subset[0]];
        if arity == d + 1 {
            let refs: Vec<&Point> = subset.iter().map(|&i| &points[i]).collect();
            return orientation(&refs).map(|s| !s.is_zero()).unwrap_or(false);
        }
        let diffs: Vec<Vec<Rational>> = subset[1..].iter().map(|&i| points[i].sub(base)).collect();
        rank(&diffs) == arity - 1
    })
}
