//! Hyperplane-separation statements over labelled points, their evaluation on
//! orientation-homogeneous sequences, and occurrence scanning.
//!
//! Statement grammar:
//!
//! ```text
//! statement := labels '(' side ':' side ')'
//! side      := term*
//! term      := label | 'X[' labels (';' labels)+ ']'
//! label     := '0'..'9' | 'A'..'Z' | '(' digits ')'
//! ```
//!
//! `X[14;36]` is the intersection of the hulls of `{1,4}` and `{3,6}`. A
//! statement that mentions label `0` addresses the sequence from position 0;
//! otherwise label `1` is the first point.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::combin::Combinations;
use crate::convex::{self, verify_tverberg};
use crate::error::{Error, Result};
use crate::kernel::{orientation, Point, Rational, Sign};
use crate::sequence::{label_text, label_value, PointSequence};
use crate::stretched::stretched_diagonal;
use crate::types::{t_param, TverbergType};

/// A point named by its label, or the common point of several hulls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Point(usize),
    Intersection(Vec<Vec<usize>>),
}

impl Term {
    fn labels(&self) -> Vec<usize> {
        match self {
            Term::Point(l) => vec![*l],
            Term::Intersection(parts) => parts.iter().flatten().copied().collect(),
        }
    }
}

fn write_labels(f: &mut fmt::Formatter<'_>, labels: &[usize]) -> fmt::Result {
    labels.iter().try_for_each(|&l| f.write_str(&label_text(l)))
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Point(l) => f.write_str(&label_text(*l)),
            Term::Intersection(parts) => {
                f.write_str("X[")?;
                for (i, part) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(";")?;
                    }
                    write_labels(f, part)?;
                }
                f.write_str("]")
            }
        }
    }
}

/// `H(left : right)`: the hyperplane through `d` labelled points separates
/// the left terms from the right ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationStatement {
    pub d: usize,
    pub hyperplane: Vec<usize>,
    pub left: Vec<Term>,
    pub right: Vec<Term>,
}

impl SeparationStatement {
    /// Every label mentioned, sorted.
    pub fn labels(&self) -> BTreeSet<usize> {
        self.hyperplane
            .iter()
            .copied()
            .chain(self.left.iter().chain(&self.right).flat_map(Term::labels))
            .collect()
    }

    /// Number of distinct points involved.
    pub fn arity(&self) -> usize {
        self.labels().len()
    }

    /// Position of label 0 or 1 in the sequence, see the module docs.
    pub fn base(&self) -> usize {
        usize::from(!self.labels().contains(&0))
    }

    /// Whether no term is an intersection.
    pub fn is_point_only(&self) -> bool {
        self.left.iter().chain(&self.right).all(|t| matches!(t, Term::Point(_)))
    }
}

impl fmt::Display for SeparationStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_labels(f, &self.hyperplane)?;
        f.write_str("(")?;
        self.left.iter().try_for_each(|t| write!(f, "{t}"))?;
        f.write_str(":")?;
        self.right.iter().try_for_each(|t| write!(f, "{t}"))?;
        f.write_str(")")
    }
}

impl Serialize for SeparationStatement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => Err(Error::parse(self.pos, format!("expected '{c}', found '{x}'"))),
            None => Err(Error::parse(self.pos, format!("expected '{c}' at end of {:?}", self.text))),
        }
    }

    /// A label, or `None` if the next character cannot start one. A `(`
    /// starts a label only as part of `(digits)`.
    fn label(&mut self) -> Result<Option<usize>> {
        let Some(c) = self.peek() else { return Ok(None) };
        if let Some(v) = label_value(c) {
            self.pos += 1;
            return Ok(Some(v));
        }
        let digits: String = self.chars[self.pos + 1..].iter().take_while(|c| c.is_ascii_digit()).collect();
        if c == '(' && !digits.is_empty() && self.chars.get(self.pos + 1 + digits.len()) == Some(&')') {
            let start = self.pos;
            self.pos += digits.len() + 2;
            let v = digits
                .parse()
                .map_err(|_| Error::parse(start, format!("label ({digits}) out of range")))?;
            return Ok(Some(v));
        }
        Ok(None)
    }

    fn labels(&mut self) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        while let Some(l) = self.label()? {
            out.push(l);
        }
        Ok(out)
    }

    fn side(&mut self, end: char) -> Result<Vec<Term>> {
        let mut terms = Vec::new();
        loop {
            match self.peek() {
                Some(c) if c == end => return Ok(terms),
                Some('X') if self.chars.get(self.pos + 1) == Some(&'[') => {
                    let start = self.pos;
                    self.pos += 2;
                    let mut parts = vec![self.labels()?];
                    while self.peek() == Some(';') {
                        self.pos += 1;
                        parts.push(self.labels()?);
                    }
                    self.expect(']')?;
                    if parts.len() < 2 || parts.iter().any(Vec::is_empty) {
                        return Err(Error::parse(start, "an intersection needs at least two nonempty parts"));
                    }
                    terms.push(Term::Intersection(parts));
                }
                _ => match self.label()? {
                    Some(l) => terms.push(Term::Point(l)),
                    None => {
                        return Err(Error::parse(self.pos, format!("expected a term or '{end}'")));
                    }
                },
            }
        }
    }
}

/// Parse a statement about points in `R^d`.
pub fn parse_statement(text: &str, d: usize) -> Result<SeparationStatement> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        text,
    };
    let hyperplane = p.labels()?;
    p.expect('(')?;
    let left = p.side(':')?;
    p.expect(':')?;
    let right = p.side(')')?;
    p.expect(')')?;
    if p.peek().is_some() {
        return Err(Error::parse(p.pos, "trailing input"));
    }
    let s = SeparationStatement {
        d,
        hyperplane,
        left,
        right,
    };
    validate(&s)?;
    Ok(s)
}

fn validate(s: &SeparationStatement) -> Result<()> {
    let d = s.d;
    if d == 0 {
        return Err(Error::Precondition("statements need d >= 1".into()));
    }
    if s.hyperplane.len() != d {
        return Err(Error::Dimension(format!(
            "a hyperplane in dimension {d} needs {d} labels, got {}",
            s.hyperplane.len()
        )));
    }
    if s.hyperplane.iter().collect::<BTreeSet<_>>().len() != d {
        return Err(Error::Precondition("hyperplane labels must be distinct".into()));
    }
    if s.left.is_empty() && s.right.is_empty() {
        return Err(Error::Precondition("statement names no terms".into()));
    }
    for term in s.left.iter().chain(&s.right) {
        if let Term::Intersection(parts) = term {
            let labels = term.labels();
            if labels.iter().collect::<BTreeSet<_>>().len() != labels.len() {
                return Err(Error::Precondition(format!("{term}: parts must be disjoint")));
            }
            let need = t_param(d, parts.len());
            if labels.len() != need {
                return Err(Error::Dimension(format!(
                    "{term}: {} parts in dimension {d} need {need} points in total, got {}",
                    parts.len(),
                    labels.len()
                )));
            }
        }
    }
    Ok(())
}

/// The point of a term, with labels resolved through `index`.
fn term_point(seq: &PointSequence, term: &Term, index: &dyn Fn(usize) -> usize) -> Result<Point> {
    match term {
        Term::Point(l) => Ok(seq.point(index(*l)).clone()),
        Term::Intersection(parts) => {
            let mut owned: Vec<(usize, u8)> = parts
                .iter()
                .enumerate()
                .flat_map(|(j, part)| part.iter().map(move |&l| (index(l), j as u8)))
                .collect();
            owned.sort_unstable();
            let sub = seq.select(&owned.iter().map(|&(i, _)| i).collect::<Vec<_>>());
            let owner: Vec<u8> = owned.iter().map(|&(_, j)| j).collect();
            let ty = TverbergType::from_assignment(seq.dim(), parts.len(), &owner)?;
            match verify_tverberg(&sub, &ty)? {
                Some(cert) => Ok(cert.point().clone()),
                None if parts.len() == 2 => Err(Error::Genericity(format!("{term} is empty"))),
                None => Err(Error::Precondition(format!("{term} is empty"))),
            }
        }
    }
}

fn eval_with(seq: &PointSequence, s: &SeparationStatement, index: &dyn Fn(usize) -> usize) -> Result<bool> {
    let plane: Vec<&Point> = s.hyperplane.iter().map(|&l| seq.point(index(l))).collect();
    let side = |term: &Term| -> Result<Sign> {
        let x = term_point(seq, term, index)?;
        let mut pts = plane.clone();
        pts.push(&x);
        let sign = orientation(&pts)?;
        if sign.is_zero() {
            return Err(Error::Genericity(format!("{term} lies on the hyperplane of {s}")));
        }
        Ok(sign)
    };
    let left = s.left.iter().map(side).collect::<Result<Vec<_>>>()?;
    let right = s.right.iter().map(side).collect::<Result<Vec<_>>>()?;
    let target = left.first().copied().or_else(|| right.first().copied()).expect("validated nonempty");
    let same = |v: &[Sign], want: Sign| v.iter().all(|&x| x == want);
    Ok(if left.is_empty() || right.is_empty() {
        same(&left, target) && same(&right, target)
    } else {
        same(&left, target) && same(&right, target.flip())
    })
}

fn check_labels(seq: &PointSequence, s: &SeparationStatement) -> Result<()> {
    if seq.dim() != s.d {
        return Err(Error::Dimension(format!(
            "statement in dimension {} applied to points of dimension {}",
            s.d,
            seq.dim()
        )));
    }
    let base = s.base();
    if let Some(&max) = s.labels().iter().next_back() {
        if max - base >= seq.len() {
            return Err(Error::Precondition(format!(
                "label {} beyond a sequence of {} points",
                label_text(max),
                seq.len()
            )));
        }
    }
    Ok(())
}

fn check_homogeneous(seq: &PointSequence) -> Result<()> {
    if seq.len() <= seq.dim() {
        return Ok(());
    }
    if !seq.is_generic() {
        return Err(Error::Genericity("some d+1 points have zero orientation".into()));
    }
    if !seq.is_orientation_homogeneous() {
        return Err(Error::Precondition("sequence is not orientation-homogeneous".into()));
    }
    Ok(())
}

/// Evaluate a statement on a generic orientation-homogeneous sequence, with
/// labels addressing positions as described in the module docs.
pub fn eval_statement(seq: &PointSequence, s: &SeparationStatement) -> Result<bool> {
    check_labels(seq, s)?;
    check_homogeneous(seq)?;
    let base = s.base();
    eval_with(seq, s, &|l| l - base)
}

/// Predicted relation of two points to a hyperplane through points of an
/// orientation-homogeneous sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SidePrediction {
    SameSide,
    OppositeSide,
}

/// Opposite sides iff an odd number of hyperplane labels lie strictly
/// between `q` and `q2`.
pub fn parity_prediction(hyperplane: &[usize], q: usize, q2: usize) -> SidePrediction {
    let (lo, hi) = if q <= q2 { (q, q2) } else { (q2, q) };
    let between = hyperplane.iter().filter(|&&p| lo < p && p < hi).count();
    if between % 2 == 1 {
        SidePrediction::OppositeSide
    } else {
        SidePrediction::SameSide
    }
}

/// Outcome of checking [`parity_prediction`] against evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityReport {
    pub d: usize,
    pub n: usize,
    pub checked: usize,
    pub disagreements: Vec<String>,
}

impl ParityReport {
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Evaluate `H(q:q')` for every hyperplane `H` of `d` labels and every pair
/// `q < q'` outside it, and compare with the parity rule.
pub fn parity_cross_check(seq: &PointSequence) -> Result<ParityReport> {
    let (d, n) = (seq.dim(), seq.len());
    check_homogeneous(seq)?;
    let mut checked = 0;
    let mut disagreements = Vec::new();
    for plane in Combinations::new(n, d) {
        let hyperplane: Vec<usize> = plane.iter().map(|i| i + 1).collect();
        let rest: Vec<usize> = (1..=n).filter(|l| !hyperplane.contains(l)).collect();
        for pair in Combinations::new(rest.len(), 2) {
            let (q, q2) = (rest[pair[0]], rest[pair[1]]);
            let s = SeparationStatement {
                d,
                hyperplane: hyperplane.clone(),
                left: vec![Term::Point(q)],
                right: vec![Term::Point(q2)],
            };
            let separated = eval_with(seq, &s, &|l| l - 1)?;
            let predicted = parity_prediction(&hyperplane, q, q2) == SidePrediction::OppositeSide;
            checked += 1;
            if separated != predicted {
                disagreements.push(s.to_string());
            }
        }
    }
    Ok(ParityReport {
        d,
        n,
        checked,
        disagreements,
    })
}

/// Points `(t, t^2, ..., t^d)` for strictly increasing `t`.
pub fn moment_curve_sequence(d: usize, t_values: &[Rational]) -> Result<PointSequence> {
    if d == 0 {
        return Err(Error::Precondition("dimension must be positive".into()));
    }
    if t_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("curve parameters must increase strictly".into()));
    }
    let points = t_values
        .iter()
        .map(|t| {
            let mut coords = Vec::with_capacity(d);
            let mut v = t.clone();
            for _ in 0..d {
                coords.push(v.clone());
                v *= t;
            }
            Point::new(coords)
        })
        .collect();
    PointSequence::with_dim(d, points)
}

const SAMPLING_BUDGET: usize = 1000;

/// A random generic orientation-homogeneous sequence. In the plane these are
/// vertices of a random convex polygon in counterclockwise boundary order;
/// in higher dimensions, integer perturbations of a scaled moment curve.
pub fn random_homogeneous_sequence(d: usize, n: usize, seed: u64) -> Result<PointSequence> {
    if d == 0 {
        return Err(Error::Precondition("dimension must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match d {
        1 => {
            let mut xs: Vec<i64> = rand::seq::index::sample(&mut rng, 10 * n.max(1), n)
                .into_iter()
                .map(|v| v as i64)
                .collect();
            xs.sort_unstable();
            PointSequence::with_dim(1, xs.iter().map(|&x| Point::from_ints(&[x])).collect())
        }
        2 => {
            for _ in 0..SAMPLING_BUDGET {
                let seq = random_convex_polygon(n, &mut rng)?;
                if n < 3 || seq.homogeneous_sign() == Some(Sign::Positive) {
                    return Ok(seq);
                }
            }
            Err(Error::Precondition(format!("no convex {n}-gon within {SAMPLING_BUDGET} samples")))
        }
        _ => {
            let mut spread: i64 = 1 << 20;
            for _ in 0..SAMPLING_BUDGET {
                let seq = perturbed_moment_curve(d, n, spread, &mut rng)?;
                if n <= d || seq.homogeneous_sign().is_some() {
                    return Ok(seq);
                }
                spread /= 2;
            }
            Err(Error::Precondition(format!(
                "no homogeneous perturbation of {n} points within {SAMPLING_BUDGET} samples"
            )))
        }
    }
}

/// Random convex polygon by sorting random edge vectors by angle (Valtr).
fn random_convex_polygon(n: usize, rng: &mut impl Rng) -> Result<PointSequence> {
    if n < 3 {
        let pts = (0..n as i64).map(|i| Point::from_ints(&[i, i * i])).collect();
        return PointSequence::with_dim(2, pts);
    }
    let range = 16 * n * n;
    let chain = |rng: &mut dyn rand::RngCore| -> Vec<i64> {
        let mut v: Vec<i64> = rand::seq::index::sample(rng, range, n).into_iter().map(|x| x as i64).collect();
        v.sort_unstable();
        let (lo, hi) = (v[0], v[n - 1]);
        let (mut a, mut b) = (lo, lo);
        let mut out = Vec::with_capacity(n);
        for &x in &v[1..n - 1] {
            if rng.gen::<bool>() {
                out.push(x - a);
                a = x;
            } else {
                out.push(b - x);
                b = x;
            }
        }
        out.push(hi - a);
        out.push(b - hi);
        out
    };
    let xs = chain(rng);
    let mut ys = chain(rng);
    ys.shuffle(rng);
    let mut vecs: Vec<(i64, i64)> = xs.into_iter().zip(ys).collect();
    let half = |&(x, y): &(i64, i64)| u8::from(y < 0 || (y == 0 && x < 0));
    vecs.sort_by(|a, b| {
        half(a)
            .cmp(&half(b))
            .then_with(|| (b.0 * a.1).cmp(&(a.0 * b.1)))
    });
    let start = rng.gen_range(0..n);
    vecs.rotate_left(start);
    let (mut x, mut y) = (0i64, 0i64);
    let pts = vecs
        .iter()
        .map(|&(dx, dy)| {
            x += dx;
            y += dy;
            Point::from_ints(&[x, y])
        })
        .collect();
    PointSequence::with_dim(2, pts)
}

fn perturbed_moment_curve(d: usize, n: usize, spread: i64, rng: &mut impl Rng) -> Result<PointSequence> {
    let mut ts: Vec<i64> = rand::seq::index::sample(rng, 4 * n.max(1), n)
        .into_iter()
        .map(|v| v as i64)
        .collect();
    ts.sort_unstable();
    let scale = BigInt::from(1) << 24;
    let points = ts
        .iter()
        .map(|&t| {
            let mut power = BigInt::from(1);
            let coords = (0..d)
                .map(|_| {
                    power *= t;
                    let noise = if spread > 0 { rng.gen_range(-spread..=spread) } else { 0 };
                    &power * &scale + noise
                })
                .collect();
            Point::from_bigints(coords)
        })
        .collect();
    PointSequence::with_dim(d, points)
}

/// The six-point predicate, written three equivalent ways.
pub const SIXPT_FORMS: [&str; 3] = ["14(3:X[25;36])", "25(1:X[14;36])", "36(4:X[14;25])"];

/// Evaluate the six-point predicate on six planar points.
pub fn sixpt_eval(seq: &PointSequence) -> Result<bool> {
    if seq.dim() != 2 || seq.len() != 6 {
        return Err(Error::Dimension(format!(
            "six planar points needed, got {} points in dimension {}",
            seq.len(),
            seq.dim()
        )));
    }
    eval_statement(seq, &parse_statement(SIXPT_FORMS[0], 2)?)
}

/// A geometric predicate of fixed arity on point sequences.
pub trait Predicate: Send + Sync {
    fn arity(&self) -> usize;

    fn dim(&self) -> usize;

    /// Evaluate on exactly `arity()` points, assumed generic and
    /// orientation-homogeneous.
    fn eval(&self, points: &PointSequence) -> Result<bool>;

    fn describe(&self) -> String;
}

/// `Π[s]`: the statement with its labels mapped in order onto the points.
#[derive(Debug, Clone)]
pub struct StatementPredicate {
    statement: SeparationStatement,
    labels: Vec<usize>,
}

impl StatementPredicate {
    pub fn new(statement: SeparationStatement) -> Self {
        let labels = statement.labels().into_iter().collect();
        StatementPredicate { statement, labels }
    }

    pub fn parse(text: &str, d: usize) -> Result<Self> {
        parse_statement(text, d).map(Self::new)
    }
}

impl Predicate for StatementPredicate {
    fn arity(&self) -> usize {
        self.labels.len()
    }

    fn dim(&self) -> usize {
        self.statement.d
    }

    fn eval(&self, points: &PointSequence) -> Result<bool> {
        let labels = &self.labels;
        eval_with(points, &self.statement, &|l| {
            labels.binary_search(&l).expect("label of the statement")
        })
    }

    fn describe(&self) -> String {
        format!("Π[{}]", self.statement)
    }
}

/// The six-point predicate.
#[derive(Debug, Clone, Copy, Default)]
pub struct SixPoint;

impl Predicate for SixPoint {
    fn arity(&self) -> usize {
        6
    }

    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, points: &PointSequence) -> Result<bool> {
        let s = parse_statement(SIXPT_FORMS[0], 2)?;
        eval_with(points, &s, &|l| l - 1)
    }

    fn describe(&self) -> String {
        "sixpt".into()
    }
}

/// `tv_I`: the parts of a Tverberg type have a common point.
#[derive(Debug, Clone)]
pub struct TypePredicate(pub TverbergType);

impl Predicate for TypePredicate {
    fn arity(&self) -> usize {
        self.0.len()
    }

    fn dim(&self) -> usize {
        self.0.d()
    }

    fn eval(&self, points: &PointSequence) -> Result<bool> {
        Ok(verify_tverberg(points, &self.0)?.is_some())
    }

    fn describe(&self) -> String {
        format!("tv[{}]", self.0.encode())
    }
}

/// Four planar points, none inside the triangle of the others.
#[derive(Debug, Clone, Copy, Default)]
pub struct ConvexPosition;

impl Predicate for ConvexPosition {
    fn arity(&self) -> usize {
        4
    }

    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, points: &PointSequence) -> Result<bool> {
        for i in 0..4 {
            let others: Vec<Point> = (0..4).filter(|&j| j != i).map(|j| points.point(j).clone()).collect();
            if convex::point_in_simplex(points.point(i), &others)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn describe(&self) -> String {
        "convex-position".into()
    }
}

/// Logical negation of another predicate.
pub struct Not(pub Box<dyn Predicate>);

impl Predicate for Not {
    fn arity(&self) -> usize {
        self.0.arity()
    }

    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn eval(&self, points: &PointSequence) -> Result<bool> {
        self.0.eval(points).map(|v| !v)
    }

    fn describe(&self) -> String {
        format!("not {}", self.0.describe())
    }
}

fn tuple_text(positions: &[usize]) -> String {
    positions.iter().map(|&i| label_text(i + 1)).collect()
}

/// First `arity`-subsequence, in lexicographic order of positions, on which
/// the predicate holds. Predicates over orientation-homogeneous input
/// require `seq` to be orientation-homogeneous; the convex-position predicate
/// only needs genericity.
pub fn occurs(seq: &PointSequence, pred: &dyn Predicate) -> Result<Option<Vec<usize>>> {
    if seq.dim() != pred.dim() {
        return Err(Error::Dimension(format!(
            "{} lives in dimension {}, sequence in {}",
            pred.describe(),
            pred.dim(),
            seq.dim()
        )));
    }
    if !seq.is_generic() {
        return Err(Error::Genericity("some d+1 points have zero orientation".into()));
    }
    for subset in Combinations::new(seq.len(), pred.arity()) {
        let sub = seq.select(&subset);
        let hit = pred.eval(&sub).map_err(|e| match e {
            Error::Genericity(msg) => Error::Genericity(format!("tuple {}: {msg}", tuple_text(&subset))),
            other => other,
        })?;
        if hit {
            return Ok(Some(subset));
        }
    }
    Ok(None)
}

/// Source of test sequences for [`scan_unavoidability`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SequenceFamily {
    /// Moment curve at random increasing integer parameters.
    MomentCurve { d: usize, seed: u64 },
    /// [`random_homogeneous_sequence`].
    PerturbedConvex { d: usize, seed: u64 },
    /// The stretched diagonal; one sequence per length.
    StretchedDiagonal { d: usize },
}

impl SequenceFamily {
    pub fn dim(&self) -> usize {
        match *self {
            SequenceFamily::MomentCurve { d, .. }
            | SequenceFamily::PerturbedConvex { d, .. }
            | SequenceFamily::StretchedDiagonal { d } => d,
        }
    }

    /// Whether each length has a single member.
    pub fn is_deterministic(&self) -> bool {
        matches!(self, SequenceFamily::StretchedDiagonal { .. })
    }

    fn member_seed(seed: u64, n: usize, index: usize) -> u64 {
        seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (index as u64).wrapping_mul(0xD1B5_4A32_D192_ED03)
    }

    /// Member `index` of length `n`.
    pub fn generate(&self, n: usize, index: usize) -> Result<PointSequence> {
        match *self {
            SequenceFamily::MomentCurve { d, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(Self::member_seed(seed, n, index));
                let mut ts: Vec<i64> = rand::seq::index::sample(&mut rng, 8 * n.max(1), n)
                    .into_iter()
                    .map(|v| v as i64 - 4 * n as i64)
                    .collect();
                ts.sort_unstable();
                Ok(convex::moment_curve(ts, d))
            }
            SequenceFamily::PerturbedConvex { d, seed } => {
                random_homogeneous_sequence(d, n, Self::member_seed(seed, n, index))
            }
            SequenceFamily::StretchedDiagonal { d } => stretched_diagonal(d, n)?.sequence(),
        }
    }
}

/// Per-length tallies of a scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LengthTally {
    pub n: usize,
    pub sampled: usize,
    pub avoiding: usize,
}

/// A member of length `max_n` on which the predicate never occurs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub n: usize,
    pub index: usize,
    /// Exact coordinates, one point per line.
    pub csv: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub predicate: String,
    pub family: SequenceFamily,
    pub max_n: usize,
    pub budget: usize,
    pub lengths: Vec<LengthTally>,
    pub counterexamples: Vec<Counterexample>,
}

impl ScanReport {
    pub fn found_counterexample(&self) -> bool {
        !self.counterexamples.is_empty()
    }
}

/// Search the family for sequences avoiding `pred`, for every length from the
/// predicate's arity to `max_n`, sampling `budget` members per length.
/// Shorter avoiding members are only tallied; those of length `max_n` are
/// reported as counterexamples to "every `max_n`-sequence contains `pred`".
/// This can refute unavoidability but never prove it.
pub fn scan_unavoidability(
    pred: &dyn Predicate,
    family: &SequenceFamily,
    max_n: usize,
    budget: usize,
) -> Result<ScanReport> {
    if family.dim() != pred.dim() {
        return Err(Error::Dimension(format!(
            "{} lives in dimension {}, family in {}",
            pred.describe(),
            pred.dim(),
            family.dim()
        )));
    }
    let mut lengths = Vec::new();
    let mut counterexamples = Vec::new();
    for n in pred.arity()..=max_n {
        let count = if family.is_deterministic() { budget.min(1) } else { budget };
        let avoiding: Vec<Option<Counterexample>> = (0..count)
            .into_par_iter()
            .map(|index| {
                let seq = family.generate(n, index)?;
                Ok(occurs(&seq, pred)?.is_none().then(|| Counterexample {
                    n,
                    index,
                    csv: seq.to_csv(),
                }))
            })
            .collect::<Result<_>>()?;
        let found: Vec<Counterexample> = avoiding.into_iter().flatten().collect();
        lengths.push(LengthTally {
            n,
            sampled: count,
            avoiding: found.len(),
        });
        if n == max_n {
            counterexamples = found;
        }
    }
    Ok(ScanReport {
        predicate: pred.describe(),
        family: family.clone(),
        max_n,
        budget,
        lengths,
        counterexamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::{central_project, Endpoint};
    use crate::kernel::int;
    use crate::types::zigzag;
    use proptest::prelude::*;

    fn curve(d: usize, n: i64) -> PointSequence {
        moment_curve_sequence(d, &(1..=n).map(int).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn parses_examples() {
        let s = parse_statement("148(2:7)", 3).unwrap();
        assert_eq!(s.hyperplane, vec![1, 4, 8]);
        assert_eq!(s.left, vec![Term::Point(2)]);
        assert_eq!(s.right, vec![Term::Point(7)]);
        let s = parse_statement("25(1:X[14;36])", 2).unwrap();
        assert_eq!(s.right, vec![Term::Intersection(vec![vec![1, 4], vec![3, 6]])]);
        assert_eq!(s.to_string(), "25(1:X[14;36])");
        let s = parse_statement("1368(27:459)", 4).unwrap();
        assert_eq!((s.left.len(), s.right.len()), (2, 3));
        let s = parse_statement("148(2:7X[37;258])", 3).unwrap();
        assert_eq!(s.right.len(), 2);
        let s = parse_statement("036(1X[025;14]:)", 3).unwrap();
        assert!(s.right.is_empty());
        assert_eq!(s.base(), 0);
        let s = parse_statement("48B(1:X[16A;259;37C])", 3).unwrap();
        assert_eq!(s.arity(), 12);
        let s = parse_statement("(12)(27)(3:4)", 2).unwrap();
        assert_eq!(s.hyperplane, vec![12, 27]);
        assert_eq!(s.to_string(), "CR(3:4)");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_statement("148(2:7", 3), Err(Error::Parse { .. })));
        assert!(matches!(parse_statement("14(2:7)", 3), Err(Error::Dimension(_))));
        assert!(matches!(parse_statement("25(1:X[14;3])", 2), Err(Error::Dimension(_))));
        assert!(matches!(parse_statement("25(1:X[14;14])", 2), Err(Error::Precondition(_))));
        assert!(matches!(parse_statement("22(1:3)", 2), Err(Error::Precondition(_))));
        assert!(matches!(parse_statement("25(:)", 2), Err(Error::Precondition(_))));
        assert!(matches!(parse_statement("25(1:3)x", 2), Err(Error::Parse { position: 7, .. })));
        assert!(matches!(parse_statement("25(1:?)", 2), Err(Error::Parse { position: 5, .. })));
    }

    #[test]
    fn evaluates_on_moment_curve() {
        let s = parse_statement("1368(27:459)", 4).unwrap();
        assert!(eval_statement(&curve(4, 9), &s).unwrap());
        let s = parse_statement("14(5:X[13;25])", 2).unwrap();
        assert!(eval_statement(&curve(2, 5), &s).unwrap());
        let s = parse_statement("14(3:X[13;25])", 2).unwrap();
        assert!(!eval_statement(&curve(2, 5), &s).unwrap());
    }

    #[test]
    fn eval_rejects_bad_input() {
        let s = parse_statement("12(3:4)", 2).unwrap();
        let mixed = PointSequence::from_ints(&[&[0, 0], &[2, 0], &[1, 3], &[3, 2]]).unwrap();
        assert!(matches!(eval_statement(&mixed, &s), Err(Error::Precondition(_))));
        let collinear = PointSequence::from_ints(&[&[0, 0], &[1, 1], &[2, 2], &[3, 3]]).unwrap();
        assert!(matches!(eval_statement(&collinear, &s), Err(Error::Genericity(_))));
        assert!(eval_statement(&curve(2, 3), &s).is_err());
        let non_radon = parse_statement("14(5:X[12;35])", 2).unwrap();
        assert!(matches!(eval_statement(&curve(2, 5), &non_radon), Err(Error::Genericity(_))));
    }

    #[test]
    fn parity_examples() {
        assert_eq!(parity_prediction(&[1, 3, 6, 8], 2, 7), SidePrediction::SameSide);
        assert_eq!(parity_prediction(&[1, 3, 6, 8], 4, 5), SidePrediction::SameSide);
        assert_eq!(parity_prediction(&[1, 3, 6, 8], 2, 4), SidePrediction::OppositeSide);
        assert_eq!(parity_prediction(&[1, 3, 6, 8], 5, 5), SidePrediction::SameSide);
    }

    #[test]
    fn parity_suite_on_curves() {
        for d in 1..=4 {
            let report = parity_cross_check(&curve(d, 9)).unwrap();
            assert!(report.agrees());
            let planes = Combinations::new(9, d).count();
            assert_eq!(report.checked, planes * (9 - d) * (8 - d) / 2);
        }
    }

    #[test]
    fn moment_curve_checks_parameters() {
        assert!(moment_curve_sequence(2, &[int(1), int(1)]).is_err());
        let seq = curve(3, 7);
        assert_eq!(seq.homogeneous_sign(), Some(Sign::Positive));
        let r = convex::radon_partition(&seq.points()[..5]).unwrap();
        assert_eq!(r.sides, [vec![0, 2, 4], vec![1, 3]]);
    }

    #[test]
    fn random_sequences_are_homogeneous_and_reproducible() {
        for (d, n) in [(1, 6), (2, 7), (2, 12), (3, 8), (4, 7)] {
            for seed in 0..5 {
                let seq = random_homogeneous_sequence(d, n, seed).unwrap();
                assert_eq!(seq.len(), n);
                assert!(seq.is_generic() && seq.is_orientation_homogeneous(), "d={d} n={n} seed={seed}");
                assert_eq!(seq, random_homogeneous_sequence(d, n, seed).unwrap());
            }
        }
        assert_ne!(random_homogeneous_sequence(2, 7, 1).unwrap(), random_homogeneous_sequence(2, 7, 2).unwrap());
    }

    #[test]
    fn affine_regular_hexagon_is_degenerate() {
        // 14, 25, 36 are concurrent diagonals, so 25 meets 36 on the line 14.
        let hex = PointSequence::from_ints(&[&[2, 0], &[1, 1], &[-1, 1], &[-2, 0], &[-1, -1], &[1, -1]]).unwrap();
        assert!(matches!(sixpt_eval(&hex), Err(Error::Genericity(_))));
    }

    #[test]
    fn both_sixpt_verdicts_occur() {
        let verdicts: BTreeSet<bool> = (0..200)
            .map(|seed| sixpt_eval(&random_homogeneous_sequence(2, 6, seed).unwrap()).unwrap())
            .collect();
        assert_eq!(verdicts.len(), 2);
    }

    #[test]
    fn sixpt_forms_agree() {
        let forms: Vec<SeparationStatement> = SIXPT_FORMS.iter().map(|t| parse_statement(t, 2).unwrap()).collect();
        for seed in 0..100 {
            let seq = random_homogeneous_sequence(2, 6, 1000 + seed).unwrap();
            let v: Vec<bool> = forms.iter().map(|s| eval_statement(&seq, s).unwrap()).collect();
            assert!(v.iter().all(|&x| x == v[0]), "seed {seed}: {v:?}");
            assert_eq!(sixpt_eval(&seq).unwrap(), v[0]);
        }
    }

    #[test]
    fn six_point_lemma_on_random_sequences() {
        let sp = SixPoint;
        (0..10_000u64).into_par_iter().for_each(|seed| {
            let seq = random_homogeneous_sequence(2, 7, seed).unwrap();
            let a = sp.eval(&seq.select(&[0, 1, 2, 3, 4, 5])).unwrap();
            let b = sp.eval(&seq.select(&[1, 2, 3, 4, 5, 6])).unwrap();
            assert!(a || b, "seed {seed}");
        });
    }

    #[test]
    fn occurrences() {
        let five = random_homogeneous_sequence(2, 5, 3).unwrap();
        assert_eq!(occurs(&five, &ConvexPosition).unwrap(), Some(vec![0, 1, 2, 3]));
        let scattered = PointSequence::from_ints(&[&[0, 0], &[10, 0], &[0, 10], &[2, 3], &[3, 2]]).unwrap();
        assert!(occurs(&scattered, &ConvexPosition).unwrap().is_some());

        let diag = stretched_diagonal(2, 7).unwrap().sequence().unwrap();
        let zz = TypePredicate(zigzag(2, 3).unwrap());
        assert_eq!(occurs(&diag, &zz).unwrap(), Some((0..7).collect()));
        let consecutive = TypePredicate(TverbergType::decode("1123122", 2, 3).unwrap());
        assert!(consecutive.0.has_consecutive_pair());
        assert_eq!(occurs(&diag, &consecutive).unwrap(), None);
        let diag8 = stretched_diagonal(2, 8).unwrap().sequence().unwrap();
        assert_eq!(occurs(&diag8, &consecutive).unwrap(), None);
    }

    #[test]
    fn occurs_names_degenerate_tuple() {
        let hex = PointSequence::from_ints(&[&[2, 0], &[1, 1], &[-1, 1], &[-2, 0], &[-1, -1], &[1, -1]]).unwrap();
        match occurs(&hex, &SixPoint) {
            Err(Error::Genericity(msg)) => assert!(msg.contains("123456"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn scans() {
        let fam = SequenceFamily::PerturbedConvex { d: 2, seed: 7 };
        let report = scan_unavoidability(&SixPoint, &fam, 7, 100).unwrap();
        assert_eq!(report.lengths.last().unwrap(), &LengthTally { n: 7, sampled: 100, avoiding: 0 });
        assert!(report.lengths[0].avoiding > 0);
        assert!(!report.found_counterexample());

        let lifted = StatementPredicate::parse("025(1:X[14;036])", 3).unwrap();
        assert_eq!(lifted.arity(), 7);
        let fam = SequenceFamily::PerturbedConvex { d: 3, seed: 11 };
        let report = scan_unavoidability(&lifted, &fam, 8, 40).unwrap();
        assert!(!report.found_counterexample());
        assert_eq!(report.lengths.len(), 2);

        let colorful = TypePredicate(zigzag(2, 3).unwrap());
        let report = scan_unavoidability(&Not(Box::new(colorful)), &SequenceFamily::StretchedDiagonal { d: 2 }, 7, 5).unwrap();
        assert_eq!(report.counterexamples.len(), 1);
        assert_eq!(report.lengths, vec![LengthTally { n: 7, sampled: 1, avoiding: 1 }]);
    }

    #[test]
    fn moment_family_is_homogeneous() {
        let fam = SequenceFamily::MomentCurve { d: 3, seed: 2 };
        for i in 0..5 {
            let seq = fam.generate(7, i).unwrap();
            assert!(seq.is_orientation_homogeneous());
        }
    }

    /// Radon point of `b1 b2` against `a1 a2 a3` as the weight on `b2`.
    fn segment_parameter(seq: &PointSequence, b: [usize; 2], a: [usize; 3]) -> Rational {
        let mut labels: Vec<(usize, u8)> = b.iter().map(|&i| (i, 0)).chain(a.iter().map(|&i| (i, 1))).collect();
        labels.sort_unstable();
        let sub = seq.select(&labels.iter().map(|&(i, _)| i).collect::<Vec<_>>());
        let owner: Vec<u8> = labels.iter().map(|&(_, j)| j).collect();
        let ty = TverbergType::from_assignment(3, 2, &owner).unwrap();
        let cert = verify_tverberg(&sub, &ty).unwrap().unwrap();
        let part = ty.parts().iter().position(|p| p.len() == 2).unwrap();
        cert.weights()[part][1].clone()
    }

    fn homogeneous(d: usize, n: usize) -> impl Strategy<Value = PointSequence> {
        any::<u64>().prop_map(move |seed| random_homogeneous_sequence(d, n, seed).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn parity_rule_matches_evaluation(
            (d, seq, picks) in (1usize..=4).prop_flat_map(|d| {
                let n = 9.min(d + 5);
                (Just(d), homogeneous(d, n), prop::sample::subsequence((1..=n).collect::<Vec<_>>(), d + 2))
            }),
            shuffle in any::<u64>(),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(shuffle);
            let mut picks = picks;
            picks.shuffle(&mut rng);
            let (q, q2) = (picks[0].min(picks[1]), picks[0].max(picks[1]));
            let mut plane = picks[2..].to_vec();
            plane.sort_unstable();
            let text = |sep: bool| {
                let h: String = plane.iter().map(|&l| label_text(l)).collect();
                let (a, b) = (label_text(q), label_text(q2));
                if sep { format!("{h}({a}:{b})") } else { format!("{h}({a}{b}:)") }
            };
            let opposite = eval_statement(&seq, &parse_statement(&text(true), d).unwrap()).unwrap();
            let same = eval_statement(&seq, &parse_statement(&text(false), d).unwrap()).unwrap();
            prop_assert_ne!(opposite, same);
            let want = parity_prediction(&plane, q, q2);
            prop_assert_eq!(opposite, want == SidePrediction::OppositeSide);
        }

        #[test]
        fn same_side_rule(
            (d, seq, picks) in (2usize..=3).prop_flat_map(|d| {
                let n = 2 * d + 3;
                (Just(d), homogeneous(d, n), prop::sample::subsequence((1..=n).collect::<Vec<_>>(), 2 * d + 2))
            }),
            shuffle in any::<u64>(),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(shuffle);
            let mut picks = picks;
            picks.shuffle(&mut rng);
            let mut plane = picks[..d].to_vec();
            plane.sort_unstable();
            let mut radon = picks[d..].to_vec();
            radon.sort_unstable();
            let r = convex::radon_partition(&seq.select(&radon.iter().map(|l| l - 1).collect::<Vec<_>>()).into_points()).unwrap();
            let side0: Vec<usize> = r.sides[0].iter().map(|&i| radon[i]).collect();
            let side1: Vec<usize> = r.sides[1].iter().map(|&i| radon[i]).collect();
            let h: String = plane.iter().map(|&l| label_text(l)).collect();
            let word = |v: &[usize]| v.iter().map(|&l| label_text(l)).collect::<String>();
            let all_one_side = parse_statement(&format!("{h}({}:)", word(&side0)), d).unwrap();
            if eval_statement(&seq, &all_one_side).unwrap() {
                let x = format!("X[{};{}]", word(&side0), word(&side1));
                let s = parse_statement(&format!("{h}({}{x}:)", word(&side0)), d).unwrap();
                prop_assert!(eval_statement(&seq, &s).unwrap());
            }
        }

        #[test]
        fn projection_coherence(seq in homogeneous(3, 7)) {
            let spatial = parse_statement("025(1:X[14;036])", 3).unwrap();
            let planar = parse_statement("25(1:X[14;36])", 2).unwrap();
            let projected = central_project(&seq, Endpoint::First).unwrap();
            prop_assert_eq!(
                eval_statement(&seq, &spatial).unwrap(),
                eval_statement(&projected, &planar).unwrap()
            );
        }

        #[test]
        fn movement_special_case(
            seq in homogeneous(3, 9),
            picks in prop::sample::subsequence((0..9).collect::<Vec<_>>(), 5),
            moves in (any::<bool>(), any::<bool>(), any::<bool>()),
        ) {
            // a1 < b1 < a2 < b2 < a3, then move a1 down, a2 up, a3 down
            // without leaving the interlacing pattern.
            let [a1, b1, a2, b2, a3] = [picks[0], picks[1], picks[2], picks[3], picks[4]];
            let a1p = if moves.0 && a1 > 0 { a1 - 1 } else { a1 };
            let a2p = if moves.1 && a2 + 1 < b2 { a2 + 1 } else { a2 };
            let a3p = if moves.2 && a3 - 1 > b2 { a3 - 1 } else { a3 };
            let r = segment_parameter(&seq, [b1, b2], [a1, a2, a3]);
            let rp = segment_parameter(&seq, [b1, b2], [a1p, a2p, a3p]);
            prop_assert!(r <= rp);
            if (a1p, a2p, a3p) != (a1, a2, a3) {
                prop_assert!(r < rp);
            }
        }
    }
}
