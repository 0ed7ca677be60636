//! Tverberg types: partitions of `[T(d,r)]` into `r` parts, their string
//! encodings, and the combinatorial classifications used throughout the
//! crate (colorful, zigzag, consecutive pairs, mirror images, interlacing).
//!
//! A type is stored as its list of parts (0-based positions, each part
//! sorted, parts ordered by their smallest element). The canonical encoding
//! assigns symbol `i` to the `i`-th part in that order, so the first
//! occurrence of each symbol precedes the first occurrence of the next.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::combin::{self, factorial};
use crate::error::{Error, Result};
use crate::sequence::{label_text, label_value};

/// `T(d, r) = (r - 1)(d + 1) + 1`.
pub fn t_param(d: usize, r: usize) -> usize {
    (r - 1) * (d + 1) + 1
}

/// `(r - 1)!^d`, the number of colorful types.
pub fn colorful_count(d: usize, r: usize) -> u64 {
    factorial(r as u64 - 1).pow(d as u32)
}

/// A partition of `[T(d, r)]` into `r` nonempty parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TverbergType {
    d: usize,
    r: usize,
    parts: Vec<Vec<usize>>,
}

/// Canonical string form of a [`TverbergType`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeEncoding(String);

impl TypeEncoding {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn symbols(&self) -> Vec<usize> {
        self.0.chars().filter_map(label_value).collect()
    }
}

impl fmt::Display for TypeEncoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for TypeEncoding {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

/// Relabel symbols by order of first occurrence, starting from 0.
pub fn canonical_assignment<T: Copy + Eq>(raw: &[T]) -> Vec<u8> {
    let mut seen: Vec<T> = Vec::new();
    raw.iter()
        .map(|s| match seen.iter().position(|x| x == s) {
            Some(i) => i as u8,
            None => {
                seen.push(*s);
                (seen.len() - 1) as u8
            }
        })
        .collect()
}

impl TverbergType {
    fn check_params(d: usize, r: usize) -> Result<()> {
        if d == 0 || r < 2 {
            return Err(Error::Precondition(format!(
                "Tverberg types need d >= 1 and r >= 2, got d={d}, r={r}"
            )));
        }
        Ok(())
    }

    /// Build from a block assignment (any relabeling of the parts).
    pub fn from_assignment<T: Copy + Eq>(d: usize, r: usize, raw: &[T]) -> Result<Self> {
        Self::check_params(d, r)?;
        let n = t_param(d, r);
        if raw.len() != n {
            return Err(Error::Precondition(format!(
                "a type with d={d}, r={r} covers {n} indices, got {}",
                raw.len()
            )));
        }
        let canon = canonical_assignment(raw);
        let parts = combin::blocks_of(&canon);
        if parts.len() != r {
            return Err(Error::Precondition(format!(
                "expected {r} parts, got {}",
                parts.len()
            )));
        }
        Ok(TverbergType { d, r, parts })
    }

    /// Build from parts written with 1-based indices, as in `{1,3,6},{2,7},{4,5}`.
    pub fn from_labels(d: usize, r: usize, parts: &[&[usize]]) -> Result<Self> {
        Self::check_params(d, r)?;
        let n = t_param(d, r);
        let mut owner = vec![usize::MAX; n];
        for (j, part) in parts.iter().enumerate() {
            for &label in part.iter() {
                if label == 0 || label > n {
                    return Err(Error::Precondition(format!("index {label} outside 1..={n}")));
                }
                if owner[label - 1] != usize::MAX {
                    return Err(Error::Precondition(format!("index {label} appears twice")));
                }
                owner[label - 1] = j;
            }
        }
        if let Some(i) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::Precondition(format!("index {} not covered", i + 1)));
        }
        if parts.iter().any(|p| p.is_empty()) {
            return Err(Error::Precondition("empty part".into()));
        }
        Self::from_assignment(d, r, &owner)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        t_param(self.d, self.r)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Parts as sorted 0-based positions, ordered by smallest element.
    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    /// Canonical block index of every position.
    pub fn assignment(&self) -> Vec<u8> {
        let mut a = vec![0u8; self.len()];
        for (j, part) in self.parts.iter().enumerate() {
            for &i in part {
                a[i] = j as u8;
            }
        }
        a
    }

    /// Part sizes in ascending order.
    pub fn part_sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.parts.iter().map(Vec::len).collect();
        s.sort_unstable();
        s
    }

    pub fn encode(&self) -> TypeEncoding {
        TypeEncoding(
            self.assignment()
                .iter()
                .map(|&b| label_text(b as usize + 1))
                .collect(),
        )
    }

    /// Parse any of the `r!` encodings of a type.
    pub fn decode(text: &str, d: usize, r: usize) -> Result<Self> {
        Self::check_params(d, r)?;
        let n = t_param(d, r);
        let mut raw = Vec::with_capacity(n);
        for (pos, c) in text.trim().chars().enumerate() {
            match label_value(c) {
                Some(v) if (1..=r).contains(&v) => raw.push(v),
                _ => return Err(Error::parse(pos, format!("symbol {c:?} not in 1..={r}"))),
            }
        }
        if raw.len() != n {
            return Err(Error::parse(
                raw.len().min(n),
                format!("expected {n} symbols for d={d}, r={r}, got {}", raw.len()),
            ));
        }
        if let Some(missing) = (1..=r).find(|s| !raw.contains(s)) {
            return Err(Error::parse(n, format!("symbol {missing} never used")));
        }
        Self::from_assignment(d, r, &raw)
    }

    /// Every one of the `d + 1` blocks of `r` consecutive indices starting at
    /// `(r-1) i` meets every part exactly once.
    pub fn is_colorful(&self) -> bool {
        let a = self.assignment();
        (0..=self.d).all(|i| {
            let start = (self.r - 1) * i;
            let mut seen = vec![false; self.r];
            a[start..start + self.r]
                .iter()
                .all(|&b| !std::mem::replace(&mut seen[b as usize], true))
        })
    }

    /// Some part contains two consecutive integers.
    pub fn has_consecutive_pair(&self) -> bool {
        self.assignment().windows(2).any(|w| w[0] == w[1])
    }

    /// The type with index order reversed, `i -> T + 1 - i`.
    pub fn mirror(&self) -> TverbergType {
        let mut a = self.assignment();
        a.reverse();
        Self::from_assignment(self.d, self.r, &a).expect("mirror of a valid type")
    }

    /// Parts `a` and `b` (0-based part numbers) interlace as `ababa` or `babab`.
    pub fn parts_interlace(&self, a: usize, b: usize) -> bool {
        interlaces_symbols(&self.assignment(), a as u8, b as u8)
    }
}

impl fmt::Display for TverbergType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, part) in self.parts.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            let labels: Vec<String> = part.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "{{{}}}", labels.join(","))?;
        }
        Ok(())
    }
}

impl Serialize for TverbergType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.encode().as_str())
    }
}

fn contains_subsequence<T: PartialEq>(haystack: &[T], needle: &[T]) -> bool {
    let mut it = needle.iter().peekable();
    for h in haystack {
        if it.peek().is_some_and(|n| *n == h) {
            it.next();
        }
    }
    it.peek().is_none()
}

fn interlaces_symbols<T: PartialEq + Copy>(s: &[T], a: T, b: T) -> bool {
    contains_subsequence(s, &[a, b, a, b, a]) || contains_subsequence(s, &[b, a, b, a, b])
}

/// The encoding contains `ababa` or `babab` as a (not necessarily
/// contiguous) subsequence.
pub fn interlaces(enc: &str, a: char, b: char) -> Result<bool> {
    if a == b {
        return Err(Error::Precondition("interlacing needs two distinct symbols".into()));
    }
    let s: Vec<char> = enc.chars().collect();
    Ok(interlaces_symbols(&s, a, b))
}

/// All types for `(d, r)`, in canonical lexicographic order.
pub fn enumerate_types(d: usize, r: usize) -> Result<Vec<TverbergType>> {
    TverbergType::check_params(d, r)?;
    Ok(combin::set_partitions(t_param(d, r), r)
        .into_iter()
        .map(|a| TverbergType {
            d,
            r,
            parts: combin::blocks_of(&a),
        })
        .collect())
}

/// All colorful types, built by repeatedly appending a permutation of the
/// symbols other than the last one. Sorted canonical encodings.
pub fn enumerate_colorful(d: usize, r: usize) -> Result<Vec<TypeEncoding>> {
    TverbergType::check_params(d, r)?;
    let mut words: Vec<Vec<u8>> = vec![(0..r as u8).collect()];
    for _ in 0..d {
        let mut next = Vec::with_capacity(words.len() * factorial(r as u64 - 1) as usize);
        for w in &words {
            let last = *w.last().expect("nonempty word");
            let rest: Vec<u8> = (0..r as u8).filter(|&s| s != last).collect();
            for perm in combin::permutations(&rest) {
                let mut ext = w.clone();
                ext.extend(perm);
                next.push(ext);
            }
        }
        words = next;
    }
    let mut out: Vec<TypeEncoding> = words
        .iter()
        .map(|w| {
            TverbergType::from_assignment(d, r, w)
                .expect("colorful word is a valid type")
                .encode()
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// The colorful type encoded by the sweep `12..r..212..r..`.
pub fn zigzag(d: usize, r: usize) -> Result<TverbergType> {
    TverbergType::check_params(d, r)?;
    let period = 2 * (r - 1);
    let word: Vec<usize> = (0..t_param(d, r))
        .map(|i| {
            let k = i % period;
            if k < r {
                k
            } else {
                period - k
            }
        })
        .collect();
    TverbergType::from_assignment(d, r, &word)
}

/// Result of the census of `(3,3,3)` types of `[9]` whose triangles
/// pairwise interlace.
#[derive(Debug, Clone, Serialize)]
pub struct Census333 {
    pub total: usize,
    pub interlacing: Vec<TypeEncoding>,
    pub colorful: Vec<TypeEncoding>,
    pub consecutive: Vec<TypeEncoding>,
    pub residual: Vec<TypeEncoding>,
    /// Residual types in `{..},{..},{..}` form.
    pub residual_parts: Vec<String>,
    /// Whether the residual set equals the four printed types plus their
    /// mirror images.
    pub matches_printed_list: bool,
}

/// The four residual `(3,3,3)` types printed without their mirror images.
pub const PRINTED_RESIDUAL: [[[usize; 3]; 3]; 4] = [
    [[1, 4, 7], [2, 6, 9], [3, 5, 8]],
    [[1, 4, 8], [2, 6, 9], [3, 5, 7]],
    [[1, 4, 9], [2, 5, 7], [3, 6, 8]],
    [[1, 4, 9], [2, 6, 8], [3, 5, 7]],
];

pub fn enumerate_333_intersecting() -> Census333 {
    let all: Vec<TverbergType> = enumerate_types(3, 3)
        .expect("valid parameters")
        .into_iter()
        .filter(|t| t.part_sizes() == [3, 3, 3])
        .collect();
    let interlacing: Vec<&TverbergType> = all
        .iter()
        .filter(|t| t.parts_interlace(0, 1) && t.parts_interlace(0, 2) && t.parts_interlace(1, 2))
        .collect();
    let colorful: Vec<&TverbergType> = interlacing.iter().copied().filter(|t| t.is_colorful()).collect();
    let consecutive: Vec<&TverbergType> = interlacing
        .iter()
        .copied()
        .filter(|t| !t.is_colorful() && t.has_consecutive_pair())
        .collect();
    let residual: Vec<&TverbergType> = interlacing
        .iter()
        .copied()
        .filter(|t| !t.is_colorful() && !t.has_consecutive_pair())
        .collect();

    let printed: BTreeSet<TverbergType> = PRINTED_RESIDUAL
        .iter()
        .flat_map(|parts| {
            let refs: Vec<&[usize]> = parts.iter().map(|p| p.as_slice()).collect();
            let t = TverbergType::from_labels(3, 3, &refs).expect("printed type is valid");
            [t.mirror(), t]
        })
        .collect();
    let found: BTreeSet<TverbergType> = residual.iter().map(|t| (*t).clone()).collect();

    let enc = |v: &[&TverbergType]| v.iter().map(|t| t.encode()).collect::<Vec<_>>();
    Census333 {
        total: all.len(),
        interlacing: enc(&interlacing),
        colorful: enc(&colorful),
        consecutive: enc(&consecutive),
        residual: enc(&residual),
        residual_parts: residual.iter().map(|t| t.to_string()).collect(),
        matches_printed_list: printed == found,
    }
}

/// Plane-side predicates of the colorful `(3,3,3,4)` types in `R^3`: for
/// each such type and each point of its size-4 part, delete that point and
/// encode the remaining 12 indices over `{a, b, c, x}`, where `x` marks the
/// other three points of the size-4 part (the plane) and `a, b, c` the three
/// triangles, named by first occurrence. Returns the distinct strings, sorted.
pub fn plane_side_predicates_3334() -> Vec<String> {
    let types = enumerate_colorful(3, 4).expect("valid parameters");
    let mut out = BTreeSet::new();
    for enc in types {
        let word = enc.symbols();
        let count = |s: usize| word.iter().filter(|&&v| v == s).count();
        let sizes: Vec<usize> = (1..=4).map(count).collect();
        if sizes.iter().filter(|&&c| c == 3).count() != 3 {
            continue;
        }
        let plane = (1..=4).find(|&s| count(s) == 4).expect("one part of size 4");
        for (pos, _) in word.iter().enumerate().filter(|(_, &v)| v == plane) {
            let mut rest = word.clone();
            rest.remove(pos);
            out.insert(plane_side_string(&rest, plane));
        }
    }
    out.into_iter().collect()
}

fn plane_side_string(word: &[usize], plane: usize) -> String {
    let mut order: Vec<usize> = Vec::new();
    for &v in word {
        if v != plane && !order.contains(&v) {
            order.push(v);
        }
    }
    word.iter()
        .map(|&v| {
            if v == plane {
                'x'
            } else {
                let i = order.iter().position(|&o| o == v).expect("seen");
                (b'a' + i as u8) as char
            }
        })
        .collect()
}

/// The number of colorful `(d, r)` types whose part sizes match `sizes`
/// (ascending order).
pub fn colorful_with_sizes(d: usize, r: usize, sizes: &[usize]) -> Result<Vec<TypeEncoding>> {
    let mut wanted = sizes.to_vec();
    wanted.sort_unstable();
    Ok(enumerate_colorful(d, r)?
        .into_iter()
        .filter(|e| {
            TverbergType::decode(e.as_str(), d, r)
                .map(|t| t.part_sizes() == wanted)
                .unwrap_or(false)
        })
        .collect())
}
