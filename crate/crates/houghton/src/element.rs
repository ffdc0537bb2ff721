//! Elements of the Houghton group H_n and their numerical invariants.
//!
//! A point of the ray system is a pair (ray, pos) with pos >= 1. An element
//! is a permutation of the ray system that acts as the translation
//! k -> k + t_i far enough out on each ray i; it is stored as the vector of
//! eventual translations together with the finite list of points where the
//! permutation differs from that translation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point (ray, pos) of the ray system, with `pos >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RayPoint {
    pub ray: usize,
    pub pos: i64,
}

impl RayPoint {
    pub fn new(ray: usize, pos: i64) -> Self {
        RayPoint { ray, pos }
    }
}

impl fmt::Display for RayPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.ray, self.pos)
    }
}

/// An element of H_n in canonical form.
///
/// `exceptions` is sorted by source point and lists exactly the points x
/// with x*e different from x shifted by t on its ray; entries that agree
/// with the translation are never stored, so structural equality is group
/// equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element {
    n: usize,
    t: Vec<i64>,
    exceptions: Vec<(RayPoint, RayPoint)>,
}

/// Number of rays, eventual translations and the deviation map of an
/// element, as a plain serializable record. `map` is sorted by source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRecord {
    pub n: usize,
    pub t: Vec<i64>,
    pub map: Vec<[[i64; 2]; 2]>,
}

/// The complexity data of an element: per-ray deviation depths `p`, their
/// sum `total` (P) and the translation amount `translation` (T).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityProfile {
    pub p: Vec<i64>,
    pub total: i64,
    pub translation: i64,
}

impl ComplexityProfile {
    fn new(p: Vec<i64>, t: &[i64]) -> Self {
        let total: i64 = p.iter().sum();
        let abs_sum: i64 = t.iter().map(|v| v.abs()).sum();
        assert_eq!(abs_sum % 2, 0, "translation amounts always sum evenly");
        let translation = abs_sum / 2;
        assert!(total >= translation, "P >= T must hold");
        for (i, &ti) in t.iter().enumerate() {
            if ti < 0 {
                assert!(p[i] >= -ti, "p_i >= |t_i| must hold for t_i < 0");
            }
        }
        ComplexityProfile { p, total, translation }
    }
}

impl Element {
    /// The identity of H_n.
    pub fn identity(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadRayCount(n));
        }
        Ok(Element { n, t: vec![0; n], exceptions: Vec::new() })
    }

    /// Builds an element from a translation vector and a deviation map,
    /// canonicalizing and validating all invariants.
    pub fn make(
        n: usize,
        t: Vec<i64>,
        exceptions: impl IntoIterator<Item = (RayPoint, RayPoint)>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadRayCount(n));
        }
        if t.len() != n {
            return Err(Error::BadTranslation { expected: n, got: t.len() });
        }
        let sum: i64 = t.iter().sum();
        if sum != 0 {
            return Err(Error::ZeroSumViolation(sum));
        }
        let mut raw: Vec<(RayPoint, RayPoint)> = Vec::new();
        for (src, dst) in exceptions {
            for p in [src, dst] {
                if p.ray >= n {
                    return Err(Error::RayOutOfRange { ray: p.ray, n });
                }
                if p.pos < 1 {
                    return Err(Error::BadPoint { ray: p.ray, pos: p.pos });
                }
            }
            raw.push((src, dst));
        }
        raw.sort_unstable();
        raw.dedup();
        if raw.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::NotBijective);
        }
        let map: Vec<(RayPoint, RayPoint)> = raw
            .into_iter()
            .filter(|&(src, dst)| dst.ray != src.ray || dst.pos != src.pos + t[src.ray])
            .collect();
        let e = Element { n, t, exceptions: map };
        e.check_bijective()?;
        Ok(e)
    }

    /// Internal constructor for maps that are canonical and bijective by
    /// construction. Debug builds re-validate.
    pub(crate) fn from_canonical_parts(
        n: usize,
        t: Vec<i64>,
        exceptions: Vec<(RayPoint, RayPoint)>,
    ) -> Self {
        let e = Element { n, t, exceptions };
        debug_assert!(e.validate_canonical().is_ok(), "non-canonical internal element");
        e
    }

    fn validate_canonical(&self) -> Result<()> {
        let again = Element::make(self.n, self.t.clone(), self.exceptions.iter().copied())?;
        if again != *self {
            return Err(Error::NotBijective);
        }
        Ok(())
    }

    /// Window beyond which the element is a plain translation on every ray:
    /// one more than the largest deviation position (source or image) plus
    /// the largest translation magnitude.
    fn window(&self) -> i64 {
        let max_t = self.t.iter().map(|v| v.abs()).max().unwrap_or(0);
        let max_pos = self
            .exceptions
            .iter()
            .flat_map(|&(a, b)| [a.pos, b.pos])
            .max()
            .unwrap_or(0);
        1 + max_t + max_pos
    }

    /// Checks that the induced total map is a bijection of the ray system.
    ///
    /// It suffices to check points with pos <= M + max|t| where M is the
    /// window: any collision involves a point below M, and every point at
    /// or above M is hit by a translation once the points below are covered.
    fn check_bijective(&self) -> Result<()> {
        let m = self.window();
        let max_t = self.t.iter().map(|v| v.abs()).max().unwrap_or(0);
        let upper = m + max_t;
        let width = upper as usize;
        let mut hit = vec![false; self.n * width];
        for ray in 0..self.n {
            for pos in 1..=upper {
                let img = self.apply_unchecked(RayPoint::new(ray, pos));
                if img.pos < 1 {
                    return Err(Error::NotBijective);
                }
                if img.pos <= upper {
                    let slot = img.ray * width + (img.pos - 1) as usize;
                    if hit[slot] {
                        return Err(Error::NotBijective);
                    }
                    hit[slot] = true;
                }
            }
        }
        for ray in 0..self.n {
            for pos in 1..=m {
                if !hit[ray * width + (pos - 1) as usize] {
                    return Err(Error::NotBijective);
                }
            }
        }
        Ok(())
    }

    pub fn ray_count(&self) -> usize {
        self.n
    }

    /// Eventual translation on each ray.
    pub fn translations(&self) -> &[i64] {
        &self.t
    }

    /// Canonical deviation map, sorted by source.
    pub fn exceptions(&self) -> &[(RayPoint, RayPoint)] {
        &self.exceptions
    }

    pub fn is_identity(&self) -> bool {
        self.exceptions.is_empty() && self.t.iter().all(|&v| v == 0)
    }

    fn apply_unchecked(&self, x: RayPoint) -> RayPoint {
        match self.exceptions.binary_search_by(|probe| probe.0.cmp(&x)) {
            Ok(idx) => self.exceptions[idx].1,
            Err(_) => RayPoint::new(x.ray, x.pos + self.t[x.ray]),
        }
    }

    /// Right action of the element on a point.
    pub fn apply(&self, x: RayPoint) -> Result<RayPoint> {
        if x.ray >= self.n {
            return Err(Error::RayOutOfRange { ray: x.ray, n: self.n });
        }
        if x.pos < 1 {
            return Err(Error::BadPoint { ray: x.ray, pos: x.pos });
        }
        Ok(self.apply_unchecked(x))
    }

    /// Preimage of a point, using that the deviation map of the inverse is
    /// the reversed deviation map.
    pub fn apply_inverse(&self, y: RayPoint) -> Result<RayPoint> {
        if y.ray >= self.n {
            return Err(Error::RayOutOfRange { ray: y.ray, n: self.n });
        }
        if y.pos < 1 {
            return Err(Error::BadPoint { ray: y.ray, pos: y.pos });
        }
        match self.exceptions.iter().find(|&&(_, dst)| dst == y) {
            Some(&(src, _)) => Ok(src),
            None => Ok(RayPoint::new(y.ray, y.pos - self.t[y.ray])),
        }
    }

    /// Right-action product: x * (a.compose(b)) = (x * a) * b.
    pub fn compose(&self, other: &Element) -> Result<Element> {
        if self.n != other.n {
            return Err(Error::RayCountMismatch(self.n, other.n));
        }
        let t: Vec<i64> = self
            .t
            .iter()
            .zip(&other.t)
            .map(|(&a, &b)| a + b)
            .collect();
        // The product deviates only at deviations of self and at preimages
        // (under self) of deviations of other.
        let mut candidates: Vec<RayPoint> =
            self.exceptions.iter().map(|&(src, _)| src).collect();
        for &(src, _) in &other.exceptions {
            // Preimage of src under self. Points whose translation preimage
            // is invalid are necessarily covered by an exception.
            match self.exceptions.iter().find(|&&(_, dst)| dst == src) {
                Some(&(pre, _)) => candidates.push(pre),
                None => {
                    let pos = src.pos - self.t[src.ray];
                    if pos >= 1 {
                        candidates.push(RayPoint::new(src.ray, pos));
                    }
                }
            }
        }
        candidates.sort_unstable();
        candidates.dedup();
        let mut exceptions = Vec::with_capacity(candidates.len());
        for x in candidates {
            let y = other.apply_unchecked(self.apply_unchecked(x));
            if y.ray != x.ray || y.pos != x.pos + t[x.ray] {
                exceptions.push((x, y));
            }
        }
        Ok(Element::from_canonical_parts(self.n, t, exceptions))
    }

    /// Composes a sequence left to right.
    pub fn product<'a>(n: usize, factors: impl IntoIterator<Item = &'a Element>) -> Result<Element> {
        let mut acc = Element::identity(n)?;
        for f in factors {
            acc = acc.compose(f)?;
        }
        Ok(acc)
    }

    pub fn inverse(&self) -> Element {
        let t: Vec<i64> = self.t.iter().map(|&v| -v).collect();
        let mut exceptions: Vec<(RayPoint, RayPoint)> = self
            .exceptions
            .iter()
            .map(|&(src, dst)| (dst, src))
            .collect();
        exceptions.sort_unstable();
        Element::from_canonical_parts(self.n, t, exceptions)
    }

    /// Integer power via repeated composition.
    pub fn pow(&self, k: i64) -> Result<Element> {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Element::identity(self.n)?;
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base)?;
        }
        Ok(acc)
    }

    /// Image under the abelianization map: the first n-1 translations.
    pub fn abelianization(&self) -> Vec<i64> {
        self.t[..self.n - 1].to_vec()
    }

    /// Per-ray deviation depths, complexity P and translation amount T.
    pub fn complexity(&self) -> ComplexityProfile {
        let mut p = vec![0i64; self.n];
        for &(src, _) in &self.exceptions {
            p[src.ray] = p[src.ray].max(src.pos);
        }
        ComplexityProfile::new(p, &self.t)
    }

    pub fn is_finitary(&self) -> bool {
        self.t.iter().all(|&v| v == 0)
    }

    /// Parity of a finitary element: +1 for even, -1 for odd.
    pub fn sign(&self) -> Result<i32> {
        if !self.is_finitary() {
            return Err(Error::NotFinitary);
        }
        // The deviation map is a permutation of its own domain; parity is
        // (-1)^(points - cycles).
        let points: Vec<RayPoint> = self.exceptions.iter().map(|&(src, _)| src).collect();
        let mut seen = vec![false; points.len()];
        let mut cycles = 0usize;
        for start in 0..points.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut at = start;
            while !seen[at] {
                seen[at] = true;
                let img = self.exceptions[at].1;
                at = points
                    .binary_search(&img)
                    .expect("finitary deviation map permutes its domain");
            }
        }
        Ok(if (points.len() - cycles) % 2 == 0 { 1 } else { -1 })
    }

    /// Serializable record form; round-trips exactly.
    pub fn to_record(&self) -> ElementRecord {
        ElementRecord {
            n: self.n,
            t: self.t.clone(),
            map: self
                .exceptions
                .iter()
                .map(|&(src, dst)| {
                    [[src.ray as i64, src.pos], [dst.ray as i64, dst.pos]]
                })
                .collect(),
        }
    }

    pub fn from_record(rec: &ElementRecord) -> Result<Element> {
        let mut map = Vec::with_capacity(rec.map.len());
        for entry in &rec.map {
            let [src, dst] = entry;
            if src[0] < 0 || dst[0] < 0 {
                return Err(Error::BadRecord("negative ray index".into()));
            }
            map.push((
                RayPoint::new(src[0] as usize, src[1]),
                RayPoint::new(dst[0] as usize, dst[1]),
            ));
        }
        Element::make(rec.n, rec.t.clone(), map)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H_{}[t = {:?}", self.n, self.t)?;
        if !self.exceptions.is_empty() {
            write!(f, ", map:")?;
            for &(src, dst) in &self.exceptions {
                write!(f, " {src}->{dst}")?;
            }
        }
        write!(f, "]")
    }
}

/// The minimal-complexity element with a given translation vector: the
/// forced bottom points of the down-shifted rays are matched in order with
/// the uncovered bottom points of the up-shifted rays, so P = T.
pub fn minimal_translation(n: usize, t: Vec<i64>) -> Result<Element> {
    if n < 2 {
        return Err(Error::BadRayCount(n));
    }
    if t.len() != n {
        return Err(Error::BadTranslation { expected: n, got: t.len() });
    }
    let sum: i64 = t.iter().sum();
    if sum != 0 {
        return Err(Error::ZeroSumViolation(sum));
    }
    let mut sources = Vec::new();
    let mut targets = Vec::new();
    for (ray, &ti) in t.iter().enumerate() {
        if ti < 0 {
            sources.extend((1..=-ti).map(|pos| RayPoint::new(ray, pos)));
        } else if ti > 0 {
            targets.extend((1..=ti).map(|pos| RayPoint::new(ray, pos)));
        }
    }
    let exceptions: Vec<(RayPoint, RayPoint)> =
        sources.into_iter().zip(targets).collect();
    Ok(Element::from_canonical_parts(n, t, exceptions))
}

/// The generator g_ij: joins rays i and j into a line and shifts it by one,
/// so (i,1) goes to (j,1), ray i moves down and ray j moves up.
pub fn generator(n: usize, i: usize, j: usize) -> Result<Element> {
    if n < 2 {
        return Err(Error::BadRayCount(n));
    }
    if i >= n {
        return Err(Error::RayOutOfRange { ray: i, n });
    }
    if j >= n {
        return Err(Error::RayOutOfRange { ray: j, n });
    }
    if i == j {
        return Err(Error::SameRay(i));
    }
    let mut t = vec![0i64; n];
    t[i] = -1;
    t[j] = 1;
    let exceptions = vec![(RayPoint::new(i, 1), RayPoint::new(j, 1))];
    Ok(Element::from_canonical_parts(n, t, exceptions))
}

/// The finitary element swapping two points.
pub fn transposition(n: usize, a: RayPoint, b: RayPoint) -> Result<Element> {
    if a == b {
        return Err(Error::EqualPoints);
    }
    Element::make(n, vec![0; n], [(a, b), (b, a)])
}
