//! Structural maps of H_n: ray inclusions, the stacked ray swaps, the
//! doubling embedding and point stabilizers, ray-permutation automorphisms,
//! the finite-index subgroups U_p (membership, coset index, ray splitting)
//! and quasi-isometry witnesses for commensuration data.

use serde::{Deserialize, Serialize};

use crate::element::{generator, transposition, Element, ElementRecord, RayPoint};
use crate::error::{Error, Result};
use crate::words::{GeneratingSet, GensetName};

/// Includes H_n into H_m (n <= m): same action on the old rays, identity on
/// the new ones.
pub fn include_rays(e: &Element, m: usize) -> Result<Element> {
    let n = e.ray_count();
    if m < n {
        return Err(Error::Shrinking { n, m });
    }
    let mut t = e.translations().to_vec();
    t.resize(m, 0);
    Element::make(m, t, e.exceptions().iter().copied())
}

/// The finitary element swapping (0,j) and (1,j) for every j <= depth; for
/// depth 1 in H_2 this is the generator t.
pub fn sigma_stack(rays: usize, depth: i64) -> Result<Element> {
    if rays < 2 {
        return Err(Error::BadRayCount(rays));
    }
    if depth < 1 {
        return Err(Error::BadDepth(depth));
    }
    let mut map = Vec::with_capacity(2 * depth as usize);
    for j in 1..=depth {
        map.push((RayPoint::new(0, j), RayPoint::new(1, j)));
        map.push((RayPoint::new(1, j), RayPoint::new(0, j)));
    }
    Element::make(rays, vec![0; rays], map)
}

/// The doubling embedding: each point (i,k) splits into the adjacent pair
/// (i,2k-1), (i,2k), which travels together to the pair over the image of
/// (i,k). Injective but not surjective.
pub fn cohopf_double(e: &Element) -> Element {
    let n = e.ray_count();
    let t = e.translations().iter().map(|&v| 2 * v).collect();
    let mut map = Vec::with_capacity(2 * e.exceptions().len());
    for &(src, dst) in e.exceptions() {
        map.push((
            RayPoint::new(src.ray, 2 * src.pos - 1),
            RayPoint::new(dst.ray, 2 * dst.pos - 1),
        ));
        map.push((
            RayPoint::new(src.ray, 2 * src.pos),
            RayPoint::new(dst.ray, 2 * dst.pos),
        ));
    }
    map.sort_unstable();
    Element::from_canonical_parts(n, t, map)
}

/// Recovers the preimage under the doubling embedding, if the element maps
/// every adjacent pair {(i,2k-1),(i,2k)} onto such a pair in order.
pub fn double_preimage(e: &Element) -> Option<Element> {
    let n = e.ray_count();
    if e.translations().iter().any(|&v| v % 2 != 0) {
        return None;
    }
    let t: Vec<i64> = e.translations().iter().map(|&v| v / 2).collect();
    let max_t = e.translations().iter().map(|v| v.abs()).max().unwrap_or(0);
    let max_pos = e
        .exceptions()
        .iter()
        .flat_map(|&(a, b)| [a.pos, b.pos])
        .max()
        .unwrap_or(0);
    let half_window = (max_pos + max_t) / 2 + 2;
    let mut map = Vec::new();
    for ray in 0..n {
        for k in 1..=half_window {
            let odd = e.apply(RayPoint::new(ray, 2 * k - 1)).ok()?;
            let even = e.apply(RayPoint::new(ray, 2 * k)).ok()?;
            if even.ray != odd.ray || odd.pos % 2 != 1 || even.pos != odd.pos + 1 {
                return None;
            }
            let image = RayPoint::new(odd.ray, (odd.pos + 1) / 2);
            if image.ray != ray || image.pos != k + t[ray] {
                map.push((RayPoint::new(ray, k), image));
            }
        }
    }
    Some(Element::make(n, t, map).expect("pair-coherent action pulls back to an element"))
}

/// Whether an element lies in the image of the doubling embedding.
pub fn is_in_double_image(e: &Element) -> bool {
    double_preimage(e).is_some()
}

/// Conjugates by the order-preserving bijection from the ray system onto
/// the ray system minus `fixed`, yielding an isomorphic copy of H_n inside
/// the stabilizer of that point.
pub fn stabilizer_embed(e: &Element, fixed: RayPoint) -> Result<Element> {
    let n = e.ray_count();
    if fixed.ray >= n {
        return Err(Error::RayOutOfRange { ray: fixed.ray, n });
    }
    if fixed.pos < 1 {
        return Err(Error::BadPoint { ray: fixed.ray, pos: fixed.pos });
    }
    let shift_up = |x: RayPoint| {
        if x.ray == fixed.ray && x.pos >= fixed.pos {
            RayPoint::new(x.ray, x.pos + 1)
        } else {
            x
        }
    };
    let shift_down = |y: RayPoint| {
        if y.ray == fixed.ray && y.pos > fixed.pos {
            RayPoint::new(y.ray, y.pos - 1)
        } else {
            y
        }
    };
    let max_t = e.translations().iter().map(|v| v.abs()).max().unwrap_or(0);
    let max_pos = e
        .exceptions()
        .iter()
        .flat_map(|&(a, b)| [a.pos, b.pos])
        .max()
        .unwrap_or(0);
    let window = max_pos + max_t + fixed.pos + 2;
    let mut map = Vec::new();
    for ray in 0..n {
        for pos in 1..=window {
            let y = RayPoint::new(ray, pos);
            let image = if y == fixed {
                y
            } else {
                shift_up(e.apply(shift_down(y))?)
            };
            if image.ray != ray || image.pos != pos + e.translations()[ray] {
                map.push((y, image));
            }
        }
    }
    Element::make(n, e.translations().to_vec(), map)
}

/// A permutation of the rays, acting on elements by relabeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayPermutation {
    perm: Vec<usize>,
}

impl RayPermutation {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &img in &perm {
            if img >= n {
                return Err(Error::RayOutOfRange { ray: img, n });
            }
            if seen[img] {
                return Err(Error::NotBijective);
            }
            seen[img] = true;
        }
        Ok(RayPermutation { perm })
    }

    pub fn identity(n: usize) -> Self {
        RayPermutation { perm: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn apply(&self, ray: usize) -> usize {
        self.perm[ray]
    }

    /// `self` then `other`.
    pub fn then(&self, other: &RayPermutation) -> Result<RayPermutation> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch { expected: self.len(), got: other.len() });
        }
        Ok(RayPermutation { perm: self.perm.iter().map(|&i| other.perm[i]).collect() })
    }
}

/// Relabels the rays of an element by a ray permutation; together with the
/// inner automorphisms these realize the full automorphism group.
pub fn conj_by_ray_perm(e: &Element, r: &RayPermutation) -> Result<Element> {
    let n = e.ray_count();
    if r.len() != n {
        return Err(Error::SizeMismatch { expected: n, got: r.len() });
    }
    let mut t = vec![0i64; n];
    for (ray, &v) in e.translations().iter().enumerate() {
        t[r.apply(ray)] = v;
    }
    let mut map: Vec<(RayPoint, RayPoint)> = e
        .exceptions()
        .iter()
        .map(|&(src, dst)| {
            (
                RayPoint::new(r.apply(src.ray), src.pos),
                RayPoint::new(r.apply(dst.ray), dst.pos),
            )
        })
        .collect();
    map.sort_unstable();
    Ok(Element::from_canonical_parts(n, t, map))
}

/// The canonical translation word matched to e's translation vector: the
/// ascending product of g_i^{c_i} with c_i the negated partial sums of the
/// t_i, evaluated as an element.
fn translation_word_element(n: usize, t: &[i64]) -> Result<Element> {
    let mut acc = Element::identity(n)?;
    let mut partial = 0i64;
    for i in 0..n - 1 {
        partial += t[i];
        let c = -partial;
        if c != 0 {
            acc = acc.compose(&generator(n, i, (i + 1) % n)?.pow(c)?)?;
        }
    }
    Ok(acc)
}

/// The finitary residue of `e`: e with its translations divided out by the
/// canonical translation word. Its parity decides U_p membership when a
/// parity condition applies.
fn finitary_residue(e: &Element) -> Result<Element> {
    let w = translation_word_element(e.ray_count(), e.translations())?;
    let residue = e.compose(&w.inverse())?;
    debug_assert!(residue.is_finitary());
    Ok(residue)
}

/// Membership in U_p, the subgroup generated by the finitary alternating
/// group and the p-th generator powers: all translations divisible by p,
/// and an even finitary residue whenever the parity condition applies
/// (p even for three or more rays; every p for two rays).
pub fn up_member(e: &Element, p: i64) -> Result<bool> {
    if p < 1 {
        return Err(Error::BadP(p));
    }
    if e.translations().iter().any(|&v| v % p != 0) {
        return Ok(false);
    }
    if parity_condition(e.ray_count(), p) {
        return Ok(finitary_residue(e)?.sign()? == 1);
    }
    Ok(true)
}

fn parity_condition(n: usize, p: i64) -> bool {
    n == 2 || p % 2 == 0
}

fn up_signature(e: &Element, p: i64) -> Result<(Vec<i64>, Option<i32>)> {
    let t_mod: Vec<i64> = e
        .abelianization()
        .iter()
        .map(|&v| v.rem_euclid(p))
        .collect();
    let parity = if parity_condition(e.ray_count(), p) {
        Some(finitary_residue(e)?.sign()?)
    } else {
        None
    };
    Ok((t_mod, parity))
}

/// Computes the index of U_p in H_n by enumerating cosets: generators act
/// on representatives, cosets are keyed by the signature (translations mod
/// p, residue parity when it applies), and every key collision is verified
/// against `up_member` so the enumeration cannot silently merge or split
/// cosets.
pub fn up_index(n: usize, p: i64) -> Result<usize> {
    if n < 2 {
        return Err(Error::BadRayCount(n));
    }
    if p < 1 {
        return Err(Error::BadP(p));
    }
    let bound = (p as u128).saturating_pow(n as u32 - 1).saturating_mul(2);
    if bound > 1_000_000 {
        return Err(Error::TooLarge(format!("index bound {bound} exceeds 10^6")));
    }
    let genset = if n == 2 {
        GeneratingSet::new(GensetName::H2, 2)?
    } else {
        GeneratingSet::new(GensetName::Gij, n)?
    };
    let gens = genset.elements()?;

    let mut reps: Vec<Element> = vec![Element::identity(n)?];
    let mut keys: std::collections::HashMap<(Vec<i64>, Option<i32>), usize> =
        std::collections::HashMap::new();
    keys.insert(up_signature(&reps[0], p)?, 0);
    let mut queue = vec![0usize];
    while let Some(idx) = queue.pop() {
        let rep = reps[idx].clone();
        for g in &gens {
            let moved = rep.compose(g)?;
            let key = up_signature(&moved, p)?;
            match keys.get(&key) {
                Some(&existing) => {
                    let diff = reps[existing].inverse().compose(&moved)?;
                    assert!(
                        up_member(&diff, p)?,
                        "coset signature is not a complete invariant for n={n}, p={p}"
                    );
                }
                None => {
                    keys.insert(key, reps.len());
                    queue.push(reps.len());
                    reps.push(moved);
                }
            }
        }
    }
    // Distinct signatures must be distinct cosets.
    for a in 0..reps.len() {
        for b in (a + 1)..reps.len() {
            let diff = reps[a].inverse().compose(&reps[b])?;
            assert!(
                !up_member(&diff, p)?,
                "distinct coset signatures collapsed for n={n}, p={p}"
            );
        }
    }
    Ok(reps.len())
}

/// Order-preserving split of each ray into p interleaved rays: position k
/// of ray i becomes position ceil(k/p) of split ray i*p + (k-1 mod p).
fn split_point(x: RayPoint, p: i64) -> RayPoint {
    RayPoint::new(
        x.ray * p as usize + ((x.pos - 1) % p) as usize,
        (x.pos - 1) / p + 1,
    )
}

fn unsplit_point(y: RayPoint, p: i64) -> RayPoint {
    let original_ray = y.ray / p as usize;
    let class = (y.ray % p as usize) as i64;
    RayPoint::new(original_ray, (y.pos - 1) * p + class + 1)
}

/// Realizes a member of U_p as an element of H_{np} via the ray split. The
/// image has equal translations on the p rays split from one original ray.
pub fn split_rays(e: &Element, p: i64) -> Result<Element> {
    if p < 1 {
        return Err(Error::BadP(p));
    }
    if !up_member(e, p)? {
        return Err(Error::NotInUp(p));
    }
    let n = e.ray_count();
    let np = n * p as usize;
    let mut t = vec![0i64; np];
    for ray in 0..n {
        for class in 0..p as usize {
            t[ray * p as usize + class] = e.translations()[ray] / p;
        }
    }
    let mut map: Vec<(RayPoint, RayPoint)> = e
        .exceptions()
        .iter()
        .map(|&(src, dst)| (split_point(src, p), split_point(dst, p)))
        .collect();
    map.sort_unstable();
    Ok(Element::from_canonical_parts(np, t, map))
}

/// A concrete commensuration datum: an element of H_{np} together with a
/// block permutation of the np split rays that maps the p-ray class of each
/// original ray onto a class. Acts on the original ray system by splitting,
/// applying `base` then `blocks`, and reassembling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NpElement {
    p: i64,
    base: Element,
    blocks: Vec<usize>,
}

/// Serializable form of a commensuration datum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NpElementRecord {
    pub p: i64,
    pub base: ElementRecord,
    pub blocks: Vec<usize>,
}

impl NpElement {
    pub fn new(p: i64, base: Element, blocks: Vec<usize>) -> Result<Self> {
        if p < 2 || p % 2 != 0 {
            return Err(Error::BadNpElement(format!("p must be even and >= 2, got {p}")));
        }
        let np = base.ray_count();
        if np % (p as usize) != 0 || np / (p as usize) < 2 {
            return Err(Error::BadNpElement(format!(
                "base has {np} rays, not p = {p} times a ray count >= 2"
            )));
        }
        if blocks.len() != np {
            return Err(Error::BadNpElement(format!(
                "block permutation has {} entries, expected {np}",
                blocks.len()
            )));
        }
        let mut seen = vec![false; np];
        for &img in &blocks {
            if img >= np || seen[img] {
                return Err(Error::BadNpElement("blocks is not a permutation".into()));
            }
            seen[img] = true;
        }
        let n = np / p as usize;
        let chunk = p as usize;
        for class in 0..n {
            let target = blocks[class * chunk] / chunk;
            for offset in 0..chunk {
                if blocks[class * chunk + offset] / chunk != target {
                    return Err(Error::BadNpElement(format!(
                        "blocks breaks the ray classes apart at class {class}"
                    )));
                }
            }
        }
        Ok(NpElement { p, base, blocks })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn base(&self) -> &Element {
        &self.base
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn original_ray_count(&self) -> usize {
        self.base.ray_count() / self.p as usize
    }

    /// Which original ray the class of original ray `i` is sent to.
    pub fn class_image(&self, ray: usize) -> usize {
        self.blocks[ray * self.p as usize] / self.p as usize
    }

    pub fn is_identity_datum(&self) -> bool {
        self.base.is_identity() && self.blocks.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// The action on the original ray system.
    pub fn apply(&self, x: RayPoint) -> Result<RayPoint> {
        let split = split_point(x, self.p);
        let moved = self.base.apply(split)?;
        let blocked = RayPoint::new(self.blocks[moved.ray], moved.pos);
        Ok(unsplit_point(blocked, self.p))
    }

    pub fn to_record(&self) -> NpElementRecord {
        NpElementRecord {
            p: self.p,
            base: self.base.to_record(),
            blocks: self.blocks.clone(),
        }
    }

    pub fn from_record(rec: &NpElementRecord) -> Result<NpElement> {
        NpElement::new(rec.p, Element::from_record(&rec.base)?, rec.blocks.clone())
    }
}

/// The natural commensuration datum of an ordinary element: blocks rotate
/// each ray's classes by its translation, base carries the leftover
/// per-class shifts and the original deviations.
pub fn commensuration_of(e: &Element, p: i64) -> Result<NpElement> {
    if p < 2 || p % 2 != 0 {
        return Err(Error::BadNpElement(format!("p must be even and >= 2, got {p}")));
    }
    let n = e.ray_count();
    let np = n * p as usize;
    let mut blocks = vec![0usize; np];
    let mut t = vec![0i64; np];
    for ray in 0..n {
        let ti = e.translations()[ray];
        for class in 0..p {
            let rotated = (class + ti).rem_euclid(p);
            blocks[ray * p as usize + class as usize] =
                ray * p as usize + rotated as usize;
            t[ray * p as usize + class as usize] = (class + ti).div_euclid(p);
        }
    }
    let inverse_blocks = {
        let mut inv = vec![0usize; np];
        for (i, &v) in blocks.iter().enumerate() {
            inv[v] = i;
        }
        inv
    };
    let mut map = Vec::with_capacity(e.exceptions().len());
    for &(src, dst) in e.exceptions() {
        let split_src = split_point(src, p);
        let split_dst = split_point(dst, p);
        map.push((
            split_src,
            RayPoint::new(inverse_blocks[split_dst.ray], split_dst.pos),
        ));
    }
    map.sort_unstable();
    let base = Element::make(np, t, map)?;
    NpElement::new(p, base, blocks)
}

/// Block permutation swapping the classes of rays 0 and 1 with identity
/// base: the datum that eventually interchanges two rays.
pub fn np_ray_swap_archetype(n: usize, p: i64) -> Result<NpElement> {
    if n < 2 {
        return Err(Error::BadRayCount(n));
    }
    let np = n * p as usize;
    let mut blocks: Vec<usize> = (0..np).collect();
    for class in 0..p as usize {
        blocks.swap(class, p as usize + class);
    }
    NpElement::new(p, Element::identity(np)?, blocks)
}

/// Datum that eventually translates ray 0 up by one (compensating on ray
/// 1), realized as the commensuration of the generator g_10.
pub fn np_translation_archetype(n: usize, p: i64) -> Result<NpElement> {
    commensuration_of(&generator(n, 1, 0)?, p)
}

/// Finitary datum: identity blocks with a single transposition in the
/// split system (it swaps (0,1) and (0,2) of the original rays for p = 2).
pub fn np_finitary_archetype(n: usize, p: i64) -> Result<NpElement> {
    if n < 2 {
        return Err(Error::BadRayCount(n));
    }
    let np = n * p as usize;
    let base = transposition(np, RayPoint::new(0, 1), RayPoint::new(1, 1))?;
    NpElement::new(p, base, (0..np).collect())
}

/// Conjugate of a finitary element by the commensuration's point action.
fn conjugate_finitary(phi: &NpElement, sigma: &Element) -> Result<Element> {
    let n = phi.original_ray_count();
    let mut map = Vec::with_capacity(sigma.exceptions().len());
    for &(src, dst) in sigma.exceptions() {
        map.push((phi.apply(src)?, phi.apply(dst)?));
    }
    Element::make(n, vec![0; n], map)
}

/// Produces a witness that a non-trivial commensuration datum moves some
/// element far in the word metric: a transposition sigma with
/// P(sigma^-1 * phi^-1 sigma phi) >= distance, certifying that phi is at
/// distance at least `distance` from the identity quasi-isometry.
///
/// Case analysis: a ray that phi eventually displaces carries sigma
/// directly (for a pure ray permutation sigma sits on the image ray); a
/// finitary phi is pushed off its own support by conjugating with deep
/// disjoint transpositions.
pub fn qi_witness(phi: &NpElement, distance: i64) -> Result<(Element, i64)> {
    if distance < 1 {
        return Err(Error::BadDepth(distance));
    }
    if phi.is_identity_datum() {
        return Err(Error::TrivialPhi);
    }
    let n = phi.original_ray_count();
    let p = phi.p() as usize;

    let translated = (0..n).find(|&ray| {
        (0..p).any(|class| phi.base().translations()[ray * p + class] != 0)
    });
    let permuted = (0..n).find(|&ray| phi.class_image(ray) != ray);
    let rotated = (0..n).find(|&ray| {
        (0..p).any(|class| phi.blocks()[ray * p + class] != ray * p + class)
    });

    let witness_ray = match (translated, permuted, rotated) {
        (Some(ray), _, _) => Some(ray),
        (None, Some(ray), _) => Some(phi.class_image(ray)),
        (None, None, Some(ray)) => Some(ray),
        (None, None, None) => None,
    };

    if let Some(ray) = witness_ray {
        let base_window = phi
            .base()
            .exceptions()
            .iter()
            .flat_map(|&(a, b)| [a.pos, b.pos])
            .max()
            .unwrap_or(0);
        let margin = 2 * p as i64 + base_window * p as i64 + 4;
        for start in distance..=distance + margin {
            let sigma = transposition(
                n,
                RayPoint::new(ray, start),
                RayPoint::new(ray, start + 1),
            )?;
            let conjugated = conjugate_finitary(phi, &sigma)?;
            if conjugated == sigma {
                continue;
            }
            let displacement = sigma.inverse().compose(&conjugated)?;
            let certificate = displacement.complexity().total;
            if certificate >= distance {
                return Ok((sigma, certificate));
            }
        }
        unreachable!("an eventually displaced ray admits a moved transposition");
    }

    // Finitary datum: move its support depth `distance` further out.
    let support: Vec<RayPoint> = phi
        .base()
        .exceptions()
        .iter()
        .map(|&(src, _)| unsplit_point(src, phi.p()))
        .collect();
    let deepest = support.iter().map(|pt| pt.pos).max().expect("non-trivial datum");
    let shift = distance + deepest;
    let mut map = Vec::with_capacity(2 * support.len());
    for &pt in &support {
        let far = RayPoint::new(pt.ray, pt.pos + shift);
        map.push((pt, far));
        map.push((far, pt));
    }
    let sigma = Element::make(n, vec![0; n], map)?;
    let conjugated = conjugate_finitary(phi, &sigma)?;
    let displacement = sigma.inverse().compose(&conjugated)?;
    let certificate = displacement.complexity().total;
    assert!(certificate >= distance, "disjoint deep support certifies the distance");
    Ok((sigma, certificate))
}
