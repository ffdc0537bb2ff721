//! Word-metric machinery: the complexity lower bound, constructive word
//! synthesis within ceil(7 P log2 P), an exact breadth-first length oracle,
//! and the growth experiments.
//!
//! Complexity P is the sum over rays of the deepest position where an
//! element deviates from its eventual translation. Multiplying by one
//! generator changes P by at most one, so P bounds word length from below
//! for the g_ij letters; the synthesis pipeline (translation reduction,
//! pushing deviations into initial segments, merge-sorting the segments)
//! realizes the upper bound.

use std::collections::{HashMap, VecDeque};

use crate::element::{generator, minimal_translation, Element, RayPoint};
use crate::error::{Error, Result};
use crate::words::{GeneratingSet, Letter, Word};

/// Default cap on the number of distinct elements a search may hold.
pub const DEFAULT_ELEMENT_CAP: usize = 5_000_000;

/// The word-length lower bound: P itself (constant 1 for the g_ij letters).
pub fn lower_bound(e: &Element) -> i64 {
    e.complexity().total
}

/// P(e * g_ij) - P(e), always in {-1, 0, +1}.
pub fn generator_complexity_step(e: &Element, i: usize, j: usize) -> Result<i64> {
    let before = e.complexity().total;
    let after = e.compose(&generator(e.ray_count(), i, j)?)?.complexity().total;
    Ok(after - before)
}

/// The local rule for the complexity step: +1 exactly when the point just
/// above the deepest ray-i deviation is sent to (i,1), -1 exactly when ray
/// j's profile retracts (the point above its deepest deviation goes to
/// (j,1) while the deviation itself goes to (i,1)), 0 otherwise.
pub fn predicted_complexity_step(e: &Element, i: usize, j: usize) -> Result<i64> {
    let n = e.ray_count();
    if i >= n {
        return Err(Error::RayOutOfRange { ray: i, n });
    }
    if j >= n {
        return Err(Error::RayOutOfRange { ray: j, n });
    }
    if i == j {
        return Err(Error::SameRay(i));
    }
    let profile = e.complexity();
    let (pi, pj) = (profile.p[i], profile.p[j]);
    if e.apply(RayPoint::new(i, pi + 1))? == RayPoint::new(i, 1) {
        return Ok(1);
    }
    if pj >= 1
        && e.apply(RayPoint::new(j, pj + 1))? == RayPoint::new(j, 1)
        && e.apply(RayPoint::new(j, pj))? == RayPoint::new(i, 1)
    {
        return Ok(-1);
    }
    Ok(0)
}

/// Appends one g_ij per unit of translation amount (i the smallest ray
/// translated up, j the smallest translated down) until the element is
/// finitary. The word has length exactly T(e) and never raises P.
pub fn reduce_translations(e: &Element) -> Result<(Word, Element)> {
    let n = e.ray_count();
    if n < 3 {
        return Err(Error::NeedThreeRays(n));
    }
    let mut current = e.clone();
    let mut letters = Vec::new();
    loop {
        let up = current.translations().iter().position(|&v| v > 0);
        let down = current.translations().iter().position(|&v| v < 0);
        let (i, j) = match (up, down) {
            (Some(i), Some(j)) => (i, j),
            _ => break,
        };
        current = current.compose(&generator(n, i, j)?)?;
        letters.push(Letter::G { i, j });
    }
    Ok((Word::new(n, letters)?, current))
}

/// Tracks the finite blocks of active points at the bottom of each ray
/// while a generator word is being emitted. The front of each deque is the
/// bottom of the ray; every emitted letter performs the matching move, so
/// the simulation is exact for the tracked points.
struct RayStacks {
    n: usize,
    stacks: Vec<VecDeque<RayPoint>>,
    letters: Vec<Letter>,
}

impl RayStacks {
    fn new(n: usize) -> Self {
        RayStacks { n, stacks: vec![VecDeque::new(); n], letters: Vec::new() }
    }

    /// Emits g_from,to: the bottom card of `from` becomes the bottom card
    /// of `to`.
    fn shift(&mut self, from: usize, to: usize) -> RayPoint {
        let card = self.stacks[from].pop_front().expect("shift from nonempty block");
        self.stacks[to].push_front(card);
        self.letters.push(Letter::G { i: from, j: to });
        card
    }

    fn word(self) -> Result<Word> {
        Word::new(self.n, self.letters)
    }
}

/// Multiplies a finitary element into one that permutes an initial segment
/// of every ray, using at most 4 P(e) generators.
///
/// Phase 1 collects the deviation blocks of rays 1..n-1 at the bottom of
/// ray 0; phase 2 deals every collected point to the ray it started on,
/// with the ray-0 and ray-1 points mixed into ray 1; phases 3 and 4
/// separate that mixture through ray 2.
pub fn push_to_initial_segments(e: &Element) -> Result<(Word, Element)> {
    let n = e.ray_count();
    if n < 3 {
        return Err(Error::NeedThreeRays(n));
    }
    if !e.is_finitary() {
        return Err(Error::NotFinitary);
    }
    let profile = e.complexity();
    let p = &profile.p;

    let mut sim = RayStacks::new(n);
    for ray in 0..n {
        for pos in 1..=p[ray] {
            // The card occupying (ray, pos) is the point it came from.
            let origin = e.apply_inverse(RayPoint::new(ray, pos))?;
            sim.stacks[ray].push_back(origin);
        }
    }

    // Phase 1: pile every deviation block onto ray 0.
    for ray in 1..n {
        for _ in 0..p[ray] {
            sim.shift(ray, 0);
        }
    }
    // Phase 2: deal out; rays 0 and 1 share ray 1 for now.
    for _ in 0..profile.total {
        let home = sim.stacks[0].front().expect("active block on ray 0").ray;
        let target = if home >= 2 { home } else { 1 };
        sim.shift(0, target);
    }
    // Phase 3: split the ray-0/ray-1 mixture into ray 0 and ray 2.
    for _ in 0..(p[0] + p[1]) {
        let home = sim.stacks[1].front().expect("mixed block on ray 1").ray;
        let target = if home == 0 { 0 } else { 2 };
        sim.shift(1, target);
    }
    // Phase 4: bring the ray-1 points back from ray 2.
    for _ in 0..p[1] {
        let card = sim.shift(2, 1);
        debug_assert_eq!(card.ray, 1);
    }

    let word = sim.word()?;
    debug_assert!(word.len() as i64 <= 4 * profile.total);
    let result = e.compose(&word.evaluate()?)?;
    debug_assert!(result.is_finitary());
    debug_assert!(result.exceptions().iter().all(|(src, dst)| src.ray == dst.ray));
    Ok((word, result))
}

/// Sorts each ray's initial-segment permutation with a recursive merge
/// through the next two rays, in at most 2 |I| ceil(log2 |I|) letters per
/// segment, so that e * word = identity.
pub fn sort_initial_segments(e: &Element) -> Result<Word> {
    let n = e.ray_count();
    if n < 3 {
        return Err(Error::NeedThreeRays(n));
    }
    if !e.is_finitary() || e.exceptions().iter().any(|(src, dst)| src.ray != dst.ray) {
        return Err(Error::WrongShape);
    }
    let profile = e.complexity();

    let mut sim = RayStacks::new(n);
    for ray in 0..n {
        for pos in 1..=profile.p[ray] {
            // Tag each card with its home position on this ray.
            let home = e.apply_inverse(RayPoint::new(ray, pos))?;
            debug_assert_eq!(home.ray, ray);
            sim.stacks[ray].push_back(home);
        }
    }

    for ray in 0..n {
        let size = profile.p[ray] as usize;
        let before = sim.letters.len();
        sort_block(&mut sim, ray, size, true);
        let emitted = sim.letters.len() - before;
        let bound = 2 * size * size.next_power_of_two().trailing_zeros() as usize;
        debug_assert!(size <= 1 || emitted <= bound);
    }

    let word = sim.word()?;
    debug_assert!(e.compose(&word.evaluate()?)?.is_identity());
    Ok(word)
}

/// Sorts the bottom `size` cards of `ray` so that their home positions run
/// ascending (`ascending` = true) or descending from the bottom up. Splits
/// the block by value into the two next rays, recursively orders each half
/// so it pops back in merge order, and reassembles; blocks that already sit
/// in order cost nothing.
fn sort_block(sim: &mut RayStacks, ray: usize, size: usize, ascending: bool) {
    if size <= 1 {
        return;
    }
    let values: Vec<i64> = sim.stacks[ray].iter().take(size).map(|pt| pt.pos).collect();
    let in_order = values
        .windows(2)
        .all(|w| if ascending { w[0] < w[1] } else { w[0] > w[1] });
    if in_order {
        return;
    }
    let mut sorted = values.clone();
    sorted.sort_unstable();
    let threshold = sorted[size.div_ceil(2) - 1];

    let lower_ray = (ray + 1) % sim.n;
    let upper_ray = (ray + 2) % sim.n;
    let mut lower_count = 0;
    let mut upper_count = 0;
    for _ in 0..size {
        let value = sim.stacks[ray].front().expect("block card").pos;
        if value <= threshold {
            sim.shift(ray, lower_ray);
            lower_count += 1;
        } else {
            sim.shift(ray, upper_ray);
            upper_count += 1;
        }
    }
    // A buffer stack pops in reverse push order, so for an ascending
    // reassembly both halves must come back largest-first, which means the
    // halves themselves are ordered descending, and vice versa.
    sort_block(sim, lower_ray, lower_count, !ascending);
    sort_block(sim, upper_ray, upper_count, !ascending);
    if ascending {
        for _ in 0..upper_count {
            sim.shift(upper_ray, ray);
        }
        for _ in 0..lower_count {
            sim.shift(lower_ray, ray);
        }
    } else {
        for _ in 0..lower_count {
            sim.shift(lower_ray, ray);
        }
        for _ in 0..upper_count {
            sim.shift(upper_ray, ray);
        }
    }
}

/// A synthesized word together with its complexity accounting.
#[derive(Debug, Clone)]
pub struct SynthesisReport {
    pub word: Word,
    /// Complexity P of the synthesized element.
    pub complexity: i64,
    /// ceil(7 P log2 P) for P >= 2, P itself for P <= 1.
    pub bound: i64,
    /// Letters spent on translation reduction (at most T).
    pub rho_len: usize,
    /// Letters spent pushing deviations into initial segments (at most 4P).
    pub mu_len: usize,
    /// Letters spent merge-sorting the segments.
    pub sort_len: usize,
}

/// The synthesis length budget for an element of complexity `p`.
pub fn synthesis_bound(p: i64) -> i64 {
    if p <= 1 {
        p
    } else {
        (7.0 * p as f64 * (p as f64).log2()).ceil() as i64
    }
}

/// Produces a word evaluating to `e` whose length is at most
/// `synthesis_bound(P(e))`, by inverting the reduction pipeline
/// rho (translations), mu (initial segments), sort.
pub fn synthesize_word(e: &Element) -> Result<SynthesisReport> {
    let n = e.ray_count();
    if n < 3 {
        return Err(Error::NeedThreeRays(n));
    }
    let profile = e.complexity();
    let p_total = profile.total;
    if p_total == 0 {
        return Ok(SynthesisReport {
            word: Word::empty(n)?,
            complexity: 0,
            bound: 0,
            rho_len: 0,
            mu_len: 0,
            sort_len: 0,
        });
    }
    if p_total == 1 {
        // Complexity-one elements are exactly the generators.
        for i in 0..n {
            for j in 0..n {
                if i != j && &generator(n, i, j)? == e {
                    return Ok(SynthesisReport {
                        word: Word::new(n, vec![Letter::G { i, j }])?,
                        complexity: 1,
                        bound: 1,
                        rho_len: 0,
                        mu_len: 0,
                        sort_len: 0,
                    });
                }
            }
        }
        unreachable!("complexity-one element is not a generator: {e}");
    }
    let (rho, reduced) = reduce_translations(e)?;
    let (mu, segmented) = push_to_initial_segments(&reduced)?;
    let sorter = sort_initial_segments(&segmented)?;
    let trivializer = rho.concat(&mu)?.concat(&sorter)?;
    let word = trivializer.inverted();
    let bound = synthesis_bound(p_total);
    let report = SynthesisReport {
        word,
        complexity: p_total,
        bound,
        rho_len: rho.len(),
        mu_len: mu.len(),
        sort_len: sorter.len(),
    };
    assert!(report.rho_len as i64 <= profile.translation);
    assert!(profile.translation <= p_total);
    assert!(
        report.word.len() as i64 <= bound,
        "synthesized {} letters for P = {p_total}, bound {bound}",
        report.word.len()
    );
    debug_assert_eq!(&report.word.evaluate()?, e);
    Ok(report)
}

/// Exact word lengths for every element within `radius` of the identity.
#[derive(Debug, Clone)]
pub struct BallTable {
    n: usize,
    genset: GeneratingSet,
    radius: u32,
    lengths: HashMap<Element, u32>,
}

impl BallTable {
    pub fn ray_count(&self) -> usize {
        self.n
    }

    pub fn genset(&self) -> &GeneratingSet {
        &self.genset
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn length_of(&self, e: &Element) -> Option<u32> {
        self.lengths.get(e).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Element, u32)> {
        self.lengths.iter().map(|(e, &d)| (e, d))
    }

    /// (length, count) pairs for lengths 0..=radius.
    pub fn counts_by_length(&self) -> Vec<(u32, usize)> {
        let mut counts = vec![0usize; self.radius as usize + 1];
        for &d in self.lengths.values() {
            counts[d as usize] += 1;
        }
        counts.into_iter().enumerate().map(|(d, c)| (d as u32, c)).collect()
    }

    /// Cumulative ball sizes |B_0|, |B_1|, ..., |B_radius|.
    pub fn ball_sizes(&self) -> Vec<usize> {
        let mut sizes = Vec::new();
        let mut acc = 0;
        for (_, count) in self.counts_by_length() {
            acc += count;
            sizes.push(acc);
        }
        sizes
    }

    /// Entries sorted by (length, element) for reproducible dumps.
    pub fn sorted_entries(&self) -> Vec<(&Element, u32)> {
        let mut entries: Vec<(&Element, u32)> =
            self.lengths.iter().map(|(e, &d)| (e, d)).collect();
        entries.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(b.0)));
        entries
    }

    /// Recovers a geodesic word for an element of the ball by walking down
    /// the distance gradient.
    pub fn geodesic(&self, e: &Element) -> Result<Option<Word>> {
        let Some(mut dist) = self.length_of(e) else {
            return Ok(None);
        };
        let mut current = e.clone();
        let mut letters = Vec::new();
        while dist > 0 {
            let mut stepped = false;
            for &letter in self.genset.letters() {
                let next = current.compose(&letter.element(self.n)?)?;
                if self.length_of(&next) == Some(dist - 1) {
                    letters.push(letter);
                    current = next;
                    dist -= 1;
                    stepped = true;
                    break;
                }
            }
            assert!(stepped, "ball table lost the gradient at distance {dist}");
        }
        // The collected letters trivialize e, so e is their inverse.
        Ok(Some(Word::new(self.n, letters)?.inverted()))
    }
}

/// Breadth-first exact lengths out to `radius` with the default element cap.
pub fn bfs_ball(n: usize, genset: &GeneratingSet, radius: u32) -> Result<BallTable> {
    bfs_ball_capped(n, genset, radius, DEFAULT_ELEMENT_CAP)
}

/// Breadth-first exact lengths with an explicit element-count budget.
pub fn bfs_ball_capped(
    n: usize,
    genset: &GeneratingSet,
    radius: u32,
    cap: usize,
) -> Result<BallTable> {
    if genset.ray_count() != n {
        return Err(Error::RayCountMismatch(n, genset.ray_count()));
    }
    let gens = genset.elements()?;
    let mut lengths = HashMap::new();
    let identity = Element::identity(n)?;
    lengths.insert(identity.clone(), 0u32);
    let mut frontier = vec![identity];
    for dist in 1..=radius {
        let mut next = Vec::new();
        for e in &frontier {
            for g in &gens {
                let product = e.compose(g)?;
                if !lengths.contains_key(&product) {
                    if lengths.len() >= cap {
                        return Err(Error::Budget(cap));
                    }
                    lengths.insert(product.clone(), dist);
                    next.push(product);
                }
            }
        }
        frontier = next;
    }
    Ok(BallTable { n, genset: genset.clone(), radius, lengths })
}

/// Exact word length of one element via bidirectional breadth-first search.
///
/// Returns `Ok(None)` when the length exceeds `max_radius`. The search is
/// exact: it stops only once the completed radii on the two sides rule out
/// anything shorter than the best meeting point.
pub fn exact_length(
    target: &Element,
    genset: &GeneratingSet,
    max_radius: u32,
    cap: usize,
) -> Result<Option<u32>> {
    let n = genset.ray_count();
    if target.ray_count() != n {
        return Err(Error::RayCountMismatch(target.ray_count(), n));
    }
    if target.is_identity() {
        return Ok(Some(0));
    }
    let gens = genset.elements()?;
    let mut from_id: HashMap<Element, u32> = HashMap::new();
    let mut from_target: HashMap<Element, u32> = HashMap::new();
    from_id.insert(Element::identity(n)?, 0);
    from_target.insert(target.clone(), 0);
    let mut frontier_id = vec![Element::identity(n)?];
    let mut frontier_target = vec![target.clone()];
    let (mut radius_id, mut radius_target) = (0u32, 0u32);
    let mut best: Option<u32> = None;
    let mut total = 2usize;

    loop {
        if let Some(b) = best {
            if radius_id + radius_target >= b {
                return Ok(Some(b));
            }
        } else if radius_id + radius_target >= max_radius {
            return Ok(None);
        }
        if frontier_id.is_empty() && frontier_target.is_empty() {
            return Ok(None);
        }
        let expand_id = !frontier_id.is_empty()
            && (frontier_target.is_empty() || frontier_id.len() <= frontier_target.len());
        let (own, own_frontier, own_radius, other) = if expand_id {
            (&mut from_id, &mut frontier_id, &mut radius_id, &from_target)
        } else {
            (&mut from_target, &mut frontier_target, &mut radius_target, &from_id)
        };
        let dist = *own_radius + 1;
        let mut next = Vec::new();
        for e in own_frontier.iter() {
            for g in &gens {
                let product = e.compose(g)?;
                if !own.contains_key(&product) {
                    if total >= cap {
                        return Err(Error::Budget(cap));
                    }
                    total += 1;
                    own.insert(product.clone(), dist);
                    if let Some(&d) = other.get(&product) {
                        let candidate = dist + d;
                        best = Some(best.map_or(candidate, |b| b.min(candidate)));
                    }
                    next.push(product);
                }
            }
        }
        *own_frontier = next;
        *own_radius = dist;
    }
}

/// Outcome of the positive-word distinctness check for {g_01, g_02}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeSemigroupCheck {
    /// Distinct elements among positive words of length 1..=max_len.
    pub distinct: usize,
    /// 2^(max_len + 1) - 2, the number of such words.
    pub expected: usize,
}

impl FreeSemigroupCheck {
    pub fn is_free(&self) -> bool {
        self.distinct == self.expected
    }
}

/// Evaluates every positive word in g_01 and g_02 of length at most
/// `max_len` (in H_3) and counts distinct elements; the two generate a free
/// subsemigroup exactly when no two words collide.
pub fn free_semigroup_check(max_len: u32) -> Result<FreeSemigroupCheck> {
    let g01 = generator(3, 0, 1)?;
    let g02 = generator(3, 0, 2)?;
    let mut seen: HashMap<Element, ()> = HashMap::new();
    let mut level = vec![Element::identity(3)?];
    for _ in 1..=max_len {
        let mut next = Vec::with_capacity(level.len() * 2);
        for e in &level {
            for g in [&g01, &g02] {
                let product = e.compose(g)?;
                seen.insert(product.clone(), ());
                next.push(product);
            }
        }
        level = next;
    }
    let expected = 2usize.pow(max_len + 1) - 2;
    Ok(FreeSemigroupCheck { distinct: seen.len(), expected })
}

/// Constructs a family of elements of complexity exactly `k`: for every
/// translation vector of amount k, all k! matchings of the forced bottom
/// points onto the uncovered bottom points. Verifies complexity and
/// distinctness and returns the verified count.
pub fn complexity_class_witnesses(n: usize, k: i64) -> Result<usize> {
    if n < 3 {
        return Err(Error::NeedThreeRays(n));
    }
    if k < 1 {
        return Err(Error::BadDepth(k));
    }
    let family_scale = (n as i64) * k - 2;
    let mut factorial: i64 = 1;
    for m in 2..=family_scale {
        factorial = factorial.saturating_mul(m);
        if factorial > 1_000_000 {
            return Err(Error::TooLarge(format!("({family_scale})! exceeds 10^6")));
        }
    }

    let mut seen: HashMap<Element, ()> = HashMap::new();
    for t in zero_sum_vectors(n, k) {
        let base = minimal_translation(n, t.clone())?;
        let sources: Vec<RayPoint> = base.exceptions().iter().map(|&(s, _)| s).collect();
        let targets: Vec<RayPoint> = base.exceptions().iter().map(|&(_, d)| d).collect();
        for perm in permutations(targets.len()) {
            let map = sources
                .iter()
                .copied()
                .zip(perm.iter().map(|&idx| targets[idx]));
            let e = Element::make(n, t.clone(), map)?;
            assert_eq!(e.complexity().total, k, "witness family member has wrong complexity");
            seen.insert(e, ());
        }
    }
    Ok(seen.len())
}

/// All t in Z^n with sum 0 and sum |t_i| = 2k.
fn zero_sum_vectors(n: usize, k: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut partial = Vec::with_capacity(n);
    fn recurse(n: usize, remaining_abs: i64, sum: i64, partial: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if partial.len() == n {
            if remaining_abs == 0 && sum == 0 {
                out.push(partial.clone());
            }
            return;
        }
        for v in -remaining_abs..=remaining_abs {
            partial.push(v);
            recurse(n, remaining_abs - v.abs(), sum + v, partial, out);
            partial.pop();
        }
    }
    recurse(n, 2 * k, 0, &mut partial, &mut out);
    out
}

fn permutations(len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..len).collect();
    fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    heap(len, &mut items, &mut out);
    out
}
