//! Acceptance suite: one test per criterion, each printing a PASS line.
//! Run with `cargo test -p houghton --test acceptance -- --nocapture`.

mod common;

use houghton::element::{generator, transposition, Element, RayPoint};
use houghton::metric::{
    bfs_ball, complexity_class_witnesses, exact_length, free_semigroup_check, lower_bound,
    predicted_complexity_step, synthesize_word, synthesis_bound, DEFAULT_ELEMENT_CAP,
};
use houghton::morphisms::{
    cohopf_double, conj_by_ray_perm, double_preimage, is_in_double_image,
    np_finitary_archetype, np_ray_swap_archetype, np_translation_archetype, qi_witness,
    sigma_stack, split_rays, stabilizer_embed, up_index, RayPermutation,
};
use houghton::words::{random_element, GeneratingSet, GensetName, Word};

use common::random_up_element;

fn pass(number: u32, name: &str) {
    println!("criterion {number:2} ({name}): PASS");
}

/// The four defining cases of g_ij, pointwise for pos <= 100, all ordered
/// pairs, n in {2,3,4}.
#[test]
fn criterion_01_generator_semantics() {
    for n in [2usize, 3, 4] {
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let g = generator(n, i, j).unwrap();
                for ray in 0..n {
                    for pos in 1..=100 {
                        let x = RayPoint::new(ray, pos);
                        let expected = if ray == i && pos > 1 {
                            RayPoint::new(i, pos - 1)
                        } else if ray == i {
                            RayPoint::new(j, 1)
                        } else if ray == j {
                            RayPoint::new(j, pos + 1)
                        } else {
                            x
                        };
                        assert_eq!(g.apply(x).unwrap(), expected, "g({i},{j}) at {x} in H_{n}");
                    }
                }
            }
        }
    }
    pass(1, "generator semantics");
}

/// [g_0, g_1] in H_3 is the transposition of (1,1) and (2,1).
#[test]
fn criterion_02_commutator() {
    let g0 = generator(3, 0, 1).unwrap();
    let g1 = generator(3, 1, 2).unwrap();
    let comm = Element::product(3, [&g0.inverse(), &g1.inverse(), &g0, &g1]).unwrap();
    let expected = transposition(3, RayPoint::new(1, 1), RayPoint::new(2, 1)).unwrap();
    assert_eq!(comm, expected);
    pass(2, "commutator transposition");
}

/// P is a lower bound for exact length on the radius-7 ball, and the
/// complexity step rule holds exhaustively on the radius-6 ball.
#[test]
fn criterion_03_metric_lower_bound() {
    let gij = GeneratingSet::new(GensetName::Gij, 3).unwrap();
    let ball7 = bfs_ball(3, &gij, 7).unwrap();
    for (e, d) in ball7.iter() {
        assert!(lower_bound(e) <= d as i64, "P exceeds length for {e}");
    }
    let ball6 = bfs_ball(3, &gij, 6).unwrap();
    for (e, _) in ball6.iter() {
        let before = e.complexity().total;
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let after = e
                    .compose(&generator(3, i, j).unwrap())
                    .unwrap()
                    .complexity()
                    .total;
                let delta = after - before;
                assert!(delta.abs() <= 1, "|dP| > 1 at {e} * g({i},{j})");
                assert_eq!(
                    delta,
                    predicted_complexity_step(e, i, j).unwrap(),
                    "complexity step rule broken at {e} * g({i},{j})"
                );
            }
        }
    }
    pass(3, "metric lower bound and step rule");
}

/// 1000 seeded random elements with 2 <= P <= 300 synthesize back to
/// themselves within ceil(7 P log2 P) letters.
#[test]
fn criterion_04_metric_upper_bound() {
    let mut checked = 0u32;
    let mut seed = 0u64;
    while checked < 1000 {
        let budget = 2 + (seed as i64 * 37) % 299;
        let e = random_element(3, budget, seed).unwrap();
        seed += 1;
        let p = e.complexity().total;
        if !(2..=300).contains(&p) {
            continue;
        }
        let report = synthesize_word(&e).unwrap();
        assert_eq!(report.word.evaluate().unwrap(), e, "seed {seed}");
        assert!(
            report.word.len() as i64 <= synthesis_bound(p),
            "seed {seed}: {} letters for P = {p}",
            report.word.len()
        );
        checked += 1;
    }
    pass(4, "synthesis upper bound on 1000 elements");
}

/// P <= exact length <= synthesized length for every radius-5 element.
#[test]
fn criterion_05_oracle_sandwich() {
    let gij = GeneratingSet::new(GensetName::Gij, 3).unwrap();
    let ball = bfs_ball(3, &gij, 5).unwrap();
    for (e, d) in ball.iter() {
        let p = lower_bound(e);
        let report = synthesize_word(e).unwrap();
        assert!(p <= d as i64, "lower bound fails for {e}");
        assert!(d as usize <= report.word.len(), "synthesis beats geodesic for {e}");
        assert_eq!(report.word.evaluate().unwrap(), *e);
    }
    pass(5, "oracle sandwich on radius 5");
}

/// sigma_k = g_02^k g_12^k g_02^-k g_12^-k in H_3 for k = 1..100.
#[test]
fn criterion_06_sigma_word_identity() {
    for k in 1..=100 {
        let word = Word::parse(3, &format!("g(0,2)^{k} g(1,2)^{k} g(2,0)^{k} g(2,1)^{k}")).unwrap();
        assert_eq!(word.evaluate().unwrap(), sigma_stack(3, k).unwrap(), "depth {k}");
    }
    pass(6, "stacked swap word identity");
}

/// The distortion table: linear lengths upstairs, superlinear downstairs.
#[test]
fn criterion_07_distortion_table() {
    // In H_3 the word identity pins |sigma_k| <= 4k for every k <= 100.
    for k in 1..=100 {
        let word = Word::parse(3, &format!("g(0,2)^{k} g(1,2)^{k} g(2,0)^{k} g(2,1)^{k}")).unwrap();
        assert_eq!(word.len() as i64, 4 * k);
        assert_eq!(word.evaluate().unwrap(), sigma_stack(3, k).unwrap());
    }
    // Exact H_2 lengths for k = 1..3 via the breadth-first oracle.
    let h2 = GeneratingSet::new(GensetName::H2, 2).unwrap();
    let mut lengths = Vec::new();
    for k in 1..=3 {
        let sigma = sigma_stack(2, k).unwrap();
        let len = exact_length(&sigma, &h2, 32, DEFAULT_ELEMENT_CAP)
            .unwrap()
            .expect("sigma_k is within the radius cap");
        lengths.push(len as f64);
    }
    assert_eq!(lengths[0], 1.0, "sigma_1 is the generator t");
    let ratios: Vec<f64> = lengths.iter().zip(1..).map(|(&l, k)| l / k as f64).collect();
    assert!(
        ratios.windows(2).all(|w| w[0] < w[1]),
        "length ratios not strictly increasing: {ratios:?}"
    );
    pass(7, "distortion table");
}

/// The subgroup indices |H_n : U_p|.
#[test]
fn criterion_08_up_indices() {
    assert_eq!(up_index(3, 2).unwrap(), 8);
    assert_eq!(up_index(3, 3).unwrap(), 9);
    assert_eq!(up_index(3, 4).unwrap(), 32);
    assert_eq!(up_index(4, 2).unwrap(), 16);
    pass(8, "U_p indices");
}

/// Ray splitting is a homomorphism on 200 seeded pairs from U_2 in H_3,
/// with equal translations on equivalent rays.
#[test]
fn criterion_09_ray_splitting() {
    for seed in 0..200 {
        let a = random_up_element(3, 2, seed);
        let b = random_up_element(3, 2, seed + 20_000);
        let lhs = split_rays(&a.compose(&b).unwrap(), 2).unwrap();
        let split_a = split_rays(&a, 2).unwrap();
        let split_b = split_rays(&b, 2).unwrap();
        assert_eq!(lhs, split_a.compose(&split_b).unwrap(), "seed {seed}");
        assert_eq!(split_a.ray_count(), 6);
        for ray in 0..3 {
            assert_eq!(
                split_a.translations()[2 * ray],
                split_a.translations()[2 * ray + 1],
                "unequal translations on equivalent rays, seed {seed}"
            );
        }
        if !a.is_identity() {
            assert!(!split_a.is_identity(), "seed {seed}");
        }
    }
    pass(9, "ray splitting into H_6");
}

/// The doubling map is an injective homomorphism with recoverable
/// preimages, and the adjacent-pair witness is not in its image.
#[test]
fn criterion_10_cohopf() {
    for seed in 0..200 {
        let a = random_element(3, 16, seed).unwrap();
        let b = random_element(3, 16, seed + 30_000).unwrap();
        assert_eq!(
            cohopf_double(&a.compose(&b).unwrap()),
            cohopf_double(&a).compose(&cohopf_double(&b)).unwrap(),
            "seed {seed}"
        );
        let image = cohopf_double(&a);
        assert_eq!(double_preimage(&image).as_ref(), Some(&a), "seed {seed}");
        if !a.is_identity() {
            assert!(!image.is_identity(), "seed {seed}");
        }
    }
    let witness = transposition(3, RayPoint::new(0, 2), RayPoint::new(0, 3)).unwrap();
    assert!(!is_in_double_image(&witness));
    pass(10, "doubling embedding");
}

/// The stabilizer embedding fixes its point and is a homomorphism.
#[test]
fn criterion_11_stabilizer_embedding() {
    let q = RayPoint::new(0, 2);
    for seed in 0..200 {
        let a = random_element(3, 14, seed).unwrap();
        let b = random_element(3, 14, seed + 40_000).unwrap();
        let ea = stabilizer_embed(&a, q).unwrap();
        assert_eq!(ea.apply(q).unwrap(), q, "seed {seed}");
        assert_eq!(
            stabilizer_embed(&a.compose(&b).unwrap(), q).unwrap(),
            ea.compose(&stabilizer_embed(&b, q).unwrap()).unwrap(),
            "seed {seed}"
        );
    }
    pass(11, "point stabilizer embedding");
}

/// 2046 distinct positive words of length <= 10 in {g_01, g_02}, and the
/// 2^r ball floor that follows.
#[test]
fn criterion_12_free_subsemigroup() {
    let check = free_semigroup_check(10).unwrap();
    assert_eq!(check.distinct, 2046);
    assert!(check.is_free());
    let gij = GeneratingSet::new(GensetName::Gij, 3).unwrap();
    let ball = bfs_ball(3, &gij, 7).unwrap();
    let sizes = ball.ball_sizes();
    for (r, &size) in sizes.iter().enumerate() {
        assert!(size >= 1 << r, "|B_{r}| = {size} below 2^{r}");
    }
    pass(12, "free subsemigroup and exponential floor");
}

/// At least (nk-2)! = 24 distinct elements of complexity exactly 2 for
/// n = 3, k = 2 (and at least one of complexity 1).
#[test]
fn criterion_13_complexity_class_count() {
    assert!(complexity_class_witnesses(3, 1).unwrap() >= 1);
    let count = complexity_class_witnesses(3, 2).unwrap();
    assert!(count >= 24, "only {count} witnesses of complexity 2");
    pass(13, "complexity class witnesses");
}

/// Quasi-isometry witnesses for the three archetypes at distance 50.
#[test]
fn criterion_14_qi_witnesses() {
    for (name, phi) in [
        ("translation", np_translation_archetype(3, 2).unwrap()),
        ("ray swap", np_ray_swap_archetype(3, 2).unwrap()),
        ("finitary", np_finitary_archetype(3, 2).unwrap()),
    ] {
        let (sigma, certificate) = qi_witness(&phi, 50).unwrap();
        assert!(certificate >= 50, "{name}: certificate {certificate} < 50");
        assert!(!sigma.is_identity(), "{name}: trivial witness");
    }
    pass(14, "quasi-isometry witnesses");
}

/// Ray relabeling is an automorphism and composes semidirectly.
#[test]
fn criterion_15_aut_action() {
    let r = RayPermutation::new(vec![1, 2, 0]).unwrap();
    let s = RayPermutation::new(vec![0, 2, 1]).unwrap();
    for seed in 0..200 {
        let a = random_element(3, 14, seed).unwrap();
        let b = random_element(3, 14, seed + 50_000).unwrap();
        assert_eq!(
            conj_by_ray_perm(&a.compose(&b).unwrap(), &r).unwrap(),
            conj_by_ray_perm(&a, &r)
                .unwrap()
                .compose(&conj_by_ray_perm(&b, &r).unwrap())
                .unwrap(),
            "seed {seed}"
        );
        assert_eq!(
            conj_by_ray_perm(&conj_by_ray_perm(&a, &r).unwrap(), &s).unwrap(),
            conj_by_ray_perm(&a, &r.then(&s).unwrap()).unwrap(),
            "seed {seed}"
        );
    }
    pass(15, "automorphism action");
}
