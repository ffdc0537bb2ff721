use houghton::element::{minimal_translation, transposition, Element, RayPoint};
use houghton::metric::reduce_translations;
use houghton::morphisms::up_member;
use houghton::words::random_element;

/// Seeded element of U_p in H_n: the finitary content of a random element
/// times a p-divisible translation, parity repaired with one deep
/// transposition when needed.
#[allow(dead_code)]
pub fn random_up_element(n: usize, p: i64, seed: u64) -> Element {
    let raw = random_element(n, 16, seed).unwrap();
    let t: Vec<i64> = raw.translations().iter().map(|&v| v * p).collect();
    let shift = minimal_translation(n, t).unwrap();
    let (_, finitary) = reduce_translations(&raw).unwrap();
    let mut e = finitary.compose(&shift).unwrap();
    if !up_member(&e, p).unwrap() {
        let window = 4
            + e.exceptions()
                .iter()
                .flat_map(|&(a, b)| [a.pos, b.pos])
                .max()
                .unwrap_or(0)
            + e.translations().iter().map(|v| v.abs()).max().unwrap();
        let fix = transposition(n, RayPoint::new(0, window), RayPoint::new(0, window + 1)).unwrap();
        e = fix.compose(&e).unwrap();
    }
    assert!(up_member(&e, p).unwrap());
    e
}
