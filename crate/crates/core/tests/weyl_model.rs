//! Full-size group computations in the `W(E₇)` model.

use std::sync::OnceLock;

use dp2cert::groups::{
    cache, centralizer, companion_x3_x_1, conjugacy_class_size, element_order, embed_psl32, generate_group,
    psl32_generators, weyl_from_sp6, GF2Mat, GroupElement, SubgroupHandle, WeylElem, ENUMERATION_GUARD, SP6_ORDER,
};

fn sp6() -> &'static SubgroupHandle<GF2Mat> {
    static G: OnceLock<SubgroupHandle<GF2Mat>> = OnceLock::new();
    G.get_or_init(|| cache::enumerate_sp6().unwrap())
}

#[test]
fn sp6_order_and_form() {
    let g = sp6();
    assert_eq!(g.order(), Some(SP6_ORDER));
    assert_eq!(SP6_ORDER, (1 << 9) * 3 * 15 * 63);
    let elems = g.elements().unwrap();
    assert!(elems.iter().all(|m| m.is_symplectic()));
    // closure under the generators and inverses, spot-checked on a stride
    for m in elems.iter().step_by(997) {
        assert_eq!(g.contains(&m.inv()), Some(true));
        for s in g.generators() {
            assert_eq!(g.contains(&m.op(s)), Some(true));
        }
    }
}

#[test]
fn weyl_quantities() {
    let w = weyl_from_sp6(sp6()).unwrap();
    assert_eq!(w.order(), Some(2_903_040));
    assert_eq!(2_903_040, (1 << 10) * 81 * 5 * 7);

    let embedded: Vec<WeylElem> = psl32_generators()
        .into_iter()
        .map(|m| WeylElem::positive(embed_psl32(m).unwrap()))
        .collect();
    let c = centralizer(&embedded, &w).unwrap();
    assert_eq!(c.order(), Some(2));
    assert_eq!(
        c.elements().unwrap(),
        &[WeylElem::positive(GF2Mat::identity(6)), WeylElem::minus_identity()]
    );

    let g7 = WeylElem::positive(embed_psl32(companion_x3_x_1()).unwrap());
    assert_eq!(element_order(g7), 7);
    let c7 = centralizer(&[g7], &w).unwrap();
    assert_eq!(c7.order(), Some(14));
    let class = conjugacy_class_size(g7, &w).unwrap();
    assert_eq!(class, 207_360);
    assert_eq!(class * 14, 2_903_040);
    let twisted = WeylElem::new(true, g7.sp());
    assert_eq!(conjugacy_class_size(twisted, &w).unwrap(), 207_360);
    assert_eq!(centralizer(&[], &w).unwrap().order(), Some(2_903_040));
}

#[test]
fn embedded_psl_inside_sp6() {
    let embedded: Vec<GF2Mat> = psl32_generators().into_iter().map(|m| embed_psl32(m).unwrap()).collect();
    let h = generate_group(&embedded, ENUMERATION_GUARD).unwrap();
    assert!(h.elements().unwrap().iter().all(|m| sp6().contains(m) == Some(true)));
    assert_eq!(SP6_ORDER % h.order().unwrap(), 0);
}

#[test]
fn cache_cold_warm_and_stale() {
    let dir = tempfile::tempdir().unwrap();
    let (cold, s1) = cache::load_or_build(dir.path()).unwrap();
    assert_eq!(s1, cache::CacheStatus::Built);
    let (warm, s2) = cache::load_or_build(dir.path()).unwrap();
    assert_eq!(s2, cache::CacheStatus::Hit);
    assert_eq!(cold.elements(), warm.elements());
    assert_eq!(cold.elements(), sp6().elements());

    // corrupt one element: validation rejects it and the cache is rebuilt
    let path = cache::cache_file(dir.path());
    let mut bytes = std::fs::read(&path).unwrap();
    let n = bytes.len();
    bytes[n - 8] ^= 1;
    std::fs::write(&path, &bytes).unwrap();
    assert!(cache::read_cache(dir.path()).unwrap().is_none());
    let (_, s3) = cache::load_or_build(dir.path()).unwrap();
    assert_eq!(s3, cache::CacheStatus::Rebuilt);

    // a different fingerprint is stale
    let mut bytes = std::fs::read(&path).unwrap();
    bytes[20] ^= 0xff;
    std::fs::write(&path, &bytes).unwrap();
    assert!(cache::read_cache(dir.path()).unwrap().is_none());
    assert!(cache::clear_cache(dir.path()).unwrap());
    assert!(!path.exists());
}
