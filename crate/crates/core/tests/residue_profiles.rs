//! Residue profiles against a direct evaluation of
//! `w² + x⁴ + y⁴ + z⁴ + 14(x²y² + x²z² + y²z²)` on machine integers.

use std::collections::BTreeMap;

use dp2cert::local_search::{residue_profile, TupleClass};
use dp2cert::surface::local_form;

fn f(w: u64, x: u64, y: u64, z: u64) -> u64 {
    w * w + x.pow(4) + y.pow(4) + z.pow(4) + 14 * (x * x * y * y + x * x * z * z + y * y * z * z)
}

fn oracle(k: u32, keep: impl Fn([u64; 4]) -> bool) -> BTreeMap<u64, u64> {
    let m = 1u64 << k;
    let mut out = BTreeMap::new();
    for w in 0..m {
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    if keep([w, x, y, z]) {
                        *out.entry(f(w, x, y, z) % m).or_insert(0) += 1;
                    }
                }
            }
        }
    }
    out
}

fn odd(p: [u64; 4]) -> [bool; 4] {
    p.map(|c| c & 1 == 1)
}

#[test]
fn named_classes_match_direct_evaluation() {
    let form = local_form();
    let cases: [(&str, fn([u64; 4]) -> bool); 4] = [
        ("all-odd", |p| odd(p).iter().all(|&o| o)),
        ("w-odd-one-odd", |p| {
            let o = odd(p);
            o[0] && o[1..].iter().filter(|&&b| b).count() == 1
        }),
        ("w-even-one-even", |p| {
            let o = odd(p);
            !o[0] && o[1..].iter().filter(|&&b| !b).count() == 1
        }),
        ("odd-count", |p| odd(p).iter().filter(|&&b| b).count() % 2 == 1),
    ];
    for k in [3, 4] {
        for (name, keep) in cases {
            let class = TupleClass::from_name(name).unwrap();
            let got = residue_profile(&form, k, &class).unwrap();
            let want = oracle(k, keep);
            assert_eq!(got, want, "{name} mod 2^{k}");
        }
    }
}

#[test]
fn all_odd_tuples_hit_a_single_class_mod_8() {
    // 1 + 3 + 14 * 3 = 46 = 6 mod 8 for every all-odd tuple.
    let want = oracle(3, |p| odd(p).iter().all(|&o| o));
    assert_eq!(want, BTreeMap::from([(6, 256)]));
}
