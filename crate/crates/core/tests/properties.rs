//! Invariants of Tate hypercohomology under shifts, change of presentation,
//! quasi-isomorphism and periodicity.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use hypertate::gcomplexes::{concentrate, shift, GComplex};
use hypertate::gmodules::{trivial_cyclic, GModule};
use hypertate::groups::{make_cyclic, symmetric_group, FiniteGroup};
use hypertate::linalg::IntMatrix;
use hypertate::resolutions::{build_complete_resolution, Engine, DEFAULT_BAR_CAP};
use hypertate::tate::{window_for, Cohomology};

fn tate(c: &GComplex, range: (i64, i64), engine: Engine) -> Vec<Vec<BigInt>> {
    let g = c.group().clone();
    let (lo, hi) = c.effective_support().unwrap_or((0, 0));
    let n = window_for((lo - range.1 - 1, hi - range.0 + 1));
    let x = build_complete_resolution(&g, n, engine, DEFAULT_BAR_CAP).unwrap();
    let t = Cohomology::new(&x, c).unwrap().groups(range).unwrap();
    assert!(t.d_squared_zero());
    (range.0..=range.1).map(|q| t.invariants(q)).collect()
}

fn cyclic(n: usize) -> Arc<FiniteGroup> {
    Arc::new(make_cyclic(n))
}

/// `(Z/n)^k` for `Z/2`: the generator swaps `e0, e1` up to sign or acts by signs.
fn signed_involution(n: i64, k: usize, swap: bool, signs: &[i64]) -> GModule {
    let g = cyclic(2);
    let mut a = IntMatrix::zeros(k, k);
    for i in 0..k {
        a.set(i, i, BigInt::from(signs[i]));
    }
    if swap && k >= 2 {
        a.set(0, 0, BigInt::from(0));
        a.set(1, 1, BigInt::from(0));
        a.set(0, 1, BigInt::from(signs[0]));
        a.set(1, 0, BigInt::from(signs[0]));
    }
    GModule::new(g, k, IntMatrix::scalar(k, n), vec![IntMatrix::identity(k), a]).unwrap()
}

fn elements(n: i64, k: usize) -> Vec<Vec<i64>> {
    (0..(n as usize).pow(k as u32))
        .map(|mut c| {
            (0..k)
                .map(|_| {
                    let d = (c % n as usize) as i64;
                    c /= n as usize;
                    d
                })
                .collect()
        })
        .collect()
}

fn apply(m: &GModule, n: i64, v: &[i64]) -> Vec<i64> {
    let a = m.action(1);
    (0..v.len())
        .map(|i| (0..v.len()).map(|j| i64::try_from(a.get(i, j)).unwrap() * v[j]).sum::<i64>().rem_euclid(n))
        .collect()
}

fn order(inv: &[BigInt]) -> BigInt {
    inv.iter().product()
}

fn module_strategy() -> impl Strategy<Value = (i64, usize, bool, Vec<i64>)> {
    (2i64..=6, 1usize..=3, any::<bool>(), proptest::collection::vec(prop_oneof![Just(1i64), Just(-1i64)], 3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn trivial_cyclic_coefficients(n in 1usize..=6, m in 0u64..=8, periodic in any::<bool>()) {
        let g = cyclic(n);
        let c = concentrate(&trivial_cyclic(&g, m), 0);
        let engine = if periodic { Engine::Periodic } else { Engine::Computed };
        let got = tate(&c, (-2, 3), engine);
        for (i, inv) in got.iter().enumerate() {
            let q = i as i64 - 2;
            let expected = if m == 0 {
                if q % 2 == 0 { n as u64 } else { 1 }
            } else {
                (n as u64).gcd(&m)
            };
            prop_assert_eq!(order(inv), BigInt::from(expected), "q = {}", q);
            prop_assert!(inv.len() <= 1);
        }
    }

    #[test]
    fn shifting_moves_degrees((n, k, swap, signs) in module_strategy(), by in -2i64..=2) {
        let c = concentrate(&signed_involution(n, k, swap, &signs), 0);
        let base = tate(&c, (-4, 4), Engine::Periodic);
        let shifted = tate(&shift(&c, by), (-2, 2), Engine::Periodic);
        for (i, inv) in shifted.iter().enumerate() {
            let q = i as i64 - 2;
            prop_assert_eq!(inv, &base[(q + by + 4) as usize]);
        }
    }

    #[test]
    fn involution_modules_match_brute_force((n, k, swap, signs) in module_strategy()) {
        let m = signed_involution(n, k, swap, &signs);
        let all = elements(n, k);
        let add = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| (x + y).rem_euclid(n)).collect::<Vec<_>>();
        let norm = |v: &[i64]| add(v, &apply(&m, n, v));
        let zero = vec![0; k];
        let fixed = all.iter().filter(|v| apply(&m, n, v) == **v).count();
        let norms: BTreeSet<_> = all.iter().map(|v| norm(v)).collect();
        let kernel = all.iter().filter(|v| norm(v) == zero).count();
        let aug: BTreeSet<_> = all.iter().map(|v| add(&apply(&m, n, v), &v.iter().map(|x| -x).collect::<Vec<_>>())).collect();
        let got = tate(&concentrate(&m, 0), (-1, 2), Engine::Bar);
        prop_assert_eq!(order(&got[1]), BigInt::from(fixed / norms.len()));
        prop_assert_eq!(order(&got[0]), BigInt::from(kernel / aug.len()));
        prop_assert_eq!(&got[0], &got[2]);
        prop_assert_eq!(&got[1], &got[3]);
        prop_assert_eq!(order(&got[1]), m.fixed_mod_norm().order().unwrap());
        prop_assert_eq!(order(&got[0]), m.norm_kernel_mod_augmentation().order().unwrap());
    }

    #[test]
    fn change_of_presentation((n, k, swap, signs) in module_strategy(), shear in -3i64..=3, extra in 0u64..=3) {
        let m = signed_involution(n, k, swap, &signs);
        // new generators f = P e with P unipotent; also check additivity against a trivial summand
        let mut p = IntMatrix::identity(k);
        if k >= 2 {
            p.set(0, k - 1, BigInt::from(shear));
        }
        let mut pinv = IntMatrix::identity(k);
        if k >= 2 {
            pinv.set(0, k - 1, BigInt::from(-shear));
        }
        let rel = &p * m.relators();
        let acts: Vec<IntMatrix> = m.actions().iter().map(|a| &(&p * a) * &pinv).collect();
        let twisted = GModule::new(m.group().clone(), k, rel, acts).unwrap();
        let a = tate(&concentrate(&m, 0), (-1, 2), Engine::Periodic);
        let b = tate(&concentrate(&twisted, 0), (-1, 2), Engine::Computed);
        prop_assert_eq!(&a, &b);
        if extra >= 1 {
            let g = m.group();
            let sum = hypertate::gmodules::direct_sum(&m, &trivial_cyclic(g, 1 + extra));
            let with_extra = tate(&concentrate(&sum, 0), (-1, 2), Engine::Periodic);
            let alone = tate(&concentrate(&trivial_cyclic(g, 1 + extra), 0), (-1, 2), Engine::Periodic);
            for i in 0..4 {
                prop_assert_eq!(order(&with_extra[i]), order(&a[i]) * order(&alone[i]));
            }
        }
    }
}

/// `Z --m--> Z` in degrees 0, 1 is quasi-isomorphic to `Z/m` in degree 1.
fn multiplication_complex(g: &Arc<FiniteGroup>, m: i64) -> GComplex {
    let z = trivial_cyclic(g, 0);
    GComplex::new(g.clone(), 0, vec![z.clone(), z], vec![IntMatrix::scalar(1, m)]).unwrap()
}

#[test]
fn quasi_isomorphic_coefficients_agree() {
    for (g, engine) in [(cyclic(4), Engine::Periodic), (Arc::new(symmetric_group(3)), Engine::Computed)] {
        for m in 1..=4 {
            let c = multiplication_complex(&g, m);
            let d = concentrate(&trivial_cyclic(&g, m as u64), 1);
            assert_eq!(tate(&c, (-2, 3), engine), tate(&d, (-2, 3), engine), "m = {m}");
        }
    }
}

#[test]
fn engines_agree_on_s3_integers() {
    let g = Arc::new(symmetric_group(3));
    let c = concentrate(&trivial_cyclic(&g, 0), 0);
    let bar = tate(&c, (-3, 3), Engine::Bar);
    let computed = tate(&c, (-3, 3), Engine::Computed);
    assert_eq!(bar, computed);
    // H_2 = 0, H_1 = Z/2, Z/6 in degree 0, dual pattern above
    let orders: Vec<BigInt> = computed.iter().map(|i| order(i)).collect();
    let expected: Vec<BigInt> = [1, 2, 1, 6, 1, 2, 1].iter().map(|&x: &i64| BigInt::from(x)).collect();
    assert_eq!(orders, expected);
}
