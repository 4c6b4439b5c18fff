//! Tate groups of finite modules against brute-force enumeration of
//! cochains, fixed points and norms.

mod common;

use num_bigint::BigInt;

use common::{neg, trivial, Finite};
use hypertate::gcomplexes::concentrate;
use hypertate::groups::{direct_product, make_cyclic, quaternion_group, symmetric_group};
use hypertate::resolutions::{build_complete_resolution, Engine, DEFAULT_BAR_CAP};
use hypertate::tate::Cohomology;

fn engine_orders(m: &Finite, engine: Engine) -> Vec<usize> {
    let x = build_complete_resolution(&m.g, 4, engine, DEFAULT_BAR_CAP).unwrap();
    let coh = Cohomology::new(&x, &concentrate(&m.module(), 0)).unwrap();
    let t = coh.groups((-1, 2)).unwrap();
    (-1..=2)
        .map(|q| {
            let o = t.group(q).order().expect("finite");
            usize::try_from(o).unwrap()
        })
        .collect()
}

fn check(m: &Finite, with_h2: bool) {
    let expected = [m.h_minus1(), m.h0(), m.h1(), if with_h2 { m.h2() } else { 0 }];
    let engines: &[Engine] = if m.g.is_cyclic() {
        &[Engine::Periodic, Engine::Bar, Engine::Computed]
    } else {
        &[Engine::Bar, Engine::Computed]
    };
    for &e in engines {
        let got = engine_orders(m, e);
        let upto = if with_h2 { 4 } else { 3 };
        assert_eq!(got[..upto], expected[..upto], "engine {}", e.name());
    }
}

#[test]
fn cyclic_two_on_z4_by_negation() {
    let m = Finite::new(make_cyclic(2), 4, 1, &[(1, neg(1))]);
    assert_eq!((m.h0(), m.h1()), (2, 2));
    check(&m, true);
}

#[test]
fn cyclic_two_swapping_coordinates() {
    let m = Finite::new(make_cyclic(2), 2, 2, &[(1, vec![vec![0, 1], vec![1, 0]])]);
    assert_eq!((m.h_minus1(), m.h0(), m.h1()), (1, 1, 1));
    check(&m, true);
}

#[test]
fn cyclic_four_unipotent() {
    let m = Finite::new(make_cyclic(4), 2, 2, &[(1, vec![vec![1, 1], vec![0, 1]])]);
    check(&m, true);
}

#[test]
fn cyclic_four_on_z4_by_negation() {
    let m = Finite::new(make_cyclic(4), 4, 1, &[(1, neg(1))]);
    check(&m, false);
}

#[test]
fn cyclic_three_trivial() {
    let m = trivial(make_cyclic(3), 3);
    assert_eq!(m.h2(), 3);
    check(&m, true);
}

#[test]
fn klein_four_trivial_z2() {
    let v4 = direct_product(&make_cyclic(2), &make_cyclic(2));
    let m = trivial(v4, 2);
    assert_eq!((m.h1(), m.h2()), (4, 8));
    check(&m, true);
}

#[test]
fn klein_four_unipotent() {
    let v4 = direct_product(&make_cyclic(2), &make_cyclic(2));
    let m = Finite::new(v4, 2, 2, &[(1, vec![vec![1, 1], vec![0, 1]]), (2, vec![vec![1, 0], vec![0, 1]])]);
    check(&m, true);
}

#[test]
fn s3_sign_on_z3() {
    let g = symmetric_group(3);
    let a3 = g.commutator_subgroup();
    let odd = g.elements().find(|&x| !a3.contains(x)).unwrap();
    let rot = g.elements().find(|&x| x != g.identity() && a3.contains(x)).unwrap();
    let m = Finite::new(g, 3, 1, &[(odd, neg(1)), (rot, vec![vec![1]])]);
    check(&m, false);
}

#[test]
fn s3_trivial_z2() {
    let m = trivial(symmetric_group(3), 2);
    assert_eq!(m.h1(), 2);
    check(&m, false);
}

#[test]
fn quaternion_trivial_z2() {
    let m = trivial(quaternion_group(), 2);
    assert_eq!(m.h1(), 4);
    let x = build_complete_resolution(&m.g, 4, Engine::Computed, DEFAULT_BAR_CAP).unwrap();
    let t = Cohomology::new(&x, &concentrate(&m.module(), 0)).unwrap().groups((-1, 1)).unwrap();
    let orders: Vec<BigInt> = (-1..=1).map(|q| t.group(q).order().unwrap()).collect();
    assert_eq!(orders, [m.h_minus1(), m.h0(), m.h1()].map(BigInt::from));
}
