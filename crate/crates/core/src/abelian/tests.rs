use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

use super::*;
use crate::matrix::{ints, Int, IntMatrix};
use crate::random::{random_group, random_morphism, random_unimodular, Rng};

fn cyc(n: i64) -> FgAbGroup {
    FgAbGroup::cyclic(n)
}

/// Counts homomorphisms by assigning every generator an element of a finite
/// target and keeping assignments that kill all relations.
fn hom_count_oracle(v: &FgAbGroup, w: &FgAbGroup) -> usize {
    let elems = w.elements(4096).expect("finite target");
    let n = v.generators();
    let mut count = 0;
    let mut choice = vec![0usize; n];
    loop {
        let cols: Vec<Vec<Int>> = choice.iter().map(|&i| elems[i].clone()).collect();
        let m = IntMatrix::from_columns(w.generators(), &cols);
        let img = &m * v.relations();
        if (0..img.cols()).all(|j| w.is_zero_element(&img.column(j))) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return count;
            }
            choice[i] += 1;
            if choice[i] < elems.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// `|Ext¹(ℤ/a, ℤ/b)|` by enumerating normalised symmetric 2-cocycles
/// `f: ℤ/a × ℤ/a → ℤ/b` and dividing by the number of coboundaries.
fn ext1_cyclic_oracle(a: usize, b: usize) -> usize {
    let cells = a * a;
    let total = b.pow(cells as u32);
    let mut cocycles = std::collections::HashSet::new();
    for code in 0..total {
        let f = |x: usize, y: usize| (code / b.pow((x * a + y) as u32)) % b;
        let mut ok = true;
        'check: for x in 0..a {
            for y in 0..a {
                if f(x, y) != f(y, x) {
                    ok = false;
                    break 'check;
                }
                for z in 0..a {
                    let lhs = (f(x, y) + f((x + y) % a, z)) % b;
                    let rhs = (f(y, z) + f(x, (y + z) % a)) % b;
                    if lhs != rhs {
                        ok = false;
                        break 'check;
                    }
                }
            }
        }
        if ok {
            cocycles.insert(code);
        }
    }
    let mut coboundaries = std::collections::HashSet::new();
    for g in 0..b.pow(a as u32) {
        let gv = |x: usize| (g / b.pow(x as u32)) % b;
        let mut code = 0;
        for x in 0..a {
            for y in 0..a {
                let v = (gv(x) + gv(y) + b - gv((x + y) % a)) % b;
                code += v * b.pow((x * a + y) as u32);
            }
        }
        coboundaries.insert(code);
    }
    cocycles.len() / coboundaries.len()
}

#[test]
fn hom_examples_against_enumeration() {
    assert!(hom_z(&cyc(2), &cyc(3)).group().is_trivial());
    assert_eq!(hom_count_oracle(&cyc(2), &cyc(3)), 1);
    let h = hom_z(&cyc(4), &cyc(2));
    assert_eq!(h.group().invariant_factors(), ints(&[2]).as_slice());
    assert_eq!(hom_count_oracle(&cyc(4), &cyc(2)), 2);
    let w = FgAbGroup::cyclic_sum(&ints(&[2, 6, 0]));
    let h = hom_z(&FgAbGroup::free(1), &w);
    assert_eq!(h.group().invariant_factors(), w.invariant_factors());
}

#[test]
fn ext1_examples_against_cocycle_enumeration() {
    let e = ext1_z(&cyc(2), &cyc(2));
    assert_eq!(e.group().invariant_factors(), ints(&[2]).as_slice());
    assert_eq!(ext1_cyclic_oracle(2, 2), 2);
    assert!(ext1_z(&cyc(2), &cyc(3)).group().is_trivial());
    assert_eq!(ext1_cyclic_oracle(2, 3), 1);
    assert!(ext1_z(&FgAbGroup::free(3), &cyc(5)).group().is_trivial());
    for a in 2..=3 {
        for b in 2..=3 {
            let e = ext1_z(&cyc(a as i64), &cyc(b as i64));
            assert_eq!(
                e.group().order().unwrap().to_usize().unwrap(),
                ext1_cyclic_oracle(a, b),
                "Ext1(Z/{a}, Z/{b})"
            );
        }
    }
}

#[test]
fn induced_map_examples() {
    let z4 = cyc(4);
    let z2 = cyc(2);
    let id = GroupMorphism::identity(&z4);
    for functor in [
        Functor::HomCovariant,
        Functor::HomContravariant,
        Functor::Ext1Covariant,
        Functor::Ext1Contravariant,
    ] {
        let m = induced_map(&id, functor, &z2).unwrap();
        assert!(m
            .map()
            .same_map(&GroupMorphism::identity(m.map().source())));
    }
    // Multiplication by 2 on Z/4 induces zero on Ext¹(Z/2, Z/4) ≅ Z/2.
    let two = GroupMorphism::scalar(&z4, 2);
    let m = induced_map(&two, Functor::Ext1Covariant, &z2).unwrap();
    let InducedMap::Ext1 { domain, .. } = &m else {
        panic!("expected Ext1")
    };
    assert_eq!(domain.group().invariant_factors(), ints(&[2]).as_slice());
    // Cocycle level: the generator c = 1 goes to 2, which is a coboundary (2·1).
    let gen = IntMatrix::from_rows(&[[1]]);
    assert!(!domain.is_zero_cocycle(&gen));
    assert!(domain.is_zero_cocycle(&gen.scale(&Int::from(2))));
    assert!(m.map().is_zero());
    let zero = GroupMorphism::zero(&z4, &z2);
    assert!(induced_map(&zero, Functor::HomContravariant, &z4)
        .unwrap()
        .map()
        .is_zero());
}

#[test]
fn induced_map_rejects_ill_defined_input() {
    let bad = GroupMorphism::new_unchecked(cyc(2), cyc(3), IntMatrix::from_rows(&[[1]]));
    let err = induced_map(&bad, Functor::HomCovariant, &cyc(2)).unwrap_err();
    assert_eq!(err, crate::Error::IllDefined { relation: 0 });
}

#[test]
fn kernel_cokernel_examples() {
    let z = FgAbGroup::free(1);
    let kc = kernel_cokernel(&GroupMorphism::identity(&z)).unwrap();
    assert!(kc.kernel.is_trivial() && kc.cokernel.is_trivial());
    let twice = GroupMorphism::scalar(&z, 2);
    let kc = kernel_cokernel(&twice).unwrap();
    assert!(kc.kernel.is_trivial());
    assert_eq!(kc.cokernel.invariant_factors(), ints(&[2]).as_slice());
    let zero = GroupMorphism::zero(&cyc(6), &cyc(4));
    let kc = kernel_cokernel(&zero).unwrap();
    assert_eq!(kc.kernel.invariant_factors(), ints(&[6]).as_slice());
    assert_eq!(kc.cokernel.invariant_factors(), ints(&[4]).as_slice());
    assert!(check_kernel_cokernel(&zero, &kc).unwrap());
}

#[test]
fn iso_examples() {
    let a = FgAbGroup::cyclic_sum(&ints(&[2, 3]));
    match iso_groups(&a, &cyc(6)) {
        IsoDecision::Isomorphic(f) => assert!(is_isomorphism(&f).unwrap()),
        IsoDecision::NotIsomorphic => panic!("Z/2+Z/3 ≅ Z/6"),
    }
    assert!(!iso_groups(&FgAbGroup::free(1), &cyc(2)).is_iso());
    match iso_groups(&FgAbGroup::free(2), &FgAbGroup::free(2)) {
        IsoDecision::Isomorphic(f) => assert!(f.matrix().is_identity()),
        IsoDecision::NotIsomorphic => panic!(),
    }
}

fn orders_product(gs: &[&FgAbGroup]) -> Vec<Int> {
    // Multiset of invariant factors of a direct sum.
    FgAbGroup::direct_sum(&gs.iter().map(|g| (*g).clone()).collect::<Vec<_>>())
        .invariant_factors()
        .to_vec()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hom_and_ext_are_additive(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let v1 = random_group(&mut rng, 2, 4);
        let v2 = random_group(&mut rng, 2, 4);
        let w = random_group(&mut rng, 2, 4);
        let sum = FgAbGroup::direct_sum(&[v1.clone(), v2.clone()]);
        let h = hom_z(&sum, &w);
        let h1 = hom_z(&v1, &w);
        let h2 = hom_z(&v2, &w);
        prop_assert_eq!(h.group().invariant_factors().to_vec(), orders_product(&[h1.group(), h2.group()]));
        let e = ext1_z(&sum, &w);
        let e1 = ext1_z(&v1, &w);
        let e2 = ext1_z(&v2, &w);
        prop_assert_eq!(e.group().invariant_factors().to_vec(), orders_product(&[e1.group(), e2.group()]));
        let wsum = FgAbGroup::direct_sum(&[w.clone(), v2.clone()]);
        let e = ext1_z(&v1, &wsum);
        let e3 = ext1_z(&v1, &v2);
        prop_assert_eq!(e.group().invariant_factors().to_vec(), orders_product(&[e1.group(), e3.group()]));
    }

    #[test]
    fn induced_maps_are_functorial(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let a = random_group(&mut rng, 2, 4);
        let b = random_group(&mut rng, 2, 4);
        let c = random_group(&mut rng, 2, 4);
        let other = random_group(&mut rng, 2, 4);
        let f = random_morphism(&mut rng, &a, &b);
        let g = random_morphism(&mut rng, &b, &c);
        let gf = g.compose(&f).unwrap();
        // covariant: (g f)_* = g_* f_*
        let ha = hom_z(&other, &a);
        let hb = hom_z(&other, &b);
        let hc = hom_z(&other, &c);
        let lhs = hom_covariant(&gf, &ha, &hc).unwrap();
        let rhs = hom_covariant(&g, &hb, &hc).unwrap().compose(&hom_covariant(&f, &ha, &hb).unwrap()).unwrap();
        prop_assert!(lhs.same_map(&rhs));
        let ea = ext1_z(&other, &a);
        let eb = ext1_z(&other, &b);
        let ec = ext1_z(&other, &c);
        let lhs = ext1_covariant(&gf, &ea, &ec).unwrap();
        let rhs = ext1_covariant(&g, &eb, &ec).unwrap().compose(&ext1_covariant(&f, &ea, &eb).unwrap()).unwrap();
        prop_assert!(lhs.same_map(&rhs));
        // contravariant: (g f)^* = f^* g^*
        let ha = hom_z(&a, &other);
        let hb = hom_z(&b, &other);
        let hc = hom_z(&c, &other);
        let lhs = hom_contravariant(&gf, &hc, &ha).unwrap();
        let rhs = hom_contravariant(&f, &hb, &ha).unwrap().compose(&hom_contravariant(&g, &hc, &hb).unwrap()).unwrap();
        prop_assert!(lhs.same_map(&rhs));
        let ea = ext1_z(&a, &other);
        let eb = ext1_z(&b, &other);
        let ec = ext1_z(&c, &other);
        let lhs = ext1_contravariant(&gf, &ec, &ea).unwrap();
        let rhs = ext1_contravariant(&f, &eb, &ea).unwrap().compose(&ext1_contravariant(&g, &ec, &eb).unwrap()).unwrap();
        prop_assert!(lhs.same_map(&rhs));
    }

    #[test]
    fn ext1_is_presentation_independent(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let v = random_group(&mut rng, 3, 4);
        let w = random_group(&mut rng, 2, 4);
        let p = random_unimodular(&mut rng, v.generators());
        let q = random_unimodular(&mut rng, v.relations().cols());
        let v2 = FgAbGroup::from_presentation(&(&p * v.relations()) * &q);
        prop_assert!(iso_groups(&v, &v2).is_iso());
        let e1 = ext1_z(&v, &w);
        let e2 = ext1_z(&v2, &w);
        prop_assert!(iso_groups(e1.group(), e2.group()).is_iso());
        let h1 = hom_z(&v, &w);
        let h2 = hom_z(&v2, &w);
        prop_assert!(iso_groups(h1.group(), h2.group()).is_iso());
    }

    #[test]
    fn kernel_cokernel_is_exact(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let a = random_group(&mut rng, 3, 4);
        let b = random_group(&mut rng, 3, 4);
        let f = random_morphism(&mut rng, &a, &b);
        let kc = kernel_cokernel(&f).unwrap();
        prop_assert!(check_kernel_cokernel(&f, &kc).unwrap());
        // |a| = |ker| · |im| and |b| = |im| · |coker| for finite groups.
        if let (Some(oa), Some(ob)) = (a.order(), b.order()) {
            let ok = kc.kernel.order().unwrap();
            let oc = kc.cokernel.order().unwrap();
            let (im, r) = oa.div_rem(&ok);
            prop_assert!(r.is_zero());
            prop_assert_eq!(im * oc, ob);
        }
    }
}
