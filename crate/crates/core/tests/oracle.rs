use fqgauss::exactmath::{cyc, sqrt_int, CycNum};
use fqgauss::fqm::{form_from_str, BlockExpr, FqForm};
use fqgauss::oracle::{
    classical_gauss, equivariant_from_orbits, gauss_sums, localization_check, orbit_pairing, signature, Kind,
};
use fqgauss::orthogroup::{orbits, orthogonal_group, subgroup_from_generators, Isometry};
use fqgauss::sweep::block_library;
use fqgauss::Limits;
use proptest::prelude::*;

#[test]
fn pairing_is_independent_of_the_representative() {
    let limits = Limits::default();
    for e in block_library(48) {
        let g = orthogonal_group(&e.realize(), &limits).unwrap();
        let part = orbits(&g);
        for k in 0..part.len() {
            let members = part.orbit_elements(k);
            let first = orbit_pairing(&g, &members[0], &members[0]);
            for x in &members[1..] {
                assert_eq!(orbit_pairing(&g, x, x), first, "{e}: {x}");
            }
        }
    }
}

#[test]
fn first_kind_sums_are_real() {
    let limits = Limits::default();
    for e in block_library(60) {
        let f = e.realize();
        let g = orthogonal_group(&f, &limits).unwrap();
        let minus = Isometry::new((0..f.rank()).map(|i| f.neg(&f.generator(i))).collect());
        for group in [g.clone(), subgroup_from_generators(&g, &[minus]).unwrap()] {
            let v = equivariant_from_orbits(&orbits(&group)).0.value;
            assert_eq!(v.conj(), v, "{e}");
        }
    }
}

/// Embeds an isometry of one summand into the direct sum.
fn embed(sum: &FqForm, g: &Isometry, offset: usize, rank: usize) -> Isometry {
    let images = (0..sum.rank())
        .map(|i| {
            if i < offset || i >= offset + rank {
                return sum.generator(i);
            }
            let mut coeffs = vec![0i64; sum.rank()];
            for (j, c) in g.images()[i - offset].coeffs().iter().enumerate() {
                coeffs[offset + j] = *c as i64;
            }
            sum.element(&coeffs).unwrap()
        })
        .collect();
    Isometry::new(images)
}

#[test]
fn sums_factor_over_product_groups() {
    let limits = Limits::default();
    let parts = ["q(3,1)", "q(5,2)", "U2", "V2"];
    for a in parts {
        for b in parts {
            let (fa, fb) = (form_from_str(a).unwrap(), form_from_str(b).unwrap());
            let sum = fa.direct_sum(&fb);
            let (ga, gb) = (orthogonal_group(&fa, &limits).unwrap(), orthogonal_group(&fb, &limits).unwrap());
            let mut gens: Vec<Isometry> = ga.iter().map(|g| embed(&sum, &g, 0, fa.rank())).collect();
            gens.extend(gb.iter().map(|g| embed(&sum, &g, fa.rank(), fb.rank())));
            let full = orthogonal_group(&sum, &limits).unwrap();
            let gamma = subgroup_from_generators(&full, &gens).unwrap();
            assert_eq!(gamma.order(), ga.order() * gb.order());
            let (g1, g2) = equivariant_from_orbits(&orbits(&gamma));
            let (sa, sb) = (gauss_sums(&fa, &limits).unwrap(), gauss_sums(&fb, &limits).unwrap());
            assert_eq!(g1.value, &sa.first.value * &sb.first.value, "{a} + {b}");
            assert_eq!(g2.value, &sa.second.value * &sb.second.value, "{a} + {b}");
        }
    }
}

#[test]
fn trivial_group_gives_the_classical_sums() {
    let limits = Limits::default();
    for e in block_library(40) {
        let f = e.realize();
        let g = orthogonal_group(&f, &limits).unwrap().trivial();
        let (g1, g2) = equivariant_from_orbits(&orbits(&g));
        assert_eq!(g1.value, classical_gauss(&f, Kind::First, &limits).unwrap().value, "{e}");
        assert_eq!(g2.value, classical_gauss(&f, Kind::Second, &limits).unwrap().value, "{e}");
    }
}

#[test]
fn spot_values() {
    let limits = Limits::default();
    let s = |t: &str| gauss_sums(&form_from_str(t).unwrap(), &limits).unwrap();
    assert_eq!(s("q(5,1)").first.value, sqrt_int(5));
    assert_eq!(s("q(3,1)").second.value, CycNum::one() - cyc(1, 3));
    assert_eq!(s("U(5)").first.value, CycNum::from_int(10));
    assert_eq!(s("N(3)").first.value, CycNum::from_int(3));
    assert_eq!(s("U(7)").second.value, CycNum::from_int(14));
    assert_eq!(s("U(3)").orbit_count, 4);
    assert_eq!(signature(&form_from_str("V2").unwrap(), &limits).unwrap(), 4);
    assert_eq!(signature(&form_from_str("U2").unwrap(), &limits).unwrap(), 0);
    assert_eq!(signature(&form_from_str("q(2,1)").unwrap(), &limits).unwrap(), 1);
}

#[test]
fn localization_on_mixed_forms() {
    let limits = Limits::default();
    for t in ["q(4,1)+q(3,1)", "U2+q(5,2)", "q(2,1)+q(3,2)+q(5,1)"] {
        assert!(localization_check(&form_from_str(t).unwrap(), &limits).unwrap(), "{t}");
    }
}

fn library_form() -> impl Strategy<Value = BlockExpr> {
    prop::sample::select(block_library(30))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn signature_is_additive(a in library_form(), b in library_form()) {
        let limits = Limits::default();
        let sig = |e: &BlockExpr| signature(&e.realize(), &limits).unwrap();
        prop_assert_eq!(sig(&a.concat(&b)), (sig(&a) + sig(&b)) % 8);
    }

    #[test]
    fn milgram_holds(a in library_form(), b in library_form()) {
        let limits = Limits::default();
        let f = a.concat(&b).realize();
        let n = f.group_order() as i128;
        let g = classical_gauss(&f, Kind::Second, &limits).unwrap().value;
        prop_assert_eq!(g.pow(8), CycNum::from_int(n.pow(4)));
    }
}

