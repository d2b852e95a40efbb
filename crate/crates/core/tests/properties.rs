mod support;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use support::{random_complex, random_primitive, MapKind};
use tilecoh::abgroups::{AbHom, FgAbGroup};
use tilecoh::cellcx::{les_assemble, les_exactness, plain_cohomology, DegreeResult};
use tilecoh::indsys::{
    classify_limit, eventual_range, image_system, kernel_system, limit_mod_p_rank, relevant_primes, InductiveSystem,
    LimitDescriptor, SystemHom,
};
use tilecoh::intlinalg::{kernel_basis, snf, IntMatrix};
use tilecoh::onedim::{allowed_words2, build_bd_complex, h1_tiling_space};

fn matrix(max: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r).prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

fn minors_gcd(a: &IntMatrix, r: usize) -> BigInt {
    fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = choose(n - 1, k);
        for mut c in choose(n - 1, k - 1) {
            c.push(n - 1);
            out.push(c);
        }
        out
    }
    let mut g = BigInt::zero();
    for rs in choose(a.rows(), r) {
        for cs in choose(a.cols(), r) {
            g = g.gcd(&a.select(&rs, &cs).det());
        }
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn snf_factorizes(a in matrix(6, 9)) {
        let f = snf(&a);
        prop_assert_eq!(f.u.mul(&a).mul(&f.v), f.d.clone());
        prop_assert_eq!(f.u.mul(&f.u_inv), IntMatrix::identity(a.rows()));
        prop_assert_eq!(f.v.mul(&f.v_inv), IntMatrix::identity(a.cols()));
        for (i, d) in f.diagonal.iter().enumerate() {
            prop_assert!(!d.is_negative());
            prop_assert_eq!(f.d.get(i, i), d);
            if let Some(next) = f.diagonal.get(i + 1) {
                let chained = if d.is_zero() { next.is_zero() } else { next.is_multiple_of(d) };
                prop_assert!(chained);
            }
        }
    }

    #[test]
    fn invariant_factors_match_minor_gcds(a in matrix(4, 6)) {
        let f = snf(&a);
        let mut prod = BigInt::one();
        for r in 1..=f.rank() {
            prod *= &f.diagonal[r - 1];
            prop_assert_eq!(&prod, &minors_gcd(&a, r));
        }
    }

    #[test]
    fn kernel_basis_is_kernel(a in matrix(5, 4)) {
        let k = kernel_basis(&a);
        prop_assert!(a.mul(&k).is_zero());
        prop_assert_eq!(k.rank(), k.cols());
        prop_assert_eq!(k.cols() + a.rank(), a.cols());
    }

    #[test]
    fn eventual_range_idempotent(m in matrix(4, 3).prop_filter("square", |m| m.is_square())) {
        // Generator lifts point into different ambients; compare the systems themselves.
        let e = eventual_range(&InductiveSystem::free(m));
        let ee = eventual_range(&e);
        prop_assert_eq!(ee.group.free_rank, e.group.free_rank);
        prop_assert_eq!(&ee.group.torsion, &e.group.torsion);
        prop_assert_eq!(ee.endo, e.endo);
    }
}

#[test]
fn snf_survives_entry_growth() {
    // Hilbert-like: (i+j+1)-scaled entries with large cofactors.
    let rows: Vec<Vec<i64>> = (0..8).map(|i| (0..8).map(|j| 720720 / (i + j + 1) as i64).collect()).collect();
    let a = IntMatrix::from_rows(&rows);
    let f = snf(&a);
    assert_eq!(f.u.mul(&a).mul(&f.v), f.d);
    let prod: BigInt = f.diagonal.iter().product();
    assert_eq!(prod, a.det().abs());
    let widest = [&f.u, &f.v, &f.u_inv, &f.v_inv]
        .iter()
        .flat_map(|m| m.to_rows().into_iter().flatten())
        .map(|x| x.bits())
        .max()
        .unwrap();
    assert!(widest > 64, "widest entry has {widest} bits");
}

#[test]
fn hom_bookkeeping_on_random_homs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for _ in 0..500 {
        use rand::Rng;
        let orders = |rng: &mut ChaCha8Rng| -> FgAbGroup {
            let free = rng.gen_range(0..=3);
            let tors: Vec<BigInt> = (0..rng.gen_range(0..=2)).map(|_| BigInt::from(rng.gen_range(2..=6))).collect();
            FgAbGroup::from_cyclic(free, &tors)
        };
        let (g, h) = (orders(&mut rng), orders(&mut rng));
        let rows: Vec<Vec<i64>> =
            (0..h.ngens()).map(|_| (0..g.ngens()).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let m = if g.ngens() == 0 || h.ngens() == 0 {
            IntMatrix::zeros(h.ngens(), g.ngens())
        } else {
            IntMatrix::from_rows(&rows)
        };
        let Ok(f) = AbHom::new(g.clone(), h.clone(), m) else { continue };
        let (ker, im, coker) = (f.kernel().group(), f.image().group(), f.cokernel().group());
        assert_eq!(ker.free_rank + im.free_rank, g.free_rank);
        assert_eq!(im.free_rank + coker.free_rank, h.free_rank);
        if h.free_rank == 0 {
            assert_eq!(im.torsion_order() * coker.torsion_order(), h.torsion_order());
        }
        if g.free_rank == 0 {
            assert_eq!(ker.torsion_order() * im.torsion_order(), g.torsion_order());
        }
    }
}

fn seeds(n: u64, base: u64) -> impl Iterator<Item = ChaCha8Rng> {
    (0..n).map(move |i| ChaCha8Rng::seed_from_u64(base + i))
}

#[test]
fn random_complexes_are_valid_and_exact() {
    for mut rng in seeds(120, 1000) {
        let cx = random_complex(&mut rng, MapKind::Mixed);
        let v = cx.validate();
        assert!(v.valid, "{:?}", v.violation);
        for c in les_exactness(&cx).unwrap() {
            assert!(c.holds(), "{c:?}");
        }
    }
}

#[test]
fn eventual_range_invariant_and_closed() {
    for mut rng in seeds(120, 2000) {
        let cx = random_complex(&mut rng, MapKind::Mixed);
        for k in 0..cx.stratum_count() {
            let er = cx.eventual_range_cells(k);
            assert!(cx.image(&er).is_subset(&er));
            assert_eq!(cx.closure(&er), er);
            assert!(er.is_subset(&cx.stratum_cells(k)));
        }
    }
}

#[test]
fn identity_map_gives_plain_cohomology() {
    for mut rng in seeds(80, 3000) {
        let cx = random_complex(&mut rng, MapKind::Identity);
        let les = les_assemble(&cx).unwrap();
        let plain = plain_cohomology(&cx).unwrap();
        for (q, g) in plain.iter().enumerate() {
            let got = les.finals()[q].descriptor().cloned();
            let want = LimitDescriptor::from_group(g);
            match les.finals()[q] {
                DegreeResult::Group { .. } => assert!(got.unwrap().iso_eq(&want), "degree {q}"),
                // An unresolved extension must still have the right free rank.
                DegreeResult::Extension { ref problem } => {
                    assert_eq!(problem.sub.free_rank() + problem.quo.free_rank(), want.free_rank())
                }
            }
        }
    }
}

#[test]
fn pair_forms_agree() {
    for mut rng in seeds(120, 4000) {
        let cx = random_complex(&mut rng, MapKind::Mixed);
        for k in 1..cx.stratum_count() {
            let a = cx.pair_systems(k).unwrap().limits();
            let b = cx.pair_systems_er(k).unwrap().limits();
            for (x, y) in a.iter().zip(&b) {
                assert!(x.iso_eq(y), "stratum {k}: {x} vs {y}");
            }
        }
    }
}

fn mod_p_agrees(sys: &InductiveSystem) {
    let d = classify_limit(sys);
    if !d.classified {
        return;
    }
    for p in relevant_primes(sys, &d, 23) {
        let want = d.p_rank(&BigInt::from(p)).unwrap();
        assert_eq!(limit_mod_p_rank(sys, p).unwrap(), want, "p = {p}, {d}");
    }
}

#[test]
fn mod_p_oracle_and_exact_ranks_on_random_systems() {
    for mut rng in seeds(200, 5000) {
        let cx = random_complex(&mut rng, MapKind::Mixed);
        for k in 0..cx.stratum_count() {
            let pc = cx.stratum_systems(k).unwrap();
            for s in &pc.systems {
                mod_p_agrees(s);
            }
        }
        for k in 1..cx.stratum_count() {
            let les = cx.pair_les(&cx.eventual_range_cells(k), &cx.eventual_range_cells(k - 1)).unwrap();
            for h in les.sequence() {
                let h: &SystemHom = h;
                let src = classify_limit(&h.source).free_rank();
                let split =
                    classify_limit(&kernel_system(h)).free_rank() + classify_limit(&image_system(h)).free_rank();
                assert_eq!(src, split);
            }
        }
    }
}

#[test]
fn onedim_routes_agree_and_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(6000);
    for _ in 0..30 {
        let s = random_primitive(&mut rng);
        let r = h1_tiling_space(&s).unwrap_or_else(|e| panic!("{s} {:?}: {e}", s.matrix()));
        assert!(r.h1.iso_eq(&r.h1_four_term), "{s}: {} vs {}", r.h1, r.h1_four_term);
        assert_eq!(r.vertex_cells, allowed_words2(&s).unwrap().len());
        assert_eq!(r.tile_cells, s.len());
        assert!(build_bd_complex(&s).unwrap().validate().valid);
        let m = s.matrix();
        let eventual_rank = m.pow(s.len() as u32).rank();
        assert_eq!(r.tile_limit.free_rank(), eventual_rank);
    }
}
