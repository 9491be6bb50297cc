use finvic::oracle::column_adapted_bruteforce;
use finvic::ovic::{
    canonical_splitting, column_adapted_maps, column_adapted_s, compose_vic, enumerate_ovic, enumerate_vic, factor_vic,
    free_row_values, is_column_adapted, reconstruct_from_free, s_function, SFunction,
};
use finvic::ring::{builtin, RMatrix};
use finvic::wedderburn::{build_aw_embedding, AwEmbedding};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

const EXHAUSTIVE_LIMIT: u128 = 100_000;

fn aw(name: &str) -> AwEmbedding {
    build_aw_embedding(&builtin(name).unwrap()).unwrap()
}

/// Column-adapted `rows x cols` maps: all of them when the scan is small,
/// otherwise those among 20000 seeded random matrices.
fn adapted(aw: &AwEmbedding, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Vec<(RMatrix, SFunction)> {
    let size = aw.ring().size();
    if (size as u128).pow((rows * cols) as u32) <= EXHAUSTIVE_LIMIT {
        return column_adapted_maps(aw, rows, cols, EXHAUSTIVE_LIMIT).unwrap();
    }
    let mut out = Vec::new();
    for _ in 0..20_000 {
        let entries = (0..rows * cols).map(|_| rng.gen_range(0..size)).collect();
        let h = RMatrix::new(rows, cols, entries).unwrap();
        if let Some(s) = column_adapted_s(&h, aw) {
            out.push((h, s));
        }
    }
    out
}

#[test]
fn composites_stay_column_adapted() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for name in ["F2", "F3", "Z4", "T2F2"] {
        let aw = aw(name);
        let r = aw.ring();
        let mut maps = BTreeMap::new();
        for rows in 0..=3 {
            for cols in rows..=3 {
                let list = if rows == cols {
                    vec![(RMatrix::identity(r, rows), s_function(&RMatrix::identity(r, rows), &aw).unwrap())]
                } else {
                    adapted(&aw, rows, cols, &mut rng)
                };
                maps.insert((rows, cols), list);
            }
        }
        let mut checked = 0;
        for l in 0..=3 {
            for n in l..=3 {
                for m in n..=3 {
                    for (h1, _) in &maps[&(n, m)] {
                        for (h2, _) in maps[&(l, n)].iter().take(200) {
                            let c = r.mat_mul(h2, h1).unwrap();
                            assert!(is_column_adapted(&c, &aw), "{name}: {l}<-{n}<-{m}");
                            checked += 1;
                        }
                    }
                }
            }
        }
        assert!(checked > 0);
    }
}

#[test]
fn only_the_identity_is_an_ordered_endomorphism() {
    for (name, max) in [("F2", 3), ("F3", 2), ("Z4", 2), ("T2F2", 2), ("F2C2", 2)] {
        let aw = aw(name);
        for n in 0..=max {
            let maps = column_adapted_maps(&aw, n, n, EXHAUSTIVE_LIMIT).unwrap();
            assert_eq!(maps.len(), 1, "{name} n = {n}");
            assert!(aw.ring().is_identity(&maps[0].0));
        }
    }
}

#[test]
fn predicate_matches_definition_on_larger_rings() {
    for (name, shapes) in [("T2F2", vec![(1, 2), (1, 3)]), ("F3", vec![(1, 3), (2, 3)]), ("M2F2", vec![(1, 2)])] {
        let aw = aw(name);
        let r = aw.ring();
        for (rows, cols) in shapes {
            let mut entries = vec![0; rows * cols];
            loop {
                let h = RMatrix::new(rows, cols, entries.clone()).unwrap();
                assert_eq!(column_adapted_s(&h, &aw), column_adapted_bruteforce(&h, &aw), "{name} {entries:?}");
                let mut i = entries.len();
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    entries[i] += 1;
                    if entries[i] < r.size() {
                        break;
                    }
                    entries[i] = 0;
                }
                if entries.iter().all(|&x| x == 0) {
                    break;
                }
            }
        }
    }
}

#[test]
fn canonical_splittings_are_universal() {
    for (name, n_max) in [("T2F2", 3), ("F3", 3), ("M2F2", 2)] {
        let aw = aw(name);
        let r = aw.ring();
        for m in 1..=n_max {
            let mut by_s: BTreeMap<SFunction, Vec<RMatrix>> = BTreeMap::new();
            for (h, s) in column_adapted_maps(&aw, 1, m, EXHAUSTIVE_LIMIT).unwrap() {
                by_s.entry(s).or_default().push(h);
            }
            for (s, hs) in by_s {
                let g = canonical_splitting(&s, &aw, m, 1).unwrap();
                for h in hs {
                    assert!(r.is_identity(&r.mat_mul(&h, &g).unwrap()), "{name}");
                }
            }
        }
    }
}

#[test]
fn factorization_and_roundtrip_on_noncommutative_rings() {
    for (name, n_max) in [("T2F2", 2), ("F3", 2), ("F2C2", 2)] {
        let aw = aw(name);
        let r = aw.ring();
        for n in 1..=n_max {
            for f in enumerate_vic(&aw, 1, n, 1 << 22).unwrap() {
                let fac = factor_vic(&f, &aw).unwrap();
                assert!(r.is_identity(&r.mat_mul(&fac.g, &fac.g_inverse).unwrap()));
                assert!(r.is_identity(&r.mat_mul(&fac.g_inverse, &fac.g).unwrap()));
                assert!(is_column_adapted(fac.f2.f_dprime(), &aw));
                assert_eq!(compose_vic(fac.f2.vic(), &fac.f1).unwrap(), f);
            }
            for f in enumerate_ovic(&aw, 1, n, 1 << 22).unwrap() {
                let back = reconstruct_from_free(f.f_dprime(), &free_row_values(&f, &aw), &aw).unwrap();
                assert_eq!(back, f);
            }
        }
    }
}

fn surjective_with_radical_shift(
    name: &'static str,
) -> impl Strategy<Value = (&'static str, usize, usize, Vec<usize>, Vec<usize>)> {
    let aw = aw(name);
    let size = aw.ring().size();
    let radical = aw.quotient().ideal().members().to_vec();
    (1usize..=2, 1usize..=3).prop_flat_map(move |(d, n)| {
        let cells = d * n;
        (
            Just(name),
            Just(d),
            Just(n),
            proptest::collection::vec(0..size, cells),
            proptest::collection::vec(proptest::sample::select(radical.clone()), cells),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn s_function_depends_only_on_the_reduction(
        (name, d, n, h, j) in prop_oneof![
            surjective_with_radical_shift("Z4"),
            surjective_with_radical_shift("Z8"),
            surjective_with_radical_shift("T2F2"),
            surjective_with_radical_shift("F2C2"),
        ]
    ) {
        let aw = aw(name);
        let r = aw.ring();
        let h = RMatrix::new(d, n, h).unwrap();
        let shift = RMatrix::new(d, n, j).unwrap();
        let moved = r.mat_add(&h, &shift).unwrap();
        prop_assert_eq!(s_function(&h, &aw).ok(), s_function(&moved, &aw).ok());
    }
}
