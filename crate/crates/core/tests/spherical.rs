use hecke_cert::coxeter::{
    all_permutations, bruhat_leq, longest_element, min_coset_rep, min_coset_reps, ParabolicSubset,
    Permutation, Word,
};
use hecke_cert::hecke::{kl_basis, pairing, HeckeElement, Side};
use hecke_cert::spherical::{
    deodhar_expand, interval_condition_check, pi_tilde, spherical_kl_basis, spherical_pairing,
    SphericalElement,
};
use hecke_cert::subexpr::{decorate, EnumConstraint};
use hecke_cert::IntLaurent;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn words(n: usize, len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w: Vec<usize>| {
                (1..n).map(move |s| {
                    let mut w = w.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(|l| Word::new(n, l).unwrap()).collect()
}

fn random_spherical(rng: &mut ChaCha8Rng, a: &ParabolicSubset, terms: usize) -> SphericalElement {
    let reps = min_coset_reps(a);
    let mut m = SphericalElement::zero(a);
    for _ in 0..terms {
        let x = &reps[rng.gen_range(0..reps.len())];
        let p = IntLaurent::from_ints(&[
            (rng.gen_range(-2..=2), rng.gen_range(-2..=2)),
            (rng.gen_range(-2..=2), 1),
        ]);
        m.add_term(x, &p);
    }
    m
}

#[test]
fn embedding_intertwines_the_action() {
    for a in ParabolicSubset::all_subsets(4) {
        for x in min_coset_reps(&a) {
            let m = SphericalElement::standard(&x, &a);
            for s in 1..4 {
                let lhs = m.act_by_gen(s).embed();
                let rhs = m.embed().mul_kl_gen(s, Side::Left);
                assert_eq!(lhs, rhs, "A = {a}, x = {x}, s = {s}");
            }
        }
    }
}

#[test]
fn embedding_image_is_right_w_a_stable() {
    // phi(m) b_s = (v + v^-1) phi(m) for s in A.
    for a in ParabolicSubset::all_subsets(4) {
        for x in min_coset_reps(&a) {
            let e = SphericalElement::standard(&x, &a).embed();
            for s in a.indices() {
                assert_eq!(
                    e.mul_kl_gen(s, Side::Right),
                    e.scale(&IntLaurent::quantum_two())
                );
            }
        }
    }
}

#[test]
fn spherical_kl_basis_matches_hecke_kl_basis() {
    for a in ParabolicSubset::all_subsets(4) {
        let wa = longest_element(&a);
        for x in min_coset_reps(&a) {
            let c = spherical_kl_basis(&x, &a).unwrap();
            let b = kl_basis(&x.compose(&wa));
            assert_eq!(c.embed(), b, "A = {a}, x = {x}");
            // gamma_{y,x} = beta_{y w_A, x w_A}
            for y in min_coset_reps(&a) {
                assert_eq!(
                    c.coeff(&y),
                    b.coeff(&y.compose(&wa)),
                    "A = {a}, y = {y}, x = {x}"
                );
            }
            assert_eq!(c.coeff(&x), IntLaurent::one());
            for (y, g) in c.terms() {
                assert!(y == &x || g.is_positive_powers());
            }
        }
    }
}

#[test]
fn spherical_pairing_axioms() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for a in ParabolicSubset::all_subsets(3) {
        for x in min_coset_reps(&a) {
            for y in min_coset_reps(&a) {
                let mx = SphericalElement::standard(&x, &a);
                let my = SphericalElement::standard(&y, &a);
                let raw = pairing(&mx.embed(), &my.embed());
                assert_eq!(
                    raw.exact_divide(&pi_tilde(&a)).unwrap(),
                    spherical_pairing(&mx, &my).unwrap()
                );
            }
        }
    }
    for _ in 0..1000 {
        let a = ParabolicSubset::all_subsets(4)
            .choose(&mut rng)
            .unwrap()
            .clone();
        let m = random_spherical(&mut rng, &a, 2);
        let m2 = random_spherical(&mut rng, &a, 2);
        let p = IntLaurent::from_ints(&[(rng.gen_range(-2..=2), rng.gen_range(-2..=2))]);
        let s = rng.gen_range(1..4);
        let base = spherical_pairing(&m, &m2).unwrap();
        assert_eq!(
            spherical_pairing(&m.scale(&p), &m2).unwrap(),
            &base * &p.bar()
        );
        assert_eq!(spherical_pairing(&m, &m2.scale(&p)).unwrap(), &base * &p);
        assert_eq!(
            spherical_pairing(&m.act_by_gen(s), &m2).unwrap(),
            spherical_pairing(&m, &m2.act_by_gen(s)).unwrap()
        );
    }
}

#[test]
fn deodhar_expansion_equals_bott_samelson() {
    for len in 0..=6 {
        for w in words(4, len) {
            for a in ParabolicSubset::all_subsets(4) {
                let d = deodhar_expand(&w, &a, &EnumConstraint::free(w.len()), 1).unwrap();
                assert_eq!(d, SphericalElement::bott_samelson(&w, &a), "{w} A = {a}");
            }
        }
    }
}

#[test]
fn deodhar_with_trivial_parabolic_matches_hecke() {
    let a = ParabolicSubset::empty(4);
    for w in words(4, 4) {
        let d = deodhar_expand(&w, &a, &EnumConstraint::free(w.len()), 1).unwrap();
        assert_eq!(d.embed(), HeckeElement::bott_samelson(&w));
    }
}

#[test]
fn direct_decoration_sums_to_bott_samelson() {
    // Independent of the engine: decorate all 2^m bit strings one by one.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..40 {
        let len = rng.gen_range(0..=7);
        let w = Word::new(5, (0..len).map(|_| rng.gen_range(1..5)).collect()).unwrap();
        let a = ParabolicSubset::all_subsets(5)
            .choose(&mut rng)
            .unwrap()
            .clone();
        let mut m = SphericalElement::zero(&a);
        for code in 0u32..1 << len {
            let bits: Vec<u8> = (0..len).map(|j| (code >> j & 1) as u8).collect();
            let d = decorate(&w, &bits, &a).unwrap();
            m.add_term(&d.endpoint, &IntLaurent::v_pow(d.defect));
        }
        assert_eq!(m, SphericalElement::bott_samelson(&w, &a), "{w} A = {a}");
    }
}

/// Random instance shaped like the certificate word: a reduced word of
/// `w_B` shuffled together with letters outside `B`, so that every letter
/// of `B` is needed to reach `w_B`.
fn pruning_instance(rng: &mut ChaCha8Rng) -> (Word, ParabolicSubset, ParabolicSubset) {
    let n = rng.gen_range(4..=5);
    loop {
        let b: Vec<usize> = (1..n).filter(|_| rng.gen_bool(0.4)).collect();
        let a: Vec<usize> = (1..n)
            .filter(|s| !b.contains(s) && rng.gen_bool(0.5))
            .collect();
        let (a, b) = (
            ParabolicSubset::new(n, a).unwrap(),
            ParabolicSubset::new(n, b).unwrap(),
        );
        let outside: Vec<usize> = (1..n).filter(|s| !b.contains(*s)).collect();
        let wb = longest_element(&b).reduced_word();
        if outside.is_empty() || wb.len() > 10 {
            continue;
        }
        let extra = rng.gen_range(0..=12 - wb.len());
        let mut slots: Vec<Option<usize>> = wb.letters().iter().map(|&s| Some(s)).collect();
        slots.extend((0..extra).map(|_| None));
        slots.shuffle(rng);
        let letters = slots
            .into_iter()
            .map(|s| s.unwrap_or_else(|| *outside.choose(rng).unwrap()))
            .collect();
        return (Word::new(n, letters).unwrap(), a, b);
    }
}

#[test]
fn forcing_letters_in_b_preserves_the_interval() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..40 {
        let (w, a, b) = pruning_instance(&mut rng);
        let x = longest_element(&b);
        assert_eq!(min_coset_rep(&x, &a), x);
        let full = deodhar_expand(&w, &a, &EnumConstraint::free(w.len()), 2).unwrap();
        let pruned = deodhar_expand(&w, &a, &EnumConstraint::forced_in(&w, &b), 2).unwrap();
        for z in min_coset_reps(&a) {
            if bruhat_leq(&x, &z) {
                assert_eq!(
                    full.coeff(&z),
                    pruned.coeff(&z),
                    "{w} A = {a} B = {b} z = {z}"
                );
            }
        }
    }
}

#[test]
fn interval_check_sees_only_the_open_lower_end() {
    // c_w for a reduced word in S_3 with A = {s_1}: m_x itself may carry any
    // coefficient, cosets above x must be in Z[v].
    let a = ParabolicSubset::new(3, [1]).unwrap();
    let w = Word::new(3, vec![1, 2, 1]).unwrap();
    let m = SphericalElement::bott_samelson(&w, &a);
    let top = min_coset_rep(&w.evaluate(), &a);
    let r = interval_condition_check(&m, &Permutation::identity(3), &top).unwrap();
    assert!(r
        .entries
        .iter()
        .all(|e| e.coset != Permutation::identity(3)));
    assert_eq!(r.pass, r.failures().next().is_none());
}

#[test]
fn all_cosets_reached_by_the_longest_word() {
    let w0 = longest_element(&ParabolicSubset::full(4)).reduced_word();
    for a in ParabolicSubset::all_subsets(4) {
        let m = deodhar_expand(&w0, &a, &EnumConstraint::free(w0.len()), 4).unwrap();
        let support: Vec<&Permutation> = m.terms().map(|(z, _)| z).collect();
        assert_eq!(support.len(), min_coset_reps(&a).len(), "A = {a}");
        assert_eq!(
            all_permutations(4).len() as u128,
            min_coset_reps(&a).len() as u128 * a.order()
        );
    }
}
