mod common;

use common::{all_kinds, random_pieces};
use lgc::cycles::*;
use lgc::serre::{build_p, Gen, MonIdeal};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

// Length of R_q / a R_q by counting standard monomials: invert the variables
// outside q (set them to 1), then count monomials in the q-variables that
// avoid the localized ideal. Monomials are bounded coordinatewise by the
// largest exponent seen, which suffices once every q-variable has a pure
// power in the ideal.
fn oracle_mult(a: &MonomialIdeal, q: &MinPrime) -> u64 {
    let f = a.f();
    let local: Vec<Vec<u32>> =
        a.gens().iter().map(|g| (0..f).map(|j| if q.contains_y(j) { g.y[j] } else { g.z[j] }).collect()).collect();
    if local.iter().any(|g| g.iter().all(|&e| e == 0)) {
        return 0;
    }
    let bound = local.iter().flatten().copied().max().unwrap_or(0) + 1;
    let mut count = 0;
    let mut e = vec![0u32; f];
    loop {
        let standard = !local.iter().any(|g| g.iter().zip(&e).all(|(a, b)| a <= b));
        if standard {
            assert!(e.iter().all(|&x| x + 1 < bound), "module not of finite length at q");
            count += 1;
        }
        let mut k = 0;
        while k < f {
            e[k] += 1;
            if e[k] < bound {
                break;
            }
            e[k] = 0;
            k += 1;
        }
        if k == f {
            break;
        }
    }
    count
}

#[test]
fn closed_form_matches_oracle_on_ideals_of_p() {
    for f in 1..=4 {
        for rho in all_kinds(f) {
            let mut total = Cycle::zero(f);
            let mut p0_total = 0;
            for e in build_p(&rho).unwrap() {
                let ideal = MonomialIdeal::from_gens(&e.ideal);
                let c = char_cycle(&MonModule::cyclic(ideal.clone()), f).unwrap();
                for q in MinPrime::all(f).unwrap() {
                    assert_eq!(c.at(&q), oracle_mult(&ideal, &q));
                }
                assert_eq!(c.total(), 1 << e.a.len());
                let p0 = c.at(&MinPrime::p0(f));
                assert_eq!(p0, !e.ideal.has_y() as u64);
                p0_total += p0;
                total = total.add(&c);
            }
            assert_eq!(total.total(), 4u64.pow(f as u32));
            assert_eq!(p0_total, 1 << f);
        }
    }
}

#[test]
fn dual_preserves_cycle_and_is_involutive() {
    for f in 1..=4 {
        for rho in all_kinds(f) {
            for e in build_p(&rho).unwrap() {
                let (d, tw) = dual_module(&e.ideal);
                let orig = MonModule::cyclic(MonomialIdeal::from_gens(&e.ideal));
                let dual_ideal = d.pieces.keys().next().unwrap().ideal.clone();
                assert_eq!(char_cycle(&MonModule::cyclic(dual_ideal.clone()), f), char_cycle(&orig, f));
                let back = dual_ideal.as_gens().unwrap();
                assert_eq!(back, e.ideal);
                let (_, tw2) = dual_module(&back);
                assert_eq!(tw, tw2);
            }
        }
    }
}

// Brute-force annihilator of a in R̄ among monomials of exponent ≤ 2: its
// minimal elements must be exactly the multiples of t'.
#[test]
fn dual_generator_spans_annihilator() {
    for f in 1..=3 {
        for code in 0..3u32.pow(f as u32) {
            let gens: Vec<Gen> =
                (0..f).map(|j| [Gen::Y, Gen::Z, Gen::YZ][(code / 3u32.pow(j as u32) % 3) as usize]).collect();
            let a = MonIdeal(gens);
            let ideal = MonomialIdeal::from_gens(&a);
            let (t, _) = dual_generator(&a);
            let mut e = vec![0u32; 2 * f];
            loop {
                let m = Monomial { y: e[..f].to_vec(), z: e[f..].to_vec() };
                if !m.vanishes_in_rbar() {
                    let kills = ideal.gens().iter().all(|g| g.mul(&m).vanishes_in_rbar());
                    assert_eq!(kills, t.divides(&m), "{a} {m}");
                }
                let mut k = 0;
                while k < 2 * f {
                    e[k] += 1;
                    if e[k] <= 2 {
                        break;
                    }
                    e[k] = 0;
                    k += 1;
                }
                if k == 2 * f {
                    break;
                }
            }
        }
    }
}

#[test]
fn additivity_on_random_modules() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..1000 {
        let f = rng.gen_range(1..=4);
        let pieces = random_pieces(&mut rng, f);
        let cut = rng.gen_range(0..=pieces.len());
        let m1 = MonModule::from_pieces(pieces[..cut].iter().cloned());
        let m2 = MonModule::from_pieces(pieces[cut..].iter().cloned());
        let m = MonModule::from_pieces(pieces.iter().cloned());
        assert!(additivity_check(&m1, &m, &m2, f).unwrap());
        let c1 = char_cycle(&m1, f).unwrap();
        assert!(c1.le(&char_cycle(&m, f).unwrap()));
        for (p, _) in &pieces {
            for q in MinPrime::all(f).unwrap() {
                assert_eq!(mult_piece(&p.ideal, &q), oracle_mult(&p.ideal, &q));
            }
        }
    }
}

#[test]
fn wrong_declaration_is_rejected() {
    let a = MonModule::cyclic(MonomialIdeal::zero(1));
    assert!(additivity_check(&a, &a, &a, 1).is_err());
}

proptest! {
    #[test]
    fn cycle_total_of_gens_shape(f in 1usize..=5, code in any::<u32>()) {
        let gens: Vec<Gen> = (0..f).map(|j| [Gen::Y, Gen::Z, Gen::YZ][((code >> (2 * j)) % 3) as usize]).collect();
        let yz = gens.iter().filter(|g| **g == Gen::YZ).count();
        let a = MonIdeal(gens);
        let c = char_cycle(&MonModule::cyclic(MonomialIdeal::from_gens(&a)), f).unwrap();
        prop_assert_eq!(c.total(), 1u64 << yz);
    }
}
