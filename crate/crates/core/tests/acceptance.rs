//! The nine acceptance criteria, each timed against its bound. Prints one
//! PASS/FAIL line per criterion and fails if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::*;
use lgc::conjugacy::*;
use lgc::cycles::*;
use lgc::fq::{check_suite, xy_series, Fq};
use lgc::isotypic::*;
use lgc::phigamma::*;
use lgc::serre::*;
use lgc::weyl::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($c:expr, $($m:tt)+) => {
        if !$c {
            return Err(format!($($m)+));
        }
    };
}

fn rw(v: &[(i64, i64)]) -> RationalWeight {
    RationalWeight(v.iter().map(|&(a, b)| q_frac(a, b)).collect())
}

fn sorted_perms(v: &[BlockPerm]) -> Vec<Perm> {
    let mut out: Vec<Perm> = v.iter().map(|w| w.perm.clone()).collect();
    out.sort();
    out
}

fn gap(info: &PcInfo, f: usize) -> Result<RationalWeight, String> {
    let top = theta_g(info.pc.rank()).scale(f as i64).to_q();
    let gaps: BTreeSet<_> = info.wc.iter().map(|w| top.sub(&w.perm.act_q(&info.lambda_prime))).collect();
    ensure!(gaps.len() == 1, "f theta - w(lambda') depends on w");
    Ok(gaps.into_iter().next().unwrap())
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn tables() -> Outcome {
    let s = Perm::simple_reflection(2, 0);
    for f in 1..=6usize {
        let comps = components(&build_system(2, f).map_err(err)?, &StdParabolic::borel(2)).map_err(err)?;
        ensure!(comps.len() == f + 1, "n=2 f={f}: {} components", comps.len());
        for c in &comps {
            let i = c.zchar.blocksums[1] as usize;
            let info = parabolic_of(c).map_err(err)?;
            let wc = match (2 * i).cmp(&f) {
                std::cmp::Ordering::Less => vec![Perm::identity(2)],
                std::cmp::Ordering::Equal => vec![Perm::identity(2), s.clone()],
                std::cmp::Ordering::Greater => vec![s.clone()],
            };
            ensure!(sorted_perms(&info.wc) == wc, "W(C) for n=2 f={f} i={i}");
            let k = i.min(f - i) as i64;
            ensure!(gap(&info, f)? == rw(&[(k, 1), (-k, 1)]), "gap for n=2 f={f} i={i}");
            ensure!(info.pc.is_borel() == (i == 0 || i == f), "P(C) for n=2 f={f} i={i}");
            ensure!(info.pc.is_full() == (i != 0 && i != f), "P(C) for n=2 f={f} i={i}");
        }
    }
    let sys = build_system(3, 1).map_err(err)?;
    let comps = components(&sys, &StdParabolic::borel(3)).map_err(err)?;
    ensure!(comps.len() == 7, "n=3 Borel: {} components", comps.len());
    for w in Perm::all(3) {
        let lam = w.inverse().act(&theta_g(3));
        let c = comps.iter().find(|c| c.zchar.blocksums == lam.0).ok_or("lambda_w missing")?;
        let info = parabolic_of(c).map_err(err)?;
        ensure!(sorted_perms(&info.wc) == vec![w.clone()] && info.pc.is_borel(), "lambda_w for w={w}");
    }
    let det = comps.iter().find(|c| c.zchar.blocksums == vec![1, 1, 1]).ok_or("det missing")?;
    let info = parabolic_of(det).map_err(err)?;
    ensure!(info.wc.len() == 6 && info.pc.is_full(), "det component");
    ensure!(gap(&info, 1)? == rw(&[(1, 1), (0, 1), (-1, 1)]), "det gap");

    let p = StdParabolic::from_blocks(&[2, 1]).map_err(err)?;
    let comps = components(&sys, &p).map_err(err)?;
    let cyc = Perm::simple_reflection(3, 0).compose(&Perm::simple_reflection(3, 1));
    let mut both = vec![Perm::identity(3), cyc.clone()];
    both.sort();
    let rows = [
        (
            vec![3, 0],
            rw(&[(3, 2), (3, 2), (0, 1)]),
            vec![Perm::identity(3)],
            rw(&[(1, 2), (-1, 2), (0, 1)]),
            vec![2, 1],
        ),
        (vec![2, 1], rw(&[(1, 1), (1, 1), (1, 1)]), both, rw(&[(1, 1), (0, 1), (-1, 1)]), vec![3]),
        (vec![1, 2], rw(&[(1, 2), (1, 2), (2, 1)]), vec![cyc], rw(&[(0, 1), (1, 2), (-1, 2)]), vec![1, 2]),
    ];
    ensure!(comps.len() == 3, "Levi (2,1): {} components", comps.len());
    for (bs, lp, wc, g, blocks) in rows {
        let c = comps.iter().find(|c| c.zchar.blocksums == bs).ok_or("Levi component missing")?;
        let info = parabolic_of(c).map_err(err)?;
        ensure!(info.lambda_prime == lp, "lambda' for {bs:?}: {}", info.lambda_prime);
        ensure!(sorted_perms(&info.wc) == wc, "W(C) for {bs:?}");
        ensure!(gap(&info, 1)? == g, "gap for {bs:?}");
        ensure!(info.pc.blocks() == &blocks[..], "P(C) for {bs:?}");
    }
    Ok(())
}

fn w_dot_checks() -> Outcome {
    let sys = build_system(3, 1).map_err(err)?;
    let p = StdParabolic::from_blocks(&[2, 1]).map_err(err)?;
    let comps = components(&sys, &p).map_err(err)?;
    let cyc = Perm::from_images(vec![1, 2, 0]).map_err(err)?;
    let c0 = comps.iter().find(|c| c.zchar.blocksums == vec![3, 0]).ok_or("lambda_0 missing")?;
    let out = w_dot(&comps, c0, &cyc).map_err(err)?;
    ensure!(out.zchar.blocksums == vec![1, 2], "3-cycle sends lambda_0 to {:?}", out.zchar.blocksums);
    let mut checked = 0;
    for n in 2..=4 {
        for f in 1..=2 {
            let sys = build_system(n, f).map_err(err)?;
            let tg = theta_g(n).scale(f as i64);
            for p in StdParabolic::all(n) {
                let comps = components(&sys, &p).map_err(err)?;
                for wc in BlockPerm::all(&p) {
                    let z = ZChar::of(&p, &wc.perm.inverse().act(&tg));
                    let c = comps.iter().find(|c| c.zchar == z).ok_or("minimal component missing")?;
                    let pc = parabolic_of(c).map_err(err)?.pc;
                    for w in Perm::all(n).into_iter().filter(|w| w.map_simple(pc.simple()).is_some()) {
                        let out = w_dot(&comps, c, &w).map_err(err)?;
                        let expect = ZChar::of(&p, &w.compose(&wc.perm).inverse().act(&tg));
                        ensure!(out.zchar == expect, "n={n} f={f} P={p} w={w}");
                        checked += 1;
                    }
                }
            }
        }
    }
    ensure!(checked > 0, "no minimal components checked");
    Ok(())
}

fn graphs() -> Outcome {
    for f in 1..=6 {
        let g = good_lattice(&build_system(2, f).map_err(err)?, &RelClosedSet::full(&StdParabolic::borel(2)))
            .map_err(err)?;
        let chain = g.vertices.len() == f + 1 && g.edges.len() == f && g.depth().iter().max() == Some(&f);
        ensure!(chain, "n=2 f={f} is not a chain of {} vertices", f + 1);
    }
    for pic in pictures() {
        let g = good_lattice(&build_system(pic.n, pic.f).map_err(err)?, &pic.shape).map_err(err)?;
        ensure!(same(&our_graph(&g), &picture_graph(&pic)), "{} differs from the drawing", pic.name);
        if pic.n == 3 && pic.f == 1 {
            ensure!(g.vertices.len() == 7 && g.edges.len() == 8, "{}: size", pic.name);
        }
        if pic.n == 4 {
            let count = |t: Tag, k: usize| g.vertices.iter().filter(|v| v.tag == t && v.blocks.len() == k).count();
            let tags = (g.vertices.len(), count(Tag::PI, 3), count(Tag::PI, 2), count(Tag::SS, 1));
            ensure!(tags == (14, 6, 4, 4), "{}: tags {tags:?}", pic.name);
        }
    }
    let partial = &pictures()[2];
    let ws: Vec<Perm> = w_set(&partial.shape).into_iter().map(|w| w.perm).collect();
    let expect = vec![Perm::identity(4), Perm::simple_reflection(4, 1).compose(&Perm::simple_reflection(4, 2))];
    ensure!(ws == expect, "W for the partial shape: {ws:?}");
    Ok(())
}

fn serre_identities() -> Outcome {
    for p in [29i64, 31, 37] {
        for f in 1..=4 {
            for rho in all_kinds(f) {
                let label = rho.label();
                let r = default_r(&rho.semisimplification(), p).map_err(err)?;
                check_generic(&rho.semisimplification(), p, &r).map_err(err)?;
                let pset = build_p(&rho).map_err(err)?;
                let d = build_d(&rho);
                let dsize = match rho.kind() {
                    Kind::Nonsplit(j) => 1 << j.len(),
                    _ => 1 << f,
                };
                ensure!(d.len() == dsize, "{label}: |D| = {}", d.len());
                ensure!(pset.iter().filter(|e| !e.ideal.has_y()).count() == 1 << f, "{label}: no-y count");
                let mass: u64 = pset.iter().map(|e| 1u64 << e.a.len()).sum();
                ensure!(mass == 4u64.pow(f as u32), "{label}: mass {mass}");
                for e in &pset {
                    let dual = dual_tuple(&e.forms, &rho).map_err(err)?;
                    ensure!(ideal_of(&dual, &rho).map_err(err)? == e.ideal, "{label}: dual changes the ideal");
                    ensure!(dual_tuple(&dual, &rho).map_err(err)? == e.forms, "{label}: dual not involutive");
                }
                if rho.is_semisimple() {
                    ensure!(d.len() == 1 << f, "{label}: |D| = {}", d.len());
                    for e in &d {
                        let dual = dual_tuple(&e.forms, &rho).map_err(err)?;
                        ensure!(length_of(&dual) == f - e.ell, "{label}: length of the dual");
                    }
                }
            }
        }
    }
    Ok(())
}

fn orbits() -> Outcome {
    for p in [29i64, 31, 37] {
        for f in 1..=4 {
            for rho in [RhoKind::irreducible(f).map_err(err)?, RhoKind::split(f).map_err(err)?] {
                let r = default_r(&rho, p).map_err(err)?;
                let orbits = delta_orbits(&rho, p, &r).map_err(err)?;
                let total: usize = orbits.iter().map(|o| o.len()).sum();
                ensure!(total == 1 << f, "{}: total length {total}", rho.label());
                for o in &orbits {
                    ensure!(o.steps.iter().all(|s| s.jmax.len() == o.m), "{}: m varies", rho.label());
                    let sum: i64 = o.s_values().iter().sum();
                    ensure!(sum % (p - 1) == 0, "{}: Σ s = {sum}", rho.label());
                }
            }
        }
    }
    Ok(())
}

fn group_algebra() -> Outcome {
    for (p, f) in [(3u32, 2u32), (5, 1), (5, 2), (5, 3), (7, 2)] {
        for c in check_suite(p, f, 3 * p as usize).map_err(err)? {
            ensure!(c.pass, "p={p} f={f}: {} {}", c.name, c.detail);
        }
        theta_matches_naive(p, f)?;
        let s = xy_series(&Fq::new(p, f).map_err(err)?, 3 * p as usize).map_err(err)?;
        let ours: Vec<u64> = s.y_in_x.coeffs.iter().map(|&c| c as u64).collect();
        ensure!(ours == brute_y_in_x(p as u64, 3 * p as usize), "p={p} f={f}: Y(X) differs");
    }
    Ok(())
}

fn cycles() -> Outcome {
    for f in 1..=4 {
        for rho in all_kinds(f) {
            for e in build_p(&rho).map_err(err)? {
                let orig = char_cycle(&MonModule::cyclic(MonomialIdeal::from_gens(&e.ideal)), f).map_err(err)?;
                ensure!(orig.total() == 1 << e.a.len(), "{}: cycle mass", rho.label());
                let (d, tw) = dual_module(&e.ideal);
                let dual_ideal = d.pieces.keys().next().ok_or("empty dual")?.ideal.clone();
                ensure!(char_cycle(&MonModule::cyclic(dual_ideal.clone()), f).map_err(err)? == orig, "dual cycle");
                let back = dual_ideal.as_gens().ok_or("dual is not of generator form")?;
                ensure!(back == e.ideal && dual_module(&back).1 == tw, "dual not involutive");
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..1000 {
        let f = rng.gen_range(1..=4);
        let pieces = random_pieces(&mut rng, f);
        let cut = rng.gen_range(0..=pieces.len());
        let m1 = MonModule::from_pieces(pieces[..cut].iter().cloned());
        let m2 = MonModule::from_pieces(pieces[cut..].iter().cloned());
        let m = MonModule::from_pieces(pieces.iter().cloned());
        ensure!(additivity_check(&m1, &m, &m2, f).map_err(err)?, "additivity fails");
    }
    Ok(())
}

const PREC: usize = 40;

fn phi_gamma() -> Outcome {
    for p in [29u32, 31, 37] {
        let fq = Fq::new(p, 1).map_err(err)?;
        let gammas = default_gammas(p, 2).map_err(err)?;
        for f in 1..=3 {
            for rho in [RhoKind::irreducible(f).map_err(err)?, RhoKind::split(f).map_err(err)?] {
                let r = default_r(&rho, p as i64).map_err(err)?;
                let mut rank = 0;
                for o in delta_orbits(&rho, p as i64, &r).map_err(err)? {
                    let mu = default_mu(&fq, &o, 1);
                    let chi = chi_exponents(&o, 0);
                    let untwisted = build_md_untwisted(&fq, &o, &mu, &chi, &gammas, PREC).map_err(err)?;
                    let md = twist_n(&untwisted, &r).map_err(err)?;
                    let s = o.s_values();
                    let n = o.len();
                    for i in 0..n {
                        let (tgt, c, k) = md.phi_monomial(i).ok_or("φ is not monomial")?;
                        ensure!(tgt == (i + 1) % n && fq.mul(c, mu[i]) == 1 && k == s[i], "p={p} f={f} φ(e_{i})");
                    }
                    ensure!(md.etale && md.commutes().map_err(err)?, "p={p} f={f}: not étale");
                    rank += n;
                }
                ensure!(rank == 1 << f, "p={p} f={f}: rank {rank}");
            }
        }
    }
    for p in [29u64, 31, 37] {
        for f in 1..=4u32 {
            let c1 = TameChar::new(p, f, f, 3, 2, 1).map_err(err)?;
            let c2 = TameChar::new(p, f, f, 11, 2, 4).map_err(err)?;
            let chain = predict_example_chain(&c1, &c2).map_err(err)?;
            ensure!(chain.iter().map(Vec::len).sum::<usize>() == 1 << f, "chain dimension p={p} f={f}");
            ensure!(TameChar::omega(p, f, 1).tensor_induce().map_err(err)? == TameChar::omega(p, 1, 1), "ω_f");
            for n in 1..=6u32 {
                let s: i64 = (1..n as i64).map(|j| j * j).sum();
                let d = delta_g(p, f, n);
                let via_induction = TameChar::cyclotomic(p, f).pow(s).tensor_induce().map_err(err)?;
                ensure!(d == via_induction && d.exp == (f as u64 * s as u64) % (p - 1), "δ_G p={p} f={f} n={n}");
            }
        }
    }
    for n in 1..=12 {
        for c in compositions(n) {
            ensure!(composition_identity(&c), "composition {c:?}");
        }
    }
    Ok(())
}

fn conjugacy() -> Outcome {
    for n in 1..=4 {
        let shapes = all_shapes(n);
        for s in &shapes {
            ensure!(validate(s.parabolic(), s.roots()).as_ref() == Ok(s), "validate {s}");
            let mut cur = s.clone();
            for a in orderw_decompose(s).map_err(err)? {
                cur = rel_closure(&cur, a).map_err(err)?;
            }
            ensure!(cur == RelClosedSet::full(s.parabolic()), "orderw does not reach R+ from {s}");
            for b in &shapes {
                ensure!(good_equivalent(s, b).is_some() == brute_equivalent(s, b), "good_equivalent {s} vs {b}");
            }
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [(&str, u64, fn() -> Outcome); 9] = [
        ("P(C)/W(C) tables", 1, tables),
        ("w·C and minimal components", 5, w_dot_checks),
        ("constituent graphs", 30, graphs),
        ("Serre weight identities", 10, serre_identities),
        ("δ-orbits", 5, orbits),
        ("group algebra suite", 60, group_algebra),
        ("cycles", 5, cycles),
        ("(φ,Γ)-modules", 10, phi_gamma),
        ("conjugacy", 60, conjugacy),
    ];
    let mut failed = Vec::new();
    for (k, (name, bound, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let dt = t.elapsed();
        let verdict = match &outcome {
            Ok(()) if dt < Duration::from_secs(*bound) => "PASS".to_string(),
            Ok(()) => format!("FAIL (over {bound} s)"),
            Err(e) => format!("FAIL ({e})"),
        };
        println!("criterion {}: {name}: {verdict} [{:.3} s, bound {bound} s]", k + 1, dt.as_secs_f64());
        if !verdict.starts_with("PASS") {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
