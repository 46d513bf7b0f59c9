use std::collections::BTreeSet;

use anyhow::{anyhow, bail, Context, Result};
use lgc::conjugacy::{validate, RelClosedSet};
use lgc::cycles::{additivity_check, char_cycle, dual_module, MinPrime, MonModule, MonomialIdeal, Piece};
use lgc::fq::{check_suite, Fq, GroupAlgebra};
use lgc::isotypic::{build_system_capped, components, good_lattice, parabolic_of, TensorWeightSystem};
use lgc::phigamma::{build_md, build_md_untwisted, chi_exponents, default_gammas, default_mu, twist_n};
use lgc::serre::{build_d, build_p, check_generic, default_r, delta_orbits, dual_tuple, ideal_of, Kind, RhoKind};
use lgc::weyl::{theta_g, Root, StdParabolic};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use crate::report::{content_hash, join, table, Report};
use crate::GroupArgs;

const DEFAULT_CAP: u64 = 10_000_000;

pub fn weight_cap() -> Result<u64> {
    match std::env::var("LGC_MAX_WEIGHTS") {
        Ok(s) => s.trim().parse().with_context(|| format!("LGC_MAX_WEIGHTS must be a positive integer, got {s:?}")),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

fn parse_list(s: &str, what: &str) -> Result<Vec<usize>> {
    s.split(',').map(|x| x.trim().parse::<usize>().with_context(|| format!("bad {what} entry {x:?}"))).collect()
}

fn parabolic(g: &GroupArgs) -> Result<StdParabolic> {
    if g.n == 0 {
        bail!("--n must be positive");
    }
    if g.f == 0 {
        bail!("--f must be positive");
    }
    match &g.levi {
        None => Ok(StdParabolic::borel(g.n)),
        Some(s) => {
            let blocks = parse_list(s, "--levi")?;
            if blocks.contains(&0) || blocks.iter().sum::<usize>() != g.n {
                bail!("--levi {s} is not a composition of n = {}", g.n);
            }
            Ok(StdParabolic::from_blocks(&blocks)?)
        }
    }
}

fn system(g: &GroupArgs, cap: u64) -> Result<TensorWeightSystem> {
    Ok(build_system_capped(g.n, g.f, cap)?)
}

pub fn pc_table(g: &GroupArgs, cap: u64) -> Result<Report> {
    let p = parabolic(g)?;
    let sys = system(g, cap)?;
    let top = theta_g(g.n).scale(g.f as i64).to_q();
    let mut rows = Vec::new();
    let mut items = Vec::new();
    for c in components(&sys, &p)? {
        let info = parabolic_of(&c)?;
        let w = &info.wc[0];
        let gap = top.sub(&w.perm.act_q(&info.lambda_prime));
        let wc: Vec<String> = info.wc.iter().map(|w| w.perm.to_string()).collect();
        rows.push(vec![
            join(&c.zchar.blocksums, ","),
            c.dim.to_string(),
            info.lambda_prime.to_string(),
            w.perm.to_string(),
            gap.to_string(),
            info.pc.to_string(),
            wc.join(" "),
        ]);
        items.push(json!({
            "blocksums": c.zchar.blocksums,
            "dim": c.dim,
            "lambda_prime": info.lambda_prime.to_string(),
            "w": w.perm.to_string(),
            "f_theta_minus_w_lambda_prime": gap.to_string(),
            "pc_blocks": info.pc.blocks(),
            "wc": wc,
        }));
    }
    let mut rep = Report::new("pc-table");
    let title = format!("GL_{} f={} {}: {} isotypic components", g.n, g.f, p, rows.len());
    rep.table = table(&title, &["zchar", "dim", "lambda'", "w", "f.theta - w(lambda')", "P(C)", "W(C)"], &rows);
    rep.json = json!({ "n": g.n, "f": g.f, "parabolic": p.blocks(), "components": items });
    Ok(rep)
}

fn shape(g: &GroupArgs, spec: Option<&str>, split: bool) -> Result<RelClosedSet> {
    let levi_given = g.levi.is_some();
    let p = parabolic(g)?;
    if split {
        return Ok(RelClosedSet::levi_only(&p));
    }
    match spec.unwrap_or("full") {
        "full" => Ok(RelClosedSet::full(&p)),
        "levi" => Ok(RelClosedSet::levi_only(&p)),
        "borel" => {
            if !p.is_borel() {
                bail!("--shape borel conflicts with --levi");
            }
            Ok(RelClosedSet::full(&p))
        }
        "example5" => {
            if g.n != 4 {
                bail!("--shape example5 needs n = 4");
            }
            let p = StdParabolic::from_blocks(&[1, 2, 1])?;
            if levi_given && parabolic(g)? != p {
                bail!("--shape example5 uses the Levi 1,2,1");
            }
            let mut x: BTreeSet<Root> = p.levi_positive_roots().into_iter().collect();
            x.extend([Root { i: 0, j: 1 }, Root { i: 0, j: 2 }, Root { i: 0, j: 3 }]);
            Ok(validate(&p, &x)?)
        }
        list => {
            let mut x: BTreeSet<Root> = p.levi_positive_roots().into_iter().collect();
            for item in list.split(',') {
                let (a, b) = item.trim().split_once('-').ok_or_else(|| anyhow!("bad root {item:?}, expected i-j"))?;
                let (i, j): (usize, usize) = (a.parse()?, b.parse()?);
                if i == 0 || j == 0 {
                    bail!("roots are 1-based, got {item}");
                }
                x.insert(Root::new(i - 1, j - 1, g.n)?);
            }
            Ok(validate(&p, &x)?)
        }
    }
}

fn zchar_key(blocks: &[usize], sums: &[i64]) -> String {
    format!("blocks={};sums={}", join(blocks, ","), join(sums, ","))
}

pub fn diagram(g: &GroupArgs, spec: Option<&str>, split: bool, cap: u64) -> Result<Report> {
    let x = shape(g, spec, split)?;
    let graph = good_lattice(&system(g, cap)?, &x)?;
    let names: Vec<String> =
        graph.vertices.iter().map(|v| content_hash(&zchar_key(v.zchar.parent.blocks(), &v.zchar.blocksums))).collect();
    let mut rows = Vec::new();
    let mut verts = Vec::new();
    let mut dot = String::from("digraph lgc {\n  node [shape=box];\n");
    for (k, v) in graph.vertices.iter().enumerate() {
        let pos = match (v.socle, v.cosocle) {
            (true, true) => "socle+cosocle",
            (true, false) => "socle",
            (false, true) => "cosocle",
            _ => "",
        };
        rows.push(vec![
            k.to_string(),
            names[k].clone(),
            join(&v.zchar.blocksums, ","),
            v.dim.to_string(),
            v.tag.as_str().to_string(),
            join(&v.blocks, ","),
            join(&v.twists, ","),
            pos.to_string(),
        ]);
        verts.push(json!({
            "id": names[k],
            "blocksums": v.zchar.blocksums,
            "dim": v.dim,
            "tag": v.tag.as_str(),
            "pc_blocks": v.blocks,
            "twists": v.twists,
            "lambda_prime": v.lambda_prime.to_string(),
            "socle": v.socle,
            "cosocle": v.cosocle,
        }));
        dot.push_str(&format!(
            "  {} [label=\"{} {}\\n({})\"];\n",
            names[k],
            v.tag.as_str(),
            join(&v.blocks, ","),
            join(&v.zchar.blocksums, ",")
        ));
    }
    for &(u, v) in &graph.edges {
        dot.push_str(&format!("  {} -> {};\n", names[u], names[v]));
    }
    dot.push_str("}\n");
    let edge_rows: Vec<Vec<String>> = graph.edges.iter().map(|&(u, v)| vec![u.to_string(), v.to_string()]).collect();
    let mut rep = Report::new("diagram");
    let title = format!("{}: {} vertices, {} edges", x, graph.vertices.len(), graph.edges.len());
    rep.table = table(&title, &["#", "id", "zchar", "dim", "tag", "P(C)", "twists", "position"], &rows);
    rep.table.push('\n');
    rep.table.push_str(&table("edges (u generates v)", &["u", "v"], &edge_rows));
    let edges: Vec<Value> = graph.edges.iter().map(|&(u, v)| json!([names[u], names[v]])).collect();
    rep.json = json!({
        "n": g.n,
        "f": g.f,
        "shape": x.to_string(),
        "vertices": verts,
        "edges": edges,
    });
    rep.dot = Some(dot);
    Ok(rep)
}

fn parse_kind(s: &str, f: usize) -> Result<RhoKind> {
    Ok(match s {
        "irred" | "irreducible" => RhoKind::irreducible(f)?,
        "split" => RhoKind::split(f)?,
        "nonsplit" => RhoKind::nonsplit(f, [])?,
        _ => match s.strip_prefix("nonsplit:") {
            Some(j) => RhoKind::nonsplit(f, parse_list(j, "J")?)?,
            None => bail!("unknown kind {s:?}; expected irred, split or nonsplit:<J>"),
        },
    })
}

fn is_prime(p: i64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

pub fn serre(kind: &str, f: usize, p: i64) -> Result<Report> {
    let rho = parse_kind(kind, f)?;
    if !is_prime(p) {
        bail!("p = {p} is not prime");
    }
    let mut rep = Report::new("serre");
    let d = build_d(&rho);
    let pset = build_p(&rho)?;
    let expect_d = match rho.kind() {
        Kind::Nonsplit(j) => 1usize << j.len(),
        _ => 1 << f,
    };
    rep.check(format!("|D| = {expect_d}"), d.len() == expect_d);
    rep.check(
        format!("{} elements of P without y", 1 << f),
        pset.iter().filter(|e| !e.ideal.has_y()).count() == 1 << f,
    );
    let mass: u64 = pset.iter().map(|e| 1u64 << e.a.len()).sum();
    rep.check(format!("sum of 2^|A| = 4^{f}"), mass == 4u64.pow(f as u32));
    let mut dual_ok = true;
    for e in &pset {
        let dual = dual_tuple(&e.forms, &rho)?;
        dual_ok &= ideal_of(&dual, &rho)? == e.ideal && dual_tuple(&dual, &rho)? == e.forms;
    }
    rep.check("lambda* is an involution preserving the ideal", dual_ok);

    let d_rows: Vec<Vec<String>> =
        d.iter().map(|e| vec![join(&e.j, ","), e.forms.to_string(), e.ell.to_string()]).collect();
    let p_rows: Vec<Vec<String>> =
        pset.iter().map(|e| vec![e.forms.to_string(), e.ideal.to_string(), join(&e.a, ",")]).collect();
    rep.table = table(&format!("D for {} f={f}", rho.label()), &["J", "forms", "length"], &d_rows);
    rep.table.push('\n');
    rep.table.push_str(&table("P", &["forms", "ideal", "A"], &p_rows));

    let mut orbit_json = Vec::new();
    if rho.is_semisimple() {
        let r = default_r(&rho, p)?;
        check_generic(&rho, p, &r)?;
        let orbits = delta_orbits(&rho, p, &r)?;
        let total: usize = orbits.iter().map(|o| o.len()).sum();
        rep.check(format!("orbit lengths sum to 2^{f}"), total == 1 << f);
        let mut rows = Vec::new();
        for (k, o) in orbits.iter().enumerate() {
            let sum: i64 = o.s_values().iter().sum();
            rep.check(format!("orbit {k}: sum of s_i = 0 mod p-1"), sum % (p - 1) == 0);
            rep.check(format!("orbit {k}: |J^max| constant"), o.steps.iter().all(|s| s.jmax.len() == o.m));
            for st in &o.steps {
                rows.push(vec![
                    k.to_string(),
                    join(&st.j, ","),
                    join(&st.t, ","),
                    join(&st.jmax, ","),
                    st.s.to_string(),
                ]);
            }
        }
        rep.table.push('\n');
        rep.table.push_str(&table(
            &format!("delta-orbits at p={p}, r=({})", join(&r, ",")),
            &["orbit", "J", "t", "Jmax", "s"],
            &rows,
        ));
        orbit_json = orbits.iter().map(|o| serde_json::to_value(o).expect("orbits serialize")).collect();
    }
    rep.json = json!({ "kind": rho.label(), "f": f, "p": p, "D": d, "P": pset, "orbits": orbit_json });
    Ok(rep)
}

/// Length of `R_q/aR_q` by counting standard monomials in the `q`-variables
/// after inverting the others.
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
        if !local.iter().any(|g| g.iter().zip(&e).all(|(a, b)| a <= b)) {
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
            return count;
        }
    }
}

pub fn cycles(kind: &str, f: usize, seed: u64, oracle: bool) -> Result<Report> {
    let rho = parse_kind(kind, f)?;
    let primes = MinPrime::all(f)?;
    let mut rep = Report::new("cycles");
    let mut rows = Vec::new();
    let mut items = Vec::new();
    let mut modules = Vec::new();
    let mut column = vec![0u64; primes.len()];
    for e in build_p(&rho)? {
        let ideal = MonomialIdeal::from_gens(&e.ideal);
        let c = char_cycle(&MonModule::cyclic(ideal.clone()), f)?;
        rep.check(format!("{}: total 2^|A|", e.forms), c.total() == 1 << e.a.len());
        let (dual, _) = dual_module(&e.ideal);
        rep.check(format!("{}: dual has the same cycle", e.forms), char_cycle(&dual, f)? == c);
        if oracle {
            let ok = primes.iter().all(|q| oracle_mult(&ideal, q) == c.at(q));
            rep.check(format!("{}: oracle multiplicities", e.forms), ok);
        }
        for (k, q) in primes.iter().enumerate() {
            column[k] += c.at(q);
        }
        let mut row = vec![e.forms.to_string(), e.ideal.to_string()];
        row.extend(c.mult.iter().map(u64::to_string));
        row.push(c.total().to_string());
        rows.push(row);
        items.push(json!({ "forms": e.forms, "ideal": e.ideal, "cycle": c.mult, "total": c.total() }));
        modules.push(Piece { chi: vec![rows.len() as i64], ideal });
    }
    let overall: u64 = column.iter().sum();
    rep.check(format!("p_0 column sums to 2^{f}"), column[0] == 1 << f);
    rep.check(format!("all multiplicities sum to 4^{f}"), overall == 4u64.pow(f as u32));
    let mut rng = StdRng::seed_from_u64(seed);
    let mut additive = true;
    for _ in 0..100 {
        let pick: Vec<(Piece, u64)> = modules.iter().map(|m| (m.clone(), rng.gen_range(0..=2))).collect();
        let cut = rng.gen_range(0..=pick.len());
        let m1 = MonModule::from_pieces(pick[..cut].iter().cloned());
        let m2 = MonModule::from_pieces(pick[cut..].iter().cloned());
        let m = m1.direct_sum(&m2);
        additive &= additivity_check(&m1, &m, &m2, f)?;
    }
    rep.check("additivity on random direct sums", additive);

    let labels: Vec<String> = primes.iter().map(MinPrime::label).collect();
    let mut header = vec!["forms", "ideal"];
    header.extend(labels.iter().map(String::as_str));
    header.push("total");
    let mut total_row = vec!["total".to_string(), String::new()];
    total_row.extend(column.iter().map(u64::to_string));
    total_row.push(overall.to_string());
    rows.push(total_row);
    rep.table = table(&format!("characteristic cycles for {} f={f}", rho.label()), &header, &rows);
    rep.json = json!({ "kind": rho.label(), "f": f, "primes": labels, "rows": items, "column_totals": column, "total": overall });
    Ok(rep)
}

/// `θ_i` against `ε Π d_j! Y^{p-1-d}` with `Y^k` formed by pointwise convolution.
fn theta_oracle(fq: &Fq) -> Result<bool> {
    let ga = GroupAlgebra::new(fq);
    let convolve = |x: &[u32], y: &[u32]| -> Vec<u32> {
        let mut out = ga.zero();
        for a in fq.elements() {
            let mut s = 0;
            for b in fq.elements() {
                s = fq.add(s, fq.mul(x[fq.sub(a, b) as usize], y[b as usize]));
            }
            out[a as usize] = s;
        }
        out
    };
    let p = fq.p();
    let f = fq.f();
    for i in 0..fq.q() - 1 {
        let d = fq.digits(i);
        let mut c = if f % 2 == 0 { fq.neg(1) } else { 1 };
        let mut mono = ga.one();
        for (j, &dj) in d.iter().enumerate() {
            for m in 1..=dj {
                c = fq.mul(c, fq.from_int(m as i64));
            }
            let y = ga.y(j as u32);
            for _ in 0..p - 1 - dj {
                mono = convolve(&mono, &y);
            }
        }
        if ga.theta(i)? != ga.scale(c, &mono) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn groupalg(p: u32, f: u32, check: &str, oracle: bool) -> Result<Report> {
    let fq = Fq::new(p, f)?;
    if oracle && fq.q() > 343 {
        bail!("--oracle is limited to q <= 343, got q = {}", fq.q());
    }
    let results: Vec<_> =
        check_suite(p, f, 3 * p as usize)?.into_iter().filter(|c| check == "all" || c.name.contains(check)).collect();
    if results.is_empty() {
        bail!("no check matches {check:?}");
    }
    let mut rep = Report::new("groupalg");
    let mut rows = Vec::new();
    for c in &results {
        rep.check(&c.name, c.pass);
        rows.push(vec![c.name.clone(), if c.pass { "pass" } else { "FAIL" }.to_string(), c.detail.clone()]);
    }
    let mut oracle_json = Value::Null;
    if oracle {
        let ok = theta_oracle(&fq)?;
        rep.check("theta_i by direct convolution", ok);
        rows.push(vec!["theta_i by direct convolution".into(), if ok { "pass" } else { "FAIL" }.into(), String::new()]);
        oracle_json = json!(ok);
    }
    let title = format!("F_{} (p={p}, f={f}), modulus {}", fq.q(), join(&fq.modulus(), ","));
    rep.table = table(&title, &["check", "result", "detail"], &rows);
    rep.json = json!({ "p": p, "f": f, "q": fq.q(), "checks": results, "oracle": oracle_json });
    Ok(rep)
}

const PREC: usize = 40;

pub fn phigamma(kind: &str, f: usize, p: u32, seed: u64) -> Result<Report> {
    let rho = parse_kind(kind, f)?;
    if !rho.is_semisimple() {
        bail!("phigamma needs a semisimple kind (irred or split)");
    }
    let fq = Fq::new(p, 1)?;
    let gammas = default_gammas(p, if p < 7 { 3 } else { 2 })?;
    let r = default_r(&rho, p as i64)?;
    let orbits = delta_orbits(&rho, p as i64, &r)?;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut rep = Report::new("phigamma");
    let mut rows = Vec::new();
    let mut items = Vec::new();
    let mut rank = 0;
    for (k, o) in orbits.iter().enumerate() {
        let (nu, k1) = if seed == 0 { (1, 0) } else { (rng.gen_range(1..p), rng.gen_range(0..p as i64 - 1)) };
        let mu = default_mu(&fq, o, nu);
        let chi = chi_exponents(o, k1);
        let untwisted = build_md_untwisted(&fq, o, &mu, &chi, &gammas, PREC)?;
        let md = twist_n(&untwisted, &r)?;
        let direct = build_md(&fq, o, &mu, &chi, &gammas, PREC)?;
        let s = o.s_values();
        let n = o.len();
        let mut phi = Vec::new();
        for i in 0..n {
            let mono = md.phi_monomial(i);
            let ok = mono == direct.phi_monomial(i)
                && matches!(mono, Some((t, c, e)) if t == (i + 1) % n && fq.mul(c, mu[i]) == 1 && e == s[i]);
            rep.check(format!("orbit {k}: phi(e_{i}) = mu^-1 X^s e_{}", (i + 1) % n), ok);
            let (t, c, e) = mono.ok_or_else(|| anyhow!("phi is not monomial on orbit {k}"))?;
            let lead: Vec<String> =
                md.gammas.iter().map(|g| g.matrix[i][i].coeffs.first().copied().unwrap_or(0).to_string()).collect();
            rows.push(vec![
                k.to_string(),
                i.to_string(),
                format!("{c}*X^{e}*e_{t}"),
                mu[i].to_string(),
                chi[i].to_string(),
                lead.join(","),
            ]);
            phi.push(json!({ "target": t, "coeff": c, "exp": e }));
        }
        rep.check(format!("orbit {k}: étale"), md.etale);
        rep.check(format!("orbit {k}: gamma commutes with phi"), md.commutes()?);
        rank += n;
        items.push(
            json!({ "length": n, "m": o.m_module(), "s": s, "mu": mu, "chi": chi, "phi": phi, "etale": md.etale }),
        );
    }
    rep.check(format!("ranks sum to 2^{f}"), rank == 1 << f);
    let title = format!("(phi,Gamma)-modules for {} f={f} at p={p}, r=({})", rho.label(), join(&r, ","));
    rep.table = table(&title, &["orbit", "i", "phi(e_i)", "mu_i", "k_i", "gamma leading"], &rows);
    rep.json = json!({ "kind": rho.label(), "f": f, "p": p, "r": r, "orbits": items, "rank": rank });
    Ok(rep)
}
