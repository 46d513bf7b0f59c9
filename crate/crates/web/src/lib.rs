//! Browser bindings for the demo page in `www/`. Every function returns a JSON
//! string, or an error message that the page shows as-is.

use std::collections::BTreeSet;

use lgc::conjugacy::{validate, RelClosedSet};
use lgc::cycles::{char_cycle, MinPrime, MonModule, MonomialIdeal};
use lgc::isotypic::{build_system_capped, components as isotypic_components, good_lattice, parabolic_of};
use lgc::serre::{build_p, RhoKind};
use lgc::weyl::{Root, StdParabolic};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Browsers run out of patience long before the CLI cap.
const CAP: u64 = 200_000;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn parabolic(n: usize, levi: &str) -> Result<StdParabolic, String> {
    if n == 0 {
        return Err("n must be positive".into());
    }
    let levi = levi.trim();
    if levi.is_empty() {
        return Ok(StdParabolic::borel(n));
    }
    let blocks = levi
        .split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| format!("bad block size {x:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    if blocks.contains(&0) || blocks.iter().sum::<usize>() != n {
        return Err(format!("{levi} is not a composition of {n}"));
    }
    StdParabolic::from_blocks(&blocks).map_err(err)
}

/// Isotypic components for the Levi with block sizes `levi` (empty for the Borel).
#[wasm_bindgen]
pub fn components(n: usize, f: usize, levi: &str) -> Result<String, String> {
    let p = parabolic(n, levi)?;
    let sys = build_system_capped(n, f, CAP).map_err(err)?;
    let mut rows = Vec::new();
    for c in isotypic_components(&sys, &p).map_err(err)? {
        let info = parabolic_of(&c).map_err(err)?;
        let wc: Vec<String> = info.wc.iter().map(|w| w.perm.to_string()).collect();
        rows.push(json!({
            "blocksums": c.zchar.blocksums,
            "dim": c.dim,
            "lambda_prime": info.lambda_prime.to_string(),
            "pc": info.pc.to_string(),
            "wc": wc,
        }));
    }
    Ok(json!({ "parabolic": p.to_string(), "components": rows }).to_string())
}

/// Constituent graph. `shape` is `full`, `levi`, or extra roots `i-j,...` (1-based).
#[wasm_bindgen]
pub fn diagram(n: usize, f: usize, levi: &str, shape: &str) -> Result<String, String> {
    let p = parabolic(n, levi)?;
    let x = match shape.trim() {
        "" | "full" => RelClosedSet::full(&p),
        "levi" => RelClosedSet::levi_only(&p),
        list => {
            let mut roots: BTreeSet<Root> = p.levi_positive_roots().into_iter().collect();
            for item in list.split(',') {
                let (i, j) = item
                    .trim()
                    .split_once('-')
                    .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
                    .filter(|&(i, j)| i > 0 && j > 0)
                    .ok_or_else(|| format!("bad root {item:?}, expected i-j"))?;
                roots.insert(Root::new(i - 1, j - 1, n).map_err(err)?);
            }
            validate(&p, &roots).map_err(err)?
        }
    };
    let g = good_lattice(&build_system_capped(n, f, CAP).map_err(err)?, &x).map_err(err)?;
    let depth = g.depth();
    let vertices: Vec<_> = g
        .vertices
        .iter()
        .zip(&depth)
        .map(|(v, d)| {
            json!({
                "blocksums": v.zchar.blocksums,
                "tag": v.tag.as_str(),
                "blocks": v.blocks,
                "dim": v.dim,
                "depth": d,
            })
        })
        .collect();
    Ok(json!({ "shape": x.to_string(), "vertices": vertices, "edges": g.edges }).to_string())
}

/// Characteristic cycles of the modules attached to a mod p representation
/// of kind `irred`, `split` or `nonsplit:<J>`.
#[wasm_bindgen]
pub fn cycles(kind: &str, f: usize) -> Result<String, String> {
    let rho = match kind.trim() {
        "irred" => RhoKind::irreducible(f),
        "split" => RhoKind::split(f),
        k => match k.strip_prefix("nonsplit:") {
            Some(j) => {
                let j = j
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.trim().parse::<usize>().map_err(|_| format!("bad index {s:?}")))
                    .collect::<Result<Vec<_>, _>>()?;
                RhoKind::nonsplit(f, j)
            }
            None => return Err(format!("unknown kind {k:?}")),
        },
    }
    .map_err(err)?;
    let primes = MinPrime::all(f).map_err(err)?;
    let mut rows = Vec::new();
    for e in build_p(&rho).map_err(err)? {
        let c = char_cycle(&MonModule::cyclic(MonomialIdeal::from_gens(&e.ideal)), f).map_err(err)?;
        rows.push(json!({ "forms": e.forms.to_string(), "ideal": e.ideal.to_string(), "cycle": c.mult }));
    }
    let labels: Vec<String> = primes.iter().map(MinPrime::label).collect();
    Ok(json!({ "kind": rho.label(), "primes": labels, "rows": rows }).to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: Result<String, String>) -> Value {
        serde_json::from_str(&s.unwrap()).unwrap()
    }

    #[test]
    fn component_counts() {
        assert_eq!(parse(components(3, 1, "2,1"))["components"].as_array().unwrap().len(), 3);
        assert_eq!(parse(components(2, 4, ""))["components"].as_array().unwrap().len(), 5);
        assert!(components(3, 1, "4").is_err());
        // what an empty input box turns into
        assert!(components(0, 0, "").is_err());
        assert!(diagram(0, 1, "", "full").is_err());
        assert!(cycles("irred", 0).is_err());
    }

    #[test]
    fn graphs() {
        let g = parse(diagram(3, 1, "", "full"));
        assert_eq!((g["vertices"].as_array().unwrap().len(), g["edges"].as_array().unwrap().len()), (7, 8));
        let g = parse(diagram(4, 1, "1,2,1", "1-2,1-3,1-4"));
        assert_eq!(g["vertices"].as_array().unwrap().len(), 14);
        assert!(parse(diagram(2, 2, "1,1", "levi"))["edges"].as_array().unwrap().is_empty());
        assert!(diagram(3, 1, "", "2-1").is_err());
        assert!(diagram(6, 4, "", "full").is_err());
    }

    #[test]
    fn cycle_rows() {
        let c = parse(cycles("irred", 2));
        let total: u64 = c["rows"]
            .as_array()
            .unwrap()
            .iter()
            .flat_map(|r| r["cycle"].as_array().unwrap().iter().map(|m| m.as_u64().unwrap()))
            .sum();
        assert_eq!(total, 16);
        assert!(cycles("nonsplit:0", 2).is_ok());
        assert!(cycles("other", 2).is_err());
    }
}
