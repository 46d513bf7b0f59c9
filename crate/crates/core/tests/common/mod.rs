//! Fixtures and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use lgc::conjugacy::*;
use lgc::cycles::{Monomial, MonomialIdeal, Piece};
use lgc::fq::{Elem, Fq, GroupAlgebra};
use lgc::isotypic::*;
use lgc::serre::{mask_elems, RhoKind};
use lgc::weyl::*;
use petgraph::algo::is_isomorphic_matching;
use petgraph::graph::DiGraph;
use rand::rngs::StdRng;
use rand::Rng;

pub type Label = (Tag, Vec<usize>);

pub fn r(i: usize, j: usize) -> Root {
    Root { i: i - 1, j: j - 1 }
}

/// A drawn constituent diagram: covering pairs listed lower vertex first,
/// and vertex labels `name:SS`, `name:PS` or `name:<Levi blocks>`.
pub struct Picture {
    pub name: &'static str,
    pub n: usize,
    pub f: usize,
    pub shape: RelClosedSet,
    pub edges: &'static str,
    pub tags: &'static str,
}

pub fn pictures() -> Vec<Picture> {
    let p121 = StdParabolic::from_blocks(&[1, 2, 1]).unwrap();
    let mut x: BTreeSet<Root> = p121.levi_positive_roots().into_iter().collect();
    x.extend([r(1, 2), r(1, 3), r(1, 4)]);
    vec![
        Picture {
            name: "GL3 over Qp, Borel",
            n: 3,
            f: 1,
            shape: RelClosedSet::full(&StdParabolic::borel(3)),
            edges: "a-b a-d b-e d-e e-f e-h f-i h-i",
            tags: "a:PS b:PS d:PS e:SS f:PS h:PS i:PS",
        },
        Picture {
            name: "GL4 over Qp, Levi (2,1,1)",
            n: 4,
            f: 1,
            shape: RelClosedSet::full(&StdParabolic::from_blocks(&[2, 1, 1]).unwrap()),
            edges: "a-b a-d b-c b-e d-e e-f c-f f-g e-h f-i g-j h-i i-j j-k i-l j-m k-n l-m m-n",
            tags: "a:211 b:31 c:121 d:211 e:SS f:SS g:13 h:31 i:SS j:SS k:112 l:121 m:13 n:112",
        },
        Picture {
            name: "GL4 over Qp, Levi (1,2,1), partial unipotent",
            n: 4,
            f: 1,
            shape: validate(&p121, &x).unwrap(),
            edges: "a-b a-e b-c b-f d-e d-i c-g f-g e-j f-k e-f h-i h-l i-j j-k i-m j-n l-m m-n",
            tags: "a:121 b:31 c:211 d:13 e:SS f:SS g:211 h:112 i:SS j:SS k:31 l:112 m:13 n:121",
        },
        Picture {
            name: "GL3 over Qp2, Borel",
            n: 3,
            f: 2,
            shape: RelClosedSet::full(&StdParabolic::borel(3)),
            edges: "a-b a-d b-c b-e d-e e-f c-f f-g e-h f-i g-j h-i i-j j-k i-l j-m k-n l-m m-n \
                    d-h' h'-h h-l' l'-l l-o m-p n-q o-p p-q",
            tags: "a:PS b:21 c:PS d:12 e:SS f:SS g:12 h':PS h:SS i:SS j:SS k:PS l':21 l:SS m:SS n:21 \
                   o:PS p:12 q:PS",
        },
    ]
}

fn parse_label(n: usize, v: &str) -> Label {
    match v {
        "SS" => (Tag::SS, vec![n]),
        "PS" => (Tag::PS, vec![1; n]),
        _ => (Tag::PI, v.chars().map(|c| c.to_digit(10).unwrap() as usize).collect()),
    }
}

/// Our edges point from a constituent to those in the subrepresentation it
/// generates, so drawn pairs are reversed.
pub fn picture_graph(pic: &Picture) -> DiGraph<Label, ()> {
    let mut d = DiGraph::new();
    let ix: BTreeMap<&str, _> = pic
        .tags
        .split_whitespace()
        .map(|t| {
            let (k, v) = t.split_once(':').unwrap();
            (k, d.add_node(parse_label(pic.n, v)))
        })
        .collect();
    for e in pic.edges.split_whitespace() {
        let (a, b) = e.split_once('-').unwrap();
        d.add_edge(ix[b], ix[a], ());
    }
    d
}

pub fn our_graph(g: &ConstituentGraph) -> DiGraph<Label, ()> {
    let mut d = DiGraph::new();
    let ix: Vec<_> = g.vertices.iter().map(|v| d.add_node((v.tag, v.blocks.clone()))).collect();
    for &(u, v) in &g.edges {
        d.add_edge(ix[u], ix[v], ());
    }
    d
}

pub fn same(a: &DiGraph<Label, ()>, b: &DiGraph<Label, ()>) -> bool {
    is_isomorphic_matching(a, b, |x, y| x == y, |_, _| true)
}

/// Good equivalence by search over all of S_n.
pub fn brute_equivalent(s1: &RelClosedSet, s2: &RelClosedSet) -> bool {
    let n = s1.rank();
    Perm::all(n).into_iter().any(|w| {
        let levi_ok = w.map_simple(s1.parabolic().simple()).as_ref() == Some(s2.parabolic().simple());
        let img: BTreeSet<Root> = s1.roots().iter().map(|r| w.act_root(r)).collect();
        levi_ok && img.iter().all(Root::is_positive) && img == *s2.roots()
    })
}

pub fn compositions(n: u64) -> Vec<Vec<u64>> {
    (0..1u64 << (n - 1))
        .map(|mask| {
            let mut out = vec![];
            let mut cur = 1;
            for b in 0..n - 1 {
                if mask >> b & 1 == 1 {
                    out.push(cur);
                    cur = 1;
                } else {
                    cur += 1;
                }
            }
            out.push(cur);
            out
        })
        .collect()
}

pub fn all_kinds(f: usize) -> Vec<RhoKind> {
    let mut v = vec![RhoKind::irreducible(f).unwrap(), RhoKind::split(f).unwrap()];
    for m in 0..1u32 << f {
        v.push(RhoKind::nonsplit(f, mask_elems(m, f)).unwrap());
    }
    v
}

/// `Y^k` in `F[F_q]` by repeated convolution with the `Y_j`.
pub fn naive_monomial(fq: &Fq, k: &[u32]) -> Vec<Elem> {
    let ga = GroupAlgebra::new(fq);
    let mut out = ga.one();
    for (j, &e) in k.iter().enumerate() {
        let y = ga.y(j as u32);
        for _ in 0..e {
            let mut next = ga.zero();
            for a in fq.elements() {
                let mut s = 0;
                for b in fq.elements() {
                    s = fq.add(s, fq.mul(out[fq.sub(a, b) as usize], y[b as usize]));
                }
                next[a as usize] = s;
            }
            out = next;
        }
    }
    out
}

/// `θ_i = ε Π_j (d_j)! Y_j^{p-1-d_j}` checked by convolution for every `i < q-1`.
pub fn theta_matches_naive(p: u32, f: u32) -> Result<(), String> {
    let fq = Fq::new(p, f).unwrap();
    let ga = GroupAlgebra::new(&fq);
    for i in 0..fq.q() - 1 {
        let d = fq.digits(i);
        let c = d.iter().fold(if f % 2 == 0 { fq.neg(1) } else { 1 }, |acc, &x| {
            (1..=x).fold(acc, |a, m| fq.mul(a, fq.from_int(m as i64)))
        });
        let k: Vec<u32> = d.iter().map(|&x| p - 1 - x).collect();
        if ga.theta(i).unwrap() != ga.scale(c, &naive_monomial(&fq, &k)) {
            return Err(format!("theta_{i} for p={p} f={f}"));
        }
    }
    Ok(())
}

/// `Σ_{a ∈ F_p^×} a^{-1} (1+X)^{ã}` mod `(p, X^prec)`, with `ã` the root of
/// unity lifting `a` found by search in `Z/p^m`, and `(1+X)^ã` by squaring.
pub fn brute_y_in_x(p: u64, prec: usize) -> Vec<u64> {
    let mut m = 1;
    while p.pow(m) < prec as u64 {
        m += 1;
    }
    let pm = p.pow(m);
    let powmod = |mut b: u64, mut e: u64, md: u64| {
        let mut r = 1 % md;
        b %= md;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % md;
            }
            b = b * b % md;
            e >>= 1;
        }
        r
    };
    let mul = |a: &[u64], b: &[u64]| {
        let mut c = vec![0; prec];
        for i in 0..prec {
            for j in 0..prec - i {
                c[i + j] = (c[i + j] + a[i] * b[j]) % p;
            }
        }
        c
    };
    let mut total = vec![0; prec];
    for a in 1..p {
        let lift = (0..pm / p).map(|k| a + k * p).find(|&t| powmod(t, p - 1, pm) == 1).unwrap();
        let mut base = vec![0; prec];
        base[0] = 1;
        base[1] = 1;
        let mut acc = vec![0; prec];
        acc[0] = 1;
        let mut e = lift;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(&acc, &base);
            }
            base = mul(&base, &base);
            e >>= 1;
        }
        let inv = powmod(a, p - 2, p);
        for k in 0..prec {
            total[k] = (total[k] + inv * acc[k]) % p;
        }
    }
    total
}

pub fn random_ideal(rng: &mut StdRng, f: usize) -> MonomialIdeal {
    let k = rng.gen_range(0..=3);
    let gens: Vec<Monomial> = (0..k)
        .map(|_| Monomial {
            y: (0..f).map(|_| rng.gen_range(0..=2)).collect(),
            z: (0..f).map(|_| rng.gen_range(0..=2)).collect(),
        })
        .collect();
    MonomialIdeal::new(f, gens)
}

pub fn random_pieces(rng: &mut StdRng, f: usize) -> Vec<(Piece, u64)> {
    (0..rng.gen_range(1..=6))
        .map(|_| (Piece { chi: vec![rng.gen_range(0..5)], ideal: random_ideal(rng, f) }, rng.gen_range(1..=3)))
        .collect()
}
