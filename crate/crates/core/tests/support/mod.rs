//! Random inputs shared by the property suites.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use tilecoh::cellcx::{ComplexBuilder, FilteredComplex};
use tilecoh::indsys::{classify_limit, InductiveSystem};
use tilecoh::intlinalg::IntMatrix;
use tilecoh::onedim::Substitution1D;

pub fn random_matrix(rng: &mut impl Rng, max_dim: usize, bound: i64) -> IntMatrix {
    let r = rng.gen_range(1..=max_dim);
    let c = rng.gen_range(1..=max_dim);
    let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
    IntMatrix::from_rows(&rows)
}

type Simplex = Vec<usize>;

fn faces(s: &Simplex) -> Vec<(Simplex, i64)> {
    (0..s.len())
        .map(|i| {
            let mut f = s.clone();
            f.remove(i);
            (f, if i % 2 == 0 { 1 } else { -1 })
        })
        .collect()
}

fn id(comp: usize, s: &Simplex) -> String {
    let tag = ["v", "e", "t"][s.len() - 1];
    let body: Vec<String> = s.iter().map(|v| v.to_string()).collect();
    format!("c{comp}{tag}{}", body.join("_"))
}

/// Shape of the random self-map.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Identity,
    /// Sum of a per-component scalar, an optional collapse onto a vertex and a
    /// random chain homotopy; always a stratum-preserving chain map.
    Mixed,
}

/// A disjoint union of small random simplicial 2-complexes with a random
/// stratification and a chain map of the requested kind.
pub fn random_complex(rng: &mut impl Rng, kind: MapKind) -> FilteredComplex {
    let mut b = ComplexBuilder::new();
    let mut cells: Vec<Vec<(String, usize)>> = vec![vec![]; 3];
    let mut bd: Vec<(String, String, i64)> = vec![];
    let mut sigma: Vec<(String, String, i64)> = vec![];
    let ncomp = rng.gen_range(1..=3);
    for comp in 0..ncomp {
        let nv = rng.gen_range(2..=5);
        let mut simplices: BTreeSet<Simplex> = BTreeSet::new();
        let mut all_tri = vec![];
        for a in 0..nv {
            for c in a + 1..nv {
                for d in c + 1..nv {
                    all_tri.push(vec![a, c, d]);
                }
            }
        }
        all_tri.shuffle(rng);
        for t in all_tri.into_iter().take(rng.gen_range(0..=3)) {
            simplices.insert(t);
        }
        for a in 0..nv {
            simplices.insert(vec![a]);
            for c in a + 1..nv {
                if rng.gen_bool(0.4) {
                    simplices.insert(vec![a, c]);
                }
            }
        }
        for t in simplices.clone() {
            for (f, _) in faces(&t) {
                if !f.is_empty() {
                    simplices.insert(f);
                }
            }
        }
        // Strata: never below those of the faces.
        let mut stratum = std::collections::BTreeMap::new();
        let mut by_dim: Vec<&Simplex> = simplices.iter().collect();
        by_dim.sort_by_key(|s| s.len());
        for s in by_dim {
            let floor = if s.len() == 1 { 0 } else { faces(s).iter().map(|(f, _)| stratum[f]).max().unwrap() };
            let st = floor.max(rng.gen_range(0..=2));
            stratum.insert(s.clone(), st);
        }
        let base = (0..nv).find(|v| stratum[&vec![*v]] == 0);
        let scalar = if kind == MapKind::Identity { 1 } else { *[0i64, 1, -1, 2, 3, 2].choose(rng).unwrap() };
        let collapse = if kind == MapKind::Identity { 0 } else { rng.gen_range(-1..=1) };
        for s in &simplices {
            let sid = id(comp, s);
            b.cell(sid.clone(), s.len() - 1, stratum[s]);
            cells[s.len() - 1].push((sid.clone(), stratum[s]));
            if s.len() > 1 {
                for (f, sign) in faces(s) {
                    bd.push((sid.clone(), id(comp, &f), sign));
                }
            }
            if scalar != 0 {
                sigma.push((sid.clone(), sid.clone(), scalar));
            }
            if s.len() == 1 && collapse != 0 {
                if let Some(v0) = base {
                    sigma.push((sid.clone(), id(comp, &vec![v0]), collapse));
                }
            }
        }
    }
    // Homotopy h of degree +1 with stratum(h(c)) ≤ stratum(c); add ∂h + h∂.
    let mut h: Vec<(String, String, i64)> = vec![];
    if kind == MapKind::Mixed {
        for d in 0..2 {
            for (c, st) in &cells[d] {
                let up: Vec<&String> = cells[d + 1].iter().filter(|(_, s)| s <= st).map(|(i, _)| i).collect();
                if !up.is_empty() && rng.gen_bool(0.3) {
                    let t = up[rng.gen_range(0..up.len())];
                    h.push((c.clone(), t.clone(), if rng.gen_bool(0.5) { 1 } else { -1 }));
                }
            }
        }
    }
    for (c, t, x) in &h {
        // ∂h: c ↦ x·∂t
        for (cell, face, s) in &bd {
            if cell == t {
                sigma.push((c.clone(), face.clone(), x * s));
            }
        }
    }
    for (cell, face, s) in &bd {
        // h∂: cell ↦ Σ s·h(face)
        for (c, t, x) in &h {
            if c == face {
                sigma.push((cell.clone(), t.clone(), s * x));
            }
        }
    }
    for (cell, face, s) in &bd {
        b.boundary(cell, face, *s);
    }
    for (c, t, x) in &sigma {
        b.endo(c, t, *x);
    }
    b.build().expect("generated complex builds")
}

/// Random primitive substitution on 2 to 4 letters with rules of length 1 to 5
/// whose tile system has a limit expressible as a descriptor.
pub fn random_primitive(rng: &mut impl Rng) -> Substitution1D {
    let letters = ['a', 'b', 'c', 'd'];
    loop {
        let n = rng.gen_range(2..=4);
        let words: Vec<String> =
            (0..n).map(|_| (0..rng.gen_range(1..=5)).map(|_| letters[rng.gen_range(0..n)]).collect()).collect();
        let text: Vec<String> = (0..n).map(|i| format!("{}->{}", letters[i], words[i])).collect();
        if let Ok(s) = Substitution1D::parse(&text.join(",")) {
            let tiles = InductiveSystem::free(s.matrix().transpose());
            if s.is_primitive() && classify_limit(&tiles).classified {
                return s;
            }
        }
    }
}
