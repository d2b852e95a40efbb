//! Chair complex built from the substitution on arrow-labelled squares.
//!
//! A point of the plane is described by a product of two one-dimensional
//! positions (`N` inside a tile edge run, `I` interior of a tile, `P`/`Q` the
//! two sides of a tile boundary) and labelled by the tiles it sees.

use std::collections::{BTreeMap, BTreeSet};

use crate::cellcx::{ComplexBuilder, FilteredComplex};

/// Arrows: 0 = NE, 1 = NW, 2 = SW, 3 = SE.
const DIRS: [(i64, i64); 4] = [(1, 1), (-1, 1), (-1, -1), (1, -1)];
const NAMES: [char; 4] = ['A', 'B', 'C', 'D'];

fn arrow_of(v: (i64, i64)) -> u8 {
    DIRS.iter().position(|&d| d == v).expect("diagonal direction") as u8
}

type Patch = BTreeMap<(i64, i64), u8>;

/// Children of a tile, indexed by `(cx, cy)` in `{0,1}²`.
fn children(t: u8) -> [((i64, i64), u8); 4] {
    let v = DIRS[t as usize];
    let mut out = [((0, 0), 0); 4];
    let mut k = 0;
    for cx in 0..2 {
        for cy in 0..2 {
            let w = (if cx == 1 { 1 } else { -1 }, if cy == 1 { 1 } else { -1 });
            let s = if w == v || w == (-v.0, -v.1) { t } else { arrow_of((-w.0, -w.1)) };
            out[k] = ((cx, cy), s);
            k += 1;
        }
    }
    out
}

fn subpatch(p: &Patch) -> Patch {
    let mut q = Patch::new();
    for (&(x, y), &t) in p {
        for ((cx, cy), s) in children(t) {
            q.insert((2 * x + cx, 2 * y + cy), s);
        }
    }
    q
}

/// 2×2 vertex configurations `(NW, NE, SW, SE)` in a patch.
fn configs_of(p: &Patch) -> BTreeSet<[u8; 4]> {
    let mut out = BTreeSet::new();
    for &(x, y) in p.keys() {
        let ks = [(x, y + 1), (x + 1, y + 1), (x, y), (x + 1, y)];
        if ks.iter().all(|k| p.contains_key(k)) {
            out.insert(ks.map(|k| p[&k]));
        }
    }
    out
}

fn config_patch(c: &[u8; 4], origin: (i64, i64)) -> Patch {
    let (x, y) = origin;
    Patch::from([((x, y + 1), c[0]), ((x + 1, y + 1), c[1]), ((x, y), c[2]), ((x + 1, y), c[3])])
}

/// All vertex configurations occurring in chair tilings.
pub fn vertex_configurations() -> BTreeSet<[u8; 4]> {
    let mut set = BTreeSet::new();
    for t in 0..4 {
        set.extend(configs_of(&subpatch(&Patch::from([((0, 0), t)]))));
    }
    loop {
        let mut next = set.clone();
        for c in &set {
            next.extend(configs_of(&subpatch(&config_patch(c, (0, 0)))));
        }
        if next == set {
            return set;
        }
        set = next;
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Kind {
    I,
    N,
    P,
    Q,
}

type Pos = (Kind, i64);

fn seen(c: Pos) -> Vec<i64> {
    match c {
        (Kind::N, i) => vec![i - 1, i],
        (Kind::I, i) | (Kind::P, i) => vec![i],
        (Kind::Q, i) => vec![i - 1],
    }
}

fn dim1(c: Pos) -> usize {
    matches!(c.0, Kind::N | Kind::I) as usize
}

fn bd1(c: Pos) -> Vec<(Pos, i64)> {
    match c {
        (Kind::N, i) => vec![((Kind::P, i), 1), ((Kind::Q, i), -1)],
        (Kind::I, i) => vec![((Kind::Q, i + 1), 1), ((Kind::P, i), -1)],
        _ => vec![],
    }
}

fn sig1(c: Pos) -> Vec<(Pos, i64)> {
    match c {
        (Kind::N, i) => vec![((Kind::N, 2 * i), 1)],
        (Kind::I, i) => vec![((Kind::I, 2 * i), 1), ((Kind::N, 2 * i + 1), 1), ((Kind::I, 2 * i + 1), 1)],
        (k, i) => vec![((k, 2 * i), 1)],
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct Label {
    kx: Kind,
    ky: Kind,
    tiles: Vec<Vec<u8>>,
}

impl Label {
    fn dim(&self) -> usize {
        dim1((self.kx, 0)) + dim1((self.ky, 0))
    }

    fn stratum(&self) -> usize {
        2 - (self.kx != Kind::I) as usize - (self.ky != Kind::I) as usize
    }

    fn id(&self) -> String {
        let k = |k: Kind| match k {
            Kind::I => 'I',
            Kind::N => 'N',
            Kind::P => 'P',
            Kind::Q => 'Q',
        };
        let rows: Vec<String> = self.tiles.iter().map(|r| r.iter().map(|&t| NAMES[t as usize]).collect()).collect();
        format!("{}{}:{}", k(self.kx), k(self.ky), rows.join("/"))
    }
}

fn label(p: &Patch, cx: Pos, cy: Pos) -> Label {
    let cols = seen(cx);
    let rows = seen(cy);
    let tiles = rows.iter().map(|&y| cols.iter().map(|&x| p[&(x, y)]).collect()).collect();
    Label { kx: cx.0, ky: cy.0, tiles }
}

pub fn complex() -> FilteredComplex {
    let xcells: [Pos; 7] =
        [(Kind::N, 0), (Kind::I, -1), (Kind::I, 0), (Kind::P, 0), (Kind::Q, 0), (Kind::P, -1), (Kind::Q, 1)];
    let mut rep: BTreeMap<Label, (Patch, Pos, Pos)> = BTreeMap::new();
    for c in &vertex_configurations() {
        let p = config_patch(c, (-1, -1));
        for &cx in &xcells {
            for &cy in &xcells {
                rep.entry(label(&p, cx, cy)).or_insert_with(|| (p.clone(), cx, cy));
            }
        }
    }
    let mut b = ComplexBuilder::new();
    for l in rep.keys() {
        b.cell(l.id(), l.dim(), l.stratum());
    }
    for (l, (p, cx, cy)) in &rep {
        let dx = dim1(*cx) as i64;
        for (c, s) in bd1(*cx) {
            b.boundary(&l.id(), &label(p, c, *cy).id(), s);
        }
        for (c, s) in bd1(*cy) {
            b.boundary(&l.id(), &label(p, *cx, c).id(), if dx == 1 { -s } else { s });
        }
        let q = subpatch(p);
        for (a, s) in sig1(*cx) {
            for (c, t) in sig1(*cy) {
                b.endo(&l.id(), &label(&q, a, c).id(), s * t);
            }
        }
    }
    b.build().expect("chair cells are consistent")
}
