//! Pinwheel complex for `Ω⁰`: a collared vertex stratum with the given
//! boundary matrices, two tubes of edge flaps, and the two tile cells.

use std::collections::BTreeMap;

use crate::cellcx::{ComplexBuilder, FilteredComplex};
use crate::intlinalg::{big_vec, solve, IntMatrix};

/// `∂₁` on the vertex stratum, rows `B_R, B_L, S_R, S_L`.
pub const BOUNDARY_1: [[i64; 8]; 4] =
    [[-1, 1, 0, 0, -1, 0, 1, 0], [1, -1, 0, 0, 0, -1, 0, 1], [0, 0, -1, 1, 1, 0, -1, 0], [0, 0, 1, -1, 0, 1, 0, -1]];

/// `∂₂` on the vertex stratum, rows `e1..e8`, columns `f1..f8`.
pub const BOUNDARY_2: [[i64; 8]; 8] = [
    [1, 1, 0, 1, 1, 2, 1, 1],
    [1, 1, 1, 0, 2, 1, 1, 1],
    [1, 1, 1, 0, 2, 1, 1, 1],
    [1, 1, 0, 1, 1, 2, 1, 1],
    [1, 1, 1, 0, 1, 0, 1, 1],
    [1, 1, 0, 1, 0, 1, 1, 1],
    [1, 1, 0, 1, 0, 1, 1, 1],
    [1, 1, 1, 0, 1, 0, 1, 1],
];

const VERTS: [&str; 4] = ["B_R", "B_L", "S_R", "S_L"];

type Chain = BTreeMap<String, i64>;

fn chain(terms: &[(&str, i64)]) -> Chain {
    let mut c = Chain::new();
    for &(id, v) in terms {
        *c.entry(id.to_string()).or_default() += v;
    }
    c.retain(|_, v| *v != 0);
    c
}

fn plus(a: &Chain, b: &Chain, k: i64) -> Chain {
    let mut c = a.clone();
    for (id, v) in b {
        *c.entry(id.clone()).or_default() += k * v;
    }
    c.retain(|_, v| *v != 0);
    c
}

/// A 2-chain on `f1..f8` with boundary `Σ coef·e_i`.
fn filling(edges: &[(usize, i64)]) -> Chain {
    let d2 = IntMatrix::from_rows(&BOUNDARY_2);
    let mut b = [0i64; 8];
    for &(i, v) in edges {
        b[i - 1] += v;
    }
    let x = solve(&d2, &big_vec(&b)).expect("vertex-stratum cycle bounds");
    let mut c = Chain::new();
    for (j, v) in x.iter().enumerate() {
        let v: i64 = v.try_into().expect("small filling");
        if v != 0 {
            c.insert(format!("f{}", j + 1), v);
        }
    }
    c
}

pub fn complex() -> FilteredComplex {
    let mut b = ComplexBuilder::new();
    for v in VERTS.iter().chain(&["RA_R", "RA_L"]) {
        b.cell(*v, 0, 0);
    }
    for i in 1..=8 {
        b.cell(format!("e{i}"), 1, 0);
    }
    b.cell("g1", 1, 0).cell("g2", 1, 0);
    for e in ["H_R", "H_L", "K_R", "K_L"] {
        b.cell(e, 1, 1);
    }
    for i in 1..=8 {
        b.cell(format!("f{i}"), 2, 0);
    }
    b.cell("V_RA", 2, 0);
    for f in ["hA", "hB", "hC", "iA", "iB", "iC"] {
        b.cell(f, 2, 1);
    }
    b.cell("T_R", 2, 2).cell("T_L", 2, 2);

    let mut bd: Vec<(String, Chain)> = Vec::new();
    for j in 0..8 {
        let e = format!("e{}", j + 1);
        let c = (0..4).map(|i| (VERTS[i], BOUNDARY_1[i][j])).collect::<Vec<_>>();
        bd.push((e, chain(&c)));
        let f = format!("f{}", j + 1);
        let names: Vec<String> = (1..=8).map(|i| format!("e{i}")).collect();
        let c = (0..8).map(|i| (names[i].as_str(), BOUNDARY_2[i][j])).collect::<Vec<_>>();
        bd.push((f, chain(&c)));
    }
    bd.push(("g1".into(), chain(&[("RA_L", 1), ("RA_R", -1)])));
    bd.push(("g2".into(), chain(&[("RA_R", 1), ("RA_L", -1)])));
    bd.push(("V_RA".into(), chain(&[("g1", 1), ("g2", 1)])));
    bd.push(("H_R".into(), chain(&[("S_R", 1), ("B_R", -1)])));
    bd.push(("H_L".into(), chain(&[("B_L", 1), ("S_L", -1)])));
    bd.push(("K_R".into(), chain(&[("B_R", 1), ("S_R", -1)])));
    bd.push(("K_L".into(), chain(&[("S_L", 1), ("B_L", -1)])));
    let flaps = [
        ("hA", chain(&[("H_R", 1), ("e3", 1), ("H_L", 1), ("e2", 1), ("e5", 1), ("e7", 1)])),
        ("hB", chain(&[("H_R", 1), ("e7", 1)])),
        ("hC", chain(&[("H_L", 1), ("e8", -1)])),
        ("iA", chain(&[("K_R", 1), ("e1", 1), ("e5", 3), ("e7", 3), ("K_L", 1), ("e4", 1)])),
        ("iB", chain(&[("K_R", 1), ("e5", 2), ("e7", 1)])),
        ("iC", chain(&[("K_L", 1), ("e6", -2), ("e8", -1)])),
    ];
    for (f, c) in &flaps {
        bd.push((f.to_string(), c.clone()));
    }
    bd.push(("T_R".into(), chain(&[("H_R", 1), ("K_R", 1)])));
    bd.push(("T_L".into(), chain(&[("H_L", -1), ("K_L", -1)])));
    for (c, faces) in &bd {
        for (f, v) in faces {
            b.boundary(c, f, *v);
        }
    }

    // flap cycles closed up inside the vertex stratum
    let z_h = plus(&chain(&[("hB", 1), ("hC", 1), ("hA", -1)]), &filling(&[(8, 1), (3, 1), (2, 1), (5, 1)]), 1);
    let z_k = plus(
        &chain(&[("iB", 1), ("iC", 1), ("iA", -1)]),
        &filling(&[(1, 1), (4, 1), (5, 1), (6, 2), (7, 2), (8, 1)]),
        1,
    );
    let y = plus(
        &chain(&[("hB", 1), ("iB", 1), ("hC", -1), ("iC", -1)]),
        &filling(&[(5, -2), (7, -2), (6, -2), (8, -2)]),
        1,
    );

    let mut sig: Vec<(String, Chain)> = Vec::new();
    let swap = |s: &str| if s.ends_with("_R") { s.replace("_R", "_L") } else { s.replace("_L", "_R") };
    for v in VERTS {
        sig.push((v.into(), chain(&[(&swap(v), 1)])));
    }
    sig.push(("RA_R".into(), chain(&[("B_R", 1)])));
    sig.push(("RA_L".into(), chain(&[("B_L", 1)])));
    for i in 1..=8usize {
        let j = if i % 2 == 1 { i + 1 } else { i - 1 };
        sig.push((format!("e{i}"), chain(&[(&format!("e{j}"), 1)])));
        sig.push((format!("f{i}"), chain(&[(&format!("f{j}"), 1)])));
    }
    sig.push(("g1".into(), chain(&[("e1", 1)])));
    sig.push(("g2".into(), chain(&[("e2", 1), ("e3", 1), ("e4", 1)])));
    sig.push(("V_RA".into(), filling(&[(1, 1), (2, 1), (3, 1), (4, 1)])));
    for (e, t) in [("H_R", "H_L"), ("H_L", "H_R"), ("K_R", "K_L"), ("K_L", "K_R")] {
        sig.push((e.into(), chain(&[(t, -1)])));
    }
    let all_edges: Vec<(usize, i64)> = (1..=8).map(|i| (i, 1)).collect();
    let g_a = filling(&all_edges);
    let g_ia = filling(&[(1, 1), (2, 1), (3, 1), (4, 1), (5, 3), (6, 3), (7, 3), (8, 3)]);
    sig.push(("hA".into(), plus(&chain(&[("hA", -1)]), &g_a, 1)));
    sig.push(("hB".into(), plus(&plus(&chain(&[("hC", -1)]), &z_h, 1), &z_k, 3)));
    sig.push(("hC".into(), chain(&[("hB", -1)])));
    sig.push(("iA".into(), plus(&chain(&[("iA", -1)]), &g_ia, 1)));
    sig.push(("iB".into(), plus(&plus(&chain(&[("iC", -1)]), &z_k, 1), &z_h, 1)));
    sig.push(("iC".into(), chain(&[("iB", -1)])));
    sig.push(("T_R".into(), plus(&chain(&[("T_R", 2), ("T_L", 3)]), &y, -2)));
    sig.push(("T_L".into(), plus(&chain(&[("T_R", 3), ("T_L", 2)]), &y, -2)));
    for (c, img) in &sig {
        for (t, v) in img {
            b.endo(c, t, *v);
        }
    }
    b.build().expect("pinwheel cells are consistent")
}
