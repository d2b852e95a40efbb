//! Cohomology of the rotation hull from that of the quotient by rotations,
//! via the two-row spectral sequence of the circle fibration, plus the
//! rational invariant part and the pinwheel-variant factors.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::cellcx::{DegreeResult, ExtensionProblem};
use crate::error::{Error, Result};
use crate::indsys::{prime_factors, LimitDescriptor, Summand};
use crate::intlinalg::{decimal, kernel_basis, solve, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetricPoints {
    pub order: u64,
    pub count: u64,
}

/// Rotationally symmetric points of `Ω⁰`, one entry per symmetry order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryData {
    pub points: Vec<SymmetricPoints>,
}

impl SymmetryData {
    pub fn single(order: u64, count: u64) -> Self {
        SymmetryData { points: vec![SymmetricPoints { order, count }] }
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for p in &self.points {
            if p.order < 2 {
                return Err(Error::Rotation(format!("symmetry order {} is below 2", p.order)));
            }
            if p.count == 0 {
                return Err(Error::Rotation(format!("order {} listed with no points", p.order)));
            }
            if !seen.insert(p.order) {
                return Err(Error::Rotation(format!("order {} listed twice", p.order)));
            }
        }
        Ok(())
    }
}

/// `d₂ : E_{0,1} → E_{2,0}` sending the generator to an element of this order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct D2Spec {
    pub target_order: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub justification: Option<String>,
}

/// What the `E_{0,1}` generator evaluates to on fibres.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibreEvaluation {
    pub order: u64,
    #[serde(with = "decimal")]
    pub generic: BigInt,
    #[serde(with = "decimal")]
    pub exceptional: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageEntry {
    pub p: usize,
    pub q: usize,
    pub group: LimitDescriptor,
}

/// Two rows `q = 0, 1` and columns `p = 0, 1, 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralPage {
    pub entries: Vec<PageEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d2: Option<D2Spec>,
    pub fibre_evaluation: Vec<FibreEvaluation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub annotations: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl SpectralPage {
    pub fn get(&self, p: usize, q: usize) -> LimitDescriptor {
        self.entries.iter().find(|e| e.p == p && e.q == q).map_or_else(LimitDescriptor::trivial, |e| e.group.clone())
    }

    fn set(&mut self, p: usize, q: usize, g: LimitDescriptor) {
        match self.entries.iter_mut().find(|e| e.p == p && e.q == q) {
            Some(e) => e.group = g,
            None => self.entries.push(PageEntry { p, q, group: g }),
        }
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|e| !e.group.is_trivial()).count()
    }
}

fn cyclic(order: u64, mult: u64) -> LimitDescriptor {
    if mult == 0 {
        LimitDescriptor::trivial()
    } else {
        LimitDescriptor::new(vec![Summand::cyclic(order, mult as usize)])
    }
}

/// The `E²` page from `Ȟ⁰, Ȟ¹, Ȟ²` of `Ω⁰`.
pub fn e2_page(h_omega0: &[LimitDescriptor], sym: &SymmetryData) -> Result<SpectralPage> {
    if h_omega0.len() != 3 {
        return Err(Error::Rotation(format!("expected 3 cohomology groups of the quotient, got {}", h_omega0.len())));
    }
    sym.validate()?;
    let mut page =
        SpectralPage { entries: vec![], d2: None, fibre_evaluation: vec![], annotations: vec![], warnings: vec![] };
    for q in 0..2 {
        for (p, h) in h_omega0.iter().enumerate() {
            page.set(p, q, h.clone());
        }
    }
    let mut e11 = page.get(1, 1);
    for pt in &sym.points {
        e11 = e11.direct_sum(&cyclic(pt.order, pt.count - 1));
        page.fibre_evaluation.push(FibreEvaluation {
            order: pt.order,
            generic: BigInt::from(pt.order),
            exceptional: BigInt::one(),
        });
    }
    e11.annotations.clear();
    page.set(1, 1, e11);
    if sym.points.len() > 1 {
        page.annotations.push("several symmetry orders: torsion of E_{1,1} extrapolated order by order".into());
    }
    Ok(page)
}

/// `E^∞` from `E²`. Without a given `d₂` is taken to be zero, with a warning
/// whenever `E_{2,0}` has torsion.
pub fn apply_d2(page: &SpectralPage, given: Option<&D2Spec>) -> Result<SpectralPage> {
    let mut out = page.clone();
    let e20 = page.get(2, 0);
    let Some(given) = given else {
        if e20.has_torsion() {
            out.warnings.push(format!(
                "E_{{2,0}} = {e20} has torsion and no d2 was supplied; d2 = 0 assumed, the page may be wrong"
            ));
        }
        return Ok(out);
    };
    let t = BigInt::from(given.target_order);
    if given.target_order < 2 {
        return Err(Error::Rotation("d2 target order must be at least 2".into()));
    }
    let e01 = page.get(0, 1);
    if e01.free_rank() == 0 {
        return Err(Error::Rotation("E_{0,1} has no free generator for d2 to act on".into()));
    }
    // the cyclic summand receiving the generator: smallest order divisible by t
    let mut summands = e20.summands.clone();
    let hit = summands
        .iter()
        .enumerate()
        .filter_map(|(i, s)| match s {
            Summand::Cyclic { order, .. } if order.is_multiple_of(&t) => Some((i, order.clone())),
            _ => None,
        })
        .min_by(|a, b| a.1.cmp(&b.1));
    let Some((i, order)) = hit else {
        return Err(Error::Rotation(format!(
            "d2 must target a torsion element of order {t}, but E_{{2,0}} = {e20} has none"
        )));
    };
    let Summand::Cyclic { multiplicity, .. } = summands[i].clone() else { unreachable!() };
    if multiplicity > 1 {
        summands[i] = Summand::cyclic(order.clone(), multiplicity - 1);
    } else {
        summands.remove(i);
    }
    let rest = &order / &t;
    if !rest.is_one() {
        summands.push(Summand::cyclic(rest, 1));
    }
    out.set(2, 0, LimitDescriptor::new(summands));
    // the kernel is t·Z inside E_{0,1}: same group, generator scaled by t
    for f in &mut out.fibre_evaluation {
        f.generic *= &t;
        f.exceptional *= &t;
    }
    out.d2 = Some(given.clone());
    out.annotations.push(format!("d2 sends the E_{{0,1}} generator to an element of order {t}"));
    if let Some(j) = &given.justification {
        out.annotations.push(j.clone());
    }
    Ok(out)
}

/// `Ȟ⁰ … Ȟ³` of the rotation hull from the `E^∞` page.
pub fn assemble_rot(page: &SpectralPage) -> Vec<DegreeResult> {
    let mut out = Vec::new();
    for k in 0..4 {
        let sub = page.get(k, 0);
        let quo = if k == 0 { LimitDescriptor::trivial() } else { page.get(k - 1, 1) };
        let r = if quo.is_trivial() {
            DegreeResult::Group { descriptor: sub }
        } else if sub.is_trivial() {
            DegreeResult::Group { descriptor: quo }
        } else if quo.is_torsion_free() {
            DegreeResult::Group { descriptor: sub.direct_sum(&quo).with_annotation("quotient torsion-free: splits") }
        } else if k == 2 && sub.is_torsion_free() {
            DegreeResult::Group {
                descriptor: sub.direct_sum(&quo).with_annotation("E_{2,0} torsion-free: degree 2 splits"),
            }
        } else {
            DegreeResult::Extension {
                problem: ExtensionProblem {
                    sub,
                    quo,
                    degree: k,
                    context: format!("degree {k} of the rotation hull: E_{{{k},0}} then E_{{{},1}}", k - 1),
                    resolution: None,
                },
            }
        };
        out.push(r);
    }
    out
}

/// Input of the rotation pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationInput {
    /// Canonical text forms of `Ȟ⁰, Ȟ¹, Ȟ²` of `Ω⁰`.
    pub h_omega0: Vec<String>,
    pub symmetric_points: Vec<SymmetricPoints>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d2: Option<D2Spec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationReport {
    pub h_omega0: Vec<LimitDescriptor>,
    pub e2: SpectralPage,
    pub e_inf: SpectralPage,
    pub h_rot: Vec<DegreeResult>,
    /// Rational ranks of `Ȟ^k` of the rotation hull and of `Ω⁰ × S¹`.
    pub rank_check: Vec<(usize, usize)>,
}

impl RotationReport {
    pub fn ranks_consistent(&self) -> bool {
        self.rank_check.iter().all(|(a, b)| a == b)
    }
}

pub fn run_rotation(input: &RotationInput) -> Result<RotationReport> {
    let h = input.h_omega0.iter().map(|t| LimitDescriptor::parse(t)).collect::<Result<Vec<_>>>()?;
    let sym = SymmetryData { points: input.symmetric_points.clone() };
    let e2 = e2_page(&h, &sym)?;
    let e_inf = apply_d2(&e2, input.d2.as_ref())?;
    let h_rot = assemble_rot(&e_inf);
    let rank = |d: &DegreeResult| match d {
        DegreeResult::Group { descriptor } => descriptor.free_rank(),
        DegreeResult::Extension { problem } => problem.sub.free_rank() + problem.quo.free_rank(),
    };
    let rank_check = (0..4)
        .map(|k| {
            let lhs = rank(&h_rot[k]);
            let here = h.get(k).map_or(0, LimitDescriptor::free_rank);
            let below = if k == 0 { 0 } else { h.get(k - 1).map_or(0, LimitDescriptor::free_rank) };
            (lhs, here + below)
        })
        .collect();
    Ok(RotationReport { h_omega0: h, e2, e_inf, h_rot, rank_check })
}

/// One cohomology group with a finite-order action of the rotation generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationAction {
    pub dimension: usize,
    pub order: u64,
    pub matrix: IntMatrix,
}

/// Dimensions of the fixed subspaces over the rationals.
pub fn invariant_part_rational(actions: &[RotationAction]) -> Result<Vec<usize>> {
    actions
        .iter()
        .map(|a| {
            let m = &a.matrix;
            if m.rows() != a.dimension || m.cols() != a.dimension {
                return Err(Error::Rotation(format!("action matrix is not {0}x{0}", a.dimension)));
            }
            if a.order == 0 || m.pow(a.order as u32) != IntMatrix::identity(a.dimension) {
                return Err(Error::Rotation(format!("action matrix does not have order dividing {}", a.order)));
            }
            Ok(a.dimension - m.sub(&IntMatrix::identity(a.dimension)).rank())
        })
        .collect()
}

/// Basis of the fixed lattice and the action restricted to it.
pub fn restrict_to_fixed(a: &RotationAction) -> Result<RotationAction> {
    let n = a.dimension;
    let k = kernel_basis(&a.matrix.sub(&IntMatrix::identity(n)));
    let img = a.matrix.mul(&k);
    let cols = (0..k.cols())
        .map(|j| solve(&k, &img.col(j)).ok_or_else(|| Error::Rotation("fixed lattice not invariant".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(RotationAction { dimension: k.cols(), order: a.order, matrix: IntMatrix::from_columns(k.cols(), &cols) })
}

/// Edge and tile factors of the `(m, n)` pinwheel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariantFactors {
    pub m: i64,
    pub n: i64,
    pub edge_factor: i64,
    pub tile_factor: i64,
    /// `Z[1/edge]^2` contribution.
    pub edge_contribution: LimitDescriptor,
    /// `Z[1/|tile|]` contribution (plain `Z` when `|tile| = 1`).
    pub tile_contribution: LimitDescriptor,
}

fn localized(f: i64, rank: usize) -> LimitDescriptor {
    let a = f.unsigned_abs();
    if a <= 1 {
        LimitDescriptor::free(rank)
    } else {
        LimitDescriptor::new(vec![Summand::localized(a, rank)])
    }
}

pub fn pinwheel_variant_factors(m: i64, n: i64) -> Result<VariantFactors> {
    if n < 1 || m <= n || m.gcd(&n) != 1 {
        return Err(Error::Rotation(format!("variant ({m},{n}) needs m > n >= 1 coprime")));
    }
    let s = m * m + n * n;
    let edge = s - 2 * (m - n).abs();
    let tile = s - 2 * (m + n);
    if edge == 0 || tile == 0 {
        return Err(Error::Rotation(format!("variant ({m},{n}) has a vanishing factor")));
    }
    Ok(VariantFactors {
        m,
        n,
        edge_factor: edge,
        tile_factor: tile,
        edge_contribution: localized(edge, 2),
        tile_contribution: localized(tile, 1),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariantComparison {
    pub variants: Vec<VariantFactors>,
    /// Index pairs whose contributions are non-isomorphic.
    pub distinguished: Vec<(usize, usize)>,
    pub conclusion: String,
}

fn prime_support(v: &VariantFactors) -> Vec<Vec<BigInt>> {
    let mut out = vec![
        prime_factors(&BigInt::from(v.edge_factor).abs()),
        prime_factors(&BigInt::from(v.edge_factor).abs()),
        prime_factors(&BigInt::from(v.tile_factor).abs()),
    ];
    out.sort();
    out
}

/// Two variants are told apart when their contributions invert different primes.
pub fn compare_variants(vs: &[VariantFactors]) -> VariantComparison {
    let mut distinguished = Vec::new();
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            if prime_support(&vs[i]) != prime_support(&vs[j]) {
                distinguished.push((i, j));
            }
        }
    }
    let pairs = vs.len() * vs.len().saturating_sub(1) / 2;
    let name = |v: &VariantFactors| format!("({},{})", v.m, v.n);
    let conclusion = if vs.len() < 2 {
        "single variant: nothing to compare".to_string()
    } else if distinguished.len() == pairs {
        let names: Vec<String> = vs.iter().map(name).collect();
        format!("distinguished: the {} pinwheel spaces are not homeomorphic", names.join(" and "))
    } else {
        let same: Vec<String> = (0..vs.len())
            .flat_map(|i| (i + 1..vs.len()).map(move |j| (i, j)))
            .filter(|p| !distinguished.contains(p))
            .map(|(i, j)| format!("{} ~ {}", name(&vs[i]), name(&vs[j])))
            .collect();
        format!("not distinguished by these factors: {}", same.join(", "))
    };
    VariantComparison { variants: vs.to_vec(), distinguished, conclusion }
}
