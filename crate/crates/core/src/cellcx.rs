//! Filtered cellular complexes with a stratum-preserving cellular endomorphism.
//!
//! Cohomology of strata and pairs is computed on eventual-range subcomplexes
//! as inductive systems, and the pair long exact sequences are spliced into
//! per-stratum answers.

pub mod json;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::abgroups::{cochain_cohomology, Subquotient};
use crate::error::{Error, Result};
use crate::indsys::{
    classify_limit, cokernel_system, image_system_data, kernel_system, kernel_system_data, InductiveSystem,
    LimitDescriptor, Summand, SystemHom,
};
use crate::intlinalg::{column_hnf, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub id: String,
    pub dim: usize,
    pub stratum: usize,
}

/// Cells graded by dimension, boundary and endomorphism matrices per dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplex {
    cells: Vec<Vec<Cell>>,
    /// `boundary[k]` is `∂_k`, of shape `n_{k−1} × n_k` (`boundary[0]` is `0 × n₀`).
    boundary: Vec<IntMatrix>,
    endo: Vec<IntMatrix>,
    stratum_count: usize,
    index: HashMap<String, (usize, usize)>,
}

/// Incremental construction by cell ids.
#[derive(Clone, Debug, Default)]
pub struct ComplexBuilder {
    cells: Vec<Cell>,
    boundary: Vec<(String, String, BigInt)>,
    endo: Vec<(String, String, BigInt)>,
}

impl ComplexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cell(&mut self, id: impl Into<String>, dim: usize, stratum: usize) -> &mut Self {
        self.cells.push(Cell { id: id.into(), dim, stratum });
        self
    }

    /// Adds `coef · face` to the boundary of `cell`.
    pub fn boundary(&mut self, cell: &str, face: &str, coef: i64) -> &mut Self {
        self.boundary_big(cell, face, BigInt::from(coef))
    }

    pub fn boundary_big(&mut self, cell: &str, face: &str, coef: BigInt) -> &mut Self {
        self.boundary.push((cell.to_string(), face.to_string(), coef));
        self
    }

    /// Adds `coef · target` to the image of `cell` under the endomorphism.
    pub fn endo(&mut self, cell: &str, target: &str, coef: i64) -> &mut Self {
        self.endo_big(cell, target, BigInt::from(coef))
    }

    pub fn endo_big(&mut self, cell: &str, target: &str, coef: BigInt) -> &mut Self {
        self.endo.push((cell.to_string(), target.to_string(), coef));
        self
    }

    /// Assembles the matrices. Fails on unknown ids, duplicate ids or entries
    /// linking cells of the wrong dimensions; chain-level axioms are left to
    /// [`FilteredComplex::validate`].
    pub fn build(&self) -> Result<FilteredComplex> {
        let top = self.cells.iter().map(|c| c.dim + 1).max().unwrap_or(0);
        let mut cells: Vec<Vec<Cell>> = vec![vec![]; top];
        let mut index = HashMap::new();
        for c in &self.cells {
            if index.insert(c.id.clone(), (c.dim, cells[c.dim].len())).is_some() {
                return Err(Error::InvalidComplex(format!("duplicate cell id `{}`", c.id)));
            }
            cells[c.dim].push(c.clone());
        }
        let n: Vec<usize> = cells.iter().map(Vec::len).collect();
        let lookup =
            |id: &str| index.get(id).copied().ok_or_else(|| Error::InvalidComplex(format!("unknown cell id `{id}`")));
        let mut boundary: Vec<IntMatrix> =
            (0..top).map(|k| IntMatrix::zeros(if k == 0 { 0 } else { n[k - 1] }, n[k])).collect();
        for (c, f, v) in &self.boundary {
            let (dc, ic) = lookup(c)?;
            let (df, jf) = lookup(f)?;
            if dc == 0 || df + 1 != dc {
                return Err(Error::InvalidComplex(format!("boundary of `{c}` (dim {dc}) lists `{f}` of dim {df}")));
            }
            boundary[dc].add_to(jf, ic, v);
        }
        let mut endo: Vec<IntMatrix> = n.iter().map(|&m| IntMatrix::zeros(m, m)).collect();
        for (c, t, v) in &self.endo {
            let (dc, ic) = lookup(c)?;
            let (dt, jt) = lookup(t)?;
            if dc != dt {
                return Err(Error::InvalidComplex(format!("endomorphism sends `{c}` (dim {dc}) to `{t}` (dim {dt})")));
            }
            endo[dc].add_to(jt, ic, v);
        }
        let stratum_count = self.cells.iter().map(|c| c.stratum + 1).max().unwrap_or(0);
        Ok(FilteredComplex { cells, boundary, endo, stratum_count, index })
    }
}

/// Outcome of [`FilteredComplex::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    /// First violation found, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cell: Option<String>,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    BoundarySquare,
    ChainMap,
    StratumEndo,
    StratumBoundary,
}

/// A set of cells, as membership flags per dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellSet {
    members: Vec<Vec<bool>>,
}

impl CellSet {
    pub fn contains(&self, dim: usize, i: usize) -> bool {
        self.members.get(dim).is_some_and(|m| m[i])
    }

    pub fn counts(&self) -> Vec<usize> {
        self.members.iter().map(|m| m.iter().filter(|&&b| b).count()).collect()
    }

    pub fn indices(&self, dim: usize) -> Vec<usize> {
        self.members.get(dim).map_or(vec![], |m| (0..m.len()).filter(|&i| m[i]).collect())
    }

    pub fn is_subset(&self, other: &CellSet) -> bool {
        self.members.iter().zip(&other.members).all(|(a, b)| a.iter().zip(b).all(|(x, y)| !x || *y))
    }

    pub fn intersect(&self, other: &CellSet) -> CellSet {
        let members = self
            .members
            .iter()
            .zip(&other.members)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| *x && *y).collect())
            .collect();
        CellSet { members }
    }

    pub fn minus(&self, other: &CellSet) -> CellSet {
        let members = self
            .members
            .iter()
            .zip(&other.members)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| *x && !*y).collect())
            .collect();
        CellSet { members }
    }
}

impl FilteredComplex {
    pub fn top_dim(&self) -> Option<usize> {
        self.cells.len().checked_sub(1)
    }

    pub fn stratum_count(&self) -> usize {
        self.stratum_count
    }

    pub fn cells(&self, dim: usize) -> &[Cell] {
        self.cells.get(dim).map_or(&[], |v| v.as_slice())
    }

    pub fn all_cells(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().flatten()
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn cell_index(&self, id: &str) -> Option<(usize, usize)> {
        self.index.get(id).copied()
    }

    /// `∂_k`, shape `n_{k−1} × n_k`.
    pub fn boundary(&self, k: usize) -> IntMatrix {
        match self.boundary.get(k) {
            Some(m) => m.clone(),
            None => IntMatrix::zeros(self.cells(k.saturating_sub(1)).len(), 0),
        }
    }

    /// `σ̃_k`, shape `n_k × n_k`.
    pub fn endo(&self, k: usize) -> IntMatrix {
        self.endo.get(k).cloned().unwrap_or_else(|| IntMatrix::zeros(0, 0))
    }

    fn ndims(&self) -> usize {
        self.cells.len()
    }

    /// Checks `∂∂ = 0`, `∂σ̃ = σ̃∂` and that σ̃ and ∂ never raise the stratum.
    pub fn validate(&self) -> ValidationReport {
        let fail = |kind, degree, cell: Option<&Cell>, detail: String| ValidationReport {
            valid: false,
            violation: Some(Violation { kind, degree, cell: cell.map(|c| c.id.clone()), detail }),
        };
        for k in 2..self.ndims() {
            let p = self.boundary[k - 1].mul(&self.boundary[k]);
            if let Some(j) = (0..p.cols()).find(|&j| (0..p.rows()).any(|i| !p.get(i, j).is_zero())) {
                return fail(
                    ViolationKind::BoundarySquare,
                    k,
                    Some(&self.cells[k][j]),
                    format!("boundary of boundary is nonzero in degree {k}"),
                );
            }
        }
        for k in 1..self.ndims() {
            let lhs = self.boundary[k].mul(&self.endo[k]);
            let rhs = self.endo[k - 1].mul(&self.boundary[k]);
            if let Some(j) = (0..lhs.cols()).find(|&j| (0..lhs.rows()).any(|i| lhs.get(i, j) != rhs.get(i, j))) {
                return fail(
                    ViolationKind::ChainMap,
                    k,
                    Some(&self.cells[k][j]),
                    format!("endomorphism does not commute with the boundary in degree {k}"),
                );
            }
        }
        for k in 0..self.ndims() {
            for (j, c) in self.cells[k].iter().enumerate() {
                for i in 0..self.cells[k].len() {
                    if !self.endo[k].get(i, j).is_zero() && self.cells[k][i].stratum > c.stratum {
                        return fail(
                            ViolationKind::StratumEndo,
                            k,
                            Some(c),
                            format!("image contains `{}` of higher stratum", self.cells[k][i].id),
                        );
                    }
                }
                if k > 0 {
                    for i in 0..self.cells[k - 1].len() {
                        if !self.boundary[k].get(i, j).is_zero() && self.cells[k - 1][i].stratum > c.stratum {
                            return fail(
                                ViolationKind::StratumBoundary,
                                k,
                                Some(c),
                                format!("boundary contains `{}` of higher stratum", self.cells[k - 1][i].id),
                            );
                        }
                    }
                }
            }
        }
        ValidationReport { valid: true, violation: None }
    }

    /// Errors unless [`validate`](Self::validate) passes.
    pub fn ensure_valid(&self) -> Result<()> {
        match self.validate().violation {
            None => Ok(()),
            Some(v) => Err(Error::InvalidComplex(format!(
                "{} at degree {}{}",
                v.detail,
                v.degree,
                v.cell.map(|c| format!(", cell `{c}`")).unwrap_or_default()
            ))),
        }
    }

    fn empty_set(&self) -> CellSet {
        CellSet { members: self.cells.iter().map(|v| vec![false; v.len()]).collect() }
    }

    /// Cells of stratum at most `k`.
    pub fn stratum_cells(&self, k: usize) -> CellSet {
        CellSet { members: self.cells.iter().map(|v| v.iter().map(|c| c.stratum <= k).collect()).collect() }
    }

    /// Smallest subcomplex containing `set`.
    pub fn closure(&self, set: &CellSet) -> CellSet {
        let mut out = set.clone();
        for k in (1..self.ndims()).rev() {
            for j in 0..self.cells[k].len() {
                if out.members[k][j] {
                    for i in 0..self.cells[k - 1].len() {
                        if !self.boundary[k].get(i, j).is_zero() {
                            out.members[k - 1][i] = true;
                        }
                    }
                }
            }
        }
        out
    }

    /// Closure of the union of supports of σ̃ on `set`.
    pub fn image(&self, set: &CellSet) -> CellSet {
        let mut out = self.empty_set();
        for k in 0..self.ndims() {
            for j in 0..self.cells[k].len() {
                if set.members[k][j] {
                    for i in 0..self.cells[k].len() {
                        if !self.endo[k].get(i, j).is_zero() {
                            out.members[k][i] = true;
                        }
                    }
                }
            }
        }
        self.closure(&out)
    }

    /// The stable image `(S_k)_ER` of the stratum-`≤ k` subcomplex under σ̃.
    pub fn eventual_range_cells(&self, k: usize) -> CellSet {
        let mut cur = self.closure(&self.stratum_cells(k));
        loop {
            let next = self.image(&cur);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Relative cochain data of a pair of subcomplexes `(X, A)`.
    pub fn pair_cochains(&self, x: &CellSet, a: &CellSet) -> Result<PairCochains> {
        let rel = x.minus(a);
        let idx: Vec<Vec<usize>> = (0..self.ndims()).map(|k| rel.indices(k)).collect();
        let dims: Vec<usize> = idx.iter().map(Vec::len).collect();
        let deltas: Vec<IntMatrix> = (0..self.ndims().saturating_sub(1))
            .map(|k| self.boundary[k + 1].select(&idx[k], &idx[k + 1]).transpose())
            .collect();
        let endo: Vec<IntMatrix> =
            (0..self.ndims()).map(|k| self.endo[k].select(&idx[k], &idx[k]).transpose()).collect();
        let groups = cochain_cohomology(&dims, &deltas)?;
        let systems =
            groups.iter().zip(&endo).map(|(g, e)| InductiveSystem::on_subquotient(g, e)).collect::<Result<Vec<_>>>()?;
        Ok(PairCochains { cells: idx, deltas, endo, groups, systems })
    }

    /// Cohomology systems of `(S_k)_ER`.
    pub fn stratum_systems(&self, k: usize) -> Result<PairCochains> {
        let x = self.eventual_range_cells(k);
        self.pair_cochains(&x, &self.empty_set())
    }

    /// Relative systems of `((S_k)_ER, S_{k−1} ∩ (S_k)_ER)`.
    pub fn pair_systems(&self, k: usize) -> Result<PairCochains> {
        assert!(k >= 1);
        let x = self.eventual_range_cells(k);
        let a = self.stratum_cells(k - 1).intersect(&x);
        self.pair_cochains(&x, &a)
    }

    /// Relative systems of `((S_k)_ER, (S_{k−1})_ER)`.
    pub fn pair_systems_er(&self, k: usize) -> Result<PairCochains> {
        assert!(k >= 1);
        let x = self.eventual_range_cells(k);
        let a = self.eventual_range_cells(k - 1);
        self.pair_cochains(&x, &a)
    }

    /// The three maps of the long exact sequence of `(X, A)` in each degree.
    pub fn pair_les(&self, x: &CellSet, a: &CellSet) -> Result<PairLes> {
        if !a.is_subset(x) {
            return Err(Error::InvalidComplex("pair: A is not contained in X".into()));
        }
        let rel = self.pair_cochains(x, a)?;
        let abs = self.pair_cochains(x, &self.empty_set())?;
        let sub = self.pair_cochains(a, &self.empty_set())?;
        let nd = self.ndims();
        let pos = |outer: &[usize], inner: &[usize]| -> Vec<usize> {
            inner.iter().map(|c| outer.iter().position(|o| o == c).expect("subset")).collect()
        };
        let mut to_abs = Vec::new();
        let mut restrict = Vec::new();
        let mut connecting = Vec::new();
        for k in 0..nd {
            // relative cochains extend by zero into X
            let p = pos(&abs.cells[k], &rel.cells[k]);
            let mut m = IntMatrix::zeros(abs.cells[k].len(), rel.cells[k].len());
            for (j, &i) in p.iter().enumerate() {
                m.set(i, j, BigInt::one());
            }
            to_abs.push(system_map(&rel, &abs, k, k, &m)?);
            let p = pos(&abs.cells[k], &sub.cells[k]);
            let mut m = IntMatrix::zeros(sub.cells[k].len(), abs.cells[k].len());
            for (i, &j) in p.iter().enumerate() {
                m.set(i, j, BigInt::one());
            }
            restrict.push(system_map(&abs, &sub, k, k, &m)?);
            if k + 1 < nd {
                // extend an A-cocycle by zero, apply δ_X, keep the X∖A part
                let m = self.boundary[k + 1].select(&sub.cells[k], &rel.cells[k + 1]).transpose();
                connecting.push(system_map(&sub, &rel, k, k + 1, &m)?);
            }
        }
        Ok(PairLes { relative: rel, absolute: abs, subspace: sub, to_absolute: to_abs, restrict, connecting })
    }
}

fn system_map(src: &PairCochains, dst: &PairCochains, ks: usize, kd: usize, m: &IntMatrix) -> Result<SystemHom> {
    let mat = src.groups[ks].induced(&dst.groups[kd], m)?;
    SystemHom::new(src.systems[ks].clone(), dst.systems[kd].clone(), mat)
}

/// Cochain complex of a pair with its cohomology systems.
#[derive(Clone, Debug)]
pub struct PairCochains {
    /// Per dimension, indices of the cells carrying cochains.
    pub cells: Vec<Vec<usize>>,
    pub deltas: Vec<IntMatrix>,
    /// Cochain-level σ̃* per dimension.
    pub endo: Vec<IntMatrix>,
    pub groups: Vec<Subquotient>,
    pub systems: Vec<InductiveSystem>,
}

impl PairCochains {
    pub fn limits(&self) -> Vec<LimitDescriptor> {
        self.systems.iter().map(classify_limit).collect()
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }
}

/// `⋯ → H^q(X,A) → H^q(X) → H^q(A) → H^{q+1}(X,A) → ⋯` as system maps.
#[derive(Clone, Debug)]
pub struct PairLes {
    pub relative: PairCochains,
    pub absolute: PairCochains,
    pub subspace: PairCochains,
    pub to_absolute: Vec<SystemHom>,
    pub restrict: Vec<SystemHom>,
    /// `connecting[q] : H^q(A) → H^{q+1}(X, A)`.
    pub connecting: Vec<SystemHom>,
}

impl PairLes {
    /// The maps in sequence order, starting at `H⁰(X,A) → H⁰(X)`.
    pub fn sequence(&self) -> Vec<&SystemHom> {
        let mut out = Vec::new();
        for q in 0..self.to_absolute.len() {
            out.push(&self.to_absolute[q]);
            out.push(&self.restrict[q]);
            if let Some(c) = self.connecting.get(q) {
                out.push(c);
            }
        }
        out
    }
}

/// Result of a splicing step: a descriptor or an unresolved extension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum DegreeResult {
    Group { descriptor: LimitDescriptor },
    Extension { problem: ExtensionProblem },
}

impl DegreeResult {
    pub fn descriptor(&self) -> Option<&LimitDescriptor> {
        match self {
            DegreeResult::Group { descriptor } => Some(descriptor),
            DegreeResult::Extension { problem } => problem.resolution.as_ref().map(|r| &r.resolved),
        }
    }

    pub fn text(&self) -> String {
        match self {
            DegreeResult::Group { descriptor } => descriptor.text(),
            DegreeResult::Extension { problem } => match &problem.resolution {
                Some(r) => r.resolved.text(),
                None => problem.text(),
            },
        }
    }
}

/// `0 → sub → H → quo → 0` with no forced splitting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionProblem {
    pub sub: LimitDescriptor,
    pub quo: LimitDescriptor,
    pub degree: usize,
    pub context: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<Resolution>,
}

impl ExtensionProblem {
    pub fn text(&self) -> String {
        format!("Ext[{} <- ? <- {}]", self.quo.text(), self.sub.text())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub resolved: LimitDescriptor,
    pub justification: String,
}

/// How to settle an extension problem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExtensionResolution {
    Split,
    /// The finite cyclic quotient of order `d` is absorbed by taking `1/d` of
    /// the generator of a localized summand (the one of the given scale, or the
    /// largest scale coprime to `d`).
    AbsorbTorsion {
        #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::intlinalg::decimal::opt")]
        target_scale: Option<BigInt>,
        justification: String,
    },
}

/// Applies a resolution; torsion-free quotients always split.
pub fn resolve_extension(problem: &ExtensionProblem, resolution: &ExtensionResolution) -> Result<LimitDescriptor> {
    if problem.quo.is_torsion_free() {
        return Ok(problem.sub.direct_sum(&problem.quo).with_annotation("quotient torsion-free: extension splits"));
    }
    match resolution {
        ExtensionResolution::Split => {
            Ok(problem.sub.direct_sum(&problem.quo).with_annotation("extension split by supplied resolution"))
        }
        ExtensionResolution::AbsorbTorsion { target_scale, justification } => {
            if problem.quo.free_rank() != 0 {
                return Err(Error::BadResolution("absorbing needs a finite quotient".into()));
            }
            let t = problem.quo.torsion_group();
            if t.torsion.len() != 1 {
                return Err(Error::BadResolution(format!("quotient {t} is not cyclic")));
            }
            let d = t.torsion[0].clone();
            let coprime = |s: &BigInt| num_integer::Integer::gcd(s, &d).is_one();
            let target = problem
                .sub
                .summands
                .iter()
                .enumerate()
                .filter_map(|(i, s)| match s {
                    Summand::Localized { scale, rescale, .. } if rescale.is_one() && coprime(scale) => {
                        Some((i, scale.clone()))
                    }
                    _ => None,
                })
                .filter(|(_, s)| target_scale.as_ref().is_none_or(|t| t == s))
                .max_by(|a, b| a.1.cmp(&b.1));
            let Some((i, scale)) = target else {
                return Err(Error::BadResolution(
                    "no localized summand with scale coprime to the quotient order".into(),
                ));
            };
            let mut summands = problem.sub.summands.clone();
            let Summand::Localized { rank, primes, .. } = summands[i].clone() else { unreachable!() };
            summands[i] = Summand::Localized {
                scale: scale.clone(),
                primes: primes.clone(),
                rank: rank - 1,
                rescale: BigInt::one(),
            };
            summands.push(Summand::Localized { scale, primes, rank: 1, rescale: d.clone() });
            let mut out = LimitDescriptor::new(summands);
            out.annotations = problem.sub.annotations.clone();
            out.annotations.push(format!("generator rescaled by 1/{d}; torsion Z{} absorbed", subscript(&d)));
            out.annotations.push(justification.clone());
            Ok(out)
        }
    }
}

fn subscript(n: &BigInt) -> String {
    n.to_string().chars().map(|c| char::from_u32(0x2080 + c.to_digit(10).unwrap_or(0)).unwrap_or(c)).collect()
}

/// Report on one stratum `Ξ_k` of the recursion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumReport {
    pub stratum: usize,
    /// Cell counts of `(S_k)_ER` per dimension.
    pub eventual_range_counts: Vec<usize>,
    /// Limits of `H^q((S_k)_ER)`.
    pub direct: Vec<LimitDescriptor>,
    /// Limits of `H^q((S_k)_ER, S_{k−1} ∩ (S_k)_ER)` (empty for `k = 0`).
    pub pair: Vec<LimitDescriptor>,
    /// Approximant groups of the same pair.
    pub pair_groups: Vec<String>,
    /// Limits of `H^q((S_k)_ER, (S_{k−1})_ER)`.
    pub pair_er: Vec<LimitDescriptor>,
    /// Connecting maps `H^q(Ξ_{k−1}) → H^{q+1}(Ξ_k, Ξ_{k−1})`.
    pub connecting: Vec<ConnectingReport>,
    /// Spliced answer per degree.
    pub results: Vec<DegreeResult>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectingReport {
    pub source_degree: usize,
    pub is_zero: bool,
    /// Image lattice in canonical target coordinates, Hermite normalized.
    pub image_basis: IntMatrix,
    /// `|det|` at limit level when both limits are the eventual ranges.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::intlinalg::decimal::opt")]
    pub limit_determinant: Option<BigInt>,
    pub image_limit: LimitDescriptor,
    pub kernel_limit: LimitDescriptor,
    pub cokernel_limit: LimitDescriptor,
}

/// Full recursion over all strata.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LesReport {
    pub strata: Vec<StratumReport>,
}

impl LesReport {
    pub fn finals(&self) -> &[DegreeResult] {
        self.strata.last().map_or(&[], |s| s.results.as_slice())
    }
}

fn classified(d: LimitDescriptor, what: &str) -> Result<LimitDescriptor> {
    if d.classified {
        Ok(d)
    } else {
        Err(Error::Unclassified(format!("{what}: {d}")))
    }
}

/// Splices the pair sequences `(Ξ_k, Ξ_{k−1})` stratum by stratum.
pub fn les_assemble(cx: &FilteredComplex) -> Result<LesReport> {
    cx.ensure_valid()?;
    let nd = cx.ndims();
    let mut strata = Vec::new();
    for k in 0..cx.stratum_count().max(1) {
        let xk = cx.eventual_range_cells(k);
        let direct_pc = cx.stratum_systems(k)?;
        let direct = direct_pc
            .limits()
            .into_iter()
            .enumerate()
            .map(|(q, d)| classified(d, &format!("H^{q} of stratum {k}")))
            .collect::<Result<Vec<_>>>()?;
        if k == 0 {
            let results = direct.iter().map(|d| DegreeResult::Group { descriptor: d.clone() }).collect();
            strata.push(StratumReport {
                stratum: 0,
                eventual_range_counts: xk.counts(),
                direct,
                pair: vec![],
                pair_groups: vec![],
                pair_er: vec![],
                connecting: vec![],
                results,
            });
            continue;
        }
        let pair_pc = cx.pair_systems(k)?;
        let pair = pair_pc.limits();
        let pair_groups = pair_pc.groups.iter().map(|g| g.group().to_string()).collect();
        let xprev = cx.eventual_range_cells(k - 1);
        let les = cx.pair_les(&xk, &xprev)?;
        let pair_er: Vec<_> = les.relative.limits();
        let mut connecting = Vec::new();
        for (q, h) in les.connecting.iter().enumerate() {
            let image = image_system_data(h);
            connecting.push(ConnectingReport {
                source_degree: q,
                is_zero: h.hom().is_zero(),
                image_basis: column_hnf(&image.1.generators().hstack(&h.target.group.relations())),
                limit_determinant: h.limit_determinant(),
                image_limit: classify_limit(&image.0),
                kernel_limit: classify_limit(&kernel_system(h)),
                cokernel_limit: classify_limit(&cokernel_system(h)),
            });
        }
        let mut results = Vec::new();
        for q in 0..nd {
            let sub = if q == 0 {
                classify_limit(&les.relative.systems[0])
            } else {
                classify_limit(&cokernel_system(&les.connecting[q - 1]))
            };
            let quo = match les.connecting.get(q) {
                Some(h) => classify_limit(&kernel_system(h)),
                None => classify_limit(&les.subspace.systems[q]),
            };
            let sub = classified(sub, &format!("cokernel part of degree {q}, stratum {k}"))?;
            let quo = classified(quo, &format!("kernel part of degree {q}, stratum {k}"))?;
            results.push(splice(sub, quo, q, k));
        }
        strata.push(StratumReport {
            stratum: k,
            eventual_range_counts: xk.counts(),
            direct,
            pair,
            pair_groups,
            pair_er,
            connecting,
            results,
        });
    }
    Ok(LesReport { strata })
}

fn splice(sub: LimitDescriptor, quo: LimitDescriptor, q: usize, k: usize) -> DegreeResult {
    if quo.is_trivial() {
        return DegreeResult::Group { descriptor: sub };
    }
    if sub.is_trivial() {
        return DegreeResult::Group { descriptor: quo };
    }
    if quo.is_torsion_free() {
        let d = sub.direct_sum(&quo).with_annotation("quotient torsion-free: extension splits");
        return DegreeResult::Group { descriptor: d };
    }
    DegreeResult::Extension {
        problem: ExtensionProblem {
            sub,
            quo,
            degree: q,
            context: format!("H^{q} of stratum {k}: image of the relative group, then kernel of the connecting map"),
            resolution: None,
        },
    }
}

/// One exactness check at a middle group of a long exact sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactnessCheck {
    pub stratum: usize,
    pub position: usize,
    pub composite_zero: bool,
    pub lattice_exact: bool,
    pub limit_exact: bool,
}

impl ExactnessCheck {
    pub fn holds(&self) -> bool {
        self.composite_zero && self.lattice_exact && self.limit_exact
    }
}

/// Exactness of every splice of every pair sequence `((S_k)_ER, (S_{k−1})_ER)`,
/// both on approximant lattices and on classified limits.
pub fn les_exactness(cx: &FilteredComplex) -> Result<Vec<ExactnessCheck>> {
    cx.ensure_valid()?;
    let mut out = Vec::new();
    for k in 1..cx.stratum_count() {
        let les = cx.pair_les(&cx.eventual_range_cells(k), &cx.eventual_range_cells(k - 1))?;
        let seq = les.sequence();
        for (pos, w) in seq.windows(2).enumerate() {
            let (f, g) = (w[0], w[1]);
            let comp = g.hom().compose(&f.hom())?;
            let (_, im) = image_system_data(f);
            let (_, ker) = kernel_system_data(g);
            let rel = f.target.group.relations();
            let lattice_exact =
                column_hnf(&im.numerator_basis().hstack(&rel)) == column_hnf(&ker.numerator_basis().hstack(&rel));
            let li = classify_limit(&crate::indsys::image_system(f));
            let lk = classify_limit(&kernel_system(g));
            out.push(ExactnessCheck {
                stratum: k,
                position: pos,
                composite_zero: comp.is_zero(),
                lattice_exact,
                limit_exact: li.iso_eq(&lk),
            });
        }
    }
    Ok(out)
}

/// Cellular cohomology of a whole complex (no endomorphism needed).
pub fn plain_cohomology(cx: &FilteredComplex) -> Result<Vec<crate::abgroups::FgAbGroup>> {
    let nd = cx.ndims();
    let dims = cx.cell_counts();
    let deltas: Vec<IntMatrix> = (0..nd.saturating_sub(1)).map(|k| cx.boundary(k + 1).transpose()).collect();
    Ok(cochain_cohomology(&dims, &deltas)?.iter().map(Subquotient::group).collect())
}

/// Whether a descriptor is `Z^r` with nothing else.
pub fn is_plain_free(d: &LimitDescriptor) -> bool {
    d.summands.iter().all(|s| matches!(s, Summand::Free { .. }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle_complex() -> FilteredComplex {
        let mut b = ComplexBuilder::new();
        b.cell("v", 0, 0).cell("e", 1, 0).boundary("e", "v", 0).endo("v", "v", 1).endo("e", "e", 1);
        b.build().unwrap()
    }

    #[test]
    fn empty_complex_valid() {
        let cx = ComplexBuilder::new().build().unwrap();
        assert!(cx.validate().valid);
        let r = les_assemble(&cx).unwrap();
        assert!(r.finals().is_empty());
    }

    #[test]
    fn detects_boundary_square() {
        let mut b = ComplexBuilder::new();
        b.cell("v", 0, 0).cell("e", 1, 0).cell("f", 2, 0).boundary("e", "v", 1).boundary("f", "e", 1);
        let cx = b.build().unwrap();
        let r = cx.validate();
        let v = r.violation.unwrap();
        assert_eq!(v.kind, ViolationKind::BoundarySquare);
        assert_eq!(v.degree, 2);
    }

    #[test]
    fn detects_stratum_raise() {
        let mut b = ComplexBuilder::new();
        b.cell("a", 0, 0).cell("b", 0, 1).endo("a", "b", 1).endo("b", "b", 1);
        let v = b.build().unwrap().validate().violation.unwrap();
        assert_eq!(v.kind, ViolationKind::StratumEndo);
        assert_eq!(v.cell.as_deref(), Some("a"));
    }

    #[test]
    fn point_and_circle() {
        let mut b = ComplexBuilder::new();
        b.cell("p", 0, 0).endo("p", "p", 1);
        let r = les_assemble(&b.build().unwrap()).unwrap();
        assert_eq!(r.finals()[0].text(), "Z");
        let r = les_assemble(&circle_complex()).unwrap();
        let t: Vec<_> = r.finals().iter().map(DegreeResult::text).collect();
        assert_eq!(t, ["Z", "Z"]);
    }

    #[test]
    fn permutation_keeps_everything() {
        let mut b = ComplexBuilder::new();
        b.cell("a", 0, 0).cell("b", 0, 0).endo("a", "b", 1).endo("b", "a", 1);
        let cx = b.build().unwrap();
        assert_eq!(cx.eventual_range_cells(0).counts(), vec![2]);
    }

    #[test]
    fn split_and_absorb() {
        let p = ExtensionProblem {
            sub: LimitDescriptor::parse("Z[1/4] + Z[1/2]^2").unwrap(),
            quo: LimitDescriptor::parse("Z/3").unwrap(),
            degree: 2,
            context: String::new(),
            resolution: None,
        };
        let s = resolve_extension(&p, &ExtensionResolution::Split).unwrap();
        assert_eq!(s.text(), "Z[1/2]^2 + Z[1/4] + Z/3");
        let a = resolve_extension(
            &p,
            &ExtensionResolution::AbsorbTorsion { target_scale: None, justification: "test".into() },
        )
        .unwrap();
        assert_eq!(a.text(), "Z[1/2]^2 + (1/3)Z[1/4]");
        assert!(a.annotations.iter().any(|n| n == "generator rescaled by 1/3; torsion Z₃ absorbed"));
        let bad = ExtensionProblem { quo: LimitDescriptor::parse("Z/2 + Z/2").unwrap(), ..p.clone() };
        assert!(resolve_extension(
            &bad,
            &ExtensionResolution::AbsorbTorsion { target_scale: None, justification: String::new() }
        )
        .is_err());
        let free_quo = ExtensionProblem { quo: LimitDescriptor::parse("Z").unwrap(), ..p };
        let r = resolve_extension(
            &free_quo,
            &ExtensionResolution::AbsorbTorsion { target_scale: None, justification: String::new() },
        )
        .unwrap();
        assert_eq!(r.text(), "Z + Z[1/2]^2 + Z[1/4]");
    }
}
