//! Finitely generated abelian groups, homomorphisms and subquotients.
//!
//! A group in canonical form `Z/q₁ ⊕ … ⊕ Z/q_s ⊕ Z^f` (with `q₁ | q₂ | …`) is
//! presented on `s + f` canonical generators, torsion generators first. All
//! homomorphism matrices act on these canonical coordinates.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlinalg::{image_basis, kernel_basis, snf, solve_with, IntMatrix, IntVector, SnfResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FgAbGroup {
    pub free_rank: usize,
    /// Invariant factors, each ≥ 2, forming a divisibility chain.
    #[serde(with = "crate::intlinalg::decimal::vec")]
    pub torsion: Vec<BigInt>,
    /// Lifts of the canonical generators into an ambient cochain group, as columns.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generators: Option<IntMatrix>,
}

impl FgAbGroup {
    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup { free_rank: rank, torsion: vec![], generators: None }
    }

    /// Canonical form of `Z^free ⊕ ⊕ Z/orders[i]` for arbitrary positive orders.
    pub fn from_cyclic(free: usize, orders: &[BigInt]) -> Self {
        let d = IntMatrix::diagonal(orders);
        let torsion = snf(&d).diagonal.into_iter().filter(|x| x > &BigInt::one()).collect();
        FgAbGroup { free_rank: free, torsion, generators: None }
    }

    pub fn ngens(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    /// Order of each canonical generator, 0 for free generators.
    pub fn orders(&self) -> Vec<BigInt> {
        let mut o = self.torsion.clone();
        o.extend(std::iter::repeat_n(BigInt::zero(), self.free_rank));
        o
    }

    /// Relation columns `q_i·e_i` of the presentation `Z^ngens / relations`.
    pub fn relations(&self) -> IntMatrix {
        let k = self.ngens();
        let mut q = IntMatrix::zeros(k, self.torsion.len());
        for (i, t) in self.torsion.iter().enumerate() {
            q.set(i, i, t.clone());
        }
        q
    }

    pub fn is_trivial(&self) -> bool {
        self.ngens() == 0
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    /// Same isomorphism type, ignoring generator lifts.
    pub fn iso_eq(&self, other: &FgAbGroup) -> bool {
        self.free_rank == other.free_rank && self.torsion == other.torsion
    }

    /// Reduces a coordinate vector into canonical range.
    pub fn reduce(&self, v: &[BigInt]) -> IntVector {
        v.iter().zip(self.orders()).map(|(x, q)| if q.is_zero() { x.clone() } else { x.mod_floor(&q) }).collect()
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let q = &self.torsion[i];
            let mut j = i;
            while j < self.torsion.len() && &self.torsion[j] == q {
                j += 1;
            }
            if j - i == 1 {
                parts.push(format!("Z/{q}"));
            } else {
                parts.push(format!("(Z/{q})^{}", j - i));
            }
            i = j;
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A subquotient `L / R` of an ambient lattice `Zⁿ`, with `R ⊆ L`.
///
/// Carries canonical generators (lifted to `Zⁿ`) and a coordinate map so that
/// maps induced by ambient matrices can be written on canonical generators.
#[derive(Clone, Debug)]
pub struct Subquotient {
    ambient: usize,
    basis: IntMatrix,
    basis_snf: SnfResult,
    coord: IntMatrix,
    gens: IntMatrix,
    orders: Vec<BigInt>,
}

impl Subquotient {
    /// `span(l_gens) / span(r_gens)` inside `Z^ambient`.
    pub fn new(ambient: usize, l_gens: &IntMatrix, r_gens: &IntMatrix) -> Result<Self> {
        if l_gens.rows() != ambient || r_gens.rows() != ambient {
            return Err(Error::Dimension("subquotient generators must live in the ambient lattice".into()));
        }
        let basis = image_basis(l_gens);
        let l = basis.cols();
        let basis_snf = snf(&basis);
        let mut rel_cols = Vec::with_capacity(r_gens.cols());
        for j in 0..r_gens.cols() {
            let c = solve_with(&basis_snf, l, &r_gens.col(j))
                .ok_or_else(|| Error::Dimension("relation lattice not contained in generator lattice".into()))?;
            rel_cols.push(c);
        }
        let rel = IntMatrix::from_columns(l, &rel_cols);
        let f = snf(&rel);
        let rho = f.rank();
        let mut keep = Vec::new();
        let mut orders = Vec::new();
        for i in 0..l {
            if i < rho {
                if !f.diagonal[i].is_one() {
                    keep.push(i);
                    orders.push(f.diagonal[i].clone());
                }
            } else {
                keep.push(i);
                orders.push(BigInt::zero());
            }
        }
        let coord = f.u.select_rows(&keep);
        let gens = basis.mul(&f.u_inv.select_cols(&keep));
        Ok(Subquotient { ambient, basis, basis_snf, coord, gens, orders })
    }

    /// `span(l_gens)` with no relations.
    pub fn lattice(ambient: usize, l_gens: &IntMatrix) -> Self {
        Self::new(ambient, l_gens, &IntMatrix::zeros(ambient, 0)).expect("zero relations always fit")
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    pub fn ngens(&self) -> usize {
        self.orders.len()
    }

    /// Canonical generator lifts, as columns in the ambient lattice.
    pub fn generators(&self) -> &IntMatrix {
        &self.gens
    }

    /// Basis of the numerator lattice `L`.
    pub fn numerator_basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn group(&self) -> FgAbGroup {
        let torsion = self.orders.iter().filter(|q| !q.is_zero()).cloned().collect();
        let free_rank = self.orders.iter().filter(|q| q.is_zero()).count();
        FgAbGroup { free_rank, torsion, generators: Some(self.gens.clone()) }
    }

    /// Canonical coordinates of an ambient vector, `None` if it is not in `L`.
    pub fn coords(&self, x: &[BigInt]) -> Option<IntVector> {
        let c = solve_with(&self.basis_snf, self.basis.cols(), x)?;
        let y = self.coord.mul_vec(&c);
        Some(y.into_iter().zip(&self.orders).map(|(v, q)| if q.is_zero() { v } else { v.mod_floor(q) }).collect())
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        solve_with(&self.basis_snf, self.basis.cols(), x).is_some()
    }

    /// Matrix of the map `self → target` induced by an ambient matrix `m`.
    pub fn induced(&self, target: &Subquotient, m: &IntMatrix) -> Result<IntMatrix> {
        if m.cols() != self.ambient || m.rows() != target.ambient {
            return Err(Error::Dimension(format!(
                "induced map: matrix is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                target.ambient,
                self.ambient
            )));
        }
        let images = m.mul(&self.gens);
        let mut cols = Vec::with_capacity(self.ngens());
        for j in 0..images.cols() {
            let c = target
                .coords(&images.col(j))
                .ok_or_else(|| Error::Dimension("induced map leaves the target numerator".into()))?;
            cols.push(c);
        }
        Ok(IntMatrix::from_columns(target.ngens(), &cols))
    }
}

/// Homomorphism between groups in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbHom {
    pub domain: FgAbGroup,
    pub codomain: FgAbGroup,
    pub matrix: IntMatrix,
}

impl AbHom {
    /// Checks well-definedness and reduces entries into canonical range.
    pub fn new(domain: FgAbGroup, codomain: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != codomain.ngens() || matrix.cols() != domain.ngens() {
            return Err(Error::Dimension(format!(
                "hom matrix is {}x{}, groups need {}x{}",
                matrix.rows(),
                matrix.cols(),
                codomain.ngens(),
                domain.ngens()
            )));
        }
        let co = codomain.orders();
        let matrix = matrix.reduce_rows(&co);
        for (j, q) in domain.orders().iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            for (i, p) in co.iter().enumerate() {
                let v = matrix.get(i, j) * q;
                let ok = if p.is_zero() { v.is_zero() } else { v.is_multiple_of(p) };
                if !ok {
                    return Err(Error::Dimension(format!(
                        "generator {j} of order {q} cannot map to coordinate {i} value {}",
                        matrix.get(i, j)
                    )));
                }
            }
        }
        Ok(AbHom { domain, codomain, matrix })
    }

    pub fn zero(domain: FgAbGroup, codomain: FgAbGroup) -> Self {
        let m = IntMatrix::zeros(codomain.ngens(), domain.ngens());
        AbHom { domain, codomain, matrix: m }
    }

    pub fn identity(g: FgAbGroup) -> Self {
        let m = IntMatrix::identity(g.ngens());
        AbHom { domain: g.clone(), codomain: g, matrix: m }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &AbHom) -> Result<AbHom> {
        if !first.codomain.iso_eq(&self.domain) {
            return Err(Error::Dimension("composition of incompatible homs".into()));
        }
        AbHom::new(first.domain.clone(), self.codomain.clone(), self.matrix.mul(&first.matrix))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.reduce_rows(&self.codomain.orders()).is_zero()
    }

    /// Equality as homomorphisms (entries compared modulo codomain orders).
    pub fn same_map(&self, other: &AbHom) -> bool {
        let o = self.codomain.orders();
        self.matrix.reduce_rows(&o) == other.matrix.reduce_rows(&o)
    }

    /// Kernel as a subquotient of the domain presentation `Z^k / relations`.
    pub fn kernel(&self) -> Subquotient {
        let k = self.domain.ngens();
        let aug = self.matrix.hstack(&self.codomain.relations());
        let kb = kernel_basis(&aug);
        let rows: Vec<usize> = (0..k).collect();
        let l = kb.select_rows(&rows);
        Subquotient::new(k, &l, &self.domain.relations()).expect("domain relations lie in the kernel")
    }

    /// Image as a subquotient of the codomain presentation.
    pub fn image(&self) -> Subquotient {
        let q = self.codomain.relations();
        let l = self.matrix.hstack(&q);
        Subquotient::new(self.codomain.ngens(), &l, &q).expect("relations lie in image lattice")
    }

    /// Cokernel as a subquotient of the codomain presentation.
    pub fn cokernel(&self) -> Subquotient {
        let k = self.codomain.ngens();
        let r = self.matrix.hstack(&self.codomain.relations());
        Subquotient::new(k, &IntMatrix::identity(k), &r).expect("everything lies in Z^k")
    }
}

/// Cohomology of a cochain complex with given cochain ranks.
///
/// `deltas[k]` is `δ^k : C^k → C^{k+1}`, a `dims[k+1] × dims[k]` matrix.
/// Returns `H^k = ker δ^k / im δ^{k−1}` for every `k < dims.len()`.
pub fn cochain_cohomology(dims: &[usize], deltas: &[IntMatrix]) -> Result<Vec<Subquotient>> {
    if deltas.len() + 1 != dims.len() && !(dims.is_empty() && deltas.is_empty()) {
        return Err(Error::Dimension("need one differential between consecutive degrees".into()));
    }
    for (k, d) in deltas.iter().enumerate() {
        if d.rows() != dims[k + 1] || d.cols() != dims[k] {
            return Err(Error::Dimension(format!("delta^{k} has the wrong shape")));
        }
    }
    for k in 0..deltas.len().saturating_sub(1) {
        if !deltas[k + 1].mul(&deltas[k]).is_zero() {
            return Err(Error::NotAComplex { degree: k });
        }
    }
    let mut out = Vec::with_capacity(dims.len());
    for k in 0..dims.len() {
        let n = dims[k];
        let z = if k < deltas.len() { kernel_basis(&deltas[k]) } else { IntMatrix::identity(n) };
        let b = if k > 0 { deltas[k - 1].clone() } else { IntMatrix::zeros(n, 0) };
        out.push(Subquotient::new(n, &z, &b)?);
    }
    Ok(out)
}

/// Canonical cohomology groups of the complex `C⁰ → C¹ → ⋯` given by `deltas`.
pub fn cohomology_of_cochain_complex(deltas: &[IntMatrix]) -> Result<Vec<FgAbGroup>> {
    if deltas.is_empty() {
        return Ok(vec![]);
    }
    let mut dims = vec![deltas[0].cols()];
    for d in deltas {
        dims.push(d.rows());
    }
    Ok(cochain_cohomology(&dims, deltas)?.iter().map(Subquotient::group).collect())
}

/// Alternating sum of cell counts.
pub fn euler_characteristic(cell_counts: &[usize]) -> i64 {
    cell_counts.iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
}
