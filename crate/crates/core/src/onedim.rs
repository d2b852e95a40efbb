//! One-dimensional substitutions: rule parsing, two-letter language, the
//! collared complex with its cellular substitution, and `Ȟ¹` of the hull.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::abgroups::{cochain_cohomology, Subquotient};
use crate::cellcx::{is_plain_free, les_assemble, ComplexBuilder, DegreeResult, FilteredComplex, LesReport};
use crate::error::{Error, Result};
use crate::indsys::{classify_limit, cokernel_system, eventual_range, InductiveSystem, LimitDescriptor, SystemHom};
use crate::intlinalg::IntMatrix;

/// A substitution on single-character letters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Substitution1D {
    pub alphabet: Vec<char>,
    /// Images as letter indices, in alphabet order.
    pub rules: Vec<Vec<usize>>,
}

impl fmt::Display for Substitution1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.alphabet.iter().zip(&self.rules).map(|(a, w)| format!("{a}->{}", self.word(w))).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Substitution1D {
    /// Builds from `(letter, image)` pairs; the alphabet is the set of rule heads.
    pub fn new(rules: &[(char, &str)]) -> Result<Self> {
        let alphabet: Vec<char> = rules.iter().map(|r| r.0).collect();
        let mut seen = BTreeSet::new();
        for &a in &alphabet {
            if !seen.insert(a) {
                return Err(Error::Other(format!("letter `{a}` has two rules")));
            }
        }
        let mut out = Vec::new();
        for (a, w) in rules {
            if w.is_empty() {
                return Err(Error::Other(format!("image of `{a}` is empty")));
            }
            let mut img = Vec::new();
            for c in w.chars() {
                let i = alphabet
                    .iter()
                    .position(|&b| b == c)
                    .ok_or_else(|| Error::Other(format!("letter `{c}` in the image of `{a}` has no rule")))?;
                img.push(i);
            }
            out.push(img);
        }
        Ok(Substitution1D { alphabet, rules: out })
    }

    /// Parses `a->ab,b->ba`. Rules are separated by commas, semicolons or
    /// newlines; spaces are ignored; letters are single alphanumeric characters.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rules: Vec<(char, String, usize, usize)> = Vec::new();
        let err = |line: usize, column: usize, msg: String| Error::Parse { line, column, msg };
        for (ln, line) in text.lines().enumerate() {
            let chars: Vec<char> = line.chars().collect();
            let mut i = 0;
            let skip_ws = |i: &mut usize| {
                while *i < chars.len() && chars[*i].is_whitespace() {
                    *i += 1;
                }
            };
            loop {
                skip_ws(&mut i);
                if i >= chars.len() {
                    break;
                }
                if chars[i] == ',' || chars[i] == ';' {
                    i += 1;
                    continue;
                }
                let head = chars[i];
                if !head.is_alphanumeric() {
                    return Err(err(ln + 1, i + 1, format!("expected a letter, found `{head}`")));
                }
                let (hl, hc) = (ln + 1, i + 1);
                i += 1;
                skip_ws(&mut i);
                if chars.get(i) != Some(&'-') || chars.get(i + 1) != Some(&'>') {
                    return Err(err(ln + 1, i + 1, "expected `->`".into()));
                }
                i += 2;
                skip_ws(&mut i);
                let start = i;
                let mut word = String::new();
                while i < chars.len() && chars[i].is_alphanumeric() {
                    word.push(chars[i]);
                    i += 1;
                }
                if word.is_empty() {
                    return Err(err(ln + 1, start + 1, format!("empty image for `{head}`")));
                }
                skip_ws(&mut i);
                if i < chars.len() && chars[i] != ',' && chars[i] != ';' {
                    return Err(err(ln + 1, i + 1, format!("unexpected `{}`", chars[i])));
                }
                rules.push((head, word, hl, hc));
            }
        }
        if rules.is_empty() {
            return Err(err(1, 1, "no rules".into()));
        }
        let heads: Vec<char> = rules.iter().map(|r| r.0).collect();
        for (k, (a, w, l, c)) in rules.iter().enumerate() {
            if heads[..k].contains(a) {
                return Err(err(*l, *c, format!("letter `{a}` has two rules")));
            }
            if let Some(x) = w.chars().find(|x| !heads.contains(x)) {
                return Err(err(*l, *c, format!("letter `{x}` in the image of `{a}` has no rule")));
            }
        }
        let pairs: Vec<(char, &str)> = rules.iter().map(|r| (r.0, r.1.as_str())).collect();
        Self::new(&pairs)
    }

    pub fn len(&self) -> usize {
        self.alphabet.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphabet.is_empty()
    }

    pub fn word(&self, w: &[usize]) -> String {
        w.iter().map(|&i| self.alphabet[i]).collect()
    }

    pub fn apply(&self, w: &[usize]) -> Vec<usize> {
        w.iter().flat_map(|&i| self.rules[i].iter().copied()).collect()
    }

    /// `M[i][j]` = occurrences of letter `i` in the image of letter `j`.
    pub fn matrix(&self) -> IntMatrix {
        let d = self.len();
        let mut m = IntMatrix::zeros(d, d);
        for (j, w) in self.rules.iter().enumerate() {
            for &i in w {
                m.add_to(i, j, &BigInt::one());
            }
        }
        m
    }

    /// Some power of the substitution matrix is strictly positive. Checked up
    /// to the Wielandt exponent `(d−1)² + 1`.
    pub fn is_primitive(&self) -> bool {
        let d = self.len();
        let adj: Vec<Vec<bool>> = (0..d).map(|i| (0..d).map(|j| self.rules[j].contains(&i)).collect()).collect();
        let mut p = adj.clone();
        for _ in 0..(d.saturating_sub(1).pow(2) + 1) {
            if p.iter().all(|r| r.iter().all(|&x| x)) {
                return true;
            }
            p = (0..d).map(|i| (0..d).map(|j| (0..d).any(|k| p[i][k] && adj[k][j])).collect()).collect();
        }
        p.iter().all(|r| r.iter().all(|&x| x))
    }

    pub fn ensure_primitive(&self) -> Result<()> {
        if self.is_primitive() {
            Ok(())
        } else {
            Err(Error::NotPrimitive(format!("no power of the substitution matrix of `{self}` is positive")))
        }
    }

    /// Heuristic periodicity warnings. Aperiodicity is never decided here.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.len() == 1 {
            out.push("one-letter alphabet: every tiling is periodic".to_string());
        }
        if self.rules.iter().all(|w| w.len() == 1) {
            out.push("all images have length 1: the substitution does not expand".to_string());
        }
        if self.len() > 1 {
            if let Some(root) = common_root(&self.rules) {
                out.push(format!("all images are powers of `{}`: tilings are likely periodic", self.word(&root)));
            }
        }
        if self.len() > 1 && self.matrix().det().abs().is_one() && self.rules.iter().all(|w| w.len() == 1) {
            out.push("substitution matrix is a permutation".to_string());
        }
        out
    }
}

fn primitive_root(w: &[usize]) -> &[usize] {
    let n = w.len();
    for p in 1..=n {
        if n.is_multiple_of(p) && (0..n).all(|i| w[i] == w[i % p]) {
            return &w[..p];
        }
    }
    w
}

fn common_root(rules: &[Vec<usize>]) -> Option<Vec<usize>> {
    let r = primitive_root(&rules[0]).to_vec();
    rules.iter().all(|w| primitive_root(w) == r.as_slice()).then_some(r)
}

fn factors2(w: &[usize], out: &mut BTreeSet<(usize, usize)>) {
    for p in w.windows(2) {
        out.insert((p[0], p[1]));
    }
}

/// Two-letter factors of the language, as index pairs.
pub fn allowed_words2(s: &Substitution1D) -> Result<BTreeSet<(usize, usize)>> {
    s.ensure_primitive()?;
    let d = s.len();
    let mut set = BTreeSet::new();
    for a in 0..d {
        let mut w = vec![a];
        for _ in 0..d {
            w = s.apply(&w);
        }
        factors2(&w, &mut set);
    }
    for _ in 0..=(d * d + 1) {
        let mut next = set.clone();
        for &(x, y) in &set {
            factors2(&s.apply(&[x, y]), &mut next);
        }
        if next == set {
            return Ok(set);
        }
        set = next;
    }
    Err(Error::Other("two-letter language did not stabilize".into()))
}

/// The collared complex: vertex cells of stratum 0, tile cells of stratum 1.
pub fn build_bd_complex(s: &Substitution1D) -> Result<FilteredComplex> {
    let words = allowed_words2(s)?;
    let a = &s.alphabet;
    let v = |x: usize, y: usize| format!("v_{}{}", a[x], a[y]);
    let mut b = ComplexBuilder::new();
    for &c in a {
        b.cell(format!("in_{c}"), 0, 0).cell(format!("out_{c}"), 0, 0);
    }
    for &(x, y) in &words {
        b.cell(v(x, y), 1, 0);
    }
    for &c in a {
        b.cell(format!("e_{c}"), 1, 1);
    }
    for (i, &c) in a.iter().enumerate() {
        let w = &s.rules[i];
        let (first, last) = (a[w[0]], a[*w.last().expect("nonempty image")]);
        b.boundary(&format!("e_{c}"), &format!("out_{c}"), 1);
        b.boundary(&format!("e_{c}"), &format!("in_{c}"), -1);
        b.endo(&format!("in_{c}"), &format!("in_{first}"), 1);
        b.endo(&format!("out_{c}"), &format!("out_{last}"), 1);
        for (k, &t) in w.iter().enumerate() {
            b.endo(&format!("e_{c}"), &format!("e_{}", a[t]), 1);
            if k + 1 < w.len() {
                b.endo(&format!("e_{c}"), &v(t, w[k + 1]), 1);
            }
        }
    }
    for &(x, y) in &words {
        b.boundary(&v(x, y), &format!("in_{}", a[y]), 1);
        b.boundary(&v(x, y), &format!("out_{}", a[x]), -1);
        let (lx, fy) = (*s.rules[x].last().expect("nonempty"), s.rules[y][0]);
        b.endo(&v(x, y), &v(lx, fy), 1);
    }
    let cx = b.build()?;
    cx.ensure_valid()?;
    Ok(cx)
}

/// What the vertex stratum looks like after eventual range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexStratum {
    pub reduced_h0: LimitDescriptor,
    pub h1: LimitDescriptor,
    /// Action on `H¹` of the eventual range when it has rank 1.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::intlinalg::decimal::opt")]
    pub h1_action: Option<BigInt>,
    /// `contractible`, `circle`, `reflection`, `rotation`.
    pub tags: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribution {
    pub summand: String,
    pub source: String,
}

/// Everything computed for a one-dimensional substitution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneDimReport {
    pub rules: String,
    pub matrix: IntMatrix,
    pub allowed_words: Vec<String>,
    pub zero_cells: usize,
    pub vertex_cells: usize,
    pub tile_cells: usize,
    pub vertex_stratum: VertexStratum,
    /// `(Z^d, Mᵀ)` and its limit.
    pub tile_system: IntMatrix,
    pub tile_limit: LimitDescriptor,
    pub cokernel: LimitDescriptor,
    /// `Ȟ⁰` and `Ȟ¹` of the hull through the stratified recursion.
    pub h0: LimitDescriptor,
    pub h1: LimitDescriptor,
    /// `Ȟ¹` assembled from the four-term sequence.
    pub h1_four_term: LimitDescriptor,
    pub routes_agree: bool,
    pub attribution: Vec<Attribution>,
    pub warnings: Vec<String>,
    pub les: LesReport,
}

/// The four-term sequence `0 → H̃⁰(Ξ₀) → lim(Z^d, Mᵀ) → Ȟ¹(Ω) → Ȟ¹(Ξ₀) → 0`,
/// computed from the full vertex stratum without the stratified machinery.
pub struct FourTerm {
    pub reduced_h0: InductiveSystem,
    pub tile: InductiveSystem,
    pub delta: SystemHom,
    pub h1_vertex: InductiveSystem,
}

pub fn four_term(s: &Substitution1D) -> Result<FourTerm> {
    let words: Vec<(usize, usize)> = allowed_words2(s)?.into_iter().collect();
    let d = s.len();
    // vertex cochains: in_a at 2a, out_a at 2a+1
    let n0 = 2 * d;
    let n1 = words.len();
    let mut d0 = IntMatrix::zeros(n1, n0);
    for (k, &(x, y)) in words.iter().enumerate() {
        d0.add_to(k, 2 * y, &BigInt::one());
        d0.add_to(k, 2 * x + 1, &BigInt::from(-1));
    }
    let mut e0 = IntMatrix::zeros(n0, n0);
    let mut e1 = IntMatrix::zeros(n1, n1);
    for a in 0..d {
        let w = &s.rules[a];
        // cochain pullback: (σ̃*φ)(c) = φ(σ̃ c)
        e0.add_to(2 * a, 2 * w[0], &BigInt::one());
        e0.add_to(2 * a + 1, 2 * w[w.len() - 1] + 1, &BigInt::one());
    }
    for (k, &(x, y)) in words.iter().enumerate() {
        let t = (*s.rules[x].last().expect("nonempty"), s.rules[y][0]);
        let j = words.iter().position(|&w| w == t).expect("image of an allowed word is allowed");
        e1.add_to(k, j, &BigInt::one());
    }
    let groups = cochain_cohomology(&[n0, n1], std::slice::from_ref(&d0))?;
    let ones = IntMatrix::from_fn(n0, 1, |_, _| BigInt::one());
    let reduced = Subquotient::new(n0, groups[0].numerator_basis(), &ones)?;
    let reduced_h0 = InductiveSystem::on_subquotient(&reduced, &e0)?;
    let h1_vertex = InductiveSystem::on_subquotient(&groups[1], &e1)?;
    let tile = InductiveSystem::free(s.matrix().transpose());
    let mut dm = IntMatrix::zeros(d, n0);
    for a in 0..d {
        dm.add_to(a, 2 * a + 1, &BigInt::one());
        dm.add_to(a, 2 * a, &BigInt::from(-1));
    }
    let target = Subquotient::lattice(d, &IntMatrix::identity(d));
    let m = reduced.induced(&target, &dm)?;
    let delta = SystemHom::new(reduced_h0.clone(), tile.clone(), m)?;
    Ok(FourTerm { reduced_h0, tile, delta, h1_vertex })
}

fn require(d: LimitDescriptor, what: &str) -> Result<LimitDescriptor> {
    if d.classified {
        Ok(d)
    } else {
        Err(Error::Unclassified(format!("{what}: {d}")))
    }
}

/// Runs both routes and cross-checks them.
pub fn h1_tiling_space(s: &Substitution1D) -> Result<OneDimReport> {
    s.ensure_primitive()?;
    let cx = build_bd_complex(s)?;
    let les = les_assemble(&cx)?;
    let finals = les.finals();
    let take = |k: usize| -> Result<LimitDescriptor> {
        match finals.get(k) {
            Some(DegreeResult::Group { descriptor }) => Ok(descriptor.clone()),
            Some(DegreeResult::Extension { problem }) => {
                Err(Error::Other(format!("unexpected extension problem in degree {k}: {}", problem.text())))
            }
            None => Ok(LimitDescriptor::trivial()),
        }
    };
    let h0 = take(0)?;
    let h1 = take(1)?;

    let ft = four_term(s)?;
    let tile_limit = require(classify_limit(&ft.tile), "tile system")?;
    let cokernel = require(classify_limit(&cokernel_system(&ft.delta)), "cokernel")?;
    let reduced_h0 = require(classify_limit(&ft.reduced_h0), "reduced H0 of the vertex stratum")?;
    let vh1 = require(classify_limit(&ft.h1_vertex), "H1 of the vertex stratum")?;
    let h1_four_term = cokernel.direct_sum(&vh1);
    let routes_agree = h1_four_term.iso_eq(&h1);

    let er = eventual_range(&ft.h1_vertex);
    let h1_action = (er.group.ngens() == 1 && er.group.is_free()).then(|| er.endo.get(0, 0).clone());
    let mut tags = Vec::new();
    if reduced_h0.is_trivial() && vh1.is_trivial() {
        tags.push("contractible".to_string());
    }
    if reduced_h0.is_trivial() && vh1.free_rank() == 1 && !vh1.has_torsion() && is_plain_free(&vh1) {
        tags.push("circle".to_string());
    }
    match h1_action.as_ref() {
        Some(a) if *a == BigInt::from(-1) => tags.push("reflection".to_string()),
        Some(a) if a.is_one() => tags.push("rotation".to_string()),
        _ => {}
    }

    let mut attribution = Vec::new();
    if !cokernel.is_trivial() {
        attribution.push(Attribution { summand: cokernel.text(), source: "tile cells".into() });
    }
    if !vh1.is_trivial() {
        let src = if tags.iter().any(|t| t == "circle") { "S0 circle" } else { "S0 loops" };
        attribution.push(Attribution { summand: vh1.text(), source: src.into() });
    }

    let words = allowed_words2(s)?;
    Ok(OneDimReport {
        rules: s.to_string(),
        matrix: s.matrix(),
        allowed_words: words.iter().map(|&(x, y)| s.word(&[x, y])).collect(),
        zero_cells: cx.cells(0).len(),
        vertex_cells: words.len(),
        tile_cells: s.len(),
        vertex_stratum: VertexStratum { reduced_h0, h1: vh1, h1_action, tags },
        tile_system: s.matrix().transpose(),
        tile_limit,
        cokernel,
        h0,
        h1,
        h1_four_term,
        routes_agree,
        attribution,
        warnings: s.warnings(),
        les,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(rules: &str) -> Vec<String> {
        let s = Substitution1D::parse(rules).unwrap();
        allowed_words2(&s).unwrap().iter().map(|&(x, y)| s.word(&[x, y])).collect()
    }

    #[test]
    fn languages() {
        assert_eq!(words("a->ab,b->ba"), ["aa", "ab", "ba", "bb"]);
        assert_eq!(words("a->bb,b->ba"), ["ab", "ba", "bb"]);
        assert_eq!(words("a->ab,b->a"), ["aa", "ab", "ba"]);
    }

    #[test]
    fn parse_errors_have_positions() {
        match Substitution1D::parse("a->ab,\nb=>ba") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 2)),
            other => panic!("{other:?}"),
        }
        match Substitution1D::parse("a->ac") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 1)),
            other => panic!("{other:?}"),
        }
        assert!(Substitution1D::parse("a->ab, a->b").is_err());
        assert!(Substitution1D::parse("a->").is_err());
        let s = Substitution1D::parse(" a -> ab ; b -> ba ").unwrap();
        assert_eq!(s.to_string(), "a->ab,b->ba");
    }

    #[test]
    fn primitivity() {
        assert!(!Substitution1D::parse("a->b,b->a").unwrap().is_primitive());
        assert!(!Substitution1D::parse("a->a,b->ab").unwrap().is_primitive());
        assert!(Substitution1D::parse("a->ab,b->a").unwrap().is_primitive());
    }

    #[test]
    fn period_doubling_complex() {
        let s = Substitution1D::parse("a->bb,b->ba").unwrap();
        let cx = build_bd_complex(&s).unwrap();
        assert_eq!(cx.cells(0).len(), 4);
        assert_eq!(cx.cells(1).len(), 5);
        let r = h1_tiling_space(&s).unwrap();
        assert_eq!(r.h1.text(), "Z + Z[1/2]");
        assert!(r.vertex_stratum.tags.contains(&"contractible".to_string()));
        assert!(r.routes_agree);
    }

    #[test]
    fn thue_morse_circle() {
        let r = h1_tiling_space(&Substitution1D::parse("a->ab,b->ba").unwrap()).unwrap();
        assert_eq!(r.h1.text(), "Z + Z[1/2]");
        assert_eq!(r.vertex_stratum.tags, ["circle", "reflection"]);
        assert!(r.attribution.iter().any(|a| a.summand == "Z" && a.source == "S0 circle"));
    }

    #[test]
    fn fibonacci_and_degenerate() {
        let r = h1_tiling_space(&Substitution1D::parse("a->ab,b->a").unwrap()).unwrap();
        assert_eq!(r.h1.text(), "Z^2");
        let r = h1_tiling_space(&Substitution1D::parse("a->aa").unwrap()).unwrap();
        assert!(!r.warnings.is_empty());
        assert_eq!(r.h1.text(), "Z[1/2]");
    }
}
