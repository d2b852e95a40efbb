//! Canonical descriptors of direct limits.
//!
//! Text grammar (summands joined by `" + "`, the trivial group is `0`):
//!
//! ```text
//! summand   := free | localized | cyclic
//! free      := "Z" [ "^" rank ]
//! localized := [ "(1/" d ")" ] "Z[1/" scale "]" [ "^" rank ]
//! cyclic    := "Z/" q | "(Z/" q ")^" multiplicity
//! ```
//!
//! Summands are ordered: free first, then localized by `(scale, d)`, then
//! cyclic by order. An unclassified free part is rendered `lim(Z^r, B)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::abgroups::FgAbGroup;
use crate::error::{Error, Result};
use crate::intlinalg::{decimal, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Summand {
    Free {
        rank: usize,
    },
    /// `Z[1/scale]^rank`; with `rescale = d > 1` the generator is `1/d` (rank 1).
    Localized {
        #[serde(with = "decimal")]
        scale: BigInt,
        #[serde(with = "decimal::vec")]
        primes: Vec<BigInt>,
        rank: usize,
        #[serde(with = "decimal")]
        rescale: BigInt,
    },
    Cyclic {
        #[serde(with = "decimal")]
        order: BigInt,
        multiplicity: usize,
    },
}

impl Summand {
    pub fn free(rank: usize) -> Self {
        Summand::Free { rank }
    }

    pub fn localized(scale: impl Into<BigInt>, rank: usize) -> Self {
        let scale = scale.into();
        Summand::Localized { primes: prime_factors(&scale), scale, rank, rescale: BigInt::one() }
    }

    pub fn cyclic(order: impl Into<BigInt>, multiplicity: usize) -> Self {
        Summand::Cyclic { order: order.into(), multiplicity }
    }

    fn sort_key(&self) -> (u8, BigInt, BigInt) {
        match self {
            Summand::Free { .. } => (0, BigInt::zero(), BigInt::zero()),
            Summand::Localized { scale, rescale, .. } => (1, scale.clone(), rescale.clone()),
            Summand::Cyclic { order, .. } => (2, order.clone(), BigInt::zero()),
        }
    }

    fn count(&self) -> usize {
        match self {
            Summand::Free { rank } | Summand::Localized { rank, .. } => *rank,
            Summand::Cyclic { multiplicity, .. } => *multiplicity,
        }
    }

    fn with_count(&self, n: usize) -> Summand {
        let mut s = self.clone();
        match &mut s {
            Summand::Free { rank } | Summand::Localized { rank, .. } => *rank = n,
            Summand::Cyclic { multiplicity, .. } => *multiplicity = n,
        }
        s
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Summand::Free { rank } => match rank {
                1 => write!(f, "Z"),
                r => write!(f, "Z^{r}"),
            },
            Summand::Localized { scale, rank, rescale, .. } => {
                if !rescale.is_one() {
                    write!(f, "(1/{rescale})")?;
                }
                write!(f, "Z[1/{scale}]")?;
                if *rank != 1 {
                    write!(f, "^{rank}")?;
                }
                Ok(())
            }
            Summand::Cyclic { order, multiplicity } => match multiplicity {
                1 => write!(f, "Z/{order}"),
                m => write!(f, "(Z/{order})^{m}"),
            },
        }
    }
}

/// Canonical description of a direct limit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitDescriptor {
    pub summands: Vec<Summand>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub annotations: Vec<String>,
    pub classified: bool,
    /// Restricted free-part matrix when `classified` is false.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback: Option<IntMatrix>,
}

impl LimitDescriptor {
    pub fn new(summands: Vec<Summand>) -> Self {
        let mut d = LimitDescriptor { summands, annotations: vec![], classified: true, fallback: None };
        d.canonicalize();
        d
    }

    pub fn trivial() -> Self {
        Self::new(vec![])
    }

    pub fn free(rank: usize) -> Self {
        Self::new(vec![Summand::free(rank)])
    }

    /// The group itself, as the limit of an automorphism system.
    pub fn from_group(g: &FgAbGroup) -> Self {
        let mut s = vec![Summand::free(g.free_rank)];
        s.extend(g.torsion.iter().map(|q| Summand::cyclic(q.clone(), 1)));
        Self::new(s)
    }

    pub fn with_annotation(mut self, note: impl Into<String>) -> Self {
        self.annotations.push(note.into());
        self
    }

    /// Merges equal kinds, drops empty summands, sorts.
    pub fn canonicalize(&mut self) {
        let mut merged: BTreeMap<(u8, BigInt, BigInt), Summand> = BTreeMap::new();
        for s in self.summands.drain(..) {
            if s.count() == 0 {
                continue;
            }
            let key = s.sort_key();
            let n = merged.get(&key).map_or(0, |m| m.count()) + s.count();
            merged.insert(key, s.with_count(n));
        }
        self.summands = merged.into_values().collect();
    }

    /// Direct sum, annotations concatenated.
    pub fn direct_sum(&self, other: &LimitDescriptor) -> LimitDescriptor {
        let mut s = self.summands.clone();
        s.extend(other.summands.iter().cloned());
        let mut d = LimitDescriptor::new(s);
        d.annotations = self.annotations.iter().chain(&other.annotations).cloned().collect();
        d.classified = self.classified && other.classified;
        d.fallback = self.fallback.clone().or_else(|| other.fallback.clone());
        d
    }

    pub fn is_trivial(&self) -> bool {
        self.summands.is_empty() && self.classified
    }

    /// Rank of the limit (dimension after tensoring with Q).
    pub fn free_rank(&self) -> usize {
        let extra = self.fallback.as_ref().map_or(0, |b| b.rows());
        self.summands
            .iter()
            .map(|s| match s {
                Summand::Free { rank } | Summand::Localized { rank, .. } => *rank,
                Summand::Cyclic { .. } => 0,
            })
            .sum::<usize>()
            + extra
    }

    pub fn has_torsion(&self) -> bool {
        self.summands.iter().any(|s| matches!(s, Summand::Cyclic { .. }))
    }

    pub fn is_torsion_free(&self) -> bool {
        !self.has_torsion()
    }

    /// The torsion subgroup in canonical (invariant factor) form.
    pub fn torsion_group(&self) -> FgAbGroup {
        let mut orders = Vec::new();
        for s in &self.summands {
            if let Summand::Cyclic { order, multiplicity } = s {
                orders.extend(std::iter::repeat_n(order.clone(), *multiplicity));
            }
        }
        FgAbGroup::from_cyclic(0, &orders)
    }

    /// The torsion-free summands only.
    pub fn torsion_free_part(&self) -> LimitDescriptor {
        let s = self.summands.iter().filter(|s| !matches!(s, Summand::Cyclic { .. })).cloned().collect();
        let mut d = LimitDescriptor::new(s);
        d.classified = self.classified;
        d.fallback = self.fallback.clone();
        d
    }

    /// Dimension of `lim / p·lim` over the field with `p` elements.
    pub fn p_rank(&self, p: &BigInt) -> Option<usize> {
        if !self.classified {
            return None;
        }
        Some(
            self.summands
                .iter()
                .map(|s| match s {
                    Summand::Free { rank } => *rank,
                    Summand::Localized { scale, rank, .. } => {
                        if scale.is_multiple_of(p) {
                            0
                        } else {
                            *rank
                        }
                    }
                    Summand::Cyclic { order, multiplicity } => {
                        if order.is_multiple_of(p) {
                            *multiplicity
                        } else {
                            0
                        }
                    }
                })
                .sum(),
        )
    }

    /// Isomorphism-type key: rank per set of inverted primes, and torsion.
    fn iso_key(&self) -> (BTreeMap<Vec<BigInt>, usize>, FgAbGroup) {
        let mut types: BTreeMap<Vec<BigInt>, usize> = BTreeMap::new();
        for s in &self.summands {
            match s {
                Summand::Free { rank } => *types.entry(vec![]).or_default() += rank,
                Summand::Localized { primes, rank, .. } => *types.entry(primes.clone()).or_default() += rank,
                Summand::Cyclic { .. } => {}
            }
        }
        types.retain(|_, v| *v > 0);
        (types, self.torsion_group())
    }

    /// Same abstract group (ignores scale exponents, rescaling and annotations).
    pub fn iso_eq(&self, other: &LimitDescriptor) -> bool {
        self.classified && other.classified && {
            let (a, ta) = self.iso_key();
            let (b, tb) = other.iso_key();
            a == b && ta.iso_eq(&tb)
        }
    }

    /// Same canonical text form (scales and rescaling included).
    pub fn text_eq(&self, other: &LimitDescriptor) -> bool {
        self.summands == other.summands && self.classified == other.classified && self.fallback == other.fallback
    }

    pub fn text(&self) -> String {
        self.to_string()
    }

    /// Parses the canonical text form.
    pub fn parse(text: &str) -> Result<LimitDescriptor> {
        let t = text.trim();
        if t == "0" {
            return Ok(LimitDescriptor::trivial());
        }
        let mut summands = Vec::new();
        let mut col = 1;
        for part in t.split('+') {
            let raw = part;
            let p = part.trim();
            let lead = raw.len() - raw.trim_start().len();
            let s = parse_summand(p).map_err(|msg| Error::Parse { line: 1, column: col + lead, msg })?;
            summands.push(s);
            col += raw.len() + 1;
        }
        Ok(LimitDescriptor::new(summands))
    }
}

impl fmt::Display for LimitDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.summands.iter().map(|s| s.to_string()).collect();
        if let Some(b) = &self.fallback {
            parts.insert(0, format!("lim(Z^{}, {})", b.rows(), b));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

fn parse_uint(s: &str) -> std::result::Result<BigInt, String> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("expected a positive integer, found `{s}`"));
    }
    let v: BigInt = s.parse().map_err(|_| format!("bad integer `{s}`"))?;
    Ok(v)
}

fn parse_count(s: &str) -> std::result::Result<usize, String> {
    parse_uint(s)?.to_usize().ok_or_else(|| format!("exponent `{s}` too large"))
}

fn split_exponent(s: &str) -> std::result::Result<(&str, usize), String> {
    match s.rfind('^') {
        Some(i) if !s[i + 1..].contains(']') && !s[i + 1..].contains(')') => Ok((&s[..i], parse_count(&s[i + 1..])?)),
        _ => Ok((s, 1)),
    }
}

fn parse_summand(p: &str) -> std::result::Result<Summand, String> {
    if p.is_empty() {
        return Err("empty summand".into());
    }
    if p == "0" {
        return Ok(Summand::free(0));
    }
    if let Some(rest) = p.strip_prefix("(Z/") {
        let (body, m) = split_exponent(rest)?;
        let q = body.strip_suffix(')').ok_or("missing `)`")?;
        return cyclic_checked(parse_uint(q)?, m);
    }
    if let Some(rest) = p.strip_prefix("Z/").or_else(|| p.strip_prefix("Z_")) {
        return cyclic_checked(parse_uint(rest)?, 1);
    }
    let (rescale, rest) = match p.strip_prefix("(1/") {
        Some(r) => {
            let close = r.find(')').ok_or("missing `)` after rescale")?;
            (parse_uint(&r[..close])?, &r[close + 1..])
        }
        None => (BigInt::one(), p),
    };
    let (body, n) = split_exponent(rest)?;
    if body == "Z" {
        if !rescale.is_one() {
            return Err("rescaled summand must be localized".into());
        }
        return Ok(Summand::free(n));
    }
    if let Some(inner) = body.strip_prefix("Z[1/").and_then(|r| r.strip_suffix(']')) {
        let scale = parse_uint(inner)?;
        if scale < BigInt::from(2) {
            return Err("localization scale must be at least 2".into());
        }
        if rescale.is_zero() {
            return Err("rescale must be positive".into());
        }
        return Ok(Summand::Localized { primes: prime_factors(&scale), scale, rank: n, rescale });
    }
    Err(format!("unrecognised summand `{p}`"))
}

fn cyclic_checked(q: BigInt, m: usize) -> std::result::Result<Summand, String> {
    if q < BigInt::from(2) {
        return Err("cyclic order must be at least 2".into());
    }
    Ok(Summand::cyclic(q, m))
}

/// Distinct prime factors by trial division.
pub fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if n.is_multiple_of(&p) {
            out.push(p.clone());
            while n.is_multiple_of(&p) {
                n /= &p;
            }
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_roundtrip() {
        for t in
            ["0", "Z", "Z^5 + Z[1/3]^2 + Z[1/5] + Z/2", "Z[1/2]^2 + (1/3)Z[1/4]", "Z^6 + Z[1/5] + Z[1/3]^2 + (Z/2)^5"]
        {
            let d = LimitDescriptor::parse(t).unwrap();
            let again = LimitDescriptor::parse(&d.text()).unwrap();
            assert_eq!(d, again);
        }
        assert_eq!(
            LimitDescriptor::parse("Z/2 + Z[1/5] + Z^5 + Z[1/3]^2").unwrap().text(),
            "Z^5 + Z[1/3]^2 + Z[1/5] + Z/2"
        );
        assert_eq!(LimitDescriptor::parse("Z[1/2]^2 + (1/3)Z[1/4]").unwrap().text(), "Z[1/2]^2 + (1/3)Z[1/4]");
    }

    #[test]
    fn parse_errors() {
        assert!(LimitDescriptor::parse("Q").is_err());
        assert!(LimitDescriptor::parse("Z + ").is_err());
        assert!(LimitDescriptor::parse("Z/1").is_err());
        assert!(LimitDescriptor::parse("Z[1/1]").is_err());
    }

    #[test]
    fn iso_vs_text() {
        let a = LimitDescriptor::parse("Z[1/4] + Z[1/2]^2").unwrap();
        let b = LimitDescriptor::parse("Z[1/2]^3").unwrap();
        assert!(a.iso_eq(&b));
        assert!(!a.text_eq(&b));
        let c = LimitDescriptor::parse("Z[1/6]").unwrap();
        assert!(!c.iso_eq(&LimitDescriptor::parse("Z[1/2]").unwrap()));
    }

    #[test]
    fn p_ranks() {
        let d = LimitDescriptor::parse("Z^5 + Z[1/3]^2 + Z[1/5] + Z/2").unwrap();
        assert_eq!(d.p_rank(&BigInt::from(2)), Some(9));
        assert_eq!(d.p_rank(&BigInt::from(3)), Some(6));
        assert_eq!(d.p_rank(&BigInt::from(5)), Some(7));
    }

    #[test]
    fn json_shape() {
        let d = LimitDescriptor::parse("Z[1/4] + Z/3").unwrap();
        let j = serde_json::to_string(&d).unwrap();
        assert_eq!(
            j,
            r#"{"summands":[{"kind":"localized","scale":"4","primes":["2"],"rank":1,"rescale":"1"},{"kind":"cyclic","order":"3","multiplicity":1}],"classified":true}"#
        );
        let back: LimitDescriptor = serde_json::from_str(&j).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn primes() {
        assert_eq!(prime_factors(&BigInt::from(360)), [2, 3, 5].map(BigInt::from));
        assert_eq!(prime_factors(&BigInt::from(47)), [BigInt::from(47)]);
    }
}
