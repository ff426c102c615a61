use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use super::regular::RegularPart;
use super::CalcError;
use crate::exact_algebra::{CycloRat, RamifiedExponent, Rat};

/// `El(p, φ, R) = ρ_{p+}(E^φ ⊗ R)` for `ρ_p : u ↦ u^p = x`.
///
/// Always held in canonical form: `p` equals the reduced ramification of `φ`
/// (a reducible index has been absorbed into `R` by pushing it forward), `φ`
/// is the distinguished representative of its Galois orbit, and `R` is
/// expressed in the variable `u`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementaryModule {
    phi: RamifiedExponent,
    reg: RegularPart,
}

impl ElementaryModule {
    /// Builds `El(ram, φ, R)` where `φ` may be written in any ramification
    /// dividing `ram` and `R` is a regular module on the degree-`ram` cover.
    pub fn new(ram: u32, phi: RamifiedExponent, reg: RegularPart) -> Result<Self, CalcError> {
        if ram == 0 {
            return Err(CalcError::InvalidRamification(ram));
        }
        if !ram.is_multiple_of(phi.ram()) {
            return Err(CalcError::RamificationMismatch {
                ram,
                exponent_ram: phi.ram(),
            });
        }
        let d = ram / phi.ram();
        Ok(ElementaryModule {
            phi: phi.galois_canonical(),
            reg: reg.pushforward(d),
        })
    }

    /// `El(ram, Σ c_k u^k, R)` from raw terms in `u = x^{1/ram}`.
    pub fn from_terms(
        ram: u32,
        terms: impl IntoIterator<Item = (i64, CycloRat)>,
        reg: RegularPart,
    ) -> Result<Self, CalcError> {
        if ram == 0 {
            return Err(CalcError::InvalidRamification(ram));
        }
        Self::new(ram, RamifiedExponent::new(ram, terms), reg)
    }

    /// `El(1, 0, R)`.
    pub fn regular(reg: RegularPart) -> Self {
        ElementaryModule {
            phi: RamifiedExponent::zero(),
            reg,
        }
    }

    pub fn ram(&self) -> u32 {
        self.phi.ram()
    }

    pub fn phi(&self) -> &RamifiedExponent {
        &self.phi
    }

    pub fn reg(&self) -> &RegularPart {
        &self.reg
    }

    pub fn rank(&self) -> u64 {
        self.ram() as u64 * self.reg.rank() as u64
    }

    /// `ord φ / p`.
    pub fn slope(&self) -> Rat {
        self.phi.slope()
    }

    pub fn is_regular(&self) -> bool {
        self.phi.is_zero()
    }

    pub fn dual(&self) -> ElementaryModule {
        ElementaryModule {
            phi: (-&self.phi).galois_canonical(),
            reg: self.reg.dual(),
        }
    }

    /// Inverse image along `x = v^q`.
    ///
    /// With `g = gcd(p, q)`, `p = g·p'`, `q = g·q'`, the fibre product of the
    /// two covers has `g` branches `u = ζ_p^j w^{q'}`, `w^{p'} = v`, giving
    /// `⊕_{j<g} El(p', φ(ζ_p^j w^{q'}), R(w^{q'}))`.
    pub fn pullback(&self, q: u32) -> Vec<ElementaryModule> {
        assert!(q >= 1, "pullback degree must be at least 1");
        let p = self.ram();
        let g = p.gcd(&q);
        let (p1, q1) = (p / g, q / g);
        let reg = self.reg.pullback(q1);
        (0..g as i64)
            .map(|j| {
                let terms: Vec<(i64, CycloRat)> = self
                    .phi
                    .rotate(j)
                    .terms()
                    .map(|(k, c)| (k * q1 as i64, c.clone()))
                    .collect();
                Self::from_terms(p1, terms, reg.clone()).expect("p' ≥ 1")
            })
            .collect()
    }

    /// Direct image along `x ↦ x^p`: `El(q, φ, R) ↦ El(pq, φ, R)`.
    pub fn pushforward(&self, p: u32) -> ElementaryModule {
        assert!(p >= 1, "pushforward degree must be at least 1");
        let ram = p * self.ram();
        let terms = self.phi.terms().map(|(k, c)| (k, c.clone()));
        Self::from_terms(ram, terms, self.reg.clone()).expect("ram ≥ 1")
    }

    /// Tensor product via the projection formula: over the common cover
    /// `w^L = x`, `L = lcm(p1, p2)`, the factors pair up along the `g = gcd`
    /// classes of conjugates, `χ_j(w) = φ1(w^{p2'}) + φ2(ζ_{p2}^j w^{p1'})`.
    pub fn tensor(&self, other: &ElementaryModule) -> Vec<ElementaryModule> {
        let (p1, p2) = (self.ram(), other.ram());
        let g = p1.gcd(&p2);
        let l = p1.lcm(&p2);
        let (p1s, p2s) = (p1 / g, p2 / g);
        let reg = self.reg.pullback(p2s).tensor(&other.reg.pullback(p1s));
        let base = self.phi.lift(l);
        (0..g as i64)
            .map(|j| {
                let mut terms: Vec<(i64, CycloRat)> =
                    base.iter().map(|(&k, c)| (k, c.clone())).collect();
                terms.extend(other.phi.rotate(j).lift(l));
                Self::from_terms(l, terms, reg.clone()).expect("lcm ≥ 1")
            })
            .collect()
    }

    /// Rank of the slope-zero part of `self ⊗ other`.
    ///
    /// Runs the pairing of [`ElementaryModule::tensor`] but only tests which
    /// `χ_j` vanish; each such class contributes `L · rank(R)`.
    pub fn tensor_regular_rank(&self, other: &ElementaryModule) -> u64 {
        let (p1, p2) = (self.ram(), other.ram());
        let g = p1.gcd(&p2);
        let l = p1.lcm(&p2);
        let reg_rank = self.reg.rank() as u64 * other.reg.rank() as u64;
        let base = self.phi.lift(l);
        let cancelling = (0..g as i64)
            .filter(|&j| {
                let rotated = other.phi.rotate(j).lift(l);
                rotated.len() == base.len()
                    && rotated
                        .iter()
                        .all(|(k, c)| base.get(k).is_some_and(|b| (b + c).is_zero()))
            })
            .count() as u64;
        cancelling * l as u64 * reg_rank
    }
}

impl fmt::Display for ElementaryModule {
    /// `El(p, φ, rank=k[, exp=[...]])`, or `Reg(rank=k[, exp=[...]])` when `φ = 0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_regular() {
            write!(f, "Reg(rank={}", self.reg.rank())?;
        } else {
            write!(
                f,
                "El({}, {}, rank={}",
                self.ram(),
                self.phi,
                self.reg.rank()
            )?;
        }
        if !self.reg.is_trivial() {
            f.write_str(", exp=[")?;
            for (i, e) in self.reg.exponent_list().iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str("]")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for ElementaryModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite direct sum of elementary modules, canonicalized: isomorphic
/// factors merged by summing regular parts, zero factors dropped, factors
/// sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FormalModule {
    factors: Vec<ElementaryModule>,
}

impl FormalModule {
    pub fn zero() -> Self {
        FormalModule::default()
    }

    pub fn from_factors(factors: impl IntoIterator<Item = ElementaryModule>) -> Self {
        let mut merged: BTreeMap<RamifiedExponent, RegularPart> = BTreeMap::new();
        for el in factors {
            if el.reg.is_zero() {
                continue;
            }
            match merged.get_mut(&el.phi) {
                Some(reg) => *reg = reg.direct_sum(&el.reg),
                None => {
                    merged.insert(el.phi, el.reg);
                }
            }
        }
        FormalModule {
            factors: merged
                .into_iter()
                .map(|(phi, reg)| ElementaryModule { phi, reg })
                .collect(),
        }
    }

    pub fn elementary(el: ElementaryModule) -> Self {
        Self::from_factors([el])
    }

    pub fn regular(reg: RegularPart) -> Self {
        Self::from_factors([ElementaryModule::regular(reg)])
    }

    pub fn factors(&self) -> &[ElementaryModule] {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn rank(&self) -> u64 {
        self.factors.iter().map(ElementaryModule::rank).sum()
    }

    /// Slope multiset: slope ↦ total rank of factors with that slope.
    pub fn slopes(&self) -> BTreeMap<Rat, u64> {
        let mut out = BTreeMap::new();
        for el in &self.factors {
            *out.entry(el.slope()).or_insert(0) += el.rank();
        }
        out
    }

    pub fn max_slope(&self) -> Option<Rat> {
        self.factors.iter().map(ElementaryModule::slope).max()
    }

    /// `Σ slope · multiplicity`.
    pub fn irregularity(&self) -> Rat {
        self.slopes()
            .into_iter()
            .map(|(s, m)| s * Rat::from(m))
            .sum()
    }

    /// Rank of the slope-zero part.
    pub fn regular_rank(&self) -> u64 {
        self.factors
            .iter()
            .filter(|el| el.is_regular())
            .map(ElementaryModule::rank)
            .sum()
    }

    pub fn is_regular(&self) -> bool {
        self.factors.iter().all(ElementaryModule::is_regular)
    }

    pub fn direct_sum(&self, other: &FormalModule) -> FormalModule {
        Self::from_factors(self.factors.iter().chain(&other.factors).cloned())
    }

    pub fn dual(&self) -> FormalModule {
        Self::from_factors(self.factors.iter().map(ElementaryModule::dual))
    }

    /// Inverse image along `x = v^q`. Panics if `q = 0`.
    pub fn pullback(&self, q: u32) -> FormalModule {
        Self::from_factors(self.factors.iter().flat_map(|el| el.pullback(q)))
    }

    /// Direct image along `x ↦ x^p`. Panics if `p = 0`.
    pub fn pushforward(&self, p: u32) -> FormalModule {
        Self::from_factors(self.factors.iter().map(|el| el.pushforward(p)))
    }

    /// `(self ⊗ other).regular_rank()` without assembling the product.
    pub fn tensor_regular_rank(&self, other: &FormalModule) -> u64 {
        self.factors
            .iter()
            .flat_map(|a| other.factors.iter().map(move |b| a.tensor_regular_rank(b)))
            .sum()
    }

    pub fn tensor(&self, other: &FormalModule) -> FormalModule {
        Self::from_factors(
            self.factors
                .iter()
                .flat_map(|a| other.factors.iter().flat_map(move |b| a.tensor(b))),
        )
    }
}

impl fmt::Display for FormalModule {
    /// Factors joined by ` + `; the zero module prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, el) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{el}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FormalModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
