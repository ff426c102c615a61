//! Principal parts of Puiseux series: the exponent `φ` of a twist `E^φ`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use super::cyclo::CycloRat;
use super::rat::Rat;

/// A principal-part Laurent polynomial `φ(u) = Σ_{k<0} c_k u^k` in a root
/// `u = x^{1/ram}` of the base coordinate.
///
/// The representation is canonical for the underlying Puiseux element:
/// nonnegative powers are dropped, and `ram` is the least ramification index
/// in which `φ` can be written (no `d > 1` divides both `ram` and every
/// stored exponent). The zero exponent has `ram = 1` and no terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RamifiedExponent {
    ram: u32,
    terms: BTreeMap<i64, CycloRat>,
}

impl RamifiedExponent {
    pub fn zero() -> Self {
        RamifiedExponent {
            ram: 1,
            terms: BTreeMap::new(),
        }
    }

    /// `Σ c_k u^k` with `u^ram = x`. Duplicate exponents are summed,
    /// nonnegative powers dropped, and the ramification reduced.
    pub fn new(ram: u32, terms: impl IntoIterator<Item = (i64, CycloRat)>) -> Self {
        assert!(ram >= 1, "ramification index must be at least 1");
        let mut acc: BTreeMap<i64, CycloRat> = BTreeMap::new();
        for (k, c) in terms {
            if k >= 0 || c.is_zero() {
                continue;
            }
            match acc.get_mut(&k) {
                Some(slot) => *slot = &*slot + &c,
                None => {
                    acc.insert(k, c);
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Self::reduced(ram, acc)
    }

    /// `c·u^k` in ramification `ram`.
    pub fn monomial(ram: u32, k: i64, c: CycloRat) -> Self {
        Self::new(ram, [(k, c)])
    }

    fn reduced(ram: u32, terms: BTreeMap<i64, CycloRat>) -> Self {
        if terms.is_empty() {
            return Self::zero();
        }
        let d = terms
            .keys()
            .fold(ram as u64, |g, k| g.gcd(&k.unsigned_abs()));
        if d == 1 {
            return RamifiedExponent { ram, terms };
        }
        let d_i = d as i64;
        RamifiedExponent {
            ram: ram / d as u32,
            terms: terms.into_iter().map(|(k, c)| (k / d_i, c)).collect(),
        }
    }

    pub fn ram(&self) -> u32 {
        self.ram
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Pole order `−min k` in the variable `u`; zero for the zero exponent.
    pub fn ord(&self) -> u64 {
        self.terms
            .keys()
            .next()
            .map(|k| k.unsigned_abs())
            .unwrap_or(0)
    }

    /// Pole order in `x`: `ord / ram`.
    pub fn slope(&self) -> Rat {
        Rat::new(self.ord() as i64, self.ram as i64)
    }

    /// Terms in increasing exponent order (most polar first).
    pub fn terms(&self) -> impl Iterator<Item = (i64, &CycloRat)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn leading(&self) -> Option<(i64, &CycloRat)> {
        self.terms().next()
    }

    /// Exponent map of `self` rewritten in the variable `w = x^{1/target}`
    /// (`target` a multiple of `ram`), without reduction.
    pub fn lift(&self, target: u32) -> BTreeMap<i64, CycloRat> {
        assert!(
            target.is_multiple_of(self.ram),
            "lift target {target} is not a multiple of {}",
            self.ram
        );
        let f = (target / self.ram) as i64;
        self.terms
            .iter()
            .map(|(&k, c)| (k * f, c.clone()))
            .collect()
    }

    /// Deck transformation `φ(u) ↦ φ(ζ_ram^j u)`.
    pub fn rotate(&self, j: i64) -> Self {
        let n = self.ram as u64;
        let terms = self
            .terms
            .iter()
            .map(|(&k, c)| (k, c.mul_root(n, j * k)))
            .collect();
        RamifiedExponent {
            ram: self.ram,
            terms,
        }
    }

    /// `φ(ζ·u^scale)`, with the ramification index kept.
    ///
    /// On the underlying Puiseux element this scales every exponent of `x` by
    /// `scale` and twists coefficients by `ζ^k`; the result is re-reduced, so
    /// `ord` multiplies by `scale` exactly when `gcd(scale, ram) = 1`, and the
    /// slope always multiplies by `scale`.
    pub fn substitute(&self, zeta: &CycloRat, scale: u32) -> Self {
        assert!(scale >= 1, "substitution scale must be at least 1");
        let zeta_inv = zeta.inv().expect("substituted root of unity is nonzero");
        let terms: Vec<(i64, CycloRat)> = self
            .terms
            .iter()
            .map(|(&k, c)| {
                let z = zeta_inv.pow(-k).expect("nonzero power");
                (k * scale as i64, c * &z)
            })
            .collect();
        Self::new(self.ram, terms)
    }

    /// The distinguished representative of the orbit `{φ(ζ_ram^j u)}`.
    ///
    /// Coefficients of all conjugates are compared, most polar term first, by
    /// their coordinates in the common field ℚ(ζ_L), `L` the normalized lcm of
    /// `ram` and the coefficient conductors (the same for every orbit member).
    pub fn galois_canonical(&self) -> Self {
        if self.ram == 1 || self.is_zero() {
            return self.clone();
        }
        let mut field = self.ram as u64;
        for c in self.terms.values() {
            field = field.lcm(&c.order());
        }
        if field % 4 == 2 {
            field /= 2;
        }
        let n = self.ram as u64;
        let mut alive: Vec<i64> = (0..self.ram as i64).collect();
        for (&k, c) in &self.terms {
            if alive.len() == 1 {
                break;
            }
            let keyed: Vec<(Vec<Rat>, i64)> = alive
                .iter()
                .map(|&j| {
                    let coords = c
                        .mul_root(n, j * k)
                        .embed(field)
                        .expect("conjugate lies in the orbit field");
                    (coords, j)
                })
                .collect();
            let best = keyed
                .iter()
                .map(|(v, _)| v)
                .min()
                .expect("nonempty orbit")
                .clone();
            alive = keyed
                .into_iter()
                .filter(|(v, _)| *v == best)
                .map(|(_, j)| j)
                .collect();
        }
        self.rotate(alive[0])
    }

    /// Sum of two Puiseux principal parts.
    pub fn add(&self, other: &Self) -> Self {
        let l = self.ram.lcm(&other.ram);
        let mut terms: Vec<(i64, CycloRat)> = self.lift(l).into_iter().collect();
        terms.extend(other.lift(l));
        Self::new(l, terms)
    }
}

impl std::ops::Neg for &RamifiedExponent {
    type Output = RamifiedExponent;
    fn neg(self) -> RamifiedExponent {
        RamifiedExponent {
            ram: self.ram,
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
}

impl fmt::Display for RamifiedExponent {
    /// Laurent polynomial in `u`, e.g. `-u^-2 + 1/2*u^-1`; `0` for zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (pos, (k, c)) in self.terms().enumerate() {
            let parts = c.terms();
            let (neg, coeff) = match parts.as_slice() {
                [(r, _)] if r.is_negative() => (true, -c),
                _ => (false, c.clone()),
            };
            match (pos, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if parts.len() > 1 {
                write!(f, "({coeff})*")?;
            } else if !coeff.is_one() {
                write!(f, "{coeff}*")?;
            }
            write!(f, "u^{k}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for RamifiedExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[ram {}] {}", self.ram, self)
    }
}
