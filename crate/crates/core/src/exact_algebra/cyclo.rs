//! Exact elements of cyclotomic fields.
//!
//! An element of ℚ(ζ_N) is stored in the tensor basis
//! ℚ(ζ_N) = ⊗_{p^e ‖ N} ℚ(ζ_{p^e}), each factor with its power basis
//! `1, ζ_{p^e}, …, ζ_{p^e}^{φ(p^e)−1}` reduced modulo `Φ_{p^e}`. Every stored
//! value sits at its conductor (the least `N` with the element in ℚ(ζ_N),
//! never `≡ 2 mod 4`), so structural equality is field equality. The basis is
//! compatible with the subfield tower: ℚ(ζ_{p^f}) ⊂ ℚ(ζ_{p^e}) is spanned by the
//! basis vectors whose exponent is a multiple of `p^{e-f}`, which makes both
//! embedding and demotion coordinate maps.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;

use super::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycloError {
    #[error("cyclotomic order must be at least 1")]
    ZeroOrder,
    #[error("order {target} is not a multiple of the conductor {conductor}")]
    IncompatibleOrder { conductor: u64, target: u64 },
    #[error("expected {expected} coordinates for order {order}, got {got}")]
    CoordinateCount {
        order: u64,
        expected: usize,
        got: usize,
    },
}

/// An element of the cyclotomic field ℚ(ζ_N), `N = order`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycloRat {
    order: u64,
    coords: Vec<Rat>,
}

#[derive(Debug, Clone)]
struct Component {
    p: u64,
    e: u32,
    pe: u64,
    /// `p^{e-1}`
    pe1: u64,
    dim: usize,
    stride: usize,
    /// `N / p^e`
    cofactor: u64,
    /// inverse of `N / p^e` modulo `p^e`
    cofactor_inv: u64,
}

#[derive(Debug, Clone)]
struct Layout {
    order: u64,
    comps: Vec<Component>,
    len: usize,
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub(crate) fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let g = (a as i128).extended_gcd(&(m as i128));
    debug_assert_eq!(g.gcd, 1);
    g.x.rem_euclid(m as i128) as u64
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

impl Layout {
    fn new(order: u64) -> Layout {
        let factors = factorize(order);
        let mut comps: Vec<Component> = factors
            .into_iter()
            .map(|(p, e)| {
                let pe = p.pow(e);
                let pe1 = p.pow(e - 1);
                let cofactor = order / pe;
                Component {
                    p,
                    e,
                    pe,
                    pe1,
                    dim: ((p - 1) * pe1) as usize,
                    stride: 0,
                    cofactor,
                    cofactor_inv: mod_inverse(cofactor % pe, pe),
                }
            })
            .collect();
        let mut stride = 1;
        for c in comps.iter_mut().rev() {
            c.stride = stride;
            stride *= c.dim;
        }
        Layout {
            order,
            comps,
            len: stride,
        }
    }

    fn digit(&self, comp: &Component, idx: usize) -> usize {
        (idx / comp.stride) % comp.dim
    }

    /// The basis vector at `idx` is the root of unity `ζ_N^kappa`.
    fn kappa(&self, idx: usize) -> u64 {
        self.comps.iter().fold(0, |acc, c| {
            (acc + mulmod(self.digit(c, idx) as u64, c.cofactor, self.order)) % self.order
        })
    }

    /// Coordinates of `ζ_N^k` as signed unit entries.
    fn expand(&self, k: u64, out: &mut Vec<(usize, i64)>) {
        out.clear();
        out.push((0, 1));
        for c in &self.comps {
            let kl = mulmod(k % c.pe, c.cofactor_inv, c.pe);
            if (kl as usize) < c.dim {
                for entry in out.iter_mut() {
                    entry.0 += kl as usize * c.stride;
                }
            } else {
                let base = kl - c.dim as u64;
                let prev = std::mem::take(out);
                for (idx, s) in prev {
                    for t in 0..c.p - 1 {
                        let d = (base + t * c.pe1) as usize;
                        out.push((idx + d * c.stride, -s));
                    }
                }
            }
        }
    }
}

fn nonzero(coords: &[Rat]) -> impl Iterator<Item = (usize, &Rat)> {
    coords.iter().enumerate().filter(|(_, c)| !c.is_zero())
}

impl CycloRat {
    pub fn zero() -> Self {
        CycloRat {
            order: 1,
            coords: vec![Rat::zero()],
        }
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    pub fn from_rat(r: Rat) -> Self {
        CycloRat {
            order: 1,
            coords: vec![r],
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rat(Rat::from_integer(n))
    }

    /// `ζ_n^k` for a primitive `n`-th root of unity `ζ_n = exp(2πi/n)`.
    pub fn root_of_unity(n: u64, k: i64) -> Result<Self, CycloError> {
        if n == 0 {
            return Err(CycloError::ZeroOrder);
        }
        Ok(Self::one().mul_root(n, k))
    }

    /// Builds an element from coordinates in the basis of ℚ(ζ_order) and
    /// reduces it to its conductor.
    pub fn from_coords(order: u64, coords: Vec<Rat>) -> Result<Self, CycloError> {
        if order == 0 {
            return Err(CycloError::ZeroOrder);
        }
        let expected = euler_phi(order) as usize;
        if coords.len() != expected {
            return Err(CycloError::CoordinateCount {
                order,
                expected,
                got: coords.len(),
            });
        }
        Ok(Self::normalized(order, coords))
    }

    /// The conductor: least `N` with `self ∈ ℚ(ζ_N)`.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.order == 1 && self.coords[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.coords[0].is_one()
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        if self.order == 1 {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    /// Coordinates of `self` inside ℚ(ζ_target).
    pub fn embed(&self, target: u64) -> Result<Vec<Rat>, CycloError> {
        if target == 0 {
            return Err(CycloError::ZeroOrder);
        }
        if !target.is_multiple_of(self.order) {
            return Err(CycloError::IncompatibleOrder {
                conductor: self.order,
                target,
            });
        }
        Ok(self.promote(&Layout::new(target)))
    }

    /// `(coefficient, k)` pairs with `self = Σ coefficient·ζ_N^k`, `N = order`.
    pub fn terms(&self) -> Vec<(Rat, u64)> {
        let layout = Layout::new(self.order);
        nonzero(&self.coords)
            .map(|(idx, c)| (c.clone(), layout.kappa(idx)))
            .collect()
    }

    pub fn scale(&self, r: &Rat) -> CycloRat {
        if r.is_zero() {
            return CycloRat::zero();
        }
        CycloRat {
            order: self.order,
            coords: self.coords.iter().map(|c| c * r).collect(),
        }
    }

    /// `self · ζ_n^k`.
    pub fn mul_root(&self, n: u64, k: i64) -> CycloRat {
        assert!(n > 0, "root of unity of order 0");
        if self.is_zero() {
            return CycloRat::zero();
        }
        let order = self.order.lcm(&n);
        let layout = Layout::new(order);
        let shift = mulmod(k.rem_euclid(n as i64) as u64, order / n, order);
        let src = self.promote(&layout);
        let mut out = vec![Rat::zero(); layout.len];
        let mut buf = Vec::new();
        for (idx, c) in nonzero(&src) {
            layout.expand((layout.kappa(idx) + shift) % order, &mut buf);
            for &(j, s) in &buf {
                if s > 0 {
                    out[j] += c;
                } else {
                    out[j] -= c;
                }
            }
        }
        Self::normalized(order, out)
    }

    /// The Galois automorphism `ζ_N ↦ ζ_N^t` applied to `self` (`t` coprime to the order).
    pub fn galois(&self, t: u64) -> CycloRat {
        let layout = Layout::new(self.order);
        debug_assert_eq!(t.gcd(&self.order), 1);
        let mut out = vec![Rat::zero(); layout.len];
        let mut buf = Vec::new();
        for (idx, c) in nonzero(&self.coords) {
            layout.expand(
                mulmod(layout.kappa(idx), t % self.order.max(1), self.order),
                &mut buf,
            );
            for &(j, s) in &buf {
                if s > 0 {
                    out[j] += c;
                } else {
                    out[j] -= c;
                }
            }
        }
        Self::normalized(self.order, out)
    }

    /// Multiplicative inverse via the norm: `x⁻¹ = Π_{σ≠1} σ(x) / N(x)`.
    pub fn inv(&self) -> Option<CycloRat> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rat() {
            return Some(CycloRat::from_rat(r.recip()?));
        }
        let mut conj = CycloRat::one();
        for t in 2..self.order {
            if t.gcd(&self.order) == 1 {
                conj = &conj * &self.galois(t);
            }
        }
        let norm = self * &conj;
        let norm = norm
            .as_rat()
            .expect("field norm of a cyclotomic number is rational")
            .clone();
        Some(conj.scale(&norm.recip()?))
    }

    pub fn pow(&self, k: i64) -> Option<CycloRat> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = CycloRat::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Some(acc)
    }

    fn promote(&self, target: &Layout) -> Vec<Rat> {
        debug_assert_eq!(target.order % self.order, 0);
        if target.order == self.order {
            return self.coords.clone();
        }
        let src = Layout::new(self.order);
        let mut out = vec![Rat::zero(); target.len];
        for (idx, c) in nonzero(&self.coords) {
            let mut j = 0;
            for tc in &target.comps {
                if let Some(sc) = src.comps.iter().find(|sc| sc.p == tc.p) {
                    let d = src.digit(sc, idx) as u64 * tc.p.pow(tc.e - sc.e);
                    j += d as usize * tc.stride;
                }
            }
            out[j] = c.clone();
        }
        out
    }

    /// Reduces `coords` (in the basis of ℚ(ζ_order)) to the conductor.
    fn normalized(order: u64, coords: Vec<Rat>) -> CycloRat {
        if coords.iter().all(|c| c.is_zero()) {
            return CycloRat::zero();
        }
        if order == 1 {
            return CycloRat { order, coords };
        }
        let layout = Layout::new(order);
        let support: Vec<usize> = nonzero(&coords).map(|(i, _)| i).collect();
        // (exponent f of the subfield, step p^{e-f}) for each component
        let mut keep = Vec::with_capacity(layout.comps.len());
        let mut new_order = 1u64;
        for c in &layout.comps {
            let digits: Vec<u64> = support.iter().map(|&i| layout.digit(c, i) as u64).collect();
            let f = if digits.iter().all(|&d| d == 0) {
                0
            } else {
                (1..=c.e)
                    .find(|&f| {
                        let step = c.p.pow(c.e - f);
                        digits.iter().all(|d| d % step == 0)
                    })
                    .unwrap_or(c.e)
            };
            new_order *= c.p.pow(f);
            keep.push((f, c.p.pow(c.e - f)));
        }
        if new_order == order {
            return CycloRat { order, coords };
        }
        let target = Layout::new(new_order);
        let mut out = vec![Rat::zero(); target.len];
        for &i in &support {
            let mut j = 0;
            for (c, &(f, step)) in layout.comps.iter().zip(&keep) {
                if f == 0 {
                    continue;
                }
                let tc = target
                    .comps
                    .iter()
                    .find(|tc| tc.p == c.p)
                    .expect("kept prime present in target layout");
                j += (layout.digit(c, i) / step as usize) * tc.stride;
            }
            out[j] = coords[i].clone();
        }
        CycloRat {
            order: new_order,
            coords: out,
        }
    }

    fn add_impl(&self, rhs: &CycloRat, negate: bool) -> CycloRat {
        let order = self.order.lcm(&rhs.order);
        let layout = Layout::new(order);
        let mut a = self.promote(&layout);
        let b = rhs.promote(&layout);
        for (x, y) in a.iter_mut().zip(&b) {
            if negate {
                *x -= y;
            } else {
                *x += y;
            }
        }
        Self::normalized(order, a)
    }

    fn mul_impl(&self, rhs: &CycloRat) -> CycloRat {
        if let Some(r) = self.as_rat() {
            return rhs.scale(r);
        }
        if let Some(r) = rhs.as_rat() {
            return self.scale(r);
        }
        let order = self.order.lcm(&rhs.order);
        let layout = Layout::new(order);
        let a = self.promote(&layout);
        let b = rhs.promote(&layout);
        let kb: Vec<(u64, &Rat)> = nonzero(&b).map(|(j, c)| (layout.kappa(j), c)).collect();
        let mut out = vec![Rat::zero(); layout.len];
        let mut buf = Vec::new();
        for (i, x) in nonzero(&a) {
            let ka = layout.kappa(i);
            for &(kbj, y) in &kb {
                let prod = x * y;
                layout.expand((ka + kbj) % order, &mut buf);
                for &(j, s) in &buf {
                    if s > 0 {
                        out[j] += &prod;
                    } else {
                        out[j] -= &prod;
                    }
                }
            }
        }
        Self::normalized(order, out)
    }
}

impl Default for CycloRat {
    fn default() -> Self {
        CycloRat::zero()
    }
}

impl From<Rat> for CycloRat {
    fn from(r: Rat) -> Self {
        CycloRat::from_rat(r)
    }
}

impl Add<&CycloRat> for &CycloRat {
    type Output = CycloRat;
    fn add(self, rhs: &CycloRat) -> CycloRat {
        self.add_impl(rhs, false)
    }
}

impl Sub<&CycloRat> for &CycloRat {
    type Output = CycloRat;
    fn sub(self, rhs: &CycloRat) -> CycloRat {
        self.add_impl(rhs, true)
    }
}

impl Mul<&CycloRat> for &CycloRat {
    type Output = CycloRat;
    fn mul(self, rhs: &CycloRat) -> CycloRat {
        self.mul_impl(rhs)
    }
}

impl Neg for &CycloRat {
    type Output = CycloRat;
    fn neg(self) -> CycloRat {
        CycloRat {
            order: self.order,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycloRat {
    type Output = CycloRat;
    fn neg(self) -> CycloRat {
        -&self
    }
}

impl fmt::Display for CycloRat {
    /// Sum of `c*zeta(N)^k` terms; parseable by the module expression language.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rat() {
            return write!(f, "{r}");
        }
        for (pos, (c, k)) in self.terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (pos, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let root = match k {
                0 => None,
                1 => Some(format!("zeta({})", self.order)),
                _ => Some(format!("zeta({})^{k}", self.order)),
            };
            match root {
                None => write!(f, "{mag}")?,
                Some(root) if mag.is_one() => f.write_str(&root)?,
                Some(root) => write!(f, "{mag}*{root}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycloRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
