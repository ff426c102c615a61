use std::collections::BTreeMap;
use std::fmt;

use crate::exact_algebra::Rat;

/// A regular formal module up to unipotent structure: a multiset of local
/// exponents in `[0, 1)`, one per rank-one Jordan–Hölder factor.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RegularPart {
    exponents: BTreeMap<Rat, u32>,
}

impl RegularPart {
    /// Exponents are reduced modulo ℤ.
    pub fn new(exponents: impl IntoIterator<Item = Rat>) -> Self {
        let mut map = BTreeMap::new();
        for e in exponents {
            *map.entry(e.fract_unit()).or_insert(0) += 1;
        }
        RegularPart { exponents: map }
    }

    /// `rank` copies of the trivial connection.
    pub fn trivial(rank: u32) -> Self {
        let mut exponents = BTreeMap::new();
        if rank > 0 {
            exponents.insert(Rat::zero(), rank);
        }
        RegularPart { exponents }
    }

    pub fn rank(&self) -> u32 {
        self.exponents.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.keys().all(|e| e.is_zero())
    }

    /// `(exponent, multiplicity)` in increasing exponent order.
    pub fn exponents(&self) -> impl Iterator<Item = (&Rat, u32)> {
        self.exponents.iter().map(|(e, &m)| (e, m))
    }

    /// Exponents listed with multiplicity.
    pub fn exponent_list(&self) -> Vec<Rat> {
        self.exponents
            .iter()
            .flat_map(|(e, &m)| std::iter::repeat_n(e.clone(), m as usize))
            .collect()
    }

    pub fn direct_sum(&self, other: &RegularPart) -> RegularPart {
        let mut exponents = self.exponents.clone();
        for (e, &m) in &other.exponents {
            *exponents.entry(e.clone()).or_insert(0) += m;
        }
        RegularPart { exponents }
    }

    pub fn dual(&self) -> RegularPart {
        self.map(|e| -e)
    }

    /// Inverse image along `t = s^q`: exponents multiply by `q`.
    pub fn pullback(&self, q: u32) -> RegularPart {
        let q = Rat::from(q);
        self.map(|e| e * &q)
    }

    /// Direct image along `t = s^d`: each exponent `e` splits into `(e + j)/d`, `0 ≤ j < d`.
    pub fn pushforward(&self, d: u32) -> RegularPart {
        if d == 1 {
            return self.clone();
        }
        let mut exponents = BTreeMap::new();
        let dd = Rat::from(d);
        for (e, &m) in &self.exponents {
            for j in 0..d {
                let x = (e + Rat::from(j)) / &dd;
                *exponents.entry(x.fract_unit()).or_insert(0) += m;
            }
        }
        RegularPart { exponents }
    }

    pub fn tensor(&self, other: &RegularPart) -> RegularPart {
        let mut exponents = BTreeMap::new();
        for (a, &m) in &self.exponents {
            for (b, &n) in &other.exponents {
                *exponents.entry((a + b).fract_unit()).or_insert(0) += m * n;
            }
        }
        RegularPart { exponents }
    }

    fn map(&self, f: impl Fn(&Rat) -> Rat) -> RegularPart {
        let mut exponents = BTreeMap::new();
        for (e, &m) in &self.exponents {
            *exponents.entry(f(e).fract_unit()).or_insert(0) += m;
        }
        RegularPart { exponents }
    }
}

impl fmt::Debug for RegularPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Reg{:?}", self.exponents)
    }
}
