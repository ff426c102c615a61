use std::collections::BTreeMap;
use std::fmt;

use super::rat::Rat;

/// A Laurent polynomial in `x` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Laurent {
    terms: BTreeMap<i64, Rat>,
}

impl Laurent {
    pub fn new(terms: impl IntoIterator<Item = (i64, Rat)>) -> Self {
        let mut acc: BTreeMap<i64, Rat> = BTreeMap::new();
        for (k, c) in terms {
            *acc.entry(k).or_default() += &c;
        }
        acc.retain(|_, c| !c.is_zero());
        Laurent { terms: acc }
    }

    pub fn monomial(k: i64, c: Rat) -> Self {
        Self::new([(k, c)])
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(0, c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// x-adic valuation; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rat)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        Laurent::new(
            self.terms
                .iter()
                .chain(&other.terms)
                .map(|(&k, c)| (k, c.clone())),
        )
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (&a, x) in &self.terms {
            for (&b, y) in &other.terms {
                out.push((a + b, x * y));
            }
        }
        Laurent::new(out)
    }

    pub fn derivative(&self) -> Laurent {
        Laurent::new(
            self.terms
                .iter()
                .map(|(&k, c)| (k - 1, c * &Rat::from_integer(k))),
        )
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (pos, (k, c)) in self.terms().enumerate() {
            if pos > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*x^{k}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
