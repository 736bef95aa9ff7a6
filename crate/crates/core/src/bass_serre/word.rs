use std::fmt;

use serde::{Deserialize, Serialize};

use super::BassSerreError;

/// One syllable `x_f^e` with `0 < e < n_f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Syllable {
    pub factor: usize,
    pub exp: u32,
}

/// A reduced word in a free product of finite cyclic groups: adjacent
/// syllables come from distinct factors and every exponent is nonzero modulo
/// its factor order. This is the unique normal form of a group element.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Syllable>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    /// Syllable length.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first_factor(&self) -> Option<usize> {
        self.0.first().map(|s| s.factor)
    }

    pub fn last_factor(&self) -> Option<usize> {
        self.0.last().map(|s| s.factor)
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    /// Cyclically reduced with at least two syllables, i.e. hyperbolic.
    pub fn is_cyclically_reduced_hyperbolic(&self) -> bool {
        self.len() >= 2 && self.first_factor() != self.last_factor()
    }
}

pub fn factor_letter(factor: usize) -> String {
    if factor < 26 {
        char::from(b'a' + factor as u8).to_string()
    } else {
        format!("x{factor}_")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for s in &self.0 {
            f.write_str(&factor_letter(s.factor))?;
            if s.exp != 1 {
                write!(f, "^{}", s.exp)?;
            }
        }
        Ok(())
    }
}

/// Free product `ℤ_{n₁} ∗ ⋯ ∗ ℤ_{n_r}` with `r ≥ 2` and every `nᵢ ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeProductSpec {
    factor_orders: Vec<u32>,
}

impl FreeProductSpec {
    pub fn new(factor_orders: Vec<u32>) -> Result<Self, BassSerreError> {
        if factor_orders.len() < 2 {
            return Err(BassSerreError::InvalidSpec("a free product needs at least two factors".to_string()));
        }
        if let Some(bad) = factor_orders.iter().find(|&&n| n < 2) {
            return Err(BassSerreError::InvalidSpec(format!("factor order {bad} is below 2")));
        }
        Ok(FreeProductSpec { factor_orders })
    }

    pub fn factor_orders(&self) -> &[u32] {
        &self.factor_orders
    }

    pub fn rank(&self) -> usize {
        self.factor_orders.len()
    }

    pub fn order(&self, factor: usize) -> u32 {
        self.factor_orders[factor]
    }

    /// Reduces an arbitrary syllable list: exponents are taken modulo the
    /// factor order, equal-factor neighbours merge and trivial syllables
    /// vanish, cascading as needed.
    pub fn normal_form<I>(&self, raw: I) -> Result<Word, BassSerreError>
    where
        I: IntoIterator<Item = (usize, i64)>,
    {
        let mut stack: Vec<Syllable> = Vec::new();
        for (factor, exp) in raw {
            let n = *self.factor_orders.get(factor).ok_or(BassSerreError::FactorOutOfRange(factor))?;
            push_syllable(&mut stack, factor, exp.rem_euclid(i64::from(n)) as u32, n);
        }
        Ok(Word(stack))
    }

    pub fn generator(&self, factor: usize) -> Word {
        Word(vec![Syllable { factor, exp: 1 }])
    }

    pub fn mul(&self, a: &Word, b: &Word) -> Word {
        let mut stack = a.0.clone();
        for s in &b.0 {
            push_syllable(&mut stack, s.factor, s.exp, self.order(s.factor));
        }
        Word(stack)
    }

    pub fn inverse(&self, w: &Word) -> Word {
        Word(w.0.iter().rev().map(|s| Syllable { factor: s.factor, exp: self.order(s.factor) - s.exp }).collect())
    }

    pub fn conjugate(&self, g: &Word, w: &Word) -> Word {
        self.mul(&self.mul(g, w), &self.inverse(g))
    }

    /// Representative of the coset `g·Γ_factor`: `g` with a trailing syllable
    /// from `factor` removed.
    pub fn coset_rep(&self, g: &Word, factor: usize) -> Word {
        if g.last_factor() == Some(factor) {
            Word(g.0[..g.len() - 1].to_vec())
        } else {
            g.clone()
        }
    }

    /// Conjugates `w` until it is cyclically reduced. Returns `(h, core)` with
    /// `w = h · core · h⁻¹`.
    pub fn cyclic_reduction(&self, w: &Word) -> (Word, Word) {
        let mut core = w.clone();
        let mut h = Word::identity();
        while core.len() >= 2 && core.first_factor() == core.last_factor() {
            let first = Word(vec![core.0[0]]);
            core = self.conjugate(&self.inverse(&first), &core);
            h = self.mul(&h, &first);
        }
        (h, core)
    }

    /// Every element of syllable length at most `max_len`, shortest first.
    pub fn elements_up_to(&self, max_len: usize, cap: usize) -> Result<Vec<Word>, BassSerreError> {
        let mut out = vec![Word::identity()];
        let mut frontier = vec![Word::identity()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for (factor, &n) in self.factor_orders.iter().enumerate() {
                    if w.last_factor() == Some(factor) {
                        continue;
                    }
                    for exp in 1..n {
                        let mut s = w.0.clone();
                        s.push(Syllable { factor, exp });
                        next.push(Word(s));
                    }
                }
            }
            if out.len() + next.len() > cap {
                return Err(BassSerreError::ResourceLimit { what: "word enumeration", cap });
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        Ok(out)
    }

    /// Parses words written with letters `a, b, c, …` for the factors and an
    /// optional `^e` exponent, e.g. `ab^2a`. `1` is the identity.
    pub fn parse_word(&self, text: &str) -> Result<Word, BassSerreError> {
        let text = text.trim();
        if text == "1" || text.is_empty() {
            return Ok(Word::identity());
        }
        let err = |reason: &str| BassSerreError::ParseWord { input: text.to_string(), reason: reason.to_string() };
        let mut raw = Vec::new();
        let mut chars = text.chars().peekable();
        while let Some(ch) = chars.next() {
            if !ch.is_ascii_lowercase() {
                return Err(err("expected a factor letter"));
            }
            let factor = (ch as u8 - b'a') as usize;
            if factor >= self.rank() {
                return Err(err("letter beyond the number of factors"));
            }
            let mut exp = 1i64;
            if chars.peek() == Some(&'^') {
                chars.next();
                let mut digits = String::new();
                if chars.peek() == Some(&'-') {
                    digits.push('-');
                    chars.next();
                }
                while let Some(d) = chars.peek().filter(|c| c.is_ascii_digit()) {
                    digits.push(*d);
                    chars.next();
                }
                exp = digits.parse().map_err(|_| err("bad exponent"))?;
            }
            raw.push((factor, exp));
        }
        self.normal_form(raw)
    }
}

fn push_syllable(stack: &mut Vec<Syllable>, factor: usize, exp: u32, order: u32) {
    if exp.is_multiple_of(order) {
        return;
    }
    match stack.last_mut() {
        Some(top) if top.factor == factor => {
            let merged = (top.exp + exp) % order;
            if merged == 0 {
                stack.pop();
            } else {
                top.exp = merged;
            }
        }
        _ => stack.push(Syllable { factor, exp: exp % order }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(orders: &[u32]) -> FreeProductSpec {
        FreeProductSpec::new(orders.to_vec()).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        let d = spec(&[2, 2]);
        assert!(d.normal_form([(0, 1), (0, 1)]).unwrap().is_identity());
        let aba = d.normal_form([(0, 1), (1, 1), (0, 1)]).unwrap();
        assert_eq!(aba.len(), 3);
        assert_eq!(aba.to_string(), "aba");
        let p = spec(&[2, 3]);
        assert!(p.normal_form([(0, 1), (1, 2), (1, 1), (0, 1)]).unwrap().is_identity());
        assert_eq!(p.normal_form([(1, -1)]).unwrap().to_string(), "b^2");
    }

    #[test]
    fn invalid_specs() {
        assert!(FreeProductSpec::new(vec![2]).is_err());
        assert!(FreeProductSpec::new(vec![2, 1]).is_err());
        assert!(spec(&[2, 2]).normal_form([(2, 1)]).is_err());
    }

    #[test]
    fn inverse_and_mul() {
        let p = spec(&[2, 3, 4]);
        let w = p.parse_word("ab^2c^3ba").unwrap();
        assert!(p.mul(&w, &p.inverse(&w)).is_identity());
        assert!(p.mul(&p.inverse(&w), &w).is_identity());
    }

    #[test]
    fn cyclic_reduction() {
        let p = spec(&[2, 3]);
        let w = p.parse_word("abab^2a").unwrap();
        let (h, core) = p.cyclic_reduction(&w);
        assert!(core.len() <= 1 || core.is_cyclically_reduced_hyperbolic());
        assert_eq!(p.conjugate(&h, &core), w);
    }

    #[test]
    fn enumeration_counts() {
        // ℤ₂∗ℤ₂: 1 + 2·L elements up to length L
        assert_eq!(spec(&[2, 2]).elements_up_to(6, 1000).unwrap().len(), 13);
        // ℤ₂∗ℤ₃: lengths 0,1,2 give 1, 1+2, 2+2
        assert_eq!(spec(&[2, 3]).elements_up_to(2, 1000).unwrap().len(), 8);
        assert!(spec(&[5, 5, 5]).elements_up_to(10, 100).is_err());
    }

    #[test]
    fn parse_and_display() {
        let p = spec(&[2, 3]);
        assert_eq!(p.parse_word("ab^2").unwrap().to_string(), "ab^2");
        assert_eq!(p.parse_word("aa").unwrap().to_string(), "1");
        assert!(p.parse_word("ac").is_err());
        assert!(p.parse_word("a^x").is_err());
    }
}
