//! Power series over F2 truncated at a fixed precision `u^N`.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Series {
    words: Vec<u64>,
    prec: usize,
}

impl Series {
    pub fn zero(prec: usize) -> Self {
        Series { words: vec![0; prec.div_ceil(64)], prec }
    }

    pub fn one(prec: usize) -> Self {
        Self::monomial(prec, 0)
    }

    /// `u^k`, or zero when `k ≥ prec`.
    pub fn monomial(prec: usize, k: usize) -> Self {
        let mut s = Self::zero(prec);
        if k < prec {
            s.words[k / 64] |= 1 << (k % 64);
        }
        s
    }

    pub fn from_coefficients(prec: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::zero(prec);
        for k in ones {
            if k < prec {
                s.words[k / 64] ^= 1 << (k % 64);
            }
        }
        s
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn coefficient(&self, k: usize) -> bool {
        k < self.prec && self.words[k / 64] >> (k % 64) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Order of vanishing at `u = 0`; `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| 64 * i + w.trailing_zeros() as usize)
    }

    pub fn is_unit(&self) -> bool {
        self.coefficient(0)
    }

    pub fn add_assign(&mut self, other: &Series) {
        assert_eq!(self.prec, other.prec, "precision mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    fn shifted_left(&self, k: usize) -> Series {
        let mut out = Series::zero(self.prec);
        let (ws, bs) = (k / 64, k % 64);
        for i in (ws..self.words.len()).rev() {
            let mut w = self.words[i - ws] << bs;
            if bs > 0 && i > ws {
                w |= self.words[i - ws - 1] >> (64 - bs);
            }
            out.words[i] = w;
        }
        out.mask();
        out
    }

    /// Division by `u^k`; the low `k` coefficients are discarded.
    pub fn shifted_right(&self, k: usize) -> Series {
        let mut out = Series::zero(self.prec);
        let (ws, bs) = (k / 64, k % 64);
        for i in 0..self.words.len() {
            let Some(&lo) = self.words.get(i + ws) else { break };
            let mut w = lo >> bs;
            if bs > 0 {
                if let Some(&hi) = self.words.get(i + ws + 1) {
                    w |= hi << (64 - bs);
                }
            }
            out.words[i] = w;
        }
        out
    }

    fn mask(&mut self) {
        let r = self.prec % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    pub fn mul(&self, other: &Series) -> Series {
        assert_eq!(self.prec, other.prec, "precision mismatch");
        let mut out = Series::zero(self.prec);
        for k in 0..self.prec {
            if self.coefficient(k) {
                out.add_assign(&other.shifted_left(k));
            }
        }
        out
    }

    /// Inverse of a unit by Newton iteration `g ← g + g(fg − 1)`.
    pub fn inverse(&self) -> Option<Series> {
        if !self.is_unit() {
            return None;
        }
        let one = Series::one(self.prec);
        let mut g = one.clone();
        let mut good = 1;
        while good < self.prec {
            let mut e = self.mul(&g);
            e.add_assign(&one);
            g.add_assign(&g.mul(&e));
            good *= 2;
        }
        Some(g)
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = (0..self.prec)
            .filter(|&k| self.coefficient(k))
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "u".to_string(),
                _ => format!("u^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{} + O(u^{})", terms.join(" + "), self.prec)
        }
    }
}
