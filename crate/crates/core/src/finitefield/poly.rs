use super::field::Fp;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent vector of a monomial, one entry per variable.
pub type Monomial = Vec<u32>;

/// Sparse polynomial in a fixed number of variables over a prime field.
///
/// Terms are kept in lexicographic order of their exponent vectors and zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    modulus: u64,
    terms: BTreeMap<Monomial, u64>,
}

impl MultiPoly {
    pub fn zero(nvars: usize, modulus: u64) -> Self {
        MultiPoly {
            nvars,
            modulus,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Fp, nvars: usize) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    /// The coordinate function `x_index` (zero-based).
    pub fn variable(index: usize, nvars: usize, modulus: u64) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Self::monomial(e, Fp::one(modulus))
    }

    pub fn monomial(exps: Monomial, c: Fp) -> Self {
        let mut p = MultiPoly::zero(exps.len(), c.modulus());
        p.add_term(exps, c);
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms(nvars: usize, modulus: u64, terms: impl IntoIterator<Item = (Monomial, u64)>) -> Self {
        let mut p = MultiPoly::zero(nvars, modulus);
        for (e, c) in terms {
            p.add_term(e, Fp::new(c, modulus));
        }
        p
    }

    pub fn add_term(&mut self, exps: Monomial, c: Fp) {
        assert_eq!(exps.len(), self.nvars, "exponent vector length");
        debug_assert_eq!(c.modulus(), self.modulus);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.value());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = (*o.get() + c.value()) % self.modulus;
                if sum == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], Fp)> + '_ {
        self.terms
            .iter()
            .map(move |(e, &c)| (e.as_slice(), Fp::new(c, self.modulus)))
    }

    pub fn coefficient(&self, exps: &[u32]) -> Fp {
        Fp::new(self.terms.get(exps).copied().unwrap_or(0), self.modulus)
    }

    /// Maximum total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Every term has total degree `deg`. The zero polynomial is homogeneous
    /// of every degree.
    pub fn is_homogeneous_of(&self, deg: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == deg)
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.degree() {
            None => true,
            Some(d) => self.is_homogeneous_of(d),
        }
    }

    /// The part of total degree `deg`.
    pub fn homogeneous_component(&self, deg: u32) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            modulus: self.modulus,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == deg)
                .map(|(e, &c)| (e.clone(), c))
                .collect(),
        }
    }

    pub fn scale(&self, c: Fp) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars, self.modulus);
        for (e, v) in self.terms() {
            out.add_term(e.to_vec(), v * c);
        }
        out
    }

    pub fn pow(&self, exp: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(Fp::one(self.modulus), self.nvars);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[Fp]) -> Fp {
        assert_eq!(point.len(), self.nvars, "point dimension");
        let mut acc = Fp::zero(self.modulus);
        for (e, c) in self.terms() {
            let mut term = c;
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    term = term * x.pow(u64::from(k));
                }
            }
            acc = acc + term;
        }
        acc
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly(p={}, n={}) ", self.modulus, self.nvars)?;
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e.to_vec(), c);
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(-Fp::one(self.modulus))
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MultiPoly::zero(self.nvars, self.modulus);
        for (ea, ca) in self.terms() {
            for (eb, cb) in rhs.terms() {
                let e: Monomial = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

/// All exponent vectors of total degree `deg` in `nvars` variables, in
/// lexicographic order.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
    fn fill(pos: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        let n = cur.len();
        if pos + 1 == n {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[pos] = e;
            fill(pos + 1, left - e, cur, out);
        }
        cur[pos] = 0;
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if deg == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    fill(0, deg, &mut vec![0; nvars], &mut out);
    out
}
