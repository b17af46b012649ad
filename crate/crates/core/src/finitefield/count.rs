//! Exhaustive zero counting over `F_p^N`.
//!
//! Points are enumerated by fixing one coordinate at a time and specializing
//! every polynomial, so each subtree of the enumeration works with smaller
//! polynomials. A subtree is settled without further descent as soon as the
//! first non-vanishing form of the sequence is a nonzero constant there.
//!
//! The enumeration records, for every point, the index of the first form
//! that does not vanish. Prefix zero counts `N(s)` follow by summing the tail
//! of that histogram, so one pass serves every prefix.

use super::poly::MultiPoly;
use super::FieldError;
use rayon::prelude::*;

/// Checks `prime^nvars ≤ cap` and returns the point count.
pub fn point_budget(prime: u64, nvars: usize, cap: u64) -> Result<u64, FieldError> {
    let exceeded = || FieldError::Budget { prime, nvars, cap };
    let total = u32::try_from(nvars)
        .ok()
        .and_then(|n| prime.checked_pow(n))
        .ok_or_else(exceeded)?;
    if total > cap {
        return Err(exceeded());
    }
    Ok(total)
}

/// Dense lexicographically sorted term list used during enumeration.
#[derive(Clone, Debug)]
struct Flat {
    nvars: usize,
    exps: Vec<u16>,
    coeffs: Vec<u32>,
}

impl Flat {
    fn from_poly(p: &MultiPoly) -> Self {
        let nvars = p.nvars();
        let mut exps = Vec::with_capacity(p.num_terms() * nvars);
        let mut coeffs = Vec::with_capacity(p.num_terms());
        for (e, c) in p.terms() {
            exps.extend(e.iter().map(|&x| u16::try_from(x).expect("exponent fits in u16")));
            coeffs.push(c.value() as u32);
        }
        Flat { nvars, exps, coeffs }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero constant: a single term with no variables left in it.
    fn is_nonzero_constant(&self) -> bool {
        self.coeffs.len() == 1 && self.exps.iter().all(|&e| e == 0)
    }

    fn max_exp_last(&self) -> usize {
        if self.nvars == 0 {
            return 0;
        }
        self.exps
            .iter()
            .skip(self.nvars - 1)
            .step_by(self.nvars)
            .copied()
            .max()
            .unwrap_or(0) as usize
    }

    /// Fixes the last variable to the value whose powers are `pows`.
    /// Terms sharing the remaining exponents are adjacent in lex order.
    fn specialize_last(&self, pows: &[u64], p: u64) -> Flat {
        let n = self.nvars;
        let m = n - 1;
        let mut exps: Vec<u16> = Vec::with_capacity(self.exps.len());
        let mut coeffs: Vec<u32> = Vec::with_capacity(self.coeffs.len());
        for (t, &c) in self.coeffs.iter().enumerate() {
            let e = &self.exps[t * n..(t + 1) * n];
            let v = u64::from(c) * pows[e[m] as usize] % p;
            let same_as_last = !coeffs.is_empty() && exps[exps.len() - m..] == e[..m];
            if same_as_last {
                let last = coeffs.last_mut().expect("non-empty");
                *last = ((u64::from(*last) + v) % p) as u32;
            } else {
                exps.extend_from_slice(&e[..m]);
                coeffs.push(v as u32);
            }
        }
        // Drop terms that cancelled.
        let mut out_e = Vec::with_capacity(exps.len());
        let mut out_c = Vec::with_capacity(coeffs.len());
        for (t, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                out_e.extend_from_slice(&exps[t * m..(t + 1) * m]);
                out_c.push(c);
            }
        }
        Flat {
            nvars: m,
            exps: out_e,
            coeffs: out_c,
        }
    }
}

struct Enumerator {
    p: u64,
    /// `p^n` for `n = 0 … N`.
    volume: Vec<u64>,
    /// Index recorded for points where every form vanishes.
    all_vanish: usize,
}

impl Enumerator {
    fn powers_of(&self, v: u64, max_exp: usize) -> Vec<u64> {
        let mut pows = Vec::with_capacity(max_exp + 1);
        let mut acc = 1u64;
        for _ in 0..=max_exp {
            pows.push(acc);
            acc = acc * v % self.p;
        }
        pows
    }

    fn specialize_all(&self, forms: &[Flat], v: u64) -> Vec<Flat> {
        let max_exp = forms.iter().map(Flat::max_exp_last).max().unwrap_or(0);
        let pows = self.powers_of(v, max_exp);
        forms.iter().map(|f| f.specialize_last(&pows, self.p)).collect()
    }

    /// `Ok(index)` if every point of the current subtree has the same first
    /// non-vanishing form, and otherwise the number of leading forms that
    /// still matter.
    fn settle<T>(
        &self,
        forms: &[T],
        is_zero: impl Fn(&T) -> bool,
        is_unit: impl Fn(&T) -> bool,
    ) -> Result<usize, usize> {
        match forms.iter().position(|f| !is_zero(f)) {
            None => Ok(self.all_vanish),
            Some(first) if is_unit(&forms[first]) => Ok(first),
            Some(_) => Err(forms.iter().position(is_unit).map_or(forms.len(), |r| r + 1)),
        }
    }

    fn settle_sparse(&self, forms: &[Flat]) -> Result<usize, usize> {
        self.settle(forms, Flat::is_zero, Flat::is_nonzero_constant)
    }

    fn descend(&self, forms: &[Flat], hist: &mut [u64]) {
        let n = forms[0].nvars;
        let keep = match self.settle_sparse(forms) {
            Ok(index) => {
                hist[index] += self.volume[n];
                return;
            }
            Err(keep) => keep,
        };
        let forms = &forms[..keep];
        if forms
            .iter()
            .all(|f| Dense::dims_of(f).iter().product::<usize>() <= DENSE_LIMIT)
        {
            let dense: Vec<Dense> = forms.iter().map(Dense::from_flat).collect();
            return self.descend_dense(&dense, hist);
        }
        for v in 0..self.p {
            let next = self.specialize_all(forms, v);
            self.descend(&next, hist);
        }
    }

    fn descend_dense(&self, forms: &[Dense], hist: &mut [u64]) {
        let n = forms[0].dims.len();
        let keep = match self.settle(forms, Dense::is_zero, Dense::is_nonzero_constant) {
            Ok(index) => {
                hist[index] += self.volume[n];
                return;
            }
            Err(keep) => keep,
        };
        let forms = &forms[..keep];
        match n {
            1 => self.leaf_line(forms, hist),
            2 => self.leaf_plane(forms, hist),
            _ => {
                for v in 0..self.p {
                    let next: Vec<Dense> = forms.iter().map(|f| f.specialize_last(v, self.p)).collect();
                    self.descend_dense(&next, hist);
                }
            }
        }
    }

    /// Last two coordinates `(x, y)`: each form is collapsed to a polynomial
    /// in `x` once per value of `y`. Forms past the first are needed only
    /// where all earlier ones vanish, so their collapse is done on demand.
    fn leaf_plane(&self, forms: &[Dense], hist: &mut [u64]) {
        let p = self.p;
        let mut in_x: Vec<Vec<u64>> = forms.iter().map(|f| vec![0u64; f.dims[0]]).collect();
        let mut ready = vec![false; forms.len()];
        for y in 0..p {
            ready.iter_mut().for_each(|r| *r = false);
            for x in 0..p {
                let mut first = self.all_vanish;
                for (i, f) in forms.iter().enumerate() {
                    if !ready[i] {
                        for (slot, row) in in_x[i].iter_mut().zip(f.data.chunks(f.dims[1])) {
                            *slot = horner(row, y, p);
                        }
                        ready[i] = true;
                    }
                    if horner(&in_x[i], x, p) != 0 {
                        first = i;
                        break;
                    }
                }
                hist[first] += 1;
            }
        }
    }

    fn leaf_line(&self, forms: &[Dense], hist: &mut [u64]) {
        for x in 0..self.p {
            let first = forms.iter().position(|f| horner(&f.data, x, self.p) != 0);
            hist[first.unwrap_or(self.all_vanish)] += 1;
        }
    }
}

/// `Σ c_e x^e mod p` for coefficients listed by increasing exponent.
fn horner(coeffs: &[u64], x: u64, p: u64) -> u64 {
    coeffs.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p)
}

/// Dense forms are used once every grid is at most this many cells.
const DENSE_LIMIT: usize = 256;

/// Coefficient grid with the last variable innermost, `dims[i]` being one
/// more than the largest exponent of variable `i`.
#[derive(Clone, Debug)]
struct Dense {
    dims: Vec<usize>,
    data: Vec<u64>,
}

impl Dense {
    fn dims_of(f: &Flat) -> Vec<usize> {
        let mut dims = vec![1usize; f.nvars];
        for e in f.exps.chunks(f.nvars.max(1)) {
            for (d, &x) in dims.iter_mut().zip(e) {
                *d = (*d).max(x as usize + 1);
            }
        }
        dims
    }

    fn from_flat(f: &Flat) -> Self {
        let n = f.nvars;
        let dims = Self::dims_of(f);
        let mut data = vec![0u64; dims.iter().product()];
        for (t, &c) in f.coeffs.iter().enumerate() {
            let e = &f.exps[t * n..(t + 1) * n];
            let index = e.iter().zip(&dims).fold(0usize, |acc, (&x, &d)| acc * d + x as usize);
            data[index] = u64::from(c);
        }
        Dense { dims, data }
    }

    fn is_zero(&self) -> bool {
        self.data.iter().all(|&c| c == 0)
    }

    fn is_nonzero_constant(&self) -> bool {
        self.data[0] != 0 && self.data[1..].iter().all(|&c| c == 0)
    }

    fn specialize_last(&self, v: u64, p: u64) -> Dense {
        let inner = *self.dims.last().expect("at least one variable");
        Dense {
            dims: self.dims[..self.dims.len() - 1].to_vec(),
            data: self.data.chunks(inner).map(|row| horner(row, v, p)).collect(),
        }
    }
}

/// For each point of `F_p^N`, the index of the first non-vanishing form
/// (`forms.len()` if all vanish), tallied into a histogram.
pub fn first_nonvanishing_histogram(
    forms: &[MultiPoly],
    prime: u64,
    nvars: usize,
    cap: u64,
) -> Result<Vec<u64>, FieldError> {
    let total = point_budget(prime, nvars, cap)?;
    let mut hist = vec![0u64; forms.len() + 1];
    if forms.is_empty() {
        hist[0] = total;
        return Ok(hist);
    }
    for f in forms {
        if f.nvars() != nvars || f.modulus() != prime {
            return Err(FieldError::Ring(format!(
                "form in {} variables mod {} enumerated over F_{prime}^{nvars}",
                f.nvars(),
                f.modulus()
            )));
        }
    }
    let flats: Vec<Flat> = forms.iter().map(Flat::from_poly).collect();
    let e = Enumerator {
        p: prime,
        volume: (0..=nvars as u32).map(|n| prime.pow(n)).collect(),
        all_vanish: forms.len(),
    };
    if nvars == 0 {
        e.descend(&flats, &mut hist);
        return Ok(hist);
    }
    if let Ok(index) = e.settle_sparse(&flats) {
        hist[index] = total;
        return Ok(hist);
    }
    // Split on the last one or two coordinates; integer sums merge exactly.
    let prefixes: Vec<Vec<u64>> = if nvars >= 2 {
        (0..prime).flat_map(|a| (0..prime).map(move |b| vec![a, b])).collect()
    } else {
        (0..prime).map(|a| vec![a]).collect()
    };
    let partials: Vec<Vec<u64>> = prefixes
        .par_iter()
        .map(|values| {
            let mut local = vec![0u64; forms.len() + 1];
            let mut current = flats.clone();
            for &v in values {
                current = e.specialize_all(&current, v);
            }
            if current[0].nvars == 0 {
                let index = e.settle_sparse(&current).expect("constants always settle");
                local[index] += 1;
            } else {
                e.descend(&current, &mut local);
            }
            local
        })
        .collect();
    for part in partials {
        for (h, x) in hist.iter_mut().zip(part) {
            *h += x;
        }
    }
    Ok(hist)
}

/// `N(s)` for `s = 0 … forms.len()`: common zeros of the first `s` forms.
pub fn prefix_zero_counts(forms: &[MultiPoly], prime: u64, nvars: usize, cap: u64) -> Result<Vec<u64>, FieldError> {
    let hist = first_nonvanishing_histogram(forms, prime, nvars, cap)?;
    let mut counts = vec![0u64; hist.len()];
    let mut acc = 0u64;
    for s in (0..hist.len()).rev() {
        acc += hist[s];
        counts[s] = acc;
    }
    Ok(counts)
}

/// Exact number of common zeros in `F_p^N`.
pub fn count_affine_zeros(polys: &[MultiPoly], prime: u64, nvars: usize, cap: u64) -> Result<u64, FieldError> {
    let counts = prefix_zero_counts(polys, prime, nvars, cap)?;
    Ok(*counts.last().expect("at least the empty prefix"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finitefield::field::Fp;

    /// Point-by-point evaluation, independent of the specialization engine.
    fn naive_count(polys: &[MultiPoly], p: u64, n: usize) -> u64 {
        let total = p.pow(n as u32);
        let mut count = 0;
        for idx in 0..total {
            let mut rest = idx;
            let point: Vec<Fp> = (0..n)
                .map(|_| {
                    let v = rest % p;
                    rest /= p;
                    Fp::new(v, p)
                })
                .collect();
            if polys.iter().all(|f| f.eval(&point).is_zero()) {
                count += 1;
            }
        }
        count
    }

    fn var(i: usize, n: usize, p: u64) -> MultiPoly {
        MultiPoly::variable(i, n, p)
    }

    #[test]
    fn hyperplane_line_and_whole_space() {
        let (p, n) = (5, 3);
        let l = &(&var(0, n, p) + &var(1, n, p).scale(Fp::new(2, p))) + &var(2, n, p);
        assert_eq!(count_affine_zeros(&[l], p, n, 1_000).unwrap(), 25);
        assert_eq!(count_affine_zeros(&[], p, n, 1_000).unwrap(), 125);
        assert_eq!(
            count_affine_zeros(&[var(0, n, p), var(1, n, p)], p, n, 1_000).unwrap(),
            5
        );
    }

    #[test]
    fn budget_is_enforced() {
        let err = count_affine_zeros(&[], 5, 8, 1_000).unwrap_err();
        assert!(matches!(err, FieldError::Budget { .. }));
        assert_eq!(point_budget(5, 8, 390_625).unwrap(), 390_625);
        assert!(point_budget(7, 200, u64::MAX).is_err());
    }

    #[test]
    fn matches_naive_count_on_mixed_system() {
        let (p, n) = (3, 4);
        let x: Vec<_> = (0..n).map(|i| var(i, n, p)).collect();
        let q = &(&x[0] * &x[1]) - &(&x[2] * &x[3]);
        let c = &(&x[0].pow(3) + &x[1].pow(3)) + &MultiPoly::constant(Fp::one(p), n);
        let l = &x[0] + &x[3];
        let forms = vec![q, c, l];
        let counts = prefix_zero_counts(&forms, p, n, 10_000).unwrap();
        for s in 0..=forms.len() {
            assert_eq!(counts[s], naive_count(&forms[..s], p, n), "prefix {s}");
        }
    }

    #[test]
    fn constants_and_zero_forms() {
        let (p, n) = (5, 2);
        let zero = MultiPoly::zero(n, p);
        let one = MultiPoly::constant(Fp::one(p), n);
        assert_eq!(
            prefix_zero_counts(&[zero.clone(), one.clone()], p, n, 100).unwrap(),
            vec![25, 25, 0]
        );
        assert_eq!(prefix_zero_counts(&[one, zero], p, n, 100).unwrap(), vec![25, 0, 0]);
        assert_eq!(count_affine_zeros(&[], p, 0, 100).unwrap(), 1);
    }

    #[test]
    fn rejects_mismatched_ring() {
        let f = var(0, 3, 7);
        assert!(matches!(
            count_affine_zeros(&[f], 5, 3, 1_000),
            Err(FieldError::Ring(_))
        ));
    }
}
