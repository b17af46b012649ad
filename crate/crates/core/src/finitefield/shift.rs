//! Moving the origin from `o = (0, …, 0)` to `p = (1, 0, …, 0)`.
//!
//! With `u_1 = z_1 − 1` and `u_i = z_i` otherwise, an equation
//! `f = q_ξ + … + q_d` (homogeneous parts in `z`) becomes `Σ_e Φ_e` with
//! `Φ_e` homogeneous of degree `e` in `u`. Two independent routes compute
//! the `Φ_e`: binomial recombination of the `z_1`-graded pieces of each
//! `q_j`, and literal substitution followed by regrading.

use super::field::Fp;
use super::poly::MultiPoly;
use super::FieldError;
use crate::arith::binomial;
use num_bigint::BigUint;
use num_traits::ToPrimitive;

fn check_grading(lowest: u32, components: &[MultiPoly]) -> Result<(usize, u64), FieldError> {
    let first = components
        .first()
        .ok_or_else(|| FieldError::Grading("no components given".into()))?;
    let (nvars, modulus) = (first.nvars(), first.modulus());
    if nvars == 0 {
        return Err(FieldError::Grading("shift needs at least one variable".into()));
    }
    for (t, q) in components.iter().enumerate() {
        let deg = lowest + t as u32;
        if q.nvars() != nvars || q.modulus() != modulus {
            return Err(FieldError::Grading(format!(
                "component of degree {deg} lives in a different ring"
            )));
        }
        if !q.is_homogeneous_of(deg) {
            return Err(FieldError::Grading(format!(
                "component {t} is not homogeneous of degree {deg}"
            )));
        }
    }
    Ok((nvars, modulus))
}

/// `q_{j,α}`: the part of `q_j` with `z_1` stripped off, homogeneous of
/// degree `α` in `z_2 … z_N`, so that `q_j = Σ_α z_1^{j−α} q_{j,α}`.
fn split_by_first_variable(q: &MultiPoly, j: u32) -> Vec<MultiPoly> {
    let mut parts = vec![MultiPoly::zero(q.nvars(), q.modulus()); j as usize + 1];
    for (e, c) in q.terms() {
        let alpha = j - e[0];
        let mut rest = e.to_vec();
        rest[0] = 0;
        parts[alpha as usize].add_term(rest, c);
    }
    parts
}

fn binomial_mod(n: u64, r: u64, modulus: u64) -> Fp {
    let b: BigUint = binomial(n, r) % modulus;
    Fp::new(b.to_u64().expect("reduced below modulus"), modulus)
}

/// Binomial recombination:
/// `Φ_e = Σ_{α ≤ e} u_1^{e−α} Σ_{j ≥ max(ξ, e)} C(j−α, e−α) q_{j,α}`.
///
/// `components[t]` must be homogeneous of degree `lowest + t`. Returns
/// `Φ_0 … Φ_d` in the same variables, `u_1` taking the place of `z_1`.
pub fn shift_expand(lowest: u32, components: &[MultiPoly]) -> Result<Vec<MultiPoly>, FieldError> {
    let (nvars, modulus) = check_grading(lowest, components)?;
    let top = lowest + components.len() as u32 - 1;
    let pieces: Vec<Vec<MultiPoly>> = components
        .iter()
        .enumerate()
        .map(|(t, q)| split_by_first_variable(q, lowest + t as u32))
        .collect();
    let u1 = MultiPoly::variable(0, nvars, modulus);
    let mut phis = Vec::with_capacity(top as usize + 1);
    for e in 0..=top {
        let mut phi = MultiPoly::zero(nvars, modulus);
        for alpha in 0..=e {
            let mut inner = MultiPoly::zero(nvars, modulus);
            for j in lowest.max(e)..=top {
                let q = &pieces[(j - lowest) as usize][alpha as usize];
                if q.is_zero() {
                    continue;
                }
                let c = binomial_mod(u64::from(j - alpha), u64::from(e - alpha), modulus);
                inner = &inner + &q.scale(c);
            }
            if !inner.is_zero() {
                phi = &phi + &(&u1.pow(e - alpha) * &inner);
            }
        }
        phis.push(phi);
    }
    Ok(phis)
}

/// Literal substitution `z_1 = 1 + u_1` by polynomial arithmetic, then
/// regrading by total degree. Same contract as [`shift_expand`].
pub fn shift_expand_direct(lowest: u32, components: &[MultiPoly]) -> Result<Vec<MultiPoly>, FieldError> {
    let (nvars, modulus) = check_grading(lowest, components)?;
    let top = lowest + components.len() as u32 - 1;
    let one_plus_u1 = &MultiPoly::constant(Fp::one(modulus), nvars) + &MultiPoly::variable(0, nvars, modulus);
    let mut powers = vec![MultiPoly::constant(Fp::one(modulus), nvars)];
    for _ in 0..top {
        let next = powers.last().expect("non-empty") * &one_plus_u1;
        powers.push(next);
    }
    let mut shifted = MultiPoly::zero(nvars, modulus);
    for q in components {
        for (e, c) in q.terms() {
            let mut rest = e.to_vec();
            let a = std::mem::replace(&mut rest[0], 0);
            let tail = MultiPoly::monomial(rest, c);
            shifted = &shifted + &(&powers[a as usize] * &tail);
        }
    }
    Ok((0..=top).map(|e| shifted.homogeneous_component(e)).collect())
}
