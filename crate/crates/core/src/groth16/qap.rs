//! R1CS to QAP reduction.
//!
//! Row `i < num_constraints` of the QAP is constraint `i`; rows
//! `num_constraints + j` for `j <= num_public` carry `A = z_j`, `B = C = 0`, which
//! makes the public-input polynomials linearly independent. Row `i` is
//! interpolated at `omega^i` of the circuit's evaluation domain.

use ark_ff::{Field, One, Zero};

use super::Groth16Error;
use crate::algebra::{fft_in_place, Direction, EvaluationDomain, Scalar, Workers};
use crate::r1cs::{ConstraintSystem, Witness};

/// Evaluations of `A(x)`, `B(x)`, `C(x)` (the witness-weighted sums) on the domain.
pub fn row_evaluations(
    cs: &ConstraintSystem,
    z: &[Scalar],
    domain: &EvaluationDomain,
) -> (Vec<Scalar>, Vec<Scalar>, Vec<Scalar>) {
    let n = domain.size;
    let mut a = vec![Scalar::zero(); n];
    let mut b = vec![Scalar::zero(); n];
    let mut c = vec![Scalar::zero(); n];
    for (i, con) in cs.constraints().iter().enumerate() {
        a[i] = con.a.evaluate(z);
        b[i] = con.b.evaluate(z);
        c[i] = con.c.evaluate(z);
    }
    let nc = cs.num_constraints();
    a[nc..=nc + cs.num_public()].copy_from_slice(&z[..=cs.num_public()]);
    (a, b, c)
}

pub fn domain_for(cs: &ConstraintSystem) -> Result<EvaluationDomain, Groth16Error> {
    let stats = cs.stats().ok_or(Groth16Error::R1cs(crate::r1cs::R1csError::NotFinalized))?;
    Ok(EvaluationDomain::new(stats.domain_size)?)
}

/// Coefficients of `H = (A B - C) / Z` via evaluations on the coset `g * <omega>`,
/// where `Z = x^N - 1` is the nonzero constant `g^N - 1`. Returns `N - 1` coefficients.
/// If the witness does not satisfy the system the quotient is meaningless.
pub fn quotient_coefficients(
    a: Vec<Scalar>,
    b: Vec<Scalar>,
    c: Vec<Scalar>,
    domain: &EvaluationDomain,
    workers: Workers,
) -> Result<Vec<Scalar>, Groth16Error> {
    let g = EvaluationDomain::coset_shift();
    let to_coset = |mut v: Vec<Scalar>| -> Result<Vec<Scalar>, Groth16Error> {
        fft_in_place(&mut v, domain, Direction::Inverse, workers)?;
        crate::algebra::distribute_powers(&mut v, g);
        fft_in_place(&mut v, domain, Direction::Forward, workers)?;
        Ok(v)
    };
    let (mut a, b, c) = (to_coset(a)?, to_coset(b)?, to_coset(c)?);
    let z_inv = (g.pow([domain.size as u64]) - Scalar::one()).inverse().expect("coset avoids the domain");
    for ((x, y), z) in a.iter_mut().zip(&b).zip(&c) {
        *x = (*x * y - z) * z_inv;
    }
    fft_in_place(&mut a, domain, Direction::Inverse, workers)?;
    crate::algebra::distribute_powers(&mut a, g.inverse().expect("nonzero"));
    a.truncate(domain.size - 1);
    Ok(a)
}

/// Independent oracle for small systems: interpolates every column polynomial
/// `A_j, B_j, C_j` by Lagrange interpolation, forms `A B - C` by schoolbook
/// multiplication and checks divisibility by `x^N - 1` with long division.
pub fn qap_divisible(cs: &ConstraintSystem, w: &Witness) -> Result<bool, Groth16Error> {
    let domain = domain_for(cs)?;
    let n = domain.size;
    let z = w.assignments();
    if z.len() != cs.num_variables() {
        return Err(Groth16Error::Shape(format!("witness has {} values, system {}", z.len(), cs.num_variables())));
    }
    let points: Vec<Scalar> = domain.elements().collect();
    let basis: Vec<Vec<Scalar>> = (0..n).map(|i| lagrange_coefficients(&points, i)).collect();

    let mut cols = vec![[vec![Scalar::zero(); n], vec![Scalar::zero(); n], vec![Scalar::zero(); n]]; z.len()];
    for (i, con) in cs.constraints().iter().enumerate() {
        for (k, lc) in [&con.a, &con.b, &con.c].into_iter().enumerate() {
            for (v, coeff) in lc.terms() {
                cols[v.index()][k][i] += coeff;
            }
        }
    }
    for j in 0..=cs.num_public() {
        cols[j][0][cs.num_constraints() + j] += Scalar::one();
    }

    let mut polys = [vec![Scalar::zero(); n], vec![Scalar::zero(); n], vec![Scalar::zero(); n]];
    for (j, col) in cols.iter().enumerate() {
        for k in 0..3 {
            for (i, e) in col[k].iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                let weight = z[j] * e;
                for (dst, l) in polys[k].iter_mut().zip(&basis[i]) {
                    *dst += weight * l;
                }
            }
        }
    }
    let [pa, pb, pc] = polys;
    let mut prod = vec![Scalar::zero(); 2 * n - 1];
    for (i, x) in pa.iter().enumerate() {
        for (j, y) in pb.iter().enumerate() {
            prod[i + j] += *x * y;
        }
    }
    for (dst, c) in prod.iter_mut().zip(&pc) {
        *dst -= c;
    }
    // division by x^N - 1: fold the coefficient of x^(k+N) down onto x^k
    for k in (n..prod.len()).rev() {
        let q = prod[k];
        prod[k] = Scalar::zero();
        prod[k - n] += q;
    }
    Ok(prod.iter().all(Zero::is_zero))
}

/// Coefficients of the Lagrange polynomial that is 1 at `points[i]` and 0 elsewhere.
fn lagrange_coefficients(points: &[Scalar], i: usize) -> Vec<Scalar> {
    let mut poly = vec![Scalar::one()];
    let mut denom = Scalar::one();
    for (j, xj) in points.iter().enumerate() {
        if j == i {
            continue;
        }
        let mut next = vec![Scalar::zero(); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= *c * xj;
        }
        poly = next;
        denom *= points[i] - xj;
    }
    let inv = denom.inverse().expect("distinct points");
    poly.iter().map(|c| *c * inv).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::r1cs::{LinearCombination, Variable};

    fn cubic(x: u64, y: u64) -> (ConstraintSystem, Witness) {
        // x^3 + x + 5 = y
        let mut cs = ConstraintSystem::new();
        let yv = cs.alloc_public(Some(Scalar::from(y))).unwrap();
        let xv = cs.alloc_private(Some(Scalar::from(x))).unwrap();
        let x2 = cs.alloc_private(Some(Scalar::from(x * x))).unwrap();
        let x3 = cs.alloc_private(Some(Scalar::from(x * x * x))).unwrap();
        cs.enforce(xv, xv, x2).unwrap();
        cs.enforce(x2, xv, x3).unwrap();
        let lhs = LinearCombination::from(x3) + xv + (Scalar::from(5u64), Variable::ONE);
        cs.enforce(lhs, Variable::ONE, yv).unwrap();
        cs.finalize().unwrap();
        let w = cs.witness().unwrap();
        (cs, w)
    }

    #[test]
    fn oracle_and_fast_quotient_agree() {
        let (cs, w) = cubic(3, 35);
        assert!(cs.is_satisfied(&w).unwrap());
        assert!(qap_divisible(&cs, &w).unwrap());
        let (cs_bad, w_bad) = cubic(3, 36);
        assert!(!qap_divisible(&cs_bad, &w_bad).unwrap());

        let domain = domain_for(&cs).unwrap();
        let (a, b, c) = row_evaluations(&cs, w.assignments(), &domain);
        let h = quotient_coefficients(a.clone(), b.clone(), c.clone(), &domain, Workers::SINGLE).unwrap();
        // A(x)B(x) - C(x) = H(x) Z(x) at a random point
        let x = Scalar::from(987654321u64);
        let interp = |mut v: Vec<Scalar>| {
            fft_in_place(&mut v, &domain, Direction::Inverse, Workers::SINGLE).unwrap();
            v.iter().rev().fold(Scalar::zero(), |acc, c| acc * x + c)
        };
        let hx = h.iter().rev().fold(Scalar::zero(), |acc, c| acc * x + c);
        assert_eq!(interp(a) * interp(b) - interp(c), hx * domain.vanishing_at(x));
    }
}
