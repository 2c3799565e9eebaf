use super::{HadamardMatrix, Provenance};
use crate::error::{Error, Result};
use crate::numtheory::{is_prime, quadratic_character};
use crate::signs::SignVec;

pub(crate) fn base(order: usize) -> HadamardMatrix {
    let rows = match order {
        1 => vec![SignVec::plus(1)],
        2 => vec![
            SignVec::plus(2),
            SignVec::from_minus_fn(2, |c| c == 1),
        ],
        _ => panic!("base matrices exist for orders 1 and 2 only"),
    };
    HadamardMatrix::from_rows_unchecked(rows, Provenance::Base(order))
}

/// Kronecker product `a ⊗ b`: row `(r_a, r_b)` is `a[r_a] ⊗ b[r_b]`.
pub fn sylvester(a: &HadamardMatrix, b: &HadamardMatrix) -> HadamardMatrix {
    let rows = a
        .rows()
        .iter()
        .flat_map(|ra| b.rows().iter().map(move |rb| ra.kron(rb)))
        .collect();
    HadamardMatrix::from_rows_unchecked(
        rows,
        Provenance::Sylvester(
            Box::new(a.provenance().clone()),
            Box::new(b.provenance().clone()),
        ),
    )
}

fn check_paley_prime(q: u64, expected: u64) -> Result<()> {
    if q % 2 == 0 || !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if q % 4 != expected {
        return Err(Error::WrongResidueClass {
            q,
            residue: q % 4,
            expected,
        });
    }
    Ok(())
}

/// Order `q + 1` for a prime `q ≡ 3 (mod 4)`.
///
/// With the Jacobsthal matrix `Q[x][y] = χ(y − x)` (skew-symmetric here),
/// `S = [[0, 1ᵀ], [−1, Q]]` satisfies `S·Sᵀ = qI` and `S + Sᵀ = 0`, so
/// `H = I + S` has `H·Hᵀ = (q + 1)I`.
pub fn paley1(q: u64) -> Result<HadamardMatrix> {
    check_paley_prime(q, 3)?;
    let chi = quadratic_character(q);
    let n = q as usize + 1;
    let qs = q as usize;
    let mut rows = Vec::with_capacity(n);
    rows.push(SignVec::plus(n));
    for x in 0..qs {
        rows.push(SignVec::from_minus_fn(n, |c| {
            if c == 0 {
                true
            } else {
                let y = c - 1;
                y != x && chi[(y + qs - x) % qs] < 0
            }
        }));
    }
    Ok(HadamardMatrix::from_rows_unchecked(rows, Provenance::Paley1(q)))
}

/// Order `2(q + 1)` for a prime `q ≡ 1 (mod 4)`.
///
/// `C = [[0, 1ᵀ], [1, Q]]` is a symmetric conference matrix of order `q + 1`;
/// `H = [[C + I, C − I], [C − I, −C − I]]`.
pub fn paley2(q: u64) -> Result<HadamardMatrix> {
    check_paley_prime(q, 1)?;
    let chi = quadratic_character(q);
    let k = q as usize + 1;
    let qs = q as usize;
    // conference entry off the diagonal
    let conf = |r: usize, c: usize| -> i8 {
        match (r, c) {
            (0, _) | (_, 0) => 1,
            _ => chi[(c - 1 + qs - (r - 1)) % qs],
        }
    };
    let n = 2 * k;
    let rows = (0..n)
        .map(|r| {
            SignVec::from_minus_fn(n, |c| {
                let (br, bc) = (r / k, c / k);
                let (i, j) = (r % k, c % k);
                let sign = if i == j {
                    // C is zero on the diagonal: C + I = +1, C − I = −1, −C − I = −1
                    if br == 0 && bc == 0 {
                        1
                    } else {
                        -1
                    }
                } else if br == 1 && bc == 1 {
                    -conf(i, j)
                } else {
                    conf(i, j)
                };
                sign < 0
            })
        })
        .collect();
    Ok(HadamardMatrix::from_rows_unchecked(rows, Provenance::Paley2(q)))
}
