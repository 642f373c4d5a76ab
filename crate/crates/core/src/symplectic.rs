//! Exact 4x4 integer matrix algebra over the block-diagonal symplectic form
//! `Omega = diag(J, J)`, `J = [[0,1],[-1,0]]`, together with the named
//! generator matrices used throughout the crate.
//!
//! All arithmetic is checked: overflow is an error, never wraparound. The
//! matrices act on column vectors; the mod-2 vector action used by [`crate::gamma`]
//! is right multiplication on row vectors.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymplecticError {
    #[error("integer overflow in exact matrix arithmetic")]
    Overflow,
    #[error("matrix is not symplectic for Omega = diag(J, J)")]
    NotSymplectic,
    #[error("invalid elementary matrix index ({0}, {1}): need 1 <= i, j <= 4 and i != j")]
    BadIndex(usize, usize),
}

/// Exact 4x4 integer matrix with value semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMat4(pub [[i64; 4]; 4]);

/// 4x4 matrix over GF(2), packed row-major into the low 16 bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Mat4(pub u16);

/// Row vector in (Z/2Z)^4, packed into the low 4 bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Vec4(pub u8);

pub const IDENTITY: IntMat4 = IntMat4([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);

/// Homology action of the T move (Dehn twist in the first cylinder).
pub const T: IntMat4 = IntMat4([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);

/// Homology action of the S move (quarter-turn relabelling; S^2 = -Id).
pub const S: IntMat4 = IntMat4([[0, 1, 0, 1], [0, 0, -1, 0], [0, 1, 0, 0], [-1, 0, 1, 0]]);

/// Homology action of the R move (Dehn twist in the second cylinder).
pub const R: IntMat4 = IntMat4([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1], [0, 0, 0, 1]]);

/// Extra generator completing {T, S, R} to a generating set of Sp(4,Z); U^2 = -Id.
pub const U: IntMat4 = IntMat4([[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]]);

/// Transvection on the second basis vector; stabilises the orbit partition badly
/// enough to witness that the group generated by {T, S, R} is not normal.
pub const T_PRIME: IntMat4 = IntMat4([[1, 0, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);

/// X = S * diag(1,1,-1,-1) * S * diag(1,1,-1,-1); commutes with T and Y.
pub const X: IntMat4 = IntMat4([[1, 0, 2, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, -2, 0, 1]]);

/// Y = S^-1 T^-1 S; the lower-block transvection transpose to R.
pub const Y: IntMat4 = IntMat4([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 1, 1]]);

/// Lower-block quarter turn, an element of the embedded SL(2,Z).
pub const S1: IntMat4 = IntMat4([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]);

/// S2 = U^-1 S1 U, the upper-block quarter turn.
pub const S2: IntMat4 = IntMat4([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);

/// The symplectic form Omega = diag(J, J).
pub const OMEGA: IntMat4 = IntMat4([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]);

impl IntMat4 {
    pub fn identity() -> Self {
        IDENTITY
    }

    pub fn zero() -> Self {
        IntMat4([[0; 4]; 4])
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.0[i][j]
    }

    pub fn transpose(&self) -> Self {
        let mut out = [[0i64; 4]; 4];
        for (i, row) in self.0.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                out[j][i] = v;
            }
        }
        IntMat4(out)
    }

    pub fn neg(&self) -> Result<Self, SymplecticError> {
        let mut out = [[0i64; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = self.0[i][j].checked_neg().ok_or(SymplecticError::Overflow)?;
            }
        }
        Ok(IntMat4(out))
    }

    /// Exact product, overflow-checked.
    pub fn mul(&self, rhs: &IntMat4) -> Result<Self, SymplecticError> {
        let mut out = [[0i64; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut acc: i64 = 0;
                for k in 0..4 {
                    let p = self.0[i][k]
                        .checked_mul(rhs.0[k][j])
                        .ok_or(SymplecticError::Overflow)?;
                    acc = acc.checked_add(p).ok_or(SymplecticError::Overflow)?;
                }
                out[i][j] = acc;
            }
        }
        Ok(IntMat4(out))
    }

    /// m^k for k in Z; negative powers require a symplectic matrix.
    pub fn pow(&self, k: i32) -> Result<Self, SymplecticError> {
        let base = if k < 0 { symplectic_inverse(self)? } else { *self };
        let mut acc = IDENTITY;
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    /// Exact determinant (expansion by minors in i128, reported exactly).
    pub fn det(&self) -> i128 {
        let m = &self.0;
        let d2 = |r0: usize, r1: usize, c0: usize, c1: usize| -> i128 {
            m[r0][c0] as i128 * m[r1][c1] as i128 - m[r0][c1] as i128 * m[r1][c0] as i128
        };
        let mut acc: i128 = 0;
        // Laplace expansion along the first two rows.
        let cols = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        for &(c0, c1) in &cols {
            let rest: Vec<usize> = (0..4).filter(|c| *c != c0 && *c != c1).collect();
            let sign = if (c0 + c1) % 2 == 1 { 1 } else { -1 };
            acc += sign as i128 * d2(0, 1, c0, c1) * d2(2, 3, rest[0], rest[1]);
        }
        acc
    }

    /// Conjugate into the [[0, I], [-I, 0]] block convention (basis reorder
    /// a,b,c,e -> a,c,b,e). Provided for interoperability; unused internally.
    pub fn to_block_basis(&self) -> Result<Self, SymplecticError> {
        const P: IntMat4 =
            IntMat4([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]);
        P.mul(self)?.mul(&P)
    }
}

/// True iff m^T * Omega * m = Omega exactly.
pub fn is_symplectic(m: &IntMat4) -> bool {
    match m.transpose().mul(&OMEGA).and_then(|t| t.mul(m)) {
        Ok(p) => p == OMEGA,
        Err(_) => false,
    }
}

/// Inverse of a symplectic matrix, computed exactly as Omega^-1 m^T Omega.
pub fn symplectic_inverse(m: &IntMat4) -> Result<IntMat4, SymplecticError> {
    if !is_symplectic(m) {
        return Err(SymplecticError::NotSymplectic);
    }
    // Omega^-1 = -Omega.
    let inv = OMEGA.neg()?.mul(&m.transpose())?.mul(&OMEGA)?;
    debug_assert_eq!(inv.mul(m).unwrap(), IDENTITY);
    Ok(inv)
}

/// Elementary symplectic matrix E_ij (1-based indices), where sigma transposes
/// (1,2) and (3,4): E_ij = Id + e_ij when i = sigma(j), otherwise
/// Id + e_ij - (-1)^(i+j) e_{sigma(j) sigma(i)}.
pub fn elementary_matrix(i: usize, j: usize) -> Result<IntMat4, SymplecticError> {
    if i == j || i == 0 || j == 0 || i > 4 || j > 4 {
        return Err(SymplecticError::BadIndex(i, j));
    }
    let sigma = |k: usize| match k {
        1 => 2,
        2 => 1,
        3 => 4,
        _ => 3,
    };
    let mut m = IDENTITY;
    m.0[i - 1][j - 1] += 1;
    if i != sigma(j) {
        let s = if (i + j) % 2 == 0 { -1 } else { 1 };
        m.0[sigma(j) - 1][sigma(i) - 1] += s;
    }
    Ok(m)
}

/// Entrywise reduction mod 2.
pub fn reduce_mod2(m: &IntMat4) -> Gf2Mat4 {
    let mut bits: u16 = 0;
    for i in 0..4 {
        for j in 0..4 {
            if m.0[i][j].rem_euclid(2) == 1 {
                bits |= 1 << (4 * i + j);
            }
        }
    }
    Gf2Mat4(bits)
}

impl Gf2Mat4 {
    pub fn identity() -> Self {
        Gf2Mat4(0b1000_0100_0010_0001)
    }

    pub fn bit(&self, i: usize, j: usize) -> u8 {
        ((self.0 >> (4 * i + j)) & 1) as u8
    }

    pub fn mul(&self, rhs: &Gf2Mat4) -> Gf2Mat4 {
        let mut bits: u16 = 0;
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = 0u8;
                for k in 0..4 {
                    acc ^= self.bit(i, k) & rhs.bit(k, j);
                }
                if acc == 1 {
                    bits |= 1 << (4 * i + j);
                }
            }
        }
        Gf2Mat4(bits)
    }

    pub fn rows(&self) -> [[u8; 4]; 4] {
        let mut out = [[0u8; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.bit(i, j);
            }
        }
        out
    }
}

impl Gf2Vec4 {
    pub fn new(coords: [u8; 4]) -> Self {
        let mut b = 0u8;
        for (k, &c) in coords.iter().enumerate() {
            if c % 2 == 1 {
                b |= 1 << k;
            }
        }
        Gf2Vec4(b)
    }

    pub fn is_zero(&self) -> bool {
        self.0 == 0
    }

    pub fn coords(&self) -> [u8; 4] {
        [self.0 & 1, (self.0 >> 1) & 1, (self.0 >> 2) & 1, (self.0 >> 3) & 1]
    }

    /// Row vector times matrix, mod 2.
    pub fn mul_mat(&self, m: &Gf2Mat4) -> Gf2Vec4 {
        let mut b = 0u8;
        for j in 0..4 {
            let mut acc = 0u8;
            for k in 0..4 {
                acc ^= ((self.0 >> k) & 1) * m.bit(k, j);
            }
            if acc == 1 {
                b |= 1 << j;
            }
        }
        Gf2Vec4(b)
    }
}

impl std::fmt::Display for Gf2Vec4 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let c = self.coords();
        write!(f, "({},{},{},{})", c[0], c[1], c[2], c[3])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_times_t_is_t() {
        assert_eq!(IDENTITY.mul(&T).unwrap(), T);
    }

    #[test]
    fn s_squared_is_minus_identity() {
        let minus_id = IDENTITY.neg().unwrap();
        assert_eq!(S.mul(&S).unwrap(), minus_id);
        assert_eq!(U.mul(&U).unwrap(), minus_id);
    }

    #[test]
    fn conjugate_of_t_by_t_prime() {
        let tp_inv = symplectic_inverse(&T_PRIME).unwrap();
        let got = tp_inv.mul(&T).unwrap().mul(&T_PRIME).unwrap();
        let want = IntMat4([[2, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
        assert_eq!(got, want);
    }

    #[test]
    fn symplectic_inverse_of_s_is_minus_s() {
        assert_eq!(symplectic_inverse(&S).unwrap(), S.neg().unwrap());
        assert_eq!(symplectic_inverse(&IDENTITY).unwrap(), IDENTITY);
        // unipotent inverse: off-diagonal 1 negated
        let t_inv = symplectic_inverse(&T).unwrap();
        assert_eq!(t_inv, IntMat4([[1, -1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]));
    }

    #[test]
    fn symplectic_detection() {
        for m in [T, S, R, U, T_PRIME, X, Y, S1, S2] {
            assert!(is_symplectic(&m));
            assert_eq!(m.det(), 1);
        }
        let bad = IntMat4([[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
        assert!(!is_symplectic(&bad));
        assert_eq!(symplectic_inverse(&bad), Err(SymplecticError::NotSymplectic));
    }

    #[test]
    fn elementary_matrices_match_displayed_forms() {
        assert_eq!(
            elementary_matrix(1, 2).unwrap(),
            IntMat4([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
        );
        assert_eq!(
            elementary_matrix(1, 3).unwrap(),
            IntMat4([[1, 0, 1, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, -1, 0, 1]])
        );
        assert_eq!(
            elementary_matrix(4, 1).unwrap(),
            IntMat4([[1, 0, 0, 0], [0, 1, 1, 0], [0, 0, 1, 0], [1, 0, 0, 1]])
        );
        // paired aliases from the displayed list
        assert_eq!(elementary_matrix(4, 1).unwrap(), elementary_matrix(2, 3).unwrap());
        assert_eq!(elementary_matrix(1, 4).unwrap(), elementary_matrix(3, 2).unwrap());
        assert_eq!(elementary_matrix(1, 2), elementary_matrix(1, 2));
        assert!(elementary_matrix(2, 2).is_err());
        assert!(elementary_matrix(0, 1).is_err());
        for i in 1..=4usize {
            for j in 1..=4usize {
                if i != j {
                    assert!(is_symplectic(&elementary_matrix(i, j).unwrap()));
                }
            }
        }
    }

    #[test]
    fn mod2_reduction() {
        let minus_id = IDENTITY.neg().unwrap();
        assert_eq!(reduce_mod2(&minus_id), Gf2Mat4::identity());
        assert_eq!(
            reduce_mod2(&S).rows(),
            [[0, 1, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 1, 0]]
        );
        let doubled = IntMat4([[2, -4, 6, 0], [0, 2, 0, 8], [2, 2, 2, 2], [0, 0, 0, -2]]);
        assert_eq!(reduce_mod2(&doubled), Gf2Mat4(0));
    }

    #[test]
    fn overflow_reported() {
        let big = IntMat4([[i64::MAX, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
        assert_eq!(big.mul(&big), Err(SymplecticError::Overflow));
    }

    #[test]
    fn block_basis_conversion_maps_omega() {
        let blk = OMEGA.to_block_basis().unwrap();
        assert_eq!(
            blk,
            IntMat4([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]])
        );
    }

    #[test]
    fn json_round_trip_row_major() {
        let s = serde_json::to_string(&T).unwrap();
        assert_eq!(s, "[[1,1,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]");
        let back: IntMat4 = serde_json::from_str(&s).unwrap();
        assert_eq!(back, T);
    }
}
