//! Flat genus-2 surfaces with a single cone point, built from three
//! parallelograms glued in a chain, and the elementary moves between their
//! decompositions. The accumulated homology frame of a move word is checked
//! against the geometric action on period vectors, exactly when the chain
//! carries Gaussian-rational entries.

use crate::gamma::{gamma_member, GammaError};
use crate::symplectic::{symplectic_inverse, IntMat4, IDENTITY, R, S, T};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FlatError {
    #[error("pair (z{0}, z{1}) is not positively oriented: Im(conj(z{0}) z{1}) <= 0")]
    NotPositive(usize, usize),
    #[error("R move not realizable: candidate pair (z{0}, z{1}) fails the orientation condition")]
    NotRealizable(usize, usize),
    #[error("degenerate R move: z4 = z2 makes the twist trivial")]
    DegenerateTwist,
    #[error("move word parse error at position {0}: expected one of T t S R r")]
    BadWord(usize),
    #[error("frame left the subgroup (move bookkeeping bug)")]
    FrameEscaped,
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error(transparent)]
    Matrix(#[from] crate::symplectic::SymplecticError),
}

/// Scalar for chain coordinates: floating complex numbers for numeric work,
/// Gaussian rationals for exact area and move bookkeeping.
pub trait ChainScalar: Clone + PartialEq + std::fmt::Debug {
    type Real: Clone + PartialOrd;
    fn zero() -> Self;
    fn real_zero() -> Self::Real;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, k: i64) -> Self;
    /// Im(conj(self) * other)
    fn im_conj_mul(&self, other: &Self) -> Self::Real;
    fn real_add(a: &Self::Real, b: &Self::Real) -> Self::Real;
}

impl ChainScalar for Complex64 {
    type Real = f64;
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn real_zero() -> f64 {
        0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, k: i64) -> Self {
        self * k as f64
    }
    fn im_conj_mul(&self, other: &Self) -> f64 {
        (self.conj() * other).im
    }
    fn real_add(a: &f64, b: &f64) -> f64 {
        a + b
    }
}

/// Exact complex number with rational real and imaginary parts.
pub type GaussianRational = num_complex::Complex<BigRational>;

/// Exact lift of a floating chain (every f64 is a dyadic rational).
pub fn lift_exact(z: Complex64) -> Option<GaussianRational> {
    Some(num_complex::Complex::new(
        BigRational::from_float(z.re)?,
        BigRational::from_float(z.im)?,
    ))
}

/// Nearest floating approximation of an exact value.
pub fn approx(z: &GaussianRational) -> Complex64 {
    use num_traits::ToPrimitive;
    Complex64::new(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
}

/// Convenience constructor for exact chain entries.
pub fn gq(re: (i64, i64), im: (i64, i64)) -> GaussianRational {
    let r = BigRational::new(BigInt::from(re.0), BigInt::from(re.1));
    let i = BigRational::new(BigInt::from(im.0), BigInt::from(im.1));
    num_complex::Complex::new(r, i)
}

impl ChainScalar for GaussianRational {
    type Real = BigRational;
    fn zero() -> Self {
        num_complex::Complex::new(BigRational::zero(), BigRational::zero())
    }
    fn real_zero() -> BigRational {
        BigRational::zero()
    }
    fn add(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }
    fn sub(&self, other: &Self) -> Self {
        self.clone() - other.clone()
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn scale(&self, k: i64) -> Self {
        let f = BigRational::from_integer(BigInt::from(k));
        num_complex::Complex::new(self.re.clone() * f.clone(), self.im.clone() * f)
    }
    fn im_conj_mul(&self, other: &Self) -> BigRational {
        // Im((a - bi)(c + di)) = a d - b c
        self.re.clone() * other.im.clone() - self.im.clone() * other.re.clone()
    }
    fn real_add(a: &BigRational, b: &BigRational) -> BigRational {
        a.clone() + b.clone()
    }
}

fn positive<S: ChainScalar>(x: &S::Real) -> bool {
    *x > S::real_zero()
}

/// Triple-parallelogram datum (z1, z2, z3, z4): parallelograms A = (z1, z2),
/// B = (z2, z3), C = (z3, z4), with each pair positively oriented.
#[derive(Debug, Clone, PartialEq)]
pub struct ParallelogramChain<Sc: ChainScalar> {
    pub z: [Sc; 4],
}

impl<Sc: ChainScalar> ParallelogramChain<Sc> {
    pub fn build(z1: Sc, z2: Sc, z3: Sc, z4: Sc) -> Result<Self, FlatError> {
        let z = [z1, z2, z3, z4];
        for i in 0..3 {
            if !positive::<Sc>(&z[i].im_conj_mul(&z[i + 1])) {
                return Err(FlatError::NotPositive(i + 1, i + 2));
            }
        }
        Ok(ParallelogramChain { z })
    }

    /// Total flat area: sum of the three parallelogram areas.
    pub fn area(&self) -> Sc::Real {
        let mut acc = Sc::real_zero();
        for i in 0..3 {
            acc = Sc::real_add(&acc, &self.z[i].im_conj_mul(&self.z[i + 1]));
        }
        acc
    }

}

/// Halving, needed only for Weierstrass point charts.
pub trait Halve {
    fn half_like(&self) -> Self;
}

impl Halve for Complex64 {
    fn half_like(&self) -> Self {
        self * 0.5
    }
}

impl Halve for GaussianRational {
    fn half_like(&self) -> Self {
        let two = BigRational::from_integer(BigInt::from(2));
        num_complex::Complex::new(self.re.clone() / two.clone(), self.im.clone() / two)
    }
}

impl<Sc: ChainScalar + Halve> ParallelogramChain<Sc> {
    /// The six fixed points of the hyperelliptic involution, in the charts
    /// of the pieces they lie in: the cone point (all vertices), the center
    /// of B, center and waist midpoint of each of the two cylinders. The
    /// cylinder fixed points solve 2x = (side sum) modulo the gluing
    /// translation, which puts one at the center and one at half the glued
    /// side.
    pub fn weierstrass_points(&self) -> WeierstrassPoints<Sc> {
        WeierstrassPoints {
            cone_point: Sc::zero(),
            a_center: self.z[0].add(&self.z[1]).half_like(),
            a_waist: self.z[0].half_like(),
            b_center: self.z[1].add(&self.z[2]).half_like(),
            c_center: self.z[2].add(&self.z[3]).half_like(),
            c_waist: self.z[3].half_like(),
        }
    }
}

/// The six Weierstrass points in piece charts (cone point at the origin of
/// every piece chart).
#[derive(Debug, Clone, PartialEq)]
pub struct WeierstrassPoints<Sc: ChainScalar> {
    pub cone_point: Sc,
    pub a_center: Sc,
    pub a_waist: Sc,
    pub b_center: Sc,
    pub c_center: Sc,
    pub c_waist: Sc,
}

impl<Sc: ChainScalar> WeierstrassPoints<Sc> {
    pub fn all(&self) -> [&Sc; 6] {
        [
            &self.cone_point,
            &self.a_center,
            &self.a_waist,
            &self.b_center,
            &self.c_center,
            &self.c_waist,
        ]
    }
}

/// Elementary move with its twist sign where applicable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    T(i8),
    S,
    R(i8),
}

impl Move {
    /// Homology matrix of the move (column-vector action on (a, b, c, e)).
    pub fn matrix(&self) -> Result<IntMat4, FlatError> {
        Ok(match self {
            Move::T(1) => T,
            Move::T(_) => symplectic_inverse(&T)?,
            Move::S => S,
            Move::R(1) => R,
            Move::R(_) => symplectic_inverse(&R)?,
        })
    }

    /// Parse a word like "TtSRr": uppercase T/R twist positively, lowercase
    /// negatively; S is its own letter.
    pub fn parse_word(word: &str) -> Result<Vec<Move>, FlatError> {
        word.chars()
            .enumerate()
            .map(|(i, c)| match c {
                'T' => Ok(Move::T(1)),
                't' => Ok(Move::T(-1)),
                'S' | 's' => Ok(Move::S),
                'R' => Ok(Move::R(1)),
                'r' => Ok(Move::R(-1)),
                _ => Err(FlatError::BadWord(i)),
            })
            .collect()
    }
}

impl std::fmt::Display for Move {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Move::T(1) => write!(f, "T"),
            Move::T(_) => write!(f, "t"),
            Move::S => write!(f, "S"),
            Move::R(1) => write!(f, "R"),
            Move::R(_) => write!(f, "r"),
        }
    }
}

/// A chain together with the accumulated homology frame relative to the
/// decomposition it started from, and the word that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition<Sc: ChainScalar> {
    pub chain: ParallelogramChain<Sc>,
    pub frame: IntMat4,
    pub word: Vec<Move>,
}

/// Periods of the associated symplectic basis (a, b, c, e); e = d - b.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodVector<Sc: ChainScalar>(pub [Sc; 4]);

impl<Sc: ChainScalar> Decomposition<Sc> {
    pub fn initial(chain: ParallelogramChain<Sc>) -> Self {
        Decomposition { chain, frame: IDENTITY, word: Vec::new() }
    }

    /// Period vector of the current chain: (z1, z2, z3, z4 - z2).
    pub fn period_vector(&self) -> PeriodVector<Sc> {
        let z = &self.chain.z;
        PeriodVector([z[0].clone(), z[1].clone(), z[2].clone(), z[3].sub(&z[1])])
    }

    /// T move: a Dehn twist in the first cylinder; always realizable.
    pub fn t_move(&self, sign: i8) -> Result<Decomposition<Sc>, FlatError> {
        let z = &self.chain.z;
        let z1 = if sign >= 0 { z[0].add(&z[1]) } else { z[0].sub(&z[1]) };
        let chain = ParallelogramChain { z: [z1, z[1].clone(), z[2].clone(), z[3].clone()] };
        debug_assert!(positive::<Sc>(&chain.z[0].im_conj_mul(&chain.z[1])));
        let mv = Move::T(if sign >= 0 { 1 } else { -1 });
        self.push(chain, mv)
    }

    /// S move: relabel (z1,z2,z3,z4) -> (z4, -z3, z2, -z1); always realizable.
    pub fn s_move(&self) -> Result<Decomposition<Sc>, FlatError> {
        let z = &self.chain.z;
        let chain =
            ParallelogramChain { z: [z[3].clone(), z[2].neg(), z[1].clone(), z[0].neg()] };
        self.push(chain, Move::S)
    }

    /// R move: a Dehn twist in the second cylinder; realizable only when the
    /// twisted middle vector keeps both adjacent pairs positively oriented.
    pub fn r_move(&self, sign: i8) -> Result<Decomposition<Sc>, FlatError> {
        let z = &self.chain.z;
        let e = z[3].sub(&z[1]);
        if e == Sc::zero() {
            return Err(FlatError::DegenerateTwist);
        }
        let z3 = if sign >= 0 { z[2].add(&e) } else { z[2].sub(&e) };
        if !positive::<Sc>(&z[1].im_conj_mul(&z3)) {
            return Err(FlatError::NotRealizable(2, 3));
        }
        if !positive::<Sc>(&z3.im_conj_mul(&z[3])) {
            return Err(FlatError::NotRealizable(3, 4));
        }
        let chain = ParallelogramChain { z: [z[0].clone(), z[1].clone(), z3, z[3].clone()] };
        self.push(chain, Move::R(if sign >= 0 { 1 } else { -1 }))
    }

    pub fn apply(&self, mv: Move) -> Result<Decomposition<Sc>, FlatError> {
        match mv {
            Move::T(s) => self.t_move(s),
            Move::S => self.s_move(),
            Move::R(s) => self.r_move(s),
        }
    }

    pub fn apply_word(&self, word: &[Move]) -> Result<Decomposition<Sc>, FlatError> {
        let mut d = self.clone();
        for &mv in word {
            d = d.apply(mv)?;
        }
        Ok(d)
    }

    fn push(&self, chain: ParallelogramChain<Sc>, mv: Move) -> Result<Decomposition<Sc>, FlatError> {
        let frame = mv.matrix()?.mul(&self.frame)?;
        if !gamma_member(&frame)? {
            return Err(FlatError::FrameEscaped);
        }
        let mut word = self.word.clone();
        word.push(mv);
        Ok(Decomposition { chain, frame, word })
    }
}

fn mat_apply<Sc: ChainScalar>(m: &IntMat4, v: &PeriodVector<Sc>) -> PeriodVector<Sc> {
    let mut out = [Sc::zero(), Sc::zero(), Sc::zero(), Sc::zero()];
    for (i, slot) in out.iter_mut().enumerate() {
        let mut acc = Sc::zero();
        for (j, vj) in v.0.iter().enumerate() {
            acc = acc.add(&vj.scale(m.entry(i, j)));
        }
        *slot = acc;
    }
    PeriodVector(out)
}

/// Outcome of replaying a move word both geometrically and through the
/// homology matrices.
#[derive(Debug, Clone)]
pub struct MoveReport {
    pub frame: IntMat4,
    pub word: String,
    pub frame_in_subgroup: bool,
    pub periods_match: bool,
}

/// Apply `word` to `chain` geometrically, multiply the move matrices, and
/// check that the final period vector equals the matrix product applied to
/// the initial one. The first divergence is reported with its move index.
pub fn verify_move_matrices<Sc: ChainScalar>(
    chain: ParallelogramChain<Sc>,
    word: &[Move],
) -> Result<MoveReport, (usize, FlatError)> {
    let initial = Decomposition::initial(chain);
    let v0 = initial.period_vector();
    let mut d = initial;
    for (i, &mv) in word.iter().enumerate() {
        d = d.apply(mv).map_err(|e| (i, e))?;
        let expect = mat_apply(&d.frame, &v0);
        if expect != d.period_vector() {
            return Ok(MoveReport {
                frame: d.frame,
                word: d.word.iter().map(|m| m.to_string()).collect(),
                frame_in_subgroup: false,
                periods_match: false,
            });
        }
    }
    let member = gamma_member(&d.frame).map_err(|e| (word.len(), FlatError::Gamma(e)))?;
    Ok(MoveReport {
        frame: d.frame,
        word: d.word.iter().map(|m| m.to_string()).collect(),
        frame_in_subgroup: member,
        periods_match: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_chain_f64() -> ParallelogramChain<Complex64> {
        ParallelogramChain::build(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        )
        .unwrap()
    }

    fn unit_chain_exact() -> ParallelogramChain<GaussianRational> {
        ParallelogramChain::build(
            gq((1, 1), (0, 1)),
            gq((0, 1), (1, 1)),
            gq((-1, 1), (0, 1)),
            gq((0, 1), (-1, 1)),
        )
        .unwrap()
    }

    #[test]
    fn build_validates_orientation() {
        assert_eq!(unit_chain_f64().area(), 3.0);
        let bad = ParallelogramChain::build(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
        );
        assert_eq!(bad.unwrap_err(), FlatError::NotPositive(2, 3));
        let scaled = ParallelogramChain::build(
            Complex64::new(2.0, 0.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(-2.0, 0.0),
            Complex64::new(0.0, -2.0),
        )
        .unwrap();
        assert_eq!(scaled.area(), 12.0);
    }

    #[test]
    fn period_vector_of_unit_chain() {
        let d = Decomposition::initial(unit_chain_f64());
        let v = d.period_vector();
        assert_eq!(v.0[3], Complex64::new(0.0, -2.0));
    }

    #[test]
    fn t_move_and_back() {
        let d = Decomposition::initial(unit_chain_exact());
        let d2 = d.t_move(1).unwrap().t_move(-1).unwrap();
        assert_eq!(d2.chain, d.chain);
        assert_eq!(d2.frame, IDENTITY);
    }

    #[test]
    fn s_move_relabels_and_s4_is_identity() {
        let d = Decomposition::initial(unit_chain_exact());
        let s1 = d.s_move().unwrap();
        assert_eq!(
            s1.chain.z,
            [gq((0, 1), (-1, 1)), gq((1, 1), (0, 1)), gq((0, 1), (1, 1)), gq((-1, 1), (0, 1)),]
        );
        let s4 = s1.s_move().unwrap().s_move().unwrap().s_move().unwrap();
        assert_eq!(s4.chain, d.chain);
        assert_eq!(s4.frame, IDENTITY);
    }

    #[test]
    fn s_move_period_consistency() {
        let d = Decomposition::initial(unit_chain_f64());
        let s = d.s_move().unwrap();
        let v = s.period_vector();
        assert_eq!(
            v.0,
            [
                Complex64::new(0.0, -1.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(-2.0, 0.0)
            ]
        );
        let expect = mat_apply(&S, &d.period_vector());
        assert_eq!(expect, v);
    }

    #[test]
    fn r_move_on_unit_chain() {
        let d = Decomposition::initial(unit_chain_exact());
        let r = d.r_move(1).unwrap();
        assert_eq!(r.chain.z[2], gq((-1, 1), (-2, 1)));
        // area preserved exactly
        assert_eq!(r.chain.area(), d.chain.area());
    }

    #[test]
    fn r_move_can_fail() {
        // on a chain where Im(conj(z2) e) != 0, repeated twists in one
        // direction must eventually break the orientation condition
        let d = Decomposition::initial(
            ParallelogramChain::build(
                gq((1, 1), (0, 1)),
                gq((0, 1), (1, 1)),
                gq((-1, 1), (1, 2)),
                gq((-3, 10), (-1, 1)),
            )
            .unwrap(),
        );
        let mut cur = d;
        let mut failed = false;
        for _ in 0..10 {
            match cur.r_move(-1) {
                Ok(next) => cur = next,
                Err(FlatError::NotRealizable(_, _)) => {
                    failed = true;
                    break;
                }
                Err(e) => panic!("unexpected error {e:?}"),
            }
        }
        assert!(failed, "repeated negative twists must eventually be unrealizable");
    }

    #[test]
    fn area_invariance_exact() {
        let d = Decomposition::initial(unit_chain_exact());
        let w = Move::parse_word("TRtS").unwrap();
        let fin = d.apply_word(&w).unwrap();
        assert_eq!(fin.chain.area(), d.chain.area());
    }

    #[test]
    fn word_verification() {
        let rep = verify_move_matrices(unit_chain_exact(), &Move::parse_word("Tt").unwrap())
            .unwrap();
        assert_eq!(rep.frame, IDENTITY);
        assert!(rep.periods_match && rep.frame_in_subgroup);
        let rep = verify_move_matrices(unit_chain_exact(), &Move::parse_word("SSSS").unwrap())
            .unwrap();
        assert_eq!(rep.frame, IDENTITY);
        let rep =
            verify_move_matrices(unit_chain_exact(), &Move::parse_word("TRSt").unwrap()).unwrap();
        assert!(rep.periods_match && rep.frame_in_subgroup);
    }

    #[test]
    fn weierstrass_points_of_unit_chain() {
        let pts = unit_chain_f64().weierstrass_points();
        assert_eq!(pts.a_center, Complex64::new(0.5, 0.5));
        assert_eq!(pts.a_waist, Complex64::new(0.5, 0.0));
        assert_eq!(pts.b_center, Complex64::new(-0.5, 0.5));
        assert_eq!(pts.c_center, Complex64::new(-0.5, -0.5));
        assert_eq!(pts.c_waist, Complex64::new(0.0, -0.5));
        // pairwise distinct
        let all = pts.all();
        for i in 0..6 {
            for j in 0..i {
                assert_ne!(all[i], all[j]);
            }
        }
    }

    #[test]
    fn bad_word_rejected() {
        assert_eq!(Move::parse_word("TQX"), Err(FlatError::BadWord(1)));
    }
}
