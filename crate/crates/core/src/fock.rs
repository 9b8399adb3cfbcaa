//! Polynomial Fock modules.
//!
//! Vectors live in `C[x_i, x1_i, y_j, y1_j] (x) V` where `V` is a fixed
//! two-dimensional space with basis `v0, v1`; a vector is a finite sum of
//! monomials tensored with a component. Two families of operators act:
//!
//! * oscillator modes `a, a*, a1, a1*` acting on the `x`-variables by
//!   multiplication and differentiation, with the split between the two
//!   controlled by an ordering mode `r` in `{0, 1}`;
//! * Heisenberg modes `b, b1` acting on the `y`-variables, with zero modes
//!   acting through scalars `B0` and a two-by-two matrix `B1` on `V`, and
//!   central elements acting by `kappa0` and `chi1`.
//!
//! All coefficients are exact rationals.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::scalar::{int, rat, render_scalar, Scalar};

/// Polynomial variable families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum VarFam {
    X,
    X1,
    Y,
    Y1,
}

impl VarFam {
    fn name(self) -> &'static str {
        match self {
            VarFam::X => "x",
            VarFam::X1 => "x1",
            VarFam::Y => "y",
            VarFam::Y1 => "y1",
        }
    }
}

/// A single variable `fam_idx`.
pub type VarKey = (VarFam, i64);

/// Monomial in the polynomial variables, stored as exponents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Monomial(BTreeMap<VarKey, u32>);

impl Monomial {
    /// The empty monomial `1`.
    pub fn empty() -> Self {
        Self::default()
    }

    /// This monomial times one variable.
    pub fn times_var(&self, key: VarKey) -> Self {
        let mut m = self.clone();
        *m.0.entry(key).or_insert(0) += 1;
        m
    }

    /// Total degree.
    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    /// Exponent of one variable.
    pub fn exponent(&self, key: VarKey) -> u32 {
        self.0.get(&key).copied().unwrap_or(0)
    }

    /// Iterates `(variable, exponent)` pairs.
    pub fn vars(&self) -> impl Iterator<Item = (&VarKey, &u32)> {
        self.0.iter()
    }
}

/// Component index in the two-dimensional space `V`.
pub type Vcomp = u8;

/// Vector in the polynomial Fock module.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FockVector {
    terms: BTreeMap<(Monomial, Vcomp), Scalar>,
}

impl FockVector {
    /// Zero vector.
    pub fn zero() -> Self {
        Self::default()
    }

    /// `1 (x) v_c`.
    pub fn vacuum(c: Vcomp) -> Self {
        Self::term(Monomial::empty(), c, int(1))
    }

    /// Single term `s * mono (x) v_c`.
    pub fn term(mono: Monomial, c: Vcomp, s: Scalar) -> Self {
        let mut v = Self::zero();
        v.insert_add((mono, c), s);
        v
    }

    /// Adds `s` to the coefficient of one basis term.
    pub fn insert_add(&mut self, key: (Monomial, Vcomp), s: Scalar) {
        if s.is_zero() {
            return;
        }
        let entry = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *entry += s;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// True when zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, Vcomp), &Scalar)> {
        self.terms.iter()
    }

    /// Number of basis terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.terms.iter() {
            out.insert_add(k.clone(), c.clone());
        }
        out
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    /// Scalar multiple.
    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= s.clone();
        }
        out
    }

    /// Indices of one variable family present anywhere in the vector.
    pub fn var_support(&self, fam: VarFam) -> BTreeSet<i64> {
        let mut out = BTreeSet::new();
        for (mono, _) in self.terms.keys() {
            for ((f, i), _) in mono.vars() {
                if *f == fam {
                    out.insert(*i);
                }
            }
        }
        out
    }

    /// Largest monomial degree.
    pub fn max_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|(m, _)| m.degree())
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((mono, vc), c) in self.terms.iter() {
            let negv = c.is_negative();
            let mag = c.abs();
            if first {
                if negv {
                    write!(f, "-")?;
                }
                first = false;
            } else if negv {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut body: Vec<String> = Vec::new();
            for ((fam, idx), e) in mono.vars() {
                if *e == 1 {
                    body.push(format!("{}_{{{}}}", fam.name(), idx));
                } else {
                    body.push(format!("{}_{{{}}}^{}", fam.name(), idx, e));
                }
            }
            if body.is_empty() {
                write!(f, "{} ⊗ v{}", render_scalar(&mag), vc)?;
            } else if mag.is_one() {
                write!(f, "{} ⊗ v{}", body.join(" "), vc)?;
            } else {
                write!(f, "{}·{} ⊗ v{}", render_scalar(&mag), body.join(" "), vc)?;
            }
        }
        Ok(())
    }
}

/// Multiplication by one variable.
pub fn mul_var(v: &FockVector, key: VarKey) -> FockVector {
    let mut out = FockVector::zero();
    for ((mono, vc), c) in v.terms() {
        out.insert_add((mono.times_var(key), *vc), c.clone());
    }
    out
}

/// Partial derivative in one variable.
pub fn diff_var(v: &FockVector, key: VarKey) -> FockVector {
    let mut out = FockVector::zero();
    for ((mono, vc), c) in v.terms() {
        let e = mono.exponent(key);
        if e == 0 {
            continue;
        }
        let mut m = mono.clone();
        if e == 1 {
            m.0.remove(&key);
        } else {
            m.0.insert(key, e - 1);
        }
        out.insert_add((m, *vc), c.clone() * int(e as i64));
    }
    out
}

/// Two-by-two matrix action on the component space:
/// `v0 -> m00 v0 + m01 v1`, `v1 -> m10 v0 + m11 v1`.
pub fn apply_vmatrix(
    v: &FockVector,
    m00: &Scalar,
    m01: &Scalar,
    m10: &Scalar,
    m11: &Scalar,
) -> FockVector {
    let mut out = FockVector::zero();
    for ((mono, vc), c) in v.terms() {
        let (to0, to1) = if *vc == 0 { (m00, m01) } else { (m10, m11) };
        out.insert_add((mono.clone(), 0), c.clone() * to0.clone());
        out.insert_add((mono.clone(), 1), c.clone() * to1.clone());
    }
    out
}

/// Normal-ordering convention for the oscillator representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderingMode {
    R0,
    R1,
}

impl OrderingMode {
    /// The indicator `delta_{r,0}`.
    pub fn delta_r0(self) -> i64 {
        match self {
            OrderingMode::R0 => 1,
            OrderingMode::R1 => 0,
        }
    }

    /// Numeric tag.
    pub fn tag(self) -> u8 {
        match self {
            OrderingMode::R0 => 0,
            OrderingMode::R1 => 1,
        }
    }

    /// From the numeric tag.
    pub fn from_tag(r: u8) -> Option<Self> {
        match r {
            0 => Some(OrderingMode::R0),
            1 => Some(OrderingMode::R1),
            _ => None,
        }
    }
}

/// Operator families acting on the Fock module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum OscFam {
    A,
    AStar,
    A1,
    A1Star,
    B,
    B1,
    One0,
    One1,
}

impl OscFam {
    /// Printable name.
    pub fn name(self) -> &'static str {
        match self {
            OscFam::A => "a",
            OscFam::AStar => "a*",
            OscFam::A1 => "a1",
            OscFam::A1Star => "a1*",
            OscFam::B => "b",
            OscFam::B1 => "b1",
            OscFam::One0 => "one0",
            OscFam::One1 => "one1",
        }
    }
}

/// One operator mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct OscMode {
    pub fam: OscFam,
    pub idx: i64,
}

impl OscMode {
    pub fn new(fam: OscFam, idx: i64) -> Self {
        Self { fam, idx }
    }
}

/// Errors from operator application.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FockError {
    #[error("operator family `{fam}` is not handled by `{op}`")]
    WrongFamily { op: &'static str, fam: &'static str },
}

/// Applies an oscillator mode (`a`, `a*`, `a1`, `a1*`, or the identity
/// central element) in ordering mode `r`:
///
/// * `a_m` differentiates `x_m` when `m >= 0` and `r = 0`, otherwise
///   multiplies by `x_m`;
/// * `a*_m` multiplies by `x_{-m}` when `m <= 0` and `r = 0`, otherwise
///   acts as minus the derivative in `x_{-m}`;
/// * `a1`, `a1*` act the same way on the `x1` family.
pub fn apply_oscillator(
    mode: OscMode,
    r: OrderingMode,
    v: &FockVector,
) -> Result<FockVector, FockError> {
    let m = mode.idx;
    let r0 = r == OrderingMode::R0;
    match mode.fam {
        OscFam::A | OscFam::A1 => {
            let fam = if mode.fam == OscFam::A {
                VarFam::X
            } else {
                VarFam::X1
            };
            if r0 && m >= 0 {
                Ok(diff_var(v, (fam, m)))
            } else {
                Ok(mul_var(v, (fam, m)))
            }
        }
        OscFam::AStar | OscFam::A1Star => {
            let fam = if mode.fam == OscFam::AStar {
                VarFam::X
            } else {
                VarFam::X1
            };
            if r0 && m <= 0 {
                Ok(mul_var(v, (fam, -m)))
            } else {
                Ok(diff_var(v, (fam, -m)).neg())
            }
        }
        OscFam::One0 => Ok(v.clone()),
        fam => Err(FockError::WrongFamily {
            op: "apply_oscillator",
            fam: fam.name(),
        }),
    }
}

/// Parameters of the Heisenberg representation: the zero-mode scalar `B0`,
/// the zero-mode matrix `B1` (with equal diagonal entries), and the central
/// values `kappa0` and `chi1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisenbergParams {
    pub b0: Scalar,
    pub b1_diag: Scalar,
    pub b1_01: Scalar,
    pub b1_10: Scalar,
    pub kappa0: Scalar,
    pub chi1: Scalar,
}

impl Default for HeisenbergParams {
    fn default() -> Self {
        Self {
            b0: Scalar::zero(),
            b1_diag: Scalar::zero(),
            b1_01: Scalar::zero(),
            b1_10: Scalar::zero(),
            kappa0: int(1),
            chi1: Scalar::zero(),
        }
    }
}

/// Applies a Heisenberg mode (`b`, `b1`, or a central element):
///
/// * `b_m`: multiplication by `y_m` for `m < 0`; `-2 m kappa0 d/dy_{-m}`
///   for `m > 0`; the scalar `B0` at `m = 0`;
/// * `b1_m`: multiplication by `y1_m` for `m < 0`;
///   `-(2 + 2m) kappa0 d/dy1_{-2-m} - 4(1 + 2m) kappa0 d/dy1_{-1-m}` for
///   `m > 0`; at `m = 0` the same derivative pair plus the matrix `B1`;
/// * `one0` scales by `kappa0`, `one1` scales by `chi1`.
pub fn apply_heisenberg(
    mode: OscMode,
    p: &HeisenbergParams,
    v: &FockVector,
) -> Result<FockVector, FockError> {
    let m = mode.idx;
    match mode.fam {
        OscFam::B => {
            if m < 0 {
                Ok(mul_var(v, (VarFam::Y, m)))
            } else if m > 0 {
                Ok(diff_var(v, (VarFam::Y, -m)).scale(&(int(-2 * m) * p.kappa0.clone())))
            } else {
                Ok(v.scale(&p.b0))
            }
        }
        OscFam::B1 => {
            if m < 0 {
                Ok(mul_var(v, (VarFam::Y1, m)))
            } else {
                let d2 = diff_var(v, (VarFam::Y1, -2 - m))
                    .scale(&(int(-(2 + 2 * m)) * p.kappa0.clone()));
                let d1 = diff_var(v, (VarFam::Y1, -1 - m))
                    .scale(&(int(-4 * (1 + 2 * m)) * p.kappa0.clone()));
                let mut out = d2.add(&d1);
                if m == 0 {
                    out = out.add(&apply_vmatrix(
                        v, &p.b1_diag, &p.b1_01, &p.b1_10, &p.b1_diag,
                    ));
                }
                Ok(out)
            }
        }
        OscFam::One0 => Ok(v.scale(&p.kappa0)),
        OscFam::One1 => Ok(v.scale(&p.chi1)),
        fam => Err(FockError::WrongFamily {
            op: "apply_heisenberg",
            fam: fam.name(),
        }),
    }
}

/// Deterministic sparse test vectors: up to three monomials each, degree
/// at most two, variable indices in `[-4, 4]` with `y`-family indices
/// negative, random component, and small rational coefficients.
pub fn seeded_vectors(count: usize, seed: u64) -> Vec<FockVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n_mono = rng.gen_range(1..=3);
        let mut v = FockVector::zero();
        for _ in 0..n_mono {
            let deg = rng.gen_range(0..=2u32);
            let mut mono = Monomial::empty();
            for _ in 0..deg {
                let fam = match rng.gen_range(0..4) {
                    0 => VarFam::X,
                    1 => VarFam::X1,
                    2 => VarFam::Y,
                    _ => VarFam::Y1,
                };
                let idx = match fam {
                    VarFam::Y | VarFam::Y1 => rng.gen_range(-4..=-1),
                    _ => rng.gen_range(-4..=4),
                };
                mono = mono.times_var((fam, idx));
            }
            let vc: Vcomp = rng.gen_range(0..2);
            let num = loop {
                let x = rng.gen_range(-3..=3);
                if x != 0 {
                    break x;
                }
            };
            let den = rng.gen_range(1..=2);
            v.insert_add((mono, vc), rat(num, den));
        }
        if !v.is_zero() {
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn commutator_osc(a: OscMode, b: OscMode, r: OrderingMode, v: &FockVector) -> FockVector {
        let ab = apply_oscillator(a, r, &apply_oscillator(b, r, v).unwrap()).unwrap();
        let ba = apply_oscillator(b, r, &apply_oscillator(a, r, v).unwrap()).unwrap();
        ab.sub(&ba)
    }

    fn commutator_heis(a: OscMode, b: OscMode, p: &HeisenbergParams, v: &FockVector) -> FockVector {
        let ab = apply_heisenberg(a, p, &apply_heisenberg(b, p, v).unwrap()).unwrap();
        let ba = apply_heisenberg(b, p, &apply_heisenberg(a, p, v).unwrap()).unwrap();
        ab.sub(&ba)
    }

    fn sample_vectors() -> Vec<FockVector> {
        let mut vs = vec![FockVector::vacuum(0), FockVector::vacuum(1)];
        vs.extend(seeded_vectors(4, 7));
        vs
    }

    #[test]
    fn vacuum_axioms() {
        let vac = FockVector::vacuum(0);
        for m in 0..=3 {
            assert!(
                apply_oscillator(OscMode::new(OscFam::A, m), OrderingMode::R0, &vac)
                    .unwrap()
                    .is_zero()
            );
        }
        for m in 1..=3 {
            assert!(
                apply_oscillator(OscMode::new(OscFam::AStar, m), OrderingMode::R0, &vac)
                    .unwrap()
                    .is_zero()
            );
        }
        for m in -3..=3 {
            assert!(
                apply_oscillator(OscMode::new(OscFam::AStar, m), OrderingMode::R1, &vac)
                    .unwrap()
                    .is_zero()
            );
            assert!(
                apply_oscillator(OscMode::new(OscFam::A1Star, m), OrderingMode::R1, &vac)
                    .unwrap()
                    .is_zero()
            );
        }
    }

    #[test]
    fn oscillator_canonical_relations() {
        for r in [OrderingMode::R0, OrderingMode::R1] {
            for v in sample_vectors() {
                for m in -2..=2 {
                    for n in -2..=2 {
                        let got = commutator_osc(
                            OscMode::new(OscFam::A, m),
                            OscMode::new(OscFam::AStar, n),
                            r,
                            &v,
                        );
                        let want = if m + n == 0 {
                            v.clone()
                        } else {
                            FockVector::zero()
                        };
                        assert_eq!(got, want, "r={:?} m={} n={}", r, m, n);

                        let cross = commutator_osc(
                            OscMode::new(OscFam::A, m),
                            OscMode::new(OscFam::A1Star, n),
                            r,
                            &v,
                        );
                        assert!(cross.is_zero());

                        let aa = commutator_osc(
                            OscMode::new(OscFam::A, m),
                            OscMode::new(OscFam::A1, n),
                            r,
                            &v,
                        );
                        assert!(aa.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn heisenberg_relations_samples() {
        let p = HeisenbergParams {
            b0: rat(3, 2),
            b1_diag: int(1),
            b1_01: int(-2),
            b1_10: rat(1, 3),
            kappa0: rat(5, 2),
            chi1: Scalar::zero(),
        };
        for v in sample_vectors() {
            for m in -4..=4i64 {
                for n in -4..=4i64 {
                    let bb = commutator_heis(
                        OscMode::new(OscFam::B, m),
                        OscMode::new(OscFam::B, n),
                        &p,
                        &v,
                    );
                    let want = if m + n == 0 {
                        v.scale(&(int(-2 * m) * p.kappa0.clone()))
                    } else {
                        FockVector::zero()
                    };
                    assert_eq!(bb, want, "b pair m={} n={}", m, n);

                    let b1b1 = commutator_heis(
                        OscMode::new(OscFam::B1, m),
                        OscMode::new(OscFam::B1, n),
                        &p,
                        &v,
                    );
                    let coef = if m + n == -2 {
                        int(2 * (n + 1))
                    } else if m + n == -1 {
                        int(2 * (4 * n + 2))
                    } else {
                        Scalar::zero()
                    };
                    assert_eq!(
                        b1b1,
                        v.scale(&(coef * p.kappa0.clone())),
                        "b1 pair m={} n={}",
                        m,
                        n
                    );

                    let cross = commutator_heis(
                        OscMode::new(OscFam::B1, m),
                        OscMode::new(OscFam::B, n),
                        &p,
                        &v,
                    );
                    assert!(cross.is_zero(), "cross pair m={} n={}", m, n);
                }
            }
        }
    }

    #[test]
    fn zero_modes() {
        let p = HeisenbergParams {
            b0: int(7),
            b1_diag: int(2),
            b1_01: int(3),
            b1_10: int(5),
            ..Default::default()
        };
        let v0 = FockVector::vacuum(0);
        let v1 = FockVector::vacuum(1);
        assert_eq!(
            apply_heisenberg(OscMode::new(OscFam::B, 0), &p, &v0).unwrap(),
            v0.scale(&int(7))
        );
        let b1_v0 = apply_heisenberg(OscMode::new(OscFam::B1, 0), &p, &v0).unwrap();
        assert_eq!(b1_v0, v0.scale(&int(2)).add(&v1.scale(&int(3))));
        let b1_v1 = apply_heisenberg(OscMode::new(OscFam::B1, 0), &p, &v1).unwrap();
        assert_eq!(b1_v1, v0.scale(&int(5)).add(&v1.scale(&int(2))));
    }

    #[test]
    fn family_mismatch_is_an_error() {
        let v = FockVector::vacuum(0);
        assert!(apply_oscillator(OscMode::new(OscFam::B, 1), OrderingMode::R0, &v).is_err());
        assert!(apply_heisenberg(OscMode::new(OscFam::A, 1), &Default::default(), &v).is_err());
    }

    #[test]
    fn seeded_vectors_are_deterministic_and_bounded() {
        let a = seeded_vectors(8, 42);
        let b = seeded_vectors(8, 42);
        assert_eq!(a, b);
        assert_eq!(a.len(), 8);
        let c = seeded_vectors(8, 43);
        assert_ne!(a, c);
        for v in &a {
            assert!(v.term_count() <= 3);
            assert!(v.max_degree() <= 2);
            for fam in [VarFam::Y, VarFam::Y1] {
                assert!(v.var_support(fam).iter().all(|i| (-4..=-1).contains(i)));
            }
            for fam in [VarFam::X, VarFam::X1] {
                assert!(v.var_support(fam).iter().all(|i| (-4..=4).contains(i)));
            }
        }
    }

    #[test]
    fn display_is_readable() {
        let mono = Monomial::empty()
            .times_var((VarFam::X, -1))
            .times_var((VarFam::X, -1))
            .times_var((VarFam::Y1, -2));
        let v = FockVector::term(mono, 0, rat(3, 2));
        assert_eq!(format!("{}", v), "3/2·x_{-1}^2 y1_{-2} ⊗ v0");
        assert_eq!(format!("{}", FockVector::vacuum(1)), "1 ⊗ v1");
        assert_eq!(format!("{}", FockVector::zero()), "0");
    }
}
