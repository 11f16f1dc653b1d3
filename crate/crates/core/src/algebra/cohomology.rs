//! Simplicial cohomology with ℤ, ℤ/2 and ℚ/ℤ coefficients, optionally
//! twisted by a sign local system.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::group::AbelianGroup;
use super::matrix::{
    combine, from_dense, smith_normal_form, to_dense, Euclid, Snf, SparseMatrix, SparseVec, Track, F2,
};
use crate::complex::{DeltaComplex, SignCocycle};
use crate::error::{Error, Result};

/// Coefficient groups handled by the engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Coeff {
    #[serde(rename = "Z")]
    Z,
    #[serde(rename = "Z2")]
    Z2,
    #[serde(rename = "QmodZ")]
    QmodZ,
}

impl std::str::FromStr for Coeff {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" | "z" => Ok(Coeff::Z),
            "Z2" | "z2" => Ok(Coeff::Z2),
            "QmodZ" | "qmodz" | "Q/Z" => Ok(Coeff::QmodZ),
            _ => Err(Error::Parse(format!("unknown coefficient group {s:?}"))),
        }
    }
}

/// The coboundary `δ: Cᵖ → Cᵖ⁺¹` as a `count(p+1) × count(p)` matrix. The
/// twist multiplies the 0-th face term by the sign of the leading edge.
pub fn coboundary_matrix<R: Euclid>(
    x: &DeltaComplex,
    p: usize,
    twist: Option<&SignCocycle>,
) -> SparseMatrix<R> {
    let rows = x.count(p + 1);
    let cols = x.count(p);
    let one = R::unit_el();
    let data: Vec<SparseVec<R>> = (0..rows)
        .map(|s| {
            let mut terms: Vec<(usize, R)> = Vec::with_capacity(p + 2);
            for i in 0..=p + 1 {
                let f = x.face(p + 1, s, i);
                let mut negative = i % 2 == 1;
                if i == 0 && twist.is_some_and(|w| w.leading_sign(x, p + 1, s)) {
                    negative = !negative;
                }
                terms.push((f, if negative { one.negate() } else { one.clone() }));
            }
            terms.sort_by_key(|t| t.0);
            let mut row: SparseVec<R> = Vec::with_capacity(terms.len());
            for (f, v) in terms {
                match row.last_mut() {
                    Some(last) if last.0 == f => last.1 = last.1.plus(&v),
                    _ => row.push((f, v)),
                }
            }
            row.retain(|e| !e.1.is_nil());
            row
        })
        .collect();
    SparseMatrix::from_rows(rows, cols, data)
}

/// Applies the (twisted) coboundary to a dense cochain.
pub fn apply_coboundary<R: Euclid>(
    x: &DeltaComplex,
    p: usize,
    twist: Option<&SignCocycle>,
    f: &[R],
) -> Vec<R> {
    let mut out = vec![R::nil(); x.count(p + 1)];
    for (s, o) in out.iter_mut().enumerate() {
        let mut acc = R::nil();
        for i in 0..=p + 1 {
            let v = &f[x.face(p + 1, s, i)];
            if v.is_nil() {
                continue;
            }
            let mut negative = i % 2 == 1;
            if i == 0 && twist.is_some_and(|w| w.leading_sign(x, p + 1, s)) {
                negative = !negative;
            }
            acc = if negative { acc.minus(v) } else { acc.plus(v) };
        }
        *o = acc;
    }
    out
}

/// Cohomology in one degree over ℤ (`BigInt`) or ℤ/2 (`F2`), with the data
/// needed to find coordinates of arbitrary cocycles.
#[derive(Clone, Debug)]
pub struct Cohomology<R: Euclid> {
    pub degree: usize,
    pub group: AbelianGroup,
    n: usize,
    prev: Snf<R>,
    w: Snf<R>,
    torsion_idx: Vec<usize>,
    reps: Vec<SparseVec<R>>,
}

pub type IntCohomology = Cohomology<BigInt>;
pub type Mod2Cohomology = Cohomology<F2>;

impl<R: Euclid> Cohomology<R> {
    pub fn compute(x: &DeltaComplex, p: usize, twist: Option<&SignCocycle>) -> Self {
        let n = x.count(p);
        let prev_m: SparseMatrix<R> =
            if p == 0 { SparseMatrix::zeros(n, 0) } else { coboundary_matrix(x, p - 1, twist) };
        let prev = smith_normal_form(&prev_m, Track::BOTH);
        let k = prev.rank();
        let g = prev.u_inv_cols.as_ref().unwrap();
        let next_t = coboundary_matrix::<R>(x, p, twist).transpose();
        let next_cols: Vec<SparseVec<R>> = (0..n).map(|j| next_t.row(j).clone()).collect();
        let m = x.count(p + 1);
        let wcols: Vec<SparseVec<R>> = (k..n).map(|j| combine(&next_cols, &g[j], m)).collect();
        let w = smith_normal_form(&SparseMatrix::from_columns(m, &wcols), Track::RIGHT);
        let k2 = w.rank();
        let vcols = w.v_cols.as_ref().unwrap();
        let tail: Vec<SparseVec<R>> = g[k..].to_vec();
        let mut reps: Vec<SparseVec<R>> =
            (k2..n - k).map(|j| combine(&tail, &vcols[j], n)).collect();
        let torsion_idx: Vec<usize> = (0..k).filter(|&i| !prev.diag[i].is_unit()).collect();
        reps.extend(torsion_idx.iter().map(|&i| g[i].clone()));
        let basis: Vec<SparseVec<BigInt>> =
            reps.iter().map(|r| r.iter().map(|(i, v)| (*i, v.to_int())).collect()).collect();
        let free = n - k - k2;
        let group = if R::from_int(&BigInt::from(2)).is_nil() {
            AbelianGroup { free_rank: 0, torsion: vec![BigInt::from(2); free], basis }
        } else {
            AbelianGroup {
                free_rank: free,
                torsion: torsion_idx.iter().map(|&i| prev.diag[i].to_int()).collect(),
                basis,
            }
        };
        Cohomology { degree: p, group, n, prev, w, torsion_idx, reps }
    }

    pub fn cochain_dim(&self) -> usize {
        self.n
    }

    fn is_char2(&self) -> bool {
        R::from_int(&BigInt::from(2)).is_nil()
    }

    /// Coordinates of the class of a cocycle; errors if it is not closed.
    pub fn coords(&self, z: &[R]) -> Result<Vec<BigInt>> {
        if z.len() != self.n {
            return Err(Error::DegreeMismatch(format!(
                "cochain has {} entries, expected {}",
                z.len(),
                self.n
            )));
        }
        let c = self.prev.apply_u(z);
        let k = self.prev.rank();
        let u = self.w.apply_v_inv(&c[k..]);
        let k2 = self.w.rank();
        if u[..k2].iter().any(|v| !v.is_nil()) {
            return Err(Error::NotInKernel(format!("cochain of degree {} is not a cocycle", self.degree)));
        }
        let mut out: Vec<BigInt> = u[k2..].iter().map(|v| v.to_int()).collect();
        if !self.is_char2() {
            for &i in &self.torsion_idx {
                out.push(c[i].to_int().mod_floor(&self.prev.diag[i].to_int()));
            }
        }
        Ok(out)
    }

    /// Dense representative of the i-th generator.
    pub fn rep(&self, i: usize) -> Vec<R> {
        to_dense(&self.reps[i], self.n)
    }

    /// Representative of the class with the given coordinates.
    pub fn class_rep(&self, coords: &[BigInt]) -> Vec<R> {
        let x: SparseVec<R> = coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_nil())
            .map(|(i, c)| (i, R::from_int(c)))
            .filter(|(_, c)| !c.is_nil())
            .collect();
        to_dense(&combine(&self.reps, &x, self.n), self.n)
    }

    /// Solves `δ_{p−1} e = b` for a coboundary `b` of this degree, or `None`
    /// when `b` is not a coboundary.
    pub fn preimage(&self, b: &[R]) -> Option<Vec<R>> {
        let c = self.prev.apply_u(b);
        let k = self.prev.rank();
        if c[k..].iter().any(|v| !v.is_nil()) {
            return None;
        }
        let mut y = Vec::with_capacity(k);
        for i in 0..k {
            let (q, r) = c[i].div_rem_e(&self.prev.diag[i]);
            if !r.is_nil() {
                return None;
            }
            y.push((i, q));
        }
        let y: SparseVec<R> = y.into_iter().filter(|(_, v)| !v.is_nil()).collect();
        let vcols = self.prev.v_cols.as_ref().unwrap();
        Some(to_dense(&combine(vcols, &y, self.prev.cols), self.prev.cols))
    }

    /// For the i-th torsion block of the incoming coboundary: `y` with
    /// `δ_{p−1} y = sᵢ·gᵢ`.
    fn torsion_witness(&self, t: usize) -> (BigInt, SparseVec<R>) {
        let i = self.torsion_idx[t];
        (self.prev.diag[i].to_int(), self.prev.v_cols.as_ref().unwrap()[i].clone())
    }
}

/// A ℚ/ℤ-valued cochain `numerators / denominator` (entries mod 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QmodZCochain {
    #[serde(serialize_with = "super::num_serde::int")]
    pub denominator: BigInt,
    #[serde(serialize_with = "super::num_serde::ints")]
    pub numerators: Vec<BigInt>,
}

impl QmodZCochain {
    pub fn new(denominator: BigInt, numerators: Vec<BigInt>) -> Result<Self> {
        if denominator <= BigInt::zero() {
            return Err(Error::InvalidCocycle("denominator must be positive".into()));
        }
        let numerators = numerators.iter().map(|v| v.mod_floor(&denominator)).collect();
        Ok(QmodZCochain { denominator, numerators }.reduced())
    }

    pub fn zero(len: usize) -> Self {
        QmodZCochain { denominator: BigInt::one(), numerators: vec![BigInt::zero(); len] }
    }

    /// The image under ℤ/2 ⊂ ℚ/ℤ (value 1 ↦ ½).
    pub fn from_mod2(bits: &[bool]) -> Self {
        QmodZCochain::new(
            BigInt::from(2),
            bits.iter().map(|&b| BigInt::from(b as u8)).collect(),
        )
        .expect("positive denominator")
    }

    fn reduced(self) -> Self {
        let g = self.numerators.iter().fold(self.denominator.clone(), |g, v| g.gcd(v));
        if g.is_one() {
            return self;
        }
        QmodZCochain {
            denominator: &self.denominator / &g,
            numerators: self.numerators.iter().map(|v| v / &g).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.numerators.iter().all(|v| v.is_zero())
    }

    pub fn values(&self) -> Vec<BigRational> {
        self.numerators
            .iter()
            .map(|v| BigRational::new(v.clone(), self.denominator.clone()))
            .collect()
    }

    /// Numerators over a multiple `l` of the denominator.
    fn scaled_to(&self, l: &BigInt) -> Vec<BigInt> {
        let f = l / &self.denominator;
        self.numerators.iter().map(|v| v * &f).collect()
    }

    pub fn add(&self, o: &QmodZCochain) -> QmodZCochain {
        let l = self.denominator.lcm(&o.denominator);
        let a = self.scaled_to(&l);
        let b = o.scaled_to(&l);
        QmodZCochain::new(l, a.iter().zip(&b).map(|(x, y)| x + y).collect()).expect("positive")
    }

    pub fn scale(&self, k: &BigInt) -> QmodZCochain {
        QmodZCochain::new(self.denominator.clone(), self.numerators.iter().map(|v| v * k).collect())
            .expect("positive")
    }
}

/// Coordinates of a ℚ/ℤ class: the divisible part as fractions in [0, 1) and
/// the finite part in the torsion of the next integral group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QmodZCoords {
    #[serde(serialize_with = "super::num_serde::rats")]
    pub divisible: Vec<BigRational>,
    #[serde(serialize_with = "super::num_serde::ints")]
    pub finite: Vec<BigInt>,
}

impl QmodZCoords {
    pub fn is_zero(&self) -> bool {
        self.divisible.iter().all(|v| v.is_zero()) && self.finite.iter().all(|v| v.is_zero())
    }
}

/// Structure of `Hᵖ(X; ℚ/ℤ)`: `(ℚ/ℤ)^divisible_rank ⊕ finite`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QmodZGroup {
    pub divisible_rank: usize,
    pub finite: AbelianGroup,
}

impl std::fmt::Display for QmodZGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.divisible_rank, self.finite.is_trivial()) {
            (0, _) => write!(f, "{}", self.finite),
            (r, true) => write!(f, "(Q/Z)^{r}"),
            (r, false) => write!(f, "(Q/Z)^{r} + {}", self.finite),
        }
    }
}

/// `Hᵖ(X; ℚ/ℤ)` (twisted) assembled from the integral groups in degrees
/// `p` and `p + 1`.
#[derive(Clone, Debug)]
pub struct QmodZCohomology {
    pub degree: usize,
    pub group: QmodZGroup,
    reps: Vec<QmodZCochain>,
    here: IntCohomology,
    next: IntCohomology,
    x_counts: (usize, usize),
}

impl QmodZCohomology {
    pub fn from_integral(here: IntCohomology, next: IntCohomology) -> Self {
        let p = here.degree;
        let reps: Vec<QmodZCochain> = (0..next.torsion_idx.len())
            .map(|t| {
                let (s, y) = next.torsion_witness(t);
                QmodZCochain::new(s, to_dense(&y, here.cochain_dim())).expect("positive order")
            })
            .collect();
        let finite = AbelianGroup {
            free_rank: 0,
            torsion: next.group.torsion.clone(),
            basis: Vec::new(),
        };
        let x_counts = (here.cochain_dim(), next.cochain_dim());
        QmodZCohomology {
            degree: p,
            group: QmodZGroup { divisible_rank: here.group.free_rank, finite },
            reps,
            here,
            next,
            x_counts,
        }
    }

    pub fn compute(x: &DeltaComplex, p: usize, twist: Option<&SignCocycle>) -> Self {
        Self::from_integral(
            IntCohomology::compute(x, p, twist),
            IntCohomology::compute(x, p + 1, twist),
        )
    }

    /// Representative of the i-th finite generator.
    pub fn rep(&self, i: usize) -> &QmodZCochain {
        &self.reps[i]
    }

    /// Integral lift of the Bockstein `δc/N` of a ℚ/ℤ cocycle, checking closure.
    pub fn bockstein_cochain(
        x: &DeltaComplex,
        p: usize,
        twist: Option<&SignCocycle>,
        c: &QmodZCochain,
    ) -> Result<Vec<BigInt>> {
        if c.len() != x.count(p) {
            return Err(Error::DegreeMismatch(format!(
                "cochain has {} entries, expected {}",
                c.len(),
                x.count(p)
            )));
        }
        let d = apply_coboundary(x, p, twist, &c.numerators);
        let mut out = Vec::with_capacity(d.len());
        for v in d {
            let (q, r) = v.div_rem(&c.denominator);
            if !r.is_zero() {
                return Err(Error::NotInKernel(format!("ℚ/ℤ cochain of degree {p} is not a cocycle")));
            }
            out.push(q);
        }
        Ok(out)
    }

    /// Coordinates of the class of a ℚ/ℤ cocycle.
    pub fn coords(
        &self,
        x: &DeltaComplex,
        twist: Option<&SignCocycle>,
        c: &QmodZCochain,
    ) -> Result<QmodZCoords> {
        if (x.count(self.degree), x.count(self.degree + 1)) != self.x_counts {
            return Err(Error::ComplexMismatch);
        }
        let p = self.degree;
        let b = Self::bockstein_cochain(x, p, twist, c)?;
        let bc = self.next.coords(&b)?;
        let nfree = self.next.group.free_rank;
        if bc[..nfree].iter().any(|v| !v.is_zero()) {
            return Err(Error::Inconsistent("Bockstein of a ℚ/ℤ class has a free component".into()));
        }
        let finite: Vec<BigInt> = bc[nfree..].to_vec();
        // strip the finite part, leaving a class from H^p(ℤ) ⊗ ℚ/ℤ
        let mut rest = c.clone();
        for (f, rep) in finite.iter().zip(&self.reps) {
            if !f.is_zero() {
                rest = rest.add(&rep.scale(&-f));
            }
        }
        let l = rest.denominator.clone();
        let db = Self::bockstein_cochain(x, p, twist, &rest)?;
        let e = self.next.preimage(&db).ok_or_else(|| {
            Error::Inconsistent("residual Bockstein is not a coboundary".into())
        })?;
        let z: Vec<BigInt> = rest.numerators.iter().zip(&e).map(|(a, b)| a - &l * b).collect();
        let zc = self.here.coords(&z)?;
        let divisible = zc[..self.here.group.free_rank]
            .iter()
            .map(|v| {
                let r = BigRational::new(v.clone(), l.clone());
                &r - r.floor()
            })
            .collect();
        Ok(QmodZCoords { divisible, finite })
    }

    /// The integral group in this degree (its free rank is the divisible rank).
    pub fn integral(&self) -> &IntCohomology {
        &self.here
    }

    /// The integral group one degree up (its torsion is the finite part).
    pub fn integral_next(&self) -> &IntCohomology {
        &self.next
    }
}

/// Dense mod-2 cochain helpers.
pub fn bits_to_f2(bits: &[bool]) -> Vec<F2> {
    bits.iter().map(|&b| F2(b)).collect()
}

pub fn f2_to_bits(v: &[F2]) -> Vec<bool> {
    v.iter().map(|b| b.0).collect()
}

pub fn ints_to_sparse(v: &[BigInt]) -> SparseVec<BigInt> {
    from_dense(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_klein, build_rp, build_sphere, circle, product, rp2_six_vertex};

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn int_groups(x: &DeltaComplex, tw: Option<&SignCocycle>) -> Vec<AbelianGroup> {
        (0..=x.dim()).map(|p| IntCohomology::compute(x, p, tw).group.structure()).collect()
    }

    fn mod2_ranks(x: &DeltaComplex) -> Vec<usize> {
        (0..=x.dim()).map(|p| Mod2Cohomology::compute(x, p, None).group.ngens()).collect()
    }

    #[test]
    fn sphere_cohomology() {
        let s = build_sphere(3);
        let g = int_groups(&s, None);
        assert_eq!(g.iter().map(|g| g.free_rank).collect::<Vec<_>>(), vec![1, 0, 0, 1]);
        assert!(g.iter().all(|g| g.torsion.is_empty()));
    }

    #[test]
    fn rp_integral_and_twisted() {
        let (x, w) = build_rp(4).unwrap();
        let g = int_groups(&x, None);
        let expect = ["Z", "0", "Z/2", "0", "Z/2"];
        for (g, e) in g.iter().zip(expect) {
            assert_eq!(g.to_string(), e);
        }
        let (x2, w2) = build_rp(2).unwrap();
        let t = int_groups(&x2, Some(&w2));
        assert_eq!(t.iter().map(|g| g.to_string()).collect::<Vec<_>>(), vec!["0", "Z/2", "Z"]);
        assert_eq!(mod2_ranks(&x), vec![1; 5]);
        let tw = int_groups(&x, Some(&w));
        assert_eq!(tw.iter().map(|g| g.to_string()).collect::<Vec<_>>(), vec!["0", "Z/2", "0", "Z/2", "Z"]);
    }

    #[test]
    fn six_vertex_rp2() {
        let x = rp2_six_vertex();
        let g = int_groups(&x, None);
        assert_eq!(g[2].torsion, vec![b(2)]);
        let snf = smith_normal_form(&coboundary_matrix::<BigInt>(&x, 1, None), Track::NONE);
        assert_eq!(snf.diag.iter().filter(|d| **d == b(2)).count(), 1);
    }

    #[test]
    fn klein_groups() {
        let (k, s) = build_klein(2).unwrap();
        assert_eq!(mod2_ranks(&k), vec![1, 2, 1]);
        let g = int_groups(&k, None);
        assert_eq!(g[1].to_string(), "Z");
        assert_eq!(g[2].to_string(), "Z/2");
        // twisted by the orientation character the top group is ℤ
        let t = int_groups(&k, Some(&s));
        assert_eq!(t[2].to_string(), "Z");
    }

    #[test]
    fn product_mod2() {
        let (rp2, _) = build_rp(2).unwrap();
        let x = product(&circle(), &rp2);
        assert_eq!(mod2_ranks(&x), vec![1, 2, 2, 1]);
    }

    #[test]
    fn twisted_coboundary_squares_to_zero() {
        let (x, w) = build_klein(3).unwrap();
        for p in 0..2 {
            let d0 = coboundary_matrix::<BigInt>(&x, p, Some(&w));
            let d1 = coboundary_matrix::<BigInt>(&x, p + 1, Some(&w));
            assert!(d1.mul(&d0).is_zero());
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let (x, w) = build_rp(3).unwrap();
        for tw in [None, Some(&w)] {
            for p in 0..=3 {
                let h = IntCohomology::compute(&x, p, tw);
                for i in 0..h.group.ngens() {
                    let mut e = vec![b(0); h.group.ngens()];
                    e[i] = b(1);
                    assert_eq!(h.coords(&h.class_rep(&e)).unwrap(), e);
                }
            }
        }
    }

    #[test]
    fn non_cocycle_rejected() {
        let x = build_sphere(2);
        let h = IntCohomology::compute(&x, 1, None);
        let mut f = vec![b(0); x.count(1)];
        f[0] = b(1);
        assert!(matches!(h.coords(&f), Err(Error::NotInKernel(_))));
    }

    #[test]
    fn qmodz_rp2() {
        let (x, _) = build_rp(2).unwrap();
        let groups: Vec<QmodZGroup> =
            (0..=2).map(|p| QmodZCohomology::compute(&x, p, None).group).collect();
        assert_eq!(groups[0].divisible_rank, 1);
        assert_eq!(groups[1].finite.torsion, vec![b(2)]);
        assert_eq!(groups[2].to_string(), "0");
        let h1 = QmodZCohomology::compute(&x, 1, None);
        let rep = h1.rep(0).clone();
        assert_eq!(h1.coords(&x, None, &rep).unwrap().finite, vec![b(1)]);
        assert!(h1.coords(&x, None, &rep.scale(&b(2))).unwrap().is_zero());
    }

    #[test]
    fn qmodz_divisible_coordinates() {
        let c = circle();
        let h = QmodZCohomology::compute(&c, 1, None);
        assert_eq!(h.group.divisible_rank, 1);
        let third = QmodZCochain::new(b(3), vec![b(1), b(0), b(0)]).unwrap();
        let co = h.coords(&c, None, &third).unwrap();
        assert_eq!(co.divisible.len(), 1);
        assert_eq!(co.divisible[0].denom(), &b(3));
    }
}
