//! Cocycle-level operations: cup and cup-i products, Steenrod squares,
//! Bockstein homomorphisms and coefficient changes, on a [`Space`] that
//! caches its cohomology.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::{
    apply_coboundary, AbelianGroup, Coeff, IntCohomology, Mod2Cohomology, QmodZCochain, QmodZCohomology,
    QmodZCoords, QmodZGroup, F2,
};
use crate::complex::{build_rp, DeltaComplex, SignCocycle, SimplicialMap};
use crate::error::{Error, Result};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

type TwistKey = Vec<bool>;

fn twist_key(t: Option<&SignCocycle>) -> TwistKey {
    match t {
        Some(w) if !w.is_zero() => w.values().to_vec(),
        _ => Vec::new(),
    }
}

fn normalize_twist(t: Option<&SignCocycle>) -> Option<SignCocycle> {
    t.filter(|w| !w.is_zero()).cloned()
}

/// A complex together with lazily computed cohomology groups.
#[derive(Debug)]
pub struct Space {
    complex: DeltaComplex,
    id: u64,
    int: Mutex<HashMap<(TwistKey, usize), Arc<IntCohomology>>>,
    mod2: Mutex<HashMap<usize, Arc<Mod2Cohomology>>>,
    qz: Mutex<HashMap<(TwistKey, usize), Arc<QmodZCohomology>>>,
}

impl Space {
    pub fn new(complex: DeltaComplex) -> Self {
        Space {
            complex,
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            int: Mutex::default(),
            mod2: Mutex::default(),
            qz: Mutex::default(),
        }
    }

    pub fn complex(&self) -> &DeltaComplex {
        &self.complex
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn dim(&self) -> usize {
        self.complex.dim()
    }

    fn check_twist(&self, t: Option<&SignCocycle>) -> Result<()> {
        match t {
            Some(w) => w.check(&self.complex),
            None => Ok(()),
        }
    }

    pub fn int_cohomology(&self, p: usize, twist: Option<&SignCocycle>) -> Arc<IntCohomology> {
        let key = (twist_key(twist), p);
        if let Some(h) = self.int.lock().unwrap().get(&key) {
            return h.clone();
        }
        let h = Arc::new(IntCohomology::compute(&self.complex, p, normalize_twist(twist).as_ref()));
        self.int.lock().unwrap().entry(key).or_insert(h).clone()
    }

    pub fn mod2_cohomology(&self, p: usize) -> Arc<Mod2Cohomology> {
        if let Some(h) = self.mod2.lock().unwrap().get(&p) {
            return h.clone();
        }
        let h = Arc::new(Mod2Cohomology::compute(&self.complex, p, None));
        self.mod2.lock().unwrap().entry(p).or_insert(h).clone()
    }

    pub fn qmodz_cohomology(&self, p: usize, twist: Option<&SignCocycle>) -> Arc<QmodZCohomology> {
        let key = (twist_key(twist), p);
        if let Some(h) = self.qz.lock().unwrap().get(&key) {
            return h.clone();
        }
        let here = (*self.int_cohomology(p, twist)).clone();
        let next = (*self.int_cohomology(p + 1, twist)).clone();
        let h = Arc::new(QmodZCohomology::from_integral(here, next));
        self.qz.lock().unwrap().entry(key).or_insert(h).clone()
    }

    /// The group `Hᵖ(X; ℤ_σ)` or `Hᵖ(X; ℤ/2)`.
    pub fn group(&self, coeff: Coeff, twist: Option<&SignCocycle>, p: usize) -> Result<AbelianGroup> {
        match coeff {
            Coeff::Z => Ok(self.int_cohomology(p, twist).group.clone()),
            Coeff::Z2 => Ok(self.mod2_cohomology(p).group.clone()),
            Coeff::QmodZ => Err(Error::Unsupported("use qmodz_group for ℚ/ℤ coefficients".into())),
        }
    }

    pub fn qmodz_group(&self, p: usize, twist: Option<&SignCocycle>) -> QmodZGroup {
        self.qmodz_cohomology(p, twist).group.clone()
    }

    /// Class of a mod-2 cocycle.
    pub fn mod2_class(&self, p: usize, bits: &[bool]) -> Result<CohomologyClass> {
        let h = self.mod2_cohomology(p);
        let f: Vec<F2> = bits.iter().map(|&b| F2(b)).collect();
        let coords = h.coords(&f)?;
        self.mod2_from_coords(p, &coords)
    }

    fn mod2_from_coords(&self, p: usize, coords: &[BigInt]) -> Result<CohomologyClass> {
        let h = self.mod2_cohomology(p);
        if coords.len() != h.group.ngens() {
            return Err(Error::DegreeMismatch(format!(
                "H^{p}(ℤ/2) has {} generators, got {} coordinates",
                h.group.ngens(),
                coords.len()
            )));
        }
        let coords = h.group.normalize(coords);
        let rep = h.class_rep(&coords).into_iter().map(|v| v.0).collect();
        Ok(CohomologyClass {
            coeff: Coeff::Z2,
            twist: None,
            degree: p,
            rep: Cochain::Mod2(rep),
            coords: Coords::Plain(coords),
            space: self.id,
        })
    }

    /// Class of a (twisted) integral cocycle.
    pub fn int_class(&self, p: usize, twist: Option<&SignCocycle>, values: &[BigInt]) -> Result<CohomologyClass> {
        self.check_twist(twist)?;
        let coords = self.int_cohomology(p, twist).coords(values)?;
        self.int_from_coords(p, twist, &coords)
    }

    fn int_from_coords(&self, p: usize, twist: Option<&SignCocycle>, coords: &[BigInt]) -> Result<CohomologyClass> {
        let h = self.int_cohomology(p, twist);
        if coords.len() != h.group.ngens() {
            return Err(Error::DegreeMismatch(format!(
                "H^{p}(ℤ) has {} generators, got {} coordinates",
                h.group.ngens(),
                coords.len()
            )));
        }
        let coords = h.group.normalize(coords);
        Ok(CohomologyClass {
            coeff: Coeff::Z,
            twist: normalize_twist(twist),
            degree: p,
            rep: Cochain::Int(h.class_rep(&coords)),
            coords: Coords::Plain(coords),
            space: self.id,
        })
    }

    /// Class of a (twisted) ℚ/ℤ cocycle.
    pub fn qmodz_class(&self, p: usize, twist: Option<&SignCocycle>, c: &QmodZCochain) -> Result<CohomologyClass> {
        self.check_twist(twist)?;
        let tw = normalize_twist(twist);
        let h = self.qmodz_cohomology(p, twist);
        let coords = h.coords(&self.complex, tw.as_ref(), c)?;
        self.qmodz_from_coords(p, twist, coords)
    }

    fn qmodz_from_coords(&self, p: usize, twist: Option<&SignCocycle>, coords: QmodZCoords) -> Result<CohomologyClass> {
        let h = self.qmodz_cohomology(p, twist);
        let n = self.complex.count(p);
        let mut rep = QmodZCochain::zero(n);
        for (i, f) in coords.finite.iter().enumerate() {
            if !f.is_zero() {
                rep = rep.add(&h.rep(i).scale(f));
            }
        }
        for (j, r) in coords.divisible.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            let z = h.integral().rep(j);
            let nums: Vec<BigInt> = z.iter().map(|v| v * r.numer()).collect();
            rep = rep.add(&QmodZCochain::new(r.denom().clone(), nums)?);
        }
        Ok(CohomologyClass {
            coeff: Coeff::QmodZ,
            twist: normalize_twist(twist),
            degree: p,
            rep: Cochain::QmodZ(rep),
            coords: Coords::QmodZ(coords),
            space: self.id,
        })
    }

    /// Class with the given coordinates in the integral or mod-2 basis.
    pub fn class(&self, coeff: Coeff, twist: Option<&SignCocycle>, p: usize, coords: &[BigInt]) -> Result<CohomologyClass> {
        self.check_twist(twist)?;
        match coeff {
            Coeff::Z => self.int_from_coords(p, twist, coords),
            Coeff::Z2 => self.mod2_from_coords(p, coords),
            Coeff::QmodZ => {
                let h = self.qmodz_cohomology(p, twist);
                let nfin = h.group.finite.ngens();
                if coords.len() != nfin {
                    return Err(Error::DegreeMismatch(format!(
                        "finite part of H^{p}(ℚ/ℤ) has {nfin} generators, got {}",
                        coords.len()
                    )));
                }
                let finite = h.group.finite.normalize(coords);
                let divisible = vec![BigRational::zero(); h.group.divisible_rank];
                self.qmodz_from_coords(p, twist, QmodZCoords { divisible, finite })
            }
        }
    }

    pub fn zero(&self, coeff: Coeff, twist: Option<&SignCocycle>, p: usize) -> Result<CohomologyClass> {
        let n = match coeff {
            Coeff::Z => self.int_cohomology(p, twist).group.ngens(),
            Coeff::Z2 => self.mod2_cohomology(p).group.ngens(),
            Coeff::QmodZ => self.qmodz_cohomology(p, twist).group.finite.ngens(),
        };
        self.class(coeff, twist, p, &vec![BigInt::zero(); n])
    }

    /// Basis classes of `Hᵖ` (for ℚ/ℤ: generators of the finite part).
    pub fn generators(&self, coeff: Coeff, twist: Option<&SignCocycle>, p: usize) -> Result<Vec<CohomologyClass>> {
        let n = self.zero(coeff, twist, p)?.plain_coords().map_or(0, |c| c.len());
        let n = if coeff == Coeff::QmodZ { self.qmodz_cohomology(p, twist).group.finite.ngens() } else { n };
        (0..n)
            .map(|i| {
                let mut c = vec![BigInt::zero(); n];
                c[i] = BigInt::one();
                self.class(coeff, twist, p, &c)
            })
            .collect()
    }

    /// Every class of the finite group `Hᵖ(X; ℤ/2)`.
    pub fn mod2_classes(&self, p: usize) -> Result<Vec<CohomologyClass>> {
        let g = self.mod2_cohomology(p).group.clone();
        if g.ngens() > 20 {
            return Err(Error::Unsupported(format!("H^{p}(ℤ/2) has 2^{} elements", g.ngens())));
        }
        g.elements()
            .expect("finite")
            .iter()
            .map(|c| self.mod2_from_coords(p, c))
            .collect()
    }

    fn own(&self, a: &CohomologyClass) -> Result<()> {
        if a.space != self.id {
            return Err(Error::ComplexMismatch);
        }
        Ok(())
    }

    /// Sum of two classes with the same coefficients, twist and degree.
    pub fn add(&self, a: &CohomologyClass, b: &CohomologyClass) -> Result<CohomologyClass> {
        self.own(a)?;
        self.own(b)?;
        if a.coeff != b.coeff || a.degree != b.degree || a.twist != b.twist {
            return Err(Error::DegreeMismatch("classes live in different groups".into()));
        }
        match (&a.rep, &b.rep) {
            (Cochain::Mod2(x), Cochain::Mod2(y)) => {
                self.mod2_class(a.degree, &x.iter().zip(y).map(|(u, v)| u ^ v).collect::<Vec<_>>())
            }
            (Cochain::Int(x), Cochain::Int(y)) => {
                self.int_class(a.degree, a.twist.as_ref(), &x.iter().zip(y).map(|(u, v)| u + v).collect::<Vec<_>>())
            }
            (Cochain::QmodZ(x), Cochain::QmodZ(y)) => self.qmodz_class(a.degree, a.twist.as_ref(), &x.add(y)),
            _ => unreachable!("coefficient tag matches representative"),
        }
    }
}

/// Representative cocycle of a class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cochain {
    Int(Vec<BigInt>),
    Mod2(Vec<bool>),
    QmodZ(QmodZCochain),
}

/// Coordinates of a class in the basis of its group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Coords {
    Plain(#[serde(serialize_with = "crate::algebra::num_serde::ints")] Vec<BigInt>),
    QmodZ(QmodZCoords),
}

/// A cohomology class on a [`Space`], carried with a normalized
/// representative so that equal classes have equal representatives.
#[derive(Clone, Debug)]
pub struct CohomologyClass {
    pub coeff: Coeff,
    pub twist: Option<SignCocycle>,
    pub degree: usize,
    pub rep: Cochain,
    pub coords: Coords,
    space: u64,
}

impl PartialEq for CohomologyClass {
    fn eq(&self, o: &Self) -> bool {
        self.space == o.space
            && self.coeff == o.coeff
            && self.degree == o.degree
            && self.twist == o.twist
            && self.coords == o.coords
    }
}

impl CohomologyClass {
    pub fn is_zero(&self) -> bool {
        match &self.coords {
            Coords::Plain(c) => c.iter().all(|v| v.is_zero()),
            Coords::QmodZ(c) => c.is_zero(),
        }
    }

    pub fn plain_coords(&self) -> Option<&[BigInt]> {
        match &self.coords {
            Coords::Plain(c) => Some(c),
            Coords::QmodZ(_) => None,
        }
    }

    pub fn mod2_bits(&self) -> Option<&[bool]> {
        match &self.rep {
            Cochain::Mod2(b) => Some(b),
            _ => None,
        }
    }

    pub fn int_values(&self) -> Option<&[BigInt]> {
        match &self.rep {
            Cochain::Int(v) => Some(v),
            _ => None,
        }
    }

    pub fn space_id(&self) -> u64 {
        self.space
    }

    pub fn to_json(&self) -> ClassJson {
        let rep = match &self.rep {
            Cochain::Int(v) => v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.to_string()))
                .collect(),
            Cochain::Mod2(b) => b.iter().enumerate().filter(|(_, &x)| x).map(|(i, _)| (i, "1".to_string())).collect(),
            Cochain::QmodZ(c) => c
                .values()
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.to_string()))
                .collect(),
        };
        ClassJson {
            coeff: self.coeff,
            degree: self.degree,
            twist: self
                .twist
                .as_ref()
                .map(|w| w.values().iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()),
            rep,
            coords: self.coords.clone(),
        }
    }
}

/// Serialized form of a class: sparse representative, coordinates and the
/// edges carrying the twist.
#[derive(Clone, Debug, Serialize)]
pub struct ClassJson {
    pub coeff: Coeff,
    pub degree: usize,
    pub twist: Option<Vec<usize>>,
    pub rep: Vec<(usize, String)>,
    pub coords: Coords,
}

/// The twisting data `(σ₁, σ₂)` of twisted KO-theory at cochain level.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwistData {
    pub sigma1: Option<SignCocycle>,
    pub sigma2: Option<Vec<bool>>,
}

impl TwistData {
    pub fn none() -> Self {
        TwistData::default()
    }

    pub fn new(x: &DeltaComplex, sigma1: Option<SignCocycle>, sigma2: Option<Vec<bool>>) -> Result<Self> {
        let t = TwistData { sigma1, sigma2 };
        t.validate(x)?;
        Ok(t)
    }

    pub fn validate(&self, x: &DeltaComplex) -> Result<()> {
        if let Some(w) = &self.sigma1 {
            w.check(x)?;
        }
        if let Some(s) = &self.sigma2 {
            if s.len() != x.count(2) {
                return Err(Error::InvalidCocycle(format!(
                    "σ₂ has {} values, expected {}",
                    s.len(),
                    x.count(2)
                )));
            }
            if coboundary_mod2(x, 2, s).iter().any(|&b| b) {
                return Err(Error::InvalidCocycle("σ₂ is not closed".into()));
            }
        }
        Ok(())
    }

    pub fn sigma1(&self) -> Option<&SignCocycle> {
        self.sigma1.as_ref().filter(|w| !w.is_zero())
    }

    pub fn sigma2(&self) -> Option<&[bool]> {
        self.sigma2.as_deref().filter(|s| s.iter().any(|&b| b))
    }

    pub fn is_trivial(&self) -> bool {
        self.sigma1().is_none() && self.sigma2().is_none()
    }
}

/// Mod-2 coboundary of a p-cochain.
pub fn coboundary_mod2(x: &DeltaComplex, p: usize, a: &[bool]) -> Vec<bool> {
    let f: Vec<F2> = a.iter().map(|&b| F2(b)).collect();
    apply_coboundary(x, p, None, &f).into_iter().map(|v| v.0).collect()
}

/// Vertex-position masks `(front, back)` for each summand of `∪ᵢ` on an
/// `n`-simplex with factors of degrees p and q.
fn cup_i_patterns(p: usize, q: usize, i: usize) -> Vec<(u32, u32)> {
    let n = p + q - i;
    let mut out = Vec::new();
    let mut js: Vec<usize> = (0..=i).collect();
    if i > n {
        return out;
    }
    loop {
        let mut ma = 0u32;
        let mut mb = 0u32;
        let mut bounds = Vec::with_capacity(i + 3);
        bounds.push(0);
        bounds.extend(js.iter().copied());
        bounds.push(n);
        for k in 0..bounds.len() - 1 {
            let m = ((1u32 << (bounds[k + 1] + 1)) - 1) & !((1u32 << bounds[k]) - 1);
            if k % 2 == 0 {
                ma |= m;
            } else {
                mb |= m;
            }
        }
        if ma.count_ones() as usize == p + 1 && mb.count_ones() as usize == q + 1 {
            out.push((ma, mb));
        }
        // next strictly increasing sequence in 0..=n
        let mut k = i as isize;
        while k >= 0 && js[k as usize] == n - (i - k as usize) {
            k -= 1;
        }
        if k < 0 {
            break;
        }
        let k = k as usize;
        js[k] += 1;
        for t in k + 1..=i {
            js[t] = js[t - 1] + 1;
        }
    }
    out
}

/// Steenrod's cup-i product of mod-2 cochains of degrees p and q, a
/// cochain of degree `p + q − i` (empty when that is negative).
pub fn cup_i(x: &DeltaComplex, a: &[bool], p: usize, b: &[bool], q: usize, i: usize) -> Vec<bool> {
    if i > p + q {
        return Vec::new();
    }
    let n = p + q - i;
    let pats = cup_i_patterns(p, q, i);
    (0..x.count(n))
        .map(|s| {
            pats.iter().fold(false, |acc, &(ma, mb)| {
                acc ^ (a[x.restrict_mask(n, s, ma)] && b[x.restrict_mask(n, s, mb)])
            })
        })
        .collect()
}

/// Front-face/back-face product of mod-2 cochains.
pub fn cup_mod2(x: &DeltaComplex, a: &[bool], p: usize, b: &[bool], q: usize) -> Vec<bool> {
    cup_i(x, a, p, b, q, 0)
}

/// Product of twisted integral cochains; the back factor is transported to
/// the leading vertex along the edge `[v₀ v_p]` using its twist.
pub fn cup_int(
    x: &DeltaComplex,
    a: &[BigInt],
    p: usize,
    b: &[BigInt],
    q: usize,
    twist_b: Option<&SignCocycle>,
) -> Vec<BigInt> {
    let n = p + q;
    let front = (1u32 << (p + 1)) - 1;
    let back = ((1u32 << (n + 1)) - 1) & !((1u32 << p) - 1);
    (0..x.count(n))
        .map(|s| {
            let u = &a[x.restrict_mask(n, s, front)];
            if u.is_zero() {
                return BigInt::zero();
            }
            let v = u * &b[x.restrict_mask(n, s, back)];
            let flip = p >= 1 && twist_b.is_some_and(|w| w.value(x.edge(n, s, 0, p)));
            if flip {
                -v
            } else {
                v
            }
        })
        .collect()
}

/// Mod-2 Steenrod square at cochain level: `Sqᵏ(a) = a ∪_{p−k} a`.
pub fn sq_cochain(x: &DeltaComplex, k: usize, a: &[bool], p: usize) -> Vec<bool> {
    if k > p {
        return vec![false; x.count(p + k)];
    }
    cup_i(x, a, p, a, p, p - k)
}

fn sum_twists(a: Option<&SignCocycle>, b: Option<&SignCocycle>) -> Option<SignCocycle> {
    match (a, b) {
        (None, None) => None,
        (Some(w), None) | (None, Some(w)) => normalize_twist(Some(w)),
        (Some(u), Some(v)) => normalize_twist(Some(&u.add(v))),
    }
}

fn int_to_bits(v: &[BigInt]) -> Vec<bool> {
    v.iter().map(|x| x.is_odd()).collect()
}

/// Values of a ℚ/ℤ cochain in ½ℤ/ℤ as bits, if it takes only such values.
fn half_bits(c: &QmodZCochain) -> Option<Vec<bool>> {
    let two = BigInt::from(2);
    if c.is_zero() {
        return Some(vec![false; c.len()]);
    }
    (c.denominator == two).then(|| c.numerators.iter().map(|v| v.is_odd()).collect())
}

/// Cup product of classes. Supported pairings: ℤ/2 × ℤ/2, twisted ℤ × ℤ
/// (twists add), ℤ × ℤ/2 via reduction, ℤ × ℚ/ℤ, and ℤ/2 × ℚ/ℤ when the
/// ℚ/ℤ class comes from ½ℤ/ℤ (the product is then taken through j₂).
pub fn cup(sp: &Space, a: &CohomologyClass, b: &CohomologyClass) -> Result<CohomologyClass> {
    sp.own(a)?;
    sp.own(b)?;
    let x = sp.complex();
    let (p, q) = (a.degree, b.degree);
    if p + q > x.dim() {
        let (coeff, tw) = match (a.coeff, b.coeff) {
            (Coeff::Z, Coeff::Z) => (Coeff::Z, sum_twists(a.twist.as_ref(), b.twist.as_ref())),
            (Coeff::QmodZ, _) | (_, Coeff::QmodZ) => {
                (Coeff::QmodZ, sum_twists(a.twist.as_ref(), b.twist.as_ref()))
            }
            _ => (Coeff::Z2, None),
        };
        return sp.zero(coeff, tw.as_ref(), p + q);
    }
    match (&a.rep, &b.rep) {
        (Cochain::Mod2(u), Cochain::Mod2(v)) => sp.mod2_class(p + q, &cup_mod2(x, u, p, v, q)),
        (Cochain::Int(u), Cochain::Int(v)) => {
            let tw = sum_twists(a.twist.as_ref(), b.twist.as_ref());
            sp.int_class(p + q, tw.as_ref(), &cup_int(x, u, p, v, q, b.twist.as_ref()))
        }
        (Cochain::Int(u), Cochain::Mod2(v)) => sp.mod2_class(p + q, &cup_mod2(x, &int_to_bits(u), p, v, q)),
        (Cochain::Mod2(u), Cochain::Int(v)) => sp.mod2_class(p + q, &cup_mod2(x, u, p, &int_to_bits(v), q)),
        (Cochain::Int(u), Cochain::QmodZ(c)) => {
            let tw = sum_twists(a.twist.as_ref(), b.twist.as_ref());
            let nums = cup_int(x, u, p, &c.numerators, q, b.twist.as_ref());
            sp.qmodz_class(p + q, tw.as_ref(), &QmodZCochain::new(c.denominator.clone(), nums)?)
        }
        (Cochain::QmodZ(c), Cochain::Int(v)) => {
            let tw = sum_twists(a.twist.as_ref(), b.twist.as_ref());
            let nums = cup_int(x, &c.numerators, p, v, q, b.twist.as_ref());
            sp.qmodz_class(p + q, tw.as_ref(), &QmodZCochain::new(c.denominator.clone(), nums)?)
        }
        (Cochain::Mod2(u), Cochain::QmodZ(c)) | (Cochain::QmodZ(c), Cochain::Mod2(u)) => {
            let v = half_bits(c).ok_or_else(|| {
                Error::Unsupported("ℤ/2 × ℚ/ℤ product needs a ℚ/ℤ class with values in ½ℤ/ℤ".into())
            })?;
            let prod = if matches!(a.rep, Cochain::Mod2(_)) {
                cup_mod2(x, u, p, &v, q)
            } else {
                cup_mod2(x, &v, p, u, q)
            };
            let tw = normalize_twist(if a.coeff == Coeff::QmodZ { a.twist.as_ref() } else { b.twist.as_ref() });
            sp.qmodz_class(p + q, tw.as_ref(), &QmodZCochain::from_mod2(&prod))
        }
        (Cochain::QmodZ(_), Cochain::QmodZ(_)) => {
            Err(Error::Unsupported("ℚ/ℤ × ℚ/ℤ has no natural product".into()))
        }
    }
}

fn require_mod2<'a>(a: &'a CohomologyClass, what: &str) -> Result<&'a [bool]> {
    a.mod2_bits()
        .ok_or_else(|| Error::DegreeMismatch(format!("{what} needs a mod-2 class, got {:?}", a.coeff)))
}

/// The Steenrod square `Sqᵏ` on a mod-2 class.
pub fn sq(sp: &Space, k: usize, a: &CohomologyClass) -> Result<CohomologyClass> {
    sp.own(a)?;
    let bits = require_mod2(a, "Sq")?;
    let p = a.degree;
    if p + k > sp.dim() || k > p {
        return sp.zero(Coeff::Z2, None, p + k);
    }
    sp.mod2_class(p + k, &sq_cochain(sp.complex(), k, bits, p))
}

/// The Bockstein `Hᵖ(X; ℤ/2) → Hᵖ⁺¹(X; ℤ_σ)`: lift to 0/1 integers, take
/// the twisted coboundary and halve it.
pub fn bockstein(sp: &Space, a: &CohomologyClass, twist: Option<&SignCocycle>) -> Result<CohomologyClass> {
    sp.own(a)?;
    let bits = require_mod2(a, "β")?;
    let lift: Vec<BigInt> = bits.iter().map(|&b| BigInt::from(b as u8)).collect();
    bockstein_of_lift(sp, a.degree, &lift, twist)
}

/// Bockstein computed from an arbitrary integral lift of a mod-2 cocycle.
pub fn bockstein_of_lift(
    sp: &Space,
    p: usize,
    lift: &[BigInt],
    twist: Option<&SignCocycle>,
) -> Result<CohomologyClass> {
    sp.check_twist(twist)?;
    let tw = normalize_twist(twist);
    let d = apply_coboundary(sp.complex(), p, tw.as_ref(), lift);
    let two = BigInt::from(2);
    let mut half = Vec::with_capacity(d.len());
    for v in d {
        let (q, r) = v.div_rem(&two);
        if !r.is_zero() {
            return Err(Error::NotInKernel(format!("lift of a degree-{p} class is not a mod-2 cocycle")));
        }
        half.push(q);
    }
    sp.int_class(p + 1, tw.as_ref(), &half)
}

/// The Bockstein `Hᵖ(X; ℚ/ℤ_σ) → Hᵖ⁺¹(X; ℤ_σ)` of the sheaf sequence
/// `ℤ_σ → ℚ_σ → (ℚ/ℤ)_σ`.
pub fn bockstein_u1(sp: &Space, a: &CohomologyClass) -> Result<CohomologyClass> {
    sp.own(a)?;
    let Cochain::QmodZ(c) = &a.rep else {
        return Err(Error::DegreeMismatch(format!("β_U(1) needs a ℚ/ℤ class, got {:?}", a.coeff)));
    };
    let b = QmodZCohomology::bockstein_cochain(sp.complex(), a.degree, a.twist.as_ref(), c)?;
    sp.int_class(a.degree + 1, a.twist.as_ref(), &b)
}

/// Reduction mod 2; twisted integral classes reduce to untwisted classes.
pub fn reduce_mod2(sp: &Space, a: &CohomologyClass) -> Result<CohomologyClass> {
    sp.own(a)?;
    match &a.rep {
        Cochain::Int(v) => sp.mod2_class(a.degree, &int_to_bits(v)),
        Cochain::Mod2(_) => Ok(a.clone()),
        Cochain::QmodZ(_) => Err(Error::DegreeMismatch("cannot reduce a ℚ/ℤ class mod 2".into())),
    }
}

/// The inclusion `ℤ/2 → ℚ/ℤ_σ` (the value 1 goes to ½).
pub fn include_j2(sp: &Space, a: &CohomologyClass, twist: Option<&SignCocycle>) -> Result<CohomologyClass> {
    sp.own(a)?;
    let bits = require_mod2(a, "j₂")?;
    sp.qmodz_class(a.degree, twist, &QmodZCochain::from_mod2(bits))
}

/// Pulls a class on `target` back along a map `source → target`.
pub fn pullback(f: &SimplicialMap, source: &Space, target: &Space, a: &CohomologyClass) -> Result<CohomologyClass> {
    target.own(a)?;
    let p = a.degree;
    if f.source_count(0) != source.complex().count(0) {
        return Err(Error::ComplexMismatch);
    }
    let tw = a.twist.as_ref().map(|w| f.pullback_sign(w));
    match &a.rep {
        Cochain::Mod2(b) => source.mod2_class(p, &f.pullback(p, b, false)),
        Cochain::Int(v) => source.int_class(p, tw.as_ref(), &f.pullback(p, v, BigInt::zero())),
        Cochain::QmodZ(c) => {
            let nums = f.pullback(p, &c.numerators, BigInt::zero());
            source.qmodz_class(p, tw.as_ref(), &QmodZCochain::new(c.denominator.clone(), nums)?)
        }
    }
}

/// ℝPⁿ as a space, with the cocycle of its double cover and the generator
/// `x ∈ H¹(ℝPⁿ; ℤ/2)`.
pub fn rp_space(n: usize) -> Result<(Space, SignCocycle, CohomologyClass)> {
    let (x, w) = build_rp(n)?;
    let sp = Space::new(x);
    let gen = sp.mod2_class(1, w.values())?;
    Ok((sp, w, gen))
}

/// `a^k` for a mod-2 class (k ≥ 1).
pub fn power(sp: &Space, a: &CohomologyClass, k: usize) -> Result<CohomologyClass> {
    let mut acc = a.clone();
    for _ in 1..k {
        acc = cup(sp, &acc, a)?;
    }
    Ok(acc)
}

/// Number of elements in the divisible coordinates that are nonzero; a
/// sanity helper for ℚ/ℤ reports.
pub fn divisible_support(a: &CohomologyClass) -> usize {
    match &a.coords {
        Coords::QmodZ(c) => c.divisible.iter().filter(|r| r.is_positive()).count(),
        Coords::Plain(_) => 0,
    }
}
