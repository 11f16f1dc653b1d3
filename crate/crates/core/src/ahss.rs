//! The Atiyah–Hirzebruch spectral sequence for twisted KO-theory.
//!
//! Rows are indexed by `k = −q mod 8`; the nonzero rows are k = 0, 4 (ℤ,
//! twisted by σ₁) and k = 1, 2 (ℤ/2, untwisted). Entries are subquotients of
//! the E₂ groups, so every page keeps coordinates compatible with E₂.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{from_dense, AbelianGroup, Coeff, GroupHom, IntMatrix, SparseVec, Subquotient};
use crate::complex::SignCocycle;
use crate::error::{Error, Result};
use crate::ops::{bockstein, cup, reduce_mod2, sq, CohomologyClass, Space, TwistData};

/// Coefficient rows of KO: `π_{−q}(KO)` for `k = −q mod 8`.
pub struct KOCoefficients;

impl KOCoefficients {
    pub const ROWS: [usize; 4] = [0, 1, 2, 4];

    pub fn row_of(q: i64) -> usize {
        (-q).rem_euclid(8) as usize
    }

    /// The coefficient group of row k; `None` for the zero rows.
    pub fn coeff(k: usize) -> Option<Coeff> {
        match k % 8 {
            0 | 4 => Some(Coeff::Z),
            1 | 2 => Some(Coeff::Z2),
            _ => None,
        }
    }

    pub fn group(k: usize) -> AbelianGroup {
        match Self::coeff(k) {
            Some(Coeff::Z) => AbelianGroup::free(1),
            Some(_) => AbelianGroup::cyclic(2),
            None => AbelianGroup::zero(),
        }
    }

    /// σ₁ acts by −1 on the ℤ rows and trivially on the ℤ/2 rows.
    pub fn twisted_by_sigma1(k: usize) -> bool {
        matches!(k % 8, 0 | 4)
    }
}

/// How a stored differential was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiffKind {
    /// Evaluated from its cohomology-operation formula.
    Formula,
    /// Source or target vanishes on this page.
    DegreeForced,
    /// Source lies in the column split off by the basepoint.
    BasepointForced,
    /// Target is torsion-free; differentials vanish rationally, so their
    /// images are torsion.
    TorsionForced,
    /// No formula is known and both ends are nonzero; treated as zero and
    /// both ends flagged.
    Unknown,
}

#[derive(Clone, Debug)]
pub struct Differential {
    pub r: usize,
    pub source: (usize, usize),
    pub target: (usize, usize),
    pub kind: DiffKind,
    /// Ambient matrix in E₂ coordinates (formula differentials only).
    pub matrix: Option<IntMatrix>,
    /// Induced map of page groups (formula differentials only).
    pub hom: Option<GroupHom>,
}

impl Differential {
    pub fn is_zero(&self) -> Option<bool> {
        match self.kind {
            DiffKind::Formula => self.hom.as_ref().map(|h| h.is_zero()),
            DiffKind::DegreeForced | DiffKind::BasepointForced | DiffKind::TorsionForced => Some(true),
            DiffKind::Unknown => None,
        }
    }
}

/// One page `E_r`, keyed by `(p, k)`.
#[derive(Clone, Debug)]
pub struct Page {
    pub r: usize,
    entries: BTreeMap<(usize, usize), Subquotient>,
}

impl Page {
    pub fn entry(&self, p: usize, k: usize) -> Option<&Subquotient> {
        self.entries.get(&(p, k % 8))
    }

    pub fn group(&self, p: usize, k: usize) -> AbelianGroup {
        self.entry(p, k).map_or_else(AbelianGroup::zero, |s| s.group().structure())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Subquotient)> {
        self.entries.iter()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryStatus {
    Resolved,
    Undetermined,
}

/// A run of the spectral sequence.
pub struct AhssState<'a> {
    space: &'a Space,
    twist: TwistData,
    basepoint_split: bool,
    pages: Vec<Page>,
    differentials: Vec<Vec<Differential>>,
    undetermined: BTreeSet<(usize, usize)>,
}

fn unit(n: usize, j: usize) -> Vec<BigInt> {
    let mut e = vec![BigInt::zero(); n];
    e[j] = BigInt::one();
    e
}

fn relations_of(g: &AbelianGroup) -> Vec<BigInt> {
    let mut rel = vec![BigInt::zero(); g.free_rank];
    rel.extend(g.torsion.iter().cloned());
    rel
}

impl<'a> AhssState<'a> {
    pub fn space(&self) -> &Space {
        self.space
    }

    pub fn twist(&self) -> &TwistData {
        &self.twist
    }

    pub fn sigma1(&self) -> Option<&SignCocycle> {
        self.twist.sigma1()
    }

    /// Whether column 0 splits off (the twist is cohomologically trivial).
    pub fn basepoint_split(&self) -> bool {
        self.basepoint_split
    }

    pub fn pages(&self) -> &[Page] {
        &self.pages
    }

    pub fn page(&self, r: usize) -> Option<&Page> {
        self.pages.get(r.checked_sub(2)?)
    }

    pub fn e_infinity(&self) -> &Page {
        self.pages.last().expect("at least E₂")
    }

    pub fn differentials(&self, r: usize) -> &[Differential] {
        r.checked_sub(2).and_then(|i| self.differentials.get(i)).map_or(&[], |v| v.as_slice())
    }

    pub fn status(&self, p: usize, k: usize) -> EntryStatus {
        if self.undetermined.contains(&(p, k % 8)) {
            EntryStatus::Undetermined
        } else {
            EntryStatus::Resolved
        }
    }

    fn e2_class(&self, p: usize, k: usize, coords: &[BigInt]) -> Result<CohomologyClass> {
        let coeff = KOCoefficients::coeff(k).expect("nonzero row");
        let tw = if KOCoefficients::twisted_by_sigma1(k) { self.sigma1() } else { None };
        self.space.class(coeff, tw, p, coords)
    }

    fn class_coords(c: &CohomologyClass) -> Vec<BigInt> {
        c.plain_coords().expect("integral or mod-2 class").to_vec()
    }

    /// `Sq² a + σ₁ ∪ Sq¹ a + σ₂ ∪ a` for a mod-2 class.
    pub fn d2_operator(&self, a: &CohomologyClass) -> Result<CohomologyClass> {
        twisted_sq2(self.space, &self.twist, a)
    }

    /// d₂ on a ℤ row: `Sq²r + σ₁ ∪ Sq¹r + σ₂ ∪ r`.
    pub fn d2_z_row(&self, a: &CohomologyClass) -> Result<CohomologyClass> {
        if a.coeff != Coeff::Z {
            return Err(Error::DegreeMismatch("d₂ on a ℤ row needs an integral class".into()));
        }
        self.d2_operator(&reduce_mod2(self.space, a)?)
    }

    /// d₂ on the ℤ/2 row k = 1: `Sq² + σ₁ ∪ Sq¹ + σ₂ ∪`.
    pub fn d2_z2_row(&self, a: &CohomologyClass) -> Result<CohomologyClass> {
        if a.coeff != Coeff::Z2 {
            return Err(Error::DegreeMismatch("d₂ on a ℤ/2 row needs a mod-2 class".into()));
        }
        self.d2_operator(a)
    }

    /// The cochain-level value of d₃ on row k = 2: `β_{σ₁}(Sq² a + σ₂ ∪ a)`.
    pub fn d3_formula(&self, a: &CohomologyClass) -> Result<CohomologyClass> {
        if a.coeff != Coeff::Z2 {
            return Err(Error::DegreeMismatch("d₃ needs a mod-2 class".into()));
        }
        let sp = self.space;
        let mut v = sq(sp, 2, a)?;
        if let Some(s2) = self.twist.sigma2() {
            v = sp.add(&v, &cup(sp, &sp.mod2_class(2, s2)?, a)?)?;
        }
        if a.degree + 3 > sp.dim() {
            return sp.zero(Coeff::Z, self.sigma1(), a.degree + 3);
        }
        bockstein(sp, &v, self.sigma1())
    }

    /// d₃ on a class of row k = 2 that survives to E₃, with its value as
    /// coordinates in the E₃ group at `(p + 3, k = 4)`.
    pub fn d3_z2_to_z(&self, a: &CohomologyClass) -> Result<(CohomologyClass, Vec<BigInt>)> {
        let p = a.degree;
        let e3 = self.page(3).ok_or_else(|| Error::Inconsistent("E₃ has not been computed".into()))?;
        let x = from_dense(&Self::class_coords(a));
        if let Some(src) = e3.entry(p, 2) {
            if !src.contains(&x) {
                return Err(Error::NotInKernel(format!("class in H^{p}(ℤ/2) does not survive to E₃")));
            }
        }
        let v = self.d3_formula(a)?;
        let coords = match e3.entry(p + 3, 4) {
            Some(t) => t.coords(&from_dense(&Self::class_coords(&v)))?,
            None => Vec::new(),
        };
        Ok((v, coords))
    }

    /// Ambient matrix of a formula differential from `(p, k)`.
    fn formula_matrix(&self, r: usize, p: usize, k: usize) -> Result<Option<(IntMatrix, (usize, usize))>> {
        let tk = (k + r - 1) % 8;
        let tp = p + r;
        let formula = matches!((r, k), (2, 0) | (2, 1) | (3, 2));
        if !formula || tp > self.space.dim() {
            return Ok(None);
        }
        let src = &self.pages[0].entries[&(p, k)];
        let tgt = &self.pages[0].entries[&(tp, tk)];
        let n = src.ambient_dim();
        let cols = (0..n)
            .map(|j| -> Result<SparseVec<BigInt>> {
                let a = self.e2_class(p, k, &unit(n, j))?;
                let v = match (r, k) {
                    (2, 0) => self.d2_z_row(&a)?,
                    (2, 1) => self.d2_z2_row(&a)?,
                    _ => self.d3_formula(&a)?,
                };
                Ok(from_dense(&Self::class_coords(&v)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Some((IntMatrix::from_columns(tgt.ambient_dim(), &cols), (tp, tk))))
    }

    fn turn(&mut self, r: usize) -> Result<()> {
        let dim = self.space.dim();
        let cur = self.pages.last().expect("page").clone();
        let sources: Vec<(usize, usize)> = cur
            .entries
            .keys()
            .copied()
            .filter(|&(p, k)| {
                p + r <= dim && KOCoefficients::coeff((k + r - 1) % 8).is_some()
            })
            .collect();
        let computed: Vec<Result<Differential>> = sources
            .par_iter()
            .map(|&(p, k)| {
                let target = (p + r, (k + r - 1) % 8);
                let src = &cur.entries[&(p, k)];
                let tgt = &cur.entries[&target];
                if let Some((m, _)) = self.formula_matrix(r, p, k)? {
                    let hom = src.induced(&m, tgt)?;
                    return Ok(Differential {
                        r,
                        source: (p, k),
                        target,
                        kind: DiffKind::Formula,
                        matrix: Some(m),
                        hom: Some(hom),
                    });
                }
                let kind = if src.group().is_trivial() || tgt.group().is_trivial() {
                    DiffKind::DegreeForced
                } else if p == 0 && self.basepoint_split {
                    DiffKind::BasepointForced
                } else if tgt.group().torsion.is_empty() {
                    DiffKind::TorsionForced
                } else {
                    DiffKind::Unknown
                };
                Ok(Differential { r, source: (p, k), target, kind, matrix: None, hom: None })
            })
            .collect();
        let diffs = computed.into_iter().collect::<Result<Vec<_>>>()?;
        let mut new_z: BTreeMap<(usize, usize), Vec<SparseVec<BigInt>>> = BTreeMap::new();
        let mut new_b: BTreeMap<(usize, usize), Vec<SparseVec<BigInt>>> = BTreeMap::new();
        for d in &diffs {
            match d.kind {
                DiffKind::Formula => {
                    let m = d.matrix.as_ref().unwrap();
                    let src = &cur.entries[&d.source];
                    let tgt = &cur.entries[&d.target];
                    new_z.insert(d.source, src.kernel_gens(m, tgt)?);
                    new_b.entry(d.target).or_default().extend(src.image_gens(m));
                }
                DiffKind::Unknown => {
                    self.undetermined.insert(d.source);
                    self.undetermined.insert(d.target);
                }
                _ => {}
            }
        }
        let keys: Vec<(usize, usize)> = cur.entries.keys().copied().collect();
        let next: Vec<((usize, usize), Subquotient)> = keys
            .par_iter()
            .map(|key| {
                let e = &cur.entries[key];
                let z = new_z.get(key);
                let b = new_b.get(key);
                let sq = if z.is_none() && b.is_none() {
                    e.clone()
                } else {
                    let zg = z.cloned().unwrap_or_else(|| e.z_basis().to_vec());
                    let mut bg = e.boundary_basis();
                    if let Some(b) = b {
                        bg.extend(b.iter().cloned());
                    }
                    Subquotient::new(e.relations().to_vec(), zg, bg).map_err(|_| {
                        Error::Inconsistent(format!(
                            "d_{r} ∘ d_{r} ≠ 0 at (p, q) = ({}, -{})",
                            key.0, key.1
                        ))
                    })?
                };
                Ok((*key, sq))
            })
            .collect::<Result<Vec<_>>>()?;
        self.differentials.push(diffs);
        self.pages.push(Page { r: r + 1, entries: next.into_iter().collect() });
        Ok(())
    }

    /// Checks that consecutive formula differentials compose to zero on
    /// every stored page.
    pub fn check_square_zero(&self) -> Result<()> {
        for (idx, diffs) in self.differentials.iter().enumerate() {
            let page = &self.pages[idx];
            for d1 in diffs.iter().filter(|d| d.kind == DiffKind::Formula) {
                for d2 in diffs.iter().filter(|d| d.kind == DiffKind::Formula && d.source == d1.target) {
                    let src = &page.entries[&d1.source];
                    let tgt = &page.entries[&d2.target];
                    let m1 = d1.matrix.as_ref().unwrap();
                    let m2 = d2.matrix.as_ref().unwrap();
                    for z in src.z_basis() {
                        let y = m2.mul_sparse(&m1.mul_sparse(z));
                        if !tgt.contains(&y) || !tgt.is_boundary(&y)? {
                            return Err(Error::Inconsistent(format!(
                                "d_{} ∘ d_{} ≠ 0 from (p, q) = ({}, -{})",
                                d1.r, d1.r, d1.source.0, d1.source.1
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Surviving entries on the line `p + q = i`, ordered by p.
    fn line(&self, i: i64, reduced: bool) -> Vec<(usize, usize)> {
        let dim = self.space.dim();
        (0..=dim)
            .filter(|&p| !(reduced && self.basepoint_split && p == 0))
            .map(|p| (p, (p as i64 - i).rem_euclid(8) as usize))
            .filter(|&(_, k)| KOCoefficients::coeff(k).is_some())
            .collect()
    }

    /// `KO^i_σ(X)` (or its reduced version) from the E∞ page.
    pub fn assemble_ko(&self, i: i64, reduced: bool) -> KOGroupReport {
        let einf = self.e_infinity();
        let mut quotients = Vec::new();
        let mut undetermined = false;
        for (p, k) in self.line(i, reduced) {
            let g = einf.group(p, k);
            if self.status(p, k) == EntryStatus::Undetermined {
                undetermined = true;
            }
            if !g.is_trivial() {
                quotients.push(FiltrationQuotient { p, q: i - p as i64, group: g });
            }
        }
        KOGroupReport::from_quotients(i, quotients, undetermined, reduced && self.basepoint_split)
    }

    /// Serializable summary of all pages and the KO groups in degrees 0..8.
    pub fn report(&self, reduced: bool) -> AhssReport {
        let pages = self
            .pages
            .iter()
            .map(|pg| {
                let entries = pg
                    .entries
                    .iter()
                    .filter(|(_, s)| !s.group().is_trivial())
                    .map(|(&(p, k), s)| (format!("{},{}", p, -(k as i64)), s.group().to_string()))
                    .collect();
                (pg.r.to_string(), entries)
            })
            .collect();
        let differentials = self
            .differentials
            .iter()
            .flatten()
            .filter(|d| d.kind != DiffKind::DegreeForced)
            .map(|d| DifferentialSummary {
                r: d.r,
                source: (d.source.0, -(d.source.1 as i64)),
                target: (d.target.0, -(d.target.1 as i64)),
                kind: d.kind,
                zero: d.is_zero(),
            })
            .collect();
        let undetermined = self.undetermined.iter().map(|&(p, k)| (p, -(k as i64))).collect();
        let ko = (0..8).map(|i| (i.to_string(), self.assemble_ko(i, reduced))).collect();
        AhssReport {
            dim: self.space.dim(),
            basepoint_split: self.basepoint_split,
            pages,
            differentials,
            undetermined,
            ko,
        }
    }
}

/// `Sq² a + σ₁ ∪ Sq¹ a + σ₂ ∪ a`, the operator shared by the d₂
/// differentials out of the ℤ/2 rows and (after reduction) the ℤ rows.
pub fn twisted_sq2(sp: &Space, twist: &TwistData, a: &CohomologyClass) -> Result<CohomologyClass> {
    let mut out = sq(sp, 2, a)?;
    if let Some(w) = twist.sigma1() {
        let s1 = sp.mod2_class(1, w.values())?;
        out = sp.add(&out, &cup(sp, &s1, &sq(sp, 1, a)?)?)?;
    }
    if let Some(s) = twist.sigma2() {
        let s2 = sp.mod2_class(2, s)?;
        out = sp.add(&out, &cup(sp, &s2, a)?)?;
    }
    Ok(out)
}

/// Builds E₂ for the given twist without turning pages.
pub fn build_e2<'a>(space: &'a Space, twist: &TwistData) -> Result<AhssState<'a>> {
    twist.validate(space.complex())?;
    let dim = space.dim();
    let s1 = twist.sigma1();
    let keys: Vec<(usize, usize)> =
        (0..=dim).flat_map(|p| KOCoefficients::ROWS.iter().map(move |&k| (p, k))).collect();
    let entries = keys
        .par_iter()
        .map(|&(p, k)| {
            let g = match KOCoefficients::coeff(k).expect("nonzero row") {
                Coeff::Z => space.int_cohomology(p, s1).group.clone(),
                _ => space.mod2_cohomology(p).group.clone(),
            };
            ((p, k), Subquotient::full(relations_of(&g)))
        })
        .collect::<BTreeMap<_, _>>();
    let s1_trivial = match s1 {
        Some(w) => space.mod2_class(1, w.values())?.is_zero(),
        None => true,
    };
    let s2_trivial = match twist.sigma2() {
        Some(s) => space.mod2_class(2, s)?.is_zero(),
        None => true,
    };
    Ok(AhssState {
        space,
        twist: twist.clone(),
        basepoint_split: s1_trivial && s2_trivial && space.complex().is_connected(),
        pages: vec![Page { r: 2, entries }],
        differentials: Vec::new(),
        undetermined: BTreeSet::new(),
    })
}

/// Turns pages until E∞ (r = dim + 2).
pub fn turn_pages(state: &mut AhssState<'_>) -> Result<()> {
    let last = state.space.dim() + 1;
    let mut r = state.pages.last().map_or(2, |p| p.r);
    while r <= last {
        state.turn(r)?;
        r += 1;
    }
    Ok(())
}

/// Builds E₂ and runs to E∞.
pub fn run<'a>(space: &'a Space, twist: &TwistData) -> Result<AhssState<'a>> {
    let mut st = build_e2(space, twist)?;
    turn_pages(&mut st)?;
    Ok(st)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationQuotient {
    pub p: usize,
    pub q: i64,
    pub group: AbelianGroup,
}

/// `KO^i` read off E∞: associated graded pieces and extension-invariant
/// summaries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KOGroupReport {
    pub degree: i64,
    pub quotients: Vec<FiltrationQuotient>,
    /// Product of the orders of the finite quotients.
    #[serde(serialize_with = "crate::algebra::num_serde::int")]
    pub order: BigInt,
    pub free_rank: usize,
    pub extension_ambiguous: bool,
    pub undetermined: bool,
    /// False when a finite quotient sits below a free one in the filtration,
    /// so that extensions may absorb torsion into the free part.
    pub torsion_order_exact: bool,
    /// Whether the basepoint column was split off.
    pub reduced: bool,
}

impl KOGroupReport {
    pub fn from_quotients(degree: i64, quotients: Vec<FiltrationQuotient>, undetermined: bool, reduced: bool) -> Self {
        let order = quotients.iter().fold(BigInt::one(), |acc, q| acc * q.group.torsion_order());
        let free_rank = quotients.iter().map(|q| q.group.free_rank).sum();
        // filtration F^p decreases in p; a torsion quotient at smaller p than
        // a free one is a quotient of an extension by ℤ
        let max_free_p = quotients.iter().filter(|q| q.group.free_rank > 0).map(|q| q.p).max();
        let torsion_order_exact = match max_free_p {
            None => true,
            Some(fp) => !quotients.iter().any(|q| q.p < fp && !q.group.torsion.is_empty()),
        };
        let finite_pieces = quotients.iter().filter(|q| !q.group.torsion.is_empty()).count();
        let extension_ambiguous = finite_pieces >= 2 || !torsion_order_exact;
        KOGroupReport {
            degree,
            quotients,
            order,
            free_rank,
            extension_ambiguous,
            undetermined,
            torsion_order_exact,
            reduced,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.quotients.is_empty()
    }

    pub fn order_u64(&self) -> Option<u64> {
        u64::try_from(&self.order).ok()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DifferentialSummary {
    pub r: usize,
    pub source: (usize, i64),
    pub target: (usize, i64),
    pub kind: DiffKind,
    /// `None` when the differential is unknown.
    pub zero: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AhssReport {
    pub dim: usize,
    pub basepoint_split: bool,
    pub pages: BTreeMap<String, BTreeMap<String, String>>,
    pub differentials: Vec<DifferentialSummary>,
    pub undetermined: Vec<(usize, i64)>,
    pub ko: BTreeMap<String, KOGroupReport>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::DeltaComplex;
    use crate::ops::{power, rp_space};

    #[test]
    fn point_is_coefficients() {
        let sp = Space::new(DeltaComplex::point());
        let st = run(&sp, &TwistData::none()).unwrap();
        let e2 = st.page(2).unwrap();
        for k in 0..8 {
            assert!(e2.group(0, k).same_structure(&KOCoefficients::group(k)));
        }
        let ko0 = st.assemble_ko(0, false);
        assert_eq!(ko0.free_rank, 1);
        assert!(st.assemble_ko(-1, false).order == BigInt::from(2));
        assert!(st.assemble_ko(0, true).is_zero());
    }

    #[test]
    fn rp2_twisted_e2() {
        let (sp, w, _) = rp_space(2).unwrap();
        let tw = TwistData::new(sp.complex(), Some(w), None).unwrap();
        let st = build_e2(&sp, &tw).unwrap();
        let e2 = st.page(2).unwrap();
        let row0: Vec<String> = (0..3).map(|p| e2.group(p, 0).to_string()).collect();
        assert_eq!(row0, ["0", "Z/2", "Z"]);
        for p in 0..3 {
            assert_eq!(e2.group(p, 1).to_string(), "Z/2");
        }
    }

    #[test]
    fn rp2_reduced_ko0() {
        let (sp, _, _) = rp_space(2).unwrap();
        let st = run(&sp, &TwistData::none()).unwrap();
        let r = st.assemble_ko(0, true);
        assert_eq!(r.order, BigInt::from(4));
        assert_eq!(r.free_rank, 0);
        assert!(r.extension_ambiguous);
        assert!(!r.undetermined);
        st.check_square_zero().unwrap();
    }

    #[test]
    fn rp3_twisted_degree0() {
        let (sp, w, x) = rp_space(3).unwrap();
        let tw = TwistData::new(sp.complex(), Some(w), None).unwrap();
        let st = run(&sp, &tw).unwrap();
        assert_eq!(st.assemble_ko(0, true).order, BigInt::from(2));
        // d₂ on x in the ℤ/2 row is x³
        assert_eq!(st.d2_z2_row(&x).unwrap(), power(&sp, &x, 3).unwrap());
        let one = sp.mod2_class(0, &vec![true; sp.complex().count(0)]).unwrap();
        let (sp2, w2, _) = rp_space(2).unwrap();
        let st2 = build_e2(&sp2, &TwistData::new(sp2.complex(), Some(w2), None).unwrap()).unwrap();
        let one2 = sp2.mod2_class(0, &vec![true; sp2.complex().count(0)]).unwrap();
        assert!(st2.d2_z2_row(&one2).unwrap().is_zero());
        assert!(st.d2_z2_row(&one).unwrap().is_zero());
    }

    #[test]
    fn periodicity() {
        let (sp, _, _) = rp_space(3).unwrap();
        let st = run(&sp, &TwistData::none()).unwrap();
        for i in 0..8 {
            let a = st.assemble_ko(i, true);
            let b = st.assemble_ko(i - 8, true);
            let pg = |r: &KOGroupReport| r.quotients.iter().map(|q| (q.p, q.group.clone())).collect::<Vec<_>>();
            assert_eq!(pg(&a), pg(&b));
            assert_eq!((a.order, a.free_rank), (b.order, b.free_rank));
        }
    }
}
