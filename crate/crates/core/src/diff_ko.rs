//! The computable shadow of differential KO-theory: the E₂ page of the
//! differential AHSS, its flat differentials, the integrality condition
//! behind the geometric d₄, the twisted Spin obstruction, low-dimensional
//! KO and the groups entering twisted R-theory.
//!
//! Differential forms only enter through their cohomology classes, and
//! those are restricted to the image of integral cohomology.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::Serialize;

use crate::ahss::{run, twisted_sq2};
use crate::algebra::{num_serde, AbelianGroup, Coeff, QmodZGroup};
use crate::complex::SignCocycle;
use crate::error::{Error, Result};
use crate::ops::{
    bockstein, bockstein_u1, cup, include_j2, reduce_mod2, sq, ClassJson, CohomologyClass, Space, TwistData,
};

/// A rational class `c / denominator` with `c` integral (possibly twisted).
#[derive(Clone, Debug)]
pub struct RationalClass {
    pub class: CohomologyClass,
    pub denominator: BigInt,
}

impl RationalClass {
    pub fn new(class: CohomologyClass, denominator: BigInt) -> Result<Self> {
        if class.coeff != Coeff::Z {
            return Err(Error::DegreeMismatch("a rational class needs an integral representative".into()));
        }
        if !class.degree.is_multiple_of(4) {
            return Err(Error::DegreeMismatch(format!("form degree {} is not a multiple of 4", class.degree)));
        }
        if !denominator.is_positive() {
            return Err(Error::InvalidCocycle("denominator must be positive".into()));
        }
        Ok(RationalClass { class, denominator })
    }

    pub fn integral(class: CohomologyClass) -> Result<Self> {
        Self::new(class, BigInt::one())
    }

    pub fn degree(&self) -> usize {
        self.class.degree
    }

    pub fn twist(&self) -> Option<&SignCocycle> {
        self.class.twist.as_ref()
    }

    pub fn is_integral(&self) -> bool {
        self.denominator.is_one()
    }
}

/// One entry of the differential E₂ page.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DiffEntry {
    /// The (0,0) entry: closed forms with values in the flat graded line
    /// bundle. Only ranks of twisted de Rham cohomology are computed.
    Forms { descriptor: String, local_system: String, twisted_rational_ranks: Vec<usize> },
    /// `Hᵖ(X; 𝓛^δ/𝒵)`, computed with ℚ/ℤ in place of ℝ/ℤ (same finite part,
    /// divisible part reported by rank).
    Flat { group: QmodZGroup },
    Mod2 { group: AbelianGroup },
}

impl DiffEntry {
    pub fn is_trivial(&self) -> bool {
        match self {
            DiffEntry::Forms { .. } => false,
            DiffEntry::Flat { group } => group.divisible_rank == 0 && group.finite.is_trivial(),
            DiffEntry::Mod2 { group } => group.is_trivial(),
        }
    }
}

/// Row type of the differential AHSS at `q < 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiffRow {
    Flat,
    Mod2,
    Zero,
}

impl DiffRow {
    pub fn of(q: i64) -> DiffRow {
        if q.rem_euclid(4) == 1 {
            DiffRow::Flat
        } else if matches!(q.rem_euclid(8), 6 | 7) {
            DiffRow::Mod2
        } else {
            DiffRow::Zero
        }
    }
}

/// The E₂ page for `p > 0`, `−8 ≤ q ≤ −1` (one period) plus the (0,0) entry.
#[derive(Clone, Debug, Serialize)]
pub struct DiffE2Page {
    pub dim: usize,
    pub sigma1_nontrivial: bool,
    #[serde(serialize_with = "entry_map")]
    pub entries: BTreeMap<(usize, i64), DiffEntry>,
}

fn entry_map<S: serde::Serializer>(m: &BTreeMap<(usize, i64), DiffEntry>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for ((p, q), e) in m {
        map.serialize_entry(&format!("{p},{q}"), e)?;
    }
    map.end()
}

impl DiffE2Page {
    pub fn entry(&self, p: usize, q: i64) -> Option<&DiffEntry> {
        self.entries.get(&(p, q))
    }

    pub fn twisted_rational_ranks(&self) -> &[usize] {
        match self.entries.get(&(0, 0)) {
            Some(DiffEntry::Forms { twisted_rational_ranks, .. }) => twisted_rational_ranks,
            _ => &[],
        }
    }
}

/// Assembles the differential E₂ page.
pub fn diff_e2(sp: &Space, tw: &TwistData) -> Result<DiffE2Page> {
    tw.validate(sp.complex())?;
    let s1 = tw.sigma1();
    let dim = sp.dim();
    let ranks: Vec<usize> = (0..=dim).map(|p| sp.int_cohomology(p, s1).group.free_rank).collect();
    let s1_nontrivial = match s1 {
        Some(w) => !sp.mod2_class(1, w.values())?.is_zero(),
        None => false,
    };
    let mut entries = BTreeMap::new();
    entries.insert(
        (0, 0),
        DiffEntry::Forms {
            descriptor: "flat twisted forms, graded by 4ℤ".into(),
            local_system: if s1.is_some() { "σ₁".into() } else { "trivial".into() },
            twisted_rational_ranks: ranks,
        },
    );
    let cells: Vec<(usize, i64)> = (1..=dim).flat_map(|p| (-8..=-1).map(move |q| (p, q))).collect();
    let computed: Vec<((usize, i64), DiffEntry)> = cells
        .par_iter()
        .filter_map(|&(p, q)| match DiffRow::of(q) {
            DiffRow::Flat => Some(((p, q), DiffEntry::Flat { group: sp.qmodz_group(p, s1) })),
            DiffRow::Mod2 => Some(((p, q), DiffEntry::Mod2 { group: sp.mod2_cohomology(p).group.clone() })),
            DiffRow::Zero => None,
        })
        .collect();
    entries.extend(computed);
    Ok(DiffE2Page { dim, sigma1_nontrivial: s1_nontrivial, entries })
}

fn require(a: &CohomologyClass, coeff: Coeff, what: &str) -> Result<()> {
    if a.coeff != coeff {
        return Err(Error::DegreeMismatch(format!("{what} expects a {coeff:?} class, got {:?}", a.coeff)));
    }
    Ok(())
}

/// Flat d₂ out of a ℤ/2 row: `Sq² + σ₁ ∪ Sq¹ + σ₂ ∪`.
pub fn flat_d2_z2(sp: &Space, tw: &TwistData, a: &CohomologyClass) -> Result<CohomologyClass> {
    require(a, Coeff::Z2, "flat d₂")?;
    twisted_sq2(sp, tw, a)
}

/// Flat differential out of the 𝓛^δ/𝒵 row:
/// `(Sq² + σ₁ ∪ Sq¹ + σ₂ ∪) ∘ r ∘ β`, landing in degree p + 3.
pub fn flat_d3_u1_to_z2(sp: &Space, tw: &TwistData, a: &CohomologyClass) -> Result<CohomologyClass> {
    require(a, Coeff::QmodZ, "flat d₃ from the ℝ/ℤ row")?;
    if a.twist.as_ref() != tw.sigma1() {
        return Err(Error::DegreeMismatch("ℝ/ℤ class is not twisted by σ₁".into()));
    }
    let b = bockstein_u1(sp, a)?;
    twisted_sq2(sp, tw, &reduce_mod2(sp, &b)?)
}

/// Flat differential into the 𝓛^δ/𝒵 row: `j ∘ Sq² + j ∘ (σ₂ ∪)`, landing
/// in degree p + 2.
pub fn flat_d3_z2_to_u1(sp: &Space, tw: &TwistData, a: &CohomologyClass) -> Result<CohomologyClass> {
    require(a, Coeff::Z2, "flat d₃ into the ℝ/ℤ row")?;
    let mut v = sq(sp, 2, a)?;
    if let Some(s) = tw.sigma2() {
        v = sp.add(&v, &cup(sp, &sp.mod2_class(2, s)?, a)?)?;
    }
    include_j2(sp, &v, tw.sigma1())
}

/// Outcome of the d₄ lifting check for a degree-4 class.
#[derive(Clone, Debug, Serialize)]
pub struct LiftCheck {
    pub lifts_past_d4: bool,
    pub witness: Option<ClassJson>,
    #[serde(skip)]
    pub witness_class: Option<CohomologyClass>,
    /// ρ₂(G) in the mod-2 basis of H⁴.
    #[serde(serialize_with = "num_serde::ints")]
    pub target: Vec<BigInt>,
    pub candidates: usize,
    pub solutions: usize,
    /// True when j₂: H⁴(ℤ/2) → H⁴(ℚ/ℤ) is injective, so the mod-2 equation
    /// is equivalent to the ℚ/ℤ condition rather than only sufficient.
    pub mod2_reduction_exact: bool,
    pub transcript: Vec<String>,
}

const TRANSCRIPT_LIMIT: usize = 64;

fn fmt_coords(c: &CohomologyClass) -> String {
    let v: Vec<String> = c.plain_coords().unwrap_or(&[]).iter().map(|x| x.to_string()).collect();
    format!("[{}]", v.join(","))
}

/// Decides whether `½[G] mod ℤ = j₂(x² + σ₂ ∪ x)` has a solution
/// `x ∈ H²(X; ℤ/2)`, via the mod-2 equation `ρ₂(G) = x² + σ₂ ∪ x`.
pub fn geometric_d4_check(sp: &Space, g: &RationalClass, tw: &TwistData) -> Result<LiftCheck> {
    tw.validate(sp.complex())?;
    if g.degree() != 4 {
        return Err(Error::DegreeMismatch(format!("the d₄ check needs a degree-4 class, got {}", g.degree())));
    }
    if !g.is_integral() {
        return Err(Error::InvalidCocycle("only classes in the image of integral cohomology are supported".into()));
    }
    if tw.sigma1().is_some() || g.twist().is_some() {
        return Err(Error::Unsupported("form lifting with σ₁ ≠ 0".into()));
    }
    let target = reduce_mod2(sp, &g.class)?;
    let s2 = tw.sigma2().map(|s| sp.mod2_class(2, s)).transpose()?;
    let xs = sp.mod2_classes(2)?;
    let values: Vec<CohomologyClass> = xs
        .par_iter()
        .map(|x| {
            let mut v = cup(sp, x, x)?;
            if let Some(s2) = &s2 {
                v = sp.add(&v, &cup(sp, s2, x)?)?;
            }
            Ok(v)
        })
        .collect::<Result<_>>()?;
    let hits: Vec<bool> = values.iter().map(|v| *v == target).collect();
    let first = hits.iter().position(|&h| h);
    let mut transcript = vec![format!("ρ₂(G) = {}", fmt_coords(&target))];
    for ((x, v), h) in xs.iter().zip(&values).zip(&hits).take(TRANSCRIPT_LIMIT) {
        transcript.push(format!(
            "x = {}: x² + σ₂x = {} {}",
            fmt_coords(x),
            fmt_coords(v),
            if *h { "solves" } else { "differs" }
        ));
    }
    if xs.len() > TRANSCRIPT_LIMIT {
        transcript.push(format!("… {} further candidates", xs.len() - TRANSCRIPT_LIMIT));
    }
    let exact = sp
        .mod2_classes(4)?
        .par_iter()
        .filter(|y| !y.is_zero())
        .map(|y| include_j2(sp, y, None).map(|j| !j.is_zero()))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|b| b);
    let witness_class = first.map(|i| xs[i].clone());
    Ok(LiftCheck {
        lifts_past_d4: first.is_some(),
        witness: witness_class.as_ref().map(|c| c.to_json()),
        witness_class,
        target: target.plain_coords().unwrap_or(&[]).to_vec(),
        candidates: xs.len(),
        solutions: hits.iter().filter(|&&h| h).count(),
        mod2_reduction_exact: exact,
        transcript,
    })
}

/// True when `x² + σ₂ ∪ x = 0` for every `x ∈ H²(X; ℤ/2)`, i.e. the lifting
/// condition collapses to `ρ₂(G) = 0`.
pub fn lift_condition_collapses(sp: &Space, sigma2: Option<&[bool]>) -> Result<bool> {
    let s2 = sigma2.map(|s| sp.mod2_class(2, s)).transpose()?;
    let xs = sp.mod2_classes(2)?;
    let flags = xs
        .par_iter()
        .map(|x| {
            let mut v = cup(sp, x, x)?;
            if let Some(s2) = &s2 {
                v = sp.add(&v, &cup(sp, s2, x)?)?;
            }
            Ok(v.is_zero())
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(flags.into_iter().all(|b| b))
}

/// Verdict of the twisted Spin check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpinVerdict {
    Liftable,
    Obstructed,
    NecessaryOnly,
}

/// Dimension up to which `β(B²) = 0` is also sufficient.
pub const SPIN_SUFFICIENT_DIM: usize = 7;

#[derive(Clone, Debug, Serialize)]
pub struct SpinCheck {
    pub b: ClassJson,
    pub obstruction: ClassJson,
    #[serde(skip)]
    pub obstruction_class: CohomologyClass,
    pub verdict: SpinVerdict,
}

/// `β(B²) ∈ H⁵(X; ℤ)` for a mod-2 class B of degree 2.
pub fn check_twisted_spin(sp: &Space, b: &CohomologyClass) -> Result<SpinCheck> {
    if b.coeff != Coeff::Z2 || b.degree != 2 {
        return Err(Error::DegreeMismatch(format!("B must lie in H²(ℤ/2), got degree {} {:?}", b.degree, b.coeff)));
    }
    let b2 = sq(sp, 2, b)?;
    let obs = bockstein(sp, &b2, None)?;
    let verdict = if !obs.is_zero() {
        SpinVerdict::Obstructed
    } else if sp.dim() <= SPIN_SUFFICIENT_DIM {
        SpinVerdict::Liftable
    } else {
        SpinVerdict::NecessaryOnly
    };
    Ok(SpinCheck { b: b.to_json(), obstruction: obs.to_json(), obstruction_class: obs, verdict })
}

/// `KÔ⁰(X) ≅ ℤ × H¹(X; ℤ/2) × H²(X; ℤ/2)` for dim X ≤ 3.
#[derive(Clone, Debug, Serialize)]
pub struct LowDimKO {
    pub z_factor: AbelianGroup,
    pub h1: AbelianGroup,
    pub h2: AbelianGroup,
    /// `|H¹| · |H²|`.
    #[serde(serialize_with = "opt_int")]
    pub factor_order: Option<BigInt>,
    /// Order of reduced KO⁰ from the spectral sequence.
    #[serde(serialize_with = "opt_int")]
    pub reduced_ko_order: Option<BigInt>,
    pub consistent: bool,
    pub group_note: String,
}

fn opt_int<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(n) => num_serde::int(n, s),
        None => s.serialize_none(),
    }
}

pub fn low_dim_ko(sp: &Space) -> Result<LowDimKO> {
    if sp.dim() > 3 {
        return Err(Error::DegreeMismatch(format!("low-dimensional splitting needs dim ≤ 3, got {}", sp.dim())));
    }
    let h1 = sp.mod2_cohomology(1).group.clone();
    let h2 = sp.mod2_cohomology(2).group.clone();
    let factor_order = match (h1.order(), h2.order()) {
        (Some(a), Some(b)) => Some(a * b),
        _ => None,
    };
    let st = run(sp, &TwistData::none())?;
    let ko = st.assemble_ko(0, true);
    let reduced_ko_order = if ko.free_rank == 0 && !ko.undetermined { Some(ko.order.clone()) } else { None };
    let consistent = ko.reduced && factor_order.is_some() && factor_order == reduced_ko_order;
    Ok(LowDimKO {
        z_factor: AbelianGroup::free(1),
        h1,
        h2,
        factor_order,
        reduced_ko_order,
        consistent,
        group_note: "the bijection is a group isomorphism for the product (a, b)·(a′, b′) = (a + a′, b + b′ + a ∪ a′)"
            .into(),
    })
}

/// Ingredients of `R^{−1}` and its twisted differential refinement.
#[derive(Clone, Debug, Serialize)]
pub struct RTheoryReport {
    pub twisted: bool,
    pub h3: AbelianGroup,
    pub h0_z2: AbelianGroup,
    pub h1_z2: AbelianGroup,
    pub free_rank: usize,
    /// Order of `R^{−1}` when finite; the extension itself is not solved.
    #[serde(serialize_with = "opt_int")]
    pub order: Option<BigInt>,
    pub extension: String,
    /// Flat part of `Ĥ³(X; ∇)`: `H³(X; 𝓛^δ/𝒵)`.
    pub flat_part: QmodZGroup,
    pub form_part: String,
}

pub fn r_theory_groups(sp: &Space, w: Option<&SignCocycle>) -> Result<RTheoryReport> {
    if let Some(w) = w {
        w.check(sp.complex())?;
    }
    let w = w.filter(|w| !w.is_zero());
    let h3 = sp.int_cohomology(3, w).group.clone();
    let h0_z2 = sp.mod2_cohomology(0).group.clone();
    let h1_z2 = sp.mod2_cohomology(1).group.clone();
    let order = match (h3.order(), h0_z2.order(), h1_z2.order()) {
        (Some(a), Some(b), Some(c)) => Some(a * b * c),
        _ => None,
    };
    Ok(RTheoryReport {
        twisted: w.is_some(),
        free_rank: h3.free_rank,
        h3,
        h0_z2,
        h1_z2,
        order,
        extension: "unsolved".into(),
        flat_part: sp.qmodz_group(3, w),
        form_part: "closed 3-forms with values in the flat line bundle (symbolic)".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_klein, build_sphere, build_torus, circle, product, DeltaComplex};
    use crate::ops::rp_space;

    fn int_class(sp: &Space, p: usize, k: i64) -> CohomologyClass {
        sp.class(Coeff::Z, None, p, &[BigInt::from(k)]).unwrap()
    }

    #[test]
    fn mobius_twist_kills_rational_cohomology() {
        let x = circle();
        let w = SignCocycle::new(&x, vec![true, false, false]).unwrap();
        let sp = Space::new(x.clone());
        let tw = TwistData::new(&x, Some(w), None).unwrap();
        let page = diff_e2(&sp, &tw).unwrap();
        assert_eq!(page.twisted_rational_ranks(), &[0, 0]);
        assert!(page.sigma1_nontrivial);
        let untw = diff_e2(&sp, &TwistData::none()).unwrap();
        assert_eq!(untw.twisted_rational_ranks(), &[1, 1]);
    }

    #[test]
    fn rp2_flat_row_matches_uct() {
        let (sp, _, _) = rp_space(2).unwrap();
        let page = diff_e2(&sp, &TwistData::none()).unwrap();
        for p in 1..=2 {
            let Some(DiffEntry::Flat { group }) = page.entry(p, -3) else { panic!("missing flat entry") };
            let next = sp.int_cohomology(p + 1, None).group.clone();
            assert_eq!(group.finite.torsion, next.torsion);
            assert_eq!(group.divisible_rank, sp.int_cohomology(p, None).group.free_rank);
        }
        let Some(DiffEntry::Flat { group }) = page.entry(1, -7) else { panic!() };
        assert_eq!(group.finite.torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn row_split() {
        use DiffRow::*;
        assert_eq!(DiffRow::of(-1), Mod2);
        assert_eq!(DiffRow::of(-2), Mod2);
        assert_eq!(DiffRow::of(-3), Flat);
        assert_eq!(DiffRow::of(-5), Zero);
        assert_eq!(DiffRow::of(-6), Zero);
        assert_eq!(DiffRow::of(-7), Flat);
        assert_eq!(DiffRow::of(-8), Zero);
        assert_eq!(DiffRow::of(-9), Mod2);
    }

    #[test]
    fn point_has_only_forms() {
        let sp = Space::new(DeltaComplex::point());
        let page = diff_e2(&sp, &TwistData::none()).unwrap();
        assert_eq!(page.entries.len(), 1);
        assert_eq!(page.twisted_rational_ranks(), &[1]);
    }

    #[test]
    fn flat_d2_on_rp3() {
        let (sp, w, x) = rp_space(3).unwrap();
        let tw = TwistData::new(sp.complex(), Some(w), None).unwrap();
        let v = flat_d2_z2(&sp, &tw, &x).unwrap();
        assert_eq!(v, crate::ops::power(&sp, &x, 3).unwrap());
        let st = crate::ahss::build_e2(&sp, &tw).unwrap();
        for p in 0..=3 {
            for a in sp.mod2_classes(p).unwrap() {
                assert_eq!(flat_d2_z2(&sp, &tw, &a).unwrap(), st.d2_z2_row(&a).unwrap());
            }
        }
    }

    #[test]
    fn flat_d3_into_u1_on_rp5() {
        let (sp, w, x) = rp_space(5).unwrap();
        let x2 = cup(&sp, &x, &x).unwrap();
        let s2 = x2.mod2_bits().unwrap().to_vec();
        let one = sp.mod2_class(0, &vec![true; sp.complex().count(0)]).unwrap();
        // untwisted H²(ℝP⁵; ℚ/ℤ) = 0
        let tw = TwistData::new(sp.complex(), None, Some(s2.clone())).unwrap();
        let v = flat_d3_z2_to_u1(&sp, &tw, &one).unwrap();
        assert_eq!(v.degree, 2);
        assert!(v.is_zero());
        assert!(sp.qmodz_group(2, None).finite.is_trivial());
        // with σ₁ = w₁ the value j(σ₂) is nonzero
        let tw = TwistData::new(sp.complex(), Some(w), Some(s2)).unwrap();
        let v = flat_d3_z2_to_u1(&sp, &tw, &one).unwrap();
        assert!(!v.is_zero());
    }

    #[test]
    fn divisible_input_to_beta_differential_vanishes() {
        let x = circle();
        let sp = Space::new(x.clone());
        let h = sp.qmodz_cohomology(1, None);
        assert_eq!(h.group.divisible_rank, 1);
        let z = h.integral().rep(0);
        let c = crate::algebra::QmodZCochain::new(BigInt::from(3), z).unwrap();
        let a = sp.qmodz_class(1, None, &c).unwrap();
        assert!(!a.is_zero());
        let v = flat_d3_u1_to_z2(&sp, &TwistData::none(), &a).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn flat_row_mismatch_rejected() {
        let (sp, _, x) = rp_space(2).unwrap();
        assert!(flat_d3_u1_to_z2(&sp, &TwistData::none(), &x).is_err());
        let i = sp.zero(Coeff::Z, None, 0).unwrap();
        assert!(flat_d2_z2(&sp, &TwistData::none(), &i).is_err());
    }

    #[test]
    fn s4_lifting() {
        let sp = Space::new(build_sphere(4));
        for k in [-4, -2, 0, 2, 6] {
            let g = RationalClass::integral(int_class(&sp, 4, k)).unwrap();
            let r = geometric_d4_check(&sp, &g, &TwistData::none()).unwrap();
            assert!(r.lifts_past_d4, "k = {k}");
            assert!(r.witness.is_some());
        }
        for k in [-3, 1, 3, 5] {
            let g = RationalClass::integral(int_class(&sp, 4, k)).unwrap();
            let r = geometric_d4_check(&sp, &g, &TwistData::none()).unwrap();
            assert!(!r.lifts_past_d4, "k = {k}");
            assert!(r.witness.is_none());
            assert!(r.mod2_reduction_exact);
        }
    }

    #[test]
    fn lifting_rejects_bad_input() {
        let sp = Space::new(build_sphere(4));
        let g = RationalClass::new(int_class(&sp, 4, 1), BigInt::from(2)).unwrap();
        let e = geometric_d4_check(&sp, &g, &TwistData::none()).unwrap_err();
        assert!(e.is_validation());
        assert!(RationalClass::integral(sp.zero(Coeff::Z, None, 2).unwrap()).is_err());
        let (rp, w, _) = rp_space(4).unwrap();
        let g = RationalClass::integral(rp.zero(Coeff::Z, None, 4).unwrap()).unwrap();
        let tw = TwistData::new(rp.complex(), Some(w), None).unwrap();
        assert!(matches!(geometric_d4_check(&rp, &g, &tw), Err(Error::Unsupported(_))));
    }

    #[test]
    fn zero_sigma2_matches_untwisted() {
        let sp = Space::new(build_sphere(4));
        let zero2 = vec![false; sp.complex().count(2)];
        let tw = TwistData::new(sp.complex(), None, Some(zero2)).unwrap();
        for k in 0..4 {
            let g = RationalClass::integral(int_class(&sp, 4, k)).unwrap();
            let a = geometric_d4_check(&sp, &g, &TwistData::none()).unwrap();
            let b = geometric_d4_check(&sp, &g, &tw).unwrap();
            assert_eq!(a.lifts_past_d4, b.lifts_past_d4);
        }
    }

    #[test]
    fn wu_collapse_on_s2xs2() {
        let s2 = build_sphere(2);
        let sp = Space::new(product(&s2, &s2));
        assert!(sp.complex().num_simplices() > 0);
        let w2 = vec![false; sp.complex().count(2)];
        assert!(lift_condition_collapses(&sp, Some(&w2)).unwrap());
        let gens = sp.generators(Coeff::Z2, None, 2).unwrap();
        assert_eq!(gens.len(), 2);
        let alt = gens[0].mod2_bits().unwrap().to_vec();
        assert!(!lift_condition_collapses(&sp, Some(&alt)).unwrap());

        let top = int_class(&sp, 4, 1);
        let even = RationalClass::integral(int_class(&sp, 4, 2)).unwrap();
        let odd = RationalClass::integral(top).unwrap();
        let w2_tw = TwistData::new(sp.complex(), None, Some(w2)).unwrap();
        assert!(geometric_d4_check(&sp, &even, &w2_tw).unwrap().lifts_past_d4);
        assert!(!geometric_d4_check(&sp, &odd, &w2_tw).unwrap().lifts_past_d4);
        let alt_tw = TwistData::new(sp.complex(), None, Some(alt)).unwrap();
        let r = geometric_d4_check(&sp, &odd, &alt_tw).unwrap();
        assert!(r.lifts_past_d4);
        assert!(r.witness_class.is_some());
    }

    #[test]
    fn spin_checks() {
        let (sp, _, x) = rp_space(3).unwrap();
        for b in sp.mod2_classes(2).unwrap() {
            let r = check_twisted_spin(&sp, &b).unwrap();
            assert_eq!(r.verdict, SpinVerdict::Liftable);
            assert!(r.obstruction_class.is_zero());
        }
        assert!(check_twisted_spin(&sp, &x).is_err());
        let (k, _) = build_klein(3).unwrap();
        let sk = Space::new(k);
        let all = sk.mod2_classes(2).unwrap();
        assert_eq!(all.len(), 8);
        for b in &all {
            assert_eq!(check_twisted_spin(&sk, b).unwrap().verdict, SpinVerdict::Liftable);
        }
    }

    #[test]
    fn spin_obstruction_in_high_dimension() {
        // H⁵(ℝP⁵; ℤ) = ℤ is torsion-free, so β(x⁴) = 0
        let (sp, _, x) = rp_space(5).unwrap();
        let b = cup(&sp, &x, &x).unwrap();
        let r = check_twisted_spin(&sp, &b).unwrap();
        assert!(r.obstruction_class.is_zero());
        assert_eq!(r.verdict, SpinVerdict::Liftable);
    }

    #[test]
    fn low_dim() {
        let (k2, _) = build_klein(2).unwrap();
        let r = low_dim_ko(&Space::new(k2)).unwrap();
        assert_eq!(r.factor_order, Some(BigInt::from(8)));
        assert!(r.consistent);
        let r = low_dim_ko(&Space::new(circle())).unwrap();
        assert_eq!((r.h1.ngens(), r.h2.ngens()), (1, 0));
        assert!(r.consistent);
        let (sp, _, _) = rp_space(3).unwrap();
        let r = low_dim_ko(&sp).unwrap();
        assert_eq!((r.h1.ngens(), r.h2.ngens()), (1, 1));
        assert!(r.consistent);
        assert!(low_dim_ko(&Space::new(build_sphere(4))).is_err());
    }

    #[test]
    fn r_theory() {
        let r = r_theory_groups(&Space::new(circle()), None).unwrap();
        assert!(r.h3.is_trivial());
        assert_eq!((r.h0_z2.ngens(), r.h1_z2.ngens()), (1, 1));
        let (k2, w) = build_klein(2).unwrap();
        let sp = Space::new(k2);
        let r = r_theory_groups(&sp, Some(&w)).unwrap();
        assert!(r.twisted && r.h3.is_trivial());
        assert_eq!((r.h0_z2.ngens(), r.h1_z2.ngens()), (1, 2));
        let r = r_theory_groups(&Space::new(build_torus(3).unwrap()), None).unwrap();
        assert_eq!(r.free_rank, 1);
        assert_eq!(r.order, None);
    }
}
