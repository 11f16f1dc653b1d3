//! Finitely generated abelian groups, homomorphisms between them, and
//! subquotients of lattices modulo diagonal relations.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::matrix::{
    axpy, from_dense, scale, smith_normal_form, to_dense, IntMatrix, Snf, SparseVec,
    Track,
};
use crate::error::{Error, Result};

/// `ℤ^free_rank ⊕ ⊕ ℤ/dᵢ` with `d₁ | d₂ | …`, each `dᵢ ≥ 2`, and a
/// representative for every generator (free ones first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
    pub basis: Vec<SparseVec<BigInt>>,
}

impl Serialize for AbelianGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct G<'a> {
            structure: String,
            free_rank: usize,
            #[serde(serialize_with = "super::num_serde::ints")]
            torsion: &'a [BigInt],
        }
        G { structure: self.to_string(), free_rank: self.free_rank, torsion: &self.torsion }.serialize(s)
    }
}

impl AbelianGroup {
    pub fn new(free_rank: usize, torsion: Vec<BigInt>, basis: Vec<SparseVec<BigInt>>) -> Result<Self> {
        let two = BigInt::from(2);
        if torsion.iter().any(|d| d < &two) {
            return Err(Error::Inconsistent(format!("torsion coefficients must be ≥ 2: {torsion:?}")));
        }
        if torsion.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(Error::Inconsistent(format!("torsion is not a divisibility chain: {torsion:?}")));
        }
        if !basis.is_empty() && basis.len() != free_rank + torsion.len() {
            return Err(Error::Inconsistent("basis length differs from generator count".into()));
        }
        Ok(AbelianGroup { free_rank, torsion, basis })
    }

    pub fn zero() -> Self {
        AbelianGroup { free_rank: 0, torsion: Vec::new(), basis: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup { free_rank: rank, torsion: Vec::new(), basis: Vec::new() }
    }

    pub fn cyclic(order: u64) -> Self {
        match order {
            0 => Self::free(1),
            1 => Self::zero(),
            d => AbelianGroup { free_rank: 0, torsion: vec![BigInt::from(d)], basis: Vec::new() },
        }
    }

    /// The canonical form of `ℤ^free ⊕ ⊕ ℤ/cᵢ` for arbitrary orders `cᵢ`.
    pub fn from_cyclic_orders(free: usize, orders: &[BigInt]) -> Self {
        let n = orders.len();
        let data: Vec<SparseVec<BigInt>> =
            orders.iter().enumerate().map(|(i, d)| from_dense(&{
                let mut r = vec![BigInt::zero(); n];
                r[i] = d.clone();
                r
            })).map(|r: SparseVec<BigInt>| r).collect();
        let m = IntMatrix::from_rows(n, n, data);
        let snf = smith_normal_form(&m, Track::NONE);
        let torsion: Vec<BigInt> = snf.diag.iter().filter(|d| !d.is_one()).cloned().collect();
        AbelianGroup { free_rank: free + n - snf.rank(), torsion, basis: Vec::new() }
    }

    /// Number of generators.
    pub fn ngens(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.ngens() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |acc, d| acc * d)
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion_order())
    }

    /// Relation order per generator, zero for free generators.
    pub fn relation_orders(&self) -> Vec<BigInt> {
        let mut r = vec![BigInt::zero(); self.free_rank];
        r.extend(self.torsion.iter().cloned());
        r
    }

    /// Reduces torsion coordinates into `[0, d)`.
    pub fn normalize(&self, coords: &[BigInt]) -> Vec<BigInt> {
        coords
            .iter()
            .enumerate()
            .map(|(i, c)| if i < self.free_rank { c.clone() } else { c.mod_floor(&self.torsion[i - self.free_rank]) })
            .collect()
    }

    pub fn is_zero_element(&self, coords: &[BigInt]) -> bool {
        self.normalize(coords).iter().all(|c| c.is_zero())
    }

    /// Structural equality, ignoring representatives.
    pub fn same_structure(&self, o: &AbelianGroup) -> bool {
        self.free_rank == o.free_rank && self.torsion == o.torsion
    }

    /// Same structure without representatives.
    pub fn structure(&self) -> AbelianGroup {
        AbelianGroup { free_rank: self.free_rank, torsion: self.torsion.clone(), basis: Vec::new() }
    }

    /// Number of ℤ/2 summands after tensoring with ℤ/2 (free and even torsion).
    pub fn two_rank(&self) -> usize {
        self.free_rank + self.torsion.iter().filter(|d| d.is_even()).count()
    }

    /// Number of cyclic summands of even order.
    pub fn even_torsion_count(&self) -> usize {
        self.torsion.iter().filter(|d| d.is_even()).count()
    }

    /// Enumerates all elements of a finite group in lexicographic coordinate order.
    pub fn elements(&self) -> Option<Vec<Vec<BigInt>>> {
        if !self.is_finite() {
            return None;
        }
        let mut out = vec![Vec::new()];
        for d in &self.torsion {
            let d = d.to_u64_digits().1.first().copied().unwrap_or(0);
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for prefix in &out {
                for k in 0..d {
                    let mut p = prefix.clone();
                    p.push(BigInt::from(k));
                    next.push(p);
                }
            }
            out = next;
        }
        Some(out)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let mut j = i;
            while j < self.torsion.len() && &self.torsion[j] == d {
                j += 1;
            }
            if j - i == 1 {
                parts.push(format!("Z/{d}"));
            } else {
                parts.push(format!("(Z/{d})^{}", j - i));
            }
            i = j;
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// A homomorphism given by the images of source generators, expressed in
/// target coordinates (columns = source generators).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupHom {
    pub source: AbelianGroup,
    pub target: AbelianGroup,
    pub matrix: IntMatrix,
}

impl GroupHom {
    /// Builds the hom from image coordinate columns, reducing modulo target
    /// torsion, and checks that torsion orders are respected.
    pub fn new(source: AbelianGroup, target: AbelianGroup, columns: Vec<Vec<BigInt>>) -> Result<Self> {
        if columns.len() != source.ngens() || columns.iter().any(|c| c.len() != target.ngens()) {
            return Err(Error::Inconsistent("homomorphism matrix shape mismatch".into()));
        }
        let cols: Vec<SparseVec<BigInt>> = columns.iter().map(|c| from_dense(&target.normalize(c))).collect();
        let hom = GroupHom { matrix: IntMatrix::from_columns(target.ngens(), &cols), source, target };
        hom.check_torsion()?;
        Ok(hom)
    }

    /// The image of an order-d generator must have order dividing d.
    pub fn check_torsion(&self) -> Result<()> {
        for (k, d) in self.source.torsion.iter().enumerate() {
            let col = self.matrix.column(self.source.free_rank + k);
            let scaled: Vec<BigInt> = to_dense(&scale(&col, d), self.target.ngens());
            if !self.target.is_zero_element(&scaled) {
                return Err(Error::Inconsistent(format!(
                    "image of an order-{d} generator does not have order dividing {d}"
                )));
            }
        }
        Ok(())
    }

    pub fn apply(&self, coords: &[BigInt]) -> Vec<BigInt> {
        self.target.normalize(&self.matrix.mul_vec(coords))
    }

    pub fn is_zero(&self) -> bool {
        (0..self.source.ngens()).all(|j| {
            self.target.is_zero_element(&to_dense(&self.matrix.column(j), self.target.ngens()))
        })
    }

    pub fn is_identity(&self) -> bool {
        self.source.same_structure(&self.target)
            && (0..self.source.ngens()).all(|j| {
                let mut e = to_dense(&self.matrix.column(j), self.target.ngens());
                e[j] -= 1;
                self.target.is_zero_element(&e)
            })
    }
}

/// `L_Z / L_B` inside an ambient `ℤⁿ / ⊕ tᵢℤ`, where `L_Z ⊇ L_B` both contain
/// the relations.
#[derive(Clone, Debug)]
pub struct Subquotient {
    relations: Vec<BigInt>,
    /// Basis of `L_Z` (ambient vectors).
    z_basis: Vec<SparseVec<BigInt>>,
    z_snf: Snf<BigInt>,
    /// Left transform of the presentation of `L_B` in `z_basis` coordinates.
    b_snf: Snf<BigInt>,
    group: AbelianGroup,
}

fn relation_vectors(relations: &[BigInt]) -> Vec<SparseVec<BigInt>> {
    relations
        .iter()
        .enumerate()
        .filter(|(_, t)| !t.is_zero())
        .map(|(i, t)| vec![(i, t.clone())])
        .collect()
}

impl Subquotient {
    /// The whole ambient group.
    pub fn full(relations: Vec<BigInt>) -> Self {
        let n = relations.len();
        let z: Vec<SparseVec<BigInt>> = (0..n).map(|i| vec![(i, BigInt::one())]).collect();
        Self::new(relations, z, Vec::new()).expect("full subquotient is consistent")
    }

    pub fn new(relations: Vec<BigInt>, z_gens: Vec<SparseVec<BigInt>>, b_gens: Vec<SparseVec<BigInt>>) -> Result<Self> {
        let n = relations.len();
        let rel = relation_vectors(&relations);
        let mut zcols = z_gens;
        zcols.extend(rel.iter().cloned());
        let zm = IntMatrix::from_columns(n, &zcols);
        let z_snf = smith_normal_form(&zm, Track::LEFT);
        let r = z_snf.rank();
        let u_inv = z_snf.u_inv_cols.as_ref().unwrap();
        let z_basis: Vec<SparseVec<BigInt>> = (0..r).map(|i| scale(&u_inv[i], &z_snf.diag[i])).collect();
        let mut this = Subquotient {
            relations,
            z_basis,
            z_snf,
            b_snf: smith_normal_form(&IntMatrix::zeros(0, 0), Track::LEFT),
            group: AbelianGroup::zero(),
        };
        let mut bcols = b_gens;
        bcols.extend(rel);
        let mut ycols = Vec::with_capacity(bcols.len());
        for b in &bcols {
            let y = this.z_coords(b).ok_or_else(|| {
                Error::Inconsistent("boundary generator does not lie in the cycle lattice".into())
            })?;
            ycols.push(from_dense(&y));
        }
        let c = IntMatrix::from_columns(r, &ycols);
        let b_snf = smith_normal_form(&c, Track::LEFT);
        let rc = b_snf.rank();
        let p_inv = b_snf.u_inv_cols.as_ref().unwrap();
        let rep = |j: usize| -> SparseVec<BigInt> {
            let mut acc = Vec::new();
            for (i, v) in &p_inv[j] {
                acc = axpy(&acc, v, &this.z_basis[*i]);
            }
            acc
        };
        let mut basis: Vec<SparseVec<BigInt>> = (rc..r).map(rep).collect();
        let mut torsion = Vec::new();
        for j in 0..rc {
            if !b_snf.diag[j].is_one() {
                torsion.push(b_snf.diag[j].clone());
                basis.push(rep(j));
            }
        }
        this.group = AbelianGroup { free_rank: r - rc, torsion, basis };
        this.b_snf = b_snf;
        Ok(this)
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn relations(&self) -> &[BigInt] {
        &self.relations
    }

    pub fn ambient_dim(&self) -> usize {
        self.relations.len()
    }

    pub fn z_basis(&self) -> &[SparseVec<BigInt>] {
        &self.z_basis
    }

    /// Coordinates in the `L_Z` basis, or `None` when `x ∉ L_Z`.
    fn z_coords(&self, x: &SparseVec<BigInt>) -> Option<Vec<BigInt>> {
        let dense = to_dense(x, self.relations.len());
        let c = self.z_snf.apply_u(&dense);
        let r = self.z_snf.rank();
        if c[r..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut y = Vec::with_capacity(r);
        for i in 0..r {
            let (q, rem) = c[i].div_rem(&self.z_snf.diag[i]);
            if !rem.is_zero() {
                return None;
            }
            y.push(q);
        }
        Some(y)
    }

    pub fn contains(&self, x: &SparseVec<BigInt>) -> bool {
        self.z_coords(x).is_some()
    }

    /// Coordinates of the class of `x ∈ L_Z` in the generators of the group.
    pub fn coords(&self, x: &SparseVec<BigInt>) -> Result<Vec<BigInt>> {
        let y = self
            .z_coords(x)
            .ok_or_else(|| Error::NotInKernel("vector is not in the cycle lattice".into()))?;
        let w = self.b_snf.apply_u(&y);
        let rc = self.b_snf.rank();
        let mut out: Vec<BigInt> = w[rc..].to_vec();
        for j in 0..rc {
            if !self.b_snf.diag[j].is_one() {
                out.push(w[j].mod_floor(&self.b_snf.diag[j]));
            }
        }
        Ok(out)
    }

    pub fn is_boundary(&self, x: &SparseVec<BigInt>) -> Result<bool> {
        Ok(self.coords(x)?.iter().all(|c| c.is_zero()))
    }

    /// Images of the `L_Z` basis under an ambient matrix.
    pub fn image_gens(&self, m: &IntMatrix) -> Vec<SparseVec<BigInt>> {
        self.z_basis.iter().map(|z| m.mul_sparse(z)).collect()
    }

    /// Matrix of the map induced by `m` into `target`, after checking that it
    /// is well defined.
    pub fn induced(&self, m: &IntMatrix, target: &Subquotient) -> Result<GroupHom> {
        for z in &self.z_basis {
            if !target.contains(&m.mul_sparse(z)) {
                return Err(Error::Inconsistent("map does not send cycles to cycles".into()));
            }
        }
        // boundaries, including relations, must map to boundaries
        let rc = self.b_snf.rank();
        let p_inv = self.b_snf.u_inv_cols.as_ref().unwrap();
        for j in 0..rc {
            let mut b = Vec::new();
            for (i, v) in &p_inv[j] {
                b = axpy(&b, v, &self.z_basis[*i]);
            }
            let b = scale(&b, &self.b_snf.diag[j]);
            if !target.is_boundary(&m.mul_sparse(&b))? {
                return Err(Error::Inconsistent("map does not send boundaries to boundaries".into()));
            }
        }
        let columns = self
            .group
            .basis
            .iter()
            .map(|g| target.coords(&m.mul_sparse(g)))
            .collect::<Result<Vec<_>>>()?;
        GroupHom::new(self.group.structure(), target.group.structure(), columns)
    }

    /// Generators (ambient vectors) of `{x ∈ L_Z : m·x ∈ L_B(target)}`.
    pub fn kernel_gens(&self, m: &IntMatrix, target: &Subquotient) -> Result<Vec<SparseVec<BigInt>>> {
        let r = self.z_basis.len();
        let mut cols: Vec<SparseVec<BigInt>> = self.image_gens(m);
        // boundary lattice basis of the target
        let tb = target.boundary_basis();
        cols.extend(tb.iter().map(|b| scale(b, &-BigInt::one())));
        let big = IntMatrix::from_columns(target.ambient_dim(), &cols);
        let snf = smith_normal_form(&big, Track::RIGHT);
        let v = snf.v_cols.as_ref().unwrap();
        let mut out = Vec::new();
        for col in &v[snf.rank()..] {
            let mut x = Vec::new();
            for (i, c) in col {
                if *i < r {
                    x = axpy(&x, c, &self.z_basis[*i]);
                }
            }
            if !x.is_empty() {
                out.push(x);
            }
        }
        Ok(out)
    }

    /// A basis of the boundary lattice `L_B`.
    pub fn boundary_basis(&self) -> Vec<SparseVec<BigInt>> {
        let rc = self.b_snf.rank();
        let p_inv = self.b_snf.u_inv_cols.as_ref().unwrap();
        (0..rc)
            .map(|j| {
                let mut b = Vec::new();
                for (i, v) in &p_inv[j] {
                    b = axpy(&b, v, &self.z_basis[*i]);
                }
                scale(&b, &self.b_snf.diag[j])
            })
            .collect()
    }

    /// The subquotient with the same cycles and extra boundaries.
    pub fn with_more_boundaries(&self, extra: Vec<SparseVec<BigInt>>) -> Result<Subquotient> {
        let mut b = self.boundary_basis();
        b.extend(extra);
        Subquotient::new(self.relations.clone(), self.z_basis.clone(), b)
    }

    /// The subquotient with cycles cut down to `z` and the same boundaries.
    pub fn with_cycles(&self, z: Vec<SparseVec<BigInt>>) -> Result<Subquotient> {
        Subquotient::new(self.relations.clone(), z, self.boundary_basis())
    }

}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn canonical_form() {
        let g = AbelianGroup::from_cyclic_orders(1, &[b(2), b(3), b(4)]);
        assert_eq!(g.free_rank, 1);
        assert_eq!(g.torsion, vec![b(2), b(12)]);
        assert_eq!(g.to_string(), "Z + Z/2 + Z/12");
        assert_eq!(AbelianGroup::from_cyclic_orders(0, &[b(2), b(2)]).to_string(), "(Z/2)^2");
        assert!(AbelianGroup::new(0, vec![b(4), b(2)], vec![]).is_err());
    }

    #[test]
    fn subquotient_of_z2_squared() {
        // ambient ℤ², cycles ⟨(1,0),(0,2)⟩, boundaries ⟨(2,0),(0,4)⟩ → ℤ/2 ⊕ ℤ/2
        let sq = Subquotient::new(
            vec![b(0), b(0)],
            vec![vec![(0, b(1))], vec![(1, b(2))]],
            vec![vec![(0, b(2))], vec![(1, b(4))]],
        )
        .unwrap();
        assert_eq!(sq.group().torsion, vec![b(2), b(2)]);
        assert!(sq.coords(&vec![(1, b(1))]).is_err());
        assert!(sq.is_boundary(&vec![(0, b(2)), (1, b(4))]).unwrap());
        assert!(!sq.is_boundary(&vec![(0, b(1))]).unwrap());
    }

    #[test]
    fn relations_are_respected() {
        // ℤ/4 with boundaries ⟨2⟩ → ℤ/2
        let sq = Subquotient::new(vec![b(4)], vec![vec![(0, b(1))]], vec![vec![(0, b(2))]]).unwrap();
        assert_eq!(sq.group().torsion, vec![b(2)]);
        assert_eq!(sq.coords(&vec![(0, b(3))]).unwrap(), vec![b(1)]);
    }

    #[test]
    fn kernel_and_induced() {
        // multiplication by 2: ℤ/4 → ℤ/4, kernel generated by 2
        let a = Subquotient::full(vec![b(4)]);
        let m = IntMatrix::from_dense(&[vec![b(2)]]);
        let k = a.kernel_gens(&m, &a).unwrap();
        let ksq = a.with_cycles(k).unwrap();
        assert_eq!(ksq.group().torsion, vec![b(2)]);
        let hom = a.induced(&m, &a).unwrap();
        assert_eq!(hom.apply(&[b(1)]), vec![b(2)]);
        assert!(!hom.is_zero());
        // ℤ/2 → ℤ/4, 1 ↦ 1 is not well defined
        let z2 = Subquotient::full(vec![b(2)]);
        let id = IntMatrix::from_dense(&[vec![b(1)]]);
        assert!(matches!(z2.induced(&id, &a), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn hom_torsion_check() {
        let z2 = AbelianGroup::cyclic(2);
        let z = AbelianGroup::free(1);
        assert!(GroupHom::new(z2.clone(), z.clone(), vec![vec![b(1)]]).is_err());
        assert!(GroupHom::new(z, z2, vec![vec![b(1)]]).is_ok());
    }

    #[test]
    fn enumerate_elements() {
        let g = AbelianGroup::from_cyclic_orders(0, &[b(2), b(2)]);
        assert_eq!(g.elements().unwrap().len(), 4);
        assert!(AbelianGroup::free(1).elements().is_none());
    }
}
