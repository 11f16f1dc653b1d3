//! Finite ordered Δ-complexes (semi-simplicial sets) and ℤ/2 one-cocycles
//! describing sign local systems on them.
//!
//! A d-simplex is stored only through its `d + 1` face indices; vertex
//! lists are derived. Simplices are not assumed to be determined by their
//! vertices, so quotients of simplicial complexes stay representable.

mod build;
mod json;

pub use build::{
    barycentric_subdivide, build_klein, build_rp, build_sphere, build_torus, circle,
    cross_polytope_sphere, klein_quotient, loop_circle, rp_quotient,
    product, quotient_by_involution, rp2_six_vertex, Involution, ProductComplex, Quotient,
    SimplicialMap, Subdivision,
};
pub use json::{ComplexJson, SignCocycleJson};

use crate::error::{Error, Result};

/// An ordered finite semi-simplicial complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaComplex {
    /// `faces[d][s]` lists the `d + 1` faces of the d-simplex `s`; empty for vertices.
    faces: Vec<Vec<Vec<usize>>>,
    vertices: Vec<Vec<Vec<usize>>>,
    labels: Option<Vec<Vec<String>>>,
}

impl DeltaComplex {
    /// Builds and validates a complex from vertex count and face lists for
    /// dimensions `1..`. `faces[0]` describes the edges.
    pub fn new(num_vertices: usize, faces: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let mut all = Vec::with_capacity(faces.len() + 1);
        all.push(vec![Vec::new(); num_vertices]);
        all.extend(faces);
        while all.len() > 1 && all.last().is_some_and(|l| l.is_empty()) {
            all.pop();
        }
        let complex = Self::from_parts(all, None)?;
        complex.validate()?;
        Ok(complex)
    }

    /// Like [`DeltaComplex::new`] but skips the connectivity requirement.
    pub(crate) fn new_unchecked_connectivity(
        num_vertices: usize,
        faces: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let mut all = Vec::with_capacity(faces.len() + 1);
        all.push(vec![Vec::new(); num_vertices]);
        all.extend(faces);
        while all.len() > 1 && all.last().is_some_and(|l| l.is_empty()) {
            all.pop();
        }
        let complex = Self::from_parts(all, None)?;
        complex.check_identities()?;
        Ok(complex)
    }

    fn from_parts(faces: Vec<Vec<Vec<usize>>>, labels: Option<Vec<Vec<String>>>) -> Result<Self> {
        if faces.is_empty() || faces[0].is_empty() {
            return Err(Error::InvalidComplex("complex has no vertices".into()));
        }
        for d in 1..faces.len() {
            let below = faces[d - 1].len();
            for (s, f) in faces[d].iter().enumerate() {
                if f.len() != d + 1 {
                    return Err(Error::InvalidComplex(format!(
                        "{d}-simplex {s} has {} faces, expected {}",
                        f.len(),
                        d + 1
                    )));
                }
                if let Some(&bad) = f.iter().find(|&&x| x >= below) {
                    return Err(Error::InvalidComplex(format!(
                        "{d}-simplex {s} references face {bad} out of range ({below} simplices in dimension {})",
                        d - 1
                    )));
                }
            }
        }
        let mut vertices: Vec<Vec<Vec<usize>>> = Vec::with_capacity(faces.len());
        vertices.push((0..faces[0].len()).map(|v| vec![v]).collect());
        for d in 1..faces.len() {
            let level: Vec<Vec<usize>> = faces[d]
                .iter()
                .map(|f| {
                    // front d vertices come from the last face, the final vertex from face 0
                    let mut vs = vertices[d - 1][f[d]].clone();
                    vs.push(*vertices[d - 1][f[0]].last().unwrap());
                    vs
                })
                .collect();
            vertices.push(level);
        }
        if let Some(l) = &labels {
            if l.len() != faces.len() || l.iter().zip(&faces).any(|(a, b)| a.len() != b.len()) {
                return Err(Error::InvalidComplex("label shape does not match simplices".into()));
            }
        }
        Ok(DeltaComplex { faces, vertices, labels })
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.faces.len()
            || labels.iter().zip(&self.faces).any(|(a, b)| a.len() != b.len())
        {
            return Err(Error::InvalidComplex("label shape does not match simplices".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&Vec<Vec<String>>> {
        self.labels.as_ref()
    }

    /// Top dimension.
    pub fn dim(&self) -> usize {
        self.faces.len() - 1
    }

    /// Number of d-simplices (zero above the top dimension).
    pub fn count(&self, d: usize) -> usize {
        self.faces.get(d).map_or(0, |l| l.len())
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(|l| l.len()).collect()
    }

    pub fn num_simplices(&self) -> usize {
        self.faces.iter().map(|l| l.len()).sum()
    }

    pub fn faces(&self, d: usize, s: usize) -> &[usize] {
        &self.faces[d][s]
    }

    /// The i-th face map applied to the d-simplex `s`.
    #[inline]
    pub fn face(&self, d: usize, s: usize, i: usize) -> usize {
        self.faces[d][s][i]
    }

    /// Vertex indices of a simplex in their order.
    pub fn vertices(&self, d: usize, s: usize) -> &[usize] {
        &self.vertices[d][s]
    }

    /// The face of the d-simplex `s` spanned by the given strictly increasing
    /// vertex positions.
    pub fn restrict(&self, d: usize, s: usize, positions: &[usize]) -> usize {
        let mut cur = s;
        let mut cur_d = d;
        let mut keep = positions.iter().rev().peekable();
        for pos in (0..=d).rev() {
            if keep.peek() == Some(&&pos) {
                keep.next();
            } else {
                cur = self.faces[cur_d][cur][pos];
                cur_d -= 1;
            }
        }
        cur
    }

    /// Same as [`DeltaComplex::restrict`] with positions given as a bitmask.
    pub fn restrict_mask(&self, d: usize, s: usize, mask: u32) -> usize {
        let mut cur = s;
        let mut cur_d = d;
        for pos in (0..=d).rev() {
            if mask & (1 << pos) == 0 {
                cur = self.faces[cur_d][cur][pos];
                cur_d -= 1;
            }
        }
        cur
    }

    /// The edge between vertex positions `i < j` of a simplex.
    pub fn edge(&self, d: usize, s: usize, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j <= d);
        self.restrict(d, s, &[i, j])
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.faces
            .iter()
            .enumerate()
            .map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    /// Checks that every face index is in range and that ∂ᵢ∂ⱼ = ∂ⱼ₋₁∂ᵢ for i < j.
    pub fn check_identities(&self) -> Result<()> {
        for d in 2..self.faces.len() {
            for s in 0..self.faces[d].len() {
                for j in 1..=d {
                    for i in 0..j {
                        let a = self.faces[d - 1][self.faces[d][s][j]][i];
                        let b = self.faces[d - 1][self.faces[d][s][i]][j - 1];
                        if a != b {
                            return Err(Error::InvalidComplex(format!(
                                "simplicial identity fails on {d}-simplex {s} for i={i}, j={j}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_connected(&self) -> bool {
        let n = self.count(0);
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut components = n;
        for e in 0..self.count(1) {
            let a = find(&mut parent, self.faces[1][e][1]);
            let b = find(&mut parent, self.faces[1][e][0]);
            if a != b {
                parent[a.max(b)] = a.min(b);
                components -= 1;
            }
        }
        components == 1
    }

    /// Full validation: identities plus connectivity.
    pub fn validate(&self) -> Result<()> {
        self.check_identities()?;
        if !self.is_connected() {
            return Err(Error::InvalidComplex("complex is not connected".into()));
        }
        Ok(())
    }

    /// True when every simplex is determined by its vertex set and has
    /// distinct vertices, i.e. the complex is an ordered simplicial complex.
    pub fn is_simplicial(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        for d in 0..self.faces.len() {
            for s in 0..self.faces[d].len() {
                let vs = &self.vertices[d][s];
                if vs.windows(2).any(|w| w[0] == w[1]) {
                    return false;
                }
                let mut key = vs.clone();
                key.sort_unstable();
                if !seen.insert(key) {
                    return false;
                }
            }
        }
        true
    }

    /// The complex consisting of a single vertex.
    pub fn point() -> Self {
        Self::from_parts(vec![vec![Vec::new()]], None).expect("point is valid")
    }
}

/// A ℤ/2-valued 1-cocycle; the monodromy of a sign local system.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignCocycle {
    values: Vec<bool>,
}

impl SignCocycle {
    /// Validates the cocycle condition on every triangle.
    pub fn new(complex: &DeltaComplex, values: Vec<bool>) -> Result<Self> {
        if values.len() != complex.count(1) {
            return Err(Error::InvalidCocycle(format!(
                "expected {} edge values, got {}",
                complex.count(1),
                values.len()
            )));
        }
        let c = SignCocycle { values };
        c.check(complex)?;
        Ok(c)
    }

    pub fn trivial(complex: &DeltaComplex) -> Self {
        SignCocycle { values: vec![false; complex.count(1)] }
    }

    pub(crate) fn from_values_unchecked(values: Vec<bool>) -> Self {
        SignCocycle { values }
    }

    pub fn check(&self, complex: &DeltaComplex) -> Result<()> {
        if self.values.len() != complex.count(1) {
            return Err(Error::InvalidCocycle("edge count mismatch".into()));
        }
        for t in 0..complex.count(2) {
            let f = complex.faces(2, t);
            if self.values[f[0]] ^ self.values[f[1]] ^ self.values[f[2]] {
                return Err(Error::InvalidCocycle(format!("coboundary nonzero on triangle {t}")));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn value(&self, edge: usize) -> bool {
        self.values[edge]
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| !v)
    }

    /// Monodromy sign carried by the leading edge `[v0 v1]` of a simplex.
    #[inline]
    pub fn leading_sign(&self, complex: &DeltaComplex, d: usize, s: usize) -> bool {
        d >= 1 && self.values[complex.edge(d, s, 0, 1)]
    }

    pub fn add(&self, other: &SignCocycle) -> SignCocycle {
        SignCocycle {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a ^ b).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> DeltaComplex {
        // edges [0,1], [0,2], [1,2]; faces listed as (∂0, ∂1) = (v1, v0)
        DeltaComplex::new(3, vec![vec![vec![1, 0], vec![2, 0], vec![2, 1]]]).unwrap()
    }

    #[test]
    fn vertex_lists_follow_face_maps() {
        let t = triangle();
        assert_eq!(t.vertices(1, 2), &[1, 2]);
        let filled =
            DeltaComplex::new(3, vec![vec![vec![1, 0], vec![2, 0], vec![2, 1]], vec![vec![2, 1, 0]]])
                .unwrap();
        assert_eq!(filled.vertices(2, 0), &[0, 1, 2]);
        assert_eq!(filled.edge(2, 0, 0, 2), 1);
        assert_eq!(filled.euler_characteristic(), 1);
    }

    #[test]
    fn rejects_out_of_range_faces() {
        let err = DeltaComplex::new(2, vec![vec![vec![2, 0]]]).unwrap_err();
        assert!(matches!(err, Error::InvalidComplex(_)));
    }

    #[test]
    fn rejects_disconnected() {
        let err = DeltaComplex::new(3, vec![vec![vec![1, 0]]]).unwrap_err();
        assert!(err.to_string().contains("connected"));
    }

    #[test]
    fn rejects_broken_identity() {
        // a triangle whose faces do not share vertices consistently
        let err = DeltaComplex::new(
            4,
            vec![vec![vec![1, 0], vec![2, 0], vec![3, 1]], vec![vec![2, 1, 0]]],
        )
        .unwrap_err();
        assert!(err.to_string().contains("identity"));
    }

    #[test]
    fn sign_cocycle_condition() {
        let filled =
            DeltaComplex::new(3, vec![vec![vec![1, 0], vec![2, 0], vec![2, 1]], vec![vec![2, 1, 0]]])
                .unwrap();
        assert!(SignCocycle::new(&filled, vec![true, false, false]).is_err());
        assert!(SignCocycle::new(&filled, vec![true, true, false]).is_ok());
    }
}
