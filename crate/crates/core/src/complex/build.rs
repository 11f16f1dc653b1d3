use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use super::{DeltaComplex, SignCocycle};
use crate::error::{Error, Result};

/// A dimension-preserving map of Δ-complexes that may collapse simplices;
/// collapsed (degenerate) images are `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    images: Vec<Vec<Option<usize>>>,
}

impl SimplicialMap {
    pub fn new(images: Vec<Vec<Option<usize>>>) -> Self {
        SimplicialMap { images }
    }

    pub fn image(&self, d: usize, s: usize) -> Option<usize> {
        self.images.get(d).and_then(|l| l[s])
    }

    pub fn source_count(&self, d: usize) -> usize {
        self.images.get(d).map_or(0, |l| l.len())
    }

    /// Pulls back a degree-d cochain; degenerate simplices receive `zero`.
    pub fn pullback<T: Clone + Send + Sync>(&self, d: usize, cochain: &[T], zero: T) -> Vec<T> {
        match self.images.get(d) {
            None => Vec::new(),
            Some(l) => l
                .iter()
                .map(|im| im.map_or_else(|| zero.clone(), |t| cochain[t].clone()))
                .collect(),
        }
    }

    pub fn pullback_sign(&self, w: &SignCocycle) -> SignCocycle {
        SignCocycle::from_values_unchecked(self.pullback(1, w.values(), false))
    }
}

fn sorted_simplices(facets: &[Vec<usize>]) -> Vec<BTreeSet<Vec<usize>>> {
    let top = facets.iter().map(|f| f.len()).max().unwrap_or(1) - 1;
    let mut levels: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); top + 1];
    for f in facets {
        let mut f = f.clone();
        f.sort_unstable();
        f.dedup();
        let k = f.len();
        for mask in 1u32..(1 << k) {
            let sub: Vec<usize> = (0..k).filter(|&j| mask & (1 << j) != 0).map(|j| f[j]).collect();
            levels[sub.len() - 1].insert(sub);
        }
    }
    levels
}

impl DeltaComplex {
    /// The ordered simplicial complex generated by the given facets, with
    /// vertices ordered by label and simplices sorted lexicographically.
    pub fn from_facets(facets: &[Vec<usize>]) -> Result<Self> {
        Self::from_facets_inner(facets, true)
    }

    fn from_facets_inner(facets: &[Vec<usize>], connected: bool) -> Result<Self> {
        if facets.is_empty() || facets.iter().any(|f| f.is_empty()) {
            return Err(Error::InvalidComplex("empty facet list".into()));
        }
        let levels = sorted_simplices(facets);
        let n = levels[0].len();
        if levels[0].iter().enumerate().any(|(i, v)| v[0] != i) {
            return Err(Error::InvalidComplex("vertex labels must be 0..n without gaps".into()));
        }
        let index: Vec<HashMap<&[usize], usize>> = levels
            .iter()
            .map(|l| l.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect())
            .collect();
        let mut faces = Vec::new();
        for d in 1..levels.len() {
            let lvl: Vec<Vec<usize>> = levels[d]
                .iter()
                .map(|vs| {
                    (0..=d)
                        .map(|i| {
                            let mut f = vs.clone();
                            f.remove(i);
                            index[d - 1][f.as_slice()]
                        })
                        .collect()
                })
                .collect();
            faces.push(lvl);
        }
        if connected {
            Self::new(n, faces)
        } else {
            Self::new_unchecked_connectivity(n, faces)
        }
    }
}

/// ∂Δ^{n+1}. For `n = 0` this is the (disconnected) two-point space.
pub fn build_sphere(n: usize) -> DeltaComplex {
    let facets: Vec<Vec<usize>> =
        (0..n + 2).map(|skip| (0..n + 2).filter(|&v| v != skip).collect()).collect();
    DeltaComplex::from_facets_inner(&facets, n > 0).expect("sphere is valid")
}

/// Boundary of the (n+1)-dimensional cross-polytope. Vertex `2i + e` is the
/// point `±e_i` (e = 0 for +, 1 for −).
pub fn cross_polytope_sphere(n: usize) -> DeltaComplex {
    let facets: Vec<Vec<usize>> = (0u32..(1 << (n + 1)))
        .map(|signs| (0..=n).map(|i| 2 * i + ((signs >> i) & 1) as usize).collect())
        .collect();
    DeltaComplex::from_facets_inner(&facets, n > 0).expect("cross-polytope is valid")
}

/// The triangle circle ∂Δ².
pub fn circle() -> DeltaComplex {
    build_sphere(1)
}

/// The 6-vertex triangulation of ℝP² (hemi-icosahedron).
pub fn rp2_six_vertex() -> DeltaComplex {
    let facets = [
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [0, 1, 5],
        [1, 2, 4],
        [2, 3, 5],
        [1, 3, 4],
        [2, 4, 5],
        [1, 3, 5],
    ];
    let facets: Vec<Vec<usize>> = facets.iter().map(|f| f.to_vec()).collect();
    DeltaComplex::from_facets(&facets).expect("hemi-icosahedron is valid")
}

/// A one-vertex, one-edge circle.
pub fn loop_circle() -> DeltaComplex {
    DeltaComplex::new(1, vec![vec![vec![0, 0]]]).expect("loop is valid")
}

/// Tⁿ as an n-fold product of one-vertex circles.
pub fn build_torus(n: usize) -> Result<DeltaComplex> {
    if n == 0 {
        return Ok(DeltaComplex::point());
    }
    let c = loop_circle();
    let mut t = c.clone();
    for _ in 1..n {
        t = product(&t, &c);
    }
    Ok(t)
}

/// A simplicial involution: images of simplices in every dimension together
/// with, for each simplex, where each of its vertex positions lands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Involution {
    maps: Vec<Vec<usize>>,
    perms: Option<Vec<Vec<Vec<u8>>>>,
}

impl Involution {
    /// Builds the involution induced by a vertex permutation of a simplicial
    /// complex.
    pub fn from_vertex_map(x: &DeltaComplex, vertex_map: &[usize]) -> Result<Self> {
        let n = x.count(0);
        if vertex_map.len() != n {
            return Err(Error::InvalidInvolution(format!(
                "vertex map has {} entries, complex has {n} vertices",
                vertex_map.len()
            )));
        }
        if let Some(v) = (0..n).find(|&v| vertex_map[v] >= n || vertex_map[vertex_map[v]] != v) {
            return Err(Error::InvalidInvolution(format!("vertex map is not an involution at {v}")));
        }
        if !x.is_simplicial() {
            return Err(Error::InvalidInvolution(
                "vertex maps are only meaningful on simplicial complexes".into(),
            ));
        }
        let mut lookup: HashMap<Vec<usize>, usize> = HashMap::new();
        for d in 0..=x.dim() {
            for s in 0..x.count(d) {
                let mut key = x.vertices(d, s).to_vec();
                key.sort_unstable();
                lookup.insert(key, s);
            }
        }
        let mut maps = Vec::with_capacity(x.dim() + 1);
        let mut perms = Vec::with_capacity(x.dim() + 1);
        let mut identity = true;
        for d in 0..=x.dim() {
            let mut m = Vec::with_capacity(x.count(d));
            let mut p = Vec::with_capacity(x.count(d));
            for s in 0..x.count(d) {
                let image: Vec<usize> = x.vertices(d, s).iter().map(|&v| vertex_map[v]).collect();
                let mut key = image.clone();
                key.sort_unstable();
                let t = *lookup.get(&key).ok_or_else(|| {
                    Error::InvalidInvolution(format!("{d}-simplex {s} has no image simplex"))
                })?;
                let tv = x.vertices(d, t);
                let perm: Vec<u8> = image
                    .iter()
                    .map(|v| tv.iter().position(|w| w == v).unwrap() as u8)
                    .collect();
                identity &= perm.iter().enumerate().all(|(i, &j)| i == j as usize);
                m.push(t);
                p.push(perm);
            }
            maps.push(m);
            perms.push(p);
        }
        Ok(Involution { maps, perms: if identity { None } else { Some(perms) } })
    }

    /// An involution given directly by simplex images that commute with
    /// every face map.
    pub fn from_simplex_maps(x: &DeltaComplex, maps: Vec<Vec<usize>>) -> Result<Self> {
        if maps.len() != x.dim() + 1 || (0..=x.dim()).any(|d| maps[d].len() != x.count(d)) {
            return Err(Error::InvalidInvolution("simplex map shape mismatch".into()));
        }
        for d in 0..=x.dim() {
            for s in 0..x.count(d) {
                let t = maps[d][s];
                if t >= x.count(d) || maps[d][t] != s {
                    return Err(Error::InvalidInvolution(format!(
                        "{d}-simplex {s}: map is not an involution"
                    )));
                }
                if d > 0 {
                    for i in 0..=d {
                        if maps[d - 1][x.face(d, s, i)] != x.face(d, t, i) {
                            return Err(Error::InvalidInvolution(format!(
                                "{d}-simplex {s}: map does not commute with face {i}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(Involution { maps, perms: None })
    }

    pub fn image(&self, d: usize, s: usize) -> usize {
        self.maps[d][s]
    }

    /// True when the map commutes with all face maps, so it acts on the
    /// Δ-complex without reordering vertices.
    pub fn is_order_preserving(&self) -> bool {
        self.perms.is_none()
    }

    fn perm(&self, d: usize, s: usize) -> Option<&[u8]> {
        self.perms.as_ref().map(|p| p[d][s].as_slice())
    }

    /// Rejects fixed vertices and simplices mapped onto themselves.
    pub fn check_free(&self) -> Result<()> {
        for (d, m) in self.maps.iter().enumerate() {
            if let Some(s) = (0..m.len()).find(|&s| m[s] == s) {
                return Err(if d == 0 {
                    Error::InvalidInvolution(format!("vertex {s} is fixed; the action is not free"))
                } else {
                    Error::InvalidInvolution(format!(
                        "{d}-simplex {s} is mapped to itself; the action is not free"
                    ))
                });
            }
        }
        Ok(())
    }

    /// The induced involution on a barycentric subdivision; always
    /// order-preserving.
    pub fn lift(&self, sd: &Subdivision) -> Involution {
        let maps = sd
            .flags
            .iter()
            .map(|level| {
                level
                    .par_iter()
                    .map(|f| {
                        let t = self.maps[f.dim][f.simplex];
                        let chain: Vec<u32> = match self.perm(f.dim, f.simplex) {
                            None => f.chain.clone(),
                            Some(p) => f.chain.iter().map(|&m| permute_mask(m, p)).collect(),
                        };
                        sd.index[&FlagKey { dim: f.dim, simplex: t, chain }]
                    })
                    .collect()
            })
            .collect();
        Involution { maps, perms: None }
    }

    /// The product involution `a × b` on a product complex; both factors must
    /// be order-preserving.
    pub fn product(p: &ProductComplex, a: &Involution, b: &Involution) -> Result<Involution> {
        if !a.is_order_preserving() || !b.is_order_preserving() {
            return Err(Error::Unsupported(
                "product involutions need order-preserving factors".into(),
            ));
        }
        let maps = p
            .entries
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|e| {
                        let key = ProdSimplex {
                            a: e.a,
                            s: a.maps[e.a][e.s],
                            b: e.b,
                            t: b.maps[e.b][e.t],
                            path: e.path.clone(),
                        };
                        p.index[&key]
                    })
                    .collect()
            })
            .collect();
        Ok(Involution { maps, perms: None })
    }
}

fn permute_mask(mask: u32, perm: &[u8]) -> u32 {
    let mut out = 0;
    for (j, &pj) in perm.iter().enumerate() {
        if mask & (1 << j) != 0 {
            out |= 1 << pj;
        }
    }
    out
}

/// Keeps the bits of `mask` lying in `within` and packs them to the bottom.
fn compress_mask(mask: u32, within: u32) -> u32 {
    let mut out = 0;
    let mut k = 0;
    let mut w = within;
    while w != 0 {
        let bit = w.trailing_zeros();
        if mask & (1 << bit) != 0 {
            out |= 1 << k;
        }
        k += 1;
        w &= w - 1;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct FlagKey {
    dim: usize,
    simplex: usize,
    chain: Vec<u32>,
}

/// A simplex of a barycentric subdivision: a simplex of the original complex
/// together with a strictly increasing chain of vertex-position sets ending
/// in the full set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    pub dim: usize,
    pub simplex: usize,
    pub chain: Vec<u32>,
}

/// A barycentric subdivision with its last-vertex map back to the original.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub complex: DeltaComplex,
    pub flags: Vec<Vec<Flag>>,
    /// Sends a flag to the face spanned by the last vertices of its chain.
    pub last_vertex: SimplicialMap,
    index: HashMap<FlagKey, usize>,
}

fn chains_ending_at(mask: u32) -> Vec<Vec<u32>> {
    // all chains F0 ⊊ … ⊊ Fk = mask of nonempty sets
    let mut out = vec![vec![mask]];
    let mut sub = (mask - 1) & mask;
    while sub != 0 {
        for mut c in chains_ending_at(sub) {
            c.push(mask);
            out.push(c);
        }
        sub = (sub - 1) & mask;
    }
    out
}

/// Barycentric subdivision of a Δ-complex.
pub fn barycentric_subdivide(x: &DeltaComplex) -> Subdivision {
    let top = x.dim();
    let chains_by_dim: Vec<Vec<Vec<Vec<u32>>>> = (0..=top)
        .map(|d| {
            let mut by_len = vec![Vec::new(); d + 1];
            let mut all = chains_ending_at((1u32 << (d + 1)) - 1);
            all.sort();
            for c in all {
                by_len[c.len() - 1].push(c);
            }
            by_len
        })
        .collect();
    let mut flags: Vec<Vec<Flag>> = vec![Vec::new(); top + 1];
    for (k, level) in flags.iter_mut().enumerate() {
        for d in k..=top {
            for s in 0..x.count(d) {
                for c in &chains_by_dim[d][k] {
                    level.push(Flag { dim: d, simplex: s, chain: c.clone() });
                }
            }
        }
    }
    let mut index = HashMap::new();
    for level in &flags {
        for (i, f) in level.iter().enumerate() {
            index.insert(FlagKey { dim: f.dim, simplex: f.simplex, chain: f.chain.clone() }, i);
        }
    }
    let faces: Vec<Vec<Vec<usize>>> = (1..=top)
        .map(|k| {
            flags[k]
                .par_iter()
                .map(|f| {
                    (0..=k)
                        .map(|i| {
                            let key = if i < k {
                                let mut chain = f.chain.clone();
                                chain.remove(i);
                                FlagKey { dim: f.dim, simplex: f.simplex, chain }
                            } else {
                                let g = f.chain[k - 1];
                                FlagKey {
                                    dim: g.count_ones() as usize - 1,
                                    simplex: x.restrict_mask(f.dim, f.simplex, g),
                                    chain: f.chain[..k].iter().map(|&m| compress_mask(m, g)).collect(),
                                }
                            };
                            index[&key]
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let last_vertex = SimplicialMap::new(
        flags
            .iter()
            .enumerate()
            .map(|(k, level)| {
                level
                    .iter()
                    .map(|f| {
                        let mut mask = 0u32;
                        for &m in &f.chain {
                            mask |= 1 << (31 - m.leading_zeros());
                        }
                        (mask.count_ones() as usize == k + 1)
                            .then(|| x.restrict_mask(f.dim, f.simplex, mask))
                    })
                    .collect()
            })
            .collect(),
    );
    let complex = DeltaComplex::new_unchecked_connectivity(x.count(0) + count_above_vertices(x), faces)
        .expect("subdivision of a valid complex is valid");
    Subdivision { complex, flags, last_vertex, index }
}

fn count_above_vertices(x: &DeltaComplex) -> usize {
    (1..=x.dim()).map(|d| x.count(d)).sum()
}

impl Subdivision {
    /// Index of the vertex of the subdivision at the barycentre of a simplex.
    pub fn barycentre(&self, d: usize, s: usize) -> usize {
        self.index[&FlagKey { dim: d, simplex: s, chain: vec![(1u32 << (d + 1)) - 1] }]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProdSimplex {
    pub a: usize,
    pub s: usize,
    pub b: usize,
    pub t: usize,
    /// Strictly increasing lattice path from (0,0) to (a,b).
    pub path: Vec<(u8, u8)>,
}

/// A product triangulation together with the description of its simplices.
#[derive(Clone, Debug)]
pub struct ProductComplex {
    pub complex: DeltaComplex,
    pub entries: Vec<Vec<ProdSimplex>>,
    index: HashMap<ProdSimplex, usize>,
}

fn lattice_paths(a: usize, b: usize, k: usize) -> Vec<Vec<(u8, u8)>> {
    fn go(i: usize, j: usize, a: usize, b: usize, left: usize, cur: &mut Vec<(u8, u8)>, out: &mut Vec<Vec<(u8, u8)>>) {
        if left == 0 {
            if i == a && j == b {
                out.push(cur.clone());
            }
            return;
        }
        // remaining steps must be able to reach (a, b)
        for (di, dj) in [(1, 0), (0, 1), (1, 1)] {
            let (ni, nj) = (i + di, j + dj);
            if ni > a || nj > b {
                continue;
            }
            let (ri, rj) = (a - ni, b - nj);
            if ri.max(rj) > left - 1 || ri + rj < left - 1 {
                continue;
            }
            cur.push((ni as u8, nj as u8));
            go(ni, nj, a, b, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if a.max(b) <= k && k <= a + b {
        let mut cur = vec![(0u8, 0u8)];
        go(0, 0, a, b, k, &mut cur, &mut out);
    }
    out.sort();
    out
}

impl ProductComplex {
    pub fn new(x: &DeltaComplex, y: &DeltaComplex) -> ProductComplex {
        let top = x.dim() + y.dim();
        let mut entries: Vec<Vec<ProdSimplex>> = vec![Vec::new(); top + 1];
        for (k, level) in entries.iter_mut().enumerate() {
            for a in 0..=x.dim().min(k) {
                for b in 0..=y.dim().min(k) {
                    let paths = lattice_paths(a, b, k);
                    if paths.is_empty() {
                        continue;
                    }
                    for s in 0..x.count(a) {
                        for t in 0..y.count(b) {
                            for p in &paths {
                                level.push(ProdSimplex { a, s, b, t, path: p.clone() });
                            }
                        }
                    }
                }
            }
        }
        let index: HashMap<ProdSimplex, usize> = entries
            .iter()
            .flat_map(|l| l.iter().enumerate().map(|(i, e)| (e.clone(), i)))
            .collect();
        let faces: Vec<Vec<Vec<usize>>> = (1..=top)
            .map(|k| {
                entries[k]
                    .par_iter()
                    .map(|e| (0..=k).map(|i| index[&product_face(x, y, e, i)]).collect())
                    .collect()
            })
            .collect();
        let complex = DeltaComplex::new_unchecked_connectivity(entries[0].len(), faces)
            .expect("product of valid complexes is valid");
        ProductComplex { complex, entries, index }
    }

    pub fn index_of(&self, e: &ProdSimplex) -> Option<usize> {
        self.index.get(e).copied()
    }
}

fn product_face(x: &DeltaComplex, y: &DeltaComplex, e: &ProdSimplex, i: usize) -> ProdSimplex {
    let (pi, pj) = e.path[i];
    let mut path = e.path.clone();
    path.remove(i);
    let (mut a, mut s, mut b, mut t) = (e.a, e.s, e.b, e.t);
    if !path.iter().any(|p| p.0 == pi) {
        s = x.face(a, s, pi as usize);
        a -= 1;
        for p in path.iter_mut() {
            if p.0 > pi {
                p.0 -= 1;
            }
        }
    }
    if !path.iter().any(|p| p.1 == pj) {
        t = y.face(b, t, pj as usize);
        b -= 1;
        for p in path.iter_mut() {
            if p.1 > pj {
                p.1 -= 1;
            }
        }
    }
    ProdSimplex { a, s, b, t, path }
}

/// Triangulation of |X| × |Y| by staircase paths.
pub fn product(x: &DeltaComplex, y: &DeltaComplex) -> DeltaComplex {
    ProductComplex::new(x, y).complex
}

/// Result of quotienting by a free involution.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub complex: DeltaComplex,
    /// Classifies the double cover `cover → complex`.
    pub cocycle: SignCocycle,
    /// The complex that was actually divided out (subdivided if needed).
    pub cover: DeltaComplex,
    pub projection: SimplicialMap,
    pub subdivided: bool,
}

/// Quotient of a complex by a free involution. A single barycentric
/// subdivision is applied first when the involution reorders vertices.
pub fn quotient_by_involution(x: &DeltaComplex, tau: &Involution) -> Result<Quotient> {
    tau.check_free()?;
    if tau.is_order_preserving() {
        quotient_order_preserving(x.clone(), tau, false)
    } else {
        let sd = barycentric_subdivide(x);
        let lifted = tau.lift(&sd);
        lifted.check_free()?;
        quotient_order_preserving(sd.complex, &lifted, true)
    }
}

fn quotient_order_preserving(cover: DeltaComplex, tau: &Involution, subdivided: bool) -> Result<Quotient> {
    let top = cover.dim();
    let mut q_of: Vec<Vec<usize>> = Vec::with_capacity(top + 1);
    let mut reps: Vec<Vec<usize>> = Vec::with_capacity(top + 1);
    for d in 0..=top {
        let n = cover.count(d);
        let mut q = vec![usize::MAX; n];
        let mut r = Vec::with_capacity(n / 2);
        for s in 0..n {
            let t = tau.image(d, s);
            if s < t {
                q[s] = r.len();
                q[t] = r.len();
                r.push(s);
            }
        }
        q_of.push(q);
        reps.push(r);
    }
    let faces: Vec<Vec<Vec<usize>>> = (1..=top)
        .map(|d| {
            reps[d]
                .iter()
                .map(|&s| cover.faces(d, s).iter().map(|&f| q_of[d - 1][f]).collect())
                .collect()
        })
        .collect();
    let complex = DeltaComplex::new(reps[0].len(), faces)?;
    let sheet = |v: usize| tau.image(0, v) < v;
    let cocycle_values: Vec<bool> = reps
        .get(1)
        .map(|r| {
            r.iter()
                .map(|&e| sheet(cover.face(1, e, 0)) ^ sheet(cover.face(1, e, 1)))
                .collect()
        })
        .unwrap_or_default();
    let cocycle = SignCocycle::new(&complex, cocycle_values)?;
    let projection =
        SimplicialMap::new(q_of.into_iter().map(|l| l.into_iter().map(Some).collect()).collect());
    Ok(Quotient { complex, cocycle, cover, projection, subdivided })
}

/// The antipodal quotient of the cross-polytope sphere.
pub fn rp_quotient(n: usize) -> Result<Quotient> {
    if n == 0 {
        return Err(Error::InvalidComplex("ℝPⁿ needs n ≥ 1".into()));
    }
    let s = cross_polytope_sphere(n);
    let antipode: Vec<usize> = (0..s.count(0)).map(|v| v ^ 1).collect();
    let tau = Involution::from_vertex_map(&s, &antipode)?;
    quotient_by_involution(&s, &tau)
}

/// ℝPⁿ with the cocycle of its double cover, which represents w₁ of the
/// tautological line bundle.
pub fn build_rp(n: usize) -> Result<(DeltaComplex, SignCocycle)> {
    let q = rp_quotient(n)?;
    Ok((q.complex, q.cocycle))
}

/// Circle with two edges from vertex 0 to vertex 1, and the reflection
/// exchanging the edges.
fn reflection_circle() -> (DeltaComplex, Involution) {
    let c = DeltaComplex::new(2, vec![vec![vec![1, 0], vec![1, 0]]]).expect("valid");
    let tau = Involution::from_simplex_maps(&c, vec![vec![0, 1], vec![1, 0]]).expect("valid");
    (c, tau)
}

/// Circle with edges 0→1 and 1→0, and the half rotation.
fn rotation_circle() -> (DeltaComplex, Involution) {
    let c = DeltaComplex::new(2, vec![vec![vec![1, 0], vec![0, 1]]]).expect("valid");
    let tau = Involution::from_simplex_maps(&c, vec![vec![1, 0], vec![1, 0]]).expect("valid");
    (c, tau)
}

/// Kₙ = Tⁿ/((z₁,…,z_{n−1},t) ∼ (z̄₁,…,z̄_{n−1},−t)) as a quotient.
pub fn klein_quotient(n: usize) -> Result<Quotient> {
    if n < 2 {
        return Err(Error::InvalidComplex(format!("Kₙ needs n ≥ 2, got {n}")));
    }
    let (r, refl) = reflection_circle();
    let (mut x, mut tau) = (r.clone(), refl.clone());
    for _ in 1..n - 1 {
        let p = ProductComplex::new(&x, &r);
        tau = Involution::product(&p, &tau, &refl)?;
        x = p.complex;
    }
    let (c, rot) = rotation_circle();
    let p = ProductComplex::new(&x, &c);
    let tau = Involution::product(&p, &tau, &rot)?;
    quotient_by_involution(&p.complex, &tau)
}

/// Kₙ with σ₁, the cocycle of the double cover Tⁿ → Kₙ.
pub fn build_klein(n: usize) -> Result<(DeltaComplex, SignCocycle)> {
    let q = klein_quotient(n)?;
    Ok((q.complex, q.cocycle))
}
