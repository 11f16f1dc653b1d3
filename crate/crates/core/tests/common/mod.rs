#![allow(dead_code)]

use koahss::ahss::run;
use koahss::algebra::{apply_coboundary, Coeff};
use koahss::complex::{
    barycentric_subdivide, build_klein, build_rp, build_sphere, build_torus, circle, cross_polytope_sphere,
    klein_quotient, rp2_six_vertex, rp_quotient, DeltaComplex, SignCocycle,
};
use koahss::ops::{
    bockstein, bockstein_u1, coboundary_mod2, cup, cup_i, pullback, reduce_mod2, sq, CohomologyClass, Space,
    TwistData,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

pub type Check = Result<(), String>;

/// The small complexes checked exhaustively (each has at most 200 simplices).
pub fn small_spaces() -> Vec<(String, DeltaComplex)> {
    let mut v = vec![
        ("point".to_string(), DeltaComplex::point()),
        ("circle".into(), circle()),
        ("S2".into(), build_sphere(2)),
        ("S3".into(), build_sphere(3)),
        ("octahedron".into(), cross_polytope_sphere(2)),
        ("T2".into(), build_torus(2).unwrap()),
        ("RP2-six".into(), rp2_six_vertex()),
    ];
    for n in 1..=4 {
        v.push((format!("RP{n}"), build_rp(n).unwrap().0));
    }
    for n in 2..=3 {
        v.push((format!("K{n}"), build_klein(n).unwrap().0));
    }
    v
}

/// One representative sign cocycle per class of H¹(X; ℤ/2), the zero class
/// included.
pub fn all_twists(sp: &Space) -> Vec<SignCocycle> {
    let x = sp.complex();
    if x.dim() == 0 {
        return vec![SignCocycle::trivial(x)];
    }
    sp.mod2_classes(1)
        .unwrap()
        .iter()
        .map(|c| SignCocycle::new(x, c.mod2_bits().unwrap().to_vec()).unwrap())
        .collect()
}

fn unit(len: usize, i: usize) -> Vec<bool> {
    let mut v = vec![false; len];
    v[i] = true;
    v
}

fn xor(acc: &mut [bool], v: &[bool]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a ^= b;
    }
}

/// δ∘δ = 0 on an integral cochain, with or without a twist.
pub fn delta_squared(x: &DeltaComplex, tw: Option<&SignCocycle>, p: usize, c: &[BigInt]) -> Check {
    if p + 2 > x.dim() {
        return Ok(());
    }
    let dd = apply_coboundary(x, p + 1, tw, &apply_coboundary(x, p, tw, c));
    if dd.iter().all(|v| v.is_zero()) {
        Ok(())
    } else {
        Err(format!("δ² ≠ 0 in degree {p} (twisted: {})", tw.is_some()))
    }
}

/// δ² = 0 on every elementary cochain in every degree; by linearity this
/// covers all cochains.
pub fn delta_squared_exhaustive(x: &DeltaComplex, tw: Option<&SignCocycle>) -> Check {
    for p in 0..=x.dim() {
        for i in 0..x.count(p) {
            let mut c = vec![BigInt::zero(); x.count(p)];
            c[i] = BigInt::one();
            delta_squared(x, tw, p, &c)?;
        }
    }
    Ok(())
}

/// δ(a ∪ᵢ b) = a ∪ᵢ₋₁ b + b ∪ᵢ₋₁ a + δa ∪ᵢ b + a ∪ᵢ δb over ℤ/2.
pub fn cup_i_identity(x: &DeltaComplex, a: &[bool], p: usize, b: &[bool], q: usize) -> Check {
    let da = (p < x.dim()).then(|| coboundary_mod2(x, p, a));
    let db = (q < x.dim()).then(|| coboundary_mod2(x, q, b));
    for i in 0..=p + q {
        let n = p + q - i;
        if n + 1 > x.dim() {
            continue;
        }
        let lhs = coboundary_mod2(x, n, &cup_i(x, a, p, b, q, i));
        let mut rhs = vec![false; x.count(n + 1)];
        if i > 0 {
            xor(&mut rhs, &cup_i(x, a, p, b, q, i - 1));
            xor(&mut rhs, &cup_i(x, b, q, a, p, i - 1));
        }
        if let Some(da) = &da {
            xor(&mut rhs, &cup_i(x, da, p + 1, b, q, i));
        }
        if let Some(db) = &db {
            xor(&mut rhs, &cup_i(x, a, p, db, q + 1, i));
        }
        if lhs != rhs {
            return Err(format!("cup-{i} coboundary identity fails in degrees ({p}, {q})"));
        }
    }
    Ok(())
}

/// The cup-i identity on all pairs of elementary cochains; the identity is
/// bilinear, so this covers all pairs of cochains.
pub fn cup_i_identity_exhaustive(x: &DeltaComplex) -> Check {
    for p in 0..=x.dim() {
        for q in 0..=x.dim() {
            for i in 0..x.count(p) {
                let a = unit(x.count(p), i);
                for j in 0..x.count(q) {
                    cup_i_identity(x, &a, p, &unit(x.count(q), j), q)?;
                }
            }
        }
    }
    Ok(())
}

/// Sq⁰ = id, Sq¹ = r∘β, Sqᵖ = square and Sqᵏ = 0 for k > p on one class.
pub fn square_identities(sp: &Space, a: &CohomologyClass) -> Check {
    let p = a.degree;
    let e = |s: &str| format!("{s} fails in degree {p}");
    if sq(sp, 0, a).unwrap() != *a {
        return Err(e("Sq⁰ = id"));
    }
    if p < sp.dim() {
        let rb = reduce_mod2(sp, &bockstein(sp, a, None).unwrap()).unwrap();
        if sq(sp, 1, a).unwrap() != rb {
            return Err(e("Sq¹ = r∘β"));
        }
    }
    if 2 * p <= sp.dim() && sq(sp, p, a).unwrap() != cup(sp, a, a).unwrap() {
        return Err(e("Sqᵖ = cup square"));
    }
    if p + p < sp.dim() && !sq(sp, p + 1, a).unwrap().is_zero() {
        return Err(e("Sqᵏ = 0 above the degree"));
    }
    Ok(())
}

pub fn square_identities_exhaustive(sp: &Space) -> Check {
    for p in 0..=sp.dim() {
        for a in sp.mod2_classes(p).unwrap() {
            square_identities(sp, &a)?;
        }
    }
    Ok(())
}

/// Cartan formula Sqᵏ(ab) = Σ Sqⁱa · Sqᵏ⁻ⁱb on one pair of classes.
pub fn cartan(sp: &Space, a: &CohomologyClass, b: &CohomologyClass) -> Check {
    let (p, q) = (a.degree, b.degree);
    if p + q > sp.dim() {
        return Ok(());
    }
    let ab = cup(sp, a, b).unwrap();
    for k in 0..=(p + q) {
        if p + q + k > sp.dim() {
            break;
        }
        let lhs = sq(sp, k, &ab).unwrap();
        let mut rhs = sp.zero(Coeff::Z2, None, p + q + k).unwrap();
        for i in 0..=k {
            let term = cup(sp, &sq(sp, i, a).unwrap(), &sq(sp, k - i, b).unwrap()).unwrap();
            rhs = sp.add(&rhs, &term).unwrap();
        }
        if lhs != rhs {
            return Err(format!("Cartan fails for Sq^{k} in degrees ({p}, {q})"));
        }
    }
    Ok(())
}

pub fn cartan_exhaustive(sp: &Space) -> Check {
    for p in 0..=sp.dim() {
        for q in 0..=sp.dim() - p {
            for a in sp.mod2_classes(p).unwrap() {
                for b in sp.mod2_classes(q).unwrap() {
                    cartan(sp, &a, &b)?;
                }
            }
        }
    }
    Ok(())
}

/// Runs the spectral sequence and checks that every pair of consecutive
/// computed differentials composes to zero.
pub fn square_zero(sp: &Space, tw: &TwistData) -> Check {
    let st = run(sp, tw).map_err(|e| format!("AHSS run failed: {e}"))?;
    st.check_square_zero().map_err(|e| e.to_string())
}

/// Sq commutes with pullback along the double covers Sⁿ → ℝPⁿ (n ≤ 3),
/// K₂ → K₂ and K₃ → K₃, and along the last-vertex map of a barycentric
/// subdivision of ℝP² and K₂.
pub fn naturality_exhaustive() -> Check {
    let mut pairs = Vec::new();
    for n in 1..=3 {
        let q = rp_quotient(n).unwrap();
        pairs.push((format!("cover of RP{n}"), q.cover, q.complex, q.projection));
    }
    for n in 2..=3 {
        let q = klein_quotient(n).unwrap();
        pairs.push((format!("cover of K{n}"), q.cover, q.complex, q.projection));
    }
    for (name, x) in [("RP2", build_rp(2).unwrap().0), ("K2", build_klein(2).unwrap().0)] {
        let sd = barycentric_subdivide(&x);
        pairs.push((format!("subdivision of {name}"), sd.complex, x, sd.last_vertex));
    }
    for (name, src, tgt, f) in pairs {
        let (s, t) = (Space::new(src), Space::new(tgt));
        for p in 0..=t.dim() {
            for a in t.mod2_classes(p).unwrap() {
                let up = pullback(&f, &s, &t, &a).unwrap();
                for k in 0..=t.dim() - p {
                    let lhs = pullback(&f, &s, &t, &sq(&t, k, &a).unwrap()).unwrap();
                    if lhs != sq(&s, k, &up).unwrap() {
                        return Err(format!("Sq^{k} not natural along {name} in degree {p}"));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Additive order of an integral class, `None` when it has infinite order.
pub fn class_order(sp: &Space, a: &CohomologyClass) -> Option<BigInt> {
    let g = sp.int_cohomology(a.degree, a.twist.as_ref()).group.clone();
    let coords = g.normalize(a.plain_coords().unwrap());
    let mut order = BigInt::one();
    for (c, r) in coords.iter().zip(g.relation_orders()) {
        if c.is_zero() {
            continue;
        }
        if r.is_zero() {
            return None;
        }
        order = order.lcm(&(&r / c.gcd(&r)));
    }
    Some(order)
}

/// UCT for the flat rows: Hᵖ(ℚ/ℤ_σ) has divisible rank = rank Hᵖ(ℤ_σ) and
/// finite part ≅ tors Hᵖ⁺¹(ℤ_σ), and β_U(1) sends each finite generator to
/// a class of the same order.
pub fn flat_uct(sp: &Space, tw: Option<&SignCocycle>) -> Check {
    for p in 0..=sp.dim() {
        let g = sp.qmodz_group(p, tw);
        let here = sp.int_cohomology(p, tw).group.clone();
        let next = if p < sp.dim() { sp.int_cohomology(p + 1, tw).group.torsion.clone() } else { Vec::new() };
        if g.divisible_rank != here.free_rank || g.finite.torsion != next {
            return Err(format!("UCT fails in degree {p}: {g} vs rank {} torsion {next:?}", here.free_rank));
        }
        for (gen, ord) in sp.generators(Coeff::QmodZ, tw, p).unwrap().iter().zip(&g.finite.torsion) {
            let b = bockstein_u1(sp, gen).unwrap();
            if class_order(sp, &b).as_ref() != Some(ord) {
                return Err(format!("β_U(1) of a degree-{p} generator of order {ord} has order {:?}", class_order(sp, &b)));
            }
        }
    }
    Ok(())
}
