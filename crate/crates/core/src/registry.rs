//! Built-in objects and named universes.

use std::collections::BTreeSet;

use crate::backend::Backend;
use crate::elemset::ElemSet;
use crate::error::{CatError, Result};
use crate::morphism::Morphism;
use crate::object::{BackendKind, FiniteObject, Obj};
use crate::subobject::Subobject;

pub const UNIVERSES: &[&str] = &[
    "trivial",
    "z5",
    "z4-chain",
    "s3-subgroups",
    "s4-subgroups",
    "a5-subgroups",
    "groups-le-8",
    "sweep-le-24",
    "pset-small",
];

const LIMIT: usize = 60;

/// Elements of the permutation group generated by `gens`, in the order
/// used by [`FiniteObject::from_permutations`].
pub fn permutation_elements(degree: usize, gens: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let id: Vec<usize> = (0..degree).collect();
    let mut seen = BTreeSet::from([id.clone()]);
    let mut stack = vec![id];
    while let Some(p) = stack.pop() {
        for g in gens {
            let q: Vec<usize> = (0..degree).map(|i| p[g[i]]).collect();
            if seen.insert(q.clone()) {
                stack.push(q);
            }
        }
    }
    seen.into_iter().collect()
}

/// Index of `perm` in the permutation group generated by `gens`.
pub fn permutation_index(degree: usize, gens: &[Vec<usize>], perm: &[usize]) -> Option<usize> {
    permutation_elements(degree, gens)
        .iter()
        .position(|p| p.as_slice() == perm)
}

fn cycle(degree: usize, points: &[usize]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..degree).collect();
    for (i, &a) in points.iter().enumerate() {
        p[a] = points[(i + 1) % points.len()];
    }
    p
}

fn product(degree: usize, cycles: &[&[usize]]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..degree).collect();
    for c in cycles {
        let q = cycle(degree, c);
        p = (0..degree).map(|i| q[p[i]]).collect();
    }
    p
}

pub fn symmetric_generators(n: usize) -> Vec<Vec<usize>> {
    let all: Vec<usize> = (0..n).collect();
    vec![cycle(n, &[0, 1]), cycle(n, &all)]
}

pub fn alternating_generators(n: usize) -> Vec<Vec<usize>> {
    (2..n).map(|k| cycle(n, &[0, 1, k])).collect()
}

pub fn symmetric(n: usize) -> Obj {
    FiniteObject::from_permutations(format!("S{n}"), BackendKind::Group, n, &symmetric_generators(n), 720)
        .expect("symmetric group")
}

pub fn alternating(n: usize) -> Obj {
    FiniteObject::from_permutations(format!("A{n}"), BackendKind::Group, n, &alternating_generators(n), 360)
        .expect("alternating group")
}

/// Dihedral group of order `2n` acting on an `n`-gon.
pub fn dihedral(n: usize) -> Obj {
    let all: Vec<usize> = (0..n).collect();
    let flip: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    FiniteObject::from_permutations(format!("D{n}"), BackendKind::Group, n, &[cycle(n, &all), flip], LIMIT)
        .expect("dihedral group")
}

pub fn cyclic(kind: BackendKind, n: usize) -> Obj {
    let name = if n == 1 { "0".to_string() } else { format!("Z{n}") };
    FiniteObject::cyclic(name, kind, n).expect("cyclic group")
}

type Mat = (bool, [u8; 4]);

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let (x, y) = (a.1, b.1);
    let m = [
        (x[0] * y[0] + x[1] * y[2]) % 3,
        (x[0] * y[1] + x[1] * y[3]) % 3,
        (x[2] * y[0] + x[3] * y[2]) % 3,
        (x[2] * y[1] + x[3] * y[3]) % 3,
    ];
    (m != [1, 0, 0, 1], m)
}

/// Subgroup of `SL(2, 3)` generated by the given matrices (row-major).
fn sl23_subgroup(name: &str, gens: &[[u8; 4]]) -> Obj {
    // the flag sorts the identity first
    let gens: Vec<Mat> = gens.iter().map(|&g| (true, g)).collect();
    FiniteObject::from_generators(name, BackendKind::Group, (false, [1, 0, 0, 1]), &gens, mat_mul, LIMIT)
        .expect("matrix group")
}

pub fn quaternion() -> Obj {
    sl23_subgroup("Q8", &[[0, 1, 2, 0], [1, 1, 1, 2]])
}

pub fn sl23() -> Obj {
    sl23_subgroup("SL23", &[[1, 1, 0, 1], [1, 0, 1, 1]])
}

fn abelian_product(kind: BackendKind, name: &str, orders: &[usize]) -> Obj {
    let mut acc = cyclic(kind, orders[0]);
    for &n in &orders[1..] {
        acc = FiniteObject::direct_product(name, &acc, &cyclic(kind, n)).expect("product");
    }
    acc.renamed(name)
}

/// Display name for a small group, from its isomorphism type where the
/// order and element statistics pin it down.
pub fn type_name(g: &Obj) -> String {
    let n = g.size();
    if n == 1 {
        return "0".into();
    }
    if !g.is_group() {
        return format!("P{n}");
    }
    let orders: Vec<usize> = (0..n).map(|x| g.element_order(x)).collect();
    let exponent = orders.iter().copied().fold(1, lcm);
    let involutions = orders.iter().filter(|&&o| o == 2).count();
    if orders.contains(&n) {
        return format!("Z{n}");
    }
    if g.is_commutative() {
        return match (n, exponent) {
            (4, 2) => "V4".into(),
            (8, 4) => "Z2xZ4".into(),
            (8, 2) => "Z2^3".into(),
            (9, 3) => "Z3xZ3".into(),
            (12, 6) => "Z2xZ6".into(),
            _ => format!("Ab{n}"),
        };
    }
    match (n, involutions) {
        (6, _) => "S3".into(),
        (8, 5) => "D4".into(),
        (8, 1) => "Q8".into(),
        (10, _) => "D5".into(),
        (12, 3) => "A4".into(),
        (12, 7) => "D6".into(),
        (24, 9) => "S4".into(),
        (24, 1) => "SL23".into(),
        (60, 15) => "A5".into(),
        _ => format!("G{n}"),
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Registers `obj` under a free variant of `name`, returning the handle.
fn register_named(backend: &mut Backend, obj: &Obj, name: String) -> Result<Obj> {
    if let Some(i) = backend.index_of(obj) {
        return Ok(backend.objects()[i].clone());
    }
    let mut name = name;
    while backend.find(&name).is_some() {
        name.push('\'');
    }
    backend.register(obj.renamed(name))
}

/// Registers `obj` and all its subobjects, naming them with `namer`
/// (defaulting to [`type_name`]).
pub fn register_with_subobjects(
    backend: &mut Backend,
    obj: &Obj,
    namer: &dyn Fn(&Subobject) -> Option<String>,
) -> Result<()> {
    let subs = crate::subobject::subobjects(obj);
    // the whole object first keeps its own name
    register_named(backend, obj, obj.name().to_string())?;
    for sub in &subs {
        let name = namer(sub).unwrap_or_else(|| type_name(sub.object()));
        register_named(backend, sub.object(), name)?;
    }
    Ok(())
}

fn no_names(_: &Subobject) -> Option<String> {
    None
}

fn require(kind: BackendKind, allowed: &[BackendKind], name: &str) -> Result<()> {
    if allowed.contains(&kind) {
        Ok(())
    } else {
        Err(CatError::precondition(format!(
            "universe `{name}` is not available for backend {kind}"
        )))
    }
}

/// Groups of order at most 8, one per isomorphism type.
pub fn groups_le_8(kind: BackendKind) -> Vec<Obj> {
    let mut out: Vec<Obj> = (1..=8).map(|n| cyclic(kind, n)).collect();
    out.push(abelian_product(kind, "V4", &[2, 2]));
    out.push(abelian_product(kind, "Z2xZ4", &[2, 4]));
    out.push(abelian_product(kind, "Z2^3", &[2, 2, 2]));
    if kind == BackendKind::Group {
        out.push(symmetric(3));
        out.push(dihedral(4));
        out.push(quaternion());
    }
    out
}

/// The groups of order at most 24 shipped with the tool.
pub fn groups_le_24() -> Vec<Obj> {
    let kind = BackendKind::Group;
    let mut out: Vec<Obj> = (2..=12).map(|n| cyclic(kind, n)).collect();
    out.push(abelian_product(kind, "V4", &[2, 2]));
    out.push(abelian_product(kind, "Z2xZ4", &[2, 4]));
    out.push(abelian_product(kind, "Z2^3", &[2, 2, 2]));
    out.push(abelian_product(kind, "Z3xZ3", &[3, 3]));
    out.push(abelian_product(kind, "Z2xZ6", &[2, 6]));
    out.push(symmetric(3));
    out.push(dihedral(4));
    out.push(quaternion());
    out.push(dihedral(5));
    out.push(alternating(4));
    out.push(dihedral(6));
    out.push(symmetric(4));
    out.push(sl23());
    out
}

fn s3_names(sub: &Subobject) -> Option<String> {
    Some(
        match sub.size() {
            1 => "0",
            2 => "S2",
            3 => "A3",
            _ => "S3",
        }
        .into(),
    )
}

/// Populates `base` (which fixes the backend kind and bounds) with a named
/// universe.
pub fn universe(name: &str, base: Backend) -> Result<Backend> {
    use BackendKind::*;
    let kind = base.kind();
    let mut b = base.with_label(name);
    match name {
        "trivial" => {}
        "z5" => {
            require(kind, &[Group, AbelianGroup], name)?;
            b.register(cyclic(kind, 5))?;
        }
        "z4-chain" => {
            require(kind, &[Group, AbelianGroup], name)?;
            b.register(cyclic(kind, 2))?;
            b.register(cyclic(kind, 4))?;
        }
        "s3-subgroups" => {
            require(kind, &[Group], name)?;
            register_with_subobjects(&mut b, &symmetric(3), &s3_names)?;
        }
        "s4-subgroups" => {
            require(kind, &[Group], name)?;
            register_with_subobjects(&mut b, &symmetric(4), &no_names)?;
        }
        "a5-subgroups" => {
            require(kind, &[Group], name)?;
            register_with_subobjects(&mut b, &alternating(5), &no_names)?;
        }
        "groups-le-8" => {
            require(kind, &[Group, AbelianGroup], name)?;
            b.register_all(groups_le_8(kind))?;
        }
        "sweep-le-24" => {
            require(kind, &[Group], name)?;
            for g in groups_le_24() {
                if g.size() <= b.size_bound() {
                    register_with_subobjects(&mut b, &g, &no_names)?;
                } else {
                    b.check_size(&g)?;
                }
            }
        }
        "pset-small" => {
            require(kind, &[PointedSet], name)?;
            for n in 2..=4 {
                b.register(FiniteObject::pointed_set(format!("P{n}"), n)?)?;
            }
        }
        _ => {
            return Err(CatError::UnknownName {
                what: "universe",
                name: name.to_string(),
            })
        }
    }
    Ok(b)
}

/// Convenience: a named universe with default bounds.
pub fn default_universe(name: &str, kind: BackendKind) -> Result<Backend> {
    universe(name, Backend::new(kind))
}

/// The inclusion of the subobject with the given elements, with domain
/// replaced by its registered twin when there is one.
pub fn inclusion(backend: &Backend, parent: &Obj, elems: &[usize]) -> Result<Morphism> {
    let parent = backend.canonical(parent);
    let sub = Subobject::new(&parent, ElemSet::from_iter_in(parent.size(), elems.iter().copied()))?;
    let twin = backend.canonical(sub.object());
    Ok(sub.with_object(&twin).inclusion().clone())
}

fn named(backend: &Backend, name: &str) -> Result<Obj> {
    backend.find(name).cloned().ok_or_else(|| CatError::UnknownName {
        what: "object",
        name: name.to_string(),
    })
}

/// The cospan `A3 → S3 ← S2` inside the `s3-subgroups` universe.
pub fn s3_cospan(backend: &Backend) -> Result<(Morphism, Morphism)> {
    let s3 = named(backend, "S3")?;
    let gens = symmetric_generators(3);
    let idx = |p: &[usize]| permutation_index(3, &gens, p).expect("element of S3");
    let a3 = inclusion(backend, &s3, &[0, idx(&cycle(3, &[0, 1, 2])), idx(&cycle(3, &[0, 2, 1]))])?;
    let s2 = inclusion(backend, &s3, &[0, idx(&cycle(3, &[0, 1]))])?;
    Ok((a3, s2))
}

/// The socle inclusion `Z2 → Z4` inside the `z4-chain` universe.
pub fn socle(backend: &Backend) -> Result<Morphism> {
    let z4 = named(backend, "Z4")?;
    inclusion(backend, &z4, &[0, 2])
}

/// The inclusions `Z2 → S3 → A5` with `S3 = ⟨(0 1 2), (0 1)(3 4)⟩` and
/// `Z2 = ⟨(0 1)(3 4)⟩`, inside the `a5-subgroups` universe.
pub fn a5_chain(backend: &Backend) -> Result<(Morphism, Morphism)> {
    let a5 = named(backend, "A5")?;
    let gens = alternating_generators(5);
    let idx = |p: &[usize]| permutation_index(5, &gens, p).expect("element of A5");
    let r = product(5, &[&[0, 1, 2]]);
    let s = product(5, &[&[0, 1], &[3, 4]]);
    let a5_canon = backend.canonical(&a5);
    let s3_set = crate::subobject::generated(&a5_canon, &[idx(&r), idx(&s)]);
    let m = inclusion(backend, &a5, &s3_set.to_vec())?;
    // position of s inside the induced S3
    let pos = m
        .table()
        .iter()
        .position(|&e| e == idx(&s))
        .expect("s lies in S3");
    let m_prime = inclusion(backend, m.dom(), &[0, pos])?;
    Ok((m_prime, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_orders() {
        assert_eq!(symmetric(4).size(), 24);
        assert_eq!(alternating(5).size(), 60);
        assert_eq!(dihedral(6).size(), 12);
        assert_eq!(quaternion().size(), 8);
        assert_eq!(sl23().size(), 24);
    }

    #[test]
    fn type_names() {
        let names: Vec<String> = groups_le_24().iter().map(type_name).collect();
        for expected in ["Z7", "V4", "Z2xZ4", "Z2^3", "Z3xZ3", "S3", "D4", "Q8", "D5", "A4", "D6", "S4", "SL23"] {
            assert!(names.iter().any(|n| n == expected), "{expected} missing from {names:?}");
        }
        assert!(names.iter().any(|n| n == "Z2xZ6"));
    }

    #[test]
    fn s3_universe_names() {
        let b = default_universe("s3-subgroups", BackendKind::Group).unwrap();
        let names: Vec<&str> = b.objects().iter().map(|o| o.name()).collect();
        assert_eq!(names, vec!["0", "S3", "S2", "A3"]);
        let (a3, s2) = s3_cospan(&b).unwrap();
        assert_eq!(a3.dom().name(), "A3");
        assert_eq!(s2.dom().name(), "S2");
    }

    #[test]
    fn a5_chain_is_a_chain_of_monos() {
        let b = default_universe("a5-subgroups", BackendKind::Group).unwrap();
        let (mp, m) = a5_chain(&b).unwrap();
        assert_eq!(mp.dom().size(), 2);
        assert_eq!(m.dom().size(), 6);
        assert_eq!(type_name(m.dom()), "S3");
        assert!(crate::morphism::compose(&m, &mp).unwrap().is_mono());
    }

    #[test]
    fn unknown_universe() {
        assert!(matches!(
            default_universe("nope", BackendKind::Group),
            Err(CatError::UnknownName { .. })
        ));
    }

    #[test]
    fn s4_subgroup_universe_registers_every_subgroup_type() {
        let b = default_universe("s4-subgroups", BackendKind::Group).unwrap();
        let mut types: Vec<String> = b.objects().iter().map(type_name).collect();
        types.sort();
        types.dedup();
        assert_eq!(types, vec!["0", "A4", "D4", "S3", "S4", "V4", "Z2", "Z3", "Z4"]);
    }
}
