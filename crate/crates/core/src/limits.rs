//! Finite limits and image machinery: pullbacks, products, equalizers,
//! kernels, congruences, quotients, (regular epi, mono) factorizations and
//! the normality check for a backend.

use std::sync::Arc;

use serde::Serialize;

use crate::backend::Backend;
use crate::elemset::ElemSet;
use crate::error::{CatError, Result};
use crate::morphism::{compose, Morphism};
use crate::object::{FiniteObject, Obj};
use crate::subobject::{generated, normal_subobjects, Subobject};

/// Largest pointed set whose congruences are enumerated (Bell(12) ≈ 4.2M).
pub const MAX_PARTITION_SIZE: usize = 12;

#[derive(Debug, Clone)]
pub struct PullbackResult {
    pub apex: Obj,
    pub proj_left: Morphism,
    pub proj_right: Morphism,
    left: Morphism,
    right: Morphism,
    /// `index[x * |Y| + y]` is the apex element for the pair `(x, y)`.
    index: Vec<usize>,
}

impl PullbackResult {
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.proj_left
            .table()
            .iter()
            .copied()
            .zip(self.proj_right.table().iter().copied())
    }

    /// The unique morphism `t ↦ (a(t), b(t))` for a commuting cone.
    pub fn mediate(&self, a: &Morphism, b: &Morphism) -> Result<Morphism> {
        if a.dom() != b.dom() || a.cod() != self.left.dom() || b.cod() != self.right.dom() {
            return Err(CatError::precondition("cone legs do not match the cospan"));
        }
        if compose(&self.left, a)? != compose(&self.right, b)? {
            return Err(CatError::precondition("cone does not commute"));
        }
        let ny = self.right.dom().size();
        let map = (0..a.dom().size())
            .map(|t| self.index[a.apply(t) * ny + b.apply(t)])
            .collect();
        Ok(Morphism::new_unchecked(
            Arc::clone(a.dom()),
            Arc::clone(&self.apex),
            map,
        ))
    }
}

/// Pullback with the default size bound of the backend kind.
pub fn pullback(f: &Morphism, g: &Morphism) -> Result<PullbackResult> {
    pullback_within(f, g, f.dom().kind().default_size_bound())
}

/// Fiber product `{(x, y) : f(x) = g(y)}`, pairs ordered lexicographically.
pub fn pullback_within(f: &Morphism, g: &Morphism, bound: usize) -> Result<PullbackResult> {
    if f.cod() != g.cod() {
        return Err(CatError::CospanMismatch {
            left: f.cod().name().to_string(),
            right: g.cod().name().to_string(),
        });
    }
    let (x, y) = (f.dom(), g.dom());
    let mut fiber: Vec<Vec<usize>> = vec![Vec::new(); f.cod().size()];
    for yy in 0..y.size() {
        fiber[g.apply(yy)].push(yy);
    }
    let mut pairs = Vec::new();
    for xx in 0..x.size() {
        for &yy in &fiber[f.apply(xx)] {
            pairs.push((xx, yy));
        }
    }
    let name = if pairs.len() == 1 {
        "0".to_string()
    } else {
        format!("({}×_{}{})", x.name(), f.cod().name(), y.name())
    };
    if pairs.len() > bound {
        return Err(CatError::BoundExceeded {
            name,
            size: pairs.len(),
            bound,
        });
    }
    let ny = y.size();
    let mut index = vec![usize::MAX; x.size() * ny];
    for (i, &(a, b)) in pairs.iter().enumerate() {
        index[a * ny + b] = i;
    }
    let apex = pair_object(name, x, y, &pairs, &index);
    let proj_left = Morphism::new_unchecked(
        Arc::clone(&apex),
        Arc::clone(x),
        pairs.iter().map(|p| p.0).collect(),
    );
    let proj_right = Morphism::new_unchecked(
        Arc::clone(&apex),
        Arc::clone(y),
        pairs.iter().map(|p| p.1).collect(),
    );
    Ok(PullbackResult {
        apex,
        proj_left,
        proj_right,
        left: f.clone(),
        right: g.clone(),
        index,
    })
}

fn pair_object(name: String, x: &Obj, y: &Obj, pairs: &[(usize, usize)], index: &[usize]) -> Obj {
    let ny = y.size();
    let k = pairs.len();
    if !x.is_group() {
        return FiniteObject::assemble(name, x.kind(), k, None, None);
    }
    let mut table = Vec::with_capacity(k * k);
    for &(a1, b1) in pairs {
        for &(a2, b2) in pairs {
            table.push(index[x.op(a1, a2) * ny + y.op(b1, b2)]);
        }
    }
    let inverse = pairs
        .iter()
        .map(|&(a, b)| index[x.inv(a) * ny + y.inv(b)])
        .collect();
    FiniteObject::assemble(name, x.kind(), k, Some(table), Some(inverse))
}

#[derive(Debug, Clone)]
pub struct ProductResult {
    pub apex: Obj,
    pub proj_left: Morphism,
    pub proj_right: Morphism,
}

impl ProductResult {
    pub fn mediate(&self, a: &Morphism, b: &Morphism) -> Result<Morphism> {
        if a.dom() != b.dom() || a.cod() != self.proj_left.cod() || b.cod() != self.proj_right.cod()
        {
            return Err(CatError::precondition("cone legs do not match the product"));
        }
        let m = self.proj_right.cod().size();
        let map = (0..a.dom().size()).map(|t| a.apply(t) * m + b.apply(t)).collect();
        Ok(Morphism::new_unchecked(
            Arc::clone(a.dom()),
            Arc::clone(&self.apex),
            map,
        ))
    }
}

pub fn product(a: &Obj, b: &Obj, bound: usize) -> Result<ProductResult> {
    let name = format!("({}×{})", a.name(), b.name());
    if a.size() * b.size() > bound {
        return Err(CatError::BoundExceeded {
            name,
            size: a.size() * b.size(),
            bound,
        });
    }
    let apex = FiniteObject::direct_product(name, a, b)?;
    let m = b.size();
    let proj_left = Morphism::new_unchecked(
        Arc::clone(&apex),
        Arc::clone(a),
        (0..apex.size()).map(|i| i / m).collect(),
    );
    let proj_right = Morphism::new_unchecked(
        Arc::clone(&apex),
        Arc::clone(b),
        (0..apex.size()).map(|i| i % m).collect(),
    );
    Ok(ProductResult {
        apex,
        proj_left,
        proj_right,
    })
}

#[derive(Debug, Clone)]
pub struct EqualizerResult {
    pub sub: Subobject,
}

impl EqualizerResult {
    pub fn inclusion(&self) -> &Morphism {
        self.sub.inclusion()
    }

    pub fn mediate(&self, h: &Morphism) -> Result<Morphism> {
        self.sub
            .corestrict(h)
            .ok_or_else(|| CatError::precondition("morphism does not equalize the pair"))
    }
}

pub fn equalizer(f: &Morphism, g: &Morphism) -> Result<EqualizerResult> {
    if f.dom() != g.dom() || f.cod() != g.cod() {
        return Err(CatError::precondition("equalizer needs a parallel pair"));
    }
    let set = ElemSet::from_iter_in(
        f.dom().size(),
        (0..f.dom().size()).filter(|&x| f.apply(x) == g.apply(x)),
    );
    Ok(EqualizerResult {
        sub: Subobject::new_trusted(f.dom(), set),
    })
}

/// The inclusion of the fiber over the basepoint.
pub fn kernel(f: &Morphism) -> Morphism {
    kernel_subobject(f).inclusion().clone()
}

pub fn kernel_subobject(f: &Morphism) -> Subobject {
    let set = ElemSet::from_iter_in(
        f.dom().size(),
        (0..f.dom().size()).filter(|&x| f.apply(x) == 0),
    );
    Subobject::new_trusted(f.dom(), set)
}

/// An effective equivalence relation, stored as its partition into blocks
/// together with the quotient map it is the kernel pair of.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    on: Obj,
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
    quotient: Morphism,
}

impl Congruence {
    /// Validates that `blocks` partition the elements and are compatible
    /// with the operation.
    pub fn from_blocks(on: &Obj, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n = on.size();
        let mut block_of = vec![usize::MAX; n];
        for (i, b) in blocks.iter().enumerate() {
            for &x in b {
                if x >= n || block_of[x] != usize::MAX {
                    return Err(CatError::precondition("blocks do not partition the elements"));
                }
                block_of[x] = i;
            }
        }
        if block_of.contains(&usize::MAX) {
            return Err(CatError::precondition("blocks do not cover the elements"));
        }
        if on.is_group() {
            for a in 0..n {
                for b in 0..n {
                    let rep_a = blocks[block_of[a]][0];
                    let rep_b = blocks[block_of[b]][0];
                    if block_of[on.op(a, b)] != block_of[on.op(rep_a, rep_b)] {
                        return Err(CatError::precondition(
                            "partition is not compatible with the operation",
                        ));
                    }
                }
            }
        }
        Ok(Self::from_labels(on, &block_of))
    }

    /// Builds from a block labelling (assumed compatible), canonicalizing the
    /// block order by least element.
    fn from_labels(on: &Obj, labels: &[usize]) -> Self {
        let n = on.size();
        let mut relabel = std::collections::HashMap::new();
        let mut block_of = vec![0; n];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let next = relabel.len();
            let b = *relabel.entry(labels[x]).or_insert(next);
            if b == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[b].push(x);
            block_of[x] = b;
        }
        let k = blocks.len();
        let name = if k == n {
            on.name().to_string()
        } else if k == 1 {
            "0".to_string()
        } else if on.is_group() {
            format!("{}/{:?}", on.name(), blocks[0])
        } else {
            format!("{}/{:?}", on.name(), blocks)
        };
        let (table, inverse) = if on.is_group() {
            let mut t = Vec::with_capacity(k * k);
            for bi in &blocks {
                for bj in &blocks {
                    t.push(block_of[on.op(bi[0], bj[0])]);
                }
            }
            let inv = blocks.iter().map(|b| block_of[on.inv(b[0])]).collect();
            (Some(t), Some(inv))
        } else {
            (None, None)
        };
        let target = FiniteObject::assemble(name, on.kind(), k, table, inverse);
        let quotient = Morphism::new_unchecked(Arc::clone(on), target, block_of.clone());
        Congruence {
            on: Arc::clone(on),
            blocks,
            block_of,
            quotient,
        }
    }

    pub fn on(&self) -> &Obj {
        &self.on
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.block_of[x] == self.block_of[y]
    }

    /// `Δ`: every block a singleton.
    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.on.size()
    }

    /// `∇`: a single block.
    pub fn is_total(&self) -> bool {
        self.blocks.len() == 1
    }

    /// The regular epimorphism `A → A/E`.
    pub fn quotient(&self) -> &Morphism {
        &self.quotient
    }

    /// Block of the basepoint; a normal subobject in the group backends.
    pub fn kernel_block(&self) -> Subobject {
        Subobject::new_trusted(
            &self.on,
            ElemSet::from_iter_in(self.on.size(), self.blocks[0].iter().copied()),
        )
    }

    /// Pullback of the relation along `m × m`: the partition of `dom(m)`
    /// induced by `x ~ y ⇔ m(x) E m(y)`.
    pub fn restrict_along(&self, m: &Morphism) -> Result<Congruence> {
        if m.cod() != &self.on {
            return Err(CatError::precondition("restriction along a morphism into another object"));
        }
        let labels: Vec<usize> = m.table().iter().map(|&y| self.block_of[y]).collect();
        Ok(Congruence::from_labels(m.dom(), &labels))
    }

    /// The relation as a subobject of `A × A` with its two projections.
    pub fn as_relation(&self, bound: usize) -> Result<(Obj, Morphism, Morphism)> {
        let q = &self.quotient;
        let pb = pullback_within(q, q, bound)?;
        Ok((pb.apex.clone(), pb.proj_left, pb.proj_right))
    }
}

/// The kernel pair of `f`, as a congruence on its domain.
pub fn kernel_pair(f: &Morphism) -> Congruence {
    Congruence::from_labels(f.dom(), f.table())
}

/// All congruences on `a`, in canonical order (by number of blocks
/// descending, so `Δ` comes first and `∇` last).
pub fn congruences(a: &Obj) -> Result<Vec<Congruence>> {
    let n = a.size();
    let mut out = if a.is_group() {
        normal_subobjects(a)
            .iter()
            .map(|nsub| {
                let mut labels = vec![usize::MAX; n];
                for g in 0..n {
                    if labels[g] != usize::MAX {
                        continue;
                    }
                    for k in nsub.elems().iter() {
                        labels[a.op(g, k)] = g;
                    }
                }
                Congruence::from_labels(a, &labels)
            })
            .collect::<Vec<_>>()
    } else {
        if n > MAX_PARTITION_SIZE {
            return Err(CatError::BoundExceeded {
                name: format!("partitions of {}", a.name()),
                size: n,
                bound: MAX_PARTITION_SIZE,
            });
        }
        set_partitions(n)
            .into_iter()
            .map(|labels| Congruence::from_labels(a, &labels))
            .collect()
    };
    out.sort_by(|x, y| {
        y.blocks
            .len()
            .cmp(&x.blocks.len())
            .then_with(|| x.blocks.cmp(&y.blocks))
    });
    Ok(out)
}

/// Restricted growth strings of length `n`.
pub(crate) fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    fn rec(i: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=max + 1 {
            cur[i] = v;
            rec(i + 1, max.max(v), cur, out);
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    rec(1, 0, &mut cur, &mut out);
    out
}

#[derive(Debug, Clone)]
pub struct Factorization {
    pub regular_epi: Morphism,
    pub mono: Morphism,
    pub image: Obj,
}

/// Image factorization `f = mono ∘ regular_epi` through the set-theoretic
/// image.
pub fn factorize(f: &Morphism) -> Factorization {
    let sub = Subobject::image_of(f);
    let regular_epi = sub.corestrict(f).expect("image contains the image");
    Factorization {
        image: Arc::clone(sub.object()),
        mono: sub.inclusion().clone(),
        regular_epi,
    }
}

/// Cokernel of `k`: quotient by the normal closure of the image (groups), or
/// collapse of the image onto the basepoint (pointed sets).
pub fn cokernel(k: &Morphism) -> Morphism {
    let a = k.cod();
    let img = k.image();
    let n = a.size();
    if a.is_group() {
        let mut gens: Vec<usize> = Vec::new();
        for x in img.iter() {
            for g in 0..n {
                gens.push(a.op(a.op(g, x), a.inv(g)));
            }
        }
        gens.sort_unstable();
        gens.dedup();
        let closure = generated(a, &gens);
        let mut labels = vec![usize::MAX; n];
        for g in 0..n {
            if labels[g] != usize::MAX {
                continue;
            }
            for c in closure.iter() {
                labels[a.op(g, c)] = g;
            }
        }
        Congruence::from_labels(a, &labels).quotient().clone()
    } else {
        let labels: Vec<usize> = (0..n).map(|x| if img.contains(x) { 0 } else { x }).collect();
        Congruence::from_labels(a, &labels).quotient().clone()
    }
}

/// Whether `f` is (up to iso) the cokernel of its kernel.
pub fn is_normal_epi(f: &Morphism) -> bool {
    if !f.is_epi() {
        return false;
    }
    let q = cokernel(&kernel(f));
    kernel_pair(&q).blocks == kernel_pair(f).blocks
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalityReport {
    pub backend: String,
    pub objects: usize,
    pub pointed: bool,
    pub regular_epis_pullback_stable: bool,
    pub regular_epis_normal: bool,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<NormalityWitness>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormalityWitness {
    NotPointed { object: String },
    UnstableRegularEpi { epi: Morphism, along: Morphism },
    NonNormalRegularEpi { epi: Morphism },
}

/// Verifies pointedness, pullback stability of regular epis (hence of image
/// factorizations) and normality of regular epis over the registry.
pub fn check_normal_backend(backend: &Backend) -> Result<NormalityReport> {
    let objs = backend.objects();
    let zero = backend.zero();
    let mut report = NormalityReport {
        backend: format!("{}:{}", backend.kind(), backend.label()),
        objects: objs.len(),
        pointed: true,
        regular_epis_pullback_stable: true,
        regular_epis_normal: true,
        passed: true,
        witness: None,
    };
    for a in objs {
        if backend.hom(zero, a)?.len() != 1 || backend.hom(a, zero)?.len() != 1 {
            report.pointed = false;
            report.witness = Some(NormalityWitness::NotPointed {
                object: a.name().to_string(),
            });
            report.passed = false;
            return Ok(report);
        }
    }
    for a in objs {
        let into: Vec<Morphism> = backend.morphisms_into(a)?;
        let epis: Vec<&Morphism> = into.iter().filter(|e| e.is_epi()).collect();
        for e in &epis {
            if report.regular_epis_normal && !is_normal_epi(e) {
                report.regular_epis_normal = false;
                report.witness.get_or_insert(NormalityWitness::NonNormalRegularEpi {
                    epi: (*e).clone(),
                });
            }
            if !report.regular_epis_pullback_stable {
                continue;
            }
            for g in &into {
                if !pulled_back_projection_is_epi(e, g) {
                    report.regular_epis_pullback_stable = false;
                    report.witness.get_or_insert(NormalityWitness::UnstableRegularEpi {
                        epi: (*e).clone(),
                        along: g.clone(),
                    });
                    break;
                }
            }
        }
    }
    report.passed =
        report.pointed && report.regular_epis_pullback_stable && report.regular_epis_normal;
    Ok(report)
}

/// Whether the projection `X ×_A Y → Y` is surjective, enumerating the
/// pairs of the fiber product without building the apex object.
fn pulled_back_projection_is_epi(e: &Morphism, g: &Morphism) -> bool {
    let mut hit = ElemSet::empty(g.dom().size());
    let mut fiber: Vec<Vec<usize>> = vec![Vec::new(); e.cod().size()];
    for y in 0..g.dom().size() {
        fiber[g.apply(y)].push(y);
    }
    for x in 0..e.dom().size() {
        for &y in &fiber[e.apply(x)] {
            hit.insert(y);
        }
    }
    hit.len() == g.dom().size()
}
