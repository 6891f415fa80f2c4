//! Seeded generators for small random fixtures.
//!
//! Test infrastructure, not part of the library contract: the property and
//! acceptance suites need a steady supply of *lawful* categories,
//! profunctors, and graded profunctors, and rejection-sampling raw tables
//! against the validators would almost never succeed.  Every generator here
//! is lawful by construction:
//!
//! * categories are free categories on a random DAG of edges, quotiented by
//!   a random batch of parallel-path equations closed into a congruence;
//! * profunctors are sums of hom blocks `B(-, b₀) × A(a₀, =)` (functorial
//!   because composition is), optionally quotiented by random element
//!   fusions closed under the actions;
//! * graded profunctors reuse the profunctor generator over the
//!   materialized word category, which is exactly what a graded profunctor
//!   is underneath.
//!
//! All draws are deterministic per seed.

use crate::doctrine::{Doctrine, SCategory, Word};
use crate::fincat::{FinCategory, Functor, Mor};
use crate::ids::{ElemId, MorId, ObjId};
use crate::kleisli::GradedProfunctor;
use crate::profunctor::Profunctor;
use crate::theory::enumerate_functors;
use crate::util::{esc, UnionFind};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Fresh deterministic generator for a test case.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Size knobs for [`category`].
#[derive(Debug, Clone)]
pub struct CatGen {
    pub max_objects: usize,
    pub max_edges: usize,
    pub max_equations: usize,
    /// Draws whose quotient still has a hom-set above this are rejected.
    pub max_hom: usize,
}

impl Default for CatGen {
    fn default() -> Self {
        CatGen {
            max_objects: 4,
            max_edges: 5,
            max_equations: 2,
            max_hom: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Path {
    src: usize,
    dst: usize,
    edges: Vec<usize>,
}

fn path_id(p: &Path, objects: &[ObjId], edges: &[(usize, usize)]) -> MorId {
    if p.edges.is_empty() {
        MorId::new(format!("id_{}", objects[p.src]))
    } else {
        let _ = edges;
        MorId::new(
            p.edges
                .iter()
                .map(|e| format!("e{e}"))
                .collect::<Vec<_>>()
                .join("."),
        )
    }
}

/// A random lawful category: free on a DAG, quotiented by a congruence.
pub fn category(rng: &mut impl Rng, cfg: &CatGen) -> Arc<FinCategory> {
    loop {
        let n = rng.gen_range(1..=cfg.max_objects);
        let objects: Vec<ObjId> = (0..n)
            .map(|i| ObjId::new(((b'a' + i as u8) as char).to_string()))
            .collect();
        let n_edges = if n < 2 { 0 } else { rng.gen_range(0..=cfg.max_edges) };
        let edges: Vec<(usize, usize)> = (0..n_edges)
            .map(|_| {
                let i = rng.gen_range(0..n - 1);
                let j = rng.gen_range(i + 1..n);
                (i, j)
            })
            .collect();

        // All paths in the DAG, identities included.  Acyclicity bounds the
        // search; edge indices in traversal order (first edge applied first).
        let mut paths: Vec<Path> = Vec::new();
        for src in 0..n {
            let mut stack = vec![Path {
                src,
                dst: src,
                edges: Vec::new(),
            }];
            while let Some(p) = stack.pop() {
                for (e, &(i, j)) in edges.iter().enumerate() {
                    if i == p.dst {
                        let mut q = p.clone();
                        q.edges.push(e);
                        q.dst = j;
                        stack.push(q);
                    }
                }
                paths.push(p);
            }
        }
        paths.sort_by_key(|p| path_id(p, &objects, &edges));
        let index: BTreeMap<Vec<usize>, usize> = paths
            .iter()
            .enumerate()
            .map(|(i, p)| (p.edges.clone(), i))
            .collect();

        // Random parallel-path equations, closed into a congruence by
        // worklist: merged paths stay merged after composing either side
        // with any edge.
        let mut parallel: Vec<(usize, usize)> = Vec::new();
        for i in 0..paths.len() {
            for j in i + 1..paths.len() {
                let (p, q) = (&paths[i], &paths[j]);
                if p.src == q.src && p.dst == q.dst && !p.edges.is_empty() && !q.edges.is_empty() {
                    parallel.push((i, j));
                }
            }
        }
        let mut uf = UnionFind::new(paths.len());
        let mut work: Vec<(usize, usize)> = Vec::new();
        for _ in 0..rng.gen_range(0..=cfg.max_equations) {
            if let Some(&(i, j)) = parallel.choose(rng) {
                work.push((i, j));
            }
        }
        while let Some((i, j)) = work.pop() {
            if uf.same(i, j) {
                continue;
            }
            uf.union(i, j);
            for (e, &(s, d)) in edges.iter().enumerate() {
                if d == paths[i].src {
                    let pre = |k: usize| {
                        let mut es = vec![e];
                        es.extend(&paths[k].edges);
                        index[&es]
                    };
                    work.push((pre(i), pre(j)));
                }
                if s == paths[i].dst {
                    let post = |k: usize| {
                        let mut es = paths[k].edges.clone();
                        es.push(e);
                        index[&es]
                    };
                    work.push((post(i), post(j)));
                }
            }
        }

        // Quotient: one morphism per class, named by its least member.
        let mut rep: BTreeMap<usize, MorId> = BTreeMap::new();
        for (i, p) in paths.iter().enumerate() {
            let id = path_id(p, &objects, &edges);
            let slot = rep.entry(uf.find(i)).or_insert_with(|| id.clone());
            if id < *slot {
                *slot = id;
            }
        }
        let mors: Vec<Mor> = rep
            .iter()
            .map(|(&c, id)| Mor {
                id: id.clone(),
                src: objects[paths[c].src].clone(),
                dst: objects[paths[c].dst].clone(),
            })
            .collect();
        let identity: Vec<(ObjId, MorId)> = (0..n)
            .map(|o| {
                let i = index[&Vec::new()]; // placeholder; fixed below
                let _ = i;
                (
                    objects[o].clone(),
                    rep[&uf.find(
                        *index
                            .get(&Vec::new())
                            .filter(|_| paths[index[&Vec::new()]].src == o)
                            .unwrap_or(
                                paths
                                    .iter()
                                    .position(|p| p.edges.is_empty() && p.src == o)
                                    .map(|k| &index[&paths[k].edges])
                                    .unwrap(),
                            ),
                    )]
                    .clone(),
                )
            })
            .collect();
        let mut compose: Vec<((MorId, MorId), MorId)> = Vec::new();
        for (&cf, f_id) in &rep {
            for (&cg, g_id) in &rep {
                if paths[cf].dst != paths[cg].src {
                    continue;
                }
                let mut es = paths[cf].edges.clone();
                es.extend(&paths[cg].edges);
                let gf = rep[&uf.find(index[&es])].clone();
                compose.push(((g_id.clone(), f_id.clone()), gf));
            }
        }
        let cat = FinCategory::new(objects, mors, identity, compose)
            .expect("congruence quotient of a free category is well formed");
        debug_assert!(cat.validate().is_empty());
        let small = cat
            .objects()
            .iter()
            .flat_map(|s| cat.objects().iter().map(move |d| (s, d)))
            .all(|(s, d)| cat.hom(s, d).len() <= cfg.max_hom);
        if small {
            return Arc::new(cat);
        }
    }
}

/// A uniformly random functor `a → b` (there is always at least one when
/// `b` is inhabited or `a` is empty).
pub fn functor(rng: &mut impl Rng, a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> Functor {
    let all = enumerate_functors(a, b, 10_000_000).expect("functor space at test scale");
    assert!(!all.is_empty(), "no functor between the drawn categories");
    all.swap_remove(rng.gen_range(0..all.len()))
}

/// A random lawful profunctor `a ⇸ b`: a sum of `blocks` hom blocks
/// `b(-, b₀) × a(a₀, =)`, then `fusions` random element identifications
/// closed under both actions.
pub fn profunctor(
    rng: &mut impl Rng,
    a: &Arc<FinCategory>,
    b: &Arc<FinCategory>,
    blocks: usize,
    fusions: usize,
) -> Profunctor {
    let mut cells: BTreeMap<(ObjId, ObjId), Vec<ElemId>> = BTreeMap::new();
    // Element id ↦ (block centre data): left leg into b₀, right leg out of a₀.
    let mut legs: BTreeMap<(ObjId, ObjId, ElemId), (MorId, MorId)> = BTreeMap::new();
    for i in 0..blocks {
        let (Some(b0), Some(a0)) = (b.objects().choose(rng), a.objects().choose(rng)) else {
            break;
        };
        for bo in b.objects() {
            for ao in a.objects() {
                for beta in b.hom(bo, b0) {
                    for alpha in a.hom(a0, ao) {
                        let id = ElemId::new(format!("r{i}|{}|{}", esc(beta.as_str()), esc(alpha.as_str())));
                        cells
                            .entry((bo.clone(), ao.clone()))
                            .or_default()
                            .push(id.clone());
                        legs.insert(
                            (bo.clone(), ao.clone(), id),
                            ((*beta).clone(), (*alpha).clone()),
                        );
                    }
                }
            }
        }
    }
    let prof = Profunctor::from_actions(
        a.clone(),
        b.clone(),
        cells,
        |beta, ao, x| {
            let (into, outof) = &legs[&(b.dst(beta).clone(), ao.clone(), x.clone())];
            let moved = b.compose(into, beta).expect("left leg composes").clone();
            let (head, _) = x.as_str().split_once('|').expect("block element id");
            ElemId::new(format!("{head}|{}|{}", esc(moved.as_str()), esc(outof.as_str())))
        },
        |bo, alpha, x| {
            let (into, outof) = &legs[&(bo.clone(), a.src(alpha).clone(), x.clone())];
            let moved = a.compose(alpha, outof).expect("right leg composes").clone();
            let (head, _) = x.as_str().split_once('|').expect("block element id");
            ElemId::new(format!("{head}|{}|{}", esc(into.as_str()), esc(moved.as_str())))
        },
    )
    .expect("hom blocks are well formed");
    debug_assert!(prof.validate().is_empty());
    fuse(rng, &prof, fusions)
}

/// Quotient `p` by `fusions` random element identifications, closed into a
/// congruence under both actions.  The result is again lawful.
pub fn fuse(rng: &mut impl Rng, p: &Profunctor, fusions: usize) -> Profunctor {
    if fusions == 0 {
        return p.clone();
    }
    let elems: Vec<(ObjId, ObjId, ElemId)> = p
        .cells()
        .flat_map(|((bo, ao), xs)| {
            xs.iter()
                .map(move |x| (bo.clone(), ao.clone(), x.clone()))
        })
        .collect();
    let index: BTreeMap<&(ObjId, ObjId, ElemId), usize> =
        elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let at = |bo: &ObjId, ao: &ObjId, x: &ElemId| index[&(bo.clone(), ao.clone(), x.clone())];

    let mut uf = UnionFind::new(elems.len());
    let mut work: Vec<(usize, usize)> = Vec::new();
    let fusable: Vec<(&ObjId, &ObjId, &Vec<ElemId>)> = p
        .cells()
        .filter(|(_, xs)| xs.len() >= 2)
        .map(|((bo, ao), xs)| (bo, ao, xs))
        .collect();
    for _ in 0..fusions {
        let Some((bo, ao, xs)) = fusable.choose(rng) else {
            break;
        };
        let i = rng.gen_range(0..xs.len());
        let j = rng.gen_range(0..xs.len());
        if i != j {
            work.push((at(bo, ao, &xs[i]), at(bo, ao, &xs[j])));
        }
    }
    while let Some((i, j)) = work.pop() {
        if uf.same(i, j) {
            continue;
        }
        uf.union(i, j);
        let (bo, ao, _) = &elems[i];
        for beta in p.target.morphisms() {
            if &beta.dst == bo {
                let im = |k: usize| at(&beta.src, ao, p.left(&beta.id, ao, &elems[k].2));
                work.push((im(i), im(j)));
            }
        }
        for alpha in p.source.morphisms() {
            if &alpha.src == ao {
                let im = |k: usize| at(bo, &alpha.dst, p.right(bo, &alpha.id, &elems[k].2));
                work.push((im(i), im(j)));
            }
        }
    }

    let mut rep: BTreeMap<usize, ElemId> = BTreeMap::new();
    for (i, (_, _, x)) in elems.iter().enumerate() {
        let slot = rep.entry(uf.find(i)).or_insert_with(|| x.clone());
        if x < slot {
            *slot = x.clone();
        }
    }
    let canon = |bo: &ObjId, ao: &ObjId, x: &ElemId| rep[&uf.find(at(bo, ao, x))].clone();
    let mut cells: BTreeMap<(ObjId, ObjId), Vec<ElemId>> = BTreeMap::new();
    for (i, (bo, ao, _)) in elems.iter().enumerate() {
        if uf.find(i) == i {
            cells
                .entry((bo.clone(), ao.clone()))
                .or_default()
                .push(rep[&i].clone());
        }
    }
    let fused = Profunctor::from_actions(
        p.source.clone(),
        p.target.clone(),
        cells,
        |beta, ao, x| canon(&p.target.src(beta).clone(), ao, p.left(beta, ao, x)),
        |bo, alpha, x| canon(bo, &p.source.dst(alpha).clone(), p.right(bo, alpha, x)),
    )
    .expect("congruence quotient is well formed");
    debug_assert!(fused.validate().is_empty());
    fused
}

/// A random word over the objects of `base`, length ≤ `max_len`.
pub fn word(rng: &mut impl Rng, base: &FinCategory, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::new((0..len).map(|_| base.objects().choose(rng).expect("inhabited base").clone()))
}

/// A random lawful graded profunctor `base ⇸ S(base)`: the profunctor
/// generator pointed at the materialized word category.  Hom blocks there
/// are graded representables `S(-, w₀) × base(a₀, =)`.
pub fn graded(
    rng: &mut impl Rng,
    d: Doctrine,
    base: &Arc<FinCategory>,
    bound: usize,
    blocks: usize,
    fusions: usize,
) -> GradedProfunctor {
    let words = SCategory::new(base.clone(), d, bound);
    let prof = profunctor(rng, base, &words.cat, blocks, fusions);
    GradedProfunctor {
        doctrine: d,
        bound,
        words,
        prof,
    }
}
