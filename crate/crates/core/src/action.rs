//! Free actions on handlebodies, encoded by the surjection from the free
//! fundamental group of the quotient handlebody onto the acting group.
//!
//! Two actions are equivalent when their image tuples lie in one orbit of
//! Nielsen moves combined with simultaneous conjugation.

use std::collections::{HashMap, VecDeque};
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::group::{Element, FiniteGroup, GroupError};
use crate::word::{NielsenMove, WordError};

/// Default cap on `|G|^g` for tuple-space enumeration.
pub const DEFAULT_TUPLE_BOUND: u64 = 10_000_000;

/// Cap on candidate generator images examined when computing `Aut(G)`.
const AUTOMORPHISM_CANDIDATE_BOUND: usize = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("expected {expected} generator images for genus {expected}, got {found}")]
    ImageCount { expected: usize, found: usize },
    #[error("images do not generate the group: the covering space would be disconnected")]
    NotGenerating,
    #[error("actions use different group tables")]
    GroupMismatch,
    #[error("quotient genera differ: {0} vs {1}")]
    GenusMismatch(usize, usize),
    #[error("tuple space |G|^g = {order}^{genus} exceeds the enumeration bound {bound}")]
    TupleBoundExceeded { order: usize, genus: usize, bound: u64 },
    #[error("automorphism group too large to enumerate")]
    AutomorphismBound,
}

/// A free orientation-preserving action on a handlebody: the acting group,
/// the genus of the quotient handlebody, and the images of its free
/// generators.
#[derive(Clone, Debug)]
pub struct HandlebodyAction {
    group: Arc<FiniteGroup>,
    images: Vec<Element>,
}

impl HandlebodyAction {
    pub fn new(group: Arc<FiniteGroup>, genus: usize, images: Vec<Element>) -> Result<Self, ActionError> {
        if images.len() != genus {
            return Err(ActionError::ImageCount { expected: genus, found: images.len() });
        }
        for &a in &images {
            group.check_element(a)?;
        }
        if !group.is_generating_tuple(&images) {
            return Err(ActionError::NotGenerating);
        }
        Ok(HandlebodyAction { group, images })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn shared_group(&self) -> Arc<FiniteGroup> {
        Arc::clone(&self.group)
    }

    pub fn quotient_genus(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    /// Genus of the covering handlebody: `1 + |G| (g - 1)`.
    pub fn total_genus(&self) -> i64 {
        1 + self.group.order() as i64 * (self.quotient_genus() as i64 - 1)
    }
}

/// Nielsen moves then a conjugation carrying one image tuple onto another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceWitness {
    pub moves: Vec<NielsenMove>,
    pub conjugator: Element,
}

impl EquivalenceWitness {
    pub fn replay(&self, group: &FiniteGroup, images: &[Element]) -> Result<Vec<Element>, WordError> {
        let mut t = images.to_vec();
        for mv in &self.moves {
            t = mv.apply(&t, group)?;
        }
        Ok(group.conjugate_tuple(&t, self.conjugator))
    }
}

/// Indexing of `G^g` with the first entry most significant, so numeric
/// order on indices is lexicographic order on tuples.
#[derive(Clone, Copy, Debug)]
struct TupleSpace {
    order: u64,
    genus: usize,
    len: u64,
}

impl TupleSpace {
    fn new(order: usize, genus: usize, bound: u64) -> Result<TupleSpace, ActionError> {
        let err = ActionError::TupleBoundExceeded { order, genus, bound };
        let len = (order as u64).checked_pow(genus as u32).ok_or(err.clone())?;
        if len > bound || len > u32::MAX as u64 {
            return Err(err);
        }
        Ok(TupleSpace { order: order as u64, genus, len })
    }

    fn encode(&self, t: &[Element]) -> u64 {
        t.iter().fold(0, |acc, e| acc * self.order + e.0 as u64)
    }

    fn decode_into(&self, mut idx: u64, t: &mut [Element]) {
        for slot in t.iter_mut().rev() {
            *slot = Element((idx % self.order) as u32);
            idx /= self.order;
        }
    }
}

/// Decide equivalence, returning a witness when one exists.
///
/// Breadth-first search over the Nielsen orbit of `a1`'s images; each
/// visited tuple is tested against the conjugates of `a2`'s images.
pub fn actions_equivalent(
    a1: &HandlebodyAction,
    a2: &HandlebodyAction,
) -> Result<Option<EquivalenceWitness>, ActionError> {
    actions_equivalent_bounded(a1, a2, DEFAULT_TUPLE_BOUND)
}

pub fn actions_equivalent_bounded(
    a1: &HandlebodyAction,
    a2: &HandlebodyAction,
    bound: u64,
) -> Result<Option<EquivalenceWitness>, ActionError> {
    if !a1.group.same_table(&a2.group) {
        return Err(ActionError::GroupMismatch);
    }
    let genus = a1.quotient_genus();
    if genus != a2.quotient_genus() {
        return Err(ActionError::GenusMismatch(genus, a2.quotient_genus()));
    }
    let group = a1.group();
    let space = TupleSpace::new(group.order(), genus, bound)?;

    // t' -> c with c t' c^-1 = target
    let mut targets: HashMap<u64, Element> = HashMap::new();
    for c in group.elements() {
        let pre = group.conjugate_tuple(a2.images(), group.inv(c));
        targets.entry(space.encode(&pre)).or_insert(c);
    }

    let moves = NielsenMove::all(genus);
    let start = space.encode(a1.images());
    let mut parent: HashMap<u64, Option<(u64, NielsenMove)>> = HashMap::from([(start, None)]);
    let mut queue = VecDeque::from([start]);
    let mut t = vec![Element::IDENTITY; genus];
    let mut next = t.clone();
    while let Some(idx) = queue.pop_front() {
        if let Some(&conjugator) = targets.get(&idx) {
            let mut path = Vec::new();
            let mut cur = idx;
            while let Some((prev, mv)) = parent[&cur] {
                path.push(mv);
                cur = prev;
            }
            path.reverse();
            return Ok(Some(EquivalenceWitness { moves: path, conjugator }));
        }
        space.decode_into(idx, &mut t);
        for &mv in &moves {
            next.copy_from_slice(&t);
            mv.apply_in_place(group, &mut next);
            let j = space.encode(&next);
            parent.entry(j).or_insert_with(|| {
                queue.push_back(j);
                Some((idx, mv))
            });
        }
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub tuple_bound: u64,
    /// Worker threads for orbit enumeration; 1 runs single-threaded.
    pub workers: usize,
    /// Also identify tuples related by any automorphism of the group.
    /// Coarser than the handlebody-action equivalence.
    pub coarsen_by_automorphisms: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { tuple_bound: DEFAULT_TUPLE_BOUND, workers: 1, coarsen_by_automorphisms: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActionClass {
    /// Lexicographically least tuple of the orbit.
    pub representative: Vec<Element>,
    pub orbit_size: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub genus: usize,
    pub generating_tuples: u64,
    /// Sorted by representative.
    pub classes: Vec<ActionClass>,
}

type TupleMap = Box<dyn Fn(&FiniteGroup, &[Element], &mut [Element]) + Send + Sync>;

/// A generating set for the combined action on `G^g`: Nielsen's generators
/// of `Aut(F_g)` and conjugation by the group's generators (plus any extra
/// automorphisms of `G` when coarsening).
fn orbit_generators(group: &FiniteGroup, genus: usize, automorphisms: Option<Vec<Vec<Element>>>) -> Vec<TupleMap> {
    let mut maps: Vec<TupleMap> = Vec::new();
    if genus >= 1 {
        maps.push(Box::new(|g, t, out| {
            out.copy_from_slice(t);
            out[0] = g.inv(t[0]);
        }));
    }
    if genus >= 2 {
        maps.push(Box::new(|_, t, out| {
            out.copy_from_slice(t);
            out.swap(0, 1);
        }));
        maps.push(Box::new(|_, t, out| {
            let n = t.len();
            for i in 0..n {
                out[i] = t[(i + 1) % n];
            }
        }));
        maps.push(Box::new(|g, t, out| {
            out.copy_from_slice(t);
            out[0] = g.mul(t[0], t[1]);
        }));
    }
    for &c in group.generators() {
        maps.push(Box::new(move |g, t, out| {
            for (o, &a) in out.iter_mut().zip(t) {
                *o = g.conjugate(a, c);
            }
        }));
    }
    for map in automorphisms.into_iter().flatten() {
        maps.push(Box::new(move |_, t, out| {
            for (o, &a) in out.iter_mut().zip(t) {
                *o = map[a.index()];
            }
        }));
    }
    maps
}

/// For every tuple of `G^g` (indexed lexicographically), the index of the
/// least tuple in its orbit.
pub fn orbit_roots(group: &FiniteGroup, genus: usize, options: &ClassifyOptions) -> Result<Vec<u32>, ActionError> {
    let space = TupleSpace::new(group.order(), genus, options.tuple_bound)?;
    let automorphisms = if options.coarsen_by_automorphisms {
        Some(group.automorphisms(AUTOMORPHISM_CANDIDATE_BOUND).ok_or(ActionError::AutomorphismBound)?)
    } else {
        None
    };
    let maps = orbit_generators(group, genus, automorphisms);
    Ok(if options.workers <= 1 {
        orbit_roots_sequential(group, space, &maps)
    } else {
        orbit_roots_parallel(group, space, &maps, options.workers)
    })
}

/// Partition the generating `g`-tuples of `G` into equivalence classes.
pub fn classify_actions(group: &FiniteGroup, genus: usize, options: &ClassifyOptions) -> Result<Classification, ActionError> {
    let space = TupleSpace::new(group.order(), genus, options.tuple_bound)?;
    let roots = orbit_roots(group, genus, options)?;

    // Orbit members share the root, which is the least index in the orbit.
    let mut sizes: HashMap<u32, u64> = HashMap::new();
    for &r in &roots {
        *sizes.entry(r).or_insert(0) += 1;
    }
    let mut t = vec![Element::IDENTITY; genus];
    let mut classes = Vec::new();
    let mut generating_tuples = 0;
    let mut keys: Vec<u32> = sizes.keys().copied().collect();
    keys.sort_unstable();
    for root in keys {
        space.decode_into(root as u64, &mut t);
        // Nielsen moves and conjugation preserve generation.
        if group.is_generating_tuple(&t) {
            let orbit_size = sizes[&root];
            generating_tuples += orbit_size;
            classes.push(ActionClass { representative: t.clone(), orbit_size });
        }
    }
    Ok(Classification { genus, generating_tuples, classes })
}

fn orbit_roots_sequential(group: &FiniteGroup, space: TupleSpace, maps: &[TupleMap]) -> Vec<u32> {
    const UNSEEN: u32 = u32::MAX;
    let mut root = vec![UNSEEN; space.len as usize];
    let mut t = vec![Element::IDENTITY; space.genus];
    let mut next = t.clone();
    let mut queue = VecDeque::new();
    for seed in 0..space.len as u32 {
        if root[seed as usize] != UNSEEN {
            continue;
        }
        // Every smaller index is already labelled, so the seed is the orbit minimum.
        root[seed as usize] = seed;
        queue.push_back(seed);
        while let Some(idx) = queue.pop_front() {
            space.decode_into(idx as u64, &mut t);
            for map in maps {
                map(group, &t, &mut next);
                let j = space.encode(&next) as usize;
                if root[j] == UNSEEN {
                    root[j] = seed;
                    queue.push_back(j as u32);
                }
            }
        }
    }
    root
}

/// Lock-free union-find over the tuple space. Roots are always the least
/// index of their set, so the result does not depend on scheduling.
fn orbit_roots_parallel(group: &FiniteGroup, space: TupleSpace, maps: &[TupleMap], workers: usize) -> Vec<u32> {
    let n = space.len as usize;
    let parent: Vec<AtomicU32> = (0..n as u32).map(AtomicU32::new).collect();
    let find = |mut x: u32| loop {
        let p = parent[x as usize].load(Ordering::Acquire);
        if p == x {
            return x;
        }
        let gp = parent[p as usize].load(Ordering::Acquire);
        let _ = parent[x as usize].compare_exchange(p, gp, Ordering::AcqRel, Ordering::Relaxed);
        x = gp;
    };
    let union = |a: u32, b: u32| loop {
        let (ra, rb) = (find(a), find(b));
        if ra == rb {
            return;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        if parent[hi as usize].compare_exchange(hi, lo, Ordering::AcqRel, Ordering::Relaxed).is_ok() {
            return;
        }
    };
    let chunk = n.div_ceil(workers).max(1);
    std::thread::scope(|s| {
        for w in 0..workers {
            let union = &union;
            s.spawn(move || {
                let mut t = vec![Element::IDENTITY; space.genus];
                let mut next = t.clone();
                for idx in (w * chunk)..((w + 1) * chunk).min(n) {
                    space.decode_into(idx as u64, &mut t);
                    for map in maps {
                        map(group, &t, &mut next);
                        union(idx as u32, space.encode(&next) as u32);
                    }
                }
            });
        }
    });
    (0..n as u32).map(find).collect()
}
