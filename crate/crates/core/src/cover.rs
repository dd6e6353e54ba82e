//! Regular covers: coset tables and Reidemeister–Schreier presentations of
//! the kernel of a surjection onto a finite group.
//!
//! Cosets of the kernel are identified with group elements, and generator
//! `x_i` acts on the right: `c -> c · φ(x_i)`.

use std::collections::VecDeque;

use thiserror::Error;

use crate::action::HandlebodyAction;
use crate::group::Element;
use crate::homology::{h1_from_presentation, AbelianGroupStructure, GroupPresentation, HomologyError};
use crate::word::{FreeWord, Letter, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("presentation has {found} generators but the action has quotient genus {expected}")]
    GeneratorCount { found: usize, expected: usize },
    #[error("relator {index} does not map to the identity, so it does not lift to the cover")]
    RelatorNotInKernel { index: usize },
    #[error("images do not generate the group: the cover is disconnected")]
    Disconnected,
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// Cosets of `ker φ`, the right action of the generators, and a shortlex
/// Schreier transversal.
#[derive(Clone, Debug)]
pub struct CosetTable {
    genus: usize,
    /// `forward[i][c] = c · φ(x_i)`
    forward: Vec<Vec<u32>>,
    backward: Vec<Vec<u32>>,
    transversal: Vec<FreeWord>,
    /// `tree[c][i]`: the Schreier generator for `(c, x_i)` is freely trivial.
    tree: Vec<Vec<bool>>,
}

pub fn build_coset_table(action: &HandlebodyAction) -> Result<CosetTable, CoverError> {
    let group = action.group();
    let genus = action.quotient_genus();
    let size = group.order();
    let forward: Vec<Vec<u32>> = action
        .images()
        .iter()
        .map(|&a| group.elements().map(|c| group.mul(c, a).0).collect())
        .collect();
    let backward: Vec<Vec<u32>> = action
        .images()
        .iter()
        .map(|&a| {
            let ai = group.inv(a);
            group.elements().map(|c| group.mul(c, ai).0).collect()
        })
        .collect();

    // Breadth-first with letters in the order x1 < X1 < x2 < ... gives the
    // shortlex-least representative of each coset.
    let mut transversal: Vec<Option<FreeWord>> = vec![None; size];
    let mut tree = vec![vec![false; genus]; size];
    transversal[0] = Some(FreeWord::identity(genus));
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for i in 0..genus {
            for inverse in [false, true] {
                let d = if inverse { backward[i][c] } else { forward[i][c] } as usize;
                if transversal[d].is_some() {
                    continue;
                }
                let word = transversal[c].as_ref().expect("visited").multiply(&FreeWord::from_letters(
                    genus,
                    [Letter::new(i, inverse)],
                )?)?;
                transversal[d] = Some(word);
                // t_c x_i t_d^-1 is trivial; for an inverse letter it is
                // the generator at d that collapses.
                if inverse {
                    tree[d][i] = true;
                } else {
                    tree[c][i] = true;
                }
                queue.push_back(d);
            }
        }
    }
    let transversal = transversal.into_iter().collect::<Option<Vec<_>>>().ok_or(CoverError::Disconnected)?;
    Ok(CosetTable { genus, forward, backward, transversal, tree })
}

impl CosetTable {
    pub fn coset_count(&self) -> usize {
        self.transversal.len()
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn act(&self, coset: Element, letter: Letter) -> Element {
        let table = if letter.inverse { &self.backward } else { &self.forward };
        Element(table[letter.generator][coset.index()])
    }

    /// Permutation of the cosets induced by `x_i`.
    pub fn transition(&self, i: usize) -> &[u32] {
        &self.forward[i]
    }

    pub fn transversal(&self, coset: Element) -> &FreeWord {
        &self.transversal[coset.index()]
    }

    pub fn is_tree_edge(&self, coset: Element, generator: usize) -> bool {
        self.tree[coset.index()][generator]
    }

    pub fn tree_edge_count(&self) -> usize {
        self.tree.iter().flatten().filter(|&&t| t).count()
    }

    /// `t_c x_i t_{c·x_i}^-1` as a word in the base free group.
    pub fn schreier_word(&self, coset: Element, generator: usize) -> Result<FreeWord, WordError> {
        let x = FreeWord::from_letters(self.genus, [Letter::new(generator, false)])?;
        let target = self.act(coset, Letter::new(generator, false));
        self.transversal(coset).multiply(&x)?.multiply(&self.transversal(target).inverse())
    }
}

/// A presentation of `π1` of the cover, with each generator's origin.
#[derive(Clone, Debug)]
pub struct CoverPresentation {
    pub presentation: GroupPresentation,
    /// `(coset, base generator)` for each Schreier generator, in order.
    pub generator_provenance: Vec<(Element, usize)>,
    pub tree_edges_removed: usize,
    table: CosetTable,
}

impl CoverPresentation {
    pub fn coset_table(&self) -> &CosetTable {
        &self.table
    }

    /// Substitute the defining words of the Schreier generators.
    pub fn expand(&self, word: &FreeWord) -> Result<FreeWord, WordError> {
        let images = self
            .generator_provenance
            .iter()
            .map(|&(c, i)| self.table.schreier_word(c, i))
            .collect::<Result<Vec<_>, _>>()?;
        if images.is_empty() {
            return Ok(FreeWord::identity(self.table.genus));
        }
        word.substitute(&images)
    }
}

/// Rewrite `t · r · t^-1` for every transversal element `t` and relator `r`
/// (relator-major order) into the non-tree Schreier generators.
pub fn reidemeister_schreier(p: &GroupPresentation, action: &HandlebodyAction) -> Result<CoverPresentation, CoverError> {
    let genus = action.quotient_genus();
    if p.generator_count() != genus {
        return Err(CoverError::GeneratorCount { found: p.generator_count(), expected: genus });
    }
    let group = action.group();
    for (index, r) in p.relators().iter().enumerate() {
        if r.evaluate(group, action.images())? != group.identity() {
            return Err(CoverError::RelatorNotInKernel { index });
        }
    }
    let table = build_coset_table(action)?;
    let size = table.coset_count();

    let mut index_of = vec![vec![None; genus]; size];
    let mut provenance = Vec::new();
    for c in 0..size {
        for i in 0..genus {
            if !table.tree[c][i] {
                index_of[c][i] = Some(provenance.len());
                provenance.push((Element(c as u32), i));
            }
        }
    }
    let rank = provenance.len();

    let mut relators = Vec::with_capacity(p.relators().len() * size);
    for r in p.relators() {
        for start in 0..size {
            let mut coset = Element(start as u32);
            let mut letters = Vec::with_capacity(r.len());
            for &l in r.letters() {
                // X_i read at d is the inverse of the generator at d·φ(x_i)^-1.
                let next = table.act(coset, l);
                let owner = if l.inverse { next } else { coset };
                if let Some(k) = index_of[owner.index()][l.generator] {
                    letters.push(Letter::new(k, l.inverse));
                }
                coset = next;
            }
            debug_assert_eq!(coset.index(), start);
            relators.push(FreeWord::from_letters(rank, letters)?);
        }
    }
    Ok(CoverPresentation {
        presentation: GroupPresentation::new(rank, relators)?,
        generator_provenance: provenance,
        tree_edges_removed: table.tree_edge_count(),
        table,
    })
}

pub fn cover_h1(p: &GroupPresentation, action: &HandlebodyAction) -> Result<AbelianGroupStructure, CoverError> {
    Ok(h1_from_presentation(&reidemeister_schreier(p, action)?.presentation))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::catalog::cyclic;
    use crate::group::FiniteGroup;
    use crate::seifert::seifert_presentation;

    fn action(g: FiniteGroup, images: &[u32]) -> HandlebodyAction {
        HandlebodyAction::new(Arc::new(g), images.len(), images.iter().map(|&i| Element(i)).collect()).unwrap()
    }

    #[test]
    fn coset_tables() {
        let t = build_coset_table(&action(FiniteGroup::trivial(), &[0, 0])).unwrap();
        assert_eq!(t.coset_count(), 1);
        assert_eq!(t.tree_edge_count(), 0);

        let t = build_coset_table(&action(cyclic(2), &[1, 1])).unwrap();
        assert_eq!(t.coset_count(), 2);
        assert_eq!(t.transition(0), [1, 0]);
        assert_eq!(t.transition(1), [1, 0]);
        assert_eq!(t.transversal(Element(0)).to_string(), "");
        assert_eq!(t.transversal(Element(1)).to_string(), "x1");

        let t = build_coset_table(&action(cyclic(3), &[1, 0])).unwrap();
        assert_eq!(t.transition(0), [1, 2, 0]);
        assert_eq!(t.transition(1), [0, 1, 2]);
        assert_eq!(t.transversal(Element(2)).to_string(), "X1");
    }

    #[test]
    fn trivial_group_is_identity() {
        let p = seifert_presentation(2, 3).unwrap();
        let c = reidemeister_schreier(&p, &action(FiniteGroup::trivial(), &[0, 0])).unwrap();
        assert_eq!(c.presentation, p);
    }

    #[test]
    fn free_double_cover() {
        let p = GroupPresentation::new(2, vec![]).unwrap();
        let a = action(cyclic(2), &[1, 1]);
        let c = reidemeister_schreier(&p, &a).unwrap();
        assert_eq!(c.presentation.generator_count(), 3);
        assert!(c.presentation.relators().is_empty());
        assert_eq!(cover_h1(&p, &a).unwrap().free_rank, 3);
    }

    #[test]
    fn seifert_double_cover_by_hand() {
        // Tree {1, x1}; generators a = x1 x1, b = x2 X1, c = x1 x2.
        let a = action(cyclic(2), &[1, 1]);
        let c = reidemeister_schreier(&seifert_presentation(2, 2).unwrap(), &a).unwrap();
        let words: Vec<String> = c.generator_provenance.iter().map(|&(k, i)| {
            c.coset_table().schreier_word(k, i).unwrap().to_string()
        }).collect();
        assert_eq!(words, ["x2 X1", "x1 x1", "x1 x2"]);
        // in those generators: (b, a, c)
        let rel: Vec<String> = c.presentation.relators().iter().map(|r| r.to_string()).collect();
        assert_eq!(rel, ["x2 X3 X3", "x2 X1 X2 X1 X2", "x1 X3", "x3 X2 X1 X2"]);
        assert_eq!(cover_h1(&seifert_presentation(2, 2).unwrap(), &a).unwrap().to_string(), "Z/4");
    }

    #[test]
    fn errors() {
        let a = action(cyclic(2), &[1, 1]);
        let p = GroupPresentation::parse(2, &["x1".into()]).unwrap();
        assert_eq!(reidemeister_schreier(&p, &a).unwrap_err(), CoverError::RelatorNotInKernel { index: 0 });
        let p = GroupPresentation::new(3, vec![]).unwrap();
        assert!(matches!(reidemeister_schreier(&p, &a).unwrap_err(), CoverError::GeneratorCount { .. }));
    }
}
