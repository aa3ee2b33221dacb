//! States as facet permutations: compiling move words, applying them, and
//! analyzing cycle structure and per-class signs of the induced piece actions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Gen, Layout, PieceClass, Point};
use crate::notation::MoveWord;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("unknown generator {0} for this cube size")]
    UnknownGenerator(String),
    #[error("slice index {k} out of range (this size has {max} circles)")]
    SliceOutOfRange { k: u8, max: u8 },
    #[error("degree mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("permutation does not preserve the {0} piece partition")]
    ClassNotPreserved(PieceClass),
}

/// A bijection on the 6n² facet positions. `image(i)` is where the facet at
/// position `i` is sent.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<Point>,
}

impl std::fmt::Debug for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Permutation(degree {})", self.degree())
    }
}

impl Permutation {
    pub fn identity(degree: usize) -> Permutation {
        Permutation {
            images: (0..degree).map(|i| i as Point).collect(),
        }
    }

    /// Build from an image table; `None` unless it is a bijection.
    pub fn from_images(images: Vec<Point>) -> Option<Permutation> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen.get_mut(i as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        Some(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[Point] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    /// `self` applied first, then `other` (left-to-right composition).
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&i| other.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0 as Point; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as Point;
        }
        Permutation { images }
    }

    pub fn pow(&self, e: u32) -> Permutation {
        let mut out = Permutation::identity(self.degree());
        for _ in 0..e {
            out = out.then(self);
        }
        out
    }

    pub fn moved_points(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &j)| i != j as usize)
            .count()
    }

    /// Nontrivial cycle lengths, unordered.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.image(start) == start {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                len += 1;
                i = self.image(i);
            }
            out.push(len);
        }
        out
    }

    pub fn sign(&self) -> i8 {
        let transpositions: usize = self.cycle_lengths().iter().map(|l| l - 1).sum();
        if transpositions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// A labelled state: the facet currently at position `i` came from solved
/// position `came_from(i)`. The solved state is the identity.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LabelledState {
    came_from: Permutation,
}

impl LabelledState {
    pub fn solved(layout: &Layout) -> LabelledState {
        LabelledState {
            came_from: Permutation::identity(layout.facet_count()),
        }
    }

    pub fn from_came_from(p: Permutation) -> LabelledState {
        LabelledState { came_from: p }
    }

    pub fn degree(&self) -> usize {
        self.came_from.degree()
    }

    /// Solved position of the sticker now at position `i`.
    pub fn came_from(&self, i: usize) -> usize {
        self.came_from.image(i)
    }

    pub fn came_from_perm(&self) -> &Permutation {
        &self.came_from
    }

    /// Where each solved sticker went: the inverse view of the state.
    pub fn goes_to(&self) -> Permutation {
        self.came_from.inverse()
    }

    pub fn is_solved(&self) -> bool {
        self.came_from.is_identity()
    }
}

/// Colour-only view of a state: one colour id (0..6) per facet position.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ColorState {
    pub n: u32,
    pub colors: Vec<u8>,
}

/// The 24 orientation-preserving whole-cube rotations as facet permutations,
/// with the identity first.
pub fn whole_cube_rotations(layout: &Layout) -> Vec<Permutation> {
    let gens: Vec<Permutation> = crate::geometry::Face::ALL
        .iter()
        .map(|&f| Permutation {
            images: crate::geometry::whole_rotation_map(layout.n, f),
        })
        .collect();
    let mut out = vec![Permutation::identity(layout.facet_count())];
    let mut head = 0;
    while head < out.len() {
        let cur = out[head].clone();
        head += 1;
        for g in &gens {
            let next = cur.then(g);
            if !out.contains(&next) {
                out.push(next);
            }
        }
    }
    debug_assert_eq!(out.len(), 24);
    out
}

/// The permutation a generator induces on the facets.
pub fn generator_permutation(layout: &Layout, gen: Gen) -> Result<Permutation, EngineError> {
    match gen {
        Gen::Slice(_, k) if k == 0 || k > layout.circles => Err(EngineError::UnknownGenerator(
            format!("{gen} (k={k}, K={})", layout.circles),
        )),
        _ => {
            let map = layout
                .generator_facet_map(gen)
                .ok_or_else(|| EngineError::UnknownGenerator(gen.to_string()))?;
            Ok(Permutation { images: map })
        }
    }
}

/// Compile a move word into a facet permutation; leftmost factor applied
/// first, and `[a, b] = a·b·a⁻¹·b⁻¹`.
pub fn compile(layout: &Layout, word: &MoveWord) -> Result<Permutation, EngineError> {
    match word {
        MoveWord::Gen(g) => match *g {
            Gen::Slice(_, k) if k == 0 || k > layout.circles => {
                Err(EngineError::SliceOutOfRange {
                    k,
                    max: layout.circles,
                })
            }
            g => generator_permutation(layout, g),
        },
        MoveWord::Inverse(w) => Ok(compile(layout, w)?.inverse()),
        MoveWord::Power(w, e) => Ok(compile(layout, w)?.pow(*e)),
        MoveWord::Sequence(ws) => {
            let mut p = Permutation::identity(layout.facet_count());
            for w in ws {
                p = p.then(&compile(layout, w)?);
            }
            Ok(p)
        }
        MoveWord::Commutator(a, b) => {
            let pa = compile(layout, a)?;
            let pb = compile(layout, b)?;
            Ok(pa.then(&pb).then(&pa.inverse()).then(&pb.inverse()))
        }
    }
}

/// Left action of the move group on states: the sticker at position `i`
/// moves to position `perm(i)`.
pub fn apply(state: &LabelledState, perm: &Permutation) -> Result<LabelledState, EngineError> {
    if state.degree() != perm.degree() {
        return Err(EngineError::SizeMismatch {
            left: state.degree(),
            right: perm.degree(),
        });
    }
    let mut images = vec![0 as Point; state.degree()];
    for i in 0..state.degree() {
        images[perm.image(i)] = state.came_from.images[i];
    }
    Ok(LabelledState {
        came_from: Permutation { images },
    })
}

/// The permutation of piece positions a facet permutation induces on a class.
/// The input must map each piece's facet set onto a whole same-class piece.
pub fn induced_piece_action(
    perm: &Permutation,
    layout: &Layout,
    class: PieceClass,
) -> Result<Permutation, EngineError> {
    let slots: Vec<Vec<Point>> = match class {
        PieceClass::Corners => layout
            .corner_slots
            .iter()
            .map(|s| s.facets.to_vec())
            .collect(),
        PieceClass::SingleEdges => layout
            .single_edge_slots
            .iter()
            .map(|s| s.facets.to_vec())
            .collect(),
        PieceClass::Wings(k) => layout.wing_slots[k as usize - 1]
            .iter()
            .map(|s| s.facets.to_vec())
            .collect(),
        PieceClass::CenterCorners(k) => layout.center_corner_slots[k as usize - 1]
            .iter()
            .map(|&f| vec![f])
            .collect(),
        PieceClass::CenterEdges(k) => layout.center_edge_slots[k as usize - 1]
            .iter()
            .map(|&f| vec![f])
            .collect(),
        PieceClass::FixedCenters => layout.fixed_centers.iter().map(|&f| vec![f]).collect(),
    };
    let mut images = Vec::with_capacity(slots.len());
    for facets in &slots {
        let target = layout.slot_of(perm.image(facets[0] as usize) as Point);
        if target.class != class {
            return Err(EngineError::ClassNotPreserved(class));
        }
        // every facet of this piece must land in the same target slot
        for &f in &facets[1..] {
            let t = layout.slot_of(perm.image(f as usize) as Point);
            if t.class != class || t.slot != target.slot {
                return Err(EngineError::ClassNotPreserved(class));
            }
        }
        images.push(target.slot);
    }
    Permutation::from_images(images).ok_or(EngineError::ClassNotPreserved(class))
}

/// Sign of the induced action on a class: +1 even, −1 odd.
pub fn sign_on_class(
    perm: &Permutation,
    layout: &Layout,
    class: PieceClass,
) -> Result<i8, EngineError> {
    Ok(induced_piece_action(perm, layout, class)?.sign())
}

/// Nontrivial cycle lengths of the induced action, per piece class.
pub fn cycle_structure(
    perm: &Permutation,
    layout: &Layout,
) -> Result<BTreeMap<PieceClass, Vec<usize>>, EngineError> {
    let mut out = BTreeMap::new();
    for class in layout.classes() {
        let mut lens = induced_piece_action(perm, layout, class)?.cycle_lengths();
        lens.sort_unstable();
        if !lens.is_empty() {
            out.insert(class, lens);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_layout, Face};
    use crate::notation::parse;

    #[test]
    fn face_move_on_professor_touches_its_slab() {
        let l = build_layout(5).unwrap();
        let r = generator_permutation(&l, Gen::Face(Face::R)).unwrap();
        // the R slab holds 25 + 20 facets; all move except the fixed center
        assert_eq!(r.moved_points(), 44);
        assert!(r.pow(4).is_identity());
        assert!(!r.pow(2).is_identity());
    }

    #[test]
    fn slice_moves_fix_corners_and_single_edges() {
        let l = build_layout(5).unwrap();
        let cf = generator_permutation(&l, Gen::Slice(Face::F, 1)).unwrap();
        let on_corners = induced_piece_action(&cf, &l, PieceClass::Corners).unwrap();
        assert!(on_corners.is_identity());
        let on_singles = induced_piece_action(&cf, &l, PieceClass::SingleEdges).unwrap();
        assert!(on_singles.is_identity());
        assert_eq!(cf.moved_points(), 20);
    }

    #[test]
    fn every_generator_has_order_four() {
        for n in [4u32, 5, 6] {
            let l = build_layout(n).unwrap();
            for g in l.generators() {
                let p = generator_permutation(&l, g).unwrap();
                assert!(p.pow(4).is_identity(), "n={n} {g}");
                assert!(!p.is_identity());
            }
        }
    }

    #[test]
    fn unknown_generator_is_rejected() {
        let l = build_layout(5).unwrap();
        assert!(matches!(
            generator_permutation(&l, Gen::Slice(Face::R, 2)),
            Err(EngineError::UnknownGenerator(_))
        ));
        let word = parse("CR2").unwrap();
        assert_eq!(
            compile(&l, &word).unwrap_err(),
            EngineError::SliceOutOfRange { k: 2, max: 1 }
        );
    }

    #[test]
    fn compile_composes_left_to_right() {
        let l = build_layout(4).unwrap();
        let rr = compile(&l, &parse("R R'").unwrap()).unwrap();
        assert!(rr.is_identity());
        let empty = compile(&l, &parse("()").unwrap_or(MoveWord::Sequence(vec![])));
        assert!(empty.map(|p| p.is_identity()).unwrap_or(true));
        let ru = compile(&l, &parse("R U").unwrap()).unwrap();
        let r = compile(&l, &parse("R").unwrap()).unwrap();
        let u = compile(&l, &parse("U").unwrap()).unwrap();
        assert_eq!(ru, r.then(&u));
        let comm = compile(&l, &parse("[R,U]").unwrap()).unwrap();
        assert_eq!(comm, r.then(&u).then(&r.inverse()).then(&u.inverse()));
        assert!(!comm.is_identity(), "R and U do not commute");
    }

    #[test]
    fn apply_is_a_group_action() {
        let l = build_layout(5).unwrap();
        let solved = LabelledState::solved(&l);
        let r = compile(&l, &parse("R R R R").unwrap()).unwrap();
        assert_eq!(apply(&solved, &r).unwrap(), solved);
        let p = compile(&l, &parse("R U CF'").unwrap()).unwrap();
        let q = compile(&l, &parse("[CL,D2]").unwrap()).unwrap();
        let lhs = apply(&apply(&solved, &p).unwrap(), &q).unwrap();
        let rhs = apply(&solved, &p.then(&q)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn the_z_move_three_cycles_center_corners() {
        let l = build_layout(5).unwrap();
        let z = compile(&l, &parse("[[CF,CD],U']").unwrap()).unwrap();
        let solved = LabelledState::solved(&l);
        let mut s = solved.clone();
        for _ in 0..3 {
            s = apply(&s, &z).unwrap();
        }
        assert_eq!(s, solved, "z is a 3-cycle");
        let cycles = cycle_structure(&z, &l).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[&PieceClass::CenterCorners(1)], vec![3]);
    }

    #[test]
    fn signs_of_face_and_slice_moves_on_the_professor() {
        let l = build_layout(5).unwrap();
        let r = generator_permutation(&l, Gen::Face(Face::R)).unwrap();
        assert_eq!(sign_on_class(&r, &l, PieceClass::Corners).unwrap(), -1);
        assert_eq!(sign_on_class(&r, &l, PieceClass::Wings(1)).unwrap(), 1);
        let cr = generator_permutation(&l, Gen::Slice(Face::R, 1)).unwrap();
        assert_eq!(sign_on_class(&cr, &l, PieceClass::CenterEdges(1)).unwrap(), -1);
        assert_eq!(sign_on_class(&cr, &l, PieceClass::Wings(1)).unwrap(), -1);
        assert_eq!(sign_on_class(&cr, &l, PieceClass::CenterCorners(1)).unwrap(), 1);
    }

    #[test]
    fn class_scrambling_is_detected() {
        let l = build_layout(4).unwrap();
        // swap two facets of different corner slots: pieces are torn apart
        let mut images: Vec<Point> = (0..l.facet_count() as u32).map(|i| i as Point).collect();
        let a = l.corner_slots[0].facets[0] as usize;
        let b = l.corner_slots[1].facets[0] as usize;
        images.swap(a, b);
        let p = Permutation::from_images(images).unwrap();
        assert!(matches!(
            induced_piece_action(&p, &l, PieceClass::Corners),
            Err(EngineError::ClassNotPreserved(PieceClass::Corners))
        ));
    }
}
