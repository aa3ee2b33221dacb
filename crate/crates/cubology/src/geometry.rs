//! Facet geometry of the n×n×n cube: classification of all 6n² facets into
//! piece classes and circles, slot tables for every class, slice depths for
//! every generator, and the a/b typing of coupled-edge (wing) slots.
//!
//! Facet index convention: `face·n² + row·n + col`, faces ordered U, L, F, R,
//! B, D. Each face is unfolded with U viewed from above (B at the top of the
//! grid), F/R/B/L viewed from outside with U at the top, and D viewed from
//! below with F at the top.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a single facet (sticker position). `u16` is enough for every
/// supported size: the hard cap is n = 104, i.e. 64 896 facets.
pub type Point = u16;

/// Default upper bound on the cube size accepted by [`build_layout`].
pub const DEFAULT_SIZE_CAP: u32 = 64;

/// Hard upper bound implied by the `u16` facet index.
pub const HARD_SIZE_CAP: u32 = 104;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("cube size {0} is too small: the smallest supported cube is 3x3x3")]
    SizeTooSmall(u32),
    #[error("cube size {n} exceeds the cap {cap}")]
    SizeTooLarge { n: u32, cap: u32 },
    #[error("wing typing constraint graph has an odd cycle on circle {circle} ({context})")]
    TypingInconsistent { circle: u8, context: &'static str },
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Face {
    U = 0,
    L = 1,
    F = 2,
    R = 3,
    B = 4,
    D = 5,
}

impl Face {
    pub const ALL: [Face; 6] = [Face::U, Face::L, Face::F, Face::R, Face::B, Face::D];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Face> {
        Face::ALL.get(i).copied()
    }

    pub fn letter(self) -> char {
        match self {
            Face::U => 'U',
            Face::L => 'L',
            Face::F => 'F',
            Face::R => 'R',
            Face::B => 'B',
            Face::D => 'D',
        }
    }

    pub fn from_letter(c: char) -> Option<Face> {
        match c {
            'U' => Some(Face::U),
            'L' => Some(Face::L),
            'F' => Some(Face::F),
            'R' => Some(Face::R),
            'B' => Some(Face::B),
            'D' => Some(Face::D),
            _ => None,
        }
    }

    /// Outward unit normal.
    fn normal(self) -> [i32; 3] {
        match self {
            Face::U => [0, 1, 0],
            Face::L => [-1, 0, 0],
            Face::F => [0, 0, 1],
            Face::R => [1, 0, 0],
            Face::B => [0, 0, -1],
            Face::D => [0, -1, 0],
        }
    }

    fn from_normal(v: [i32; 3]) -> Face {
        match v {
            [0, 1, 0] => Face::U,
            [-1, 0, 0] => Face::L,
            [0, 0, 1] => Face::F,
            [1, 0, 0] => Face::R,
            [0, 0, -1] => Face::B,
            [0, -1, 0] => Face::D,
            _ => unreachable!("not a face normal: {v:?}"),
        }
    }
}

/// A generator of the move group: a face turn, or the inner-slice turn
/// `C_{f,k}` acting on circle `k` (clockwise as seen from outside face `f`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Gen {
    Face(Face),
    Slice(Face, u8),
}

impl Gen {
    pub fn face(self) -> Face {
        match self {
            Gen::Face(f) | Gen::Slice(f, _) => f,
        }
    }

    /// True for the moves that invert wing-slot types (F, B and every slice).
    pub fn inverts_wing_type(self) -> bool {
        match self {
            Gen::Face(Face::R | Face::L | Face::U | Face::D) => false,
            Gen::Face(Face::F | Face::B) => true,
            Gen::Slice(..) => true,
        }
    }
}

impl std::fmt::Display for Gen {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Gen::Face(face) => write!(f, "{}", face.letter()),
            Gen::Slice(face, 1) => write!(f, "C{}", face.letter()),
            Gen::Slice(face, k) => write!(f, "C{}{}", face.letter(), k),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Parity {
    Odd,
    Even,
}

/// Piece classes. The circle index is 1-based and runs 1 (innermost) to K.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum PieceClass {
    Corners,
    SingleEdges,
    Wings(u8),
    CenterCorners(u8),
    CenterEdges(u8),
    FixedCenters,
}

impl std::fmt::Display for PieceClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            PieceClass::Corners => write!(f, "corners"),
            PieceClass::SingleEdges => write!(f, "single-edges"),
            PieceClass::Wings(k) => write!(f, "wings[{k}]"),
            PieceClass::CenterCorners(k) => write!(f, "center-corners[{k}]"),
            PieceClass::CenterEdges(k) => write!(f, "center-edges[{k}]"),
            PieceClass::FixedCenters => write!(f, "fixed-centers"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum WingType {
    A,
    B,
}

impl WingType {
    pub fn flipped(self) -> WingType {
        match self {
            WingType::A => WingType::B,
            WingType::B => WingType::A,
        }
    }
}

/// A corner slot. `facets[0]` is the reference facet (the one on U or D);
/// the triple is listed clockwise as seen from outside the corner.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CornerSlot {
    pub facets: [Point; 3],
}

/// A single-edge slot (odd cubes only); facet order is fixed at construction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SingleEdgeSlot {
    pub facets: [Point; 2],
}

/// A coupled-edge (wing) slot. The pair partner sits at the mirrored position
/// of the same geometric edge and carries the opposite type. The facet order
/// is anchored so that R, L, U and D map first facets to first facets while
/// F, B and every slice move reverse them.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WingSlot {
    pub facets: [Point; 2],
    pub edge: u8,
    pub partner: u8,
    pub wing_type: WingType,
}

/// Where a facet lives: its class, slot within the class, and position
/// within the slot's facet list.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SlotRef {
    pub class: PieceClass,
    pub slot: u16,
    pub pos: u8,
}

/// Complete facet classification of an n×n×n cube.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Layout {
    pub n: u32,
    pub parity: Parity,
    /// Number of circles K: (n−3)/2 for odd n, n/2 − 1 for even n.
    pub circles: u8,
    pub corner_slots: Vec<CornerSlot>,
    pub single_edge_slots: Vec<SingleEdgeSlot>,
    /// `wing_slots[k-1]` holds the 24 circle-k wing slots.
    pub wing_slots: Vec<Vec<WingSlot>>,
    /// `center_corner_slots[k-1]` holds 24 facets in (face, row-major) order.
    pub center_corner_slots: Vec<Vec<Point>>,
    /// `center_edge_slots[k-1]` holds z_k facets in (face, row-major) order.
    pub center_edge_slots: Vec<Vec<Point>>,
    pub fixed_centers: Vec<Point>,
    /// Depth of the rotated slab for every generator, in generator order.
    pub slice_table: Vec<(Gen, u32)>,
    #[serde(skip)]
    slot_index: Vec<Option<SlotRef>>,
}

impl Layout {
    pub fn facet_count(&self) -> usize {
        (6 * self.n * self.n) as usize
    }

    /// All generators in canonical order: the six face moves, then the six
    /// circle-1 slices, circle-2 slices, and so on.
    pub fn generators(&self) -> Vec<Gen> {
        self.slice_table.iter().map(|&(g, _)| g).collect()
    }

    /// Slab depth of a generator; `None` when the slice index is out of range.
    pub fn depth(&self, gen: Gen) -> Option<u32> {
        match gen {
            Gen::Face(_) => Some(1),
            Gen::Slice(_, k) if k >= 1 && k <= self.circles => {
                Some(self.n / 2 + 1 - u32::from(k))
            }
            Gen::Slice(..) => None,
        }
    }

    pub fn slot_of(&self, facet: Point) -> SlotRef {
        self.slot_index[facet as usize].expect("facet index out of range")
    }

    /// Number of center-edge slots in circle k.
    pub fn center_edge_count(&self, k: u8) -> usize {
        self.center_edge_slots[k as usize - 1].len()
    }

    /// The facets of a whole class, in slot order.
    pub fn class_facets(&self, class: PieceClass) -> Vec<Point> {
        match class {
            PieceClass::Corners => self
                .corner_slots
                .iter()
                .flat_map(|s| s.facets.iter().copied())
                .collect(),
            PieceClass::SingleEdges => self
                .single_edge_slots
                .iter()
                .flat_map(|s| s.facets.iter().copied())
                .collect(),
            PieceClass::Wings(k) => self.wing_slots[k as usize - 1]
                .iter()
                .flat_map(|s| s.facets.iter().copied())
                .collect(),
            PieceClass::CenterCorners(k) => self.center_corner_slots[k as usize - 1].clone(),
            PieceClass::CenterEdges(k) => self.center_edge_slots[k as usize - 1].clone(),
            PieceClass::FixedCenters => self.fixed_centers.clone(),
        }
    }

    /// Every nonempty piece class of this layout.
    pub fn classes(&self) -> Vec<PieceClass> {
        let mut out = vec![PieceClass::Corners];
        if self.parity == Parity::Odd {
            out.push(PieceClass::SingleEdges);
        }
        for k in 1..=self.circles {
            out.push(PieceClass::Wings(k));
        }
        for k in 1..=self.circles {
            out.push(PieceClass::CenterCorners(k));
        }
        for k in 1..=self.circles {
            if !self.center_edge_slots[k as usize - 1].is_empty() {
                out.push(PieceClass::CenterEdges(k));
            }
        }
        if self.parity == Parity::Odd {
            out.push(PieceClass::FixedCenters);
        }
        out
    }

    /// Facet image of a generator as a raw table: `map[i]` is where the
    /// sticker at position `i` moves. `None` when the slice index is invalid.
    pub fn generator_facet_map(&self, gen: Gen) -> Option<Vec<Point>> {
        let depth = self.depth(gen)?;
        Some(rotation_map(self.n, gen.face(), depth))
    }

    /// Orbit classes of the circle-k center edges under the move group.
    ///
    /// Center edges never leave a 24-slot sub-orbit: the axis cells (on the
    /// middle cross, odd n only) form one, and each oblique depth pair (k, j)
    /// splits into two chirality classes that no rotation interchanges.
    /// Returns `(j, slots)` groups: `j = 0` for the axis class, otherwise
    /// the inner circle index of the pair; oblique pairs contribute two
    /// groups each, the one containing the lowest slot index first.
    pub fn center_edge_suborbits(&self, k: u8) -> Vec<(u8, Vec<u16>)> {
        let facets = &self.center_edge_slots[k as usize - 1];
        let n = self.n as i32;
        let n2 = n * n;
        let mut groups: std::collections::BTreeMap<(u8, i8), Vec<u16>> = Default::default();
        for (slot, &facet) in facets.iter().enumerate() {
            let within = facet as i32 % n2;
            let (r, c) = (within / n, within % n);
            let u = 2 * r - (n - 1);
            let v = 2 * c - (n - 1);
            let dmin = u.abs().min(v.abs());
            let j = circle_of_dm(self.parity, dmin);
            // chirality of an oblique cell; 0 on the axis (u or v is 0)
            let chi = (u * v * (u.abs() - v.abs())).signum() as i8;
            groups.entry((j, chi)).or_default().push(slot as u16);
        }
        let mut out: Vec<(u8, Vec<u16>)> = groups.into_iter().map(|((j, _), v)| (j, v)).collect();
        // within each oblique pair, put the group holding the lowest slot first
        out.sort_by_key(|(j, slots)| (*j, slots[0]));
        out
    }

    fn rebuild_slot_index(&mut self) {
        let mut idx = vec![None; self.facet_count()];
        for (s, slot) in self.corner_slots.iter().enumerate() {
            for (p, &f) in slot.facets.iter().enumerate() {
                idx[f as usize] = Some(SlotRef {
                    class: PieceClass::Corners,
                    slot: s as u16,
                    pos: p as u8,
                });
            }
        }
        for (s, slot) in self.single_edge_slots.iter().enumerate() {
            for (p, &f) in slot.facets.iter().enumerate() {
                idx[f as usize] = Some(SlotRef {
                    class: PieceClass::SingleEdges,
                    slot: s as u16,
                    pos: p as u8,
                });
            }
        }
        for k in 1..=self.circles {
            for (s, slot) in self.wing_slots[k as usize - 1].iter().enumerate() {
                for (p, &f) in slot.facets.iter().enumerate() {
                    idx[f as usize] = Some(SlotRef {
                        class: PieceClass::Wings(k),
                        slot: s as u16,
                        pos: p as u8,
                    });
                }
            }
            for (s, &f) in self.center_corner_slots[k as usize - 1].iter().enumerate() {
                idx[f as usize] = Some(SlotRef {
                    class: PieceClass::CenterCorners(k),
                    slot: s as u16,
                    pos: 0,
                });
            }
            for (s, &f) in self.center_edge_slots[k as usize - 1].iter().enumerate() {
                idx[f as usize] = Some(SlotRef {
                    class: PieceClass::CenterEdges(k),
                    slot: s as u16,
                    pos: 0,
                });
            }
        }
        for (s, &f) in self.fixed_centers.iter().enumerate() {
            idx[f as usize] = Some(SlotRef {
                class: PieceClass::FixedCenters,
                slot: s as u16,
                pos: 0,
            });
        }
        self.slot_index = idx;
    }
}

// ---------------------------------------------------------------------------
// Coordinate machinery.
//
// Cells live on the integer lattice 0..n in each axis; x grows toward R,
// y toward U, z toward F. A facet is a (cell, outward normal) pair.
// ---------------------------------------------------------------------------

fn facet_index(n: u32, face: Face, r: i32, c: i32) -> Point {
    let n = n as i32;
    (face.index() as i32 * n * n + r * n + c) as Point
}

/// Face-grid cell of a facet, plus its outward normal.
fn facet_to_cell(n: u32, face: Face, r: i32, c: i32) -> ([i32; 3], [i32; 3]) {
    let m = n as i32 - 1;
    let cell = match face {
        Face::U => [c, m, r],
        Face::L => [0, m - r, c],
        Face::F => [c, m - r, m],
        Face::R => [m, m - r, m - c],
        Face::B => [m - c, m - r, 0],
        Face::D => [c, 0, m - r],
    };
    (cell, face.normal())
}

fn cell_to_facet(n: u32, cell: [i32; 3], normal: [i32; 3]) -> Point {
    let m = n as i32 - 1;
    let [x, y, z] = cell;
    let face = Face::from_normal(normal);
    let (r, c) = match face {
        Face::U => (z, x),
        Face::L => (m - y, z),
        Face::F => (m - y, x),
        Face::R => (m - y, m - z),
        Face::B => (m - y, m - x),
        Face::D => (m - z, x),
    };
    facet_index(n, face, r, c)
}

/// One clockwise quarter turn of the whole cube about the outward axis of
/// `face`, applied to a cell.
fn rotate_cell(n: u32, face: Face, cell: [i32; 3]) -> [i32; 3] {
    let m = n as i32 - 1;
    let [x, y, z] = cell;
    match face {
        Face::R => [x, z, m - y],
        Face::L => [x, m - z, y],
        Face::U => [m - z, y, x],
        Face::D => [z, y, m - x],
        Face::F => [y, m - x, z],
        Face::B => [m - y, x, z],
    }
}

fn rotate_dir(face: Face, d: [i32; 3]) -> [i32; 3] {
    let [x, y, z] = d;
    match face {
        Face::R => [x, z, -y],
        Face::L => [x, -z, y],
        Face::U => [-z, y, x],
        Face::D => [z, y, -x],
        Face::F => [y, -x, z],
        Face::B => [-y, x, z],
    }
}

/// Coordinate (along the face's axis) of the slab rotated at `depth`.
fn slab_coord(n: u32, face: Face, depth: u32) -> (usize, i32) {
    let axis = match face {
        Face::R | Face::L => 0,
        Face::U | Face::D => 1,
        Face::F | Face::B => 2,
    };
    let value = match face {
        Face::R | Face::U | Face::F => (n - depth) as i32,
        Face::L | Face::D | Face::B => depth as i32 - 1,
    };
    (axis, value)
}

/// Facet image table of a quarter turn of the whole cube (every slab) about
/// the outward axis of `face`.
pub fn whole_rotation_map(n: u32, face: Face) -> Vec<Point> {
    let g = (6 * n * n) as usize;
    let ni = n as i32;
    let mut map = vec![0 as Point; g];
    for f in Face::ALL {
        for r in 0..ni {
            for c in 0..ni {
                let (cell, normal) = facet_to_cell(n, f, r, c);
                let i = facet_index(n, f, r, c);
                map[i as usize] = cell_to_facet(n, rotate_cell(n, face, cell), rotate_dir(face, normal));
            }
        }
    }
    map
}

/// Facet image table of the quarter turn of the slab at `depth` from `face`.
fn rotation_map(n: u32, face: Face, depth: u32) -> Vec<Point> {
    let g = (6 * n * n) as usize;
    let (axis, value) = slab_coord(n, face, depth);
    let mut map: Vec<Point> = (0..g as u32).map(|i| i as Point).collect();
    let ni = n as i32;
    for f in Face::ALL {
        for r in 0..ni {
            for c in 0..ni {
                let (cell, normal) = facet_to_cell(n, f, r, c);
                if cell[axis] != value {
                    continue;
                }
                let i = facet_index(n, f, r, c);
                let cell2 = rotate_cell(n, face, cell);
                let normal2 = rotate_dir(face, normal);
                map[i as usize] = cell_to_facet(n, cell2, normal2);
            }
        }
    }
    map
}

// ---------------------------------------------------------------------------
// Classification helpers.
// ---------------------------------------------------------------------------

/// Doubled ring distance of grid line i from the middle of the face.
fn dm(n: u32, i: i32) -> i32 {
    (2 * i - (n as i32 - 1)).abs()
}

/// Circle index of a doubled distance (1-based). For odd n, `d = 0` maps to 0
/// (the fixed center).
fn circle_of_dm(parity: Parity, d: i32) -> u8 {
    match parity {
        Parity::Odd => (d / 2) as u8,
        Parity::Even => ((d + 1) / 2) as u8,
    }
}

/// The 12 geometric edges: axis the edge runs along, plus the two fixed
/// coordinates (each 0 or n−1), in the axis order x, y, z.
fn edges(n: u32) -> Vec<(usize, i32, i32)> {
    let m = n as i32 - 1;
    let mut out = Vec::with_capacity(12);
    for axis in 0..3 {
        for &b1 in &[0, m] {
            for &b2 in &[0, m] {
                out.push((axis, b1, b2));
            }
        }
    }
    out
}

fn edge_cell(edge: (usize, i32, i32), p: i32) -> [i32; 3] {
    match edge.0 {
        0 => [p, edge.1, edge.2],
        1 => [edge.1, p, edge.2],
        _ => [edge.1, edge.2, p],
    }
}

/// The two outward normals of an edge cubie, as signed axis vectors.
fn edge_normals(edge: (usize, i32, i32)) -> ([i32; 3], [i32; 3]) {
    let sign = |b: i32| if b == 0 { -1 } else { 1 };
    let (axis, b1, b2) = edge;
    let fixed_axes: [usize; 2] = match axis {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    };
    let mut normals = [[0i32; 3]; 2];
    for (v, (a, b)) in normals.iter_mut().zip(fixed_axes.iter().zip([b1, b2])) {
        v[*a] = sign(b);
    }
    (normals[0], normals[1])
}

// ---------------------------------------------------------------------------
// Construction.
// ---------------------------------------------------------------------------

pub fn build_layout(n: u32) -> Result<Layout, GeometryError> {
    build_layout_with_cap(n, DEFAULT_SIZE_CAP)
}

pub fn build_layout_with_cap(n: u32, cap: u32) -> Result<Layout, GeometryError> {
    if n < 3 {
        return Err(GeometryError::SizeTooSmall(n));
    }
    let cap = cap.min(HARD_SIZE_CAP);
    if n > cap {
        return Err(GeometryError::SizeTooLarge { n, cap });
    }

    let parity = if n % 2 == 1 { Parity::Odd } else { Parity::Even };
    let circles = match parity {
        Parity::Odd => ((n - 3) / 2) as u8,
        Parity::Even => (n / 2 - 1) as u8,
    };
    let m = n as i32 - 1;

    // Corners: 8 cells with all coordinates in {0, m}, in (x, y, z) binary
    // order. Reference facet is the one on U or D; the other two follow
    // clockwise as seen from outside the corner.
    let mut corner_slots = Vec::with_capacity(8);
    for &x in &[0, m] {
        for &y in &[0, m] {
            for &z in &[0, m] {
                let cell = [x, y, z];
                let s = [
                    if x == 0 { -1 } else { 1 },
                    if y == 0 { -1 } else { 1 },
                    if z == 0 { -1 } else { 1 },
                ];
                let normals = [[s[0], 0, 0], [0, s[1], 0], [0, 0, s[2]]];
                let reference = normals[1];
                let others: Vec<[i32; 3]> = vec![normals[0], normals[2]];
                // clockwise successor: (n_i × n_j) · s < 0
                let cross = |a: [i32; 3], b: [i32; 3]| {
                    [
                        a[1] * b[2] - a[2] * b[1],
                        a[2] * b[0] - a[0] * b[2],
                        a[0] * b[1] - a[1] * b[0],
                    ]
                };
                let dot = |a: [i32; 3], b: [i32; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
                let c0 = cross(reference, others[0]);
                let (second, third) = if dot(c0, s) < 0 {
                    (others[0], others[1])
                } else {
                    (others[1], others[0])
                };
                corner_slots.push(CornerSlot {
                    facets: [
                        cell_to_facet(n, cell, reference),
                        cell_to_facet(n, cell, second),
                        cell_to_facet(n, cell, third),
                    ],
                });
            }
        }
    }

    // Edge cubies: single edges at the midpoint (odd n), wings elsewhere.
    let edge_list = edges(n);
    let mut single_edge_slots = Vec::new();
    if parity == Parity::Odd {
        let mid = m / 2;
        for edge in &edge_list {
            let cell = edge_cell(*edge, mid);
            let (n1, n2) = edge_normals(*edge);
            let mut fs = [cell_to_facet(n, cell, n1), cell_to_facet(n, cell, n2)];
            if Face::from_normal(n2).index() < Face::from_normal(n1).index() {
                fs.swap(0, 1);
            }
            single_edge_slots.push(SingleEdgeSlot { facets: fs });
        }
    }

    let mut wing_slots: Vec<Vec<WingSlot>> = Vec::new();
    for k in 1..=circles {
        let p_low = match parity {
            Parity::Odd => (n as i32 - 1) / 2 - i32::from(k),
            Parity::Even => n as i32 / 2 - i32::from(k),
        };
        let p_high = m - p_low;
        let mut slots = Vec::with_capacity(24);
        for (e, edge) in edge_list.iter().enumerate() {
            for (j, &p) in [p_low, p_high].iter().enumerate() {
                let cell = edge_cell(*edge, p);
                let (n1, n2) = edge_normals(*edge);
                let mut fs = [cell_to_facet(n, cell, n1), cell_to_facet(n, cell, n2)];
                if Face::from_normal(n2).index() < Face::from_normal(n1).index() {
                    fs.swap(0, 1);
                }
                let idx = (2 * e + j) as u8;
                let partner = if j == 0 { idx + 1 } else { idx - 1 };
                slots.push(WingSlot {
                    facets: fs,
                    edge: e as u8,
                    partner,
                    wing_type: WingType::A, // reassigned below
                });
            }
        }
        wing_slots.push(slots);
    }

    // Centers, classified by ring distances of their grid cell.
    let mut center_corner_slots: Vec<Vec<Point>> = vec![Vec::new(); circles as usize];
    let mut center_edge_slots: Vec<Vec<Point>> = vec![Vec::new(); circles as usize];
    let mut fixed_centers = Vec::new();
    for face in Face::ALL {
        for r in 1..m {
            for c in 1..m {
                let (dr, dc) = (dm(n, r), dm(n, c));
                let facet = facet_index(n, face, r, c);
                if parity == Parity::Odd && dr == 0 && dc == 0 {
                    fixed_centers.push(facet);
                    continue;
                }
                let k = circle_of_dm(parity, dr.max(dc)) as usize;
                if dr == dc {
                    center_corner_slots[k - 1].push(facet);
                } else {
                    center_edge_slots[k - 1].push(facet);
                }
            }
        }
    }

    let mut slice_table = Vec::with_capacity(6 * (1 + circles as usize));
    for face in Face::ALL {
        slice_table.push((Gen::Face(face), 1));
    }
    for k in 1..=circles {
        for face in Face::ALL {
            slice_table.push((Gen::Slice(face, k), n / 2 + 1 - u32::from(k)));
        }
    }

    let mut layout = Layout {
        n,
        parity,
        circles,
        corner_slots,
        single_edge_slots,
        wing_slots,
        center_corner_slots,
        center_edge_slots,
        fixed_centers,
        slice_table,
        slot_index: Vec::new(),
    };
    layout.rebuild_slot_index();

    if circles > 0 {
        assign_wing_structure(&mut layout)?;
        layout.rebuild_slot_index();
    }
    Ok(layout)
}

/// Restriction of one generator to the wing slots, per circle:
/// `perms[k-1][s]` is the image slot of slot `s`.
pub struct WingAction {
    pub gen: Gen,
    pub perms: Vec<Vec<u8>>,
}

/// Extract the wing-slot permutations of every generator from its facet map.
pub fn wing_actions(layout: &Layout) -> Vec<WingAction> {
    layout
        .generators()
        .into_iter()
        .map(|gen| {
            let map = layout.generator_facet_map(gen).expect("valid generator");
            let perms = (1..=layout.circles)
                .map(|k| {
                    layout.wing_slots[k as usize - 1]
                        .iter()
                        .map(|slot| {
                            let image = layout.slot_of(map[slot.facets[0] as usize]);
                            debug_assert_eq!(image.class, PieceClass::Wings(k));
                            image.slot as u8
                        })
                        .collect()
                })
                .collect();
            WingAction { gen, perms }
        })
        .collect()
}

/// 2-colour the wing slots of every circle so that R, L, U and D preserve the
/// colour while F, B and every slice move invert it. The class containing
/// slot 0 is named `A`. Fails if the constraint graph has an odd cycle.
pub fn wing_typing(
    circles: u8,
    actions: &[WingAction],
) -> Result<Vec<Vec<WingType>>, GeometryError> {
    let mut all = Vec::with_capacity(circles as usize);
    for k in 1..=circles {
        let constraints: Vec<(bool, &[u8])> = actions
            .iter()
            .map(|a| (a.gen.inverts_wing_type(), a.perms[k as usize - 1].as_slice()))
            .collect();
        let colors = two_color(24, &constraints).ok_or(GeometryError::TypingInconsistent {
            circle: k,
            context: "a/b slot typing",
        })?;
        all.push(
            colors
                .into_iter()
                .map(|c| if c { WingType::B } else { WingType::A })
                .collect(),
        );
    }
    Ok(all)
}

/// Solve `color[s] XOR color[perm[s]] = invert` over every constraint whose
/// permutation actually moves `s`. Vertices in no constraint stay `false`.
fn two_color(size: usize, constraints: &[(bool, &[u8])]) -> Option<Vec<bool>> {
    let varying: Vec<(Vec<bool>, &[u8])> = constraints
        .iter()
        .map(|&(invert, perm)| (vec![invert; size], perm))
        .collect();
    two_color_varying(size, &varying)
}

/// Assign wing types and anchor each wing slot's facet order so that R, L, U,
/// D map first facets to first facets while F, B and the slice moves reverse
/// them.
fn assign_wing_structure(layout: &mut Layout) -> Result<(), GeometryError> {
    let actions = wing_actions(layout);
    let types = wing_typing(layout.circles, &actions)?;

    // Per-generator facet maps, reused for the orientation anchoring.
    let maps: Vec<Vec<Point>> = layout
        .generators()
        .into_iter()
        .map(|g| layout.generator_facet_map(g).expect("valid generator"))
        .collect();

    for k in 1..=layout.circles {
        let kk = k as usize - 1;
        // flips[g][s]: does generator g send slot s's first facet to the
        // second facet of the image slot (in the current base order)?
        let constraints: Vec<(Vec<bool>, &[u8])> = actions
            .iter()
            .zip(&maps)
            .map(|(a, map)| {
                let perm = a.perms[kk].as_slice();
                let flips = layout.wing_slots[kk]
                    .iter()
                    .enumerate()
                    .map(|(s, slot)| {
                        let image = &layout.wing_slots[kk][perm[s] as usize];
                        let target = map[slot.facets[0] as usize];
                        let base_flip = target == image.facets[1];
                        debug_assert!(base_flip || target == image.facets[0]);
                        base_flip ^ a.gen.inverts_wing_type()
                    })
                    .collect();
                (flips, perm)
            })
            .collect();
        let reversal = two_color_varying(24, &constraints).ok_or(
            GeometryError::TypingInconsistent {
                circle: k,
                context: "orientation anchoring",
            },
        )?;
        for (s, slot) in layout.wing_slots[kk].iter_mut().enumerate() {
            slot.wing_type = types[kk][s];
            if reversal[s] {
                slot.facets.swap(0, 1);
            }
        }
    }
    Ok(())
}

/// Like [`two_color`] but with a per-vertex parity per constraint: solve
/// `color[s] XOR color[perm[s]] = parity[s]` for every `s` moved by `perm`.
///
/// Forward edges suffice: each constraint is a permutation, so its directed
/// edges lie on cycles and forward traversal both covers every weak component
/// and closes every cycle, which is where an odd cycle would be detected.
fn two_color_varying(size: usize, constraints: &[(Vec<bool>, &[u8])]) -> Option<Vec<bool>> {
    let mut color: Vec<Option<bool>> = vec![None; size];
    for start in 0..size {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut queue = vec![start];
        let mut head = 0;
        while head < queue.len() {
            let s = queue[head];
            head += 1;
            let cs = color[s].unwrap();
            for (parity, perm) in constraints {
                let to = perm[s] as usize;
                if to == s {
                    continue;
                }
                let want = cs ^ parity[s];
                match color[to] {
                    None => {
                        color[to] = Some(want);
                        queue.push(to);
                    }
                    Some(have) if have != want => return None,
                    _ => {}
                }
            }
        }
    }
    color.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_pocket_cube_and_oversize() {
        assert_eq!(build_layout(2).unwrap_err(), GeometryError::SizeTooSmall(2));
        assert_eq!(build_layout(1).unwrap_err(), GeometryError::SizeTooSmall(1));
        assert!(matches!(
            build_layout(65).unwrap_err(),
            GeometryError::SizeTooLarge { n: 65, cap: 64 }
        ));
        assert!(build_layout_with_cap(65, 70).is_ok());
        assert!(matches!(
            build_layout_with_cap(105, 200).unwrap_err(),
            GeometryError::SizeTooLarge { .. }
        ));
    }

    #[test]
    fn classic_cube_is_the_degenerate_odd_case() {
        let l = build_layout(3).unwrap();
        assert_eq!(l.parity, Parity::Odd);
        assert_eq!(l.circles, 0);
        assert_eq!(l.corner_slots.len(), 8);
        assert_eq!(l.single_edge_slots.len(), 12);
        assert!(l.wing_slots.is_empty());
        assert_eq!(l.fixed_centers.len(), 6);
        assert_eq!(l.generators().len(), 6);
    }

    #[test]
    fn revenge_counts() {
        let l = build_layout(4).unwrap();
        assert_eq!(l.parity, Parity::Even);
        assert_eq!(l.circles, 1);
        assert_eq!(l.wing_slots[0].len(), 24);
        assert_eq!(l.center_corner_slots[0].len(), 24);
        assert_eq!(l.center_edge_slots[0].len(), 0);
        assert!(l.single_edge_slots.is_empty());
        assert!(l.fixed_centers.is_empty());
        assert_eq!(l.generators().len(), 12);
    }

    #[test]
    fn professor_counts() {
        let l = build_layout(5).unwrap();
        assert_eq!(l.circles, 1);
        assert_eq!(l.corner_slots.len(), 8);
        assert_eq!(l.single_edge_slots.len(), 12);
        assert_eq!(l.wing_slots[0].len(), 24);
        assert_eq!(l.center_corner_slots[0].len(), 24);
        assert_eq!(l.center_edge_slots[0].len(), 24);
        assert_eq!(l.fixed_centers.len(), 6);
        // 8 corners + 36 edges + 54 centers
        let cubies = 8
            + l.single_edge_slots.len()
            + l.wing_slots[0].len()
            + l.center_corner_slots[0].len()
            + l.center_edge_slots[0].len()
            + l.fixed_centers.len();
        assert_eq!(cubies, 98);
    }

    #[test]
    fn seven_cube_center_edge_counts() {
        let l = build_layout(7).unwrap();
        assert_eq!(l.circles, 2);
        assert_eq!(l.center_edge_slots[0].len(), 24);
        assert_eq!(l.center_edge_slots[1].len(), 72);
        // sum z_k = 24 K^2
        assert_eq!(24 + 72, 24 * 2 * 2);
    }

    #[test]
    fn classification_partitions_every_facet() {
        for n in 3..=12 {
            let l = build_layout(n).unwrap();
            let g = l.facet_count();
            let mut seen = vec![false; g];
            let mut mark = |f: Point| {
                assert!(!seen[f as usize], "facet {f} classified twice (n={n})");
                seen[f as usize] = true;
            };
            for s in &l.corner_slots {
                s.facets.iter().for_each(|&f| mark(f));
            }
            for s in &l.single_edge_slots {
                s.facets.iter().for_each(|&f| mark(f));
            }
            for ws in &l.wing_slots {
                assert_eq!(ws.len(), 24);
                for s in ws {
                    s.facets.iter().for_each(|&f| mark(f));
                }
            }
            for (i, cc) in l.center_corner_slots.iter().enumerate() {
                assert_eq!(cc.len(), 24, "n={n} circle {}", i + 1);
                cc.iter().for_each(|&f| mark(f));
            }
            for (i, ce) in l.center_edge_slots.iter().enumerate() {
                let k = i as u32 + 1;
                let expect = match l.parity {
                    Parity::Odd => 24 * (2 * k - 1),
                    Parity::Even => 48 * (k - 1),
                };
                assert_eq!(ce.len() as u32, expect, "n={n} circle {k}");
                ce.iter().for_each(|&f| mark(f));
            }
            l.fixed_centers.iter().for_each(|&f| mark(f));
            assert!(seen.iter().all(|&s| s), "unclassified facets for n={n}");
            // c = 6(n-2)^2 and e = 12(n-2)
            let centers: usize = l.center_corner_slots.iter().map(Vec::len).sum::<usize>()
                + l.center_edge_slots.iter().map(Vec::len).sum::<usize>()
                + l.fixed_centers.len();
            assert_eq!(centers as u32, 6 * (n - 2) * (n - 2));
            let edges =
                l.single_edge_slots.len() + l.wing_slots.iter().map(Vec::len).sum::<usize>();
            assert_eq!(edges as u32, 12 * (n - 2));
        }
    }

    #[test]
    fn slice_depths() {
        let l = build_layout(5).unwrap();
        assert_eq!(l.depth(Gen::Face(Face::R)), Some(1));
        assert_eq!(l.depth(Gen::Slice(Face::R, 1)), Some(2));
        assert_eq!(l.depth(Gen::Slice(Face::R, 2)), None);
        let l6 = build_layout(6).unwrap();
        assert_eq!(l6.depth(Gen::Slice(Face::F, 1)), Some(3));
        assert_eq!(l6.depth(Gen::Slice(Face::F, 2)), Some(2));
        let l7 = build_layout(7).unwrap();
        // middle slice (depth 4) belongs to no generator
        assert!(l7.slice_table.iter().all(|&(_, d)| d != 4));
    }

    #[test]
    fn wing_pairs_are_mirrored_and_straddle_types() {
        for n in 4..=9 {
            let l = build_layout(n).unwrap();
            for ws in &l.wing_slots {
                for (i, s) in ws.iter().enumerate() {
                    let p = &ws[s.partner as usize];
                    assert_eq!(p.partner as usize, i);
                    assert_eq!(p.edge, s.edge);
                    assert_ne!(p.wing_type, s.wing_type, "pair must straddle types");
                }
                let a_count = ws.iter().filter(|s| s.wing_type == WingType::A).count();
                assert_eq!(a_count, 12);
                assert_eq!(ws[0].wing_type, WingType::A);
            }
        }
    }

    #[test]
    fn typing_behaviour_under_moves() {
        // R, L, U, D preserve wing-slot type; F, B and slices invert it.
        for n in [4u32, 5, 6, 7] {
            let l = build_layout(n).unwrap();
            for gen in l.generators() {
                let map = l.generator_facet_map(gen).unwrap();
                for ws in &l.wing_slots {
                    for s in ws {
                        if map[s.facets[0] as usize] == s.facets[0] {
                            continue; // not moved by this generator
                        }
                        let img = l.slot_of(map[s.facets[0] as usize]);
                        let PieceClass::Wings(k) = img.class else {
                            panic!("wing left its class");
                        };
                        let t = l.wing_slots[k as usize - 1][img.slot as usize].wing_type;
                        if gen.inverts_wing_type() {
                            assert_ne!(t, s.wing_type, "n={n} {gen} should invert");
                        } else {
                            assert_eq!(t, s.wing_type, "n={n} {gen} should preserve");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn facet_orders_follow_the_orientation_anchoring() {
        // First facets map to first facets under R, L, U, D and to second
        // facets under F, B and slice moves.
        for n in [4u32, 5, 6] {
            let l = build_layout(n).unwrap();
            for gen in l.generators() {
                let map = l.generator_facet_map(gen).unwrap();
                for ws in &l.wing_slots {
                    for s in ws {
                        let img_ref = l.slot_of(map[s.facets[0] as usize]);
                        let PieceClass::Wings(k) = img_ref.class else {
                            unreachable!()
                        };
                        let img = &l.wing_slots[k as usize - 1][img_ref.slot as usize];
                        if s.facets[0] as usize == map[s.facets[0] as usize] as usize {
                            continue; // not moved
                        }
                        let flipped = map[s.facets[0] as usize] == img.facets[1];
                        assert_eq!(flipped, gen.inverts_wing_type(), "n={n} {gen}");
                    }
                }
            }
        }
    }

    #[test]
    fn slice_of_inner_move_meets_only_matching_circles() {
        // The C_{f,1} slab's center facets on lateral faces all belong to
        // circles >= 1 and include circle 1 itself.
        let l = build_layout(7).unwrap();
        let map = l.generator_facet_map(Gen::Slice(Face::R, 1)).unwrap();
        let mut touched = std::collections::BTreeSet::new();
        for (i, &j) in map.iter().enumerate() {
            if i != j as usize {
                match l.slot_of(i as Point).class {
                    PieceClass::CenterCorners(k) => {
                        touched.insert(("cc", k));
                    }
                    PieceClass::CenterEdges(k) => {
                        touched.insert(("ce", k));
                    }
                    _ => {}
                }
            }
        }
        assert!(touched.contains(&("cc", 1)));
        assert!(touched.contains(&("ce", 1)));
        assert!(touched.contains(&("ce", 2)));
        assert!(!touched.contains(&("cc", 2)));
    }

    #[test]
    fn typing_constraint_graph_is_connected_per_circle() {
        // a single component means the typing is unique up to one global
        // a/b swap per circle
        for n in 4..=12 {
            let l = build_layout(n).unwrap();
            let actions = wing_actions(&l);
            for k in 0..l.circles as usize {
                let mut reached = vec![false; 24];
                let mut queue = vec![0usize];
                reached[0] = true;
                while let Some(s) = queue.pop() {
                    for action in &actions {
                        let t = action.perms[k][s] as usize;
                        if !reached[t] {
                            reached[t] = true;
                            queue.push(t);
                        }
                    }
                }
                assert!(
                    reached.iter().all(|&r| r),
                    "n={n} circle {}: typing graph disconnected",
                    k + 1
                );
            }
        }
    }

    #[test]
    fn center_edge_suborbits_match_move_orbits() {
        // the declared sub-orbits are exactly the orbits of the facets under
        // the generator maps
        for n in [5u32, 6, 7, 8, 9] {
            let l = build_layout(n).unwrap();
            let maps: Vec<Vec<Point>> = l
                .generators()
                .into_iter()
                .map(|g| l.generator_facet_map(g).unwrap())
                .collect();
            let mut orbit_of = vec![usize::MAX; l.facet_count()];
            let mut next = 0usize;
            for start in 0..l.facet_count() {
                if orbit_of[start] != usize::MAX {
                    continue;
                }
                let id = next;
                next += 1;
                let mut queue = vec![start];
                orbit_of[start] = id;
                while let Some(p) = queue.pop() {
                    for m in &maps {
                        let q = m[p] as usize;
                        if orbit_of[q] == usize::MAX {
                            orbit_of[q] = id;
                            queue.push(q);
                        }
                    }
                }
            }
            for k in 1..=l.circles {
                let facets = &l.center_edge_slots[k as usize - 1];
                if facets.is_empty() {
                    continue;
                }
                let declared = l.center_edge_suborbits(k);
                assert_eq!(
                    declared.iter().map(|(_, s)| s.len()).sum::<usize>(),
                    facets.len()
                );
                for (j, slots) in &declared {
                    assert_eq!(slots.len(), 24, "n={n} k={k} j={j}");
                    let ids: std::collections::BTreeSet<usize> = slots
                        .iter()
                        .map(|&s| orbit_of[facets[s as usize] as usize])
                        .collect();
                    assert_eq!(ids.len(), 1, "n={n} k={k} j={j}: not one move orbit");
                }
                // distinct groups are distinct orbits
                let all_ids: std::collections::BTreeSet<usize> = declared
                    .iter()
                    .map(|(_, s)| orbit_of[facets[s[0] as usize] as usize])
                    .collect();
                assert_eq!(all_ids.len(), declared.len(), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn corner_reference_facet_is_on_u_or_d() {
        let l = build_layout(5).unwrap();
        for s in &l.corner_slots {
            let f = s.facets[0] as usize / 25;
            assert!(f == Face::U.index() || f == Face::D.index());
        }
    }
}
