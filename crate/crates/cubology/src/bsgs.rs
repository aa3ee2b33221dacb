//! An independent Schreier–Sims oracle over the symmetric group on the 6n²
//! facets: certified group orders, pointwise-stabilizer orders, and
//! membership tests.
//!
//! The chain is built deterministically (with a seeded random-word warmup to
//! populate deep levels early) and a full strong-generator verification pass
//! runs before any chain is returned, so reported orders are certificates,
//! not estimates. Transversals are stored as explicit permutation tables.

use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::path::Path;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::engine::Permutation;
use crate::geometry::{Layout, Point};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BsgsError {
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("cannot build a chain from an empty generator list")]
    NoGenerators,
    #[error("invalid base hint: {0}")]
    BadBaseHint(String),
    #[error("strong generator verification failed: {0}")]
    VerificationFailed(String),
}

struct Level {
    /// Position of this level's base point in the base order.
    pos: usize,
    base_point: Point,
    /// Indices into the strong generator list; every listed generator fixes
    /// all base points before `pos`.
    gens: Vec<usize>,
    /// Fundamental orbit in discovery order; `orbit[0]` is the base point.
    orbit: Vec<Point>,
    /// point -> index in `orbit`, or -1.
    orbit_pos: Vec<i32>,
    /// Transversal representative mapping the base point to each orbit point.
    fwd: Vec<Option<Permutation>>,
    /// Its inverse, used during sifting.
    inv: Vec<Option<Permutation>>,
    done_orbit: usize,
    done_gens: usize,
}

impl Level {
    fn new(pos: usize, base_point: Point, degree: usize) -> Level {
        let mut orbit_pos = vec![-1; degree];
        orbit_pos[base_point as usize] = 0;
        let mut fwd = vec![None; degree];
        let mut inv = vec![None; degree];
        fwd[base_point as usize] = Some(Permutation::identity(degree));
        inv[base_point as usize] = Some(Permutation::identity(degree));
        Level {
            pos,
            base_point,
            gens: Vec::new(),
            orbit: vec![base_point],
            orbit_pos,
            fwd,
            inv,
            done_orbit: 0,
            done_gens: 0,
        }
    }
}

/// Base and strong generating set for the subgroup generated by the input
/// permutations, with explicit transversal tables.
pub struct StabilizerChain {
    degree: usize,
    base: Vec<Point>,
    generators: Vec<Permutation>,
    strong: Vec<Permutation>,
    levels: Vec<Level>,
}

struct Builder {
    degree: usize,
    base: Vec<Point>,
    /// point -> its position in the base order
    pos_of: Vec<usize>,
    strong: Vec<Permutation>,
    strong_pos: Vec<usize>,
    levels: Vec<Level>,
    dirty: BTreeSet<usize>,
}

impl Builder {
    fn level_index(&self, pos: usize) -> Result<usize, usize> {
        self.levels.binary_search_by_key(&pos, |l| l.pos)
    }

    /// First base position whose point the permutation moves.
    fn first_moved_pos(&self, p: &Permutation) -> Option<usize> {
        (0..self.degree)
            .filter(|&i| p.image(i) != i)
            .map(|i| self.pos_of[i])
            .min()
    }

    /// Append `gen_idx` to a level's generator list and grow its orbit.
    fn extend_level(&mut self, li: usize, gen_idx: usize) {
        self.levels[li].gens.push(gen_idx);
        // apply the new generator to the existing orbit, then close under
        // the full generator set from any newly reached points
        let mut scan_new = self.levels[li].orbit.len();
        let old_len = self.levels[li].orbit.len();
        for oi in 0..old_len {
            self.orbit_step(li, oi, gen_idx);
        }
        while scan_new < self.levels[li].orbit.len() {
            for gi in 0..self.levels[li].gens.len() {
                let g = self.levels[li].gens[gi];
                self.orbit_step(li, scan_new, g);
            }
            scan_new += 1;
        }
    }

    fn orbit_step(&mut self, li: usize, orbit_idx: usize, gen_idx: usize) {
        let pt = self.levels[li].orbit[orbit_idx];
        let img = self.strong[gen_idx].image(pt as usize);
        if self.levels[li].orbit_pos[img] >= 0 {
            return;
        }
        let rep = self.levels[li].fwd[pt as usize]
            .as_ref()
            .expect("orbit point has a representative")
            .then(&self.strong[gen_idx]);
        let level = &mut self.levels[li];
        level.orbit_pos[img] = level.orbit.len() as i32;
        level.orbit.push(img as Point);
        level.inv[img] = Some(rep.inverse());
        level.fwd[img] = Some(rep);
    }

    /// Register a new strong generator at the first base position it moves.
    fn add_strong(&mut self, p: Permutation) {
        let Some(q) = self.first_moved_pos(&p) else {
            return; // identity
        };
        let gen_idx = self.strong.len();
        self.strong.push(p);
        self.strong_pos.push(q);
        let li = match self.level_index(q) {
            Ok(li) => li,
            Err(insert_at) => {
                self.levels
                    .insert(insert_at, Level::new(q, self.base[q], self.degree));
                // a fresh level's set is every strong generator fixing all
                // earlier base points
                for existing in 0..self.strong.len() - 1 {
                    if self.strong_pos[existing] >= q {
                        self.extend_level(insert_at, existing);
                    }
                }
                insert_at
            }
        };
        // the new generator belongs to this level and every one above it
        for li2 in 0..=li {
            self.extend_level(li2, gen_idx);
            self.dirty.insert(self.levels[li2].pos);
        }
    }

    /// Reduce `p` through levels with `pos > from`; the result is either the
    /// identity (member of that stabilizer) or a witness residue.
    fn sift(&self, from: usize, mut p: Permutation) -> Permutation {
        for level in &self.levels {
            if level.pos < from {
                continue;
            }
            let img = p.image(level.base_point as usize);
            if img == level.base_point as usize {
                continue;
            }
            match &level.inv[img] {
                Some(back) => p = p.then(back),
                None => return p,
            }
        }
        p
    }

    /// Process pending Schreier generators, deepest level first, until the
    /// chain is strong.
    fn process(&mut self) {
        while let Some(&pos) = self.dirty.iter().next_back() {
            self.dirty.remove(&pos);
            let li = match self.level_index(pos) {
                Ok(li) => li,
                Err(_) => continue,
            };
            let (n_orbit, n_gens) = (self.levels[li].orbit.len(), self.levels[li].gens.len());
            let (done_orbit, done_gens) = (self.levels[li].done_orbit, self.levels[li].done_gens);
            for oi in 0..n_orbit {
                for gi in 0..n_gens {
                    if oi < done_orbit && gi < done_gens {
                        continue;
                    }
                    let level = &self.levels[li];
                    let pt = level.orbit[oi];
                    let s = &self.strong[level.gens[gi]];
                    let img = s.image(pt as usize);
                    let schreier = level.fwd[pt as usize]
                        .as_ref()
                        .unwrap()
                        .then(s)
                        .then(level.inv[img].as_ref().expect("orbit is closed"));
                    if schreier.is_identity() {
                        continue;
                    }
                    let residue = self.sift(pos + 1, schreier);
                    if !residue.is_identity() {
                        self.add_strong(residue);
                    }
                }
            }
            let level = &mut self.levels[li];
            level.done_orbit = n_orbit;
            level.done_gens = n_gens;
            // adding generators deeper may have re-dirtied this level
        }
    }
}

/// Build a verified stabilizer chain for the group generated by `gens`.
///
/// The base starts with `base_hint` (when given) and is completed with the
/// remaining points in ascending order; the seed drives a random-word warmup
/// and has no effect on the certified result.
pub fn build_chain(
    gens: &[Permutation],
    base_hint: Option<&[Point]>,
    seed: u64,
) -> Result<StabilizerChain, BsgsError> {
    let Some(first) = gens.first() else {
        return Err(BsgsError::NoGenerators);
    };
    let degree = first.degree();
    for g in gens {
        if g.degree() != degree {
            return Err(BsgsError::DegreeMismatch {
                expected: degree,
                got: g.degree(),
            });
        }
    }
    let mut base = Vec::with_capacity(degree);
    let mut seen = vec![false; degree];
    if let Some(hint) = base_hint {
        for &pt in hint {
            if pt as usize >= degree {
                return Err(BsgsError::BadBaseHint(format!(
                    "point {pt} exceeds degree {degree}"
                )));
            }
            if !seen[pt as usize] {
                seen[pt as usize] = true;
                base.push(pt);
            }
        }
    }
    for pt in 0..degree {
        if !seen[pt] {
            base.push(pt as Point);
        }
    }
    let mut pos_of = vec![0usize; degree];
    for (i, &pt) in base.iter().enumerate() {
        pos_of[pt as usize] = i;
    }
    let mut builder = Builder {
        degree,
        base,
        pos_of,
        strong: Vec::new(),
        strong_pos: Vec::new(),
        levels: Vec::new(),
        dirty: BTreeSet::new(),
    };
    for g in gens {
        builder.add_strong(g.clone());
    }
    // seeded warmup: deep residues found early keep the upper levels lean
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..24 {
        let mut word = Permutation::identity(degree);
        for _ in 0..30 {
            word = word.then(&gens[rng.gen_range(0..gens.len())]);
        }
        let residue = builder.sift(0, word);
        if !residue.is_identity() {
            builder.add_strong(residue);
        }
    }
    builder.process();

    let chain = StabilizerChain {
        degree,
        base: builder.base,
        generators: gens.to_vec(),
        strong: builder.strong,
        levels: builder.levels,
    };
    chain.verify().map_err(BsgsError::VerificationFailed)?;
    Ok(chain)
}

impl StabilizerChain {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> &[Point] {
        &self.base
    }

    /// Number of strong generators held by the chain.
    pub fn strong_generator_count(&self) -> usize {
        self.strong.len()
    }

    /// Order of the generated group: the product of the fundamental orbit
    /// lengths.
    pub fn order(&self) -> BigUint {
        self.suffix_order(0)
    }

    /// Order of the stabilizer of the first `from` base points.
    pub fn suffix_order(&self, from: usize) -> BigUint {
        self.levels
            .iter()
            .filter(|l| l.pos >= from)
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Membership of a permutation in the generated group, by sifting.
    pub fn member(&self, p: &Permutation) -> Result<bool, BsgsError> {
        if p.degree() != self.degree {
            return Err(BsgsError::DegreeMismatch {
                expected: self.degree,
                got: p.degree(),
            });
        }
        Ok(self.sift(p.clone()).is_identity())
    }

    fn sift(&self, mut p: Permutation) -> Permutation {
        for level in &self.levels {
            let img = p.image(level.base_point as usize);
            if img == level.base_point as usize {
                continue;
            }
            match &level.inv[img] {
                Some(back) => p = p.then(back),
                None => return p,
            }
        }
        p
    }

    /// The deterministic certificate: every strong generator fixes the base
    /// prefix before its level, every fundamental orbit is closed with a
    /// valid transversal, and every Schreier generator sifts to the identity
    /// through the chain below its level.
    pub fn verify(&self) -> Result<(), String> {
        let mut pos_of = vec![0usize; self.degree];
        for (i, &pt) in self.base.iter().enumerate() {
            pos_of[pt as usize] = i;
        }
        for level in &self.levels {
            for &gi in &level.gens {
                let g = &self.strong[gi];
                for pt in 0..self.degree {
                    if pos_of[pt] < level.pos && g.image(pt) != pt {
                        return Err(format!(
                            "generator at level {} moves earlier base point {pt}",
                            level.pos
                        ));
                    }
                }
            }
            for (oi, &pt) in level.orbit.iter().enumerate() {
                let rep = level.fwd[pt as usize]
                    .as_ref()
                    .ok_or_else(|| format!("missing representative at level {}", level.pos))?;
                if rep.image(level.base_point as usize) != pt as usize {
                    return Err(format!("bad transversal at level {}", level.pos));
                }
                if level.orbit_pos[pt as usize] != oi as i32 {
                    return Err(format!("orbit index corrupt at level {}", level.pos));
                }
                for &gi in &level.gens {
                    let img = self.strong[gi].image(pt as usize);
                    if level.orbit_pos[img] < 0 {
                        return Err(format!("orbit not closed at level {}", level.pos));
                    }
                }
            }
        }
        // Schreier generators certify the strong generating property
        for (li, level) in self.levels.iter().enumerate() {
            for &pt in &level.orbit {
                for &gi in &level.gens {
                    let s = &self.strong[gi];
                    let img = s.image(pt as usize);
                    let schreier = level.fwd[pt as usize]
                        .as_ref()
                        .unwrap()
                        .then(s)
                        .then(level.inv[img].as_ref().unwrap());
                    let mut residue = schreier;
                    for deeper in &self.levels[li + 1..] {
                        let im = residue.image(deeper.base_point as usize);
                        if im == deeper.base_point as usize {
                            continue;
                        }
                        match &deeper.inv[im] {
                            Some(back) => residue = residue.then(back),
                            None => {
                                return Err(format!(
                                    "Schreier generator escapes the chain at level {}",
                                    level.pos
                                ))
                            }
                        }
                    }
                    if !residue.is_identity() {
                        return Err(format!(
                            "Schreier generator does not sift to identity at level {}",
                            level.pos
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Convenience free function matching the oracle vocabulary.
pub fn chain_order(chain: &StabilizerChain) -> BigUint {
    chain.order()
}

pub fn member(chain: &StabilizerChain, p: &Permutation) -> Result<bool, BsgsError> {
    chain.member(p)
}

/// Order of the subgroup fixing every listed point, computed from a chain
/// whose base enumerates the fixed points first.
pub fn pointwise_stabilizer_order(
    gens: &[Permutation],
    fixed_points: &[Point],
    seed: u64,
) -> Result<BigUint, BsgsError> {
    let mut hint: Vec<Point> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for &pt in fixed_points {
        if seen.insert(pt) {
            hint.push(pt);
        }
    }
    let chain = build_chain(gens, Some(&hint), seed)?;
    Ok(chain.suffix_order(hint.len()))
}

/// Class-major base order: corners, single edges, wings by circle, center
/// corners by circle, center edges by circle, fixed centers. Pointwise
/// stabilizers of whole classes can then be read directly off the chain.
pub fn class_major_base(layout: &Layout) -> Vec<Point> {
    let mut base = Vec::with_capacity(layout.facet_count());
    for class in layout.classes() {
        base.extend(layout.class_facets(class));
    }
    base
}

// ---------------------------------------------------------------------------
// Chain cache.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ChainFile {
    degree: usize,
    base: Vec<Point>,
    generators: Vec<Vec<Point>>,
    strong: Vec<Vec<Point>>,
}

/// Cache key for a generator set: hash of the degree and image tables.
pub fn cache_key(gens: &[Permutation]) -> String {
    let mut hasher = Sha256::new();
    if let Some(g) = gens.first() {
        hasher.update((g.degree() as u64).to_le_bytes());
    }
    let mut tables: Vec<&[Point]> = gens.iter().map(|g| g.images()).collect();
    tables.sort();
    for t in tables {
        for &p in t {
            hasher.update(p.to_le_bytes());
        }
    }
    let digest = hasher.finalize();
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

pub fn save_chain(path: &Path, chain: &StabilizerChain) -> std::io::Result<()> {
    let file = ChainFile {
        degree: chain.degree,
        base: chain.base.clone(),
        generators: chain
            .generators
            .iter()
            .map(|g| g.images().to_vec())
            .collect(),
        strong: chain.strong.iter().map(|g| g.images().to_vec()).collect(),
    };
    let mut out = std::fs::File::create(path)?;
    out.write_all(serde_json::to_string(&file)?.as_bytes())
}

/// Load a cached chain: orbits are rebuilt from the stored strong generators
/// and the full verification pass re-certifies the order. Returns `None`
/// when the file is missing, malformed, for a different generator set, or
/// fails verification.
pub fn load_chain(path: &Path, expected_gens: &[Permutation]) -> Option<StabilizerChain> {
    let mut text = String::new();
    std::fs::File::open(path)
        .ok()?
        .read_to_string(&mut text)
        .ok()?;
    let file: ChainFile = serde_json::from_str(&text).ok()?;
    let mut stored: Vec<&[Point]> = file.generators.iter().map(|v| v.as_slice()).collect();
    let mut expected: Vec<&[Point]> = expected_gens.iter().map(|g| g.images()).collect();
    stored.sort();
    expected.sort();
    if stored != expected {
        return None;
    }
    let degree = file.degree;
    if file.base.len() != degree {
        return None;
    }
    let mut pos_of = vec![usize::MAX; degree];
    for (i, &pt) in file.base.iter().enumerate() {
        if (pt as usize) >= degree || pos_of[pt as usize] != usize::MAX {
            return None;
        }
        pos_of[pt as usize] = i;
    }
    let mut builder = Builder {
        degree,
        base: file.base,
        pos_of,
        strong: Vec::new(),
        strong_pos: Vec::new(),
        levels: Vec::new(),
        dirty: BTreeSet::new(),
    };
    for images in file.strong {
        let p = Permutation::from_images(images)?;
        if p.degree() != degree {
            return None;
        }
        builder.add_strong(p);
    }
    let chain = StabilizerChain {
        degree,
        base: builder.base,
        generators: expected_gens.to_vec(),
        strong: builder.strong,
        levels: builder.levels,
    };
    chain.verify().ok()?;
    // the cached strong set must still generate a supergroup of the
    // requested generators; verification plus this check certifies the order
    for g in expected_gens {
        if !chain.member(g).ok()? {
            return None;
        }
    }
    Some(chain)
}
