//! The solvability criterion: validity of labelled configurations for both
//! parities, and solvability of colour-only states.
//!
//! Odd cubes: a configuration is valid iff
//! 1. sgn(σ) = sgn(τ) = sgn(ρ_{c_k}) for every circle k,
//! 2. sgn(τ_k) = sgn(σ)·sgn(ρ_{e_k}) for every circle k,
//! 3. Σ x_i ≡ 0 (mod 3),
//! 4. Σ z_i ≡ 0 (mod 2),
//! 5. y at each slot is 1 − δ(slot type, occupant type).
//!
//! Even cubes: sgn(σ) = sgn(ρ_{c_k}); Σ x_i ≡ 0 (mod 3); the y/δ condition;
//! and sgn(ρ_{e_k}) = +1 for 2 ≤ k ≤ K.
//!
//! `validate` is a pure predicate: it never normalizes or repairs its input.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::{check_well_formed, perm_sign, AssemblyModel, Configuration};
use crate::engine::{whole_cube_rotations, ColorState, Permutation};
use crate::geometry::{Layout, Parity, Point};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LawError {
    #[error("malformed configuration: {0}")]
    MalformedConfiguration(String),
    #[error("illegal colour multiset: {0}")]
    IllegalColorMultiset(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConditionResult {
    pub id: String,
    pub pass: bool,
    pub detail: String,
}

/// Per-condition report; `valid` holds exactly when every condition passes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Verdict {
    pub valid: bool,
    pub conditions: Vec<ConditionResult>,
}

impl Verdict {
    fn from_conditions(conditions: Vec<ConditionResult>) -> Verdict {
        Verdict {
            valid: conditions.iter().all(|c| c.pass),
            conditions,
        }
    }

    pub fn failed_ids(&self) -> Vec<&str> {
        self.conditions
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.id.as_str())
            .collect()
    }
}

fn condition(id: &str, pass: bool, detail: String) -> ConditionResult {
    ConditionResult {
        id: id.to_string(),
        pass,
        detail,
    }
}

/// Check the y/δ orientation condition over every circle: the wing from home
/// slot j occupying slot t must have y[t] = 1 exactly when the two types
/// differ.
fn wing_orientation_ok(config: &Configuration, layout: &Layout) -> (bool, String) {
    for k in 0..layout.circles as usize {
        let slots = &layout.wing_slots[k];
        for (j, &t) in config.tau_k[k].iter().enumerate() {
            let mismatch = slots[j].wing_type != slots[t as usize].wing_type;
            if (config.y[k][t as usize] == 1) != mismatch {
                return (
                    false,
                    format!(
                        "circle {} slot {}: y={} but type mismatch is {}",
                        k + 1,
                        t,
                        config.y[k][t as usize],
                        mismatch
                    ),
                );
            }
        }
    }
    (true, "y = 1 - delta at every wing".to_string())
}

/// Validity of a labelled configuration against the first law.
pub fn validate(config: &Configuration, layout: &Layout) -> Result<Verdict, LawError> {
    check_well_formed(config, layout).map_err(|e| LawError::MalformedConfiguration(e.to_string()))?;
    let sign_sigma = perm_sign(&config.sigma);
    let x_sum: u32 = config.x.iter().map(|&v| u32::from(v)).sum();
    let mut conditions = Vec::new();
    match layout.parity {
        Parity::Odd => {
            let sign_tau = perm_sign(&config.tau);
            let pass1 = sign_tau == sign_sigma
                && config.rho_c.iter().all(|p| perm_sign(p) == sign_sigma);
            conditions.push(condition(
                "1-signs",
                pass1,
                format!(
                    "sgn(sigma)={sign_sigma}, sgn(tau)={sign_tau}, sgn(rho_c)={:?}",
                    config.rho_c.iter().map(|p| perm_sign(p)).collect::<Vec<_>>()
                ),
            ));
            let pass2 = config
                .tau_k
                .iter()
                .zip(&config.rho_e)
                .all(|(t, e)| perm_sign(t) == sign_sigma * perm_sign(e));
            conditions.push(condition(
                "2-wing-signs",
                pass2,
                format!(
                    "sgn(tau_k)={:?}, sgn(rho_e)={:?}",
                    config.tau_k.iter().map(|p| perm_sign(p)).collect::<Vec<_>>(),
                    config.rho_e.iter().map(|p| perm_sign(p)).collect::<Vec<_>>()
                ),
            ));
            conditions.push(condition(
                "3-corner-twist",
                x_sum.is_multiple_of(3),
                format!("sum x = {x_sum} (mod 3: {})", x_sum % 3),
            ));
            let z_sum: u32 = config.z.iter().map(|&v| u32::from(v)).sum();
            conditions.push(condition(
                "4-single-flip",
                z_sum.is_multiple_of(2),
                format!("sum z = {z_sum} (mod 2: {})", z_sum % 2),
            ));
            let (pass5, detail) = wing_orientation_ok(config, layout);
            conditions.push(condition("5-wing-orientation", pass5, detail));
        }
        Parity::Even => {
            let pass1 = config.rho_c.iter().all(|p| perm_sign(p) == sign_sigma);
            conditions.push(condition(
                "1-signs",
                pass1,
                format!(
                    "sgn(sigma)={sign_sigma}, sgn(rho_c)={:?}",
                    config.rho_c.iter().map(|p| perm_sign(p)).collect::<Vec<_>>()
                ),
            ));
            conditions.push(condition(
                "2-corner-twist",
                x_sum.is_multiple_of(3),
                format!("sum x = {x_sum} (mod 3: {})", x_sum % 3),
            ));
            let (pass3, detail) = wing_orientation_ok(config, layout);
            conditions.push(condition("3-wing-orientation", pass3, detail));
            let pass4 = config.rho_e.iter().skip(1).all(|p| perm_sign(p) == 1);
            conditions.push(condition(
                "4-center-edge-signs",
                pass4,
                format!(
                    "sgn(rho_e)={:?} for circles 2..",
                    config.rho_e.iter().skip(1).map(|p| perm_sign(p)).collect::<Vec<_>>()
                ),
            ));
        }
    }
    Ok(Verdict::from_conditions(conditions))
}

/// Validity with the refined center-edge conditions added.
///
/// The published condition list is complete for n ≤ 5 but misses, from n = 6
/// on, that center edges decompose into 24-slot sub-orbits no move can mix
/// (the axis cells and two chirality classes per oblique depth pair). This
/// check appends one condition covering the refinement: the sub-orbit
/// partition must be preserved, and each oblique family's sign must equal
/// sgn(σ)·sgn(τ_k)·sgn(τ_j). With it, validity coincides with membership in
/// the move group at every size; for n ≤ 5 the verdict equals [`validate`].
pub fn validate_complete(config: &Configuration, layout: &Layout) -> Result<Verdict, LawError> {
    let mut verdict = validate(config, layout)?;
    let has_oblique = (1..=layout.circles)
        .any(|k| layout.center_edge_count(k) > if layout.parity == Parity::Odd { 24 } else { 0 });
    if !has_oblique {
        return Ok(verdict);
    }
    let id = match layout.parity {
        Parity::Odd => "6-center-edge-orbits",
        Parity::Even => "5-center-edge-orbits",
    };
    let sign_sigma = perm_sign(&config.sigma);
    let mut pass = true;
    let mut detail = String::from("sub-orbits preserved with coupled signs");
    'outer: for k in 1..=layout.circles {
        if layout.center_edge_count(k) == 0 {
            continue;
        }
        let kk = k as usize - 1;
        let suborbits = layout.center_edge_suborbits(k);
        let mut member = vec![usize::MAX; layout.center_edge_count(k)];
        for (g, (_, slots)) in suborbits.iter().enumerate() {
            for &s in slots {
                member[s as usize] = g;
            }
        }
        for (g, (j, slots)) in suborbits.iter().enumerate() {
            // partition: every cubie of this sub-orbit stays inside it
            for &s in slots {
                let target = config.rho_e[kk][s as usize] as usize;
                if member[target] != g {
                    pass = false;
                    detail = format!(
                        "circle {k}: a center edge leaves its sub-orbit (slot {s} -> {target})"
                    );
                    break 'outer;
                }
            }
            if *j == 0 {
                continue; // axis sign is pinned by the published conditions
            }
            // induced sign of the restriction to this family
            let index_of: std::collections::BTreeMap<u16, usize> = slots
                .iter()
                .enumerate()
                .map(|(i, &s)| (s, i))
                .collect();
            let restricted: Vec<usize> = slots
                .iter()
                .map(|&s| index_of[&{ config.rho_e[kk][s as usize] }])
                .collect();
            let family_sign = perm_sign(&restricted);
            let coupled = sign_sigma
                * perm_sign(&config.tau_k[kk])
                * perm_sign(&config.tau_k[*j as usize - 1]);
            if family_sign != coupled {
                pass = false;
                detail = format!(
                    "circle {k} pair ({k},{j}): family sign {family_sign} != sgn(sigma)·sgn(tau_{k})·sgn(tau_{j}) = {coupled}"
                );
                break 'outer;
            }
        }
    }
    verdict.conditions.push(condition(id, pass, detail));
    verdict.valid = verdict.valid && pass;
    Ok(verdict)
}

// ---------------------------------------------------------------------------
// Observable (colour-only) solvability.
// ---------------------------------------------------------------------------

/// Colour of a facet in the solved state under the identity scheme.
fn solved_color(layout: &Layout, facet: Point) -> u8 {
    (facet as usize / (layout.n * layout.n) as usize) as u8
}

struct ObservableParts {
    sigma: Vec<u8>,
    x: Vec<u8>,
    tau: Vec<u8>,
    z: Vec<u8>,
}

/// Identify corners and single edges from colours; they are uniquely
/// determined because their colour sets are distinct.
fn identify_unique_pieces(
    state: &ColorState,
    layout: &Layout,
) -> Result<ObservableParts, LawError> {
    let color = |f: Point| state.colors[f as usize];
    let mut sigma = vec![u8::MAX; 8];
    let mut x = vec![0u8; 8];
    for (t, slot) in layout.corner_slots.iter().enumerate() {
        let mut found = None;
        for (j, home) in layout.corner_slots.iter().enumerate() {
            for twist in 0..3u8 {
                if (0..3).all(|q| {
                    color(slot.facets[(twist as usize + q) % 3])
                        == solved_color(layout, home.facets[q])
                }) {
                    found = Some((j, twist));
                }
            }
        }
        let Some((j, twist)) = found else {
            return Err(LawError::IllegalColorMultiset(format!(
                "corner slot {t} shows colours matching no corner cubie"
            )));
        };
        if sigma[j] != u8::MAX {
            return Err(LawError::IllegalColorMultiset(format!(
                "corner cubie {j} appears twice"
            )));
        }
        sigma[j] = t as u8;
        x[t] = twist;
    }
    let mut tau = vec![u8::MAX; layout.single_edge_slots.len()];
    let mut z = vec![0u8; layout.single_edge_slots.len()];
    for (t, slot) in layout.single_edge_slots.iter().enumerate() {
        let mut found = None;
        for (j, home) in layout.single_edge_slots.iter().enumerate() {
            for flip in 0..2u8 {
                if (0..2).all(|q| {
                    color(slot.facets[q ^ flip as usize]) == solved_color(layout, home.facets[q])
                }) {
                    found = Some((j, flip));
                }
            }
        }
        let Some((j, flip)) = found else {
            return Err(LawError::IllegalColorMultiset(format!(
                "single-edge slot {t} shows colours matching no edge cubie"
            )));
        };
        if tau[j] != u8::MAX {
            return Err(LawError::IllegalColorMultiset(format!(
                "single edge {j} appears twice"
            )));
        }
        tau[j] = t as u8;
        z[t] = flip;
    }
    Ok(ObservableParts { sigma, x, tau, z })
}

/// Check center colour counts: every circle must show each face colour
/// equally often within each class.
fn check_center_multisets(state: &ColorState, layout: &Layout) -> Result<(), LawError> {
    for k in 1..=layout.circles {
        for (name, facets) in [
            ("center corners", &layout.center_corner_slots[k as usize - 1]),
            ("center edges", &layout.center_edge_slots[k as usize - 1]),
        ] {
            if facets.is_empty() {
                continue;
            }
            let mut counts = [0usize; 6];
            for &f in facets {
                counts[state.colors[f as usize] as usize] += 1;
            }
            let want = facets.len() / 6;
            if counts.iter().any(|&c| c != want) {
                return Err(LawError::IllegalColorMultiset(format!(
                    "{name} of circle {k} show colour counts {counts:?}, expected {want} each"
                )));
            }
        }
    }
    Ok(())
}

/// For each circle, group wing slots by the occupant's colour pair and check
/// that some a/b labelling of each pair satisfies the orientation condition.
fn wing_pairs_satisfiable(state: &ColorState, layout: &Layout) -> Result<(bool, String), LawError> {
    let color = |f: Point| state.colors[f as usize];
    for k in 0..layout.circles as usize {
        let slots = &layout.wing_slots[k];
        // home slots by solved colour pair
        let mut homes: std::collections::BTreeMap<(u8, u8), Vec<usize>> = Default::default();
        for (j, slot) in slots.iter().enumerate() {
            let a = solved_color(layout, slot.facets[0]);
            let b = solved_color(layout, slot.facets[1]);
            homes.entry((a.min(b), a.max(b))).or_default().push(j);
        }
        // occupied slots by shown colour pair
        let mut shown: std::collections::BTreeMap<(u8, u8), Vec<usize>> = Default::default();
        for (t, slot) in slots.iter().enumerate() {
            let a = color(slot.facets[0]);
            let b = color(slot.facets[1]);
            if a == b {
                return Err(LawError::IllegalColorMultiset(format!(
                    "wing slot {t} of circle {} shows one colour twice",
                    k + 1
                )));
            }
            shown.entry((a.min(b), a.max(b))).or_default().push(t);
        }
        for (pair, ts) in &shown {
            let Some(hs) = homes.get(pair) else {
                return Err(LawError::IllegalColorMultiset(format!(
                    "circle {}: colours {pair:?} match no wing pair",
                    k + 1
                )));
            };
            if ts.len() != 2 {
                return Err(LawError::IllegalColorMultiset(format!(
                    "circle {}: colours {pair:?} appear on {} wings, expected 2",
                    k + 1,
                    ts.len()
                )));
            }
            // orientation of interpreting the occupant of slot t as cubie h
            let orient = |t: usize, h: usize| -> u8 {
                let o0 = color(slots[t].facets[0]);
                let h0 = solved_color(layout, slots[h].facets[0]);
                u8::from(o0 != h0)
            };
            let fits = |t: usize, h: usize| -> bool {
                let mismatch = slots[t].wing_type != slots[h].wing_type;
                (orient(t, h) == 1) == mismatch
            };
            let ok = (fits(ts[0], hs[0]) && fits(ts[1], hs[1]))
                || (fits(ts[0], hs[1]) && fits(ts[1], hs[0]));
            if !ok {
                return Ok((
                    false,
                    format!(
                        "circle {}: no labelling of the pair at slots {:?} satisfies y = 1 - delta",
                        k + 1,
                        ts
                    ),
                ));
            }
        }
    }
    Ok((true, "every pair admits a labelling".to_string()))
}

fn validate_observable_fixed(
    state: &ColorState,
    layout: &Layout,
    model: AssemblyModel,
) -> Result<Verdict, LawError> {
    check_center_multisets(state, layout)?;
    let mut conditions = Vec::new();
    if layout.parity == Parity::Odd {
        let pass = layout
            .fixed_centers
            .iter()
            .all(|&f| state.colors[f as usize] == solved_color(layout, f));
        conditions.push(condition(
            "fixed-centers",
            pass,
            "fixed centers must show their face colour".to_string(),
        ));
    }
    let parts = identify_unique_pieces(state, layout)?;
    if layout.parity == Parity::Odd {
        let ss = perm_sign(&parts.sigma);
        let st = perm_sign(&parts.tau);
        conditions.push(condition(
            "signs",
            ss == st,
            format!("sgn(sigma)={ss}, sgn(tau)={st}"),
        ));
    }
    let x_sum: u32 = parts.x.iter().map(|&v| u32::from(v)).sum();
    conditions.push(condition(
        "corner-twist",
        x_sum.is_multiple_of(3),
        format!("sum x = {x_sum}"),
    ));
    if layout.parity == Parity::Odd {
        let z_sum: u32 = parts.z.iter().map(|&v| u32::from(v)).sum();
        conditions.push(condition(
            "single-flip",
            z_sum.is_multiple_of(2),
            format!("sum z = {z_sum}"),
        ));
    }
    if layout.circles > 0 {
        match model {
            AssemblyModel::Mechanical => conditions.push(condition(
                "wing-pairs",
                true,
                "orientation is forced by the internal mechanism".to_string(),
            )),
            AssemblyModel::Sticker => {
                let (pass, detail) = wing_pairs_satisfiable(state, layout)?;
                conditions.push(condition("wing-pairs", pass, detail));
            }
        }
    }
    Ok(Verdict::from_conditions(conditions))
}

/// Solvability of a colour-only state under the given assembly model.
///
/// Colours are the abstract ids 0..5 bound to faces U, L, F, R, B, D. With
/// `up_to_rotation` the state is accepted if any of the 24 whole-cube
/// rotations of it validates.
pub fn validate_observable(
    state: &ColorState,
    layout: &Layout,
    model: AssemblyModel,
    up_to_rotation: bool,
) -> Result<Verdict, LawError> {
    if state.colors.len() != layout.facet_count() {
        return Err(LawError::IllegalColorMultiset(format!(
            "state has {} facets, layout has {}",
            state.colors.len(),
            layout.facet_count()
        )));
    }
    let mut counts = [0usize; 7];
    for &c in &state.colors {
        counts[(c as usize).min(6)] += 1;
    }
    let n2 = (layout.n * layout.n) as usize;
    if counts[6] != 0 || counts[..6].iter().any(|&c| c != n2) {
        return Err(LawError::IllegalColorMultiset(format!(
            "each colour must appear exactly {n2} times"
        )));
    }

    let fixed = validate_observable_fixed(state, layout, model)?;
    if fixed.valid || !up_to_rotation {
        return Ok(fixed);
    }
    for rotation in whole_cube_rotations(layout).into_iter().skip(1) {
        let rotated = rotate_colors(state, &rotation);
        if let Ok(v) = validate_observable_fixed(&rotated, layout, model) {
            if v.valid {
                return Ok(v);
            }
        }
    }
    Ok(fixed)
}

fn rotate_colors(state: &ColorState, rotation: &Permutation) -> ColorState {
    let mut colors = vec![0u8; state.colors.len()];
    for (i, &c) in state.colors.iter().enumerate() {
        colors[rotation.image(i)] = c;
    }
    ColorState {
        n: state.n,
        colors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{assemble, extract, observable, sample_configuration};
    use crate::engine::{apply, LabelledState};
    use crate::geometry::build_layout;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const SCHEME: [u8; 6] = [0, 1, 2, 3, 4, 5];

    fn random_word_state(layout: &Layout, seed: u64) -> LabelledState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = layout.generators();
        let len = rng.gen_range(20..=200);
        let mut s = LabelledState::solved(layout);
        for _ in 0..len {
            let g = gens[rng.gen_range(0..gens.len())];
            let p = crate::engine::generator_permutation(layout, g).unwrap();
            s = apply(&s, &p).unwrap();
        }
        s
    }

    #[test]
    fn initial_configuration_is_valid() {
        for n in [3u32, 4, 5, 6] {
            let l = build_layout(n).unwrap();
            let v = validate(&Configuration::initial(&l), &l).unwrap();
            assert!(v.valid, "n={n}: {:?}", v.failed_ids());
        }
    }

    #[test]
    fn single_twist_breaks_exactly_the_twist_condition() {
        let l = build_layout(5).unwrap();
        let mut c = Configuration::initial(&l);
        c.x[1] = 1;
        let v = validate(&c, &l).unwrap();
        assert!(!v.valid);
        assert_eq!(v.failed_ids(), ["3-corner-twist"]);
    }

    #[test]
    fn single_edge_transposition_breaks_the_sign_condition() {
        let l = build_layout(5).unwrap();
        let mut c = Configuration::initial(&l);
        c.tau.swap(0, 1);
        let v = validate(&c, &l).unwrap();
        assert_eq!(v.failed_ids(), ["1-signs"]);
    }

    #[test]
    fn random_words_always_validate() {
        for n in [3u32, 4, 5, 6, 7] {
            let l = build_layout(n).unwrap();
            for seed in 0..25u64 {
                let s = random_word_state(&l, seed);
                let c = extract(&s, &l).unwrap();
                let v = validate(&c, &l).unwrap();
                assert!(v.valid, "n={n} seed={seed}: {:?}", v.failed_ids());
            }
        }
    }

    #[test]
    fn condition_sensitivity_per_mutation() {
        let l = build_layout(5).unwrap();
        let s = random_word_state(&l, 42);
        let base = extract(&s, &l).unwrap();
        assert!(validate(&base, &l).unwrap().valid);

        // 1: transpose two center-corner labels
        let mut c = base.clone();
        c.rho_c[0].swap(0, 1);
        assert_eq!(validate(&c, &l).unwrap().failed_ids(), ["1-signs"]);

        // 2: transpose two same-type wings (keeps delta pattern intact)
        let mut c = base.clone();
        let (j1, j2) = {
            let t = &l.wing_slots[0];
            let mut it = (0..24).filter(|&j| t[j].wing_type == t[0].wing_type);
            (it.next().unwrap(), it.next().unwrap())
        };
        // swapping same-type cubies leaves every slot's delta unchanged,
        // so y stays as it is and only the sign flips
        c.tau_k[0].swap(j1, j2);
        assert_eq!(validate(&c, &l).unwrap().failed_ids(), ["2-wing-signs"]);

        // 3: twist one corner
        let mut c = base.clone();
        c.x[3] = (c.x[3] + 1) % 3;
        assert_eq!(validate(&c, &l).unwrap().failed_ids(), ["3-corner-twist"]);

        // 4: flip one single edge
        let mut c = base.clone();
        c.z[5] ^= 1;
        assert_eq!(validate(&c, &l).unwrap().failed_ids(), ["4-single-flip"]);

        // 5: flip one wing in place
        let mut c = base.clone();
        c.y[0][7] ^= 1;
        assert_eq!(validate(&c, &l).unwrap().failed_ids(), ["5-wing-orientation"]);
    }

    #[test]
    fn revenge_center_edge_condition_is_vacuous() {
        let l = build_layout(4).unwrap();
        let s = random_word_state(&l, 9);
        let v = validate(&extract(&s, &l).unwrap(), &l).unwrap();
        assert!(v.valid);
        let ce = v
            .conditions
            .iter()
            .find(|c| c.id == "4-center-edge-signs")
            .unwrap();
        assert!(ce.pass);
    }

    #[test]
    fn observable_solved_is_solvable() {
        for n in [3u32, 4, 5, 6] {
            let l = build_layout(n).unwrap();
            let obs = observable(&LabelledState::solved(&l), &l, &SCHEME);
            for model in [AssemblyModel::Sticker, AssemblyModel::Mechanical] {
                let v = validate_observable(&obs, &l, model, false).unwrap();
                assert!(v.valid, "n={n}: {:?}", v.failed_ids());
            }
        }
    }

    #[test]
    fn observable_scrambles_are_solvable() {
        for n in [3u32, 4, 5] {
            let l = build_layout(n).unwrap();
            for seed in 100..110u64 {
                let s = random_word_state(&l, seed);
                let obs = observable(&s, &l, &SCHEME);
                let v = validate_observable(&obs, &l, AssemblyModel::Sticker, false).unwrap();
                assert!(v.valid, "n={n} seed={seed}: {:?}", v.failed_ids());
            }
        }
    }

    #[test]
    fn corner_twisted_in_place_is_unsolvable() {
        let l = build_layout(5).unwrap();
        let mut c = Configuration::initial(&l);
        c.x[0] = 1;
        let obs = observable(&assemble(&c, &l).unwrap(), &l, &SCHEME);
        let v = validate_observable(&obs, &l, AssemblyModel::Sticker, false).unwrap();
        assert!(!v.valid);
        assert_eq!(v.failed_ids(), ["corner-twist"]);
    }

    #[test]
    fn center_label_swap_is_observably_solvable() {
        let l = build_layout(5).unwrap();
        let mut c = Configuration::initial(&l);
        c.rho_c[0].swap(0, 1); // label-level invalid
        assert!(!validate(&c, &l).unwrap().valid);
        let obs = observable(&assemble(&c, &l).unwrap(), &l, &SCHEME);
        let v = validate_observable(&obs, &l, AssemblyModel::Sticker, false).unwrap();
        assert!(v.valid, "{:?}", v.failed_ids());
    }

    #[test]
    fn rotation_flag_recovers_reoriented_odd_cubes() {
        let l = build_layout(5).unwrap();
        let solved = LabelledState::solved(&l);
        let rot = &whole_cube_rotations(&l)[5];
        let rotated = apply(&solved, rot).unwrap();
        let obs = observable(&rotated, &l, &SCHEME);
        let fixed = validate_observable(&obs, &l, AssemblyModel::Sticker, false).unwrap();
        assert!(!fixed.valid, "fixed centers pin the frame");
        let free = validate_observable(&obs, &l, AssemblyModel::Sticker, true).unwrap();
        assert!(free.valid);
    }

    #[test]
    fn mechanical_model_skips_pair_conditions() {
        let l = build_layout(5).unwrap();
        for seed in 0..200u64 {
            let c = sample_configuration(&l, AssemblyModel::Mechanical, seed);
            let obs = observable(&assemble(&c, &l).unwrap(), &l, &SCHEME);
            let vm = validate_observable(&obs, &l, AssemblyModel::Mechanical, false).unwrap();
            let vs = validate_observable(&obs, &l, AssemblyModel::Sticker, false).unwrap();
            // mechanical assemblies always satisfy the sticker pair check too
            assert_eq!(vm.valid, vs.valid, "seed={seed}");
        }
    }

    #[test]
    fn illegal_multisets_are_errors() {
        let l = build_layout(4).unwrap();
        let solved = observable(&LabelledState::solved(&l), &l, &SCHEME);
        let mut bad = solved.clone();
        bad.colors[0] = 5; // corner facet recoloured
        assert!(matches!(
            validate_observable(&bad, &l, AssemblyModel::Sticker, false),
            Err(LawError::IllegalColorMultiset(_))
        ));
    }
}
