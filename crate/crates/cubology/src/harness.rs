//! Executable verification of the theorem-level claims: named-move cycle
//! structures, the generator sign table, law preservation, wing typing,
//! law/membership cross-validation, subgroup orders, and Monte Carlo
//! probability estimates.
//!
//! Every suite is deterministic given (n, seed, trials). Hard assertions
//! live in `checks` and decide `passed`; generalized-family results are
//! reported in `observations` and never fail a suite.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::ToPrimitive;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bsgs::{build_chain, class_major_base, BsgsError, StabilizerChain};
use crate::codec::{
    assemble, extract, observable, sample_configuration_with, AssemblyModel, Configuration,
};
use crate::counting::factorial;
use crate::engine::{
    apply, cycle_structure, generator_permutation, sign_on_class, LabelledState, Permutation,
};
use crate::exec;
use crate::geometry::{build_layout, Gen, GeometryError, Layout, Parity, PieceClass};
use crate::law::{validate, validate_complete};
use crate::notation::named_move;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Bsgs(#[from] BsgsError),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub claim: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

/// Machine-readable suite outcome; `passed` holds iff every hard check does.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub n: u32,
    pub seed: u64,
    pub trials: u64,
    pub checks: Vec<Check>,
    pub observations: Vec<Check>,
    pub passed: bool,
}

impl Report {
    fn new(suite: &str, n: u32, seed: u64, trials: u64) -> Report {
        Report {
            suite: suite.to_string(),
            n,
            seed,
            trials,
            checks: Vec::new(),
            observations: Vec::new(),
            passed: true,
        }
    }

    fn check(&mut self, claim: impl Into<String>, expected: impl ToString, observed: impl ToString) {
        let expected = expected.to_string();
        let observed = observed.to_string();
        let pass = expected == observed;
        self.passed &= pass;
        self.checks.push(Check {
            claim: claim.into(),
            expected,
            observed,
            pass,
        });
    }

    fn observe(&mut self, claim: impl Into<String>, expected: impl ToString, observed: impl ToString) {
        let expected = expected.to_string();
        let observed = observed.to_string();
        self.observations.push(Check {
            claim: claim.into(),
            pass: expected == observed,
            expected,
            observed,
        });
    }
}

fn generator_perms(layout: &Layout) -> Vec<Permutation> {
    layout
        .generators()
        .into_iter()
        .map(|g| generator_permutation(layout, g).expect("layout generators are valid"))
        .collect()
}

/// A scramble of uniform length in [20, 200] applied to the solved state.
pub fn random_word_state<R: Rng>(layout: &Layout, gens: &[Permutation], rng: &mut R) -> LabelledState {
    let len = rng.gen_range(20..=200);
    let mut product = Permutation::identity(layout.facet_count());
    for _ in 0..len {
        product = product.then(&gens[rng.gen_range(0..gens.len())]);
    }
    apply(&LabelledState::solved(layout), &product).expect("matching degree")
}

/// Verified stabilizer chain for the full move group of size n, shared
/// across suites in this process.
pub fn certified_chain(n: u32) -> Result<Arc<StabilizerChain>, HarnessError> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<StabilizerChain>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(chain) = cache.lock().unwrap().get(&n) {
        return Ok(chain.clone());
    }
    let layout = build_layout(n)?;
    let gens = generator_perms(&layout);
    let chain = Arc::new(build_chain(&gens, Some(&class_major_base(&layout)), 0)?);
    cache.lock().unwrap().insert(n, chain.clone());
    Ok(chain)
}

// ---------------------------------------------------------------------------
// Named moves.
// ---------------------------------------------------------------------------

fn cycles_brief(layout: &Layout, p: &Permutation) -> String {
    match cycle_structure(p, layout) {
        Ok(map) if map.is_empty() => "identity".to_string(),
        Ok(map) => map
            .into_iter()
            .map(|(class, lens)| format!("{class}:{lens:?}"))
            .collect::<Vec<_>>()
            .join(" "),
        Err(_) => "class-scrambling".to_string(),
    }
}

/// Cycle-structure and sign claims for the catalogue moves.
///
/// The claimed home-size instances (z, e, w on the Professor's cube; z1,
/// z2, p, e1, e2 and the signs of m, n2 on the 6×6) are hard checks; the
/// generalized families at other sizes are observations.
pub fn verify_named_moves(n: u32) -> Result<Report, HarnessError> {
    let layout = build_layout(n)?;
    let mut report = Report::new("named-moves", n, 0, 0);
    let compile = |name: &str| {
        let word = named_move(name, n).expect("catalogue name applicable");
        crate::engine::compile(&layout, &word).expect("catalogue words compile")
    };
    let three_cycle = |class: PieceClass| format!("{class}:[3]");

    // frozen from the engine (which the certified chain orders corroborate):
    // w lands on center corners — same-depth slice slabs meet each face grid
    // on its diagonal — even though its published claim names center edges
    let hard_cycles: &[(&str, PieceClass)] = match n {
        5 => &[
            ("z", PieceClass::CenterCorners(1)),
            ("e", PieceClass::Wings(1)),
            ("w", PieceClass::CenterCorners(1)),
        ],
        6 => &[
            ("z1", PieceClass::CenterCorners(1)),
            ("z2", PieceClass::CenterCorners(2)),
            ("p", PieceClass::CenterEdges(2)),
            ("e1", PieceClass::Wings(1)),
            ("e2", PieceClass::Wings(2)),
        ],
        _ => &[],
    };
    for (name, class) in hard_cycles {
        let p = compile(name);
        report.check(
            format!("{name} is a 3-cycle on {class} and identity elsewhere"),
            three_cycle(*class),
            cycles_brief(&layout, &p),
        );
    }
    if n == 5 {
        // the published claim for w names the center edges; record the gap
        let p = compile("w");
        report.observe(
            "published claim: w is a 3-cycle on center edges",
            three_cycle(PieceClass::CenterEdges(1)),
            cycles_brief(&layout, &p),
        );
    }
    if n == 6 {
        for (name, circle) in [("m", 1u8), ("n2", 2u8)] {
            let p = compile(name);
            report.check(
                format!("{name} is odd on wings[{circle}]"),
                -1,
                sign_on_class(&p, &layout, PieceClass::Wings(circle)).unwrap(),
            );
            report.check(
                format!("{name} is even on corners"),
                1,
                sign_on_class(&p, &layout, PieceClass::Corners).unwrap(),
            );
            for class in layout.classes() {
                let is_center = matches!(
                    class,
                    PieceClass::CenterCorners(_) | PieceClass::CenterEdges(_)
                );
                if is_center {
                    report.check(
                        format!("{name} is even on {class}"),
                        1,
                        sign_on_class(&p, &layout, class).unwrap(),
                    );
                }
            }
            report.observe(
                format!("{name} cycle structure"),
                "(reported)",
                cycles_brief(&layout, &p),
            );
        }
    }

    // generalized families at every applicable circle
    let hard_names: Vec<&str> = hard_cycles.iter().map(|&(name, _)| name).collect();
    for k in 1..=layout.circles {
        let soft: &[(String, PieceClass)] = &[
            (format!("z{k}"), PieceClass::CenterCorners(k)),
            (format!("e{k}"), PieceClass::Wings(k)),
            (format!("w{k}"), PieceClass::CenterEdges(k)),
        ];
        for (name, class) in soft {
            let bare = if k == 1 {
                name[..1].to_string()
            } else {
                name.clone()
            };
            if hard_names.contains(&bare.as_str()) || hard_names.contains(&name.as_str()) {
                continue;
            }
            if layout.parity == Parity::Even && name.starts_with('w') {
                continue; // no axis center edges to cycle on even cubes
            }
            if matches!(class, PieceClass::CenterEdges(_)) && layout.center_edge_count(k) == 0 {
                continue;
            }
            let p = compile(name);
            report.observe(
                format!("{name} acts as a 3-cycle on {class}"),
                three_cycle(*class),
                cycles_brief(&layout, &p),
            );
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Sign table.
// ---------------------------------------------------------------------------

/// Expected sign of a generator's induced action on a class.
///
/// Face moves: odd on corners, single edges and every circle's center
/// corners; even on wings; on center edges odd cubes give 2k−1 four-cycles
/// (odd) while even cubes give 2k−2 (even). Slices fix corners and single
/// edges, are odd exactly on their own circle's wings, even on center
/// corners, and odd on their own circle's center edges only for odd cubes
/// (the axis four-cycle).
pub fn expected_sign(layout: &Layout, gen: Gen, class: PieceClass) -> i8 {
    let odd = layout.parity == Parity::Odd;
    match (gen, class) {
        (Gen::Face(_), PieceClass::Corners | PieceClass::SingleEdges) => -1,
        (Gen::Face(_), PieceClass::Wings(_)) => 1,
        (Gen::Face(_), PieceClass::CenterCorners(_)) => -1,
        (Gen::Face(_), PieceClass::CenterEdges(_)) => {
            if odd {
                -1
            } else {
                1
            }
        }
        (Gen::Slice(..), PieceClass::Corners | PieceClass::SingleEdges) => 1,
        (Gen::Slice(_, k), PieceClass::Wings(j)) => {
            if j == k {
                -1
            } else {
                1
            }
        }
        (Gen::Slice(..), PieceClass::CenterCorners(_)) => 1,
        (Gen::Slice(_, k), PieceClass::CenterEdges(j)) => {
            if odd && j == k {
                -1
            } else {
                1
            }
        }
        (_, PieceClass::FixedCenters) => 1,
    }
}

/// Every generator × class × circle sign against the expected table.
pub fn verify_sign_table(n: u32) -> Result<Report, HarnessError> {
    let layout = build_layout(n)?;
    let mut report = Report::new("signs", n, 0, 0);
    for gen in layout.generators() {
        let p = generator_permutation(&layout, gen).expect("valid generator");
        for class in layout.classes() {
            if class == PieceClass::FixedCenters {
                continue;
            }
            report.check(
                format!("sign of {gen} on {class}"),
                expected_sign(&layout, gen, class),
                sign_on_class(&p, &layout, class).expect("generators preserve classes"),
            );
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Law preservation.
// ---------------------------------------------------------------------------

type Mutation = (&'static str, Box<dyn Fn(&mut Configuration)>);

/// Targeted single-condition mutations of a valid configuration: each entry
/// is (condition id, mutate). Only conditions live at this size appear.
fn condition_mutations(layout: &Layout) -> Vec<Mutation> {
    let mut out: Vec<Mutation> = Vec::new();
    let odd = layout.parity == Parity::Odd;
    if odd {
        if layout.circles > 0 {
            out.push((
                "1-signs",
                Box::new(|c: &mut Configuration| c.rho_c[0].swap(0, 1)),
            ));
        } else {
            out.push(("1-signs", Box::new(|c: &mut Configuration| c.tau.swap(0, 1))));
        }
        if layout.circles > 0 {
            // swapping same-type wings keeps every slot's delta intact, so
            // only the sign condition trips
            let (j1, j2) = {
                let slots = &layout.wing_slots[0];
                let mut same = (0..24).filter(|&j| slots[j].wing_type == slots[0].wing_type);
                (same.next().unwrap(), same.next().unwrap())
            };
            out.push((
                "2-wing-signs",
                Box::new(move |c: &mut Configuration| c.tau_k[0].swap(j1, j2)),
            ));
        }
        out.push((
            "3-corner-twist",
            Box::new(|c: &mut Configuration| c.x[0] = (c.x[0] + 1) % 3),
        ));
        out.push(("4-single-flip", Box::new(|c: &mut Configuration| c.z[0] ^= 1)));
        if layout.circles > 0 {
            out.push((
                "5-wing-orientation",
                Box::new(|c: &mut Configuration| c.y[0][0] ^= 1),
            ));
        }
    } else {
        out.push((
            "1-signs",
            Box::new(|c: &mut Configuration| c.rho_c[0].swap(0, 1)),
        ));
        out.push((
            "2-corner-twist",
            Box::new(|c: &mut Configuration| c.x[0] = (c.x[0] + 1) % 3),
        ));
        out.push((
            "3-wing-orientation",
            Box::new(|c: &mut Configuration| c.y[0][0] ^= 1),
        ));
        if layout.circles >= 2 {
            out.push((
                "4-center-edge-signs",
                Box::new(|c: &mut Configuration| {
                    let last = c.rho_e.len() - 1;
                    c.rho_e[last].swap(0, 1)
                }),
            ));
        }
    }
    out
}

/// Random scrambles always validate; targeted mutations fail exactly their
/// condition.
pub fn verify_law_preservation(n: u32, trials: u64, seed: u64) -> Result<Report, HarnessError> {
    let layout = build_layout(n)?;
    let gens = generator_perms(&layout);
    let mut report = Report::new("law", n, seed, trials);

    let valid_count: u64 = exec::map_trials(trials, |t| {
        let mut rng = exec::trial_rng(seed, t);
        let state = random_word_state(&layout, &gens, &mut rng);
        let config = extract(&state, &layout).expect("word states are configurations");
        u64::from(validate(&config, &layout).expect("well-formed").valid)
    })
    .into_iter()
    .sum();
    report.check(
        format!("{trials} random scrambles validate"),
        trials,
        valid_count,
    );

    let mut rng = exec::trial_rng(seed, u64::MAX);
    let base_state = random_word_state(&layout, &gens, &mut rng);
    let base = extract(&base_state, &layout).expect("configuration");
    for (id, mutate) in condition_mutations(&layout) {
        let mut mutated = base.clone();
        mutate(&mut mutated);
        let verdict = validate(&mutated, &layout).expect("well-formed");
        report.check(
            format!("mutation targeting {id} fails exactly that condition"),
            format!("[{id:?}]"),
            format!("{:?}", verdict.failed_ids()),
        );
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Wing typing.
// ---------------------------------------------------------------------------

/// 2-colouring succeeded, classes split 12/12, pairs straddle, and the
/// moves preserve or invert slot types as the proof requires.
pub fn verify_wing_typing(n: u32) -> Result<Report, HarnessError> {
    let layout = build_layout(n)?;
    let mut report = Report::new("typing", n, 0, 0);
    if layout.circles == 0 {
        report.check("no coupled edges: typing is vacuous", "pass", "pass");
        return Ok(report);
    }
    for k in 1..=layout.circles {
        let slots = &layout.wing_slots[k as usize - 1];
        let a_count = slots
            .iter()
            .filter(|s| s.wing_type == crate::geometry::WingType::A)
            .count();
        report.check(format!("circle {k}: 12 slots of each type"), 12, a_count);
        let straddles = slots
            .iter()
            .all(|s| slots[s.partner as usize].wing_type != s.wing_type);
        report.check(
            format!("circle {k}: every pair straddles the types"),
            true,
            straddles,
        );
    }
    for gen in layout.generators() {
        let map = layout.generator_facet_map(gen).expect("valid generator");
        let mut ok = true;
        for ws in &layout.wing_slots {
            for s in ws {
                if map[s.facets[0] as usize] == s.facets[0] {
                    continue;
                }
                let img = layout.slot_of(map[s.facets[0] as usize]);
                let PieceClass::Wings(k) = img.class else {
                    ok = false;
                    continue;
                };
                let t = layout.wing_slots[k as usize - 1][img.slot as usize].wing_type;
                ok &= (t != s.wing_type) == gen.inverts_wing_type();
            }
        }
        let behaviour = if gen.inverts_wing_type() {
            "inverts"
        } else {
            "preserves"
        };
        report.check(format!("{gen} {behaviour} slot types"), true, ok);
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Law vs membership.
// ---------------------------------------------------------------------------

/// Half random words (valid), half sticker-model assemblies (mostly not):
/// the law and the stabilizer-chain oracle must agree on every trial.
pub fn cross_validate_membership(n: u32, trials: u64, seed: u64) -> Result<Report, HarnessError> {
    let layout = build_layout(n)?;
    let gens = generator_perms(&layout);
    let chain = certified_chain(n)?;
    let mut report = Report::new("membership", n, seed, trials);

    let outcomes = exec::map_trials(trials, |t| {
        let mut rng = exec::trial_rng(seed, t);
        let state = if t % 2 == 0 {
            random_word_state(&layout, &gens, &mut rng)
        } else {
            let config = sample_configuration_with(&layout, AssemblyModel::Sticker, &mut rng);
            assemble(&config, &layout).expect("samples are well-formed")
        };
        let config = extract(&state, &layout).expect("configuration");
        let lawful = validate_complete(&config, &layout).expect("well-formed").valid;
        let published = validate(&config, &layout).expect("well-formed").valid;
        let member = chain.member(&state.goes_to()).expect("matching degree");
        (lawful == member, published == member)
    });
    let agree = outcomes.iter().filter(|&&(a, _)| a).count() as u64;
    let published_agree = outcomes.iter().filter(|&&(_, b)| b).count() as u64;
    report.check(
        format!("validity and membership agree on all {trials} trials"),
        trials,
        agree,
    );
    report.observe(
        "published condition list alone agrees with membership",
        trials,
        published_agree,
    );
    Ok(report)
}

// ---------------------------------------------------------------------------
// Subgroup orders.
// ---------------------------------------------------------------------------

/// Expected pointwise-stabilizer order of a whole class, derived from the
/// certified sub-orbit structure.
pub fn expected_stabilizer_order(layout: &Layout, class: PieceClass) -> num_bigint::BigUint {
    let half24 = factorial(24) / 2u32;
    match class {
        PieceClass::Corners => factorial(8) * num_bigint::BigUint::from(3u32).pow(7) / 2u32,
        PieceClass::SingleEdges => factorial(12) * num_bigint::BigUint::from(2u32).pow(10),
        // the Revenge wing class admits odd permutations: there are no
        // center edges whose family signs couple to it
        PieceClass::Wings(_) if layout.n == 4 => factorial(24),
        PieceClass::Wings(_) => half24,
        PieceClass::CenterCorners(_) => half24,
        PieceClass::CenterEdges(k) => {
            let sub_orbits = (layout.center_edge_count(k) / 24) as u32;
            half24.pow(sub_orbits)
        }
        PieceClass::FixedCenters => num_bigint::BigUint::from(1u32),
    }
}

/// Pointwise-stabilizer order of every class against the expected table.
pub fn verify_subgroup_orders(n: u32) -> Result<Report, HarnessError> {
    let layout = build_layout(n)?;
    let gens = generator_perms(&layout);
    let mut report = Report::new("subgroups", n, 0, 0);
    for class in layout.classes() {
        if class == PieceClass::FixedCenters {
            continue;
        }
        let fixed: Vec<u16> = (0..layout.facet_count() as u16)
            .filter(|&f| layout.slot_of(f).class != class)
            .collect();
        let order = crate::bsgs::pointwise_stabilizer_order(&gens, &fixed, 0)?;
        report.check(
            format!("stabilizer of everything outside {class}"),
            expected_stabilizer_order(&layout, class),
            order,
        );
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Monte Carlo probability estimate.
// ---------------------------------------------------------------------------

const ESTIMATE_BATCH: u64 = 4096;

/// Monte Carlo estimate of the solvability probability under a model; the
/// exact value must lie within three binomial standard errors.
pub fn estimate_probability(
    n: u32,
    model: AssemblyModel,
    samples: u64,
    seed: u64,
) -> Result<Report, HarnessError> {
    let layout = build_layout(n)?;
    let scheme = [0u8, 1, 2, 3, 4, 5];
    let exact = crate::counting::solvability_probability(n, model).expect("size checked");
    let p = exact.numer().to_f64().unwrap_or(0.0) / exact.denom().to_f64().unwrap_or(1.0);

    let hits = exec::count_hits(samples, ESTIMATE_BATCH, |batch, len| {
        let mut rng = exec::trial_rng(seed, batch);
        let mut hit = 0u64;
        for _ in 0..len {
            let config = sample_configuration_with(&layout, model, &mut rng);
            let state = assemble(&config, &layout).expect("samples are well-formed");
            let colors = observable(&state, &layout, &scheme);
            let verdict = crate::law::validate_observable(&colors, &layout, model, false)
                .expect("legal colours");
            hit += u64::from(verdict.valid);
        }
        hit
    });

    let estimate = hits as f64 / samples as f64;
    let sigma = (p * (1.0 - p) / samples as f64).sqrt();
    let within = (estimate - p).abs() <= 3.0 * sigma;
    let mut report = Report::new("estimate", n, seed, samples);
    let model_name = match model {
        AssemblyModel::Sticker => "sticker",
        AssemblyModel::Mechanical => "mechanical",
    };
    report.check(
        format!(
            "{model_name} acceptance {hits}/{samples} = {estimate:.3e} within 3 sigma ({sigma:.3e}) of exact {exact} = {p:.3e}"
        ),
        true,
        within,
    );
    Ok(report)
}

/// The verification suites dispatchable by name, in canonical order.
pub const SUITES: [&str; 6] = [
    "named-moves",
    "signs",
    "law",
    "typing",
    "membership",
    "subgroups",
];

/// Dispatch a suite by name with the conventional trial counts.
pub fn run_suite(name: &str, n: u32, trials: u64, seed: u64) -> Result<Report, HarnessError> {
    match name {
        "named-moves" => verify_named_moves(n),
        "signs" => verify_sign_table(n),
        "law" => verify_law_preservation(n, trials, seed),
        "typing" => verify_wing_typing(n),
        "membership" => cross_validate_membership(n, trials, seed),
        "subgroups" => verify_subgroup_orders(n),
        other => Err(HarnessError::UnknownSuite(other.to_string())),
    }
}
