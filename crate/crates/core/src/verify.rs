//! Exhaustive checks that the state sum respects the web relations, plus the
//! cobweb consequences and a fuzzer for the cobweb relations.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cobweb::random::{random_closed, random_walk, Shape};
use crate::cobweb::rewrite::bubble_value;
use crate::cobweb::{evaluate, reduce_oracle, Cobweb, CobwebEnd, CobwebError, CobwebGen, Root};
use crate::diagram::{Dir, Layer, LinComb, StrandEnd};
use crate::scalar::LaurentScalar;
use crate::statesum::{all_boundary_data, enumerate_states, evaluate_comb, map_web, BoundaryData, StateSumError};
use crate::web::{double_square, relation_instances, RelationInstance, WebGen};

/// Both sides of a relation under one choice of boundary sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryCheck {
    pub data: BoundaryData,
    pub lhs_states: usize,
    pub rhs_states: usize,
    pub lhs: LaurentScalar,
    pub rhs: LaurentScalar,
}

impl BoundaryCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub relation: String,
    pub n: u8,
    pub params: Vec<u8>,
    /// Boundary data with at least one state on some side.
    pub checked: usize,
    /// Boundary data with no states on either side.
    pub skipped: usize,
    pub failures: Vec<BoundaryCheck>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Number of states and total value of one side.
pub fn side_total(
    side: &LinComb<WebGen>,
    data: &BoundaryData,
) -> Result<(usize, LaurentScalar), StateSumError> {
    let mut states = 0;
    let mut total = LaurentScalar::zero();
    for (coef, w) in side.iter() {
        states += enumerate_states(w, data)?.len();
        total += coef * &evaluate_comb(&map_web(w, data)?);
    }
    Ok((states, total))
}

pub fn check_boundary(
    inst: &RelationInstance,
    data: &BoundaryData,
) -> Result<BoundaryCheck, StateSumError> {
    let (lhs_states, lhs) = side_total(&inst.lhs, data)?;
    let (rhs_states, rhs) = side_total(&inst.rhs, data)?;
    Ok(BoundaryCheck {
        data: data.clone(),
        lhs_states,
        rhs_states,
        lhs,
        rhs,
    })
}

/// Every boundary check for `inst` where some side has a state.
pub fn boundary_checks(inst: &RelationInstance) -> Result<(Vec<BoundaryCheck>, usize), StateSumError> {
    let (bottom, top) = inst.boundary();
    let mut out = Vec::new();
    let mut skipped = 0;
    for data in all_boundary_data(inst.n, bottom, top) {
        let c = check_boundary(inst, &data)?;
        if c.lhs_states == 0 && c.rhs_states == 0 {
            skipped += 1;
        } else {
            out.push(c);
        }
    }
    Ok((out, skipped))
}

pub fn verify_relation(inst: &RelationInstance) -> Result<VerificationReport, StateSumError> {
    let (checks, skipped) = boundary_checks(inst)?;
    Ok(VerificationReport {
        relation: inst.name(),
        n: inst.n,
        params: inst.params.clone(),
        checked: checks.len(),
        skipped,
        failures: checks.into_iter().filter(|c| !c.holds()).collect(),
    })
}

/// Every relation instance at `n`, each followed by its reversed variant.
pub fn all_instances(n: u8) -> Vec<RelationInstance> {
    relation_instances(n)
        .into_iter()
        .flat_map(|i| {
            let r = i.reverse();
            [i, r]
        })
        .collect()
}

/// `-1` to the number of open curves carrying an odd number of tags.
///
/// Reversing arrows reverses every traversal, so tags on such a curve trade
/// sides an odd number of times and its value changes sign beyond the bar.
pub fn open_tag_sign(d: &Cobweb) -> LaurentScalar {
    let levels = d.levels();
    let label = |s: &crate::diagram::Slot| levels[s.level][s.pos].label;
    let odd = d
        .trace_curves()
        .iter()
        .filter(|c| !c.is_closed())
        .filter(|c| {
            let first = c.slots.first().expect("curves visit a slot");
            let last = c.slots.last().expect("curves visit a slot");
            label(&first.0) != label(&last.0)
        })
        .count();
    if odd % 2 == 0 {
        LaurentScalar::one()
    } else {
        -LaurentScalar::one()
    }
}

/// `Σ bar(coef) · open_tag_sign(image) · bar(evaluate(image))`: what the
/// reversed side should total once the tag sign is accounted for.
fn side_mirrored(side: &LinComb<WebGen>, data: &BoundaryData) -> Result<LaurentScalar, StateSumError> {
    let mut total = LaurentScalar::zero();
    for (coef, w) in side.iter() {
        for (c, img) in map_web(w, data)?.iter() {
            total += coef.bar() * c.bar() * open_tag_sign(img) * evaluate(img).bar();
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryReport {
    pub relation: String,
    pub params: Vec<u8>,
    pub checked: usize,
    /// Reversed instance fails to hold.
    pub reversed_failures: Vec<BoundaryCheck>,
    /// Reversed totals differ from the bar of the originals.
    pub not_barred: Vec<BoundaryCheck>,
    /// Reversed totals differ even after the open-curve tag sign.
    pub not_barred_up_to_sign: Vec<BoundaryCheck>,
}

/// Compares every boundary total of `inst` with that of its reversal.
pub fn verify_symmetry(inst: &RelationInstance) -> Result<SymmetryReport, StateSumError> {
    let rev = inst.reverse();
    let mut report = SymmetryReport {
        relation: inst.name(),
        params: inst.params.clone(),
        checked: 0,
        reversed_failures: Vec::new(),
        not_barred: Vec::new(),
        not_barred_up_to_sign: Vec::new(),
    };
    for c in boundary_checks(inst)?.0 {
        report.checked += 1;
        let r = check_boundary(&rev, &c.data)?;
        if !r.holds() {
            report.reversed_failures.push(r.clone());
        }
        if r.lhs != c.lhs.bar() || r.rhs != c.rhs.bar() {
            report.not_barred.push(r.clone());
        }
        if r.lhs != side_mirrored(&inst.lhs, &c.data)? || r.rhs != side_mirrored(&inst.rhs, &c.data)? {
            report.not_barred_up_to_sign.push(r);
        }
    }
    Ok(report)
}

/// A named yes/no check with a human-readable account.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsequenceCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// A cap over a cup on two strands of `root`, turning opposite ways.
pub fn saddle(n: u8, root: Root) -> Cobweb {
    let bottom = vec![StrandEnd::new(root, Dir::Down), StrandEnd::new(root, Dir::Up)];
    Cobweb::new(
        n,
        bottom,
        vec![
            Layer::new(0, CobwebGen::Cap(root, Dir::Down)),
            Layer::new(0, CobwebGen::Cup(root, Dir::Down)),
        ],
    )
    .expect("saddle is well-formed")
}

/// An upward strand of `root` with a kink to its right.
pub fn curl(n: u8, root: Root) -> Cobweb {
    let up = CobwebEnd::new(root, Dir::Up);
    let down = CobwebEnd::new(root, Dir::Down);
    Cobweb::new(
        n,
        vec![up],
        vec![
            Layer::new(1, CobwebGen::Cup(root, Dir::Down)),
            Layer::new(0, CobwebGen::cross(up, down)),
            Layer::new(0, CobwebGen::Cap(root, Dir::Down)),
        ],
    )
    .expect("curl is well-formed")
}

/// A clockwise circle of `root`.
pub fn clockwise_bubble(n: u8, root: Root) -> Cobweb {
    Cobweb::new(
        n,
        vec![],
        vec![
            Layer::new(0, CobwebGen::Cup(root, Dir::Up)),
            Layer::new(0, CobwebGen::Cap(root, Dir::Up)),
        ],
    )
    .expect("circle is well-formed")
}

/// Runs the oracle on `d` and checks it lands on a bare diagram with the
/// expected factor in at most `max_steps` steps.
fn oracle_check(name: String, d: &Cobweb, want: &LaurentScalar, max_steps: usize) -> ConsequenceCheck {
    match reduce_oracle(d, max_steps.max(1) * 20) {
        Ok(out) => {
            let bare = out.normal_form.layers().is_empty();
            let passed = bare && out.steps.len() <= max_steps && &out.factor == want;
            ConsequenceCheck {
                name,
                passed,
                detail: format!(
                    "{} steps, factor {}, expected {}{}",
                    out.steps.len(),
                    out.factor,
                    want,
                    if bare { "" } else { ", not reduced to strands" }
                ),
            }
        }
        Err(e) => ConsequenceCheck {
            name,
            passed: false,
            detail: format!("{e}"),
        },
    }
}

/// Saddle, curl and clockwise bubble for every root at `n`.
pub fn verify_consequences(n: u8) -> Vec<ConsequenceCheck> {
    let mut out = Vec::new();
    for root in Root::all(n) {
        let s = LaurentScalar::q_pow(root.sign());
        let d = saddle(n, root);
        out.push(oracle_check(format!("saddle {root} n={n}"), &d, &s, 5));
        let d = curl(n, root);
        out.push(oracle_check(format!("curl {root} n={n}"), &d, &s, usize::MAX / 40));
        let d = clockwise_bubble(n, root);
        let want = LaurentScalar::q_pow(-root.sign());
        let got = evaluate(&d);
        out.push(ConsequenceCheck {
            name: format!("clockwise bubble {root} n={n}"),
            passed: got == want && bubble_value(root, false) == want,
            detail: format!("value {got}, expected {want}"),
        });
    }
    out
}

/// The two bursts of the double square agree on every boundary.
pub fn verify_double_square(n: u8, k: u8, l: u8) -> Result<ConsequenceCheck, StateSumError> {
    let name = format!("double_square n={n} k={k} l={l}");
    let ds = double_square(n, k, l).map_err(|_| StateSumError::StateMismatch { layer: 0 })?;
    let mut checked = 0;
    let mut bad = 0;
    for data in all_boundary_data(n, ds.web.bottom(), ds.web.top()) {
        let (sl, left) = side_total(&ds.burst_left, &data)?;
        let (sr, right) = side_total(&ds.burst_right, &data)?;
        if sl == 0 && sr == 0 {
            continue;
        }
        checked += 1;
        if left != right {
            bad += 1;
        }
    }
    Ok(ConsequenceCheck {
        name,
        passed: bad == 0,
        detail: format!("{checked} boundaries, {bad} disagree"),
    })
}

/// Parameters `(k, l)` with a double square at `n`.
pub fn double_square_parameters(n: u8) -> Vec<(u8, u8)> {
    let mut out = Vec::new();
    for k in 2..n {
        for l in 2..n {
            out.push((k, l));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzFailure {
    pub trial: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzReport {
    pub trials: usize,
    pub failures: Vec<FuzzFailure>,
}

/// Closed random cobwebs: random rewrites keep the value, and the oracle
/// reduces each to the empty diagram times its value.
pub fn fuzz_invariance(n: u8, seed: u64, trials: usize, moves: usize, budget: usize) -> FuzzReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = Shape {
        n,
        max_strands: 8,
        steps: 14,
    };
    let mut failures = Vec::new();
    for trial in 0..trials {
        let d = random_closed(&mut rng, &shape);
        let value = evaluate(&d);
        match random_walk(&mut rng, &d, moves) {
            Ok((e, f, _)) if f.clone() * evaluate(&e) == value => {}
            Ok((e, f, moves)) => failures.push(FuzzFailure {
                trial,
                reason: format!("walk {moves:?} gives {}, expected {value}", f * evaluate(&e)),
            }),
            Err(err) => failures.push(FuzzFailure {
                trial,
                reason: format!("walk failed: {err}"),
            }),
        }
        match reduce_oracle(&d, budget) {
            Ok(out) if out.normal_form.layers().is_empty() && out.factor == value => {}
            Ok(out) => failures.push(FuzzFailure {
                trial,
                reason: format!("oracle gives {} with {} layers left, expected {value}", out.factor, out.normal_form.layers().len()),
            }),
            Err(CobwebError::BudgetExhausted { budget }) => failures.push(FuzzFailure {
                trial,
                reason: format!("oracle budget {budget} exhausted"),
            }),
            Err(err) => failures.push(FuzzFailure {
                trial,
                reason: format!("oracle failed: {err}"),
            }),
        }
    }
    FuzzReport { trials, failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::web::{instantiate, RelationKind};

    #[test]
    fn relations_hold_small_n() {
        for n in 2..=3 {
            for inst in all_instances(n) {
                let r = verify_relation(&inst).unwrap();
                assert!(r.passed(), "{} {:?}: {:?}", r.relation, r.params, r.failures.first());
                assert!(r.checked > 0, "{}", r.relation);
            }
        }
    }

    #[test]
    fn digon_totals_are_quantum_k() {
        let inst = instantiate(RelationKind::Digon, 4, &[3]).unwrap();
        let (checks, _) = boundary_checks(&inst).unwrap();
        assert_eq!(checks.len(), 4);
        for c in checks {
            assert_eq!(c.lhs_states, 3);
            assert_eq!(c.lhs, c.rhs);
        }
    }

    #[test]
    fn reversal_bars_totals_up_to_tag_sign() {
        for n in 2..=3 {
            for inst in relation_instances(n) {
                let r = verify_symmetry(&inst).unwrap();
                assert!(r.reversed_failures.is_empty(), "{}", r.relation);
                assert!(r.not_barred_up_to_sign.is_empty(), "{} {:?}", r.relation, r.params);
            }
        }
        // An open arc through a label-n strand picks up a sign as well.
        let inst = instantiate(RelationKind::IEqualsH, 3, &[1, 1, 1]).unwrap();
        assert!(!verify_symmetry(&inst).unwrap().not_barred.is_empty());
    }

    #[test]
    fn consequences_at_three() {
        for c in verify_consequences(3) {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn double_square_three() {
        for (k, l) in double_square_parameters(3) {
            let c = verify_double_square(3, k, l).unwrap();
            assert!(c.passed, "{}", c.detail);
        }
    }

    #[test]
    fn fuzz_small() {
        let r = fuzz_invariance(3, 5, 30, 20, 100_000);
        assert!(r.failures.is_empty(), "{:?}", r.failures.first());
    }
}
