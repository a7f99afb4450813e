//! Machine checks for the methods' axioms: ultrametric fixed points (A1),
//! subspace monotonicity (A2), dominance over single linkage (A3),
//! permutation invariance, richness, the α thresholds at which the unchaining
//! methods collapse to single linkage, refinement failures between different
//! α values, and the Gromov-Hausdorff instability demonstrations.
//!
//! Positive verdicts are sampled, never proved: `holds-on-sample` is the
//! strongest claim emitted for a universally quantified property. Negative
//! verdicts ship a witness that replays deterministically.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::alpha::{Alpha, AlphaError};
use crate::dendrogram::{dendrogram_to_ultrametric, Dendrogram};
use crate::gh::{gh_exact, GhOutcome};
use crate::instances::{
    barbell_k4, random_clique_chain, random_dendrogram, random_graph_metric, random_metric,
    random_ultrametric,
};
use crate::linkage::{sl_mst_oracle, standard_linkage_dendrogram, LinkageKind};
use crate::metric::{FiniteMetricSpace, MetricError, Ultrametric};
use crate::partition::Partition;
use crate::unchaining::{sl_alpha_dendrogram, sl_star_alpha_dendrogram};
use crate::value::Dist;

/// One of the five clustering methods under study.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MethodId {
    Single,
    Complete,
    Average,
    SlAlpha { alpha: f64 },
    SlStarAlpha { alpha: f64 },
}

impl MethodId {
    pub fn dendrogram<V: Dist>(
        &self,
        space: &FiniteMetricSpace<V>,
    ) -> Result<Dendrogram<V>, AlphaError> {
        Ok(match self {
            MethodId::Single => standard_linkage_dendrogram(space, LinkageKind::Single),
            MethodId::Complete => standard_linkage_dendrogram(space, LinkageKind::Complete),
            MethodId::Average => standard_linkage_dendrogram(space, LinkageKind::Average),
            MethodId::SlAlpha { alpha } => sl_alpha_dendrogram(space, &Alpha::new(*alpha)?),
            MethodId::SlStarAlpha { alpha } => {
                sl_star_alpha_dendrogram(space, &Alpha::new(*alpha)?)
            }
        })
    }

    pub fn ultrametric<V: Dist>(
        &self,
        space: &FiniteMetricSpace<V>,
    ) -> Result<Ultrametric<V>, AlphaError> {
        let d = self.dendrogram(space)?;
        Ok(dendrogram_to_ultrametric(&d, space.labels()).expect("labels come from the space"))
    }

    pub fn label(&self) -> String {
        match self {
            MethodId::Single => "SL".into(),
            MethodId::Complete => "CL".into(),
            MethodId::Average => "AL".into(),
            MethodId::SlAlpha { alpha } => format!("SL({alpha})"),
            MethodId::SlStarAlpha { alpha } => format!("SL*({alpha})"),
        }
    }
}

pub fn all_methods(alpha: f64) -> Vec<MethodId> {
    vec![
        MethodId::Single,
        MethodId::Complete,
        MethodId::Average,
        MethodId::SlAlpha { alpha },
        MethodId::SlStarAlpha { alpha },
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    HoldsOnSample,
    ViolatedWithWitness,
    WitnessNotFound,
}

/// Serializable snapshot of a metric space for witness replay.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceDump {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
}

impl SpaceDump {
    pub fn from_space(space: &FiniteMetricSpace<f64>) -> Self {
        SpaceDump { labels: space.labels().to_vec(), matrix: space.to_matrix() }
    }

    pub fn to_space(&self) -> Result<FiniteMetricSpace<f64>, MetricError> {
        FiniteMetricSpace::new(self.labels.clone(), self.matrix.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RefinementSide {
    /// the larger α's dendrogram fails to refine the smaller's
    Alpha,
    /// the smaller α's dendrogram fails to refine the larger's
    AlphaPrime,
}

/// A reproducible counterexample. `verify_witness` replays the violation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    UltrametricNotFixed {
        method: MethodId,
        space: SpaceDump,
    },
    SubspaceIncrease {
        method: MethodId,
        space: SpaceDump,
        subset: Vec<u32>,
        x: u32,
        y: u32,
    },
    DominanceFailure {
        method: MethodId,
        space: SpaceDump,
        x: u32,
        y: u32,
    },
    PermutationMismatch {
        method: MethodId,
        space: SpaceDump,
        permutation: Vec<u32>,
    },
    RichnessMismatch {
        method: MethodId,
        heights: Vec<f64>,
        levels: Vec<Vec<Vec<u32>>>,
    },
    CollapseMismatch {
        star: bool,
        alpha: f64,
        space: SpaceDump,
    },
    NonRefinement {
        star: bool,
        alpha: f64,
        alpha_prime: f64,
        scale: f64,
        not_refining: RefinementSide,
        space: SpaceDump,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: String,
    pub method: MethodId,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub trials: u32,
}

/// Replay a witness; true iff the recorded violation still reproduces.
pub fn verify_witness(witness: &Witness) -> bool {
    match witness {
        Witness::UltrametricNotFixed { method, space } => {
            let Ok(space) = space.to_space() else { return false };
            let Ok(input) = Ultrametric::try_new(space) else { return false };
            let Ok(output) = method.ultrametric(input.space()) else { return false };
            output != input
        }
        Witness::SubspaceIncrease { method, space, subset, x, y } => {
            let Ok(full) = space.to_space() else { return false };
            let sub = full.restricted(subset);
            let Ok(u_full) = method.ultrametric(&full) else { return false };
            let Ok(u_sub) = method.ultrametric(&sub) else { return false };
            let full_value = u_full.d(subset[*x as usize], subset[*y as usize]);
            u_sub.d(*x, *y).cmp_total(full_value) == std::cmp::Ordering::Less
        }
        Witness::DominanceFailure { method, space, x, y } => {
            let Ok(space) = space.to_space() else { return false };
            let Ok(u) = method.ultrametric(&space) else { return false };
            let base = sl_mst_oracle(&space);
            u.d(*x, *y).cmp_total(base.d(*x, *y)) == std::cmp::Ordering::Less
        }
        Witness::PermutationMismatch { method, space, permutation } => {
            let Ok(space) = space.to_space() else { return false };
            let permuted = space.permuted(permutation);
            let Ok(u) = method.ultrametric(&space) else { return false };
            let Ok(u_perm) = method.ultrametric(&permuted) else { return false };
            !permutation_invariant(&u, &u_perm, permutation)
        }
        Witness::RichnessMismatch { method, heights, levels } => {
            let Some(original) = rebuild_dendrogram(heights, levels) else { return false };
            let u = dendrogram_to_ultrametric(
                &original,
                &crate::metric::default_labels(original.n()),
            )
            .expect("generated labels match");
            let Ok(result) = method.dendrogram(u.space()) else { return false };
            result != original
        }
        Witness::CollapseMismatch { star, alpha, space } => {
            let Ok(space) = space.to_space() else { return false };
            let Ok(alpha) = Alpha::new(*alpha) else { return false };
            let sl = standard_linkage_dendrogram(&space, LinkageKind::Single);
            let variant = if *star {
                sl_star_alpha_dendrogram(&space, &alpha)
            } else {
                sl_alpha_dendrogram(&space, &alpha)
            };
            variant != sl
        }
        Witness::NonRefinement { star, alpha, alpha_prime, scale, not_refining, space } => {
            let Ok(space) = space.to_space() else { return false };
            let (Ok(a), Ok(ap)) = (Alpha::new(*alpha), Alpha::new(*alpha_prime)) else {
                return false;
            };
            let run = |al: &Alpha| {
                if *star {
                    sl_star_alpha_dendrogram(&space, al)
                } else {
                    sl_alpha_dendrogram(&space, al)
                }
            };
            let da = run(&a);
            let dap = run(&ap);
            let pa = da.eval(scale);
            let pap = dap.eval(scale);
            match not_refining {
                RefinementSide::Alpha => !pa.refines(pap).unwrap_or(true),
                RefinementSide::AlphaPrime => !pap.refines(pa).unwrap_or(true),
            }
        }
    }
}

fn rebuild_dendrogram(heights: &[f64], levels: &[Vec<Vec<u32>>]) -> Option<Dendrogram<f64>> {
    let n = levels.first()?.iter().map(|b| b.len()).sum();
    let parts: Option<Vec<Partition>> = levels
        .iter()
        .map(|blocks| Partition::new(n, blocks.clone()).ok())
        .collect();
    Dendrogram::new(heights.to_vec(), parts?).ok()
}

fn permutation_invariant(u: &Ultrametric<f64>, u_perm: &Ultrametric<f64>, perm: &[u32]) -> bool {
    let n = u.n();
    for i in 0..n as u32 {
        for j in (i + 1)..n as u32 {
            if u_perm.d(i, j) != u.d(perm[i as usize], perm[j as usize]) {
                return false;
            }
        }
    }
    true
}

/// A1: the method leaves every ultrametric space fixed.
pub fn check_a1(method: MethodId, trials: u32, max_n: usize, seed: u64) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let n = rng.random_range(2..=max_n.max(2));
        let input = random_ultrametric(n, rng.random());
        let output = method.ultrametric(input.space()).expect("lab methods carry valid alpha");
        if output != input {
            return PropertyReport {
                property: "a1".into(),
                method,
                verdict: Verdict::ViolatedWithWitness,
                witness: Some(Witness::UltrametricNotFixed {
                    method,
                    space: SpaceDump::from_space(input.space()),
                }),
                trials,
            };
        }
    }
    PropertyReport {
        property: "a1".into(),
        method,
        verdict: Verdict::HoldsOnSample,
        witness: None,
        trials,
    }
}

/// A3: the method's ultrametric dominates the single-linkage one pointwise.
pub fn check_a3(method: MethodId, trials: u32, max_n: usize, seed: u64) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let n = rng.random_range(2..=max_n.max(2));
        let space = random_metric(n, rng.random());
        let u = method.ultrametric(&space).expect("lab methods carry valid alpha");
        let base = sl_mst_oracle(&space);
        for i in 0..n as u32 {
            for j in (i + 1)..n as u32 {
                if u.d(i, j).cmp_total(base.d(i, j)) == std::cmp::Ordering::Less {
                    return PropertyReport {
                        property: "a3".into(),
                        method,
                        verdict: Verdict::ViolatedWithWitness,
                        witness: Some(Witness::DominanceFailure {
                            method,
                            space: SpaceDump::from_space(&space),
                            x: i,
                            y: j,
                        }),
                        trials,
                    };
                }
            }
        }
    }
    PropertyReport {
        property: "a3".into(),
        method,
        verdict: Verdict::HoldsOnSample,
        witness: None,
        trials,
    }
}

/// A2: passing to a subspace never lowers output distances below the full
/// space's values — equivalently, adding points never raises them. Holds for
/// single linkage; for every other method the lab searches for a violation,
/// and for the unchaining methods with α < 3 it first replays the
/// deterministic two-clique bridge witness (`Z = {x0, y0}` inside the
/// perturbed barbell).
pub fn check_a2(method: MethodId, trials: u32, max_n: usize, seed: u64) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<(FiniteMetricSpace<f64>, Vec<u32>)> = Vec::new();
    let deterministic_first = match method {
        MethodId::SlAlpha { alpha } | MethodId::SlStarAlpha { alpha } => alpha < 3.0,
        _ => false,
    };
    if deterministic_first {
        let pair = barbell_k4(&0.1f64);
        candidates.push((pair.perturbed, vec![0, 4]));
    }
    for _ in 0..trials {
        let n = rng.random_range(3..=max_n.max(3));
        let space = random_metric(n, rng.random());
        let mut points: Vec<u32> = (0..n as u32).collect();
        points.shuffle(&mut rng);
        let k = rng.random_range(2..n);
        let mut subset = points[..k].to_vec();
        subset.sort_unstable();
        candidates.push((space, subset));
    }

    let expecting_violation = method != MethodId::Single;
    for (space, subset) in &candidates {
        let u_full = method.ultrametric(space).expect("lab methods carry valid alpha");
        let sub = space.restricted(subset);
        let u_sub = method.ultrametric(&sub).expect("lab methods carry valid alpha");
        for a in 0..subset.len() as u32 {
            for b in (a + 1)..subset.len() as u32 {
                let full_value = u_full.d(subset[a as usize], subset[b as usize]);
                if u_sub.d(a, b).cmp_total(full_value) == std::cmp::Ordering::Less {
                    return PropertyReport {
                        property: "a2".into(),
                        method,
                        verdict: Verdict::ViolatedWithWitness,
                        witness: Some(Witness::SubspaceIncrease {
                            method,
                            space: SpaceDump::from_space(space),
                            subset: subset.clone(),
                            x: a,
                            y: b,
                        }),
                        trials,
                    };
                }
            }
        }
    }
    PropertyReport {
        property: "a2".into(),
        method,
        verdict: if expecting_violation {
            Verdict::WitnessNotFound
        } else {
            Verdict::HoldsOnSample
        },
        witness: None,
        trials,
    }
}

/// The output ultrametric does not depend on the order points are listed in.
pub fn check_permutation_invariance(
    method: MethodId,
    trials: u32,
    max_n: usize,
    seed: u64,
) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let n = rng.random_range(2..=max_n.max(2));
        let space = random_metric(n, rng.random());
        let mut perm: Vec<u32> = (0..n as u32).collect();
        perm.shuffle(&mut rng);
        let u = method.ultrametric(&space).expect("lab methods carry valid alpha");
        let permuted = space.permuted(&perm);
        let u_perm = method.ultrametric(&permuted).expect("lab methods carry valid alpha");
        if !permutation_invariant(&u, &u_perm, &perm) {
            return PropertyReport {
                property: "permutation-invariance".into(),
                method,
                verdict: Verdict::ViolatedWithWitness,
                witness: Some(Witness::PermutationMismatch {
                    method,
                    space: SpaceDump::from_space(&space),
                    permutation: perm,
                }),
                trials,
            };
        }
    }
    PropertyReport {
        property: "permutation-invariance".into(),
        method,
        verdict: Verdict::HoldsOnSample,
        witness: None,
        trials,
    }
}

/// Richness via the fixed-point construction: every dendrogram is the output
/// of the method on its own ultrametric dual.
pub fn check_richness_roundtrip(
    method: MethodId,
    trials: u32,
    max_n: usize,
    seed: u64,
) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let n = rng.random_range(2..=max_n.max(2));
        let target = random_dendrogram(n, rng.random());
        let u = dendrogram_to_ultrametric(&target, &crate::metric::default_labels(n))
            .expect("generated labels match");
        let result = method.dendrogram(u.space()).expect("lab methods carry valid alpha");
        if result != target {
            return PropertyReport {
                property: "richness".into(),
                method,
                verdict: Verdict::ViolatedWithWitness,
                witness: Some(Witness::RichnessMismatch {
                    method,
                    heights: target.heights().to_vec(),
                    levels: target
                        .levels()
                        .iter()
                        .map(|p| p.blocks().to_vec())
                        .collect(),
                }),
                trials,
            };
        }
    }
    PropertyReport {
        property: "richness".into(),
        method,
        verdict: Verdict::HoldsOnSample,
        witness: None,
        trials,
    }
}

/// Above the size thresholds the unchaining gates always pass, so both
/// variants must reproduce single linkage exactly: SL(α) for α ≥ (n−2)/2 and
/// SL*(α) for α ≥ n−1.
pub fn check_threshold_collapse(trials: u32, max_n: usize, seed: u64) -> Vec<PropertyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_n = max_n.max(3);
    let mut plain_witness: Option<Witness> = None;
    let mut star_witness: Option<Witness> = None;
    let mut max_plain_alpha = 1u32;
    let mut max_star_alpha = 2u32;
    for _ in 0..trials {
        let n = rng.random_range(3..=max_n);
        let space = random_metric(n, rng.random());
        let sl = standard_linkage_dendrogram(&space, LinkageKind::Single);
        let plain_alpha = ((n as u32).saturating_sub(2)).div_ceil(2).max(1);
        let star_alpha = (n as u32) - 1;
        max_plain_alpha = max_plain_alpha.max(plain_alpha);
        max_star_alpha = max_star_alpha.max(star_alpha);
        if plain_witness.is_none()
            && sl_alpha_dendrogram(&space, &Alpha::integer(plain_alpha)) != sl
        {
            plain_witness = Some(Witness::CollapseMismatch {
                star: false,
                alpha: plain_alpha as f64,
                space: SpaceDump::from_space(&space),
            });
        }
        if star_witness.is_none()
            && sl_star_alpha_dendrogram(&space, &Alpha::integer(star_alpha)) != sl
        {
            star_witness = Some(Witness::CollapseMismatch {
                star: true,
                alpha: star_alpha as f64,
                space: SpaceDump::from_space(&space),
            });
        }
    }
    let report = |star: bool, witness: Option<Witness>, alpha: u32| PropertyReport {
        property: if star {
            "threshold-collapse-star".into()
        } else {
            "threshold-collapse".into()
        },
        method: if star {
            MethodId::SlStarAlpha { alpha: alpha as f64 }
        } else {
            MethodId::SlAlpha { alpha: alpha as f64 }
        },
        verdict: if witness.is_some() {
            Verdict::ViolatedWithWitness
        } else {
            Verdict::HoldsOnSample
        },
        witness,
        trials,
    };
    vec![
        report(false, plain_witness, max_plain_alpha),
        report(true, star_witness, max_star_alpha),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnchainingVariant {
    Plain,
    Star,
}

/// Search generated instances for levels where the dendrogram at a larger α
/// fails to refine the one at a smaller α, and conversely. Both failures
/// exist; neither parameter direction is monotone.
pub fn find_refinement_violation(
    variant: UnchainingVariant,
    budget: u32,
    seed: u64,
) -> Vec<PropertyReport> {
    let star = variant == UnchainingVariant::Star;
    let alpha_pairs = [(2.0f64, 1.0f64), (3.0, 1.0), (3.0, 2.0)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut forward: Option<Witness> = None; // larger α not refining
    let mut backward: Option<Witness> = None;
    let mut used = 0u32;
    for trial in 0..budget {
        if forward.is_some() && backward.is_some() {
            break;
        }
        used = trial + 1;
        let space = if trial % 4 == 3 {
            random_graph_metric(6 + (trial as usize % 4), rng.random())
        } else {
            random_clique_chain(rng.random())
        };
        for (a, ap) in alpha_pairs {
            if forward.is_some() && backward.is_some() {
                break;
            }
            let run = |alpha: f64| {
                let alpha = Alpha::new(alpha).expect("search alphas are valid");
                if star {
                    sl_star_alpha_dendrogram(&space, &alpha)
                } else {
                    sl_alpha_dendrogram(&space, &alpha)
                }
            };
            let da = run(a);
            let dap = run(ap);
            let mut scales: Vec<f64> = da
                .heights()
                .iter()
                .chain(dap.heights().iter())
                .copied()
                .collect();
            scales.sort_by(|x, y| x.total_cmp(y));
            scales.dedup();
            for t in scales {
                let pa = da.eval(&t);
                let pap = dap.eval(&t);
                if forward.is_none() && !pa.refines(pap).expect("same ground set") {
                    forward = Some(Witness::NonRefinement {
                        star,
                        alpha: a,
                        alpha_prime: ap,
                        scale: t,
                        not_refining: RefinementSide::Alpha,
                        space: SpaceDump::from_space(&space),
                    });
                }
                if backward.is_none() && !pap.refines(pa).expect("same ground set") {
                    backward = Some(Witness::NonRefinement {
                        star,
                        alpha: a,
                        alpha_prime: ap,
                        scale: t,
                        not_refining: RefinementSide::AlphaPrime,
                        space: SpaceDump::from_space(&space),
                    });
                }
            }
        }
    }
    let make = |witness: Option<Witness>, which: &str| {
        let (alpha, verdict) = match &witness {
            Some(Witness::NonRefinement { alpha, .. }) => (*alpha, Verdict::ViolatedWithWitness),
            _ => (alpha_pairs[0].0, Verdict::WitnessNotFound),
        };
        PropertyReport {
            property: format!(
                "refinement-{}-{}",
                if star { "star" } else { "plain" },
                which
            ),
            method: if star {
                MethodId::SlStarAlpha { alpha }
            } else {
                MethodId::SlAlpha { alpha }
            },
            verdict,
            witness,
            trials: used,
        }
    };
    vec![make(forward, "larger-alpha"), make(backward, "smaller-alpha")]
}

/// Perturb every off-diagonal entry upward by at most `amplitude`, halving
/// the amplitude until the result validates (it always does for small
/// perturbations of an ultrametric).
fn perturb_ultrametric(
    base: &Ultrametric<f64>,
    amplitude: f64,
    rng: &mut ChaCha8Rng,
) -> FiniteMetricSpace<f64> {
    let n = base.n();
    let mut amp = amplitude;
    for _ in 0..32 {
        let mut matrix = base.space().to_matrix();
        for i in 0..n {
            for j in (i + 1)..n {
                let bump = rng.random::<f64>() * amp;
                matrix[i][j] += bump;
                matrix[j][i] = matrix[i][j];
            }
        }
        if let Ok(space) = FiniteMetricSpace::new(base.space().labels().to_vec(), matrix) {
            return space;
        }
        amp /= 2.0;
    }
    base.space().clone()
}

/// Observational probe of semi-stability: how far does the method's output
/// drift from the unperturbed ultrametric as the perturbation shrinks?
/// Reports data only; a finite probe cannot decide a limit.
pub fn semistability_probe(
    method: MethodId,
    base: &Ultrametric<f64>,
    epsilons: &[f64],
    seed: u64,
    gh_budget: u64,
) -> Vec<(f64, GhOutcome<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    epsilons
        .iter()
        .map(|&eps| {
            let perturbed = perturb_ultrametric(base, eps, &mut rng);
            let u = method.ultrametric(&perturbed).expect("lab methods carry valid alpha");
            (eps, gh_exact(u.space(), base.space(), gh_budget))
        })
        .collect()
}

/// The two-clique bridge numbers: how far apart the inputs are, how far apart
/// the SL(1) outputs are, and how far the SL(1) output sits from the SL(3)
/// one. Inputs converge as ε shrinks while outputs stay ≥ 1/2 apart.
#[derive(Clone, Debug, Serialize)]
pub struct InstabilityDemo {
    pub epsilon: f64,
    pub input_gh: Option<f64>,
    pub output_gh: Option<f64>,
    pub alpha_gh: Option<f64>,
    pub expected_input_gh: f64,
    pub expected_output_gh: f64,
    pub expected_alpha_gh: f64,
}

pub fn instability_demo(epsilon: f64, gh_budget: u64) -> InstabilityDemo {
    let pair = barbell_k4(&epsilon);
    let sl1 = MethodId::SlAlpha { alpha: 1.0 };
    let sl3 = MethodId::SlAlpha { alpha: 3.0 };
    let u = sl1.ultrametric(&pair.base).expect("alpha 1 is valid");
    let u_prime = sl1.ultrametric(&pair.perturbed).expect("alpha 1 is valid");
    let u_second = sl3.ultrametric(&pair.perturbed).expect("alpha 3 is valid");
    let exact = |o: GhOutcome<f64>| o.exact_value().copied();
    InstabilityDemo {
        epsilon,
        input_gh: exact(gh_exact(&pair.base, &pair.perturbed, gh_budget)),
        output_gh: exact(gh_exact(u.space(), u_prime.space(), gh_budget)),
        alpha_gh: exact(gh_exact(u_prime.space(), u_second.space(), gh_budget)),
        expected_input_gh: epsilon / 2.0,
        expected_output_gh: if epsilon > 0.0 { (1.0 + epsilon) / 2.0 } else { 0.0 },
        expected_alpha_gh: if epsilon > 0.0 { 0.5 } else { 0.0 },
    }
}

impl InstabilityDemo {
    pub fn matches(&self, tolerance: f64) -> bool {
        let close = |got: Option<f64>, want: f64| match got {
            Some(v) => (v - want).abs() <= tolerance,
            None => false,
        };
        close(self.input_gh, self.expected_input_gh)
            && close(self.output_gh, self.expected_output_gh)
            && close(self.alpha_gh, self.expected_alpha_gh)
    }
}

/// The machine-checkable slice of the method-property table: permutation
/// invariance, richness, A1, A2 and A3 for all five methods.
#[derive(Clone, Debug, Serialize)]
pub struct TableOne {
    pub alpha: f64,
    pub trials: u32,
    pub max_n: usize,
    pub seed: u64,
    pub reports: Vec<PropertyReport>,
}

pub fn expected_to_hold(property: &str, method: MethodId) -> bool {
    match property {
        "a2" => method == MethodId::Single,
        _ => true,
    }
}

pub fn table_one(trials: u32, max_n: usize, seed: u64, alpha: f64) -> TableOne {
    let mut reports = Vec::new();
    for (offset, method) in all_methods(alpha).into_iter().enumerate() {
        let s = seed.wrapping_add(offset as u64 * 1009);
        reports.push(check_permutation_invariance(method, trials, max_n, s));
        reports.push(check_richness_roundtrip(method, trials, max_n, s.wrapping_add(1)));
        reports.push(check_a1(method, trials, max_n, s.wrapping_add(2)));
        reports.push(check_a2(method, trials, max_n, s.wrapping_add(3)));
        reports.push(check_a3(method, trials, max_n, s.wrapping_add(4)));
    }
    TableOne { alpha, trials, max_n, seed, reports }
}

impl TableOne {
    pub fn mismatches(&self) -> Vec<String> {
        self.reports
            .iter()
            .filter_map(|r| {
                let expected = expected_to_hold(&r.property, r.method);
                let ok = match r.verdict {
                    Verdict::HoldsOnSample => expected,
                    Verdict::ViolatedWithWitness => !expected,
                    Verdict::WitnessNotFound => false,
                };
                (!ok).then(|| {
                    format!(
                        "{} for {}: expected {}, got {:?}",
                        r.property,
                        r.method.label(),
                        if expected { "holds" } else { "a violation" },
                        r.verdict
                    )
                })
            })
            .collect()
    }

    pub fn matches_expected(&self) -> bool {
        self.mismatches().is_empty()
    }
}

/// All metric spaces over `n` points with distances drawn from `values`
/// (exhaustive small-case verification).
pub fn enumerate_metrics(n: usize, values: &[f64]) -> Vec<FiniteMetricSpace<f64>> {
    let pairs = n * (n - 1) / 2;
    let mut out = Vec::new();
    let mut choice = vec![0usize; pairs];
    loop {
        let mut matrix = vec![vec![0.0; n]; n];
        let mut idx = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                matrix[i][j] = values[choice[idx]];
                matrix[j][i] = matrix[i][j];
                idx += 1;
            }
        }
        if let Ok(space) = FiniteMetricSpace::new(crate::metric::default_labels(n), matrix) {
            out.push(space);
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == pairs {
                return out;
            }
            choice[pos] += 1;
            if choice[pos] < values.len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

pub fn enumerate_ultrametrics(n: usize, values: &[f64]) -> Vec<Ultrametric<f64>> {
    enumerate_metrics(n, values)
        .into_iter()
        .filter_map(|s| Ultrametric::try_new(s).ok())
        .collect()
}
