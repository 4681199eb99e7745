//! End-to-end run: perfect `Q` → `Q̃` → `Γ` → generators of `Λ ⊆ Γ × Γ` and
//! the predicted first Betti number of `Λ`.

use serde::Serialize;
use serde_json::json;

use super::fiber::{fiber_product_spec, FiberSpec};
use super::rips::{rips_construct, RipsOutput};
use super::uce::{universal_central_extension, UcePresentation, DEFAULT_SEARCH_CAP};
use super::ConstructionError;
use crate::intlin::{first_homology, second_betti_aspherical};
use crate::oracle::WordOracle;
use crate::presentations::FinitePresentation;
use crate::smallcanc::DehnSolver;
use crate::subgroups::{CosetTableOracle, SubgroupError, DEFAULT_MAX_COSETS};

/// Source of `b₂(Q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum B2Mode {
    /// The input presentation is asserted aspherical: `b₂ = |R| − rank`.
    AsphericalAssertion,
    /// `Q` is finite, so `b₂(Q) = 0`; finiteness is checked by coset
    /// enumeration.
    FiniteGroup,
    Explicit(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineConfig {
    pub max_cosets: usize,
    pub search_cap: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self { max_cosets: DEFAULT_MAX_COSETS, search_cap: DEFAULT_SEARCH_CAP }
    }
}

/// `(|Y|, |T|, |S|)`: generators and relators of `Γ`, generators of `Λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StageCounts {
    pub gamma_generators: usize,
    pub gamma_relators: usize,
    pub fiber_generators: usize,
}

impl StageCounts {
    /// The counts as functions of `|X| = n` and `|R| = m` alone.
    pub fn from_sizes(n: usize, m: usize) -> Self {
        Self { gamma_generators: 3 + n, gamma_relators: n + n * m + 6 * n, fiber_generators: 2 * (3 + m) + n }
    }
}

/// Word-problem oracle for `Q`: a coset table when enumeration finishes,
/// otherwise Dehn's algorithm when `C′(1/6)` holds.
pub struct QuotientOracle {
    inner: Box<dyn WordOracle>,
    /// `|Q|` when the coset table was used.
    pub order: Option<usize>,
}

impl QuotientOracle {
    pub fn choose(p: &FinitePresentation, max_cosets: usize) -> Result<Self, ConstructionError> {
        match CosetTableOracle::for_group(p, max_cosets) {
            Ok(o) => Ok(Self { order: Some(o.order()), inner: Box::new(o) }),
            Err(SubgroupError::BudgetExceeded { .. }) => {
                let dehn = DehnSolver::new(p);
                if dehn.is_certified() {
                    Ok(Self { inner: Box::new(dehn), order: None })
                } else {
                    Err(ConstructionError::NoOracle(format!(
                        "coset enumeration exceeded {max_cosets} rows and the presentation is not C'(1/6)"
                    )))
                }
            }
            Err(e) => Err(e.into()),
        }
    }

    pub fn oracle(&self) -> &dyn WordOracle {
        self.inner.as_ref()
    }
}

#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub input: FinitePresentation,
    pub oracle: String,
    pub uce: UcePresentation,
    pub rips: RipsOutput,
    pub fiber: FiberSpec,
    pub b1_gamma: usize,
    pub b2_q: usize,
    pub predicted_b1: usize,
    pub counts: StageCounts,
}

impl PipelineReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "input": self.input.to_json(),
            "oracle": self.oracle,
            "uce": self.uce.to_json(),
            "rips": self.rips.to_json(),
            "fiber": self.fiber.to_json(),
            "b1_gamma": self.b1_gamma,
            "b2_q": self.b2_q,
            "predicted_b1_lambda": self.predicted_b1,
            "counts": self.counts,
            "residually_finite_certified": false,
        })
    }
}

fn second_betti(p: &FinitePresentation, mode: B2Mode, order: Option<usize>) -> Result<usize, ConstructionError> {
    match mode {
        B2Mode::Explicit(v) => Ok(v),
        B2Mode::AsphericalAssertion => Ok(second_betti_aspherical(p, true)?),
        B2Mode::FiniteGroup => match order {
            Some(_) => Ok(0),
            None => Err(ConstructionError::Inconsistent("finite-group mode needs a finished coset enumeration".into())),
        },
    }
}

/// Runs every stage on a perfect `Q = ⟨X | R⟩`. The Rips construction is
/// applied to the presentation of `Q̃`, so `|T| = |X| + |X||R| + 6|X|`.
pub fn run_pipeline(
    p: &FinitePresentation,
    mode: B2Mode,
    config: PipelineConfig,
) -> Result<PipelineReport, ConstructionError> {
    let h1 = first_homology(p);
    if !h1.is_trivial() {
        return Err(ConstructionError::NotPerfect(h1));
    }
    let quotient = QuotientOracle::choose(p, config.max_cosets)?;
    let b2_q = second_betti(p, mode, quotient.order)?;
    let uce = universal_central_extension(p, quotient.oracle(), config.search_cap)?;
    let rips = rips_construct(&uce.presentation)?;
    let mut fiber = fiber_product_spec(&rips, p.relators())?;
    fiber.set_b2(b2_q);
    let counts = StageCounts {
        gamma_generators: rips.presentation.rank(),
        gamma_relators: rips.presentation.relators().len(),
        fiber_generators: fiber.fiber_generators.len(),
    };
    let expected = StageCounts::from_sizes(p.rank(), p.relators().len());
    if counts != expected || fiber.fiber_generators.len() != fiber.expected_size() {
        return Err(ConstructionError::Inconsistent(format!("stage counts {counts:?}, expected {expected:?}")));
    }
    let b1_gamma = fiber.b1_gamma;
    Ok(PipelineReport {
        input: p.clone(),
        oracle: quotient.oracle().describe(),
        uce,
        rips,
        predicted_b1: fiber.predicted_b1.expect("set above"),
        fiber,
        b1_gamma,
        b2_q,
        counts,
    })
}
