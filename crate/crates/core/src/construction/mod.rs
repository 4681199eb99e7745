//! The main construction: universal central extensions, the Rips
//! construction, fibre-product generating sets and the full pipeline.

mod fiber;
mod pipeline;
mod rips;
mod uce;

use thiserror::Error;

use crate::intlin::{HomologyError, HomologySummary};
use crate::oracle::OracleError;
use crate::presentations::PresentationError;
use crate::subgroups::SubgroupError;

pub use fiber::{embed_pair, fiber_generators, fiber_product_spec, predicted_first_betti, FiberSpec};
pub use pipeline::{run_pipeline, B2Mode, PipelineConfig, PipelineReport, QuotientOracle, StageCounts};
pub use rips::{kernel_generator_names, rips_construct, RipsOutput};
pub use uce::{find_commutator_correction, universal_central_extension, UcePresentation, DEFAULT_SEARCH_CAP};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("group is not perfect: H1 has {0}")]
    NotPerfect(HomologySummary),
    #[error("no word of length <= {cap} in [F,F] cancels {generator}")]
    SearchBudgetExceeded { generator: String, cap: usize },
    #[error("right-hand words failed C'(1/6) after {0} attempts")]
    Uncertified(usize),
    #[error("no word-problem oracle: {0}")]
    NoOracle(String),
    #[error("{0}")]
    Inconsistent(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Subgroup(#[from] SubgroupError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::first_homology;
    use crate::oracle::WordOracle;
    use crate::presentations::{direct_product, parse_presentation, FinitePresentation};
    use crate::subgroups::{todd_coxeter, CosetTableOracle};
    use crate::words::Word;

    fn a5() -> FinitePresentation {
        parse_presentation("<a,b | a^2, b^3, (a b)^5>").unwrap()
    }

    #[test]
    fn binary_icosahedral_extension() {
        let q = a5();
        let oracle = CosetTableOracle::for_group(&q, 1000).unwrap();
        let uce = universal_central_extension(&q, &oracle, DEFAULT_SEARCH_CAP).unwrap();
        assert_eq!(uce.presentation.rank(), 2);
        assert_eq!(uce.presentation.relators().len(), 8);
        assert!(uce.has_expected_shape(&q));
        assert!(first_homology(&uce.presentation).is_trivial());
        assert_eq!(todd_coxeter(&uce.presentation, &[], 10_000).unwrap().index(), 120);
        assert_eq!(todd_coxeter(&uce.presentation, &uce.h2_generators, 10_000).unwrap().index(), 60);
    }

    #[test]
    fn trivial_group_needs_no_correction() {
        let q = parse_presentation("<x, y | x, y x^2>").unwrap();
        let oracle = CosetTableOracle::for_group(&q, 10).unwrap();
        let uce = universal_central_extension(&q, &oracle, 4).unwrap();
        assert!(uce.c_words.iter().all(Word::is_identity));
        assert_eq!(uce.presentation.relators().len(), 2 + 4);
        assert_eq!(todd_coxeter(&uce.presentation, &[], 100).unwrap().index(), 1);
    }

    /// Hides the permutation representation, forcing the enumeration path.
    struct Opaque(CosetTableOracle);

    impl WordOracle for Opaque {
        fn is_trivial(&self, w: &Word) -> Result<bool, crate::oracle::OracleError> {
            self.0.is_trivial(w)
        }
        fn describe(&self) -> String {
            "opaque".into()
        }
    }

    #[test]
    fn both_search_strategies_agree() {
        let q = parse_presentation("<a, b, z | a^2, b^3, (a b)^5, z^-1 [a, b]>").unwrap();
        let oracle = CosetTableOracle::for_group(&q, 1000).unwrap();
        let z = q.generators()[2].clone();
        let by_states = find_commutator_correction(&z, q.generators(), &oracle, 8).unwrap();
        let by_words = find_commutator_correction(&z, q.generators(), &Opaque(oracle), 8).unwrap();
        assert_eq!(by_states, by_words);
        assert_eq!(by_states.len(), 4);
    }

    #[test]
    fn non_perfect_input_is_rejected() {
        let q = parse_presentation("<x | x^3>").unwrap();
        let oracle = CosetTableOracle::for_group(&q, 10).unwrap();
        assert!(matches!(universal_central_extension(&q, &oracle, 4), Err(ConstructionError::NotPerfect(_))));
        assert!(matches!(
            run_pipeline(&q, B2Mode::FiniteGroup, PipelineConfig::default()),
            Err(ConstructionError::NotPerfect(_))
        ));
    }

    #[test]
    fn search_cap_is_reported() {
        let q = a5();
        let oracle = CosetTableOracle::for_group(&q, 1000).unwrap();
        assert!(matches!(
            universal_central_extension(&q, &oracle, 2),
            Err(ConstructionError::SearchBudgetExceeded { cap: 2, .. })
        ));
    }

    #[test]
    fn rips_on_a5() {
        let r = rips_construct(&a5()).unwrap();
        assert_eq!(r.presentation.rank(), 5);
        assert_eq!(r.presentation.relators().len(), 15);
        assert!(r.certificate.satisfied);
        let names: Vec<String> = r.kernel_generators.iter().map(ToString::to_string).collect();
        assert_eq!(names, ["a1", "a2", "a3"]);
        // η is a homomorphism onto A5.
        let oracle = CosetTableOracle::for_group(&a5(), 1000).unwrap();
        for rel in r.presentation.relators() {
            assert!(oracle.is_trivial(&r.quotient_map.apply(rel).unwrap()).unwrap());
        }
    }

    #[test]
    fn rips_on_empty_input_is_free() {
        let r = rips_construct(&FinitePresentation::default()).unwrap();
        assert_eq!(r.presentation.rank(), 3);
        assert!(r.presentation.relators().is_empty());
        let spec = fiber_product_spec(&r, &[]).unwrap();
        assert_eq!(spec.fiber_generators.len(), 6);
        assert_eq!(spec.b1_gamma, 3);
    }

    #[test]
    fn fiber_generators_of_a5() {
        let q = a5();
        let r = rips_construct(&q).unwrap();
        let spec = fiber_product_spec(&r, q.relators()).unwrap();
        assert_eq!(spec.fiber_generators.len(), 14);
        assert_eq!(spec.fiber_generators.len(), spec.expected_size());
        // Under η × η the pairs generate the diagonal of A5 × A5.
        let qq = direct_product(&q, &q);
        let images: Vec<Word> = spec
            .pairs
            .iter()
            .map(|(u, v)| embed_pair(&(r.quotient_map.apply(u).unwrap(), r.quotient_map.apply(v).unwrap())))
            .collect();
        let table = todd_coxeter(&qq, &images, 100_000).unwrap();
        assert_eq!(table.index(), 60);
        let oracle = CosetTableOracle::for_group(&q, 1000).unwrap();
        for (u, v) in &spec.pairs {
            let (u, v) = (r.quotient_map.apply(u).unwrap(), r.quotient_map.apply(v).unwrap());
            assert!(oracle.equal(&u, &v).unwrap());
        }
    }

    #[test]
    fn betti_prediction() {
        assert_eq!(predicted_first_betti(2, 0), 4);
        assert_eq!(predicted_first_betti(3, 5), 11);
    }

    #[test]
    fn counts_depend_only_on_sizes() {
        let p1 = parse_presentation("<x, y | x, y>").unwrap();
        let p2 = parse_presentation("<u, v | u^2 v^-1, v^2 u^-3>").unwrap();
        let cfg = PipelineConfig::default();
        let r1 = run_pipeline(&p1, B2Mode::FiniteGroup, cfg).unwrap();
        let r2 = run_pipeline(&p2, B2Mode::FiniteGroup, cfg).unwrap();
        assert_eq!(r1.counts, r2.counts);
        assert_eq!(r1.counts, StageCounts::from_sizes(2, 2));
        assert_eq!(r1.predicted_b1, 2 * r1.b1_gamma);
        assert_eq!(r1.to_json()["residually_finite_certified"], false);
    }

    #[test]
    fn pipeline_on_a5() {
        let r = run_pipeline(&a5(), B2Mode::FiniteGroup, PipelineConfig::default()).unwrap();
        assert_eq!(r.counts, StageCounts::from_sizes(2, 3));
        assert_eq!(r.counts.gamma_relators, 2 + 6 + 12);
        assert_eq!(r.counts.fiber_generators, 14);
        assert!(r.rips.certificate.satisfied);
        assert_eq!(r.b2_q, 0);
        assert_eq!(r.predicted_b1, 2 * r.b1_gamma);
    }
}
