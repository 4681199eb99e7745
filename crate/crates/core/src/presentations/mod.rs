//! Finite presentations, their text and JSON forms, marked homomorphisms and
//! the presentation builders (direct products, extensions, recursification).

mod builders;
mod parse;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::oracle::{OracleError, WordOracle};
use crate::words::{cyclically_reduce, Generator, Word};

pub use builders::{
    direct_product, embed_in_factor, extension_presentation, recursify, AmbientGroup, ExtensionData, PermutationGroup,
    WordGroup, DEFAULT_EXTENSION_SEARCH_CAP,
};
pub use parse::{parse_presentation, parse_word, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("generator `{0}` is not declared")]
    UndeclaredGenerator(String),
    #[error("generator `{0}` is declared twice")]
    DuplicateGenerator(String),
    #[error("invalid JSON presentation: {0}")]
    Json(String),
    #[error("homomorphism needs {expected} images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("{0}")]
    Invalid(String),
    #[error("search for a word equal to {target} exceeded length {cap}")]
    SearchBudgetExceeded { target: String, cap: usize },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// A finite presentation `⟨X | R⟩`. Generator names are unique, every relator
/// uses declared generators only and relators are kept cyclically reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FinitePresentation {
    generators: Vec<Generator>,
    relators: Vec<Word>,
}

/// JSON form `{generators: [string], relators: [string]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
}

impl FinitePresentation {
    pub fn new(generators: Vec<Generator>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].contains(g) {
                return Err(PresentationError::DuplicateGenerator(g.to_string()));
            }
        }
        for r in &relators {
            for l in r.letters() {
                if !generators.contains(&l.gen) {
                    return Err(PresentationError::UndeclaredGenerator(l.gen.to_string()));
                }
            }
        }
        let relators = relators.iter().map(cyclically_reduce).collect();
        Ok(Self { generators, relators })
    }

    /// The free group on the given generators.
    pub fn free(generators: Vec<Generator>) -> Result<Self, PresentationError> {
        Self::new(generators, Vec::new())
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn position(&self, g: &Generator) -> Option<usize> {
        self.generators.iter().position(|h| h == g)
    }

    /// Checks that a word only uses declared generators.
    pub fn check_word(&self, w: &Word) -> Result<(), PresentationError> {
        match w.letters().iter().find(|l| !self.generators.contains(&l.gen)) {
            Some(l) => Err(PresentationError::UndeclaredGenerator(l.gen.to_string())),
            None => Ok(()),
        }
    }

    /// Letter codes for the combinatorial algorithms: generator `i` is `2i`,
    /// its inverse `2i + 1`.
    pub fn encode(&self, w: &Word) -> Result<Vec<usize>, PresentationError> {
        let index: HashMap<&Generator, usize> = self.generators.iter().enumerate().map(|(i, g)| (g, i)).collect();
        w.letters()
            .iter()
            .map(|l| {
                index
                    .get(&l.gen)
                    .map(|&i| 2 * i + usize::from(l.inverse))
                    .ok_or_else(|| PresentationError::UndeclaredGenerator(l.gen.to_string()))
            })
            .collect()
    }

    pub fn decode(&self, codes: &[usize]) -> Word {
        codes.iter().map(|&c| crate::words::Letter::new(self.generators[c / 2].clone(), c % 2 == 1)).collect()
    }

    pub fn encoded_relators(&self) -> Vec<Vec<usize>> {
        self.relators.iter().map(|r| self.encode(r).expect("relators use declared generators")).collect()
    }

    pub fn to_json(&self) -> PresentationJson {
        PresentationJson {
            generators: self.generators.iter().map(ToString::to_string).collect(),
            relators: self.relators.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn from_json(json: &PresentationJson) -> Result<Self, PresentationError> {
        let generators: Vec<Generator> = json.generators.iter().map(|s| Generator::new(s.trim())).collect();
        let relators = json.relators.iter().map(|r| parse_word(r, Some(&generators))).collect::<Result<Vec<_>, _>>()?;
        Self::new(generators, relators)
    }

    /// Reads either the `<…|…>` grammar or the JSON form, chosen by the first
    /// non-blank character.
    pub fn from_text(text: &str) -> Result<Self, PresentationError> {
        if text.trim_start().starts_with('{') {
            let json: PresentationJson =
                serde_json::from_str(text).map_err(|e| PresentationError::Json(e.to_string()))?;
            Self::from_json(&json)
        } else {
            parse_presentation(text)
        }
    }
}

impl fmt::Display for FinitePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(" | ")?;
        for (i, r) in self.relators.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str(">")
    }
}

/// A homomorphism given by one target word per source generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedHomomorphism {
    source: FinitePresentation,
    target: FinitePresentation,
    images: Vec<Word>,
}

impl MarkedHomomorphism {
    pub fn new(
        source: FinitePresentation,
        target: FinitePresentation,
        images: Vec<Word>,
    ) -> Result<Self, PresentationError> {
        if images.len() != source.rank() {
            return Err(PresentationError::ImageCount { expected: source.rank(), got: images.len() });
        }
        for w in &images {
            target.check_word(w)?;
        }
        Ok(Self { source, target, images })
    }

    /// The marking that sends each generator to the generator of the same name.
    pub fn identity(p: &FinitePresentation) -> Self {
        let images = p.generators().iter().map(Generator::word).collect();
        Self { source: p.clone(), target: p.clone(), images }
    }

    pub fn source(&self) -> &FinitePresentation {
        &self.source
    }

    pub fn target(&self) -> &FinitePresentation {
        &self.target
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn apply(&self, w: &Word) -> Result<Word, PresentationError> {
        self.source.check_word(w)?;
        Ok(w.substitute(|g| self.images[self.source.position(g).expect("checked above")].clone()))
    }
}

/// True iff every source relator maps to the identity of the target, as
/// decided by `oracle`.
pub fn check_homomorphism(h: &MarkedHomomorphism, oracle: &dyn WordOracle) -> Result<bool, PresentationError> {
    for r in h.source.relators() {
        if !oracle.is_trivial(&h.apply(r)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{FreeGroupOracle, Permutation, PermutationOracle};

    #[test]
    fn construction_validates() {
        let x = Generator::new("x");
        assert!(matches!(
            FinitePresentation::new(vec![x.clone(), x.clone()], vec![]),
            Err(PresentationError::DuplicateGenerator(_))
        ));
        assert!(matches!(
            FinitePresentation::new(vec![x.clone()], vec![Generator::new("z").word()]),
            Err(PresentationError::UndeclaredGenerator(_))
        ));
        let y = Generator::new("y");
        let p = FinitePresentation::new(vec![x.clone(), y.clone()], vec![y.word().conjugate_by(&x.word())]).unwrap();
        assert_eq!(p.relators()[0], y.word());
    }

    #[test]
    fn json_round_trip() {
        let p = parse_presentation("<a,b | a^2, b^3, (a b)^5>").unwrap();
        let text = serde_json::to_string(&p.to_json()).unwrap();
        assert_eq!(FinitePresentation::from_text(&text).unwrap(), p);
    }

    #[test]
    fn homomorphism_checks() {
        let p = parse_presentation("<a,b | a^2, b^3, (a b)^5>").unwrap();
        assert!(check_homomorphism(&MarkedHomomorphism::identity(&p), &p.relators_oracle()).unwrap());

        let f2 = parse_presentation("<x, y | >").unwrap();
        let c2 = parse_presentation("<u | u^2>").unwrap();
        let u = Generator::new("u");
        let h = MarkedHomomorphism::new(f2, c2, vec![u.word(), u.word()]).unwrap();
        let oracle = PermutationOracle::new(vec![u], vec![Permutation::from_cycles(2, &[&[0, 1]]).unwrap()]);
        assert!(check_homomorphism(&h, &oracle).unwrap());

        let c2x = parse_presentation("<x | x^2>").unwrap();
        let z = parse_presentation("<x | >").unwrap();
        let h = MarkedHomomorphism::new(c2x, z, vec![Generator::new("x").word()]).unwrap();
        assert!(!check_homomorphism(&h, &FreeGroupOracle).unwrap());
    }

    impl FinitePresentation {
        /// Test helper: an oracle that only knows relators are trivial.
        fn relators_oracle(&self) -> RelatorOracle {
            RelatorOracle(self.relators.clone())
        }
    }

    struct RelatorOracle(Vec<Word>);

    impl WordOracle for RelatorOracle {
        fn is_trivial(&self, w: &Word) -> Result<bool, OracleError> {
            Ok(w.is_identity() || self.0.iter().any(|r| r == w || r.inverse() == *w))
        }
        fn describe(&self) -> String {
            "relators only".into()
        }
    }
}
