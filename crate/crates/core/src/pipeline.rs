//! Stage orchestration for one document.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::doc::{AnnotationKind, DocError, Document, SentenceSpan, Selection, DEFAULT_MAX_INPUT_BYTES};
use crate::edl::{disambiguate, ClassifierModel, EdlConfig};
use crate::enrich::{
    decorate_metadata, project_topics, recommend_hashtags, score_sentiment, SentimentConfig, TopicConfig,
};
use crate::resources::ResourceSet;
use crate::text::{break_sentences, detect_language, extract_mentions, normalize_text, tokenize, LangIdError};

/// Stage names in execution order, as recorded in `stage_timings`.
pub const STAGES: [&str; 10] = [
    "language",
    "normalize",
    "sentences",
    "tokens",
    "mentions",
    "edl",
    "topics",
    "hashtags",
    "sentiment",
    "metadata",
];

pub const SUPPORTED_LANGUAGES: [&str; 6] = ["ar", "de", "en", "es", "fr", "it"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub max_input_bytes: usize,
    /// Used when the text has no letters to detect a language from.
    pub default_language: String,
    pub languages: BTreeSet<String>,
    /// Characters of input the language detector looks at.
    pub langid_max_chars: usize,
    pub edl: EdlConfig,
    pub sentiment: SentimentConfig,
    pub topics: TopicConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            max_input_bytes: DEFAULT_MAX_INPUT_BYTES,
            default_language: "en".into(),
            languages: SUPPORTED_LANGUAGES.iter().map(|l| l.to_string()).collect(),
            langid_max_chars: 2000,
            edl: EdlConfig::default(),
            sentiment: SentimentConfig::default(),
            topics: TopicConfig::default(),
        }
    }
}

impl PipelineConfig {
    /// Rejects invalid thresholds; returns warnings for suspicious ones.
    pub fn check(&self) -> Result<Vec<String>, PipelineError> {
        let warnings = self.edl.check().map_err(|e| PipelineError::InvalidConfig(e.to_string()))?;
        self.sentiment.check().map_err(PipelineError::InvalidConfig)?;
        if self.max_input_bytes == 0 {
            return Err(PipelineError::InvalidConfig("max_input_bytes must be positive".into()));
        }
        if self.languages.is_empty() {
            return Err(PipelineError::InvalidConfig("language allow-list is empty".into()));
        }
        Ok(warnings)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Doc(#[from] DocError),
    #[error("unsupported language {0:?}")]
    UnsupportedLanguage(String),
    #[error("language detection failed: {0}")]
    LanguageDetection(#[from] LangIdError),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// Monotonic microsecond clock; the core has no time source of its own.
pub trait Clock {
    fn now_micros(&self) -> u64;
}

/// A clock that never advances: every stage records 0.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn now_micros(&self) -> u64 {
        0
    }
}

/// Everything needed to annotate: dictionaries, EDL model and thresholds.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub resources: ResourceSet,
    pub model: ClassifierModel,
    pub config: PipelineConfig,
}

struct Timer<'a, C: Clock + ?Sized> {
    clock: &'a C,
    last: u64,
}

impl<C: Clock + ?Sized> Timer<'_, C> {
    fn lap(&mut self, doc: &mut Document, stage: &str) {
        let now = self.clock.now_micros();
        doc.stage_timings.insert(stage.into(), now.saturating_sub(self.last));
        self.last = now;
    }

    fn skip(&mut self, doc: &mut Document, stage: &str) {
        doc.stage_timings.insert(stage.into(), 0);
        self.last = self.clock.now_micros();
    }
}

impl Pipeline {
    pub fn new(resources: ResourceSet, model: ClassifierModel, config: PipelineConfig) -> Self {
        Pipeline {
            resources,
            model,
            config,
        }
    }

    /// Runs the stages `selection` needs. Language, normalization, sentences
    /// and tokens always run; stages that do not run record a 0 timing.
    pub fn annotate<C: Clock + ?Sized>(
        &self,
        text: &str,
        language: Option<&str>,
        selection: Selection,
        clock: &C,
    ) -> Result<Document, PipelineError> {
        let mut doc = Document::new(text, self.config.max_input_bytes)?;
        let mut timer = Timer {
            clock,
            last: clock.now_micros(),
        };

        let lang = self.language_of(&doc.text, language)?;
        doc.language = Some(lang.clone());
        timer.lap(&mut doc, "language");

        let original: Vec<char> = doc.text.chars().collect();
        let normalized = normalize_text(&doc.text);
        let nchars = normalized.chars();
        timer.lap(&mut doc, "normalize");

        let spans = break_sentences(&nchars, self.resources.abbreviations_for(&lang));
        timer.lap(&mut doc, "sentences");

        for (from, to) in spans {
            let start = doc.tokens.len();
            doc.tokens.extend(tokenize(&normalized, &nchars, &original, from, to));
            if doc.tokens.len() > start {
                doc.sentences.push(SentenceSpan {
                    token_start: start,
                    token_end: doc.tokens.len(),
                });
            }
        }
        timer.lap(&mut doc, "tokens");

        let wants = |k| selection.contains(k);
        let need_edl = wants(AnnotationKind::Entity) || wants(AnnotationKind::Topic) || wants(AnnotationKind::Hashtag);
        let need_topics = wants(AnnotationKind::Topic) || wants(AnnotationKind::Hashtag);

        if need_edl {
            if let Ok(dict) = self.resources.mention_dict(&lang) {
                doc.mentions = doc
                    .sentences
                    .iter()
                    .flat_map(|s| extract_mentions(&doc.tokens, *s, dict, &original))
                    .collect();
            }
            timer.lap(&mut doc, "mentions");
            disambiguate(&mut doc, &self.resources, &self.model, &self.config.edl);
            timer.lap(&mut doc, "edl");
        } else {
            timer.skip(&mut doc, "mentions");
            timer.skip(&mut doc, "edl");
        }

        if need_topics {
            doc.topic_annotations = project_topics(&doc.entity_annotations, &self.resources, &self.config.topics);
            timer.lap(&mut doc, "topics");
        } else {
            timer.skip(&mut doc, "topics");
        }

        if wants(AnnotationKind::Hashtag) {
            doc.hashtag_annotations = recommend_hashtags(&doc.topic_annotations, &self.resources);
            timer.lap(&mut doc, "hashtags");
        } else {
            timer.skip(&mut doc, "hashtags");
        }

        if wants(AnnotationKind::Sentiment) {
            doc.sentiment = Some(score_sentiment(&doc.tokens, &self.resources.lexicon, &self.config.sentiment));
            timer.lap(&mut doc, "sentiment");
        } else {
            timer.skip(&mut doc, "sentiment");
        }

        if wants(AnnotationKind::Entity) {
            decorate_metadata(&mut doc.entity_annotations, &self.resources.metadata);
            timer.lap(&mut doc, "metadata");
        } else {
            timer.skip(&mut doc, "metadata");
        }
        Ok(doc)
    }

    fn language_of(&self, text: &str, requested: Option<&str>) -> Result<String, PipelineError> {
        let lang = match requested {
            Some(l) => l.to_string(),
            None => {
                let sample: String = text.chars().take(self.config.langid_max_chars).collect();
                if !sample.chars().any(char::is_alphabetic) || self.resources.profiles.is_empty() {
                    self.config.default_language.clone()
                } else {
                    detect_language(&sample, &self.resources.profiles)?.0
                }
            }
        };
        if !self.config.languages.contains(&lang) {
            return Err(PipelineError::UnsupportedLanguage(lang));
        }
        Ok(lang)
    }
}
