//! Seeded synthetic corpora. Documents follow a theme topic so ambiguous
//! aliases resolve the way their neighbors suggest, and every alias
//! occurrence is annotated (NIL included), giving dense gold data.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;

use annotext_core::builder::{AnnotatedDoc, GoldAnnotation};
use annotext_core::doc::NIL;
use annotext_core::resources::WeightedLists;
use annotext_core::text::{analyze, surface_key};
use rand::distr::weighted::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Language code for aliases valid in every language.
pub const ANY_LANG: &str = "*";

#[derive(Debug, Clone, PartialEq)]
pub struct Alias {
    pub lang: String,
    pub surface: String,
    pub entity: String,
    pub weight: f64,
}

/// Everything the generator draws from.
#[derive(Debug, Clone, Default)]
pub struct World {
    pub aliases: Vec<Alias>,
    /// Entity → topics, as in the resource files.
    pub entity_topics: WeightedLists,
    /// Per-language filler vocabulary.
    pub filler: BTreeMap<String, Vec<String>>,
}

impl World {
    /// Reads `lang \t surface \t entity \t weight` alias lines.
    pub fn parse_aliases(text: &str) -> Result<Vec<Alias>, String> {
        let mut out = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = line.split('\t').collect();
            let [lang, surface, entity, weight] = f[..] else {
                return Err(format!("line {}: expected 4 fields", i + 1));
            };
            let weight: f64 = weight.parse().map_err(|e| format!("line {}: {e}", i + 1))?;
            if weight.is_nan() || weight <= 0.0 {
                return Err(format!("line {}: weight must be positive", i + 1));
            }
            out.push(Alias {
                lang: lang.into(),
                surface: surface.into(),
                entity: entity.into(),
                weight,
            });
        }
        Ok(out)
    }

    /// Filler words from running text: lowercase alphabetic words that are
    /// not alias words, deduplicated, in first-seen order.
    pub fn filler_from_text(text: &str, aliases: &[Alias]) -> Vec<String> {
        let alias_words: std::collections::BTreeSet<String> = aliases
            .iter()
            .flat_map(|a| surface_key(&a.surface).split(' ').map(str::to_string).collect::<Vec<_>>())
            .collect();
        let mut seen = std::collections::BTreeSet::new();
        text.split(|c: char| !c.is_alphabetic())
            .map(str::to_lowercase)
            .filter(|w| w.chars().count() > 1 && !alias_words.contains(&surface_key(w)))
            .filter(|w| seen.insert(w.clone()))
            .collect()
    }

    /// Loads aliases from `aliases` and filler from every `<lang>.txt` in
    /// `samples_dir`.
    pub fn load(aliases: &Path, samples_dir: &Path, entity_topics: WeightedLists) -> io::Result<World> {
        let parsed = World::parse_aliases(&fs::read_to_string(aliases)?)
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, format!("{}: {e}", aliases.display())))?;
        let mut filler = BTreeMap::new();
        for entry in fs::read_dir(samples_dir)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "txt") {
                let lang = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
                filler.insert(lang, World::filler_from_text(&fs::read_to_string(&path)?, &parsed));
            }
        }
        Ok(World {
            aliases: parsed,
            entity_topics,
            filler,
        })
    }

    fn aliases_for<'a>(&'a self, lang: &'a str) -> impl Iterator<Item = &'a Alias> + 'a {
        self.aliases.iter().filter(move |a| a.lang == lang || a.lang == ANY_LANG)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthOptions {
    pub docs: usize,
    pub langs: Vec<String>,
    pub sentences: (usize, usize),
    pub filler_per_sentence: (usize, usize),
    pub mentions_per_sentence: (usize, usize),
    /// Chance a mention ignores the theme.
    pub off_theme: f64,
    /// Chance a mention slot is a NIL alias.
    pub nil_rate: f64,
    pub id_prefix: String,
}

impl Default for SynthOptions {
    fn default() -> Self {
        SynthOptions {
            docs: 100,
            langs: vec!["en".into()],
            sentences: (2, 5),
            filler_per_sentence: (4, 10),
            mentions_per_sentence: (1, 3),
            off_theme: 0.1,
            nil_rate: 0.1,
            id_prefix: "doc".into(),
        }
    }
}

struct LangPlan<'a> {
    filler: &'a [String],
    /// Theme topic → (entity, affinity) pairs reachable in this language.
    themes: Vec<(&'a str, Vec<(&'a str, f64)>)>,
    entities: Vec<&'a str>,
    by_entity: BTreeMap<&'a str, Vec<&'a Alias>>,
    nil: Vec<&'a Alias>,
}

fn plan<'a>(world: &'a World, lang: &'a str) -> Option<LangPlan<'a>> {
    let filler = world.filler.get(lang).filter(|f| !f.is_empty())?;
    let mut by_entity: BTreeMap<&str, Vec<&Alias>> = BTreeMap::new();
    let mut nil = Vec::new();
    for a in world.aliases_for(lang) {
        if a.entity == NIL {
            nil.push(a);
        } else {
            by_entity.entry(&a.entity).or_default().push(a);
        }
    }
    let mut themes: BTreeMap<&str, Vec<(&str, f64)>> = BTreeMap::new();
    for &e in by_entity.keys() {
        for (t, w) in world.entity_topics.get(e) {
            themes.entry(t).or_default().push((e, *w));
        }
    }
    let themes: Vec<_> = themes.into_iter().filter(|(_, es)| es.len() >= 2).collect();
    if themes.is_empty() {
        return None;
    }
    Some(LangPlan {
        filler,
        themes,
        entities: by_entity.keys().copied().collect(),
        by_entity,
        nil,
    })
}

fn pick_weighted<'a, T>(rng: &mut impl Rng, items: &'a [T], weight: impl Fn(&T) -> f64) -> &'a T {
    let dist = WeightedIndex::new(items.iter().map(weight)).expect("positive weights");
    &items[dist.sample(rng)]
}

/// Appends `s` after a space; returns its char span.
fn push(text: &mut String, chars: &mut usize, s: &str) -> (usize, usize) {
    if !text.is_empty() {
        text.push(' ');
        *chars += 1;
    }
    let start = *chars;
    text.push_str(s);
    *chars += s.chars().count();
    (start, *chars)
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// One document around a randomly chosen theme topic.
fn synth_doc(p: &LangPlan, lang: &str, opts: &SynthOptions, rng: &mut impl Rng) -> AnnotatedDoc {
    let (_, pool) = &p.themes[rng.random_range(0..p.themes.len())];
    let mut text = String::new();
    // (char start, char end, surface, entity)
    let mut placed: Vec<(usize, usize, String, String)> = Vec::new();
    let mut chars = 0usize;

    for _ in 0..rng.random_range(opts.sentences.0..=opts.sentences.1) {
        let n_fill = rng.random_range(opts.filler_per_sentence.0..=opts.filler_per_sentence.1).max(1);
        let n_ment = rng.random_range(opts.mentions_per_sentence.0..=opts.mentions_per_sentence.1);
        let mut slots: Vec<Option<&Alias>> = vec![None; n_fill];
        for _ in 0..n_ment {
            let alias = if !p.nil.is_empty() && rng.random_bool(opts.nil_rate) {
                *p.nil.choose(rng).expect("non-empty")
            } else {
                let entity = if rng.random_bool(opts.off_theme) {
                    *p.entities.choose(rng).expect("non-empty")
                } else {
                    pick_weighted(rng, pool, |(_, w)| w.max(1e-3)).0
                };
                *pick_weighted(rng, &p.by_entity[entity], |a| a.weight)
            };
            // never first (keeps sentence starts plain) and never adjacent
            let free: Vec<usize> = (1..=slots.len())
                .filter(|&i| slots[i - 1].is_none() && slots.get(i).is_none_or(Option::is_none))
                .collect();
            if let Some(&at) = free.choose(rng) {
                slots.insert(at, Some(alias));
            }
        }
        for (k, slot) in slots.iter().enumerate() {
            match slot {
                Some(a) => {
                    let (s, e) = push(&mut text, &mut chars, &a.surface);
                    placed.push((s, e, a.surface.clone(), a.entity.clone()));
                }
                None => {
                    let w = p.filler.choose(rng).expect("non-empty");
                    let w = if k == 0 { capitalize(w) } else { w.clone() };
                    push(&mut text, &mut chars, &w);
                }
            }
        }
        text.push('.');
        chars += 1;
    }

    let a = analyze(&text, None);
    let annotations = placed
        .into_iter()
        .filter_map(|(s, e, surface, entity)| {
            let first = a.tokens.iter().position(|t| t.char_start == s)?;
            let last = a.tokens.iter().position(|t| t.char_end == e)?;
            Some(GoldAnnotation {
                start: first,
                end: last + 1,
                surface,
                entity_id: entity,
            })
        })
        .collect();
    AnnotatedDoc {
        doc_id: None,
        lang: lang.into(),
        text,
        annotations,
    }
}

/// `opts.docs` documents spread round-robin over the languages that have
/// filler and at least one theme. Same seed, same corpus.
pub fn synth_corpus(world: &World, opts: &SynthOptions, seed: u64) -> Vec<AnnotatedDoc> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let plans: Vec<(&str, LangPlan)> = opts
        .langs
        .iter()
        .filter_map(|l| plan(world, l).map(|p| (l.as_str(), p)))
        .collect();
    if plans.is_empty() {
        return Vec::new();
    }
    (0..opts.docs)
        .map(|n| {
            let (lang, p) = &plans[n % plans.len()];
            let mut d = synth_doc(p, lang, opts, &mut rng);
            d.doc_id = Some(format!("{}{n:05}", opts.id_prefix));
            d
        })
        .collect()
}

/// Entity-dense text of at least `bytes` bytes built from dictionary
/// surfaces and filler words, for benchmarking.
pub fn dense_text(surfaces: &[String], filler: &[String], bytes: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = String::with_capacity(bytes + 64);
    while text.len() < bytes {
        if !text.is_empty() {
            text.push(' ');
        }
        let words = rng.random_range(8..16);
        for k in 0..words {
            if k > 0 {
                text.push(' ');
            }
            let w = if k > 0 && k % 3 == 1 && !surfaces.is_empty() {
                surfaces.choose(&mut rng).expect("non-empty").clone()
            } else {
                filler.choose(&mut rng).map_or_else(|| "word".into(), Clone::clone)
            };
            text.push_str(&if k == 0 { capitalize(&w) } else { w });
        }
        text.push('.');
    }
    text
}
