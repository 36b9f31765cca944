//! On-disk resource files: a key→path manifest plus one TSV file per
//! dictionary. Every reader reports the 1-based line of the first bad record.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use annotext_core::doc::{EntityType, LocationMeta};
use annotext_core::resources::{
    CooccurrenceDict, EntityImportance, EntityMeta, EntityMetadata, MentionCandidate, MentionDict, Polarity,
    ResourceError, ResourceSet, SentimentLexicon, TopicOntology, WeightedLists, DEFAULT_COOCCUR_MIN_COUNT,
    DEFAULT_COOCCUR_TOP_K,
};
use annotext_core::text::{LanguageProfile, MAX_ORDER};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("missing {key} file{}", .path.as_ref().map(|p| format!(" {}", p.display())).unwrap_or_default())]
    MissingFile { key: String, path: Option<PathBuf> },
    #[error("{}:{line}: {message}", .path.display())]
    FormatError { path: PathBuf, line: usize, message: String },
    #[error("{}:{line}: {message}", .path.display())]
    InvariantViolation { path: PathBuf, line: usize, message: String },
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl LoadError {
    /// Line of the offending record, when there is one.
    pub fn line(&self) -> Option<usize> {
        match self {
            LoadError::FormatError { line, .. } | LoadError::InvariantViolation { line, .. } => Some(*line),
            _ => None,
        }
    }
}

/// Paths of every dictionary, relative to the manifest's directory.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default)]
    pub mentions: BTreeMap<String, PathBuf>,
    pub ontology_nodes: Option<PathBuf>,
    pub ontology_edges: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cooccurrence: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub importance: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entity_topics: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topic_hashtags: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lexicon: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emoticons: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub negations: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub profiles: BTreeMap<String, PathBuf>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub abbreviations: BTreeMap<String, PathBuf>,
}

impl Manifest {
    /// Reads a JSON manifest, or a TSV one (`key \t path`, with per-language
    /// keys written `mentions.en`) when the file ends in `.tsv`.
    pub fn read(path: &Path) -> Result<Manifest, LoadError> {
        let text = read_file("manifest", path)?;
        let value = if path.extension().is_some_and(|e| e == "tsv") {
            tsv_manifest(path, &text)?
        } else {
            serde_json::from_str(&text).map_err(|e| LoadError::FormatError {
                path: path.to_path_buf(),
                line: e.line(),
                message: e.to_string(),
            })?
        };
        serde_json::from_value(value).map_err(|e| LoadError::FormatError {
            path: path.to_path_buf(),
            line: 0,
            message: e.to_string(),
        })
    }
}

fn tsv_manifest(path: &Path, text: &str) -> Result<serde_json::Value, LoadError> {
    let mut root = serde_json::Map::new();
    for rec in records(path, text) {
        let rec = rec.expect_fields(2, 2)?;
        let (key, value) = (rec.fields[0], serde_json::Value::String(rec.fields[1].to_string()));
        match key.split_once('.') {
            Some((group, lang)) => {
                let slot = root
                    .entry(group.to_string())
                    .or_insert_with(|| serde_json::Value::Object(Default::default()));
                match slot {
                    serde_json::Value::Object(m) => {
                        m.insert(lang.to_string(), value);
                    }
                    _ => return Err(rec.format(format!("{group} is not a per-language key"))),
                }
            }
            None => {
                root.insert(key.to_string(), value);
            }
        }
    }
    Ok(serde_json::Value::Object(root))
}

/// Loads and validates every dictionary named by the manifest. Nothing is
/// returned unless every file parses and every invariant holds.
pub fn load_resources(manifest_path: &Path) -> Result<ResourceSet, LoadError> {
    let manifest = Manifest::read(manifest_path)?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let at = |p: &PathBuf| base.join(p);
    let required = |key: &str, p: &Option<PathBuf>| {
        p.as_ref().map(at).ok_or_else(|| LoadError::MissingFile {
            key: key.into(),
            path: None,
        })
    };

    let mut res = ResourceSet::new();
    res.ontology = read_ontology(
        &required("ontology_nodes", &manifest.ontology_nodes)?,
        &required("ontology_edges", &manifest.ontology_edges)?,
    )?;
    for (lang, p) in &manifest.mentions {
        res.mentions.insert(lang.clone(), read_mention_dict(&at(p))?);
    }
    if let Some(p) = &manifest.cooccurrence {
        res.cooccurrence = read_cooccurrence(&at(p))?;
    }
    if let Some(p) = &manifest.importance {
        res.importance = read_importance(&at(p))?;
    }
    if let Some(p) = &manifest.entity_topics {
        read_entity_topics(&at(p), &res.ontology, &mut res.entity_topics)?;
    }
    if let Some(p) = &manifest.topic_hashtags {
        res.topic_hashtags = read_topic_hashtags(&at(p), &res.ontology)?;
    }
    if let Some(p) = &manifest.lexicon {
        read_polar_entries(&at(p), &mut res.lexicon, false)?;
    }
    if let Some(p) = &manifest.emoticons {
        read_polar_entries(&at(p), &mut res.lexicon, true)?;
    }
    if let Some(p) = &manifest.negations {
        for w in read_word_list(&at(p))? {
            res.lexicon.add_negation(&w);
        }
    }
    if let Some(p) = &manifest.metadata {
        res.metadata = read_metadata(&at(p))?;
    }
    for (lang, p) in &manifest.profiles {
        let profile = read_profile(&at(p))?;
        if &profile.lang != lang {
            return Err(LoadError::InvariantViolation {
                path: at(p),
                line: 1,
                message: format!("profile is for {:?}, manifest lists it as {lang:?}", profile.lang),
            });
        }
        res.profiles.push(profile);
    }
    for (lang, p) in &manifest.abbreviations {
        let words = read_word_list(&at(p))?.into_iter().map(|w| w.to_lowercase()).collect();
        res.abbreviations.insert(lang.clone(), words);
    }
    res.check().map_err(|e| LoadError::InvariantViolation {
        path: manifest_path.to_path_buf(),
        line: 0,
        message: e.to_string(),
    })?;
    Ok(res)
}

fn read_file(key: &str, path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => LoadError::MissingFile {
            key: key.into(),
            path: Some(path.to_path_buf()),
        },
        _ => LoadError::Io {
            path: path.to_path_buf(),
            source: e,
        },
    })
}

struct Record<'a> {
    path: &'a Path,
    line: usize,
    fields: Vec<&'a str>,
}

impl<'a> Record<'a> {
    fn format(&self, message: impl Into<String>) -> LoadError {
        LoadError::FormatError {
            path: self.path.to_path_buf(),
            line: self.line,
            message: message.into(),
        }
    }

    fn invariant(&self, e: impl Display) -> LoadError {
        LoadError::InvariantViolation {
            path: self.path.to_path_buf(),
            line: self.line,
            message: e.to_string(),
        }
    }

    fn expect_fields(self, min: usize, max: usize) -> Result<Self, LoadError> {
        let n = self.fields.len();
        if n < min || n > max {
            let want = if min == max { min.to_string() } else { format!("{min}-{max}") };
            return Err(self.format(format!("expected {want} tab-separated fields, found {n}")));
        }
        if self.fields[..min].iter().any(|f| f.is_empty()) {
            return Err(self.format("empty field"));
        }
        Ok(self)
    }

    fn parse<T: FromStr>(&self, i: usize, what: &str) -> Result<T, LoadError>
    where
        T::Err: Display,
    {
        self.fields[i]
            .parse()
            .map_err(|e| self.format(format!("bad {what} {:?}: {e}", self.fields[i])))
    }

    fn polarity(&self, i: usize) -> Result<Polarity, LoadError> {
        match self.fields[i] {
            "+1" | "1" => Ok(Polarity::Positive),
            "-1" => Ok(Polarity::Negative),
            other => Err(self.format(format!("polarity must be +1 or -1, found {other:?}"))),
        }
    }
}

/// Non-blank, non-comment lines split on tabs. Fields are not trimmed.
fn records<'a>(path: &'a Path, text: &'a str) -> impl Iterator<Item = Record<'a>> {
    text.lines().enumerate().filter_map(move |(i, raw)| {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.is_empty() || line.starts_with('#') {
            return None;
        }
        Some(Record {
            path,
            line: i + 1,
            fields: line.split('\t').collect(),
        })
    })
}

fn for_each_record<'a>(
    key: &str,
    path: &'a Path,
    text: &'a mut String,
    (min, max): (usize, usize),
    mut f: impl FnMut(Record<'a>) -> Result<(), LoadError>,
) -> Result<(), LoadError> {
    *text = read_file(key, path)?;
    for rec in records(path, text) {
        f(rec.expect_fields(min, max)?)?;
    }
    Ok(())
}

pub fn read_mention_dict(path: &Path) -> Result<MentionDict, LoadError> {
    let mut dict = MentionDict::new();
    let mut text = String::new();
    for_each_record("mentions", path, &mut text, (4, 4), |r| {
        let candidate = MentionCandidate {
            entity_id: r.fields[1].to_string(),
            count: r.parse(2, "count")?,
            prior: r.parse(3, "prior")?,
        };
        dict.insert(r.fields[0], candidate).map_err(|e| r.invariant(e))
    })?;
    Ok(dict)
}

/// Reads neighbor lists and re-applies the minimum count and top-k limits.
pub fn read_cooccurrence(path: &Path) -> Result<CooccurrenceDict, LoadError> {
    let mut lists: BTreeMap<String, Vec<(String, u64)>> = BTreeMap::new();
    let mut text = String::new();
    for_each_record("cooccurrence", path, &mut text, (3, 3), |r| {
        let count = r.parse(2, "count")?;
        lists
            .entry(r.fields[0].to_string())
            .or_default()
            .push((r.fields[1].to_string(), count));
        Ok(())
    })?;
    Ok(CooccurrenceDict::from_lists(lists, DEFAULT_COOCCUR_MIN_COUNT, DEFAULT_COOCCUR_TOP_K))
}

pub fn read_importance(path: &Path) -> Result<EntityImportance, LoadError> {
    let mut out = EntityImportance::default();
    let mut text = String::new();
    for_each_record("importance", path, &mut text, (2, 2), |r| {
        out.insert(r.fields[0], r.parse(1, "score")?).map_err(|e| r.invariant(e))
    })?;
    Ok(out)
}

pub fn read_ontology(nodes: &Path, edges: &Path) -> Result<TopicOntology, LoadError> {
    let mut onto = TopicOntology::new();
    let mut text = String::new();
    for_each_record("ontology_nodes", nodes, &mut text, (3, 3), |r| {
        if onto.contains(r.fields[0]) {
            return Err(r.invariant(format!("topic {} listed twice", r.fields[0])));
        }
        onto.add_node(r.fields[0], r.fields[1], r.fields[2]);
        Ok(())
    })?;
    let mut text = String::new();
    for_each_record("ontology_edges", edges, &mut text, (2, 2), |r| {
        onto.add_edge(r.fields[0], r.fields[1]).map_err(|e| r.invariant(e))
    })?;
    Ok(onto)
}

fn unknown_topic(topic: &str) -> ResourceError {
    ResourceError::UnknownTopic(topic.to_string())
}

fn read_entity_topics(path: &Path, onto: &TopicOntology, out: &mut WeightedLists) -> Result<(), LoadError> {
    let mut text = String::new();
    for_each_record("entity_topics", path, &mut text, (3, 3), |r| {
        let affinity: f64 = r.parse(2, "affinity")?;
        if !(0.0..=1.0).contains(&affinity) {
            return Err(r.invariant(format!("affinity {affinity} outside [0,1]")));
        }
        if !onto.contains(r.fields[1]) {
            return Err(r.invariant(unknown_topic(r.fields[1])));
        }
        out.insert(r.fields[0], r.fields[1], affinity).map_err(|e| r.invariant(e))
    })
}

/// Entity→topic affinities checked against an ontology.
pub fn read_entity_topic_file(path: &Path, onto: &TopicOntology) -> Result<WeightedLists, LoadError> {
    let mut out = WeightedLists::new();
    read_entity_topics(path, onto, &mut out)?;
    Ok(out)
}

fn read_topic_hashtags(path: &Path, onto: &TopicOntology) -> Result<WeightedLists, LoadError> {
    let mut out = WeightedLists::new();
    let mut text = String::new();
    for_each_record("topic_hashtags", path, &mut text, (3, 3), |r| {
        if !onto.contains(r.fields[0]) {
            return Err(r.invariant(unknown_topic(r.fields[0])));
        }
        let tag = r.fields[1].trim_start_matches('#');
        if tag.is_empty() {
            return Err(r.format("empty hashtag"));
        }
        out.insert(r.fields[0], tag, r.parse(2, "weight")?).map_err(|e| r.invariant(e))
    })?;
    Ok(out)
}

fn read_polar_entries(path: &Path, lexicon: &mut SentimentLexicon, emoticons: bool) -> Result<(), LoadError> {
    let key = if emoticons { "emoticons" } else { "lexicon" };
    let mut text = String::new();
    for_each_record(key, path, &mut text, (3, 3), |r| {
        let (polarity, weight) = (r.polarity(1)?, r.parse(2, "weight")?);
        let added = if emoticons {
            lexicon.add_emoticon(r.fields[0], polarity, weight)
        } else {
            lexicon.add_word(r.fields[0], polarity, weight)
        };
        added.map_err(|e| r.invariant(e))
    })
}

/// One entry per line; surrounding whitespace is dropped.
pub fn read_word_list(path: &Path) -> Result<Vec<String>, LoadError> {
    let text = read_file("word list", path)?;
    Ok(records(path, &text)
        .map(|r| r.fields.join("\t").trim().to_string())
        .filter(|w| !w.is_empty())
        .collect())
}

pub fn read_metadata(path: &Path) -> Result<EntityMetadata, LoadError> {
    let mut out = EntityMetadata::default();
    let mut text = String::new();
    for_each_record("metadata", path, &mut text, (2, 8), |r| {
        let n = r.fields.len();
        if n != 4 && n != 8 {
            return Err(r.format(format!("expected 4 or 8 fields, found {n}")));
        }
        let entity_type = EntityType::parse(r.fields[1])
            .ok_or_else(|| r.format(format!("unknown entity type {:?}", r.fields[1])))?;
        let location = if n == 8 {
            Some(LocationMeta {
                population: r.parse(4, "population")?,
                time_zone: r.fields[5].to_string(),
                lat: r.parse(6, "latitude")?,
                lon: r.parse(7, "longitude")?,
            })
        } else {
            None
        };
        let meta = EntityMeta {
            entity_type,
            display: r.fields[2].to_string(),
            kb_url: Some(r.fields[3]).filter(|u| !u.is_empty()).map(str::to_string),
            location,
        };
        out.insert(r.fields[0], meta);
        Ok(())
    })?;
    Ok(out)
}

/// Header `lang \t log_prior \t unseen1 \t unseen2 \t unseen3`, then
/// `ngram \t log_prob` lines; an n-gram's order is its length in chars.
pub fn read_profile(path: &Path) -> Result<LanguageProfile, LoadError> {
    let text = read_file("profile", path)?;
    let mut recs = records(path, &text);
    let header = recs
        .next()
        .ok_or_else(|| LoadError::FormatError {
            path: path.to_path_buf(),
            line: 1,
            message: "empty profile".into(),
        })?
        .expect_fields(2 + MAX_ORDER, 2 + MAX_ORDER)?;
    let mut profile = LanguageProfile {
        lang: header.fields[0].to_string(),
        log_prior: header.parse(1, "log prior")?,
        tables: Default::default(),
        unseen: [0.0; MAX_ORDER],
    };
    for (i, u) in profile.unseen.iter_mut().enumerate() {
        *u = header.parse(2 + i, "unseen log probability")?;
    }
    for r in recs {
        let r = r.expect_fields(2, 2)?;
        let order = r.fields[0].chars().count();
        if !(1..=MAX_ORDER).contains(&order) {
            return Err(r.format(format!("n-gram {:?} has order {order}", r.fields[0])));
        }
        let p: f64 = r.parse(1, "log probability")?;
        if p.is_nan() || p > 0.0 {
            return Err(r.invariant(format!("log probability {p} is positive")));
        }
        profile.tables[order - 1].insert(r.fields[0].to_string(), p);
    }
    Ok(profile)
}

fn clean(field: &str) -> io::Result<&str> {
    if field.contains(['\t', '\n', '\r']) {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            format!("field {field:?} contains a tab or line break"),
        ));
    }
    Ok(field)
}

fn head(field: &str) -> io::Result<&str> {
    if field.starts_with('#') || field.is_empty() {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            format!("leading field {field:?} is empty or would read as a comment"),
        ));
    }
    clean(field)
}

fn write_lines(path: &Path, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> io::Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    body(&mut w)?;
    w.flush()
}

pub fn write_mention_dict(dict: &MentionDict, path: &Path) -> io::Result<()> {
    write_lines(path, |w| {
        for (surface, cands) in dict.iter() {
            for c in cands {
                writeln!(w, "{}\t{}\t{}\t{}", head(surface)?, clean(&c.entity_id)?, c.count, c.prior)?;
            }
        }
        Ok(())
    })
}

pub fn write_cooccurrence(dict: &CooccurrenceDict, path: &Path) -> io::Result<()> {
    write_lines(path, |w| {
        for (entity, list) in dict.iter() {
            for (n, c) in list {
                writeln!(w, "{}\t{}\t{c}", head(entity)?, clean(n)?)?;
            }
        }
        Ok(())
    })
}

fn write_importance(imp: &EntityImportance, path: &Path) -> io::Result<()> {
    write_lines(path, |w| {
        for (e, s) in imp.iter() {
            writeln!(w, "{}\t{s}", head(e)?)?;
        }
        Ok(())
    })
}

fn write_ontology(onto: &TopicOntology, nodes: &Path, edges: &Path) -> io::Result<()> {
    write_lines(nodes, |w| {
        for n in onto.nodes() {
            writeln!(w, "{}\t{}\t{}", head(&n.id)?, clean(&n.readable)?, clean(&n.display)?)?;
        }
        Ok(())
    })?;
    write_lines(edges, |w| {
        for (c, p) in onto.edges() {
            writeln!(w, "{}\t{}", head(c)?, clean(p)?)?;
        }
        Ok(())
    })
}

fn write_weighted(lists: &WeightedLists, path: &Path) -> io::Result<()> {
    write_lines(path, |w| {
        for (k, list) in lists.iter() {
            for (id, weight) in list {
                writeln!(w, "{}\t{}\t{weight}", head(k)?, clean(id)?)?;
            }
        }
        Ok(())
    })
}

fn polarity_str(p: Polarity) -> &'static str {
    match p {
        Polarity::Positive => "+1",
        Polarity::Negative => "-1",
    }
}

fn write_polar<'a>(entries: impl Iterator<Item = (&'a str, Polarity, f64)>, path: &Path) -> io::Result<()> {
    write_lines(path, |w| {
        for (k, p, weight) in entries {
            writeln!(w, "{}\t{}\t{weight}", head(k)?, polarity_str(p))?;
        }
        Ok(())
    })
}

fn write_word_list<'a>(words: impl Iterator<Item = &'a str>, path: &Path) -> io::Result<()> {
    write_lines(path, |w| {
        for word in words {
            writeln!(w, "{}", head(word)?)?;
        }
        Ok(())
    })
}

fn write_metadata(meta: &EntityMetadata, path: &Path) -> io::Result<()> {
    write_lines(path, |w| {
        for (e, m) in meta.iter() {
            write!(
                w,
                "{}\t{}\t{}\t{}",
                head(e)?,
                m.entity_type.as_str(),
                clean(&m.display)?,
                clean(m.kb_url.as_deref().unwrap_or(""))?
            )?;
            if let Some(l) = &m.location {
                write!(w, "\t{}\t{}\t{}\t{}", l.population, clean(&l.time_zone)?, l.lat, l.lon)?;
            }
            writeln!(w)?;
        }
        Ok(())
    })
}

pub fn write_profile(profile: &LanguageProfile, path: &Path) -> io::Result<()> {
    write_lines(path, |w| {
        write!(w, "{}\t{}", head(&profile.lang)?, profile.log_prior)?;
        for u in profile.unseen {
            write!(w, "\t{u}")?;
        }
        writeln!(w)?;
        for table in &profile.tables {
            for (gram, p) in table {
                writeln!(w, "{}\t{p}", head(gram)?)?;
            }
        }
        Ok(())
    })
}

/// Writes every dictionary of `res` under `dir` with conventional file
/// names, plus `manifest.json`. Returns the manifest path.
pub fn write_resources(res: &ResourceSet, dir: &Path) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let mut m = Manifest::default();
    for (lang, dict) in &res.mentions {
        let p = PathBuf::from(format!("mentions.{lang}.tsv"));
        write_mention_dict(dict, &dir.join(&p))?;
        m.mentions.insert(lang.clone(), p);
    }
    let (nodes, edges) = (PathBuf::from("topics.tsv"), PathBuf::from("topic_parents.tsv"));
    write_ontology(&res.ontology, &dir.join(&nodes), &dir.join(&edges))?;
    m.ontology_nodes = Some(nodes);
    m.ontology_edges = Some(edges);

    let p = PathBuf::from("cooccurrence.tsv");
    write_cooccurrence(&res.cooccurrence, &dir.join(&p))?;
    m.cooccurrence = Some(p);
    let p = PathBuf::from("importance.tsv");
    write_importance(&res.importance, &dir.join(&p))?;
    m.importance = Some(p);
    let p = PathBuf::from("entity_topics.tsv");
    write_weighted(&res.entity_topics, &dir.join(&p))?;
    m.entity_topics = Some(p);
    let p = PathBuf::from("topic_hashtags.tsv");
    write_weighted(&res.topic_hashtags, &dir.join(&p))?;
    m.topic_hashtags = Some(p);
    let p = PathBuf::from("lexicon.tsv");
    write_polar(res.lexicon.words(), &dir.join(&p))?;
    m.lexicon = Some(p);
    let p = PathBuf::from("emoticons.tsv");
    write_polar(res.lexicon.emoticons(), &dir.join(&p))?;
    m.emoticons = Some(p);
    let p = PathBuf::from("negations.txt");
    write_word_list(res.lexicon.negations(), &dir.join(&p))?;
    m.negations = Some(p);
    let p = PathBuf::from("metadata.tsv");
    write_metadata(&res.metadata, &dir.join(&p))?;
    m.metadata = Some(p);
    for profile in &res.profiles {
        let p = PathBuf::from(format!("profile.{}.tsv", profile.lang));
        write_profile(profile, &dir.join(&p))?;
        m.profiles.insert(profile.lang.clone(), p);
    }
    for (lang, words) in &res.abbreviations {
        let p = PathBuf::from(format!("abbreviations.{lang}.txt"));
        write_word_list(words.iter().map(String::as_str), &dir.join(&p))?;
        m.abbreviations.insert(lang.clone(), p);
    }

    let path = dir.join("manifest.json");
    let json = serde_json::to_string_pretty(&m).map_err(io::Error::other)?;
    fs::write(&path, json + "\n")?;
    Ok(path)
}
