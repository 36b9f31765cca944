//! Acceptance criteria. Runs sequentially (no libtest harness) so the timing
//! criterion is not disturbed by other tests, and prints one PASS/FAIL line
//! per criterion.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use annotext::bench::{run_bench, BenchOptions};
use annotext::corpus::read_corpus_file;
use annotext::evaluation::{predict, score};
use annotext::load_pipeline;
use annotext::wire::Response;
use annotext_core::builder::{prune_cooccurrence, AnnotatedDoc, CooccurrenceCounts, GoldAnnotation, MentionCounts};
use annotext_core::doc::{
    is_placeholder, CandidateEntity, Document, ResolutionPass, Selection, SentimentLabel, DEFAULT_MAX_INPUT_BYTES,
};
use annotext_core::edl::{
    disambiguate, feature_topic_sim, final_disambiguation, jaccard, logistic_gradient, logistic_loss, ClassifierModel,
    EdlConfig, LogisticModel, Sample, TrainingMeta, TreeNode, FEATURE_COUNT,
};
use annotext_core::enrich::{score_sentiment, SentimentConfig};
use annotext_core::eval::{evaluate, SpanLink};
use annotext_core::pipeline::NoClock;
use annotext_core::resources::{
    CooccurrenceDict, MentionCandidate, MentionDict, Polarity, ResourceSet, SentimentLexicon, TopicOntology,
};
use annotext_core::text::{analyze, extract_mentions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(limit: Duration, elapsed: Duration, what: &str) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("{what} took {elapsed:?}, limit {limit:?}"))
    }
}

fn repo() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

// 1
fn jaccard_oracle() -> Outcome {
    let t = Instant::now();
    let j = jaccard("Marvel", "Marvel Comics");
    within(Duration::from_millis(1), t.elapsed(), "jaccard")?;
    ensure!(j == 0.5, "jaccard = {j}");
    Ok(format!("jaccard(Marvel, Marvel Comics) = {j}"))
}

fn figure_ontology() -> TopicOntology {
    let mut o = TopicOntology::new();
    for id in ["root", "technology", "computer-hardware", "internet", "apple", "google", "lifestyle", "food"] {
        o.add_node(id, id, id);
    }
    for (c, p) in [
        ("technology", "root"),
        ("computer-hardware", "technology"),
        ("internet", "technology"),
        ("apple", "computer-hardware"),
        ("google", "internet"),
        ("lifestyle", "root"),
        ("food", "lifestyle"),
    ] {
        o.add_edge(c, p).unwrap();
    }
    o
}

// 2
fn ontology_distance() -> Outcome {
    let mut r = ResourceSet::new();
    r.ontology = figure_ontology();
    for (e, t) in [("Apple_Inc", "apple"), ("Apple_fruit", "food"), ("Google_Inc", "google")] {
        r.entity_topics.insert(e, t, 1.0).unwrap();
    }
    let inc = r.ontology.distance("apple", "google").unwrap();
    let fruit = r.ontology.distance("food", "google").unwrap();
    ensure!(inc == Some(4), "distance(apple, google) = {inc:?}");
    ensure!(fruit == Some(5), "distance(food, google) = {fruit:?}");
    let s_inc = feature_topic_sim("Apple_Inc", &["Google_Inc"], &r);
    let s_fruit = feature_topic_sim("Apple_fruit", &["Google_Inc"], &r);
    ensure!(s_inc == 0.25 && s_fruit == 0.2, "topic sims {s_inc} / {s_fruit}");
    Ok(format!("distances 4 / 5, topic sim {s_inc} > {s_fruit}"))
}

const DEMO_SENTENCE: &str = "Google CEO Eric Schmidt said that the competition between Apple and Google and iOS vs. Android is 'the defining fight of the tech industry'.";

fn demo_resources() -> ResourceSet {
    let mut r = ResourceSet::new();
    let mut d = MentionDict::new();
    let entries: &[(&str, &[(&str, u64)])] = &[
        ("google", &[("Google_Inc", 60), ("NIL", 40)]),
        ("ceo", &[("Chief_Executive", 70), ("NIL", 30)]),
        ("eric schmidt", &[("Eric_Schmidt", 95), ("NIL", 5)]),
        ("apple", &[("Apple_Inc", 50), ("NIL", 20), ("Apple_fruit", 20), ("Apple_Records", 10)]),
        ("ios", &[("iOS", 92), ("NIL", 8)]),
        ("android", &[("Android_OS", 55), ("NIL", 30), ("Android_robot", 15)]),
        ("tech industry", &[("Technology", 12)]),
    ];
    for (surface, cands) in entries {
        let total: u64 = cands.iter().map(|(_, c)| c).sum();
        for (e, c) in *cands {
            let candidate = MentionCandidate {
                entity_id: e.to_string(),
                count: *c,
                prior: *c as f64 / total as f64,
            };
            d.insert(surface, candidate).unwrap();
        }
    }
    r.mentions.insert("en".into(), d);

    let mut o = figure_ontology();
    for (id, parent) in [
        ("tech-news", "internet"),
        ("smartphones", "internet"),
        ("mobile-os", "smartphones"),
        ("business", "root"),
        ("management", "business"),
        ("entertainment", "root"),
        ("music", "entertainment"),
        ("science", "root"),
        ("engineering", "science"),
        ("robotics", "engineering"),
    ] {
        o.add_node(id, id, id);
        o.add_edge(id, parent).unwrap();
    }
    r.ontology = o;
    for (e, t) in [
        ("Eric_Schmidt", "google"),
        ("iOS", "mobile-os"),
        ("Technology", "tech-news"),
        ("Google_Inc", "google"),
        ("Chief_Executive", "management"),
        ("Apple_Inc", "apple"),
        ("Apple_fruit", "food"),
        ("Apple_Records", "music"),
        ("Android_OS", "smartphones"),
        ("Android_robot", "robotics"),
    ] {
        r.entity_topics.insert(e, t, 1.0).unwrap();
    }
    for (e, s) in [
        ("Apple_Inc", 0.66),
        ("Google_Inc", 0.8),
        ("Apple_fruit", 0.64),
        ("Apple_Records", 0.2),
        ("Android_OS", 0.5),
        ("Android_robot", 0.1),
        ("Chief_Executive", 0.4),
    ] {
        r.importance.insert(e, s).unwrap();
    }
    let lists = [
        ("Google_Inc", vec![("Eric_Schmidt", 80), ("iOS", 20)]),
        ("Apple_Inc", vec![("iOS", 90)]),
        ("Android_OS", vec![("iOS", 70), ("Google_Inc", 60)]),
        ("Chief_Executive", vec![("Eric_Schmidt", 50)]),
    ];
    r.cooccurrence = CooccurrenceDict::from_lists(
        lists
            .into_iter()
            .map(|(e, ns)| (e.to_string(), ns.into_iter().map(|(n, c)| (n.to_string(), c)).collect())),
        0,
        30,
    );
    r
}

/// Hand-set: true on a close topic link or on co-occurrence with context.
fn demo_model() -> ClassifierModel {
    ClassifierModel {
        logistic: LogisticModel {
            weights: [1.0, 1.0, 1.0, 1.0, 2.0],
            bias: -2.0,
        },
        tree: TreeNode::split(
            4,
            0.4,
            TreeNode::split(3, 0.1, TreeNode::leaf(false), TreeNode::leaf(true)),
            TreeNode::leaf(true),
        ),
        hyper: TrainingMeta::default(),
    }
}

// 3
fn demonstrative_example() -> Outcome {
    let r = demo_resources();
    let t = Instant::now();
    let mut doc = Document::new(DEMO_SENTENCE, DEFAULT_MAX_INPUT_BYTES).unwrap();
    let a = analyze(&doc.text, None);
    let chars: Vec<char> = doc.text.chars().collect();
    let dict = r.mention_dict("en").unwrap();
    doc.mentions = a
        .sentences
        .iter()
        .flat_map(|s| extract_mentions(&a.tokens, *s, dict, &chars))
        .collect();
    doc.tokens = a.tokens;
    doc.sentences = a.sentences;
    doc.language = Some("en".into());
    disambiguate(&mut doc, &r, &demo_model(), &EdlConfig::default());
    within(Duration::from_millis(100), t.elapsed(), "disambiguation")?;

    let pass = |p: ResolutionPass| -> BTreeMap<String, String> {
        doc.mentions
            .iter()
            .filter(|m| m.resolution_pass == p)
            .map(|m| (m.surface.clone(), m.resolved.clone().unwrap_or_default()))
            .collect()
    };
    let easy: BTreeMap<String, String> = [("Eric Schmidt", "Eric_Schmidt"), ("iOS", "iOS"), ("tech industry", "Technology")]
        .into_iter()
        .map(|(a, b)| (a.into(), b.into()))
        .collect();
    let hard: BTreeMap<String, String> = [
        ("Google", "Google_Inc"),
        ("CEO", "Chief_Executive"),
        ("Apple", "Apple_Inc"),
        ("Android", "Android_OS"),
    ]
    .into_iter()
    .map(|(a, b)| (a.into(), b.into()))
    .collect();
    ensure!(pass(ResolutionPass::Easy) == easy, "pass 1: {:?}", pass(ResolutionPass::Easy));
    ensure!(pass(ResolutionPass::Hard) == hard, "pass 2: {:?}", pass(ResolutionPass::Hard));
    let unresolved = pass(ResolutionPass::Unresolved);
    ensure!(unresolved.is_empty(), "unresolved: {unresolved:?}");
    Ok("pass 1 = {Eric Schmidt, iOS, tech industry}, pass 2 = {Google, CEO, Apple, Android}".into())
}

const ENTITY_POOL: usize = 60;
const SURFACES: &[&str] = &["Jordan", "jordan", "Apple", "APPLE", "paris", "Java", "Mercury", "mercury", "Kings"];

fn random_corpus(rng: &mut ChaCha8Rng) -> Vec<AnnotatedDoc> {
    let mut budget: usize = rng.random_range(1..=200);
    let mut docs = Vec::new();
    while budget > 0 {
        let len = rng.random_range(1..=budget);
        budget -= len;
        let mut annotations = Vec::new();
        let mut pos = 0;
        while pos < len {
            pos += rng.random_range(0..4);
            let width = rng.random_range(1..=2);
            if pos + width > len {
                break;
            }
            let entity = match rng.random_range(0..10) {
                0 => "NIL".to_string(),
                1 => "MISC".to_string(),
                _ => format!("E{:02}", rng.random_range(0..ENTITY_POOL)),
            };
            annotations.push(GoldAnnotation {
                start: pos,
                end: pos + width,
                surface: SURFACES[rng.random_range(0..SURFACES.len())].into(),
                entity_id: entity,
            });
            pos += width;
        }
        docs.push(AnnotatedDoc {
            doc_id: None,
            lang: ["en", "de"][rng.random_range(0..2)].into(),
            text: String::new(),
            annotations,
        });
    }
    docs
}

/// Priors by direct counting: lang → surface → entity → prior.
fn prior_oracle(docs: &[AnnotatedDoc]) -> BTreeMap<String, BTreeMap<String, BTreeMap<String, f64>>> {
    let mut counts: BTreeMap<String, BTreeMap<String, BTreeMap<String, u64>>> = BTreeMap::new();
    for d in docs {
        for a in &d.annotations {
            *counts
                .entry(d.lang.clone())
                .or_default()
                .entry(a.surface.to_lowercase())
                .or_default()
                .entry(a.entity_id.clone())
                .or_default() += 1;
        }
    }
    counts
        .into_iter()
        .map(|(lang, surfaces)| {
            let surfaces = surfaces
                .into_iter()
                .map(|(s, es)| {
                    let total: u64 = es.values().sum();
                    (s, es.into_iter().map(|(e, c)| (e, c as f64 / total as f64)).collect())
                })
                .collect();
            (lang, surfaces)
        })
        .collect()
}

/// Pair counts by scanning every token position against the next 49.
fn cooccurrence_oracle(docs: &[AnnotatedDoc], window: usize) -> BTreeMap<(String, String), u64> {
    let mut out = BTreeMap::new();
    for d in docs {
        let len = d.annotations.iter().map(|a| a.end).max().unwrap_or(0);
        let mut at: Vec<Option<&str>> = vec![None; len];
        for a in &d.annotations {
            if a.entity_id != "NIL" && a.entity_id != "MISC" {
                at[a.start] = Some(&a.entity_id);
            }
        }
        for p in 0..len {
            for q in p + 1..len.min(p + window) {
                if let (Some(x), Some(y)) = (at[p], at[q]) {
                    if x != y {
                        let key = if x < y { (x.into(), y.into()) } else { (y.into(), x.into()) };
                        *out.entry(key).or_insert(0) += 1;
                    }
                }
            }
        }
    }
    out
}

// 4
fn builder_oracle() -> Outcome {
    const CASES: usize = 600;
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut pooled = CooccurrenceCounts::new(50);
    let mut pooled_oracle: BTreeMap<(String, String), u64> = BTreeMap::new();
    for case in 0..CASES {
        let docs = random_corpus(&mut rng);
        let mut mentions = MentionCounts::new();
        let mut pairs = CooccurrenceCounts::new(50);
        for d in &docs {
            ensure!(mentions.add(d) && pairs.add(d), "case {case}: generated doc rejected");
        }
        for (lang, surfaces) in prior_oracle(&docs) {
            let dict = mentions.build(&lang);
            let built: BTreeMap<String, BTreeMap<String, f64>> = dict
                .iter()
                .map(|(s, cs)| (s.to_string(), cs.iter().map(|c| (c.entity_id.clone(), c.prior)).collect()))
                .collect();
            ensure!(built == surfaces, "case {case}: priors differ for {lang}");
        }
        let built: BTreeMap<(String, String), u64> =
            pairs.iter().map(|(a, b, c)| ((a.to_string(), b.to_string()), c)).collect();
        let oracle = cooccurrence_oracle(&docs, 50);
        ensure!(built == oracle, "case {case}: pair counts differ");
        for (k, c) in oracle {
            *pooled_oracle.entry(k).or_default() += c;
        }
        pooled.merge(pairs);
    }

    let (dict, _) = prune_cooccurrence(&pooled, 10, 30);
    let mut neighbors: BTreeMap<&str, Vec<(&str, u64)>> = BTreeMap::new();
    for ((a, b), &c) in &pooled_oracle {
        neighbors.entry(a).or_default().push((b, c));
        neighbors.entry(b).or_default().push((a, c));
    }
    let mut max_kept = 0;
    for (e, mut list) in neighbors {
        list.retain(|&(_, c)| c >= 10);
        list.sort_by(|x, y| y.1.cmp(&x.1).then_with(|| x.0.cmp(y.0)));
        list.truncate(30);
        let kept: Vec<(&str, u64)> = dict.neighbors(e).iter().map(|(n, c)| (n.as_str(), *c)).collect();
        ensure!(kept == list, "pruned neighbors of {e} differ");
        ensure!(kept.iter().all(|&(_, c)| c >= 10) && kept.len() <= 30, "pruning bounds violated for {e}");
        max_kept = max_kept.max(kept.len());
    }
    within(Duration::from_secs(30), t.elapsed(), "builder oracle")?;
    Ok(format!("{CASES} random corpora match; pooled pruning keeps ≤ {max_kept} neighbors, all counts ≥ 10"))
}

// 5
fn sentiment_formula() -> Outcome {
    let mut l = SentimentLexicon::new();
    l.add_word("good", Polarity::Positive, 1.0).unwrap();
    l.add_negation("not");
    let cfg = SentimentConfig::default();
    ensure!(cfg.epsilon == 1.0, "epsilon {}", cfg.epsilon);
    let pos = score_sentiment(&analyze("good movie", None).tokens, &l, &cfg);
    let neg = score_sentiment(&analyze("not good movie", None).tokens, &l, &cfg);
    let want_pos = 1.0 / (2f64.ln() + 1.0);
    let want_neg = -1.0 / (3f64.ln() + 1.0);
    ensure!((pos.score - want_pos).abs() <= 1e-12, "good movie → {}", pos.score);
    ensure!((neg.score - want_neg).abs() <= 1e-12, "not good movie → {}", neg.score);
    ensure!(neg.label == SentimentLabel::Negative, "label {:?}", neg.label);
    Ok(format!("{:.12} / {:.12}, NEGATIVE", pos.score, neg.score))
}

// 6
fn logistic_gradient_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let mut model = LogisticModel {
            weights: std::array::from_fn(|_| rng.random_range(-2.0..2.0)),
            bias: rng.random_range(-1.0..1.0),
        };
        let l2 = rng.random_range(0.0..0.1);
        let n = rng.random_range(1..=32);
        let batch: Vec<Sample> = (0..n)
            .map(|_| (std::array::from_fn(|_| rng.random_range(0.0..1.0)), rng.random_bool(0.5)))
            .collect();
        let (gw, gb) = logistic_gradient(&model, &batch, l2);
        let mut check = |analytic: f64, numeric: f64| {
            let rel = (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-8);
            worst = worst.max(rel);
        };
        for i in 0..FEATURE_COUNT {
            let w = model.weights[i];
            model.weights[i] = w + h;
            let up = logistic_loss(&model, &batch, l2);
            model.weights[i] = w - h;
            let down = logistic_loss(&model, &batch, l2);
            model.weights[i] = w;
            check(gw[i], (up - down) / (2.0 * h));
        }
        let b = model.bias;
        model.bias = b + h;
        let up = logistic_loss(&model, &batch, l2);
        model.bias = b - h;
        let down = logistic_loss(&model, &batch, l2);
        check(gb, (up - down) / (2.0 * h));
    }
    ensure!(worst <= 1e-5, "max relative error {worst:e}");
    Ok(format!("max relative error {worst:.2e} over 100 draws"))
}

fn scored(id: &str, prior: f64, label: bool, score: f64) -> CandidateEntity {
    CandidateEntity {
        label: Some(label),
        score: Some(score),
        ..CandidateEntity::new(id, prior)
    }
}

// 7
fn final_rule_table() -> Outcome {
    let l3 = EdlConfig::default().lambda3;
    let table: [(&str, Vec<CandidateEntity>, &str); 6] = [
        (
            "one True",
            vec![scored("NIL", 0.3, false, 0.9), scored("A", 0.5, true, 0.6), scored("B", 0.2, false, 0.7)],
            "A",
        ),
        (
            "one True, it is NIL",
            vec![scored("NIL", 0.3, true, 0.55), scored("A", 0.7, false, 0.5)],
            "NIL",
        ),
        (
            "several True, NIL within margin",
            vec![scored("NIL", 0.2, true, 0.80), scored("Apple_Inc", 0.5, true, 0.78), scored("X", 0.3, false, 0.95)],
            "Apple_Inc",
        ),
        (
            "several True, NIL clear",
            vec![scored("NIL", 0.2, true, 0.90), scored("Apple_Inc", 0.5, true, 0.60), scored("X", 0.3, true, 0.5)],
            "NIL",
        ),
        (
            "no True, NIL within margin",
            vec![scored("MISC", 0.4, false, 0.45), scored("X", 0.3, false, 0.40), scored("Y", 0.3, false, 0.1)],
            "X",
        ),
        (
            "no True, NIL clear",
            vec![scored("NIL", 0.5, false, 0.9), scored("X", 0.5, false, 0.2)],
            "NIL",
        ),
    ];
    for (name, cands, want) in &table {
        let got = &cands[final_disambiguation(cands, l3).map_err(|e| e.to_string())?].entity_id;
        ensure!(got == want, "{name}: chose {got}, expected {want}");
    }
    Ok("6/6 fixtures".into())
}

fn listing_schema() -> serde_json::Value {
    json!({
        "type": "object",
        "required": ["text", "language", "annotation_summary", "sentiment"],
        "additionalProperties": false,
        "properties": {
            "text": {"type": "string"},
            "language": {"type": "string"},
            "sentiment": {"type": "number"},
            "annotation_summary": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["type", "annotation_identifier"],
                    "additionalProperties": false,
                    "properties": {
                        "type": {"enum": ["ENTITY", "KLOUT_TOPIC", "HASHTAG"]},
                        "annotation_identifier": {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "required": ["id_str", "score"],
                                "additionalProperties": false,
                                "properties": {
                                    "id_str": {"type": "string"},
                                    "id_url": {"type": "string", "format": "uri"},
                                    "id_readable": {"type": "string"},
                                    "score": {"type": "number"},
                                    "type": {"type": "string"}
                                }
                            }
                        }
                    }
                }
            }
        }
    })
}

// 8
fn json_schema() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/listing1");
    let pipeline = load_pipeline(&dir.join("manifest.json"), &dir.join("model.json"), Some(&dir.join("config.toml")))
        .map_err(|e| format!("{e:#}"))?;
    let text = "Vlade Divac Serbian NBA player used to play for LA Lakers.";
    let doc = pipeline
        .annotate(text, None, Selection::all(), &NoClock)
        .map_err(|e| e.to_string())?;
    let response = Response::from_document(&doc, Selection::all());
    let value = serde_json::to_value(&response).unwrap();
    let validator = jsonschema::validator_for(&listing_schema()).map_err(|e| e.to_string())?;
    let errors: Vec<String> = validator.iter_errors(&value).map(|e| e.to_string()).collect();
    ensure!(errors.is_empty(), "schema errors: {errors:?}");

    ensure!(value["language"] == "en" && value["sentiment"] == 0.0, "language/sentiment {value}");
    let kinds: Vec<&str> = response.annotation_summary.iter().map(|s| s.kind.as_str()).collect();
    ensure!(kinds == ["ENTITY", "KLOUT_TOPIC", "HASHTAG"], "sections {kinds:?}");
    let ents: Vec<(&str, f64, Option<&str>, Option<&str>)> = response.annotation_summary[0]
        .annotation_identifier
        .iter()
        .map(|i| (i.id_str.as_str(), i.score, i.entity_type.as_deref(), i.id_url.as_deref()))
        .collect();
    ensure!(
        ents == [
            ("01vpr3", 0.9456, Some("PERSON"), Some("https://en.wikipedia.org/wiki/Vlade_Divac")),
            ("05jvx", 0.8496, Some("ORGANIZATION"), Some("https://en.wikipedia.org/wiki/NBA")),
        ],
        "entities {ents:?}"
    );
    let topics = &response.annotation_summary[1].annotation_identifier;
    let readable: Vec<&str> = topics.iter().filter_map(|t| t.id_readable.as_deref()).collect();
    ensure!(readable == ["nba", "los-angeles-lakers", "basketball"], "topics {readable:?}");
    // Scores are normalized to the top topic; relative sizes follow the listing.
    for (t, listed) in topics.iter().zip([0.7582, 0.66974, 0.5445]) {
        ensure!((t.score - listed / 0.7582).abs() < 1e-6, "topic {} score {}", t.id_str, t.score);
    }
    let tags: Vec<(&str, f64)> = response.annotation_summary[2]
        .annotation_identifier
        .iter()
        .map(|h| (h.id_str.as_str(), h.score))
        .collect();
    ensure!(tags == [("NBA", 54285.7515), ("NBAPlayoffs", 28685.6006)], "hashtags {tags:?}");
    Ok("Vlade Divac response validates; entities and hashtags match the listing".into())
}

// 9
fn metrics_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let docs = vec!["d".to_string()];
    for case in 0..200 {
        let counts: [u64; 4] = std::array::from_fn(|_| rng.random_range(0..40));
        let [tp, fp, fn_, tn] = counts;
        let mut gold = Vec::new();
        let mut pred = Vec::new();
        let mut pos = 0;
        let mut span = |g: Option<&str>, p: Option<&str>| {
            for (side, id) in [(&mut gold, g), (&mut pred, p)] {
                if let Some(id) = id {
                    side.push(SpanLink {
                        doc_id: "d".into(),
                        start: pos,
                        end: pos + 1,
                        entity_id: id.into(),
                    });
                }
            }
            pos += 2;
        };
        for _ in 0..tp {
            span(Some("A"), Some("A"));
        }
        for i in 0..fp {
            match i % 3 {
                0 => span(Some("NIL"), Some("A")),
                1 => span(Some("A"), Some("B")),
                _ => span(None, Some("A")),
            }
        }
        for i in 0..fn_ {
            if i % 2 == 0 {
                span(Some("A"), Some("NIL"))
            } else {
                span(Some("A"), None)
            }
        }
        for i in 0..tn {
            match i % 3 {
                0 => span(Some("NIL"), Some("NIL")),
                1 => span(Some("MISC"), None),
                _ => span(None, Some("NIL")),
            }
        }
        let r = evaluate(&docs, &gold, &pred).map_err(|e| e.to_string())?;
        ensure!((r.tp, r.fp, r.fn_, r.tn) == (tp, fp, fn_, tn), "case {case}: counts {:?}", (r.tp, r.fp, r.fn_, r.tn));
        let (tp, fp, fn_, tn) = (tp as f64, fp as f64, fn_ as f64, tn as f64);
        let p = if tp + fp > 0.0 { tp / (tp + fp) } else { 0.0 };
        let rc = if tp + fn_ > 0.0 { tp / (tp + fn_) } else { 0.0 };
        let f1 = if p + rc > 0.0 { 2.0 * p * rc / (p + rc) } else { 0.0 };
        let acc = if tp + tn + fp + fn_ > 0.0 { (tp + tn) / (tp + tn + fp + fn_) } else { 0.0 };
        for (name, got, want) in [("precision", r.precision, p), ("recall", r.recall, rc), ("f1", r.f1, f1), ("accuracy", r.accuracy, acc)] {
            ensure!((got - want).abs() <= 1e-12, "case {case}: {name} {got} vs {want}");
        }
        if tp > 0.0 {
            let identity = 2.0 * tp / (2.0 * tp + fp + fn_);
            ensure!((r.f1 - identity).abs() <= 1e-12, "case {case}: F1 identity {} vs {identity}", r.f1);
        }
    }
    Ok("200 tuples agree to 1e-12".into())
}

// 10
fn runtime_linearity() -> Outcome {
    let data = repo().join("data");
    let pipeline = load_pipeline(&data.join("manifest.json"), &data.join("model.json"), Some(&data.join("config.toml")))
        .map_err(|e| format!("{e:#}"))?;
    let t = Instant::now();
    let report = run_bench(&pipeline, &BenchOptions::default()).map_err(|e| e.to_string())?;
    within(Duration::from_secs(120), t.elapsed(), "benchmark")?;
    let fit = report.fit.ok_or("no fit")?;
    let entities: Vec<String> = report.buckets.iter().map(|b| format!("{:.0}", b.mean_entities)).collect();
    ensure!(
        report.buckets.iter().all(|b| b.mean_entities > 0.0),
        "text is not entity-dense: {entities:?}"
    );
    ensure!(fit.r2 >= 0.95, "R² = {:.4}", fit.r2);
    Ok(format!(
        "R² = {:.4}; {:.3} ms/kb; EDL share {:.1}%; entities per bucket {}",
        fit.r2,
        fit.slope,
        report.edl_share * 100.0,
        entities.join("/")
    ))
}

/// Bundled gold corpus through the bundled resources and model.
fn gold_corpus() -> Outcome {
    let data = repo().join("data");
    let pipeline = load_pipeline(&data.join("manifest.json"), &data.join("model.json"), Some(&data.join("config.toml")))
        .map_err(|e| format!("{e:#}"))?;
    let gold = read_corpus_file(&data.join("corpus/gold.jsonl")).map_err(|e| e.to_string())?;
    ensure!(gold.bad.is_empty(), "bad gold lines: {:?}", gold.bad);
    let pred = predict(&pipeline, &gold.docs).map_err(|e| e.to_string())?;
    let r = score(&gold.docs, &pred).map_err(|e| e.to_string())?;
    let again = score(&gold.docs, &predict(&pipeline, &gold.docs).map_err(|e| e.to_string())?).unwrap();
    ensure!(r == again, "evaluation is not deterministic");
    let real = gold
        .docs
        .iter()
        .flat_map(|d| &d.annotations)
        .filter(|a| !is_placeholder(&a.entity_id))
        .count();
    ensure!(r.f1 >= 0.85, "F1 {:.3}", r.f1);
    Ok(format!(
        "{} docs, {real} linkable mentions: P {:.3} R {:.3} F1 {:.3} accuracy {:.3}",
        gold.docs.len(),
        r.precision,
        r.recall,
        r.f1,
        r.accuracy
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("1 jaccard oracle", jaccard_oracle),
        ("2 ontology distance", ontology_distance),
        ("3 demonstrative example", demonstrative_example),
        ("4 dictionary-builder oracle", builder_oracle),
        ("5 sentiment formula", sentiment_formula),
        ("6 logistic gradient", logistic_gradient_check),
        ("7 final-disambiguation table", final_rule_table),
        ("8 JSON schema", json_schema),
        ("9 metrics identities", metrics_identities),
        ("10 runtime linearity", runtime_linearity),
        ("gold corpus metrics", gold_corpus),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
