//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and fails
//! if any criterion fails. The lines bypass the test harness's output
//! capture so they appear in every `cargo test` run.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use common::compounds::{Linker, Splitter};
use common::{canonical, fixture_kb, fixture_pipeline, fixtures, fcp_check, naive_fst, nesting, tag_corpus};
use ie_core::avs::AttrValue;
use ie_core::combiner::{combine, Anchor, Entry, EntryKind, ItemStream};
use ie_core::feature::{unify, FeatureStructure};
use ie_core::fst::{compile, EdgeTest, FstDef, MatchParams, OutputDesc, RegexExpr, TokenStream};
use ie_core::item::TextItem;
use ie_core::morphology::{decompose, parse_lexicon, CompoundLimits, LinkRule, MorphConfig, Pos};
use ie_core::pipeline::{emit_html, run_pipeline, Document, RunResult};
use ie_core::scanner::{expand_abbreviations, scan, Scanner, Token, TokenKind};
use ie_core::tagger::{apply_filter_rules, learn_from_tagged, tag_document, tag_tokens, TaggedToken};

/// Criterion 2: grammars, nesting depth, stream length, time budget.
const FST_GRAMMARS: usize = 200;
const FST_DEPTH: usize = 3;
const FST_STREAM_LEN: usize = 6;
const FST_BUDGET: Duration = Duration::from_secs(120);
/// Criterion 3: longest constructed word, random non-words.
const COMPOUND_MAX_LEN: usize = 20;
const NON_WORDS: usize = 1000;
const OVER_LONG: usize = 200;
/// Criterion 4.
const FS_SAMPLES: usize = 1000;
/// Criterion 5.
const FCP_TRIALS: usize = 10_000;
const FCP_MAX_ENTRIES: usize = 12;
/// Criterion 6: corpus size, ambiguity and unknown rates, accuracy floor.
const TAG_TOKENS: usize = 25_000;
const TAG_AMBIGUOUS: f64 = 0.20;
const TAG_UNKNOWN: f64 = 0.05;
const TAG_MAX_RULES: usize = 200;
const TAG_MIN_ACCURACY: f64 = 0.90;
/// Criterion 7: document size, time limit, compound cost ratio.
const BENCH_TOKENS: usize = 10_000;
const BENCH_LIMIT: Duration = Duration::from_secs(5);
const BENCH_MAX_RATIO: f64 = 3.0;

type Outcome = Result<String, String>;
/// Slot fillers as (type, surface, out).
type Fillers = Vec<(String, String, serde_json::Value)>;
type Criterion = (&'static str, &'static str, Box<dyn Fn() -> Outcome>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn report(line: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

fn run_text(text: &str) -> RunResult {
    run_pipeline(&Document::new("fixture", text), fixture_kb(), &fixture_pipeline()).expect("fixture pipeline runs")
}

fn surface(result: &RunResult, item: &TextItem) -> String {
    let (s, e) = result.char_span(item.start, item.end).unwrap_or((0, 0));
    result.text.chars().skip(s).take(e - s).collect()
}

// 1a, 1b

fn scan_payload(text: &str, expected: serde_json::Value) -> Outcome {
    let toks = scan(text);
    let first = toks.first().ok_or("no tokens")?;
    let got = canonical(&first.payload);
    ensure(got == expected, || format!("payload {got} != {expected}"))?;
    Ok(format!("{text:?} -> {got}"))
}

// 1c

fn time_expr() -> Outcome {
    let kb = fixture_kb();
    let text = "spätestens um 14:00 h";
    let tokens = tag_document(&scan(text), &kb.morphology, &kb.tagger_rules);
    let stream = TokenStream::new(&tokens, &kb.resources);
    let items = kb.grammars["time-expr"].fst.scan_all(&stream);
    let item = items.iter().find(|i| i.start == 0).ok_or("no item at 0")?;
    let expected = json!({"time-rel": "spaet", "time-prep": "um", "minute": 0, "hour": 14});
    ensure(item.ty == "time-expr", || format!("type {}", item.ty))?;
    ensure((item.start, item.end) == (0, 4), || format!("span {}..{}", item.start, item.end))?;
    ensure(canonical(&item.out) == expected, || format!("out {}", canonical(&item.out)))?;
    Ok(format!("{}..{} {}", item.start, item.end, canonical(&item.out)))
}

// 1d

fn date_interval() -> Outcome {
    let result = run_text("vom 19. (8.00 h) bis einschl. 21. Oktober (18.00 h)");
    let expected = json!({
        "from": {"day": 19, "hour": 8, "minute": 0},
        "to": {"day": 21, "month": 10, "hour": 18, "minute": 0},
    });
    let pp: Vec<&TextItem> = result.items().iter().map(|c| &c.item).filter(|i| i.ty == "pp").collect();
    let hit = pp
        .iter()
        .find(|i| i.start == 0 && i.end == result.tokens.len())
        .ok_or_else(|| format!("no pp over the whole fixture; pp items: {pp:?}"))?;
    ensure(canonical(&hit.out) == expected, || format!("out {}", canonical(&hit.out)))?;
    Ok(format!("pp 0..{} {}", hit.end, canonical(&hit.out)))
}

// 1e

fn noun_phrase() -> Outcome {
    let result = run_text("„Die neuartige und vielfältige Gesellschaft“");
    let expected = json!({
        "sem": {"head": "gesellschaft", "mods": ["neuartig", "vielfaeltig"], "quantifier": "d-det"},
        "agr": "nom-acc-val",
    });
    let nps: Vec<&TextItem> = result
        .items()
        .iter()
        .map(|c| &c.item)
        .filter(|i| i.ty == "np" && (i.start, i.end) == (1, 6))
        .collect();
    ensure(nps.len() == 1, || format!("{} np items over 1..6: {nps:?}", nps.len()))?;
    ensure(canonical(&nps[0].out) == expected, || format!("out {}", canonical(&nps[0].out)))?;
    Ok(format!("np 1..6 {}", canonical(&nps[0].out)))
}

// 2

fn nullable(e: &RegexExpr) -> bool {
    match e {
        RegexExpr::Edge(b) => b.test == EdgeTest::CurrentPos,
        RegexExpr::Conc(xs) => xs.iter().all(nullable),
        RegexExpr::Alt(xs) => xs.iter().any(nullable),
        RegexExpr::Star(_) => true,
        RegexExpr::BoundedStar(x, min, _) => *min == 0 || nullable(x),
    }
}

fn random_edge(rng: &mut ChaCha8Rng) -> RegexExpr {
    let var = [None, Some("x"), Some("y")][rng.gen_range(0..3)];
    let strs = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
    let test = match rng.gen_range(0..10) {
        0 | 1 => EdgeTest::Token { surfaces: strs(&["a"]) },
        2 => EdgeTest::Token { surfaces: strs(&["a", "b"]) },
        3 => EdgeTest::Token { surfaces: strs(&["c"]) },
        4 | 5 => EdgeTest::Var,
        6 => EdgeTest::MonaCat { pos: Pos::N },
        7 | 8 => EdgeTest::MonaCat { pos: Pos::V },
        _ => EdgeTest::CurrentPos,
    };
    RegexExpr::edge(test, var)
}

fn random_expr(rng: &mut ChaCha8Rng, depth: usize) -> RegexExpr {
    if depth == 0 || rng.gen_bool(0.3) {
        return random_edge(rng);
    }
    match rng.gen_range(0..4) {
        0 => RegexExpr::Conc((0..rng.gen_range(2..=3)).map(|_| random_expr(rng, depth - 1)).collect()),
        1 => RegexExpr::Alt((0..rng.gen_range(2..=3)).map(|_| random_expr(rng, depth - 1)).collect()),
        2 => loop {
            let body = random_expr(rng, depth - 1);
            if !nullable(&body) {
                break RegexExpr::Star(Box::new(body));
            }
        },
        _ => {
            let min = rng.gen_range(0..=1);
            let max = rng.gen_range(1..=2).max(min);
            RegexExpr::BoundedStar(Box::new(random_expr(rng, depth - 1)), min, max)
        }
    }
}

fn alphabet_token(i: usize, sym: char) -> TaggedToken {
    let tags: BTreeSet<Pos> = match sym {
        'a' => [Pos::N].into(),
        'b' => [Pos::V].into(),
        _ => [Pos::N, Pos::V].into(),
    };
    let mut t = TaggedToken::new(Token::new(sym.to_string(), TokenKind::Word, 2 * i, 2 * i + 1), BTreeSet::new());
    t.tags = tags;
    t
}

fn all_streams(max_len: usize) -> Vec<Vec<TaggedToken>> {
    let mut out: Vec<Vec<TaggedToken>> = vec![Vec::new()];
    let mut layer: Vec<Vec<TaggedToken>> = vec![Vec::new()];
    for len in 1..=max_len {
        layer = layer
            .iter()
            .flat_map(|s| {
                ['a', 'b', 'c'].into_iter().map(move |c| {
                    let mut next = s.clone();
                    next.push(alphabet_token(len - 1, c));
                    next
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn fst_oracle() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x05ee_df57);
    let streams = all_streams(FST_STREAM_LEN);
    let res = ie_core::fst::Resources::default();
    let (mut grammars, mut runs, mut matches) = (0, 0usize, 0usize);
    while grammars < FST_GRAMMARS {
        let expr = random_expr(&mut rng, FST_DEPTH);
        let mut def = FstDef::new("g", expr.clone(), OutputDesc::new("g", &[]));
        def.params = MatchParams {
            prefix: rng.gen_bool(0.7),
            suffix: rng.gen_bool(0.5),
            longest: rng.gen_bool(0.5),
        };
        let fst = compile(&def, &BTreeMap::new()).map_err(|e| format!("compile {expr:?}: {e}"))?;
        grammars += 1;
        for toks in &streams {
            let stream = TokenStream::new(toks, &res);
            let got: BTreeSet<_> = fst.run(&stream, 0).into_iter().collect();
            let want = naive_fst::run(&expr, def.params, toks, 0);
            runs += 1;
            matches += want.len();
            if got != want {
                let s: String = toks.iter().map(|t| t.token.surface.as_str()).collect();
                return Err(format!(
                    "grammar {expr:?} {:?} on {s:?}: compiled {got:?} reference {want:?}",
                    def.params
                ));
            }
        }
    }
    let elapsed = started.elapsed();
    ensure(elapsed < FST_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{grammars} grammars x {} streams, {runs} runs, {matches} matches, 0 discrepancies in {:.1}s",
        streams.len(),
        elapsed.as_secs_f64()
    ))
}

// 3

fn oracle_stems(src: &str) -> HashMap<String, BTreeSet<Pos>> {
    let mut stems: HashMap<String, BTreeSet<Pos>> = HashMap::new();
    for line in src.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let cols: Vec<&str> = line.split('\t').collect();
        let pos = Pos::parse(cols[1]).expect("lexicon pos");
        stems.entry(cols[0].to_lowercase()).or_default().insert(pos);
    }
    stems
}

fn oracle_linkers(src: &str) -> Vec<Linker> {
    src.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|line| {
            let (text, left) = line.split_once('\t').expect("linker line");
            Linker {
                text: if text == "0" { String::new() } else { text.to_string() },
                left: (left.trim() != "*").then(|| left.split(',').map(|p| Pos::parse(p.trim()).expect("pos")).collect()),
            }
        })
        .collect()
}

/// Every stem (linker stem)* string of at most `max_len` code points, using
/// linkers the left stem admits.
fn constructible(oracle: &Splitter, max_segments: usize, max_len: usize) -> BTreeSet<String> {
    fn rec(o: &Splitter, word: String, segs: usize, max_segs: usize, max_len: usize, out: &mut BTreeSet<String>) {
        for (stem, pos) in &o.stems {
            let w = format!("{word}{stem}");
            if w.chars().count() > max_len {
                continue;
            }
            out.insert(w.clone());
            if segs + 1 == max_segs {
                continue;
            }
            for l in o.linkers.iter().filter(|l| l.left.as_ref().is_none_or(|ok| !ok.is_disjoint(pos))) {
                rec(o, format!("{w}{}", l.text), segs + 1, max_segs, max_len, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    rec(oracle, String::new(), 0, max_segments, max_len, &mut out);
    out
}

fn compound_oracle() -> Outcome {
    let dir = fixtures().join("compounds");
    let lex_src = std::fs::read_to_string(dir.join("lexicon.tsv")).map_err(|e| e.to_string())?;
    let link_src = std::fs::read_to_string(dir.join("linkers.tsv")).map_err(|e| e.to_string())?;
    let trie = parse_lexicon(&lex_src, "lexicon.tsv").map_err(|e| e.to_string())?;
    let rules = LinkRule::parse(&link_src, "linkers.tsv").map_err(|e| e.to_string())?;
    let limits = CompoundLimits::default();
    let oracle = Splitter {
        stems: oracle_stems(&lex_src),
        linkers: oracle_linkers(&link_src),
        min_segment: limits.min_segment,
        max_segments: limits.max_segments,
    };
    let mut words = constructible(&oracle, limits.max_segments, COMPOUND_MAX_LEN);
    let constructed = words.len();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    // Words one segment past the limit must not decompose.
    let stems: Vec<&String> = oracle.stems.keys().collect();
    let mut over = 0;
    while over < OVER_LONG {
        let w: String = (0..=limits.max_segments).map(|_| stems.choose(&mut rng).unwrap().as_str()).collect();
        if w.chars().count() <= COMPOUND_MAX_LEN && words.insert(w) {
            over += 1;
        }
    }
    let letters: Vec<char> = "aehiklnorstuüd-".chars().collect();
    while words.len() < constructed + OVER_LONG + NON_WORDS {
        let len = rng.gen_range(3..=COMPOUND_MAX_LEN);
        words.insert((0..len).map(|_| *letters.choose(&mut rng).unwrap()).collect());
    }
    let mut compounds = 0;
    for w in &words {
        let got: BTreeSet<(Vec<String>, Vec<String>)> = decompose(w, &trie, &rules, limits)
            .into_iter()
            .map(|d| (d.segments, d.linkers))
            .collect();
        let want = oracle.split(w);
        if got != want {
            return Err(format!("{w:?}: decompose {got:?} reference {want:?}"));
        }
        compounds += usize::from(!want.is_empty());
    }

    // The shipped knowledge-base lexicon: every two-stem compound.
    let kb_dir = fixtures().join("kb");
    let kb_lex = std::fs::read_to_string(kb_dir.join("lexicon.tsv")).map_err(|e| e.to_string())?;
    let kb_links = std::fs::read_to_string(kb_dir.join("linkers.tsv")).map_err(|e| e.to_string())?;
    let kb_oracle = Splitter {
        stems: oracle_stems(&kb_lex),
        linkers: oracle_linkers(&kb_links),
        min_segment: limits.min_segment,
        max_segments: limits.max_segments,
    };
    let kb_words = constructible(&kb_oracle, 2, COMPOUND_MAX_LEN);
    let morph = &fixture_kb().morphology;
    for w in &kb_words {
        let got: BTreeSet<(Vec<String>, Vec<String>)> =
            morph.decompose(w).into_iter().map(|d| (d.segments, d.linkers)).collect();
        let want = kb_oracle.split(w);
        if got != want {
            return Err(format!("kb lexicon {w:?}: decompose {got:?} reference {want:?}"));
        }
    }
    Ok(format!(
        "{constructed} constructed + {OVER_LONG} over-long + {NON_WORDS} random words ({compounds} compounds), {} two-stem kb words, 0 discrepancies",
        kb_words.len()
    ))
}

// 4

fn random_fs(rng: &mut ChaCha8Rng) -> FeatureStructure {
    const ATTRS: [(&str, &[&str]); 4] = [
        ("case", &["nom", "gen", "dat", "acc"]),
        ("num", &["sg", "pl"]),
        ("gender", &["m", "f", "n"]),
        ("person", &["1", "2", "3"]),
    ];
    let mut fs = FeatureStructure::new();
    for (attr, values) in ATTRS {
        if rng.gen_bool(0.6) {
            let mut picked: Vec<&str> = values.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            if picked.is_empty() {
                picked.push(values.choose(rng).unwrap());
            }
            fs = fs.with(attr, picked);
        }
    }
    fs
}

fn defined_reference(a: &FeatureStructure, b: &FeatureStructure) -> bool {
    a.iter().all(|(k, va)| b.get(k).is_none_or(|vb| !va.is_disjoint(vb)))
}

fn unification() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pool: Vec<FeatureStructure> = (0..FS_SAMPLES).map(|_| random_fs(&mut rng)).collect();
    let mut defined = 0;
    for i in 0..FS_SAMPLES {
        let a = &pool[i];
        let b = &pool[rng.gen_range(0..FS_SAMPLES)];
        let c = &pool[rng.gen_range(0..FS_SAMPLES)];
        ensure(unify(a, a).as_ref() == Some(a), || format!("idempotence fails for {a}"))?;
        let ab = unify(a, b);
        ensure(ab == unify(b, a), || format!("commutativity fails for {a} / {b}"))?;
        ensure(ab.is_some() == defined_reference(a, b), || format!("definedness of {a} / {b}"))?;
        if let Some(u) = &ab {
            defined += 1;
            ensure(a.subsumes(u) && b.subsumes(u), || format!("{u} not subsumed by {a} and {b}"))?;
        }
        let left = ab.as_ref().and_then(|ab| unify(ab, c));
        let right = unify(b, c).and_then(|bc| unify(a, &bc));
        if left.is_some() && right.is_some() {
            ensure(left == right, || format!("associativity fails for {a} / {b} / {c}"))?;
        }
    }
    Ok(format!("{FS_SAMPLES} samples, {defined} defined unifications, 0 violations"))
}

// 5

fn random_stream(rng: &mut ChaCha8Rng) -> ItemStream {
    const AGR: [Option<&str>; 6] = [None, Some("nom-val"), Some("acc-val"), Some("nom-acc-val"), Some("gen-dat-val"), Some("dat-val")];
    const TYPES: [&str; 7] = ["np", "name-np", "time-expr", "date-time", "pp", "location", "agent"];
    const MARKS: [&str; 5] = [",", ".", ";", "!", ":"];
    let n = rng.gen_range(1..=FCP_MAX_ENTRIES);
    let mut pos = 0;
    let mut entries = Vec::with_capacity(n);
    for _ in 0..n {
        let width = rng.gen_range(1..=2);
        let kind = match rng.gen_range(0..10) {
            0..=4 => {
                let ty = *TYPES.choose(rng).unwrap();
                let mut out = AttrValue::new();
                if ty == "np" {
                    if let Some(agr) = *AGR.choose(rng).unwrap() {
                        out.set("agr", agr);
                    }
                }
                EntryKind::Fragment(TextItem::new(ty, pos, pos + width, out))
            }
            5 | 6 => EntryKind::Punct(MARKS.choose(rng).unwrap().to_string()),
            7 => EntryKind::Text("paragraph-break".into()),
            _ => {
                let fcps = match rng.gen_range(0..3) {
                    0 => vec!["intrans".to_string()],
                    1 => vec!["trans".to_string()],
                    _ => vec!["intrans".to_string(), "trans".to_string()],
                };
                EntryKind::Anchor(Anchor {
                    lexeme: "verb".into(),
                    fcps,
                    token: pos,
                    aux: Vec::new(),
                    passive: rng.gen_bool(0.3),
                })
            }
        };
        let end = match kind {
            EntryKind::Fragment(_) => pos + width,
            _ => pos + 1,
        };
        entries.push(Entry::new(kind, pos, end));
        pos = end;
    }
    ItemStream::from_entries(entries)
}

fn fcp_safety() -> Outcome {
    let kb = fixture_kb();
    let fcps: BTreeMap<_, _> = ["intrans", "trans"]
        .iter()
        .map(|n| (n.to_string(), kb.fcps.get(*n).cloned().unwrap_or_else(|| panic!("fixture fcp {n}"))))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut templates, mut complete, mut filled) = (0, 0, 0);
    for trial in 0..FCP_TRIALS {
        let stream = random_stream(&mut rng);
        for t in combine(&stream, &fcps, &kb.resources.aliases) {
            let passive = stream.anchors().any(|(_, a)| a.token == t.anchor.position && a.passive);
            let fcp = if passive { fcps[&t.fcp].passive() } else { fcps[&t.fcp].clone() };
            fcp_check::bounds(&t, &fcp).map_err(|e| format!("trial {trial}: {e}\n{stream:?}\n{t:?}"))?;
            fcp_check::locality(&t, &fcp, &stream).map_err(|e| format!("trial {trial}: {e}\n{stream:?}\n{t:?}"))?;
            templates += 1;
            complete += usize::from(t.complete);
            filled += t.items().count();
        }
    }
    Ok(format!(
        "{FCP_TRIALS} streams, {templates} templates ({complete} complete, {filled} slot fillers), 0 violations"
    ))
}

// 6

fn tagger_accuracy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let vocab = tag_corpus::Vocabulary::new();
    let corpus = tag_corpus::generate(&mut rng, &vocab, TAG_TOKENS, TAG_AMBIGUOUS, TAG_UNKNOWN);
    let total: usize = corpus.iter().map(|s| s.tokens.len()).sum();
    let ambiguous = corpus.iter().flat_map(|s| &s.tokens).filter(|t| t.tags.len() > 1 && !t.token.surface.starts_with("unk")).count();
    let unknown = corpus.iter().flat_map(|s| &s.tokens).filter(|t| t.token.surface.starts_with("unk")).count();
    let split = corpus.len() * 4 / 5;
    let (train, held) = corpus.split_at(split);

    // Unigram fallback for tokens the rules leave ambiguous: the most
    // frequent tag among unambiguous training tokens.
    let mut freq: HashMap<Pos, usize> = HashMap::new();
    for t in train.iter().flat_map(|s| &s.tokens) {
        if let Some(p) = t.chosen() {
            *freq.entry(p).or_default() += 1;
        }
    }
    let pick = |t: &TaggedToken| t.tags.iter().copied().max_by_key(|p| (freq.get(p).copied().unwrap_or(0), *p));

    let rules = learn_from_tagged(train.iter().map(|s| s.tokens.clone()).collect(), TAG_MAX_RULES);
    let accuracy = |rules: &[ie_core::tagger::FilterRule]| {
        let (mut right, mut n) = (0usize, 0usize);
        for s in held {
            let tagged = apply_filter_rules(s.tokens.clone(), rules);
            for (t, gold) in tagged.iter().zip(&s.gold) {
                n += 1;
                right += usize::from(pick(t) == Some(*gold));
            }
        }
        right as f64 / n as f64
    };
    let baseline = accuracy(&[]);
    let acc = accuracy(&rules);
    let report = format!(
        "{total} tokens ({:.1}% ambiguous, {:.1}% unknown), {} rules, held-out accuracy {:.2}% (no rules {:.2}%)",
        100.0 * ambiguous as f64 / total as f64,
        100.0 * unknown as f64 / total as f64,
        rules.len(),
        100.0 * acc,
        100.0 * baseline
    );
    ensure(total >= 20_000 && acc >= TAG_MIN_ACCURACY, || report.clone())?;
    Ok(report)
}

// 7

fn synthetic_document(rng: &mut ChaCha8Rng) -> String {
    let kb = fixture_kb();
    let mut nouns = Vec::new();
    let mut others = Vec::new();
    for e in kb.morphology.trie.entries() {
        if e.stem.chars().count() < 3 || !e.stem.chars().all(char::is_alphabetic) {
            continue;
        }
        if e.pos == Pos::N {
            nouns.push(e.stem.clone());
        } else {
            others.push(e.stem.clone());
        }
    }
    let cap = |s: &str| {
        let mut c = s.chars();
        c.next().map(|f| f.to_uppercase().chain(c).collect::<String>()).unwrap_or_default()
    };
    let mut words = Vec::new();
    let mut tokens = 0;
    // Some generated words merge or split when scanned; overshoot a little.
    while tokens < BENCH_TOKENS * 11 / 10 {
        let w = match rng.gen_range(0..10) {
            0..=3 => cap(nouns.choose(rng).unwrap()),
            4..=6 => others.choose(rng).unwrap().clone(),
            7 | 8 => {
                let link = ["", "s", "en", "-"].choose(rng).unwrap();
                format!("{}{link}{}", cap(nouns.choose(rng).unwrap()), nouns.choose(rng).unwrap())
            }
            _ => (0..rng.gen_range(4..12)).map(|_| *['a', 'e', 'r', 's', 't', 'n', 'u'].choose(rng).unwrap()).collect(),
        };
        words.push(w);
        tokens += 1;
        if rng.gen_bool(0.08) {
            words.push(".".into());
            tokens += 1;
        }
    }
    words.join(" ").replace(" .", ".")
}

fn throughput() -> Outcome {
    let kb = fixture_kb();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let text = synthetic_document(&mut rng);
    let scanner = Scanner::with_abbreviations(&kb.abbreviations);
    let mut timings = Vec::new();
    for compounds in [true, false] {
        let morph = kb.with_morph_config(MorphConfig {
            compounds,
            ..MorphConfig::default()
        });
        let mut best = Duration::MAX;
        let mut count = 0;
        for _ in 0..3 {
            let start = Instant::now();
            let toks = expand_abbreviations(scanner.scan(&text), &kb.abbreviations);
            count = tag_tokens(&toks, &morph).len();
            best = best.min(start.elapsed());
        }
        timings.push((best, count));
    }
    let (with, n) = timings[0];
    let (without, _) = timings[1];
    let ratio = with.as_secs_f64() / without.as_secs_f64().max(1e-9);
    let report = format!(
        "{n} tokens: compounds {:.0} ms ({:.0} tok/s), simplex {:.0} ms, ratio {ratio:.2}",
        with.as_secs_f64() * 1e3,
        n as f64 / with.as_secs_f64(),
        without.as_secs_f64() * 1e3
    );
    ensure(n >= BENCH_TOKENS && with < BENCH_LIMIT && ratio < BENCH_MAX_RATIO, || report.clone())?;
    Ok(report)
}

// 8

fn end_to_end() -> Outcome {
    let text = std::fs::read_to_string(fixtures().join("docs/announcement.txt")).map_err(|e| e.to_string())?;
    let result = run_pipeline(&Document::new("announcement", text.as_str()), fixture_kb(), &fixture_pipeline())
        .map_err(|e| e.to_string())?;
    let talk = result
        .templates
        .iter()
        .find(|t| t.fcp == "talk")
        .ok_or("no talk template")?;

    let slot = |name: &str| -> Fillers {
        let mut v: Vec<_> = talk
            .slots
            .get(name)
            .into_iter()
            .flatten()
            .map(|i| (i.ty.clone(), surface(&result, i), canonical(&i.out)))
            .collect();
        v.sort_by(|a, b| a.1.cmp(&b.1));
        v
    };
    let expected: [(&str, Fillers); 3] = [
        (
            "speaker",
            vec![(
                "name-np".into(),
                "Prof. Dr. Anna Berger".into(),
                json!({"title": "Prof. Dr.", "name": "Anna Berger"}),
            )],
        ),
        (
            "time",
            vec![
                ("time-expr".into(), "14:00 h".into(), json!({"hour": 14, "minute": 0})),
                ("date-time".into(), "21. Oktober 1996".into(), json!({"day": 21, "month": 10, "year": 1996})),
            ],
        ),
        (
            "location",
            vec![("location".into(), "im Hörsaal 3".into(), json!({"prep": "im", "place": "Hörsaal 3"}))],
        ),
    ];
    ensure(talk.complete, || "talk template incomplete".into())?;
    ensure(talk.anchor.lexeme == "sprechen", || format!("anchor {}", talk.anchor.lexeme))?;
    for (name, want) in &expected {
        let got = slot(name);
        ensure(&got == want, || format!("slot {name}: {got:?}"))?;
    }

    let html = emit_html(&result);
    let (plain, brackets) = nesting::parse(&html)?;
    ensure(plain == result.text, || "markup does not round-trip the text".into())?;
    ensure(nesting::well_nested(&brackets), || "crossing brackets".into())?;
    let covered = nesting::coverage(&brackets);
    let mut marked = 0;
    for c in result.items() {
        let Some(span) = result.char_span(c.item.start, c.item.end) else { continue };
        let got = covered.get(&c.id).cloned().unwrap_or_default();
        ensure(got == vec![span], || format!("item {} ({}) covers {got:?}, span {span:?}", c.id, c.item.ty))?;
        let ty_ok = brackets.iter().filter(|b| b.item == c.id).all(|b| b.ty == c.item.ty);
        ensure(ty_ok, || format!("item {} bracket type", c.id))?;
        marked += 1;
    }
    Ok(format!(
        "talk template matches ({} templates); {marked} items in {} well-nested brackets",
        result.templates.len(),
        brackets.len()
    ))
}

#[test]
fn acceptance() {
    let criteria: Vec<Criterion> = vec![
        ("1a", "scanner date payload", Box::new(|| scan_payload("1.3.96", json!({"day": 1, "mon": 3, "year": 96})))),
        ("1b", "scanner time payload", Box::new(|| scan_payload("13:15 h", json!({"hour": 13, "min": 15})))),
        ("1c", "time-expr grammar", Box::new(time_expr)),
        ("1d", "date interval", Box::new(date_interval)),
        ("1e", "noun phrase", Box::new(noun_phrase)),
        ("2", "fst oracle equivalence", Box::new(fst_oracle)),
        ("3", "compound decomposition", Box::new(compound_oracle)),
        ("4", "unification algebra", Box::new(unification)),
        ("5", "fcp cardinality and locality", Box::new(fcp_safety)),
        ("6", "tagger filter rules", Box::new(tagger_accuracy)),
        ("7", "throughput", Box::new(throughput)),
        ("8", "end-to-end announcement", Box::new(end_to_end)),
    ];
    // `ACCEPTANCE_ONLY=2,3` runs a subset while investigating.
    let only: Option<Vec<String>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|v| v.split(',').map(|s| s.trim().to_string()).collect());
    let mut failed = Vec::new();
    for (id, name, check) in &criteria {
        if only.as_ref().is_some_and(|o| !o.iter().any(|x| x == id)) {
            continue;
        }
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => report(&format!("PASS {id} {name}: {detail} [{:.1}s]", started.elapsed().as_secs_f64())),
            Err(detail) => {
                report(&format!("FAIL {id} {name}: {detail}"));
                failed.push(*id);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
