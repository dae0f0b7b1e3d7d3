//! Acceptance suite: one test per criterion, each printing a pass line with
//! its measured numbers. Run with `cargo test --test acceptance -- --nocapture`
//! to see every line.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::PathBuf;
use std::time::Instant;

use timewarp::assets::{bundled_backends, bundled_manifest, bundled_plans, bundled_tasks};
use timewarp::bc::{build_dataset, export, render_target, ExportFormat, TokenMask};
use timewarp::dom::{parse_axtree, to_html};
use timewarp::env::{Action, EnvSession};
use timewarp::harness::{parse_action, parse_response, ResponseError};
use timewarp::judge::{judge, JudgeBackend};
use timewarp::render::{features, HtmlFlavor, SearchPlacement};
use timewarp::sites::{
    bm25_score_one, confirmation_code, scored_text, tokenize, OrderSelection,
};
use timewarp::taskset::{
    instantiate, AnswerFlags, MatchMode, Split, TaskEnv, TaskInstance, TaskSpec,
};
use timewarp::traj::{teacher_rollouts, PlanRecord, PlanStatus, RolloutConfig, TeacherBackend, TrajectoryStore};
use timewarp::types::{Site, Version};

fn pass(criterion: usize, name: &str, detail: &str) {
    println!("ACCEPTANCE {criterion:>2} ({name}): PASS — {detail}");
}

fn task_for(site: Site) -> TaskSpec {
    TaskSpec {
        goal_id: format!("probe-{site}"),
        env: match site {
            Site::Wiki => TaskEnv::Wiki,
            Site::News => TaskEnv::News,
            Site::Shop => TaskEnv::Shop,
        },
        category: "probe".into(),
        goal: "probe".into(),
        references: vec!["x".into()],
        match_mode: MatchMode::Any,
        start_site: site,
        split: Split::Train,
        flags: AnswerFlags::default(),
        sites: vec![],
    }
}

// criterion 1: deterministic replay of recorded action scripts
#[test]
fn acceptance_01_deterministic_replay() {
    let started = Instant::now();
    let replay_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../assets/replay");
    let mut scripts: Vec<PathBuf> = std::fs::read_dir(&replay_dir)
        .expect("assets/replay exists")
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().and_then(|e| e.to_str()) == Some("actions"))
        .collect();
    scripts.sort();
    assert!(scripts.len() >= 20, "need at least 20 scripts, found {}", scripts.len());

    let backends = bundled_backends();
    let tasks = bundled_tasks();
    let mut sites_covered = HashSet::new();
    let mut versions_covered = HashSet::new();

    for script in &scripts {
        let stem = script.file_stem().unwrap().to_str().unwrap();
        let (goal_id, version_name) = stem.rsplit_once('@').expect("name is goal@version");
        let version = Version::parse(version_name).unwrap();
        let task = tasks.iter().find(|t| t.goal_id == goal_id).expect("bundled goal");
        sites_covered.insert(task.start_site);
        versions_covered.insert(version);
        for site in &task.sites {
            sites_covered.insert(*site);
        }

        let actions: Vec<Action> = std::fs::read_to_string(script)
            .unwrap()
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| parse_action(l).expect("script line parses"))
            .collect();

        let mut runs: Vec<String> = Vec::new();
        for _ in 0..3 {
            let (mut session, obs) = EnvSession::reset(task, version, &backends, 50);
            let mut transcript = serde_json::to_string(&obs).unwrap();
            for action in &actions {
                let outcome = session.step(action, &backends).unwrap();
                transcript.push('\n');
                transcript.push_str(&serde_json::to_string(&outcome.observation).unwrap());
            }
            runs.push(transcript);
        }
        assert_eq!(runs[0], runs[1], "{stem}: run 2 diverged");
        assert_eq!(runs[0], runs[2], "{stem}: run 3 diverged");
    }
    assert_eq!(sites_covered.len(), 3, "scripts must span all 3 sites");
    assert_eq!(versions_covered.len(), 6, "scripts must span all 6 versions");
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 30, "replay took {elapsed:?}");
    pass(
        1,
        "deterministic replay",
        &format!("{} scripts x 3 runs byte-identical in {elapsed:?}", scripts.len()),
    );
}

// criterion 2: goals x versions arithmetic at full and bundled scale
#[test]
fn acceptance_02_dataset_arithmetic() {
    // a 231-goal file instantiates to exactly 1386 tasks
    let full: Vec<TaskSpec> = (0..231)
        .map(|i| {
            let mut t = task_for(Site::Wiki);
            t.goal_id = format!("goal-{i:03}");
            t
        })
        .collect();
    let instances = instantiate(&full, &Version::ALL);
    assert_eq!(full.len(), 231);
    assert_eq!(instances.len(), 1386);

    // the bundled mini-set matches its manifest exactly
    let tasks = bundled_tasks();
    let manifest = bundled_manifest();
    assert_eq!(tasks.len(), manifest.goals);
    assert_eq!(instantiate(&tasks, &Version::ALL).len(), manifest.instances);
    let computed = timewarp::taskset::manifest_of(&tasks, &Version::ALL);
    assert_eq!(computed, manifest);
    pass(
        2,
        "dataset arithmetic",
        &format!(
            "231 goals -> 1386 instances; bundled {} goals -> {} instances match the manifest",
            manifest.goals, manifest.instances
        ),
    );
}

// criterion 3: the rule-based matcher reproduces the verdict-suite rewards
#[test]
fn acceptance_03_judge_conformance() {
    let started = Instant::now();
    let rule = JudgeBackend::RuleBased;
    let plain = AnswerFlags::default();
    let unordered = AnswerFlags { unordered: true, ..plain };
    let estimate = AnswerFlags { estimate: true, ..plain };

    struct Row {
        goal: &'static str,
        references: Vec<&'static str>,
        flags: AnswerFlags,
        candidate: &'static str,
        reward: u8,
    }
    let jeans = "Order a pair of jeans that are made of at least 60% cotton. If there are \
multiple options, pick any. The size must be M. Once you complete the order, share the \
completion code.";
    let rows = vec![
        // exact string matching: the goal admits any valid option, so the
        // reference list carries both acceptable codes (OR logic)
        Row { goal: jeans, references: vec!["59EC38CAE8", "C97A8FE47F"], flags: plain, candidate: "C97A8FE47F", reward: 1 },
        Row { goal: jeans, references: vec!["59EC38CAE8", "C97A8FE47F"], flags: plain, candidate: "Confirmation code: C97A8FE47F", reward: 1 },
        Row { goal: jeans, references: vec!["59EC38CAE8", "C97A8FE47F"], flags: plain, candidate: "C97B8FE47F", reward: 0 },
        // number matching
        Row { goal: "How many sound bars are available under 150 USD?", references: vec!["Two"], flags: plain, candidate: "2", reward: 1 },
        Row { goal: "How many sound bars are available under 150 USD?", references: vec!["Two"], flags: plain, candidate: "3", reward: 0 },
        // estimate matching, per the task's explicit tolerance flag
        Row { goal: "Population difference between the two cities?", references: vec!["Around 2.5 million"], flags: estimate, candidate: "Around 2.55 million", reward: 1 },
        Row { goal: "Population difference between the two cities?", references: vec!["Around 2.5 million"], flags: estimate, candidate: "2,533,124", reward: 1 },
        Row { goal: "Population difference between the two cities?", references: vec!["Around 2.5 million"], flags: estimate, candidate: "2 million", reward: 0 },
        // logic matching
        Row { goal: "Does the article on Sociology discuss its relationship with Mathematics?", references: vec!["No, it does not."], flags: plain, candidate: "No", reward: 1 },
        Row { goal: "Does the article on Sociology discuss its relationship with Mathematics?", references: vec!["No, it does not."], flags: plain, candidate: "Yes", reward: 0 },
        // intent matching
        Row { goal: "Does the product contain polyester? If so, name the clothing brands in the Polyester article.", references: vec!["No clothing brands are mentioned in the Polyester article."], flags: plain, candidate: "The Polyester article doesn't mention any clothing brand.", reward: 1 },
        Row { goal: "Does the product contain polyester? If so, name the clothing brands in the Polyester article.", references: vec!["No clothing brands are mentioned in the Polyester article."], flags: plain, candidate: "T-shirt is polyester-free!!!", reward: 0 },
        // unordered list matching
        Row { goal: "Which three biogeochemical cycles were mentioned in the article on Biology?", references: vec!["Nitrogen, Carbon, and Water"], flags: unordered, candidate: "Water, Nitrogen, Carbon", reward: 1 },
        Row { goal: "Which three biogeochemical cycles were mentioned in the article on Biology?", references: vec!["Nitrogen, Carbon, and Water"], flags: unordered, candidate: "Water, Hydrogen, Carbon", reward: 0 },
        // implicitly ordered list: graded as ordered, matching the strict judge
        Row { goal: "Order these products and share the confirmation codes.", references: vec!["B644DDC66C, 1069AE6414, 1A2ED223B7"], flags: plain, candidate: "B644DDC66C, 1069AE6414, 1A2ED223B7", reward: 1 },
        Row { goal: "Order these products and share the confirmation codes.", references: vec!["B644DDC66C, 1069AE6414, 1A2ED223B7"], flags: plain, candidate: "1069AE6414, 1A2ED223B7, B644DDC66C", reward: 0 },
        // ordered matching
        Row { goal: "List the titles of all the valid pages in the order that you visited.", references: vec!["Technology, Skill, Experience, Learning, Knowledge, Fact"], flags: plain, candidate: "Technology, Skill, Experience, Learning, Knowledge, Fact.", reward: 1 },
        Row { goal: "List the titles of all the valid pages in the order that you visited.", references: vec!["Technology, Skill, Experience, Learning, Knowledge, Fact"], flags: plain, candidate: "Skill, Experience, Learning, Knowledge, Fact, Technology", reward: 0 },
    ];

    let total = rows.len();
    for (i, row) in rows.into_iter().enumerate() {
        let references: Vec<String> = row.references.iter().map(|s| s.to_string()).collect();
        let verdict = judge(row.goal, &references, MatchMode::Any, row.candidate, row.flags, &rule).unwrap();
        assert_eq!(
            verdict.reward, row.reward,
            "row {i}: candidate {:?} got {:?}",
            row.candidate, verdict.label
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 1, "judge suite took {elapsed:?}");
    pass(3, "judge conformance", &format!("{total} verdict rows reproduced in {elapsed:?}"));
}

// criterion 4: index rankings equal a brute-force scorer on a 50-query suite
#[test]
fn acceptance_04_search_oracle_equivalence() {
    let started = Instant::now();
    let backends = bundled_backends();
    assert!(backends.news.len() <= 200 && backends.catalog.len() <= 200);

    let news_queries = [
        "morocco", "football", "final", "richard stallman", "stallman software", "olympics",
        "rio de janeiro", "space", "genome", "record", "world cup final", "eclipse", "power cut",
        "bridge", "chess champion", "quantum", "metro", "malaria vaccine", "wind farm",
        "manuscripts", "dinosaur", "coral reef", "vintage computer", "trains", "street food",
    ];
    let shop_queries = [
        "sound bar", "mini sound", "vinyl player", "music player", "wii u microphone",
        "toothpaste", "baking soda", "nuts", "peanuts", "almonds", "cashew", "french press",
        "coffee maker", "pocket radio", "desk lamp", "adjustable lamp", "ceramic mug",
        "water bottle", "tote bag", "wool scarf", "leather wallet", "yoga mat",
        "camping lantern", "wall clock", "zzz no match",
    ];
    assert_eq!(news_queries.len() + shop_queries.len(), 50);

    // brute-force oracle over the news corpus
    let news_docs: Vec<(&str, Vec<String>)> = backends
        .news
        .articles
        .values()
        .map(|a| (a.id.as_str(), tokenize(&format!("{} {}", a.title, a.body))))
        .collect();
    let news_stats = corpus_stats(&news_docs);
    for query in news_queries {
        let expected = brute_force_rank(&news_docs, &news_stats, query, |id_a, id_b| {
            let a = backends.news.get(id_a).unwrap();
            let b = backends.news.get(id_b).unwrap();
            b.published.cmp(&a.published).then_with(|| a.id.cmp(&b.id))
        });
        let got: Vec<String> = backends
            .news_search
            .search(&backends.news, query)
            .iter()
            .map(|a| a.id.clone())
            .collect();
        assert_eq!(got, expected, "news ranking for {query:?}");
    }

    // brute-force oracle over the catalog
    let shop_docs: Vec<(&str, Vec<String>)> = backends
        .catalog
        .products
        .values()
        .map(|p| (p.product_id.as_str(), tokenize(&scored_text(p))))
        .collect();
    let shop_stats = corpus_stats(&shop_docs);
    for query in shop_queries {
        let expected = brute_force_rank(&shop_docs, &shop_stats, query, |a, b| a.cmp(b));
        let got: Vec<String> = backends
            .shop_search
            .search(&backends.catalog, query)
            .iter()
            .map(|p| p.product_id.clone())
            .collect();
        assert_eq!(got, expected, "shop ranking for {query:?}");
    }

    // per-corpus ground truth from the example suite
    let hits = backends.shop_search.search(&backends.catalog, "sound bar");
    let under_150 = hits.iter().filter(|p| p.title.contains("Sound Bar") && p.price.0 < 15000).count();
    assert_eq!(under_150, 2);

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 10, "search suite took {elapsed:?}");
    pass(4, "search oracle equivalence", &format!("50 queries, rankings identical in {elapsed:?}"));
}

struct CorpusStats {
    doc_freq: HashMap<String, usize>,
    avg_len: f64,
    n_docs: usize,
}

fn corpus_stats(docs: &[(&str, Vec<String>)]) -> CorpusStats {
    let mut doc_freq: HashMap<String, usize> = HashMap::new();
    for (_, tokens) in docs {
        let mut seen = HashSet::new();
        for t in tokens {
            if seen.insert(t.clone()) {
                *doc_freq.entry(t.clone()).or_insert(0) += 1;
            }
        }
    }
    let avg_len = docs.iter().map(|(_, t)| t.len()).sum::<usize>() as f64 / docs.len() as f64;
    CorpusStats { doc_freq, avg_len, n_docs: docs.len() }
}

fn brute_force_rank(
    docs: &[(&str, Vec<String>)],
    stats: &CorpusStats,
    query: &str,
    tie_break: impl Fn(&str, &str) -> std::cmp::Ordering,
) -> Vec<String> {
    let mut scored: Vec<(f64, &str)> = docs
        .iter()
        .map(|(id, tokens)| {
            (bm25_score_one(query, tokens, &stats.doc_freq, stats.n_docs, stats.avg_len), *id)
        })
        .filter(|(score, _)| *score > 0.0)
        .collect();
    scored.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| tie_break(a.1, b.1))
    });
    scored.into_iter().map(|(_, id)| id.to_string()).collect()
}

// criterion 5: confirmation-code format, determinism, and injectivity
#[test]
fn acceptance_05_confirmation_codes() {
    let started = Instant::now();
    let backends = bundled_backends();
    let mut seen: HashMap<String, String> = HashMap::new();
    let mut count = 0usize;
    for product in backends.catalog.products.values() {
        let option_names: Vec<&String> = product.options.keys().collect();
        let mut stack: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
        for name in &option_names {
            let values = &product.options[*name];
            let mut next = Vec::with_capacity(stack.len() * values.len());
            for chosen in &stack {
                for value in values {
                    let mut c = chosen.clone();
                    c.insert((*name).clone(), value.clone());
                    next.push(c);
                }
            }
            stack = next;
        }
        for chosen in stack {
            let selection = OrderSelection { product_id: product.product_id.clone(), chosen };
            let code = confirmation_code(&selection);
            assert_eq!(code.len(), 10);
            assert!(code.chars().all(|c| c.is_ascii_hexdigit() && !c.is_ascii_lowercase()), "{code}");
            assert_eq!(code, confirmation_code(&selection), "determinism");
            let key = format!("{}|{:?}", selection.product_id, selection.chosen);
            if let Some(previous) = seen.insert(code.clone(), key.clone()) {
                panic!("collision: {code} for {previous} and {key}");
            }
            count += 1;
        }
    }
    assert!(count >= 10_000, "cross-product too small: {count}");
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 10, "codes took {elapsed:?}");
    pass(5, "confirmation codes", &format!("{count} selections, zero collisions in {elapsed:?}"));
}

// criterion 6: structural checks for all 18 (site, version) pairs
#[test]
fn acceptance_06_version_feature_conformance() {
    let backends = bundled_backends();

    // the published machine-readable matrix equals the registry
    let table: serde_json::Value = serde_json::from_str(timewarp::assets::VERSION_FEATURES).unwrap();
    for site in Site::ALL {
        for (i, version) in Version::ALL.iter().enumerate() {
            let row = &table[site.name()][i];
            let f = features(site, *version);
            assert_eq!(row["version"].as_str().unwrap(), version.name());
            assert_eq!(row["has_dropdown_suggestions"].as_bool().unwrap(), f.has_dropdown_suggestions, "{site} {version}");
            assert_eq!(row["has_toc"].as_bool().unwrap(), f.has_toc);
            assert_eq!(row["icon_gated_search"].as_bool().unwrap(), f.icon_gated_search);
            assert_eq!(row["popup_ads"].as_bool().unwrap(), f.popup_ads);
            let placement = match f.search_placement { SearchPlacement::Top => "top", SearchPlacement::Bottom => "bottom" };
            assert_eq!(row["search_placement"].as_str().unwrap(), placement);
            let flavor = match f.html_flavor { HtmlFlavor::Legacy => "legacy", HtmlFlavor::Transitional => "transitional", HtmlFlavor::Modern => "modern" };
            assert_eq!(row["html_flavor"].as_str().unwrap(), flavor);
        }
    }

    // wiki v1: bottom search (textbox after the content links) and no ToC
    {
        let (mut session, obs) = EnvSession::reset(&task_for(Site::Wiki), Version::V1, &backends, 30);
        let lines = parse_axtree(&obs.axtree_text);
        let textbox_pos = lines.iter().position(|l| l.role == "textbox").unwrap();
        let last_content_link = lines.iter().rposition(|l| l.role == "link").unwrap();
        assert!(textbox_pos > last_content_link, "wiki v1 search box must close the page");
        let out = session.step(&Action::goto("timewarp://wiki/article/Biology"), &backends).unwrap();
        assert!(!out.observation.html_text.contains("class=\"toc\""), "wiki v1 has no ToC");
    }

    // wiki v4..v6: filling the search box populates dropdown suggestions
    for version in [Version::V4, Version::V5, Version::V6] {
        let (mut session, obs) = EnvSession::reset(&task_for(Site::Wiki), version, &backends, 30);
        let combo = parse_axtree(&obs.axtree_text)
            .into_iter()
            .find(|l| l.role == "combobox")
            .unwrap_or_else(|| panic!("wiki {version} search box is a combobox"));
        let out = session
            .step(&Action::fill(combo.bid.unwrap(), "Bio"), &backends)
            .unwrap();
        let options: Vec<String> = parse_axtree(&out.observation.axtree_text)
            .into_iter()
            .filter(|l| l.role == "option")
            .map(|l| l.name)
            .collect();
        assert!(options.contains(&"Biology".to_string()), "wiki {version} suggestions: {options:?}");
    }
    // and v1..v3 stay exact-only (plain textbox, no options on fill)
    for version in [Version::V1, Version::V2, Version::V3] {
        let (mut session, obs) = EnvSession::reset(&task_for(Site::Wiki), version, &backends, 30);
        let boxes: Vec<_> = parse_axtree(&obs.axtree_text)
            .into_iter()
            .filter(|l| l.role == "textbox")
            .collect();
        assert!(!boxes.is_empty(), "wiki {version} has a plain textbox");
        session.step(&Action::scroll(0.0, 4000.0), &backends).unwrap();
        let out = session
            .step(&Action::fill(boxes[0].bid.clone().unwrap(), "Bio"), &backends)
            .unwrap();
        assert!(!parse_axtree(&out.observation.axtree_text).iter().any(|l| l.role == "option"));
    }

    // news v5: icon-gated search; the box is hidden until the icon is clicked
    {
        let (mut session, obs) = EnvSession::reset(&task_for(Site::News), Version::V5, &backends, 30);
        let lines = parse_axtree(&obs.axtree_text);
        let textbox = lines.iter().find(|l| l.role == "textbox").unwrap();
        assert!(!textbox.visible, "news v5 box starts hidden");
        let icon = lines.iter().find(|l| l.role == "link" && l.name.contains('🔍')).unwrap();
        let out = session.step(&Action::click(icon.bid.clone().unwrap()), &backends).unwrap();
        let textbox = parse_axtree(&out.observation.axtree_text)
            .into_iter()
            .find(|l| l.role == "textbox")
            .unwrap();
        assert!(textbox.visible, "news v5 box visible after the icon click");
    }
    for version in [Version::V1, Version::V2, Version::V3, Version::V4, Version::V6] {
        let (_, obs) = EnvSession::reset(&task_for(Site::News), version, &backends, 30);
        assert!(
            !obs.axtree_text.contains('🔍'),
            "news {version} must not gate search behind an icon"
        );
    }

    // shop v5: popup overlay on first product visit; post-dismiss DOM equals
    // the never-popup DOM
    {
        let (mut session, _) = EnvSession::reset(&task_for(Site::Shop), Version::V5, &backends, 30);
        let out = session.step(&Action::goto("timewarp://shop/product/vinyl-01"), &backends).unwrap();
        assert!(out.observation.html_text.contains("<dialog"), "shop v5 popup expected");
        let dismiss = parse_axtree(&out.observation.axtree_text)
            .into_iter()
            .find(|l| l.role == "link" && l.name.contains("No thanks"))
            .unwrap();
        let out = session.step(&Action::click(dismiss.bid.unwrap()), &backends).unwrap();
        let no_ad = {
            use timewarp::env::{PageRef, PageState, UiState};
            let mut ui = UiState::default();
            ui.popup_seen.insert("vinyl-01".into());
            let state = PageState::build(
                &backends,
                Version::V5,
                &ui,
                PageRef::ShopProduct { id: "vinyl-01".into(), chosen: BTreeMap::new() },
                false,
            );
            to_html(&state.dom)
        };
        assert_eq!(out.observation.html_text, no_ad, "post-dismiss DOM equals the no-ad DOM");
        for version in [Version::V1, Version::V2, Version::V3, Version::V4, Version::V6] {
            let (mut s, _) = EnvSession::reset(&task_for(Site::Shop), version, &backends, 30);
            let out = s.step(&Action::goto("timewarp://shop/product/vinyl-01"), &backends).unwrap();
            assert!(!out.observation.html_text.contains("<dialog"), "shop {version} has no popup");
        }
    }

    // content invariance: article/product text inside the content container
    // is identical across all six versions
    for (site, url) in [
        (Site::Wiki, "timewarp://wiki/article/Biology"),
        (Site::News, "timewarp://news/article/n001"),
        (Site::Shop, "timewarp://shop/product/sb-mini-01"),
    ] {
        let mut texts: Vec<String> = Vec::new();
        for version in Version::ALL {
            let (mut session, _) = EnvSession::reset(&task_for(site), version, &backends, 30);
            let out = session.step(&Action::goto(url), &backends).unwrap();
            assert!(out.observation.last_error.is_none());
            let dom = &session.current().dom;
            let content = dom
                .walk()
                .find(|n| n.get_attr("id") == Some("content"))
                .unwrap();
            texts.push(timewarp::dom::collapse_ws(&content.content_text()));
        }
        texts.dedup();
        assert_eq!(texts.len(), 1, "{site}: content text differs across versions");
    }

    pass(6, "version-feature conformance", "all 18 (site, version) structural checks hold");
}

// criterion 7: the collection pipeline's bookkeeping over 10 goals x 6 versions
#[test]
fn acceptance_07_timetraj_end_to_end() {
    let started = Instant::now();
    let backends = bundled_backends();
    let tasks = bundled_tasks();
    let plans = bundled_plans();
    let picks = [
        "wiki-fact-everest", "wiki-recursive-chain", "wiki-fact-biology", "news-count-morocco",
        "news-count-stallman", "shop-count-soundbar", "shop-order-vinyl", "shop-order-lamp",
        "multi-select-nuts", "multi-order-radio",
    ];
    let goals: Vec<TaskSpec> = picks
        .iter()
        .map(|id| tasks.iter().find(|t| &t.goal_id == id).unwrap().clone())
        .collect();
    let plan_records: Vec<PlanRecord> = goals
        .iter()
        .map(|g| PlanRecord {
            goal_id: g.goal_id.clone(),
            draft_plan: String::new(),
            refined_plan: Some(plans[&g.goal_id].clone()),
            status: PlanStatus::Refined,
        })
        .collect();

    let dir = tempfile::tempdir().unwrap();
    let store = TrajectoryStore::create(dir.path()).unwrap();
    let summary = teacher_rollouts(
        &goals,
        &plan_records,
        &Version::ALL,
        &TeacherBackend::Oracle,
        &JudgeBackend::RuleBased,
        &backends,
        &store,
        &RolloutConfig::default(),
    )
    .unwrap();

    assert_eq!(summary.attempted, 60);
    assert_eq!(summary.kept + summary.dropped, 60, "coverage accounting");
    let stored = store.load_all().unwrap();
    assert_eq!(stored.len(), summary.kept);
    assert!(stored.iter().all(|t| t.reward == 1), "only reward-1 trajectories persist");
    let drops = store.drop_log().unwrap();
    assert_eq!(drops.len(), summary.dropped, "drop-log accounting");
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 120, "rollouts took {elapsed:?}");
    pass(
        7,
        "timetraj end-to-end",
        &format!(
            "60 attempted, {} kept + {} dropped in {elapsed:?}",
            summary.kept, summary.dropped
        ),
    );
}

// criterion 8: the 8 token-mask projections and export stability
#[test]
fn acceptance_08_bc_masks() {
    let backends = bundled_backends();
    let tasks = bundled_tasks();
    let plans = bundled_plans();
    let goal = tasks.iter().find(|t| t.goal_id == "shop-order-lamp").unwrap().clone();
    let plan_record = PlanRecord {
        goal_id: goal.goal_id.clone(),
        draft_plan: String::new(),
        refined_plan: Some(plans[&goal.goal_id].clone()),
        status: PlanStatus::Refined,
    };
    let dir = tempfile::tempdir().unwrap();
    let store = TrajectoryStore::create(dir.path()).unwrap();
    teacher_rollouts(
        &[goal],
        &[plan_record],
        &Version::ALL,
        &TeacherBackend::Oracle,
        &JudgeBackend::RuleBased,
        &backends,
        &store,
        &RolloutConfig::default(),
    )
    .unwrap();
    let trajectories = store.load_all().unwrap();
    assert_eq!(trajectories.len(), 6);

    // all 8 projections, pairwise distinct on every step
    let masks = TokenMask::all();
    assert_eq!(masks.len(), 8);
    for trajectory in &trajectories {
        for step in &trajectory.steps {
            let parsed = step.parsed.as_ref().unwrap();
            let targets: HashSet<String> =
                masks.iter().map(|m| render_target(parsed, *m)).collect();
            assert_eq!(targets.len(), 8, "projections must be pairwise distinct");
            let action_only = render_target(parsed, TokenMask::ACTION_ONLY);
            assert_eq!(action_only, format!("<action>\n{}\n</action>", parsed.action_raw));
            let full = render_target(parsed, TokenMask::FULL);
            assert_eq!(full, step.raw_response, "full mask equals the stored response");
        }
    }

    // every mask builds a dataset; re-export hashes are stable
    let out = dir.path().join("records.jsonl");
    let mut hashes = Vec::new();
    for mask in masks {
        let records = build_dataset(&trajectories, mask, &Version::ALL, None).unwrap();
        assert!(!records.is_empty());
        let m1 = export(&records, &out, ExportFormat::Jsonl, "all", None).unwrap();
        let m2 = export(&records, &out, ExportFormat::Jsonl, "all", None).unwrap();
        assert_eq!(m1.content_hash, m2.content_hash, "stable hash for {}", mask.signature());
        hashes.push(m1.content_hash);
    }
    hashes.sort();
    hashes.dedup();
    assert_eq!(hashes.len(), 8, "each mask exports distinct content");
    pass(8, "bc-data masks", "8 projections built, action-only and full targets exact, hashes stable");
}

// criterion 9: the action parser round-trips the documented examples
#[test]
fn acceptance_09_action_parser() {
    let examples = [
        "scroll(0, 200)",
        "scroll(-50.2, -100.5)",
        "fill('45', 'multi-line\\n example')",
        "fill('a12', 'example with \"quotes\"')",
        "fill('b534', 'Montre', True)",
        "click('a51')",
        "click('b22', button='right')",
        "click('48', button='middle', modifiers=['Shift'])",
        "press('88', 'Backspace')",
        "press('a26', 'ControlOrMeta+a')",
        "press('a61', 'Meta+Shift+t')",
        "go_back()",
        "goto('http://www.example.com')",
        "send_msg_to_user('Based on the results of my search, the city was built in 1751.')",
        "report_infeasible('I cannot follow these instructions because there is no email field in this form.')",
        "new_tab()",
        "tab_close()",
        "tab_focus(2)",
    ];
    let mut kinds = HashSet::new();
    for example in examples {
        let action = parse_action(example).unwrap_or_else(|e| panic!("{example}: {e}"));
        kinds.insert(action.kind_name());
        let reparsed = parse_action(&action.to_string())
            .unwrap_or_else(|e| panic!("round-trip of {example}: {e}"));
        assert_eq!(reparsed, action, "{example}");
    }
    assert_eq!(kinds.len(), 11, "examples cover all 11 action kinds");

    // multi-action outputs are rejected
    assert!(matches!(
        parse_response("<action>click('1')</action><action>click('2')</action>"),
        Err(ResponseError::MultipleActions(2))
    ));
    assert!(parse_action("click('1') click('2')").is_err());
    pass(9, "action parser", "18 documented examples round-trip; multi-action outputs rejected");
}

// criterion 10: latency budget on the mini corpora
#[test]
fn acceptance_10_latency_budget() {
    let suite_start = Instant::now();
    let backends = bundled_backends();

    // per-action step latency (mixed navigation, fill, scroll, click)
    let mut step_times: Vec<f64> = Vec::new();
    for version in Version::ALL {
        let (mut session, obs) = EnvSession::reset(&task_for(Site::Wiki), version, &backends, 200);
        let search = parse_axtree(&obs.axtree_text)
            .into_iter()
            .rev()
            .find(|l| l.role == "textbox" || l.role == "combobox")
            .unwrap();
        let search_bid = search.bid.unwrap();
        let actions: Vec<Action> = vec![
            Action::scroll(0.0, 4000.0),
            Action::fill(search_bid.clone(), "Biology"),
            Action::press(search_bid, "Enter"),
            Action::goto("timewarp://shop/product/sb-mini-01"),
            Action::goto("timewarp://news/search?q=football"),
            Action::GoBack,
            Action::scroll(0.0, -200.0),
            Action::goto("timewarp://wiki/article/History_of_Computing"),
        ];
        for _ in 0..4 {
            for action in &actions {
                let t = Instant::now();
                session.step(action, &backends).unwrap();
                step_times.push(t.elapsed().as_secs_f64() * 1000.0);
            }
        }
    }
    let step_p95 = percentile(&mut step_times, 0.95);
    assert!(step_p95 <= 50.0, "step p95 {step_p95:.2} ms exceeds 50 ms");

    // per-search latency over both indexes
    let mut search_times: Vec<f64> = Vec::new();
    let queries = ["football", "morocco", "sound bar", "lamp", "toothpaste", "record", "peanuts"];
    for _ in 0..30 {
        for query in queries {
            let t = Instant::now();
            let _ = backends.news_search.search(&backends.news, query);
            search_times.push(t.elapsed().as_secs_f64() * 1000.0);
            let t = Instant::now();
            let _ = backends.shop_search.search(&backends.catalog, query);
            search_times.push(t.elapsed().as_secs_f64() * 1000.0);
        }
    }
    let search_p95 = percentile(&mut search_times, 0.95);
    assert!(search_p95 <= 100.0, "search p95 {search_p95:.2} ms exceeds 100 ms");

    let elapsed = suite_start.elapsed();
    assert!(elapsed.as_secs() < 60, "latency suite took {elapsed:?}");
    pass(
        10,
        "latency budget",
        &format!(
            "step p95 {step_p95:.2} ms (≤50), search p95 {search_p95:.3} ms (≤100), suite {elapsed:?}"
        ),
    );
}

fn percentile(samples: &mut [f64], q: f64) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let idx = ((samples.len() as f64 - 1.0) * q).round() as usize;
    samples[idx]
}
