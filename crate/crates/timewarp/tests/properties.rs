//! Property tests for the structural invariants: bid uniqueness, AX/HTML
//! agreement, serializer round-trips, and judge OR-monotonicity.

use proptest::prelude::*;
use timewarp::dom::{
    assign_bids, compute_visibility, el, parse_axtree, parse_html, text, to_axtree, to_html,
    DomNode, Viewport,
};
use timewarp::env::{Action, Modifier, MouseButton};
use timewarp::harness::parse_action;
use timewarp::judge::{judge, JudgeBackend, Label};
use timewarp::taskset::{AnswerFlags, MatchMode};

fn arb_bidlike() -> impl Strategy<Value = String> {
    "[a-z0-9]{1,6}".prop_map(|s| s)
}

fn arb_text() -> impl Strategy<Value = String> {
    // printable text with quotes, backslashes, and newlines in the mix
    proptest::collection::vec(
        prop_oneof![
            Just('a'),
            Just('Z'),
            Just('7'),
            Just(' '),
            Just('\''),
            Just('"'),
            Just('\\'),
            Just('\n'),
            Just('é'),
            Just(','),
        ],
        1..20,
    )
    .prop_map(|chars| chars.into_iter().collect())
}

fn arb_action() -> impl Strategy<Value = Action> {
    prop_oneof![
        (any::<i16>(), any::<i16>()).prop_map(|(x, y)| Action::Scroll {
            delta_x: f64::from(x) / 4.0,
            delta_y: f64::from(y) / 4.0,
        }),
        (arb_bidlike(), arb_text(), any::<bool>()).prop_map(|(bid, value, auto)| Action::Fill {
            bid,
            value,
            enable_autocomplete_menu: auto,
        }),
        (
            arb_bidlike(),
            prop_oneof![
                Just(MouseButton::Left),
                Just(MouseButton::Middle),
                Just(MouseButton::Right)
            ],
            proptest::collection::vec(
                prop_oneof![
                    Just(Modifier::Alt),
                    Just(Modifier::Control),
                    Just(Modifier::ControlOrMeta),
                    Just(Modifier::Meta),
                    Just(Modifier::Shift)
                ],
                0..3
            )
        )
            .prop_map(|(bid, button, modifiers)| Action::Click { bid, button, modifiers }),
        (arb_bidlike(), arb_text()).prop_map(|(bid, key_comb)| Action::Press { bid, key_comb }),
        Just(Action::GoBack),
        arb_text().prop_map(|url| Action::Goto { url }),
        arb_text().prop_map(|text| Action::SendMsgToUser { text }),
        arb_text().prop_map(|reason| Action::ReportInfeasible { reason }),
        Just(Action::NewTab),
        Just(Action::TabClose),
        (1i64..99).prop_map(|index| Action::TabFocus { index }),
    ]
}

proptest! {
    #[test]
    fn action_serialization_round_trips(action in arb_action()) {
        let serialized = action.to_string();
        let reparsed = parse_action(&serialized)
            .unwrap_or_else(|e| panic!("{serialized}: {e}"));
        prop_assert_eq!(reparsed, action);
    }
}

fn arb_tree() -> impl Strategy<Value = DomNode> {
    let leaf = prop_oneof![
        "[a-zA-Z0-9 ,.!]{1,30}".prop_filter("not all whitespace", |s| !s.trim().is_empty())
            .prop_map(|s| text(s)),
        Just(el("input").attr("name", "q")),
        "[a-z]{1,8}".prop_map(|t| el("a").attr("href", format!("/{t}")).text_child(t)),
        Just(el("hr")),
    ];
    leaf.prop_recursive(4, 48, 6, |inner| {
        (
            prop_oneof![
                Just("div"), Just("p"), Just("ul"), Just("li"), Just("h2"), Just("span"),
                Just("table"), Just("td"), Just("form"), Just("b")
            ],
            proptest::collection::vec(inner, 0..5),
        )
            .prop_map(|(tag, children)| el(tag).children_from(children))
    })
    .prop_map(|body| el("html").child(el("body").child(body)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bids_are_unique_and_cover_every_element(tree in arb_tree()) {
        let tree = assign_bids(tree);
        let bids = tree.bids();
        let elements = tree.walk().filter(|n| !n.is_text()).count();
        prop_assert_eq!(bids.len(), elements);
        let mut dedup = bids.clone();
        dedup.sort();
        dedup.dedup();
        prop_assert_eq!(dedup.len(), bids.len());
    }

    #[test]
    fn ax_bids_appear_exactly_once_in_html(tree in arb_tree()) {
        let mut tree = assign_bids(tree);
        compute_visibility(&mut tree, Viewport::default());
        let html = to_html(&tree);
        for line in parse_axtree(&to_axtree(&tree, None)) {
            if let Some(bid) = line.bid {
                let needle = format!(" bid=\"{bid}\"");
                prop_assert_eq!(html.matches(&needle).count(), 1, "bid {} in html", bid);
            }
        }
    }

    #[test]
    fn ax_visible_flag_matches_node_state(tree in arb_tree()) {
        let mut tree = assign_bids(tree);
        compute_visibility(&mut tree, Viewport { scroll_y: 1.0, height: 4.0 });
        let lines = parse_axtree(&to_axtree(&tree, None));
        for line in lines {
            if let Some(bid) = &line.bid {
                let node = tree.find(bid).expect("bid resolves");
                prop_assert_eq!(line.visible, node.visible, "bid {}", bid);
            }
        }
    }

    #[test]
    fn html_round_trip_is_idempotent(tree in arb_tree()) {
        let mut tree = assign_bids(tree);
        compute_visibility(&mut tree, Viewport::default());
        let html = to_html(&tree);
        let reparsed = parse_html(&html).unwrap();
        prop_assert_eq!(to_html(&reparsed), html);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn adding_references_never_revokes_correct(
        answer in "[a-d]{1,4}",
        extra in proptest::collection::vec("[a-d]{1,4}", 0..4),
    ) {
        let rule = JudgeBackend::RuleBased;
        let base = vec![answer.clone()];
        let verdict = judge("g", &base, MatchMode::Any, &answer, AnswerFlags::default(), &rule).unwrap();
        prop_assert_eq!(verdict.label, Label::Correct);
        let mut widened = base;
        widened.extend(extra);
        let verdict = judge("g", &widened, MatchMode::Any, &answer, AnswerFlags::default(), &rule).unwrap();
        prop_assert_eq!(verdict.label, Label::Correct);
        prop_assert_eq!(verdict.reward, 1);
    }
}
