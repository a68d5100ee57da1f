use super::*;

const CHOICE: &str = "Whenever there is a node with id X then we can have a col with node X, and with color equal to blue, or a col with node X, and with color equal to red, or a col with node X, and with color equal to green.";
const PROHIBITION: &str = "It is prohibited that C1 is equal to C2, whenever there is a col with node X, and with color C1, whenever there is a col with node Y, and with color C2, whenever there is an edge with firstnode X, and with secondnode Y.";

fn coloring_document() -> String {
    format!(
        "A node is identified by an id.\nA edge is identified by a firstnode, and by a secondnode.\nA color is identified by an id.\n{CHOICE}\n{PROHIBITION}\n"
    )
}

#[test]
fn node_definition() {
    let doc = parse_cnl("A node is identified by an id.").unwrap();
    assert_eq!(
        doc.propositions,
        vec![CnlProposition::Definition(EntityDef {
            name: "node".into(),
            key_attrs: vec!["id".into()],
            value_attrs: vec![],
        })]
    );
    assert_eq!(
        doc.propositions[0].kind(),
        PropositionKind::DefinitionConstCompound
    );
}

#[test]
fn definition_with_keys_and_values() {
    let doc =
        parse_cnl("A cost is identified by a firstnode, and by a secondnode, and has a value.")
            .unwrap();
    let def = doc.symbols.get("cost").unwrap();
    assert_eq!(def.key_attrs, ["firstnode", "secondnode"]);
    assert_eq!(def.value_attrs, ["value"]);
}

#[test]
fn prohibition_structure() {
    let doc = parse_cnl(&coloring_document()).unwrap();
    let p = &doc.propositions[4];
    assert_eq!(categorize(p), PropositionKind::NegativeConstraint);
    match p {
        CnlProposition::Prohibition {
            assertions,
            conditions,
        } => {
            assert_eq!(assertions.len(), 1);
            assert!(matches!(assertions[0], Condition::Compare(_)));
            assert_eq!(conditions.len(), 3);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn choice_is_categorized_and_declares_col() {
    let doc = parse_cnl(&coloring_document()).unwrap();
    assert_eq!(
        doc.propositions[3].kind(),
        PropositionKind::QuantifiedChoice
    );
    let col = doc.symbols.entry("col").unwrap();
    assert!(col.implicit);
    assert_eq!(col.def.key_attrs, ["node", "color"]);
}

#[test]
fn empty_text_is_empty_document() {
    let doc = parse_cnl("").unwrap();
    assert!(doc.propositions.is_empty());
    assert!(doc.symbols.is_empty());
}

#[test]
fn color_definition_category() {
    let doc = parse_cnl("A color is identified by an id.").unwrap();
    assert_eq!(
        categorize(&doc.propositions[0]),
        PropositionKind::DefinitionConstCompound
    );
}

#[test]
fn unknown_entity_in_condition() {
    let err = parse_cnl("A node is identified by an id. It is prohibited that there is a node with id X, whenever there is a foo with id X.").unwrap_err();
    assert_eq!(
        err,
        CnlError::UnknownEntity {
            name: "foo".into(),
            sentence: 1
        }
    );
}

#[test]
fn unknown_attribute() {
    let err = parse_cnl(
        "A node is identified by an id. It is prohibited that there is a node with label X.",
    )
    .unwrap_err();
    assert!(
        matches!(err, CnlError::UnknownAttribute { ref attribute, .. } if attribute == "label")
    );
}

#[test]
fn conflicting_definition() {
    let err =
        parse_cnl("A node is identified by an id. A node is identified by a label.").unwrap_err();
    assert!(matches!(
        err,
        CnlError::ConflictingDefinition { sentence: 1, .. }
    ));
}

#[test]
fn check_syntax_accepts_the_coloring_choice() {
    assert!(check_syntax(CHOICE, None).is_accepted());
    assert_eq!(
        check_syntax(CHOICE, None),
        SyntaxVerdict::Accepted {
            category: PropositionKind::QuantifiedChoice
        }
    );
}

#[test]
fn truncated_sentence_is_rejected() {
    let v = check_syntax("Whenever there is a", None);
    match v {
        SyntaxVerdict::Rejected { reason } => assert!(reason.contains("end of sentence")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn missing_period_is_rejected() {
    assert!(!check_syntax("A node is identified by an id", None).is_accepted());
}

#[test]
fn dash_identifier_is_rejected() {
    let v = check_syntax(
        "It is required that there is a Dominating-Set with id X, whenever there is a node with id X.",
        None,
    );
    assert!(!v.is_accepted());
}

#[test]
fn capitalization_matters() {
    let bad = "Whenever there is a node with id X, whenever There is a edge with firstnode X then we must have a seen with id X.";
    assert!(!check_syntax(bad, None).is_accepted());
    let good = bad.replace("There", "there");
    assert!(check_syntax(&good, None).is_accepted());
    assert!(!check_syntax(
        "whenever there is a node with id X then we must have a seen with id X.",
        None
    )
    .is_accepted());
}

#[test]
fn at_most_or_equal_to_is_rejected_with_suggestion() {
    let v = check_syntax(
        "It is prohibited that X is at most or equal to Y, whenever there is a node with id X, whenever there is a node with id Y.",
        None,
    );
    match v {
        SyntaxVerdict::Rejected { reason } => {
            assert!(reason.contains("less than or equal to"), "{reason}")
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn missing_space_in_variable_is_rejected() {
    let v = check_syntax(
        "It is prohibited that C1 is equal to C 2, whenever there is a col with node X, and with color C1.",
        None,
    );
    assert!(!v.is_accepted());
}

#[test]
fn check_syntax_matches_parse_with_ambient_definitions() {
    let defs = parse_cnl(
        "A node is identified by an id. A edge is identified by a firstnode, and by a secondnode.",
    )
    .unwrap();
    let sentence = "It is required that there is a node with id X, whenever there is an edge with firstnode X, and with secondnode Y.";
    assert!(check_syntax(sentence, Some(&defs.symbols)).is_accepted());
    let unknown = "It is required that there is a vertex with id X, whenever there is an edge with firstnode X, and with secondnode Y.";
    assert!(!check_syntax(unknown, Some(&defs.symbols)).is_accepted());
    // Without ambient definitions only the grammar is checked.
    assert!(check_syntax(unknown, None).is_accepted());
}

#[test]
fn check_syntax_rejects_two_sentences() {
    assert!(!check_syntax(
        "A node is identified by an id. A color is identified by an id.",
        None
    )
    .is_accepted());
}

#[test]
fn all_seven_categories() {
    let text = "\
A node is identified by an id.
A edge is identified by a firstnode, and by a secondnode.
A reached with id Y holds when there is a reached with id X, and there is an edge with firstnode X, and with secondnode Y.
Whenever there is a node with id X, and X is less than 3 then we must have a small with id X.
It is prohibited that there is a reached with id X, whenever there is a small with id X.
It is required that there is a reached with id X, whenever there is a node with id X.
Whenever there is a node with id X then we can have exactly 1 pick with node X, and with other Y such that there is a node with id Y.
It is preferred as little as possible, with weight 2 and priority 1, that there is a pick with node X, and with other Y.
";
    let doc = parse_cnl(text).unwrap();
    let kinds: Vec<PropositionKind> = doc.propositions.iter().map(categorize).collect();
    assert_eq!(
        kinds,
        vec![
            PropositionKind::DefinitionConstCompound,
            PropositionKind::DefinitionConstCompound,
            PropositionKind::DefinitionWhen,
            PropositionKind::DefinitionWhenever,
            PropositionKind::NegativeConstraint,
            PropositionKind::PositiveConstraint,
            PropositionKind::QuantifiedChoice,
            PropositionKind::WeakConstraint,
        ]
    );
}

#[test]
fn quantities() {
    for (q, expected) in [
        ("exactly 2", Quantity::Exactly(2)),
        ("at most 1", Quantity::AtMost(1)),
        ("at least 1", Quantity::AtLeast(1)),
        ("between 1 and 3", Quantity::Between(1, 3)),
    ] {
        let s = format!("Whenever there is a node with id X then we can have {q} pick with node X, and with other Y such that there is a node with id Y.");
        let doc = parse_cnl_with(&s, None, Resolution::Lenient).unwrap();
        match &doc.propositions[0] {
            CnlProposition::Choice { quantity, .. } => assert_eq!(*quantity, Some(expected)),
            other => panic!("{other:?}"),
        }
    }
    assert!(!check_syntax(
        "Whenever there is a node with id X then we can have between 3 and 1 pick with node X.",
        None
    )
    .is_accepted());
}

#[test]
fn syntax_error_reports_position_and_expectations() {
    let err = parse_cnl("A node is identified by an id. It is forbidden that X is equal to Y.")
        .unwrap_err();
    match err {
        CnlError::Syntax {
            sentence,
            position,
            found,
            expected,
            ..
        } => {
            assert_eq!(sentence, 1);
            assert_eq!(position, 6);
            assert_eq!(found, "'forbidden'");
            assert!(expected.contains(&"'prohibited'".to_string()));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn reserved_words_are_not_names() {
    assert!(!check_syntax("A with is identified by an id.", None).is_accepted());
}
