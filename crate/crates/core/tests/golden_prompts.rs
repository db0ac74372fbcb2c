//! Rendered prompts compared byte for byte against the golden fixtures.

use seqprobe::corpus::{parse_conllu_str, tagset_line, UposPolicy};
use seqprobe::prompt::{
    build_demonstrations, generate_prompts, render_iterative, select_fewshot_examples, DemoTriple,
    PromptTemplate, QuoteStyle, DEFAULT_DEMO_ORDER,
};
use seqprobe::{PosTag, Sentence};

const DECOM_ZERO: &str = include_str!("../fixtures/golden/decom_zero_shot.txt");
const DECOM_ZERO_TYPESET: &str = include_str!("../fixtures/golden/decom_zero_shot_typeset.txt");
const DECOM_FEW: &str = include_str!("../fixtures/golden/decom_few_shot.txt");
const DECOM_FEW_TYPESET: &str = include_str!("../fixtures/golden/decom_few_shot_typeset.txt");
const DECOM_FEW_DEMOS: &str = include_str!("../fixtures/golden/decom_few_shot_demos.tsv");
const ITER_ZERO: &str = include_str!("../fixtures/golden/iter_zero_shot.txt");
const ITER_FEW: &str = include_str!("../fixtures/golden/iter_few_shot.txt");
const TRAIN_EN: &str = include_str!("../fixtures/corpus/train_en.conllu");

fn viel() -> Sentence {
    Sentence::from_text("de", "viel", "Viel Erfolg !").unwrap()
}

fn typeset() -> PromptTemplate {
    PromptTemplate {
        quote: QuoteStyle::Typeset,
        ..PromptTemplate::default()
    }
}

fn reference_demos() -> Vec<DemoTriple> {
    DECOM_FEW_DEMOS
        .lines()
        .filter(|l| !l.starts_with('#'))
        .enumerate()
        .map(|(i, line)| {
            let mut cols = line.split('\t');
            let (c, t, l) = (
                cols.next().unwrap(),
                cols.next().unwrap(),
                cols.next().unwrap(),
            );
            let context = Sentence::from_text("en", &format!("demo-{i}"), c).unwrap();
            DemoTriple::new(context, t, l.parse::<PosTag>().unwrap())
        })
        .collect()
}

fn decom_first_prompt(
    template: &PromptTemplate,
    demos: &[DemoTriple],
    instruction: Option<&str>,
) -> String {
    let prefix = build_demonstrations(template, demos, instruction).unwrap();
    generate_prompts(template, &viel(), &prefix)
        .prompts
        .remove(0)
}

#[test]
fn decomposed_zero_shot() {
    let instruction = tagset_line();
    assert_eq!(
        decom_first_prompt(&PromptTemplate::default(), &[], Some(&instruction)),
        DECOM_ZERO
    );
    assert_eq!(
        decom_first_prompt(&typeset(), &[], Some(&instruction)),
        DECOM_ZERO_TYPESET
    );
}

#[test]
fn decomposed_few_shot_without_instruction() {
    let demos = reference_demos();
    assert_eq!(demos.len(), 17);
    let labels: Vec<PosTag> = demos.iter().map(|d| d.label).collect();
    assert_eq!(labels, DEFAULT_DEMO_ORDER);
    assert_eq!(
        decom_first_prompt(&PromptTemplate::default(), &demos, None),
        DECOM_FEW
    );
    assert_eq!(
        decom_first_prompt(&typeset(), &demos, None),
        DECOM_FEW_TYPESET
    );
}

#[test]
fn iterative_zero_shot() {
    assert_eq!(
        render_iterative(&viel(), &[], &[], Some(&tagset_line())).unwrap(),
        ITER_ZERO
    );
}

#[test]
fn iterative_few_shot_without_instruction() {
    let train = parse_conllu_str(TRAIN_EN, "en", UposPolicy::AllowMissing).unwrap();
    let demos: Vec<Sentence> = (1..=7)
        .map(|i| {
            let id = format!("train-en-{i:03}");
            train.iter().find(|s| s.source_id == id).unwrap().clone()
        })
        .collect();
    assert_eq!(
        render_iterative(&viel(), &[], &demos, None).unwrap(),
        ITER_FEW
    );
}

#[test]
fn fewshot_selection_follows_default_order() {
    let train = parse_conllu_str(TRAIN_EN, "en", UposPolicy::AllowMissing).unwrap();
    let triples = select_fewshot_examples(&train, 42, &DEFAULT_DEMO_ORDER).unwrap();
    for (triple, tag) in triples.iter().zip(DEFAULT_DEMO_ORDER) {
        assert_eq!(triple.label, tag);
        assert!(triple
            .context
            .tokens()
            .iter()
            .any(|t| t.surface == triple.token && t.gold_tag == Some(tag)));
    }
    let prefix = build_demonstrations(&PromptTemplate::default(), &triples, None).unwrap();
    assert_eq!(prefix.matches("\nIn the sentence,").count(), 17);
}
