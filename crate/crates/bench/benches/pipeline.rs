use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use halqa_bench::{fixture_corpus, fixture_questions};
use halqa_core::{Engine, Resources, Settings, Technique};

fn stemming(c: &mut Criterion) {
    let resources = Resources::bundled().unwrap();
    let words: Vec<String> = fixture_corpus()
        .unwrap()
        .iter()
        .flat_map(|d| d.text.split_whitespace().map(str::to_owned).collect::<Vec<_>>())
        .collect();
    c.bench_function("stem_corpus_words", |b| {
        b.iter(|| {
            for w in &words {
                let _ = black_box(resources.stemmer.stem(w));
            }
        })
    });
}

fn indexing(c: &mut Criterion) {
    let resources = Resources::bundled().unwrap();
    let corpus = fixture_corpus().unwrap();
    c.bench_function("build_index", |b| {
        b.iter(|| resources.build_index(black_box(&corpus)).unwrap())
    });
}

fn answering(c: &mut Criterion) {
    let resources = Arc::new(Resources::bundled().unwrap());
    let corpus = fixture_corpus().unwrap();
    let questions = fixture_questions().unwrap();
    let mut group = c.benchmark_group("ask_all_questions");
    for technique in [Technique::Paragraph, Technique::Document] {
        let settings = Settings {
            technique,
            ..Settings::default()
        };
        let engine = Engine::from_corpus(resources.clone(), &corpus, settings).unwrap();
        group.bench_function(technique.to_string(), |b| {
            b.iter(|| {
                for q in &questions {
                    let _ = black_box(engine.ask(q));
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, stemming, indexing, answering);
criterion_main!(benches);
