//! Acceptance criteria 1-9. Runs as a plain binary so every criterion
//! prints its PASS/FAIL line; exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use purepair::generators::{Family, GeneratorSpec};
use purepair::harness::{replay, CampaignParams, SampleRecord};
use purepair::oracles::MeasureKind;
use purepair::rational::q;
use purepair::{run_campaign, CampaignConfig, CampaignReport, Lemma};

struct Tally {
    pass: usize,
    fail: usize,
    skipped: usize,
    degenerate: usize,
    outcomes: BTreeMap<String, usize>,
    first_failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            pass: 0,
            fail: 0,
            skipped: 0,
            degenerate: 0,
            outcomes: BTreeMap::new(),
            first_failure: None,
        }
    }

    fn add(&mut self, lemma: Lemma, rep: &CampaignReport) {
        self.pass += rep.counts.pass;
        self.fail += rep.counts.fail;
        self.skipped += rep.counts.skipped;
        for r in &rep.records {
            if r.degenerate {
                self.degenerate += 1;
            }
            if let Some(o) = &r.outcome {
                *self.outcomes.entry(format!("{}:{o}", lemma.id())).or_default() += 1;
            }
        }
        if self.first_failure.is_none() {
            self.first_failure = rep.failures().next().map(|r| {
                format!("{} on {}: {}", lemma.id(), r.graph6, r.reason.as_deref().unwrap_or(""))
            });
        }
    }
}

fn free(forbidden: &str, n: usize, p: (i64, i64)) -> GeneratorSpec {
    GeneratorSpec::new(Family::HFreeRejection {
        n,
        n_min: Some(5),
        p: q(p.0, p.1),
        forbidden: forbidden.into(),
        max_rounds: 2000,
    })
}

fn gnp(n: usize, n_min: usize, p: (i64, i64)) -> GeneratorSpec {
    GeneratorSpec::new(Family::Gnp {
        n,
        n_min: Some(n_min),
        p: q(p.0, p.1),
    })
}

fn named(name: &str) -> GeneratorSpec {
    GeneratorSpec::new(Family::Named { name: name.into() })
}

fn campaign(lemma: Lemma, specs: Vec<GeneratorSpec>, samples: usize, seed: u64, params: CampaignParams) -> CampaignReport {
    let mut cfg = CampaignConfig::new(lemma, specs, samples, seed);
    cfg.params = params;
    run_campaign(&cfg).expect("campaign config is valid")
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn verdict(t: &Tally, min_pass: usize) -> Outcome {
    let mut detail = format!(
        "{} pass, {} fail, {} skipped, {} degenerate (need ≥ {min_pass} passes, 0 fails)",
        t.pass, t.fail, t.skipped, t.degenerate
    );
    if let Some(f) = &t.first_failure {
        detail.push_str(&format!("; first failure: {f}"));
    }
    Outcome {
        ok: t.fail == 0 && t.pass >= min_pass,
        detail,
    }
}

fn oracles() -> Outcome {
    let mut t = Tally::new();
    let specs = vec![gnp(10, 1, (1, 4)), gnp(10, 1, (1, 2)), gnp(10, 1, (3, 4)), gnp(10, 1, (9, 10))];
    t.add(Lemma::Oracles, &campaign(Lemma::Oracles, specs, 2500, 1, CampaignParams::default()));
    verdict(&t, 10_000)
}

fn p5_corpus() -> Vec<GeneratorSpec> {
    vec![
        free("P5", 14, (1, 4)),
        free("P5", 14, (1, 2)),
        free("P5", 14, (3, 4)),
        named("c5_join(1)"),
        named("c5_join(2)"),
    ]
}

fn gyarfas() -> Outcome {
    let mut t = Tally::new();
    for lemma in [Lemma::GyarfasVertex, Lemma::GyarfasColourBound] {
        t.add(lemma, &campaign(lemma, p5_corpus(), 400, 2, CampaignParams::default()));
    }
    verdict(&t, 2 * 1000)
}

fn core_and_control() -> Outcome {
    let mut t = Tally::new();
    for lemma in [Lemma::MinDegreeCore, Lemma::ControlledSubgraph] {
        t.add(lemma, &campaign(lemma, p5_corpus(), 400, 2, CampaignParams::default()));
    }
    verdict(&t, 2 * 1000)
}

fn tbroom() -> Outcome {
    let mut t = Tally::new();
    for tt in 1..=3 {
        let forbidden = format!("broom(3,{tt})");
        let specs = vec![free(&forbidden, 14, (1, 2)), free(&forbidden, 14, (3, 4))];
        let params = CampaignParams { t: tt, ..CampaignParams::default() };
        for lemma in [Lemma::TbroomColour, Lemma::TbroomDecompose] {
            t.add(lemma, &campaign(lemma, specs.clone(), 100, 3 + tt as u64, params.clone()));
        }
    }
    verdict(&t, 2 * 500)
}

fn vivid() -> Outcome {
    let mut t = Tally::new();
    let specs = vec![gnp(12, 3, (1, 3)), gnp(12, 3, (2, 3)), gnp(12, 3, (9, 10)), gnp(8, 3, (1, 2))];
    t.add(Lemma::VividClique, &campaign(Lemma::VividClique, specs, 2500, 5, CampaignParams::default()));
    let mut o = verdict(&t, 10_000);
    o.detail.push_str(&format!("; outcomes {:?}", t.outcomes));
    o
}

fn eh() -> Outcome {
    let mut t = Tally::new();
    for h in ["K3", "P4", "P5"] {
        for mu in [MeasureKind::Cardinality, MeasureKind::Chromatic] {
            let params = CampaignParams {
                h: h.into(),
                measure: mu,
                eps: q(1, 4),
                ..CampaignParams::default()
            };
            let specs = vec![free(h, 12, (1, 3)), free(h, 12, (2, 3))];
            for lemma in [Lemma::EhStep, Lemma::NearPurePair, Lemma::QuasiPure] {
                t.add(lemma, &campaign(lemma, specs.clone(), 50, 6, params.clone()));
            }
        }
    }
    verdict(&t, 3 * 500)
}

fn brooms() -> Outcome {
    let mut t = Tally::new();
    let specs = vec![
        gnp(14, 4, (1, 3)),
        gnp(14, 4, (1, 2)),
        gnp(14, 4, (4, 5)),
        free("P5", 16, (3, 4)),
        named("c5_join(3)"),
    ];
    for (k, tt) in [(1, 1), (2, 2), (3, 2)] {
        let params = CampaignParams { k, t: tt, ..CampaignParams::default() };
        for lemma in [Lemma::BroomOrAnticomplete, Lemma::CoveringBlockade] {
            t.add(lemma, &campaign(lemma, specs.clone(), 40, 7 + k as u64, params.clone()));
        }
    }
    let mut o = verdict(&t, 2 * 300);
    o.detail.push_str(&format!("; outcomes {:?}", t.outcomes));
    o
}

fn p5_pipeline() -> Outcome {
    let mut t = Tally::new();
    let mut specs = vec![free("P5", 14, (1, 2)), free("P5", 14, (3, 4))];
    specs.extend(["c5_join(1)", "c5_join(2)", "c5_join(3)"].map(named));
    for lemma in [
        Lemma::TerminalPartition,
        Lemma::TerminalCompletePair,
        Lemma::Linanti,
        Lemma::Locdense,
        Lemma::P5CompletePair,
        Lemma::P5ChiBound,
    ] {
        t.add(lemma, &campaign(lemma, specs.clone(), 160, 8, CampaignParams::default()));
    }
    let mut o = verdict(&t, 6 * 300);
    o.detail.push_str(&format!("; outcomes {:?}", t.outcomes));
    o
}

fn outcome_fields(r: &SampleRecord) -> String {
    serde_json::to_string(&(&r.status, &r.outcome, &r.witness, &r.graph_hash)).expect("json")
}

fn determinism() -> Outcome {
    let run = |workers| {
        let mut cfg = CampaignConfig::new(Lemma::Linanti, vec![free("P5", 12, (1, 2))], 200, 9);
        cfg.workers = Some(workers);
        run_campaign(&cfg).expect("valid config")
    };
    let (one, eight) = (run(1), run(8));
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let picks = sample(&mut rng, one.records.len(), 50).into_vec();
    let mut mismatches = Vec::new();
    for &i in &picks {
        let a = outcome_fields(&one.records[i]);
        let b = outcome_fields(&eight.records[i]);
        let r1 = replay(&one, i).map(|r| outcome_fields(&r.record));
        let r8 = replay(&eight, i).map(|r| outcome_fields(&r.record));
        if a != b || r1.as_ref() != Ok(&a) || r8.as_ref() != Ok(&a) {
            mismatches.push(i);
        }
    }
    Outcome {
        ok: mismatches.is_empty() && one.counts.fail == 0,
        detail: format!(
            "{} records replayed at 1 and 8 workers, {} mismatches {mismatches:?}",
            picks.len(),
            mismatches.len()
        ),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 9] = [
        ("oracle soundness", Duration::from_secs(600), oracles),
        ("Gyárfás vertex and colouring", Duration::from_secs(300), gyarfas),
        ("min-degree core and controlled subgraph", Duration::from_secs(300), core_and_control),
        ("t-broom-free colouring and decomposition", Duration::from_secs(600), tbroom),
        ("vivid blockades", Duration::from_secs(120), vivid),
        ("Erdős–Hajnal steps", Duration::from_secs(300), eh),
        ("broom or anticomplete, covering blockades", Duration::from_secs(900), brooms),
        ("P5 pipeline", Duration::from_secs(1200), p5_pipeline),
        ("determinism", Duration::from_secs(600), determinism),
    ];
    let mut failed = 0;
    for (i, (name, budget, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let took = start.elapsed();
        let ok = o.ok && took <= budget;
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {} ({name}): {} in {:.1}s of {}s: {}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            budget.as_secs(),
            o.detail
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
