//! End-to-end acceptance run: ten criteria, one PASS/FAIL line each.

mod common;

use std::collections::HashSet;
use std::time::Instant;

use domino_snakes::alphabet::{GeneratorAlphabet, Letter};
use domino_snakes::automata::{builtin_skeleton, product, walk_automaton, SkeletonAutomaton, SkeletonKind};
use domino_snakes::certificates::{verify, Certificate, Verdict, Witness};
use domino_snakes::cli;
use domino_snakes::embeddings::{center_embedding, transfer_snake, transform_tileset, Direction};
use domino_snakes::groups::GroupOracle;
use domino_snakes::solvers::{
    enumerate_snakes, solve_infinite_snake, solve_ouroboros, solve_y_snake, Decision, SnakeSearch, SolveBudget,
};
use domino_snakes::tilesets::{fixtures, TilesetGraph};
use domino_snakes::wang::{graph_to_wang, wang_to_graph, DEFAULT_TILE_BUDGET};
use rand::Rng;

use common::*;

/// A certificate together with the instance it claims to answer.
struct Claim {
    cert: Certificate,
    group: GroupOracle,
    tileset: TilesetGraph,
    skeleton: Option<SkeletonAutomaton>,
}

#[derive(Default)]
struct Outcome {
    failures: Vec<String>,
    summary: String,
    transcript: String,
    claims: Vec<Claim>,
}

impl Outcome {
    fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.fail(msg());
        }
    }

    /// Logs a decision and keeps its certificate for criterion 9.
    fn record(&mut self, label: &str, d: &Decision, group: &GroupOracle, g: &TilesetGraph, y: Option<&SkeletonAutomaton>) {
        self.transcript.push_str(&format!("{label}: {}\n", d.verdict));
        if let Some(c) = &d.certificate {
            self.transcript.push_str(&c.to_text());
            self.claims.push(Claim {
                cert: c.clone(),
                group: group.clone(),
                tileset: g.clone(),
                skeleton: y.cloned(),
            });
        }
    }
}

fn z2() -> GroupOracle {
    GroupOracle::free_abelian_standard(2).unwrap()
}

fn f2() -> GroupOracle {
    GroupOracle::free_group(2).unwrap()
}

fn word(a: &GeneratorAlphabet, text: &str) -> Vec<Letter> {
    a.parse_word(text).unwrap()
}

/// Pumping threshold: a walk through more product states than exist repeats
/// a state and closes a cycle.
fn threshold(y: &SkeletonAutomaton, g: &TilesetGraph) -> usize {
    product(y, &walk_automaton(g)).unwrap().state_count()
}

fn criterion_1(timing: &mut Option<f64>) -> Outcome {
    let mut o = Outcome::default();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1.tg");
    std::fs::write(&path, fixtures::fig1().to_text()).unwrap();
    let argv = ["snakes", "solve", "--problem", "infinite-snake", "--group", "zd:2", "--tileset", path.to_str().unwrap()];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let start = Instant::now();
    let code = cli::run_with(argv, &mut out, &mut err);
    let secs = start.elapsed().as_secs_f64();
    *timing = Some(secs);
    let out = String::from_utf8(out).unwrap();
    o.transcript.push_str(&out);
    o.check(code == 0, || format!("exit code {code}"));
    let Some(text) = out.strip_prefix("VERDICT: YES\n") else {
        o.fail(format!("unexpected output {out:?}"));
        return o;
    };
    let cert = Certificate::from_text(text).unwrap();
    let g = fixtures::fig1();
    o.check(verify(&cert, &z2(), &g, None).is_ok(), || "certificate rejected".into());
    match &cert.witness {
        Witness::PeriodicSkeleton(s) => {
            o.check(s.word.len() <= 4, || format!("period {}", s.word.len()));
            o.summary = format!("period {} word `{}`", s.word.len(), s.word.join(" "));
        }
        w => o.fail(format!("witness {}", w.variant())),
    }
    o.check(secs < 1.0, || format!("took {secs:.3}s"));
    o.claims.push(Claim {
        cert,
        group: z2(),
        tileset: g,
        skeleton: None,
    });
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::default();
    let z2 = z2();
    let words: Vec<Vec<Vec<Letter>>> = (0..=6).map(|n| z2_saw_words(n, &z2_letters())).collect();
    let mut rng = rng(2);
    for i in 0..100 {
        let w = random_wang(&mut rng);
        let tiles = w.tiles();
        let matches = |u: usize, l: Letter, v: usize| tiles[u].sides[l.index()] == tiles[v].sides[l.inverse().index()];
        let direct: Vec<u64> = words
            .iter()
            .map(|ws| ws.iter().map(|x| tilings_along(tiles.len(), x, &matches)).sum())
            .collect();
        let graph = wang_to_graph(&w);
        let via_graph = SnakeSearch::new(&z2, &graph).unwrap().count_levels(6);
        o.transcript.push_str(&format!("wang {i}: {direct:?}\n"));
        o.check(direct == via_graph, || format!("wang set {i}: {direct:?} vs {via_graph:?}"));
    }
    let mut tile_total = 0;
    for i in 0..50 {
        let g = random_graph(&mut rng, &ab(), 3, 0.3);
        let adj = adjacency(&g);
        let edge = |u: usize, l: Letter, v: usize| adj[u][l.index()].contains(&v);
        let expected: Vec<u64> = words
            .iter()
            .map(|ws| ws.iter().map(|x| tilings_along(g.tiles().len(), x, &edge)).sum())
            .collect();
        let enc = graph_to_wang(&g, DEFAULT_TILE_BUDGET).unwrap();
        tile_total += enc.tiles.tiles().len();
        let projected: Vec<u64> = words
            .iter()
            .map(|ws| ws.iter().map(|x| projected_wang_count(&enc.tiles, &enc.projection, x)).sum())
            .collect();
        let library = SnakeSearch::new(&z2, &g).unwrap().count_levels(6);
        o.transcript.push_str(&format!("graph {i}: {expected:?} via {} Wang tiles\n", enc.tiles.tiles().len()));
        o.check(expected == projected && expected == library, || {
            format!("graph {i}: {expected:?} vs projected {projected:?} vs library {library:?}")
        });
    }
    o.summary = format!("100 Wang sets and 50 graphs ({tile_total} Wang tiles) agree at lengths 0..=6");
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::default();
    let z2 = z2();
    let budget = SolveBudget {
        max_nodes: 2_000_000,
        ..SolveBudget::with_length(10)
    };
    let mut rng = rng(3);
    let (mut found, mut tried) = (0, 0);
    let mut deepest = 0;
    while found < 100 && tried < 5000 {
        tried += 1;
        let density = rng.gen_range(0.1..0.4);
        let g = random_graph(&mut rng, &ab(), 4, density);
        let d = solve_infinite_snake(&z2, &g, &budget, None).unwrap();
        let Some(Witness::Exhaustion { depth, .. }) = d.witness() else {
            continue;
        };
        let n = *depth;
        found += 1;
        deepest = deepest.max(n);
        o.check(n <= 10, || format!("depth {n} over budget"));
        for m in n..=n + 2 {
            o.check(!z2_snake_exists(&g, m, &z2_letters()), || format!("tileset {tried}: snake of length {m} exists"));
        }
        o.record(&format!("instance {tried}"), &d, &z2, &g, None);
    }
    o.check(found == 100, || format!("only {found} exhaustion instances in {tried} draws"));
    o.summary = format!("{found} NO instances (of {tried} draws, depth up to {deepest}) confirmed at n, n+1, n+2");
    o
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::default();
    let f2 = f2();
    let free = builtin_skeleton(&SkeletonKind::Free(2), f2.alphabet()).unwrap();
    let mut rng = rng(4);
    let mut yes = 0;
    for i in 0..200 {
        let density = rng.gen_range(0.05..0.5);
        let g = random_graph(&mut rng, f2.alphabet(), 4, density);
        let d = solve_infinite_snake(&f2, &g, &SolveBudget::default(), None).unwrap();
        let n = threshold(&free, &g);
        let oracle = free_snake_exists(&g, n);
        let expected = if oracle { Verdict::Yes } else { Verdict::No };
        yes += usize::from(oracle);
        o.check(d.verdict == expected, || format!("tileset {i}: {} vs oracle {expected} at length {n}", d.verdict));
        o.record(&format!("tileset {i}"), &d, &f2, &g, None);
    }
    o.summary = format!("200 tilesets ({yes} YES), no UNKNOWN, no disagreement");
    o
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::default();
    let z2 = z2();
    let al = z2.alphabet();
    let dirs = [("Y2", word(al, "a b")), ("Y3", word(al, "a a^-1 b"))];
    let skeletons: Vec<SkeletonAutomaton> =
        dirs.iter().map(|(_, d)| builtin_skeleton(&SkeletonKind::Directions(d.clone()), al).unwrap()).collect();
    let mut rng = rng(5);
    let mut yes = [0; 2];
    for i in 0..100 {
        let density = rng.gen_range(0.1..0.5);
        let g = random_graph(&mut rng, al, 4, density);
        for (k, ((name, letters), y)) in dirs.iter().zip(&skeletons).enumerate() {
            let d = solve_y_snake(&z2, y, &g, None).unwrap();
            let n = threshold(y, &g);
            let oracle = z2_snake_exists(&g, n, letters);
            yes[k] += usize::from(oracle);
            let expected = if oracle { Verdict::Yes } else { Verdict::No };
            o.check(d.verdict == expected, || format!("{name} tileset {i}: {} vs oracle {expected}", d.verdict));
            o.record(&format!("{name} tileset {i}"), &d, &z2, &g, Some(y));
        }
    }
    o.summary = format!("100 tilesets, Y2 {} YES, Y3 {} YES, no disagreement", yes[0], yes[1]);
    o
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::default();
    let z2 = z2();
    let al = z2.alphabet();
    let geo = builtin_skeleton(&SkeletonKind::ZdGeodesic(2), al).unwrap();
    for (name, g, expected) in [("fig1", fixtures::fig1(), Verdict::Yes), ("pingpong", fixtures::pingpong(), Verdict::No)] {
        let d = solve_y_snake(&z2, &geo, &g, None).unwrap();
        o.check(d.verdict == expected, || format!("{name}: {}", d.verdict));
        o.record(name, &d, &z2, &g, Some(&geo));
    }
    let patterns: Vec<Vec<Letter>> = ["a b", "a b^-1", "a^-1 b", "a^-1 b^-1"].iter().map(|p| word(al, p)).collect();
    let mut rng = rng(6);
    let mut yes = 0;
    for i in 0..100 {
        let density = rng.gen_range(0.1..0.5);
        let g = random_graph(&mut rng, al, 4, density);
        let d = solve_y_snake(&z2, &geo, &g, None).unwrap();
        let n = threshold(&geo, &g);
        let oracle = patterns.iter().any(|p| z2_snake_exists(&g, n, p));
        yes += usize::from(oracle);
        let expected = if oracle { Verdict::Yes } else { Verdict::No };
        o.check(d.verdict == expected, || format!("tileset {i}: {} vs oracle {expected}", d.verdict));
        o.record(&format!("tileset {i}"), &d, &z2, &g, Some(&geo));
    }
    o.summary = format!("fig1 YES, pingpong NO, 100 random tilesets ({yes} YES) agree");
    o
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::default();
    let z2 = z2();
    let loopy = fixtures::loopy();
    let d = solve_ouroboros(&z2, &loopy, &SolveBudget::default(), None).unwrap();
    match d.witness() {
        Some(Witness::Loop(s)) => o.check(s.word == ["a", "b", "a^-1", "b^-1"], || format!("loop `{}`", s.word.join(" "))),
        _ => o.fail(format!("loopy: {}", d.verdict)),
    }
    o.record("loopy", &d, &z2, &loopy, None);

    let f2 = f2();
    let mut rng = rng(7);
    let mut tilesets = vec![fixtures::fig1(), fixtures::loopy()];
    for _ in 0..50 {
        let density = rng.gen_range(0.1..0.9);
        tilesets.push(random_graph(&mut rng, f2.alphabet(), 4, density));
    }
    for (i, g) in tilesets.iter().enumerate() {
        let d = solve_ouroboros(&f2, g, &SolveBudget::default(), None).unwrap();
        o.check(
            d.verdict == Verdict::No && matches!(d.witness(), Some(Witness::Structural { .. })),
            || format!("free tileset {i}: {}", d.verdict),
        );
        o.record(&format!("free tileset {i}"), &d, &f2, g, None);
    }

    let fig1 = fixtures::fig1();
    let d = solve_ouroboros(&z2, &fig1, &SolveBudget::with_length(12), None).unwrap();
    o.check(d.verdict == Verdict::Unknown, || format!("fig1: {}", d.verdict));
    o.transcript.push_str(&format!("fig1: {} after length {}\n", d.verdict, d.spent.max_length_searched));
    let loops: Vec<usize> = (3..=12).filter(|&n| z2_loop_exists(&fig1, n)).collect();
    o.check(loops.is_empty(), || format!("fig1 has loops of lengths {loops:?}"));
    o.summary = format!("loopy square, {} free tilesets structural NO, fig1 UNKNOWN with no loop of length 3..=12", tilesets.len());
    o
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::default();
    let z2 = z2();
    let fig1 = fixtures::fig1();
    let source: Vec<Vec<_>> = (0..=6).map(|n| enumerate_snakes(&z2, &fig1, n, None).unwrap()).collect();
    let instances = [
        ("Z3", GroupOracle::from_descriptor("zd:3:names=x,y,c").unwrap(), "c", "x"),
        ("Heisenberg", GroupOracle::heisenberg(), "Z", "X"),
    ];
    let mut checked = 0;
    for (name, group, g_word, w) in instances {
        let al = group.alphabet().clone();
        let emb = center_embedding(&group, &word(&al, g_word), &word(&al, w)).unwrap();
        o.check(emb.assumptions_checked, || format!("{name}: assumptions unchecked"));
        let m = &emb.transducer;
        let target = transform_tileset(m, &fig1).unwrap();
        for (n, snakes) in source.iter().enumerate() {
            let rooted: HashSet<_> = enumerate_snakes(&emb.target_group, &target, n, None)
                .unwrap()
                .into_iter()
                .filter(|s| m.split_tile(s.scales[0]).1 == m.initial())
                .collect();
            o.check(rooted.len() == snakes.len(), || {
                format!("{name} length {n}: {} rooted target snakes, {} source", rooted.len(), snakes.len())
            });
            for s in snakes {
                checked += 1;
                let f = transfer_snake(m, s, Direction::Forward).unwrap();
                o.check(rooted.contains(&f), || format!("{name}: image of {s:?} is not a target snake"));
                let back = transfer_snake(m, &f, Direction::Backward).unwrap();
                o.check(&back == s, || format!("{name}: backward of {f:?} gave {back:?}"));
            }
            o.transcript.push_str(&format!("{name} length {n}: {}\n", rooted.len()));
        }
    }
    o.summary = format!("{checked} snake transfers across Z3 and Heisenberg, counts equal at lengths 0..=6");
    o
}

/// One wrong value per field; none of them may still verify.
fn corruptions(text: &str, letter: &str) -> Vec<(String, String)> {
    let lines: Vec<&str> = text.lines().collect();
    let flip = |v: &str| match v.chars().next() {
        None => "00".to_string(),
        Some(c) => format!("{}{}", if c == '0' { '1' } else { '0' }, &v[1..]),
    };
    let mut out = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        let (key, value) = line.split_once(':').unwrap();
        let value = value.trim();
        let bad = match key {
            "problem" => if value == "ouroboros" { "reach" } else { "ouroboros" }.to_string(),
            "verdict" => if value == "YES" { "NO" } else { "YES" }.to_string(),
            "variant" => if value == "loop" { "finite-snake" } else { "loop" }.to_string(),
            "word" if value.is_empty() => letter.to_string(),
            "word" => format!("{value} {letter}"),
            "scales" if value.is_empty() => "t0".to_string(),
            "scales" => format!("{value} {}", value.split(' ').next_back().unwrap()),
            "group" => "zd:5".to_string(),
            "tileset-hash" | "fingerprint" | "skeleton" => flip(value),
            "depth" | "seed-position" | "margin" => (value.parse::<u64>().unwrap() + 1).to_string(),
            "seed" => format!("{value}x"),
            "p" | "q" if value == "ε" => letter.to_string(),
            "p" | "q" => format!("{value} {letter}"),
            "reason" => "corrupted".to_string(),
            k => panic!("unexpected key {k}"),
        };
        let mut copy: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
        copy[i] = format!("{key}: {bad}");
        out.push((key.to_string(), copy.join("\n") + "\n"));
    }
    out
}

fn criterion_9(claims: &[Claim]) -> Outcome {
    let mut o = Outcome::default();
    let mut mutants = 0;
    for (i, c) in claims.iter().enumerate() {
        let ok = verify(&c.cert, &c.group, &c.tileset, c.skeleton.as_ref());
        o.check(ok.is_ok(), || format!("certificate {i} rejected: {ok:?}"));
        let letter = c.group.alphabet().generator_names().next().unwrap().to_string();
        for (key, text) in corruptions(&c.cert.to_text(), &letter) {
            mutants += 1;
            if let Ok(bad) = Certificate::from_text(&text) {
                o.check(verify(&bad, &c.group, &c.tileset, c.skeleton.as_ref()).is_err(), || {
                    format!("certificate {i} still accepted with corrupted `{key}`:\n{text}")
                });
            }
        }
    }
    o.summary = format!("{} certificates accepted, {mutants} single-field corruptions all rejected", claims.len());
    o
}

fn run_1_to_8(timing: &mut Option<f64>) -> Vec<Outcome> {
    vec![
        criterion_1(timing),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
    ]
}

fn report(n: usize, o: &Outcome) -> bool {
    if o.failures.is_empty() {
        println!("criterion {n}: PASS ({})", o.summary);
        true
    } else {
        println!("criterion {n}: FAIL ({} problems)", o.failures.len());
        for f in o.failures.iter().take(5) {
            println!("    {f}");
        }
        false
    }
}

fn main() {
    let start = Instant::now();
    let mut timing = None;
    let first = run_1_to_8(&mut timing);
    let mut all = true;
    for (i, o) in first.iter().enumerate() {
        all &= report(i + 1, o);
    }
    if let Some(t) = timing {
        println!("    criterion 1 solve took {:.3}s", t);
    }
    let transcripts: Vec<String> = first.iter().map(|o| o.transcript.clone()).collect();
    let claims: Vec<Claim> = first.into_iter().flat_map(|o| o.claims).collect();
    all &= report(9, &criterion_9(&claims));

    let mut o = Outcome::default();
    for (i, again) in run_1_to_8(&mut None).iter().enumerate() {
        o.check(again.transcript == transcripts[i], || format!("criterion {} output differs between runs", i + 1));
    }
    let bytes: usize = transcripts.iter().map(String::len).sum();
    o.summary = format!("two runs of criteria 1-8 agree on all {bytes} bytes");
    all &= report(10, &o);
    println!("total {:.1}s", start.elapsed().as_secs_f64());
    if !all {
        std::process::exit(1);
    }
}
