//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria that are known to fail print `FAIL (known ...)`; for those the
//! run checks that the failure is exactly the documented one, so an
//! unexpected change in either direction still breaks the build.

use std::collections::{BTreeSet, HashSet};
use std::process::Command;
use std::time::Instant;

use atlas_cli::verify_classical;
use atlas_core::assoc_positive::{associated_system_with, AssociatedSystem, TieOrder};
use atlas_core::root_system::{Family, Root, RootDatum, TypeLabel};
use atlas_core::slice_invariants::{
    bounded_solution_exists, q_from_y, report_for_pair_with, single_cycle_direct, single_cycle_oracle, y_matrix,
    CycleSign,
};
use atlas_core::strata_classical::{
    in_pi_g_image, in_stated_pi_g_image, marked_t2, marked_t2_tilde, phi_w, pi_g, psi_w, q_partitions, symbol_f,
    symbol_f1, t_partitions, weyl_classes, MarkedPartition,
};
use atlas_core::weyl::{classical_representative, from_carter, parse_carter_file, CarterElement, CarterPair};
use atlas_core::DEFAULT_DATA_DIR;
use rayon::prelude::*;

const EXCEPTIONAL: [(&str, usize); 5] = [("G2", 5), ("F4", 19), ("E6", 20), ("E7", 45), ("E8", 74)];

fn classical_labels() -> Vec<TypeLabel> {
    let mut v = vec![];
    for n in 1..=7 {
        v.push(TypeLabel::new(Family::A, n).unwrap());
    }
    for f in [Family::B, Family::C] {
        for n in 2..=6 {
            v.push(TypeLabel::new(f, n).unwrap());
        }
    }
    for n in 3..=6 {
        v.push(TypeLabel::new(Family::D, n).unwrap());
    }
    v
}

/// `|Δ|` from the standard root counts, independent of the root generator.
fn root_count(label: TypeLabel) -> usize {
    let n = label.rank;
    match label.family {
        Family::A => n * (n + 1),
        Family::B | Family::C => 2 * n * n,
        Family::D => 2 * n * (n - 1),
        Family::E => [72, 126, 240][n - 6],
        Family::F => 48,
        Family::G => 12,
    }
}

struct Outcome {
    failures: Vec<String>,
    unexpected: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { failures: vec![], unexpected: vec![] }
    }

    fn line(&mut self, id: &str, title: &str, errors: &[String], detail: &str) {
        let status = if errors.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {id}: {status} {title} ({detail})");
        for e in errors.iter().take(5) {
            println!("    {e}");
        }
        if !errors.is_empty() {
            self.unexpected.push(id.to_string());
        }
    }

    /// A criterion with a documented failure.  `cases` are the offending
    /// cases found; `documented` says whether they are exactly the failure
    /// recorded in the ledger, so any other outcome still counts as
    /// unexpected.
    fn known(&mut self, id: &str, title: &str, cases: &[String], documented: bool, detail: &str) {
        if cases.is_empty() {
            println!("criterion {id}: PASS {title} ({detail})");
            self.unexpected.push(format!("{id} (documented failure no longer occurs)"));
        } else if documented {
            println!("criterion {id}: FAIL (known, see decisions ledger) {title} ({detail}; {} cases)", cases.len());
            for c in cases.iter().take(4) {
                println!("    {c}");
            }
            self.failures.push(id.to_string());
        } else {
            println!("criterion {id}: FAIL {title}: not the documented failure ({detail})");
            for c in cases.iter().take(8) {
                println!("    {c}");
            }
            self.unexpected.push(id.to_string());
        }
    }
}

fn criterion_1(out: &mut Outcome) {
    let exe = env!("CARGO_BIN_EXE_atlas");
    let mut errors = vec![];
    let start = Instant::now();
    for (t, rows) in EXCEPTIONAL {
        let golden = format!("golden/{}.csv", t.to_lowercase());
        let o = Command::new(exe)
            .args(["tables", "--type", t, "--check", &golden])
            .env("ATLAS_DATA_DIR", DEFAULT_DATA_DIR)
            .output()
            .expect("run atlas");
        let stdout = String::from_utf8_lossy(&o.stdout);
        if o.status.code() != Some(0) {
            errors.push(format!("{t}: exit {:?}: {}{}", o.status.code(), stdout.trim(), String::from_utf8_lossy(&o.stderr)));
        } else if !stdout.contains(&format!("{rows} rows match")) {
            errors.push(format!("{t}: expected {rows} rows, got `{}`", stdout.trim()));
        }
    }
    out.line(
        "1",
        "exceptional tables match the golden files",
        &errors,
        &format!("G2 5, F4 19, E6 20, E7 45, E8 74 rows, see decisions ledger for the count; {:.1?}", start.elapsed()),
    );
}

struct ClassRun {
    label: TypeLabel,
    name: String,
    datum_roots: usize,
    elem: CarterElement,
    assoc: AssociatedSystem,
    debug: String,
}

fn run_class(datum: &RootDatum, name: &str, pair: &CarterPair) -> ClassRun {
    let (report, assoc) = report_for_pair_with(datum, name, pair, TieOrder::Lex).unwrap_or_else(|e| panic!("{name}: {e}"));
    let elem = from_carter(datum, pair).unwrap();
    let debug = format!("{report:?}{assoc:?}");
    ClassRun {
        label: datum.label,
        name: name.to_string(),
        datum_roots: datum.num_roots(),
        elem,
        assoc,
        debug,
    }
}

fn exceptional_runs() -> Vec<ClassRun> {
    let mut out = vec![];
    for (t, _) in EXCEPTIONAL {
        let label = TypeLabel::parse(t, None).unwrap();
        let datum = RootDatum::new(label).unwrap();
        let text = std::fs::read_to_string(format!("{DEFAULT_DATA_DIR}/carter/{}.txt", t.to_lowercase())).unwrap();
        let entries = parse_carter_file(&text).unwrap();
        out.par_extend(entries.par_iter().map(|e| {
            let pair = CarterPair::from_indices(&datum, &e.s1, &e.s2).unwrap();
            run_class(&datum, &e.name, &pair)
        }));
    }
    out
}

fn classical_runs() -> Vec<ClassRun> {
    let mut out = vec![];
    for label in classical_labels() {
        let datum = RootDatum::new(label).unwrap();
        out.par_extend(weyl_classes(label).par_iter().map(|spec| {
            let pair = classical_representative(label, spec).unwrap();
            run_class(&datum, &spec.to_string(), &pair)
        }));
    }
    out
}

/// Prints criterion 2 and returns the criterion 4 line for later.
fn criterion_2_and_4(out: &mut Outcome) -> (Vec<String>, String) {
    let start = Instant::now();
    let mut dim_errors = vec![];
    let mut d_errors = vec![];
    let (mut n_dim, mut n_d, mut n_all) = (0, 0, 0);
    for label in classical_labels() {
        for l in verify_classical(label, 0).unwrap() {
            n_all += 1;
            if let Some(z) = l.dim_centralizer {
                n_dim += 1;
                if z != l.dim_sigma {
                    dim_errors.push(format!("{label} {}: dim_sigma {} vs {z}", l.spec, l.dim_sigma));
                }
            }
            if let Some(o) = l.d_oracle {
                n_d += 1;
                if o != l.d {
                    d_errors.push(format!("{label} {}: d {:?} vs oracle {o:?}", l.spec, l.d));
                }
            }
        }
    }
    let t = start.elapsed();
    out.line(
        "2",
        "dim Σ_s equals the centralizer dimension",
        &dim_errors,
        &format!("{n_dim} special classes of {n_all}; A1-A7, B2-B6, C2-C6, D3-D6; {t:.1?}"),
    );
    (d_errors, format!("{n_d} classes with the oracle defined, both orders"))
}

fn criterion_3(out: &mut Outcome) {
    let mut got = BTreeSet::new();
    let mut expected = BTreeSet::new();
    let mut total = 0;
    let ranges = [(Family::A, 2..=9), (Family::B, 2..=8), (Family::C, 2..=8), (Family::D, 3..=8)];
    for (f, ns) in ranges {
        for n in ns {
            let mut items: Vec<(usize, CycleSign)> = (2..=n).map(|k| (k, CycleSign::Positive)).collect();
            if f != Family::A {
                items.extend((2..=2 * n).step_by(2).map(|k| (k, CycleSign::Negative)));
            }
            for (k, sign) in items {
                total += 1;
                let tag = format!("{}{n} {}{k}", f.letter(), if sign == CycleSign::Positive { "+" } else { "-" });
                let o = single_cycle_oracle(f, n, k, sign).unwrap();
                let d = single_cycle_direct(f, n, k, sign).unwrap();
                if o != d {
                    got.insert(format!("{tag}: closed form {o:?}, direct {d:?}"));
                }
                if f != Family::A && sign == CycleSign::Positive && k == 2 {
                    expected.insert(tag);
                }
            }
        }
    }
    let got_tags: BTreeSet<String> = got.iter().map(|g| g.split(':').next().unwrap().to_string()).collect();
    let cases: Vec<String> = got.into_iter().collect();
    out.known(
        "3",
        "single-cycle lengths and fixed types match the closed forms",
        &cases,
        got_tags == expected,
        &format!("{cases_n} cycles over A2-A9, B2-B8, C2-C8, D3-D8; expected failures: the positive 2-cycles of B/C/D, which fix a root", cases_n = total),
    );
}

fn criterion_5(out: &mut Outcome) {
    let start = Instant::now();
    let mut errors = vec![];
    let mut classes = 0;
    for (t, _) in EXCEPTIONAL {
        let label = TypeLabel::parse(t, None).unwrap();
        let datum = RootDatum::new(label).unwrap();
        let text = std::fs::read_to_string(format!("{DEFAULT_DATA_DIR}/carter/{}.txt", t.to_lowercase())).unwrap();
        let entries = parse_carter_file(&text).unwrap();
        let found: Vec<Vec<String>> = entries
            .par_iter()
            .map(|e| {
                let pair = CarterPair::from_indices(&datum, &e.s1, &e.s2).unwrap();
                let (_, _, assoc) = associated_system_with(&datum, &pair, TieOrder::Lex).unwrap();
                let g = y_matrix(&datum, &assoc).unwrap();
                let q = q_from_y(&g);
                let mut errs = vec![];
                for m in (3..=15).step_by(2) {
                    let exists = bounded_solution_exists(&g, m);
                    let predicted = q.is_some_and(|q| m as u64 % q == 0);
                    if exists != predicted {
                        errs.push(format!("{t} {}: q {q:?}, m {m}: solution exists {exists}", e.name));
                    }
                }
                errs
            })
            .collect();
        classes += entries.len();
        errors.extend(found.into_iter().flatten());
    }
    out.line(
        "5",
        "bounded solutions exist exactly when q divides m",
        &errors,
        &format!("{classes} classes, m = 3, 5, ..., 15; {:.1?}", start.elapsed()),
    );
}

fn criterion_6(out: &mut Outcome) {
    let mut errors = vec![];
    let mut literal_off = BTreeSet::new();
    let mut checked = 0;
    for n in 0..=6 {
        for m in marked_t2(2 * n).into_iter().chain(marked_t2_tilde(2 * n)) {
            checked += 1;
            if phi_w(&psi_w(&m)) != m {
                errors.push(format!("Φ∘Ψ moves {m}"));
            }
        }
        let cases = [
            (Family::C, t_partitions(2 * n), marked_t2(2 * n)),
            (Family::B, q_partitions(2 * n + 1), marked_t2(2 * n)),
            (Family::D, q_partitions(2 * n), marked_t2_tilde(2 * n)),
        ];
        for (f, domain, target) in cases {
            let image: Vec<MarkedPartition> = domain.iter().map(|l| pi_g(f, l).unwrap()).collect();
            let set: BTreeSet<MarkedPartition> = image.iter().cloned().collect();
            if set.len() != image.len() {
                errors.push(format!("π^G not injective in type {}{n}", f.letter()));
            }
            let corrected: BTreeSet<MarkedPartition> = target.iter().filter(|m| in_pi_g_image(f, m)).cloned().collect();
            if corrected != set {
                errors.push(format!("π^G image differs from the parity-corrected description in {}{n}", f.letter()));
            }
            for m in &target {
                if in_stated_pi_g_image(f, m) != set.contains(m) {
                    literal_off.insert(format!(
                        "{}{n} {m}: {}",
                        f.letter(),
                        if set.contains(m) { "in the image, rejected" } else { "admitted, not in the image" }
                    ));
                }
            }
        }
        for l in t_partitions(2 * n) {
            let s = symbol_f1(Family::C, &l).unwrap();
            if !(s.in_x(n) && s.satisfies(1, 1)) {
                errors.push(format!("C f1 {l} -> {s}"));
            }
        }
        for l in q_partitions(2 * n + 1) {
            let s = symbol_f1(Family::B, &l).unwrap();
            if !(s.in_x(n) && s.satisfies(0, 2)) {
                errors.push(format!("B f1 {l} -> {s}"));
            }
        }
        for l in q_partitions(2 * n) {
            let s = symbol_f1(Family::D, &l).unwrap();
            if !(s.in_y(n) && s.satisfies(0, 2)) {
                errors.push(format!("D f1 {l} -> {s}"));
            }
        }
        for m in marked_t2(2 * n) {
            let s = symbol_f(Family::C, &m).unwrap();
            if !(s.in_x(n) && s.satisfies(2, 2)) {
                errors.push(format!("F {m} -> {s}"));
            }
        }
        for m in marked_t2_tilde(2 * n) {
            let s = symbol_f(Family::D, &m).unwrap();
            if !(s.in_y(n) && s.satisfies(0, 4)) {
                errors.push(format!("F~ {m} -> {s}"));
            }
        }
    }
    out.line(
        "6",
        "Φ∘Ψ = id, π^G injective onto the parity-corrected set, symbol inequalities",
        &errors,
        &format!("2n ≤ 12, {checked} marked partitions"),
    );
    let witnesses = ["B2 (2,1,1)", "D3 (2,2,1,1)"];
    let documented = witnesses.iter().all(|w| literal_off.iter().any(|g| g.starts_with(w)));
    let cases: Vec<String> = literal_off.into_iter().collect();
    out.known(
        "6'",
        "π^G image equals the literal characterization",
        &cases,
        documented,
        "literal parity condition on even ν*_i; expected witnesses B2 (2,1,1) and D3 (2,2,1,1)",
    );
}

fn structural_errors(run: &ClassRun) -> Vec<String> {
    let mut errs = vec![];
    let tag = format!("{} {}", run.label, run.name);
    let a = &run.assoc;
    let all = root_count(run.label);
    if run.datum_roots != all {
        errs.push(format!("{tag}: |Δ| = {}, expected {all}", run.datum_roots));
    }
    if a.positive_roots.len() * 2 != all {
        errs.push(format!("{tag}: |Δ+| = {}", a.positive_roots.len()));
    }
    let pos: HashSet<&Root> = a.positive_roots.iter().collect();
    let roots: HashSet<Root> = run.assoc.strata.iter().flat_map(|s| s.roots.iter().cloned()).collect();
    for p in &a.positive_roots {
        let neg: Root = p.iter().map(|x| -x).collect();
        if pos.contains(&neg) {
            errs.push(format!("{tag}: both ±{p:?} positive"));
        }
    }
    for x in &a.positive_roots {
        for y in &a.positive_roots {
            let s: Root = x.iter().zip(y).map(|(u, v)| u + v).collect();
            if roots.contains(&s) && !pos.contains(&s) {
                errs.push(format!("{tag}: {x:?} + {y:?} not positive"));
            }
        }
    }
    for g in a.adjusted_gammas.gammas() {
        if !pos.contains(&g) {
            errs.push(format!("{tag}: γ {g:?} not positive"));
        }
    }
    let mut total = 0;
    for st in &a.strata {
        total += st.roots.len();
        let set: HashSet<&Root> = st.roots.iter().collect();
        for r in &st.roots {
            if !set.contains(&run.elem.s.apply(r)) {
                errs.push(format!("{tag}: stratum {} not s-stable at {r:?}", st.subspace));
                break;
            }
        }
    }
    if total != all || roots.len() != all {
        errs.push(format!("{tag}: strata hold {total} roots ({} distinct) of {all}", roots.len()));
    }
    let fixed: HashSet<&Root> = a.fixed_roots.iter().collect();
    let last: HashSet<&Root> = a.fixed_stratum().roots.iter().collect();
    if fixed != last {
        errs.push(format!("{tag}: fixed stratum differs from the fixed roots"));
    }
    errs
}

fn criterion_7(out: &mut Outcome) {
    let start = Instant::now();
    let first: Vec<ClassRun> = exceptional_runs().into_iter().chain(classical_runs()).collect();
    let mut errors: Vec<String> = first.par_iter().flat_map(structural_errors).collect();
    let second: Vec<String> = exceptional_runs().into_iter().chain(classical_runs()).map(|r| r.debug).collect();
    let first_debug: Vec<&String> = first.iter().map(|r| &r.debug).collect();
    if second.iter().collect::<Vec<_>>() != first_debug {
        errors.push("second run differs from the first".into());
    }
    out.line(
        "7",
        "positive-system structure and determinism",
        &errors,
        &format!("{} classes, two runs; {:.1?}", first.len(), start.elapsed()),
    );
}

fn main() {
    let mut out = Outcome::new();
    criterion_1(&mut out);
    let (d_errors, d_detail) = criterion_2_and_4(&mut out);
    criterion_3(&mut out);
    out.line("4", "d equals the block oracle under its hypotheses", &d_errors, &d_detail);
    criterion_5(&mut out);
    criterion_6(&mut out);
    criterion_7(&mut out);
    println!(
        "acceptance: {} known failures {:?}, {} unexpected {:?}",
        out.failures.len(),
        out.failures,
        out.unexpected.len(),
        out.unexpected
    );
    if !out.unexpected.is_empty() {
        std::process::exit(1);
    }
}
