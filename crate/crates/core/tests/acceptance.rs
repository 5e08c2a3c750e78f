//! Acceptance run: one line per criterion, non-zero exit if any fails.

mod common;

use std::collections::BTreeMap;
use std::process::Command;
use std::sync::Arc;

use ncreg::algebra::GradedAlgebra;
use ncreg::corpus::Corpus;
use ncreg::field::PrimeField;
use ncreg::graded::ExtInt;
use ncreg::groebner::Budget;
use ncreg::harness::{verify, FullReport, Outcome, Suite, VerifyOptions};
use ncreg::module::ModulePresentation;
use ncreg::regularity::{Window, Workbench};

type Check = Result<String, String>;

fn workbench(corpus: &Corpus, name: &str) -> Workbench<PrimeField> {
    let entry = corpus.entry(name).unwrap();
    let pres = corpus.presentation(entry).unwrap();
    let alg = GradedAlgebra::new(
        &pres,
        PrimeField::new(32003),
        entry.max_deg as u32,
        &Budget::default(),
    )
    .unwrap();
    Workbench::new(
        Arc::new(alg),
        Window {
            max_hom: entry.max_hom,
            max_deg: entry.max_deg,
        },
    )
}

fn names(corpus: &Corpus) -> Vec<String> {
    corpus
        .manifest
        .algebras
        .iter()
        .map(|a| a.name.clone())
        .collect()
}

fn no_failures(report: &FullReport, suite: Suite) -> Result<(usize, usize, usize), String> {
    let r = report.report(suite).ok_or("suite missing")?;
    let t = r.tally();
    let failed: Vec<_> = r
        .records
        .iter()
        .filter(|x| x.outcome == Outcome::Fail)
        .map(|x| format!("{}/{}", x.algebra, x.instance))
        .collect();
    if !failed.is_empty() {
        return Err(format!("failures: {}", failed.join(", ")));
    }
    Ok((t.pass, t.inconclusive, t.vacuous))
}

fn c1(corpus: &Corpus) -> Check {
    for name in names(corpus) {
        let wb = workbench(corpus, &name);
        let cm = wb
            .cm_regularity(&ModulePresentation::trivial(wb.algebra()))
            .map_err(|e| e.to_string())?;
        let a = wb
            .resolve(&ModulePresentation::free(vec![0]))
            .map_err(|e| e.to_string())?;
        let ext = wb.ext_regularity(&a);
        if cm.value.value != ExtInt::Finite(0) || !cm.value.certified() {
            return Err(format!("{name}: CM.reg k = {}", cm.value));
        }
        if ext.value != ExtInt::Finite(0) || !ext.certified() {
            return Err(format!("{name}: Ext.reg A = {ext}"));
        }
    }
    Ok(format!("{} algebras", names(corpus).len()))
}

fn c2(corpus: &Corpus) -> Check {
    let types = [
        ("poly2", 2, 2),
        ("poly3", 3, 3),
        ("quantum_plane_q2", 2, 2),
        ("exterior2", 0, -2),
        ("dual_numbers", 0, -1),
        ("cubic_as3", 3, 4),
    ];
    for (name, d, l) in types {
        let wb = workbench(corpus, name);
        if wb.classify().verdict.type_dl() != Some((d as usize, l)) {
            return Err(format!(
                "{name}: type {:?}",
                wb.classify().verdict.type_dl()
            ));
        }
        let cm = wb
            .cm_regularity(&ModulePresentation::free(vec![0]))
            .map_err(|e| e.to_string())?;
        if cm.value.value != ExtInt::Finite(d - l) || !cm.value.certified() {
            return Err(format!(
                "{name}: CM.reg A = {} but d - l = {}",
                cm.value,
                d - l
            ));
        }
    }
    Ok("6 algebras".into())
}

fn c3(report: &FullReport, corpus: &Corpus) -> Check {
    let (pass, inc, _) = no_failures(report, Suite::Jorgensen)?;
    let r = report.report(Suite::Jorgensen).unwrap();
    for name in names(corpus) {
        let n = r.records.iter().filter(|x| x.algebra == name).count();
        if n < 22 {
            return Err(format!("{name}: only {n} modules"));
        }
    }
    Ok(format!(
        "{pass} certified, {inc} only bounded, 0 violations"
    ))
}

fn c4(report: &FullReport) -> Check {
    no_failures(report, Suite::CmEqualsExt)?;
    let r = report.report(Suite::CmEqualsExt).unwrap();
    let mut equal: BTreeMap<&str, usize> = BTreeMap::new();
    for x in &r.records {
        if x.outcome == Outcome::Pass && x.instance.starts_with('M') {
            *equal.entry(x.algebra.as_str()).or_default() += 1;
        }
    }
    for name in ["poly2", "poly3", "quantum_plane_q2"] {
        let n = equal.get(name).copied().unwrap_or(0);
        if n < 20 {
            return Err(format!("{name}: equality on {n} modules"));
        }
    }
    for (name, inst) in [("exterior2", "A"), ("cubic_as3", "k")] {
        let w = r
            .records
            .iter()
            .find(|x| x.algebra == name)
            .ok_or(format!("{name}: no record"))?;
        if w.instance != inst || w.outcome != Outcome::Pass {
            return Err(format!("{name}: witness {} {:?}", w.instance, w.outcome));
        }
    }
    Ok(format!(
        "equality counts {equal:?}; witnesses exterior2/A, cubic_as3/k"
    ))
}

fn c5(report: &FullReport) -> Check {
    let (pass, _, vac) = no_failures(report, Suite::StandardRegular)?;
    let r = report.report(Suite::StandardRegular).unwrap();
    for name in ["exterior2", "dual_numbers"] {
        let x = r
            .records
            .iter()
            .find(|x| x.algebra == name)
            .ok_or("missing")?;
        if x.outcome != Outcome::Vacuous {
            return Err(format!("{name}: {:?}", x.outcome));
        }
    }
    if r.records.iter().any(|x| x.outcome == Outcome::Inconclusive) {
        return Err("inconclusive records".into());
    }
    Ok(format!("{pass} pass, {vac} vacuous"))
}

fn all_pass(report: &FullReport, suite: Suite) -> Result<usize, String> {
    let (pass, inc, vac) = no_failures(report, suite)?;
    if inc + vac > 0 || pass == 0 {
        return Err(format!("{} pass, {inc} inconclusive, {vac} vacuous", pass));
    }
    Ok(pass)
}

fn c6(report: &FullReport) -> Check {
    let a = all_pass(report, Suite::Romer)?;
    let b = all_pass(report, Suite::AuslanderBuchsbaum)?;
    Ok(format!("{a} + {b} modules"))
}

fn c7() -> Check {
    let run = common::oracle_equivalence();
    if !run.mismatches.is_empty() {
        return Err(run.mismatches.join("; "));
    }
    Ok(format!(
        "{} tables, {} skipped",
        run.compared,
        run.skipped.len()
    ))
}

fn c8(report: &FullReport) -> Check {
    Ok(format!("{} resolutions", all_pass(report, Suite::Euler)?))
}

fn c9(corpus: &Corpus) -> Check {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_ncreg"))
            .args([
                "verify", "--suite", "all", "--seed", "42", "--format", "json", "--corpus",
            ])
            .arg(&corpus.dir)
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    if a.stdout.is_empty() || a.stdout != b.stdout {
        return Err("reports differ".into());
    }
    Ok(format!(
        "{} identical bytes, exit {:?}",
        a.stdout.len(),
        a.status.code()
    ))
}

fn c10(corpus: &Corpus) -> Check {
    let ext = workbench(corpus, "exterior2");
    let t = ext.resolution_of_k().betti_table();
    for i in 0..=6usize {
        if t.get(i, i as i64) != i as u64 + 1 {
            return Err(format!("exterior2: beta_{i},{i} = {}", t.get(i, i as i64)));
        }
    }
    let poly = workbench(corpus, "poly3");
    let res = poly.resolution_of_k();
    let t = res.betti_table();
    let diag: Vec<u64> = (0..=4usize).map(|i| t.get(i, i as i64)).collect();
    if diag != [1, 3, 3, 1, 0] || t.entries.len() != 4 || !res.is_terminated() {
        return Err(format!("poly3: {diag:?}"));
    }
    Ok("exterior2 (1..7), poly3 (1, 3, 3, 1) terminated".into())
}

fn main() {
    let corpus = Corpus::load(common::corpus_dir()).expect("corpus");
    let opts = VerifyOptions {
        seed: Some(42),
        ..VerifyOptions::default()
    };
    let report = verify(&corpus, &opts).expect("verify");
    let results: Vec<(&str, Check)> = vec![
        ("CM.reg k = 0 and Ext.reg A = 0", c1(&corpus)),
        ("CM.reg A = d - l", c2(&corpus)),
        ("Jorgensen bounds", c3(&report, &corpus)),
        ("CM.reg = Ext.reg iff Koszul AS-regular", c4(&report)),
        ("Koszul standard Gorenstein is regular", c5(&report)),
        ("Romer and Auslander-Buchsbaum", c6(&report)),
        ("dense oracle equivalence", c7()),
        ("Euler characteristic", c8(&report)),
        ("deterministic verify", c9(&corpus)),
        ("Betti tables of k", c10(&corpus)),
    ];
    let mut failed = 0;
    for (i, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
