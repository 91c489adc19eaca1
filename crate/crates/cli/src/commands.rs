use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use shiftaut::boundary::{
    boundary_report, default_free_pair, measure_collapse, minimality_experiment, proximal_code, proximality_experiment,
    relation_search, BoundaryError, BoundaryParams, Generator, Truncation,
};
use shiftaut::codes::{swap_perm, SlidingBlockCode1D};
use shiftaut::dsl::{
    parse_bar_point, parse_bi_configuration, parse_measure, parse_omega_point, parse_scheme, parse_zd_descriptor,
    DslError,
};
use shiftaut::lattice::{
    basis_mk, coset_injectivity_threshold, min_norm_uk, phi_k, radical_reduction_check, reduction_at, LatticeError,
    ReductionVerdict, SlidingBlockCodeZd,
};
use shiftaut::marker::MarkerScheme;
use shiftaut::symbolic::{Alphabet, BarOmegaPoint};

use crate::args::{Cli, Command, ReportCommand, Sampling, ZdCommand};
use crate::report::{Document, Failure};

type Outcome = Result<Document, Failure>;

fn value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        file: Some(path.display().to_string()),
        ..Failure::usage("io-error", e.to_string())
    })
}

fn located(path: Option<&Path>, e: DslError) -> Failure {
    Failure {
        file: path.map(|p| p.display().to_string()),
        line: Some(e.line),
        column: Some(e.column),
        ..Failure::usage(e.code.as_str(), e.message)
    }
}

fn load_scheme(path: &Path) -> Result<MarkerScheme, Failure> {
    parse_scheme(&read(path)?).map_err(|e| located(Some(path), e))
}

fn load_bar(path: &Path) -> Result<BarOmegaPoint, Failure> {
    parse_bar_point(&read(path)?).map_err(|e| located(Some(path), e))
}

fn load_zd(path: &Path) -> Result<SlidingBlockCodeZd, Failure> {
    let desc = parse_zd_descriptor(&read(path)?).map_err(|e| located(Some(path), e))?;
    desc.build().map_err(|e| Failure::usage("bad-descriptor", e.to_string()))
}

fn alphabet(n: usize) -> Result<Alphabet, Failure> {
    Alphabet::new(n).map_err(|e| Failure::usage("bad-alphabet", e.to_string()))
}

fn boundary(e: BoundaryError) -> Failure {
    match e {
        BoundaryError::BadParameter(m) => Failure::usage("bad-parameter", m),
        e => Failure::runtime(e.to_string()),
    }
}

fn lattice(e: LatticeError) -> Failure {
    match e {
        LatticeError::BadParameter(m) => Failure::usage("bad-parameter", m),
        e @ LatticeError::InjectivityRadiusInsufficient { .. } => {
            Failure { code: "injectivity-radius-insufficient".into(), ..Failure::runtime(e.to_string()) }
        }
        e => Failure::runtime(e.to_string()),
    }
}

fn compile(s: &MarkerScheme) -> Result<SlidingBlockCode1D, Failure> {
    s.compile().map_err(|e| Failure { code: "unverified-scheme".into(), ..Failure::runtime(e.to_string()) })
}

pub fn run(cli: &Cli) -> Outcome {
    let seed = cli.seed;
    match &cli.command {
        Command::Verify { scheme } => verify(scheme, seed),
        Command::Apply { scheme, config, inverse } => apply(scheme, config, *inverse, seed),
        Command::Act { scheme, omega } => act(scheme, omega, seed),
        Command::Proximality { k, m, sample } => proximality(*k, *m, sample, seed),
        Command::Minimality { k, source, target } => minimality(*k, source, target, seed),
        Command::Collapse { measure, budget } => collapse(measure, *budget, seed),
        Command::Freeness { g, h, max_len, alphabet, budget } => {
            freeness(g.as_deref(), h.as_deref(), *max_len, *alphabet, *budget, seed)
        }
        Command::Zd { command } => zd(command, seed),
        Command::Report { command: ReportCommand::Boundary { alphabet: n, depth, k_max, m_max, budget } } => {
            let params = BoundaryParams {
                seed,
                depth: *depth,
                k_max: *k_max,
                m_max: *m_max,
                budget: *budget,
                ..BoundaryParams::default()
            };
            let report = boundary_report(alphabet(*n)?, &params).map_err(boundary)?;
            let mut doc = Document::new("report boundary", json!({ "alphabet": n, "params": value(&params) }), seed);
            doc.fail_unless(report.passed);
            doc.truncation = value(&report.proximality.truncation);
            doc.witnesses = report.faithfulness.iter().map(value).collect();
            doc.results.push(value(&report));
            Ok(doc)
        }
    }
}

fn verify(path: &Path, seed: u64) -> Outcome {
    let s = load_scheme(path)?;
    let v = s.verify();
    let mut doc = Document::new("verify", json!({ "scheme": path.display().to_string() }), seed);
    doc.fail_unless(v.is_ok());
    doc.results.push(json!({
        "alphabet": s.alphabet().size(),
        "rules": s.rules().len(),
        "status": if v.is_ok() { "ok" } else { "violation" },
        "violations": v.violations.len(),
    }));
    doc.witnesses = v.violations.iter().map(value).collect();
    Ok(doc)
}

fn apply(path: &Path, config: &str, inverse: bool, seed: u64) -> Outcome {
    let s = load_scheme(path)?;
    let x = parse_bi_configuration(config, Some(s.alphabet())).map_err(|e| located(None, e))?;
    let s = if inverse { s.invert().map_err(|e| Failure::runtime(e.to_string()))? } else { s };
    let g = compile(&s)?;
    let y = g.apply(&x);
    let params = json!({ "scheme": path.display().to_string(), "config": config, "inverse": inverse });
    let mut doc = Document::new("apply", params, seed);
    doc.results.push(json!({ "input": x.to_string(), "output": y.to_string(), "radius": g.radius() }));
    Ok(doc)
}

fn act(path: &Path, omega: &str, seed: u64) -> Outcome {
    let s = load_scheme(path)?;
    let w = parse_omega_point(omega, Some(s.alphabet())).map_err(|e| located(None, e))?;
    let g = compile(&s)?;
    let image = g.act_omega(&w).map_err(|e| Failure::runtime(e.to_string()))?;
    let mut doc = Document::new("act", json!({ "scheme": path.display().to_string(), "omega": omega }), seed);
    doc.results.push(json!({
        "input": w.to_string(),
        "image": image.to_string(),
        "distance": value(w.distance(&image)),
        "in_g_star": g.in_g_star(),
    }));
    Ok(doc)
}

fn proximality(k: (usize, usize), m: (usize, usize), sample: &Sampling, seed: u64) -> Outcome {
    let a = alphabet(sample.alphabet)?;
    if k.0 < 2 {
        return Err(Failure::usage("bad-parameter", "proximal maps need k >= 2"));
    }
    let trunc = Truncation::new(a, sample.depth, sample.samples, seed);
    let report = proximality_experiment(m, k, a, &trunc).map_err(boundary)?;
    let params = json!({ "k": [k.0, k.1], "m": [m.0, m.1], "alphabet": sample.alphabet });
    let mut doc = Document::new("proximality", params, seed);
    doc.fail_unless(report.passed());
    doc.truncation = value(&report.truncation);
    doc.witnesses = report.cells.iter().filter(|c| !c.passed()).map(value).collect();
    doc.results = report.cells.iter().map(value).collect();
    Ok(doc)
}

fn minimality(k: usize, source: &Path, target: &Path, seed: u64) -> Outcome {
    if k < 1 {
        return Err(Failure::usage("bad-parameter", "k must be at least 1"));
    }
    let x = load_bar(source)?;
    let y = load_bar(target)?;
    let report = minimality_experiment(&x, &y, 1..=k).map_err(boundary)?;
    let params = json!({ "k": k, "source": source.display().to_string(), "target": target.display().to_string() });
    let mut doc = Document::new("minimality", params, seed);
    doc.fail_unless(report.passed());
    doc.results = report.steps.iter().map(value).collect();
    doc.witnesses = report
        .steps
        .iter()
        .filter(|s| s.agreement.iter().any(|d| d.is_some_and(|d| d <= s.k)))
        .map(value)
        .collect();
    Ok(doc)
}

fn collapse(path: &Path, budget: u32, seed: u64) -> Outcome {
    let mu = parse_measure(&read(path)?).map_err(|e| located(Some(path), e))?;
    let report = measure_collapse(&mu, budget).map_err(boundary)?;
    let mut doc = Document::new("collapse", json!({ "measure": path.display().to_string(), "budget": budget }), seed);
    doc.fail_unless(report.collapsed);
    doc.results.push(value(&report));
    Ok(doc)
}

/// Parses `f1*f2*..`, each factor `prox:K`, `prox:K@T`, `shift:M`,
/// `perm:A-B` or a scheme path, into a code with its inverse.
fn generator(text: &str, a: Alphabet) -> Result<Generator, Failure> {
    let bad = |m: String| Failure::usage("bad-generator", m);
    let mut acc: Option<(SlidingBlockCode1D, SlidingBlockCode1D)> = None;
    for factor in text.split('*') {
        let factor = factor.trim();
        let (code, inv) = if let Some(rest) = factor.strip_prefix("prox:") {
            let (k, t) = rest.split_once('@').unwrap_or((rest, "0"));
            let k: usize = k.parse().map_err(|_| bad(format!("bad k in `{factor}`")))?;
            let t: u8 = t.parse().map_err(|_| bad(format!("bad target in `{factor}`")))?;
            let g = proximal_code(k, a, t).map_err(boundary)?;
            (g.clone(), g)
        } else if let Some(rest) = factor.strip_prefix("shift:") {
            let m: i64 = rest.parse().map_err(|_| bad(format!("bad shift in `{factor}`")))?;
            (SlidingBlockCode1D::shift(a, m), SlidingBlockCode1D::shift(a, -m))
        } else if let Some(rest) = factor.strip_prefix("perm:") {
            let (x, y) = rest.split_once('-').ok_or_else(|| bad(format!("expected perm:A-B, got `{factor}`")))?;
            let x: u8 = x.parse().map_err(|_| bad(format!("bad symbol in `{factor}`")))?;
            let y: u8 = y.parse().map_err(|_| bad(format!("bad symbol in `{factor}`")))?;
            if !a.contains(x) || !a.contains(y) {
                return Err(bad(format!("`{factor}` leaves the alphabet")));
            }
            let g = SlidingBlockCode1D::symbol_perm(a, swap_perm(a, x, y)).map_err(|e| bad(e.to_string()))?;
            (g.clone(), g)
        } else if factor.ends_with(".scheme") {
            let s = load_scheme(Path::new(factor))?;
            if s.alphabet() != a {
                return Err(bad(format!("`{factor}` is over {} symbols, expected {}", s.alphabet().size(), a.size())));
            }
            let inv = s.invert().map_err(|e| Failure::runtime(e.to_string()))?;
            (compile(&s)?, compile(&inv)?)
        } else {
            return Err(bad(format!("unknown factor `{factor}`")));
        };
        acc = Some(match acc {
            None => (code, inv),
            Some((c, i)) => (c.compose(&code), inv.compose(&i)),
        });
    }
    let (code, inverse) = acc.expect("split yields a factor");
    Ok(Generator::new(text, code, inverse))
}

fn freeness(g: Option<&str>, h: Option<&str>, max_len: usize, n: usize, budget: u64, seed: u64) -> Outcome {
    let a = alphabet(n)?;
    let (g, h) = match (g, h) {
        (None, None) => default_free_pair(a).map_err(boundary)?,
        (Some(g), Some(h)) => (generator(g, a)?, generator(h, a)?),
        _ => return Err(Failure::usage("bad-generator", "give both --g and --h, or neither")),
    };
    let report = relation_search(&g, &h, max_len, budget, seed).map_err(boundary)?;
    let params = json!({ "g": g.name, "h": h.name, "max_len": max_len, "alphabet": n, "budget": budget });
    let mut doc = Document::new("freeness", params, seed);
    doc.fail_unless(report.relations().next().is_none() && report.unresolved().next().is_none());
    doc.witnesses = report.relations().chain(report.unresolved()).map(value).collect();
    doc.truncation = json!({ "max_len": max_len, "candidates": report.candidates, "budget": budget });
    doc.results = report.entries.iter().map(value).collect();
    Ok(doc)
}

fn zd(command: &ZdCommand, seed: u64) -> Outcome {
    match command {
        ZdCommand::Norm { d, k, bound } => {
            let m = min_norm_uk(*d, *k, *bound).map_err(lattice)?;
            let mut doc = Document::new("zd norm", json!({ "d": d, "k": k, "bound": bound }), seed);
            doc.fail_unless(m.value >= *k);
            doc.witnesses.push(value(&m.witness));
            doc.results.push(value(&m));
            Ok(doc)
        }
        ZdCommand::Threshold { d, k, rho_max } => {
            let t = coset_injectivity_threshold(*d, *k, *rho_max).map_err(lattice)?;
            let basis = basis_mk(*d, *k).map_err(lattice)?;
            let mut doc = Document::new("zd threshold", json!({ "d": d, "k": k, "rho_max": rho_max }), seed);
            if let Some((p, q)) = &t.witness {
                let diff: Vec<i64> = p.iter().zip(q).map(|(a, b)| a - b).collect();
                doc.fail_unless(basis.in_uk(&diff));
                doc.witnesses.push(json!({ "p": p, "q": q, "difference": diff }));
            }
            doc.results.push(value(&t));
            Ok(doc)
        }
        ZdCommand::Phik { descriptor, k } => {
            let g = load_zd(descriptor)?;
            let basis = basis_mk(g.d(), *k).map_err(lattice)?;
            let phi = phi_k(&g, &basis);
            let shift = phi.is_shift().map_err(|e| Failure::runtime(e.to_string()))?;
            let params = json!({ "descriptor": descriptor.display().to_string(), "k": k });
            let mut doc = Document::new("zd phik", params, seed);
            doc.results.push(json!({
                "label": phi.describe(),
                "d": g.d(),
                "source_radius": g.radius(),
                "radius": phi.radius(),
                "shift": shift,
            }));
            Ok(doc)
        }
        ZdCommand::Reduce { descriptor, k } => {
            let g = load_zd(descriptor)?;
            let verdict = match k {
                Some(k) => reduction_at(&g, *k),
                None => radical_reduction_check(&g),
            }
            .map_err(lattice)?;
            let params = json!({ "descriptor": descriptor.display().to_string(), "k": k });
            let mut doc = Document::new("zd reduce", params, seed);
            match &verdict {
                ReductionVerdict::Shift { t, .. } => doc.witnesses.push(json!({ "t": t })),
                ReductionVerdict::NotAShift { certificate, .. } => doc.witnesses = certificate.iter().map(value).collect(),
            }
            doc.results.push(value(&verdict));
            Ok(doc)
        }
    }
}
