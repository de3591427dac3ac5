use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use forge_core::compiler::{self, pstring_spec};
use forge_core::dtiwi::{
    decide_bruteforce, decide_via_circuits, padding_transform, required_k_for_epsilon,
    speedup_schedule, tradeoff_table, translation_transform, BoundExpr, DtiwiInstance,
    InstanceKind, TradeoffRow,
};
use forge_core::encoders::{
    self, clique_by_subsets, clique_gadget_circuit, decode_vertices, vertex_bits, CliqueGraph,
};
use forge_core::{selftest, Circuit, Cnf, Discipline, PString, SatVerdict, SolveOptions, Verdict};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::util::{fmt_rational, load_circuit, load_machine, load_pstring, read_text, OrDomain};
use crate::Outcome;

const FOUND: u8 = 10;
const NOT_FOUND: u8 = 20;

fn verdict_code(yes: bool) -> u8 {
    if yes {
        FOUND
    } else {
        NOT_FOUND
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Accept => "accept",
        Verdict::Reject => "reject",
        Verdict::Timeout => "timeout",
    }
}

pub fn tm_run(machine: &str, input: &str, bound: u64, trace: bool) -> Result<Outcome> {
    let m = load_machine(machine)?;
    let input = if Path::new(input).is_file() {
        read_text(Path::new(input))?.trim().to_string()
    } else {
        input.to_string()
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    let result = if trace {
        let tableau = m.run_trace_str(&input, bound).or_domain()?;
        for (t, cfg) in tableau.rows.iter().enumerate() {
            let tape: String = cfg.tape.iter().map(|&s| m.alphabet()[s]).collect();
            let state = &m.states()[cfg.state];
            writeln!(text, "{t:>4} {state:<12} {:>3} {tape}", cfg.head)?;
            rows.push(json!({"t": t, "state": state, "head": cfg.head, "tape": tape}));
        }
        tableau.result
    } else {
        m.run_str(&input, bound).or_domain()?
    };
    writeln!(
        text,
        "{} after {} steps",
        verdict_name(result.verdict),
        result.steps
    )?;
    let mut doc = json!({"verdict": verdict_name(result.verdict), "steps": result.steps});
    if trace {
        doc["trace"] = Value::Array(rows);
    }
    Ok(Outcome {
        code: 0,
        text,
        json: doc,
    })
}

pub fn compile(
    machine: &str,
    input: &str,
    expose: usize,
    bound: usize,
    raw: bool,
    output: Option<&Path>,
    as_text: bool,
) -> Result<Outcome> {
    let m = load_machine(machine)?;
    let x = load_pstring(input)?;
    let spec = pstring_spec(&m, &x, expose, bound).or_domain()?;
    let c = if raw {
        compiler::compile(&spec)
    } else {
        compiler::compile_folded(&spec)
    }
    .or_domain()?;
    let stats = c.stats();
    if let Some(path) = output {
        let bytes = if as_text {
            c.to_text().into_bytes()
        } else {
            c.serialize()
        };
        std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
    }
    let text = format!(
        "gates {}  inputs {}  depth {}  nodes {}\n",
        stats.m,
        stats.inputs,
        stats.depth,
        c.nodes().len()
    );
    Ok(Outcome {
        code: 0,
        text,
        json: json!({"stats": stats, "nodes": c.nodes().len(), "raw": raw}),
    })
}

pub fn solve(path: &Path, lenient: bool, jobs: usize) -> Result<Outcome> {
    let c = load_circuit(path)?;
    let discipline = if lenient {
        Discipline::Lenient
    } else {
        Discipline::Strict
    };
    let out = forge_core::solve(&c, SolveOptions { jobs, discipline }).or_domain()?;
    let (text, witness) = match &out.verdict {
        SatVerdict::Sat(w) => (format!("SAT {w}\n"), Some(w.to_string())),
        SatVerdict::Unsat => ("UNSAT\n".to_string(), None),
    };
    Ok(Outcome {
        code: verdict_code(witness.is_some()),
        text,
        json: json!({
            "sat": witness.is_some(),
            "witness": witness,
            "evaluations": out.evaluations,
            "stats": c.stats(),
        }),
    })
}

pub fn decide(manifest: &Path, input: &str, via_circuits: bool, jobs: usize) -> Result<Outcome> {
    let inst = DtiwiInstance::load_manifest(manifest).or_domain()?;
    let x = load_pstring(input)?;
    decide_instance(&inst, &x, via_circuits, jobs)
}

fn decide_instance(
    inst: &DtiwiInstance,
    x: &PString,
    via_circuits: bool,
    jobs: usize,
) -> Result<Outcome> {
    let (member, json) = if via_circuits {
        let r = decide_via_circuits(inst, x, None, jobs).or_domain()?;
        (r.member, serde_json::to_value(&r)?)
    } else {
        let r = decide_bruteforce(inst, x).or_domain()?;
        (r.member, serde_json::to_value(&r)?)
    };
    let mut text = format!(
        "{}: {}\n",
        inst.name,
        if member { "member" } else { "not a member" }
    );
    if let Some(filling) = json.get("filling").and_then(Value::as_str) {
        writeln!(text, "filling {filling:?}")?;
    }
    if let Some(hit) = json.get("hit").and_then(Value::as_array) {
        writeln!(
            text,
            "circuit C_{} satisfied by {:?}",
            hit[0],
            hit[1].as_str().unwrap_or("")
        )?;
    }
    Ok(Outcome {
        code: verdict_code(member),
        text,
        json: json!({"instance": inst.name, "input": x.to_string(), "report": json}),
    })
}

/// Splits `key=<expr>` pairs on commas outside parentheses.
fn parse_assignments(src: &str) -> Result<Vec<(String, BoundExpr)>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in src.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&src[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&src[start..]);
    parts
        .into_iter()
        .map(|p| {
            let Some((k, v)) = p.split_once('=') else {
                bail!("expected key=<expr>, got {p:?}");
            };
            Ok((
                k.trim().to_string(),
                BoundExpr::parse(v.trim()).or_domain()?,
            ))
        })
        .collect()
}

/// Rewrites `key:` lines of a manifest, appending keys it lacked.
fn rewrite_manifest(src: &str, changes: &[(&str, String)]) -> String {
    let mut out = String::new();
    let mut done = vec![false; changes.len()];
    for line in src.lines() {
        let key = line.split_once(':').map(|(k, _)| k.trim());
        match changes.iter().position(|(k, _)| Some(*k) == key) {
            Some(i) if !done[i] => {
                out.push_str(&format!("{}: {}\n", changes[i].0, changes[i].1));
                done[i] = true;
            }
            _ => {
                out.push_str(line);
                out.push('\n');
            }
        }
    }
    for (i, (k, v)) in changes.iter().enumerate() {
        if !done[i] {
            out.push_str(&format!("{k}: {v}\n"));
        }
    }
    out
}

pub fn transform(
    manifest: &Path,
    pad: Option<&str>,
    translate: Option<&str>,
    input: Option<&str>,
    output: Option<&Path>,
) -> Result<Outcome> {
    let src = read_text(manifest)?;
    let inst = DtiwiInstance::load_manifest(manifest).or_domain()?;
    let (derived, manifest_text, mut x) = if let Some(spec) = pad {
        let pairs = parse_assignments(spec)?;
        let [(key, f)] = pairs.as_slice() else {
            bail!("--pad takes exactly one f=<expr>");
        };
        if key != "f" {
            bail!("--pad expects f=<expr>, got {key:?}");
        }
        let (padded, codec) = padding_transform(&inst, f).or_domain()?;
        let x = match input {
            Some(s) => Some(codec.pad(&load_pstring(s)?).or_domain()?),
            None => None,
        };
        // each `pad:` line wraps once more, so append rather than replace
        let text = format!("{}pad: {f}\n", rewrite_manifest(&src, &[]));
        (padded, text, x)
    } else {
        let spec = translate.expect("clap requires one of --pad, --translate");
        let pairs = parse_assignments(spec)?;
        let [(k1, w), (k2, w_prime)] = pairs.as_slice() else {
            bail!("--translate takes w=<expr>,w'=<expr>");
        };
        if k1 != "w" || k2 != "w'" {
            bail!("--translate expects keys w and w', got {k1:?} and {k2:?}");
        }
        let derived = translation_transform(&inst, w, w_prime).or_domain()?;
        let InstanceKind::Direct { universe, .. } = &derived.kind else {
            unreachable!("translation yields a direct instance")
        };
        let text = rewrite_manifest(
            &src,
            &[
                ("name", derived.name.clone()),
                ("universe", universe.to_string()),
                ("witness", w.to_string()),
            ],
        );
        let x = input.map(load_pstring).transpose()?;
        (derived, text, x)
    };
    if let Some(path) = output {
        std::fs::write(path, &manifest_text)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let mut text = format!(
        "instance {}\nuniverse {}\n",
        derived.name,
        derived.universe()
    );
    let mut doc = json!({
        "instance": derived.name,
        "universe": derived.universe().to_string(),
        "manifest": manifest_text,
    });
    if let Some(x) = x.take() {
        let d = decide_bruteforce(&derived, &x).or_domain()?;
        writeln!(
            text,
            "input {x}: {}",
            if d.member { "member" } else { "not a member" }
        )?;
        doc["input"] = json!(x.to_string());
        doc["member"] = json!(d.member);
    }
    if output.is_none() {
        text.push_str("---\n");
        text.push_str(&manifest_text);
    }
    Ok(Outcome {
        code: 0,
        text,
        json: doc,
    })
}

fn rational_mode() -> Result<bool> {
    match std::env::var("FORGE_PRECISION").as_deref() {
        Err(_) | Ok("rational") | Ok("") => Ok(true),
        Ok("float") => Ok(false),
        Ok(other) => bail!("FORGE_PRECISION must be `rational` or `float`, got {other:?}"),
    }
}

/// Right-aligned columns, header first.
fn aligned(rows: Vec<Vec<String>>) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|i| {
            rows.iter()
                .filter_map(|r| r.get(i))
                .map(String::len)
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn table_text<T>(rows: &[TradeoffRow<T>], fmt: impl Fn(&T) -> String) -> String {
    let head = ["k", "z", "exponent", "ratio"].map(String::from).to_vec();
    let body = rows
        .iter()
        .map(|r| vec![r.k.to_string(), fmt(&r.z), fmt(&r.exponent), fmt(&r.ratio)]);
    aligned(std::iter::once(head).chain(body).collect())
}

pub fn tradeoff(alpha: &str, kmax: u32, epsilon: Option<f64>, schedule: bool) -> Result<Outcome> {
    let rational = rational_mode()?;
    let (mut text, mut doc, alpha_f) = if rational {
        let a = forge_core::dtiwi::parse_rational(alpha)
            .with_context(|| format!("cannot read {alpha:?} as a rational"))?;
        let rows = tradeoff_table(&a, kmax).or_domain()?;
        let f = |r: &BigRational| fmt_rational(r);
        let mut text = table_text(&rows, f);
        let json_rows: Vec<Value> = rows
            .iter()
            .map(|r| json!({"k": r.k, "z": f(&r.z), "exponent": f(&r.exponent), "ratio": f(&r.ratio)}))
            .collect();
        let mut doc = json!({"precision": "rational", "alpha": f(&a), "rows": json_rows});
        if schedule {
            let steps = speedup_schedule(&a, kmax).or_domain()?;
            let mut table = vec![["j", "witness", "split", "padding", "exponent"]
                .map(String::from)
                .to_vec()];
            let mut js = Vec::new();
            for s in &steps {
                let split = s
                    .split
                    .as_ref()
                    .map(|(w, w2)| format!("{} + {}", f(w), f(w2)));
                let pad = s.padding_exponent.as_ref().map(f);
                table.push(vec![
                    s.j.to_string(),
                    f(&s.witness_factor),
                    split.unwrap_or_else(|| "-".into()),
                    pad.clone().unwrap_or_else(|| "-".into()),
                    f(&s.out_exponent),
                ]);
                js.push(json!({
                    "j": s.j,
                    "witness_factor": f(&s.witness_factor),
                    "split": s.split.as_ref().map(|(w, w2)| [f(w), f(w2)]),
                    "padding_exponent": pad,
                    "out_exponent": f(&s.out_exponent),
                }));
            }
            text.push('\n');
            text.push_str(&aligned(table));
            doc["schedule"] = Value::Array(js);
        }
        let alpha_f = num_traits::ToPrimitive::to_f64(&a).unwrap_or(f64::NAN);
        (text, doc, alpha_f)
    } else {
        let a: f64 = alpha
            .parse()
            .with_context(|| format!("cannot read {alpha:?} as a number"))?;
        let rows = tradeoff_table(&a, kmax).or_domain()?;
        let text = table_text(&rows, |v| format!("{v}"));
        let json_rows: Vec<Value> = rows
            .iter()
            .map(|r| json!({"k": r.k, "z": r.z, "exponent": r.exponent, "ratio": r.ratio}))
            .collect();
        if schedule {
            bail!("--schedule needs FORGE_PRECISION=rational");
        }
        (
            text,
            json!({"precision": "float", "alpha": a, "rows": json_rows}),
            a,
        )
    };
    if let Some(eps) = epsilon {
        let k = required_k_for_epsilon(alpha_f, eps).or_domain()?;
        writeln!(text, "\nk needed for ratio <= 1 + {eps}: {k}")?;
        doc["epsilon"] = json!(eps);
        doc["required_k"] = json!(k);
    }
    Ok(Outcome {
        code: 0,
        text,
        json: doc,
    })
}

/// Writes `<output>` as a manifest and the verifier next to it as
/// `<stem>.tm`.
fn write_manifest(output: &Path, inst: &DtiwiInstance) -> Result<()> {
    let InstanceKind::Direct {
        universe,
        verifier,
        witness,
        time,
    } = &inst.kind
    else {
        unreachable!("encoders build direct instances")
    };
    let stem = output
        .file_stem()
        .and_then(|s| s.to_str())
        .context("manifest path needs a file name")?;
    let machine_path = output.with_file_name(format!("{stem}.tm"));
    std::fs::write(&machine_path, verifier.to_text())
        .with_context(|| format!("writing {}", machine_path.display()))?;
    let manifest = format!(
        "name: {}\nuniverse: {universe}\nverifier: {stem}.tm\nwitness: {witness}\ntime: {time}\n",
        inst.name
    );
    std::fs::write(output, manifest).with_context(|| format!("writing {}", output.display()))?;
    Ok(())
}

fn encoded(
    x: &PString,
    inst: &DtiwiInstance,
    output: Option<&Path>,
    extra: Value,
) -> Result<Outcome> {
    if let Some(path) = output {
        write_manifest(path, inst)?;
    }
    let InstanceKind::Direct {
        witness,
        time,
        verifier,
        ..
    } = &inst.kind
    else {
        unreachable!("encoders build direct instances")
    };
    let text = format!(
        "{x}\nlength {}  placeholders {}  witness {witness}  time {time}  verifier states {}\n",
        x.len(),
        x.pcount(),
        verifier.num_states()
    );
    let mut doc = json!({
        "string": x.to_string(),
        "length": x.len(),
        "pcount": x.pcount(),
        "witness": witness.to_string(),
        "time": time.to_string(),
    });
    if let (Value::Object(d), Value::Object(e)) = (&mut doc, extra) {
        d.extend(e);
    }
    Ok(Outcome {
        code: 0,
        text,
        json: doc,
    })
}

pub fn encode_sat(path: &Path, output: Option<&Path>) -> Result<Outcome> {
    let f = Cnf::parse_dimacs(&read_text(path)?).or_domain()?;
    let (x, inst) = encoders::encode_sat(&f).or_domain()?;
    encoded(
        &x,
        &inst,
        output,
        json!({"vars": f.num_vars(), "clauses": f.clauses().len()}),
    )
}

fn load_graph(path: &Path) -> Result<CliqueGraph> {
    CliqueGraph::parse_dimacs(&read_text(path)?).or_domain()
}

pub fn encode_clique(path: &Path, k: usize, output: Option<&Path>) -> Result<Outcome> {
    let g = load_graph(path)?;
    let (x, inst) = encoders::encode_clique(&g, k).or_domain()?;
    encoded(
        &x,
        &inst,
        output,
        json!({"vertices": g.num_vertices(), "edges": g.num_edges(), "k": k}),
    )
}

pub fn clique(path: &Path, k: usize, via: &str, jobs: usize) -> Result<Outcome> {
    let g = load_graph(path)?;
    let v = g.num_vertices();
    let opts = SolveOptions {
        jobs,
        discipline: Discipline::Lenient,
    };
    let witness: Option<Vec<usize>> = match via {
        "pipeline" => {
            let (x, inst) = encoders::encode_clique(&g, k).or_domain()?;
            let r = decide_via_circuits(&inst, &x, None, jobs).or_domain()?;
            r.hit.map(|(_, bits)| {
                let bits: Vec<bool> = bits.chars().map(|c| c == '1').collect();
                // a hit shorter than k blocks can only come from k = 0
                let mut padded = bits;
                padded.resize(k * vertex_bits(v), false);
                decode_vertices(&padded, v, k)
            })
        }
        "gadget" => {
            let c: Circuit = clique_gadget_circuit(&g, k).or_domain()?;
            match forge_core::solve(&c, opts).or_domain()?.verdict {
                SatVerdict::Sat(w) => Some(decode_vertices(w.bits(), v, k)),
                SatVerdict::Unsat => None,
            }
        }
        "subsets" => {
            if k > v {
                return Err(crate::util::domain(encoders::EncodeError::KOutOfRange {
                    k,
                    v,
                }));
            }
            clique_by_subsets(&g, k)
        }
        other => bail!("unknown route {other:?}"),
    };
    if let Some(vs) = &witness {
        debug_assert!(g.is_clique(vs));
    }
    let text = match &witness {
        Some(vs) => {
            let list: Vec<String> = vs.iter().map(|u| (u + 1).to_string()).collect();
            format!("{k}-clique found: {}\n", list.join(" "))
        }
        None => format!("no {k}-clique\n"),
    };
    Ok(Outcome {
        code: verdict_code(witness.is_some()),
        text,
        json: json!({
            "k": k,
            "via": via,
            "found": witness.is_some(),
            // 1-based, as in the DIMACS file
            "vertices": witness.map(|vs| vs.iter().map(|u| u + 1).collect::<Vec<_>>()),
        }),
    })
}

pub fn selftest(seed: u64) -> Result<Outcome> {
    let results = selftest::run(seed);
    let mut text = format!("seed {seed}\n");
    for r in &results {
        writeln!(
            text,
            "{:<10} {:>6} passed {:>4} failed",
            r.name, r.passed, r.failed
        )?;
        if let Some(f) = &r.first_failure {
            writeln!(text, "  first failure: {f}")?;
        }
    }
    let ok = results.iter().all(|r| r.failed == 0);
    Ok(Outcome {
        code: if ok { 0 } else { 1 },
        text,
        json: json!({"seed": seed, "suites": results, "passed": ok}),
    })
}
