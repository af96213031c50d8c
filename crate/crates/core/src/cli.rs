//! Command-line front end. `run` returns the exit code and both output
//! streams so that the binary and the tests share one code path.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::complex::{ComplexError, Element, FilteredComplex, FixtureFile};
use crate::diagram::{check_nice, eh_generator, enumerate_generators, validate_diagram, DiagramSpec, HeegaardDiagram};
use crate::disks::{enumerate_disks, CountedDisk, DiskError, Shape, SplitDifferential};
use crate::domains::{check_admissible, n_x};
use crate::gluing::{at_inequality_check, verify_filtered_chain_map, GluingData, GluingError, GluingMap, Verdict};
use crate::pob::{assemble_spec, PartialOpenBook, PobError};
use crate::torsion::{algebraic_torsion, page_table, AtOptions, AtReport, AtValue, PageTable, TorsionError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "sutured-at", version, about = "J+-filtered sutured Floer complexes and algebraic torsion over F2")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub output: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a diagram or complex fixture for well-formedness.
    Validate { file: PathBuf },
    /// List generators with their cycle counts.
    Generators { file: PathBuf },
    /// List the counted disks with their J+ values.
    Disks {
        file: PathBuf,
        /// Include each disk's domain.
        #[arg(long)]
        dump_domains: bool,
    },
    /// Compute the algebraic torsion of the contact class.
    At {
        file: PathBuf,
        #[arg(long, default_value_t = 64)]
        cap: usize,
        /// Resolve finite values above the cap.
        #[arg(long)]
        exact: bool,
        #[arg(long, num_args = 2, value_names = ["R", "P"])]
        pages: Option<Vec<usize>>,
    },
    /// Print page dimensions dim E^r_p of the spectral sequence.
    Pages {
        file: PathBuf,
        #[arg(long, num_args = 2, value_names = ["R", "P"])]
        pages: Option<Vec<usize>>,
    },
    /// Verify a gluing map and compare torsion on both sides.
    Glue {
        sub: PathBuf,
        #[arg(name = "SUPER")]
        sup: PathBuf,
        map: PathBuf,
        #[arg(long, default_value_t = 64)]
        cap: usize,
    },
    /// Build the Heegaard diagram of a partial open book.
    Assemble {
        file: PathBuf,
        /// Write the diagram JSON to this file.
        #[arg(long)]
        write: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: parse error at line {line}, column {column}: {message}")]
    Json { path: String, line: usize, column: usize, message: String },
    #[error("{path}: invalid diagram\n{report}")]
    Invalid { path: String, report: String },
    #[error("{path}: expected a diagram, found a complex fixture")]
    NotADiagram { path: String },
    #[error("{0}")]
    Complex(#[from] ComplexError),
    #[error("{0}")]
    Disk(#[from] DiskError),
    #[error("{0}")]
    Torsion(#[from] TorsionError),
    #[error("{0}")]
    Gluing(#[from] GluingError),
    #[error("{0}")]
    Pob(#[from] PobError),
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

const FIXTURE_BANNER: &str = "note: complex read from a fixture; its disks are taken as listed, not derived from a diagram";

enum Input {
    Diagram(HeegaardDiagram),
    Fixture(FixtureFile, FilteredComplex),
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn json_error(path: &Path, e: &serde_json::Error) -> CliError {
    CliError::Json { path: path.display().to_string(), line: e.line(), column: e.column(), message: e.to_string() }
}

fn is_fixture(path: &Path, text: &str) -> Result<bool, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| json_error(path, &e))?;
    Ok(v.get("generators").is_some())
}

fn load(path: &Path) -> Result<Input, CliError> {
    let text = read(path)?;
    if is_fixture(path, &text)? {
        let file: FixtureFile = serde_json::from_str(&text).map_err(|e| json_error(path, &e))?;
        let fc = FilteredComplex::from_fixture(&file)?;
        return Ok(Input::Fixture(file, fc));
    }
    Ok(Input::Diagram(load_diagram_text(path, &text)?))
}

fn load_diagram_text(path: &Path, text: &str) -> Result<HeegaardDiagram, CliError> {
    let spec = DiagramSpec::from_json(text).map_err(|e| json_error(path, &e))?;
    let report = validate_diagram(&spec);
    if !report.is_empty() {
        return Err(CliError::Invalid { path: path.display().to_string(), report: report.to_string() });
    }
    HeegaardDiagram::from_spec(&spec).map_err(|e| CliError::Invalid { path: path.display().to_string(), report: e.to_string() })
}

fn load_diagram(path: &Path) -> Result<HeegaardDiagram, CliError> {
    let text = read(path)?;
    if is_fixture(path, &text)? {
        return Err(CliError::NotADiagram { path: path.display().to_string() });
    }
    load_diagram_text(path, &text)
}

fn diagram_complex(d: &HeegaardDiagram) -> Result<(SplitDifferential, FilteredComplex), CliError> {
    let disks = enumerate_disks(d)?;
    let sd = SplitDifferential::from_disks(d, enumerate_generators(d), &disks);
    let eh = eh_generator(d).ok();
    let fc = FilteredComplex::from_diagram(&sd, eh.as_ref())?;
    Ok((sd, fc))
}

fn complex_of(input: &Input) -> Result<FilteredComplex, CliError> {
    match input {
        Input::Diagram(d) => Ok(diagram_complex(d)?.1),
        Input::Fixture(_, fc) => Ok(fc.clone()),
    }
}

fn window(pages: &Option<Vec<usize>>) -> (usize, usize) {
    match pages.as_deref() {
        Some([r, p]) => (*r, *p),
        _ => AtOptions::default().pages,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let mut out = Report::new(cli.output);
    let code = match execute(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            out.error(&e.to_string());
            1
        }
    };
    out.finish(code)
}

struct Report {
    format: Format,
    text: Vec<String>,
    json: serde_json::Map<String, Value>,
    notes: Vec<String>,
}

impl Report {
    fn new(format: Format) -> Report {
        Report { format, text: Vec::new(), json: serde_json::Map::new(), notes: Vec::new() }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    fn set(&mut self, key: &str, v: Value) {
        self.json.insert(key.to_string(), v);
    }

    fn error(&mut self, msg: &str) {
        self.json.insert("error".into(), json!(msg));
        self.notes.push(format!("error: {msg}"));
    }

    fn finish(self, code: i32) -> Outcome {
        let mut stderr = self.notes.join("\n");
        if !stderr.is_empty() {
            stderr.push('\n');
        }
        let stdout = match self.format {
            Format::Text if self.text.is_empty() => String::new(),
            Format::Text => self.text.join("\n") + "\n",
            Format::Json => serde_json::to_string_pretty(&Value::Object(self.json)).expect("report serialization") + "\n",
        };
        Outcome { code, stdout, stderr }
    }
}

fn execute(cli: &Cli, out: &mut Report) -> Result<i32, CliError> {
    match &cli.command {
        Command::Validate { file } => validate(file, out),
        Command::Generators { file } => generators(file, out),
        Command::Disks { file, dump_domains } => disks(file, *dump_domains, out),
        Command::At { file, cap, exact, pages } => {
            let input = load(file)?;
            banner(&input, out);
            let fc = complex_of(&input)?;
            let opts = AtOptions { cap: *cap, exact: *exact, pages: window(pages) };
            let report = algebraic_torsion(&fc, &opts)?;
            at_report(&fc, &report, out);
            Ok(if matches!(report.value, AtValue::Undetermined { .. }) { 2 } else { 0 })
        }
        Command::Pages { file, pages } => {
            let input = load(file)?;
            banner(&input, out);
            let fc = complex_of(&input)?;
            let (r, p) = window(pages);
            page_report(&page_table(&fc, r, p), out);
            Ok(0)
        }
        Command::Glue { sub, sup, map, cap } => glue(sub, sup, map, *cap, out),
        Command::Assemble { file, write } => assemble(file, write.as_deref(), out),
    }
}

fn assemble(file: &Path, write: Option<&Path>, out: &mut Report) -> Result<i32, CliError> {
    let text = read(file)?;
    let pob = PartialOpenBook::from_json(&text).map_err(|e| json_error(file, &e))?;
    let spec = assemble_spec(&pob)?;
    let d = HeegaardDiagram::from_spec(&spec).map_err(PobError::from)?;
    let nice = check_nice(&d).is_empty();
    let admissible = check_admissible(&d);
    if let Some(path) = write {
        std::fs::write(path, spec.to_json() + "\n").map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        out.line(format!("wrote {}", path.display()));
    }
    out.line(format!("{} α/β pairs, {} points, {} regions", d.alpha.len(), d.points.len(), d.regions.len()));
    out.line(format!("contact class: ({})", spec.eh.as_deref().unwrap_or_default().join(", ")));
    out.line(format!("nice: {}, admissible: {}", if nice { "yes" } else { "no" }, if admissible { "yes" } else { "no" }));
    out.set("diagram", serde_json::to_value(&spec).expect("spec serializes"));
    out.set("nice", json!(nice));
    out.set("admissible", json!(admissible));
    Ok(0)
}

fn banner(input: &Input, out: &mut Report) {
    if let Input::Fixture(..) = input {
        out.line(FIXTURE_BANNER);
        out.set("provenance", json!("fixture"));
        out.set("note", json!(FIXTURE_BANNER));
    } else {
        out.set("provenance", json!("diagram"));
    }
}

fn validate(file: &Path, out: &mut Report) -> Result<i32, CliError> {
    let text = read(file)?;
    if is_fixture(file, &text)? {
        out.set("kind", json!("fixture"));
        let file_data: FixtureFile = serde_json::from_str(&text).map_err(|e| json_error(file, &e))?;
        let fc = FilteredComplex::from_fixture(&file_data)?;
        out.set("generators", json!(fc.dim()));
        out.set("disks", json!(file_data.disks.len()));
        out.set("warnings", json!(fc.warnings));
        out.set("valid", json!(true));
        out.line(format!("fixture: {} generators, {} disks, ∂̂² = 0", fc.dim(), file_data.disks.len()));
        for w in &fc.warnings {
            out.line(format!("warning: {w}"));
        }
        return Ok(0);
    }
    let spec = DiagramSpec::from_json(&text).map_err(|e| json_error(file, &e))?;
    let report = validate_diagram(&spec);
    out.set("kind", json!("diagram"));
    out.set("violations", json!(report.violations));
    if !report.is_empty() {
        out.set("valid", json!(false));
        out.line(format!("diagram is invalid: {} violation(s)", report.violations.len()));
        for v in &report.violations {
            out.line(format!("  [{:?}] {}", v.kind, v.message));
        }
        return Ok(1);
    }
    let d = HeegaardDiagram::from_spec(&spec).map_err(|e| CliError::Invalid { path: file.display().to_string(), report: e.to_string() })?;
    let nice = check_nice(&d);
    let admissible = check_admissible(&d);
    out.set("valid", json!(true));
    out.set("nice_violations", json!(nice));
    out.set("admissible", json!(admissible));
    out.line(format!(
        "diagram is well-formed: {} α/β pairs, {} points, {} regions",
        d.alpha.len(),
        d.points.len(),
        d.regions.len()
    ));
    if nice.is_empty() {
        out.line("nice: yes");
    } else {
        for v in &nice {
            out.line(format!("not nice: region {} has χ = {} and {} corners", v.region, v.chi, v.corners));
        }
    }
    out.line(format!("admissible: {}", if admissible { "yes" } else { "no" }));
    Ok(0)
}

fn generators(file: &Path, out: &mut Report) -> Result<i32, CliError> {
    let input = load(file)?;
    banner(&input, out);
    let (names, cycles, eh): (Vec<String>, Vec<Option<usize>>, Option<usize>) = match &input {
        Input::Diagram(d) => {
            let gens = enumerate_generators(d);
            let eh = eh_generator(d).ok().and_then(|e| gens.iter().position(|g| *g == e));
            (gens.iter().map(|g| d.generator_name(g)).collect(), gens.iter().map(|g| Some(g.cycles())).collect(), eh)
        }
        Input::Fixture(_, fc) => (fc.names.clone(), fc.cycles.clone(), fc.eh),
    };
    let rows: Vec<Value> = names
        .iter()
        .zip(&cycles)
        .enumerate()
        .map(|(i, (n, c))| json!({"name": n, "cycles": c, "eh": Some(i) == eh}))
        .collect();
    out.set("generators", Value::Array(rows));
    out.line(format!("{} generators", names.len()));
    for (i, (n, c)) in names.iter().zip(&cycles).enumerate() {
        let c = c.map(|c| c.to_string()).unwrap_or_else(|| "?".into());
        let mark = if Some(i) == eh { "  (EH)" } else { "" };
        out.line(format!("  {n}  |x| = {c}{mark}"));
    }
    Ok(0)
}

struct DiskRow {
    shape: Option<Shape>,
    name: String,
    from: String,
    to: String,
    two_n: Option<i64>,
    cycle_diff: Option<i64>,
    j_plus: i64,
    domain: Option<Value>,
}

fn diagram_row(d: &HeegaardDiagram, k: &CountedDisk, dump: bool) -> Result<DiskRow, CliError> {
    let n = n_x(d, &k.domain, &k.from).map_err(DiskError::from)? + n_x(d, &k.domain, &k.to).map_err(DiskError::from)?;
    Ok(DiskRow {
        shape: Some(k.shape),
        name: k.name(d),
        from: d.generator_name(&k.from),
        to: d.generator_name(&k.to),
        two_n: Some(n.quarters() / 2),
        cycle_diff: Some(k.from.cycles() as i64 - k.to.cycles() as i64),
        j_plus: k.j_plus as i64,
        domain: dump.then(|| json!(k.domain.to_map(d).into_iter().filter(|(_, c)| *c != 0).collect::<std::collections::BTreeMap<_, _>>())),
    })
}

fn disks(file: &Path, dump: bool, out: &mut Report) -> Result<i32, CliError> {
    let input = load(file)?;
    banner(&input, out);
    let rows: Vec<DiskRow> = match &input {
        Input::Diagram(d) => enumerate_disks(d)?.iter().map(|k| diagram_row(d, k, dump)).collect::<Result<_, _>>()?,
        Input::Fixture(f, fc) => f
            .disks
            .iter()
            .map(|k| {
                let cyc = |g: &str| fc.index_of(g).and_then(|i| fc.cycles[i]);
                let cycle_diff = match (cyc(&k.from), cyc(&k.to)) {
                    (Some(a), Some(b)) => Some(a as i64 - b as i64),
                    _ => None,
                };
                DiskRow {
                    shape: k.shape,
                    name: k.name.clone().unwrap_or_else(|| format!("{} -> {}", k.from, k.to)),
                    from: k.from.clone(),
                    to: k.to.clone(),
                    two_n: k.shape.map(|s| if s == Shape::Bigon { 1 } else { 2 }),
                    cycle_diff,
                    j_plus: k.jplus,
                    domain: None,
                }
            })
            .collect(),
    };
    let opt = |v: Option<i64>| v.map(|x| x.to_string()).unwrap_or_else(|| "?".into());
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let mut v = json!({
                "shape": r.shape,
                "name": r.name,
                "from": r.from,
                "to": r.to,
                "two_n": r.two_n,
                "cycle_difference": r.cycle_diff,
                "j_plus": r.j_plus,
            });
            if let Some(dom) = &r.domain {
                v["domain"] = dom.clone();
            }
            v
        })
        .collect();
    out.set("disks", Value::Array(json_rows));
    let header = ["shape", "name", "2(n_x+n_y)", "|x|-|y|", "J+"];
    let cells: Vec<[String; 5]> = rows
        .iter()
        .map(|r| {
            let shape = r.shape.map(|s| s.to_string()).unwrap_or_else(|| "?".into());
            [shape, r.name.clone(), opt(r.two_n), opt(r.cycle_diff), r.j_plus.to_string()]
        })
        .collect();
    let mut width = header.map(|h| h.chars().count());
    for row in &cells {
        for (w, c) in width.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let fmt_row = |row: [&str; 5]| {
        row.iter().zip(&width).map(|(c, w)| format!("{c:<w$}", w = *w)).collect::<Vec<_>>().join(" | ").trim_end().to_string()
    };
    out.line(fmt_row(header));
    out.line(width.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("-+-"));
    for (row, r) in cells.iter().zip(&rows) {
        out.line(fmt_row([&row[0], &row[1], &row[2], &row[3], &row[4]]));
        if let Some(dom) = &r.domain {
            out.line(format!("    {} -> {}  domain {dom}", r.from, r.to));
        }
    }
    out.line(format!("{} disks", rows.len()));
    Ok(0)
}

fn element_json(fc: &FilteredComplex, e: &Element) -> Value {
    json!(e.levels.iter().map(|v| fc.render(v)).collect::<Vec<_>>())
}

fn at_report(fc: &FilteredComplex, r: &AtReport, out: &mut Report) {
    out.set("value", json!(r.value));
    out.set("cap", json!(r.cap));
    out.set("cross_checked", json!(r.cross_checked));
    out.set("witness", r.witness.as_ref().map(|w| element_json(fc, w)).unwrap_or(Value::Null));
    out.line(format!("AT = {}", r.value));
    if let Some(w) = &r.witness {
        out.line("witness (c_i with ∂̂c = EH at level 0):");
        for (i, v) in w.levels.iter().enumerate() {
            let terms = fc.render(v);
            let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            out.line(format!("  c_{i} = {body}"));
        }
    }
    page_report(&r.pages, out);
}

fn page_report(t: &PageTable, out: &mut Report) {
    out.set("pages", json!(t.entries));
    out.line("pages:");
    for e in &t.entries {
        out.line(format!("  dim E^{}_{} = {}", e.r, e.p, e.dim));
    }
}

fn glue(sub: &Path, sup: &Path, map: &Path, cap: usize, out: &mut Report) -> Result<i32, CliError> {
    let sub_d = load_diagram(sub)?;
    let sup_d = load_diagram(sup)?;
    let text = read(map)?;
    let m: GluingMap = serde_json::from_str(&text).map_err(|e| json_error(map, &e))?;
    let g = GluingData::new(sub_d, sup_d, &m)?;
    let v = verify_filtered_chain_map(&g)?;
    out.set("chain_map", json!(v.report));
    out.set("phi", json!(v.phi.images.iter().enumerate().map(|(i, &j)| (v.sub.names[i].clone(), v.sup.names[j].clone())).collect::<Vec<_>>()));
    let status = |ok: bool| if ok { "pass" } else { "FAIL" };
    let r = &v.report;
    out.line(format!("incidence: {}", status(r.incidence.is_empty())));
    out.line(format!("(a) disks correspond: {} ({} matched)", status(r.unmatched.is_empty()), r.matched));
    out.line(format!("(b) J+ preserved: {}", status(r.j_plus.is_empty())));
    out.line(format!("(c) Φ∂_r = ∂_rΦ: {}", status(r.commutation.is_empty())));
    for s in r.incidence.iter().chain(&r.unmatched).chain(&r.j_plus) {
        out.line(format!("  {s}"));
    }
    for (lvl, gname) in &r.commutation {
        out.line(format!("  r = {lvl}: fails on {gname}"));
    }
    if !r.passed() {
        return Ok(1);
    }
    let a = FilteredComplex::from_diagram(&v.sub, eh_generator(&g.sub).ok().as_ref())?;
    let b = FilteredComplex::from_diagram(&v.sup, eh_generator(&g.sup).ok().as_ref())?;
    let ineq = at_inequality_check(&a, &b, &v.phi, &AtOptions { cap, ..AtOptions::default() })?;
    out.set("inequality", json!(ineq));
    out.line(format!("Φ(EH_sub) = EH_super: {}", status(ineq.eh_mapped)));
    if let Some(t) = ineq.transported_witness {
        out.line(format!("transported witness: {}", status(t)));
    }
    let verdict = match ineq.verdict {
        Verdict::Holds => "holds",
        Verdict::Violated => "VIOLATED",
        Verdict::Inconclusive => "inconclusive",
    };
    out.line(format!("AT(sub) = {}, AT(super) = {}: AT(sub) ≥ AT(super) {verdict}", ineq.sub, ineq.sup));
    Ok(0)
}
