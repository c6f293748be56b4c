//! The `cubecat` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cube::{cube_compose, hom_count_formula, CubeCat, CubeMorphism};
use crate::error::{Error, Result};
use crate::json;
use crate::presheaf::io;
use crate::presheaf::tensor::tensor_truncated;
use crate::presheaf::{boundary, boundary_coequalizer, cylinder, Presheaf};
use crate::report::Report;
use crate::site::{Site, SiteKind};
use crate::topology::verify::HOMOLOGY_NOTE;
use crate::topology::{homology, realize, HomologyGroup};

#[derive(Parser, Debug)]
#[command(name = "cubecat", version, about = "Cubical sites, presheaves over them, realizations and homology")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// `plain`, `connections`, `sigma`, `crossed` (with --crossed-table) or `crossed:<path>`.
    #[arg(long, default_value = "plain")]
    pub site: String,
    /// Degree bound; defaults to 3, or 2 on crossed sites.
    #[arg(long)]
    pub max_degree: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub crossed_table: Option<PathBuf>,
    /// Write the result here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    SiteAxioms,
    SpanIdentities,
    CubeAxioms,
    PresheafLaws,
    Topology,
    All,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Number of morphisms `src → dst`, with the closed form alongside.
    HomCount {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        src: usize,
        #[arg(long)]
        dst: usize,
    },
    /// Composite `outer ∘ inner` of two morphisms given as JSON or `@file`.
    Compose {
        #[command(flatten)]
        common: Common,
        outer: String,
        inner: String,
    },
    /// Normal form of a morphism given in span or normal-form JSON.
    Normalize {
        #[command(flatten)]
        common: Common,
        morphism: String,
    },
    /// Run exhaustive verification suites.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// The boundary `∂□[r]`, checked against its coequalizer presentation.
    Boundary {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        degree: usize,
    },
    /// The convolution product of two objects.
    Tensor {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Simplicial realization of an object.
    Realize {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        object: String,
        #[arg(long, default_value_t = 3)]
        top_dim: usize,
    },
    /// Integral homology of the realization of an object.
    Homology {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        object: String,
        #[arg(long, default_value_t = 2)]
        top_dim: usize,
    },
    /// Load and validate a presheaf file.
    PresheafCheck {
        #[command(flatten)]
        common: Common,
        path: PathBuf,
    },
}

/// A rendered result and its exit code.
pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn ok(json: Value, text: String) -> Self {
        Outcome { json, text, code: 0 }
    }

    fn report(r: &Report) -> Self {
        Outcome { json: r.to_json(), text: r.to_text(), code: if r.passed() { 0 } else { 1 } }
    }
}

impl Common {
    fn site(&self) -> Result<Site> {
        Site::from_selector(&self.site, self.crossed_table.as_deref())
    }

    fn degree(&self, site: &Site) -> usize {
        self.max_degree.unwrap_or(if site.kind() == SiteKind::Crossed { 2 } else { 3 })
    }
}

fn read_arg(text: &str) -> Result<Value> {
    let body = match text.strip_prefix('@') {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{p}: {e}")))?,
        None => text.to_string(),
    };
    serde_json::from_str(&body).map_err(|e| Error::Schema(e.to_string()))
}

/// Reads a morphism in normal-form JSON, or in span JSON with an `xi` field.
pub fn parse_morphism(site: &Site, v: &Value) -> Result<CubeMorphism> {
    if v.get("f").is_some() {
        let span = json::parse_span(site, v)?;
        let xi = json::parse_subset(v, "xi", span.dst())?;
        CubeMorphism::new(span, xi)
    } else {
        json::parse_cube(site, v)
    }
}

/// Resolves `rep:<n>`, `boundary:<n>`, `tensor:<a>:<b>`, `cylinder:<a>` or `file:<path>`.
pub fn resolve_object(cat: &Arc<CubeCat>, d: usize, spec: &str) -> Result<Arc<Presheaf>> {
    let tokens: Vec<&str> = spec.split(':').collect();
    let mut pos = 0;
    let out = parse_object(cat, d, &tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(Error::Usage(format!("trailing input in object `{spec}`")));
    }
    Ok(out)
}

fn parse_object(cat: &Arc<CubeCat>, d: usize, tokens: &[&str], pos: &mut usize) -> Result<Arc<Presheaf>> {
    let bad = || Error::Usage(format!("malformed object `{}`", tokens.join(":")));
    let head = *tokens.get(*pos).ok_or_else(bad)?;
    *pos += 1;
    let number = |pos: &mut usize| -> Result<usize> {
        let n = tokens.get(*pos).and_then(|t| t.parse().ok()).ok_or_else(bad)?;
        *pos += 1;
        Ok(n)
    };
    match head {
        "rep" => Ok(Arc::new(Presheaf::representable(cat, number(pos)?, d)?)),
        "boundary" => Ok(boundary(cat, number(pos)?, d)?.source),
        "tensor" => {
            let a = parse_object(cat, d, tokens, pos)?;
            let b = parse_object(cat, d, tokens, pos)?;
            Ok(tensor_truncated(&a, &b, d)?.object)
        }
        "cylinder" => Ok(cylinder(&parse_object(cat, d, tokens, pos)?)?.tensor.object),
        "file" => {
            let path = tokens[*pos..].join(":");
            *pos = tokens.len();
            let v: Value = serde_json::from_str(
                &std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{path}: {e}")))?,
            )
            .map_err(|e| Error::Schema(format!("{path}: {e}")))?;
            if v.get("site").and_then(Value::as_str) != Some(cat.site().label()) {
                return Err(Error::Schema(format!("{path} is not over {}", cat.site().label())));
            }
            if v.get("max_degree").and_then(Value::as_u64) != Some(d as u64) {
                return Err(Error::Usage(format!("{path} has a different degree bound; pass it as --max-degree")));
            }
            let x = io::from_json_over(cat, d, &v)?;
            Ok(Arc::new(x))
        }
        _ => Err(bad()),
    }
}

fn counts_text(name: &str, x: &Presheaf) -> String {
    format!("{name} over {} (D={}): cells per degree {:?}\n", x.site().label(), x.max_degree(), x.counts())
}

fn homology_text(h: &[HomologyGroup]) -> String {
    let mut s = String::new();
    for g in h {
        let mut parts = Vec::new();
        if g.betti > 0 {
            parts.push(if g.betti == 1 { "Z".to_string() } else { format!("Z^{}", g.betti) });
        }
        parts.extend(g.torsion.iter().map(|t| format!("Z/{t}")));
        let group = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        s.push_str(&format!("H_{} = {group}\n", g.dim));
    }
    s.push_str(&format!("note: {HOMOLOGY_NOTE}\n"));
    s
}

fn suite_reports(suite: Suite, site: &Site, d: usize) -> Result<Vec<Report>> {
    use crate::{cube, presheaf, site as sites, spans, topology};
    let all = suite == Suite::All;
    let mut out = Vec::new();
    if all || suite == Suite::SiteAxioms {
        out.push(sites::verify::verify_site_axioms(site, d)?);
    }
    if all || suite == Suite::SpanIdentities {
        out.push(spans::verify_span_identities(site, d)?);
    }
    if all || suite == Suite::CubeAxioms {
        out.push(cube::verify::verify_cube_axioms(site, d)?);
    }
    if all || suite == Suite::PresheafLaws {
        out.push(presheaf::verify::verify_presheaf_laws(site, d)?);
    }
    if all || suite == Suite::Topology {
        out.push(topology::verify::verify_topology(site, d)?);
    }
    Ok(out)
}

pub fn execute(command: &Command) -> Result<Outcome> {
    match command {
        Command::HomCount { common, src, dst } => {
            let site = common.site()?;
            site.check_degree((*src).max(*dst))?;
            let cat = CubeCat::new(site.clone(), (*src).max(*dst));
            let count = cat.homs(*src, *dst).len();
            let formula = hom_count_formula(&site, *src, *dst).ok();
            let mut out = Outcome::ok(
                json!({"site": site.label(), "src": src, "dst": dst, "count": count, "formula": formula}),
                format!("{count}\n"),
            );
            if formula.is_some_and(|f| f != count as u128) {
                out.code = 1;
                out.text.push_str(&format!("closed form disagrees: {}\n", formula.unwrap_or_default()));
            }
            Ok(out)
        }
        Command::Compose { common, outer, inner } => {
            let site = common.site()?;
            let g = parse_morphism(&site, &read_arg(outer)?)?;
            let f = parse_morphism(&site, &read_arg(inner)?)?;
            let gf = cube_compose(&site, &g, &f)?;
            Ok(Outcome::ok(json::cube(&site, &gf), format!("{gf}\n")))
        }
        Command::Normalize { common, morphism } => {
            let site = common.site()?;
            let m = parse_morphism(&site, &read_arg(morphism)?)?;
            let nf = json::cube(&site, &m);
            Ok(Outcome::ok(nf.clone(), format!("{m}\n{nf}\n")))
        }
        Command::Verify { common, suite } => {
            let site = common.site()?;
            let d = common.degree(&site);
            let reports = suite_reports(*suite, &site, d)?;
            if let [single] = reports.as_slice() {
                return Ok(Outcome::report(single));
            }
            let passed = reports.iter().all(Report::passed);
            Ok(Outcome {
                json: json!({
                    "suite": "all",
                    "passed": passed,
                    "checks": reports.iter().map(|r| r.checks.len()).sum::<usize>(),
                    "reports": reports.iter().map(Report::to_json).collect::<Vec<_>>(),
                }),
                text: reports.iter().map(Report::to_text).collect::<Vec<_>>().join("\n"),
                code: if passed { 0 } else { 1 },
            })
        }
        Command::Boundary { common, degree } => {
            let site = common.site()?;
            let d = common.degree(&site);
            let cat = CubeCat::shared(site, d);
            let filter = boundary(&cat, *degree, d)?;
            let coeq = boundary_coequalizer(&cat, *degree, d)?;
            let agrees = filter.image() == coeq.image();
            let x = &filter.source;
            let mut text = counts_text(&format!("∂□[{degree}]"), x);
            text.push_str(&format!("agrees with the coequalizer of faces: {agrees}\n"));
            Ok(Outcome {
                json: json!({"object": format!("boundary:{degree}"), "counts": x.counts(), "coequalizer_agrees": agrees, "presheaf": io::to_json(x)}),
                text,
                code: if agrees { 0 } else { 1 },
            })
        }
        Command::Tensor { common, left, right } => {
            let site = common.site()?;
            let d = common.degree(&site);
            let cat = CubeCat::shared(site, d);
            let (a, b) = (resolve_object(&cat, d, left)?, resolve_object(&cat, d, right)?);
            let t = tensor_truncated(&a, &b, d)?;
            let name = format!("{left} ⊗ {right}");
            Ok(Outcome::ok(
                json!({"left": left, "right": right, "counts": t.object.counts(), "presheaf": io::to_json(&t.object)}),
                counts_text(&name, &t.object),
            ))
        }
        Command::Realize { common, object, top_dim } => {
            let site = common.site()?;
            let d = common.degree(&site);
            let cat = CubeCat::shared(site, d);
            let x = resolve_object(&cat, d, object)?;
            let r = realize(&x, *top_dim)?;
            let nondegenerate: Vec<usize> = (0..=*top_dim).map(|k| r.set.nondegenerate(k).len()).collect();
            let mut v = r.set.to_json();
            v["object"] = json!(object);
            v["nondegenerate"] = json!(nondegenerate);
            let text = format!(
                "|{object}|: simplices per dimension {:?}, non-degenerate {:?}\n",
                r.set.counts(),
                nondegenerate
            );
            Ok(Outcome::ok(v, text))
        }
        Command::Homology { common, object, top_dim } => {
            let site = common.site()?;
            let d = common.degree(&site);
            let cat = CubeCat::shared(site, d);
            let x = resolve_object(&cat, d, object)?;
            let h = homology(&realize(&x, top_dim + 1)?.set, *top_dim)?;
            Ok(Outcome::ok(json!(h), homology_text(&h)))
        }
        Command::PresheafCheck { common, path } => match io::load(path, common.crossed_table.as_deref()) {
            Ok(x) => Ok(Outcome::ok(
                json!({"valid": true, "site": x.site().label(), "max_degree": x.max_degree(), "counts": x.counts()}),
                counts_text(&path.display().to_string(), &x),
            )),
            Err(Error::Functoriality(msg)) => Ok(Outcome {
                json: json!({"valid": false, "error": msg}),
                text: format!("functoriality failure: {msg}\n"),
                code: 1,
            }),
            Err(e) => Err(e),
        },
    }
}

fn common(command: &Command) -> &Common {
    match command {
        Command::HomCount { common, .. }
        | Command::Compose { common, .. }
        | Command::Normalize { common, .. }
        | Command::Verify { common, .. }
        | Command::Boundary { common, .. }
        | Command::Tensor { common, .. }
        | Command::Realize { common, .. }
        | Command::Homology { common, .. }
        | Command::PresheafCheck { common, .. } => common,
    }
}

fn emit(out: &Outcome, format: Format, path: Option<&Path>) -> std::io::Result<()> {
    let body = match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&out.json).expect("values serialize")),
        Format::Text => out.text.clone(),
    };
    match path {
        Some(p) => std::fs::write(p, body),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    }
}

/// Parses `argv`, runs the command and prints the result; returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let c = common(&cli.command);
    match execute(&cli.command) {
        Ok(out) => match emit(&out, c.format, c.output.as_deref()) {
            Ok(()) => out.code,
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outcome(args: &[&str]) -> Outcome {
        let cli = Cli::try_parse_from(std::iter::once("cubecat").chain(args.iter().copied())).unwrap();
        execute(&cli.command).unwrap()
    }

    #[test]
    fn hom_count_text() {
        let out = outcome(&["hom-count", "--site", "plain", "--src", "2", "--dst", "1"]);
        assert_eq!(out.text, "4\n");
        assert_eq!(out.code, 0);
    }

    #[test]
    fn nested_objects() {
        let cat = CubeCat::shared(Site::plain(), 2);
        let t = resolve_object(&cat, 2, "tensor:rep:1:boundary:1").unwrap();
        assert_eq!(t.counts(), &[4, 6, 8]);
        assert!(resolve_object(&cat, 2, "tensor:rep:1").is_err());
        assert!(resolve_object(&cat, 2, "rep:1:2").is_err());
    }

    #[test]
    fn homology_of_circle() {
        let out = outcome(&["homology", "--site", "plain", "--object", "boundary:2", "--top-dim", "1", "--format", "json"]);
        assert_eq!(out.json, json!([{"dim": 0, "betti": 1, "torsion": []}, {"dim": 1, "betti": 1, "torsion": []}]));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["cubecat", "frobnicate"]), 2);
        assert_eq!(run(["cubecat", "hom-count", "--site", "nowhere", "--src", "1", "--dst", "1"]), 2);
    }
}
