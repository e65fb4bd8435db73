//! Subcommand implementations. Each returns its rendered output and exit
//! code so the binary stays a thin argument parser.

use std::path::Path;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::construction::{ConstructionError, ConstructionFile};
use crate::pencil::{pencil_certificates, Certificate};
use crate::tchain::{
    boundary_lens, cf_value, exponent_sequence, hj_expand, wahl_recognize, BoundarySide, Chain, ExponentSequence,
    LensInvariant, WahlParams,
};
use crate::vankampen::{
    h1_certificate, presentation_dump, replay_paper_argument, Argument, Pi1Certificate, ReplayReport,
};
use crate::verify::{verify_construction, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_USAGE
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, code: EXIT_OK }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable output")
}

/// Where a construction comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    File(std::path::PathBuf),
    Builtin(String),
}

impl Source {
    pub fn load(&self) -> Result<ConstructionFile, CliError> {
        match self {
            Source::File(p) => Ok(ConstructionFile::from_path(Path::new(p))?),
            Source::Builtin(name) => ConstructionFile::builtin(name)
                .ok_or_else(|| CliError::Usage(format!("no built-in construction '{name}' (use main or second)"))),
        }
    }
}

pub fn parse_chain(s: &str) -> Result<Chain, CliError> {
    let entries = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.trim_matches(|c| c == '[' || c == ']').parse::<u64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Usage(format!("cannot parse chain '{s}'; expected e.g. 3,2,3")))?;
    Chain::new(entries).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn cmd_verify(source: &Source, format: Format) -> Result<Output, CliError> {
    let file = source.load()?;
    let report = verify_construction(&file);
    let text = match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    Ok(Output { text, code: report.exit_status })
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainSummary {
    pub chain: Chain,
    #[serde(with = "crate::exact::bigint_str")]
    pub n: BigInt,
    #[serde(with = "crate::exact::bigint_str")]
    pub qprime: BigInt,
    pub wahl: Option<WahlParams>,
    pub neighborhood: LensInvariant,
    pub complement: LensInvariant,
    pub exponents: ExponentSequence,
}

impl ChainSummary {
    pub fn of(chain: Chain) -> Self {
        let (n, qprime) = cf_value(&chain);
        Self {
            n,
            qprime,
            wahl: wahl_recognize(&chain),
            neighborhood: boundary_lens(&chain, BoundarySide::Neighborhood),
            complement: boundary_lens(&chain, BoundarySide::Complement),
            exponents: exponent_sequence(&chain),
            chain,
        }
    }

    fn render(&self, format: Format) -> String {
        if format == Format::Json {
            return json(self);
        }
        let mut out = format!("chain {} (u1 first)\n", self.chain);
        out.push_str(&format!("n = {}, q' = {}\n", self.n, self.qprime));
        match &self.wahl {
            Some(w) => out.push_str(&format!("Wahl chain C_{{{},{}}}\n", w.p, w.q)),
            None => out.push_str("not a Wahl chain\n"),
        }
        out.push_str(&format!("{}\n{}\n", self.neighborhood, self.complement));
        out.push_str("exponents c_i:\n");
        for (i, c) in self.exponents.c.iter().enumerate() {
            out.push_str(&format!("  c{} = {c}\n", i + 1));
        }
        out
    }
}

fn big(v: &str, what: &str) -> Result<BigInt, CliError> {
    v.parse().map_err(|_| CliError::Usage(format!("{what} must be an integer, got '{v}'")))
}

/// `hj n q`, or `hj --wahl p q` for the chain of `(p², pq − 1)`.
pub fn cmd_hj(a: &str, b: &str, wahl: bool, format: Format) -> Result<Output, CliError> {
    let (x, y) = (big(a, "first argument")?, big(b, "second argument")?);
    let (n, q) =
        if wahl { WahlParams::new(x, y).map_err(|e| CliError::Usage(e.to_string()))?.lens_pair() } else { (x, y) };
    let chain = hj_expand(&n, &q).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(Output::ok(ChainSummary::of(chain).render(format)))
}

/// `wahl p q` prints the chain; `wahl --chain …` recognizes one.
pub fn cmd_wahl(params: Option<(&str, &str)>, chain: Option<&str>, format: Format) -> Result<Output, CliError> {
    match (params, chain) {
        (Some((p, q)), None) => cmd_hj(p, q, true, format),
        (None, Some(c)) => {
            let summary = ChainSummary::of(parse_chain(c)?);
            let code = if summary.wahl.is_some() { EXIT_OK } else { EXIT_FAILED };
            Ok(Output { text: summary.render(format), code })
        }
        _ => Err(CliError::Usage("give either P Q or --chain".into())),
    }
}

pub fn cmd_exponents(chain: &str, format: Format) -> Result<Output, CliError> {
    let chain = parse_chain(chain)?;
    let text = match format {
        Format::Json => json(&exponent_sequence(&chain)),
        Format::Text => presentation_dump(&chain),
    };
    Ok(Output::ok(text))
}

pub fn cmd_pi1(source: &Source, format: Format) -> Result<Output, CliError> {
    let file = source.load()?;
    let cert: Pi1Certificate =
        h1_certificate(&file.chain.entries, &file.relations()).map_err(|e| CliError::Usage(e.to_string()))?;
    let text = match format {
        Format::Json => json(&cert),
        Format::Text => {
            let exps: Vec<String> = cert.exponents.iter().map(BigInt::to_string).collect();
            let verdict = if cert.certified() {
                "H1-trivial-and-generator-coprime".to_string()
            } else {
                format!("H1 = Z/{}", cert.g)
            };
            let mut out =
                format!("n = {}\nexponents = {}\ngcd = {}\nverdict: {verdict}\n", cert.n, exps.join(", "), cert.g);
            for a in &cert.assumptions {
                out.push_str(&format!("assumes: {a}\n"));
            }
            out
        }
    };
    let code = if cert.certified() { EXIT_OK } else { EXIT_FAILED };
    Ok(Output { text, code })
}

fn render_certificates(certs: &[Certificate]) -> String {
    certs
        .iter()
        .map(|c| format!("[{}] {}\n       {}\n", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail))
        .collect()
}

pub fn cmd_pencil(format: Format) -> Result<Output, CliError> {
    let certs = pencil_certificates().map_err(|e| CliError::Usage(e.to_string()))?;
    let code = if certs.iter().all(|c| c.passed) { EXIT_OK } else { EXIT_FAILED };
    let text = match format {
        Format::Json => json(&certs),
        Format::Text => render_certificates(&certs),
    };
    Ok(Output { text, code })
}

#[derive(Debug, Serialize)]
pub struct FullReport {
    pub constructions: Vec<VerificationReport>,
    pub replays: Vec<ReplayOutcome>,
    pub pencil: Vec<Certificate>,
    pub exit_status: i32,
}

#[derive(Debug, Serialize)]
pub struct ReplayOutcome {
    pub argument: Argument,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<ReplayReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Verifies the given constructions (the shipped ones when empty), replays
/// both printed exponent arguments and runs the pencil certificates.
pub fn cmd_report(sources: &[Source], format: Format) -> Result<Output, CliError> {
    let defaults = [Source::Builtin("main".into()), Source::Builtin("second".into())];
    let sources = if sources.is_empty() { &defaults[..] } else { sources };
    let constructions =
        sources.iter().map(|s| Ok(verify_construction(&s.load()?))).collect::<Result<Vec<_>, CliError>>()?;
    let replays: Vec<ReplayOutcome> = [Argument::Main, Argument::Second]
        .into_iter()
        .map(|a| match replay_paper_argument(a) {
            Ok(r) => ReplayOutcome { argument: a, report: Some(r), error: None },
            Err(e) => ReplayOutcome { argument: a, report: None, error: Some(e.to_string()) },
        })
        .collect();
    let pencil = pencil_certificates().map_err(|e| CliError::Usage(e.to_string()))?;
    let ok = constructions.iter().all(VerificationReport::passed)
        && replays.iter().all(|r| r.error.is_none())
        && pencil.iter().all(|c| c.passed);
    let report = FullReport { constructions, replays, pencil, exit_status: if ok { EXIT_OK } else { EXIT_FAILED } };
    let text = match format {
        Format::Json => json(&report),
        Format::Text => {
            let mut out = String::new();
            for c in &report.constructions {
                out.push_str(&c.to_text());
                out.push('\n');
            }
            for r in &report.replays {
                match (&r.report, &r.error) {
                    (Some(rep), _) => {
                        out.push_str(&format!("replay {:?}: pass\n", r.argument).to_lowercase());
                        for s in &rep.steps {
                            out.push_str(&format!("  {} = {}\n", s.statement, s.value));
                        }
                    }
                    (None, Some(e)) => out.push_str(&format!("replay {:?}: FAIL {e}\n", r.argument)),
                    (None, None) => {}
                }
            }
            out.push_str("\npencil\n");
            out.push_str(&render_certificates(&report.pencil));
            out.push_str(&format!("\nexit status {}\n", report.exit_status));
            out
        }
    };
    Ok(Output { text, code: report.exit_status })
}
