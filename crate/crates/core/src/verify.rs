//! End-to-end verification of a construction file.

use indexmap::IndexMap;
use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::blowdown::{
    discrepancies, effectivity_check, fiber_euler_audit, invariant_report, nef_ample_audit, pullback_canonical,
    verify_chain_embedding, NoetherCheck, Positivity,
};
use crate::construction::ConstructionFile;
use crate::exact::Rational;
use crate::lattice::CurveRole;
use crate::tchain::{boundary_lens, exponent_sequence, wahl_recognize};
use crate::vankampen::{h1_certificate, replay_argument, witness_incidence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// Whether a check compares against a printed constant or a value this
/// tool computes without a printed counterpart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    PaperConstant,
    Derived,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub provenance: Provenance,
    pub values: IndexMap<String, String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

impl CheckResult {
    fn new(name: &str, provenance: Provenance) -> Self {
        Self { name: name.into(), status: Status::Pass, provenance, values: IndexMap::new(), failures: Vec::new() }
    }

    fn value(&mut self, key: &str, v: impl ToString) -> &mut Self {
        self.values.insert(key.into(), v.to_string());
        self
    }

    fn fail(&mut self, why: impl Into<String>) -> &mut Self {
        self.status = Status::Fail;
        self.failures.push(why.into());
        self
    }

    fn require(&mut self, ok: bool, why: impl FnOnce() -> String) -> &mut Self {
        if !ok {
            self.fail(why());
        }
        self
    }

    fn skip(name: &str, provenance: Provenance, why: &str) -> Self {
        let mut c = Self::new(name, provenance);
        c.status = Status::Skipped;
        c.value("reason", why);
        c
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub construction: String,
    pub checks: Vec<CheckResult>,
    pub exit_status: i32,
}

impl VerificationReport {
    pub fn from_checks(construction: String, checks: Vec<CheckResult>) -> Self {
        let exit_status = if checks.iter().any(|c| c.status == Status::Fail) { 1 } else { 0 };
        Self { construction, checks, exit_status }
    }

    pub fn passed(&self) -> bool {
        self.exit_status == 0
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| c.status == Status::Fail).map(|c| c.name.as_str()).collect()
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("construction {}\n", self.construction);
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "skip",
            };
            let prov = match c.provenance {
                Provenance::PaperConstant => "paper constant",
                Provenance::Derived => "derived",
            };
            out.push_str(&format!("  [{status}] {} ({prov})\n", c.name));
            for (k, v) in &c.values {
                out.push_str(&format!("         {k} = {v}\n"));
            }
            for f in &c.failures {
                out.push_str(&format!("         failure: {f}\n"));
            }
        }
        out.push_str(&format!("exit status {}\n", self.exit_status));
        out
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

/// Runs every audit on `file` and records each as a named check.
pub fn verify_construction(file: &ConstructionFile) -> VerificationReport {
    let built = file.build();
    let s = &built.model;
    let e = file.embedding();
    let chain = &e.chain;
    let ex = &file.expected;
    let mut checks = Vec::new();

    let mut c = CheckResult::new("minus-one-curves", Provenance::Derived);
    c.value("declared", file.minus_one_curves.len());
    for err in &built.rejected_minus_one {
        c.fail(err.to_string());
    }
    checks.push(c);

    let mut c = CheckResult::new("chain-embedding", Provenance::PaperConstant);
    c.value("entries", chain);
    match verify_chain_embedding(s, &e) {
        Ok(r) => {
            c.value("self_intersections", join(&r.self_intersections));
            for f in &r.failures {
                c.fail(f.to_string());
            }
        }
        Err(err) => {
            c.fail(err.to_string());
        }
    }
    checks.push(c);

    let mut c = CheckResult::new("wahl-recognition", Provenance::PaperConstant);
    match wahl_recognize(chain) {
        Some(w) => {
            c.value("p", &w.p).value("q", &w.q);
            c.require(w.p == BigInt::from(ex.wahl.p) && w.q == BigInt::from(ex.wahl.q), || {
                format!("expected ({}, {})", ex.wahl.p, ex.wahl.q)
            });
        }
        None => {
            c.fail(format!("{chain} is not a Wahl chain"));
        }
    }
    checks.push(c);

    let mut c = CheckResult::new("boundary-lens", Provenance::PaperConstant);
    let lens = boundary_lens(chain, ex.lens.side);
    c.value("side", format!("{:?}", lens.side).to_lowercase()).value("lens", &lens);
    let n = BigInt::from(ex.lens.n);
    let q_matches = n > BigInt::from(0) && lens.qprime == BigInt::from(ex.lens.qprime).mod_floor(&n);
    c.require(lens.n == n && q_matches, || format!("expected L({}, {})", ex.lens.n, ex.lens.qprime));
    checks.push(c);

    let mut c = CheckResult::new("exponent-sequence", Provenance::PaperConstant);
    let seq = exponent_sequence(chain);
    c.value("c", join(&seq.c)).value("n", &seq.n);
    for (&i, &v) in &ex.exponent_spot_checks {
        let got = seq.get(i);
        c.require(*got == BigInt::from(v), || format!("c{i} = {got}, expected {v}"));
    }
    let k = seq.c.len();
    let last = &seq.c[k - 1];
    let before = if k > 1 { seq.c[k - 2].clone() } else { BigInt::from(0) };
    let terminal = BigInt::from(chain.entry(k)) * last - before;
    c.require(terminal == seq.n, || format!("b_k*c_k - c_(k-1) = {terminal} != n"));
    checks.push(c);

    let mut c = CheckResult::new("discrepancies", Provenance::Derived);
    match discrepancies(chain) {
        Ok(dv) => {
            let gain = dv.canonical_gain(chain);
            c.value("d", join(&dv.d)).value("sum_d_(b-2)", &gain);
            c.require(gain == Rational::from(k as i64), || format!("sum d_j(b_j - 2) = {gain}, expected {k}"));
        }
        Err(err) => {
            c.fail(err.to_string());
        }
    }
    checks.push(c);

    let pullback = pullback_canonical(s, &e);
    let mut c = CheckResult::new("pullback-canonical", Provenance::Derived);
    match &pullback {
        Ok(fk) => {
            c.value("f*K", fk).value("(f*K).G_i", "0 for every chain member");
        }
        Err(err) => {
            c.fail(err.to_string());
        }
    }
    checks.push(c);

    let mut c = CheckResult::new("invariant-report", Provenance::PaperConstant);
    match invariant_report(s, &e, file.context) {
        Ok(r) => {
            c.value("K2_Z", &r.k2_z)
                .value("K2_X", &r.k2_x)
                .value("e_Z", r.e_z)
                .value("e_X", r.e_x)
                .value("b2_drop", r.b2_drop);
            match r.noether {
                NoetherCheck::Holds { total } => c.value("noether", format!("{} + {} = {total}", r.k2_x, r.e_x)),
                NoetherCheck::ContextChecksSkipped => c.value("noether", "context checks skipped"),
            };
            if let (Some(pg), Some(q), Some(chi)) = (r.p_g, r.irregularity, r.chi_h) {
                c.value("p_g", pg).value("q", q).value("chi_h", chi);
            }
            c.require(r.k2_x == ex.k2_x, || format!("K2_X = {}, expected {}", r.k2_x, ex.k2_x));
            if let Some(want) = ex.e_x {
                c.require(r.e_x == want, || format!("e_X = {}, expected {want}", r.e_x));
            }
        }
        Err(err) => {
            c.fail(err.to_string());
        }
    }
    checks.push(c);

    let mut c = CheckResult::new("nef-ample-audit", Provenance::PaperConstant);
    match nef_ample_audit(s, &e) {
        Ok(a) => {
            c.value("K2_X", &a.k2_x);
            for t in &a.table {
                let tag = match t.status {
                    Positivity::Positive => "positive",
                    Positivity::ExpectedZero => "zero (contracted)",
                    Positivity::Zero => "zero",
                    Positivity::Negative => "NEGATIVE",
                };
                c.value(&format!("(f*K).{}", t.curve), format!("{} [{tag}]", t.product));
            }
            c.value("span_rank", format!("{} of {}", a.span_rank, a.picard_rank));
            c.value("note", a.note);
            c.require(a.k2_x.is_positive(), || "K_X^2 is not positive".into());
            for t in a.table.iter().filter(|t| t.role == CurveRole::MinusOneCurve && t.status != Positivity::Positive) {
                c.fail(format!("(f*K).{} = {} is not positive", t.curve, t.product));
            }
            for t in a.table.iter().filter(|t| t.status == Positivity::Negative && t.role != CurveRole::MinusOneCurve) {
                c.fail(format!("(f*K).{} = {} is negative", t.curve, t.product));
            }
        }
        Err(err) => {
            c.fail(err.to_string());
        }
    }
    checks.push(c);

    if file.decomposition.is_empty() {
        checks.push(CheckResult::skip("effectivity", Provenance::Derived, "no decomposition supplied"));
    } else {
        let mut c = CheckResult::new("effectivity", Provenance::Derived);
        match &pullback {
            Ok(fk) => match effectivity_check(s, fk, &file.decomposition_terms()) {
                Ok(r) => {
                    c.value("terms", file.decomposition.len());
                    c.require(r.matches, || format!("f*K - sum = {}", r.residual));
                    c.require(r.all_nonnegative, || "a coefficient is negative".into());
                }
                Err(err) => {
                    c.fail(err.to_string());
                }
            },
            Err(_) => {
                c.fail("f*K unavailable");
            }
        }
        checks.push(c);
    }

    if file.fibers.is_empty() {
        checks.push(CheckResult::skip("fiber-euler-audit", Provenance::PaperConstant, "no fibers listed"));
    } else {
        let mut c = CheckResult::new("fiber-euler-audit", Provenance::PaperConstant);
        let a = fiber_euler_audit(&file.fibers);
        c.value("fibers", join(&a.fibers)).value("total", a.total);
        c.require(a.passed(), || format!("Euler numbers sum to {}, expected {}", a.total, a.expected));
        checks.push(c);
    }

    let mut c = CheckResult::new("relation-witnesses", Provenance::Derived);
    let mut any_witness = false;
    for spec in &file.relations {
        let Some(w) = &spec.witness else { continue };
        any_witness = true;
        match witness_incidence(s, &e, &spec.relation, w) {
            Ok(mismatches) => {
                c.value(w, if mismatches.is_empty() { "incidences match" } else { "mismatch" });
                for m in mismatches {
                    c.fail(format!("{w}.{} = {}, expected {}", m.member, m.found, m.expected));
                }
            }
            Err(err) => {
                c.fail(err.to_string());
            }
        }
    }
    if any_witness {
        checks.push(c);
    } else {
        checks.push(CheckResult::skip("relation-witnesses", Provenance::Derived, "no witness curves"));
    }

    let mut c = CheckResult::new("h1-certificate", Provenance::Derived);
    match h1_certificate(chain, &file.relations()) {
        Ok(cert) => {
            c.value("n", &cert.n).value("exponents", join(&cert.exponents)).value("gcd", &cert.g);
            c.value("verdict", if cert.certified() { "H1-trivial-and-generator-coprime" } else { "H1-equals-Z_g" });
            c.value("assumptions", cert.assumptions.join("; "));
            c.require(cert.certified(), || format!("gcd is {}, so H1 = Z/{}", cert.g, cert.g));
        }
        Err(err) => {
            c.fail(err.to_string());
        }
    }
    checks.push(c);

    match file.replay {
        None => checks.push(CheckResult::skip("replay-argument", Provenance::PaperConstant, "no replay requested")),
        Some(which) => {
            let mut c = CheckResult::new("replay-argument", Provenance::PaperConstant);
            match replay_argument(which, chain) {
                Ok(r) => {
                    for step in &r.steps {
                        c.value(&step.statement, &step.value);
                    }
                }
                Err(err) => {
                    c.fail(err.to_string());
                }
            }
            checks.push(c);
        }
    }

    VerificationReport::from_checks(file.name.clone(), checks)
}
