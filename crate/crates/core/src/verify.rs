//! Cross-checked verification of the vanishing statements, with a
//! JSON-serializable report.
//!
//! Four claims are checked:
//!
//! - [`Claim::Contractible`]: the Davis complex is a resolution of `1`
//!   (any strand count).
//! - [`Claim::OddVanishing`]: `H_*(TL, 1)` is `R` in degree 0 and zero
//!   above, for odd strand counts.
//! - [`Claim::EvenShift`]: for even `s`, `H_k(TL, 1) = 0` for
//!   `0 < k < s/2` and `H_{s/2+k}(TL, 1) ≅ H_k(TL, ⟨M⟩)`.
//! - [`Claim::UnitParameter`]: vanishing in positive degrees when the
//!   parameter is a unit.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::TemperleyLieb;
use crate::coeff::{Coefficient, Ring, RingSpec, RingVisitor};
use crate::davis::{build_davis, coinvariants, expected_coinvariants, maximal_set_composite, subcomplex_of_diagram};
use crate::error::{TorError, VerifyError};
use crate::innermost::unique_maximal_innermost;
use crate::matrix::SparseMatrix;
use crate::smith::{cokernel, universal_coefficients, ModulePresentation};
use crate::tor::{
    bar_tor, check_retractions, cup_module, davis_tor, he1_page, trivial_module, TorMethod, TorResult, DEFAULT_BUDGET,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Claim {
    OddVanishing,
    EvenShift,
    UnitParameter,
    Contractible,
}

impl Claim {
    pub const ALL: [Claim; 4] = [Claim::OddVanishing, Claim::EvenShift, Claim::UnitParameter, Claim::Contractible];

    /// Command-line letter.
    pub fn letter(self) -> char {
        match self {
            Claim::OddVanishing => 'a',
            Claim::EvenShift => 'b',
            Claim::UnitParameter => 'c',
            Claim::Contractible => 'd',
        }
    }

    pub fn from_letter(c: char) -> Option<Claim> {
        Claim::ALL.into_iter().find(|t| t.letter() == c.to_ascii_lowercase())
    }

    fn prefix(self) -> &'static str {
        match self {
            Claim::OddVanishing => "odd_vanishing",
            Claim::EvenShift => "even_shift",
            Claim::UnitParameter => "unit_parameter",
            Claim::Contractible => "contractible",
        }
    }

    /// The claims whose hypotheses hold for this strand count and ring.
    pub fn applicable(strands: usize, spec: &RingSpec) -> Vec<Claim> {
        Claim::ALL
            .into_iter()
            .filter(|t| t.precondition(strands, spec).is_ok())
            .collect()
    }

    fn precondition(self, strands: usize, spec: &RingSpec) -> Result<(), VerifyError> {
        let fail = |requirement: &str| {
            Err(VerifyError::Precondition {
                theorem: self.letter(),
                requirement: requirement.into(),
            })
        };
        match self {
            Claim::OddVanishing if strands.is_multiple_of(2) => fail("an odd strand count"),
            Claim::EvenShift if strands % 2 == 1 => fail("an even strand count"),
            Claim::UnitParameter if !spec.parameter_is_unit() => fail("a unit parameter"),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    /// Nothing in range to compare.
    Skip,
    /// Reported for information, never a failure.
    Info,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub degree: usize,
    pub free_rank: usize,
    /// Invariant factors as decimal strings.
    pub torsion: Vec<String>,
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub strands: usize,
    pub ring: String,
    pub parameter: String,
    pub method: String,
    pub homology: Vec<DegreeReport>,
    pub checks: Vec<Check>,
}

impl Report {
    /// A report for one Tor computation, without checks.
    pub fn from_tor(strands: usize, spec: &RingSpec, tor: &TorResult) -> Report {
        Report {
            strands,
            ring: spec.ring_name(),
            parameter: spec.parameter_string(),
            method: tor.method.to_string(),
            homology: degree_reports(tor),
            checks: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }
}

pub fn degree_reports(tor: &TorResult) -> Vec<DegreeReport> {
    tor.homology
        .iter()
        .enumerate()
        .map(|(k, h)| DegreeReport {
            degree: k,
            free_rank: h.free_rank,
            torsion: h.torsion.iter().map(ToString::to_string).collect(),
            truncated: !tor.is_reliable(k),
        })
        .collect()
}

/// How a module is written for this ring: `Z`, `Q`, `F_p`, or `(Z/m)`.
pub fn module_symbol(spec: &RingSpec) -> String {
    match spec.composite_modulus() {
        Some(m) => format!("(Z/{m})"),
        None => spec.ring_name(),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Bar complex degree; degrees below it are exact.
    pub max_degree: usize,
    pub budget: u128,
    /// Largest `β` of the hE¹ page checked for odd strand counts.
    pub he1_max_beta: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_degree: 4,
            budget: DEFAULT_BUDGET,
            he1_max_beta: 1,
        }
    }
}

/// Runs the requested claims. A claim whose hypothesis fails (parity, or a
/// non-unit parameter) is a usage error, not a failed check.
pub fn verify_theorems(
    strands: usize,
    spec: &RingSpec,
    claims: &[Claim],
    options: VerifyOptions,
) -> Result<Report, VerifyError> {
    for c in claims {
        c.precondition(strands, spec)?;
    }
    spec.visit(Verifier {
        strands,
        spec,
        claims,
        options,
    })
}

struct Verifier<'a> {
    strands: usize,
    spec: &'a RingSpec,
    claims: &'a [Claim],
    options: VerifyOptions,
}

impl RingVisitor for Verifier<'_> {
    type Output = Result<Report, VerifyError>;

    fn visit<T: Coefficient>(self, ring: Ring<T>) -> Self::Output {
        let alg = TemperleyLieb::new(self.strands, ring)?;
        let mut run = Run {
            alg: &alg,
            spec: self.spec,
            options: self.options,
            symbol: module_symbol(self.spec),
            bar: None,
            checks: Vec::new(),
        };
        // Tor itself for odd s; otherwise bar Tor if a claim needs it, and
        // the Davis complex homology when only contractibility was asked.
        let needs_bar = self
            .claims
            .iter()
            .any(|c| matches!(c, Claim::EvenShift | Claim::UnitParameter));
        let (method, homology) = if self.strands % 2 == 1 {
            let t = run.davis()?;
            (t.method.to_string(), degree_reports(&t))
        } else if needs_bar {
            let t = run.bar()?;
            (t.method.to_string(), degree_reports(t))
        } else {
            let h = run.reduce(build_davis(&alg).complex().homology()?);
            let exact = TorResult {
                reliable_through: Some(h.len() - 1),
                requested_degree: h.len() - 1,
                homology: h,
                method: TorMethod::Davis,
            };
            ("davis_complex".to_string(), degree_reports(&exact))
        };
        for &claim in self.claims {
            match claim {
                Claim::Contractible => run.contractible()?,
                Claim::OddVanishing => run.odd_vanishing()?,
                Claim::EvenShift => run.even_shift()?,
                Claim::UnitParameter => run.unit_parameter()?,
            }
        }
        Ok(Report {
            strands: self.strands,
            ring: self.spec.ring_name(),
            parameter: self.spec.parameter_string(),
            method,
            homology,
            checks: run.checks,
        })
    }
}

struct Run<'a, T: Coefficient> {
    alg: &'a TemperleyLieb<T>,
    spec: &'a RingSpec,
    options: VerifyOptions,
    symbol: String,
    bar: Option<TorResult>,
    checks: Vec<Check>,
}

impl<T: Coefficient> Run<'_, T> {
    fn reduce(&self, h: Vec<ModulePresentation>) -> Vec<ModulePresentation> {
        match self.spec.composite_modulus() {
            Some(m) => universal_coefficients(&h, m),
            None => h,
        }
    }

    fn reduce_tor(&self, t: TorResult) -> TorResult {
        match self.spec.composite_modulus() {
            Some(m) => t.reduce_mod(m),
            None => t,
        }
    }

    fn render(&self, h: &[ModulePresentation]) -> String {
        let parts: Vec<String> = h.iter().map(|m| m.render(&self.symbol)).collect();
        format!("[{}]", parts.join(", "))
    }

    fn push(&mut self, claim: Claim, name: &str, status: Status, detail: String) {
        self.checks.push(Check {
            name: format!("{}.{name}", claim.prefix()),
            status,
            detail,
        });
    }

    fn check(&mut self, claim: Claim, name: &str, ok: bool, detail: String) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.push(claim, name, status, detail);
    }

    /// `R` in degree 0 and zero in degrees `1..len`.
    fn point(len: usize) -> Vec<ModulePresentation> {
        let mut v = vec![ModulePresentation::zero(); len];
        if let Some(first) = v.first_mut() {
            *first = ModulePresentation::free(1);
        }
        v
    }

    fn bar(&mut self) -> Result<&TorResult, VerifyError> {
        if self.bar.is_none() {
            let t = bar_tor(self.alg, &trivial_module(self.alg), self.options.max_degree, self.options.budget)?;
            self.bar = Some(self.reduce_tor(t));
        }
        Ok(self.bar.as_ref().expect("just computed"))
    }

    fn davis(&self) -> Result<TorResult, VerifyError> {
        Ok(self.reduce_tor(davis_tor(self.alg)?))
    }

    fn bar_note(tor: &TorResult) -> String {
        match tor.reliable_through {
            Some(r) if tor.budget_limited() => format!(" (bar exact through degree {r}, stopped by the size budget)"),
            Some(r) => format!(" (bar exact through degree {r})"),
            None => " (no exact bar degree)".into(),
        }
    }

    fn contractible(&mut self) -> Result<(), VerifyError> {
        let claim = Claim::Contractible;
        let davis = build_davis(self.alg);
        let c = davis.complex();
        let top = c.top_degree();
        let ok = c.verify_d_squared();
        let detail = match c.first_d_squared_failure() {
            None => format!("ranks {:?}", c.ranks()),
            Some(k) => format!("d_{k} ∘ d_{} ≠ 0", k + 1),
        };
        self.check(claim, "d_squared", ok, detail);
        if !ok {
            return Ok(());
        }

        let h = self.reduce(c.homology()?);
        let expected = Self::point(top + 1);
        self.check(claim, "homology", h == expected, self.render(&h));

        let chi = c.euler_characteristic();
        self.check(claim, "euler_characteristic", chi == 1, format!("χ = {chi}"));

        // im δ_1 = TL-hat inside TL = ⟨∅⟩
        let id_row = davis.blocks(0)[0]
            .cup
            .position(self.alg.basis().identity_index())
            .expect("identity has no right cups");
        let (ok, detail) = match c.differential(1) {
            None => (true, "no positive degrees".to_string()),
            Some(d1) => {
                let touches_identity = d1.triplets().any(|(r, _, _)| r == id_row);
                let rows: Vec<usize> = (0..d1.rows()).filter(|&r| r != id_row).collect();
                let cols: Vec<usize> = (0..d1.cols()).collect();
                let quotient = cokernel(&d1.submatrix(&rows, &cols));
                (
                    !touches_identity && quotient.is_zero(),
                    format!("TL-hat / im δ_1 = {}", quotient.render(&self.symbol)),
                )
            }
        };
        self.check(claim, "augmentation_image", ok, detail);

        let identity = self.alg.basis().identity_index();
        let failures: Vec<String> = (0..self.alg.dimension())
            .into_par_iter()
            .filter_map(|a| {
                let sub = subcomplex_of_diagram(&davis, a);
                let h = sub.homology().map(|h| self.reduce(h));
                let good = match &h {
                    Ok(h) if a == identity => *h == Self::point(h.len()),
                    Ok(h) => h.iter().all(ModulePresentation::is_zero),
                    Err(_) => false,
                };
                (!good).then(|| self.alg.basis().diagram(a).to_string())
            })
            .collect();
        let detail = if failures.is_empty() {
            format!("{} diagram summands, only the identity has homology", self.alg.dimension())
        } else {
            format!("summands with unexpected homology: {}", failures.join(" "))
        };
        self.check(claim, "per_diagram_splitting", failures.is_empty(), detail);
        Ok(())
    }

    fn odd_vanishing(&mut self) -> Result<(), VerifyError> {
        let claim = Claim::OddVanishing;
        let davis = &self.davis()?;
        match check_retractions(self.alg) {
            Ok(()) => self.check(claim, "retractions", true, "retraction ∘ inclusion = id for every F".into()),
            Err(TorError::RetractionFailed(f)) => {
                self.check(claim, "retractions", false, format!("fails for F = {f}"))
            }
            Err(e) => return Err(e.into()),
        }

        let expected = Self::point(davis.homology.len());
        self.check(claim, "davis", davis.homology == expected, self.render(&davis.homology));

        let bar = self.bar()?.clone();
        let reliable = bar.reliable();
        let ok = reliable.iter().enumerate().all(|(k, h)| {
            davis.homology.get(k).map_or(h.is_zero(), |d| d == h)
        });
        let detail = format!("bar {}{}", self.render(reliable), Self::bar_note(&bar));
        self.check(claim, "bar_agreement", ok, detail);

        let dim = self.alg.dimension() as u128;
        if dim * dim > self.options.budget {
            self.push(claim, "he1_page", Status::Skip, "regular module too large for the bar budget".into());
            return Ok(());
        }
        let mut page = he1_page(self.alg, self.options.he1_max_beta, self.options.budget)?;
        if let Some(m) = self.spec.composite_modulus() {
            page = page.reduce_mod(m);
        }
        let support = page.support();
        let origin_ok = page.entries[0][0] == ModulePresentation::free(1);
        let detail = format!(
            "nonzero entries {:?} for β ≤ {}",
            support,
            page.reliable_through.map_or("none".into(), |r| r.to_string())
        );
        self.check(claim, "he1_page", origin_ok && support == vec![(0, 0)], detail);
        Ok(())
    }

    fn even_shift(&mut self) -> Result<(), VerifyError> {
        let claim = Claim::EvenShift;
        let s = self.alg.strands();
        let half = s / 2;
        let bar = self.bar()?.clone();

        let low: Vec<usize> = (1..half).filter(|&k| bar.is_reliable(k)).collect();
        if low.is_empty() {
            self.push(claim, "vanishing", Status::Skip, format!("no exact degree in 1..{half}"));
        } else {
            let ok = low.iter().all(|&k| bar.homology[k].is_zero());
            let shown: Vec<ModulePresentation> = low.iter().map(|&k| bar.homology[k].clone()).collect();
            self.check(claim, "vanishing", ok, format!("H_k for k in {low:?}: {}", self.render(&shown)));
        }

        let m = unique_maximal_innermost(s).map_err(TorError::from)?;
        let module = cup_module(self.alg, &m)?;
        let m_degree = self.options.max_degree.saturating_sub(half).max(1);
        let m_bar = self.reduce_tor(bar_tor(self.alg, &module, m_degree, self.options.budget)?);

        let direct = self.reduce(vec![coinvariants(self.alg, &m)?]);
        let formula = self.reduce(vec![expected_coinvariants(self.alg, &m)]);
        let h0 = m_bar.homology[0].clone();
        self.check(
            claim,
            "coinvariants_of_maximal",
            m_bar.is_reliable(0) && h0 == direct[0] && h0 == formula[0],
            format!(
                "H_0(TL, ⟨M⟩) = {}, coinvariants {}, closed form {}",
                h0.render(&self.symbol),
                direct[0].render(&self.symbol),
                formula[0].render(&self.symbol)
            ),
        );

        let pairs: Vec<usize> = (0..)
            .take_while(|&k| bar.is_reliable(half + k) && m_bar.is_reliable(k))
            .collect();
        if pairs.is_empty() {
            self.push(claim, "shift", Status::Skip, "no degree exact on both sides".into());
        } else {
            let ok = pairs.iter().all(|&k| bar.homology[half + k] == m_bar.homology[k]);
            let detail = pairs
                .iter()
                .map(|&k| {
                    format!(
                        "H_{} = {} vs H_{k}(⟨M⟩) = {}",
                        half + k,
                        bar.homology[half + k].render(&self.symbol),
                        m_bar.homology[k].render(&self.symbol)
                    )
                })
                .collect::<Vec<_>>()
                .join("; ");
            self.check(claim, "shift", ok, detail);
        }

        if !self.spec.parameter_is_unit() && bar.is_reliable(s - 1) {
            let h = &bar.homology[s - 1];
            let word = if h.is_zero() { "zero" } else { "nonzero" };
            let detail = format!("H_{} = {} ({word})", s - 1, h.render(&self.symbol));
            self.push(claim, "top_degree", Status::Info, detail);
        }
        Ok(())
    }

    fn unit_parameter(&mut self) -> Result<(), VerifyError> {
        let claim = Claim::UnitParameter;
        let bar = self.bar()?.clone();
        let reliable = bar.reliable();
        let ok = reliable.iter().skip(1).all(ModulePresentation::is_zero);
        let detail = format!("bar {}{}", self.render(reliable), Self::bar_note(&bar));
        self.check(claim, "bar_vanishing", ok, detail);

        if self.alg.strands() % 2 == 1 {
            let primary = self.davis()?;
            let ok = primary.homology.iter().skip(1).all(ModulePresentation::is_zero);
            self.check(claim, "davis_vanishing", ok, self.render(&primary.homology));
        } else {
            let composite = maximal_set_composite(self.alg)?;
            let expected = SparseMatrix::identity(composite.rows(), &self.alg.ring().one())
                .scale(self.alg.ring().parameter());
            self.check(
                claim,
                "maximal_composite",
                composite == expected,
                format!("⟨M⟩ → ⟨M - {{0}}⟩ → ⟨M⟩ on {} basis elements", composite.rows()),
            );
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn statuses(r: &Report) -> Vec<(String, Status)> {
        r.checks.iter().map(|c| (c.name.clone(), c.status)).collect()
    }

    #[test]
    fn odd_strands_integers() {
        let r = verify_theorems(3, &RingSpec::integers(0), &Claim::applicable(3, &RingSpec::integers(0)), VerifyOptions::default()).unwrap();
        assert!(r.passed(), "{:?}", statuses(&r));
        assert_eq!(r.method, "davis");
        assert_eq!(r.homology.len(), 2);
    }

    #[test]
    fn two_strands_shift() {
        let spec = RingSpec::integers(2);
        let r = verify_theorems(2, &spec, &[Claim::EvenShift], VerifyOptions::default()).unwrap();
        assert!(r.passed(), "{:?}", statuses(&r));
        assert_eq!(r.homology[1].torsion, vec!["2".to_string()]);
        assert!(r.checks.iter().any(|c| c.name == "even_shift.top_degree" && c.status == Status::Info));
    }

    #[test]
    fn preconditions() {
        let z0 = RingSpec::integers(0);
        assert!(matches!(
            verify_theorems(4, &z0, &[Claim::OddVanishing], VerifyOptions::default()),
            Err(VerifyError::Precondition { theorem: 'a', .. })
        ));
        assert!(verify_theorems(3, &z0, &[Claim::EvenShift], VerifyOptions::default()).is_err());
        assert!(verify_theorems(3, &z0, &[Claim::UnitParameter], VerifyOptions::default()).is_err());
        assert_eq!(Claim::applicable(4, &RingSpec::integers(-1)).len(), 3);
    }

    #[test]
    fn composite_modulus_uses_universal_coefficients() {
        let spec = RingSpec::parse("Zmod:4", "2").unwrap();
        let r = verify_theorems(2, &spec, &[Claim::EvenShift, Claim::Contractible], VerifyOptions::default()).unwrap();
        assert!(r.passed(), "{:?}", r.checks);
        // H_1 over Z is Z/2; tensored with Z/4 it is Z/2
        assert_eq!(r.homology[1].torsion, vec!["2".to_string()]);
    }

    #[test]
    fn letters_round_trip() {
        for c in Claim::ALL {
            assert_eq!(Claim::from_letter(c.letter()), Some(c));
        }
        assert_eq!(Claim::from_letter('e'), None);
    }
}
