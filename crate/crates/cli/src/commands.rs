use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tl_core::complex::ChainComplex;
use tl_core::error::{DiagramError, TorError, VerifyError};
use tl_core::smith::universal_coefficients;
use tl_core::tor::{bar_tor, cup_module, davis_tor, trivial_module, LeftModuleData, TorResult};
use tl_core::verify::{module_symbol, verify_theorems, Check, Claim, DegreeReport, Report, Status, VerifyOptions};
use tl_core::{
    build_davis, Coefficient, DiagramBasis, InnermostSet, PlanarDiagram, Ring, RingSpec, RingVisitor,
    TemperleyLieb,
};

use crate::output::{self, BasisListing, BasisRow, Format, Product};
use crate::{BarLimits, Command, Common, DavisAction, Failure, Method};

pub fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Basis { strands, output } => basis(strands, output),
        Command::Mul { strands, output, words } => mul(strands, output, &words),
        Command::Davis { action, common } => davis(action, &common),
        Command::Tor {
            common,
            limits,
            method,
            coefficients,
        } => tor(&common, &limits, method, &coefficients),
        Command::Verify {
            common,
            limits,
            theorem,
            seed,
        } => verify(&common, &limits, &theorem, seed),
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn check_strands(strands: usize) -> Result<(), Failure> {
    if strands == 0 {
        return Err(usage(DiagramError::ZeroStrands));
    }
    Ok(())
}

fn ring_spec(common: &Common) -> Result<RingSpec, Failure> {
    check_strands(common.strands)?;
    RingSpec::parse(&common.ring, &common.parameter).map_err(usage)
}

fn tor_failure(e: TorError) -> Failure {
    match e {
        TorError::RetractionFailed(_) | TorError::Complex(_) => Failure::Math(e.to_string()),
        _ => usage(e),
    }
}

fn basis(strands: usize, format: Format) -> Result<(), Failure> {
    check_strands(strands)?;
    let basis = DiagramBasis::new(strands).map_err(usage)?;
    let diagrams = basis
        .diagrams()
        .iter()
        .enumerate()
        .map(|(index, d)| BasisRow {
            index,
            partners: d.partners().collect(),
            right_cups: d.right_cups(),
        })
        .collect();
    let listing = BasisListing {
        strands,
        count: basis.len(),
        diagrams,
    };
    output::emit(&output::basis(&listing, format));
    Ok(())
}

fn parse_word(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| usage(format!("malformed word {text:?}"))))
        .collect()
}

fn mul(strands: usize, format: Format, words: &[String]) -> Result<(), Failure> {
    check_strands(strands)?;
    let mut word = Vec::new();
    for w in words {
        word.extend(parse_word(w)?);
    }
    let (diagram, exponent) = PlanarDiagram::from_word(strands, &word).map_err(usage)?;
    let all = tl_core::enumerate(strands).map_err(usage)?;
    let index = all.binary_search(&diagram).expect("enumeration is sorted and complete");
    let product = Product {
        strands,
        word,
        index,
        partners: diagram.partners().collect(),
        is_identity: diagram.is_identity(),
        exponent,
    };
    output::emit(&output::product(&product, format));
    Ok(())
}

fn davis(action: DavisAction, common: &Common) -> Result<(), Failure> {
    let spec = ring_spec(common)?;
    match action {
        DavisAction::Check => {
            let report = verify_theorems(common.strands, &spec, &[Claim::Contractible], VerifyOptions::default())
                .map_err(verify_failure)?;
            finish(&report, common.output)
        }
        DavisAction::Build | DavisAction::Homology => spec.visit(DavisJob {
            action,
            strands: common.strands,
            spec: &spec,
            format: common.output,
        }),
    }
}

struct DavisJob<'a> {
    action: DavisAction,
    strands: usize,
    spec: &'a RingSpec,
    format: Format,
}

impl RingVisitor for DavisJob<'_> {
    type Output = Result<(), Failure>;

    fn visit<T: Coefficient>(self, ring: Ring<T>) -> Self::Output {
        let alg = TemperleyLieb::new(self.strands, ring).map_err(usage)?;
        let dc = build_davis(&alg);
        let complex: &ChainComplex<T> = dc.complex();
        if self.action == DavisAction::Build {
            output::emit(&output::complex(&complex.to_json(), self.strands, self.format));
            return Ok(());
        }
        let mut homology = complex.homology().map_err(|e| Failure::Math(e.to_string()))?;
        if let Some(m) = self.spec.composite_modulus() {
            homology = universal_coefficients(&homology, m);
        }
        let report = Report {
            strands: self.strands,
            ring: self.spec.ring_name(),
            parameter: self.spec.parameter_string(),
            method: "davis_complex".into(),
            homology: homology
                .iter()
                .enumerate()
                .map(|(k, h)| DegreeReport {
                    degree: k,
                    free_rank: h.free_rank,
                    torsion: h.torsion.iter().map(ToString::to_string).collect(),
                    truncated: false,
                })
                .collect(),
            checks: Vec::new(),
        };
        output::emit(&output::report(&report, self.format));
        Ok(())
    }
}

enum Coefficients {
    Trivial,
    Cup(InnermostSet),
}

fn parse_coefficients(text: &str, strands: usize) -> Result<Coefficients, Failure> {
    if text == "trivial" {
        return Ok(Coefficients::Trivial);
    }
    let Some(list) = text.strip_prefix("cup:") else {
        return Err(usage(format!("coefficients must be `trivial` or `cup:<F>`, got {text:?}")));
    };
    InnermostSet::parse(strands - 1, list)
        .map(Coefficients::Cup)
        .map_err(usage)
}

fn tor(common: &Common, limits: &BarLimits, method: Method, coefficients: &str) -> Result<(), Failure> {
    let spec = ring_spec(common)?;
    let coefficients = parse_coefficients(coefficients, common.strands)?;
    if method != Method::Bar {
        if common.strands.is_multiple_of(2) {
            return Err(usage(TorError::EvenStrands(common.strands)));
        }
        if !matches!(coefficients, Coefficients::Trivial) {
            return Err(usage("the Davis route computes trivial coefficients only"));
        }
    }
    let report = spec.visit(TorJob {
        strands: common.strands,
        spec: &spec,
        coefficients,
        method,
        limits,
    })?;
    finish(&report, common.output)
}

struct TorJob<'a> {
    strands: usize,
    spec: &'a RingSpec,
    coefficients: Coefficients,
    method: Method,
    limits: &'a BarLimits,
}

impl TorJob<'_> {
    fn reduce(&self, t: TorResult) -> TorResult {
        match self.spec.composite_modulus() {
            Some(m) => t.reduce_mod(m),
            None => t,
        }
    }
}

impl RingVisitor for TorJob<'_> {
    type Output = Result<Report, Failure>;

    fn visit<T: Coefficient>(self, ring: Ring<T>) -> Self::Output {
        let alg = TemperleyLieb::new(self.strands, ring).map_err(usage)?;
        let bar = |module: &LeftModuleData<T>| {
            bar_tor(&alg, module, self.limits.max_degree as usize, self.limits.budget)
                .map(|t| self.reduce(t))
                .map_err(tor_failure)
        };
        let symbol = module_symbol(self.spec);
        let render = |h: &[tl_core::ModulePresentation]| {
            h.iter().map(|m| m.render(&symbol)).collect::<Vec<_>>().join(", ")
        };
        let mut checks = Vec::new();
        let result = match self.method {
            Method::Bar => {
                let module = match &self.coefficients {
                    Coefficients::Trivial => trivial_module(&alg),
                    Coefficients::Cup(f) => cup_module(&alg, f).map_err(tor_failure)?,
                };
                bar(&module)?
            }
            Method::Davis => self.reduce(davis_tor(&alg).map_err(tor_failure)?),
            Method::Both => {
                let davis = self.reduce(davis_tor(&alg).map_err(tor_failure)?);
                let b = bar(&trivial_module(&alg))?;
                let agree = b
                    .reliable()
                    .iter()
                    .enumerate()
                    .all(|(k, h)| davis.homology.get(k).map_or(h.is_zero(), |d| d == h));
                checks.push(Check {
                    name: "methods_agree".into(),
                    status: if agree { Status::Pass } else { Status::Fail },
                    detail: format!("davis [{}], bar exact part [{}]", render(&davis.homology), render(b.reliable())),
                });
                davis
            }
        };
        if result.budget_limited() {
            checks.push(Check {
                name: "budget".into(),
                status: Status::Info,
                detail: format!(
                    "bar complex stopped at degree {} of {} requested",
                    result.top_degree(),
                    result.requested_degree
                ),
            });
        }
        let mut report = Report::from_tor(self.strands, self.spec, &result);
        if self.method == Method::Both {
            report.method = "both".into();
        }
        report.checks = checks;
        Ok(report)
    }
}

fn verify_failure(e: VerifyError) -> Failure {
    match e {
        VerifyError::Tor(t) => tor_failure(t),
        VerifyError::Complex(c) => Failure::Math(c.to_string()),
        other => usage(other),
    }
}

fn verify(common: &Common, limits: &BarLimits, theorem: &str, seed: u64) -> Result<(), Failure> {
    let spec = ring_spec(common)?;
    let claims = match theorem {
        "all" => Claim::applicable(common.strands, &spec),
        t => {
            let mut chars = t.chars();
            match (chars.next().and_then(Claim::from_letter), chars.next()) {
                (Some(c), None) => vec![c],
                _ => return Err(usage(format!("--theorem must be a, b, c, d or all, got {t:?}"))),
            }
        }
    };
    let options = VerifyOptions {
        max_degree: limits.max_degree as usize,
        budget: limits.budget,
        ..VerifyOptions::default()
    };
    let mut report = verify_theorems(common.strands, &spec, &claims, options).map_err(verify_failure)?;
    report.checks.push(spec.visit(Associativity {
        strands: common.strands,
        seed,
    })?);
    finish(&report, common.output)
}

/// Random triples of basis diagrams: `(xy)z = x(yz)` with loop weights.
struct Associativity {
    strands: usize,
    seed: u64,
}

const ASSOCIATIVITY_SAMPLES: usize = 200;

impl RingVisitor for Associativity {
    type Output = Result<Check, Failure>;

    fn visit<T: Coefficient>(self, ring: Ring<T>) -> Self::Output {
        let alg = TemperleyLieb::new(self.strands, ring).map_err(usage)?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let n = alg.dimension();
        let mut bad = None;
        for _ in 0..ASSOCIATIVITY_SAMPLES {
            let [x, y, z] = [0; 3].map(|_| alg.basis_element(rng.gen_range(0..n)).expect("in range"));
            let left = alg.multiply(&alg.multiply(&x, &y).expect("same algebra"), &z).expect("same algebra");
            let right = alg.multiply(&x, &alg.multiply(&y, &z).expect("same algebra")).expect("same algebra");
            if left != right {
                bad = Some(format!("{:?} {:?} {:?}", x.to_json().terms, y.to_json().terms, z.to_json().terms));
                break;
            }
        }
        Ok(Check {
            name: "algebra.associativity".into(),
            status: if bad.is_none() { Status::Pass } else { Status::Fail },
            detail: bad.unwrap_or_else(|| format!("{ASSOCIATIVITY_SAMPLES} random triples, seed {}", self.seed)),
        })
    }
}

fn finish(report: &Report, format: Format) -> Result<(), Failure> {
    output::emit(&output::report(report, format));
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_split_on_spaces_and_commas() {
        assert_eq!(parse_word("1 0,2").unwrap(), vec![1, 0, 2]);
        assert!(parse_word("").unwrap().is_empty());
        assert!(parse_word("1 -1").is_err());
    }

    #[test]
    fn coefficient_specs() {
        assert!(matches!(parse_coefficients("trivial", 3), Ok(Coefficients::Trivial)));
        match parse_coefficients("cup:0,2", 4) {
            Ok(Coefficients::Cup(f)) => assert_eq!(f.members(), &[0, 2]),
            _ => panic!("cup:0,2 should parse"),
        }
        assert!(parse_coefficients("cup:0,1", 4).is_err());
        assert!(parse_coefficients("regular", 4).is_err());
    }
}
