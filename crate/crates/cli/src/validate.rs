//! Cross-checks between the modules, on one input and on random instances.

use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use subtori_core::addcoh::{cohomology_groups, e2_page};
use subtori_core::arimat::GroundSet;
use subtori_core::arrangement::{poset_of, LayerPoset};
use subtori_core::ospres::{integral_conjecture_check, JConvention, Presentation};
use subtori_core::topo::{mobius, order_complex, reduced_euler_characteristic, reduced_homology};

use crate::input::{ArrangementFile, ParseError};
use crate::random::{random_arrangement, Caps};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub instance: String,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub instances: Vec<InstanceSummary>,
    pub checks: Vec<CheckResult>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceSummary {
    pub label: String,
    pub divisorial: bool,
    pub unimodular: Option<bool>,
    pub arrangement: ArrangementFile,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn checks_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a CheckResult> + 'a {
        self.checks.iter().filter(move |c| c.name == name)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.passed(),
            "instance_count": self.instances.len(),
            "divisorial_count": self.instances.iter().filter(|i| i.divisorial).count(),
            "instances": self.instances.iter().map(|i| json!({
                "label": i.label,
                "divisorial": i.divisorial,
                "unimodular": i.unimodular,
                "arrangement": serde_json::to_value(&i.arrangement).unwrap(),
            })).collect::<Vec<_>>(),
            "checks": self.checks.iter().map(|c| json!({
                "instance": c.instance,
                "check": c.name,
                "status": if c.passed { "pass" } else { "fail" },
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_table(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .checks
            .iter()
            .map(|c| {
                vec![
                    c.instance.clone(),
                    c.name.to_string(),
                    if c.passed { "pass" } else { "FAIL" }.to_string(),
                    c.detail.clone(),
                ]
            })
            .collect();
        let mut out = crate::table::render(&["instance", "check", "status", "detail"], &rows);
        out.push_str(&format!(
            "{} instances, {} checks, {} failed\n",
            self.instances.len(),
            self.checks.len(),
            self.failures().count()
        ));
        out
    }
}

fn check(
    report: &mut ValidationReport,
    instance: &str,
    name: &'static str,
    result: Result<String, String>,
) {
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    report.checks.push(CheckResult {
        instance: instance.to_string(),
        name,
        passed,
        detail,
    });
}

fn mobius_euler(poset: &LayerPoset) -> Result<String, String> {
    let mut intervals = 0;
    for x in 0..poset.len() {
        for y in 0..poset.len() {
            if !poset.leq(x, y) {
                continue;
            }
            intervals += 1;
            let mu = mobius(poset, x, y).map_err(|e| e.to_string())?;
            let cx = order_complex(poset, x, y).map_err(|e| e.to_string())?;
            let chi = reduced_euler_characteristic(&reduced_homology(&cx));
            if mu != chi {
                return Err(format!(
                    "interval [{x}, {y}]: mu = {mu}, reduced Euler characteristic = {chi}"
                ));
            }
        }
    }
    Ok(format!("{intervals} intervals"))
}

fn degeneration(poset: &LayerPoset) -> Result<String, String> {
    let betti = cohomology_groups(poset);
    let e2 = e2_page(poset);
    for (k, group) in betti.degrees.iter().enumerate() {
        let total = e2.total(k);
        if &total != group {
            return Err(format!("degree {k}: E2 total {total}, cohomology {group}"));
        }
    }
    Ok(format!("{} degrees", betti.degrees.len()))
}

fn nbc_dimension(pres: &Presentation, poset: &LayerPoset) -> Result<(String, Vec<usize>), String> {
    let d = poset.ambient_rank();
    let additive = cohomology_groups(poset).free_ranks();
    if let Some(k) = (d + 1..additive.len()).find(|&k| additive[k] != 0) {
        return Err(format!(
            "additive rank {} in degree {k} above the ambient rank",
            additive[k]
        ));
    }
    let nbc = pres
        .nbc_basis_and_dimensions(d)
        .map_err(|e| e.to_string())?;
    if nbc.dimensions[..] != additive[..=d] || nbc.poincare[..] != additive[..] {
        return Err(format!(
            "quotient {:?}, NBC count {:?}, additive {:?}",
            nbc.dimensions, nbc.poincare, additive
        ));
    }
    Ok((format!("dimensions {:?}", nbc.dimensions), nbc.dimensions))
}

fn j_agreement(poset: &LayerPoset, min_dims: &[usize]) -> Result<String, String> {
    let d = poset.ambient_rank();
    let max = Presentation::new(poset, JConvention::Max).map_err(|e| e.to_string())?;
    let max_dims = max.quotient_dimensions(d);
    if max_dims != min_dims {
        return Err(format!("min {min_dims:?}, max {max_dims:?}"));
    }
    Ok(format!("both {max_dims:?}"))
}

fn circuit_coefficients(ground: &GroundSet) -> Result<String, String> {
    let circuits = ground.circuits(ground.full_mask());
    for c in &circuits {
        let mc = ground.lattice_multiplicity(&c.support);
        for (k, &i) in c.support.iter().enumerate() {
            let rest: Vec<usize> = c.support.iter().copied().filter(|&j| j != i).collect();
            let lhs = &mc * c.relation[k].abs();
            let rhs = ground.lattice_multiplicity(&rest);
            if lhs != rhs {
                return Err(format!(
                    "circuit {:?}, atom {i}: m(C)·|r_i| = {lhs}, m(C∖i) = {rhs}",
                    c.support
                ));
            }
        }
    }
    Ok(format!("{} circuits", circuits.len()))
}

fn sign_flip(pres: &Presentation) -> Result<String, String> {
    let d = pres.ambient_rank();
    let plain = pres.circuit_relations_oriented(false, false);
    let flipped = pres.circuit_relations_oriented(true, false);
    let both: Vec<_> = plain.iter().chain(&flipped).cloned().collect();
    for k in 0..=d {
        let r = pres.graded_piece_with(k, &plain).rank();
        let f = pres.graded_piece_with(k, &flipped).rank();
        let b = pres.graded_piece_with(k, &both).rank();
        if r != f || r != b {
            return Err(format!(
                "degree {k}: ranks {r} (as given), {f} (flipped), {b} (together)"
            ));
        }
    }
    Ok(format!("{} circuit relations", plain.len()))
}

fn relations_vanish(pres: &Presentation) -> Result<String, String> {
    let d = pres.ambient_rank();
    let circuits = pres.circuit_relations();
    let pieces: Vec<_> = (0..=d)
        .map(|k| pres.graded_piece_with(k, &circuits))
        .collect();
    for rel in &circuits {
        let e = pres.expand(rel);
        let coords = pres
            .reduce_in(&pieces[rel.degree], &e)
            .map_err(|e| e.to_string())?;
        if !coords.is_empty() {
            return Err(format!(
                "{:?} reduces to {} basis terms",
                rel.origin,
                coords.len()
            ));
        }
    }
    Ok(format!("{} circuit relations", circuits.len()))
}

fn integral_probe(pres: &Presentation, poset: &LayerPoset) -> Result<String, String> {
    let report = integral_conjecture_check(pres, &cohomology_groups(poset), poset.ambient_rank());
    let mismatched: Vec<String> = report
        .degrees
        .iter()
        .filter(|c| !c.matches)
        .map(|c| {
            format!(
                "degree {}: presentation {}, cohomology {}",
                c.degree, c.presentation, c.cohomology
            )
        })
        .collect();
    if mismatched.is_empty() {
        Ok(format!("match in degrees 0..={}", poset.ambient_rank()))
    } else if report.unimodular {
        Err(format!("unimodular instance: {}", mismatched.join("; ")))
    } else {
        Ok(format!(
            "finding (not unimodular): {}",
            mismatched.join("; ")
        ))
    }
}

/// Runs every applicable check on one arrangement.
pub fn validate_instance(
    report: &mut ValidationReport,
    label: &str,
    file: &ArrangementFile,
) -> Result<(), ParseError> {
    let arrangement = file.arrangement()?;
    let divisorial = arrangement.is_divisorial();
    let poset = poset_of(arrangement);
    check(report, label, "mobius_euler", mobius_euler(&poset));
    check(report, label, "e2_degeneration", degeneration(&poset));
    let mut unimodular = None;
    if divisorial {
        let ground =
            GroundSet::from_arrangement(&poset.arrangement).map_err(ParseError::Arrangement)?;
        unimodular = Some(ground.is_unimodular());
        check(
            report,
            label,
            "circuit_coefficients",
            circuit_coefficients(&ground),
        );
        let pres = Presentation::new(&poset, JConvention::Min).map_err(ParseError::Arrangement)?;
        match nbc_dimension(&pres, &poset) {
            Ok((detail, dims)) => {
                check(report, label, "nbc_dimension", Ok(detail));
                check(report, label, "j_convention", j_agreement(&poset, &dims));
                check(report, label, "relations_vanish", relations_vanish(&pres));
            }
            Err(e) => check(report, label, "nbc_dimension", Err(e)),
        }
        check(report, label, "circuit_sign_flip", sign_flip(&pres));
        check(
            report,
            label,
            "integral_probe",
            integral_probe(&pres, &poset),
        );
    }
    report.instances.push(InstanceSummary {
        label: label.to_string(),
        divisorial,
        unimodular,
        arrangement: file.clone(),
    });
    Ok(())
}

/// Checks `file` (if given) and `random` seeded random arrangements, which
/// alternate between divisorial and general ones.
pub fn validate_suite(
    file: Option<&ArrangementFile>,
    seed: u64,
    random: usize,
    caps: Caps,
) -> Result<ValidationReport, ParseError> {
    let mut report = ValidationReport::default();
    if let Some(f) = file {
        validate_instance(&mut report, f.name.as_deref().unwrap_or("input"), f)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..random {
        let f = random_arrangement(&mut rng, caps, i % 2 == 0);
        validate_instance(&mut report, &format!("random-{i}"), &f)?;
    }
    Ok(report)
}
