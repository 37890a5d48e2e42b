//! Command dispatch and serialization.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use subtori_core::addcoh::{cohomology_groups, e2_page, poincare_polynomial};
use subtori_core::arimat::{members, nbc_sets, GroundSet};
use subtori_core::arrangement::{poset_of, positive_system, LayerPoset};
use subtori_core::intlat::{IntMatrix, TorsionData};
use subtori_core::ospres::{
    integral_conjecture_check, ExteriorElement, JConvention, Mono, Presentation, Relation,
    RelationKind, RelationOrigin,
};
use thiserror::Error;

use crate::input::{format_root, ArrangementFile, ParseError};
use crate::random::Caps;
use crate::table::render;
use crate::validate::validate_suite;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Poset,
    Betti,
    E2,
    Matroid,
    Presentation,
    PositiveSystem,
    Validate,
    ConjectureCheck,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Poset,
        Command::Betti,
        Command::E2,
        Command::Matroid,
        Command::Presentation,
        Command::PositiveSystem,
        Command::Validate,
        Command::ConjectureCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Poset => "poset",
            Command::Betti => "betti",
            Command::E2 => "e2",
            Command::Matroid => "matroid",
            Command::Presentation => "presentation",
            Command::PositiveSystem => "positive-system",
            Command::Validate => "validate",
            Command::ConjectureCheck => "conjecture-check",
        }
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::UnknownCommand(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Table,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flags {
    pub format: Format,
    pub j_convention: JConvention,
    /// Degree cap; defaults to twice the ambient rank.
    pub degree: Option<usize>,
    pub random: usize,
    pub seed: u64,
    pub caps: Caps,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            format: Format::Json,
            j_convention: JConvention::Min,
            degree: None,
            random: 0,
            seed: 0,
            caps: Caps::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown command {0:?}")]
    UnknownCommand(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Compute(#[from] subtori_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandOutput {
    pub text: String,
    pub exit_code: i32,
}

fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

fn matrix(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| ints(m.row(i))).collect())
}

fn group(g: &TorsionData) -> Value {
    json!({
        "free_rank": g.free_rank,
        "invariant_factors": ints(&g.invariant_factors),
        "group": g.to_string(),
    })
}

fn rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `x0*x2`, or `1` for the empty monomial.
pub fn monomial_name(m: Mono) -> String {
    if m == 0 {
        return "1".into();
    }
    (0..32)
        .filter(|i| m >> i & 1 == 1)
        .map(|i| format!("x{i}"))
        .collect::<Vec<_>>()
        .join("*")
}

fn exterior(e: &ExteriorElement) -> Value {
    let mut terms: Vec<(&Mono, &BigRational)> = e.terms.iter().collect();
    terms.sort_by_key(|(m, _)| (m.count_ones(), **m));
    Value::Array(
        terms
            .into_iter()
            .map(|(m, c)| json!([monomial_name(*m), rational(c)]))
            .collect(),
    )
}

fn exterior_text(e: &ExteriorElement) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<(&Mono, &BigRational)> = e.terms.iter().collect();
    terms.sort_by_key(|(m, _)| (m.count_ones(), **m));
    terms
        .into_iter()
        .map(|(m, c)| {
            if *m == 0 {
                rational(c)
            } else {
                format!("({})·{}", rational(c), monomial_name(*m))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn degree_cap(flags: &Flags, d: usize) -> usize {
    flags.degree.unwrap_or(2 * d)
}

struct Rendered {
    json: Value,
    table: String,
    exit_code: i32,
}

impl Rendered {
    fn ok(json: Value, table: String) -> Self {
        Rendered {
            json,
            table,
            exit_code: 0,
        }
    }
}

fn poset_cmd(file: &ArrangementFile, poset: &LayerPoset) -> Rendered {
    let arr = &poset.arrangement;
    let layers: Vec<Value> = poset
        .layers
        .iter()
        .enumerate()
        .map(|(i, l)| {
            json!({
                "index": i,
                "codim": l.codim(),
                "dim": l.dim(),
                "sublattice": matrix(&l.sub),
                "point": l.point.iter().map(format_root).collect::<Vec<_>>(),
                "atoms_below": poset.atoms_below[i].iter().collect::<Vec<_>>(),
            })
        })
        .collect();
    let subtori: Vec<Value> = (0..arr.subtori.len())
        .map(|s| json!({"index": s, "input_atom": arr.sources[s], "layer": poset.atom_layers[s]}))
        .collect();
    let json = json!({
        "name": file.name,
        "ambient_rank": poset.ambient_rank(),
        "atom_order": "input order; each input atom contributes its connected components in turn",
        "subtori": subtori,
        "layers": layers,
        "covers": poset.covers,
        "layer_count": poset.len(),
        "cover_count": poset.covers.len(),
    });
    let rows: Vec<Vec<String>> = poset
        .layers
        .iter()
        .enumerate()
        .map(|(i, l)| {
            vec![
                i.to_string(),
                l.codim().to_string(),
                format!(
                    "{:?}",
                    l.sub
                        .row_vecs()
                        .iter()
                        .map(|r| r
                            .iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(","))
                        .collect::<Vec<_>>()
                ),
                l.point
                    .iter()
                    .map(format_root)
                    .collect::<Vec<_>>()
                    .join(" "),
                format!("{:?}", poset.atoms_below[i].iter().collect::<Vec<_>>()),
            ]
        })
        .collect();
    let mut table = render(&["layer", "codim", "sublattice", "point", "subtori"], &rows);
    let covers: Vec<String> = poset
        .covers
        .iter()
        .map(|(a, b)| format!("{a}<{b}"))
        .collect();
    let _ = writeln!(table, "covers ({}): {}", covers.len(), covers.join(" "));
    Rendered::ok(json, table)
}

fn betti_cmd(poset: &LayerPoset) -> Rendered {
    let betti = cohomology_groups(poset);
    let poincare = poincare_polynomial(poset);
    let euler: i64 = betti
        .degrees
        .iter()
        .enumerate()
        .map(|(k, g)| {
            if k % 2 == 0 {
                g.free_rank as i64
            } else {
                -(g.free_rank as i64)
            }
        })
        .sum();
    let degrees: Vec<Value> = betti
        .degrees
        .iter()
        .enumerate()
        .map(|(k, g)| {
            let mut v = group(g);
            v["degree"] = json!(k);
            v
        })
        .collect();
    let summands: Vec<Value> = betti
        .summands
        .iter()
        .map(|s| {
            json!({
                "layer": s.layer, "p": s.p, "s": s.s, "q": s.q, "degree": s.degree,
                "group": s.group.to_string(),
            })
        })
        .collect();
    let json = json!({
        "ambient_rank": poset.ambient_rank(),
        "degrees": degrees,
        "poincare": poincare,
        "euler_characteristic": euler,
        "summands": summands,
    });
    let rows: Vec<Vec<String>> = betti
        .degrees
        .iter()
        .enumerate()
        .map(|(k, g)| vec![k.to_string(), g.free_rank.to_string(), g.to_string()])
        .collect();
    let mut table = render(&["degree", "rank", "group"], &rows);
    let rows: Vec<Vec<String>> = betti
        .summands
        .iter()
        .map(|s| {
            vec![
                s.layer.to_string(),
                s.p.to_string(),
                s.s.to_string(),
                s.q.to_string(),
                s.degree.to_string(),
                s.group.to_string(),
            ]
        })
        .collect();
    table.push('\n');
    table.push_str(&render(&["layer", "p", "s", "q", "degree", "group"], &rows));
    let _ = writeln!(table, "poincare {poincare:?}, euler characteristic {euler}");
    Rendered::ok(json, table)
}

fn e2_cmd(poset: &LayerPoset) -> Rendered {
    let e2 = e2_page(poset);
    let betti = cohomology_groups(poset);
    let entries: Vec<Value> = e2
        .entries
        .iter()
        .map(|((p, q), e)| {
            let mut v = group(&e.group);
            v["p"] = json!(p);
            v["q"] = json!(q);
            v["filtration_degree"] = json!(e.filtration_degree);
            v["layers"] = json!(e.layers);
            v
        })
        .collect();
    let totals: Vec<Value> = (0..betti.degrees.len())
        .map(|k| {
            let t = e2.total(k);
            json!({"degree": k, "group": t.to_string(), "matches_cohomology": t == betti.degrees[k]})
        })
        .collect();
    let json = json!({"ambient_rank": poset.ambient_rank(), "entries": entries, "totals": totals});
    let d = poset.ambient_rank();
    let max_q = e2.entries.keys().map(|(_, q)| *q).max().unwrap_or(0);
    let headers: Vec<String> = std::iter::once("q\\p".to_string())
        .chain((0..=d).map(|p| p.to_string()))
        .collect();
    let rows: Vec<Vec<String>> = (0..=max_q)
        .rev()
        .map(|q| {
            std::iter::once(q.to_string())
                .chain((0..=d).map(|p| match e2.entries.get(&(p, q)) {
                    Some(e) => format!("{} [{}]", e.group, e.filtration_degree),
                    None => "0".into(),
                }))
                .collect()
        })
        .collect();
    let mut table = render(
        &headers.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
        &rows,
    );
    table.push_str("entries are E2^{p,q} [filtration degree p+2q]\n");
    Rendered::ok(json, table)
}

fn matroid_cmd(poset: &LayerPoset) -> Result<Rendered, CliError> {
    let ground = GroundSet::from_arrangement(&poset.arrangement)?;
    let atoms: Vec<Value> = (0..ground.len())
        .map(|i| {
            json!({
                "index": i,
                "input_atom": poset.arrangement.sources[i],
                "character": ints(&ground.characters[i]),
                "constant": format_root(&ground.constants[i]),
            })
        })
        .collect();
    let mut independent = Vec::new();
    let mut rows = Vec::new();
    for mask in ground.independent_sets(ground.full_mask()) {
        let set = members(mask);
        let m = ground.multiplicity(&set)?;
        let lm = ground.lattice_multiplicity(&set);
        rows.push(vec![format!("{set:?}"), m.to_string(), lm.to_string()]);
        independent.push(json!({"set": set, "multiplicity": m, "lattice_multiplicity": int(&lm)}));
    }
    let circuits = ground.circuits(ground.full_mask());
    let circuit_json: Vec<Value> = circuits
        .iter()
        .map(|c| {
            json!({
                "support": c.support,
                "relation": ints(&c.relation),
                "signs": c.signs,
                "multiplicity_scaled": ints(&c.multiplicity_scaled(&ground)),
            })
        })
        .collect();
    let nbc: Vec<Value> = (0..poset.len())
        .map(|w| json!({"layer": w, "sets": nbc_sets(&ground, poset, w).into_iter().map(|c| c.set).collect::<Vec<_>>()}))
        .collect();
    let rank = ground.rank_of(&members(ground.full_mask()));
    let json = json!({
        "atom_order": "input order; NBC sets and signs use this order",
        "ground_set": atoms,
        "rank": rank,
        "unimodular": ground.is_unimodular(),
        "independent_sets": independent,
        "circuits": circuit_json,
        "nbc": nbc,
    });
    let mut table = render(&["independent set", "m", "lattice m"], &rows);
    let rows: Vec<Vec<String>> = circuits
        .iter()
        .map(|c| {
            vec![
                format!("{:?}", c.support),
                format!(
                    "{:?}",
                    c.relation.iter().map(|x| x.to_string()).collect::<Vec<_>>()
                ),
                format!(
                    "{:?}",
                    c.multiplicity_scaled(&ground)
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                ),
            ]
        })
        .collect();
    table.push('\n');
    table.push_str(&render(&["circuit", "relation", "m-scaled"], &rows));
    let _ = writeln!(table, "rank {rank}, unimodular {}", ground.is_unimodular());
    Ok(Rendered::ok(json, table))
}

fn kind_name(k: RelationKind) -> &'static str {
    match k {
        RelationKind::Product => "product",
        RelationKind::Restriction => "restriction",
        RelationKind::Circuit => "circuit",
    }
}

fn origin_json(o: &RelationOrigin) -> Value {
    match o {
        RelationOrigin::Pair(g, h) => json!({"pair": [g, h]}),
        RelationOrigin::Restriction {
            generator,
            character,
        } => {
            json!({"generator": generator, "character": ints(character)})
        }
        RelationOrigin::Circuit { set, layer } => json!({"set": set, "layer": layer}),
    }
}

fn relation_json(r: &Relation) -> Value {
    json!({
        "kind": kind_name(r.kind),
        "degree": r.degree,
        "origin": origin_json(&r.origin),
        "terms": r.terms.iter().map(|t| json!({
            "generators": t.generators,
            "coefficient": exterior(&t.coefficient),
        })).collect::<Vec<_>>(),
    })
}

fn relation_text(r: &Relation) -> String {
    r.terms
        .iter()
        .map(|t| {
            let gens: Vec<String> = t.generators.iter().map(|g| format!("e{g}")).collect();
            format!("[{}]·{}", exterior_text(&t.coefficient), gens.join("·"))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn presentation_cmd(poset: &LayerPoset, flags: &Flags) -> Result<Rendered, CliError> {
    let pres = Presentation::new(poset, flags.j_convention)?;
    let d = poset.ambient_rank();
    let cap = degree_cap(flags, d);
    let generators: Vec<Value> = pres
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| json!({"index": i, "layer": g.layer, "set": g.set, "degree": g.degree()}))
        .collect();
    let relations: Vec<Relation> = pres
        .relations()
        .into_iter()
        .filter(|r| r.degree <= cap)
        .collect();
    let basis: Vec<Value> = pres
        .nbc_basis()
        .into_iter()
        .filter(|(g, s)| pres.generators[*g].degree() + s.count_ones() as usize <= cap)
        .map(|(g, s)| json!({"generator": g, "monomial": monomial_name(s)}))
        .collect();
    let (dimensions, defect, exit_code) = match pres.nbc_basis_and_dimensions(cap) {
        Ok(nbc) => (nbc.dimensions, None, 0),
        Err(e) => (pres.quotient_dimensions(cap), Some(e.to_string()), 2),
    };
    let mut nbc_poincare = pres.nbc_poincare();
    nbc_poincare.resize(cap + 1, 0);
    let j = match flags.j_convention {
        JConvention::Min => "min",
        JConvention::Max => "max",
    };
    let json = json!({
        "ambient_rank": d,
        "j_convention": j,
        "degree_cap": cap,
        "atom_order": "input order; generator sets, NBC sets and signs use this order",
        "unit_generator": 0,
        "generators": generators,
        "relations": relations.iter().map(relation_json).collect::<Vec<_>>(),
        "nbc_basis": basis,
        "quotient_dimensions": dimensions,
        "nbc_poincare": nbc_poincare,
        "basis_defect": defect,
    });
    let rows: Vec<Vec<String>> = pres
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| {
            vec![
                format!("e{i}"),
                g.layer.to_string(),
                format!("{:?}", g.set),
                g.degree().to_string(),
            ]
        })
        .collect();
    let mut table = render(&["generator", "layer", "set", "degree"], &rows);
    let rows: Vec<Vec<String>> = relations
        .iter()
        .map(|r| {
            vec![
                kind_name(r.kind).to_string(),
                r.degree.to_string(),
                relation_text(r),
            ]
        })
        .collect();
    table.push('\n');
    table.push_str(&render(&["kind", "degree", "relation"], &rows));
    let _ = writeln!(
        table,
        "j convention {j}, quotient dimensions {dimensions:?}, NBC count {nbc_poincare:?}"
    );
    if let Some(defect) = &defect {
        let _ = writeln!(table, "basis defect: {defect}");
    }
    Ok(Rendered {
        json,
        table,
        exit_code,
    })
}

fn positive_system_cmd(file: &ArrangementFile) -> Result<Rendered, CliError> {
    let ps = positive_system(file.ambient_rank, &file.specs()?)?;
    let json = json!({
        "change_of_basis": matrix(&ps.change_of_basis),
        "columns": matrix(&ps.columns),
        "has_zero_coordinate": ps.has_zero_coordinate,
    });
    let show = |m: &IntMatrix| -> Vec<Vec<String>> {
        (0..m.rows())
            .map(|i| m.row(i).iter().map(|x| x.to_string()).collect())
            .collect()
    };
    let mut table = String::from("U\n");
    let hu: Vec<String> = (0..ps.change_of_basis.cols())
        .map(|j| j.to_string())
        .collect();
    table.push_str(&render(
        &hu.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
        &show(&ps.change_of_basis),
    ));
    table.push_str("U·A\n");
    let hc: Vec<String> = (0..ps.columns.cols()).map(|j| j.to_string()).collect();
    table.push_str(&render(
        &hc.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
        &show(&ps.columns),
    ));
    let _ = writeln!(table, "has zero coordinate: {}", ps.has_zero_coordinate);
    Ok(Rendered::ok(json, table))
}

fn conjecture_cmd(poset: &LayerPoset, flags: &Flags) -> Result<Rendered, CliError> {
    let pres = Presentation::new(poset, flags.j_convention)?;
    let cap = degree_cap(flags, poset.ambient_rank());
    let report = integral_conjecture_check(&pres, &cohomology_groups(poset), cap);
    let degrees: Vec<Value> = report
        .degrees
        .iter()
        .map(|c| {
            json!({
                "degree": c.degree,
                "presentation": group(&c.presentation),
                "cohomology": group(&c.cohomology),
                "matches": c.matches,
            })
        })
        .collect();
    let json = json!({
        "j_convention": if report.j_convention == JConvention::Min { "min" } else { "max" },
        "unimodular": report.unimodular,
        "orientation": report.orientation,
        "degrees": degrees,
        "all_match": report.all_match(),
    });
    let rows: Vec<Vec<String>> = report
        .degrees
        .iter()
        .map(|c| {
            vec![
                c.degree.to_string(),
                c.presentation.to_string(),
                c.cohomology.to_string(),
                if c.matches { "match" } else { "MISMATCH" }.to_string(),
            ]
        })
        .collect();
    let mut table = render(&["degree", "presentation", "cohomology", "status"], &rows);
    let _ = writeln!(
        table,
        "unimodular {}, all match {}",
        report.unimodular,
        report.all_match()
    );
    Ok(Rendered::ok(json, table))
}

/// Runs a command. `file` may be omitted only for `validate` with random
/// instances.
pub fn run_command(
    command: Command,
    file: Option<&ArrangementFile>,
    flags: &Flags,
) -> Result<CommandOutput, CliError> {
    let rendered = if command == Command::Validate {
        if file.is_none() && flags.random == 0 {
            return Err(CliError::Usage(
                "validate needs an input file or --random N".into(),
            ));
        }
        let report = validate_suite(file, flags.seed, flags.random, flags.caps)?;
        Rendered {
            json: report.to_json(),
            table: report.to_table(),
            exit_code: if report.passed() { 0 } else { 2 },
        }
    } else {
        let file =
            file.ok_or_else(|| CliError::Usage(format!("{} needs an input file", command.name())))?;
        let poset = poset_of(file.arrangement()?);
        match command {
            Command::Poset => poset_cmd(file, &poset),
            Command::Betti => betti_cmd(&poset),
            Command::E2 => e2_cmd(&poset),
            Command::Matroid => matroid_cmd(&poset)?,
            Command::Presentation => presentation_cmd(&poset, flags)?,
            Command::PositiveSystem => positive_system_cmd(file)?,
            Command::ConjectureCheck => conjecture_cmd(&poset, flags)?,
            Command::Validate => unreachable!(),
        }
    };
    let text = match flags.format {
        Format::Json => {
            serde_json::to_string_pretty(&rendered.json).expect("json values serialize") + "\n"
        }
        Format::Table => rendered.table,
    };
    Ok(CommandOutput {
        text,
        exit_code: rendered.exit_code,
    })
}
