use std::fmt::Write as _;
use std::time::Instant;

use serde_json::{json, Map, Value};

use codensity::characterize::{characterization_construction, render_elements};
use codensity::codensity::{
    codensity_by_limit, compare_instances, connecting_morphisms, construct, Construction,
    LimitMode, MemberHoms, MonadInstance, Setting,
};
use codensity::io::{
    category_from_parts, cone_to_dot, coslice_to_dot, instance_from_json, instance_to_dot,
    instance_to_json, monoid_to_json, object_to_json, parse_document, parse_json,
    to_canonical_string,
};
use codensity::kernel::Budget;
use codensity::plugins::{Carrier, Category, FinObject, Monoid, Subcategory};
use codensity::suites::{run_suite, Suite, SuiteConfig};
use codensity::Error;

use crate::args::{Cli, Command, Common, ConstructionArg, ExportWhat, Format};

pub struct Output {
    pub text: String,
    pub code: u8,
}

pub struct Failure {
    pub message: String,
    pub code: u8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => 3,
            Error::Construction(_) => 1,
            _ => 2,
        };
        Failure {
            message: e.to_string(),
            code,
        }
    }
}

fn input(msg: impl Into<String>) -> Failure {
    Failure {
        message: msg.into(),
        code: 2,
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

pub fn run(cli: Cli) -> Outcome<Output> {
    match cli.command {
        Command::Compute {
            common,
            construction,
            cone,
            object,
        } => compute(&common, construction, cone, &object),
        Command::Verify {
            common,
            suite,
            object,
            timing,
        } => verify(&common, &suite, object.as_deref(), timing),
        Command::Export {
            common,
            what,
            object,
            output,
        } => {
            let text = export(&common, what, &object)?;
            match output {
                Some(path) => {
                    std::fs::write(&path, &text)
                        .map_err(|e| input(format!("cannot write {}: {e}", path.display())))?;
                    Ok(Output {
                        text: String::new(),
                        code: 0,
                    })
                }
                None => Ok(Output { text, code: 0 }),
            }
        }
    }
}

/// Inline JSON, or the contents of the named file.
fn read_source(arg: &str) -> Outcome<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|e| input(format!("cannot read {arg}: {e}")))
}

fn budget(common: &Common) -> Outcome<Budget> {
    let b = match common.budget {
        Some(b) => Budget(b),
        None => Budget::from_env()?,
    };
    if b.0 < 1000 {
        return Err(input(format!(
            "the budget must be at least 1000, got {}",
            b.0
        )));
    }
    Ok(b)
}

/// The category named on the command line, if any.
fn flag_category(common: &Common) -> Outcome<Option<Category>> {
    let Some(name) = &common.category else {
        return Ok(None);
    };
    let mut params = Map::new();
    if let Some(q) = common.q {
        params.insert("q".into(), json!(q));
    }
    if let Some(m) = &common.monoid_file {
        params.insert("monoid".into(), parse_json(&read_source(m)?)?);
    } else if name == "mset" {
        params.insert("monoid".into(), monoid_to_json(&Monoid::cyclic(2)));
    }
    if let Some(s) = &common.signature_file {
        params.insert("signature".into(), parse_json(&read_source(s)?)?);
    }
    if name == "vec" && common.q.is_none() {
        return Err(input("vec needs --q"));
    }
    Ok(Some(category_from_parts(name, &params)?))
}

fn load_object(common: &Common, arg: &str) -> Outcome<(Category, FinObject)> {
    let text = read_source(arg)?;
    let flag = flag_category(common)?;
    Ok(parse_document(&text, flag.as_ref())?)
}

fn parse_subcat(text: &str, cat: &Category) -> Outcome<Vec<FinObject>> {
    let trimmed = text.trim_start();
    let is_json = trimmed.starts_with('[') || trimmed.starts_with('{');
    if is_json || std::path::Path::new(text).is_file() {
        let v = parse_json(&read_source(text)?)?;
        let items = match v {
            Value::Array(items) => items,
            single => vec![single],
        };
        return items
            .iter()
            .map(|item| Ok(parse_document(&item.to_string(), Some(cat))?.1))
            .collect();
    }
    let Category::Vec { q } = cat else {
        return Err(input(format!(
            "cannot read the subcategory {text:?}: expected JSON or a file"
        )));
    };
    text.split(',')
        .map(|tok| {
            let tok = tok.trim();
            let dim = match tok {
                "0" => Some(0),
                "K" => Some(1),
                _ => tok
                    .strip_prefix('K')
                    .map(|r| r.trim_start_matches('^'))
                    .and_then(|r| r.parse().ok()),
            };
            dim.map(|d| FinObject::vector(*q, d)).ok_or_else(|| {
                input(format!(
                    "unknown subcategory member {tok:?}; use K, K2, K^3 or 0"
                ))
            })
        })
        .collect()
}

fn setting(common: &Common, cat: &Category, budget: Budget) -> Outcome<Setting> {
    if common.fp_bound == 0 {
        return Err(input("--fp-bound must be at least 1"));
    }
    match &common.subcat {
        Some(text) => Ok(Setting::new(
            Subcategory::from_objects(cat, parse_subcat(text, cat)?)?,
            budget,
        )),
        None => Ok(Setting::skeleton(cat, common.fp_bound, budget)?),
    }
}

fn subcat_summary(common: &Common, setting: &Setting) -> String {
    match common.subcat {
        Some(_) => format!("given ({} objects)", setting.subcat.len()),
        None => format!(
            "skeleton up to size {} ({} objects)",
            common.fp_bound,
            setting.subcat.len()
        ),
    }
}

/// `TX` by the requested construction. `auto` prefers an instance embedded
/// into collections and falls back to the limit when a given subcategory
/// makes the embedded constructions disagree with it.
fn instance(
    setting: &Setting,
    x: &FinObject,
    choice: ConstructionArg,
    explicit: bool,
) -> Outcome<MonadInstance> {
    let cat = &setting.category;
    let pick = match choice {
        ConstructionArg::Dual2 => Construction::DoubleDual,
        ConstructionArg::Limit => Construction::LimitFormula,
        ConstructionArg::Smonad => Construction::SMonad,
        ConstructionArg::Auto if !explicit => characterization_construction(cat),
        ConstructionArg::Auto => {
            let limit = codensity_by_limit(setting, x, LimitMode::Auto)?;
            for c in [characterization_construction(cat), Construction::SMonad] {
                if let Ok(inst) = construct(setting, x, c) {
                    if compare_instances(&limit, &inst).is_match() {
                        return Ok(inst);
                    }
                }
            }
            return Ok(limit);
        }
    };
    Ok(construct(setting, x, pick)?)
}

/// `μ` on `TX`, or the reason it is not available.
fn multiplication(setting: &Setting, inst: &MonadInstance) -> Outcome<Result<Vec<usize>, String>> {
    if inst.len() > setting.mult_cap {
        return Ok(Err(format!(
            "|TX| = {} exceeds the multiplication cap {}",
            inst.len(),
            setting.mult_cap
        )));
    }
    match construct(setting, &inst.object, inst.construction) {
        Ok(outer) => Ok(Ok(inst.multiplication(&outer)?)),
        Err(e) if e.is_budget() => Ok(Err(format!("T(TX) is out of budget: {e}"))),
        Err(e) => Err(e.into()),
    }
}

/// Largest multiplication table printed in full.
const SHOWN_MU: usize = 32;

fn render_text(
    cat: &Category,
    summary: &str,
    inst: &MonadInstance,
    mu: &Result<Vec<usize>, String>,
    cone: bool,
) -> String {
    let x = inst.base();
    let t = inst
        .object
        .clone()
        .with_carrier(Carrier::indexed(inst.len(), "t"));
    let mut out = String::new();
    let _ = writeln!(out, "category: {}", cat.describe());
    let _ = writeln!(out, "subcategory: {summary}");
    let _ = writeln!(out, "X = {}", object_to_json(cat, x));
    let _ = writeln!(out, "construction: {}", inst.construction);
    let _ = writeln!(out, "|TX| = {}", inst.len());
    for (u, line) in render_elements(inst).iter().enumerate() {
        let _ = writeln!(out, "  {}  {line}", t.label(u));
    }
    let _ = writeln!(out, "TX = {}", object_to_json(cat, &t));
    let unit: Vec<String> = inst
        .unit
        .iter()
        .enumerate()
        .map(|(p, &u)| format!("{} ↦ {}", x.label(p), t.label(u)))
        .collect();
    let _ = writeln!(out, "unit: {}", unit.join(", "));
    match mu {
        Ok(table) if table.len() <= SHOWN_MU => {
            let shown: Vec<String> = table.iter().map(|&u| t.label(u)).collect();
            let _ = writeln!(
                out,
                "multiplication on T(TX) ({} elements): [{}]",
                table.len(),
                shown.join(", ")
            );
        }
        Ok(table) => {
            let hit: std::collections::BTreeSet<usize> = table.iter().copied().collect();
            let _ = writeln!(
                out,
                "multiplication: {} elements of T(TX) onto {} elements of TX",
                table.len(),
                hit.len()
            );
        }
        Err(reason) => {
            let _ = writeln!(out, "multiplication: PARTIAL ({reason})");
        }
    }
    if cone {
        let _ = writeln!(out, "cone:");
        for (e, (entry, psi)) in inst.coslice.entries.iter().zip(&inst.cone).enumerate() {
            let target = inst.coslice.target(e);
            let a: Vec<String> = entry.map.iter().map(|&v| target.label(v)).collect();
            let p: Vec<String> = psi.iter().map(|&v| target.label(v)).collect();
            let _ = writeln!(
                out,
                "  member {} via [{}]: ψ = [{}]",
                entry.object,
                a.join(", "),
                p.join(", ")
            );
        }
    }
    out
}

fn compute(common: &Common, choice: ConstructionArg, cone: bool, object: &str) -> Outcome<Output> {
    let budget = budget(common)?;
    let (cat, x) = load_object(common, object)?;
    let setting = setting(common, &cat, budget)?;
    let inst = instance(&setting, &x, choice, common.subcat.is_some())?;
    let mu = multiplication(&setting, &inst)?;
    let text = match common.format {
        Format::Text => {
            let mut s = render_text(&cat, &subcat_summary(common, &setting), &inst, &mu, cone);
            for w in setting.warnings() {
                let _ = writeln!(s, "notice: {w}");
            }
            s
        }
        Format::Json => {
            let mut v = instance_to_json(&inst);
            v["elements"] = json!(render_elements(&inst));
            match &mu {
                Ok(table) => v["multiplication"] = json!(table),
                Err(reason) => v["partial"] = json!(reason),
            }
            v["notices"] = json!(setting.warnings());
            to_canonical_string(&v)
        }
        Format::Dot => instance_to_dot(&inst, &render_elements(&inst)),
    };
    Ok(Output { text, code: 0 })
}

fn verify(common: &Common, suite: &str, object: Option<&str>, timing: bool) -> Outcome<Output> {
    let started = Instant::now();
    let suite: Suite = suite.parse()?;
    let budget = budget(common)?;
    let (cat, objects) = match object {
        Some(arg) => {
            let (cat, x) = load_object(common, arg)?;
            (cat, Some(vec![x]))
        }
        None => (
            flag_category(common)?.ok_or_else(|| input("verify needs --category or an object"))?,
            None,
        ),
    };
    if common.fp_bound == 0 {
        return Err(input("--fp-bound must be at least 1"));
    }
    let mut cfg = SuiteConfig::new(cat.clone(), common.fp_bound, common.max_size);
    cfg.budget = budget;
    cfg.objects = objects;
    if let Some(text) = &common.subcat {
        cfg.subcat = Some(parse_subcat(text, &cat)?);
    }
    let mut report = run_suite(&cfg, suite)?;
    if timing {
        report.elapsed_ms = Some(started.elapsed().as_millis());
    }
    let text = match common.format {
        Format::Text => report.render_text(),
        Format::Json => to_canonical_string(&report.to_json()),
        Format::Dot => return Err(input("verification reports are text or json")),
    };
    Ok(Output {
        text,
        code: if report.has_failures() { 1 } else { 0 },
    })
}

fn export(common: &Common, what: ExportWhat, object: &str) -> Outcome<String> {
    let budget = budget(common)?;
    let text = read_source(object)?;
    let v = parse_json(&text)?;
    let from_file = v.get("construction").is_some() && v.get("cone").is_some();
    let (inst, summary, setting) = if from_file {
        let inst = instance_from_json(&v, budget)?;
        let summary = format!("from file ({} objects)", inst.subcat().len());
        let members = inst
            .subcat()
            .objects
            .iter()
            .map(|a| (**a).clone())
            .collect();
        let setting = Setting::new(Subcategory::from_objects(&inst.category, members)?, budget);
        (inst, summary, setting)
    } else {
        let (cat, x) = load_object(common, object)?;
        let setting = setting(common, &cat, budget)?;
        if what == ExportWhat::Coslice {
            let coslice = setting.coslice(&x)?;
            return coslice_output(
                common.format,
                &cat,
                &coslice,
                &*setting.member_homs()?,
                budget,
            );
        }
        let inst = instance(&setting, &x, ConstructionArg::Auto, common.subcat.is_some())?;
        (inst, subcat_summary(common, &setting), setting)
    };
    let cat = inst.category.clone();
    match what {
        ExportWhat::Coslice => coslice_output(
            common.format,
            &cat,
            &inst.coslice,
            &*setting.member_homs()?,
            budget,
        ),
        ExportWhat::LimitCone => Ok(match common.format {
            Format::Dot => cone_to_dot(&inst),
            Format::Json => {
                let doc = instance_to_json(&inst);
                to_canonical_string(
                    &json!({ "cone": doc["cone"], "tx": doc["tx"], "base": doc["base"] }),
                )
            }
            Format::Text => {
                let mut out = format!(
                    "|TX| = {}, {} coslice entries\n",
                    inst.len(),
                    inst.coslice.len()
                );
                for (entry, psi) in inst.coslice.entries.iter().zip(&inst.cone) {
                    let _ = writeln!(
                        out,
                        "member {} via {:?}: ψ = {:?}",
                        entry.object, entry.map, psi
                    );
                }
                out
            }
        }),
        ExportWhat::Monad => Ok(match common.format {
            Format::Json => to_canonical_string(&instance_to_json(&inst)),
            Format::Dot => instance_to_dot(&inst, &render_elements(&inst)),
            Format::Text => render_text(
                &cat,
                &summary,
                &inst,
                &multiplication(&setting, &inst)?,
                true,
            ),
        }),
    }
}

fn coslice_output(
    format: Format,
    cat: &Category,
    coslice: &codensity::codensity::Coslice,
    homs: &MemberHoms,
    budget: Budget,
) -> Outcome<String> {
    let connecting = connecting_morphisms(coslice, homs, budget)?;
    Ok(match format {
        Format::Dot => coslice_to_dot(coslice, &connecting),
        Format::Json => {
            let entries: Vec<Value> = coslice
                .entries
                .iter()
                .map(|e| json!({ "member": e.object, "map": e.map }))
                .collect();
            let arrows: Vec<Value> = connecting
                .iter()
                .map(|c| json!({ "from": c.from, "to": c.to, "map": c.map.as_slice() }))
                .collect();
            let members: Vec<Value> = coslice
                .subcat
                .objects
                .iter()
                .map(|a| object_to_json(cat, a))
                .collect();
            to_canonical_string(&json!({
                "base": object_to_json(cat, &coslice.base),
                "subcategory": members,
                "entries": entries,
                "connecting": arrows,
            }))
        }
        Format::Text => {
            let mut out = format!(
                "{} entries, {} connecting morphisms\n",
                coslice.len(),
                connecting.len()
            );
            for (i, e) in coslice.entries.iter().enumerate() {
                let _ = writeln!(out, "e{i}: member {} via {:?}", e.object, e.map);
            }
            for c in &connecting {
                let _ = writeln!(out, "e{} -> e{}: {:?}", c.from, c.to, c.map.as_slice());
            }
            out
        }
    })
}
