//! Verification suites over every small object of a category.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde_json::{json, Value};

use crate::characterize::{
    embedded_instance, eta_monic_and_unit_iso_suite, galvin_horn_check, homogeneous_agreement,
    oracle_agreement, psi_description_check, structure_agreement, CollectionView,
};
use crate::codensity::{
    available_constructions, check_laws, compare_constructions, construct,
    enrichment_structure_check, lambda_check, MonadTower, Setting,
};
use crate::error::{Error, Result};
use crate::io::{document_to_json, object_to_json};
use crate::kernel::{Budget, DEFAULT_BUDGET};
use crate::plugins::{fp_objects_up_to, Category, FinObject, Subcategory};
use crate::report::{shell_quote, Check, Status, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    MonadLaws,
    Units,
    Characterizations,
    Agreement,
    Enrichment,
    Stability,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = [
        "monad-laws",
        "units",
        "characterizations",
        "agreement",
        "enrichment",
        "stability",
        "all",
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::MonadLaws => "monad-laws",
            Suite::Units => "units",
            Suite::Characterizations => "characterizations",
            Suite::Agreement => "agreement",
            Suite::Enrichment => "enrichment",
            Suite::Stability => "stability",
            Suite::All => "all",
        }
    }

    /// The suites `all` runs, in report order.
    pub fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::MonadLaws,
                Suite::Units,
                Suite::Characterizations,
                Suite::Agreement,
                Suite::Enrichment,
            ],
            s => vec![s],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "monad-laws" => Suite::MonadLaws,
            "units" => Suite::Units,
            "characterizations" => Suite::Characterizations,
            "agreement" => Suite::Agreement,
            "enrichment" => Suite::Enrichment,
            "stability" => Suite::Stability,
            "all" => Suite::All,
            other => {
                return Err(Error::Input(format!(
                    "unknown suite {other:?}; expected one of {}",
                    Suite::NAMES.join(", ")
                )))
            }
        })
    }
}

/// What a suite runs over.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub category: Category,
    pub fp_bound: usize,
    pub max_size: usize,
    pub budget: Budget,
    /// Members of the subcategory; the skeleton up to `fp_bound` when absent.
    pub subcat: Option<Vec<FinObject>>,
    /// Objects under test; every object up to `max_size` when absent.
    pub objects: Option<Vec<FinObject>>,
    /// Worker threads for per-object checks.
    pub threads: usize,
}

impl SuiteConfig {
    pub fn new(category: Category, fp_bound: usize, max_size: usize) -> Self {
        SuiteConfig {
            category,
            fp_bound,
            max_size,
            budget: Budget::default(),
            subcat: None,
            objects: None,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }

    pub fn setting(&self) -> Result<Setting> {
        self.setting_at(self.fp_bound)
    }

    fn setting_at(&self, bound: usize) -> Result<Setting> {
        match &self.subcat {
            Some(members) => Ok(Setting::new(
                Subcategory::from_objects(&self.category, members.clone())?,
                self.budget,
            )),
            None => Setting::skeleton(&self.category, bound, self.budget),
        }
    }

    pub fn objects(&self) -> Result<Vec<FinObject>> {
        match &self.objects {
            Some(list) => Ok(list.clone()),
            None => fp_objects_up_to(&self.category, self.max_size, self.budget),
        }
    }

    /// A command that reruns `suite` on `x` alone.
    pub fn repro(&self, suite: Suite, x: &FinObject) -> String {
        let mut cmd = format!(
            "codensity verify --suite {suite} --fp-bound {} --max-size {}",
            self.fp_bound, self.max_size
        );
        if self.budget.0 != DEFAULT_BUDGET {
            cmd.push_str(&format!(" --budget {}", self.budget.0));
        }
        if let Some(members) = &self.subcat {
            let list: Vec<Value> = members
                .iter()
                .map(|a| object_to_json(&self.category, a))
                .collect();
            cmd.push_str(&format!(
                " --subcat {}",
                shell_quote(&Value::Array(list).to_string())
            ));
        }
        cmd.push(' ');
        cmd.push_str(&shell_quote(
            &document_to_json(&self.category, x).to_string(),
        ));
        cmd
    }

    fn label(&self, x: &FinObject) -> String {
        object_to_json(&self.category, x).to_string()
    }
}

/// Command-line flags selecting `cat`, with parameters given inline.
pub fn category_flags(cat: &Category) -> String {
    let params = crate::io::category_params(cat);
    let mut out = format!("--category {}", cat.name());
    if let Some(q) = params.get("q") {
        out.push_str(&format!(" --q {q}"));
    }
    if let Some(m) = params.get("monoid") {
        out.push_str(&format!(" --monoid-file {}", shell_quote(&m.to_string())));
    }
    if let Some(sig) = params.get("signature") {
        out.push_str(&format!(
            " --signature-file {}",
            shell_quote(&sig.to_string())
        ));
    }
    out
}

/// Runs `f` over `items` on up to `threads` workers, keeping input order.
fn par_map<T: Sync, R: Send>(items: &[T], threads: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let threads = threads.clamp(1, items.len().max(1));
    if threads == 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let mut slots: Vec<Option<R>> = (0..items.len()).map(|_| None).collect();
    let results = std::thread::scope(|s| {
        let workers: Vec<_> = (0..threads)
            .map(|_| {
                s.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= items.len() {
                            break done;
                        }
                        done.push((i, f(&items[i])));
                    }
                })
            })
            .collect();
        workers
            .into_iter()
            .flat_map(|w| w.join().expect("suite worker panicked"))
            .collect::<Vec<_>>()
    });
    for (i, r) in results {
        slots[i] = Some(r);
    }
    slots
        .into_iter()
        .map(|r| r.expect("every item is processed"))
        .collect()
}

/// Turns an error into a check: budget errors skip, unsupported operations
/// are informational, anything else fails.
fn from_error(name: String, e: Error, repro: String) -> Check {
    match e {
        Error::BudgetExceeded { .. } => Check::new(name, Status::SkippedBudget, e.to_string()),
        Error::Unsupported { .. } => Check::new(name, Status::Info, e.to_string()),
        _ => Check::new(name, Status::Fail, e.to_string()).with_repro(repro),
    }
}

fn failing(name: String, detail: String, problems: &[String], repro: String) -> Check {
    let check = Check::new(name, Status::Fail, detail).with_repro(repro);
    if problems.is_empty() {
        return check;
    }
    let shown: Vec<&String> = problems.iter().take(5).collect();
    check.with_counterexample(json!(shown))
}

/// Runs `suite` under `cfg`.
pub fn run_suite(cfg: &SuiteConfig, suite: Suite) -> Result<VerificationReport> {
    let setting = cfg.setting()?;
    let objects = cfg.objects()?;
    let mut report = VerificationReport::new(
        suite.name(),
        cfg.category.describe(),
        cfg.fp_bound,
        cfg.max_size,
    );
    report.notices.extend(setting.warnings());
    if !setting.subcat.image_closed {
        report
            .notices
            .push("the subcategory is not closed under images".into());
    }
    for s in suite.members() {
        let part = match s {
            Suite::MonadLaws => monad_laws(cfg, &setting, &objects),
            Suite::Units => units(cfg, &setting)?,
            Suite::Characterizations => characterizations(cfg, &setting, &objects),
            Suite::Agreement => agreement(cfg, &setting, &objects),
            Suite::Enrichment => enrichment(cfg, &setting, &objects),
            Suite::Stability => stability(cfg, &setting, &objects)?,
            Suite::All => unreachable!("all is expanded"),
        };
        report.checks.extend(part);
    }
    Ok(report)
}

pub fn monad_laws(cfg: &SuiteConfig, setting: &Setting, objects: &[FinObject]) -> Vec<Check> {
    let construction = available_constructions(&cfg.category)[0];
    let homs = setting.member_homs().ok();
    par_map(objects, cfg.threads, |x| {
        let name = format!("monad laws {}", cfg.label(x));
        let repro = cfg.repro(Suite::MonadLaws, x);
        let tower = match MonadTower::build(x, 3, setting.mult_cap, |y| {
            construct(setting, y, construction)
        }) {
            Ok(t) => t,
            Err(e) => return from_error(name, e, repro),
        };
        let laws = match check_laws(&tower, homs.as_deref()) {
            Ok(l) => l,
            Err(e) => return from_error(name, e, repro),
        };
        let failures: Vec<String> = laws.failures().iter().map(|s| s.to_string()).collect();
        let size = tower.levels[0].len();
        if !failures.is_empty() {
            failing(name, format!("|TX| = {size}"), &failures, repro)
        } else if laws.complete() {
            Check::new(
                name,
                Status::Pass,
                format!("|TX| = {size}, unit laws and associativity hold"),
            )
        } else {
            let notice = tower.partial.clone().unwrap_or_default();
            let checked = if laws.left_unit.is_some() {
                "unit laws hold"
            } else {
                "unit is a morphism"
            };
            Check::new(
                name,
                Status::Partial,
                format!("|TX| = {size}, {checked}; {notice}"),
            )
        }
    })
}

pub fn units(cfg: &SuiteConfig, setting: &Setting) -> Result<Vec<Check>> {
    let name = format!("units up to size {}", cfg.max_size);
    match eta_monic_and_unit_iso_suite(setting, cfg.max_size) {
        Ok(r) if r.failures.is_empty() => Ok(vec![Check::new(
            name,
            Status::Pass,
            format!(
                "η injective on {} objects, unit of T bijective on {} members",
                r.objects, r.members
            ),
        )]),
        Ok(r) => Ok(vec![Check::new(
            name,
            Status::Fail,
            format!("{} failures", r.failures.len()),
        )
        .with_counterexample(json!(r.failures))
        .with_repro(format!(
            "codensity verify --suite units {} --fp-bound {} --max-size {}",
            category_flags(&cfg.category),
            cfg.fp_bound,
            cfg.max_size
        ))]),
        Err(e) if e.is_budget() => Ok(vec![Check::new(name, Status::SkippedBudget, e.to_string())]),
        Err(e) => Err(e),
    }
}

pub fn characterizations(
    cfg: &SuiteConfig,
    setting: &Setting,
    objects: &[FinObject],
) -> Vec<Check> {
    par_map(objects, cfg.threads, |x| characterize_one(cfg, setting, x))
        .into_iter()
        .flatten()
        .collect()
}

fn characterize_one(cfg: &SuiteConfig, setting: &Setting, x: &FinObject) -> Vec<Check> {
    let label = cfg.label(x);
    let repro = cfg.repro(Suite::Characterizations, x);
    let inst = match embedded_instance(setting, x) {
        Ok(i) => i,
        Err(e) => return vec![from_error(format!("description {label}"), e, repro)],
    };
    let mut out = Vec::new();
    let name = format!("description {label}");
    out.push(match oracle_agreement(setting, &inst) {
        Ok(a) if a.is_match() => Check::new(
            name,
            Status::Pass,
            format!(
                "|TX| = {} = accepted among {} candidates",
                a.computed, a.ambient
            ),
        ),
        Ok(a) => {
            let mut problems: Vec<String> =
                a.rejected.iter().map(|r| format!("rejected {r}")).collect();
            problems.extend(a.missing.iter().map(|m| format!("missing {m}")));
            if !a.dual_matches {
                problems.insert(0, "maps into D do not cut out the expected subsets".into());
            }
            failing(
                name,
                format!("|TX| = {}, accepted {}", a.computed, a.accepted),
                &problems,
                repro.clone(),
            )
        }
        Err(e) => from_error(name, e, repro.clone()),
    });
    let name = format!("structure {label}");
    out.push(match structure_agreement(setting, &inst) {
        Ok(bad) if bad.is_empty() => {
            Check::new(name, Status::Pass, structure_summary(&cfg.category))
        }
        Ok(bad) => failing(
            name,
            format!("{} disagreements", bad.len()),
            &bad,
            repro.clone(),
        ),
        Err(e) => from_error(name, e, repro.clone()),
    });
    if matches!(cfg.category, Category::Pos | Category::Jsl) {
        let name = format!("cone {label}");
        out.push(match psi_description_check(setting, &inst) {
            Ok(bad) if bad.is_empty() => Check::new(
                name,
                Status::Pass,
                "ψ_a picks the largest t with a⁻¹(↑t) in the collection",
            ),
            Ok(bad) => failing(
                name,
                format!("{} disagreements", bad.len()),
                &bad,
                repro.clone(),
            ),
            Err(e) => from_error(name, e, repro.clone()),
        });
    }
    if cfg.category == Category::Set {
        out.push(galvin_horn(&inst, &label, &repro));
    }
    if let (Category::Vec { q }, Some(2)) = (&cfg.category, x.vector_dim()) {
        let name = format!("homogeneous {label}");
        out.push(match homogeneous_agreement(*q, x, cfg.budget) {
            Ok(h) if h.matches => Check::new(
                name,
                Status::Pass,
                format!("over {{K}}: |TX| = {} homogeneous maps, {} linear", h.computed, h.linear),
            ),
            Ok(h) => failing(
                name,
                format!(
                    "over {{K}}: |TX| = {} by intersection, {} by the limit, {} homogeneous maps, {} linear",
                    h.computed, h.limit, h.homogeneous, h.linear
                ),
                &[],
                repro.clone(),
            ),
            Err(e) => from_error(name, e, repro.clone()),
        });
    }
    out
}

fn structure_summary(cat: &Category) -> &'static str {
    match cat {
        Category::Par => "base point is the empty collection",
        Category::Pos | Category::Jsl => "order is inclusion of collections",
        Category::Top | Category::Top0 => "specialization matches the basic open sets",
        Category::MSet(_) => "action is the pushforward of collections",
        Category::Gra => "edge predicate equals the limit edges",
        Category::SigmaStr(_) => "relation predicates equal the limit relations",
        Category::Set | Category::Vec { .. } => "no structure to compare",
    }
}

fn galvin_horn(inst: &crate::codensity::MonadInstance, label: &str, repro: &str) -> Check {
    let name = format!("Galvin-Horn {label}");
    let emb = inst.embedding.as_ref().expect("embedded instance");
    let view = match CollectionView::new(&inst.category, inst.base(), &emb.ambient.probes) {
        Ok(v) => v,
        Err(e) => return from_error(name, e, repro.to_string()),
    };
    let computed: BTreeSet<usize> = emb.map.iter().copied().collect();
    let accepted: BTreeSet<usize> = (0..emb.ambient.len())
        .filter(|&w| galvin_horn_check(&view.collection(&emb.ambient.elements[w])))
        .collect();
    if accepted == computed {
        Check::new(
            name,
            Status::Pass,
            format!(
                "{} collections split every 3-piece cover once",
                accepted.len()
            ),
        )
    } else {
        let diff: Vec<String> = accepted
            .symmetric_difference(&computed)
            .map(|&w| view.collection(&emb.ambient.elements[w]).to_string())
            .collect();
        failing(
            name,
            format!("{} accepted, {} computed", accepted.len(), computed.len()),
            &diff,
            repro.to_string(),
        )
    }
}

pub fn agreement(cfg: &SuiteConfig, setting: &Setting, objects: &[FinObject]) -> Vec<Check> {
    let spaces = matches!(cfg.category, Category::Top | Category::Top0);
    par_map(objects, cfg.threads, |x| {
        let label = cfg.label(x);
        let repro = cfg.repro(Suite::Agreement, x);
        let name = format!("agreement {label}");
        let mut out = vec![match compare_constructions(setting, x) {
            Ok(a) => {
                let sizes: Vec<String> = a.sizes.iter().map(|(c, n)| format!("{c} {n}")).collect();
                let mut problems: Vec<String> = a
                    .comparisons
                    .iter()
                    .flat_map(|c| {
                        c.mismatches
                            .iter()
                            .map(move |m| format!("{} vs {}: {m}", c.from, c.to))
                    })
                    .collect();
                problems.extend(
                    a.multiplication
                        .iter()
                        .flat_map(|(c, ms)| ms.iter().map(move |m| format!("μ of {c}: {m}"))),
                );
                if !problems.is_empty() {
                    failing(name, sizes.join(", "), &problems, repro.clone())
                } else if let Some(p) = a.partial {
                    Check::new(
                        name,
                        Status::Partial,
                        format!("{}; μ not compared: {p}", sizes.join(", ")),
                    )
                } else {
                    Check::new(
                        name,
                        Status::Pass,
                        format!("{}; cones, units and μ agree", sizes.join(", ")),
                    )
                }
            }
            Err(e) => from_error(name, e, repro.clone()),
        }];
        if spaces {
            let name = format!("description {label}");
            out.push(
                match embedded_instance(setting, x)
                    .and_then(|inst| oracle_agreement(setting, &inst))
                {
                    Ok(a) if a.is_match() => Check::new(
                        name,
                        Status::Pass,
                        format!("{} prime filters of open sets", a.computed),
                    ),
                    Ok(a) => failing(
                        name,
                        format!("|TX| = {}, accepted {}", a.computed, a.accepted),
                        &a.rejected,
                        repro,
                    ),
                    Err(e) => from_error(name, e, repro),
                },
            );
        }
        out
    })
    .into_iter()
    .flatten()
    .collect()
}

pub fn enrichment(cfg: &SuiteConfig, setting: &Setting, objects: &[FinObject]) -> Vec<Check> {
    let small: Vec<&FinObject> = objects.iter().filter(|o| o.size_measure() <= 2).collect();
    let probes = match fp_objects_up_to(&cfg.category, cfg.max_size.min(2), cfg.budget) {
        Ok(p) => p,
        Err(e) => {
            return small
                .iter()
                .map(|x| {
                    from_error(
                        format!("enrichment {}", cfg.label(x)),
                        e.clone(),
                        cfg.repro(Suite::Enrichment, x),
                    )
                })
                .collect()
        }
    };
    par_map(&small, cfg.threads, |x| {
        let label = cfg.label(x);
        let repro = cfg.repro(Suite::Enrichment, x);
        let inst = match embedded_instance(setting, x) {
            Ok(i) => i,
            Err(e) => return vec![from_error(format!("enrichment {label}"), e, repro)],
        };
        let mut out = Vec::new();
        for z in &probes {
            let name = format!("natural transformations {label} from {}", cfg.label(z));
            out.push(match lambda_check(setting, &inst, z) {
                Ok(l) if l.bijective && l.order_agrees != Some(false) => {
                    let order = if l.order_agrees.is_some() {
                        ", order agrees"
                    } else {
                        ""
                    };
                    Check::new(
                        name,
                        Status::Pass,
                        format!("{} = |Hom(Z, TX)|{order}", l.natural),
                    )
                }
                Ok(l) => {
                    let order = match l.order_agrees {
                        Some(false) => ", orders differ",
                        _ => "",
                    };
                    let detail = format!(
                        "{} natural transformations vs {} maps Z -> TX{order}",
                        l.natural, l.homs
                    );
                    failing(name, detail, &[], repro.clone())
                }
                Err(e) => from_error(name, e, repro.clone()),
            });
        }
        let name = format!("cone maps preserve structure {label}");
        out.push(match enrichment_structure_check(setting, &inst) {
            Ok(bad) if bad.is_empty() => Check::new(
                name,
                Status::Pass,
                "[X, A] -> [TX, A] is a morphism for every member",
            ),
            Ok(bad) => {
                let shown: Vec<String> = bad
                    .iter()
                    .map(|(k, r)| format!("member {k}: {r}"))
                    .collect();
                failing(
                    name,
                    format!("{} members", bad.len()),
                    &shown,
                    repro.clone(),
                )
            }
            Err(e) => from_error(name, e, repro.clone()),
        });
        out
    })
    .into_iter()
    .flatten()
    .collect()
}

/// `TX` at the configured bound against `TX` one bound higher, as subsets of
/// the same ambient.
pub fn stability(
    cfg: &SuiteConfig,
    setting: &Setting,
    objects: &[FinObject],
) -> Result<Vec<Check>> {
    let higher = match cfg.setting_at(cfg.fp_bound + 1) {
        Ok(s) => s,
        Err(e) if e.is_budget() => {
            return Ok(vec![Check::new(
                "stability",
                Status::SkippedBudget,
                e.to_string(),
            )]);
        }
        Err(e) => return Err(e),
    };
    Ok(par_map(objects, cfg.threads, |x| {
        let label = cfg.label(x);
        let name = format!("stability {label}");
        let repro = cfg.repro(Suite::Stability, x);
        let tables = |s: &Setting| -> Result<BTreeSet<Vec<usize>>> {
            let inst = embedded_instance(s, x)?;
            let emb = inst.embedding.as_ref().expect("embedded instance");
            Ok(emb
                .map
                .iter()
                .map(|&w| emb.ambient.elements[w].clone())
                .collect())
        };
        match tables(setting).and_then(|low| Ok((low, tables(&higher)?))) {
            Ok((low, high)) if low == high => Check::new(
                name,
                Status::Pass,
                format!(
                    "|TX| = {} at bounds {} and {}",
                    low.len(),
                    cfg.fp_bound,
                    cfg.fp_bound + 1
                ),
            ),
            Ok((low, high)) => failing(
                name,
                format!(
                    "|TX| = {} at bound {}, {} at bound {}",
                    low.len(),
                    cfg.fp_bound,
                    high.len(),
                    cfg.fp_bound + 1
                ),
                &[],
                repro,
            ),
            Err(e) => from_error(name, e, repro),
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_roundtrip() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().name(), name);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn small_set_suites_pass() {
        let cfg = SuiteConfig::new(Category::Set, 3, 2);
        let report = run_suite(&cfg, Suite::All).unwrap();
        assert!(!report.has_failures(), "{}", report.render_text());
        assert!(report.counts().pass > 0);
    }

    #[test]
    fn parallel_map_keeps_order() {
        let items: Vec<usize> = (0..50).collect();
        assert_eq!(
            par_map(&items, 4, |i| i * 2),
            items.iter().map(|i| i * 2).collect::<Vec<_>>()
        );
    }
}
