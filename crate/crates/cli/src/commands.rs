use homdens::drc::{constructive_bound_with, default_constant, drc_classify, DrcParams, Mode};
use homdens::exact::ExactValue;
use homdens::forcing::{
    degree_concentration, forcing_experiment, leaf_extension, quasirandom_battery, Tolerances,
};
use homdens::generators::{generate, Family, GenSpec, Prob, EDGE_RULE, RNG_ID};
use homdens::homcount::{
    hom_count_brute, hom_count_closed_form, hom_count_treedp, injective_density, CountConfig,
    Counter, Engine,
};
use homdens::inequality::{
    correlation_check, correlation_search, sidorenko_report, tensor_power_check, EdgePartition,
    Host, SearchSpace,
};
use homdens::io::{self, GraphFile};
use homdens::ramsey::{multiplicity_scan, ScanMode};
use homdens::{Error, Graph, Kernel};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;
use crate::{input, Failure};

pub struct Outcome {
    pub report: Value,
    pub engines: Vec<String>,
    pub failures: Vec<String>,
    /// Plain-text rendering, for `gen`.
    pub text: Option<String>,
}

impl Outcome {
    fn new(report: impl Serialize, engines: Vec<String>) -> Self {
        Outcome {
            report: serde_json::to_value(report).expect("reports serialize"),
            engines,
            failures: Vec::new(),
            text: None,
        }
    }

    fn fail_unless(mut self, ok: bool, what: &str) -> Self {
        if !ok {
            self.failures.push(what.to_string());
        }
        self
    }
}

pub struct Ctx {
    pub seed: u64,
    pub budget_vertices: u64,
    pub budget_enum: u64,
    pub tolerances: Tolerances,
    pub exhaustive: bool,
}

fn core(e: Error) -> Failure {
    match e {
        Error::EngineDisagreement { .. } => Failure::Defect(e.to_string()),
        other => Failure::Usage(other.to_string()),
    }
}

fn engine_names(es: &[Engine]) -> Vec<String> {
    es.iter()
        .map(|e| {
            serde_json::to_value(e)
                .unwrap()
                .as_str()
                .unwrap()
                .to_string()
        })
        .collect()
}

const AUTO: &str = "auto: closed_form, else tree_dp, else brute; per component";
const KERNEL: &str = "kernel: integer-rescaled block sum";

enum Hosted {
    Graph(Graph),
    Kernel(Kernel),
}

impl Hosted {
    fn load(graph: &Option<String>, kernel: &Option<String>, seed: u64) -> Result<Self, Failure> {
        match (graph, kernel) {
            (Some(g), _) => Ok(Hosted::Graph(input::graph(g, seed)?)),
            (None, Some(k)) => Ok(Hosted::Kernel(input::kernel(k)?)),
            (None, None) => Err(Failure::Usage(
                "one of --graph or --kernel is required".into(),
            )),
        }
    }

    fn host(&self) -> Host<'_> {
        match self {
            Hosted::Graph(g) => Host::Graph(g),
            Hosted::Kernel(k) => Host::Kernel(k),
        }
    }

    fn engine(&self) -> String {
        match self {
            Hosted::Graph(_) => AUTO.into(),
            Hosted::Kernel(_) => KERNEL.into(),
        }
    }
}

pub fn run(cmd: &Command, ctx: &Ctx) -> Result<Outcome, Failure> {
    match cmd {
        Command::Gen(a) => gen(a, ctx),
        Command::Count(a) => count(a, ctx),
        Command::Density(a) => density(a, ctx),
        Command::Report(ReportCmd::Sidorenko(a)) => sidorenko(a, ctx),
        Command::Report(ReportCmd::Forcing(a)) => forcing(a, ctx),
        Command::Drc(a) => drc(a, ctx),
        Command::Check(CheckCmd::Correlation(a)) => check_correlation(a, ctx),
        Command::Search(SearchCmd::Correlation(a)) => search_correlation(a, ctx),
        Command::Ramsey(a) => ramsey(a, ctx),
        Command::Tensor(a) => tensor(a, ctx),
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("this family needs --{flag}")))
}

fn prob(p: &Option<String>) -> Result<Prob, Failure> {
    let s = p
        .as_deref()
        .ok_or_else(|| Failure::Usage("this family needs --p".into()))?;
    s.parse()
        .map_err(|e: Error| Failure::Usage(format!("--p: {e}")))
}

fn gen(a: &GenArgs, ctx: &Ctx) -> Result<Outcome, Failure> {
    let family = match a.family {
        FamilyName::Gnp => Family::Gnp {
            n: need(a.n, "n")?,
            p: prob(&a.p)?,
        },
        FamilyName::RandomBipartite => Family::RandomBipartite {
            n1: need(a.a, "a")?,
            n2: need(a.b, "b")?,
            p: prob(&a.p)?,
        },
        FamilyName::Complete => Family::Complete { n: need(a.n, "n")? },
        FamilyName::CompleteBipartite => Family::CompleteBipartite {
            a: need(a.a, "a")?,
            b: need(a.b, "b")?,
        },
        FamilyName::Path => Family::Path { k: need(a.k, "k")? },
        FamilyName::Cycle => Family::Cycle { n: need(a.n, "n")? },
        FamilyName::Star => Family::Star { k: need(a.k, "k")? },
        FamilyName::Hypercube => Family::Hypercube {
            dim: need(a.dim, "dim")?,
        },
        FamilyName::Paley => Family::Paley { q: need(a.q, "q")? },
        FamilyName::TwoCliques => Family::TwoCliques { n: need(a.n, "n")? },
        FamilyName::BlowUp => Family::BlowUp {
            base: a
                .base
                .clone()
                .ok_or_else(|| Failure::Usage("this family needs --base".into()))?,
            t: need(a.t, "t")?,
        },
    };
    let spec = GenSpec::new(family, ctx.seed);
    let g = generate(&spec).map_err(core)?;
    let file = GraphFile::from_graph(&g);
    let header = vec![
        format!("homdens {} gen", env!("CARGO_PKG_VERSION")),
        format!("spec {spec}"),
        format!("rng {RNG_ID}"),
        format!("edge_rule {EDGE_RULE}"),
        format!("vertices {} edges {}", g.n(), g.edge_count()),
    ];
    let mut out = Outcome::new(json!({ "spec": spec, "graph": file }), vec![RNG_ID.into()]);
    out.text = Some(io::to_text(&file, &header));
    Ok(out)
}

fn count(a: &CountArgs, ctx: &Ctx) -> Result<Outcome, Failure> {
    let h = input::graph(&a.pattern, ctx.seed)?;
    let g = input::graph(&a.graph, ctx.seed)?;
    if a.injective {
        let inj = injective_density(&h, &g);
        return Ok(Outcome::new(
            json!({
                "count": inj.count.to_string(),
                "injections": inj.injections.to_string(),
                "density": ExactValue(inj.value),
                "notice": inj.notice,
            }),
            vec!["injective backtracking".into()],
        ));
    }
    let (count, engines, notices) = match a.engine {
        EngineChoice::Auto => {
            let cfg = CountConfig {
                cross_check: a.cross_check,
                ..CountConfig::default()
            };
            let o = Counter::new(cfg).count(&h, &g).map_err(core)?;
            let mut names = engine_names(&o.engines);
            if a.cross_check {
                names.push("cross_check".into());
            }
            (o.count, names, o.notices)
        }
        EngineChoice::Brute => (
            hom_count_brute(&h, &g, h.n()).map_err(core)?,
            vec!["brute".into()],
            vec![],
        ),
        EngineChoice::Treedp => {
            let o = hom_count_treedp(&h, &g).map_err(core)?;
            let notes = o.fallback.into_iter().collect();
            (o.count, vec!["tree_dp".into()], notes)
        }
        EngineChoice::Closed => (
            hom_count_closed_form(&h, &g).map_err(core)?,
            vec!["closed_form".into()],
            vec![],
        ),
    };
    Ok(Outcome::new(
        json!({
            "pattern_vertices": h.n(),
            "vertices": g.n(),
            "count": count.to_string(),
            "notices": notices,
        }),
        engines,
    ))
}

fn density(a: &DensityArgs, ctx: &Ctx) -> Result<Outcome, Failure> {
    let h = input::graph(&a.pattern, ctx.seed)?;
    let host = Hosted::load(&a.graph, &a.kernel, ctx.seed)?;
    if a.injective {
        let Hosted::Graph(g) = &host else {
            return Err(Failure::Usage("--injective needs --graph".into()));
        };
        let inj = injective_density(&h, g);
        return Ok(Outcome::new(
            json!({ "density": ExactValue(inj.value), "count": inj.count.to_string(), "notice": inj.notice }),
            vec!["injective backtracking".into()],
        ));
    }
    let t = host.host().density(&h).map_err(core)?;
    Ok(Outcome::new(
        json!({ "density": ExactValue(t) }),
        vec![host.engine()],
    ))
}

fn sidorenko(a: &SidorenkoArgs, ctx: &Ctx) -> Result<Outcome, Failure> {
    let h = input::pattern(&a.pattern, ctx.seed)?;
    let host = Hosted::load(&a.graph, &a.kernel, ctx.seed)?;
    let rep = sidorenko_report(&h, host.host()).map_err(core)?;
    let complete = h.complete_side_params();
    let (conj, thm, width) = (
        rep.conjecture,
        rep.theorem13.as_ref().map(|t| t.holds),
        rep.width_bound.holds,
    );
    Ok(Outcome::new(
        json!({
            "complete_side": complete,
            "width": h.width(),
            "sidorenko": rep,
        }),
        vec![host.engine()],
    )
    .fail_unless(
        complete.is_none() || conj,
        "t_H >= t_K2^m failed for a pattern with a complete vertex",
    )
    .fail_unless(
        thm != Some(false),
        "complete-side bound t_H^{rd} >= t_{K_{r,d}}^m failed",
    )
    .fail_unless(width, "width bound t_H >= t_K2^{m+w} failed"))
}

fn forcing(a: &ForcingArgs, ctx: &Ctx) -> Result<Outcome, Failure> {
    let p = a.p.as_deref().map(|s| input::ratio(s, "--p")).transpose()?;
    let eps = input::ratio(&a.eps, "--eps")?;
    let pattern = a
        .pattern
        .as_deref()
        .map(|s| input::pattern(s, ctx.seed))
        .transpose()?;
    let mut out = Outcome::new(
        Value::Null,
        vec![AUTO.into(), "closed_form C4 and walk counts".into()],
    );
    let mut graphs = Vec::new();
    for src in &a.graph {
        let g = input::graph(src, ctx.seed)?;
        let battery = quasirandom_battery(&g, p.as_ref(), &ctx.tolerances).map_err(core)?;
        let p_ref = battery.p_ref.0.clone();
        let degrees = if p_ref > num_traits::Zero::zero() {
            let d = degree_concentration(&g, &p_ref, &eps).map_err(core)?;
            out = out.fail_unless(
                d.identity_holds,
                &format!("{src}: degree expansion identity failed"),
            );
            Some(d)
        } else {
            None
        };
        let leaves = match &pattern {
            Some(h) => match leaf_extension(h, &g) {
                Ok(l) => {
                    out = out
                        .fail_unless(
                            l.identity_holds,
                            &format!("{src}: leaf-extension identity failed"),
                        )
                        .fail_unless(
                            l.bound_holds,
                            &format!("{src}: min-degree extension bound failed"),
                        );
                    json!(l)
                }
                Err(e) => json!({ "skipped": e.to_string() }),
            },
            None => Value::Null,
        };
        graphs.push(json!({ "source": src, "battery": battery, "degrees": degrees, "leaf_extension": leaves }));
    }
    let specs: Vec<GenSpec> = a
        .graph
        .iter()
        .map(|s| input::gen_spec(s, ctx.seed))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    let experiment = match &pattern {
        Some(h) if specs.len() == a.graph.len() => {
            Some(forcing_experiment(h, &specs, p.as_ref(), &ctx.tolerances).map_err(core)?)
        }
        _ => None,
    };
    out.report = json!({ "graphs": graphs, "experiment": experiment });
    Ok(out)
}

fn drc(a: &DrcArgs, ctx: &Ctx) -> Result<Outcome, Failure> {
    let g = input::graph(&a.graph, ctx.seed)?;
    let pattern = a
        .pattern
        .as_deref()
        .map(|s| input::pattern(s, ctx.seed))
        .transpose()?;
    let best = pattern.as_ref().and_then(|h| h.complete_side_params());
    let r = a.r.or(best.map(|b| b.r));
    let d = a.d.or(best.map(|b| b.d));
    let n = a.n.or(pattern.as_ref().map(|h| h.n()));
    let (r, d, n) = (need(r, "r")?, need(d, "d")?, need(n, "n")?);
    let c = a.c.as_deref().map(|s| input::ratio(s, "--c")).transpose()?;
    let params = DrcParams::new(r, d, n, c.clone()).map_err(core)?;
    let mode = match a.samples {
        Some(samples) if !ctx.exhaustive => Mode::Sampling {
            samples: samples as usize,
            seed: ctx.seed,
        },
        _ => Mode::Exhaustive {
            budget: ctx.budget_enum as u128,
        },
    };
    let engines = vec!["support-set enumeration".into()];
    let mut rep = match drc_classify(&g, &params, &mode) {
        Ok(rep) => rep,
        Err(e @ Error::Vacuous { .. }) => {
            return Ok(Outcome::new(json!({ "vacuous": e.to_string() }), engines));
        }
        Err(e) => return Err(core(e)),
    };
    if !a.classes {
        rep.classes = None;
    }
    let theorem_scope = rep.exhaustive && params.c <= default_constant(n);
    let verdict = rep.verdict;
    let constructive = match &pattern {
        Some(h) => Some(
            constructive_bound_with(h, &g, Some((r, d)), c, ctx.budget_enum as u128)
                .map_err(core)?,
        ),
        None => None,
    };
    let certified = constructive.as_ref().is_none_or(|c| c.certified);
    Ok(Outcome::new(
        json!({ "classification": rep, "constructive": constructive }),
        engines,
    )
    .fail_unless(
        !theorem_scope || verdict,
        "good sequences carry less than half of h_{K_{r,d}}",
    )
    .fail_unless(
        certified,
        "constructive lower bound exceeds the exact count",
    ))
}

fn partition(h: &Graph, parts: &str) -> Result<EdgePartition, Failure> {
    EdgePartition::new(h, &input::parts(parts)?).map_err(core)
}

fn check_correlation(a: &CorrelationArgs, ctx: &Ctx) -> Result<Outcome, Failure> {
    let h = input::graph(&a.pattern, ctx.seed)?;
    let part = partition(&h, &a.parts)?;
    let host = Hosted::load(&a.graph, &a.kernel, ctx.seed)?;
    let rep = correlation_check(&h, &part, host.host()).map_err(core)?;
    Ok(Outcome::new(rep, vec![host.engine()]))
}

fn search_correlation(a: &SearchArgs, ctx: &Ctx) -> Result<Outcome, Failure> {
    let h = input::graph(&a.pattern, ctx.seed)?;
    let part = partition(&h, &a.parts)?;
    let space = match a.space {
        SpaceName::AllGraphs => SearchSpace::AllGraphs { max_n: a.max_n },
        SpaceName::KernelGrid => SearchSpace::KernelGrid {
            q: a.q,
            weight_levels: a.levels,
            measure_levels: a.measure_levels,
        },
        SpaceName::Constant => SearchSpace::Constant { levels: a.levels },
        SpaceName::Local => SearchSpace::LocalSearch {
            q: a.q,
            levels: a.levels,
            iters: a.iters,
            seed: ctx.seed,
        },
    };
    let rep = correlation_search(&h, &part, &space, a.budget).map_err(core)?;
    Ok(Outcome::new(
        rep,
        vec![
            AUTO.into(),
            KERNEL.into(),
            "recheck: brute / direct rationals".into(),
        ],
    ))
}

fn ramsey(a: &RamseyArgs, ctx: &Ctx) -> Result<Outcome, Failure> {
    let h = input::pattern(&a.pattern, ctx.seed)?;
    let mode = match a.samples {
        Some(samples) if !ctx.exhaustive => ScanMode::Random {
            samples,
            seed: ctx.seed,
        },
        _ => ScanMode::Exhaustive,
    };
    let rep = multiplicity_scan(&h, a.n, &mode).map_err(core)?;
    let exact = !rep.upper_bound_only;
    let within = rep.within_random_bound;
    Ok(Outcome::new(
        rep,
        vec!["gray-code scan, incremental C4 or injective backtracking".into()],
    )
    .fail_unless(!exact || within, "exact c_{H,N} exceeds 2^{1-m}"))
}

fn tensor(a: &TensorArgs, ctx: &Ctx) -> Result<Outcome, Failure> {
    let h = input::graph(&a.pattern, ctx.seed)?;
    let g = input::graph(&a.graph, ctx.seed)?;
    let rep = tensor_power_check(&h, &g, a.s, ctx.budget_vertices).map_err(core)?;
    let equal = rep.equal;
    Ok(Outcome::new(rep, vec![AUTO.into()])
        .fail_unless(equal != Some(false), "t_H(G^s) != t_H(G)^s"))
}
