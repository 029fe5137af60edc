use std::io::Read;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context};
use serde::Deserialize;
use serde_json::{json, Value};

use hallcore::complexes::ReducedForm;
use hallcore::dhall::{self, DHElement};
use hallcore::format::{complex_from_json, Codec, ElementJson, WordJson};
use hallcore::homalg::HallContext;
use hallcore::mhall::{AlgebraElement, Engine, Mode, NormalWord};
use hallcore::ffla::FqMatrix;
use hallcore::quiverrep::{ClassNames, IsoClassId};
use hallcore::verify::{self, CheckReport, SampleParams};
use hallcore::{Error, Rat, Scalar};

use crate::config::Config;
use crate::{cache, Cli, Command, Suite};

pub struct Outcome {
    pub json: Value,
    pub passed: bool,
}

impl Outcome {
    fn ok(json: Value) -> Self {
        Outcome { json, passed: true }
    }
}

/// 3 for resource guards, 1 for internal consistency failures, 2 otherwise.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Resource(_)) => 3,
        Some(Error::Consistency(_)) => 1,
        _ => 2,
    }
}

struct Session {
    config: Config,
    ctx: HallContext,
}

impl Session {
    fn open(cli: &Cli) -> anyhow::Result<Session> {
        let mut config = match &cli.config {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        if let Some(s) = cli.seed {
            config.seed = s;
        }
        if let Some(g) = cli.guard_steps {
            config.step_guard = g;
        }
        if let Some(n) = cli.threads {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .context("configuring the thread pool")?;
        }
        let table = cache::obtain(&config, !cli.no_cache)?;
        Ok(Session {
            config,
            ctx: HallContext::from_arc(Arc::new(table)),
        })
    }

    fn codec(&self) -> Codec<'_> {
        Codec::new(self.ctx.table())
    }

    fn class(&self, names: &ClassNames, text: &str) -> anyhow::Result<IsoClassId> {
        Ok(names.resolve(self.ctx.table(), text)?)
    }

    fn engine(&self, mode: Mode) -> Engine<'_> {
        Engine::new(&self.ctx, mode).with_step_guard(self.config.step_guard)
    }

    /// Largest total dimension whose dimension vectors all lie in the table.
    fn default_total_dim(&self) -> usize {
        let t = self.ctx.table();
        let min_cap = t.caps().iter().copied().min().unwrap_or(0);
        t.total_cap().map_or(min_cap, |c| c.min(min_cap))
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> anyhow::Result<T> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).context("reading stdin")?;
    } else {
        text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    }
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Operands {
    List(Vec<ElementJson>),
    Wrapped { operands: Vec<ElementJson> },
}

pub fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let s = Session::open(cli)?;
    let names = ClassNames::new(s.ctx.table());
    match &cli.command {
        Command::Reps => Ok(Outcome::ok(reps(&s, &names))),
        Command::Hall { a, b, c } => {
            let (a, b, c) = (s.class(&names, a)?, s.class(&names, b)?, s.class(&names, c)?);
            Ok(Outcome::ok(json!({ "g": s.ctx.hall_number(a, b, c)? })))
        }
        Command::Gamma { a, b, m, n } => {
            let (a, b) = (s.class(&names, a)?, s.class(&names, b)?);
            let (m, n) = (s.class(&names, m)?, s.class(&names, n)?);
            let g: Rat = s.ctx.gamma(a, b, m, n)?;
            Ok(Outcome::ok(json!({ "gamma": g.to_fraction() })))
        }
        Command::Euler { a, b } => euler(&s, &names, a.as_deref(), b.as_deref()),
        Command::Mult { mode, file } => mult(&s, (*mode).into(), read_json(file)?),
        Command::Reduce { file, twisted } => {
            let x = complex_from_json(s.ctx.category(), &read_json(file)?)?;
            let r: ReducedForm<Rat> = x.reduce(&s.ctx, *twisted)?;
            Ok(Outcome::ok(serde_json::to_value(s.codec().reduced_to_json(&r))?))
        }
        Command::Iota { file } => {
            let codec = s.codec();
            let x: DHElement<Rat> = codec.dh_from_json(&read_json(file)?)?;
            let y = dhall::iota(&s.ctx, &x)?;
            Ok(Outcome::ok(serde_json::to_value(codec.element_to_json(&y))?))
        }
        Command::Decompose { file } => decompose(&s, read_json(file)?),
        Command::Green { total_dim } => {
            let t = total_dim.unwrap_or_else(|| s.default_total_dim());
            report(verify::green_check(&s.ctx, t)?)
        }
        Command::Verify { suite, total_dim, mode, samples, gen_cap, degree_min, degree_max } => {
            if degree_min > degree_max {
                bail!("--degree-min {degree_min} exceeds --degree-max {degree_max}");
            }
            let mut p = SampleParams::new(&s.ctx, *samples, s.config.seed);
            p.gen_caps = s.ctx.table().caps().iter().map(|&c| c.min(*gen_cap)).collect();
            p.window = (*degree_min, *degree_max);
            p.step_guard = s.config.step_guard;
            let total = total_dim.unwrap_or_else(|| s.default_total_dim());
            report(run_suite(&s.ctx, *suite, mode.map(Mode::from), &p, total)?)
        }
    }
}

fn report(r: CheckReport) -> anyhow::Result<Outcome> {
    Ok(Outcome {
        passed: r.passed,
        json: serde_json::to_value(&r)?,
    })
}

fn run_suite(ctx: &HallContext, suite: Suite, mode: Option<Mode>, p: &SampleParams, total: usize) -> hallcore::Result<CheckReport> {
    let modes: Vec<Mode> = mode.map_or(Mode::ALL.to_vec(), |m| vec![m]);
    let per_mode = |name: &str, f: &dyn Fn(Mode) -> hallcore::Result<CheckReport>| -> hallcore::Result<CheckReport> {
        if let [m] = modes.as_slice() {
            return f(*m);
        }
        let parts = modes.iter().map(|&m| f(m)).collect::<hallcore::Result<Vec<_>>>()?;
        Ok(CheckReport::combine(name, verify::context_parameters(ctx), parts))
    };
    match suite {
        Suite::Green => verify::green_check(ctx, total),
        Suite::Hall => verify::hall_crosscheck(ctx),
        Suite::ExtSum => verify::ext_sum_check(ctx),
        Suite::Gamma => verify::gamma_check(ctx),
        Suite::Euler => verify::euler_check(ctx, p.window),
        Suite::Consistency => verify::consistency_suite(ctx, p.window),
        Suite::Assoc => per_mode("associativity", &|m| verify::associativity_suite(ctx, m, p)),
        Suite::Confluence => per_mode("confluence", &|m| verify::confluence_suite(ctx, m, p)),
        Suite::Embed => verify::embed_suite(ctx, p),
        Suite::Reduction => verify::reduction_suite(ctx, p),
        Suite::Algebra => verify::algebra_suite(ctx, p),
        Suite::All => {
            let parts = vec![
                verify::green_check(ctx, total)?,
                verify::consistency_suite(ctx, p.window)?,
                verify::algebra_suite(ctx, p)?,
            ];
            Ok(CheckReport::combine("all", verify::context_parameters(ctx), parts))
        }
    }
}

fn reps(s: &Session, names: &ClassNames) -> Value {
    let t = s.ctx.table();
    let classes: Vec<Value> = t
        .classes()
        .iter()
        .map(|c| {
            json!({
                "id": c.id,
                "name": names.name(c.id),
                "dim_vector": c.rep.dims(),
                "arrow_maps": c.rep.maps().iter().map(FqMatrix::to_rows).collect::<Vec<_>>(),
                "aut": c.aut.to_string(),
                "indecomposable": t.is_indecomposable(c.id),
            })
        })
        .collect();
    let aliases: serde_json::Map<String, Value> = names.aliases().into_iter().map(|(n, id)| (n, json!(id))).collect();
    json!({
        "parameters": verify::context_parameters(&s.ctx),
        "classes": classes,
        "aliases": aliases,
    })
}

fn euler(s: &Session, names: &ClassNames, a: Option<&str>, b: Option<&str>) -> anyhow::Result<Outcome> {
    let ctx = &s.ctx;
    match (a, b) {
        (None, None) => {
            let n = ctx.vertex_count();
            let unit = |i: usize| (0..n).map(|j| i64::from(i == j)).collect::<Vec<_>>();
            let matrix: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| ctx.euler(&unit(i), &unit(j))).collect()).collect();
            Ok(Outcome::ok(json!({ "matrix": matrix })))
        }
        (Some(a), Some(b)) => {
            let (a, b) = (s.class(names, a)?, s.class(names, b)?);
            let e = ctx.euler(&ctx.class(a), &ctx.class(b));
            Ok(Outcome::ok(json!({
                "euler": e,
                "hom": ctx.hom_dim(a, b)?,
                "ext1": ctx.ext1_dim_ids(a, b)?,
                "multiplicative": Rat::q_pow(ctx.q(), e).to_fraction(),
            })))
        }
        _ => bail!("euler takes either no classes or two"),
    }
}

fn mult(s: &Session, mode: Mode, ops: Operands) -> anyhow::Result<Outcome> {
    let ops = match ops {
        Operands::List(v) | Operands::Wrapped { operands: v } => v,
    };
    let codec = s.codec();
    let engine = s.engine(mode);
    let out = if mode.is_derived() {
        let mut acc = DHElement::<Rat>::one();
        for x in &ops {
            acc = dhall::dh_multiply_with(&engine, &acc, &codec.dh_from_json(x)?)?;
        }
        codec.dh_to_json(&acc)
    } else {
        let mut acc = AlgebraElement::<Rat>::one();
        for x in &ops {
            acc = engine.multiply(&acc, &codec.element_from_json(x)?)?;
        }
        codec.element_to_json(&acc)
    };
    Ok(Outcome::ok(serde_json::to_value(out)?))
}

fn decompose(s: &Session, x: ElementJson) -> anyhow::Result<Outcome> {
    let codec = s.codec();
    let x: AlgebraElement<Rat> = codec.element_from_json(&x)?;
    let terms: Vec<Value> = x
        .terms()
        .map(|(w, c)| {
            let (u, tau) = dhall::tensor_decompose(&s.ctx, w);
            let derived = codec.word_to_json(&NormalWord::new(Default::default(), u.stalks()));
            let torus = codec.word_to_json(&NormalWord::new(tau, []));
            json!({
                "coeff": c.to_fraction(),
                "derived": WordJson { torus: Vec::new(), ..derived },
                "torus": torus.torus,
            })
        })
        .collect();
    Ok(Outcome::ok(json!({ "terms": terms })))
}
