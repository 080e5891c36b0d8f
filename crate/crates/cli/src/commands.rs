//! Command implementations. Each returns the JSON report (or witness line)
//! for stdout and a human summary for stderr.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use oigb_core::groebner::{betti_table, equivariant_buchberger, normal_form};
use oigb_core::order::{encode_higman, oi_divides_mod, order_by_name};
use oigb_core::polyring::fi_divides_ring;
use oigb_core::stabilize::{detect_all, DEFAULT_MIN_CONSECUTIVE};
use oigb_core::text::{parse_element, parse_module_monomial, parse_polynomial, render_element, render_monomial};
use oigb_core::{
    BettiTable, CertStatus, Field, FieldSpec, Flavor, GbConfig, GeneratorSet, KoszulComplex, ModuleElement,
    MonomialOrder, PrimeField, Rationals, ResolveTarget, Signature, Slot, VariableScheme,
};
use serde_json::{json, Map, Value};

use crate::error::{CliError, Result};
use crate::session::{GenLine, IntList, Session, SlotList};
use crate::{Cli, Command, GenArgs, Report, SweepArgs, SCHEMA_VERSION};

struct Context {
    session: Session,
    field: FieldSpec,
    sig: Signature,
    order: Arc<dyn MonomialOrder>,
}

impl Context {
    fn new(cli: &Cli) -> Result<Self> {
        let session = match &cli.session {
            Some(path) => Session::load(path)?,
            None => Session::default(),
        };
        let field = session.resolve(cli.field, "field", FieldSpec::Rational)?;
        let scheme = session.resolve(cli.scheme, "scheme", VariableScheme::Tensor { c: 1 })?;
        let slots = session.resolve(cli.slots.clone(), "slots", SlotList(vec![Slot { d: 0, shift: 0 }]))?;
        let order_name = session.resolve(cli.order.clone(), "order", "paper_lex".to_string())?;
        Ok(Context {
            field,
            sig: Signature::new(scheme, slots.0),
            order: order_by_name(&order_name)?,
            session,
        })
    }

    fn config(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("field".into(), json!(self.field.to_string()));
        m.insert("scheme".into(), json!(self.sig.scheme.to_string()));
        m.insert("slots".into(), json!(self.sig.to_string()));
        m.insert("order".into(), json!(self.order.name()));
        m
    }

    fn flag(&self, flag: bool, key: &str) -> Result<bool> {
        if flag {
            return Ok(true);
        }
        self.session.resolve(None, key, false)
    }

    fn gb_config(&self, args: &SweepArgs) -> Result<GbConfig> {
        let d = GbConfig::default();
        Ok(GbConfig {
            max_width: self.session.resolve(args.max_width, "max_width", d.max_width)?,
            lookahead: self.session.resolve(args.lookahead, "lookahead", d.lookahead)?,
        })
    }

    fn generators<F: Field>(&self, field: &F, args: &GenArgs) -> Result<(GeneratorSet<F>, Vec<Value>)> {
        let flavor = self.session.resolve(args.flavor, "flavor", Flavor::OI)?;
        let lines = if args.gens.is_empty() {
            &self.session.gens
        } else {
            &args.gens
        };
        let elems = lines
            .iter()
            .map(|g| parse_element(field, &self.sig, &g.text, g.width))
            .collect::<oigb_core::Result<Vec<_>>>()?;
        let listed = render_list(field, &self.sig, &elems);
        Ok((GeneratorSet::new(field, &self.sig, elems, flavor)?, listed))
    }
}

macro_rules! with_field {
    ($ctx:expr, $f:ident => $body:expr) => {
        match $ctx.field {
            FieldSpec::Rational => {
                let $f = &Rationals;
                $body
            }
            FieldSpec::Prime(p) => {
                let $f = &PrimeField::new(p)?;
                $body
            }
        }
    };
}

fn render_list<F: Field>(field: &F, sig: &Signature, elems: &[ModuleElement<F>]) -> Vec<Value> {
    elems
        .iter()
        .map(|e| json!({ "width": e.width(), "element": render_element(field, sig, e) }))
        .collect()
}

fn json_report(mut config: Map<String, Value>, body: Value, stderr: String, exit: u8) -> Report {
    let mut out = Map::new();
    out.insert("schema_version".into(), json!(SCHEMA_VERSION));
    out.insert("config".into(), Value::Object(std::mem::take(&mut config)));
    if let Value::Object(fields) = body {
        out.extend(fields);
    }
    let mut stdout = serde_json::to_string_pretty(&Value::Object(out)).expect("JSON values serialize");
    stdout.push('\n');
    Report { stdout, stderr, exit }
}

pub fn execute(cli: &Cli) -> Result<Report> {
    let ctx = Context::new(cli)?;
    match &cli.command {
        Command::Divides { mu, nu, flavor, json } => divides(&ctx, mu, nu, *flavor, *json),
        Command::Encode { mu } => encode(&ctx, mu),
        Command::Nf {
            q,
            gens,
            sweep,
            groebner,
        } => with_field!(ctx, f => nf(f, &ctx, q.as_ref(), gens, sweep, *groebner)),
        Command::Gb { gens, sweep, strict } => with_field!(ctx, f => gb(f, &ctx, gens, sweep, *strict)),
        Command::Betti {
            gens,
            widths,
            max_p,
            target,
        } => with_field!(ctx, f => betti(f, &ctx, gens, widths.clone(), *max_p, *target)),
        Command::Koszul {
            a,
            width,
            max_degree,
            max_p,
        } => with_field!(ctx, f => koszul(f, &ctx, a.clone(), *width, *max_degree, *max_p)),
        Command::Stabilize {
            table,
            p,
            min_consecutive,
        } => stabilize(&ctx, table.as_deref(), p.clone(), *min_consecutive),
    }
}

fn divides(ctx: &Context, mu: &GenLine, nu: &GenLine, flavor: Option<Flavor>, as_json: bool) -> Result<Report> {
    let flavor = ctx.session.resolve(flavor, "flavor", Flavor::OI)?;
    let m = parse_module_monomial(&ctx.sig, &mu.text, mu.width)?;
    let n = parse_module_monomial(&ctx.sig, &nu.text, nu.width)?;
    let scheme = &ctx.sig.scheme;
    let witness = match flavor {
        Flavor::OI => oi_divides_mod(&ctx.sig, &m, &n)?
            .map(|w| format!("{} * {}", w.morphism, render_monomial(scheme, &w.cofactor))),
        Flavor::FI => {
            if ctx.sig.slots[m.slot].d != 0 || ctx.sig.slots[n.slot].d != 0 {
                return Err(CliError::Usage(
                    "FI divisibility is implemented for d = 0 summands only".into(),
                ));
            }
            if m.slot != n.slot {
                None
            } else {
                fi_divides_ring(scheme, &m.mono, &n.mono)
                    .map(|w| format!("{} * {}", w.morphism, render_monomial(scheme, &w.cofactor)))
            }
        }
    };
    let exit = if witness.is_some() { 0 } else { 1 };
    if !as_json {
        let line = witness.unwrap_or_else(|| "none".into());
        return Ok(Report {
            stdout: format!("{line}\n"),
            stderr: String::new(),
            exit,
        });
    }
    let mut config = ctx.config();
    config.remove("order");
    config.insert("flavor".into(), json!(flavor));
    config.insert("mu".into(), json!({ "width": m.width(), "monomial": mu.text }));
    config.insert("nu".into(), json!({ "width": n.width(), "monomial": nu.text }));
    Ok(json_report(
        config,
        json!({ "divides": witness.is_some(), "witness": witness }),
        String::new(),
        exit,
    ))
}

fn encode(ctx: &Context, mu: &GenLine) -> Result<Report> {
    let m = parse_module_monomial(&ctx.sig, &mu.text, mu.width)?;
    let code = encode_higman(&ctx.sig, &m)?;
    let mut human = String::new();
    for entry in &code.entries {
        let blocks: Vec<String> = entry.iter().map(|(u, i)| format!("({u:?},{i})")).collect();
        writeln!(human, "{}", blocks.join(" x ")).unwrap();
    }
    let mut config = ctx.config();
    config.remove("order");
    config.insert("mu".into(), json!({ "width": m.width(), "monomial": mu.text }));
    Ok(json_report(config, json!({ "code": code }), human, 0))
}

fn nf<F: Field>(
    field: &F,
    ctx: &Context,
    q: Option<&GenLine>,
    args: &GenArgs,
    sweep: &SweepArgs,
    groebner: bool,
) -> Result<Report> {
    let q = match q {
        Some(q) => q.clone(),
        None => ctx
            .session
            .resolve_opt(None::<GenLine>, "q")?
            .ok_or_else(|| CliError::Usage("nf needs an element (argument or `q` in the session)".into()))?,
    };
    let groebner = ctx.flag(groebner, "groebner")?;
    let (gens, listed) = ctx.generators(field, args)?;
    let elem = parse_element(field, &gens.signature, &q.text, q.width)?;
    let mut config = ctx.config();
    config.insert("flavor".into(), json!(gens.flavor));
    config.insert("generators".into(), Value::Array(listed));
    config.insert(
        "q".into(),
        json!({ "width": elem.width(), "element": render_element(field, &gens.signature, &elem) }),
    );
    config.insert("groebner".into(), json!(groebner));
    let mut body = Map::new();
    let remainder = if groebner {
        let cfg = ctx.gb_config(sweep)?;
        config.insert("max_width".into(), json!(cfg.max_width));
        config.insert("lookahead".into(), json!(cfg.lookahead));
        let gb = equivariant_buchberger(field, &gens, ctx.order.clone(), cfg)?;
        body.insert("certification".into(), json!(gb.certification));
        normal_form(field, &gens.signature, ctx.order.clone(), &elem, &gb.basis)?
    } else {
        normal_form(field, &gens.signature, ctx.order.clone(), &elem, &gens.gens)?
    };
    let text = render_element(field, &gens.signature, &remainder);
    body.insert("remainder".into(), json!(text));
    body.insert("is_zero".into(), json!(remainder.is_zero()));
    Ok(json_report(config, Value::Object(body), format!("{text}\n"), 0))
}

fn gb<F: Field>(field: &F, ctx: &Context, args: &GenArgs, sweep: &SweepArgs, strict: bool) -> Result<Report> {
    let strict = ctx.flag(strict, "strict")?;
    let cfg = ctx.gb_config(sweep)?;
    let (gens, listed) = ctx.generators(field, args)?;
    let gb = equivariant_buchberger(field, &gens, ctx.order.clone(), cfg)?;
    let mut config = ctx.config();
    config.insert("flavor".into(), json!(gens.flavor));
    config.insert("generators".into(), Value::Array(listed));
    config.insert("max_width".into(), json!(cfg.max_width));
    config.insert("lookahead".into(), json!(cfg.lookahead));
    config.insert("strict".into(), json!(strict));
    let cert = gb.certification;
    let mut human = format!(
        "{} basis elements, {:?} (certified width {}, lookahead {})\n",
        gb.basis.len(),
        cert.status,
        cert.certified_width,
        cert.lookahead
    );
    for b in &gb.basis {
        writeln!(human, "  [{}] {}", b.width(), render_element(field, &gens.signature, b)).unwrap();
    }
    for w in &gens.warnings {
        writeln!(human, "warning: {w}").unwrap();
    }
    let exit = if strict && cert.status == CertStatus::WidthLimited {
        3
    } else {
        0
    };
    Ok(json_report(
        config,
        json!({
            "signature": gens.signature.to_string(),
            "basis": render_list(field, &gens.signature, &gb.basis),
            "certification": cert,
            "swept": gb.swept,
            "warnings": gens.warnings,
        }),
        human,
        exit,
    ))
}

/// One block per width: rows `p`, columns `j`, zero entries shown as `.`.
pub fn render_betti(table: &BettiTable) -> String {
    let mut out = String::new();
    for n in table.widths() {
        let rows: Vec<_> = (0..).map(|p| table.row(n, p)).take_while(|r| !r.is_empty()).collect();
        let js: std::collections::BTreeSet<i64> = rows.iter().flat_map(|r| r.keys().copied()).collect();
        writeln!(out, "width {n}").unwrap();
        if js.is_empty() {
            writeln!(out, "  (zero)").unwrap();
            continue;
        }
        let header: Vec<String> = js.iter().map(|j| format!("{j:>6}")).collect();
        writeln!(out, "  p\\j{}", header.join("")).unwrap();
        for (p, row) in rows.iter().enumerate() {
            let cells: Vec<String> = js
                .iter()
                .map(|j| row.get(j).map_or(format!("{:>6}", "."), |b| format!("{b:>6}")))
                .collect();
            writeln!(out, "  {p:<3}{}", cells.join("")).unwrap();
        }
    }
    out
}

fn betti<F: Field>(
    field: &F,
    ctx: &Context,
    args: &GenArgs,
    widths: Option<IntList>,
    max_p: Option<usize>,
    target: Option<ResolveTarget>,
) -> Result<Report> {
    let widths = ctx.session.resolve(widths, "widths", IntList((1..=5).collect()))?.0;
    let max_p = ctx.session.resolve(max_p, "max_p", 3)?;
    let target = ctx.session.resolve(target, "target", ResolveTarget::Quotient)?;
    let (gens, listed) = ctx.generators(field, args)?;
    let table = betti_table(field, &gens, ctx.order.clone(), &widths, max_p, target)?;
    let mut config = ctx.config();
    config.insert("flavor".into(), json!(gens.flavor));
    config.insert("generators".into(), Value::Array(listed));
    config.insert("widths".into(), json!(widths));
    config.insert("max_p".into(), json!(max_p));
    config.insert("target".into(), json!(target));
    let human = render_betti(&table);
    Ok(json_report(config, json!({ "table": table }), human, 0))
}

fn koszul<F: Field>(
    field: &F,
    ctx: &Context,
    a: Option<String>,
    width: Option<usize>,
    max_degree: Option<i64>,
    max_p: Option<usize>,
) -> Result<Report> {
    let a = ctx
        .session
        .resolve_opt(a, "a")?
        .ok_or_else(|| CliError::Usage("koszul needs --a".into()))?;
    let n = ctx
        .session
        .resolve_opt(width, "width")?
        .ok_or_else(|| CliError::Usage("koszul needs --width".into()))?;
    let scheme = ctx.sig.scheme;
    let a = parse_polynomial(field, &scheme, &a, Some(1))?;
    let complex = KoszulComplex::new(field, &a, n)?;
    let max_degree = match ctx.session.resolve_opt(max_degree, "max_degree")? {
        Some(d) => d,
        None => complex.default_degree_bound()?,
    };
    let max_p = ctx.session.resolve(max_p, "max_p", n)?;
    let complex_ok = complex.is_complex(field);
    let dims = complex.homology_dims(field, max_degree, max_p)?;
    let homology: Vec<Value> = dims
        .iter()
        .filter(|(_, &dim)| dim > 0)
        .map(|(&(p, j), &dim)| json!({ "p": p, "j": j, "dim": dim }))
        .collect();
    let mut human = format!("complex: {complex_ok}\n");
    for (&(p, j), &dim) in dims.iter().filter(|(_, &d)| d > 0) {
        writeln!(human, "  H_{p} in degree {j}: {dim}").unwrap();
    }
    let mut config = ctx.config();
    config.remove("order");
    config.remove("slots");
    config.insert("a".into(), json!(oigb_core::text::render_polynomial(field, &a)));
    config.insert("width".into(), json!(n));
    config.insert("max_degree".into(), json!(max_degree));
    config.insert("max_p".into(), json!(max_p));
    Ok(json_report(
        config,
        json!({ "complex_ok": complex_ok, "homology": homology }),
        human,
        0,
    ))
}

/// Accepts either a bare table or the full output of `betti`.
pub fn read_table(path: &Path) -> Result<BettiTable> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut value: Value = serde_json::from_str(&text)?;
    if let Some(inner) = value.get_mut("table") {
        value = inner.take();
    }
    Ok(serde_json::from_value(value)?)
}

fn stabilize(
    ctx: &Context,
    table: Option<&Path>,
    ps: Option<IntList>,
    min_consecutive: Option<usize>,
) -> Result<Report> {
    let path = match table {
        Some(p) => p.to_path_buf(),
        None => ctx
            .session
            .get("table")
            .map(Into::into)
            .ok_or_else(|| CliError::Usage("stabilize needs --table".into()))?,
    };
    let t = read_table(&path)?;
    let top = t.entries().iter().map(|e| e.p).max().unwrap_or(0);
    let ps = ctx.session.resolve(ps, "p", IntList((0..=top).collect()))?.0;
    let min_consecutive = ctx
        .session
        .resolve(min_consecutive, "min_consecutive", DEFAULT_MIN_CONSECUTIVE)?;
    let report = detect_all(&t, ps.iter().copied(), min_consecutive)?;
    let mut human = String::new();
    for e in &report.entries {
        let onset = e.onset_width.map_or("-".to_string(), |w| w.to_string());
        writeln!(human, "p={}: {} degrees {:?} onset {}", e.p, e.status, e.degrees, onset).unwrap();
    }
    let mut config = Map::new();
    config.insert("table".into(), json!(path.display().to_string()));
    config.insert("p".into(), json!(ps));
    config.insert("min_consecutive".into(), json!(min_consecutive));
    Ok(json_report(config, json!({ "entries": report.entries }), human, 0))
}
