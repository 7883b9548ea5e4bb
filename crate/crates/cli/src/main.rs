mod parse;
mod render;

use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use wittring::field::DEFAULT_MAX_ORDER;
use wittring::forms::DEFAULT_SEARCH_LIMIT;
use wittring::{
    enumerate_classes, normal_form, reduce_word, suite, verify_bullets, DiagonalForm, FieldElement, FiniteField,
    GramForm, GroupRingElement, Pic2Group, SquareClass, WittClass, WittContext, WittK,
};

use wittring::group_ring::letters;

use parse::ExprParser;

macro_rules! out {
    ($w:expr, $($arg:tt)*) => {
        $w.push_str(&format!($($arg)*))
    };
}

macro_rules! outln {
    ($w:expr) => {
        $w.push('\n')
    };
    ($w:expr, $($arg:tt)*) => {{
        $w.push_str(&format!($($arg)*));
        $w.push('\n');
    }};
}

/// Largest Picard rank `curve-table` will print.
const MAX_TABLE_RANK: u32 = 4;

#[derive(Parser)]
#[command(
    name = "wittring",
    version,
    about = "Witt rings of finite fields and of curves over them"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Emit a single JSON document on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Candidate limit for isotropic-vector searches.
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_LIMIT)]
    max_search: u64,
    /// Largest field order accepted.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ORDER)]
    max_order: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Field parameters, modulus and canonical non-square.
    FieldInfo {
        /// Field order as `q` or `p^e`.
        #[arg(long)]
        q: String,
    },
    /// Addition and multiplication tables of W(F_q), with the identity checks.
    WittkTable {
        #[arg(long)]
        q: String,
    },
    /// Diagonalize a symmetric Gram matrix.
    FormDiag {
        #[arg(long)]
        q: String,
        /// Rows separated by `;`, entries by `,`; extension entries as `(c0,c1,...)`.
        #[arg(long)]
        gram: String,
    },
    /// Witt decomposition of a diagonal form.
    FormWitt {
        #[arg(long)]
        q: String,
        /// Diagonal entries separated by `,`.
        #[arg(long, allow_hyphen_values = true)]
        diag: String,
    },
    /// Symbolic and instantiated W(C) tables for Picard 2-rank r.
    CurveTable {
        #[arg(long)]
        q: String,
        #[arg(long)]
        r: u32,
    },
    /// Class in W(C) of a word of line bundles or of an expression.
    CurveEval {
        #[arg(long)]
        q: String,
        #[arg(long)]
        r: u32,
        /// Orthogonal sum `(u,L);(v,M);...` with `u` in {1, s}.
        #[arg(long, conflicts_with = "expr", required_unless_present = "expr")]
        word: Option<String>,
        /// Expression such as `<1,-s:01> * <s:10> + 0`.
        #[arg(long, allow_hyphen_values = true)]
        expr: Option<String>,
    },
    /// Normal form in W(C) of an element of W(k)[2Pic].
    CurveNormalForm {
        #[arg(long)]
        q: String,
        #[arg(long)]
        r: u32,
        /// Terms `(c,L);...` with `c` in {0, 1, s, e}, or a JSON array of `{"coef","L"}`.
        #[arg(long)]
        element: String,
    },
    /// Run the verification suite.
    Verify {
        /// Run only these check ids.
        #[arg(long)]
        only: Vec<u8>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let status = run(&mut out, &cli);
    if let Err(e) = io::stdout().lock().write_all(out.as_bytes()) {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: writing output: {e}");
            return ExitCode::from(2);
        }
    }
    match status {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` signals a failed verification.
fn run(w: &mut String, cli: &Cli) -> Result<bool> {
    let c = &cli.common;
    let field = |q: &str| FiniteField::parse_order(q, c.max_order).with_context(|| format!("--q {q}"));
    let context = |q: &str| field(q).map(|f| WittContext::of_field(&f));
    let group = |r: u32| Pic2Group::new(r).with_context(|| format!("--r {r}"));
    match &cli.command {
        Command::FieldInfo { q } => field_info(w, c, &field(q)?),
        Command::WittkTable { q } => wittk_table(w, c, &field(q)?),
        Command::FormDiag { q, gram } => form_diag(w, c, &field(q)?, gram),
        Command::FormWitt { q, diag } => form_witt(w, c, &field(q)?, diag),
        Command::CurveTable { q, r } => curve_table(w, c, context(q)?, group(*r)?),
        Command::CurveEval { q, r, word, expr } => {
            let (ctx, g) = (context(q)?, group(*r)?);
            let class = match (word, expr) {
                (Some(w), _) => {
                    let word = wittring::curve::parse_word(w)?;
                    if let Some((_, l)) = word.iter().find(|(_, l)| l.rank() != g.rank()) {
                        bail!(
                            "line bundle {:?} has rank {}, expected {}",
                            l.to_bits(),
                            l.rank(),
                            g.rank()
                        );
                    }
                    reduce_word(ctx, g, &word)?
                }
                (None, Some(e)) => ExprParser::new(e, ctx, g).evaluate()?,
                (None, None) => bail!("one of --word or --expr is required"),
            };
            curve_eval(w, c, class)
        }
        Command::CurveNormalForm { q, r, element } => {
            let (ctx, g) = (context(q)?, group(*r)?);
            let f = if element.trim_start().starts_with('[') {
                let records: Vec<wittring::group_ring::TermRecord> =
                    serde_json::from_str(element).context("--element JSON")?;
                GroupRingElement::from_records(ctx, g, &records)?
            } else {
                GroupRingElement::parse(ctx, g, element)?
            };
            curve_normal_form(w, c, &f)
        }
        Command::Verify { only } => verify(w, c, only),
    }
}

fn emit(w: &mut String, value: &impl Serialize) -> Result<()> {
    outln!(w, "{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn element_json(a: &FieldElement) -> Value {
    if a.field().degree() == 1 {
        json!(a.index())
    } else {
        json!(a.coeffs())
    }
}

fn class_label(u: SquareClass) -> &'static str {
    match u {
        SquareClass::One => "square",
        SquareClass::NonSquare => "non-square",
    }
}

fn field_info(w: &mut String, c: &Common, f: &FiniteField) -> Result<bool> {
    let s = f.canonical_nonsquare();
    if c.json {
        emit(
            w,
            &json!({
                "p": f.characteristic(),
                "e": f.degree(),
                "q": f.order(),
                "modulus": f.modulus(),
                "modulus_string": f.modulus_string(),
                "s": element_json(&s),
                "q_mod_4": f.residue_mod4(),
                "minus_one_class": f.minus_one_class().label(),
            }),
        )?;
    } else {
        outln!(w, "field      {f}");
        outln!(w, "p          {}", f.characteristic());
        outln!(w, "e          {}", f.degree());
        outln!(w, "q          {}", f.order());
        outln!(w, "modulus    {}", f.modulus_string());
        outln!(w, "s          {s}");
        outln!(w, "q mod 4    {}", f.residue_mod4());
        outln!(w, "-1         {}", class_label(f.minus_one_class()));
    }
    Ok(true)
}

fn wittk_table(w: &mut String, c: &Common, f: &FiniteField) -> Result<bool> {
    let ctx = WittContext::of_field(f);
    let all = WittK::all(ctx);
    let report = verify_bullets(f);
    let reps = all
        .iter()
        .map(|a| a.representative(f).map(|d| d.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    if c.json {
        let table = |op: fn(WittK, WittK) -> WittK| -> Vec<Vec<&str>> {
            all.iter()
                .map(|&a| all.iter().map(|&b| op(a, b).label()).collect())
                .collect()
        };
        let bullets: Vec<Value> = report
            .checks
            .iter()
            .map(|b| json!({"statement": b.statement, "applies": b.applies, "holds": b.holds}))
            .collect();
        emit(
            w,
            &json!({
                "q": f.order(),
                "q_mod_4": f.residue_mod4(),
                "elements": all.iter().map(|a| a.label()).collect::<Vec<_>>(),
                "representatives": reps,
                "add": table(|a, b| a + b),
                "mul": table(|a, b| a * b),
                "bullets": bullets,
            }),
        )?;
    } else {
        outln!(w, "W({f}), {ctx}");
        outln!(w);
        for (a, rep) in all.iter().zip(&reps) {
            outln!(w, "{:<8} represented by {rep}", a.label());
        }
        outln!(w);
        out!(w, "{}", render::op_table("+", &all, |a| a.to_string(), |a, b| a + b));
        outln!(w);
        out!(w, "{}", render::op_table("*", &all, |a| a.to_string(), |a, b| a * b));
        outln!(w);
        let width = report
            .checks
            .iter()
            .map(|b| b.statement.chars().count())
            .max()
            .unwrap_or(0);
        for b in &report.checks {
            let status = match (b.applies, b.holds) {
                (true, true) => "holds",
                (true, false) => "FAILS",
                (false, true) => "holds (not asserted for this residue)",
                (false, false) => "does not hold (not asserted for this residue)",
            };
            outln!(w, "{:<width$}  {status}", b.statement);
        }
    }
    Ok(report.all_passed())
}

fn invariants_json(d: &DiagonalForm) -> Value {
    let inv = d.invariants();
    json!({
        "rank": d.rank(),
        "rank_parity": inv.rank_parity.label(),
        "determinant_class": d.determinant_class().label(),
        "signed_discriminant": inv.signed_disc.label(),
        "witt_class": WittK::from_form(d).label(),
    })
}

fn print_invariants(w: &mut String, d: &DiagonalForm) {
    let inv = d.invariants();
    outln!(w, "rank                 {} ({})", d.rank(), inv.rank_parity.label());
    outln!(w, "determinant class    {}", d.determinant_class().label());
    outln!(w, "signed discriminant  {}", inv.signed_disc.label());
    outln!(w, "Witt class           {}", WittK::from_form(d));
}

fn form_diag(w: &mut String, c: &Common, f: &FiniteField, gram: &str) -> Result<bool> {
    let (n, entries) = parse::parse_gram(f, gram)?;
    let d = GramForm::new(f, n, entries)?.diagonalize()?;
    let rows = d.basis.rows();
    if c.json {
        let basis: Vec<Vec<Value>> = rows.iter().map(|r| r.iter().map(element_json).collect()).collect();
        emit(
            w,
            &json!({
                "diagonal": d.form.entries().iter().map(element_json).collect::<Vec<_>>(),
                "basis": basis,
                "invariants": invariants_json(&d.form),
            }),
        )?;
    } else {
        outln!(w, "diagonal             {}", d.form);
        outln!(w, "basis (T^t G T = D, columns are the new basis):");
        for r in &rows {
            let cells: Vec<String> = r.iter().map(|a| a.to_string()).collect();
            outln!(w, "  [{}]", cells.join(", "));
        }
        print_invariants(w, &d.form);
    }
    Ok(true)
}

fn form_witt(w: &mut String, c: &Common, f: &FiniteField, diag: &str) -> Result<bool> {
    let d = DiagonalForm::new(f, parse::parse_diag(f, diag)?)?;
    let vector = d.find_isotropic_vector(c.max_search)?;
    let dec = d.witt_decompose();
    if c.json {
        emit(
            w,
            &json!({
                "form": d.entries().iter().map(element_json).collect::<Vec<_>>(),
                "isotropic_vector": vector.as_ref().map(|v| v.iter().map(element_json).collect::<Vec<_>>()),
                "hyperbolic_planes": dec.hyperbolic_planes,
                "anisotropic": dec.anisotropic.entries().iter().map(element_json).collect::<Vec<_>>(),
                "invariants": invariants_json(&d),
            }),
        )?;
    } else {
        outln!(w, "form                 {d}");
        match &vector {
            Some(v) => {
                let cells: Vec<String> = v.iter().map(|a| a.to_string()).collect();
                outln!(w, "isotropic vector     ({})", cells.join(", "));
            }
            None => outln!(w, "isotropic vector     none (anisotropic)"),
        }
        outln!(
            w,
            "decomposition        {} x H + {}",
            dec.hyperbolic_planes,
            dec.anisotropic
        );
        print_invariants(w, &d);
    }
    Ok(true)
}

/// The two 2x2 type tables with `σ` resolved for `ctx`.
fn symbolic_tables(ctx: WittContext) -> String {
    let sigma = |x: &str| match ctx.sigma() {
        SquareClass::One => x.to_string(),
        SquareClass::NonSquare => format!("s{x}"),
    };
    let add = vec![
        vec!["+".into(), "<M_v>".into(), "<1,-N_w>".into()],
        vec!["<L_u>".into(), format!("<1,-(LM)_{}>", sigma("uv")), "<(LN)_uw>".into()],
        vec!["<1,-K_t>".into(), "<(KM)_tv>".into(), "<1,-(KN)_tw>".into()],
    ];
    let mul = vec![
        vec!["*".into(), "<M_v>".into(), "<1,-N_w>".into()],
        vec!["<L_u>".into(), "<(LM)_uv>".into(), "<1,-N_w>".into()],
        vec!["<1,-K_t>".into(), "<1,-K_t>".into(), "0".into()],
    ];
    format!(
        "{ctx}, -1 has class {}\n\n{}\n{}",
        ctx.sigma().label(),
        render::grid(&add),
        render::grid(&mul)
    )
}

fn curve_table(w: &mut String, c: &Common, ctx: WittContext, g: Pic2Group) -> Result<bool> {
    if g.rank() > MAX_TABLE_RANK {
        bail!("rank {} exceeds the table bound {MAX_TABLE_RANK}", g.rank());
    }
    let classes = enumerate_classes(ctx, g)?;
    let index = |x: WittClass| {
        classes
            .iter()
            .position(|&y| y == x)
            .expect("enumeration lists every class")
    };
    if c.json {
        let table = |op: fn(WittClass, WittClass) -> WittClass| -> Vec<Vec<usize>> {
            classes
                .iter()
                .map(|&a| classes.iter().map(|&b| index(op(a, b))).collect())
                .collect()
        };
        emit(
            w,
            &json!({
                "q_mod_4": ctx.residue(),
                "rank": g.rank(),
                "classes": classes.iter().map(|x| x.to_record()).collect::<Vec<_>>(),
                "add": table(|a, b| a + b),
                "mul": table(|a, b| a * b),
            }),
        )?;
    } else {
        outln!(w, "{}", symbolic_tables(ctx));
        outln!(w, "{} classes, Picard 2-rank {}", classes.len(), g.rank());
        outln!(w);
        out!(
            w,
            "{}",
            render::op_table("+", &classes, |x| x.to_string(), |a, b| a + b)
        );
        outln!(w);
        out!(
            w,
            "{}",
            render::op_table("*", &classes, |x| x.to_string(), |a, b| a * b)
        );
    }
    Ok(true)
}

fn disc_json(x: WittClass) -> Value {
    let (u, l) = x.signed_discriminant_class();
    json!({"u": u.label(), "L": l.to_bits()})
}

fn describe_class(w: &mut String, x: WittClass) {
    let (u, l) = x.signed_discriminant_class();
    outln!(w, "class                {x}");
    outln!(w, "parity               {}", x.parity().label());
    outln!(w, "signed discriminant  ({},{})", u.label(), l.to_bits());
    outln!(
        w,
        "record               {}",
        serde_json::to_string(&x.to_record()).expect("records serialize")
    );
}

fn curve_eval(w: &mut String, c: &Common, x: WittClass) -> Result<bool> {
    if c.json {
        emit(
            w,
            &json!({
                "class": x.to_record(),
                "display": x.to_string(),
                "signed_discriminant": disc_json(x),
            }),
        )?;
    } else {
        describe_class(w, x);
    }
    Ok(true)
}

fn curve_normal_form(w: &mut String, c: &Common, f: &GroupRingElement) -> Result<bool> {
    let x = normal_form(f);
    let word: Vec<String> = letters(f)
        .into_iter()
        .map(|(u, l)| format!("({},{})", u.label(), l.to_bits()))
        .collect();
    if c.json {
        emit(
            w,
            &json!({
                "element": f.to_records(),
                "letters": word,
                "normal_form": x.to_record(),
                "display": x.to_string(),
                "signed_discriminant": disc_json(x),
            }),
        )?;
    } else {
        outln!(w, "element              {f}");
        outln!(
            w,
            "letters              {}",
            if word.is_empty() {
                "(none)".into()
            } else {
                word.join(";")
            }
        );
        describe_class(w, x);
    }
    Ok(true)
}

fn verify(w: &mut String, c: &Common, only: &[u8]) -> Result<bool> {
    let outcomes = if only.is_empty() {
        suite::run_all()
    } else {
        only.iter()
            .map(|&id| suite::run(id).with_context(|| format!("no check with id {id}")))
            .collect::<Result<Vec<_>>>()?
    };
    let passed = outcomes.iter().all(|o| o.passed());
    if c.json {
        let checks: Vec<Value> = outcomes
            .iter()
            .map(|o| {
                json!({
                    "id": o.id,
                    "title": o.title,
                    "passed": o.passed(),
                    "detail": match &o.result { Ok(s) | Err(s) => s },
                })
            })
            .collect();
        emit(w, &json!({"passed": passed, "checks": checks}))?;
    } else {
        for o in &outcomes {
            match &o.result {
                Ok(s) => outln!(w, "[PASS] {:>2} {}: {s}", o.id, o.title),
                Err(s) => outln!(w, "[FAIL] {:>2} {}: {s}", o.id, o.title),
            }
        }
    }
    for o in outcomes.iter().filter(|o| !o.passed()) {
        if let Err(s) = &o.result {
            eprintln!("counterexample for check {}: {s}", o.id);
        }
    }
    Ok(passed)
}
