use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;
use tbm::io::{load_mass, load_scenario, mass_to_json, parse_set_expression};
use tbm::random::{random_mass, random_subset, seeded};
use tbm::scenario::soldiers;
use tbm::{
    combine_dempster, compare_rules, d_condition, g_condition, verify_against_closed_forms, ErrorKind,
    MassFunction, Rational, Scalar, Scenario, SubsetMask, VerifyReport, WorldId, WorldMode, MAX_FRAME_SIZE,
};

use crate::render::{
    belief_row, belief_table, display_sets, focal_entries, focal_table, interval, number, Interval, Number,
    OutputRow, Table,
};

pub type Mass = MassFunction<Rational>;

/// Exit codes shared by every command.
pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_CONFLICT: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn context(mut self, what: &str) -> Self {
        self.message = format!("{what}: {}", self.message);
        self
    }
}

impl From<tbm::Error> for Failure {
    fn from(e: tbm::Error) -> Self {
        let code = match e.kind() {
            ErrorKind::Input => EXIT_INPUT,
            ErrorKind::Conflict => EXIT_CONFLICT,
            ErrorKind::Budget => EXIT_BUDGET,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<(String, u8), Failure>;

fn ctx<T>(r: tbm::Result<T>, what: &str) -> Result<T, Failure> {
    r.map_err(|e| Failure::from(e).context(what))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Demo {
    /// Three soldiers, three posts, selection probability 1/3 each
    Soldiers,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Rule {
    /// Mass transfer, then renormalize
    Dempster,
    /// Mass transfer, conflict kept on the empty set
    Open,
    /// Envelope of the conditioned credal set
    Robust,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CombineRule {
    Dempster,
    Open,
}

/// Per-invocation settings shared by all commands.
pub struct Context {
    pub json: bool,
    pub demo: Option<Demo>,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn json_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

impl Context {
    fn mass(&self, file: Option<&Path>) -> Result<Mass, Failure> {
        match (self.demo, file) {
            (Some(_), Some(_)) => Err(Failure::input("give either a file or --demo, not both")),
            (Some(Demo::Soldiers), None) => Ok(soldiers::<Rational>().induced_mass(true)?),
            (None, Some(path)) => self.mass_file(path),
            (None, None) => Err(Failure::input("missing input file (or use --demo soldiers)")),
        }
    }

    fn mass_file(&self, path: &Path) -> Result<Mass, Failure> {
        let text = read(path)?;
        Ok(ctx(load_mass(&text), &path.display().to_string())?.0)
    }

    fn scenario(&self, file: Option<&Path>) -> Result<Scenario<Rational>, Failure> {
        match (self.demo, file) {
            (Some(_), Some(_)) => Err(Failure::input("give either a file or --demo, not both")),
            (Some(Demo::Soldiers), None) => Ok(soldiers()),
            (None, Some(path)) => {
                let text = read(path)?;
                ctx(load_scenario(&text), &path.display().to_string())
            }
            (None, None) => Err(Failure::input("missing scenario file (or use --demo soldiers)")),
        }
    }
}

fn parse_sets(m: &Mass, exprs: &[String]) -> Result<Vec<SubsetMask>, Failure> {
    exprs
        .iter()
        .map(|e| ctx(parse_set_expression(m.frame(), e), e))
        .collect()
}

/// Singletons followed by the extra queries, without repeats.
fn singletons_and(m: &Mass, extra: &[SubsetMask]) -> Vec<SubsetMask> {
    let mut sets: Vec<SubsetMask> = m.frame().singletons().collect();
    for &s in extra {
        if !sets.contains(&s) {
            sets.push(s);
        }
    }
    sets
}

fn mode_name(m: &Mass) -> &'static str {
    match m.mode() {
        WorldMode::Closed => "closed",
        WorldMode::Open => "open",
    }
}

fn describe(m: &Mass) -> String {
    let mut s = format!("frame {} ({} world)", m.frame().render(m.frame().full()), mode_name(m));
    if m.mode() == WorldMode::Open {
        let _ = write!(s, ", m(∅) = {}", number(&m.empty_mass()));
    }
    s
}

pub fn query(cx: &Context, inputs: &[String]) -> Outcome {
    let (file, exprs) = match (cx.demo, inputs.split_first()) {
        (Some(_), _) => (None, inputs),
        (None, Some((file, rest))) => (Some(PathBuf::from(file)), rest),
        (None, None) => return Err(Failure::input("missing mass file (or use --demo soldiers)")),
    };
    let m = cx.mass(file.as_deref())?;
    let sets = if exprs.is_empty() {
        display_sets(m.frame())
    } else {
        parse_sets(&m, exprs)?
    };
    let rows = sets
        .iter()
        .map(|&s| belief_row(&m, s))
        .collect::<tbm::Result<Vec<_>>>()?;
    if cx.json {
        return Ok((json_text(&json!({ "mode": mode_name(&m), "rows": rows })), EXIT_OK));
    }
    Ok((format!("{}\n{}", describe(&m), belief_table(&rows).render()), EXIT_OK))
}

pub struct ConditionArgs<'a> {
    pub file: Option<&'a Path>,
    pub on: &'a str,
    pub rule: Rule,
    pub query: &'a [String],
    pub output: Option<&'a Path>,
}

pub fn condition(cx: &Context, args: ConditionArgs<'_>) -> Outcome {
    let m = cx.mass(args.file)?;
    let on = ctx(parse_set_expression(m.frame(), args.on), "--on")?;
    let extra = parse_sets(&m, args.query)?;
    let sets = singletons_and(&m, &extra);
    let given = m.frame().render(on);

    if args.rule == Rule::Robust {
        if args.output.is_some() {
            return Err(Failure::input(
                "--output: robust conditioning gives intervals, not a mass function",
            ));
        }
        let mut rows = Vec::new();
        let mut table = Table::new(["set", "robust interval"]);
        for &a in &sets {
            let g = ctx(g_condition(&m, a, on), "--on")?;
            table.push([m.frame().render(a), interval(&g)]);
            rows.push(OutputRow {
                set: m.frame().render(a),
                given: Some(given.clone()),
                robust: Some(Interval::of(&g)),
                ..OutputRow::default()
            });
        }
        if cx.json {
            let doc = json!({ "rule": "robust", "given": given, "rows": rows });
            return Ok((json_text(&doc), EXIT_OK));
        }
        return Ok((format!("robust conditioning on {given}\n{}", table.render()), EXIT_OK));
    }

    let normalize = args.rule == Rule::Dempster;
    let revised = ctx(d_condition(&m, on, normalize), "--on")?;
    if let Some(path) = args.output {
        write(path, &(mass_to_json(&revised.mass) + "\n"))?;
    }
    let rows = sets
        .iter()
        .map(|&s| belief_row(&revised.mass, s))
        .collect::<tbm::Result<Vec<_>>>()?;
    let focal = focal_entries(&revised.mass);
    let rule = if normalize { "dempster" } else { "open" };
    if cx.json {
        let doc = json!({
            "rule": rule,
            "given": given,
            "conflict": Number::of(&revised.conflict),
            "focal": focal,
            "rows": rows,
        });
        return Ok((json_text(&doc), EXIT_OK));
    }
    let out = format!(
        "{rule} conditioning on {given}, conflict {}\n{}\n{}",
        number(&revised.conflict),
        focal_table(&focal).render(),
        belief_table(&rows).render()
    );
    Ok((out, EXIT_OK))
}

fn compare_row(m: &Mass, a: SubsetMask, on: SubsetMask) -> Result<(OutputRow, [String; 2]), Failure> {
    let (d, g) = ctx(compare_rules(m, a, on), "--on")?;
    let row = OutputRow {
        set: m.frame().render(a),
        given: Some(m.frame().render(on)),
        dempster: Some(Interval::of(&d)),
        robust: Some(Interval::of(&g)),
        contained: Some(g.contains(&d)),
        ..OutputRow::default()
    };
    Ok((row, [interval(&d), interval(&g)]))
}

fn yes_no(b: Option<bool>) -> String {
    if b == Some(true) { "yes" } else { "no" }.to_string()
}

pub struct CompareArgs<'a> {
    pub file: Option<&'a Path>,
    pub on: Option<&'a str>,
    pub query: &'a [String],
    pub random: Option<usize>,
    pub seed: u64,
    pub frame_size: usize,
}

pub fn compare(cx: &Context, args: CompareArgs<'_>) -> Outcome {
    let mut rows = Vec::new();
    let mut table;
    if let Some(count) = args.random {
        if args.file.is_some() || cx.demo.is_some() || args.on.is_some() || !args.query.is_empty() {
            return Err(Failure::input("--random: cannot be combined with a file, --demo, --on or --query"));
        }
        check_frame_size(args.frame_size)?;
        let mut rng = seeded(args.seed);
        table = Table::new(["#", "query", "given", "dempster", "robust", "contained"]);
        for i in 0..count {
            let m: Mass = random_mass(&mut rng, args.frame_size);
            let on = loop {
                let b = random_subset(&mut rng, m.frame());
                if Scalar::is_positive(&m.pl(b)?) {
                    break b;
                }
            };
            let a = random_subset(&mut rng, m.frame());
            let (row, [d, g]) = compare_row(&m, a, on)?;
            table.push([
                (i + 1).to_string(),
                row.set.clone(),
                row.given.clone().unwrap_or_default(),
                d,
                g,
                yes_no(row.contained),
            ]);
            rows.push(row);
        }
    } else {
        let m = cx.mass(args.file)?;
        let on = args.on.ok_or_else(|| Failure::input("--on is required unless --random is given"))?;
        let on = ctx(parse_set_expression(m.frame(), on), "--on")?;
        let sets = if args.query.is_empty() {
            display_sets(m.frame())
        } else {
            parse_sets(&m, args.query)?
        };
        table = Table::new(["query", "dempster", "robust", "contained"]);
        for a in sets {
            let (row, [d, g]) = compare_row(&m, a, on)?;
            table.push([row.set.clone(), d, g, yes_no(row.contained)]);
            rows.push(row);
        }
    }
    let outside = rows.iter().filter(|r| r.contained != Some(true)).count();
    let code = if outside == 0 { EXIT_OK } else { EXIT_VIOLATION };
    if cx.json {
        return Ok((json_text(&json!({ "rows": rows, "not_contained": outside })), code));
    }
    let summary = if outside == 0 {
        format!("{} rows, dempster interval inside robust interval in every row", rows.len())
    } else {
        format!("{outside} of {} rows not contained", rows.len())
    };
    Ok((format!("{}{summary}\n", table.render()), code))
}

fn check_frame_size(n: usize) -> Result<(), Failure> {
    if (1..=MAX_FRAME_SIZE).contains(&n) {
        Ok(())
    } else {
        Err(Failure::input(format!(
            "--frame-size: {n} is outside 1..={MAX_FRAME_SIZE}"
        )))
    }
}

/// One revision step on a scenario, in command-line order.
#[derive(Debug, Clone)]
pub enum Operator {
    Case1(String),
    Case2(String),
    Observe(String),
    Case3(String),
}

impl Operator {
    fn flag(&self) -> (&'static str, &str) {
        match self {
            Operator::Case1(v) => ("--case1", v),
            Operator::Case2(v) => ("--case2", v),
            Operator::Observe(v) => ("--observe", v),
            Operator::Case3(v) => ("--case3", v),
        }
    }

    fn apply(&self, sc: &Scenario<Rational>) -> Result<Scenario<Rational>, Failure> {
        let items = |v: &str| -> Vec<String> {
            v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
        };
        match self {
            Operator::Case1(v) => {
                let worlds = items(v)
                    .iter()
                    .map(|w| w.parse::<WorldId>())
                    .collect::<tbm::Result<Vec<_>>>()?;
                Ok(sc.apply_case1(&worlds)?)
            }
            Operator::Case2(v) => {
                let pairs = items(v)
                    .iter()
                    .map(|p| {
                        let (w, s) = p
                            .split_once(':')
                            .ok_or_else(|| Failure::input(format!("expected WORLD:SOURCE, got {p:?}")))?;
                        Ok((w.parse::<WorldId>()?, s.trim().to_string()))
                    })
                    .collect::<Result<Vec<_>, Failure>>()?;
                Ok(sc.apply_case2(&pairs)?)
            }
            Operator::Observe(v) => Ok(sc.observe_outcomes(parse_set_expression(sc.outcomes(), v)?)?),
            Operator::Case3(v) => Ok(sc.apply_case3(items(v))?),
        }
    }
}

#[derive(Serialize)]
struct Step {
    operator: String,
    surviving_worlds: Vec<String>,
    alive_pairs: usize,
    conflict: Number,
    #[serde(skip)]
    conflict_text: String,
    rows: Vec<OutputRow>,
}

fn scenario_step(sc: &Scenario<Rational>, operator: String) -> Result<Step, Failure> {
    let open = ctx(sc.induced_mass(false), &operator)?;
    let m = ctx(sc.induced_mass(true), &operator)?;
    let rows = display_sets(m.frame())
        .into_iter()
        .map(|s| belief_row(&m, s))
        .collect::<tbm::Result<Vec<_>>>()?;
    Ok(Step {
        operator,
        surviving_worlds: sc.surviving_worlds().iter().map(|w| w.to_string()).collect(),
        alive_pairs: sc.alive_pairs().len(),
        conflict: Number::of(&open.empty_mass()),
        conflict_text: number(&open.empty_mass()),
        rows,
    })
}

pub fn scenario(cx: &Context, file: Option<&Path>, ops: &[Operator]) -> Outcome {
    let mut sc = cx.scenario(file)?;
    let mut steps = vec![scenario_step(&sc, "initial".to_string())?];
    for op in ops {
        let (flag, value) = op.flag();
        let label = format!("{flag} {value}");
        sc = op.apply(&sc).map_err(|f| f.context(&label))?;
        steps.push(scenario_step(&sc, label)?);
    }
    if cx.json {
        return Ok((json_text(&json!({ "steps": steps })), EXIT_OK));
    }
    let mut out = String::new();
    for (i, step) in steps.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "step {i}: {}", step.operator);
        let _ = writeln!(
            out,
            "surviving worlds: {} ({} live pairs), unnormalized m(∅) = {}",
            step.surviving_worlds.join(" "),
            step.alive_pairs,
            step.conflict_text
        );
        out.push_str(&belief_table(&step.rows).render());
    }
    Ok((out, EXIT_OK))
}

pub struct VerifyArgs<'a> {
    pub file: Option<&'a Path>,
    pub random: Option<usize>,
    pub seed: u64,
    pub frame_size: usize,
}

pub fn verify(cx: &Context, args: VerifyArgs<'_>) -> Outcome {
    let (report, masses) = match args.random {
        Some(count) => {
            if args.file.is_some() || cx.demo.is_some() {
                return Err(Failure::input("--random: cannot be combined with a file or --demo"));
            }
            check_frame_size(args.frame_size)?;
            let mut rng = seeded(args.seed);
            let mut total: Option<VerifyReport> = None;
            for _ in 0..count {
                let m: Mass = random_mass(&mut rng, args.frame_size);
                let r = verify_against_closed_forms(&m)?;
                match total.as_mut() {
                    Some(t) => t.merge(r),
                    None => total = Some(r),
                }
            }
            let report = total.unwrap_or(VerifyReport {
                frame_size: args.frame_size,
                allocations: 0,
                vertices: 0,
                sets_checked: 0,
                pairs_checked: 0,
                violations: Vec::new(),
            });
            (report, count)
        }
        None => (verify_against_closed_forms(&cx.mass(args.file)?)?, 1),
    };
    let code = if report.is_clean() { EXIT_OK } else { EXIT_VIOLATION };
    if cx.json {
        return Ok((json_text(&json!({ "masses": masses, "report": report })), code));
    }
    let mut out = format!(
        "masses {masses}, frame size {}, allocations {}, vertices {}\nsets checked {}, pairs checked {}\nviolations {}\n",
        report.frame_size,
        report.allocations,
        report.vertices,
        report.sets_checked,
        report.pairs_checked,
        report.violations.len()
    );
    for v in &report.violations {
        let given = v.given.as_deref().map(|g| format!(" | {g}")).unwrap_or_default();
        let _ = writeln!(out, "  {}: {}{given} expected {} found {}", v.check, v.query, v.expected, v.found);
    }
    Ok((out, code))
}

pub fn combine(cx: &Context, files: &[PathBuf], rule: CombineRule, output: Option<&Path>) -> Outcome {
    let (m1, m2) = match (cx.demo, files) {
        (Some(_), [f]) => (cx.mass(None)?, cx.mass_file(f)?),
        (None, [f1, f2]) => (cx.mass_file(f1)?, cx.mass_file(f2)?),
        (Some(_), _) => return Err(Failure::input("with --demo, give exactly one more mass file")),
        (None, _) => return Err(Failure::input("expected two mass files")),
    };
    let normalize = rule == CombineRule::Dempster;
    let r = combine_dempster(&m1, &m2, normalize)?;
    if let Some(path) = output {
        write(path, &(mass_to_json(&r.mass) + "\n"))?;
    }
    let focal = focal_entries(&r.mass);
    let rows = singletons_and(&r.mass, &[])
        .into_iter()
        .map(|s| belief_row(&r.mass, s))
        .collect::<tbm::Result<Vec<_>>>()?;
    let rule = if normalize { "dempster" } else { "open" };
    if cx.json {
        let doc = json!({
            "rule": rule,
            "conflict": Number::of(&r.conflict),
            "focal": focal,
            "rows": rows,
        });
        return Ok((json_text(&doc), EXIT_OK));
    }
    let out = format!(
        "{rule} combination, conflict {}\n{}\n{}",
        number(&r.conflict),
        focal_table(&focal).render(),
        belief_table(&rows).render()
    );
    Ok((out, EXIT_OK))
}
