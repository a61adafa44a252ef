//! Seeded generator of random, well-typed, terminating MiniOO programs with
//! passing test suites.
//!
//! Every method signature and every declared constructor gets a distinct
//! level, and a body may only call or instantiate callables of a higher
//! level (super calls go strictly up the hierarchy), so every execution
//! terminates. Tests are generated in two passes: first as `int` probes whose
//! value is computed by the interpreter, then as assertions on that value.

use std::fmt::Write;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::frontend::{parse_source, Program};
use crate::model::SubjectId;
use crate::runtime::{discover_tests, run_returning, RunConfig, Value};
use crate::selector::TestConfig;

#[derive(Debug, Clone)]
pub struct CorpusConfig {
    pub max_classes: usize,
    pub max_depth: usize,
    pub max_methods: usize,
    pub max_tests_per_class: usize,
    pub run: RunConfig,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            max_classes: 15,
            max_depth: 4,
            max_methods: 40,
            max_tests_per_class: 4,
            run: RunConfig {
                step_budget: 200_000,
                ..RunConfig::default()
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct GeneratedProgram {
    pub seed: u64,
    pub source: String,
    pub program: Program,
    pub tests: Vec<SubjectId>,
}

const NAMES: [&str; 8] = ["get", "calc", "size", "value", "run", "step", "eval", "area"];

struct Sig {
    name: String,
    arity: usize,
    level: u32,
}

struct Decl {
    sig: usize,
    is_abstract: bool,
}

struct Cls {
    name: String,
    sup: Option<usize>,
    depth: usize,
    int_fields: Vec<String>,
    /// Object field, its declared class, and whether the constructor sets it.
    obj_field: Option<(String, usize)>,
    decls: Vec<Decl>,
    ctor: Option<(usize, u32)>,
}

struct Gen {
    rng: ChaCha8Rng,
    sigs: Vec<Sig>,
    classes: Vec<Cls>,
    fresh: usize,
}

struct Ctx {
    class: usize,
    level: u32,
    param: bool,
    calls_left: usize,
}

impl Gen {
    fn ancestry(&self, c: usize) -> Vec<usize> {
        let mut out = vec![c];
        let mut cur = self.classes[c].sup;
        while let Some(s) = cur {
            out.push(s);
            cur = self.classes[s].sup;
        }
        out
    }

    fn is_subclass(&self, c: usize, ancestor: usize) -> bool {
        self.ancestry(c).contains(&ancestor)
    }

    fn visible(&self, c: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .ancestry(c)
            .iter()
            .flat_map(|a| self.classes[*a].decls.iter().map(|d| d.sig))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Class holding the first concrete body for `sig` at or above `c`.
    fn concrete_owner(&self, c: usize, sig: usize) -> Option<usize> {
        self.ancestry(c)
            .into_iter()
            .find(|a| self.classes[*a].decls.iter().any(|d| d.sig == sig && !d.is_abstract))
    }

    fn instantiable(&self, c: usize) -> bool {
        self.visible(c).iter().all(|s| self.concrete_owner(c, *s).is_some())
    }

    fn int_lit(&mut self) -> String {
        self.rng.random_range(0..10).to_string()
    }

    fn new_expr(&mut self, c: usize) -> String {
        let name = self.classes[c].name.clone();
        match self.classes[c].ctor {
            Some((1, _)) => format!("new {name}({})", self.int_lit()),
            _ => format!("new {name}()"),
        }
    }

    fn can_instantiate_at(&self, c: usize, level: u32) -> bool {
        self.instantiable(c) && self.classes[c].ctor.is_none_or(|(_, l)| l > level)
    }

    /// Pairs (declared class, concrete class) usable for `T v = new C(..)`.
    fn object_choices(&self, level: u32) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for c in 0..self.classes.len() {
            if !self.can_instantiate_at(c, level) {
                continue;
            }
            for a in self.ancestry(c) {
                out.push((a, c));
            }
        }
        out
    }

    fn args(&mut self, ctx: &Ctx, arity: usize) -> String {
        (0..arity).map(|_| self.leaf(ctx)).collect::<Vec<_>>().join(", ")
    }

    fn leaf(&mut self, ctx: &Ctx) -> String {
        let fields: Vec<String> = self
            .ancestry(ctx.class)
            .iter()
            .flat_map(|a| self.classes[*a].int_fields.clone())
            .collect();
        match self.rng.random_range(0..4) {
            0 if ctx.param => "p".to_string(),
            1 if !fields.is_empty() => fields.choose(&mut self.rng).unwrap().clone(),
            _ => self.int_lit(),
        }
    }

    fn callable_sigs(&self, class: usize, level: u32) -> Vec<usize> {
        self.visible(class)
            .into_iter()
            .filter(|s| self.sigs[*s].level > level)
            .collect()
    }

    fn int_expr(&mut self, ctx: &mut Ctx, depth: usize) -> String {
        let choice = self.rng.random_range(0..6);
        if depth > 0 && choice < 2 {
            let op = *["+", "-", "*"].choose(&mut self.rng).unwrap();
            let l = self.int_expr(ctx, depth - 1);
            let r = self.int_expr(ctx, depth - 1);
            return format!("({l} {op} {r})");
        }
        if (choice == 2 || choice == 4) && ctx.calls_left > 0 {
            let sigs = self.callable_sigs(ctx.class, ctx.level);
            if let Some(&s) = sigs.choose(&mut self.rng) {
                ctx.calls_left -= 1;
                let args = self.args(ctx, self.sigs[s].arity);
                return format!("{}({args})", self.sigs[s].name);
            }
        }
        if choice == 3 && self.rng.random_bool(0.3) {
            let l = self.leaf(ctx);
            let k = self.rng.random_range(1..5);
            return format!("({l} / {k})");
        }
        self.leaf(ctx)
    }

    fn cond(&mut self, ctx: &mut Ctx) -> String {
        let l = self.leaf(ctx);
        let op = *["<", "<=", ">", ">=", "==", "!="].choose(&mut self.rng).unwrap();
        let r = self.int_lit();
        match self.rng.random_range(0..5) {
            0 => format!("{l} {op} {r} && true"),
            1 => format!("{l} {op} {r} || false"),
            _ => format!("{l} {op} {r}"),
        }
    }

    fn statements(&mut self, ctx: &mut Ctx, out: &mut String, indent: &str) {
        let fields: Vec<String> = self.classes[ctx.class].int_fields.clone();
        for _ in 0..self.rng.random_range(0..4) {
            match self.rng.random_range(0..6) {
                0 => {
                    let e = self.int_expr(ctx, 2);
                    writeln!(out, "{indent}acc = acc + {e};").unwrap();
                }
                1 => {
                    let c = self.cond(ctx);
                    let a = self.int_expr(ctx, 1);
                    let b = self.int_lit();
                    writeln!(out, "{indent}if ({c}) {{ acc = acc + {a}; }} else {{ acc = acc - {b}; }}").unwrap();
                }
                2 => {
                    self.fresh += 1;
                    let i = format!("i{}", self.fresh);
                    let k = self.rng.random_range(1..4);
                    let e = self.leaf(ctx);
                    writeln!(out, "{indent}int {i} = 0;").unwrap();
                    writeln!(out, "{indent}while ({i} < {k}) {{ acc = acc + {e}; {i} = {i} + 1; }}").unwrap();
                }
                3 if !fields.is_empty() => {
                    let f = fields.choose(&mut self.rng).unwrap().clone();
                    let e = self.int_expr(ctx, 1);
                    writeln!(out, "{indent}{f} = {e};").unwrap();
                }
                4 if ctx.calls_left > 0 => {
                    let choices = self.object_choices(ctx.level);
                    let Some(&(decl, conc)) = choices.choose(&mut self.rng) else { continue };
                    let sigs = self.callable_sigs(decl, ctx.level);
                    let Some(&s) = sigs.choose(&mut self.rng) else { continue };
                    ctx.calls_left -= 1;
                    self.fresh += 1;
                    let v = format!("v{}", self.fresh);
                    let new = self.new_expr(conc);
                    let args = self.args(ctx, self.sigs[s].arity);
                    writeln!(out, "{indent}{} {v} = {new};", self.classes[decl].name).unwrap();
                    writeln!(out, "{indent}acc = acc + {v}.{}({args});", self.sigs[s].name).unwrap();
                }
                5 if ctx.calls_left > 0 => {
                    let Some((field, decl)) = self.classes[ctx.class].obj_field.clone() else { continue };
                    if self.classes[ctx.class].ctor.is_none() {
                        continue;
                    }
                    let sigs = self.callable_sigs(decl, ctx.level);
                    let Some(&s) = sigs.choose(&mut self.rng) else { continue };
                    ctx.calls_left -= 1;
                    let args = self.args(ctx, self.sigs[s].arity);
                    writeln!(out, "{indent}acc = acc + {field}.{}({args});", self.sigs[s].name).unwrap();
                }
                _ => {}
            }
        }
    }

    fn method_body(&mut self, class: usize, sig: usize) -> String {
        let level = self.sigs[sig].level;
        let mut ctx = Ctx {
            class,
            level,
            param: self.sigs[sig].arity == 1,
            calls_left: self.rng.random_range(1..4),
        };
        let mut out = String::new();
        let init = self.int_expr(&mut ctx, 1);
        writeln!(out, "        int acc = {init};").unwrap();
        if let Some(sup) = self.classes[class].sup {
            if self.concrete_owner(sup, sig).is_some() && self.rng.random_bool(0.3) {
                let args = self.args(&ctx, self.sigs[sig].arity);
                writeln!(out, "        acc = acc + super.{}({args});", self.sigs[sig].name).unwrap();
            }
        }
        self.statements(&mut ctx, &mut out, "        ");
        writeln!(out, "        return acc;").unwrap();
        out
    }

    fn ctor_body(&mut self, class: usize) -> String {
        let (arity, level) = self.classes[class].ctor.unwrap();
        let mut out = String::new();
        let fields: Vec<String> = self.classes[class].int_fields.clone();
        let ctx = Ctx {
            class,
            level,
            param: arity == 1,
            calls_left: 0,
        };
        for f in &fields {
            let v = self.leaf(&ctx);
            writeln!(out, "        {f} = {v};").unwrap();
        }
        if let Some((field, decl)) = self.classes[class].obj_field.clone() {
            let choices: Vec<usize> = (0..self.classes.len())
                .filter(|c| self.is_subclass(*c, decl) && self.can_instantiate_at(*c, level))
                .collect();
            if let Some(&c) = choices.choose(&mut self.rng) {
                let new = self.new_expr(c);
                writeln!(out, "        {field} = {new};").unwrap();
            } else {
                self.classes[class].obj_field = None;
            }
        }
        let sigs = self.callable_sigs(class, level);
        if !fields.is_empty() && self.rng.random_bool(0.5) {
            if let Some(&s) = sigs.choose(&mut self.rng) {
                let args = self.args(&ctx, self.sigs[s].arity);
                writeln!(out, "        {} = {}({args});", fields[0], self.sigs[s].name).unwrap();
            }
        }
        out
    }

    fn structure(&mut self, cfg: &CorpusConfig, n_classes: usize, method_budget: usize) {
        for i in 0..n_classes {
            let parents: Vec<usize> = (0..i).filter(|j| self.classes[*j].depth < cfg.max_depth).collect();
            let sup = if !parents.is_empty() && self.rng.random_bool(0.7) {
                parents.choose(&mut self.rng).copied()
            } else {
                None
            };
            let depth = sup.map_or(1, |s| self.classes[s].depth + 1);
            let int_fields = (0..self.rng.random_range(0..3)).map(|k| format!("f{i}x{k}")).collect();
            self.classes.push(Cls {
                name: format!("C{i}"),
                sup,
                depth,
                int_fields,
                obj_field: None,
                decls: Vec::new(),
                ctor: None,
            });
        }
        let n_sigs = self.rng.random_range(2..=6);
        while self.sigs.len() < n_sigs {
            let name = NAMES[self.rng.random_range(0..NAMES.len())].to_string();
            let arity = self.rng.random_range(0..2);
            if !self.sigs.iter().any(|s| s.name == name && s.arity == arity) {
                self.sigs.push(Sig { name, arity, level: 0 });
            }
        }
        let mut used = 0;
        for c in 0..n_classes {
            let inherited = self.classes[c].sup.map(|s| self.visible(s)).unwrap_or_default();
            for s in 0..self.sigs.len() {
                if used >= method_budget {
                    break;
                }
                let declare = if inherited.contains(&s) {
                    self.rng.random_bool(0.45)
                } else {
                    self.rng.random_bool(0.35)
                };
                if declare {
                    let is_abstract = !inherited.contains(&s) && self.rng.random_bool(0.15);
                    self.classes[c].decls.push(Decl { sig: s, is_abstract });
                    used += 1;
                }
            }
            if used < method_budget && self.rng.random_bool(0.35) {
                self.classes[c].ctor = Some((self.rng.random_range(0..2), 0));
                used += 1;
            }
            if self.rng.random_bool(0.3) {
                let target = self.rng.random_range(0..n_classes);
                self.classes[c].obj_field = Some((format!("o{c}"), target));
            }
        }
        let n_ctors = self.classes.iter().filter(|c| c.ctor.is_some()).count();
        let mut levels: Vec<u32> = (1..=(self.sigs.len() + n_ctors) as u32).collect();
        levels.shuffle(&mut self.rng);
        for s in &mut self.sigs {
            s.level = levels.pop().unwrap();
        }
        for c in &mut self.classes {
            if let Some((arity, _)) = c.ctor {
                c.ctor = Some((arity, levels.pop().unwrap()));
            }
        }
    }

    fn production_source(&mut self) -> String {
        let mut out = String::new();
        for c in 0..self.classes.len() {
            let header = match self.classes[c].sup {
                Some(s) => format!("class {} extends {} {{", self.classes[c].name, self.classes[s].name),
                None => format!("class {} {{", self.classes[c].name),
            };
            writeln!(out, "{header}").unwrap();
            for f in self.classes[c].int_fields.clone() {
                writeln!(out, "    int {f};").unwrap();
            }
            if self.classes[c].ctor.is_some() {
                let body = self.ctor_body(c);
                let (arity, _) = self.classes[c].ctor.unwrap();
                let params = if arity == 1 { "int p" } else { "" };
                writeln!(out, "    {}({params}) {{\n{body}    }}", self.classes[c].name).unwrap();
            }
            if let Some((field, decl)) = self.classes[c].obj_field.clone() {
                writeln!(out, "    {} {field};", self.classes[decl].name).unwrap();
            }
            let decls: Vec<(usize, bool)> = self.classes[c].decls.iter().map(|d| (d.sig, d.is_abstract)).collect();
            for (sig, is_abstract) in decls {
                let name = self.sigs[sig].name.clone();
                let params = if self.sigs[sig].arity == 1 { "int p" } else { "" };
                if is_abstract {
                    writeln!(out, "    int {name}({params});").unwrap();
                } else {
                    let body = self.method_body(c, sig);
                    writeln!(out, "    int {name}({params}) {{\n{body}    }}").unwrap();
                }
            }
            writeln!(out, "}}").unwrap();
        }
        out
    }

    /// One test body: statements plus the probed expression.
    fn test_case(&mut self, fixture: Option<usize>) -> Option<(String, String)> {
        let mut stmts = String::new();
        let mut terms = Vec::new();
        for _ in 0..self.rng.random_range(1..3) {
            let use_fixture = fixture.is_some() && self.rng.random_bool(0.5);
            let (recv, decl) = if use_fixture {
                ("f".to_string(), fixture.unwrap())
            } else {
                let choices = self.object_choices(0);
                let &(decl, conc) = choices.choose(&mut self.rng)?;
                self.fresh += 1;
                let v = format!("x{}", self.fresh);
                let new = self.new_expr(conc);
                writeln!(stmts, "        {} {v} = {new};", self.classes[decl].name).unwrap();
                (v, decl)
            };
            let sigs = self.visible(decl);
            let &s = sigs.choose(&mut self.rng)?;
            let args = (0..self.sigs[s].arity).map(|_| self.int_lit()).collect::<Vec<_>>().join(", ");
            terms.push(format!("{recv}.{}({args})", self.sigs[s].name));
        }
        Some((stmts, terms.join(" + ")))
    }

    fn test_classes(&mut self, n: usize, max_tests: usize) -> Vec<TestClass> {
        let mut out = Vec::new();
        for t in 0..n {
            let choices = self.object_choices(0);
            let fixture = if self.rng.random_bool(0.6) {
                choices.choose(&mut self.rng).copied()
            } else {
                None
            };
            let setup = fixture.map(|(decl, conc)| {
                let new = self.new_expr(conc);
                (self.classes[decl].name.clone(), format!("f = {new};"), self.rng.random_bool(0.2))
            });
            let mut cases = Vec::new();
            for _ in 0..self.rng.random_range(1..=max_tests) {
                if let Some(case) = self.test_case(fixture.map(|f| f.0)) {
                    cases.push(case);
                }
            }
            out.push(TestClass {
                name: format!("T{t}Test"),
                setup,
                cases,
            });
        }
        out
    }
}

struct TestClass {
    name: String,
    /// Fixture field type, its initialisation, and whether it lives in a
    /// constructor rather than `SetUp`.
    setup: Option<(String, String, bool)>,
    cases: Vec<(String, String)>,
}

fn render_tests(classes: &[TestClass], expected: Option<&[Vec<Option<i64>>]>) -> String {
    let mut out = String::new();
    for (ci, tc) in classes.iter().enumerate() {
        writeln!(out, "class {} {{", tc.name).unwrap();
        if let Some((ty, init, in_ctor)) = &tc.setup {
            writeln!(out, "    {ty} f;").unwrap();
            if *in_ctor {
                writeln!(out, "    {}() {{ {init} }}", tc.name).unwrap();
            } else {
                writeln!(out, "    void SetUp() {{ {init} }}").unwrap();
            }
        }
        for (ti, (stmts, expr)) in tc.cases.iter().enumerate() {
            match expected {
                None => writeln!(out, "    int test{ti}() {{\n{stmts}        return {expr};\n    }}").unwrap(),
                Some(values) => {
                    let Some(v) = values[ci][ti] else { continue };
                    writeln!(out, "    void test{ti}() {{\n{stmts}        assert {expr} == {};\n    }}", literal(v)).unwrap();
                }
            }
        }
        writeln!(out, "}}").unwrap();
    }
    out
}

fn literal(v: i64) -> String {
    match v {
        i64::MIN => "(0 - 9223372036854775807 - 1)".to_string(),
        v if v < 0 => format!("(0 - {})", -v),
        v => v.to_string(),
    }
}

/// Generates one program from `seed`.
pub fn generate(seed: u64, cfg: &CorpusConfig) -> GeneratedProgram {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
        sigs: Vec::new(),
        classes: Vec::new(),
        fresh: 0,
    };
    let n_tests = g.rng.random_range(1..=3.min(cfg.max_classes.saturating_sub(1)).max(1));
    let n_prod = g.rng.random_range(2..=cfg.max_classes.saturating_sub(n_tests).clamp(2, 12));
    let test_budget = n_tests * (cfg.max_tests_per_class + 1);
    g.structure(cfg, n_prod, cfg.max_methods.saturating_sub(test_budget).max(2));
    let production = g.production_source();
    let tests = g.test_classes(n_tests, cfg.max_tests_per_class);

    let probe_src = format!("{production}{}", render_tests(&tests, None));
    let probe = parse_source(&probe_src)
        .unwrap_or_else(|e| panic!("generator produced an invalid program (seed {seed}): {e}\n{probe_src}"))
        .program;
    let values: Vec<Vec<Option<i64>>> = tests
        .iter()
        .map(|tc| {
            (0..tc.cases.len())
                .map(|ti| match run_returning(&probe, &tc.name, &format!("test{ti}"), &cfg.run) {
                    Ok(Some(Value::Int(v))) => Some(v),
                    _ => None,
                })
                .collect()
        })
        .collect();
    let source = format!("{production}{}", render_tests(&tests, Some(&values)));
    let program = parse_source(&source)
        .unwrap_or_else(|e| panic!("generator produced an invalid program (seed {seed}): {e}\n{source}"))
        .program;
    let tests = discover_tests(&program, &TestConfig::default());
    GeneratedProgram {
        seed,
        source,
        program,
        tests,
    }
}

/// `count` programs from consecutive seeds starting at `first_seed`.
pub fn generate_corpus(first_seed: u64, count: usize, cfg: &CorpusConfig) -> Vec<GeneratedProgram> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| generate(first_seed + i, cfg))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runtime::{run_suite, TestStatus};

    #[test]
    fn generation_is_deterministic() {
        let cfg = CorpusConfig::default();
        assert_eq!(generate(7, &cfg).source, generate(7, &cfg).source);
    }

    #[test]
    fn generated_programs_respect_limits_and_pass() {
        let cfg = CorpusConfig::default();
        for p in generate_corpus(0, 40, &cfg) {
            assert!(p.program.classes.len() <= cfg.max_classes, "seed {}", p.seed);
            let methods: usize = p.program.classes.iter().map(|c| c.methods.len()).sum();
            assert!(methods <= cfg.max_methods, "seed {}: {methods} methods", p.seed);
            for c in &p.program.classes {
                assert!(p.program.ancestry(&c.name).len() <= cfg.max_depth, "seed {}", p.seed);
            }
            for o in run_suite(&p.program, &p.tests, &cfg.run) {
                assert_eq!(o.status, TestStatus::Pass, "seed {}: {:?}\n{}", p.seed, o.message, p.source);
            }
        }
    }
}
