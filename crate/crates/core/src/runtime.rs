//! Tree-walking interpreter and test harness.
//!
//! Each test runs against a fresh heap: the harness instantiates the test
//! class (running its zero-argument constructor, if declared), runs the
//! class's set-up method, then the test method. Every call except the root
//! test call is recorded in a trace together with the body dispatch chose.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::frontend::ast::*;
use crate::model::SubjectId;
use crate::selector::TestConfig;

pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;
pub const DEFAULT_MAX_DEPTH: usize = 200;
pub const STEP_BUDGET_ENV: &str = "CHTEST_STEP_BUDGET";

#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Statements plus calls a single test may execute.
    pub step_budget: u64,
    pub max_depth: usize,
    pub tests: TestConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            step_budget: DEFAULT_STEP_BUDGET,
            max_depth: DEFAULT_MAX_DEPTH,
            tests: TestConfig::default(),
        }
    }
}

impl RunConfig {
    /// Defaults, with the step budget taken from `CHTEST_STEP_BUDGET` when set.
    pub fn from_env() -> Self {
        let mut cfg = RunConfig::default();
        if let Some(n) = std::env::var(STEP_BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            cfg.step_budget = n;
        }
        cfg
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Value {
    Int(i64),
    Bool(bool),
    Null,
    Obj(usize),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Null => f.write_str("null"),
            Value::Obj(i) => write!(f, "<object #{i}>"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CallKind {
    Virtual,
    Super,
    Constructor,
    Setup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    /// Runtime class of the receiver.
    pub receiver_class: String,
    pub method: String,
    pub arity: usize,
    /// Id of the body that ran.
    pub resolved: SubjectId,
    pub kind: CallKind,
    /// Index of the entry that was executing when this call was made;
    /// `None` for calls made directly by the test method or the harness.
    pub caller: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TestStatus {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for TestStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestStatus::Pass => "pass",
            TestStatus::Fail => "fail",
            TestStatus::Error => "error",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TestOutcome {
    pub test: SubjectId,
    pub status: TestStatus,
    pub message: Option<String>,
    pub steps: u64,
    pub trace: Vec<TraceEntry>,
}

impl TestOutcome {
    /// Bodies that ran, the test method itself included.
    pub fn executed_methods(&self) -> BTreeSet<SubjectId> {
        let mut out: BTreeSet<SubjectId> = self.trace.iter().map(|e| e.resolved.clone()).collect();
        out.insert(self.test.clone());
        out
    }

    /// Classes declaring at least one body that ran.
    pub fn covered_classes(&self) -> BTreeSet<String> {
        self.executed_methods()
            .iter()
            .filter_map(|m| m.declaring_class().map(str::to_string))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Abort {
    Fail(String),
    Error(String),
}

enum Flow {
    Normal,
    Return(Option<Value>),
}

type Exec<T> = Result<T, Abort>;

struct Object<'p> {
    class: &'p ClassDecl,
    fields: HashMap<&'p str, Value>,
}

struct Frame<'p> {
    this: Value,
    /// Class declaring the running body; `super` lookups start above it.
    class: &'p ClassDecl,
    locals: Vec<(&'p str, Value)>,
    trace_index: Option<usize>,
}

type DispatchKey<'p> = (&'p str, &'p str, usize);
type Dispatched<'p> = Option<(&'p ClassDecl, &'p MethodDecl)>;

struct Interp<'p> {
    program: &'p Program,
    classes: HashMap<&'p str, &'p ClassDecl>,
    dispatch: HashMap<DispatchKey<'p>, Dispatched<'p>>,
    heap: Vec<Object<'p>>,
    trace: Vec<TraceEntry>,
    steps: u64,
    depth: usize,
    cfg: &'p RunConfig,
}

fn default_value(ty: &Type) -> Value {
    match ty {
        Type::Int => Value::Int(0),
        Type::Bool => Value::Bool(false),
        Type::Void | Type::Class(_) => Value::Null,
    }
}

fn body_id(class: &ClassDecl, m: &MethodDecl) -> SubjectId {
    SubjectId::method(&class.name, &m.name, m.arity())
}

impl<'p> Interp<'p> {
    fn new(program: &'p Program, cfg: &'p RunConfig) -> Self {
        Interp {
            program,
            classes: program.classes.iter().map(|c| (c.name.as_str(), c)).collect(),
            dispatch: HashMap::new(),
            heap: Vec::new(),
            trace: Vec::new(),
            steps: 0,
            depth: 0,
            cfg,
        }
    }

    fn tick(&mut self) -> Exec<()> {
        self.steps += 1;
        if self.steps > self.cfg.step_budget {
            return Err(Abort::Error(format!("step budget of {} exceeded", self.cfg.step_budget)));
        }
        Ok(())
    }

    fn class(&self, name: &str) -> Exec<&'p ClassDecl> {
        self.classes
            .get(name)
            .copied()
            .ok_or_else(|| Abort::Error(format!("unknown class `{name}`")))
    }

    /// First concrete body for `name/arity` at or above `start`.
    fn lookup(&mut self, start: &'p str, name: &'p str, arity: usize) -> Option<(&'p ClassDecl, &'p MethodDecl)> {
        if let Some(hit) = self.dispatch.get(&(start, name, arity)) {
            return *hit;
        }
        let found = self
            .program
            .ancestry(start)
            .into_iter()
            .find_map(|c| c.method(name, arity).filter(|m| !m.is_abstract()).map(|m| (c, m)));
        self.dispatch.insert((start, name, arity), found);
        found
    }

    fn alloc(&mut self, class: &'p ClassDecl) -> Value {
        let fields = self
            .program
            .all_fields(&class.name)
            .into_iter()
            .map(|f| (f.name.as_str(), default_value(&f.ty)))
            .collect();
        self.heap.push(Object { class, fields });
        Value::Obj(self.heap.len() - 1)
    }

    #[allow(clippy::too_many_arguments)]
    fn invoke(
        &mut self,
        this: Value,
        class: &'p ClassDecl,
        method: &'p MethodDecl,
        args: Vec<Value>,
        kind: CallKind,
        caller: Option<usize>,
        traced: bool,
    ) -> Exec<Option<Value>> {
        self.tick()?;
        if self.depth >= self.cfg.max_depth {
            return Err(Abort::Error(format!("call depth limit of {} exceeded", self.cfg.max_depth)));
        }
        let trace_index = if traced {
            let receiver_class = match this {
                Value::Obj(i) => self.heap[i].class.name.clone(),
                _ => class.name.clone(),
            };
            self.trace.push(TraceEntry {
                receiver_class,
                method: method.name.clone(),
                arity: method.arity(),
                resolved: body_id(class, method),
                kind,
                caller,
            });
            Some(self.trace.len() - 1)
        } else {
            caller
        };
        let Some(body) = &method.body else {
            return Err(Abort::Error(format!("`{}` has no body", body_id(class, method))));
        };
        let mut frame = Frame {
            this,
            class,
            locals: method.params.iter().map(|p| p.name.as_str()).zip(args).collect(),
            trace_index,
        };
        self.depth += 1;
        let flow = self.block(&mut frame, body);
        self.depth -= 1;
        match flow? {
            Flow::Return(v) => Ok(v),
            Flow::Normal if method.ret == Type::Void || method.is_constructor => Ok(None),
            Flow::Normal => Err(Abort::Error(format!("`{}` ended without returning a value", body_id(class, method)))),
        }
    }

    fn block(&mut self, frame: &mut Frame<'p>, block: &'p Block) -> Exec<Flow> {
        let mark = frame.locals.len();
        let mut flow = Ok(Flow::Normal);
        for s in &block.stmts {
            match self.stmt(frame, s) {
                Ok(Flow::Normal) => {}
                other => {
                    flow = other;
                    break;
                }
            }
        }
        frame.locals.truncate(mark);
        flow
    }

    fn assign_var(&mut self, frame: &mut Frame<'p>, name: &'p str, v: Value) -> Exec<()> {
        if let Some(slot) = frame.locals.iter_mut().rev().find(|(n, _)| *n == name) {
            slot.1 = v;
            Ok(())
        } else {
            self.set_field(frame.this, name, v)
        }
    }

    fn set_field(&mut self, this: Value, name: &str, v: Value) -> Exec<()> {
        let Value::Obj(i) = this else {
            return Err(Abort::Error("field write on a non-object".into()));
        };
        match self.heap[i].fields.get_mut(name) {
            Some(slot) => {
                *slot = v;
                Ok(())
            }
            None => Err(Abort::Error(format!("unknown field `{name}`"))),
        }
    }

    fn get_field(&self, this: Value, name: &str) -> Exec<Value> {
        let Value::Obj(i) = this else {
            return Err(Abort::Error("field read on a non-object".into()));
        };
        self.heap[i]
            .fields
            .get(name)
            .copied()
            .ok_or_else(|| Abort::Error(format!("unknown field `{name}`")))
    }

    fn stmt(&mut self, frame: &mut Frame<'p>, s: &'p Stmt) -> Exec<Flow> {
        self.tick()?;
        match &s.kind {
            StmtKind::Local { ty, name, init } => {
                let v = match init {
                    Some(e) => self.expr(frame, e)?,
                    None => default_value(ty),
                };
                frame.locals.push((name.as_str(), v));
            }
            StmtKind::Assign { target, value } => {
                let v = self.expr(frame, value)?;
                match target {
                    Target::Var(name) => self.assign_var(frame, name, v)?,
                    Target::Field(name) => self.set_field(frame.this, name, v)?,
                }
            }
            StmtKind::If {
                cond,
                then_block,
                else_block,
            } => {
                if self.bool(frame, cond)? {
                    return self.block(frame, then_block);
                } else if let Some(b) = else_block {
                    return self.block(frame, b);
                }
            }
            StmtKind::While { cond, body } => {
                while self.bool(frame, cond)? {
                    if let Flow::Return(v) = self.block(frame, body)? {
                        return Ok(Flow::Return(v));
                    }
                    self.tick()?;
                }
            }
            StmtKind::Return(e) => {
                let v = match e {
                    Some(e) => Some(self.expr(frame, e)?),
                    None => None,
                };
                return Ok(Flow::Return(v));
            }
            StmtKind::Assert(e) => {
                if !self.bool(frame, e)? {
                    return Err(Abort::Fail(format!(
                        "assertion failed at {}: {}",
                        e.meta.span,
                        crate::frontend::printer::print_expr(e)
                    )));
                }
            }
            StmtKind::Expr(Expr {
                kind: ExprKind::Call(call),
                ..
            }) => {
                self.call(frame, call)?;
            }
            StmtKind::Expr(e) => {
                self.expr(frame, e)?;
            }
        }
        Ok(Flow::Normal)
    }

    fn bool(&mut self, frame: &mut Frame<'p>, e: &'p Expr) -> Exec<bool> {
        match self.expr(frame, e)? {
            Value::Bool(b) => Ok(b),
            other => Err(Abort::Error(format!("expected a bool, found {other}"))),
        }
    }

    fn int(&mut self, frame: &mut Frame<'p>, e: &'p Expr) -> Exec<i64> {
        match self.expr(frame, e)? {
            Value::Int(n) => Ok(n),
            other => Err(Abort::Error(format!("expected an int, found {other}"))),
        }
    }

    fn expr(&mut self, frame: &mut Frame<'p>, e: &'p Expr) -> Exec<Value> {
        match &e.kind {
            ExprKind::Int(n) => Ok(Value::Int(*n)),
            ExprKind::Bool(b) => Ok(Value::Bool(*b)),
            ExprKind::Null => Ok(Value::Null),
            ExprKind::This => Ok(frame.this),
            ExprKind::Var(name) => match frame.locals.iter().rev().find(|(n, _)| n == name) {
                Some((_, v)) => Ok(*v),
                None => self.get_field(frame.this, name),
            },
            ExprKind::Field(name) => self.get_field(frame.this, name),
            ExprKind::Unary(UnOp::Not, inner) => Ok(Value::Bool(!self.bool(frame, inner)?)),
            ExprKind::Unary(UnOp::Neg, inner) => Ok(Value::Int(self.int(frame, inner)?.wrapping_neg())),
            ExprKind::Binary(BinOp::And, l, r) => Ok(Value::Bool(self.bool(frame, l)? && self.bool(frame, r)?)),
            ExprKind::Binary(BinOp::Or, l, r) => Ok(Value::Bool(self.bool(frame, l)? || self.bool(frame, r)?)),
            ExprKind::Binary(op @ (BinOp::Eq | BinOp::Ne), l, r) => {
                let a = self.expr(frame, l)?;
                let b = self.expr(frame, r)?;
                Ok(Value::Bool((a == b) == (*op == BinOp::Eq)))
            }
            ExprKind::Binary(op, l, r) => {
                let a = self.int(frame, l)?;
                let b = self.int(frame, r)?;
                Ok(match op {
                    BinOp::Add => Value::Int(a.wrapping_add(b)),
                    BinOp::Sub => Value::Int(a.wrapping_sub(b)),
                    BinOp::Mul => Value::Int(a.wrapping_mul(b)),
                    BinOp::Div => {
                        if b == 0 {
                            return Err(Abort::Error(format!("division by zero at {}", e.meta.span)));
                        }
                        Value::Int(a.wrapping_div(b))
                    }
                    BinOp::Lt => Value::Bool(a < b),
                    BinOp::Le => Value::Bool(a <= b),
                    BinOp::Gt => Value::Bool(a > b),
                    BinOp::Ge => Value::Bool(a >= b),
                    BinOp::Eq | BinOp::Ne | BinOp::And | BinOp::Or => unreachable!("handled above"),
                })
            }
            ExprKind::New { class, args } => {
                let args = self.args(frame, args)?;
                self.instantiate(class, args, frame.trace_index, true)
            }
            ExprKind::Call(call) => self
                .call(frame, call)?
                .ok_or_else(|| Abort::Error(format!("`{}` returned no value", call.method))),
        }
    }

    fn args(&mut self, frame: &mut Frame<'p>, args: &'p [Expr]) -> Exec<Vec<Value>> {
        args.iter().map(|a| self.expr(frame, a)).collect()
    }

    fn instantiate(&mut self, class: &str, args: Vec<Value>, caller: Option<usize>, traced: bool) -> Exec<Value> {
        let decl = self.class(class)?;
        let obj = self.alloc(decl);
        if decl.has_constructors() {
            let ctor = decl
                .constructor(args.len())
                .ok_or_else(|| Abort::Error(format!("`{class}` has no constructor taking {} argument(s)", args.len())))?;
            self.invoke(obj, decl, ctor, args, CallKind::Constructor, caller, traced)?;
        } else if !args.is_empty() {
            return Err(Abort::Error(format!("`{class}` has no constructor taking {} argument(s)", args.len())));
        }
        Ok(obj)
    }

    fn call(&mut self, frame: &mut Frame<'p>, call: &'p Call) -> Exec<Option<Value>> {
        let (receiver, start, kind): (Value, &'p str, CallKind) = match &call.receiver {
            Receiver::Implicit => (frame.this, self.runtime_class(frame.this)?, CallKind::Virtual),
            Receiver::Super => {
                let sup = frame
                    .class
                    .superclass
                    .as_deref()
                    .ok_or_else(|| Abort::Error(format!("`{}` has no superclass", frame.class.name)))?;
                (frame.this, sup, CallKind::Super)
            }
            Receiver::Expr(recv) => {
                let v = self.expr(frame, recv)?;
                (v, self.runtime_class(v)?, CallKind::Virtual)
            }
        };
        let args = self.args(frame, &call.args)?;
        let (class, method) = self
            .lookup(start, &call.method, args.len())
            .ok_or_else(|| Abort::Error(format!("no body for `{}/{}` from `{start}`", call.method, args.len())))?;
        self.invoke(receiver, class, method, args, kind, frame.trace_index, true)
    }

    fn runtime_class(&self, v: Value) -> Exec<&'p str> {
        match v {
            Value::Obj(i) => Ok(self.heap[i].class.name.as_str()),
            Value::Null => Err(Abort::Error("method call on null".into())),
            other => Err(Abort::Error(format!("method call on non-object {other}"))),
        }
    }

    /// Harness: instance, constructor, set-up. Returns the test instance.
    fn fixture(&mut self, class: &'p ClassDecl) -> Exec<Value> {
        let this = self.instantiate(&class.name, Vec::new(), None, true)?;
        let setup = self
            .cfg
            .tests
            .setup_names
            .iter()
            .find_map(|name| self.lookup(&class.name, name, 0));
        if let Some((decl, m)) = setup {
            self.invoke(this, decl, m, Vec::new(), CallKind::Setup, None, true)?;
        }
        Ok(this)
    }
}

fn outcome(test: SubjectId, result: Exec<()>, interp: Interp<'_>) -> TestOutcome {
    let (status, message) = match result {
        Ok(()) => (TestStatus::Pass, None),
        Err(Abort::Fail(m)) => (TestStatus::Fail, Some(m)),
        Err(Abort::Error(m)) => (TestStatus::Error, Some(m)),
    };
    TestOutcome {
        test,
        status,
        message,
        steps: interp.steps,
        trace: interp.trace,
    }
}

fn split_test_id(test: &SubjectId) -> Option<(&str, &str)> {
    let rest = test.as_str().strip_prefix("method:")?;
    let (qualified, arity) = rest.rsplit_once('/')?;
    if arity != "0" {
        return None;
    }
    qualified.split_once('.')
}

/// Runs one test method, given by id (`method:Class.name/0`).
pub fn run_test(program: &Program, test: &SubjectId, cfg: &RunConfig) -> TestOutcome {
    let mut interp = Interp::new(program, cfg);
    let result = (|| {
        let (class, name) =
            split_test_id(test).ok_or_else(|| Abort::Error(format!("`{test}` is not a zero-argument method")))?;
        let decl = interp.class(class)?;
        let method = decl
            .method(name, 0)
            .filter(|m| !m.is_abstract())
            .ok_or_else(|| Abort::Error(format!("no test body `{test}`")))?;
        let this = interp.fixture(decl)?;
        interp.invoke(this, decl, method, Vec::new(), CallKind::Virtual, None, false)?;
        Ok(())
    })();
    outcome(test.clone(), result, interp)
}

/// Runs `class.method()` under the test harness and returns its result.
pub fn run_returning(program: &Program, class: &str, method: &str, cfg: &RunConfig) -> Result<Option<Value>, String> {
    let mut interp = Interp::new(program, cfg);
    let decl = interp.class(class).map_err(abort_message)?;
    let m = decl
        .method(method, 0)
        .filter(|m| !m.is_abstract())
        .ok_or_else(|| format!("no method `{class}.{method}/0`"))?;
    let this = interp.fixture(decl).map_err(abort_message)?;
    interp
        .invoke(this, decl, m, Vec::new(), CallKind::Virtual, None, false)
        .map_err(abort_message)
}

fn abort_message(a: Abort) -> String {
    match a {
        Abort::Fail(m) | Abort::Error(m) => m,
    }
}

/// Test methods declared in `program`, in declaration order.
pub fn discover_tests(program: &Program, tests: &TestConfig) -> Vec<SubjectId> {
    program
        .classes
        .iter()
        .flat_map(|c| {
            c.methods
                .iter()
                .filter(|m| !m.is_constructor && !m.is_abstract() && tests.is_test_method(&c.name, &m.name, m.arity()))
                .map(|m| body_id(c, m))
        })
        .collect()
}

/// Runs the given tests in parallel; results come back in input order.
pub fn run_suite(program: &Program, tests: &[SubjectId], cfg: &RunConfig) -> Vec<TestOutcome> {
    tests.par_iter().map(|t| run_test(program, t, cfg)).collect()
}

/// For every executed body, the tests that executed it.
pub fn dynamic_relevant_tests(outcomes: &[TestOutcome]) -> BTreeMap<SubjectId, BTreeSet<SubjectId>> {
    let mut map: BTreeMap<SubjectId, BTreeSet<SubjectId>> = BTreeMap::new();
    for o in outcomes {
        for m in o.executed_methods() {
            map.entry(m).or_default().insert(o.test.clone());
        }
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_source;

    fn run(src: &str, test: &str) -> TestOutcome {
        let p = parse_source(src).unwrap().program;
        run_test(&p, &SubjectId::from(test), &RunConfig::default())
    }

    const FIG2: &str = "class Foo { int foo() { return 1; } }\n\
                        class Bar extends Foo { int foo() { return 2; } }\n\
                        class FooBarTest { Foo f; void SetUp() { f = new Bar(); } void fooTest() { assert f.foo() == 2; } }";

    #[test]
    fn dispatch_uses_runtime_class() {
        let o = run(FIG2, "method:FooBarTest.fooTest/0");
        assert_eq!(o.status, TestStatus::Pass, "{:?}", o.message);
        let resolved: Vec<&str> = o.trace.iter().map(|e| e.resolved.as_str()).collect();
        assert_eq!(resolved, vec!["method:FooBarTest.SetUp/0", "method:Bar.foo/0"]);
        assert_eq!(o.trace[1].receiver_class, "Bar");
        assert_eq!(o.trace[1].caller, None);
    }

    #[test]
    fn failing_assertion_and_runtime_errors() {
        let src = "class T { int zero; void testFail() { assert 1 == 2; } void testDiv() { int x = 1 / zero; }\n\
                   void testNull() { T t = null; t.testFail(); } void testLoop() { while (true) { } } }";
        assert_eq!(run(src, "method:T.testFail/0").status, TestStatus::Fail);
        assert_eq!(run(src, "method:T.testDiv/0").status, TestStatus::Error);
        assert_eq!(run(src, "method:T.testNull/0").status, TestStatus::Error);
        let looping = run(src, "method:T.testLoop/0");
        assert_eq!(looping.status, TestStatus::Error);
        assert!(looping.message.unwrap().contains("budget"));
    }

    #[test]
    fn unbounded_recursion_is_an_error() {
        let src = "class T { int f(int n) { return f(n + 1); } void testRec() { int x = f(0); } }";
        let o = run(src, "method:T.testRec/0");
        assert_eq!(o.status, TestStatus::Error);
        assert!(o.message.unwrap().contains("depth"));
    }

    #[test]
    fn super_calls_and_constructors() {
        let src = "class A { int v; A(int x) { v = x; } int get() { return v; } }\n\
                   class B extends A { B() { v = 5; } int get() { return super.get() + 1; } }\n\
                   class ATest { void testIt() { A a = new B(); assert a.get() == 6; A b = new A(3); assert b.get() == 3; } }";
        let o = run(src, "method:ATest.testIt/0");
        assert_eq!(o.status, TestStatus::Pass, "{:?}", o.message);
        let kinds: Vec<CallKind> = o.trace.iter().map(|e| e.kind).collect();
        assert_eq!(
            kinds,
            vec![
                CallKind::Constructor,
                CallKind::Virtual,
                CallKind::Super,
                CallKind::Constructor,
                CallKind::Virtual
            ]
        );
        assert_eq!(o.trace[2].caller, Some(1));
    }

    #[test]
    fn abstract_methods_are_skipped_by_dispatch() {
        let src = "class A { int get(); int twice() { return get() * 2; } }\n\
                   class B extends A { int get() { return 4; } }\n\
                   class ATest { void testIt() { A a = new B(); assert a.twice() == 8; } }";
        assert_eq!(run(src, "method:ATest.testIt/0").status, TestStatus::Pass);
    }

    #[test]
    fn wrapping_arithmetic() {
        let src = "class T { void testWrap() { int big = 9223372036854775807; assert big + 1 < 0; } }";
        assert_eq!(run(src, "method:T.testWrap/0").status, TestStatus::Pass);
    }

    #[test]
    fn run_returning_yields_value() {
        let src = format!("{FIG2}\nclass P {{ Foo f; void setUp() {{ f = new Bar(); }} int probe() {{ return f.foo() * 10; }} }}");
        let p = parse_source(&src).unwrap().program;
        let got = run_returning(&p, "P", "probe", &RunConfig::default());
        assert_eq!(got, Ok(Some(Value::Int(20))));
    }

    #[test]
    fn dynamic_map_includes_test_itself() {
        let p = parse_source(FIG2).unwrap().program;
        let tests = discover_tests(&p, &TestConfig::default());
        let map = dynamic_relevant_tests(&run_suite(&p, &tests, &RunConfig::default()));
        let foo_test = SubjectId::from("method:FooBarTest.fooTest/0");
        assert!(map[&SubjectId::from("method:Bar.foo/0")].contains(&foo_test));
        assert!(map[&foo_test].contains(&foo_test));
        assert!(!map.contains_key(&SubjectId::from("method:Foo.foo/0")));
    }
}
