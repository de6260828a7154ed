//! Text form of a model configuration.
//!
//! ```text
//! spec        := kernel_expr [";" "mean" "=" mean_expr] [";" "likelihood" "(" args ")"]
//! kernel_expr := term { "+" term }
//! term        := atom { "*" atom }
//! atom        := name "(" [args] ")" | "(" kernel_expr ")"
//! mean_expr   := "zero" | "constant" "(" args ")" | "linear" "(" args ")"
//! args        := key "=" (number | boolean) { "," key "=" (number | boolean) }
//! ```
//!
//! Examples: `matern32()`, `matern32() + white(variance=4, trainable=false); likelihood(init=0.0001)`,
//! `(se() + white()) * linear(); mean=linear(a=1, b=1)`.
//!
//! Omitted values default to 1 and omitted `trainable` to `true`. The
//! `trainable` flag of a kernel call applies to every parameter of that leaf.

use std::fmt;

use crate::error::{GpError, Result};
use crate::gpr::GpModel;
use crate::kernels::{Kernel, MaternOrder, Param};
use crate::means::{Coef, MeanFn};
use crate::scalar::Scalar;
use crate::trajectory::CoordinateDataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeafKind {
    Constant,
    White,
    Linear,
    Se,
    Rq,
    Matern(MaternOrder),
}

impl LeafKind {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "constant" => LeafKind::Constant,
            "white" => LeafKind::White,
            "linear" => LeafKind::Linear,
            "se" => LeafKind::Se,
            "rq" => LeafKind::Rq,
            "matern12" => LeafKind::Matern(MaternOrder::Half),
            "matern32" => LeafKind::Matern(MaternOrder::ThreeHalves),
            "matern52" => LeafKind::Matern(MaternOrder::FiveHalves),
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            LeafKind::Constant => "constant",
            LeafKind::White => "white",
            LeafKind::Linear => "linear",
            LeafKind::Se => "se",
            LeafKind::Rq => "rq",
            LeafKind::Matern(o) => o.name(),
        }
    }

    fn has_lengthscale(self) -> bool {
        matches!(self, LeafKind::Se | LeafKind::Rq | LeafKind::Matern(_))
    }

    fn has_alpha(self) -> bool {
        self == LeafKind::Rq
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeafSpec {
    pub kind: LeafKind,
    pub variance: f64,
    /// Meaningful only for kinds with a lengthscale.
    pub lengthscale: f64,
    /// Meaningful only for `rq`.
    pub alpha: f64,
    pub trainable: bool,
}

impl LeafSpec {
    pub fn new(kind: LeafKind) -> Self {
        Self { kind, variance: 1.0, lengthscale: 1.0, alpha: 1.0, trainable: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    Leaf(LeafSpec),
    Sum(Box<KernelSpec>, Box<KernelSpec>),
    Product(Box<KernelSpec>, Box<KernelSpec>),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub enum MeanSpec {
    #[default]
    Zero,
    Constant {
        c: f64,
        trainable: bool,
    },
    Linear {
        a: f64,
        b: f64,
        trainable: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LikelihoodSpec {
    pub init: f64,
    pub trainable: bool,
}

impl Default for LikelihoodSpec {
    fn default() -> Self {
        Self { init: 1.0, trainable: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub kernel: KernelSpec,
    pub mean: MeanSpec,
    pub likelihood: LikelihoodSpec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecErrorKind {
    Syntax(String),
    UnknownKernelName(String),
    UnknownKey(String),
    DuplicateKey(String),
}

/// Parse failure at a 1-based line/column.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {kind}")]
pub struct SpecError {
    pub kind: SpecErrorKind,
    pub line: usize,
    pub column: usize,
    /// Character offset into the input, at most its length.
    pub offset: usize,
}

impl fmt::Display for SpecErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecErrorKind::Syntax(m) => write!(f, "syntax error: {m}"),
            SpecErrorKind::UnknownKernelName(n) => write!(f, "unknown kernel `{n}`"),
            SpecErrorKind::UnknownKey(k) => write!(f, "unknown key `{k}`"),
            SpecErrorKind::DuplicateKey(k) => write!(f, "duplicate key `{k}`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    LParen,
    RParen,
    Comma,
    Eq,
    Plus,
    Minus,
    Star,
    Semi,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(n) => format!("number {n}"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Semi => "`;`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
    offset: usize,
}

fn lex(text: &str) -> std::result::Result<Vec<(Tok, Pos)>, SpecError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col, offset: i };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Eq),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            ';' => Some(Tok::Semi),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, pos));
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
        } else if c.is_ascii_digit() || c == '.' {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            let v = s.parse::<f64>().map_err(|_| SpecError {
                kind: SpecErrorKind::Syntax(format!("malformed number `{s}`")),
                line: pos.line,
                column: pos.column,
                offset: pos.offset,
            })?;
            out.push((Tok::Number(v), pos));
        } else {
            return Err(SpecError {
                kind: SpecErrorKind::Syntax(format!("unexpected character `{c}`")),
                line: pos.line,
                column: pos.column,
                offset: pos.offset,
            });
        }
        col += i - start;
    }
    out.push((Tok::End, Pos { line, column: col, offset: chars.len() }));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum ArgValue {
    Number(f64),
    Bool(bool),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    i: usize,
}

type PResult<T> = std::result::Result<T, SpecError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].1
    }

    fn err_at(&self, pos: Pos, kind: SpecErrorKind) -> SpecError {
        SpecError { kind, line: pos.line, column: pos.column, offset: pos.offset }
    }

    fn syntax(&self, what: &str) -> SpecError {
        self.err_at(self.pos(), SpecErrorKind::Syntax(format!("expected {what}, found {}", self.peek().describe())))
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if t != Tok::End {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.syntax(what))
        }
    }

    fn spec(&mut self) -> PResult<ModelSpec> {
        let kernel = self.kernel_expr()?;
        let mut mean = MeanSpec::Zero;
        let mut likelihood = LikelihoodSpec::default();
        let mut seen_mean = false;
        let mut seen_lik = false;
        while *self.peek() == Tok::Semi {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Tok::Ident(s) if s == "mean" && !seen_mean && !seen_lik => {
                    self.expect(Tok::Eq, "`=`")?;
                    mean = self.mean_expr()?;
                    seen_mean = true;
                }
                Tok::Ident(s) if s == "likelihood" && !seen_lik => {
                    let args = self.call_args(&["init", "trainable"])?;
                    for (k, v, p) in args {
                        match (k.as_str(), v) {
                            ("init", ArgValue::Number(x)) => likelihood.init = x,
                            ("trainable", ArgValue::Bool(b)) => likelihood.trainable = b,
                            _ => return Err(type_error(p, &k)),
                        }
                    }
                    seen_lik = true;
                }
                t => {
                    return Err(self.err_at(
                        pos,
                        SpecErrorKind::Syntax(format!("expected `mean` or `likelihood`, found {}", t.describe())),
                    ))
                }
            }
        }
        if *self.peek() != Tok::End {
            return Err(self.syntax("`;`, `+`, `*` or end of input"));
        }
        Ok(ModelSpec { kernel, mean, likelihood })
    }

    fn kernel_expr(&mut self) -> PResult<KernelSpec> {
        let mut lhs = self.term()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let rhs = self.term()?;
            lhs = KernelSpec::Sum(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> PResult<KernelSpec> {
        let mut lhs = self.atom()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.atom()?;
            lhs = KernelSpec::Product(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> PResult<KernelSpec> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let inner = self.kernel_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let kind = LeafKind::from_name(&name)
                    .ok_or_else(|| self.err_at(pos, SpecErrorKind::UnknownKernelName(name.clone())))?;
                self.bump();
                let mut keys = vec!["variance", "trainable"];
                if kind.has_lengthscale() {
                    keys.push("lengthscale");
                }
                if kind.has_alpha() {
                    keys.push("alpha");
                }
                let mut leaf = LeafSpec::new(kind);
                for (k, v, p) in self.call_args(&keys)? {
                    match (k.as_str(), v) {
                        ("variance", ArgValue::Number(x)) => leaf.variance = x,
                        ("lengthscale", ArgValue::Number(x)) => leaf.lengthscale = x,
                        ("alpha", ArgValue::Number(x)) => leaf.alpha = x,
                        ("trainable", ArgValue::Bool(b)) => leaf.trainable = b,
                        _ => return Err(type_error(p, &k)),
                    }
                }
                Ok(KernelSpec::Leaf(leaf))
            }
            _ => Err(self.syntax("kernel name or `(`")),
        }
    }

    fn mean_expr(&mut self) -> PResult<MeanSpec> {
        let pos = self.pos();
        let name = match self.bump() {
            Tok::Ident(s) => s,
            _ => {
                self.i -= usize::from(self.i > 0 && self.toks[self.i - 1].0 != Tok::End);
                return Err(self.syntax("mean function"));
            }
        };
        match name.as_str() {
            "zero" => {
                if *self.peek() == Tok::LParen {
                    self.call_args(&[])?;
                }
                Ok(MeanSpec::Zero)
            }
            "constant" => {
                let (mut c, mut trainable) = (1.0, true);
                for (k, v, p) in self.call_args(&["c", "trainable"])? {
                    match (k.as_str(), v) {
                        ("c", ArgValue::Number(x)) => c = x,
                        ("trainable", ArgValue::Bool(b)) => trainable = b,
                        _ => return Err(type_error(p, &k)),
                    }
                }
                Ok(MeanSpec::Constant { c, trainable })
            }
            "linear" => {
                let (mut a, mut b, mut trainable) = (1.0, 1.0, true);
                for (k, v, p) in self.call_args(&["a", "b", "trainable"])? {
                    match (k.as_str(), v) {
                        ("a", ArgValue::Number(x)) => a = x,
                        ("b", ArgValue::Number(x)) => b = x,
                        ("trainable", ArgValue::Bool(t)) => trainable = t,
                        _ => return Err(type_error(p, &k)),
                    }
                }
                Ok(MeanSpec::Linear { a, b, trainable })
            }
            other => Err(self.err_at(pos, SpecErrorKind::Syntax(format!("unknown mean function `{other}`")))),
        }
    }

    /// `"(" [args] ")"`, checking keys against `allowed` and rejecting repeats.
    fn call_args(&mut self, allowed: &[&str]) -> PResult<Vec<(String, ArgValue, Pos)>> {
        self.expect(Tok::LParen, "`(`")?;
        let mut out: Vec<(String, ArgValue, Pos)> = Vec::new();
        if *self.peek() == Tok::RParen {
            self.bump();
            return Ok(out);
        }
        loop {
            let pos = self.pos();
            let key = match self.peek().clone() {
                Tok::Ident(k) => k,
                _ => return Err(self.syntax("argument name")),
            };
            if !allowed.contains(&key.as_str()) {
                return Err(self.err_at(pos, SpecErrorKind::UnknownKey(key)));
            }
            if out.iter().any(|(k, _, _)| *k == key) {
                return Err(self.err_at(pos, SpecErrorKind::DuplicateKey(key)));
            }
            self.bump();
            self.expect(Tok::Eq, "`=`")?;
            let value = self.arg_value()?;
            out.push((key, value, pos));
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RParen => {
                    self.bump();
                    return Ok(out);
                }
                _ => return Err(self.syntax("`,` or `)`")),
            }
        }
    }

    fn arg_value(&mut self) -> PResult<ArgValue> {
        let negative = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        match self.peek().clone() {
            Tok::Number(x) => {
                self.bump();
                Ok(ArgValue::Number(if negative { -x } else { x }))
            }
            Tok::Ident(s) if !negative && (s == "true" || s == "false") => {
                self.bump();
                Ok(ArgValue::Bool(s == "true"))
            }
            _ => Err(self.syntax("number or boolean")),
        }
    }
}

fn type_error(pos: Pos, key: &str) -> SpecError {
    let want = if key == "trainable" { "boolean" } else { "number" };
    SpecError {
        kind: SpecErrorKind::Syntax(format!("`{key}` expects a {want}")),
        line: pos.line,
        column: pos.column,
        offset: pos.offset,
    }
}

pub fn parse(text: &str) -> std::result::Result<ModelSpec, SpecError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, i: 0 };
    if *p.peek() == Tok::End {
        return Err(p.syntax("kernel expression"));
    }
    p.spec()
}

impl std::str::FromStr for ModelSpec {
    type Err = SpecError;
    fn from_str(s: &str) -> std::result::Result<Self, SpecError> {
        parse(s)
    }
}

fn fmt_leaf(f: &mut fmt::Formatter<'_>, leaf: &LeafSpec) -> fmt::Result {
    write!(f, "{}(", leaf.kind.name())?;
    if leaf.kind.has_alpha() {
        write!(f, "alpha={}, ", leaf.alpha)?;
    }
    if leaf.kind.has_lengthscale() {
        write!(f, "lengthscale={}, ", leaf.lengthscale)?;
    }
    write!(f, "trainable={}, variance={})", leaf.trainable, leaf.variance)
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelSpec::Leaf(leaf) => fmt_leaf(f, leaf),
            KernelSpec::Sum(a, b) => {
                write!(f, "{a} + ")?;
                match **b {
                    KernelSpec::Sum(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
            KernelSpec::Product(a, b) => {
                match **a {
                    KernelSpec::Sum(..) => write!(f, "({a})")?,
                    _ => write!(f, "{a}")?,
                }
                f.write_str(" * ")?;
                match **b {
                    KernelSpec::Leaf(_) => write!(f, "{b}"),
                    _ => write!(f, "({b})"),
                }
            }
        }
    }
}

impl fmt::Display for MeanSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeanSpec::Zero => f.write_str("zero"),
            MeanSpec::Constant { c, trainable } => write!(f, "constant(c={c}, trainable={trainable})"),
            MeanSpec::Linear { a, b, trainable } => write!(f, "linear(a={a}, b={b}, trainable={trainable})"),
        }
    }
}

/// Canonical form: every argument explicit, keys sorted, shortest
/// round-tripping decimals.
impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kernel)?;
        if self.mean != MeanSpec::Zero {
            write!(f, "; mean={}", self.mean)?;
        }
        write!(f, "; likelihood(init={}, trainable={})", self.likelihood.init, self.likelihood.trainable)
    }
}

pub fn format(spec: &ModelSpec) -> String {
    spec.to_string()
}

impl KernelSpec {
    pub fn to_kernel<T: Scalar>(&self) -> Kernel<T> {
        match self {
            KernelSpec::Leaf(l) => {
                let p = |v: f64| Param::new(T::lit(v)).with_trainable(l.trainable);
                match l.kind {
                    LeafKind::Constant => Kernel::Constant { variance: p(l.variance) },
                    LeafKind::White => Kernel::White { variance: p(l.variance) },
                    LeafKind::Linear => Kernel::Linear { variance: p(l.variance) },
                    LeafKind::Se => {
                        Kernel::SquaredExponential { variance: p(l.variance), lengthscale: p(l.lengthscale) }
                    }
                    LeafKind::Rq => Kernel::RationalQuadratic {
                        variance: p(l.variance),
                        lengthscale: p(l.lengthscale),
                        alpha: p(l.alpha),
                    },
                    LeafKind::Matern(order) => {
                        Kernel::Matern { order, variance: p(l.variance), lengthscale: p(l.lengthscale) }
                    }
                }
            }
            KernelSpec::Sum(a, b) => Kernel::sum(a.to_kernel(), b.to_kernel()),
            KernelSpec::Product(a, b) => Kernel::product(a.to_kernel(), b.to_kernel()),
        }
    }

    /// Inverse of [`to_kernel`](Self::to_kernel). Fails if a leaf mixes
    /// trainable and fixed parameters, which the text form cannot express.
    pub fn from_kernel<T: Scalar>(k: &Kernel<T>) -> Result<Self> {
        let uniform = |ps: &[&Param<T>]| -> Result<bool> {
            let t = ps[0].trainable;
            if ps.iter().all(|p| p.trainable == t) {
                Ok(t)
            } else {
                Err(GpError::InvalidModel(format!("`{}` mixes trainable and fixed parameters", k.node_name())))
            }
        };
        let leaf = |kind, v: &Param<T>, l: Option<&Param<T>>, a: Option<&Param<T>>| -> Result<Self> {
            let all: Vec<&Param<T>> = [Some(v), l, a].into_iter().flatten().collect();
            Ok(KernelSpec::Leaf(LeafSpec {
                kind,
                variance: v.value.as_f64(),
                lengthscale: l.map_or(1.0, |p| p.value.as_f64()),
                alpha: a.map_or(1.0, |p| p.value.as_f64()),
                trainable: uniform(&all)?,
            }))
        };
        match k {
            Kernel::Constant { variance } => leaf(LeafKind::Constant, variance, None, None),
            Kernel::White { variance } => leaf(LeafKind::White, variance, None, None),
            Kernel::Linear { variance } => leaf(LeafKind::Linear, variance, None, None),
            Kernel::SquaredExponential { variance, lengthscale } => {
                leaf(LeafKind::Se, variance, Some(lengthscale), None)
            }
            Kernel::RationalQuadratic { variance, lengthscale, alpha } => {
                leaf(LeafKind::Rq, variance, Some(lengthscale), Some(alpha))
            }
            Kernel::Matern { order, variance, lengthscale } => {
                leaf(LeafKind::Matern(*order), variance, Some(lengthscale), None)
            }
            Kernel::Sum(a, b) => Ok(KernelSpec::Sum(Box::new(Self::from_kernel(a)?), Box::new(Self::from_kernel(b)?))),
            Kernel::Product(a, b) => {
                Ok(KernelSpec::Product(Box::new(Self::from_kernel(a)?), Box::new(Self::from_kernel(b)?)))
            }
        }
    }
}

impl MeanSpec {
    pub fn to_mean<T: Scalar>(&self) -> MeanFn<T> {
        match *self {
            MeanSpec::Zero => MeanFn::Zero,
            MeanSpec::Constant { c, trainable } => MeanFn::Constant { c: Coef { value: T::lit(c), trainable } },
            MeanSpec::Linear { a, b, trainable } => MeanFn::Linear {
                slope: Coef { value: T::lit(a), trainable },
                intercept: Coef { value: T::lit(b), trainable },
            },
        }
    }

    pub fn from_mean<T: Scalar>(m: &MeanFn<T>) -> Result<Self> {
        Ok(match m {
            MeanFn::Zero => MeanSpec::Zero,
            MeanFn::Constant { c } => MeanSpec::Constant { c: c.value.as_f64(), trainable: c.trainable },
            MeanFn::Linear { slope, intercept } => {
                if slope.trainable != intercept.trainable {
                    return Err(GpError::InvalidModel("linear mean mixes trainable and fixed coefficients".into()));
                }
                MeanSpec::Linear { a: slope.value.as_f64(), b: intercept.value.as_f64(), trainable: slope.trainable }
            }
        })
    }
}

impl ModelSpec {
    /// Model hyperparameters as a spec, e.g. to persist trained values.
    pub fn from_model<T: Scalar>(model: &GpModel<T>) -> Result<Self> {
        let lik = model.likelihood_variance();
        Ok(Self {
            kernel: KernelSpec::from_kernel(model.kernel())?,
            mean: MeanSpec::from_mean(model.mean())?,
            likelihood: LikelihoodSpec { init: lik.value.as_f64(), trainable: lik.trainable },
        })
    }

    pub fn num_trainable(&self) -> usize {
        let k: Kernel<f64> = self.kernel.to_kernel();
        let m: MeanFn<f64> = self.mean.to_mean();
        k.num_trainable() + usize::from(self.likelihood.trainable) + m.num_trainable()
    }

    pub fn likelihood_param<T: Scalar>(&self) -> Param<T> {
        Param::new(T::lit(self.likelihood.init)).with_trainable(self.likelihood.trainable)
    }
}

/// Instantiates the spec on a dataset.
pub fn build<T: Scalar>(spec: &ModelSpec, data: &CoordinateDataset<T>) -> Result<GpModel<T>> {
    GpModel::new(spec.kernel.to_kernel(), spec.mean.to_mean(), spec.likelihood_param(), data.x.clone(), data.y.clone())
}
