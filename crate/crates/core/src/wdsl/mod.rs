//! Expression language for Weierstrass data `dh = f(G) dG`.
//!
//! Sources are parsed into an [`Expr`] tree, compiled with their parameter
//! values, and scanned for singularities: zeros of polynomial denominators
//! become punctures and zeros of polynomial radicands become branch points.
//! Square roots are evaluated along paths by nearest-root continuation held
//! in a [`BranchState`].

mod expr;
mod parser;
pub(crate) mod poly;

use alloc::collections::BTreeMap;

pub use expr::{Expr, MAX_EXPONENT};

use crate::prelude::*;
use crate::sphere::ExtendedComplex;
use crate::{Error, Result};
use poly::Poly;

/// Points closer than this to a puncture or branch point are not evaluated.
pub const EVAL_EXCLUSION: f64 = 1e-9;
/// Minimum clearance of a continuation path from the singular set.
pub const PATH_CLEARANCE: f64 = 1e-6;
/// Root-finder output closer than this (relative) is merged into one point.
const MERGE_TOLERANCE: f64 = 1e-7;
/// Relative gap below which the two square roots are considered tied.
const TIE_TOLERANCE: f64 = 1e-12;
/// A continuation step is accepted when the chosen root is at most this
/// fraction of the distance to the rejected one.
const STEP_MARGIN: f64 = 0.5;

/// Parameter values by name.
pub type Params = BTreeMap<String, f64>;

/// Explicitly declared singular points, merged with the detected ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Singularities {
    pub punctures: Vec<ExtendedComplex>,
    pub branch_points: Vec<ExtendedComplex>,
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Const(Complex64),
    Var,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, i32),
    Sqrt(usize, Box<Node>),
    Exp(Box<Node>),
}

/// Last value taken by each square-root node along the current path.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BranchState {
    values: Vec<Option<Complex64>>,
}

impl BranchState {
    pub fn values(&self) -> &[Option<Complex64>] {
        &self.values
    }

    /// True when no root has been selected yet (principal branch will be used).
    pub fn is_fresh(&self) -> bool {
        self.values.iter().all(Option::is_none)
    }

    fn fit(&mut self, n: usize) {
        self.values.resize(n, None);
    }
}

/// Weierstrass data: the coefficient `f` of `dh = f(G) dG` with its
/// parameters and singular set. Immutable once built.
#[derive(Debug, Clone)]
pub struct WeierstrassData {
    label: String,
    expr: Expr,
    params: Params,
    punctures: Vec<ExtendedComplex>,
    branch_points: Vec<ExtendedComplex>,
    node: Node,
    sqrt_count: usize,
    finite_punctures: Vec<Complex64>,
    finite_branch_points: Vec<Complex64>,
    origin_form_pole: bool,
}

/// Parses `source` with the given parameter values and detects its singularities.
pub fn parse_weierstrass(source: &str, params: &Params) -> Result<WeierstrassData> {
    WeierstrassData::from_source(source, params, Singularities::default())
}

/// Evaluates `f(G)`, continuing square roots from the values held in `branch`.
pub fn eval(data: &WeierstrassData, g: Complex64, branch: &mut BranchState) -> Result<Complex64> {
    data.eval(g, branch)
}

/// Transports `branch` along the straight segment `segment.0 → segment.1`.
pub fn continue_along(
    data: &WeierstrassData,
    segment: (Complex64, Complex64),
    branch: &BranchState,
    max_step: f64,
) -> Result<BranchState> {
    data.continue_along(segment.0, segment.1, branch, max_step)
}

pub fn parse_expr(source: &str, params: &Params) -> Result<Expr> {
    parse_with_offsets(source, params).map(|(e, _)| e)
}

fn parse_with_offsets(source: &str, params: &Params) -> Result<(Expr, Vec<usize>)> {
    let is_param = |name: &str| !parser::is_reserved(name) && params.contains_key(name);
    let expr = parser::Parser::new(source, &is_param).parse()?;
    let offsets = source.match_indices("sqrt").map(|(k, _)| k).collect();
    Ok((expr, offsets))
}

struct Compiler<'a> {
    params: &'a Params,
    sqrt_count: usize,
}

impl Compiler<'_> {
    fn compile(&mut self, e: &Expr) -> Result<Node> {
        let node = match e {
            Expr::Num(x) => Node::Const(Complex64::new(*x, 0.0)),
            Expr::ImagUnit => Node::Const(I),
            Expr::Pi => Node::Const(Complex64::new(core::f64::consts::PI, 0.0)),
            Expr::Var => Node::Var,
            Expr::Param(name) => match self.params.get(name) {
                Some(v) => Node::Const(Complex64::new(*v, 0.0)),
                None => return Err(Error::UnknownParameter(name.clone())),
            },
            Expr::Neg(a) => fold1(self.compile(a)?, |a| -a, Node::Neg),
            Expr::Add(a, b) => fold2(self.compile(a)?, self.compile(b)?, |a, b| a + b, Node::Add),
            Expr::Sub(a, b) => fold2(self.compile(a)?, self.compile(b)?, |a, b| a - b, Node::Sub),
            Expr::Mul(a, b) => fold2(self.compile(a)?, self.compile(b)?, |a, b| a * b, Node::Mul),
            Expr::Div(a, b) => fold2(self.compile(a)?, self.compile(b)?, |a, b| a / b, Node::Div),
            Expr::Pow(a, n) => {
                let n = *n;
                fold1(self.compile(a)?, |a| a.powi(n), |a| Node::Pow(a, n))
            }
            Expr::Exp(a) => fold1(self.compile(a)?, |a| a.exp(), Node::Exp),
            Expr::Sqrt(a) => match self.compile(a)? {
                Node::Const(c) => Node::Const(c.sqrt()),
                inner => {
                    let id = self.sqrt_count;
                    self.sqrt_count += 1;
                    Node::Sqrt(id, Box::new(inner))
                }
            },
        };
        Ok(node)
    }
}

fn fold1(a: Node, f: impl Fn(Complex64) -> Complex64, wrap: impl Fn(Box<Node>) -> Node) -> Node {
    match a {
        Node::Const(c) => Node::Const(f(c)),
        a => wrap(Box::new(a)),
    }
}

fn fold2(
    a: Node,
    b: Node,
    f: impl Fn(Complex64, Complex64) -> Complex64,
    wrap: impl Fn(Box<Node>, Box<Node>) -> Node,
) -> Node {
    match (a, b) {
        (Node::Const(x), Node::Const(y)) => Node::Const(f(x, y)),
        (a, b) => wrap(Box::new(a), Box::new(b)),
    }
}

fn as_poly(node: &Node) -> Option<Poly> {
    match node {
        Node::Const(c) => Some(Poly::constant(*c)),
        Node::Var => Some(Poly::var()),
        Node::Neg(a) => Some(as_poly(a)?.scale(Complex64::new(-1.0, 0.0))),
        Node::Add(a, b) => Some(as_poly(a)?.add(&as_poly(b)?)),
        Node::Sub(a, b) => Some(as_poly(a)?.add(&as_poly(b)?.scale(Complex64::new(-1.0, 0.0)))),
        Node::Mul(a, b) => Some(as_poly(a)?.mul(&as_poly(b)?)),
        Node::Div(a, b) => match **b {
            Node::Const(c) if c.norm_sqr() > 0.0 => Some(as_poly(a)?.scale(c.inv())),
            _ => None,
        },
        Node::Pow(a, n) if *n >= 0 => Some(as_poly(a)?.powi(*n as u32)),
        _ => None,
    }
}

/// Zeros of a node that make a quotient blow up. Only structurally
/// recognizable factors are found; anything else is left to the caller.
fn zeros_of(node: &Node, out: &mut Vec<Complex64>) {
    if let Some(p) = as_poly(node) {
        out.extend(p.roots());
        return;
    }
    match node {
        Node::Mul(a, b) => {
            zeros_of(a, out);
            zeros_of(b, out);
        }
        Node::Neg(a) | Node::Div(a, _) => zeros_of(a, out),
        Node::Pow(a, n) if *n > 0 => zeros_of(a, out),
        Node::Pow(a, _) => poles_of(a, out),
        _ => {}
    }
}

fn poles_of(node: &Node, out: &mut Vec<Complex64>) {
    match node {
        Node::Div(_, b) => zeros_of(b, out),
        Node::Pow(a, n) if *n < 0 => zeros_of(a, out),
        _ => {}
    }
}

struct Scan<'a> {
    explicit_branches: bool,
    offsets: &'a [usize],
    sqrt_seen: usize,
    punctures: Vec<Complex64>,
    branch_points: Vec<Complex64>,
}

impl Scan<'_> {
    fn scan(&mut self, node: &Node) -> Result<()> {
        match node {
            Node::Const(_) | Node::Var => {}
            Node::Neg(a) | Node::Exp(a) => self.scan(a)?,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => {
                self.scan(a)?;
                self.scan(b)?;
            }
            Node::Div(a, b) => {
                self.scan(a)?;
                self.scan(b)?;
                zeros_of(b, &mut self.punctures);
            }
            Node::Pow(a, n) => {
                self.scan(a)?;
                if *n < 0 {
                    zeros_of(a, &mut self.punctures);
                }
            }
            Node::Sqrt(_, a) => {
                let offset = self.offsets.get(self.sqrt_seen).copied().unwrap_or(0);
                self.sqrt_seen += 1;
                match as_poly(a) {
                    Some(p) => self.branch_points.extend(p.roots()),
                    None if self.explicit_branches => {}
                    None => return Err(Error::NonPolynomialRadicand { offset }),
                }
                self.scan(a)?;
            }
        }
        Ok(())
    }
}

fn merge_points(points: &mut Vec<Complex64>) {
    let mut merged: Vec<Complex64> = Vec::with_capacity(points.len());
    for &p in points.iter() {
        if !p.is_finite() {
            continue;
        }
        if !merged.iter().any(|q| (p - q).norm() <= MERGE_TOLERANCE * (1.0 + q.norm())) {
            merged.push(p);
        }
    }
    *points = merged;
}

fn is_near(p: Complex64, set: &[Complex64]) -> bool {
    set.iter().any(|q| (p - q).norm() <= MERGE_TOLERANCE * (1.0 + q.norm()))
}

fn push_distinct(list: &mut Vec<ExtendedComplex>, p: ExtendedComplex) {
    let dup = list.iter().any(|q| match (q, &p) {
        (ExtendedComplex::Infinity, ExtendedComplex::Infinity) => true,
        (ExtendedComplex::Finite(a), ExtendedComplex::Finite(b)) => (a - b).norm() <= 1e-12 * (1.0 + a.norm()),
        _ => false,
    });
    if !dup {
        list.push(p);
    }
}

/// Outcome of one tracked evaluation.
struct Tracked {
    value: Complex64,
    /// max over square-root nodes of |chosen − previous| / |rejected − previous|
    worst_ratio: f64,
}

impl WeierstrassData {
    /// Parses `source` and combines detected singularities with `explicit` ones.
    /// Explicit branch points lift the polynomial-radicand requirement.
    pub fn from_source(source: &str, params: &Params, explicit: Singularities) -> Result<Self> {
        let (expr, offsets) = parse_with_offsets(source, params)?;
        Self::build(expr, params, explicit, &offsets, source.to_owned())
    }

    /// Builds data from an already constructed tree.
    pub fn from_expr(expr: Expr, params: &Params, explicit: Singularities) -> Result<Self> {
        let label = expr.to_string();
        Self::build(expr, params, explicit, &[], label)
    }

    fn build(expr: Expr, params: &Params, explicit: Singularities, offsets: &[usize], label: String) -> Result<Self> {
        let mut compiler = Compiler { params, sqrt_count: 0 };
        let node = compiler.compile(&expr)?;
        let mut scan = Scan {
            explicit_branches: !explicit.branch_points.is_empty(),
            offsets,
            sqrt_seen: 0,
            punctures: Vec::new(),
            branch_points: Vec::new(),
        };
        scan.scan(&node)?;
        let Scan { mut punctures, mut branch_points, .. } = scan;
        branch_points.extend(explicit.branch_points.iter().filter_map(|p| p.as_finite()));
        merge_points(&mut branch_points);
        punctures.extend(explicit.punctures.iter().filter_map(|p| p.as_finite()));
        merge_points(&mut punctures);
        punctures.retain(|p| !is_near(*p, &branch_points));

        let mut all_branch = Vec::new();
        for p in &branch_points {
            push_distinct(&mut all_branch, ExtendedComplex::Finite(*p));
        }
        for p in explicit.branch_points.iter().filter(|p| p.is_infinite()) {
            push_distinct(&mut all_branch, *p);
        }
        let mut all_punct = Vec::new();
        for p in &punctures {
            push_distinct(&mut all_punct, ExtendedComplex::Finite(*p));
        }
        for p in explicit.punctures.iter().filter(|p| p.is_infinite()) {
            push_distinct(&mut all_punct, *p);
        }

        let mut data = WeierstrassData {
            label,
            expr,
            params: params.clone(),
            punctures: all_punct,
            branch_points: all_branch,
            node,
            sqrt_count: compiler.sqrt_count,
            finite_punctures: punctures,
            finite_branch_points: branch_points,
            origin_form_pole: false,
        };
        let zero = Complex64::new(0.0, 0.0);
        data.origin_form_pole = !data.is_singular(zero)
            && data.eval_principal(zero).map_or(true, |f| f.norm() > 0.0);
        Ok(data)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn punctures(&self) -> &[ExtendedComplex] {
        &self.punctures
    }

    pub fn branch_points(&self) -> &[ExtendedComplex] {
        &self.branch_points
    }

    /// True when `f` contains a non-constant square root.
    pub fn has_branches(&self) -> bool {
        self.sqrt_count > 0
    }

    pub fn sqrt_count(&self) -> usize {
        self.sqrt_count
    }

    /// True when the Weierstrass forms carry a pole at G = 0 (the 1/G factor
    /// is not cancelled by a zero of f there).
    pub fn origin_is_form_pole(&self) -> bool {
        self.origin_form_pole
    }

    pub fn fresh_branch(&self) -> BranchState {
        BranchState { values: vec![None; self.sqrt_count] }
    }

    /// Finite punctures and branch points.
    pub fn finite_singularities(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.finite_punctures.iter().chain(self.finite_branch_points.iter()).copied()
    }

    pub fn finite_punctures(&self) -> &[Complex64] {
        &self.finite_punctures
    }

    pub fn finite_branch_points(&self) -> &[Complex64] {
        &self.finite_branch_points
    }

    /// Distance from `g` to the nearest finite puncture or branch point.
    pub fn singular_distance(&self, g: Complex64) -> (f64, Option<Complex64>) {
        nearest(g, self.finite_singularities())
    }

    fn is_singular(&self, g: Complex64) -> bool {
        self.singular_distance(g).0 < EVAL_EXCLUSION
    }

    fn check_point(&self, g: Complex64) -> Result<()> {
        if !g.is_finite() {
            return Err(Error::PoleEncountered { at: g });
        }
        if nearest(g, self.finite_punctures.iter().copied()).0 < EVAL_EXCLUSION {
            return Err(Error::PoleEncountered { at: g });
        }
        if nearest(g, self.finite_branch_points.iter().copied()).0 < EVAL_EXCLUSION {
            return Err(Error::BranchPointEncountered { at: g });
        }
        Ok(())
    }

    /// `f(G)` with the branch dictated by `branch`; records the roots used.
    pub fn eval(&self, g: Complex64, branch: &mut BranchState) -> Result<Complex64> {
        self.check_point(g)?;
        branch.fit(self.sqrt_count);
        Ok(self.eval_tracked(g, &mut branch.values)?.value)
    }

    /// `f(G)` continued from `reference` without modifying it.
    pub fn eval_from(&self, g: Complex64, reference: &BranchState) -> Result<Complex64> {
        let mut b = reference.clone();
        self.eval(g, &mut b)
    }

    /// `f(G)` on the principal branch of every square root.
    pub fn eval_principal(&self, g: Complex64) -> Result<Complex64> {
        let mut b = self.fresh_branch();
        self.eval(g, &mut b)
    }

    /// `|f(G)|`, which does not depend on the branch.
    pub fn abs_f(&self, g: Complex64) -> Result<f64> {
        self.eval_principal(g).map(|f| f.norm())
    }

    fn eval_tracked(&self, g: Complex64, state: &mut [Option<Complex64>]) -> Result<Tracked> {
        let mut worst = 0.0;
        let value = eval_node(&self.node, g, state, &mut worst)?;
        if !value.is_finite() {
            return Err(Error::PoleEncountered { at: g });
        }
        Ok(Tracked { value, worst_ratio: worst })
    }

    /// Checks the clearance of the segment `a → b` from the singular set.
    pub fn check_segment(&self, a: Complex64, b: Complex64) -> Result<()> {
        for p in self.finite_singularities() {
            let d = segment_distance(p, a, b);
            if d < PATH_CLEARANCE {
                return Err(Error::SegmentTooClose { distance: d, near: p });
            }
        }
        Ok(())
    }

    /// Transports `branch` along the segment `a → b` with steps no longer than
    /// `max_step` and half the distance to the nearest branch point.
    pub fn continue_along(&self, a: Complex64, b: Complex64, branch: &BranchState, max_step: f64) -> Result<BranchState> {
        self.check_segment(a, b)?;
        let d = b - a;
        let length = d.norm();
        self.walk(&|s| a + d * s, length, branch, max_step, false, |_, _, _| Ok(()))
    }

    /// Walks a parameterized path `point(s)`, `s ∈ [0, 1]`, of the given
    /// length, choosing steps by the clearance rules and calling
    /// `on_step(s0, s1, state_at_s0)` for every accepted step. With
    /// `include_poles` the step is also limited by the distance to punctures
    /// and to a pole of the forms at the origin.
    pub(crate) fn walk<F>(
        &self,
        point: &dyn Fn(f64) -> Complex64,
        length: f64,
        start: &BranchState,
        max_step: f64,
        include_poles: bool,
        mut on_step: F,
    ) -> Result<BranchState>
    where
        F: FnMut(f64, f64, &BranchState) -> Result<()>,
    {
        let mut state = start.clone();
        state.fit(self.sqrt_count);
        let z0 = point(0.0);
        if self.sqrt_count > 0 && state.values.iter().any(Option::is_none) {
            self.check_point(z0)?;
            self.eval_tracked(z0, &mut state.values)?;
        }
        if !(length > 0.0) {
            return Ok(state);
        }
        let max_step = if max_step > 0.0 { max_step } else { length };
        let mut s = 0.0;
        while s < 1.0 {
            let z = point(s);
            let mut limit = max_step;
            if self.sqrt_count > 0 || include_poles {
                let (db, _) = nearest(z, self.finite_branch_points.iter().copied());
                limit = limit.min(0.5 * db);
            }
            if include_poles {
                let (dp, _) = nearest(z, self.finite_punctures.iter().copied());
                limit = limit.min(0.5 * dp);
                if self.origin_form_pole {
                    limit = limit.min(0.5 * z.norm());
                }
            }
            let mut ds = (limit / length).min(1.0 - s);
            loop {
                let s1 = if s + ds >= 1.0 { 1.0 } else { s + ds };
                if self.sqrt_count == 0 {
                    on_step(s, s1, &state)?;
                    s = s1;
                    break;
                }
                let z1 = point(s1);
                self.check_point(z1)?;
                let mut trial = state.clone();
                let tracked = self.eval_tracked(z1, &mut trial.values);
                match tracked {
                    Ok(t) if t.worst_ratio <= STEP_MARGIN => {
                        on_step(s, s1, &state)?;
                        state = trial;
                        s = s1;
                        break;
                    }
                    Ok(_) | Err(Error::BranchAmbiguity { .. }) => {
                        ds *= 0.5;
                        if ds * length < 1e-14 * (1.0 + z.norm()) {
                            return Err(Error::BranchAmbiguity { at: z });
                        }
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(state)
    }
}

fn nearest(g: Complex64, points: impl Iterator<Item = Complex64>) -> (f64, Option<Complex64>) {
    points.fold((f64::INFINITY, None), |(best, at), p| {
        let d = (g - p).norm();
        if d < best {
            (d, Some(p))
        } else {
            (best, at)
        }
    })
}

/// Euclidean distance from `p` to the segment `a → b`.
pub fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a) * d.conj()).re / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

fn eval_node(node: &Node, g: Complex64, state: &mut [Option<Complex64>], worst: &mut f64) -> Result<Complex64> {
    Ok(match node {
        Node::Const(c) => *c,
        Node::Var => g,
        Node::Neg(a) => -eval_node(a, g, state, worst)?,
        Node::Add(a, b) => eval_node(a, g, state, worst)? + eval_node(b, g, state, worst)?,
        Node::Sub(a, b) => eval_node(a, g, state, worst)? - eval_node(b, g, state, worst)?,
        Node::Mul(a, b) => eval_node(a, g, state, worst)? * eval_node(b, g, state, worst)?,
        Node::Div(a, b) => {
            let num = eval_node(a, g, state, worst)?;
            let den = eval_node(b, g, state, worst)?;
            if den.norm_sqr() == 0.0 {
                return Err(Error::PoleEncountered { at: g });
            }
            num / den
        }
        Node::Pow(a, n) => {
            let base = eval_node(a, g, state, worst)?;
            if *n < 0 && base.norm_sqr() == 0.0 {
                return Err(Error::PoleEncountered { at: g });
            }
            base.powi(*n)
        }
        Node::Exp(a) => eval_node(a, g, state, worst)?.exp(),
        Node::Sqrt(id, a) => {
            let root = eval_node(a, g, state, worst)?.sqrt();
            let chosen = match state[*id] {
                None => root,
                Some(prev) => {
                    let d_plus = (root - prev).norm();
                    let d_minus = (root + prev).norm();
                    if (d_plus - d_minus).abs() <= TIE_TOLERANCE * (d_plus + d_minus) {
                        return Err(Error::BranchAmbiguity { at: g });
                    }
                    let (chosen, near, far) =
                        if d_plus < d_minus { (root, d_plus, d_minus) } else { (-root, d_minus, d_plus) };
                    *worst = f64::max(*worst, near / far);
                    chosen
                }
            };
            state[*id] = Some(chosen);
            chosen
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn params(pairs: &[(&str, f64)]) -> Params {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn has_point(list: &[ExtendedComplex], z: Complex64) -> bool {
        list.iter().any(|p| p.as_finite().map_or(false, |q| (q - z).norm() < 1e-12))
    }

    #[test]
    fn scherk_denominator_punctures() {
        let data = parse_weierstrass("G/(G^4-1)", &Params::new()).unwrap();
        assert_eq!(data.punctures().len(), 4);
        for z in [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)] {
            assert!(has_point(data.punctures(), z));
        }
        assert!(data.branch_points().is_empty());
        let f = data.eval_principal(c(2.0, 0.0)).unwrap();
        assert!((f - c(2.0 / 15.0, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn tp_radicand_branch_points() {
        let data = parse_weierstrass("G/sqrt(G^8+lambda*G^4+1)", &params(&[("lambda", 14.0)])).unwrap();
        assert_eq!(data.branch_points().len(), 8);
        assert!(data.punctures().is_empty());
        for p in data.finite_branch_points() {
            let v = p.powi(8) + 14.0 * p.powi(4) + 1.0;
            assert!(v.norm() < 1e-11, "{}", v);
        }
        let f = data.eval_principal(c(2.0, 0.0)).unwrap();
        let expected = 2.0 / 481f64.sqrt();
        assert!((f.re - expected).abs() < 1e-16 && f.im.abs() < 1e-16);
    }

    #[test]
    fn double_root_denominator_is_one_puncture_per_zero() {
        let data = parse_weierstrass("G/(G^2-1)^2", &Params::new()).unwrap();
        assert_eq!(data.punctures().len(), 2);
    }

    #[test]
    fn catenoid_puncture_at_origin() {
        let data = parse_weierstrass("1/G", &Params::new()).unwrap();
        assert!(has_point(data.punctures(), c(0.0, 0.0)));
        assert!(!data.origin_is_form_pole());
        let enneper = parse_weierstrass("G", &Params::new()).unwrap();
        assert!(!enneper.origin_is_form_pole());
        let jm = parse_weierstrass("1/(G^2-1)^2", &Params::new()).unwrap();
        assert!(jm.origin_is_form_pole());
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        match parse_weierstrass("G/(", &Params::new()) {
            Err(Error::Syntax { offset, expected }) => {
                assert_eq!(offset, 3);
                assert!(!expected.is_empty());
            }
            other => panic!("{:?}", other),
        }
        assert!(matches!(parse_weierstrass("G^65", &Params::new()), Err(Error::Syntax { .. })));
        assert!(matches!(parse_weierstrass("G G", &Params::new()), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_weierstrass("sqrt G", &Params::new()), Err(Error::Syntax { .. })));
    }

    #[test]
    fn unknown_parameter() {
        assert_eq!(
            parse_weierstrass("G*mu", &Params::new()).unwrap_err(),
            Error::UnknownParameter("mu".into())
        );
    }

    #[test]
    fn non_polynomial_radicand() {
        let err = parse_weierstrass("G/sqrt(1/G + G)", &Params::new()).unwrap_err();
        assert_eq!(err, Error::NonPolynomialRadicand { offset: 2 });
        let explicit = Singularities {
            punctures: vec![ExtendedComplex::Finite(c(0.0, 0.0))],
            branch_points: vec![ExtendedComplex::Finite(c(0.0, 1.0)), ExtendedComplex::Finite(c(0.0, -1.0))],
        };
        let data = WeierstrassData::from_source("G/sqrt(1/G + G)", &Params::new(), explicit).unwrap();
        assert_eq!(data.branch_points().len(), 2);
    }

    #[test]
    fn unary_minus_binds_to_base() {
        let data = parse_weierstrass("-G^2", &Params::new()).unwrap();
        let f = data.eval_principal(c(3.0, 0.0)).unwrap();
        assert_eq!(f, c(9.0, 0.0));
        let data = parse_weierstrass("-(G^2)", &Params::new()).unwrap();
        assert_eq!(data.eval_principal(c(3.0, 0.0)).unwrap(), c(-9.0, 0.0));
    }

    #[test]
    fn pole_and_branch_point_errors() {
        let data = parse_weierstrass("G/(G^4-1)", &Params::new()).unwrap();
        assert!(matches!(data.eval_principal(c(0.0, 1.0)), Err(Error::PoleEncountered { .. })));
        let data = parse_weierstrass("sqrt(G)", &Params::new()).unwrap();
        assert!(matches!(data.eval_principal(c(0.0, 0.0)), Err(Error::BranchPointEncountered { .. })));
    }

    #[test]
    fn branch_tie_is_an_error() {
        let data = parse_weierstrass("sqrt(G)", &Params::new()).unwrap();
        let mut b = data.fresh_branch();
        data.eval(c(1.0, 0.0), &mut b).unwrap();
        // sqrt(-1) = ±i is equidistant from the previous value 1
        assert!(matches!(data.eval(c(-1.0, 0.0), &mut b), Err(Error::BranchAmbiguity { .. })));
    }

    fn polygon(data: &WeierstrassData, pts: &[Complex64], start: &BranchState) -> BranchState {
        let mut b = start.clone();
        for w in pts.windows(2) {
            b = data.continue_along(w[0], w[1], &b, 0.1).unwrap();
        }
        b
    }

    fn arc(from: f64, to: f64, n: usize) -> Vec<Complex64> {
        (0..=n).map(|k| Complex64::from_polar(1.0, from + (to - from) * k as f64 / n as f64)).collect()
    }

    #[test]
    fn square_root_monodromy() {
        let data = parse_weierstrass("sqrt(G)", &Params::new()).unwrap();
        let start = data.fresh_branch();
        let upper = polygon(&data, &arc(0.0, PI, 32), &start);
        let v = upper.values()[0].unwrap();
        assert!((v - c(0.0, 1.0)).norm() < 1e-12, "{}", v);
        let full = polygon(&data, &arc(PI, 2.0 * PI, 32), &upper);
        let v = full.values()[0].unwrap();
        assert!((v - c(-1.0, 0.0)).norm() < 1e-12, "{}", v);
        let mut b = full.clone();
        let f = data.eval(Complex64::from_polar(1.0, 2.0 * PI), &mut b).unwrap();
        assert!((f + 1.0).norm() < 1e-12);
    }

    #[test]
    fn zero_length_segment_keeps_state() {
        let data = parse_weierstrass("G/sqrt(G^8+14*G^4+1)", &Params::new()).unwrap();
        let mut b = data.fresh_branch();
        data.eval(c(0.3, 0.1), &mut b).unwrap();
        let moved = data.continue_along(c(0.3, 0.1), c(0.3, 0.1), &b, 0.1).unwrap();
        assert_eq!(moved, b);
    }

    #[test]
    fn segment_through_branch_point_rejected() {
        let data = parse_weierstrass("sqrt(G^2-1)", &Params::new()).unwrap();
        let b = data.fresh_branch();
        let err = data.continue_along(c(0.0, 0.0), c(2.0, 0.0), &b, 0.1).unwrap_err();
        assert!(matches!(err, Error::SegmentTooClose { .. }));
    }

    #[test]
    fn constant_sqrt_is_folded() {
        let data = parse_weierstrass("sqrt(2)*G", &Params::new()).unwrap();
        assert!(!data.has_branches());
        assert!(data.branch_points().is_empty());
    }

    #[test]
    fn complex_parameters_through_exp() {
        let p = params(&[("theta", 0.3)]);
        let data = parse_weierstrass("G/((G^2-exp(2*i*theta))*(G^2-exp(-2*i*theta)))", &p).unwrap();
        assert_eq!(data.punctures().len(), 4);
        assert!(has_point(data.punctures(), Complex64::from_polar(1.0, 0.3)));
        assert!(has_point(data.punctures(), Complex64::from_polar(1.0, -0.3 + PI)));
    }
}
