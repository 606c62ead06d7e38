//! Even functions built from Laguerre–Gaussian eigenfunctions, ball-union
//! autocorrelations and their transforms, closed under sums, dilation and
//! the Fourier transform.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{autocorr_eval, autocorr_ft_eval, norm, BallUnion};
use crate::special::{laguerre, laguerre_all};

/// Expression tree. All nodes of one tree live in the dimension stored on
/// the owning [`EvenFunction`].
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    /// e_k(x) = L_k^{(n/2-1)}(2π‖x‖²) e^{-π‖x‖²}, with transform (−1)^k e_k.
    Eigen(usize),
    Sum(Vec<(f64, Node)>),
    /// x ↦ inner(c·x)
    Dilate(f64, Box<Node>),
    /// x ↦ μ(S ∩ (S + x))
    Autocorr(BallUnion),
    /// x ↦ |1̂_S(x)|²
    FtSquared(BallUnion),
    FourierOf(Box<Node>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvenFunction {
    dim: usize,
    node: Node,
}

impl EvenFunction {
    pub fn from_node(dim: usize, node: Node) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(dim));
        }
        validate(dim, &node)?;
        Ok(Self { dim, node })
    }

    pub fn eigen(dim: usize, k: usize) -> Result<Self> {
        Self::from_node(dim, Node::Eigen(k))
    }

    /// Σ a_k e_k over the given coefficients.
    pub fn eigen_sum(dim: usize, coeffs: &[f64]) -> Result<Self> {
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(k, &a)| (a, Node::Eigen(k)))
            .collect();
        Self::from_node(dim, Node::Sum(terms))
    }

    pub fn autocorr(set: BallUnion) -> Self {
        Self {
            dim: set.dim(),
            node: Node::Autocorr(set),
        }
    }

    pub fn ft_squared(set: BallUnion) -> Self {
        Self {
            dim: set.dim(),
            node: Node::FtSquared(set),
        }
    }

    pub fn sum(terms: Vec<(f64, EvenFunction)>) -> Result<Self> {
        let dim = terms
            .first()
            .map(|t| t.1.dim)
            .ok_or_else(|| Error::InvalidParameter("empty sum".into()))?;
        let mut nodes = Vec::with_capacity(terms.len());
        for (c, f) in terms {
            if f.dim != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: f.dim,
                });
            }
            nodes.push((c, f.node));
        }
        Self::from_node(dim, Node::Sum(nodes))
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::from_node(self.dim, Node::Sum(vec![(c, self.node.clone())]))
    }

    /// Unevaluated transform node.
    pub fn fourier_of(&self) -> Self {
        Self {
            dim: self.dim,
            node: Node::FourierOf(Box::new(self.node.clone())),
        }
    }

    /// x ↦ f(c·x). Unit dilations vanish and nested dilations compose.
    pub fn dilate(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidParameter(format!("dilation factor {c}")));
        }
        Ok(Self {
            dim: self.dim,
            node: dilate_node(c, self.node.clone()),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    /// Closed-form transform as a new expression, simplified.
    pub fn fourier_exact(&self) -> Self {
        let ft = transform_node(self.dim, &self.node);
        Self {
            dim: self.dim,
            node: simplify(ft),
        }
    }

    /// Structural simplification: flattened sums, dilations pushed to atoms.
    pub fn simplified(&self) -> Self {
        Self {
            dim: self.dim,
            node: simplify(self.node.clone()),
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.check(x)?;
        eval_node(self.dim, &self.node, x, false)
    }

    /// f̂(ξ) evaluated through the transform rules without building the tree.
    pub fn evaluate_transform(&self, xi: &[f64]) -> Result<f64> {
        self.check(xi)?;
        eval_node(self.dim, &self.node, xi, true)
    }

    /// True when every geometric atom is a single ball, so the function depends only on ‖x‖.
    pub fn is_radial(&self) -> bool {
        fn walk(node: &Node) -> bool {
            match node {
                Node::Eigen(_) => true,
                Node::Sum(t) => t.iter().all(|(_, n)| walk(n)),
                Node::Dilate(_, n) | Node::FourierOf(n) => walk(n),
                Node::Autocorr(s) | Node::FtSquared(s) => s.is_radial(),
            }
        }
        walk(&self.node)
    }

    /// Value at any point of length `s`.
    pub fn evaluate_radial(&self, s: f64) -> Result<f64> {
        if !self.is_radial() {
            return Err(Error::NotRadial);
        }
        self.evaluate(&axis_point(self.dim, s))
    }

    pub fn evaluate_transform_radial(&self, s: f64) -> Result<f64> {
        if !self.is_radial() {
            return Err(Error::NotRadial);
        }
        self.evaluate_transform(&axis_point(self.dim, s))
    }

    /// Flattened form for fast repeated evaluation of f (or of f̂ when `transform`).
    pub fn expansion(&self, transform: bool) -> Expansion {
        let mut e = Expansion {
            dim: self.dim,
            groups: Vec::new(),
            geometric: Vec::new(),
        };
        e.absorb(self.dim, &self.node, 1.0, 1.0, transform);
        e
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }
}

pub(crate) fn axis_point(dim: usize, s: f64) -> Vec<f64> {
    let mut p = vec![0.0; dim];
    p[0] = s;
    p
}

fn validate(dim: usize, node: &Node) -> Result<()> {
    match node {
        Node::Eigen(_) => Ok(()),
        Node::Sum(terms) => {
            if terms.is_empty() {
                return Err(Error::InvalidParameter("empty sum".into()));
            }
            for (c, n) in terms {
                if !c.is_finite() {
                    return Err(Error::InvalidParameter(format!("coefficient {c}")));
                }
                validate(dim, n)?;
            }
            Ok(())
        }
        Node::Dilate(c, n) => {
            if !(*c > 0.0) || !c.is_finite() {
                return Err(Error::InvalidParameter(format!("dilation factor {c}")));
            }
            validate(dim, n)
        }
        Node::Autocorr(s) | Node::FtSquared(s) => {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: s.dim(),
                });
            }
            Ok(())
        }
        Node::FourierOf(n) => validate(dim, n),
    }
}

fn dilate_node(c: f64, node: Node) -> Node {
    if c == 1.0 {
        return node;
    }
    match node {
        Node::Dilate(inner_c, inner) => {
            let total = c * inner_c;
            if total == 1.0 {
                *inner
            } else {
                Node::Dilate(total, inner)
            }
        }
        other => Node::Dilate(c, Box::new(other)),
    }
}

fn transform_node(dim: usize, node: &Node) -> Node {
    match node {
        Node::Eigen(k) => {
            if k % 2 == 0 {
                Node::Eigen(*k)
            } else {
                Node::Sum(vec![(-1.0, Node::Eigen(*k))])
            }
        }
        Node::Sum(terms) => Node::Sum(
            terms
                .iter()
                .map(|(c, n)| (*c, transform_node(dim, n)))
                .collect(),
        ),
        Node::Dilate(c, inner) => Node::Sum(vec![(
            c.powi(-(dim as i32)),
            dilate_node(1.0 / c, transform_node(dim, inner)),
        )]),
        Node::Autocorr(s) => Node::FtSquared(s.clone()),
        Node::FtSquared(s) => Node::Autocorr(s.clone()),
        Node::FourierOf(inner) => (**inner).clone(),
    }
}

fn simplify(node: Node) -> Node {
    match node {
        Node::Sum(terms) => {
            let mut flat = Vec::new();
            for (c, n) in terms {
                match simplify(n) {
                    Node::Sum(inner) => flat.extend(inner.into_iter().map(|(a, m)| (c * a, m))),
                    other => flat.push((c, other)),
                }
            }
            if flat.len() == 1 && flat[0].0 == 1.0 {
                flat.pop().unwrap().1
            } else {
                Node::Sum(flat)
            }
        }
        Node::Dilate(c, inner) => match simplify(*inner) {
            Node::Sum(terms) => Node::Sum(
                terms
                    .into_iter()
                    .map(|(a, n)| (a, simplify(dilate_node(c, n))))
                    .collect(),
            ),
            other => dilate_node(c, other),
        },
        Node::FourierOf(inner) => Node::FourierOf(Box::new(simplify(*inner))),
        atom => atom,
    }
}

fn eigen_value(dim: usize, k: usize, r2: f64) -> f64 {
    let alpha = dim as f64 / 2.0 - 1.0;
    laguerre(k, alpha, 2.0 * PI * r2) * (-PI * r2).exp()
}

fn eval_node(dim: usize, node: &Node, x: &[f64], transform: bool) -> Result<f64> {
    match node {
        Node::Eigen(k) => {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            let v = eigen_value(dim, *k, r2);
            Ok(if transform && k % 2 == 1 { -v } else { v })
        }
        Node::Sum(terms) => {
            let mut total = 0.0;
            for (c, n) in terms {
                total += c * eval_node(dim, n, x, transform)?;
            }
            Ok(total)
        }
        Node::Dilate(c, inner) => {
            if transform {
                let y: Vec<f64> = x.iter().map(|v| v / c).collect();
                Ok(c.powi(-(dim as i32)) * eval_node(dim, inner, &y, true)?)
            } else {
                let y: Vec<f64> = x.iter().map(|v| v * c).collect();
                eval_node(dim, inner, &y, false)
            }
        }
        Node::Autocorr(s) => {
            if transform {
                autocorr_ft_eval(s, x)
            } else {
                autocorr_eval(s, x)
            }
        }
        Node::FtSquared(s) => {
            if transform {
                autocorr_eval(s, x)
            } else {
                autocorr_ft_eval(s, x)
            }
        }
        Node::FourierOf(inner) => eval_node(dim, inner, x, !transform),
    }
}

/// Σ a_k e_k(c·x) for one dilation c.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenGroup {
    pub dilation: f64,
    pub coeffs: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometricKind {
    Autocorr,
    FtSquared,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeometricTerm {
    pub coef: f64,
    pub dilation: f64,
    pub kind: GeometricKind,
    pub set: BallUnion,
}

/// Linear combination of dilated atoms equal to the expression it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    dim: usize,
    groups: Vec<EigenGroup>,
    geometric: Vec<GeometricTerm>,
}

impl Expansion {
    fn absorb(&mut self, dim: usize, node: &Node, coef: f64, dil: f64, transform: bool) {
        match node {
            Node::Eigen(k) => {
                let sign = if transform && k % 2 == 1 { -1.0 } else { 1.0 };
                let group = match self.groups.iter_mut().position(|g| g.dilation == dil) {
                    Some(i) => &mut self.groups[i],
                    None => {
                        self.groups.push(EigenGroup {
                            dilation: dil,
                            coeffs: Vec::new(),
                        });
                        self.groups.last_mut().unwrap()
                    }
                };
                if group.coeffs.len() <= *k {
                    group.coeffs.resize(k + 1, 0.0);
                }
                group.coeffs[*k] += sign * coef;
            }
            Node::Sum(terms) => {
                for (c, n) in terms {
                    self.absorb(dim, n, coef * c, dil, transform);
                }
            }
            Node::Dilate(c, inner) => {
                if transform {
                    self.absorb(dim, inner, coef * c.powi(-(dim as i32)), dil / c, true)
                } else {
                    self.absorb(dim, inner, coef, dil * c, false)
                }
            }
            Node::Autocorr(s) | Node::FtSquared(s) => {
                let is_auto = matches!(node, Node::Autocorr(_)) != transform;
                let kind = if is_auto {
                    GeometricKind::Autocorr
                } else {
                    GeometricKind::FtSquared
                };
                self.geometric.push(GeometricTerm {
                    coef,
                    dilation: dil,
                    kind,
                    set: s.clone(),
                });
            }
            Node::FourierOf(inner) => self.absorb(dim, inner, coef, dil, !transform),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn groups(&self) -> &[EigenGroup] {
        &self.groups
    }

    pub fn geometric(&self) -> &[GeometricTerm] {
        &self.geometric
    }

    pub fn is_radial(&self) -> bool {
        self.geometric.iter().all(|g| g.set.is_radial())
    }

    /// The eigen coefficient vector when the expansion is a single undilated eigen group.
    pub fn plain_coefficients(&self) -> Option<&[f64]> {
        match (self.groups.as_slice(), self.geometric.is_empty()) {
            ([g], true) if g.dilation == 1.0 => Some(&g.coeffs),
            _ => None,
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let r = norm(x);
        let mut total = self.eval_groups(r);
        for g in &self.geometric {
            if g.coef == 0.0 {
                continue;
            }
            let y: Vec<f64> = x.iter().map(|v| v * g.dilation).collect();
            let v = match g.kind {
                GeometricKind::Autocorr => autocorr_eval(&g.set, &y)?,
                GeometricKind::FtSquared => autocorr_ft_eval(&g.set, &y)?,
            };
            total += g.coef * v;
        }
        Ok(total)
    }

    /// Value at length `s` along the first axis (the function's value at every
    /// point of that length when radial).
    pub fn eval_axis(&self, s: f64) -> Result<f64> {
        self.eval(&axis_point(self.dim, s))
    }

    fn eval_groups(&self, r: f64) -> f64 {
        let alpha = self.dim as f64 / 2.0 - 1.0;
        let mut total = 0.0;
        for g in &self.groups {
            if g.coeffs.is_empty() {
                continue;
            }
            let r2 = (g.dilation * r).powi(2);
            let ls = laguerre_all(g.coeffs.len() - 1, alpha, 2.0 * PI * r2);
            let poly: f64 = g.coeffs.iter().zip(&ls).map(|(a, l)| a * l).sum();
            total += poly * (-PI * r2).exp();
        }
        total
    }

    /// Certifies `sign · f ≤ 0` for all ‖x‖ beyond a finite radius.
    pub fn tail_certificate(&self, sign: f64) -> TailCertificate {
        self.certify_tail(sign, None)
    }

    /// Like [`Expansion::tail_certificate`], but an eigen group whose leading
    /// coefficient has the wrong sign may instead be bounded in absolute value by
    /// tol/(number of groups) beyond some radius. The result then certifies
    /// `sign · f ≤ tol` and is not strict.
    pub fn tail_certificate_within(&self, sign: f64, tol: f64) -> TailCertificate {
        self.certify_tail(sign, Some(tol))
    }

    fn certify_tail(&self, sign: f64, tol: Option<f64>) -> TailCertificate {
        let alpha = self.dim as f64 / 2.0 - 1.0;
        let mut radius = 0.0f64;
        let mut strict = true;
        let mut any_group = false;
        let budget = tol.map(|t| t / self.groups.len().max(1) as f64);
        for g in &self.groups {
            let coeffs: Vec<f64> = g.coeffs.iter().map(|a| a * sign).collect();
            let Some(top) = coeffs.iter().rposition(|a| *a != 0.0) else {
                continue;
            };
            let mono = monomial_coefficients(&coeffs[..=top], alpha);
            let lead = mono[top];
            let y0 = if lead < 0.0 {
                dominance_threshold(&mono)
            } else if let Some(b) = budget.filter(|b| *b > 0.0) {
                strict = false;
                envelope_threshold(&mono, b)
            } else {
                return TailCertificate::Unavailable(format!(
                    "eigen group at dilation {} grows positive (leading coefficient {lead:e})",
                    g.dilation
                ));
            };
            radius = radius.max((y0 / (2.0 * PI)).sqrt() / g.dilation);
            any_group = true;
        }
        strict &= any_group;
        for g in &self.geometric {
            let c = g.coef * sign;
            if c == 0.0 {
                continue;
            }
            match g.kind {
                GeometricKind::Autocorr => radius = radius.max(g.set.support_radius() / g.dilation),
                GeometricKind::FtSquared => {
                    if c > 0.0 {
                        return TailCertificate::Unavailable(
                            "positive multiple of an indicator transform has unbounded support"
                                .into(),
                        );
                    }
                }
            }
        }
        TailCertificate::NonPositiveBeyond { radius, strict }
    }
}

/// Outcome of a tail analysis.
#[derive(Debug, Clone, PartialEq)]
pub enum TailCertificate {
    /// The function is ≤ 0 (≤ tol for the tolerance variant) for ‖x‖ ≥ radius, and < 0 there when `strict`.
    NonPositiveBeyond {
        radius: f64,
        strict: bool,
    },
    Unavailable(String),
}

/// Smallest Y ≥ 2·deg (doubling, then bisection, rounded up) with
/// Σ |p_i| Y^i e^{−Y/2} ≤ budget; every term decreases in y beyond 2·deg.
fn envelope_threshold(mono: &[f64], budget: f64) -> f64 {
    let env = |y: f64| -> f64 {
        mono.iter()
            .enumerate()
            .map(|(i, p)| (p.abs().ln() + i as f64 * y.ln() - y / 2.0).exp())
            .sum()
    };
    let start = (2.0 * (mono.len() - 1) as f64).max(1.0);
    if env(start) <= budget {
        return start;
    }
    let mut hi = 2.0 * start;
    while env(hi) > budget {
        hi *= 2.0;
    }
    let mut lo = hi / 2.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if env(mid) <= budget {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn monomial_coefficients(coeffs: &[f64], alpha: f64) -> Vec<f64> {
    let mut out = vec![0.0; coeffs.len()];
    for (k, a) in coeffs.iter().enumerate() {
        if *a == 0.0 {
            continue;
        }
        for (i, c) in crate::special::laguerre_coefficients(k, alpha)
            .into_iter()
            .enumerate()
        {
            out[i] += a * c;
        }
    }
    out
}

/// Smallest Y (up to bisection accuracy, rounded up) with
/// Σ_{i<d} |p_i| Y^{i-d} < |p_d|, so the leading monomial dominates for all y ≥ Y.
fn dominance_threshold(mono: &[f64]) -> f64 {
    let d = mono.len() - 1;
    if d == 0 {
        return 0.0;
    }
    let lead = mono[d].abs();
    let lower = |y: f64| -> f64 {
        (0..d)
            .map(|i| mono[i].abs() * y.powi(i as i32 - d as i32))
            .sum()
    };
    let mut hi = 1.0;
    while lower(hi) >= lead {
        hi *= 2.0;
    }
    let mut lo = hi / 2.0;
    if lower(lo) < lead {
        return lo.max(0.0);
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if lower(mid) < lead {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
