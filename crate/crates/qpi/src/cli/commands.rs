use super::{CliError, Context, Node};
use crate::covering::{Covering, TensorElement};
use crate::datum::{Datum, Weight};
use crate::free_half::{default_height, FreeHalf};
use crate::iqsp::idivided_power;
use crate::linalg;
use crate::modules::{
    canonical_basis_rank1, cb_tensor, icanonical_basis, psi_i_module, rank1_based, simple,
    stabilization, ModuleError, TensorModule,
};
use crate::quasi;
use crate::scalar::{qpi_factorial, QPiScalar};
use std::collections::BTreeMap;
use std::sync::Arc;

pub(super) fn covering(d: &Datum, h: i64) -> Arc<Covering> {
    Arc::new(Covering::new(Arc::new(FreeHalf::new(d.clone(), h.max(0)))))
}

fn weight_key(v: &[i64]) -> String {
    Weight(v.to_vec()).to_string()
}

fn tensor_node(t: &TensorElement, labels: &[i64]) -> Node {
    Node::expansion(
        t.terms()
            .map(|((a, b), c)| (format!("{}⊗{}", a.render(labels), b.render(labels)), c)),
    )
}

pub(super) fn validate(ctx: &Context) -> Node {
    let d = &ctx.datum;
    let c = &d.cartan;
    let datum = Node::map()
        .with("name", Node::str(&d.name))
        .with("rank", Node::Int(d.rank() as i64))
        .with("labels", Node::ints(&c.labels))
        .with(
            "parity",
            Node::ints(&c.parity.iter().map(|&p| p as i64).collect::<Vec<_>>()),
        )
        .with(
            "dot",
            Node::List(c.dot.iter().map(|r| Node::ints(r)).collect()),
        )
        .with("X_rank", Node::Int(d.root.x_rank as i64))
        .with(
            "pairing",
            Node::List(d.root.pairing.iter().map(|r| Node::ints(r)).collect()),
        )
        .with(
            "tau",
            Node::ints(
                &d.params
                    .tau
                    .iter()
                    .map(|&t| c.labels.get(t).copied().unwrap_or(-1))
                    .collect::<Vec<_>>(),
            ),
        )
        .with(
            "varsigma",
            Node::List(
                d.params
                    .varsigma
                    .iter()
                    .cloned()
                    .map(Node::Scalar)
                    .collect(),
            ),
        );
    let violations = Node::List(
        ctx.violations
            .iter()
            .map(|v| {
                Node::map()
                    .with("condition", Node::str(v.condition))
                    .with("detail", Node::str(&v.detail))
            })
            .collect(),
    );
    let status = if ctx.violations.is_empty() {
        "valid"
    } else {
        "invalid"
    };
    Node::map()
        .with("datum", datum)
        .with("violations", violations)
        .with("status", Node::str(status))
}

/// `{ht: {μ: {monomial: coefficient}}}` for the nonzero `Υ_μ` with `ht μ < N`.
pub(super) fn upsilon(ctx: &Context) -> Result<Node, CliError> {
    let h = ctx.inclusive_height(default_height(ctx.datum.rank()));
    let mut out = Node::map();
    if h < 0 {
        return Ok(out);
    }
    let u = covering(&ctx.datum, h);
    let ups = quasi::upsilon(u.free_half(), h)?;
    let mut by_ht: BTreeMap<i64, Node> = BTreeMap::new();
    for mu in ups.parts.keys() {
        if mu.ht() > h || ups.is_zero_at(mu) {
            continue;
        }
        let p = ups.part_pbw(&u, mu)?;
        let terms = Node::expansion(p.terms().map(|(m, c)| (m.render(u.labels()), c)));
        by_ht
            .entry(mu.ht())
            .or_insert_with(Node::map)
            .push(mu.to_string(), terms);
    }
    for (k, v) in by_ht {
        out.push(k.to_string(), v);
    }
    Ok(out)
}

/// `{ht: {ν: {F-monomial⊗E-monomial: coefficient}}}` for `ht ν < N`.
pub(super) fn theta(ctx: &Context) -> Result<Node, CliError> {
    let h = ctx.inclusive_height(5);
    let mut out = Node::map();
    if h < 0 {
        return Ok(out);
    }
    let u = covering(&ctx.datum, h);
    let th = quasi::theta(&u, h)?;
    let mut by_ht: BTreeMap<i64, Node> = BTreeMap::new();
    for (nu, t) in &th.parts {
        if nu.ht() > h || t.is_zero() {
            continue;
        }
        by_ht
            .entry(nu.ht())
            .or_insert_with(Node::map)
            .push(nu.to_string(), tensor_node(t, u.labels()));
    }
    for (k, v) in by_ht {
        out.push(k.to_string(), v);
    }
    Ok(out)
}

/// `{ht μ: {"w; μ": terms}}`, `w` the total degree and `μ` the weight of the second leg.
pub(super) fn theta_i(ctx: &Context) -> Result<Node, CliError> {
    let default = if ctx.datum.rank() == 1 { 5 } else { 4 };
    let h = ctx.inclusive_height(default);
    let mut out = Node::map();
    if h < 0 {
        return Ok(out);
    }
    let u = covering(&ctx.datum, h);
    let ups = quasi::upsilon(u.free_half(), h)?;
    let th = quasi::theta(&u, h)?;
    let thi = quasi::theta_i(&u, &ups, &th, h)?;
    let mut by_ht: BTreeMap<i64, Node> = BTreeMap::new();
    for ((w, mu), t) in &thi.parts {
        if t.is_zero() {
            continue;
        }
        by_ht
            .entry(mu.ht())
            .or_insert_with(Node::map)
            .push(format!("{w}; {mu}"), tensor_node(t, u.labels()));
    }
    for (k, v) in by_ht {
        out.push(k.to_string(), v);
    }
    Ok(out)
}

fn b_j_label(n: usize, e: u8) -> String {
    let b = match n {
        0 => String::new(),
        1 => "B".into(),
        _ => format!("B^{n}"),
    };
    match (b.is_empty(), e) {
        (true, 0) => "1".into(),
        (true, _) => "J".into(),
        (false, 0) => b,
        (false, _) => format!("{b}*J"),
    }
}

/// `{i: {even|odd: {m: {numerator, denominator, coefficients}}}}`.
pub(super) fn idp(ctx: &Context, index: Option<i64>, max: usize) -> Result<Node, CliError> {
    let d = &ctx.datum;
    let indices: Vec<usize> = match index {
        Some(l) => vec![d
            .cartan
            .index_of_label(l)
            .ok_or_else(|| CliError::Usage(format!("--index {l} is not in I")))?],
        None => (0..d.rank()).collect(),
    };
    let mut out = Node::map();
    for i in indices {
        let mut per = Node::map();
        for parity in [0u8, 1] {
            let mut table = Node::map();
            for m in 0..=max {
                let x = idivided_power(d, i, m, parity)?;
                let mut coeffs: Vec<(usize, u8, QPiScalar)> = x.coefficients();
                coeffs.sort_by_key(|(n, e, _)| (*n, *e));
                let entry = Node::map()
                    .with("numerator", Node::str(x.symbolic()))
                    .with("denominator", Node::str(format!("[{m}]!")))
                    .with(
                        "coefficients",
                        Node::expansion(coeffs.iter().map(|(n, e, c)| (b_j_label(*n, *e), c))),
                    );
                table.push(m.to_string(), entry);
            }
            per.push(if parity == 0 { "even" } else { "odd" }, table);
        }
        out.push(format!("i={}", d.cartan.labels[i]), per);
    }
    Ok(out)
}

fn parse_ints(s: &str, what: &str) -> Result<Vec<i64>, CliError> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|e| CliError::Usage(format!("{what} {x:?}: {e}")))
        })
        .collect()
}

fn matrix_node(m: &linalg::Matrix, labels: &[String]) -> Node {
    let mut out = Node::map();
    for (c, l) in labels.iter().enumerate() {
        let col = Node::expansion((0..labels.len()).map(|r| (labels[r].clone(), &m[r][c])));
        if let Node::Map(v) = &col {
            if v.is_empty() {
                continue;
            }
        }
        out.push(l.clone(), col);
    }
    out
}

/// `L(λ)` from a Verma module of depth `N − 1`; rank one adds the canonical basis.
pub(super) fn module(ctx: &Context, lambda: Option<&str>) -> Result<Node, CliError> {
    let d = &ctx.datum;
    let n = d.rank();
    let pairings = match lambda {
        Some(s) => parse_ints(s, "--lambda")?,
        None => {
            let mut v = vec![0; n];
            v[0] = 1;
            v
        }
    };
    if pairings.len() != n {
        return Err(CliError::Usage(format!(
            "--lambda needs {n} entries, got {}",
            pairings.len()
        )));
    }
    let default = if n == 1 { pairings[0] + 2 } else { 4 };
    let depth = ctx.inclusive_height(default);
    if depth < 0 {
        return Err(CliError::Usage(
            "--height must be positive for module".into(),
        ));
    }
    let lam = d.weight_from_pairings(&pairings);
    let u = covering(d, depth);
    let l = simple(&u, &lam, depth)?;
    let checked = l.audit()?;
    let based = if n == 1 {
        Some(canonical_basis_rank1(&l)?)
    } else {
        None
    };
    let m = based.as_ref().map_or(&l, |b| &b.module);
    let mut spaces = Node::map();
    for (w, idx) in m.weight_spaces().iter().rev() {
        spaces.push(
            weight_key(w),
            Node::List(idx.iter().map(|&k| Node::str(&m.labels[k])).collect()),
        );
    }
    let mut action = Node::map();
    for i in 0..n {
        let lab = u.labels()[i];
        action.push(format!("E[{lab}]"), matrix_node(&m.e[i], &m.labels));
        action.push(format!("F[{lab}]"), matrix_node(&m.f[i], &m.labels));
    }
    let mut out = Node::map()
        .with("lambda", Node::ints(&pairings))
        .with("depth_bound", Node::Int(depth))
        .with("truncated", Node::Bool(l.truncation.is_some()))
        .with("dimension", Node::Int(m.dim() as i64))
        .with("relations_checked", Node::Int(checked as i64))
        .with("weight_spaces", spaces)
        .with(
            "basis",
            Node::str(if based.is_some() {
                "canonical"
            } else {
                "monomial"
            }),
        );
    if let Some(b) = &based {
        if !b.is_involutive() || !b.psi_intertwines() {
            return Err(CliError::assertion(
                "canonical-basis",
                "ψ is not an intertwining involution on the canonical basis",
            ));
        }
        let dd = u.cartan().d(0);
        let mut cb = Node::map();
        for k in 0..m.dim() {
            let f = qpi_factorial(m.depths[k].ht(), dd)
                .invert()
                .map_err(|e| CliError::assertion("canonical-basis", e.to_string()))?;
            cb.push(
                m.labels[k].clone(),
                Node::map().with(l.labels[k].clone(), Node::Scalar(f)),
            );
        }
        out.push("canonical_basis", cb);
    }
    out.push("action", action);
    Ok(out)
}

/// ı-canonical basis of `L(λ)` or, with `μ`, of `L(λ) ⊗ L(μ)` using `ψ_ı = Θ^ı ∘ (ψ_ı ⊗ ψ)`.
pub(super) fn icb(ctx: &Context, lambda: i64, mu: Option<i64>) -> Result<Node, CliError> {
    let d = &ctx.datum;
    if d.rank() != 1 {
        return Err(ModuleError::RankUnsupported.into());
    }
    for x in std::iter::once(lambda).chain(mu) {
        if x < 0 {
            return Err(ModuleError::NotDominant(vec![x]).into());
        }
    }
    let Some(mu) = mu else {
        let u = covering(d, lambda + 1);
        let ups = quasi::upsilon(u.free_half(), lambda + 1)?;
        let b = rank1_based(&u, lambda)?;
        let p = psi_i_module(&b, &ups)?;
        let ib = icanonical_basis(&b, &p)?;
        let mut basis = Node::map();
        for (j, lab) in b.module.labels.iter().enumerate() {
            basis.push(
                lab.clone(),
                Node::expansion(ib.expansion(j).iter().map(|(k, c)| (k.clone(), c))),
            );
        }
        return Ok(Node::map()
            .with("module", Node::str(format!("L({lambda})")))
            .with("basis", basis));
    };
    let total = lambda + mu;
    let u = covering(d, total.max(lambda.max(mu) + 1));
    let ups = quasi::upsilon(u.free_half(), total)?;
    let th = quasi::theta(&u, total)?;
    let thi = quasi::theta_i(&u, &ups, &th, total)?;
    let left = rank1_based(&u, lambda)?;
    let pl = psi_i_module(&left, &ups)?;
    let t = TensorModule::new(left, rank1_based(&u, mu)?, &th)?;
    let p = t.psi_i_theta(&pl, &thi, &ups.c)?;
    let dia = cb_tensor(&t)?;
    let inv = linalg::inverse(&dia.coords)
        .map_err(|e| CliError::assertion("diamond-basis", e.to_string()))?;
    let pd = linalg::mat_mul(&inv, &linalg::mat_mul(&p, &linalg::mat_bar(&dia.coords)));
    let ib = icanonical_basis(&dia.based, &pd)?;
    let dl = &dia.based.module.labels;
    let mut diamond = Node::map();
    for (j, lab) in dl.iter().enumerate() {
        diamond.push(
            lab.clone(),
            Node::expansion((0..dl.len()).map(|r| (t.module.labels[r].clone(), &dia.coords[r][j]))),
        );
    }
    let mut basis = Node::map();
    for (j, lab) in dl.iter().enumerate() {
        basis.push(
            lab.clone(),
            Node::expansion(ib.expansion(j).iter().map(|(k, c)| (k.clone(), c))),
        );
    }
    Ok(Node::map()
        .with("module", Node::str(format!("L({lambda})⊗L({mu})")))
        .with("diamond", diamond)
        .with("basis", basis))
}

fn b_powers(c: &[QPiScalar]) -> Node {
    Node::expansion(c.iter().enumerate().map(|(k, x)| (b_j_label(k, 0), x)))
}

pub(super) fn stabilize(
    ctx: &Context,
    b1: usize,
    b2: usize,
    zeta: u8,
    steps: usize,
) -> Result<Node, CliError> {
    let d = &ctx.datum;
    if d.rank() != 1 {
        return Err(ModuleError::RankUnsupported.into());
    }
    if steps < 2 {
        return Err(CliError::Usage("--steps must be at least 2".into()));
    }
    let top = (b1.max(b2) + steps - 1) as i64;
    let u = covering(d, 2 * top + zeta as i64);
    let r = stabilization(&u, b1, b2, zeta, steps)?;
    let opt = |b: Option<bool>| b.map_or(Node::str("n/a"), Node::Bool);
    let rows = r
        .steps
        .iter()
        .map(|s| {
            Node::map()
                .with("lambda", Node::Int(s.lambda))
                .with("mu", Node::Int(s.mu))
                .with("in_submodule", Node::Bool(s.in_submodule))
                .with("psi_i_invariant", Node::Bool(s.psi_i_invariant))
                .with("agrees_with_next", opt(s.agrees_with_next))
                .with("projection_well_defined", opt(s.projection_well_defined))
                .with("coefficients", b_powers(&s.coefficients))
                .with(
                    "expansion",
                    Node::expansion(s.expansion.iter().map(|(k, c)| (k.clone(), c))),
                )
        })
        .collect();
    if !r.ok() {
        return Err(CliError::assertion(
            "stabilization",
            format!(
                "({b1},{b2}) with ζ = {zeta}: no stable, ψ_ı-invariant limit within {steps} steps"
            ),
        ));
    }
    Ok(Node::map()
        .with("b1", Node::Int(b1 as i64))
        .with("b2", Node::Int(b2 as i64))
        .with("zeta", Node::Int(zeta as i64))
        .with("steps", Node::List(rows))
        .with(
            "stable_from",
            r.stable_from
                .map_or(Node::str("none"), |s| Node::Int(s as i64)),
        )
        .with(
            "stabilized",
            r.stabilized.as_deref().map_or(Node::str("none"), b_powers),
        ))
}
