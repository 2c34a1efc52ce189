//! Identity families among alternating MZVs, stored as `LHS − RHS`
//! combinations of index monomials asserted to vanish, plus the exact
//! replay that assembles the `theorem1` evaluation from its ingredients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::word::{index_to_word, shuffle_regularize, word_to_index, IndexVector, Sign};
use crate::{rat, MonomialComb, Rational, WordComb};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("parameter {name} = {value} is out of range (need ≥ {min})")]
    Parameter {
        name: &'static str,
        value: i64,
        min: i64,
    },
    #[error("unknown identity `{0}`")]
    UnknownName(String),
    #[error("cannot eliminate {target}: {reason}")]
    Elimination { target: String, reason: String },
    #[error("assembly left the barred factor {0} in the result")]
    BarredIndexRemains(String),
    #[error("assembled identity for k = {k} differs from the closed form in {differing} terms")]
    ReplayMismatch { k: i64, differing: usize },
    #[error("malformed identity JSON: {0}")]
    Json(String),
}

/// A commutative product of index factors; the empty product is `1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<IndexVector>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn single(ix: IndexVector) -> Self {
        Monomial(vec![ix])
    }

    pub fn from_factors(mut factors: Vec<IndexVector>) -> Self {
        factors.sort();
        Monomial(factors)
    }

    pub fn factors(&self) -> &[IndexVector] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(IndexVector::weight).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut factors = self.0.clone();
        factors.extend_from_slice(&other.0);
        Monomial::from_factors(factors)
    }

    /// Splits off every copy of `target`, returning the cofactor and the multiplicity.
    pub fn extract(&self, target: &IndexVector) -> (Monomial, usize) {
        let (hits, rest): (Vec<_>, Vec<_>) = self.0.iter().cloned().partition(|f| f == target);
        (Monomial(rest), hits.len())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.0.iter().map(|ix| ix.to_string()).collect();
        f.write_str(&parts.join("*"))
    }
}

/// Product of two monomial combinations.
pub fn mul_comb(a: &MonomialComb, b: &MonomialComb) -> MonomialComb {
    let mut out = MonomialComb::zero();
    for (ma, ca) in a.iter() {
        for (mb, cb) in b.iter() {
            out.add_term(ma.mul(mb), ca * cb);
        }
    }
    out
}

/// A named, parametrized combination asserted to equal zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub name: String,
    pub params: BTreeMap<String, i64>,
    pub combination: MonomialComb,
}

impl Identity {
    fn new(name: &str, params: &[(&str, i64)], combination: MonomialComb) -> Self {
        Identity {
            name: name.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            combination,
        }
    }

    /// An unparameterized identity `combination = 0`.
    pub fn from_combination(name: &str, combination: MonomialComb) -> Self {
        Identity::new(name, &[], combination)
    }

    /// The common weight of all monomials, or `None` if mixed (or empty).
    pub fn weight(&self) -> Option<u32> {
        let mut weights = self.combination.basis_elements().map(Monomial::weight);
        let first = weights.next()?;
        weights.all(|w| w == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.combination.is_zero() || self.weight().is_some()
    }

    /// Canonical JSON form: `{name, params, terms: [{coeff_num, coeff_den, factors}]}`
    /// with each factor written as `[k0, [k…], [ε…]]`.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .combination
            .iter()
            .map(|(mono, c)| {
                let factors: Vec<Value> = mono
                    .factors()
                    .iter()
                    .map(|ix| {
                        let eps: Vec<i64> = ix.eps().iter().map(|s| s.value()).collect();
                        json!([ix.k0(), ix.ks(), eps])
                    })
                    .collect();
                json!({
                    "coeff_num": big_to_json(c.numer()),
                    "coeff_den": big_to_json(c.denom()),
                    "factors": factors,
                })
            })
            .collect();
        json!({ "name": self.name, "params": self.params, "terms": terms })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("identity JSON");
        s.push('\n');
        s
    }

    pub fn from_json(v: &Value) -> Result<Self, IdentityError> {
        let bad = |what: &str| IdentityError::Json(what.to_string());
        let name = v["name"].as_str().ok_or_else(|| bad("name"))?.to_string();
        let params = v["params"]
            .as_object()
            .ok_or_else(|| bad("params"))?
            .iter()
            .map(|(k, v)| {
                v.as_i64()
                    .map(|n| (k.clone(), n))
                    .ok_or_else(|| bad("param value"))
            })
            .collect::<Result<BTreeMap<_, _>, _>>()?;
        let mut combination = MonomialComb::zero();
        for term in v["terms"].as_array().ok_or_else(|| bad("terms"))? {
            let num = json_to_big(&term["coeff_num"]).ok_or_else(|| bad("coeff_num"))?;
            let den = json_to_big(&term["coeff_den"]).ok_or_else(|| bad("coeff_den"))?;
            if den.is_zero() {
                return Err(bad("zero denominator"));
            }
            let mut factors = Vec::new();
            for f in term["factors"].as_array().ok_or_else(|| bad("factors"))? {
                let k0 = f[0].as_u64().ok_or_else(|| bad("k0"))? as u32;
                let ks = f[1]
                    .as_array()
                    .ok_or_else(|| bad("ks"))?
                    .iter()
                    .map(|k| k.as_u64().map(|k| k as u32).ok_or_else(|| bad("k")))
                    .collect::<Result<Vec<_>, _>>()?;
                let eps = f[2]
                    .as_array()
                    .ok_or_else(|| bad("eps"))?
                    .iter()
                    .map(|e| match e.as_i64() {
                        Some(1) => Ok(Sign::Plus),
                        Some(-1) => Ok(Sign::Minus),
                        _ => Err(bad("sign")),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                factors.push(IndexVector::new(k0, ks, eps).map_err(|e| bad(&e.to_string()))?);
            }
            combination.add_term(Monomial::from_factors(factors), Rational::new(num, den));
        }
        Ok(Identity {
            name,
            params,
            combination,
        })
    }
}

fn big_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(small) => json!(small),
        None => json!(n.to_string()),
    }
}

fn json_to_big(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

/// `binom(a, b)`, zero outside `0 ≤ b ≤ a`.
pub fn binom(a: i64, b: i64) -> Rational {
    if b < 0 || a < 0 || b > a {
        return Rational::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc = acc * BigInt::from(a - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

/// `2^e` for any integer `e`.
fn pow2(e: i64) -> Rational {
    let p = Rational::from_integer(BigInt::one() << e.unsigned_abs());
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

fn sign_pow(r: i64) -> Rational {
    if r % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn z(entries: &[i64]) -> Monomial {
    Monomial::single(IndexVector::zeta(entries))
}

fn zz(a: &[i64], b: &[i64]) -> Monomial {
    z(a).mul(&z(b))
}

fn require(name: &'static str, value: i64, min: i64) -> Result<(), IdentityError> {
    if value < min {
        Err(IdentityError::Parameter { name, value, min })
    } else {
        Ok(())
    }
}

/// `ζ(n̄) + (1 − 2^{1−n}) ζ(n)`.
pub fn depth1_reduction(n: i64) -> Result<Identity, IdentityError> {
    require("n", n, 2)?;
    let mut c = MonomialComb::zero();
    c.add_term(z(&[-n]), Rational::one());
    c.add_term(z(&[n]), Rational::one() - pow2(1 - n));
    Ok(Identity::new("depth1", &[("n", n)], c))
}

/// The dihedral symmetry relating `ζ^⧢_{2l−1}(1, 2k̄)` and `ζ(2k̄, 2l̄)` to
/// products of depth-one values.
pub fn dihedral(k: i64, l: i64) -> Result<Identity, IdentityError> {
    require("k", k, 1)?;
    require("l", l, 1)?;
    let w = 2 * k + 2 * l;
    let regularized = IndexVector::signed((2 * l - 1) as u32, &[1, -2 * k]).expect("valid index");
    let mut c = MonomialComb::zero();
    c.add_term(Monomial::single(regularized), Rational::one());
    c.add_term(z(&[-2 * k, -2 * l]), -Rational::one());
    c.add_term(z(&[-w]), -binom(w - 1, 2 * l - 1));
    // r = 1 has a vanishing coefficient and is dropped by add_term
    for r in 1..=w - 2 {
        let coeff = sign_pow(r) * binom(r - 1, 2 * l - 1) + binom(r - 1, 2 * k - 1);
        c.add_term(zz(&[-r], &[w - r]), coeff);
    }
    Ok(Identity::new("dihedral", &[("k", k), ("l", l)], c))
}

/// Galois descent of `ζ(2k̄, 2l̄)` to non-alternating double zeta values.
pub fn descent_even(k: i64, l: i64) -> Result<Identity, IdentityError> {
    require("k", k, 1)?;
    require("l", l, 1)?;
    let w = 2 * k + 2 * l;
    let mut rhs = MonomialComb::zero();
    for i in 2..=w - 2 {
        let scale = pow2(-i);
        rhs.add_term(z(&[w - i, i]), &scale * binom(i - 1, 2 * l - 1));
        rhs.add_term(z(&[i, w - i]), &scale * binom(i - 1, 2 * k - 1));
    }
    rhs.add_term(z(&[2 * k, 2 * l]), -Rational::one());
    for r in 2..=w - 2 {
        let coeff = sign_pow(r) * pow2(-r) * binom(r - 1, 2 * l - 1);
        rhs.add_term(zz(&[r], &[w - r]), coeff);
    }
    let top = rat(2, 1) * binom(w - 2, 2 * l - 1) + binom(w - 1, 2 * l - 1);
    rhs.add_term(z(&[w]), -pow2(-w) * top);

    let c = MonomialComb::basis(z(&[-2 * k, -2 * l])) - rhs;
    Ok(Identity::new("descent", &[("k", k), ("l", l)], c))
}

/// `ζ(2, 2k̄) + 2k ζ(1, 2k+1̄) + ζ^⧢_1(1, 2k̄)`, with the expansion of the
/// regularized term computed by the shuffle regularization engine.
pub fn goal_regularization(k: i64) -> Result<Identity, IdentityError> {
    require("k", k, 1)?;
    let target = IndexVector::signed(1, &[1, -2 * k]).expect("valid index");
    let (sign, word) = index_to_word(&target);
    let expansion: WordComb = shuffle_regularize(&word);
    // ζ^⧢ = sign · Σ c_w I(w), and I(w) = (−1)^{depth} ζ(word_to_index(w))
    let mut c = MonomialComb::basis(Monomial::single(target));
    for (w, cw) in expansion.iter() {
        let ix = word_to_index(w);
        let depth_sign = if ix.depth().is_multiple_of(2) { 1 } else { -1 };
        c.add_term(
            Monomial::single(ix),
            -cw * Rational::from_integer((sign * depth_sign).into()),
        );
    }
    Ok(Identity::new("goal", &[("k", k)], c))
}

/// The `theorem1` left side `ζ(2, 2k̄) + 2k ζ(1, 2k+1̄)`.
pub fn theorem1_lhs(k: i64) -> MonomialComb {
    let mut c = MonomialComb::zero();
    c.add_term(z(&[2, -2 * k]), Rational::one());
    c.add_term(
        z(&[1, -(2 * k + 1)]),
        Rational::from_integer((2 * k).into()),
    );
    c
}

/// Right side of the `theorem1` evaluation (depth ≤ 2, non-alternating).
pub fn theorem1_rhs(k: i64) -> MonomialComb {
    let w = 2 * k + 2;
    let mut rhs = MonomialComb::basis(z(&[2 * k, 2]));
    for i in 2..=2 * k {
        let scale = -pow2(-i);
        rhs.add_term(z(&[w - i, i]), &scale * binom(i - 1, 1));
        rhs.add_term(z(&[i, w - i]), &scale * binom(i - 1, 2 * k - 1));
    }
    for r in 2..=2 * k {
        let coeff = sign_pow(r) * (Rational::one() - pow2(-r)) * binom(r - 1, 1)
            + binom(r - 1, 2 * k - 1) * (Rational::one() - pow2(1 - r));
        rhs.add_term(zz(&[r], &[w - r]), -coeff);
    }
    let top = rat(2, 1)
        + Rational::from_integer((2 * k - 1).into()) * (Rational::one() + pow2(-2 * k - 2));
    rhs.add_term(z(&[w]), top);
    rhs
}

/// `ζ(2, 2k̄) + 2k ζ(1, 2k+1̄) − RHS`.
pub fn theorem1(k: i64) -> Result<Identity, IdentityError> {
    require("k", k, 1)?;
    Ok(Identity::new(
        "theorem1",
        &[("k", k)],
        theorem1_lhs(k) - theorem1_rhs(k),
    ))
}

/// `ζ(3̄, 9̄)` pushed down against `ζ(1,1,4,6)` and products of lower depth.
pub fn pushdown_39() -> Identity {
    let z3 = || z(&[3]);
    let terms: Vec<(Monomial, Rational)> = vec![
        (z(&[1, 1, 4, 6]), rat(9, 64)),
        (z(&[3, 9]), rat(-371, 1024)),
        (zz(&[2], &[3, 7]), rat(-27, 64)),
        (zz(&[4], &[3, 5]), rat(-27, 128)),
        (zz(&[3], &[9]), rat(3131, 1024)),
        (zz(&[5], &[7]), rat(-321, 512)),
        (z3().mul(&z3()).mul(&z3()).mul(&z3()), rat(-3, 256)),
        (zz(&[2], &[3]).mul(&z(&[7])), rat(-45, 32)),
        (zz(&[2], &[5]).mul(&z(&[5])), rat(-63, 128)),
        (zz(&[4], &[3]).mul(&z(&[5])), rat(9, 128)),
        (zz(&[6], &[3]).mul(&z3()), rat(81, 256)),
        (z(&[12]), rat(353139, 2830336)),
    ];
    let rhs: MonomialComb = terms.into_iter().collect();
    Identity::new("pushdown39", &[], MonomialComb::basis(z(&[-3, -9])) - rhs)
}

/// Literal transcriptions of the `l = 1` specializations, kept separate
/// from the general generators so the two can be compared.
pub mod transcriptions {
    use super::*;

    /// `ζ^⧢_1(1, 2k̄) − ζ(2k̄, 2̄) − (2k+1) ζ(2k+2̄) + Σ_{r=2}^{2k} (…) ζ(r̄) ζ(2k+2−r)`.
    pub fn dihedral_2k2(k: i64) -> MonomialComb {
        let w = 2 * k + 2;
        let mut c = MonomialComb::zero();
        c.add_term(
            Monomial::single(IndexVector::signed(1, &[1, -2 * k]).expect("valid index")),
            Rational::one(),
        );
        c.add_term(z(&[-2 * k, -2]), -Rational::one());
        c.add_term(z(&[-w]), -binom(2 * k + 1, 1));
        for r in 2..=2 * k {
            let coeff = sign_pow(r) * binom(r - 1, 1) + binom(r - 1, 2 * k - 1);
            c.add_term(zz(&[-r], &[w - r]), coeff);
        }
        c
    }

    /// `ζ(2k̄, 2̄)` minus its descent with the `−(6k+1)/2^{2k+2} ζ(2k+2)` tail.
    pub fn descent_2k2(k: i64) -> MonomialComb {
        let w = 2 * k + 2;
        let mut c = MonomialComb::basis(z(&[-2 * k, -2]));
        for i in 2..=2 * k {
            let scale = pow2(-i);
            c.add_term(z(&[w - i, i]), -(&scale * binom(i - 1, 1)));
            c.add_term(z(&[i, w - i]), -(&scale * binom(i - 1, 2 * k - 1)));
        }
        c.add_term(z(&[2 * k, 2]), Rational::one());
        for r in 2..=2 * k {
            let coeff = Rational::from_integer((r - 1).into()) * sign_pow(r) * pow2(-r);
            c.add_term(zz(&[r], &[w - r]), -coeff);
        }
        c.add_term(
            z(&[w]),
            Rational::from_integer((6 * k + 1).into()) * pow2(-w),
        );
        c
    }
}

/// Solves `rule` for the single-factor monomial `target` and substitutes the
/// result into every monomial of `comb`, including inside products.
pub fn eliminate(
    comb: &MonomialComb,
    rule: &MonomialComb,
    target: &IndexVector,
) -> Result<MonomialComb, IdentityError> {
    let fail = |reason: &str| IdentityError::Elimination {
        target: target.to_string(),
        reason: reason.to_string(),
    };
    let target_mono = Monomial::single(target.clone());
    let pivot = rule.coeff(&target_mono);
    if pivot.is_zero() {
        return Err(fail("rule does not contain the target linearly"));
    }
    let mut rest = rule.clone();
    rest.remove(&target_mono);
    if rest.basis_elements().any(|m| m.extract(target).1 > 0) {
        return Err(fail("rule contains the target inside a product"));
    }
    let replacement = rest.scale(&(-pivot.recip()));

    let mut out = MonomialComb::zero();
    for (mono, c) in comb.iter() {
        let (cofactor, mult) = mono.extract(target);
        let mut expanded = MonomialComb::from_term(cofactor, c.clone());
        for _ in 0..mult {
            expanded = mul_comb(&expanded, &replacement);
        }
        out += &expanded;
    }
    Ok(out)
}

/// Intermediate states of the `theorem1` replay.
#[derive(Debug, Clone)]
pub struct AssemblyTrace {
    pub k: i64,
    pub goal: Identity,
    pub after_dihedral: MonomialComb,
    pub after_descent: MonomialComb,
    pub after_depth1: MonomialComb,
}

impl AssemblyTrace {
    /// Rewrites a stage `LHS + X = 0` as the expression `−X` that the
    /// `theorem1` left side equals at that point.
    pub fn lhs_expansion(&self, stage: &MonomialComb) -> MonomialComb {
        theorem1_lhs(self.k) - stage.clone()
    }
}

/// Replays the proof: start from the regularization identity, eliminate
/// `ζ^⧢_1(1, 2k̄)` with `dihedral(k, 1)`, eliminate `ζ(2k̄, 2̄)` with
/// `descent_even(k, 1)`, then every `ζ(n̄)` with `depth1_reduction(n)`.
pub fn assemble_theorem1_trace(k: i64) -> Result<AssemblyTrace, IdentityError> {
    require("k", k, 1)?;
    let goal = goal_regularization(k)?;
    let regularized = IndexVector::signed(1, &[1, -2 * k]).expect("valid index");
    let after_dihedral = eliminate(
        &goal.combination,
        &dihedral(k, 1)?.combination,
        &regularized,
    )?;
    let after_descent = eliminate(
        &after_dihedral,
        &descent_even(k, 1)?.combination,
        &IndexVector::zeta(&[-2 * k, -2]),
    )?;

    let mut current = after_descent.clone();
    while let Some(target) = first_barred_depth1(&current) {
        let n = target.ks()[0] as i64;
        if n < 2 {
            return Err(IdentityError::BarredIndexRemains(target.to_string()));
        }
        current = eliminate(&current, &depth1_reduction(n)?.combination, &target)?;
    }

    let lhs = theorem1_lhs(k);
    for (mono, c) in current.iter() {
        let tainted = mono
            .factors()
            .iter()
            .any(|f| f.is_alternating() || f.k0() > 0);
        if tainted && lhs.coeff(mono) != *c {
            return Err(IdentityError::BarredIndexRemains(mono.to_string()));
        }
    }
    Ok(AssemblyTrace {
        k,
        goal,
        after_dihedral,
        after_descent,
        after_depth1: current,
    })
}

fn first_barred_depth1(comb: &MonomialComb) -> Option<IndexVector> {
    comb.basis_elements()
        .flat_map(|m| m.factors().iter())
        .find(|f| f.depth() == 1 && f.k0() == 0 && f.eps()[0] == Sign::Minus)
        .cloned()
}

/// The mechanically assembled `theorem1` identity; fails unless it agrees
/// term for term with [`theorem1`].
pub fn assemble_theorem1(k: i64) -> Result<Identity, IdentityError> {
    let trace = assemble_theorem1_trace(k)?;
    let expected = theorem1(k)?;
    let diff = trace.after_depth1.clone() - expected.combination;
    if !diff.is_zero() {
        return Err(IdentityError::ReplayMismatch {
            k,
            differing: diff.len(),
        });
    }
    Ok(Identity::new(
        "assemble-theorem1",
        &[("k", k)],
        trace.after_depth1,
    ))
}

/// Names accepted by [`by_name`].
pub const NAMES: [&str; 7] = [
    "depth1",
    "dihedral",
    "descent",
    "goal",
    "theorem1",
    "pushdown39",
    "assemble-theorem1",
];

/// Looks up a generator by its CLI name. `depth1` reads its argument from `n`.
pub fn by_name(name: &str, k: i64, l: i64, n: i64) -> Result<Identity, IdentityError> {
    match name {
        "depth1" => depth1_reduction(n),
        "dihedral" => dihedral(k, l),
        "descent" => descent_even(k, l),
        "goal" => goal_regularization(k),
        "theorem1" => theorem1(k),
        "pushdown39" => Ok(pushdown_39()),
        "assemble-theorem1" => assemble_theorem1(k),
        other => Err(IdentityError::UnknownName(other.to_string())),
    }
}

/// Largest depth among the non-alternating factors.
pub fn max_depth(comb: &MonomialComb) -> usize {
    comb.basis_elements()
        .flat_map(|m| m.factors().iter())
        .filter(|f| !f.is_alternating())
        .map(IndexVector::depth)
        .max()
        .unwrap_or(0)
}
