//! Iterated torus knots and the plumbings bounding their integral
//! surgeries.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::hjcf::{dual_point_rule, expand_neg_cf, star_inverse_i64, PositiveRational};
use crate::plumbing::{
    gram_matrix, is_negative_definite, normalize, TreeError, VertexId, WeightedTree,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CablingError {
    Empty,
    PTooSmall { index: usize, p: u64 },
    AlphaZero { index: usize },
    NotCoprime { index: usize, p: u64, alpha: u64 },
    Overflow,
    NotAlgebraic,
    ZeroSurgery,
    Unknot,
    CornerWeight { p: u64, alpha: u64 },
    Unsupported(&'static str),
}

impl fmt::Display for CablingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CablingError::Empty => f.write_str("a cable tower needs at least one pair"),
            CablingError::PTooSmall { index, p } => {
                write!(f, "pair {}: p = {} must be at least 2", index + 1, p)
            }
            CablingError::AlphaZero { index } => write!(f, "pair {}: alpha must be positive", index + 1),
            CablingError::NotCoprime { index, p, alpha } => {
                write!(f, "pair {}: gcd({}, {}) is not 1", index + 1, p, alpha)
            }
            CablingError::Overflow => f.write_str("parameters too large"),
            CablingError::NotAlgebraic => f.write_str("the cable tower is not algebraic"),
            CablingError::ZeroSurgery => f.write_str("surgery coefficient must be nonzero"),
            CablingError::Unknot => f.write_str("the first cable is an unknot"),
            CablingError::CornerWeight { p, alpha } => {
                write!(f, "corner weight for ({}, {}) is not 1", p, alpha)
            }
            CablingError::Unsupported(why) => write!(f, "unsupported: {}", why),
        }
    }
}

/// T(p₁,α₁;…;p_k,α_k): the (p_k,α_k)-cable of … of the (p₁,α₁) torus knot.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CableTower {
    pairs: Vec<(u64, u64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TowerClass {
    NotAlgebraic,
    AlgebraicOnly,
    SuperAlgebraic,
}

impl fmt::Display for TowerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TowerClass::NotAlgebraic => "not-algebraic",
            TowerClass::AlgebraicOnly => "algebraic-only",
            TowerClass::SuperAlgebraic => "super-algebraic",
        })
    }
}

const LIMIT: u64 = 1 << 31;

impl CableTower {
    pub fn new(pairs: Vec<(u64, u64)>) -> Result<Self, CablingError> {
        if pairs.is_empty() {
            return Err(CablingError::Empty);
        }
        for (index, &(p, alpha)) in pairs.iter().enumerate() {
            if p < 2 {
                return Err(CablingError::PTooSmall { index, p });
            }
            if alpha == 0 {
                return Err(CablingError::AlphaZero { index });
            }
            if p >= LIMIT || alpha >= LIMIT {
                return Err(CablingError::Overflow);
            }
            if p.gcd(&alpha) != 1 {
                return Err(CablingError::NotCoprime { index, p, alpha });
            }
        }
        Ok(CableTower { pairs })
    }

    /// α₁ = q₁ and α_{i+1} = q_{i+1} + p_{i+1}p_iα_i.
    pub fn from_newton_pairs(newton: &[(u64, u64)]) -> Result<Self, CablingError> {
        let mut pairs = Vec::with_capacity(newton.len());
        for (i, &(p, q)) in newton.iter().enumerate() {
            if q == 0 {
                return Err(CablingError::AlphaZero { index: i });
            }
            if p.gcd(&q) != 1 {
                return Err(CablingError::NotCoprime { index: i, p, alpha: q });
            }
            let alpha = match pairs.last() {
                None => q,
                Some(&(pp, pa)) => p
                    .checked_mul(pp)
                    .and_then(|x: u64| x.checked_mul(pa))
                    .and_then(|x| x.checked_add(q))
                    .ok_or(CablingError::Overflow)?,
            };
            pairs.push((p, alpha));
        }
        CableTower::new(pairs)
    }

    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_algebraic(&self) -> bool {
        classify_tower(self) != TowerClass::NotAlgebraic
    }
}

impl fmt::Display for CableTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("T(")?;
        for (i, (p, a)) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{},{}", p, a)?;
        }
        f.write_str(")")
    }
}

/// Algebraic: α_{i+1} > p_i p_{i+1} α_i. Super-algebraic: additionally
/// ⌈α_{i+1}/p_{i+1}⌉ ≥ p_iα_i + 2, so every contraction stops on a (−2).
pub fn classify_tower(t: &CableTower) -> TowerClass {
    let mut class = TowerClass::SuperAlgebraic;
    for w in t.pairs.windows(2) {
        let (p0, a0) = (w[0].0 as u128, w[0].1 as u128);
        let (p1, a1) = (w[1].0 as u128, w[1].1 as u128);
        if a1 <= p0 * p1 * a0 {
            return TowerClass::NotAlgebraic;
        }
        if a1.div_ceil(p1) < p0 * a0 + 2 {
            class = TowerClass::AlgebraicOnly;
        }
    }
    class
}

/// The integral surgery S³ₙ(K).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurgerySpec {
    knot: CableTower,
    n: i64,
}

/// Which regime the reduced framing N falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NRegime {
    Negative,
    Zero,
    One,
    Standard,
}

impl SurgerySpec {
    pub fn new(knot: CableTower, n: i64) -> Result<Self, CablingError> {
        if n == 0 {
            return Err(CablingError::ZeroSurgery);
        }
        Ok(SurgerySpec { knot, n })
    }

    pub fn knot(&self) -> &CableTower {
        &self.knot
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    /// N = n − p_kα_k.
    pub fn big_n(&self) -> i64 {
        let &(p, a) = self.knot.pairs.last().unwrap();
        self.n - (p * a) as i64
    }

    pub fn regime(&self) -> NRegime {
        match self.big_n() {
            x if x < 0 => NRegime::Negative,
            0 => NRegime::Zero,
            1 => NRegime::One,
            _ => NRegime::Standard,
        }
    }
}

impl fmt::Display for SurgerySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (p, a) in &self.knot.pairs {
            write!(f, "{},{};", p, a)?;
        }
        write!(f, "{})", self.n)
    }
}

/// The number at the corner of a hook, computed as the sum
/// 1/(pα) + (α−p)*/α + (p⌈α/p⌉−α)*/p, which must be 1.
pub fn corner_weight(p: u64, alpha: u64) -> Result<i64, CablingError> {
    if p < 2 || alpha <= p || p.gcd(&alpha) != 1 || alpha >= LIMIT {
        return Err(CablingError::Unsupported("corner weight needs coprime 2 <= p < alpha"));
    }
    let (pi, ai) = (p as i64, alpha as i64);
    let s1 = star_inverse_i64(ai - pi, ai).map_err(|_| CablingError::CornerWeight { p, alpha })?;
    let s2 = star_inverse_i64(pi * alpha.div_ceil(p) as i64 - ai, pi)
        .map_err(|_| CablingError::CornerWeight { p, alpha })?;
    let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    let sum = r(1, pi * ai) + r(s1, ai) + r(s2, pi);
    if !sum.is_integer() || sum < BigRational::one() || sum >= r(2, 1) {
        return Err(CablingError::CornerWeight { p, alpha });
    }
    Ok(sum.to_integer().to_i64().unwrap())
}

/// Which part of a plumbing a vertex belongs to. Hooks are numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Torso(usize),
    Leg(usize),
    Node(usize),
    Connective(usize),
    Tail,
}

impl Role {
    pub fn name(&self) -> &'static str {
        match self {
            Role::Torso(_) => "torso",
            Role::Leg(_) => "leg",
            Role::Node(_) => "node",
            Role::Connective(_) => "connective",
            Role::Tail => "tail",
        }
    }

    pub fn hook(&self) -> Option<usize> {
        match *self {
            Role::Torso(i) | Role::Leg(i) | Role::Node(i) | Role::Connective(i) => Some(i),
            Role::Tail => None,
        }
    }

    // Torso1, Leg1, Node1, …, Torso_k, Node_k, Leg_k, Tail.
    fn order_key(&self, k: usize) -> (usize, u8) {
        match *self {
            Role::Torso(i) => (i, 0),
            Role::Leg(i) => (i, if i == k { 2 } else { 1 }),
            Role::Node(i) => (i, if i == k { 1 } else { 2 }),
            Role::Connective(i) => (i, 3),
            Role::Tail => (k + 1, 0),
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hook() {
            Some(i) => write!(f, "{}{}", self.name(), i),
            None => f.write_str(self.name()),
        }
    }
}

/// A plumbing tree whose vertices carry their anatomical role.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plumbing {
    pub tree: WeightedTree,
    pub roles: BTreeMap<VertexId, Role>,
}

impl Plumbing {
    pub fn role(&self, v: VertexId) -> Option<Role> {
        self.roles.get(&v).copied()
    }

    /// Vertices of a role in id order.
    pub fn with_role(&self, role: Role) -> Vec<VertexId> {
        self.roles.iter().filter(|(_, &r)| r == role).map(|(&v, _)| v).collect()
    }

    pub fn weights_of(&self, role: Role) -> Vec<i64> {
        self.with_role(role).into_iter().map(|v| self.tree.weight(v).unwrap()).collect()
    }

    /// Renumbers vertices to 0.. by role (see [`Role`]) and then by id.
    pub fn in_role_order(&self, hooks: usize) -> Plumbing {
        let mut order: Vec<VertexId> = self.tree.ids().collect();
        order.sort_by_key(|v| (self.roles[v].order_key(hooks), *v));
        let tree = self.tree.relabel(&order).expect("permutation");
        let roles = order.iter().enumerate().map(|(i, v)| (VertexId(i as u32), self.roles[v])).collect();
        Plumbing { tree, roles }
    }
}

struct Builder {
    weights: Vec<(VertexId, i64)>,
    edges: Vec<(VertexId, VertexId)>,
    roles: BTreeMap<VertexId, Role>,
}

impl Builder {
    fn new() -> Self {
        Builder { weights: Vec::new(), edges: Vec::new(), roles: BTreeMap::new() }
    }

    fn add(&mut self, w: i64, role: Role) -> VertexId {
        let v = VertexId(self.weights.len() as u32);
        self.weights.push((v, w));
        self.roles.insert(v, role);
        v
    }

    /// A path of vertices in the given order; returns (first, last).
    fn chain(&mut self, ws: &[i64], role: Role) -> Option<(VertexId, VertexId)> {
        let mut ends = None;
        for &w in ws {
            let v = self.add(w, role);
            ends = match ends {
                None => Some((v, v)),
                Some((first, last)) => {
                    self.edges.push((last, v));
                    Some((first, v))
                }
            };
        }
        ends
    }

    fn link(&mut self, a: VertexId, b: VertexId) {
        self.edges.push((a, b));
    }

    fn finish(self) -> Result<Plumbing, TreeError> {
        Ok(Plumbing { tree: WeightedTree::new(self.weights, self.edges)?, roles: self.roles })
    }
}

fn neg_cf(num: u64, den: u64) -> Result<Vec<i64>, CablingError> {
    let x = PositiveRational::new(num, den).map_err(|_| CablingError::Overflow)?;
    let s = expand_neg_cf(&x).map_err(|_| CablingError::Overflow)?;
    s.to_i64_vec().ok_or(CablingError::Overflow)
}

/// The plumbing read off the splice diagram, before any blow-downs.
///
/// Hook i: torso (−c₂,…,−c_s) left to right with [c₂,…,c_s] = α/(α−p),
/// leg (−d₂,…,−d_t) bottom to top with [d₁,…,d_t] = α/p, both ending at a
/// node of weight −1. Node i is joined to the left end of torso i+1
/// through Z_i (−p_iα_i) and M_i (−1). The leaf N hangs off node k.
pub fn raw_plumbing(s: &SurgerySpec) -> Result<Plumbing, CablingError> {
    let tower = s.knot();
    if !tower.is_algebraic() {
        return Err(CablingError::NotAlgebraic);
    }
    let mut b = Builder::new();
    let mut pending: Option<(VertexId, VertexId)> = None;
    let mut last_node = None;
    for (idx, &(p, alpha)) in tower.pairs().iter().enumerate() {
        let i = idx + 1;
        // T(p, α) = T(α, p): the first hook may swap its two arms
        let (p, alpha) = if idx == 0 && alpha < p { (alpha, p) } else { (p, alpha) };
        if p == 1 {
            return Err(CablingError::Unknot);
        }
        let corner = corner_weight(p, alpha)?;
        let torso: Vec<i64> = neg_cf(alpha, alpha - p)?.into_iter().map(|c| -c).collect();
        let leg: Vec<i64> = neg_cf(alpha, p)?.into_iter().skip(1).map(|d| -d).collect();
        let (t_first, t_last) = b.chain(&torso, Role::Torso(i)).unwrap();
        let l_top = b.chain(&leg, Role::Leg(i)).map(|(_, top)| top);
        let node = b.add(-corner, Role::Node(i));
        b.link(t_last, node);
        if let Some(top) = l_top {
            b.link(top, node);
        }
        if let Some((m, _)) = pending.take() {
            b.link(m, t_first);
        }
        if idx + 1 < tower.len() {
            let pa = (p as i64).checked_mul(alpha as i64).ok_or(CablingError::Overflow)?;
            let z = b.add(-pa, Role::Connective(i));
            let m = b.add(-1, Role::Connective(i));
            b.link(node, z);
            b.link(z, m);
            pending = Some((m, z));
        }
        last_node = Some(node);
    }
    let leaf = b.add(s.big_n(), Role::Tail);
    b.link(last_node.unwrap(), leaf);
    b.finish().map_err(|_| CablingError::Unsupported("internal: raw plumbing is not a tree"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReducedError {
    Cabling(CablingError),
    /// N < 0: the plumbing is already normal and has positive index.
    NoNegativeDefiniteForm { big_n: i64 },
    /// The calculus stopped on a form that is not negative definite.
    NotNegativeDefinite(WeightedTree),
}

impl fmt::Display for ReducedError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReducedError::Cabling(e) => e.fmt(f),
            ReducedError::NoNegativeDefiniteForm { big_n } => {
                write!(f, "N = {} < 0: no negative definite plumbing", big_n)
            }
            ReducedError::NotNegativeDefinite(t) => {
                write!(f, "reduction ends on a form that is not negative definite: {}", t)
            }
        }
    }
}

impl From<CablingError> for ReducedError {
    fn from(e: CablingError) -> Self {
        ReducedError::Cabling(e)
    }
}

/// A reduced plumbing together with the regime of N (N = 0 and N = 1 are
/// outside the classification).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduced {
    pub plumbing: Plumbing,
    pub regime: NRegime,
}

/// The normal form of the raw plumbing, in role order.
pub fn reduced_plumbing(s: &SurgerySpec) -> Result<Reduced, ReducedError> {
    if s.regime() == NRegime::Negative {
        return Err(ReducedError::NoNegativeDefiniteForm { big_n: s.big_n() });
    }
    let raw = raw_plumbing(s)?;
    let tree = normalize(&raw.tree);
    if !is_negative_definite(&gram_matrix(&tree)) {
        return Err(ReducedError::NotNegativeDefinite(tree));
    }
    // survivors keep their ids; merged vertices keep the node's id and
    // vertices created by flattening the leaf form the tail
    let roles = tree.ids().map(|v| (v, raw.roles.get(&v).copied().unwrap_or(Role::Tail))).collect();
    let p = Plumbing { tree, roles };
    Ok(Reduced { plumbing: p.in_role_order(s.knot().len()), regime: s.regime() })
}

/// Parameters of a two-iteration tower in the closed-form families:
/// α₁ = k₁p₁ + 1 and ⌈α₂/p₂⌉ = k₂ + 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwoIterParams {
    pub p1: u64,
    pub k1: u64,
    pub p2: u64,
    pub k2: u64,
    /// α₂ ≡ −1 (mod p₂); for p₂ = 2 both congruences hold and this is set.
    pub minus_one: bool,
    pub big_n: i64,
    /// k₂ − 1 − p₁α₁, the twos left at the start of torso 2; −1 in the
    /// algebraic-only case.
    pub l: i64,
}

pub fn two_iter_params(s: &SurgerySpec) -> Result<TwoIterParams, CablingError> {
    let pairs = s.knot().pairs();
    if pairs.len() != 2 {
        return Err(CablingError::Unsupported("closed form needs exactly two iterations"));
    }
    let [(p1, a1), (p2, a2)] = [pairs[0], pairs[1]];
    if a1 % p1 != 1 || a1 == 1 {
        return Err(CablingError::Unsupported("closed form needs alpha1 = 1 mod p1, alpha1 > 1"));
    }
    let minus_one = a2 % p2 == p2 - 1;
    if !minus_one && a2 % p2 != 1 {
        return Err(CablingError::Unsupported("closed form needs alpha2 = +-1 mod p2"));
    }
    if !s.knot().is_algebraic() {
        return Err(CablingError::NotAlgebraic);
    }
    let k2 = a2.div_ceil(p2) - 1;
    Ok(TwoIterParams {
        p1,
        k1: a1 / p1,
        p2,
        k2,
        minus_one,
        big_n: s.big_n(),
        l: k2 as i64 - 1 - (p1 * a1) as i64,
    })
}

/// The reduced plumbing written down directly from the continued
/// fractions, without running the calculus.
pub fn closed_form_two_iter(s: &SurgerySpec) -> Result<Plumbing, CablingError> {
    let t = two_iter_params(s)?;
    if t.big_n < 2 {
        return Err(CablingError::Unsupported("closed form needs N >= 2"));
    }
    let (p1, p2) = (t.p1 as i64, t.p2 as i64);
    let twos = |n: i64| alloc::vec![-2i64; n.max(0) as usize];

    let mut torso1 = twos(t.k1 as i64 - 1);
    torso1.push(-(p1 + 1));
    let leg1 = twos(p1 - 1);
    let (node1, torso2, leg2) = match (t.minus_one, t.l >= 0) {
        (true, true) => {
            let mut tr = twos(t.l);
            tr.push(-3);
            tr.extend(twos(p2 - 2));
            (-2, tr, alloc::vec![-p2])
        }
        (true, false) => (-3, twos(p2 - 2), alloc::vec![-p2]),
        (false, true) => {
            let mut tr = twos(t.l);
            tr.push(-(p2 + 1));
            (-2, tr, twos(p2 - 1))
        }
        (false, false) => (-(p2 + 1), Vec::new(), twos(p2 - 1)),
    };

    let mut b = Builder::new();
    let (_, t1_end) = b.chain(&torso1, Role::Torso(1)).unwrap();
    let l1_top = b.chain(&leg1, Role::Leg(1)).map(|(_, top)| top);
    let n1 = b.add(node1, Role::Node(1));
    b.link(t1_end, n1);
    if let Some(top) = l1_top {
        b.link(top, n1);
    }
    let before_n2 = match b.chain(&torso2, Role::Torso(2)) {
        Some((first, last)) => {
            b.link(n1, first);
            last
        }
        None => n1,
    };
    let n2 = b.add(-2, Role::Node(2));
    b.link(before_n2, n2);
    let (_, l2_top) = b.chain(&leg2, Role::Leg(2)).unwrap();
    b.link(l2_top, n2);
    if let Some((tail_first, _)) = b.chain(&twos(t.big_n - 1), Role::Tail) {
        b.link(n2, tail_first);
    }
    b.finish().map_err(|_| CablingError::Unsupported("internal: closed form is not a tree"))
}

/// The dual continued fraction of α/p read as a torso, handy for display.
pub fn torso_weights(p: u64, alpha: u64) -> Result<Vec<i64>, CablingError> {
    let x = PositiveRational::new(alpha, p).map_err(|_| CablingError::Overflow)?;
    let d = dual_point_rule(&expand_neg_cf(&x).map_err(|_| CablingError::Overflow)?);
    Ok(d.to_i64_vec().ok_or(CablingError::Overflow)?.into_iter().map(|c| -c).collect())
}
