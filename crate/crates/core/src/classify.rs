//! Donaldson verdicts for surgeries on two-iteration cables, the
//! embeddings the classification predicts, sweeps and audits.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::cabling::{
    closed_form_two_iter, reduced_plumbing, two_iter_params, CablingError, CableTower, NRegime,
    Plumbing, ReducedError, Role, SurgerySpec,
};
use crate::lattice::{
    find_embedding_with, verify_embedding, EmbeddingMatrix, LatticeError, SearchBudget,
    SearchOptions, SearchOutcome,
};
use crate::plumbing::gram_matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// N < 0.
    NoNegativeDefiniteForm,
    /// N = 0: the surgery may be reducible.
    ReducibleBoundary,
    /// N = 1: outside the classification.
    OutOfScope,
    /// No embedding exists, so no rational homology ball.
    ObstructionFails,
    /// An embedding exists; the obstruction says nothing.
    ObstructionPasses(EmbeddingMatrix),
    Indeterminate(SearchBudget),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::NoNegativeDefiniteForm => "no-negative-definite-form",
            Verdict::ReducibleBoundary => "reducible-boundary",
            Verdict::OutOfScope => "out-of-scope",
            Verdict::ObstructionFails => "fails",
            Verdict::ObstructionPasses(_) => "passes",
            Verdict::Indeterminate(_) => "indeterminate",
        }
    }

    pub fn passes(&self) -> bool {
        matches!(self, Verdict::ObstructionPasses(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassifyError {
    Cabling(CablingError),
    Reduce(ReducedError),
    Lattice(LatticeError),
    /// The two construction paths disagree.
    PathMismatch,
}

impl fmt::Display for ClassifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifyError::Cabling(e) => e.fmt(f),
            ClassifyError::Reduce(e) => e.fmt(f),
            ClassifyError::Lattice(e) => e.fmt(f),
            ClassifyError::PathMismatch => {
                f.write_str("closed form and calculus reduction give different graphs")
            }
        }
    }
}

impl From<CablingError> for ClassifyError {
    fn from(e: CablingError) -> Self {
        ClassifyError::Cabling(e)
    }
}

impl From<ReducedError> for ClassifyError {
    fn from(e: ReducedError) -> Self {
        ClassifyError::Reduce(e)
    }
}

impl From<LatticeError> for ClassifyError {
    fn from(e: LatticeError) -> Self {
        ClassifyError::Lattice(e)
    }
}

/// How the negative definite plumbing is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ConstructionPath {
    #[default]
    Calculus,
    ClosedForm,
    /// Build both and insist they agree.
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub path: ConstructionPath,
    pub search: SearchOptions,
}

/// The default per-tuple budget.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions::with_budget(SearchBudget::nodes(DEFAULT_NODE_BUDGET))
    }
}

impl ClassifyOptions {
    pub fn with_budget(budget: SearchBudget) -> Self {
        ClassifyOptions {
            path: ConstructionPath::default(),
            search: SearchOptions { budget, ..SearchOptions::default() },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    /// Vertices of the reduced plumbing, when one was built.
    pub rank: Option<usize>,
    pub nodes: u64,
}

/// The reduced plumbing along the chosen path.
pub fn build_plumbing(s: &SurgerySpec, path: ConstructionPath) -> Result<Plumbing, ClassifyError> {
    Ok(match path {
        ConstructionPath::Calculus => reduced_plumbing(s)?.plumbing,
        ConstructionPath::ClosedForm => closed_form_two_iter(s)?,
        ConstructionPath::Both => {
            let a = reduced_plumbing(s)?.plumbing;
            if closed_form_two_iter(s)? != a {
                return Err(ClassifyError::PathMismatch);
            }
            a
        }
    })
}

pub fn classify_with(s: &SurgerySpec, opts: &ClassifyOptions) -> Result<Classification, ClassifyError> {
    two_iter_params(s)?;
    let early = |verdict| Ok(Classification { verdict, rank: None, nodes: 0 });
    match s.regime() {
        NRegime::Negative => return early(Verdict::NoNegativeDefiniteForm),
        NRegime::Zero => return early(Verdict::ReducibleBoundary),
        NRegime::One => return early(Verdict::OutOfScope),
        NRegime::Standard => {}
    }
    let p = build_plumbing(s, opts.path)?;
    let g = gram_matrix(&p.tree);
    let report = find_embedding_with(&g, g.dim(), &opts.search)?;
    let verdict = match report.outcome {
        SearchOutcome::Found(m) => Verdict::ObstructionPasses(m),
        SearchOutcome::None => Verdict::ObstructionFails,
        SearchOutcome::Indeterminate => Verdict::Indeterminate(opts.search.budget),
    };
    Ok(Classification { verdict, rank: Some(g.dim()), nodes: report.nodes })
}

/// Classifies S³ₙ(T(p₁,α₁;p₂,α₂)) with α₁ ≡ 1 (mod p₁), α₂ ≡ ±1 (mod p₂).
pub fn classify_one(s: &SurgerySpec, budget: SearchBudget) -> Result<Verdict, ClassifyError> {
    Ok(classify_with(s, &ClassifyOptions::with_budget(budget))?.verdict)
}

/// How the first family of the classification is written.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FamilyForm {
    /// α₂ = p₂(p₁+1) − 1.
    Printed,
    /// α₂ = p₂(p₁+1)² − 1, the solution of the embedding equations.
    #[default]
    Derived,
}

impl fmt::Display for FamilyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyForm::Printed => "printed",
            FamilyForm::Derived => "derived",
        })
    }
}

/// Membership in the two families (p₁,p₁+1; p₂,α₂; p₂²(p₁+1)²) and
/// (2,7; p₂,16p₂−1; 16p₂²).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct FamilyPredicate {
    pub form: FamilyForm,
}

/// Which family a tuple belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    First,
    Second,
}

impl FamilyPredicate {
    pub fn new(form: FamilyForm) -> Self {
        FamilyPredicate { form }
    }

    pub fn family_of(&self, p1: u64, a1: u64, p2: u64, a2: u64, n: i64) -> Option<Family> {
        let n = u64::try_from(n).ok()?;
        let s = p1 + 1;
        let a2_first = match self.form {
            FamilyForm::Printed => p2 * s - 1,
            FamilyForm::Derived => p2 * s * s - 1,
        };
        if a1 == s && a2 == a2_first && n == p2 * p2 * s * s {
            Some(Family::First)
        } else if p1 == 2 && a1 == 7 && a2 == 16 * p2 - 1 && n == 16 * p2 * p2 {
            Some(Family::Second)
        } else {
            None
        }
    }

    pub fn contains(&self, s: &SurgerySpec) -> bool {
        match s.knot().pairs() {
            &[(p1, a1), (p2, a2)] => self.family_of(p1, a1, p2, a2, s.n()).is_some(),
            _ => false,
        }
    }

    /// The family members with the given p₁ and p₂.
    pub fn members(&self, p1: u64, p2: u64) -> Vec<SurgerySpec> {
        let s = p1 + 1;
        let a2 = match self.form {
            FamilyForm::Printed => p2 * s - 1,
            FamilyForm::Derived => p2 * s * s - 1,
        };
        let mut out = Vec::new();
        let mut push = |pairs: Vec<(u64, u64)>, n: u64| {
            if let Ok(k) = CableTower::new(pairs) {
                out.push(SurgerySpec::new(k, n as i64).unwrap());
            }
        };
        push(vec![(p1, s), (p2, a2)], p2 * p2 * s * s);
        if p1 == 2 {
            push(vec![(2, 7), (p2, 16 * p2 - 1)], 16 * p2 * p2);
        }
        out
    }
}

/// The explicit embedding read off from the solution of the embedding
/// equations, for the two families. `None` outside them.
pub fn known_witness(s: &SurgerySpec) -> Option<EmbeddingMatrix> {
    let fam = match s.knot().pairs() {
        &[(p1, a1), (p2, a2)] => FamilyPredicate::new(FamilyForm::Derived).family_of(p1, a1, p2, a2, s.n())?,
        _ => return None,
    };
    let t = two_iter_params(s).ok()?;
    let (p1, p2) = (t.p1 as usize, t.p2 as usize);
    assert_eq!(t.big_n, t.p2 as i64, "family tuples have N = p2");
    assert_eq!(s.n(), t.big_n + (t.p2 * s.knot().pairs()[1].1) as i64);
    let plumbing = closed_form_two_iter(s).ok()?;
    let ix = |role: Role| plumbing.with_role(role).into_iter().map(|v| v.0 as usize).collect::<Vec<_>>();
    let torso1 = ix(Role::Torso(1));
    let leg1 = ix(Role::Leg(1));
    let node1 = ix(Role::Node(1));
    let torso2 = ix(Role::Torso(2));
    let node2 = ix(Role::Node(2));
    let leg2 = ix(Role::Leg(2));
    let tail = ix(Role::Tail);
    let r = plumbing.tree.len();
    let mut vs = vec![vec![0i64; r]; r];
    let l = t.l as usize;
    // torso 2 is l twos, the (−3), then p₂−2 twos
    let three = torso2[l];
    let g_chain: Vec<usize> = torso2[l + 1..].iter().chain(&node2).chain(&tail).copied().collect();
    let g0;
    match fam {
        Family::First => {
            // f₁…f_{2p₁}, h, g₁…
            let f0 = 0;
            let h = 2 * p1;
            g0 = h + 1;
            let f_chain: Vec<usize> = leg1.iter().chain(&node1).chain(&torso2[..l]).copied().collect();
            for (j, &v) in f_chain.iter().enumerate() {
                vs[v][f0 + j] = 1;
                vs[v][f0 + j + 1] = -1;
            }
            let v = torso1[0];
            for j in p1..=p1 + l {
                vs[v][f0 + j] = 1;
            }
            vs[v][h] = -1;
            vs[three][f0 + p1 + l] = 1;
            vs[three][h] = 1;
            vs[three][g0] = -1;
        }
        Family::Second => {
            // e₁e₂e₃, f₁f₂f₃, g₁…
            let (e0, f0) = (0, 3);
            g0 = 6;
            for (j, &v) in torso1[..2].iter().enumerate() {
                vs[v][e0 + j] = 1;
                vs[v][e0 + j + 1] = -1;
            }
            let v = torso1[2];
            vs[v][e0] = -1;
            vs[v][e0 + 1] = -1;
            vs[v][f0 + 2] = 1;
            for (j, &v) in leg1.iter().chain(&node1).enumerate() {
                vs[v][f0 + j] = 1;
                vs[v][f0 + j + 1] = -1;
            }
            vs[three][g0] = -1;
            vs[three][f0] = -1;
            vs[three][f0 + 1] = -1;
        }
    }
    for (j, &v) in g_chain.iter().enumerate() {
        vs[v][g0 + j] = 1;
        vs[v][g0 + j + 1] = -1;
    }
    let u = leg2[0];
    for j in p2 - 1..p2 - 1 + t.big_n as usize {
        vs[u][g0 + j] = 1;
    }
    let m = EmbeddingMatrix::new(r, vs).ok()?;
    assert!(
        verify_embedding(&gram_matrix(&plumbing.tree), &m) == Ok(true),
        "witness for {} does not verify",
        s
    );
    Some(m)
}

/// Which congruence classes of α₂ to include.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Congruence {
    MinusOne,
    PlusOne,
    #[default]
    Both,
}

/// A finite box of parameters: α₁ = k₁p₁ + 1, α₂ = k₂p₂ + p₂ − 1 or
/// k₂p₂ + 1, n = N + p₂α₂.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRange {
    pub p1: Vec<u64>,
    pub k1: Vec<u64>,
    pub p2: Vec<u64>,
    pub k2: Vec<u64>,
    pub big_n: Vec<i64>,
    pub congruence: Congruence,
}

impl Default for SweepRange {
    fn default() -> Self {
        SweepRange {
            p1: vec![2, 3],
            k1: (1..=3).collect(),
            p2: vec![2, 3],
            k2: (1..=25).collect(),
            big_n: (2..=6).collect(),
            congruence: Congruence::Both,
        }
    }
}

impl SweepRange {
    pub fn empty() -> Self {
        SweepRange {
            p1: Vec::new(),
            k1: Vec::new(),
            p2: Vec::new(),
            k2: Vec::new(),
            big_n: Vec::new(),
            congruence: Congruence::Both,
        }
    }

    /// Algebraic tuples in the box, sorted by (p₁,α₁,p₂,α₂,n), no repeats.
    pub fn specs(&self) -> Vec<SurgerySpec> {
        let mut keys = Vec::new();
        for &p1 in &self.p1 {
            for &k1 in &self.k1 {
                for &p2 in &self.p2 {
                    for &k2 in &self.k2 {
                        let mut a2s = Vec::new();
                        if self.congruence != Congruence::PlusOne {
                            a2s.push(k2 * p2 + p2 - 1);
                        }
                        if self.congruence != Congruence::MinusOne {
                            a2s.push(k2 * p2 + 1);
                        }
                        for a2 in a2s {
                            for &bn in &self.big_n {
                                keys.push((p1, k1 * p1 + 1, p2, a2, bn + (p2 * a2) as i64));
                            }
                        }
                    }
                }
            }
        }
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .filter_map(|(p1, a1, p2, a2, n)| {
                let k = CableTower::new(vec![(p1, a1), (p2, a2)]).ok()?;
                if !k.is_algebraic() || n == 0 {
                    return None;
                }
                SurgerySpec::new(k, n).ok()
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub p1: u64,
    pub a1: u64,
    pub p2: u64,
    pub a2: u64,
    pub n: i64,
    pub big_n: i64,
    pub rank: Option<usize>,
    pub verdict: Verdict,
    pub nodes: u64,
}

impl SweepRow {
    pub fn key(&self) -> (u64, u64, u64, u64, i64) {
        (self.p1, self.a1, self.p2, self.a2, self.n)
    }
}

pub fn sweep_row(s: &SurgerySpec, opts: &ClassifyOptions) -> Result<SweepRow, ClassifyError> {
    let c = classify_with(s, opts)?;
    let [(p1, a1), (p2, a2)] = [s.knot().pairs()[0], s.knot().pairs()[1]];
    Ok(SweepRow {
        p1,
        a1,
        p2,
        a2,
        n: s.n(),
        big_n: s.big_n(),
        rank: c.rank,
        verdict: c.verdict,
        nodes: c.nodes,
    })
}

/// Every tuple of the range, in order, one after another.
pub fn sweep(range: &SweepRange, opts: &ClassifyOptions) -> Result<Vec<SweepRow>, ClassifyError> {
    range.specs().iter().map(|s| sweep_row(s, opts)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub tuple: (u64, u64, u64, u64, i64),
    pub predicted_pass: bool,
    pub verdict: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AuditReport {
    pub agreements: usize,
    pub disagreements: Vec<Disagreement>,
    pub indeterminate: Vec<(u64, u64, u64, u64, i64)>,
    /// Rows with N < 2, which the classification does not cover.
    pub skipped: usize,
}

impl AuditReport {
    pub fn is_perfect(&self) -> bool {
        self.disagreements.is_empty() && self.indeterminate.is_empty()
    }
}

/// Compares verdicts with family membership: members must pass, everyone
/// else must fail.
pub fn theorem_audit(rows: &[SweepRow], predicate: FamilyPredicate) -> AuditReport {
    let mut rep = AuditReport::default();
    for row in rows {
        let member = predicate.family_of(row.p1, row.a1, row.p2, row.a2, row.n).is_some();
        match &row.verdict {
            Verdict::Indeterminate(_) => rep.indeterminate.push(row.key()),
            Verdict::ObstructionPasses(_) | Verdict::ObstructionFails => {
                if row.verdict.passes() == member {
                    rep.agreements += 1;
                } else {
                    rep.disagreements.push(Disagreement {
                        tuple: row.key(),
                        predicted_pass: member,
                        verdict: row.verdict.label(),
                    });
                }
            }
            _ => rep.skipped += 1,
        }
    }
    rep
}
