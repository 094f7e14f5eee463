//! The knowledge base and the rule engine that saturates bounds over it.
//!
//! Queries on `C_N^r` first settle every `C_d^r` with `d | N` in ascending
//! order, so the composition and lifting rules only ever read finished
//! records of proper divisors. Each rule can only raise a lower bound or
//! lower an upper bound, so disabling rules never tightens a record.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::rules::{self, Factorization};
use super::threshold::theorem1_threshold;
use super::{BigGroup, BoundRecord, Evidence, Rule, TraceStep};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::property_d::{D0Outcome, D0Verdict, PropertyDReport};
use crate::search::{ExtremalCertificate, Invariant};

/// Divisor lattices larger than this skip the composition and lifting rules.
const MAX_DIVISORS: u128 = 2048;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Known {
    value: BigUint,
    evidence: Evidence,
    source: String,
}

/// Stored facts plus the set of enabled rules.
#[derive(Clone, Debug, Default)]
pub struct KnowledgeBase {
    disabled: BTreeSet<Rule>,
    values: BTreeMap<(Invariant, BigGroup), Known>,
    /// `(n, r) → c` for `C_n^r` with Property D.
    property_d: BTreeMap<(BigUint, usize), Known>,
    /// `(n, r, c)` for `C_n^r` with Property D0 with respect to `c`.
    d0: BTreeMap<(BigUint, usize, u64), Known>,
}

/// The base seeded with the stored values; the parametric families are rules.
pub fn seed_knowledge_base() -> KnowledgeBase {
    let mut kb = KnowledgeBase::default();
    for (r, s) in [(5usize, 91u32), (6, 225)] {
        kb.values.insert(
            (Invariant::Egz, BigGroup::homocyclic(3u32.into(), r)),
            Known {
                value: s.into(),
                evidence: Evidence::Cited,
                source: format!("published value s(C_3^{r}) = {s}"),
            },
        );
    }
    kb
}

/// The tightest record derivable from `kb` for `invariant` of `group`.
pub fn apply_rules(kb: &KnowledgeBase, invariant: Invariant, group: &BigGroup) -> BoundRecord {
    kb.query(invariant, group)
}

impl KnowledgeBase {
    pub fn disable(&mut self, rule: Rule) {
        self.disabled.insert(rule);
    }

    pub fn enable(&mut self, rule: Rule) {
        self.disabled.remove(&rule);
    }

    pub fn is_enabled(&self, rule: Rule) -> bool {
        !self.disabled.contains(&rule)
    }

    /// The stored exact values as records.
    pub fn records(&self) -> Vec<BoundRecord> {
        self.values
            .iter()
            .map(|((inv, g), k)| BoundRecord {
                invariant: *inv,
                group: g.clone(),
                lower: k.value.clone(),
                upper: Some(k.value.clone()),
                exact: true,
                trace: vec![known_step(*inv, g, k)],
            })
            .collect()
    }

    /// Stores an exact value established outside the rule engine.
    pub fn insert_value(
        &mut self,
        invariant: Invariant,
        group: BigGroup,
        value: BigUint,
        evidence: Evidence,
        source: String,
    ) {
        self.values.insert(
            (invariant, group),
            Known {
                value,
                evidence,
                source,
            },
        );
    }

    /// Stores the value of an exhaustive search.
    pub fn add_certificate(&mut self, cert: &ExtremalCertificate) -> Result<()> {
        if !cert.exhaustive {
            return Err(Error::NonExhaustiveCertificate);
        }
        self.insert_value(
            cert.invariant,
            BigGroup::from(&cert.group),
            cert.value.into(),
            Evidence::MachineVerified,
            format!("exhaustive search ({} nodes)", cert.stats.nodes_explored),
        );
        Ok(())
    }

    /// Stores a D0 verdict; returns whether it added a fact.
    pub fn add_d0_verdict(&mut self, verdict: &D0Verdict) -> bool {
        let Some((n, r)) = verdict.group.homocyclic_params() else {
            return false;
        };
        if verdict.outcome != D0Outcome::Holds {
            return false;
        }
        self.d0.insert(
            (n.into(), r, verdict.c),
            Known {
                value: verdict.c.into(),
                evidence: Evidence::MachineVerified,
                source: format!("exhaustive D0 search ({} nodes)", verdict.nodes_explored),
            },
        );
        true
    }

    /// Stores a Property D report; returns whether it added a fact.
    pub fn add_property_d(&mut self, group: &GroupSpec, report: &PropertyDReport) -> bool {
        let (Some((n, r)), true, Some(c)) = (group.homocyclic_params(), report.holds, report.c)
        else {
            return false;
        };
        self.property_d.insert(
            (n.into(), r),
            Known {
                value: c.into(),
                evidence: Evidence::MachineVerified,
                source: "extremal sequences checked against an exhaustive certificate".into(),
            },
        );
        true
    }

    pub fn query(&self, invariant: Invariant, group: &BigGroup) -> BoundRecord {
        let mut session = Session::new(self);
        let iv = match invariant {
            Invariant::Davenport => session.d_interval(group),
            Invariant::Egz => session.s_interval(group),
            Invariant::Squarefree => session.g_interval(group),
        };
        iv.record(invariant, group)
    }

    /// `c` and the derivation if `C_n^r` is known to have Property D.
    pub fn property_d_evidence(&self, n: &BigUint, r: usize) -> Option<(u64, Vec<TraceStep>)> {
        let fact = Session::new(self).property_d(n, r)?;
        Some((fact.c, fact.trace.clone()))
    }

    /// The derivation if `C_n^r` is known to have Property D0 with respect to `c`.
    pub fn d0_evidence(&self, n: &BigUint, r: usize, c: u64) -> Option<Vec<TraceStep>> {
        Session::new(self).d0(n, r, c).map(|t| t.1.clone())
    }
}

/// Premises of the lifting theorem: Property D for `C_m^r` and D0 for
/// `C_n^r` with respect to `c`, `s(C_n^r) ≤ c(n−1)+n+1`,
/// `n ≥ (c−1)²+1` and `m` at least the threshold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem1Hypotheses {
    pub m: BigUint,
    pub n: BigUint,
    pub r: usize,
    pub c: BigUint,
    pub s_upper_for_cnr: BigUint,
    pub d_property_m: Evidence,
    pub d0_property_n: Evidence,
}

impl Theorem1Hypotheses {
    /// Checks the numeric hypotheses and returns the bound `c(mn−1)+1` on `s(C_{mn}^r)`.
    pub fn conclusion(&self) -> Result<BigUint> {
        let Self { m, n, r, c, .. } = self;
        if c.is_zero() || m.is_zero() || n.is_zero() {
            return Err(Error::HypothesisViolation(
                "m, n and c must be positive".into(),
            ));
        }
        let cap = c * (n - 1u32) + n + 1u32;
        if self.s_upper_for_cnr > cap {
            return Err(Error::HypothesisViolation(format!(
                "s(C_{n}^{r}) <= {} does not imply s(C_{n}^{r}) <= c(n-1)+n+1 = {cap}",
                self.s_upper_for_cnr
            )));
        }
        let t = theorem1_threshold(n, *r, c)?;
        if m < &t.value {
            return Err(Error::HypothesisViolation(format!(
                "m = {m} is below the threshold {}",
                t.value
            )));
        }
        Ok(c * (m * n - 1u32) + 1u32)
    }
}

fn known_step(inv: Invariant, g: &BigGroup, k: &Known) -> TraceStep {
    TraceStep {
        rule: Rule::KnownValue,
        conclusion: format!("{}({g}) = {}", inv.symbol(), k.value),
        premises: vec![k.source.clone()],
        evidence: k.evidence,
        note: None,
    }
}

fn step(rule: Rule, conclusion: String, premises: Vec<String>, evidence: Evidence) -> TraceStep {
    TraceStep {
        rule,
        conclusion,
        premises,
        evidence,
        note: None,
    }
}

/// Concatenates traces, keeping the first copy of each step.
fn merge<'a>(parts: impl IntoIterator<Item = &'a [TraceStep]>) -> Vec<TraceStep> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for part in parts {
        for s in part {
            if seen.insert((s.rule, s.conclusion.clone())) {
                out.push(s.clone());
            }
        }
    }
    out
}

fn hom(n: &BigUint, r: usize) -> BigGroup {
    BigGroup::homocyclic(n.clone(), r)
}

#[derive(Clone, Debug)]
struct Interval {
    lo: BigUint,
    hi: Option<BigUint>,
    lo_trace: Vec<TraceStep>,
    hi_trace: Vec<TraceStep>,
}

impl Interval {
    fn unbounded() -> Self {
        Self {
            lo: BigUint::one(),
            hi: None,
            lo_trace: vec![],
            hi_trace: vec![],
        }
    }

    fn raise(&mut self, v: BigUint, trace: impl FnOnce() -> Vec<TraceStep>) {
        if v > self.lo {
            self.lo = v;
            self.lo_trace = trace();
        }
    }

    fn cap(&mut self, v: BigUint, trace: impl FnOnce() -> Vec<TraceStep>) {
        if self.hi.as_ref().is_none_or(|h| &v < h) {
            self.hi = Some(v);
            self.hi_trace = trace();
        }
    }

    fn exact(&self) -> Option<&BigUint> {
        (self.hi.as_ref() == Some(&self.lo)).then_some(&self.lo)
    }

    /// Trace supporting both ends.
    fn trace(&self) -> Vec<TraceStep> {
        merge([self.lo_trace.as_slice(), self.hi_trace.as_slice()])
    }

    fn record(&self, invariant: Invariant, group: &BigGroup) -> BoundRecord {
        if let Some(h) = &self.hi {
            assert!(
                &self.lo <= h,
                "inconsistent bounds for {}({group}): {} > {h}",
                invariant.symbol(),
                self.lo
            );
        }
        BoundRecord {
            invariant,
            group: group.clone(),
            lower: self.lo.clone(),
            upper: self.hi.clone(),
            exact: self.exact().is_some(),
            trace: self.trace(),
        }
    }
}

struct PdFact {
    c: u64,
    evidence: Evidence,
    trace: Vec<TraceStep>,
}

/// Evidence for a D0 fact and the steps that establish it.
type D0Fact = (Evidence, Vec<TraceStep>);

/// Memoized state of one query.
struct Session<'a> {
    kb: &'a KnowledgeBase,
    s: HashMap<BigGroup, Rc<Interval>>,
    g: HashMap<BigGroup, Rc<Interval>>,
    d: HashMap<BigGroup, Rc<Interval>>,
    pd: HashMap<(BigUint, usize), Option<Rc<PdFact>>>,
    d0: HashMap<(BigUint, usize, u64), Option<Rc<D0Fact>>>,
    thresholds: HashMap<(BigUint, usize, u64), Option<BigUint>>,
    factors: HashMap<BigUint, Rc<Factorization>>,
}

fn evidence_of(parts: &[Evidence]) -> Evidence {
    if parts.iter().all(|e| *e == Evidence::Cited) {
        Evidence::Cited
    } else if parts.contains(&Evidence::MachineVerified) {
        Evidence::MachineVerified
    } else {
        Evidence::Derived
    }
}

impl<'a> Session<'a> {
    fn new(kb: &'a KnowledgeBase) -> Self {
        Self {
            kb,
            s: HashMap::new(),
            g: HashMap::new(),
            d: HashMap::new(),
            pd: HashMap::new(),
            d0: HashMap::new(),
            thresholds: HashMap::new(),
            factors: HashMap::new(),
        }
    }

    fn on(&self, rule: Rule) -> bool {
        self.kb.is_enabled(rule)
    }

    fn factor(&mut self, n: &BigUint) -> Rc<Factorization> {
        if let Some(f) = self.factors.get(n) {
            return f.clone();
        }
        let f = Rc::new(Factorization::of(n));
        self.cache_divisors(n, &f);
        f
    }

    fn cache_divisors(&mut self, n: &BigUint, f: &Factorization) {
        if f.divisor_count() <= MAX_DIVISORS {
            for (d, fd) in f.divisors_factored() {
                self.factors.entry(d).or_insert_with(|| Rc::new(fd));
            }
        } else {
            self.factors.insert(n.clone(), Rc::new(f.clone()));
        }
    }

    /// Proper divisors `k` of `n` with `1 < k < n`, when the lattice is small enough.
    fn proper_divisors(&mut self, n: &BigUint) -> Vec<BigUint> {
        let f = self.factor(n);
        if f.divisor_count() > MAX_DIVISORS {
            return vec![];
        }
        f.divisors()
            .into_iter()
            .filter(|d| !d.is_one() && d != n)
            .collect()
    }

    fn known(&self, inv: Invariant, g: &BigGroup) -> Option<&'a Known> {
        if !self.on(Rule::KnownValue) {
            return None;
        }
        self.kb.values.get(&(inv, g.clone()))
    }

    fn d_interval(&mut self, g: &BigGroup) -> Rc<Interval> {
        if let Some(iv) = self.d.get(g) {
            return iv.clone();
        }
        let mut iv = Interval::unbounded();
        if let Some(k) = self.known(Invariant::Davenport, g) {
            let t = vec![known_step(Invariant::Davenport, g, k)];
            iv.raise(k.value.clone(), || t.clone());
            iv.cap(k.value.clone(), || t);
        }
        if self.on(Rule::RankAtMostTwo) {
            if let Some((_, d)) = rules::rank_two(g) {
                let t = vec![step(
                    Rule::RankAtMostTwo,
                    format!("D({g}) = {d}"),
                    vec![],
                    Evidence::Cited,
                )];
                iv.raise(d.clone(), || t.clone());
                iv.cap(d, || t);
            }
        }
        let iv = Rc::new(iv);
        self.d.insert(g.clone(), iv.clone());
        iv
    }

    fn s_interval(&mut self, g: &BigGroup) -> Rc<Interval> {
        if let Some(iv) = self.s.get(g) {
            return iv.clone();
        }
        if let Some((n, r)) = g.homocyclic_params() {
            let (n, r) = (n.clone(), r);
            for d in self.proper_divisors(&n) {
                let h = hom(&d, r);
                if !self.s.contains_key(&h) {
                    let iv = Rc::new(self.compute_s(&h));
                    self.s.insert(h, iv);
                }
            }
        }
        let iv = Rc::new(self.compute_s(g));
        self.s.insert(g.clone(), iv.clone());
        iv
    }

    fn exact_s(
        &mut self,
        g: &BigGroup,
        value: BigUint,
        rule: Rule,
        premises: Vec<String>,
        iv: &mut Interval,
    ) {
        let t = vec![step(
            rule,
            format!("s({g}) = {value}"),
            premises,
            Evidence::Cited,
        )];
        iv.raise(value.clone(), || t.clone());
        iv.cap(value, || t);
    }

    fn compute_s(&mut self, g: &BigGroup) -> Interval {
        let mut iv = Interval::unbounded();
        let exp = g.exponent();
        let hp = g.homocyclic_params().map(|(n, r)| (n.clone(), r));

        if let Some(k) = self.known(Invariant::Egz, g) {
            let t = vec![known_step(Invariant::Egz, g, k)];
            iv.raise(k.value.clone(), || t.clone());
            iv.cap(k.value.clone(), || t);
        }
        if self.on(Rule::RankAtMostTwo) {
            if let Some((s, _)) = rules::rank_two(g) {
                self.exact_s(g, s, Rule::RankAtMostTwo, vec![], &mut iv);
            }
        }
        if self.on(Rule::TwoPowerMixed) {
            if let Some(s) = rules::two_power_mixed(g) {
                self.exact_s(g, s, Rule::TwoPowerMixed, vec![], &mut iv);
            }
        }
        if let Some((n, r)) = &hp {
            let f = self.factor(n);
            if let Some((rule, c)) = rules::homocyclic_family(&f, *r) {
                if self.on(rule) {
                    self.exact_s(g, rules::linear(c, n), rule, vec![], &mut iv);
                }
            }
        }
        if self.on(Rule::OddPGroupDavenport) {
            self.odd_p_group(g, &mut iv);
        }
        if self.on(Rule::SylowDivisibility) {
            self.sylow_divisibility(g, &mut iv);
        }
        if self.on(Rule::OrderPlusExponent) {
            let v = g.order() + &exp - 1u32;
            iv.cap(v.clone(), || {
                vec![step(
                    Rule::OrderPlusExponent,
                    format!("s({g}) <= {v}"),
                    vec![],
                    Evidence::Cited,
                )]
            });
        }
        if self.on(Rule::ExponentFloor) {
            iv.raise(exp.clone(), || {
                vec![step(
                    Rule::ExponentFloor,
                    format!("s({g}) >= {exp}"),
                    vec![],
                    Evidence::Cited,
                )]
            });
        }
        if let Some((n, r)) = &hp {
            self.homocyclic_lower(g, n, *r, &mut iv);
        }
        if let Some(k) = self.known(Invariant::Squarefree, g) {
            let gt = known_step(Invariant::Squarefree, g, k);
            let premise = gt.conclusion.clone();
            if self.on(Rule::SquarefreeSandwich) {
                let lo = k.value.clone();
                iv.raise(lo.clone(), || {
                    vec![
                        gt.clone(),
                        step(
                            Rule::SquarefreeSandwich,
                            format!("s({g}) >= {lo}"),
                            vec![premise.clone()],
                            Evidence::Cited,
                        ),
                    ]
                });
                if k.value >= BigUint::one() {
                    let hi = (&k.value - 1u32) * (&exp - 1u32) + 1u32;
                    iv.cap(hi.clone(), || {
                        vec![
                            gt.clone(),
                            step(
                                Rule::SquarefreeSandwich,
                                format!("s({g}) <= {hi}"),
                                vec![premise.clone()],
                                Evidence::Cited,
                            ),
                        ]
                    });
                }
            }
            if self.on(Rule::TernaryCapIdentity)
                && hp.as_ref().is_some_and(|(n, _)| n == &BigUint::from(3u32))
            {
                let v = BigUint::from(2u32) * &k.value - 1u32;
                let t = vec![
                    gt.clone(),
                    step(
                        Rule::TernaryCapIdentity,
                        format!("s({g}) = {v}"),
                        vec![premise],
                        Evidence::Cited,
                    ),
                ];
                iv.raise(v.clone(), || t.clone());
                iv.cap(v, || t);
            }
        }
        if let Some((n, r)) = &hp {
            if self.on(Rule::SubgroupComposition) {
                self.composition(g, n, *r, &mut iv);
            }
            if self.on(Rule::LiftingTheorem) {
                self.lifting(g, n, *r, &mut iv);
            }
        }
        iv
    }

    fn homocyclic_lower(&mut self, g: &BigGroup, n: &BigUint, r: usize, iv: &mut Interval) {
        if self.on(Rule::BinaryCubeLowerBound) {
            let v = rules::pow2(r) * (n - 1u32) + 1u32;
            iv.raise(v.clone(), || {
                vec![step(
                    Rule::BinaryCubeLowerBound,
                    format!("s({g}) >= {v}"),
                    vec![],
                    Evidence::Cited,
                )]
            });
        }
        if n.is_odd() {
            let (rule, c) = match r {
                3 => (Rule::OddRankThreeLowerBound, 9u32),
                4 => (Rule::OddRankFourLowerBound, 20),
                _ => return,
            };
            if self.on(rule) {
                let v = BigUint::from(c) * n - (c - 1);
                iv.raise(v.clone(), || {
                    vec![step(
                        rule,
                        format!("s({g}) >= {v}"),
                        vec![format!("{n} is odd")],
                        Evidence::Cited,
                    )]
                });
            }
        }
    }

    fn odd_p_group(&mut self, g: &BigGroup, iv: &mut Interval) {
        let exp = g.exponent();
        let f = self.factor(&exp);
        let [(p, _)] = f.primes.as_slice() else {
            return;
        };
        if f.opaque_tail || p == &BigUint::from(2u32) {
            return;
        }
        let d = self.d_interval(g);
        let target = BigUint::from(2u32) * &exp - 1u32;
        if d.exact() != Some(&target) {
            return;
        }
        let v = BigUint::from(4u32) * &exp - 3u32;
        let t = merge([
            d.trace().as_slice(),
            &[step(
                Rule::OddPGroupDavenport,
                format!("s({g}) = {v}"),
                vec![format!("{g} is a {p}-group"), format!("D({g}) = {target}")],
                Evidence::Cited,
            )],
        ]);
        iv.raise(v.clone(), || t.clone());
        iv.cap(v, || t);
    }

    fn sylow_divisibility(&mut self, g: &BigGroup, iv: &mut Interval) {
        let exp = g.exponent();
        let f = self.factor(&exp);
        if f.opaque_tail || g.is_trivial() {
            return;
        }
        let two = BigUint::from(2u32);
        for (q, _) in &f.primes {
            if q == &two {
                continue;
            }
            // every other Sylow subgroup must be cyclic
            let others_cyclic = f
                .primes
                .iter()
                .filter(|(p, _)| p != q)
                .all(|(p, _)| g.factors().iter().filter(|x| (*x % p).is_zero()).count() <= 1);
            if !others_cyclic {
                continue;
            }
            let gq = rules::sylow(g, q);
            let dq = self.d_interval(&gq);
            let Some(d) = dq.exact().cloned() else {
                continue;
            };
            let eq = gq.exponent();
            let k = &d + 1u32 - &eq;
            if k.is_zero() || !(&eq % &k).is_zero() {
                continue;
            }
            let v = &two * (&d - &eq) + &two * &exp - 1u32;
            let t = merge([
                dq.trace().as_slice(),
                &[step(
                    Rule::SylowDivisibility,
                    format!("s({g}) = {v}"),
                    vec![
                        format!("D({gq}) = {d}"),
                        format!("D({gq}) - exp({gq}) + 1 = {k} divides {eq}"),
                        format!("the Sylow subgroups of {g} other than the {q}-part are cyclic"),
                    ],
                    Evidence::Cited,
                )],
            ]);
            iv.raise(v.clone(), || t.clone());
            iv.cap(v, || t);
        }
    }

    fn composition(&mut self, g: &BigGroup, n: &BigUint, r: usize, iv: &mut Interval) {
        for k in self.proper_divisors(n) {
            let l = n / &k;
            let (sh, sq) = (self.s_interval(&hom(&k, r)), self.s_interval(&hom(&l, r)));
            let (Some(h_hi), Some(q_hi)) = (&sh.hi, &sq.hi) else {
                continue;
            };
            let v = (h_hi - 1u32) * &l + q_hi;
            iv.cap(v.clone(), || {
                let (h, q) = (hom(&k, r), hom(&l, r));
                merge([
                    sh.hi_trace.as_slice(),
                    sq.hi_trace.as_slice(),
                    &[step(
                        Rule::SubgroupComposition,
                        format!("s({g}) <= {v}"),
                        vec![
                            format!("H = {h}, s(H) <= {h_hi}"),
                            format!("G/H = {q}, s(G/H) <= {q_hi}"),
                            format!("({h_hi} - 1)*{l} + {q_hi} = {v}"),
                        ],
                        Evidence::Derived,
                    )],
                ])
            });
        }
    }

    fn threshold(&mut self, n: &BigUint, r: usize, c: u64) -> Option<BigUint> {
        let key = (n.clone(), r, c);
        if let Some(t) = self.thresholds.get(&key) {
            return t.clone();
        }
        let t = theorem1_threshold(n, r, &c.into()).ok().map(|t| t.value);
        self.thresholds.insert(key, t.clone());
        t
    }

    fn lifting(&mut self, g: &BigGroup, mn: &BigUint, r: usize, iv: &mut Interval) {
        for m in self.proper_divisors(mn) {
            let n = mn / &m;
            let Some(pd) = self.property_d(&m, r) else {
                continue;
            };
            let c = pd.c;
            let cb = BigUint::from(c);
            let floor = (&cb - 1u32) * (&cb - 1u32) + 1u32;
            if n < floor {
                continue;
            }
            let Some(d0) = self.d0(&n, r, c) else {
                continue;
            };
            let sn = self.s_interval(&hom(&n, r));
            let Some(s_hi) = sn.hi.clone() else { continue };
            let Some(t) = self.threshold(&n, r, c) else {
                continue;
            };
            if m < t {
                continue;
            }
            let hyp = Theorem1Hypotheses {
                m: m.clone(),
                n: n.clone(),
                r,
                c: cb.clone(),
                s_upper_for_cnr: s_hi.clone(),
                d_property_m: pd.evidence,
                d0_property_n: d0.0,
            };
            let Ok(v) = hyp.conclusion() else { continue };
            iv.cap(v.clone(), || {
                let (gm, gn) = (hom(&m, r), hom(&n, r));
                merge([
                    pd.trace.as_slice(),
                    d0.1.as_slice(),
                    sn.hi_trace.as_slice(),
                    &[step(
                        Rule::LiftingTheorem,
                        format!("s({g}) <= {v}"),
                        vec![
                            format!("{gm} has Property D with respect to {c}"),
                            format!("{gn} has Property D0 with respect to {c}"),
                            format!(
                                "s({gn}) <= {s_hi} <= c(n-1)+n+1 = {}",
                                &cb * (&n - 1u32) + &n + 1u32
                            ),
                            format!("n = {n} >= (c-1)^2+1 = {floor}"),
                            format!("m = {m} >= threshold {t}"),
                        ],
                        evidence_of(&[pd.evidence, d0.0]),
                    )],
                ])
            });
        }
    }

    fn g_interval(&mut self, g: &BigGroup) -> Rc<Interval> {
        if let Some(iv) = self.g.get(g) {
            return iv.clone();
        }
        let mut iv = Interval::unbounded();
        let exp = g.exponent();
        if let Some(k) = self.known(Invariant::Squarefree, g) {
            let t = vec![known_step(Invariant::Squarefree, g, k)];
            iv.raise(k.value.clone(), || t.clone());
            iv.cap(k.value.clone(), || t);
        }
        let s = self.s_interval(g);
        if self.on(Rule::SquarefreeSandwich) {
            if let Some(hi) = &s.hi {
                iv.cap(hi.clone(), || {
                    merge([
                        s.hi_trace.as_slice(),
                        &[step(
                            Rule::SquarefreeSandwich,
                            format!("g({g}) <= {hi}"),
                            vec![format!("s({g}) <= {hi}")],
                            Evidence::Derived,
                        )],
                    ])
                });
            }
            if exp > BigUint::one() {
                let lo = (&s.lo - 1u32).div_ceil(&(&exp - 1u32)) + 1u32;
                iv.raise(lo.clone(), || {
                    merge([
                        s.lo_trace.as_slice(),
                        &[step(
                            Rule::SquarefreeSandwich,
                            format!("g({g}) >= {lo}"),
                            vec![format!("s({g}) >= {}", s.lo)],
                            Evidence::Derived,
                        )],
                    ])
                });
            }
        }
        if self.on(Rule::TernaryCapIdentity)
            && g.homocyclic_params()
                .is_some_and(|(n, _)| n == &BigUint::from(3u32))
        {
            let lo = (&s.lo + 1u32).div_ceil(&BigUint::from(2u32));
            iv.raise(lo.clone(), || {
                merge([
                    s.lo_trace.as_slice(),
                    &[step(
                        Rule::TernaryCapIdentity,
                        format!("g({g}) >= {lo}"),
                        vec![format!("s({g}) >= {}", s.lo)],
                        Evidence::Derived,
                    )],
                ])
            });
            if let Some(hi) = &s.hi {
                let v = (hi + 1u32) / 2u32;
                iv.cap(v.clone(), || {
                    merge([
                        s.hi_trace.as_slice(),
                        &[step(
                            Rule::TernaryCapIdentity,
                            format!("g({g}) <= {v}"),
                            vec![format!("s({g}) <= {hi}")],
                            Evidence::Derived,
                        )],
                    ])
                });
            }
        }
        if self.on(Rule::ExponentFloor) {
            iv.raise(exp.clone(), || {
                vec![step(
                    Rule::ExponentFloor,
                    format!("g({g}) >= {exp}"),
                    vec![],
                    Evidence::Cited,
                )]
            });
        }
        let iv = Rc::new(iv);
        self.g.insert(g.clone(), iv.clone());
        iv
    }

    fn property_d(&mut self, m: &BigUint, r: usize) -> Option<Rc<PdFact>> {
        let key = (m.clone(), r);
        if let Some(f) = self.pd.get(&key) {
            return f.clone();
        }
        let fact = self.compute_property_d(m, r).map(Rc::new);
        self.pd.insert(key, fact.clone());
        fact
    }

    fn compute_property_d(&mut self, m: &BigUint, r: usize) -> Option<PdFact> {
        if m <= &BigUint::one() || r == 0 {
            return None;
        }
        let gm = hom(m, r);
        let claim_for = |g: &BigGroup, c: u64| format!("{g} has Property D with respect to {c}");
        let claim = |c: u64| claim_for(&gm, c);
        if self.on(Rule::KnownValue) {
            if let Some(k) = self.kb.property_d.get(&(m.clone(), r)) {
                let c = k.value.to_u64()?;
                return Some(PdFact {
                    c,
                    evidence: k.evidence,
                    trace: vec![step(
                        Rule::KnownValue,
                        claim(c),
                        vec![k.source.clone()],
                        k.evidence,
                    )],
                });
            }
        }
        if self.on(Rule::PropertyDKnownFamilies) {
            let f = self.factor(m);
            let c = if f.supported_on(&[2]) && r < 63 {
                Some(1u64 << r)
            } else if r == 4 && f.supported_on(&[3]) {
                Some(20)
            } else if r == 3 && f.supported_on(&[3, 5]) {
                Some(9)
            } else {
                None
            };
            if let Some(c) = c {
                return Some(PdFact {
                    c,
                    evidence: Evidence::Cited,
                    trace: vec![step(
                        Rule::PropertyDKnownFamilies,
                        claim(c),
                        vec![],
                        Evidence::Cited,
                    )],
                });
            }
        }
        let s = self.s_interval(&gm);
        let s_exact = s.exact().cloned();
        if self.on(Rule::PropertyDFromSandwich) {
            let g = self.g_interval(&gm);
            if let (Some(sv), Some(gv)) = (&s_exact, g.exact()) {
                if gv >= &BigUint::one() && sv == &((gv - 1u32) * (m - 1u32) + 1u32) {
                    if let Some(c) = (gv - 1u32).to_u64() {
                        let trace = merge([
                            s.trace().as_slice(),
                            g.trace().as_slice(),
                            &[step(
                                Rule::PropertyDFromSandwich,
                                claim(c),
                                vec![format!(
                                    "s({gm}) = {sv} = (g({gm})-1)({m}-1)+1 with g({gm}) = {gv}"
                                )],
                                Evidence::Derived,
                            )],
                        ]);
                        return Some(PdFact {
                            c,
                            evidence: Evidence::Derived,
                            trace,
                        });
                    }
                }
            }
        }
        if self.on(Rule::PropertyDProduct) {
            let sv = s_exact?;
            for a in self.proper_divisors(m) {
                let b = m / &a;
                if a > b {
                    break;
                }
                let (Some(fa), Some(fb)) = (self.property_d(&a, r), self.property_d(&b, r)) else {
                    continue;
                };
                if fa.c != fb.c || sv != rules::linear(fa.c, m) {
                    continue;
                }
                let c = fa.c;
                let evidence = evidence_of(&[fa.evidence, fb.evidence]);
                let trace = merge([
                    fa.trace.as_slice(),
                    fb.trace.as_slice(),
                    s.trace().as_slice(),
                    &[step(
                        Rule::PropertyDProduct,
                        claim(c),
                        vec![
                            claim_for(&hom(&a, r), c),
                            claim_for(&hom(&b, r), c),
                            format!("s({gm}) = {sv} = {c}({m}-1)+1"),
                        ],
                        evidence,
                    )],
                ]);
                return Some(PdFact { c, evidence, trace });
            }
        }
        None
    }

    fn d0(&mut self, n: &BigUint, r: usize, c: u64) -> Option<Rc<D0Fact>> {
        let key = (n.clone(), r, c);
        if let Some(f) = self.d0.get(&key) {
            return f.clone();
        }
        let fact = self.compute_d0(n, r, c).map(Rc::new);
        self.d0.insert(key, fact.clone());
        fact
    }

    fn compute_d0(&mut self, n: &BigUint, r: usize, c: u64) -> Option<(Evidence, Vec<TraceStep>)> {
        if n <= &BigUint::one() || r == 0 {
            return None;
        }
        let gn = hom(n, r);
        let claim = |gn: &BigGroup| format!("{gn} has Property D0 with respect to {c}");
        if self.on(Rule::KnownValue) {
            if let Some(k) = self.kb.d0.get(&(n.clone(), r, c)) {
                return Some((
                    k.evidence,
                    vec![step(
                        Rule::KnownValue,
                        claim(&gn),
                        vec![k.source.clone()],
                        k.evidence,
                    )],
                ));
            }
        }
        if self.on(Rule::D0KnownFamilies) && r == 3 && c == 9 && n.is_odd() {
            let f = self.factor(n);
            if f.supported_on(&[3, 5, 7, 11, 13]) {
                return Some((
                    Evidence::Cited,
                    vec![step(
                        Rule::D0KnownFamilies,
                        claim(&gn),
                        vec![format!(
                            "{n} is odd with prime divisors in {{3, 5, 7, 11, 13}}"
                        )],
                        Evidence::Cited,
                    )],
                ));
            }
        }
        if self.on(Rule::D0FromExactS) {
            let s = self.s_interval(&gn);
            let target = rules::linear(c, n);
            if s.exact() == Some(&target) {
                let trace = merge([
                    s.trace().as_slice(),
                    &[step(
                        Rule::D0FromExactS,
                        claim(&gn),
                        vec![format!("s({gn}) = {target} = {c}({n}-1)+1")],
                        Evidence::Derived,
                    )],
                ]);
                return Some((Evidence::Derived, trace));
            }
        }
        if self.on(Rule::D0Product) {
            for a in self.proper_divisors(n) {
                let b = n / &a;
                if a > b {
                    break;
                }
                let (Some(fa), Some(fb)) = (self.d0(&a, r, c), self.d0(&b, r, c)) else {
                    continue;
                };
                let evidence = evidence_of(&[fa.0, fb.0]);
                let trace = merge([
                    fa.1.as_slice(),
                    fb.1.as_slice(),
                    &[step(
                        Rule::D0Product,
                        claim(&gn),
                        vec![claim(&hom(&a, r)), claim(&hom(&b, r))],
                        evidence,
                    )],
                ]);
                return Some((evidence, trace));
            }
        }
        None
    }
}
