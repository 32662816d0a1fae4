//! Certified decision of whether `D(z)` attains its minimum over `[0, 1/4]`
//! at `z = 1/4`, which is exactly the statement that the secrecy function is
//! maximal at `y = 1`.
//!
//! Everything is exact: roots are counted with Sturm sequences of square-free
//! parts and every sign is read off a rational evaluation.

use std::fmt::{self, Write as _};

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::PolyQ;
use crate::rat::{fmt_rational, q, qi, sign};

/// Sturm sequence of the square-free part of a polynomial.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<PolyQ>,
}

impl SturmChain {
    pub fn new(p: &PolyQ) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let sqf = p.square_free();
        let mut chain = vec![sqf.clone(), sqf.derivative()];
        while !chain.last().unwrap().is_zero() {
            let k = chain.len();
            let r = chain[k - 2].rem(&chain[k - 1]);
            chain.push(-&r);
        }
        chain.pop();
        Ok(SturmChain { chain })
    }

    /// The square-free polynomial the chain starts with.
    pub fn base(&self) -> &PolyQ {
        &self.chain[0]
    }

    pub fn is_root(&self, x: &BigRational) -> bool {
        self.chain[0].eval(x).is_zero()
    }

    /// Sign changes of the chain at `x`, zeros skipped.
    pub fn variations(&self, x: &BigRational) -> usize {
        let mut last = 0;
        let mut v = 0;
        for p in &self.chain {
            let s = sign(&p.eval(x));
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }

    /// Distinct roots in `(lo, hi]`; neither endpoint may be a root.
    pub fn count(&self, lo: &BigRational, hi: &BigRational) -> usize {
        self.variations(lo) - self.variations(hi)
    }
}

fn check_interval(p: &PolyQ, lo: &BigRational, hi: &BigRational) -> Result<()> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if lo >= hi {
        return Err(Error::EmptyInterval {
            lo: fmt_rational(lo),
            hi: fmt_rational(hi),
        });
    }
    for x in [lo, hi] {
        if p.eval(x).is_zero() {
            return Err(Error::RootAtEndpoint(fmt_rational(x)));
        }
    }
    Ok(())
}

/// Number of distinct real roots of `p` in `(lo, hi]`.
pub fn sturm_count(p: &PolyQ, lo: &BigRational, hi: &BigRational) -> Result<usize> {
    check_interval(p, lo, hi)?;
    Ok(SturmChain::new(p)?.count(lo, hi))
}

/// Open interval `(lo, hi)` holding exactly one root of some polynomial;
/// neither endpoint is a root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatingInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl IsolatingInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / qi(2)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo < x && x < &self.hi
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        let lo = self.lo.to_f64().unwrap_or(f64::NAN);
        let hi = self.hi.to_f64().unwrap_or(f64::NAN);
        lo < x && x < hi
    }

    /// Halves the interval, keeping the root, until it is at most `width`.
    pub fn refine(&self, chain: &SturmChain, width: &BigRational) -> IsolatingInterval {
        let mut cur = self.clone();
        while &cur.width() > width {
            cur = cur.halve(chain, width);
        }
        cur
    }

    fn halve(&self, chain: &SturmChain, width: &BigRational) -> IsolatingInterval {
        let m = self.midpoint();
        if chain.is_root(&m) {
            return tight_around(chain, &m, width, &self.lo, &self.hi);
        }
        if chain.count(&self.lo, &m) == 1 {
            IsolatingInterval { lo: self.lo.clone(), hi: m }
        } else {
            IsolatingInterval { lo: m, hi: self.hi.clone() }
        }
    }
}

impl fmt::Display for IsolatingInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", fmt_rational(&self.lo), fmt_rational(&self.hi))
    }
}

/// A root sitting exactly on a rational `m`: an interval `(m - δ, m + δ)`
/// inside `(lo, hi)` of width at most `width` with no other root.
fn tight_around(
    chain: &SturmChain,
    m: &BigRational,
    width: &BigRational,
    lo: &BigRational,
    hi: &BigRational,
) -> IsolatingInterval {
    let mut delta = (width / qi(2)).min((m - lo) / qi(2)).min((hi - m) / qi(2));
    loop {
        let a = m - &delta;
        let b = m + &delta;
        if !chain.is_root(&a) && !chain.is_root(&b) && chain.count(&a, &b) == 1 {
            return IsolatingInterval { lo: a, hi: b };
        }
        delta /= qi(2);
    }
}

/// Disjoint isolating intervals of width at most `width`, sorted, covering
/// every root of `p` in `(lo, hi)`.
pub fn isolate_roots(
    p: &PolyQ,
    lo: &BigRational,
    hi: &BigRational,
    width: &BigRational,
) -> Result<Vec<IsolatingInterval>> {
    check_interval(p, lo, hi)?;
    if !width.is_positive() {
        return Err(Error::Domain("isolation width must be positive".into()));
    }
    let chain = SturmChain::new(p)?;
    Ok(isolate_with(&chain, lo, hi, width))
}

fn isolate_with(
    chain: &SturmChain,
    lo: &BigRational,
    hi: &BigRational,
    width: &BigRational,
) -> Vec<IsolatingInterval> {
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone())];
    while let Some((a, b)) = stack.pop() {
        let c = chain.count(&a, &b);
        if c == 0 {
            continue;
        }
        if c == 1 && &b - &a <= *width {
            out.push(IsolatingInterval { lo: a, hi: b });
            continue;
        }
        let m = (&a + &b) / qi(2);
        if chain.is_root(&m) {
            let t = tight_around(chain, &m, width, &a, &b);
            stack.push((a, t.lo.clone()));
            stack.push((t.hi.clone(), b));
            out.push(t);
        } else {
            stack.push((a, m.clone()));
            stack.push((m, b));
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

/// Multiplicity of the single root of `p` inside `iv`.
fn multiplicity_in(p: &PolyQ, iv: &IsolatingInterval) -> usize {
    let mut k = 0;
    let mut cur = p.clone();
    while cur.degree().unwrap_or(0) > 0 {
        let chain = SturmChain::new(&cur).expect("nonzero");
        if chain.count(&iv.lo, &iv.hi) == 0 {
            break;
        }
        k += 1;
        cur = cur.gcd(&cur.derivative());
    }
    k
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerdictStatus {
    /// `D(z) > D(1/4)` on `[0, 1/4)`.
    ConfirmedStrict,
    /// `D(z) ≥ D(1/4)` on `[0, 1/4]` with equality somewhere besides `1/4`.
    ConfirmedWithTies,
    /// `D(w) < D(1/4)` at a certified rational `w`.
    Refuted,
}

impl VerdictStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictStatus::ConfirmedStrict => "ConfirmedStrict",
            VerdictStatus::ConfirmedWithTies => "ConfirmedWithTies",
            VerdictStatus::Refuted => "Refuted",
        }
    }
}

impl fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WitnessKind {
    /// Isolates a local minimum of `D` (a root of `D'`) with `D < D(1/4)`.
    Minimum,
    /// A root-free stretch of `(0, 1/4)` on which `D < D(1/4)` throughout.
    Region,
    /// A point of `(0, 1/4)` where `D` touches `D(1/4)` from above.
    Tie,
    /// `D(0) = D(1/4)`; `z = 0` is only approached as `y → ∞`.
    LimitTie,
}

impl WitnessKind {
    fn as_str(&self) -> &'static str {
        match self {
            WitnessKind::Minimum => "minimum",
            WitnessKind::Region => "region",
            WitnessKind::Tie => "tie",
            WitnessKind::LimitTie => "limit-tie",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub kind: WitnessKind,
    pub interval: IsolatingInterval,
    /// Rational point inside `interval` at which `D` was evaluated.
    pub probe: BigRational,
    /// `D(probe)`, exact.
    pub d_at_probe: BigRational,
    /// Root multiplicity of `D - D(1/4)` for ties, 0 otherwise.
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub witnesses: Vec<Witness>,
    /// `1/D(1/4)`, the value of the secrecy function at `y = 1`.
    pub gain: BigRational,
    /// Line-oriented `key: value` trace of the decision.
    pub certificate: String,
}

/// Width to which interior critical points of `D` are pinned.
fn critical_width() -> BigRational {
    BigRational::new(1.into(), num_bigint::BigInt::from(2).pow(40))
}

fn fmt_interval_key(iv: &IsolatingInterval) -> String {
    format!("{} {}", fmt_rational(&iv.lo), fmt_rational(&iv.hi))
}

/// Decides whether `D` is minimal over `[0, 1/4]` at `1/4`.
///
/// Works on `G = D - D(1/4)`: the factor `(z - 1/4)^s` is divided out, the
/// roots of the remaining factor in `[0, 1/4)` are isolated, and the sign of
/// `G` is evaluated exactly at a probe between each consecutive pair. A
/// negative probe refutes; otherwise every root of `G` is a touch point.
pub fn verify_min_at_quarter(d: &PolyQ) -> Result<Verdict> {
    let quarter = q(1, 4);
    let zero = BigRational::zero();
    let d_quarter = d.eval(&quarter);
    if !d_quarter.is_positive() {
        return Err(Error::InvalidProfile(format!(
            "D(1/4) = {} is not positive",
            fmt_rational(&d_quarter)
        )));
    }
    let gain = d_quarter.recip();
    let mut cert = String::new();
    let _ = writeln!(cert, "denominator: {d}");
    let _ = writeln!(cert, "d_at_quarter: {}", fmt_rational(&d_quarter));
    let _ = writeln!(cert, "gain: {}", fmt_rational(&gain));

    let g = d - &PolyQ::constant(d_quarter.clone());
    if g.is_zero() {
        let _ = writeln!(cert, "g_identically_zero: yes");
        let _ = writeln!(cert, "denominator_zero_in_range: no");
        let _ = writeln!(cert, "status: {}", VerdictStatus::ConfirmedWithTies);
        return Ok(Verdict {
            status: VerdictStatus::ConfirmedWithTies,
            witnesses: Vec::new(),
            gain,
            certificate: cert,
        });
    }

    let (h, mult_quarter) = g.deflate(&quarter);
    let (h0, mult_zero) = h.deflate(&zero);
    let _ = writeln!(cert, "g_multiplicity_at_quarter: {mult_quarter}");
    let _ = writeln!(cert, "g_multiplicity_at_zero: {mult_zero}");

    // roots of G inside (0, 1/4), pulled off both endpoints
    let chain = SturmChain::new(&h0)?;
    let mut roots = isolate_with(&chain, &zero, &quarter, &quarter);
    if let Some(first) = roots.first_mut() {
        while first.lo.is_zero() {
            *first = first.halve(&chain, &first.width());
        }
    }
    if let Some(last) = roots.last_mut() {
        while last.hi == quarter {
            *last = last.halve(&chain, &last.width());
        }
    }
    let _ = writeln!(cert, "g_roots_in_open_range: {}", roots.len());

    // root-free stretches of (0, 1/4) between the isolating intervals
    let mut bounds = vec![zero.clone()];
    for r in &roots {
        bounds.push(r.lo.clone());
        bounds.push(r.hi.clone());
    }
    bounds.push(quarter.clone());
    let mut negative_regions = Vec::new();
    for (i, pair) in bounds.chunks(2).enumerate() {
        let region = IsolatingInterval {
            lo: pair[0].clone(),
            hi: pair[1].clone(),
        };
        let probe = region.midpoint();
        let s = sign(&g.eval(&probe));
        let _ = writeln!(
            cert,
            "region.{i}: {} probe={} sign={}",
            fmt_interval_key(&region),
            fmt_rational(&probe),
            if s > 0 { '+' } else { '-' }
        );
        if s < 0 {
            negative_regions.push((region, probe));
        }
    }

    let d_zero_in_range = d.eval(&zero).is_zero()
        || SturmChain::new(d)?.count(&zero, &quarter) > 0;
    let _ = writeln!(
        cert,
        "denominator_zero_in_range: {}",
        if d_zero_in_range { "yes" } else { "no" }
    );

    let mut witnesses = Vec::new();
    let status = if !negative_regions.is_empty() {
        // locate the minimum of D through the roots of D'
        let dp = d.derivative();
        let mut minima = Vec::new();
        if !dp.is_zero() {
            let (dp_h, _) = dp.deflate(&quarter);
            let (dp_h0, _) = dp_h.deflate(&zero);
            let dchain = SturmChain::new(&dp_h0)?;
            for iv in isolate_with(&dchain, &zero, &quarter, &critical_width()) {
                let probe = iv.midpoint();
                let value = d.eval(&probe);
                if value < d_quarter {
                    minima.push(Witness {
                        kind: WitnessKind::Minimum,
                        interval: iv,
                        probe,
                        d_at_probe: value,
                        multiplicity: 0,
                    });
                }
            }
        }
        minima.sort_by(|a, b| a.d_at_probe.cmp(&b.d_at_probe));
        witnesses.extend(minima);
        for (region, probe) in negative_regions {
            let value = d.eval(&probe);
            witnesses.push(Witness {
                kind: WitnessKind::Region,
                interval: region,
                probe,
                d_at_probe: value,
                multiplicity: 0,
            });
        }
        VerdictStatus::Refuted
    } else {
        for iv in &roots {
            let probe = iv.midpoint();
            witnesses.push(Witness {
                kind: WitnessKind::Tie,
                interval: iv.clone(),
                d_at_probe: d.eval(&probe),
                probe,
                multiplicity: multiplicity_in(&h0, iv),
            });
        }
        if mult_zero > 0 {
            witnesses.push(Witness {
                kind: WitnessKind::LimitTie,
                interval: IsolatingInterval {
                    lo: zero.clone(),
                    hi: zero.clone(),
                },
                probe: zero.clone(),
                d_at_probe: d.eval(&zero),
                multiplicity: mult_zero,
            });
        }
        if witnesses.is_empty() {
            VerdictStatus::ConfirmedStrict
        } else {
            VerdictStatus::ConfirmedWithTies
        }
    };

    for (i, w) in witnesses.iter().enumerate() {
        let _ = writeln!(
            cert,
            "witness.{i}: kind={} interval={} probe={} d={} multiplicity={}",
            w.kind.as_str(),
            fmt_interval_key(&w.interval),
            fmt_rational(&w.probe),
            fmt_rational(&w.d_at_probe),
            w.multiplicity
        );
    }
    if status == VerdictStatus::Refuted {
        let best = &witnesses[0];
        if best.d_at_probe.is_positive() {
            let _ = writeln!(cert, "xi_max_lower_bound: {}", fmt_rational(&best.d_at_probe.recip()));
        } else {
            let _ = writeln!(cert, "xi_max_lower_bound: unbounded");
        }
        if best.kind == WitnessKind::Minimum {
            let _ = writeln!(cert, "xi_max_z_interval: {}", fmt_interval_key(&best.interval));
        }
    }
    let _ = writeln!(cert, "status: {status}");

    Ok(Verdict {
        status,
        witnesses,
        gain,
        certificate: cert,
    })
}

impl Verdict {
    /// Re-checks every refutation witness by direct exact evaluation.
    pub fn witnesses_recheck(&self, d: &PolyQ) -> bool {
        let dq = d.eval(&q(1, 4));
        self.witnesses.iter().all(|w| match w.kind {
            WitnessKind::Minimum | WitnessKind::Region => {
                d.eval(&w.probe) < dq
                    && w.interval.lo <= w.probe
                    && w.probe <= w.interval.hi
            }
            WitnessKind::Tie | WitnessKind::LimitTie => true,
        })
    }
}

/// The shift to `G` used by the decision, exposed for callers that want to
/// inspect it: `D(z) - D(1/4)`.
pub fn shifted(d: &PolyQ) -> PolyQ {
    d - &PolyQ::constant(d.eval(&q(1, 4)))
}
