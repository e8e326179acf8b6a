//! Normally ordered composite fields and Wick-theorem operator products.
//!
//! A [`CompositeField`] is an exact Q(i) combination of flat normally
//! ordered monomials `:d^{k1}F1 ... d^{kr}Fr:` in the five basic fields.
//! For free fields the flat (mode-split) normal ordering is supersymmetric
//! in its factors, so monomials are kept sorted with fermionic signs
//! absorbed into coefficients; a repeated fermionic factor is identically
//! zero.
//!
//! [`ope_singular`] computes the complete singular part of `A(z)B(w)` by
//! summing over cross-contraction sets with fermionic signs and Taylor
//! expanding uncontracted `z`-factors at `w`. [`normal_product`] is the
//! `(z-w)^0` term of the same expansion, which is the binary normal product
//! of the vertex-algebra literature; iterated products are right-nested.
//! [`mode_action`] applies one Fourier mode of a homogeneous composite to a
//! Fock state by expanding it into the finitely many mode products that act
//! nontrivially — exact, no truncation.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};

use crate::fock::{Field, FockState, Mode};
use crate::scalar::Scalar;
use crate::Error;

/// Test hook: flips the sign of the beta-gamma contraction so verification
/// suites can demonstrate that a corrupted table is caught. Never set outside
/// negative-control runs.
static CORRUPT_GHOST_CONTRACTION: AtomicBool = AtomicBool::new(false);

pub fn set_corrupt_ghost_contraction(flag: bool) {
    CORRUPT_GHOST_CONTRACTION.store(flag, Ordering::Relaxed);
}

/// One factor `d^{der} field` of a normally ordered monomial.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CFactor {
    pub field: Field,
    pub der: u32,
}

impl CFactor {
    pub fn new(field: Field, der: u32) -> Self {
        CFactor { field, der }
    }

    /// Conformal weight used for mode labels: field weight plus derivative
    /// order.
    pub fn weight(self) -> i64 {
        self.field.weight() + self.der as i64
    }

    /// Coefficient of `F(m)` in the mode expansion of `d^{der}F`:
    /// `prod_{u=0}^{der-1} (-m - w - u)`, optionally with a moding shift
    /// (`z^{-m-w+shift}` labels) used by the twisted current realization.
    fn derivative_coeff(self, m: i64, shift: i64) -> Scalar {
        let w = self.field.weight();
        let mut acc = Scalar::one();
        for u in 0..self.der as i64 {
            acc = &acc * &Scalar::from_int(-m - w - u + shift);
        }
        acc
    }
}

impl fmt::Display for CFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.der > 0 {
            write!(f, "d^{} ", self.der)?;
        }
        write!(f, "{}", self.field.name())
    }
}

/// Base contraction table: `<F(z) G(w)> = coeff / (z-w)^pole`.
///
/// The ghost sign is the known trap: `beta(z)gamma(w) ~ -1/(z-w)` but
/// `gamma(z)beta(w) ~ +1/(z-w)`.
fn base_contraction(a: Field, b: Field) -> Option<(Scalar, u32)> {
    let flip = CORRUPT_GHOST_CONTRACTION.load(Ordering::Relaxed);
    match (a, b) {
        (Field::B, Field::C) | (Field::C, Field::B) => Some((Scalar::one(), 1)),
        (Field::Beta, Field::Gamma) => {
            Some((Scalar::from_int(if flip { 1 } else { -1 }), 1))
        }
        (Field::Gamma, Field::Beta) => {
            Some((Scalar::from_int(if flip { -1 } else { 1 }), 1))
        }
        (Field::J, Field::J) => Some((Scalar::one(), 2)),
        _ => None,
    }
}

/// `<d^{da}A(z) d^{db}B(w)>` as `(coeff, pole)`: each z-derivative multiplies
/// by `-p` and raises the pole, each w-derivative multiplies by `+p`.
fn contraction(a: CFactor, b: CFactor) -> Option<(Scalar, u32)> {
    let (c0, p0) = base_contraction(a.field, b.field)?;
    let mut coeff = c0;
    let mut pole = p0 as i64;
    for _ in 0..a.der {
        coeff = &coeff * &Scalar::from_int(-pole);
        pole += 1;
    }
    for _ in 0..b.der {
        coeff = &coeff * &Scalar::from_int(pole);
        pole += 1;
    }
    Some((coeff, pole as u32))
}

/// Sorted normally ordered monomial. Empty = the identity field.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct CMonomial(Vec<CFactor>);

impl CMonomial {
    pub fn identity() -> Self {
        CMonomial::default()
    }

    /// Canonicalizes a factor list, returning the fermionic sorting sign;
    /// `None` when a fermionic factor repeats (the monomial vanishes).
    pub fn from_factors(factors: &[CFactor]) -> Option<(CMonomial, i64)> {
        let mut v = factors.to_vec();
        let mut sign = 1i64;
        for i in 1..v.len() {
            let mut k = i;
            while k > 0 && v[k] < v[k - 1] {
                if v[k].field.is_fermionic() && v[k - 1].field.is_fermionic() {
                    sign = -sign;
                }
                v.swap(k, k - 1);
                k -= 1;
            }
        }
        for w in v.windows(2) {
            if w[0] == w[1] && w[0].field.is_fermionic() {
                return None;
            }
        }
        Some((CMonomial(v), sign))
    }

    pub fn factors(&self) -> &[CFactor] {
        &self.0
    }

    pub fn weight(&self) -> i64 {
        self.0.iter().map(|f| f.weight()).sum()
    }
}

impl fmt::Display for CMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, ":")?;
        for (i, factor) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{factor}")?;
        }
        write!(f, ":")
    }
}

/// Scalar-weighted sum of normally ordered monomials.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CompositeField(BTreeMap<CMonomial, Scalar>);

impl CompositeField {
    pub fn zero() -> Self {
        CompositeField::default()
    }

    pub fn one() -> Self {
        CompositeField::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        let mut out = CompositeField::zero();
        out.add_monomial(CMonomial::identity(), c);
        out
    }

    pub fn field(field: Field) -> Self {
        CompositeField::derived_field(field, 0)
    }

    pub fn derived_field(field: Field, der: u32) -> Self {
        let mut out = CompositeField::zero();
        out.add_monomial(CMonomial(vec![CFactor::new(field, der)]), Scalar::one());
        out
    }

    /// Flat monomial from a factor list (fermionic sign normalized).
    pub fn monomial(factors: &[CFactor]) -> Self {
        let mut out = CompositeField::zero();
        if let Some((mono, sign)) = CMonomial::from_factors(factors) {
            out.add_monomial(mono, Scalar::from_int(sign));
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<CMonomial, Scalar> {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_monomial(&mut self, mono: CMonomial, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.0.entry(mono.clone()).or_insert_with(Scalar::zero);
        *entry = &*entry + &coeff;
        if entry.is_zero() {
            self.0.remove(&mono);
        }
    }

    pub fn add(&self, rhs: &CompositeField) -> CompositeField {
        let mut out = self.clone();
        for (m, c) in &rhs.0 {
            out.add_monomial(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &CompositeField) -> CompositeField {
        self.add(&rhs.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, factor: &Scalar) -> CompositeField {
        let mut out = CompositeField::zero();
        for (m, c) in &self.0 {
            out.add_monomial(m.clone(), c * factor);
        }
        out
    }

    /// Multiplies by extra factors with *no* contractions — the flat product,
    /// well defined when the new factors cannot contract with the existing
    /// ones or among themselves in normal order (e.g. appending Heisenberg
    /// polynomial factors to bc monomials).
    pub fn flat_mul(&self, rhs: &CompositeField) -> CompositeField {
        let mut out = CompositeField::zero();
        for (ma, ca) in &self.0 {
            for (mb, cb) in &rhs.0 {
                let mut factors = ma.0.clone();
                factors.extend_from_slice(&mb.0);
                if let Some((mono, sign)) = CMonomial::from_factors(&factors) {
                    out.add_monomial(mono, &(ca * cb) * &Scalar::from_int(sign));
                }
            }
        }
        out
    }

    /// Common conformal weight, or an error for inhomogeneous sums.
    /// Constant terms are compatible with any weight.
    pub fn weight(&self) -> Result<i64, Error> {
        let mut weight: Option<i64> = None;
        for mono in self.0.keys() {
            if mono.0.is_empty() {
                continue;
            }
            let w = mono.weight();
            match weight {
                None => weight = Some(w),
                Some(prev) if prev == w => {}
                Some(prev) => {
                    return Err(Error::NonHomogeneous(format!(
                        "weights {prev} and {w} in {self}"
                    )))
                }
            }
        }
        Ok(weight.unwrap_or(0))
    }

    /// Leibniz derivative.
    pub fn derive(&self) -> CompositeField {
        let mut out = CompositeField::zero();
        for (mono, coeff) in &self.0 {
            for i in 0..mono.0.len() {
                let mut factors = mono.0.clone();
                factors[i].der += 1;
                if let Some((m, sign)) = CMonomial::from_factors(&factors) {
                    out.add_monomial(m, coeff * &Scalar::from_int(sign));
                }
            }
        }
        out
    }

    pub fn derive_n(&self, n: u32) -> CompositeField {
        let mut cur = self.clone();
        for _ in 0..n {
            cur = cur.derive();
        }
        cur
    }
}

impl fmt::Display for CompositeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, coeff) in &self.0 {
            // split complex coefficients so the rendering stays inside the
            // expression grammar (no parentheses)
            for (part, imag) in [(coeff.re().clone(), false), (coeff.im().clone(), true)] {
                use num_traits::{One, Signed, Zero};
                if part.is_zero() {
                    continue;
                }
                let neg = part.is_negative();
                let mag = part.abs();
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                    first = false;
                } else {
                    write!(f, " {} ", if neg { "-" } else { "+" })?;
                }
                let unit = mag.is_one();
                let is_ident = mono.0.is_empty();
                if !unit || is_ident && !imag {
                    if mag.is_integer() {
                        write!(f, "{}", mag.numer())?;
                    } else {
                        write!(f, "{}/{}", mag.numer(), mag.denom())?;
                    }
                    if imag {
                        write!(f, "*i")?;
                    }
                    if !is_ident {
                        write!(f, " ")?;
                    }
                } else if imag {
                    write!(f, "i")?;
                    if !is_ident {
                        write!(f, " ")?;
                    }
                }
                if !is_ident {
                    write!(f, "{mono}")?;
                }
            }
        }
        Ok(())
    }
}

/// The singular part of an OPE: pole order (>= 1) to coefficient field at `w`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct OpeResult(BTreeMap<u32, CompositeField>);

impl OpeResult {
    pub fn poles(&self) -> &BTreeMap<u32, CompositeField> {
        &self.0
    }

    pub fn pole(&self, r: u32) -> CompositeField {
        self.0.get(&r).cloned().unwrap_or_else(CompositeField::zero)
    }

    pub fn max_pole(&self) -> u32 {
        self.0.keys().next_back().copied().unwrap_or(0)
    }

    fn insert(&mut self, r: u32, field: CompositeField) {
        if !field.is_zero() {
            self.0.insert(r, field);
        }
    }
}

impl fmt::Display for OpeResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return writeln!(f, "regular");
        }
        for (r, field) in self.0.iter().rev() {
            writeln!(f, "(z-w)^-{r} : {field}")?;
        }
        Ok(())
    }
}

/// Laurent coefficients of `A(z)B(w)` in `(z-w)`, for powers in
/// `[min_power, max_power]`, fields at `w`.
fn product_powers(
    a_mono: &CMonomial,
    b_mono: &CMonomial,
    min_power: i64,
    max_power: i64,
) -> BTreeMap<i64, CompositeField> {
    let mut out: BTreeMap<i64, CompositeField> = BTreeMap::new();
    let a = a_mono.factors();
    let b = b_mono.factors();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut used_b = vec![false; b.len()];
    enumerate_matchings(
        a,
        b,
        0,
        &mut used_b,
        &mut pairs,
        &mut |pairs: &[(usize, usize)]| {
            process_matching(a, b, pairs, min_power, max_power, &mut out);
        },
    );
    out
}

fn enumerate_matchings(
    a: &[CFactor],
    b: &[CFactor],
    i: usize,
    used_b: &mut [bool],
    pairs: &mut Vec<(usize, usize)>,
    emit: &mut dyn FnMut(&[(usize, usize)]),
) {
    if i == a.len() {
        emit(pairs);
        return;
    }
    // a_i left uncontracted
    enumerate_matchings(a, b, i + 1, used_b, pairs, emit);
    for j in 0..b.len() {
        if used_b[j] || base_contraction(a[i].field, b[j].field).is_none() {
            continue;
        }
        used_b[j] = true;
        pairs.push((i, j));
        enumerate_matchings(a, b, i + 1, used_b, pairs, emit);
        pairs.pop();
        used_b[j] = false;
    }
}

/// Wick sign of a contraction set: fermionic pairs each contribute
/// `(-1)^{# fermionic factors still present strictly between the endpoints}`,
/// removing contracted operators as we go.
fn wick_sign(a: &[CFactor], b: &[CFactor], pairs: &[(usize, usize)]) -> i64 {
    let total = a.len() + b.len();
    let mut present = vec![true; total];
    let fermionic: Vec<bool> = a
        .iter()
        .chain(b.iter())
        .map(|f| f.field.is_fermionic())
        .collect();
    let mut sign = 1i64;
    for &(i, j) in pairs {
        let (pi, pj) = (i, a.len() + j);
        if fermionic[pi] {
            let crossings = (pi + 1..pj).filter(|&k| present[k] && fermionic[k]).count();
            if crossings % 2 == 1 {
                sign = -sign;
            }
        }
        present[pi] = false;
        present[pj] = false;
    }
    sign
}

fn process_matching(
    a: &[CFactor],
    b: &[CFactor],
    pairs: &[(usize, usize)],
    min_power: i64,
    max_power: i64,
    out: &mut BTreeMap<i64, CompositeField>,
) {
    let mut value = Scalar::from_int(wick_sign(a, b, pairs));
    let mut total_pole = 0i64;
    for &(i, j) in pairs {
        match contraction(a[i], b[j]) {
            Some((c, p)) => {
                value = &value * &c;
                total_pole += p as i64;
            }
            None => return,
        }
    }
    if value.is_zero() {
        return;
    }
    let contracted_a: Vec<bool> = {
        let mut v = vec![false; a.len()];
        for &(i, _) in pairs {
            v[i] = true;
        }
        v
    };
    let contracted_b: Vec<bool> = {
        let mut v = vec![false; b.len()];
        for &(_, j) in pairs {
            v[j] = true;
        }
        v
    };
    let rest_a: Vec<CFactor> = a
        .iter()
        .enumerate()
        .filter(|(i, _)| !contracted_a[*i])
        .map(|(_, f)| *f)
        .collect();
    let rest_b: Vec<CFactor> = b
        .iter()
        .enumerate()
        .filter(|(j, _)| !contracted_b[*j])
        .map(|(_, f)| *f)
        .collect();

    // Taylor expand the surviving z-factors at w: total Taylor degree T puts
    // the term at power T - total_pole.
    let t_lo = (min_power + total_pole).max(0);
    let t_hi = max_power + total_pole;
    if t_hi < 0 {
        return;
    }
    let mut degrees = vec![0u32; rest_a.len()];
    distribute_taylor(
        &rest_a,
        &rest_b,
        &mut degrees,
        0,
        t_lo,
        t_hi,
        &value,
        total_pole,
        out,
    );
}

#[allow(clippy::too_many_arguments)]
fn distribute_taylor(
    rest_a: &[CFactor],
    rest_b: &[CFactor],
    degrees: &mut Vec<u32>,
    slot: usize,
    t_lo: i64,
    t_hi: i64,
    value: &Scalar,
    total_pole: i64,
    out: &mut BTreeMap<i64, CompositeField>,
) {
    let assigned: i64 = degrees[..slot].iter().map(|&d| d as i64).sum();
    if slot == rest_a.len() {
        if assigned < t_lo {
            return;
        }
        let mut coeff = value.clone();
        for &d in degrees.iter() {
            let mut fact = 1i64;
            for u in 1..=d as i64 {
                fact *= u;
            }
            if fact != 1 {
                coeff = &coeff * &Scalar::from_ratio(1, fact);
            }
        }
        let mut factors: Vec<CFactor> = rest_a
            .iter()
            .zip(degrees.iter())
            .map(|(f, &d)| CFactor::new(f.field, f.der + d))
            .collect();
        factors.extend_from_slice(rest_b);
        if let Some((mono, sign)) = CMonomial::from_factors(&factors) {
            let power = assigned - total_pole;
            out.entry(power)
                .or_insert_with(CompositeField::zero)
                .add_monomial(mono, &coeff * &Scalar::from_int(sign));
            if out.get(&power).is_some_and(CompositeField::is_zero) {
                out.remove(&power);
            }
        }
        return;
    }
    // remaining slots can absorb up to t_hi - assigned
    for d in 0..=(t_hi - assigned).max(0) as u32 {
        degrees[slot] = d;
        distribute_taylor(
            rest_a, rest_b, degrees, slot + 1, t_lo, t_hi, value, total_pole, out,
        );
        degrees[slot] = 0;
    }
}

/// Complete singular part of `A(z)B(w)`, exact.
pub fn ope_singular(a: &CompositeField, b: &CompositeField) -> OpeResult {
    let mut acc: BTreeMap<i64, CompositeField> = BTreeMap::new();
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            let scale = ca * cb;
            // deepest possible pole for this pair of monomials
            let max_pole: i64 = ma
                .factors()
                .iter()
                .map(|f| 2 + f.der as i64)
                .sum::<i64>()
                + mb.factors().iter().map(|f| f.der as i64).sum::<i64>();
            for (power, field) in product_powers(ma, mb, -max_pole, -1) {
                acc.entry(power)
                    .or_insert_with(CompositeField::zero)
                    .add_monomial(CMonomial::identity(), Scalar::zero());
                let entry = acc.get_mut(&power).unwrap();
                *entry = entry.add(&field.scale(&scale));
            }
        }
    }
    let mut out = OpeResult::default();
    for (power, field) in acc {
        debug_assert!(power < 0);
        out.insert((-power) as u32, field);
    }
    out
}

/// The `(z-w)^0` term of the full Wick expansion of `A(z)B(w)`: the binary
/// normal product. Iterated products right-nest: `:A B C: = :A :B C::`.
pub fn normal_product(a: &CompositeField, b: &CompositeField) -> CompositeField {
    let mut out = CompositeField::zero();
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            let scale = ca * cb;
            for (power, field) in product_powers(ma, mb, 0, 0) {
                debug_assert_eq!(power, 0);
                out = out.add(&field.scale(&scale));
            }
        }
    }
    out
}

/// Right-nested normal product of several fields.
pub fn normal_product_chain(fields: &[CompositeField]) -> CompositeField {
    match fields.len() {
        0 => CompositeField::one(),
        1 => fields[0].clone(),
        _ => normal_product(&fields[0], &normal_product_chain(&fields[1..])),
    }
}

/// Applies the mode `A(n)` (with `A(z) = sum_n A(n) z^{-n-h}` for the
/// composite's weight `h`) to a Fock state. Exact: acting on a finite-level
/// state only finitely many mode products contribute, so no level bound is
/// needed.
pub fn mode_action(a: &CompositeField, n: i64, v: &FockState) -> Result<FockState, Error> {
    a.weight()?; // homogeneity check
    let mut out = FockState::zero(v.sector.clone());
    for (mono, coeff) in a.terms() {
        let shifts = vec![0i64; mono.factors().len()];
        let acted = monomial_mode_action(mono, &shifts, n, v);
        out.add_state(&acted.scaled(coeff));
    }
    Ok(out)
}

/// As [`mode_action`], with per-factor moding shifts (the factor `d^k F`
/// contributes `prod_u (-m - w - u + shift)` instead of the untwisted
/// coefficient). Used by the twisted current realization.
pub fn mode_action_shifted(
    a: &CompositeField,
    shifts_for: &dyn Fn(&CMonomial) -> Vec<i64>,
    n: i64,
    v: &FockState,
) -> Result<FockState, Error> {
    a.weight()?;
    let mut out = FockState::zero(v.sector.clone());
    for (mono, coeff) in a.terms() {
        let shifts = shifts_for(mono);
        let acted = monomial_mode_action(mono, &shifts, n, v);
        out.add_state(&acted.scaled(coeff));
    }
    Ok(out)
}

/// Mode `n` of one normally ordered monomial applied to `v`.
///
/// Every subset S of factors taking annihilator modes is arranged
/// creators-first (original order within each group), with the fermionic
/// shuffle parity; modes are then enumerated right-to-left with live pruning
/// against the current state's level.
fn monomial_mode_action(
    mono: &CMonomial,
    shifts: &[i64],
    n: i64,
    v: &FockState,
) -> FockState {
    let factors = mono.factors();
    let r = factors.len();
    let mut out = FockState::zero(v.sector.clone());
    if r == 0 {
        if n == 0 {
            out.add_state(v);
        }
        return out;
    }
    for mask in 0u32..(1 << r) {
        // mask bit i set = factor i takes an annihilator mode
        let mut sign = 1i64;
        for i in 0..r {
            if mask & (1 << i) == 0 {
                continue;
            }
            if !factors[i].field.is_fermionic() {
                continue;
            }
            // factor i (annihilator) hops right past later creators
            for k in i + 1..r {
                if mask & (1 << k) == 0 && factors[k].field.is_fermionic() {
                    sign = -sign;
                }
            }
        }
        let creators: Vec<usize> = (0..r).filter(|i| mask & (1 << i) == 0).collect();
        let annihilators: Vec<usize> = (0..r).filter(|i| mask & (1 << i) != 0).collect();
        let mut arranged = creators;
        arranged.extend_from_slice(&annihilators);
        let n_ann = annihilators_len(mask, r);
        rec_modes(
            factors,
            shifts,
            &arranged,
            arranged.len(),
            n_ann,
            n,
            &v.scaled(&Scalar::from_int(sign)),
            &mut out,
        );
    }
    out
}

fn annihilators_len(mask: u32, r: usize) -> usize {
    (0..r).filter(|i| mask & (1 << i) != 0).count()
}

/// Enumerates modes for `arranged[..pos]` (applied right-to-left), where the
/// last `n_ann` entries of `arranged` are annihilators.
#[allow(clippy::too_many_arguments)]
fn rec_modes(
    factors: &[CFactor],
    shifts: &[i64],
    arranged: &[usize],
    pos: usize,
    n_ann: usize,
    remaining: i64,
    cur: &FockState,
    out: &mut FockState,
) {
    if cur.is_zero() {
        return;
    }
    if pos == 0 {
        if remaining == 0 {
            out.add_state(cur);
        }
        return;
    }
    let idx = arranged[pos - 1];
    let factor = factors[idx];
    let is_ann = pos > arranged.len() - n_ann;
    if is_ann {
        let lo = factor.field.annihilator_from();
        let hi = cur.level();
        for m in lo..=hi {
            let coeff = factor.derivative_coeff(m, shifts[idx]);
            if coeff.is_zero() {
                continue;
            }
            let acted = cur.apply_mode(Mode::new(factor.field, m)).scaled(&coeff);
            rec_modes(factors, shifts, arranged, pos - 1, n_ann, remaining - m, &acted, out);
        }
    } else {
        // creators: this and all earlier arranged entries are creators
        let cmax_this = factor.field.annihilator_from() - 1;
        let cmax_before: i64 = arranged[..pos - 1]
            .iter()
            .map(|&k| factors[k].field.annihilator_from() - 1)
            .sum();
        // remaining - m must be reachable by the earlier creators
        let lo = remaining - cmax_before;
        for m in lo..=cmax_this {
            let coeff = factor.derivative_coeff(m, shifts[idx]);
            if coeff.is_zero() {
                continue;
            }
            let acted = cur.apply_mode(Mode::new(factor.field, m)).scaled(&coeff);
            rec_modes(factors, shifts, arranged, pos - 1, n_ann, remaining - m, &acted, out);
        }
    }
}

/// A finite sum `sum_k coeff_k * F_k(m_k)` of composite-field modes, as
/// produced by the bracket-from-OPE formula.
#[derive(Clone, Debug, Default)]
pub struct ModeSum {
    pub terms: Vec<(Scalar, CompositeField, i64)>,
}

impl ModeSum {
    pub fn apply(&self, v: &FockState) -> Result<FockState, Error> {
        let mut out = FockState::zero(v.sector.clone());
        for (coeff, field, mode) in &self.terms {
            out.add_state(&mode_action(field, *mode, v)?.scaled(coeff));
        }
        Ok(out)
    }
}

impl fmt::Display for ModeSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (coeff, field, mode)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({coeff}) * [{field}]({mode})")?;
        }
        Ok(())
    }
}

/// Generalized binomial `binom(x, k)` for integer `x` (possibly negative).
fn binom(x: i64, k: u32) -> Scalar {
    let mut num = Scalar::one();
    let mut den = 1i64;
    for t in 0..k as i64 {
        num = &num * &Scalar::from_int(x - t);
        den *= t + 1;
    }
    &num * &Scalar::from_ratio(1, den)
}

/// `[A(m), B(n)]` (anticommutator for two fermionic fields) from the OPE:
/// `sum_{r>=1} binom(m + h_A - 1, r - 1) (pole_r)(m + n)`.
pub fn commutator_via_ope(
    a: &CompositeField,
    b: &CompositeField,
    m: i64,
    n: i64,
) -> Result<ModeSum, Error> {
    let h_a = a.weight()?;
    b.weight()?;
    let ope = ope_singular(a, b);
    let mut out = ModeSum::default();
    for (&r, field) in ope.poles() {
        let coeff = binom(m + h_a - 1, r - 1);
        if coeff.is_zero() {
            continue;
        }
        out.terms.push((coeff, field.clone(), m + n));
    }
    Ok(out)
}

/// The bc stress tensor `T = :d^1 b c:` (central charge -2).
pub fn stress_tensor() -> CompositeField {
    CompositeField::monomial(&[CFactor::new(Field::B, 1), CFactor::new(Field::C, 0)])
}

/// The rescaled weight-3 current `1/2 (:d^2 b c: - :d^1 b d^1 c:)`, rational
/// cousin of the weight-3 generator (which carries a sqrt(6) normalization).
pub fn w3_current() -> CompositeField {
    let a = CompositeField::monomial(&[CFactor::new(Field::B, 2), CFactor::new(Field::C, 0)]);
    let b = CompositeField::monomial(&[CFactor::new(Field::B, 1), CFactor::new(Field::C, 1)]);
    a.sub(&b).scale(&Scalar::from_ratio(1, 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{basis_monomials, GradedSpace, Monomial, Sector};

    #[test]
    fn bc_ope() {
        let ope = ope_singular(&CompositeField::field(Field::B), &CompositeField::field(Field::C));
        assert_eq!(ope.pole(1), CompositeField::one());
        assert_eq!(ope.max_pole(), 1);
    }

    #[test]
    fn tt_ope_is_virasoro_with_central_charge_minus_two() {
        let t = stress_tensor();
        let ope = ope_singular(&t, &t);
        // -1/(z-w)^4 + 2T/(z-w)^2 + dT/(z-w)
        assert_eq!(ope.pole(4), CompositeField::constant(Scalar::from_int(-1)));
        assert!(ope.pole(3).is_zero());
        assert_eq!(ope.pole(2), t.scale(&Scalar::from_int(2)));
        assert_eq!(ope.pole(1), t.derive());
    }

    #[test]
    fn w_current_on_c_field() {
        // W~(z) c(w) ~ -c/(z-w)^3 - (3/2) dc/(z-w)^2 - d^2 c/(z-w)
        let w = w3_current();
        let c = CompositeField::field(Field::C);
        let ope = ope_singular(&w, &c);
        assert_eq!(ope.pole(3), c.scale(&Scalar::from_int(-1)));
        assert_eq!(ope.pole(2), c.derive().scale(&Scalar::from_ratio(-3, 2)));
        assert_eq!(ope.pole(1), c.derive_n(2).scale(&Scalar::from_int(-1)));
    }

    #[test]
    fn normal_product_examples() {
        // :(d b) c: = T
        let t = normal_product(
            &CompositeField::derived_field(Field::B, 1),
            &CompositeField::field(Field::C),
        );
        assert_eq!(t, stress_tensor());
        // :T (d^{n-1}b c): = 1/2 :d^{n-1}b d^2 c: + (1/n) :d^{n+1} b c:, n = 2
        let inner = CompositeField::monomial(&[CFactor::new(Field::B, 1), CFactor::new(Field::C, 0)]);
        let prod = normal_product(&stress_tensor(), &inner);
        let expected = CompositeField::monomial(&[CFactor::new(Field::B, 1), CFactor::new(Field::C, 2)])
            .scale(&Scalar::from_ratio(1, 2))
            .add(&CompositeField::monomial(&[CFactor::new(Field::B, 3), CFactor::new(Field::C, 0)])
                .scale(&Scalar::from_ratio(1, 2)));
        assert_eq!(prod, expected);
        // identity element
        let any = w3_current();
        assert_eq!(normal_product(&CompositeField::one(), &any), any);
    }

    #[test]
    fn derive_satisfies_leibniz_through_normal_products() {
        let t = stress_tensor();
        // dT = :d^2 b c: + :d b d c:
        let expected = CompositeField::monomial(&[CFactor::new(Field::B, 2), CFactor::new(Field::C, 0)])
            .add(&CompositeField::monomial(&[CFactor::new(Field::B, 1), CFactor::new(Field::C, 1)]));
        assert_eq!(t.derive(), expected);
        // d(constant) = 0
        assert!(CompositeField::one().derive().is_zero());
        // d :A B: = :dA B: + :A dB: for A = d b, B = c
        let a = CompositeField::derived_field(Field::B, 1);
        let b = CompositeField::field(Field::C);
        let lhs = normal_product(&a, &b).derive();
        let rhs = normal_product(&a.derive(), &b).add(&normal_product(&a, &b.derive()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn stress_tensor_mode_grades_by_level() {
        let t = stress_tensor();
        // L0 eigenvalue = level on b(0)c(-1)|0>
        let (mono, _) = Monomial::from_modes(&[
            Mode::new(Field::B, 0),
            Mode::new(Field::C, -1),
        ])
        .unwrap();
        let v = FockState::basis(Sector::bc_vacuum(), mono);
        let acted = mode_action(&t, 0, &v).unwrap();
        assert_eq!(acted, v);
        // L_m |0> = 0 for m >= -1
        let vac = FockState::vacuum(Sector::bc_vacuum());
        for m in -1..=3 {
            assert!(mode_action(&t, m, &vac).unwrap().is_zero(), "L_{m}");
        }
    }

    #[test]
    fn w_mode_eigenvalues() {
        // W~0 eigenvalue on b(-1)c(-1)|0> is 1^2 - 1^2 = 0
        let w = w3_current();
        let (mono, _) = Monomial::from_modes(&[
            Mode::new(Field::B, -1),
            Mode::new(Field::C, -1),
        ])
        .unwrap();
        let v = FockState::basis(Sector::bc_vacuum(), mono);
        assert!(mode_action(&w, 0, &v).unwrap().is_zero());
        // and on b(-2)c(-1)|0>: 4 - 1 = 3
        let (mono2, _) = Monomial::from_modes(&[
            Mode::new(Field::B, -2),
            Mode::new(Field::C, -1),
        ])
        .unwrap();
        let v2 = FockState::basis(Sector::bc_vacuum(), mono2.clone());
        assert_eq!(mode_action(&w, 0, &v2).unwrap(), v2.scaled(&Scalar::from_int(3)));
    }

    #[test]
    fn cross_check_ope_commutator_against_state_level() {
        // [T(2), T(-2)] = 4 L0 - 1 on bc basis states up to level 3
        let t = stress_tensor();
        let bracket = commutator_via_ope(&t, &t, 2, -2).unwrap();
        for charge in -1..=1i64 {
            for level in 0..=3i64 {
                for mono in basis_monomials(GradedSpace::F(charge), level) {
                    let v = FockState::basis(Sector::bc_vacuum(), mono);
                    let via_ope = bracket.apply(&v).unwrap();
                    let mut direct = mode_action(&t, -2, &v).unwrap();
                    direct = mode_action(&t, 2, &direct).unwrap();
                    let mut swap = mode_action(&t, 2, &v).unwrap();
                    swap = mode_action(&t, -2, &swap).unwrap();
                    direct.sub_state(&swap);
                    assert_eq!(via_ope, direct);
                    // expected: 4 L0 - 1 = 4*level - 1 on eigenstates
                    let expected = v.scaled(&Scalar::from_int(4 * level - 1));
                    assert_eq!(direct, expected);
                }
            }
        }
    }

    #[test]
    fn ghost_current_modes() {
        // J^0 = :beta gamma: has J^0_0 eigenvalue = ghost charge, and
        // [J^0_1, J^0_-1] = -1 (level -1 Heisenberg pair).
        let j0 = CompositeField::monomial(&[
            CFactor::new(Field::Beta, 0),
            CFactor::new(Field::Gamma, 0),
        ]);
        let vac = FockState::vacuum(Sector::ghost_vacuum());
        assert!(mode_action(&j0, 0, &vac).unwrap().is_zero());
        let b0 = vac.apply_mode(Mode::new(Field::Beta, 0));
        assert_eq!(mode_action(&j0, 0, &b0).unwrap(), b0);
        let mut comm = mode_action(&j0, -1, &vac).unwrap();
        comm = mode_action(&j0, 1, &comm).unwrap();
        let mut swap = mode_action(&j0, 1, &vac).unwrap();
        swap = mode_action(&j0, -1, &swap).unwrap();
        comm.sub_state(&swap);
        assert_eq!(comm, vac.scaled(&Scalar::from_int(-1)));
    }
}
