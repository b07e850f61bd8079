//! Generator for the shipped catalog data files.
//!
//! Each positive-genus entry is produced by independent oracles and heavily
//! cross-checked before being written:
//!
//! - weight-2 newforms come from counting points on the corresponding
//!   elliptic curve over F_p (validated coefficient-by-coefficient against
//!   the eta product eta(q)^2 eta(q^11)^2 at level 11, where both oracles
//!   apply);
//! - pole-order-(g+1) generators X solve the Weierstrass differential
//!   equation (theta X)^2 = h^2 (4X^3 + b2 X^2 + 2 b4 X + b6) coefficient
//!   by coefficient, with the b-invariants either taken from the curve
//!   model (17, 19) or solved from a pinned leading window and then checked
//!   for consistency at the exponents the solve does not consume (11, 22+2);
//! - pole-order-(g+2) generators Y are theta X / (-2h) up to an affine
//!   adjustment, integrality-checked;
//! - the genus-2 entry is built from its hyperelliptic model: t of degree 2,
//!   y with y^2 a degree-6 squarefree polynomial in t (the polynomial
//!   relation is verified on the full working window), and the shipped
//!   generators are certified to have poles only at infinity by valuation
//!   checks on all their Atkin-Lehner images.
//!
//! Usage: gen-catalog [output-dir]   (default: crates/hecke-grid/data)

use hecke_grid::catalog::{
    entry_to_text, validate, CatalogEntry, Generators, SeriesId, ValidateOptions,
};
use hecke_grid::classics::eta_quotient;
use hecke_grid::groups::Group;
use hecke_grid::series::{qr, qrat, QRat, QSeries};
use num_traits::{One, Zero};

fn fail(msg: &str) -> ! {
    eprintln!("gen-catalog: {msg}");
    std::process::exit(1);
}

fn ensure(cond: bool, msg: &str) {
    if !cond {
        fail(msg);
    }
}

// ---------------------------------------------------------------------------
// point counting
// ---------------------------------------------------------------------------

/// Integral Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
#[derive(Clone, Copy)]
struct Curve {
    label: &'static str,
    conductor: i64,
    a1: i64,
    a2: i64,
    a3: i64,
    a4: i64,
    a6: i64,
    /// Expected discriminant, asserted at startup.
    disc: i64,
}

impl Curve {
    fn b_invariants(&self) -> (i64, i64, i64) {
        let b2 = self.a1 * self.a1 + 4 * self.a2;
        let b4 = 2 * self.a4 + self.a1 * self.a3;
        let b6 = self.a3 * self.a3 + 4 * self.a6;
        (b2, b4, b6)
    }

    fn check_disc(&self) {
        let (b2, b4, b6) = self.b_invariants();
        let b8 = (b2 * b6 - b4 * b4) / 4;
        let disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
        ensure(
            disc == self.disc,
            &format!(
                "curve {}: discriminant {disc} does not match expected {}",
                self.label, self.disc
            ),
        );
    }
}

const CURVE_11: Curve = Curve {
    label: "11a1",
    conductor: 11,
    a1: 0,
    a2: -1,
    a3: 1,
    a4: -10,
    a6: -20,
    disc: -161051, // -11^5
};

const CURVE_17: Curve = Curve {
    label: "17a1",
    conductor: 17,
    a1: 1,
    a2: -1,
    a3: 1,
    a4: -1,
    a6: -14,
    disc: -83521, // -17^4
};

const CURVE_19: Curve = Curve {
    label: "19a1",
    conductor: 19,
    a1: 0,
    a2: 1,
    a3: 1,
    a4: -9,
    a6: -15,
    disc: -6859, // -19^3
};

fn powmod(mut base: i64, mut exp: i64, p: i64) -> i64 {
    base = base.rem_euclid(p);
    let mut acc = 1i64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn legendre(a: i64, p: i64) -> i64 {
    let a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    let r = powmod(a, (p - 1) / 2, p);
    if r == 1 {
        1
    } else {
        -1
    }
}

/// a_p for an odd prime of good reduction: complete the square, so that
/// #E(F_p) = p + 1 + sum_x chi(4x^3 + b2 x^2 + 2 b4 x + b6).
fn a_p_good_odd(c: &Curve, p: i64) -> i64 {
    let (b2, b4, b6) = c.b_invariants();
    let mut sum = 0i64;
    for x in 0..p {
        let x2 = x * x % p;
        let x3 = x2 * x % p;
        let z = (4 * x3 + b2 % p * x2 + 2 * b4 % p * x + b6) % p;
        sum += legendre(z, p);
    }
    -sum
}

/// a_2 by brute force over F_2 (good reduction at 2 for odd conductor).
fn a_2_good(c: &Curve) -> i64 {
    let mut affine = 0i64;
    for x in 0..2i64 {
        for y in 0..2i64 {
            let lhs = y * y + c.a1 * x * y + c.a3 * y;
            let rhs = x * x * x + c.a2 * x * x + c.a4 * x + c.a6;
            if (lhs - rhs).rem_euclid(2) == 0 {
                affine += 1;
            }
        }
    }
    2 - affine
}

/// a_p at the (odd) bad prime: a_p = p - #E_ns(F_p), counting smooth affine
/// points plus the point at infinity.
fn a_p_bad(c: &Curve, p: i64) -> i64 {
    let mut smooth = 0i64;
    for x in 0..p {
        for y in 0..p {
            let f = y * y + c.a1 * x * y + c.a3 * y - (x * x * x + c.a2 * x * x + c.a4 * x + c.a6);
            if f.rem_euclid(p) != 0 {
                continue;
            }
            let fy = (2 * y + c.a1 * x + c.a3).rem_euclid(p);
            let fx = (c.a1 * y - (3 * x * x + 2 * c.a2 * x + c.a4)).rem_euclid(p);
            if fy != 0 || fx != 0 {
                smooth += 1;
            }
        }
    }
    p - (smooth + 1)
}

fn primes_below(n: i64) -> Vec<i64> {
    let mut sieve = vec![true; n.max(2) as usize];
    let mut out = Vec::new();
    for p in 2..n {
        if sieve[p as usize] {
            out.push(p);
            let mut k = p * p;
            while k < n {
                sieve[k as usize] = false;
                k += p;
            }
        }
    }
    out
}

/// The newform q-expansion sum a_n q^n on the window [1, prec), from point
/// counts and the Hecke recursions.
fn newform_series(c: &Curve, prec: i64) -> QSeries {
    c.check_disc();
    let mut a = vec![0i64; prec.max(2) as usize]; // a[n] = a_n
    a[1] = 1;
    for p in primes_below(prec) {
        let ap = if p == c.conductor {
            a_p_bad(c, p)
        } else if p == 2 {
            a_2_good(c)
        } else {
            a_p_good_odd(c, p)
        };
        // Prime powers.
        let mut powers = vec![1i64, ap];
        let mut pk = p * p;
        while pk < prec {
            let k = powers.len();
            let next = if p == c.conductor {
                ap * powers[k - 1]
            } else {
                ap * powers[k - 1] - p * powers[k - 2]
            };
            powers.push(next);
            pk = match pk.checked_mul(p) {
                Some(v) => v,
                None => break,
            };
        }
        // Spread multiplicatively over indices with p-part p^k.
        let mut pk = p;
        let mut k = 1usize;
        while pk < prec {
            let mut m = 1;
            while m * pk < prec {
                if m % p != 0 && a[m as usize] != 0 {
                    a[(m * pk) as usize] = a[m as usize] * powers[k];
                }
                m += 1;
            }
            k += 1;
            pk = match pk.checked_mul(p) {
                Some(v) => v,
                None => break,
            };
        }
    }
    // a[m] for composite m with multiple prime factors: the spread above
    // fills a[m p^k] from a[m], starting from a[1] = 1; processing primes in
    // ascending order fills every index exactly once.
    QSeries::from_coeffs(1, a[1..].iter().map(|&v| qr(v)).collect(), prec)
}

// ---------------------------------------------------------------------------
// Weierstrass ODE solver
// ---------------------------------------------------------------------------

struct OdeSolution {
    x: QSeries,
    b2: QRat,
    b4: QRat,
    b6: QRat,
}

/// Solve (theta X)^2 = h^2 (4X^3 + b2 X^2 + 2 b4 X + b6) for X = q^-2 + ...
///
/// `pinned` is the known leading window of X (at least the monic q^-2 term).
/// When `bs` is None the pinned window must extend through q^5: the
/// b-invariants are then read off the residual at exponents -2, 0, 2, and
/// the residual must also vanish at -4, -3, -1, 1, 3, which certifies the
/// pinned window against h. When `bs` is given only q^-2 need be pinned.
/// Coefficients from the first unpinned exponent on are forced sequentially:
/// the residual at q^k is linear in x_{k+2} with slope -(4(k+2) + 12).
fn solve_weierstrass_x(
    h: &QSeries,
    pinned: &QSeries,
    bs: Option<(i64, i64, i64)>,
    target_prec: i64,
) -> OdeSolution {
    let t_win = target_prec + 6;
    ensure(
        h.prec() >= t_win + 2,
        "ODE solver: h window too small for the requested precision",
    );
    ensure(
        pinned.valuation() == Some(-2) && pinned.coeff(-2).unwrap().is_one(),
        "ODE solver: pinned window must start with q^-2",
    );
    let pin_end = pinned.prec();
    ensure(
        bs.is_some() || pin_end >= 6,
        "ODE solver: solving for b-invariants needs the window pinned through q^5",
    );

    // X padded with placeholder zeros to the working window; every
    // placeholder is overwritten before anything that depends on it is read.
    let mut x = pinned.truncated(pin_end);
    let pad: Vec<QRat> = (-2..pin_end)
        .map(|n| x.coeff(n).unwrap())
        .collect();
    x = QSeries::from_coeffs(-2, pad, t_win);

    let h2 = h.mul(h);
    let x2 = x.mul(&x);
    let x3 = x2.mul(&x);
    let th = x.theta();
    let th2 = th.mul(&th);
    let hx = h2.mul(&x);
    let mut hx2 = h2.mul(&x2);
    let hx3 = h2.mul(&x3);

    // Residual before the b-terms: theta X^2 - 4 h^2 X^3.
    let mut w = th2.sub(&hx3.scale(&qr(4)));
    let (b2, b4, b6) = match bs {
        Some((b2, b4, b6)) => (qr(b2), qr(b4), qr(b6)),
        None => {
            // Triangular solve at exponents -2, 0, 2 (leading coefficients
            // of h^2 X^2, h^2 X, h^2 are all 1).
            let b2 = w.coeff(-2).unwrap();
            let w0 = w.sub(&hx2.scale(&b2));
            let b4 = w0.coeff(0).unwrap() / qr(2);
            let w1 = w0.sub(&hx.scale(&(b4.clone() * qr(2))));
            let b6 = w1.coeff(2).unwrap();
            (b2, b4, b6)
        }
    };
    w = w
        .sub(&hx2.scale(&b2))
        .sub(&hx.scale(&(b4.clone() * qr(2))))
        .sub(&h2.scale(&b6));

    // Everything the pinned window determines must already cancel.
    let first_free = pin_end - 2;
    for k in -4..first_free {
        let c = w.coeff(k).unwrap();
        ensure(
            c.is_zero(),
            &format!("ODE solver: residual {c} at q^{k} contradicts the pinned window"),
        );
    }

    // Sequential solve. Maintained incrementally under X += delta q^j:
    //   theta X     += j delta q^j
    //   (theta X)^2 += 2 j delta q^j theta X_old + j^2 delta^2 q^{2j}
    //   h^2 X       += delta q^j h^2
    //   h^2 X^2     += 2 delta q^j (h^2 X)_old + delta^2 q^{2j} h^2
    //   h^2 4X^3    += 12 delta q^j (h^2 X^2)_old + 12 delta^2 q^{2j} (h^2 X)_old
    //                  + 4 delta^3 q^{3j} h^2
    let mut th = th;
    let mut hx = hx;
    let last_k = t_win - 6;
    let mut k = first_free;
    while k <= last_k {
        let j = k + 2;
        let delta = w.coeff(k).unwrap() / qr(4 * j + 12);
        if !delta.is_zero() {
            let d2 = delta.clone() * delta.clone();
            let d3 = d2.clone() * delta.clone();
            // Residual update with the old maintained series.
            let dth2 = th
                .scale(&(delta.clone() * qr(2 * j)))
                .shifted(j)
                .add(&QSeries::monomial(2 * j, d2.clone() * qr(j * j)));
            let dg = hx2
                .scale(&(delta.clone() * qr(12)))
                .shifted(j)
                .add(&hx.scale(&(d2.clone() * qr(12))).shifted(2 * j))
                .add(&h2.scale(&(d3 * qr(4))).shifted(3 * j))
                .add(&hx.scale(&(delta.clone() * b2.clone() * qr(2))).shifted(j))
                .add(&h2.scale(&(d2.clone() * b2.clone())).shifted(2 * j))
                .add(&h2.scale(&(delta.clone() * b4.clone() * qr(2))).shifted(j));
            w = w.add(&dth2).sub(&dg);
            // Maintained series (hx2 before hx: it uses the old hx).
            th = th.add(&QSeries::monomial(j, delta.clone() * qr(j)));
            hx2 = hx2
                .add(&hx.scale(&(delta.clone() * qr(2))).shifted(j))
                .add(&h2.scale(&d2).shifted(2 * j));
            hx = hx.add(&h2.scale(&delta).shifted(j));
            x = x.add(&QSeries::monomial(j, delta));
        }
        debug_assert!(w.coeff(k).unwrap().is_zero());
        k += 1;
    }
    // Coefficients are now genuine up to exponent last_k + 2.
    OdeSolution {
        x: x.truncated(last_k + 3).truncated(target_prec),
        b2,
        b4,
        b6,
    }
}

/// Shift cross-check: the solved b-invariants must be those of the given
/// model under x -> x + r for a single rational r.
fn check_b_shift(sol: &OdeSolution, model: &Curve) {
    let (mb2, mb4, mb6) = model.b_invariants();
    let r = (sol.b2.clone() - qr(mb2)) / qr(12);
    let want_b4 = qr(mb4) + r.clone() * qr(mb2) + r.clone() * r.clone() * qr(6);
    let want_b6 = qr(mb6)
        + r.clone() * qr(2 * mb4)
        + r.clone() * r.clone() * qr(mb2)
        + r.clone() * r.clone() * r.clone() * qr(4);
    ensure(
        sol.b4 == want_b4 && sol.b6 == want_b6,
        &format!(
            "solved b-invariants ({}, {}, {}) are not a shift of model {}",
            sol.b2, sol.b4, sol.b6, model.label
        ),
    );
}

fn assert_prefix(s: &QSeries, val: i64, ints: &[i64], what: &str) {
    for (i, &c) in ints.iter().enumerate() {
        let n = val + i as i64;
        let got = s.coeff(n).unwrap_or_else(|_| fail(&format!("{what}: q^{n} unknown")));
        ensure(
            got == qr(c),
            &format!("{what}: coefficient of q^{n} is {got}, expected {c}"),
        );
    }
}

fn assert_integral(s: &QSeries, what: &str) {
    if let Some((n, c)) = s.first_non_integral() {
        fail(&format!("{what}: non-integral coefficient {c} at q^{n}"));
    }
}

// ---------------------------------------------------------------------------
// genus-1 entries
// ---------------------------------------------------------------------------

fn entry_level_11() -> CatalogEntry {
    let prec = 420i64;
    let h = eta_quotient(&"1^2*11^2".parse().unwrap(), prec + 16).unwrap();

    // Cross-validate the point counter against the eta product: both are
    // oracles for the same newform.
    let counted = newform_series(&CURVE_11, prec + 15);
    let agree = counted.agrees(&h).unwrap();
    ensure(
        agree.ok(),
        &format!(
            "level 11: point counts disagree with the eta product at q^{:?}",
            agree.first_mismatch.map(|(n, _, _)| n)
        ),
    );

    let pinned = QSeries::from_ints(-2, &[1, 2, 4, 5, 8, 1, 7, -11], 6);
    let sol = solve_weierstrass_x(&h, &pinned, None, prec + 4);
    check_b_shift(&sol, &CURVE_11);
    assert_integral(&sol.x, "level 11 X");

    // Y = -theta X / (2h) + aX + b, pinned to its printed window.
    let y_want_val = -3;
    let y_want = [1, 3, 7, 12, 17, 26, 19, 37, -15];
    let base = sol.x.theta().scale(&qrat(-1, 2)).mul(&h.invert().unwrap());
    let a = qr(y_want[1]) - base.coeff(-2).unwrap();
    let b = qr(y_want[3]) - base.coeff(0).unwrap() - a.clone() * sol.x.coeff(0).unwrap();
    let y = base.add(&sol.x.scale(&a)).add(&QSeries::constant(b));
    assert_prefix(&y, y_want_val, &y_want, "level 11 Y");
    assert_integral(&y, "level 11 Y");

    CatalogEntry {
        group: "11".parse().unwrap(),
        genus: 1,
        infinity_weierstrass: false,
        gens: Generators::FunctionField {
            x: sol.x.truncated(prec),
            y: y.truncated(prec),
            extra: vec![],
        },
        cusp_seeds: vec![h.truncated(prec)],
        prec,
        provenance: vec![
            (
                SeriesId::X,
                "oracle=weierstrass-ode(shift-of-11a1) golden=8".into(),
            ),
            (
                SeriesId::Y,
                "oracle=weierstrass-ode(shift-of-11a1) golden=9".into(),
            ),
            (
                SeriesId::Seed(0),
                "oracle=eta-product(1^2*11^2)+point-count(11a1) golden=9".into(),
            ),
        ],
    }
}

fn entry_level_17_19(curve: &Curve) -> CatalogEntry {
    let prec = 220i64;
    let h = newform_series(curve, prec + 14);
    let pinned = QSeries::from_ints(-2, &[1], -1);
    let (b2, b4, b6) = curve.b_invariants();
    let sol = solve_weierstrass_x(&h, &pinned, Some((b2, b4, b6)), prec + 4);
    assert_integral(&sol.x, &format!("level {} X", curve.conductor));

    // Y = -y_model = (-theta X / h + a1 X + a3) / 2: monic of pole order 3.
    let y = sol
        .x
        .theta()
        .scale(&qr(-1))
        .mul(&h.invert().unwrap())
        .add(&sol.x.scale(&qr(curve.a1)))
        .add(&QSeries::constant(qr(curve.a3)))
        .scale(&qrat(1, 2));
    ensure(
        y.valuation() == Some(-3) && y.coeff(-3).unwrap().is_one(),
        &format!("level {} Y is not monic of pole order 3", curve.conductor),
    );
    assert_integral(&y, &format!("level {} Y", curve.conductor));

    let label = curve.conductor.to_string();
    CatalogEntry {
        group: label.parse::<Group>().unwrap(),
        genus: 1,
        infinity_weierstrass: false,
        gens: Generators::FunctionField {
            x: sol.x.truncated(prec),
            y: y.truncated(prec),
            extra: vec![],
        },
        cusp_seeds: vec![h.truncated(prec)],
        prec,
        provenance: vec![
            (
                SeriesId::X,
                format!("oracle=weierstrass-ode({})", curve.label),
            ),
            (
                SeriesId::Y,
                format!("oracle=weierstrass-ode({})", curve.label),
            ),
            (
                SeriesId::Seed(0),
                format!("oracle=point-count({})", curve.label),
            ),
        ],
    }
}

// ---------------------------------------------------------------------------
// level 22 (genus 2, hyperelliptic) and 22+2
// ---------------------------------------------------------------------------

/// Evaluate a polynomial sum c_i T^i at a series argument.
fn polyval(coeffs: &[QRat], arg: &QSeries) -> QSeries {
    let mut acc = QSeries::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(arg).add(&QSeries::constant(c.clone()));
    }
    acc
}

/// Monic gcd of two rational polynomials (coefficient vectors, low to high).
fn poly_gcd(a: &[QRat], b: &[QRat]) -> Vec<QRat> {
    fn trim(mut v: Vec<QRat>) -> Vec<QRat> {
        while v.last().map(|c| c.is_zero()).unwrap_or(false) {
            v.pop();
        }
        v
    }
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        // a mod b
        while a.len() >= b.len() && !a.is_empty() {
            let f = a.last().unwrap().clone() / b.last().unwrap().clone();
            let shift = a.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                let v = a[shift + i].clone() - f.clone() * c.clone();
                a[shift + i] = v;
            }
            a = trim(a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    let lead = a.last().cloned().unwrap_or_else(QRat::one);
    a.into_iter().map(|c| c / lead.clone()).collect()
}

struct Level22Core {
    t: QSeries,
    seed_a: QSeries,
    seed_b: QSeries,
    theta_t: QSeries,
    y: QSeries,
}

/// Shared hyperelliptic data for level 22: the degree-2 map t, the newform
/// seeds A and B = A(q^2), and y = (theta t / A) t with y^2 a squarefree
/// degree-6 polynomial in t (verified on the full window).
fn level22_core(win: i64) -> Level22Core {
    let t = eta_quotient(&"1^2*2^-2*11^2*22^-2".parse().unwrap(), win).unwrap();
    let seed_a = eta_quotient(&"1^2*11^2".parse().unwrap(), win).unwrap();
    let seed_b = seed_a.v_op(2).truncated(win);
    let theta_t = t.theta();
    let y = theta_t.mul(&t).mul(&seed_a.invert().unwrap());
    ensure(
        y.valuation() == Some(-3) && y.coeff(-3).unwrap() == qr(-1),
        "level 22: y = (theta t) t / A should start -q^-3",
    );

    // y^2 = p6(t): solve the 7 coefficients triangularly, then the rest of
    // the window must cancel identically.
    let y2 = y.mul(&y);
    let mut tpow = vec![QSeries::one()];
    for i in 1..=6 {
        let next = tpow[i - 1].mul(&t);
        tpow.push(next);
    }
    let mut rem = y2;
    let mut p6 = vec![QRat::zero(); 7];
    for i in (0..=6).rev() {
        let c = rem.coeff(-(i as i64)).unwrap();
        if !c.is_zero() {
            rem = rem.sub(&tpow[i].scale(&c));
        }
        p6[i] = c;
    }
    ensure(
        rem.is_known_zero(),
        &format!(
            "level 22: y^2 is not a degree-6 polynomial in t (residual persists, window to {})",
            rem.prec()
        ),
    );
    ensure(!p6[6].is_zero(), "level 22: y^2 has t-degree < 6");
    let dp6: Vec<QRat> = (1..=6).map(|i| p6[i].clone() * qr(i as i64)).collect();
    let g = poly_gcd(&p6, &dp6);
    ensure(
        g.len() == 1,
        "level 22: y^2 = p6(t) is not squarefree, model is inconsistent with genus 2",
    );

    Level22Core {
        t,
        seed_a,
        seed_b,
        theta_t,
        y,
    }
}

/// Peel the polynomial part (in t) of a series at infinity down to q^0 and
/// return (coefficients low-to-high, remainder of valuation >= 1).
fn peel_polynomial_part(f: &QSeries, t: &QSeries, deg: usize) -> (Vec<QRat>, QSeries) {
    let mut rem = f.clone();
    let mut tpow = vec![QSeries::one()];
    for i in 1..=deg {
        let next = tpow[i - 1].mul(t);
        tpow.push(next);
    }
    let mut coeffs = vec![QRat::zero(); deg + 1];
    for i in (0..=deg).rev() {
        let c = rem.coeff(-(i as i64)).unwrap();
        if !c.is_zero() {
            rem = rem.sub(&tpow[i].scale(&c));
        }
        coeffs[i] = c;
    }
    ensure(
        rem.valuation().map(|v| v >= 1).unwrap_or(true),
        "polynomial-part peel left terms at nonpositive exponents",
    );
    (coeffs, rem)
}

/// Build a pole-order-n generator for level 22 from the anti-invariant
/// product y t^(n-3): add (rather than subtract) its polynomial part to
/// cancel the pole at the swapped cusp, and certify holomorphy away from
/// infinity through the valuations of all three Atkin-Lehner images:
///
///   F|W11 = -(y t^(n-3) - Q(t))        (valuation >= 1),
///   F|W22 = +(4/t)^(n-3) 8 theta t/(t^3 B) + Q(4/t)   (valuation >= 0),
///   F|W2  = -(4/t)^(n-3) 8 theta t/(t^3 B) + Q(4/t)   (valuation >= 0),
///
/// using t|W22 = t|W2 = 4/t, t|W11 = t, y|W11 = -y, A|W22 = -2B,
/// A|W2 = 2B, A|W11 = -A.
fn level22_generator(core: &Level22Core, n: i64) -> QSeries {
    let pole = n as usize;
    let s = core.y.mul(&core.t.pow((pole - 3) as u64));
    let (qc, e) = peel_polynomial_part(&s, &core.t, pole);
    let f = s.add(&polyval(&qc, &core.t));
    ensure(
        f.valuation() == Some(-n),
        &format!("level 22: generator candidate for pole order {n} has the wrong valuation"),
    );

    // F|W11 = -e.
    ensure(
        e.valuation().map(|v| v >= 1).unwrap_or(true),
        &format!("level 22: pole order {n}: image under W11 has a pole"),
    );

    // F|W22 and F|W2.
    let t_inv = core.t.invert().unwrap();
    let b_inv = core.seed_b.invert().unwrap();
    let four_over_t = t_inv.scale(&qr(4));
    let y_w22 = core.theta_t.scale(&qr(8)).mul(&t_inv.pow(3)).mul(&b_inv);
    let s_w22 = y_w22.mul(&four_over_t.pow((pole - 3) as u64));
    let q_at = polyval(&qc, &four_over_t);
    for (sign, name) in [(1i64, "W22"), (-1i64, "W2")] {
        let img = s_w22.scale(&qr(sign)).add(&q_at);
        ensure(
            img.valuation().map(|v| v >= 0).unwrap_or(true),
            &format!(
                "level 22: pole order {n}: image under {name} has a pole (valuation {:?})",
                img.valuation()
            ),
        );
    }
    f
}

fn entry_level_22() -> CatalogEntry {
    let prec = 260i64;
    let core = level22_core(prec + 16);

    // X: pole order 3, normalized to the pinned window.
    let f3 = level22_generator(&core, 3);
    let lead = f3.coeff(-3).unwrap();
    let mut x = f3.scale(&(QRat::one() / lead));
    let want_x = [1, 0, 1, 4, 2, 2, 0, 0, 2];
    let shift = qr(want_x[3]) - x.coeff(0).unwrap();
    x = x.add(&QSeries::constant(shift));
    assert_prefix(&x, -3, &want_x, "level 22 X");
    assert_integral(&x, "level 22 X");

    // Y: pole order 4, adjusted by a multiple of X and a constant to the
    // pinned window.
    let f4 = level22_generator(&core, 4);
    let lead = f4.coeff(-4).unwrap();
    let mut y = f4.scale(&(QRat::one() / lead));
    let want_y = [1, -1, 2, 1, 3, -2, 1];
    let alpha = qr(want_y[1]) - y.coeff(-3).unwrap();
    y = y.add(&x.scale(&alpha));
    let beta = qr(want_y[4]) - y.coeff(0).unwrap();
    y = y.add(&QSeries::constant(beta));
    assert_prefix(&y, -4, &want_y, "level 22 Y");
    assert_integral(&y, "level 22 Y");

    // Z: pole order 5 directly from an eta quotient with divisor
    // concentrated at infinity and the cusp 0.
    let z = eta_quotient(&"1^7*2^-3*11^3*22^-7".parse().unwrap(), prec + 2).unwrap();
    ensure(
        z.valuation() == Some(-5) && z.coeff(-5).unwrap().is_one(),
        "level 22 Z is not monic of pole order 5",
    );

    CatalogEntry {
        group: "22".parse().unwrap(),
        genus: 2,
        infinity_weierstrass: false,
        gens: Generators::FunctionField {
            x: x.truncated(prec),
            y: y.truncated(prec),
            extra: vec![z.truncated(prec)],
        },
        cusp_seeds: vec![
            core.seed_a.truncated(prec),
            core.seed_b.truncated(prec),
        ],
        prec,
        provenance: vec![
            (
                SeriesId::X,
                "oracle=hyperelliptic(t,y with y^2 = p6(t)) golden=9".into(),
            ),
            (
                SeriesId::Y,
                "oracle=hyperelliptic(t,y with y^2 = p6(t)) golden=7".into(),
            ),
            (
                SeriesId::Extra(0),
                "oracle=eta-quotient(1^7*2^-3*11^3*22^-7)".into(),
            ),
            (
                SeriesId::Seed(0),
                "oracle=eta-product(1^2*11^2) golden=5".into(),
            ),
            (
                SeriesId::Seed(1),
                "oracle=eta-product(1^2*11^2) under V_2 golden=5".into(),
            ),
        ],
    }
}

fn entry_level_22_plus_2() -> CatalogEntry {
    let prec = 200i64;
    let win = prec + 12;
    let a = eta_quotient(&"1^2*11^2".parse().unwrap(), win).unwrap();
    let h = a.add(&a.v_op(2).truncated(win).scale(&qr(2)));

    let pinned = QSeries::from_ints(-2, &[1, 0, 0, 1, 2, 1, 3, -3], 6);
    let sol = solve_weierstrass_x(&h, &pinned, None, prec + 4);
    assert_integral(&sol.x, "level 22+2 X");

    // Y = -theta X/(2h) + aX + b with the unique adjustment from
    // {0, 1/2}^2 that makes it integral (adjustments differing by an
    // integral multiple of X or an integer would also work, so the grid is
    // reduced modulo those).
    let base = sol.x.theta().scale(&qrat(-1, 2)).mul(&h.invert().unwrap());
    let mut found: Option<(QRat, QRat, QSeries)> = None;
    for na in 0..=1i64 {
        for nb in 0..=1i64 {
            let ca = qrat(na, 2);
            let cb = qrat(nb, 2);
            let y = base.add(&sol.x.scale(&ca)).add(&QSeries::constant(cb.clone()));
            if y.is_integral() {
                ensure(
                    found.is_none(),
                    "level 22+2: integral normalization of Y is not unique",
                );
                found = Some((ca, cb, y));
            }
        }
    }
    let (_, _, y) =
        found.unwrap_or_else(|| fail("level 22+2: no half-integral adjustment makes Y integral"));
    ensure(
        y.valuation() == Some(-3) && y.coeff(-3).unwrap().is_one(),
        "level 22+2 Y is not monic of pole order 3",
    );

    CatalogEntry {
        group: "22+2".parse().unwrap(),
        genus: 1,
        infinity_weierstrass: false,
        gens: Generators::FunctionField {
            x: sol.x.truncated(prec),
            y: y.truncated(prec),
            extra: vec![],
        },
        cusp_seeds: vec![h.truncated(prec)],
        prec,
        provenance: vec![
            (SeriesId::X, "oracle=weierstrass-ode golden=8".into()),
            (SeriesId::Y, "oracle=weierstrass-ode".into()),
            (
                SeriesId::Seed(0),
                "oracle=eta-product(1^2*11^2)+V_2-combination golden=5".into(),
            ),
        ],
    }
}

// ---------------------------------------------------------------------------

fn main() {
    let out_dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "crates/hecke-grid/data".to_string());
    let out = std::path::Path::new(&out_dir);
    if !out.is_dir() {
        fail(&format!("output directory {out_dir} does not exist"));
    }

    let entries = [
        ("11", entry_level_11()),
        ("17", entry_level_17_19(&CURVE_17)),
        ("19", entry_level_17_19(&CURVE_19)),
        ("22", entry_level_22()),
        ("22+2", entry_level_22_plus_2()),
    ];
    let mut all_ok = true;
    for (label, entry) in &entries {
        let report = validate(entry, &ValidateOptions::default());
        for c in &report.checks {
            println!(
                "{label}: {} {} ({})",
                if c.pass { "pass" } else { "FAIL" },
                c.name,
                c.detail
            );
            all_ok &= c.pass;
        }
        if report.pass() {
            let text = entry_to_text(entry).unwrap_or_else(|e| fail(&e.to_string()));
            let path = out.join(format!("{label}.hgc"));
            std::fs::write(&path, text).unwrap_or_else(|e| fail(&e.to_string()));
            println!("{label}: wrote {}", path.display());
        }
    }
    if !all_ok {
        fail("validation failures; data files for failing entries not written");
    }
}
