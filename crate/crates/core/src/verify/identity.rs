//! Algebraic identities of the exterior calculus kernel, checked in exact arithmetic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::polyform::poly::exponents_up_to;
use crate::polyform::{
    cross_skew_check_with, is_skew, s_op, s_prime_op, upsilon1, upsilon2, vect, vect_inv, vect_unchecked, Mat3,
    MatrixField, Poly, PolyForm, Rational, Scalar, ValueSpace, Vec3,
};

use super::report::CheckReport;

/// Largest polynomial degree of the random inputs.
pub const MAX_INPUT_DEGREE: usize = 4;

type Q = Rational;
type VectFn = dyn Fn(&Mat3<Q>) -> Vec3<Q> + Sync;

/// Replaceable pieces of the kernel, so that the suite can be shown to catch faults.
pub struct IdentityHooks {
    pub vect: Box<VectFn>,
}

impl Default for IdentityHooks {
    fn default() -> Self {
        IdentityHooks {
            vect: Box::new(vect_unchecked),
        }
    }
}

impl IdentityHooks {
    /// `vect` with its sign flipped.
    pub fn vect_sign_error() -> Self {
        IdentityHooks {
            vect: Box::new(|q| vect_unchecked(q).map(|v| -v)),
        }
    }
}

fn small(rng: &mut ChaCha8Rng) -> Q {
    Q::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=4).into())
}

/// A sparse random polynomial in three variables of degree at most `degree`.
pub fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> Poly<Q> {
    let exps = exponents_up_to(3, degree);
    let mut p = Poly::zero(3);
    for _ in 0..4 {
        let e = exps[rng.gen_range(0..exps.len())];
        p.add_term(e, small(rng));
    }
    p
}

pub fn random_form(rng: &mut ChaCha8Rng, k: usize, values: ValueSpace, degree: usize) -> PolyForm<Q> {
    let nb = crate::polyform::form_basis(3, k).len();
    let coeffs = (0..nb * values.dim()).map(|_| random_poly(rng, degree)).collect();
    PolyForm::from_coeffs(3, k, values, coeffs)
}

fn random_matrix_field(rng: &mut ChaCha8Rng, degree: usize) -> MatrixField<Q> {
    let entries: Vec<Poly<Q>> = (0..9).map(|_| random_poly(rng, degree)).collect();
    MatrixField::from_fn(|i, j| entries[3 * i + j].clone())
}

fn random_vec(rng: &mut ChaCha8Rng) -> Vec3<Q> {
    std::array::from_fn(|_| small(rng))
}

/// Tracks the largest coefficient deviation of one identity over all trials.
struct Tally {
    name: &'static str,
    what: &'static str,
    failures: usize,
    max_dev: f64,
}

impl Tally {
    fn new(name: &'static str, what: &'static str) -> Self {
        Tally {
            name,
            what,
            failures: 0,
            max_dev: 0.0,
        }
    }

    fn record(&mut self, zero: bool, dev: f64) {
        if !zero {
            self.failures += 1;
        }
        self.max_dev = self.max_dev.max(dev);
    }

    fn form(&mut self, w: &PolyForm<Q>) {
        self.record(w.is_zero(), w.max_abs_coeff());
    }

    fn matrix(&mut self, m: &MatrixField<Q>) {
        self.record(m.is_zero(), m.max_abs_coeff());
    }

    fn vector(&mut self, a: &[Q], b: &[Q]) {
        let dev = a.iter().zip(b).map(|(x, y)| (x.clone() - y.clone()).magnitude()).fold(0.0, f64::max);
        self.record(a == b, dev);
    }

    fn finish(self, trials: usize, report: &mut CheckReport) {
        report.push(
            format!("identity.{}", self.name),
            self.failures == 0,
            format!(
                "{}: {} of {trials} inputs nonzero, max deviation {:e}",
                self.what, self.failures, self.max_dev
            ),
        );
    }
}

/// Each identity evaluated on `trials` seeded random inputs of degree at most 4.
pub fn run_identity_suite(seed: u64, trials: usize, hooks: &IdentityHooks) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let deg = MAX_INPUT_DEGREE;
    let mut xi = Tally::new("xi_inverse", "Ξ⁻¹Ξ − I and ΞΞ⁻¹ − I");
    let mut vt = Tally::new("vect_inverse", "vect vect⁻¹ − I and vect⁻¹ vect − I");
    let mut cs = Tally::new("cross_skew", "a × b + 2 vect skw(a bᵀ)");
    let mut ds = Tally::new("ds_minus_sd", "dS + Sd");
    let mut adj = Tally::new("adjoint", "(Sω) ∧ μ − (−1)^k ω ∧ S′μ");
    let mut ident = Tally::new("identification", "S₁Υ₁F − Υ₂ΞF");
    let mut je = Tally::new("j_eps", "J ε(u)");
    let mut dj = Tally::new("div_j", "div Jτ");
    for trial in 0..trials {
        let f = random_matrix_field(&mut rng, deg);
        xi.matrix(&f.xi().xi_inv().sub(&f));
        xi.matrix(&f.xi_inv().xi().sub(&f));

        let v = random_vec(&mut rng);
        let q = vect_inv(&v);
        let back = vect(&q).expect("vect⁻¹ is skew");
        vt.vector(&back, &v);
        let again = vect_inv(&back);
        vt.vector(&again.concat(), &q.concat());
        vt.record(is_skew(&q), 0.0);

        let (a, b) = (random_vec(&mut rng), random_vec(&mut rng));
        let (lhs, rhs) = cross_skew_check_with(&a, &b, |m| (hooks.vect)(m));
        cs.vector(&lhs, &rhs);

        let k = trial % 2;
        let w = random_form(&mut rng, k, ValueSpace::V, deg);
        let dsw = s_op(&w).and_then(|s| s.d());
        let sdw = w.d().and_then(|d| s_op(&d));
        match (dsw, sdw) {
            (Ok(x), Ok(y)) => ds.form(&x.add(&y)),
            _ => ds.record(false, f64::INFINITY),
        }

        let k = trial % 3;
        let w = random_form(&mut rng, k, ValueSpace::V, deg / 2);
        let m = random_form(&mut rng, 2 - k, ValueSpace::K, deg / 2);
        let lhs = s_op(&w).and_then(|s| s.wedge(&m));
        let rhs = s_prime_op(&m).and_then(|s| w.wedge(&s));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => {
                let sign = if k % 2 == 0 { Q::from_i64(1) } else { Q::from_i64(-1) };
                adj.form(&l.sub(&r.scale(&sign)));
            }
            _ => adj.record(false, f64::INFINITY),
        }

        let g = random_matrix_field(&mut rng, deg);
        match s_op(&upsilon1(&g)) {
            Ok(s) => ident.form(&s.sub(&upsilon2(&g.xi()))),
            Err(_) => ident.record(false, f64::INFINITY),
        }

        let u: [Poly<Q>; 3] = std::array::from_fn(|_| random_poly(&mut rng, deg));
        je.matrix(&MatrixField::eps(&u).j_op());

        let tau = random_matrix_field(&mut rng, deg);
        let divj = tau.j_op().div();
        let zero = divj.iter().all(|p| p.is_zero());
        dj.record(zero, divj.iter().map(|p| p.max_abs_coeff()).fold(0.0, f64::max));
    }
    let mut report = CheckReport::new();
    for t in [xi, vt, cs, ds, adj, ident, je, dj] {
        t.finish(trials, &mut report);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_hold_and_faults_are_named() {
        let report = run_identity_suite(7, 10, &IdentityHooks::default());
        assert!(report.passed(), "{report}");
        let broken = run_identity_suite(7, 10, &IdentityHooks::vect_sign_error());
        let failed: Vec<&str> = broken.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(failed, ["identity.cross_skew"]);
    }
}
