#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "deltapi/jet_series.hpp"

using namespace deltapi;

namespace {

CtxPtr z5(int prec = 8) { return PadicCtx::trivial(5, prec); }

JetSeries random_series(const CtxPtr& ctx, int q_prec, int delta_deg, int order,
                        std::mt19937_64& rng) {
    JetSeries s = JetSeries::zero(ctx, q_prec, delta_deg, order);
    std::uniform_int_distribution<int> nmon(1, 4), qe(0, 3), be(0, 2);
    std::uniform_int_distribution<long> coef(-40, 40);
    const int n = nmon(rng);
    for (int i = 0; i < n; ++i) {
        JetMonomial m;
        m.q_exp = qe(rng);
        for (int j = 0; j < order; ++j) m.d_exps.push_back(be(rng));
        m.trim();
        if (m.delta_deg() > delta_deg) continue;
        s.set_coeff(m, PadicNum::from_int(ctx, coef(rng)));
    }
    return s;
}

} // namespace

TEST_CASE("phi on the generator: q -> q^p + pi dq") {
    auto c = z5();
    auto q = JetSeries::variable(c, 0, 10, 2);
    auto fq = phi_series(q);
    CHECK(fq.order() == 1);
    CHECK(fq.coeff(JetMonomial(5, {})).eq_mod(PadicNum::from_int(c, 1), 8));
    CHECK(fq.coeff(JetMonomial(0, {1})).eq_mod(PadicNum::from_int(c, 5), 8));
    CHECK(fq.coeffs().size() == 2);

    auto one = JetSeries::constant(PadicNum::from_int(c, 1), 10, 2);
    auto fone = phi_series(one);
    CHECK(compare_mod_pi_power(fone, one, 8) >= 8);
}

TEST_CASE("phi of q^2") {
    auto c = z5();
    auto q2 = JetSeries::q_power(c, 2, 12, 2);
    auto f = phi_series(q2);
    CHECK(f.coeff(JetMonomial(10, {})).eq_mod(PadicNum::from_int(c, 1), 8));
    CHECK(f.coeff(JetMonomial(5, {1})).eq_mod(PadicNum::from_int(c, 10), 8));
    CHECK(f.coeff(JetMonomial(0, {2})).eq_mod(PadicNum::from_int(c, 25), 8));
}

TEST_CASE("delta on generators and shifts") {
    auto c = z5();
    auto q = JetSeries::variable(c, 0, 10, 2);
    auto dq = delta_series(q);
    CHECK(dq.order() == 1);
    CHECK(compare_mod_pi_power(dq, JetSeries::variable(c, 1, 10, 2), 7) >= 7);

    auto one = JetSeries::constant(PadicNum::from_int(c, 1), 10, 2);
    CHECK(compare_mod_pi_power(delta_series(one), JetSeries::zero(c, 10, 2), 7) >= 7);

    // delta(q+1) = dq - (q^4 + 2q^3 + 2q^2 + q)
    auto s = q + one;
    auto ds = delta_series(s);
    JetSeries expect = JetSeries::variable(c, 1, 10, 2);
    expect.set_coeff(JetMonomial(4, {}), PadicNum::from_int(c, -1));
    expect.set_coeff(JetMonomial(3, {}), PadicNum::from_int(c, -2));
    expect.set_coeff(JetMonomial(2, {}), PadicNum::from_int(c, -2));
    expect.set_coeff(JetMonomial(1, {}), PadicNum::from_int(c, -1));
    CHECK(compare_mod_pi_power(ds, expect, 7) >= 7);
}

TEST_CASE("apply_phi_poly basics") {
    auto c = z5();
    auto q = JetSeries::variable(c, 0, 30, 6);

    PhiPoly one(c, {mpq_class(1)});
    CHECK(compare_mod_pi_power(apply_phi_poly(one, q), q, 8) >= 8);

    PhiPoly phi(c, {mpq_class(0), mpq_class(1)});
    auto fq = apply_phi_poly(phi, q);
    CHECK(fq.coeff(JetMonomial(5, {})).eq_mod(PadicNum::from_int(c, 1), 8));
    CHECK(fq.coeff(JetMonomial(0, {1})).eq_mod(PadicNum::from_int(c, 5), 8));

    // phi^2 - phi on q equals the composed substitution
    PhiPoly p2(c, {mpq_class(0), mpq_class(-1), mpq_class(1)});
    auto got = apply_phi_poly(p2, q);
    auto expect = phi_series(phi_series(q)) - phi_series(q);
    CHECK(compare_mod_pi_power(got, expect, 8) >= 8);
    CHECK(got.order() == 2);
}

TEST_CASE("series arithmetic plumbing") {
    auto c = z5();
    auto q = JetSeries::variable(c, 0, 10, 2);
    auto qinv = q.mul_q_pow(-2); // q^{-1}
    auto prod = q * qinv;
    CHECK(prod.coeff(JetMonomial{}).eq_mod(PadicNum::from_int(c, 1), 8));
    CHECK(prod.coeffs().size() == 1);

    auto lhs = q + JetSeries::variable(c, 1, 10, 2).scalar_mul(PadicNum::from_int(c, 5));
    CHECK(compare_mod_pi_power(lhs, q, 8) == 1);
}

TEST_CASE("add against a dense oracle") {
    auto c = z5();
    std::mt19937_64 rng(7);
    for (int it = 0; it < 50; ++it) {
        auto a = random_series(c, 6, 4, 2, rng);
        auto b = random_series(c, 6, 4, 2, rng);
        auto s = a + b;
        // dense reference: iterate the full window support
        for (int qe = -6; qe <= 6; ++qe)
            for (int b1 = 0; b1 <= 4; ++b1)
                for (int b2 = 0; b2 + b1 <= 4; ++b2) {
                    JetMonomial m(qe, {b1, b2});
                    auto expect = a.coeff(m) + b.coeff(m);
                    if (expect.is_exact_zero()) {
                        CHECK(s.coeff(m).is_exact_zero());
                    } else {
                        CHECK(s.coeff(m).eq_mod(expect, 8));
                    }
                }
    }
}

TEST_CASE("prolongation law: delta after phi = phi after delta") {
    auto c = z5();
    std::mt19937_64 rng(11);
    for (int it = 0; it < 40; ++it) {
        auto s = random_series(c, 8, 4, it % 3, rng);
        auto lhs = delta_series(phi_series(s));
        auto rhs = phi_series(delta_series(s));
        CHECK(compare_mod_pi_power(lhs, rhs, 7) >= 7);
    }
}

TEST_CASE("phi_series is a ring homomorphism") {
    auto c = z5();
    std::mt19937_64 rng(13);
    for (int it = 0; it < 40; ++it) {
        auto s = random_series(c, 8, 4, 1, rng);
        auto t = random_series(c, 8, 4, 1, rng);
        CHECK(compare_mod_pi_power(phi_series(s * t), phi_series(s) * phi_series(t), 8) >= 8);
        CHECK(compare_mod_pi_power(phi_series(s + t), phi_series(s) + phi_series(t), 8) >= 8);
    }
}

TEST_CASE("delta axioms in the jet ring") {
    auto c = z5();
    std::mt19937_64 rng(17);
    auto pi = PadicNum::uniformizer(c);
    for (int it = 0; it < 30; ++it) {
        auto s = random_series(c, 8, 4, 1, rng);
        auto t = random_series(c, 8, 4, 1, rng);
        auto ds = delta_series(s), dt = delta_series(t);

        auto sum_lhs = delta_series(s + t);
        auto sum_rhs = ds + dt + series_c_pi(s, t);
        CHECK(compare_mod_pi_power(sum_lhs, sum_rhs, 7) >= 7);

        auto mul_lhs = delta_series(s * t);
        auto mul_rhs = s.pow_u(5) * dt + t.pow_u(5) * ds + (ds * dt).scalar_mul(pi);
        CHECK(compare_mod_pi_power(mul_lhs, mul_rhs, 7) >= 7);
    }
}

TEST_CASE("phi-poly module action composes") {
    auto c = z5();
    std::mt19937_64 rng(19);
    std::uniform_int_distribution<long> coef(-6, 6);
    for (int it = 0; it < 15; ++it) {
        std::vector<mpq_class> pc, qc;
        for (int i = 0; i < 3; ++i) pc.emplace_back(coef(rng));
        for (int i = 0; i < 3; ++i) qc.emplace_back(coef(rng));
        PhiPoly P(c, pc), Q(c, qc);
        auto g = random_series(c, 8, 4, 0, rng);
        g.set_max_order(8);
        auto lhs = apply_phi_poly(P * Q, g);
        auto rhs = apply_phi_poly(P, apply_phi_poly(Q, g));
        CHECK(compare_mod_pi_power(lhs, rhs, 7) >= 7);
    }
}

TEST_CASE("series inverse") {
    auto c = z5();
    auto q = JetSeries::variable(c, 0, 10, 2);
    auto one = JetSeries::constant(PadicNum::from_int(c, 1), 10, 2);
    auto u = one + q.scalar_mul(PadicNum::from_int(c, 3));
    auto ui = u.inverse();
    CHECK(compare_mod_pi_power(u * ui, one, 8) >= 8);

    CHECK_THROWS_AS(q.inverse(), NotAUnit);
    CHECK_THROWS_AS(q.mul_q_pow(-2).inverse(), NotAUnit);
}

TEST_CASE("delta_series requires integral coefficients") {
    auto c = z5();
    auto s = JetSeries::constant(PadicNum::from_rational(c, mpq_class(1, 5)), 8, 2);
    CHECK_THROWS_AS(delta_series(s), OutOfDomain);
}

TEST_CASE("order overflow is surfaced") {
    auto c = z5();
    auto q = JetSeries::variable(c, 0, 10, 2);
    q.set_max_order(1);
    auto f1 = phi_series(q);
    CHECK_THROWS_AS(phi_series(f1), OrderOverflow);
    PhiPoly p2(c, {mpq_class(0), mpq_class(0), mpq_class(1)});
    CHECK_THROWS_AS(apply_phi_poly(p2, q), OrderOverflow);
}

TEST_CASE("weight action on scalars") {
    auto c = z5();
    auto x = PadicNum::from_int(c, 2);
    // w = 3: plain cube; w = phi: frobenius image (identity on Z_p)
    CHECK(weight_pow(x, {3}).eq_mod(PadicNum::from_int(c, 8), 8));
    CHECK(weight_pow(x, {0, 1}).eq_mod(x, 8));
    CHECK(weight_pow(x, {-1}).eq_mod(x.inv(), 8));
    // multiplicativity in the base: (xy)^w = x^w y^w
    auto y = PadicNum::from_int(c, 3);
    std::vector<long> w{2, 1};
    CHECK(weight_pow(x * y, w).eq_mod(weight_pow(x, w) * weight_pow(y, w), 8));
}
