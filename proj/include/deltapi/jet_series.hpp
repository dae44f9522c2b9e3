#pragma once

#include <map>
#include <vector>

#include "deltapi/padic.hpp"

namespace deltapi {

/// Monomial q^a (dq)^{b_1} (d^2q)^{b_2} ... in the jet variables. The q
/// exponent may be negative (bounded Laurent tail); d_exps[j-1] is the
/// exponent of the j-th delta variable, trailing zeros trimmed.
struct JetMonomial {
    int q_exp = 0;
    std::vector<int> d_exps;

    JetMonomial() = default;
    JetMonomial(int q, std::vector<int> d) : q_exp(q), d_exps(std::move(d)) { trim(); }

    int delta_deg() const;
    int order() const { return static_cast<int>(d_exps.size()); }
    void trim();
    bool is_one() const { return q_exp == 0 && d_exps.empty(); }

    JetMonomial operator*(const JetMonomial& o) const;
    bool operator<(const JetMonomial& o) const;  // (q_exp, d_exps) lexicographic
    bool operator==(const JetMonomial& o) const { return q_exp == o.q_exp && d_exps == o.d_exps; }
};

/// Jet-variable index naming: j = 0 is q itself, j >= 1 is delta^j q.
JetMonomial jet_var(int j, int exponent = 1);

/// Truncated element of K_pi((q))[dq, ..., d^n q]: sparse coefficient map over
/// a retention window (|q_exp| <= q_prec, delta degree <= delta_deg). Values
/// are immutable in practice; all operations return new series.
///
/// Truncation convention: every operation expands exactly on the stored
/// monomials and truncates afterwards, so retained monomials of a single
/// operation are exact whenever the inputs are exactly supported inside the
/// window. Laurent tails arise only from explicit division by powers of q.
class JetSeries {
public:
    JetSeries() = default;

    static int default_delta_deg(int order) { return 2 * order + 2; }

    static JetSeries zero(CtxPtr ctx, int q_prec, int delta_deg, int order = 0);
    static JetSeries constant(const PadicNum& c, int q_prec, int delta_deg);
    /// q^a
    static JetSeries q_power(CtxPtr ctx, int a, int q_prec, int delta_deg);
    /// the variable q (j = 0) or delta^j q (j >= 1)
    static JetSeries variable(CtxPtr ctx, int j, int q_prec, int delta_deg);

    const CtxPtr& ctx() const { return ctx_; }
    int order() const { return order_; }
    int q_prec() const { return q_prec_; }
    int delta_deg() const { return delta_deg_; }
    int max_order() const { return max_order_; }
    JetSeries& set_max_order(int m) { max_order_ = m; return *this; }

    const std::map<JetMonomial, PadicNum>& coeffs() const { return coeffs_; }
    bool in_window(const JetMonomial& m) const;
    PadicNum coeff(const JetMonomial& m) const;  // exact zero when absent
    void set_coeff(const JetMonomial& m, PadicNum c);
    /// True when no monomial is stored (every coefficient exactly zero).
    bool is_exact_zero_series() const { return coeffs_.empty(); }

    /// Re-truncate or widen the retention window.
    JetSeries with_window(int q_prec, int delta_deg) const;
    JetSeries with_order(int n) const;

    JetSeries operator-() const;
    JetSeries operator+(const JetSeries& o) const;
    JetSeries operator-(const JetSeries& o) const;
    JetSeries operator*(const JetSeries& o) const;
    JetSeries scalar_mul(const PadicNum& c) const;
    JetSeries pow_u(long k) const;

    /// Multiply by q^k; k < 0 is the explicit division producing Laurent tails.
    JetSeries mul_q_pow(int k) const;

    /// Inverse of a series with unit constant term and no Laurent tail.
    JetSeries inverse() const;

    /// Divide every coefficient by pi^k after checking divisibility.
    JetSeries div_pi(int k = 1) const;

    /// Minimal coefficient valuation floor (>= value). Returns +cap for the
    /// exact zero series.
    int min_val_floor(int cap) const;

    std::string to_string() const;

private:
    CtxPtr ctx_;
    int order_ = 0;
    int q_prec_ = 0;
    int delta_deg_ = 0;
    int max_order_ = 8;
    std::map<JetMonomial, PadicNum> coeffs_;
};

/// Polynomial sum a_i phi^i with K_pi coefficients; acts on JetSeries through
/// apply_phi_poly and composes as operators (phi twists the coefficients it
/// moves past).
class PhiPoly {
public:
    PhiPoly() = default;
    PhiPoly(CtxPtr ctx, const std::vector<mpq_class>& coeffs);
    explicit PhiPoly(std::vector<PadicNum> coeffs);

    int degree() const { return coeffs_.empty() ? 0 : static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<PadicNum>& coeffs() const { return coeffs_; }
    const CtxPtr& ctx() const { return ctx_; }

    PhiPoly operator+(const PhiPoly& o) const;
    PhiPoly operator*(const PhiPoly& o) const;
    PhiPoly scalar_mul(const PadicNum& c) const;

    std::string to_string() const;

private:
    void trim();
    CtxPtr ctx_;
    std::vector<PadicNum> coeffs_;
};

/// phi on the jet ring: frobenius on coefficients, q -> q^p + pi dq,
/// d^j q -> (d^j q)^p + pi d^{j+1} q. Raises the order by one.
JetSeries phi_series(const JetSeries& s);

/// delta_pi on the jet ring: (phi_series(s) - s^p)/pi, checked monomial-wise.
JetSeries delta_series(const JetSeries& s);

/// C_pi in the jet ring: (s^p + t^p - (s+t)^p)/pi.
JetSeries series_c_pi(const JetSeries& s, const JetSeries& t);

/// Module action sum_i a_i phi^i(g); output order = g.order + deg P.
JetSeries apply_phi_poly(const PhiPoly& P, const JetSeries& g);

/// Largest k <= cap such that s - t has all coefficient valuations >= k.
int compare_mod_pi_power(const JetSeries& s, const JetSeries& t, int cap);

} // namespace deltapi
