#include "deltapi/jet_series.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace deltapi {

// ---------------------------------------------------------------------------
// JetMonomial
// ---------------------------------------------------------------------------

int JetMonomial::delta_deg() const {
    int s = 0;
    for (int b : d_exps) s += b;
    return s;
}

void JetMonomial::trim() {
    while (!d_exps.empty() && d_exps.back() == 0) d_exps.pop_back();
}

JetMonomial JetMonomial::operator*(const JetMonomial& o) const {
    JetMonomial r;
    r.q_exp = q_exp + o.q_exp;
    r.d_exps.resize(std::max(d_exps.size(), o.d_exps.size()), 0);
    for (size_t i = 0; i < d_exps.size(); ++i) r.d_exps[i] += d_exps[i];
    for (size_t i = 0; i < o.d_exps.size(); ++i) r.d_exps[i] += o.d_exps[i];
    r.trim();
    return r;
}

bool JetMonomial::operator<(const JetMonomial& o) const {
    if (q_exp != o.q_exp) return q_exp < o.q_exp;
    const size_t n = std::max(d_exps.size(), o.d_exps.size());
    for (size_t i = 0; i < n; ++i) {
        const int a = i < d_exps.size() ? d_exps[i] : 0;
        const int b = i < o.d_exps.size() ? o.d_exps[i] : 0;
        if (a != b) return a < b;
    }
    return false;
}

JetMonomial jet_var(int j, int exponent) {
    JetMonomial m;
    if (j == 0) {
        m.q_exp = exponent;
    } else {
        m.d_exps.assign(static_cast<size_t>(j), 0);
        m.d_exps[static_cast<size_t>(j - 1)] = exponent;
    }
    return m;
}

// ---------------------------------------------------------------------------
// JetSeries
// ---------------------------------------------------------------------------

JetSeries JetSeries::zero(CtxPtr ctx, int q_prec, int delta_deg, int order) {
    JetSeries s;
    s.ctx_ = std::move(ctx);
    s.q_prec_ = q_prec;
    s.delta_deg_ = delta_deg;
    s.order_ = order;
    return s;
}

JetSeries JetSeries::constant(const PadicNum& c, int q_prec, int delta_deg) {
    JetSeries s = zero(c.ctx(), q_prec, delta_deg, 0);
    s.set_coeff(JetMonomial{}, c);
    return s;
}

JetSeries JetSeries::q_power(CtxPtr ctx, int a, int q_prec, int delta_deg) {
    JetSeries s = zero(ctx, q_prec, delta_deg, 0);
    s.set_coeff(JetMonomial(a, {}), PadicNum::from_int(ctx, 1));
    return s;
}

JetSeries JetSeries::variable(CtxPtr ctx, int j, int q_prec, int delta_deg) {
    JetSeries s = zero(ctx, q_prec, delta_deg, j);
    s.set_coeff(jet_var(j), PadicNum::from_int(ctx, 1));
    return s;
}

bool JetSeries::in_window(const JetMonomial& m) const {
    return m.q_exp <= q_prec_ && m.q_exp >= -q_prec_ && m.delta_deg() <= delta_deg_;
}

PadicNum JetSeries::coeff(const JetMonomial& m) const {
    auto it = coeffs_.find(m);
    if (it == coeffs_.end()) return PadicNum::zero(ctx_);
    return it->second;
}

void JetSeries::set_coeff(const JetMonomial& m, PadicNum c) {
    if (!in_window(m)) return;
    if (c.is_exact_zero()) {
        coeffs_.erase(m);
        return;
    }
    order_ = std::max(order_, m.order());
    coeffs_[m] = std::move(c);
}

JetSeries JetSeries::with_window(int q_prec, int delta_deg) const {
    JetSeries s = zero(ctx_, q_prec, delta_deg, order_);
    s.max_order_ = max_order_;
    for (const auto& [m, c] : coeffs_) s.set_coeff(m, c);
    return s;
}

JetSeries JetSeries::with_order(int n) const {
    JetSeries s = *this;
    s.order_ = std::max(s.order_, n);
    return s;
}

JetSeries JetSeries::operator-() const {
    JetSeries s = *this;
    for (auto& [m, c] : s.coeffs_) c = -c;
    return s;
}

JetSeries JetSeries::operator+(const JetSeries& o) const {
    assert(ctx_ && o.ctx_ && ctx_->same_as(*o.ctx_));
    JetSeries s = zero(ctx_, std::min(q_prec_, o.q_prec_), std::min(delta_deg_, o.delta_deg_),
                       std::max(order_, o.order_));
    s.max_order_ = std::max(max_order_, o.max_order_);
    for (const auto& [m, c] : coeffs_) s.set_coeff(m, c);
    for (const auto& [m, c] : o.coeffs_) {
        auto it = s.coeffs_.find(m);
        if (it == s.coeffs_.end()) {
            s.set_coeff(m, c);
        } else {
            PadicNum sum = it->second + c;
            if (sum.is_exact_zero())
                s.coeffs_.erase(it);
            else
                it->second = std::move(sum);
        }
    }
    return s;
}

JetSeries JetSeries::operator-(const JetSeries& o) const { return *this + (-o); }

JetSeries JetSeries::operator*(const JetSeries& o) const {
    assert(ctx_ && o.ctx_ && ctx_->same_as(*o.ctx_));
    JetSeries s = zero(ctx_, std::min(q_prec_, o.q_prec_), std::min(delta_deg_, o.delta_deg_),
                       std::max(order_, o.order_));
    s.max_order_ = std::max(max_order_, o.max_order_);
    for (const auto& [ma, ca] : coeffs_) {
        for (const auto& [mb, cb] : o.coeffs_) {
            JetMonomial m = ma * mb;
            if (!s.in_window(m)) continue;
            PadicNum prod = ca * cb;
            auto it = s.coeffs_.find(m);
            if (it == s.coeffs_.end()) {
                s.set_coeff(m, std::move(prod));
            } else {
                PadicNum sum = it->second + prod;
                if (sum.is_exact_zero())
                    s.coeffs_.erase(it);
                else
                    it->second = std::move(sum);
            }
        }
    }
    return s;
}

JetSeries JetSeries::scalar_mul(const PadicNum& c) const {
    JetSeries s = zero(ctx_, q_prec_, delta_deg_, order_);
    s.max_order_ = max_order_;
    if (c.is_exact_zero()) return s;
    for (const auto& [m, cc] : coeffs_) s.set_coeff(m, cc * c);
    return s;
}

JetSeries JetSeries::pow_u(long k) const {
    assert(k >= 0);
    JetSeries acc = constant(PadicNum::from_int(ctx_, 1), q_prec_, delta_deg_);
    acc.order_ = order_;
    acc.max_order_ = max_order_;
    if (k == 0) return acc;
    JetSeries base = *this;
    long e = k;
    for (;;) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e == 0) break;
        base = base * base;
    }
    return acc;
}

JetSeries JetSeries::mul_q_pow(int k) const {
    JetSeries s = zero(ctx_, q_prec_, delta_deg_, order_);
    s.max_order_ = max_order_;
    for (const auto& [m, c] : coeffs_) {
        JetMonomial mm = m;
        mm.q_exp += k;
        s.set_coeff(mm, c);
    }
    return s;
}

JetSeries JetSeries::inverse() const {
    // split s = c0 (1 + v) with c0 the constant-monomial coefficient
    const PadicNum c0 = coeff(JetMonomial{});
    if (c0.is_zero() || c0.val_floor() != 0)
        throw NotAUnit("jet_series", "series inverse requires a unit constant term");
    for (const auto& [m, c] : coeffs_) {
        (void)c;
        if (m.q_exp < 0)
            throw NotAUnit("jet_series", "series inverse requires no Laurent tail");
    }
    const PadicNum c0i = c0.inv();
    JetSeries v = scalar_mul(c0i);
    v.set_coeff(JetMonomial{}, v.coeff(JetMonomial{}) - PadicNum::from_int(ctx_, 1));
    // v is supported on monomials of positive (q,delta) grade: nilpotent in the window
    const int nil = q_prec_ + delta_deg_ + 1;
    JetSeries acc = constant(c0i, q_prec_, delta_deg_);
    acc.order_ = order_;
    JetSeries term = constant(c0i, q_prec_, delta_deg_);
    for (int k = 1; k <= nil; ++k) {
        term = term * v;
        if (term.coeffs_.empty()) break;
        acc = acc + (k % 2 == 1 ? -term : term);
    }
    return acc;
}

JetSeries JetSeries::div_pi(int k) const {
    JetSeries s = zero(ctx_, q_prec_, delta_deg_, order_);
    s.max_order_ = max_order_;
    for (const auto& [m, c] : coeffs_) {
        if (!c.is_zero() && c.val_floor() < k)
            throw NonDivisible("jet_series", "coefficient not divisible by pi^k");
        PadicNum shifted = c.shift(-k);
        if (shifted.is_zero() && shifted.val_floor() < 0)
            shifted = PadicNum::zero_at(ctx_, 0);
        s.set_coeff(m, shifted);
    }
    return s;
}

int JetSeries::min_val_floor(int cap) const {
    int best = cap;
    for (const auto& [m, c] : coeffs_) {
        (void)m;
        best = std::min(best, c.val_floor());
    }
    return best;
}

std::string JetSeries::to_string() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : coeffs_) {
        if (!first) os << " + ";
        os << "(" << c.to_string() << ")";
        if (m.q_exp != 0) os << "*q^" << m.q_exp;
        for (size_t j = 0; j < m.d_exps.size(); ++j) {
            if (m.d_exps[j] == 0) continue;
            os << "*d" << (j + 1) << "q";
            if (m.d_exps[j] != 1) os << "^" << m.d_exps[j];
        }
        first = false;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// phi / delta on the jet ring
// ---------------------------------------------------------------------------

namespace {

mpz_class binom(long n, long k) {
    // binomial coefficient allowing negative upper index
    assert(k >= 0);
    if (n >= 0) {
        if (k > n) return 0;
        mpz_class r;
        mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
        return r;
    }
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(-n + k - 1), static_cast<unsigned long>(k));
    return k % 2 == 0 ? r : mpz_class(-r);
}

using TermList = std::vector<std::pair<JetMonomial, PadicNum>>;

// exact expansion of phi(q^a) = (q^p + pi dq)^a within the delta window
TermList phi_q_power_terms(const CtxPtr& ctx, int a, int delta_cap) {
    const long p = ctx->p();
    const PadicNum pi = PadicNum::uniformizer(ctx);
    TermList out;
    const int kmax = a >= 0 ? std::min<int>(a, delta_cap) : delta_cap;
    for (int k = 0; k <= kmax; ++k) {
        const mpz_class b = binom(a, k);
        if (b == 0) continue;
        JetMonomial m(static_cast<int>(p) * (a - k), {k});
        out.emplace_back(std::move(m), PadicNum::from_int(ctx, b) * pi.pow_i(k));
    }
    return out;
}

// exact expansion of phi((d^j q)^b) = ((d^j q)^p + pi d^{j+1} q)^b
TermList phi_delta_power_terms(const CtxPtr& ctx, int j, int b, int delta_cap) {
    const long p = ctx->p();
    const PadicNum pi = PadicNum::uniformizer(ctx);
    TermList out;
    for (int k = 0; k <= b; ++k) {
        const int ddeg = static_cast<int>(p) * (b - k) + k;
        if (ddeg > delta_cap) continue;
        JetMonomial m;
        m.d_exps.assign(static_cast<size_t>(j + 1), 0);
        m.d_exps[static_cast<size_t>(j - 1)] = static_cast<int>(p) * (b - k);
        m.d_exps[static_cast<size_t>(j)] = k;
        m.trim();
        out.emplace_back(std::move(m), PadicNum::from_int(ctx, binom(b, k)) * pi.pow_i(k));
    }
    return out;
}

TermList convolve(const TermList& a, const TermList& b, int delta_cap) {
    TermList out;
    out.reserve(a.size() * b.size());
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            JetMonomial m = ma * mb;
            if (m.delta_deg() > delta_cap) continue;
            out.emplace_back(std::move(m), ca * cb);
        }
    return out;
}

} // namespace

JetSeries phi_series(const JetSeries& s) {
    if (s.order() + 1 > s.max_order())
        throw OrderOverflow("jet_series", "phi would exceed the configured max jet order");
    JetSeries out = JetSeries::zero(s.ctx(), s.q_prec(), s.delta_deg(), s.order() + 1);
    out.set_max_order(s.max_order());
    for (const auto& [m, c] : s.coeffs()) {
        TermList terms{{JetMonomial{}, frobenius(c)}};
        if (m.q_exp != 0)
            terms = convolve(terms, phi_q_power_terms(s.ctx(), m.q_exp, s.delta_deg()), s.delta_deg());
        for (size_t j = 0; j < m.d_exps.size(); ++j) {
            if (m.d_exps[j] == 0) continue;
            terms = convolve(terms,
                             phi_delta_power_terms(s.ctx(), static_cast<int>(j) + 1, m.d_exps[j],
                                                   s.delta_deg()),
                             s.delta_deg());
        }
        for (auto& [mm, cc] : terms) {
            if (!out.in_window(mm)) continue;
            PadicNum sum = out.coeff(mm) + cc;
            out.set_coeff(mm, std::move(sum));
        }
    }
    return out;
}

JetSeries delta_series(const JetSeries& s) {
    for (const auto& [m, c] : s.coeffs()) {
        (void)m;
        if (!c.is_zero() && c.val_floor() < 0)
            throw OutOfDomain("jet_series", "delta_series requires coefficients in R_pi");
    }
    JetSeries num = phi_series(s) - s.pow_u(s.ctx()->p());
    return num.div_pi(1);
}

JetSeries series_c_pi(const JetSeries& s, const JetSeries& t) {
    const long p = s.ctx()->p();
    JetSeries num = s.pow_u(p) + t.pow_u(p) - (s + t).pow_u(p);
    return num.div_pi(1);
}

int compare_mod_pi_power(const JetSeries& s, const JetSeries& t, int cap) {
    JetSeries d = s - t;
    return d.min_val_floor(cap);
}

// ---------------------------------------------------------------------------
// PhiPoly
// ---------------------------------------------------------------------------

PhiPoly::PhiPoly(CtxPtr ctx, const std::vector<mpq_class>& coeffs) : ctx_(std::move(ctx)) {
    coeffs_.reserve(coeffs.size());
    for (const auto& c : coeffs) coeffs_.push_back(PadicNum::from_rational(ctx_, c));
    trim();
}

PhiPoly::PhiPoly(std::vector<PadicNum> coeffs) : coeffs_(std::move(coeffs)) {
    if (!coeffs_.empty()) ctx_ = coeffs_.front().ctx();
    trim();
}

void PhiPoly::trim() {
    while (!coeffs_.empty() && coeffs_.back().is_exact_zero()) coeffs_.pop_back();
}

PhiPoly PhiPoly::operator+(const PhiPoly& o) const {
    std::vector<PadicNum> c(std::max(coeffs_.size(), o.coeffs_.size()));
    const CtxPtr ctx = ctx_ ? ctx_ : o.ctx_;
    for (size_t i = 0; i < c.size(); ++i) {
        PadicNum a = i < coeffs_.size() ? coeffs_[i] : PadicNum::zero(ctx);
        PadicNum b = i < o.coeffs_.size() ? o.coeffs_[i] : PadicNum::zero(ctx);
        c[i] = a + b;
    }
    PhiPoly r(std::move(c));
    r.ctx_ = ctx;
    return r;
}

PhiPoly PhiPoly::operator*(const PhiPoly& o) const {
    // operator composition: (a phi^i)(b phi^j) = a phi^i(b) phi^{i+j}
    if (coeffs_.empty() || o.coeffs_.empty()) return PhiPoly();
    std::vector<PadicNum> c(coeffs_.size() + o.coeffs_.size() - 1, PadicNum::zero(ctx_));
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        for (size_t j = 0; j < o.coeffs_.size(); ++j) {
            PadicNum b = o.coeffs_[j];
            for (size_t k = 0; k < i; ++k) b = frobenius(b);
            c[i + j] = c[i + j] + coeffs_[i] * b;
        }
    }
    PhiPoly r(std::move(c));
    r.ctx_ = ctx_;
    return r;
}

PhiPoly PhiPoly::scalar_mul(const PadicNum& s) const {
    std::vector<PadicNum> c = coeffs_;
    for (auto& ci : c) ci = ci * s;
    PhiPoly r(std::move(c));
    r.ctx_ = ctx_;
    return r;
}

std::string PhiPoly::to_string() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) os << " + ";
        os << "(" << coeffs_[i].to_string() << ")";
        if (i == 1) os << "*phi";
        if (i > 1) os << "*phi^" << i;
    }
    return os.str();
}

JetSeries apply_phi_poly(const PhiPoly& P, const JetSeries& g) {
    if (g.order() + P.degree() > g.max_order())
        throw OrderOverflow("jet_series", "phi-polynomial action exceeds the configured max jet order");
    // widen the working window so iterated substitution stays exact on the
    // monomials retained at the end (needed inputs for (Q, D) live in (Q + D, D))
    const int qw = g.q_prec() + g.delta_deg();
    JetSeries iter = g.with_window(qw, g.delta_deg());
    JetSeries acc = JetSeries::zero(g.ctx(), qw, g.delta_deg(), g.order());
    acc.set_max_order(std::max(g.max_order(), g.order() + P.degree()));
    iter.set_max_order(acc.max_order());
    const auto& cs = P.coeffs();
    for (size_t i = 0; i < cs.size(); ++i) {
        if (i > 0) iter = phi_series(iter);
        if (cs[i].is_exact_zero()) continue;
        acc = acc + iter.scalar_mul(cs[i]);
    }
    JetSeries out = acc.with_window(g.q_prec(), g.delta_deg());
    out = out.with_order(g.order() + P.degree());
    return out;
}

} // namespace deltapi
