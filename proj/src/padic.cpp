#include "deltapi/padic.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace deltapi {

namespace {

constexpr int kExactZeroPrec = 1 << 28;

bool is_small_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

int vp_int(const mpz_class& n, long p) {
    // p-adic valuation of a nonzero integer
    assert(n != 0);
    mpz_class m = n, q, r;
    int v = 0;
    for (;;) {
        mpz_fdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(p));
        if (r != 0) return v;
        m = q;
        ++v;
    }
}

mpz_class mod_pos(const mpz_class& a, const mpz_class& m) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

// ---- polynomial arithmetic in Z[t]/(min_poly), coefficients exact ----

using Poly = std::vector<mpz_class>;

void reduce_degree(Poly& a, const Poly& min_poly) {
    const size_t d = min_poly.size() - 1;
    while (a.size() > d) {
        mpz_class lead = a.back();
        a.pop_back();
        if (lead == 0) continue;
        const size_t shift = a.size() - d; // t^{d+shift} term folded down
        for (size_t i = 0; i < d; ++i) a[shift + i] -= lead * min_poly[i];
    }
    a.resize(d, mpz_class(0));
}

Poly poly_mul(const Poly& a, const Poly& b, const Poly& min_poly) {
    Poly out(a.size() + b.size() - 1, mpz_class(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    reduce_degree(out, min_poly);
    return out;
}

void poly_mod(Poly& a, const mpz_class& m) {
    for (auto& c : a) c = mod_pos(c, m);
}

bool poly_is_zero(const Poly& a) {
    return std::all_of(a.begin(), a.end(), [](const mpz_class& c) { return c == 0; });
}

// Extended Euclid in F_p[t]: returns g, u with u*a = g mod b (g the gcd, monic).
struct FpPoly {
    std::vector<mpz_class> c; // degree-indexed, normalized (no leading zeros)
};

FpPoly fp_trim(FpPoly a) {
    while (!a.c.empty() && a.c.back() == 0) a.c.pop_back();
    return a;
}

FpPoly fp_mod_p(const Poly& a, long p) {
    FpPoly r;
    r.c.resize(a.size());
    for (size_t i = 0; i < a.size(); ++i) r.c[i] = mod_pos(a[i], mpz_class(p));
    return fp_trim(std::move(r));
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, long p) {
    if (a.c.empty() || b.c.empty()) return {};
    FpPoly out;
    out.c.assign(a.c.size() + b.c.size() - 1, mpz_class(0));
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j)
            out.c[i + j] = mod_pos(out.c[i + j] + a.c[i] * b.c[j], mpz_class(p));
    return fp_trim(std::move(out));
}

FpPoly fp_sub(const FpPoly& a, const FpPoly& b, long p) {
    FpPoly out;
    out.c.resize(std::max(a.c.size(), b.c.size()), mpz_class(0));
    for (size_t i = 0; i < out.c.size(); ++i) {
        mpz_class x = i < a.c.size() ? a.c[i] : mpz_class(0);
        mpz_class y = i < b.c.size() ? b.c[i] : mpz_class(0);
        out.c[i] = mod_pos(x - y, mpz_class(p));
    }
    return fp_trim(std::move(out));
}

mpz_class fp_inv_scalar(const mpz_class& a, long p) {
    mpz_class out, m(p);
    if (mpz_invert(out.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw DivisionByZero("padic_core", "non-invertible residue");
    return out;
}

// quotient and remainder of a by b (b nonzero) in F_p[t]
void fp_divmod(const FpPoly& a, const FpPoly& b, long p, FpPoly& q, FpPoly& r) {
    q = {};
    r = a;
    const mpz_class lead_inv = fp_inv_scalar(b.c.back(), p);
    while (r.c.size() >= b.c.size() && !r.c.empty()) {
        const size_t shift = r.c.size() - b.c.size();
        mpz_class factor = mod_pos(r.c.back() * lead_inv, mpz_class(p));
        if (q.c.size() < shift + 1) q.c.resize(shift + 1, mpz_class(0));
        q.c[shift] = mod_pos(q.c[shift] + factor, mpz_class(p));
        for (size_t i = 0; i < b.c.size(); ++i)
            r.c[shift + i] = mod_pos(r.c[shift + i] - factor * b.c[i], mpz_class(p));
        r = fp_trim(std::move(r));
    }
    q = fp_trim(std::move(q));
}

// u with u*a = 1 mod (b, p); requires gcd(a, b) = 1 in F_p[t].
FpPoly fp_invert_mod(const FpPoly& a, const FpPoly& b, long p) {
    // extended Euclid: r0 = b, r1 = a; track coefficients of a only
    FpPoly r0 = b, r1 = a;
    FpPoly s0 = {}, s1 = {{mpz_class(1)}};
    while (!r1.c.empty()) {
        FpPoly q, r;
        fp_divmod(r0, r1, p, q, r);
        FpPoly s = fp_sub(s0, fp_mul(q, s1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if (r0.c.size() != 1)
        throw DivisionByZero("padic_core", "unit inverse seed: residue not invertible");
    const mpz_class ginv = fp_inv_scalar(r0.c[0], p);
    for (auto& c : s0.c) c = mod_pos(c * ginv, mpz_class(p));
    return s0;
}

bool fp_is_irreducible(const Poly& f, long p) {
    // trial division by all monic polynomials of degree <= deg(f)/2
    FpPoly fp = fp_mod_p(f, p);
    const size_t d = fp.c.size() - 1;
    if (d < 1) return false;
    for (size_t k = 1; 2 * k <= d; ++k) {
        // enumerate monic degree-k polynomials
        std::vector<long> digits(k, 0);
        for (;;) {
            FpPoly g;
            g.c.resize(k + 1);
            for (size_t i = 0; i < k; ++i) g.c[i] = digits[i];
            g.c[k] = 1;
            FpPoly q, r;
            fp_divmod(fp, g, p, q, r);
            if (r.c.empty()) return false;
            size_t pos = 0;
            while (pos < k && digits[pos] == p - 1) digits[pos++] = 0;
            if (pos == k) break;
            ++digits[pos];
        }
    }
    return true;
}

} // namespace

// ---------------------------------------------------------------------------
// PadicCtx
// ---------------------------------------------------------------------------

CtxPtr PadicCtx::make(long p, std::vector<mpz_class> min_poly, CtxKind kind, int prec) {
    switch (kind) {
        case CtxKind::Trivial: return trivial(p, prec);
        case CtxKind::Ramified: return ramified(p, std::move(min_poly), prec);
        case CtxKind::Unramified: return unramified(p, std::move(min_poly), prec);
    }
    throw InvalidCtx("padic_core", "unknown ctx kind");
}

namespace {
void validate_common(long p, int prec) {
    if (!is_small_prime(p) || p < 5)
        throw InvalidCtx("padic_core", "p must be a prime >= 5");
    if (prec < 1) throw InvalidCtx("padic_core", "prec_M must be >= 1");
}
} // namespace

CtxPtr PadicCtx::trivial(long p, int prec) {
    validate_common(p, prec);
    auto ctx = std::shared_ptr<PadicCtx>(new PadicCtx());
    ctx->p_ = p;
    ctx->min_poly_ = {mpz_class(0), mpz_class(1)};
    ctx->kind_ = CtxKind::Trivial;
    ctx->prec_ = prec;
    ctx->deg_ = 1;
    ctx->e_ = 1;
    ctx->f_ = 1;
    ctx->work_digits_ = prec + 2;
    return ctx;
}

CtxPtr PadicCtx::ramified(long p, std::vector<mpz_class> min_poly, int prec) {
    validate_common(p, prec);
    const int d = static_cast<int>(min_poly.size()) - 1;
    if (d < 2 || min_poly.back() != 1)
        throw InvalidCtx("padic_core", "ramified min_poly must be monic of degree >= 2");
    if (vp_int(min_poly[0] == 0 ? mpz_class(1) : min_poly[0], p) != 1 || min_poly[0] == 0)
        throw InvalidCtx("padic_core", "min_poly not Eisenstein: v_p(constant term) != 1");
    for (int i = 1; i < d; ++i)
        if (min_poly[i] != 0 && vp_int(min_poly[i], p) < 1)
            throw InvalidCtx("padic_core", "min_poly not Eisenstein: coefficient not divisible by p");
    auto ctx = std::shared_ptr<PadicCtx>(new PadicCtx());
    ctx->p_ = p;
    ctx->min_poly_ = std::move(min_poly);
    ctx->kind_ = CtxKind::Ramified;
    ctx->prec_ = prec;
    ctx->deg_ = d;
    ctx->e_ = d;
    ctx->f_ = 1;
    ctx->work_digits_ = (prec + d - 1) / d + 2;
    return ctx;
}

CtxPtr PadicCtx::unramified(long p, std::vector<mpz_class> min_poly, int prec) {
    validate_common(p, prec);
    const int d = static_cast<int>(min_poly.size()) - 1;
    if (d < 2 || min_poly.back() != 1)
        throw InvalidCtx("padic_core", "unramified min_poly must be monic of degree >= 2");
    if (d > 8) throw InvalidCtx("padic_core", "extension degree > 8 not supported");
    if (!fp_is_irreducible(min_poly, p))
        throw InvalidCtx("padic_core", "min_poly is not irreducible mod p");
    auto ctx = std::shared_ptr<PadicCtx>(new PadicCtx());
    ctx->p_ = p;
    ctx->min_poly_ = std::move(min_poly);
    ctx->kind_ = CtxKind::Unramified;
    ctx->prec_ = prec;
    ctx->deg_ = d;
    ctx->e_ = 1;
    ctx->f_ = d;
    ctx->work_digits_ = prec + 2;

    // Frobenius image of t: Newton-lift the root of min_poly starting from t^p mod p.
    const Poly& mp = ctx->min_poly_;
    Poly z(static_cast<size_t>(d), mpz_class(0));
    // t^p mod (min_poly, p)
    {
        Poly t{mpz_class(0), mpz_class(1)};
        t.resize(static_cast<size_t>(d), mpz_class(0));
        Poly acc{mpz_class(1)};
        acc.resize(static_cast<size_t>(d), mpz_class(0));
        long ebits = p;
        Poly base = t;
        while (ebits > 0) {
            if (ebits & 1) {
                acc = poly_mul(acc, base, mp);
                poly_mod(acc, mpz_class(p));
            }
            base = poly_mul(base, base, mp);
            poly_mod(base, mpz_class(p));
            ebits >>= 1;
        }
        z = acc;
    }
    // Newton: z <- z - min_poly(z)/min_poly'(z), doubling p-adic accuracy.
    Poly dmp(static_cast<size_t>(d), mpz_class(0));
    for (int i = 1; i <= d; ++i) {
        if (i - 1 < d) dmp[i - 1] = mpz_class(i) * mp[i];
    }
    auto eval_at = [&](const Poly& poly, const Poly& at, const mpz_class& m) {
        Poly acc(static_cast<size_t>(d), mpz_class(0));
        for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
            acc = poly_mul(acc, at, mp);
            acc[0] += *it;
            poly_mod(acc, m);
        }
        return acc;
    };
    int good = 1;
    while (good < ctx->work_digits_) {
        good = std::min(2 * good, ctx->work_digits_);
        const mpz_class m = ctx->p_pow(good);
        Poly fz = eval_at(mp, z, m);
        Poly dz = eval_at(dmp, z, m);
        // invert dz mod (min_poly, p^good) by Newton from the mod-p inverse
        FpPoly seed = fp_invert_mod(fp_mod_p(dz, p), fp_mod_p(mp, p), p);
        Poly inv(seed.c);
        inv.resize(static_cast<size_t>(d), mpz_class(0));
        int idig = 1;
        while (idig < good) {
            idig = std::min(2 * idig, good);
            const mpz_class mm = ctx->p_pow(idig);
            Poly prod = poly_mul(dz, inv, mp);
            // inv <- inv*(2 - dz*inv)
            for (auto& c : prod) c = -c;
            prod[0] += 2;
            inv = poly_mul(inv, prod, mp);
            poly_mod(inv, mm);
        }
        Poly corr = poly_mul(fz, inv, mp);
        for (int i = 0; i < d; ++i) z[i] = mod_pos(z[i] - corr[i], m);
    }
    ctx->frob_t_ = z;
#ifndef NDEBUG
    Poly check = eval_at(mp, z, ctx->p_pow(ctx->work_digits_));
    assert(poly_is_zero(check));
#endif
    return ctx;
}

const mpz_class& PadicCtx::p_pow(int k) const {
    assert(k >= 0);
    if (p_pows_.empty()) p_pows_.push_back(mpz_class(1));
    while (static_cast<int>(p_pows_.size()) <= k)
        p_pows_.push_back(p_pows_.back() * p_);
    return p_pows_[static_cast<size_t>(k)];
}

std::string PadicCtx::kind_name() const {
    switch (kind_) {
        case CtxKind::Trivial: return "trivial";
        case CtxKind::Ramified: return "ramified";
        case CtxKind::Unramified: return "unramified";
    }
    return "?";
}

bool PadicCtx::same_as(const PadicCtx& o) const {
    return p_ == o.p_ && kind_ == o.kind_ && prec_ == o.prec_ && min_poly_ == o.min_poly_;
}

// ---------------------------------------------------------------------------
// PadicNum
// ---------------------------------------------------------------------------

namespace {

// exact pi-adic valuation of a polynomial representative, assuming coefficients
// are known exactly (as integers); nullopt for the zero polynomial.
std::optional<int> poly_pi_val(const Poly& a, const PadicCtx& ctx) {
    std::optional<int> best;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        int v = vp_int(a[i], ctx.p()) * ctx.e();
        if (ctx.kind() == CtxKind::Ramified) v += static_cast<int>(i);
        if (!best || v < *best) best = v;
    }
    return best;
}

// divide by pi once; requires pi | a (valuation >= 1)
Poly poly_div_pi(const Poly& a, const PadicCtx& ctx, const mpz_class& work_mod) {
    const long p = ctx.p();
    if (ctx.kind() != CtxKind::Ramified) {
        Poly out(a.size());
        for (size_t i = 0; i < a.size(); ++i) {
            assert(mpz_divisible_ui_p(a[i].get_mpz_t(), static_cast<unsigned long>(p)));
            mpz_divexact_ui(out[i].get_mpz_t(), a[i].get_mpz_t(), static_cast<unsigned long>(p));
        }
        return out;
    }
    // t * y = a in Z[t]/(E): y_{e-1} = -a_0 / m_0, y_{j-1} = a_j + y_{e-1} m_j
    const Poly& mp = ctx.min_poly();
    const int e = ctx.e();
    Poly y(static_cast<size_t>(e), mpz_class(0));
    mpz_class m0_over_p;
    mpz_divexact_ui(m0_over_p.get_mpz_t(), mp[0].get_mpz_t(), static_cast<unsigned long>(p));
    mpz_class a0_over_p;
    assert(mpz_divisible_ui_p(a[0].get_mpz_t(), static_cast<unsigned long>(p)));
    mpz_divexact_ui(a0_over_p.get_mpz_t(), a[0].get_mpz_t(), static_cast<unsigned long>(p));
    mpz_class inv_m0;
    {
        mpz_class m = work_mod;
        if (mpz_invert(inv_m0.get_mpz_t(), m0_over_p.get_mpz_t(), m.get_mpz_t()) == 0)
            throw NonDivisible("padic_core", "Eisenstein constant term not p-times-unit");
    }
    y[static_cast<size_t>(e - 1)] = mod_pos(-a0_over_p * inv_m0, work_mod);
    for (int j = e - 1; j >= 1; --j)
        y[static_cast<size_t>(j - 1)] =
            mod_pos(a[static_cast<size_t>(j)] + y[static_cast<size_t>(e - 1)] * mp[static_cast<size_t>(j)], work_mod);
    return y;
}

Poly poly_mul_pi(const Poly& a, const PadicCtx& ctx) {
    if (ctx.kind() != CtxKind::Ramified) {
        Poly out(a.size());
        for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] * ctx.p();
        return out;
    }
    Poly t{mpz_class(0), mpz_class(1)};
    return poly_mul(a, t, ctx.min_poly());
}

// canonical per-coefficient reduction of a unit part at relative precision r
void canonicalize_unit(Poly& u, const PadicCtx& ctx, int r) {
    for (size_t i = 0; i < u.size(); ++i) {
        int k;
        if (ctx.kind() == CtxKind::Ramified) {
            const int num = r - static_cast<int>(i);
            k = num <= 0 ? 0 : (num + ctx.e() - 1) / ctx.e();
        } else {
            k = r;
        }
        u[i] = k <= 0 ? mpz_class(0) : mod_pos(u[i], ctx.p_pow(k));
    }
}

} // namespace

PadicNum PadicNum::zero(CtxPtr ctx) {
    PadicNum x;
    x.ctx_ = std::move(ctx);
    x.val_ = kExactZeroPrec;
    return x;
}

PadicNum PadicNum::zero_at(CtxPtr ctx, int abs_prec) {
    PadicNum x;
    x.ctx_ = std::move(ctx);
    x.val_ = abs_prec;
    return x;
}

bool PadicNum::is_exact_zero() const { return is_zero() && val_ >= kExactZeroPrec; }

PadicNum PadicNum::make(CtxPtr ctx, Poly poly, int val_shift, long abs_prec) {
    const PadicCtx& c = *ctx;
    reduce_degree(poly, c.min_poly());
    const long abs_cap = std::min<long>(abs_prec, static_cast<long>(kExactZeroPrec));
    auto v = poly_pi_val(poly, c);
    // digits of information available about the polynomial relative to val_shift
    const long known = abs_cap - val_shift;
    if (!v || *v >= known) {
        return zero_at(std::move(ctx), static_cast<int>(abs_cap));
    }
    PadicNum x;
    x.val_ = val_shift + *v;
    long rel = abs_cap - x.val_;
    rel = std::min<long>(rel, c.prec());
    x.rel_prec_ = static_cast<int>(rel);
    // extract unit: divide by pi^{*v}
    const mpz_class work = c.p_pow(c.work_digits() + (c.kind() == CtxKind::Ramified ? (*v + c.e() - 1) / c.e() : 0) + 1);
    Poly u = poly;
    for (int k = 0; k < *v; ++k) {
        if (c.kind() != CtxKind::Ramified) {
            u = poly_div_pi(u, c, work);
        } else {
            // exact t-division needs coefficients not yet reduced mod work at the
            // p-division step; operate exactly, reduce at the end
            u = poly_div_pi(u, c, work);
        }
    }
    canonicalize_unit(u, c, x.rel_prec_);
    x.unit_ = std::move(u);
    x.ctx_ = std::move(ctx);
    if (x.rel_prec_ <= 0) return zero_at(x.ctx_, static_cast<int>(abs_cap));
    return x;
}

PadicNum PadicNum::from_int(CtxPtr ctx, const mpz_class& n) {
    if (n == 0) return zero(std::move(ctx));
    const int full = ctx->prec();
    Poly poly{n};
    poly.resize(static_cast<size_t>(ctx->degree()), mpz_class(0));
    const int v = vp_int(n, ctx->p()) * ctx->e();
    return make(std::move(ctx), std::move(poly), 0, static_cast<long>(v) + full);
}

PadicNum PadicNum::from_rational(CtxPtr ctx, const mpq_class& r) {
    if (r == 0) return zero(std::move(ctx));
    const long p = ctx->p();
    mpz_class num = r.get_num(), den = r.get_den();
    const int vn = vp_int(num, p), vd = vp_int(den, p);
    mpz_class nu = num / ctx->p_pow(vn);
    mpz_class du = den / ctx->p_pow(vd);
    const int val = (vn - vd) * ctx->e();
    const mpz_class m = ctx->p_pow(ctx->work_digits());
    mpz_class du_inv;
    if (mpz_invert(du_inv.get_mpz_t(), du.get_mpz_t(), m.get_mpz_t()) == 0)
        throw DivisionByZero("padic_core", "denominator not invertible");
    Poly poly{mod_pos(nu * du_inv, m)};
    poly.resize(static_cast<size_t>(ctx->degree()), mpz_class(0));
    return make(std::move(ctx), std::move(poly), val, static_cast<long>(val) + ctx->prec());
}

PadicNum PadicNum::from_poly(CtxPtr ctx, const Poly& coeffs) {
    Poly poly = coeffs;
    poly.resize(std::max(poly.size(), static_cast<size_t>(ctx->degree())), mpz_class(0));
    reduce_degree(poly, ctx->min_poly());
    auto v = poly_pi_val(poly, *ctx);
    if (!v) return zero(std::move(ctx));
    return make(std::move(ctx), std::move(poly), 0, static_cast<long>(*v) + ctx->prec());
}

PadicNum PadicNum::uniformizer(CtxPtr ctx) {
    if (ctx->kind() == CtxKind::Ramified) {
        Poly t(static_cast<size_t>(ctx->degree()), mpz_class(0));
        t[1] = 1;
        return from_poly(std::move(ctx), t);
    }
    return from_int(std::move(ctx), ctx->p());
}

std::optional<int> PadicNum::valuation() const {
    if (is_zero()) return std::nullopt;
    return val_;
}

PadicNum PadicNum::operator-() const {
    if (is_zero()) return *this;
    PadicNum x = *this;
    for (auto& c : x.unit_) c = -c;
    canonicalize_unit(x.unit_, *ctx_, x.rel_prec_);
    return x;
}

PadicNum PadicNum::operator+(const PadicNum& o) const {
    assert(ctx_ && o.ctx_ && ctx_->same_as(*o.ctx_));
    if (is_zero() && o.is_zero()) {
        return zero_at(ctx_, static_cast<int>(std::min<long>(val_, o.val_)));
    }
    if (is_zero()) return o.cap_abs_prec(std::min<long>(val_, o.abs_prec()));
    if (o.is_zero()) return o + *this;
    const int m = std::min(val_, o.val_);
    const long abs = std::min<long>(abs_prec(), o.abs_prec());
    Poly a = unit_, b = o.unit_;
    for (int k = 0; k < val_ - m; ++k) a = poly_mul_pi(a, *ctx_);
    for (int k = 0; k < o.val_ - m; ++k) b = poly_mul_pi(b, *ctx_);
    for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return make(ctx_, std::move(a), m, abs);
}

PadicNum PadicNum::operator-(const PadicNum& o) const { return *this + (-o); }

PadicNum PadicNum::operator*(const PadicNum& o) const {
    assert(ctx_ && o.ctx_ && ctx_->same_as(*o.ctx_));
    if (is_exact_zero() || o.is_exact_zero()) return zero(ctx_);
    if (is_zero() || o.is_zero()) {
        // 0~ (mod pi^A) * y: zero mod pi^{A + v(y)}; for two zeros, A + A'.
        const long a_part = is_zero() ? val_ : val_;
        const long b_part = o.is_zero() ? o.val_ : o.val_;
        return zero_at(ctx_, static_cast<int>(std::min<long>(a_part + b_part, kExactZeroPrec)));
    }
    Poly prod = poly_mul(unit_, o.unit_, ctx_->min_poly());
    const int val = val_ + o.val_;
    const long abs = static_cast<long>(val) + std::min(rel_prec_, o.rel_prec_);
    return make(ctx_, std::move(prod), val, abs);
}

PadicNum PadicNum::inv() const {
    if (is_zero())
        throw DivisionByZero("padic_core", "inverting an element indistinguishable from 0 at precision");
    const PadicCtx& c = *ctx_;
    const int r = rel_prec_;
    const int kneed = (c.kind() == CtxKind::Ramified) ? (r + c.e() - 1) / c.e() + 1 : r;
    // seed mod p, Newton-double
    FpPoly seed = fp_invert_mod(fp_mod_p(unit_, c.p()), fp_mod_p(c.min_poly(), c.p()), c.p());
    Poly z(seed.c);
    z.resize(static_cast<size_t>(c.degree()), mpz_class(0));
    int good = 1;
    while (good < kneed) {
        good = std::min(2 * good, kneed);
        const mpz_class m = c.p_pow(good);
        Poly prod = poly_mul(unit_, z, c.min_poly());
        for (auto& cc : prod) cc = -cc;
        prod[0] += 2;
        z = poly_mul(z, prod, c.min_poly());
        poly_mod(z, m);
    }
    return make(ctx_, std::move(z), -val_, static_cast<long>(-val_) + r);
}

PadicNum PadicNum::pow_i(long k) const {
    if (k == 0) return from_int(ctx_, 1);
    if (k < 0) return inv().pow_i(-k);
    PadicNum base = *this;
    PadicNum acc = from_int(ctx_, 1);
    // keep the accumulator's precision from capping the result: multiply
    // tracks min rel prec, and from_int starts at full ctx precision
    long e = k;
    for (;;) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e == 0) break;
        base = base * base;
    }
    return acc;
}

PadicNum PadicNum::shift(int k) const {
    if (is_exact_zero()) return *this;
    if (is_zero()) {
        return zero_at(ctx_, static_cast<int>(std::min<long>(static_cast<long>(val_) + k, kExactZeroPrec)));
    }
    PadicNum x = *this;
    x.val_ += k;
    return x;
}

PadicNum PadicNum::cap_abs_prec(long abs) const {
    if (abs >= abs_prec()) return *this;
    if (is_zero()) return zero_at(ctx_, static_cast<int>(abs));
    const long rel = abs - val_;
    if (rel <= 0) return zero_at(ctx_, static_cast<int>(abs));
    PadicNum x = *this;
    x.rel_prec_ = static_cast<int>(rel);
    canonicalize_unit(x.unit_, *ctx_, x.rel_prec_);
    if (poly_is_zero(x.unit_)) return zero_at(ctx_, static_cast<int>(abs));
    return x;
}

PadicNum PadicNum::cap_rel_prec(int r) const {
    if (is_zero() || r >= rel_prec_) return *this;
    PadicNum x = *this;
    x.rel_prec_ = std::max(r, 0);
    if (x.rel_prec_ == 0) return zero_at(ctx_, val_);
    canonicalize_unit(x.unit_, *ctx_, x.rel_prec_);
    if (poly_is_zero(x.unit_)) return zero_at(ctx_, val_ + x.rel_prec_);
    return x;
}

int PadicNum::diff_val_floor(const PadicNum& o) const { return (*this - o).val_floor(); }

bool PadicNum::eq_mod(const PadicNum& o, int k) const {
    PadicNum d = *this - o;
    if (d.is_zero()) {
        if (d.val_ >= k) return true;
        throw PrecisionExhausted("padic_core", "cannot certify equality at requested precision");
    }
    return d.val_ >= k;
}

bool PadicNum::same_repr(const PadicNum& o) const {
    return val_ == o.val_ && rel_prec_ == o.rel_prec_ && unit_ == o.unit_;
}

std::vector<mpz_class> PadicNum::residue() const {
    std::vector<mpz_class> r(static_cast<size_t>(ctx_->degree()), mpz_class(0));
    if (is_zero() || val_ > 0) return r;
    if (val_ < 0) throw OutOfDomain("padic_core", "residue of an element outside R_pi");
    for (size_t i = 0; i < unit_.size(); ++i) r[i] = mod_pos(unit_[i], mpz_class(ctx_->p()));
    return r;
}

std::string PadicNum::to_string() const {
    if (is_exact_zero()) return "0";
    if (is_zero()) {
        std::ostringstream os;
        os << "O(pi^" << val_ << ")";
        return os.str();
    }
    std::ostringstream os;
    bool first = true;
    bool multiple = false;
    {
        int nonzero = 0;
        for (const auto& c : unit_)
            if (c != 0) ++nonzero;
        multiple = nonzero > 1;
    }
    if (multiple) os << "(";
    for (size_t i = 0; i < unit_.size(); ++i) {
        if (unit_[i] == 0) continue;
        if (!first) os << "+";
        os << unit_[i].get_str();
        if (i == 1) os << "*t";
        if (i > 1) os << "*t^" << i;
        first = false;
    }
    if (first) os << "0";
    if (multiple) os << ")";
    os << "*pi^" << val_;
    return os.str();
}

// ---------------------------------------------------------------------------
// frobenius / delta_pi / c_pi
// ---------------------------------------------------------------------------

PadicNum frobenius(const PadicNum& x) {
    const PadicCtx& c = *x.ctx();
    if (c.kind() != CtxKind::Unramified) return x;
    if (x.is_zero()) return x;
    // substitute t -> frob_t in the unit part; phi fixes Z_p coefficients
    const Poly& z = c.frob_t();
    Poly acc(static_cast<size_t>(c.degree()), mpz_class(0));
    const mpz_class m = c.p_pow(c.work_digits());
    for (auto it = x.unit_digits().rbegin(); it != x.unit_digits().rend(); ++it) {
        acc = poly_mul(acc, z, c.min_poly());
        acc[0] += *it;
        poly_mod(acc, m);
    }
    return PadicNum::make(x.ctx(), std::move(acc), x.val_floor(),
                          static_cast<long>(x.val_floor()) + x.rel_prec());
}

PadicNum delta_pi(const PadicNum& x) {
    if (!x.is_zero() && x.val_floor() < 0)
        throw OutOfDomain("padic_core", "delta_pi requires val(x) >= 0");
    if (x.is_exact_zero()) return x;
    const PadicNum num = frobenius(x) - x.pow_i(x.ctx()->p());
    if (num.is_zero()) return PadicNum::zero_at(x.ctx(), std::max(num.val_floor() - 1, 0));
    if (*num.valuation() < 1)
        throw NonDivisible("padic_core", "phi(x) - x^p not divisible by pi: broken Frobenius lift");
    return num.shift(-1);
}

PadicNum weight_pow(const PadicNum& x, const std::vector<long>& w) {
    PadicNum acc = PadicNum::from_int(x.ctx(), 1);
    PadicNum phix = x;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i > 0) phix = frobenius(phix);
        if (w[i] != 0) acc = acc * phix.pow_i(w[i]);
    }
    return acc;
}

PadicNum c_pi(const PadicNum& x, const PadicNum& y) {
    if ((!x.is_zero() && x.val_floor() < 0) || (!y.is_zero() && y.val_floor() < 0))
        throw OutOfDomain("padic_core", "C_pi requires arguments in R_pi");
    const long p = x.ctx()->p();
    const PadicNum num = x.pow_i(p) + y.pow_i(p) - (x + y).pow_i(p);
    if (num.is_zero()) return PadicNum::zero_at(x.ctx(), std::max(num.val_floor() - 1, 0));
    if (*num.valuation() < 1)
        throw NonDivisible("padic_core", "x^p + y^p - (x+y)^p not divisible by pi");
    return num.shift(-1);
}

} // namespace deltapi
