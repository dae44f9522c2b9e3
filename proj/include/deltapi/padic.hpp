#pragma once

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "deltapi/errors.hpp"

namespace deltapi {

enum class CtxKind { Trivial, Ramified, Unramified };

class PadicCtx;
using CtxPtr = std::shared_ptr<const PadicCtx>;

/// Ambient ring descriptor for R_pi / K_pi: a prime p >= 5 together with a
/// monic integer polynomial in t cutting out the extension of Z_p, and the
/// number of significant pi-adic digits carried by arithmetic.
///
/// Three kinds are supported and never mixed:
///   Trivial     Z_p itself, min_poly = t, pi = p.
///   Ramified    Z_p[t]/(E) with E Eisenstein at p, pi = t, e = deg E.
///   Unramified  Z_p[t]/(F) with F irreducible mod p, pi = p, f = deg F.
class PadicCtx : public std::enable_shared_from_this<PadicCtx> {
public:
    static CtxPtr trivial(long p, int prec);
    static CtxPtr ramified(long p, std::vector<mpz_class> min_poly, int prec);
    static CtxPtr unramified(long p, std::vector<mpz_class> min_poly, int prec);
    static CtxPtr make(long p, std::vector<mpz_class> min_poly, CtxKind kind, int prec);

    long p() const { return p_; }
    CtxKind kind() const { return kind_; }
    int prec() const { return prec_; }
    int degree() const { return deg_; }
    int e() const { return e_; }
    int f() const { return f_; }
    const std::vector<mpz_class>& min_poly() const { return min_poly_; }

    /// p^k for 0 <= k (cached; k modest).
    const mpz_class& p_pow(int k) const;

    /// Unramified only: the Hensel root of min_poly congruent to t^p mod p,
    /// i.e. the image of t under the Frobenius lift. Coefficients mod p^{work_digits}.
    const std::vector<mpz_class>& frob_t() const { return frob_t_; }

    /// Number of base-p digits carried internally per coefficient (>= ceil(prec/e) + 2).
    int work_digits() const { return work_digits_; }

    std::string kind_name() const;
    bool same_as(const PadicCtx& o) const;

private:
    PadicCtx() = default;

    long p_ = 0;
    std::vector<mpz_class> min_poly_;
    CtxKind kind_ = CtxKind::Trivial;
    int prec_ = 0;
    int deg_ = 1, e_ = 1, f_ = 1;
    int work_digits_ = 0;
    std::vector<mpz_class> frob_t_;
    mutable std::vector<mpz_class> p_pows_;
};

/// Truncated element of R_pi or K_pi.
///
/// Nonzero values are (valuation, unit, relative precision) with the unit part
/// a polynomial in t of degree < deg(min_poly), coefficients canonically
/// reduced so that the stored data is exactly the coset unit + pi^rel_prec R_pi.
/// The valuation of a nonzero tracked value is exact; a value whose unit part
/// vanishes at the available precision is "zero at precision A": all that is
/// known is x = 0 mod pi^A.
class PadicNum {
public:
    PadicNum() = default;

    static PadicNum zero(CtxPtr ctx);                    // exact zero
    static PadicNum zero_at(CtxPtr ctx, int abs_prec);   // O(pi^abs_prec)
    static PadicNum from_int(CtxPtr ctx, const mpz_class& n);
    static PadicNum from_int(CtxPtr ctx, long n) { return from_int(ctx, mpz_class(n)); }
    static PadicNum from_rational(CtxPtr ctx, const mpq_class& r);
    /// sum_i coeffs[i] t^i with exact integer coefficients, carried to full ctx precision.
    static PadicNum from_poly(CtxPtr ctx, const std::vector<mpz_class>& coeffs);
    static PadicNum uniformizer(CtxPtr ctx);

    const CtxPtr& ctx() const { return ctx_; }
    bool valid() const { return ctx_ != nullptr; }

    /// True when indistinguishable from 0 at the tracked precision.
    bool is_zero() const { return unit_.empty(); }
    bool is_exact_zero() const;

    /// Exact pi-adic valuation; nullopt (= +infinity) for zero at precision.
    std::optional<int> valuation() const;
    /// Known lower bound on the valuation (abs_prec bound for zeros).
    int val_floor() const { return val_; }

    int rel_prec() const { return rel_prec_; }
    /// x is known modulo pi^{abs_prec()}.
    int abs_prec() const { return is_zero() ? val_ : val_ + rel_prec_; }

    bool is_unit() const { return !is_zero() && val_ == 0; }

    PadicNum operator-() const;
    PadicNum operator+(const PadicNum& o) const;
    PadicNum operator-(const PadicNum& o) const;
    PadicNum operator*(const PadicNum& o) const;

    /// Multiplicative inverse in K_pi; DivisionByZero on zero at precision.
    PadicNum inv() const;
    PadicNum pow_i(long k) const;

    /// Multiply by pi^k (k may be negative; negative k requires valuation >= -k
    /// only in the sense that precision floors move along).
    PadicNum shift(int k) const;

    /// Reduce the claimed relative precision (no-op if already lower).
    PadicNum cap_rel_prec(int r) const;
    /// Restrict to the value known modulo pi^abs (no-op if already coarser).
    PadicNum cap_abs_prec(long abs) const;

    /// v(x - o) as a floor: exact valuation of the difference, or the joint
    /// absolute precision when the difference is zero at precision.
    int diff_val_floor(const PadicNum& o) const;
    /// x = o mod pi^k (decidable at the tracked precision; throws
    /// PrecisionExhausted if the joint precision cannot certify k digits).
    bool eq_mod(const PadicNum& o, int k) const;
    /// Identical canonical representation (value, valuation, precision).
    bool same_repr(const PadicNum& o) const;

    /// Canonical serialization: "<unit>*pi^<v>", "O(pi^A)" or "0"; the unit is
    /// the decimal canonical representative, a polynomial in t if deg > 1.
    std::string to_string() const;

    /// Canonical unit-part coefficients (degree-indexed, size = ctx degree; empty for zero).
    const std::vector<mpz_class>& unit_digits() const { return unit_; }

    /// Residue in (Z/p)[t]/(min_poly) as coefficient vector; for valuation > 0
    /// the residue is zero.
    std::vector<mpz_class> residue() const;

private:
    friend PadicNum frobenius(const PadicNum&);
    friend PadicNum delta_pi(const PadicNum&);
    friend PadicNum c_pi(const PadicNum&, const PadicNum&);

    static PadicNum make(CtxPtr ctx, std::vector<mpz_class> poly, int val_shift, long abs_prec);

    CtxPtr ctx_;
    int val_ = 0;       // valuation (nonzero) or absolute precision bound (zero)
    int rel_prec_ = 0;  // significant pi-digits of the unit part
    std::vector<mpz_class> unit_;
};

/// The Frobenius lift: identity on trivial and ramified contexts, the unique
/// lift of x -> x^p sending t to the Hensel root of min_poly congruent to t^p
/// on unramified ones. Ring endomorphism with phi(x) = x^p mod pi.
PadicNum frobenius(const PadicNum& x);

/// The pi-derivation delta_pi x = (phi(x) - x^p) / pi. Requires val(x) >= 0;
/// consumes one digit of absolute precision. NonDivisible signals a broken
/// Frobenius lift and aborts the computation.
PadicNum delta_pi(const PadicNum& x);

/// C_pi(x, y) = (x^p + y^p - (x+y)^p) / pi, the carry polynomial twisting the
/// additivity of delta_pi.
PadicNum c_pi(const PadicNum& x, const PadicNum& y);

/// Multiplicative weight action x^w = prod_i phi^i(x)^{w_i} for a weight
/// w = sum w_i phi^i in Z[phi]; negative w_i require x invertible.
PadicNum weight_pow(const PadicNum& x, const std::vector<long>& w);

} // namespace deltapi
