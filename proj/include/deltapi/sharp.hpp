#pragma once

#include <optional>
#include <set>
#include <string>

#include "deltapi/char_arith.hpp"
#include "deltapi/jet_series.hpp"
#include "deltapi/qexp.hpp"

namespace deltapi {

/// One Galois-conjugate term of a sharp expansion: a coefficient list for the
/// embedding sigma and the phi-polynomial applied to its f^{(-1)}.
struct SharpTerm {
    NewformData form;
    PhiPoly P;
    std::string sigma = "id";
};

/// Assembly request for E(f^sharp) = sum_sigma P_sigma(phi) (f^{(-1)})^sigma.
struct SharpSpec {
    std::vector<SharpTerm> terms;
    std::optional<long> kappa_bar;             // weight of the underlying mod-p form
    std::optional<long> realized_kappa_prime;  // must lie in conjugates(kappa_bar, p)
    int order = 2;                             // max admissible deg P_sigma
};

struct SharpMetadata {
    std::set<long> conjugate_set;  // conjugates(kappa_bar, p) when kappa_bar is given
    std::optional<long> realized_kappa_prime;
    int order = 0;                 // max deg P_sigma actually used
    int nu = 0;                    // minimal s with pi^s * series integral
    std::optional<bool> nonzero;   // nullopt = inconclusive at precision
};

struct SharpResult {
    JetSeries series;
    SharpMetadata meta;
};

/// sum_sigma apply_phi_poly(P_sigma, f_inverse(form_sigma)) with metadata.
SharpResult assemble_sharp(const SharpSpec& spec, int q_prec, const CtxPtr& ctx);

/// Minimal nu >= 0 with pi^nu s coefficient-wise integral at the tracked
/// precision (never +infinity: precision floors bound it).
int integrality_exponent(const JetSeries& s);

/// Distinguishability from zero: true when some coefficient has exact
/// valuation below its precision floor, false for the exact zero series,
/// nullopt (inconclusive) when every stored coefficient is zero at precision.
std::optional<bool> nonzero_check(const JetSeries& s);

/// The weight-2 ordinary preset (phi^2 - a_p phi + p) / p.
PhiPoly sharp_preset_phi_poly(const NewformData& nf, const CtxPtr& ctx);

} // namespace deltapi
