#pragma once

#include <json.hpp>

#include <string>

#include "deltapi/formal_group.hpp"
#include "deltapi/jet_series.hpp"
#include "deltapi/padic.hpp"
#include "deltapi/qexp.hpp"

// Canonical JSON forms shared by the CLI and the golden-file tests. All maps
// are emitted in fixed insertion order (ordered_json) and all numbers that can
// exceed machine range travel as decimal strings, so byte-identical output is
// reproducible run to run.

namespace deltapi {

using ojson = nlohmann::ordered_json;

inline ojson ctx_to_json(const PadicCtx& ctx) {
    ojson j;
    j["p"] = ctx.p();
    ojson mp = ojson::array();
    for (const auto& c : ctx.min_poly()) mp.push_back(c.get_str());
    j["min_poly"] = mp;
    j["kind"] = ctx.kind_name();
    j["prec_M"] = ctx.prec();
    return j;
}

inline ojson padic_to_json(const PadicNum& x) {
    ojson j;
    j["repr"] = x.to_string();
    if (auto v = x.valuation())
        j["val"] = *v;
    else
        j["val"] = nullptr;
    j["rel_prec"] = x.rel_prec();
    j["abs_prec"] = x.abs_prec();
    return j;
}

inline ojson series_to_json(const JetSeries& s) {
    ojson arr = ojson::array();
    for (const auto& [m, c] : s.coeffs()) {
        ojson e;
        ojson mono;
        mono["q"] = m.q_exp;
        ojson dq = ojson::array();
        for (int j = 0; j < s.order(); ++j)
            dq.push_back(j < m.order() ? m.d_exps[static_cast<size_t>(j)] : 0);
        mono["dq"] = dq;
        e["monomial"] = mono;
        e["coeff"] = c.to_string();
        arr.push_back(e);
    }
    return arr;
}

inline ojson curve_to_json(const WeierstrassCurve& E) {
    ojson j;
    j["a1"] = E.a1.get_str();
    j["a2"] = E.a2.get_str();
    j["a3"] = E.a3.get_str();
    j["a4"] = E.a4.get_str();
    j["a6"] = E.a6.get_str();
    return j;
}

inline WeierstrassCurve curve_from_json(const ojson& j) {
    auto get = [&](const char* k) {
        if (!j.contains(k)) throw Usage("cli", std::string("curve JSON missing ") + k);
        const auto& v = j.at(k);
        if (v.is_string()) return mpz_class(v.get<std::string>());
        return mpz_class(v.get<long>());
    };
    return WeierstrassCurve{get("a1"), get("a2"), get("a3"), get("a4"), get("a6")};
}

inline mpq_class rational_from_json(const ojson& v) {
    if (v.is_string()) {
        mpq_class q(v.get<std::string>());
        q.canonicalize();
        return q;
    }
    return mpq_class(v.get<long>());
}

inline NewformData newform_from_json(const ojson& j) {
    for (const char* k : {"N", "weight", "p", "an"})
        if (!j.contains(k)) throw Usage("cli", std::string("newform JSON missing ") + k);
    std::vector<mpq_class> an;
    for (const auto& v : j.at("an")) an.push_back(rational_from_json(v));
    return NewformData::make(j.at("N").get<long>(), j.at("weight").get<long>(),
                             j.at("p").get<long>(), std::move(an), "file");
}

inline ojson newform_to_json(const NewformData& nf) {
    ojson j;
    j["N"] = nf.level;
    j["weight"] = nf.weight;
    j["p"] = nf.p;
    ojson an = ojson::array();
    for (const auto& a : nf.an) an.push_back(a.get_str());
    j["an"] = an;
    j["source"] = nf.source;
    return j;
}

/// Parse a scalar: "123", "-4/5", or a JSON array "[c0,c1,...]" giving a
/// polynomial in t, or the canonical repr "<unit>*pi^<v>".
inline PadicNum padic_from_string(const CtxPtr& ctx, const std::string& s) {
    if (s.empty()) throw Usage("cli", "empty scalar");
    if (s == "0") return PadicNum::zero(ctx);
    if (s.front() == '[') {
        ojson arr = ojson::parse(s);
        std::vector<mpz_class> c;
        for (const auto& v : arr)
            c.push_back(v.is_string() ? mpz_class(v.get<std::string>()) : mpz_class(v.get<long>()));
        return PadicNum::from_poly(ctx, c);
    }
    const auto star = s.find("*pi^");
    if (star != std::string::npos) {
        std::string unit = s.substr(0, star);
        const int v = std::stoi(s.substr(star + 4));
        if (!unit.empty() && unit.front() == '(') unit = unit.substr(1, unit.size() - 2);
        // unit as polynomial in t: split on '+', terms "c", "c*t", "c*t^k"
        std::vector<mpz_class> coeffs(static_cast<size_t>(ctx->degree()), mpz_class(0));
        size_t pos = 0;
        while (pos < unit.size()) {
            size_t next = unit.find('+', pos + 1);
            if (next == std::string::npos) next = unit.size();
            std::string term = unit.substr(pos, next - pos);
            size_t deg = 0;
            if (auto tp = term.find("*t"); tp != std::string::npos) {
                deg = 1;
                if (auto cp = term.find("*t^"); cp != std::string::npos)
                    deg = std::stoul(term.substr(cp + 3));
                term = term.substr(0, tp);
            }
            if (deg >= coeffs.size()) throw Usage("cli", "unit degree exceeds the context");
            coeffs[deg] = mpz_class(term);
            pos = next + (next < unit.size() ? 1 : 0);
        }
        return PadicNum::from_poly(ctx, coeffs) * PadicNum::uniformizer(ctx).pow_i(v);
    }
    if (s.find('/') != std::string::npos) {
        mpq_class q(s);
        q.canonicalize();
        return PadicNum::from_rational(ctx, q);
    }
    return PadicNum::from_int(ctx, mpz_class(s));
}

/// Parse the canonical series JSON (list of monomial/coeff records).
inline JetSeries series_from_json(const CtxPtr& ctx, const ojson& arr, int q_prec, int delta_deg) {
    int order = 0;
    for (const auto& e : arr) {
        const auto& dq = e.at("monomial").at("dq");
        order = std::max(order, static_cast<int>(dq.size()));
    }
    JetSeries s = JetSeries::zero(ctx, q_prec, delta_deg, order);
    for (const auto& e : arr) {
        const auto& mono = e.at("monomial");
        JetMonomial m;
        m.q_exp = mono.at("q").get<int>();
        for (const auto& b : mono.at("dq")) m.d_exps.push_back(b.get<int>());
        m.trim();
        const auto& cv = e.at("coeff");
        s.set_coeff(m, padic_from_string(ctx, cv.get<std::string>()));
    }
    return s;
}

} // namespace deltapi
