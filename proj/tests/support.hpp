#pragma once

#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>

#include "tb/beltrami.hpp"
#include "tb/loewner.hpp"

namespace support {

using tb::cplx;

inline std::filesystem::path spec_dir() { return TB_SPEC_DIR; }

inline tb::BeltramiSpec constant_spec(cplx c) {
    tb::SumForm f;
    f.terms.push_back({tb::TimeCoefficient::constant(c), tb::HoloExpr::constant(1.0).with_bound(1.0)});
    return tb::BeltramiSpec(tb::PsiFamily(std::move(f)), "constant");
}

inline tb::BeltramiSpec zero_spec() { return tb::BeltramiSpec(tb::PsiFamily(tb::SumForm{}), "zero"); }

inline tb::BeltramiSpec dilation_spec(tb::HoloExpr phi) {
    return tb::BeltramiSpec(tb::PsiFamily(tb::DilationForm{std::move(phi)}), "dilation");
}

// built by hand, not from specs/two_term.json
inline tb::BeltramiSpec two_term_spec() {
    const double ln2 = std::numbers::ln2;
    tb::TimeCoefficient a1({{0.0, ln2, tb::TimeForm::constant({-0.2, 0.1})},
                            {ln2, tb::kInf, tb::TimeForm::constant({0.1, 0.1})}},
                           0.2237);
    tb::TimeCoefficient a2({{0.0, tb::kInf, tb::TimeForm::log_osc(0.2, -1.0)}}, 0.2);
    tb::SumForm f;
    f.terms.push_back({a1, tb::HoloExpr::sinc2().with_bound(1.3812)});
    f.terms.push_back({a2, tb::HoloExpr::mobius(2.0 / 3.0).with_bound(1.0)});
    return tb::BeltramiSpec(tb::PsiFamily(std::move(f)), "two-term");
}

// psi_t(z) of the two-term spec written out directly
inline cplx two_term_psi(cplx z, double t) {
    const cplx a1 = t < std::numbers::ln2 ? cplx{-0.2, 0.1} : cplx{0.1, 0.1};
    const cplx a2 = t > 0.0 ? 0.2 * std::exp(cplx{0.0, -std::log(t)}) : cplx{0.2, 0.0};
    const cplx s = std::abs(z) < 1e-8 ? cplx{1.0, 0.0} : std::sin(z) / z;
    const cplx m = (z - 2.0 / 3.0) / (1.0 - 2.0 / 3.0 * z);
    return a1 * s * s + a2 * m;
}

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace support
