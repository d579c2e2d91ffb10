#include "tb/beltrami.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tb/errors.hpp"
#include "tb/fft.hpp"

namespace tb {

cplx PsiFamily::operator()(cplx z, double t) const {
    if (const auto* d = std::get_if<DilationForm>(&form_)) {
        const double s = std::exp(-t);
        return s * s * d->phi(s * z);
    }
    const auto& sf = std::get<SumForm>(form_);
    cplx acc{0.0, 0.0};
    for (const auto& term : sf.terms) acc += term.a(t) * term.phi(z);
    return acc;
}

std::vector<Breakpoint> PsiFamily::breakpoints() const {
    if (is_dilation()) return {};
    std::vector<std::vector<Breakpoint>> lists;
    for (const auto& term : std::get<SumForm>(form_).terms) lists.push_back(term.a.breakpoints());
    return merge_breakpoints(lists);
}

json BudgetReport::to_json() const {
    json arr = json::array();
    for (const auto& t : terms)
        arr.push_back({{"coeff_sup", t.coeff_sup}, {"phi_sup", t.phi_sup}, {"product", t.product()}});
    return {{"k", k}, {"form", dilation ? "dilation" : "sum"}, {"terms", arr}, {"accepted", accepted()}};
}

BudgetReport compute_budget(const PsiFamily& family, std::size_t samples) {
    BudgetReport r;
    r.dilation = family.is_dilation();
    if (const auto* d = std::get_if<DilationForm>(&family.form())) {
        TermNorm n;
        n.phi_sup = sup_norm_circle(d->phi, 1.0, samples).estimate;
        r.terms.push_back(n);
        r.k = n.phi_sup;
        return r;
    }
    for (const auto& term : std::get<SumForm>(family.form()).terms) {
        TermNorm n;
        n.coeff_sup = term.a.sampled_sup();
        n.phi_sup = sup_norm_circle(term.phi, 1.0, samples).estimate;
        r.k += n.product();
        r.terms.push_back(n);
    }
    return r;
}

BeltramiSpec::BeltramiSpec(PsiFamily family, std::string name, std::string description)
    : family_(std::move(family)),
      name_(std::move(name)),
      description_(std::move(description)),
      budget_(compute_budget(family_)),
      breakpoints_(family_.breakpoints()) {
    if (!budget_.accepted()) {
        throw BudgetExceeded("norm budget K = " + std::to_string(budget_.k) + " is not below 1");
    }
}

BudgetReport validate_spec(const BeltramiSpec& spec) { return spec.budget(); }

json BeltramiSpec::to_json() const {
    json j;
    j["name"] = name_;
    if (!description_.empty()) j["description"] = description_;
    if (const auto* d = std::get_if<DilationForm>(&family_.form())) {
        j["form"] = "dilation";
        j["phi"] = d->phi.to_json();
    } else {
        j["form"] = "sum";
        json terms = json::array();
        for (const auto& t : std::get<SumForm>(family_.form()).terms)
            terms.push_back({{"a", t.a.to_json()}, {"phi", t.phi.to_json()}});
        j["terms"] = terms;
    }
    return j;
}

BeltramiSpec BeltramiSpec::from_json(const json& j) {
    if (!j.is_object()) throw ParseError("spec must be a JSON object");
    const auto form = j.value("form", std::string("sum"));
    const auto name = j.value("name", std::string{});
    const auto desc = j.value("description", std::string{});
    if (form == "dilation" && !j.contains("phi")) throw ParseError("dilation-form spec needs \"phi\"");
    if (form == "dilation") return BeltramiSpec(PsiFamily(DilationForm{HoloExpr::from_json(j.at("phi"))}), name, desc);
    if (form != "sum") throw ParseError("unknown spec form: " + form);
    if (!j.contains("terms") || !j.at("terms").is_array()) throw ParseError("sum-form spec needs a \"terms\" array");
    SumForm sf;
    for (const auto& t : j.at("terms")) {
        if (!t.is_object() || !t.contains("a") || !t.contains("phi")) throw ParseError("each term needs \"a\" and \"phi\"");
        sf.terms.push_back({TimeCoefficient::from_json(t.at("a")), HoloExpr::from_json(t.at("phi"))});
    }
    return BeltramiSpec(PsiFamily(std::move(sf)), name, desc);
}

cplx psi_at(const BeltramiSpec& spec, cplx z, double t) {
    if (std::abs(z) > 1.0 + kDiskSlack) throw DomainError("psi_at: |z| exceeds the closed unit disk");
    if (!(t >= 0.0)) throw DomainError("psi_at: t must be non-negative");
    return spec.family()(z, t);
}

cplx mu_at(const BeltramiSpec& spec, cplx z) {
    const double r = std::abs(z);
    if (r == 0.0) throw DomainError("mu_at: the point value at z = 0 is not defined");
    if (r > 1.0 + kDiskSlack) throw DomainError("mu_at: |z| exceeds the closed unit disk");
    const cplx zeta = z / r;
    const double t = r >= 1.0 ? 0.0 : -std::log(r);
    return zeta * zeta * spec.family()(zeta, t);
}

// ---------------------------------------------------------------------------

double BoundarySlice::parseval_mass() const {
    double s = 0.0;
    for (const auto& c : coeffs) s += std::norm(c);
    return s;
}

BoundarySlice slice_fourier(const MuSampler& mu, double t, int modes) {
    if (modes < 1) throw DomainError("slice_fourier: at least one mode required");
    if (!(t >= 0.0)) throw DomainError("slice_fourier: t must be non-negative");
    const std::size_t n = fft::next_pow2(std::max<std::size_t>(4 * static_cast<std::size_t>(modes), 4));
    const double r = std::exp(-t);
    std::vector<cplx> samples(n);
    for (std::size_t j = 0; j < n; ++j) {
        const cplx zeta = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
        samples[j] = mu(r * zeta) / (zeta * zeta);
    }
    fft::Plan1d plan(n, fft::Direction::Forward);
    plan.execute(samples);

    BoundarySlice s;
    s.t = t;
    s.modes = modes;
    s.coeffs.resize(2 * static_cast<std::size_t>(modes) + 1);
    const double inv = 1.0 / static_cast<double>(n);
    for (int k = -modes; k <= modes; ++k) {
        const auto idx = static_cast<std::size_t>((k % static_cast<long>(n) + static_cast<long>(n)) % static_cast<long>(n));
        s.coeffs[static_cast<std::size_t>(k + modes)] = samples[idx] * inv;
    }
    return s;
}

double analyticity_defect(const BoundarySlice& slice) {
    double d = 0.0;
    for (int n = -slice.modes; n < 0; ++n) d = std::max(d, std::abs(slice.c(n)));
    return d;
}

SliceExtension extend_from_slice(const BoundarySlice& slice, cplx z) {
    const double r = std::abs(z);
    if (!(r < 1.0)) throw DomainError("extend_from_slice: requires |z| < 1");
    SliceExtension e{};
    // Horner over non-negative and negative modes separately.
    cplx pos{0.0, 0.0};
    for (int n = slice.modes; n >= 0; --n) pos = pos * z + slice.c(n);
    cplx neg{0.0, 0.0};
    const cplx zb = std::conj(z);
    for (int n = slice.modes; n >= 1; --n) neg = (neg + slice.c(-n)) * zb;
    e.analytic = pos;
    e.harmonic = pos + neg;

    double edge = 0.0;
    const int tail = std::min(slice.modes, 4);
    for (int i = 0; i < tail; ++i) {
        edge = std::max({edge, std::abs(slice.c(slice.modes - i)), std::abs(slice.c(-slice.modes + i))});
    }
    e.tail_bound = edge * std::pow(r, slice.modes + 1) / (1.0 - r);
    return e;
}

std::string slice_csv(const BoundarySlice& slice) {
    std::ostringstream os;
    os.precision(17);
    os << "n,re_c,im_c\n";
    for (int n = -slice.modes; n <= slice.modes; ++n) {
        const cplx c = slice.c(n);
        os << n << ',' << c.real() << ',' << c.imag() << '\n';
    }
    return os.str();
}

}  // namespace tb
