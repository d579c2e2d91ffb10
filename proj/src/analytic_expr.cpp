#include "tb/analytic_expr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tb/errors.hpp"

namespace tb {

struct HoloExpr::Node {
    Kind kind = Kind::Const;
    cplx c{0.0, 0.0};
    std::vector<cplx> coeffs;
    std::vector<HoloExpr> children;
    int power = 0;
    double rho = 1.0;
    std::optional<double> bound;
};

namespace {

cplx sinc_value(cplx z) {
    if (std::abs(z) < 1e-4) {
        const cplx z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

}  // namespace

HoloExpr HoloExpr::constant(cplx c) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Const;
    n->c = c;
    return HoloExpr(std::move(n));
}

HoloExpr HoloExpr::identity() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Identity;
    return HoloExpr(std::move(n));
}

HoloExpr HoloExpr::sum(std::vector<HoloExpr> terms) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sum;
    n->children = std::move(terms);
    return HoloExpr(std::move(n));
}

HoloExpr HoloExpr::product(std::vector<HoloExpr> factors) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Prod;
    n->children = std::move(factors);
    return HoloExpr(std::move(n));
}

HoloExpr HoloExpr::scale(cplx c, HoloExpr inner) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Scale;
    n->c = c;
    n->children = {std::move(inner)};
    return HoloExpr(std::move(n));
}

HoloExpr HoloExpr::poly(std::vector<cplx> coeffs) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Poly;
    n->coeffs = std::move(coeffs);
    return HoloExpr(std::move(n));
}

HoloExpr HoloExpr::mobius(cplx a) {
    if (!(std::abs(a) < 1.0))
        throw DomainError("mobius: parameter must satisfy |a| < 1");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Mobius;
    n->c = a;
    return HoloExpr(std::move(n));
}

HoloExpr HoloExpr::sinc() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sinc;
    return HoloExpr(std::move(n));
}

HoloExpr HoloExpr::sinc2() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sinc2;
    return HoloExpr(std::move(n));
}

HoloExpr HoloExpr::pow(HoloExpr base, int power) {
    if (power < 0) throw DomainError("pow: exponent must be non-negative");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Pow;
    n->power = power;
    n->children = {std::move(base)};
    return HoloExpr(std::move(n));
}

HoloExpr HoloExpr::dilate(HoloExpr inner, double rho) {
    if (!(rho > 0.0 && rho <= 1.0)) throw DomainError("dilate: rho must lie in (0, 1]");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Dilate;
    n->rho = rho;
    n->children = {std::move(inner)};
    return HoloExpr(std::move(n));
}

HoloExpr HoloExpr::with_bound(double bound) const {
    if (!(bound >= 0.0)) throw DomainError("declared bound must be non-negative");
    auto n = std::make_shared<Node>(*node_);
    n->bound = bound;
    return HoloExpr(std::move(n));
}

std::optional<double> HoloExpr::declared_bound() const { return node_->bound; }

HoloExpr::Kind HoloExpr::kind() const { return node_->kind; }

cplx HoloExpr::operator()(cplx z) const {
    const Node& n = *node_;
    switch (n.kind) {
        case Kind::Const:
            return n.c;
        case Kind::Identity:
            return z;
        case Kind::Sum: {
            cplx acc{0.0, 0.0};
            for (const auto& ch : n.children) acc += ch(z);
            return acc;
        }
        case Kind::Prod: {
            cplx acc{1.0, 0.0};
            for (const auto& ch : n.children) acc *= ch(z);
            return acc;
        }
        case Kind::Scale:
            return n.c * n.children.front()(z);
        case Kind::Poly: {
            cplx acc{0.0, 0.0};
            for (auto it = n.coeffs.rbegin(); it != n.coeffs.rend(); ++it) acc = acc * z + *it;
            return acc;
        }
        case Kind::Mobius: {
            const cplx den = 1.0 - std::conj(n.c) * z;
            if (std::abs(den) < 1e-300) throw InvariantViolation("mobius: vanishing denominator");
            return (z - n.c) / den;
        }
        case Kind::Sinc:
            return sinc_value(z);
        case Kind::Sinc2: {
            const cplx s = sinc_value(z);
            return s * s;
        }
        case Kind::Pow: {
            const cplx b = n.children.front()(z);
            cplx acc{1.0, 0.0};
            cplx base = b;
            for (int e = n.power; e > 0; e >>= 1) {
                if (e & 1) acc *= base;
                base *= base;
            }
            return acc;
        }
        case Kind::Dilate:
            return n.children.front()(n.rho * z);
    }
    throw InvariantViolation("unknown expression node");
}

cplx eval_holo(const HoloExpr& expr, cplx z) {
    if (std::abs(z) > 1.0 + kDiskSlack)
        throw DomainError("eval_holo: |z| exceeds the closed unit disk");
    return expr(z);
}

NormEstimate sup_norm_circle(const HoloExpr& expr, double radius, std::size_t samples) {
    if (!(radius > 0.0 && radius <= 1.0)) throw DomainError("sup_norm_circle: radius must lie in (0, 1]");
    if (samples < 1024) throw DomainError("sup_norm_circle: at least 1024 samples required");
    NormEstimate out;
    out.declared = expr.declared_bound();
    const double step = 2.0 * std::numbers::pi / static_cast<double>(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double th = step * static_cast<double>(i);
        out.estimate = std::max(out.estimate, std::abs(expr(std::polar(radius, th))));
    }
    if (out.declared && out.estimate > *out.declared * (1.0 + 1e-12)) {
        throw BoundViolation("sampled sup " + std::to_string(out.estimate) +
                             " exceeds declared bound " + std::to_string(*out.declared));
    }
    return out;
}

// ---------------------------------------------------------------------------
// TimeForm

TimeForm TimeForm::constant(cplx c) {
    TimeForm f;
    f.kind_ = Kind::Const;
    f.c_ = c;
    return f;
}

TimeForm TimeForm::log_osc(cplx c, double alpha) {
    TimeForm f;
    f.kind_ = Kind::LogOsc;
    f.c_ = c;
    f.alpha_ = alpha;
    return f;
}

TimeForm TimeForm::exponential(cplx c, cplx beta) {
    if (beta.real() > 0.0) throw DomainError("exponential piece requires Re beta <= 0");
    TimeForm f;
    f.kind_ = Kind::Exp;
    f.c_ = c;
    f.beta_ = beta;
    return f;
}

TimeForm TimeForm::sum(std::vector<TimeForm> parts) {
    TimeForm f;
    f.kind_ = Kind::Sum;
    f.parts_ = std::move(parts);
    return f;
}

TimeForm TimeForm::product(std::vector<TimeForm> parts) {
    TimeForm f;
    f.kind_ = Kind::Prod;
    f.parts_ = std::move(parts);
    return f;
}

bool TimeForm::has_log_osc() const {
    if (kind_ == Kind::LogOsc && alpha_ != 0.0) return true;
    return std::any_of(parts_.begin(), parts_.end(), [](const TimeForm& p) { return p.has_log_osc(); });
}

cplx TimeForm::operator()(double t) const {
    switch (kind_) {
        case Kind::Const:
            return c_;
        case Kind::LogOsc:
            if (t <= 0.0) return c_;
            return c_ * std::polar(1.0, alpha_ * std::log(t));
        case Kind::Exp:
            return c_ * std::exp(beta_ * t);
        case Kind::Sum: {
            cplx acc{0.0, 0.0};
            for (const auto& p : parts_) acc += p(t);
            return acc;
        }
        case Kind::Prod: {
            cplx acc{1.0, 0.0};
            for (const auto& p : parts_) acc *= p(t);
            return acc;
        }
    }
    throw InvariantViolation("unknown time form");
}

// ---------------------------------------------------------------------------
// TimeCoefficient

TimeCoefficient::TimeCoefficient(std::vector<TimePiece> pieces, double bound)
    : pieces_(std::move(pieces)), bound_(bound) {
    if (pieces_.empty()) throw DomainError("time coefficient needs at least one piece");
    if (!(bound_ >= 0.0)) throw DomainError("time coefficient bound must be non-negative");
    if (pieces_.front().t_lo != 0.0) throw DomainError("first piece must start at t = 0");
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& p = pieces_[i];
        if (!(p.t_hi > p.t_lo)) throw DomainError("piece interval must be non-empty");
        if (i + 1 < pieces_.size() && pieces_[i + 1].t_lo != p.t_hi)
            throw DomainError("pieces must be contiguous");
    }
    if (pieces_.back().t_hi != kInf) throw DomainError("last piece must extend to infinity");
}

TimeCoefficient TimeCoefficient::constant(cplx c) {
    return TimeCoefficient({TimePiece{0.0, kInf, TimeForm::constant(c)}}, std::abs(c));
}

cplx TimeCoefficient::operator()(double t) const {
    if (!(t >= 0.0)) throw DomainError("time coefficient evaluated at negative t");
    // Right-limit convention: the piece with t_lo <= t < t_hi.
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                               [](double v, const TimePiece& p) { return v < p.t_lo; });
    return std::prev(it)->form(t);
}

std::vector<Breakpoint> TimeCoefficient::breakpoints() const {
    std::vector<Breakpoint> out;
    if (pieces_.front().form.has_log_osc()) out.push_back({0.0, true});
    for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) out.push_back({pieces_[i].t_hi, false});
    return out;
}

double TimeCoefficient::sampled_sup(std::size_t n) const {
    double best = 0.0;
    for (const auto& p : pieces_) {
        const bool from_zero = p.t_lo == 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
            double t;
            if (p.t_hi == kInf) {
                t = p.t_lo + u / (1.0 - u) * std::max(1.0, p.t_lo);
            } else {
                t = p.t_lo + u * (p.t_hi - p.t_lo);
            }
            best = std::max(best, std::abs(p.form(t)));
            if (from_zero) {
                // log-spaced samples resolve oscillation accumulating at 0
                const double tl = std::min(p.t_hi, 1.0) * std::pow(10.0, -12.0 * u);
                best = std::max(best, std::abs(p.form(tl)));
            }
        }
    }
    if (best > bound_ * (1.0 + 1e-12)) {
        throw BoundViolation("time coefficient sample max " + std::to_string(best) +
                             " exceeds declared bound " + std::to_string(bound_));
    }
    return best;
}

cplx eval_coeff(const TimeCoefficient& a, double t) { return a(t); }

std::vector<Breakpoint> breakpoints(const TimeCoefficient& a) { return a.breakpoints(); }

std::vector<Breakpoint> merge_breakpoints(const std::vector<std::vector<Breakpoint>>& lists) {
    std::vector<Breakpoint> all;
    for (const auto& l : lists) all.insert(all.end(), l.begin(), l.end());
    std::sort(all.begin(), all.end(), [](const Breakpoint& a, const Breakpoint& b) { return a.t < b.t; });
    std::vector<Breakpoint> out;
    for (const auto& b : all) {
        if (!out.empty() && out.back().t == b.t) {
            out.back().oscillatory = out.back().oscillatory || b.oscillatory;
        } else {
            out.push_back(b);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON

json complex_to_json(cplx c) { return json::array({c.real(), c.imag()}); }

cplx complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) throw ParseError("complex number must be [re, im]");
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

namespace {

double time_from_json(const json& j) {
    if (j.is_null()) return kInf;
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "infinity") return kInf;
        throw ParseError("unrecognised time literal: " + s);
    }
    return j.get<double>();
}

json time_to_json(double t) { return t == kInf ? json("inf") : json(t); }

}  // namespace

json HoloExpr::to_json() const {
    const Node& n = *node_;
    json j;
    auto children = [&] {
        json arr = json::array();
        for (const auto& ch : n.children) arr.push_back(ch.to_json());
        return arr;
    };
    switch (n.kind) {
        case Kind::Const: j = {{"kind", "const"}, {"c", complex_to_json(n.c)}}; break;
        case Kind::Identity: j = {{"kind", "z"}}; break;
        case Kind::Sum: j = {{"kind", "sum"}, {"terms", children()}}; break;
        case Kind::Prod: j = {{"kind", "prod"}, {"factors", children()}}; break;
        case Kind::Scale:
            j = {{"kind", "scale"}, {"c", complex_to_json(n.c)}, {"expr", n.children.front().to_json()}};
            break;
        case Kind::Poly: {
            json arr = json::array();
            for (const auto& c : n.coeffs) arr.push_back(complex_to_json(c));
            j = {{"kind", "poly"}, {"coeffs", arr}};
            break;
        }
        case Kind::Mobius: j = {{"kind", "mobius"}, {"a", complex_to_json(n.c)}}; break;
        case Kind::Sinc: j = {{"kind", "sinc"}}; break;
        case Kind::Sinc2: j = {{"kind", "sinc2"}}; break;
        case Kind::Pow: j = {{"kind", "pow"}, {"n", n.power}, {"base", n.children.front().to_json()}}; break;
        case Kind::Dilate:
            j = {{"kind", "dilate"}, {"rho", n.rho}, {"expr", n.children.front().to_json()}};
            break;
    }
    if (n.bound) j["bound"] = *n.bound;
    return j;
}

HoloExpr HoloExpr::from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) throw ParseError("expression must be an object with \"kind\"");
    const auto kind = j.at("kind").get<std::string>();
    auto list = [&](const char* key) {
        std::vector<HoloExpr> out;
        for (const auto& e : j.at(key)) out.push_back(from_json(e));
        return out;
    };
    HoloExpr e = [&]() -> HoloExpr {
        if (kind == "const") return constant(complex_from_json(j.at("c")));
        if (kind == "z" || kind == "identity") return identity();
        if (kind == "sum") return sum(list("terms"));
        if (kind == "prod") return product(list("factors"));
        if (kind == "scale") return scale(complex_from_json(j.at("c")), from_json(j.at("expr")));
        if (kind == "poly") {
            std::vector<cplx> cs;
            for (const auto& c : j.at("coeffs")) cs.push_back(complex_from_json(c));
            return poly(std::move(cs));
        }
        if (kind == "mobius") return mobius(complex_from_json(j.at("a")));
        if (kind == "sinc") return sinc();
        if (kind == "sinc2") return sinc2();
        if (kind == "pow") return pow(from_json(j.at("base")), j.at("n").get<int>());
        if (kind == "dilate") return dilate(from_json(j.at("expr")), j.at("rho").get<double>());
        throw ParseError("unknown expression kind: " + kind);
    }();
    if (j.contains("bound")) e = e.with_bound(j.at("bound").get<double>());
    return e;
}

json TimeForm::to_json() const {
    auto parts = [&] {
        json arr = json::array();
        for (const auto& p : parts_) arr.push_back(p.to_json());
        return arr;
    };
    switch (kind_) {
        case Kind::Const: return {{"kind", "const"}, {"c", complex_to_json(c_)}};
        case Kind::LogOsc: return {{"kind", "logosc"}, {"c", complex_to_json(c_)}, {"alpha", alpha_}};
        case Kind::Exp: return {{"kind", "exp"}, {"c", complex_to_json(c_)}, {"beta", complex_to_json(beta_)}};
        case Kind::Sum: return {{"kind", "sum"}, {"terms", parts()}};
        case Kind::Prod: return {{"kind", "prod"}, {"factors", parts()}};
    }
    throw InvariantViolation("unknown time form");
}

TimeForm TimeForm::from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) throw ParseError("time form must be an object with \"kind\"");
    const auto kind = j.at("kind").get<std::string>();
    auto list = [&](const char* key) {
        std::vector<TimeForm> out;
        for (const auto& e : j.at(key)) out.push_back(from_json(e));
        return out;
    };
    if (kind == "const") return constant(complex_from_json(j.at("c")));
    if (kind == "logosc") return log_osc(complex_from_json(j.at("c")), j.at("alpha").get<double>());
    if (kind == "exp") return exponential(complex_from_json(j.at("c")), complex_from_json(j.at("beta")));
    if (kind == "sum") return sum(list("terms"));
    if (kind == "prod") return product(list("factors"));
    throw ParseError("unknown time form kind: " + kind);
}

json TimeCoefficient::to_json() const {
    json arr = json::array();
    for (const auto& p : pieces_)
        arr.push_back({{"t_lo", time_to_json(p.t_lo)}, {"t_hi", time_to_json(p.t_hi)}, {"form", p.form.to_json()}});
    return {{"pieces", arr}, {"bound", bound_}};
}

TimeCoefficient TimeCoefficient::from_json(const json& j) {
    // Shorthand: a bare complex number is a constant coefficient.
    if (j.is_number() || j.is_array()) return constant(complex_from_json(j));
    std::vector<TimePiece> pieces;
    for (const auto& p : j.at("pieces")) {
        pieces.push_back({time_from_json(p.value("t_lo", json(0.0))), time_from_json(p.value("t_hi", json(nullptr))),
                          TimeForm::from_json(p.at("form"))});
    }
    return TimeCoefficient(std::move(pieces), j.at("bound").get<double>());
}

}  // namespace tb
