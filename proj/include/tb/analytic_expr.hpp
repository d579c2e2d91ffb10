#pragma once

// Closed-form holomorphic functions on the closed unit disk and piecewise
// closed-form driving coefficients in t.

#include <complex>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

namespace tb {

using cplx = std::complex<double>;
using nlohmann::json;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr std::size_t kDefaultNormSamples = std::size_t{1} << 14;
inline constexpr double kDiskSlack = 1e-12;

/// Expression tree for a function holomorphic on a neighbourhood of the
/// closed unit disk. Immutable; copies share the tree.
class HoloExpr {
public:
    enum class Kind { Const, Identity, Sum, Prod, Scale, Poly, Mobius, Sinc, Sinc2, Pow, Dilate };

    static HoloExpr constant(cplx c);
    static HoloExpr identity();
    static HoloExpr sum(std::vector<HoloExpr> terms);
    static HoloExpr product(std::vector<HoloExpr> factors);
    static HoloExpr scale(cplx c, HoloExpr inner);
    /// Coefficients in ascending order: c0 + c1 z + ...
    static HoloExpr poly(std::vector<cplx> coeffs);
    /// (z - a) / (1 - conj(a) z), |a| < 1.
    static HoloExpr mobius(cplx a);
    /// sin(z)/z with value 1 at the origin.
    static HoloExpr sinc();
    static HoloExpr sinc2();
    static HoloExpr pow(HoloExpr base, int n);
    /// z -> inner(rho z), 0 < rho <= 1.
    static HoloExpr dilate(HoloExpr inner, double rho);

    /// Copy carrying a declared sup bound B >= sup_{|z|<=1} |expr|.
    HoloExpr with_bound(double bound) const;
    std::optional<double> declared_bound() const;

    Kind kind() const;

    /// Evaluation without the disk-domain check. Used inside integrators
    /// whose stage points may sit a rounding error outside the disk.
    cplx operator()(cplx z) const;

    json to_json() const;
    static HoloExpr from_json(const json& j);

private:
    struct Node;
    explicit HoloExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

/// Checked evaluation; throws DomainError for |z| > 1 + 1e-12.
cplx eval_holo(const HoloExpr& expr, cplx z);

struct NormEstimate {
    double estimate = 0.0;
    std::optional<double> declared;
};

/// max |expr| over equispaced samples of the circle |z| = radius.
/// Throws BoundViolation when a sample exceeds the declared bound.
NormEstimate sup_norm_circle(const HoloExpr& expr, double radius,
                             std::size_t samples = kDefaultNormSamples);

/// Closed-form piece of a driving coefficient a(t).
class TimeForm {
public:
    enum class Kind { Const, LogOsc, Exp, Sum, Prod };

    static TimeForm constant(cplx c);
    /// c * exp(i alpha log t)
    static TimeForm log_osc(cplx c, double alpha);
    /// c * exp(beta t), Re beta <= 0
    static TimeForm exponential(cplx c, cplx beta);
    static TimeForm sum(std::vector<TimeForm> parts);
    static TimeForm product(std::vector<TimeForm> parts);

    Kind kind() const { return kind_; }
    bool has_log_osc() const;

    /// At t = 0 a log-oscillating factor takes the value of its amplitude.
    cplx operator()(double t) const;

    json to_json() const;
    static TimeForm from_json(const json& j);

private:
    Kind kind_ = Kind::Const;
    cplx c_{0.0, 0.0};
    double alpha_ = 0.0;
    cplx beta_{0.0, 0.0};
    std::vector<TimeForm> parts_;
};

struct TimePiece {
    double t_lo = 0.0;
    double t_hi = kInf;
    TimeForm form;
};

struct Breakpoint {
    double t = 0.0;
    bool oscillatory = false;
    friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/// Piecewise closed-form bounded function on [0, inf). Pieces are half-open
/// [t_lo, t_hi): a breakpoint evaluates to the right-limit piece.
class TimeCoefficient {
public:
    TimeCoefficient(std::vector<TimePiece> pieces, double bound);

    static TimeCoefficient constant(cplx c);

    cplx operator()(double t) const;
    const std::vector<TimePiece>& pieces() const { return pieces_; }
    double declared_bound() const { return bound_; }

    /// Interior breakpoints in increasing order; t = 0 appears, flagged,
    /// when a log-oscillating piece starts there.
    std::vector<Breakpoint> breakpoints() const;

    /// Dense-sample maximum of |a(t)| over all pieces; throws
    /// BoundViolation if it exceeds the declared bound.
    double sampled_sup(std::size_t samples_per_piece = 4096) const;

    json to_json() const;
    static TimeCoefficient from_json(const json& j);

private:
    std::vector<TimePiece> pieces_;
    double bound_;
};

cplx eval_coeff(const TimeCoefficient& a, double t);
std::vector<Breakpoint> breakpoints(const TimeCoefficient& a);

/// Merge breakpoint lists; equal times are combined and keep the
/// oscillatory flag if any input carries it.
std::vector<Breakpoint> merge_breakpoints(const std::vector<std::vector<Breakpoint>>& lists);

// complex <-> [re, im]
json complex_to_json(cplx c);
cplx complex_from_json(const json& j);

}  // namespace tb
