#pragma once

// Beltrami coefficients induced by families psi_t of bounded holomorphic
// functions, their boundary slices U_t and the Fourier-side checks on them.

#include <complex>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "tb/analytic_expr.hpp"

namespace tb {

struct SumTerm {
    TimeCoefficient a;
    HoloExpr phi;
};

/// psi_t(z) = sum_j a_j(t) phi_j(z)
struct SumForm {
    std::vector<SumTerm> terms;
};

/// psi_t(z) = exp(-2t) phi(exp(-t) z); induces mu(z) = z^2 phi(z).
struct DilationForm {
    HoloExpr phi;
};

class PsiFamily {
public:
    explicit PsiFamily(SumForm f) : form_(std::move(f)) {}
    explicit PsiFamily(DilationForm f) : form_(std::move(f)) {}

    bool is_dilation() const { return std::holds_alternative<DilationForm>(form_); }
    const std::variant<SumForm, DilationForm>& form() const { return form_; }

    /// Unchecked psi_t(z).
    cplx operator()(cplx z, double t) const;

    std::vector<Breakpoint> breakpoints() const;

private:
    std::variant<SumForm, DilationForm> form_;
};

struct TermNorm {
    double coeff_sup = 1.0;  // sampled sup |a_j| (1 for the dilation form)
    double phi_sup = 0.0;    // sampled sup |phi_j| on the unit circle
    double product() const { return coeff_sup * phi_sup; }
};

struct BudgetReport {
    double k = 0.0;  // K for the sum form, sup|phi| for the dilation form
    bool dilation = false;
    std::vector<TermNorm> terms;
    bool accepted() const { return k < 1.0; }
    json to_json() const;
};

/// Budget without the K < 1 verdict; throws BoundViolation only.
BudgetReport compute_budget(const PsiFamily& family, std::size_t samples = kDefaultNormSamples);

/// A validated family (k < 1) with metadata.
class BeltramiSpec {
public:
    /// Throws BudgetExceeded if k >= 1 and BoundViolation if a declared
    /// bound is falsified by sampling.
    BeltramiSpec(PsiFamily family, std::string name = {}, std::string description = {});

    const PsiFamily& family() const { return family_; }
    const std::string& name() const { return name_; }
    const std::string& description() const { return description_; }
    double k() const { return budget_.k; }
    const BudgetReport& budget() const { return budget_; }
    const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }

    json to_json() const;
    static BeltramiSpec from_json(const json& j);

private:
    PsiFamily family_;
    std::string name_;
    std::string description_;
    BudgetReport budget_;
    std::vector<Breakpoint> breakpoints_;
};

BudgetReport validate_spec(const BeltramiSpec& spec);

/// mu(z) = (z/|z|)^2 psi_{-log|z|}(z/|z|), 0 < |z| <= 1.
cplx mu_at(const BeltramiSpec& spec, cplx z);
cplx psi_at(const BeltramiSpec& spec, cplx z, double t);

using MuSampler = std::function<cplx(cplx)>;

/// Fourier modes c_n, n = -M..M, of U_t(zeta) = zeta^{-2} mu(e^{-t} zeta).
struct BoundarySlice {
    double t = 0.0;
    int modes = 0;
    std::vector<cplx> coeffs;  // index n + modes

    cplx c(int n) const { return coeffs.at(static_cast<std::size_t>(n + modes)); }
    double parseval_mass() const;
};

BoundarySlice slice_fourier(const MuSampler& mu, double t, int modes);

inline constexpr double kAnalyticityTolerance = 1e-9;

/// max_{n<0} |c_n|
double analyticity_defect(const BoundarySlice& slice);

struct SliceExtension {
    cplx analytic;       // sum_{n>=0} c_n z^n
    cplx harmonic;       // analytic + sum_{n<0} c_n conj(z)^{|n|}
    double tail_bound;   // geometric estimate of the truncated tail
};

SliceExtension extend_from_slice(const BoundarySlice& slice, cplx z);

/// CSV with columns n, re_c, im_c.
std::string slice_csv(const BoundarySlice& slice);

}  // namespace tb
