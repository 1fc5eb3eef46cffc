#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace nlbif {

enum class Sign { plus = 1, minus = -1 };

inline double sign_value(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }
inline const char* to_string(Sign s) { return s == Sign::plus ? "plus" : "minus"; }
inline const char* to_symbol(Sign s) { return s == Sign::plus ? "+" : "-"; }

using RealFn = std::function<double(double)>;

/// Callables describing a reaction term before validation.
struct NonlinearityFunctions {
    RealFn f;
    RealFn df;
    RealFn ddf;
    RealFn primitive;  ///< F with F(0) = 0; built by quadrature when empty.
    RealFn curvature;  ///< g(u) = f(u) - u f'(u); built from f'' when empty.
};

/// Sampling horizon for the validator.
struct SampleSpec {
    int points = 10000;
    double margin = 1.0;        ///< horizon is [z_minus - margin, z_plus + margin]
    double search_limit = 1e3;  ///< outward scan limit when locating the zeros of f
    double tol = 1e-10;
};

struct ConditionCheck {
    std::string name;
    bool passed = false;
    double worst = 0.0;  ///< worst violation (0 when passed with margin)
    double where = 0.0;  ///< location of the worst sample
    std::string note;
};

struct ValidationReport {
    std::vector<ConditionCheck> checks;
    std::optional<double> z_plus;
    std::optional<double> z_minus;
    double horizon_lo = 0.0;
    double horizon_hi = 0.0;
    bool passed() const;
    const ConditionCheck* find(const std::string& name) const;
};

/// Checks f(0)=0, f'(0)=1, f''(u)u<0, the horizon-limited dissipativity test and
/// primitive consistency; locates z_plus and z_minus by bracketed root finding.
/// Throws ValidationError when f is not evaluable (non-finite values).
ValidationReport validate_nonlinearity(const NonlinearityFunctions& fns, const SampleSpec& grid = {});

/// F(u) = int_0^u f, closed form when supplied, adaptive quadrature otherwise.
RealFn build_primitive(const NonlinearityFunctions& fns);

/// Reaction term f with f(0)=0, f'(0)=1, f''(u)u<0 and zeros z_minus < 0 < z_plus.
/// Immutable once constructed.
class Nonlinearity {
public:
    static Nonlinearity odd_cubic(double beta = 1.0);
    /// u - beta_plus u^3 for u >= 0, u - beta_minus u^3 for u < 0.
    static Nonlinearity split_cubic(double beta_plus = 1.0, double beta_minus = 0.25);
    /// Validates the callables and throws ValidationError if any condition fails.
    static Nonlinearity from_functions(NonlinearityFunctions fns, std::string name, bool is_odd,
                                       const SampleSpec& grid = {});

    double f(double u) const { return fns_.f(u); }
    double df(double u) const { return fns_.df(u); }
    double ddf(double u) const { return fns_.ddf(u); }
    double F(double u) const { return fns_.primitive(u); }
    /// f(u) - u f'(u), evaluated without cancellation near u = 0.
    double curvature(double u) const { return fns_.curvature(u); }

    double z_plus() const { return z_plus_; }
    double z_minus() const { return z_minus_; }
    double zero(Sign s) const { return s == Sign::plus ? z_plus_ : z_minus_; }
    /// F(z_sign): the energy at which a one-signed arch becomes heteroclinic.
    double heteroclinic_level(Sign s) const { return F(zero(s)); }
    bool is_odd() const { return is_odd_; }
    const std::string& name() const { return name_; }
    const std::vector<std::pair<std::string, double>>& parameters() const { return params_; }
    const NonlinearityFunctions& functions() const { return fns_; }

private:
    Nonlinearity() = default;
    NonlinearityFunctions fns_;
    double z_plus_ = 0.0;
    double z_minus_ = 0.0;
    bool is_odd_ = false;
    std::string name_;
    std::vector<std::pair<std::string, double>> params_;
};

struct DiffusionKnot {
    double r;
    double a;
    double da;
};

/// Nonlocal diffusion coefficient a(r) with bounds m <= a <= M on [0, r_max].
class Diffusion {
public:
    static Diffusion constant(double value, double r_max = 50.0);
    /// alpha + beta exp(-gamma (r - r0)^2)
    static Diffusion bump(double alpha, double beta, double gamma, double r0, double r_max = 50.0);
    /// C^1 piecewise-cubic Hermite interpolant, constant beyond the knot range.
    static Diffusion from_knots(std::vector<DiffusionKnot> knots, double r_max = 50.0);
    /// Arbitrary callables; the primitive is built by adaptive quadrature.
    static Diffusion custom(RealFn a, RealFn da, double r_max, std::string name = "custom");

    double a(double r) const;
    double da(double r) const;
    /// A(s) = int_0^s a.
    double A(double s) const;

    double m() const { return m_; }
    double M() const { return M_; }
    double r_max() const { return r_max_; }
    const std::string& family() const { return family_; }
    const std::vector<DiffusionKnot>& knots() const;
    const std::vector<std::pair<std::string, double>>& parameters() const { return params_; }
    bool is_nondecreasing() const;

private:
    struct Constant {
        double value;
    };
    struct Bump {
        double alpha, beta, gamma, r0;
    };
    struct Hermite {
        std::vector<DiffusionKnot> knots;
        std::vector<double> cumulative;  // A at each knot
    };
    struct Custom {
        RealFn a, da;
    };

    Diffusion() = default;
    void compute_bounds();

    std::variant<Constant, Bump, Hermite, Custom> impl_;
    double m_ = 0.0;
    double M_ = 0.0;
    double r_max_ = 0.0;
    std::string family_;
    std::vector<std::pair<std::string, double>> params_;
};

/// diffusion_from_knots: validates ordering and positivity, see Diffusion::from_knots.
Diffusion diffusion_from_knots(std::vector<DiffusionKnot> knots, double r_max = 50.0);

/// A(s) accessor for a diffusion function.
class PrimitiveA {
public:
    explicit PrimitiveA(Diffusion a) : a_(std::move(a)) {}
    double operator()(double s) const { return a_.A(s); }

private:
    Diffusion a_;
};

PrimitiveA build_primitive_a(const Diffusion& a);

} // namespace nlbif
