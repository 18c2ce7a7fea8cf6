#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace xxz {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

struct Quadrature {
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
    double a = 0.0;
    double b = 0.0;

    template <class F>
    auto integrate(F&& f) const
    {
        decltype(f(nodes[0])) sum{};
        for (int j = 0; j < order; ++j) sum += weights[j] * f(nodes[j]);
        return sum;
    }
};

// Gauss–Legendre rule on [a, b], nodes by Newton iteration on the Legendre
// recurrence.
Quadrature gauss_legendre(int order, double a, double b);

// Golub–Welsch rules for the weights e^{-x^2} on R and e^{-x} on [0, inf).
// The interval field is set to the nominal (-inf, inf) / (0, inf).
Quadrature gauss_hermite(int order);
Quadrature gauss_laguerre(int order);

// K(lambda, mu) and its lambda-derivatives; deriv in {0, 1, 2}.
using KernelFn = std::function<cplx(cplx lambda, double mu, int deriv)>;
// g(lambda) and its derivatives; deriv in {0, 1, 2}.
using DrivingFn = std::function<cplx(cplx lambda, int deriv)>;

// Solution of f + K f = g on a Gauss–Legendre grid. Off-grid values (and
// derivatives) come from the Nyström natural interpolation
//   f(lambda) = g(lambda) - sum_j w_j K(lambda, mu_j) f(mu_j),
// which is also the analytic continuation of f into the complex plane.
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(Quadrature quad, std::vector<cplx> values, KernelFn kernel, DrivingFn driving,
                 std::string kernel_id, std::string driving_id);

    const Quadrature& quad() const { return quad_; }
    const std::vector<cplx>& values() const { return values_; }
    const std::string& kernel_id() const { return kernel_id_; }
    const std::string& driving_id() const { return driving_id_; }

    cplx eval(cplx lambda, int deriv = 0) const;
    cplx operator()(cplx lambda) const { return eval(lambda, 0); }

    // max_j |f_j + sum_k w_k K(mu_j, mu_k) f_k - g(mu_j)|
    double residual() const;

    double condition = 0.0;

private:
    Quadrature quad_;
    std::vector<cplx> values_;
    KernelFn kernel_;
    DrivingFn driving_;
    std::string kernel_id_;
    std::string driving_id_;
};

// Factorised Nyström operator on [-Q, Q]; several driving terms sharing one
// kernel reuse the same LU factorisation.
class NystromSolver {
public:
    NystromSolver(KernelFn kernel, double Q, int order, std::string kernel_id = "kernel");

    GridFunction solve(DrivingFn driving, std::string driving_id = "driving") const;

    // Rebuild a GridFunction from stored nodal values (cache hits).
    GridFunction adopt(std::vector<cplx> values, DrivingFn driving, std::string driving_id) const;

    const Quadrature& quad() const { return quad_; }
    double condition() const { return condition_; }

private:
    struct Factor;
    Quadrature quad_;
    KernelFn kernel_;
    std::string kernel_id_;
    std::shared_ptr<const Factor> factor_;
    double condition_ = 0.0;
};

GridFunction solve_fredholm2(KernelFn kernel, DrivingFn driving, double Q, int order,
                             std::string kernel_id = "kernel", std::string driving_id = "driving");

// Bracketed root (TOMS 748); the returned point lies in a bracket of width <= tol.
double find_root_bracketed(const std::function<double(double)>& f, double a, double b,
                           double tol = 1e-12);

double barnes_g(int n);
double log_barnes_g(int n);

struct Polyline {
    std::vector<cplx> vertices;

    Polyline() = default;
    Polyline(std::initializer_list<cplx> v) : vertices(v) {}
    explicit Polyline(std::vector<cplx> v) : vertices(std::move(v)) {}

    Polyline reversed() const;
    Polyline& append(const Polyline& tail);
};

void validate(const Polyline& path);

using ComplexFn = std::function<cplx(cplx)>;

cplx integrate_polyline(const ComplexFn& f, const Polyline& path, int order_per_segment);

// Complex nodes and weights with sum_k w_k f(z_k) ~ integral of f dz along a
// polyline. Segments are bisected until each piece is shorter than
// `ratio` times its distance to the nearest sensitive point (a nearby pole or
// an endpoint singularity), down to `min_length`.
struct PathRule {
    std::vector<cplx> z;
    std::vector<cplx> w;

    template <class F>
    cplx integrate(F&& f) const
    {
        cplx sum = 0.0;
        for (std::size_t k = 0; k < z.size(); ++k) sum += w[k] * f(z[k]);
        return sum;
    }
};

PathRule path_rule(const Polyline& path, int order_per_segment,
                   std::span<const cplx> sensitive = {}, double ratio = 1.0,
                   double min_length = 1e-13);

cplx integrate_path(const ComplexFn& f, const Polyline& path, int order_per_segment,
                    std::span<const cplx> sensitive = {}, double ratio = 1.0);

} // namespace xxz
