#include "xxz/quadrature.hpp"

#include "xxz/errors.hpp"

#include <Eigen/Dense>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace xxz {

namespace {

std::string fmt_point(cplx z)
{
    std::ostringstream os;
    os.precision(17);
    os << "(" << z.real() << ", " << z.imag() << ")";
    return os.str();
}

Quadrature golub_welsch(int order, const Eigen::VectorXd& diag, const Eigen::VectorXd& off, double mu0)
{
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(order, order);
    for (int i = 0; i < order; ++i) {
        T(i, i) = diag[i];
        if (i + 1 < order) T(i, i + 1) = T(i + 1, i) = off[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    Quadrature q;
    q.order = order;
    q.nodes.resize(order);
    q.weights.resize(order);
    for (int i = 0; i < order; ++i) {
        q.nodes[i] = es.eigenvalues()[i];
        const double v0 = es.eigenvectors()(0, i);
        q.weights[i] = mu0 * v0 * v0;
    }
    return q;
}

} // namespace

Quadrature gauss_legendre(int order, double a, double b)
{
    if (order < 2) fail(ErrorKind::invalid_argument, "gauss_legendre: order must be >= 2");
    if (!(a < b)) fail(ErrorKind::invalid_argument, "gauss_legendre: need a < b");

    Quadrature q;
    q.order = order;
    q.a = a;
    q.b = b;
    q.nodes.resize(order);
    q.weights.resize(order);

    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                // one more pass for the derivative at the converged node
                p0 = 1.0;
                p1 = x;
                for (int k = 2; k <= order; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = order * (x * p1 - p0) / (x * x - 1.0);
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        q.nodes[i] = mid - half * x;
        q.nodes[order - 1 - i] = mid + half * x;
        q.weights[i] = q.weights[order - 1 - i] = half * w;
    }
    if (order % 2 == 1) q.nodes[order / 2] = mid;
    return q;
}

Quadrature gauss_hermite(int order)
{
    if (order < 2) fail(ErrorKind::invalid_argument, "gauss_hermite: order must be >= 2");
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
    Eigen::VectorXd off(order);
    for (int i = 0; i < order; ++i) off[i] = std::sqrt((i + 1) / 2.0);
    Quadrature q = golub_welsch(order, diag, off, std::sqrt(pi));
    q.a = -std::numeric_limits<double>::infinity();
    q.b = std::numeric_limits<double>::infinity();
    return q;
}

Quadrature gauss_laguerre(int order)
{
    if (order < 2) fail(ErrorKind::invalid_argument, "gauss_laguerre: order must be >= 2");
    Eigen::VectorXd diag(order);
    Eigen::VectorXd off(order);
    for (int i = 0; i < order; ++i) {
        diag[i] = 2.0 * i + 1.0;
        off[i] = i + 1.0;
    }
    Quadrature q = golub_welsch(order, diag, off, 1.0);
    q.a = 0.0;
    q.b = std::numeric_limits<double>::infinity();
    return q;
}

// ---------------------------------------------------------------------------
// Nyström

GridFunction::GridFunction(Quadrature quad, std::vector<cplx> values, KernelFn kernel,
                           DrivingFn driving, std::string kernel_id, std::string driving_id)
    : quad_(std::move(quad)), values_(std::move(values)), kernel_(std::move(kernel)),
      driving_(std::move(driving)), kernel_id_(std::move(kernel_id)),
      driving_id_(std::move(driving_id))
{
}

cplx GridFunction::eval(cplx lambda, int deriv) const
{
    cplx sum = driving_(lambda, deriv);
    for (int j = 0; j < quad_.order; ++j)
        sum -= quad_.weights[j] * kernel_(lambda, quad_.nodes[j], deriv) * values_[j];
    return sum;
}

double GridFunction::residual() const
{
    double worst = 0.0;
    for (int i = 0; i < quad_.order; ++i) {
        cplx r = values_[i] - driving_(quad_.nodes[i], 0);
        for (int j = 0; j < quad_.order; ++j)
            r += quad_.weights[j] * kernel_(quad_.nodes[i], quad_.nodes[j], 0) * values_[j];
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

struct NystromSolver::Factor {
    Eigen::MatrixXd A;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
};

NystromSolver::NystromSolver(KernelFn kernel, double Q, int order, std::string kernel_id)
    : kernel_(std::move(kernel)), kernel_id_(std::move(kernel_id))
{
    if (!(Q > 0.0)) fail(ErrorKind::invalid_argument, "Nystrom: Q must be positive");
    quad_ = gauss_legendre(order, -Q, Q);

    auto f = std::make_shared<Factor>();
    f->A.resize(order, order);
    for (int i = 0; i < order; ++i) {
        for (int j = 0; j < order; ++j) {
            const cplx k = kernel_(quad_.nodes[i], quad_.nodes[j], 0);
            if (!std::isfinite(k.real()))
                fail(ErrorKind::solver_failure, "Nystrom: non-finite kernel value");
            f->A(i, j) = (i == j ? 1.0 : 0.0) + quad_.weights[j] * k.real();
        }
    }
    f->lu.compute(f->A);
    const double rc = f->lu.rcond();
    condition_ = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
    if (!(condition_ <= 1e12)) {
        std::ostringstream os;
        os << "Nystrom matrix near-singular: condition estimate " << condition_;
        fail(ErrorKind::solver_failure, os.str());
    }
    factor_ = std::move(f);
}

GridFunction NystromSolver::solve(DrivingFn driving, std::string driving_id) const
{
    const int n = quad_.order;
    Eigen::MatrixXd rhs(n, 2);
    double gmax = 0.0;
    for (int i = 0; i < n; ++i) {
        const cplx g = driving(quad_.nodes[i], 0);
        if (!std::isfinite(g.real()) || !std::isfinite(g.imag()))
            fail(ErrorKind::solver_failure, "Nystrom: non-finite driving term at node");
        rhs(i, 0) = g.real();
        rhs(i, 1) = g.imag();
        gmax = std::max(gmax, std::abs(g));
    }
    Eigen::MatrixXd x = factor_->lu.solve(rhs);
    const Eigen::MatrixXd r = rhs - factor_->A * x;
    x += factor_->lu.solve(r);
    const double res = (rhs - factor_->A * x).cwiseAbs().maxCoeff();

    if (res > 1e-10 * std::max(gmax, 1e-300) && res > 1e-300) {
        std::ostringstream os;
        os << "Nystrom residual " << res << " exceeds 1e-10 * max|g| = " << 1e-10 * gmax;
        fail(ErrorKind::solver_failure, os.str());
    }

    std::vector<cplx> values(n);
    for (int i = 0; i < n; ++i) values[i] = {x(i, 0), x(i, 1)};
    GridFunction out(quad_, std::move(values), kernel_, std::move(driving), kernel_id_,
                     std::move(driving_id));
    out.condition = condition_;
    return out;
}

GridFunction NystromSolver::adopt(std::vector<cplx> values, DrivingFn driving,
                                  std::string driving_id) const
{
    if (static_cast<int>(values.size()) != quad_.order)
        fail(ErrorKind::invalid_argument, "Nystrom: stored values do not match the grid");
    GridFunction out(quad_, std::move(values), kernel_, std::move(driving), kernel_id_,
                     std::move(driving_id));
    out.condition = condition_;
    return out;
}

GridFunction solve_fredholm2(KernelFn kernel, DrivingFn driving, double Q, int order,
                             std::string kernel_id, std::string driving_id)
{
    NystromSolver solver(std::move(kernel), Q, order, std::move(kernel_id));
    return solver.solve(std::move(driving), std::move(driving_id));
}

// ---------------------------------------------------------------------------
// Roots

double find_root_bracketed(const std::function<double(double)>& f, double a, double b, double tol)
{
    if (!(a < b)) std::swap(a, b);
    if (!(tol > 0.0)) fail(ErrorKind::invalid_argument, "find_root_bracketed: tol must be positive");
    const double fa = f(a);
    const double fb = f(b);
    if (!std::isfinite(fa) || !std::isfinite(fb))
        fail(ErrorKind::bracket_failure, "find_root_bracketed: non-finite function value at bracket end");
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa < 0.0) == (fb < 0.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "no sign change on [" << a << ", " << b << "]: f(a) = " << fa << ", f(b) = " << fb;
        fail(ErrorKind::bracket_failure, os.str());
    }
    auto width = [tol](double lo, double hi) { return std::abs(hi - lo) <= tol; };
    std::uintmax_t iters = 500;
    const auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, fa, fb, width, iters);
    if (std::abs(hi - lo) > tol)
        fail(ErrorKind::bracket_failure, "find_root_bracketed: iteration budget exhausted");
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Barnes G at integers: G(n) = prod_{k=0}^{n-2} k!

double log_barnes_g(int n)
{
    if (n < 1) fail(ErrorKind::invalid_argument, "barnes_g: n must be >= 1");
    double s = 0.0;
    for (int k = 2; k <= n - 2; ++k) s += std::lgamma(k + 1.0);
    return s;
}

double barnes_g(int n)
{
    if (n < 1) fail(ErrorKind::invalid_argument, "barnes_g: n must be >= 1");
    if (n > 12) return std::exp(log_barnes_g(n));
    double g = 1.0;
    double fact = 1.0;
    for (int k = 1; k <= n - 2; ++k) {
        fact *= k;
        g *= fact;
    }
    return g;
}

// ---------------------------------------------------------------------------
// Polylines

Polyline Polyline::reversed() const
{
    return Polyline(std::vector<cplx>(vertices.rbegin(), vertices.rend()));
}

Polyline& Polyline::append(const Polyline& tail)
{
    for (const cplx& v : tail.vertices)
        if (vertices.empty() || v != vertices.back()) vertices.push_back(v);
    return *this;
}

void validate(const Polyline& path)
{
    if (path.vertices.size() < 2) fail(ErrorKind::invalid_argument, "polyline needs at least 2 vertices");
    for (std::size_t k = 1; k < path.vertices.size(); ++k)
        if (path.vertices[k] == path.vertices[k - 1])
            fail(ErrorKind::invalid_argument, "polyline has repeated consecutive vertex " +
                                                  fmt_point(path.vertices[k]));
}

cplx integrate_polyline(const ComplexFn& f, const Polyline& path, int order_per_segment)
{
    validate(path);
    const Quadrature ref = gauss_legendre(order_per_segment, -1.0, 1.0);
    cplx total = 0.0;
    for (std::size_t s = 1; s < path.vertices.size(); ++s) {
        const cplx a = path.vertices[s - 1];
        const cplx b = path.vertices[s];
        const cplx mid = 0.5 * (a + b);
        const cplx half = 0.5 * (b - a);
        cplx seg = 0.0;
        for (int j = 0; j < ref.order; ++j) {
            const cplx z = mid + half * ref.nodes[j];
            const cplx v = f(z);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                fail(ErrorKind::integration_failure, "non-finite integrand at " + fmt_point(z));
            seg += ref.weights[j] * v;
        }
        total += half * seg;
    }
    return total;
}

namespace {

double segment_distance(cplx a, cplx b, cplx p)
{
    const cplx d = b - a;
    const double len2 = std::norm(d);
    double t = len2 > 0.0 ? ((p - a) * std::conj(d)).real() / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(a + t * d - p);
}

void refine_segment(cplx a, cplx b, std::span<const cplx> sensitive, double ratio,
                    double min_length, const Quadrature& ref, PathRule& out, int depth)
{
    const double len = std::abs(b - a);
    double dist = std::numeric_limits<double>::infinity();
    for (const cplx& p : sensitive) dist = std::min(dist, segment_distance(a, b, p));
    if (len > ratio * dist && len > min_length && depth < 200) {
        cplx m = 0.5 * (a + b);
        refine_segment(a, m, sensitive, ratio, min_length, ref, out, depth + 1);
        refine_segment(m, b, sensitive, ratio, min_length, ref, out, depth + 1);
        return;
    }
    const cplx mid = 0.5 * (a + b);
    const cplx half = 0.5 * (b - a);
    for (int j = 0; j < ref.order; ++j) {
        out.z.push_back(mid + half * ref.nodes[j]);
        out.w.push_back(half * ref.weights[j]);
    }
}

} // namespace

PathRule path_rule(const Polyline& path, int order_per_segment, std::span<const cplx> sensitive,
                   double ratio, double min_length)
{
    validate(path);
    const Quadrature ref = gauss_legendre(order_per_segment, -1.0, 1.0);
    PathRule out;
    for (std::size_t s = 1; s < path.vertices.size(); ++s) {
        const cplx a = path.vertices[s - 1];
        const cplx b = path.vertices[s];
        // break the segment at sensitive points lying on it so that they
        // become endpoints of sub-pieces
        std::vector<double> cuts{0.0, 1.0};
        const cplx d = b - a;
        const double len = std::abs(d);
        for (const cplx& p : sensitive) {
            const double t = ((p - a) * std::conj(d)).real() / std::norm(d);
            if (t > 0.0 && t < 1.0 && std::abs(a + t * d - p) <= 1e-13 * std::max(1.0, len))
                cuts.push_back(t);
        }
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t k = 1; k < cuts.size(); ++k) {
            if (cuts[k] - cuts[k - 1] <= 0.0) continue;
            refine_segment(a + cuts[k - 1] * d, a + cuts[k] * d, sensitive, ratio, min_length, ref,
                           out, 0);
        }
    }
    return out;
}

cplx integrate_path(const ComplexFn& f, const Polyline& path, int order_per_segment,
                    std::span<const cplx> sensitive, double ratio)
{
    const PathRule rule = path_rule(path, order_per_segment, sensitive, ratio);
    cplx total = 0.0;
    for (std::size_t k = 0; k < rule.z.size(); ++k) {
        const cplx v = f(rule.z[k]);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            fail(ErrorKind::integration_failure, "non-finite integrand at " + fmt_point(rule.z[k]));
        total += rule.w[k] * v;
    }
    return total;
}

} // namespace xxz
