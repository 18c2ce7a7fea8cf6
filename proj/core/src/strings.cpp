#include "xxz/strings.hpp"

#include "xxz/dressed.hpp"
#include "xxz/errors.hpp"
#include "xxz/kernels.hpp"

#include <cmath>
#include <sstream>

namespace xxz {

namespace {

void require_nondegenerate(int r, double zeta)
{
    for (int k = 1; k <= std::max(1, r - 1); ++k) {
        if (std::abs(std::sin(k * zeta)) < 1e-12) {
            std::ostringstream os;
            os << "sin(" << k << " zeta) vanishes at zeta/pi = " << zeta / pi
               << ": string content degenerate for r = " << r;
            fail(ErrorKind::degenerate_anisotropy, os.str());
        }
    }
}

} // namespace

ExistenceVerdict takahashi_condition(int r, double zeta)
{
    require_nondegenerate(r, zeta);
    for (int sigma : {0, 1}) {
        bool ok = true;
        for (int k = 1; k <= r - 1 && ok; ++k) {
            const double v = (sigma ? -1.0 : 1.0) * std::sin(k * zeta) * std::sin((r - k) * zeta);
            ok = v > 0.0;
        }
        if (ok) return {true, sigma};
    }
    return {false, 0};
}

ExistenceVerdict small_zeta_condition(int r, double zeta)
{
    require_nondegenerate(r, zeta);
    const int kappa = static_cast<int>(std::floor((r - 1) * zeta / pi));
    const double a = pi * zeta / (pi - zeta);
    auto w = [&](int p) {
        return static_cast<int>(
            std::floor((p - 0.5 * kappa + (r - 1) * zeta / (2.0 * pi)) * pi / zeta));
    };
    const double sign = (kappa % 2 == 0) ? 1.0 : -1.0;
    for (int k = 1; k <= r - 2; ++k) {
        for (int p = 0; w(p) + 1 <= k; ++p) {
            if (k > w(p + 1) - 1) continue;
            const double s1 = std::sin(a * (k - p));
            const double s2 = std::sin(a * (r - k + p - kappa - 1));
            if (std::abs(s1) < 1e-12 || std::abs(s2) < 1e-12)
                fail(ErrorKind::degenerate_anisotropy,
                     "small-zeta existence condition degenerate (vanishing sine)");
            if (!(sign * s1 * s2 > 0.0)) return {false, kappa % 2};
        }
    }
    return {true, kappa % 2};
}

StringSpec string_exists(int r, double zeta)
{
    if (r < 1) fail(ErrorKind::invalid_argument, "string length must be >= 1");
    if (!(zeta > 0.0 && zeta < pi)) fail(ErrorKind::invalid_argument, "zeta must lie in (0, pi)");
    StringSpec s;
    s.r = r;
    if (r == 1) {
        s.exists = true;
        s.sigma = 0;
        s.regime = "one-string";
        return s;
    }
    ExistenceVerdict v;
    if (std::abs(zeta - 0.5 * pi) < 1e-12) {
        const ExistenceVerdict a = takahashi_condition(r, zeta);
        const ExistenceVerdict b = small_zeta_condition(r, zeta);
        if (!(a == b))
            fail(ErrorKind::degenerate_anisotropy,
                 "the two existence-condition families disagree at zeta = pi/2");
        v = a;
        s.regime = "both";
    } else if (zeta > 0.5 * pi) {
        v = takahashi_condition(r, zeta);
        s.regime = "takahashi";
    } else {
        v = small_zeta_condition(r, zeta);
        s.regime = "small-zeta";
    }
    s.exists = v.exists;
    s.sigma = v.exists ? v.sigma : 0;
    return s;
}

int momentum_sign(int r, const DressedSet& ds)
{
    const StringSpec spec = string_exists(r, ds.zeta());
    if (!spec.exists) fail(ErrorKind::invalid_string, "no " + std::to_string(r) + "-string at this zeta");
    const double y = spec.sigma ? 0.5 * pi : 0.0;
    const double xs[5] = {-4.0, -1.0, 0.0, 1.3, 5.0};
    // sin(r zeta) = 0 with the lower harmonics nonzero makes the two halves of
    // the string kernel cancel: p'_r vanishes identically on the carrier line.
    if (std::abs(std::sin(r * ds.zeta())) < 1e-12)
        fail(ErrorKind::degenerate_anisotropy,
             "sin(" + std::to_string(r) + " zeta) vanishes: p'_" + std::to_string(r) + " is identically zero");
    int sign = 0;
    std::ostringstream samples;
    bool consistent = true;
    for (double x : xs) {
        const double v = ds.p_prime_r(r, cplx(x, y)).real();
        samples << " p'(" << x << ")=" << v;
        const int sv = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
        if (sv == 0 || (sign != 0 && sv != sign)) consistent = false;
        if (sign == 0) sign = sv;
    }
    if (!consistent)
        fail(ErrorKind::sign_inconsistency,
             "p'_" + std::to_string(r) + " changes sign on its carrier line:" + samples.str());
    return sign;
}

std::vector<StringSpec> catalog(double zeta, int r_max, const DressedSet& ds)
{
    if (r_max < 1) fail(ErrorKind::invalid_argument, "r_max must be >= 1");
    std::vector<StringSpec> out;
    for (int r = 1; r <= r_max; ++r) {
        StringSpec s = string_exists(r, zeta);
        if (s.exists) s.sgn_p_prime = r == 1 ? 1 : momentum_sign(r, ds);
        out.push_back(s);
    }
    return out;
}

bool check_condition_equivalence(double zeta, int r)
{
    return takahashi_condition(r, zeta) == small_zeta_condition(r, zeta);
}

const std::vector<TableEntry>& reference_tables()
{
    using R = SignRule;
    static const std::vector<TableEntry> tables = {
        {2, 0.0, 0.5, 0, R::plus},
        {2, 0.5, 1.0, 0, R::minus},
        {3, 0.0, 1.0 / 3, 0, R::s2_s3},
        {3, 1.0 / 3, 0.5, 0, R::s2_s3},
        {3, 0.5, 2.0 / 3, 1, R::s2_s3},
        {3, 2.0 / 3, 1.0, 1, R::s2_s3},
        {4, 0.0, 1.0 / 3, 0, R::s_r},
        {4, 2.0 / 3, 1.0, 0, R::s_r},
        {5, 0.0, 0.25, 0, R::s_r},
        {5, 1.0 / 3, 0.5, 1, R::minus_s_r},
        {5, 0.5, 2.0 / 3, 0, R::s_r},
        {5, 0.75, 1.0, 1, R::minus_s_r},
        {6, 0.0, 0.2, 0, R::s_r},
        {6, 0.8, 1.0, 0, R::s_r},
        {7, 0.0, 1.0 / 6, 0, R::s_r},
        {7, 0.25, 1.0 / 3, 1, R::minus_s_r},
        {7, 0.4, 0.5, 0, R::s_r},  // printed lower edge pi/5 overlaps the previous column
        {7, 0.5, 0.6, 1, R::minus_s_r},
        {7, 2.0 / 3, 0.75, 0, R::s_r},
        {7, 5.0 / 6, 1.0, 1, R::minus_s_r},
        {8, 0.0, 1.0 / 7, 0, R::s_r},
        {8, 1.0 / 3, 0.4, 0, R::s_r},
        {8, 0.6, 2.0 / 3, 0, R::s_r},
        {8, 6.0 / 7, 1.0, 0, R::s_r},
    };
    return tables;
}

std::optional<TableEntry> table_lookup(int r, double zeta)
{
    const double x = zeta / pi;
    for (const TableEntry& e : reference_tables())
        if (e.r == r && x > e.lo && x < e.hi) return e;
    return std::nullopt;
}

int table_sign(const TableEntry& e, double zeta)
{
    switch (e.rule) {
    case SignRule::plus: return 1;
    case SignRule::minus: return -1;
    case SignRule::s_r: return sgn_sin(e.r, zeta);
    case SignRule::minus_s_r: return -sgn_sin(e.r, zeta);
    case SignRule::s2_s3: return sgn_sin(2, zeta) * sgn_sin(3, zeta);
    }
    return 0;
}

} // namespace xxz
