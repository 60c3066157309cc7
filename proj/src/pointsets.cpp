#include "hermitegf/pointsets.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace hermitegf {

namespace {

constexpr std::array<int, 8> kPrimes{2, 3, 5, 7, 11, 13, 17, 19};

double radical_inverse(std::size_t i, int base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= base;
        r += f * static_cast<double>(i % static_cast<std::size_t>(base));
        i /= static_cast<std::size_t>(base);
    }
    return r;
}

double sine_cluster(double u) { return std::sin(0.5 * std::numbers::pi * u); }

struct HyperbolicPoint {
    double x, y;
    bool accepted;
};

HyperbolicPoint hyperbolic_map(double c, double t) {
    const double x = c * std::cosh(t) - 1.2;
    const double y = 0.5 * c * std::sinh(t);
    const double band = (x + 1.2) * (x + 1.2) - 4.0 * y * y; // equals c^2 up to roundoff
    const bool ok = band >= 0.04 - 1e-12 && band <= 1.0 + 1e-12 && x * x + y * y <= 1.0;
    return {x, y, ok};
}

} // namespace

PointSet halton(std::size_t n, int d, std::size_t skip) {
    if (d < 1 || d > static_cast<int>(kPrimes.size()))
        throw DimensionTooLarge("halton: supports 1 <= d <= 8");
    PointSet out{d, Matrix(n, static_cast<std::size_t>(d))};
    for (std::size_t i = 0; i < n; ++i)
        for (int c = 0; c < d; ++c)
            out.pts(i, static_cast<std::size_t>(c)) =
                radical_inverse(skip + i + 1, kPrimes[static_cast<std::size_t>(c)]);
    return out;
}

PointSet cluster_boundary(const PointSet& pts) {
    PointSet out = pts;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (int c = 0; c < pts.dim; ++c) {
            const double u = pts.pts(i, static_cast<std::size_t>(c));
            if (u < -1.0 - 1e-12 || u > 1.0 + 1e-12)
                throw OutOfDomain("cluster_boundary: coordinate outside [-1,1]");
            out.pts(i, static_cast<std::size_t>(c)) = sine_cluster(u);
        }
    return out;
}

PointSet box_scale(const PointSet& pts, std::span<const double> lo,
                   std::span<const double> hi) {
    if (lo.size() != static_cast<std::size_t>(pts.dim) || hi.size() != lo.size())
        throw DomainError("box_scale: bound dimension mismatch");
    for (std::size_t c = 0; c < lo.size(); ++c)
        if (!(lo[c] < hi[c])) throw DomainError("box_scale: requires lo < hi");
    PointSet out = pts;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t c = 0; c < lo.size(); ++c)
            out.pts(i, c) = lo[c] + (hi[c] - lo[c]) * pts.pts(i, c);
    return out;
}

PointSet hyperbolic_nodes(std::size_t n, bool clustered, bool grid_based,
                          HyperbolicOptions opt) {
    if (n < 1) throw DomainError("hyperbolic_nodes: n must be >= 1");
    const double c_lo = 0.2, c_hi = 1.0;
    const double t_lo = -opt.t_lim, t_hi = opt.t_lim;
    std::vector<double> xs, ys;

    if (grid_based) {
        // n counts the parameter-grid points before rejection
        std::size_t side = 1;
        while (side * side < n) ++side;
        for (std::size_t i = 0; i < side; ++i) {
            const double c = c_lo + (c_hi - c_lo) * (side > 1 ? double(i) / double(side - 1) : 0.5);
            for (std::size_t j = 0; j < side; ++j) {
                const double t = t_lo + (t_hi - t_lo) * (side > 1 ? double(j) / double(side - 1) : 0.5);
                HyperbolicPoint p = hyperbolic_map(c, t);
                if (p.accepted) {
                    xs.push_back(p.x);
                    ys.push_back(p.y);
                }
            }
        }
    } else {
        std::size_t draws = 0, accepts = 0, index = 0;
        while (accepts < n) {
            const double u0 = radical_inverse(index + 1, 2);
            const double u1 = radical_inverse(index + 1, 3);
            ++index;
            ++draws;
            double a = 2.0 * u0 - 1.0, b = 2.0 * u1 - 1.0;
            if (clustered) {
                a = sine_cluster(a);
                b = sine_cluster(b);
            }
            const double c = c_lo + (c_hi - c_lo) * 0.5 * (a + 1.0);
            const double t = t_lo + (t_hi - t_lo) * 0.5 * (b + 1.0);
            HyperbolicPoint p = hyperbolic_map(c, t);
            if (p.accepted) {
                xs.push_back(p.x);
                ys.push_back(p.y);
                ++accepts;
            }
            if (draws >= 100'000 && accepts * 100 < draws)
                throw RejectionStalled("hyperbolic_nodes: acceptance rate below 1% after " +
                                       std::to_string(draws) + " draws");
        }
    }

    PointSet out{2, Matrix(xs.size(), 2)};
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out.pts(i, 0) = xs[i];
        out.pts(i, 1) = ys[i];
    }
    return out;
}

} // namespace hermitegf
