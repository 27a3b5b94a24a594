// Adaptive embedded Runge-Kutta integration (Dormand-Prince 5(4)) for the
// small ODE systems used by the profile solvers.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aniso {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double hmax = std::numeric_limits<double>::infinity();
    double hmax_rel_x = 0.0;  // if > 0, also cap |h| <= hmax_rel_x * |x|
    double h0 = 1e-4;
    std::size_t max_steps = 500000;
};

template <int N>
struct OdePath {
    std::vector<double> x;
    std::vector<std::array<double, N>> y;
    std::vector<std::array<double, N>> dy;  // f(x, y) at the stored nodes
    bool stopped_by_event = false;
    std::size_t steps = 0;
};

// Integrates y' = f(x, y) from x0 toward x_limit (direction given by the sign
// of x_limit - x0). Stops when stop(x, y) becomes true after an accepted step,
// or when x_limit is reached.
template <int N, class F, class Stop>
OdePath<N> integrate_rk45(F&& f, double x0, std::array<double, N> y0,
                          double x_limit, const OdeOptions& opt, Stop&& stop) {
    using State = std::array<double, N>;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                            e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640,
                            e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                            c5 = 8.0 / 9;

    const double dir = (x_limit >= x0) ? 1.0 : -1.0;
    OdePath<N> path;
    double x = x0;
    State y = y0;
    State k1 = f(x, y);
    path.x.push_back(x);
    path.y.push_back(y);
    path.dy.push_back(k1);

    auto cap_h = [&](double h) {
        h = std::min(h, opt.hmax);
        if (opt.hmax_rel_x > 0.0) {
            double cap = opt.hmax_rel_x * std::max(std::abs(x), 1e-300);
            h = std::min(h, cap);
        }
        return h;
    };

    double h = cap_h(opt.h0);
    while (true) {
        if (++path.steps > opt.max_steps)
            throw SolverError("integrate_rk45: step budget exhausted at x = " +
                              std::to_string(x));
        bool last = false;
        if (dir * (x + dir * h - x_limit) >= 0.0) {
            h = std::abs(x_limit - x);  // land exactly on the limit
            last = true;
        }
        const double hs = dir * h;
        State k2, k3, k4, k5, k6, k7, yt, y5;
        auto at = [&](const State& base, std::initializer_list<std::pair<double, const State*>> terms) {
            State r = base;
            for (auto& [w, k] : terms)
                for (int i = 0; i < N; ++i) r[i] += hs * w * (*k)[i];
            return r;
        };
        yt = at(y, {{a21, &k1}});
        k2 = f(x + c2 * hs, yt);
        yt = at(y, {{a31, &k1}, {a32, &k2}});
        k3 = f(x + c3 * hs, yt);
        yt = at(y, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
        k4 = f(x + c4 * hs, yt);
        yt = at(y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
        k5 = f(x + c5 * hs, yt);
        yt = at(y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
        k6 = f(x + hs, yt);
        y5 = at(y, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        k7 = f(x + hs, y5);

        double err = 0.0;
        for (int i = 0; i < N; ++i) {
            double ei = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                              e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(err / N);

        if (err <= 1.0) {
            x += hs;
            y = y5;
            k1 = k7;  // FSAL
            path.x.push_back(x);
            path.y.push_back(y);
            path.dy.push_back(k1);
            if (stop(x, y)) {
                path.stopped_by_event = true;
                return path;
            }
            if (last) return path;
        }
        double fac = 0.9 * std::pow(std::max(err, 1e-16), -0.2);
        fac = std::min(5.0, std::max(0.2, fac));
        h = cap_h(h * fac);
        if (h < 1e-15 * (1.0 + std::abs(x)))
            throw SolverError("integrate_rk45: step size underflow at x = " +
                              std::to_string(x));
    }
}

template <int N, class F>
OdePath<N> integrate_rk45(F&& f, double x0, std::array<double, N> y0,
                          double x_limit, const OdeOptions& opt) {
    return integrate_rk45<N>(std::forward<F>(f), x0, y0, x_limit, opt,
                             [](double, const std::array<double, N>&) { return false; });
}

// Piecewise cubic Hermite evaluation on a strictly increasing grid.
inline double hermite_eval(std::span<const double> xs, std::span<const double> ys,
                           std::span<const double> ds, double xq) {
    if (xs.size() < 2 || xq < xs.front() || xq > xs.back())
        throw std::domain_error("hermite_eval: query outside the grid");
    auto it = std::upper_bound(xs.begin(), xs.end(), xq);
    std::size_t i = (it == xs.end()) ? xs.size() - 2 : (it - xs.begin()) - 1;
    double h = xs[i + 1] - xs[i];
    double s = (xq - xs[i]) / h;
    double s2 = s * s, s3 = s2 * s;
    double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    return h00 * ys[i] + h10 * h * ds[i] + h01 * ys[i + 1] + h11 * h * ds[i + 1];
}

}  // namespace aniso
