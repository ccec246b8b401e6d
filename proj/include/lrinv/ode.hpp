// ode.hpp: adaptive Dormand-Prince 5(4) stepper for small real systems

#pragma once

#include "lrinv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace lrinv {

struct StepStats {
    long accepted = 0;
    long rejected = 0;
    double max_error = 0.0;  // largest accepted scaled error estimate (<= 1)
    double last_step = 0.0;
};

// Integrates y' = f(t, y) from t0 to t1 with mixed absolute/relative error
// control: |err_i| <= tol * (1 + |y_i|). `h` is read as the first trial step
// and updated to the last accepted one.
template <int N>
class DormandPrince {
public:
    using State = Eigen::Matrix<double, N, 1>;
    using Rhs = std::function<State(double, const State&)>;

    DormandPrince(Rhs rhs, double tol) : rhs_(std::move(rhs)), tol_(tol) {}

    State integrate(double t0, double t1, State y, double& h, StepStats& stats) const {
        const double span = t1 - t0;
        if (span == 0.0) return y;
        const double min_step = 1e-14 * std::max(1.0, std::abs(t1));
        if (!(h > 0.0)) h = std::min(std::abs(span), 1e-3);
        double t = t0;
        State k1 = rhs_(t, y);
        while (t < t1) {
            bool last = false;
            double step = h;
            if (t + step >= t1) {
                step = t1 - t;
                last = true;
            }
            const State k2 = rhs_(t + c2 * step, y + step * (a21 * k1));
            const State k3 = rhs_(t + c3 * step, y + step * (a31 * k1 + a32 * k2));
            const State k4 = rhs_(t + c4 * step, y + step * (a41 * k1 + a42 * k2 + a43 * k3));
            const State k5 = rhs_(t + c5 * step, y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            const State k6 = rhs_(t + step, y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            const State y5 = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const State k7 = rhs_(t + step, y5);
            const State err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            double scaled = 0.0;
            for (int i = 0; i < y.size(); ++i)
                scaled = std::max(scaled, std::abs(err(i)) / (tol_ * (1.0 + std::max(std::abs(y(i)), std::abs(y5(i))))));
            if (!std::isfinite(scaled)) throw NumericalError("Dormand-Prince: non-finite error estimate");

            if (scaled <= 1.0) {
                t = last ? t1 : t + step;
                y = y5;
                k1 = k7;
                ++stats.accepted;
                stats.max_error = std::max(stats.max_error, scaled);
                stats.last_step = step;
                const double grow = scaled == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(scaled, -0.2));
                // keep the carried step when the final step was clipped to hit t1
                if (!last || step == h) h = step * grow;
            } else {
                ++stats.rejected;
                h = step * std::max(0.1, 0.9 * std::pow(scaled, -0.2));
                if (h < min_step) throw NumericalError("Dormand-Prince: step size underflow");
            }
        }
        return y;
    }

private:
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    // b - b*, with b* the embedded fourth-order weights
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    Rhs rhs_;
    double tol_;
};

}  // namespace lrinv
