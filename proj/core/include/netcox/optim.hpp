#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "netcox/errors.hpp"

namespace netcox {

struct NelderMeadResult {
    Eigen::VectorXd x;
    double value = std::numeric_limits<double>::infinity();
    int evaluations = 0;
    bool converged = false;
};

/// Derivative-free simplex minimizer with the adaptive coefficients of
/// Gao and Han. Deterministic given the start point and step sizes.
inline NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                                    const Eigen::VectorXd& start, double step = 0.25,
                                    int maxEvals = 500, double tolF = 1e-10,
                                    double tolX = 1e-9) {
    const int n = static_cast<int>(start.size());
    if (n < 1) throw InvalidParameters("optimizer needs at least one dimension");
    const double alpha = 1.0;
    const double beta = 1.0 + 2.0 / n;
    const double gamma = 0.75 - 0.5 / n;
    const double delta = 1.0 - 1.0 / n;

    int evals = 0;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++evals;
        double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    std::vector<Eigen::VectorXd> xs(n + 1, start);
    std::vector<double> fs(n + 1);
    for (int i = 0; i < n; ++i) xs[i + 1][i] += (start[i] != 0.0 ? step * std::abs(start[i]) : step);
    for (int i = 0; i <= n; ++i) fs[i] = eval(xs[i]);

    std::vector<int> order(n + 1);
    auto sortSimplex = [&] {
        for (int i = 0; i <= n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
        std::vector<Eigen::VectorXd> xs2(n + 1);
        std::vector<double> fs2(n + 1);
        for (int i = 0; i <= n; ++i) {
            xs2[i] = xs[order[i]];
            fs2[i] = fs[order[i]];
        }
        xs.swap(xs2);
        fs.swap(fs2);
    };

    NelderMeadResult res;
    while (evals < maxEvals) {
        sortSimplex();
        double spreadF = std::abs(fs[n] - fs[0]);
        double spreadX = 0.0;
        for (int i = 1; i <= n; ++i) spreadX = std::max(spreadX, (xs[i] - xs[0]).lpNorm<Eigen::Infinity>());
        if (spreadF < tolF && spreadX < tolX) {
            res.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) centroid += xs[i];
        centroid /= n;

        Eigen::VectorXd xr = centroid + alpha * (centroid - xs[n]);
        double fr = eval(xr);
        if (fr < fs[0]) {
            Eigen::VectorXd xe = centroid + beta * (xr - centroid);
            double fe = eval(xe);
            if (fe < fr) {
                xs[n] = xe;
                fs[n] = fe;
            } else {
                xs[n] = xr;
                fs[n] = fr;
            }
        } else if (fr < fs[n - 1]) {
            xs[n] = xr;
            fs[n] = fr;
        } else {
            bool outside = fr < fs[n];
            Eigen::VectorXd xc;
            if (outside)
                xc = centroid + gamma * (xr - centroid);
            else
                xc = centroid - gamma * (centroid - xs[n]);
            double fc = eval(xc);
            if (fc < std::min(fr, fs[n])) {
                xs[n] = xc;
                fs[n] = fc;
            } else {
                for (int i = 1; i <= n; ++i) {
                    xs[i] = xs[0] + delta * (xs[i] - xs[0]);
                    fs[i] = eval(xs[i]);
                }
            }
        }
    }
    sortSimplex();
    res.x = xs[0];
    res.value = fs[0];
    res.evaluations = evals;
    return res;
}

}  // namespace netcox
