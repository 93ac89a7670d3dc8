#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace scnsyn::lm {

struct Options {
    int max_iterations = 500;
    double rss_rel_tol = 1e-10; // stop when an accepted step changes RSS by less than this, relatively
    double grad_tol = 1e-8;     // stop when ||J^T r||_inf falls below this
    double initial_damping = 1e-3;
    int max_rejections = 60;
};

struct Result {
    Eigen::VectorXd params;
    double rss = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> rss_history; // one entry per accepted iterate, starting at p0
};

// Damped Gauss-Newton (Levenberg-Marquardt with Marquardt diagonal scaling and
// Nielsen's damping update).
//
// `problem(p, r, J)` fills the residual vector r (size m) and, when J is
// non-null, the m x n Jacobian dr/dp.
template <class Problem>
Result minimize(Problem&& problem, Eigen::VectorXd p, const Options& opt = {}) {
    Eigen::VectorXd r;
    Eigen::MatrixXd J;
    problem(p, r, &J);
    double rss = r.squaredNorm();

    Result res;
    res.rss_history.push_back(rss);

    Eigen::MatrixXd A = J.transpose() * J;
    Eigen::VectorXd g = J.transpose() * r;
    double max_diag = A.diagonal().maxCoeff();
    double mu = opt.initial_damping * std::max(max_diag, 1e-300);
    double nu = 2.0;
    int rejections = 0;

    Eigen::VectorXd r_new;
    for (res.iterations = 0; res.iterations < opt.max_iterations; ++res.iterations) {
        res.gradient_norm = g.cwiseAbs().maxCoeff();
        if (!std::isfinite(rss)) break;
        if (res.gradient_norm < opt.grad_tol) {
            res.converged = true;
            break;
        }
        max_diag = A.diagonal().maxCoeff();
        Eigen::VectorXd scale = A.diagonal().cwiseMax(1e-12 * std::max(max_diag, 1e-300));
        Eigen::MatrixXd damped = A;
        damped.diagonal() += mu * scale;
        Eigen::VectorXd step = damped.ldlt().solve(-g);
        if (!step.allFinite()) {
            mu *= nu;
            nu *= 2.0;
            if (++rejections > opt.max_rejections) break;
            continue;
        }
        if (step.norm() <= 1e-15 * (p.norm() + 1e-15)) {
            // no representable progress left
            res.converged = true;
            break;
        }
        Eigen::VectorXd p_new = p + step;
        problem(p_new, r_new, nullptr);
        const double rss_new = r_new.allFinite() ? r_new.squaredNorm() : std::numeric_limits<double>::infinity();
        const double predicted = -(step.dot(g) * 2.0 + step.dot(A * step));
        if (rss_new < rss) {
            const double rel = (rss - rss_new) / rss;
            const double rho = predicted > 0.0 ? (rss - rss_new) / predicted : 0.0;
            p = std::move(p_new);
            rss = rss_new;
            res.rss_history.push_back(rss);
            problem(p, r, &J);
            A = J.transpose() * J;
            g = J.transpose() * r;
            mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
            nu = 2.0;
            rejections = 0;
            if (rel < opt.rss_rel_tol) {
                res.converged = true;
                res.gradient_norm = g.cwiseAbs().maxCoeff();
                ++res.iterations;
                break;
            }
        } else {
            mu *= nu;
            nu *= 2.0;
            if (++rejections > opt.max_rejections || mu > 1e300) {
                // Minimum along every damped direction: accept as converged
                // only when the residual has reached floating-point noise.
                res.converged = rss <= 1e-26 * static_cast<double>(r.size());
                break;
            }
        }
    }
    res.params = std::move(p);
    res.rss = rss;
    return res;
}

} // namespace scnsyn::lm
