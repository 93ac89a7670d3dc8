#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"
#include "kinetics.hpp"
#include "levenberg_marquardt.hpp"
#include "models.hpp"
#include "units.hpp"

namespace scnsyn {

struct FitReport {
    KineticModelParams model;
    std::vector<std::string> param_names; // natural parameters, same order as `variance`
    std::vector<double> variance;         // diagonal of the parameter covariance
    double rss = 0.0;
    double aicc = 0.0;
    int iterations = 0;
    bool converged = false;
    double gradient_norm = 0.0;
    std::size_t n_samples = 0;
    std::size_t n_params = 0;
    std::vector<double> rss_history; // optimizer trace, normalized units
};

struct ArrheniusFit {
    double tau0 = 0.0;           // s
    double activation_meV = 0.0; // Ea
    double r_squared = 0.0;
};

struct FitWindow {
    double t_start = -std::numeric_limits<double>::infinity();
    double t_end = std::numeric_limits<double>::infinity();
};

struct CandidateSpec {
    ModelKind kind = ModelKind::ExpDecay;
    int n_terms = 1; // exponential models only
};

inline std::string describe(const CandidateSpec& c) {
    std::string s = to_string(c.kind);
    if (c.kind == ModelKind::ExpDecay || c.kind == ModelKind::ExpRise) s += std::to_string(c.n_terms);
    return s;
}

inline double aicc(double rss, std::size_t n, std::size_t k) {
    const double nn = static_cast<double>(n);
    const double kk = static_cast<double>(k);
    if (nn - kk - 1.0 <= 0.0) return std::numeric_limits<double>::infinity();
    const double floor = std::numeric_limits<double>::min();
    return nn * std::log(std::max(rss, floor) / nn) + 2.0 * kk + 2.0 * kk * (kk + 1.0) / (nn - kk - 1.0);
}

namespace fitting {

// Bounds enforced by smooth reparameterization.
inline constexpr double tau_min = 1e-3;
inline constexpr double tau_max = 1e8;
inline constexpr double scale_rate_min = 1e-6; // Wickelgren beta, 1/s
inline constexpr double scale_rate_max = 1e6;

inline double sigmoid(double u) {
    return u >= 0.0 ? 1.0 / (1.0 + std::exp(-u)) : std::exp(u) / (1.0 + std::exp(u));
}

inline double logit(double q) { return std::log(q / (1.0 - q)); }

// x = exp(lo + (hi-lo) * sigmoid(u)) maps R onto (x_min, x_max) in log space.
struct LogBounded {
    double lo, hi; // logs of the bounds

    LogBounded(double x_min, double x_max) : lo(std::log(x_min)), hi(std::log(x_max)) {}

    double value(double u) const { return std::exp(lo + (hi - lo) * sigmoid(u)); }
    double derivative(double u) const {
        const double s = sigmoid(u);
        return value(u) * (hi - lo) * s * (1.0 - s);
    }
    double inverse(double x) const {
        const double q = (std::log(x) - lo) / (hi - lo);
        return logit(std::clamp(q, 1e-9, 1.0 - 1e-9));
    }
};

inline const LogBounded& tau_map() {
    static const LogBounded m(tau_min, tau_max);
    return m;
}
inline const LogBounded& rate_map() {
    static const LogBounded m(scale_rate_min, scale_rate_max);
    return m;
}

// A transient model in unconstrained internal coordinates, evaluated on
// elapsed time s = t - t0 for amplitude-normalized data.
//
// Internal layouts:
//   ExpDecay/ExpRise(n): [I0, A_1..A_n, u_1..u_n]   tau_i = tau_map(u_i)
//   Stretched:           [I0, A, u, v]              tau = tau_map(u), beta = sigmoid(v)
//   Wickelgren:          [lambda, w, psi]           beta_scale = rate_map(w)
class ParametricModel {
public:
    ParametricModel(ModelKind kind, int n_terms) : kind_(kind), n_(n_terms) {
        if ((kind == ModelKind::ExpDecay || kind == ModelKind::ExpRise) && n_terms < 1)
            throw InputError("exponential model needs n_terms >= 1");
    }

    ModelKind kind() const { return kind_; }
    int n_terms() const { return n_; }

    std::size_t size() const {
        switch (kind_) {
        case ModelKind::ExpDecay:
        case ModelKind::ExpRise: return static_cast<std::size_t>(2 * n_ + 1);
        case ModelKind::Stretched: return 4;
        case ModelKind::Wickelgren: return 3;
        }
        return 0;
    }

    // Value at elapsed time s; when grad is non-null it receives d/dp (size()).
    double eval(const Eigen::VectorXd& p, double s, double* grad) const {
        switch (kind_) {
        case ModelKind::ExpDecay:
        case ModelKind::ExpRise: {
            const bool rise = kind_ == ModelKind::ExpRise;
            double y = p[0];
            if (grad) grad[0] = 1.0;
            for (int i = 0; i < n_; ++i) {
                const double A = p[1 + i];
                const double u = p[1 + n_ + i];
                const double tau = tau_map().value(u);
                const double e = std::exp(-s / tau);
                const double basis = rise ? -std::expm1(-s / tau) : e;
                y += A * basis;
                if (grad) {
                    grad[1 + i] = basis;
                    const double dtau = (rise ? -1.0 : 1.0) * A * e * s / (tau * tau);
                    grad[1 + n_ + i] = dtau * tau_map().derivative(u);
                }
            }
            return y;
        }
        case ModelKind::Stretched: {
            const double I0 = p[0], A = p[1];
            const double tau = tau_map().value(p[2]);
            const double beta = sigmoid(p[3]);
            const double x = s / tau;
            const double z = s > 0.0 ? std::pow(x, beta) : 0.0;
            const double e = std::exp(-z);
            if (grad) {
                grad[0] = 1.0;
                grad[1] = e;
                grad[2] = A * e * beta * z / tau * tau_map().derivative(p[2]);
                const double dz_dbeta = s > 0.0 ? z * std::log(x) : 0.0;
                grad[3] = -A * e * dz_dbeta * beta * (1.0 - beta);
            }
            return I0 + A * e;
        }
        case ModelKind::Wickelgren: {
            const double lam = p[0];
            const double b = rate_map().value(p[1]);
            const double psi = p[2];
            const double base = 1.0 + b * s;
            const double pw = std::pow(base, -psi);
            if (grad) {
                grad[0] = pw;
                grad[1] = -psi * lam * pw / base * s * rate_map().derivative(p[1]);
                grad[2] = -lam * pw * std::log(base);
            }
            return lam * pw;
        }
        }
        return 0.0;
    }

    // Natural parameter names in reporting order.
    std::vector<std::string> natural_names() const {
        switch (kind_) {
        case ModelKind::ExpDecay:
        case ModelKind::ExpRise: {
            std::vector<std::string> out{"I0"};
            for (int i = 0; i < n_; ++i) out.push_back("A" + std::to_string(i + 1));
            for (int i = 0; i < n_; ++i) out.push_back("tau" + std::to_string(i + 1));
            return out;
        }
        case ModelKind::Stretched: return {"I0", "A", "tau", "beta_stretch"};
        case ModelKind::Wickelgren: return {"lambda", "beta_scale", "psi"};
        }
        return {};
    }

    // d(natural_j)/d(internal_j); the map is diagonal. Amplitude-like entries are 1.
    Eigen::VectorXd natural_derivative(const Eigen::VectorXd& p) const {
        Eigen::VectorXd d = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(size()));
        switch (kind_) {
        case ModelKind::ExpDecay:
        case ModelKind::ExpRise:
            for (int i = 0; i < n_; ++i) d[1 + n_ + i] = tau_map().derivative(p[1 + n_ + i]);
            break;
        case ModelKind::Stretched: {
            d[2] = tau_map().derivative(p[2]);
            const double b = sigmoid(p[3]);
            d[3] = b * (1.0 - b);
            break;
        }
        case ModelKind::Wickelgren: d[1] = rate_map().derivative(p[1]); break;
        }
        return d;
    }

    // Convert internal coordinates (normalized units) to model parameters in
    // data units: y = offset + scale * y_normalized.
    KineticModelParams to_params(const Eigen::VectorXd& p, double offset, double scale, double t0) const {
        switch (kind_) {
        case ModelKind::ExpDecay:
        case ModelKind::ExpRise: {
            std::vector<double> A, tau;
            for (int i = 0; i < n_; ++i) {
                A.push_back(scale * p[1 + i]);
                tau.push_back(tau_map().value(p[1 + n_ + i]));
            }
            auto m = kind_ == ModelKind::ExpDecay
                         ? KineticModelParams::exp_decay(offset + scale * p[0], A, tau, t0)
                         : KineticModelParams::exp_rise(offset + scale * p[0], A, tau, t0);
            return m;
        }
        case ModelKind::Stretched:
            return KineticModelParams::stretched(offset + scale * p[0], scale * p[1],
                                                 tau_map().value(p[2]), sigmoid(p[3]), t0);
        case ModelKind::Wickelgren:
            return KineticModelParams::wickelgren(scale * p[0], rate_map().value(p[1]), p[2], t0);
        }
        return {};
    }

    // Per-natural-parameter unit factor (data units / normalized units).
    Eigen::VectorXd unit_scale(double scale) const {
        Eigen::VectorXd u = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(size()));
        switch (kind_) {
        case ModelKind::ExpDecay:
        case ModelKind::ExpRise:
            for (int i = 0; i <= n_; ++i) u[i] = scale;
            break;
        case ModelKind::Stretched: u[0] = scale; u[1] = scale; break;
        case ModelKind::Wickelgren: u[0] = scale; break;
        }
        return u;
    }

private:
    ModelKind kind_;
    int n_;
};

// Least-squares line y = a + b x; returns {a, b, r_squared}.
struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double r_squared = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    f.r_squared = (sxx > 0.0 && syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

// Linear least squares for I0 and amplitudes with fixed time constants.
inline void project_amplitudes(const std::vector<double>& s, const std::vector<double>& y,
                               const std::vector<double>& taus, double& I0, std::vector<double>& A) {
    const auto m = static_cast<Eigen::Index>(s.size());
    const auto k = static_cast<Eigen::Index>(taus.size());
    Eigen::MatrixXd X(m, k + 1);
    Eigen::VectorXd Y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        X(i, 0) = 1.0;
        for (Eigen::Index j = 0; j < k; ++j) X(i, j + 1) = std::exp(-s[i] / taus[j]);
        Y[i] = y[i];
    }
    Eigen::VectorXd c = X.completeOrthogonalDecomposition().solve(Y);
    I0 = c[0];
    A.assign(c.data() + 1, c.data() + 1 + k);
}

// Sequential log-linear peeling for I0 + sum A_i exp(-s/tau_i): estimate
// the baseline from the tail, fit the slowest term on the late part of the
// window, subtract it, and repeat on successively earlier parts. Returns
// taus slowest-first after a final linear projection of I0 and amplitudes.
inline void peel_exponentials(const std::vector<double>& s, const std::vector<double>& y, int n_terms,
                              double& I0, std::vector<double>& A, std::vector<double>& taus) {
    const std::size_t m = s.size();
    const std::size_t tail = std::max<std::size_t>(3, m / 20);
    I0 = 0.0;
    for (std::size_t i = m - tail; i < m; ++i) I0 += y[i];
    I0 /= static_cast<double>(tail);

    std::vector<double> r(m);
    for (std::size_t i = 0; i < m; ++i) r[i] = y[i] - I0;
    const double peak = std::abs(r[0]) > 0.0 ? std::abs(r[0]) : 1.0;
    const double sign = r[0] >= 0.0 ? 1.0 : -1.0;

    const double span = s.back() - s.front();
    const double shrink = 0.25;
    taus.clear();
    for (int j = 0; j < n_terms; ++j) {
        const double hi = s.front() + span * std::pow(shrink, j) * (j == 0 ? 0.6 : 1.0);
        const double lo = (j == n_terms - 1) ? s.front() : s.front() + span * std::pow(shrink, j + 1);
        std::vector<double> xs, ls;
        for (std::size_t i = 0; i < m; ++i) {
            if (s[i] < lo || s[i] > hi) continue;
            const double v = sign * r[i];
            if (v > 1e-3 * peak) {
                xs.push_back(s[i]);
                ls.push_back(std::log(v));
            }
        }
        double tau = 0.0, amp = 0.0;
        if (xs.size() >= 3) {
            const auto lf = fit_line(xs, ls);
            if (lf.slope < 0.0) {
                tau = -1.0 / lf.slope;
                amp = sign * std::exp(lf.intercept);
            }
        }
        if (!(tau > 0.0) || !std::isfinite(tau)) {
            tau = std::max(0.5 * (hi - lo), 1e-2);
            amp = 0.0;
        }
        if (!taus.empty()) tau = std::min(tau, taus.back() / 3.0);
        tau = std::clamp(tau, 2.0 * tau_min, 0.5 * tau_max);
        taus.push_back(tau);
        for (std::size_t i = 0; i < m; ++i) r[i] -= amp * std::exp(-s[i] / tau);
    }
    project_amplitudes(s, y, taus, I0, A);
}

struct Prepared {
    std::vector<double> s; // elapsed time
    std::vector<double> y; // normalized
    double offset = 0.0;
    double scale = 1.0;
    double t0 = 0.0;
};

inline Eigen::VectorXd initial_guess(const ParametricModel& model, const Prepared& d) {
    Eigen::VectorXd p(static_cast<Eigen::Index>(model.size()));
    const int n = model.n_terms();
    switch (model.kind()) {
    case ModelKind::ExpDecay:
    case ModelKind::ExpRise: {
        double I0;
        std::vector<double> A, taus;
        peel_exponentials(d.s, d.y, n, I0, A, taus);
        if (model.kind() == ModelKind::ExpRise) {
            // I0 + sum A_i (1 - e_i) == (I0 + sum A_i) - sum A_i e_i
            double sum = 0.0;
            for (auto& a : A) {
                sum += a;
                a = -a;
            }
            I0 += sum;
        }
        p[0] = I0;
        for (int i = 0; i < n; ++i) {
            p[1 + i] = A[static_cast<std::size_t>(i)];
            p[1 + n + i] = tau_map().inverse(taus[static_cast<std::size_t>(i)]);
        }
        return p;
    }
    case ModelKind::Stretched: {
        double I0;
        std::vector<double> A, taus;
        peel_exponentials(d.s, d.y, 1, I0, A, taus);
        double tau = taus[0], beta = 0.7;
        if (A[0] != 0.0) {
            std::vector<double> xs, zs;
            for (std::size_t i = 0; i < d.s.size(); ++i) {
                const double q = (d.y[i] - I0) / A[0];
                if (d.s[i] > 0.0 && q > 0.05 && q < 0.95) {
                    xs.push_back(std::log(d.s[i]));
                    zs.push_back(std::log(-std::log(q)));
                }
            }
            if (xs.size() >= 3) {
                const auto lf = fit_line(xs, zs);
                if (lf.slope > 0.0) {
                    beta = std::clamp(lf.slope, 0.05, 0.99);
                    tau = std::exp(-lf.intercept / lf.slope);
                }
            }
        }
        tau = std::clamp(tau, 2.0 * tau_min, 0.5 * tau_max);
        p << I0, A[0], tau_map().inverse(tau), logit(beta);
        return p;
    }
    case ModelKind::Wickelgren: {
        // ln|y| = ln|lambda| - psi ln(1 + b s) is linear for fixed b: scan b.
        double mean = 0.0;
        for (double v : d.y) mean += v;
        const double sign = mean >= 0.0 ? 1.0 : -1.0;
        std::vector<double> ly(d.y.size());
        for (std::size_t i = 0; i < d.y.size(); ++i) {
            const double v = sign * d.y[i];
            if (!(v > 0.0)) throw DegenerateFitError("Wickelgren fit needs data of one sign");
            ly[i] = std::log(v);
        }
        double best = std::numeric_limits<double>::infinity();
        double best_b = 1.0, best_c0 = 0.0, best_psi = 0.0;
        for (int k = 0; k <= 120; ++k) {
            const double b = std::pow(10.0, -6.0 + 0.1 * k);
            std::vector<double> xs(d.s.size());
            for (std::size_t i = 0; i < d.s.size(); ++i) xs[i] = std::log1p(b * d.s[i]);
            const auto lf = fit_line(xs, ly);
            double rss = 0.0;
            for (std::size_t i = 0; i < d.s.size(); ++i) {
                const double e = sign * std::exp(lf.intercept + lf.slope * xs[i]) - d.y[i];
                rss += e * e;
            }
            if (rss < best) {
                best = rss;
                best_b = b;
                best_c0 = lf.intercept;
                best_psi = -lf.slope;
            }
        }
        best_b = std::clamp(best_b, 2.0 * scale_rate_min, 0.5 * scale_rate_max);
        p << sign * std::exp(best_c0), rate_map().inverse(best_b), best_psi;
        return p;
    }
    }
    return p;
}

// Extra starting points for multi-term exponentials: the tau combinations
// from a log-spaced grid whose linearly projected amplitudes fit best.
inline std::vector<Eigen::VectorXd> grid_starts(const ParametricModel& model, const Prepared& d,
                                                std::size_t keep) {
    const int n = model.n_terms();
    std::vector<Eigen::VectorXd> out;
    if (n < 2 || d.s.size() < 2) return out;
    double ds = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < d.s.size(); ++i) ds = std::min(ds, d.s[i] - d.s[i - 1]);
    const double lo = std::max(ds, 2.0 * tau_min);
    const double hi = std::min(2.0 * (d.s.back() - d.s.front()), 0.5 * tau_max);
    if (!(hi > lo)) return out;
    const int g = 4 * n + 4;
    std::vector<double> grid(static_cast<std::size_t>(g));
    for (int i = 0; i < g; ++i) grid[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, i / double(g - 1));

    struct Cand {
        double rss;
        double I0;
        std::vector<double> A, taus;
    };
    std::vector<Cand> cands;
    std::vector<int> idx(static_cast<std::size_t>(n));
    // enumerate increasing index tuples
    std::function<void(int, int)> rec = [&](int pos, int from) {
        if (pos == n) {
            Cand c;
            for (int i : idx) c.taus.push_back(grid[static_cast<std::size_t>(i)]);
            project_amplitudes(d.s, d.y, c.taus, c.I0, c.A);
            c.rss = 0.0;
            for (std::size_t i = 0; i < d.s.size(); ++i) {
                double v = c.I0;
                for (int j = 0; j < n; ++j)
                    v += c.A[static_cast<std::size_t>(j)] * std::exp(-d.s[i] / c.taus[static_cast<std::size_t>(j)]);
                c.rss += (v - d.y[i]) * (v - d.y[i]);
            }
            cands.push_back(std::move(c));
            return;
        }
        for (int i = from; i < g; ++i) {
            idx[static_cast<std::size_t>(pos)] = i;
            rec(pos + 1, i + 1);
        }
    };
    rec(0, 0);
    const std::size_t take = std::min(keep, cands.size());
    std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(take), cands.end(),
                      [](const Cand& a, const Cand& b) { return a.rss < b.rss; });
    for (std::size_t c = 0; c < take; ++c) {
        auto& cd = cands[c];
        Eigen::VectorXd p(static_cast<Eigen::Index>(model.size()));
        if (model.kind() == ModelKind::ExpRise) {
            for (auto& a : cd.A) {
                cd.I0 += a;
                a = -a;
            }
        }
        p[0] = cd.I0;
        for (int i = 0; i < n; ++i) {
            p[1 + i] = cd.A[static_cast<std::size_t>(i)];
            p[1 + n + i] = tau_map().inverse(cd.taus[static_cast<std::size_t>(i)]);
        }
        out.push_back(std::move(p));
    }
    return out;
}

inline FitReport run_fit(const ParametricModel& model, const Prepared& d, const lm::Options& opt = {}) {
    const auto m = static_cast<Eigen::Index>(d.s.size());
    const auto k = static_cast<Eigen::Index>(model.size());
    auto problem = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
        r.resize(m);
        if (J) J->resize(m, k);
        std::vector<double> grad(static_cast<std::size_t>(k));
        for (Eigen::Index i = 0; i < m; ++i) {
            const double v = model.eval(p, d.s[static_cast<std::size_t>(i)], J ? grad.data() : nullptr);
            r[i] = v - d.y[static_cast<std::size_t>(i)];
            if (J)
                for (Eigen::Index j = 0; j < k; ++j) (*J)(i, j) = grad[static_cast<std::size_t>(j)];
        }
    };
    auto res = lm::minimize(problem, initial_guess(model, d), opt);
    for (const auto& p0 : grid_starts(model, d, 3)) {
        auto alt = lm::minimize(problem, p0, opt);
        const bool better = std::isfinite(alt.rss) && (alt.rss < res.rss * (1.0 - 1e-9) || !std::isfinite(res.rss));
        if (better && (alt.converged || !res.converged)) res = std::move(alt);
    }

    FitReport rep;
    rep.model = model.to_params(res.params, d.offset, d.scale, d.t0);
    rep.param_names = model.natural_names();
    rep.iterations = res.iterations;
    rep.converged = res.converged;
    rep.gradient_norm = res.gradient_norm;
    rep.n_samples = d.s.size();
    rep.n_params = model.size();
    rep.rss = res.rss * d.scale * d.scale;
    rep.rss_history = res.rss_history;
    rep.aicc = aicc(rep.rss, rep.n_samples, rep.n_params);

    // Covariance in natural coordinates: sigma^2 (Jn^T Jn)^-1 with Jn = J / (dnat/dint).
    Eigen::VectorXd r;
    Eigen::MatrixXd J;
    problem(res.params, r, &J);
    const Eigen::VectorXd dn = model.natural_derivative(res.params);
    for (Eigen::Index j = 0; j < k; ++j) J.col(j) /= dn[j];
    const double dof = static_cast<double>(m - k);
    const double sigma2 = dof > 0.0 ? res.rss / dof : std::numeric_limits<double>::quiet_NaN();
    const Eigen::MatrixXd cov = (J.transpose() * J).completeOrthogonalDecomposition().pseudoInverse() * sigma2;
    const Eigen::VectorXd us = model.unit_scale(d.scale);
    rep.variance.resize(static_cast<std::size_t>(k));
    for (Eigen::Index j = 0; j < k; ++j) rep.variance[static_cast<std::size_t>(j)] = cov(j, j) * us[j] * us[j];

    // Canonical ascending tau order, keeping variances paired.
    if (model.kind() == ModelKind::ExpDecay || model.kind() == ModelKind::ExpRise) {
        const auto n = static_cast<std::size_t>(model.n_terms());
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return rep.model.taus[a] < rep.model.taus[b]; });
        auto var = rep.variance;
        for (std::size_t i = 0; i < n; ++i) {
            var[1 + i] = rep.variance[1 + idx[i]];
            var[1 + n + i] = rep.variance[1 + n + idx[i]];
        }
        rep.variance = std::move(var);
        rep.model.canonicalize();
    }
    return rep;
}

inline Prepared prepare(const Trace& trace, const FitWindow& window, ModelKind kind) {
    trace.validate();
    Prepared d;
    bool first = true;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const double t = trace.t[i];
        if (t < window.t_start || t > window.t_end) continue;
        if (first) {
            d.t0 = std::isfinite(window.t_start) ? window.t_start : t;
            first = false;
        }
        d.s.push_back(t - d.t0);
        d.y.push_back(trace.current[i]);
    }
    if (d.s.empty()) throw InputError("fit window contains no samples");
    const auto [mn, mx] = std::minmax_element(d.y.begin(), d.y.end());
    if (kind == ModelKind::Wickelgren) {
        // multiplicative model: scale only
        d.offset = 0.0;
        d.scale = std::max(std::abs(*mn), std::abs(*mx));
        if (!(d.scale > 0.0)) throw DegenerateFitError("trace is identically zero");
    } else {
        const double range = *mx - *mn;
        const double mag = std::max({std::abs(*mn), std::abs(*mx), std::numeric_limits<double>::min()});
        if (!(range > 1e-12 * mag)) throw DegenerateFitError("trace is constant over the fit window");
        d.offset = *mn;
        d.scale = range;
    }
    for (auto& v : d.y) v = (v - d.offset) / d.scale;
    return d;
}

} // namespace fitting

inline FitReport fit_transient(const Trace& trace, ModelKind kind, int n_terms, const FitWindow& window = {},
                               const lm::Options& opt = {}) {
    const fitting::ParametricModel model(kind, n_terms);
    auto d = fitting::prepare(trace, window, kind);
    if (d.s.size() < 3 * model.size())
        throw InputError("fit window has " + std::to_string(d.s.size()) + " samples; need at least " +
                         std::to_string(3 * model.size()) + " for " + std::to_string(model.size()) +
                         " free parameters");
    return fitting::run_fit(model, d, opt);
}

// Power-law forgetting fit on the part of `trace` from `off_time` on, with
// time measured from `off_time`. The sign of psi is free.
inline FitReport fit_wickelgren(const Trace& trace, double off_time, const lm::Options& opt = {}) {
    const fitting::ParametricModel model(ModelKind::Wickelgren, 0);
    auto d = fitting::prepare(trace, FitWindow{off_time, std::numeric_limits<double>::infinity()},
                              ModelKind::Wickelgren);
    if (d.s.size() < 10 || d.s.size() < 3 * model.size())
        throw InputError("Wickelgren fit needs at least 10 samples after off_time");
    return fitting::run_fit(model, d, opt);
}

inline ArrheniusFit fit_arrhenius(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw InputError("Arrhenius fit needs at least 3 (T, tau) points");
    std::vector<double> x, y;
    for (const auto& [T, tau] : points) {
        if (!(T > 0.0)) throw DomainError("temperature must be > 0 K");
        if (!(tau > 0.0)) throw DomainError("time constant must be > 0");
        x.push_back(1.0 / (units::boltzmann_meV * T));
        y.push_back(std::log(tau));
    }
    auto sorted = points;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i].first == sorted[i - 1].first)
            throw InputError("duplicate temperature " + std::to_string(sorted[i].first) + " K");
    // ln tau = ln tau0 + Ea / (kB T)
    const auto lf = fitting::fit_line(x, y);
    return {std::exp(lf.intercept), lf.slope, lf.r_squared};
}

struct ModelSelection {
    std::vector<FitReport> ranked;                 // best (lowest AICc) first
    std::vector<std::pair<std::string, std::string>> excluded; // candidate, reason
};

inline ModelSelection model_select(const Trace& trace, const std::vector<CandidateSpec>& candidates,
                                   const FitWindow& window = {}) {
    if (candidates.empty()) throw InputError("model selection needs at least one candidate");
    ModelSelection out;
    for (const auto& c : candidates) {
        try {
            out.ranked.push_back(c.kind == ModelKind::Wickelgren
                                     ? fit_wickelgren(trace, std::isfinite(window.t_start) ? window.t_start
                                                                                           : trace.t.front())
                                     : fit_transient(trace, c.kind, c.n_terms, window));
        } catch (const Error& e) {
            out.excluded.emplace_back(describe(c), e.what());
        }
    }
    std::stable_sort(out.ranked.begin(), out.ranked.end(), [](const FitReport& a, const FitReport& b) {
        if (a.aicc != b.aicc) return a.aicc < b.aicc;
        return a.n_params < b.n_params;
    });
    return out;
}

} // namespace scnsyn
