#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "error.hpp"

namespace scnsyn {

// Closed-form photocurrent transients:
//
//   ExpDecay(n)  I = I0 + sum_i A_i exp(-(t-t0)/tau_i)
//   ExpRise(n)   I = I0 + sum_i A_i (1 - exp(-(t-t0)/tau_i))
//   Stretched    I = I0 + A exp(-((t-t0)/tau)^beta)
//   Wickelgren   I = lambda (1 + beta_scale (t-t0))^(-psi)
enum class ModelKind { ExpDecay, ExpRise, Stretched, Wickelgren };

inline const char* to_string(ModelKind k) {
    switch (k) {
    case ModelKind::ExpDecay: return "exp-decay";
    case ModelKind::ExpRise: return "exp-rise";
    case ModelKind::Stretched: return "stretched";
    case ModelKind::Wickelgren: return "wickelgren";
    }
    return "?";
}

inline ModelKind model_kind_from_string(const std::string& s) {
    if (s == "exp-decay") return ModelKind::ExpDecay;
    if (s == "exp-rise") return ModelKind::ExpRise;
    if (s == "stretched") return ModelKind::Stretched;
    if (s == "wickelgren") return ModelKind::Wickelgren;
    throw InputError("unknown model '" + s + "' (expected exp-decay|exp-rise|stretched|wickelgren)");
}

struct KineticModelParams {
    ModelKind kind = ModelKind::ExpDecay;
    double I0 = 0.0;
    std::vector<double> amplitudes; // A_i; one entry for Stretched
    std::vector<double> taus;       // tau_i; one entry for Stretched
    double beta_stretch = 1.0;
    double lambda = 0.0;
    double beta_scale = 0.0; // 1/s
    double psi = 0.0;
    double t0 = 0.0;

    static KineticModelParams exp_decay(double I0, std::vector<double> A, std::vector<double> tau,
                                        double t0 = 0.0) {
        KineticModelParams m;
        m.kind = ModelKind::ExpDecay;
        m.I0 = I0;
        m.amplitudes = std::move(A);
        m.taus = std::move(tau);
        m.t0 = t0;
        return m;
    }

    static KineticModelParams exp_rise(double I0, std::vector<double> A, std::vector<double> tau,
                                       double t0 = 0.0) {
        auto m = exp_decay(I0, std::move(A), std::move(tau), t0);
        m.kind = ModelKind::ExpRise;
        return m;
    }

    static KineticModelParams stretched(double I0, double A, double tau, double beta,
                                        double t0 = 0.0) {
        KineticModelParams m;
        m.kind = ModelKind::Stretched;
        m.I0 = I0;
        m.amplitudes = {A};
        m.taus = {tau};
        m.beta_stretch = beta;
        m.t0 = t0;
        return m;
    }

    static KineticModelParams wickelgren(double lambda, double beta_scale, double psi,
                                         double t0 = 0.0) {
        KineticModelParams m;
        m.kind = ModelKind::Wickelgren;
        m.lambda = lambda;
        m.beta_scale = beta_scale;
        m.psi = psi;
        m.t0 = t0;
        return m;
    }

    std::size_t n_terms() const { return taus.size(); }

    void validate() const {
        switch (kind) {
        case ModelKind::ExpDecay:
        case ModelKind::ExpRise:
            if (taus.empty()) throw DomainError("exponential model needs at least one term");
            if (amplitudes.size() != taus.size())
                throw DomainError("amplitude and tau counts differ");
            break;
        case ModelKind::Stretched:
            if (taus.size() != 1 || amplitudes.size() != 1)
                throw DomainError("stretched model takes exactly one amplitude and one tau");
            if (!(beta_stretch > 0.0 && beta_stretch <= 1.0))
                throw DomainError("stretch exponent must lie in (0, 1]");
            break;
        case ModelKind::Wickelgren:
            if (!(beta_scale >= 0.0)) throw DomainError("Wickelgren scale beta must be >= 0");
            if (!taus.empty() || !amplitudes.empty())
                throw DomainError("Wickelgren model takes no amplitudes or taus");
            break;
        }
        for (double tau : taus)
            if (!(tau > 0.0)) throw DomainError("time constants must be > 0");
    }

    // Sort exponential terms by ascending tau, keeping amplitude pairing.
    void canonicalize() {
        std::vector<std::size_t> idx(taus.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return taus[a] < taus[b]; });
        std::vector<double> a2, t2;
        for (auto i : idx) {
            a2.push_back(amplitudes[i]);
            t2.push_back(taus[i]);
        }
        amplitudes = std::move(a2);
        taus = std::move(t2);
    }
};

inline double eval_model(const KineticModelParams& m, double t) {
    m.validate();
    if (t < m.t0) throw DomainError("model evaluated before its origin t0");
    const double s = t - m.t0;
    switch (m.kind) {
    case ModelKind::ExpDecay: {
        double y = m.I0;
        for (std::size_t i = 0; i < m.taus.size(); ++i) y += m.amplitudes[i] * std::exp(-s / m.taus[i]);
        return y;
    }
    case ModelKind::ExpRise: {
        double y = m.I0;
        for (std::size_t i = 0; i < m.taus.size(); ++i)
            y += m.amplitudes[i] * -std::expm1(-s / m.taus[i]);
        return y;
    }
    case ModelKind::Stretched:
        return m.I0 + m.amplitudes[0] * std::exp(-std::pow(s / m.taus[0], m.beta_stretch));
    case ModelKind::Wickelgren:
        return m.lambda * std::pow(1.0 + m.beta_scale * s, -m.psi);
    }
    throw DomainError("unknown model kind");
}

} // namespace scnsyn
