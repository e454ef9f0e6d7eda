#include "degenhj/peakon.hpp"

#include "degenhj/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace degenhj {

void PeakonState::validate() const {
    if (q.size() < 1 || q.size() != p.size()) throw Error(ErrorCode::Dimension, "peakon state needs N >= 1 and |q| = |p|");
    if (!q.allFinite() || !p.allFinite() || !std::isfinite(t)) {
        throw Error(ErrorCode::InvalidInput, "peakon state has non-finite entries");
    }
}

double hamiltonian(const PeakonState& s) {
    const Eigen::Index n = s.q.size();
    double h = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        h += 0.5 * s.p(i) * s.p(i);
        for (Eigen::Index j = i + 1; j < n; ++j) h += s.p(i) * s.p(j) * std::exp(-std::abs(s.q(i) - s.q(j)));
    }
    return h;
}

PeakonRhs rhs(const PeakonState& s) {
    const Eigen::Index n = s.q.size();
    PeakonRhs r{s.p, Vector::Zero(n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double diff = s.q(i) - s.q(j);
            const double e = std::exp(-std::abs(diff));
            r.dq(i) += s.p(j) * e;
            r.dq(j) += s.p(i) * e;
            // Antisymmetric pair term, so sum_i dp_i is zero to round-off.
            const double sgn = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
            const double f = s.p(i) * s.p(j) * sgn * e;
            r.dp(i) += f;
            r.dp(j) -= f;
        }
    }
    return r;
}

namespace {

double min_separation(const Vector& q) {
    double m = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        for (Eigen::Index j = i + 1; j < q.size(); ++j) m = std::min(m, std::abs(q(i) - q(j)));
    }
    return m;
}

}  // namespace

PeakonRun integrate_peakons(const PeakonState& state0, double T, double dt, std::size_t record_every) {
    state0.validate();
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidInput, "peakon dt must be positive");
    if (!(T >= 0.0) || !std::isfinite(T)) throw Error(ErrorCode::InvalidInput, "peakon T must be >= 0");
    record_every = std::max<std::size_t>(record_every, 1);
    const auto steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
    const double h = steps == 0 ? 0.0 : T / static_cast<double>(steps);

    PeakonRun run;
    run.H0 = hamiltonian(state0);
    run.momentum0 = state0.p.sum();
    run.min_separation = min_separation(state0.q);
    run.states.push_back(state0);
    PeakonState s = state0;
    for (std::size_t k = 1; k <= steps; ++k) {
        PeakonState tmp = s;
        const PeakonRhs k1 = rhs(s);
        tmp.q = s.q + 0.5 * h * k1.dq;
        tmp.p = s.p + 0.5 * h * k1.dp;
        const PeakonRhs k2 = rhs(tmp);
        tmp.q = s.q + 0.5 * h * k2.dq;
        tmp.p = s.p + 0.5 * h * k2.dp;
        const PeakonRhs k3 = rhs(tmp);
        tmp.q = s.q + h * k3.dq;
        tmp.p = s.p + h * k3.dp;
        const PeakonRhs k4 = rhs(tmp);
        s.q += h / 6.0 * (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq);
        s.p += h / 6.0 * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp);
        s.t = k == steps ? state0.t + T : state0.t + h * static_cast<double>(k);
        if (!s.q.allFinite() || !s.p.allFinite()) {
            throw PeakonDivergence("peakon state became non-finite at t = " + format_double(s.t), std::move(run));
        }
        const double H = hamiltonian(s);
        run.max_rel_energy_drift = std::max(run.max_rel_energy_drift, std::abs(H - run.H0) / std::max(run.H0, 1.0));
        run.max_momentum_drift = std::max(run.max_momentum_drift, std::abs(s.p.sum() - run.momentum0));
        run.min_separation = std::min(run.min_separation, min_separation(s.q));
        if (k % record_every == 0 || k == steps) run.states.push_back(s);
    }
    run.near_collision = run.min_separation < 1e-6;
    return run;
}

std::vector<double> peakon_field(const PeakonState& s, std::span<const double> x) {
    std::vector<double> u(x.size(), 0.0);
    for (std::size_t k = 0; k < x.size(); ++k) {
        for (Eigen::Index i = 0; i < s.q.size(); ++i) u[k] += s.p(i) * std::exp(-std::abs(x[k] - s.q(i)));
    }
    return u;
}

void write_peakon_csv(std::ostream& os, const PeakonRun& run) {
    const std::size_t n = run.states.empty() ? 0 : run.states.front().size();
    os << "t";
    for (std::size_t i = 1; i <= n; ++i) os << ",q_" << i;
    for (std::size_t i = 1; i <= n; ++i) os << ",p_" << i;
    os << ",H,sum_p\n";
    for (const auto& s : run.states) {
        os << format_double(s.t);
        for (Eigen::Index i = 0; i < s.q.size(); ++i) os << ',' << format_double(s.q(i));
        for (Eigen::Index i = 0; i < s.p.size(); ++i) os << ',' << format_double(s.p(i));
        os << ',' << format_double(hamiltonian(s)) << ',' << format_double(s.p.sum()) << '\n';
    }
}

}  // namespace degenhj
