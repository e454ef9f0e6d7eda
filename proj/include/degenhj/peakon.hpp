#pragma once

#include "degenhj/error.hpp"
#include "degenhj/kernel.hpp"

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

namespace degenhj {

struct PeakonState {
    Vector q;
    Vector p;
    double t = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(q.size()); }
    void validate() const;
};

struct PeakonRhs {
    Vector dq;
    Vector dp;
};

/// H(q, p) = 1/2 sum_ij p_i p_j exp(-|q_i - q_j|).
[[nodiscard]] double hamiltonian(const PeakonState& s);

/// dq_i = sum_j p_j e^{-|q_i-q_j|},  dp_i = sum_{j != i} p_i p_j sgn(q_i - q_j) e^{-|q_i-q_j|}, sgn(0) = 0.
[[nodiscard]] PeakonRhs rhs(const PeakonState& s);

struct PeakonRun {
    std::vector<PeakonState> states;
    double H0 = 0.0;
    double momentum0 = 0.0;
    double max_rel_energy_drift = 0.0;  ///< max |H(t) - H(0)| / max(H(0), 1)
    double max_momentum_drift = 0.0;    ///< max |sum p(t) - sum p(0)|
    double min_separation = 0.0;
    bool near_collision = false;        ///< min |q_i - q_j| dropped below 1e-6
};

/// Thrown when the state stops being finite; carries the trajectory up to that point.
class PeakonDivergence : public Error {
public:
    PeakonDivergence(const std::string& what, PeakonRun partial)
        : Error(ErrorCode::Divergence, what), partial_(std::move(partial)) {}
    [[nodiscard]] const PeakonRun& partial() const noexcept { return partial_; }

private:
    PeakonRun partial_;
};

/// Fixed-step RK4 from state0.t to state0.t + T; every `record_every`-th step is stored
/// (plus the last), and conservation is monitored at every step.
[[nodiscard]] PeakonRun integrate_peakons(const PeakonState& state0, double T, double dt, std::size_t record_every = 1);

/// u(x) = sum_i p_i exp(-|x - q_i|).
[[nodiscard]] std::vector<double> peakon_field(const PeakonState& s, std::span<const double> x);

/// t, q_1..q_N, p_1..p_N, H, sum_p.
void write_peakon_csv(std::ostream& os, const PeakonRun& run);

}  // namespace degenhj
