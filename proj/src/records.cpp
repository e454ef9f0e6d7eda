#include "degenhj/records.hpp"

namespace degenhj {

Record vector_record(const Vector& v) {
    Record r = Record::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) r.push_back(v(i));
    return r;
}

Record certificate_record(const WitnessCertificate& cert, const VerificationReport& report) {
    Record r;
    r["lemma"] = std::string(to_string(cert.lemma));
    r["y"] = vector_record(cert.y.coords());
    r["y_tilde"] = vector_record(cert.y_tilde.coords());
    r["distance"] = cert.distance();
    r["t"] = cert.t;
    r["t_tilde"] = cert.t_tilde;
    r["a"] = cert.a;
    r["b"] = cert.b;
    r["gamma"] = cert.gamma;
    r["L"] = cert.L;
    r["B"] = cert.B;
    r["c"] = cert.c;
    r["segments"] = cert.trajectory ? cert.trajectory->control.segments() : 0;
    r["exceeds_horizon"] = cert.exceeds_horizon;
    r["energy"] = report.energy;
    r["energy_bound"] = report.energy_bound;
    r["endpoint_error"] = report.endpoint_error;
    r["duration_error"] = report.duration_error;
    r["max_residual"] = report.max_residual;
    r["max_detour"] = report.max_detour;
    r["endpoint_ok"] = report.endpoint_ok;
    r["residual_ok"] = report.residual_ok;
    r["energy_ok"] = report.energy_ok;
    r["detour_ok"] = report.detour_ok;
    r["valid"] = report.valid();
    return r;
}

Record time_lipschitz_record(const TimeLipschitzEstimate& est) {
    Record r;
    r["k_hat"] = est.k_hat;
    r["k_bound"] = est.k_bound;
    r["samples"] = est.count;
    return r;
}

Record holder_fit_record(const HolderFit& fit) {
    Record r;
    r["flat"] = fit.flat;
    r["gamma_hat"] = fit.gamma_hat;
    r["gamma_claimed"] = fit.gamma_claimed;
    r["c_hat"] = fit.c_hat;
    r["intercept"] = fit.intercept;
    r["residual"] = fit.residual;
    r["pairs"] = fit.count;
    r["discarded"] = fit.discarded;
    r["dist_min"] = fit.dist_min;
    r["dist_max"] = fit.dist_max;
    return r;
}

}  // namespace degenhj
