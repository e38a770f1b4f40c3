#ifndef SGC_SCALING_HPP
#define SGC_SCALING_HPP

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "sgc/experiment.hpp"

namespace sgc {

inline double normal_cdf(double x) {
    return boost::math::cdf(boost::math::normal_distribution<>(), x);
}
inline double normal_quantile(double p) {
    return boost::math::quantile(boost::math::normal_distribution<>(), p);
}

struct ScalingFit {
    double alpha = 0.0;
    double beta = 0.0;          // refined shift; 0 for the plain fit
    bool refined = false;
    double rms_residual = 0.0;
    std::vector<double> z;          // per usable point
    std::vector<double> residuals;  // Phi^-1(P_B) - z/alpha
    std::size_t points_used = 0;
    std::size_t points_dropped = 0;  // P_B exactly 0 or 1
};

// Least-squares fit of Phi^-1(P_B) against z/alpha with z = sqrt(n)(p - eps_d),
// optionally with the finite-size shift z = sqrt(n)(p - eps_d + beta n^{-2/3}).
// eps_d is an input (from the density-evolution threshold), never refit from
// the same records. Needs at least 3 blocklengths and 4 parameters per length.
inline ScalingFit scaling_compare(const std::vector<ErrorRateRecord>& records,
                                  double eps_d, bool refined = false) {
    std::set<std::size_t> lengths;
    std::map<std::size_t, std::size_t> params_per_length;
    for (const auto& r : records) {
        lengths.insert(r.n);
        ++params_per_length[r.n];
    }
    if (lengths.size() < 3)
        throw std::invalid_argument("need at least 3 blocklengths");
    for (auto& [n, count] : params_per_length)
        if (count < 4)
            throw std::invalid_argument("need at least 4 parameters per blocklength");

    std::vector<double> z0, m, w;
    std::size_t dropped = 0;
    for (const auto& r : records) {
        if (r.pB <= 0.0 || r.pB >= 1.0) {
            ++dropped;
            continue;
        }
        const double sqrtn = std::sqrt(static_cast<double>(r.n));
        z0.push_back(sqrtn * (r.param - eps_d));
        m.push_back(std::pow(static_cast<double>(r.n), -1.0 / 6.0));
        w.push_back(normal_quantile(r.pB));
    }
    if (z0.empty()) throw std::invalid_argument("degenerate data: every P_B is 0 or 1");

    ScalingFit fit;
    fit.refined = refined;
    fit.points_used = z0.size();
    fit.points_dropped = dropped;

    double gamma = 0.0, delta = 0.0;  // w ~ gamma z + delta m, delta = gamma beta
    if (!refined) {
        double szz = 0.0, szw = 0.0;
        for (std::size_t i = 0; i < z0.size(); ++i) {
            szz += z0[i] * z0[i];
            szw += z0[i] * w[i];
        }
        if (szz <= 0.0) throw std::invalid_argument("degenerate abscissae");
        gamma = szw / szz;
    } else {
        double szz = 0.0, szm = 0.0, smm = 0.0, szw = 0.0, smw = 0.0;
        for (std::size_t i = 0; i < z0.size(); ++i) {
            szz += z0[i] * z0[i];
            szm += z0[i] * m[i];
            smm += m[i] * m[i];
            szw += z0[i] * w[i];
            smw += m[i] * w[i];
        }
        const double det = szz * smm - szm * szm;
        if (std::fabs(det) < 1e-12) throw std::invalid_argument("singular normal equations");
        gamma = (szw * smm - smw * szm) / det;
        delta = (szz * smw - szm * szw) / det;
    }
    if (gamma <= 0.0)
        throw std::invalid_argument("fit produced a non-positive slope; data do not "
                                    "follow an increasing error curve");
    fit.alpha = 1.0 / gamma;
    fit.beta = refined ? delta / gamma : 0.0;

    double ss = 0.0;
    for (std::size_t i = 0; i < z0.size(); ++i) {
        const double pred = gamma * z0[i] + delta * m[i];
        const double resid = w[i] - pred;
        fit.z.push_back(z0[i] + fit.beta * m[i]);
        fit.residuals.push_back(resid);
        ss += resid * resid;
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(z0.size()));
    return fit;
}

}  // namespace sgc

#endif
