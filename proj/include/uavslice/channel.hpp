#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "uavslice/geometry.hpp"
#include "uavslice/params.hpp"
#include "uavslice/rng.hpp"
#include "uavslice/scenario.hpp"

namespace uavslice {

using cvec = std::vector<std::complex<double>>;

// Complex channel between one user and one UAV placement.
struct ChannelRealization {
    cvec gains;
    double distance_m = 0.0;

    double norm_sq() const {
        double s = 0.0;
        for (const auto& g : gains) s += std::norm(g);
        return s;
    }
};

// Uniform linear array steering vector toward the user, half-wavelength
// spacing: entry a = exp(-j pi a cos(phi)).
inline cvec los_steering(const Point3& user_pos, const Point3& uav_pos, int antennas) {
    double d = distance(user_pos, uav_pos);
    if (d <= 0.0) throw std::invalid_argument("los_steering: coincident positions");
    double cos_phi = (uav_pos.x - user_pos.x) / d;
    cvec v(antennas);
    for (int a = 0; a < antennas; ++a) {
        double phase = -3.14159265358979323846 * a * cos_phi;
        v[a] = std::polar(1.0, phase);
    }
    return v;
}

namespace detail {

inline ChannelRealization compose_channel(const Point3& user_pos, const Point3& uav_pos,
                                          const SystemParams& p, const cvec& nlos) {
    double d = distance(user_pos, uav_pos);
    if (d <= 0.0) throw std::invalid_argument("channel: coincident positions");
    cvec los = los_steering(user_pos, uav_pos, p.antennas_per_uav);
    double amp = std::sqrt(p.pathloss_ref_linear() * std::pow(d, -p.pathloss_exp));
    double f = p.rician_factor;
    double c_los = std::sqrt(f / (f + 1.0));
    double c_nlos = std::sqrt(1.0 / (f + 1.0));
    ChannelRealization h;
    h.distance_m = d;
    h.gains.resize(p.antennas_per_uav);
    for (int a = 0; a < p.antennas_per_uav; ++a)
        h.gains[a] = amp * (c_los * los[a] + c_nlos * nlos[a]);
    return h;
}

// circularly-symmetric complex Gaussian, unit variance per entry
inline cvec draw_nlos(Rng& rng, int antennas) {
    cvec v(antennas);
    for (int a = 0; a < antennas; ++a)
        v[a] = std::complex<double>(rng.normal(), rng.normal()) * std::sqrt(0.5);
    return v;
}

}  // namespace detail

// One-shot Rician draw; scattering components come from `rng`.
inline ChannelRealization sample_channel(const User& user, const Point3& uav_pos,
                                         const SystemParams& params, Rng& rng) {
    if (uav_pos.z <= 0.0) throw std::invalid_argument("sample_channel: UAV altitude must be positive");
    cvec nlos = detail::draw_nlos(rng, params.antennas_per_uav);
    return detail::compose_channel(lifted(user.pos, 0.0), uav_pos, params, nlos);
}

// Per-trial fading state: the scattering component of every (user, UAV) pair
// is drawn once, so channels are a deterministic function of placement while
// the solver moves UAVs around.
class ChannelModel {
public:
    ChannelModel(const Scenario& sc, uint64_t seed) : scenario_(&sc) {
        Rng rng(mix_seed(seed, 0xc4a22e1ULL));
        int n = sc.n_users(), u = sc.n_uavs();
        nlos_.reserve(static_cast<std::size_t>(n) * u);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < u; ++k)
                nlos_.push_back(detail::draw_nlos(rng, sc.params.antennas_per_uav));
    }

    const Scenario& scenario() const { return *scenario_; }

    ChannelRealization realize(int user, int uav, const Point3& uav_pos) const {
        if (uav_pos.z <= 0.0)
            throw std::invalid_argument("ChannelModel: UAV altitude must be positive");
        const auto& sc = *scenario_;
        return detail::compose_channel(sc.user_pos3(user), uav_pos, sc.params,
                                       nlos_[static_cast<std::size_t>(user) * sc.n_uavs() + uav]);
    }

private:
    const Scenario* scenario_;
    std::vector<cvec> nlos_;
};

// Materialized channels for one placement vector.
struct ChannelSet {
    std::map<std::pair<int, int>, ChannelRealization> realizations;

    const ChannelRealization& at(int user, int uav) const {
        auto it = realizations.find({user, uav});
        if (it == realizations.end())
            throw std::out_of_range("ChannelSet: missing (user, uav) realization");
        return it->second;
    }
};

// |h_rx^H w|^2 with w = h_tx / ||h_tx||
inline double cross_gain(const ChannelRealization& rx, const ChannelRealization& beam_source) {
    std::complex<double> dot(0.0, 0.0);
    double nrm = 0.0;
    for (std::size_t a = 0; a < rx.gains.size(); ++a) {
        dot += std::conj(rx.gains[a]) * beam_source.gains[a];
        nrm += std::norm(beam_source.gains[a]);
    }
    if (nrm <= 0.0) throw std::invalid_argument("cross_gain: zero beam-source channel");
    return std::norm(dot) / nrm;
}

struct LinkRate {
    double sinr = 0.0;
    double rate_bps = 0.0;
};

// Everything rate- and energy-evaluation needs to know about one UAV:
// placement, who it serves and their channels at that placement.
struct UavService {
    int uav = -1;
    Point3 placement;
    std::vector<int> content_users;  // associated content users
    std::vector<int> uplink_users;   // associated MEC users + associated active sensing users
    std::map<int, ChannelRealization> channels;

    bool has_user(int i) const { return channels.count(i) > 0; }
};

// Downlink SINR/rate of `target` under MRT beamforming. Interference comes
// from the powers granted to the other users of the same UAV; UAVs occupy
// orthogonal channels.
inline LinkRate downlink_rate(const UavService& svc, const std::map<int, double>& powers_w,
                              int target, const SystemParams& p) {
    bool assoc = false;
    for (int i : svc.content_users) assoc |= (i == target);
    if (!assoc) throw std::invalid_argument("downlink_rate: user not associated to this UAV");
    const ChannelRealization& h = svc.channels.at(target);
    auto power_of = [&](int i) {
        auto it = powers_w.find(i);
        return it == powers_w.end() ? 0.0 : it->second;
    };
    double signal = power_of(target) * h.norm_sq();
    double interf = 0.0;
    for (int i : svc.content_users) {
        if (i == target) continue;
        double pw = power_of(i);
        if (pw > 0.0) interf += pw * cross_gain(h, svc.channels.at(i));
    }
    LinkRate r;
    r.sinr = signal / (interf + p.noise_power_w);
    r.rate_bps = p.dl_bandwidth_hz * std::log2(1.0 + r.sinr);
    return r;
}

// Downlink rate the candidate would get if it were added to `svc` with power
// `cand_power_w`, existing users transmitting at `powers_w`.
inline LinkRate downlink_rate_candidate(const UavService& svc, const ChannelRealization& cand_h,
                                        double cand_power_w, const std::map<int, double>& powers_w,
                                        const SystemParams& p) {
    double signal = cand_power_w * cand_h.norm_sq();
    double interf = 0.0;
    for (int i : svc.content_users) {
        auto it = powers_w.find(i);
        double pw = it == powers_w.end() ? 0.0 : it->second;
        if (pw > 0.0) interf += pw * cross_gain(cand_h, svc.channels.at(i));
    }
    LinkRate r;
    r.sinr = signal / (interf + p.noise_power_w);
    r.rate_bps = p.dl_bandwidth_hz * std::log2(1.0 + r.sinr);
    return r;
}

// Uplink SINR/rate of `target` under MRC combining; interference from the
// other active uplink users of the same UAV.
inline LinkRate uplink_rate(const UavService& svc, int target, const SystemParams& p) {
    bool active = false;
    for (int i : svc.uplink_users) active |= (i == target);
    if (!active)
        throw std::invalid_argument("uplink_rate: user not an active uplink user of this UAV");
    const ChannelRealization& h = svc.channels.at(target);
    double signal = p.user_tx_power_w * h.norm_sq();
    double interf = 0.0;
    for (int i : svc.uplink_users) {
        if (i == target) continue;
        interf += p.user_tx_power_w * cross_gain(h, svc.channels.at(i));
    }
    LinkRate r;
    r.sinr = signal / (interf + p.noise_power_w);
    r.rate_bps = p.ul_bandwidth_hz * std::log2(1.0 + r.sinr);
    return r;
}

// Uplink rate the candidate would get if added to `svc`.
inline LinkRate uplink_rate_candidate(const UavService& svc, const ChannelRealization& cand_h,
                                      const SystemParams& p) {
    double signal = p.user_tx_power_w * cand_h.norm_sq();
    double interf = 0.0;
    for (int i : svc.uplink_users)
        interf += p.user_tx_power_w * cross_gain(cand_h, svc.channels.at(i));
    LinkRate r;
    r.sinr = signal / (interf + p.noise_power_w);
    r.rate_bps = p.ul_bandwidth_hz * std::log2(1.0 + r.sinr);
    return r;
}

}  // namespace uavslice
