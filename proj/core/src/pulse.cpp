#include "qperc/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace qperc {

namespace {
constexpr double pi = 3.14159265358979323846;
constexpr double two_pi = 2.0 * pi;
}

void PulseParams::validate() const {
    if (duration_T <= 0) throw ValidationError("pulse duration must be positive");
    if (omega0 < 0) throw ValidationError("pulse amplitude must be non-negative");
    if (family != PulseFamily::chirp && sech_window < 3.0)
        throw ValidationError("sech_window must be >= 3 (support truncation)");
}

PulseParams default_pulse_params() {
    PulseParams p;
    p.duration_T = 1.67e-6;
    p.omega_f = 0.0;
    p.omega_i = -two_pi * 80e6;
    p.omega0 = two_pi * 19.7e6;
    p.family = PulseFamily::chirp;
    return p;
}

PulseSchedule make_schedule(const PulseParams& p) {
    return p.family == PulseFamily::chirp ? chirp_schedule(p) : sech_schedule(p);
}

PulseSchedule chirp_schedule(const PulseParams& p) {
    p.validate();
    if (p.family != PulseFamily::chirp)
        throw ValidationError("chirp_schedule: params carry a sech family");
    const double T = p.duration_T, wi = p.omega_i, span = p.omega_f - p.omega_i;
    const double om0 = p.omega0;
    PulseSchedule s;
    s.t_start = 0.0;
    s.t_end = T;
    s.sample = [T, wi, span, om0](double t) {
        double sh = std::sin(pi * t / (2.0 * T));
        double w = wi + span * sh * sh;
        double a = om0 * std::sin(pi * t / T);
        return std::make_pair(w, a);
    };
    return s;
}

PulseSchedule sech_schedule(const PulseParams& p) {
    p.validate();
    if (p.family == PulseFamily::chirp)
        throw ValidationError("sech_schedule: params carry the chirp family");
    const double T = p.duration_T, wi = p.omega_i, span = p.omega_f - p.omega_i;
    const double om0 = p.omega0;
    const bool printed = (p.family == PulseFamily::sech_printed);
    PulseSchedule s;
    s.t_start = -p.sech_window * T;
    s.t_end = p.sech_window * T;
    s.sample = [T, wi, span, om0, printed](double t) {
        double th = std::tanh(pi * t / T);
        double w = printed ? wi + span * th * th : wi + span * 0.5 * (1.0 + th);
        double a = om0 / std::cosh(pi * t / T);
        return std::make_pair(w, a);
    };
    return s;
}

namespace {

double transform_core(double t_prime, double T) {
    if (!(T > 0)) throw ValidationError("time_transform: T must be positive");
    if (!(t_prime > 0.0 && t_prime < T))
        throw ValidationError("time_transform: t' must lie strictly inside (0, T)");
    return std::atanh(-std::cos(pi * t_prime / T));
}

} // namespace

double time_transform_verbatim(double t_prime, double T) {
    return transform_core(t_prime, T) * T;
}

double time_transform_scaled(double t_prime, double T) {
    return transform_core(t_prime, T) * T / pi;
}

namespace {

// Peak of the amplitude law, found on a dense grid and refined by ternary
// search (amplitude laws in scope are smooth and unimodal).
double amplitude_peak_time(const PulseSchedule& s, int coarse = 2048) {
    double best_t = s.t_start, best_a = -1.0;
    for (int i = 0; i <= coarse; ++i) {
        double t = s.t_start + (s.t_end - s.t_start) * i / coarse;
        double a = s.amplitude(t);
        if (a > best_a) { best_a = a; best_t = t; }
    }
    double h = (s.t_end - s.t_start) / coarse;
    double lo = std::max(s.t_start, best_t - h), hi = std::min(s.t_end, best_t + h);
    for (int it = 0; it < 200; ++it) {
        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (s.amplitude(m1) < s.amplitude(m2)) lo = m1; else hi = m2;
    }
    return 0.5 * (lo + hi);
}

// Invert the amplitude on a monotone branch by bisection.
double invert_amplitude(const PulseSchedule& s, double t_lo, double t_hi,
                        bool rising, double target) {
    for (int it = 0; it < 200; ++it) {
        double tm = 0.5 * (t_lo + t_hi);
        bool below = s.amplitude(tm) < target;
        if (below == rising) t_lo = tm; else t_hi = tm;
    }
    return 0.5 * (t_lo + t_hi);
}

// Distance from a fixed plane point to the curve of `b` near `seed`.
// Amplitude matching alone cannot localize the flat peak better than
// sqrt(eps), so the matched point is polished by minimizing the plane
// distance itself; the unrefined distance is kept as an upper bound.
double refined_distance(const PulseSchedule& b, double seed, double h,
                        double wa, double ya, double scale_w, double scale_a) {
    auto dist = [&](double s) {
        return std::hypot((wa - b.omega(s)) / scale_w,
                          (ya - b.amplitude(s)) / scale_a);
    };
    double lo = std::max(b.t_start, seed - h), hi = std::min(b.t_end, seed + h);
    for (int it = 0; it < 160; ++it) {
        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (dist(m1) < dist(m2)) hi = m2; else lo = m1;
    }
    return std::min(dist(0.5 * (lo + hi)), dist(seed));
}

} // namespace

double trajectory_compare(const PulseSchedule& a, const PulseSchedule& b, int n) {
    if (n < 2) throw ValidationError("trajectory_compare: need at least 2 samples");

    const double pa = amplitude_peak_time(a);
    const double pb = amplitude_peak_time(b);
    const double peak_a = a.amplitude(pa), peak_b = b.amplitude(pb);

    const double floor_a = std::max(a.amplitude(a.t_start), a.amplitude(a.t_end));
    const double floor_b = std::max(b.amplitude(b.t_start), b.amplitude(b.t_end));
    if (std::min(peak_a, peak_b) <= std::max(floor_a, floor_b))
        throw NumericalError("trajectory_compare: amplitude ranges do not overlap");

    // Normalization scales from schedule a.
    double wmin = a.omega(a.t_start), wmax = wmin;
    for (int i = 0; i <= 512; ++i) {
        double t = a.t_start + (a.t_end - a.t_start) * i / 512;
        double w = a.omega(t);
        wmin = std::min(wmin, w);
        wmax = std::max(wmax, w);
    }
    const double scale_w = (wmax > wmin) ? (wmax - wmin) : 1.0;
    const double scale_a = (peak_a > 0) ? peak_a : 1.0;

    struct Branch { double lo, hi; bool rising; };
    const Branch ba[2] = {{a.t_start, pa, true}, {pa, a.t_end, false}};
    const Branch bb[2] = {{b.t_start, pb, true}, {pb, b.t_end, false}};

    const double h = 0.02 * (b.t_end - b.t_start);
    double dev = refined_distance(b, pb, h, a.omega(pa), peak_a, scale_w, scale_a);
    for (int br = 0; br < 2; ++br) {
        const double blo = std::max(b.amplitude(bb[br].rising ? bb[br].lo : bb[br].hi),
                                    0.0);
        const double bhi = peak_b;
        for (int i = 0; i <= n; ++i) {
            double t = ba[br].lo + (ba[br].hi - ba[br].lo) * i / n;
            double wa = a.omega(t), ya = a.amplitude(t);
            double target = std::clamp(ya, blo, bhi);
            double tb = invert_amplitude(b, bb[br].lo, bb[br].hi, bb[br].rising, target);
            dev = std::max(dev, refined_distance(b, tb, h, wa, ya, scale_w, scale_a));
        }
    }
    return dev;
}

namespace {

std::string sample_csv(const PulseSchedule& s, int n, const char* header,
                       double (*pick)(const PulseSchedule&, double), double unit) {
    if (n < 2) throw ValidationError("schedule csv needs at least 2 samples");
    std::string out(header);
    out += '\n';
    char line[80];
    for (int i = 0; i < n; ++i) {
        double t = s.t_start + (s.t_end - s.t_start) * i / (n - 1);
        std::snprintf(line, sizeof line, "%.10g,%.10g\n", t * 1e9, pick(s, t) / unit);
        out += line;
    }
    return out;
}

} // namespace

std::string schedule_frequency_csv(const PulseSchedule& s, int n) {
    return sample_csv(s, n, "time_ns,freq_GHz",
                      [](const PulseSchedule& p, double t) { return p.omega(t); },
                      two_pi * 1e9);
}

std::string schedule_amplitude_csv(const PulseSchedule& s, int n) {
    return sample_csv(s, n, "time_ns,amp_MHz",
                      [](const PulseSchedule& p, double t) { return p.amplitude(t); },
                      two_pi * 1e6);
}

} // namespace qperc
