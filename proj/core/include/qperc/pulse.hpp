#pragma once

#include <functional>
#include <string>
#include <utility>

#include "qperc/errors.hpp"

namespace qperc {

enum class PulseFamily { chirp, sech_printed, sech_monotonic };

// Drive pulse parameters. All frequencies are angular (rad/s); omega_i and
// omega_f may be expressed in any fixed frame (absolute or relative to the
// qubit) as long as the consumer uses the same frame.
struct PulseParams {
    double duration_T;       // seconds
    double omega_i;          // rad/s, drive frequency at the start
    double omega_f;          // rad/s, drive frequency at the end
    double omega0;           // rad/s, peak Rabi amplitude
    PulseFamily family = PulseFamily::chirp;
    double sech_window = 4.0; // half-width of the sech support, in units of T

    void validate() const;
};

// Sampled drive: frequency and amplitude as functions of time on
// [t_start, t_end].
struct PulseSchedule {
    std::function<std::pair<double, double>(double)> sample; // t -> (omega_p, amplitude)
    double t_start = 0.0;
    double t_end = 0.0;

    double omega(double t) const { return sample(t).first; }
    double amplitude(double t) const { return sample(t).second; }
    double duration() const { return t_end - t_start; }
};

// Chirp: omega_p(t) = omega_i + (omega_f - omega_i) sin^2(pi t / 2T),
//        Omega(t)  = Omega0 sin(pi t / T), t in [0, T].
// Drive defaults: 1.67 us chirp, peak amplitude 2*pi*19.7 MHz, frequency
// sweeping 2*pi*80 MHz upward to omega_f = 0 (relative to the target qubit).
PulseParams default_pulse_params();

// Dispatches on p.family.
PulseSchedule make_schedule(const PulseParams& p);

PulseSchedule chirp_schedule(const PulseParams& p);

// Sech pulse on [-window*T, window*T]: Omega(t) = Omega0 sech(pi t / T).
// Frequency law depends on the family:
//   sech_printed:   omega_i + (omega_f - omega_i) * tanh^2(pi t / T)
//   sech_monotonic: omega_i + (omega_f - omega_i) * (1 + tanh(pi t / T)) / 2
// The printed law starts and ends at omega_f and dips to omega_i at t = 0;
// the monotonic variant sweeps omega_i -> omega_f like the chirp.
PulseSchedule sech_schedule(const PulseParams& p);

// t = artanh(-cos(pi t'/T)) * T, mapping (0, T) onto the real line.
// Rejects t' outside the open interval (endpoints map to +-infinity).
double time_transform_verbatim(double t_prime, double T);

// Same with an extra 1/pi: artanh(-cos(pi t'/T)) * T / pi. Under this
// variant the sin-shaped chirp amplitude maps exactly onto the sech
// amplitude (sech(artanh(x)) = sqrt(1 - x^2)).
double time_transform_scaled(double t_prime, double T);

// Sup distance between the (frequency, amplitude) curves of two schedules
// after monotone amplitude reparametrization, in units normalized by the
// frequency span and amplitude peak of `a`. Each schedule is split at its
// amplitude peak; points of equal amplitude on corresponding branches are
// matched, then each match is polished by a local plane-distance
// minimization (amplitude matching alone is sqrt(eps)-conditioned at the
// flat peak). Throws NumericalError if the amplitude ranges do not overlap.
double trajectory_compare(const PulseSchedule& a, const PulseSchedule& b, int n);

// Two-column CSV of the schedule sampled on n evenly spaced points:
// (time_ns, freq_GHz) or (time_ns, amp_MHz).
std::string schedule_frequency_csv(const PulseSchedule& s, int n);
std::string schedule_amplitude_csv(const PulseSchedule& s, int n);

} // namespace qperc
