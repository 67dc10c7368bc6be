#pragma once

#include <variant>
#include <vector>

#include "mimoid/rng.hpp"
#include "mimoid/txchain.hpp"
#include "mimoid/types.hpp"

namespace mimoid {

/// Flat Rayleigh MIMO channel, N_r x N_t, i.i.d. CN(0, 1) entries.
struct FlatChannel {
    ComplexMatrix H;

    /// Draws a full-column-rank channel (redrawn while rank-deficient at 1e-12).
    static FlatChannel random(int n_r, int n_t, RandomSource& rng);
};

/// Frequency-selective channel: independent Gaussian taps with
/// exponential power delay profile e^{-t/5}, normalized to unit total power.
struct SelectiveChannel {
    std::vector<ComplexMatrix> taps;
    std::vector<double> pdp;

    static SelectiveChannel random(int n_r, int n_t, RandomSource& rng, int n_taps = 4);
    static std::vector<double> exponential_pdp(int n_taps);

    /// Σ_t taps[t] e^{-j2πkt/N}, k 0-based.
    ComplexMatrix frequency_response(int k, int n) const;
};

struct GaussianNoise {};

/// Two-component mixture: per complex sample variance ησ² with probability ε, else σ².
struct MixtureNoise {
    double epsilon = 0.0;
    double eta = 10.0;
};

struct ImpairmentSpec {
    double zeta = 0.0;     ///< timing offset, two-path [1-ζ, ζ]
    double delta_f = 0.0;  ///< carrier offset, cycles per sample
    double f_d = 0.0;      ///< max Doppler, cycles per sample
    std::variant<GaussianNoise, MixtureNoise> noise = GaussianNoise{};

    /// Throws ArgumentError on out-of-range fields.
    void validate() const;
};

/// σ_n² = P / 10^{snr/10} with P = 1; +inf gives 0.
double noise_variance(double snr_db);

/// Adds circular complex noise of the given model in place.
void add_noise(ComplexMatrix& y, const ImpairmentSpec& imp, double sigma2, RandomSource& rng);

/// Sum-of-sinusoids Rayleigh evolution of a flat channel. Each coefficient is
/// (1/√M) Σ c_m e^{j2π f_d n cos α_m} with 16 sinusoids, the amplitudes
/// conditioned so the process passes through H0 at n = 0.
class DopplerProcess {
public:
    DopplerProcess(const ComplexMatrix& h0, double f_d, RandomSource& rng);

    ComplexMatrix at(double n) const;
    double f_d() const { return f_d_; }

    static constexpr int kSinusoids = 16;

private:
    ComplexMatrix h0_;
    double f_d_;
    std::vector<ComplexMatrix> amp_;  // per sinusoid
    std::vector<RealMatrix> freq_;    // f_d cos α_m per coefficient
};

/// Channel at index n of a fresh Doppler process started from H0.
FlatChannel doppler_evolve(const FlatChannel& h0, double f_d, double n, RandomSource& rng);

/// y(n) = H(n) s'(n) e^{j2πΔf n} + w(n), s'(n) = (1-ζ)s(n) + ζ s(n-1), s(-1) = 0.
ComplexMatrix apply_flat(const FlatChannel& h, const ComplexMatrix& tx, const ImpairmentSpec& imp,
                         double snr_db, RandomSource& rng);

/// Receiver output of an OFDM link after CP removal and FFT.
struct OfdmObservation {
    std::vector<ComplexMatrix> subcarriers;  ///< N entries, each N_r x N_b
    bool cp_too_short = false;               ///< channel memory exceeded the CP

    int n_subcarriers() const { return static_cast<int>(subcarriers.size()); }
    int n_symbols() const;
    int n_r() const;
    /// N_r x N matrix of OFDM symbol n across subcarriers.
    ComplexMatrix symbol(int n) const;
};

/// CP removal and unitary FFT of received time samples (N_r x N_b(N+ν)).
OfdmObservation ofdm_demodulate(const ComplexMatrix& r, const OfdmParams& params);

/// Time-domain received OFDM samples (N_r x N_b(N+ν)): two-path timing filter,
/// tap convolution (taps held per OFDM symbol under Doppler), carrier offset, noise.
ComplexMatrix apply_selective(const SelectiveChannel& ch, const TxFrame& frame, const ImpairmentSpec& imp,
                              double snr_db, RandomSource& rng);

/// Channel memory in samples, including one extra sample for a timing offset.
int channel_memory(const SelectiveChannel& ch, const ImpairmentSpec& imp);

OfdmObservation apply_selective_ofdm(const SelectiveChannel& ch, const TxFrame& frame, const ImpairmentSpec& imp,
                                     double snr_db, RandomSource& rng);

}  // namespace mimoid
